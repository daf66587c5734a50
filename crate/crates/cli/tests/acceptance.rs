//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion with
//! its elapsed time and limit; exits nonzero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use radicals::formula::{builtin, builtin_tower, verify_poly_formula, Builtin, Document};
use radicals::multipoly::{elem_syms, vandermonde, Monomial};
use radicals::obstruction::{keeping_symmetry, run_ruffini, Diagnosis, KeepingSymmetry};
use radicals::permchar::{commutator_closure, generated_group, verify_hom_trivial, HomTriviality};
use radicals::resolvent::{abelize, build_r, telescoping_average};
use radicals::{Attestation, CycScalar, MPoly, Perm, TowerElem, TowerSpec};
use radicals_cli::{cmd_verify, DEFAULT_MAX_DEGREE, EXIT_OK};

const SEED: u64 = 0x5eed;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: i64) -> CycScalar {
    CycScalar::from_integer(v)
}

/// `x1 + w x2 + w^2 x3` and `x1 + w^2 x2 + w x3`, built directly.
fn lagrange_pair() -> (MPoly, MPoly) {
    let w = CycScalar::epsilon(3);
    let x = |i| MPoly::var(3, i);
    let u = &(&x(0) + &x(1).scale(&w)) + &x(2).scale(&w.pow(2));
    let v = &(&x(0) + &x(1).scale(&w.pow(2))) + &x(2).scale(&w);
    (u, v)
}

fn random_poly(rng: &mut StdRng, nvars: usize, weights: &[u32], max_weight: u32, terms: usize) -> MPoly {
    let mut acc = MPoly::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        let mut budget = rng.gen_range(0..=max_weight);
        for _ in 0..8 {
            let i = rng.gen_range(0..nvars);
            if weights[i] <= budget {
                exps[i] += 1;
                budget -= weights[i];
            }
        }
        let c = rng.gen_range(-5i64..=5);
        acc = &acc + &MPoly::monomial(nvars, Monomial(exps), int(c));
    }
    acc
}

fn random_elem(rng: &mut StdRng, spec: &TowerSpec, j: usize) -> TowerElem {
    let n = spec.n();
    let weights: Vec<u32> = (1..=n as u32).collect();
    let y = spec.gen(j).unwrap();
    let mut acc = spec.zero(j);
    let mut power = spec.one(j);
    for _ in 0..spec.k(j) {
        let c = spec.from_sigma_poly(random_poly(rng, n, &weights, 3, 3));
        acc = spec.add(&acc, &spec.mul(&spec.lift(&c, j), &power));
        power = spec.mul(&power, &y);
    }
    acc
}

fn c1_quadratic() -> Check {
    let rep = verify_poly_formula(&builtin(Builtin::Degree2));
    ensure(rep.passed(), || rep.to_string())?;
    let labels: Vec<&str> = rep.checks.iter().map(|c| c.label.as_str()).collect();
    ensure(labels == ["level 1: f1^2 = p0", "target: x1 = p1"], || format!("{labels:?}"))?;
    Ok("f1^2 = s1^2 - 4*s2 and x1 = (s1 + f1)/2 hold exactly".into())
}

fn c2_cubic() -> Check {
    let f = builtin(Builtin::Degree3);
    let rep = verify_poly_formula(&f);
    ensure(rep.passed(), || rep.to_string())?;
    let (u, v) = lagrange_pair();
    let (u3, v3) = (u.pow(3), v.pow(3));
    let sig = elem_syms(3);
    let disc = f.ps[0].compose(&sig, 3).map_err(|e| e.to_string())?;
    ensure(disc == (&u3 - &v3).pow(2), || "p0 does not expand to (u^3 - v^3)^2".into())?;
    // 2 p1 - f1 is the symmetric part u^3 + v^3
    let f1 = MPoly::var(4, 3);
    let sum = (&f.ps[1].scale(&int(2)) - &f1).with_nvars(3).map_err(|e| e.to_string())?;
    let sum = sum.compose(&sig, 3).map_err(|e| e.to_string())?;
    ensure(sum == &u3 + &v3, || "p1 does not expand to (u^3 + v^3 + f1)/2".into())?;
    Ok(format!("{} identities exact; sigma coefficients re-expanded", rep.checks.len()))
}

fn c3_hom_trivial() -> Check {
    for q in [2, 3, 5, 7] {
        match verify_hom_trivial(5, q).map_err(|e| e.to_string())? {
            HomTriviality::Certified(r) => {
                ensure(r.generator_route_holds(), || format!("q={q}: generator identities fail"))?;
                ensure(r.oracle_route_holds() == Some(true), || format!("q={q}: perfectness oracle fails"))?;
            }
            HomTriviality::Counterexample(c) => return Err(format!("q={q}: counterexample {c:?}")),
        }
    }
    let gens = Perm::an_generators(5).map_err(|e| e.to_string())?;
    let a5 = generated_group(&gens, 1000).map_err(|e| e.to_string())?;
    let closure = commutator_closure(&gens).map_err(|e| e.to_string())?;
    ensure(a5.len() == 60, || format!("|A5| = {}", a5.len()))?;
    ensure(closure == a5, || format!("commutator closure has {} elements", closure.len()))?;
    Ok("q in {2,3,5,7} by both routes; [A5, A5] = A5 with 60 elements".into())
}

fn c4_keeping_symmetry() -> Check {
    let delta = vandermonde(5);
    match keeping_symmetry(&delta, 2).map_err(|e| e.to_string())? {
        KeepingSymmetry::Certificate(c) => ensure(c.even_symmetric, || "certificate without even symmetry".into())?,
        KeepingSymmetry::Counterexample(c) => return Err(format!("n=5 counterexample {c:?}")),
    }
    let (u, _) = lagrange_pair();
    let KeepingSymmetry::Counterexample(chi) = keeping_symmetry(&u, 3).map_err(|e| e.to_string())? else {
        return Err("n=3 resolvent got a certificate".into());
    };
    let c123 = Perm::cycle(3, &[1, 2, 3]).unwrap();
    ensure(chi.value(&c123) == Some(&CycScalar::epsilon(3)), || format!("chi((1 2 3)) = {:?}", chi.value(&c123)))?;
    Ok("certificate for Vandermonde at n=5; chi((1 2 3)) = w(3) at n=3".into())
}

fn c5_inverses() -> Check {
    let mut rng = StdRng::seed_from_u64(SEED);
    let s = |n: usize, i: usize| MPoly::var(n, i);
    let mut quad = TowerSpec::new(2);
    quad.push_level(2, quad.from_sigma_poly(&s(2, 0).pow(2) - &s(2, 1).scale(&int(4))), Attestation::Unknown)
        .unwrap();
    let (u, v) = lagrange_pair();
    let disc = (&u.pow(3) - &v.pow(3)).pow(2).symmetrize().map_err(|e| e.to_string())?;
    let mut cub = TowerSpec::new(3);
    cub.push_level(3, cub.from_sigma_poly(disc), Attestation::Unknown).unwrap();
    let mut count = 0;
    for spec in [&mut quad, &mut cub] {
        spec.attest_verifiable();
        ensure(spec.levels()[0].attestation == Attestation::Verified, || "radicand not certified".into())?;
        let mut done = 0;
        while done < 100 {
            let e = random_elem(&mut rng, spec, 1);
            if e.is_zero() {
                continue;
            }
            let inv = spec.inverse(&e).map_err(|err| err.to_string())?;
            ensure(spec.mul(&e, &inv) == spec.one(1), || format!("u * u^-1 != 1 for {e}"))?;
            done += 1;
        }
        count += done;
    }
    Ok(format!("{count} random elements, u * inverse(u) = 1 exactly"))
}

fn poly_mul(spec: &TowerSpec, a: &[TowerElem], b: &[TowerElem], level: usize) -> Vec<TowerElem> {
    let mut out = vec![spec.zero(level); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = spec.add(&out[i + j], &spec.mul(x, y));
        }
    }
    out
}

fn c6_annihilation() -> Check {
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    let s1 = MPoly::var(2, 0);
    let s2 = MPoly::var(2, 1);
    let mut classified = 0;
    for k in [2u32, 3] {
        let mut spec = TowerSpec::new(2);
        let rho = spec.from_sigma_poly(&s1.pow(2) - &s2.scale(&int(4)));
        spec.push_level(k, rho.clone(), Attestation::Unknown).unwrap();
        spec.attest_verifiable();
        let mut modulus = vec![spec.zero(0); k as usize + 1];
        modulus[0] = rho.neg();
        modulus[k as usize] = spec.one(0);
        let rep = spec.check_annihilation(&modulus, 1).map_err(|e| e.to_string())?;
        ensure(rep.annihilated && rep.conjugates.iter().all(|c| c.1), || format!("k={k}: t^k - rho not annihilated"))?;
        for trial in 0..20 {
            let m: Vec<TowerElem> =
                (0..rng.gen_range(1..=3)).map(|_| spec.from_sigma_poly(random_poly(&mut rng, 2, &[1, 2], 3, 2))).collect();
            let m = if m.iter().all(TowerElem::is_zero) { vec![spec.one(0)] } else { m };
            let mut q = poly_mul(&spec, &m, &modulus, 0);
            let with_rest = trial % 2 == 1;
            if with_rest {
                let mut r: Vec<TowerElem> = (0..k)
                    .map(|_| spec.from_sigma_poly(random_poly(&mut rng, 2, &[1, 2], 2, 2)))
                    .collect();
                if r.iter().all(TowerElem::is_zero) {
                    r[0] = spec.one(0);
                }
                for (i, c) in r.iter().enumerate() {
                    q[i] = spec.add(&q[i], c);
                }
            }
            let rep = spec.check_annihilation(&q, 1).map_err(|e| e.to_string())?;
            let all = rep.conjugates.iter().all(|c| c.1);
            let none = rep.conjugates.iter().all(|c| !c.1);
            let ok = if with_rest { !rep.annihilated && none } else { rep.annihilated && all };
            ensure(ok, || format!("k={k} trial {trial}: misclassified (remainder {} terms)", rep.remainder.len()))?;
            classified += 1;
        }
    }
    Ok(format!("R = 0 for t^k - rho at k in {{2,3}}; {classified} random Q classified"))
}

fn c7_last_radical() -> Check {
    let rep = abelize(&builtin_tower(Builtin::Degree2)).map_err(|e| e.to_string())?;
    let step = &rep.steps[0];
    let diff = &MPoly::var(2, 0) - &MPoly::var(2, 1);
    ensure(step.u == "1/2", || format!("recorded unit {}", step.u))?;
    ensure(step.witness == diff.scale(&CycScalar::from_ratio(1, 2)), || format!("witness {}", step.witness))?;
    let doc = match &rep.poly {
        Some(p) => Document::Poly(p.clone()),
        None => return Err("result is not a polynomial formula".into()),
    };
    let out = cmd_verify(&doc.serialize(), 0, DEFAULT_MAX_DEGREE);
    ensure(out.code == EXIT_OK, || out.stdout.clone())?;

    let mut rng = StdRng::seed_from_u64(SEED + 7);
    let sig = |i| MPoly::var(2, i);
    for sample in 0..100 {
        let k = [2u32, 3, 5][sample % 3];
        let mut spec = TowerSpec::new(2);
        spec.push_level(k, spec.from_sigma_poly(sig(0)), Attestation::Unknown).unwrap();
        let z = spec.gen(1).unwrap();
        let mut q = spec.zero(1);
        let mut power = spec.one(1);
        for i in 0..k {
            let c = if i == 1 {
                spec.one(0)
            } else {
                spec.from_sigma_poly(random_poly(&mut rng, 2, &[1, 2], 3, 3))
            };
            q = spec.add(&q, &spec.mul(&spec.lift(&c, 1), &power));
            power = spec.mul(&power, &z);
        }
        ensure(telescoping_average(&spec, &q, 1) == z, || format!("sample {sample} (k={k}): average != z"))?;
    }
    Ok("witness (1/2)(x1 - x2), verify exit 0; 100 telescoping samples".into())
}

fn c8_ruffini_corpus() -> Check {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/quintic");
    let mut files: Vec<_> = fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    ensure(files.len() >= 10, || format!("only {} fixtures", files.len()))?;
    let (mut failures, mut contradictions) = (0, 0);
    for path in &files {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let Document::Poly(f) = radicals::formula::parse(&text).map_err(|e| e.to_string())? else {
            return Err(format!("{}: not a polyformula", path.display()));
        };
        ensure(f.n == 5, || format!("{}: n = {}", path.display(), f.n))?;
        match run_ruffini(&f).map_err(|e| format!("{}: {e}", path.display()))?.diagnosis {
            Diagnosis::ChainFailure { .. } => failures += 1,
            Diagnosis::TargetContradiction => contradictions += 1,
        }
    }
    Ok(format!("{} candidates: {failures} failed identities, {contradictions} contradictions", files.len()))
}

fn c9_symmetric_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(SEED + 9);
    for sample in 0..200 {
        let n = 2 + sample % 3;
        let weights: Vec<u32> = (1..=n as u32).collect();
        let g = random_poly(&mut rng, n, &weights, 6, 4);
        let f = g.compose(&elem_syms(n), n).map_err(|e| e.to_string())?;
        ensure(f.total_degree() <= 6, || format!("sample {sample}: degree {}", f.total_degree()))?;
        let back = f.symmetrize().map_err(|e| format!("sample {sample}: {e}"))?;
        ensure(back == g, || format!("sample {sample}: symmetrize({f}) = {back}, expected {g}"))?;
        let again = back.compose(&elem_syms(n), n).map_err(|e| e.to_string())?;
        ensure(again == f, || format!("sample {sample}: re-expansion differs"))?;
    }
    Ok("200 random symmetric polynomials, n in 2..4, degree <= 6".into())
}

fn c10_build_r() -> Check {
    let x1 = MPoly::var(2, 0);
    let x2 = MPoly::var(2, 1);
    let f = &x1 - &x2;
    // independent expansion of (z - f)(z - f(x2, x1)) before any symmetrization
    let g = f.permute_vars(&Perm::transposition(2, 0, 1)).map_err(|e| e.to_string())?;
    let raw = [&f * &g, -(&f + &g)];
    ensure(raw.iter().all(MPoly::is_symmetric), || "raw coefficients not symmetric".into())?;
    let r = build_r(&f).map_err(|e| e.to_string())?;
    let (s1, s2) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let p0 = &s1.pow(2) - &s2.scale(&int(4));
    ensure(r == vec![-&p0, MPoly::zero(2), MPoly::one(2)], || format!("R coefficients {r:?}"))?;
    Ok("R(z) = z^2 - (s1^2 - 4*s2)".into())
}

/// Number, name, time limit in seconds, check.
type Criterion = (u32, &'static str, f64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "quadratic formula identities", 0.1, c1_quadratic),
        (2, "cubic chain identities", 1.0, c2_cubic),
        (3, "homomorphisms A5 -> mu_q trivial", 1.0, c3_hom_trivial),
        (4, "keeping symmetry and its n=3 boundary", 1.0, c4_keeping_symmetry),
        (5, "inverses in F_1", 10.0, c5_inverses),
        (6, "annihilation by t^k - rho", 1.0, c6_annihilation),
        (7, "last radical round trip and telescoping", 10.0, c7_last_radical),
        (8, "obstruction diagnosis over the n=5 corpus", 30.0, c8_ruffini_corpus),
        (9, "symmetrize against expansion", 30.0, c9_symmetric_oracle),
        (10, "build_R at n=2", 0.1, c10_build_r),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let over = start.elapsed() > Duration::from_secs_f64(limit);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} criterion {id:>2} {name} [{secs:.3}s / limit {limit}s, exact]: {detail}");
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
