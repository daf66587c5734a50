//! Extraction of the last radical, the root-of-unity average that recovers
//! it, and the downward rewrite that makes every tower generator a
//! polynomial in the roots.

use thiserror::Error;

use crate::cyclotomic::CycScalar;
use crate::formula::{verify_tower_formula, FormalRadicalFormula, FormulaError, PolyRadicalFormula};
use crate::multipoly::{MPoly, PolyError};
use crate::permchar::Perm;
use crate::tower::{NonPower, RatFunc, TowerElem, TowerError, TowerSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolventError {
    #[error("element lies below level {level}: no positive power of y{level} occurs (drop the last level)")]
    NoRadicalTerm { level: usize },
    #[error("coefficient of z in q is {found}, expected 1")]
    UnitCoefficient { found: String },
    #[error("root-of-unity average at level {level} does not return z")]
    Telescoping { level: usize },
    #[error("conjugate {m} of q at level {level} is not a polynomial in the roots")]
    NonPolynomialConjugate { level: usize, m: u32 },
    #[error("new witness for level {level} is not a polynomial in the roots")]
    NonPolynomialWitness { level: usize },
    #[error("level {level} has no witness")]
    MissingWitness { level: usize },
    #[error("radicand of level {level} is a power after all: {root}")]
    AttestationRefuted { level: usize, root: String },
    #[error("input formula does not verify: {0}")]
    InputFails(String),
    #[error("rewritten formula does not verify after level {level}: {detail}")]
    StepFails { level: usize, detail: String },
    #[error("build_R is capped at n <= {cap}, got {n}")]
    DegreeCap { n: usize, cap: usize },
    #[error("coefficient of z^{power} in R is not symmetric")]
    NotSymmetric { power: usize },
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Data of the substitution `z = u * y_j^l` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastRadicalData {
    pub level: usize,
    pub k: u32,
    pub l: u32,
    /// Coefficient of `y_j^l`, at level `j - 1`.
    pub u: TowerElem,
    /// `u^-1`.
    pub v: TowerElem,
    pub a: i64,
    pub b: i64,
    /// `u^k * p_{j-1}^l`, the radicand of `z`.
    pub new_rho: TowerElem,
    /// Levels `1..j`, with level `j` generated by `z`.
    pub spec: TowerSpec,
    /// Image of the old `y_j`: `z^b v^b p_{j-1}^a`.
    pub y_image: TowerElem,
    /// The rewritten element as a polynomial in `z`; its `z` coefficient is 1.
    pub q: TowerElem,
}

/// `a * k + b * l = 1` with `|b|` minimal, ties broken toward positive `b`.
pub fn bezout_min_b(k: u32, l: u32) -> (i64, i64) {
    let (k, l) = (k as i64, l as i64);
    let b0 = (1..k).find(|b| (b * l).rem_euclid(k) == 1).unwrap_or(1 % k.max(1));
    let b = if (k - b0) < b0 { b0 - k } else { b0 };
    let a = (1 - b * l) / k;
    debug_assert_eq!(a * k + b * l, 1);
    (a, b)
}

fn signed_pow(spec: &TowerSpec, e: &TowerElem, inv: impl FnOnce() -> Result<TowerElem, TowerError>, k: i64) -> Result<TowerElem, TowerError> {
    if k >= 0 {
        Ok(spec.pow(e, k as u32))
    } else {
        Ok(spec.pow(&inv()?, k.unsigned_abs() as u32))
    }
}

/// Substitutes `z = u * y_j^l` into `t`, an element of level at most `j`,
/// where `l` is the least positive exponent with nonzero coefficient `u`.
pub fn extract_at(spec: &TowerSpec, j: usize, t: &TowerElem) -> Result<LastRadicalData, ResolventError> {
    let lvl = spec.level(j)?.clone();
    if !lvl.attestation.allows_inverse() {
        return Err(TowerError::NotAttested(j).into());
    }
    if t.level() > j {
        return Err(TowerError::LevelMismatch { max: j, got: t.level() }.into());
    }
    let t = spec.lift(t, j);
    let coeffs = t.coeffs().to_vec();
    let l = (1..coeffs.len())
        .find(|&i| !coeffs[i].is_zero())
        .ok_or(ResolventError::NoRadicalTerm { level: j })?;
    let u = coeffs[l].clone();
    let v = spec.inverse(&u)?;
    let k = lvl.k;
    let (a, b) = bezout_min_b(k, l as u32);
    let p = lvl.rho.clone();
    let new_rho = spec.mul(&spec.pow(&u, k), &spec.pow(&p, l as u32));

    let mut nspec = spec.truncated(j - 1);
    nspec.push_level(k, new_rho.clone(), lvl.attestation)?;
    let z = nspec.gen(j)?;
    let zb = if b >= 0 {
        nspec.pow(&z, b as u32)
    } else {
        let r = b.rem_euclid(k as i64);
        let t = (r - b) / k as i64;
        let inv_rho = nspec.inverse(&new_rho)?;
        nspec.mul(&nspec.pow(&z, r as u32), &nspec.pow(&inv_rho, t as u32))
    };
    let vb = signed_pow(&nspec, &v, || Ok(u.clone()), b)?;
    let pa = signed_pow(&nspec, &p, || nspec.inverse(&p), a)?;
    let y_image = nspec.mul(&nspec.mul(&zb, &vb), &pa);
    let q = nspec.eval_univariate(&coeffs, &y_image);
    let c1 = &q.coeffs()[1];
    if *c1 != nspec.one(j - 1) {
        return Err(ResolventError::UnitCoefficient { found: c1.to_string() });
    }
    Ok(LastRadicalData { level: j, k, l: l as u32, u, v, a, b, new_rho, spec: nspec, y_image, q })
}

/// Extraction for the top level and the target of a formula.
pub fn extract_last_radical(f: &FormalRadicalFormula) -> Result<LastRadicalData, ResolventError> {
    if f.s() == 0 {
        return Err(TowerError::NoSuchLevel(0).into());
    }
    let f = f.attested();
    extract_at(&f.tower, f.s(), &f.target)
}

/// `(1/k) sum_m w^-m q(w^m z)`, computed in the tower.
pub fn telescoping_average(spec: &TowerSpec, q: &TowerElem, j: usize) -> TowerElem {
    let k = spec.k(j);
    let w = CycScalar::epsilon(k);
    let mut acc = spec.zero(j);
    for m in 0..k {
        let term = spec.conjugate(q, j, m).scale(&w.pow((k - m) % k));
        acc = spec.add(&acc, &term);
    }
    acc.scale(&CycScalar::from_ratio(1, k as i64))
}

/// The conjugates of `q` and their average as polynomials in the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventAverage {
    pub conjugates: Vec<MPoly>,
    pub average: MPoly,
}

/// Embeds every conjugate `q(w^m z)` with the given witnesses (the last one
/// realizing `z`), requires each to be a polynomial, and checks that their
/// weighted average is `z` both in the tower and after embedding.
pub fn resolvent_average(d: &LastRadicalData, witnesses: &[MPoly]) -> Result<ResolventAverage, ResolventError> {
    let j = d.level;
    let spec = &d.spec;
    if telescoping_average(spec, &d.q, j) != spec.gen(j)? {
        return Err(ResolventError::Telescoping { level: j });
    }
    let w = CycScalar::epsilon(d.k);
    let n = spec.n();
    let mut conjugates = Vec::new();
    let mut avg = MPoly::zero(n);
    for m in 0..d.k {
        let c = spec.conjugate(&d.q, j, m);
        let val = spec
            .embed(&c, witnesses)?
            .as_poly()
            .ok_or(ResolventError::NonPolynomialConjugate { level: j, m })?;
        avg = &avg + &val.scale(&w.pow((d.k - m) % d.k));
        conjugates.push(val);
    }
    let avg = avg.scale(&CycScalar::from_ratio(1, d.k as i64));
    let z = witnesses.get(j - 1).ok_or(ResolventError::MissingWitness { level: j })?;
    if &avg != z {
        return Err(ResolventError::Telescoping { level: j });
    }
    Ok(ResolventAverage { conjugates, average: avg })
}

/// `R(z) = prod over all relabelings alpha of (z - f(x_alpha))`, ascending
/// coefficients in the elementary symmetric variables.
pub fn build_r(f: &MPoly) -> Result<Vec<MPoly>, ResolventError> {
    const CAP: usize = 4;
    let n = f.nvars();
    if n > CAP {
        return Err(ResolventError::DegreeCap { n, cap: CAP });
    }
    let mut prod = vec![MPoly::one(n)];
    for alpha in all_perms(n) {
        let root = f.permute_vars(&alpha)?;
        let mut next = vec![MPoly::zero(n); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &root);
        }
        prod = next;
    }
    prod.iter()
        .enumerate()
        .map(|(i, c)| {
            if !c.is_symmetric() {
                return Err(ResolventError::NotSymmetric { power: i });
            }
            Ok(c.symmetrize()?)
        })
        .collect()
}

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(Perm::from_images(prefix.clone()).expect("bijection"));
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The image of an old element under `y_j -> y_image`, higher generators kept.
fn substitute_level(new: &TowerSpec, j: usize, y_image: &TowerElem, e: &TowerElem) -> TowerElem {
    let m = e.level();
    if m < j {
        e.clone()
    } else if m == j {
        new.eval_univariate(e.coeffs(), y_image)
    } else {
        let cs: Vec<TowerElem> = e.coeffs().iter().map(|c| substitute_level(new, j, y_image, c)).collect();
        new.eval_univariate(&cs, &new.gen(m).expect("level built"))
    }
}

/// One step of the downward rewrite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelStep {
    pub level: usize,
    pub k: u32,
    pub l: u32,
    pub a: i64,
    pub b: i64,
    pub u: String,
    pub new_rho: String,
    pub witness: MPoly,
    pub conjugates: Vec<MPoly>,
}

impl AbelStep {
    pub fn lines(&self) -> Vec<String> {
        let j = self.level;
        let mut out = vec![
            format!("STEP level {j}: l = {}, u = {}", self.l, self.u),
            format!("STEP level {j}: bezout {}*{} + {}*{} = 1", self.a, self.k, self.b, self.l),
            format!("STEP level {j}: z{j}^{} = {}", self.k, self.new_rho),
            format!("STEP level {j}: witness z{j} = {}", self.witness),
        ];
        for (m, c) in self.conjugates.iter().enumerate() {
            out.push(format!("STEP level {j}: q(w^{m} z) = {c}"));
        }
        out.push(format!("STEP level {j}: average of conjugates = z{j}"));
        out
    }
}

/// Rewrites level `j` of `f` so that its generator becomes `u * y_j^l`,
/// where the element examined is the target (top level) or the radicand of
/// level `j + 1`. All witnesses must be present.
pub fn abel_polynomialize(f: &FormalRadicalFormula, j: usize) -> Result<(FormalRadicalFormula, AbelStep), ResolventError> {
    let declared_levels = f.tower.levels().to_vec();
    let f = f.attested();
    let s = f.s();
    let ws = f.full_witnesses().ok_or_else(|| {
        let level = f.witnesses.iter().position(Option::is_none).map_or(0, |i| i + 1);
        ResolventError::MissingWitness { level }
    })?;
    let old = &f.tower;
    let t = if j == s { f.target.clone() } else { old.rho(j + 1).clone() };
    let d = extract_at(old, j, &t)?;

    let mut nspec = d.spec.clone();
    if let NonPower::Refuted(root) = nspec.nonpower_check(j) {
        return Err(ResolventError::AttestationRefuted { level: j, root: root.to_string() });
    }
    for i in j + 1..=s {
        let lvl = &old.levels()[i - 1];
        let rho = substitute_level(&nspec, j, &d.y_image, &lvl.rho);
        nspec.push_level(lvl.k, rho, lvl.attestation)?;
    }
    let target = nspec.lift(&substitute_level(&nspec, j, &d.y_image, &f.target), s);

    let u_emb = old.embed(&d.u, &ws[..j - 1])?;
    let z_w = u_emb
        .mul(&RatFunc::from_poly(ws[j - 1].pow(d.l)))
        .as_poly()
        .ok_or(ResolventError::NonPolynomialWitness { level: j })?;
    let mut new_ws = ws.clone();
    new_ws[j - 1] = z_w.clone();

    let avg = resolvent_average(&d, &new_ws[..j])?;

    // keep the declared attestations; verified ones are re-derived on demand
    let mut declared = nspec.clone();
    for (i, lvl) in declared_levels.iter().enumerate() {
        declared.set_attestation(i + 1, lvl.attestation)?;
    }
    let out = FormalRadicalFormula::new(declared, target, new_ws.into_iter().map(Some).collect())?;
    let rep = verify_tower_formula(&out);
    if let Some(fail) = rep.first_failure() {
        return Err(ResolventError::StepFails {
            level: j,
            detail: format!("{}: {}", fail.label, fail.detail.clone().unwrap_or_default()),
        });
    }
    let step = AbelStep {
        level: j,
        k: d.k,
        l: d.l,
        a: d.a,
        b: d.b,
        u: d.u.to_string(),
        new_rho: d.new_rho.lowered().to_string(),
        witness: z_w,
        conjugates: avg.conjugates,
    };
    Ok((out, step))
}

/// The full downward induction `j = s, ..., 1`, with every intermediate formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelReport {
    pub steps: Vec<AbelStep>,
    pub intermediates: Vec<FormalRadicalFormula>,
    pub result: FormalRadicalFormula,
    /// The result in polynomial form, when its elements have constant denominators.
    pub poly: Option<PolyRadicalFormula>,
}

impl AbelReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("ABELIZE s={}", self.result.s())];
        for s in &self.steps {
            out.extend(s.lines());
        }
        out.push(match &self.poly {
            Some(_) => "RESULT polynomial radical formula".into(),
            None => "RESULT tower formula with polynomial witnesses (some coefficients have denominators)".into(),
        });
        out
    }
}

pub fn abelize(f: &FormalRadicalFormula) -> Result<AbelReport, ResolventError> {
    let f = f.clone();
    if let Some(level) = f.witnesses.iter().position(Option::is_none) {
        return Err(ResolventError::MissingWitness { level: level + 1 });
    }
    let attested = f.attested();
    for j in 1..=f.s() {
        if let NonPower::Refuted(root) = attested.tower.nonpower_check(j) {
            return Err(ResolventError::AttestationRefuted { level: j, root: root.to_string() });
        }
    }
    let rep = verify_tower_formula(&f);
    if let Some(fail) = rep.first_failure() {
        return Err(ResolventError::InputFails(format!(
            "{}: {}",
            fail.label,
            fail.detail.clone().unwrap_or_default()
        )));
    }
    let mut cur = f;
    let mut steps = Vec::new();
    let mut intermediates = vec![cur.clone()];
    for j in (1..=cur.s()).rev() {
        let (next, step) = abel_polynomialize(&cur, j)?;
        steps.push(step);
        intermediates.push(next.clone());
        cur = next;
    }
    let poly = cur.to_poly_formula();
    Ok(AbelReport { steps, intermediates, result: cur, poly })
}
