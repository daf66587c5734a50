//! Commands behind the `radicals` binary. Each returns its exit code and
//! report text so that tests can drive them without a subprocess.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use radicals::formula::{
    builtin, builtin_tower, parse, parse_root_poly, relabeling_check, verify_poly_formula,
    verify_tower_formula, vieta_convert, Builtin, Document, FormalRadicalFormula, PolyRadicalFormula,
    VerificationReport,
};
use radicals::obstruction::run_ruffini;
use radicals::permchar::{character_of, render_root_of_unity};
use radicals::resolvent::abelize;
use radicals::{MPoly, Perm};

pub const EXIT_OK: i32 = 0;
/// An identity failed or a mathematical precondition does not hold.
pub const EXIT_FAIL: i32 = 1;
/// The input could not be parsed or the request is outside the supported range.
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// Report text and exit code of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(lines: Vec<String>) -> Self {
        Outcome { code: EXIT_OK, stdout: joined(lines), stderr: String::new() }
    }

    fn with_code(code: i32, lines: Vec<String>) -> Self {
        Outcome { code, stdout: joined(lines), stderr: String::new() }
    }

    fn error(code: i32, msg: impl Into<String>) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

fn joined(lines: Vec<String>) -> String {
    let mut s = lines.join("\n");
    if !s.is_empty() {
        s.push('\n');
    }
    s
}

fn parse_doc(text: &str) -> Result<Document, Outcome> {
    parse(text).map_err(|e| Outcome::error(EXIT_INPUT, format!("parse error at {e}")))
}

fn sigma_name(i: usize) -> String {
    format!("s{}", i + 1)
}

/// Refuses documents whose identity checks would expand a polynomial of
/// total degree above `cap`.
fn degree_guard(doc: &Document, cap: u32) -> Result<(), Outcome> {
    let ks: Vec<u32>;
    let ws: Vec<Option<&MPoly>> = match doc {
        Document::Scheme(_) => return Ok(()),
        Document::Poly(f) => {
            ks = f.ks.clone();
            f.witnesses.iter().map(Some).collect()
        }
        Document::Tower(f) => {
            ks = f.tower.ks();
            f.witnesses.iter().map(Option::as_ref).collect()
        }
    };
    for (j, (w, k)) in ws.iter().zip(ks).enumerate() {
        if let Some(w) = w {
            let d = w.total_degree().saturating_mul(k);
            if d > cap {
                return Err(Outcome::error(
                    EXIT_INPUT,
                    format!("level {}: f^k has degree {d}, above --max-degree {cap}", j + 1),
                ));
            }
        }
    }
    Ok(())
}

/// A seeded relabeling, never the identity when `n >= 2`.
fn random_perm(n: usize, seed: u64) -> Perm {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        images.shuffle(&mut rng);
        if n < 2 || images.iter().enumerate().any(|(i, &v)| i != v) {
            return Perm::from_images(images).expect("shuffle is a bijection");
        }
    }
}

fn report_outcome(rep: &VerificationReport, extra: Vec<String>, extra_ok: bool) -> Outcome {
    let mut lines = rep.lines();
    let result = lines.pop();
    lines.extend(extra);
    let passed = rep.passed() && extra_ok;
    if extra_ok {
        lines.extend(result);
    } else {
        lines.push("RESULT FAIL".into());
    }
    Outcome::with_code(if passed { EXIT_OK } else { EXIT_FAIL }, lines)
}

fn verify_poly(f: &PolyRadicalFormula, seed: u64) -> Outcome {
    let rep = verify_poly_formula(f);
    if !rep.passed() {
        return report_outcome(&rep, vec![], true);
    }
    let alpha = random_perm(f.n, seed);
    match relabeling_check(f, &alpha) {
        Ok(true) => report_outcome(&rep, vec![format!("PASS relabeling {alpha} (seed {seed})")], true),
        Ok(false) => report_outcome(&rep, vec![format!("FAIL relabeling {alpha} (seed {seed})")], false),
        Err(e) => report_outcome(&rep, vec![format!("FAIL relabeling {alpha}: {e}")], false),
    }
}

fn verify_tower(f: &FormalRadicalFormula) -> Outcome {
    report_outcome(&verify_tower_formula(f), vec![], true)
}

/// Checks every identity of a document: polynomial identities for a
/// polyformula, embedded identities for a tower formula, and the tower form
/// of a scheme (which carries no witnesses).
pub fn cmd_verify(text: &str, seed: u64, max_degree: u32) -> Outcome {
    let doc = match parse_doc(text) {
        Ok(d) => d,
        Err(o) => return o,
    };
    if let Err(o) = degree_guard(&doc, max_degree) {
        return o;
    }
    match &doc {
        Document::Poly(f) => verify_poly(f, seed),
        Document::Tower(f) => verify_tower(f),
        Document::Scheme(s) => match vieta_convert(s) {
            Ok(f) => verify_tower(&f),
            Err(e) => Outcome::error(EXIT_FAIL, e.to_string()),
        },
    }
}

/// Runs the even-symmetry induction on a polyformula of degree at least 5.
pub fn cmd_obstruct(text: &str, max_degree: u32) -> Outcome {
    let doc = match parse_doc(text) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let Document::Poly(f) = &doc else {
        return Outcome::error(EXIT_INPUT, format!("obstruct needs a polyformula, got a {}", doc.kind_name()));
    };
    if f.n < 5 {
        return Outcome::error(
            EXIT_INPUT,
            format!("obstruct needs n >= 5, got n = {}; use verify for small degrees", f.n),
        );
    }
    if let Err(o) = degree_guard(&doc, max_degree) {
        return o;
    }
    match run_ruffini(f) {
        Ok(rep) => Outcome::ok(rep.lines()),
        Err(e) => Outcome::error(EXIT_FAIL, e.to_string()),
    }
}

/// Character values of `f` on the given even permutations, or on `(1 2 m)`
/// when none are given.
pub fn cmd_character(f: &str, q: u32, perms: &[String], n: Option<usize>) -> Outcome {
    let f = match parse_root_poly(f, n) {
        Ok(f) => f,
        Err(e) => return Outcome::error(EXIT_INPUT, format!("parse error at {e}")),
    };
    let n = f.nvars();
    let perms: Vec<Perm> = if perms.is_empty() {
        (3..=n).map(|m| Perm::cycle(n, &[1, 2, m]).expect("valid cycle")).collect()
    } else {
        match perms.iter().map(|p| Perm::parse_with_degree(p, n)).collect() {
            Ok(ps) => ps,
            Err(e) => return Outcome::error(EXIT_INPUT, e.to_string()),
        }
    };
    if perms.is_empty() {
        return Outcome::error(EXIT_INPUT, "no even permutations to evaluate for n < 3");
    }
    let mut lines = vec![format!("CHARACTER n={n} q={q} f = {f}")];
    for alpha in &perms {
        match character_of(&f, q, alpha) {
            Ok(v) => lines.push(format!("chi{alpha} = {}", render_root_of_unity(&v, q))),
            Err(e) => {
                lines.push(format!("chi{alpha}: {e}"));
                return Outcome::with_code(EXIT_FAIL, lines);
            }
        }
    }
    Outcome::ok(lines)
}

/// Rewrites a symmetric polynomial in the roots in terms of `s1..sn`.
pub fn cmd_symmetrize(f: &str, n: Option<usize>, max_degree: u32) -> Outcome {
    let f = match parse_root_poly(f, n) {
        Ok(f) => f,
        Err(e) => return Outcome::error(EXIT_INPUT, format!("parse error at {e}")),
    };
    if f.total_degree() > max_degree {
        return Outcome::error(EXIT_INPUT, format!("degree {} is above --max-degree {max_degree}", f.total_degree()));
    }
    match f.symmetrize() {
        Ok(g) => Outcome::ok(vec![g.display_with(&sigma_name).to_string()]),
        Err(e) => Outcome::error(EXIT_FAIL, e.to_string()),
    }
}

/// Polynomializes a tower formula (or a polyformula through its tower form)
/// and prints the step report as comments followed by the new document.
pub fn cmd_abelize(text: &str) -> Outcome {
    let doc = match parse_doc(text) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let tower = match &doc {
        Document::Tower(f) => f.clone(),
        Document::Poly(f) => match FormalRadicalFormula::from_poly_formula(f) {
            Ok(t) => t,
            Err(e) => return Outcome::error(EXIT_FAIL, e.to_string()),
        },
        Document::Scheme(_) => {
            return Outcome::error(EXIT_INPUT, "abelize needs witnesses; a scheme has none");
        }
    };
    match abelize(&tower) {
        Ok(rep) => {
            let mut lines: Vec<String> = rep.lines().into_iter().map(|l| format!("# {l}")).collect();
            let out = match &rep.poly {
                Some(p) => Document::Poly(p.clone()),
                None => Document::Tower(rep.result.clone()),
            };
            lines.push(out.serialize().trim_end().to_string());
            Outcome::ok(lines)
        }
        Err(e) => Outcome::error(EXIT_FAIL, e.to_string()),
    }
}

/// The named built-in formula as a document.
pub fn cmd_builtin(name: &str, tower: bool) -> Outcome {
    let b: Builtin = match name.parse() {
        Ok(b) => b,
        Err(e) => return Outcome::error(EXIT_INPUT, e),
    };
    let doc = if tower { Document::Tower(builtin_tower(b)) } else { Document::Poly(builtin(b)) };
    Outcome { code: EXIT_OK, stdout: doc.serialize(), stderr: String::new() }
}

