//! Radical formulas in three forms, their text format, and verification.
//!
//! * [`SolvabilityScheme`]: `p_j` in the coefficients `a0..a{n-1}` and radical
//!   placeholders `z1..zj`.
//! * [`PolyRadicalFormula`]: `p_j` in `s1..sn`, `f1..fj`, with polynomial
//!   witnesses `f_j(x1..xn)`.
//! * [`FormalRadicalFormula`]: a [`TowerSpec`] plus a target at the top level,
//!   with optional witnesses per level.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! polyformula n=2 s=1
//! k 2
//! p0 = s1^2 - 4*s2
//! p1 = 1/2*s1 + 1/2*f1
//! witness 1 = x1 - x2
//! ```

mod builtin;
pub mod expr;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::multipoly::{elem_syms, MPoly, PolyError};
use crate::permchar::{is_prime, Perm};
use crate::tower::{Attestation, RatFunc, TowerElem, TowerError, TowerSpec};

pub use builtin::{builtin, builtin_tower, Builtin};
pub use expr::{max_var_index, parse_expr, parse_root_poly, Algebra, ParseError, PolyAlgebra, Pos, TowerAlgebra, VarFamily};

use expr::Cursor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("radical exponent k{level} = {k} is not prime")]
    NotPrime { level: usize, k: u32 },
    #[error("radical exponent k{level} is zero")]
    ZeroExponent { level: usize },
    #[error("malformed formula: {0}")]
    Invalid(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `p_j` over `a0..a{n-1}, z1..zj`; no witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityScheme {
    pub n: usize,
    pub ks: Vec<u32>,
    pub ps: Vec<MPoly>,
}

/// `p_j` over `s1..sn, f1..fj` with witnesses `f_j` over `x1..xn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRadicalFormula {
    pub n: usize,
    pub ks: Vec<u32>,
    pub ps: Vec<MPoly>,
    pub witnesses: Vec<MPoly>,
}

/// A tower with a distinguished top-level element standing for `x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalRadicalFormula {
    pub tower: TowerSpec,
    pub target: TowerElem,
    pub witnesses: Vec<Option<MPoly>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Scheme(SolvabilityScheme),
    Poly(PolyRadicalFormula),
    Tower(FormalRadicalFormula),
}

fn check_ks(ks: &[u32], primes: bool) -> Result<(), FormulaError> {
    for (i, &k) in ks.iter().enumerate() {
        if k == 0 {
            return Err(FormulaError::ZeroExponent { level: i + 1 });
        }
        if primes && !is_prime(k) {
            return Err(FormulaError::NotPrime { level: i + 1, k });
        }
    }
    Ok(())
}

fn check_arity(ps: &[MPoly], n: usize, s: usize) -> Result<(), FormulaError> {
    if ps.len() != s + 1 {
        return Err(FormulaError::Invalid(format!("expected {} polynomials p0..p{s}, got {}", s + 1, ps.len())));
    }
    for (j, p) in ps.iter().enumerate() {
        if p.nvars() != n + j {
            return Err(FormulaError::Invalid(format!("p{j} has {} variables, expected {}", p.nvars(), n + j)));
        }
    }
    Ok(())
}

impl SolvabilityScheme {
    pub fn new(n: usize, ks: Vec<u32>, ps: Vec<MPoly>) -> Result<Self, FormulaError> {
        let f = SolvabilityScheme { n, ks, ps };
        f.validate()?;
        Ok(f)
    }

    pub fn s(&self) -> usize {
        self.ks.len()
    }

    pub fn validate(&self) -> Result<(), FormulaError> {
        if self.n == 0 {
            return Err(FormulaError::Invalid("degree n must be positive".into()));
        }
        check_ks(&self.ks, false)?;
        check_arity(&self.ps, self.n, self.s())
    }
}

impl PolyRadicalFormula {
    pub fn new(n: usize, ks: Vec<u32>, ps: Vec<MPoly>, witnesses: Vec<MPoly>) -> Result<Self, FormulaError> {
        let f = PolyRadicalFormula { n, ks, ps, witnesses };
        f.validate()?;
        Ok(f)
    }

    pub fn s(&self) -> usize {
        self.ks.len()
    }

    pub fn validate(&self) -> Result<(), FormulaError> {
        if self.n == 0 {
            return Err(FormulaError::Invalid("degree n must be positive".into()));
        }
        check_ks(&self.ks, false)?;
        check_arity(&self.ps, self.n, self.s())?;
        if self.witnesses.len() != self.s() {
            return Err(FormulaError::Invalid(format!(
                "expected {} witnesses, got {}",
                self.s(),
                self.witnesses.len()
            )));
        }
        if let Some((j, w)) = self.witnesses.iter().enumerate().find(|(_, w)| w.nvars() != self.n) {
            return Err(FormulaError::Invalid(format!(
                "witness {} has {} variables, expected {}",
                j + 1,
                w.nvars(),
                self.n
            )));
        }
        Ok(())
    }

    /// `ps[j]` evaluated at `s_i = sigma_i(x)`, `f_i = witness_i`.
    pub fn evaluate_p(&self, j: usize) -> Result<MPoly, PolyError> {
        self.evaluate_p_with(j, &self.witnesses)
    }

    fn evaluate_p_with(&self, j: usize, witnesses: &[MPoly]) -> Result<MPoly, PolyError> {
        let mut images = elem_syms(self.n);
        images.extend(witnesses[..j].iter().cloned());
        self.ps[j].compose(&images, self.n)
    }
}

impl FormalRadicalFormula {
    pub fn new(tower: TowerSpec, target: TowerElem, witnesses: Vec<Option<MPoly>>) -> Result<Self, FormulaError> {
        let f = FormalRadicalFormula { tower, target, witnesses };
        f.validate()?;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.tower.n()
    }

    pub fn s(&self) -> usize {
        self.tower.height()
    }

    pub fn validate(&self) -> Result<(), FormulaError> {
        if self.n() == 0 {
            return Err(FormulaError::Invalid("degree n must be positive".into()));
        }
        if self.target.level() != self.s() {
            return Err(FormulaError::Invalid(format!(
                "target has level {}, expected {}",
                self.target.level(),
                self.s()
            )));
        }
        if self.witnesses.len() != self.s() {
            return Err(FormulaError::Invalid(format!(
                "expected {} witness slots, got {}",
                self.s(),
                self.witnesses.len()
            )));
        }
        Ok(())
    }

    /// All witnesses, if every level has one.
    pub fn full_witnesses(&self) -> Option<Vec<MPoly>> {
        self.witnesses.iter().cloned().collect()
    }

    /// A copy whose levels carry every non-power attestation that can be verified.
    pub fn attested(&self) -> FormalRadicalFormula {
        let mut f = self.clone();
        f.tower.attest_verifiable();
        f
    }

    /// The polynomial form, when every witness is present and every element
    /// has constant denominators.
    pub fn to_poly_formula(&self) -> Option<PolyRadicalFormula> {
        let n = self.n();
        let witnesses = self.full_witnesses()?;
        let mut ps = Vec::with_capacity(self.s() + 1);
        for j in 1..=self.s() {
            ps.push(tower_elem_to_poly(self.tower.rho(j), n, n + j - 1)?);
        }
        ps.push(tower_elem_to_poly(&self.target, n, n + self.s())?);
        PolyRadicalFormula::new(n, self.tower.ks(), ps, witnesses).ok()
    }

    pub fn from_poly_formula(f: &PolyRadicalFormula) -> Result<Self, FormulaError> {
        check_ks(&f.ks, true)?;
        let n = f.n;
        let mut tower = TowerSpec::new(n);
        let mut images: Vec<TowerElem> = (1..=n).map(|i| tower.sigma(i)).collect();
        for (j, &k) in f.ks.iter().enumerate() {
            let rho = eval_in_tower(&tower, &f.ps[j], &images);
            tower.push_level(k, rho, Attestation::Unknown)?;
            images.push(tower.gen(j + 1)?);
        }
        let target = tower.lift(&eval_in_tower(&tower, &f.ps[f.s()], &images), f.s());
        Self::new(tower, target, f.witnesses.iter().cloned().map(Some).collect())
    }
}

/// Converts a tower element to a polynomial in `s1..sn, f1..f{level}` when
/// all of its level-0 parts have constant denominators.
pub fn tower_elem_to_poly(e: &TowerElem, n: usize, nvars: usize) -> Option<MPoly> {
    match e {
        TowerElem::Base(r) => {
            r.den().as_constant()?;
            r.as_poly()?.with_nvars(nvars).ok()
        }
        TowerElem::Ext { level, coeffs } => {
            let y = MPoly::var(nvars, n + level - 1);
            let mut acc = MPoly::zero(nvars);
            for c in coeffs.iter().rev() {
                acc = &(&acc * &y) + &tower_elem_to_poly(c, n, nvars)?;
            }
            Some(acc)
        }
    }
}

/// Evaluates a polynomial at tower elements, one per variable.
pub fn eval_in_tower(spec: &TowerSpec, p: &MPoly, images: &[TowerElem]) -> TowerElem {
    let top = images.iter().map(TowerElem::level).max().unwrap_or(0);
    let mut powers: BTreeMap<(usize, u32), TowerElem> = BTreeMap::new();
    let mut acc = spec.zero(top);
    for (m, c) in p.terms() {
        let mut t = spec.constant(c.clone(), 0);
        for (v, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = powers.entry((v, e)).or_insert_with(|| spec.pow(&images[v], e)).clone();
            t = spec.mul(&t, &pw);
        }
        acc = spec.add(&acc, &t);
    }
    acc
}

/// Outcome of one identity in a verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub label: String,
    pub holds: bool,
    /// Rendering of `rhs - lhs` (or an error) when the identity fails.
    pub detail: Option<String>,
}

impl IdentityCheck {
    fn pass(label: String) -> Self {
        IdentityCheck { label, holds: true, detail: None }
    }

    fn fail(label: String, detail: String) -> Self {
        IdentityCheck { label, holds: false, detail: Some(detail) }
    }

    fn compare(label: String, lhs: &MPoly, rhs: &MPoly) -> Self {
        if lhs == rhs {
            Self::pass(label)
        } else {
            Self::fail(label, describe_difference(&(rhs - lhs)))
        }
    }
}

const INLINE_TERMS: usize = 8;

fn x_name(i: usize) -> String {
    format!("x{}", i + 1)
}

fn describe_difference(d: &MPoly) -> String {
    let lead = d
        .leading_term()
        .map(|(m, c)| MPoly::monomial(d.nvars(), m.clone(), c.clone()))
        .expect("nonzero difference");
    if d.len() <= INLINE_TERMS {
        format!("difference {}, leading term {}", d.display_with(&x_name), lead.display_with(&x_name))
    } else {
        format!("difference has {} terms, leading term {}", d.len(), lead.display_with(&x_name))
    }
}

fn describe_rat_difference(d: &RatFunc) -> String {
    if d.den().as_constant().is_some() {
        if let Some(p) = d.as_poly() {
            return describe_difference(&p);
        }
    }
    let lead = d
        .num()
        .leading_term()
        .map(|(m, c)| MPoly::monomial(d.nvars(), m.clone(), c.clone()))
        .expect("nonzero difference");
    format!(
        "difference is a fraction with {} numerator terms, leading numerator term {}",
        d.num().len(),
        lead.display_with(&x_name)
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<IdentityCheck>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.holds)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|c| match &c.detail {
                None => format!("PASS {}", c.label),
                Some(d) => format!("FAIL {}: {d}", c.label),
            })
            .collect();
        out.extend(self.notes.iter().map(|n| format!("NOTE {n}")));
        out.push(if self.passed() { "RESULT PASS".into() } else { "RESULT FAIL".into() });
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Checks `f_j^k_j = p_{j-1}(sigma, f_1..f_{j-1})` for each level and
/// `x1 = p_s(sigma, f_1..f_s)` as polynomial identities in `x1..xn`.
pub fn verify_poly_formula(f: &PolyRadicalFormula) -> VerificationReport {
    let mut report = VerificationReport::default();
    if let Err(e) = f.validate() {
        report.checks.push(IdentityCheck::fail("structure".into(), e.to_string()));
        return report;
    }
    let s = f.s();
    for j in 1..=s {
        let label = format!("level {j}: f{j}^{} = p{}", f.ks[j - 1], j - 1);
        let check = match f.evaluate_p(j - 1) {
            Ok(rhs) => IdentityCheck::compare(label, &f.witnesses[j - 1].pow(f.ks[j - 1]), &rhs),
            Err(e) => IdentityCheck::fail(label, e.to_string()),
        };
        report.checks.push(check);
    }
    let label = format!("target: x1 = p{s}");
    let check = match f.evaluate_p(s) {
        Ok(rhs) => IdentityCheck::compare(label, &MPoly::var(f.n, 0), &rhs),
        Err(e) => IdentityCheck::fail(label, e.to_string()),
    };
    report.checks.push(check);
    report
}

/// Checks every witnessed level and the target of a tower formula after
/// embedding into rational functions of the roots.
pub fn verify_tower_formula(f: &FormalRadicalFormula) -> VerificationReport {
    let mut report = VerificationReport::default();
    if let Err(e) = f.validate() {
        report.checks.push(IdentityCheck::fail("structure".into(), e.to_string()));
        return report;
    }
    let tower = &f.tower;
    let mut ws: Vec<MPoly> = Vec::new();
    for j in 1..=f.s() {
        let label = format!("level {j}: y{j}^{} = p{}", tower.k(j), j - 1);
        let Some(w) = &f.witnesses[j - 1] else {
            report.checks.push(IdentityCheck::fail(label, format!("no witness for y{j}")));
            return report;
        };
        let check = match tower.embed(tower.rho(j), &ws) {
            Ok(rhs) => {
                let lhs = RatFunc::from_poly(w.pow(tower.k(j)));
                if lhs == rhs {
                    IdentityCheck::pass(label)
                } else {
                    IdentityCheck::fail(label, describe_rat_difference(&rhs.sub(&lhs)))
                }
            }
            Err(e) => IdentityCheck::fail(label, e.to_string()),
        };
        report.checks.push(check);
        ws.push(w.clone());
    }
    let label = "target: x1 = target".to_string();
    let check = match tower.embed(&f.target, &ws) {
        Ok(rhs) => {
            let lhs = RatFunc::from_poly(MPoly::var(f.n(), 0));
            if lhs == rhs {
                IdentityCheck::pass(label)
            } else {
                IdentityCheck::fail(label, describe_rat_difference(&rhs.sub(&lhs)))
            }
        }
        Err(e) => IdentityCheck::fail(label, e.to_string()),
    };
    report.checks.push(check);
    for j in 1..=f.s() {
        let a = tower.levels()[j - 1].attestation;
        if a == Attestation::Asserted {
            report.notes.push(format!("level {j} non-power property asserted, not verified"));
        }
    }
    report
}

/// Re-checks the target identity with the roots relabeled by `alpha`:
/// `x_alpha(1) = p_s(sigma, f_1(x_alpha)..f_s(x_alpha))`.
pub fn relabeling_check(f: &PolyRadicalFormula, alpha: &Perm) -> Result<bool, FormulaError> {
    let ws: Vec<MPoly> = f.witnesses.iter().map(|w| w.permute_vars(alpha)).collect::<Result<_, _>>()?;
    let rhs = f.evaluate_p_with(f.s(), &ws)?;
    Ok(rhs == MPoly::var(f.n, alpha.apply(0)))
}

/// Substitutes `a_j = (-1)^(n-j) sigma_(n-j)` and reads `z_j` as the tower generator `y_j`.
pub fn vieta_convert(s: &SolvabilityScheme) -> Result<FormalRadicalFormula, FormulaError> {
    s.validate()?;
    check_ks(&s.ks, true)?;
    let n = s.n;
    let mut tower = TowerSpec::new(n);
    let mut images: Vec<TowerElem> = (0..n)
        .map(|j| {
            let e = tower.sigma(n - j);
            if (n - j) % 2 == 1 {
                e.neg()
            } else {
                e
            }
        })
        .collect();
    for (j, &k) in s.ks.iter().enumerate() {
        let rho = eval_in_tower(&tower, &s.ps[j], &images);
        tower.push_level(k, rho, Attestation::Unknown)?;
        images.push(tower.gen(j + 1)?);
    }
    let target = tower.lift(&eval_in_tower(&tower, &s.ps[s.s()], &images), s.s());
    FormalRadicalFormula::new(tower, target, vec![None; s.s()])
}

fn prime_factors(mut k: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        while k.is_multiple_of(d) {
            out.push(d);
            k /= d;
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

type Chain = (Vec<u32>, Vec<MPoly>, Option<Vec<MPoly>>);

/// Splits every composite exponent into ascending prime radicals. For
/// `k = q_1..q_m` the new radicals are `g_i = f^(q_{i+1}..q_m)`, so
/// `g_1^q_1 = p` and `g_i^q_i = g_{i-1}`. Exponent 1 is left in place.
fn factor_chain(n: usize, ks: &[u32], ps: &[MPoly], witnesses: Option<&[MPoly]>) -> Result<Chain, FormulaError> {
    check_ks(ks, false)?;
    let plan: Vec<Vec<u32>> = ks
        .iter()
        .map(|&k| if k == 1 { vec![1] } else { prime_factors(k) })
        .collect();
    let total = n + plan.iter().map(Vec::len).sum::<usize>();
    let mut images: Vec<MPoly> = (0..n).map(|i| MPoly::var(total, i)).collect();
    let mut new_ks = Vec::new();
    let mut new_ps = Vec::new();
    let mut new_ws = witnesses.map(|_| Vec::new());
    for (j, qs) in plan.iter().enumerate() {
        let mut prev = ps[j].compose(&images, total)?;
        for (i, &q) in qs.iter().enumerate() {
            new_ps.push(prev.with_nvars(n + new_ks.len())?);
            new_ks.push(q);
            prev = MPoly::var(total, n + new_ks.len() - 1);
            if let (Some(out), Some(ws)) = (new_ws.as_mut(), witnesses) {
                let e: u32 = qs[i + 1..].iter().product();
                out.push(ws[j].pow(e));
            }
        }
        images.push(prev);
    }
    new_ps.push(ps[ks.len()].compose(&images, total)?.with_nvars(n + new_ks.len())?);
    Ok((new_ks, new_ps, new_ws))
}

/// Replaces each composite radical exponent by a chain of prime radicals,
/// smallest prime first. Tower documents already have prime exponents.
pub fn factor_radicals(doc: &Document) -> Result<Document, FormulaError> {
    match doc {
        Document::Scheme(s) => {
            s.validate()?;
            let (ks, ps, _) = factor_chain(s.n, &s.ks, &s.ps, None)?;
            Ok(Document::Scheme(SolvabilityScheme::new(s.n, ks, ps)?))
        }
        Document::Poly(f) => {
            f.validate()?;
            let (ks, ps, ws) = factor_chain(f.n, &f.ks, &f.ps, Some(&f.witnesses))?;
            Ok(Document::Poly(PolyRadicalFormula::new(f.n, ks, ps, ws.expect("witnesses"))?))
        }
        Document::Tower(t) => Ok(Document::Tower(t.clone())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Scheme,
    Poly,
    Tower,
}

struct RawLine {
    expr: expr::Expr,
    pos: Pos,
}

fn split_indexed(name: &str) -> Option<(&str, u32)> {
    let k = name.find(|c: char| c.is_ascii_digit())?;
    if k == 0 || !name[k..].chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((&name[..k], name[k..].parse().ok()?))
}

/// Keyword with an index either attached (`p0`) or separate (`p 0`).
fn keyword_index(c: &mut Cursor, word: &str, kw: &str) -> Result<Option<(u32, Pos)>, ParseError> {
    if word == kw {
        return c.small_int().map(Some);
    }
    match split_indexed(word) {
        Some((w, i)) if w == kw => Ok(Some((i, c.pos()))),
        _ => Ok(None),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(Kind, usize, usize), ParseError> {
    let mut c = Cursor::new(line, lineno)?;
    let (word, pos) = c.ident().ok_or_else(|| ParseError::new(c.pos(), "expected a document header"))?;
    let kind = match word.as_str() {
        "scheme" => Kind::Scheme,
        "polyformula" => Kind::Poly,
        "towerformula" => Kind::Tower,
        _ => {
            return Err(ParseError::new(
                pos,
                format!("unknown document kind '{word}' (expected scheme, polyformula or towerformula)"),
            ))
        }
    };
    let mut field = |name: &str| -> Result<(usize, Pos), ParseError> {
        let p = c.pos();
        match c.ident() {
            Some((w, _)) if w == name => {}
            _ => return Err(ParseError::new(p, format!("expected '{name}='"))),
        }
        c.expect_eq()?;
        let (v, vpos) = c.small_int()?;
        Ok((v as usize, vpos))
    };
    let (n, npos) = field("n")?;
    let (s, _) = field("s")?;
    c.expect_end()?;
    if n == 0 {
        return Err(ParseError::new(npos, "degree n must be positive"));
    }
    Ok((kind, n, s))
}

/// Parses a document of any kind.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut header: Option<(Kind, usize, usize, Pos)> = None;
    let mut ks: Option<(Vec<u32>, Vec<Pos>)> = None;
    let mut ps: BTreeMap<u32, RawLine> = BTreeMap::new();
    let mut witnesses: BTreeMap<u32, RawLine> = BTreeMap::new();
    let mut target: Option<RawLine> = None;
    let mut asserted: BTreeSet<u32> = BTreeSet::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some((kind, _, s, _)) = header else {
            let (kind, n, s) = parse_header(line, lineno)?;
            header = Some((kind, n, s, Pos { line: lineno, col: 1 }));
            continue;
        };
        let mut c = Cursor::new(line, lineno)?;
        let start = c.pos();
        let (word, wpos) = c.ident().ok_or_else(|| ParseError::new(start, "expected a keyword"))?;
        if word == "k" {
            if ks.is_some() {
                return Err(ParseError::new(wpos, "duplicate 'k' line"));
            }
            let mut vals = Vec::new();
            let mut poss = Vec::new();
            while !c.at_end() {
                let (v, p) = c.small_int()?;
                if v == 0 {
                    return Err(ParseError::new(p, "radical exponent must be positive"));
                }
                if kind == Kind::Tower && !is_prime(v) {
                    return Err(ParseError::new(p, format!("radical exponent {v} is not prime")));
                }
                vals.push(v);
                poss.push(p);
            }
            if vals.len() != s {
                return Err(ParseError::new(wpos, format!("expected {s} radical exponents, got {}", vals.len())));
            }
            ks = Some((vals, poss));
        } else if word == "target" {
            if kind != Kind::Tower {
                return Err(ParseError::new(wpos, "'target' is only allowed in a towerformula"));
            }
            if target.is_some() {
                return Err(ParseError::new(wpos, "duplicate 'target' line"));
            }
            c.expect_eq()?;
            let e = c.expr()?;
            c.expect_end()?;
            target = Some(RawLine { expr: e, pos: wpos });
        } else if word == "assert" {
            let p = c.pos();
            if !c.eat_minus() || !matches!(c.ident(), Some((w, _)) if w == "nonpower") {
                return Err(ParseError::new(p, "expected 'assert-nonpower'"));
            }
            if kind != Kind::Tower {
                return Err(ParseError::new(wpos, "'assert-nonpower' is only allowed in a towerformula"));
            }
            let (j, jpos) = c.small_int()?;
            c.expect_end()?;
            if j == 0 || j as usize > s {
                return Err(ParseError::new(jpos, format!("level {j} out of range 1..{s}")));
            }
            asserted.insert(j);
        } else if let Some((j, jpos)) = keyword_index(&mut c, &word, "witness")? {
            if kind == Kind::Scheme {
                return Err(ParseError::new(wpos, "a scheme has no witnesses"));
            }
            if j == 0 || j as usize > s {
                return Err(ParseError::new(jpos, format!("witness index {j} out of range 1..{s}")));
            }
            c.expect_eq()?;
            let e = c.expr()?;
            c.expect_end()?;
            if witnesses.insert(j, RawLine { expr: e, pos: wpos }).is_some() {
                return Err(ParseError::new(wpos, format!("duplicate witness {j}")));
            }
        } else if let Some((j, jpos)) = keyword_index(&mut c, &word, "p")? {
            let max = if kind == Kind::Tower { s.checked_sub(1) } else { Some(s) };
            if max.is_none_or(|m| j as usize > m) {
                let msg = match max {
                    Some(m) => format!("p{j} out of range p0..p{m}"),
                    None => "a towerformula with s=0 has no p lines".into(),
                };
                return Err(ParseError::new(jpos, msg));
            }
            c.expect_eq()?;
            let e = c.expr()?;
            c.expect_end()?;
            if ps.insert(j, RawLine { expr: e, pos: wpos }).is_some() {
                return Err(ParseError::new(wpos, format!("duplicate p{j}")));
            }
        } else {
            return Err(ParseError::new(wpos, format!("unknown keyword '{word}'")));
        }
    }

    let (kind, n, s, hpos) = header.ok_or_else(|| ParseError::new(Pos { line: 1, col: 1 }, "empty document"))?;
    let ks = match ks {
        Some((k, _)) => k,
        None if s == 0 => Vec::new(),
        None => return Err(ParseError::new(hpos, "missing 'k' line")),
    };
    let need_ps = if kind == Kind::Tower { s } else { s + 1 };
    if let Some(j) = (0..need_ps as u32).find(|j| !ps.contains_key(j)) {
        return Err(ParseError::new(hpos, format!("missing p{j}")));
    }

    match kind {
        Kind::Scheme => {
            let mut out = Vec::new();
            for j in 0..=s {
                let alg = PolyAlgebra::new(
                    n + j,
                    vec![
                        VarFamily::new("a", 0, 0, n),
                        VarFamily::new("z", 1, n, j),
                        VarFamily::new("f", 1, n, j),
                    ],
                );
                out.push(expr::eval(&ps[&(j as u32)].expr, &alg)?);
            }
            SolvabilityScheme::new(n, ks, out)
                .map(Document::Scheme)
                .map_err(|e| ParseError::new(hpos, e.to_string()))
        }
        Kind::Poly => {
            if let Some(j) = (1..=s as u32).find(|j| !witnesses.contains_key(j)) {
                return Err(ParseError::new(hpos, format!("missing witness {j}")));
            }
            let mut out = Vec::new();
            for j in 0..=s {
                let alg = PolyAlgebra::new(
                    n + j,
                    vec![VarFamily::new("s", 1, 0, n), VarFamily::new("f", 1, n, j)],
                );
                out.push(expr::eval(&ps[&(j as u32)].expr, &alg)?);
            }
            let walg = PolyAlgebra::new(n, vec![VarFamily::new("x", 1, 0, n)]);
            let ws = witnesses
                .values()
                .map(|w| expr::eval(&w.expr, &walg))
                .collect::<Result<Vec<_>, _>>()?;
            PolyRadicalFormula::new(n, ks, out, ws)
                .map(Document::Poly)
                .map_err(|e| ParseError::new(hpos, e.to_string()))
        }
        Kind::Tower => {
            let target = target.ok_or_else(|| ParseError::new(hpos, "missing 'target' line"))?;
            let mut declared = TowerSpec::new(n);
            let mut working = TowerSpec::new(n);
            for j in 0..s {
                let alg = TowerAlgebra { spec: &working, max_level: j };
                let line = &ps[&(j as u32)];
                let rho = expr::eval(&line.expr, &alg)?;
                let a = if asserted.contains(&(j as u32 + 1)) { Attestation::Asserted } else { Attestation::Unknown };
                declared
                    .push_level(ks[j], rho.clone(), a)
                    .map_err(|e| ParseError::new(line.pos, e.to_string()))?;
                working
                    .push_level(ks[j], rho, a)
                    .map_err(|e| ParseError::new(line.pos, e.to_string()))?;
                working.attest_verifiable();
            }
            let alg = TowerAlgebra { spec: &working, max_level: s };
            let t = expr::eval(&target.expr, &alg)?;
            let t = working.lift(&t, s);
            let walg = PolyAlgebra::new(n, vec![VarFamily::new("x", 1, 0, n)]);
            let mut ws = vec![None; s];
            for (&j, w) in &witnesses {
                ws[j as usize - 1] = Some(expr::eval(&w.expr, &walg)?);
            }
            FormalRadicalFormula::new(declared, t, ws)
                .map(Document::Tower)
                .map_err(|e| ParseError::new(hpos, e.to_string()))
        }
    }
}

fn s_or_f(n: usize) -> impl Fn(usize) -> String {
    move |i| if i < n { format!("s{}", i + 1) } else { format!("f{}", i - n + 1) }
}

fn a_or_z(n: usize) -> impl Fn(usize) -> String {
    move |i| if i < n { format!("a{i}") } else { format!("z{}", i - n + 1) }
}

fn header_line(kind: &str, n: usize, s: usize, ks: &[u32], out: &mut String) {
    out.push_str(&format!("{kind} n={n} s={s}\n"));
    if s > 0 {
        let k: Vec<String> = ks.iter().map(u32::to_string).collect();
        out.push_str(&format!("k {}\n", k.join(" ")));
    }
}

impl Document {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Document::Scheme(_) => "scheme",
            Document::Poly(_) => "polyformula",
            Document::Tower(_) => "towerformula",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Document::Scheme(s) => s.n,
            Document::Poly(f) => f.n,
            Document::Tower(t) => t.n(),
        }
    }

    /// Canonical text; `parse` inverts it.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        match self {
            Document::Scheme(sc) => {
                header_line("scheme", sc.n, sc.s(), &sc.ks, &mut out);
                let names = a_or_z(sc.n);
                for (j, p) in sc.ps.iter().enumerate() {
                    out.push_str(&format!("p{j} = {}\n", p.display_with(&names)));
                }
            }
            Document::Poly(f) => {
                header_line("polyformula", f.n, f.s(), &f.ks, &mut out);
                let names = s_or_f(f.n);
                for (j, p) in f.ps.iter().enumerate() {
                    out.push_str(&format!("p{j} = {}\n", p.display_with(&names)));
                }
                for (j, w) in f.witnesses.iter().enumerate() {
                    out.push_str(&format!("witness {} = {w}\n", j + 1));
                }
            }
            Document::Tower(t) => {
                header_line("towerformula", t.n(), t.s(), &t.tower.ks(), &mut out);
                for j in 1..=t.s() {
                    out.push_str(&format!("p{} = {}\n", j - 1, t.tower.rho(j).lowered()));
                }
                out.push_str(&format!("target = {}\n", t.target.lowered()));
                for (j, w) in t.witnesses.iter().enumerate() {
                    if let Some(w) = w {
                        out.push_str(&format!("witness {} = {w}\n", j + 1));
                    }
                }
                for (j, l) in t.tower.levels().iter().enumerate() {
                    if l.attestation == Attestation::Asserted {
                        out.push_str(&format!("assert-nonpower {}\n", j + 1));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
