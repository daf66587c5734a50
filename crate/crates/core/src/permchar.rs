//! Permutations of `{1..n}`, the alternating group, and the character map
//! `alpha -> chi(alpha)` defined by `f(x) = chi(alpha) * f(x_alpha)`.
//!
//! Composition follows `(alpha beta)(i) = alpha(beta(i))`, so `(12)(23) = (123)`.
//! With this convention `permute_vars(permute_vars(f, a), b) = permute_vars(f, b a)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclotomic::CycScalar;
use crate::multipoly::{MPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("images do not form a permutation of 1..{0}")]
    NotBijection(usize),
    #[error("permutation degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("the alternating group needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error("group exceeds the enumeration cap of {0} elements")]
    SizeCap(usize),
    #[error("cannot parse cycle notation {0:?}")]
    Parse(String),
    #[error("the zero polynomial has no character")]
    ZeroPolynomial,
    #[error("permutation {0} is odd")]
    OddPermutation(String),
    #[error("f^{q} is not even-symmetric")]
    PowerNotEvenSymmetric { q: u32 },
    #[error("no {q}-th root of unity c satisfies f = c * f(x_alpha) for alpha = {alpha}")]
    NoCharacterValue { q: u32, alpha: String },
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("hypothesis n >= 5 fails for n = {n}, and there is no counterexample character for q = {q}")]
    HypothesisFails { n: usize, q: u32 },
    #[error("character is not multiplicative on {0}")]
    NotMultiplicative(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other { Parity::Even } else { Parity::Odd }
    }
}

/// Permutation stored as 0-based images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijection(n));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Cycle given by 1-based points, e.g. `cycle(5, &[1, 2, 3])`.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = HashSet::new();
        for &p in points {
            if p == 0 || p > n || !seen.insert(p) {
                return Err(PermError::NotBijection(n));
            }
        }
        for (idx, &p) in points.iter().enumerate() {
            let next = points[(idx + 1) % points.len()];
            images[p - 1] = next - 1;
        }
        Ok(Perm { images })
    }

    /// Transposition of the 0-based points `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Perm { images }
    }

    /// Parses cycle notation and extends it to degree `n`.
    pub fn parse_with_degree(s: &str, n: usize) -> Result<Self, PermError> {
        let p: Perm = s.parse()?;
        p.extended(n)
    }

    pub fn extended(&self, n: usize) -> Result<Self, PermError> {
        if n < self.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), n));
        }
        let mut images = self.images.clone();
        images.extend(self.degree()..n);
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `(self other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then_unchecked(other))
    }

    fn then_unchecked(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn pow(&self, k: u32) -> Perm {
        (0..k).fold(Perm::identity(self.degree()), |acc, _| acc.then_unchecked(self))
    }

    /// Parity from the inversion count.
    pub fn parity(&self) -> Parity {
        let n = self.degree();
        let mut inversions = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) { Parity::Even } else { Parity::Odd }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Disjoint cycles with 1-based points, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i + 1);
                i = self.images[i];
            }
            out.push(cyc);
        }
        out
    }

    /// Generators `(1 2 m)`, `3 <= m <= n`, of the alternating group.
    pub fn an_generators(n: usize) -> Result<Vec<Perm>, PermError> {
        if n < 3 {
            return Err(PermError::TooSmall(n));
        }
        (3..=n).map(|m| Perm::cycle(n, &[1, 2, m])).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = PermError;

    /// Cycle notation such as `(1 2 3)(4 5)`; commas are accepted as separators.
    /// The degree is the largest point mentioned. Cycles are composed right to left.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PermError::Parse(s.to_string());
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        if rest == "id" || rest.is_empty() {
            return Ok(Perm::identity(0));
        }
        while !rest.is_empty() {
            rest = rest.strip_prefix('(').ok_or_else(err)?;
            let close = rest.find(')').ok_or_else(err)?;
            let body = &rest[..close];
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(pts);
            rest = rest[close + 1..].trim_start();
        }
        let n = cycles.iter().flatten().copied().max().unwrap_or(0);
        let mut acc = Perm::identity(n);
        for c in &cycles {
            if c.is_empty() {
                continue;
            }
            let p = Perm::cycle(n, c).map_err(|_| err())?;
            acc = acc.then_unchecked(&p);
        }
        Ok(acc)
    }
}

/// Group generated by `gens`, by breadth-first closure.
pub fn generated_group(gens: &[Perm], cap: usize) -> Result<HashSet<Perm>, PermError> {
    let n = gens.first().map_or(0, Perm::degree);
    if let Some(g) = gens.iter().find(|g| g.degree() != n) {
        return Err(PermError::DegreeMismatch(n, g.degree()));
    }
    let id = Perm::identity(n);
    let mut group = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then_unchecked(g);
            if group.insert(q.clone()) {
                if group.len() > cap {
                    return Err(PermError::SizeCap(cap));
                }
                queue.push_back(q);
            }
        }
    }
    Ok(group)
}

pub const ENUMERATION_CAP: usize = 10_000;

/// The commutator subgroup of the group generated by `gens`.
pub fn commutator_closure(gens: &[Perm]) -> Result<HashSet<Perm>, PermError> {
    let group: Vec<Perm> = generated_group(gens, ENUMERATION_CAP)?.into_iter().collect();
    let mut commutators = HashSet::new();
    for g in &group {
        let gi = g.inverse();
        for h in &group {
            let c = g.then_unchecked(h).then_unchecked(&gi).then_unchecked(&h.inverse());
            commutators.insert(c);
        }
    }
    let mut gens: Vec<Perm> = commutators.into_iter().collect();
    gens.sort();
    if gens.is_empty() {
        gens.push(Perm::identity(group.first().map_or(0, Perm::degree)));
    }
    generated_group(&gens, ENUMERATION_CAP)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The unique q-th root of unity `c` with `f = c * f(x_alpha)`.
pub fn character_of(f: &MPoly, q: u32, alpha: &Perm) -> Result<CycScalar, PermError> {
    if !is_prime(q) {
        return Err(PermError::NotPrime(q));
    }
    if f.is_zero() {
        return Err(PermError::ZeroPolynomial);
    }
    if !alpha.is_even() {
        return Err(PermError::OddPermutation(alpha.to_string()));
    }
    if !f.pow(q).is_even_symmetric() {
        return Err(PermError::PowerNotEvenSymmetric { q });
    }
    character_value_unchecked(f, q, alpha)
}

fn character_value_unchecked(f: &MPoly, q: u32, alpha: &Perm) -> Result<CycScalar, PermError> {
    let no_value = || PermError::NoCharacterValue { q, alpha: alpha.to_string() };
    let moved = f.permute_vars(alpha)?;
    let (m, c) = f.leading_term().ok_or(PermError::ZeroPolynomial)?;
    let d = moved.coeff(m);
    if d.is_zero() {
        return Err(no_value());
    }
    let chi = c.div(&d).map_err(|_| no_value())?;
    if moved.scale(&chi) != *f || !chi.pow(q).is_one() {
        return Err(no_value());
    }
    Ok(chi)
}

/// Renders a q-th root of unity as `w(q)^m` (or `1`).
pub fn render_root_of_unity(v: &CycScalar, q: u32) -> String {
    match v.root_of_unity_exponent(q) {
        Some(0) => "1".to_string(),
        Some(1) => format!("w({q})"),
        Some(m) => format!("w({q})^{m}"),
        None => v.to_string(),
    }
}

/// Character values of `f` on a set of even permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub n: usize,
    pub q: u32,
    pub values: Vec<(Perm, CycScalar)>,
    pub source: MPoly,
}

impl Character {
    /// Evaluates the character on `perms` and checks multiplicativity on all
    /// pairwise products of them.
    pub fn compute(f: &MPoly, q: u32, perms: &[Perm]) -> Result<Self, PermError> {
        let first = perms
            .first()
            .map(|p| character_of(f, q, p))
            .transpose()?;
        let mut values = Vec::with_capacity(perms.len());
        for (i, p) in perms.iter().enumerate() {
            let v = match (i, &first) {
                (0, Some(v)) => v.clone(),
                _ => {
                    if !p.is_even() {
                        return Err(PermError::OddPermutation(p.to_string()));
                    }
                    character_value_unchecked(f, q, p)?
                }
            };
            values.push((p.clone(), v));
        }
        for (a, va) in &values {
            for (b, vb) in &values {
                let ab = a.compose(b)?;
                let vab = character_value_unchecked(f, q, &ab)?;
                if vab != va * vb {
                    return Err(PermError::NotMultiplicative(format!("{a}{b}")));
                }
            }
        }
        Ok(Character { n: f.nvars(), q, values, source: f.clone() })
    }

    /// Values on the standard generators `(1 2 m)`.
    pub fn on_generators(f: &MPoly, q: u32) -> Result<Self, PermError> {
        Self::compute(f, q, &Perm::an_generators(f.nvars())?)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|(_, v)| v.is_one())
    }

    pub fn value(&self, alpha: &Perm) -> Option<&CycScalar> {
        self.values.iter().find(|(p, _)| p == alpha).map(|(_, v)| v)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "chi{p} = {}", render_root_of_unity(v, self.q))?;
        }
        Ok(())
    }
}

/// One concrete permutation identity used in the triviality argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermIdentity {
    pub statement: String,
    pub holds: bool,
}

fn identity_check(statement: String, lhs: &Perm, rhs: &Perm) -> PermIdentity {
    PermIdentity { statement, holds: lhs == rhs }
}

/// Result of the perfectness oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectnessCheck {
    pub group_order: usize,
    pub commutator_order: usize,
}

impl PerfectnessCheck {
    pub fn is_perfect(&self) -> bool {
        self.group_order == self.commutator_order
    }
}

/// Certificate that every multiplicative map `A_n -> Z_q` is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTrivialityReport {
    pub n: usize,
    pub q: u32,
    /// Concrete permutation identities the generator argument relies on.
    pub identities: Vec<PermIdentity>,
    /// Bezout exponents `(a, b)` with `a * order + b * q = 1`, where `order` is
    /// 3 (q != 3) or 5 (q = 3).
    pub bezout: (i64, i64),
    /// `|<(1 2 m)>| = n!/2`, when enumerated (n <= 7).
    pub generators_span_an: Option<bool>,
    /// Commutator closure of `A_n`, for `n <= 6`.
    pub perfectness: Option<PerfectnessCheck>,
}

impl HomTrivialityReport {
    pub fn generator_route_holds(&self) -> bool {
        self.identities.iter().all(|i| i.holds) && self.generators_span_an != Some(false)
    }

    pub fn oracle_route_holds(&self) -> Option<bool> {
        self.perfectness.as_ref().map(PerfectnessCheck::is_perfect)
    }

    pub fn certified(&self) -> bool {
        self.generator_route_holds() && self.oracle_route_holds() != Some(false)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        let order = if self.q == 3 { 5 } else { 3 };
        for id in &self.identities {
            out.push(format!("{} {}", if id.holds { "PASS" } else { "FAIL" }, id.statement));
        }
        out.push(format!(
            "NOTE chi(c)^{order} = 1 and chi(c)^{} = 1 with {}*{order} + {}*{} = 1, so chi(c) = 1",
            self.q, self.bezout.0, self.bezout.1, self.q
        ));
        match self.generators_span_an {
            Some(ok) => out.push(format!(
                "{} 3-cycles (1 2 m) generate A{} of order {}",
                if ok { "PASS" } else { "FAIL" },
                self.n,
                factorial(self.n) / 2
            )),
            None => out.push(format!("SKIP generation of A{} not enumerated", self.n)),
        }
        match &self.perfectness {
            Some(p) => out.push(format!(
                "{} commutator subgroup of A{} has order {} of {}",
                if p.is_perfect() { "PASS" } else { "FAIL" },
                self.n,
                p.commutator_order,
                p.group_order
            )),
            None => out.push(format!("SKIP perfectness oracle not run for n = {}", self.n)),
        }
        out
    }
}

/// Either a triviality certificate (n >= 5) or a nontrivial character (n = 3, 4, q = 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomTriviality {
    Certified(HomTrivialityReport),
    Counterexample(Character),
}

fn bezout(x: i64, y: i64) -> (i64, i64) {
    let e = x.extended_gcd(&y);
    (e.x, e.y)
}

/// Nontrivial character source for `A_3` or `A_4` with `q = 3`.
pub fn counterexample_polynomial(n: usize) -> Option<MPoly> {
    let w = CycScalar::epsilon(3);
    let w2 = w.pow(2);
    let x = |i: usize| MPoly::var(n, i);
    match n {
        3 => Some(x(0).add(&x(1).scale(&w)).add(&x(2).scale(&w2))),
        4 => {
            let pair = |a: usize, b: usize, c: usize, d: usize| x(a).mul(&x(b)).add(&x(c).mul(&x(d)));
            Some(
                pair(0, 1, 2, 3)
                    .add(&pair(0, 2, 1, 3).scale(&w))
                    .add(&pair(0, 3, 1, 2).scale(&w2)),
            )
        }
        _ => None,
    }
}

/// Certifies that every multiplicative map from `A_n` to the q-th roots of
/// unity is identically one, by the 3-cycle/5-cycle argument and, for
/// `n <= 6`, by checking that `A_n` equals its commutator subgroup.
pub fn verify_hom_trivial(n: usize, q: u32) -> Result<HomTriviality, PermError> {
    if !is_prime(q) {
        return Err(PermError::NotPrime(q));
    }
    if n < 5 {
        if q == 3 {
            if let Some(f) = counterexample_polynomial(n) {
                return Ok(HomTriviality::Counterexample(Character::on_generators(&f, q)?));
            }
        }
        return Err(PermError::HypothesisFails { n, q });
    }
    let cyc = |pts: &[usize]| Perm::cycle(n, pts).expect("distinct points in range");
    let id = Perm::identity(n);
    let mut identities = vec![
        identity_check("(1 2)(2 3) = (1 2 3)".into(), &cyc(&[1, 2]).then_unchecked(&cyc(&[2, 3])), &cyc(&[1, 2, 3])),
        identity_check(
            "(1 2)(3 4) = (1 2 3)(2 3 4)".into(),
            &cyc(&[1, 2]).then_unchecked(&cyc(&[3, 4])),
            &cyc(&[1, 2, 3]).then_unchecked(&cyc(&[2, 3, 4])),
        ),
    ];
    let gens = Perm::an_generators(n)?;
    let order: i64 = if q == 3 { 5 } else { 3 };
    for (g, m) in gens.iter().zip(3..) {
        if q != 3 {
            identities.push(identity_check(format!("(1 2 {m})^3 = id"), &g.pow(3), &id));
        } else {
            // (i j k) = (m l k j i)(i k j l m) with i, j, k = 1, 2, m
            let others: Vec<usize> = (1..=n).filter(|&p| p != 1 && p != 2 && p != m).take(2).collect();
            let (l, mm) = (others[0], others[1]);
            let five_a = cyc(&[mm, l, m, 2, 1]);
            let five_b = cyc(&[1, m, 2, l, mm]);
            identities.push(identity_check(
                format!("({mm} {l} {m} 2 1)^5 = id"),
                &five_a.pow(5),
                &id,
            ));
            identities.push(identity_check(
                format!("(1 {m} 2 {l} {mm})^5 = id"),
                &five_b.pow(5),
                &id,
            ));
            identities.push(identity_check(
                format!("(1 2 {m}) = ({mm} {l} {m} 2 1)(1 {m} 2 {l} {mm})"),
                &five_a.then_unchecked(&five_b),
                g,
            ));
        }
    }
    let generators_span_an = (n <= 7)
        .then(|| generated_group(&gens, ENUMERATION_CAP).map(|g| g.len() == factorial(n) / 2))
        .transpose()?;
    let perfectness = if n <= 6 {
        let group = generated_group(&gens, ENUMERATION_CAP)?;
        let comm = commutator_closure(&gens)?;
        Some(PerfectnessCheck { group_order: group.len(), commutator_order: comm.len() })
    } else {
        None
    };
    Ok(HomTriviality::Certified(HomTrivialityReport {
        n,
        q,
        identities,
        bezout: bezout(order, q as i64),
        generators_span_an,
        perfectness,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::vandermonde;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        let t12 = Perm::transposition(4, 0, 1);
        assert!(t12.compose(&t12).unwrap().is_identity());
        let a = p("(1 2)").extended(3).unwrap().compose(&p("(2 3)")).unwrap();
        assert_eq!(a, p("(1 2 3)"));
        let lhs = p("(1 2)").extended(4).unwrap().compose(&p("(3 4)")).unwrap();
        let rhs = p("(1 2 3)").extended(4).unwrap().compose(&p("(2 3 4)")).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.images(), &[1, 0, 3, 2]);
        assert_eq!(
            p("(1 2)").compose(&p("(1 2 3)")),
            Err(PermError::DegreeMismatch(2, 3))
        );
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Perm::identity(4).parity(), Parity::Even);
        assert_eq!(p("(1 2)").parity(), Parity::Odd);
        assert_eq!(p("(1 2 3)").parity(), Parity::Even);
        assert_eq!(p("(1 3)(1 2)"), p("(1 2 3)"));
    }

    #[test]
    fn generator_closures() {
        assert_eq!(Perm::an_generators(3).unwrap(), vec![p("(1 2 3)")]);
        let g4 = Perm::an_generators(4).unwrap();
        assert_eq!(g4.len(), 2);
        assert_eq!(generated_group(&g4, ENUMERATION_CAP).unwrap().len(), 12);
        let g5 = Perm::an_generators(5).unwrap();
        assert_eq!(generated_group(&g5, ENUMERATION_CAP).unwrap().len(), 60);
        assert_eq!(Perm::an_generators(2), Err(PermError::TooSmall(2)));
    }

    #[test]
    fn commutator_examples() {
        let g5 = Perm::an_generators(5).unwrap();
        assert_eq!(commutator_closure(&g5).unwrap().len(), 60);
        let c2 = commutator_closure(&[p("(1 2)")]).unwrap();
        assert_eq!(c2.len(), 1);
        let a3 = commutator_closure(&Perm::an_generators(3).unwrap()).unwrap();
        assert_eq!(a3.len(), 1);
        let s8 = [p("(1 2 3 4 5 6 7 8)"), p("(1 2)").extended(8).unwrap()];
        assert_eq!(commutator_closure(&s8), Err(PermError::SizeCap(ENUMERATION_CAP)));
    }

    #[test]
    fn cycle_notation_round_trip() {
        let a = p("(1 2 3)(4 5)");
        assert_eq!(a.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert_eq!(Perm::parse_with_degree("(1 2)", 4).unwrap().degree(), 4);
        assert!(matches!("(1 2".parse::<Perm>(), Err(PermError::Parse(_))));
        assert!(matches!("(1 1)".parse::<Perm>(), Err(PermError::Parse(_))));
    }

    #[test]
    fn character_examples() {
        let d5 = vandermonde(5);
        let a = Perm::parse_with_degree("(1 2 3)", 5).unwrap();
        assert!(character_of(&d5, 2, &a).unwrap().is_one());

        let f = counterexample_polynomial(3).unwrap();
        assert_eq!(character_of(&f, 3, &p("(1 2 3)")).unwrap(), CycScalar::epsilon(3));

        let s = crate::multipoly::elem_sym(4, 2).unwrap();
        for q in [2, 3, 5] {
            for g in Perm::an_generators(4).unwrap() {
                assert!(character_of(&s, q, &g).unwrap().is_one());
            }
        }
    }

    #[test]
    fn character_errors() {
        let f = counterexample_polynomial(3).unwrap();
        assert_eq!(character_of(&MPoly::zero(3), 3, &p("(1 2 3)")), Err(PermError::ZeroPolynomial));
        assert!(matches!(
            character_of(&f, 3, &Perm::parse_with_degree("(1 2)", 3).unwrap()),
            Err(PermError::OddPermutation(_))
        ));
        assert_eq!(character_of(&f, 2, &p("(1 2 3)")), Err(PermError::PowerNotEvenSymmetric { q: 2 }));
        assert_eq!(character_of(&f, 4, &p("(1 2 3)")), Err(PermError::NotPrime(4)));
    }

    #[test]
    fn hom_trivial_at_five() {
        for q in [2, 3, 5, 7] {
            let HomTriviality::Certified(r) = verify_hom_trivial(5, q).unwrap() else {
                panic!("expected certificate for q = {q}");
            };
            assert!(r.certified(), "{:?}", r.lines());
            assert_eq!(r.perfectness.as_ref().unwrap().group_order, 60);
        }
    }

    #[test]
    fn hom_counterexamples_below_five() {
        let HomTriviality::Counterexample(chi) = verify_hom_trivial(3, 3).unwrap() else {
            panic!("expected counterexample");
        };
        assert_eq!(chi.value(&p("(1 2 3)")), Some(&CycScalar::epsilon(3)));
        let HomTriviality::Counterexample(chi4) = verify_hom_trivial(4, 3).unwrap() else {
            panic!("expected counterexample");
        };
        assert!(!chi4.is_trivial());
        assert_eq!(verify_hom_trivial(4, 2), Err(PermError::HypothesisFails { n: 4, q: 2 }));
        assert_eq!(verify_hom_trivial(5, 6), Err(PermError::NotPrime(6)));
    }
}
