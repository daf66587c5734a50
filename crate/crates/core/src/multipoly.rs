//! Sparse multivariate polynomials over [`CycScalar`], with the symmetric
//! function machinery: elementary symmetric polynomials, (even-)symmetry
//! tests, rewriting in the elementary basis, and exact k-th roots.
//!
//! Monomials are ordered graded-lexicographically with `x1 > x2 > ... > xn`;
//! the leading term is the largest monomial in that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::cyclotomic::{CycError, CycScalar};
use crate::permchar::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("variable {var} is not covered by the substitution")]
    UncoveredVariable { var: usize },
    #[error("elementary symmetric index {i} out of range for {n} variables")]
    IndexOutOfRange { i: usize, n: usize },
    #[error("polynomial is not symmetric: transposition (1 {m}) changes it")]
    NotSymmetric { m: usize },
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("permutation degree {perm} does not match {nvars} variables")]
    DegreeMismatch { perm: usize, nvars: usize },
    #[error(transparent)]
    Scalar(#[from] CycError),
}

/// Exponent vector, compared in graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// `self / other` when every exponent of `other` is at most that of `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in a fixed number of variables. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, CycScalar>,
}

/// Outcome of [`MPoly::kth_root`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KthRoot {
    Root(MPoly),
    NoRoot,
    /// The polynomial is a k-th power over the complex numbers, but the
    /// k-th root of its leading coefficient is not representable here.
    Undecided,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, CycScalar::one())
    }

    pub fn constant(nvars: usize, c: CycScalar) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: CycScalar) -> Self {
        debug_assert_eq!(m.0.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { nvars, terms }
    }

    /// The variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        Self::monomial(nvars, m, CycScalar::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, CycScalar)>) -> Self {
        let mut acc: HashMap<Monomial, CycScalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), nvars);
            acc.entry(m)
                .and_modify(|e| *e = &*e + &c)
                .or_insert(c);
        }
        MPoly {
            nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> CycScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycScalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest exponent of variable `i` occurring in any term.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.degree_in(i) > 0).collect()
    }

    pub fn as_constant(&self) -> Option<CycScalar> {
        match self.terms.len() {
            0 => Some(CycScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest cyclotomic order among the coefficients' lcm.
    pub fn scalar_order(&self) -> u32 {
        self.terms
            .values()
            .fold(1, |acc, c| crate::cyclotomic::lcm(acc, c.order()))
    }

    fn check_nvars(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::NvarsMismatch { left: self.nvars, right: other.nvars })
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_nvars(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_nvars(other)?;
        Ok(self.mul(other))
    }

    /// Panics on a variable-count mismatch; see [`MPoly::checked_add`].
    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    /// `self += other` without copying `self`.
    fn add_assign_ref(&mut self, other: &MPoly) {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(e) => {
                    *e = &*e + c;
                    if e.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &CycScalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Panics on a variable-count mismatch; see [`MPoly::checked_mul`].
    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut acc: HashMap<Monomial, CycScalar> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e = &*e + &c)
                    .or_insert(c);
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = Self::mul(&base, &base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert_eq!(self.nvars, d.nvars, "nvars mismatch");
        let (dm, dc) = d.leading_term()?;
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.checked_div(dm)?;
            let qc = rc * &dc_inv;
            let t = MPoly::monomial(self.nvars, qm, qc);
            rem = MPoly::sub(&rem, &MPoly::mul(&t, d));
            quot = MPoly::add(&quot, &t);
        }
        Some(quot)
    }

    /// Substitutes `images[i]` for variable `i`. Every image must have
    /// `nvars` variables; variables past the end of `images` must not occur.
    pub fn compose(&self, images: &[MPoly], nvars: usize) -> Result<MPoly, PolyError> {
        for img in images {
            if img.nvars != nvars {
                return Err(PolyError::NvarsMismatch { left: img.nvars, right: nvars });
            }
        }
        for v in self.used_vars() {
            if v >= images.len() {
                return Err(PolyError::UncoveredVariable { var: v });
            }
        }
        let mut powers: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut acc = MPoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(nvars, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| images[v].pow(e))
                    .clone();
                t = t.mul(&p);
            }
            acc.add_assign_ref(&t);
        }
        Ok(acc)
    }

    /// Substitution keyed by variable index; any occurring variable missing from the map is an error.
    pub fn substitute(&self, assignment: &BTreeMap<usize, MPoly>, nvars: usize) -> Result<MPoly, PolyError> {
        let mut images = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            match assignment.get(&v) {
                Some(p) => images.push(p.clone()),
                None if self.degree_in(v) == 0 => images.push(MPoly::zero(nvars)),
                None => return Err(PolyError::UncoveredVariable { var: v }),
            }
        }
        self.compose(&images, nvars)
    }

    /// Re-embeds into a ring with more (or fewer, if unused) variables, keeping indices.
    pub fn with_nvars(&self, nvars: usize) -> Result<MPoly, PolyError> {
        if let Some(&v) = self.used_vars().iter().find(|&&v| v >= nvars) {
            return Err(PolyError::UncoveredVariable { var: v });
        }
        Ok(MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        })
    }

    /// `f(x_alpha)`: variable `i` is replaced by `x_alpha(i)`.
    pub fn permute_vars(&self, alpha: &Perm) -> Result<MPoly, PolyError> {
        if alpha.degree() != self.nvars {
            return Err(PolyError::DegreeMismatch { perm: alpha.degree(), nvars: self.nvars });
        }
        Ok(MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; self.nvars];
                    for (i, &a) in m.0.iter().enumerate() {
                        e[alpha.apply(i)] += a;
                    }
                    (Monomial(e), c.clone())
                })
                .collect(),
        })
    }

    fn permute_unchecked(&self, alpha: &Perm) -> MPoly {
        self.permute_vars(alpha).expect("degree checked by caller")
    }

    /// Invariance under the generators `(1 2 m)`, `3 <= m <= n`, of the alternating group.
    pub fn is_even_symmetric(&self) -> bool {
        let n = self.nvars;
        if n < 3 || self.is_zero() {
            return true;
        }
        Perm::an_generators(n)
            .expect("n >= 3")
            .iter()
            .all(|g| &self.permute_unchecked(g) == self)
    }

    /// Checks invariance under the transpositions `(1 m)`; reports the first violation.
    pub fn check_symmetric(&self) -> Result<(), PolyError> {
        for m in 1..self.nvars {
            let t = Perm::transposition(self.nvars, 0, m);
            if &self.permute_unchecked(&t) != self {
                return Err(PolyError::NotSymmetric { m: m + 1 });
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetric().is_ok()
    }

    /// Writes a symmetric polynomial in the elementary symmetric basis.
    /// The returned polynomial has variables `s1..sn` and its expansion is
    /// checked against `self` before returning.
    pub fn symmetrize(&self) -> Result<MPoly, PolyError> {
        self.check_symmetric()?;
        let n = self.nvars;
        let sigmas: Vec<MPoly> = (1..=n).map(|i| elem_sym(n, i).expect("in range")).collect();
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut rem = self.clone();
        let mut out = MPoly::zero(n);
        while let Some((lm, lc)) = rem.leading_term() {
            // leading exponents of a symmetric polynomial are non-increasing
            let a = &lm.0;
            let mut sigma_exp = vec![0u32; n];
            for i in 0..n {
                let next = if i + 1 < n { a[i + 1] } else { 0 };
                debug_assert!(a[i] >= next);
                sigma_exp[i] = a[i] - next;
            }
            let lc = lc.clone();
            let mut prod = MPoly::constant(n, lc.clone());
            for (i, &e) in sigma_exp.iter().enumerate() {
                if e > 0 {
                    let p = cache
                        .entry((i, e))
                        .or_insert_with(|| sigmas[i].pow(e))
                        .clone();
                    prod = prod.mul(&p);
                }
            }
            rem = rem.sub(&prod);
            out = out.add(&MPoly::monomial(n, Monomial(sigma_exp), lc));
        }
        if &out.compose(&sigmas, n)? != self {
            unreachable!("elementary-basis rewrite does not re-expand to its input");
        }
        Ok(out)
    }

    /// Expands a polynomial in `s1..sn` back into `x1..xn`.
    pub fn expand_sigma(&self) -> MPoly {
        let n = self.nvars;
        let sigmas: Vec<MPoly> = (1..=n).map(|i| elem_sym(n, i).expect("in range")).collect();
        self.compose(&sigmas, n).expect("all variables covered")
    }

    pub fn eval(&self, point: &[CycScalar]) -> Result<CycScalar, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, got: point.len() });
        }
        let mut acc = CycScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Decides whether `self = g^k` by leading-term recursion.
    pub fn kth_root(&self, k: u32) -> KthRoot {
        if self.is_zero() {
            return KthRoot::Root(self.clone());
        }
        if k <= 1 {
            return if k == 1 { KthRoot::Root(self.clone()) } else { KthRoot::NoRoot };
        }
        let (lm, lc) = self.leading_term().unwrap();
        if lm.0.iter().any(|e| e % k != 0) {
            return KthRoot::NoRoot;
        }
        let lc = lc.clone();
        let monic = self.scale(&lc.inv().expect("nonzero leading coefficient"));
        let n = self.nvars;
        let root_lm = Monomial(lm.0.iter().map(|e| e / k).collect());
        let divisor_m = root_lm.pow(k - 1);
        let inv_k = CycScalar::from_ratio(1, k as i64);
        let mut g = MPoly::monomial(n, root_lm.clone(), CycScalar::one());
        let mut last = root_lm;
        loop {
            let r = MPoly::sub(&monic, &g.pow(k));
            let Some((rm, rc)) = r.leading_term() else { break };
            let Some(tm) = rm.checked_div(&divisor_m) else {
                return KthRoot::NoRoot;
            };
            if tm >= last {
                return KthRoot::NoRoot;
            }
            g = g.add(&MPoly::monomial(n, tm.clone(), rc * &inv_k));
            last = tm;
        }
        match lc.rational_kth_root(k) {
            Some(c) => KthRoot::Root(g.scale(&c)),
            None => KthRoot::Undecided,
        }
    }

    /// Rendering with custom variable names, e.g. `s1`, `f2`.
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(usize) -> String) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

struct PolyDisplay<'a> {
    poly: &'a MPoly,
    names: &'a dyn Fn(usize) -> String,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = (self.names)(i);
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            let negative = c.is_negative_term();
            let mag = if negative { -c } else { c.clone() };
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if vars.is_empty() {
                f.write_str(&mag.fmt_factor())?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag.fmt_factor(), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn names(i: usize) -> String {
            format!("x{}", i + 1)
        }
        write!(f, "{}", self.display_with(&names))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                MPoly::$method(self, rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                MPoly::$method(&self, rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                MPoly::$method(self, &rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                MPoly::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(&self)
    }
}

/// The i-th elementary symmetric polynomial in `n` variables (`1 <= i <= n`).
pub fn elem_sym(n: usize, i: usize) -> Result<MPoly, PolyError> {
    if i == 0 || i > n {
        return Err(PolyError::IndexOutOfRange { i, n });
    }
    let mut terms = Vec::new();
    let mut chosen = Vec::with_capacity(i);
    fn walk(start: usize, n: usize, left: usize, chosen: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if left == 0 {
            let mut e = vec![0; n];
            for &c in chosen.iter() {
                e[c] = 1;
            }
            out.push(Monomial(e));
            return;
        }
        for v in start..=(n - left) {
            chosen.push(v);
            walk(v + 1, n, left - 1, chosen, out);
            chosen.pop();
        }
    }
    walk(0, n, i, &mut chosen, &mut terms);
    Ok(MPoly::from_terms(n, terms.into_iter().map(|m| (m, CycScalar::one()))))
}

/// All `n` elementary symmetric polynomials.
pub fn elem_syms(n: usize) -> Vec<MPoly> {
    (1..=n).map(|i| elem_sym(n, i).expect("in range")).collect()
}

/// `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde(n: usize) -> MPoly {
    let mut acc = MPoly::one(n);
    for i in 0..n {
        for j in i + 1..n {
            acc = acc.mul(&MPoly::var(n, i).sub(&MPoly::var(n, j)));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i - 1)
    }

    fn c(v: i64) -> CycScalar {
        CycScalar::from_integer(v)
    }

    #[test]
    fn ring_examples() {
        let (x1, x2) = (x(2, 1), x(2, 2));
        let sq = (&x1 + &x2).pow(2);
        let expected = x1.pow(2) + (&x1 * &x2).scale(&c(2)) + x2.pow(2);
        assert_eq!(sq, expected);
        assert!(sq.mul(&MPoly::zero(2)).is_zero());
        assert_eq!((&x1 - &x2) * (&x1 + &x2), x1.pow(2) - x2.pow(2));
        assert_eq!(
            x1.checked_add(&MPoly::var(3, 0)),
            Err(PolyError::NvarsMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn substitution_examples() {
        // y1^2 - 4 y2 with y1 -> x1 + x2, y2 -> x1 x2
        let (y1, y2) = (x(2, 1), x(2, 2));
        let p0 = y1.pow(2) - y2.scale(&c(4));
        let (x1, x2) = (x(2, 1), x(2, 2));
        let out = p0.compose(&[&x1 + &x2, &x1 * &x2], 2).unwrap();
        assert_eq!(out, x1.pow(2) - (&x1 * &x2).scale(&c(2)) + x2.pow(2));
        assert_eq!(p0.compose(&[x1.clone(), x2.clone()], 2).unwrap(), p0);
        let f = x(1, 1);
        assert_eq!(f.compose(&[&x1 - &x2], 2).unwrap(), &x1 - &x2);
        assert_eq!(
            p0.compose(std::slice::from_ref(&x1), 2),
            Err(PolyError::UncoveredVariable { var: 1 })
        );
        let mut map = BTreeMap::new();
        map.insert(0, x1.clone());
        assert_eq!(p0.substitute(&map, 2), Err(PolyError::UncoveredVariable { var: 1 }));
    }

    #[test]
    fn permutation_examples() {
        let a: Perm = "(1 2 3)".parse().unwrap();
        assert_eq!(x(3, 1).permute_vars(&a).unwrap(), x(3, 2));
        let t = Perm::transposition(2, 0, 1);
        let f = x(2, 1) - x(2, 2);
        assert_eq!(f.permute_vars(&t).unwrap(), -f.clone());
        let s = elem_sym(3, 2).unwrap();
        assert_eq!(s.permute_vars(&a).unwrap(), s);
        assert!(matches!(f.permute_vars(&a), Err(PolyError::DegreeMismatch { .. })));
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elem_sym(2, 1).unwrap(), x(2, 1) + x(2, 2));
        assert_eq!(elem_sym(2, 2).unwrap(), x(2, 1) * x(2, 2));
        assert_eq!(
            elem_sym(3, 2).unwrap(),
            x(3, 1) * x(3, 2) + x(3, 1) * x(3, 3) + x(3, 2) * x(3, 3)
        );
        assert_eq!(elem_sym(3, 4), Err(PolyError::IndexOutOfRange { i: 4, n: 3 }));
        assert_eq!(elem_sym(3, 0), Err(PolyError::IndexOutOfRange { i: 0, n: 3 }));
    }

    #[test]
    fn even_symmetry_examples() {
        assert!(vandermonde(4).is_even_symmetric());
        assert!(!vandermonde(4).is_symmetric());
        for n in 3..=5 {
            assert!(!x(n, 1).is_even_symmetric());
        }
        for n in 1..=4 {
            assert!(vandermonde(n).pow(2).is_even_symmetric());
        }
        assert!(MPoly::zero(5).is_even_symmetric());
    }

    #[test]
    fn symmetrize_examples() {
        let (x1, x2) = (x(2, 1), x(2, 2));
        let (s1, s2) = (x(2, 1), x(2, 2));
        assert_eq!((x1.pow(2) + x2.pow(2)).symmetrize().unwrap(), s1.pow(2) - s2.scale(&c(2)));
        assert_eq!(elem_sym(3, 2).unwrap().symmetrize().unwrap(), x(3, 2));
        assert_eq!(
            (&x1 - &x2).pow(2).symmetrize().unwrap(),
            s1.pow(2) - s2.scale(&c(4))
        );
        assert_eq!(MPoly::zero(3).symmetrize().unwrap(), MPoly::zero(3));
        assert_eq!(x(3, 1).symmetrize(), Err(PolyError::NotSymmetric { m: 2 }));
        assert_eq!((x(3, 1) + x(3, 2)).symmetrize(), Err(PolyError::NotSymmetric { m: 3 }));
    }

    #[test]
    fn eval_examples() {
        assert_eq!((x(2, 1) * x(2, 2)).eval(&[c(2), c(3)]).unwrap(), c(6));
        assert_eq!(elem_sym(3, 2).unwrap().eval(&[c(1), c(1), c(1)]).unwrap(), c(3));
        assert_eq!(vandermonde(3).eval(&[c(1), c(2), c(4)]).unwrap(), c(-6));
        assert_eq!(
            x(2, 1).eval(&[c(1)]),
            Err(PolyError::PointLength { expected: 2, got: 1 })
        );
    }

    #[test]
    fn kth_root_examples() {
        let (x1, x2) = (x(2, 1), x(2, 2));
        assert_eq!((&x1 + &x2).pow(2).kth_root(2), KthRoot::Root(&x1 + &x2));
        let disc = x1.pow(2) - x2.scale(&c(4));
        assert_eq!(disc.kth_root(2), KthRoot::NoRoot);
        assert_eq!((x1.pow(2) * x2.pow(2)).kth_root(2), KthRoot::Root(&x1 * &x2));
        assert_eq!(MPoly::zero(2).kth_root(3), KthRoot::Root(MPoly::zero(2)));
        // a square over C whose leading coefficient has no rational square root
        assert_eq!(x1.pow(2).scale(&c(2)).kth_root(2), KthRoot::Undecided);
        assert_eq!(x1.pow(2).scale(&c(-3)).kth_root(3), KthRoot::NoRoot);
        let g = (&x1 - &x2.scale(&c(2)) + MPoly::constant(2, c(3))).scale(&CycScalar::from_ratio(-2, 3));
        assert_eq!(g.pow(3).kth_root(3), KthRoot::Root(g));
    }

    #[test]
    fn division_exact() {
        let (x1, x2) = (x(2, 1), x(2, 2));
        let a = &x1 - &x2;
        let b = &x1 + &x2.scale(&c(3));
        assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&b), None);
    }

    #[test]
    fn display() {
        let (x1, x2) = (x(2, 1), x(2, 2));
        let f = x1.pow(2) - (&x1 * &x2).scale(&c(2)) + MPoly::constant(2, CycScalar::from_ratio(1, 2));
        assert_eq!(f.to_string(), "x1^2 - 2*x1*x2 + 1/2");
        let g = x1.scale(&CycScalar::epsilon(3).pow(2));
        assert_eq!(g.to_string(), "(-1 - w(3))*x1");
        let names = |i: usize| format!("s{}", i + 1);
        assert_eq!(x2.neg().display_with(&names).to_string(), "-s2");
    }
}
