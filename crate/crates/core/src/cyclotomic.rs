//! Exact arithmetic in cyclotomic fields `Q(w_N)`.
//!
//! An element is stored as its coordinate vector with respect to the power
//! basis `1, w_N, ..., w_N^(phi(N)-1)`, always fully reduced modulo the N-th
//! cyclotomic polynomial. Rational elements are normalized to order 1, and
//! operands of different orders are lifted to the lcm of their orders before
//! any arithmetic happens.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("order mismatch: {q} does not divide {n}")]
    OrderMismatch { q: u32, n: u32 },
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
}

/// Dense univariate polynomials over `Q`, ascending coefficients, no trailing zeros.
pub(crate) mod qpoly {
    use super::*;

    pub fn trim(p: &mut Vec<BigRational>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = b.len() - 1;
        let lead = b[db].clone();
        let mut rem = a.to_vec();
        trim(&mut rem);
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        while rem.len() > db {
            let shift = rem.len() - 1 - db;
            let c = rem.last().unwrap() / &lead;
            for (j, y) in b.iter().enumerate() {
                rem[shift + j] -= &c * y;
            }
            quot[shift] = c;
            rem.pop();
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }

    /// Returns `(g, s)` with `s*a = g (mod b)` and `g = gcd(a, b)` made monic.
    pub fn half_gcd_ext(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![BigRational::one()], Vec::new());
        while !r1.is_empty() {
            let (q, r) = div_rem(&r0, &r1);
            let s2 = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if let Some(lead) = r0.last().cloned() {
            for c in r0.iter_mut().chain(s0.iter_mut()) {
                *c /= &lead;
            }
        }
        (r0, s0)
    }
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn compute_cyclotomic(n: u32) -> Vec<BigRational> {
    // t^n - 1 divided by every Phi_d with d a proper divisor of n
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let phi_d: Vec<BigRational> = cyclotomic_int(d)
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let (q, r) = qpoly::div_rem(&num, &phi_d);
        debug_assert!(r.is_empty());
        num = q;
    }
    num
}

fn cyclotomic_int(n: u32) -> Arc<Vec<i64>> {
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let poly: Vec<i64> = compute_cyclotomic(n)
        .into_iter()
        .map(|c| {
            let c = c.to_integer();
            i64::try_from(c).expect("cyclotomic coefficient overflow")
        })
        .collect();
    let poly = Arc::new(poly);
    phi_cache().write().unwrap().insert(n, poly.clone());
    poly
}

/// The N-th cyclotomic polynomial, ascending coefficients.
pub fn cyclotomic_poly(n: u32) -> Result<Vec<BigRational>, CycError> {
    if n == 0 {
        return Err(CycError::ZeroOrder);
    }
    Ok(cyclotomic_int(n)
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect())
}

/// Euler's totient, which is also `deg Phi_N`.
pub fn totient(n: u32) -> usize {
    let mut result = n as u64;
    let mut m = n as u64;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Exact element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct CycScalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycScalar { order: 1, coeffs: vec![r] }
    }

    pub fn from_integer(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(i.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// Builds an element from arbitrary coordinates in powers of `w_order`,
    /// reducing modulo `Phi_order`.
    pub fn from_powers(order: u32, powers: Vec<BigRational>) -> Result<Self, CycError> {
        if order == 0 {
            return Err(CycError::ZeroOrder);
        }
        Ok(Self::reduced(order, powers))
    }

    /// The primitive q-th root `w_N^(N/q)` as an element of `Q(w_N)`.
    pub fn root_of_unity(q: u32, n: u32) -> Result<Self, CycError> {
        if q == 0 || n == 0 {
            return Err(CycError::ZeroOrder);
        }
        if !n.is_multiple_of(q) {
            return Err(CycError::OrderMismatch { q, n });
        }
        let e = (n / q) as usize;
        let mut powers = vec![BigRational::zero(); e + 1];
        powers[e] = BigRational::one();
        Ok(Self::reduced(n, powers))
    }

    /// `w_q` in its own field `Q(w_q)`.
    pub fn epsilon(q: u32) -> Self {
        Self::root_of_unity(q, q).expect("q divides q")
    }

    fn reduced(order: u32, mut powers: Vec<BigRational>) -> Self {
        let phi = cyclotomic_int(order);
        let d = phi.len() - 1;
        qpoly::trim(&mut powers);
        while powers.len() > d {
            let top = powers.len() - 1;
            let c = powers.pop().unwrap();
            if !c.is_zero() {
                let base = top - d;
                for (j, &pj) in phi.iter().enumerate().take(d) {
                    if pj != 0 {
                        powers[base + j] -= &c * BigRational::from_integer(pj.into());
                    }
                }
            }
        }
        powers.resize(d, BigRational::zero());
        let mut out = CycScalar { order, coeffs: powers };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.order > 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let c = self.coeffs.first().cloned().unwrap_or_else(BigRational::zero);
            self.order = 1;
            self.coeffs = vec![c];
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    /// `Some(r)` when the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            self.coeffs.first()
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(w_m)`; the current order must divide `m`.
    pub fn lift(&self, m: u32) -> Result<Self, CycError> {
        if m == 0 {
            return Err(CycError::ZeroOrder);
        }
        if !m.is_multiple_of(self.order) {
            return Err(CycError::OrderMismatch { q: self.order, n: m });
        }
        if m == self.order || self.as_rational().is_some() {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut powers = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            powers[i * step] = c.clone();
        }
        Ok(Self::reduced(m, powers))
    }

    fn aligned(&self, other: &Self) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        let m = lcm(self.order, other.order);
        let a = self.lift(m).expect("lcm is a multiple");
        let b = other.lift(m).expect("lcm is a multiple");
        let d = totient(m);
        let pad = |mut v: Vec<BigRational>| {
            v.resize(d, BigRational::zero());
            v
        };
        (m, pad(a.coeffs), pad(b.coeffs))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::from_rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        let (m, a, b) = self.aligned(other);
        let coeffs = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        Self::reduced(m, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let (m, a, b) = self.aligned(other);
        Self::reduced(m, qpoly::mul(&a, &b))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via extended Euclid against `Phi_N`.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let phi = cyclotomic_poly(self.order)?;
        let (g, s) = qpoly::half_gcd_ext(&self.coeffs, &phi);
        // Phi_N is irreducible, so any nonzero element is coprime to it
        debug_assert_eq!(g.len(), 1);
        Ok(Self::reduced(self.order, s))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = Self::mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_signed(&self, e: i64) -> Result<Self, CycError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u32))
        }
    }

    /// The exponent `m` in `0..q` with `self = w_q^m`, if any.
    pub fn root_of_unity_exponent(&self, q: u32) -> Option<u32> {
        let w = Self::epsilon(q);
        let mut acc = Self::one();
        for m in 0..q {
            if &acc == self {
                return Some(m);
            }
            acc = acc.mul(&w);
        }
        None
    }

    /// Exact rational k-th root, if one exists.
    pub fn rational_kth_root(&self, k: u32) -> Option<CycScalar> {
        let r = self.as_rational()?;
        rational_root(r, k).map(Self::from_rational)
    }

    fn needs_parens(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1
    }

    /// Rendering used as a polynomial coefficient: wrapped in parentheses
    /// when it is a sum of several basis terms.
    pub(crate) fn fmt_factor(&self) -> String {
        if self.needs_parens() {
            format!("({self})")
        } else {
            self.to_string()
        }
    }

    /// True when the rendered form starts with a minus sign and is a single term.
    pub(crate) fn is_negative_term(&self) -> bool {
        !self.needs_parens()
            && self
                .coeffs
                .iter()
                .find(|c| !c.is_zero())
                .is_some_and(|c| c.is_negative())
    }
}

fn rational_root(r: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    if r.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let root_int = |x: &BigInt| -> Option<BigInt> {
        let mag = x.abs();
        let root = mag.nth_root(k);
        if num_traits::pow(root.clone(), k as usize) == mag {
            Some(if x.is_negative() { -root } else { root })
        } else {
            None
        }
    };
    Some(BigRational::new(root_int(r.numer())?, root_int(r.denom())?))
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.aligned(other);
        a == b
    }
}

impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycScalar {
    fn from(i: i64) -> Self {
        Self::from_integer(i)
    }
}

impl From<BigRational> for CycScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                CycScalar::$method(self, rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                CycScalar::$method(&self, rhs)
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                CycScalar::$method(self, &rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                CycScalar::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(self)
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(&self)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&fmt_rational(r));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = match i {
                0 => String::new(),
                1 => format!("w({})", self.order),
                _ => format!("w({})^{}", self.order, i),
            };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match (basis.is_empty(), mag.is_one()) {
                (true, _) => f.write_str(&fmt_rational(&mag))?,
                (false, true) => f.write_str(&basis)?,
                (false, false) => write!(f, "{}*{}", fmt_rational(&mag), basis)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4).unwrap(), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12).unwrap(), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(0), Err(CycError::ZeroOrder));
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        for n in 1..=40 {
            assert_eq!(cyclotomic_poly(n).unwrap().len() - 1, totient(n), "n = {n}");
        }
    }

    #[test]
    fn named_roots_of_unity() {
        assert_eq!(CycScalar::root_of_unity(2, 2).unwrap(), CycScalar::from_integer(-1));
        let i = CycScalar::root_of_unity(4, 4).unwrap();
        assert_eq!(i.pow(2), CycScalar::from_integer(-1));
        let w = CycScalar::root_of_unity(3, 3).unwrap();
        assert!((w.pow(2) + w.clone() + CycScalar::one()).is_zero());
        assert_eq!(
            CycScalar::root_of_unity(3, 4),
            Err(CycError::OrderMismatch { q: 3, n: 4 })
        );
    }

    #[test]
    fn field_examples() {
        let w = CycScalar::epsilon(3);
        let one = CycScalar::one();
        assert_eq!((&one + &w) * (&one + &w.pow(2)), one);
        assert_eq!(&w + &w.pow(2), CycScalar::from_integer(-1));
        let i = CycScalar::epsilon(4);
        assert_eq!(i.inv().unwrap(), -i);
        assert_eq!(CycScalar::zero().inv(), Err(CycError::DivisionByZero));
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        let i = CycScalar::epsilon(4);
        let w = CycScalar::epsilon(3);
        let p = &i * &w;
        assert_eq!(p.order(), 12);
        assert_eq!(p.pow(12), CycScalar::one());
        assert_eq!(w.lift(12).unwrap(), w);
        assert_eq!(w.lift(12).unwrap().pow(3), CycScalar::one());
    }

    #[test]
    fn exponent_lookup() {
        let w = CycScalar::epsilon(5);
        assert_eq!(w.pow(3).root_of_unity_exponent(5), Some(3));
        assert_eq!(CycScalar::from_integer(2).root_of_unity_exponent(5), None);
        assert_eq!(CycScalar::from_integer(-1).root_of_unity_exponent(2), Some(1));
    }

    #[test]
    fn rational_roots() {
        assert_eq!(
            CycScalar::from_ratio(4, 9).rational_kth_root(2),
            Some(CycScalar::from_ratio(2, 3))
        );
        assert_eq!(CycScalar::from_integer(-8).rational_kth_root(3), Some(CycScalar::from_integer(-2)));
        assert_eq!(CycScalar::from_integer(-4).rational_kth_root(2), None);
        assert_eq!(CycScalar::from_integer(2).rational_kth_root(2), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(CycScalar::from_ratio(-1, 2).to_string(), "-1/2");
        let w = CycScalar::epsilon(3);
        assert_eq!(w.to_string(), "w(3)");
        assert_eq!((w.pow(2)).to_string(), "-1 - w(3)");
        assert_eq!(w.scale(&BigRational::new(3.into(), 2.into())).to_string(), "3/2*w(3)");
    }
}
