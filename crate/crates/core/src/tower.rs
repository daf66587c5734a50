//! Radical towers `F_0 = C(s1..sn)`, `F_j = F_{j-1}[y_j] / (y_j^k_j - p_{j-1})`.
//!
//! Level-0 elements are fractions of polynomials in the elementary symmetric
//! variables, compared by cross-multiplication. An element of level `j > 0`
//! is a coefficient vector of length `k_j` over level `j - 1`, always reduced
//! modulo the defining relation of `y_j`.

use std::fmt;

use thiserror::Error;

use crate::cyclotomic::{lcm, CycError, CycScalar};
use crate::multipoly::{elem_syms, KthRoot, MPoly, PolyError};
use crate::permchar::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("radical exponent {0} is not prime")]
    NotPrime(u32),
    #[error("element of level {got} used where level at most {max} is allowed")]
    LevelMismatch { max: usize, got: usize },
    #[error("level {0} does not exist in this tower")]
    NoSuchLevel(usize),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("level {0} has no non-power attestation; y^k - p may be reducible")]
    NotAttested(usize),
    #[error("gcd with the defining relation of level {0} is not a unit: its radicand is a power after all")]
    NonUnitGcd(usize),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected {expected} witnesses, got {got}")]
    WitnessCount { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Scalar(#[from] CycError),
}

/// Quotient of two polynomials over a common variable set.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, TowerError> {
        if den.is_zero() {
            return Err(TowerError::ZeroDenominator);
        }
        let mut r = RatFunc { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RatFunc { num: p, den: MPoly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: CycScalar) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The polynomial this fraction equals, if the denominator divides exactly.
    pub fn as_poly(&self) -> Option<MPoly> {
        if let Some(c) = self.den.as_constant() {
            return Some(self.num.scale(&c.inv().ok()?));
        }
        self.num.div_exact(&self.den)
    }

    fn normalize(&mut self) {
        let n = self.num.nvars();
        if self.num.is_zero() {
            self.den = MPoly::one(n);
            return;
        }
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&c.inv().expect("nonzero denominator"));
                self.den = MPoly::one(n);
            }
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = MPoly::one(n);
            return;
        }
        let lc = self.den.leading_term().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).expect("nonzero");
        }
        let num = &self.num * &other.den + &other.num * &self.den;
        Self::new(num, &self.den * &other.den).expect("nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        // cancel a denominator against the opposite numerator when it divides exactly
        let (mut a, mut b) = (self.num.clone(), self.den.clone());
        let (mut c, mut d) = (other.num.clone(), other.den.clone());
        if d.as_constant().is_none() {
            if let Some(q) = a.div_exact(&d) {
                a = q;
                d = MPoly::one(a.nvars());
            }
        }
        if b.as_constant().is_none() {
            if let Some(q) = c.div_exact(&b) {
                c = q;
                b = MPoly::one(c.nvars());
            }
        }
        Self::new(&a * &c, &b * &d).expect("nonzero")
    }

    pub fn scale(&self, c: &CycScalar) -> RatFunc {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc, TowerError> {
        if self.is_zero() {
            return Err(TowerError::ZeroInverse);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        Self::new(self.num.pow(e), self.den.pow(e)).expect("nonzero")
    }

    /// Substitutes polynomials for the variables of numerator and denominator.
    pub fn compose(&self, images: &[MPoly], nvars: usize) -> Result<RatFunc, TowerError> {
        let den = self.den.compose(images, nvars)?;
        if den.is_zero() {
            return Err(TowerError::ZeroDenominator);
        }
        Self::new(self.num.compose(images, nvars)?, den)
    }

    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(usize) -> String) -> impl fmt::Display + 'a {
        RatDisplay { r: self, names }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

struct RatDisplay<'a> {
    r: &'a RatFunc,
    names: &'a dyn Fn(usize) -> String,
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.r.num.display_with(self.names).to_string();
        if self.r.den.as_constant().is_some_and(|c| c.is_one()) {
            return f.write_str(&num);
        }
        let den = self.r.den.display_with(self.names).to_string();
        write!(f, "({num})/({den})")
    }
}

/// Element of some level of a radical tower.
#[derive(Clone, Debug)]
pub enum TowerElem {
    Base(RatFunc),
    Ext { level: usize, coeffs: Vec<TowerElem> },
}

impl TowerElem {
    pub fn level(&self) -> usize {
        match self {
            TowerElem::Base(_) => 0,
            TowerElem::Ext { level, .. } => *level,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TowerElem::Base(r) => r.is_zero(),
            TowerElem::Ext { coeffs, .. } => coeffs.iter().all(TowerElem::is_zero),
        }
    }

    /// Coordinates over the level below; a level-0 element has none.
    pub fn coeffs(&self) -> &[TowerElem] {
        match self {
            TowerElem::Base(_) => &[],
            TowerElem::Ext { coeffs, .. } => coeffs,
        }
    }

    pub fn as_base(&self) -> Option<&RatFunc> {
        match self {
            TowerElem::Base(r) => Some(r),
            TowerElem::Ext { .. } => None,
        }
    }

    /// The lowest level at which this element is defined.
    pub fn effective_level(&self) -> usize {
        match self {
            TowerElem::Base(_) => 0,
            TowerElem::Ext { level, coeffs } => {
                if coeffs[1..].iter().all(TowerElem::is_zero) {
                    coeffs[0].effective_level()
                } else {
                    *level
                }
            }
        }
    }

    /// Drops to the lowest level where the element lives.
    pub fn lowered(&self) -> TowerElem {
        match self {
            TowerElem::Base(_) => self.clone(),
            TowerElem::Ext { coeffs, .. } => {
                if coeffs[1..].iter().all(TowerElem::is_zero) {
                    coeffs[0].lowered()
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Drops exactly to `level`, if the element lies that low.
    pub fn lowered_to(&self, level: usize) -> Option<TowerElem> {
        let mut e = self.clone();
        while e.level() > level {
            match e {
                TowerElem::Ext { coeffs, .. } if coeffs[1..].iter().all(TowerElem::is_zero) => {
                    e = coeffs.into_iter().next().unwrap();
                }
                _ => return None,
            }
        }
        Some(e)
    }

    fn map_base(&self, f: &dyn Fn(&RatFunc) -> RatFunc) -> TowerElem {
        match self {
            TowerElem::Base(r) => TowerElem::Base(f(r)),
            TowerElem::Ext { level, coeffs } => TowerElem::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| c.map_base(f)).collect(),
            },
        }
    }

    pub fn scale(&self, c: &CycScalar) -> TowerElem {
        self.map_base(&|r| r.scale(c))
    }

    pub fn neg(&self) -> TowerElem {
        self.map_base(&RatFunc::neg)
    }

    fn scalar_order(&self) -> u32 {
        match self {
            TowerElem::Base(r) => lcm(r.num.scalar_order(), r.den.scalar_order()),
            TowerElem::Ext { coeffs, .. } => coeffs.iter().fold(1, |acc, c| lcm(acc, c.scalar_order())),
        }
    }

    /// Renders with `s1..sn` for the symmetric variables and `y1..ys` for radicals.
    pub fn display(&self) -> String {
        fn s_name(i: usize) -> String {
            format!("s{}", i + 1)
        }
        match self {
            TowerElem::Base(r) => r.display_with(&s_name).to_string(),
            TowerElem::Ext { level, coeffs } => {
                let mut parts: Vec<String> = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let body = c.display();
                    let gen = match i {
                        0 => String::new(),
                        1 => format!("y{level}"),
                        _ => format!("y{level}^{i}"),
                    };
                    let is_unit = matches!(c.lowered(), TowerElem::Base(ref r) if r.is_one());
                    parts.push(match (gen.is_empty(), is_unit) {
                        (true, _) => format!("({body})"),
                        (false, true) => gen,
                        (false, false) => format!("({body})*{gen}"),
                    });
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TowerElem::Base(a), TowerElem::Base(b)) => a == b,
            (TowerElem::Ext { level: la, coeffs: ca }, TowerElem::Ext { level: lb, coeffs: cb }) if la == lb => {
                ca == cb
            }
            _ => {
                let (hi, lo) = if self.level() > other.level() { (self, other) } else { (other, self) };
                let cs = hi.coeffs();
                cs[1..].iter().all(TowerElem::is_zero) && &cs[0] == lo
            }
        }
    }
}

impl Eq for TowerElem {}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// Attestation that the radicand of a level is not a k-th power one level down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attestation {
    Verified,
    Asserted,
    Unknown,
}

impl Attestation {
    pub fn allows_inverse(self) -> bool {
        !matches!(self, Attestation::Unknown)
    }
}

/// Outcome of [`TowerSpec::nonpower_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonPower {
    Verified,
    Refuted(TowerElem),
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub k: u32,
    /// Radicand `p_{j-1}`, stored at level `j - 1`.
    pub rho: TowerElem,
    pub attestation: Attestation,
}

/// Remainder of a polynomial modulo `t^k - rho`, with a direct check of
/// `Q(r w^m) = 0` for every conjugate root `r w^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationReport {
    pub level: usize,
    pub remainder: Vec<TowerElem>,
    pub annihilated: bool,
    /// `(m, Q(r w^m) == 0)` for `m = 0..k`.
    pub conjugates: Vec<(u32, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCheck {
    pub level: usize,
    pub holds: bool,
    /// `p(s, w) - w^k` as a rational function of the roots, when nonzero.
    pub difference: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub checks: Vec<LevelCheck>,
    pub error: Option<String>,
}

impl WitnessReport {
    pub fn all_hold(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.checks.iter().find(|c| !c.holds).map(|c| c.level)
    }
}

/// The data `n`, `k_1..k_s`, `p_0..p_{s-1}` of a radical tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    n: usize,
    levels: Vec<Level>,
}

impl TowerSpec {
    pub fn new(n: usize) -> Self {
        TowerSpec { n, levels: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level `j`, 1-based.
    pub fn level(&self, j: usize) -> Result<&Level, TowerError> {
        if j == 0 {
            return Err(TowerError::NoSuchLevel(0));
        }
        self.levels.get(j - 1).ok_or(TowerError::NoSuchLevel(j))
    }

    pub fn k(&self, j: usize) -> u32 {
        self.levels[j - 1].k
    }

    pub fn rho(&self, j: usize) -> &TowerElem {
        &self.levels[j - 1].rho
    }

    pub fn ks(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.k).collect()
    }

    /// Adjoins `y` with `y^k = rho`, where `rho` lies at or below the current top.
    pub fn push_level(&mut self, k: u32, rho: TowerElem, attestation: Attestation) -> Result<usize, TowerError> {
        if !is_prime(k) {
            return Err(TowerError::NotPrime(k));
        }
        let top = self.height();
        if rho.level() > top {
            return Err(TowerError::LevelMismatch { max: top, got: rho.level() });
        }
        let rho = self.lift(&rho, top);
        self.levels.push(Level { k, rho, attestation });
        Ok(top + 1)
    }

    pub fn set_attestation(&mut self, j: usize, a: Attestation) -> Result<(), TowerError> {
        self.level(j)?;
        self.levels[j - 1].attestation = a;
        Ok(())
    }

    /// Marks every level whose non-power property can be verified.
    pub fn attest_verifiable(&mut self) {
        for j in 1..=self.height() {
            if self.levels[j - 1].attestation == Attestation::Unknown
                && self.nonpower_check(j) == NonPower::Verified
            {
                self.levels[j - 1].attestation = Attestation::Verified;
            }
        }
    }

    /// lcm of the radical exponents and of the orders of all constants.
    pub fn ambient_order(&self) -> u32 {
        self.levels
            .iter()
            .fold(1, |acc, l| lcm(lcm(acc, l.k), l.rho.scalar_order()))
    }

    pub fn base(&self, r: RatFunc) -> TowerElem {
        debug_assert_eq!(r.nvars(), self.n);
        TowerElem::Base(r)
    }

    pub fn zero(&self, level: usize) -> TowerElem {
        self.lift(&TowerElem::Base(RatFunc::zero(self.n)), level)
    }

    pub fn one(&self, level: usize) -> TowerElem {
        self.constant(CycScalar::one(), level)
    }

    pub fn constant(&self, c: CycScalar, level: usize) -> TowerElem {
        self.lift(&TowerElem::Base(RatFunc::constant(self.n, c)), level)
    }

    pub fn from_sigma_poly(&self, p: MPoly) -> TowerElem {
        TowerElem::Base(RatFunc::from_poly(p))
    }

    /// The i-th elementary symmetric variable (1-based) at level 0.
    pub fn sigma(&self, i: usize) -> TowerElem {
        self.from_sigma_poly(MPoly::var(self.n, i - 1))
    }

    /// The generator `y_j` at level `j`.
    pub fn gen(&self, j: usize) -> Result<TowerElem, TowerError> {
        let k = self.level(j)?.k as usize;
        let mut coeffs = vec![self.zero(j - 1); k];
        coeffs[1] = self.one(j - 1);
        Ok(TowerElem::Ext { level: j, coeffs })
    }

    /// Views `e` at a higher level through the constant coordinate.
    pub fn lift(&self, e: &TowerElem, to: usize) -> TowerElem {
        let mut e = e.clone();
        while e.level() < to {
            let j = e.level() + 1;
            let k = self.k(j) as usize;
            let mut coeffs = Vec::with_capacity(k);
            coeffs.push(e);
            coeffs.extend((1..k).map(|_| self.zero(j - 1)));
            e = TowerElem::Ext { level: j, coeffs };
        }
        e
    }

    fn align(&self, a: &TowerElem, b: &TowerElem) -> (TowerElem, TowerElem) {
        let l = a.level().max(b.level());
        (self.lift(a, l), self.lift(b, l))
    }

    pub fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let (a, b) = self.align(a, b);
        match (&a, &b) {
            (TowerElem::Base(x), TowerElem::Base(y)) => TowerElem::Base(x.add(y)),
            (TowerElem::Ext { level, coeffs: ca }, TowerElem::Ext { coeffs: cb, .. }) => TowerElem::Ext {
                level: *level,
                coeffs: ca.iter().zip(cb).map(|(x, y)| self.add(x, y)).collect(),
            },
            _ => unreachable!("aligned levels"),
        }
    }

    pub fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        // scalar-by-element products need no reduction
        if a.level() < b.level() {
            return self.mul_lower(b, a);
        }
        if b.level() < a.level() {
            return self.mul_lower(a, b);
        }
        match (a, b) {
            (TowerElem::Base(x), TowerElem::Base(y)) => TowerElem::Base(x.mul(y)),
            (TowerElem::Ext { level, coeffs: ca }, TowerElem::Ext { coeffs: cb, .. }) => {
                let j = *level;
                let k = ca.len();
                let mut prod = vec![self.zero(j - 1); 2 * k - 1];
                for (i, x) in ca.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (l, y) in cb.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        prod[i + l] = self.add(&prod[i + l], &self.mul(x, y));
                    }
                }
                let rho = self.rho(j);
                for i in (k..2 * k - 1).rev() {
                    let c = std::mem::replace(&mut prod[i], self.zero(j - 1));
                    if !c.is_zero() {
                        prod[i - k] = self.add(&prod[i - k], &self.mul(&c, rho));
                    }
                }
                prod.truncate(k);
                TowerElem::Ext { level: j, coeffs: prod }
            }
            _ => unreachable!("equal levels"),
        }
    }

    fn mul_lower(&self, hi: &TowerElem, lo: &TowerElem) -> TowerElem {
        match hi {
            TowerElem::Ext { level, coeffs } => TowerElem::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| self.mul(c, lo)).collect(),
            },
            TowerElem::Base(_) => unreachable!("hi has the larger level"),
        }
    }

    pub fn pow(&self, e: &TowerElem, k: u32) -> TowerElem {
        let mut acc = self.one(e.level());
        let mut base = e.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power; negative exponents go through [`TowerSpec::inverse`].
    pub fn pow_signed(&self, e: &TowerElem, k: i64) -> Result<TowerElem, TowerError> {
        if k >= 0 {
            Ok(self.pow(e, k as u32))
        } else {
            Ok(self.pow(&self.inverse(e)?, k.unsigned_abs() as u32))
        }
    }

    /// Multiplicative inverse by extended Euclid against `y^k - rho`. The
    /// remainder sequence uses pseudo-division, so coefficients stay free of
    /// new denominators; only the final constant remainder is inverted, one
    /// level down.
    pub fn inverse(&self, u: &TowerElem) -> Result<TowerElem, TowerError> {
        if u.is_zero() {
            return Err(TowerError::ZeroInverse);
        }
        let eff = u.effective_level();
        if eff < u.level() {
            let low = u.lowered_to(eff).expect("effective level");
            return Ok(self.lift(&self.inverse(&low)?, u.level()));
        }
        match u {
            TowerElem::Base(r) => Ok(TowerElem::Base(r.inv()?)),
            TowerElem::Ext { level, coeffs } => {
                let j = *level;
                let lvl = self.level(j)?;
                if !lvl.attestation.allows_inverse() {
                    return Err(TowerError::NotAttested(j));
                }
                let k = lvl.k as usize;
                let below = j - 1;
                let mut modulus = vec![self.zero(below); k + 1];
                modulus[0] = lvl.rho.neg();
                modulus[k] = self.one(below);
                // invariant: r_i = a_i * u modulo y^k - rho
                let (mut r0, mut r1) = (modulus.clone(), self.trim(coeffs.clone()));
                let (mut a0, mut a1) = (Vec::new(), vec![self.one(below)]);
                while r1.len() > 1 {
                    let (scale, q, r) = self.poly_pseudo_div_rem(&r0, &r1, below);
                    let a2 = self.poly_sub(&self.poly_scale(&a0, &scale), &self.poly_mul(&q, &a1, below), below);
                    r0 = std::mem::replace(&mut r1, r);
                    a0 = std::mem::replace(&mut a1, a2);
                }
                if r1.is_empty() {
                    return Err(TowerError::NonUnitGcd(j));
                }
                let c = self.inverse(&r1[0]).map_err(|e| match e {
                    TowerError::ZeroInverse => TowerError::NonUnitGcd(j),
                    other => other,
                })?;
                let (_, a) = self.poly_div_rem(&a1, &modulus, below)?;
                let mut out = vec![self.zero(below); k];
                for (i, t) in a.into_iter().enumerate() {
                    out[i] = self.mul(&t, &c);
                }
                Ok(TowerElem::Ext { level: j, coeffs: out })
            }
        }
    }

    /// `lc(b)^(deg a - deg b + 1) * a = q * b + r` with `deg r < deg b`; no inverses taken.
    fn poly_pseudo_div_rem(
        &self,
        a: &[TowerElem],
        b: &[TowerElem],
        level: usize,
    ) -> (TowerElem, Vec<TowerElem>, Vec<TowerElem>) {
        let db = b.len() - 1;
        let lc = &b[db];
        let mut rem = self.trim(a.to_vec());
        if rem.len() <= db {
            return (self.one(level), Vec::new(), rem);
        }
        let steps = rem.len() - db;
        let mut quot = vec![self.zero(level); steps];
        let mut scale = self.one(level);
        for _ in 0..steps {
            scale = self.mul(&scale, lc);
            if rem.len() <= db {
                rem = self.poly_scale(&rem, lc);
                quot = quot.iter().map(|x| self.mul(x, lc)).collect();
                continue;
            }
            let shift = rem.len() - 1 - db;
            let c = rem.last().unwrap().clone();
            rem = self.poly_scale(&rem, lc);
            quot = quot.iter().map(|x| self.mul(x, lc)).collect();
            for (i, y) in b.iter().enumerate() {
                rem[shift + i] = self.sub(&rem[shift + i], &self.mul(&c, y));
            }
            quot[shift] = self.add(&quot[shift], &c);
            rem.pop();
            rem = self.trim(rem);
        }
        (scale, self.trim(quot), rem)
    }

    fn poly_scale(&self, p: &[TowerElem], c: &TowerElem) -> Vec<TowerElem> {
        self.trim(p.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn div(&self, a: &TowerElem, b: &TowerElem) -> Result<TowerElem, TowerError> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    fn trim(&self, mut p: Vec<TowerElem>) -> Vec<TowerElem> {
        while p.last().is_some_and(TowerElem::is_zero) {
            p.pop();
        }
        p
    }

    fn poly_sub(&self, a: &[TowerElem], b: &[TowerElem], level: usize) -> Vec<TowerElem> {
        let len = a.len().max(b.len());
        let z = self.zero(level);
        let out = (0..len)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }

    fn poly_mul(&self, a: &[TowerElem], b: &[TowerElem], level: usize) -> Vec<TowerElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(level); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.trim(out)
    }

    /// Division with remainder of univariate polynomials over the given level.
    pub fn poly_div_rem(
        &self,
        a: &[TowerElem],
        b: &[TowerElem],
        level: usize,
    ) -> Result<(Vec<TowerElem>, Vec<TowerElem>), TowerError> {
        let b = self.trim(b.to_vec());
        let db = b.len().checked_sub(1).ok_or(TowerError::ZeroInverse)?;
        let lead_inv = self.inverse(&b[db])?;
        let mut rem = self.trim(a.to_vec());
        if rem.len() <= db {
            return Ok((Vec::new(), rem));
        }
        let mut quot = vec![self.zero(level); rem.len() - db];
        while rem.len() > db {
            let shift = rem.len() - 1 - db;
            let c = self.mul(rem.last().unwrap(), &lead_inv);
            for (j, y) in b.iter().enumerate() {
                rem[shift + j] = self.sub(&rem[shift + j], &self.mul(&c, y));
            }
            quot[shift] = c;
            rem.pop();
            rem = self.trim(rem);
        }
        Ok((self.trim(quot), rem))
    }

    /// Evaluates `sum coeffs[i] * x^i` at `x` by Horner's rule.
    pub fn eval_univariate(&self, coeffs: &[TowerElem], x: &TowerElem) -> TowerElem {
        let mut acc = self.zero(x.level());
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// The substitution `y_j -> w_k^power * y_j`, fixing the levels below `j`.
    /// Elements above level `j` are mapped coefficient-wise; this is a field
    /// automorphism only when `j` is the top level or no higher radicand
    /// involves `y_j`.
    pub fn conjugate(&self, e: &TowerElem, j: usize, power: u32) -> TowerElem {
        if e.level() < j || power == 0 {
            return e.clone();
        }
        match e {
            TowerElem::Base(_) => e.clone(),
            TowerElem::Ext { level, coeffs } if *level == j => {
                let k = coeffs.len() as u32;
                let w = CycScalar::epsilon(k);
                TowerElem::Ext {
                    level: j,
                    coeffs: coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c.scale(&w.pow((power * i as u32) % k)))
                        .collect(),
                }
            }
            TowerElem::Ext { level, coeffs } => TowerElem::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| self.conjugate(c, j, power)).collect(),
            },
        }
    }

    /// Decides (where possible) whether the radicand of level `j` is a
    /// `k_j`-th power one level down.
    pub fn nonpower_check(&self, j: usize) -> NonPower {
        let Ok(lvl) = self.level(j) else {
            return NonPower::Undecided;
        };
        let k = lvl.k;
        let rho = lvl.rho.lowered();
        if let TowerElem::Base(r) = &rho {
            // A/B is a k-th power iff A * B^(k-1) is
            let probe = &r.num * &r.den.pow(k - 1);
            match probe.kth_root(k) {
                KthRoot::Root(g) => {
                    let root = RatFunc::new(g, r.den.clone()).expect("nonzero");
                    return NonPower::Refuted(self.lift(&TowerElem::Base(root), j - 1));
                }
                KthRoot::NoRoot if j == 1 => return NonPower::Verified,
                KthRoot::Undecided if j == 1 => return NonPower::Undecided,
                _ => {}
            }
        }
        // literal k-th powers of stored generators and radicands
        for i in 1..j {
            let candidates = [self.gen(i).expect("exists"), self.rho(i).clone()];
            for c in candidates {
                if self.pow(&c, k) == lvl.rho {
                    return NonPower::Refuted(self.lift(&c, j - 1));
                }
            }
        }
        NonPower::Undecided
    }

    /// Reduces `Q(t)` modulo `t^k - rho` for level `r_level` and checks every
    /// conjugate root. Coefficients of `Q` must lie below `r_level`.
    pub fn check_annihilation(&self, q: &[TowerElem], r_level: usize) -> Result<AnnihilationReport, TowerError> {
        let lvl = self.level(r_level)?;
        let below = r_level - 1;
        if let Some(bad) = q.iter().find(|c| c.level() > below) {
            return Err(TowerError::LevelMismatch { max: below, got: bad.level() });
        }
        let q: Vec<TowerElem> = q.iter().map(|c| self.lift(c, below)).collect();
        let k = lvl.k as usize;
        let mut modulus = vec![self.zero(below); k + 1];
        modulus[0] = lvl.rho.neg();
        modulus[k] = self.one(below);
        let (_, remainder) = self.poly_div_rem(&q, &modulus, below)?;
        let annihilated = remainder.is_empty();
        let y = self.gen(r_level)?;
        let conjugates = (0..lvl.k)
            .map(|m| {
                let root = self.conjugate(&y, r_level, m);
                (m, self.eval_univariate(&q, &root).is_zero())
            })
            .collect();
        Ok(AnnihilationReport { level: r_level, remainder, annihilated, conjugates })
    }

    /// Image of `e` in the rational functions of the roots under
    /// `s_i -> sigma_i(x)` and `y_j -> witnesses[j-1]`.
    pub fn embed(&self, e: &TowerElem, witnesses: &[MPoly]) -> Result<RatFunc, TowerError> {
        let sigmas = elem_syms(self.n);
        self.embed_with(e, witnesses, &sigmas)
    }

    fn embed_with(&self, e: &TowerElem, witnesses: &[MPoly], sigmas: &[MPoly]) -> Result<RatFunc, TowerError> {
        match e {
            TowerElem::Base(r) => r.compose(sigmas, self.n),
            TowerElem::Ext { level, coeffs } => {
                let w = witnesses
                    .get(level - 1)
                    .ok_or(TowerError::WitnessCount { expected: *level, got: witnesses.len() })?;
                let w = RatFunc::from_poly(w.clone());
                let mut acc = RatFunc::zero(self.n);
                for c in coeffs.iter().rev() {
                    acc = acc.mul(&w).add(&self.embed_with(c, witnesses, sigmas)?);
                }
                Ok(acc)
            }
        }
    }

    /// Checks `w_j^k_j = p_{j-1}(sigma(x), w_1..w_{j-1})` for every level.
    pub fn witness_check(&self, witnesses: &[MPoly]) -> WitnessReport {
        let mut checks = Vec::new();
        for j in 1..=self.height() {
            let Some(w) = witnesses.get(j - 1) else {
                return WitnessReport {
                    checks,
                    error: Some(format!("no witness for level {j}")),
                };
            };
            if w.nvars() != self.n {
                return WitnessReport {
                    checks,
                    error: Some(format!("witness {j} has {} variables, expected {}", w.nvars(), self.n)),
                };
            }
            let rhs = match self.embed(self.rho(j), witnesses) {
                Ok(r) => r,
                Err(e) => {
                    return WitnessReport { checks, error: Some(format!("level {j}: {e}")) };
                }
            };
            let lhs = RatFunc::from_poly(w.pow(self.k(j)));
            let holds = lhs == rhs;
            let difference = (!holds).then(|| {
                fn x_name(i: usize) -> String {
                    format!("x{}", i + 1)
                }
                rhs.sub(&lhs).display_with(&x_name).to_string()
            });
            checks.push(LevelCheck { level: j, holds, difference });
        }
        WitnessReport { checks, error: None }
    }

    /// A copy of the first `j` levels.
    pub fn truncated(&self, j: usize) -> TowerSpec {
        TowerSpec { n: self.n, levels: self.levels[..j].to_vec() }
    }
}
