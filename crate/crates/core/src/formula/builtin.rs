//! Built-in quadratic and cubic formulas, in polynomial and tower form.

use std::fmt;
use std::str::FromStr;

use crate::cyclotomic::CycScalar;
use crate::multipoly::MPoly;
use crate::tower::{Attestation, TowerSpec};

use super::{FormalRadicalFormula, PolyRadicalFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Degree2,
    Degree3,
}

impl Builtin {
    pub const ALL: [Builtin; 2] = [Builtin::Degree2, Builtin::Degree3];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Degree2 => "degree2",
            Builtin::Degree3 => "degree3",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "degree2" => Ok(Builtin::Degree2),
            "degree3" => Ok(Builtin::Degree3),
            _ => Err(format!("unknown builtin '{s}' (expected degree2 or degree3)")),
        }
    }
}

fn half() -> CycScalar {
    CycScalar::from_ratio(1, 2)
}

/// `u = x1 + w x2 + w^2 x3` and `v = x1 + w^2 x2 + w x3` for `w = w(3)`.
pub(crate) fn lagrange_resolvents() -> (MPoly, MPoly) {
    let w = CycScalar::epsilon(3);
    let w2 = w.pow(2);
    let x = |i| MPoly::var(3, i);
    let u = &(&x(0) + &x(1).scale(&w)) + &x(2).scale(&w2);
    let v = &(&x(0) + &x(1).scale(&w2)) + &x(2).scale(&w);
    (u, v)
}

struct CubicData {
    u: MPoly,
    v: MPoly,
    /// `(u^3 - v^3)^2` in the elementary symmetric variables.
    disc: MPoly,
    /// `u^3 + v^3` in the elementary symmetric variables.
    sum: MPoly,
}

fn cubic_data() -> CubicData {
    let (u, v) = lagrange_resolvents();
    let (u3, v3) = (u.pow(3), v.pow(3));
    let disc = (&u3 - &v3).pow(2).symmetrize().expect("symmetric");
    let sum = (&u3 + &v3).symmetrize().expect("symmetric");
    CubicData { u, v, disc, sum }
}

/// The polynomial radical formula for the named degree.
pub fn builtin(b: Builtin) -> PolyRadicalFormula {
    match b {
        Builtin::Degree2 => {
            let s1 = MPoly::var(2, 0);
            let s2 = MPoly::var(2, 1);
            let p0 = &s1.pow(2) - &s2.scale(&CycScalar::from_integer(4));
            let p1 = (&MPoly::var(3, 0) + &MPoly::var(3, 2)).scale(&half());
            let w = &MPoly::var(2, 0) - &MPoly::var(2, 1);
            PolyRadicalFormula::new(2, vec![2], vec![p0, p1], vec![w]).expect("well formed")
        }
        Builtin::Degree3 => {
            let CubicData { u, v, disc, sum } = cubic_data();
            let f1 = &u.pow(3) - &v.pow(3);
            let p1 = (&sum.with_nvars(4).expect("fits") + &MPoly::var(4, 3)).scale(&half());
            let p2 = (&sum.with_nvars(5).expect("fits") - &MPoly::var(5, 3)).scale(&half());
            let p3 = (&(&MPoly::var(6, 0) + &MPoly::var(6, 4)) + &MPoly::var(6, 5))
                .scale(&CycScalar::from_ratio(1, 3));
            PolyRadicalFormula::new(3, vec![2, 3, 3], vec![disc, p1, p2, p3], vec![f1, u, v]).expect("well formed")
        }
    }
}

/// The tower form: the same radicals, with the last one dropped for the
/// cubic, since `v = (s1^2 - 3 s2) / u` already lies in the tower.
pub fn builtin_tower(b: Builtin) -> FormalRadicalFormula {
    match b {
        Builtin::Degree2 => {
            FormalRadicalFormula::from_poly_formula(&builtin(Builtin::Degree2)).expect("prime exponents")
        }
        Builtin::Degree3 => {
            let CubicData { u, v, disc, sum } = cubic_data();
            let mut tower = TowerSpec::new(3);
            tower.push_level(2, tower.from_sigma_poly(disc), Attestation::Unknown).expect("prime");
            let y1 = tower.gen(1).expect("level 1");
            let p1 = tower.add(&tower.from_sigma_poly(sum), &y1).scale(&half());
            tower.push_level(3, p1, Attestation::Asserted).expect("prime");

            let mut working = tower.clone();
            working.attest_verifiable();
            let s1 = MPoly::var(3, 0);
            let c = &s1.pow(2) - &MPoly::var(3, 1).scale(&CycScalar::from_integer(3));
            let y2 = working.gen(2).expect("level 2");
            let v_elem = working.mul(&working.from_sigma_poly(c), &working.inverse(&y2).expect("attested"));
            let sum3 = working.add(&working.add(&working.sigma(1), &y2), &v_elem);
            let target = sum3.scale(&CycScalar::from_ratio(1, 3));
            let f1 = &u.pow(3) - &v.pow(3);
            FormalRadicalFormula::new(tower, target, vec![Some(f1), Some(u)]).expect("well formed")
        }
    }
}
