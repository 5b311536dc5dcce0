//! Residues of the quantum momentum function `chi = psi'/psi` (in the
//! transformed variable `y`) at fixed poles, its moving poles and its
//! behaviour at infinity.
//!
//! With `chi^2 + chi' + G(y) = 0`, a double pole of `G` with coefficient `g2`
//! forces `b^2 - b + g2 = 0`; at infinity `chi = a0 + lambda1 / y + ...` with
//! `G = G0 + G1 / y + G2 / y^2 + ...`.

use crate::error::{QhjError, Result};
use crate::exact::Scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative tolerance used when deciding whether a coefficient vanishes.
pub const ZERO_TOL: f64 = 1e-12;

/// Residue bookkeeping convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// `chi = psi'/psi`, the default.
    Chi,
    /// `p = -i psi'/psi`.
    Momentum,
}

/// Residue of the momentum function at any moving pole (a node of `psi`).
pub fn moving_pole_residue(convention: Convention) -> Complex64 {
    match convention {
        Convention::Chi => Complex64::new(1.0, 0.0),
        Convention::Momentum => Complex64::new(0.0, -1.0),
    }
}

/// A coefficient of the form `constant + slope * E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub constant: Scalar,
    pub slope: Scalar,
}

impl Affine {
    pub fn fixed(constant: Scalar) -> Self {
        Self { constant, slope: Scalar::zero() }
    }

    pub fn new(constant: Scalar, slope: Scalar) -> Self {
        Self { constant, slope }
    }

    pub fn depends_on_energy(&self) -> bool {
        !self.slope.is_negligible(0.0)
    }

    pub fn at(&self, energy: &Scalar) -> Scalar {
        if self.depends_on_energy() {
            self.constant + self.slope * *energy
        } else {
            self.constant
        }
    }

    /// Energy at which this coefficient takes `target`.
    pub fn solve(&self, target: &Scalar) -> Option<Scalar> {
        self.depends_on_energy().then(|| (*target - self.constant) / self.slope)
    }
}

/// A fixed pole of `chi` at `location`, where `G ~ g2 / (y - location)^2`.
#[derive(Clone, Debug)]
pub struct FixedPole {
    pub label: String,
    pub location: Complex64,
    pub g2: Affine,
}

/// Leading coefficients of `G` at large `y`.
#[derive(Clone, Copy, Debug)]
pub struct InfinityData {
    pub g0: Affine,
    pub g1: Affine,
    pub g2: Affine,
}

/// Order two candidates: larger real part first, ties broken by larger imaginary part.
fn ordered(a: Scalar, b: Scalar) -> [Scalar; 2] {
    let tie = (a.re() - b.re()).abs() <= ZERO_TOL * (1.0 + a.re().abs() + b.re().abs());
    let a_first = if tie { a.im() >= b.im() } else { a.re() > b.re() };
    if a_first { [a, b] } else { [b, a] }
}

/// The two roots of `b^2 - b + g2 = 0`, ordered.
pub fn finite_pole_residues(g2: &Scalar) -> [Scalar; 2] {
    let half = Scalar::ratio(1, 2);
    let root = (Scalar::one() - Scalar::int(4) * *g2).sqrt();
    ordered(half + half * root, half - half * root)
}

/// Residue branch selected by the sign of the square root in `(1 +- sqrt(1 - 4 g2))/2`.
pub fn residue_with_sign(g2: &Scalar, sign: i8) -> Scalar {
    let half = Scalar::ratio(1, 2);
    let root = (Scalar::one() - Scalar::int(4) * *g2).sqrt();
    if sign >= 0 { half + half * root } else { half - half * root }
}

/// One branch of the expansion `chi = a0 + lambda1 / y + ...` at infinity.
#[derive(Clone, Copy, Debug)]
pub struct InfinityBranch {
    pub a0: Scalar,
    pub lambda1: Scalar,
}

/// Both branches at infinity for numeric `G0, G1, G2`, ordered by `a0` when it
/// is non-zero and by `lambda1` otherwise.
pub fn infinity_branches(g0: &Scalar, g1: &Scalar, g2: &Scalar) -> Result<[InfinityBranch; 2]> {
    if !g0.is_negligible(ZERO_TOL) {
        let a0 = (-*g0).sqrt();
        let [p, m] = ordered(a0, -a0);
        let lam = |a: Scalar| -*g1 / (Scalar::int(2) * a);
        return Ok([
            InfinityBranch { a0: p, lambda1: lam(p) },
            InfinityBranch { a0: m, lambda1: lam(m) },
        ]);
    }
    if !g1.is_negligible(ZERO_TOL) {
        return Err(QhjError::UnsupportedExpansion(format!(
            "G0 vanishes but G1 = {g1} does not; chi would need a y^(-1/2) term"
        )));
    }
    let [p, m] = finite_pole_residues(g2);
    Ok([
        InfinityBranch { a0: Scalar::zero(), lambda1: p },
        InfinityBranch { a0: Scalar::zero(), lambda1: m },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lame_residues_are_three_quarters_and_one_quarter() {
        let [a, b] = finite_pole_residues(&Scalar::ratio(3, 16));
        assert_eq!(a, Scalar::ratio(3, 4));
        assert_eq!(b, Scalar::ratio(1, 4));
    }

    #[test]
    fn moving_pole_conventions() {
        assert_eq!(moving_pole_residue(Convention::Chi), Complex64::new(1.0, 0.0));
        assert_eq!(moving_pole_residue(Convention::Momentum), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn unsupported_expansion_is_reported() {
        let r = infinity_branches(&Scalar::zero(), &Scalar::int(1), &Scalar::zero());
        assert!(matches!(r, Err(QhjError::UnsupportedExpansion(_))));
    }

    #[test]
    fn purely_imaginary_split_orders_by_imaginary_part() {
        // 1 - 4 g2 = -3/4 -> b = 1/2 +- i sqrt(3)/4
        let [a, b] = finite_pole_residues(&Scalar::ratio(7, 16));
        assert!(a.im() > 0.0 && b.im() < 0.0);
    }
}
