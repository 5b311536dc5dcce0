//! Jacobi elliptic functions, the complete elliptic integral `K(m)` and the
//! classical orthogonal polynomials used by closed-form wavefunctions.
//!
//! The parameter convention is `m = k^2` throughout. Elliptic functions use the
//! arithmetic-geometric mean with descending Landen transformations.

use crate::error::{QhjError, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

const AGM_TOL: f64 = 1e-16;

fn check_parameter(m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) || m.is_nan() {
        return Err(QhjError::Domain(format!(
            "elliptic parameter m = {m} must lie in [0, 1]"
        )));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind, `K(m) = pi / (2 agm(1, sqrt(1-m)))`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    check_parameter(m)?;
    if m == 1.0 {
        return Err(QhjError::Domain("K(m) diverges at m = 1".into()));
    }
    let (mut a, mut b) = (1.0_f64, (1.0 - m).sqrt());
    for _ in 0..64 {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(FRAC_PI_2 / a)
}

/// Values of `sn`, `cn` and `dn` at a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Jacobi elliptic functions `sn(x|m)`, `cn(x|m)`, `dn(x|m)` for real `x`.
pub fn jacobi_sn_cn_dn(x: f64, m: f64) -> Result<JacobiTriple> {
    check_parameter(m)?;
    if !x.is_finite() {
        return Err(QhjError::Domain(format!("non-finite argument {x}")));
    }
    if m == 0.0 {
        return Ok(JacobiTriple { sn: x.sin(), cn: x.cos(), dn: 1.0 });
    }
    if m == 1.0 {
        let s = 1.0 / x.cosh();
        return Ok(JacobiTriple { sn: x.tanh(), cn: s, dn: s });
    }
    let mut a = vec![1.0_f64];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > AGM_TOL && a.len() < 64 {
        let an = *a.last().unwrap();
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * x;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    Ok(JacobiTriple { sn, cn, dn })
}

fn binomial(z: Complex64, k: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..k {
        acc *= (z - j as f64) / (j as f64 + 1.0);
    }
    acc
}

/// Jacobi polynomial `P_n^(alpha, beta)(x)` for complex parameters and argument.
///
/// Uses the finite binomial sum, which stays valid when the three-term
/// recurrence hits a vanishing denominator.
pub fn jacobi_polynomial(n: usize, alpha: Complex64, beta: Complex64, x: Complex64) -> Complex64 {
    let xm = (x - 1.0) * 0.5;
    let xp = (x + 1.0) * 0.5;
    (0..=n)
        .map(|s| binomial(alpha + n as f64, n - s) * binomial(beta + n as f64, s) * xm.powu(s as u32) * xp.powu((n - s) as u32))
        .sum()
}

/// Generalised Laguerre polynomial `L_n^(alpha)(x)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_at_zero_and_half() {
        assert!((elliptic_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        // K(1/2) = Gamma(1/4)^2 / (4 sqrt(pi))
        assert!((elliptic_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(elliptic_k(1.2).is_err());
        assert!(jacobi_sn_cn_dn(0.3, -0.1).is_err());
    }

    #[test]
    fn quarter_period_values() {
        let m = 0.7;
        let k = elliptic_k(m).unwrap();
        let t = jacobi_sn_cn_dn(k, m).unwrap();
        assert!((t.sn - 1.0).abs() < 1e-13);
        assert!(t.cn.abs() < 1e-7);
        assert!((t.dn - (1.0 - m).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn jacobi_matches_legendre_special_case() {
        // P_2^(0,0)(x) = (3x^2 - 1)/2
        let x = Complex64::new(0.3, 0.2);
        let p = jacobi_polynomial(2, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), x);
        assert!((p - (x * x * 3.0 - 1.0) * 0.5).norm() < 1e-14);
    }

    #[test]
    fn laguerre_low_orders() {
        let x = 0.7;
        assert!((laguerre(2, 1.0, x) - (x * x / 2.0 - 3.0 * x + 3.0)).abs() < 1e-14);
    }
}
