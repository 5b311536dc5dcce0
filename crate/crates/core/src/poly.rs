//! Dense univariate polynomials with complex coefficients, lowest degree first.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        p.trim_exact();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| c(x)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(a: Complex64) -> Self {
        Self::new(vec![a])
    }

    pub fn one() -> Self {
        Self::constant(c(1.0))
    }

    /// The monomial `y`.
    pub fn x() -> Self {
        Self::new(vec![c(0.0), c(1.0)])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Poly::one(), |acc, &r| &acc * &Poly::new(vec![-r, c(1.0)]))
    }

    fn trim_exact(&mut self) {
        while self.coeffs.last().is_some_and(|z| *z == c(0.0)) {
            self.coeffs.pop();
        }
    }

    /// Drop leading coefficients below `tol` times the largest one.
    pub fn trimmed(&self, tol: f64) -> Self {
        let scale = self.max_abs();
        let mut out = self.clone();
        while out.coeffs.last().is_some_and(|z| z.norm() <= tol * scale) {
            out.coeffs.pop();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(c(0.0))
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(c(0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(c(0.0), |acc, &a| acc * y + a)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&z| z * a).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &z)| z * k as f64)
                .collect(),
        )
    }

    /// Multiply by `y^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![c(0.0); k];
        v.extend_from_slice(&self.coeffs);
        Self::new(v)
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let d = d.trimmed(0.0);
        let dn = d.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dn {
            return (Poly::zero(), self.clone());
        }
        let lead = d.leading();
        let mut q = vec![c(0.0); r.len() - dn];
        for k in (0..q.len()).rev() {
            let t = r[k + dn] / lead;
            q[k] = t;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= t * dj;
            }
        }
        r.truncate(dn);
        (Poly::new(q), Poly::new(r))
    }

    /// Exact division with a relative remainder check.
    pub fn div_exact(&self, d: &Poly, tol: f64) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        let scale = self.max_abs().max(1e-300);
        (r.max_abs() <= tol * scale).then_some(q)
    }

    /// First few coefficients `g_0, g_1, ...` of `self / d` in powers of `1/y`,
    /// normalised so that `g_0` multiplies `y^0`. Requires `deg self <= deg d`.
    pub fn expand_at_infinity(&self, d: &Poly, terms: usize) -> Vec<Complex64> {
        let dn = d.degree().expect("zero denominator");
        // reversed coefficient sequences: a(u) = u^dn self(1/u), b(u) = u^dn d(1/u)
        let a: Vec<Complex64> = (0..=dn + terms).map(|k| {
            if k <= dn { self.coeff(dn - k) } else { c(0.0) }
        }).collect();
        let b: Vec<Complex64> = (0..=dn).map(|k| d.coeff(dn - k)).collect();
        let mut g = vec![c(0.0); terms];
        for k in 0..terms {
            let mut acc = a[k];
            for j in 1..=k.min(dn) {
                acc -= b[j] * g[k - j];
            }
            g[k] = acc / b[0];
        }
        g
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![c(0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(c(-1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_recovers_factor() {
        let a = Poly::from_roots(&[c(1.0), c(-2.0), Complex64::new(0.0, 1.0)]);
        let b = Poly::from_roots(&[c(-2.0)]);
        let q = a.div_exact(&b, 1e-13).unwrap();
        assert!((q.eval(c(3.0)) - (c(2.0) * Complex64::new(3.0, -1.0))).norm() < 1e-12);
    }

    #[test]
    fn expansion_at_infinity_matches_series() {
        // (y^2 + 3y + 5) / (y^2 - 1) = 1 + 3/y + 6/y^2 + ...
        let n = Poly::from_real(&[5.0, 3.0, 1.0]);
        let d = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let g = n.expand_at_infinity(&d, 3);
        assert!((g[0] - c(1.0)).norm() < 1e-14);
        assert!((g[1] - c(3.0)).norm() < 1e-14);
        assert!((g[2] - c(6.0)).norm() < 1e-14);
    }
}
