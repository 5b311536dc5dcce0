//! Tridiagonal eigen-solvers: Sturm bisection and inverse iteration.

use num_complex::Complex64;

/// Number of eigenvalues of the symmetric tridiagonal matrix `(d, e)` below `x`.
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..d.len() {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < d.len() { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo, hi)
}

/// The `k` lowest eigenvalues by bisection on the Sturm count.
pub fn lowest_eigenvalues(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    let (glo, ghi) = gershgorin(d, e);
    (0..k.min(d.len()))
        .map(|i| {
            let (mut lo, mut hi) = (glo, ghi);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(d, e, mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 4.0 * f64::EPSILON * (lo.abs() + hi.abs()).max(1e-300) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Solve a general tridiagonal system `sub_i x_{i-1} + diag_i x_i + sup_i x_{i+1} = rhs_i`.
pub fn thomas<T>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T>
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Div<Output = T>
        + Tiny,
{
    let n = diag.len();
    let mut cp = vec![T::zero(); n];
    let mut dp = vec![T::zero(); n];
    let mut piv = diag[0].guard();
    cp[0] = if n > 1 { sup[0] / piv } else { T::zero() };
    dp[0] = rhs[0] / piv;
    for i in 1..n {
        piv = (diag[i] - sub[i - 1] * cp[i - 1]).guard();
        if i + 1 < n {
            cp[i] = sup[i] / piv;
        }
        dp[i] = (rhs[i] - sub[i - 1] * dp[i - 1]) / piv;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let t = x[i + 1];
        x[i] = x[i] - cp[i] * t;
    }
    x
}

/// Scalars that can replace an exactly vanishing pivot.
pub trait Tiny {
    fn zero() -> Self;
    fn guard(self) -> Self;
}

impl Tiny for f64 {
    fn zero() -> Self {
        0.0
    }
    fn guard(self) -> Self {
        if self.abs() < 1e-300 { 1e-300 } else { self }
    }
}

impl Tiny for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn guard(self) -> Self {
        if self.norm() < 1e-300 { Complex64::new(1e-300, 0.0) } else { self }
    }
}

/// Eigenvector of the symmetric tridiagonal matrix for a converged eigenvalue.
pub fn eigenvector(d: &[f64], e: &[f64], lambda: f64) -> Vec<f64> {
    let n = d.len();
    let shift = lambda + 1e-10 * lambda.abs().max(1.0);
    let diag: Vec<f64> = d.iter().map(|&x| x - shift).collect();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    for _ in 0..3 {
        v = thomas(e, &diag, e, &v);
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    v
}

/// Symmetric tridiagonal pencil `K - lambda M` with `M` positive definite.
#[derive(Clone, Debug)]
pub struct TridiagonalPencil {
    pub kd: Vec<f64>,
    pub ke: Vec<f64>,
    pub md: Vec<f64>,
    pub me: Vec<f64>,
}

impl TridiagonalPencil {
    /// Number of generalized eigenvalues below `x` (inertia of `K - x M`).
    pub fn count_below(&self, x: f64) -> usize {
        let d: Vec<f64> = self.kd.iter().zip(&self.md).map(|(k, m)| k - x * m).collect();
        let e: Vec<f64> = self.ke.iter().zip(&self.me).map(|(k, m)| k - x * m).collect();
        sturm_count(&d, &e, 0.0)
    }

    /// The `k` lowest generalized eigenvalues by bisection.
    pub fn lowest(&self, k: usize) -> Vec<f64> {
        let mut lo = self.kd.iter().zip(&self.md).map(|(a, b)| a / b).fold(f64::INFINITY, f64::min).min(0.0) - 1.0;
        while self.count_below(lo) > 0 {
            lo = 2.0 * lo - 1.0;
        }
        let mut hi = lo.abs().max(1.0);
        while self.count_below(hi) < k {
            hi *= 2.0;
        }
        (0..k)
            .map(|i| {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if self.count_below(mid) > i {
                        b = mid;
                    } else {
                        a = mid;
                    }
                    if b - a <= 4.0 * f64::EPSILON * (a.abs() + b.abs()).max(1e-300) {
                        break;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    fn apply_m(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut s = self.md[i] * v[i];
                if i > 0 {
                    s += self.me[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.me[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Eigenvector for a converged eigenvalue, normalized in the `M` inner product.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        let d: Vec<f64> = self.kd.iter().zip(&self.md).map(|(k, m)| k - shift * m).collect();
        let e: Vec<f64> = self.ke.iter().zip(&self.me).map(|(k, m)| k - shift * m).collect();
        let mut v: Vec<f64> = (0..d.len()).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..3 {
            v = thomas(&e, &d, &e, &self.apply_m(&v));
            let nrm = v.iter().zip(self.apply_m(&v)).map(|(a, b)| a * b).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= nrm);
        }
        v
    }

    /// `||K v - lambda M v|| / ||M v||`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let n = v.len();
        let mv = self.apply_m(v);
        let mut s = 0.0;
        for i in 0..n {
            let mut kv = self.kd[i] * v[i];
            if i > 0 {
                kv += self.ke[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                kv += self.ke[i] * v[i + 1];
            }
            s += (kv - lambda * mv[i]).powi(2);
        }
        s.sqrt() / mv.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// General complex tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct ComplexTridiagonal {
    pub sub: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub sup: Vec<Complex64>,
}

impl ComplexTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.sub[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.len();
        nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if j + 1 == i {
                self.sub[j]
            } else if i + 1 == j {
                self.sup[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Inverse iteration at a fixed shift near `guess`.
    /// Returns the eigenvalue, the eigenvector and the relative residual.
    pub fn refine(&self, guess: Complex64) -> (Complex64, Vec<Complex64>, f64) {
        let n = self.len();
        let shift = guess + Complex64::new(1e-12, 1e-12) * guess.norm().max(1.0);
        let diag: Vec<Complex64> = self.diag.iter().map(|&x| x - shift).collect();
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + 0.1 * ((i * 7919) % 13) as f64, 0.05 * (i % 5) as f64))
            .collect();
        let mut lambda = guess;
        for it in 0..60 {
            let w = thomas(&self.sub, &diag, &self.sup, &v);
            let vw: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            let vv: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            let next = shift + vv / vw;
            let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.iter().map(|z| z / nrm).collect();
            let step = (next - lambda).norm();
            lambda = next;
            if it >= 3 && step <= 1e-14 * lambda.norm().max(1.0) {
                break;
            }
        }
        let hv = self.apply(&v);
        let res = hv.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt();
        (lambda, v, res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_bisection_on_second_difference() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(k pi/(n+1))
        let n = 50;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let ev = lowest_eigenvalues(&d, &e, 3);
        for (k, &x) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((x - exact).abs() < 1e-13);
        }
        let v = eigenvector(&d, &e, ev[0]);
        assert!(v.iter().all(|&x| x * v[n / 2] > 0.0));
    }

    #[test]
    fn pencil_with_identity_mass_matches_standard_problem() {
        let n = 40;
        let p = TridiagonalPencil { kd: vec![2.0; n], ke: vec![-1.0; n - 1], md: vec![1.0; n], me: vec![0.0; n - 1] };
        let ev = p.lowest(2);
        let std = lowest_eigenvalues(&p.kd, &p.ke, 2);
        assert!((ev[0] - std[0]).abs() < 1e-13 && (ev[1] - std[1]).abs() < 1e-13);
        let v = p.eigenvector(ev[1]);
        assert!(p.residual(ev[1], &v) < 1e-10);
    }
}
