//! Linear system for the polynomial factor `P_n`.
//!
//! Writing `chi = sum_i b_i/(y - y_i) + C + P'/P` turns the Riccati equation
//! into
//!
//! ```text
//! D1 P'' + 2 U P' + H P = 0,   D1 = prod_i (y - y_i),
//! U = sum_i b_i D1/(y - y_i) + C D1,
//! H = (U^2 - sum_i b_i (D1/(y - y_i))^2 + N0 + E N1) / D1.
//! ```
//!
//! Collecting powers of `y` for `P = sum_k c_k y^k` gives `(M0 + E M1) c = 0`.

use crate::catalog::Model;
use crate::error::{QhjError, Result};
use crate::poly::Poly;
use crate::quantization::Assignment;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ROW_TOL: f64 = 1e-12;
const CLUSTER_TOL: f64 = 1e-8;

type CMat = DMatrix<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Parity of a polynomial in the mapped variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// Coefficients of `P_n(y)`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialOnT {
    pub coeffs: Vec<Complex64>,
    pub parity: Parity,
}

impl PolynomialOnT {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(c(0.0), |acc, &a| acc * y + a)
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

/// `(M0 + E M1) c = 0` on the retained monomials. With a fixed energy `M0`
/// holds every informative row and may be rectangular.
#[derive(Clone, Debug)]
pub struct PencilSystem {
    pub m0: CMat,
    pub m1: CMat,
    /// Retained monomial degrees, ascending.
    pub basis: Vec<usize>,
    /// Row degrees used for the square system.
    pub rows: Vec<usize>,
    /// Remaining non-trivial rows; they must vanish on a solution.
    pub overflow0: CMat,
    pub overflow1: CMat,
    pub overflow_rows: Vec<usize>,
    /// Energy already fixed by the residues, in which case `M1 = 0`.
    pub fixed_energy: Option<Complex64>,
    pub parity: Parity,
    pub degree: usize,
}

/// Energy with its polynomial solutions.
#[derive(Clone, Debug)]
pub struct PencilSolution {
    pub energy: Complex64,
    /// Kernel vectors, one per independent polynomial.
    pub polynomials: Vec<PolynomialOnT>,
    /// Algebraic multiplicity of the eigenvalue cluster.
    pub multiplicity: usize,
}

/// Solutions together with diagnostics.
#[derive(Clone, Debug, Default)]
pub struct PencilOutput {
    pub solutions: Vec<PencilSolution>,
    pub warnings: Vec<String>,
    /// Whether the determinant was also solved in closed form.
    pub cross_checked: bool,
}

/// Assemble the pencil for an admissible assignment.
pub fn build_pencil(model: &Model, a: &Assignment) -> Result<PencilSystem> {
    let locs = model.pole_locations();
    let d1 = Poly::from_roots(&locs);
    let lagr: Vec<Poly> = (0..locs.len())
        .map(|i| {
            let others: Vec<Complex64> =
                locs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &y)| y).collect();
            Poly::from_roots(&others)
        })
        .collect();
    let mut u = d1.scale(a.a0.value);
    let mut sq = Poly::zero();
    for (b, l) in a.residues.iter().zip(&lagr) {
        u = &u + &l.scale(b.value);
        sq = &sq + &(l * l).scale(b.value);
    }
    let (_, n0, n1) = model.g_rational();
    let base = &(&u * &u) - &sq;
    let pole_energy = model.poles.iter().any(|p| p.g2.depends_on_energy());
    let (h0, h1, fixed_energy) = if pole_energy {
        let e = a
            .energy
            .ok_or_else(|| QhjError::Inconsistent("pole coefficients need a fixed energy".into()))?
            .value;
        let e_n1 = n1.scale(e);
        let scale = base.max_abs().max(n0.max_abs()).max(e_n1.max_abs());
        let h = divide(&(&(&base + n0) + &e_n1), &d1, scale)
            .ok_or_else(|| QhjError::Numerical("remainder in H; residues inconsistent with energy".into()))?;
        (h, Poly::zero(), Some(e))
    } else {
        let scale = base.max_abs().max(n0.max_abs());
        let h0 = divide(&(&base + n0), &d1, scale)
            .ok_or_else(|| QhjError::Numerical("remainder in H; residues do not solve the indicial equations".into()))?;
        let h1 = divide(n1, &d1, n1.max_abs())
            .ok_or_else(|| QhjError::Inconsistent("energy term does not divide by D1".into()))?;
        (h0, h1, None)
    };

    let n = a.n as usize;
    let (basis, parity): (Vec<usize>, Parity) = if model.parity_basis {
        let p = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
        ((n % 2..=n).step_by(2).collect(), p)
    } else {
        ((0..=n).collect(), Parity::None)
    };

    let two_u = u.scale(c(2.0));
    let cols0: Vec<Poly> = basis
        .iter()
        .map(|&k| {
            let kf = k as f64;
            let mut p = h0.shift(k);
            if k >= 1 {
                p = &p + &two_u.shift(k - 1).scale(c(kf));
            }
            if k >= 2 {
                p = &p + &d1.shift(k - 2).scale(c(kf * (kf - 1.0)));
            }
            p
        })
        .collect();
    let cols1: Vec<Poly> = basis.iter().map(|&k| h1.shift(k)).collect();
    let nrows = cols0
        .iter()
        .chain(&cols1)
        .map(|p| p.coeffs.len())
        .max()
        .unwrap_or(0);
    let scale = cols0
        .iter()
        .chain(&cols1)
        .map(|p| p.max_abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    let live: Vec<usize> = (0..nrows)
        .filter(|&r| {
            cols0.iter().chain(&cols1).any(|p| p.coeff(r).norm() > ROW_TOL * scale)
        })
        .collect();
    let dim = basis.len();
    let fill = |rs: &[usize], cols: &[Poly]| {
        CMat::from_fn(rs.len(), dim, |i, j| cols[j].coeff(rs[i]))
    };
    if fixed_energy.is_some() {
        // only the kernel is needed: keep every row, padded to at least square
        let mut m0 = fill(&live, &cols0);
        if m0.nrows() < dim {
            m0 = m0.resize_vertically(dim, c(0.0));
        }
        return Ok(PencilSystem {
            m1: CMat::zeros(m0.nrows(), dim),
            m0,
            overflow0: CMat::zeros(0, dim),
            overflow1: CMat::zeros(0, dim),
            basis,
            rows: live,
            overflow_rows: vec![],
            fixed_energy,
            parity,
            degree: n,
        });
    }
    if live.len() < dim {
        return Err(QhjError::Numerical(format!(
            "pencil has {} informative rows for {dim} unknowns",
            live.len()
        )));
    }
    let rows: Vec<usize> = live[..dim].to_vec();
    let overflow_rows: Vec<usize> = live[dim..].to_vec();
    Ok(PencilSystem {
        m0: fill(&rows, &cols0),
        m1: fill(&rows, &cols1),
        overflow0: fill(&overflow_rows, &cols0),
        overflow1: fill(&overflow_rows, &cols1),
        basis,
        rows,
        overflow_rows,
        fixed_energy,
        parity,
        degree: n,
    })
}

/// Exact division, with the remainder measured against the size of the summands.
fn divide(num: &Poly, d: &Poly, scale: f64) -> Option<Poly> {
    let (q, r) = num.div_rem(d);
    (r.max_abs() <= 1e-9 * scale.max(1e-300)).then_some(q)
}

fn mat_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Null vectors of `m` ordered by singular value, plus the left vector of the smallest.
fn kernel(m: &CMat, rel: f64) -> Result<(Vec<nalgebra::DVector<Complex64>>, nalgebra::DVector<Complex64>, Vec<f64>)> {
    let svd = m.clone().svd(true, true);
    let u = svd.u.ok_or_else(|| QhjError::Numerical("SVD failed".into()))?;
    let vt = svd.v_t.ok_or_else(|| QhjError::Numerical("SVD failed".into()))?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smax = svd.singular_values.max().max(1e-300);
    let sv: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let mut null = vec![vt.row(idx[0]).transpose().map(|z| z.conj())];
    for &i in &idx[1..] {
        if svd.singular_values[i] <= rel * smax {
            null.push(vt.row(i).transpose().map(|z| z.conj()));
        }
    }
    Ok((null, u.column(idx[0]).into_owned(), sv))
}

/// Newton polish of a simple eigenvalue using left and right singular vectors.
fn polish(sys: &PencilSystem, mut e: Complex64) -> Result<Complex64> {
    for _ in 0..4 {
        let m = &sys.m0 + &sys.m1 * e;
        let (null, left, _) = kernel(&m, 0.0)?;
        let v = &null[0];
        let num = (left.adjoint() * &m * v)[(0, 0)];
        let den = (left.adjoint() * &sys.m1 * v)[(0, 0)];
        if den.norm() <= 1e-14 * mat_norm(&sys.m1) {
            break;
        }
        let step = num / den;
        e -= step;
        if step.norm() <= 1e-15 * e.norm().max(1.0) {
            break;
        }
    }
    Ok(e)
}

/// Finite eigenvalues of the pencil via a shifted inverse.
pub fn pencil_eigenvalues(sys: &PencilSystem) -> Result<Vec<Complex64>> {
    if let Some(e) = sys.fixed_energy {
        return Ok(vec![e]);
    }
    let n1 = mat_norm(&sys.m1);
    if n1 == 0.0 {
        return Ok(vec![]);
    }
    let scale = mat_norm(&sys.m0).max(1.0) / n1;
    let shifts = [0.3183098861837907, -0.7071067811865476, 1.4142135623730951, 2.718281828459045];
    let mut best: Option<(f64, Complex64, CMat)> = None;
    for s in shifts {
        let sigma = Complex64::new(s * scale, 0.123 * s * scale);
        let a = &sys.m0 + &sys.m1 * sigma;
        let sv = a.singular_values();
        let cond = sv.min() / sv.max().max(1e-300);
        if best.as_ref().map_or(true, |(b, _, _)| cond > *b) {
            best = Some((cond, sigma, a));
        }
        if cond > 1e-6 {
            break;
        }
    }
    let (cond, sigma, a) = best.unwrap();
    if cond < 1e-13 {
        return Err(QhjError::Numerical("pencil appears singular for every shift".into()));
    }
    let lu = a.lu();
    let k = -lu
        .solve(&sys.m1)
        .ok_or_else(|| QhjError::Numerical("shifted pencil is singular".into()))?;
    let mu = eigenvalues(k.clone())?;
    let knorm = mat_norm(&k).max(1e-300);
    Ok(mu
        .into_iter()
        .filter(|z| z.norm() > 1e-11 * knorm)
        .map(|z| sigma + 1.0 / z)
        .collect())
}

/// Eigenvalues of a square complex matrix from its Schur form.
pub fn eigenvalues(m: CMat) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000)
        .ok_or_else(|| QhjError::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

fn to_poly(sys: &PencilSystem, v: &nalgebra::DVector<Complex64>) -> Option<PolynomialOnT> {
    let lead = v[v.len() - 1];
    let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if lead.norm() <= 1e-8 * vmax {
        return None;
    }
    let mut coeffs = vec![c(0.0); sys.degree + 1];
    for (j, &k) in sys.basis.iter().enumerate() {
        coeffs[k] = v[j] / lead;
    }
    Some(PolynomialOnT { coeffs, parity: sys.parity })
}

fn overflow_ok(sys: &PencilSystem, e: Complex64, v: &nalgebra::DVector<Complex64>) -> bool {
    if sys.overflow_rows.is_empty() {
        return true;
    }
    let o = &sys.overflow0 + &sys.overflow1 * e;
    let r = (&o * v).norm();
    let scale = (mat_norm(&sys.overflow0) + e.norm() * mat_norm(&sys.overflow1)).max(mat_norm(&sys.m0));
    r <= 1e-8 * scale * v.norm()
}

/// All admissible `(E, P_n)` pairs of the pencil.
pub fn solve_pencil(sys: &PencilSystem) -> Result<PencilOutput> {
    let mut out = PencilOutput::default();
    let mut evs = pencil_eigenvalues(sys)?;
    evs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for e in evs {
        match clusters.iter_mut().find(|cl| {
            let r = cl[0];
            (r - e).norm() <= CLUSTER_TOL * r.norm().max(1.0)
        }) {
            Some(cl) => cl.push(e),
            None => clusters.push(vec![e]),
        }
    }
    let scale = mat_norm(&sys.m0) + mat_norm(&sys.m1);
    for cl in clusters {
        let mean = cl.iter().sum::<Complex64>() / cl.len() as f64;
        let e = if cl.len() == 1 && sys.fixed_energy.is_none() { polish(sys, mean)? } else { mean };
        let m = &sys.m0 + &sys.m1 * e;
        let (null, _, sv) = kernel(&m, 1e-9)?;
        if sv[0] > 1e-7 * scale.max(1.0) {
            out.warnings.push(format!("no kernel at E = {e}: smallest singular value {:.3e}", sv[0]));
            continue;
        }
        if null.len() != cl.len() && sys.fixed_energy.is_none() {
            out.warnings.push(format!(
                "defective pencil at E = {e}: multiplicity {} with kernel dimension {}",
                cl.len(),
                null.len()
            ));
        }
        let polys: Vec<PolynomialOnT> = null
            .iter()
            .filter(|v| overflow_ok(sys, e, v))
            .filter_map(|v| to_poly(sys, v))
            .collect();
        if polys.is_empty() {
            continue;
        }
        out.solutions.push(PencilSolution { energy: e, polynomials: polys, multiplicity: cl.len() });
    }
    if sys.fixed_energy.is_none() && sys.basis.len() <= 3 {
        if let Some(roots) = small_characteristic_roots(sys) {
            out.cross_checked = true;
            for s in &out.solutions {
                let near = roots
                    .iter()
                    .map(|r| (r - s.energy).norm())
                    .fold(f64::INFINITY, f64::min);
                if near > 1e-7 * s.energy.norm().max(1.0) {
                    out.warnings.push(format!(
                        "closed-form determinant disagrees at E = {}: nearest root {near:.3e} away",
                        s.energy
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn entry(sys: &PencilSystem, i: usize, j: usize) -> Poly {
    Poly::new(vec![sys.m0[(i, j)], sys.m1[(i, j)]])
}

/// `det(M0 + E M1)` as a polynomial in `E`, for systems of size at most three.
pub fn characteristic_polynomial(sys: &PencilSystem) -> Option<Poly> {
    let e = |i, j| entry(sys, i, j);
    match sys.basis.len() {
        1 => Some(e(0, 0)),
        2 => Some(&(&e(0, 0) * &e(1, 1)) - &(&e(0, 1) * &e(1, 0))),
        3 => {
            let minor = |a: usize, b: usize, cc: usize, d: usize| {
                &(&e(1, a) * &e(2, b)) - &(&e(1, cc) * &e(2, d))
            };
            let t0 = &e(0, 0) * &minor(1, 2, 2, 1);
            let t1 = &e(0, 1) * &minor(0, 2, 2, 0);
            let t2 = &e(0, 2) * &minor(0, 1, 1, 0);
            Some(&(&t0 - &t1) + &t2)
        }
        _ => None,
    }
}

/// Roots of the characteristic polynomial by radicals (degree at most three).
pub fn small_characteristic_roots(sys: &PencilSystem) -> Option<Vec<Complex64>> {
    let p = characteristic_polynomial(sys)?.trimmed(1e-13);
    roots_by_radicals(&p)
}

/// Roots of a polynomial of degree at most three in closed form.
pub fn roots_by_radicals(p: &Poly) -> Option<Vec<Complex64>> {
    let deg = p.degree()?;
    let a = |k| p.coeff(k);
    match deg {
        0 => Some(vec![]),
        1 => Some(vec![-a(0) / a(1)]),
        2 => {
            let disc = (a(1) * a(1) - 4.0 * a(2) * a(0)).sqrt();
            Some(vec![(-a(1) + disc) / (2.0 * a(2)), (-a(1) - disc) / (2.0 * a(2))])
        }
        3 => {
            // depressed cubic t^3 + p t + q with x = t - b/3
            let (b, cc, d) = (a(2) / a(3), a(1) / a(3), a(0) / a(3));
            let pp = cc - b * b / 3.0;
            let qq = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
            let disc = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
            let mut u3 = -qq / 2.0 + disc;
            if u3.norm() < (-qq / 2.0 - disc).norm() {
                u3 = -qq / 2.0 - disc;
            }
            let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
            let u = u3.powf(1.0 / 3.0);
            let roots = (0..3)
                .map(|k| {
                    let uk = u * w.powu(k);
                    let t = if uk.norm() == 0.0 { c(0.0) } else { uk - pp / (3.0 * uk) };
                    t - b / 3.0
                })
                .collect();
            Some(roots)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_radicals_recover_roots() {
        let r = [c(1.0), c(-2.0), Complex64::new(0.5, 1.5)];
        let p = Poly::from_roots(&r);
        let found = roots_by_radicals(&p).unwrap();
        for x in r {
            assert!(found.iter().any(|y| (y - x).norm() < 1e-12));
        }
    }

    #[test]
    fn one_by_one_pencil() {
        let sys = PencilSystem {
            m0: CMat::from_element(1, 1, c(-3.5)),
            m1: CMat::from_element(1, 1, c(1.0)),
            basis: vec![0],
            rows: vec![0],
            overflow0: CMat::zeros(0, 1),
            overflow1: CMat::zeros(0, 1),
            overflow_rows: vec![],
            fixed_energy: None,
            parity: Parity::Even,
            degree: 0,
        };
        let out = solve_pencil(&sys).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert!((out.solutions[0].energy - c(3.5)).norm() < 1e-14);
    }
}
