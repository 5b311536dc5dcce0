//! Grid oracle: finite-difference Schrodinger eigenproblems `-psi'' + V psi = E psi`
//! solved without any of the residue machinery.
//!
//! Real problems use second-order central differences on two grids with Richardson
//! extrapolation. Bound states come from Sturm bisection on the tridiagonal matrix,
//! band edges from dense periodic and antiperiodic matrices on one cell. Non-Hermitian
//! problems are discretized along a complex contour; a dense Schur decomposition of a
//! small grid picks the eigenvalues nearest the predictions, which are then refined by
//! inverse iteration on two fine grids.

pub mod tridiag;
pub mod verify;

use crate::catalog::Model;
use crate::error::{QhjError, Result};
use crate::wavefunction::BcTag;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tridiag::{eigenvector, lowest_eigenvalues, ComplexTridiagonal, TridiagonalPencil};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Boundary condition of a grid problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bc {
    Dirichlet,
    Periodic,
    Antiperiodic,
}

/// Uniform grid on `[lo, hi]` with `points` intervals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub bc: Bc,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize, bc: Bc) -> Result<Self> {
        if points < 64 {
            return Err(QhjError::Config(format!("grid needs at least 64 points, got {points}")));
        }
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(QhjError::Config(format!("empty grid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, points, bc })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.points as f64
    }

    /// Same interval with twice the points.
    pub fn refined(&self) -> Self {
        Self { points: 2 * self.points, ..*self }
    }

    /// Unknowns: interior nodes for Dirichlet, one cell of nodes otherwise.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        match self.bc {
            Bc::Dirichlet => (1..self.points).map(|i| self.lo + i as f64 * h).collect(),
            _ => (0..self.points).map(|i| self.lo + i as f64 * h).collect(),
        }
    }
}

/// One oracle eigenpair.
#[derive(Clone, Debug)]
pub struct OracleState {
    /// Extrapolated eigenvalue.
    pub energy: Complex64,
    /// `|E_extrapolated - E_fine|`.
    pub error_estimate: f64,
    pub bc: BcTag,
    /// Grid points of the fine grid (complex along a contour).
    pub xs: Vec<Complex64>,
    /// Eigenvector on `xs`, unit Euclidean norm.
    pub psi: Vec<Complex64>,
    pub nodes: Option<usize>,
    /// `||H psi - E psi|| / ||psi||` on the fine grid.
    pub residual: f64,
}

/// Result of an oracle solve.
#[derive(Clone, Debug, Default)]
pub struct OracleSpectrum {
    pub states: Vec<OracleState>,
    /// Largest distance from `conj(E)` to the nearest selected eigenvalue (non-Hermitian only).
    pub conjugation_defect: Option<f64>,
}

impl OracleSpectrum {
    pub fn energies(&self) -> Vec<Complex64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    pub fn node_counts(&self) -> Vec<Option<usize>> {
        self.states.iter().map(|s| s.nodes).collect()
    }
}

/// Strict sign changes, ignoring entries below `1e-10` of the maximum.
pub fn count_nodes(v: &[f64]) -> usize {
    signs(v).windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sign changes around a closed cell; `twist = -1` for antiperiodic data.
pub fn count_nodes_cyclic(v: &[f64], twist: f64) -> usize {
    let s = signs(v);
    let open = s.windows(2).filter(|w| w[0] != w[1]).count();
    match (s.last(), s.first()) {
        (Some(&l), Some(&f)) if l != f * twist => open + 1,
        _ => open,
    }
}

fn signs(v: &[f64]) -> Vec<f64> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v.iter().filter(|x| x.abs() > 1e-10 * max).map(|x| x.signum()).collect()
}

/// Two-grid extrapolation for a second-order scheme: `(value, |value - fine|)`.
pub fn richardson(coarse: Complex64, fine: Complex64) -> (Complex64, f64) {
    let r = fine + (fine - coarse) / 3.0;
    (r, (r - fine).norm())
}

fn real_potential(model: &Model, x: f64) -> Result<f64> {
    let v = model.potential(c(x))?;
    if v.im.abs() > 1e-12 * (1.0 + v.re.abs()) {
        return Err(QhjError::Domain(format!("{}: potential is not real at x = {x}", model.id)));
    }
    Ok(v.re)
}

fn check_tol(states: &[OracleState], tol: f64) -> Result<()> {
    match states.iter().map(|s| s.error_estimate).fold(0.0, f64::max) {
        e if e > tol => Err(QhjError::GridTooCoarse { estimate: e, tolerance: tol }),
        _ => Ok(()),
    }
}

fn check_k(grid: &GridSpec, k: usize) -> Result<()> {
    if k == 0 || k > grid.points / 10 {
        return Err(QhjError::Config(format!("k = {k} states need at least {} points", 10 * k.max(1))));
    }
    Ok(())
}

fn residual_real(d: &[f64], e: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = d.len();
    let mut s = 0.0;
    for i in 0..n {
        let mut r = (d[i] - lambda) * v[i];
        if i > 0 {
            r += e[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            r += e[i] * v[i + 1];
        }
        s += r * r;
    }
    s.sqrt() / v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dirichlet_matrix(model: &Model, grid: &GridSpec) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let h2 = grid.step() * grid.step();
    let xs = grid.nodes();
    let d = xs.iter().map(|&x| real_potential(model, x).map(|v| 2.0 / h2 + v)).collect::<Result<_>>()?;
    let e = vec![-1.0 / h2; xs.len() - 1];
    Ok((d, e, xs))
}

/// Tridiagonal eigenpairs on one grid: values, and vectors when requested.
type TriSolve = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>);

fn tri_solve(d: &[f64], e: &[f64], k: usize, vectors: bool) -> TriSolve {
    let vals = lowest_eigenvalues(d, e, k);
    let vecs: Vec<Vec<f64>> = if vectors { vals.iter().map(|&l| eigenvector(d, e, l)).collect() } else { vec![] };
    let res = if vectors {
        vals.iter().zip(&vecs).map(|(&l, v)| residual_real(d, e, l, v)).collect()
    } else {
        vec![]
    };
    (vals, vecs, res)
}

/// Lowest `k` Dirichlet eigenpairs on `grid` and its refinement.
pub fn solve_bound(model: &Model, grid: &GridSpec, k: usize, tol: f64) -> Result<OracleSpectrum> {
    if grid.bc != Bc::Dirichlet {
        return Err(QhjError::Config("bound states need a dirichlet grid".into()));
    }
    check_k(grid, k)?;
    let fine_grid = grid.refined();
    let (coarse, fine) = rayon::join(
        || dirichlet_matrix(model, grid).map(|(d, e, _)| tri_solve(&d, &e, k, false)),
        || dirichlet_matrix(model, &fine_grid).map(|(d, e, xs)| (tri_solve(&d, &e, k, true), xs)),
    );
    let (coarse, ((vals, vecs, res), xs)) = (coarse?, fine?);
    let states: Vec<OracleState> = (0..vals.len())
        .map(|i| {
            let (energy, error_estimate) = richardson(c(coarse.0[i]), c(vals[i]));
            OracleState {
                energy,
                error_estimate,
                bc: BcTag::Dirichlet,
                xs: xs.iter().map(|&x| c(x)).collect(),
                psi: vecs[i].iter().map(|&v| c(v)).collect(),
                nodes: Some(count_nodes(&vecs[i])),
                residual: res[i],
            }
        })
        .collect();
    check_tol(&states, tol)?;
    Ok(OracleSpectrum { states, conjugation_defect: None })
}

const GAUSS6: [(f64, f64); 6] = [
    (0.033_765_242_898_423_98, 0.085_662_246_189_585_17),
    (0.169_395_306_766_867_74, 0.180_380_786_524_069_3),
    (0.380_690_406_958_401_5, 0.233_956_967_286_345_5),
    (0.619_309_593_041_598_5, 0.233_956_967_286_345_5),
    (0.830_604_693_233_132_3, 0.180_380_786_524_069_3),
    (0.966_234_757_101_576, 0.085_662_246_189_585_17),
];

/// Linear-element discretization of `-(w phi')' + w W phi = E w phi` on `[lo, hi]` with
/// `w = sin(x - lo)^(2 rho)` and `psi = sin(x - lo)^rho phi`. Both ends are free nodes;
/// the vanishing weight selects the `rho` branch at each wall.
fn gauged_pencil(model: &Model, grid: &GridSpec, rho: f64, coupling: f64) -> Result<(TridiagonalPencil, Vec<f64>)> {
    let h = grid.step();
    let n = grid.points;
    let xs: Vec<f64> = (0..=n).map(|i| grid.lo + i as f64 * h).collect();
    let guard = 1e-3;
    let big_w = |x: f64| -> Result<f64> {
        let t = (x - grid.lo).clamp(guard, grid.hi - grid.lo - guard);
        let cot = t.cos() / t.sin();
        Ok(real_potential(model, grid.lo + t)? - coupling * cot * cot + rho)
    };
    let (mut kd, mut md) = (vec![0.0; n + 1], vec![0.0; n + 1]);
    let (mut ke, mut me) = (vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let (mut sw, mut saa, mut sab, mut sbb, mut paa, mut pab, mut pbb) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for &(u, wt) in &GAUSS6 {
            // graded map near the walls
            let (g, dg) = if i == 0 {
                (u.powi(3), 3.0 * u * u)
            } else if i + 1 == n {
                (1.0 - (1.0 - u).powi(3), 3.0 * (1.0 - u).powi(2))
            } else {
                (u, 1.0)
            };
            let x = xs[i] + h * g;
            let s = (x - grid.lo).sin().abs();
            let w = if s == 0.0 { 0.0 } else { s.powf(2.0 * rho) } * wt * h * dg;
            let (pa, pb) = (1.0 - g, g);
            let vw = big_w(x)?;
            sw += w;
            saa += w * pa * pa;
            sab += w * pa * pb;
            sbb += w * pb * pb;
            paa += w * vw * pa * pa;
            pab += w * vw * pa * pb;
            pbb += w * vw * pb * pb;
        }
        let stiff = sw / (h * h);
        kd[i] += stiff + paa;
        kd[i + 1] += stiff + pbb;
        ke[i] += -stiff + pab;
        md[i] += saa;
        md[i + 1] += sbb;
        me[i] += sab;
    }
    Ok((TridiagonalPencil { kd, ke, md, me }, xs))
}

/// Indicial exponents `rho` of `psi ~ x^rho` at the left wall, from `x^2 V(x)` as `x -> 0`.
pub fn wall_exponents(model: &Model, lo: f64) -> Result<(f64, f64)> {
    let f = |x: f64| real_potential(model, lo + x).map(|v| x * x * v);
    let coupling = (4.0 * f(1e-3)? - f(2e-3)?) / 3.0;
    let disc = 0.25 + coupling;
    if disc < 0.0 {
        return Err(QhjError::Domain("wall coupling below -1/4 has no real exponents".into()));
    }
    Ok((0.5 + disc.sqrt(), 0.5 - disc.sqrt()))
}

/// Both families of wall states of a potential with inverse-square walls at the ends of
/// `grid`, `k` per family. Each state is tagged periodic or antiperiodic by its parity
/// under reflection about the cell centre.
pub fn solve_walls(model: &Model, grid: &GridSpec, k: usize, tol: f64) -> Result<OracleSpectrum> {
    check_k(grid, k)?;
    let (rp, rm) = wall_exponents(model, grid.lo)?;
    let coupling = rp * (rp - 1.0);
    let fine_grid = grid.refined();
    let mut states = Vec::new();
    for rho in [rp, rm] {
        let (coarse, fine) = rayon::join(
            || gauged_pencil(model, grid, rho, coupling).map(|(p, _)| p.lowest(k)),
            || gauged_pencil(model, &fine_grid, rho, coupling),
        );
        let (coarse, (pencil, xs)) = (coarse?, fine?);
        let vals = pencil.lowest(k);
        for i in 0..vals.len() {
            let (energy, error_estimate) = richardson(c(coarse[i]), c(vals[i]));
            let phi = pencil.eigenvector(vals[i]);
            let mirror: f64 = phi.iter().zip(phi.iter().rev()).map(|(a, b)| a * b).sum();
            let inner = 1..xs.len() - 1;
            let psi: Vec<f64> = inner.clone().map(|j| (xs[j] - grid.lo).sin().abs().powf(rho) * phi[j]).collect();
            states.push(OracleState {
                energy,
                error_estimate,
                bc: if mirror > 0.0 { BcTag::Periodic } else { BcTag::Antiperiodic },
                xs: inner.map(|j| c(xs[j])).collect(),
                nodes: Some(count_nodes(&psi)),
                psi: psi.into_iter().map(c).collect(),
                residual: pencil.residual(vals[i], &phi),
            });
        }
    }
    states.sort_by(|a, b| a.energy.re.total_cmp(&b.energy.re));
    check_tol(&states, tol)?;
    Ok(OracleSpectrum { states, conjugation_defect: None })
}

fn cell_matrix(model: &Model, grid: &GridSpec) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let h2 = grid.step() * grid.step();
    let xs = grid.nodes();
    let n = xs.len();
    let corner = match grid.bc {
        Bc::Periodic => -1.0 / h2,
        Bc::Antiperiodic => 1.0 / h2,
        Bc::Dirichlet => 0.0,
    };
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = 2.0 / h2 + real_potential(model, xs[i])?;
        if i + 1 < n {
            m[(i, i + 1)] = -1.0 / h2;
            m[(i + 1, i)] = -1.0 / h2;
        }
    }
    m[(0, n - 1)] += corner;
    m[(n - 1, 0)] += corner;
    Ok((m, xs))
}

fn dense_sorted(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, j| eig.eigenvectors[(r, idx[j])]);
    (vals, vecs)
}

/// Lowest `k` periodic and `k` antiperiodic eigenpairs on one cell `grid`.
pub fn solve_band_edges(model: &Model, grid: &GridSpec, k: usize, tol: f64) -> Result<OracleSpectrum> {
    check_k(grid, k)?;
    let mut states = Vec::new();
    for (bc, tag, twist) in [(Bc::Periodic, BcTag::Periodic, 1.0), (Bc::Antiperiodic, BcTag::Antiperiodic, -1.0)] {
        let g = GridSpec { bc, ..*grid };
        let fg = g.refined();
        let (coarse, fine) = rayon::join(|| cell_matrix(model, &g), || cell_matrix(model, &fg));
        let ((cm, _), (fm, xs)) = (coarse?, fine?);
        let ((cv, _), (fv, fvec)) = rayon::join(|| dense_sorted(cm), || dense_sorted(fm.clone()));
        for i in 0..k {
            let (energy, error_estimate) = richardson(c(cv[i]), c(fv[i]));
            let v: Vec<f64> = fvec.column(i).iter().cloned().collect();
            let mv = &fm * fvec.column(i);
            let residual = mv.iter().zip(&v).map(|(a, b)| (a - fv[i] * b).powi(2)).sum::<f64>().sqrt();
            states.push(OracleState {
                energy,
                error_estimate,
                bc: tag,
                xs: xs.iter().map(|&x| c(x)).collect(),
                psi: v.iter().map(|&x| c(x)).collect(),
                nodes: Some(count_nodes_cyclic(&v, twist)),
                residual,
            });
        }
    }
    states.sort_by(|a, b| a.energy.re.total_cmp(&b.energy.re));
    check_tol(&states, tol)?;
    Ok(OracleSpectrum { states, conjugation_defect: None })
}

/// Integration path `x(s)` for non-Hermitian problems.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Contour {
    /// The real axis.
    Real,
    /// `s + i height tanh(s)`.
    Tanh { height: f64 },
}

impl Contour {
    pub fn at(&self, s: f64) -> Complex64 {
        match *self {
            Contour::Real => c(s),
            Contour::Tanh { height } => Complex64::new(s, height * s.tanh()),
        }
    }
}

/// Three-point second derivative on the nodes `x(s_j)`, Dirichlet at both ends.
fn contour_matrix(model: &Model, grid: &GridSpec, contour: Contour) -> Result<(ComplexTridiagonal, Vec<Complex64>)> {
    let h = grid.step();
    let z: Vec<Complex64> = (0..=grid.points).map(|j| contour.at(grid.lo + j as f64 * h)).collect();
    let n = grid.points - 1;
    let mut sub = Vec::with_capacity(n - 1);
    let mut diag = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n - 1);
    for j in 1..grid.points {
        let hm = z[j] - z[j - 1];
        let hp = z[j + 1] - z[j];
        let a = 2.0 / (hm * (hm + hp));
        let b = -2.0 / (hm * hp);
        let cc = 2.0 / (hp * (hm + hp));
        diag.push(-b + model.potential(z[j])?);
        if j > 1 {
            sub.push(-a);
        }
        if j + 1 < grid.points {
            sup.push(-cc);
        }
    }
    Ok((ComplexTridiagonal { sub, diag, sup }, z[1..grid.points].to_vec()))
}

/// Options for [`solve_pt`].
#[derive(Clone, Copy, Debug)]
pub struct PtOptions {
    /// Intervals of the dense selection grid (at most 800).
    pub dense_points: usize,
    /// Largest accepted distance between a prediction and the selected dense eigenvalue,
    /// relative to `max(1, |E|)`.
    pub gate: f64,
}

impl Default for PtOptions {
    fn default() -> Self {
        Self { dense_points: 400, gate: 0.05 }
    }
}

/// Eigenvalues of a non-Hermitian problem nearest `predictions`.
///
/// `grid` is the coarse refinement grid in the contour parameter; the fine grid has twice
/// the points. Missing eigenvalues are reported as an error.
pub fn solve_pt(
    model: &Model,
    grid: &GridSpec,
    contour: Contour,
    predictions: &[Complex64],
    tol: f64,
    opts: PtOptions,
) -> Result<OracleSpectrum> {
    if opts.dense_points > 800 {
        return Err(QhjError::Config("dense non-Hermitian grids are capped at 800 points".into()));
    }
    let dense_grid = GridSpec { points: opts.dense_points, ..*grid };
    let (dense, _) = contour_matrix(model, &dense_grid, contour)?;
    let dense_eigs = crate::pencil::eigenvalues(dense.to_dense())?;
    let fine_grid = grid.refined();
    let ((h1, _), (h2, zs)) = (contour_matrix(model, grid, contour)?, contour_matrix(model, &fine_grid, contour)?);
    let states: Vec<OracleState> = predictions
        .par_iter()
        .map(|&p| {
            let pick = dense_eigs
                .iter()
                .min_by(|a, b| (*a - p).norm().total_cmp(&(*b - p).norm()))
                .copied()
                .ok_or_else(|| QhjError::Numerical("empty dense spectrum".into()))?;
            if (pick - p).norm() > opts.gate * p.norm().max(1.0) {
                return Err(QhjError::Numerical(format!(
                    "no grid eigenvalue near {:.6}{:+.6}i (closest {:.6}{:+.6}i)",
                    p.re, p.im, pick.re, pick.im
                )));
            }
            let (e1, _, _) = h1.refine(pick);
            let (e2, psi, residual) = h2.refine(e1);
            let (energy, error_estimate) = richardson(e1, e2);
            Ok(OracleState { energy, error_estimate, bc: BcTag::PtSymmetric, xs: zs.clone(), psi, nodes: None, residual })
        })
        .collect::<Result<_>>()?;
    let defect = states
        .iter()
        .map(|s| {
            states
                .iter()
                .map(|t| (t.energy - s.energy.conj()).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    check_tol(&states, tol)?;
    Ok(OracleSpectrum { states, conjugation_defect: Some(defect) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[1.0, 2.0, 1.0]), 0);
        assert_eq!(count_nodes(&[1.0, -1.0, 1e-20, -2.0, 3.0]), 2);
        assert_eq!(count_nodes_cyclic(&[0.0, 1.0, 1.0, -1.0], 1.0), 2);
        assert_eq!(count_nodes_cyclic(&[0.0, 1.0, 1.0, 1.0], -1.0), 1);
    }

    #[test]
    fn richardson_removes_second_order_error() {
        let exact = 3.0;
        let f = |h: f64| c(exact + 0.7 * h * h);
        let (r, err) = richardson(f(0.1), f(0.05));
        assert!((r.re - exact).abs() < 1e-14);
        assert!((err - 0.7 * 0.0025).abs() < 1e-14);
    }
}
