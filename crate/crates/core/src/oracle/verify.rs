//! Analytic spectra checked against the grid oracle.

use super::{solve_band_edges, solve_bound, solve_pt, solve_walls, Bc, Contour, GridSpec, OracleSpectrum, OracleState, PtOptions};
use super::{count_nodes, count_nodes_cyclic};
use crate::catalog::{Domain, Model, ModelId, SpectrumKind};
use crate::error::Result;
use crate::spectrum::{solve_spectrum, OutcomeKind, SolveOptions, SpectralLine, Spectrum};
use crate::wavefunction::BcTag;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Energy tolerance used when none is given.
pub fn default_tolerance(model: &Model) -> f64 {
    match (model.id, model.spectrum) {
        (ModelId::ScarfPeriodic, _) => 5e-4,
        (_, SpectrumKind::Bound) => 2e-4,
        (_, SpectrumKind::BandEdges) => 5e-4,
        (_, SpectrumKind::NonHermitian) => 1e-3,
    }
}

/// Minimum overlap for real states.
pub const OVERLAP_MIN: f64 = 1.0 - 1e-6;
/// Maximum sup-normalized modulus difference for non-Hermitian states.
pub const MODULUS_MAX: f64 = 1e-3;

/// How a model is put on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum OracleMethod {
    Bound { grid: GridSpec, k: usize },
    Walls { grid: GridSpec, k: usize },
    BandEdges { grid: GridSpec, k: usize },
    Pt { grid: GridSpec, contour: Contour },
}

/// Slowest decay rate `sqrt(-E)` a real-line grid can hold.
pub const MIN_DECAY: f64 = 0.2;

/// Whether a state extends beyond any grid the oracle builds for it.
fn beyond_grid(model: &Model, line: &SpectralLine) -> bool {
    model.domain == Domain::RealLine && model.id != ModelId::KhareMandal && (-line.energy.value).sqrt().re < MIN_DECAY
}

/// Grid setup for a model whose analytic lines are `lines`.
pub fn oracle_method(model: &Model, lines: &[SpectralLine]) -> Result<OracleMethod> {
    let top_n = lines.iter().map(|l| l.n() as usize).max().unwrap_or(0);
    Ok(match model.domain {
        Domain::HalfLine => {
            let e_max = lines.iter().map(|l| l.energy.re()).fold(f64::NEG_INFINITY, f64::max);
            let v_inf = model.potential(Complex64::new(1e8, 0.0))?.re;
            let kappa = (v_inf - e_max).max(1e-4).sqrt();
            let grid = GridSpec::new(0.0, 50.0 / kappa, 20_000, Bc::Dirichlet)?;
            OracleMethod::Bound { grid, k: top_n + 3 }
        }
        Domain::Walls { a, b } => {
            let grid = GridSpec::new(a, b, 20_000, Bc::Dirichlet)?;
            if model.spectrum == SpectrumKind::BandEdges {
                OracleMethod::Walls { grid, k: top_n + 2 }
            } else {
                OracleMethod::Bound { grid, k: top_n + 3 }
            }
        }
        Domain::Periodic { period } => {
            let grid = GridSpec::new(0.0, period, 400, Bc::Periodic)?;
            OracleMethod::BandEdges { grid, k: lines.len() + 3 }
        }
        Domain::RealLine => match model.id {
            ModelId::KhareMandal => {
                let zeta = model.params.real("zeta");
                let l = (0.5 * (200.0 / zeta).ln()).min(4.5);
                let grid = GridSpec::new(-l, l, 8000, Bc::Dirichlet)?;
                OracleMethod::Pt { grid, contour: Contour::Tanh { height: PI / 4.0 } }
            }
            _ => {
                let decay = lines
                    .iter()
                    .map(|l| (-l.energy.value).sqrt().re)
                    .filter(|&k| k >= MIN_DECAY)
                    .fold(f64::INFINITY, f64::min);
                let l = (20.0 / decay).clamp(25.0, 20.0 / MIN_DECAY);
                let points = ((l * 160.0) as usize).max(8000);
                OracleMethod::Pt { grid: GridSpec::new(-l, l, points, Bc::Dirichlet)?, contour: Contour::Real }
            }
        },
    })
}

/// Run the oracle for a model.
pub fn run_oracle(model: &Model, method: OracleMethod, predictions: &[Complex64]) -> Result<OracleSpectrum> {
    let tol = f64::INFINITY;
    match method {
        OracleMethod::Bound { grid, k } => solve_bound(model, &grid, k, tol),
        OracleMethod::Walls { grid, k } => solve_walls(model, &grid, k, tol),
        OracleMethod::BandEdges { grid, k } => solve_band_edges(model, &grid, k, tol),
        OracleMethod::Pt { grid, contour } => {
            let dense_points = ((4.0 * (grid.hi - grid.lo)) as usize).clamp(PtOptions::default().dense_points, 800);
            solve_pt(model, &grid, contour, predictions, tol, PtOptions { dense_points, ..PtOptions::default() })
        }
    }
}

/// Comparison of one analytic eigenfunction with oracle eigenvectors on the same grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateMatch {
    /// `|<a, P a>| / |a|^2` with `P` the projector on the oracle vectors (real problems).
    pub overlap: Option<f64>,
    /// Max difference of sup-normalized moduli (non-Hermitian problems).
    pub modulus_difference: Option<f64>,
}

/// Compare sampled analytic values against orthonormal oracle vectors spanning one cluster.
/// Invariant under rescaling of either side.
pub fn compare_states(analytic: &[Complex64], oracle: &[&[Complex64]], real: bool) -> StateMatch {
    let na = analytic.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if real {
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in oracle {
            let mut w = v.to_vec();
            for b in &basis {
                let p: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                w.iter_mut().zip(b).for_each(|(y, x)| *y -= p * x);
            }
            let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nw > 1e-8 {
                w.iter_mut().for_each(|z| *z /= nw);
                basis.push(w);
            }
        }
        let proj: f64 = basis
            .iter()
            .map(|b| b.iter().zip(analytic).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr())
            .sum();
        StateMatch { overlap: Some(proj.sqrt() / na), modulus_difference: None }
    } else {
        let sup = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (sa, so) = (sup(analytic), sup(oracle[0]));
        let d = analytic
            .iter()
            .zip(oracle[0].iter())
            .map(|(a, o)| (a.norm() / sa - o.norm() / so).abs())
            .fold(0.0, f64::max);
        StateMatch { overlap: None, modulus_difference: Some(d) }
    }
}

/// One verified level.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyRow {
    pub set_label: Option<u8>,
    pub n: u32,
    pub degeneracy: usize,
    pub bc: BcTag,
    pub analytic: [f64; 2],
    pub oracle: Option<[f64; 2]>,
    pub delta: f64,
    pub error_estimate: f64,
    pub tolerance: f64,
    pub overlap: Option<f64>,
    pub modulus_difference: Option<f64>,
    pub nodes_analytic: Option<usize>,
    pub nodes_oracle: Option<usize>,
    pub residual: f64,
    pub pass: bool,
    pub note: Option<String>,
}

/// Verification of a whole model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: ModelId,
    pub kind: OutcomeKind,
    pub method: OracleMethod,
    pub tolerance: f64,
    pub rows: Vec<VerifyRow>,
    /// Whether the selected non-Hermitian eigenvalues are closed under conjugation.
    pub conjugation_closed: Option<bool>,
    /// Whether oracle node counts never decrease along the spectrum.
    pub nodes_monotone: Option<bool>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

/// Options for [`verify_model`].
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub tol: Option<f64>,
    pub levels: Option<u32>,
}

/// Boundary class of an analytic line as seen by the oracle.
pub fn analytic_bc(model: &Model, line: &SpectralLine) -> Result<BcTag> {
    if model.id == ModelId::ScarfPeriodic && model.spectrum == SpectrumKind::BandEdges {
        let (a, b) = (line.recipe.eval_real(0.4)?, line.recipe.eval_real(PI - 0.4)?);
        return Ok(if (a - b).norm() <= 1e-8 * a.norm() { BcTag::Periodic } else { BcTag::Antiperiodic });
    }
    line.recipe.bc_tag()
}

fn cluster<'a>(states: &'a [OracleState], bc: BcTag, energy: Complex64) -> Vec<&'a OracleState> {
    let bc = if bc == BcTag::Decaying { BcTag::Dirichlet } else { bc };
    let pool: Vec<&OracleState> = states.iter().filter(|s| s.bc == bc).collect();
    let Some(best) = pool.iter().min_by(|a, b| (a.energy - energy).norm().total_cmp(&(b.energy - energy).norm())) else {
        return vec![];
    };
    let width = (1e-5 * best.energy.norm().max(1.0)).max(10.0 * best.error_estimate);
    let mut out: Vec<&OracleState> = pool.iter().filter(|s| (s.energy - best.energy).norm() <= width).copied().collect();
    out.sort_by(|a, b| (a.energy - energy).norm().total_cmp(&(b.energy - energy).norm()));
    out
}

fn sample(line: &SpectralLine, xs: &[Complex64], real: bool) -> Result<Vec<Complex64>> {
    xs.iter()
        .map(|&z| if real { line.recipe.eval_real(z.re) } else { line.recipe.eval(z) })
        .collect()
}

fn phase_real(v: &[Complex64]) -> Vec<f64> {
    let big = v.iter().copied().fold(Complex64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() { z } else { m });
    let ph = if big.norm() > 0.0 { big.conj() / big.norm() } else { Complex64::new(1.0, 0.0) };
    v.iter().map(|z| (z * ph).re).collect()
}

fn verify_line(
    model: &Model,
    line: &SpectralLine,
    state: Option<Vec<&OracleState>>,
    oracle: &OracleSpectrum,
    tol: f64,
) -> Result<VerifyRow> {
    let real = model.spectrum != SpectrumKind::NonHermitian;
    let bc = if real { analytic_bc(model, line)? } else { BcTag::PtSymmetric };
    let e = line.energy.value;
    let states = match state {
        Some(s) => s,
        None => cluster(&oracle.states, bc, e),
    };
    let mut row = VerifyRow {
        set_label: line.set_label,
        n: line.n(),
        degeneracy: line.degeneracy,
        bc,
        analytic: [e.re, e.im],
        oracle: None,
        delta: f64::INFINITY,
        error_estimate: f64::INFINITY,
        tolerance: tol,
        overlap: None,
        modulus_difference: None,
        nodes_analytic: None,
        nodes_oracle: None,
        residual: f64::INFINITY,
        pass: false,
        note: None,
    };
    let Some(first) = states.first() else {
        row.note = Some("no oracle state with this boundary class".into());
        return Ok(row);
    };
    row.oracle = Some([first.energy.re, first.energy.im]);
    row.delta = (first.energy - e).norm();
    row.error_estimate = first.error_estimate;
    row.residual = first.residual;
    let analytic = match sample(line, &first.xs, real) {
        Ok(v) => v,
        Err(err) => {
            row.note = Some(format!("sampling failed: {err}"));
            return Ok(row);
        }
    };
    let vecs: Vec<&[Complex64]> = states.iter().map(|s| s.psi.as_slice()).collect();
    let m = compare_states(&analytic, &vecs, real);
    row.overlap = m.overlap;
    row.modulus_difference = m.modulus_difference;
    if real && states.len() == 1 {
        let a = phase_real(&analytic);
        row.nodes_analytic = Some(match bc {
            BcTag::Periodic if model.spectrum == SpectrumKind::BandEdges && model.id != ModelId::ScarfPeriodic => {
                count_nodes_cyclic(&a, 1.0)
            }
            BcTag::Antiperiodic if model.id != ModelId::ScarfPeriodic => count_nodes_cyclic(&a, -1.0),
            _ => count_nodes(&a),
        });
        row.nodes_oracle = first.nodes;
    }
    let energy_ok = row.delta <= tol && row.error_estimate <= tol;
    let shape_ok = match (row.overlap, row.modulus_difference) {
        (Some(o), _) => o >= OVERLAP_MIN,
        (_, Some(d)) => d <= MODULUS_MAX,
        _ => false,
    };
    let nodes_ok = row.nodes_analytic == row.nodes_oracle;
    row.pass = energy_ok && shape_ok && nodes_ok;
    if !row.pass {
        let mut why = Vec::new();
        if !energy_ok {
            why.push("energy");
        }
        if !shape_ok {
            why.push("eigenfunction");
        }
        if !nodes_ok {
            why.push("nodes");
        }
        row.note = Some(format!("mismatch: {}", why.join(", ")));
    }
    Ok(row)
}

/// Verify an already solved spectrum.
pub fn verify_spectrum(model: &Model, spectrum: &Spectrum, tol: Option<f64>) -> Result<VerifyReport> {
    let tol = tol.unwrap_or_else(|| default_tolerance(model));
    let (far, near): (Vec<&SpectralLine>, Vec<&SpectralLine>) = spectrum.lines.iter().partition(|l| beyond_grid(model, l));
    let near_lines: Vec<SpectralLine> = near.iter().map(|&l| l.clone()).collect();
    let method = oracle_method(model, &near_lines)?;
    let predictions: Vec<Complex64> = near.iter().map(|l| l.energy.value).collect();
    let oracle = if predictions.is_empty() {
        OracleSpectrum { states: vec![], conjugation_defect: None }
    } else {
        run_oracle(model, method, &predictions)?
    };
    let mut rows = Vec::with_capacity(spectrum.lines.len());
    let mut next = 0;
    for line in &spectrum.lines {
        if far.iter().any(|f| std::ptr::eq(*f, line)) {
            let mut row = verify_line(model, line, Some(vec![]), &oracle, tol)?;
            row.note = Some(format!("decay length 1/{:.3e} exceeds the oracle grid", (-line.energy.value).sqrt().re));
            rows.push(row);
            continue;
        }
        let pinned = matches!(method, OracleMethod::Pt { .. }).then(|| vec![&oracle.states[next]]);
        next += 1;
        rows.push(verify_line(model, line, pinned, &oracle, tol)?);
    }
    let conjugation_closed = oracle.conjugation_defect.map(|d| {
        let err = oracle.states.iter().map(|s| s.error_estimate).fold(0.0, f64::max);
        d <= (1e-8f64).max(10.0 * err)
    });
    let nodes_monotone = matches!(method, OracleMethod::Bound { .. }).then(|| {
        let n: Vec<usize> = oracle.states.iter().filter_map(|s| s.nodes).collect();
        n.windows(2).all(|w| w[0] <= w[1])
    });
    let pass = !rows.is_empty()
        && rows.iter().all(|r| r.pass)
        && conjugation_closed.unwrap_or(true)
        && nodes_monotone.unwrap_or(true);
    Ok(VerifyReport {
        model: model.id,
        kind: spectrum.kind,
        method,
        tolerance: tol,
        rows,
        conjugation_closed,
        nodes_monotone,
        warnings: spectrum.warnings.clone(),
        pass,
    })
}

/// Solve a model and verify every analytic line against the oracle.
pub fn verify_model(model: &Model, opts: VerifyOptions) -> Result<VerifyReport> {
    let mut so = SolveOptions::default();
    if let Some(l) = opts.levels {
        so.levels = l;
    }
    let spectrum = solve_spectrum(model, so)?;
    verify_spectrum(model, &spectrum, opts.tol)
}
