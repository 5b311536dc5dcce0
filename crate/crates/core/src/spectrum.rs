//! Spectral lines: quantization, pencil solutions and wavefunction recipes combined.

use crate::catalog::{Model, ModelId, SpectrumKind};
use crate::error::{QhjError, Result};
use crate::exact::Scalar;
use crate::pencil::{build_pencil, solve_pencil, PolynomialOnT};
use crate::quantization::{quantize, Assignment, EnergyMode, Rejected};
use crate::wavefunction::WavefunctionRecipe;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const GROUP_TOL: f64 = 1e-8;

/// Classification of a solved model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    EsSpectrum,
    QesCondition,
    BandEdgeGroup,
    PtGroup,
}

/// Where an energy came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergySource {
    ClosedForm,
    Determinant,
}

/// One level or band edge.
#[derive(Clone, Debug)]
pub struct SpectralLine {
    pub energy: Scalar,
    pub source: EnergySource,
    pub set_label: Option<u8>,
    pub assignment: Assignment,
    pub formula: String,
    pub degeneracy: usize,
    pub polynomial: PolynomialOnT,
    pub recipe: WavefunctionRecipe,
}

impl SpectralLine {
    pub fn n(&self) -> u32 {
        self.assignment.n
    }
}

/// Options for [`solve_spectrum`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Number of `n` values tried when the quantization condition fixes `E`.
    pub levels: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { levels: 4 }
    }
}

/// Solved spectrum of a model.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub model: ModelId,
    pub kind: OutcomeKind,
    pub mode: EnergyMode,
    pub lines: Vec<SpectralLine>,
    pub rejected: Vec<Rejected>,
    pub warnings: Vec<String>,
}

pub fn outcome_kind(model: &Model) -> OutcomeKind {
    match (model.id, model.spectrum) {
        (ModelId::AssocLameQes, _) => OutcomeKind::QesCondition,
        (_, SpectrumKind::BandEdges) => OutcomeKind::BandEdgeGroup,
        (_, SpectrumKind::NonHermitian) => OutcomeKind::PtGroup,
        _ => OutcomeKind::EsSpectrum,
    }
}

fn lines_for(model: &Model, a: &Assignment) -> Result<(Vec<SpectralLine>, Vec<String>)> {
    let sys = build_pencil(model, a)?;
    let out = solve_pencil(&sys)?;
    let mut warnings = out.warnings;
    let mut lines = Vec::new();
    for sol in out.solutions {
        let (energy, source) = match a.energy {
            Some(e) => {
                if (e.value - sol.energy).norm() > 1e-8 * e.value.norm().max(1.0) {
                    continue;
                }
                (e, EnergySource::ClosedForm)
            }
            None => {
                let mut e = sol.energy;
                if model.spectrum != SpectrumKind::NonHermitian && e.im.abs() <= 1e-8 * e.norm().max(1.0) {
                    e.im = 0.0;
                }
                (Scalar::approx(e), EnergySource::Determinant)
            }
        };
        for p in sol.polynomials {
            let recipe = WavefunctionRecipe::new(model, a, p.clone(), energy.value);
            lines.push(SpectralLine {
                energy,
                source,
                set_label: a.set_label,
                assignment: a.clone(),
                formula: model.formula(a.set_label),
                degeneracy: 1,
                polynomial: p,
                recipe,
            });
        }
    }
    if a.energy.is_some() && lines.is_empty() {
        warnings.push(format!(
            "set {:?}, n = {}: closed-form energy has no polynomial solution",
            a.set_label, a.n
        ));
    }
    Ok((lines, warnings))
}

/// Sample points used for the rank test of degenerate groups.
fn probe_points(line: &SpectralLine) -> Result<Vec<f64>> {
    let (lo, hi, _) = line.recipe.interval()?;
    Ok((0..48).map(|i| lo + (hi - lo) * (i as f64 + 0.37) / 48.0).collect())
}

/// Keep the lines of a degenerate group that are linearly independent.
fn independent(group: Vec<SpectralLine>) -> Result<Vec<SpectralLine>> {
    if group.len() == 1 {
        return Ok(group);
    }
    let xs = probe_points(&group[0])?;
    let mut kept: Vec<SpectralLine> = Vec::new();
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for line in group {
        let mut v: Vec<Complex64> = xs.iter().map(|&x| line.recipe.eval_real(x)).collect::<Result<_>>()?;
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        v.iter_mut().for_each(|z| *z /= nrm);
        let mut trial = cols.clone();
        trial.push(v);
        if numerical_rank(&trial) == trial.len() {
            cols = trial;
            kept.push(line);
        }
    }
    let d = kept.len();
    kept.iter_mut().for_each(|l| l.degeneracy = d);
    Ok(kept)
}

fn numerical_rank(cols: &[Vec<Complex64>]) -> usize {
    let m = DMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
    let sv = m.singular_values();
    let smax = sv.max();
    sv.iter().filter(|&&s| s > 1e-8 * smax).count()
}

/// Quantize, solve every admissible assignment and group degenerate levels.
pub fn solve_spectrum(model: &Model, opts: SolveOptions) -> Result<Spectrum> {
    let q = quantize(model, opts.levels)?;
    let results: Vec<Result<(Vec<SpectralLine>, Vec<String>)>> =
        q.admissible.par_iter().map(|a| lines_for(model, a)).collect();
    let mut lines = Vec::new();
    let mut warnings = Vec::new();
    for r in results {
        let (l, w) = r?;
        lines.extend(l);
        warnings.extend(w);
    }
    if lines.is_empty() {
        return Err(QhjError::NoAdmissibleAssignment(format!(
            "{}: {} combinations rejected",
            model.id,
            q.rejected.len()
        )));
    }
    lines.sort_by(|a, b| {
        a.energy
            .re()
            .total_cmp(&b.energy.re())
            .then(a.energy.im().total_cmp(&b.energy.im()))
            .then(a.set_label.cmp(&b.set_label))
    });
    let mut grouped = Vec::new();
    let mut current: Vec<SpectralLine> = Vec::new();
    for line in lines {
        let same = current.first().is_some_and(|f| {
            (f.energy.value - line.energy.value).norm() <= GROUP_TOL * f.energy.value.norm().max(1.0)
        });
        if !same && !current.is_empty() {
            grouped.extend(independent(std::mem::take(&mut current))?);
        }
        current.push(line);
    }
    grouped.extend(independent(current)?);
    if let Some(expected) = expected_count(model) {
        if grouped.len() != expected {
            warnings.push(format!("expected {expected} band edges, found {}", grouped.len()));
        }
    }
    Ok(Spectrum {
        model: model.id,
        kind: outcome_kind(model),
        mode: q.mode,
        lines: grouped,
        rejected: q.rejected,
        warnings,
    })
}

/// Number of analytic band edges where it is fixed by the order of the potential.
pub fn expected_count(model: &Model) -> Option<usize> {
    match model.id {
        ModelId::Lame | ModelId::AssocLameEs => Some(2 * model.params.integer("j") as usize + 1),
        _ => None,
    }
}

/// Lowest real part among the analytic levels; used to shift potentials so it becomes zero.
pub fn lowest_analytic_energy(model: &Model) -> Result<f64> {
    let spec = solve_spectrum(model, SolveOptions::default())?;
    Ok(spec.lines.iter().map(|l| l.energy.re()).fold(f64::INFINITY, f64::min))
}

/// One solution of the four QES conditions for given `a` and `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct QesMember {
    pub set_label: u8,
    pub relation: String,
    pub b: Scalar,
}

/// QES parameter family of the associated Lame potential.
#[derive(Clone, Debug, PartialEq)]
pub struct QesFamily {
    pub members: Vec<QesMember>,
    /// Distinct couplings `(p, q) = (a(a+1), b(b+1))`.
    pub couplings: Vec<(Scalar, Scalar)>,
}

/// The `b` values solving each QES relation for given `a` and `n`.
pub fn qes_family(a: Scalar, n: i64) -> QesFamily {
    if n < 0 {
        return QesFamily { members: vec![], couplings: vec![] };
    }
    let nn = Scalar::int(n);
    let one = Scalar::one();
    let rows = [
        (1u8, "b - a = -n - 2", a - nn - Scalar::int(2)),
        (2, "a + b + 1 = n + 2", nn + one - a),
        (3, "b - a = -n - 1", a - nn - one),
        (4, "a + b = n", nn - a),
    ];
    let members: Vec<QesMember> = rows
        .iter()
        .map(|(s, r, b)| QesMember { set_label: *s, relation: r.to_string(), b: *b })
        .collect();
    let mut couplings: Vec<(Scalar, Scalar)> = Vec::new();
    for m in &members {
        let pq = (a * (a + one), m.b * (m.b + one));
        if !couplings.iter().any(|x| x.0.approx_eq(&pq.0, 1e-12) && x.1.approx_eq(&pq.1, 1e-12)) {
            couplings.push(pq);
        }
    }
    QesFamily { members, couplings }
}
