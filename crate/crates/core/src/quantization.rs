//! Enumeration of residue assignments and the quantization condition
//! `sum_i b_i + n = lambda1`.
//!
//! Every combination of residue branches is generated. Combinations are then
//! filtered by pole parity, by symmetry-equivalent choices at infinity, by
//! integrality and sign of `n`, and by the model's boundary rules. When the
//! energy enters the residues or the expansion at infinity, the condition is
//! solved for `E` in closed form for each `n`.

use crate::catalog::{Model, Rule};
use crate::error::{QhjError, Result};
use crate::exact::Scalar;
use crate::residues::{finite_pole_residues, infinity_branches, Affine, ZERO_TOL};
use serde::{Deserialize, Serialize};

const INT_TOL: f64 = 1e-9;

/// Where the energy enters the residue data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMode {
    /// Residues and `lambda1` are energy independent; energies come from the pencil.
    Free,
    /// `G0` depends on `E` (Coulomb-like).
    Leading,
    /// `G0 = G1 = 0` and `G2` depends on `E`.
    Subleading,
    /// The fixed-pole coefficients depend on `E`.
    Poles,
}

/// Why a residue combination was discarded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RejectReason {
    ParityMismatch,
    SymmetryEquivalent,
    NegativeN { n: String },
    NonIntegerN { n: String },
    VanishingLambda,
    BranchInconsistent,
    NotVanishingAtPole { pole: String },
    ClassicalLimit { pole: String },
    GrowingExponential,
    NotDecayingAtInfinity,
}

/// An admissible residue assignment.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub pole_branches: Vec<usize>,
    /// Square-root sign for energy-dependent poles.
    pub signs: Vec<Option<i8>>,
    pub residues: Vec<Scalar>,
    pub infinity_branch: usize,
    pub a0: Scalar,
    pub lambda1: Scalar,
    pub n: u32,
    /// Energy fixed by the quantization condition, when it is.
    pub energy: Option<Scalar>,
    pub set_label: Option<u8>,
}

impl Assignment {
    pub fn residue_sum(&self) -> Scalar {
        self.residues.iter().fold(Scalar::zero(), |acc, b| acc + *b)
    }

    /// `sum b_i + n - lambda1`, exactly zero for rational data.
    pub fn sum_rule_defect(&self) -> Scalar {
        self.residue_sum() + Scalar::int(self.n as i64) - self.lambda1
    }
}

/// A discarded combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejected {
    pub pole_branches: Vec<usize>,
    pub infinity_branch: Option<usize>,
    #[serde(flatten)]
    pub reason: RejectReason,
}

/// Outcome of the enumeration.
#[derive(Clone, Debug)]
pub struct Quantization {
    pub mode: EnergyMode,
    pub admissible: Vec<Assignment>,
    pub rejected: Vec<Rejected>,
}

pub fn energy_mode(model: &Model) -> EnergyMode {
    let inf = &model.infinity;
    if model.poles.iter().any(|p| p.g2.depends_on_energy()) {
        EnergyMode::Poles
    } else if inf.g0.depends_on_energy() {
        EnergyMode::Leading
    } else if inf.g0.constant.is_negligible(ZERO_TOL)
        && inf.g1.constant.is_negligible(ZERO_TOL)
        && !inf.g1.depends_on_energy()
        && inf.g2.depends_on_energy()
    {
        EnergyMode::Subleading
    } else {
        EnergyMode::Free
    }
}

fn bits(combo: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| (combo >> i) & 1).collect()
}

fn parity_ok(model: &Model, branches: &[usize]) -> bool {
    model.parity_pairs.iter().all(|&(i, j)| branches[i] == branches[j])
}

/// Apply the model's boundary rules to a candidate.
pub fn check_rules(model: &Model, residues: &[Scalar], a0: &Scalar, lambda1: &Scalar) -> Option<RejectReason> {
    for rule in &model.rules {
        match rule {
            Rule::SymmetryEquivalent(v) => {
                if lambda1.approx_eq(v, 1e-12) {
                    return Some(RejectReason::SymmetryEquivalent);
                }
            }
            Rule::VanishAtPole(i) => {
                let nu = model.metric_order_at(*i) as f64;
                if residues[*i].re() - nu / 4.0 <= ZERO_TOL {
                    return Some(RejectReason::NotVanishingAtPole { pole: model.poles[*i].label.clone() });
                }
            }
            Rule::ClassicalSign { pole, kappa } => {
                let expected = if *kappa > 0.0 { kappa + 0.25 } else { 0.75 - kappa };
                if (residues[*pole].value - expected).norm() > 1e-9 * (1.0 + expected.abs()) {
                    return Some(RejectReason::ClassicalLimit { pole: model.poles[*pole].label.clone() });
                }
            }
            Rule::DecayExponential => {
                if a0.re() >= -ZERO_TOL {
                    return Some(RejectReason::GrowingExponential);
                }
            }
            Rule::DecayAtInfinity => {
                if lambda1.re() >= model.gauge_at_infinity() - ZERO_TOL {
                    return Some(RejectReason::NotDecayingAtInfinity);
                }
            }
        }
    }
    None
}

fn classify_n(defect: &Scalar) -> std::result::Result<u32, RejectReason> {
    if !defect.is_integer(INT_TOL) {
        return Err(RejectReason::NonIntegerN { n: defect.to_string() });
    }
    match defect.as_nonnegative_integer(INT_TOL) {
        Some(n) => Ok(n),
        None => Err(RejectReason::NegativeN { n: defect.to_string() }),
    }
}

/// Enumerate assignments. `levels` bounds `n` when the energy is fixed by the
/// quantization condition itself; it is ignored otherwise.
pub fn quantize(model: &Model, levels: u32) -> Result<Quantization> {
    let mode = energy_mode(model);
    let k = model.poles.len();
    let mut admissible = Vec::new();
    let mut rejected = Vec::new();
    let mut reject = |branches: &[usize], ib: Option<usize>, reason: RejectReason| {
        rejected.push(Rejected { pole_branches: branches.to_vec(), infinity_branch: ib, reason });
    };

    let fixed_roots: Vec<Option<[Scalar; 2]>> = model
        .poles
        .iter()
        .map(|p| (!p.g2.depends_on_energy()).then(|| finite_pole_residues(&p.g2.constant)))
        .collect();

    for combo in 0..(1usize << k) {
        let branches = bits(combo, k);
        if !parity_ok(model, &branches) {
            reject(&branches, None, RejectReason::ParityMismatch);
            continue;
        }
        let fixed_sum = branches
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| fixed_roots[i].map(|r| r[b]))
            .fold(Scalar::zero(), |acc, b| acc + b);

        match mode {
            EnergyMode::Free => {
                let inf = &model.infinity;
                let br = infinity_branches(&inf.g0.constant, &inf.g1.constant, &inf.g2.constant)?;
                let residues: Vec<Scalar> =
                    branches.iter().enumerate().map(|(i, &b)| fixed_roots[i].unwrap()[b]).collect();
                for (ib, branch) in br.iter().enumerate() {
                    if model.rules.iter().any(|r| matches!(r, Rule::SymmetryEquivalent(v) if branch.lambda1.approx_eq(v, 1e-12))) {
                        reject(&branches, Some(ib), RejectReason::SymmetryEquivalent);
                        continue;
                    }
                    let n = match classify_n(&(branch.lambda1 - fixed_sum)) {
                        Ok(n) => n,
                        Err(e) => {
                            reject(&branches, Some(ib), e);
                            continue;
                        }
                    };
                    if let Some(reason) = check_rules(model, &residues, &branch.a0, &branch.lambda1) {
                        reject(&branches, Some(ib), reason);
                        continue;
                    }
                    admissible.push(finish(model, &branches, vec![None; k], residues.clone(), ib, branch.a0, branch.lambda1, n, None));
                }
            }
            EnergyMode::Leading | EnergyMode::Subleading => {
                let residues: Vec<Scalar> =
                    branches.iter().enumerate().map(|(i, &b)| fixed_roots[i].unwrap()[b]).collect();
                let unbounded = mode == EnergyMode::Subleading && model.rules.contains(&Rule::DecayAtInfinity);
                let cap = if unbounded { 100_000 } else { levels };
                for n in 0..cap {
                    let lambda1 = fixed_sum + Scalar::int(n as i64);
                    let (a0, energy, ib) = if mode == EnergyMode::Leading {
                        if lambda1.is_negligible(ZERO_TOL) {
                            reject(&branches, None, RejectReason::VanishingLambda);
                            continue;
                        }
                        let a0 = -model.infinity.g1.constant / (Scalar::int(2) * lambda1);
                        let e = solve_affine(&model.infinity.g0, -(a0 * a0))?;
                        let first = crate::residues::infinity_branches(
                            &model.infinity.g0.at(&e),
                            &model.infinity.g1.constant,
                            &Scalar::zero(),
                        )?[0]
                            .a0;
                        (a0, e, if first.approx_eq(&a0, 1e-9) { 0 } else { 1 })
                    } else {
                        let target = lambda1 - lambda1 * lambda1;
                        let e = solve_affine(&model.infinity.g2, target)?;
                        let roots = finite_pole_residues(&model.infinity.g2.at(&e));
                        (Scalar::zero(), e, if roots[0].approx_eq(&lambda1, 1e-9) { 0 } else { 1 })
                    };
                    if let Some(reason) = check_rules(model, &residues, &a0, &lambda1) {
                        let stop = unbounded && reason == RejectReason::NotDecayingAtInfinity;
                        reject(&branches, Some(ib), reason);
                        if stop {
                            break;
                        }
                        continue;
                    }
                    admissible.push(finish(model, &branches, vec![None; k], residues.clone(), ib, a0, lambda1, n, Some(energy)));
                }
            }
            EnergyMode::Poles => {
                let dep: Vec<usize> = (0..k).filter(|&i| fixed_roots[i].is_none()).collect();
                let sign = |b: usize| if b == 0 { 1i8 } else { -1i8 };
                let s0 = sign(branches[dep[0]]);
                if dep.iter().any(|&i| sign(branches[i]) != s0)
                    || dep.iter().any(|&i| model.poles[i].g2 != model.poles[dep[0]].g2)
                {
                    return Err(QhjError::Inconsistent(
                        "energy-dependent poles must share their coefficient and branch".into(),
                    ));
                }
                let g2 = model.poles[dep[0]].g2;
                let inf = &model.infinity;
                let br = infinity_branches(&inf.g0.constant, &inf.g1.constant, &inf.g2.constant)?;
                let kk = Scalar::int(dep.len() as i64);
                for (ib, branch) in br.iter().enumerate() {
                    for n in 0..levels {
                        let w = Scalar::int(2) * (branch.lambda1 - Scalar::int(n as i64) - fixed_sum) / kk
                            - Scalar::one();
                        let target = (Scalar::one() - w * w) / Scalar::int(4);
                        let e = solve_affine(&g2, target)?;
                        let root = (Scalar::one() - Scalar::int(4) * g2.at(&e)).sqrt();
                        let signed = if s0 > 0 { root } else { -root };
                        if !signed.approx_eq(&w, 1e-9) {
                            reject(&branches, Some(ib), RejectReason::BranchInconsistent);
                            continue;
                        }
                        let b = (Scalar::one() + w) / Scalar::int(2);
                        let residues: Vec<Scalar> = (0..k)
                            .map(|i| fixed_roots[i].map_or(b, |r| r[branches[i]]))
                            .collect();
                        if let Some(reason) = check_rules(model, &residues, &branch.a0, &branch.lambda1) {
                            reject(&branches, Some(ib), reason);
                            continue;
                        }
                        let signs = (0..k).map(|i| fixed_roots[i].is_none().then_some(s0)).collect();
                        admissible.push(finish(model, &branches, signs, residues, ib, branch.a0, branch.lambda1, n, Some(e)));
                    }
                }
            }
        }
    }
    Ok(Quantization { mode, admissible, rejected })
}

fn solve_affine(a: &Affine, target: Scalar) -> Result<Scalar> {
    a.solve(&target)
        .ok_or_else(|| QhjError::Inconsistent("expected an energy-dependent coefficient".into()))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    model: &Model,
    branches: &[usize],
    signs: Vec<Option<i8>>,
    residues: Vec<Scalar>,
    infinity_branch: usize,
    a0: Scalar,
    lambda1: Scalar,
    n: u32,
    energy: Option<Scalar>,
) -> Assignment {
    let set_label = model.set_label(&residues, &lambda1, &signs);
    Assignment {
        pole_branches: branches.to_vec(),
        signs,
        residues,
        infinity_branch,
        a0,
        lambda1,
        n,
        energy,
        set_label,
    }
}
