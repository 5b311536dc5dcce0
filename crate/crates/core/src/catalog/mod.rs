//! Catalog of solvable potentials.
//!
//! Every model is reduced to the same normal form. A change of variable
//! `y = f(x)` with `(dy/dx)^2 = R(y)` polynomial turns the Schrodinger equation
//! into `chi^2 + chi' + G(y) = 0` with
//!
//! ```text
//! G = (E - V(y)) / R - R'' / (4 R) + 3 R'^2 / (16 R^2) = (N0 + E N1) / D,
//! D = prod_i (y - y_i)^2.
//! ```
//!
//! Besides the rational data each model carries the closed-form residue
//! options and set tables used to label solutions, and the admissibility
//! rules that select physical residue assignments.

mod models;
pub mod params;

pub use params::{ParamKind, ParamSet, ParamSpec, RawParams};

use crate::error::{QhjError, Result};
use crate::exact::Scalar;
use crate::poly::Poly;
use crate::residues::{Affine, FixedPole, InfinityData};
use crate::special::jacobi_sn_cn_dn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Identifiers of the catalog entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Hydrogen,
    Scarf1,
    ScarfPeriodic,
    Lame,
    AssocLameEs,
    AssocLameQes,
    KhareMandal,
    ComplexScarf,
}

impl ModelId {
    pub const ALL: [ModelId; 8] = [
        ModelId::Hydrogen,
        ModelId::Scarf1,
        ModelId::ScarfPeriodic,
        ModelId::Lame,
        ModelId::AssocLameEs,
        ModelId::AssocLameQes,
        ModelId::KhareMandal,
        ModelId::ComplexScarf,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelId::Hydrogen => "hydrogen",
            ModelId::Scarf1 => "scarf1",
            ModelId::ScarfPeriodic => "scarf_periodic",
            ModelId::Lame => "lame",
            ModelId::AssocLameEs => "assoc_lame_es",
            ModelId::AssocLameQes => "assoc_lame_qes",
            ModelId::KhareMandal => "khare_mandal",
            ModelId::ComplexScarf => "complex_scarf",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = QhjError;
    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| QhjError::UnknownModel(s.to_string()))
    }
}

/// Change of variable `y = f(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Variable {
    /// `y = r`
    Identity,
    /// `y = sin(alpha x)`
    SinAlpha(f64),
    /// `y = cot x`
    Cot,
    /// `y = sn(x | m)`
    Sn(f64),
    /// `y = cosh 2x`
    CoshTwo,
    /// `y = i sinh x`
    ISinh,
}

impl Variable {
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        Ok(match *self {
            Variable::Identity => x,
            Variable::SinAlpha(a) => (x * a).sin(),
            Variable::Cot => {
                let s = x.sin();
                if s.norm() == 0.0 {
                    return Err(QhjError::Singular(format!("cot x at x = {x}")));
                }
                x.cos() / s
            }
            Variable::Sn(m) => {
                real_only(x)?;
                Complex64::new(jacobi_sn_cn_dn(x.re, m)?.sn, 0.0)
            }
            Variable::CoshTwo => (x * 2.0).cosh(),
            Variable::ISinh => Complex64::i() * x.sinh(),
        })
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Variable::Identity => "r",
            Variable::SinAlpha(_) => "sin(alpha x)",
            Variable::Cot => "cot x",
            Variable::Sn(_) => "sn x",
            Variable::CoshTwo => "cosh 2x",
            Variable::ISinh => "i sinh x",
        }
    }
}

pub fn real_only(x: Complex64) -> Result<()> {
    if x.im != 0.0 {
        return Err(QhjError::Domain(format!(
            "elliptic functions are evaluated on the real axis only (x = {x})"
        )));
    }
    Ok(())
}

/// Physical domain of the coordinate `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// `0 < r < infinity`
    HalfLine,
    /// `a < x < b` with singular walls at both ends.
    Walls { a: f64, b: f64 },
    /// Periodic potential with the given period.
    Periodic { period: f64 },
    /// The whole real line.
    RealLine,
}

/// What kind of spectrum the analytic solutions describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Bound,
    BandEdges,
    NonHermitian,
}

/// Admissibility rule applied to a residue assignment.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// `psi ~ (y - y_i)^(b - nu/4)` must vanish at the pole.
    VanishAtPole(usize),
    /// Keep the residue whose classical (large-parameter) part is positive:
    /// `kappa + 1/4` when `kappa > 0`, otherwise `3/4 - kappa`.
    ClassicalSign { pole: usize, kappa: f64 },
    /// `exp(a0 y)` must decay, `Re a0 < 0`.
    DecayExponential,
    /// `psi ~ y^(lambda1 - deg R / 4)` must vanish as `|y| -> infinity`.
    DecayAtInfinity,
    /// `lambda1` equal to this value duplicates another parameter choice.
    SymmetryEquivalent(Scalar),
}

/// How a residue option is specified in the published tables.
#[derive(Clone, Debug)]
pub enum OptionValue {
    Value(Scalar),
    /// Energy-dependent residue `(1 + sign sqrt(1 - 4 g2(E)))/2`.
    Sign(i8),
}

/// A named residue option, e.g. `"3/4+b/2"`.
#[derive(Clone, Debug)]
pub struct ResidueOption {
    pub name: String,
    pub value: OptionValue,
}

impl ResidueOption {
    pub(crate) fn value(name: impl Into<String>, v: Scalar) -> Self {
        Self { name: name.into(), value: OptionValue::Value(v) }
    }
    pub(crate) fn sign(name: impl Into<String>, s: i8) -> Self {
        Self { name: name.into(), value: OptionValue::Sign(s) }
    }
}

/// A labelled row of a residue table: option index per pole and optionally at infinity.
#[derive(Clone, Debug)]
pub struct SetDef {
    pub label: u8,
    pub poles: Vec<usize>,
    pub infinity: Option<usize>,
}

/// Base functions of `x` used in wavefunction prefactors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// The variable `y` itself.
    Y,
    OneMinusY,
    OnePlusY,
    AbsSin,
    Cn,
    Dn,
    Sinh,
    Cosh,
}

impl Base {
    pub fn describe(&self, var: &Variable) -> String {
        let y = var.describe();
        match self {
            Base::Y => y.to_string(),
            Base::OneMinusY => format!("(1 - {y})"),
            Base::OnePlusY => format!("(1 + {y})"),
            Base::AbsSin => "|sin x|".into(),
            Base::Cn => "cn x".into(),
            Base::Dn => "dn x".into(),
            Base::Sinh => "sinh x".into(),
            Base::Cosh => "cosh x".into(),
        }
    }
}

/// Exponent of a base function as an affine combination of residues:
/// `offset + sum_k coeff_k * b_k`.
#[derive(Clone, Debug)]
pub struct PrefactorMap {
    pub base: Base,
    pub offset: Scalar,
    pub terms: Vec<(usize, Scalar)>,
}

/// A solvable model in normal form.
#[derive(Clone, Debug)]
pub struct Model {
    pub id: ModelId,
    pub params: ParamSet,
    pub variable: Variable,
    pub domain: Domain,
    pub spectrum: SpectrumKind,
    /// `(dy/dx)^2` as a polynomial in `y`.
    pub metric: Poly,
    /// Potential as a rational function of `y`, including the energy offset.
    pub potential_num: Poly,
    pub potential_den: Poly,
    /// Constant added to the bare potential (zero unless shifted).
    pub energy_offset: Scalar,
    pub poles: Vec<FixedPole>,
    pub infinity: InfinityData,
    pub parity_pairs: Vec<(usize, usize)>,
    pub parity_basis: bool,
    pub rules: Vec<Rule>,
    pub pole_options: Vec<Vec<ResidueOption>>,
    pub infinity_options: Vec<ResidueOption>,
    pub sets: Vec<SetDef>,
    pub prefactors: Vec<PrefactorMap>,
    /// Energy-scale quantities used by solvers (e.g. `K(m)`).
    pub quarter_period: Option<f64>,
    pub(crate) g_den: Poly,
    pub(crate) g_num0: Poly,
    pub(crate) g_num1: Poly,
}

/// Human-readable catalog entry for `list`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelInfo {
    pub id: ModelId,
    pub name: String,
    pub potential: String,
    pub variable: String,
    pub spectrum: SpectrumKind,
    pub parameters: Vec<ParamSpec>,
}

/// Declarations for every catalog entry.
pub fn list_models() -> Vec<ModelInfo> {
    ModelId::ALL.iter().map(|&id| models::info(id)).collect()
}

/// Build a validated model without the ground-level shift.
pub fn bare_model(id: ModelId, raw: &RawParams) -> Result<Model> {
    let info = models::info(id);
    let params = ParamSet::from_raw(&info.parameters, raw)?;
    models::build(id, params)
}

/// Build a validated model.
pub fn get_model(id: ModelId, raw: &RawParams) -> Result<Model> {
    let mut model = bare_model(id, raw)?;
    if models::shift_to_ground(id) {
        let ground = crate::spectrum::lowest_analytic_energy(&model)?;
        model = model.with_offset(Scalar::real(-ground))?;
    }
    Ok(model)
}

/// Map a periodic Scarf cell `V0 / sin^2(pi x / a)` onto the catalog form with `a = pi`.
///
/// Returns `(s, scale)`: use the `scarf_periodic` entry with this `s` and multiply its
/// energies by `scale = (pi / a)^2`.
pub fn scarf_periodic_from_cell(a: f64, v0: f64) -> Result<(f64, f64)> {
    if !(a.is_finite() && a > 0.0) {
        return Err(crate::error::invalid("a", "cell length must be positive"));
    }
    let c = v0 * a * a / (std::f64::consts::PI * std::f64::consts::PI);
    let s2 = 0.25 + c;
    if !(s2 > 0.0) || (s2 - 0.25).abs() < 1e-15 {
        return Err(crate::error::invalid("V0", "needs V0 a^2 / pi^2 > -1/4 and V0 != 0"));
    }
    Ok((s2.sqrt(), (std::f64::consts::PI / a).powi(2)))
}

/// Convenience wrapper taking `(name, value)` pairs of floats.
pub fn model_from_pairs(id: ModelId, pairs: &[(&str, f64)]) -> Result<Model> {
    let raw: RawParams = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    get_model(id, &raw)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Model {
    /// Potential evaluated directly in `x`.
    pub fn potential(&self, x: Complex64) -> Result<Complex64> {
        models::potential(self, x).map(|v| v + self.energy_offset.value)
    }

    /// Potential as a function of the transformed variable.
    pub fn potential_y(&self, y: Complex64) -> Complex64 {
        self.potential_num.eval(y) / self.potential_den.eval(y)
    }

    /// `G(y)` at energy `e`.
    pub fn g(&self, y: Complex64, e: Complex64) -> Complex64 {
        (self.g_num0.eval(y) + e * self.g_num1.eval(y)) / self.g_den.eval(y)
    }

    /// `G` evaluated from its defining formula rather than the stored numerators.
    pub fn g_from_definition(&self, y: Complex64, e: Complex64) -> Complex64 {
        let r = self.metric.eval(y);
        let r1 = self.metric.derivative().eval(y);
        let r2 = self.metric.derivative().derivative().eval(y);
        (e - self.potential_y(y)) / r - r2 / (4.0 * r) + 3.0 * r1 * r1 / (16.0 * r * r)
    }

    /// Denominator `D` and numerators `N0`, `N1` of `G = (N0 + E N1) / D`.
    pub fn g_rational(&self) -> (&Poly, &Poly, &Poly) {
        (&self.g_den, &self.g_num0, &self.g_num1)
    }

    pub fn pole_locations(&self) -> Vec<Complex64> {
        self.poles.iter().map(|p| p.location).collect()
    }

    /// Multiplicity of `y_i` as a zero of the metric `R`.
    pub fn metric_order_at(&self, i: usize) -> u32 {
        let y = self.poles[i].location;
        let mut p = self.metric.clone();
        let mut k = 0;
        let scale = self.metric.max_abs().max(1.0);
        while !p.is_zero() && p.eval(y).norm() <= 1e-10 * scale && k < 8 {
            p = p.derivative();
            k += 1;
        }
        k
    }

    /// Exponent of `|y|` in the metric gauge factor `R^(-1/4)` at large `y`.
    pub fn gauge_at_infinity(&self) -> f64 {
        self.metric.trimmed(1e-14).degree().unwrap_or(0) as f64 / 4.0
    }

    /// Shift the potential by a constant.
    pub fn with_offset(mut self, shift: Scalar) -> Result<Self> {
        if shift.is_zero() {
            return Ok(self);
        }
        self.energy_offset = self.energy_offset + shift;
        self.potential_num = &self.potential_num + &self.potential_den.scale(shift.value);
        let move_e = |a: &Affine| Affine::new(a.constant - a.slope * shift, a.slope);
        for p in &mut self.poles {
            p.g2 = move_e(&p.g2);
        }
        self.infinity = InfinityData {
            g0: move_e(&self.infinity.g0),
            g1: move_e(&self.infinity.g1),
            g2: move_e(&self.infinity.g2),
        };
        self.refresh_g()?;
        Ok(self)
    }

    /// Rebuild `(D, N0, N1)` from the metric and potential.
    pub(crate) fn refresh_g(&mut self) -> Result<()> {
        let r = &self.metric;
        let r1 = r.derivative();
        let r2 = r1.derivative();
        let vd = &self.potential_den;
        let vn = &self.potential_num;
        let den = &(&(r * r) * vd).scale(c(16.0));
        let d = Poly::from_roots(
            &self
                .pole_locations()
                .iter()
                .flat_map(|&y| [y, y])
                .collect::<Vec<_>>(),
        );
        let num0 = &(&(&(r * vn).scale(c(-16.0)) - &(&(r * &r2) * vd).scale(c(4.0)))
            + &(&(&r1 * &r1) * vd).scale(c(3.0)));
        let num1 = &(r * vd).scale(c(16.0));
        let tol = 1e-10;
        let n0 = (num0 * &d).div_exact(den, tol).ok_or_else(|| {
            QhjError::Inconsistent(format!("{}: G has poles outside the declared list", self.id))
        })?;
        let n1 = (num1 * &d).div_exact(den, tol).ok_or_else(|| {
            QhjError::Inconsistent(format!("{}: energy term has undeclared poles", self.id))
        })?;
        self.g_den = d;
        self.g_num0 = n0;
        self.g_num1 = n1;
        Ok(())
    }

    /// `g2` at every fixed pole recomputed from `G` as affine functions of `E`.
    pub fn numeric_pole_coefficients(&self) -> Vec<(Complex64, Complex64)> {
        let locs = self.pole_locations();
        locs.iter()
            .enumerate()
            .map(|(i, &yi)| {
                let w: Complex64 = locs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &yk)| (yi - yk) * (yi - yk))
                    .product();
                (self.g_num0.eval(yi) / w, self.g_num1.eval(yi) / w)
            })
            .collect()
    }

    /// `(G0, G1, G2)` recomputed from `G`, each as `(constant, slope)`.
    pub fn numeric_infinity_coefficients(&self) -> [(Complex64, Complex64); 3] {
        let a = self.g_num0.expand_at_infinity(&self.g_den, 3);
        let b = self.g_num1.expand_at_infinity(&self.g_den, 3);
        [(a[0], b[0]), (a[1], b[1]), (a[2], b[2])]
    }

    /// Prefactor exponents for a residue assignment.
    pub fn prefactor_exponents(&self, residues: &[Scalar]) -> Vec<(Base, Scalar)> {
        self.prefactors
            .iter()
            .map(|p| {
                let e = p
                    .terms
                    .iter()
                    .fold(p.offset, |acc, (k, w)| acc + *w * residues[*k]);
                (p.base, e)
            })
            .collect()
    }

    /// Match residues (and `lambda1`) against the published set table.
    pub fn set_label(&self, residues: &[Scalar], lambda1: &Scalar, signs: &[Option<i8>]) -> Option<u8> {
        let matches = |opt: &ResidueOption, value: &Scalar, sign: Option<i8>| match &opt.value {
            OptionValue::Value(v) => v.approx_eq(value, 1e-9),
            OptionValue::Sign(s) => sign == Some(*s),
        };
        self.sets.iter().find_map(|set| {
            let poles_ok = set.poles.iter().enumerate().all(|(i, &o)| {
                matches(&self.pole_options[i][o], &residues[i], signs.get(i).copied().flatten())
            });
            let inf_ok = set
                .infinity
                .map_or(true, |o| matches(&self.infinity_options[o], lambda1, None));
            (poles_ok && inf_ok).then_some(set.label)
        })
    }

    /// Relation or closed form describing the level for a given set.
    pub fn formula(&self, set: Option<u8>) -> String {
        models::formula(self, set)
    }

    pub fn info(&self) -> ModelInfo {
        models::info(self.id)
    }
}
