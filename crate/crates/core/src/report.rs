//! Machine-readable documents: JSON with fixed float formatting and stable key order,
//! CSV for plotting.

use crate::catalog::{Model, ModelId, ModelInfo};
use crate::error::{QhjError, Result};
use crate::exact::Scalar;
use crate::oracle::verify::{analytic_bc, VerifyReport};
use crate::quantization::{EnergyMode, Rejected};
use crate::spectrum::{EnergySource, OutcomeKind, SpectralLine, Spectrum};
use crate::wavefunction::{BcTag, Normalization, SampledWavefunction, ZeroCount};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexDoc {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// A value with its exact rational form when known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueDoc {
    pub re: f64,
    pub im: f64,
    pub exact: Option<String>,
}

impl From<&Scalar> for ValueDoc {
    fn from(s: &Scalar) -> Self {
        Self { re: s.re(), im: s.im(), exact: s.exact.map(|q| q.to_string()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    pub set_label: Option<u8>,
    pub n: u32,
    pub residues: Vec<ValueDoc>,
    pub lambda1: ValueDoc,
    pub a0: ValueDoc,
    pub energy: ValueDoc,
    pub source: EnergySource,
    pub formula: String,
    pub degeneracy: usize,
    pub wavefunction_form: String,
    /// Coefficients of `P_n(t)`, lowest power first, leading coefficient one.
    pub polynomial: Vec<ComplexDoc>,
    pub zeros: ZeroCount,
    pub bc: BcTag,
}

/// Output of `solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDoc {
    pub model: ModelId,
    pub params: Value,
    pub kind: OutcomeKind,
    pub mode: EnergyMode,
    pub lines: Vec<LineDoc>,
    pub rejected: Vec<Rejected>,
    pub warnings: Vec<String>,
}

fn line_doc(model: &Model, line: &SpectralLine) -> Result<LineDoc> {
    Ok(LineDoc {
        set_label: line.set_label,
        n: line.n(),
        residues: line.assignment.residues.iter().map(ValueDoc::from).collect(),
        lambda1: (&line.assignment.lambda1).into(),
        a0: (&line.assignment.a0).into(),
        energy: (&line.energy).into(),
        source: line.source,
        formula: line.formula.clone(),
        degeneracy: line.degeneracy,
        wavefunction_form: line.recipe.describe(),
        polynomial: line.polynomial.coeffs.iter().map(|&z| z.into()).collect(),
        zeros: line.recipe.zero_count(),
        bc: analytic_bc(model, line)?,
    })
}

pub fn spectrum_document(model: &Model, spectrum: &Spectrum) -> Result<SpectrumDoc> {
    Ok(SpectrumDoc {
        model: model.id,
        params: model.params.to_json(),
        kind: spectrum.kind,
        mode: spectrum.mode,
        lines: spectrum.lines.iter().map(|l| line_doc(model, l)).collect::<Result<_>>()?,
        rejected: spectrum.rejected.clone(),
        warnings: spectrum.warnings.clone(),
    })
}

/// Rewrite every non-integer number as `{:.16e}` (17 significant digits).
fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(x) if x.is_finite() => {
                serde_json::from_str(&format!("{:.16e}", x + 0.0)).unwrap_or(Value::Number(n))
            }
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and fixed float formatting, newline terminated.
pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let v = canonical(serde_json::to_value(doc)?);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Parse a `solve --json` document, rejecting anything outside the schema.
pub fn parse_spectrum_document(text: &str) -> Result<SpectrumDoc> {
    Ok(serde_json::from_str(text)?)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| QhjError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| QhjError::Inconsistent(e.to_string()))
}

fn csv_err(e: csv::Error) -> QhjError {
    QhjError::Io(std::io::Error::other(e))
}

/// `re+imi` at fixed precision without negative zeros.
fn complex_text(re: f64, im: f64, prec: usize) -> String {
    let clean = |s: String| if s.trim_start_matches(['-', '+']).chars().all(|c| c == '0' || c == '.') { s.replacen('-', "+", 1) } else { s };
    let r = clean(format!("{re:.prec$}"));
    let r = r.strip_prefix('+').map(str::to_string).unwrap_or(r);
    format!("{r}{}i", clean(format!("{im:+.prec$}")))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per line.
pub fn spectrum_csv(doc: &SpectrumDoc) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["set_label", "n", "energy_re", "energy_im", "energy_exact", "degeneracy", "bc", "formula", "wavefunction_form"])
        .map_err(csv_err)?;
    for l in &doc.lines {
        w.write_record([
            l.set_label.map(|s| s.to_string()).unwrap_or_default(),
            l.n.to_string(),
            num(l.energy.re),
            num(l.energy.im),
            l.energy.exact.clone().unwrap_or_default(),
            l.degeneracy.to_string(),
            serde_json::to_value(l.bc)?.as_str().unwrap_or_default().to_string(),
            l.formula.clone(),
            l.wavefunction_form.clone(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

/// Columns `x, re, im`.
pub fn wavefunction_csv(s: &SampledWavefunction) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["x", "re", "im"]).map_err(csv_err)?;
    for (x, v) in s.xs.iter().zip(&s.values) {
        w.write_record([num(*x), num(v.re), num(v.im)]).map_err(csv_err)?;
    }
    finish(w)
}

/// Output of `wavefunction --json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionDoc {
    pub set_label: Option<u8>,
    pub n: u32,
    pub energy: ValueDoc,
    pub wavefunction_form: String,
    pub normalization: Normalization,
    pub x: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub zero_locations: Vec<f64>,
}

pub fn wavefunction_document(line: &SpectralLine, s: &SampledWavefunction) -> Result<WavefunctionDoc> {
    Ok(WavefunctionDoc {
        set_label: line.set_label,
        n: line.n(),
        energy: (&line.energy).into(),
        wavefunction_form: line.recipe.describe(),
        normalization: s.normalization,
        x: s.xs.clone(),
        re: s.values.iter().map(|v| v.re).collect(),
        im: s.values.iter().map(|v| v.im).collect(),
        zero_locations: s.zero_locations.clone(),
    })
}

/// One row per verified level.
pub fn verify_csv(r: &VerifyReport) -> Result<String> {
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut w = csv_writer();
    w.write_record([
        "set_label", "n", "bc", "analytic_re", "analytic_im", "oracle_re", "oracle_im", "delta", "error_estimate",
        "tolerance", "overlap", "modulus_difference", "nodes_analytic", "nodes_oracle", "status",
    ])
    .map_err(csv_err)?;
    for row in &r.rows {
        w.write_record([
            row.set_label.map(|s| s.to_string()).unwrap_or_default(),
            row.n.to_string(),
            serde_json::to_value(row.bc)?.as_str().unwrap_or_default().to_string(),
            num(row.analytic[0]),
            num(row.analytic[1]),
            opt(row.oracle.map(|o| o[0])),
            opt(row.oracle.map(|o| o[1])),
            num(row.delta),
            num(row.error_estimate),
            num(row.tolerance),
            opt(row.overlap),
            opt(row.modulus_difference),
            row.nodes_analytic.map(|n| n.to_string()).unwrap_or_default(),
            row.nodes_oracle.map(|n| n.to_string()).unwrap_or_default(),
            if row.pass { "PASS" } else { "FAIL" }.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

/// Human-readable verification table.
pub fn verify_text(r: &VerifyReport) -> String {
    let mut out = format!("{} ({} rows, tolerance {:.1e})\n", r.model, r.rows.len(), r.tolerance);
    for row in &r.rows {
        let set = row.set_label.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        let oracle = row.oracle.map(|o| complex_text(o[0], o[1], 10)).unwrap_or_else(|| "none".into());
        let shape = match (row.overlap, row.modulus_difference) {
            (Some(o), _) => format!("1-overlap {:.1e}", (1.0 - o).max(0.0)),
            (_, Some(d)) => format!("|psi| diff {d:.1e}"),
            _ => "no eigenfunction".into(),
        };
        let nodes = match (row.nodes_analytic, row.nodes_oracle) {
            (Some(a), Some(o)) => format!("nodes {a}/{o}"),
            _ => "nodes -".into(),
        };
        out += &format!(
            "{} set {set} n {} E {} oracle {oracle} |dE| {:.2e} {shape} {nodes}{}\n",
            if row.pass { "PASS" } else { "FAIL" },
            row.n,
            complex_text(row.analytic[0], row.analytic[1], 10),
            row.delta,
            row.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default(),
        );
    }
    if let Some(c) = r.conjugation_closed {
        out += &format!("{} conjugation closure\n", if c { "PASS" } else { "FAIL" });
    }
    if let Some(m) = r.nodes_monotone {
        out += &format!("{} node counts nondecreasing\n", if m { "PASS" } else { "FAIL" });
    }
    out
}

/// Human-readable spectrum table.
pub fn spectrum_text(doc: &SpectrumDoc) -> String {
    let mut out = format!("{} {}\n", doc.model, doc.params);
    for l in &doc.lines {
        let set = l.set_label.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        let exact = l.energy.exact.as_ref().map(|e| format!(" = {e}")).unwrap_or_default();
        out += &format!(
            "set {set} n {} E {}{exact} deg {} [{}] psi = {}\n",
            l.n,
            complex_text(l.energy.re, l.energy.im, 12),
            l.degeneracy, l.formula, l.wavefunction_form
        );
    }
    for w in &doc.warnings {
        out += &format!("warning: {w}\n");
    }
    out
}

/// Catalog listing.
pub fn catalog_text(infos: &[ModelInfo]) -> String {
    infos
        .iter()
        .map(|i| {
            let params: Vec<&str> = i.parameters.iter().map(|p| p.name.as_str()).collect();
            format!("{:<16}{:<8}{}  ({})\n", i.id.as_str(), class_label(i), i.name, params.join(", "))
        })
        .collect()
}

/// Parameter documentation for one model.
pub fn model_text(info: &ModelInfo) -> String {
    let mut out = format!("{}: {}\n  {}\n  variable y = {}\n", info.id, info.name, info.potential, info.variable);
    for p in &info.parameters {
        let default = p.default.as_ref().map(|d| format!(", default {d}")).unwrap_or_default();
        out += &format!("  --{:<6} {} ({}{default})\n", p.name, p.description, p.range);
    }
    out
}

/// ES, QES, band or PT.
pub fn class_label(info: &ModelInfo) -> &'static str {
    use crate::catalog::SpectrumKind::*;
    match (info.id, info.spectrum) {
        (ModelId::AssocLameQes, _) => "QES",
        (_, BandEdges) => "band",
        (_, NonHermitian) => "PT",
        (_, Bound) => "ES",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_has_no_negative_zero() {
        assert_eq!(complex_text(-1e-17, -1e-20, 3), "0.000+0.000i");
        assert_eq!(complex_text(-1.5, -0.25, 2), "-1.50-0.25i");
    }

    #[test]
    fn floats_get_seventeen_digits_and_integers_stay() {
        let v = canonical(serde_json::json!({"b": 0.1, "a": 3, "c": [1.5, f64::NAN]}));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"a":3,"b":1.0000000000000001e-1,"c":[1.5000000000000000e+0,null]}"#);
    }
}
