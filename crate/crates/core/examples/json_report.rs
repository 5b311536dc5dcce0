//! Canonical JSON and CSV documents for a solved spectrum.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::report::{parse_spectrum_document, spectrum_csv, spectrum_document, to_json};
use qhj::spectrum::{solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    let model = model_from_pairs(ModelId::KhareMandal, &[("zeta", 0.25), ("M", 2.0)])?;
    let spectrum = solve_spectrum(&model, SolveOptions::default())?;
    let doc = spectrum_document(&model, &spectrum)?;
    let json = to_json(&doc)?;
    assert_eq!(parse_spectrum_document(&json)?, doc);
    println!("{json}");
    print!("{}", spectrum_csv(&doc)?);
    Ok(())
}
