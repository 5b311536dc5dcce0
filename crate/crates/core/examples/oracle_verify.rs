//! Check analytic levels against grid diagonalization of the Schrodinger operator.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::oracle::verify::{verify_model, VerifyOptions};
use qhj::report::verify_text;

fn main() -> qhj::Result<()> {
    let cases: [(ModelId, &[(&str, f64)]); 3] = [
        (ModelId::Hydrogen, &[("e2", 2.0), ("l", 1.0)]),
        (ModelId::Lame, &[("j", 2.0), ("m", 0.5)]),
        (ModelId::KhareMandal, &[("zeta", 0.25), ("M", 3.0)]),
    ];
    for (id, params) in cases {
        let model = model_from_pairs(id, params)?;
        let report = verify_model(&model, VerifyOptions::default())?;
        print!("{}", verify_text(&report));
    }
    Ok(())
}
