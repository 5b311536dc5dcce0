//! PT-symmetric Khare-Mandal potential: real levels for small coupling and
//! complex-conjugate pairs.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::spectrum::{solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    for (zeta, m) in [(0.1, 3.0), (0.25, 2.0), (0.25, 3.0)] {
        let model = model_from_pairs(ModelId::KhareMandal, &[("zeta", zeta), ("M", m)])?;
        let spectrum = solve_spectrum(&model, SolveOptions::default())?;
        println!("zeta = {zeta}, M = {m}");
        for line in &spectrum.lines {
            println!("  set {:?}  E = {:.10}", line.set_label, line.energy.value);
        }
    }
    Ok(())
}
