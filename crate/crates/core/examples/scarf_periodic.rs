//! Periodic Scarf band edges in both coupling phases.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::oracle::verify::analytic_bc;
use qhj::spectrum::{solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    for s in [0.3, 1.5] {
        let model = model_from_pairs(ModelId::ScarfPeriodic, &[("s", s)])?;
        let spectrum = solve_spectrum(&model, SolveOptions { levels: 3 })?;
        println!("s = {s} ({:?})", spectrum.kind);
        for line in &spectrum.lines {
            println!("  {:>10.6}  {:?}  {}", line.energy.re(), analytic_bc(&model, line)?, line.formula);
        }
    }
    Ok(())
}
