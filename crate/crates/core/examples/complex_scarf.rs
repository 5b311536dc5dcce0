//! Complex Scarf II levels on both sides of the PT-breaking threshold.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::spectrum::{solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    for (a, b) in [(1.0, 0.5), (1.0, 2.0), (2.0, 2.0)] {
        let model = model_from_pairs(ModelId::ComplexScarf, &[("A", a), ("B", b)])?;
        let spectrum = solve_spectrum(&model, SolveOptions::default())?;
        println!("A = {a}, B = {b}");
        for line in &spectrum.lines {
            println!("  set {:?} n {}  E = {:.10}  [{}]", line.set_label, line.n(), line.energy.value, line.formula);
        }
    }
    Ok(())
}
