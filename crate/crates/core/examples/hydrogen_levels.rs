//! Hydrogen levels as exact rationals, shifted so the ground state sits at zero.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::spectrum::{solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    for l in [0.0, 1.0] {
        let model = model_from_pairs(ModelId::Hydrogen, &[("e2", 2.0), ("l", l)])?;
        let spectrum = solve_spectrum(&model, SolveOptions { levels: 4 })?;
        println!("l = {l}");
        for line in &spectrum.lines {
            let exact = line.energy.exact.map(|q| q.to_string()).unwrap_or_default();
            println!("  n = {}  E = {:<8} psi = {}", line.n(), exact, line.recipe.describe());
        }
    }
    Ok(())
}
