//! Band edges of the Lame potential for several elliptic parameters.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::spectrum::{solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    for j in 1..=3 {
        for m in [0.1, 0.5, 0.9] {
            let model = model_from_pairs(ModelId::Lame, &[("j", j as f64), ("m", m)])?;
            let spectrum = solve_spectrum(&model, SolveOptions::default())?;
            let edges: Vec<String> = spectrum
                .lines
                .iter()
                .map(|l| format!("{:.6}[{}]", l.energy.re(), l.recipe.describe()))
                .collect();
            println!("j={j} m={m}: {}", edges.join("  "));
        }
    }
    Ok(())
}
