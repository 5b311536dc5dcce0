//! Sample Lame band-edge eigenfunctions and locate their zeros.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::spectrum::{solve_spectrum, SolveOptions};
use qhj::wavefunction::Normalization;

fn main() -> qhj::Result<()> {
    let model = model_from_pairs(ModelId::Lame, &[("j", 2.0), ("m", 0.5)])?;
    let spectrum = solve_spectrum(&model, SolveOptions::default())?;
    for (k, line) in spectrum.lines.iter().enumerate() {
        let s = line.recipe.sample(400, Normalization::SupNormOne)?;
        let zeros: Vec<String> = s.zero_locations.iter().map(|z| format!("{z:.4}")).collect();
        println!(
            "state {k}: {}  zeros {:?}  at [{}]  ode residual {:.1e}",
            line.recipe.describe(),
            line.recipe.zero_count(),
            zeros.join(", "),
            line.recipe.ode_residual(&model, 64)?
        );
    }
    Ok(())
}
