//! Quasi-exactly solvable associated Lame potentials: the parameter family for
//! given `a` and `n`, then the solved edges for one member.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::exact::Scalar;
use qhj::spectrum::{qes_family, solve_spectrum, SolveOptions};

fn main() -> qhj::Result<()> {
    let family = qes_family(Scalar::ratio(7, 2), 4);
    for m in &family.members {
        println!("set {}: {:<20} b = {}", m.set_label, m.relation, m.b);
    }
    let model = model_from_pairs(ModelId::AssocLameQes, &[("a", 3.5), ("b", 0.5), ("m", 0.25)])?;
    let spectrum = solve_spectrum(&model, SolveOptions::default())?;
    for line in &spectrum.lines {
        println!(
            "set {:?} n {} E {:.9} degeneracy {} psi = {}",
            line.set_label,
            line.n(),
            line.energy.re(),
            line.degeneracy,
            line.recipe.describe()
        );
    }
    Ok(())
}
