//! Enumerate residue assignments for a model, showing admissible and rejected choices.

use qhj::catalog::{model_from_pairs, ModelId};
use qhj::quantization::quantize;

fn main() -> qhj::Result<()> {
    let model = model_from_pairs(ModelId::Lame, &[("j", 2.0), ("m", 0.5)])?;
    let q = quantize(&model, 4)?;
    println!("energy mode {:?}", q.mode);
    for a in &q.admissible {
        let residues: Vec<String> = a.residues.iter().map(|r| r.to_string()).collect();
        println!("set {:?}: residues [{}] lambda1 {} n {}", a.set_label, residues.join(", "), a.lambda1, a.n);
    }
    for r in &q.rejected {
        println!("rejected {:?}: {:?}", r.pole_branches, r.reason);
    }
    Ok(())
}
