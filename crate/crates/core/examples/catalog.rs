//! Print every catalog model with its potential and parameters.

use qhj::catalog::list_models;

fn main() {
    for info in list_models() {
        println!("{} ({:?}): {}", info.id, info.spectrum, info.potential);
        for p in &info.parameters {
            println!("    {:<6} {}", p.name, p.range);
        }
    }
}
