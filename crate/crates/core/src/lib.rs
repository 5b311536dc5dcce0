//! Quantum Hamilton-Jacobi solver for a catalog of exactly and
//! quasi-exactly solvable potentials.
//!
//! The pipeline is: build a [`catalog::Model`] in normal form, enumerate the
//! residue assignments of the quantum momentum function
//! ([`quantization::quantize`]), solve the polynomial pencil for each
//! admissible assignment ([`pencil`]), and assemble the eigenfunctions
//! ([`wavefunction`]). [`oracle`] recomputes every level by grid
//! diagonalization of the Schrodinger operator.
//!
//! ```
//! use qhj::catalog::{model_from_pairs, ModelId};
//! use qhj::spectrum::{solve_spectrum, SolveOptions};
//!
//! let model = model_from_pairs(ModelId::Lame, &[("j", 2.0), ("m", 0.5)]).unwrap();
//! let spectrum = solve_spectrum(&model, SolveOptions::default()).unwrap();
//! assert_eq!(spectrum.lines.len(), 5);
//! ```

pub mod catalog;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod pencil;
pub mod poly;
pub mod quantization;
pub mod report;
pub mod residues;
pub mod special;
pub mod spectrum;
pub mod wavefunction;

pub use error::{QhjError, Result};
