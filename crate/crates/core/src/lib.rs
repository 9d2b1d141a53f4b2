//! Fock-space structure on spaces of density operators and observables
//! ("third quantization") for a few fermionic or truncated bosonic modes.
//!
//! The crate is organized bottom-up:
//!
//! - [`fock`]: mode operators, the vacuum, vectorization and the trace pairing.
//! - [`supermaps`]: left/right multiplication maps, the canonical adjoint
//!   maps and the parity superoperator, plus an algebra checker.
//! - [`bases`]: the bi-orthonormal pair of Fock bases on operator space.
//! - [`lindblad`]: quadratic Lindblad generators, spectrum and steady state.
//! - [`quadratic`]: the generator rewritten as a normal-ordered quadratic
//!   form in the adjoint maps.
//!
//! Everything is dense and meant for desk-scale systems (`D^2` up to a few
//! thousand).

#![allow(clippy::needless_range_loop)]

pub mod bases;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod lindblad;
pub mod quadratic;
pub mod supermaps;

pub use error::{Error, Result};
pub use fock::{HilbertOp, ModeSystem, OperatorBra, OperatorKet, Statistics};
pub use num_complex::Complex64 as C64;
pub use supermaps::{MapFamily, MapIndex, SuperOp};

/// Caps the worker threads used by dense factorizations and by the
/// parallel loops in this crate. `None` or `Some(0)` keeps the defaults.
///
/// The rayon global pool can only be configured once per process; later
/// calls only affect the factorization backend.
pub fn configure_threads(threads: Option<usize>) {
    let Some(n) = threads.filter(|&n| n > 0) else {
        return;
    };
    let par = if n == 1 {
        faer::Par::Seq
    } else {
        faer::Par::rayon(n)
    };
    faer::set_global_parallelism(par);
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
}
