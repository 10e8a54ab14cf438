//! Magnetic-field metrology in a Tavis-Cummings cavity whose atoms form a
//! periodic XY spin chain.
//!
//! The crate builds the full cavity-chain Hamiltonian and its dispersive
//! effective reductions, solves the chain itself in its free-fermion form,
//! and from the two of them computes the quantum Fisher information for
//! estimating the transverse field — in closed form from the chain's J_z
//! moments, per asymptotic regime, and numerically from the fidelity decay
//! of evolved states. A dense exact-diagonalization oracle cross-checks the
//! free-fermion results, and spectral-decomposition dynamics compare the
//! full and effective models.
//!
//! Modules:
//! - [`hilbert`]: operators and states on the spin (x) cavity product basis
//! - [`freefermion`]: momentum grids, Bogoliubov angles, J_z moments, phases
//! - [`hamiltonians`]: the full/effective/rotating-frame builders + validity
//! - [`dynamics`]: spectral time evolution and full-vs-effective comparison
//! - [`metrology`]: QFI formulas, fidelity-based estimates, scaling fits
//! - [`edoracle`]: dense exact diagonalization used as ground truth

pub mod dynamics;
pub mod edoracle;
pub mod error;
pub mod freefermion;
pub mod hamiltonians;
pub mod hilbert;
pub mod linalg;
pub mod metrology;

pub use error::{Error, Result};
