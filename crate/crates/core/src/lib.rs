//! Exact computation with finite pseudoalgebras over cocommutative Hopf
//! algebras `H = U(h)`.
//!
//! Everything is computed over the rationals. `H` is modelled in the
//! divided-power PBW basis `e^(a) = e_1^(a_1) ... e_n^(a_n)`, pseudoproducts
//! are stored in the canonical form `(h ⊗ 1) ⊗_H p`, and every constructor
//! bounds the H-degrees it produces by a single cutoff. Exceeding the cutoff
//! is an error, never a silent truncation.

pub mod constructions;
pub mod dual;
pub mod error;
pub mod format;
pub mod hopf;
pub mod linalg;
pub mod ordinary;
pub mod pseudo;
pub mod scalar;
pub mod tkk;
pub mod varieties;

pub use error::{Error, Result};
pub use hopf::{HElement, HopfAlgebra, LieData, MultiIndex};
pub use ordinary::OrdinaryAlgebra;
pub use pseudo::{CanonicalTensor, PModuleElement, Permutation, PseudoAlgebra};
pub use scalar::{LinComb, Scalar};
