//! Exact linear algebra over GF(p).

pub mod exact;
mod mat;
mod subspace;
pub mod system;

pub use exact::{
    cokernel, image, intersect, is_cartesian, is_cocartesian, is_exact_at, is_ses, kernel, pullback, pushout, Pullback,
    Pushout, SesTriple, Square,
};
pub use mat::{mat_compose, Mat};
pub use subspace::Subspace;
