//! Sum complexes on the cyclic group `Z_n`: construction, exact homology over
//! `Q`, `F_p` and cyclotomic extensions, the Fourier-submatrix Betti formula,
//! and collapsibility with replayable traces.

pub mod collapse;
pub mod complex;
pub mod error;
pub mod field;
pub mod fourier;
pub mod homology;
pub mod subsets;
pub mod zn;

pub use error::{Error, Result};
