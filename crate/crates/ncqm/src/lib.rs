//! Symmetry groups of two-dimensional noncommutative quantum mechanics.
//!
//! The crate covers the doubly extended (2+1)-Galilei group and the doubly
//! and triply centrally extended translation groups of R^4: composition
//! laws and local exponents, faithful unipotent matrix representations,
//! coadjoint orbits, unitary representations on a periodic FFT grid,
//! coherent-state quantization and a Hilbert-Schmidt realization bridged
//! to the grid picture.

pub mod coadjoint;
pub mod coherent;
mod error;
pub mod generators;
pub mod grid;
pub mod group;
pub mod matrix;
pub mod wigner;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
