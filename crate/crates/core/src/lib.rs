//! Equitable 2-partitions of the binary n-cube attaining the
//! correlation-immunity bound: spectral verification, admissibility screens,
//! exact-cover search, canonical forms and the two classifications on `Q_12`.

pub mod admissibility;
pub mod appendix;
pub mod canonical;
pub mod classify01248;
pub mod classify3975;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod exact_cover;
pub mod gf2;
pub mod io;
pub mod oa;
pub mod perm;
pub mod spectral;

pub use cube::{CubeAutomorphism, Face, Vertex, VertexSet};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Solution, Gf2Vector};
pub use spectral::{IntegerFunction, IntegerSpectrum, QuotientMatrix};
