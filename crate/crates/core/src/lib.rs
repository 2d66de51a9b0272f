//! Exact verification of induced-matching (subrank) bounds for type
//! hypergraphs: GF(2) linear algebra, branch-and-bound subrank, the certified
//! `(k, r)` scan, Coppersmith-Winograd entropy bounds and Fourier/Krawchouk
//! inequality suites.

pub mod certified;
pub mod combinatorics;
pub mod cw;
pub mod error;
pub mod exact_bounds;
pub mod gf2;
pub mod hypergraph;
pub mod report;
pub mod sampling;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
