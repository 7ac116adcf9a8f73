//! Factorisations of complete graphs into circulant graphs, 2-factorisations
//! of those circulants, and end-to-end Oberwolfach solutions that come with
//! independently checkable certificates.
//!
//! Module layout:
//!
//! - [`numtheory`]: residues, power classes, cosets and prime classification
//! - [`graphs`]: circulant and dihedral Cayley graphs, cycle types
//! - [`circulant_factors`]: factorisations of `K_p`, `K_2p - I` and `sK_p`
//! - [`two_factors`]: J-gadget constructions and the backtracking search
//! - [`solver`]: routing, certificates and the verifier
//! - [`certfile`]: the on-disk certificate format

pub mod certfile;
pub mod circulant_factors;
pub mod graphs;
pub mod numtheory;
pub mod solver;
pub mod two_factors;

pub use graphs::{ConnectionSet, CycleType, VertexGraph};
pub use solver::{Certificate, ProblemSpec, Status};
