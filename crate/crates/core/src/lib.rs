//! Exact lattice computations for prime-order symplectic automorphisms of
//! K3 surfaces.

pub mod arith;
pub mod cyclo;
pub mod ellns;
pub mod lattice;
pub mod shortvec;
pub mod wmodel;
