//! Exact computations with strict partitions, Schur Q-functions,
//! Hecke–Clifford superalgebras and the bivariate queer algebra A(n,m).

pub mod amodule;
pub mod heckeclifford;
pub mod linalg;
pub mod partitions;
pub mod queer;
pub mod scalars;
pub mod superalg;
pub mod symfunc;
