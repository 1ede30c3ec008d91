//! Bockstein spectral sequences of differential graded Lie algebras over the
//! p-local integers, together with the Hopf-algebraic structure on their pages.

pub mod bss;
pub mod cce;
pub mod examples;
pub mod gamma;
pub mod graded;
pub mod lie;
pub mod matrix;
mod monomial;
pub mod scalar;
pub mod sign;
pub mod structure;
