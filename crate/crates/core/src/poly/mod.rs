//! Polynomial arithmetic and factorization layers.

pub mod modp;
pub mod mpoly;
pub mod multifactor;
pub mod upoly;
pub mod zfactor;

pub use mpoly::MPoly;
pub use upoly::UPoly;
