pub mod constants;
pub mod error;
pub mod expring;
pub mod field;
pub mod gauss;
pub mod lattice;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod ritt;
pub mod unitcheck;
pub mod zeros;

pub use constants::{Const, Context};
pub use error::{Error, Result};
pub use expring::{ExpPoly, Support};
pub use gauss::GaussRat;
