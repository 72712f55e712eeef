//! Convergent Hahn series on the logarithmic cover.

pub mod bessel;
pub mod coeff;
pub mod error;
pub mod eval;
pub mod exponent;
pub mod fredholm;
pub mod json;
pub mod meromorphic;
pub mod series;

pub use coeff::{Coefficient, Scalar, SquareMatrix};
pub use error::{Error, Result};
pub use eval::{LogPoint, SectorDisc, TailModel};
pub use exponent::{Exponent, ExponentGroup, GeneratorEnclosure, LineGroup};
pub use meromorphic::Meromorphic;
pub use series::Series;
