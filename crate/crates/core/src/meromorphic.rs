//! Hahn meromorphic functions in the normal form `e_m * unit`.

use crate::coeff::{Coefficient, Scalar};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentGroup};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq)]
pub struct Meromorphic<C> {
    pivot: Exponent,
    unit: Series<C>,
}

impl<C: Coefficient> Meromorphic<C> {
    /// Normalizes `f` so that the unit has valuation zero.
    pub fn from_series(f: &Series<C>) -> Result<Self> {
        let m = *f.valuation().ok_or(Error::DivisionByZeroSeries)?;
        Ok(Self { pivot: m, unit: f.shift(&m)? })
    }

    pub fn from_parts(pivot: Exponent, unit: Series<C>) -> Result<Self> {
        match unit.valuation() {
            Some(v) if v.is_zero() => Ok(Self { pivot: unit.group().check(&pivot)?, unit }),
            _ => Err(Error::NotInvertibleConstant),
        }
    }

    pub fn pivot(&self) -> &Exponent {
        &self.pivot
    }

    pub fn unit(&self) -> &Series<C> {
        &self.unit
    }

    pub fn group(&self) -> &ExponentGroup {
        self.unit.group()
    }

    /// The same function as a series with possibly negative exponents.
    pub fn to_series(&self) -> Result<Series<C>> {
        self.unit.shift(&-self.pivot)
    }

    /// True when no negative exponent survives.
    pub fn is_holomorphic(&self) -> Result<bool> {
        Ok(self.group().sign(&self.pivot)? != std::cmp::Ordering::Less)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self { pivot: self.pivot + other.pivot, unit: self.unit.mul(&other.unit)? })
    }

    pub fn invert(&self) -> Result<Self> {
        Ok(Self { pivot: -self.pivot, unit: self.unit.neumann_invert()? })
    }
}

/// `f / g` for scalar series: pivot `v(f) - v(g)`, unit `shift(f) * shift(g)^{-1}`.
pub fn divide_scalar<C: Scalar>(f: &Series<C>, g: &Series<C>) -> Result<Meromorphic<C>> {
    let vg = *g.valuation().ok_or(Error::DivisionByZeroSeries)?;
    let g_unit = g.shift(&vg)?;
    let Some(&vf) = f.valuation() else {
        return Err(Error::Domain("numerator vanishes to its validity order".into()));
    };
    let f_unit = f.shift(&vf)?;
    let unit = f_unit.mul(&g_unit.neumann_invert()?)?;
    Ok(Meromorphic { pivot: vf - vg, unit })
}
