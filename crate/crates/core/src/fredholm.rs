//! Inversion of `Id - F(z)` for finite matrix families by determinant and adjugate.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_complex::Complex64;

use crate::coeff::{Coefficient, Scalar, SquareMatrix};
use crate::error::{Error, Result};
use crate::eval::{series_value, LogPoint};
use crate::exponent::{Exponent, ExponentGroup};
use crate::meromorphic::divide_scalar;
use crate::series::Series;

pub const DEFAULT_DIMENSION_CAP: usize = 6;

/// `n x n` grid of series with one group and one validity order.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries<C> {
    dim: usize,
    entries: Vec<Vec<Series<C>>>,
}

impl<C: Scalar> MatrixSeries<C> {
    /// Brings every entry down to the smallest validity order present.
    pub fn new(entries: Vec<Vec<Series<C>>>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 || entries.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("entries must form a non-empty square".into()));
        }
        let group = entries[0][0].group().clone();
        if entries.iter().flatten().any(|s| *s.group() != group) {
            return Err(Error::GroupMismatch);
        }
        let mut common: Option<Exponent> = None;
        for s in entries.iter().flatten() {
            if let Some(v) = s.valid_below() {
                common = Some(match common {
                    None => *v,
                    Some(c) => *group.min(&c, v)?,
                });
            }
        }
        let entries = match common {
            None => entries,
            Some(v) => entries
                .into_iter()
                .map(|r| r.into_iter().map(|s| s.truncate(v)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Self { dim, entries })
    }

    pub fn identity(group: &ExponentGroup, dim: usize, valid_below: Option<Exponent>) -> Result<Self> {
        let entries = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let c = if i == j { C::one() } else { C::zero() };
                        Series::constant(group.clone(), c, valid_below)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &ExponentGroup {
        self.entries[0][0].group()
    }

    pub fn valid_below(&self) -> Option<&Exponent> {
        self.entries[0][0].valid_below()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Series<C> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Series<C>>] {
        &self.entries
    }

    fn zip(&self, other: &Self, f: impl Fn(&Series<C>, &Series<C>) -> Result<Series<C>>) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, Series::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, Series::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let n = self.dim;
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = self.entries[i][0].mul(&other.entries[0][j])?;
                for k in 1..n {
                    acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j])?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Self::new(entries)
    }

    pub fn scale(&self, s: &Series<C>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| s.mul(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// One series with matrix coefficients.
    pub fn to_coefficient_series(&self) -> Result<Series<SquareMatrix<C>>> {
        let n = self.dim;
        let mut terms: Vec<(Exponent, SquareMatrix<C>)> = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                for (e, c) in s.terms() {
                    let mut m = SquareMatrix::zeros(n);
                    m.set(i, j, c.clone());
                    terms.push((*e, m));
                }
            }
        }
        Series::new(self.group().clone(), terms, self.valid_below().copied())
    }

    pub fn from_coefficient_series(s: &Series<SquareMatrix<C>>, dim: usize) -> Result<Self> {
        let entries = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let terms = s
                            .terms()
                            .iter()
                            .filter(|(_, m)| m.dim() == dim)
                            .map(|(e, m)| (*e, m.get(i, j).clone()))
                            .collect();
                        Series::new(s.group().clone(), terms, s.valid_below().copied())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Pointwise value of every entry.
    pub fn eval(&self, p: &LogPoint) -> Result<SquareMatrix<Complex64>> {
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|s| series_value(s, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SquareMatrix::from_rows(rows)
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.dim > cap {
            Err(Error::DimensionCapExceeded { dim: self.dim, cap })
        } else {
            Ok(())
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_row)
            .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_col).map(|(_, s)| s.clone()).collect())
            .collect();
        Self::new(entries)
    }

    /// Laplace expansion along rows, memoized over the set of used columns.
    pub fn det(&self) -> Result<Series<C>> {
        self.det_with_cap(DEFAULT_DIMENSION_CAP)
    }

    pub fn det_with_cap(&self, cap: usize) -> Result<Series<C>> {
        self.check_cap(cap)?;
        let mut memo: HashMap<u32, Series<C>> = HashMap::new();
        self.det_rec(0, (1u32 << self.dim) - 1, &mut memo)
    }

    fn det_rec(&self, row: usize, cols: u32, memo: &mut HashMap<u32, Series<C>>) -> Result<Series<C>> {
        if cols == 0 {
            return Series::constant(self.group().clone(), C::one(), self.valid_below().copied());
        }
        if let Some(d) = memo.get(&cols) {
            return Ok(d.clone());
        }
        let mut acc = Series::new(self.group().clone(), vec![], self.valid_below().copied())?;
        let mut sign_negative = false;
        for j in 0..self.dim {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &self.entries[row][j];
            if !entry.is_empty() {
                let sub = self.det_rec(row + 1, cols & !(1 << j), memo)?;
                let term = entry.mul(&sub)?;
                acc = if sign_negative { acc.sub(&term)? } else { acc.add(&term)? };
            }
            sign_negative = !sign_negative;
        }
        memo.insert(cols, acc.clone());
        Ok(acc)
    }

    /// Transposed matrix of signed cofactors.
    pub fn adjugate(&self) -> Result<Self> {
        self.adjugate_with_cap(DEFAULT_DIMENSION_CAP)
    }

    pub fn adjugate_with_cap(&self, cap: usize) -> Result<Self> {
        self.check_cap(cap)?;
        let n = self.dim;
        let vb = self.valid_below().copied();
        if n == 1 {
            return Self::identity(self.group(), 1, vb);
        }
        let mut entries = vec![Vec::with_capacity(n); n];
        for (j, row) in entries.iter_mut().enumerate() {
            for i in 0..n {
                let cof = self.minor(i, j)?.det_with_cap(cap)?;
                row.push(if (i + j) % 2 == 1 { cof.neg() } else { cof });
            }
        }
        // entries[j][i] holds the (i, j) cofactor
        Self::new(entries)
    }
}

/// `numer / denom` with a scalar denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct MeromorphicMatrix<C> {
    pub denom: Series<C>,
    pub numer: MatrixSeries<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Resolution<C> {
    Invertible(MeromorphicMatrix<C>),
    /// `det(Id - F)` vanishes to the stated validity order.
    NowhereInvertible { valid_below: Option<Exponent> },
}

impl<C: Scalar> MeromorphicMatrix<C> {
    /// Pointwise `numer(p) / denom(p)`.
    pub fn eval(&self, p: &LogPoint) -> Result<SquareMatrix<Complex64>> {
        let d = series_value(&self.denom, p)?;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZeroSeries);
        }
        let inv = d.inv();
        Ok(self.numer.eval(p)?.map(|x| x * inv))
    }

    /// Hahn series of the quotient, negative exponents included.
    pub fn expand(&self) -> Result<MatrixSeries<C>> {
        let one = Series::constant(self.denom.group().clone(), C::one(), None)?;
        let reciprocal = divide_scalar(&one, &self.denom)?.to_series()?;
        self.numer.scale(&reciprocal)
    }

    /// True when the expansion has no negative exponent.
    pub fn is_holomorphic(&self) -> Result<bool> {
        let e = self.expand()?;
        for s in e.entries().iter().flatten() {
            if let Some(v) = s.valuation() {
                if e.group().sign(v)? == Ordering::Less {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `(Id - F)^{-1}` as adjugate over determinant, or the nowhere-invertible verdict.
pub fn resolve_identity_minus<C: Scalar>(f: &MatrixSeries<C>) -> Result<Resolution<C>> {
    resolve_identity_minus_with_cap(f, DEFAULT_DIMENSION_CAP)
}

pub fn resolve_identity_minus_with_cap<C: Scalar>(f: &MatrixSeries<C>, cap: usize) -> Result<Resolution<C>> {
    if let Some(v) = f.valid_below() {
        if !f.group().is_positive(v)? {
            return Err(Error::NonPositiveValidity);
        }
    }
    f.check_cap(cap)?;
    let a = MatrixSeries::identity(f.group(), f.dim(), f.valid_below().copied())?.sub(f)?;
    let d = a.det_with_cap(cap)?;
    if d.is_empty() {
        return Ok(Resolution::NowhereInvertible { valid_below: d.valid_below().copied() });
    }
    let numer = a.adjugate_with_cap(cap)?;
    Ok(Resolution::Invertible(MeromorphicMatrix { denom: d, numer }))
}

fn max_row_sum(m: &SquareMatrix<Complex64>) -> f64 {
    m.rows().iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `max_p ||(Id - F(p)) G(p) - Id||_inf`.
pub fn verify_inverse<C: Scalar>(f: &MatrixSeries<C>, g: &MeromorphicMatrix<C>, points: &[LogPoint]) -> Result<f64> {
    let n = f.dim();
    let id = SquareMatrix::<Complex64>::identity(n);
    let mut worst = 0.0f64;
    for p in points {
        let a = id.sub(&f.eval(p)?);
        let r = a.mul(&g.eval(p)?).sub(&id);
        worst = worst.max(max_row_sum(&r));
    }
    Ok(worst)
}

/// `max_p ||G(p) - (Id - F(p))^{-1}||_inf` with a numerically inverted oracle.
pub fn compare_with_direct_inverse<C: Scalar>(
    f: &MatrixSeries<C>,
    g: &MeromorphicMatrix<C>,
    points: &[LogPoint],
) -> Result<f64> {
    let id = SquareMatrix::<Complex64>::identity(f.dim());
    let mut worst = 0.0f64;
    for p in points {
        let direct = id.sub(&f.eval(p)?).inverse().ok_or(Error::DivisionByZeroSeries)?;
        worst = worst.max(max_row_sum(&g.eval(p)?.sub(&direct)));
    }
    Ok(worst)
}
