//! Truncated Hahn series.
//!
//! A [`Series`] stores finitely many terms `a_gamma e_gamma` with strictly
//! increasing exponents and a validity order: the stored value is exact modulo
//! terms `e_gamma` with `gamma >= valid_below`. `valid_below = None` means the
//! series is exact (a finite sum).

use std::cmp::Ordering;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentGroup};

pub const DEFAULT_ITERATION_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct Series<C> {
    group: ExponentGroup,
    terms: Vec<(Exponent, C)>,
    valid_below: Option<Exponent>,
}

/// Sorts by the group order, surfacing the first undecidable comparison.
fn sort_terms<C>(group: &ExponentGroup, terms: &mut [(Exponent, C)]) -> Result<()> {
    let mut failure = None;
    terms.sort_by(|a, b| match group.compare(&a.0, &b.0) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    failure.map_or(Ok(()), Err)
}

fn min_validity(
    group: &ExponentGroup,
    a: Option<Exponent>,
    b: Option<Exponent>,
) -> Result<Option<Exponent>> {
    Ok(match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(*group.min(&a, &b)?),
    })
}

impl<C: Coefficient> Series<C> {
    /// Builds a canonical series: sorted, duplicate keys summed, zeros and
    /// terms at or beyond the validity order dropped.
    pub fn new(group: ExponentGroup, terms: Vec<(Exponent, C)>, valid_below: Option<Exponent>) -> Result<Self> {
        let valid_below = valid_below.map(|v| group.check(&v)).transpose()?;
        let mut terms = terms
            .into_iter()
            .map(|(e, c)| Ok((group.check(&e)?, c)))
            .collect::<Result<Vec<_>>>()?;
        sort_terms(&group, &mut terms)?;
        let mut out: Vec<(Exponent, C)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((last, acc)) if *last == e => *acc = acc.add(&c),
                _ => out.push((e, c)),
            }
        }
        let mut s = Self { group, terms: out, valid_below };
        s.prune()?;
        Ok(s)
    }

    /// Exact zero.
    pub fn zero(group: ExponentGroup) -> Self {
        Self { group, terms: Vec::new(), valid_below: None }
    }

    /// Constant series `c`.
    pub fn constant(group: ExponentGroup, c: C, valid_below: Option<Exponent>) -> Result<Self> {
        Self::new(group, vec![(Exponent::zero(), c)], valid_below)
    }

    /// Single term `c e_gamma`.
    pub fn monomial(group: ExponentGroup, gamma: Exponent, c: C, valid_below: Option<Exponent>) -> Result<Self> {
        Self::new(group, vec![(gamma, c)], valid_below)
    }

    fn prune(&mut self) -> Result<()> {
        self.terms.retain(|(_, c)| !c.is_zero());
        if let Some(v) = self.valid_below {
            let mut keep = self.terms.len();
            for (i, (e, _)) in self.terms.iter().enumerate() {
                if self.group.compare(e, &v)? != Ordering::Less {
                    keep = i;
                    break;
                }
            }
            self.terms.truncate(keep);
        }
        Ok(())
    }

    pub fn group(&self) -> &ExponentGroup {
        &self.group
    }

    pub fn terms(&self) -> &[(Exponent, C)] {
        &self.terms
    }

    pub fn valid_below(&self) -> Option<&Exponent> {
        self.valid_below.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least stored exponent; `None` means zero to the validity order.
    pub fn valuation(&self) -> Option<&Exponent> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Valuation, or the validity order when nothing is stored.
    fn effective_valuation(&self) -> Option<Exponent> {
        self.valuation().copied().or(self.valid_below)
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&C> {
        self.terms.iter().find(|(k, _)| k == e).map(|(_, c)| c)
    }

    pub fn leading(&self) -> Option<&(Exponent, C)> {
        self.terms.first()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Lowers the validity order to `v` (never raises it).
    pub fn truncate(&self, v: Exponent) -> Result<Self> {
        let valid_below = min_validity(&self.group, self.valid_below, Some(self.group.check(&v)?))?;
        let mut s = Self { group: self.group.clone(), terms: self.terms.clone(), valid_below };
        s.prune()?;
        Ok(s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let g = &self.group;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match g.compare(&a.0, &b.0)? {
                Ordering::Less => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    terms.push((a.0, a.1.add(&b.1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        let valid_below = min_validity(g, self.valid_below, other.valid_below)?;
        let mut s = Self { group: g.clone(), terms, valid_below };
        s.prune()?;
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(Coefficient::neg)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `c * f`, coefficient on the left.
    pub fn scale_left(&self, c: &C) -> Result<Self> {
        let mut s = self.map_coeffs(|a| c.mul(a));
        s.prune()?;
        Ok(s)
    }

    /// `f * c`, coefficient on the right.
    pub fn scale_right(&self, c: &C) -> Result<Self> {
        let mut s = self.map_coeffs(|a| a.mul(c));
        s.prune()?;
        Ok(s)
    }

    /// Cauchy product `sum_{a+b=g} f_a g_b`; factor order is kept.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let g = &self.group;
        let exact_zero = |s: &Self| s.terms.is_empty() && s.valid_below.is_none();
        if exact_zero(self) || exact_zero(other) {
            return Ok(Self::zero(g.clone()));
        }
        let shifted = |vb: Option<Exponent>, v: Option<Exponent>| vb.zip(v).map(|(a, b)| a + b);
        let valid_below = min_validity(
            g,
            shifted(self.valid_below, other.effective_valuation()),
            shifted(other.valid_below, self.effective_valuation()),
        )?;
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if let Some(v) = &valid_below {
                    if g.compare(&e, v)? != Ordering::Less {
                        // later terms of `other` are larger still
                        break;
                    }
                }
                products.push((e, ca.mul(cb)));
            }
        }
        // stable sort keeps (i, j) order within equal keys, so float sums are reproducible
        sort_terms(g, &mut products)?;
        let mut terms: Vec<(Exponent, C)> = Vec::with_capacity(products.len());
        for (e, c) in products {
            match terms.last_mut() {
                Some((last, acc)) if *last == e => *acc = acc.add(&c),
                _ => terms.push((e, c)),
            }
        }
        let mut s = Self { group: g.clone(), terms, valid_below };
        s.prune()?;
        Ok(s)
    }

    /// `e_{-m} f`: every exponent and the validity order move down by `m`.
    pub fn shift(&self, m: &Exponent) -> Result<Self> {
        let m = self.group.check(m)?;
        Ok(Self {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(e, c)| (e - &m, c.clone())).collect(),
            valid_below: self.valid_below.map(|v| v - m),
        })
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Self { group: self.group.clone(), terms, valid_below: self.valid_below }
    }

    /// Converts coefficients into another ring.
    pub fn convert<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let terms = self.terms.iter().map(|(e, c)| (*e, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Series { group: self.group.clone(), terms, valid_below: self.valid_below }
    }

    /// Equality modulo the smaller of the two validity orders.
    pub fn eq_mod_validity(&self, other: &Self) -> Result<bool> {
        self.same_group(other)?;
        let v = min_validity(&self.group, self.valid_below, other.valid_below)?;
        match v {
            None => Ok(self.terms == other.terms),
            Some(v) => Ok(self.truncate(v)?.terms == other.truncate(v)?.terms),
        }
    }

    /// Rejects `(0, beta)` keys with `beta < 0` and negative keys: the
    /// finite-support form of the admissibility condition for holomorphic parts.
    pub fn check_holomorphic(&self) -> Result<()> {
        for (e, _) in &self.terms {
            if self.group.sign(e)? == Ordering::Less {
                return Err(Error::NotAdmissible(format!("negative exponent {e}")));
            }
            if e.alpha().is_zero() && e.log < 0 {
                return Err(Error::NotAdmissible(format!("log pole {e}")));
            }
        }
        Ok(())
    }

    /// Constant term and `f - f(0)`; fails if anything remains at or below 0.
    fn split_constant(&self) -> Result<(Option<C>, Self)> {
        let mut rest = self.clone();
        let mut a0 = None;
        if let Some((e, c)) = rest.terms.first() {
            if e.is_zero() {
                a0 = Some(c.clone());
                rest.terms.remove(0);
            }
        }
        if let Some(v) = rest.valuation() {
            if !self.group.is_positive(v)? {
                return Err(Error::NonPositiveValuation);
            }
        }
        Ok((a0, rest))
    }

    /// `sum_{k >= 0} h^k` up to the validity order of `h`, starting from `one`.
    fn geometric(h: &Self, one: &C, cap: usize) -> Result<Self> {
        let group = h.group.clone();
        let unit = Self::constant(group.clone(), one.clone(), h.valid_below)?;
        if h.terms.is_empty() {
            return Ok(unit);
        }
        let target = h.valid_below.ok_or(Error::UnboundedValidity)?;
        let mut sum = unit.clone();
        let mut power = unit;
        for _ in 0..cap {
            // powers of h are known past `target`, but the sum is not
            power = power.mul(h)?.truncate(target)?;
            if power.terms.is_empty() {
                return Ok(sum);
            }
            sum = sum.add(&power)?;
        }
        Err(Error::IterationCapExceeded { cap })
    }

    /// Neumann inverse `(sum h^k) a0^{-1}` with `h = 1 - a0^{-1} f`.
    pub fn neumann_invert(&self) -> Result<Self> {
        self.neumann_invert_with_cap(DEFAULT_ITERATION_CAP)
    }

    pub fn neumann_invert_with_cap(&self, cap: usize) -> Result<Self> {
        let (a0, _) = self.split_constant().map_err(|_| Error::NotInvertibleConstant)?;
        let a0 = a0.ok_or(Error::NotInvertibleConstant)?;
        let a0_inv = a0.inverse().ok_or(Error::NotInvertibleConstant)?;
        let one = a0.one_like();
        let normalized = self.scale_left(&a0_inv)?;
        let h = Self::constant(self.group.clone(), one.clone(), None)?.sub(&normalized)?;
        Self::geometric(&h, &one, cap)?.scale_right(&a0_inv)
    }

    /// `sum_k a_k (f - f(0))^k`, where `coeffs` are the Taylor coefficients of
    /// the outer function about `f(0)`.
    ///
    /// When `coeffs` runs out before the powers pass the validity order, the
    /// result is only valid below the valuation of the first missing power.
    pub fn compose_entire(coeffs: &[C], f: &Self) -> Result<Self> {
        Self::compose_entire_with_cap(coeffs, f, DEFAULT_ITERATION_CAP)
    }

    pub fn compose_entire_with_cap(coeffs: &[C], f: &Self, cap: usize) -> Result<Self> {
        let group = f.group.clone();
        let Some(first) = coeffs.first() else {
            return Ok(Self::zero(group));
        };
        let (_, g) = f.split_constant()?;
        let one = first.one_like();
        let mut power = Self::constant(group.clone(), one, g.valid_below)?;
        let mut sum = power.scale_left(first)?;
        for (k, a) in coeffs.iter().enumerate().skip(1) {
            if k > cap {
                return Err(Error::IterationCapExceeded { cap });
            }
            power = power.mul(&g)?;
            if let Some(v) = g.valid_below {
                power = power.truncate(v)?;
            }
            if power.terms.is_empty() {
                return Ok(sum);
            }
            sum = sum.add(&power.scale_left(a)?)?;
        }
        let next = power.mul(&g)?;
        match next.effective_valuation() {
            Some(v) if !next.terms.is_empty() || next.valid_below.is_some() => sum.truncate(v),
            _ => Ok(sum),
        }
    }
}
