use std::fmt;

use super::{PrincipalPart, SeriesError};
use crate::gf2m::{FieldDescriptor, FieldElement};

/// Truncated Laurent series `Σ c_n t^n + O(t^precision)` over GF(2^m).
///
/// Coefficients are stored densely from the valuation; the leading stored
/// coefficient is always nonzero. A series that vanishes up to its
/// precision has no stored coefficients and valuation equal to the
/// precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    field: FieldDescriptor,
    valuation: i64,
    coeffs: Vec<u32>,
    precision: i64,
}

impl LaurentSeries {
    pub fn zero(field: FieldDescriptor, precision: i64) -> Self {
        LaurentSeries { field, valuation: precision, coeffs: Vec::new(), precision }
    }

    /// Series with coefficients `coeffs` at orders `start, start+1, ...`.
    pub fn from_coeffs(
        field: FieldDescriptor,
        start: i64,
        coeffs: &[FieldElement],
        precision: i64,
    ) -> Result<Self, SeriesError> {
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field() != field {
                return Err(SeriesError::FieldMismatch);
            }
            raw.push(c.bits());
        }
        Ok(Self::from_raw(field, start, raw, precision))
    }

    pub(crate) fn from_raw(field: FieldDescriptor, start: i64, mut coeffs: Vec<u32>, precision: i64) -> Self {
        let known = (precision - start).max(0) as usize;
        coeffs.truncate(known);
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => Self::zero(field, precision),
            Some(skip) => {
                let trail = coeffs.iter().rposition(|&c| c != 0).expect("nonzero exists") + 1;
                LaurentSeries { field, valuation: start + skip as i64, coeffs: coeffs[skip..trail].to_vec(), precision }
            }
        }
    }

    /// `c · t^order`.
    pub fn monomial(c: FieldElement, order: i64, precision: i64) -> Self {
        Self::from_raw(c.field(), order, vec![c.bits()], precision)
    }

    pub fn constant(c: FieldElement, precision: i64) -> Self {
        Self::monomial(c, 0, precision)
    }

    /// The local parameter `t`.
    pub fn parameter(field: FieldDescriptor, precision: i64) -> Self {
        Self::monomial(field.one(), 1, precision)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Order of the leading term; equals the precision for a series that is
    /// zero as far as it is known.
    pub fn min_order(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^order`, or `None` past the precision.
    pub fn coeff(&self, order: i64) -> Option<FieldElement> {
        if order >= self.precision {
            return None;
        }
        let idx = order - self.valuation;
        let bits = if idx < 0 { 0 } else { self.coeffs.get(idx as usize).copied().unwrap_or(0) };
        Some(self.field.wrap(bits))
    }

    fn raw(&self, order: i64) -> u32 {
        let idx = order - self.valuation;
        if idx < 0 {
            0
        } else {
            self.coeffs.get(idx as usize).copied().unwrap_or(0)
        }
    }

    /// Nonzero terms as `(order, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (self.valuation + k as i64, self.field.wrap(c)))
    }

    /// Drops everything from `precision` on.
    pub fn truncate(&self, precision: i64) -> Self {
        let precision = precision.min(self.precision);
        Self::from_raw(self.field, self.valuation, self.coeffs.clone(), precision)
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(SeriesError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let precision = self.precision.min(other.precision);
        let start = self.valuation.min(other.valuation).min(precision);
        let coeffs = (start..precision).map(|n| self.raw(n) ^ other.raw(n)).collect();
        Ok(Self::from_raw(self.field, start, coeffs, precision))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let precision = (self.valuation + other.precision).min(other.valuation + self.precision);
        let start = self.valuation + other.valuation;
        let len = (precision - start).max(0) as usize;
        let mut out = vec![0u32; len];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0 || a >= len {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate().take(len - a) {
                out[a + b] ^= self.field.mul_raw(ca, cb);
            }
        }
        Ok(Self::from_raw(self.field, start, out, precision))
    }

    pub fn scale(&self, c: FieldElement) -> Result<Self, SeriesError> {
        if c.field() != self.field {
            return Err(SeriesError::FieldMismatch);
        }
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul_raw(x, c.bits())).collect();
        Ok(Self::from_raw(self.field, self.valuation, coeffs, self.precision))
    }

    /// Multiplicative inverse; relative precision is preserved.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroInverse { precision: self.precision });
        }
        let v = self.valuation;
        let rel = (self.precision - v) as usize;
        let lead_inv = self.field.inv_raw(self.coeffs[0]);
        let mut w = vec![0u32; rel];
        w[0] = lead_inv;
        for n in 1..rel {
            let mut acc = 0u32;
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc ^= self.field.mul_raw(self.coeffs[k], w[n - k]);
            }
            w[n] = self.field.mul_raw(acc, lead_inv);
        }
        Ok(Self::from_raw(self.field, -v, w, self.precision - 2 * v))
    }

    /// `f(t)^2`: squares coefficients, doubles orders.
    pub fn frobenius_square(&self) -> Self {
        let mut coeffs = vec![0u32; self.coeffs.len() * 2];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = self.field.square_raw(c);
        }
        Self::from_raw(self.field, 2 * self.valuation, coeffs, 2 * self.precision)
    }

    /// `℘(f) = f^2 + f`.
    pub fn wp(&self) -> Self {
        self.frobenius_square().add(self).expect("same field")
    }

    /// Terms of negative order. Needs every such term to be known.
    pub fn principal_part(&self) -> Result<PrincipalPart, SeriesError> {
        if self.precision < 0 {
            return Err(SeriesError::InsufficientPrecision { needed: 0, available: self.precision });
        }
        let mut pp = PrincipalPart::zero(self.field);
        for (order, c) in self.terms().take_while(|(o, _)| *o < 0) {
            pp.set((-order) as u64, c.bits());
        }
        Ok(pp)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (order, c) in self.terms() {
            write!(f, "({c})t^{order} + ")?;
        }
        write!(f, "O(t^{})", self.precision)
    }
}

/// Operations on series, dispatched through [`series_arith`].
#[derive(Clone, Copy, Debug)]
pub enum SeriesOp<'a> {
    Add(&'a LaurentSeries, &'a LaurentSeries),
    Mul(&'a LaurentSeries, &'a LaurentSeries),
    Inv(&'a LaurentSeries),
    FrobeniusSquare(&'a LaurentSeries),
    Wp(&'a LaurentSeries),
}

pub fn series_arith(op: SeriesOp<'_>) -> Result<LaurentSeries, SeriesError> {
    match op {
        SeriesOp::Add(a, b) => a.add(b),
        SeriesOp::Mul(a, b) => a.mul(b),
        SeriesOp::Inv(a) => a.inv(),
        SeriesOp::FrobeniusSquare(a) => Ok(a.frobenius_square()),
        SeriesOp::Wp(a) => Ok(a.wp()),
    }
}

/// The root of `m^2 + m = c` with positive order, `m = Σ_n c^(2^n)`.
pub fn solve_wp(c: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
    if c.precision < 1 || c.valuation < 1 {
        return Err(SeriesError::NonPositiveOrder { order: c.valuation.min(c.precision) });
    }
    let mut root = LaurentSeries::zero(c.field, c.precision);
    let mut term = c.clone();
    while !term.is_zero() {
        root = root.add(&term)?;
        term = term.frobenius_square().truncate(c.precision);
    }
    Ok(root)
}
