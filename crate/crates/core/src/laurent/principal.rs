use std::collections::BTreeMap;
use std::fmt;

use super::{SeriesError, Walk};
use crate::gf2m::{FieldDescriptor, FieldElement};
use crate::rami::IndexSequence;

/// An exact polynomial `Σ b_e / t^e` in `1/t` with `e >= 1`. Never
/// truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPart {
    field: FieldDescriptor,
    coeffs: BTreeMap<u64, u32>,
}

impl PrincipalPart {
    pub fn zero(field: FieldDescriptor) -> Self {
        PrincipalPart { field, coeffs: BTreeMap::new() }
    }

    /// `c / t^exponent`.
    pub fn monomial(c: FieldElement, exponent: u64) -> Self {
        let mut pp = Self::zero(c.field());
        pp.set(exponent, c.bits());
        pp
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub(crate) fn set(&mut self, exponent: u64, bits: u32) {
        assert!(exponent >= 1, "principal parts have no regular terms");
        if bits == 0 {
            self.coeffs.remove(&exponent);
        } else {
            self.coeffs.insert(exponent, bits);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `1/t^exponent`.
    pub fn coeff(&self, exponent: u64) -> FieldElement {
        self.field.wrap(self.coeffs.get(&exponent).copied().unwrap_or(0))
    }

    /// Nonzero `(exponent, coefficient)` pairs, increasing exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, FieldElement)> + '_ {
        self.coeffs.iter().map(move |(&e, &c)| (e, self.field.wrap(c)))
    }

    /// Pole order; `None` for zero.
    pub fn top_exponent(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.field != other.field {
            return Err(SeriesError::FieldMismatch);
        }
        let mut out = self.clone();
        for (&e, &c) in &other.coeffs {
            let cur = out.coeffs.get(&e).copied().unwrap_or(0);
            out.set(e, cur ^ c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElement) -> Result<Self, SeriesError> {
        if self.field != c.field() {
            return Err(SeriesError::FieldMismatch);
        }
        let mut out = Self::zero(self.field);
        for (&e, &x) in &self.coeffs {
            out.set(e, self.field.mul_raw(x, c.bits()));
        }
        Ok(out)
    }

    pub fn frobenius_square(&self) -> Self {
        let mut out = Self::zero(self.field);
        for (&e, &c) in &self.coeffs {
            out.set(2 * e, self.field.square_raw(c));
        }
        out
    }

    /// `℘(F) = F^2 + F`.
    pub fn wp(&self) -> Self {
        self.frobenius_square().add(self).expect("same field")
    }

    /// All exponents are powers of two.
    pub fn is_two_linearized(&self) -> bool {
        self.coeffs.keys().all(|e| e.is_power_of_two())
    }
}

impl fmt::Display for PrincipalPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})/t^{e}")?;
        }
        Ok(())
    }
}

/// `F_j` for `j = 0..=last`: `F_0 = 1/t`, then `F_j = F_{j-1}^2 + F_{j-1}`
/// after a `1` and `F_j = a_{j-1} F_{j-1}` after `ρ` or `ρ²`.
pub(crate) fn principal_chain(walk: &Walk, last: usize) -> Vec<PrincipalPart> {
    let f4 = walk.field();
    let mut out = Vec::with_capacity(last + 1);
    out.push(PrincipalPart::monomial(f4.one(), 1));
    for j in 1..=last {
        let prev = &out[j - 1];
        let a = walk.coordinate(j - 1);
        let next = if a.is_one() { prev.wp() } else { prev.scale(a).expect("F_4") };
        out.push(next);
    }
    out
}

/// Principal part `F_j` of `1/m_j` along an alternating sequence.
pub fn principal_f(seq: &IndexSequence, j: usize) -> Result<PrincipalPart, SeriesError> {
    let walk = Walk::new(seq)?;
    if j > walk.level() {
        return Err(SeriesError::LevelOutOfRange { level: j, max: walk.level() });
    }
    Ok(principal_chain(&walk, j).pop().expect("nonempty"))
}
