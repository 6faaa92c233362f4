//! Local expansions at the boundary chains.
//!
//! Along a chain whose index sequence alternates between `1` and `ρ`/`ρ²`
//! every `x_j` is `a_j + m_j(t)` with `t` a local parameter at the base.
//! [`chain_expand`] computes the `m_j` as truncated series, and
//! [`principal_f`] the exact principal parts `F_j` of `1/m_j`. The
//! `℘`-reduction of linear combinations of the `F_j`
//! ([`lemma31_decompose`]) drives [`classify_step_symbolic`], which follows
//! the poles up the tower and decides at each step whether the cover
//! ramifies.

mod chain;
mod principal;
mod reduction;
mod series;
mod symbolic;

use thiserror::Error;

pub use chain::{chain_expand, DEFAULT_PRECISION};
pub use principal::{principal_f, PrincipalPart};
pub use reduction::{lemma31_decompose, lemma31_residual, BTable, Decomposition};
pub use series::{series_arith, solve_wp, LaurentSeries, SeriesOp};
pub use symbolic::{classify_step_symbolic, trace_steps, StepReport};

use crate::gf2m::{FieldDescriptor, FieldElement};
use crate::rami::{A0Class, IndexSequence, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series belong to different fields")]
    FieldMismatch,
    #[error("inversion of a series that vanishes up to O(t^{precision})")]
    ZeroInverse { precision: i64 },
    #[error("℘(m) = c has no root of positive order: c has a term of order {order}")]
    NonPositiveOrder { order: i64 },
    #[error("precision exhausted: need terms up to order {needed}, known only below {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("entry {position} of {sequence} breaks the 1 / ρ alternation")]
    NotAlternating { sequence: String, position: usize },
    #[error("level {level} exceeds the sequence level {max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("B-table index {index} has the wrong parity or range for level {level}")]
    MalformedIndex { index: usize, level: usize },
    #[error("{0} is not the index sequence of a zero of x_i")]
    NotAZero(String),
    #[error("step {step} outside 0..={max}")]
    StepOutOfRange { step: usize, max: usize },
}

/// Every alternating sequence of the given level whose first entry has the
/// given class.
pub fn alternating_sequences(level: usize, class: A0Class) -> Vec<IndexSequence> {
    let mut out: Vec<Vec<Symbol>> = vec![Vec::with_capacity(level + 1)];
    for j in 0..=level {
        let one_slot = (j % 2 == 0) == (class == A0Class::One);
        let choices: &[Symbol] = if one_slot { &[Symbol::One] } else { &[Symbol::Rho, Symbol::RhoSq] };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| IndexSequence::new(v).expect("alternating sequences obey the successor table")).collect()
}

/// A validated alternating chain: `1` and `ρ`/`ρ²` alternate, and the last
/// entry may be `0` in place of `1`.
#[derive(Clone, Debug)]
pub(crate) struct Walk {
    class: A0Class,
    coords: Vec<FieldElement>,
}

impl Walk {
    pub(crate) fn new(seq: &IndexSequence) -> Result<Self, SeriesError> {
        let bad = |position| SeriesError::NotAlternating { sequence: seq.to_string(), position };
        let class = A0Class::of_symbol(seq.first()).ok_or(bad(0))?;
        let last = seq.level();
        let mut coords = Vec::with_capacity(last + 1);
        for (j, &s) in seq.entries().iter().enumerate() {
            let one_slot = (j % 2 == 0) == (class == A0Class::One);
            let ok =
                if one_slot { s == Symbol::One || (j == last && j > 0 && s == Symbol::Zero) } else { s.is_rho_class() };
            if !ok {
                return Err(bad(j));
            }
            coords.push(s.f4_element().expect("finite coordinate"));
        }
        Ok(Walk { class, coords })
    }

    /// Parity of the indices `j` where `F_j` is a multiple of `F_{j-1}`:
    /// even for chains starting at `1`, odd for chains starting at `ρ`.
    pub(crate) fn parity(&self) -> usize {
        match self.class {
            A0Class::One => 0,
            A0Class::Rho => 1,
        }
    }

    pub(crate) fn level(&self) -> usize {
        self.coords.len() - 1
    }

    pub(crate) fn coordinate(&self, j: usize) -> FieldElement {
        self.coords[j]
    }

    pub(crate) fn field(&self) -> FieldDescriptor {
        FieldDescriptor::f4()
    }

    pub(crate) fn ends_in_zero(&self) -> bool {
        self.coords.last().is_some_and(|c| c.is_zero())
    }
}
