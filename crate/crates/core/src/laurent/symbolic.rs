//! Symbolic ramification tracking above a zero of `x_i`.
//!
//! Above `P_i = P(a_0, ..., a_{i-1}, 0)` the pole of `x_{i+t}` is written as
//!
//! ```text
//! x_{i+t} = Σ_j C_j F_j + Σ_r D_r Z_r + (regular)
//! ```
//!
//! where the `F_j` are the exact principal parts at `P_i` and the `Z_r` are
//! symbols with a simple pole where they appear. `Z_1` satisfies
//! `℘(Z_1) = λ_1 F_0 + (regular)` and `Z_{r+1}` satisfies
//! `℘(Z_{r+1}) = λ_{r+1} Z_r + (regular)`.
//!
//! One step of the tower solves `℘(x_{n+1}) = x_n + (regular)`. The right
//! side is pushed into `℘(Y) + D Z_R`: the `F_j` with `j >= base + 2` go
//! through [`lemma31_decompose`], and each `c Z_r` with `r < R` is traded
//! for `℘((c/λ)^2 Z_{r+1}) + ℘(c/λ) Z_{r+1}`. A nonzero leftover `D Z_R` has
//! a simple pole, so the step is totally ramified with contribution 2 and a
//! new symbol `Z_{R+1}` is born; a zero leftover means the step is
//! unramified.

use std::collections::BTreeMap;

use serde::Serialize;

use super::principal::principal_chain;
use super::reduction::{lemma31_decompose, BTable};
use super::{PrincipalPart, SeriesError, Walk};
use crate::gf2m::{FieldDescriptor, FieldElement};
use crate::rami::{IndexSequence, StepClass};

/// Outcome of `C_{i+t+1} / C_{i+t}` at `P(a_0, ..., 0, ∞^t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub class: StepClass,
    /// `ord(x_{i+t})` at the point below; `+1` at `t = 0` where `x_i`
    /// vanishes.
    pub order_before: i64,
    /// `ord(x_{i+t+1})` at the point above.
    pub order_after: i64,
}

#[derive(Clone, Debug)]
struct PoleState {
    /// `C_j` on `F_j`.
    f: BTreeMap<usize, u32>,
    /// `D_r` on `Z_r`, `r = 1..=R` stored at `r - 1`.
    z: Vec<u32>,
    /// `λ_r`, same indexing as `z`.
    lambda: Vec<u32>,
}

struct Tracker<'a> {
    seq: &'a IndexSequence,
    walk: Walk,
    field: FieldDescriptor,
    chain: Vec<PrincipalPart>,
}

impl Tracker<'_> {
    fn wp(&self, x: u32) -> u32 {
        self.field.square_raw(x) ^ x
    }

    /// `F_base` as a multiple of `F_0`.
    fn base_factor(&self) -> u32 {
        match self.walk.parity() {
            0 => 1,
            _ => self.walk.coordinate(0).bits(),
        }
    }

    /// Pole order of the expression at the current point, after `R`
    /// ramified steps: `t` has order `2^R` and `Z_r` has order `-2^(R-r)`.
    fn order(&self, state: &PoleState) -> Option<i64> {
        let ramified = state.lambda.len();
        let f4 = self.field;
        let f_part = state
            .f
            .iter()
            .fold(PrincipalPart::zero(f4), |acc, (&j, &c)| {
                acc.add(&self.chain[j].scale(f4.wrap(c)).expect("F_4")).expect("F_4")
            })
            .top_exponent()
            .map(|e| -((e as i64) << ramified));
        let z_part =
            state.z.iter().enumerate().filter(|(_, &c)| c != 0).map(|(idx, _)| -(1i64 << (ramified - (idx + 1))));
        f_part.into_iter().chain(z_part).min()
    }

    fn step(&self, state: &PoleState) -> Result<(PoleState, StepClass), SeriesError> {
        let base = self.walk.parity();
        let f4 = self.field;
        let c_base = state.f.get(&base).copied().unwrap_or(0);
        let upper: Vec<(usize, FieldElement)> =
            state.f.iter().filter(|(&j, _)| j >= base + 2).map(|(&j, &c)| (j, f4.wrap(c))).collect();

        let (mut y_f, b_star) = match upper.last() {
            None => (BTreeMap::new(), 0),
            Some(&(top, _)) => {
                let dec = lemma31_decompose(&BTable::new(top, upper)?, self.seq)?;
                let lower = dec.lower.entries().map(|(j, c)| (j, c.bits())).collect();
                (lower, dec.b_star.bits())
            }
        };
        y_f.retain(|_, c| *c != 0);

        let ramified = state.lambda.len();
        let mut d = Vec::with_capacity(ramified + 1);
        d.push(f4.mul_raw(c_base ^ b_star, self.base_factor()));
        d.extend_from_slice(&state.z);

        let mut y_z = vec![0u32; ramified];
        for r in 0..ramified {
            if d[r] == 0 {
                continue;
            }
            let u = f4.mul_raw(d[r], f4.inv_raw(state.lambda[r]));
            y_z[r] ^= f4.square_raw(u);
            d[r + 1] ^= self.wp(u);
        }

        let leftover = d[ramified];
        let mut lambda = state.lambda.clone();
        let class = if leftover != 0 {
            y_z.push(1);
            lambda.push(leftover);
            StepClass::RAMIFIED
        } else {
            StepClass::Unramified
        };
        Ok((PoleState { f: y_f, z: y_z, lambda }, class))
    }
}

/// Step reports for `t = 0..=last_step` above the zero of `x_i` with index
/// sequence `seq`.
pub fn trace_steps(seq: &IndexSequence, last_step: usize) -> Result<Vec<StepReport>, SeriesError> {
    let walk = Walk::new(seq)?;
    if !walk.ends_in_zero() {
        return Err(SeriesError::NotAZero(seq.to_string()));
    }
    let i = walk.level();
    let tracker = Tracker { seq, field: walk.field(), chain: principal_chain(&walk, i), walk };

    // at P_i: ℘(x_{i+1}) = 1/m_i + (regular) = F_i + (regular)
    let mut state = PoleState { f: BTreeMap::from([(i, 1u32)]), z: Vec::new(), lambda: Vec::new() };
    let mut order_before = 1i64;
    let mut out = Vec::with_capacity(last_step + 1);
    for t in 0..=last_step {
        let (next, class) = tracker.step(&state)?;
        let order_after = tracker.order(&next).expect("x_{i+t+1} has a pole above P_i");
        out.push(StepReport { step: t, class, order_before, order_after });
        order_before = order_after;
        state = next;
    }
    Ok(out)
}

/// Classification of step `t` (`0 <= t <= i`) above a zero of `x_i`.
pub fn classify_step_symbolic(seq: &IndexSequence, t: usize) -> Result<StepReport, SeriesError> {
    let i = seq.level();
    if t > i {
        return Err(SeriesError::StepOutOfRange { step: t, max: i });
    }
    Ok(trace_steps(seq, t)?.pop().expect("nonempty"))
}
