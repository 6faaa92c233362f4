//! Ramification ledger for the tower.
//!
//! The only points of `C_level` that can ramify in `C_{level+1}` are the
//! zeros and poles of `x_level`. They come in classes named by index
//! sequences `(a_0, ..., a_i, ∞^j)` where `(a_0, ..., a_i)` ends in a zero
//! of `x_i`, plus the two chains `(∞, ..., ∞)` and `(0, ∞, ..., ∞)`.
//! Each class is classified with the closed-form step rules and weighted by
//! its geometric point count, which gives `n_level` and, through
//! Riemann-Hurwitz, the genus.

mod sequence;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

pub use sequence::{IndexSequence, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamiError {
    #[error("index sequence is empty")]
    EmptySequence,
    #[error("unknown index symbol {0:?}")]
    UnknownSymbol(String),
    #[error("entry {position}: {next} cannot follow {prev}")]
    BadSuccessor { position: usize, prev: Symbol, next: Symbol },
}

/// Whether a zero sequence starts with `1` or with `ρ`/`ρ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum A0Class {
    One,
    Rho,
}

impl A0Class {
    /// Zeros of `x_i` start with `1` for even `i` and with `ρ`/`ρ²` for odd `i`.
    pub fn of_level(i: usize) -> A0Class {
        if i.is_multiple_of(2) {
            A0Class::One
        } else {
            A0Class::Rho
        }
    }

    pub fn of_symbol(s: Symbol) -> Option<A0Class> {
        match s {
            Symbol::One => Some(A0Class::One),
            Symbol::Rho | Symbol::RhoSq => Some(A0Class::Rho),
            _ => None,
        }
    }
}

/// Behaviour of a point in the next cover of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StepClass {
    /// One point above, with the given contribution to the ramification
    /// divisor.
    TotallyRamified {
        contribution: u32,
    },
    Unramified,
}

impl StepClass {
    pub const RAMIFIED: StepClass = StepClass::TotallyRamified { contribution: 2 };

    pub fn is_ramified(self) -> bool {
        matches!(self, StepClass::TotallyRamified { .. })
    }
}

/// The two chains `(∞, ..., ∞)` and `(0, ∞, ..., ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpecialChain {
    AllInfinity,
    ZeroThenInfinity,
}

impl SpecialChain {
    pub fn sequence(self, level: usize) -> IndexSequence {
        let head = match self {
            SpecialChain::AllInfinity => Symbol::Infinity,
            SpecialChain::ZeroThenInfinity => Symbol::Zero,
        };
        IndexSequence::new(std::iter::once(head).chain(std::iter::repeat_n(Symbol::Infinity, level)).collect())
            .expect("valid chain")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Origin {
    /// Descends from a zero of `x_level`.
    Zero {
        level: usize,
        class: A0Class,
    },
    Special(SpecialChain),
}

/// One boundary class on `C_{origin + tail}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub origin: Origin,
    pub tail_j: usize,
    /// Number of index sequences in the class.
    pub sequences: BigUint,
    /// Geometric points above each index sequence.
    pub mult: BigUint,
    /// Behaviour in `C_{level+1} / C_level`.
    pub next: StepClass,
}

impl LedgerEntry {
    pub fn points(&self) -> BigUint {
        &self.sequences * &self.mult
    }
}

/// All zero sequences of `x_i` on `C_i`: `a_i = 0`, then walking back
/// `ρ`/`ρ²` and `1` alternate.
pub fn zero_sequences(i: usize) -> Vec<IndexSequence> {
    let mut partial: Vec<Vec<Symbol>> = vec![vec![Symbol::Zero]];
    for back in 1..=i {
        partial = partial
            .into_iter()
            .flat_map(|tail| {
                let heads: &[Symbol] = if back % 2 == 1 { &[Symbol::Rho, Symbol::RhoSq] } else { &[Symbol::One] };
                heads.iter().map(move |&h| {
                    let mut v = Vec::with_capacity(tail.len() + 1);
                    v.push(h);
                    v.extend_from_slice(&tail);
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<IndexSequence> = partial
        .into_iter()
        .map(|v| IndexSequence::new(v).expect("zero sequences respect the successor table"))
        .collect();
    out.sort();
    out
}

/// Number of zero sequences of `x_i`, counted position by position.
pub fn zero_sequence_count(i: usize) -> BigUint {
    (1..=i).fold(BigUint::one(), |acc, back| if back % 2 == 1 { acc * 2u32 } else { acc })
}

/// Behaviour of `P(a_0, ..., a_{i-1}, 0, ∞^j)` in `C_{i+j+1}/C_{i+j}`.
///
/// Ranges that are empty for small `i` are taken literally.
pub fn classify_closed(origin_i: usize, tail_j: usize, class: A0Class) -> StepClass {
    let (i, j) = (origin_i as i64, tail_j as i64);
    let ramified = match class {
        A0Class::One => (j % 2 == 0 && j <= i - 2) || j >= i,
        A0Class::Rho => (j % 2 == 0 && j <= i - 3) || j >= i - 1,
    };
    if ramified {
        StepClass::RAMIFIED
    } else {
        StepClass::Unramified
    }
}

/// Pole order of `x_{i+t}` at `P(a_0, ..., a_{i-1}, 0, ∞^t)`, `t >= 1`.
///
/// Halves at every second step starting from `-2^[i/2]` and stays at `-1`
/// once it gets there.
pub fn pole_order_closed(origin_i: usize, t: usize) -> i64 {
    assert!(t >= 1, "x_i itself vanishes at the base point");
    let exp = (origin_i / 2).saturating_sub(t / 2);
    -(1i64 << exp)
}

/// Point count multiplier after `tail_j` steps: doubles at every unramified
/// step, unchanged at totally ramified ones.
fn multiplicity(origin_i: usize, tail_j: usize, class: A0Class) -> BigUint {
    let unramified = (0..tail_j).filter(|&t| !classify_closed(origin_i, t, class).is_ramified()).count();
    BigUint::one() << unramified
}

/// Boundary classes of `C_level`.
pub fn ledger(level: usize) -> Vec<LedgerEntry> {
    let mut out: Vec<LedgerEntry> = (1..=level)
        .map(|i| {
            let class = A0Class::of_level(i);
            let tail_j = level - i;
            LedgerEntry {
                origin: Origin::Zero { level: i, class },
                tail_j,
                sequences: zero_sequence_count(i),
                mult: multiplicity(i, tail_j, class),
                next: classify_closed(i, tail_j, class),
            }
        })
        .collect();
    for chain in [SpecialChain::AllInfinity, SpecialChain::ZeroThenInfinity] {
        out.push(LedgerEntry {
            origin: Origin::Special(chain),
            tail_j: level,
            sequences: BigUint::one(),
            mult: BigUint::one(),
            next: StepClass::RAMIFIED,
        });
    }
    out
}

/// `n_level`: points of `C_level` totally ramified in `C_{level+1}`,
/// summed from the ledger.
pub fn count_ramified(level: usize) -> BigUint {
    ledger(level).iter().filter(|e| e.next.is_ramified()).map(LedgerEntry::points).sum()
}

/// Closed form for `n_i`.
pub fn count_ramified_closed(i: usize) -> BigUint {
    if i.is_multiple_of(2) {
        BigUint::from((i + 2) / 4 + 2) << (i / 2)
    } else {
        BigUint::from(i / 4 + 2) << i.div_ceil(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GenusMethod {
    /// Riemann-Hurwitz summed over the ledger counts.
    Hurwitz,
    /// Closed-form expression in `i`.
    Closed,
}

pub fn genus(level: usize, method: GenusMethod) -> BigInt {
    match method {
        GenusMethod::Hurwitz => genus_hurwitz(level),
        GenusMethod::Closed => genus_closed(level),
    }
}

fn genus_hurwitz(level: usize) -> BigInt {
    if level == 0 {
        return BigInt::zero();
    }
    // 2g_i - 2 = 2(2g_{i-1} - 2) + 2 n_{i-1}, unrolled from g_1 = 1
    let sum: BigUint = (1..level).map(|j| count_ramified(j) << (level - j - 1)).sum();
    BigInt::one() + BigInt::from(sum)
}

fn genus_closed(i: usize) -> BigInt {
    let lead = (BigInt::one() << (i + 2)) + 1;
    // both corrections carry a factor 2^(-1); fold it into the shift
    let twice_correction = if i.is_multiple_of(2) {
        BigInt::from(i + 10) << (i / 2)
    } else {
        BigInt::from(i + 2 * (i / 4) + 15) << ((i - 1) / 2)
    };
    debug_assert!((&twice_correction % 2u32).is_zero());
    lead - (twice_correction >> 1)
}
