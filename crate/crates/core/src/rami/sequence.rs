use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::RamiError;
use crate::gf2m::{FieldDescriptor, FieldElement};

/// A coordinate value in `P^1(F_4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Rho,
    RhoSq,
    Infinity,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [Symbol::Zero, Symbol::One, Symbol::Rho, Symbol::RhoSq, Symbol::Infinity];

    /// Coordinate bits in F_4 (`ρ` is the class of `t` modulo `t^2+t+1`);
    /// `None` for infinity.
    pub fn f4_bits(self) -> Option<u32> {
        match self {
            Symbol::Zero => Some(0),
            Symbol::One => Some(1),
            Symbol::Rho => Some(0b10),
            Symbol::RhoSq => Some(0b11),
            Symbol::Infinity => None,
        }
    }

    pub fn f4_element(self) -> Option<FieldElement> {
        self.f4_bits().map(|b| FieldDescriptor::f4().element(b as u64).expect("F_4 coordinate"))
    }

    pub fn from_f4_bits(bits: u32) -> Option<Symbol> {
        match bits {
            0 => Some(Symbol::Zero),
            1 => Some(Symbol::One),
            0b10 => Some(Symbol::Rho),
            0b11 => Some(Symbol::RhoSq),
            _ => None,
        }
    }

    /// `ρ` or `ρ^2`.
    pub fn is_rho_class(self) -> bool {
        matches!(self, Symbol::Rho | Symbol::RhoSq)
    }

    /// Values that may follow `self` in an index sequence.
    pub fn successors(self) -> &'static [Symbol] {
        match self {
            Symbol::Infinity | Symbol::Zero => &[Symbol::Infinity],
            Symbol::One => &[Symbol::Rho, Symbol::RhoSq],
            Symbol::Rho | Symbol::RhoSq => &[Symbol::Zero, Symbol::One],
        }
    }

    pub fn may_precede(self, next: Symbol) -> bool {
        self.successors().contains(&next)
    }

    /// ASCII name accepted by the parser: `0`, `1`, `r`, `r2`, `inf`.
    pub fn ascii(self) -> &'static str {
        match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Rho => "r",
            Symbol::RhoSq => "r2",
            Symbol::Infinity => "inf",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Rho => "ρ",
            Symbol::RhoSq => "ρ²",
            Symbol::Infinity => "∞",
        })
    }
}

impl FromStr for Symbol {
    type Err = RamiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(Symbol::Zero),
            "1" => Ok(Symbol::One),
            "r" | "rho" | "ρ" => Ok(Symbol::Rho),
            "r2" | "rho2" | "ρ²" | "ρ^2" => Ok(Symbol::RhoSq),
            "inf" | "oo" | "∞" => Ok(Symbol::Infinity),
            other => Err(RamiError::UnknownSymbol(other.to_string())),
        }
    }
}

/// The image `(a_0, ..., a_i)` of a point of `C_i` in the product of
/// projective lines, restricted to `P^1(F_4)` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSequence {
    entries: Vec<Symbol>,
}

impl IndexSequence {
    pub fn new(entries: Vec<Symbol>) -> Result<Self, RamiError> {
        if entries.is_empty() {
            return Err(RamiError::EmptySequence);
        }
        if let Some(pos) = entries.windows(2).position(|w| !w[0].may_precede(w[1])) {
            return Err(RamiError::BadSuccessor { position: pos + 1, prev: entries[pos], next: entries[pos + 1] });
        }
        Ok(IndexSequence { entries })
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> Option<Symbol> {
        self.entries.get(j).copied()
    }

    /// Index of the last entry, i.e. the tower level the sequence lives on.
    pub fn level(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn first(&self) -> Symbol {
        self.entries[0]
    }

    pub fn last(&self) -> Symbol {
        *self.entries.last().expect("nonempty")
    }

    /// Appends `count` entries equal to infinity.
    pub fn with_infinite_tail(&self, count: usize) -> Result<Self, RamiError> {
        let mut entries = self.entries.clone();
        entries.extend(std::iter::repeat_n(Symbol::Infinity, count));
        IndexSequence::new(entries)
    }

    pub fn push(&mut self, next: Symbol) -> Result<(), RamiError> {
        let prev = self.last();
        if !prev.may_precede(next) {
            return Err(RamiError::BadSuccessor { position: self.entries.len(), prev, next });
        }
        self.entries.push(next);
        Ok(())
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, s) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for IndexSequence {
    type Err = RamiError;

    /// Comma separated symbols, optionally in parentheses: `1,r,0,inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = inner.split(',').map(str::parse).collect::<Result<Vec<Symbol>, _>>()?;
        IndexSequence::new(entries)
    }
}

impl Serialize for IndexSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.entries.iter().map(|s| s.ascii()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_table() {
        use Symbol::*;
        assert!(Infinity.may_precede(Infinity));
        assert!(Zero.may_precede(Infinity));
        assert!(One.may_precede(Rho) && One.may_precede(RhoSq));
        assert!(!One.may_precede(One));
        assert!(Rho.may_precede(Zero) && RhoSq.may_precede(One));
        assert!(!Zero.may_precede(One));
    }

    #[test]
    fn validation() {
        assert!("1,r,0,inf,inf".parse::<IndexSequence>().is_ok());
        let err = "1,r,r".parse::<IndexSequence>().unwrap_err();
        assert!(matches!(err, RamiError::BadSuccessor { position: 2, .. }));
        assert!(matches!("".parse::<IndexSequence>(), Err(RamiError::UnknownSymbol(_))));
        assert!(matches!(IndexSequence::new(vec![]), Err(RamiError::EmptySequence)));
    }

    #[test]
    fn display_and_tail() {
        let s: IndexSequence = "(r2,0)".parse().unwrap();
        assert_eq!(s.with_infinite_tail(2).unwrap().to_string(), "(ρ²,0,∞,∞)");
        assert_eq!(s.level(), 1);
    }

    #[test]
    fn f4_coordinates_square() {
        let rho = Symbol::Rho.f4_element().unwrap();
        assert_eq!(Symbol::from_f4_bits(rho.square().bits()), Some(Symbol::RhoSq));
        assert_eq!(Symbol::Infinity.f4_bits(), None);
    }
}
