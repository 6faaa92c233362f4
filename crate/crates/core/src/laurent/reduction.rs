use std::collections::BTreeMap;

use super::principal::principal_chain;
use super::{PrincipalPart, SeriesError, Walk};
use crate::gf2m::{FieldDescriptor, FieldElement};
use crate::rami::IndexSequence;

/// Coefficients `B_{j,level}` in F_4 of a combination `Σ_j B_{j,level} F_j`.
///
/// All indices share the parity of `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTable {
    level: usize,
    coeffs: BTreeMap<usize, u32>,
}

impl BTable {
    pub fn new(level: usize, entries: impl IntoIterator<Item = (usize, FieldElement)>) -> Result<Self, SeriesError> {
        let f4 = FieldDescriptor::f4();
        let mut coeffs = BTreeMap::new();
        for (j, c) in entries {
            if c.field() != f4 {
                return Err(SeriesError::FieldMismatch);
            }
            if j > level || !(level - j).is_multiple_of(2) {
                return Err(SeriesError::MalformedIndex { index: j, level });
            }
            if !c.is_zero() {
                coeffs.insert(j, c.bits());
            }
        }
        Ok(BTable { level, coeffs })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeff(&self, j: usize) -> FieldElement {
        FieldDescriptor::f4().wrap(self.coeffs.get(&j).copied().unwrap_or(0))
    }

    /// Nonzero entries, increasing index.
    pub fn entries(&self) -> impl Iterator<Item = (usize, FieldElement)> + '_ {
        let f4 = FieldDescriptor::f4();
        self.coeffs.iter().map(move |(&j, &c)| (j, f4.wrap(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ_j B_j F_j` given `F_0, F_1, ...`.
    pub fn combination(&self, f: &[PrincipalPart]) -> PrincipalPart {
        self.entries().fold(PrincipalPart::zero(FieldDescriptor::f4()), |acc, (j, c)| {
            acc.add(&f[j].scale(c).expect("F_4")).expect("F_4")
        })
    }
}

/// `Σ_j B_{j,i} F_j = ℘(Σ_j B_{j,i-2} F_j) + B* F_base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub lower: BTable,
    /// Lies in F_2.
    pub b_star: FieldElement,
    /// `B* F_base`, the part that no `℘` absorbs.
    pub residual: PrincipalPart,
}

fn wp(x: FieldElement) -> FieldElement {
    x.square().add(x).expect("same field")
}

/// Rewrites a combination of `F_j`, `j >= base + 2`, as a `℘`-image plus a
/// multiple of `F_base`.
///
/// The base index is 0 for chains starting at `1` and 1 for chains starting
/// at `ρ`/`ρ²`. With `a_k` the sequence coordinates:
///
/// * `B* = ℘(Σ_j B_{j,i} a_{j-1})`
/// * `B_{j,i-2} = (B* + ℘(Σ_{k<=j} B_{k,i} a_{k-1})) a_{j+1}^2 + ℘(B_{j+2,i})`
pub fn lemma31_decompose(b_in: &BTable, seq: &IndexSequence) -> Result<Decomposition, SeriesError> {
    let walk = Walk::new(seq)?;
    let base = walk.parity();
    let level = b_in.level();
    if level < base + 2 || !(level - base).is_multiple_of(2) {
        return Err(SeriesError::MalformedIndex { index: level, level });
    }
    if level > walk.level() {
        return Err(SeriesError::LevelOutOfRange { level, max: walk.level() });
    }
    if let Some((j, _)) = b_in.entries().find(|&(j, _)| j < base + 2) {
        return Err(SeriesError::MalformedIndex { index: j, level });
    }
    let f4 = walk.field();
    let a = |k: usize| walk.coordinate(k);

    let weighted = |k: usize| b_in.coeff(k).mul(a(k - 1)).expect("F_4");
    let b_star = wp(b_in.entries().fold(f4.zero(), |acc, (k, _)| acc.add(weighted(k)).expect("F_4")));
    debug_assert!(b_star.bits() <= 1, "B* must lie in F_2");

    let mut lower = Vec::new();
    let mut partial = f4.zero();
    for j in (base..=level - 2).step_by(2) {
        if j >= base + 2 {
            partial = partial.add(weighted(j)).expect("F_4");
        }
        let outer = b_star.add(wp(partial)).expect("F_4");
        let c = outer.mul(a(j + 1).square()).and_then(|x| x.add(wp(b_in.coeff(j + 2)))).expect("F_4");
        lower.push((j, c));
    }
    let lower = BTable::new(level - 2, lower)?;
    let f = principal_chain(&walk, base);
    let residual = f[base].scale(b_star)?;
    Ok(Decomposition { lower, b_star, residual })
}

/// Left side minus right side of the decomposition, computed exactly.
/// Zero exactly when the identity holds.
pub fn lemma31_residual(b_in: &BTable, dec: &Decomposition, seq: &IndexSequence) -> Result<PrincipalPart, SeriesError> {
    let walk = Walk::new(seq)?;
    if b_in.level() > walk.level() {
        return Err(SeriesError::LevelOutOfRange { level: b_in.level(), max: walk.level() });
    }
    let f = principal_chain(&walk, b_in.level());
    let lhs = b_in.combination(&f);
    let rhs = dec.lower.combination(&f).wp().add(&dec.residual)?;
    lhs.add(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4(bits: u32) -> FieldElement {
        FieldDescriptor::f4().wrap(bits)
    }

    fn seq(s: &str) -> IndexSequence {
        s.parse().unwrap()
    }

    #[test]
    fn single_term() {
        // B_{2,2} = 1, a_1 = ρ: ℘(ρ^2 F_0) + ℘(ρ) F_0
        let s = seq("1,r,0");
        let b = BTable::new(2, [(2, f4(1))]).unwrap();
        let dec = lemma31_decompose(&b, &s).unwrap();
        assert_eq!(dec.lower.coeff(0), f4(0b11));
        assert_eq!(dec.b_star, f4(1));
        assert_eq!(dec.residual, PrincipalPart::monomial(f4(1), 1));
        assert!(lemma31_residual(&b, &dec, &s).unwrap().is_zero());
    }

    #[test]
    fn zero_table() {
        let s = seq("1,r,1,r2,1");
        let b = BTable::new(4, []).unwrap();
        let dec = lemma31_decompose(&b, &s).unwrap();
        assert!(dec.lower.is_zero());
        assert!(dec.b_star.is_zero());
        assert!(dec.residual.is_zero());
    }

    #[test]
    fn two_terms_level_four() {
        let s = seq("1,r,1,r");
        let b = BTable::new(4, [(2, f4(1)), (4, f4(1))]);
        // level 4 needs a_4 from the sequence
        let b = b.unwrap();
        assert!(matches!(lemma31_decompose(&b, &s), Err(SeriesError::LevelOutOfRange { .. })));
        let s = seq("1,r,1,r,1");
        let dec = lemma31_decompose(&b, &s).unwrap();
        assert!(lemma31_residual(&b, &dec, &s).unwrap().is_zero());
    }

    #[test]
    fn malformed_indices() {
        assert!(matches!(BTable::new(4, [(3, f4(1))]), Err(SeriesError::MalformedIndex { .. })));
        let s = seq("1,r,1,r,1");
        let b = BTable::new(4, [(0, f4(1))]).unwrap();
        assert!(matches!(lemma31_decompose(&b, &s), Err(SeriesError::MalformedIndex { index: 0, .. })));
        let b = BTable::new(3, [(3, f4(1))]).unwrap();
        assert!(lemma31_decompose(&b, &s).is_err());
    }

    #[test]
    fn mirrored_chain() {
        let s = seq("r,1,r2,1,r,0");
        let b = BTable::new(5, [(3, f4(0b10)), (5, f4(1))]).unwrap();
        let dec = lemma31_decompose(&b, &s).unwrap();
        assert_eq!(dec.lower.level(), 3);
        assert!(dec.lower.entries().all(|(j, _)| j % 2 == 1));
        assert!(lemma31_residual(&b, &dec, &s).unwrap().is_zero());
    }
}
