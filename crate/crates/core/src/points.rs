//! Rational chains of the recursion over F_{2^k} and the asymptotic table.
//!
//! Chains `(x_0, ..., x_i)` with `x_j != 0` for `j < i` are counted by
//! pushing a value distribution up the tower: each admissible value at
//! level `j` passes its count to both roots of `y^2 + y = v + 1 + 1/v`. The
//! kernel pulls instead of pushing, so each target value is independent
//! and the level update parallelizes cleanly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exec::Execution;
use crate::gf2m::{ArtinSchreierSolver, FieldDescriptor, FieldElement};
use crate::rami::{count_ramified, genus, GenusMethod};

/// Largest supported extension degree for enumeration.
pub const MAX_K: u32 = 24;

/// Levels above this use the closed form in [`rational_count_f8`].
pub const ENUMERATION_LIMIT: usize = 20;

/// Non-affine F_8-rational points on every `C_i`, `i >= 1`: the chains
/// `(0, ∞, ..., ∞)` and `(∞, ..., ∞)`.
pub const BOUNDARY_F8: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointsError {
    #[error("extension degree {0} outside 1..={MAX_K}")]
    DegreeOutOfRange(u32),
    #[error("level must be at least 1")]
    LevelZero,
    #[error("chain count overflows 64 bits at level {level} over F_2^{k}")]
    Overflow { level: usize, k: u32 },
}

const NONE: u32 = u32::MAX;

/// For every `y`, the values `v != 0` with `y^2 + y = v + 1 + 1/v`.
///
/// Writing `c = y^2 + y + 1`, the predecessors are the roots of
/// `v^2 + c v + 1`: `{1}` when `c = 0`, otherwise `c w` and `c (w + 1)` for
/// `w^2 + w = 1/c^2`, which are mutually inverse.
#[derive(Clone, Debug)]
pub struct PredecessorTable {
    field: FieldDescriptor,
    preds: Vec<[u32; 2]>,
}

impl PredecessorTable {
    pub fn new(field: FieldDescriptor, exec: Execution) -> Self {
        let solver = ArtinSchreierSolver::new(field);
        let preds = exec.map_range(0..field.order(), |y| {
            let y = y as u32;
            let c = field.square_raw(y) ^ y ^ 1;
            if c == 0 {
                return [1, NONE];
            }
            let inv = field.inv_raw(c);
            match solver.solve_raw(field.square_raw(inv)) {
                Some(w) => [field.mul_raw(c, w), field.mul_raw(c, w ^ 1)],
                None => [NONE, NONE],
            }
        });
        PredecessorTable { field, preds }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Predecessors of `y`, without repetition.
    pub fn predecessors(&self, y: u32) -> impl Iterator<Item = u32> + '_ {
        self.preds[y as usize].into_iter().filter(|&v| v != NONE)
    }
}

/// Number of admissible chains ending at each value of the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDistribution {
    field: FieldDescriptor,
    level: usize,
    counts: Vec<u64>,
}

impl ValueDistribution {
    /// Level 0: one chain `(x_0)` per field element.
    pub fn initial(field: FieldDescriptor) -> Self {
        ValueDistribution { field, level: 0, counts: vec![1; field.order() as usize] }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn count(&self, x: FieldElement) -> u64 {
        assert_eq!(x.field(), self.field, "element from another field");
        self.counts[x.bits() as usize]
    }

    /// Values with a nonzero count.
    pub fn support(&self) -> impl Iterator<Item = (FieldElement, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(x, &c)| (self.field.element(x as u64).expect("in range"), c))
    }

    pub fn total(&self) -> Option<u64> {
        self.counts.iter().try_fold(0u64, |acc, &c| acc.checked_add(c))
    }

    /// Extends every chain by one level. Chains ending in 0 stop.
    pub fn step(&self, table: &PredecessorTable, exec: Execution) -> Option<Self> {
        assert_eq!(table.field(), self.field, "table from another field");
        let counts: Vec<Option<u64>> = exec.map_range(0..self.field.order(), |y| {
            table.predecessors(y as u32).try_fold(0u64, |acc, v| acc.checked_add(self.counts[v as usize]))
        });
        let counts = counts.into_iter().collect::<Option<Vec<u64>>>()?;
        Some(ValueDistribution { field: self.field, level: self.level + 1, counts })
    }
}

fn check_degree(k: u32) -> Result<FieldDescriptor, PointsError> {
    if !(1..=MAX_K).contains(&k) {
        return Err(PointsError::DegreeOutOfRange(k));
    }
    Ok(FieldDescriptor::new(k, None).expect("supported degree"))
}

/// Affine chain counts for levels `1..=i` over F_{2^k}.
pub fn affine_counts(i: usize, k: u32, exec: Execution) -> Result<Vec<u64>, PointsError> {
    let field = check_degree(k)?;
    if i == 0 {
        return Err(PointsError::LevelZero);
    }
    let table = PredecessorTable::new(field, exec);
    let mut dist = ValueDistribution::initial(field);
    let mut out = Vec::with_capacity(i);
    for level in 1..=i {
        dist = dist.step(&table, exec).ok_or(PointsError::Overflow { level, k })?;
        out.push(dist.total().ok_or(PointsError::Overflow { level, k })?);
    }
    Ok(out)
}

/// Number of `(x_0, ..., x_i)` over F_{2^k} solving the recursion with
/// `x_j != 0` for `j < i`.
pub fn affine_count(i: usize, k: u32) -> Result<u64, PointsError> {
    affine_count_with(i, k, Execution::default())
}

pub fn affine_count_with(i: usize, k: u32, exec: Execution) -> Result<u64, PointsError> {
    Ok(*affine_counts(i, k, exec)?.last().expect("i >= 1"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitClause {
    /// `{x + 1 + 1/x : x ∈ D}` is the conjugacy class of the generator.
    ForwardImage,
    /// `{y^2 + y : y ∈ D}` is the same class.
    WpImage,
    /// Every `x ∈ D` has exactly two successors, both in `D`.
    TwoSuccessors,
    /// The successors of `D` cover `D`.
    Surjective,
}

impl SplitClause {
    pub const ALL: [SplitClause; 4] =
        [SplitClause::ForwardImage, SplitClause::WpImage, SplitClause::TwoSuccessors, SplitClause::Surjective];

    pub fn label(self) -> &'static str {
        match self {
            SplitClause::ForwardImage => "forward image",
            SplitClause::WpImage => "wp image",
            SplitClause::TwoSuccessors => "two successors",
            SplitClause::Surjective => "successors cover",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail(String),
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub k: u32,
    pub clauses: Vec<(SplitClause, Verdict)>,
}

impl SplitReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|(_, v)| *v == Verdict::Pass)
    }

    pub fn verdict(&self, clause: SplitClause) -> &Verdict {
        &self.clauses.iter().find(|(c, _)| *c == clause).expect("all clauses reported").1
    }
}

fn show_set(field: FieldDescriptor, set: &std::collections::BTreeSet<u32>) -> String {
    let items: Vec<String> = set.iter().map(|&x| field.element(x as u64).expect("in range").to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Checks complete splitting of `D = F_{2^k} − F_2` in the first cover.
pub fn split_check(k: u32) -> Result<SplitReport, PointsError> {
    use std::collections::BTreeSet;

    let field = check_degree(k)?;
    let domain: Vec<u32> = (2..field.order() as u32).collect();
    if domain.is_empty() {
        let clauses = SplitClause::ALL.iter().map(|&c| (c, Verdict::NotApplicable)).collect();
        return Ok(SplitReport { k, clauses });
    }
    let in_domain = |x: u32| x >= 2;
    let g = field.generator().bits();
    let conjugates: BTreeSet<u32> = (0..k).map(|e| field.pow_raw(g, 1 << e)).collect();
    let forward = |x: u32| x ^ 1 ^ field.inv_raw(x);
    let forward_image: BTreeSet<u32> = domain.iter().map(|&x| forward(x)).collect();
    let wp_image: BTreeSet<u32> = domain.iter().map(|&y| field.square_raw(y) ^ y).collect();

    let compare = |image: &BTreeSet<u32>| {
        if *image == conjugates {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("image {} differs from {}", show_set(field, image), show_set(field, &conjugates)))
        }
    };

    let solver = ArtinSchreierSolver::new(field);
    let successors = |x: u32| solver.solve_raw(forward(x)).map(|y| [y, y ^ 1]);
    let mut bad = None;
    let mut covered = BTreeSet::new();
    for &x in &domain {
        match successors(x) {
            Some(ys) if ys.iter().all(|&y| in_domain(y)) => covered.extend(ys),
            Some(ys) => {
                covered.extend(ys);
                bad.get_or_insert_with(|| {
                    let shown: BTreeSet<u32> = ys.into_iter().collect();
                    format!("{} has successors {}", field.wrap(x), show_set(field, &shown))
                });
            }
            None => {
                bad.get_or_insert_with(|| format!("{} has no successor", field.wrap(x)));
            }
        }
    }
    let two = match bad {
        None => Verdict::Pass,
        Some(msg) => Verdict::Fail(msg),
    };
    let domain_set: BTreeSet<u32> = domain.iter().copied().collect();
    let sweep = if covered == domain_set {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("successors {} differ from the domain", show_set(field, &covered)))
    };

    Ok(SplitReport {
        k,
        clauses: vec![
            (SplitClause::ForwardImage, compare(&forward_image)),
            (SplitClause::WpImage, compare(&wp_image)),
            (SplitClause::TwoSuccessors, two),
            (SplitClause::Surjective, sweep),
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalCount {
    pub level: usize,
    pub count: BigUint,
    /// False when the value comes from `6·2^i + 2` without enumeration.
    pub enumerated: bool,
}

/// `#C_i(F_8)`: affine chains plus the two F_2-rational boundary chains.
pub fn rational_count_f8(i: usize) -> Result<RationalCount, PointsError> {
    if i == 0 {
        return Err(PointsError::LevelZero);
    }
    if i > ENUMERATION_LIMIT {
        let count = (BigUint::from(6u32) << i) + BOUNDARY_F8;
        return Ok(RationalCount { level: i, count, enumerated: false });
    }
    let affine = affine_count(i, 3)?;
    Ok(RationalCount { level: i, count: BigUint::from(affine + BOUNDARY_F8), enumerated: true })
}

/// `#P^1(F_8)`.
const BASE_POINTS_F8: u32 = 9;

fn ser_decimal<T: fmt::Display + ToPrimitive, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

fn ser_opt_decimal<T: fmt::Display + ToPrimitive, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_decimal(v, s),
        None => s.serialize_none(),
    }
}

/// One row of the asymptotic table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerStats {
    pub i: usize,
    #[serde(serialize_with = "ser_decimal")]
    pub n_i: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub genus_hurwitz: BigInt,
    #[serde(serialize_with = "ser_decimal")]
    pub genus_closed: BigInt,
    #[serde(rename = "N8", serialize_with = "ser_decimal")]
    pub n8: BigUint,
    #[serde(serialize_with = "ser_opt_decimal")]
    pub ratio_num: Option<BigInt>,
    #[serde(serialize_with = "ser_opt_decimal")]
    pub ratio_den: Option<BigInt>,
    /// `ratio` to six decimals, ties to even; `None` at genus 0.
    pub ratio_float: Option<String>,
    #[serde(skip)]
    pub n8_enumerated: bool,
}

impl TowerStats {
    pub fn ratio(&self) -> Option<BigRational> {
        Some(BigRational::new(self.ratio_num.clone()?, self.ratio_den.clone()?))
    }

    pub fn level(i: usize) -> Result<Self, PointsError> {
        let genus_hurwitz = genus(i, GenusMethod::Hurwitz);
        let genus_closed = genus(i, GenusMethod::Closed);
        let (n8, n8_enumerated) = if i == 0 {
            (BigUint::from(BASE_POINTS_F8), true)
        } else {
            let rc = rational_count_f8(i)?;
            (rc.count, rc.enumerated)
        };
        let ratio = (!genus_closed.is_zero()).then(|| BigRational::new(BigInt::from(n8.clone()), genus_closed.clone()));
        Ok(TowerStats {
            i,
            n_i: count_ramified(i),
            genus_hurwitz,
            genus_closed,
            n8,
            ratio_num: ratio.as_ref().map(|r| r.numer().clone()),
            ratio_den: ratio.as_ref().map(|r| r.denom().clone()),
            ratio_float: ratio.as_ref().map(|r| format_fixed(r, 6)),
            n8_enumerated,
        })
    }
}

/// `x` with `places` decimals, rounding half to even, computed exactly.
pub fn format_fixed(x: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let (mut q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r * 2u32;
    let den = scaled.denom();
    if twice > *den || (twice == *den && q.is_odd()) {
        q += 1u32;
    }
    let (int, frac) = q.div_rem(&scale);
    let sign = if x.is_negative() && !q.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{frac:0>places$}")
}

/// Literature bounds the tower is compared against, for q = 8.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub q: u32,
    /// `√q − 1`.
    pub drinfeld_vladuts: f64,
    /// `2(p²−1)/(p+2)` at `p = 2`.
    pub zink: String,
    /// `2/(q−2)`.
    pub kummer: String,
    pub tower_limit: String,
    pub limit_equals_zink: bool,
}

impl BoundConstants {
    pub fn zink_rational(p: i64) -> BigRational {
        BigRational::new(BigInt::from(2 * (p * p - 1)), BigInt::from(p + 2))
    }

    pub fn kummer_rational(q: i64) -> BigRational {
        BigRational::new(BigInt::from(2), BigInt::from(q - 2))
    }

    pub fn tower_limit_rational() -> BigRational {
        BigRational::new(BigInt::from(3), BigInt::from(2))
    }

    pub fn for_f8() -> Self {
        let zink = Self::zink_rational(2);
        let limit = Self::tower_limit_rational();
        BoundConstants {
            q: 8,
            drinfeld_vladuts: 8f64.sqrt() - 1.0,
            zink: zink.to_string(),
            kummer: Self::kummer_rational(8).to_string(),
            tower_limit: limit.to_string(),
            limit_equals_zink: limit == zink,
        }
    }

    /// Exact test `r < √q − 1`, i.e. `r + 1 < √q`.
    pub fn below_drinfeld_vladuts(&self, r: &BigRational) -> bool {
        let s = r + BigRational::one();
        if s.is_negative() {
            return true;
        }
        s.numer() * s.numer() < s.denom() * s.denom() * BigInt::from(self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticsTable {
    pub rows: Vec<TowerStats>,
    pub bounds: BoundConstants,
}

/// Rows for levels `1..=i_max`; for `i_max = 0` the single row of `P^1`.
pub fn asymptotics_table(i_max: usize, exec: Execution) -> Result<AsymptoticsTable, PointsError> {
    let levels: Vec<usize> = if i_max == 0 { vec![0] } else { (1..=i_max).collect() };
    let rows = exec.map_slice(&levels, |&i| TowerStats::level(i)).into_iter().collect::<Result<_, _>>()?;
    Ok(AsymptoticsTable { rows, bounds: BoundConstants::for_f8() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_affine_counts() {
        assert_eq!(affine_count(1, 1).unwrap(), 0);
        assert_eq!(affine_count(1, 2).unwrap(), 6);
        assert_eq!(affine_count(1, 3).unwrap(), 12);
        assert_eq!(affine_count(2, 3).unwrap(), 24);
        assert!(matches!(affine_count(1, 0), Err(PointsError::DegreeOutOfRange(0))));
        assert!(matches!(affine_count(1, 25), Err(PointsError::DegreeOutOfRange(25))));
        assert!(matches!(affine_count(0, 3), Err(PointsError::LevelZero)));
    }

    #[test]
    fn predecessors_are_inverse_pairs() {
        let f = FieldDescriptor::new(5, None).unwrap();
        let table = PredecessorTable::new(f, Execution::Sequential);
        for y in 0..32u32 {
            let preds: Vec<u32> = table.predecessors(y).collect();
            if preds.len() == 2 {
                assert_eq!(f.mul_raw(preds[0], preds[1]), 1);
            }
            for v in preds {
                assert_eq!(f.square_raw(y) ^ y, v ^ 1 ^ f.inv_raw(v));
            }
        }
    }

    #[test]
    fn split_examples() {
        assert!(split_check(3).unwrap().all_pass());
        let r = split_check(1).unwrap();
        assert!(r.clauses.iter().all(|(_, v)| *v == Verdict::NotApplicable));
        let r = split_check(2).unwrap();
        assert!(matches!(r.verdict(SplitClause::TwoSuccessors), Verdict::Fail(_)));
    }

    #[test]
    fn rational_counts() {
        assert_eq!(rational_count_f8(1).unwrap().count, BigUint::from(14u32));
        assert_eq!(rational_count_f8(2).unwrap().count, BigUint::from(26u32));
        assert_eq!(rational_count_f8(10).unwrap().count, BigUint::from(6146u32));
        let far = rational_count_f8(30).unwrap();
        assert!(!far.enumerated);
        assert_eq!(far.count, (BigUint::from(6u32) << 30) + 2u32);
    }

    #[test]
    fn fixed_formatting() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(format_fixed(&r(26, 5), 6), "5.200000");
        assert_eq!(format_fixed(&r(14, 1), 6), "14.000000");
        assert_eq!(format_fixed(&r(6146, 3777), 6), "1.627217");
        // ties go to the even neighbour
        assert_eq!(format_fixed(&r(1, 8), 2), "0.12");
        assert_eq!(format_fixed(&r(3, 8), 2), "0.38");
        assert_eq!(format_fixed(&r(-1, 3), 3), "-0.333");
    }

    #[test]
    fn bounds() {
        let b = BoundConstants::for_f8();
        assert!((b.drinfeld_vladuts - 1.828427).abs() < 1e-6);
        assert_eq!(b.zink, "3/2");
        assert_eq!(b.kummer, "1/3");
        assert!(b.limit_equals_zink);
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert!(b.below_drinfeld_vladuts(&r(1828, 1000)));
        assert!(!b.below_drinfeld_vladuts(&r(1829, 1000)));
    }

    #[test]
    fn table_rows() {
        let t = asymptotics_table(2, Execution::Sequential).unwrap();
        let row = |s: &TowerStats| {
            (s.i, s.n_i.to_string(), s.genus_closed.to_string(), s.n8.to_string(), s.ratio_float.clone().unwrap())
        };
        assert_eq!(row(&t.rows[0]), (1, "4".into(), "1".into(), "14".into(), "14.000000".into()));
        assert_eq!(row(&t.rows[1]), (2, "6".into(), "5".into(), "26".into(), "5.200000".into()));
        let base = asymptotics_table(0, Execution::Sequential).unwrap();
        assert_eq!(base.rows.len(), 1);
        assert_eq!(base.rows[0].n8, BigUint::from(9u32));
        assert!(base.rows[0].ratio_float.is_none());
    }
}
