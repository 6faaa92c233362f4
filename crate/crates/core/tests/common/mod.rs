//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use tower_core::gf2m::FieldDescriptor;
use tower_core::laurent::LaurentSeries;
use tower_core::rami::{IndexSequence, Symbol};

/// Chains `(x_0, ..., x_i)` over F_{2^k} with `x_j != 0` for `j < i`, by
/// depth-first search trying every field element at each level.
pub fn naive_affine_count(i: usize, k: u32) -> u64 {
    let f = FieldDescriptor::new(k, None).unwrap();
    fn walk(f: &FieldDescriptor, x: u32, depth: usize) -> u64 {
        if depth == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let rhs = x ^ 1 ^ f.inv_raw(x);
        (0..f.order() as u32).filter(|&y| f.mul_raw(y, y) ^ y == rhs).map(|y| walk(f, y, depth - 1)).sum()
    }
    (0..f.order() as u32).map(|x0| walk(&f, x0, i)).sum()
}

/// `n_i` as stated in closed form, evaluated with exact rationals.
pub fn ramified_closed_form(i: usize) -> BigUint {
    if i.is_multiple_of(2) {
        BigUint::from((i + 2) / 4 + 2) * (BigUint::one() << (i / 2))
    } else {
        BigUint::from(i / 4 + 2) * (BigUint::one() << i.div_ceil(2))
    }
}

fn pow2_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Genus in closed form, with the half-integer powers of two kept exact.
pub fn genus_closed_form(i: usize) -> BigInt {
    let ii = i as i64;
    let lead = BigRational::from_integer((BigInt::one() << (i + 2)) + 1);
    let corr = if i.is_multiple_of(2) {
        BigRational::from_integer(BigInt::from(ii + 10)) * pow2_rational(ii / 2 - 1)
    } else {
        BigRational::from_integer(BigInt::from(ii + 2 * (ii / 4) + 15)) * pow2_rational((ii - 3) / 2)
    };
    let g = lead - corr;
    assert!(g.is_integer(), "genus formula must be integral at i = {i}");
    g.to_integer()
}

/// Hurwitz sum `1 + Σ_{j=1}^{i-1} 2^{i-j-1} n_j` on the closed-form `n_j`.
pub fn genus_hurwitz_sum(i: usize) -> BigInt {
    if i == 0 {
        return BigInt::zero();
    }
    let s: BigUint = (1..i).map(|j| ramified_closed_form(j) << (i - j - 1)).sum();
    BigInt::one() + BigInt::from(s)
}

/// Alternating sequences of the given level: `1` in the one-slots and
/// `ρ`/`ρ²` elsewhere, starting with `1` or with `ρ`/`ρ²`.
pub fn alternating_sequences(level: usize, start_with_one: bool) -> Vec<IndexSequence> {
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    for j in 0..=level {
        let one_slot = (j % 2 == 0) == start_with_one;
        let choices: &[Symbol] = if one_slot { &[Symbol::One] } else { &[Symbol::Rho, Symbol::RhoSq] };
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |&c| {
                    let mut v = p.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| IndexSequence::new(v).unwrap()).collect()
}

/// `1/m_j` for every expansion.
pub fn inverses(m: &[LaurentSeries]) -> Vec<LaurentSeries> {
    m.iter().map(|s| s.inv().unwrap()).collect()
}

/// Series `Σ c_j / m_j` given the inverses `1/m_j`.
pub fn series_combination(inv: &[LaurentSeries], coeffs: &[(usize, tower_core::FieldElement)]) -> LaurentSeries {
    let f4 = FieldDescriptor::f4();
    let precision = inv.iter().map(|s| s.precision()).min().unwrap();
    coeffs.iter().fold(LaurentSeries::zero(f4, precision), |acc, &(j, c)| acc.add(&inv[j].scale(c).unwrap()).unwrap())
}
