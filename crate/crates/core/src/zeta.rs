//! L-polynomials of low tower levels recovered from point counts.
//!
//! With `s_k = q^k + 1 − N_k` the power sums of the inverse roots, Newton's
//! identities `n b_n = −Σ_{i=1}^{n} s_i b_{n−i}` give `b_1, ..., b_g` and the
//! functional equation gives the rest. Comparing the predicted counts and
//! the root magnitudes with enumeration checks the genus of the ledger
//! against the actual curves.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::points::{affine_counts, PointsError};
use crate::rami::{genus, GenusMethod};

/// Tolerance on `| |α| − √q |` for the inverse roots.
pub const ROOT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("{0} is not a prime power")]
    InvalidFieldSize(u64),
    #[error("need {needed} point counts, got {got}")]
    NotEnoughCounts { needed: usize, got: usize },
    #[error("coefficient b_{index} is not an integer")]
    NonIntegral { index: usize },
    #[error("integer overflow in the power sums")]
    Overflow,
    #[error("N_{k}: counted {counted}, L-polynomial predicts {predicted}")]
    CountMismatch { k: usize, counted: i128, predicted: i128 },
    #[error("functional equation fails at b_{index}")]
    FunctionalEquation { index: usize },
    #[error("inverse root of magnitude {magnitude:.12}, expected {expected:.12}")]
    RootMagnitude { magnitude: f64, expected: f64 },
    #[error("root finder did not converge on a degree {degree} factor")]
    NoConvergence { degree: usize },
    #[error("N_{k} = {count} violates the Hasse-Weil bound")]
    HasseWeil { k: usize, count: i128 },
    #[error("level {0} is outside the supported levels 1 and 2")]
    LevelOutOfRange(usize),
    #[error(transparent)]
    Points(#[from] PointsError),
}

/// `L(T) = Σ b_i T^i`, the numerator of the zeta function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    pub q: u64,
    pub g: usize,
    pub coeffs: Vec<i128>,
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2");
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

fn checked_pow(q: u64, e: usize) -> Result<i128, ZetaError> {
    i128::from(q).checked_pow(e as u32).ok_or(ZetaError::Overflow)
}

/// Builds `L` of genus `g` over F_q from `N_1, N_2, ...`. At least `g`
/// counts are needed; every supplied count must be reproduced.
pub fn l_polynomial_from_counts(q: u64, g: usize, counts: &[i128]) -> Result<LPolynomial, ZetaError> {
    if !is_prime_power(q) {
        return Err(ZetaError::InvalidFieldSize(q));
    }
    if counts.len() < g {
        return Err(ZetaError::NotEnoughCounts { needed: g, got: counts.len() });
    }
    let s: Vec<i128> = counts
        .iter()
        .enumerate()
        .map(|(idx, &n)| Ok(checked_pow(q, idx + 1)? + 1 - n))
        .collect::<Result<_, ZetaError>>()?;

    let mut b = vec![0i128; 2 * g + 1];
    b[0] = 1;
    for n in 1..=g {
        let mut acc = 0i128;
        for i in 1..=n {
            acc = s[i - 1].checked_mul(b[n - i]).and_then(|x| acc.checked_add(x)).ok_or(ZetaError::Overflow)?;
        }
        if acc % n as i128 != 0 {
            return Err(ZetaError::NonIntegral { index: n });
        }
        b[n] = -acc / n as i128;
    }
    for i in 0..g {
        b[2 * g - i] = checked_pow(q, g - i)?.checked_mul(b[i]).ok_or(ZetaError::Overflow)?;
    }
    let l = LPolynomial { q, g, coeffs: b };

    let predicted = l.predicted_counts(counts.len())?;
    for (k, (&counted, &predicted)) in counts.iter().zip(&predicted).enumerate() {
        if counted != predicted {
            return Err(ZetaError::CountMismatch { k: k + 1, counted, predicted });
        }
    }
    Ok(l)
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// First index where `b_{2g−i} = q^{g−i} b_i` fails.
    pub fn functional_equation_defect(&self) -> Option<usize> {
        (0..=self.g).find(|&i| {
            checked_pow(self.q, self.g - i).ok().and_then(|p| p.checked_mul(self.coeffs[i]))
                != Some(self.coeffs[2 * self.g - i])
        })
    }

    /// Power sums `s_1, ..., s_n` of the inverse roots.
    pub fn power_sums(&self, n: usize) -> Result<Vec<i128>, ZetaError> {
        let b = |i: usize| self.coeffs.get(i).copied().unwrap_or(0);
        let mut s: Vec<i128> = Vec::with_capacity(n);
        for k in 1..=n {
            // k b_k + Σ_{i=1}^{k} s_i b_{k−i} = 0
            let mut acc = (k as i128).checked_mul(b(k)).ok_or(ZetaError::Overflow)?;
            for i in 1..k {
                acc = s[i - 1].checked_mul(b(k - i)).and_then(|x| acc.checked_add(x)).ok_or(ZetaError::Overflow)?;
            }
            s.push(-acc);
        }
        Ok(s)
    }

    /// `N_1, ..., N_n` over F_{q^k}.
    pub fn predicted_counts(&self, n: usize) -> Result<Vec<i128>, ZetaError> {
        self.power_sums(n)?.into_iter().enumerate().map(|(idx, s)| Ok(checked_pow(self.q, idx + 1)? + 1 - s)).collect()
    }

    /// Inverse roots, repeated by multiplicity.
    pub fn inverse_roots(&self) -> Result<Vec<Complex64>, ZetaError> {
        // inverse roots are the roots of T^{2g} L(1/T)
        let reversed: Vec<BigRational> =
            self.coeffs.iter().rev().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let mut out = Vec::with_capacity(self.degree());
        for (mult, factor) in poly::squarefree_factors(&reversed) {
            let roots = poly::roots(&factor)?;
            for r in roots {
                out.extend(std::iter::repeat_n(r, mult));
            }
        }
        Ok(out)
    }

    /// Largest `| |α| − √q |` over the inverse roots; 0 at genus 0.
    pub fn root_deviation(&self) -> Result<f64, ZetaError> {
        let expected = (self.q as f64).sqrt();
        Ok(self.inverse_roots()?.iter().map(|r| (r.norm() - expected).abs()).fold(0.0, f64::max))
    }
}

impl std::fmt::Display for LPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("T")?,
                (1, _) => write!(f, "{a}T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{a}T^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

mod poly {
    //! Dense polynomials over Q, lowest degree first, and a complex root
    //! finder for square-free factors.

    use super::*;

    type Poly = Vec<BigRational>;

    fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn derivative(p: &Poly) -> Poly {
        trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
    }

    fn monic(p: Poly) -> Poly {
        let lead = p.last().expect("nonzero").clone();
        p.into_iter().map(|c| c / &lead).collect()
    }

    fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let mut r = trim(a.clone());
        let b = trim(b.clone());
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut quot = vec![BigRational::zero(); r.len() - db];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().expect("nonempty") / b.last().expect("nonzero");
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &c * bc;
            }
            quot[shift] = c;
            r = trim(r);
        }
        (trim(quot), r)
    }

    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        while !b.is_empty() {
            let (_, r) = div_rem(&a, &b);
            a = b;
            b = r;
        }
        monic(a)
    }

    fn sub(a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    a.get(i).cloned().unwrap_or_else(BigRational::zero)
                        - b.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    /// Yun's algorithm: `(multiplicity, square-free factor)` pairs of
    /// positive degree.
    pub(super) fn squarefree_factors(f: &Poly) -> Vec<(usize, Poly)> {
        let f = monic(trim(f.clone()));
        if f.len() <= 1 {
            return Vec::new();
        }
        let df = derivative(&f);
        let a0 = gcd(&f, &df);
        let mut b = div_rem(&f, &a0).0;
        let mut c = div_rem(&df, &a0).0;
        let mut d = sub(&c, &derivative(&b));
        let mut out = Vec::new();
        let mut mult = 1;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            b = div_rem(&b, &a).0;
            c = div_rem(&d, &a).0;
            d = sub(&c, &derivative(&b));
            if a.len() > 1 {
                out.push((mult, a));
            }
            mult += 1;
        }
        out
    }

    fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
        p.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// Roots of a square-free polynomial: Durand-Kerner, then Newton.
    pub(super) fn roots(p: &Poly) -> Result<Vec<Complex64>, ZetaError> {
        let p = monic(p.clone());
        let n = p.len() - 1;
        let c: Vec<Complex64> = p.iter().map(|x| Complex64::new(x.to_f64().expect("finite"), 0.0)).collect();
        let dc: Vec<Complex64> = c.iter().enumerate().skip(1).map(|(i, &x)| x * i as f64).collect();
        // Cauchy bound for the starting circle
        let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
        let mut z: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
        let mut converged = false;
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for k in 0..n {
                let denom = (0..n).filter(|&j| j != k).fold(Complex64::one(), |acc, j| acc * (z[k] - z[j]));
                let step = eval(&c, z[k]) / denom;
                z[k] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                converged = true;
                break;
            }
        }
        for r in &mut z {
            for _ in 0..5 {
                let d = eval(&dc, *r);
                if d.norm() == 0.0 {
                    break;
                }
                *r -= eval(&c, *r) / d;
            }
        }
        let residual_ok = z.iter().all(|&r| eval(&c, r).norm() < 1e-8 * radius.powi(n as i32));
        if !converged && !residual_ok {
            return Err(ZetaError::NoConvergence { degree: n });
        }
        Ok(z)
    }
}

/// Non-affine points of `C_level` over F_{2^k}.
///
/// Level 1 has the two F_2-rational points above `x_0 ∈ {0, ∞}`. Level 2
/// adds `(ρ,0,∞)` and `(ρ²,0,∞)`, defined over F_4.
pub fn boundary_count(level: usize, k: u32) -> Result<i128, ZetaError> {
    match level {
        1 => Ok(2),
        2 => Ok(if k.is_multiple_of(2) { 4 } else { 2 }),
        _ => Err(ZetaError::LevelOutOfRange(level)),
    }
}

/// `N_1, ..., N_n` of `C_level` over F_{2^k} by enumeration.
pub fn enumerated_counts(level: usize, n: usize, exec: Execution) -> Result<Vec<i128>, ZetaError> {
    if !(1..=2).contains(&level) {
        return Err(ZetaError::LevelOutOfRange(level));
    }
    let ks: Vec<u32> = (1..=n as u32).collect();
    exec.map_slice(&ks, |&k| {
        let affine = affine_counts(level, k, Execution::Sequential)?[level - 1];
        Ok(affine as i128 + boundary_count(level, k)?)
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub level: usize,
    pub q: u64,
    pub g: usize,
    pub l_polynomial: LPolynomial,
    /// `N_1, ..., N_{2g+1}` by enumeration.
    pub counts: Vec<i128>,
    /// Same range predicted by `L`.
    pub predicted_counts: Vec<i128>,
    /// `|α|` of every inverse root.
    pub roots_abs: Vec<f64>,
    pub max_root_deviation: f64,
}

/// Checks the genus of `C_level` (from the closed form, or `genus` when
/// given) against the curve's point counts.
pub fn genus_crosscheck(
    level: usize,
    genus_override: Option<usize>,
    exec: Execution,
) -> Result<CrosscheckReport, ZetaError> {
    if !(1..=2).contains(&level) {
        return Err(ZetaError::LevelOutOfRange(level));
    }
    let q = 2u64;
    let g = match genus_override {
        Some(g) => g,
        None => genus(level, GenusMethod::Closed).to_usize().expect("small genus"),
    };
    let n = 2 * g + 1;
    let counts = enumerated_counts(level, n, exec)?;
    let l = l_polynomial_from_counts(q, g, &counts[..g])?;
    if let Some(index) = l.functional_equation_defect() {
        return Err(ZetaError::FunctionalEquation { index });
    }
    let predicted = l.predicted_counts(n)?;
    for (k, (&counted, &p)) in counts.iter().zip(&predicted).enumerate() {
        if counted != p {
            return Err(ZetaError::CountMismatch { k: k + 1, counted, predicted: p });
        }
        // (N − q^k − 1)^2 <= 4 g^2 q^k
        let qk = checked_pow(q, k + 1)?;
        let e = counted - qk - 1;
        if e * e > 4 * (g as i128) * (g as i128) * qk {
            return Err(ZetaError::HasseWeil { k: k + 1, count: counted });
        }
    }
    let roots = l.inverse_roots()?;
    let expected = (q as f64).sqrt();
    let roots_abs: Vec<f64> = roots.iter().map(|r| r.norm()).collect();
    let mut max_dev: f64 = 0.0;
    for &m in &roots_abs {
        if (m - expected).abs() > ROOT_TOLERANCE {
            return Err(ZetaError::RootMagnitude { magnitude: m, expected });
        }
        max_dev = max_dev.max((m - expected).abs());
    }
    Ok(CrosscheckReport {
        level,
        q,
        g,
        l_polynomial: l,
        counts,
        predicted_counts: predicted,
        roots_abs,
        max_root_deviation: max_dev,
    })
}
