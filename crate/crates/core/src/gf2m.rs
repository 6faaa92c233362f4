//! Binary extension fields GF(2^m) in a polynomial basis.
//!
//! An element is the bit pattern of its coordinates: bit `b` is the
//! coefficient of `a^b`, where `a` is the class of the indeterminate modulo
//! the field's modulus. Multiplication is carry-less followed by reduction.
//!
//! Fields are plain `Copy` descriptors. Elements carry their descriptor and
//! every binary operation checks that both operands live in the same field.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} outside 1..=32")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} does not have degree {degree}")]
    ModulusDegree { modulus: u64, degree: u32 },
    #[error("modulus {0:#x} is reducible over F_2")]
    ReducibleModulus(u64),
    #[error("bit pattern {bits:#x} has set bits at or above position {degree}")]
    InvalidElement { bits: u64, degree: u32 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("operands belong to different fields (GF(2^{left}) vs GF(2^{right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("F_4 does not embed into GF(2^{0}): degree is odd")]
    NoF4Subfield(u32),
}

/// Carry-less product of two polynomials over F_2 of degree < 32.
#[inline]
pub fn clmul(a: u32, b: u32) -> u64 {
    let a = a as u64;
    let mut b = b;
    let mut acc = 0u64;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` over F_2; `b` nonzero.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    loop {
        let da = poly_degree(a);
        if da < db {
            return a;
        }
        a ^= b << (da - db);
    }
}

/// Irreducibility by trial division with every polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(poly: u64) -> bool {
    let deg = poly_degree(poly);
    if deg < 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // x divides anything with zero constant term
    if poly & 1 == 0 {
        return false;
    }
    for d in 1..=(deg / 2) as u32 {
        for low in 0u64..(1u64 << d) {
            let divisor = (1u64 << d) | low;
            if poly_rem(poly, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// The numerically least irreducible polynomial of degree `m`.
pub fn least_irreducible(m: u32) -> u64 {
    let top = 1u64 << m;
    (0..top).map(|low| top | low).find(|&p| is_irreducible(p)).expect("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A binary extension field GF(2^m) with a fixed modulus and primitive
/// element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldDescriptor {
    m: u32,
    modulus: u64,
    generator: u32,
}

impl FieldDescriptor {
    /// Builds GF(2^m). Without an explicit modulus the least irreducible
    /// polynomial of degree `m` is used (`t^2+t+1`, `t^3+t+1`, `t^4+t+1`, ...).
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Self, FieldError> {
        if m == 0 || m > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let modulus = match modulus {
            Some(p) => {
                if poly_degree(p) != m as i32 {
                    return Err(FieldError::ModulusDegree { modulus: p, degree: m });
                }
                if !is_irreducible(p) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                p
            }
            None => least_irreducible(m),
        };
        let mut field = FieldDescriptor { m, modulus, generator: 1 };
        field.generator = field.least_primitive();
        Ok(field)
    }

    pub fn f2() -> Self {
        Self::new(1, None).expect("GF(2)")
    }

    pub fn f4() -> Self {
        Self::new(2, None).expect("GF(4)")
    }

    pub fn f8() -> Self {
        Self::new(3, None).expect("GF(8)")
    }

    fn least_primitive(&self) -> u32 {
        let n = self.order() - 1;
        let factors = prime_factors(n);
        (1..=self.mask())
            .find(|&g| factors.iter().all(|&p| self.pow_raw(g, n / p) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    /// Bit mask of valid coordinates.
    #[inline]
    pub fn mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement, FieldError> {
        if bits >> self.m != 0 {
            return Err(FieldError::InvalidElement { bits, degree: self.m });
        }
        Ok(FieldElement { field: *self, bits: bits as u32 })
    }

    #[inline]
    pub(crate) fn wrap(&self, bits: u32) -> FieldElement {
        debug_assert_eq!(bits & !self.mask(), 0);
        FieldElement { field: *self, bits }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The fixed primitive element: least bit pattern of multiplicative
    /// order `2^m - 1`.
    pub fn generator(&self) -> FieldElement {
        self.wrap(self.generator)
    }

    /// All elements in bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |b| self.wrap(b as u32))
    }

    /// Reduces a raw product of degree < 2m.
    #[inline]
    fn reduce(&self, mut v: u64) -> u32 {
        let m = self.m as i32;
        let mut d = poly_degree(v);
        while d >= m {
            v ^= self.modulus << (d - m);
            d = poly_degree(v);
        }
        v as u32
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        self.reduce(clmul(a, b))
    }

    #[inline]
    pub fn square_raw(&self, a: u32) -> u32 {
        self.mul_raw(a, a)
    }

    pub fn pow_raw(&self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base;
        while exp != 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, b);
            }
            b = self.square_raw(b);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat. Callers must reject zero.
    #[inline]
    pub fn inv_raw(&self, a: u32) -> u32 {
        self.pow_raw(a, self.order() - 2)
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(m-1))`, as 0 or 1.
    pub fn trace_raw(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.m {
            acc ^= x;
            x = self.square_raw(x);
        }
        debug_assert!(acc <= 1);
        acc
    }

    fn check(&self, other: &FieldDescriptor) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch { left: self.m, right: other.m })
        }
    }
}

/// An element of a [`FieldDescriptor`]'s field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldDescriptor,
    bits: u32,
}

// add and mul are fallible across fields, so they stay inherent methods
#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    pub fn add(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.field.check(&rhs.field)?;
        Ok(self.field.wrap(self.bits ^ rhs.bits))
    }

    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.field.check(&rhs.field)?;
        Ok(self.field.wrap(self.field.mul_raw(self.bits, rhs.bits)))
    }

    pub fn square(self) -> FieldElement {
        self.field.wrap(self.field.square_raw(self.bits))
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        self.field.wrap(self.field.pow_raw(self.bits, exp))
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.bits == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.field.wrap(self.field.inv_raw(self.bits)))
    }

    pub fn trace(self) -> u32 {
        self.field.trace_raw(self.bits)
    }

    /// Multiplicative order; `None` for zero.
    pub fn multiplicative_order(self) -> Option<u64> {
        if self.bits == 0 {
            return None;
        }
        let n = self.field.order() - 1;
        let mut ord = n;
        for p in prime_factors(n) {
            while ord.is_multiple_of(p) && self.field.pow_raw(self.bits, ord / p) == 1 {
                ord /= p;
            }
        }
        Some(ord)
    }
}

impl fmt::Display for FieldElement {
    /// Polynomial form in the basis element `a`, e.g. `a^2+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return f.write_str("0");
        }
        let mut first = true;
        for b in (0..self.field.m).rev() {
            if self.bits >> b & 1 == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match b {
                0 => f.write_str("1")?,
                1 => f.write_str("a")?,
                _ => write!(f, "a^{b}")?,
            }
        }
        Ok(())
    }
}

/// Field operations, dispatched through [`arith`].
#[derive(Clone, Copy, Debug)]
pub enum Arith {
    Add(FieldElement, FieldElement),
    Mul(FieldElement, FieldElement),
    Inv(FieldElement),
    Pow(FieldElement, u64),
}

pub fn arith(op: Arith) -> Result<FieldElement, FieldError> {
    match op {
        Arith::Add(a, b) => a.add(b),
        Arith::Mul(a, b) => a.mul(b),
        Arith::Inv(a) => a.inv(),
        Arith::Pow(a, e) => Ok(a.pow(e)),
    }
}

#[derive(Clone, Debug)]
enum AsMethod {
    /// Odd degree: `y = sum_i c^(4^i)`, `i = 0..=(m-1)/2`.
    HalfTrace,
    /// Even degree: echelon basis of the image of `y -> y^2 + y`, indexed
    /// by pivot bit, each row paired with a preimage.
    Linear(Vec<Option<(u32, u32)>>),
}

/// Precomputed solver for `y^2 + y = c` with O(1) trace, meant for hot
/// loops over a whole field.
#[derive(Clone, Debug)]
pub struct ArtinSchreierSolver {
    field: FieldDescriptor,
    trace_mask: u32,
    method: AsMethod,
}

impl ArtinSchreierSolver {
    pub fn new(field: FieldDescriptor) -> Self {
        // trace is F_2-linear: record it on the basis vectors
        let trace_mask = (0..field.m).fold(0u32, |mask, b| mask | field.trace_raw(1 << b) << b);
        let method = if field.m % 2 == 1 {
            AsMethod::HalfTrace
        } else {
            let mut rows: Vec<Option<(u32, u32)>> = vec![None; field.m as usize];
            // kernel is {0, 1}; images of a, a^2, ..., a^(m-1) span the image
            for b in 1..field.m {
                let pre = 1u32 << b;
                let mut img = field.square_raw(pre) ^ pre;
                let mut pre = pre;
                for bit in (0..field.m).rev() {
                    if img >> bit & 1 == 0 {
                        continue;
                    }
                    match rows[bit as usize] {
                        Some((ri, rp)) => {
                            img ^= ri;
                            pre ^= rp;
                        }
                        None => {
                            rows[bit as usize] = Some((img, pre));
                            break;
                        }
                    }
                }
            }
            AsMethod::Linear(rows)
        };
        ArtinSchreierSolver { field, trace_mask, method }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    #[inline]
    pub fn trace_raw(&self, c: u32) -> u32 {
        (c & self.trace_mask).count_ones() & 1
    }

    /// The root with constant coordinate 0, if `trace(c) = 0`. The other
    /// root is that value xor 1.
    #[inline]
    pub fn solve_raw(&self, c: u32) -> Option<u32> {
        if self.trace_raw(c) != 0 {
            return None;
        }
        let y = match &self.method {
            AsMethod::HalfTrace => {
                let mut acc = 0u32;
                let mut x = c;
                for _ in 0..=(self.field.m - 1) / 2 {
                    acc ^= x;
                    x = self.field.square_raw(self.field.square_raw(x));
                }
                acc
            }
            AsMethod::Linear(rows) => {
                let mut rest = c;
                let mut y = 0u32;
                for bit in (0..self.field.m).rev() {
                    if rest >> bit & 1 == 0 {
                        continue;
                    }
                    let (ri, rp) = rows[bit as usize].expect("trace-zero element lies in the image");
                    rest ^= ri;
                    y ^= rp;
                }
                debug_assert_eq!(rest, 0);
                y
            }
        };
        Some(y & !1)
    }

    pub fn solve(&self, c: FieldElement) -> Result<Option<(FieldElement, FieldElement)>, FieldError> {
        self.field.check(&c.field)?;
        Ok(self.solve_raw(c.bits).map(|y| (self.field.wrap(y), self.field.wrap(y ^ 1))))
    }
}

/// Both roots `{y, y+1}` of `y^2 + y = c`, or `None` when `trace(c) = 1`.
/// The root with zero constant coordinate comes first.
pub fn solve_artin_schreier(c: FieldElement) -> Option<(FieldElement, FieldElement)> {
    ArtinSchreierSolver::new(c.field).solve(c).expect("solver built on the element's own field")
}

/// Image of the F_4 element `x` in `target` (even degree). The image of
/// `ρ` is the root of `t^2+t+1` with the smaller bit pattern.
pub fn embed_f4(x: FieldElement, target: FieldDescriptor) -> Result<FieldElement, FieldError> {
    if x.field.m != 2 {
        return Err(FieldError::FieldMismatch { left: x.field.m, right: 2 });
    }
    if !target.m.is_multiple_of(2) {
        return Err(FieldError::NoF4Subfield(target.m));
    }
    let rho = f4_root_in(target);
    // x = b0 + b1·ρ in the basis {1, ρ} of F_4
    let b0 = x.bits & 1;
    let b1 = (x.bits >> 1) & 1;
    Ok(target.wrap(b0 ^ if b1 == 1 { rho } else { 0 }))
}

fn f4_root_in(target: FieldDescriptor) -> u32 {
    let cube_root = target.pow_raw(target.generator, (target.order() - 1) / 3);
    cube_root.min(target.square_raw(cube_root))
}
