//! Chow ring of a split smooth projective quadric of dimension `n`.
//!
//! The additive basis is `h^0, ..., h^{[n/2]}` (powers of the hyperplane
//! class) together with `l_0, ..., l_{[n/2]}` (classes of linear subspaces,
//! `l_i` of dimension `i`). For even `n` only one of the two middle classes is
//! carried; the square of `l_{n/2}` is fixed by a [`MiddleSquare`] convention.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{binom_mod2, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("quadric dimension must be at least 1")]
    ZeroDimensional,
    #[error("cycles live on different quadrics ({left} vs {right})")]
    RingMismatch {
        left: QuadricRing,
        right: QuadricRing,
    },
    #[error("cannot add cycles of codimension {left} and {right}")]
    CodimMismatch { left: u32, right: u32 },
    #[error("{class} is not a basis class of the quadric of dimension {dim}")]
    InvalidClass { class: BasisClass, dim: u32 },
    #[error("subquadric of dimension {sub} does not fit in a quadric of dimension {ambient}")]
    SubquadricTooLarge { sub: u32, ambient: u32 },
}

/// Integral value of `l_{n/2}^2` for even `n`.
///
/// `Forced` is `l_0` when `n/2` is even and `0` otherwise, which is what the
/// instability axiom `S^{n/2}(l_{n/2}) = l_{n/2}^2` forces mod 2. `Opposite`
/// swaps the two cases and exists only to show results do not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MiddleSquare {
    #[default]
    Forced,
    Opposite,
}

/// Which coefficient table the quadric Steenrod squares use.
///
/// `FlippedHyperplaneBinomial` replaces `binom(k, a)` in `S^a(h^k)` by its
/// complement mod 2 for `a >= 1`. It is a deliberately wrong table used to
/// check that the harness notices a broken formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SteenrodRule {
    #[default]
    Standard,
    FlippedHyperplaneBinomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadricRing {
    dim: u32,
    middle_square: MiddleSquare,
}

impl QuadricRing {
    pub fn new(dim: u32) -> Result<Self, ChowError> {
        if dim == 0 {
            return Err(ChowError::ZeroDimensional);
        }
        Ok(Self {
            dim,
            middle_square: MiddleSquare::Forced,
        })
    }

    pub fn with_middle_square(self, middle_square: MiddleSquare) -> Self {
        Self {
            middle_square,
            ..self
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `[n/2]`
    pub fn half(&self) -> u32 {
        self.dim / 2
    }

    pub fn middle_square(&self) -> MiddleSquare {
        self.middle_square
    }

    pub fn contains(&self, class: BasisClass) -> bool {
        class.index() <= self.half()
    }

    pub fn basis(&self) -> impl Iterator<Item = BasisClass> {
        let half = self.half();
        (0..=half)
            .map(BasisClass::H)
            .chain((0..=half).map(BasisClass::L))
    }

    pub fn basis_in_codim(&self, codim: u32) -> impl Iterator<Item = BasisClass> + '_ {
        self.basis().filter(move |b| b.codim(self) == codim)
    }
}

impl fmt::Display for QuadricRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q^{}", self.dim)?;
        if self.middle_square == MiddleSquare::Opposite && self.dim.is_multiple_of(2) {
            f.write_str("(opposite middle square)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisClass {
    /// `h^k`, codimension `k`
    H(u32),
    /// `l_i`, dimension `i`
    L(u32),
}

impl BasisClass {
    pub fn index(&self) -> u32 {
        match *self {
            BasisClass::H(k) | BasisClass::L(k) => k,
        }
    }

    pub fn codim(&self, ring: &QuadricRing) -> u32 {
        match *self {
            BasisClass::H(k) => k,
            BasisClass::L(i) => ring.dim - i,
        }
    }

    pub fn is_h(&self) -> bool {
        matches!(self, BasisClass::H(_))
    }
}

impl fmt::Display for BasisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisClass::H(k) => write!(f, "h^{k}"),
            BasisClass::L(i) => write!(f, "l_{i}"),
        }
    }
}

/// A homogeneous integral cycle on a split quadric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadricCycle {
    ring: QuadricRing,
    codim: u32,
    terms: BTreeMap<BasisClass, BigInt>,
}

impl QuadricCycle {
    pub fn zero(ring: QuadricRing, codim: u32) -> Self {
        Self {
            ring,
            codim,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ring: QuadricRing, class: BasisClass) -> Result<Self, ChowError> {
        Self::scaled_basis(ring, class, BigInt::one())
    }

    pub fn scaled_basis(
        ring: QuadricRing,
        class: BasisClass,
        coeff: BigInt,
    ) -> Result<Self, ChowError> {
        if !ring.contains(class) {
            return Err(ChowError::InvalidClass {
                class,
                dim: ring.dim,
            });
        }
        let mut c = Self::zero(ring, class.codim(&ring));
        c.add_term(class, coeff);
        Ok(c)
    }

    /// The unit `h^0`.
    pub fn one(ring: QuadricRing) -> Self {
        Self::basis(ring, BasisClass::H(0)).expect("h^0 is always a basis class")
    }

    pub fn ring(&self) -> &QuadricRing {
        &self.ring
    }

    /// The same cycle on a quadric of equal dimension, e.g. under the other
    /// middle-square convention.
    pub fn with_ring(&self, ring: QuadricRing) -> Result<Self, ChowError> {
        if ring.dim() != self.ring.dim() {
            return Err(ChowError::RingMismatch {
                left: self.ring,
                right: ring,
            });
        }
        Ok(Self {
            ring,
            ..self.clone()
        })
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisClass, &BigInt)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coefficient(&self, class: BasisClass) -> BigInt {
        self.terms.get(&class).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, class: BasisClass, coeff: BigInt) {
        debug_assert_eq!(class.codim(&self.ring), self.codim);
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(class).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&class);
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), ChowError> {
        if self.ring != other.ring {
            return Err(ChowError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    /// Sum of two cycles; a zero summand adapts to the other's codimension.
    pub fn add(&self, other: &Self) -> Result<Self, ChowError> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.codim != other.codim {
            return Err(ChowError::CodimMismatch {
                left: self.codim,
                right: other.codim,
            });
        }
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChowError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        let mut out = Self::zero(self.ring, self.codim);
        for (b, c) in self.terms() {
            out.add_term(b, c * factor);
        }
        out
    }

    /// Coefficients reduced into `0..modulus`.
    pub fn reduce_mod(&self, modulus: u32) -> Self {
        let m = BigInt::from(modulus);
        let mut out = Self::zero(self.ring, self.codim);
        for (b, c) in self.terms() {
            out.add_term(b, c.mod_floor(&m));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ChowError> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.ring, self.codim + other.codim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let coeff = ca * cb;
                for (c, cc) in basis_product(&self.ring, a, b).terms() {
                    out.add_term(c, cc * &coeff);
                }
            }
        }
        Ok(out)
    }

    /// Degree of the zero-cycle part: the coefficient of `l_0`.
    pub fn degree(&self) -> BigInt {
        if self.codim != self.ring.dim {
            return BigInt::zero();
        }
        self.coefficient(BasisClass::L(0))
    }
}

impl fmt::Display for QuadricCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (b, c)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            if abs.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{abs}*{b}")?;
            }
        }
        Ok(())
    }
}

/// `h^k` written in the basis: `h^k` itself for `k <= [n/2]`, `2 l_{n-k}`
/// for `[n/2] < k <= n`, and zero past the dimension.
pub fn reduce_h_power(ring: &QuadricRing, k: u32) -> QuadricCycle {
    let mut out = QuadricCycle::zero(*ring, k);
    if k <= ring.half() {
        out.add_term(BasisClass::H(k), BigInt::one());
    } else if k <= ring.dim {
        out.add_term(BasisClass::L(ring.dim - k), BigInt::from(2));
    }
    out
}

fn basis_product(ring: &QuadricRing, a: BasisClass, b: BasisClass) -> QuadricCycle {
    let codim = a.codim(ring) + b.codim(ring);
    let mut out = QuadricCycle::zero(*ring, codim);
    match (a, b) {
        (BasisClass::H(x), BasisClass::H(y)) => return reduce_h_power(ring, x + y),
        (BasisClass::H(x), BasisClass::L(y)) | (BasisClass::L(y), BasisClass::H(x)) => {
            if y >= x {
                out.add_term(BasisClass::L(y - x), BigInt::one());
            }
        }
        (BasisClass::L(x), BasisClass::L(y)) => {
            // Both indices are at most [n/2], so a product of dimension >= 0
            // only happens for l_{n/2} * l_{n/2} with n even.
            if x + y >= ring.dim {
                debug_assert!(ring.dim.is_multiple_of(2) && x == y && x == ring.half());
                let half_even = ring.half().is_multiple_of(2);
                let nonzero = match ring.middle_square {
                    MiddleSquare::Forced => half_even,
                    MiddleSquare::Opposite => !half_even,
                };
                if nonzero {
                    out.add_term(BasisClass::L(0), BigInt::one());
                }
            }
        }
    }
    out
}

/// `S^a` of a basis class in the mod-2 Chow ring; coefficients are 0 or 1.
pub fn steenrod_sq(ring: &QuadricRing, a: u32, class: BasisClass) -> QuadricCycle {
    steenrod_sq_with(SteenrodRule::Standard, ring, a, class)
}

pub fn steenrod_sq_with(
    rule: SteenrodRule,
    ring: &QuadricRing,
    a: u32,
    class: BasisClass,
) -> QuadricCycle {
    let mut out = QuadricCycle::zero(*ring, class.codim(ring) + a);
    match class {
        BasisClass::H(k) => {
            let mut bit = binom_mod2(k as i64, a as u64);
            if rule == SteenrodRule::FlippedHyperplaneBinomial && a >= 1 {
                bit ^= 1;
            }
            // h^{k+a} past the middle is even, hence zero mod 2.
            if bit == 1 && k + a <= ring.half() {
                out.add_term(BasisClass::H(k + a), BigInt::one());
            }
        }
        BasisClass::L(b) => {
            if b >= a && binom_mod2((ring.dim + 1 - b) as i64, a as u64) == 1 {
                out.add_term(BasisClass::L(b - a), BigInt::one());
            }
        }
    }
    out
}

/// `S^a` extended linearly to a cycle, result reduced mod 2.
pub fn steenrod_sq_cycle(rule: SteenrodRule, a: u32, cycle: &QuadricCycle) -> QuadricCycle {
    let ring = *cycle.ring();
    let mut out = QuadricCycle::zero(ring, cycle.codim() + a);
    for (b, c) in cycle.terms() {
        if c.is_odd() {
            for (image, ci) in steenrod_sq_with(rule, &ring, a, b).terms() {
                out.add_term(image, ci.clone());
            }
        }
    }
    out.reduce_mod(2)
}

/// `c_i(-T_P)` for the quadric `P` of dimension `d`, together with the scalar
/// in front of `h^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernClass {
    pub degree: u32,
    /// Coefficient of `h^i` in the total Chern class.
    pub coefficient: BigInt,
    /// `coefficient * h^i` written in the basis of `CH(P)`.
    pub cycle: QuadricCycle,
}

/// Chern classes of the negative tangent bundle of a split quadric of
/// dimension `d`: the degree-`i` parts of `(1 + 2h) (1 + h)^{-(d+2)}`.
pub fn chern_neg_tangent(d: u32) -> Result<Vec<ChernClass>, ChowError> {
    let ring = QuadricRing::new(d)?;
    let bound = d as usize;
    let tangent_inverse = TruncatedSeries::linear(bound, 1)
        .pow(d + 2)
        .inverse()
        .expect("(1+h)^k has unit constant term");
    let total = TruncatedSeries::linear(bound, 2)
        .mul(&tangent_inverse)
        .expect("equal bounds");
    Ok((0..=d)
        .map(|i| {
            let coefficient = total.coefficient(i as usize);
            let cycle = reduce_h_power(&ring, i).scale(&coefficient);
            ChernClass {
                degree: i,
                coefficient,
                cycle,
            }
        })
        .collect())
}

/// Pushforward along a linear-section embedding `P -> Q` of split quadrics.
pub fn pushforward_embedding(
    sub: &QuadricRing,
    ambient: &QuadricRing,
    cycle: &QuadricCycle,
) -> Result<QuadricCycle, ChowError> {
    if cycle.ring() != sub {
        return Err(ChowError::RingMismatch {
            left: *cycle.ring(),
            right: *sub,
        });
    }
    if sub.dim() > ambient.dim() {
        return Err(ChowError::SubquadricTooLarge {
            sub: sub.dim(),
            ambient: ambient.dim(),
        });
    }
    let shift = ambient.dim() - sub.dim();
    let mut out = QuadricCycle::zero(*ambient, cycle.codim() + shift);
    for (b, c) in cycle.terms() {
        let image = match b {
            BasisClass::H(i) => reduce_h_power(ambient, shift + i),
            BasisClass::L(i) => QuadricCycle::basis(*ambient, BasisClass::L(i))?,
        };
        out = out.add(&image.scale(c))?;
    }
    Ok(out)
}

/// `n = 2^t - 1 + s` with `0 <= s < 2^t`; `d = 2^t - 1` is the dimension of
/// the subquadric used in the congruence arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subquadric {
    pub t: u32,
    pub d: u32,
}

pub fn subquadric_dim(n: u32) -> Result<Subquadric, ChowError> {
    if n == 0 {
        return Err(ChowError::ZeroDimensional);
    }
    let t = (n as u64 + 1).ilog2();
    let d = (1u32 << t) - 1;
    debug_assert!(d <= n && n - d < (1 << t));
    // n/2 < 2d
    debug_assert!((n as u64) < 4 * d as u64);
    Ok(Subquadric { t, d })
}
