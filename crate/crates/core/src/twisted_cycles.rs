//! Cycles on `Q x Y` over the algebraic closure: sums of external products
//! of quadric basis classes with formal coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::formal_coeffs::{steenrod_monomial, CoeffError, FormalPolynomial, LiftPolicy, Monomial};
use crate::quadric_chow::{
    steenrod_sq_with, BasisClass, ChowError, QuadricCycle, QuadricRing, SteenrodRule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("cycles live on different quadrics ({left} vs {right})")]
    RingMismatch {
        left: QuadricRing,
        right: QuadricRing,
    },
    #[error("codimension mismatch: {left} vs {right}")]
    CodimMismatch { left: i64, right: i64 },
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
}

/// Homogeneous integer combination of `b x u`, `b` a quadric basis class and
/// `u` a formal monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedCycle {
    ring: QuadricRing,
    codim: i64,
    terms: BTreeMap<(BasisClass, Monomial), BigInt>,
}

impl TwistedCycle {
    pub fn zero(ring: QuadricRing, codim: i64) -> Self {
        Self {
            ring,
            codim,
            terms: BTreeMap::new(),
        }
    }

    /// External product `q x p`.
    pub fn external(q: &QuadricCycle, p: &FormalPolynomial) -> Self {
        let mut out = Self::zero(*q.ring(), q.codim() as i64 + p.codim());
        for (b, cb) in q.terms() {
            for (m, cm) in p.terms() {
                out.add_term(b, m.clone(), cb * cm);
            }
        }
        out
    }

    pub fn ring(&self) -> &QuadricRing {
        &self.ring
    }

    pub fn codim(&self) -> i64 {
        self.codim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisClass, &Monomial, &BigInt)> {
        self.terms.iter().map(|((b, m), c)| (*b, m, c))
    }

    fn add_term(&mut self, b: BasisClass, m: Monomial, coeff: BigInt) {
        debug_assert_eq!(b.codim(&self.ring) as i64 + m.codim(), self.codim);
        if coeff.is_zero() {
            return;
        }
        let key = (b, m);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), TwistedError> {
        if self.ring != other.ring {
            return Err(TwistedError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TwistedError> {
        self.check_ring(other)?;
        if self.codim != other.codim {
            return Err(TwistedError::CodimMismatch {
                left: self.codim,
                right: other.codim,
            });
        }
        let mut out = self.clone();
        for (b, m, c) in other.terms() {
            out.add_term(b, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TwistedError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        let mut out = Self::zero(self.ring, self.codim);
        for (b, m, c) in self.terms() {
            out.add_term(b, m.clone(), c * factor);
        }
        out
    }

    pub fn reduce_mod(&self, modulus: u32) -> Self {
        let md = BigInt::from(modulus);
        let mut out = Self::zero(self.ring, self.codim);
        for (b, m, c) in self.terms() {
            out.add_term(b, m.clone(), c.mod_floor(&md));
        }
        out
    }

    /// `(q1 x u1)(q2 x u2) = (q1 q2) x (u1 u2)`, extended bilinearly.
    pub fn mul(&self, other: &Self) -> Result<Self, TwistedError> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.ring, self.codim + other.codim);
        for (b1, m1, c1) in self.terms() {
            let q1 = QuadricCycle::basis(self.ring, b1)?;
            for (b2, m2, c2) in other.terms() {
                let q2 = QuadricCycle::basis(self.ring, b2)?;
                let coeff = c1 * c2;
                let mono = m1.mul(m2);
                for (b, cb) in q1.mul(&q2)?.terms() {
                    out.add_term(b, mono.clone(), cb * &coeff);
                }
            }
        }
        Ok(out)
    }

    /// The same cycle read on a quadric of the same dimension with another
    /// middle-square convention.
    pub fn with_ring(&self, ring: QuadricRing) -> Result<Self, TwistedError> {
        if ring.dim() != self.ring.dim() {
            return Err(TwistedError::RingMismatch {
                left: self.ring,
                right: ring,
            });
        }
        Ok(Self {
            ring,
            ..self.clone()
        })
    }

    /// Terms whose quadric factor satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(BasisClass) -> bool) -> Self {
        let mut out = Self::zero(self.ring, self.codim);
        for (b, m, c) in self.terms() {
            if keep(b) {
                out.add_term(b, m.clone(), c.clone());
            }
        }
        out
    }

    /// The `h^k x ...` block.
    pub fn h_part(&self) -> Self {
        self.filter(|b| b.is_h())
    }

    /// The `l_i x ...` block.
    pub fn l_part(&self) -> Self {
        self.filter(|b| !b.is_h())
    }

    /// Replaces each formal monomial `u` by `f(u)`.
    pub fn map_formal<F>(&self, mut f: F) -> Result<Self, TwistedError>
    where
        F: FnMut(&FormalPolynomial) -> Result<FormalPolynomial, CoeffError>,
    {
        let mut out = Self::zero(self.ring, self.codim);
        for (b, m, c) in self.terms() {
            let image = f(&FormalPolynomial::monomial(m.clone(), c.clone()))?;
            let q = QuadricCycle::basis(self.ring, b)?;
            out = out.add(&Self::external(&q, &image))?;
        }
        Ok(out)
    }

    /// Integral representative of a mod-2 cycle, coordinate by coordinate.
    pub fn lift(&self, policy: &LiftPolicy) -> Result<Self, TwistedError> {
        self.map_formal(|p| policy.lift(p))
    }
}

impl fmt::Display for TwistedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (b, m, c)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{b} x {m}")?;
        }
        Ok(())
    }
}

/// `S^r` of a mod-2 cycle by the Cartan formula
/// `S^r(q x u) = sum_a S^a(q) x S^{r-a}(u)`; result reduced mod 2.
pub fn cartan_sq(r: u32, c: &TwistedCycle) -> TwistedCycle {
    cartan_sq_with(SteenrodRule::Standard, r, c)
}

pub fn cartan_sq_with(rule: SteenrodRule, r: u32, c: &TwistedCycle) -> TwistedCycle {
    let ring = c.ring;
    let mut out = TwistedCycle::zero(ring, c.codim + r as i64);
    for (b, m, coeff) in c.terms() {
        if coeff.is_even() {
            continue;
        }
        for a in 0..=r {
            let q = steenrod_sq_with(rule, &ring, a, b);
            if q.is_zero() {
                continue;
            }
            let u = steenrod_monomial(r - a, m);
            if u.is_zero() {
                continue;
            }
            out = out
                .add(&TwistedCycle::external(&q, &u))
                .expect("Cartan summands share a codimension");
        }
    }
    out.reduce_mod(2)
}

/// Pushforward along the projection `Q x Y -> Y`: only `l_0 x u` survives.
pub fn pr_star(c: &TwistedCycle) -> FormalPolynomial {
    let mut out = FormalPolynomial::zero(c.codim - c.ring.dim() as i64);
    for (b, m, coeff) in c.terms() {
        if b == BasisClass::L(0) {
            out = out
                .add(&FormalPolynomial::monomial(m.clone(), coeff.clone()))
                .expect("l_0 terms share a codimension");
        }
    }
    out
}

/// Which parameter regime a generic cycle is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XbarVariant {
    /// `m < n/2 + j`
    Theorem11,
    /// `m = [(n+1)/2] + j`
    Proposition21,
}

fn check_xbar_params(n: u32, m: u32, j: u32, variant: XbarVariant) -> Result<(), TwistedError> {
    if n == 0 {
        return Err(TwistedError::Constraint("n >= 1".into()));
    }
    if j > m {
        return Err(TwistedError::Constraint(format!(
            "j <= m (got j={j}, m={m})"
        )));
    }
    match variant {
        XbarVariant::Theorem11 => {
            if 2 * m as u64 >= n as u64 + 2 * j as u64 {
                return Err(TwistedError::Constraint(format!(
                    "m < n/2 + j (got n={n}, m={m}, j={j})"
                )));
            }
        }
        XbarVariant::Proposition21 => {
            if m != n.div_ceil(2) + j {
                return Err(TwistedError::Constraint(format!(
                    "m = [(n+1)/2] + j (got n={n}, m={m}, j={j})"
                )));
            }
        }
    }
    Ok(())
}

fn build_xbar(
    n: u32,
    m: u32,
    j: u32,
    variant: XbarVariant,
    y: fn(i64) -> FormalPolynomial,
    z: fn(i64) -> FormalPolynomial,
) -> Result<TwistedCycle, TwistedError> {
    check_xbar_params(n, m, j, variant)?;
    let ring = QuadricRing::new(n)?;
    let half = ring.half();
    let mut out = TwistedCycle::zero(ring, m as i64);
    for k in 0..=half.min(m) {
        let q = QuadricCycle::basis(ring, BasisClass::H(k))?;
        out = out.add(&TwistedCycle::external(&q, &y((m - k) as i64)))?;
    }
    // l_{[n/2]-k} x z^{m+[n/2]-k-n}; classes or coordinates that would have
    // negative index or codimension are absent.
    for k in 0..=j.min(half) {
        let z_codim = m as i64 + half as i64 - k as i64 - n as i64;
        if z_codim < 0 {
            continue;
        }
        let q = QuadricCycle::basis(ring, BasisClass::L(half - k))?;
        out = out.add(&TwistedCycle::external(&q, &z(z_codim)))?;
    }
    Ok(out)
}

/// Generic mod-2 cycle of codimension `m` on `Q x Y`, with `y^m` as its
/// `h^0` coordinate.
pub fn generic_xbar(
    n: u32,
    m: u32,
    j: u32,
    variant: XbarVariant,
) -> Result<TwistedCycle, TwistedError> {
    build_xbar(
        n,
        m,
        j,
        variant,
        FormalPolynomial::y_mod2,
        FormalPolynomial::z_mod2,
    )
}

/// Integral lift of the generic cycle in the `m = [(n+1)/2] + j` regime.
pub fn integral_xbar(n: u32, m: u32, j: u32) -> Result<TwistedCycle, TwistedError> {
    build_xbar(
        n,
        m,
        j,
        XbarVariant::Proposition21,
        FormalPolynomial::y_int,
        FormalPolynomial::z_int,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric_chow::MiddleSquare;

    fn ring(n: u32) -> QuadricRing {
        QuadricRing::new(n).unwrap()
    }

    fn basis(r: QuadricRing, b: BasisClass) -> QuadricCycle {
        QuadricCycle::basis(r, b).unwrap()
    }

    #[test]
    fn external_examples() {
        let r = ring(6);
        let x = TwistedCycle::external(&QuadricCycle::one(r), &FormalPolynomial::y_mod2(3));
        assert_eq!(x.to_string(), "h^0 x y^3");
        let zero = TwistedCycle::external(&QuadricCycle::zero(r, 2), &FormalPolynomial::y_mod2(3));
        assert!(zero.is_zero());
        let two_l1 = QuadricCycle::scaled_basis(r, BasisClass::L(1), BigInt::from(2)).unwrap();
        let t = TwistedCycle::external(&two_l1, &FormalPolynomial::z_mod2(2));
        assert_eq!(t.to_string(), "2*l_1 x z^2");
        assert_eq!(t.codim(), 7);
    }

    #[test]
    fn mul_examples() {
        let r = ring(4);
        let u = TwistedCycle::external(&QuadricCycle::one(r), &FormalPolynomial::y_int(2));
        let v = TwistedCycle::external(&QuadricCycle::one(r), &FormalPolynomial::z_int(1));
        let uv = u.mul(&v).unwrap();
        assert_eq!(uv.to_string(), "h^0 x Y^2*Z^1");

        let lz = TwistedCycle::external(&basis(r, BasisClass::L(2)), &FormalPolynomial::z_int(1));
        let sq = lz.mul(&lz).unwrap();
        assert_eq!(sq.to_string(), "l_0 x (Z^1)^2");

        let opp = r.with_middle_square(MiddleSquare::Opposite);
        let lz = TwistedCycle::external(&basis(opp, BasisClass::L(2)), &FormalPolynomial::z_int(1));
        assert!(lz.mul(&lz).unwrap().is_zero());

        let a = TwistedCycle::external(&basis(r, BasisClass::L(1)), &FormalPolynomial::y_int(1));
        let b = TwistedCycle::external(&basis(r, BasisClass::L(2)), &FormalPolynomial::y_int(1));
        assert!(a.mul(&b).unwrap().is_zero());

        let other = TwistedCycle::external(&QuadricCycle::one(ring(5)), &FormalPolynomial::one());
        assert!(matches!(
            a.mul(&other),
            Err(TwistedError::RingMismatch { .. })
        ));
    }

    #[test]
    fn cartan_examples() {
        let r = ring(6);
        let m = 3;
        let x = TwistedCycle::external(&QuadricCycle::one(r), &FormalPolynomial::y_mod2(m));
        assert_eq!(cartan_sq(0, &x), x);
        for rr in 1..=m as u32 {
            let s = cartan_sq(rr, &x);
            let expected = TwistedCycle::external(
                &QuadricCycle::one(r),
                &crate::formal_coeffs::formal_steenrod(
                    rr,
                    &crate::formal_coeffs::FormalSymbol::y_mod2(m).unwrap(),
                ),
            );
            assert_eq!(s, expected);
        }
        assert!(cartan_sq(m as u32 + 1, &x).is_zero());

        // S^2(l_2 x z^1) on Q^4: S^2(l_2) x 1-part vanishes (binom(3,2)=1 gives l_0),
        // S^1(l_2) x S^1(z^1) has binom(3,1)=1, S^0(l_2) x S^2(z^1)=0.
        let r = ring(4);
        let c = TwistedCycle::external(&basis(r, BasisClass::L(2)), &FormalPolynomial::z_mod2(1));
        let s = cartan_sq(2, &c);
        assert_eq!(s.to_string(), "l_0 x z^1 + l_1 x (z^1)^2");
    }

    #[test]
    fn pr_star_examples() {
        let r = ring(5);
        let u = FormalPolynomial::y_int(2);
        let l0 = TwistedCycle::external(&basis(r, BasisClass::L(0)), &u);
        assert_eq!(pr_star(&l0), u);
        for k in 0..=2 {
            let hk = TwistedCycle::external(&basis(r, BasisClass::H(k)), &u);
            assert!(pr_star(&hk).is_zero());
        }
        let two = l0.scale(&BigInt::from(2));
        assert_eq!(pr_star(&two), u.scale(&BigInt::from(2)));
        assert_eq!(pr_star(&two).codim(), two.codim() - 5);
    }

    #[test]
    fn generic_xbar_prop_shape() {
        let x = generic_xbar(4, 3, 1, XbarVariant::Proposition21).unwrap();
        assert_eq!(
            x.to_string(),
            "h^0 x y^3 + h^1 x y^2 + h^2 x y^1 + l_1 x z^0 + l_2 x z^1"
        );
        assert!(x
            .terms()
            .all(|(b, m, _)| b.codim(x.ring()) as i64 + m.codim() == 3));
    }

    #[test]
    fn generic_xbar_thm_drops_negative_z() {
        // n=6, m=2, j=0: z^{2+3-6} has negative codimension.
        let x = generic_xbar(6, 2, 0, XbarVariant::Theorem11).unwrap();
        assert!(x.l_part().is_zero());
        assert!(x
            .terms()
            .any(|(b, m, _)| b == BasisClass::H(0) && m.to_string() == "y^2"));
    }

    #[test]
    fn xbar_constraints() {
        assert!(matches!(
            generic_xbar(4, 1, 2, XbarVariant::Theorem11),
            Err(TwistedError::Constraint(_))
        ));
        let err = generic_xbar(4, 3, 0, XbarVariant::Theorem11).unwrap_err();
        assert!(err.to_string().contains("m < n/2 + j"));
        assert!(generic_xbar(4, 4, 1, XbarVariant::Proposition21).is_err());
        assert!(generic_xbar(0, 0, 0, XbarVariant::Theorem11).is_err());
    }

    #[test]
    fn integral_xbar_examples() {
        let j = 3;
        let x = integral_xbar(2, j + 1, j).unwrap();
        let l = x.l_part();
        // half = 1: only k = 0, 1 have an l-class.
        assert_eq!(l.to_string(), "l_0 x Z^2 + l_1 x Z^3");
        assert!(x.terms().all(|(_, _, c)| c.is_one()));

        let policy = LiftPolicy::new(j + 1, 2, j, true);
        let reduced = x.map_formal(|p| policy.reduce_to_mod2(p)).unwrap();
        assert_eq!(
            reduced,
            generic_xbar(2, j + 1, j, XbarVariant::Proposition21).unwrap()
        );
    }
}
