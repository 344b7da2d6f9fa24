//! Graded formal coefficients standing in for cycles on the second factor.
//!
//! Mod-2 generators `y^i`, `z^i`, their integral lifts `Y^i`, `Z^i`, opaque
//! representatives `eps[k,l]`, `delta[k,l]` of Steenrod images, opaque lift
//! errors `gamma`, and unevaluated Steenrod images `Sq^l(..)`. Every symbol
//! carries its codimension; a symbol whose codimension would be negative is
//! the zero class and never constructed.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("codimension mismatch: {left} vs {right}")]
    CodimMismatch { left: i64, right: i64 },
    #[error("no integral lift rule for {0}")]
    Unliftable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    YMod2(u32),
    ZMod2(u32),
    YInt(u32),
    ZInt(u32),
    /// Integral representative of `S^l(y^{m-k})`.
    Eps {
        k: u32,
        l: u32,
    },
    /// Integral representative of `S^l(z^{m+[n/2]-k-n})`.
    Delta {
        k: u32,
        l: u32,
    },
    /// Opaque Künneth coordinate of an integral lift error.
    Gamma {
        label: u64,
    },
    /// `S^degree(base)`, left unevaluated.
    SteenrodOf {
        base: Box<FormalSymbol>,
        degree: u32,
    },
    Opaque(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSymbol {
    kind: SymbolKind,
    codim: u32,
}

impl FormalSymbol {
    /// `None` when `codim` is negative.
    pub fn new(kind: SymbolKind, codim: i64) -> Option<Self> {
        let codim = u32::try_from(codim).ok()?;
        Some(Self { kind, codim })
    }

    pub fn y_mod2(i: i64) -> Option<Self> {
        Self::new(SymbolKind::YMod2(u32::try_from(i).ok()?), i)
    }

    pub fn z_mod2(i: i64) -> Option<Self> {
        Self::new(SymbolKind::ZMod2(u32::try_from(i).ok()?), i)
    }

    pub fn y_int(i: i64) -> Option<Self> {
        Self::new(SymbolKind::YInt(u32::try_from(i).ok()?), i)
    }

    pub fn z_int(i: i64) -> Option<Self> {
        Self::new(SymbolKind::ZInt(u32::try_from(i).ok()?), i)
    }

    pub fn gamma(label: u64, codim: i64) -> Option<Self> {
        Self::new(SymbolKind::Gamma { label }, codim)
    }

    pub fn opaque(name: impl Into<String>, codim: i64) -> Option<Self> {
        Self::new(SymbolKind::Opaque(name.into()), codim)
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }
}

impl fmt::Display for FormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::YMod2(i) => write!(f, "y^{i}"),
            SymbolKind::ZMod2(i) => write!(f, "z^{i}"),
            SymbolKind::YInt(i) => write!(f, "Y^{i}"),
            SymbolKind::ZInt(i) => write!(f, "Z^{i}"),
            SymbolKind::Eps { k, l } => write!(f, "eps[{k},{l}]"),
            SymbolKind::Delta { k, l } => write!(f, "delta[{k},{l}]"),
            SymbolKind::Gamma { label } => write!(f, "gamma#{label:x}@{}", self.codim),
            SymbolKind::SteenrodOf { base, degree } => write!(f, "Sq^{degree}({base})"),
            SymbolKind::Opaque(name) => f.write_str(name),
        }
    }
}

/// A commutative product of symbols, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<FormalSymbol>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn from_symbols(mut symbols: Vec<FormalSymbol>) -> Self {
        symbols.sort();
        Self(symbols)
    }

    pub fn symbols(&self) -> &[FormalSymbol] {
        &self.0
    }

    pub fn codim(&self) -> i64 {
        self.0.iter().map(|s| s.codim as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Self::from_symbols(v)
    }

    /// Factor names, repeated according to multiplicity.
    pub fn factor_names(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let mut e = 1;
            while i + e < self.0.len() && self.0[i + e] == self.0[i] {
                e += 1;
            }
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{}", self.0[i])?;
            } else {
                write!(f, "({})^{e}", self.0[i])?;
            }
            i += e;
        }
        Ok(())
    }
}

/// Homogeneous integer combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalPolynomial {
    codim: i64,
    terms: BTreeMap<Monomial, BigInt>,
}

impl FormalPolynomial {
    pub fn zero(codim: i64) -> Self {
        Self {
            codim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial::one(), c.into())
    }

    pub fn monomial(m: Monomial, coeff: BigInt) -> Self {
        let mut p = Self::zero(m.codim());
        p.add_term(m, coeff);
        p
    }

    pub fn symbol(s: FormalSymbol) -> Self {
        Self::monomial(Monomial::from_symbols(vec![s]), BigInt::one())
    }

    /// The symbol, or the zero polynomial in the nominal codimension when the
    /// symbol does not exist.
    pub fn symbol_or_zero(s: Option<FormalSymbol>, codim: i64) -> Self {
        s.map_or_else(|| Self::zero(codim), Self::symbol)
    }

    pub fn y_mod2(i: i64) -> Self {
        Self::symbol_or_zero(FormalSymbol::y_mod2(i), i)
    }

    pub fn z_mod2(i: i64) -> Self {
        Self::symbol_or_zero(FormalSymbol::z_mod2(i), i)
    }

    pub fn y_int(i: i64) -> Self {
        Self::symbol_or_zero(FormalSymbol::y_int(i), i)
    }

    pub fn z_int(i: i64) -> Self {
        Self::symbol_or_zero(FormalSymbol::z_int(i), i)
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        debug_assert_eq!(m.codim(), self.codim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    fn check_codim(&self, other: &Self) -> Result<(), CoeffError> {
        if self.codim != other.codim {
            return Err(CoeffError::CodimMismatch {
                left: self.codim,
                right: other.codim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_codim(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        let mut out = Self::zero(self.codim);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    /// Graded commutative product; codimensions add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.codim + other.codim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Coefficients reduced into `0..modulus`.
    pub fn reduce_mod(&self, modulus: u32) -> Self {
        let m = BigInt::from(modulus);
        let mut out = Self::zero(self.codim);
        for (mono, c) in self.terms() {
            out.add_term(mono.clone(), c.mod_floor(&m));
        }
        out
    }

    /// Applies `f` to every symbol and multiplies the images back together.
    pub fn map_symbols<F>(&self, mut f: F) -> Result<Self, CoeffError>
    where
        F: FnMut(&FormalSymbol) -> Result<FormalPolynomial, CoeffError>,
    {
        let mut out: Option<Self> = None;
        for (mono, c) in self.terms() {
            let mut image = Self::constant(c.clone());
            for s in mono.symbols() {
                image = image.mul(&f(s)?);
            }
            out = Some(match out {
                None => image,
                Some(acc) => acc.add(&image)?,
            });
        }
        Ok(out.unwrap_or_else(|| Self::zero(self.codim)))
    }
}

impl fmt::Display for FormalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            match (abs.is_one(), m.is_one()) {
                (true, false) => write!(f, "{m}")?,
                (_, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

/// `S^l` of a single symbol, read mod 2, using only instability:
/// `S^0 = id`, `S^l = 0` above the codimension, `S^codim(s) = s^2`.
pub fn formal_steenrod(l: u32, s: &FormalSymbol) -> FormalPolynomial {
    let codim = s.codim as i64 + l as i64;
    if l == 0 {
        FormalPolynomial::symbol(s.clone())
    } else if l > s.codim {
        FormalPolynomial::zero(codim)
    } else if l == s.codim {
        let sq = FormalPolynomial::symbol(s.clone());
        sq.mul(&sq)
    } else {
        FormalPolynomial::symbol(FormalSymbol {
            kind: SymbolKind::SteenrodOf {
                base: Box::new(s.clone()),
                degree: l,
            },
            codim: s.codim + l,
        })
    }
}

/// `S^l` of a monomial by the Cartan formula, reduced mod 2.
pub fn steenrod_monomial(l: u32, m: &Monomial) -> FormalPolynomial {
    cartan_factors(l, m.symbols()).reduce_mod(2)
}

fn cartan_factors(l: u32, factors: &[FormalSymbol]) -> FormalPolynomial {
    let Some((first, rest)) = factors.split_first() else {
        return if l == 0 {
            FormalPolynomial::one()
        } else {
            FormalPolynomial::zero(l as i64)
        };
    };
    let rest_codim: i64 = rest.iter().map(|s| s.codim as i64).sum();
    let mut out = FormalPolynomial::zero(first.codim as i64 + rest_codim + l as i64);
    for p in 0..=l.min(first.codim) {
        let head = formal_steenrod(p, first);
        let tail = cartan_factors(l - p, rest);
        out = out
            .add(&head.mul(&tail))
            .expect("Cartan terms share a codimension");
    }
    out
}

/// `S^l` extended linearly to a polynomial, reduced mod 2.
pub fn steenrod_poly(l: u32, p: &FormalPolynomial) -> FormalPolynomial {
    let mut out = FormalPolynomial::zero(p.codim + l as i64);
    for (m, c) in p.terms() {
        if c.is_odd() {
            out = out
                .add(&steenrod_monomial(l, m))
                .expect("homogeneous input");
        }
    }
    out.reduce_mod(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    Two,
    Four,
}

impl Modulus {
    pub fn value(self) -> u32 {
        match self {
            Modulus::Two => 2,
            Modulus::Four => 4,
        }
    }
}

/// `p - target` with coefficients reduced mod `modulus`; empty means
/// `p ≡ target`.
pub fn residual_mod(
    p: &FormalPolynomial,
    target: &FormalPolynomial,
    modulus: Modulus,
) -> Result<FormalPolynomial, CoeffError> {
    Ok(p.sub(target)?.reduce_mod(modulus.value()))
}

/// Normalization rules for the integral representatives of the mod-2
/// Künneth coordinates of a cycle of codimension `m` on `Q x Y`, `dim Q = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LiftPolicy {
    pub m: i64,
    pub n: i64,
    pub j: i64,
    /// Represent `S^{(m+j)/2}(y^{(m+j)/2})` by `(Y^{(m+j)/2})^2` when `m - j`
    /// is even.
    pub midpoint_square_rule: bool,
}

impl LiftPolicy {
    pub fn new(m: u32, n: u32, j: u32, midpoint_square_rule: bool) -> Self {
        Self {
            m: m as i64,
            n: n as i64,
            j: j as i64,
            midpoint_square_rule,
        }
    }

    fn half(&self) -> i64 {
        self.n / 2
    }

    /// Codimension of the `z` coordinate paired with `l_{[n/2]-k}`.
    pub fn z_codim(&self, k: i64) -> i64 {
        self.m + self.half() - k - self.n
    }

    fn is_midpoint(&self, k: i64, l: i64) -> bool {
        let diff = self.m - self.j;
        diff >= 0 && diff % 2 == 0 && k == diff / 2 && l == (self.m + self.j) / 2
    }

    /// Normalized `eps[k,l]`, representing `S^l(y^{m-k})`.
    pub fn eps(&self, k: i64, l: i64) -> FormalPolynomial {
        let base = self.m - k;
        let codim = base + l;
        if base < 0 || l > base {
            return FormalPolynomial::zero(codim);
        }
        if l == 0 {
            return FormalPolynomial::y_int(base);
        }
        if self.midpoint_square_rule && self.is_midpoint(k, l) {
            let y = FormalPolynomial::y_int(base);
            return y.mul(&y);
        }
        FormalPolynomial::symbol_or_zero(
            FormalSymbol::new(
                SymbolKind::Eps {
                    k: k as u32,
                    l: l as u32,
                },
                codim,
            ),
            codim,
        )
    }

    /// Normalized `delta[k,l]`, representing `S^l(z^{m+[n/2]-k-n})`.
    pub fn delta(&self, k: i64, l: i64) -> FormalPolynomial {
        let base = self.z_codim(k);
        let codim = base + l;
        if base < 0 || k < 0 || l > base {
            return FormalPolynomial::zero(codim);
        }
        if l == 0 {
            return FormalPolynomial::z_int(base);
        }
        FormalPolynomial::symbol_or_zero(
            FormalSymbol::new(
                SymbolKind::Delta {
                    k: k as u32,
                    l: l as u32,
                },
                codim,
            ),
            codim,
        )
    }

    pub fn lift_symbol(&self, s: &FormalSymbol) -> Result<FormalPolynomial, CoeffError> {
        Ok(match &s.kind {
            SymbolKind::YMod2(i) => FormalPolynomial::y_int(*i as i64),
            SymbolKind::ZMod2(i) => FormalPolynomial::z_int(*i as i64),
            SymbolKind::SteenrodOf { base, degree } => match base.kind {
                SymbolKind::YMod2(c) if c as i64 <= self.m => {
                    self.eps(self.m - c as i64, *degree as i64)
                }
                SymbolKind::ZMod2(c) if c as i64 <= self.z_codim(0) => {
                    self.delta(self.z_codim(0) - c as i64, *degree as i64)
                }
                _ => return Err(CoeffError::Unliftable(s.to_string())),
            },
            _ => FormalPolynomial::symbol(s.clone()),
        })
    }

    /// Integral representative of a mod-2 polynomial.
    pub fn lift(&self, p: &FormalPolynomial) -> Result<FormalPolynomial, CoeffError> {
        p.map_symbols(|s| self.lift_symbol(s))
    }

    /// Mod-2 reduction of an integral polynomial, turning representatives back
    /// into the Steenrod images they stand for.
    pub fn reduce_to_mod2(&self, p: &FormalPolynomial) -> Result<FormalPolynomial, CoeffError> {
        let image = p.map_symbols(|s| {
            Ok(match &s.kind {
                SymbolKind::YInt(i) => FormalPolynomial::y_mod2(*i as i64),
                SymbolKind::ZInt(i) => FormalPolynomial::z_mod2(*i as i64),
                SymbolKind::Eps { k, l } => match FormalSymbol::y_mod2(self.m - *k as i64) {
                    Some(y) => formal_steenrod(*l, &y),
                    None => FormalPolynomial::zero(s.codim as i64),
                },
                SymbolKind::Delta { k, l } => match FormalSymbol::z_mod2(self.z_codim(*k as i64)) {
                    Some(z) => formal_steenrod(*l, &z),
                    None => FormalPolynomial::zero(s.codim as i64),
                },
                _ => FormalPolynomial::symbol(s.clone()),
            })
        })?;
        Ok(image.reduce_mod(2))
    }
}
