use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::report::{CheckKind, ResidualTerm, VerificationReport};
use super::{HarnessError, HarnessOptions, Mutation, ParamTuple};
use crate::arith::{binom_exact, binom_mod2};
use crate::formal_coeffs::{
    formal_steenrod, residual_mod, steenrod_poly, FormalPolynomial, FormalSymbol, LiftPolicy,
    Modulus,
};
use crate::quadric_chow::{
    chern_neg_tangent, reduce_h_power, BasisClass, MiddleSquare, QuadricCycle, QuadricRing,
};
use crate::twisted_cycles::{
    cartan_sq_with, generic_xbar, integral_xbar, pr_star, TwistedCycle, XbarVariant,
};

fn timed<F>(f: F) -> Result<VerificationReport, HarnessError>
where
    F: FnOnce() -> Result<VerificationReport, HarnessError>,
{
    let start = Instant::now();
    let mut report = f()?;
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn two() -> BigInt {
    BigInt::from(2)
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), HarnessError> {
    if cond {
        Ok(())
    } else {
        Err(HarnessError::Precondition(what()))
    }
}

fn side(cond: bool, what: impl FnOnce() -> String) -> Result<(), HarnessError> {
    if cond {
        Ok(())
    } else {
        Err(HarnessError::SideCondition(what()))
    }
}

fn small_m_params(n: u32, m: u32, j: u32) -> Result<ParamTuple, HarnessError> {
    let p = ParamTuple::new(n, m, j)?;
    require(p.theorem_1_1_admissible(), || {
        format!("m < n/2 + j (got n={n}, m={m}, j={j})")
    })?;
    Ok(p)
}

fn proposition_2_1_params(n: u32, j: u32) -> Result<ParamTuple, HarnessError> {
    ParamTuple::new(n, n.div_ceil(2) + j, j)
}

/// Name-mixing for the opaque lift-error symbols.
fn gamma_label(seed: u64, i: u32, class: BasisClass) -> u64 {
    let class_code = match class {
        BasisClass::H(k) => 2 * k as u64,
        BasisClass::L(k) => 2 * k as u64 + 1,
    };
    let mut x = seed ^ ((i as u64) << 32) ^ class_code.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    // splitmix64 finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A generic class `gamma_i` of codimension `codim` on `Q x Y`: every Künneth
/// coordinate is an independent opaque symbol.
fn gamma_cycle(ring: &QuadricRing, codim: i64, i: u32, seed: u64) -> TwistedCycle {
    let mut out = TwistedCycle::zero(*ring, codim);
    for b in ring.basis() {
        let coord_codim = codim - b.codim(ring) as i64;
        if let Some(sym) = FormalSymbol::gamma(gamma_label(seed, i, b), coord_codim) {
            let q = QuadricCycle::basis(*ring, b).expect("basis class");
            out = out
                .add(&TwistedCycle::external(&q, &FormalPolynomial::symbol(sym)))
                .expect("homogeneous");
        }
    }
    out
}

/// Integral representative of `S^r(x)`: the lifted Cartan expansion plus an
/// arbitrary `2 gamma_i`.
fn lifted_steenrod(
    xbar: &TwistedCycle,
    r: u32,
    i: u32,
    policy: &LiftPolicy,
    opts: &HarnessOptions,
) -> Result<TwistedCycle, HarnessError> {
    let mod2 = cartan_sq_with(opts.steenrod_rule(), r, xbar);
    let lifted = mod2.lift(policy)?;
    let gamma = gamma_cycle(xbar.ring(), lifted.codim(), i, opts.gamma_seed);
    Ok(lifted.add(&gamma.scale(&two()))?)
}

/// The policy's integral representative of `S^l(y^{m-k})`.
fn eps_rep(policy: &LiftPolicy, k: i64, l: u32) -> Result<FormalPolynomial, HarnessError> {
    match FormalSymbol::y_mod2(policy.m - k) {
        Some(y) => Ok(policy.lift(&formal_steenrod(l, &y))?),
        None => Ok(FormalPolynomial::zero(policy.m - k + l as i64)),
    }
}

/// `2 sum_k binom(k, d-i-k) eps[k, j+k]` for `k = 0..=k_max`.
fn congruence_one_target(
    policy: &LiftPolicy,
    d: u32,
    i: u32,
    j: u32,
    k_max: u32,
) -> Result<FormalPolynomial, HarnessError> {
    let mut out = FormalPolynomial::zero(policy.m + j as i64);
    for k in 0..=k_max {
        let lower = d as i64 - i as i64 - k as i64;
        if lower < 0 {
            continue;
        }
        let c = binom_exact(k as i64, lower as u64);
        if c.is_zero() {
            continue;
        }
        let eps = eps_rep(policy, k as i64, j + k)?;
        out = out.add(&eps.scale(&(c * two())))?;
    }
    Ok(out)
}

fn h_power_times(
    ring: &QuadricRing,
    e: u32,
    s: &TwistedCycle,
) -> Result<FormalPolynomial, HarnessError> {
    let mult = TwistedCycle::external(&reduce_h_power(ring, e), &FormalPolynomial::one());
    Ok(pr_star(&mult.mul(s)?))
}

/// Checks that `sum_{i=d+j-m}^{d} pr_*(h^{n-d+i} s^{d+j-i}) ≡ 2 eps[0,j]
/// (mod 4)` for a generic cycle with `m < n/2 + j`. Each summand is also
/// compared with `2 sum_k binom(k, d-i-k) eps[k,j+k]`.
pub fn verify_theorem_1_1(
    n: u32,
    m: u32,
    j: u32,
    opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        let p = small_m_params(n, m, j)?;
        let d = p.d;
        let ring = opts.ring(n)?;
        let half = ring.half();
        let xbar = generic_xbar(n, m, j, XbarVariant::Theorem11)?.with_ring(ring)?;
        let policy = LiftPolicy::new(m, n, j, false);

        let mut total = FormalPolynomial::zero((m + j) as i64);
        let mut residual = Vec::new();
        let first = d + j - m;
        for i in first..=d {
            let r = d + j - i;
            let e = n - d + i;
            side(2 * e > n, || format!("n-d+i > n/2 for i={i}"))?;
            let expected_mult = QuadricCycle::scaled_basis(ring, BasisClass::L(d - i), two())?;
            side(reduce_h_power(&ring, e) == expected_mult, || {
                format!("h^{e} = 2 l_{}", d - i)
            })?;
            let s = lifted_steenrod(&xbar, r, i, &policy, opts)?;
            let summand = h_power_times(&ring, e, &s)?;
            let expected = congruence_one_target(&policy, d, i, j, half)?;
            let r_i = residual_mod(&summand, &expected, Modulus::Four)?;
            residual.extend(ResidualTerm::from_polynomial(
                &r_i,
                Some(&format!("summand i={i}")),
            ));
            total = total.add(&summand)?;
        }
        let target = eps_rep(&policy, 0, j)?.scale(&two());
        let r = residual_mod(&total, &target, Modulus::Four)?;
        residual.extend(ResidualTerm::from_polynomial(&r, None));
        Ok(VerificationReport::new(CheckKind::Thm1, p, residual)
            .with_note("sum ≡ 2*eps[0,j] mod 4: S^j(y) is rational up to the class of an exponent-2 element"))
    })
}

/// Checks that `pr_*(h^{n-d+i} B_i) = 0` exactly, `B_i` the lifted Steenrod
/// image of the `l x z` block of the generic cycle.
pub fn verify_lemma_1_3(
    n: u32,
    m: u32,
    j: u32,
    opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        let p = small_m_params(n, m, j)?;
        let d = p.d;
        let ring = opts.ring(n)?;
        let half = ring.half();
        let xbar = generic_xbar(n, m, j, XbarVariant::Theorem11)?.with_ring(ring)?;
        let block = match opts.mutation {
            Some(Mutation::SwappedKunnethBlock) => xbar.h_part(),
            _ => xbar.l_part(),
        };
        let policy = LiftPolicy::new(m, n, j, false);

        let mut residual = Vec::new();
        for i in (d + j - m)..=d {
            let r = d + j - i;
            // d+j-i <= m < j + n/2 <= j + n - [n/2]
            side(r <= m, || format!("d+j-i <= m for i={i}"))?;
            side(2 * m < 2 * j + n, || "m < j + n/2".into())?;
            side(n <= 2 * (n - half), || "n/2 <= n - [n/2]".into())?;
            let b_tilde = cartan_sq_with(opts.steenrod_rule(), r, &block).lift(&policy)?;
            let pushed = h_power_times(&ring, n - d + i, &b_tilde)?;
            residual.extend(ResidualTerm::from_polynomial(
                &pushed,
                Some(&format!("i={i}")),
            ));
        }
        Ok(VerificationReport::new(CheckKind::Lemma13, p, residual))
    })
}

/// `S^{d+j}` kills `pr_* in^* x`, which has codimension `m - d < d + j`.
pub fn verify_degree_vanishing(
    n: u32,
    m: u32,
    j: u32,
    _opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        let p = small_m_params(n, m, j)?;
        let d = p.d as i64;
        let mut residual = Vec::new();
        let codim = m as i64 - d;
        if codim >= d + j as i64 {
            residual.push(ResidualTerm::marker("violated: m-d < d+j"));
        }
        let image = match FormalSymbol::y_mod2(codim) {
            Some(sym) => formal_steenrod((d + j as i64) as u32, &sym),
            None => FormalPolynomial::zero(codim + d + j as i64),
        };
        residual.extend(ResidualTerm::from_polynomial(&image, None));
        Ok(VerificationReport::new(
            CheckKind::DegreeVanishing,
            p,
            residual,
        ))
    })
}

/// `2 sum_{i=d+j-m}^{d} binom(k, d-i-k) = 2^{k+1}`, divisible by 4 iff `k >= 1`.
pub fn verify_coefficient_sum(
    k: u32,
    d: u32,
    m: u32,
    j: u32,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        require(j <= m, || format!("j <= m (got j={j}, m={m})"))?;
        require(2 * k <= m - j, || {
            format!("d+j-m <= d-2k, i.e. k <= (m-j)/2 (got k={k}, m={m}, j={j})")
        })?;
        require(d >= 1, || "d >= 1".into())?;
        let mut sum = BigInt::zero();
        for i in (d as i64 + j as i64 - m as i64)..=d as i64 {
            let lower = d as i64 - i - k as i64;
            if lower >= 0 {
                sum += binom_exact(k as i64, lower as u64);
            }
        }
        let total = sum * two();
        let expected = BigInt::one() << (k + 1);
        let mut residual = Vec::new();
        if total != expected {
            residual.push(ResidualTerm {
                coeff: &total - &expected,
                monomial: Vec::new(),
            });
        }
        let divisible = (&total % 4u32).is_zero();
        if divisible != (k >= 1) {
            residual.push(ResidualTerm::marker(
                "divisibility by 4 differs from k >= 1",
            ));
        }
        let params = ParamTuple {
            n: d,
            m,
            j,
            t: (d + 1).ilog2(),
            d,
        };
        Ok(
            VerificationReport::new(CheckKind::Coeffsum, params, residual)
                .with_extra("k", k as i64),
        )
    })
}

/// `pr_*(h^{[n/2]} s^m)` with `s^m` the square of the integral generic cycle.
pub fn lemma_2_2_pushforward(
    n: u32,
    j: u32,
    middle_square: MiddleSquare,
) -> Result<FormalPolynomial, HarnessError> {
    let p = proposition_2_1_params(n, j)?;
    let ring = QuadricRing::new(n)?.with_middle_square(middle_square);
    let x = integral_xbar(n, p.m, j)?.with_ring(ring)?;
    let sm = x.mul(&x)?;
    h_power_times(&ring, n + j - p.m, &sm)
}

/// `2 eps[(m-j)/2, (m+j)/2] + 2 Y^m Z^j` when `even_branch`, else `2 Y^m Z^j`.
pub fn lemma_2_2_target(
    n: u32,
    j: u32,
    even_branch: bool,
) -> Result<FormalPolynomial, HarnessError> {
    let p = proposition_2_1_params(n, j)?;
    let (m, j) = (p.m as i64, j as i64);
    let policy = LiftPolicy::new(p.m, n, p.j, true);
    let yz = FormalPolynomial::y_int(m).mul(&FormalPolynomial::z_int(j));
    let mut target = yz.scale(&two());
    if even_branch {
        let eps = policy.eps((m - j) / 2, (m + j) / 2);
        target = target.add(&eps.scale(&two()))?;
    }
    Ok(target)
}

pub fn verify_lemma_2_2(
    n: u32,
    j: u32,
    opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        let p = proposition_2_1_params(n, j)?;
        let even = (p.m - j).is_multiple_of(2);
        let target = lemma_2_2_target(n, j, even)?;
        let primary = opts.middle_square;
        let other = match primary {
            MiddleSquare::Forced => MiddleSquare::Opposite,
            MiddleSquare::Opposite => MiddleSquare::Forced,
        };
        let r_primary = residual_mod(
            &lemma_2_2_pushforward(n, j, primary)?,
            &target,
            Modulus::Four,
        )?;
        let r_other = residual_mod(&lemma_2_2_pushforward(n, j, other)?, &target, Modulus::Four)?;
        let mut residual = ResidualTerm::from_polynomial(&r_primary, None);
        if r_primary.is_zero() != r_other.is_zero() {
            residual.push(ResidualTerm::marker(
                "verdict depends on the middle-square convention",
            ));
        }
        let branch = if even { "m-j even" } else { "m-j odd" };
        Ok(VerificationReport::new(CheckKind::Lemma22, p, residual).with_note(branch))
    })
}

/// Full pipeline for `m = [(n+1)/2] + j`:
/// `sum_{i=d+j-m}^{d} pr_*(h^{n-d+i} s^{d+j-i}) ≡ 2 eps[0,j] + 2 Y^m Z^j (mod 4)`.
pub fn verify_prop_2_1(
    n: u32,
    j: u32,
    opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        let p = proposition_2_1_params(n, j)?;
        let (m, d) = (p.m, p.d);
        side(2 * d > n.div_ceil(2), || "2d > [(n+1)/2]".into())?;
        side(m < 2 * d + j, || "m - d < d + j".into())?;
        let ring = opts.ring(n)?;
        let policy = LiftPolicy::new(m, n, j, true);
        let xbar = generic_xbar(n, m, j, XbarVariant::Proposition21)?.with_ring(ring)?;
        let xint = integral_xbar(n, m, j)?.with_ring(ring)?;

        let mut total = FormalPolynomial::zero((m + j) as i64);
        let mut residual = Vec::new();
        for i in (d + j - m)..=d {
            let r = d + j - i;
            let s = if r == m {
                xint.mul(&xint)?
            } else if r == 0 {
                xint.clone()
            } else {
                lifted_steenrod(&xbar, r, i, &policy, opts)?
            };
            let summand = h_power_times(&ring, n - d + i, &s)?;
            if i > d + j - m {
                let expected = congruence_one_target(&policy, d, i, j, (m - j) / 2)?;
                let r_i = residual_mod(&summand, &expected, Modulus::Four)?;
                residual.extend(ResidualTerm::from_polynomial(
                    &r_i,
                    Some(&format!("summand i={i}")),
                ));
            }
            total = total.add(&summand)?;
        }
        let yz = FormalPolynomial::y_int(m as i64).mul(&FormalPolynomial::z_int(j as i64));
        let target = eps_rep(&policy, 0, j)?.add(&yz)?.scale(&two());
        let r = residual_mod(&total, &target, Modulus::Four)?;
        residual.extend(ResidualTerm::from_polynomial(&r, None));
        Ok(VerificationReport::new(CheckKind::Prop21, p, residual).with_note(
            "sum ≡ 2*(eps[0,j] + Y^m*Z^j) mod 4: S^j(y^m) + y^m*z^j is rational up to an exponent-2 class",
        ))
    })
}

/// `pr_*(x * h^{[n/2]}) = z^j` mod 2.
pub fn verify_theorem_2_4(
    n: u32,
    j: u32,
    opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        let p = proposition_2_1_params(n, j)?;
        let ring = opts.ring(n)?;
        let xbar = generic_xbar(n, p.m, j, XbarVariant::Proposition21)?.with_ring(ring)?;
        let pushed = h_power_times(&ring, ring.half(), &xbar)?.reduce_mod(2);
        let r = residual_mod(&pushed, &FormalPolynomial::z_mod2(j as i64), Modulus::Two)?;
        Ok(VerificationReport::new(
            CheckKind::Thm24,
            p,
            ResidualTerm::from_polynomial(&r, None),
        ))
    })
}

/// Both sides of `S^r pr_* w = sum_i pr_*(c_i(-T_P) S^{r-i} w)` for every
/// `w = q x u`, `q` a basis class of the `d`-dimensional quadric and `u` a
/// single generator `y^c` or `z^c` with `c <= r + 1`.
pub fn verify_wu_consistency(
    d: u32,
    r: u32,
    opts: &HarnessOptions,
) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        require(d >= 1, || "d >= 1".into())?;
        let ring = opts.ring(d)?;
        let chern = chern_neg_tangent(d)?
            .into_iter()
            .map(|c| c.cycle.with_ring(ring))
            .collect::<Result<Vec<_>, _>>()?;
        let mut residual = Vec::new();
        for q in ring.basis() {
            let qc = QuadricCycle::basis(ring, q)?;
            for c in 0..=r as i64 + 1 {
                for u in [FormalPolynomial::y_mod2(c), FormalPolynomial::z_mod2(c)] {
                    let w = TwistedCycle::external(&qc, &u);
                    let lhs = steenrod_poly(r, &pr_star(&w));
                    let mut rhs = FormalPolynomial::zero(lhs.codim());
                    for (i, ci) in chern.iter().enumerate().take(r as usize + 1) {
                        let sq = cartan_sq_with(opts.steenrod_rule(), r - i as u32, &w);
                        let ci = TwistedCycle::external(ci, &FormalPolynomial::one());
                        rhs = rhs.add(&pr_star(&ci.mul(&sq)?))?;
                    }
                    let diff = residual_mod(&lhs, &rhs, Modulus::Two)?;
                    residual.extend(ResidualTerm::from_polynomial(
                        &diff,
                        Some(&format!("{q} x {u}")),
                    ));
                }
            }
        }
        let sub = crate::quadric_chow::subquadric_dim(d)?;
        let params = ParamTuple {
            n: d,
            m: 0,
            j: 0,
            t: sub.t,
            d: sub.d,
        };
        Ok(VerificationReport::new(CheckKind::Wu, params, residual).with_extra("r", r as i64))
    })
}

/// Parity of `c_i(-T_P)` against `binom(-d-2, i)`, and oddness of every `c_i`
/// when `d + 1` is a power of two.
pub fn verify_chern(d: u32) -> Result<VerificationReport, HarnessError> {
    timed(|| {
        require(d >= 1, || "d >= 1".into())?;
        let classes = chern_neg_tangent(d)?;
        let all_odd_expected = (d + 1).is_power_of_two();
        let mut residual = Vec::new();
        for c in &classes {
            let parity = u8::from(c.coefficient.is_odd());
            if parity != binom_mod2(-(d as i64) - 2, c.degree as u64) {
                residual.push(ResidualTerm::marker(format!("c_{} parity", c.degree)));
            }
            if all_odd_expected && parity == 0 {
                residual.push(ResidualTerm::marker(format!("c_{} even", c.degree)));
            }
        }
        if classes[0].cycle != QuadricCycle::one(*classes[0].cycle.ring()) {
            residual.push(ResidualTerm::marker("c_0 != 1"));
        }
        let sub = crate::quadric_chow::subquadric_dim(d)?;
        let params = ParamTuple {
            n: d,
            m: 0,
            j: 0,
            t: sub.t,
            d: sub.d,
        };
        let mut report = VerificationReport::new(CheckKind::Chern, params, residual);
        if all_odd_expected {
            report = report.with_note("d = 2^t - 1: every c_i(-T_P) is odd");
        }
        Ok(report)
    })
}
