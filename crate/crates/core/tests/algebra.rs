use num_bigint::BigInt;
use proptest::prelude::*;
use quadric_steenrod::formal_coeffs::{steenrod_poly, FormalPolynomial};
use quadric_steenrod::quadric_chow::{
    pushforward_embedding, reduce_h_power, BasisClass, QuadricCycle, QuadricRing,
};
use quadric_steenrod::twisted_cycles::{cartan_sq, pr_star, TwistedCycle};

/// Restriction to a linear section of codimension `n - d`.
fn restrict(sub: &QuadricRing, ambient: &QuadricRing, x: &QuadricCycle) -> QuadricCycle {
    let shift = ambient.dim() - sub.dim();
    let mut out = QuadricCycle::zero(*sub, x.codim());
    for (b, c) in x.terms() {
        let image = match b {
            BasisClass::H(k) => reduce_h_power(sub, k),
            BasisClass::L(i) if i >= shift => {
                QuadricCycle::basis(*sub, BasisClass::L(i - shift)).unwrap()
            }
            BasisClass::L(_) => QuadricCycle::zero(*sub, x.codim()),
        };
        out = out.add(&image.scale(c)).unwrap();
    }
    out
}

#[test]
fn projection_formula_for_linear_sections() {
    for n in 1..=12 {
        let q = QuadricRing::new(n).unwrap();
        for d in 1..=n {
            let p = QuadricRing::new(d).unwrap();
            for a in q.basis() {
                let a = QuadricCycle::basis(q, a).unwrap();
                for b in p.basis() {
                    let b = QuadricCycle::basis(p, b).unwrap();
                    let left =
                        pushforward_embedding(&p, &q, &restrict(&p, &q, &a).mul(&b).unwrap())
                            .unwrap();
                    let right = a.mul(&pushforward_embedding(&p, &q, &b).unwrap()).unwrap();
                    assert_eq!(left, right, "n={n} d={d}: {a} . {b}");
                }
            }
        }
    }
}

fn gen_monomial() -> impl Strategy<Value = FormalPolynomial> {
    prop::collection::vec((any::<bool>(), 0i64..5), 0..4).prop_map(|factors| {
        factors
            .into_iter()
            .fold(FormalPolynomial::one(), |acc, (is_y, i)| {
                let f = if is_y {
                    FormalPolynomial::y_mod2(i)
                } else {
                    FormalPolynomial::z_mod2(i)
                };
                acc.mul(&f)
            })
    })
}

fn gen_twisted(n: u32) -> impl Strategy<Value = TwistedCycle> {
    let ring = QuadricRing::new(n).unwrap();
    let classes: Vec<BasisClass> = ring.basis().collect();
    (prop::sample::select(classes), gen_monomial(), -3i64..4).prop_map(move |(b, u, c)| {
        let q = QuadricCycle::basis(ring, b).unwrap();
        TwistedCycle::external(&q, &u).scale(&BigInt::from(c))
    })
}

proptest! {
    #[test]
    fn formal_cartan_formula(p in gen_monomial(), q in gen_monomial(), l in 0u32..8) {
        let pq = p.mul(&q);
        let mut rhs = FormalPolynomial::zero(pq.codim() + l as i64);
        for a in 0..=l {
            rhs = rhs.add(&steenrod_poly(a, &p).mul(&steenrod_poly(l - a, &q))).unwrap();
        }
        prop_assert_eq!(steenrod_poly(l, &pq), rhs.reduce_mod(2));
    }

    #[test]
    fn twisted_products_commute_and_associate(
        (x, y, z) in (1u32..9).prop_flat_map(|n| (gen_twisted(n), gen_twisted(n), gen_twisted(n))),
    ) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(
            x.mul(&y).unwrap().mul(&z).unwrap(),
            x.mul(&y.mul(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn twisted_cartan_formula(
        (x, y) in (1u32..9).prop_flat_map(|n| (gen_twisted(n), gen_twisted(n))),
        r in 0u32..8,
    ) {
        let xy = x.mul(&y).unwrap();
        let mut rhs = TwistedCycle::zero(*xy.ring(), xy.codim() + r as i64);
        for a in 0..=r {
            rhs = rhs.add(&cartan_sq(a, &x).mul(&cartan_sq(r - a, &y)).unwrap()).unwrap();
        }
        prop_assert_eq!(cartan_sq(r, &xy), rhs.reduce_mod(2));
    }

    #[test]
    fn pushforward_is_linear_over_the_base(
        x in (1u32..9).prop_flat_map(gen_twisted),
        u in gen_monomial(),
    ) {
        let ring = *x.ring();
        let u_pulled = TwistedCycle::external(&QuadricCycle::one(ring), &u);
        prop_assert_eq!(pr_star(&x.mul(&u_pulled).unwrap()), pr_star(&x).mul(&u));
    }
}
