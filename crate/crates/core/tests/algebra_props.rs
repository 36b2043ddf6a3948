use cartan_ho_core::ho::{t_h, t_h_monomial, verify_th_morphism};
use cartan_ho_core::{AlgebraParams, Fp, Monomial, Parity, PrimeField, SuperPoly, VectorField};
use num_bigint::BigUint;
use proptest::prelude::*;

fn params(t0: u32) -> AlgebraParams {
    AlgebraParams::new(3, 5, &[t0, 1, 1]).unwrap()
}

fn exact_binom(a: u64, b: u64) -> BigUint {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..b {
        num *= a - i;
        den *= i + 1;
    }
    num / den
}

fn monomial(p: &AlgebraParams, alpha: [u32; 3], word: u8) -> Monomial {
    let alpha: Vec<u32> = alpha.iter().zip(p.pi()).map(|(&a, &b)| a % (b + 1)).collect();
    let word: Vec<usize> = (0..3).filter(|k| word >> k & 1 == 1).map(|k| k + 4).collect();
    p.monomial(&alpha, &word).unwrap()
}

fn arb_monomial(t0: u32) -> impl Strategy<Value = Monomial> {
    (any::<[u32; 3]>(), 0u8..8).prop_map(move |(a, w)| monomial(&params(t0), a, w))
}

/// Parity-homogeneous polynomial with up to four terms.
fn arb_poly(t0: u32, parity: Parity) -> impl Strategy<Value = SuperPoly> {
    prop::collection::vec((arb_monomial(t0), 1i64..5), 1..5).prop_map(move |terms| {
        let p = params(t0);
        let k = p.field();
        let mut f = SuperPoly::zero();
        for (mut m, c) in terms {
            if m.parity() != parity {
                // Toggle x_4 to flip parity.
                let mut word: Vec<usize> = m.word().collect();
                match word.iter().position(|&x| x == 4) {
                    Some(i) => {
                        word.remove(i);
                    }
                    None => word.insert(0, 4),
                }
                let alpha: Vec<u32> = m.alpha().collect();
                m = p.monomial(&alpha, &word).unwrap();
            }
            f.add_term(k, m, k.elem(c));
        }
        f
    })
}

fn arb_parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

fn homogeneous_pair(t0: u32) -> impl Strategy<Value = (SuperPoly, SuperPoly)> {
    (arb_parity(), arb_parity()).prop_flat_map(move |(a, b)| (arb_poly(t0, a), arb_poly(t0, b)))
}

proptest! {
    #[test]
    fn lucas_matches_exact_binomial(a in 0u64..700, b in 0u64..700) {
        let k = PrimeField::new(7).unwrap();
        prop_assume!(b <= a);
        let exact = exact_binom(a, b) % 7u32;
        prop_assert_eq!(k.binom(a, b).value() as u64, exact.to_u64_digits().first().copied().unwrap_or(0));
    }

    #[test]
    fn field_axioms(a in 0i64..101, b in 0i64..101, c in 0i64..101) {
        let k = PrimeField::new(101).unwrap();
        let (a, b, c) = (k.elem(a), k.elem(b), k.elem(c));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), Fp::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), Fp::ONE);
        }
    }

    #[test]
    fn super_commutativity((f, g) in homogeneous_pair(2)) {
        let p = params(2);
        let k = p.field();
        let both_odd = f.parity().unwrap().is_odd() && g.parity().unwrap().is_odd();
        prop_assert_eq!(p.multiply(&f, &g), p.multiply(&g, &f).scaled(k, k.sign(both_odd)));
    }

    #[test]
    fn associativity(f in arb_poly(2, Parity::Odd), g in arb_poly(2, Parity::Even), h in arb_poly(1, Parity::Odd)) {
        let p = params(2);
        // Re-key h into the t = (2,1,1) algebra.
        let h: SuperPoly = {
            let mut out = SuperPoly::zero();
            for (m, &c) in h.iter() {
                let alpha: Vec<u32> = m.alpha().collect();
                let word: Vec<usize> = m.word().collect();
                out.add_term(p.field(), p.monomial(&alpha, &word).unwrap(), c);
            }
            out
        };
        prop_assert_eq!(p.multiply(&p.multiply(&f, &g), &h), p.multiply(&f, &p.multiply(&g, &h)));
    }

    #[test]
    fn super_leibniz((f, g) in homogeneous_pair(2), r in 1usize..=6) {
        let p = params(2);
        let k = p.field();
        let lhs = p.partial(r, &p.multiply(&f, &g)).unwrap();
        let mut rhs = p.multiply(&p.partial(r, &f).unwrap(), &g);
        let sign = k.sign(p.is_odd_index(r) && f.parity().unwrap().is_odd());
        rhs.add_scaled(k, &p.multiply(&f, &p.partial(r, &g).unwrap()), sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grading_is_additive(a in arb_monomial(2), b in arb_monomial(2)) {
        let p = params(2);
        if let Some((_, m)) = p.mul_monomials(&a, &b) {
            prop_assert_eq!(m.zdegree(), a.zdegree() + b.zdegree());
        }
    }

    #[test]
    fn th_morphism_random(a in arb_poly(1, Parity::Odd), b in arb_poly(1, Parity::Odd)) {
        prop_assert!(verify_th_morphism(&params(1), &a, &b).unwrap());
    }

    #[test]
    fn th_is_odd_and_lowers_degree(a in arb_monomial(2)) {
        let p = params(2);
        let v = t_h_monomial(&p, &a);
        if !v.is_zero() {
            prop_assert_eq!(v.parity(), Some(a.parity().flip()));
            prop_assert_eq!(v.zdegree(), Some(a.zdegree() as i32 - 2));
        }
    }
}

#[test]
fn partials_supercommute_on_every_monomial() {
    let p = params(1);
    let k = p.field();
    for m in p.enumerate_basis(None, None) {
        let f = SuperPoly::from_monomial(m);
        for i in 1..=6 {
            for j in 1..=6 {
                let ij = p.partial(i, &p.partial(j, &f).unwrap()).unwrap();
                let ji = p.partial(j, &p.partial(i, &f).unwrap()).unwrap();
                let sign = k.sign(p.is_odd_index(i) && p.is_odd_index(j));
                assert_eq!(ij, ji.scaled(k, sign), "∂{i}∂{j} on {m}");
            }
        }
    }
}

#[test]
fn dropped_products_have_vanishing_binomials() {
    // Exponent sums beyond π = p^t − 1 always carry in base p.
    let k = PrimeField::new(5).unwrap();
    for t in 1..=2u32 {
        let pi = 5u64.pow(t) - 1;
        for a in 0..=pi {
            for b in 0..=pi {
                if a + b > pi {
                    assert!(k.binom(a + b, a).is_zero(), "C({}, {a})", a + b);
                }
            }
        }
    }
}

#[test]
fn dimension_counts() {
    for (t0, expected) in [(1, 1000), (2, 5000)] {
        let p = params(t0);
        assert_eq!(p.enumerate_basis(None, None).len(), expected);
        assert_eq!(p.dim(), expected);
    }
    let p = params(1);
    assert_eq!(p.enumerate_basis(Some(0), None), vec![p.one()]);
    let top = p.enumerate_basis(Some(15), None);
    assert_eq!(top, vec![p.monomial(&[4, 4, 4], &[4, 5, 6]).unwrap()]);
}

#[test]
fn kernel_of_th_is_the_constants() {
    let p = params(1);
    let k = p.field();
    let even = p.enumerate_basis(None, Some(Parity::Even));
    let images: Vec<VectorField> = even.iter().map(|m| t_h_monomial(&p, m)).collect();
    let (space, kept) = cartan_ho_core::GradedSubspace::spanned_by(k, images).unwrap();
    assert_eq!(space.dim(), even.len() - 1);
    assert!(!kept.contains(&0));
    assert!(t_h(&p, &SuperPoly::from_monomial(p.one())).unwrap().is_zero());
}
