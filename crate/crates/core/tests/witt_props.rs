use cartan_ho_core::ho::{delta, HOAlgebra};
use cartan_ho_core::lie::{bracket_coords, GradedLieAlgebra};
use cartan_ho_core::{AlgebraParams, Fp, GradedSubspace, Parity, SuperPoly, VectorField};
use proptest::prelude::*;
use std::sync::OnceLock;

fn params() -> &'static AlgebraParams {
    static P: OnceLock<AlgebraParams> = OnceLock::new();
    P.get_or_init(|| AlgebraParams::new(3, 5, &[1, 1, 1]).unwrap())
}

fn witt() -> &'static GradedSubspace {
    static W: OnceLock<GradedSubspace> = OnceLock::new();
    W.get_or_init(|| params().even_part_basis())
}

fn ho() -> &'static HOAlgebra {
    static H: OnceLock<HOAlgebra> = OnceLock::new();
    H.get_or_init(|| HOAlgebra::build(params()).unwrap())
}

/// Random element of 𝓦 with up to five terms (not necessarily homogeneous).
fn arb_witt() -> impl Strategy<Value = VectorField> {
    prop::collection::vec((0usize..3000, 1i64..5), 1..6).prop_map(|terms| {
        let k = params().field();
        let mut v = VectorField::zero();
        for (i, c) in terms {
            v.add_scaled(k, witt().vector(i), k.elem(c));
        }
        v
    })
}

fn arb_poly() -> impl Strategy<Value = SuperPoly> {
    prop::collection::vec((0usize..1000, 1i64..5), 1..4).prop_map(|terms| {
        let p = params();
        let basis = p.enumerate_basis(None, None);
        let mut f = SuperPoly::zero();
        for (i, c) in terms {
            f.add_term(p.field(), basis[i], p.field().elem(c));
        }
        f
    })
}

proptest! {
    #[test]
    fn antisymmetry_and_jacobi(a in arb_witt(), b in arb_witt(), c in arb_witt()) {
        let p = params();
        let k = p.field();
        prop_assert!(p.bracket(&a, &a).is_zero());
        prop_assert_eq!(p.bracket(&a, &b), p.bracket(&b, &a).scaled(k, k.neg(Fp::ONE)));
        let mut jac = p.bracket(&a, &p.bracket(&b, &c));
        jac.add_scaled(k, &p.bracket(&b, &p.bracket(&c, &a)), Fp::ONE);
        jac.add_scaled(k, &p.bracket(&c, &p.bracket(&a, &b)), Fp::ONE);
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn bracket_respects_grading_and_closes(i in 0usize..3000, j in 0usize..3000) {
        let p = params();
        let (a, b) = (witt().vector(i), witt().vector(j));
        let c = p.bracket(a, b);
        if !c.is_zero() {
            prop_assert_eq!(c.zdegree(), Some(a.zdegree().unwrap() + b.zdegree().unwrap()));
            prop_assert_eq!(c.parity(), Some(Parity::Even));
            prop_assert!(witt().contains(&c));
        }
    }

    #[test]
    fn apply_intertwines_bracket(a in arb_witt(), b in arb_witt(), g in arb_poly()) {
        // Even fields: the super sign is +1.
        let p = params();
        let k = p.field();
        let lhs = p.apply(&p.bracket(&a, &b), &g);
        let mut rhs = p.apply(&a, &p.apply(&b, &g));
        rhs.add_scaled(k, &p.apply(&b, &p.apply(&a, &g)), k.neg(Fp::ONE));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ho_jacobi_on_basis_triples(i in 0usize..500, j in 0usize..500, l in 0usize..500) {
        let h = ho();
        let k = h.field();
        let (x, y, z) = ([(i, Fp::ONE)], [(j, Fp::ONE)], [(l, Fp::ONE)]);
        let mut sum = bracket_coords(h, &x, &bracket_coords(h, &y, &z));
        sum.extend(bracket_coords(h, &y, &bracket_coords(h, &z, &x)));
        sum.extend(bracket_coords(h, &z, &bracket_coords(h, &x, &y)));
        prop_assert!(cartan_ho_core::lie::normalize_coords(k, sum).is_empty());
    }
}

#[test]
fn witt_examples() {
    let p = params();
    assert_eq!(witt().dim(), 3000);
    let low: Vec<VectorField> = (1..=3).map(|i| VectorField::partial(p, i).unwrap()).collect();
    assert_eq!(witt().basis_at(-1), &low[..]);
    let g = p.g_basis();
    assert_eq!(g.dim(), 24);
    let x4 = SuperPoly::from_monomial(p.variable(4).unwrap());
    assert!(g.contains(&VectorField::from_poly(p, &x4, 4).unwrap()));
    let x1d1 = VectorField::from_poly(p, &SuperPoly::from_monomial(p.variable(1).unwrap()), 1).unwrap();
    assert!(!g.contains(&x1d1));
    // [∂₁, x^(2ε₁)∂₂] = x^(ε₁)∂₂
    let sq = SuperPoly::from_monomial(p.monomial(&[2, 0, 0], &[]).unwrap());
    let lhs = p.bracket(&low[0], &VectorField::from_poly(p, &sq, 2).unwrap());
    let x1 = SuperPoly::from_monomial(p.variable(1).unwrap());
    assert_eq!(lhs, VectorField::from_poly(p, &x1, 2).unwrap());
    assert!(p.bracket(&delta(p, 1).unwrap(), &delta(p, 2).unwrap()).is_zero());
    // (x₄∂₄ − x₁∂₁)(x₁x₄) = 0
    let x1x4 = SuperPoly::from_monomial(p.monomial(&[1, 0, 0], &[4]).unwrap());
    assert!(p.apply(&delta(p, 1).unwrap(), &x1x4).is_zero());
    assert_eq!(p.apply(&low[0], &sq), x1);
    assert!(p.apply(&delta(p, 1).unwrap(), &SuperPoly::from_monomial(p.one())).is_zero());
}

#[test]
fn ho_brackets_stay_graded() {
    let h = ho();
    let lay = h.layout();
    let mut out = Vec::new();
    for i in (0..h.dim()).step_by(7) {
        for j in (0..h.dim()).step_by(3) {
            out.clear();
            h.bracket_into(i, j, &mut out);
            for &(kk, _) in &out {
                assert_eq!(lay.degree_of(kk), lay.degree_of(i) + lay.degree_of(j));
            }
        }
    }
}
