use cartan_ho_core::linalg::{in_span, DenseMatrix, EliminationOptions, SparseMatrix};
use cartan_ho_core::{Fp, PrimeField};
use proptest::prelude::*;

fn k() -> PrimeField {
    PrimeField::new(7).unwrap()
}

/// Sparse random matrix as dense rows of residues.
fn arb_matrix() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0u32), 1 => 1u32..7], c), r)
    })
}

fn sparse(rows: &[Vec<u32>]) -> SparseMatrix {
    let f = k();
    let cols = rows[0].len();
    let lists: Vec<Vec<(usize, Fp)>> = rows
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, f.elem(x as i64))).collect())
        .collect();
    SparseMatrix::from_rows(f, cols, &lists).unwrap()
}

fn never_dense() -> EliminationOptions {
    EliminationOptions { dense_threshold: 2.0, ..Default::default() }
}

fn always_dense() -> EliminationOptions {
    EliminationOptions { dense_threshold: 0.0, ..Default::default() }
}

proptest! {
    #[test]
    fn rank_nullity(rows in arb_matrix()) {
        let f = k();
        let m = sparse(&rows);
        for opts in [never_dense(), always_dense()] {
            let rank = m.rank_with(f, &opts);
            let ker = m.kernel_basis_with(f, &opts);
            prop_assert_eq!(rank + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(f, v).unwrap().iter().all(|x| x.is_zero()));
            }
        }
        prop_assert_eq!(m.rank_with(f, &never_dense()), m.rank_with(f, &always_dense()));
    }

    #[test]
    fn rank_ignores_row_order_and_scaling(rows in arb_matrix(), seed in any::<u64>()) {
        let f = k();
        let base = sparse(&rows).rank(f);
        let mut permuted = rows.clone();
        let n = permuted.len();
        permuted.rotate_left((seed as usize) % n);
        for (i, r) in permuted.iter_mut().enumerate() {
            let c = 1 + ((seed >> (i % 32)) as u32 % 6);
            for x in r.iter_mut() {
                *x = (*x * c) % 7;
            }
        }
        prop_assert_eq!(sparse(&permuted).rank(f), base);
        let dense = DenseMatrix::from_rows(f, rows[0].len(), &rows.iter().map(|r| r.iter().map(|&x| f.elem(x as i64)).collect()).collect::<Vec<_>>());
        prop_assert_eq!(dense.rank(), base);
    }

    #[test]
    fn span_membership_coefficients(rows in arb_matrix(), coeffs in prop::collection::vec(0i64..7, 12)) {
        let f = k();
        let basis: Vec<Vec<Fp>> = rows.iter().map(|r| r.iter().map(|&x| f.elem(x as i64)).collect()).collect();
        let mut v = vec![Fp::ZERO; basis[0].len()];
        for (b, &c) in basis.iter().zip(&coeffs) {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(y, f.elem(c)));
            }
        }
        let got = in_span(f, &v, &basis).unwrap().expect("combination lies in span");
        let mut w = vec![Fp::ZERO; v.len()];
        for (b, &c) in basis.iter().zip(&got) {
            for (x, &y) in w.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(y, c));
            }
        }
        prop_assert_eq!(w, v);
    }
}

#[test]
fn spec_examples() {
    let f = PrimeField::new(5).unwrap();
    let id = SparseMatrix::new(5, 5, (0..5).map(|i| (i, i, Fp::ONE)).collect()).unwrap();
    assert_eq!(id.rank(f), 5);
    assert!(id.kernel_basis(f).is_empty());
    let z = SparseMatrix::zeros(3, 3);
    assert_eq!(z.rank(f), 0);
    assert_eq!(z.kernel_basis(f).len(), 3);
    let m = SparseMatrix::from_rows(f, 2, &[vec![(0, f.elem(1)), (1, f.elem(2))], vec![(0, f.elem(3)), (1, f.elem(1))]]).unwrap();
    assert_eq!(m.rank(f), 1);
    let basis = vec![vec![f.elem(1), f.elem(0)], vec![f.elem(0), f.elem(1)]];
    assert_eq!(in_span(f, &basis[0], &basis).unwrap(), Some(vec![Fp::ONE, Fp::ZERO]));
    assert_eq!(in_span(f, &[Fp::ZERO; 2], &basis).unwrap(), Some(vec![Fp::ZERO; 2]));
    assert_eq!(in_span(f, &[Fp::ONE], &basis).unwrap_err(), cartan_ho_core::AlgebraError::LengthMismatch { expected: 1, got: 2 });
    assert_eq!(in_span(f, &[Fp::ONE, Fp::ONE], &basis[..1]).unwrap(), None);
}
