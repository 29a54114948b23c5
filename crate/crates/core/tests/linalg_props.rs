use hyperorbit::linalg::{exact_rank, exact_rank_nullspace, Matrix, NumericRank};
use hyperorbit::scalars::{BigComplex, Field};
use num_rational::BigRational;
use proptest::prelude::*;

type Q = BigRational;

fn rational_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Q>> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| Q::from_integer(v[i * cols + j].into())))
}

/// `A B` with inner dimension `k`, so the rank is at most `k`.
fn low_rank(rows: usize, cols: usize) -> impl Strategy<Value = (Matrix<Q>, usize)> {
    (1..=rows.min(cols)).prop_flat_map(move |k| {
        (rational_matrix(rows, k), rational_matrix(k, cols)).prop_map(move |(a, b)| (a.mul(&b).unwrap(), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_nullity((m, k) in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| low_rank(r, c))) {
        let (rank, null) = exact_rank_nullspace(&m);
        prop_assert!(rank <= k);
        prop_assert_eq!(rank + null.len(), m.cols());
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Field::is_zero));
        }
        prop_assert_eq!(exact_rank(&m.transpose()), rank);
    }

    #[test]
    fn determinant_is_multiplicative(a in rational_matrix(3, 3), b in rational_matrix(3, 3)) {
        let lhs = a.mul(&b).unwrap().determinant().unwrap();
        let rhs = a.determinant().unwrap().mul(&b.determinant().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(a in rational_matrix(3, 3)) {
        match a.inverse() {
            Ok(inv) => {
                prop_assert!(a.mul(&inv).unwrap().field_eq(&Matrix::identity(3)));
                prop_assert!(inv.mul(&a).unwrap().field_eq(&Matrix::identity(3)));
            }
            Err(_) => prop_assert!(a.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn numeric_rank_matches_exact((m, _) in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| low_rank(r, c))) {
        let prec = 128;
        let numeric = m.map(|q| BigComplex::from_rational(q, prec));
        let nr = NumericRank::of(&numeric, prec);
        prop_assert!(!nr.ambiguous);
        prop_assert_eq!(nr.rank, exact_rank(&m));
    }
}
