mod common;

use common::exact_scalar;
use hyperorbit::scalars::{to_numeric, ExactComplex, ExactReal, Field, MultiquadElem, ScalarLiteral};
use num_rational::BigRational;
use proptest::prelude::*;

fn real() -> impl Strategy<Value = ExactReal> {
    exact_scalar().prop_map(|z| z.re)
}

fn surd_elem() -> impl Strategy<Value = MultiquadElem> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 4).prop_map(|c| {
        [1u64, 2, 3, 6].iter().zip(c).fold(MultiquadElem::zero(), |acc, (&m, (a, d))| {
            acc.add(&MultiquadElem::monomial(m, BigRational::new(a.into(), d.into())))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_complex_field_laws(a in exact_scalar(), b in exact_scalar(), c in exact_scalar()) {
        prop_assert!(a.add(&b).sub(&b).sub(&a).is_zero());
        prop_assert!(a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c))).is_zero());
        prop_assert!(a.mul(&b).sub(&b.mul(&a)).is_zero());
        if !b.is_zero() {
            prop_assert!(a.mul(&b).div(&b).unwrap().sub(&a).is_zero());
        } else {
            prop_assert!(b.inv().is_err());
        }
    }

    #[test]
    fn exact_real_division_round_trips(a in real(), b in real()) {
        if !b.is_zero() {
            let q = a.div(&b).unwrap();
            prop_assert!(q.mul(&b).sub(&a).is_zero());
        }
    }

    #[test]
    fn multiquadratic_inverse(x in surd_elem()) {
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn numeric_image_is_a_homomorphism(a in exact_scalar(), b in exact_scalar()) {
        let prec = 128;
        let lhs = to_numeric(&a.mul(&b).add(&a), prec).to_c64();
        let rhs = to_numeric(&a, prec).mul(&to_numeric(&b, prec)).add(&to_numeric(&a, prec)).to_c64();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert!((a.re.approx_f64() - to_numeric(&a, prec).to_c64().re).abs() <= 1e-12 * (1.0 + a.re.approx_f64().abs()));
    }

    #[test]
    fn literal_text_round_trips(a in exact_scalar()) {
        let lit = ScalarLiteral::from_exact(&a);
        let back = ScalarLiteral::parse(lit.text()).unwrap();
        prop_assert!(back.exact().unwrap().sub(&a).is_zero());
    }

    #[test]
    fn powers(a in exact_scalar(), e in -3i64..=3) {
        if !a.is_zero() || e >= 0 {
            let mut acc = ExactComplex::one();
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&a);
            }
            if e < 0 {
                acc = acc.inv().unwrap();
            }
            prop_assert!(a.powi(e).unwrap().sub(&acc).is_zero());
        }
    }
}
