//! Property tests for the algebraic identities the library leans on:
//! exact field behavior of the scalars, Pfaffian and rank facts, the
//! Kronecker product homomorphism, and signature re-layout bijections.

use holo_core::matrix::Matrix;
use holo_core::scalar::Scalar;
use holo_core::signature::{Role, Signature};
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| {
        &Scalar::from_ratio(a, b) + &(&Scalar::from_ratio(c, d) * &Scalar::i())
    })
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(scalar_strategy(), rows * cols)
        .prop_map(move |entries| Matrix::new(rows, cols, entries))
}

fn skew_strategy(half: usize) -> impl Strategy<Value = Matrix> {
    let n = 2 * half;
    proptest::collection::vec(scalar_strategy(), n * (n - 1) / 2).prop_map(move |uppers| {
        let mut m = Matrix::zero(n, n);
        let mut it = uppers.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().unwrap();
                *m.at_mut(i, j) = v.clone();
                *m.at_mut(j, i) = -&v;
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar_strategy()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn pfaffian_squared_equals_determinant(m in skew_strategy(2)) {
        let pf = m.pfaffian().unwrap();
        prop_assert_eq!(&pf * &pf, m.determinant().unwrap());
    }

    #[test]
    fn inverse_round_trip(m in matrix_strategy(3, 3)) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert_eq!(m.mul(&inv), Matrix::identity(3));
                prop_assert_eq!(inv.mul(&m), Matrix::identity(3));
            }
            Err(_) => prop_assert!(m.rank() < 3),
        }
    }

    #[test]
    fn kronecker_power_is_multiplicative(a in matrix_strategy(2, 2), b in matrix_strategy(2, 2)) {
        for n in 0..=2usize {
            prop_assert_eq!(
                a.kronecker_power(n).mul(&b.kronecker_power(n)),
                a.mul(&b).kronecker_power(n)
            );
        }
    }

    #[test]
    fn full_column_rank_preserves_rank(b in matrix_strategy(2, 3)) {
        // A with full column rank: rank(A B) = rank(B)
        let a = Matrix::from_int_rows(&[&[1, 0], &[2, 1], &[0, 3], &[1, -1]]);
        prop_assert_eq!(a.mul(&b).rank(), b.rank());
    }

    #[test]
    fn matrix_form_relayout_is_bijective(entries in proptest::collection::vec(scalar_strategy(), 27)) {
        let sig = Signature::new(3, 3, Role::Generator, entries).unwrap();
        for t in 1..=3 {
            let m = sig.matrix_form(t).unwrap();
            let back = Signature::from_matrix_form(3, 3, Role::Generator, t, &m).unwrap();
            prop_assert_eq!(back.entries(), sig.entries());
        }
    }

    #[test]
    fn degenerate_outer_products_factor_back(
        g1 in proptest::collection::vec(scalar_strategy(), 3),
        g2 in proptest::collection::vec(scalar_strategy(), 3),
    ) {
        let sig = Signature::from_fn(3, 2, Role::Generator, |d| &g1[d[0]] * &g2[d[1]]);
        let factors = sig.is_degenerate().expect("outer products are degenerate");
        let rebuilt = Signature::from_fn(3, 2, Role::Generator, |d| {
            &factors[0][d[0]] * &factors[1][d[1]]
        });
        prop_assert_eq!(rebuilt.entries(), sig.entries());
    }

    #[test]
    fn mgi_verdict_is_scale_invariant(
        entries in proptest::collection::vec(-3i64..=3, 16),
        num in 1i64..=5,
        den in 1i64..=5,
    ) {
        // even-support arity-4 vectors
        let vals: Vec<Scalar> = entries
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if (i as u32).count_ones() % 2 == 0 { Scalar::from_int(v) } else { Scalar::zero() }
            })
            .collect();
        let sig = Signature::new(2, 4, Role::Generator, vals).unwrap();
        let scaled = sig.scale(&Scalar::from_ratio(num, den));
        prop_assert_eq!(
            sig.is_standard_signature().unwrap(),
            scaled.is_standard_signature().unwrap()
        );
    }
}
