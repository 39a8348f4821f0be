use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use repzeta_core::catalog::{formula, subgroup_factor, FormulaFamily};
use repzeta_core::lattice::linalg::{det, vp_rat, QMat};
use repzeta_core::lattice::{builtin, sublattice, BuiltinParams};
use repzeta_core::polyring::{abscissa, series_expand, specialize_series};

fn family() -> impl Strategy<Value = FormulaFamily> {
    prop_oneof![
        (1u32..=2).prop_map(|m| FormulaFamily::Sl2Base { m }),
        (1u32..=4, 1u32..=2).prop_map(|(n, m)| FormulaFamily::NaturalPower { n, m }),
        (1u32..=4, 1u32..=2).prop_map(|(n, m)| FormulaFamily::Sym2Power { n, m }),
        (1u32..=3).prop_map(|k| FormulaFamily::HkSubgroup { k }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bundle_coherence(f in family()) {
        let b = formula(&f).unwrap();
        prop_assert_eq!(&b.full, &(&b.base * &b.relative_shifted));
        prop_assert_eq!(b.relative_unshifted.subst_t_scaled(1), b.relative_shifted);
    }

    #[test]
    fn counts_are_counts(f in family(), q in prop_oneof![Just(3i64), Just(5i64)]) {
        let b = formula(&f).unwrap();
        let qb = BigInt::from(q);
        let full = specialize_series(&series_expand(&b.full, 8).unwrap(), &qb).unwrap();
        for c in &full {
            prop_assert!(c.is_integer() && !c.is_negative(), "coefficient {}", c);
        }
        let rel = specialize_series(&series_expand(&b.relative_shifted, 8).unwrap(), &qb).unwrap();
        for (a, c) in rel.iter().enumerate() {
            let per_dim = c / BigRational::from_integer(qb.pow(a as u32));
            prop_assert!(per_dim.is_integer() && !per_dim.is_negative(), "t^{}: {}", a, c);
        }
    }
}

#[test]
fn abscissa_grid() {
    for n in 1..=4i64 {
        for m in 1..=2 {
            let f = formula(&FormulaFamily::NaturalPower { n: n as u32, m }).unwrap().full;
            let want = [
                BigRational::new((n + 1).into(), 2.into()),
                BigRational::new((2 * n).into(), 3.into()),
                BigRational::from_integer(1.into()),
            ]
            .into_iter()
            .max()
            .unwrap();
            assert_eq!(abscissa(&f).unwrap().alpha_rational(), want, "natural n = {n}");

            let f = formula(&FormulaFamily::Sym2Power { n: n as u32, m }).unwrap().full;
            let want = if n == 1 { BigRational::new(3.into(), 2.into()) } else { BigRational::from_integer(n.into()) };
            assert_eq!(abscissa(&f).unwrap().alpha_rational(), want, "sym2 n = {n}");
        }
    }
}

// 3^k times a product of elementary matrices, or a raw small matrix
fn basis_change() -> impl Strategy<Value = Vec<i64>> {
    let elementary = (0u32..=2, proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6))
        .prop_map(|(k, ops)| {
            let mut m = vec![0i64; 9];
            for i in 0..3 {
                m[4 * i] = 3i64.pow(k);
            }
            for (r, c, a) in ops {
                if r != c {
                    // column operation: col c += a * col r
                    for i in 0..3 {
                        m[3 * i + c] += a * m[3 * i + r];
                    }
                }
            }
            m
        });
    prop_oneof![3 => elementary, 1 => proptest::collection::vec(-9i64..=9, 9)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn subgroup_factor_on_sl2(entries in basis_change()) {
        let spec = builtin("sl2", &BuiltinParams::new(3, 1)).unwrap().lattice();
        let xi: QMat = entries
            .chunks(3)
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let d = det(&xi);
        prop_assume!(!d.is_zero());
        prop_assume!(sublattice(&spec, &xi).is_ok());
        let r = subgroup_factor(&spec, &xi).unwrap();
        prop_assert_eq!(r.factor_exponent, vp_rat(&d, 3));
    }
}
