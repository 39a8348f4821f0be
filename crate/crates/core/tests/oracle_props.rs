use proptest::prelude::*;

use repzeta_core::lattice::linalg::{diag, q_int};
use repzeta_core::lattice::{builtin, sublattice, BuiltinParams, LatticeInput};
use repzeta_core::oracle::{
    census_from_source, full_census, thetyspectral_ratio, CensusKind, GeneratorSource, OracleConfig, Thety,
};

fn input(sel: &str) -> LatticeInput {
    builtin(sel, &BuiltinParams::new(3, 1)).unwrap()
}

fn source(sel: &str) -> (GeneratorSource, CensusKind) {
    let i = input(sel);
    match i.semidirect() {
        Some(sd) => (GeneratorSource::module_dual(sd), CensusKind::Relative),
        None => (GeneratorSource::coadjoint(&i.lattice()), CensusKind::Full),
    }
}

fn selector() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("sl2"), Just("natural:n=1"), Just("hk:k=1"), Just("sym2:n=1")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the census depends on the generated group, not on the generating set
    #[test]
    fn equivariant_under_generator_choice(
        sel in selector(),
        order in Just((0..3usize).collect::<Vec<_>>()).prop_shuffle(),
        flips in proptest::collection::vec(any::<bool>(), 3),
        workers in 1usize..4,
    ) {
        let (src, kind) = source(sel);
        let inv = src.inverted();
        let mats = order
            .iter()
            .zip(&flips)
            .map(|(&i, &f)| if f { inv.mats[i].clone() } else { src.mats[i].clone() })
            .collect();
        let alt = GeneratorSource { mats, ..src.clone() };
        let base = OracleConfig::default();
        let a = census_from_source(&src, kind, 2, &base).unwrap();
        let b = census_from_source(&alt, kind, 2, &OracleConfig { workers, ..base }).unwrap();
        prop_assert_eq!(&a, &b);
        let d = src.dim() as u32;
        prop_assert_eq!(a.enumerated_points(), 3u128.pow(2 * d));
    }
}

// p L against L for sl2: constant ratio q^3 on the common final range
#[test]
fn scaled_lattice_is_thetyspectral() {
    let sl2 = input("sl2").lattice();
    let sub = sublattice(&sl2, &diag(&[q_int(3), q_int(3), q_int(3)])).unwrap();
    let cfg = OracleConfig { lift_exp: Some(2), ..OracleConfig::default() };
    let a = full_census(&sub, 3, &cfg).unwrap();
    let b = full_census(&sl2, 3, &cfg).unwrap();
    match thetyspectral_ratio(&a, &b) {
        Thety::Constant { ratio, compared } => {
            assert_eq!(ratio, q_int(27));
            assert!(!compared.is_empty());
        }
        other => panic!("{other:?}"),
    }
}
