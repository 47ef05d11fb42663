use dualbent_core::constructions::{instantiate, Construction};
use dualbent_core::field::SpaceDesc;
use dualbent_core::io::{parse_function, parse_partition, parse_subset, write_function, write_partition, write_subset};
use dualbent_core::selftest::{pds_code_sweep, random_pfunc, random_quadratic, random_symmetric_set, spectral_properties};
use dualbent_core::vdb::{check_vectorial_bent, VFunc};
use dualbent_core::walsh::classify_bent;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parseval_and_inverse_on_binary_functions(seed in any::<u64>()) {
        let space = SpaceDesc::dot(2, 6).unwrap();
        let f = random_pfunc(&space, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(spectral_properties(&f).unwrap().0);
    }

    #[test]
    fn dual_of_dual_on_quadratics(seed in any::<u64>(), which in 0usize..4) {
        let space = [
            SpaceDesc::dot(3, 4).unwrap(),
            SpaceDesc::dot(3, 3).unwrap(),
            SpaceDesc::with_defaults(5, &[2]).unwrap(),
            SpaceDesc::dot(2, 6).unwrap(),
        ][which].clone();
        let f = random_quadratic(&space, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(spectral_properties(&f).unwrap().0);
    }

    #[test]
    fn function_files_round_trip(seed in any::<u64>(), which in 0usize..3) {
        let (dom, cod) = [
            (SpaceDesc::dot(3, 4).unwrap(), SpaceDesc::dot(3, 2).unwrap()),
            (SpaceDesc::with_defaults(2, &[3, 3]).unwrap(), SpaceDesc::with_defaults(2, &[2]).unwrap()),
            (SpaceDesc::with_defaults(5, &[2]).unwrap(), SpaceDesc::dot(5, 1).unwrap()),
        ][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..dom.size()).map(|_| rng.gen_range(0..cod.size())).collect();
        let f = VFunc::new(dom, cod, values).unwrap();
        prop_assert_eq!(&parse_function(&write_function(&f)).unwrap(), &f);
        prop_assert_eq!(&parse_partition(&write_partition(&f)).unwrap(), &f);
    }

    #[test]
    fn subset_files_round_trip(seed in any::<u64>()) {
        let space = SpaceDesc::with_defaults(3, &[2, 2]).unwrap();
        let d = random_symmetric_set(&space, &mut ChaCha8Rng::seed_from_u64(seed));
        let (s, back) = parse_subset(&write_subset(&space, &d)).unwrap();
        prop_assert_eq!(s.header(), space.header());
        prop_assert_eq!(back, d);
    }
}

#[test]
fn pds_iff_two_weight_code_on_100_sets() {
    let s = pds_code_sweep(100, &mut ChaCha8Rng::seed_from_u64(21)).unwrap();
    assert_eq!(s.cases, 100);
    assert!(s.ok(), "{:?}", s.notes);
    assert!(s.positives > 0);
}

#[test]
fn every_example_component_satisfies_the_spectral_identities() {
    for c in [Construction::Example1, Construction::Example4, Construction::Example5Reduced] {
        let f = instantiate(&c).unwrap();
        for i in 1..f.codomain.size() {
            let g = dualbent_core::vdb::component(&f, i).unwrap();
            assert_eq!(spectral_properties(&g).unwrap(), (true, true), "{} component {i}", c.name());
        }
    }
}

/// ε_{F_{ac}}(0) = ε_{F_c}(0) η(a) for a in the codomain field.
#[test]
fn component_signs_scale_by_the_quadratic_character() {
    let f = instantiate(&Construction::by_name("cor5-odd").unwrap()).unwrap();
    let vb = check_vectorial_bent(&f).unwrap();
    let eps0 = |c: u32| vb.spectra[c as usize - 1].eps.as_ref().unwrap()[0];
    let cod = &f.codomain;
    let mut minus = 0;
    for c in 1..cod.size() {
        for a in 1..cod.size() {
            let eta = cod.quadratic_character(0, a).unwrap();
            minus += u32::from(eta < 0);
            let ac = cod.multiply(0, a, c).unwrap();
            let scaled = eps0(c).mul(dualbent_core::cyclotomic::UnitTag::from_sign(eta));
            assert_eq!(eps0(ac), scaled, "a = {a}, c = {c}");
        }
    }
    assert!(minus > 0);
}

#[test]
fn constant_functions_are_not_bent() {
    for space in [SpaceDesc::dot(2, 4).unwrap(), SpaceDesc::dot(3, 2).unwrap()] {
        let f = dualbent_core::walsh::PFunc::zero(&space);
        assert!(!classify_bent(&f).unwrap().bent);
        assert!(spectral_properties(&f).unwrap().0);
    }
}
