//! Fast routes against their independent oracles.

use dualbent_core::codes::{weight_distribution_direct, weight_distribution_transform};
use dualbent_core::field::SpaceDesc;
use dualbent_core::hadamard::{check_product_identity, check_unit_condition, product_by_matrices};
use dualbent_core::selftest::{
    gf4_matrix_oracle, bent_hadamard_sweep, oracle_spaces, partition_sweep, pds_sweep, walsh_sweep,
};
use dualbent_core::constructions::{instantiate, Construction};
use dualbent_core::vdb::check_vectorial_bent;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn walsh_fast_matches_naive_on_every_small_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spaces = oracle_spaces().unwrap();
    assert!(spaces.iter().all(|s| s.size() <= 1 << 12));
    let s = walsh_sweep(&spaces, 50, &mut rng).unwrap();
    assert_eq!(s.cases, 50 * spaces.len() as u64);
    assert!(s.ok(), "{:?}", s.notes);
    assert!(s.positives > 0);
}

#[test]
fn pds_character_test_matches_difference_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let s = pds_sweep(&SpaceDesc::dot(2, 6).unwrap(), 200, &mut rng).unwrap();
    assert!(s.ok(), "{:?}", s.notes);
    assert!(s.positives > 0);
    for space in [SpaceDesc::with_defaults(3, &[2, 2]).unwrap(), SpaceDesc::with_defaults(2, &[6, 6]).unwrap()] {
        let s = pds_sweep(&space, 40, &mut rng).unwrap();
        assert!(s.ok(), "{:?}", s.notes);
    }
}

#[test]
fn pds_edge_cases() {
    let s = SpaceDesc::dot(3, 2).unwrap();
    let empty = dualbent_core::pds::check_pds(&s, &[]).unwrap();
    assert_eq!(empty, dualbent_core::pds::check_pds_bruteforce(&s, &[]).unwrap());
    assert!(empty.is_some());
    let a = s.from_coords(&[1, 2]).unwrap();
    let pair = [a, s.neg(a)];
    assert_eq!(
        dualbent_core::pds::check_pds(&s, &pair).unwrap(),
        dualbent_core::pds::check_pds_bruteforce(&s, &pair).unwrap()
    );
}

#[test]
fn partition_criteria_match_the_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let s = partition_sweep(24, &mut rng).unwrap();
    assert!(s.ok(), "{:?}", s.notes);
    // The spread, GF(4) and x1·x2^5 partitions.
    assert!(s.positives >= 3);
}

#[test]
fn bent_iff_generalized_hadamard() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let spaces = [SpaceDesc::dot(2, 4).unwrap(), SpaceDesc::dot(3, 2).unwrap()];
    let s = bent_hadamard_sweep(&spaces, 100, &mut rng).unwrap();
    assert!(s.ok(), "{:?}", s.notes);
    assert!(s.positives > 0 && s.positives < s.cases);
}

#[test]
fn gf4_multiplication_products_match_literal_matrices() {
    let s = gf4_matrix_oracle().unwrap();
    assert!(s.ok() && s.positives == 3, "{:?}", s);
}

#[test]
fn walsh_route_products_match_literal_matrices_for_odd_p() {
    let f = instantiate(&Construction::Cor5Quadratic { p: 3, n: 4, m: 2, alpha: 1 }).unwrap();
    let vb = check_vectorial_bent(&f).unwrap();
    let (unit, eps) = check_unit_condition(&vb, 3).unwrap();
    assert!(unit);
    for c in 1..9 {
        for d in 1..9 {
            if c == d {
                continue;
            }
            let r = check_product_identity(&f, &vb, c, d, eps).unwrap();
            assert_eq!(product_by_matrices(&f, c, d, r.target, eps.unwrap()).unwrap(), r.holds, "pair ({c}, {d})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_weights_agree(seed in any::<u64>(), which in 0usize..4) {
        let space = [
            SpaceDesc::dot(2, 6).unwrap(),
            SpaceDesc::with_defaults(3, &[2, 2]).unwrap(),
            SpaceDesc::with_defaults(5, &[2]).unwrap(),
            SpaceDesc::with_defaults(2, &[4, 4]).unwrap(),
        ][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d: Vec<u32> = (1..space.size()).filter(|_| rand::Rng::gen_bool(&mut rng, 0.25)).collect();
        prop_assert_eq!(weight_distribution_direct(&space, &d), weight_distribution_transform(&space, &d).unwrap());
    }
}
