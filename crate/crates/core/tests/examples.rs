use std::sync::Arc;

use dualbent_core::constructions::{example5_closed_form, instantiate, quadratic_over, Construction};
use dualbent_core::field::GaloisField;
use dualbent_core::partitions::{run_equivalence_harness, PartitionSpec};
use dualbent_core::reproduce::{reproduce, Options, Scope};
use dualbent_core::scheme::{check_fiber_condition, SchemeCertificate};
use dualbent_core::vdb::{analyze, VFunc};
use dualbent_core::Error;

fn opts() -> Options {
    Options { source: None, seed: 1 }
}

#[test]
fn example1_pipeline_passes_every_check() {
    let rep = reproduce(Scope::Example1, &opts()).unwrap();
    let failed: Vec<_> = rep.checks.iter().filter(|c| !c.passed).map(|c| &c.name).collect();
    assert!(failed.is_empty(), "{failed:?}");
    // load, condition A, 4 PDS, scheme, 4 codes, 2 Hadamard checks, harness
    assert_eq!(rep.checks.len(), 14);
}

#[test]
fn example1_one_entry_perturbation_is_rejected() {
    let f = instantiate(&Construction::Example1).unwrap();
    for (x, shift) in [(1usize, 1u32), (777, 2), (4095, 3)] {
        let mut g = f.clone();
        g.values[x] = (g.values[x] + shift) % 4;
        let h = run_equivalence_harness(&PartitionSpec::from_function(&g), 1).unwrap();
        assert!(!h.all_true(), "perturbation at {x}");
    }
}

fn scheme_of(f: &VFunc) -> SchemeCertificate {
    let a = analyze(f).unwrap();
    let fr = check_fiber_condition(f, &a).unwrap();
    assert!(fr.condition && fr.consistent);
    fr.scheme
}

/// Class sizes and sorted intersection numbers, invariant under relabelling.
fn invariants(s: &SchemeCertificate) -> (Vec<usize>, Vec<i64>) {
    let mut sizes: Vec<usize> = s.classes.iter().map(|c| c.len()).collect();
    sizes.sort_unstable();
    let mut t = s.tensor.clone();
    t.sort_unstable();
    (sizes, t)
}

#[test]
fn example4_scheme_has_nine_classes() {
    let s = scheme_of(&instantiate(&Construction::Example4).unwrap());
    assert!(s.is_scheme && s.symmetric && s.row_sums_hold());
    assert_eq!(s.class_count(), 9);
    assert_eq!(s.classes.iter().map(|c| c.len()).sum::<usize>(), 729);
}

#[test]
fn example4_scheme_does_not_depend_on_the_field_basis() {
    let default = GaloisField::with_default(3, 6).unwrap();
    let small = Arc::new(GaloisField::with_default(3, 2).unwrap());
    let mut other = None;
    'search: for t in 0..3u32.pow(6) {
        let mut poly: Vec<u32> = (0..6).map(|i| t / 3u32.pow(i) % 3).collect();
        poly.push(1);
        if poly[0] == 0 {
            continue;
        }
        if let Ok(g) = GaloisField::new(3, &poly) {
            if g.modulus() != default.modulus() {
                other = Some(g);
                break 'search;
            }
        }
    }
    let other = Arc::new(other.expect("a second irreducible sextic"));
    let a = scheme_of(&instantiate(&Construction::Example4).unwrap());
    let b = scheme_of(&quadratic_over(other, small, 1).unwrap());
    assert_eq!(b.class_count(), 9);
    assert_eq!(invariants(&a), invariants(&b));
}

#[test]
fn reduced_composite_gives_a_nine_class_scheme() {
    let f = instantiate(&Construction::by_name("cor6-small").unwrap()).unwrap();
    assert_eq!(f.values.len(), 729);
    let s = scheme_of(&f);
    assert!(s.is_scheme);
    assert_eq!(s.class_count(), 9);
}

#[test]
fn reduced_example5_matches_its_closed_form() {
    let f = instantiate(&Construction::Example5Reduced).unwrap();
    assert_eq!(example5_closed_form(5, 2, 2).unwrap(), f);
    assert_eq!(scheme_of(&f).class_count(), 25);
}

#[test]
fn full_example5_is_guarded() {
    match instantiate(&Construction::Example5) {
        Err(Error::Guard { .. }) => {}
        other => panic!("expected a guard error, got {:?}", other.map(|f| f.values.len())),
    }
}

#[test]
fn example4_reports_are_byte_identical() {
    let a = reproduce(Scope::Example4, &opts()).unwrap();
    let b = reproduce(Scope::Example4, &opts()).unwrap();
    assert!(a.passed());
    assert_eq!(a.to_json_string(), b.to_json_string());
}

#[test]
fn harness_is_consistent_on_small_ternary_partitions() {
    let yes = instantiate(&Construction::by_name("mm:3,2,2,5").unwrap()).unwrap();
    let h = run_equivalence_harness(&PartitionSpec::from_function(&yes), 1).unwrap();
    assert!(h.all_true(), "{h:?}");
    assert_eq!(h.eps, Some(1));
    let no = instantiate(&Construction::by_name("cor5:3,4,2,1").unwrap()).unwrap();
    let h = run_equivalence_harness(&PartitionSpec::from_function(&no), 1).unwrap();
    assert!(h.all_false(), "{h:?}");
}
