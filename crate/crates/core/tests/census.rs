use dualbent_core::selftest::bent_census;

/// Counts bent Boolean functions on four variables straight from the
/// definition: every character sum Σ (-1)^{f(x) + a·x} has absolute value 4.
fn census_by_definition() -> u64 {
    let mut count = 0;
    for t in 0u32..1 << 16 {
        let bent = (0..16u32).all(|a| {
            let sum: i32 = (0..16u32)
                .map(|x| if ((t >> x) ^ (a & x).count_ones()) & 1 == 0 { 1 } else { -1 })
                .sum();
            sum.abs() == 4
        });
        count += u64::from(bent);
    }
    count
}

#[test]
fn bent_census_on_four_variables_is_stable() {
    let oracle = census_by_definition();
    assert_eq!(oracle, 896);
    assert_eq!(bent_census().unwrap(), oracle);
}
