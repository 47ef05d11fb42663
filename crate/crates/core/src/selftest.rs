//! Seeded sweeps of the fast routes against their oracles, plus small
//! instance generators shared by the test suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::codes::{
    check_two_weight_projective, pds_parameters_from_weights, projective_reduce, weight_distribution_direct,
    weight_distribution_transform,
};
use crate::constructions::{instantiate, Construction};
use crate::error::{Error, Result};
use crate::field::{GaloisField, SpaceDesc};
use crate::hadamard::{check_generalized_hadamard, check_product_identity, check_unit_condition, GhMatrix};
use crate::io::{parse_function, write_function};
use crate::partitions::{check_bent_partition_direct, check_bent_partition_p2, check_condition_c, PartitionSpec};
use crate::pds::{check_pds, check_pds_bruteforce};
use crate::report::{int, Check, RunReport};
use crate::vdb::{check_vectorial_bent, component, VFunc};
use crate::walsh::{
    check_dual_of_dual, check_inverse_transform, classify_bent, parseval_holds, walsh_fast, walsh_naive, PFunc,
};

/// Outcome of an oracle comparison.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sweep {
    pub cases: u64,
    /// Cases where the property held or the certificate was positive.
    pub positives: u64,
    pub mismatches: u64,
    pub notes: Vec<String>,
}

impl Sweep {
    pub fn ok(&self) -> bool {
        self.cases > 0 && self.mismatches == 0
    }
    fn record(&mut self, agree: bool, positive: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        self.positives += u64::from(positive);
        if !agree {
            self.mismatches += 1;
            if self.notes.len() < 10 {
                self.notes.push(what());
            }
        }
    }
    pub fn merge(&mut self, other: Sweep) {
        self.cases += other.cases;
        self.positives += other.positives;
        self.mismatches += other.mismatches;
        self.notes.extend(other.notes);
    }
    pub fn json(&self) -> serde_json::Value {
        json!({"cases": int(self.cases), "positives": int(self.positives), "mismatches": int(self.mismatches), "notes": self.notes})
    }
}

pub fn random_pfunc(space: &SpaceDesc, rng: &mut impl Rng) -> PFunc {
    let p = space.p();
    PFunc { space: space.clone(), values: (0..space.size()).map(|_| rng.gen_range(0..p) as u8).collect() }
}

/// Σ_{i≤j} a_ij x_i x_j + Σ b_i x_i with random coefficients, in the
/// coordinates of `space`.
pub fn random_quadratic(space: &SpaceDesc, rng: &mut impl Rng) -> PFunc {
    let p = space.p();
    let n = space.dim();
    let a: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
    let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p)).collect();
    PFunc::from_fn(space, |x| {
        let c = space.coords(x);
        let mut acc = 0;
        for i in 0..n {
            acc += b[i] * c[i];
            for j in i..n {
                acc += a[i * n + j] * c[i] * c[j] % p;
            }
        }
        acc
    })
}

/// Σ_{i≤j} a_ij x_i x_j with random coefficients.
pub fn random_quadratic_form(space: &SpaceDesc, rng: &mut impl Rng) -> PFunc {
    let p = space.p();
    let n = space.dim();
    let a: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
    PFunc::from_fn(space, |x| {
        let c = space.coords(x);
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| a[i * n + j] * c[i] * c[j] % p).sum()
    })
}

/// A random subset of V* closed under negation.
pub fn random_symmetric_set(space: &SpaceDesc, rng: &mut impl Rng) -> Vec<u32> {
    let mut taken = vec![false; space.size() as usize];
    let mut out = Vec::new();
    for x in 1..space.size() {
        if taken[x as usize] {
            continue;
        }
        let y = space.neg(x);
        taken[x as usize] = true;
        taken[y as usize] = true;
        if rng.gen_bool(0.5) {
            out.push(x);
            if y != x {
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Spaces with p^n ≤ 2^12 covering dot products and trace forms.
pub fn oracle_spaces() -> Result<Vec<SpaceDesc>> {
    let mut out = Vec::new();
    for k in 1..=4 {
        out.push(SpaceDesc::dot(2, k)?);
    }
    for f in [&[2, 2][..], &[3, 3], &[4, 4], &[5, 5], &[6, 6], &[2, 1, 1]] {
        out.push(SpaceDesc::with_defaults(2, f)?);
    }
    for f in [&[1][..], &[2], &[2, 2], &[3, 3], &[6], &[7]] {
        out.push(SpaceDesc::with_defaults(3, f)?);
    }
    for f in [&[1][..], &[2], &[2, 2], &[5]] {
        out.push(SpaceDesc::with_defaults(5, f)?);
    }
    for f in [&[2][..], &[4]] {
        out.push(SpaceDesc::with_defaults(7, f)?);
    }
    Ok(out)
}

pub fn walsh_sweep(spaces: &[SpaceDesc], per_space: usize, rng: &mut impl Rng) -> Result<Sweep> {
    let mut s = Sweep::default();
    for space in spaces {
        for i in 0..per_space {
            let f = if i % 2 == 0 { random_pfunc(space, rng) } else { random_quadratic(space, rng) };
            let agree = walsh_fast(&f)? == walsh_naive(&f)?;
            let bent = classify_bent(&f)?.bent;
            s.record(agree, bent, || format!("{}: function {i}", space.header()));
        }
    }
    Ok(s)
}

/// Random symmetric sets, with zero sets of even quadratics mixed in.
pub fn pds_sweep(space: &SpaceDesc, count: usize, rng: &mut impl Rng) -> Result<Sweep> {
    let mut s = Sweep::default();
    let known: Vec<Vec<u32>> = (0..4)
        .map(|_| {
            let q = random_quadratic(space, rng);
            let even = |x: u32| q.values[x as usize] as u32 + q.values[space.neg(x) as usize] as u32;
            (1..space.size()).filter(|&x| even(x) % space.p() == 0).collect()
        })
        .collect();
    for i in 0..count {
        let d = if i % 5 == 4 { known[i / 5 % known.len()].clone() } else { random_symmetric_set(space, rng) };
        let fast = check_pds(space, &d)?;
        let slow = check_pds_bruteforce(space, &d)?;
        s.record(fast == slow, fast.is_some(), || format!("set {i} of size {}", d.len()));
    }
    Ok(s)
}

/// Parseval and the inverse transform on every spectrum, dual-of-dual on
/// every weakly regular bent function. Returns (all held, weakly regular).
pub fn spectral_properties(f: &PFunc) -> Result<(bool, bool)> {
    let spec = classify_bent(f)?;
    let mut ok = parseval_holds(&f.space, &spec.table) && check_inverse_transform(f, &spec.table)?;
    let wr = spec.weakly_regular();
    if wr {
        ok &= check_dual_of_dual(f, &spec)?;
    }
    Ok((ok, wr))
}

pub fn property_sweep(functions: &[PFunc]) -> Result<Sweep> {
    let mut s = Sweep::default();
    for (i, f) in functions.iter().enumerate() {
        let (ok, wr) = spectral_properties(f)?;
        s.record(ok, wr, || format!("function {i} on {}", f.space.header()));
    }
    Ok(s)
}

/// Bent ⇔ generalized Hadamard, both routes, on random and quadratic
/// functions.
pub fn bent_hadamard_sweep(spaces: &[SpaceDesc], per_space: usize, rng: &mut impl Rng) -> Result<Sweep> {
    let mut s = Sweep::default();
    for space in spaces {
        for i in 0..per_space {
            let f = if i % 2 == 0 { random_pfunc(space, rng) } else { random_quadratic(space, rng) };
            let r = check_generalized_hadamard(&GhMatrix::new(f))?;
            s.record(r.bent == r.generalized_hadamard && r.direct_checked, r.bent, || {
                format!("{}: function {i}", space.header())
            });
        }
    }
    Ok(s)
}

/// PDS ⇔ two-weight code on random scalar-closed sets in V_4^(3), with
/// parameters tied by the weight formulas. Empty, full and non-spanning sets
/// are skipped since the code is degenerate there.
pub fn pds_code_sweep(count: usize, rng: &mut impl Rng) -> Result<Sweep> {
    let space = SpaceDesc::dot(3, 4)?;
    let points: Vec<u32> =
        (1..space.size()).filter(|&x| crate::codes::canonical_representative(&space, x) == x).collect();
    let f = instantiate(&Construction::Cor5Quadratic { p: 3, n: 4, m: 2, alpha: 1 })?;
    // Difference sets only depend on the additive group, so preimage classes
    // carry over to the dot-product space unchanged.
    let classes: Vec<Vec<u32>> =
        crate::vdb::punctured_preimage_sets(&f).into_iter().filter(|c| !c.is_empty()).collect();
    let mut s = Sweep::default();
    let mut tries = 0;
    while (s.cases as usize) < count {
        tries += 1;
        if tries > 100 * count {
            return Err(Error::Inconsistency("could not draw enough non-degenerate sets".into()));
        }
        let mut d: Vec<u32> = if tries % 3 == 0 {
            classes.iter().filter(|_| rng.gen_bool(0.5)).flatten().copied().collect()
        } else if tries % 3 == 1 {
            // Zero set or nonzero-square set of a quadratic form.
            let q = random_quadratic_form(&space, rng);
            let want: &[u8] = if rng.gen_bool(0.5) { &[0] } else { &[1] };
            (1..space.size()).filter(|&x| want.contains(&q.values[x as usize])).collect()
        } else {
            points.iter().copied().filter(|_| rng.gen_bool(0.5)).flat_map(|x| [x, space.neg(x)]).collect()
        };
        d.sort_unstable();
        if d.is_empty() || d.len() as u32 == space.size() - 1 {
            continue;
        }
        let (dt, closed) = projective_reduce(&space, &d)?;
        let rep = check_two_weight_projective(&space, &d)?;
        if !closed || rep.code.rank < space.dim() {
            continue;
        }
        let pds = check_pds(&space, &d)?;
        let agree = match (pds, rep.two_weight) {
            (Some(c), true) => {
                let w = rep.code.nonzero_weights();
                let (v, k, l, mu) = pds_parameters_from_weights(3, 4, dt.len() as i64, w[0] as i64, w[1] as i64);
                c.regular && c.has_parameters(v, k, l, mu)
            }
            (None, false) => true,
            _ => false,
        };
        s.record(agree, rep.two_weight, || format!("set of size {}", d.len()));
    }
    Ok(s)
}

/// The Desarguesian spread of GF(8)^2 grouped 3 + 2 + 2 + 2 into a depth-4
/// partition of V_6^(2); the three-element group carries 0.
pub fn spread_partition() -> Result<PartitionSpec> {
    let f8 = Arc::new(GaloisField::with_default(2, 3)?);
    let dom = SpaceDesc::from_fields(vec![f8.clone(), f8.clone()])?;
    let cod = SpaceDesc::dot(2, 2)?;
    // Spread element: 0 for x = 0, 1 + y/x otherwise.
    let element = |v: u32| {
        let (x, y) = (dom.component(v, 0), dom.component(v, 1));
        match f8.inv(x) {
            None => 0,
            Some(ix) => 1 + f8.mul(y, ix),
        }
    };
    let group = [0, 0, 0, 1, 1, 2, 2, 3, 3];
    let labels = (0..dom.size()).map(|v| if v == 0 { 0 } else { group[element(v) as usize] }).collect();
    PartitionSpec::new(dom, cod, labels)
}

/// Swaps two random points from different parts; part sizes are kept.
pub fn perturb(g: &PartitionSpec, rng: &mut impl Rng) -> PartitionSpec {
    let mut labels = g.induced.values.clone();
    loop {
        let a = rng.gen_range(0..labels.len());
        let b = rng.gen_range(0..labels.len());
        if labels[a] != labels[b] {
            labels.swap(a, b);
            break;
        }
    }
    PartitionSpec { induced: VFunc { values: labels, ..g.induced.clone() } }
}

/// A random relabelling of V* with the same part sizes.
fn shuffled(g: &PartitionSpec, rng: &mut impl Rng) -> PartitionSpec {
    let mut labels = g.induced.values.clone();
    labels[1..].shuffle(rng);
    PartitionSpec { induced: VFunc { values: labels, ..g.induced.clone() } }
}

/// F(x1, x2) = x1·x2 on GF(4)^2.
pub fn gf4_multiplication() -> Result<VFunc> {
    let dom = SpaceDesc::with_defaults(2, &[2, 2])?;
    let cod = SpaceDesc::with_defaults(2, &[2])?;
    let f4 = cod.field(0)?.clone();
    VFunc::from_fn(&dom, &cod, |x| f4.mul(dom.component(x, 0), dom.component(x, 1)))
}

/// Spectral (p = 2) or Condition 𝒞 (p odd) verdicts against the
/// definitional enumeration, on positive instances and their perturbations.
/// Condition 𝒞 is only sufficient, so for p odd a positive must be
/// confirmed by the definition.
pub fn partition_sweep(perturbations: usize, rng: &mut impl Rng) -> Result<Sweep> {
    let mut s = Sweep::default();
    let base = vec![spread_partition()?, PartitionSpec::from_function(&gf4_multiplication()?)];
    let mut binary = base.clone();
    for g in &base {
        for i in 0..perturbations {
            binary.push(if i % 4 == 3 { shuffled(g, rng) } else { perturb(g, rng) });
        }
    }
    for (i, g) in binary.iter().enumerate() {
        let spectral = check_bent_partition_p2(g)?.is_bent_partition;
        let direct = check_bent_partition_direct(g)?.is_bent_partition;
        s.record(spectral == direct, direct, || format!("binary instance {i}: spectral {spectral}, direct {direct}"));
    }
    // x1·x2^5 on GF(9)^2 satisfies Condition A; the quadratic does not and
    // its partition is not bent.
    let mut ternary = Vec::new();
    for c in [Construction::MmTraceMonomial { p: 3, k: 2, m: 2, d: 5 }, Construction::Cor5Quadratic { p: 3, n: 4, m: 2, alpha: 3 }] {
        let g = PartitionSpec::from_function(&instantiate(&c)?);
        ternary.push(g.clone());
        for _ in 0..perturbations.min(8) {
            ternary.push(perturb(&g, rng));
        }
    }
    for (i, g) in ternary.iter().enumerate() {
        let direct = check_bent_partition_direct(g)?.is_bent_partition;
        let (c, _) = check_condition_c(g)?;
        s.record(!c || direct, direct, || format!("ternary instance {i}: condition C {c}, direct {direct}"));
    }
    Ok(s)
}

/// Literal products of the GF(4)-multiplication matrices against the Walsh
/// route, for all three pairs.
pub fn gf4_matrix_oracle() -> Result<Sweep> {
    let f = gf4_multiplication()?;
    let vb = check_vectorial_bent(&f)?;
    let mut s = Sweep::default();
    for c in 1..4 {
        for d in c + 1..4 {
            let r = check_product_identity(&f, &vb, c, d, None)?;
            s.record(r.holds && r.matrix_checked == Some(true), r.holds, || format!("pair ({c}, {d})"));
        }
    }
    Ok(s)
}

/// Bent Boolean functions on V_4^(2), counted through the library.
pub fn bent_census() -> Result<u64> {
    let space = SpaceDesc::dot(2, 4)?;
    let mut count = 0;
    for t in 0u32..1 << 16 {
        let f = PFunc::from_fn(&space, |x| (t >> x) & 1);
        count += u64::from(classify_bent(&f)?.bent);
    }
    Ok(count)
}

pub fn run(seed: u64) -> Result<RunReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = RunReport::new("selftest", seed);
    let spaces: Vec<SpaceDesc> = oracle_spaces()?.into_iter().filter(|s| s.size() <= 729).collect();

    let w = walsh_sweep(&spaces, 4, &mut rng)?;
    rep.push(Check::new("walsh_fast_vs_naive", w.ok(), w.json()));

    let mut p = Sweep::default();
    for space in [SpaceDesc::dot(2, 6)?, SpaceDesc::with_defaults(3, &[2, 2])?, SpaceDesc::with_defaults(5, &[2])?] {
        p.merge(pds_sweep(&space, 10, &mut rng)?);
    }
    rep.push(Check::new("pds_vs_bruteforce", p.ok(), p.json()));

    let mut mismatches = 0u64;
    for s in &spaces[..6] {
        for _ in 0..5 {
            let d: Vec<u32> = (1..s.size()).filter(|_| rng.gen_bool(0.3)).collect();
            if weight_distribution_direct(s, &d) != weight_distribution_transform(s, &d)? {
                mismatches += 1;
            }
        }
    }
    rep.push(Check::new("code_weights_direct_vs_transform", mismatches == 0, json!({"mismatches": int(mismatches)})));

    let f = instantiate(&Construction::Cor5Quadratic { p: 3, n: 4, m: 2, alpha: 1 })?;
    let comps = (1..f.codomain.size()).map(|c| component(&f, c)).collect::<Result<Vec<_>>>()?;
    let pr = property_sweep(&comps)?;
    rep.push(Check::new("spectral_identities", pr.ok() && pr.positives == pr.cases, pr.json()));

    let l5 = bent_hadamard_sweep(&[SpaceDesc::dot(2, 4)?, SpaceDesc::dot(3, 2)?], 10, &mut rng)?;
    rep.push(Check::new("bent_iff_hadamard", l5.ok(), l5.json()));

    let l6 = pds_code_sweep(20, &mut rng)?;
    rep.push(Check::new("pds_iff_two_weight", l6.ok(), l6.json()));

    let ps = partition_sweep(4, &mut rng)?;
    rep.push(Check::new("partition_spectral_vs_definitional", ps.ok(), ps.json()));

    // σ is not the identity here, so some pairs fail; the fast route and the
    // literal matrices must still agree on every pair.
    let vb = check_vectorial_bent(&f)?;
    let (unit, eps) = check_unit_condition(&vb, 3)?;
    let mut ok = unit;
    let mut checked = 0u64;
    let mut holding = 0u64;
    for c in 1..9 {
        for d in 1..9 {
            if c != d {
                let r = check_product_identity(&f, &vb, c, d, eps)?;
                ok &= r.matrix_checked == Some(true);
                checked += 1;
                holding += u64::from(r.holds);
            }
        }
    }
    rep.push(Check::new("product_identity_vs_matrices", ok, json!({"pairs": int(checked), "holding": int(holding)})));
    let g4 = gf4_matrix_oracle()?;
    rep.push(Check::new("gf4_products_vs_matrices", g4.ok() && g4.positives == 3, g4.json()));

    let g = instantiate(&Construction::Example4)?;
    let back = parse_function(&write_function(&g))?;
    rep.push(Check::new("function_file_round_trip", back == g, json!({"construction": "example4"})));
    Ok(rep)
}
