//! Bent partitions: the spectral criterion for p = 2, the definitional
//! enumeration oracle, Condition 𝒞 for odd p and the equivalence harness
//! tying partitions to difference sets, schemes, codes and Hadamard
//! matrices.

use std::collections::BTreeSet;

use crate::codes::{check_two_weight_projective, expected_code_parameters};
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::{ensure, Guards};
use crate::hadamard::{check_generalized_hadamard, check_product_identity, check_unit_condition, GhMatrix};
use crate::pds::check_pds;
use crate::scheme::{build_translation_scheme, check_amorphy, class_pds};
use crate::vdb::{check_condition_a, check_vectorial_bent, component, VFunc};
use crate::walsh::{classify_bent, PFunc};

/// A partition {A_i : i ∈ V_m} of V_n, stored as the induced function
/// F(x) = i for x ∈ A_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    pub induced: VFunc,
}

impl PartitionSpec {
    pub fn new(domain: SpaceDesc, codomain: SpaceDesc, labels: Vec<u32>) -> Result<Self> {
        if domain.p() != codomain.p() {
            return Err(Error::ModulusMismatch(domain.p(), codomain.p()));
        }
        Ok(PartitionSpec { induced: VFunc::new(domain, codomain, labels)? })
    }
    pub fn from_function(f: &VFunc) -> Self {
        PartitionSpec { induced: f.clone() }
    }
    pub fn space(&self) -> &SpaceDesc {
        &self.induced.domain
    }
    pub fn depth(&self) -> usize {
        self.induced.codomain.size() as usize
    }
    /// A_i for every i, possibly empty.
    pub fn parts(&self) -> Vec<Vec<u32>> {
        let mut parts = vec![Vec::new(); self.depth()];
        for (x, &i) in self.induced.values.iter().enumerate() {
            parts[i as usize].push(x as u32);
        }
        parts
    }
    /// The index i_0 with 0 ∈ A_{i_0}.
    pub fn zero_part(&self) -> u32 {
        self.induced.values[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityReport {
    pub sizes: Vec<u64>,
    pub holds: bool,
    pub exceptional: Option<u32>,
    /// +1 when the common size is p^{n/2-m}(p^{n/2} - 1), -1 for the other
    /// branch.
    pub sign: Option<i64>,
    pub empty_parts: Vec<u32>,
}

/// All parts but one share the size p^{n/2-m}(p^{n/2} ∓ 1); the remaining
/// one differs by ±p^{n/2}.
pub fn check_cardinalities(g: &PartitionSpec) -> CardinalityReport {
    let sizes: Vec<u64> = g.parts().iter().map(|a| a.len() as u64).collect();
    let empty_parts: Vec<u32> = (0..sizes.len() as u32).filter(|&i| sizes[i as usize] == 0).collect();
    let p = g.space().p() as i64;
    let (n, m) = (g.induced.n(), g.induced.m());
    let mut report = CardinalityReport { sizes: sizes.clone(), holds: false, exceptional: None, sign: None, empty_parts };
    if n % 2 != 0 || m > n / 2 {
        return report;
    }
    let big_n = p.pow(n as u32 / 2);
    let unit = p.pow((n / 2 - m) as u32);
    for sign in [1i64, -1] {
        let common = unit * (big_n - sign);
        let odd: Vec<usize> = (0..sizes.len()).filter(|&i| sizes[i] as i64 != common).collect();
        if odd.len() == 1 && sizes[odd[0]] as i64 == common + sign * big_n {
            report.holds = true;
            report.exceptional = Some(odd[0] as u32);
            report.sign = Some(sign);
            return report;
        }
    }
    report
}

fn check_parameters(n: usize, m: usize) -> Result<()> {
    if n % 2 != 0 || n < 4 || m < 2 || m > n / 2 {
        return Err(Error::Precondition(format!("needs n even, n >= 4 and 2 <= m <= n/2 (n={n}, m={m})")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BentPartitionCertificate {
    pub cardinality: CardinalityReport,
    pub is_bent_partition: bool,
    /// G(u) per point, when every u follows one of the two patterns.
    pub distinguished: Option<Vec<u32>>,
    /// Points u whose values follow the shifted pattern.
    pub branch_set: Option<Vec<u32>>,
    /// χ_u(A_i) ∈ {-2^{n/2-m}, -2^{n/2-m} + 2^{n/2}} for all u ≠ 0 and i.
    pub two_value_pattern: bool,
    /// Distinct χ_u(A_i) over u ≠ 0.
    pub spectrum: BTreeSet<i64>,
}

/// χ_u(A_i) for every u and i from the component spectra:
/// χ_u(A_i) = 2^{n-m}δ_0(u) + 2^{-m} Σ_{c≠0} W_{F_c}(u)(-1)^{⟨c,i⟩}.
/// Row u of the result holds the 2^m values.
pub fn part_characters_p2(g: &PartitionSpec) -> Result<Vec<i64>> {
    let f = &g.induced;
    let size = f.domain.size() as usize;
    let q = f.codomain.size() as usize;
    ensure("partition spectral work", (size * q * q) as u64, Guards::get().partition_work)?;
    let vb = check_vectorial_bent(f)?;
    let ints: Vec<Vec<i64>> = vb
        .spectra
        .iter()
        .map(|s| (0..size).map(|u| s.table.integer(u).expect("p = 2 spectra are integers")).collect())
        .collect();
    let signs: Vec<Vec<i64>> = (0..q as u32)
        .map(|c| (0..q as u32).map(|i| if f.codomain.inner(c, i) == 0 { 1 } else { -1 }).collect())
        .collect();
    let scale = q as i64;
    let mut out = vec![0i64; size * q];
    for u in 0..size {
        let w0 = if u == 0 { size as i64 } else { 0 };
        for i in 0..q {
            let mut acc = w0;
            for c in 1..q {
                acc += ints[c - 1][u] * signs[c][i];
            }
            if acc % scale != 0 {
                return Err(Error::Inconsistency("part character sum is not divisible by 2^m".into()));
            }
            out[u * q + i] = acc / scale;
        }
    }
    Ok(out)
}

/// Spectral certification for p = 2.
pub fn check_bent_partition_p2(g: &PartitionSpec) -> Result<BentPartitionCertificate> {
    let f = &g.induced;
    if f.p() != 2 {
        return Err(Error::Precondition("the spectral criterion is for p = 2".into()));
    }
    let (n, m) = (f.n(), f.m());
    check_parameters(n, m)?;
    let cardinality = check_cardinalities(g);
    let mut cert = BentPartitionCertificate {
        cardinality,
        is_bent_partition: false,
        distinguished: None,
        branch_set: None,
        two_value_pattern: false,
        spectrum: BTreeSet::new(),
    };
    if !cert.cardinality.holds {
        return Ok(cert);
    }
    let chi = part_characters_p2(g)?;
    let q = f.codomain.size() as usize;
    let size = f.domain.size() as usize;
    let half = 1i64 << (n / 2);
    let low = 1i64 << (n / 2 - m);
    let mut dist = Vec::with_capacity(size);
    let mut branch = Vec::new();
    let mut pattern = true;
    for u in 0..size {
        let base = if u == 0 { 1i64 << (n - m) } else { 0 };
        let row = &chi[u * q..(u + 1) * q];
        let mut found = None;
        for (shifted, common, special) in [(false, base - low, base - low + half), (true, base + low, base + low - half)] {
            let specials: Vec<usize> = (0..q).filter(|&i| row[i] == special).collect();
            if specials.len() == 1 && row.iter().filter(|&&v| v == common).count() == q - 1 {
                found = Some((shifted, specials[0] as u32));
            }
        }
        let Some((shifted, gu)) = found else {
            return Ok(cert);
        };
        dist.push(gu);
        if shifted {
            branch.push(u as u32);
        }
        if u != 0 {
            cert.spectrum.extend(row.iter().copied());
            pattern &= !shifted;
        }
    }
    cert.is_bent_partition = true;
    cert.two_value_pattern = pattern;
    cert.distinguished = Some(dist);
    cert.branch_set = Some(branch);
    Ok(cert)
}

/// Next multiset permutation in lexicographic order.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Number of balanced assignments K! / ((K/p)!)^p.
pub fn assignment_count(k: u64, p: u64) -> u128 {
    let per = k / p;
    let fact = |x: u64| (1..=x as u128).product::<u128>();
    fact(k) / fact(per).pow(p as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectReport {
    pub is_bent_partition: bool,
    pub assignments: u128,
    /// First assignment whose function is not bent.
    pub counterexample: Option<u128>,
}

/// The definition itself: every function taking each value on exactly K/p
/// parts is Walsh-tested.
pub fn check_bent_partition_direct(g: &PartitionSpec) -> Result<DirectReport> {
    let k = g.depth() as u64;
    let p = g.space().p() as u64;
    if k % p != 0 {
        return Err(Error::Precondition("the depth must be divisible by p".into()));
    }
    let guards = Guards::get();
    let total = assignment_count(k, p);
    ensure("balanced part assignments", total.min(u64::MAX as u128) as u64, guards.partition_assignments)?;
    let work = total.saturating_mul(g.space().size() as u128 * g.space().dim() as u128);
    ensure("definitional partition work", work.min(u64::MAX as u128) as u64, guards.partition_work)?;
    let mut assign: Vec<u32> = (0..k as u32).map(|i| i / (k / p) as u32).collect();
    let labels = &g.induced.values;
    let mut index = 0u128;
    loop {
        let f = PFunc::from_fn(g.space(), |x| assign[labels[x as usize] as usize]);
        if !classify_bent(&f)?.bent {
            return Ok(DirectReport { is_bent_partition: false, assignments: total, counterexample: Some(index) });
        }
        index += 1;
        if !next_permutation(&mut assign) {
            break;
        }
    }
    Ok(DirectReport { is_bent_partition: true, assignments: total, counterexample: None })
}

/// aA_i = A_i for every a ∈ F_p^*.
pub fn parts_scalar_invariant(g: &PartitionSpec) -> bool {
    g.induced.is_scalar_invariant()
}

/// Condition 𝒞 through the induced function: scalar-invariant parts and
/// Condition A for F. Returns the flag and ε.
pub fn check_condition_c(g: &PartitionSpec) -> Result<(bool, Option<i64>)> {
    let f = &g.induced;
    if f.p() == 2 {
        return Err(Error::Precondition("Condition C is trivial for p = 2".into()));
    }
    check_parameters(f.n(), f.m())?;
    if !parts_scalar_invariant(g) {
        return Ok((false, None));
    }
    let (cert, _) = check_condition_a(f)?;
    let eps = cert.eps.and_then(|e| e.sign());
    Ok((cert.condition_a && eps.is_some(), eps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessReport {
    /// Statements (1) through (5) in order.
    pub statements: [bool; 5],
    /// ε under which statement (1) holds.
    pub eps: Option<i64>,
    /// |I|, the number of nonempty punctured parts.
    pub classes: usize,
    pub notes: Vec<String>,
}

impl HarnessReport {
    pub fn all_true(&self) -> bool {
        self.statements.iter().all(|&s| s)
    }
    pub fn all_false(&self) -> bool {
        self.statements.iter().all(|&s| !s)
    }
    pub fn consistent(&self) -> bool {
        self.all_true() || self.all_false()
    }
}

fn candidate_eps(p: u32) -> Vec<i64> {
    if p == 3 {
        vec![1, -1]
    } else {
        vec![1]
    }
}

/// Evaluates the five pairwise-equivalent statements about a depth-p^m
/// partition.
pub fn run_equivalence_harness(g: &PartitionSpec, seed: u64) -> Result<HarnessReport> {
    let f = &g.induced;
    let p = f.p();
    let (n, m) = (f.n(), f.m());
    check_parameters(n, m)?;
    let space = g.space();
    let i0 = g.zero_part();
    let big_n = (p as i64).pow(n as u32 / 2);
    let unit = (p as i64).pow((n / 2 - m) as u32);
    let s_of = |i: u32, eps: i64| unit + if i == i0 { eps } else { 0 };
    let mut notes = Vec::new();
    let parts = g.parts();
    let punctured: Vec<Vec<u32>> = parts.iter().map(|a| a.iter().copied().filter(|&x| x != 0).collect()).collect();
    let image: Vec<u32> = (0..parts.len() as u32).filter(|&i| !punctured[i as usize].is_empty()).collect();

    // (1)
    let (s1, eps1) = if p == 2 {
        let c = check_bent_partition_p2(g)?;
        if !c.cardinality.holds {
            notes.push("part sizes violate the bent-partition cardinalities".into());
        }
        (c.is_bent_partition && c.two_value_pattern, Some(1))
    } else {
        check_condition_c(g)?
    };

    // (2)
    let mut pds = Vec::with_capacity(parts.len());
    for a in &punctured {
        pds.push(check_pds(space, a)?);
    }
    let s2 = candidate_eps(p).into_iter().any(|eps| {
        (0..parts.len() as u32).all(|i| {
            let s = s_of(i, eps);
            let (v, k, l, mu) = crate::pds::latin_parameters(big_n, s, eps);
            pds[i as usize].is_some_and(|c| c.regular && c.has_parameters(v, k, l, mu))
        })
    });

    // (3)
    let classes: Vec<Vec<u32>> = image.iter().map(|&i| punctured[i as usize].clone()).collect();
    let s3 = match build_translation_scheme(space, &classes) {
        Ok(cert) if cert.is_scheme && classes.len() >= 3 && (p != 2 || classes.len() == parts.len()) => {
            let class_certs = class_pds(space, &cert)?;
            let ev = check_amorphy(&cert, &class_certs, Guards::get().fusion_samples, seed)?;
            let sizes_ok = candidate_eps(p).into_iter().any(|eps| {
                image.iter().enumerate().all(|(ci, &i)| {
                    let want = big_n * big_n / (p as i64).pow(m as u32) - eps * unit + if i == i0 { eps * big_n - 1 } else { 0 };
                    cert.get(0, ci + 1, ci + 1) == want
                })
            });
            ev.amorphic() && sizes_ok
        }
        Ok(_) => false,
        Err(e) => {
            notes.push(format!("scheme: {e}"));
            false
        }
    };

    // (4)
    let mut s4 = false;
    let mut codes = Vec::new();
    for &i in &image {
        match check_two_weight_projective(space, &punctured[i as usize]) {
            Ok(r) => codes.push(Some(r)),
            Err(e) => {
                notes.push(format!("code {i}: {e}"));
                codes.push(None);
            }
        }
    }
    if p != 2 || image.len() == parts.len() {
        s4 = candidate_eps(p).into_iter().any(|eps| {
            image.iter().zip(&codes).all(|(&i, r)| {
                let Some(r) = r else { return false };
                let (len, w1, w2) = expected_code_parameters(p, n, m, eps, i == i0);
                // At m = n/2 the parts off F(0) are subspaces and w2 = 0.
                let mut want = vec![w1 as u64, w2 as u64];
                want.sort_unstable();
                r.code.length as i64 == len && r.code.message_weights() == want
            })
        });
    }

    // (5)
    let vb = check_vectorial_bent(f)?;
    let mut s5 = true;
    for c in 1..f.codomain.size() {
        s5 &= check_generalized_hadamard(&GhMatrix::new(component(f, c)?))?.generalized_hadamard;
    }
    let eps5 = if p == 2 {
        Some(1)
    } else {
        let (ok, e) = check_unit_condition(&vb, p)?;
        s5 &= ok;
        e
    };
    if s5 {
        'pairs: for c in 1..f.codomain.size() {
            for d in 1..f.codomain.size() {
                if c == d || (p == 2 && d < c) {
                    continue;
                }
                if !check_product_identity(f, &vb, c, d, eps5)?.holds {
                    s5 = false;
                    break 'pairs;
                }
            }
        }
    }

    Ok(HarnessReport { statements: [s1, s2, s3, s4, s5], eps: eps1, classes: image.len(), notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_permutations() {
        let mut v = vec![0, 0, 1, 1];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(assignment_count(4, 2), 6);
        assert_eq!(assignment_count(9, 3), 1680);
    }

    #[test]
    fn wrong_sizes_fail_the_gate() {
        let dom = SpaceDesc::dot(2, 4).unwrap();
        let cod = SpaceDesc::dot(2, 2).unwrap();
        let g = PartitionSpec::new(dom, cod, (0..16).map(|x| x % 4).collect()).unwrap();
        let c = check_bent_partition_p2(&g).unwrap();
        assert!(!c.cardinality.holds && !c.is_bent_partition);
    }
}
