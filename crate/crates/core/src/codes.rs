//! Projective linear codes C_D = {(⟨α,d_1⟩, ..., ⟨α,d_t⟩) : α ∈ V_n} and
//! their weight distributions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{modinv, SpaceDesc};
use crate::linalg::rank;
use crate::transform::{transform, GrTable, Sign};

/// Representative of the projective point of `x`: the lowest nonzero digit
/// scaled to 1.
pub fn canonical_representative(space: &SpaceDesc, x: u32) -> u32 {
    let p = space.p();
    let mut y = x;
    while y > 0 && y % p == 0 {
        y /= p;
    }
    if y == 0 {
        return 0;
    }
    let lead = y % p;
    space.scale(modinv(lead, p), x)
}

/// Canonical representatives of D, deduplicated and sorted, plus whether
/// D = F_p^* · D̃.
pub fn projective_reduce(space: &SpaceDesc, d: &[u32]) -> Result<(Vec<u32>, bool)> {
    if d.contains(&0) {
        return Err(Error::Invalid("the defining set must not contain 0".into()));
    }
    let mut reps: Vec<u32> = d.iter().map(|&x| canonical_representative(space, x)).collect();
    reps.sort_unstable();
    reps.dedup();
    let scalar_closed = d.len() == reps.len() * (space.p() as usize - 1);
    Ok((reps, scalar_closed))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub defining_set: Vec<u32>,
    pub length: usize,
    /// Ambient dimension n.
    pub dim: usize,
    /// Rank of the defining vectors; below `dim` the code is degenerate.
    pub rank: usize,
    pub distribution: BTreeMap<u64, u64>,
}

impl CodeSpec {
    /// Distinct nonzero weights.
    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.distribution.keys().copied().filter(|&w| w > 0).collect()
    }
    /// Distinct weights of the codewords of nonzero messages u ∈ V_n. A zero
    /// weight appears exactly when the code is degenerate.
    pub fn message_weights(&self) -> Vec<u64> {
        self.distribution
            .iter()
            .filter(|&(&w, &n)| n > u64::from(w == 0))
            .map(|(&w, _)| w)
            .collect()
    }
    pub fn is_two_weight(&self) -> bool {
        self.nonzero_weights().len() == 2
    }
}

/// Errors unless the vectors are nonzero and pairwise independent.
pub fn check_projective(space: &SpaceDesc, dt: &[u32]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for &x in dt {
        if x == 0 || x >= space.size() {
            return Err(Error::Invalid(format!("defining vector {x} is zero or out of range")));
        }
        if !seen.insert(canonical_representative(space, x)) {
            return Err(Error::Invalid(format!("defining vector {x} repeats a projective point")));
        }
    }
    Ok(())
}

fn defining_rank(space: &SpaceDesc, dt: &[u32]) -> usize {
    let rows: Vec<Vec<u32>> = dt.iter().map(|&x| space.coords(x)).collect();
    rank(space.p(), &rows)
}

/// Weight distribution by the double loop over α and D̃.
pub fn weight_distribution_direct(space: &SpaceDesc, dt: &[u32]) -> BTreeMap<u64, u64> {
    let mut dist = BTreeMap::new();
    for a in 0..space.size() {
        let row = space.inner_row(a);
        let w = dt.iter().filter(|&&d| row[d as usize] != 0).count() as u64;
        *dist.entry(w).or_insert(0) += 1;
    }
    dist
}

/// Weight distribution from the character transform of the indicator of
/// D̃: in unreduced form the coefficient of ζ^0 at α counts the d with
/// ⟨α,d⟩ = 0.
pub fn weight_distribution_transform(space: &SpaceDesc, dt: &[u32]) -> Result<BTreeMap<u64, u64>> {
    let t = transform(space, &GrTable::indicator(space.p(), space.size() as usize, dt.iter().copied()), Sign::Plus)?;
    let mut dist = BTreeMap::new();
    for a in 0..t.len() {
        let w = dt.len() as u64 - t.get(a)[0] as u64;
        *dist.entry(w).or_insert(0) += 1;
    }
    Ok(dist)
}

/// Transform route; the double loop serves as its oracle.
pub fn weight_distribution(space: &SpaceDesc, dt: &[u32]) -> Result<BTreeMap<u64, u64>> {
    weight_distribution_transform(space, dt)
}

pub fn code_spec(space: &SpaceDesc, dt: &[u32]) -> Result<CodeSpec> {
    check_projective(space, dt)?;
    Ok(CodeSpec {
        defining_set: dt.to_vec(),
        length: dt.len(),
        dim: space.dim(),
        rank: defining_rank(space, dt),
        distribution: weight_distribution(space, dt)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWeightReport {
    pub code: CodeSpec,
    pub scalar_closed: bool,
    pub two_weight: bool,
}

/// Reduce, check projectivity, enumerate weights and test for two weights.
pub fn check_two_weight_projective(space: &SpaceDesc, d: &[u32]) -> Result<TwoWeightReport> {
    let (dt, scalar_closed) = projective_reduce(space, d)?;
    let code = code_spec(space, &dt)?;
    let two_weight = code.is_two_weight();
    Ok(TwoWeightReport { code, scalar_closed, two_weight })
}

/// Length and the two nonzero weights (w1, w2) of the code on the class i
/// of a Condition A function; `delta` marks i = F(0).
pub fn expected_code_parameters(p: u32, n: usize, m: usize, eps: i64, delta: bool) -> (i64, i64, i64) {
    let p = p as i64;
    let half = p.pow(n as u32 / 2);
    let d = i64::from(delta);
    let length = (p.pow((n - m) as u32) - eps * p.pow((n / 2 - m) as u32) + d * (eps * half - 1)) / (p - 1);
    let base = p.pow((n - m - 1) as u32);
    let unit = p.pow((n / 2 - 1) as u32);
    let w1 = base + (1 - eps + 2 * eps * d) / 2 * unit;
    let w2 = base + (-1 - eps + 2 * eps * d) / 2 * unit;
    (length, w1, w2)
}

/// PDS parameters of F_p^* · D̃ for a two-weight projective code of length
/// `t` with weights w1, w2.
pub fn pds_parameters_from_weights(p: u32, n: usize, t: i64, w1: i64, w2: i64) -> (i64, i64, i64, i64) {
    let p = p as i64;
    let k = t * (p - 1);
    let lambda = k * k + 3 * k - p * (k + 1) * (w1 + w2) + p * p * w1 * w2;
    let mu = k * k + k - p * k * (w1 + w2) + p * p * w1 * w2;
    (p.pow(n as u32), k, lambda, mu)
}

/// D̃ as rows of base-p digits, one vector per line.
pub fn generator_text(space: &SpaceDesc, dt: &[u32]) -> String {
    let mut s = String::new();
    for &x in dt {
        for c in space.coords(x) {
            s.push(char::from_digit(c, 36).unwrap_or('?'));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_weights_from_formulas() {
        assert_eq!(expected_code_parameters(2, 12, 2, 1, false), (1008, 512, 480));
        assert_eq!(expected_code_parameters(2, 12, 2, 1, true), (1071, 544, 512));
        assert_eq!(pds_parameters_from_weights(2, 12, 1008, 512, 480), (4096, 1008, 272, 240));
        assert_eq!(pds_parameters_from_weights(2, 12, 1071, 544, 512), (4096, 1071, 302, 272));
    }

    #[test]
    fn reduction_on_f3() {
        let s = SpaceDesc::dot(3, 2).unwrap();
        let a = s.from_coords(&[2, 1]).unwrap();
        let (dt, closed) = projective_reduce(&s, &[a, s.neg(a)]).unwrap();
        assert_eq!(dt, vec![s.from_coords(&[1, 2]).unwrap()]);
        assert!(closed);
        assert!(!projective_reduce(&s, &[a]).unwrap().1);
        assert!(check_projective(&s, &[a, s.neg(a)]).is_err());
        assert!(projective_reduce(&s, &[0]).is_err());
    }

    #[test]
    fn plane_code_in_v4() {
        // D = <e1, e2> \ {0}: the [3, 4] code has one nonzero weight 2.
        let s = SpaceDesc::dot(2, 4).unwrap();
        let r = check_two_weight_projective(&s, &[1, 2, 3]).unwrap();
        assert_eq!(r.code.rank, 2);
        assert_eq!(r.code.distribution, BTreeMap::from([(0, 4), (2, 12)]));
        assert!(!r.two_weight);
        assert_eq!(weight_distribution_transform(&s, &[1, 2, 3]).unwrap(), r.code.distribution);
    }
}
