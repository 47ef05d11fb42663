//! Partial difference sets: character criterion, brute-force counting and
//! Latin / negative Latin typing.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::{ensure, Guards};
use crate::transform::{transform, GrTable, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Typing {
    Latin { n: i64, s: i64 },
    NegativeLatin { n: i64, s: i64 },
    None,
}

impl Typing {
    pub fn name(&self) -> &'static str {
        match self {
            Typing::Latin { .. } => "latin",
            Typing::NegativeLatin { .. } => "negative_latin",
            Typing::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdsCertificate {
    pub v: i64,
    pub k: i64,
    pub lambda: i64,
    pub mu: i64,
    /// -D = D and 0 ∉ D.
    pub regular: bool,
    pub typing: Typing,
}

impl PdsCertificate {
    /// Whether (v,k,λ,μ) agree with the given values, ignoring λ and μ for
    /// the empty set where they are arbitrary.
    pub fn has_parameters(&self, v: i64, k: i64, lambda: i64, mu: i64) -> bool {
        self.v == v && self.k == k && (k == 0 || (self.lambda == lambda && self.mu == mu))
    }
}

fn membership(space: &SpaceDesc, d: &[u32]) -> Result<Vec<bool>> {
    let mut m = vec![false; space.size() as usize];
    for &x in d {
        if x >= space.size() {
            return Err(Error::Shape(format!("point {x} outside the space")));
        }
        if m[x as usize] {
            return Err(Error::Invalid(format!("point {x} listed twice")));
        }
        m[x as usize] = true;
    }
    Ok(m)
}

fn is_regular(space: &SpaceDesc, mem: &[bool]) -> bool {
    !mem[0] && (0..space.size()).all(|x| !mem[x as usize] || mem[space.neg(x) as usize])
}

/// χ_u(D) = Σ_{d ∈ D} ζ^{⟨u,d⟩} for every u.
pub fn character_values(space: &SpaceDesc, d: &[u32]) -> Result<GrTable> {
    let t = GrTable::indicator(space.p(), space.size() as usize, d.iter().copied());
    transform(space, &t, Sign::Plus)
}

/// Latin or negative Latin template matching. Parameters fitting both
/// templates, such as (25, 12, 5, 6), are reported as Latin.
pub fn classify_pds_type(v: i64, k: i64, lambda: i64, mu: i64) -> Result<Typing> {
    let n = (v as f64).sqrt().round() as i64;
    if n * n != v || n < 2 {
        return Ok(Typing::None);
    }
    if k == 0 {
        return Ok(Typing::Latin { n, s: 0 });
    }
    let latin = (k % (n - 1) == 0).then(|| k / (n - 1)).filter(|&s| lambda == n + s * s - 3 * s && mu == s * s - s);
    let neg = (k % (n + 1) == 0).then(|| k / (n + 1)).filter(|&s| lambda == -n + s * s + 3 * s && mu == s * s + s);
    match (latin, neg) {
        (Some(s), _) => Ok(Typing::Latin { n, s }),
        (None, Some(s)) => Ok(Typing::NegativeLatin { n, s }),
        (None, None) => Ok(Typing::None),
    }
}

fn finish(v: i64, k: i64, lambda: i64, mu: i64, regular: bool) -> Result<Option<PdsCertificate>> {
    let typing = if regular { classify_pds_type(v, k, lambda, mu)? } else { Typing::None };
    Ok(Some(PdsCertificate { v, k, lambda, mu, regular, typing }))
}

/// Conventions for sets whose parameters are not pinned down: the empty set
/// gets λ = μ = 0 and G \ {0} gets μ = 0.
fn degenerate(v: i64, k: i64) -> Option<(i64, i64)> {
    if k == 0 {
        Some((0, 0))
    } else if k == v - 1 {
        Some((v - 2, 0))
    } else {
        None
    }
}

/// PDS test from precomputed character values `chi` of D.
pub fn check_pds_with_characters(space: &SpaceDesc, d: &[u32], chi: &GrTable) -> Result<Option<PdsCertificate>> {
    let mem = membership(space, d)?;
    let v = space.size() as i64;
    let k = d.len() as i64;
    if !is_regular(space, &mem) {
        return check_from_multiplicities(space, &mem, &difference_counts_spectral(space, chi)?, false);
    }
    let mut values: Vec<[i64; 6]> = Vec::new();
    for u in 1..chi.len() {
        let key = chi.key(u);
        if !values.contains(&key) {
            if values.len() == 2 {
                return Ok(None);
            }
            values.push(key);
        }
    }
    let p = space.p();
    let to_cyc = |key: &[i64; 6]| {
        let mut c: Vec<i64> = key[..(p as usize - 1).max(1)].to_vec();
        c.push(0);
        if p == 2 {
            c.truncate(2);
        }
        CycInt::from_group_ring(p, &c)
    };
    match values.len() {
        0 | 1 => match degenerate(v, k) {
            Some((l, m)) => finish(v, k, l, m, true),
            None => Ok(None),
        },
        _ => {
            let r1 = to_cyc(&values[0]);
            let r2 = to_cyc(&values[1]);
            let (Some(beta), Some(prod)) = (r1.add(&r2)?.as_integer(), r1.mul(&r2)?.as_integer()) else {
                return Ok(None);
            };
            let mu = BigInt::from(k) + prod;
            let lambda = &beta + &mu;
            let (Some(lambda), Some(mu)) = (lambda.to_i64(), mu.to_i64()) else { return Ok(None) };
            if lambda < 0 || mu < 0 || k * (k - lambda - 1) != (v - k - 1) * mu {
                return Ok(None);
            }
            finish(v, k, lambda, mu, true)
        }
    }
}

pub fn check_pds(space: &SpaceDesc, d: &[u32]) -> Result<Option<PdsCertificate>> {
    let chi = character_values(space, d)?;
    check_pds_with_characters(space, d, &chi)
}

/// mult(z) = #{(a, b) ∈ D^2 : a - b = z} through |χ(D)|^2.
fn difference_counts_spectral(space: &SpaceDesc, chi: &GrTable) -> Result<Vec<i64>> {
    let prod = chi.mul(&chi.conj());
    let back = transform(space, &prod, Sign::Minus)?.div_exact(space.size() as i64)?;
    (0..back.len())
        .map(|z| back.integer(z).ok_or_else(|| Error::Inconsistency("difference count is not an integer".into())))
        .collect()
}

fn check_from_multiplicities(space: &SpaceDesc, mem: &[bool], mult: &[i64], regular: bool) -> Result<Option<PdsCertificate>> {
    let v = space.size() as i64;
    let k = mem.iter().filter(|&&b| b).count() as i64;
    let mut lambda = None;
    let mut mu = None;
    for z in 1..space.size() as usize {
        let slot = if mem[z] { &mut lambda } else { &mut mu };
        match *slot {
            None => *slot = Some(mult[z]),
            Some(x) if x != mult[z] => return Ok(None),
            _ => {}
        }
    }
    let (lambda, mu) = match (lambda, mu) {
        (Some(l), Some(m)) => (l, m),
        (None, Some(m)) => (0, m),
        (Some(l), None) => (l, 0),
        (None, None) => (0, 0),
    };
    if regular && k * (k - lambda - 1) != (v - k - 1) * mu {
        return Ok(None);
    }
    finish(v, k, lambda, mu, regular)
}

/// Direct difference counting; the independent oracle for [`check_pds`].
pub fn check_pds_bruteforce(space: &SpaceDesc, d: &[u32]) -> Result<Option<PdsCertificate>> {
    ensure("brute-force difference counting", space.size() as u64, Guards::get().brute_force)?;
    let mem = membership(space, d)?;
    let mut mult = vec![0i64; space.size() as usize];
    for &a in d {
        for &b in d {
            mult[space.sub(a, b) as usize] += 1;
        }
    }
    let regular = is_regular(space, &mem);
    check_from_multiplicities(space, &mem, &mult, regular)
}

/// Parameters of a Latin (ε = +1) or negative Latin (ε = -1) square type
/// PDS with N = p^{n/2} and the given s: (N^2, s(N-ε), εN+s^2-3εs, s^2-εs).
pub fn latin_parameters(big_n: i64, s: i64, eps: i64) -> (i64, i64, i64, i64) {
    (big_n * big_n, s * (big_n - eps), eps * big_n + s * s - 3 * eps * s, s * s - eps * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_templates() {
        assert_eq!(classify_pds_type(4096, 1008, 272, 240).unwrap(), Typing::Latin { n: 64, s: 16 });
        assert_eq!(classify_pds_type(4096, 1071, 302, 272).unwrap(), Typing::Latin { n: 64, s: 17 });
        assert_eq!(classify_pds_type(4096, 0, 0, 0).unwrap(), Typing::Latin { n: 64, s: 0 });
        assert_eq!(latin_parameters(64, 17, 1), (4096, 1071, 302, 272));
    }

    #[test]
    fn whole_group_and_empty_set() {
        let s = SpaceDesc::dot(2, 2).unwrap();
        let all: Vec<u32> = (1..4).collect();
        let c = check_pds(&s, &all).unwrap().unwrap();
        assert_eq!((c.v, c.k, c.lambda, c.mu), (4, 3, 2, 0));
        assert_eq!(check_pds_bruteforce(&s, &all).unwrap(), Some(c));
        let e = check_pds(&s, &[]).unwrap().unwrap();
        assert_eq!((e.k, e.mu), (0, 0));
        assert_eq!(check_pds_bruteforce(&s, &[]).unwrap(), Some(e));
    }
}
