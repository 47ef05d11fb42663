//! Exact arithmetic in Z[ζ_p], unit tags, Gauss sums and recognition of
//! values of the form ε·p^{n/2}·ζ^j.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Σ c_i ζ^i over the power basis {1, ζ, ..., ζ^{p-2}}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

fn width(p: u32) -> usize {
    (p as usize - 1).max(1)
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt { p, coeffs: vec![BigInt::zero(); width(p)] }
    }

    pub fn from_int(p: u32, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = v.into();
        z
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// ζ^j.
    pub fn zeta_pow(p: u32, j: u32) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[(j % p) as usize] = 1;
        Self::from_group_ring(p, &counts)
    }

    /// Reduces a vector of length p (coefficients of 1, ζ, ..., ζ^{p-1})
    /// to canonical form.
    pub fn from_group_ring(p: u32, c: &[i64]) -> Self {
        debug_assert_eq!(c.len(), p as usize);
        if p == 2 {
            return CycInt { p, coeffs: vec![BigInt::from(c[0] - c[1])] };
        }
        let last = c[p as usize - 1];
        CycInt { p, coeffs: c[..p as usize - 1].iter().map(|&v| BigInt::from(v - last)).collect() }
    }

    fn from_group_ring_big(p: u32, c: Vec<BigInt>) -> Self {
        if p == 2 {
            return CycInt { p, coeffs: vec![&c[0] - &c[1]] };
        }
        let last = c[p as usize - 1].clone();
        CycInt { p, coeffs: c[..p as usize - 1].iter().map(|v| v - &last).collect() }
    }

    fn group_ring(&self) -> Vec<BigInt> {
        if self.p == 2 {
            return vec![self.coeffs[0].clone(), BigInt::zero()];
        }
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycInt { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycInt { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn neg(&self) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p as usize;
        if self.p == 2 {
            return Ok(CycInt { p: 2, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] });
        }
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                acc[(i + j) % p] += a * b;
            }
        }
        Ok(Self::from_group_ring_big(self.p, acc))
    }

    /// Complex conjugation, ζ ↦ ζ^{p-1}.
    pub fn conj(&self) -> Self {
        if self.p == 2 {
            return self.clone();
        }
        let p = self.p as usize;
        let src = self.group_ring();
        let mut out = vec![BigInt::zero(); p];
        for (i, v) in src.into_iter().enumerate() {
            out[(p - i) % p] = v;
        }
        Self::from_group_ring_big(self.p, out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    /// Coefficients as `i64` when they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Floating-point value, for sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        let theta = 2.0 * std::f64::consts::PI / self.p as f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            re += v * (theta * i as f64).cos();
            im += v * (theta * i as f64).sin();
        }
        (re, im)
    }
}

impl fmt::Display for CycInt {
    /// `c0 + c1*z + c2*z^2 + ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// One of +1, +i, -1, -i, stored as the exponent of i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitTag(u8);

impl UnitTag {
    pub const PLUS_ONE: UnitTag = UnitTag(0);
    pub const PLUS_I: UnitTag = UnitTag(1);
    pub const MINUS_ONE: UnitTag = UnitTag(2);
    pub const MINUS_I: UnitTag = UnitTag(3);

    pub fn from_sign(s: i8) -> Self {
        if s >= 0 {
            Self::PLUS_ONE
        } else {
            Self::MINUS_ONE
        }
    }

    pub fn i_power(self) -> u8 {
        self.0
    }

    pub fn mul(self, other: Self) -> Self {
        UnitTag((self.0 + other.0) % 4)
    }

    pub fn inv(self) -> Self {
        UnitTag((4 - self.0) % 4)
    }

    pub fn pow(self, e: u32) -> Self {
        UnitTag(((self.0 as u32 * (e % 4)) % 4) as u8)
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// ±1 as an integer, for real tags.
    pub fn sign(self) -> Option<i64> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        ["+1", "+i", "-1", "-i"][self.0 as usize]
    }

    pub fn parse(s: &str) -> Option<Self> {
        ["+1", "+i", "-1", "-i"].iter().position(|t| *t == s).map(|k| UnitTag(k as u8))
    }
}

impl fmt::Display for UnitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn legendre(a: u32, p: u32) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if (1..p).any(|x| x * x % p == a) {
        1
    } else {
        -1
    }
}

/// g = Σ_{x ∈ F_p^*} η(x) ζ^x.
pub fn gauss_sum(p: u32) -> Result<CycInt> {
    if p == 2 || !crate::field::is_prime(p) {
        return Err(Error::Precondition(format!("Gauss sum needs an odd prime, got {p}")));
    }
    let mut c = vec![0i64; p as usize];
    for x in 1..p {
        c[x as usize] = legendre(x, p);
    }
    Ok(CycInt::from_group_ring(p, &c))
}

/// η(-1) for the prime field.
pub fn eta_minus_one(p: u32) -> i64 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

/// Candidate values ε·p^{n/2}·ζ^j keyed by canonical coefficients.
#[derive(Debug, Clone)]
pub struct BentMatcher {
    p: u32,
    n: usize,
    table: HashMap<[i64; 6], (UnitTag, u8)>,
    magnitude_sq: i128,
}

/// Canonical key of a group-ring count vector.
pub fn canonical_key(p: u32, counts: &[i64]) -> [i64; 6] {
    let mut k = [0i64; 6];
    if p == 2 {
        k[0] = counts[0] - counts[1];
        return k;
    }
    let last = counts[p as usize - 1];
    for t in 0..p as usize - 1 {
        k[t] = counts[t] - last;
    }
    k
}

impl BentMatcher {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        if p > 7 || !crate::field::is_prime(p) {
            return Err(Error::Unsupported(format!("bent matching supports primes up to 7, got {p}")));
        }
        let mut table = HashMap::new();
        let mut insert = |v: &CycInt, tag: UnitTag, j: u32| -> Result<()> {
            let c = v.to_i64().ok_or_else(|| Error::Unsupported("candidate exceeds 64 bits".into()))?;
            let mut k = [0i64; 6];
            k[..c.len()].copy_from_slice(&c);
            if table.insert(k, (tag, j as u8)).is_some() {
                return Err(Error::Inconsistency(format!("duplicate bent candidate for p={p}, n={n}")));
            }
            Ok(())
        };
        if p == 2 {
            if n % 2 == 0 {
                let base = CycInt::from_int(2, BigInt::from(2).pow(n as u32 / 2));
                insert(&base, UnitTag::PLUS_ONE, 0)?;
                insert(&base.neg(), UnitTag::PLUS_ONE, 1)?;
            }
        } else {
            let pb = BigInt::from(p);
            let base = if n % 2 == 0 {
                CycInt::from_int(p, pb.pow(n as u32 / 2))
            } else {
                gauss_sum(p)?.scale(&pb.pow((n as u32 - 1) / 2))
            };
            let unit = if n % 2 == 1 && p % 4 == 3 { UnitTag::PLUS_I } else { UnitTag::PLUS_ONE };
            for j in 0..p {
                let v = base.mul(&CycInt::zeta_pow(p, j))?;
                insert(&v, unit, j)?;
                insert(&v.neg(), unit.mul(UnitTag::MINUS_ONE), j)?;
            }
        }
        let magnitude_sq = (p as i128).pow(n as u32);
        Ok(BentMatcher { p, n, table, magnitude_sq })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// |W|^2 of every bent value, p^n.
    pub fn magnitude_sq(&self) -> i128 {
        self.magnitude_sq
    }

    pub fn match_key(&self, key: &[i64; 6]) -> Option<(UnitTag, u8)> {
        self.table.get(key).copied()
    }

    pub fn match_counts(&self, counts: &[i64]) -> Option<(UnitTag, u8)> {
        self.match_key(&canonical_key(self.p, counts))
    }

    pub fn match_value(&self, w: &CycInt) -> Option<(UnitTag, u8)> {
        if w.p() != self.p {
            return None;
        }
        let c = w.to_i64()?;
        let mut k = [0i64; 6];
        k[..c.len()].copy_from_slice(&c);
        self.match_key(&k)
    }

    /// The candidate value for a tag and exponent, as a group-ring vector
    /// of length p.
    pub fn candidate(&self, tag: UnitTag, j: u32) -> Option<Vec<i64>> {
        let (k, _) = self.table.iter().find(|(_, v)| **v == (tag, (j % self.p) as u8))?;
        let mut out: Vec<i64> = k[..width(self.p)].to_vec();
        out.push(0);
        if self.p == 2 {
            out.truncate(2);
        }
        Some(out)
    }
}

/// Decomposes `w` as ε·p^{n/2}·ζ^j, if possible.
pub fn match_bent_value(w: &CycInt, p: u32, n: usize) -> Option<(UnitTag, u32)> {
    let m = BentMatcher::new(p, n).ok()?;
    m.match_value(w).map(|(t, j)| (t, j as u32))
}

/// Squared complex modulus Σ_x Σ_y c_x c_y cos(2π(x-y)/p) computed exactly:
/// for a group-ring vector c, |w|^2 = Σ_t (c ⋆ c̄)_t ζ^t, and the result is
/// rational iff that convolution is constant off position 0.
pub fn norm_sq_counts(p: u32, c: &[i64]) -> Option<i128> {
    let p = p as usize;
    let mut conv = vec![0i128; p];
    for (i, &a) in c.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in c.iter().enumerate() {
            conv[(i + p - j) % p] += a as i128 * b as i128;
        }
    }
    if p == 2 {
        return Some(conv[0] - conv[1]);
    }
    conv[1..].iter().all(|&v| v == conv[1]).then(|| conv[0] - conv[1])
}

pub fn is_perfect_square(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_product_is_one() {
        let a = CycInt::from_group_ring(3, &[1, 1, 0]);
        let b = CycInt::from_group_ring(3, &[1, 0, 1]);
        assert_eq!(a.mul(&b).unwrap(), CycInt::one(3));
        assert_eq!(a.add(&CycInt::zero(3)).unwrap(), a);
        assert!(a.mul(&CycInt::one(5)).is_err());
    }

    #[test]
    fn gauss_sums() {
        let g3 = gauss_sum(3).unwrap();
        assert_eq!(g3, CycInt::from_group_ring(3, &[0, 1, -1]));
        assert_eq!(g3.mul(&g3).unwrap(), CycInt::from_int(3, -3));
        let g5 = gauss_sum(5).unwrap();
        assert_eq!(g5.mul(&g5).unwrap(), CycInt::from_int(5, 5));
        assert_eq!(g5.mul(&g5.conj()).unwrap(), CycInt::from_int(5, 5));
        for p in [3u32, 5, 7] {
            let g = gauss_sum(p).unwrap();
            assert_eq!(g.conj(), g.scale(&BigInt::from(eta_minus_one(p))));
        }
        assert!(gauss_sum(2).is_err());
    }

    #[test]
    fn matching_examples() {
        assert_eq!(match_bent_value(&CycInt::from_int(2, 4), 2, 4), Some((UnitTag::PLUS_ONE, 0)));
        let w = CycInt::zeta_pow(3, 2).scale(&BigInt::from(3));
        assert_eq!(match_bent_value(&w, 3, 2), Some((UnitTag::PLUS_ONE, 2)));
        // p ≡ 3 (mod 4), n odd: g = i·√3, so the tag carries the i.
        let g = gauss_sum(3).unwrap();
        assert_eq!(match_bent_value(&g, 3, 1), Some((UnitTag::PLUS_I, 0)));
        assert_eq!(match_bent_value(&CycInt::from_int(3, 2), 3, 2), None);
    }

    #[test]
    fn display_form() {
        let v = CycInt::from_group_ring(5, &[3, -1, 0, 2, 0]);
        assert_eq!(v.to_string(), "3 + -1*z + 0*z^2 + 2*z^3");
    }
}
