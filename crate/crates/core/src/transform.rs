//! Radix-p butterfly over tables of group-ring vectors in Z[C_p].
//!
//! Entry `x` of a table is a length-p vector `c` standing for Σ_t c_t ζ^t.
//! Keeping the unreduced group-ring form means indicator transforms only
//! ever add non-negative counts.

use crate::cyclotomic::{canonical_key, CycInt};
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::{ensure, Guards};

/// Which character the transform uses: `Minus` computes Σ_x v(x) ζ^{-⟨u,x⟩},
/// `Plus` computes Σ_x v(x) ζ^{⟨u,x⟩}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrTable {
    p: u32,
    data: Vec<i64>,
}

impl GrTable {
    pub fn zeros(p: u32, len: usize) -> Self {
        GrTable { p, data: vec![0; len * p as usize] }
    }

    /// Table with `e_{values[x]}` at every x.
    pub fn from_exponents(p: u32, values: &[u8]) -> Self {
        let mut t = Self::zeros(p, values.len());
        for (x, &v) in values.iter().enumerate() {
            t.data[x * p as usize + v as usize] = 1;
        }
        t
    }

    /// Indicator of a set of points.
    pub fn indicator(p: u32, len: usize, set: impl IntoIterator<Item = u32>) -> Self {
        let mut t = Self::zeros(p, len);
        for x in set {
            t.data[x as usize * p as usize] += 1;
        }
        t
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn len(&self) -> usize {
        self.data.len() / self.p as usize
    }
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
    pub fn get(&self, x: usize) -> &[i64] {
        let p = self.p as usize;
        &self.data[x * p..(x + 1) * p]
    }
    pub fn get_mut(&mut self, x: usize) -> &mut [i64] {
        let p = self.p as usize;
        &mut self.data[x * p..(x + 1) * p]
    }
    pub fn key(&self, x: usize) -> [i64; 6] {
        canonical_key(self.p, self.get(x))
    }
    pub fn value(&self, x: usize) -> CycInt {
        CycInt::from_group_ring(self.p, self.get(x))
    }
    /// Rational integer value at x, when it is one.
    pub fn integer(&self, x: usize) -> Option<i64> {
        let k = self.key(x);
        k[1..].iter().all(|&v| v == 0).then_some(k[0])
    }

    /// Pointwise product (cyclic convolution per entry).
    pub fn mul(&self, other: &GrTable) -> GrTable {
        let p = self.p as usize;
        let mut out = vec![0i64; self.data.len()];
        for ((o, a), b) in out.chunks_mut(p).zip(self.data.chunks(p)).zip(other.data.chunks(p)) {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    o[(i + j) % p] += x * y;
                }
            }
        }
        GrTable { p: self.p, data: out }
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> GrTable {
        let p = self.p as usize;
        let mut out = vec![0i64; self.data.len()];
        for (o, a) in out.chunks_mut(p).zip(self.data.chunks(p)) {
            for (t, &v) in a.iter().enumerate() {
                o[(p - t) % p] = v;
            }
        }
        GrTable { p: self.p, data: out }
    }

    pub fn add_assign(&mut self, other: &GrTable) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Divides every entry by `d` after canonical reduction; fails unless the
    /// division is exact.
    pub fn div_exact(&self, d: i64) -> Result<GrTable> {
        let p = self.p as usize;
        let mut out = vec![0i64; self.data.len()];
        for (x, o) in out.chunks_mut(p).enumerate() {
            let k = self.key(x);
            let w = if p == 2 { 1 } else { p - 1 };
            for t in 0..w {
                if k[t] % d != 0 {
                    return Err(Error::Inconsistency(format!("entry {x} not divisible by {d}")));
                }
                o[t] = k[t] / d;
            }
        }
        Ok(GrTable { p: self.p, data: out })
    }
}

/// In-place butterfly over the digit coordinates (plain dot product).
pub fn butterfly(p: u32, n: usize, data: &mut [i64], sign: Sign) {
    let pu = p as usize;
    debug_assert_eq!(data.len(), pu.pow(n as u32) * pu);
    if p == 2 {
        butterfly2(n, data);
        return;
    }
    let mut tmp = vec![0i64; pu * pu];
    let mut stride = 1usize;
    let total = pu.pow(n as u32);
    for _ in 0..n {
        let block = stride * pu;
        for hi in (0..total).step_by(block) {
            for lo in 0..stride {
                let base = hi + lo;
                for b in 0..pu {
                    let src = (base + b * stride) * pu;
                    tmp[b * pu..(b + 1) * pu].copy_from_slice(&data[src..src + pu]);
                }
                for a in 0..pu {
                    let dst = (base + a * stride) * pu;
                    let out = &mut data[dst..dst + pu];
                    out.fill(0);
                    for b in 0..pu {
                        let r = a * b % pu;
                        let shift = match sign {
                            Sign::Minus => (pu - r) % pu,
                            Sign::Plus => r,
                        };
                        let v = &tmp[b * pu..(b + 1) * pu];
                        for t in 0..pu {
                            out[(t + shift) % pu] += v[t];
                        }
                    }
                }
            }
        }
        stride = block;
    }
}

fn butterfly2(n: usize, data: &mut [i64]) {
    let total = 1usize << n;
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * 2;
        for hi in (0..total).step_by(block) {
            for lo in 0..stride {
                let i = (hi + lo) * 2;
                let j = (hi + lo + stride) * 2;
                let (a0, a1, b0, b1) = (data[i], data[i + 1], data[j], data[j + 1]);
                data[i] = a0 + b0;
                data[i + 1] = a1 + b1;
                data[j] = a0 + b1;
                data[j + 1] = a1 + b0;
            }
        }
        stride = block;
    }
}

/// Permutation `a ↦ G a` of point indices, where G is the Gram matrix.
pub fn gram_permutation(space: &SpaceDesc) -> Vec<u32> {
    let n = space.dim();
    let size = space.size() as usize;
    let cols: Vec<u32> = (0..n).map(|i| space.gram_apply(space.from_coords(&unit(n, i)).unwrap())).collect();
    let p = space.p() as usize;
    let mut perm = vec![0u32; size];
    for a in 1..size {
        // Lowest nonzero digit position of a.
        let mut i = 0;
        let mut place = 1usize;
        while (a / place) % p == 0 {
            i += 1;
            place *= p;
        }
        perm[a] = space.add(perm[a - place], cols[i]);
    }
    perm
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Whether the Gram matrix is the identity, in which case no permutation is
/// needed.
fn gram_is_identity(space: &SpaceDesc) -> bool {
    let n = space.dim();
    (0..n).all(|i| (0..n).all(|j| space.gram()[i * n + j] == u32::from(i == j)))
}

/// Character transform of a table over `space` under its inner product:
/// `out(u) = Σ_x t(x) ζ^{±⟨u,x⟩}`.
pub fn transform(space: &SpaceDesc, table: &GrTable, sign: Sign) -> Result<GrTable> {
    if table.len() != space.size() as usize || table.p() != space.p() {
        return Err(Error::Shape("table does not match the space".into()));
    }
    ensure("fast transform", space.size() as u64, Guards::get().fast_walsh)?;
    let mut data = table.data.clone();
    butterfly(space.p(), space.dim(), &mut data, sign);
    let raw = GrTable { p: space.p(), data };
    if gram_is_identity(space) {
        return Ok(raw);
    }
    let perm = gram_permutation(space);
    let p = space.p() as usize;
    let mut out = vec![0i64; raw.data.len()];
    for (a, o) in out.chunks_mut(p).enumerate() {
        o.copy_from_slice(raw.get(perm[a] as usize));
    }
    Ok(GrTable { p: space.p(), data: out })
}

/// `conv(z) = #{(a, b) : a ∈ A, b ∈ B, a + b = z}` weighted by the tables,
/// computed from the two `Plus`-sign spectra.
pub fn convolve_spectra(space: &SpaceDesc, sa: &GrTable, sb: &GrTable) -> Result<GrTable> {
    let prod = sa.mul(sb);
    let back = transform(space, &prod, Sign::Minus)?;
    back.div_exact(space.size() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_spectrum_of_zero_function() {
        let s = SpaceDesc::dot(3, 2).unwrap();
        let t = GrTable::from_exponents(3, &[0; 9]);
        let w = transform(&s, &t, Sign::Minus).unwrap();
        assert_eq!(w.integer(0), Some(9));
        for a in 1..9 {
            assert_eq!(w.integer(a), Some(0));
        }
    }

    #[test]
    fn gram_permutation_is_linear_map() {
        let s = SpaceDesc::with_defaults(3, &[2, 1]).unwrap();
        let perm = gram_permutation(&s);
        for a in 0..s.size() {
            assert_eq!(perm[a as usize], s.gram_apply(a));
        }
    }
}
