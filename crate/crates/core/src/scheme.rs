//! Translation association schemes on a space: intersection tensors,
//! amorphy evidence, predicted intersection numbers and the fiber criterion
//! for schemes induced by vectorial dual-bent functions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::Guards;
use crate::pds::{check_pds_with_characters, PdsCertificate, Typing};
use crate::transform::{convolve_spectra, transform, GrTable, Sign};
use crate::vdb::{check_fiber_preconditions, punctured_preimage_sets, VdbAnalysis, VFunc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMethod {
    Direct,
    Transform,
}

#[derive(Debug, Clone)]
pub struct SchemeCertificate {
    /// Class 0 is {0}; classes 1..=d partition the nonzero points.
    pub classes: Vec<Vec<u32>>,
    /// p^k_{ij} at `(k * r + i) * r + j` with r = d + 1, taken at the first
    /// point of class k.
    pub tensor: Vec<i64>,
    /// Intersection numbers are constant on every class.
    pub is_scheme: bool,
    pub symmetric: bool,
    pub method: TensorMethod,
}

impl SchemeCertificate {
    pub fn rank(&self) -> usize {
        self.classes.len()
    }
    /// Number of non-identity classes.
    pub fn class_count(&self) -> usize {
        self.classes.len() - 1
    }
    pub fn get(&self, k: usize, i: usize, j: usize) -> i64 {
        let r = self.rank();
        self.tensor[(k * r + i) * r + j]
    }
    /// Σ_j p^k_{ij} = |D_i| for every i and k.
    pub fn row_sums_hold(&self) -> bool {
        let r = self.rank();
        (0..r).all(|k| (0..r).all(|i| (0..r).map(|j| self.get(k, i, j)).sum::<i64>() == self.classes[i].len() as i64))
    }
}

/// Class label of every point; errors unless `classes` partition V* into
/// nonempty negation-closed sets.
pub fn class_labels(space: &SpaceDesc, classes: &[Vec<u32>]) -> Result<Vec<u32>> {
    let size = space.size() as usize;
    let mut labels = vec![u32::MAX; size];
    labels[0] = 0;
    for (ci, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::Invalid(format!("class {} is empty", ci + 1)));
        }
        for &x in class {
            if x == 0 {
                return Err(Error::Invalid("classes must not contain the origin".into()));
            }
            if x as usize >= size {
                return Err(Error::Shape(format!("point {x} outside the space")));
            }
            if labels[x as usize] != u32::MAX {
                return Err(Error::Invalid(format!("point {x} lies in two classes")));
            }
            labels[x as usize] = ci as u32 + 1;
        }
    }
    if let Some(x) = labels.iter().position(|&l| l == u32::MAX) {
        return Err(Error::Invalid(format!("point {x} lies in no class")));
    }
    for x in 1..size as u32 {
        if labels[space.neg(x) as usize] != labels[x as usize] {
            return Err(Error::Precondition(format!("class {} is not closed under negation", labels[x as usize])));
        }
    }
    Ok(labels)
}

/// Builds the scheme R_i = {(x, y) : x - y ∈ D_i} from a partition of V*.
pub fn build_translation_scheme(space: &SpaceDesc, classes: &[Vec<u32>]) -> Result<SchemeCertificate> {
    let labels = class_labels(space, classes)?;
    let mut all = Vec::with_capacity(classes.len() + 1);
    all.push(vec![0u32]);
    all.extend(classes.iter().cloned());
    if space.size() as u64 <= Guards::get().brute_force {
        Ok(direct_tensor(space, all, &labels))
    } else {
        let spectra = class_spectra(space, &all)?;
        transform_tensor(space, all, &spectra)
    }
}

fn direct_tensor(space: &SpaceDesc, classes: Vec<Vec<u32>>, labels: &[u32]) -> SchemeCertificate {
    let r = classes.len();
    let mut tensor = vec![0i64; r * r * r];
    let mut filled = vec![false; r];
    let mut is_scheme = true;
    let mut row = vec![0i64; r * r];
    for z in 0..space.size() {
        row.fill(0);
        for a in 0..space.size() {
            let i = labels[a as usize] as usize;
            let j = labels[space.sub(z, a) as usize] as usize;
            row[i * r + j] += 1;
        }
        let k = labels[z as usize] as usize;
        let slot = &mut tensor[k * r * r..(k + 1) * r * r];
        if !filled[k] {
            slot.copy_from_slice(&row);
            filled[k] = true;
        } else if slot != row.as_slice() {
            is_scheme = false;
        }
    }
    SchemeCertificate { classes, tensor, is_scheme, symmetric: true, method: TensorMethod::Direct }
}

/// χ(D_i) for every class, including the identity class.
pub fn class_spectra(space: &SpaceDesc, classes: &[Vec<u32>]) -> Result<Vec<GrTable>> {
    classes
        .iter()
        .map(|c| transform(space, &GrTable::indicator(space.p(), space.size() as usize, c.iter().copied()), Sign::Plus))
        .collect()
}

fn transform_tensor(space: &SpaceDesc, classes: Vec<Vec<u32>>, spectra: &[GrTable]) -> Result<SchemeCertificate> {
    let r = classes.len();
    let mut tensor = vec![0i64; r * r * r];
    let mut is_scheme = true;
    for i in 0..r {
        for j in i..r {
            let conv: Vec<i64> = if i == 0 {
                let mut v = vec![0i64; space.size() as usize];
                for &x in &classes[j] {
                    v[x as usize] = 1;
                }
                v
            } else {
                let t = convolve_spectra(space, &spectra[i], &spectra[j])?;
                (0..t.len())
                    .map(|z| t.integer(z).ok_or_else(|| Error::Inconsistency("convolution is not an integer".into())))
                    .collect::<Result<_>>()?
            };
            for (k, class) in classes.iter().enumerate() {
                let val = conv[class[0] as usize];
                if class.iter().any(|&z| conv[z as usize] != val) {
                    is_scheme = false;
                }
                tensor[(k * r + i) * r + j] = val;
                tensor[(k * r + j) * r + i] = val;
            }
        }
    }
    Ok(SchemeCertificate { classes, tensor, is_scheme, symmetric: true, method: TensorMethod::Transform })
}

/// Tensor of the fusion given by `map` (class index 1..=d to block index,
/// identity excluded), or `None` when the fusion is not a scheme. Fused
/// convolutions are sums of the original ones, so the tensor decides this.
pub fn fused_tensor(cert: &SchemeCertificate, map: &[usize]) -> Option<Vec<i64>> {
    let d = cert.class_count();
    let blocks = map.iter().copied().max().map_or(0, |b| b + 1);
    let r = blocks + 1;
    let block_of = |c: usize| if c == 0 { 0 } else { map[c - 1] + 1 };
    let mut out = vec![0i64; r * r * r];
    let mut seen = vec![false; r];
    for k in 0..=d {
        let bk = block_of(k);
        let mut local = vec![0i64; r * r];
        for i in 0..=d {
            for j in 0..=d {
                local[block_of(i) * r + block_of(j)] += cert.get(k, i, j);
            }
        }
        let slot = &mut out[bk * r * r..(bk + 1) * r * r];
        if !seen[bk] {
            slot.copy_from_slice(&local);
            seen[bk] = true;
        } else if slot != local.as_slice() {
            return None;
        }
    }
    Some(out)
}

/// Merges classes according to `map`, for re-running the builder.
pub fn fuse_classes(classes: &[Vec<u32>], map: &[usize]) -> Vec<Vec<u32>> {
    let blocks = map.iter().copied().max().map_or(0, |b| b + 1);
    let mut out = vec![Vec::new(); blocks];
    for (c, class) in classes.iter().enumerate() {
        out[map[c]].extend_from_slice(class);
    }
    for b in &mut out {
        b.sort_unstable();
    }
    out
}

/// A random fusion of `d` classes into between 2 and d - 1 blocks, all
/// nonempty.
pub fn random_fusion(d: usize, rng: &mut impl Rng) -> Vec<usize> {
    let blocks = rng.gen_range(2..d);
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut map = vec![0usize; d];
    for (pos, &c) in order.iter().enumerate() {
        map[c] = if pos < blocks { pos } else { rng.gen_range(0..blocks) };
    }
    map
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmorphyEvidence {
    /// Every class is a regular PDS and all share one Latin typing.
    pub pds_typing_uniform: bool,
    pub typing: Option<&'static str>,
    pub fusion_samples: u64,
    pub fusion_samples_passed: u64,
    pub seed: u64,
}

impl AmorphyEvidence {
    pub fn amorphic(&self) -> bool {
        self.pds_typing_uniform && self.fusion_samples_passed == self.fusion_samples
    }
}

/// PDS certificates of the non-identity classes.
pub fn class_pds(space: &SpaceDesc, cert: &SchemeCertificate) -> Result<Vec<Option<PdsCertificate>>> {
    cert.classes[1..]
        .iter()
        .map(|c| {
            let chi = transform(space, &GrTable::indicator(space.p(), space.size() as usize, c.iter().copied()), Sign::Plus)?;
            check_pds_with_characters(space, c, &chi)
        })
        .collect()
}

pub fn check_amorphy(
    cert: &SchemeCertificate,
    pds: &[Option<PdsCertificate>],
    samples: u64,
    seed: u64,
) -> Result<AmorphyEvidence> {
    let d = cert.class_count();
    if d < 3 {
        return Err(Error::Precondition(format!("amorphy needs at least 3 classes, got {d}")));
    }
    let kinds: Vec<Option<&'static str>> = pds
        .iter()
        .map(|c| match c {
            Some(c) if c.regular && c.typing != Typing::None => Some(c.typing.name()),
            _ => None,
        })
        .collect();
    let uniform = kinds.iter().all(|k| k.is_some() && *k == kinds[0]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for _ in 0..samples {
        let map = random_fusion(d, &mut rng);
        if cert.is_scheme && fused_tensor(cert, &map).is_some() {
            passed += 1;
        }
    }
    Ok(AmorphyEvidence {
        pds_typing_uniform: uniform,
        typing: if uniform { kinds[0] } else { None },
        fusion_samples: samples,
        fusion_samples_passed: passed,
        seed,
    })
}

/// Predicted tensor for the scheme of a Condition A function with common ε:
/// `s[i]` is s_i for class i + 1, and N = p^{n/2}.
pub fn expected_intersection_numbers(big_n: i64, eps: i64, s: &[i64]) -> Vec<i64> {
    let r = s.len() + 1;
    let mut t = vec![0i64; r * r * r];
    let size = |i: usize| s[i - 1] * (big_n - eps);
    for k in 0..r {
        for i in 0..r {
            for j in 0..r {
                let v = if k == 0 {
                    if i == j && i != 0 {
                        size(i)
                    } else {
                        i64::from(i == 0 && j == 0)
                    }
                } else if i == 0 {
                    i64::from(j == k)
                } else if j == 0 {
                    i64::from(i == k)
                } else {
                    let (si, sj) = (s[i - 1], s[j - 1]);
                    match (i == j, i == k, j == k) {
                        (true, true, _) => eps * big_n - 2 + (si - eps) * (si - 2 * eps),
                        (true, false, _) => si * (si - eps),
                        (false, true, _) => sj * (si - eps),
                        (false, false, true) => si * (sj - eps),
                        (false, false, false) => si * sj,
                    }
                };
                t[(k * r + i) * r + j] = v;
            }
        }
    }
    t
}

#[derive(Debug, Clone)]
pub struct FiberReport {
    /// ε_{F_c} is constant on every fiber of F* over V*.
    pub condition: bool,
    /// I = F(V*).
    pub image: Vec<u32>,
    pub scheme: SchemeCertificate,
    /// The condition and scheme existence agree.
    pub consistent: bool,
}

/// Fiber-constancy of the ε tables versus existence of the scheme on
/// {D*_{F,i} : i ∈ F(V*)}.
pub fn check_fiber_condition(f: &VFunc, a: &VdbAnalysis) -> Result<FiberReport> {
    check_fiber_preconditions(f)?;
    let vd = a.dual.as_ref().ok_or_else(|| Error::Precondition("F must be vectorial dual-bent".into()))?;
    let eps = a.eps_table().ok_or_else(|| Error::Precondition("all components must be bent".into()))?;
    let mut first = vec![u32::MAX; f.codomain.size() as usize];
    let mut condition = true;
    'outer: for beta in 1..f.domain.size() {
        let y = vd.vdual.values[beta as usize] as usize;
        if first[y] == u32::MAX {
            first[y] = beta;
            continue;
        }
        let b0 = first[y] as usize;
        for table in &eps {
            if table[beta as usize] != table[b0] {
                condition = false;
                break 'outer;
            }
        }
    }
    let sets = punctured_preimage_sets(f);
    let image: Vec<u32> = (0..f.codomain.size()).filter(|&i| !sets[i as usize].is_empty()).collect();
    let classes: Vec<Vec<u32>> = image.iter().map(|&i| sets[i as usize].clone()).collect();
    let scheme = build_translation_scheme(&f.domain, &classes)?;
    let consistent = condition == scheme.is_scheme;
    Ok(FiberReport { condition, image, scheme, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_rows_sum_to_class_sizes() {
        let s = [17, 16, 16, 16];
        let t = expected_intersection_numbers(64, 1, &s);
        let r = 5;
        for k in 0..r {
            for i in 1..r {
                let sum: i64 = (0..r).map(|j| t[(k * r + i) * r + j]).sum();
                assert_eq!(sum, s[i - 1] * 63);
            }
        }
        assert_eq!(t[(2 * r + 2) * r + 2], 272);
        assert_eq!(t[(3 * r + 2) * r + 2], 240);
        assert_eq!(t[(4 * r + 2) * r + 3], 256);
    }

    #[test]
    fn random_fusions_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let m = random_fusion(5, &mut rng);
            let blocks = m.iter().max().unwrap() + 1;
            assert!((2..5).contains(&blocks));
            assert!((0..blocks).all(|b| m.contains(&b)));
        }
    }
}
