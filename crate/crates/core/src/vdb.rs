//! Vectorial bent and vectorial dual-bent functions: components, the
//! permutation σ, vectorial duals, Condition A and preimage facts.

use num_bigint::BigInt;

use crate::cyclotomic::{CycInt, UnitTag};
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::linalg;
use crate::walsh::{classify_bent, PFunc, WalshSpectrum};

/// A function between two spaces over the same prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VFunc {
    pub domain: SpaceDesc,
    pub codomain: SpaceDesc,
    pub values: Vec<u32>,
}

impl VFunc {
    pub fn new(domain: SpaceDesc, codomain: SpaceDesc, values: Vec<u32>) -> Result<Self> {
        if domain.p() != codomain.p() {
            return Err(Error::ModulusMismatch(domain.p(), codomain.p()));
        }
        if codomain.dim() > domain.dim() {
            return Err(Error::Shape(format!("codomain dimension {} exceeds domain {}", codomain.dim(), domain.dim())));
        }
        if values.len() != domain.size() as usize {
            return Err(Error::Shape(format!("expected {} values, got {}", domain.size(), values.len())));
        }
        if values.iter().any(|&v| v >= codomain.size()) {
            return Err(Error::Shape("value outside the codomain".into()));
        }
        Ok(VFunc { domain, codomain, values })
    }

    pub fn from_fn(domain: &SpaceDesc, codomain: &SpaceDesc, f: impl Fn(u32) -> u32) -> Result<Self> {
        let values = (0..domain.size()).map(f).collect();
        Self::new(domain.clone(), codomain.clone(), values)
    }

    pub fn p(&self) -> u32 {
        self.domain.p()
    }
    pub fn n(&self) -> usize {
        self.domain.dim()
    }
    pub fn m(&self) -> usize {
        self.codomain.dim()
    }

    pub fn is_even(&self) -> bool {
        (0..self.domain.size()).all(|x| self.values[self.domain.neg(x) as usize] == self.values[x as usize])
    }

    /// F(ax) = F(x) for every a ∈ F_p^*.
    pub fn is_scalar_invariant(&self) -> bool {
        (2..self.p()).all(|a| (0..self.domain.size()).all(|x| self.values[self.domain.scale(a, x) as usize] == self.values[x as usize]))
    }
}

/// F_c(x) = ⟨c, F(x)⟩.
pub fn component(f: &VFunc, c: u32) -> Result<PFunc> {
    if c == 0 || c >= f.codomain.size() {
        return Err(Error::Invalid(format!("component index {c} must be a nonzero codomain element")));
    }
    let row = f.codomain.inner_row(c);
    let values = f.values.iter().map(|&y| row[y as usize] as u8).collect();
    Ok(PFunc { space: f.domain.clone(), values })
}

#[derive(Debug, Clone)]
pub struct VectorialBent {
    pub all_bent: bool,
    /// Spectrum of F_c at index c - 1.
    pub spectra: Vec<WalshSpectrum>,
}

impl VectorialBent {
    pub fn spectrum(&self, c: u32) -> &WalshSpectrum {
        &self.spectra[c as usize - 1]
    }
    pub fn dual(&self, c: u32) -> Option<&PFunc> {
        self.spectrum(c).dual.as_ref()
    }
}

pub fn check_vectorial_bent(f: &VFunc) -> Result<VectorialBent> {
    let mut spectra = Vec::with_capacity(f.codomain.size() as usize - 1);
    for c in 1..f.codomain.size() {
        spectra.push(classify_bent(&component(f, c)?)?);
    }
    let all_bent = spectra.iter().all(|s| s.bent);
    Ok(VectorialBent { all_bent, spectra })
}

#[derive(Debug, Clone)]
pub struct VectorialDual {
    /// c_1..c_m whose duals form the greedy basis.
    pub basis: Vec<u32>,
    /// σ(c_i).
    pub alpha_star: Vec<u32>,
    /// σ indexed by codomain element, with σ(0) = 0.
    pub sigma: Vec<u32>,
    pub vdual: VFunc,
}

impl VectorialDual {
    pub fn sigma_is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(c, &s)| c as u32 == s)
    }
}

fn combination_matches(target: &PFunc, parts: &[&PFunc], coeffs: &[u32], p: u32) -> bool {
    (0..target.values.len()).all(|x| {
        let s: u32 = parts.iter().zip(coeffs).map(|(d, &a)| a * d.values[x] as u32).sum();
        s % p == target.values[x] as u32
    })
}

fn coeff_vectors(p: u32, k: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..(p as u64).pow(k as u32)).map(move |mut code| {
        (0..k)
            .map(|_| {
                let d = (code % p as u64) as u32;
                code /= p as u64;
                d
            })
            .collect()
    })
}

/// Searches for a vectorial dual when every component is bent: the duals
/// together with zero must form an m-dimensional space of bent functions.
pub fn discover_vectorial_dual(f: &VFunc, vb: &VectorialBent) -> Result<Option<VectorialDual>> {
    if !vb.all_bent {
        return Ok(None);
    }
    let p = f.p();
    let m = f.m();
    let q = f.codomain.size();
    let mut basis: Vec<u32> = Vec::new();
    let mut coeffs: Vec<Vec<u32>> = vec![Vec::new(); q as usize];
    for c in 1..q {
        let dc = vb.dual(c).expect("bent components have duals");
        let parts: Vec<&PFunc> = basis.iter().map(|&b| vb.dual(b).unwrap()).collect();
        let found = coeff_vectors(p, basis.len()).find(|a| combination_matches(dc, &parts, a, p));
        match found {
            Some(a) => coeffs[c as usize] = a,
            None => {
                if basis.len() == m {
                    return Ok(None);
                }
                basis.push(c);
                let k = basis.len();
                coeffs[c as usize] = (0..k).map(|i| u32::from(i == k - 1)).collect();
            }
        }
    }
    if basis.len() < m {
        return Ok(None);
    }
    for v in coeffs.iter_mut().skip(1) {
        v.resize(m, 0);
    }
    let mut seen = std::collections::HashSet::new();
    for v in coeffs.iter().skip(1) {
        if v.iter().all(|&a| a == 0) || !seen.insert(v.clone()) {
            return Ok(None);
        }
    }
    // The duals must themselves be bent.
    for c in 1..q {
        if !classify_bent(vb.dual(c).unwrap())?.bent {
            return Ok(None);
        }
    }
    let cod = &f.codomain;
    let basis_rows: Vec<Vec<u32>> = basis.iter().map(|&c| cod.coords(c)).collect();
    let alpha_star_rows: Vec<Vec<u32>> = if linalg::rank(p, &basis_rows) == m {
        basis_rows
    } else {
        (0..m).map(|i| (0..m).map(|j| u32::from(i == j)).collect()).collect()
    };
    let gram: Vec<Vec<u32>> = (0..m).map(|i| cod.gram()[i * m..(i + 1) * m].to_vec()).collect();
    let x = linalg::inverse(p, &linalg::mat_mul(p, &alpha_star_rows, &gram))
        .ok_or_else(|| Error::Inconsistency("codomain inner product is degenerate".into()))?;
    let alpha: Vec<u32> = (0..m)
        .map(|j| cod.from_coords(&(0..m).map(|i| x[i][j]).collect::<Vec<_>>()).unwrap())
        .collect();
    let alpha_star: Vec<u32> = alpha_star_rows.iter().map(|r| cod.from_coords(r).unwrap()).collect();
    let combine = |a: &[u32], vecs: &[u32]| -> u32 {
        a.iter().zip(vecs).fold(0u32, |acc, (&k, &v)| cod.add(acc, cod.scale(k, v)))
    };
    let sigma: Vec<u32> = (0..q).map(|c| if c == 0 { 0 } else { combine(&coeffs[c as usize], &alpha_star) }).collect();
    let duals: Vec<&PFunc> = basis.iter().map(|&b| vb.dual(b).unwrap()).collect();
    let values: Vec<u32> = (0..f.domain.size() as usize)
        .map(|xi| {
            let a: Vec<u32> = duals.iter().map(|d| d.values[xi] as u32).collect();
            combine(&a, &alpha)
        })
        .collect();
    let vdual = VFunc::new(f.domain.clone(), cod.clone(), values)?;
    Ok(Some(VectorialDual { basis, alpha_star, sigma, vdual }))
}

/// (F_c)^* = (F^*)_{σ(c)} for every c, point by point.
pub fn verify_vectorial_dual(f: &VFunc, vb: &VectorialBent, vd: &VectorialDual) -> Result<bool> {
    for c in 1..f.codomain.size() {
        let lhs = vb.dual(c).ok_or_else(|| Error::Precondition("components must be bent".into()))?;
        if component(&vd.vdual, vd.sigma[c as usize])?.values != lhs.values {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct VdbAnalysis {
    pub bent: VectorialBent,
    pub dual: Option<VectorialDual>,
}

pub fn analyze(f: &VFunc) -> Result<VdbAnalysis> {
    let bent = check_vectorial_bent(f)?;
    let dual = discover_vectorial_dual(f, &bent)?;
    Ok(VdbAnalysis { bent, dual })
}

impl VdbAnalysis {
    /// The common ε of all components, when every component is weakly
    /// regular with the same ε.
    pub fn common_eps(&self) -> Option<UnitTag> {
        let first = self.bent.spectra.first()?.global_eps?;
        self.bent.spectra.iter().all(|s| s.global_eps == Some(first)).then_some(first)
    }

    pub fn all_weakly_regular(&self) -> bool {
        self.bent.all_bent && self.bent.spectra.iter().all(|s| s.weakly_regular())
    }

    /// ε_{F_c}(x) for c at index c - 1.
    pub fn eps_table(&self) -> Option<Vec<&[UnitTag]>> {
        self.bent.spectra.iter().map(|s| s.eps.as_deref()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct VdbCertificate {
    pub is_vectorial_bent: bool,
    pub is_vectorial_dual_bent: bool,
    pub sigma: Option<Vec<u32>>,
    pub vdual: Option<VFunc>,
    pub condition_a: bool,
    pub eps: Option<UnitTag>,
    /// Global ε per component (index c - 1), `None` for components that are
    /// not weakly regular bent.
    pub component_eps: Vec<Option<UnitTag>>,
    /// Per-point ε tables when some component is bent but not weakly regular.
    pub eps_table: Option<Vec<Vec<UnitTag>>>,
}

pub fn check_condition_a_parameters(n: usize, m: usize) -> Result<()> {
    if n % 2 != 0 || n < 4 || m < 2 || m > n / 2 {
        return Err(Error::Precondition(format!("Condition A needs n even, n >= 4 and 2 <= m <= n/2 (n={n}, m={m})")));
    }
    Ok(())
}

pub fn certificate(f: &VFunc, a: &VdbAnalysis) -> Result<VdbCertificate> {
    let component_eps: Vec<Option<UnitTag>> = a.bent.spectra.iter().map(|s| s.global_eps).collect();
    let eps_table = if a.bent.all_bent && !a.all_weakly_regular() {
        a.eps_table().map(|t| t.into_iter().map(|e| e.to_vec()).collect())
    } else {
        None
    };
    let sigma_identity = a.dual.as_ref().is_some_and(|d| d.sigma_is_identity());
    let eps = a.common_eps();
    let condition_a = sigma_identity && eps.is_some();
    if condition_a && f.p() > 3 && eps != Some(UnitTag::PLUS_ONE) {
        return Err(Error::Inconsistency(format!("Condition A with p={} > 3 must have ε = +1", f.p())));
    }
    Ok(VdbCertificate {
        is_vectorial_bent: a.bent.all_bent,
        is_vectorial_dual_bent: a.dual.is_some(),
        sigma: a.dual.as_ref().map(|d| d.sigma.clone()),
        vdual: a.dual.as_ref().map(|d| d.vdual.clone()),
        condition_a,
        eps: if condition_a { eps } else { None },
        component_eps,
        eps_table,
    })
}

pub fn check_condition_a(f: &VFunc) -> Result<(VdbCertificate, VdbAnalysis)> {
    check_condition_a_parameters(f.n(), f.m())?;
    let a = analyze(f)?;
    Ok((certificate(f, &a)?, a))
}

/// D_{F,i} for every codomain element i, each sorted.
pub fn preimage_sets(f: &VFunc) -> Vec<Vec<u32>> {
    let mut sets = vec![Vec::new(); f.codomain.size() as usize];
    for (x, &y) in f.values.iter().enumerate() {
        sets[y as usize].push(x as u32);
    }
    sets
}

/// D*_{F,i} = D_{F,i} without the origin.
pub fn punctured_preimage_sets(f: &VFunc) -> Vec<Vec<u32>> {
    let mut sets = preimage_sets(f);
    let f0 = f.values[0] as usize;
    sets[f0].retain(|&x| x != 0);
    sets
}

/// p^m (|D*_i| - p^{n-m} + δ_0(i)) = Σ_{c≠0} W_{F_c}(0) ζ^{-⟨c,i⟩}, for F(0) = 0.
pub fn check_preimage_identity(f: &VFunc, vb: &VectorialBent) -> Result<bool> {
    if f.values[0] != 0 {
        return Err(Error::Precondition("the preimage identity needs F(0) = 0".into()));
    }
    let p = f.p();
    let sizes: Vec<i64> = punctured_preimage_sets(f).iter().map(|s| s.len() as i64).collect();
    let pm = (p as i64).pow(f.m() as u32);
    let pnm = (p as i64).pow((f.n() - f.m()) as u32);
    let w0: Vec<CycInt> = vb.spectra.iter().map(|s| s.value(0)).collect();
    for i in 0..f.codomain.size() {
        let lhs = CycInt::from_int(p, BigInt::from(pm * (sizes[i as usize] - pnm + i64::from(i == 0))));
        let mut rhs = CycInt::zero(p);
        for c in 1..f.codomain.size() {
            let e = (p - f.codomain.inner(c, i)) % p;
            rhs = rhs.add(&w0[c as usize - 1].mul(&CycInt::zeta_pow(p, e))?)?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageReport {
    pub image_size: usize,
    pub dual_image_size: usize,
    /// n even, m = n/2 and every ε_{F_c}(0) = -1.
    pub exceptional: bool,
    pub expected: usize,
    pub holds: bool,
}

pub fn check_fiber_preconditions(f: &VFunc) -> Result<()> {
    let (n, m) = (f.n(), f.m());
    if m < 2 || 2 * m > n {
        return Err(Error::Precondition(format!("needs 2 <= m <= n/2 (n={n}, m={m})")));
    }
    if f.values[0] != 0 {
        return Err(Error::Precondition("needs F(0) = 0".into()));
    }
    if !f.is_even() {
        return Err(Error::Precondition("needs F(x) = F(-x)".into()));
    }
    Ok(())
}

fn image_size(f: &VFunc) -> usize {
    let mut seen = vec![false; f.codomain.size() as usize];
    for &v in &f.values[1..] {
        seen[v as usize] = true;
    }
    seen.iter().filter(|&&b| b).count()
}

/// |F(V*)| = |F*(V*)|, equal to p^m except in the exceptional case where it
/// is p^m - 1.
pub fn check_image_cardinality(f: &VFunc, a: &VdbAnalysis) -> Result<ImageReport> {
    check_fiber_preconditions(f)?;
    let vd = a.dual.as_ref().ok_or_else(|| Error::Precondition("F must be vectorial dual-bent".into()))?;
    let n = f.n();
    let all_minus = a.bent.spectra.iter().all(|s| s.eps.as_ref().map(|e| e[0]) == Some(UnitTag::MINUS_ONE));
    let exceptional = n % 2 == 0 && 2 * f.m() == n && all_minus;
    let q = f.codomain.size() as usize;
    let expected = if exceptional { q - 1 } else { q };
    let size = image_size(f);
    let dual_image_size = image_size(&vd.vdual);
    Ok(ImageReport { image_size: size, dual_image_size, exceptional, expected, holds: size == expected && dual_image_size == expected })
}

/// F* is again vectorial dual-bent, with F*(0) = 0 and F* even.
pub fn check_dual_round_trip(vd: &VectorialDual) -> Result<bool> {
    let g = &vd.vdual;
    if g.values[0] != 0 || !g.is_even() {
        return Ok(false);
    }
    Ok(analyze(g)?.dual.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4_mul() -> VFunc {
        let dom = SpaceDesc::with_defaults(2, &[2, 2]).unwrap();
        let cod = SpaceDesc::with_defaults(2, &[2]).unwrap();
        let f4 = cod.field(0).unwrap().clone();
        VFunc::from_fn(&dom, &cod, |x| f4.mul(dom.component(x, 0), dom.component(x, 1))).unwrap()
    }

    #[test]
    fn gf4_multiplication_has_squared_dual() {
        let f = gf4_mul();
        let a = analyze(&f).unwrap();
        assert!(a.bent.all_bent);
        let vd = a.dual.as_ref().unwrap();
        assert!(vd.sigma_is_identity());
        assert!(verify_vectorial_dual(&f, &a.bent, vd).unwrap());
        // The dual of Tr(c·x1·x2) is Tr(c^{-1}·a1·a2) = Tr(c·(a1·a2)^2).
        let f4 = f.codomain.field(0).unwrap().clone();
        let squared: Vec<u32> = f.values.iter().map(|&v| f4.mul(v, v)).collect();
        assert_eq!(vd.vdual.values, squared);
    }

    #[test]
    fn identity_components() {
        let s = SpaceDesc::dot(2, 2).unwrap();
        let f = VFunc::from_fn(&s, &s, |x| x).unwrap();
        assert_eq!(component(&f, 1).unwrap().values, vec![0, 1, 0, 1]);
        assert!(component(&f, 0).is_err());
        let zero = VFunc::from_fn(&s, &s, |_| 0).unwrap();
        assert!(!check_vectorial_bent(&zero).unwrap().all_bent);
    }
}
