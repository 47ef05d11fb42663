//! Generalized Hadamard matrices H = [ζ^{f(x-y)}] handled through their
//! generating functions; the explicit matrix only appears for small orders.

use crate::cyclotomic::{canonical_key, UnitTag};
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::{ensure, Guards};
use crate::transform::{transform, GrTable, Sign};
use crate::vdb::{component, VFunc, VectorialBent};
use crate::walsh::{classify_bent, walsh_fast_table, PFunc};

/// H^{(z)} with entry ζ^{f(x-y) - ⟨z, x-y⟩}.
#[derive(Debug, Clone)]
pub struct GhMatrix {
    pub generator: PFunc,
    pub shift: Option<u32>,
}

impl GhMatrix {
    pub fn new(generator: PFunc) -> Self {
        GhMatrix { generator, shift: None }
    }
    pub fn with_shift(generator: PFunc, z: u32) -> Self {
        GhMatrix { generator, shift: Some(z) }
    }
    pub fn order(&self) -> u32 {
        self.generator.space.size()
    }
    /// The generating function u ↦ f(u) - ⟨z, u⟩.
    pub fn effective(&self) -> PFunc {
        let f = &self.generator;
        match self.shift {
            None => f.clone(),
            Some(z) => {
                let row = f.space.inner_row(z);
                let p = f.p();
                PFunc::from_fn(&f.space, |u| f.values[u as usize] as u32 + p - row[u as usize])
            }
        }
    }
    /// Explicit exponent matrix, row-major.
    pub fn materialize(&self) -> Result<Vec<Vec<u8>>> {
        let s = &self.generator.space;
        ensure("matrix materialization", s.size() as u64, Guards::get().materialize)?;
        let g = self.effective();
        Ok((0..s.size()).map(|x| (0..s.size()).map(|y| g.values[s.sub(x, y) as usize]).collect()).collect())
    }
}

/// Σ_u ζ^{f(u) - f(u-w)} for every w, through |W_f|^2.
pub fn autocorrelation(f: &PFunc) -> Result<GrTable> {
    let w = walsh_fast_table(f)?;
    let sq = w.mul(&w.conj());
    transform(&f.space, &sq, Sign::Plus)?.div_exact(f.space.size() as i64)
}

fn autocorrelation_direct(f: &PFunc) -> Vec<[i64; 6]> {
    let s = &f.space;
    let p = s.p();
    let mut counts = vec![0i64; p as usize];
    (0..s.size())
        .map(|w| {
            counts.fill(0);
            for u in 0..s.size() {
                let e = (f.values[u as usize] as u32 + p - f.values[s.sub(u, w) as usize] as u32) % p;
                counts[e as usize] += 1;
            }
            canonical_key(p, &counts)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhReport {
    /// H·conj(H)^T = p^n·I, from the autocorrelation.
    pub generalized_hadamard: bool,
    /// The effective generating function is bent.
    pub bent: bool,
    /// Whether the direct autocorrelation loop also ran.
    pub direct_checked: bool,
}

/// Both routes, cross-asserted: the autocorrelation vanishes off zero iff
/// the generating function is bent.
pub fn check_generalized_hadamard(h: &GhMatrix) -> Result<GhReport> {
    let f = h.effective();
    let ac = autocorrelation(&f)?;
    let gh = (1..ac.len()).all(|w| ac.integer(w) == Some(0));
    let bent = classify_bent(&f)?.bent;
    let mut direct_checked = false;
    if f.space.size() as u64 <= Guards::get().brute_force {
        let direct = autocorrelation_direct(&f);
        if (0..ac.len()).any(|w| ac.key(w) != direct[w]) {
            return Err(Error::Inconsistency("autocorrelation routes disagree".into()));
        }
        direct_checked = true;
    }
    if gh != bent {
        return Err(Error::Inconsistency("Hadamard property and bentness disagree".into()));
    }
    Ok(GhReport { generalized_hadamard: gh, bent, direct_checked })
}

/// All components weakly regular with one real ε: then every column sum of
/// every H_c^{(z)}, scaled by p^{-n/2}, lies in ε·{ζ^j}.
pub fn check_unit_condition(vb: &VectorialBent, p: u32) -> Result<(bool, Option<i64>)> {
    if p == 2 {
        return Err(Error::Precondition("the unit condition is stated for odd p".into()));
    }
    if !vb.all_bent {
        return Ok((false, None));
    }
    let first = vb.spectra[0].global_eps;
    let common = vb.spectra.iter().all(|s| s.global_eps.is_some() && s.global_eps == first);
    match first.and_then(|e| e.sign()) {
        Some(e) if common => Ok((true, Some(e))),
        _ => Ok((false, None)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductRoute {
    /// Through the Walsh transform of (F_c)^* ∓ (F_d)^*.
    Walsh,
    /// Through the cross-correlation of F_c and F_d.
    Correlation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductReport {
    pub c: u32,
    pub d: u32,
    /// c + d for p = 2, c - d otherwise.
    pub target: u32,
    pub holds: bool,
    pub route: ProductRoute,
    /// Literal matrix multiplication agreed, when it ran.
    pub matrix_checked: Option<bool>,
}

fn pair_target(f: &VFunc, c: u32, d: u32) -> Result<u32> {
    let q = f.codomain.size();
    if c == 0 || d == 0 || c >= q || d >= q || c == d {
        return Err(Error::Invalid(format!("invalid pair ({c}, {d}): need distinct nonzero codomain elements")));
    }
    Ok(f.codomain.sub(c, d))
}

/// (p = 2) H_c H_d = 2^{n/2} H_{c+d}; (p odd) H_c conj(H_d)^T = ε p^{n/2}
/// H_{c-d} with ε the common sign of the unit condition.
pub fn check_product_identity(f: &VFunc, vb: &VectorialBent, c: u32, d: u32, eps: Option<i64>) -> Result<ProductReport> {
    let target = pair_target(f, c, d)?;
    let n = f.n();
    if n % 2 != 0 {
        return Err(Error::Precondition("the product identity needs even n".into()));
    }
    let p = f.p();
    let eps = if p == 2 { Some(1) } else { eps };
    let (sc, sd) = (vb.spectrum(c), vb.spectrum(d));
    let (Some(dc), Some(dd), Some(ec), Some(ed)) = (&sc.dual, &sd.dual, &sc.eps, &sd.eps) else {
        return Err(Error::Precondition("F_c and F_d must be bent".into()));
    };
    let ft = component(f, target)?;
    let expected = ft.reflect();
    let mut report = ProductReport { c, d, target, holds: false, route: ProductRoute::Walsh, matrix_checked: None };
    let Some(eps) = eps else {
        return Ok(report);
    };
    if ec == ed {
        let diff = dc.combine(1, dd, p - 1);
        let spec = classify_bent(&diff)?;
        let want = UnitTag::from_sign(eps as i8);
        report.holds = spec.global_eps == Some(want) && spec.dual.as_ref() == Some(&expected);
    } else {
        report.route = ProductRoute::Correlation;
        let prod = sc.table.mul(&sd.table.conj());
        let corr = transform(&f.domain, &prod, Sign::Minus)?.div_exact(f.domain.size() as i64)?;
        let half = (p as i64).pow(n as u32 / 2);
        let mut counts = vec![0i64; p as usize];
        report.holds = (0..corr.len()).all(|w| {
            counts.fill(0);
            counts[expected.values[w] as usize] = eps * half;
            corr.key(w) == canonical_key(p, &counts)
        });
    }
    if f.domain.size() as u64 <= Guards::get().materialize {
        report.matrix_checked = Some(product_by_matrices(f, c, d, target, eps)? == report.holds);
    }
    Ok(report)
}

/// Literal matrix oracle for the product identity.
pub fn product_by_matrices(f: &VFunc, c: u32, d: u32, target: u32, eps: i64) -> Result<bool> {
    let s = &f.domain;
    ensure("matrix materialization", s.size() as u64, Guards::get().materialize)?;
    let p = f.p();
    let hc = GhMatrix::new(component(f, c)?).materialize()?;
    let hd = GhMatrix::new(component(f, d)?).materialize()?;
    let ht = GhMatrix::new(component(f, target)?).materialize()?;
    let half = (p as i64).pow(f.n() as u32 / 2);
    let size = s.size() as usize;
    let mut counts = vec![0i64; p as usize];
    let mut want = vec![0i64; p as usize];
    for x in 0..size {
        for z in 0..size {
            counts.fill(0);
            for y in 0..size {
                // p = 2: (H_c H_d)_{x,z}; p odd: (H_c conj(H_d)^T)_{x,z}.
                let e = if p == 2 { hc[x][y] as u32 + hd[y][z] as u32 } else { hc[x][y] as u32 + p - hd[z][y] as u32 };
                counts[(e % p) as usize] += 1;
            }
            want.fill(0);
            want[ht[x][z] as usize] = eps * half;
            if canonical_key(p, &counts) != canonical_key(p, &want) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exponent matrix as text, one row per line with space-separated digits.
pub fn matrix_text(m: &[Vec<u8>]) -> String {
    let mut s = String::new();
    for row in m {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Convenience: Hadamard check for every component H_c.
pub fn check_components(f: &VFunc) -> Result<Vec<GhReport>> {
    (1..f.codomain.size()).map(|c| check_generalized_hadamard(&GhMatrix::new(component(f, c)?))).collect()
}

/// Whether `space` supports the literal matrix oracle.
pub fn materializable(space: &SpaceDesc) -> bool {
    space.size() as u64 <= Guards::get().materialize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_is_not_hadamard() {
        let s = SpaceDesc::dot(3, 2).unwrap();
        let r = check_generalized_hadamard(&GhMatrix::new(PFunc::zero(&s))).unwrap();
        assert!(!r.generalized_hadamard && !r.bent && r.direct_checked);
        let ac = autocorrelation(&PFunc::zero(&s)).unwrap();
        assert!((0..9).all(|w| ac.integer(w) == Some(9)));
    }

    #[test]
    fn x1x2_matrix_is_hadamard() {
        let s = SpaceDesc::dot(2, 2).unwrap();
        let f = PFunc::from_fn(&s, |x| (x & 1) * (x >> 1));
        let h = GhMatrix::new(f.clone());
        assert!(check_generalized_hadamard(&h).unwrap().generalized_hadamard);
        let m = h.materialize().unwrap();
        for x in 0..4 {
            for z in 0..4 {
                let dot: i32 = (0..4).map(|y| if (m[x][y] + m[z][y]) % 2 == 0 { 1 } else { -1 }).sum();
                assert_eq!(dot, if x == z { 4 } else { 0 });
            }
        }
    }
}
