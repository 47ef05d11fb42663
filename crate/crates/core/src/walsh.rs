//! Walsh transforms of p-ary functions, bentness and duals.

use crate::cyclotomic::{BentMatcher, CycInt, UnitTag};
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::{ensure, Guards};
use crate::transform::{transform, GrTable, Sign};

/// A function from a space to F_p, as a table in canonical index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFunc {
    pub space: SpaceDesc,
    pub values: Vec<u8>,
}

impl PFunc {
    pub fn new(space: SpaceDesc, values: Vec<u8>) -> Result<Self> {
        if values.len() != space.size() as usize {
            return Err(Error::Shape(format!("expected {} values, got {}", space.size(), values.len())));
        }
        if let Some(v) = values.iter().find(|&&v| v as u32 >= space.p()) {
            return Err(Error::Shape(format!("value {v} out of range for p={}", space.p())));
        }
        Ok(PFunc { space, values })
    }

    pub fn from_fn(space: &SpaceDesc, f: impl Fn(u32) -> u32) -> Self {
        let p = space.p();
        let values = (0..space.size()).map(|x| (f(x) % p) as u8).collect();
        PFunc { space: space.clone(), values }
    }

    pub fn zero(space: &SpaceDesc) -> Self {
        PFunc { space: space.clone(), values: vec![0; space.size() as usize] }
    }

    pub fn p(&self) -> u32 {
        self.space.p()
    }

    /// x ↦ f(-x).
    pub fn reflect(&self) -> PFunc {
        Self::from_fn(&self.space, |x| self.values[self.space.neg(x) as usize] as u32)
    }

    /// Pointwise `a·f + b·g`.
    pub fn combine(&self, a: u32, other: &PFunc, b: u32) -> PFunc {
        let p = self.p();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| ((a * x as u32 + b * y as u32) % p) as u8)
            .collect();
        PFunc { space: self.space.clone(), values }
    }
}

/// W_f(a) = Σ_x ζ^{f(x) - ⟨a,x⟩} by direct summation.
pub fn walsh_naive(f: &PFunc) -> Result<Vec<CycInt>> {
    let s = &f.space;
    ensure("naive Walsh transform", s.size() as u64, Guards::get().naive_walsh)?;
    let p = s.p();
    let size = s.size() as usize;
    let mut out = Vec::with_capacity(size);
    let mut counts = vec![0i64; p as usize];
    for a in 0..s.size() {
        let row = s.inner_row(a);
        counts.fill(0);
        for x in 0..size {
            let e = (f.values[x] as u32 + p - row[x]) % p;
            counts[e as usize] += 1;
        }
        out.push(CycInt::from_group_ring(p, &counts));
    }
    Ok(out)
}

/// Walsh spectrum through the butterfly, as a group-ring table.
pub fn walsh_fast_table(f: &PFunc) -> Result<GrTable> {
    transform(&f.space, &GrTable::from_exponents(f.p(), &f.values), Sign::Minus)
}

/// Walsh spectrum through the butterfly.
pub fn walsh_fast(f: &PFunc) -> Result<Vec<CycInt>> {
    let t = walsh_fast_table(f)?;
    Ok((0..t.len()).map(|a| t.value(a)).collect())
}

#[derive(Debug, Clone)]
pub struct WalshSpectrum {
    pub table: GrTable,
    pub bent: bool,
    pub dual: Option<PFunc>,
    /// ε_f(a) per point, when bent.
    pub eps: Option<Vec<UnitTag>>,
    /// The common ε when ε_f(a) is constant.
    pub global_eps: Option<UnitTag>,
}

impl WalshSpectrum {
    pub fn value(&self, a: u32) -> CycInt {
        self.table.value(a as usize)
    }
    pub fn weakly_regular(&self) -> bool {
        self.global_eps.is_some()
    }
    pub fn regular(&self) -> bool {
        self.global_eps == Some(UnitTag::PLUS_ONE)
    }
}

/// Classifies a precomputed spectrum.
pub fn classify_table(space: &SpaceDesc, table: GrTable) -> Result<WalshSpectrum> {
    let matcher = BentMatcher::new(space.p(), space.dim())?;
    let size = table.len();
    let mut dual = Vec::with_capacity(size);
    let mut eps = Vec::with_capacity(size);
    for a in 0..size {
        match matcher.match_key(&table.key(a)) {
            Some((tag, j)) => {
                dual.push(j);
                eps.push(tag);
            }
            None => return Ok(WalshSpectrum { table, bent: false, dual: None, eps: None, global_eps: None }),
        }
    }
    let global_eps = eps.iter().all(|&e| e == eps[0]).then(|| eps[0]);
    let dual = PFunc { space: space.clone(), values: dual };
    Ok(WalshSpectrum { table, bent: true, dual: Some(dual), eps: Some(eps), global_eps })
}

pub fn classify_bent(f: &PFunc) -> Result<WalshSpectrum> {
    classify_table(&f.space, walsh_fast_table(f)?)
}

/// Σ_a |W(a)|^2 = p^{2n}, exactly.
pub fn parseval_holds(space: &SpaceDesc, table: &GrTable) -> bool {
    let p = space.p() as usize;
    let mut acc = vec![0i128; p];
    for a in 0..table.len() {
        let c = table.get(a);
        for (i, &x) in c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in c.iter().enumerate() {
                acc[(i + p - j) % p] += x as i128 * y as i128;
            }
        }
    }
    let target = (space.p() as i128).pow(2 * space.dim() as u32);
    if p == 2 {
        return acc[0] - acc[1] == target;
    }
    acc[1..].iter().all(|&v| v == acc[1]) && acc[0] - acc[1] == target
}

/// p^n ζ^{f(x)} = Σ_a W_f(a) ζ^{⟨a,x⟩} at every x.
pub fn check_inverse_transform(f: &PFunc, table: &GrTable) -> Result<bool> {
    let back = transform(&f.space, table, Sign::Plus)?;
    let n = f.space.size() as i64;
    let p = f.p();
    let mut target = vec![0i64; p as usize];
    for x in 0..back.len() {
        target.fill(0);
        target[f.values[x] as usize] = n;
        if back.key(x) != crate::cyclotomic::canonical_key(p, &target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a weakly regular bent f: f* is bent with (f*)* = f(-x) and
/// ε_{f*} = ε_f^{-1}.
pub fn check_dual_of_dual(f: &PFunc, spec: &WalshSpectrum) -> Result<bool> {
    let (Some(dual), Some(eps)) = (&spec.dual, spec.global_eps) else {
        return Err(Error::Precondition("dual-of-dual needs a weakly regular bent function".into()));
    };
    let dd = classify_bent(dual)?;
    Ok(dd.bent && dd.dual.as_ref() == Some(&f.reflect()) && dd.global_eps == Some(eps.inv()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x1x2_is_bent_and_self_dual() {
        let s = SpaceDesc::dot(2, 2).unwrap();
        let f = PFunc::from_fn(&s, |x| (x & 1) * (x >> 1));
        let w = walsh_naive(&f).unwrap();
        for a in 0..4u32 {
            let expected = if (a & 1) * (a >> 1) == 1 { -2 } else { 2 };
            assert_eq!(w[a as usize], CycInt::from_int(2, expected));
        }
        let spec = classify_bent(&f).unwrap();
        assert!(spec.bent && spec.regular());
        assert_eq!(spec.dual.as_ref().unwrap(), &f);
    }

    #[test]
    fn affine_is_not_bent() {
        let s = SpaceDesc::dot(2, 2).unwrap();
        let f = PFunc::from_fn(&s, |x| x & 1);
        assert!(!classify_bent(&f).unwrap().bent);
    }

    #[test]
    fn square_on_f3() {
        let s = SpaceDesc::dot(3, 1).unwrap();
        let f = PFunc::from_fn(&s, |x| x * x);
        let w = walsh_naive(&f).unwrap();
        assert_eq!(w[0], CycInt::from_group_ring(3, &[0, 1, -1]));
        let spec = classify_bent(&f).unwrap();
        assert!(spec.bent);
        assert_eq!(spec.global_eps, Some(UnitTag::PLUS_I));
    }
}
