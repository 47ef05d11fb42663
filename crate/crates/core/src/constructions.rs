//! Registry of concrete vectorial functions: the worked examples and the
//! quadratic, composite and Maiorana-McFarland templates behind them.

use std::sync::Arc;

use crate::cyclotomic::UnitTag;
use crate::error::{Error, Result};
use crate::field::{Embedding, GaloisField, SpaceDesc};
use crate::guards::{ensure, Guards};
use crate::vdb::VFunc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cor6Params {
    pub p: u32,
    pub r1: usize,
    pub r2: usize,
    pub m: usize,
    /// α_1, α_2, α_3 in GF(p^{r1}).
    pub alpha: [u32; 3],
    /// β, γ in GF(p^{r2}).
    pub beta: u32,
    pub gamma: u32,
    /// a_i of L(x) = Σ a_i x^{q^i} with q = p^m.
    pub l_coeffs: Vec<u32>,
}

impl Cor6Params {
    /// All parameters set to one and L(x) = x.
    pub fn simple(p: u32, r1: usize, r2: usize, m: usize) -> Self {
        Cor6Params { p, r1, r2, m, alpha: [1, 1, 1], beta: 1, gamma: 1, l_coeffs: vec![1] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Tr_2^6(x1·x2^58) on GF(2^6)^2.
    Example1,
    /// Tr_2^6(x1·x2^717) on GF(3^6)^2.
    Example2,
    /// The four-factor function over GF(2^6)^2 × GF(2^4)^2.
    Example3,
    /// Tr_2^6(x^2) on GF(3^6).
    Example4,
    /// The composite function with p = 5, r1 = r2 = 9, m = 3 (5^27 points).
    Example5,
    /// The same shape at p = 5, r1 = r2 = m = 2.
    Example5Reduced,
    /// Tr_m^n(α·x^2) on GF(p^n).
    Cor5Quadratic { p: u32, n: usize, m: usize, alpha: u32 },
    Cor6Composite(Cor6Params),
    /// Tr_m^k(x1·x2^d) on GF(p^k)^2.
    MmTraceMonomial { p: u32, k: usize, m: usize, d: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    VerifyFull,
    VerifyReducedOnly,
}

impl Feasibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Feasibility::VerifyFull => "verify_full",
            Feasibility::VerifyReducedOnly => "verify_reduced_only",
        }
    }
}

/// Conclusions asserted for a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySheet {
    pub vectorial_bent: Option<bool>,
    pub condition_a: Option<bool>,
    pub eps: Option<i64>,
    pub hadamard_factor: Option<i64>,
    pub scheme_classes: Option<usize>,
    pub bent_partition: Option<bool>,
    pub spectrum: Option<Vec<i64>>,
    /// Predicted ε_{F_c} for c = 1..p^m - 1, by codomain index.
    pub component_eps: Option<Vec<UnitTag>>,
    pub feasibility: Feasibility,
}

impl PropertySheet {
    fn full() -> Self {
        PropertySheet {
            vectorial_bent: Some(true),
            condition_a: None,
            eps: None,
            hadamard_factor: None,
            scheme_classes: None,
            bent_partition: None,
            spectrum: None,
            component_eps: None,
            feasibility: Feasibility::VerifyFull,
        }
    }
}

impl Construction {
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "example1" => Construction::Example1,
            "example2" => Construction::Example2,
            "example3" => Construction::Example3,
            "example4" => Construction::Example4,
            "example5" => Construction::Example5,
            "example5-reduced" => Construction::Example5Reduced,
            "cor6-small" => Construction::Cor6Composite(Cor6Params::simple(3, 2, 2, 2)),
            "cor6-wide" => Construction::Cor6Composite(Cor6Params::simple(3, 4, 2, 2)),
            "cor5-odd" => Construction::Cor5Quadratic { p: 3, n: 9, m: 3, alpha: 1 },
            _ => return parse_template(name),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Construction::Example1 => "example1".into(),
            Construction::Example2 => "example2".into(),
            Construction::Example3 => "example3".into(),
            Construction::Example4 => "example4".into(),
            Construction::Example5 => "example5".into(),
            Construction::Example5Reduced => "example5-reduced".into(),
            Construction::Cor5Quadratic { p, n, m, alpha } => format!("cor5:{p},{n},{m},{alpha}"),
            Construction::Cor6Composite(c) => format!("cor6:{},{},{},{}", c.p, c.r1, c.r2, c.m),
            Construction::MmTraceMonomial { p, k, m, d } => format!("mm:{p},{k},{m},{d}"),
        }
    }
}

/// `cor5:p,n,m[,alpha]`, `cor6:p,r1,r2,m` or `mm:p,k,m,d`.
fn parse_template(name: &str) -> Result<Construction> {
    let bad = || Error::Invalid(format!("unknown construction `{name}`"));
    let (tag, args) = name.split_once(':').ok_or_else(bad)?;
    let nums: Vec<u64> = args.split(',').map(|s| s.trim().parse::<u64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    match (tag, nums.as_slice()) {
        ("cor5", [p, n, m]) => Ok(Construction::Cor5Quadratic { p: *p as u32, n: *n as usize, m: *m as usize, alpha: 1 }),
        ("cor5", [p, n, m, a]) => Ok(Construction::Cor5Quadratic { p: *p as u32, n: *n as usize, m: *m as usize, alpha: *a as u32 }),
        ("cor6", [p, r1, r2, m]) => Ok(Construction::Cor6Composite(Cor6Params::simple(*p as u32, *r1 as usize, *r2 as usize, *m as usize))),
        ("mm", [p, k, m, d]) => Ok(Construction::MmTraceMonomial { p: *p as u32, k: *k as usize, m: *m as usize, d: *d }),
        _ => Err(bad()),
    }
}

fn field(p: u32, k: usize) -> Result<Arc<GaloisField>> {
    Ok(Arc::new(GaloisField::with_default(p, k)?))
}

fn check_domain_size(p: u32, n: usize) -> Result<()> {
    let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    ensure("construction domain", size.min(u64::MAX as u128) as u64, Guards::get().fast_walsh)
}

/// Tr_m^k(x1·x2^d) on GF(p^k)^2 with values in GF(p^m).
fn trace_monomial(p: u32, k: usize, m: usize, d: u64) -> Result<VFunc> {
    check_domain_size(p, 2 * k)?;
    let big = field(p, k)?;
    let small = field(p, m)?;
    let emb = Embedding::new(small.clone(), big.clone())?;
    let dom = SpaceDesc::from_fields(vec![big.clone(), big.clone()])?;
    let cod = SpaceDesc::from_fields(vec![small])?;
    let powd: Vec<u32> = (0..big.order()).map(|x| big.pow(x, d)).collect();
    VFunc::from_fn(&dom, &cod, |x| {
        let (x1, x2) = (dom.component(x, 0), dom.component(x, 1));
        emb.trace(big.mul(x1, powd[x2 as usize]))
    })
}

fn quadratic(p: u32, n: usize, m: usize, alpha: u32) -> Result<VFunc> {
    if p == 2 || m < 2 || n % m != 0 || m == n {
        return Err(Error::Precondition(format!("needs p odd, m >= 2, m | n and m != n (p={p}, n={n}, m={m})")));
    }
    check_domain_size(p, n)?;
    quadratic_over(field(p, n)?, field(p, m)?, alpha)
}

/// Tr_m^n(α x^2) over explicitly chosen field representations.
pub fn quadratic_over(big: Arc<GaloisField>, small: Arc<GaloisField>, alpha: u32) -> Result<VFunc> {
    if alpha == 0 || alpha >= big.order() {
        return Err(Error::Invalid(format!("α = {alpha} must be a nonzero element of GF({}^{})", big.p(), big.degree())));
    }
    let emb = Embedding::new(small.clone(), big.clone())?;
    let dom = SpaceDesc::from_fields(vec![big.clone()])?;
    let cod = SpaceDesc::from_fields(vec![small])?;
    VFunc::from_fn(&dom, &cod, |x| emb.trace(big.mul(alpha, big.mul(x, x))))
}

/// ξ^n with ξ = 1 for p ≡ 1 (mod 4) and ξ = i for p ≡ 3 (mod 4).
fn xi_power(p: u32, n: usize) -> UnitTag {
    if p % 4 == 1 {
        UnitTag::PLUS_ONE
    } else {
        UnitTag::PLUS_I.pow(n as u32)
    }
}

/// (-1)^{n-1} ξ^n η_n(a) for a nonzero in GF(p^n).
fn predicted_eps(big: &GaloisField, a: u32) -> UnitTag {
    let n = big.degree();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let eta = big.quadratic_character(a).expect("odd p") as i8;
    xi_power(big.p(), n).mul(UnitTag::from_sign(sign * eta))
}

fn composite(c: &Cor6Params) -> Result<VFunc> {
    let Cor6Params { p, r1, r2, m, alpha, beta, gamma, ref l_coeffs } = *c;
    if p == 2 || m < 2 || r1 % m != 0 || r2 % m != 0 {
        return Err(Error::Precondition(format!("needs p odd, m >= 2, m | r1 and m | r2 (p={p}, r1={r1}, r2={r2}, m={m})")));
    }
    check_domain_size(p, r1 + 2 * r2)?;
    let f1 = field(p, r1)?;
    let f2 = field(p, r2)?;
    let fm = field(p, m)?;
    let chars: Vec<i8> = alpha
        .iter()
        .map(|&a| if a == 0 || a >= f1.order() { 0 } else { f1.quadratic_character(a).unwrap() })
        .collect();
    if chars.iter().any(|&e| e == 0) || chars.iter().any(|&e| e != chars[0]) {
        return Err(Error::Precondition("α_1, α_2, α_3 must be nonzero and all squares or all non-squares".into()));
    }
    if beta == 0 || gamma == 0 || beta >= f2.order() || gamma >= f2.order() {
        return Err(Error::Precondition("β and γ must be nonzero".into()));
    }
    if l_coeffs.is_empty() || l_coeffs.iter().any(|&a| a >= f2.order()) {
        return Err(Error::Invalid("L needs coefficients in GF(p^r2)".into()));
    }
    let q = (p as u64).pow(m as u32);
    let l: Vec<u32> = (0..f2.order())
        .map(|x| {
            let mut acc = 0;
            let mut term = x;
            for &a in l_coeffs {
                acc = f2.add(acc, f2.mul(a, term));
                term = f2.pow(term, q);
            }
            acc
        })
        .collect();
    let mut seen = vec![false; l.len()];
    for &v in &l {
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::Precondition("L does not permute GF(p^r2)".into()));
        }
    }
    let e1 = Embedding::new(fm.clone(), f1.clone())?;
    let e2 = Embedding::new(fm.clone(), f2.clone())?;
    let dom = SpaceDesc::from_fields(vec![f1.clone(), f2.clone(), f2.clone()])?;
    let cod = SpaceDesc::from_fields(vec![fm.clone()])?;
    // H(j; x) for the three square classes of j.
    let h: Vec<Vec<u32>> = alpha
        .iter()
        .map(|&a| (0..f1.order()).map(|x| e1.trace(f1.mul(a, f1.mul(x, x)))).collect())
        .collect();
    let selector: Vec<usize> = (0..fm.order())
        .map(|j| match fm.quadratic_character(j).unwrap() {
            0 => 0,
            1 => 1,
            _ => 2,
        })
        .collect();
    let sel_y2: Vec<usize> = (0..f2.order()).map(|y| selector[e2.trace(f2.mul(gamma, f2.mul(y, y))) as usize]).collect();
    VFunc::from_fn(&dom, &cod, |x| {
        let (a, y1, y2) = (dom.component(x, 0), dom.component(x, 1), dom.component(x, 2));
        let g = e2.trace(f2.mul(beta, f2.mul(y1, l[y2 as usize])));
        fm.add(h[sel_y2[y2 as usize]][a as usize], g)
    })
}

/// The composite function with H(0; x) = Tr(x^2) and H(j; x) = Tr(α^2 x^2)
/// for j ≠ 0, α primitive, β = γ = 1 and L(x) = x.
fn example5_shape(p: u32, r: usize, m: usize) -> Result<VFunc> {
    let f1 = field(p, r)?;
    let a = f1.primitive_element();
    let a2 = f1.mul(a, a);
    composite(&Cor6Params { p, r1: r, r2: r, m, alpha: [1, a2, a2], beta: 1, gamma: 1, l_coeffs: vec![1] })
}

/// (Tr(y2^2))^{q-1}·Tr((α^2 - 1)x^2) + Tr(x^2 + y1·y2), the closed form of
/// [`example5_shape`] with q = p^m.
pub fn example5_closed_form(p: u32, r: usize, m: usize) -> Result<VFunc> {
    check_domain_size(p, 3 * r)?;
    let f = field(p, r)?;
    let fm = field(p, m)?;
    let emb = Embedding::new(fm.clone(), f.clone())?;
    let a = f.primitive_element();
    let coef = f.sub(f.mul(a, a), 1);
    let dom = SpaceDesc::from_fields(vec![f.clone(), f.clone(), f.clone()])?;
    let cod = SpaceDesc::from_fields(vec![fm.clone()])?;
    let q1 = fm.order() as u64 - 1;
    VFunc::from_fn(&dom, &cod, |x| {
        let (x0, y1, y2) = (dom.component(x, 0), dom.component(x, 1), dom.component(x, 2));
        let ind = fm.pow(emb.trace(f.mul(y2, y2)), q1);
        let left = fm.mul(ind, emb.trace(f.mul(coef, f.mul(x0, x0))));
        fm.add(left, emb.trace(f.add(f.mul(x0, x0), f.mul(y1, y2))))
    })
}

fn example3() -> Result<VFunc> {
    let f64_ = field(2, 6)?;
    let f16 = field(2, 4)?;
    let f4 = field(2, 2)?;
    let e6 = Embedding::new(f4.clone(), f64_.clone())?;
    let e4 = Embedding::new(f4.clone(), f16.clone())?;
    let alpha = f16.primitive_element();
    let dom = SpaceDesc::from_fields(vec![f64_.clone(), f64_.clone(), f16.clone(), f16.clone()])?;
    let cod = SpaceDesc::from_fields(vec![f4.clone()])?;
    let q6 = f64_.order() as usize;
    let q4 = f16.order() as usize;
    // Tables over (x1, x2) and (x3, x4).
    let mut t1 = vec![0u32; q6 * q6];
    let mut t2 = vec![0u32; q6 * q6];
    for x1 in 0..q6 as u32 {
        for x2 in 0..q6 as u32 {
            let a = f64_.mul(f64_.pow(x1, 52), x2);
            let b = f64_.mul(x1, f64_.pow(x2, 58));
            t1[x1 as usize + q6 * x2 as usize] = e6.trace(f64_.sub(a, b));
            t2[x1 as usize + q6 * x2 as usize] = e6.trace(b);
        }
    }
    let mut cube = vec![0u32; q4 * q4];
    let mut lin = vec![0u32; q4 * q4];
    for x3 in 0..q4 as u32 {
        for x4 in 0..q4 as u32 {
            let v = f16.mul(x3, f16.pow(x4, 14));
            cube[x3 as usize + q4 * x4 as usize] = f4.pow(e4.trace(v), 3);
            lin[x3 as usize + q4 * x4 as usize] = e4.trace(f16.mul(alpha, v));
        }
    }
    let low = q6 * q6;
    VFunc::from_fn(&dom, &cod, |x| {
        let (a, b) = (x as usize % low, x as usize / low);
        f4.add(f4.add(f4.mul(cube[b], t1[a]), t2[a]), lin[b])
    })
}

pub fn instantiate(c: &Construction) -> Result<VFunc> {
    match c {
        Construction::Example1 => trace_monomial(2, 6, 2, 58),
        Construction::Example2 => trace_monomial(3, 6, 2, 717),
        Construction::Example3 => example3(),
        Construction::Example4 => quadratic(3, 6, 2, 1),
        Construction::Example5 => {
            check_domain_size(5, 27)?;
            example5_shape(5, 9, 3)
        }
        Construction::Example5Reduced => example5_shape(5, 2, 2),
        Construction::Cor5Quadratic { p, n, m, alpha } => quadratic(*p, *n, *m, *alpha),
        Construction::Cor6Composite(params) => composite(params),
        Construction::MmTraceMonomial { p, k, m, d } => {
            if *m < 1 || k % m != 0 {
                return Err(Error::NotDivisor { m: *m, n: *k });
            }
            let order = (*p as u64).pow(*k as u32) - 1;
            if num_gcd(*d, order) != 1 {
                return Err(Error::Precondition(format!("x^{d} does not permute GF({p}^{k})")));
            }
            trace_monomial(*p, *k, *m, *d)
        }
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Predicted component signs for a quadratic Tr_m^n(α x^2).
fn quadratic_eps(p: u32, n: usize, m: usize, alpha: u32) -> Result<Vec<UnitTag>> {
    let big = field(p, n)?;
    let emb = Embedding::new(field(p, m)?, big.clone())?;
    Ok((1..emb.small.order()).map(|c| predicted_eps(&big, big.mul(alpha, emb.to_big(c)))).collect())
}

pub fn expected_properties(c: &Construction) -> Result<PropertySheet> {
    let mut s = PropertySheet::full();
    match c {
        Construction::Example1 => {
            s.condition_a = Some(true);
            s.eps = Some(1);
            s.hadamard_factor = Some(64);
            s.scheme_classes = Some(4);
            s.bent_partition = Some(true);
        }
        Construction::Example2 => {
            s.condition_a = Some(true);
            s.eps = Some(1);
            s.hadamard_factor = Some(729);
            s.scheme_classes = Some(9);
            s.bent_partition = Some(true);
        }
        Construction::Example3 => {
            s.condition_a = Some(true);
            s.eps = Some(1);
            s.bent_partition = Some(true);
            s.spectrum = Some(vec![-256, 768]);
            s.scheme_classes = Some(4);
            s.hadamard_factor = Some(1024);
        }
        Construction::Example4 => {
            s.condition_a = Some(false);
            s.scheme_classes = Some(9);
            s.component_eps = Some(quadratic_eps(3, 6, 2, 1)?);
        }
        Construction::Example5 => {
            s.scheme_classes = Some(125);
            s.feasibility = Feasibility::VerifyReducedOnly;
        }
        Construction::Example5Reduced => {
            s.scheme_classes = Some(25);
            let f1 = field(5, 2)?;
            let emb = Embedding::new(field(5, 2)?, f1.clone())?;
            s.component_eps = Some((1..25).map(|c| cor6_eps(&f1, 1, emb.to_big(c))).collect());
        }
        Construction::Cor5Quadratic { p, n, m, alpha } => {
            let big = field(*p, *n)?;
            let eta = big.quadratic_character(*alpha)?;
            let exceptional = n % 2 == 0 && 2 * m == *n && UnitTag::from_sign(eta) == xi_power(*p, *n);
            let q = (*p as usize).pow(*m as u32);
            s.scheme_classes = Some(if exceptional { q - 1 } else { q });
            s.component_eps = Some(quadratic_eps(*p, *n, *m, *alpha)?);
        }
        Construction::Cor6Composite(params) => {
            s.scheme_classes = Some((params.p as usize).pow(params.m as u32));
            let f1 = field(params.p, params.r1)?;
            let emb = Embedding::new(field(params.p, params.m)?, f1.clone())?;
            s.component_eps = Some((1..emb.small.order()).map(|c| cor6_eps(&f1, params.alpha[0], emb.to_big(c))).collect());
        }
        Construction::MmTraceMonomial { .. } => {}
    }
    Ok(s)
}

/// (-1)^{r1-1} ξ^{r1} η_{r1}(α_1 c).
fn cor6_eps(f1: &GaloisField, alpha1: u32, c: u32) -> UnitTag {
    predicted_eps(f1, f1.mul(alpha1, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in ["example1", "example4", "example5-reduced", "cor5:3,9,3,1", "cor6:3,4,2,2", "mm:2,4,2,7"] {
            let c = Construction::by_name(n).unwrap();
            assert_eq!(Construction::by_name(&c.name()).unwrap(), c);
        }
        assert!(Construction::by_name("example9").is_err());
    }

    #[test]
    fn full_example5_is_guarded() {
        assert!(matches!(instantiate(&Construction::Example5), Err(Error::Guard { .. })));
    }

    #[test]
    fn composite_rejects_mixed_squares() {
        let f = GaloisField::with_default(3, 2).unwrap();
        let ns = f.primitive_element();
        let mut c = Cor6Params::simple(3, 2, 2, 2);
        c.alpha = [1, 1, ns];
        assert!(matches!(instantiate(&Construction::Cor6Composite(c)), Err(Error::Precondition(_))));
    }
}
