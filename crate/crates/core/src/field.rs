//! Finite fields GF(p^k), product spaces of them, traces and the quadratic
//! character.
//!
//! Elements of GF(p^k) are stored as `u32` indices: the coefficient of `x^i`
//! in the polynomial basis is base-p digit `i` of the index. A point of a
//! product space is indexed the same way, with factor 1 in the low digits.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order for which log/exp tables are built.
const MAX_FIELD_ORDER: u64 = 1 << 24;
/// Largest product space that can be indexed by `u32`.
const MAX_SPACE_ORDER: u64 = 1 << 31;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Default defining polynomials, coefficients listed from `x^0` up to but not
/// including the leading 1.
const DEFAULT_IRREDUCIBLES: &[(u32, usize, &[u32])] = &[
    (2, 1, &[1]),                         // x + 1
    (2, 2, &[1, 1]),                      // x^2 + x + 1
    (2, 3, &[1, 1, 0]),                   // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0]),                // x^4 + x + 1
    (2, 5, &[1, 0, 1, 0, 0]),             // x^5 + x^2 + 1
    (2, 6, &[1, 1, 0, 1, 1, 0]),          // x^6 + x^4 + x^3 + x + 1
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),       // x^7 + x + 1
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0]),    // x^8 + x^4 + x^3 + x^2 + 1
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0]), // x^9 + x^4 + 1
    (3, 1, &[1]),                         // x + 1
    (3, 2, &[2, 2]),                      // x^2 + 2x + 2
    (3, 3, &[1, 2, 0]),                   // x^3 + 2x + 1
    (3, 4, &[2, 0, 0, 2]),                // x^4 + 2x^3 + 2
    (3, 5, &[1, 2, 0, 0, 0]),             // x^5 + 2x + 1
    (3, 6, &[2, 2, 1, 0, 2, 0]),          // x^6 + 2x^4 + x^2 + 2x + 2
    (3, 7, &[1, 0, 2, 0, 0, 0, 0]),       // x^7 + 2x^2 + 1
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0]),    // x^8 + 2x^5 + x^4 + 2x^2 + 2x + 2
    (3, 9, &[1, 1, 2, 2, 0, 0, 0, 0, 0]), // x^9 + 2x^3 + 2x^2 + x + 1
    (5, 1, &[3]),                         // x + 3
    (5, 2, &[2, 4]),                      // x^2 + 4x + 2
    (5, 3, &[3, 3, 0]),                   // x^3 + 3x + 3
    (5, 4, &[2, 4, 4, 0]),                // x^4 + 4x^2 + 4x + 2
    (5, 5, &[3, 4, 0, 0, 0]),             // x^5 + 4x + 3
    (5, 6, &[2, 0, 1, 4, 1, 0]),          // x^6 + x^4 + 4x^3 + x^2 + 2
    (5, 7, &[3, 3, 0, 0, 0, 0, 0]),       // x^7 + 3x + 3
    (5, 8, &[2, 4, 3, 0, 1, 0, 0, 0]),    // x^8 + x^4 + 3x^2 + 4x + 2
    (5, 9, &[3, 1, 0, 2, 0, 0, 0, 0, 0]), // x^9 + 2x^3 + x + 3
];

/// The default monic defining polynomial of GF(p^k), coefficients low to high
/// including the leading 1. Pairs outside the fixed table get the
/// lexicographically first primitive polynomial.
pub fn default_irreducible(p: u32, k: usize) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Invalid("field degree must be at least 1".into()));
    }
    if let Some((_, _, c)) = DEFAULT_IRREDUCIBLES.iter().find(|(q, d, _)| *q == p && *d == k) {
        let mut v = c.to_vec();
        v.push(1);
        return Ok(v);
    }
    search_primitive(p, k)
}

/// Lexicographically first (by coefficient list read from the constant term
/// up) monic primitive polynomial of degree `k`.
pub fn search_primitive(p: u32, k: usize) -> Result<Vec<u32>> {
    let order = (p as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if order > MAX_FIELD_ORDER {
        return Err(Error::Unsupported(format!("field GF({p}^{k}) is too large")));
    }
    for code in 0..order {
        let mut poly = digits_of(code, p, k);
        poly.push(1);
        if poly[0] == 0 || !is_irreducible(p, &poly) {
            continue;
        }
        let f = GaloisField::new(p, &poly)?;
        if f.primitive_element() == f.x_element() {
            return Ok(poly);
        }
    }
    Err(Error::Inconsistency(format!("no primitive polynomial of degree {k} over F_{p}")))
}

fn digits_of(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

pub fn modinv(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = modinv(m[dm], p);
    while r.len() > dm {
        let top = *r.last().unwrap();
        if top != 0 {
            let factor = top * lead_inv % p;
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - factor * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = match poly.iter().rposition(|&c| c != 0) {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    let poly = &poly[..=deg];
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = digits_of(code, p, d);
            div.push(1);
            if poly_rem(p, poly, &div).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// GF(p^k) with element indices in `0..p^k`.
#[derive(Debug)]
pub struct GaloisField {
    p: u32,
    degree: usize,
    modulus: Vec<u32>,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u32,
}

impl GaloisField {
    /// Builds GF(p^k) from a monic irreducible `modulus` (low to high,
    /// leading 1 included).
    pub fn new(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Invalid(format!(
                "defining polynomial {modulus:?} must be monic of degree >= 1 with coefficients below {p}"
            )));
        }
        if !is_irreducible(p, modulus) {
            return Err(Error::Reducible { p, poly: modulus.to_vec() });
        }
        let degree = modulus.len() - 1;
        let order64 = (p as u64).pow(degree as u32);
        if order64 > MAX_FIELD_ORDER {
            return Err(Error::Unsupported(format!("field GF({p}^{degree}) is too large")));
        }
        let order = order64 as u32;
        let mut f = GaloisField {
            p,
            degree,
            modulus: modulus.to_vec(),
            order,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        f.build_tables();
        Ok(f)
    }

    /// GF(p^k) under the default defining polynomial.
    pub fn with_default(p: u32, k: usize) -> Result<Self> {
        Self::new(p, &default_irreducible(p, k)?)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * self.degree - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = if prod.len() >= self.modulus.len() { poly_rem(self.p, &prod, &self.modulus) } else { prod };
        self.from_digits(&r)
    }

    fn element_order(&self, g: u32) -> u64 {
        // Repeated multiplication; only used while building tables.
        let mut acc = g;
        let mut k = 1u64;
        while acc != 1 {
            acc = self.mul_slow(acc, g);
            k += 1;
        }
        k
    }

    fn build_tables(&mut self) {
        let q1 = (self.order - 1) as u64;
        let factors = prime_factors(q1);
        let candidates = std::iter::once(self.x_element()).chain(1..self.order);
        let mut generator = 1;
        for g in candidates {
            if g == 0 || g >= self.order {
                continue;
            }
            if q1 == 1 {
                generator = 1;
                break;
            }
            let ok = factors.iter().all(|&r| self.pow_slow(g, q1 / r) != 1);
            if ok {
                generator = g;
                break;
            }
        }
        debug_assert!(q1 == 1 || self.element_order(generator) == q1);
        self.generator = generator;
        let n = self.order as usize - 1;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut acc = 1u32;
        for (i, slot) in exp.iter_mut().take(n.max(1)).enumerate() {
            *slot = acc;
            log[acc as usize] = i as u32;
            acc = self.mul_slow(acc, generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The primitive element used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        self.generator
    }
    /// The class of `x` (equal to the constant `-c0` when the degree is 1).
    pub fn x_element(&self) -> u32 {
        if self.degree == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree);
        let mut v = a;
        for _ in 0..self.degree {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        digit_add(self.p, self.degree, a, b)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        digit_scale(self.p, self.degree, a, self.p - 1)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplication by the prime-field scalar `k`.
    pub fn scale(&self, k: u32, a: u32) -> u32 {
        digit_scale(self.p, self.degree, a, k % self.p)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete logarithm to the table generator.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> u32 {
        let n = (self.order - 1) as u64;
        self.exp[(k % n) as usize]
    }

    /// `Σ_{j < degree/m} a^{p^{mj}}`, returned as an element of this field
    /// that lies in the subfield of degree `m`.
    pub fn trace_to(&self, a: u32, m: usize) -> Result<u32> {
        if m == 0 || self.degree % m != 0 {
            return Err(Error::NotDivisor { m, n: self.degree });
        }
        let q = (self.p as u64).pow(m as u32);
        let mut acc = 0;
        let mut term = a;
        for _ in 0..self.degree / m {
            acc = self.add(acc, term);
            term = self.pow(term, q);
        }
        Ok(acc)
    }

    /// Absolute trace as a residue mod p.
    pub fn trace(&self, a: u32) -> u32 {
        let t = self.trace_to(a, 1).expect("1 divides every degree");
        debug_assert!(t < self.p);
        t
    }

    /// +1 for nonzero squares, -1 for non-squares, 0 for zero. Requires p odd.
    pub fn quadratic_character(&self, a: u32) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::Precondition("quadratic character needs an odd prime".into()));
        }
        Ok(match self.log(a) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        })
    }

    pub fn is_in_subfield(&self, a: u32, m: usize) -> bool {
        self.degree % m == 0 && self.pow(a, (self.p as u64).pow(m as u32)) == a
    }
}

fn digit_add(p: u32, len: usize, a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..len {
        let s = (a % p + b % p) % p;
        out += s * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn digit_scale(p: u32, len: usize, a: u32, k: u32) -> u32 {
    if k == 1 {
        return a;
    }
    let mut a = a;
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..len {
        out += (a % p) * k % p * place;
        a /= p;
        place = place.wrapping_mul(p);
    }
    out
}

/// An embedding of GF(p^m) (under its own defining polynomial) into GF(p^k).
#[derive(Debug, Clone)]
pub struct Embedding {
    pub small: Arc<GaloisField>,
    pub big: Arc<GaloisField>,
    to_big: Vec<u32>,
    to_small: Vec<u32>,
}

impl Embedding {
    /// The image of the small field's `x` is `g^{(p^k-1)/(p^m-1)}` for the big
    /// field's generator `g` when that is a root of the small modulus, and
    /// the smallest root otherwise.
    pub fn new(small: Arc<GaloisField>, big: Arc<GaloisField>) -> Result<Self> {
        if small.p() != big.p() {
            return Err(Error::ModulusMismatch(small.p(), big.p()));
        }
        let (m, k) = (small.degree(), big.degree());
        if k % m != 0 {
            return Err(Error::NotDivisor { m, n: k });
        }
        let eval = |y: u32| -> u32 {
            // Horner evaluation of the small modulus at y in the big field.
            small.modulus().iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, y), c))
        };
        let root = if m == 1 {
            small.x_element()
        } else {
            let e = (big.order() as u64 - 1) / (small.order() as u64 - 1);
            let preferred = big.pow(big.primitive_element(), e);
            if eval(preferred) == 0 {
                preferred
            } else {
                (1..big.order())
                    .find(|&y| eval(y) == 0)
                    .ok_or_else(|| Error::Inconsistency("no root of the subfield modulus".into()))?
            }
        };
        let mut to_big = Vec::with_capacity(small.order() as usize);
        let mut to_small = vec![u32::MAX; big.order() as usize];
        for s in 0..small.order() {
            let b = if m == 1 {
                s
            } else {
                small.digits(s).iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, root), c))
            };
            to_small[b as usize] = s;
            to_big.push(b);
        }
        Ok(Embedding { small, big, to_big, to_small })
    }

    pub fn to_big(&self, s: u32) -> u32 {
        self.to_big[s as usize]
    }

    pub fn to_small(&self, b: u32) -> Option<u32> {
        match self.to_small[b as usize] {
            u32::MAX => None,
            s => Some(s),
        }
    }

    /// `Tr_m^k(a)` expressed in the small field.
    pub fn trace(&self, a: u32) -> u32 {
        let t = self.big.trace_to(a, self.small.degree()).expect("degrees checked at construction");
        self.to_small(t).expect("trace lands in the subfield")
    }
}

/// An ambient space: a product of extension fields of a common prime, with
/// the inner product `Σ_i Tr(a_i b_i)`.
#[derive(Debug, Clone)]
pub struct SpaceDesc {
    p: u32,
    factors: Vec<usize>,
    fields: Vec<Arc<GaloisField>>,
    offsets: Vec<usize>,
    n: usize,
    size: u32,
    pow_p: Vec<u32>,
    /// Gram matrix of the inner product on the digit basis, row-major n×n.
    gram: Vec<u32>,
}

impl PartialEq for SpaceDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.factors == other.factors
            && self.fields.iter().zip(&other.fields).all(|(a, b)| a.modulus() == b.modulus())
    }
}
impl Eq for SpaceDesc {}

impl SpaceDesc {
    pub fn new(p: u32, irreducibles: &[Vec<u32>]) -> Result<Self> {
        let fields = irreducibles
            .iter()
            .map(|m| GaloisField::new(p, m).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Self::from_fields(fields)
    }

    /// Product of fields with the default defining polynomials.
    pub fn with_defaults(p: u32, factors: &[usize]) -> Result<Self> {
        let irr = factors.iter().map(|&k| default_irreducible(p, k)).collect::<Result<Vec<_>>>()?;
        Self::new(p, &irr)
    }

    /// F_p^k with the dot product (k factors of degree 1).
    pub fn dot(p: u32, k: usize) -> Result<Self> {
        Self::with_defaults(p, &vec![1; k])
    }

    pub fn from_fields(fields: Vec<Arc<GaloisField>>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::Invalid("a space needs at least one factor".into()));
        }
        let p = fields[0].p();
        if let Some(f) = fields.iter().find(|f| f.p() != p) {
            return Err(Error::ModulusMismatch(p, f.p()));
        }
        let factors: Vec<usize> = fields.iter().map(|f| f.degree()).collect();
        let n: usize = factors.iter().sum();
        let size64 = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if size64 > MAX_SPACE_ORDER {
            return Err(Error::Unsupported(format!("space of order {p}^{n} cannot be indexed")));
        }
        let mut offsets = Vec::with_capacity(fields.len());
        let mut acc = 0;
        for &k in &factors {
            offsets.push(acc);
            acc += k;
        }
        let pow_p: Vec<u32> = (0..=n).map(|i| (p as u64).pow(i as u32) as u32).collect();
        let mut gram = vec![0u32; n * n];
        for (fi, f) in fields.iter().enumerate() {
            let k = f.degree();
            let o = offsets[fi];
            let xp: Vec<u32> = (0..2 * k).map(|e| f.pow(f.x_element(), e as u64)).collect();
            for i in 0..k {
                for j in 0..k {
                    gram[(o + i) * n + o + j] = f.trace(xp[i + j]);
                }
            }
        }
        Ok(SpaceDesc { p, factors, fields, offsets, n, size: size64 as u32, pow_p, gram })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn factors(&self) -> &[usize] {
        &self.factors
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    /// Number of points, `p^n`.
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn gram(&self) -> &[u32] {
        &self.gram
    }
    pub fn field(&self, factor: usize) -> Result<&Arc<GaloisField>> {
        self.fields.get(factor).ok_or(Error::FactorIndex { index: factor, count: self.fields.len() })
    }
    pub fn fields(&self) -> &[Arc<GaloisField>] {
        &self.fields
    }
    pub fn irreducibles(&self) -> Vec<Vec<u32>> {
        self.fields.iter().map(|f| f.modulus().to_vec()).collect()
    }

    pub fn coords(&self, x: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n);
        let mut v = x;
        for _ in 0..self.n {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.n {
            return Err(Error::Shape(format!("expected {} coordinates, got {}", self.n, c.len())));
        }
        if c.iter().any(|&v| v >= self.p) {
            return Err(Error::Shape(format!("coordinate out of range for p={}", self.p)));
        }
        Ok(c.iter().rev().fold(0u32, |acc, &v| acc * self.p + v))
    }

    /// Field element of factor `i` carried by point `x`.
    pub fn component(&self, x: u32, factor: usize) -> u32 {
        let f = &self.fields[factor];
        (x / self.pow_p[self.offsets[factor]]) % f.order()
    }

    /// Point from one field element per factor.
    pub fn compose(&self, parts: &[u32]) -> u32 {
        parts.iter().enumerate().map(|(i, &e)| e * self.pow_p[self.offsets[i]]).sum()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else {
            digit_add(self.p, self.n, a, b)
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            a
        } else {
            digit_scale(self.p, self.n, a, self.p - 1)
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, k: u32, a: u32) -> u32 {
        digit_scale(self.p, self.n, a, k % self.p)
    }

    /// Image of `x` under the Gram matrix, so that `⟨a, x⟩ = a · (G x)`.
    pub fn gram_apply(&self, x: u32) -> u32 {
        let c = self.coords(x);
        let mut out = 0u32;
        for i in (0..self.n).rev() {
            let row = &self.gram[i * self.n..(i + 1) * self.n];
            let s = row.iter().zip(&c).map(|(&g, &v)| g * v).sum::<u32>() % self.p;
            out = out * self.p + s;
        }
        out
    }

    /// Plain coordinate dot product of two indices.
    pub fn dot_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut s = 0u32;
        for _ in 0..self.n {
            s += (a % self.p) * (b % self.p);
            a /= self.p;
            b /= self.p;
        }
        s % self.p
    }

    /// `⟨a, b⟩ = Σ_i Tr(a_i b_i)`.
    pub fn inner(&self, a: u32, b: u32) -> u32 {
        self.dot_digits(a, self.gram_apply(b))
    }

    /// `⟨a, b⟩` for every `b`, indexed by `b`.
    pub fn inner_row(&self, a: u32) -> Vec<u32> {
        let ga = self.gram_apply(a);
        (0..self.size).map(|b| self.dot_digits(ga, b)).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        let rows: Vec<Vec<u32>> = (0..self.n).map(|i| self.gram[i * self.n..(i + 1) * self.n].to_vec()).collect();
        crate::linalg::rank(self.p, &rows) == self.n
    }

    pub fn multiply(&self, factor: usize, a: u32, b: u32) -> Result<u32> {
        let f = self.field(factor)?;
        if a >= f.order() || b >= f.order() {
            return Err(Error::Shape(format!("element out of range for factor {factor}")));
        }
        Ok(f.mul(a, b))
    }

    /// Trace of a factor element into the degree-`m` subfield, expressed
    /// under the default defining polynomial of that subfield.
    pub fn trace(&self, factor: usize, a: u32, m: usize) -> Result<u32> {
        let f = self.field(factor)?.clone();
        if m == 0 || f.degree() % m != 0 {
            return Err(Error::NotDivisor { m, n: f.degree() });
        }
        let small = Arc::new(GaloisField::with_default(self.p, m)?);
        Ok(Embedding::new(small, f)?.trace(a))
    }

    pub fn quadratic_character(&self, factor: usize, a: u32) -> Result<i8> {
        self.field(factor)?.quadratic_character(a)
    }

    /// `p=<p> factors=<n1>,<n2>,... irr=[c0,...,1],[...]`
    pub fn header(&self) -> String {
        let factors: Vec<String> = self.factors.iter().map(|k| k.to_string()).collect();
        let irr: Vec<String> = self
            .fields
            .iter()
            .map(|f| {
                let c: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
                format!("[{}]", c.join(","))
            })
            .collect();
        format!("p={} factors={} irr={}", self.p, factors.join(","), irr.join(","))
    }

    /// Parses [`SpaceDesc::header`] output. Errors carry 1-based columns.
    pub fn parse_header(line: &str, line_no: usize) -> Result<Self> {
        let perr = |column: usize, msg: String| Error::Parse { line: line_no, column, msg };
        let mut p = None;
        let mut factors: Option<Vec<usize>> = None;
        let mut irr: Option<Vec<Vec<u32>>> = None;
        let mut col = 1;
        for tok in line.split(' ') {
            if tok.is_empty() {
                col += 1;
                continue;
            }
            let (key, val) = tok.split_once('=').ok_or_else(|| perr(col, format!("expected key=value, got `{tok}`")))?;
            let vcol = col + key.len() + 1;
            match key {
                "p" => p = Some(val.parse::<u32>().map_err(|e| perr(vcol, format!("bad prime: {e}")))?),
                "factors" => {
                    factors = Some(
                        val.split(',')
                            .map(|s| s.parse::<usize>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|e| perr(vcol, format!("bad factor list: {e}")))?,
                    )
                }
                "irr" => irr = Some(parse_poly_list(val).map_err(|(off, msg)| perr(vcol + off, msg))?),
                _ => return Err(perr(col, format!("unknown key `{key}`"))),
            }
            col += tok.len() + 1;
        }
        let p = p.ok_or_else(|| perr(1, "missing p=".into()))?;
        let factors = factors.ok_or_else(|| perr(1, "missing factors=".into()))?;
        let irr = match irr {
            Some(v) => v,
            None => factors.iter().map(|&k| default_irreducible(p, k)).collect::<Result<_>>()?,
        };
        if irr.len() != factors.len() || irr.iter().zip(&factors).any(|(poly, &k)| poly.len() != k + 1) {
            return Err(perr(1, "irreducible degrees do not match factors".into()));
        }
        Self::new(p, &irr)
    }
}

fn parse_poly_list(s: &str) -> std::result::Result<Vec<Vec<u32>>, (usize, String)> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'[' {
            return Err((i, "expected `[`".into()));
        }
        let close = s[i..].find(']').ok_or((i, "missing `]`".to_string()))? + i;
        let poly = s[i + 1..close]
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| (i + 1, format!("bad coefficient: {e}")))?;
        out.push(poly);
        i = close + 1;
        if i < bytes.len() {
            if bytes[i] != b',' {
                return Err((i, "expected `,` between polynomials".into()));
            }
            i += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_relation() {
        let f = GaloisField::with_default(2, 2).unwrap();
        let a = f.x_element();
        assert_eq!(f.mul(a, a), f.add(a, 1));
        assert_eq!(f.trace(a), 1);
        assert_eq!(f.mul(a, 1), a);
    }

    #[test]
    fn gf9_exhaustive_associativity() {
        let f = GaloisField::new(3, &[1, 0, 1]).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn gf64_trace_balanced() {
        let f = GaloisField::with_default(2, 6).unwrap();
        assert_eq!((0..64).filter(|&a| f.trace(a) == 0).count(), 32);
        assert_eq!(f.trace(0), 0);
    }

    #[test]
    fn eta_in_f3() {
        let f = GaloisField::with_default(3, 1).unwrap();
        assert_eq!(f.quadratic_character(2).unwrap(), -1);
        assert_eq!(f.quadratic_character(1).unwrap(), 1);
        assert_eq!(f.quadratic_character(0).unwrap(), 0);
        assert!(GaloisField::with_default(2, 3).unwrap().quadratic_character(1).is_err());
    }

    #[test]
    fn reducible_rejected() {
        assert!(matches!(GaloisField::new(2, &[1, 0, 1]), Err(Error::Reducible { .. })));
        assert!(!is_irreducible(3, &[2, 0, 1]));
        assert!(is_irreducible(3, &[1, 0, 1]));
    }

    #[test]
    fn header_round_trip() {
        let s = SpaceDesc::with_defaults(3, &[2, 1, 4]).unwrap();
        let h = s.header();
        assert_eq!(h, "p=3 factors=2,1,4 irr=[2,2,1],[1,1],[2,0,0,2,1]");
        assert_eq!(SpaceDesc::parse_header(&h, 2).unwrap(), s);
        let err = SpaceDesc::parse_header("p=3 factors=2 irr=[1,0,x]", 2).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn dot_form_example() {
        let s = SpaceDesc::dot(2, 4).unwrap();
        let a = s.from_coords(&[1, 1, 0, 1]).unwrap();
        let b = s.from_coords(&[1, 0, 1, 1]).unwrap();
        assert_eq!(s.inner(a, b), 0);
    }
}
