//! Finite fields GF(p^m) with a fixed modulus and multiplicative generator.
//!
//! Elements are stored as integer codes: the code of `c_0 + c_1 x + ... +
//! c_{m-1} x^{m-1}` is `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Multiplication
//! goes through discrete log tables built from the generator, so every
//! operation is a table lookup.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field size for which tables are built.
const MAX_FIELD_SIZE: u64 = 1 << 22;

/// Largest field size for which a full addition table is precomputed.
const ADD_TABLE_LIMIT: u32 = 1024;

/// Errors raised by finite field construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("characteristic {0} is smaller than 5")]
    PTooSmall(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReducibleModulus(u32),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("field of size {0} is too large for table arithmetic")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("discrete logarithm of zero")]
    DlogOfZero,
    #[error("GF({sub}) does not embed in GF({sup})")]
    NotASubfield { sub: u64, sup: u64 },
}

/// Shared handle to a field descriptor.
pub type Field = Arc<GaloisField>;

/// Descriptor of GF(p^m): modulus, generator and lookup tables.
pub struct GaloisField {
    p: u32,
    m: u32,
    size: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    neg_table: Option<Vec<u32>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

/// Returns true when `n` is prime (trial division).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn check_prime(p: u32) -> Result<(), GfError> {
    if !is_prime(p as u64) {
        return Err(GfError::NonPrime(p as u64));
    }
    if p < 5 {
        return Err(GfError::PTooSmall(p as u64));
    }
    Ok(())
}

fn field_size(p: u32, m: u32) -> Result<u64, GfError> {
    let mut size: u64 = 1;
    for _ in 0..m {
        size = size.saturating_mul(p as u64);
        if size > MAX_FIELD_SIZE {
            return Err(GfError::FieldTooLarge(size));
        }
    }
    Ok(size)
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p), low degree first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let t = (lead as u64 * bc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `n`.
fn monic_from_index(n: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(deg as usize + 1);
    let mut n = n;
    for _ in 0..deg {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out.push(1);
    out
}

/// Irreducibility of a monic polynomial by trial division.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for n in 0..count {
            let div = monic_from_index(n, d, p);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn code_to_coeffs(code: u32, p: u32, m: u32) -> Vec<u32> {
    let mut c = code;
    (0..m)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn coeffs_to_code(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(m, 0);
    r
}

fn powmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut acc = vec![0u32; m];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, modulus, p);
        }
        b = mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

impl GaloisField {
    /// GF(p^m) with the least irreducible modulus and the least primitive element.
    ///
    /// Monic candidates `x^m + c_{m-1} x^{m-1} + ... + c_0` are scanned in
    /// increasing order of the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
    pub fn new(p: u32, m: u32) -> Result<Field, GfError> {
        check_prime(p)?;
        if m == 0 {
            return Err(GfError::InvalidDegree(m));
        }
        let size = field_size(p, m)?;
        let modulus = (0..size)
            .map(|n| monic_from_index(n, m, p))
            .find(|poly| is_irreducible(poly, p))
            .ok_or(GfError::ReducibleModulus(m))?;
        Self::build(p, m, modulus)
    }

    /// GF(p^m) with a caller-supplied monic modulus given low degree first.
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Field, GfError> {
        check_prime(p)?;
        if m == 0 {
            return Err(GfError::InvalidDegree(m));
        }
        field_size(p, m)?;
        if modulus.len() != m as usize + 1
            || modulus[m as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(modulus, p)
        {
            return Err(GfError::ReducibleModulus(m));
        }
        Self::build(p, m, modulus.to_vec())
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Result<Field, GfError> {
        let size = field_size(p, m)? as u32;
        let order = size - 1;
        let factors = prime_factors(order as u64);
        let one = {
            let mut v = vec![0u32; m as usize];
            v[0] = 1;
            v
        };
        let generator = (1..size)
            .find(|&code| {
                let g = code_to_coeffs(code, p, m);
                powmod(&g, order as u64, &modulus, p) == one
                    && factors
                        .iter()
                        .all(|&r| powmod(&g, order as u64 / r, &modulus, p) != one)
            })
            .ok_or(GfError::ReducibleModulus(m))?;
        let g = code_to_coeffs(generator, p, m);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = one.clone();
        for i in 0..order {
            let code = coeffs_to_code(&cur, p);
            if log[code as usize] != u32::MAX {
                return Err(GfError::ReducibleModulus(m));
            }
            log[code as usize] = i;
            exp.push(code);
            cur = mulmod(&cur, &g, &modulus, p);
        }
        let mut field = GaloisField {
            p,
            m,
            size,
            order,
            modulus,
            generator,
            exp,
            log,
            add_table: None,
            neg_table: None,
        };
        if size <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    table[(a * size + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add_table = Some(table);
            field.neg_table = Some((0..size).map(|a| field.neg_digits(a)).collect());
        }
        Ok(Arc::new(field))
    }

    /// Characteristic.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Extension degree over GF(p).
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group, `p^m - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Code of the fixed generator.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Polynomial coefficients of an element code.
    pub fn coeffs(&self, x: u32) -> Vec<u32> {
        code_to_coeffs(x, self.p, self.m)
    }

    /// Element code of a coefficient vector (entries reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> u32 {
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % self.p).collect();
        c.resize(self.m as usize, 0);
        coeffs_to_code(&c, self.p)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, z: i64) -> u32 {
        z.rem_euclid(self.p as i64) as u32
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    /// Sum of two codes.
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.size + b) as usize] as u32,
            None => self.add_digits(a, b),
        }
    }

    /// Additive inverse.
    pub fn neg(&self, a: u32) -> u32 {
        match &self.neg_table {
            Some(t) => t[a as usize],
            None => self.neg_digits(a),
        }
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let p = self.p;
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    /// Difference of two codes.
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Product of two codes.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % self.order as u64) as usize]
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.order - l) % self.order) as usize])
    }

    /// Quotient `a / b`.
    pub fn div(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Power with a signed exponent; `0^e` with `e < 0` is a division by zero.
    pub fn pow(&self, a: u32, e: i64) -> Result<u32, GfError> {
        if a == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => Err(GfError::DivisionByZero),
                std::cmp::Ordering::Equal => Ok(1),
                std::cmp::Ordering::Greater => Ok(0),
            };
        }
        let l = self.log[a as usize] as i128 * e as i128;
        Ok(self.exp[l.rem_euclid(self.order as i128) as usize])
    }

    /// The `i`-th power of the absolute Frobenius, `x -> x^{p^i}`.
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let mut l = self.log[a as usize] as u64;
        for _ in 0..(i % self.m) {
            l = l * self.p as u64 % self.order as u64;
        }
        self.exp[l as usize]
    }

    /// Discrete logarithm to the fixed generator, in `[0, p^m - 2]`.
    pub fn dlog(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DlogOfZero);
        }
        Ok(self.log[a as usize])
    }

    /// `generator^k`.
    pub fn from_dlog(&self, k: i64) -> u32 {
        self.exp[k.rem_euclid(self.order as i64) as usize]
    }

    /// Image of `x` in `self` under `g_sub -> g^((p^m - 1)/(p^a - 1))`.
    ///
    /// This is a homomorphism of multiplicative groups that preserves discrete
    /// logarithms; zero maps to zero.
    pub fn embed(&self, sub: &GaloisField, x: u32) -> Result<u32, GfError> {
        if sub.p != self.p || !self.m.is_multiple_of(sub.m) {
            return Err(GfError::NotASubfield {
                sub: sub.size as u64,
                sup: self.size as u64,
            });
        }
        if x == 0 {
            return Ok(0);
        }
        let ratio = (self.order / sub.order) as u64;
        let l = sub.log[x as usize] as u64 * ratio % self.order as u64;
        Ok(self.exp[l as usize])
    }
}

/// An element of a finite field carrying its descriptor.
#[derive(Clone, Debug)]
pub struct FqElement {
    field: Field,
    code: u32,
}

impl PartialEq for FqElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for FqElement {}

impl FqElement {
    /// Wraps a code; the code is reduced into range.
    pub fn new(field: &Field, code: u32) -> Self {
        FqElement {
            field: field.clone(),
            code: code % field.size,
        }
    }

    /// Element with the given polynomial coefficients.
    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Self {
        FqElement {
            field: field.clone(),
            code: field.from_coeffs(coeffs),
        }
    }

    /// Additive identity.
    pub fn zero(field: &Field) -> Self {
        Self::new(field, 0)
    }

    /// Multiplicative identity.
    pub fn one(field: &Field) -> Self {
        Self::new(field, 1)
    }

    /// The fixed generator.
    pub fn generator(field: &Field) -> Self {
        Self::new(field, field.generator)
    }

    /// Integer code.
    pub fn code(&self) -> u32 {
        self.code
    }

    /// Polynomial coefficients, `m` residues mod p.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }

    /// Field descriptor.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), GfError> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(Self::new(
            &self.field,
            self.field.add(self.code, other.code),
        ))
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(Self::new(
            &self.field,
            self.field.sub(self.code, other.code),
        ))
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(Self::new(
            &self.field,
            self.field.mul(self.code, other.code),
        ))
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.field.neg(self.code))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, GfError> {
        Ok(Self::new(&self.field, self.field.inv(self.code)?))
    }

    /// Signed power.
    pub fn pow(&self, e: i64) -> Result<Self, GfError> {
        Ok(Self::new(&self.field, self.field.pow(self.code, e)?))
    }

    /// `x^{p^i}`.
    pub fn frobenius(&self, i: u32) -> Self {
        Self::new(&self.field, self.field.frobenius(self.code, i))
    }

    /// Discrete logarithm to the fixed generator.
    pub fn dlog(&self) -> Result<u32, GfError> {
        self.field.dlog(self.code)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field.dlog(self.code) {
            Ok(k) => write!(f, "g^{k}"),
            Err(_) => write!(f, "0"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf5_generator_and_inverse() {
        let k = GaloisField::new(5, 1).unwrap();
        assert_eq!(k.generator(), 2);
        assert_eq!(k.inv(2).unwrap(), 3);
        assert_eq!(k.pow(k.generator(), 4).unwrap(), 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(GaloisField::new(4, 2).unwrap_err(), GfError::NonPrime(4));
        assert_eq!(GaloisField::new(3, 2).unwrap_err(), GfError::PTooSmall(3));
        assert_eq!(
            GaloisField::new(5, 0).unwrap_err(),
            GfError::InvalidDegree(0)
        );
        // x^2 - 1 = (x - 1)(x + 1)
        assert_eq!(
            GaloisField::with_modulus(5, 2, &[4, 0, 1]).unwrap_err(),
            GfError::ReducibleModulus(2)
        );
    }

    #[test]
    fn gf25_default_modulus() {
        let k = GaloisField::new(5, 2).unwrap();
        // x^2 + 2 is the first irreducible in the scan order
        assert_eq!(k.modulus(), &[2, 0, 1]);
        assert_eq!(k.order(), 24);
        let g = k.generator();
        assert_eq!(k.pow(g, 24).unwrap(), 1);
        assert_eq!(k.dlog(g).unwrap(), 1);
        assert_eq!(k.dlog(k.mul(g, g)).unwrap(), 2);
        assert_eq!(k.dlog(1).unwrap(), 0);
        assert_eq!(k.dlog(0), Err(GfError::DlogOfZero));
    }

    #[test]
    fn frobenius_fixes_subfield_only() {
        let k = GaloisField::new(5, 2).unwrap();
        let x = k.from_coeffs(&[0, 1]);
        assert_ne!(k.frobenius(x, 1), x);
        assert_eq!(k.frobenius(x, 2), x);
        assert_eq!(k.frobenius(x, 0), x);
        assert_eq!(k.frobenius(3, 1), 3);
    }

    #[test]
    fn field_mismatch_detected() {
        let k5 = GaloisField::new(5, 1).unwrap();
        let k7 = GaloisField::new(7, 1).unwrap();
        let a = FqElement::one(&k5);
        let b = FqElement::one(&k7);
        assert_eq!(a.add(&b), Err(GfError::FieldMismatch));
    }

    #[test]
    fn embedding_preserves_dlog_ratio() {
        let k = GaloisField::new(7, 1).unwrap();
        let big = GaloisField::new(7, 2).unwrap();
        for x in 1..7 {
            for y in 1..7 {
                let lhs = big.embed(&k, k.mul(x, y)).unwrap();
                let rhs = big.mul(big.embed(&k, x).unwrap(), big.embed(&k, y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        let g = big.embed(&k, k.generator()).unwrap();
        assert_eq!(big.dlog(g).unwrap(), 48 / 6);
    }
}
