//! Truncated Laurent series over a finite field and over its dual numbers.
//!
//! A series stores its nonzero terms sparsely together with an absolute
//! precision `prec`: every coefficient of exponent `<= prec` is exact, and
//! nothing is known beyond it. Exact series (Laurent polynomials) carry no
//! precision bound. Operations propagate precision and refuse to invent
//! coefficients: when a result would have no guaranteed leading term the
//! operation fails with [`LaurentError::PrecisionExhausted`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::gf::{Field, GfError};

/// Errors raised by series arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("inverse of the zero series")]
    InverseOfZero,
    #[error("precision exhausted: no guaranteed coefficient remains")]
    PrecisionExhausted,
    #[error("the zero series has no lowest term")]
    ZeroSeries,
    #[error("series belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Truncated Laurent series in `v` over GF(p^m).
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    field: Field,
    terms: Vec<(i64, u32)>,
    prec: Option<i64>,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.terms == other.terms && self.prec == other.prec
    }
}

impl Eq for LaurentSeries {}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Largest number of tail terms for which inverses use the direct recurrence.
const SPARSE_INVERSE_MAX: usize = 16;

/// Operand size above which dense products use Karatsuba splitting.
const KARATSUBA_MIN: usize = 32;

/// Dense coefficient vector of sorted terms, relative to the first exponent, cut at `len`.
fn dense(terms: &[(i64, u32)], len: i64) -> Vec<u32> {
    let base = terms[0].0;
    let mut out = vec![0u32; len as usize];
    for &(e, c) in terms {
        if e - base >= len {
            break;
        }
        out[(e - base) as usize] = c;
    }
    out
}

/// Common difference of the exponents of `terms`, or 0 for a single term.
fn stride(terms: &[(i64, u32)]) -> i64 {
    let base = terms[0].0;
    terms.iter().fold(0, |g, &(e, _)| {
        let (mut x, mut y) = (g, e - base);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    })
}

/// Product terms on `[lo, hi]` when `a` is dense and `b` is dense on a stride `s > 1`.
///
/// `a` is split by exponent residue mod `s`; each part is multiplied by the
/// compressed `b` as a dense product.
fn strided_product(
    k: &Field,
    a: &[(i64, u32)],
    b: &[(i64, u32)],
    lo: i64,
    hi: i64,
) -> Option<Vec<(i64, u32)>> {
    let s = stride(b);
    let len = hi - lo + 1;
    let sa = (a[a.len() - 1].0 - a[0].0 + 1).min(len);
    let sb = (b[b.len() - 1].0 - b[0].0) / s.max(1) + 1;
    if s < 2 || sb < KARATSUBA_MIN as i64 || (a.len() as i64) * 4 < sa || (b.len() as i64) * 4 < sb
    {
        return None;
    }
    let da = dense(a, sa);
    let cb: Vec<u32> = dense(b, (sb - 1) * s + 1)
        .into_iter()
        .step_by(s as usize)
        .collect();
    let mut out = vec![0u32; len as usize];
    for r in 0..(s as usize).min(da.len()) {
        let part: Vec<u32> = da[r..].iter().copied().step_by(s as usize).collect();
        let n = (len as usize - r).div_ceil(s as usize);
        for (i, c) in mul_trunc(k, &part, &cb, n).into_iter().enumerate() {
            out[r + i * s as usize] = c;
        }
    }
    Some(
        out.into_iter()
            .enumerate()
            .filter(|t| t.1 != 0)
            .map(|(i, c)| (lo + i as i64, c))
            .collect(),
    )
}

/// Integer convolution, by Karatsuba splitting above a small threshold.
fn conv(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (n, m) = (a.len(), b.len());
    let mut out = vec![0i64; n + m - 1];
    if n < KARATSUBA_MIN || m < KARATSUBA_MIN {
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                for (o, &y) in out[i..].iter_mut().zip(b) {
                    *o += x * y;
                }
            }
        }
        return out;
    }
    if n != m {
        // split the longer operand into chunks of the shorter length
        let (long, short) = if n > m { (a, b) } else { (b, a) };
        for (c, chunk) in long.chunks(short.len()).enumerate() {
            let start = c * short.len();
            for (o, x) in out[start..].iter_mut().zip(conv(chunk, short)) {
                *o += x;
            }
        }
        return out;
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = conv(a0, b0);
    let z2 = conv(a1, b1);
    let sum = |x: &[i64], y: &[i64]| -> Vec<i64> {
        let mut v = y.to_vec();
        for (vi, &c) in v.iter_mut().zip(x) {
            *vi += c;
        }
        v
    };
    let mut z1 = conv(&sum(a0, a1), &sum(b0, b1));
    for (i, &c) in z0.iter().enumerate() {
        z1[i] -= c;
        out[i] += c;
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] -= c;
        out[i + 2 * h] += c;
    }
    for (i, &c) in z1.iter().enumerate() {
        out[i + h] += c;
    }
    out
}

/// Prime `119 * 2^23 + 1` used for number-theoretic transforms.
const NTT_PRIME: u64 = 998_244_353;
/// Primitive root modulo [`NTT_PRIME`].
const NTT_ROOT: u64 = 3;
/// Shortest operand for which dense products use transforms.
const NTT_MIN: usize = 128;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= NTT_PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % NTT_PRIME;
        }
        b = b * b % NTT_PRIME;
        e >>= 1;
    }
    r
}

/// Twiddle factors for a transform of length `n`: entry `half + j` of the
/// table is `w_len^j` for the stage of length `len = 2 half`.
fn twiddles(n: usize, invert: bool) -> std::sync::Arc<Vec<u64>> {
    type Cache = Mutex<HashMap<(usize, bool), std::sync::Arc<Vec<u64>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(n, invert)) {
        return t.clone();
    }
    let mut table = vec![0u64; n.max(2)];
    let mut half = 1;
    while half < n {
        let mut w = pow_mod(NTT_ROOT, (NTT_PRIME - 1) / (2 * half) as u64);
        if invert {
            w = pow_mod(w, NTT_PRIME - 2);
        }
        let mut x = 1u64;
        for slot in &mut table[half..2 * half] {
            *slot = x;
            x = x * w % NTT_PRIME;
        }
        half <<= 1;
    }
    let table = std::sync::Arc::new(table);
    cache.lock().unwrap().insert((n, invert), table.clone());
    table
}

/// In-place iterative transform of length a power of two.
fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let table = twiddles(n, invert);
    let mut half = 1;
    while half < n {
        let ws = &table[half..2 * half];
        for chunk in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &wk) in lo.iter_mut().zip(hi.iter_mut()).zip(ws) {
                let t = *v * wk % NTT_PRIME;
                let s = *u + t;
                *v = if *u >= t { *u - t } else { *u + NTT_PRIME - t };
                *u = if s >= NTT_PRIME { s - NTT_PRIME } else { s };
            }
        }
        half <<= 1;
    }
    if invert {
        let ninv = pow_mod(n as u64, NTT_PRIME - 2);
        for x in a.iter_mut() {
            *x = *x * ninv % NTT_PRIME;
        }
    }
}

/// Reductions `x^t mod modulus` for `t < 2m - 1`, as digit vectors.
fn power_reductions(k: &Field) -> Vec<Vec<i64>> {
    let p = k.p() as i64;
    let m = k.degree() as usize;
    let modulus = k.modulus();
    let mut red: Vec<Vec<i64>> = Vec::with_capacity(2 * m - 1);
    for t in 0..2 * m - 1 {
        let mut v = vec![0i64; m];
        if t < m {
            v[t] = 1;
        } else {
            let prev = &red[t - 1];
            let top = prev[m - 1];
            for s in (1..m).rev() {
                v[s] = prev[s - 1];
            }
            for (s, vs) in v.iter_mut().enumerate() {
                *vs = (*vs - top * modulus[s] as i64).rem_euclid(p);
            }
        }
        red.push(v);
    }
    red
}

/// Cyclic product of dense coefficient vectors over `GF(p^m)`.
///
/// Codes are split into their `m` base-`p` digits, the digit vectors are
/// convolved over the integers and recombined modulo the field modulus.
/// Coefficient `j` of the linear product is added into slot `j mod N`, where
/// `N` is the least power of two at least `cycle`; the first `n` slots are
/// returned.
fn field_conv_cyclic(k: &Field, a: &[u32], b: &[u32], n: usize, cycle: usize) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![0; n];
    }
    let p = k.p() as i64;
    let m = k.degree() as usize;
    let size = cycle.next_power_of_two();
    let lin = a.len() + b.len() - 1;
    let digits = |v: &[u32]| -> Vec<Vec<i64>> {
        let mut out = vec![Vec::with_capacity(v.len()); m];
        for &c in v {
            let mut c = c as i64;
            for d in out.iter_mut() {
                d.push(c % p);
                c /= p;
            }
        }
        out
    };
    let (da, db) = (digits(a), digits(b));
    let red = power_reductions(k);
    let folds = lin.div_ceil(size) as u64;
    let bound =
        (2 * m as u64 - 1) * m as u64 * (p as u64 - 1).pow(3) * folds * a.len().min(b.len()) as u64;
    // sums[s][i] = digit s of slot i, before reduction mod p
    let sums: Vec<Vec<i64>> = if a.len().min(b.len()) >= NTT_MIN && bound < NTT_PRIME {
        let forward = |v: &[i64]| {
            let mut x = vec![0u64; size];
            for (j, &c) in v.iter().enumerate() {
                let slot = &mut x[j & (size - 1)];
                *slot = (*slot + c as u64) % NTT_PRIME;
            }
            ntt(&mut x, false);
            x
        };
        let fa: Vec<Vec<u64>> = da.iter().map(|v| forward(v)).collect();
        let fb: Vec<Vec<u64>> = db.iter().map(|v| forward(v)).collect();
        let mut buckets = vec![vec![0u64; size]; 2 * m - 1];
        for (i, x) in fa.iter().enumerate() {
            for (j, y) in fb.iter().enumerate() {
                for ((o, &u), &w) in buckets[i + j].iter_mut().zip(x).zip(y) {
                    *o = (*o + u * w) % NTT_PRIME;
                }
            }
        }
        (0..m)
            .map(|s| {
                let mut acc = vec![0u64; size];
                for (t, bucket) in buckets.iter().enumerate() {
                    let r = red[t][s] as u64;
                    if r != 0 {
                        for (o, &c) in acc.iter_mut().zip(bucket) {
                            *o = (*o + r * c) % NTT_PRIME;
                        }
                    }
                }
                ntt(&mut acc, true);
                acc.truncate(n.min(size));
                acc.into_iter().map(|c| c as i64).collect()
            })
            .collect()
    } else {
        let mut buckets = vec![vec![0i64; size]; 2 * m - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                for (idx, c) in conv(x, y).into_iter().enumerate() {
                    buckets[i + j][idx & (size - 1)] += c;
                }
            }
        }
        (0..m)
            .map(|s| {
                (0..n.min(size))
                    .map(|idx| {
                        buckets
                            .iter()
                            .enumerate()
                            .map(|(t, bk)| bk[idx].rem_euclid(p) * red[t][s])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    };
    let mut out = vec![0u32; n];
    for (idx, slot) in out.iter_mut().enumerate().take(n.min(size)) {
        let mut code = 0i64;
        for digit in sums.iter().rev() {
            code = code * p + digit[idx].rem_euclid(p);
        }
        *slot = code as u32;
    }
    out
}

/// Linear product of dense coefficient vectors over `GF(p^m)`.
fn field_conv(k: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let lin = a.len() + b.len() - 1;
    field_conv_cyclic(k, a, b, lin, lin)
}

/// Product of dense vectors truncated to `len` coefficients.
///
/// When the full product would need a longer transform, a cyclic product of
/// length about `len` is corrected by the wrapped high coefficients, which
/// only involve the operand tails.
fn mul_trunc(k: &Field, a: &[u32], b: &[u32], len: usize) -> Vec<u32> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() {
        return vec![0; len];
    }
    let (la, lb) = (a.len(), b.len());
    let lin = la + lb - 1;
    let cycle = len.next_power_of_two();
    if lin <= cycle || lin.next_power_of_two() == cycle {
        let mut out = field_conv(k, a, b);
        out.resize(len, 0);
        return out;
    }
    let mut out = field_conv_cyclic(k, a, b, len, cycle);
    // coefficient j >= cycle of the product comes from a[sa..] and b[sb..]
    let (sa, sb) = (cycle + 1 - lb, cycle + 1 - la);
    let tail = field_conv(k, &a[sa..], &b[sb..]);
    for j in cycle..lin.min(cycle + len) {
        let c = tail[j - sa - sb];
        let slot = &mut out[j - cycle];
        *slot = k.sub(*slot, c);
    }
    out
}

/// Inverse of a dense unit `x` (with `x[0]^{-1} = c0inv`) to `x.len()` coefficients.
///
/// Newton iteration `y <- y + y (1 - x y)` doubles the known length each round.
fn dense_inverse(k: &Field, x: &[u32], c0inv: u32) -> Vec<u32> {
    let n = x.len();
    let mut sizes = vec![n];
    while *sizes.last().unwrap() > 1 {
        let last = *sizes.last().unwrap();
        sizes.push(last.div_ceil(2));
    }
    let mut y = vec![c0inv];
    for &len in sizes.iter().rev().skip(1) {
        let h = y.len();
        // x y = 1 below h, so wrapped terms only land below h
        let xy = field_conv_cyclic(k, &x[..len], &y, len, len);
        let e: Vec<u32> = xy[h..].iter().map(|&c| k.neg(c)).collect();
        let corr = mul_trunc(k, &y[..len - h], &e, len - h);
        y.extend(corr);
    }
    y
}

impl LaurentSeries {
    /// The exact zero series.
    pub fn zero(field: &Field) -> Self {
        LaurentSeries {
            field: field.clone(),
            terms: Vec::new(),
            prec: None,
        }
    }

    /// The exact constant 1.
    pub fn one(field: &Field) -> Self {
        Self::monomial(field, 1, 0)
    }

    /// The exact monomial `c v^e`.
    pub fn monomial(field: &Field, c: u32, e: i64) -> Self {
        let terms = if c == 0 { Vec::new() } else { vec![(e, c)] };
        LaurentSeries {
            field: field.clone(),
            terms,
            prec: None,
        }
    }

    /// Builds a series from `(exponent, code)` pairs; repeated exponents are summed.
    pub fn from_terms(field: &Field, terms: &[(i64, u32)], prec: Option<i64>) -> Self {
        let mut v: Vec<(i64, u32)> = terms.to_vec();
        v.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(i64, u32)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = field.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|&(e, c)| c != 0 && prec.is_none_or(|p| e <= p));
        LaurentSeries {
            field: field.clone(),
            terms: out,
            prec,
        }
    }

    /// An inexact zero: all coefficients up to `prec` vanish.
    pub fn big_o(field: &Field, prec: i64) -> Self {
        LaurentSeries {
            field: field.clone(),
            terms: Vec::new(),
            prec: Some(prec),
        }
    }

    fn from_sorted(field: &Field, terms: Vec<(i64, u32)>, prec: Option<i64>) -> Self {
        LaurentSeries {
            field: field.clone(),
            terms,
            prec,
        }
    }

    /// Field of coefficients.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> &[(i64, u32)] {
        &self.terms
    }

    /// Absolute precision; `None` for an exact series.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    /// True when no truncation has happened.
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True for the exact zero series.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// True when no nonzero coefficient is known (exact or inexact zero).
    pub fn known_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation; `None` stands for `+infinity` (zero) or for an inexact zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    /// Lower bound on the valuation: the valuation, or `prec + 1` for an inexact zero.
    pub fn valuation_bound(&self) -> Option<i64> {
        match (self.valuation(), self.prec) {
            (Some(v), _) => Some(v),
            (None, Some(p)) => Some(p + 1),
            (None, None) => None,
        }
    }

    /// Largest exponent with a nonzero known coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    /// Coefficient of `v^e`, or `None` when `e` lies beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<u32> {
        if self.prec.is_some_and(|p| e > p) {
            return None;
        }
        Some(
            self.terms
                .binary_search_by_key(&e, |t| t.0)
                .map(|i| self.terms[i].1)
                .unwrap_or(0),
        )
    }

    /// Leading term `(exponent, coefficient)`.
    pub fn lowest_term(&self) -> Result<(i64, u32), LaurentError> {
        match self.terms.first() {
            Some(&t) => Ok(t),
            None if self.prec.is_some() => Err(LaurentError::PrecisionExhausted),
            None => Err(LaurentError::ZeroSeries),
        }
    }

    /// Drops every term above `prec` and records the new bound.
    pub fn truncate(&self, prec: i64) -> Self {
        let p = min_prec(self.prec, Some(prec));
        let terms = self.terms.iter().copied().filter(|t| t.0 <= prec).collect();
        Self::from_sorted(&self.field, terms, p)
    }

    fn check_field(&self, other: &Self) -> Result<(), LaurentError> {
        if std::sync::Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(LaurentError::FieldMismatch)
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other, false))
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let k = &self.field;
        let prec = min_prec(self.prec, other.prec);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let cb = |c: u32| if negate { k.neg(c) } else { c };
        while i < a.len() || j < b.len() {
            let (e, c) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                a[i - 1]
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, cb(b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, k.add(a[i - 1].1, cb(b[j - 1].1)))
            };
            if c != 0 && prec.is_none_or(|p| e <= p) {
                out.push((e, c));
            }
        }
        Self::from_sorted(k, out, prec)
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| (e, self.field.neg(c)))
            .collect();
        Self::from_sorted(&self.field, terms, self.prec)
    }

    /// Multiplication by a field element.
    pub fn scale(&self, c: u32) -> Self {
        if c == 0 {
            return Self::zero(&self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|&(e, x)| (e, self.field.mul(x, c)))
            .collect();
        Self::from_sorted(&self.field, terms, self.prec)
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|&(e, c)| (e + k, c)).collect();
        Self::from_sorted(&self.field, terms, self.prec.map(|p| p + k))
    }

    /// Product. The precision of `x y` is `min(prec x + val y, prec y + val x)`.
    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Precision of `self * other`; `None` when the product is exact.
    pub fn product_prec(&self, other: &Self) -> Option<i64> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        match (self.prec, other.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa + other.valuation_bound().unwrap()),
            (None, Some(pb)) => Some(pb + self.valuation_bound().unwrap()),
            (Some(pa), Some(pb)) => Some(
                (pa + other.valuation_bound().unwrap()).min(pb + self.valuation_bound().unwrap()),
            ),
        }
    }

    /// Product truncated at `cap`; equal to `self.mul(other)?.truncate(cap)`.
    pub fn mul_capped(&self, other: &Self, cap: Option<i64>) -> Result<Self, LaurentError> {
        self.check_field(other)?;
        Ok(self.mul_inner(other, cap))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        self.mul_inner(other, None)
    }

    fn mul_inner(&self, other: &Self, cap: Option<i64>) -> Self {
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(k);
        }
        let prec = min_prec(self.product_prec(other), cap);
        let (a, b) = (&self.terms, &other.terms);
        if a.is_empty() || b.is_empty() {
            return Self::from_sorted(k, Vec::new(), prec);
        }
        let lo = a[0].0 + b[0].0;
        let mut hi = a[a.len() - 1].0 + b[b.len() - 1].0;
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        if hi < lo {
            return Self::from_sorted(k, Vec::new(), prec);
        }
        // only terms that can reach the window matter
        let na = a.partition_point(|t| t.0 - a[0].0 <= hi - lo);
        let nb = b.partition_point(|t| t.0 - b[0].0 <= hi - lo);
        let (a, b) = (&a[..na], &b[..nb]);
        let span = (hi - lo + 1) as u128;
        let pairs = a.len() as u128 * b.len() as u128;
        let (sa, sb) = (a[a.len() - 1].0 - a[0].0 + 1, b[b.len() - 1].0 - b[0].0 + 1);
        let size = ((hi - lo + 1) as u128).next_power_of_two();
        let dense_cost = 5 * size * (size.trailing_zeros() as u128 + 1);
        if na.min(nb) >= KARATSUBA_MIN
            && (((a.len() as i64) * 4 >= sa && (b.len() as i64) * 4 >= sb)
                || (na * nb) as u128 > dense_cost)
        {
            let da = dense(a, (hi - lo + 1).min(sa));
            let db = dense(b, (hi - lo + 1).min(sb));
            let terms = mul_trunc(k, &da, &db, (hi - lo + 1) as usize)
                .into_iter()
                .enumerate()
                .filter(|t| t.1 != 0)
                .map(|(i, c)| (lo + i as i64, c))
                .collect();
            return Self::from_sorted(k, terms, prec);
        }
        if pairs >= 1 << 12 {
            if let Some(terms) =
                strided_product(k, a, b, lo, hi).or_else(|| strided_product(k, b, a, lo, hi))
            {
                return Self::from_sorted(k, terms, prec);
            }
        }
        if span <= 4 * pairs + 64 && span <= 1 << 24 {
            let mut buf = vec![0u32; span as usize];
            for &(ea, ca) in a {
                for &(eb, cb) in b {
                    let e = ea + eb;
                    if e > hi {
                        break;
                    }
                    let slot = &mut buf[(e - lo) as usize];
                    *slot = k.add(*slot, k.mul(ca, cb));
                }
            }
            let terms = buf
                .into_iter()
                .enumerate()
                .filter(|t| t.1 != 0)
                .map(|(i, c)| (lo + i as i64, c))
                .collect();
            Self::from_sorted(k, terms, prec)
        } else {
            let mut raw = Vec::with_capacity(a.len() * b.len());
            for &(ea, ca) in a {
                for &(eb, cb) in b {
                    let e = ea + eb;
                    if e > hi {
                        break;
                    }
                    raw.push((e, k.mul(ca, cb)));
                }
            }
            Self::from_terms(k, &raw, prec)
        }
    }

    /// Multiplicative inverse computed to `window` coefficients past the valuation.
    ///
    /// Exact monomials invert exactly. Otherwise the relative precision of the
    /// result is the smaller of `window` and the relative precision of `self`.
    pub fn inv(&self, window: i64) -> Result<Self, LaurentError> {
        let k = &self.field;
        let (v, c0) = match self.terms.first() {
            Some(&t) => t,
            None if self.prec.is_some() => return Err(LaurentError::PrecisionExhausted),
            None => return Err(LaurentError::InverseOfZero),
        };
        let c0inv = k.inv(c0)?;
        if self.terms.len() == 1 && self.prec.is_none() {
            return Ok(Self::monomial(k, c0inv, -v));
        }
        let rel = match self.prec {
            None => window,
            Some(p) => window.min(p - v),
        };
        if rel < 0 {
            return Err(LaurentError::PrecisionExhausted);
        }
        let n = rel as usize + 1;
        let tail: Vec<(usize, u32)> = self.terms[1..]
            .iter()
            .map(|&(e, c)| ((e - v) as usize, c))
            .take_while(|t| t.0 < n)
            .collect();
        let y = if tail.len() <= SPARSE_INVERSE_MAX {
            // y_i = -c0^{-1} sum_j x_j y_{i-j}
            let mut y = vec![0u32; n];
            y[0] = c0inv;
            let scale = k.neg(c0inv);
            for i in 1..n {
                let mut acc = 0;
                for &(j, c) in tail.iter().take_while(|t| t.0 <= i) {
                    acc = k.add(acc, k.mul(c, y[i - j]));
                }
                y[i] = k.mul(scale, acc);
            }
            y
        } else {
            dense_inverse(k, &dense(&self.terms, n as i64), c0inv)
        };
        let terms = y
            .into_iter()
            .enumerate()
            .filter(|t| t.1 != 0)
            .map(|(i, c)| (i as i64 - v, c))
            .collect();
        Ok(Self::from_sorted(k, terms, Some(rel - v)))
    }

    /// Quotient `self / other`, exact when `other` is an exact monomial.
    pub fn div(&self, other: &Self, window: i64) -> Result<Self, LaurentError> {
        self.check_field(other)?;
        let inv = other.inv(window)?;
        Ok(self.mul_unchecked(&inv))
    }

    /// Substitution `v -> v^{p^i}`; coefficients are left unchanged.
    pub fn phi_sub(&self, i: u32) -> Self {
        let scale = (self.field.p() as i64).pow(i);
        let terms = self.terms.iter().map(|&(e, c)| (e * scale, c)).collect();
        Self::from_sorted(&self.field, terms, self.prec.map(|p| scale * (p + 1) - 1))
    }

    /// True when both series agree on every coefficient known to both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let bound = min_prec(self.prec, other.prec);
        let pick = |s: &Self| -> Vec<(i64, u32)> {
            s.terms
                .iter()
                .copied()
                .filter(|t| bound.is_none_or(|b| t.0 <= b))
                .collect()
        };
        *self.field == *other.field && pick(self) == pick(other)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = match self.field.dlog(c) {
                Ok(0) => String::new(),
                Ok(k) => format!("g^{k}*"),
                Err(_) => "0*".to_string(),
            };
            write!(f, "{coef}v^{e}")?;
        }
        if let Some(p) = self.prec {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(v^{})", p + 1)?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A series over the dual numbers: `body + eps * tangent`, with `eps^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSeries {
    pub body: LaurentSeries,
    pub tangent: LaurentSeries,
}

impl DualSeries {
    /// Pairs a body with a tangent part.
    pub fn new(body: LaurentSeries, tangent: LaurentSeries) -> Result<Self, LaurentError> {
        body.check_field(&tangent)?;
        Ok(DualSeries { body, tangent })
    }

    /// A series with zero tangent part.
    pub fn constant(body: LaurentSeries) -> Self {
        let tangent = LaurentSeries::zero(body.field());
        DualSeries { body, tangent }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        Ok(DualSeries {
            body: self.body.add(&other.body)?,
            tangent: self.tangent.add(&other.tangent)?,
        })
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        Ok(DualSeries {
            body: self.body.sub(&other.body)?,
            tangent: self.tangent.sub(&other.tangent)?,
        })
    }

    /// Product `(a + eps b)(c + eps d) = ac + eps (ad + bc)`.
    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        Ok(DualSeries {
            body: self.body.mul(&other.body)?,
            tangent: self
                .body
                .mul(&other.tangent)?
                .add(&self.tangent.mul(&other.body)?)?,
        })
    }

    /// Inverse `(a + eps b)^{-1} = a^{-1} - eps b a^{-2}`.
    pub fn inv(&self, window: i64) -> Result<Self, LaurentError> {
        let ai = self.body.inv(window)?;
        let t = self.tangent.mul(&ai)?.mul(&ai)?.neg();
        Ok(DualSeries {
            body: ai,
            tangent: t,
        })
    }

    /// Substitution `v -> v^{p^i}` on both components.
    pub fn phi_sub(&self, i: u32) -> Self {
        DualSeries {
            body: self.body.phi_sub(i),
            tangent: self.tangent.phi_sub(i),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;

    fn k5() -> Field {
        GaloisField::new(5, 1).unwrap()
    }

    #[test]
    fn product_of_binomials() {
        let k = k5();
        let a = LaurentSeries::from_terms(&k, &[(0, 1), (1, 1)], None);
        let b = LaurentSeries::from_terms(&k, &[(0, 1), (1, 4)], None);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, LaurentSeries::from_terms(&k, &[(0, 1), (2, 4)], None));
    }

    #[test]
    fn inverse_of_v_is_exact() {
        let k = k5();
        let v = LaurentSeries::monomial(&k, 1, 1);
        assert_eq!(v.inv(10).unwrap(), LaurentSeries::monomial(&k, 1, -1));
    }

    #[test]
    fn geometric_series() {
        let k = k5();
        let x = LaurentSeries::from_terms(&k, &[(0, 1), (1, 4)], None);
        let y = x.inv(6).unwrap();
        let expect: Vec<(i64, u32)> = (0..=6).map(|e| (e, 1)).collect();
        assert_eq!(y.terms(), &expect[..]);
        assert_eq!(y.prec(), Some(6));
        let one = x.mul(&y).unwrap();
        assert!(one.agrees_with(&LaurentSeries::one(&k)));
    }

    #[test]
    fn valuations() {
        let k = k5();
        let x = LaurentSeries::from_terms(&k, &[(-3, 1), (1, 1)], None);
        assert_eq!(x.valuation(), Some(-3));
        assert_eq!(LaurentSeries::zero(&k).valuation(), None);
    }

    #[test]
    fn phi_sub_examples() {
        let k = k5();
        let x = LaurentSeries::monomial(&k, 1, -3);
        assert_eq!(x.phi_sub(2), LaurentSeries::monomial(&k, 1, -75));
        let c = LaurentSeries::monomial(&k, 3, 0);
        assert_eq!(c.phi_sub(3), c);
        let t = LaurentSeries::big_o(&k, 2);
        assert_eq!(t.phi_sub(1).prec(), Some(14));
    }

    #[test]
    fn lowest_terms() {
        let k = k5();
        let x = LaurentSeries::from_terms(&k, &[(2, 3), (5, 1)], None);
        assert_eq!(x.lowest_term().unwrap(), (2, 3));
        assert_eq!(
            LaurentSeries::zero(&k).lowest_term(),
            Err(LaurentError::ZeroSeries)
        );
        assert_eq!(
            LaurentSeries::big_o(&k, 4).lowest_term(),
            Err(LaurentError::PrecisionExhausted)
        );
    }

    #[test]
    fn inverse_errors() {
        let k = k5();
        assert_eq!(
            LaurentSeries::zero(&k).inv(4),
            Err(LaurentError::InverseOfZero)
        );
        assert_eq!(
            LaurentSeries::big_o(&k, 4).inv(4),
            Err(LaurentError::PrecisionExhausted)
        );
    }

    #[test]
    fn precision_of_products() {
        let k = k5();
        let x = LaurentSeries::from_terms(&k, &[(1, 1), (2, 1)], Some(5));
        let y = LaurentSeries::from_terms(&k, &[(-2, 1)], None);
        assert_eq!(x.mul(&y).unwrap().prec(), Some(3));
        let z = LaurentSeries::from_terms(&k, &[(0, 2)], Some(3));
        assert_eq!(x.mul(&z).unwrap().prec(), Some(4));
    }

    #[test]
    fn dual_product_drops_eps_squared() {
        let k = k5();
        let a = DualSeries::new(
            LaurentSeries::monomial(&k, 1, 1),
            LaurentSeries::monomial(&k, 2, 0),
        )
        .unwrap();
        let b = DualSeries::new(
            LaurentSeries::monomial(&k, 3, 0),
            LaurentSeries::monomial(&k, 1, 2),
        )
        .unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.body, LaurentSeries::monomial(&k, 3, 1));
        assert_eq!(
            c.tangent,
            LaurentSeries::from_terms(&k, &[(0, 1), (3, 1)], None)
        );
    }
}
