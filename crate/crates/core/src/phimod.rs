//! Rank-2 etale phi-modules over `k((v))` and over `k[eps]((v))`.
//!
//! Frobenius matrices act semilinearly: a change of basis `P` sends `B` to
//! `P^{-1} B phi(P)`, where `phi` raises `v` to the `q = p^f`-th power and
//! fixes coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engeance::{Engeance, Genre};
use crate::gf::Field;
use crate::laurent::{DualSeries, LaurentError, LaurentSeries};
use crate::weights::{q_of, TameType};

/// Errors raised by the phi-module engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhiModError {
    #[error(transparent)]
    Series(#[from] LaurentError),
    #[error("residual representation is reducible")]
    ReducibleInput,
    #[error("companion reduction did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("genre sequence has length {got}, expected f = {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("companion data disagrees with the twisted determinant")]
    CrossCheckFailed,
}

/// Coefficient rings for Frobenius matrices.
pub trait SeriesLike: Clone + fmt::Debug + PartialEq {
    /// Lifts an ordinary series.
    fn from_body(x: LaurentSeries) -> Self;
    /// The underlying series over `k`.
    fn body(&self) -> &LaurentSeries;
    /// Sum.
    fn add(&self, other: &Self) -> Result<Self, LaurentError>;
    /// Difference.
    fn sub(&self, other: &Self) -> Result<Self, LaurentError>;
    /// Product.
    fn mul(&self, other: &Self) -> Result<Self, LaurentError>;
    /// Substitution `v -> v^{p^i}`.
    fn phi_sub(&self, i: u32) -> Self;
    /// Multiplication by `v^k`.
    fn shift(&self, k: i64) -> Self;
    /// Multiplication by a field element.
    fn scale(&self, c: u32) -> Self;
    /// The combination `a b + c d`.
    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, LaurentError> {
        a.mul(b)?.add(&c.mul(d)?)
    }
    /// The combination `a b - c d`.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, LaurentError> {
        a.mul(b)?.sub(&c.mul(d)?)
    }
    /// Field of coefficients.
    fn field(&self) -> &Field {
        self.body().field()
    }
}

impl SeriesLike for LaurentSeries {
    fn from_body(x: LaurentSeries) -> Self {
        x
    }
    fn body(&self) -> &LaurentSeries {
        self
    }
    fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        LaurentSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        LaurentSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        LaurentSeries::mul(self, other)
    }
    fn phi_sub(&self, i: u32) -> Self {
        LaurentSeries::phi_sub(self, i)
    }
    fn shift(&self, k: i64) -> Self {
        LaurentSeries::shift(self, k)
    }
    fn scale(&self, c: u32) -> Self {
        LaurentSeries::scale(self, c)
    }
    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, LaurentError> {
        let cap = capped_prec(a, b, c, d);
        a.mul_capped(b, cap)?.add(&c.mul_capped(d, cap)?)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, LaurentError> {
        let cap = capped_prec(a, b, c, d);
        a.mul_capped(b, cap)?.sub(&c.mul_capped(d, cap)?)
    }
}

/// Precision of `a b +- c d`, so that neither product is computed beyond it.
fn capped_prec(
    a: &LaurentSeries,
    b: &LaurentSeries,
    c: &LaurentSeries,
    d: &LaurentSeries,
) -> Option<i64> {
    match (a.product_prec(b), c.product_prec(d)) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl SeriesLike for DualSeries {
    fn from_body(x: LaurentSeries) -> Self {
        DualSeries::constant(x)
    }
    fn body(&self) -> &LaurentSeries {
        &self.body
    }
    fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        DualSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        DualSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        DualSeries::mul(self, other)
    }
    fn phi_sub(&self, i: u32) -> Self {
        DualSeries::phi_sub(self, i)
    }
    fn shift(&self, k: i64) -> Self {
        DualSeries {
            body: self.body.shift(k),
            tangent: self.tangent.shift(k),
        }
    }
    fn scale(&self, c: u32) -> Self {
        DualSeries {
            body: self.body.scale(c),
            tangent: self.tangent.scale(c),
        }
    }
}

/// A 2x2 matrix with entries in a series ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T> {
    pub e: [[T; 2]; 2],
}

/// Frobenius matrix over `k((v))`.
pub type FrobMatrix = Mat2<LaurentSeries>;
/// Frobenius matrix over `k[eps]((v))`.
pub type DualMatrix = Mat2<DualSeries>;

impl<T: SeriesLike> Mat2<T> {
    /// Builds a matrix from its rows.
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 {
            e: [[a, b], [c, d]],
        }
    }

    /// The identity matrix.
    pub fn identity(field: &Field) -> Self {
        let one = T::from_body(LaurentSeries::one(field));
        let zero = T::from_body(LaurentSeries::zero(field));
        Mat2::new(one.clone(), zero.clone(), zero, one)
    }

    /// Matrix product.
    pub fn mul(&self, o: &Self) -> Result<Self, LaurentError> {
        let m = |i: usize, j: usize| -> Result<T, LaurentError> {
            T::mul_add(&self.e[i][0], &o.e[0][j], &self.e[i][1], &o.e[1][j])
        };
        Ok(Mat2::new(m(0, 0)?, m(0, 1)?, m(1, 0)?, m(1, 1)?))
    }

    /// Entrywise substitution `v -> v^{p^i}`.
    pub fn phi_sub(&self, i: u32) -> Self {
        let f = |x: &T| x.phi_sub(i);
        Mat2::new(
            f(&self.e[0][0]),
            f(&self.e[0][1]),
            f(&self.e[1][0]),
            f(&self.e[1][1]),
        )
    }

    /// Left multiplication by `diag(x, y)`.
    pub fn scale_rows(&self, x: &T, y: &T) -> Result<Self, LaurentError> {
        Ok(Mat2::new(
            x.mul(&self.e[0][0])?,
            x.mul(&self.e[0][1])?,
            y.mul(&self.e[1][0])?,
            y.mul(&self.e[1][1])?,
        ))
    }

    /// Multiplication of every entry by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        let f = |x: &T| x.shift(k);
        Mat2::new(
            f(&self.e[0][0]),
            f(&self.e[0][1]),
            f(&self.e[1][0]),
            f(&self.e[1][1]),
        )
    }

    /// Determinant.
    pub fn det(&self) -> Result<T, LaurentError> {
        T::mul_sub(&self.e[0][0], &self.e[1][1], &self.e[0][1], &self.e[1][0])
    }

    /// The body matrix over `k((v))`.
    pub fn body(&self) -> FrobMatrix {
        let f = |x: &T| x.body().clone();
        Mat2::new(
            f(&self.e[0][0]),
            f(&self.e[0][1]),
            f(&self.e[1][0]),
            f(&self.e[1][1]),
        )
    }
}

impl FrobMatrix {
    /// Inverse, computed with the given relative window for the determinant.
    pub fn inverse(&self, window: i64) -> Result<Self, LaurentError> {
        let di = self.det()?.inv(window)?;
        let [[a, b], [c, d]] = &self.e;
        Ok(Mat2::new(
            d.mul(&di)?,
            b.neg().mul(&di)?,
            c.neg().mul(&di)?,
            a.mul(&di)?,
        ))
    }

    /// Basis change `P^{-1} B phi^f(P)`.
    pub fn change_basis(&self, p: &Self, p_inv: &Self, f: u32) -> Result<Self, LaurentError> {
        p_inv.mul(self)?.mul(&p.phi_sub(f))
    }

    /// True when every entry agrees with `other` on the common known range.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.e[i][j].agrees_with(&other.e[i][j])))
    }
}

impl DualMatrix {
    /// Pairs a body matrix with a tangent matrix.
    pub fn from_parts(body: &FrobMatrix, tangent: &FrobMatrix) -> Self {
        let f = |i: usize, j: usize| DualSeries {
            body: body.e[i][j].clone(),
            tangent: tangent.e[i][j].clone(),
        };
        Mat2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    /// The tangent matrix.
    pub fn tangent(&self) -> FrobMatrix {
        let f = |x: &DualSeries| x.tangent.clone();
        Mat2::new(
            f(&self.e[0][0]),
            f(&self.e[0][1]),
            f(&self.e[1][0]),
            f(&self.e[1][1]),
        )
    }
}

/// Frobenius factors of a Breuil-Kisin module with the given genres and parameters.
///
/// Parameters are supplied as ring elements so that tangent directions can be
/// carried by dual numbers; `a[i]` is used for genres `I_eta` and `II`, `a_p[i]`
/// for genres `I_eta'` and `II`.
pub fn genre_factors<T: SeriesLike>(
    field: &Field,
    genres: &[Genre],
    a: &[T],
    a_p: &[T],
    alpha: &T,
    alpha_p: &T,
    t: &TameType,
) -> Result<Vec<Mat2<T>>, PhiModError> {
    let f = t.f as usize;
    if genres.len() != f || a.len() != f || a_p.len() != f {
        return Err(PhiModError::LengthMismatch {
            got: genres.len(),
            want: f,
        });
    }
    let p = t.p as i64;
    let d = t.d();
    let b = t.b();
    let mono = |e: i64| T::from_body(LaurentSeries::monomial(field, 1, e));
    let zero = T::from_body(LaurentSeries::zero(field));
    let mut out = Vec::with_capacity(f);
    for i in 0..f {
        let di = d[i] as i64;
        let m = match genres[i] {
            Genre::IEta => Mat2::new(
                mono(di + 1),
                zero.clone(),
                a[i].mul(&mono(di))?,
                mono(p - 1),
            ),
            Genre::IEtaP => Mat2::new(mono(di), a_p[i].mul(&mono(p))?, zero.clone(), mono(p)),
            Genre::II => Mat2::new(
                a[i].mul(&mono(di))?,
                mono(p),
                mono(di),
                a_p[i].mul(&mono(p - 1))?,
            ),
        };
        let m = m.shift(-(b[f - 1 - i] as i64));
        out.push(if i == f - 1 {
            m.scale_rows(alpha, alpha_p)?
        } else {
            m
        });
    }
    Ok(out)
}

/// Residual Frobenius factors of an engeance.
pub fn genre_matrices(e: &Engeance, t: &TameType) -> Result<Vec<FrobMatrix>, PhiModError> {
    let k = e.field();
    let c = |x: u32| LaurentSeries::monomial(k, x, 0);
    let a: Vec<LaurentSeries> = e.a.iter().map(|&x| c(x)).collect();
    let a_p: Vec<LaurentSeries> = e.a_p.iter().map(|&x| c(x)).collect();
    genre_factors(k, &e.genres, &a, &a_p, &c(e.alpha), &c(e.alpha_p), t)
}

/// `B = B^{(f-1)} phi(B^{(f-2)}) ... phi^{f-1}(B^{(0)})`.
pub fn product_frobenius<T: SeriesLike>(mats: &[Mat2<T>]) -> Result<Mat2<T>, PhiModError> {
    let f = mats.len();
    let mut acc = mats[f - 1].clone();
    for (j, m) in mats.iter().rev().enumerate().skip(1) {
        acc = acc.mul(&m.phi_sub(j as u32))?;
    }
    Ok(acc)
}

/// Twisted trace `T = phi(a) + d phi(c)/c` and determinant `Delta = (phi(c)/c)(ad - bc)`.
pub fn twisted_invariants(
    b: &FrobMatrix,
    f: u32,
    window: i64,
) -> Result<(LaurentSeries, LaurentSeries), PhiModError> {
    let [[a, _], [c, d]] = &b.e;
    let k = a.field();
    let phi_a = a.phi_sub(f);
    if c.known_zero() {
        return Ok((phi_a, LaurentSeries::zero(k)));
    }
    let ratio = c.phi_sub(f).div(c, window)?;
    let t = phi_a.add(&d.mul(&ratio)?)?;
    let delta = ratio.mul(&b.det()?)?;
    Ok((t, delta))
}

/// Canonical residual class `(h, delta)` modulo the conjugation `h ~ q h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RepClass {
    pub p: u32,
    pub f: u32,
    /// Canonical exponent `min(h, q h)` modulo `q^2 - 1`.
    pub h: u64,
    /// Discrete logarithm of `delta` in the coefficient field.
    pub delta: u64,
}

impl RepClass {
    /// Builds the canonical class from a raw exponent and a discrete logarithm.
    pub fn canonical(p: u32, f: u32, h: i64, delta: u64) -> Self {
        let q = q_of(p, f);
        let n = q * q - 1;
        let h1 = h.rem_euclid(n as i64) as u64;
        let h2 = (h1 * q) % n;
        RepClass {
            p,
            f,
            h: h1.min(h2),
            delta,
        }
    }

    /// The class obtained from the conjugate exponent.
    pub fn conjugate(&self) -> Self {
        let q = q_of(self.p, self.f);
        RepClass::canonical(
            self.p,
            self.f,
            ((self.h * q) % (q * q - 1)) as i64,
            self.delta,
        )
    }
}

/// Irreducible residual data read off the twisted determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    /// Raw exponent: valuation of `Delta`.
    pub h: i64,
    /// Code of `delta`, where `-delta` is the leading coefficient of `Delta`.
    pub delta: u32,
    pub class: RepClass,
}

/// Decides irreducibility from division-free valuations.
///
/// Returns `None` when the residual representation is reducible.
pub fn residual_class(b: &FrobMatrix, f: u32) -> Result<Option<Residual>, PhiModError> {
    let [[a, _], [c, d]] = &b.e;
    let k = a.field().clone();
    let p = k.p();
    let q = q_of(p, f) as i64;
    let (vc, _) = match c.lowest_term() {
        Ok(t) => t,
        Err(LaurentError::ZeroSeries) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let det = b.det()?;
    let (vdet, ldet) = match det.lowest_term() {
        Ok(t) => t,
        Err(LaurentError::ZeroSeries) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    // phi(c)/c has leading coefficient 1 and valuation (q - 1) val(c)
    let h = (q - 1) * vc + vdet;
    if h.rem_euclid(q + 1) == 0 {
        return Ok(None);
    }
    let num = a.phi_sub(f).mul(c)?.add(&d.mul(&c.phi_sub(f))?)?;
    match num.lowest_term() {
        Ok((vn, _)) => {
            let vt = vn - vc;
            if (q + 1) * vt <= q * h {
                return Ok(None);
            }
        }
        Err(LaurentError::ZeroSeries) => {}
        Err(e) => return Err(e.into()),
    }
    let delta = k.neg(ldet);
    let class = RepClass::canonical(p, f, h, k.dlog(delta).map_err(LaurentError::from)? as u64);
    Ok(Some(Residual { h, delta, class }))
}

/// Result of reducing a Frobenius matrix to companion form.
#[derive(Clone, Debug)]
pub struct Companion {
    /// Basis change with `P^{-1} B phi(P) = (0, delta v^h; 1, 0)`.
    pub p: FrobMatrix,
    /// Inverse of `p`.
    pub p_inv: FrobMatrix,
    pub h: i64,
    /// Code of `delta`.
    pub delta: u32,
}

impl Companion {
    /// The standard matrix `(0, delta v^h; 1, 0)`.
    pub fn standard(&self, field: &Field) -> FrobMatrix {
        Mat2::new(
            LaurentSeries::zero(field),
            LaurentSeries::monomial(field, self.delta, self.h),
            LaurentSeries::one(field),
            LaurentSeries::zero(field),
        )
    }

    /// Tangent part `P^{-1} A phi(P)` of a dual matrix whose body was reduced.
    pub fn transport(&self, a: &FrobMatrix, f: u32) -> Result<FrobMatrix, PhiModError> {
        Ok(a.change_basis(&self.p, &self.p_inv, f)?)
    }
}

const MAX_STEPS: usize = 64;

/// Reduces an irreducible Frobenius matrix to the form `(0, delta v^h; 1, 0)`.
///
/// `window` bounds the relative precision of every inverted series.
pub fn companion_reduce(b: &FrobMatrix, f: u32, window: i64) -> Result<Companion, PhiModError> {
    let res = residual_class(b, f)?.ok_or(PhiModError::ReducibleInput)?;
    let k = b.e[0][0].field().clone();
    let one = LaurentSeries::one(&k);
    let zero = LaurentSeries::zero(&k);
    let [[a, bb], [c, d]] = &b.e;

    // (a, b phi(c); 1, d phi(c)/c)
    let phi_c = c.phi_sub(f);
    let c_inv = c.inv(window)?;
    let p1 = Mat2::new(one.clone(), zero.clone(), zero.clone(), c.clone());
    let b12 = bb.mul(&phi_c)?;
    let b22 = d.mul(&phi_c)?.mul(&c_inv)?;
    // (0, b12 - a b22; 1, phi(a) + b22)
    let p2 = Mat2::new(one.clone(), a.clone(), zero.clone(), one.clone());
    let mut beta = b12.sub(&a.mul(&b22)?)?;
    let mut tau = a.phi_sub(f).add(&b22)?;
    let mut p_total = p1.mul(&p2)?;

    let vb = beta.lowest_term()?.0;
    let mut beta_inv: Option<LaurentSeries> = None;
    let mut last_gap: Option<i64> = None;
    let q = q_of(k.p(), f) as i64;
    let mut steps = 0;
    while !tau.known_zero() {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(PhiModError::NoConvergence(MAX_STEPS));
        }
        let vt = tau.lowest_term()?.0;
        let gap = (q + 1) * vt - q * vb;
        if gap <= 0 || last_gap.is_some_and(|g| gap <= g) {
            return Err(PhiModError::NoConvergence(steps));
        }
        last_gap = Some(gap);
        let vm = vt - vb;
        if vm > window {
            // the remaining factors are I + O(v^e); record that precision in P
            let e = vm.min(q * vm + vb).min(q * vm + vt);
            let err = LaurentSeries::big_o(&k, e - 1);
            let near_one = one.add(&err)?;
            p_total = p_total.mul(&Mat2::new(near_one.clone(), err.clone(), err, near_one))?;
            break;
        }
        let bi = match &beta_inv {
            Some(x) => x.clone(),
            None => beta.inv(window)?,
        };
        let mu = tau.mul(&bi)?;
        let phi_mu = mu.phi_sub(f);
        let p12 = phi_mu.mul(&beta)?;
        let p22 = one.add(&phi_mu.mul(&tau)?)?;
        // tau - mu beta vanishes to the known precision, and det = 1 + phi(mu) (tau - mu beta)
        let resid = match (tau.prec(), mu.product_prec(&beta)) {
            (None, None) => zero.clone(),
            (x, None) | (None, x) => LaurentSeries::big_o(&k, x.expect("one side inexact")),
            (Some(x), Some(y)) => LaurentSeries::big_o(&k, x.min(y)),
        };
        let det = one.add(&phi_mu.mul(&resid)?)?;
        let det_inv = det.inv(window)?;
        let new_beta = beta.mul(&det.phi_sub(f))?.mul(&det_inv)?;
        beta_inv = Some(bi.mul(&det)?.mul(&det_inv.phi_sub(f))?);
        let new_tau = mu
            .phi_sub(2 * f)
            .mul(&beta.phi_sub(f))?
            .add(&p22.phi_sub(f).mul(&resid)?)?
            .mul(&det_inv)?;
        p_total = p_total.mul(&Mat2::new(one.clone(), p12, mu, p22))?;
        beta = new_beta;
        tau = new_tau;
    }

    // beta = delta v^h (1 + w); lambda = prod phi^{2k}(1 + w)
    let (h, lc) = beta.lowest_term()?;
    if h != res.h || lc != res.delta {
        return Err(PhiModError::CrossCheckFailed);
    }
    let unit = beta.mul(&LaurentSeries::monomial(
        &k,
        k.inv(lc).map_err(LaurentError::from)?,
        -h,
    ))?;
    let mut lambda = match unit.prec() {
        Some(_) => unit.clone(),
        None if unit == one => one.clone(),
        None => unit.truncate(window),
    };
    let bound = lambda.prec().unwrap_or(window);
    let mut term = lambda.clone();
    loop {
        term = term.phi_sub(2 * f);
        let w = term.sub(&one)?;
        match w.valuation() {
            Some(v) if v <= bound => lambda = lambda.mul(&term)?,
            _ => break,
        }
    }
    let p_last = Mat2::new(lambda.clone(), zero.clone(), zero, lambda.phi_sub(f));
    p_total = p_total.mul(&p_last)?;
    let p_inv = p_total.inverse(window)?;
    Ok(Companion {
        p: p_total,
        p_inv,
        h,
        delta: lc,
    })
}

/// True when the genre sequence is of the excluded kind for the type.
pub fn mauvais_genre_check(genres: &[Genre], t: &TameType) -> bool {
    let f = genres.len();
    if f != t.f as usize || genres.contains(&Genre::II) {
        return false;
    }
    let c = t.c();
    let p = t.p;
    (0..f).all(|i| {
        let prev = genres[(i + f - 1) % f];
        let want = match (prev, genres[i]) {
            (Genre::IEta, Genre::IEta) => 1,
            (Genre::IEta, Genre::IEtaP) => 0,
            (Genre::IEtaP, Genre::IEtaP) => p - 2,
            (Genre::IEtaP, Genre::IEta) => p - 1,
            _ => unreachable!("genre II excluded above"),
        };
        c[f - 1 - i] == want
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;

    fn std_matrix(k: &Field, delta: u32, h: i64) -> FrobMatrix {
        Mat2::new(
            LaurentSeries::zero(k),
            LaurentSeries::monomial(k, delta, h),
            LaurentSeries::one(k),
            LaurentSeries::zero(k),
        )
    }

    #[test]
    fn companion_invariants() {
        let k = GaloisField::new(5, 2).unwrap();
        let b = std_matrix(&k, 3, 7);
        let (t, d) = twisted_invariants(&b, 1, 100).unwrap();
        assert!(t.is_zero());
        assert_eq!(d, LaurentSeries::monomial(&k, k.neg(3), 7));
        let r = residual_class(&b, 1).unwrap().unwrap();
        assert_eq!((r.h, r.delta), (7, 3));
    }

    #[test]
    fn diagonal_is_reducible() {
        let k = GaloisField::new(5, 2).unwrap();
        let b = Mat2::new(
            LaurentSeries::monomial(&k, 1, 1),
            LaurentSeries::zero(&k),
            LaurentSeries::zero(&k),
            LaurentSeries::monomial(&k, 2, 3),
        );
        assert_eq!(residual_class(&b, 1).unwrap(), None);
        let (_, d) = twisted_invariants(&b, 1, 10).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn standard_input_is_fixed() {
        let k = GaloisField::new(5, 2).unwrap();
        let b = std_matrix(&k, 3, 7);
        let c = companion_reduce(&b, 1, 100).unwrap();
        assert_eq!(c.p, Mat2::identity(&k));
        assert_eq!((c.h, c.delta), (7, 3));
    }

    #[test]
    fn reduction_of_a_trace_term() {
        let k = GaloisField::new(5, 1).unwrap();
        let b = Mat2::new(
            LaurentSeries::monomial(&k, 1, 2),
            LaurentSeries::monomial(&k, 2, 1),
            LaurentSeries::from_terms(&k, &[(0, 1), (1, 3)], None),
            LaurentSeries::monomial(&k, 4, 3),
        );
        let r = residual_class(&b, 1).unwrap().unwrap();
        let c = companion_reduce(&b, 1, 100).unwrap();
        assert_eq!((c.h, c.delta), (r.h, r.delta));
        let out = b.change_basis(&c.p, &c.p_inv, 1).unwrap();
        assert!(out.agrees_with(&c.standard(&k)));
    }

    #[test]
    fn mauvais_examples() {
        let t = TameType::new(5, 2, 6, 0).unwrap();
        assert_eq!(t.c(), vec![1, 1]);
        assert!(mauvais_genre_check(&[Genre::IEta, Genre::IEta], &t));
        assert!(!mauvais_genre_check(&[Genre::IEta, Genre::II], &t));
        let t = TameType::new(5, 2, 12, 0).unwrap();
        assert!(!mauvais_genre_check(&[Genre::IEta, Genre::IEta], &t));
    }
}
