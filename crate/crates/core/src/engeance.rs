//! Points of Kisin varieties ("engeances") of rank-2 Breuil-Kisin modules.
//!
//! An engeance is a genre sequence together with residual parameters
//! `(a_i, a'_i, alpha, alpha')` taken modulo the scaling action of `k^x`.
//! Enumeration runs over every genre sequence and every canonical parameter
//! choice and keeps those whose residual class matches the target.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Field, GfError};
use crate::laurent::{LaurentError, LaurentSeries};
use crate::phimod::{
    genre_factors, product_frobenius, residual_class, FrobMatrix, PhiModError, RepClass,
};
use crate::weights::{q_of, RepSpec, TameType, WeightError};

/// Errors raised by engeance computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngeanceError {
    #[error("even number of genre II factors with all parameters zero")]
    NotNormalizable,
    #[error("determinant constraint violated")]
    DeterminantConstraint,
    #[error("no calibration available for f = {0}")]
    CalibrationMissing(u32),
    #[error("calibration failed: {0}")]
    CalibrationFailed(String),
    #[error("unrecognized Kisin variety shape: {0}")]
    UnrecognizedShape(String),
    #[error("field mismatch: expected GF({p}^{m})")]
    FieldMismatch { p: u32, m: u32 },
    #[error(transparent)]
    PhiMod(#[from] PhiModError),
    #[error("parameters incompatible with the genre sequence")]
    InvalidParameters,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Field(#[from] GfError),
}

impl From<LaurentError> for EngeanceError {
    fn from(e: LaurentError) -> Self {
        EngeanceError::PhiMod(e.into())
    }
}

/// Genre of a Frobenius factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Genre {
    #[serde(rename = "I_eta")]
    IEta,
    #[serde(rename = "I_eta'")]
    IEtaP,
    #[serde(rename = "II")]
    II,
}

impl Genre {
    /// All genres in a fixed order.
    pub const ALL: [Genre; 3] = [Genre::IEta, Genre::IEtaP, Genre::II];

    /// Short label.
    pub fn label(&self) -> &'static str {
        match self {
            Genre::IEta => "I_eta",
            Genre::IEtaP => "I_eta'",
            Genre::II => "II",
        }
    }

    /// Parses a label produced by [`Genre::label`].
    pub fn parse(s: &str) -> Option<Genre> {
        Genre::ALL.into_iter().find(|g| g.label() == s)
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// All `3^f` genre sequences in lexicographic order.
pub fn all_genre_sequences(f: usize) -> Vec<Vec<Genre>> {
    let mut out = vec![Vec::new()];
    for _ in 0..f {
        out = out
            .into_iter()
            .flat_map(|s| {
                Genre::ALL.into_iter().map(move |g| {
                    let mut t = s.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out
}

/// A genre sequence with residual parameters, stored as field codes.
#[derive(Clone, Debug)]
pub struct Engeance {
    field: Field,
    pub genres: Vec<Genre>,
    pub a: Vec<u32>,
    pub a_p: Vec<u32>,
    pub alpha: u32,
    pub alpha_p: u32,
}

impl PartialEq for Engeance {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.cmp_key() == other.cmp_key()
    }
}

impl Eq for Engeance {}

impl PartialOrd for Engeance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Engeance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl Engeance {
    /// Builds an engeance, checking the genre restrictions on parameters.
    pub fn new(
        field: &Field,
        genres: Vec<Genre>,
        a: Vec<u32>,
        a_p: Vec<u32>,
        alpha: u32,
        alpha_p: u32,
    ) -> Result<Self, EngeanceError> {
        let bad = genres
            .iter()
            .zip(a.iter().zip(&a_p))
            .any(|(g, (&x, &y))| match g {
                Genre::IEta => y != 0,
                Genre::IEtaP => x != 0,
                Genre::II => x != 0 || y != 0,
            });
        if bad || a.len() != genres.len() || a_p.len() != genres.len() || alpha == 0 || alpha_p == 0
        {
            return Err(EngeanceError::InvalidParameters);
        }
        Ok(Engeance {
            field: field.clone(),
            genres,
            a,
            a_p,
            alpha,
            alpha_p,
        })
    }

    /// Coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of genre II factors.
    pub fn count_ii(&self) -> usize {
        self.genres.iter().filter(|&&g| g == Genre::II).count()
    }

    /// The free parameter of each non-II factor, in index order.
    pub fn i_params(&self) -> Vec<u32> {
        self.genres
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match g {
                Genre::IEta => Some(self.a[i]),
                Genre::IEtaP => Some(self.a_p[i]),
                Genre::II => None,
            })
            .collect()
    }

    fn cmp_key(&self) -> (Vec<Genre>, Vec<u32>, Vec<u32>, u32, u32) {
        (
            self.genres.clone(),
            self.a.clone(),
            self.a_p.clone(),
            self.alpha,
            self.alpha_p,
        )
    }

    /// Field-convention-independent sort key: genres, then discrete logarithms (zero first).
    pub fn sort_key(&self) -> (Vec<Genre>, Vec<i64>) {
        let k = &self.field;
        let lg = |x: u32| k.dlog(x).map(|d| d as i64).unwrap_or(-1);
        let mut v: Vec<i64> = Vec::new();
        v.push(lg(self.alpha));
        v.push(lg(self.alpha_p));
        v.extend(self.a.iter().map(|&x| lg(x)));
        v.extend(self.a_p.iter().map(|&x| lg(x)));
        (self.genres.clone(), v)
    }

    /// True when `alpha alpha' = (-1)^{|II| + 1} / theta`.
    pub fn satisfies_determinant(&self, theta: u32) -> bool {
        let k = &self.field;
        match k.inv(theta) {
            Ok(ti) => k.mul(self.alpha, self.alpha_p) == sign_times(k, self.count_ii() + 1, ti),
            Err(_) => false,
        }
    }

    /// Applies the scaling by `lambda`: `a_i -> lambda^{s_i} a_i`, `a'_i -> lambda^{-s_i} a'_i`.
    pub fn rescale(&self, lambda: u32) -> Result<Self, EngeanceError> {
        let k = &self.field;
        let li = k.inv(lambda)?;
        let mut out = self.clone();
        let mut n = 0usize;
        for i in 0..self.genres.len() {
            let (up, down) = if n.is_multiple_of(2) {
                (lambda, li)
            } else {
                (li, lambda)
            };
            out.a[i] = k.mul(self.a[i], up);
            out.a_p[i] = k.mul(self.a_p[i], down);
            if self.genres[i] == Genre::II {
                n += 1;
            }
        }
        if n % 2 == 1 {
            out.alpha = k.mul(self.alpha, li);
            out.alpha_p = k.mul(self.alpha_p, lambda);
        }
        Ok(out)
    }

    /// The canonical representative of the scaling class.
    pub fn canonicalize(&self) -> Result<Self, EngeanceError> {
        let k = &self.field;
        if self.count_ii() % 2 == 1 {
            return self.rescale(self.alpha);
        }
        let mut n = 0usize;
        for i in 0..self.genres.len() {
            let sign_up = n.is_multiple_of(2);
            match self.genres[i] {
                Genre::IEta if self.a[i] != 0 => {
                    let l = if sign_up {
                        k.inv(self.a[i])?
                    } else {
                        self.a[i]
                    };
                    return self.rescale(l);
                }
                Genre::IEtaP if self.a_p[i] != 0 => {
                    let l = if sign_up {
                        self.a_p[i]
                    } else {
                        k.inv(self.a_p[i])?
                    };
                    return self.rescale(l);
                }
                Genre::II => n += 1,
                _ => {}
            }
        }
        Err(EngeanceError::NotNormalizable)
    }

    /// The residual Frobenius matrix `B`.
    pub fn frobenius(&self, t: &TameType) -> Result<FrobMatrix, EngeanceError> {
        let mats = crate::phimod::genre_matrices(self, t)?;
        Ok(product_frobenius(&mats)?)
    }
}

impl fmt::Display for Engeance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        let show = |x: u32| match k.dlog(x) {
            Ok(d) => format!("g^{d}"),
            Err(_) => "0".to_string(),
        };
        let genres: Vec<&str> = self.genres.iter().map(|g| g.label()).collect();
        let a: Vec<String> = self.a.iter().map(|&x| show(x)).collect();
        let ap: Vec<String> = self.a_p.iter().map(|&x| show(x)).collect();
        write!(
            f,
            "{} alpha=({}, {}) a=({}) a'=({})",
            genres.join(" x "),
            show(self.alpha),
            show(self.alpha_p),
            a.join(", "),
            ap.join(", ")
        )
    }
}

/// `(-1)^n x`.
fn sign_times(k: &Field, n: usize, x: u32) -> u32 {
    if n.is_multiple_of(2) {
        x
    } else {
        k.neg(x)
    }
}

/// Constants fixing the dictionary between representations and residual classes.
///
/// A representation with total exponent `c` and parameter `theta` corresponds
/// to the class `h = k_omega - c`, `delta = u_omega / theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub p: u32,
    pub f: u32,
    pub k_omega: u64,
    /// Discrete logarithm of `u_omega` in the coefficient field.
    pub u_omega: u64,
}

impl Calibration {
    /// Residual class attached to a representation.
    pub fn class_of(&self, spec: &RepSpec, k: &Field) -> RepClass {
        let q = q_of(self.p, self.f);
        let n = q * q - 1;
        let h = (self.k_omega + n - spec.total_exponent()) % n;
        let order = k.order() as u64;
        let delta = (self.u_omega + order - spec.theta % order) % order;
        RepClass::canonical(self.p, self.f, h as i64, delta)
    }
}

fn check_field(k: &Field, p: u32) -> Result<(), EngeanceError> {
    if k.p() != p {
        return Err(EngeanceError::FieldMismatch { p, m: k.degree() });
    }
    Ok(())
}

/// An engeance together with its residual class.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub class: RepClass,
    pub engeance: Engeance,
}

/// Parameter tuples for one genre sequence: canonical representatives only.
fn parameter_choices(k: &Field, n_i: usize, odd: bool) -> Vec<Vec<u32>> {
    let size = k.size();
    let mut all: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n_i {
        all = all
            .into_iter()
            .flat_map(|v| {
                (0..size).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    if odd {
        all
    } else {
        all.into_iter()
            .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
            .collect()
    }
}

/// Valuation of `x X + y Y`, or `None` when the combination vanishes.
fn combo_valuation(
    k: &Field,
    xs: &LaurentSeries,
    ys: &LaurentSeries,
    x: u32,
    y: u32,
) -> Result<Option<i64>, LaurentError> {
    match (xs.lowest_term(), ys.lowest_term()) {
        (Err(_), Err(_)) => Ok(None),
        (Ok((v, _)), Err(_)) | (Err(_), Ok((v, _))) => Ok(Some(v)),
        (Ok((vx, cx)), Ok((vy, cy))) => {
            if vx != vy {
                return Ok(Some(vx.min(vy)));
            }
            if k.add(k.mul(x, cx), k.mul(y, cy)) != 0 {
                return Ok(Some(vx));
            }
            let s = xs.scale(x).add(&ys.scale(y))?;
            Ok(s.valuation())
        }
    }
}

/// Every canonical engeance of type `t` over `k` with irreducible residual
/// representation, for the unramified parameter `theta` (a field code).
///
/// The matrix `M` with `B = diag(alpha, alpha') M` is computed once per
/// parameter tuple; only the trace condition depends on `alpha`.
pub fn census(t: &TameType, k: &Field, theta: u32) -> Result<Vec<CensusEntry>, EngeanceError> {
    check_field(k, t.p)?;
    let f = t.f as usize;
    let fu = t.f;
    let p = t.p;
    let q = q_of(p, t.f) as i64;
    let theta_inv = k.inv(theta)?;
    let one = LaurentSeries::one(k);
    let mut out = Vec::new();
    for genres in all_genre_sequences(f) {
        let n_ii = genres.iter().filter(|&&g| g == Genre::II).count();
        let odd = n_ii % 2 == 1;
        let kappa = sign_times(k, n_ii + 1, theta_inv);
        let i_pos: Vec<usize> = (0..f).filter(|&i| genres[i] != Genre::II).collect();
        let alphas: Vec<u32> = if odd {
            vec![1]
        } else {
            (0..k.size()).filter(|&x| x != 0).collect()
        };
        for params in parameter_choices(k, i_pos.len(), odd) {
            let mut a = vec![0u32; f];
            let mut a_p = vec![0u32; f];
            for (&i, &x) in i_pos.iter().zip(&params) {
                match genres[i] {
                    Genre::IEta => a[i] = x,
                    _ => a_p[i] = x,
                }
            }
            let c = |x: u32| LaurentSeries::monomial(k, x, 0);
            let ca: Vec<LaurentSeries> = a.iter().map(|&x| c(x)).collect();
            let cap: Vec<LaurentSeries> = a_p.iter().map(|&x| c(x)).collect();
            let mats = genre_factors(k, &genres, &ca, &cap, &one, &one, t)?;
            let m = product_frobenius(&mats)?;
            let [[m11, _], [m21, m22]] = &m.e;
            let Some((vc, _)) = m21.terms().first().copied() else {
                continue;
            };
            let det = m.det()?;
            let Some((vdet, ldet)) = det.terms().first().copied() else {
                continue;
            };
            let h = (q - 1) * vc + vdet;
            if h.rem_euclid(q + 1) == 0 {
                continue;
            }
            let delta = k.neg(k.mul(kappa, ldet));
            let class = RepClass::canonical(p, fu, h, k.dlog(delta)? as u64);
            let xs = m11.phi_sub(fu).mul(m21)?;
            let ys = m22.mul(&m21.phi_sub(fu))?;
            for &alpha in &alphas {
                let alpha_p = k.mul(kappa, k.inv(alpha)?);
                let irreducible = match combo_valuation(k, &xs, &ys, alpha, alpha_p)? {
                    None => true,
                    Some(vn) => (q + 1) * (vn - vc) > q * h,
                };
                if irreducible {
                    out.push(CensusEntry {
                        class,
                        engeance: Engeance {
                            field: k.clone(),
                            genres: genres.clone(),
                            a: a.clone(),
                            a_p: a_p.clone(),
                            alpha,
                            alpha_p,
                        },
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Census grouped by residual class, engeances sorted.
pub fn census_by_class(
    t: &TameType,
    k: &Field,
    theta: u32,
) -> Result<BTreeMap<RepClass, Vec<Engeance>>, EngeanceError> {
    let mut map: BTreeMap<RepClass, Vec<Engeance>> = BTreeMap::new();
    for e in census(t, k, theta)? {
        map.entry(e.class).or_default().push(e.engeance);
    }
    for v in map.values_mut() {
        v.sort();
    }
    Ok(map)
}

/// The theta code of a representation in the field `k`.
pub fn theta_code(spec: &RepSpec, k: &Field) -> u32 {
    k.from_dlog(spec.theta as i64)
}

/// All canonical engeances of type `t` whose residual representation is the target.
pub fn enumerate_engeances(
    target: &RepSpec,
    t: &TameType,
    k: &Field,
    cal: &Calibration,
) -> Result<Vec<Engeance>, EngeanceError> {
    if cal.p != target.p || cal.f != target.f {
        return Err(EngeanceError::CalibrationMissing(target.f));
    }
    let want = cal.class_of(target, k);
    let mut out: Vec<Engeance> = census(t, k, theta_code(target, k))?
        .into_iter()
        .filter(|e| e.class == want)
        .map(|e| e.engeance)
        .collect();
    out.sort();
    Ok(out)
}

/// Shape of a Kisin variety from its point census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KisinShape {
    Empty,
    Point(Engeance),
    ProjLine {
        /// The two points lying outside the family (`0` and `infinity`).
        isolated: [Engeance; 2],
        /// Genre sequence of the `k^x`-family.
        family_genres: Vec<Genre>,
        family: Vec<Engeance>,
    },
}

impl KisinShape {
    /// Short label: `empty`, `point` or `P1`.
    pub fn label(&self) -> &'static str {
        match self {
            KisinShape::Empty => "empty",
            KisinShape::Point(_) => "point",
            KisinShape::ProjLine { .. } => "P1",
        }
    }

    /// Number of points over the enumeration field.
    pub fn point_count(&self) -> usize {
        match self {
            KisinShape::Empty => 0,
            KisinShape::Point(_) => 1,
            KisinShape::ProjLine { family, .. } => family.len() + 2,
        }
    }
}

/// Recognizes empty, point and projective-line censuses.
pub fn kisin_shape(engeances: &[Engeance], k: &Field) -> Result<KisinShape, EngeanceError> {
    match engeances.len() {
        0 => return Ok(KisinShape::Empty),
        1 => return Ok(KisinShape::Point(engeances[0].clone())),
        _ => {}
    }
    let mut groups: BTreeMap<Vec<Genre>, Vec<Engeance>> = BTreeMap::new();
    for e in engeances {
        groups.entry(e.genres.clone()).or_default().push(e.clone());
    }
    let size = k.size() as usize;
    let singles: Vec<&Vec<Engeance>> = groups.values().filter(|v| v.len() == 1).collect();
    let families: Vec<(&Vec<Genre>, &Vec<Engeance>)> =
        groups.iter().filter(|(_, v)| v.len() > 1).collect();
    let ok = engeances.len() == size + 1
        && singles.len() == 2
        && families.len() == 1
        && families[0].1.len() == size - 1
        && singles.iter().all(|v| v[0].count_ii() == 1)
        && families[0].0.iter().all(|&g| g != Genre::II);
    if !ok {
        return Err(EngeanceError::UnrecognizedShape(format!(
            "{} points in {} genre classes",
            engeances.len(),
            groups.len()
        )));
    }
    let mut alphas: Vec<u32> = families[0].1.iter().map(|e| e.alpha).collect();
    alphas.sort_unstable();
    alphas.dedup();
    if alphas.len() != size - 1 {
        return Err(EngeanceError::UnrecognizedShape(
            "family is not parametrized by alpha".into(),
        ));
    }
    Ok(KisinShape::ProjLine {
        isolated: [singles[0][0].clone(), singles[1][0].clone()],
        family_genres: families[0].0.clone(),
        family: families[0].1.clone(),
    })
}

/// The point engeance `I_eta x II` with `(alpha, alpha') = (1, 1/theta)` and zero parameters.
pub fn first_row_engeance(k: &Field, theta: u32) -> Result<Engeance, EngeanceError> {
    Engeance::new(
        k,
        vec![Genre::IEta, Genre::II],
        vec![0, 0],
        vec![0, 0],
        1,
        k.inv(theta)?,
    )
}

/// Determines the calibration constants for `f = 2` by exhaustive search.
///
/// The first point family fixes the candidates; every other reference family
/// must then be consistent with them.
pub fn calibrate(p: u32, f: u32, k: &Field) -> Result<Calibration, EngeanceError> {
    if f != 2 {
        return Err(EngeanceError::CalibrationMissing(f));
    }
    check_field(k, p)?;
    let q = q_of(p, f);
    let n = q * q - 1;
    let order = k.order() as u64;
    let thetas = [1u32, k.generator()];
    let mut candidates: Option<Vec<(u64, u64)>> = None;
    for r0 in 0..=p as i64 - 2 {
        let t = TameType::new(p, 2, r0, -(p as i64))?;
        for &theta in &thetas {
            let e = first_row_engeance(k, theta)?;
            let res = residual_class(&e.frobenius(&t)?, f)?.ok_or_else(|| {
                EngeanceError::CalibrationFailed(format!("first family reducible at r0 = {r0}"))
            })?;
            let spec = RepSpec::new(p, 2, 1 + r0, 0, k.dlog(theta)? as u64)?;
            let c = spec.total_exponent();
            let hq = (res.h.rem_euclid(n as i64) as u64 * q) % n;
            let h1 = res.h.rem_euclid(n as i64) as u64;
            let u = (k.dlog(res.delta)? as u64 + spec.theta) % order;
            let here: Vec<(u64, u64)> = vec![((h1 + c) % n, u), ((hq + c) % n, u)];
            candidates = Some(match candidates {
                None => here,
                Some(prev) => prev.into_iter().filter(|x| here.contains(x)).collect(),
            });
        }
    }
    let mut cands = candidates.unwrap_or_default();
    cands.sort_unstable();
    cands.dedup();
    if cands.len() != 1 {
        return Err(EngeanceError::CalibrationFailed(format!(
            "{} candidate pairs remain",
            cands.len()
        )));
    }
    let cal = Calibration {
        p,
        f,
        k_omega: cands[0].0,
        u_omega: cands[0].1,
    };
    validate_calibration(&cal, k)?;
    Ok(cal)
}

/// Checks every reference family against the calibration constants.
pub fn validate_calibration(cal: &Calibration, k: &Field) -> Result<(), EngeanceError> {
    for theta in [1u32, k.generator()] {
        for inst in crate::figures::figure1_instances(cal.p)? {
            let spec = inst.target(k.dlog(theta)? as u64)?;
            let want = cal.class_of(&spec, k);
            for e in inst.expected(k, theta)? {
                let res = residual_class(&e.frobenius(&inst.tame_type)?, cal.f)?;
                match res {
                    Some(r) if r.class == want => {}
                    _ => {
                        return Err(EngeanceError::CalibrationFailed(format!(
                            "family {} ({}) does not match",
                            inst.family, inst.param
                        )))
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;

    #[test]
    fn canonical_rescaling_example() {
        let k = GaloisField::new(5, 1).unwrap();
        let e = Engeance::new(
            &k,
            vec![Genre::IEtaP, Genre::IEta],
            vec![0, 3],
            vec![2, 0],
            3,
            1,
        )
        .unwrap();
        let c = e.canonicalize().unwrap();
        assert_eq!((c.a_p[0], c.a[1]), (1, 1));
        assert_eq!((c.alpha, c.alpha_p), (3, 1));
        assert_eq!(c.canonicalize().unwrap(), c);
    }

    #[test]
    fn odd_ii_normalizes_alpha() {
        let k = GaloisField::new(5, 1).unwrap();
        let e = Engeance::new(
            &k,
            vec![Genre::IEta, Genre::II],
            vec![1, 0],
            vec![0, 0],
            1,
            4,
        )
        .unwrap();
        assert_eq!(e.canonicalize().unwrap(), e);
        let moved = e.rescale(2).unwrap();
        assert_eq!(moved.alpha, 3);
        assert_eq!(moved.canonicalize().unwrap(), e);
    }

    #[test]
    fn double_ii_zero_not_normalizable() {
        let k = GaloisField::new(5, 1).unwrap();
        let e =
            Engeance::new(&k, vec![Genre::II, Genre::II], vec![0, 0], vec![0, 0], 1, 4).unwrap();
        assert_eq!(e.canonicalize(), Err(EngeanceError::NotNormalizable));
    }

    #[test]
    fn genre_sequences() {
        assert_eq!(all_genre_sequences(2).len(), 9);
        assert_eq!(all_genre_sequences(3).len(), 27);
    }

    #[test]
    fn shape_of_small_censuses() {
        let k = GaloisField::new(5, 2).unwrap();
        assert_eq!(kisin_shape(&[], &k).unwrap(), KisinShape::Empty);
        let e = first_row_engeance(&k, 1).unwrap();
        assert_eq!(kisin_shape(std::slice::from_ref(&e), &k).unwrap(), KisinShape::Point(e));
    }
}
