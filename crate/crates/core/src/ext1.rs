//! Extension classes of an irreducible residual representation, tangent
//! images of explicit deformations, and the resulting deformation-ring labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engeance::{
    census_by_class, kisin_shape, theta_code, Calibration, Engeance, EngeanceError, Genre,
    KisinShape,
};
use crate::figures::{projective_line_family, TangentFamily};
use crate::gf::{Field, GfError};
use crate::laurent::{DualSeries, LaurentError, LaurentSeries};
use crate::phimod::{
    companion_reduce, genre_factors, product_frobenius, FrobMatrix, PhiModError, RepClass,
};
use crate::weights::{
    classify_nongeneric, modified_weight, q_of, weights_intersect, weights_of_rep,
    weights_of_type_f2, NongenericCase, RepSpec, SerreWeight, TameType, WeightError,
};

/// Errors raised while computing extension classes and deformation rings.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Ext1Error {
    #[error("body of the tangent family is reducible")]
    ReducibleBody,
    #[error("precision exhausted: known below {known}, needed through {needed}")]
    PrecisionExhausted { known: i64, needed: i64 },
    #[error("only f = 2 is supported, got f = {0}")]
    UnsupportedDegree(u32),
    #[error("inconsistent system: {0}")]
    InconsistentSystem(String),
    #[error(transparent)]
    Engeance(#[from] EngeanceError),
    #[error(transparent)]
    PhiMod(#[from] PhiModError),
    #[error(transparent)]
    Series(#[from] LaurentError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Coordinates of an extension class in the two monomial quotient bases.
///
/// Coefficients are field codes; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ext1Class {
    pub first: BTreeMap<i64, u32>,
    pub second: BTreeMap<i64, u32>,
}

impl Ext1Class {
    /// True for the zero class.
    pub fn is_zero(&self) -> bool {
        self.first.is_empty() && self.second.is_empty()
    }

    /// Renders the class as `(first, second)` with coefficients as powers of the generator.
    pub fn render(&self, k: &Field) -> String {
        let part = |m: &BTreeMap<i64, u32>| {
            if m.is_empty() {
                return "0".to_string();
            }
            m.iter()
                .map(|(&e, &c)| format!("g^{} v^{}", k.dlog(c).unwrap_or(0), e))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("({}, {})", part(&self.first), part(&self.second))
    }

    /// Serializable form with discrete logarithms.
    pub fn to_terms(&self, k: &Field) -> Ext1Terms {
        let conv = |m: &BTreeMap<i64, u32>| {
            m.iter()
                .map(|(&e, &c)| (e, k.dlog(c).unwrap_or(0) as u64))
                .collect()
        };
        Ext1Terms {
            first: conv(&self.first),
            second: conv(&self.second),
        }
    }
}

/// An extension class as `(exponent, dlog)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Terms {
    pub first: Vec<(i64, u64)>,
    pub second: Vec<(i64, u64)>,
}

/// Reduces `x` modulo the image of `y -> v^m phi(y) - y`, with `phi: v -> v^{q^2}`.
///
/// The result is supported on `{n < M, n != m mod q^2}` together with `M`
/// when `M = -m/(q^2 - 1)` is an integer. Terms above `M` are dropped, so
/// only the coefficients up to `M` need to be known.
pub fn quotient_reduce(x: &LaurentSeries, m: i64, q: u64) -> Result<BTreeMap<i64, u32>, Ext1Error> {
    let k = x.field();
    let n2 = (q * q) as i64;
    let den = n2 - 1;
    // n <= M  iff  n (q^2 - 1) <= -m
    let floor_m = (-m).div_euclid(den);
    if let Some(prec) = x.prec() {
        if prec <= floor_m {
            return Err(Ext1Error::PrecisionExhausted {
                known: prec,
                needed: floor_m,
            });
        }
    }
    let mut out: BTreeMap<i64, u32> = BTreeMap::new();
    for &(e, c) in x.terms() {
        let mut n = e;
        if n * den > -m {
            continue;
        }
        while n * den < -m && (n - m).rem_euclid(n2) == 0 {
            n = (n - m) / n2;
        }
        let slot = out.entry(n).or_insert(0);
        *slot = k.add(*slot, c);
        if *slot == 0 {
            out.remove(&n);
        }
    }
    Ok(out)
}

/// Coordinates of the tangent matrix `A` at the companion form `(0, delta v^h; 1, 0)`.
///
/// Here `phi` is the Frobenius of the module, `v -> v^q`.
pub fn ext_coords(a: &FrobMatrix, h: i64, delta: u32, f: u32) -> Result<Ext1Class, Ext1Error> {
    let k = a.e[0][0].field().clone();
    let q = q_of(k.p(), f);
    let scale = LaurentSeries::monomial(&k, k.inv(delta)?, -h);
    let [[aa, b], [c, d]] = &a.e;
    let first = aa.phi_sub(f).add(d)?.mul(&scale)?;
    let second = b.mul(&scale)?.add(&c.phi_sub(f))?;
    Ok(Ext1Class {
        first: quotient_reduce(&first, (q as i64 - 1) * h, q)?,
        second: quotient_reduce(&second, 0, q)?,
    })
}

/// Images of first-order deformations of a common body.
pub fn tangent_images(
    body: &FrobMatrix,
    tangents: &[FrobMatrix],
    f: u32,
    window: i64,
) -> Result<Vec<Ext1Class>, Ext1Error> {
    let comp = match companion_reduce(body, f, window) {
        Ok(c) => c,
        Err(PhiModError::ReducibleInput) => return Err(Ext1Error::ReducibleBody),
        Err(e) => return Err(e.into()),
    };
    tangents
        .iter()
        .map(|t| ext_coords(&comp.transport(t, f)?, comp.h, comp.delta, f))
        .collect()
}

/// Images of a transcribed tangent family, in direction order.
pub fn family_images(fam: &TangentFamily, window: i64) -> Result<Vec<Ext1Class>, Ext1Error> {
    let tangents: Vec<FrobMatrix> = fam.directions.iter().map(|(_, m)| m.clone()).collect();
    tangent_images(&fam.body, &tangents, 2, window)
}

/// Linear independence over `k` of a list of classes.
pub fn independent(classes: &[Ext1Class], k: &Field) -> bool {
    let mut keys: BTreeSet<(u8, i64)> = BTreeSet::new();
    for c in classes {
        keys.extend(c.first.keys().map(|&e| (0, e)));
        keys.extend(c.second.keys().map(|&e| (1, e)));
    }
    let keys: Vec<(u8, i64)> = keys.into_iter().collect();
    let mut rows: Vec<Vec<u32>> = classes
        .iter()
        .map(|c| {
            keys.iter()
                .map(|&(s, e)| {
                    let m = if s == 0 { &c.first } else { &c.second };
                    m.get(&e).copied().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..keys.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = k.inv(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = k.sub(*x, k.mul(factor, y));
                }
            }
        }
        rank += 1;
    }
    rank == classes.len()
}

/// Presentation of a potentially Barsotti-Tate deformation ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PresentedRing {
    /// The zero ring.
    Zero,
    /// `O[[X, Y, T_1 .. T_extra]] / (XY + p^k)`.
    XYplusPk { k: u32, extra: u32 },
    /// A strict subring of `O[[X, Y, T]] / (XY + p)`, not identified further.
    StrictSubring,
}

impl fmt::Display for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentedRing::Zero => f.write_str("0"),
            PresentedRing::XYplusPk { k, extra } => {
                let vars: Vec<String> = (1..=*extra).map(|i| format!("T{i}")).collect();
                let pk = if *k == 1 {
                    "p".to_string()
                } else {
                    format!("p^{k}")
                };
                write!(f, "O[[X,Y,{}]]/(XY+{pk})", vars.join(","))
            }
            PresentedRing::StrictSubring => f.write_str("strict subring of O[[X,Y,T]]/(XY+p)"),
        }
    }
}

/// A deformation ring together with the evidence used to determine it.
#[derive(Clone, Debug)]
pub struct RingReport {
    pub ring: PresentedRing,
    pub shape: KisinShape,
    /// Names of the tangent directions that were tested.
    pub directions: Vec<String>,
    pub images: Vec<Ext1Class>,
}

type CensusKey = (u32, Vec<u32>, TameType, u32);
type CensusMap = BTreeMap<RepClass, Vec<Engeance>>;

/// Census of a type, computed once per field, type and `theta`.
pub fn cached_census(
    t: &TameType,
    k: &Field,
    theta: u32,
) -> Result<std::sync::Arc<CensusMap>, Ext1Error> {
    static CACHE: OnceLock<Mutex<HashMap<CensusKey, std::sync::Arc<CensusMap>>>> = OnceLock::new();
    let key = (k.p(), k.modulus().to_vec(), t.clone(), theta);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("census cache").get(&key) {
        return Ok(v.clone());
    }
    let v = std::sync::Arc::new(census_by_class(t, k, theta)?);
    cache.lock().expect("census cache").insert(key, v.clone());
    Ok(v)
}

/// Engeances of type `t` over `k` attached to the target, from the cached census.
pub fn engeances_for(
    target: &RepSpec,
    t: &TameType,
    k: &Field,
    cal: &Calibration,
) -> Result<Vec<Engeance>, Ext1Error> {
    let census = cached_census(t, k, theta_code(target, k))?;
    Ok(census
        .get(&cal.class_of(target, k))
        .cloned()
        .unwrap_or_default())
}

/// Tangent directions at a point engeance with one genre II factor: the
/// free parameter of each other factor and both parameters of the II factor.
pub fn point_tangents(
    e: &Engeance,
    t: &TameType,
) -> Result<(FrobMatrix, Vec<(String, FrobMatrix)>), Ext1Error> {
    let k = e.field();
    let f = e.genres.len();
    let mut dirs: Vec<(String, usize, bool)> = Vec::new();
    for (i, g) in e.genres.iter().enumerate() {
        match g {
            Genre::IEta => dirs.push((format!("a{i}"), i, false)),
            Genre::IEtaP => dirs.push((format!("a'{i}"), i, true)),
            Genre::II => {
                dirs.push((format!("a{i}"), i, false));
                dirs.push((format!("a'{i}"), i, true));
            }
        }
    }
    let c = |x: u32| LaurentSeries::monomial(k, x, 0);
    let lift = |x: u32, moving: bool| DualSeries {
        body: c(x),
        tangent: if moving { c(1) } else { LaurentSeries::zero(k) },
    };
    let mut body = None;
    let mut out = Vec::new();
    for (name, idx, primed) in dirs {
        let a: Vec<DualSeries> = (0..f).map(|i| lift(e.a[i], !primed && i == idx)).collect();
        let a_p: Vec<DualSeries> = (0..f).map(|i| lift(e.a_p[i], primed && i == idx)).collect();
        let mats = genre_factors(
            k,
            &e.genres,
            &a,
            &a_p,
            &lift(e.alpha, false),
            &lift(e.alpha_p, false),
            t,
        )?;
        let m = product_frobenius(&mats)?;
        body.get_or_insert_with(|| m.body());
        out.push((name, m.tangent()));
    }
    Ok((body.expect("at least one direction"), out))
}

/// The exponent `d1` of the projective-line family attached to a nongeneric target.
///
/// Family `(iii)` is carried to family `(i)` by exchanging the two embeddings,
/// which sends `r1` to `r0 = r1 + 1`.
pub fn projective_line_d1(target: &RepSpec) -> Option<i64> {
    let p = target.p as i64;
    let (case, _) = classify_nongeneric(target)?;
    Some(match case {
        NongenericCase::I { r0 } => p - 2 - r0 as i64,
        NongenericCase::II => p - 2,
        NongenericCase::III { r1 } => p - 3 - r1 as i64,
        NongenericCase::IV => p - 2,
    })
}

/// Modified weight of a nongeneric target, if any.
pub fn target_modified_weight(target: &RepSpec) -> Result<Option<SerreWeight>, WeightError> {
    match classify_nongeneric(target) {
        Some((case, s)) => Ok(Some(modified_weight(target.p, case, s)?)),
        None => Ok(None),
    }
}

/// True when the target is totally nongeneric.
pub fn is_totally_nongeneric(target: &RepSpec) -> bool {
    classify_nongeneric(target).is_some_and(|(c, _)| c.totally_nongeneric())
}

/// Label of the deformation ring for `(target, t)` over `k`, with tangent evidence.
pub fn deformation_ring(
    target: &RepSpec,
    t: &TameType,
    k: &Field,
    cal: &Calibration,
    window: i64,
) -> Result<RingReport, Ext1Error> {
    if target.f != 2 || t.f != 2 {
        return Err(Ext1Error::UnsupportedDegree(target.f));
    }
    let engeances = engeances_for(target, t, k, cal)?;
    let shape = kisin_shape(&engeances, k)?;
    let (ring, directions, images) = match &shape {
        KisinShape::Empty => (PresentedRing::Zero, Vec::new(), Vec::new()),
        KisinShape::Point(e) => {
            if e.count_ii() != 1 {
                return Err(EngeanceError::UnrecognizedShape(format!(
                    "point with {} genre II factors",
                    e.count_ii()
                ))
                .into());
            }
            let (body, dirs) = point_tangents(e, t)?;
            let tangents: Vec<FrobMatrix> = dirs.iter().map(|(_, m)| m.clone()).collect();
            let images = tangent_images(&body, &tangents, 2, window)?;
            let ring = if independent(&images, k) {
                PresentedRing::XYplusPk {
                    k: 1,
                    extra: (images.len() - 2) as u32,
                }
            } else {
                PresentedRing::StrictSubring
            };
            (ring, dirs.into_iter().map(|(n, _)| n).collect(), images)
        }
        KisinShape::ProjLine { .. } => {
            let d1 = projective_line_d1(target).ok_or_else(|| {
                Ext1Error::InconsistentSystem("projective line for a generic target".into())
            })?;
            let fam = projective_line_family(k, d1, theta_code(target, k))?;
            let images = family_images(&fam, window)?;
            if !independent(&images, k) {
                return Err(Ext1Error::InconsistentSystem(
                    "projective-line tangent family is dependent".into(),
                ));
            }
            let names = fam.directions.iter().map(|(n, _)| n.to_string()).collect();
            (PresentedRing::XYplusPk { k: 2, extra: 1 }, names, images)
        }
    };
    Ok(RingReport {
        ring,
        shape,
        directions,
        images,
    })
}

/// Number of monomials of degree at most `n` in `vars` variables not divisible by `XY`.
fn fiber_count(vars: u32, n: u64) -> u64 {
    // monomials X^a Y^b T^c with a b = 0
    let rest = vars - 2;
    let binom = |n: u64, r: u32| -> u64 {
        let mut acc: u64 = 1;
        for i in 0..r as u64 {
            acc = acc * (n + r as u64 - i) / (i + 1);
        }
        acc
    };
    // number of monomials of degree exactly j in `rest` variables
    let in_rest = |j: u64| {
        if rest == 0 {
            u64::from(j == 0)
        } else {
            binom(j, rest - 1)
        }
    };
    let mut total = 0;
    for j in 0..=n {
        // X^a or Y^b of degree j - i (a or b > 0 counted twice, 0 once)
        for i in 0..=j {
            let xy = if j - i == 0 { 1 } else { 2 };
            total += xy * in_rest(i);
        }
    }
    total
}

/// Hilbert-Samuel multiplicity of the special fiber of a presented ring.
///
/// Returns `None` for [`PresentedRing::StrictSubring`].
pub fn hs_multiplicity(ring: &PresentedRing) -> Option<u32> {
    match ring {
        PresentedRing::Zero => Some(0),
        PresentedRing::StrictSubring => None,
        PresentedRing::XYplusPk { extra, .. } => {
            let vars = extra + 2;
            let dim = vars - 1;
            let n_max = 20 + dim as u64;
            let mut seq: Vec<i64> = (0..=n_max).map(|n| fiber_count(vars, n) as i64).collect();
            for _ in 0..dim {
                seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let tail = &seq[seq.len() - 5..];
            debug_assert!(tail.iter().all(|&x| x == tail[0]));
            Some(tail[0] as u32)
        }
    }
}

/// Outcome of the multiplicity comparison for one type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BmStatus {
    Consistent,
    Undetermined,
}

/// One type in a multiplicity report.
#[derive(Clone, Debug, Serialize)]
pub struct BmEntry {
    pub tame_type: TameType,
    pub ring: PresentedRing,
    pub multiplicity: Option<u32>,
    pub common_weights: Vec<SerreWeight>,
    pub status: BmStatus,
}

/// Multiplicity report for a representation.
#[derive(Clone, Debug, Serialize)]
pub struct BmReport {
    pub target: RepSpec,
    pub weights: Vec<SerreWeight>,
    /// Types with nonzero ring or nonempty intersection.
    pub entries: Vec<BmEntry>,
    /// Weights shown to have intrinsic multiplicity 1.
    pub certified: Vec<SerreWeight>,
    /// Weights not covered by any determined type.
    pub uncovered: Vec<SerreWeight>,
}

/// Compares `mu(t)` with `|D(t) cap D(rho)|` over every type.
///
/// Fails with [`Ext1Error::InconsistentSystem`] when a determined type disagrees.
pub fn bm_check(
    target: &RepSpec,
    k: &Field,
    cal: &Calibration,
    window: i64,
) -> Result<BmReport, Ext1Error> {
    if target.f != 2 {
        return Err(Ext1Error::UnsupportedDegree(target.f));
    }
    let weights = weights_of_rep(target)?;
    let mut entries = Vec::new();
    let mut certified: BTreeSet<SerreWeight> = BTreeSet::new();
    for t in TameType::all(target.p, 2)? {
        let common = weights_intersect(&weights_of_type_f2(&t)?, &weights)?;
        let report = deformation_ring(target, &t, k, cal, window)?;
        if report.ring == PresentedRing::Zero && common.is_empty() {
            continue;
        }
        let mu = hs_multiplicity(&report.ring);
        let status = match mu {
            None => BmStatus::Undetermined,
            Some(m) if m as usize == common.len() && (m == 0 || m == 2) => BmStatus::Consistent,
            Some(m) => {
                return Err(Ext1Error::InconsistentSystem(format!(
                    "type ({}, {}): multiplicity {m} but {} common weights",
                    t.k_eta,
                    t.k_eta_p,
                    common.len()
                )))
            }
        };
        if status == BmStatus::Consistent {
            certified.extend(common.iter().cloned());
        }
        entries.push(BmEntry {
            tame_type: t,
            ring: report.ring,
            multiplicity: mu,
            common_weights: common.into_iter().collect(),
            status,
        });
    }
    let uncovered = weights.difference(&certified).cloned().collect();
    Ok(BmReport {
        target: target.clone(),
        weights: weights.into_iter().collect(),
        entries,
        certified: certified.into_iter().collect(),
        uncovered,
    })
}

/// Default working window: `4 q^2` exponents.
pub fn default_window(p: u32, f: u32) -> i64 {
    let q = q_of(p, f) as i64;
    4 * q * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;

    #[test]
    fn quotient_examples() {
        let k = GaloisField::new(5, 2).unwrap();
        let q = 25u64;
        let m = |e: i64| LaurentSeries::monomial(&k, 1, e);
        let r = quotient_reduce(&m(-625), 0, q).unwrap();
        assert_eq!(r, BTreeMap::from([(-1, 1)]));
        assert!(quotient_reduce(&m(2), 0, q).unwrap().is_empty());
        assert_eq!(
            quotient_reduce(&m(0), 0, q).unwrap(),
            BTreeMap::from([(0, 1)])
        );
        assert!(quotient_reduce(&LaurentSeries::zero(&k), 0, q)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn quotient_needs_precision() {
        let k = GaloisField::new(5, 2).unwrap();
        let x = LaurentSeries::big_o(&k, -3);
        assert!(matches!(
            quotient_reduce(&x, 0, 25),
            Err(Ext1Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn independence_basics() {
        let k = GaloisField::new(5, 2).unwrap();
        let a = Ext1Class {
            first: BTreeMap::from([(-3, 1)]),
            second: BTreeMap::new(),
        };
        let b = Ext1Class {
            first: BTreeMap::from([(-4, 2)]),
            second: BTreeMap::new(),
        };
        assert!(independent(&[a.clone(), b.clone()], &k));
        assert!(!independent(&[a.clone(), a.clone()], &k));
        assert!(!independent(&[a, Ext1Class::default()], &k));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(hs_multiplicity(&PresentedRing::Zero), Some(0));
        assert_eq!(
            hs_multiplicity(&PresentedRing::XYplusPk { k: 1, extra: 1 }),
            Some(2)
        );
        assert_eq!(
            hs_multiplicity(&PresentedRing::XYplusPk { k: 2, extra: 1 }),
            Some(2)
        );
        assert_eq!(hs_multiplicity(&PresentedRing::StrictSubring), None);
        assert_eq!(fiber_count(3, 4), 25);
    }
}
