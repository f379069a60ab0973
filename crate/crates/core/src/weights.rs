//! Serre-weight combinatorics.
//!
//! A weight is a digit tuple `r` together with the exponent `w` of a
//! determinant twist, reduced modulo `p^f - 1`. Weights of an irreducible
//! representation are obtained by brute force over the defining congruence;
//! weights of a tame principal-series type use the closed formula for `f = 2`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::is_prime;

/// Errors raised by weight computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("p = {0} is not a prime >= 5")]
    InvalidPrime(u64),
    #[error("f must be at least 1")]
    InvalidDegree,
    #[error("representation is reducible: c = {0} is divisible by q + 1")]
    ReducibleSpec(u64),
    #[error("operation requires f = 2, got f = {0}")]
    NotDegreeTwo(u32),
    #[error("weights belong to different (p, f)")]
    ParameterMismatch,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid tame type: {0}")]
    InvalidType(String),
}

fn check_pf(p: u32, f: u32) -> Result<(), WeightError> {
    if p < 5 || !is_prime(p as u64) {
        return Err(WeightError::InvalidPrime(p as u64));
    }
    if f == 0 {
        return Err(WeightError::InvalidDegree);
    }
    Ok(())
}

/// `p^f`.
pub fn q_of(p: u32, f: u32) -> u64 {
    (p as u64).pow(f)
}

/// Reduces `x` into `[0, n)`.
pub fn modn(x: i64, n: u64) -> u64 {
    x.rem_euclid(n as i64) as u64
}

/// Base-`p` digits (least significant first) of `value mod p^f - 1`, taken in `[0, p^f - 2]`.
pub fn digits_base_p(value: i64, p: u32, f: u32) -> Vec<u32> {
    let mut v = modn(value, q_of(p, f) - 1);
    (0..f)
        .map(|_| {
            let d = (v % p as u64) as u32;
            v /= p as u64;
            d
        })
        .collect()
}

/// A Serre weight `(r_0, .., r_{f-1}) (x) det^w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SerreWeight {
    pub p: u32,
    pub f: u32,
    pub r: Vec<u32>,
    pub w: u64,
}

impl SerreWeight {
    /// Builds a weight, reducing the twist exponent modulo `p^f - 1`.
    pub fn new(p: u32, f: u32, r: Vec<u32>, w: i64) -> Result<Self, WeightError> {
        check_pf(p, f)?;
        if r.len() != f as usize {
            return Err(WeightError::OutOfRange(format!(
                "expected {f} digits, got {}",
                r.len()
            )));
        }
        if let Some(bad) = r.iter().find(|&&x| x >= p) {
            return Err(WeightError::OutOfRange(format!(
                "digit {bad} not below p = {p}"
            )));
        }
        Ok(SerreWeight {
            p,
            f,
            r,
            w: modn(w, q_of(p, f) - 1),
        })
    }

    /// Builds a weight from signed digits, returning `None` when a digit leaves `[0, p - 1]`.
    pub fn from_signed(p: u32, f: u32, r: &[i64], w: i64) -> Option<Self> {
        if r.iter().any(|&x| x < 0 || x >= p as i64) {
            return None;
        }
        SerreWeight::new(p, f, r.iter().map(|&x| x as u32).collect(), w).ok()
    }

    /// The weight twisted by `det^s`.
    pub fn twist(&self, s: i64) -> Self {
        SerreWeight {
            w: modn(self.w as i64 + s, q_of(self.p, self.f) - 1),
            ..self.clone()
        }
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.r.iter().map(|d| d.to_string()).collect();
        write!(f, "({}) det^{}", digits.join(","), self.w)
    }
}

/// An irreducible induced representation `Ind(omega_{2f}^c nr'(theta)) (x) omega_f^s`.
///
/// `theta` is recorded as a discrete logarithm in the coefficient field chosen
/// by the caller; weight computations ignore it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpec {
    pub p: u32,
    pub f: u32,
    pub c: u64,
    pub s: u64,
    pub theta: u64,
}

impl RepSpec {
    /// Validates and reduces the exponents.
    pub fn new(p: u32, f: u32, c: i64, s: i64, theta: u64) -> Result<Self, WeightError> {
        check_pf(p, f)?;
        let q = q_of(p, f);
        let c = modn(c, q * q - 1);
        if c.is_multiple_of(q + 1) {
            return Err(WeightError::ReducibleSpec(c));
        }
        Ok(RepSpec {
            p,
            f,
            c,
            s: modn(s, q - 1),
            theta,
        })
    }

    /// The spec with digits `r_j` of `c = sum (r_j + 1) p^j`.
    pub fn from_digits(p: u32, r: &[i64], s: i64, theta: u64) -> Result<Self, WeightError> {
        let c: i64 = r
            .iter()
            .enumerate()
            .map(|(j, &rj)| (rj + 1) * (p as i64).pow(j as u32))
            .sum();
        RepSpec::new(p, r.len() as u32, c, s, theta)
    }

    /// `q = p^f`.
    pub fn q(&self) -> u64 {
        q_of(self.p, self.f)
    }

    /// Total niveau-`2f` exponent `c + (q + 1) s` of the inertial restriction.
    pub fn total_exponent(&self) -> u64 {
        let q = self.q();
        (self.c + (q + 1) * self.s) % (q * q - 1)
    }

    /// The conjugate presentation `c -> q c` of the same representation.
    pub fn conjugate(&self) -> Self {
        let q = self.q();
        RepSpec {
            c: (self.c * q) % (q * q - 1),
            ..self.clone()
        }
    }
}

/// A tame principal-series type `eta (+) eta'` with `eta = omega_f^kEta`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TameType {
    pub p: u32,
    pub f: u32,
    pub k_eta: u64,
    pub k_eta_p: u64,
}

impl TameType {
    /// Validates and reduces the exponents modulo `p^f - 1`.
    pub fn new(p: u32, f: u32, k_eta: i64, k_eta_p: i64) -> Result<Self, WeightError> {
        check_pf(p, f)?;
        let n = q_of(p, f) - 1;
        let (a, b) = (modn(k_eta, n), modn(k_eta_p, n));
        if a == b {
            return Err(WeightError::InvalidType("eta and eta' coincide".into()));
        }
        Ok(TameType {
            p,
            f,
            k_eta: a,
            k_eta_p: b,
        })
    }

    /// Digits `c_i` of `kEta - kEtaP`, taken in `[1, p^f - 2]`.
    pub fn c(&self) -> Vec<u32> {
        digits_base_p(self.k_eta as i64 - self.k_eta_p as i64, self.p, self.f)
    }

    /// Digits `b_i` of `kEtaP`.
    pub fn b(&self) -> Vec<u32> {
        digits_base_p(self.k_eta_p as i64, self.p, self.f)
    }

    /// `d_i = p - 1 - c_{f-1-i}`.
    pub fn d(&self) -> Vec<u32> {
        let c = self.c();
        let f = self.f as usize;
        (0..f).map(|i| self.p - 1 - c[f - 1 - i]).collect()
    }

    /// All types for `(p, f)`: ordered pairs of distinct exponents.
    pub fn all(p: u32, f: u32) -> Result<Vec<TameType>, WeightError> {
        check_pf(p, f)?;
        let n = q_of(p, f) - 1;
        let mut out = Vec::with_capacity((n * (n - 1)) as usize);
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    out.push(TameType {
                        p,
                        f,
                        k_eta: a,
                        k_eta_p: b,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Serre weights of an irreducible representation, by brute force over the congruence.
pub fn weights_of_rep(spec: &RepSpec) -> Result<BTreeSet<SerreWeight>, WeightError> {
    let (p, f) = (spec.p, spec.f);
    check_pf(p, f)?;
    let q = spec.q();
    let big = q * q - 1;
    if spec.c.is_multiple_of(q + 1) {
        return Err(WeightError::ReducibleSpec(spec.c));
    }
    let target = spec.total_exponent();
    let mut out = BTreeSet::new();
    let count = q as usize;
    let pows: Vec<u64> = (0..f).map(|j| (p as u64).pow(j)).collect();
    for idx in 0..count {
        let r = digits_base_p(idx as i64, p, f);
        // digits_base_p works modulo q - 1; the all-(p-1) tuple is index q - 1
        let r: Vec<u32> = if idx as u64 == q - 1 {
            vec![p - 1; f as usize]
        } else {
            r
        };
        for mask in 0u32..(1 << f) {
            let mut lhs = 0u64;
            for j in 0..f as usize {
                let term = (r[j] as u64 + 1) * pows[j];
                lhs += if mask >> j & 1 == 1 { term } else { q * term };
            }
            let diff = (target + big - lhs % big) % big;
            if diff.is_multiple_of(q + 1) {
                let w = (diff / (q + 1)) % (q - 1);
                out.insert(SerreWeight {
                    p,
                    f,
                    r: r.clone(),
                    w,
                });
            }
        }
    }
    Ok(out)
}

/// The four candidate weights of an `f = 2` type, in the standard order, before filtering.
pub fn type_candidates_f2(t: &TameType) -> Result<[(Vec<i64>, i64); 4], WeightError> {
    if t.f != 2 {
        return Err(WeightError::NotDegreeTwo(t.f));
    }
    let p = t.p as i64;
    let c = t.c();
    let (c0, c1) = (c[0] as i64, c[1] as i64);
    let k = t.k_eta_p as i64;
    Ok([
        (vec![c0, c1], k),
        (vec![p - 2 - c0, c1 - 1], c0 + 1 + k),
        (vec![c0 - 1, p - 2 - c1], p * (c1 + 1) + k),
        (vec![p - 1 - c0, p - 1 - c1], c0 + p * c1 + k),
    ])
}

/// Serre weights of a tame type for `f = 2`.
pub fn weights_of_type_f2(t: &TameType) -> Result<BTreeSet<SerreWeight>, WeightError> {
    Ok(type_candidates_f2(t)?
        .iter()
        .filter_map(|(r, w)| SerreWeight::from_signed(t.p, 2, r, *w))
        .collect())
}

/// Intersection of two weight sets over the same `(p, f)`.
pub fn weights_intersect(
    d1: &BTreeSet<SerreWeight>,
    d2: &BTreeSet<SerreWeight>,
) -> Result<BTreeSet<SerreWeight>, WeightError> {
    let pf: BTreeSet<(u32, u32)> = d1.iter().chain(d2).map(|w| (w.p, w.f)).collect();
    if pf.len() > 1 {
        return Err(WeightError::ParameterMismatch);
    }
    Ok(d1.intersection(d2).cloned().collect())
}

/// Multiplicity `m_t(sigma)` of a weight in the reduction of a tame type (0 or 1).
pub fn type_multiplicity(t: &TameType, sigma: &SerreWeight) -> Result<u32, WeightError> {
    Ok(weights_of_type_f2(t)?.contains(sigma) as u32)
}

/// The four families of nongeneric irreducible representations for `f = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum NongenericCase {
    /// `c = 1 + r0` with `1 <= r0 <= p - 2`.
    I { r0: u32 },
    /// `c = 1`.
    II,
    /// `c = p (2 + r1)` with `0 <= r1 <= p - 3`.
    III { r1: u32 },
    /// `c = p`.
    IV,
}

impl NongenericCase {
    /// Every valid parameter choice for `p`.
    pub fn all(p: u32) -> Vec<NongenericCase> {
        let mut out: Vec<NongenericCase> = (1..=p - 2).map(|r0| NongenericCase::I { r0 }).collect();
        out.push(NongenericCase::II);
        out.extend((0..=p - 3).map(|r1| NongenericCase::III { r1 }));
        out.push(NongenericCase::IV);
        out
    }

    /// Roman-numeral label.
    pub fn label(&self) -> &'static str {
        match self {
            NongenericCase::I { .. } => "i",
            NongenericCase::II => "ii",
            NongenericCase::III { .. } => "iii",
            NongenericCase::IV => "iv",
        }
    }

    /// Checks the parameter range.
    pub fn validate(&self, p: u32) -> Result<(), WeightError> {
        check_pf(p, 2)?;
        match *self {
            NongenericCase::I { r0 } if !(1..=p - 2).contains(&r0) => Err(WeightError::OutOfRange(
                format!("r0 = {r0} not in [1, {}]", p - 2),
            )),
            NongenericCase::III { r1 } if r1 > p - 3 => Err(WeightError::OutOfRange(format!(
                "r1 = {r1} not in [0, {}]",
                p - 3
            ))),
            _ => Ok(()),
        }
    }

    /// True for the two totally nongeneric families.
    pub fn totally_nongeneric(&self) -> bool {
        matches!(self, NongenericCase::II | NongenericCase::IV)
    }

    /// The niveau-4 exponent `c`.
    pub fn exponent(&self, p: u32) -> i64 {
        let p = p as i64;
        match *self {
            NongenericCase::I { r0 } => 1 + r0 as i64,
            NongenericCase::II => 1,
            NongenericCase::III { r1 } => p * (2 + r1 as i64),
            NongenericCase::IV => p,
        }
    }

    /// The representation of this family twisted by `omega_2^s`.
    pub fn rep(&self, p: u32, s: i64, theta: u64) -> Result<RepSpec, WeightError> {
        self.validate(p)?;
        RepSpec::new(p, 2, self.exponent(p), s, theta)
    }
}

/// The tabulated weight list of a nongeneric family, modified weight first, then its symmetric.
pub fn nongeneric_oracle(
    p: u32,
    case: NongenericCase,
    s: i64,
) -> Result<Vec<SerreWeight>, WeightError> {
    case.validate(p)?;
    let pi = p as i64;
    let raw: Vec<([i64; 2], i64)> = match case {
        NongenericCase::I { r0 } => {
            let r0 = r0 as i64;
            vec![
                ([r0 + 1, pi - 1], -1),
                ([pi - 2 - r0, 0], -(pi - 1 - r0)),
                ([pi - 1 - r0, pi - 2], r0),
                ([r0 - 1, pi - 1], 0),
            ]
        }
        NongenericCase::II => vec![
            ([1, pi - 1], -1),
            ([pi - 2, 0], -(pi - 1)),
            ([pi - 1, pi - 2], 0),
        ],
        NongenericCase::III { r1 } => {
            let r1 = r1 as i64;
            vec![
                ([pi - 1, r1 + 2], -pi),
                ([0, pi - 3 - r1], pi - 1 + pi * (1 + r1)),
                ([pi - 2, pi - 2 - r1], pi * (1 + r1)),
                ([pi - 1, r1], 0),
            ]
        }
        NongenericCase::IV => vec![
            ([pi - 1, 1], -pi),
            ([0, pi - 2], pi - 1),
            ([pi - 2, pi - 1], 0),
        ],
    };
    raw.iter()
        .map(|(r, w)| {
            SerreWeight::from_signed(p, 2, r, w + s)
                .ok_or_else(|| WeightError::OutOfRange(format!("digits {r:?}")))
        })
        .collect()
}

/// The modified weight of a nongeneric family.
pub fn modified_weight(p: u32, case: NongenericCase, s: i64) -> Result<SerreWeight, WeightError> {
    Ok(nongeneric_oracle(p, case, s)?.remove(0))
}

/// The totally irregular weight `(p-1, p-1)` when present in a weight set.
pub fn totally_irregular(set: &BTreeSet<SerreWeight>) -> Option<SerreWeight> {
    set.iter()
        .find(|w| w.r.iter().all(|&d| d == w.p - 1))
        .cloned()
}

/// Classification of an `f = 2` representation against the nongeneric families.
///
/// Returns the family together with the twist `s` such that the representation
/// equals the family member twisted by `omega_2^s`, up to conjugation.
pub fn classify_nongeneric(spec: &RepSpec) -> Option<(NongenericCase, i64)> {
    if spec.f != 2 {
        return None;
    }
    let p = spec.p;
    let q = spec.q();
    let big = q * q - 1;
    let total = spec.total_exponent();
    for case in NongenericCase::all(p) {
        let c = case.exponent(p) as u64;
        for s in 0..q - 1 {
            let e = (c + (q + 1) * s) % big;
            if e == total || (e * q) % big == total {
                return Some((case, s as i64));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u32, list: &[([u32; 2], i64)]) -> BTreeSet<SerreWeight> {
        list.iter()
            .map(|(r, w)| SerreWeight::new(p, 2, r.to_vec(), *w).unwrap())
            .collect()
    }

    #[test]
    fn digit_expansions() {
        assert_eq!(digits_base_p(7, 5, 2), vec![2, 1]);
        assert_eq!(digits_base_p(23, 5, 2), vec![3, 4]);
        assert_eq!(digits_base_p(0, 5, 2), vec![0, 0]);
    }

    #[test]
    fn case_one_weights() {
        let spec = RepSpec::new(5, 2, 2, 0, 0).unwrap();
        let got = weights_of_rep(&spec).unwrap();
        let want = set(5, &[([2, 4], -1), ([2, 0], -3), ([3, 3], 1), ([0, 4], 0)]);
        assert_eq!(got, want);
    }

    #[test]
    fn case_two_weights() {
        let spec = RepSpec::new(5, 2, 1, 0, 0).unwrap();
        let got = weights_of_rep(&spec).unwrap();
        let want = set(5, &[([1, 4], -1), ([3, 0], -4), ([4, 3], 0)]);
        assert_eq!(got, want);
    }

    #[test]
    fn generic_rep_has_four_weights() {
        let spec = RepSpec::from_digits(5, &[2, 1], 0, 0).unwrap();
        assert_eq!(weights_of_rep(&spec).unwrap().len(), 4);
    }

    #[test]
    fn reducible_spec_rejected() {
        assert_eq!(
            RepSpec::new(5, 2, 26, 0, 0),
            Err(WeightError::ReducibleSpec(26))
        );
    }

    #[test]
    fn type_weights() {
        let t = TameType::new(5, 2, 7, 0).unwrap();
        let got = weights_of_type_f2(&t).unwrap();
        let want = set(5, &[([2, 1], 0), ([1, 0], 3), ([1, 2], 10), ([2, 3], 7)]);
        assert_eq!(got, want);
        let t = TameType::new(5, 2, 5, 0).unwrap();
        assert_eq!(weights_of_type_f2(&t).unwrap().len(), 3);
        let t = TameType::new(5, 1, 1, 0).unwrap();
        assert_eq!(weights_of_type_f2(&t), Err(WeightError::NotDegreeTwo(1)));
    }

    #[test]
    fn type_digits() {
        let t = TameType::new(5, 2, 1, -5).unwrap();
        assert_eq!(t.c(), vec![1, 1]);
        assert_eq!(t.d(), vec![3, 3]);
        assert!(TameType::new(5, 2, 3, 27).is_err());
    }

    #[test]
    fn common_weights_of_first_row() {
        let spec = RepSpec::new(5, 2, 2, 0, 0).unwrap();
        let t = TameType::new(5, 2, 1, -5).unwrap();
        let got = weights_intersect(
            &weights_of_rep(&spec).unwrap(),
            &weights_of_type_f2(&t).unwrap(),
        )
        .unwrap();
        assert_eq!(got, set(5, &[([2, 0], -3), ([3, 3], 1)]));
    }

    #[test]
    fn intersect_mismatch() {
        let a = set(5, &[([0, 0], 0)]);
        let b: BTreeSet<SerreWeight> = [SerreWeight::new(7, 2, vec![0, 0], 0).unwrap()].into();
        assert_eq!(
            weights_intersect(&a, &b),
            Err(WeightError::ParameterMismatch)
        );
    }

    #[test]
    fn oracle_lists() {
        let iii = nongeneric_oracle(5, NongenericCase::III { r1: 0 }, 0).unwrap();
        assert_eq!(
            iii.into_iter().collect::<BTreeSet<_>>(),
            set(5, &[([4, 2], -5), ([0, 2], 9), ([3, 3], 5), ([4, 0], 0)])
        );
        let iv = nongeneric_oracle(5, NongenericCase::IV, 0).unwrap();
        assert_eq!(
            iv.into_iter().collect::<BTreeSet<_>>(),
            set(5, &[([4, 1], -5), ([0, 3], 4), ([3, 4], 0)])
        );
        assert!(nongeneric_oracle(5, NongenericCase::I { r0: 4 }, 0).is_err());
    }

    #[test]
    fn classification_up_to_twist_and_conjugation() {
        let spec = RepSpec::new(7, 2, 3, 5, 0).unwrap().conjugate();
        assert_eq!(
            classify_nongeneric(&spec),
            Some((NongenericCase::I { r0: 2 }, 5))
        );
        let generic = RepSpec::from_digits(7, &[2, 1], 0, 0).unwrap();
        assert_eq!(classify_nongeneric(&generic), None);
    }
}
