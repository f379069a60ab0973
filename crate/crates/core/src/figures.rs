//! Reference tables for `f = 2`: Kisin varieties and common weights.
//!
//! Family `A` has `rho = Ind(omega_4^{1+r0} nr'(theta))`, family `B` has
//! `rho = Ind(omega_4^{p(2+r1)} nr'(theta))`. Rows `A3` and `B3` are the
//! projective-line rows.

use serde::Serialize;

use crate::engeance::{Engeance, EngeanceError, Genre};
use crate::gf::{Field, GfError};
use crate::laurent::LaurentSeries;
use crate::phimod::{FrobMatrix, Mat2};
use crate::weights::{RepSpec, SerreWeight, TameType, WeightError};

/// One instance of a reference row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowInstance {
    /// Row name: `A1`, `A2`, `A3`, `B1`, `B2` or `B3`.
    pub family: &'static str,
    /// Value of `r0` (family `A`) or `r1` (family `B`).
    pub param: i64,
    pub tame_type: TameType,
    /// True for the projective-line rows.
    pub blue: bool,
}

impl RowInstance {
    /// Niveau-4 exponent of the target.
    pub fn exponent(&self) -> i64 {
        let p = self.tame_type.p as i64;
        if self.family.starts_with('A') {
            1 + self.param
        } else {
            p * (2 + self.param)
        }
    }

    /// The target representation for a given `theta` (discrete logarithm).
    pub fn target(&self, theta: u64) -> Result<RepSpec, WeightError> {
        RepSpec::new(self.tame_type.p, 2, self.exponent(), 0, theta)
    }

    /// Expected engeances over `k` for `theta` (a field code), sorted.
    pub fn expected(&self, k: &Field, theta: u32) -> Result<Vec<Engeance>, EngeanceError> {
        let ti = k.inv(theta)?;
        let single = |g: [Genre; 2]| Engeance::new(k, g.to_vec(), vec![0, 0], vec![0, 0], 1, ti);
        let mut out = match self.family {
            "A1" => vec![single([Genre::IEta, Genre::II])?],
            "A2" => vec![single([Genre::II, Genre::IEtaP])?],
            "B1" => vec![single([Genre::II, Genre::IEta])?],
            "B2" => vec![single([Genre::IEtaP, Genre::II])?],
            "A3" => {
                let mut v = vec![
                    single([Genre::IEtaP, Genre::II])?,
                    single([Genre::II, Genre::IEta])?,
                ];
                for alpha in 1..k.size() {
                    let alpha_p = k.neg(k.inv(k.mul(theta, alpha))?);
                    let a1 = k.mul(theta, k.mul(alpha, alpha));
                    v.push(Engeance::new(
                        k,
                        vec![Genre::IEtaP, Genre::IEta],
                        vec![0, a1],
                        vec![1, 0],
                        alpha,
                        alpha_p,
                    )?);
                }
                v
            }
            _ => {
                let mut v = vec![
                    single([Genre::IEta, Genre::II])?,
                    single([Genre::II, Genre::IEtaP])?,
                ];
                for alpha in 1..k.size() {
                    let alpha_p = k.neg(k.inv(k.mul(theta, alpha))?);
                    v.push(Engeance::new(
                        k,
                        vec![Genre::IEta, Genre::IEtaP],
                        vec![1, 0],
                        vec![0, k.neg(1)],
                        alpha,
                        alpha_p,
                    )?);
                }
                v
            }
        };
        out.sort();
        Ok(out)
    }

    /// The two common weights `D(t) cap D(rho)` for `theta`-independent data.
    pub fn common_weights(&self) -> Result<Vec<SerreWeight>, WeightError> {
        let p = self.tame_type.p as i64;
        let x = self.param;
        let w = |r: [i64; 2], e: i64| {
            SerreWeight::from_signed(p as u32, 2, &r, e)
                .ok_or_else(|| WeightError::OutOfRange(format!("digits {r:?}")))
        };
        let v = match self.family {
            "A1" => vec![w([p - 2 - x, 0], 1 + x - p)?, w([p - 1 - x, p - 2], x)?],
            "A2" => vec![w([p - 1 - x, p - 2], x)?, w([x - 1, p - 1], 0)?],
            "A3" => vec![w([x + 1, p - 1], -1)?, w([p - 2 - x, 0], 1 + x - p)?],
            "B1" => vec![
                w([0, p - 3 - x], -1 + p * (2 + x))?,
                w([p - 2, p - 2 - x], p * (1 + x))?,
            ],
            "B2" => vec![w([p - 2, p - 2 - x], p * (1 + x))?, w([p - 1, x], 0)?],
            _ => vec![w([p - 1, x + 2], -p)?, w([0, p - 3 - x], -1 + p * (2 + x))?],
        };
        Ok(v)
    }
}

/// All reference rows for `p`, in table order.
pub fn figure1_instances(p: u32) -> Result<Vec<RowInstance>, WeightError> {
    let pi = p as i64;
    let mut out = Vec::new();
    let mut push = |family: &'static str,
                    range: std::ops::RangeInclusive<i64>,
                    ty: &dyn Fn(i64) -> (i64, i64)|
     -> Result<(), WeightError> {
        for x in range {
            let (a, b) = ty(x);
            out.push(RowInstance {
                family,
                param: x,
                tame_type: TameType::new(p, 2, a, b)?,
                blue: family.ends_with('3'),
            });
        }
        Ok(())
    };
    push("A1", 0..=pi - 2, &|r0| (r0, -pi))?;
    push("A2", 1..=pi - 2, &|r0| (r0 - pi, 0))?;
    push("A3", 0..=pi - 3, &|r0| (1 + r0 - pi, -1))?;
    push("B1", -1..=pi - 3, &|r1| (pi * (1 + r1), -1))?;
    push("B2", 0..=pi - 3, &|r1| (-1 + pi * (1 + r1), 0))?;
    push("B3", -1..=pi - 4, &|r1| (-1 + pi * (r1 + 2), -pi))?;
    Ok(out)
}

/// A residual Frobenius matrix together with named first-order deformations.
#[derive(Clone, Debug)]
pub struct TangentFamily {
    pub name: &'static str,
    pub body: FrobMatrix,
    pub directions: Vec<(&'static str, FrobMatrix)>,
}

fn mono(k: &Field, c: u32, e: i64) -> LaurentSeries {
    LaurentSeries::monomial(k, c, e)
}

fn mat(k: &Field, entries: [Option<(u32, i64)>; 4]) -> FrobMatrix {
    let f = |x: Option<(u32, i64)>| match x {
        Some((c, e)) => mono(k, c, e),
        None => LaurentSeries::zero(k),
    };
    let [a, b, c, d] = entries;
    Mat2::new(f(a), f(b), f(c), f(d))
}

/// Point family of type `(r0, -p)`: variables `T0, X1, Y1`, with `d1 = p - 1 - r0`.
///
/// `theta` is a field code and `delta = 1/theta`.
pub fn point_family_first(k: &Field, d1: i64, theta: u32) -> Result<TangentFamily, GfError> {
    let p = k.p() as i64;
    let delta = k.inv(theta)?;
    let h = p.pow(4) + p + p * p * (d1 + 1);
    Ok(TangentFamily {
        name: "point-first",
        body: mat(k, [None, Some((delta, h)), Some((1, 0)), None]),
        directions: vec![
            ("T0", mat(k, [Some((1, p * p)), None, None, None])),
            ("X1", mat(k, [Some((1, p * p + d1)), None, None, None])),
            (
                "Y1",
                mat(
                    k,
                    [
                        None,
                        None,
                        None,
                        Some((delta, p + p.pow(4) - 1 + (p * p - 1) * d1)),
                    ],
                ),
            ),
        ],
    })
}

/// Point family of type `(r0 - p, 0)`: variables `X0, Y0, T1'`, with `d1 = p - r0`.
pub fn point_family_second(k: &Field, d1: i64, theta: u32) -> Result<TangentFamily, GfError> {
    let p = k.p() as i64;
    let delta = k.inv(theta)?;
    Ok(TangentFamily {
        name: "point-second",
        body: mat(
            k,
            [
                None,
                Some((delta, p.pow(3) + p * p + d1)),
                Some((1, 0)),
                None,
            ],
        ),
        directions: vec![
            ("X0", mat(k, [Some((1, d1)), None, None, None])),
            (
                "Y0",
                mat(
                    k,
                    [None, None, None, Some((delta, (p + 1) * (p * p - 1) + 1))],
                ),
            ),
            ("T1'", mat(k, [Some((1, p)), None, None, None])),
        ],
    })
}

/// Projective-line family: variables `X, Y, Z` on the companion-plus-tail matrix.
pub fn projective_line_family(k: &Field, d1: i64, theta: u32) -> Result<TangentFamily, GfError> {
    let p = k.p() as i64;
    let delta = k.inv(theta)?;
    let base = p.pow(3) + p * p - p;
    let tail = |e: i64| mat(k, [None, None, None, Some((1, e))]);
    Ok(TangentFamily {
        name: "projective-line",
        body: mat(
            k,
            [
                None,
                Some((delta, p.pow(3) + p * p + d1 + 2)),
                Some((1, 0)),
                None,
            ],
        ),
        directions: vec![
            ("X", tail(base)),
            ("Y", tail(base + d1)),
            ("Z", tail(base + d1 + 1)),
        ],
    })
}
