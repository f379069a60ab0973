//! Independent transcriptions of the reference tables and shared property checks.
#![allow(dead_code)]

use std::collections::BTreeSet;

use kisinvar::engeance::{census, Engeance, EngeanceError, Genre};
use kisinvar::ext1::{quotient_reduce, Ext1Class};
use kisinvar::gf::{Field, GaloisField};
use kisinvar::laurent::LaurentSeries;
use kisinvar::phimod::{mauvais_genre_check, residual_class, FrobMatrix, Mat2};
use kisinvar::weights::{SerreWeight, TameType};
use rand::Rng;

/// The coefficient field `GF(p^2)`.
pub fn field(p: u32) -> Field {
    GaloisField::new(p, 2).expect("valid field")
}

/// A weight `(r0, r1) (x) det^w`, panicking on out-of-range digits.
pub fn weight(p: u32, r: [i64; 2], w: i64) -> SerreWeight {
    SerreWeight::from_signed(p, 2, &r, w)
        .unwrap_or_else(|| panic!("digits {r:?} out of range for p = {p}"))
}

/// A nongeneric family: `(label, parameter)`, with `parameter` unused for ii and iv.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub label: &'static str,
    pub param: i64,
}

impl Family {
    /// Every valid family member for `p`.
    pub fn all(p: u32) -> Vec<Family> {
        let p = p as i64;
        let mut out: Vec<Family> = (1..=p - 2)
            .map(|r0| Family {
                label: "i",
                param: r0,
            })
            .collect();
        out.push(Family {
            label: "ii",
            param: 0,
        });
        out.extend((0..=p - 3).map(|r1| Family {
            label: "iii",
            param: r1,
        }));
        out.push(Family {
            label: "iv",
            param: 0,
        });
        out
    }

    /// Niveau-4 exponent of the untwisted member.
    pub fn exponent(&self, p: u32) -> i64 {
        let p = p as i64;
        match self.label {
            "i" => 1 + self.param,
            "ii" => 1,
            "iii" => p * (2 + self.param),
            _ => p,
        }
    }

    /// True for ii and iv.
    pub fn totally_nongeneric(&self) -> bool {
        matches!(self.label, "ii" | "iv")
    }

    /// Weight list, modified weight first, then its symmetric, twisted by `det^s`.
    pub fn weights(&self, p: u32, s: i64) -> Vec<SerreWeight> {
        let pi = p as i64;
        let x = self.param;
        let raw: Vec<([i64; 2], i64)> = match self.label {
            "i" => vec![
                ([x + 1, pi - 1], -1),
                ([pi - 2 - x, 0], -(pi - 1 - x)),
                ([pi - 1 - x, pi - 2], x),
                ([x - 1, pi - 1], 0),
            ],
            "ii" => vec![
                ([1, pi - 1], -1),
                ([pi - 2, 0], -(pi - 1)),
                ([pi - 1, pi - 2], 0),
            ],
            "iii" => vec![
                ([pi - 1, x + 2], -pi),
                ([0, pi - 3 - x], pi - 1 + pi * (1 + x)),
                ([pi - 2, pi - 2 - x], pi * (1 + x)),
                ([pi - 1, x], 0),
            ],
            _ => vec![
                ([pi - 1, 1], -pi),
                ([0, pi - 2], pi - 1),
                ([pi - 2, pi - 1], 0),
            ],
        };
        raw.into_iter().map(|(r, w)| weight(p, r, w + s)).collect()
    }
}

/// Total niveau-4 exponent of `Ind(omega_4^c) (x) omega_2^s`.
pub fn total_exponent(p: u32, c: i64, s: i64) -> i64 {
    let q = (p * p) as i64;
    (c + (q + 1) * s).rem_euclid(q * q - 1)
}

/// Locates an irreducible representation with total exponent `e` among the nongeneric families.
pub fn nongeneric_family(p: u32, e: i64) -> Option<(Family, i64)> {
    let q = (p * p) as i64;
    let n = q * q - 1;
    let e = e.rem_euclid(n);
    for fam in Family::all(p) {
        for s in 0..q - 1 {
            let x = total_exponent(p, fam.exponent(p), s);
            if x == e || (x * q) % n == e {
                return Some((fam, s));
            }
        }
    }
    None
}

/// One row of the engeance table for `f = 2`.
#[derive(Clone, Debug)]
pub struct Figure1Row {
    pub name: &'static str,
    pub param: i64,
    /// `(eta, eta')` as powers of `omega_2`.
    pub eta: (i64, i64),
    /// The `d` column.
    pub d: (i64, i64),
    /// Exponent of the target `Ind(omega_4^c nr'(theta))`.
    pub target: i64,
    pub blue: bool,
}

/// The rows of the engeance table for `p`.
pub fn figure1_rows(p: u32) -> Vec<Figure1Row> {
    let p = p as i64;
    let mut rows = Vec::new();
    for r0 in 0..=p - 2 {
        rows.push(Figure1Row {
            name: "A1",
            param: r0,
            eta: (r0, -p),
            d: (p - 2, p - 1 - r0),
            target: 1 + r0,
            blue: false,
        });
    }
    for r0 in 1..=p - 2 {
        rows.push(Figure1Row {
            name: "A2",
            param: r0,
            eta: (r0 - p, 0),
            d: (0, p - r0),
            target: 1 + r0,
            blue: false,
        });
    }
    for r0 in 0..=p - 3 {
        rows.push(Figure1Row {
            name: "A3",
            param: r0,
            eta: (1 + r0 - p, -1),
            d: (0, p - 2 - r0),
            target: 1 + r0,
            blue: true,
        });
    }
    for r1 in -1..=p - 3 {
        rows.push(Figure1Row {
            name: "B1",
            param: r1,
            eta: (p * (1 + r1), -1),
            d: (p - 2 - r1, p - 2),
            target: p * (2 + r1),
            blue: false,
        });
    }
    for r1 in 0..=p - 3 {
        rows.push(Figure1Row {
            name: "B2",
            param: r1,
            eta: (-1 + p * (1 + r1), 0),
            d: (p - 1 - r1, 0),
            target: p * (2 + r1),
            blue: false,
        });
    }
    for r1 in -1..=p - 4 {
        rows.push(Figure1Row {
            name: "B3",
            param: r1,
            eta: (-1 + p * (r1 + 2), -p),
            d: (p - 3 - r1, 0),
            target: p * (2 + r1),
            blue: true,
        });
    }
    rows
}

impl Figure1Row {
    pub fn tame_type(&self, p: u32) -> TameType {
        TameType::new(p, 2, self.eta.0, self.eta.1).expect("valid type")
    }

    /// The listed engeances for `theta` (a field code), sorted.
    pub fn engeances(&self, k: &Field, theta: u32) -> Vec<Engeance> {
        use Genre::{IEta, IEtaP, II};
        let ti = k.inv(theta).expect("theta nonzero");
        let point = |g: [Genre; 2]| {
            Engeance::new(k, g.to_vec(), vec![0, 0], vec![0, 0], 1, ti).expect("valid engeance")
        };
        let (isolated, family) = match self.name {
            "A1" => (vec![[IEta, II]], None),
            "A2" => (vec![[II, IEtaP]], None),
            "B1" => (vec![[II, IEta]], None),
            "B2" => (vec![[IEtaP, II]], None),
            "A3" => (vec![[IEtaP, II], [II, IEta]], Some([IEtaP, IEta])),
            _ => (vec![[IEta, II], [II, IEtaP]], Some([IEta, IEtaP])),
        };
        let mut out: Vec<Engeance> = isolated.into_iter().map(point).collect();
        if let Some(g) = family {
            for alpha in 1..k.size() {
                let alpha_p = k.neg(k.inv(k.mul(theta, alpha)).expect("nonzero"));
                let (a, a_p) = if self.name == "A3" {
                    // (a'_0, a_1) = (1, theta alpha^2)
                    (vec![0, k.mul(theta, k.mul(alpha, alpha))], vec![1, 0])
                } else {
                    // (a_0, a'_1) = (1, -1)
                    (vec![1, 0], vec![0, k.neg(1)])
                };
                out.push(Engeance::new(k, g.to_vec(), a, a_p, alpha, alpha_p).expect("valid"));
            }
        }
        out.sort();
        out
    }

    /// The two weights of the common-weight table, modified weight first on blue rows.
    pub fn common_weights(&self, p: u32) -> BTreeSet<SerreWeight> {
        let pi = p as i64;
        let x = self.param;
        let list = match self.name {
            "A1" => [
                weight(p, [pi - 2 - x, 0], 1 + x - pi),
                weight(p, [pi - 1 - x, pi - 2], x),
            ],
            "A2" => [
                weight(p, [pi - 1 - x, pi - 2], x),
                weight(p, [x - 1, pi - 1], 0),
            ],
            "A3" => [
                weight(p, [x + 1, pi - 1], -1),
                weight(p, [pi - 2 - x, 0], 1 + x - pi),
            ],
            "B1" => [
                weight(p, [0, pi - 3 - x], -1 + pi * (2 + x)),
                weight(p, [pi - 2, pi - 2 - x], pi * (1 + x)),
            ],
            "B2" => [
                weight(p, [pi - 2, pi - 2 - x], pi * (1 + x)),
                weight(p, [pi - 1, x], 0),
            ],
            _ => [
                weight(p, [pi - 1, x + 2], -pi),
                weight(p, [0, pi - 3 - x], -1 + pi * (2 + x)),
            ],
        };
        list.into_iter().collect()
    }
}

/// A class with one term in the first coordinate.
pub fn first_only(c: u32, e: i64) -> Ext1Class {
    Ext1Class {
        first: [(e, c)].into_iter().collect(),
        second: Default::default(),
    }
}

/// Images of the point family of type `(r0, -p)` with `d1 = p - 1 - r0`: `T0, X1, Y1`.
pub fn point_first_images(p: u32, theta: u32, d1: i64) -> Vec<Ext1Class> {
    let p = p as i64;
    vec![
        first_only(theta, -p - p * p * (d1 + 1)),
        first_only(theta, -p - p * p),
        first_only(1, -p * p - d1 - 1),
    ]
}

/// Images of the point family of type `(r0 - p, 0)` with `d1 = p - r0`: `X0, Y0, T1'`.
pub fn point_second_images(p: u32, theta: u32, d1: i64) -> Vec<Ext1Class> {
    let p = p as i64;
    vec![
        first_only(theta, -1 - p),
        first_only(1, -d1 - p),
        first_only(theta, -d1 - p * p),
    ]
}

/// Images of the projective-line family with `d1 = p - 2 - r0`: `X, Y, Z`.
pub fn projective_line_images(p: u32, theta: u32, d1: i64) -> Vec<Ext1Class> {
    let p = p as i64;
    vec![
        first_only(theta, -p - d1 - 2),
        first_only(theta, -p - 2),
        first_only(theta, -p - 1),
    ]
}

/// Uniformly random nonzero field code.
pub fn unit(rng: &mut impl Rng, k: &Field) -> u32 {
    rng.random_range(1..k.size())
}

/// Uniformly random field code.
pub fn elem(rng: &mut impl Rng, k: &Field) -> u32 {
    rng.random_range(0..k.size())
}

/// A random type for `(p, 2)`.
pub fn random_type(rng: &mut impl Rng, p: u32) -> TameType {
    let n = (p * p - 1) as i64;
    loop {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            return TameType::new(p, 2, a, b).expect("valid type");
        }
    }
}

/// A random genre sequence of length 2.
pub fn random_genres(rng: &mut impl Rng) -> Vec<Genre> {
    (0..2).map(|_| Genre::ALL[rng.random_range(0..3)]).collect()
}

/// A random engeance with the given genres: free parameters uniform, `alpha, alpha'` units.
pub fn random_engeance(rng: &mut impl Rng, k: &Field, genres: Vec<Genre>) -> Engeance {
    let mut a = vec![0; genres.len()];
    let mut a_p = vec![0; genres.len()];
    for (i, g) in genres.iter().enumerate() {
        match g {
            Genre::IEta => a[i] = elem(rng, k),
            Genre::IEtaP => a_p[i] = elem(rng, k),
            Genre::II => {}
        }
    }
    let (alpha, alpha_p) = (unit(rng, k), unit(rng, k));
    Engeance::new(k, genres, a, a_p, alpha, alpha_p).expect("valid engeance")
}

/// A random exact Laurent polynomial with exponents in `lo..=hi`.
pub fn random_series(
    rng: &mut impl Rng,
    k: &Field,
    lo: i64,
    hi: i64,
    terms: usize,
) -> LaurentSeries {
    let list: Vec<(i64, u32)> = (0..terms)
        .map(|_| (rng.random_range(lo..=hi), elem(rng, k)))
        .collect();
    let mut acc = LaurentSeries::zero(k);
    for (e, c) in list {
        acc = acc
            .add(&LaurentSeries::monomial(k, c, e))
            .expect("same field");
    }
    acc
}

/// A random element of `GL_2(k[v])` with its exact inverse.
///
/// The matrix is `[[1, b], [0, 1]] [[1, 0], [c, 1]] diag(u, u')` for random
/// polynomials `b, c` of degree at most `deg` and units `u, u'`.
pub fn random_gl2(rng: &mut impl Rng, k: &Field, deg: i64) -> (FrobMatrix, FrobMatrix) {
    let one = LaurentSeries::one(k);
    let zero = LaurentSeries::zero(k);
    let b = random_series(rng, k, 0, deg, 3);
    let c = random_series(rng, k, 0, deg, 3);
    let (u, u_p) = (unit(rng, k), unit(rng, k));
    let upper = |x: &LaurentSeries| Mat2::new(one.clone(), x.clone(), zero.clone(), one.clone());
    let lower = |x: &LaurentSeries| Mat2::new(one.clone(), zero.clone(), x.clone(), one.clone());
    let diag = |x: u32, y: u32| {
        Mat2::new(
            LaurentSeries::monomial(k, x, 0),
            zero.clone(),
            zero.clone(),
            LaurentSeries::monomial(k, y, 0),
        )
    };
    let inv = |x: u32| k.inv(x).expect("unit");
    let x = upper(&b)
        .mul(&lower(&c))
        .and_then(|m| m.mul(&diag(u, u_p)))
        .expect("same field");
    let x_inv = diag(inv(u), inv(u_p))
        .mul(&lower(&c.neg()))
        .and_then(|m| m.mul(&upper(&b.neg())))
        .expect("same field");
    (x, x_inv)
}

/// Rescaling never changes the residual class.
pub fn check_scaling(e: &Engeance, t: &TameType, lambda: u32) -> Result<(), String> {
    let before = residual_class(&e.frobenius(t).map_err(|x| x.to_string())?, 2)
        .map_err(|x| x.to_string())?
        .map(|r| r.class);
    let scaled = e.rescale(lambda).map_err(|x| x.to_string())?;
    let after = residual_class(&scaled.frobenius(t).map_err(|x| x.to_string())?, 2)
        .map_err(|x| x.to_string())?
        .map(|r| r.class);
    if before != after {
        return Err(format!("{e} scaled by {lambda}: {before:?} vs {after:?}"));
    }
    Ok(())
}

/// The type making a II-free genre sequence excluded, built from the digit pattern.
///
/// `kEtaP` is free; `kEta - kEtaP` has digits fixed by consecutive genres.
pub fn mauvais_type(p: u32, genres: &[Genre], k_eta_p: i64) -> TameType {
    let want = |prev: Genre, cur: Genre| -> i64 {
        match (prev, cur) {
            (Genre::IEta, Genre::IEta) => 1,
            (Genre::IEta, Genre::IEtaP) => 0,
            (Genre::IEtaP, Genre::IEtaP) => p as i64 - 2,
            (Genre::IEtaP, Genre::IEta) => p as i64 - 1,
            _ => panic!("genre II in a mauvais sequence"),
        }
    };
    // digit c_{1-i} is fixed by (genre_{i-1}, genre_i)
    let c1 = want(genres[1], genres[0]);
    let c0 = want(genres[0], genres[1]);
    let c = c0 + p as i64 * c1;
    TameType::new(p, 2, k_eta_p + c, k_eta_p).expect("valid type")
}

/// Excluded genre sequences give reducible residual representations.
pub fn check_mauvais(e: &Engeance, t: &TameType) -> Result<(), String> {
    if !mauvais_genre_check(&e.genres, t) {
        return Err(format!("{:?} not flagged for type {t:?}", e.genres));
    }
    let res = residual_class(&e.frobenius(t).map_err(|x| x.to_string())?, 2)
        .map_err(|x| x.to_string())?;
    if res.is_some() {
        return Err(format!("{e} of type {t:?} is irreducible"));
    }
    Ok(())
}

/// An even number of genre II factors with all parameters zero is reducible and not normalizable.
pub fn check_even_zero(e: &Engeance, t: &TameType) -> Result<(), String> {
    let res = residual_class(&e.frobenius(t).map_err(|x| x.to_string())?, 2)
        .map_err(|x| x.to_string())?;
    if res.is_some() {
        return Err(format!("{e} of type {t:?} is irreducible"));
    }
    match e.canonicalize() {
        Err(EngeanceError::NotNormalizable) => Ok(()),
        other => Err(format!("{e}: canonicalize gave {other:?}")),
    }
}

fn map_to_series(k: &Field, m: &std::collections::BTreeMap<i64, u32>) -> LaurentSeries {
    let terms: Vec<(i64, u32)> = m.iter().map(|(&e, &c)| (e, c)).collect();
    LaurentSeries::from_terms(k, &terms, None)
}

/// `v^m phi(y) - y` reduces to zero and reduction is idempotent, with `phi: v -> v^{q^2}`.
pub fn check_quotient(x: &LaurentSeries, y: &LaurentSeries, m: i64) -> Result<(), String> {
    let k = x.field();
    let q = (k.p() * k.p()) as u64;
    let image = y.phi_sub(4).shift(m).sub(y).map_err(|e| e.to_string())?;
    let r = quotient_reduce(&image, m, q).map_err(|e| e.to_string())?;
    if !r.is_empty() {
        return Err(format!("image of {y:?} reduces to {r:?} for m = {m}"));
    }
    let once = quotient_reduce(x, m, q).map_err(|e| e.to_string())?;
    let twice = quotient_reduce(&map_to_series(k, &once), m, q).map_err(|e| e.to_string())?;
    if once != twice {
        return Err(format!("not idempotent: {once:?} vs {twice:?}"));
    }
    let sum = quotient_reduce(&x.add(&image).map_err(|e| e.to_string())?, m, q)
        .map_err(|e| e.to_string())?;
    if sum != once {
        return Err(format!("reduction of x + image differs for m = {m}"));
    }
    Ok(())
}

/// `phi(x y) = phi(x) phi(y)` and `phi(x + y) = phi(x) + phi(y)` for `phi: v -> v^{p^i}`.
pub fn check_phi(x: &LaurentSeries, y: &LaurentSeries, i: u32) -> Result<(), String> {
    let err = |e: kisinvar::laurent::LaurentError| e.to_string();
    let lhs = x.mul(y).map_err(err)?.phi_sub(i);
    let rhs = x.phi_sub(i).mul(&y.phi_sub(i)).map_err(err)?;
    if lhs != rhs {
        return Err(format!("phi not multiplicative on {x:?}, {y:?}"));
    }
    let lhs = x.add(y).map_err(err)?.phi_sub(i);
    let rhs = x.phi_sub(i).add(&y.phi_sub(i)).map_err(err)?;
    if lhs != rhs {
        return Err(format!("phi not additive on {x:?}, {y:?}"));
    }
    Ok(())
}

/// Every enumerated engeance satisfies `alpha alpha' = (-1)^{|II| + 1} / theta`.
pub fn check_determinant(t: &TameType, k: &Field, theta: u32) -> Result<usize, String> {
    let entries = census(t, k, theta).map_err(|e| e.to_string())?;
    let ti = k.inv(theta).map_err(|e| e.to_string())?;
    for entry in &entries {
        let e = &entry.engeance;
        let sign = if (e.count_ii() + 1) % 2 == 0 {
            ti
        } else {
            k.neg(ti)
        };
        if k.mul(e.alpha, e.alpha_p) != sign || !e.satisfies_determinant(theta) {
            return Err(format!("{e} violates the determinant for theta = {theta}"));
        }
    }
    Ok(entries.len())
}
