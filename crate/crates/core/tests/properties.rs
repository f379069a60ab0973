//! Randomized invariants at `p = 5`, 1000 cases each.

mod common;

use common::{
    check_determinant, check_even_zero, check_mauvais, check_phi, check_quotient, check_scaling,
    field, mauvais_type,
};
use kisinvar::engeance::{Engeance, Genre};
use kisinvar::gf::Field;
use kisinvar::laurent::LaurentSeries;
use kisinvar::weights::TameType;
use proptest::prelude::*;

const P: u32 = 5;

fn k() -> Field {
    field(P)
}

fn tame_type() -> impl Strategy<Value = TameType> {
    (0i64..24, 0i64..24)
        .prop_filter("distinct characters", |(a, b)| a != b)
        .prop_map(|(a, b)| TameType::new(P, 2, a, b).expect("valid type"))
}

fn genre() -> impl Strategy<Value = Genre> {
    prop::sample::select(Genre::ALL.to_vec())
}

fn engeance_with(genres: Vec<Genre>) -> impl Strategy<Value = Engeance> {
    (
        prop::collection::vec(0u32..25, 2),
        prop::collection::vec(0u32..25, 2),
        1u32..25,
        1u32..25,
    )
        .prop_map(move |(mut a, mut a_p, alpha, alpha_p)| {
            for (i, g) in genres.iter().enumerate() {
                match g {
                    Genre::IEta => a_p[i] = 0,
                    Genre::IEtaP => a[i] = 0,
                    Genre::II => {
                        a[i] = 0;
                        a_p[i] = 0;
                    }
                }
            }
            Engeance::new(&k(), genres.clone(), a, a_p, alpha, alpha_p).expect("valid engeance")
        })
}

fn engeance() -> impl Strategy<Value = Engeance> {
    prop::collection::vec(genre(), 2).prop_flat_map(engeance_with)
}

fn series(lo: i64, hi: i64, terms: usize) -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((lo..=hi, 0u32..25), 0..=terms)
        .prop_map(|t| LaurentSeries::from_terms(&k(), &t, None))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scaling_preserves_residual_class(e in engeance(), t in tame_type(), lambda in 1u32..25) {
        prop_assert_eq!(check_scaling(&e, &t, lambda), Ok(()));
    }

    #[test]
    fn mauvais_genre_is_reducible(
        e in prop::collection::vec(prop::sample::select(vec![Genre::IEta, Genre::IEtaP]), 2)
            .prop_flat_map(engeance_with),
        k_eta_p in 0i64..24,
    ) {
        let t = mauvais_type(P, &e.genres, k_eta_p);
        prop_assert_eq!(check_mauvais(&e, &t), Ok(()));
    }

    #[test]
    fn even_zero_is_reducible(
        genres in prop_oneof![
            Just(vec![Genre::II, Genre::II]),
            prop::collection::vec(prop::sample::select(vec![Genre::IEta, Genre::IEtaP]), 2),
        ],
        alpha in 1u32..25,
        alpha_p in 1u32..25,
        t in tame_type(),
    ) {
        let e = Engeance::new(&k(), genres, vec![0, 0], vec![0, 0], alpha, alpha_p)
            .expect("valid engeance");
        prop_assert_eq!(check_even_zero(&e, &t), Ok(()));
    }

    #[test]
    fn quotient_kills_image(
        x in series(-1250, 1250, 12),
        y in series(-8, 8, 6),
        m in -1875i64..=1875,
    ) {
        prop_assert_eq!(check_quotient(&x, &y, m), Ok(()));
    }

    #[test]
    fn phi_is_a_ring_map(
        x in series(-20, 20, 8),
        y in series(-20, 20, 8),
        i in 1u32..=4,
        cut in 0i64..30,
    ) {
        prop_assert_eq!(check_phi(&x, &y, i), Ok(()));
        prop_assert_eq!(check_phi(&x.truncate(cut), &y.truncate(cut - 10), i), Ok(()));
    }

    #[test]
    fn census_meets_determinant(t in tame_type(), theta in 1u32..25) {
        prop_assert!(check_determinant(&t, &k(), theta).is_ok());
    }

    #[test]
    fn inverse_to_window(x in series(-10, 10, 6), window in 1i64..200) {
        prop_assume!(!x.is_zero());
        let inv = x.inv(window).unwrap();
        let prod = x.mul(&inv).unwrap();
        prop_assert!(prod.agrees_with(&LaurentSeries::one(&k())));
        prop_assert!(prod.prec().is_none_or(|p| p >= window.min(x.prec().unwrap_or(i64::MAX)) - 1));
    }

    #[test]
    fn field_laws(a in 0u32..25, b in 1u32..25, c in 0u32..25) {
        let k = k();
        prop_assert_eq!(k.mul(k.div(a, b).unwrap(), b), a);
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.frobenius(k.add(a, c), 1), k.add(k.frobenius(a, 1), k.frobenius(c, 1)));
        prop_assert_eq!(k.frobenius(a, 2), a);
    }
}
