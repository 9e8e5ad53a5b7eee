use std::cmp::Ordering;

use clifford_iso::geometry::{
    cyclide_measurements, invert_point_2d, lambda1, lambda2, p1_to_p2, p2_to_p1, rho_pair_through_point,
    CyclideMeasurements, Point2, SymmetryPlane,
};
use clifford_iso::quadrature::{area_numeric, volume_numeric, Grid};
use clifford_iso::recurrence::{guess_default, known, PRecurrence};
use clifford_iso::series::{SeriesKind, SeriesTable};
use clifford_iso::Rational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..200, 1i64..50).prop_map(|(n, d)| Rational::from((n, d)))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..200, 1i64..50).prop_map(|(n, d)| Rational::from((n, d)))
}

fn roundtrip(rec: PRecurrence, init: Vec<Rational>) {
    let r = rec.order();
    let d = rec.degree();
    let count = 2 * (r + 1) * (d + 1) + r;
    let seq = rec.extend(&init[..r], count).unwrap();
    let g = guess_default(&seq, r, d).unwrap();
    assert!(g.unique, "{} candidates", g.basis.len());
    assert!(g.basis[0].equivalent(&rec), "{}", g.basis[0]);
}

proptest! {
    #[test]
    fn inversion_is_an_involution(cx in rational(), cy in rational(), x in rational(), y in rational()) {
        let c = Point2::new(cx, cy);
        let p = Point2::new(x, y);
        prop_assume!(c != p);
        let once = invert_point_2d(&c, &p).unwrap();
        prop_assert_eq!(invert_point_2d(&c, &once).unwrap(), p);
    }

    #[test]
    fn p1_p2_round_trip(r2 in positive_rational(), gap in positive_rational(), sep in positive_rational()) {
        let r1 = Rational::from(&r2 + &gap);
        let d = Rational::from(&r1 + &r2) + sep;
        let m = CyclideMeasurements::new(r1, r2, d, SymmetryPlane::P1).unwrap();
        let p2 = p1_to_p2(&m).unwrap();
        prop_assert_eq!(Rational::from(&p2.r1 + &p2.r2), m.d.clone());
        prop_assert_eq!(p2_to_p1(&p2).unwrap(), m);
    }

    #[test]
    fn rho_pair_product(rho in 0.01f64..5.0, z in -3.0f64..3.0, major in 1.05f64..4.0) {
        let (hi, lo) = rho_pair_through_point(rho, z, major).unwrap();
        prop_assert!(hi >= lo);
        prop_assert!((hi * lo / (major * major - 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurements_satisfy_their_invariants(t in 0.0f64..1.0, major in 1.05f64..4.0) {
        let rho = t * (major * major - 1.0).sqrt();
        prop_assume!((rho - (major - 1.0)).abs() > 1e-6);
        let m = cyclide_measurements(rho, major).unwrap();
        prop_assert!(m.r1 >= m.r2 && m.r2 > 0.0);
        prop_assert!(m.d > m.r1 + m.r2);
    }

    #[test]
    fn table_json_round_trip(terms in prop::collection::vec(rational(), 1..20)) {
        let mut terms = terms;
        terms[0] = Rational::from(4);
        let t = SeriesTable::new(SeriesKind::Area, terms);
        prop_assert_eq!(SeriesTable::from_json(&t.to_json().unwrap()).unwrap(), t);
    }

    #[test]
    fn quadrature_values_are_finite(a in 0.0f64..0.3, n in 4usize..40) {
        let grid = Grid::new(2 * n, 2 * n, n).unwrap();
        for r in [area_numeric(a, grid).unwrap(), volume_numeric(a, grid).unwrap()] {
            prop_assert!(r.value.is_finite() && r.value > 0.0);
            prop_assert!(r.error_estimate >= 0.0 && r.error_estimate.is_finite());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn guess_inverts_extend_order_three(init in prop::collection::vec(positive_rational(), 3)) {
        roundtrip(known::area(), init.clone());
        roundtrip(known::volume(), init);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn guess_inverts_extend_order_seven(init in prop::collection::vec(positive_rational(), 7)) {
        roundtrip(known::dseq(), init);
    }
}

#[test]
fn lambdas_are_monotone_on_dense_grids() {
    for major in [1.2, std::f64::consts::SQRT_2, 2.0, 3.5] {
        let (lo, top) = (major - 1.0, (major * major - 1.0f64).sqrt());
        let l1: Vec<f64> = (0..1000).map(|i| lambda1(lo * i as f64 / 1000.0, major).unwrap()).collect();
        assert!(l1.windows(2).all(|w| w[1] > w[0]), "R = {major}");
        assert_eq!(l1[0], 1.0);
        let l2: Vec<f64> = (1..1000).map(|i| lambda2(lo + (top - lo) * i as f64 / 1000.0, major).unwrap()).collect();
        assert!(l2.windows(2).all(|w| w[1] < w[0]), "R = {major}");
        assert!(l2[998] > 1.0 && l2[998] < 1.01);
    }
}

#[test]
fn leading_polynomials_are_positive() {
    for rec in [known::area(), known::volume(), known::dseq()] {
        let r = rec.order();
        assert!(rec.coeffs()[r].iter().all(|c| c.cmp0() == Ordering::Greater));
        assert!((0..=10_000).all(|n| rec.poly_eval(r, n).cmp0() == Ordering::Greater));
    }
}

#[test]
fn characteristic_polynomials_are_palindromic() {
    for rec in [known::area(), known::volume(), known::dseq()] {
        let p = rec.characteristic_poly().unwrap();
        let deg = p.len() - 1;
        assert!((0..=deg).all(|i| p[i] == -p[deg - i].clone()), "{p:?}");
    }
}
