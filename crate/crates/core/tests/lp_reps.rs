use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qdlab::linops::{lambda_apply, FinVector};
use qdlab::lp_reps::*;
use qdlab::words::{w, FreeGroup, Letter, ReducedWord};
use qdlab::C64;

const Z_GRID: [f64; 5] = [0.0, 0.3, 0.577_350_269_189_625_8, 0.9, 1.0];

fn params(z: f64) -> PsParams<f64> {
    PsParams::new(z, 2, 10).unwrap()
}

fn dist(u: &FinVector<f64>, v: &FinVector<f64>) -> f64 {
    (u - v).norm()
}

fn a() -> Letter {
    Letter::new(1, false).unwrap()
}

#[test]
fn generator_on_identity() {
    for z in Z_GRID {
        let v = pi_z_apply(&params(z), a(), &FinVector::delta(ReducedWord::identity()));
        let expected = FinVector::from_entries([
            (w("a"), C64::new((1.0 - z * z).sqrt(), 0.0)),
            (w("e"), C64::new(z, 0.0)),
        ]);
        assert!(dist(&v, &expected) < 1e-15);
    }
}

#[test]
fn generic_case_is_translation() {
    let v = pi_z_apply(&params(0.4), a(), &FinVector::delta(w("b")));
    assert_eq!(v, FinVector::delta(w("ab")));
}

#[test]
fn pi_zero_is_left_regular() {
    let p = params(0.0);
    for x in FreeGroup::new(2).unwrap().ball(3) {
        for l in FreeGroup::new(2).unwrap().letters() {
            let g = ReducedWord::from_letters([l]);
            let lhs = pi_z_apply(&p, l, &FinVector::delta(x.clone()));
            let rhs = lambda_apply(&g, &FinVector::delta(x.clone()));
            assert!(dist(&lhs, &rhs) == 0.0, "{l:?} {x}");
        }
    }
}

#[test]
fn homomorphism_on_short_words() {
    let group = FreeGroup::new(2).unwrap();
    let words = group.ball(3);
    let xs = group.ball(2);
    for z in [0.3, 0.8] {
        let p = params(z);
        for s in &words {
            for t in &words {
                let st = s * t;
                for x in &xs {
                    let v = FinVector::delta(x.clone());
                    let lhs = pi_z_word(&p, s, &pi_z_word(&p, t, &v));
                    let rhs = pi_z_word(&p, &st, &v);
                    assert!(dist(&lhs, &rhs) < 1e-12, "z={z} s={s} t={t} x={x}");
                }
            }
        }
    }
}

#[test]
fn matrix_coefficients_are_radial() {
    let group = FreeGroup::new(2).unwrap();
    for z in Z_GRID {
        let p = params(z);
        for t in group.ball(5) {
            let c = matrix_coefficient(&p, &t).unwrap();
            assert_abs_diff_eq!(c.re, z.powi(t.len() as i32), epsilon = 1e-12);
            assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-12);
        }
    }
    let c = matrix_coefficient(&params(0.5), &w("Ab")).unwrap();
    assert_abs_diff_eq!(c.re, 0.25, epsilon = 1e-15);
    let c = matrix_coefficient(&params(0.7), &w("e")).unwrap();
    assert_eq!(c, C64::new(1.0, 0.0));
}

#[test]
fn matrix_coefficient_respects_window() {
    let p = PsParams::new(0.5, 2, 2).unwrap();
    assert!(matches!(
        matrix_coefficient(&p, &w("aba")),
        Err(LpError::WindowExceeded { len: 3, .. })
    ));
}

#[test]
fn z_outside_unit_interval_is_rejected() {
    assert!(PsParams::new(1.2, 2, 2).is_err());
    assert!(PsParams::new(-0.1, 2, 2).is_err());
    assert!(PsParams::new(f64::NAN, 2, 2).is_err());
}

#[test]
fn generator_gap_matches_closed_form() {
    for k in 0..=10 {
        let z = k as f64 / 10.0;
        assert_abs_diff_eq!(generator_gap(z), (2.0 - 2.0 * z).sqrt(), epsilon = 1e-12);
    }
    assert_abs_diff_eq!(generator_gap(1.0), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(generator_gap(0.5), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(generator_gap(0.0), 2f64.sqrt(), epsilon = 1e-12);
}

#[test]
fn generator_gap_is_the_window_difference() {
    // The difference of compressions equals the operator difference on B_1.
    let group = FreeGroup::new(2).unwrap();
    let (rows, cols) = (group.ball(2), group.ball(1));
    for z in [0.0, 0.25, 0.9] {
        let pz = qdlab::linops::compress(&PiZ { params: params(z), letter: a() }, &rows, &cols).unwrap();
        let p1 = qdlab::linops::compress(&PiZ { params: params(1.0), letter: a() }, &rows, &cols).unwrap();
        let n = qdlab::linops::operator_norm_dense(&pz.matrix.sub(&p1.matrix)).unwrap();
        assert_abs_diff_eq!(n, (2.0 - 2.0 * z).sqrt(), epsilon = 1e-12);
    }
}

#[test]
fn haagerup_gram_is_psd() {
    let g = haagerup_gram(0.5, 2, 2).unwrap();
    assert_eq!(g.matrix.shape(), (17, 17));
    for i in 0..17 {
        assert_eq!(g.matrix[(i, i)], C64::new(1.0, 0.0));
    }
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let m = haagerup_min_eigenvalue(r, 3, 2).unwrap();
        assert!(m >= -1e-10, "r={r}: {m}");
    }
}

#[test]
fn haagerup_gram_tends_to_identity() {
    let g = haagerup_gram(1e-9, 2, 2).unwrap();
    let off = g.matrix.sub(&qdlab::linops::DenseMatrix::identity(17)).max_abs();
    assert!(off < 1e-8);
    assert!(haagerup_gram(1.0, 2, 2).is_err());
    assert!(haagerup_gram(0.0, 2, 2).is_err());
}

#[test]
fn lp_norm_membership() {
    let edge = 3f64.powf(-0.5);
    assert!(lp_radial_norm(edge * 0.999, 2.0, 2).is_finite());
    assert_eq!(lp_radial_norm(edge, 2.0, 2), LpNorm::Divergent);
    assert_eq!(lp_radial_norm(0.0, 2.0, 2), LpNorm::Finite(1.0));
}

#[test]
fn lp_norm_matches_partial_sums() {
    // The ball(40) truncation error is ~ratio^41, so a direct 1e-8 match
    // needs ratio ≤ 0.6; closer to the boundary the remainder is checked
    // against the geometric tail instead.
    for d in [2u16, 3] {
        let q = 2.0 * d as f64 - 1.0;
        for p in [1.0, 2.0, 3.5, 8.0] {
            for k in 1..=9 {
                let ratio = 0.1 * k as f64;
                let z = (ratio / q).powf(1.0 / p);
                let LpNorm::Finite(closed) = lp_radial_norm(z, p, d) else {
                    panic!("divergent at z={z}");
                };
                let partial = lp_radial_partial_norm(z, p, d, 40);
                assert!(partial <= closed * (1.0 + 1e-14));
                if ratio <= 0.6 + 1e-12 {
                    assert!((closed - partial).abs() <= 1e-8 * closed, "d={d} p={p} z={z}");
                }
                let tail = 2.0 * d as f64 * z.powf(p) * ratio.powi(40) / (1.0 - ratio);
                let rebuilt = (partial.powf(p) + tail).powf(1.0 / p);
                assert!((closed - rebuilt).abs() <= 1e-12 * closed, "d={d} p={p} z={z}");
            }
        }
    }
}

#[test]
fn sphere_sums_match_enumerated_ball() {
    for (z, p) in [(0.4, 2.0), (0.7, 3.0), (0.2, 1.0)] {
        let a = lp_radial_partial_norm(z, p, 2, 6);
        let b = lp_radial_ball_sum(z, p, 2, 6).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }
}

#[test]
fn qd_bound_values_and_monotonicity() {
    let two = Exponent::Finite(2.0);
    assert_abs_diff_eq!(qd_upper_bound(two, 2).unwrap(), 0.9194016867619662, epsilon = 1e-12);
    assert_eq!(qd_upper_bound(Exponent::Infinity, 2).unwrap(), 0.0);
    let values: Vec<f64> = (2..=64)
        .map(|p| qd_upper_bound(Exponent::Finite(p as f64), 2).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(qd_upper_bound(Exponent::Finite(4096.0), 2).unwrap() < 0.05);
    for p in [2.0, 3.0, 10.0] {
        for d in [2u16, 3] {
            let z = (2.0 * d as f64 - 1.0).powf(-1.0 / p);
            assert_abs_diff_eq!(
                qd_upper_bound(Exponent::Finite(p), d).unwrap(),
                generator_gap(z),
                epsilon = 1e-12
            );
        }
    }
}

#[test]
fn cb_bound_values_and_limits() {
    let params = BoundParams::new(Exponent::Finite(2.0), Exponent::Infinity, 2).unwrap();
    assert_abs_diff_eq!(cb_upper_bound(&params), 2.838803373523932, epsilon = 1e-12);
    assert_eq!(params.conjugate_exponent(), Exponent::Finite(2.0));
    // q → p on a shrinking grid
    let mut last = f64::INFINITY;
    for k in 1..=12 {
        let q = 3.0 + 2f64.powi(-k);
        let b = cb_upper_bound(&BoundParams::new(Exponent::Finite(3.0), Exponent::Finite(q), 2).unwrap());
        assert!(b < last && b > 1.0);
        last = b;
    }
    assert!(last - 1.0 < 0.05);
    // increasing in q
    let qs: Vec<f64> = (0..40).map(|k| 2.5 + 0.5 * k as f64).collect();
    let vals: Vec<f64> = qs
        .iter()
        .map(|&q| cb_upper_bound(&BoundParams::new(Exponent::Finite(2.0), Exponent::Finite(q), 3).unwrap()))
        .collect();
    assert!(vals.windows(2).all(|w| w[1] > w[0]));
    let at_inf = cb_upper_bound(&BoundParams::new(Exponent::Finite(2.0), Exponent::Infinity, 3).unwrap());
    assert!(vals.last().unwrap() < &at_inf);
    // rejects p ≥ q
    assert!(BoundParams::new(Exponent::Finite(4.0), Exponent::Finite(3.0), 2).is_err());
    assert!(BoundParams::new(Exponent::Infinity, Exponent::Infinity, 2).is_err());
}

#[test]
fn bound_table_rows() {
    let ps = [Exponent::Finite(2.0), Exponent::Finite(4.0)];
    let qs = [Exponent::Finite(4.0), Exponent::Infinity];
    let rows = bound_table(2, &ps, &qs).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[2].p, rows[2].q), (Exponent::Finite(4.0), Exponent::Infinity));
}

#[test]
fn level_one_inequality_holds() {
    for z in [0.0, 0.5, 0.9] {
        for s in level_one_samples(z, 2, 2, 8, 7).unwrap() {
            assert!(s.holds(), "z={z}: {s:?}");
        }
    }
}

proptest! {
    #[test]
    fn isometry_on_random_vectors(
        entries in prop::collection::vec((0usize..17, -1.0f64..1.0, -1.0f64..1.0), 1..10),
        zi in 0usize..5,
        li in 0usize..4,
    ) {
        let ball = FreeGroup::new(2).unwrap().ball(2);
        let v = FinVector::from_entries(entries.iter().map(|&(i, re, im)| (ball[i].clone(), C64::new(re, im))));
        let l = FreeGroup::new(2).unwrap().letters().nth(li).unwrap();
        let u = pi_z_apply(&params(Z_GRID[zi]), l, &v);
        prop_assert!((u.norm() - v.norm()).abs() < 1e-12);
    }
}
