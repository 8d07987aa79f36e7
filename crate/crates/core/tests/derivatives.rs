//! Analytic derivatives against central finite differences of the values they
//! differentiate, plus algebraic identities of the model.

use proptest::prelude::*;
use relayopt_core::model::{
    approx_error, approx_error_dm1, exact_error, g_prime, g_second, g_value, hop_errors,
    log_surrogate, q_function, rate_penalty, rate_penalty_dm2,
};
use relayopt_core::{Hop, ScenarioParams};

fn reference() -> ScenarioParams {
    ScenarioParams::reference()
}

/// `|a - b| <= rel * |b|`, or `<= floor` when `b` is tiny against `scale`.
fn close(analytic: f64, numeric: f64, rel: f64, scale: f64) -> bool {
    let floor = 1e-12 * scale;
    if numeric.abs() <= floor {
        (analytic - numeric).abs() <= floor
    } else {
        (analytic - numeric).abs() <= rel * numeric.abs()
    }
}

/// Hop error held in whichever tail is small: `Q(f)` when `f >= 0`, else the
/// complement `Q(-f) = 1 - eps`. Differences of the small side keep full
/// relative precision where the error itself saturates near one.
fn small_tail(p: &ScenarioParams, x: f64, m: f64, hop: Hop, sign: f64) -> f64 {
    let gamma = p.snr(x, hop).unwrap();
    q_function(sign * rate_penalty(gamma, m, p.packet_bits as f64).unwrap())
}

fn tail_sign(p: &ScenarioParams, x: f64, m: f64, hop: Hop) -> f64 {
    let gamma = p.snr(x, hop).unwrap();
    if rate_penalty(gamma, m, p.packet_bits as f64).unwrap() >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Five-point central stencils for the first and second derivative.
fn stencil(t: impl Fn(f64) -> f64, h: f64) -> (f64, f64, f64) {
    let (m2, m1, c, p1, p2) = (t(-2.0 * h), t(-h), t(0.0), t(h), t(2.0 * h));
    let d1 = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h);
    (c, d1, d2)
}

fn fd_dm1(p: &ScenarioParams, x: f64, m1: f64) -> f64 {
    let h = 1e-3;
    let total = p.total_blocklength as f64;
    let mut d = 0.0;
    for (hop, m, dir) in [(Hop::First, m1, 1.0), (Hop::Second, total - m1, -1.0)] {
        let s = tail_sign(p, x, m, hop);
        d += dir * s * stencil(|dm| small_tail(p, x, m + dm, hop, s), h).1;
    }
    d
}

/// Surrogate value with central-difference first and second derivatives in `x`.
fn fd_surrogate_x(p: &ScenarioParams, x: f64, m1: f64, m2: f64, h: f64) -> (f64, f64, f64) {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for (hop, m) in [(Hop::First, m1), (Hop::Second, m2)] {
        let s = tail_sign(p, x, m, hop);
        let (mid, a, b) = stencil(|dx| small_tail(p, x + dx, m, hop, s), h);
        v += if s > 0.0 { mid } else { 1.0 - mid };
        d1 += s * a;
        d2 += s * b;
    }
    (v, d1, d2)
}

fn fd_g1(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> f64 {
    let (v, d1, _) = fd_surrogate_x(p, x, m1, m2, 1e-3);
    d1 / v
}

fn fd_g2(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> f64 {
    fd_g2_with_scale(p, x, m1, m2).0
}

/// `g''` by differences, with the size of the two terms that cancel in it.
fn fd_g2_with_scale(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> (f64, f64) {
    let (v, d1, d2) = fd_surrogate_x(p, x, m1, m2, 1e-2);
    let (a, b) = (d2 / v, (d1 / v) * (d1 / v));
    (a - b, a.abs() + b)
}

#[test]
fn blocklength_derivative_at_reference_points() {
    let p = reference();
    for m1 in [30.0, 50.0, 70.0] {
        let a = approx_error_dm1(&p, 80.0, m1).unwrap();
        let n = fd_dm1(&p, 80.0, m1);
        let scale = approx_error(&p, 80.0, m1).unwrap();
        assert!(close(a, n, 1e-6, scale), "m1 = {m1}: {a:e} vs {n:e}");
    }
}

#[test]
fn location_derivatives_at_reference_points() {
    let p = reference();
    for x in [50.0, 100.0, 150.0] {
        let a = g_prime(&p, x, 50.0, 50.0).unwrap();
        let n = fd_g1(&p, x, 50.0, 50.0);
        assert!(close(a, n, 1e-6, 1.0), "x = {x}: {a:e} vs {n:e}");
        let a2 = g_second(&p, x, 50.0, 50.0).unwrap();
        let n2 = fd_g2(&p, x, 50.0, 50.0);
        assert!(close(a2, n2, 1e-5, 1.0), "x = {x}: {a2:e} vs {n2:e}");
    }
}

#[test]
fn log_surrogate_bundle_matches_separate_calls() {
    let p = reference();
    for x in [0.0, 42.0, 163.0, 200.0] {
        let b = log_surrogate(&p, x, 43.0, 57.0).unwrap();
        assert_eq!(b.g_prime, g_prime(&p, x, 43.0, 57.0).unwrap());
        assert_eq!(b.g_second, g_second(&p, x, 43.0, 57.0).unwrap());
        assert!((b.g - g_value(&p, x, 43.0, 57.0).unwrap()).abs() <= 1e-15 * b.g.abs().max(1.0));
    }
}

#[test]
fn blocklength_derivative_vanishes_at_symmetric_split() {
    let p = ScenarioParams {
        p2_w: 3.0,
        ..reference()
    };
    assert!(approx_error_dm1(&p, 100.0, 50.0).unwrap().abs() < 1e-15);
}

#[test]
fn blocklength_derivative_changes_sign_once_below_capacity() {
    // Scan m1 on a fine grid restricted to splits where both hops run below
    // capacity; the surrogate is convex there so its slope crosses zero once.
    let p = reference();
    for x in [30.0, 55.0, 80.0, 105.0, 130.0] {
        let (lo, hi) = relayopt_core::optimizer::below_capacity_range(&p, x)
            .unwrap()
            .unwrap();
        let mut changes = 0;
        let mut last = 0.0f64;
        let n = 2000;
        for i in 0..=n {
            let m1 = lo + (hi - lo) * i as f64 / n as f64;
            let d = approx_error_dm1(&p, x, m1).unwrap();
            if d != 0.0 && last != 0.0 && d.signum() != last.signum() {
                changes += 1;
            }
            if d != 0.0 {
                last = d;
            }
        }
        assert!(changes <= 1, "x = {x}: {changes} sign changes");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn surrogate_minus_exact_is_product(x in 0.0f64..200.0, m1 in 1u32..100) {
        let p = reference();
        let (e1, e2) = hop_errors(&p, x, m1 as f64).unwrap();
        let gap = approx_error(&p, x, m1 as f64).unwrap() - exact_error(&p, x, m1 as f64).unwrap();
        prop_assert!((gap - e1 * e2).abs() <= 4.0 * f64::EPSILON * (e1 + e2));
        prop_assert!(gap >= 0.0);
    }

    #[test]
    fn blocklength_derivative_matches_difference(x in 30.0f64..130.0, m1 in 1.01f64..98.99) {
        let p = reference();
        let a = approx_error_dm1(&p, x, m1).unwrap();
        let n = fd_dm1(&p, x, m1);
        let scale = approx_error(&p, x, m1).unwrap();
        prop_assert!(close(a, n, 1e-6, scale), "{a:e} vs {n:e}");
    }

    #[test]
    fn location_derivatives_match_differences(x in 0.5f64..199.5, m1 in 25u32..75) {
        let p = reference();
        let (m1, m2) = (m1 as f64, (100 - m1) as f64);
        let a = g_prime(&p, x, m1, m2).unwrap();
        prop_assert!(close(a, fd_g1(&p, x, m1, m2), 1e-6, 1.0));
        // Near a zero of g'' the two terms cancel and value noise of ~1e-15
        // limits the second difference to ~1e-10 absolute.
        let a2 = g_second(&p, x, m1, m2).unwrap();
        let (n2, terms) = fd_g2_with_scale(&p, x, m1, m2);
        prop_assert!((a2 - n2).abs() <= 1e-5 * n2.abs() + 1e-7 * terms, "{a2:e} vs {n2:e}");
    }

    #[test]
    fn rate_penalty_concave_in_blocklength(gamma in 1e-3f64..1e3, m in 1.0f64..1e4, l in 1u32..1000) {
        prop_assert!(rate_penalty_dm2(gamma, m, l as f64).unwrap() < 0.0);
    }

    #[test]
    fn q_complement(z in -40.0f64..40.0) {
        prop_assert!((q_function(z) + q_function(-z) - 1.0).abs() <= 1e-14);
    }
}
