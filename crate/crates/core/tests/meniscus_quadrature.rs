//! The closed-form meniscus correction against direct quadrature of the
//! region between a circular meniscus and its apex level.

use caprise_core::physics::meniscus_correction;

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Mean height of the arc of radius R/cosθ above its lowest point.
fn quadrature(half_width: f64, theta: f64) -> f64 {
    let r = half_width / theta.cos();
    // r − √(r² − x²) rewritten without cancellation.
    let gap = |x: f64| x * x / (r + (r * r - x * x).sqrt());
    integrate(&gap, 0.0, half_width, 1e-16 * half_width * half_width) / half_width
}

#[test]
fn closed_form_matches_quadrature() {
    for deg in [5.0f64, 15.0, 30.0, 45.0, 60.0, 75.0, 89.0] {
        let theta = deg.to_radians();
        for r in [1.0, 0.005] {
            let exact = quadrature(r, theta);
            let closed = meniscus_correction(r, theta);
            let rel = ((closed - exact) / exact).abs();
            assert!(rel < 1e-9, "θ = {deg}°, R = {r}: {closed} vs {exact} ({rel:e})");
        }
    }
}

#[test]
fn thirty_degrees_reference() {
    let exact = quadrature(0.005, 30f64.to_radians());
    assert!((exact - 8.39468e-4).abs() < 1e-9, "{exact}");
}

#[test]
fn correction_decreases_with_angle() {
    let mut prev = f64::INFINITY;
    for k in 0..=900 {
        let theta = (k as f64 * 0.1).to_radians();
        let h = meniscus_correction(1.0, theta);
        assert!(h >= 0.0);
        assert!(h < prev || (h == 0.0 && prev == 0.0), "θ = {}°", k as f64 * 0.1);
        prev = h;
    }
}
