//! Adaptive Simpson quadrature and cumulative iterated integration.
//!
//! Plain integrals (inner products, norms, moments) use adaptive Simpson with
//! an absolute tolerance. Iterated integrals `∫_ℝ J_a[f]` — the a-fold
//! antiderivative from -∞ integrated over the line — use cumulative composite
//! Simpson on a refined uniform grid, doubling the resolution until two
//! levels agree. The integrand is always evaluated as a single combined
//! function, so difference integrands whose individual terms diverge are
//! integrated after cancellation.

use super::presets::FunctionSum;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("quadrature failed to reach tolerance {tol:e} (error estimate {err:e})")]
    Failure { tol: f64, err: f64 },
    #[error("iterated integral diverges: total mass of order {order} is {mass:e}")]
    Divergent { order: usize, mass: f64 },
}

/// Quadrature configuration: adaptive Simpson with an absolute tolerance.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    /// Maximum number of adaptive interval splits.
    pub max_intervals: usize,
    /// Finest grid for cumulative iterated integration.
    pub max_grid: usize,
    /// Threshold on lower-order total masses before an iterated integral is
    /// declared divergent.
    pub mass_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-10, max_intervals: 1 << 16, max_grid: 1 << 20, mass_tol: 1e-6 }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureSpec { abs_tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_est: f64,
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

/// Adaptive Simpson for complex integrands on [a, b].
pub fn integrate(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    if a == b {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), err_est: 0.0 });
    }
    let total_len = (b - a).abs();
    let fa = f(a);
    let fb = f(b);
    let m0 = 0.5 * (a + b);
    let fm0 = f(m0);
    let whole = simpson(a, b, fa, fm0, fb);
    // stack of (a, m, b, fa, fm, fb, S)
    let mut stack = vec![(a, m0, b, fa, fm0, fb, whole)];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err_acc = 0.0f64;
    let mut splits = 0usize;
    while let Some((a, m, b, fa, fm, fb, s)) = stack.pop() {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let err = (left + right - s).norm() / 15.0;
        let local_tol = spec.abs_tol * ((b - a).abs() / total_len).max(1e-300);
        if err <= local_tol || (b - a).abs() < 1e-14 * total_len {
            acc += left + right + (left + right - s) / 15.0;
            err_acc += err;
        } else {
            splits += 1;
            if splits > spec.max_intervals {
                return Err(QuadError::Failure { tol: spec.abs_tol, err });
            }
            stack.push((a, lm, m, fa, flm, fm, left));
            stack.push((m, rm, b, fm, frm, fb, right));
        }
    }
    if err_acc > spec.abs_tol {
        return Err(QuadError::Failure { tol: spec.abs_tol, err: err_acc });
    }
    Ok(QuadResult { value: acc, err_est: err_acc })
}

/// ∫ f over the support of f.
pub fn integrate_sum(f: &FunctionSum, spec: &QuadratureSpec) -> Result<QuadResult, QuadError> {
    let (lo, hi) = f.support();
    integrate(&|x| f.eval(x), lo, hi, spec)
}

/// L²(ℝ) inner product ⟨f, g⟩ = ∫ f(x) conj(g(x)) dx, conjugate-linear in g.
pub fn inner_product(
    f: &FunctionSum,
    g: &FunctionSum,
    spec: &QuadratureSpec,
) -> Result<Complex64, QuadError> {
    let (fl, fh) = f.support();
    let (gl, gh) = g.support();
    let lo = fl.max(gl);
    let hi = fh.min(gh);
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(integrate(&|x| f.eval(x) * g.eval(x).conj(), lo, hi, spec)?.value)
}

pub fn l2_norm(f: &FunctionSum, spec: &QuadratureSpec) -> Result<f64, QuadError> {
    let (lo, hi) = f.support();
    let v = integrate(&|x| Complex64::new(f.eval(x).norm_sqr(), 0.0), lo, hi, spec)?;
    Ok(v.value.re.max(0.0).sqrt())
}

/// k-th moment ∫ f(x) x^k dx.
pub fn moment(f: &FunctionSum, k: usize, spec: &QuadratureSpec) -> Result<Complex64, QuadError> {
    let (lo, hi) = f.support();
    Ok(integrate(&|x| f.eval(x) * x.powi(k as i32), lo, hi, spec)?.value)
}

/// Cumulative composite Simpson antiderivative of uniformly sampled values.
/// `values` has odd length (even interval count); returns the antiderivative
/// at every node, with third-order interior interpolation at odd nodes.
pub fn cumulative_simpson(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "need an odd number of samples");
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut i = 0;
    while i + 2 < n {
        out[i + 1] = out[i] + (h / 12.0) * (5.0 * values[i] + 8.0 * values[i + 1] - values[i + 2]);
        out[i + 2] = out[i] + (h / 3.0) * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    out
}

#[derive(Debug, Clone)]
pub struct IteratedResult {
    pub value: Complex64,
    pub err_est: f64,
    /// Total masses ∫ J_j[f] for j = 0…order (the last one is the value).
    pub masses: Vec<Complex64>,
}

/// ∫_ℝ J_order[f]: the order-fold antiderivative from -∞, integrated over the
/// line, by cumulative composite Simpson with grid-doubling refinement.
/// Divergent when any lower-order total mass exceeds the mass tolerance.
pub fn iterated_total(
    f: &FunctionSum,
    order: usize,
    spec: &QuadratureSpec,
) -> Result<IteratedResult, QuadError> {
    let (lo, hi) = f.support();
    if lo >= hi {
        return Ok(IteratedResult {
            value: Complex64::new(0.0, 0.0),
            err_est: 0.0,
            masses: vec![Complex64::new(0.0, 0.0); order + 1],
        });
    }
    let pad = 0.01 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);

    let compute = |n: usize| -> IteratedResult {
        let h = (hi - lo) / n as f64;
        let mut arr: Vec<Complex64> = (0..=n).map(|i| f.eval(lo + i as f64 * h)).collect();
        let mut masses = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            let cum = cumulative_simpson(&arr, h);
            masses.push(*cum.last().unwrap());
            arr = cum;
        }
        IteratedResult { value: *masses.last().unwrap(), err_est: f64::INFINITY, masses }
    };

    let mut n = 1024;
    let mut prev = compute(n);
    loop {
        n *= 2;
        if n > spec.max_grid {
            return Err(QuadError::Failure { tol: spec.abs_tol, err: prev.err_est });
        }
        let cur = compute(n);
        let diff = (cur.value - prev.value).norm();
        if diff < spec.abs_tol {
            for (j, m) in cur.masses.iter().enumerate().take(order) {
                if m.norm() > spec.mass_tol {
                    return Err(QuadError::Divergent { order: j, mass: m.norm() });
                }
            }
            return Ok(IteratedResult { err_est: diff, ..cur });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::presets::{Preset, RealTestFunction};

    #[test]
    fn integrates_gaussian_to_sqrt_pi() {
        let f = RealTestFunction::gaussian();
        let spec = QuadratureSpec::default();
        let r = integrate_sum(f.sum(), &spec).unwrap();
        assert!((r.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!(r.err_est <= spec.abs_tol);
    }

    #[test]
    fn bump_normalization_constant() {
        // frozen from an independent high-precision quadrature run
        let raw = Preset::raw_bump(0.0, 1.0);
        let spec = QuadratureSpec::with_tol(1e-13);
        let v = integrate(&|x| raw.eval(x), -1.0, 1.0, &spec).unwrap().value.re;
        assert!((v - 0.4439938161680793).abs() < 1e-11, "got {v}");
        assert!((1.0 / v - 2.2522836210435817).abs() < 1e-9);
    }

    #[test]
    fn normalized_bump_has_unit_mass() {
        let psi = RealTestFunction::bump();
        let spec = QuadratureSpec::default();
        let v = integrate_sum(psi.sum(), &spec).unwrap().value.re;
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cumulative_simpson_matches_antiderivative() {
        // ∫₀^x cos = sin on [0, 2]
        let n = 256;
        let h = 2.0 / n as f64;
        let vals: Vec<Complex64> =
            (0..=n).map(|i| Complex64::new((i as f64 * h).cos(), 0.0)).collect();
        let cum = cumulative_simpson(&vals, h);
        for i in (0..=n).step_by(13) {
            let x = i as f64 * h;
            assert!((cum[i].re - x.sin()).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn iterated_total_of_bump_derivative_is_delta() {
        // χ_1 = ψ': ∫ J_1[ψ'] = ∫ ψ = 1; ∫ J_0[ψ'] = 0 (so order 1 converges)
        let chi1 = RealTestFunction::bump_derivative(1);
        let spec = QuadratureSpec::default();
        let r = iterated_total(chi1.sum(), 1, &spec).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-9, "got {}", r.value.re);
        assert!(r.masses[0].norm() < 1e-9);
    }

    #[test]
    fn iterated_total_rejects_divergent_input() {
        // ψ has mass 1, so ∫ J_1[ψ] diverges
        let psi = RealTestFunction::bump();
        let spec = QuadratureSpec::default();
        match iterated_total(psi.sum(), 1, &spec) {
            Err(QuadError::Divergent { order: 0, .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn inner_product_disjoint_supports_is_zero() {
        let a = RealTestFunction::bump_at(-3.0, 1.0);
        let b = RealTestFunction::bump_at(3.0, 1.0);
        let v = inner_product(a.sum(), b.sum(), &QuadratureSpec::default()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn halving_tolerance_is_stable() {
        // quadrature invariant: tightening the tolerance moves the result by
        // less than 10× the coarse tolerance
        let f = RealTestFunction::gaussian_poly(&[1.0, 2.0, -1.0]);
        let coarse = integrate_sum(f.sum(), &QuadratureSpec::with_tol(1e-8)).unwrap();
        let fine = integrate_sum(f.sum(), &QuadratureSpec::with_tol(5e-9)).unwrap();
        assert!((coarse.value - fine.value).norm() < 1e-7);
    }
}
