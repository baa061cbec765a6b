//! Operations of the representation-line model: Green operator, projector
//! recursion, iterated functionals `D^(k)`, pullback, the coefficients
//! `c_{k,j}(λ)`, eigen-relation verification, and correlation series with
//! their oracles.

use super::chi::ChiFamily;
use super::presets::FunctionSum;
use super::quadrature::{
    integrate, inner_product, integrate_sum, iterated_total, l2_norm, moment, QuadratureSpec,
};
use super::HeisError;
use crate::fit::{calibrate_coefficient, default_window, fit_rates, CorrelationSeries, FitError};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// ∫_ℝ J_a[f]: the a-fold antiderivative from -∞ integrated over the line.
/// Diverges unless the total masses of orders < a vanish.
pub fn iterated_integral(
    f: &FunctionSum,
    a: usize,
    spec: &QuadratureSpec,
) -> Result<Complex64, HeisError> {
    Ok(iterated_total(f, a, spec)?.value)
}

/// The Green operator of X u = f: u(x) = ∫_{-∞}^x f(ξ) dξ, defined when
/// ∫ f = 0 so that both one-sided formulas agree.
pub struct GreenOp {
    f: FunctionSum,
    support: (f64, f64),
    spec: QuadratureSpec,
}

pub fn green_apply(f: &FunctionSum, spec: &QuadratureSpec) -> Result<GreenOp, HeisError> {
    let mean = integrate_sum(f, spec)?.value;
    if mean.norm() > spec.mass_tol {
        return Err(HeisError::NonzeroMean(mean.norm()));
    }
    Ok(GreenOp { f: f.clone(), support: f.support(), spec: spec.clone() })
}

impl GreenOp {
    /// Left formula ∫_{-∞}^x f.
    pub fn eval(&self, x: f64) -> Result<Complex64, HeisError> {
        let lo = self.support.0;
        if x <= lo {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(integrate(&|t| self.f.eval(t), lo, x.min(self.support.1 + 1.0), &self.spec)?.value)
    }

    /// Right formula -∫_x^{+∞} f.
    pub fn eval_right(&self, x: f64) -> Result<Complex64, HeisError> {
        let hi = self.support.1;
        if x >= hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(-integrate(&|t| self.f.eval(t), x.max(self.support.0 - 1.0), hi, &self.spec)?.value)
    }

    /// Max disagreement of the two formulas over the sample points.
    pub fn two_sided_residual(&self, xs: &[f64]) -> Result<f64, HeisError> {
        let mut worst: f64 = 0.0;
        for &x in xs {
            let l = self.eval(x)?;
            let r = self.eval_right(x)?;
            worst = worst.max((l - r).norm());
        }
        Ok(worst)
    }
}

/// Projector recursion: P^(0)f = f - D^(0)(f)χ_0 and
/// P^(j+1)f = P^(j)f - D^(j+1)(P^(j)f)·χ_{j+1}. Returns the residual P^(j)f
/// together with the values [D^(0)(f), …, D^(j)(f)] computed along the way.
pub fn projector(
    f: &FunctionSum,
    j: usize,
    chi: &ChiFamily,
    spec: &QuadratureSpec,
) -> Result<(FunctionSum, Vec<Complex64>), HeisError> {
    if j > chi.b_max {
        return Err(HeisError::BadInput(format!(
            "projector order {j} exceeds χ-family size {}",
            chi.b_max
        )));
    }
    let mut residual = f.clone();
    let mut values = Vec::with_capacity(j + 1);
    let d0 = integrate_sum(&residual, spec)?.value;
    values.push(d0);
    residual.add_scaled(-d0, &chi.chi_sum(0));
    for order in 1..=j {
        let v = iterated_total(&residual, order, spec)?.value;
        values.push(v);
        residual.add_scaled(-v, &chi.chi_sum(order));
    }
    Ok((residual, values))
}

/// The iterated invariant functional: D^(0)(f) = ∫f and
/// D^(k)(f) = ∫_ℝ J_k[P^(k-1)f].
pub fn dk(
    f: &FunctionSum,
    k: usize,
    chi: &ChiFamily,
    spec: &QuadratureSpec,
) -> Result<Complex64, HeisError> {
    if k == 0 {
        return Ok(integrate_sum(f, spec)?.value);
    }
    let (residual, _) = projector(f, k - 1, chi, spec)?;
    Ok(iterated_total(&residual, k, spec)?.value)
}

/// n-fold pullback by the automorphism in representation:
/// x ↦ u^n λ^{n/2} f(λ^n x). Exact on the preset representation.
pub fn pullback(f: &FunctionSum, lambda: f64, u: Complex64, n: u32) -> FunctionSum {
    assert!(lambda > 1.0, "dilatation λ must exceed 1");
    if n == 0 {
        return f.clone();
    }
    let scale = lambda.powi(n as i32);
    let factor = u.powu(n) * lambda.powf(n as f64 / 2.0);
    f.scale_arg(scale).mul_factor(factor)
}

// ---------------------------------------------------------------------------
// Coefficients c_{k,j}(λ)
// ---------------------------------------------------------------------------

/// c_{k,j}(λ) = ∫_ℝ J_k[ λ^{j+1} χ_j(λ·) - χ_j ], computed by cumulative
/// quadrature of the difference (the individual terms diverge for k ≥ 2;
/// only the difference has vanishing lower masses). Displayed cases are
/// k ≤ 2, j < k; higher k uses the same difference formula best-effort.
pub fn coefficient(
    k: usize,
    j: usize,
    lambda: f64,
    chi: &ChiFamily,
    spec: &QuadratureSpec,
) -> Result<Complex64, HeisError> {
    if j >= k {
        return Err(HeisError::BadInput(format!("coefficient requires j < k, got k={k}, j={j}")));
    }
    if j > chi.b_max {
        return Err(HeisError::BadInput(format!("χ_{j} not available (family size {})", chi.b_max)));
    }
    let chi_j = chi.chi_sum(j);
    let mut diff = chi_j.scale_arg(lambda).mul_factor(Complex64::new(lambda.powi(j as i32 + 1), 0.0));
    diff.add_scaled(Complex64::new(-1.0, 0.0), &chi_j);
    Ok(iterated_total(&diff, k, spec)?.value)
}

/// Table of c_{k,j}(λ) for all j < k ≤ k_max.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTable {
    pub lambda: f64,
    pub k_max: usize,
    values: BTreeMap<(usize, usize), (f64, f64)>,
}

impl CoefficientTable {
    pub fn get(&self, k: usize, j: usize) -> Option<Complex64> {
        self.values.get(&(k, j)).map(|&(re, im)| Complex64::new(re, im))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.values.iter().map(|(&(k, j), &(re, im))| (k, j, Complex64::new(re, im)))
    }
}

pub fn coefficient_table(
    k_max: usize,
    lambda: f64,
    chi: &ChiFamily,
    spec: &QuadratureSpec,
) -> Result<CoefficientTable, HeisError> {
    let mut values = BTreeMap::new();
    for k in 1..=k_max {
        for j in 0..k {
            let c = coefficient(k, j, lambda, chi, spec)?;
            values.insert((k, j), (c.re, c.im));
        }
    }
    Ok(CoefficientTable { lambda, k_max, values })
}

// ---------------------------------------------------------------------------
// Eigen-relation verification
// ---------------------------------------------------------------------------

/// Residuals of the pulled-back iterated functional against
/// u λ^{-k-1/2} D^(k)(f) + Σ_{j<k} c_{k,j}(λ) u λ^{-j-1/2} D^(j)(f).
#[derive(Debug, Clone, Serialize)]
pub struct EigenRelationReport {
    pub k: usize,
    pub lambda: f64,
    pub phase_re: f64,
    pub phase_im: f64,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

pub fn verify_eigenrelation(
    k: usize,
    lambda: f64,
    u: Complex64,
    tests: &[FunctionSum],
    chi: &ChiFamily,
    spec: &QuadratureSpec,
) -> Result<EigenRelationReport, HeisError> {
    let table = coefficient_table(k, lambda, chi, spec)?;
    let mut residuals = Vec::with_capacity(tests.len());
    for f in tests {
        let lhs = dk(&pullback(f, lambda, u, 1), k, chi, spec)?;
        let mut rhs = u * lambda.powf(-(k as f64) - 0.5) * dk(f, k, chi, spec)?;
        for j in 0..k {
            let c = table.get(k, j).expect("table covers j < k");
            rhs += c * u * lambda.powf(-(j as f64) - 0.5) * dk(f, j, chi, spec)?;
        }
        residuals.push((lhs - rhs).norm());
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(EigenRelationReport {
        k,
        lambda,
        phase_re: u.re,
        phase_im: u.im,
        residuals,
        max_residual,
    })
}

// ---------------------------------------------------------------------------
// Correlations and oracles
// ---------------------------------------------------------------------------

/// C(n) = ⟨pullback(f, n), g⟩_{L²(ℝ)} for n = 0…n_max, conjugate-linear in g.
pub fn correlation_series(
    f: &FunctionSum,
    g: &FunctionSum,
    lambda: f64,
    u: Complex64,
    n_max: usize,
    spec: &QuadratureSpec,
) -> Result<CorrelationSeries, HeisError> {
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let pb = pullback(f, lambda, u, n as u32);
        let c = inner_product(&pb, g, spec)?;
        values.push((n, c, false));
    }
    Ok(CorrelationSeries::new("heisenberg", Some(lambda), values))
}

/// Predicted expansion C(n) ≈ u^n Σ_k a_k λ^{-n(k+1/2)} with coefficients
/// a_k = (∫ f(y) y^k dy) · conj(g^{(k)}(0)) / k!. Independent of the
/// quadrature path used for the series itself.
#[derive(Debug, Clone, Serialize)]
pub struct MomentExpansion {
    pub lambda: f64,
    pub phase_re: f64,
    pub phase_im: f64,
    pub coefficients: Vec<(f64, f64)>,
}

impl MomentExpansion {
    pub fn coefficient(&self, k: usize) -> Complex64 {
        let (re, im) = self.coefficients[k];
        Complex64::new(re, im)
    }

    pub fn predict(&self, n: usize) -> Complex64 {
        let u = Complex64::new(self.phase_re, self.phase_im);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &(re, im)) in self.coefficients.iter().enumerate() {
            acc += Complex64::new(re, im) * self.lambda.powf(-(n as f64) * (k as f64 + 0.5));
        }
        u.powu(n as u32) * acc
    }
}

pub fn moment_oracle(
    f: &FunctionSum,
    g: &FunctionSum,
    lambda: f64,
    u: Complex64,
    k_max: usize,
    spec: &QuadratureSpec,
) -> Result<MomentExpansion, HeisError> {
    let mut coefficients = Vec::with_capacity(k_max + 1);
    let mut kfact = 1.0;
    for k in 0..=k_max {
        if k > 0 {
            kfact *= k as f64;
        }
        let mk = moment(f, k, spec)?;
        let gk0 = g.derivative_n(k).eval(0.0).conj();
        let a = mk * gk0 / kfact;
        coefficients.push((a.re, a.im));
    }
    Ok(MomentExpansion { lambda, phase_re: u.re, phase_im: u.im, coefficients })
}

// ---------------------------------------------------------------------------
// Coboundary decay and duality checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub n: usize,
    pub corr_abs: f64,
    pub bound: f64,
    pub bound_ok: bool,
    pub identity_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayCheckReport {
    pub k: usize,
    pub lambda: f64,
    pub transfer_norm: f64,
    pub gk_norm: f64,
    pub rows: Vec<DecayRow>,
    pub all_bounds_hold: bool,
    pub max_identity_residual: f64,
}

/// With f := u_fn^(k), checks |C(f, g, n)| ≤ λ^{-kn} ‖u_fn‖_{L²} ‖g^(k)‖_{L²}
/// and the exact identity C(f, g, n) = (-1)^k λ^{-kn} ⟨pullback(u_fn, n), g^(k)⟩.
pub fn coboundary_decay_check(
    u_fn: &FunctionSum,
    k: usize,
    g: &FunctionSum,
    lambda: f64,
    u: Complex64,
    n_max: usize,
    spec: &QuadratureSpec,
) -> Result<DecayCheckReport, HeisError> {
    let f = u_fn.derivative_n(k);
    let gk = g.derivative_n(k);
    let transfer_norm = l2_norm(u_fn, spec)?;
    let gk_norm = l2_norm(&gk, spec)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut max_identity_residual: f64 = 0.0;
    let mut all_bounds_hold = true;
    for n in 0..=n_max {
        let corr = inner_product(&pullback(&f, lambda, u, n as u32), g, spec)?;
        let damp = lambda.powf(-(k as f64) * n as f64);
        let bound = damp * transfer_norm * gk_norm;
        let rhs = sign * damp * inner_product(&pullback(u_fn, lambda, u, n as u32), &gk, spec)?;
        let identity_residual = (corr - rhs).norm();
        max_identity_residual = max_identity_residual.max(identity_residual);
        let bound_ok = corr.norm() <= bound * (1.0 + 1e-9) + 1e-12;
        all_bounds_hold &= bound_ok;
        rows.push(DecayRow { n, corr_abs: corr.norm(), bound, bound_ok, identity_residual });
    }
    Ok(DecayCheckReport {
        k,
        lambda,
        transfer_norm,
        gk_norm,
        rows,
        all_bounds_hold,
        max_identity_residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    /// Tail estimate of the coefficient of λ^{-n/2} in C(f, g, n).
    pub a0_re: f64,
    pub a0_im: f64,
    pub a0_abs: f64,
    /// Leading fitted modulus rate of the series, when one is extractable.
    pub leading_rate: Option<f64>,
}

/// Coefficient-annihilation pattern: when f is an exact derivative (∫f = 0),
/// the coefficient of the leading rate λ^{-n/2} vanishes, and the observed
/// leading rate moves down the resonance ladder.
pub fn duality_check(
    f: &FunctionSum,
    g: &FunctionSum,
    lambda: f64,
    n_max: usize,
    spec: &QuadratureSpec,
) -> Result<DualityReport, HeisError> {
    let tight = QuadratureSpec { abs_tol: spec.abs_tol.min(1e-12), ..spec.clone() };
    let series = correlation_series(f, g, lambda, Complex64::new(1.0, 0.0), n_max, &tight)?;
    let a0 = calibrate_coefficient(&series, Complex64::new(lambda.powf(-0.5), 0.0), 0, 6);
    // fit only the part of the tail that is above the quadrature noise floor
    let fit_input = crate::fit::truncate_below(&series, 1e-10);
    let leading_rate = if fit_input.points.len() < 8 {
        None
    } else {
        match fit_rates(&fit_input, 1, default_window(fit_input.points.len())) {
            Ok(report) => report.terms.first().map(|t| t.rate_modulus),
            Err(FitError::ZeroSeries) => None,
            Err(e) => return Err(HeisError::BadInput(format!("fit failed: {e}"))),
        }
    };
    Ok(DualityReport { a0_re: a0.re, a0_im: a0.im, a0_abs: a0.norm(), leading_rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::presets::RealTestFunction;

    const SQRT_PI: f64 = 1.7724538509055160273;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn chi3() -> ChiFamily {
        ChiFamily::standard(3, &quad()).unwrap()
    }

    #[test]
    fn iterated_integral_examples() {
        let spec = quad();
        // f = χ_1 = ψ', a = 1 → 1
        let chi = chi3();
        let v = iterated_integral(&chi.chi_sum(1), 1, &spec).unwrap();
        assert!((v.re - 1.0).abs() < 1e-9);
        // f = ψ, a = 0 → 1
        let v0 = iterated_integral(&chi.psi(), 0, &spec).unwrap();
        assert!((v0.re - 1.0).abs() < 1e-9);
        // f = χ_2, a = 1 → 0
        let v2 = iterated_integral(&chi.chi_sum(2), 1, &spec).unwrap();
        assert!(v2.norm() < 1e-9);
    }

    #[test]
    fn green_of_bump_derivative_is_bump() {
        let spec = quad();
        let psi = RealTestFunction::bump();
        let dpsi = psi.derivative_n(1);
        let green = green_apply(&dpsi, &spec).unwrap();
        for &x in &[-0.8, -0.3, 0.0, 0.5, 0.9] {
            let got = green.eval(x).unwrap();
            assert!((got.re - psi.eval(x).re).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn green_antiderivative_of_odd_gaussian() {
        // f = 2x e^{-x²} → -e^{-x²}
        let spec = quad();
        let f = RealTestFunction::gaussian_poly(&[0.0, 2.0]);
        let green = green_apply(f.sum(), &spec).unwrap();
        for &x in &[-1.5, 0.0, 0.3, 2.0] {
            let expect = -f64::exp(-x * x);
            assert!((green.eval(x).unwrap().re - expect).abs() < 1e-9, "x = {x}");
        }
        // two-sided formulas agree at 10 sample points
        let xs: Vec<f64> = (0..10).map(|i| -2.0 + i as f64 * 0.45).collect();
        assert!(green.two_sided_residual(&xs).unwrap() < 1e-10);
    }

    #[test]
    fn green_rejects_nonzero_mean() {
        let spec = quad();
        let psi = RealTestFunction::bump();
        match green_apply(psi.sum(), &spec).map(|_| ()) {
            Err(HeisError::NonzeroMean(_)) => {}
            other => panic!("expected NonzeroMean, got {other:?}"),
        }
    }

    #[test]
    fn projector_annihilates_chi0() {
        let spec = quad();
        let chi = chi3();
        let (residual, values) = projector(&chi.psi(), 0, &chi, &spec).unwrap();
        assert!((values[0].re - 1.0).abs() < 1e-9);
        for i in 0..=20 {
            let x = -1.0 + i as f64 * 0.1;
            assert!(residual.eval(x).norm() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn projector_fixes_zero_mean_functions() {
        let spec = quad();
        let chi = chi3();
        let dpsi = RealTestFunction::bump_derivative(1);
        let (residual, values) = projector(dpsi.sum(), 0, &chi, &spec).unwrap();
        assert!(values[0].norm() < 1e-9);
        for &x in &[-0.5, 0.2, 0.8] {
            assert!((residual.eval(x) - dpsi.eval(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn projected_gaussian_is_annihilated_by_d0_and_d1() {
        let spec = quad();
        let chi = chi3();
        let f = RealTestFunction::gaussian();
        let (p1, _) = projector(f.sum(), 1, &chi, &spec).unwrap();
        let d0 = integrate_sum(&p1, &spec).unwrap().value;
        assert!(d0.norm() < 1e-8, "D0 residual {}", d0.norm());
        let d1 = iterated_total(&p1, 1, &spec).unwrap().value;
        assert!(d1.norm() < 1e-8, "D1 residual {}", d1.norm());
    }

    #[test]
    fn dk_values_on_presets() {
        let spec = quad();
        let chi = chi3();
        // D^(0)(e^{-x²}) = √π
        let g = RealTestFunction::gaussian();
        let d0 = dk(g.sum(), 0, &chi, &spec).unwrap();
        assert!((d0.re - SQRT_PI).abs() < 1e-9);
        // f = ψ': D^(0) = 0, D^(1) = 1
        let dpsi = RealTestFunction::bump_derivative(1);
        assert!(dk(dpsi.sum(), 0, &chi, &spec).unwrap().norm() < 1e-9);
        let d1 = dk(dpsi.sum(), 1, &chi, &spec).unwrap();
        assert!((d1.re - 1.0).abs() < 1e-8);
        // f = χ_2: D^(0) = D^(1) = 0, D^(2) = 1
        let chi2 = chi.chi_sum(2);
        assert!(dk(&chi2, 0, &chi, &spec).unwrap().norm() < 1e-9);
        assert!(dk(&chi2, 1, &chi, &spec).unwrap().norm() < 1e-8);
        let d2 = dk(&chi2, 2, &chi, &spec).unwrap();
        assert!((d2.re - 1.0).abs() < 1e-7, "D2 = {}", d2.re);
    }

    #[test]
    fn pullback_identity_and_eigenvalue() {
        let spec = quad();
        let chi = chi3();
        let f = RealTestFunction::gaussian();
        let one = Complex64::new(1.0, 0.0);
        // n = 0 is the identity
        let p0 = pullback(f.sum(), 2.0, one, 0);
        assert!((p0.eval(0.3) - f.eval(0.3)).norm() < 1e-15);
        // D^(0)(pullback(f, λ, 1, 1)) = λ^{-1/2} D^(0)(f)
        let lam = 2.0f64;
        let lhs = dk(&pullback(f.sum(), lam, one, 1), 0, &chi, &spec).unwrap();
        let rhs = lam.powf(-0.5) * dk(f.sum(), 0, &chi, &spec).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn pullback_is_unitary() {
        let spec = quad();
        let u = Complex64::from_polar(1.0, 0.9);
        let f = RealTestFunction::gaussian_poly(&[1.0, -0.5]);
        let g = RealTestFunction::gaussian_poly(&[0.3, 1.0]);
        let n = 3;
        let lam = 1.7;
        let base = inner_product(f.sum(), g.sum(), &spec).unwrap();
        let moved = inner_product(
            &pullback(f.sum(), lam, u, n),
            &pullback(g.sum(), lam, u, n),
            &spec,
        )
        .unwrap();
        assert!((base - moved).norm() < 1e-8, "⟨f,g⟩ shifted by {}", (base - moved).norm());
    }

    #[test]
    fn vanishing_coefficients_for_even_chi0() {
        let spec = quad();
        let chi = chi3();
        for lam in [1.5, 2.0, (3.0 + 5.0f64.sqrt()) / 2.0] {
            let c10 = coefficient(1, 0, lam, &chi, &spec).unwrap();
            assert!(c10.norm() < 1e-8, "c10({lam}) = {}", c10.norm());
            let c21 = coefficient(2, 1, lam, &chi, &spec).unwrap();
            assert!(c21.norm() < 1e-8, "c21({lam}) = {}", c21.norm());
        }
    }

    #[test]
    fn c20_matches_frozen_oracle() {
        // Independent oracle (moment identity + direct cumulative quadrature,
        // both computed externally): c20(λ) = (λ^{-2} - 1)·m₂/2 with
        // m₂ = ∫x²ψ = 0.15811363626379646.
        let spec = quad();
        let chi = chi3();
        for (lam, expect) in [
            (1.5, -0.043920454517722),
            (2.0, -0.059292613598923),
            ((3.0 + 5.0f64.sqrt()) / 2.0, -0.067522583811898),
        ] {
            let c20 = coefficient(2, 0, lam, &chi, &spec).unwrap();
            assert!((c20.re - expect).abs() < 1e-6, "c20({lam}) = {} vs {expect}", c20.re);
            assert!(c20.im.abs() < 1e-10);
        }
        // nonvanishing
        let c20 = coefficient(2, 0, 2.0, &chi, &spec).unwrap();
        assert!(c20.norm() > 1e-4);
    }

    #[test]
    fn c20_stable_across_refinement() {
        let chi = chi3();
        let coarse = coefficient(2, 0, 2.0, &chi, &QuadratureSpec::with_tol(1e-8)).unwrap();
        let fine = coefficient(2, 0, 2.0, &chi, &QuadratureSpec::with_tol(1e-10)).unwrap();
        assert!((coarse - fine).norm() < 1e-6);
    }

    #[test]
    fn eigenrelations_hold() {
        let spec = quad();
        let chi = chi3();
        let presets: Vec<FunctionSum> = vec![
            RealTestFunction::gaussian().into_sum(),
            RealTestFunction::gaussian_poly(&[1.0, 1.0]).into_sum(),
            RealTestFunction::bump().into_sum(),
        ];
        for &lam in &[1.5, 2.0] {
            for u in [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)] {
                let r0 = verify_eigenrelation(0, lam, u, &presets, &chi, &spec).unwrap();
                assert!(r0.max_residual < 1e-8, "k=0 residual {}", r0.max_residual);
                let r1 = verify_eigenrelation(1, lam, u, &presets, &chi, &spec).unwrap();
                assert!(r1.max_residual < 1e-7, "k=1 residual {}", r1.max_residual);
                let r2 = verify_eigenrelation(2, lam, u, &presets, &chi, &spec).unwrap();
                assert!(r2.max_residual < 1e-6, "k=2 residual {}", r2.max_residual);
            }
        }
    }

    #[test]
    fn gaussian_correlation_matches_closed_form() {
        // C(n) = λ^{n/2} √(π/(1+λ^{2n})) for f = g = e^{-x²}, u = 1
        let spec = QuadratureSpec::with_tol(1e-12);
        let f = RealTestFunction::gaussian();
        let lam = 2.0;
        let series =
            correlation_series(f.sum(), f.sum(), lam, Complex64::new(1.0, 0.0), 12, &spec).unwrap();
        for p in &series.points {
            let n = p.n;
            let closed = lam.powf(n as f64 / 2.0)
                * (std::f64::consts::PI / (1.0 + lam.powf(2.0 * n as f64))).sqrt();
            assert!((p.value().re - closed).abs() < 1e-9, "n = {n}");
        }
        // C(0) is the plain inner product
        let ip = inner_product(f.sum(), f.sum(), &spec).unwrap();
        assert!((series.points[0].value() - ip).norm() < 1e-12);
        // |C(n)| λ^{n/2} → √π
        let last = series.points.last().unwrap();
        let lim = last.value().norm() * lam.powf(last.n as f64 / 2.0);
        assert!((lim - SQRT_PI).abs() < 1e-6, "limit {lim}");
    }

    #[test]
    fn moment_oracle_examples() {
        let spec = quad();
        let one = Complex64::new(1.0, 0.0);
        let f = RealTestFunction::gaussian();
        // a_0 = (∫f)·conj(g(0)) = √π
        let m = moment_oracle(f.sum(), f.sum(), 2.0, one, 4, &spec).unwrap();
        assert!((m.coefficient(0).re - SQRT_PI).abs() < 1e-9);
        // f odd, g even → a_0 = 0 and a_1 ≠ 0: leading rate λ^{-3/2}
        let odd = RealTestFunction::gaussian_poly(&[0.0, 1.0]);
        let modd = moment_oracle(odd.sum(), f.sum(), 2.0, one, 2, &spec).unwrap();
        assert!(modd.coefficient(0).norm() < 1e-10);
        // a_1 = m_1(f)·conj(g'(0)) = (√π/2)·0 = 0 for even g; use g with g'(0) ≠ 0
        let g_skew = RealTestFunction::gaussian_poly(&[1.0, 1.0]);
        let modd2 = moment_oracle(odd.sum(), g_skew.sum(), 2.0, one, 2, &spec).unwrap();
        assert!(modd2.coefficient(1).norm() > 0.1);
    }

    #[test]
    fn moment_oracle_matches_gaussian_expansion() {
        // √(π/(1+t²)) with t = λ^{-n}: C(n)λ^{n/2}... the closed form expands
        // as √π (1 - t²/2 + 3t⁴/8 - …) with t = λ^{-2n}; compare 3 terms.
        let spec = QuadratureSpec::with_tol(1e-12);
        let f = RealTestFunction::gaussian();
        let lam = 2.0f64;
        let m = moment_oracle(f.sum(), f.sum(), lam, Complex64::new(1.0, 0.0), 6, &spec).unwrap();
        for n in 6..=10 {
            let closed = lam.powf(n as f64 / 2.0)
                * (std::f64::consts::PI / (1.0 + lam.powf(2.0 * n as f64))).sqrt();
            let predicted = m.predict(n);
            // truncation error O(λ^{-8n}) relative to λ^{-n/2}, but the
            // moment quadratures themselves carry ~1e-10 absolute noise
            let scale = lam.powf(-(n as f64) * 0.5);
            let bound = lam.powf(-5.0 * n as f64).max(5e-9);
            assert!(
                (predicted.re - closed).abs() / scale < bound,
                "n = {n}: {} vs {closed}",
                predicted.re
            );
        }
    }

    #[test]
    fn coboundary_bound_k0_is_cauchy_schwarz() {
        let spec = quad();
        let psi = RealTestFunction::bump();
        let g = RealTestFunction::gaussian();
        let r = coboundary_decay_check(
            psi.sum(),
            0,
            g.sum(),
            2.0,
            Complex64::new(1.0, 0.0),
            10,
            &spec,
        )
        .unwrap();
        assert!(r.all_bounds_hold);
    }

    #[test]
    fn coboundary_bound_k1_holds_with_margin() {
        let spec = quad();
        let psi = RealTestFunction::bump();
        let g = RealTestFunction::gaussian();
        let r = coboundary_decay_check(
            psi.sum(),
            1,
            g.sum(),
            2.0,
            Complex64::new(1.0, 0.0),
            20,
            &spec,
        )
        .unwrap();
        assert!(r.all_bounds_hold);
        for row in &r.rows {
            assert!(row.corr_abs < row.bound || row.corr_abs < 1e-12, "n = {}", row.n);
        }
    }

    #[test]
    fn coboundary_identity_residual_k2() {
        let spec = QuadratureSpec::with_tol(1e-12);
        let psi = RealTestFunction::bump();
        let g = RealTestFunction::gaussian();
        let r = coboundary_decay_check(
            psi.sum(),
            2,
            g.sum(),
            2.0,
            Complex64::new(1.0, 0.0),
            12,
            &spec,
        )
        .unwrap();
        assert!(r.max_identity_residual < 1e-9, "residual {}", r.max_identity_residual);
    }

    #[test]
    fn duality_annihilation_pattern() {
        let spec = QuadratureSpec::with_tol(1e-12);
        // a generic observable with g(0) = 1 and g'(0) ≠ 0, so the ladder
        // of coefficients is nondegenerate
        let g = RealTestFunction::gaussian_poly(&[1.0, 1.0]);
        let lam = 2.0f64;
        // f = ψ': ∫f = 0 kills the λ^{-1/2} coefficient
        let dpsi = RealTestFunction::bump_derivative(1);
        let r = duality_check(dpsi.sum(), g.sum(), lam, 25, &spec).unwrap();
        assert!(r.a0_abs < 1e-6, "a0 = {}", r.a0_abs);
        // ...and the observed leading rate drops to λ^{-3/2}
        let rate1 = r.leading_rate.expect("ψ' series against skew g is not zero");
        assert!(
            (rate1 - lam.powf(-1.5)).abs() / lam.powf(-1.5) < 1e-2,
            "leading rate {rate1} vs {}",
            lam.powf(-1.5)
        );
        // f = ψ: a_0 ≈ conj(g(0)) = 1
        let psi = RealTestFunction::bump();
        let r2 = duality_check(psi.sum(), g.sum(), lam, 25, &spec).unwrap();
        assert!((r2.a0_re - 1.0).abs() < 1e-6, "a0 = {}", r2.a0_re);
        // f = ψ'': two vanishing moments, leading rate λ^{-5/2}
        let ddpsi = RealTestFunction::bump_derivative(2);
        let r3 = duality_check(ddpsi.sum(), g.sum(), lam, 25, &spec).unwrap();
        let rate = r3.leading_rate.expect("ψ'' series is not zero");
        assert!(
            (rate - lam.powf(-2.5)).abs() / lam.powf(-2.5) < 1e-2,
            "leading rate {rate} vs {}",
            lam.powf(-2.5)
        );
    }
}
