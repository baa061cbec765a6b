//! Verification suites: every acceptance check as a library function, shared
//! by the `verify` CLI subcommands and the acceptance test target. Each
//! check pins its tolerance in code and reports a one-line pass/fail.

use crate::fit::{calibrate_coefficient, fit_rates, match_resonances, truncate_below};
use crate::heisenberg::{
    coboundary_decay_check, coefficient, correlation_series, dk, duality_check, green_apply,
    inner_product, l2_norm, pullback, verify_eigenrelation, ChiFamily, HeisError, QuadratureSpec,
    RealTestFunction,
};
use crate::precision::{PrecFloat, GUARD_DIGITS};
use crate::resonance::{
    geodesic_resonances, heisenberg_resonances, invariant_distribution_spectrum,
    multiplicity_oracle, pa_resonances, transfer_spectrum_translation, DistributionOrder,
    KzExponents, LaplaceSpectrum, Multiplicity, Provenance,
};
use crate::spectral::{
    char_poly, char_poly_backward_error, is_palindromic, random_symplectic, spectrum,
    SpectralError,
};
use crate::toral::{
    correlate, decay_bound_check, escape_time, escape_time_brute, ToralAutomorphism, ToralError,
    TrigPolynomial,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

const SQRT_PI: f64 = 1.772453850905516027298167483341145182797;

/// Regression constant for c_{2,0}(2) with the standard even χ-family,
/// frozen from the first verified run (cross-checked against the moment
/// identity (λ^{-2}-1)·m₂/2 with m₂ = ∫x²ψ on an independent quadrature).
pub const C20_AT_2: f64 = -0.059292613598923;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.into(), passed, detail }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn print(&self) {
        for c in &self.checks {
            println!("{} {} — {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": crate::report::SCHEMA_VERIFY,
            "suite": self.name,
            "passed": self.passed(),
            "checks": serde_json::to_value(&self.checks).unwrap_or(serde_json::Value::Null),
        })
    }
}

// ---------------------------------------------------------------------------
// Heisenberg representation-line suite
// ---------------------------------------------------------------------------

/// The full representation-line check suite. `lambda` picks the dilatation
/// of the correlation-recovery checks (default 2); the fixed-λ coefficient
/// and eigen-relation checks always run on their stated sets.
pub fn heisenberg_suite(lambda: Option<f64>) -> Result<Suite, HeisError> {
    let lam = lambda.unwrap_or(2.0);
    if lam <= 1.0 {
        return Err(HeisError::BadInput(format!("λ must exceed 1, got {lam}")));
    }
    let spec = QuadratureSpec::default();
    let tight = QuadratureSpec::with_tol(1e-12);
    let chi = ChiFamily::standard(3, &spec)?;
    let golden = (3.0 + 5.0f64.sqrt()) / 2.0;
    let mut checks = Vec::new();

    // 1. χ-family biorthogonality: ∫ J_a[χ_b] = δ_ab for 0 ≤ a ≤ b ≤ 3
    let max_bio = chi.max_biorthogonality_residual(&spec)?;
    checks.push(Check::new(
        "chi-biorthogonality",
        max_bio < 1e-8,
        format!("max |∫J_a[χ_b] - δ_ab| = {max_bio:.3e} (tolerance 1e-8)"),
    ));

    // 2. vanishing coefficients c_{1,0}, c_{2,1} for the even χ_0
    let mut worst_vanishing: f64 = 0.0;
    for l in [1.5, 2.0, golden] {
        worst_vanishing = worst_vanishing.max(coefficient(1, 0, l, &chi, &spec)?.norm());
        worst_vanishing = worst_vanishing.max(coefficient(2, 1, l, &chi, &spec)?.norm());
    }
    checks.push(Check::new(
        "vanishing-coefficients",
        worst_vanishing < 1e-8,
        format!("max |c_10|, |c_21| over λ ∈ {{3/2, 2, (3+√5)/2}} = {worst_vanishing:.3e}"),
    ));

    // 3. nonvanishing c_{2,0}(2): refinement-stable and above 1e-4 in modulus
    let coarse = coefficient(2, 0, 2.0, &chi, &QuadratureSpec::with_tol(1e-8))?;
    let fine = coefficient(2, 0, 2.0, &chi, &QuadratureSpec::with_tol(1e-10))?;
    let stable = (coarse - fine).norm() < 1e-6;
    let against_regression = (fine.re - C20_AT_2).abs() < 1e-6;
    checks.push(Check::new(
        "nonvanishing-c20",
        stable && fine.norm() > 1e-4 && against_regression,
        format!(
            "c20(2) = {:.12} (refinement shift {:.2e}, regression {C20_AT_2})",
            fine.re,
            (coarse - fine).norm()
        ),
    ));

    // 4. eigen-relations across 5 presets, λ ∈ {3/2, 2}, u ∈ {1, e^{iπ/4}}
    let presets = vec![
        RealTestFunction::gaussian().into_sum(),
        RealTestFunction::gaussian_poly(&[1.0, 1.0]).into_sum(),
        RealTestFunction::gaussian_poly(&[0.5, -1.0, 2.0]).into_sum(),
        RealTestFunction::bump().into_sum(),
        RealTestFunction::bump_at(0.2, 0.8).into_sum(),
    ];
    let phases = [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)];
    let mut worst = [0.0f64; 3];
    for l in [1.5, 2.0] {
        for u in phases {
            for k in 0..=2usize {
                let r = verify_eigenrelation(k, l, u, &presets, &chi, &spec)?;
                worst[k] = worst[k].max(r.max_residual);
            }
        }
    }
    checks.push(Check::new(
        "eigen-relations",
        worst[0] < 1e-7 && worst[1] < 1e-7 && worst[2] < 1e-6,
        format!(
            "max residuals k=0: {:.2e} (tol 1e-7), k=1: {:.2e} (tol 1e-7), k=2: {:.2e} (tol 1e-6)",
            worst[0], worst[1], worst[2]
        ),
    ));

    // 5. resonance recovery from correlation series at the chosen λ
    checks.extend(resonance_recovery_checks(lam, &tight)?);

    // module invariants exercised end to end
    checks.push(green_invariant_check(&spec)?);
    checks.push(unitarity_check(&tight)?);
    checks.push(decay_invariant_check(lam, &spec)?);

    Ok(Suite { name: "heisenberg".into(), checks })
}

fn resonance_recovery_checks(
    lam: f64,
    tight: &QuadratureSpec,
) -> Result<Vec<Check>, HeisError> {
    let mut checks = Vec::new();
    let one = Complex64::new(1.0, 0.0);
    let rate0 = lam.powf(-0.5);
    let rate1 = lam.powf(-1.5);

    // pure Gaussian pair: closed form C(n) = λ^{n/2}√(π/(1+λ^{2n}))
    let gauss = RealTestFunction::gaussian();
    let series = correlation_series(gauss.sum(), gauss.sum(), lam, one, 25, tight)?;
    let mut closed_err: f64 = 0.0;
    for p in &series.points {
        let a = 1.0 + lam.powf(2.0 * p.n as f64);
        let closed = lam.powf(p.n as f64 / 2.0) * (std::f64::consts::PI / a).sqrt();
        closed_err = closed_err.max((p.value().re - closed).abs());
    }
    checks.push(Check::new(
        "gaussian-closed-form",
        closed_err < 1e-9,
        format!("max |C(n) - closed form| = {closed_err:.3e}"),
    ));

    let fit = fit_rates(&truncate_below(&series, 1e-11), 1, {
        let len = truncate_below(&series, 1e-11).points.len();
        crate::fit::default_window(len)
    })
    .map_err(|e| HeisError::BadInput(format!("gaussian fit failed: {e}")))?;
    let lead = fit.terms[0].rate_modulus;
    let lead_err = (lead - rate0).abs() / rate0;
    let coeff = calibrate_coefficient(&series, Complex64::new(rate0, 0.0), 0, 6);
    let coeff_err = (coeff - Complex64::new(SQRT_PI, 0.0)).norm();
    checks.push(Check::new(
        "gaussian-leading-rate",
        lead_err < 1e-3,
        format!("fitted λ^(-1/2): {lead:.9} vs {rate0:.9} (rel {lead_err:.2e}, tol 1e-3)"),
    ));
    checks.push(Check::new(
        "gaussian-leading-coefficient",
        coeff_err < 1e-6,
        format!("calibrated coefficient {:.9} vs √π (err {coeff_err:.2e}, tol 1e-6)", coeff.re),
    ));

    // skewed Gaussian pair (1+x)e^{-x²}: nonzero first moment populates the
    // λ^{-3/2} resonance; closed form
    // C(n) = λ^{n/2}√(π/a)·(1 + λⁿ/(2a)), a = 1+λ^{2n}
    let skew = RealTestFunction::gaussian_poly(&[1.0, 1.0]);
    let series2 = correlation_series(skew.sum(), skew.sum(), lam, one, 25, tight)?;
    let mut closed_err2: f64 = 0.0;
    for p in &series2.points {
        let a = 1.0 + lam.powf(2.0 * p.n as f64);
        let closed = lam.powf(p.n as f64 / 2.0)
            * (std::f64::consts::PI / a).sqrt()
            * (1.0 + lam.powf(p.n as f64) / (2.0 * a));
        closed_err2 = closed_err2.max((p.value().re - closed).abs());
    }
    checks.push(Check::new(
        "skew-gaussian-closed-form",
        closed_err2 < 1e-9,
        format!("max |C(n) - closed form| = {closed_err2:.3e}"),
    ));

    let trimmed = truncate_below(&series2, 1e-11);
    let fit2 = fit_rates(&trimmed, 2, crate::fit::default_window(trimmed.points.len()))
        .map_err(|e| HeisError::BadInput(format!("skew fit failed: {e}")))?;
    let l0 = fit2.terms[0].rate_modulus;
    let l1 = fit2.terms.get(1).map(|t| t.rate_modulus).unwrap_or(0.0);
    let e0 = (l0 - rate0).abs() / rate0;
    let e1 = (l1 - rate1).abs() / rate1;
    let coeff2 = calibrate_coefficient(&series2, Complex64::new(rate0, 0.0), 0, 6);
    let coeff2_err = (coeff2 - Complex64::new(SQRT_PI, 0.0)).norm();
    checks.push(Check::new(
        "skew-gaussian-two-rates",
        e0 < 1e-3 && e1 < 1e-2,
        format!(
            "rates {l0:.6}, {l1:.6} vs λ^(-1/2) = {rate0:.6} (rel {e0:.2e}, tol 1e-3), λ^(-3/2) = {rate1:.6} (rel {e1:.2e}, tol 1e-2)"
        ),
    ));
    checks.push(Check::new(
        "skew-gaussian-leading-coefficient",
        coeff2_err < 1e-6,
        format!("calibrated coefficient {:.9} vs √π (err {coeff2_err:.2e})", coeff2.re),
    ));

    // matching against the predicted resonance set
    let predicted = heisenberg_resonances(lam, None, 1, 3)
        .map_err(|e| HeisError::BadInput(e.to_string()))?;
    let matching = match_resonances(&fit2, &predicted, 1e-2);
    checks.push(Check::new(
        "resonance-matching",
        matching.matched.len() == fit2.terms.len() && matching.unexplained.is_empty(),
        format!(
            "{} fitted rates matched, {} unexplained, {} predicted unobserved",
            matching.matched.len(),
            matching.unexplained.len(),
            matching.unobserved.len()
        ),
    ));

    // duality / annihilation: f = ψ' kills the λ^{-1/2} coefficient
    let dpsi = RealTestFunction::bump_derivative(1);
    let dual = duality_check(dpsi.sum(), skew.sum(), lam, 25, tight)?;
    checks.push(Check::new(
        "duality-annihilation",
        dual.a0_abs < 1e-6,
        format!("|a₀| for f = ψ' is {:.3e} (tol 1e-6)", dual.a0_abs),
    ));
    Ok(checks)
}

fn green_invariant_check(spec: &QuadratureSpec) -> Result<Check, HeisError> {
    let f = RealTestFunction::gaussian_poly(&[0.0, 2.0]);
    let green = green_apply(f.sum(), spec)?;
    let xs: Vec<f64> = (0..10).map(|i| -2.2 + i as f64 * 0.5).collect();
    let resid = green.two_sided_residual(&xs)?;
    Ok(Check::new(
        "green-two-sided",
        resid < 1e-10,
        format!("max two-sided Green disagreement {resid:.3e} over 10 points (tol 1e-10)"),
    ))
}

fn unitarity_check(spec: &QuadratureSpec) -> Result<Check, HeisError> {
    let f = RealTestFunction::gaussian_poly(&[1.0, -0.5]);
    let g = RealTestFunction::gaussian_poly(&[0.3, 1.0]);
    let u = Complex64::from_polar(1.0, 0.9);
    let base = inner_product(f.sum(), g.sum(), spec)?;
    let moved =
        inner_product(&pullback(f.sum(), 1.7, u, 4), &pullback(g.sum(), 1.7, u, 4), spec)?;
    let shift = (base - moved).norm();
    Ok(Check::new(
        "pullback-unitarity",
        shift < 1e-8,
        format!("|⟨Φ*f, Φ*g⟩ - ⟨f, g⟩| = {shift:.3e} (tol 1e-8)"),
    ))
}

fn decay_invariant_check(lam: f64, spec: &QuadratureSpec) -> Result<Check, HeisError> {
    let psi = RealTestFunction::bump();
    let g = RealTestFunction::gaussian();
    let mut ok = true;
    let mut worst_identity: f64 = 0.0;
    for k in 0..=2usize {
        let r = coboundary_decay_check(
            psi.sum(),
            k,
            g.sum(),
            lam,
            Complex64::new(1.0, 0.0),
            15,
            spec,
        )?;
        ok &= r.all_bounds_hold;
        worst_identity = worst_identity.max(r.max_identity_residual);
    }
    Ok(Check::new(
        "coboundary-decay",
        ok && worst_identity < 1e-8,
        format!("bounds hold for k ≤ 2, max identity residual {worst_identity:.3e}"),
    ))
}

// ---------------------------------------------------------------------------
// Toral suite
// ---------------------------------------------------------------------------

pub fn toral_suite(seed: u64) -> Result<Suite, ToralError> {
    let auto = ToralAutomorphism::cat_map();
    let mut checks = Vec::new();

    // 6a. exact vanishing past the escape time for 10 seeded zero-mean pairs
    let mut all_exact = true;
    let mut max_n0 = 0usize;
    for i in 0..10u64 {
        let f = TrigPolynomial::random_zero_mean(5, seed.wrapping_add(2 * i));
        let g = TrigPolynomial::random_zero_mean(5, seed.wrapping_add(2 * i + 1));
        let n0 = escape_time(&f, &g, &auto)?;
        max_n0 = max_n0.max(n0);
        let series = correlate(&f, &g, &auto, n0 + 10);
        for p in &series.points {
            if p.n >= n0 && p.value() != Complex64::new(0.0, 0.0) {
                all_exact = false;
            }
        }
        let horizon = n0 + 20;
        if escape_time_brute(&f, &g, &auto, horizon) != n0 {
            all_exact = false;
        }
    }
    checks.push(Check::new(
        "toral-exact-vanishing",
        all_exact,
        format!("C(n) = 0 exactly past escape time on 10 seeded pairs (max N₀ = {max_n0})"),
    ));

    // 6b. coboundary decay bound and proof identity for k ∈ {1,2,3}, n ≤ 30
    let mut bounds_ok = true;
    let mut worst_identity: f64 = 0.0;
    for i in 0..10u64 {
        let u = TrigPolynomial::random_zero_mean(5, seed.wrapping_add(100 + 2 * i));
        let g = TrigPolynomial::random_zero_mean(5, seed.wrapping_add(101 + 2 * i));
        for k in 1..=3usize {
            let r = decay_bound_check(&u, k, &g, &auto, 30)?;
            bounds_ok &= r.all_bounds_hold;
            worst_identity = worst_identity.max(r.max_identity_residual_rel);
        }
    }
    checks.push(Check::new(
        "toral-decay-bound",
        bounds_ok && worst_identity < 1e-12,
        format!(
            "λ^(-kn)-bound holds for k ∈ {{1,2,3}}, n ≤ 30; max identity residual {worst_identity:.3e} of the Lemma constant (tol 1e-12)"
        ),
    ));

    // coboundary round trip on seeded data
    let mut roundtrip_ok = true;
    for i in 0..5u64 {
        let u = TrigPolynomial::random_zero_mean(5, seed.wrapping_add(300 + i));
        for k in 1..=3usize {
            let f = crate::toral::unstable_derivative(&u, &auto, k);
            let back = crate::toral::solve_coboundary(&f, &auto, k)?;
            for m in u.support() {
                if (back.get(m) - u.get(m)).norm() > 1e-11 {
                    roundtrip_ok = false;
                }
            }
        }
    }
    checks.push(Check::new(
        "toral-coboundary-roundtrip",
        roundtrip_ok,
        "solve_coboundary ∘ unstable_derivative = identity on zero-mean polynomials".into(),
    ));

    // the torus predicts no nontrivial resonances: pa set of the cat map is {1}
    let m = crate::spectral::IntMatrix::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
    let s = spectrum(&m, 50).map_err(|e| ToralError::BadInput(e.to_string()))?;
    let set = pa_resonances(&s, 10);
    let trivial = set.entries.len() == 1
        && (set.entries[0].value.to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-40;
    checks.push(Check::new(
        "toral-trivial-resonances",
        trivial,
        format!("pa resonance set of the cat map has {} entry(ies)", set.entries.len()),
    ));

    Ok(Suite { name: "toral".into(), checks })
}

// ---------------------------------------------------------------------------
// Enumeration cross-checks
// ---------------------------------------------------------------------------

pub fn enumeration_suite() -> Suite {
    let mut checks = Vec::new();
    let d = 50;
    let w = d + GUARD_DIGITS;

    // multiplicities of the infinite-order invariant spectrum against the
    // brute-force chain count, levels l ≤ 10
    let mu = vec![
        crate::precision::PrecComplex::from_real(PrecFloat::from_i64(3, w)),
        crate::precision::PrecComplex::from_real(PrecFloat::from_i64(2, w)),
        crate::precision::PrecComplex::from_real(PrecFloat::from_ratio(1, 2, w)),
        crate::precision::PrecComplex::from_real(PrecFloat::from_ratio(1, 3, w)),
    ];
    let s = crate::spectral::SpectrumData::from_eigenvalues(mu, d).expect("synthetic spectrum");
    let inv = invariant_distribution_spectrum(&s, DistributionOrder::Infinite { j_max: 10 });
    let mut mult_ok = true;
    for l in 1..=10usize {
        let value = 2.0 * 3.0f64.powi(-(l as i32));
        let entry = inv.find_value(value, 0.0, 1e-12);
        let expect = multiplicity_oracle(l - 1).count;
        match entry {
            Some(e) if e.multiplicity == Multiplicity::Finite(expect) => {}
            other => {
                mult_ok = false;
                let got = other.map(|e| e.multiplicity.to_string()).unwrap_or_else(|| "missing".into());
                eprintln!("level {l}: expected multiplicity {expect}, got {got}");
            }
        }
    }
    checks.push(Check::new(
        "invariant-multiplicities",
        mult_ok,
        "μ₂λ^(-l) multiplicities equal brute-force chain counts for l ≤ 10".into(),
    ));

    // geodesic Jordan blocks appear iff μ = 1/4
    let lap = LaplaceSpectrum::new(vec![(0.0, 1), (0.1, 1), (0.25, 2), (1.7, 1)]).unwrap();
    let geo = geodesic_resonances(&lap, 3, 4);
    let jordan_ok = geo.entries.iter().all(|e| {
        let is_quarter = e
            .provenance
            .iter()
            .any(|p| matches!(p, Provenance::Geodesic { mu, .. } if *mu == 0.25));
        (!e.jordan_blocks.is_empty()) == is_quarter
    });
    checks.push(Check::new(
        "geodesic-jordan-iff-quarter",
        jordan_ok,
        "2×2 Jordan flags present exactly on the μ = 1/4 families".into(),
    ));

    // transfer spectrum merge at λ₂ = 1/2: -3/2 with multiplicity 3 and dual provenance
    let kz = KzExponents::new(2, vec![0.5], true).unwrap();
    let tset = transfer_spectrum_translation(&kz, 2).unwrap();
    let merged = tset.find_value(-1.5, 0.0, 1e-12);
    let merge_ok = merged
        .map(|e| {
            e.multiplicity == Multiplicity::Finite(3)
                && e.provenance.contains(&Provenance::Transfer { sign: 1, i: 2, j: 2 })
                && e.provenance.contains(&Provenance::Transfer { sign: -1, i: 2, j: 1 })
        })
        .unwrap_or(false);
    checks.push(Check::new(
        "transfer-merge",
        merge_ok,
        "λ₂ = 1/2 merges -3/2 with multiplicity 1+2 = 3 and dual provenance".into(),
    ));

    // heisenberg moduli exactly λ^{-k-1/2} in extended precision
    let hset = heisenberg_resonances(2.0, None, 2, 4).unwrap();
    let lam_hp = PrecFloat::from_i64(2, d);
    let mut heis_ok = true;
    let tol = PrecFloat::parse("1e-45", d).unwrap();
    for e in hset.entries.iter().skip(1) {
        let k = e
            .provenance
            .iter()
            .find_map(|p| match p {
                Provenance::HeisenbergModulus { k } => Some(*k),
                _ => None,
            })
            .expect("modulus-only entry");
        let expect = lam_hp.powi(-(k as i64)) * lam_hp.sqrt().recip();
        if (&e.value.modulus() - &expect).abs() > tol {
            heis_ok = false;
        }
    }
    checks.push(Check::new(
        "heisenberg-moduli",
        heis_ok,
        "moduli equal λ^(-k-1/2) to better than 1e-45".into(),
    ));

    Suite { name: "enumeration".into(), checks }
}

// ---------------------------------------------------------------------------
// Spectral robustness
// ---------------------------------------------------------------------------

pub fn spectral_suite(seed: u64) -> Suite {
    let mut checks = Vec::new();
    let precision = 50;
    let mut hyperbolic = 0usize;
    let mut rejected = 0usize;
    let mut palindromic_ok = true;
    let mut pairing_ok = true;
    let mut roots_ok = true;
    let mut unexpected = Vec::new();
    let pair_tol = PrecFloat::parse("1e-9", precision).unwrap();
    let root_tol = PrecFloat::parse(&format!("1e-{}", precision - 4), precision).unwrap();
    for i in 0..20u64 {
        let m = random_symplectic(2, seed.wrapping_add(i), 12);
        let coeffs = char_poly(&m);
        if !is_palindromic(&coeffs) {
            palindromic_ok = false;
        }
        match spectrum(&m, precision) {
            Ok(s) => {
                hyperbolic += 1;
                let one = crate::precision::PrecComplex::one(precision + GUARD_DIGITS);
                for (idx, z) in s.mu.iter().enumerate() {
                    let prod = z.mul(&s.mu[s.pairing[idx]]);
                    if prod.dist(&one) > pair_tol {
                        pairing_ok = false;
                    }
                    if char_poly_backward_error(&coeffs, z) > root_tol {
                        roots_ok = false;
                    }
                }
            }
            Err(SpectralError::NotHyperbolic(_)) => rejected += 1,
            Err(e) => unexpected.push(format!("seed {i}: {e}")),
        }
    }
    checks.push(Check::new(
        "palindromic-char-poly",
        palindromic_ok,
        "characteristic polynomials of 20 seeded Sp(4,ℤ) matrices are palindromic (exact)".into(),
    ));
    checks.push(Check::new(
        "reciprocal-pairing",
        pairing_ok && hyperbolic > 0,
        format!("paired eigenvalue products within 1e-9 of 1 on {hyperbolic} hyperbolic spectra"),
    ));
    checks.push(Check::new(
        "root-residuals",
        roots_ok,
        format!("backward error of every root below 1e-{}", precision - 4),
    ));
    checks.push(Check::new(
        "no-silent-failures",
        unexpected.is_empty(),
        if unexpected.is_empty() {
            format!("{hyperbolic} hyperbolic, {rejected} rejected as NotHyperbolic, 0 unexpected errors")
        } else {
            unexpected.join("; ")
        },
    ));
    Suite { name: "spectral".into(), checks }
}
