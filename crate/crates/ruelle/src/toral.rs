//! Exact correlations of hyperbolic toral automorphisms on trigonometric
//! polynomials — a zero-discretization-error testbed for the coboundary
//! decay bound and the eventual-vanishing structure of correlations.
//!
//! A 2×2 integer matrix A with |det| = 1 and |trace| > 2 acts on the torus;
//! the correlation of finitely supported trigonometric polynomials is an
//! exact finite lattice sum C(n) = Σ_m f̂(m) conj(ĝ((Aᵀ)ⁿ m)). Inner
//! products with the unstable direction are computed exactly in the real
//! quadratic field ℚ(√D) and converted to floats only at the end.

use crate::fit::CorrelationSeries;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToralError {
    #[error("matrix must satisfy |det| = 1 and |trace| > 2, got det {det}, trace {trace}")]
    NotHyperbolic { det: i64, trace: i64 },
    #[error("coboundary requires zero mean: f̂(0) = {0}")]
    NonzeroMean(Complex64),
    #[error("invalid input: {0}")]
    BadInput(String),
}

// ---------------------------------------------------------------------------
// Exact arithmetic in ℚ(√D)
// ---------------------------------------------------------------------------

/// Element a + b√D of the real quadratic field, D > 0 square-free.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

impl QuadExt {
    pub fn rational(a: BigRational, d: i64) -> Self {
        QuadExt { a, b: BigRational::zero(), d }
    }

    pub fn from_i64(v: i64, d: i64) -> Self {
        QuadExt::rational(BigRational::from(BigInt::from(v)), d)
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        QuadExt { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d }
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        QuadExt { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d }
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        let d = BigRational::from(BigInt::from(self.d));
        QuadExt {
            a: &(&self.a * &o.a) + &(&(&self.b * &o.b) * &d),
            b: &(&self.a * &o.b) + &(&self.b * &o.a),
            d: self.d,
        }
    }

    pub fn scale_i64(&self, k: i64) -> QuadExt {
        let k = BigRational::from(BigInt::from(k));
        QuadExt { a: &self.a * &k, b: &self.b * &k, d: self.d }
    }

    /// Galois conjugate a - b√D.
    pub fn conj(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm a² - D b² ∈ ℚ.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from(BigInt::from(self.d));
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &d)
    }

    pub fn inverse(&self) -> QuadExt {
        let n = self.norm();
        assert!(!n.is_zero(), "inverting zero field element");
        let c = self.conj();
        QuadExt { a: &c.a / &n, b: &c.b / &n, d: self.d }
    }

    pub fn div(&self, o: &QuadExt) -> QuadExt {
        self.mul(&o.inverse())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign, decided by comparing a² with D b² when signs differ.
    pub fn sign(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // a and b√D pull in opposite directions: compare magnitudes exactly
        let d = BigRational::from(BigInt::from(self.d));
        let a2 = &self.a * &self.a;
        let db2 = &(&self.b * &self.b) * &d;
        match a2.cmp(&db2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn squarefree_part(mut n: i64) -> (i64, i64) {
    // n = s² · d with d square-free; returns (s, d)
    let mut s = 1i64;
    let mut p = 2i64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, n)
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials
// ---------------------------------------------------------------------------

/// Finite complex coefficient map on the 2D integer lattice.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub coeffs: BTreeMap<(i64, i64), (f64, f64)>,
    pub real_valued: bool,
}

impl TrigPolynomial {
    pub fn new() -> Self {
        TrigPolynomial::default()
    }

    /// Single character e_m.
    pub fn character(m: (i64, i64)) -> Self {
        let mut p = TrigPolynomial::new();
        p.set(m, Complex64::new(1.0, 0.0));
        p
    }

    pub fn constant(c: f64) -> Self {
        let mut p = TrigPolynomial::new();
        p.set((0, 0), Complex64::new(c, 0.0));
        p.real_valued = true;
        p
    }

    pub fn set(&mut self, m: (i64, i64), c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, (c.re, c.im));
        }
    }

    pub fn get(&self, m: (i64, i64)) -> Complex64 {
        self.coeffs.get(&m).map(|&(re, im)| Complex64::new(re, im)).unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero_mean(&self) -> bool {
        self.get((0, 0)) == Complex64::new(0.0, 0.0)
    }

    /// Reality condition: coefficient at -m is the conjugate of the one at m.
    pub fn check_real_valued(&self) -> bool {
        self.coeffs.iter().all(|(&(m1, m2), &(re, im))| {
            let there = self.get((-m1, -m2));
            (there - Complex64::new(re, im).conj()).norm() < 1e-15
        })
    }

    /// Random zero-mean polynomial with support radius ≤ `radius` and
    /// unit-box coefficients, deterministic per seed.
    pub fn random_zero_mean(radius: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = TrigPolynomial::new();
        let n_terms = rng.gen_range(3..=8);
        for _ in 0..n_terms {
            let m1 = rng.gen_range(-radius..=radius);
            let m2 = rng.gen_range(-radius..=radius);
            if (m1, m2) == (0, 0) {
                continue;
            }
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            p.set((m1, m2), Complex64::new(re, im));
        }
        if p.coeffs.is_empty() {
            p.set((1, 0), Complex64::new(1.0, 0.0));
        }
        p
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|&(re, im)| re * re + im * im)
            .sum::<f64>()
            .sqrt()
    }
}

// ---------------------------------------------------------------------------
// The automorphism
// ---------------------------------------------------------------------------

/// Hyperbolic toral automorphism with exact unstable-direction data.
#[derive(Debug, Clone)]
pub struct ToralAutomorphism {
    pub matrix: [[i64; 2]; 2],
    /// Top eigenvalue λ > 1.
    pub lambda: f64,
    lambda_exact: QuadExt,
    /// Unnormalized unstable eigenvector w = (b, λ-a), algebraic integers.
    w: (QuadExt, QuadExt),
    /// ‖w‖² ∈ ℚ(√D), exact.
    w_norm_sq: QuadExt,
    /// Diophantine constant: |⟨m, v_u⟩| ≥ c_A / |m| for m ≠ 0.
    pub diophantine_c: f64,
}

impl ToralAutomorphism {
    pub fn new(matrix: [[i64; 2]; 2]) -> Result<Self, ToralError> {
        let [[a, b], [c, d]] = matrix;
        let det = a * d - b * c;
        let trace = a + d;
        if det.abs() != 1 || trace.abs() <= 2 {
            return Err(ToralError::NotHyperbolic { det, trace });
        }
        let disc = trace * trace - 4 * det;
        debug_assert!(disc > 0);
        let (s, dfree) = squarefree_part(disc);
        // λ = (trace + s√dfree)/2
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let lambda_exact = QuadExt {
            a: BigRational::from(BigInt::from(trace)) * &half,
            b: BigRational::from(BigInt::from(s)) * &half,
            d: dfree,
        };
        // eigenvector for λ: (b, λ - a); b ≠ 0 for integer hyperbolic matrices
        if b == 0 {
            return Err(ToralError::BadInput(
                "hyperbolic integer matrices cannot have b = 0".into(),
            ));
        }
        let w0 = QuadExt::from_i64(b, dfree);
        let w1 = lambda_exact.sub(&QuadExt::from_i64(a, dfree));
        let w_norm_sq = w0.mul(&w0).add(&w1.mul(&w1));
        // m·w is an algebraic integer with nonzero integer norm, so
        // |m·w| ≥ 1/|m·w̄| ≥ 1/(|m|·‖w̄‖), giving c_A = 1/(‖w‖·‖w̄‖).
        let wc_norm_sq = w0.conj().mul(&w0.conj()).add(&w1.conj().mul(&w1.conj()));
        let c_a = 1.0 / (w_norm_sq.to_f64().sqrt() * wc_norm_sq.to_f64().sqrt());
        let lam = lambda_exact.to_f64();
        let lam = if lam.abs() > 1.0 { lam } else { lambda_exact.conj().to_f64() };
        Ok(ToralAutomorphism {
            matrix,
            lambda: lam.abs(),
            lambda_exact,
            w: (w0, w1),
            w_norm_sq,
            diophantine_c: c_a,
        })
    }

    /// The standard cat map [[2,1],[1,1]].
    pub fn cat_map() -> Self {
        ToralAutomorphism::new([[2, 1], [1, 1]]).expect("cat map is hyperbolic")
    }

    /// ⟨m, v_u⟩ for the unit unstable eigenvector: the square is computed
    /// exactly in ℚ(√D) and only the final square root is floating point.
    pub fn unstable_component(&self, m: (i64, i64)) -> f64 {
        let dot = self.w.0.scale_i64(m.0).add(&self.w.1.scale_i64(m.1));
        if dot.is_zero() {
            return 0.0;
        }
        let q = dot.mul(&dot).div(&self.w_norm_sq);
        let sign = dot.sign() as f64;
        sign * q.to_f64().max(0.0).sqrt()
    }

    /// Frequency action m ↦ Aᵀ m (the action of composition with the map on
    /// Fourier indices), iterated n times, exact in i128.
    pub fn frequency_orbit(&self, m: (i64, i64), n: usize) -> (i64, i64) {
        let [[a, b], [c, d]] = self.matrix;
        let mut x = m.0 as i128;
        let mut y = m.1 as i128;
        for _ in 0..n {
            let nx = a as i128 * x + c as i128 * y;
            let ny = b as i128 * x + d as i128 * y;
            x = nx;
            y = ny;
        }
        (
            i64::try_from(x).expect("frequency orbit overflows i64"),
            i64::try_from(y).expect("frequency orbit overflows i64"),
        )
    }

    /// λ as an exact field element.
    pub fn lambda_exact(&self) -> &QuadExt {
        &self.lambda_exact
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// C(n) = Σ_m f̂(m) conj(ĝ((Aᵀ)ⁿ m)) for n = 0…n_max — exact finite sums,
/// flagged exact per entry.
pub fn correlate(
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    auto: &ToralAutomorphism,
    n_max: usize,
) -> CorrelationSeries {
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in f.support() {
            let target = auto.frequency_orbit(m, n);
            let gc = g.get(target);
            if gc != Complex64::new(0.0, 0.0) {
                acc += f.get(m) * gc.conj();
            }
        }
        values.push((n, acc, true));
    }
    CorrelationSeries::new("torus", Some(auto.lambda), values)
}

/// k-th unstable derivative: coefficients multiplied by (2πi⟨m, v_u⟩)^k.
pub fn unstable_derivative(
    f: &TrigPolynomial,
    auto: &ToralAutomorphism,
    k: usize,
) -> TrigPolynomial {
    let mut out = TrigPolynomial::new();
    for m in f.support() {
        let factor = Complex64::new(0.0, 2.0 * PI * auto.unstable_component(m)).powu(k as u32);
        out.set(m, f.get(m) * factor);
    }
    out
}

/// Solve X^k u = f exactly: û(m) = f̂(m)/(2πi⟨m, v_u⟩)^k. Requires zero mean;
/// small denominators are bounded below by the Diophantine constant.
pub fn solve_coboundary(
    f: &TrigPolynomial,
    auto: &ToralAutomorphism,
    k: usize,
) -> Result<TrigPolynomial, ToralError> {
    let mean = f.get((0, 0));
    if mean != Complex64::new(0.0, 0.0) {
        return Err(ToralError::NonzeroMean(mean));
    }
    let mut out = TrigPolynomial::new();
    for m in f.support() {
        let denom = Complex64::new(0.0, 2.0 * PI * auto.unstable_component(m)).powu(k as u32);
        out.set(m, f.get(m) / denom);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ToralDecayRow {
    pub n: usize,
    pub corr_abs: f64,
    pub bound: f64,
    pub bound_ok: bool,
    pub identity_residual: f64,
    /// Identity residual normalized by the Lemma constant ‖u‖·‖X^k g‖.
    pub identity_residual_rel: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToralDecayReport {
    pub k: usize,
    pub transfer_norm: f64,
    pub xk_g_norm: f64,
    pub rows: Vec<ToralDecayRow>,
    pub all_bounds_hold: bool,
    pub max_identity_residual: f64,
    /// Max over n of |C - rhs| / (‖u‖·‖X^k g‖).
    pub max_identity_residual_rel: f64,
}

/// With f := X^k u, verify |C(f,g,n)| ≤ λ^{-kn} ‖u‖ ‖X^k g‖ for n ≤ n_max and
/// the identity C(f,g,n) = (-1)^k λ^{-kn} ⟨u∘Φⁿ, X^k g⟩ on exact lattice sums.
pub fn decay_bound_check(
    u: &TrigPolynomial,
    k: usize,
    g: &TrigPolynomial,
    auto: &ToralAutomorphism,
    n_max: usize,
) -> Result<ToralDecayReport, ToralError> {
    if !u.is_zero_mean() {
        return Err(ToralError::NonzeroMean(u.get((0, 0))));
    }
    let f = unstable_derivative(u, auto, k);
    let xk_g = unstable_derivative(g, auto, k);
    let transfer_norm = u.l2_norm();
    let xk_g_norm = xk_g.l2_norm();
    let corr_fg = correlate(&f, g, auto, n_max);
    let corr_ug = correlate(u, &xk_g, auto, n_max);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let scale = (transfer_norm * xk_g_norm).max(1e-300);
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut all_bounds_hold = true;
    let mut max_identity_residual: f64 = 0.0;
    let mut max_identity_residual_rel: f64 = 0.0;
    for n in 0..=n_max {
        let c = corr_fg.points[n].value();
        let damp = auto.lambda.powf(-(k as f64) * n as f64);
        let bound = damp * transfer_norm * xk_g_norm;
        let rhs = sign * damp * corr_ug.points[n].value();
        let identity_residual = (c - rhs).norm();
        let identity_residual_rel = identity_residual / scale;
        let bound_ok = c.norm() <= bound * (1.0 + 1e-9) + 1e-12;
        all_bounds_hold &= bound_ok;
        max_identity_residual = max_identity_residual.max(identity_residual);
        max_identity_residual_rel = max_identity_residual_rel.max(identity_residual_rel);
        rows.push(ToralDecayRow {
            n,
            corr_abs: c.norm(),
            bound,
            bound_ok,
            identity_residual,
            identity_residual_rel,
        });
    }
    Ok(ToralDecayReport {
        k,
        transfer_norm,
        xk_g_norm,
        rows,
        all_bounds_hold,
        max_identity_residual,
        max_identity_residual_rel,
    })
}

/// Smallest N₀ with (Aᵀ)ⁿ(supp f̂ ∖ {0}) ∩ supp ĝ = ∅ for all n ≥ N₀.
/// The unstable component of every nonzero frequency grows like λⁿ, so the
/// search per frequency stops at the analytic bound
/// n ≤ log(R_g |m| / c_A)/log λ; membership below it is checked exactly.
pub fn escape_time(
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    auto: &ToralAutomorphism,
) -> Result<usize, ToralError> {
    if !f.is_zero_mean() || !g.is_zero_mean() {
        return Err(ToralError::BadInput("escape time requires zero-mean observables".into()));
    }
    let radius_g = g
        .support()
        .map(|(m1, m2)| ((m1 * m1 + m2 * m2) as f64).sqrt())
        .fold(0.0, f64::max);
    if radius_g == 0.0 {
        return Ok(0);
    }
    let mut n0 = 0usize;
    for m in f.support() {
        if m == (0, 0) {
            continue;
        }
        let norm_m = ((m.0 * m.0 + m.1 * m.1) as f64).sqrt();
        let horizon = ((radius_g * norm_m / auto.diophantine_c).ln() / auto.lambda.ln())
            .ceil()
            .max(0.0) as usize
            + 1;
        for n in 0..=horizon {
            let target = auto.frequency_orbit(m, n);
            if g.coeffs.contains_key(&target) {
                n0 = n0.max(n + 1);
            }
        }
    }
    Ok(n0)
}

/// Brute-force escape oracle: scan every n up to the given horizon and
/// report the last lattice hit. Test-side check of `escape_time`.
pub fn escape_time_brute(
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    auto: &ToralAutomorphism,
    horizon: usize,
) -> usize {
    let mut n0 = 0usize;
    for m in f.support() {
        if m == (0, 0) {
            continue;
        }
        for n in 0..=horizon {
            let target = auto.frequency_orbit(m, n);
            if g.coeffs.contains_key(&target) {
                n0 = n0.max(n + 1);
            }
        }
    }
    n0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_map_eigendata() {
        let auto = ToralAutomorphism::cat_map();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((auto.lambda - phi * phi).abs() < 1e-14);
        // A v_u = λ v_u to working precision
        let w0 = auto.w.0.to_f64();
        let w1 = auto.w.1.to_f64();
        let av = (2.0 * w0 + w1, w0 + w1);
        assert!((av.0 - auto.lambda * w0).abs() < 1e-12);
        assert!((av.1 - auto.lambda * w1).abs() < 1e-12);
        assert!(auto.diophantine_c > 0.0);
    }

    #[test]
    fn unstable_component_golden_ratio() {
        // ⟨(1,0), v_u⟩ = φ/√(φ²+1) for the cat map: w = (1, λ-2) = (1, φ-1)
        // is proportional to (φ, 1) since φ(φ-1) = 1
        let auto = ToralAutomorphism::cat_map();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let expect = phi / (phi * phi + 1.0).sqrt();
        let got = auto.unstable_component((1, 0));
        assert!((got - expect).abs() < 1e-14, "{got} vs {expect}");
    }

    #[test]
    fn diophantine_bound_holds_on_lattice_ball() {
        let auto = ToralAutomorphism::cat_map();
        for m1 in -8i64..=8 {
            for m2 in -8i64..=8 {
                if (m1, m2) == (0, 0) {
                    continue;
                }
                let comp = auto.unstable_component((m1, m2)).abs();
                let norm = ((m1 * m1 + m2 * m2) as f64).sqrt();
                assert!(
                    comp >= auto.diophantine_c / norm * (1.0 - 1e-12),
                    "bound fails at ({m1},{m2}): {comp} < {}",
                    auto.diophantine_c / norm
                );
            }
        }
    }

    #[test]
    fn non_hyperbolic_matrices_rejected() {
        assert!(matches!(
            ToralAutomorphism::new([[1, 1], [0, 1]]),
            Err(ToralError::NotHyperbolic { .. })
        ));
        assert!(matches!(
            ToralAutomorphism::new([[2, 1], [1, 2]]),
            Err(ToralError::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn constant_correlation_is_constant() {
        let auto = ToralAutomorphism::cat_map();
        let one = TrigPolynomial::constant(1.0);
        let series = correlate(&one, &one, &auto, 10);
        for p in &series.points {
            assert_eq!(p.value(), Complex64::new(1.0, 0.0));
            assert!(p.exact);
        }
    }

    #[test]
    fn character_orbit_correlation() {
        // f = e_{(1,0)}, g = e_{(2,1)}: Aᵀ(1,0) = (2,1) so C(1) = 1, else 0
        let auto = ToralAutomorphism::cat_map();
        let f = TrigPolynomial::character((1, 0));
        let g = TrigPolynomial::character((2, 1));
        let series = correlate(&f, &g, &auto, 6);
        for p in &series.points {
            let expect = if p.n == 1 { 1.0 } else { 0.0 };
            assert_eq!(p.value(), Complex64::new(expect, 0.0), "n = {}", p.n);
        }
        // matching escape time: the orbit leaves supp ĝ after n = 1
        assert_eq!(escape_time(&f, &g, &auto).unwrap(), 2);
        assert_eq!(escape_time_brute(&f, &g, &auto, 40), 2);
    }

    #[test]
    fn correlation_is_summation_order_independent() {
        let auto = ToralAutomorphism::cat_map();
        let f = TrigPolynomial::random_zero_mean(4, 11);
        let g = TrigPolynomial::random_zero_mean(4, 12);
        let series = correlate(&f, &g, &auto, 8);
        // recompute with reversed support iteration
        for p in &series.points {
            let mut acc = Complex64::new(0.0, 0.0);
            let support: Vec<(i64, i64)> = f.support().collect();
            for m in support.into_iter().rev() {
                let target = auto.frequency_orbit(m, p.n);
                acc += f.get(m) * g.get(target).conj();
            }
            assert!((acc - p.value()).norm() < 1e-12);
        }
    }

    #[test]
    fn coboundary_round_trip() {
        let auto = ToralAutomorphism::cat_map();
        let u = TrigPolynomial::random_zero_mean(5, 3);
        for k in 1..=3 {
            let f = unstable_derivative(&u, &auto, k);
            let back = solve_coboundary(&f, &auto, k).unwrap();
            for m in u.support() {
                assert!((back.get(m) - u.get(m)).norm() < 1e-12, "k = {k}, m = {m:?}");
            }
            // and X^k(solve(f)) = f
            let fwd = unstable_derivative(&back, &auto, k);
            for m in f.support() {
                assert!((fwd.get(m) - f.get(m)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coboundary_rejects_nonzero_mean() {
        let auto = ToralAutomorphism::cat_map();
        let f = TrigPolynomial::constant(2.0);
        assert!(matches!(
            solve_coboundary(&f, &auto, 1),
            Err(ToralError::NonzeroMean(_))
        ));
    }

    #[test]
    fn parseval_norm_of_derivative() {
        let auto = ToralAutomorphism::cat_map();
        let f = TrigPolynomial::random_zero_mean(3, 9);
        let xf = unstable_derivative(&f, &auto, 1);
        let direct: f64 = f
            .support()
            .map(|m| {
                let c = f.get(m).norm_sqr();
                let factor = 2.0 * PI * auto.unstable_component(m);
                c * factor * factor
            })
            .sum::<f64>()
            .sqrt();
        assert!((xf.l2_norm() - direct).abs() < 1e-12);
    }

    #[test]
    fn decay_bound_and_identity() {
        let auto = ToralAutomorphism::cat_map();
        // k = 0 is Cauchy-Schwarz on finite sums
        let u = TrigPolynomial::random_zero_mean(5, 21);
        let g = TrigPolynomial::random_zero_mean(5, 22);
        let r0 = decay_bound_check(&u, 0, &g, &auto, 10).unwrap();
        assert!(r0.all_bounds_hold);
        // the worked example: u = e_{(1,0)} + e_{(0,1)}, random support-5 g
        let mut u1 = TrigPolynomial::new();
        u1.set((1, 0), Complex64::new(1.0, 0.0));
        u1.set((0, 1), Complex64::new(1.0, 0.0));
        let g1 = TrigPolynomial::random_zero_mean(5, 77);
        let r1 = decay_bound_check(&u1, 1, &g1, &auto, 20).unwrap();
        assert!(r1.all_bounds_hold);
        assert!(r1.max_identity_residual < 1e-12, "{}", r1.max_identity_residual);
        // higher iterates on random data
        for k in 2..=3 {
            let r = decay_bound_check(&u, k, &g, &auto, 30).unwrap();
            assert!(r.all_bounds_hold, "k = {k}");
            assert!(r.max_identity_residual < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn correlations_vanish_exactly_after_escape() {
        let auto = ToralAutomorphism::cat_map();
        for seed in 0..6u64 {
            let f = TrigPolynomial::random_zero_mean(3, 100 + seed);
            let g = TrigPolynomial::random_zero_mean(3, 200 + seed);
            let n0 = escape_time(&f, &g, &auto).unwrap();
            let series = correlate(&f, &g, &auto, n0 + 15);
            for p in &series.points {
                if p.n >= n0 {
                    assert_eq!(
                        p.value(),
                        Complex64::new(0.0, 0.0),
                        "seed {seed}: C({}) ≠ 0 past escape time {n0}",
                        p.n
                    );
                }
            }
            // brute-force agreement
            let horizon = (2.0 * (6.0f64).ln() / auto.lambda.ln()).ceil() as usize + 8;
            assert_eq!(n0, escape_time_brute(&f, &g, &auto, horizon), "seed {seed}");
        }
    }

    #[test]
    fn escape_time_finite_for_self_correlation() {
        let auto = ToralAutomorphism::cat_map();
        let f = TrigPolynomial::random_zero_mean(4, 5);
        let n0 = escape_time(&f, &f, &auto).unwrap();
        assert!(n0 < 40);
    }

    #[test]
    fn quadratic_field_arithmetic() {
        // (1 + √5)/2 has norm (1 - 5)/4 = -1 and satisfies φ² = φ + 1
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let phi = QuadExt { a: half.clone(), b: half, d: 5 };
        assert_eq!(phi.norm(), BigRational::from(BigInt::from(-1)));
        let phi2 = phi.mul(&phi);
        let rhs = phi.add(&QuadExt::from_i64(1, 5));
        assert_eq!(phi2, rhs);
        assert_eq!(phi.sign(), 1);
        assert_eq!(phi.conj().sign(), -1); // (1-√5)/2 < 0
        let inv = phi.inverse();
        assert!(phi.mul(&inv).sub(&QuadExt::from_i64(1, 5)).is_zero());
    }

    #[test]
    fn squarefree_extraction() {
        assert_eq!(squarefree_part(12), (2, 3));
        assert_eq!(squarefree_part(5), (1, 5));
        assert_eq!(squarefree_part(8), (2, 2));
        // trace 4, det 1: disc 12 → λ = (4 + 2√3)/2 = 2 + √3
        let auto = ToralAutomorphism::new([[3, 2], [1, 1]]).unwrap();
        assert!((auto.lambda - (2.0 + 3.0f64.sqrt())).abs() < 1e-14);
    }
}
