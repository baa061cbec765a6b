//! Exponential(-polynomial) rate extraction from correlation series, and
//! matching of extracted rates against a predicted resonance set.
//!
//! The fitter peels one term |c|·n^d·ρ^n at a time: the modulus rate comes
//! from least squares on log|C(n)| over the window, the polynomial degree
//! d ∈ {0,1,2} from a nested model comparison, and the phase from averaged
//! consecutive ratios C(n+1)/C(n). Each new term is fitted on the asymptotic
//! tail of the surviving points, subtracted, and the whole term list is then
//! polished by alternating refit sweeps.

use crate::resonance::ResonanceSet;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Values with modulus below this are treated as structural zeros.
pub const SERIES_FLOOR: f64 = 1e-14;

/// Rate-separation limit: successive fitted rates with ratio above this are
/// declared inseparable on the window.
pub const RATE_SEPARATION_LIMIT: f64 = 0.9;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("series is identically zero below the floor {SERIES_FLOOR:e}")]
    ZeroSeries,
    #[error("cannot separate successive rates: ratio {ratio} exceeds {RATE_SEPARATION_LIMIT}")]
    InsufficientDecades { ratio: f64 },
    #[error("window [{lo}, {hi}] too short for depth {depth} (need ≥ 2·depth + 2 points)")]
    WindowTooShort { lo: usize, hi: usize, depth: usize },
    #[error("invalid input: {0}")]
    BadInput(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: usize,
    pub re: f64,
    pub im: f64,
    /// True when the value is an exact finite sum rather than a quadrature.
    pub exact: bool,
}

impl SeriesPoint {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Sampled correlation values C(n), n increasing from 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationSeries {
    pub system: String,
    pub lambda: Option<f64>,
    pub points: Vec<SeriesPoint>,
}

impl CorrelationSeries {
    pub fn new(system: &str, lambda: Option<f64>, values: Vec<(usize, Complex64, bool)>) -> Self {
        let points = values
            .into_iter()
            .map(|(n, v, exact)| SeriesPoint { n, re: v.re, im: v.im, exact })
            .collect();
        CorrelationSeries { system: system.into(), lambda, points }
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.value()).collect()
    }

    pub fn validate(&self) -> Result<(), FitError> {
        for w in self.points.windows(2) {
            if w[1].n <= w[0].n {
                return Err(FitError::BadInput("series indices must be strictly increasing".into()));
            }
        }
        if self.points.first().map(|p| p.n != 0).unwrap_or(true) {
            return Err(FitError::BadInput("series must start at n = 0".into()));
        }
        Ok(())
    }

    /// CSV with columns n, re, im, abs, exact and a metadata comment line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# system={} lambda={}\n",
            self.system,
            self.lambda.map(|l| l.to_string()).unwrap_or_else(|| "none".into())
        ));
        out.push_str("n,re,im,abs,exact\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{}\n",
                p.n,
                p.re,
                p.im,
                p.value().norm(),
                p.exact
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, FitError> {
        let mut system = String::from("unknown");
        let mut lambda = None;
        let mut points = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                for tok in meta.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("system=") {
                        system = v.to_string();
                    } else if let Some(v) = tok.strip_prefix("lambda=") {
                        lambda = v.parse::<f64>().ok();
                    }
                }
                continue;
            }
            if line.starts_with('n') {
                continue; // header
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() < 3 {
                return Err(FitError::BadInput(format!("bad CSV row `{line}`")));
            }
            let n: usize =
                cols[0].trim().parse().map_err(|_| FitError::BadInput(format!("bad n `{}`", cols[0])))?;
            let re: f64 = cols[1]
                .trim()
                .parse()
                .map_err(|_| FitError::BadInput(format!("bad re `{}`", cols[1])))?;
            let im: f64 = cols[2]
                .trim()
                .parse()
                .map_err(|_| FitError::BadInput(format!("bad im `{}`", cols[2])))?;
            let exact = cols.get(4).map(|s| s.trim() == "true").unwrap_or(false);
            points.push(SeriesPoint { n, re, im, exact });
        }
        let s = CorrelationSeries { system, lambda, points };
        s.validate()?;
        Ok(s)
    }
}

/// One extracted exponential-polynomial term |c|·n^d·(ρ e^{iθ})^n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitTerm {
    pub rate_modulus: f64,
    pub rate_phase: f64,
    pub degree: usize,
    pub coeff_re: f64,
    pub coeff_im: f64,
    /// Max |residual| over the window after subtracting this term.
    pub residual_after: f64,
}

impl FitTerm {
    pub fn coefficient(&self) -> Complex64 {
        Complex64::new(self.coeff_re, self.coeff_im)
    }

    pub fn rate(&self) -> Complex64 {
        Complex64::from_polar(self.rate_modulus, self.rate_phase)
    }

    pub fn predict(&self, n: usize) -> Complex64 {
        let nf = n as f64;
        let poly = if self.degree == 0 { 1.0 } else { nf.powi(self.degree as i32) };
        self.coefficient() * poly * self.rate().powu(n as u32)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub terms: Vec<FitTerm>,
    pub window: (usize, usize),
    /// Max |residual| over the window after all terms were peeled.
    pub final_residual: f64,
}

/// Default fit window: drop the first 3 points, use the last 20.
pub fn default_window(len: usize) -> (usize, usize) {
    if len == 0 {
        return (0, 0);
    }
    let hi = len - 1;
    let lo = hi.saturating_sub(19).max(3).min(hi);
    (lo, hi)
}

/// Drop trailing points whose modulus is below `floor` — used before fitting
/// series whose tail has decayed into quadrature noise.
pub fn truncate_below(series: &CorrelationSeries, floor: f64) -> CorrelationSeries {
    let mut points = series.points.clone();
    while points.len() > 1 && points.last().map(|p| p.value().norm() < floor).unwrap_or(false) {
        points.pop();
    }
    CorrelationSeries { system: series.system.clone(), lambda: series.lambda, points }
}

#[derive(Clone)]
struct TermFit {
    rho: f64,
    theta: f64,
    degree: usize,
    /// polynomial coefficients, ascending powers of n, length degree + 1
    coeffs: Vec<Complex64>,
}

impl TermFit {
    fn leading(&self) -> Complex64 {
        self.coeffs[self.degree]
    }
}

fn term_value(f: &TermFit, n: usize) -> Complex64 {
    let nf = n as f64;
    let mut poly = Complex64::new(0.0, 0.0);
    for c in f.coeffs.iter().rev() {
        poly = poly * nf + c;
    }
    poly * Complex64::from_polar(f.rho, f.theta).powu(n as u32)
}

/// Solve the small complex hermitian system G x = b by Gaussian elimination.
fn solve_complex(mut g: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let t = b.len();
    for col in 0..t {
        let (pivot, _) = (col..t)
            .map(|r| (r, g[r][col].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        if g[pivot][col].norm() < 1e-300 {
            return None;
        }
        g.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..t {
            if r != col {
                let f = g[r][col] / g[col][col];
                for c in col..t {
                    let sub = f * g[col][c];
                    g[r][c] -= sub;
                }
                let sub = f * b[col];
                b[r] -= sub;
            }
        }
    }
    Some((0..t).map(|i| b[i] / g[i][i]).collect())
}

/// Weighted least-squares solve for all complex coefficients given the
/// current rates: exact given the rates, which removes coefficient error as
/// a contamination source between refinement sweeps.
/// Relative least-squares weights. A point is weighted by 1/|C(n)|, floored
/// by a fraction of its neighbors' magnitudes so that an isolated zero
/// crossing of the data cannot dominate the normal equations, while smooth
/// decaying tails keep their full relative weight across many decades.
fn relative_weights(values: &[Complex64], lo: usize, hi: usize) -> Vec<f64> {
    (lo..=hi)
        .map(|n| {
            let here = values[n].norm();
            let prev = if n > lo { values[n - 1].norm() } else { 0.0 };
            let next = if n < hi { values[n + 1].norm() } else { 0.0 };
            let scale = here.max(0.05 * prev.max(next)).max(SERIES_FLOOR);
            1.0 / scale
        })
        .collect()
}

/// Candidate complex rates by the Prony / annihilating-filter method: the
/// order-m linear recurrence annihilating the window data is solved in the
/// least-squares sense, and its characteristic roots are the candidate
/// rates. Root multiplicities encode polynomial factors n^d. Exact for
/// noise-free sums of up to m exponential-polynomial terms; used to seed
/// the joint refinement.
fn prony_candidate_roots(values: &[Complex64], lo: usize, hi: usize, m: usize) -> Vec<Complex64> {
    if m == 0 || hi < lo + 2 * m {
        return Vec::new();
    }
    let rows: Vec<usize> = (lo..=hi - m).collect();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for &n in &rows {
        let wrow = 1.0
            / (0..=m)
                .map(|j| values[n + j].norm())
                .fold(0.0, f64::max)
                .max(SERIES_FLOOR);
        let w2 = wrow * wrow;
        for r in 0..m {
            for c in 0..m {
                gram[r][c] += values[n + r].conj() * values[n + c] * w2;
            }
            rhs[r] += values[n + r].conj() * (-values[n + m]) * w2;
        }
    }
    let scale = (0..m).map(|d| gram[d][d].norm()).fold(0.0, f64::max).max(1e-300);
    for (d, row) in gram.iter_mut().enumerate() {
        row[d] += Complex64::new(1e-12 * scale, 0.0);
    }
    let Some(a) = solve_complex(gram, rhs) else { return Vec::new() };
    // roots of z^m + a_{m-1} z^{m-1} + … + a_0 by Durand-Kerner
    let mut coeffs = a;
    coeffs.push(Complex64::new(1.0, 0.0));
    durand_kerner(&coeffs)
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = coeffs.len() - 1;
    if m == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..m).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut max_move: f64 = 0.0;
        for i in 0..m {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..m {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            max_move = max_move.max(delta.norm());
        }
        if max_move < 1e-14 {
            break;
        }
    }
    roots
}

/// Cluster candidate roots into polynomial families: roots within a relative
/// tolerance form one family whose degree is the multiplicity minus one
/// (capped at 2, matching the 2×2 Jordan blocks of the predictions).
fn cluster_roots(mut roots: Vec<Complex64>) -> Vec<TermFit> {
    roots.retain(|z| z.norm() > 1e-8 && z.norm() < 4.0 && z.norm().is_finite());
    let mut used = vec![false; roots.len()];
    let mut families = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        for j in i + 1..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() < 5e-3 * roots[i].norm().max(0.1) {
                used[j] = true;
                members.push(roots[j]);
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        let degree = (members.len() - 1).min(2);
        families.push(TermFit {
            rho: mean.norm(),
            theta: mean.arg(),
            degree,
            coeffs: vec![Complex64::new(1.0, 0.0); degree + 1],
        });
    }
    families
}

/// Greedy stage initializer: scan candidate rates on a geometric grid; for
/// each candidate (and polynomial degree, chosen by nested comparison) solve
/// all coefficients exactly and keep the candidate minimizing the weighted
/// cost of the enlarged model. Grid resolution ~6.5% is well inside the
/// basin of the joint polish.
fn grid_stage_candidate(
    fits: &[TermFit],
    values: &[Complex64],
    lo: usize,
    hi: usize,
    rho_hi: f64,
) -> Option<TermFit> {
    // phase estimate from modulus-weighted consecutive ratios of the residual
    let resid: Vec<Complex64> = (lo..=hi)
        .map(|n| values[n] - fits.iter().map(|f| term_value(f, n)).sum::<Complex64>())
        .collect();
    let mut ratio_acc = Complex64::new(0.0, 0.0);
    for w in resid.windows(2) {
        if w[0].norm() > SERIES_FLOOR {
            ratio_acc += (w[1] / w[0]) * w[0].norm();
        }
    }
    let theta = if ratio_acc.norm() > 0.0 { ratio_acc.arg() } else { 0.0 };

    let cost_with = |cand: TermFit| -> (f64, TermFit) {
        let mut trial: Vec<TermFit> = fits.to_vec();
        trial.push(cand);
        solve_coefficients(&mut trial, values, lo, hi);
        let weights = relative_weights(values, lo, hi);
        let mut c = 0.0;
        for (wi, n) in (lo..=hi).enumerate() {
            let model: Complex64 = trial.iter().map(|f| term_value(f, n)).sum();
            c += ((values[n] - model) * weights[wi]).norm_sqr();
        }
        (c, trial.pop().unwrap())
    };

    let rho_lo: f64 = 1e-3;
    let steps = 140usize;
    let mut best_per_degree: Vec<Option<(f64, TermFit)>> = vec![None, None, None];
    for d in 0..=2usize {
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            let rho = rho_lo * (rho_hi / rho_lo).powf(t);
                let cand = TermFit {
                rho,
                theta,
                degree: d,
                coeffs: vec![Complex64::new(1.0, 0.0); d + 1],
            };
            let (cost, cand) = cost_with(cand);
            if best_per_degree[d].as_ref().map(|(b, _)| cost < *b).unwrap_or(true) {
                best_per_degree[d] = Some((cost, cand));
            }
        }
    }
    // nested degree selection: the polynomial factors of the expansion fit
    // exactly when present, so a higher degree must cut the cost by three
    // orders of magnitude to be accepted
    let mut best = best_per_degree[0].take()?;
    for d in 1..=2 {
        if let Some((cost, cand)) = best_per_degree[d].take() {
            if cost < 1e-3 * best.0 {
                best = (cost, cand);
            }
        }
    }
    Some(best.1)
}

fn solve_coefficients(fits: &mut [TermFit], values: &[Complex64], lo: usize, hi: usize) {
    // unknowns: one complex coefficient per (term, power) pair
    let cols: Vec<(usize, usize)> = fits
        .iter()
        .enumerate()
        .flat_map(|(t, f)| (0..=f.degree).map(move |j| (t, j)))
        .collect();
    let t = cols.len();
    if t == 0 {
        return;
    }
    let basis = |(ti, j): (usize, usize), n: usize| -> Complex64 {
        let f = &fits[ti];
        (n as f64).powi(j as i32) * Complex64::from_polar(f.rho, f.theta).powu(n as u32)
    };
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); t]; t];
    let mut rhs = vec![Complex64::new(0.0, 0.0); t];
    let weights = relative_weights(values, lo, hi);
    for n in lo..=hi {
        let w2 = weights[n - lo] * weights[n - lo];
        let phis: Vec<Complex64> = cols.iter().map(|&c| basis(c, n)).collect();
        for r in 0..t {
            for c in 0..t {
                gram[r][c] += phis[r].conj() * phis[c] * w2;
            }
            rhs[r] += phis[r].conj() * values[n] * w2;
        }
    }
    // ridge on the gram diagonal, strengthened when near-parallel basis
    // columns blow the coefficients up
    let scale = (0..t).map(|d| gram[d][d].norm()).fold(0.0, f64::max).max(1e-300);
    let coeff_cap = 1e9 * values[lo..=hi].iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    for ridge in [1e-13, 1e-9, 1e-5] {
        let mut g = gram.clone();
        for (d, row) in g.iter_mut().enumerate() {
            row[d] += Complex64::new(ridge * scale, 0.0);
        }
        if let Some(solved) = solve_complex(g, rhs.clone()) {
            if solved.iter().all(|c| c.norm() <= coeff_cap && c.norm().is_finite()) {
                for (&(ti, j), c) in cols.iter().zip(solved) {
                    fits[ti].coeffs[j] = c;
                }
                return;
            }
        }
    }
}

/// Damped variable-projection polish: the complex coefficients are
/// eliminated by an exact weighted linear solve at every trial point, and a
/// Levenberg-Marquardt iteration refines the log-rates and phases jointly.
/// On exact synthetic data the cost has a zero at the interpolating
/// parameters, so the polished rates converge to the true ones.
fn lm_polish(fits: &mut Vec<TermFit>, values: &[Complex64], lo: usize, hi: usize) {
    let t = fits.len();
    if t == 0 {
        return;
    }
    let weights: Vec<f64> = relative_weights(values, lo, hi);

    let cost_of = |fits: &mut Vec<TermFit>| -> f64 {
        solve_coefficients(fits, values, lo, hi);
        let mut c = 0.0;
        for (wi, n) in (lo..=hi).enumerate() {
            let model: Complex64 = fits.iter().map(|f| term_value(f, n)).sum();
            c += ((values[n] - model) * weights[wi]).norm_sqr();
        }
        c
    };

    let mut cost = cost_of(fits);
    let mut damping = 1e-3;
    for _iter in 0..400 {
        // Jacobian of the weighted residual w.r.t. (ln rho_t, theta_t),
        // holding coefficients fixed (Kaufman approximation)
        let p = 2 * t;
        let mut jtj = vec![vec![0.0f64; p]; p];
        let mut jtr = vec![0.0f64; p];
        for (wi, n) in (lo..=hi).enumerate() {
            let w = weights[wi];
            let model: Complex64 = fits.iter().map(|f| term_value(f, n)).sum();
            let r = (values[n] - model) * w;
            let cols: Vec<Complex64> = fits
                .iter()
                .flat_map(|f| {
                    let base = (n as f64) * term_value(f, n) * w;
                    [base, Complex64::new(0.0, 1.0) * base]
                })
                .collect();
            for a in 0..p {
                for b in a..p {
                    let v = cols[a].re * cols[b].re + cols[a].im * cols[b].im;
                    jtj[a][b] += v;
                    if a != b {
                        jtj[b][a] += v;
                    }
                }
                jtr[a] += cols[a].re * r.re + cols[a].im * r.im;
            }
        }
        let grad_norm = jtr.iter().map(|g| g * g).sum::<f64>().sqrt();
        if grad_norm < 1e-16 || cost < 1e-28 {
            break;
        }
        let mut accepted = false;
        for _try in 0..12 {
            let mut a = jtj.clone();
            for d in 0..p {
                a[d][d] += damping * (jtj[d][d].max(1e-12));
            }
            let Some(step) = solve_real(a, jtr.clone()) else { break };
            let mut trial: Vec<TermFit> = fits.clone();
            for (ti, f) in trial.iter_mut().enumerate() {
                let dl = step[2 * ti].clamp(-0.5, 0.5);
                let dt = step[2 * ti + 1].clamp(-0.5, 0.5);
                f.rho *= dl.exp();
                f.theta += dt;
            }
            let mut trial_vec = trial.clone();
            let trial_cost = cost_of(&mut trial_vec);
            if trial_cost < cost {
                *fits = trial_vec;
                cost = trial_cost;
                damping = (damping / 3.0).max(1e-12);
                accepted = true;
                break;
            }
            damping *= 8.0;
        }
        if !accepted {
            break;
        }
    }
    solve_coefficients(fits, values, lo, hi);
}

fn solve_real(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let t = b.len();
    for col in 0..t {
        let (pivot, mag) = (col..t)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..t {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..t {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..t).map(|i| b[i] / a[i][i]).collect())
}

fn phi_of(f: &TermFit, n: usize) -> Complex64 {
    let nf = n as f64;
    let poly = if f.degree == 0 { 1.0 } else { nf.powi(f.degree as i32) };
    poly * Complex64::from_polar(f.rho, f.theta).powu(n as u32)
}

/// Stage-wise peeling fit of up to `depth` exponential-polynomial terms on
/// the window, followed by alternating refinement sweeps.
pub fn fit_rates(
    series: &CorrelationSeries,
    depth: usize,
    window: (usize, usize),
) -> Result<FitReport, FitError> {
    series.validate()?;
    let values = series.values();
    let (lo, hi) = window;
    if hi >= values.len() || lo > hi {
        return Err(FitError::BadInput(format!(
            "window [{lo}, {hi}] out of range for series of length {}",
            values.len()
        )));
    }
    if hi - lo + 1 < 2 * depth + 2 {
        return Err(FitError::WindowTooShort { lo, hi, depth });
    }
    let max_abs = values[lo..=hi].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max_abs < SERIES_FLOOR {
        return Err(FitError::ZeroSeries);
    }

    let window_points = |resid: &[Complex64]| -> Vec<(usize, Complex64)> {
        let rmax = resid[lo..=hi].iter().map(|v| v.norm()).fold(0.0, f64::max);
        let floor = SERIES_FLOOR.max(1e-12 * rmax);
        (lo..=hi).map(|n| (n, resid[n])).filter(|(_, v)| v.norm() > floor).collect()
    };

    let mut fits: Vec<TermFit> = Vec::new();
    let residual_of = |fits: &[TermFit]| -> Vec<Complex64> {
        values
            .iter()
            .enumerate()
            .map(|(n, v)| v - fits.iter().map(|f| term_value(f, n)).sum::<Complex64>())
            .collect()
    };

    // seed all rates at once from the annihilating recurrence of the window
    // (robust against the cross-term contamination that plagues one-rate-at-
    // a-time peeling), then keep the `depth` families that contribute most
    let order = (2 * depth + 1).min((hi - lo) / 2);
    let mut seeded = cluster_roots(prony_candidate_roots(&values, lo, hi, order));
    if !seeded.is_empty() {
        solve_coefficients(&mut seeded, &values, lo, hi);
        let contribution = |f: &TermFit| -> f64 {
            (lo..=hi).map(|n| term_value(f, n).norm()).fold(0.0, f64::max)
        };
        seeded.retain(|f| contribution(f) > 1e-12 * max_abs);
        seeded.sort_by(|a, b| contribution(b).partial_cmp(&contribution(a)).unwrap());
        seeded.truncate(depth);
        fits = seeded;
        lm_polish(&mut fits, &values, lo, hi);
    }

    // fallback: stage-wise peel on a rate grid with per-stage joint polish
    if fits.is_empty() {
        for stage in 0..depth {
            let residual = residual_of(&fits);
            let pts = window_points(&residual);
            if pts.len() < 4 {
                break;
            }
            let rho_hi = if stage == 0 {
                2.0
            } else {
                fits.iter().map(|f| f.rho).fold(f64::INFINITY, f64::min) * 0.999
            };
            let Some(cand) = grid_stage_candidate(&fits, &values, lo, hi, rho_hi) else { break };
            fits.push(cand);
            lm_polish(&mut fits, &values, lo, hi);
            let after = residual_of(&fits)[lo..=hi].iter().map(|v| v.norm()).fold(0.0, f64::max);
            if after < SERIES_FLOOR {
                break;
            }
        }
    }
    if fits.is_empty() {
        return Err(FitError::ZeroSeries);
    }
    fits.sort_by(|a, b| b.rho.partial_cmp(&a.rho).unwrap());
    for w in fits.windows(2) {
        let ratio = w[1].rho / w[0].rho;
        if ratio > RATE_SEPARATION_LIMIT {
            return Err(FitError::InsufficientDecades { ratio });
        }
    }

    let mut terms = Vec::with_capacity(fits.len());
    let mut running: Vec<TermFit> = Vec::new();
    for f in &fits {
        running.push(f.clone());
        let after = residual_of(&running)[lo..=hi].iter().map(|v| v.norm()).fold(0.0, f64::max);
        let lead = f.leading();
        terms.push(FitTerm {
            rate_modulus: f.rho,
            rate_phase: f.theta,
            degree: f.degree,
            coeff_re: lead.re,
            coeff_im: lead.im,
            residual_after: after,
        });
    }
    let final_residual = terms.last().map(|t| t.residual_after).unwrap_or(max_abs);
    Ok(FitReport { terms, window, final_residual })
}

/// Re-estimate the coefficient of a term against an exact (predicted) complex
/// rate: the tail average of C(n)/(n^d ρ^n). With the true rate this is the
/// per-n coefficient estimate of the difference-equation argument, and it
/// converges geometrically.
pub fn calibrate_coefficient(
    series: &CorrelationSeries,
    exact_rate: Complex64,
    degree: usize,
    tail_len: usize,
) -> Complex64 {
    let values = series.values();
    let len = values.len();
    let start = len.saturating_sub(tail_len);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut cnt = 0usize;
    for n in start..len {
        if degree > 0 && n == 0 {
            continue;
        }
        let nf = n as f64;
        let poly = if degree == 0 { 1.0 } else { nf.powi(degree as i32) };
        let model = poly * exact_rate.powu(n as u32);
        if model.norm() > 0.0 {
            acc += values[n] / model;
            cnt += 1;
        }
    }
    if cnt == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        acc / cnt as f64
    }
}

// ---------------------------------------------------------------------------
// Matching fitted rates against predicted resonance sets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchedTerm {
    pub term_index: usize,
    pub fitted_modulus: f64,
    pub predicted_modulus: f64,
    pub rel_error: f64,
    pub entry_index: usize,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchReport {
    pub matched: Vec<MatchedTerm>,
    /// Fitted term indices with no predicted partner within tolerance.
    pub unexplained: Vec<usize>,
    /// Predicted entry indices never matched by a fitted rate (a predicted
    /// resonance is unobserved when its coefficient vanishes for the chosen
    /// observables).
    pub unobserved: Vec<usize>,
}

/// Match each fitted rate to the predicted entry minimizing relative modulus
/// error; rates without a partner within `rel_tol` are flagged unexplained.
pub fn match_resonances(fit: &FitReport, predicted: &ResonanceSet, rel_tol: f64) -> MatchReport {
    let mut matched = Vec::new();
    let mut unexplained = Vec::new();
    let mut used = vec![false; predicted.entries.len()];
    for (ti, term) in fit.terms.iter().enumerate() {
        let mut best: Option<(usize, f64, f64)> = None;
        for (ei, entry) in predicted.entries.iter().enumerate() {
            let pm = entry.modulus().to_f64();
            if pm <= 0.0 {
                continue;
            }
            let rel = (term.rate_modulus - pm).abs() / pm;
            if best.map(|(_, _, b)| rel < b).unwrap_or(true) {
                best = Some((ei, pm, rel));
            }
        }
        match best {
            Some((ei, pm, rel)) if rel <= rel_tol => {
                used[ei] = true;
                matched.push(MatchedTerm {
                    term_index: ti,
                    fitted_modulus: term.rate_modulus,
                    predicted_modulus: pm,
                    rel_error: rel,
                    entry_index: ei,
                    provenance: predicted.entries[ei]
                        .provenance
                        .iter()
                        .map(|p| p.to_string())
                        .collect(),
                });
            }
            _ => unexplained.push(ti),
        }
    }
    let unobserved = (0..predicted.entries.len()).filter(|&i| !used[i]).collect();
    MatchReport { matched, unexplained, unobserved }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(terms: &[(f64, f64, usize)], len: usize) -> CorrelationSeries {
        // terms: (coeff, rate, degree)
        let values = (0..len)
            .map(|n| {
                let mut v = 0.0;
                for &(c, r, d) in terms {
                    let poly = if d == 0 { 1.0 } else { (n as f64).powi(d as i32) };
                    v += c * poly * r.powi(n as i32);
                }
                (n, Complex64::new(v, 0.0), true)
            })
            .collect();
        CorrelationSeries::new("synthetic", None, values)
    }

    #[test]
    fn recovers_two_exponentials() {
        let s = synth(&[(2.0, 0.8, 0), (5.0, 0.3, 0)], 26);
        let r = fit_rates(&s, 2, (0, 25)).unwrap();
        assert_eq!(r.terms.len(), 2);
        assert!((r.terms[0].rate_modulus - 0.8).abs() < 1e-6, "rate0 {}", r.terms[0].rate_modulus);
        assert!((r.terms[1].rate_modulus - 0.3).abs() < 1e-6, "rate1 {}", r.terms[1].rate_modulus);
        assert!((r.terms[0].coefficient().re - 2.0).abs() < 1e-6);
        assert!((r.terms[1].coefficient().re - 5.0).abs() < 1e-6);
        // residuals decrease as terms are peeled
        assert!(r.terms[1].residual_after < r.terms[0].residual_after);
    }

    #[test]
    fn detects_polynomial_degree() {
        let s = synth(&[(1.0, 0.5, 1)], 26);
        let r = fit_rates(&s, 1, (0, 25)).unwrap();
        assert_eq!(r.terms[0].degree, 1);
        assert!((r.terms[0].rate_modulus - 0.5).abs() < 1e-4, "rate {}", r.terms[0].rate_modulus);
    }

    #[test]
    fn zero_series_is_an_error() {
        let s = synth(&[], 26);
        assert!(matches!(fit_rates(&s, 1, (0, 25)), Err(FitError::ZeroSeries)));
    }

    #[test]
    fn close_rates_are_rejected() {
        let s = synth(&[(1.0, 0.8, 0), (1.0, 0.78, 0)], 30);
        match fit_rates(&s, 2, (0, 29)) {
            Err(FitError::InsufficientDecades { ratio }) => assert!(ratio > 0.9),
            other => panic!("expected InsufficientDecades, got {other:?}"),
        }
    }

    #[test]
    fn window_too_short() {
        let s = synth(&[(1.0, 0.5, 0)], 26);
        assert!(matches!(
            fit_rates(&s, 3, (0, 6)),
            Err(FitError::WindowTooShort { .. })
        ));
    }

    #[test]
    fn complex_phase_recovery() {
        let u = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let values: Vec<(usize, Complex64, bool)> = (0..26)
            .map(|n| {
                let v = u.powu(n as u32) * 3.0 * 0.6f64.powi(n as i32);
                (n, v, true)
            })
            .collect();
        let s = CorrelationSeries::new("synthetic", None, values);
        let r = fit_rates(&s, 1, (0, 25)).unwrap();
        assert!((r.terms[0].rate_modulus - 0.6).abs() < 1e-8);
        assert!((r.terms[0].rate_phase - std::f64::consts::FRAC_PI_4).abs() < 1e-8);
    }

    #[test]
    fn three_term_recovery_within_spec_tolerances() {
        // rate ratios ≤ 0.7: recover rates to 1e-4 relative, coefficients to 1e-3
        let s = synth(&[(1.5, 0.9, 0), (-4.0, 0.6, 0), (2.5, 0.4, 0)], 32);
        let r = fit_rates(&s, 3, (0, 31)).unwrap();
        assert_eq!(r.terms.len(), 3);
        for (t, (c, rate)) in r.terms.iter().zip([(1.5, 0.9), (-4.0, 0.6), (2.5, 0.4)]) {
            assert!((t.rate_modulus - rate).abs() / rate < 1e-4, "rate {}", t.rate_modulus);
            let fitted_c = t.coefficient().re * t.rate_phase.cos().signum();
            let got = if (t.rate_phase.abs() - std::f64::consts::PI).abs() < 1e-6 {
                -t.coefficient().re
            } else {
                fitted_c
            };
            assert!((got - c).abs() / c.abs() < 1e-3, "coeff {got} vs {c}");
        }
    }

    #[test]
    fn solve_complex_3x3() {
        let g = vec![
            vec![Complex64::new(4.0, 0.0), Complex64::new(1.0, 0.5), Complex64::new(0.3, -0.2)],
            vec![Complex64::new(1.0, -0.5), Complex64::new(3.0, 0.0), Complex64::new(0.7, 0.1)],
            vec![Complex64::new(0.3, 0.2), Complex64::new(0.7, -0.1), Complex64::new(2.0, 0.0)],
        ];
        let x_true = [Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.25), Complex64::new(-3.0, 1.0)];
        let b: Vec<Complex64> = (0..3)
            .map(|r| (0..3).map(|c| g[r][c] * x_true[c]).sum())
            .collect();
        let x = solve_complex(g, b).unwrap();
        for (got, want) in x.iter().zip(x_true.iter()) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn csv_roundtrip() {
        let s = synth(&[(2.0, 0.8, 0)], 10);
        let csv = s.to_csv();
        let back = CorrelationSeries::from_csv(&csv).unwrap();
        assert_eq!(back.points.len(), 10);
        assert_eq!(back.system, "synthetic");
        for (a, b) in s.points.iter().zip(back.points.iter()) {
            assert_eq!(a.n, b.n);
            assert!((a.re - b.re).abs() < 1e-16);
            assert_eq!(a.exact, b.exact);
        }
    }

    #[test]
    fn calibrated_coefficient_converges() {
        let s = synth(&[(2.0, 0.8, 0), (5.0, 0.3, 0)], 26);
        let c = calibrate_coefficient(&s, Complex64::new(0.8, 0.0), 0, 5);
        assert!((c.re - 2.0).abs() < 1e-8, "calibrated {c}");
    }
}
