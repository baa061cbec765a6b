//! Enumerators for every predicted spectrum: Ruelle resonance sets of
//! pseudo-Anosov maps, basic-current and (iterated) invariant-distribution
//! spectra, geodesic-flow resonances parameterized by a Laplace spectrum,
//! Heisenberg-automorphism resonances, and transfer-cocycle Lyapunov spectra
//! driven by Kontsevich–Zorich exponents.
//!
//! Values are kept in extended decimal precision so that genuine algebraic
//! collisions (for example `λ_2 = 1/2` in a translation transfer spectrum)
//! merge while floating noise does not: the merge tolerance is relative
//! 1e-30 at the default 50-digit precision.

use crate::precision::{PrecComplex, PrecFloat, DEFAULT_DIGITS};
use crate::spectral::SpectrumData;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Relative tolerance below which two resonance values are considered the
/// same algebraic value and merged.
pub const MERGE_REL_TOL_EXP: u32 = 30;

#[derive(Debug, Error)]
pub enum ResonanceError {
    #[error("phase list for z = {z} has {got} entries, expected |z| = {expected}")]
    PhaseCountMismatch { z: i64, expected: usize, got: usize },
    #[error("supplied phase for z = {z}, i = {i} is not on the unit circle (|u| = {modulus})")]
    NonUnitPhase { z: i64, i: usize, modulus: f64 },
    #[error("Kontsevich–Zorich exponents are not flagged hyperbolic")]
    KzNotHyperbolic,
    #[error("invalid input: {0}")]
    BadInput(String),
}

// ---------------------------------------------------------------------------
// Input types
// ---------------------------------------------------------------------------

/// Laplace spectrum of a hyperbolic surface: distinct eigenvalues sorted
/// ascending, with multiplicities; 0 is present with multiplicity 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaplaceSpectrum {
    pub entries: Vec<LaplaceEigenvalue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaplaceEigenvalue {
    pub mu: f64,
    pub multiplicity: usize,
}

impl LaplaceSpectrum {
    pub fn new(entries: Vec<(f64, usize)>) -> Result<Self, ResonanceError> {
        let entries: Vec<LaplaceEigenvalue> = entries
            .into_iter()
            .map(|(mu, multiplicity)| LaplaceEigenvalue { mu, multiplicity })
            .collect();
        let s = LaplaceSpectrum { entries };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ResonanceError> {
        if self.entries.is_empty() {
            return Err(ResonanceError::BadInput("empty Laplace spectrum".into()));
        }
        for w in self.entries.windows(2) {
            if w[0].mu >= w[1].mu {
                return Err(ResonanceError::BadInput(
                    "Laplace eigenvalues must be distinct and sorted ascending".into(),
                ));
            }
        }
        if self.entries[0].mu != 0.0 || self.entries[0].multiplicity != 1 {
            return Err(ResonanceError::BadInput(
                "Laplace spectrum must contain 0 with multiplicity 1 (connected surface)".into(),
            ));
        }
        if self.entries.iter().any(|e| e.mu < 0.0 || e.multiplicity == 0) {
            return Err(ResonanceError::BadInput(
                "Laplace eigenvalues must be ≥ 0 with positive multiplicity".into(),
            ));
        }
        Ok(())
    }
}

/// Kontsevich–Zorich exponents `1 > λ_2 ≥ … ≥ λ_g ≥ 0` (λ_1 = 1 implicit).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KzExponents {
    pub genus: usize,
    /// λ_2, …, λ_g.
    pub exponents: Vec<f64>,
    /// When set, the exponents are asserted to lie strictly inside (0, 1).
    pub hyperbolic: bool,
}

impl KzExponents {
    pub fn new(genus: usize, exponents: Vec<f64>, hyperbolic: bool) -> Result<Self, ResonanceError> {
        if genus == 0 || exponents.len() + 1 != genus {
            return Err(ResonanceError::BadInput(format!(
                "genus {genus} needs {} exponents λ_2…λ_g, got {}",
                genus.saturating_sub(1),
                exponents.len()
            )));
        }
        if exponents.first().map(|&l| l >= 1.0).unwrap_or(false) {
            return Err(ResonanceError::BadInput("λ_2 must satisfy λ_2 < 1".into()));
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(ResonanceError::BadInput("exponents must be non-increasing".into()));
        }
        if exponents.last().map(|&l| l < 0.0).unwrap_or(false) {
            return Err(ResonanceError::BadInput("λ_g must be ≥ 0".into()));
        }
        if hyperbolic && exponents.iter().any(|&l| l <= 0.0 || l >= 1.0) {
            return Err(ResonanceError::BadInput(
                "hyperbolic KZ exponents must lie strictly inside (0, 1)".into(),
            ));
        }
        Ok(KzExponents { genus, exponents, hyperbolic })
    }
}

/// Heisenberg phases `u_{z,i}`, one list of |z| unit complex numbers per
/// central character z.
#[derive(Debug, Clone, Default)]
pub struct HeisenbergPhases {
    pub by_z: BTreeMap<i64, Vec<Complex64>>,
}

// ---------------------------------------------------------------------------
// Resonance entries
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

impl Multiplicity {
    fn merge(&self, other: &Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => write!(f, "infinite"),
        }
    }
}

/// Geodesic branch of ν_±(μ) = (1 ± √(1-4μ))/2; `Merged` marks the single
/// family at μ = 1/4 where both branches coincide and Jordan blocks appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
    Merged,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Plus => write!(f, "+"),
            Branch::Minus => write!(f, "-"),
            Branch::Merged => write!(f, "jordan"),
        }
    }
}

/// Base family of a horocycle invariant-distribution layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HoroFamily {
    Nu { mu_index: usize, branch: Branch },
    Trivial { n: usize },
}

/// Structured origin of a resonance entry (system tag plus indices).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// The simple leading entry: constants / invariant area / invariant volume.
    Constant,
    /// μ_i λ^{-j} in the pseudo-Anosov resonance set (i is 1-based).
    Pa { i: usize, j: usize },
    /// λ itself in the basic-current spectrum.
    BasicTop,
    /// μ_i λ^{-j} on basic currents (j ≥ 0).
    Basic { i: usize, j: usize },
    /// μ_i λ^{-j} on (iterated) invariant distributions (j ≥ 1).
    Inv { i: usize, j: usize },
    /// Rate -ν_±(μ) - j for the geodesic flow.
    Geodesic { mu_index: usize, mu: f64, branch: Branch, j: usize },
    /// Trivial band rate -n of the geodesic flow.
    GeodesicTrivial { n: usize },
    /// Layer λ_base - shift of the horocycle invariant-distribution spectrum.
    Horocycle { family: HoroFamily, shift: usize },
    /// u_{z,i} λ^{-k-1/2} with known phase.
    Heisenberg { z: i64, i: usize, k: usize },
    /// Modulus-only family λ^{-k-1/2} when phases are unknown.
    HeisenbergModulus { k: usize },
    /// ±λ_i - j in the translation transfer spectrum (sign +1 or -1).
    Transfer { sign: i8, i: usize, j: usize },
    /// 1/2 - k in the Heisenberg transfer spectrum.
    TransferHeisenberg { k: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Constant => write!(f, "constant"),
            Provenance::Pa { i, j } => write!(f, "pa(i={i},j={j})"),
            Provenance::BasicTop => write!(f, "basic(top)"),
            Provenance::Basic { i, j } => write!(f, "basic(i={i},j={j})"),
            Provenance::Inv { i, j } => write!(f, "inv(i={i},j={j})"),
            Provenance::Geodesic { mu, branch, j, .. } => {
                write!(f, "geodesic(mu={mu},{branch},j={j})")
            }
            Provenance::GeodesicTrivial { n } => write!(f, "trivial(n={n})"),
            Provenance::Horocycle { family, shift } => match family {
                HoroFamily::Nu { mu_index, branch } => {
                    write!(f, "horo(nu[{mu_index}]{branch},shift={shift})")
                }
                HoroFamily::Trivial { n } => write!(f, "horo(trivial(n={n}),shift={shift})"),
            },
            Provenance::Heisenberg { z, i, k } => write!(f, "heis(z={z},i={i},k={k})"),
            Provenance::HeisenbergModulus { k } => write!(f, "heis-mod(k={k})"),
            Provenance::Transfer { sign, i, j } => {
                write!(f, "transfer({},i={i},j={j})", if *sign >= 0 { "+" } else { "-" })
            }
            Provenance::TransferHeisenberg { k } => write!(f, "transfer-heis(k={k})"),
        }
    }
}

/// One resonance: a complex map eigenvalue or flow exponent, with
/// multiplicity, Jordan block sizes and all contributing provenances.
#[derive(Debug, Clone)]
pub struct Resonance {
    pub value: PrecComplex,
    pub multiplicity: Multiplicity,
    pub jordan_blocks: Vec<usize>,
    pub provenance: Vec<Provenance>,
    /// Entry records only a modulus; the phase exists but is not computed.
    pub phase_unknown: bool,
}

impl Resonance {
    fn simple(value: PrecComplex, prov: Provenance) -> Self {
        Resonance {
            value,
            multiplicity: Multiplicity::Finite(1),
            jordan_blocks: Vec::new(),
            provenance: vec![prov],
            phase_unknown: false,
        }
    }

    pub fn modulus(&self) -> PrecFloat {
        self.value.modulus()
    }
}

/// Whether entry values are map eigenvalues (sorted by descending modulus)
/// or flow rates / Lyapunov exponents (sorted by descending real part, which
/// on the decaying part equals ascending |Re|).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueKind {
    MapEigenvalue,
    FlowRate,
}

/// Truncation parameters actually applied to a set.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Truncation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ResonanceSet {
    pub system: String,
    pub kind: ValueKind,
    pub truncation: Truncation,
    pub entries: Vec<Resonance>,
    /// False for family-separated sets (geodesic, horocycle), where distinct
    /// provenance families are never merged even at equal rates.
    pub merged: bool,
    pub precision: usize,
}

impl ResonanceSet {
    /// Entry whose value is nearest `v` in modulus, with its index.
    pub fn nearest_by_modulus(&self, v: f64) -> Option<(usize, &Resonance)> {
        self.entries
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let da = (a.modulus().to_f64() - v).abs();
                let db = (b.modulus().to_f64() - v).abs();
                da.partial_cmp(&db).unwrap()
            })
            .map(|(i, r)| (i, r))
    }

    pub fn find_value(&self, re: f64, im: f64, tol: f64) -> Option<&Resonance> {
        self.entries.iter().find(|r| {
            let c = r.value.to_c64();
            (c.re - re).abs() <= tol && (c.im - im).abs() <= tol
        })
    }
}

fn merge_tol(scale: &PrecFloat) -> PrecFloat {
    let digits = scale.digits().max(DEFAULT_DIGITS);
    let eps = PrecFloat::parse(&format!("1e-{MERGE_REL_TOL_EXP}"), digits).unwrap();
    let s = scale.abs();
    if s > PrecFloat::one(digits) {
        &eps * &s
    } else {
        // relative to the larger magnitude, never below absolute 1e-30
        let rel = &eps * &s;
        if rel > eps {
            rel
        } else {
            eps
        }
    }
}

/// Merge entries whose values coincide within the collision tolerance:
/// multiplicities add, provenance lists concatenate, Jordan data concatenates.
fn merge_entries(entries: Vec<Resonance>) -> Vec<Resonance> {
    let mut out: Vec<Resonance> = Vec::new();
    for e in entries {
        let mut absorbed = false;
        for o in out.iter_mut() {
            if o.phase_unknown != e.phase_unknown {
                continue;
            }
            let scale = {
                let a = o.value.modulus();
                let b = e.value.modulus();
                if a > b {
                    a
                } else {
                    b
                }
            };
            if o.value.dist(&e.value) <= merge_tol(&scale) {
                o.multiplicity = o.multiplicity.merge(&e.multiplicity);
                o.provenance.extend(e.provenance.iter().cloned());
                o.jordan_blocks.extend(e.jordan_blocks.iter().copied());
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            out.push(e);
        }
    }
    out
}

fn sort_entries(entries: &mut [Resonance], kind: ValueKind) {
    match kind {
        ValueKind::MapEigenvalue => entries.sort_by(|a, b| {
            b.value
                .modulus_sq()
                .cmp(&a.value.modulus_sq())
                .then_with(|| b.value.re.cmp(&a.value.re))
                .then_with(|| b.value.im.cmp(&a.value.im))
        }),
        ValueKind::FlowRate => entries.sort_by(|a, b| {
            b.value
                .re
                .cmp(&a.value.re)
                .then_with(|| b.value.im.cmp(&a.value.im))
        }),
    }
}

fn build_set(
    system: &str,
    kind: ValueKind,
    truncation: Truncation,
    entries: Vec<Resonance>,
    merge: bool,
    precision: usize,
) -> ResonanceSet {
    let mut entries = if merge { merge_entries(entries) } else { entries };
    sort_entries(&mut entries, kind);
    ResonanceSet { system: system.into(), kind, truncation, entries, merged: merge, precision }
}

// ---------------------------------------------------------------------------
// Pseudo-Anosov enumerators
// ---------------------------------------------------------------------------

/// Ruelle resonances of a pseudo-Anosov map: {1} with multiplicity 1, plus
/// μ_i λ^{-j} for i ∈ {2,…,2g-1} and 1 ≤ j ≤ j_max, with multiplicity j.
pub fn pa_resonances(spec: &SpectrumData, j_max: usize) -> ResonanceSet {
    let d = spec.precision;
    let mut entries = vec![Resonance::simple(PrecComplex::one(d), Provenance::Constant)];
    push_mu_lambda_entries(spec, 1, j_max, &mut entries, |i, j| {
        (Multiplicity::Finite(j), Provenance::Pa { i, j })
    });
    build_set(
        "pa",
        ValueKind::MapEigenvalue,
        Truncation { j_max: Some(j_max), ..Default::default() },
        entries,
        true,
        d,
    )
}

/// Spectrum of the pushforward on basic currents:
/// {λ} ∪ {μ_i λ^{-j}, i ∈ {2,…,2g-1}, 0 ≤ j ≤ j_max}.
pub fn basic_current_spectrum(spec: &SpectrumData, j_max: usize) -> ResonanceSet {
    let d = spec.precision;
    let mut entries = vec![Resonance::simple(
        PrecComplex::from_real(spec.lambda.clone()),
        Provenance::BasicTop,
    )];
    push_mu_lambda_entries(spec, 0, j_max, &mut entries, |i, j| {
        (Multiplicity::Finite(1), Provenance::Basic { i, j })
    });
    build_set(
        "basic-currents",
        ValueKind::MapEigenvalue,
        Truncation { j_max: Some(j_max), ..Default::default() },
        entries,
        true,
        d,
    )
}

/// Truncation order for the iterated invariant-distribution spectrum.
#[derive(Debug, Clone, Copy)]
pub enum DistributionOrder {
    /// Distributions annihilated by the k-th power of the unstable field.
    Finite(usize),
    /// The full union over k, truncated at j ≤ j_max.
    Infinite { j_max: usize },
}

/// Spectrum of the pushforward on (iterated) invariant distributions:
/// {1} ∪ {μ_i λ^{-j}}, j up to k (or j_max for the infinite union). The value
/// μ_i λ^{-l} carries multiplicity exactly l.
pub fn invariant_distribution_spectrum(
    spec: &SpectrumData,
    order: DistributionOrder,
) -> ResonanceSet {
    let d = spec.precision;
    let (j_hi, k_field) = match order {
        DistributionOrder::Finite(k) => (k, Some(k)),
        DistributionOrder::Infinite { j_max } => (j_max, None),
    };
    let mut entries = vec![Resonance::simple(PrecComplex::one(d), Provenance::Constant)];
    push_mu_lambda_entries(spec, 1, j_hi, &mut entries, |i, j| {
        (Multiplicity::Finite(j), Provenance::Inv { i, j })
    });
    build_set(
        "invariant-distributions",
        ValueKind::MapEigenvalue,
        Truncation { j_max: Some(j_hi), k_max: k_field, ..Default::default() },
        entries,
        true,
        d,
    )
}

fn push_mu_lambda_entries(
    spec: &SpectrumData,
    j_lo: usize,
    j_hi: usize,
    entries: &mut Vec<Resonance>,
    label: impl Fn(usize, usize) -> (Multiplicity, Provenance),
) {
    let g2 = 2 * spec.genus;
    let lam_inv = spec.lambda.recip();
    for i in 2..=g2.saturating_sub(1) {
        let mu = &spec.mu[i - 1];
        let mut pow = if j_lo == 0 {
            PrecFloat::one(spec.precision)
        } else {
            lam_inv.powi(j_lo as i64)
        };
        for j in j_lo..=j_hi {
            let (multiplicity, prov) = label(i, j);
            entries.push(Resonance {
                value: mu.scale(&pow),
                multiplicity,
                jordan_blocks: Vec::new(),
                provenance: vec![prov],
                phase_unknown: false,
            });
            pow = &pow * &lam_inv;
        }
    }
}

/// Solution count and chain basis for the eigenvalue-multiplicity equation
/// j + k = l + 1 with j ∈ ℕ and k ∈ ℕ∖{0}. Brute-force enumeration; serves
/// as the independent oracle for the invariant-distribution multiplicities.
pub struct MultiplicityOracle {
    pub count: usize,
    pub chain_basis: Vec<String>,
}

pub fn multiplicity_oracle(l: usize) -> MultiplicityOracle {
    let mut count = 0usize;
    for j in 0..=(l + 1) {
        let k = (l + 1) - j;
        if k >= 1 {
            count += 1;
        }
    }
    let chain_basis = (0..=l)
        .map(|m| {
            if m == 0 {
                "D".to_string()
            } else if m == 1 {
                "(L_X L_Y) D".to_string()
            } else {
                format!("(L_X L_Y)^{m} D")
            }
        })
        .collect();
    MultiplicityOracle { count, chain_basis }
}

// ---------------------------------------------------------------------------
// Geodesic flow / horocycle enumerators
// ---------------------------------------------------------------------------

/// ν_±(μ) = (1 ± √(1-4μ))/2 as extended-precision complex numbers.
fn nu_pm(mu: f64, digits: usize) -> (PrecComplex, PrecComplex) {
    let one = PrecFloat::one(digits);
    let two = PrecFloat::from_i64(2, digits);
    let disc = &one - &(&PrecFloat::from_i64(4, digits) * &PrecFloat::from_f64(mu, digits));
    if disc >= PrecFloat::zero(digits) {
        let r = disc.sqrt();
        let plus = &(&one + &r) / &two;
        let minus = &(&one - &r) / &two;
        (PrecComplex::from_real(plus), PrecComplex::from_real(minus))
    } else {
        let r = (-&disc).sqrt();
        let half = &one / &two;
        let im = &r / &two;
        (
            PrecComplex::new(half.clone(), im.clone()),
            PrecComplex::new(half, -&im),
        )
    }
}

fn rate_minus_nu_minus_j(nu: &PrecComplex, j: usize, digits: usize) -> PrecComplex {
    let shift = PrecFloat::from_i64(j as i64, digits);
    PrecComplex::new(-&(&nu.re + &shift), -&nu.im)
}

/// Ruelle resonances of the geodesic flow of a compact hyperbolic surface,
/// as flow rates in the decaying convention: rate 0 for constants; for each
/// Laplace eigenvalue μ > 0 and branch ±, rates -ν_±(μ) - j (0 ≤ j ≤ j_max);
/// at μ = 1/4 a single family -1/2 - j carrying 2×2 Jordan blocks; plus the
/// trivial band -n for 1 ≤ n ≤ n_max. Families are never merged across
/// provenance, even at equal rates.
pub fn geodesic_resonances(lap: &LaplaceSpectrum, j_max: usize, n_max: usize) -> ResonanceSet {
    let d = DEFAULT_DIGITS;
    let mut entries = vec![Resonance::simple(PrecComplex::zero(d), Provenance::Constant)];
    for (idx, e) in lap.entries.iter().enumerate() {
        let m = e.multiplicity;
        if e.mu == 0.0 {
            // ν_- = 0 is the constants entry above; ν_+ = 1 gives rates -1-j.
            let nu_plus = PrecComplex::one(d);
            for j in 0..=j_max {
                entries.push(Resonance {
                    value: rate_minus_nu_minus_j(&nu_plus, j, d),
                    multiplicity: Multiplicity::Finite(m),
                    jordan_blocks: Vec::new(),
                    provenance: vec![Provenance::Geodesic {
                        mu_index: idx,
                        mu: e.mu,
                        branch: Branch::Plus,
                        j,
                    }],
                    phase_unknown: false,
                });
            }
        } else if e.mu == 0.25 {
            // Both branches coincide: one family with m Jordan blocks of size 2.
            let nu = PrecComplex::from_real(PrecFloat::from_ratio(1, 2, d));
            for j in 0..=j_max {
                entries.push(Resonance {
                    value: rate_minus_nu_minus_j(&nu, j, d),
                    multiplicity: Multiplicity::Finite(2 * m),
                    jordan_blocks: vec![2; m],
                    provenance: vec![Provenance::Geodesic {
                        mu_index: idx,
                        mu: e.mu,
                        branch: Branch::Merged,
                        j,
                    }],
                    phase_unknown: false,
                });
            }
        } else {
            let (nu_plus, nu_minus) = nu_pm(e.mu, d);
            for (branch, nu) in [(Branch::Plus, nu_plus), (Branch::Minus, nu_minus)] {
                for j in 0..=j_max {
                    entries.push(Resonance {
                        value: rate_minus_nu_minus_j(&nu, j, d),
                        multiplicity: Multiplicity::Finite(m),
                        jordan_blocks: Vec::new(),
                        provenance: vec![Provenance::Geodesic {
                            mu_index: idx,
                            mu: e.mu,
                            branch,
                            j,
                        }],
                        phase_unknown: false,
                    });
                }
            }
        }
    }
    for n in 1..=n_max {
        entries.push(Resonance {
            value: PrecComplex::from_real(PrecFloat::from_i64(-(n as i64), d)),
            multiplicity: Multiplicity::Finite(1),
            jordan_blocks: Vec::new(),
            provenance: vec![Provenance::GeodesicTrivial { n }],
            phase_unknown: false,
        });
    }
    build_set(
        "geodesic",
        ValueKind::FlowRate,
        Truncation { j_max: Some(j_max), n_max: Some(n_max), ..Default::default() },
        entries,
        false,
        d,
    )
}

/// Spectrum of the geodesic-flow Lie derivative on k-iterated horocycle
/// invariant distributions: {0} ∪ ⋃_{j=0}^{k} {λ - j : λ ∈ σ_{I_U}∖{0}},
/// where σ_{I_U} = {-ν_±(μ)} ∪ {-n : n ≥ 1}. Families stay separated; the
/// layer shift j ↦ j+1 is injective on each family.
pub fn horocycle_invariant_spectrum(lap: &LaplaceSpectrum, k: usize, n_max: usize) -> ResonanceSet {
    let d = DEFAULT_DIGITS;
    let mut entries = vec![Resonance::simple(PrecComplex::zero(d), Provenance::Constant)];
    // Base values of each family, skipping the 0 from ν_-(0).
    let mut families: Vec<(HoroFamily, PrecComplex, usize, Vec<usize>)> = Vec::new();
    for (idx, e) in lap.entries.iter().enumerate() {
        if e.mu == 0.0 {
            families.push((
                HoroFamily::Nu { mu_index: idx, branch: Branch::Plus },
                PrecComplex::one(d).neg(),
                e.multiplicity,
                Vec::new(),
            ));
        } else if e.mu == 0.25 {
            families.push((
                HoroFamily::Nu { mu_index: idx, branch: Branch::Merged },
                PrecComplex::from_real(PrecFloat::from_ratio(-1, 2, d)),
                2 * e.multiplicity,
                vec![2; e.multiplicity],
            ));
        } else {
            let (nu_plus, nu_minus) = nu_pm(e.mu, d);
            families.push((
                HoroFamily::Nu { mu_index: idx, branch: Branch::Plus },
                nu_plus.neg(),
                e.multiplicity,
                Vec::new(),
            ));
            families.push((
                HoroFamily::Nu { mu_index: idx, branch: Branch::Minus },
                nu_minus.neg(),
                e.multiplicity,
                Vec::new(),
            ));
        }
    }
    for n in 1..=n_max {
        families.push((
            HoroFamily::Trivial { n },
            PrecComplex::from_real(PrecFloat::from_i64(-(n as i64), d)),
            1,
            Vec::new(),
        ));
    }
    for (family, base, mult, jordan) in families {
        for shift in 0..=k {
            let shifted = PrecComplex::new(
                &base.re - &PrecFloat::from_i64(shift as i64, d),
                base.im.clone(),
            );
            entries.push(Resonance {
                value: shifted,
                multiplicity: Multiplicity::Finite(mult),
                jordan_blocks: jordan.clone(),
                provenance: vec![Provenance::Horocycle { family: family.clone(), shift }],
                phase_unknown: false,
            });
        }
    }
    build_set(
        "horocycle",
        ValueKind::FlowRate,
        Truncation { k_max: Some(k), n_max: Some(n_max), ..Default::default() },
        entries,
        false,
        d,
    )
}

// ---------------------------------------------------------------------------
// Heisenberg enumerators
// ---------------------------------------------------------------------------

/// Ruelle resonances of a partially hyperbolic Heisenberg automorphism:
/// {1} ∪ {u_{z,i} λ^{-k-1/2}} over |z| ≤ z_max, 1 ≤ i ≤ |z|, 0 ≤ k ≤ k_max.
/// Without supplied phases, each k yields a modulus-only entry λ^{-k-1/2}
/// whose multiplicity counts all (z, i) pairs: 2·Σ_{z=1}^{z_max} z.
pub fn heisenberg_resonances(
    lambda: f64,
    phases: Option<&HeisenbergPhases>,
    z_max: i64,
    k_max: usize,
) -> Result<ResonanceSet, ResonanceError> {
    if lambda <= 1.0 {
        return Err(ResonanceError::BadInput(format!("λ must exceed 1, got {lambda}")));
    }
    if z_max < 1 {
        return Err(ResonanceError::BadInput("z_max must be ≥ 1".into()));
    }
    let d = DEFAULT_DIGITS;
    let lam = PrecFloat::from_f64(lambda, d);
    let lam_inv_sqrt = lam.sqrt().recip();
    let lam_inv = lam.recip();
    let mut entries = vec![Resonance::simple(PrecComplex::one(d), Provenance::Constant)];

    if let Some(phases) = phases {
        for z in (-z_max..=z_max).filter(|&z| z != 0) {
            let list = phases.by_z.get(&z).ok_or(ResonanceError::PhaseCountMismatch {
                z,
                expected: z.unsigned_abs() as usize,
                got: 0,
            })?;
            let expected = z.unsigned_abs() as usize;
            if list.len() != expected {
                return Err(ResonanceError::PhaseCountMismatch { z, expected, got: list.len() });
            }
            for (idx, u) in list.iter().enumerate() {
                if (u.norm() - 1.0).abs() > 1e-9 {
                    return Err(ResonanceError::NonUnitPhase { z, i: idx + 1, modulus: u.norm() });
                }
                let u_hp = PrecComplex::from_f64s(u.re, u.im, d);
                // renormalize the phase to unit modulus in extended precision
                let u_hp = {
                    let m = u_hp.modulus();
                    PrecComplex::new(&u_hp.re / &m, &u_hp.im / &m)
                };
                let mut scale = lam_inv_sqrt.clone();
                for k in 0..=k_max {
                    entries.push(Resonance {
                        value: u_hp.scale(&scale),
                        multiplicity: Multiplicity::Finite(1),
                        jordan_blocks: Vec::new(),
                        provenance: vec![Provenance::Heisenberg { z, i: idx + 1, k }],
                        phase_unknown: false,
                    });
                    scale = &scale * &lam_inv;
                }
            }
        }
    } else {
        let per_k = (1..=z_max).map(|z| z as usize).sum::<usize>() * 2;
        let mut scale = lam_inv_sqrt.clone();
        for k in 0..=k_max {
            entries.push(Resonance {
                value: PrecComplex::from_real(scale.clone()),
                multiplicity: Multiplicity::Finite(per_k),
                jordan_blocks: Vec::new(),
                provenance: vec![Provenance::HeisenbergModulus { k }],
                phase_unknown: true,
            });
            scale = &scale * &lam_inv;
        }
    }
    Ok(build_set(
        "heisenberg",
        ValueKind::MapEigenvalue,
        Truncation { k_max: Some(k_max), z_max: Some(z_max), ..Default::default() },
        entries,
        true,
        d,
    ))
}

// ---------------------------------------------------------------------------
// Transfer-cocycle Lyapunov spectra
// ---------------------------------------------------------------------------

/// Lyapunov spectrum of the transfer cocycle over generic translation flows:
/// {1 (simple)} ∪ {±λ_i - j : i ∈ {2,…,g}, 1 ≤ j ≤ j_max} with multiplicity j
/// per entry; coincident values merge with summed multiplicity.
pub fn transfer_spectrum_translation(
    kz: &KzExponents,
    j_max: usize,
) -> Result<ResonanceSet, ResonanceError> {
    if !kz.hyperbolic {
        return Err(ResonanceError::KzNotHyperbolic);
    }
    let d = DEFAULT_DIGITS;
    let mut entries = vec![Resonance::simple(PrecComplex::one(d), Provenance::Constant)];
    for (offset, &li) in kz.exponents.iter().enumerate() {
        let i = offset + 2;
        let li_hp = PrecFloat::from_f64(li, d);
        for sign in [1i8, -1i8] {
            let signed = if sign > 0 { li_hp.clone() } else { -&li_hp };
            for j in 1..=j_max {
                let v = &signed - &PrecFloat::from_i64(j as i64, d);
                entries.push(Resonance {
                    value: PrecComplex::from_real(v),
                    multiplicity: Multiplicity::Finite(j),
                    jordan_blocks: Vec::new(),
                    provenance: vec![Provenance::Transfer { sign, i, j }],
                    phase_unknown: false,
                });
            }
        }
    }
    Ok(build_set(
        "transfer-translation",
        ValueKind::FlowRate,
        Truncation { j_max: Some(j_max), ..Default::default() },
        entries,
        true,
        d,
    ))
}

/// Lyapunov spectrum of the Heisenberg renormalization cocycle on iterated
/// invariant distributions: {1 (simple)} ∪ {1/2 - k : 0 ≤ k ≤ k_max}, every
/// 1/2 - k with infinite multiplicity.
pub fn transfer_spectrum_heisenberg(k_max: usize) -> ResonanceSet {
    let d = DEFAULT_DIGITS;
    let mut entries = vec![Resonance::simple(PrecComplex::one(d), Provenance::Constant)];
    for k in 0..=k_max {
        let v = &PrecFloat::from_ratio(1, 2, d) - &PrecFloat::from_i64(k as i64, d);
        entries.push(Resonance {
            value: PrecComplex::from_real(v),
            multiplicity: Multiplicity::Infinite,
            jordan_blocks: Vec::new(),
            provenance: vec![Provenance::TransferHeisenberg { k }],
            phase_unknown: false,
        });
    }
    build_set(
        "transfer-heisenberg",
        ValueKind::FlowRate,
        Truncation { k_max: Some(k_max), ..Default::default() },
        entries,
        false,
        d,
    )
}

/// Predicted power of T in the growth of ergodic integrals when all
/// invariant distributions up to Oseledets level i annihilate the observable:
/// λ_{i+1} for i < g (with λ_1 = 1), and 0 at i = g.
pub fn deviation_exponent(
    kz: &KzExponents,
    annihilated_level: usize,
) -> Result<f64, ResonanceError> {
    let g = kz.genus;
    if annihilated_level > g {
        return Err(ResonanceError::BadInput(format!(
            "level {annihilated_level} exceeds genus {g}"
        )));
    }
    Ok(if annihilated_level == 0 {
        1.0
    } else if annihilated_level == g {
        0.0
    } else {
        kz.exponents[annihilated_level - 1]
    })
}

/// The Heisenberg nilflow analogue of the deviation exponent: zero-average
/// ergodic integrals grow like T^{1/2+ε}.
pub fn heisenberg_deviation_exponent() -> (f64, &'static str) {
    (0.5, "+ε")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::GUARD_DIGITS;

    /// λ=3, μ = {3, 2, 1/2, 1/3}: a synthetic genus-2 spectrum.
    fn synthetic_spectrum() -> SpectrumData {
        let d = 50;
        let w = d + GUARD_DIGITS;
        let mu = vec![
            PrecComplex::from_real(PrecFloat::from_i64(3, w)),
            PrecComplex::from_real(PrecFloat::from_i64(2, w)),
            PrecComplex::from_real(PrecFloat::from_ratio(1, 2, w)),
            PrecComplex::from_real(PrecFloat::from_ratio(1, 3, w)),
        ];
        SpectrumData::from_eigenvalues(mu, d).unwrap()
    }

    fn entry_f64<'a>(set: &'a ResonanceSet, re: f64) -> &'a Resonance {
        set.find_value(re, 0.0, 1e-12)
            .unwrap_or_else(|| panic!("no entry near {re} in {}", set.system))
    }

    #[test]
    fn pa_example_values_and_multiplicities() {
        let s = synthetic_spectrum();
        let set = pa_resonances(&s, 2);
        // {1(×1), 2/3(×1), 2/9(×2), 1/6(×1), 1/18(×2)}
        assert_eq!(set.entries.len(), 5);
        for (v, m) in [
            (1.0, 1usize),
            (2.0 / 3.0, 1),
            (2.0 / 9.0, 2),
            (1.0 / 6.0, 1),
            (1.0 / 18.0, 2),
        ] {
            let e = entry_f64(&set, v);
            assert_eq!(e.multiplicity, Multiplicity::Finite(m), "value {v}");
        }
        // sorted strictly descending in modulus
        for w in set.entries.windows(2) {
            assert!(w[0].modulus() > w[1].modulus());
        }
        // every value but 1 has modulus < λ (and in fact < 1)
        for e in &set.entries {
            assert!(e.modulus().to_f64() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn pa_multiplicity_of_entry_equals_j() {
        let s = synthetic_spectrum();
        let set = pa_resonances(&s, 5);
        // entry (i=2, j=5): μ_2 λ^{-5} = 2/243
        let e = entry_f64(&set, 2.0 / 243.0);
        assert_eq!(e.multiplicity, Multiplicity::Finite(5));
        assert!(e.provenance.contains(&Provenance::Pa { i: 2, j: 5 }));
    }

    #[test]
    fn pa_torus_is_trivial() {
        let d = 50;
        let w = d + GUARD_DIGITS;
        let mu = vec![
            PrecComplex::from_real(PrecFloat::from_f64(2.618033988749895, w)),
            PrecComplex::from_real(PrecFloat::from_f64(2.618033988749895, w).recip()),
        ];
        let s = SpectrumData::from_eigenvalues(mu, d).unwrap();
        let set = pa_resonances(&s, 10);
        assert_eq!(set.entries.len(), 1);
        assert_eq!(set.entries[0].multiplicity, Multiplicity::Finite(1));
        assert!((set.entries[0].value.to_c64().re - 1.0).abs() < 1e-40);
    }

    #[test]
    fn basic_current_values() {
        let s = synthetic_spectrum();
        let set = basic_current_spectrum(&s, 1);
        for v in [3.0, 2.0, 2.0 / 3.0, 0.5, 1.0 / 6.0] {
            entry_f64(&set, v);
        }
        // j = 0 entries are the μ_i themselves
        let e = entry_f64(&set, 2.0);
        assert!(e.provenance.contains(&Provenance::Basic { i: 2, j: 0 }));
    }

    #[test]
    fn basic_shifted_by_lambda_inv_gives_invariant_spectrum() {
        let s = synthetic_spectrum();
        let basic = basic_current_spectrum(&s, 3);
        let inv = invariant_distribution_spectrum(&s, DistributionOrder::Infinite { j_max: 4 });
        let lam_inv = 1.0 / 3.0;
        for e in &basic.entries {
            let shifted = e.value.to_c64().re * lam_inv;
            assert!(
                inv.find_value(shifted, 0.0, 1e-10).is_some(),
                "no invariant-spectrum entry at {shifted}"
            );
        }
    }

    #[test]
    fn invariant_spectrum_orders() {
        let s = synthetic_spectrum();
        let k1 = invariant_distribution_spectrum(&s, DistributionOrder::Finite(1));
        // {1} ∪ {μ_i λ^{-1}}
        assert_eq!(k1.entries.len(), 3);
        entry_f64(&k1, 1.0);
        entry_f64(&k1, 2.0 / 3.0);
        entry_f64(&k1, 1.0 / 6.0);

        let inf = invariant_distribution_spectrum(&s, DistributionOrder::Infinite { j_max: 5 });
        let e = entry_f64(&inf, 2.0 / 27.0); // μ_2 λ^{-3}
        assert_eq!(e.multiplicity, Multiplicity::Finite(3));
    }

    #[test]
    fn invariant_infinite_matches_pa_plus_one() {
        let s = synthetic_spectrum();
        let inv = invariant_distribution_spectrum(&s, DistributionOrder::Infinite { j_max: 4 });
        let pa = pa_resonances(&s, 4);
        assert_eq!(inv.entries.len(), pa.entries.len());
        for (a, b) in inv.entries.iter().zip(pa.entries.iter()) {
            assert!(a.value.dist(&b.value).to_f64() < 1e-40);
            assert_eq!(a.multiplicity, b.multiplicity);
        }
    }

    #[test]
    fn multiplicity_oracle_counts() {
        let o = multiplicity_oracle(0);
        assert_eq!(o.count, 1);
        assert_eq!(o.chain_basis, vec!["D"]);
        let o3 = multiplicity_oracle(3);
        assert_eq!(o3.count, 4);
        assert_eq!(o3.chain_basis.len(), 4);
        for l in 0..20 {
            assert_eq!(multiplicity_oracle(l).count, l + 1);
        }
    }

    fn sample_laplace() -> LaplaceSpectrum {
        LaplaceSpectrum::new(vec![(0.0, 1), (0.25, 2), (2.0, 1)]).unwrap()
    }

    #[test]
    fn geodesic_jordan_iff_quarter() {
        let set = geodesic_resonances(&sample_laplace(), 2, 3);
        for e in &set.entries {
            let is_quarter_family = e
                .provenance
                .iter()
                .any(|p| matches!(p, Provenance::Geodesic { mu, .. } if *mu == 0.25));
            assert_eq!(!e.jordan_blocks.is_empty(), is_quarter_family);
        }
        // μ = 1/4 with Laplace multiplicity 2: two 2×2 blocks, multiplicity 4
        let jordan_entries: Vec<&Resonance> =
            set.entries.iter().filter(|e| !e.jordan_blocks.is_empty()).collect();
        assert_eq!(jordan_entries.len(), 3); // j = 0, 1, 2
        for e in jordan_entries {
            assert_eq!(e.jordan_blocks, vec![2, 2]);
            assert_eq!(e.multiplicity, Multiplicity::Finite(4));
        }
    }

    #[test]
    fn geodesic_complex_pair_for_large_mu() {
        let set = geodesic_resonances(&sample_laplace(), 0, 0);
        // μ = 2: rates -1/2 ± i√7/2
        let im = (7.0f64).sqrt() / 2.0;
        let plus = set.find_value(-0.5, -im, 1e-12).expect("-1/2 - i√7/2 (ν_+ branch)");
        let minus = set.find_value(-0.5, im, 1e-12).expect("-1/2 + i√7/2 (ν_- branch)");
        // complex conjugates
        assert!(plus.value.conj().dist(&minus.value).to_f64() < 1e-40);
    }

    #[test]
    fn geodesic_mu_zero_families() {
        let lap = LaplaceSpectrum::new(vec![(0.0, 1)]).unwrap();
        let set = geodesic_resonances(&lap, 1, 2);
        // constants at rate 0
        let zero = entry_f64(&set, 0.0);
        assert_eq!(zero.provenance, vec![Provenance::Constant]);
        // -1 appears twice: ν_+(0) family at j=0 and trivial n=1 (not merged)
        let m1 = set
            .entries
            .iter()
            .filter(|e| (e.value.to_c64().re + 1.0).abs() < 1e-12)
            .count();
        assert_eq!(m1, 2);
        assert!(!set.merged);
    }

    #[test]
    fn horocycle_layers() {
        let lap = sample_laplace();
        let k0 = horocycle_invariant_spectrum(&lap, 0, 2);
        // σ_{I_U} itself: 0, -1 (ν_+ of μ=0), -1/2 (merged, μ=1/4), -1/2±i√7/2, -1, -2
        assert!(k0.find_value(0.0, 0.0, 1e-12).is_some());
        assert!(k0.find_value(-0.5, 0.0, 1e-12).is_some());
        let im = (7.0f64).sqrt() / 2.0;
        assert!(k0.find_value(-0.5, im, 1e-12).is_some());

        let k1 = horocycle_invariant_spectrum(&lap, 1, 2);
        assert!(k1.find_value(-1.5, im, 1e-12).is_some());
        assert!(k1.find_value(-1.5, -im, 1e-12).is_some());

        // the shift map is injective on each family: every family contributes
        // exactly k+1 entries with distinct shifts
        let mut per_family: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for e in &k1.entries {
            for p in &e.provenance {
                if let Provenance::Horocycle { family, shift } = p {
                    per_family.entry(format!("{family:?}")).or_default().push(*shift);
                }
            }
        }
        for (fam, mut shifts) in per_family {
            shifts.sort_unstable();
            assert_eq!(shifts, vec![0, 1], "family {fam}");
        }
    }

    #[test]
    fn heisenberg_moduli() {
        let set = heisenberg_resonances(4.0, None, 1, 2).unwrap();
        let moduli: Vec<f64> = set.entries.iter().map(|e| e.modulus().to_f64()).collect();
        let expect = [1.0, 0.5, 0.125, 0.03125];
        assert_eq!(moduli.len(), 4);
        for (g, e) in moduli.iter().zip(expect.iter()) {
            assert!((g - e).abs() < 1e-14, "{g} vs {e}");
        }
        // modulus-only entries are flagged and count both signs of z
        assert!(set.entries[1].phase_unknown);
        assert_eq!(set.entries[1].multiplicity, Multiplicity::Finite(2));
        // z_max = 3: per-modulus multiplicity 2·(1+2+3) = 12
        let set3 = heisenberg_resonances(4.0, None, 3, 0).unwrap();
        assert_eq!(set3.entries[1].multiplicity, Multiplicity::Finite(12));
    }

    #[test]
    fn heisenberg_phases_enumerate_i_up_to_abs_z() {
        let mut phases = HeisenbergPhases::default();
        let u = Complex64::from_polar(1.0, 0.7);
        phases.by_z.insert(1, vec![u]);
        phases.by_z.insert(-1, vec![u.conj()]);
        phases.by_z.insert(2, vec![u, u * u]);
        phases.by_z.insert(-2, vec![u.conj(), (u * u).conj()]);
        let set = heisenberg_resonances(2.0, Some(&phases), 2, 1).unwrap();
        let heis_entries: usize = set
            .entries
            .iter()
            .flat_map(|e| e.provenance.iter())
            .filter(|p| matches!(p, Provenance::Heisenberg { .. }))
            .count();
        // (z,i) pairs: (±1,1), (±2,1), (±2,2) = 6, times k ∈ {0,1}
        assert_eq!(heis_entries, 12);
        // all values have modulus λ^{-k-1/2}
        for e in set.entries.iter().skip(1) {
            let m = e.modulus().to_f64();
            let ok = [2.0f64.powf(-0.5), 2.0f64.powf(-1.5)]
                .iter()
                .any(|t| (m - t).abs() < 1e-12);
            assert!(ok, "unexpected modulus {m}");
        }
    }

    #[test]
    fn heisenberg_phase_count_mismatch() {
        let mut phases = HeisenbergPhases::default();
        phases.by_z.insert(1, vec![Complex64::new(1.0, 0.0)]);
        phases.by_z.insert(-1, vec![Complex64::new(1.0, 0.0)]);
        phases.by_z.insert(2, vec![Complex64::new(1.0, 0.0)]); // should have 2
        phases
            .by_z
            .insert(-2, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        match heisenberg_resonances(2.0, Some(&phases), 2, 0) {
            Err(ResonanceError::PhaseCountMismatch { z: 2, expected: 2, got: 1 }) => {}
            other => panic!("expected PhaseCountMismatch, got {other:?}"),
        }
    }

    #[test]
    fn transfer_translation_example() {
        let kz = KzExponents::new(2, vec![0.3], true).unwrap();
        let set = transfer_spectrum_translation(&kz, 2).unwrap();
        for (v, m) in [(1.0, 1usize), (-0.7, 1), (-1.3, 1), (-1.7, 2), (-2.3, 2)] {
            let e = entry_f64(&set, v);
            assert_eq!(e.multiplicity, Multiplicity::Finite(m), "value {v}");
        }
        assert_eq!(set.entries.len(), 5);
        // exponent 1 corresponds to the invariant area class
        assert_eq!(entry_f64(&set, 1.0).provenance, vec![Provenance::Constant]);
    }

    #[test]
    fn transfer_translation_merges_collisions() {
        let kz = KzExponents::new(2, vec![0.5], true).unwrap();
        let set = transfer_spectrum_translation(&kz, 2).unwrap();
        // +0.5-2 and -0.5-1 both give -1.5: multiplicity 2+1 = 3, dual provenance
        let e = entry_f64(&set, -1.5);
        assert_eq!(e.multiplicity, Multiplicity::Finite(3));
        assert!(e.provenance.contains(&Provenance::Transfer { sign: 1, i: 2, j: 2 }));
        assert!(e.provenance.contains(&Provenance::Transfer { sign: -1, i: 2, j: 1 }));
    }

    #[test]
    fn transfer_translation_requires_hyperbolic_flag() {
        let kz = KzExponents::new(2, vec![0.3], false).unwrap();
        assert!(matches!(
            transfer_spectrum_translation(&kz, 1),
            Err(ResonanceError::KzNotHyperbolic)
        ));
    }

    #[test]
    fn transfer_heisenberg_sets() {
        let s0 = transfer_spectrum_heisenberg(0);
        let vals: Vec<f64> = s0.entries.iter().map(|e| e.value.to_c64().re).collect();
        assert_eq!(vals, vec![1.0, 0.5]);
        assert_eq!(s0.entries[0].multiplicity, Multiplicity::Finite(1));
        assert_eq!(s0.entries[1].multiplicity, Multiplicity::Infinite);

        let s2 = transfer_spectrum_heisenberg(2);
        let vals: Vec<f64> = s2.entries.iter().map(|e| e.value.to_c64().re).collect();
        assert_eq!(vals, vec![1.0, 0.5, -0.5, -1.5]);
    }

    #[test]
    fn deviation_exponents() {
        let kz = KzExponents::new(3, vec![0.6, 0.2], true).unwrap();
        assert_eq!(deviation_exponent(&kz, 0).unwrap(), 1.0);
        assert_eq!(deviation_exponent(&kz, 1).unwrap(), 0.6);
        assert_eq!(deviation_exponent(&kz, 2).unwrap(), 0.2);
        assert_eq!(deviation_exponent(&kz, 3).unwrap(), 0.0);
        assert!(deviation_exponent(&kz, 4).is_err());
        assert_eq!(heisenberg_deviation_exponent(), (0.5, "+ε"));
    }

    #[test]
    fn enumerators_are_deterministic() {
        let s = synthetic_spectrum();
        let a = pa_resonances(&s, 3);
        let b = pa_resonances(&s, 3);
        for (x, y) in a.entries.iter().zip(b.entries.iter()) {
            assert_eq!(x.value.re.to_string(), y.value.re.to_string());
        }
    }

    #[test]
    fn truncation_only_removes_entries() {
        let s = synthetic_spectrum();
        let small = pa_resonances(&s, 2);
        let large = pa_resonances(&s, 4);
        for e in &small.entries {
            let c = e.value.to_c64();
            let in_large = large.find_value(c.re, c.im, 1e-12).expect("entry retained");
            assert_eq!(in_large.multiplicity, e.multiplicity);
        }
    }
}
