//! Integer symplectic matrices and extended-precision spectrum extraction.
//!
//! The induced action of a surface diffeomorphism on first cohomology is an
//! integer symplectic matrix; its eigenvalues drive every resonance set in
//! [`crate::resonance`]. Eigenvalues are computed exactly enough that distinct
//! resonance products stay separated: the characteristic polynomial is built
//! over the integers, split into square-free factors (Yun), seeded from f64
//! companion-matrix eigenvalues and refined by Newton iteration in decimal
//! big-floats.

use crate::precision::{PrecComplex, PrecFloat, GUARD_DIGITS};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance on |log|μ|| below which an eigenvalue counts as
/// unit-modulus and the matrix as non-hyperbolic.
pub const UNIT_MODULUS_LOG_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not symplectic: MᵀJM ≠ J")]
    NotSymplectic,
    #[error("spectrum is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("invalid matrix: {0}")]
    BadInput(String),
    #[error("reciprocal pairing failed verification")]
    PairingFailure,
}

/// Square integer matrix, row-major, with an even dimension `2g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub dim: usize,
    pub entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, SpectralError> {
        let dim = entries.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(SpectralError::BadInput(format!(
                "dimension must be even and positive, got {dim}"
            )));
        }
        if entries.iter().any(|row| row.len() != dim) {
            return Err(SpectralError::BadInput("matrix is not square".into()));
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        IntMatrix { dim, entries }
    }

    pub fn genus(&self) -> usize {
        self.dim / 2
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.entries[i][k] as i128 * rhs.entries[k][j] as i128;
                }
                out[i][j] = i64::try_from(acc).expect("matrix product overflows i64");
            }
        }
        IntMatrix { dim: n, entries: out }
    }

    /// Exact check of the J-identity MᵀJM = J for J = [[0, I], [-I, 0]].
    pub fn is_symplectic(&self) -> bool {
        let n = self.dim;
        let g = n / 2;
        // (MᵀJM)[i][j] = Σ_k M[k][i] (JM)[k][j];  (JM)[k] = M[k+g] for k<g, -M[k-g] otherwise
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    let jm = if k < g {
                        self.entries[k + g][j] as i128
                    } else {
                        -(self.entries[k - g][j] as i128)
                    };
                    acc += self.entries[k][i] as i128 * jm;
                }
                let expected: i128 = if j == i + g {
                    1
                } else if i == j + g {
                    -1
                } else {
                    0
                };
                if acc != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant from the constant coefficient of the characteristic
    /// polynomial (exact; dim is even so det M = p(0)).
    pub fn det(&self) -> BigInt {
        char_poly(self)[0].clone()
    }
}

/// Coefficients (ascending, monic) of det(xI - M), computed exactly by the
/// Faddeev–LeVerrier recursion. The division by k at step k is exact.
pub fn char_poly(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.dim;
    let a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // mk = A * (M_{k-1} + c_{n-k+1} I)
    let mut mk: Vec<Vec<BigInt>> = a.clone();
    for k in 1..=n {
        let tr: BigInt = (0..n).map(|i| mk[i][i].clone()).sum();
        let c = -tr / BigInt::from(k as i64);
        coeffs[n - k] = c.clone();
        if k == n {
            break;
        }
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for l in 0..n {
                    let mut b = mk[l][j].clone();
                    if l == j {
                        b += &c;
                    }
                    acc += &a[i][l] * b;
                }
                next[i][j] = acc;
            }
        }
        mk = next;
    }
    coeffs
}

/// A monic integer polynomial is palindromic when c_i = c_{n-i} for all i.
/// Characteristic polynomials of symplectic matrices are palindromic.
pub fn is_palindromic(coeffs: &[BigInt]) -> bool {
    let n = coeffs.len();
    (0..n).all(|i| coeffs[i] == coeffs[n - 1 - i])
}

// ---------------------------------------------------------------------------
// Square-free decomposition over ℚ[x]
// ---------------------------------------------------------------------------

type QPoly = Vec<BigRational>;

fn q_trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn q_deriv(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from(BigInt::from(i as i64)))
        .collect();
    q_trim(&mut d);
    d
}

fn q_is_zero(p: &QPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn q_monic(p: &QPoly) -> QPoly {
    let lc = p.last().unwrap().clone();
    p.iter().map(|c| c / &lc).collect()
}

/// Quotient and remainder of p by d (d nonzero).
fn q_divrem(p: &QPoly, d: &QPoly) -> (QPoly, QPoly) {
    let mut rem = p.clone();
    q_trim(&mut rem);
    let dn = d.len() - 1;
    let lc = d.last().unwrap();
    if rem.len() <= dn && q_is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    if rem.len() - 1 < dn {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dn];
    while !q_is_zero(&rem) && rem.len() - 1 >= dn {
        let k = rem.len() - 1 - dn;
        let f = rem.last().unwrap() / lc;
        quot[k] = f.clone();
        for i in 0..=dn {
            let t = &d[i] * &f;
            rem[k + i] -= t;
        }
        rem.pop();
        q_trim(&mut rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    q_trim(&mut rem);
    (quot, rem)
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    q_trim(&mut x);
    q_trim(&mut y);
    while !q_is_zero(&y) {
        let (_, r) = q_divrem(&x, &y);
        x = y;
        y = r;
        q_trim(&mut y);
    }
    if q_is_zero(&x) {
        vec![BigRational::one()]
    } else {
        q_monic(&x)
    }
}

/// Yun's square-free decomposition of a monic integer polynomial:
/// returns pairs (factor, multiplicity) with p = Π factor^multiplicity.
/// Factors are monic with integer coefficients (Gauss lemma).
pub fn square_free_factors(coeffs: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let p: QPoly = coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
    let dp = q_deriv(&p);
    let g = q_gcd(&p, &dp);
    let mut out = Vec::new();
    if g.len() == 1 {
        out.push((coeffs.to_vec(), 1));
        return out;
    }
    let (mut b, _) = q_divrem(&p, &g);
    let (mut c, _) = q_divrem(&dp, &g);
    let mut i = 1usize;
    loop {
        let db = q_deriv(&b);
        let mut d: QPoly = (0..c.len().max(db.len()))
            .map(|k| {
                let ck = c.get(k).cloned().unwrap_or_else(BigRational::zero);
                let dk = db.get(k).cloned().unwrap_or_else(BigRational::zero);
                ck - dk
            })
            .collect();
        q_trim(&mut d);
        if b.len() == 1 {
            break;
        }
        let a = q_gcd(&b, &d);
        if a.len() > 1 {
            let int_coeffs: Vec<BigInt> = a
                .iter()
                .map(|c| {
                    assert!(c.is_integer(), "monic factor of monic integer poly is integer");
                    c.to_integer()
                })
                .collect();
            out.push((int_coeffs, i));
        }
        let (bn, _) = q_divrem(&b, &a);
        let (cn, _) = q_divrem(&d, &a);
        b = bn;
        c = cn;
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Extended-precision root finding
// ---------------------------------------------------------------------------

fn companion_roots_f64(coeffs: &[BigInt]) -> Vec<num_complex::Complex64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = bigint_to_f64(&coeffs[deg]);
    if deg == 1 {
        return vec![num_complex::Complex64::new(-bigint_to_f64(&coeffs[0]) / lead, 0.0)];
    }
    let mut comp = nalgebra::DMatrix::<f64>::zeros(deg, deg);
    for i in 0..deg {
        comp[(i, deg - 1)] = -bigint_to_f64(&coeffs[i]) / lead;
        if i + 1 < deg {
            comp[(i + 1, i)] = 1.0;
        }
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::MAX)
}

fn eval_poly(coeffs: &[PrecComplex], z: &PrecComplex) -> PrecComplex {
    let mut acc = coeffs.last().unwrap().clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn poly_deriv_prec(coeffs: &[PrecComplex], digits: usize) -> Vec<PrecComplex> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&PrecFloat::from_i64(i as i64, digits)))
        .collect()
}

/// Newton-refine a simple root of an integer polynomial to `digits` decimals.
fn newton_refine(coeffs: &[BigInt], seed: num_complex::Complex64, digits: usize) -> PrecComplex {
    let work = digits + GUARD_DIGITS;
    let pc: Vec<PrecComplex> = coeffs
        .iter()
        .map(|c| {
            PrecComplex::from_real(
                PrecFloat::parse(&c.to_string(), work).expect("integer literal"),
            )
        })
        .collect();
    let dc = poly_deriv_prec(&pc, work);
    let mut z = PrecComplex::from_f64s(seed.re, seed.im, work);
    let step_tol = PrecFloat::parse(&format!("1e-{}", work + 2), work).unwrap();
    for _ in 0..300 {
        let pv = eval_poly(&pc, &z);
        let dv = eval_poly(&dc, &z);
        if dv.modulus_sq().is_zero() {
            break;
        }
        let delta = pv.div(&dv);
        let moved = delta.modulus();
        z = z.sub(&delta);
        let scale = z.modulus().abs();
        let bound = if scale > PrecFloat::one(work) {
            &step_tol * &scale
        } else {
            step_tol.clone()
        };
        if moved < bound {
            break;
        }
    }
    z
}

// ---------------------------------------------------------------------------
// SpectrumData
// ---------------------------------------------------------------------------

/// Eigenvalue data of a symplectic cohomology action: the top dilatation, all
/// `2g` eigenvalues sorted by descending modulus, and the reciprocal pairing.
#[derive(Debug, Clone)]
pub struct SpectrumData {
    pub genus: usize,
    pub lambda: PrecFloat,
    pub mu: Vec<PrecComplex>,
    /// Involution on indices: mu[pairing[i]] * mu[i] = 1.
    pub pairing: Vec<usize>,
    pub precision: usize,
}

impl SpectrumData {
    /// Directly assemble spectrum data from known eigenvalues (sorted and
    /// paired here). Used for synthetic inputs; `spectrum` is the matrix path.
    pub fn from_eigenvalues(mu: Vec<PrecComplex>, precision: usize) -> Result<Self, SpectralError> {
        finish_spectrum(mu, precision, UNIT_MODULUS_LOG_TOL)
    }
}

/// All eigenvalues of a symplectic integer matrix to `precision` decimal
/// digits, sorted by descending modulus, with the reciprocal pairing.
pub fn spectrum(m: &IntMatrix, precision: usize) -> Result<SpectrumData, SpectralError> {
    spectrum_with_tol(m, precision, UNIT_MODULUS_LOG_TOL)
}

/// `spectrum` with a configurable near-unit-modulus tolerance on |log|μ||.
pub fn spectrum_with_tol(
    m: &IntMatrix,
    precision: usize,
    unit_log_tol: f64,
) -> Result<SpectrumData, SpectralError> {
    if m.dim < 2 || m.dim % 2 != 0 {
        return Err(SpectralError::BadInput(format!("dimension {} is not even ≥ 2", m.dim)));
    }
    if !m.is_symplectic() {
        return Err(SpectralError::NotSymplectic);
    }
    let work = precision + GUARD_DIGITS;
    let coeffs = char_poly(m);
    let mut roots: Vec<PrecComplex> = Vec::with_capacity(m.dim);
    for (factor, mult) in square_free_factors(&coeffs) {
        for seed in companion_roots_f64(&factor) {
            let mut z = newton_refine(&factor, seed, precision);
            // Clamp spurious imaginary parts of real roots so real eigenvalues
            // (in particular λ itself) are exactly real at working precision.
            let clamp = PrecFloat::parse(&format!("1e-{}", precision.saturating_sub(6)), work)
                .unwrap();
            if z.im.abs() < &clamp * &z.modulus() {
                let rz = newton_refine_real(&factor, z.re.clone(), precision);
                z = PrecComplex::from_real(rz);
            }
            for _ in 0..mult {
                roots.push(z.clone());
            }
        }
    }
    if roots.len() != m.dim {
        return Err(SpectralError::BadInput(format!(
            "expected {} roots, found {}",
            m.dim,
            roots.len()
        )));
    }
    enforce_conjugate_symmetry(&mut roots);
    finish_spectrum(roots, precision, unit_log_tol)
}

fn newton_refine_real(coeffs: &[BigInt], seed: PrecFloat, digits: usize) -> PrecFloat {
    let work = digits + GUARD_DIGITS;
    let pc: Vec<PrecFloat> = coeffs
        .iter()
        .map(|c| PrecFloat::parse(&c.to_string(), work).expect("integer literal"))
        .collect();
    let dc: Vec<PrecFloat> = pc
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &PrecFloat::from_i64(i as i64, work))
        .collect();
    let horner = |cs: &[PrecFloat], x: &PrecFloat| -> PrecFloat {
        let mut acc = cs.last().unwrap().clone();
        for c in cs.iter().rev().skip(1) {
            acc = &(&acc * x) + c;
        }
        acc
    };
    let mut x = seed.with_digits(work);
    let step_tol = PrecFloat::parse(&format!("1e-{}", work + 2), work).unwrap();
    for _ in 0..300 {
        let pv = horner(&pc, &x);
        let dv = horner(&dc, &x);
        if dv.is_zero() {
            break;
        }
        let delta = &pv / &dv;
        x = &x - &delta;
        let scale = x.abs();
        let bound = if scale > PrecFloat::one(work) { &step_tol * &scale } else { step_tol.clone() };
        if delta.abs() < bound {
            break;
        }
    }
    x
}

/// Make complex roots exactly conjugate-symmetric: for each root with
/// positive imaginary part, overwrite its closest negative-imaginary partner
/// with the exact conjugate.
fn enforce_conjugate_symmetry(roots: &mut [PrecComplex]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if roots[i].im.is_zero() || roots[i].im < PrecFloat::zero(roots[i].digits()) {
            continue;
        }
        let conj = roots[i].conj();
        let mut best: Option<(usize, PrecFloat)> = None;
        for (j, r) in roots.iter().enumerate() {
            if used[j] || j == i || r.im >= PrecFloat::zero(r.digits()) {
                continue;
            }
            let d = r.dist(&conj);
            if best.as_ref().map(|(_, b)| d < *b).unwrap_or(true) {
                best = Some((j, d));
            }
        }
        if let Some((j, _)) = best {
            roots[j] = conj;
            used[j] = true;
        }
    }
}

fn finish_spectrum(
    mut mu: Vec<PrecComplex>,
    precision: usize,
    unit_log_tol: f64,
) -> Result<SpectrumData, SpectralError> {
    let dim = mu.len();
    if dim % 2 != 0 || dim < 2 {
        return Err(SpectralError::BadInput("need an even number of eigenvalues".into()));
    }
    // Sort by descending modulus, deterministic tie-breaks on re then im.
    mu.sort_by(|a, b| {
        b.modulus_sq()
            .cmp(&a.modulus_sq())
            .then_with(|| b.re.cmp(&a.re))
            .then_with(|| b.im.cmp(&a.im))
    });

    for v in &mu {
        let log_mod = v.modulus().to_f64().ln();
        if log_mod.abs() < unit_log_tol {
            return Err(SpectralError::NotHyperbolic(format!(
                "eigenvalue of modulus {} within tolerance of the unit circle",
                v.modulus().to_f64()
            )));
        }
    }
    let top_gap = mu[0].modulus().to_f64().ln() - mu[1].modulus().to_f64().ln();
    if top_gap.abs() < unit_log_tol {
        return Err(SpectralError::NotHyperbolic(
            "top eigenvalue is not simple in modulus: λ ≤ |μ₂| within tolerance".into(),
        ));
    }
    if !mu[0].is_real() || mu[0].re <= PrecFloat::zero(precision) {
        return Err(SpectralError::NotHyperbolic(
            "top eigenvalue is not a real dilatation λ > 1".into(),
        ));
    }

    let pairing = reciprocal_pairing(&mu, precision)?;
    let lambda = mu[0].re.clone().with_digits(precision);
    let mu_out: Vec<PrecComplex> = mu
        .into_iter()
        .map(|z| PrecComplex::new(z.re.with_digits(precision), z.im.with_digits(precision)))
        .collect();
    Ok(SpectrumData { genus: dim / 2, lambda, mu: mu_out, pairing, precision })
}

/// Greedy nearest-match on complex log values, then global verification that
/// every paired product is 1 within 10^(2-precision).
fn reciprocal_pairing(mu: &[PrecComplex], precision: usize) -> Result<Vec<usize>, SpectralError> {
    let n = mu.len();
    let logs: Vec<(f64, f64)> = mu
        .iter()
        .map(|z| {
            let c = z.to_c64();
            (c.norm().ln(), c.arg())
        })
        .collect();
    let wrap = |t: f64| {
        let mut t = t % (2.0 * std::f64::consts::PI);
        if t > std::f64::consts::PI {
            t -= 2.0 * std::f64::consts::PI;
        }
        if t < -std::f64::consts::PI {
            t += 2.0 * std::f64::consts::PI;
        }
        t
    };
    let cost = |i: usize, j: usize| {
        (logs[i].0 + logs[j].0).abs() + wrap(logs[i].1 + logs[j].1).abs()
    };
    let mut pairing = vec![usize::MAX; n];
    let mut free: Vec<usize> = (0..n).collect();
    while !free.is_empty() {
        let mut best: Option<(f64, usize, usize)> = None;
        for (a, &i) in free.iter().enumerate() {
            for &j in free.iter().skip(a + 1) {
                let c = cost(i, j);
                // Conjugate reciprocal pairs (θ_i = -θ_j) win exact ties.
                let conj_bonus = if wrap(logs[i].1 + logs[j].1).abs() < 1e-12 { 0.0 } else { 1e-15 };
                let c = c + conj_bonus;
                if best.map(|(b, _, _)| c < b).unwrap_or(true) {
                    best = Some((c, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("free list nonempty");
        pairing[i] = j;
        pairing[j] = i;
        free.retain(|&k| k != i && k != j);
    }
    // Global verification at extended precision.
    let tol = PrecFloat::parse(&format!("1e-{}", precision.saturating_sub(2)), precision).unwrap();
    let one = PrecComplex::one(precision + GUARD_DIGITS);
    for i in 0..n {
        let prod = mu[i].mul(&mu[pairing[i]]);
        if prod.dist(&one) > tol {
            return Err(SpectralError::PairingFailure);
        }
    }
    Ok(pairing)
}

/// Evaluate the characteristic polynomial at an extended-precision point.
/// Used to verify returned roots against the exact polynomial.
pub fn eval_char_poly(coeffs: &[BigInt], z: &PrecComplex) -> PrecComplex {
    let digits = z.digits();
    let pc: Vec<PrecComplex> = coeffs
        .iter()
        .map(|c| PrecComplex::from_real(PrecFloat::parse(&c.to_string(), digits).unwrap()))
        .collect();
    eval_poly(&pc, z)
}

/// Backward error of a claimed root: |p(z)| normalized by Σ|c_i||z|^i.
/// A root correct to the working precision has backward error of that
/// order regardless of the magnitude of the eigenvalues.
pub fn char_poly_backward_error(coeffs: &[BigInt], z: &PrecComplex) -> PrecFloat {
    let digits = z.digits();
    let val = eval_char_poly(coeffs, z).modulus();
    let zmod = z.modulus();
    let mut scale = PrecFloat::zero(digits);
    let mut pow = PrecFloat::one(digits);
    for c in coeffs {
        let ca = PrecFloat::parse(&c.magnitude().to_string(), digits).unwrap();
        scale = &scale + &(&ca * &pow);
        pow = &pow * &zmod;
    }
    if scale.is_zero() {
        val
    } else {
        &val / &scale
    }
}

// ---------------------------------------------------------------------------
// Random symplectic generators
// ---------------------------------------------------------------------------

/// Product of `n_factors` random elementary symplectic generators of
/// Sp(2g, ℤ). Deterministic per seed; `n_factors = 0` gives the identity.
///
/// Generators: upper/lower unipotent blocks [[I, B], [0, I]] and
/// [[I, 0], [C, I]] with B, C symmetric one-entry matrices, block-diagonal
/// [[U, 0], [0, U⁻ᵀ]] with U elementary unimodular, and the standard form J.
pub fn random_symplectic(g: usize, seed: u64, n_factors: usize) -> IntMatrix {
    assert!(g >= 1, "genus must be ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * g;
    let mut m = IntMatrix::identity(dim);
    for _ in 0..n_factors {
        let t: i64 = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
        let kind = rng.gen_range(0..4);
        let f = match kind {
            0 => {
                // [[I, B], [0, I]], B symmetric
                let i = rng.gen_range(0..g);
                let j = rng.gen_range(0..g);
                let mut e = IntMatrix::identity(dim);
                e.entries[i][g + j] += t;
                if i != j {
                    e.entries[j][g + i] += t;
                }
                e
            }
            1 => {
                // [[I, 0], [C, I]], C symmetric
                let i = rng.gen_range(0..g);
                let j = rng.gen_range(0..g);
                let mut e = IntMatrix::identity(dim);
                e.entries[g + i][j] += t;
                if i != j {
                    e.entries[g + j][i] += t;
                }
                e
            }
            2 if g >= 2 => {
                // [[U, 0], [0, U⁻ᵀ]] with U = I + tE_ij, U⁻ᵀ = I - tE_ji
                let i = rng.gen_range(0..g);
                let mut j = rng.gen_range(0..g - 1);
                if j >= i {
                    j += 1;
                }
                let mut e = IntMatrix::identity(dim);
                e.entries[i][j] += t;
                e.entries[g + j][g + i] -= t;
                e
            }
            _ => {
                // J itself
                let mut e = IntMatrix { dim, entries: vec![vec![0; dim]; dim] };
                for i in 0..g {
                    e.entries[i][g + i] = 1;
                    e.entries[g + i][i] = -1;
                }
                e
            }
        };
        m = m.mul(&f);
    }
    m
}
