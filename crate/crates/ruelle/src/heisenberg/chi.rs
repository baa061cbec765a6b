//! The χ-family: derivatives of a normalized even bump, biorthogonal to the
//! iterated-integration functionals.
//!
//! With ψ even, smooth, compactly supported and ∫ψ = 1, the members
//! χ_b := ψ^(b) satisfy ∫_ℝ J_a[χ_b] = δ_ab for all 0 ≤ a ≤ b: the a-fold
//! antiderivative of ψ^(b) is ψ^(b-a), whose integral telescopes to zero
//! unless a = b. Equivalently ∫ x^m χ_b = 0 for m < b and (-1)^b b! at m = b.

use super::presets::{FunctionSum, Preset};
use super::quadrature::{integrate, iterated_total, moment, QuadratureSpec};
use super::HeisError;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct ChiFamily {
    pub b_max: usize,
    /// Normalization constant of the base bump (1/∫ bump).
    pub norm_const: f64,
    members: Vec<Preset>,
}

/// Build χ_b = ψ^(b) for b = 0…b_max from an even base bump, normalized by
/// quadrature so that ∫ψ = 1.
pub fn build_chi_family(
    b_max: usize,
    base: &Preset,
    spec: &QuadratureSpec,
) -> Result<ChiFamily, HeisError> {
    if !base.is_even_atom() {
        return Err(HeisError::BadInput("χ base bump must be even".into()));
    }
    let (lo, hi) = base.support();
    let total = integrate(&|x| base.eval(x), lo, hi, spec)?.value;
    if total.re.abs() < 1e-300 {
        return Err(HeisError::BadInput("χ base bump has zero integral".into()));
    }
    let norm_const = 1.0 / total.re;
    let psi = base.mul_factor(Complex64::new(norm_const, 0.0));
    let members = (0..=b_max).map(|b| psi.derivative_n(b)).collect();
    Ok(ChiFamily { b_max, norm_const, members })
}

impl ChiFamily {
    /// The standard family built from exp(-1/(1-x²)) on (-1, 1).
    pub fn standard(b_max: usize, spec: &QuadratureSpec) -> Result<ChiFamily, HeisError> {
        build_chi_family(b_max, &Preset::raw_bump(0.0, 1.0), spec)
    }

    pub fn chi(&self, b: usize) -> &Preset {
        &self.members[b]
    }

    pub fn chi_sum(&self, b: usize) -> FunctionSum {
        FunctionSum::from_preset(self.members[b].clone())
    }

    /// ψ = χ_0, the normalized base bump.
    pub fn psi(&self) -> FunctionSum {
        self.chi_sum(0)
    }

    /// Residuals |∫ J_a[χ_b] - δ_ab| for all 0 ≤ a ≤ b ≤ b_max.
    pub fn biorthogonality_residuals(
        &self,
        spec: &QuadratureSpec,
    ) -> Result<Vec<(usize, usize, f64)>, HeisError> {
        let mut out = Vec::new();
        for b in 0..=self.b_max {
            for a in 0..=b {
                let v = iterated_total(&self.chi_sum(b), a, spec)?.value;
                let expect = if a == b { 1.0 } else { 0.0 };
                out.push((a, b, (v - Complex64::new(expect, 0.0)).norm()));
            }
        }
        Ok(out)
    }

    pub fn max_biorthogonality_residual(&self, spec: &QuadratureSpec) -> Result<f64, HeisError> {
        Ok(self
            .biorthogonality_residuals(spec)?
            .into_iter()
            .map(|(_, _, r)| r)
            .fold(0.0, f64::max))
    }

    /// Residuals of the moment form: ∫ x^m χ_b = 0 for m < b, (-1)^b b! at m = b.
    pub fn moment_residuals(&self, spec: &QuadratureSpec) -> Result<Vec<(usize, usize, f64)>, HeisError> {
        let mut out = Vec::new();
        for b in 0..=self.b_max {
            for m in 0..=b {
                let v = moment(&self.chi_sum(b), m, spec)?;
                let expect = if m == b {
                    (if b % 2 == 0 { 1.0 } else { -1.0 }) * factorial(b)
                } else {
                    0.0
                };
                out.push((m, b, (v - Complex64::new(expect, 0.0)).norm()));
            }
        }
        Ok(out)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
