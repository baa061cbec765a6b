//! Analytic preset test functions with exact symbolic derivatives and
//! argument scalings.
//!
//! Every function handled by the line model is a finite sum of atoms of the
//! form `factor · N(u) / (1-u²)^q · exp(core(u))` with `u = a·x + b`, where
//! the core is either the bump exponent `-1/(1-u²)` or the Gaussian `-u²`.
//! Differentiation and the pullback scaling `x ↦ c·f(s·x)` act exactly on
//! this representation; no grids or finite differences appear anywhere.

use num_complex::Complex64;
use std::sync::OnceLock;

const SUPPORT_CUTOFF_REL: f64 = 1e-16;

/// Dense polynomial, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn deriv(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(0.0);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, &a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, &b) in other.0.iter().enumerate() {
            out[i] += b;
        }
        Poly(out)
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly(self.0.iter().map(|&c| c * k).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoreKind {
    /// exp(-1/(1-u²)) on |u| < 1, identically zero outside.
    Bump,
    /// exp(-u²).
    Gaussian,
}

/// One analytic atom: `factor · N(u) (1-u²)^{-q} exp(core(u))`, `u = a·x+b`.
#[derive(Debug, Clone)]
pub struct Preset {
    core: CoreKind,
    num: Poly,
    den_pow: u32,
    arg_a: f64,
    arg_b: f64,
    factor: Complex64,
}

impl Preset {
    /// Unnormalized bump `exp(-1/(1-u²))` with `u = (x-center)/radius`.
    pub fn raw_bump(center: f64, radius: f64) -> Preset {
        assert!(radius > 0.0, "bump radius must be positive");
        Preset {
            core: CoreKind::Bump,
            num: Poly::constant(1.0),
            den_pow: 0,
            arg_a: 1.0 / radius,
            arg_b: -center / radius,
            factor: Complex64::new(1.0, 0.0),
        }
    }

    /// `p(x) · exp(-x²)` for a real coefficient polynomial p.
    pub fn gaussian_poly(coeffs: &[f64]) -> Preset {
        assert!(!coeffs.is_empty(), "polynomial must have at least one coefficient");
        Preset {
            core: CoreKind::Gaussian,
            num: Poly(coeffs.to_vec()),
            den_pow: 0,
            arg_a: 1.0,
            arg_b: 0.0,
            factor: Complex64::new(1.0, 0.0),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let u = self.arg_a * x + self.arg_b;
        let v = match self.core {
            CoreKind::Bump => {
                let t = 1.0 - u * u;
                if t <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                // exponent of exp(-1/t) / t^q, guarded against underflow
                let log_env = -1.0 / t - f64::from(self.den_pow) * t.ln();
                if log_env < -700.0 {
                    0.0
                } else {
                    self.num.eval(u) * log_env.exp()
                }
            }
            CoreKind::Gaussian => {
                let e = -u * u;
                if e < -700.0 {
                    0.0
                } else {
                    self.num.eval(u) * e.exp()
                }
            }
        };
        self.factor * v
    }

    /// Exact derivative with respect to x (chain rule through `u = a·x+b`).
    pub fn derivative(&self) -> Preset {
        let u = Poly(vec![0.0, 1.0]);
        match self.core {
            CoreKind::Bump => {
                // d/du [N (1-u²)^{-q} e^{-1/(1-u²)}]
                //   = { [N'(1-u²) + 2qNu](1-u²) - 2Nu } (1-u²)^{-(q+2)} e^{-1/(1-u²)}
                let one_minus_u2 = Poly(vec![1.0, 0.0, -1.0]);
                let q = f64::from(self.den_pow);
                let inner = self
                    .num
                    .deriv()
                    .mul(&one_minus_u2)
                    .add(&self.num.mul(&u).scale(2.0 * q));
                let new_num = inner.mul(&one_minus_u2).add(&self.num.mul(&u).scale(-2.0));
                Preset {
                    core: CoreKind::Bump,
                    num: new_num,
                    den_pow: self.den_pow + 2,
                    arg_a: self.arg_a,
                    arg_b: self.arg_b,
                    factor: self.factor * self.arg_a,
                }
            }
            CoreKind::Gaussian => {
                // d/du [N e^{-u²}] = (N' - 2uN) e^{-u²}
                let new_num = self.num.deriv().add(&self.num.mul(&u).scale(-2.0));
                Preset {
                    core: CoreKind::Gaussian,
                    num: new_num,
                    den_pow: 0,
                    arg_a: self.arg_a,
                    arg_b: self.arg_b,
                    factor: self.factor * self.arg_a,
                }
            }
        }
    }

    pub fn derivative_n(&self, m: usize) -> Preset {
        let mut p = self.clone();
        for _ in 0..m {
            p = p.derivative();
        }
        p
    }

    /// Argument scaling x ↦ f(s·x), exact on the representation.
    pub fn scale_arg(&self, s: f64) -> Preset {
        assert!(s > 0.0, "argument scaling must be positive");
        Preset { arg_a: self.arg_a * s, ..self.clone() }
    }

    pub fn mul_factor(&self, c: Complex64) -> Preset {
        Preset { factor: self.factor * c, ..self.clone() }
    }

    /// Interval outside of which |f| < 1e-16 · max|f|. Exact support for
    /// bump atoms; a rapid-decay cutoff for Gaussian atoms.
    pub fn support(&self) -> (f64, f64) {
        let (u_lo, u_hi) = match self.core {
            CoreKind::Bump => (-1.0, 1.0),
            CoreKind::Gaussian => {
                let r = self.gaussian_cutoff_radius();
                (-r, r)
            }
        };
        // invert u = a x + b (a > 0)
        ((u_lo - self.arg_b) / self.arg_a, (u_hi - self.arg_b) / self.arg_a)
    }

    fn gaussian_cutoff_radius(&self) -> f64 {
        // scan |N(u)| e^{-u²} on a fixed grid; the envelope decays fast
        let mut max_v: f64 = 0.0;
        let mut vals = Vec::with_capacity(4801);
        for i in 0..=4800 {
            let u = -12.0 + i as f64 * (24.0 / 4800.0);
            let v = (self.num.eval(u) * (-u * u).exp()).abs();
            vals.push((u, v));
            max_v = max_v.max(v);
        }
        if max_v == 0.0 {
            return 1.0;
        }
        let thresh = SUPPORT_CUTOFF_REL * max_v;
        let mut r: f64 = 0.0;
        for &(u, v) in &vals {
            if v >= thresh {
                r = r.max(u.abs());
            }
        }
        r + 0.5
    }

    pub fn is_even_atom(&self) -> bool {
        self.arg_b == 0.0
            && self
                .num
                .0
                .iter()
                .enumerate()
                .all(|(i, &c)| i % 2 == 0 || c == 0.0)
    }
}

/// Finite linear combination of preset atoms with complex coefficients.
/// Projector residuals `P^(j) f` live here.
#[derive(Debug, Clone, Default)]
pub struct FunctionSum {
    pub terms: Vec<(Complex64, Preset)>,
}

impl FunctionSum {
    pub fn from_preset(p: Preset) -> Self {
        FunctionSum { terms: vec![(Complex64::new(1.0, 0.0), p)] }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|(c, p)| c * p.eval(x)).sum()
    }

    pub fn derivative(&self) -> FunctionSum {
        FunctionSum {
            terms: self.terms.iter().map(|(c, p)| (*c, p.derivative())).collect(),
        }
    }

    pub fn derivative_n(&self, m: usize) -> FunctionSum {
        let mut f = self.clone();
        for _ in 0..m {
            f = f.derivative();
        }
        f
    }

    /// self ← self + c · other
    pub fn add_scaled(&mut self, c: Complex64, other: &FunctionSum) {
        for (k, p) in &other.terms {
            self.terms.push((c * k, p.clone()));
        }
    }

    pub fn scale_arg(&self, s: f64) -> FunctionSum {
        FunctionSum {
            terms: self.terms.iter().map(|(c, p)| (*c, p.scale_arg(s))).collect(),
        }
    }

    pub fn mul_factor(&self, c: Complex64) -> FunctionSum {
        FunctionSum { terms: self.terms.iter().map(|(k, p)| (c * k, p.clone())).collect() }
    }

    /// Union of atom supports.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, p) in &self.terms {
            let (a, b) = p.support();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        if lo > hi {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }
}

// ---------------------------------------------------------------------------
// Named presets
// ---------------------------------------------------------------------------

static BUMP_INTEGRAL: OnceLock<f64> = OnceLock::new();

/// ∫₋₁¹ exp(-1/(1-u²)) du, computed once by adaptive quadrature.
pub(crate) fn raw_bump_integral() -> f64 {
    *BUMP_INTEGRAL.get_or_init(|| {
        let p = Preset::raw_bump(0.0, 1.0);
        let spec = super::quadrature::QuadratureSpec { abs_tol: 1e-14, ..Default::default() };
        super::quadrature::integrate(&|x| p.eval(x), -1.0, 1.0, &spec)
            .expect("bump integral converges")
            .value
            .re
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PresetKind {
    /// Normalized bump ψ centered at `center` with the given radius, ∫ψ = 1.
    Bump { center: f64, radius: f64 },
    /// `order`-th derivative of the standard normalized bump (center 0, radius 1).
    BumpDerivative { order: usize },
    /// p(x)·exp(-x²) with the given ascending polynomial coefficients.
    GaussianPoly { coeffs: Vec<f64> },
}

/// A named analytic test function on the real line.
#[derive(Debug, Clone)]
pub struct RealTestFunction {
    pub kind: PresetKind,
    sum: FunctionSum,
}

impl RealTestFunction {
    pub fn new(kind: PresetKind) -> Self {
        let sum = match &kind {
            PresetKind::Bump { center, radius } => {
                let c = 1.0 / (radius * raw_bump_integral());
                FunctionSum::from_preset(
                    Preset::raw_bump(*center, *radius).mul_factor(Complex64::new(c, 0.0)),
                )
            }
            PresetKind::BumpDerivative { order } => {
                let c = 1.0 / raw_bump_integral();
                FunctionSum::from_preset(
                    Preset::raw_bump(0.0, 1.0)
                        .mul_factor(Complex64::new(c, 0.0))
                        .derivative_n(*order),
                )
            }
            PresetKind::GaussianPoly { coeffs } => {
                FunctionSum::from_preset(Preset::gaussian_poly(coeffs))
            }
        };
        RealTestFunction { kind, sum }
    }

    /// The standard normalized bump ψ on (-1, 1).
    pub fn bump() -> Self {
        Self::new(PresetKind::Bump { center: 0.0, radius: 1.0 })
    }

    pub fn bump_at(center: f64, radius: f64) -> Self {
        Self::new(PresetKind::Bump { center, radius })
    }

    /// ψ^(order), the order-th derivative of the standard normalized bump.
    pub fn bump_derivative(order: usize) -> Self {
        Self::new(PresetKind::BumpDerivative { order })
    }

    /// exp(-x²).
    pub fn gaussian() -> Self {
        Self::new(PresetKind::GaussianPoly { coeffs: vec![1.0] })
    }

    pub fn gaussian_poly(coeffs: &[f64]) -> Self {
        Self::new(PresetKind::GaussianPoly { coeffs: coeffs.to_vec() })
    }

    pub fn sum(&self) -> &FunctionSum {
        &self.sum
    }

    pub fn into_sum(self) -> FunctionSum {
        self.sum
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.sum.eval(x)
    }

    pub fn derivative_n(&self, m: usize) -> FunctionSum {
        self.sum.derivative_n(m)
    }

    pub fn support(&self) -> (f64, f64) {
        self.sum.support()
    }
}
