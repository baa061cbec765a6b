//! Extended-precision decimal arithmetic.
//!
//! Eigenvalues and resonance values are kept as arbitrary-precision decimal
//! floats so that distinct resonances `μ_i λ^{-j}` stay separated at the
//! merge tolerance (relative 1e-30 at the default 50 digits) and so that
//! emitted decimal strings round-trip exactly.

use dashu::base::Approximation;
use dashu::float::round::mode::HalfAway;
use dashu::float::FBig;
use dashu::integer::IBig;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Decimal big-float with round-half-away ties.
pub type Dec = FBig<HalfAway, 10>;

/// Default number of decimal digits carried by spectra and resonance sets.
pub const DEFAULT_DIGITS: usize = 50;

/// Guard digits added to the working precision of intermediate computations.
pub const GUARD_DIGITS: usize = 10;

/// Arbitrary-precision real number with a fixed decimal precision.
#[derive(Clone, PartialEq, Eq)]
pub struct PrecFloat(Dec);

impl PrecFloat {
    pub fn zero(digits: usize) -> Self {
        PrecFloat(Dec::ZERO.with_precision(digits).value())
    }

    pub fn one(digits: usize) -> Self {
        PrecFloat(Dec::ONE.with_precision(digits).value())
    }

    pub fn from_i64(v: i64, digits: usize) -> Self {
        PrecFloat(Dec::from(v).with_precision(digits).value())
    }

    /// Exact conversion of an IEEE double, then rounding to `digits`.
    ///
    /// Every finite `f64` is a finite decimal, so the only rounding that
    /// happens is the final one to the requested precision.
    pub fn from_f64(v: f64, digits: usize) -> Self {
        assert!(v.is_finite(), "cannot convert non-finite f64");
        let bin = FBig::<HalfAway, 2>::try_from(v).expect("finite f64");
        let (signif, exp) = bin.into_repr().into_parts();
        // m * 2^e  =  m * 5^{-e} * 10^e  for e < 0,  m * 2^e exact integer otherwise
        let dec = if exp >= 0 {
            Dec::from(signif * IBig::from(2).pow(exp as usize))
        } else {
            let k = (-exp) as usize;
            Dec::from_parts(signif * IBig::from(5).pow(k), exp)
        };
        PrecFloat(dec.with_precision(digits).value())
    }

    pub fn from_ratio(num: i64, den: i64, digits: usize) -> Self {
        Self::from_i64(num, digits) / Self::from_i64(den, digits)
    }

    pub fn parse(s: &str, digits: usize) -> Result<Self, String> {
        let dec: Dec = s.parse().map_err(|e| format!("bad decimal `{s}`: {e}"))?;
        Ok(PrecFloat(dec.with_precision(digits).value()))
    }

    pub fn digits(&self) -> usize {
        self.0.precision()
    }

    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Approximation::Exact(v) => v,
            Approximation::Inexact(v, _) => v,
        }
    }

    pub fn abs(&self) -> Self {
        if self.0.sign() == dashu::base::Sign::Negative {
            PrecFloat(-self.0.clone())
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Dec::ZERO
    }

    pub fn sqrt(&self) -> Self {
        PrecFloat(self.0.sqrt())
    }

    pub fn ln(&self) -> Self {
        PrecFloat(self.0.ln())
    }

    /// Integer power, negative exponents allowed.
    pub fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            PrecFloat(self.0.powi(IBig::from(n)))
        } else {
            let digits = self.digits();
            PrecFloat::one(digits) / PrecFloat(self.0.powi(IBig::from(-n)))
        }
    }

    pub fn recip(&self) -> Self {
        PrecFloat::one(self.digits()) / self.clone()
    }

    pub fn with_digits(&self, digits: usize) -> Self {
        PrecFloat(self.0.clone().with_precision(digits).value())
    }

    pub fn inner(&self) -> &Dec {
        &self.0
    }
}

impl fmt::Display for PrecFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for PrecFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialOrd for PrecFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrecFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("decimal floats are totally ordered")
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PrecFloat {
            type Output = PrecFloat;
            fn $method(self, rhs: PrecFloat) -> PrecFloat {
                PrecFloat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a PrecFloat> for &'a PrecFloat {
            type Output = PrecFloat;
            fn $method(self, rhs: &'a PrecFloat) -> PrecFloat {
                PrecFloat((&self.0).$method(&rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for PrecFloat {
    type Output = PrecFloat;
    fn neg(self) -> PrecFloat {
        PrecFloat(-self.0)
    }
}

impl Neg for &PrecFloat {
    type Output = PrecFloat;
    fn neg(self) -> PrecFloat {
        PrecFloat(-self.0.clone())
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, PartialEq, Debug)]
pub struct PrecComplex {
    pub re: PrecFloat,
    pub im: PrecFloat,
}

impl PrecComplex {
    pub fn new(re: PrecFloat, im: PrecFloat) -> Self {
        PrecComplex { re, im }
    }

    pub fn zero(digits: usize) -> Self {
        PrecComplex::new(PrecFloat::zero(digits), PrecFloat::zero(digits))
    }

    pub fn one(digits: usize) -> Self {
        PrecComplex::new(PrecFloat::one(digits), PrecFloat::zero(digits))
    }

    pub fn from_real(re: PrecFloat) -> Self {
        let digits = re.digits();
        PrecComplex::new(re, PrecFloat::zero(digits))
    }

    pub fn from_f64s(re: f64, im: f64, digits: usize) -> Self {
        PrecComplex::new(PrecFloat::from_f64(re, digits), PrecFloat::from_f64(im, digits))
    }

    pub fn digits(&self) -> usize {
        self.re.digits()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        PrecComplex::new(self.re.clone(), -&self.im)
    }

    pub fn modulus_sq(&self) -> PrecFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn modulus(&self) -> PrecFloat {
        self.modulus_sq().sqrt()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        PrecComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        PrecComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        PrecComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let d = rhs.modulus_sq();
        let num = self.mul(&rhs.conj());
        PrecComplex::new(&num.re / &d, &num.im / &d)
    }

    pub fn neg(&self) -> Self {
        PrecComplex::new(-&self.re, -&self.im)
    }

    pub fn scale(&self, k: &PrecFloat) -> Self {
        PrecComplex::new(&self.re * k, &self.im * k)
    }

    /// Distance |self - rhs| as an extended-precision value.
    pub fn dist(&self, rhs: &Self) -> PrecFloat {
        self.sub(rhs).modulus()
    }
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}
