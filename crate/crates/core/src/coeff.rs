//! Coefficient domains for noncommutative polynomials.
//!
//! Two backends sit behind [`Domain`]: [`ExactDomain`] computes in the
//! cyclotomic field `Q(zeta_M)`, `M = lcm(2N, 4)`, and needs `theta = p/N` and
//! a rational `mu`; [`FloatDomain`] uses `Complex64` with a tolerance for
//! comparisons.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::One;
use serde::Serialize;

use crate::cyclotomic::{Cyclo, CyclotomicField};
use crate::error::{Error, Result};
use crate::params::DeformParams;

/// Default comparison tolerance of the float backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Ring operations a polynomial coefficient must provide.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test; canonical polynomials never store such coefficients.
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
    /// Whether `self` and `other` can be combined.
    fn same_domain(&self, _other: &Self) -> bool {
        true
    }
}

impl Coefficient for Complex64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl Coefficient for Cyclo {
    fn add(&self, other: &Self) -> Self {
        Cyclo::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclo::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclo::mul(self, other)
    }
    fn neg(&self) -> Self {
        Cyclo::neg(self)
    }
    fn conj(&self) -> Self {
        Cyclo::conj(self)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        Cyclo::to_complex(self)
    }
    fn same_domain(&self, other: &Self) -> bool {
        self.field().order() == other.field().order()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Exact,
    Float,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Exact => write!(f, "exact"),
            DomainKind::Float => write!(f, "float"),
        }
    }
}

/// A coefficient domain bound to a parameter pack.
///
/// The named constants `q`, `z`, `zbar`, `hbar`, `mu`, `i` and the half phase
/// `q^{1/2} = e^{i pi theta}` are produced here so that both backends agree on
/// conventions.
pub trait Domain: Clone + Send + Sync {
    type Coeff: Coefficient;

    fn params(&self) -> &DeformParams;
    fn kind(&self) -> DomainKind;
    fn tolerance(&self) -> f64;

    fn from_ratio(&self, numer: i64, denom: i64) -> Self::Coeff;
    /// A decimal literal such as `0.25` or `1e-3`.
    fn from_decimal(&self, text: &str) -> Result<Self::Coeff>;
    fn imag_unit(&self) -> Self::Coeff;
    /// `e^{i pi theta k}`, i.e. `q^{k/2}` on the principal branch.
    fn half_phase_pow(&self, k: i64) -> Self::Coeff;
    fn mu(&self) -> Self::Coeff;
    fn z(&self) -> Self::Coeff;
    fn hbar(&self) -> Self::Coeff;
    fn inv(&self, c: &Self::Coeff) -> Option<Self::Coeff>;
    /// Equality up to the domain's notion of equality.
    fn approx_eq(&self, a: &Self::Coeff, b: &Self::Coeff) -> bool;

    fn zero(&self) -> Self::Coeff {
        self.from_ratio(0, 1)
    }
    fn one(&self) -> Self::Coeff {
        self.from_ratio(1, 1)
    }
    fn q(&self) -> Self::Coeff {
        self.half_phase_pow(2)
    }
    fn qbar(&self) -> Self::Coeff {
        self.half_phase_pow(-2)
    }
    fn zbar(&self) -> Self::Coeff {
        self.z().conj()
    }

    /// Integer power; negative exponents need an invertible base.
    fn pow(&self, base: &Self::Coeff, exp: i64) -> Option<Self::Coeff> {
        let b = if exp < 0 { self.inv(base)? } else { base.clone() };
        let mut acc = self.one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&b);
        }
        Some(acc)
    }
}

/// Complex floating-point coefficients.
#[derive(Debug, Clone)]
pub struct FloatDomain {
    params: DeformParams,
    tol: f64,
}

impl FloatDomain {
    pub fn new(params: &DeformParams) -> Self {
        Self::with_tolerance(params, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(params: &DeformParams, tol: f64) -> Self {
        FloatDomain {
            params: params.clone(),
            tol,
        }
    }
}

impl Domain for FloatDomain {
    type Coeff = Complex64;

    fn params(&self) -> &DeformParams {
        &self.params
    }
    fn kind(&self) -> DomainKind {
        DomainKind::Float
    }
    fn tolerance(&self) -> f64 {
        self.tol
    }
    fn from_ratio(&self, numer: i64, denom: i64) -> Complex64 {
        Complex64::new(numer as f64 / denom as f64, 0.0)
    }
    fn from_decimal(&self, text: &str) -> Result<Complex64> {
        text.parse::<f64>()
            .map(|x| Complex64::new(x, 0.0))
            .map_err(|_| Error::Domain(format!("bad decimal literal `{text}`")))
    }
    fn imag_unit(&self) -> Complex64 {
        Complex64::i()
    }
    fn half_phase_pow(&self, k: i64) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI * self.params.theta_value() * k as f64)
    }
    fn mu(&self) -> Complex64 {
        Complex64::new(self.params.mu_value(), 0.0)
    }
    fn z(&self) -> Complex64 {
        self.params.z
    }
    fn hbar(&self) -> Complex64 {
        Complex64::new(self.params.hbar, 0.0)
    }
    fn inv(&self, c: &Complex64) -> Option<Complex64> {
        if Coefficient::is_zero(c) {
            None
        } else {
            Some(c.inv())
        }
    }
    fn approx_eq(&self, a: &Complex64, b: &Complex64) -> bool {
        (a - b).norm() <= self.tol
    }
}

/// Exact coefficients in `Q(zeta_M)` with `M = lcm(2N, 4)`.
///
/// The field must contain `e^{i pi theta}` (a `2N`-th root of unity) and `i`;
/// for odd `N` the `2N`-th cyclotomic field lacks `i`, hence the lcm.
#[derive(Debug, Clone)]
pub struct ExactDomain {
    params: DeformParams,
    field: Arc<CyclotomicField>,
    /// `zeta_M^{half_step}` is `e^{i pi theta}`.
    half_step: i64,
    imag: Cyclo,
    mu: Cyclo,
    z: Cyclo,
    hbar: Cyclo,
}

impl ExactDomain {
    pub fn new(params: &DeformParams) -> Result<Self> {
        let (p, n) = params.rational_theta().ok_or_else(|| {
            Error::DomainMismatch("the exact backend needs a rational theta = p/N".into())
        })?;
        let mu = params.mu.as_rational().ok_or_else(|| {
            Error::DomainMismatch("the exact backend needs a rational mu".into())
        })?;
        let order = (2 * n).lcm(&4) as usize;
        let field = CyclotomicField::new(order);
        let half_step = p * (order as i64) / (2 * n);
        let imag = Cyclo::zeta_pow(&field, order as i64 / 4);
        let h = Cyclo::zeta_pow(&field, half_step);
        let hc = h.conj();
        // 2 cos(pi theta) = h + conj(h) is nonzero away from the poles
        let two_cos = h.add(&hc);
        let inv_i_two_cos = imag
            .mul(&two_cos)
            .inv()
            .ok_or_else(|| Error::Pole(params.theta.to_string()))?;
        let z = h.mul(&inv_i_two_cos);
        let hbar = h.sub(&hc).mul(&inv_i_two_cos);
        let mu = Cyclo::from_rational(&field, &rational_to_big(mu));
        Ok(ExactDomain {
            params: params.clone(),
            field,
            half_step,
            imag,
            mu,
            z,
            hbar,
        })
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn from_rational(&self, r: &BigRational) -> Cyclo {
        Cyclo::from_rational(&self.field, r)
    }

    /// Exponents `(a, b)` with `zeta_M = h^a i^b`, used to spell field elements
    /// with the named constants `q^(1/2)` and `i`.
    pub(crate) fn zeta_in_named_constants(&self) -> (i64, i64) {
        let m = self.field.order() as i64;
        let quarter = m / 4;
        for b in 0..4 {
            for a in 0..m {
                if (a * self.half_step + b * quarter).rem_euclid(m) == 1 {
                    return (a, b);
                }
            }
        }
        unreachable!("q^(1/2) and i generate the roots of unity of order M")
    }

    /// Number of distinct powers of `e^{i pi theta}`.
    pub(crate) fn half_phase_period(&self) -> i64 {
        let m = self.field.order() as i64;
        m / self.half_step.gcd(&m)
    }
}

fn rational_to_big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Parses a decimal literal (`12`, `0.25`, `1.5e-3`) into an exact rational.
pub fn decimal_to_rational(text: &str) -> Option<BigRational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    for _ in 0..shift.unsigned_abs() {
        if shift > 0 {
            value *= &ten;
        } else {
            value /= &ten;
        }
    }
    Some(if neg { -value } else { value })
}

impl Domain for ExactDomain {
    type Coeff = Cyclo;

    fn params(&self) -> &DeformParams {
        &self.params
    }
    fn kind(&self) -> DomainKind {
        DomainKind::Exact
    }
    fn tolerance(&self) -> f64 {
        0.0
    }
    fn from_ratio(&self, numer: i64, denom: i64) -> Cyclo {
        Cyclo::from_ratio(&self.field, numer, denom)
    }
    fn from_decimal(&self, text: &str) -> Result<Cyclo> {
        decimal_to_rational(text)
            .map(|r| self.from_rational(&r))
            .ok_or_else(|| Error::Domain(format!("bad decimal literal `{text}`")))
    }
    fn imag_unit(&self) -> Cyclo {
        self.imag.clone()
    }
    fn half_phase_pow(&self, k: i64) -> Cyclo {
        Cyclo::zeta_pow(&self.field, self.half_step * k)
    }
    fn mu(&self) -> Cyclo {
        self.mu.clone()
    }
    fn z(&self) -> Cyclo {
        self.z.clone()
    }
    fn hbar(&self) -> Cyclo {
        self.hbar.clone()
    }
    fn inv(&self, c: &Cyclo) -> Option<Cyclo> {
        c.inv()
    }
    fn approx_eq(&self, a: &Cyclo, b: &Cyclo) -> bool {
        a == b
    }
}

impl ExactDomain {
    pub fn is_one(&self, c: &Cyclo) -> bool {
        c.as_rational().is_some_and(|r| r.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn exact_constants_match_float() {
        for (mu, p, n) in [(2, 1, 5), (3, 1, 3), (4, 3, 8), (2, 2, 7), (5, 1, 6)] {
            let params = derive_params(mu, (p, n)).unwrap();
            let ex = ExactDomain::new(&params).unwrap();
            let fl = FloatDomain::new(&params);
            assert!(close(ex.q().to_complex(), fl.q()));
            assert!(close(ex.z().to_complex(), fl.z()));
            assert!(close(ex.zbar().to_complex(), fl.zbar()));
            assert!(close(ex.hbar().to_complex(), fl.hbar()));
            assert!(close(ex.imag_unit().to_complex(), Complex64::i()));
            assert!(close(ex.half_phase_pow(1).to_complex(), params.half_phase()));
        }
    }

    #[test]
    fn exact_identities() {
        let params = derive_params(2, (1, 5)).unwrap();
        let d = ExactDomain::new(&params).unwrap();
        // q^N = 1
        assert_eq!(d.pow(&d.q(), 5).unwrap(), d.one());
        // z + zbar = hbar and z - zbar = -i
        assert_eq!(d.z().add(&d.zbar()), d.hbar());
        assert_eq!(d.z().sub(&d.zbar()), d.imag_unit().neg());
        // hbar is real
        assert_eq!(d.hbar().conj(), d.hbar());
    }

    #[test]
    fn named_constant_spelling_of_zeta() {
        for (p, n) in [(1, 5), (2, 5), (1, 3), (3, 8), (1, 4)] {
            let params = derive_params(3, (p, n)).unwrap();
            let d = ExactDomain::new(&params).unwrap();
            let (a, b) = d.zeta_in_named_constants();
            let lhs = Cyclo::zeta_pow(d.field(), 1);
            let rhs = d.half_phase_pow(a).mul(&d.pow(&d.imag_unit(), b).unwrap());
            assert_eq!(lhs, rhs, "theta = {p}/{n}");
        }
    }

    #[test]
    fn exact_requires_rationals() {
        let params = derive_params(2.0, (1, 5)).unwrap();
        assert!(matches!(ExactDomain::new(&params), Err(Error::DomainMismatch(_))));
        let params = derive_params(2, 0.2).unwrap();
        assert!(ExactDomain::new(&params).is_err());
    }

    #[test]
    fn decimals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(decimal_to_rational("0.25"), Some(r(1, 4)));
        assert_eq!(decimal_to_rational("-1.5e-3"), Some(r(-3, 2000)));
        assert_eq!(decimal_to_rational("12"), Some(r(12, 1)));
        assert_eq!(decimal_to_rational("2E2"), Some(r(200, 1)));
        assert_eq!(decimal_to_rational("."), None);
        assert_eq!(decimal_to_rational("1.2.3"), None);
    }
}
