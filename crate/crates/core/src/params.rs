//! Deformation parameters `(mu, theta)` and the constants derived from them.
//!
//! With `h = e^{i pi theta}` the derived constants are
//!
//! * `q = h^2 = e^{2 pi i theta}`
//! * `hbar = tan(pi theta)`
//! * `z = h / (2 i cos(pi theta))`, so `Re z = hbar / 2` and `Im z = -1/2`.
//!
//! The torus regime ("admissible" parameters) is `mu > 0` and
//! `|mu cos(pi theta)| > 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A real parameter, kept exact when it was given as a rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealParam {
    Rational(Rational64),
    Float(f64),
}

impl RealParam {
    pub fn value(&self) -> f64 {
        match self {
            RealParam::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealParam::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        match self {
            RealParam::Rational(r) => Some(*r),
            RealParam::Float(_) => None,
        }
    }
}

impl From<f64> for RealParam {
    fn from(x: f64) -> Self {
        RealParam::Float(x)
    }
}

impl From<i64> for RealParam {
    fn from(n: i64) -> Self {
        RealParam::Rational(Rational64::from_integer(n))
    }
}

impl From<Rational64> for RealParam {
    fn from(r: Rational64) -> Self {
        RealParam::Rational(r)
    }
}

impl From<(i64, i64)> for RealParam {
    fn from((p, q): (i64, i64)) -> Self {
        RealParam::Rational(Rational64::new(p, q))
    }
}

/// Accepts integers, `p/q` rationals (kept exact) and decimal floats.
impl FromStr for RealParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot read `{s}` as a number"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(Error::Domain(format!("zero denominator in `{s}`")));
            }
            return Ok(RealParam::Rational(Rational64::new(p, q)));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(RealParam::Rational(Rational64::from_integer(n)));
        }
        s.parse::<f64>().map(RealParam::Float).map_err(|_| bad())
    }
}

impl fmt::Display for RealParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealParam::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            RealParam::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            RealParam::Float(x) => write!(f, "{x}"),
        }
    }
}

/// The parameter pack `(mu, theta)` with its derived constants in floating point.
///
/// Exact versions of the constants live in [`crate::coeff::ExactDomain`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeformParams {
    pub mu: RealParam,
    pub theta: RealParam,
    pub q: Complex64,
    pub z: Complex64,
    pub hbar: f64,
    pub admissible: bool,
}

impl DeformParams {
    /// `e^{i pi theta}`, the fixed branch of `q^{1/2}`.
    pub fn half_phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.theta.value())
    }

    pub fn mu_value(&self) -> f64 {
        self.mu.value()
    }

    pub fn theta_value(&self) -> f64 {
        self.theta.value()
    }

    pub fn cos_pi_theta(&self) -> f64 {
        (PI * self.theta.value()).cos()
    }

    /// `mu - 1/|cos(pi theta)|`, the lower spectral bound of `mu + z U + zbar U*`.
    pub fn spectral_floor(&self) -> f64 {
        self.mu_value() - 1.0 / self.cos_pi_theta().abs()
    }

    /// `(p, N)` with `theta = p/N` in lowest terms, when theta is rational.
    pub fn rational_theta(&self) -> Option<(i64, i64)> {
        self.theta.as_rational().map(|r| (*r.numer(), *r.denom()))
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.admissible {
            Ok(())
        } else {
            Err(Error::InadmissibleParams(format!(
                "mu = {}, theta = {}: need mu > 0 and |mu cos(pi theta)| > 1",
                self.mu, self.theta
            )))
        }
    }
}

/// Derives `q`, `z`, `hbar` and the admissibility flag from `(mu, theta)`.
///
/// Fails only at the poles `theta = 1/2 (mod 1)`; inadmissible parameters are
/// reported through [`DeformParams::admissible`].
pub fn derive_params(mu: impl Into<RealParam>, theta: impl Into<RealParam>) -> Result<DeformParams> {
    let mu = mu.into();
    let theta = theta.into();
    let pole = match theta {
        RealParam::Rational(r) => {
            // theta = k + 1/2  <=>  2 theta is an odd integer
            let two = r * Rational64::from_integer(2);
            two.is_integer() && (two.numer() % 2 != 0)
        }
        RealParam::Float(t) => (PI * t).cos().abs() < 1e-14,
    };
    if pole {
        return Err(Error::Pole(theta.to_string()));
    }
    let t = theta.value();
    let c = (PI * t).cos();
    let h = Complex64::from_polar(1.0, PI * t);
    let q = h * h;
    let z = h / (Complex64::i() * 2.0 * c);
    let hbar = (PI * t).tan();
    let m = mu.value();
    let mu_positive = match mu {
        RealParam::Rational(r) => r.is_positive() && !r.is_zero(),
        RealParam::Float(x) => x > 0.0,
    };
    let admissible = mu_positive && (m * c).abs() > 1.0;
    Ok(DeformParams {
        mu,
        theta,
        q,
        z,
        hbar,
        admissible,
    })
}

/// Serializable summary used in reports.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSummary {
    pub mu: String,
    pub theta: String,
    pub hbar: f64,
    pub q: [f64; 2],
    pub z: [f64; 2],
    pub admissible: bool,
}

impl From<&DeformParams> for ParamSummary {
    fn from(p: &DeformParams) -> Self {
        ParamSummary {
            mu: p.mu.to_string(),
            theta: p.theta.to_string(),
            hbar: p.hbar,
            q: [p.q.re, p.q.im],
            z: [p.z.re, p.z.im],
            admissible: p.admissible,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifth_root_point() {
        let p = derive_params(2, (1, 5)).unwrap();
        // tan(pi/5) and 1/(2 cos(pi/5)) evaluated directly
        assert!((p.hbar - 0.7265425280053609).abs() < 1e-7);
        assert!((p.z.norm() - 0.6180339887498948).abs() < 1e-7);
        assert!(p.admissible);
        assert!((p.z.re - p.hbar / 2.0).abs() < 1e-15);
        assert!((p.z.im + 0.5).abs() < 1e-15);
    }

    #[test]
    fn commutative_point() {
        let p = derive_params(1, 0).unwrap();
        assert_eq!(p.q, Complex64::new(1.0, 0.0));
        assert!((p.z - Complex64::new(0.0, -0.5)).norm() < 1e-16);
        assert_eq!(p.hbar, 0.0);
        assert!(!p.admissible);
    }

    #[test]
    fn third_root_point() {
        let p = derive_params(3, (1, 3)).unwrap();
        assert!((p.mu_value() * p.cos_pi_theta() - 1.5).abs() < 1e-12);
        assert!(p.admissible);
    }

    #[test]
    fn poles_rejected() {
        assert!(matches!(derive_params(2, (1, 2)), Err(Error::Pole(_))));
        assert!(matches!(derive_params(2, (3, 2)), Err(Error::Pole(_))));
        assert!(matches!(derive_params(2, (-1, 2)), Err(Error::Pole(_))));
        assert!(matches!(derive_params(2, 0.5), Err(Error::Pole(_))));
        assert!(derive_params(2, (1, 4)).is_ok());
    }

    #[test]
    fn negative_mu_is_inadmissible() {
        let p = derive_params(-3, (1, 5)).unwrap();
        assert!(!p.admissible);
        assert!(p.require_admissible().is_err());
    }

    #[test]
    fn parse_real_params() {
        assert_eq!("1/5".parse::<RealParam>().unwrap(), RealParam::from((1, 5)));
        assert_eq!("2".parse::<RealParam>().unwrap(), RealParam::from(2));
        assert_eq!("0.25".parse::<RealParam>().unwrap(), RealParam::Float(0.25));
        assert!("1/0".parse::<RealParam>().is_err());
        assert!("abc".parse::<RealParam>().is_err());
    }
}
