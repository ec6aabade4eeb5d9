//! Finite-dimensional representations: the torus family at `theta = p/N` and
//! the sphere family at small `theta`, residual checks, evaluation of
//! polynomials, and the two scaling limits.
//!
//! Matrices use 0-based indices; `W` sends `e_{l+1}` to `W_{l,l+1} e_l`, with
//! the torus family closing the cycle through the corner entry `W[N-1, 0]`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::linalg::{commutator, identity, op_norm, CMatrix};
use crate::params::derive_params;
use crate::poly::NcPoly;
use crate::word::{Alphabet, Letter};

pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Torus,
    Sphere,
}

/// Denominator used in the torus matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntryConvention {
    /// `cos(pi theta)`, the normalization that satisfies the relations.
    #[default]
    CosPiTheta,
    /// `cos(theta)` with theta read in radians; kept to show that it fails.
    CosTheta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepSpec {
    pub family: Family,
    pub n: usize,
    /// Numerator of `theta = p/N` for the torus family.
    pub p: Option<i64>,
    pub theta: f64,
    /// Supplied for the torus family, fitted for the sphere family.
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub spec: RepSpec,
    pub w: CMatrix,
    pub lambda: Option<CMatrix>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl MatrixRep {
    pub fn hbar(&self) -> f64 {
        (PI * self.spec.theta).tan()
    }

    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.spec.theta)
    }

    pub fn z(&self) -> Complex64 {
        let t = PI * self.spec.theta;
        Complex64::from_polar(1.0, t) / (Complex64::i() * 2.0 * t.cos())
    }

    pub fn dim(&self) -> usize {
        self.spec.n
    }

    pub fn ws(&self) -> CMatrix {
        self.w.adjoint()
    }

    /// `(W + W*)/2`
    pub fn x(&self) -> CMatrix {
        (&self.w + self.ws()).scale(0.5)
    }

    /// `(W - W*)/(2i)`
    pub fn y(&self) -> CMatrix {
        (&self.w - self.ws()) * Complex64::new(0.0, -0.5)
    }

    /// `(WW* - W*W)/(2 hbar)`
    pub fn z_op(&self) -> CMatrix {
        commutator(&self.w, &self.ws()).scale(0.5 / self.hbar())
    }

    fn letter_matrix(&self, l: Letter) -> Result<CMatrix> {
        Ok(match l {
            Letter::W => self.w.clone(),
            Letter::Ws => self.ws(),
            Letter::X => self.x(),
            Letter::Y => self.y(),
            Letter::Z => self.z_op(),
            Letter::L | Letter::Ls => {
                let lam = self.lambda.as_ref().ok_or_else(|| {
                    Error::AlphabetMismatch("sphere representations carry no Lambda".into())
                })?;
                if l == Letter::L {
                    lam.clone()
                } else {
                    lam.adjoint()
                }
            }
        })
    }

    /// Overwrites one entry of `W`; used for fault injection.
    pub fn with_w_entry(mut self, row: usize, col: usize, value: Complex64) -> Self {
        self.w[(row, col)] = value;
        self
    }

    /// Multiplies the first diagonal entry of `Lambda` by `factor`.
    pub fn with_lambda_scaled(mut self, factor: Complex64) -> Self {
        if let Some(l) = self.lambda.as_mut() {
            l[(0, 0)] *= factor;
        }
        self
    }
}

pub fn torus_rep(n: usize, p: i64, mu: f64) -> Result<MatrixRep> {
    torus_rep_with(n, p, mu, EntryConvention::CosPiTheta)
}

pub fn torus_rep_with(n: usize, p: i64, mu: f64, conv: EntryConvention) -> Result<MatrixRep> {
    if n < 2 || p.gcd(&(n as i64)) != 1 {
        return Err(Error::Domain(format!("torus representations need N >= 2 and gcd(p, N) = 1, got N = {n}, p = {p}")));
    }
    let params = derive_params(mu, (p, n as i64))?;
    params.require_admissible()?;
    let theta = params.theta_value();
    let denom = match conv {
        EntryConvention::CosPiTheta => (PI * theta).cos(),
        EntryConvention::CosTheta => theta.cos(),
    };
    let mut w = CMatrix::zeros(n, n);
    for l in 1..n {
        let r = mu + (2.0 * PI * l as f64 * theta).cos() / denom;
        if r < 0.0 {
            return Err(Error::Domain(format!("negative radicand {r} at l = {l}")));
        }
        w[(l - 1, l)] = c(r.sqrt());
    }
    w[(n - 1, 0)] = c((mu + 1.0 / denom).sqrt());
    let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (1..=n).map(|l| Complex64::from_polar(1.0, PI / 2.0 - PI * theta + 2.0 * PI * l as f64 * theta)),
    ));
    Ok(MatrixRep {
        spec: RepSpec { family: Family::Torus, n, p: Some(p), theta, mu },
        w,
        lambda: Some(lambda),
    })
}

/// Sphere family at `0 < theta < 1/N`, with `mu` fitted by [`fit_mu`].
pub fn sphere_rep(n: usize, theta: f64) -> Result<MatrixRep> {
    if n < 2 || !(theta > 0.0 && theta < 1.0 / n as f64) {
        return Err(Error::Domain(format!("sphere representations need N >= 2 and 0 < theta < 1/N, got N = {n}, theta = {theta}")));
    }
    let cos = (PI * theta).cos();
    let mut w = CMatrix::zeros(n, n);
    for l in 1..n {
        let r = 2.0 * (PI * l as f64 * theta).sin() * (PI * (n - l) as f64 * theta).sin() / cos;
        if r < 0.0 {
            return Err(Error::Domain(format!("negative radicand {r} at l = {l}")));
        }
        w[(l - 1, l)] = c(r.sqrt());
    }
    let mut rep = MatrixRep {
        spec: RepSpec { family: Family::Sphere, n, p: None, theta, mu: f64::NAN },
        w,
        lambda: None,
    };
    rep.spec.mu = fit_mu(&rep)?;
    Ok(rep)
}

/// `2A^3 + AB^2 + B^2A`
fn phi(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let b2 = b * b;
    (a * a * a).scale(2.0) + a * &b2 + &b2 * a
}

/// Least-squares `mu` for `[Y,Z] = i hbar (Phi(X,Y) - 2 mu X)` in the
/// Frobenius norm; the residual is affine in `mu`, so this is exact.
pub fn fit_mu(rep: &MatrixRep) -> Result<f64> {
    let (x, y, z) = (rep.x(), rep.y(), rep.z_op());
    let ih = Complex64::new(0.0, rep.hbar());
    let a = commutator(&y, &z) - phi(&x, &y) * ih;
    let b = &x * (ih * 2.0);
    let bb = crate::linalg::hs_inner(&b, &b).re;
    if bb == 0.0 {
        return Err(Error::DegenerateFit("X vanishes".into()));
    }
    Ok(-crate::linalg::hs_inner(&b, &a).re / bb)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub family: Family,
    pub tolerance: f64,
    pub residuals: BTreeMap<String, f64>,
    pub max_residual: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn new(family: Family, tolerance: f64, residuals: BTreeMap<String, f64>) -> Self {
        let max_residual = residuals.values().copied().fold(0.0, f64::max);
        ResidualReport { family, tolerance, residuals, max_residual, pass: max_residual < tolerance }
    }
}

/// Operator residuals of every defining relation available in the family.
pub fn relation_residuals(rep: &MatrixRep) -> ResidualReport {
    relation_residuals_with(rep, RESIDUAL_TOLERANCE)
}

pub fn relation_residuals_with(rep: &MatrixRep, tol: f64) -> ResidualReport {
    let mut r = BTreeMap::new();
    let (w, ws) = (rep.w.clone(), rep.ws());
    let (hbar, mu) = (rep.hbar(), rep.spec.mu);
    let n = rep.dim();
    if let Some(lam) = &rep.lambda {
        let (q, z) = (rep.q(), rep.z());
        let ls = lam.adjoint();
        let one = identity(n);
        r.insert("W L = q L W".into(), op_norm(&(&w * lam - lam * &w * q)));
        r.insert("W* L = qbar L W*".into(), op_norm(&(&ws * lam - lam * &ws * q.conj())));
        r.insert("W* L* = q L* W*".into(), op_norm(&(&ws * &ls - &ls * &ws * q)));
        r.insert("W L* = qbar L* W".into(), op_norm(&(&w * &ls - &ls * &w * q.conj())));
        r.insert("L* L = I".into(), op_norm(&(&ls * lam - &one)));
        r.insert("L L* = I".into(), op_norm(&(lam * &ls - &one)));
        r.insert(
            "W W* = z L + zbar L* + mu".into(),
            op_norm(&(&w * &ws - (lam * z + &ls * z.conj() + &one * c(mu)))),
        );
        r.insert(
            "W* W = -zbar L - z L* + mu".into(),
            op_norm(&(&ws * &w - (lam * (-z.conj()) + &ls * (-z) + &one * c(mu)))),
        );
    }
    let h2 = hbar * hbar;
    let lhs = (&w * &w * &ws + &ws * &w * &w).scale(1.0 + h2);
    let rhs = w.scale(4.0 * mu * h2) + (&w * &ws * &w).scale(2.0 * (1.0 - h2));
    r.insert("W cubic".into(), op_norm(&(lhs - rhs)));
    let (x, y, zz) = (rep.x(), rep.y(), rep.z_op());
    let ih = Complex64::new(0.0, hbar);
    r.insert("[X,Y] = i hbar Z".into(), op_norm(&(commutator(&x, &y) - &zz * ih)));
    r.insert(
        "[Y,Z] = i hbar (Phi(X,Y) - 2 mu X)".into(),
        op_norm(&(commutator(&y, &zz) - (phi(&x, &y) - x.scale(2.0 * mu)) * ih)),
    );
    r.insert(
        "[Z,X] = i hbar (Phi(Y,X) - 2 mu Y)".into(),
        op_norm(&(commutator(&zz, &x) - (phi(&y, &x) - y.scale(2.0 * mu)) * ih)),
    );
    ResidualReport::new(rep.spec.family, tol, r)
}

/// Residuals of `(X^2 + Y^2 - mu)^2 + Z^2 = I` and of its commutators with
/// `X, Y, Z`.
pub fn casimir_residuals(rep: &MatrixRep) -> ResidualReport {
    let (x, y, z) = (rep.x(), rep.y(), rep.z_op());
    let n = rep.dim();
    let r = &x * &x + &y * &y - identity(n).scale(rep.spec.mu);
    let cas = &r * &r + &z * &z;
    let mut out = BTreeMap::new();
    out.insert("C = I".into(), op_norm(&(&cas - identity(n))));
    out.insert("[X,C]".into(), op_norm(&commutator(&x, &cas)));
    out.insert("[Y,C]".into(), op_norm(&commutator(&y, &cas)));
    out.insert("[Z,C]".into(), op_norm(&commutator(&z, &cas)));
    ResidualReport::new(rep.spec.family, RESIDUAL_TOLERANCE, out)
}

/// The algebra homomorphism into matrices.
pub fn evaluate<C: Coefficient>(p: &NcPoly<C>, rep: &MatrixRep) -> Result<CMatrix> {
    if rep.lambda.is_none() && p.alphabet()? == Some(Alphabet::Torus) {
        let uses_lambda = p.terms().any(|(w, _)| w.letters().iter().any(|l| matches!(l, Letter::L | Letter::Ls)));
        if uses_lambda {
            return Err(Error::AlphabetMismatch("sphere representations carry no Lambda".into()));
        }
    }
    let n = rep.dim();
    let mut cache: BTreeMap<Letter, CMatrix> = BTreeMap::new();
    let mut out = CMatrix::zeros(n, n);
    for (w, coef) in p.terms() {
        let mut m = identity(n);
        for l in w.letters() {
            if !cache.contains_key(l) {
                cache.insert(*l, rep.letter_matrix(*l)?);
            }
            m = m * &cache[l];
        }
        out += m * coef.to_complex();
    }
    Ok(out)
}

/// `Lambda` rebuilt from `W` alone, and its distance to the stored `Lambda`.
pub fn lambda_reconstruct(rep: &MatrixRep) -> Result<(CMatrix, f64)> {
    let lam = rep
        .lambda
        .as_ref()
        .ok_or_else(|| Error::Domain("Lambda reconstruction needs a torus representation".into()))?;
    let (w, ws) = (&rep.w, rep.ws());
    let n = rep.dim();
    let comm = w * &ws - &ws * w;
    let sym = w * &ws + &ws * w - identity(n).scale(2.0 * rep.spec.mu);
    let rebuilt = comm.scale(0.5 / rep.hbar()) + sym * Complex64::new(0.0, 0.5);
    let res = op_norm(&(&rebuilt - lam));
    Ok((rebuilt, res))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub eps: f64,
    pub l: usize,
    pub value: f64,
    pub limit: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingSummary {
    pub eps: f64,
    pub max_abs_err: f64,
    /// Torus: `eps^2 / cos(pi theta)`. Sphere: the su(2) commutator deviation.
    pub bound_or_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingTable {
    pub family: Family,
    pub rows: Vec<ScalingRow>,
    pub summary: Vec<ScalingSummary>,
    /// Least-squares slope of `log max_abs_err` against `log eps`.
    pub order: f64,
    /// Largest change of the `Lambda` matrix along the ladder (torus only).
    pub lambda_drift: Option<f64>,
}

impl ScalingTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,l,value,limit,abs_err\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.eps, r.l, r.value, r.limit, r.abs_err);
        }
        s
    }
}

/// Slope of the least-squares line through `(log x, log y)`.
pub fn log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `W~ = eps W` at `mu = 1/eps^2`; every entry tends to 1.
pub fn scaling_torus(n: usize, p: i64, ladder: &[f64]) -> Result<ScalingTable> {
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut first_lambda: Option<CMatrix> = None;
    let mut drift = 0.0f64;
    for &eps in ladder {
        let rep = torus_rep(n, p, 1.0 / (eps * eps))?;
        let lam = rep.lambda.clone().expect("torus family");
        match &first_lambda {
            None => first_lambda = Some(lam),
            Some(l0) => drift = drift.max(op_norm(&(&lam - l0))),
        }
        let mut max_err = 0.0f64;
        for l in 1..=n {
            let (row, col) = if l < n { (l - 1, l) } else { (n - 1, 0) };
            let value = eps * rep.w[(row, col)].re;
            let abs_err = (value - 1.0).abs();
            max_err = max_err.max(abs_err);
            rows.push(ScalingRow { eps, l, value, limit: 1.0, abs_err });
        }
        let bound = eps * eps / (PI * rep.spec.theta).cos();
        summary.push(ScalingSummary { eps, max_abs_err: max_err, bound_or_deviation: bound });
    }
    let order = log_slope(&summary.iter().map(|s| (s.eps, s.max_abs_err)).collect::<Vec<_>>());
    Ok(ScalingTable { family: Family::Torus, rows, summary, order, lambda_drift: Some(drift) })
}

/// `theta = eps theta~`, `W~ = W/eps`, tending to `sqrt(2) pi theta~ sqrt(l(N-l))`.
///
/// The deviation column is the largest of
/// `||[X~,Y~] - ik Z~||`, `||[Y~,Z~] - 2ik X~||`, `||[Z~,X~] - 2ik Y~||` with
/// `X~, Y~, Z~` the rescaled generators divided by `eps` and `k = hbar/eps`.
pub fn scaling_sphere(n: usize, theta_tilde: f64, ladder: &[f64]) -> Result<ScalingTable> {
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &eps in ladder {
        let theta = eps * theta_tilde;
        if theta * n as f64 >= 1.0 {
            return Err(Error::Domain(format!("eps theta~ = {theta} is not below 1/N")));
        }
        let rep = sphere_rep(n, theta)?;
        let mut max_err = 0.0f64;
        for l in 1..n {
            let value = rep.w[(l - 1, l)].re / eps;
            let limit = 2f64.sqrt() * PI * theta_tilde * ((l * (n - l)) as f64).sqrt();
            let abs_err = (value - limit).abs();
            max_err = max_err.max(abs_err);
            rows.push(ScalingRow { eps, l, value, limit, abs_err });
        }
        let (x, y, z) = (rep.x().unscale(eps), rep.y().unscale(eps), rep.z_op().unscale(eps));
        let ik = Complex64::new(0.0, rep.hbar() / eps);
        let dev = op_norm(&(commutator(&x, &y) - &z * ik))
            .max(op_norm(&(commutator(&y, &z) - &x * (ik * 2.0))))
            .max(op_norm(&(commutator(&z, &x) - &y * (ik * 2.0))));
        summary.push(ScalingSummary { eps, max_abs_err: max_err, bound_or_deviation: dev });
    }
    let order = log_slope(&summary.iter().map(|s| (s.eps, s.max_abs_err)).collect::<Vec<_>>());
    Ok(ScalingTable { family: Family::Sphere, rows, summary, order, lambda_drift: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_corner_entry() {
        let rep = torus_rep(5, 1, 2.0).unwrap();
        // sqrt(2 + 1/cos(pi/5)) evaluated directly
        assert!((rep.w[(4, 0)].re - 1.798_907_439_947_867_3).abs() < 1e-12);
        let lam = rep.lambda.as_ref().unwrap();
        for l in 0..5 {
            let ratio = lam[((l + 1) % 5, (l + 1) % 5)] / lam[(l, l)];
            assert!((ratio - rep.q()).norm() < 1e-14);
        }
    }

    #[test]
    fn torus_relations_hold() {
        for (n, p, mu) in [(5, 1, 2.0), (8, 3, 4.0), (11, 1, 2.0)] {
            let rep = torus_rep(n, p, mu).unwrap();
            let r = relation_residuals(&rep);
            assert!(r.pass, "{r:?}");
            assert!(casimir_residuals(&rep).pass);
            assert!(lambda_reconstruct(&rep).unwrap().1 < 1e-12);
        }
    }

    #[test]
    fn faults_are_visible() {
        let rep = torus_rep(5, 1, 2.0).unwrap();
        let bumped = rep.clone().with_w_entry(0, 1, rep.w[(0, 1)] + 1e-3);
        let r = relation_residuals(&bumped);
        assert!(!r.pass && r.max_residual > 1e-4 && r.max_residual < 1e-1, "{}", r.max_residual);
        let flipped = rep.with_lambda_scaled(c(-1.0));
        assert!(lambda_reconstruct(&flipped).unwrap().1 > 1.0);
    }

    #[test]
    fn printed_cosine_fails() {
        let rep = torus_rep_with(5, 1, 2.0, EntryConvention::CosTheta).unwrap();
        assert!(!relation_residuals(&rep).pass);
    }

    #[test]
    fn sphere_entries() {
        let rep = sphere_rep(4, 0.1).unwrap();
        // sqrt(2 sin(0.1 pi) sin(0.3 pi) / cos(0.1 pi))
        assert!((rep.w[(0, 1)].re - 0.725_073_177_078_792_3).abs() < 1e-12);
        assert!((rep.w[(0, 1)].re - rep.w[(2, 3)].re).abs() < 1e-15);
        let r = relation_residuals(&sphere_rep(4, 0.05).unwrap());
        assert!(r.residuals["[X,Y] = i hbar Z"] < 1e-15);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn fitted_mu_regressions() {
        for (n, t, mu) in [
            (2, 0.1, -0.8506508083520403),
            (4, 0.05, -0.8191014929744633),
            (4, 0.1, -0.3249196962329065),
            (6, 0.01, -0.9827721894784339),
        ] {
            let rep = sphere_rep(n, t).unwrap();
            assert!((rep.spec.mu - mu).abs() < 1e-10, "{n} {t} {}", rep.spec.mu);
        }
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let rep = torus_rep(5, 1, 2.0).unwrap();
        let d = crate::coeff::FloatDomain::new(&derive_params(2, (1, 5)).unwrap());
        let p = crate::parse::parse_expression("L L*", &d).unwrap();
        assert!(op_norm(&(evaluate(&p, &rep).unwrap() - identity(5))) < 1e-14);
        let sphere = sphere_rep(3, 0.1).unwrap();
        assert!(matches!(evaluate(&p, &sphere), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn scaling_orders() {
        let t = scaling_torus(5, 1, &[1e-1, 1e-2, 1e-3]).unwrap();
        assert!((1.9..=2.1).contains(&t.order), "{}", t.order);
        assert!(t.summary.iter().all(|s| s.max_abs_err <= s.bound_or_deviation));
        assert_eq!(t.lambda_drift, Some(0.0));
        let s = scaling_sphere(6, 0.3, &[1e-1, 5e-2, 2.5e-2, 1.25e-2]).unwrap();
        assert!((1.9..=2.1).contains(&s.order), "{}", s.order);
        assert!(s.summary.windows(2).all(|w| w[1].bound_or_deviation < w[0].bound_or_deviation));
        assert!(t.to_csv().starts_with("eps,l,value,limit,abs_err\n"));
    }
}
