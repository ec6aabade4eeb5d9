//! The map into the rotation algebra, checked on clock and shift matrices at
//! rational `theta`.
//!
//! `phi(L) = U` and `phi(W) = sqrt(R) V` with `R = mu + z U + zbar U*`. All
//! statements here are finite-dimensional evidence, not proofs about the
//! universal algebra.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisIndex, BasisVector};
use crate::coeff::{Coefficient, Domain};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_inv_sqrt, hermitian_sqrt, hs_inner, identity, min_eigenvalue, op_norm, CMatrix};
use crate::params::DeformParams;
use crate::poly::NcPoly;
use crate::reps::{evaluate, Family, MatrixRep, RepSpec};

pub const EVIDENCE: &str = "finite-dimensional evidence";

#[derive(Debug, Clone)]
pub struct ClockShiftPair {
    pub n: usize,
    pub p: i64,
    /// `diag(q^k)`, `k = 0..N-1`
    pub u: CMatrix,
    /// `V e_{k+1} = e_k`, cyclically
    pub v: CMatrix,
}

impl ClockShiftPair {
    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.p as f64 / self.n as f64)
    }
}

pub fn clock_shift(n: usize, p: i64) -> Result<ClockShiftPair> {
    if n < 1 || p.gcd(&(n as i64)) != 1 {
        return Err(Error::Domain(format!("clock and shift need gcd(p, N) = 1, got N = {n}, p = {p}")));
    }
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..n {
        // reduce the exponent first so that roots of unity like -1 come out exact
        let e = (p * k as i64).rem_euclid(n as i64) as f64 / n as f64;
        u[(k, k)] = root_of_unity(e);
        v[(k, (k + 1) % n)] = Complex64::new(1.0, 0.0);
    }
    Ok(ClockShiftPair { n, p, u, v })
}

/// `e^{2 pi i t}` for `t` in `[0, 1)`, exact at quarter turns.
fn root_of_unity(t: f64) -> Complex64 {
    match t {
        x if x == 0.0 => Complex64::new(1.0, 0.0),
        x if x == 0.25 => Complex64::new(0.0, 1.0),
        x if x == 0.5 => Complex64::new(-1.0, 0.0),
        x if x == 0.75 => Complex64::new(0.0, -1.0),
        x => Complex64::from_polar(1.0, 2.0 * PI * x),
    }
}

fn check_pair(pair: &ClockShiftPair, params: &DeformParams) -> Result<()> {
    params.require_admissible()?;
    let theta = pair.p as f64 / pair.n as f64;
    if (theta - params.theta_value()).abs() > 1e-15 {
        return Err(Error::DomainMismatch(format!(
            "clock and shift at theta = {theta} do not match parameters at theta = {}",
            params.theta
        )));
    }
    Ok(())
}

/// `R(w) = mu + z w U + conj(z w) U*`.
pub fn r_element(pair: &ClockShiftPair, params: &DeformParams, w: Complex64) -> CMatrix {
    let zw = params.z * w;
    identity(pair.n).scale(params.mu_value()) + &pair.u * zw + pair.u.adjoint() * zw.conj()
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgeReport {
    pub check: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: i64,
    pub mu: f64,
    pub residual_or_bound: f64,
    pub pass: bool,
    pub details: BTreeMap<String, f64>,
    pub status: &'static str,
}

impl BridgeReport {
    fn new(check: &str, pair: &ClockShiftPair, params: &DeformParams, value: f64, pass: bool, details: BTreeMap<String, f64>) -> Self {
        BridgeReport {
            check: check.into(),
            n: pair.n,
            p: pair.p,
            mu: params.mu_value(),
            residual_or_bound: value,
            pass,
            details,
            status: EVIDENCE,
        }
    }
}

/// Minimum eigenvalue of `R(e^{i pi phi})` over `phases` equally spaced
/// `phi` in `[0, 2)`, against the bound `mu - 1/|cos(pi theta)|`.
pub fn spectral_check(params: &DeformParams, pair: &ClockShiftPair, phases: usize) -> Result<BridgeReport> {
    check_pair(pair, params)?;
    let bound = params.spectral_floor();
    let mins: Vec<(f64, f64)> = (0..phases)
        .into_par_iter()
        .map(|j| {
            let phase = 2.0 * j as f64 / phases as f64;
            let r = r_element(pair, params, Complex64::from_polar(1.0, PI * phase));
            (phase, min_eigenvalue(&r))
        })
        .collect();
    if let Some(&(phase, min_eig)) = mins.iter().find(|(_, m)| *m < bound - 1e-12) {
        return Err(Error::SpectralViolation { phase, min_eig, bound });
    }
    let overall = mins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let mut details = BTreeMap::new();
    details.insert("bound".into(), bound);
    details.insert("min_eigenvalue".into(), overall);
    details.insert("phases".into(), phases as f64);
    Ok(BridgeReport::new("spectrum", pair, params, overall, true, details))
}

/// The image of the generators as a representation: `L -> U`, `W -> sqrt(R) V`.
pub fn phi_rep(pair: &ClockShiftPair, params: &DeformParams) -> Result<MatrixRep> {
    check_pair(pair, params)?;
    let sqrt_r = hermitian_sqrt(&r_element(pair, params, Complex64::new(1.0, 0.0)))?;
    Ok(MatrixRep {
        spec: RepSpec {
            family: Family::Torus,
            n: pair.n,
            p: Some(pair.p),
            theta: params.theta_value(),
            mu: params.mu_value(),
        },
        w: sqrt_r * &pair.v,
        lambda: Some(pair.u.clone()),
    })
}

pub fn phi_map<C: Coefficient>(p: &NcPoly<C>, pair: &ClockShiftPair, params: &DeformParams) -> Result<CMatrix> {
    evaluate(p, &phi_rep(pair, params)?)
}

/// `max_k ||sqrt(R(q^k)) V - V sqrt(R(q^{k-1}))||` over `k` in `[-3, 3]`.
pub fn intertwine_check(pair: &ClockShiftPair, params: &DeformParams) -> Result<BridgeReport> {
    intertwine_with(pair, params, -1)
}

/// Same as [`intertwine_check`] with the right-hand shift `q^{k+shift}`;
/// only `shift = -1` is correct.
pub fn intertwine_with(pair: &ClockShiftPair, params: &DeformParams, shift: i64) -> Result<BridgeReport> {
    check_pair(pair, params)?;
    let q = pair.q();
    let mut details = BTreeMap::new();
    let mut worst = 0.0f64;
    let n = pair.n as i64;
    for k in (-3..=3).chain([n]) {
        let left = hermitian_sqrt(&r_element(pair, params, q.powi(k as i32)))?;
        let right = hermitian_sqrt(&r_element(pair, params, q.powi((k + shift) as i32)))?;
        let res = op_norm(&(left * &pair.v - &pair.v * right));
        details.insert(format!("k={k}"), res);
        worst = worst.max(res);
    }
    Ok(BridgeReport::new("intertwine", pair, params, worst, worst < 1e-12, details))
}

/// Residuals of the generator relations under `phi`.
pub fn phi_relation_residuals(pair: &ClockShiftPair, params: &DeformParams) -> Result<crate::reps::ResidualReport> {
    Ok(crate::reps::relation_residuals(&phi_rep(pair, params)?))
}

/// `phi^{-1}(U) = L`, `phi^{-1}(V) = R(L)^{-1/2} W`, composed with `phi` in
/// both orders.
pub fn phi_inverse_roundtrip(pair: &ClockShiftPair, params: &DeformParams) -> Result<BridgeReport> {
    check_pair(pair, params)?;
    let (p, n) = params
        .rational_theta()
        .ok_or_else(|| Error::Domain("roundtrip needs a rational theta".into()))?;
    // clock-shift side: phi(phi^{-1}(V)) = R(U)^{-1/2} sqrt(R(U)) V
    let r_u = r_element(pair, params, Complex64::new(1.0, 0.0));
    let phi_w = hermitian_sqrt(&r_u)? * &pair.v;
    let back_v = hermitian_inv_sqrt(&r_u)? * &phi_w;
    // representation side: V~ = R(L)^{-1/2} W must be unitary, and phi of it is W again
    let rep = crate::reps::torus_rep(n as usize, p, params.mu_value())?;
    let lam = rep.lambda.clone().expect("torus family");
    let r_l = identity(rep.dim()).scale(params.mu_value()) + &lam * params.z + lam.adjoint() * params.z.conj();
    let v_tilde = hermitian_inv_sqrt(&r_l)? * &rep.w;
    let one = identity(rep.dim());
    let mut details = BTreeMap::new();
    details.insert("phi(phi^-1(V)) - V".into(), op_norm(&(&back_v - &pair.v)));
    details.insert("phi(phi^-1(U)) - U".into(), 0.0);
    details.insert("V~* V~ - I".into(), op_norm(&(v_tilde.adjoint() * &v_tilde - &one)));
    details.insert("V~ V~* - I".into(), op_norm(&(&v_tilde * v_tilde.adjoint() - &one)));
    details.insert("V~ L - q L V~".into(), op_norm(&(&v_tilde * &lam - &lam * &v_tilde * rep.q())));
    details.insert("sqrt(R(L)) V~ - W".into(), op_norm(&(hermitian_sqrt(&r_l)? * &v_tilde - &rep.w)));
    let worst = details.values().copied().fold(0.0, f64::max);
    Ok(BridgeReport::new("roundtrip", pair, params, worst, worst < 1e-10, details))
}

/// Minimum eigenvalue of the Hilbert-Schmidt Gram matrix of `phi(T_m)` over
/// `indices`. Positive values are evidence of injectivity on their span.
pub fn independence_evidence<D: Domain>(
    domain: &D,
    pair: &ClockShiftPair,
    indices: &[BasisIndex],
) -> Result<BridgeReport> {
    let limit = pair.n * pair.n;
    if indices.len() > limit {
        return Err(Error::BoxTooLarge { count: indices.len(), limit });
    }
    let params = domain.params();
    let rep = phi_rep(pair, params)?;
    let images: Vec<CMatrix> = indices
        .par_iter()
        .map(|idx| evaluate(&BasisVector::single(*idx, domain.one()).to_poly(domain), &rep))
        .collect::<Result<_>>()?;
    let k = images.len();
    let mut gram = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = hs_inner(&images[i], &images[j]);
        }
    }
    let min = min_eigenvalue(&gram);
    let mut details = BTreeMap::new();
    details.insert("indices".into(), k as f64);
    details.insert("min_gram_eigenvalue".into(), min);
    Ok(BridgeReport::new("independence", pair, params, min, min > 1e-8, details))
}

/// `T_m` indices with `m1` in `a` and `m2` in `b`.
pub fn index_box(a: std::ops::RangeInclusive<i64>, b: std::ops::RangeInclusive<i64>) -> Vec<BasisIndex> {
    a.flat_map(|m1| b.clone().map(move |m2| BasisIndex::t(m1, m2))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FloatDomain;
    use crate::params::derive_params;

    #[test]
    fn pauli_case() {
        let cs = clock_shift(2, 1).unwrap();
        assert_eq!(cs.u[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(&cs.v * &cs.u, -(&cs.u * &cs.v));
    }

    #[test]
    fn weyl_relation() {
        let cs = clock_shift(5, 1).unwrap();
        assert!(op_norm(&(&cs.v * &cs.u - &cs.u * &cs.v * cs.q())) < 1e-15);
        assert!(cs.u.trace().norm() < 1e-15 && cs.v.trace().norm() == 0.0);
    }

    #[test]
    fn spectral_bounds() {
        let params = derive_params(2, (1, 5)).unwrap();
        let r = spectral_check(&params, &clock_shift(5, 1).unwrap(), 64).unwrap();
        assert!(r.residual_or_bound >= 2.0 - 1.0 / (PI / 5.0).cos() - 1e-12);
        let params = derive_params(3, (1, 3)).unwrap();
        let r = spectral_check(&params, &clock_shift(3, 1).unwrap(), 64).unwrap();
        assert!(r.residual_or_bound >= 1.0 - 1e-12);
        let bad = derive_params(1, (1, 3)).unwrap();
        assert!(matches!(
            spectral_check(&bad, &clock_shift(3, 1).unwrap(), 8),
            Err(Error::InadmissibleParams(_))
        ));
    }

    #[test]
    fn relations_under_phi() {
        let params = derive_params(2, (1, 5)).unwrap();
        let pair = clock_shift(5, 1).unwrap();
        let r = phi_relation_residuals(&pair, &params).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn intertwiner_and_fault() {
        let params = derive_params(2, (1, 5)).unwrap();
        let pair = clock_shift(5, 1).unwrap();
        let r = intertwine_check(&pair, &params).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.details["k=0"] - r.details["k=5"]).abs() < 1e-14);
        let wrong = intertwine_with(&pair, &params, 1).unwrap();
        assert!(wrong.residual_or_bound > 0.1);
    }

    #[test]
    fn roundtrip() {
        let params = derive_params(2, (1, 5)).unwrap();
        let r = phi_inverse_roundtrip(&clock_shift(5, 1).unwrap(), &params).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn gram_evidence() {
        let params = derive_params(2, (1, 11)).unwrap();
        let d = FloatDomain::new(&params);
        let pair = clock_shift(11, 1).unwrap();
        let r = independence_evidence(&d, &pair, &index_box(-2..=2, 0..=2)).unwrap();
        assert!(r.pass, "{r:?}");
        let unit = independence_evidence(&d, &pair, &[BasisIndex::t(0, 0)]).unwrap();
        assert!((unit.residual_or_bound - 11.0).abs() < 1e-12);
        let dup = independence_evidence(&d, &pair, &[BasisIndex::t(1, 1), BasisIndex::t(1, 1)]).unwrap();
        assert!(dup.residual_or_bound.abs() < 1e-10 && !dup.pass);
        let big = index_box(-6..=6, 0..=9);
        assert!(matches!(independence_evidence(&d, &pair, &big), Err(Error::BoxTooLarge { .. })));
    }
}
