//! The right module of functions on `R x Z_n`, its connection and the pulled
//! back derivations.
//!
//! Elements are expression trees evaluated as Taylor jets in `x`, so
//! derivatives are exact through every action and no identity below carries
//! discretization error.

pub mod jet;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::{Domain, FloatDomain};
use crate::error::{Error, Result};
use crate::params::{DeformParams, RealParam};
use crate::poly::NcPoly;
use crate::rewrite::ReductionSystem;
use crate::word::Letter;

pub use jet::Jet;

/// `(m, n)` together with the algebra parameters and `eps = m/n + theta`.
#[derive(Debug, Clone)]
pub struct ModuleParams {
    pub m: i64,
    pub n: i64,
    pub params: DeformParams,
    pub eps: f64,
}

impl ModuleParams {
    pub fn new(m: i64, n: i64, params: DeformParams) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain(format!("n must be at least 1, got {n}")));
        }
        params.require_admissible()?;
        let eps = match params.theta {
            RealParam::Rational(t) => {
                let e = Rational64::new(m, n) + t;
                if *e.numer() == 0 {
                    return Err(Error::Domain("eps = m/n + theta vanishes".into()));
                }
                *e.numer() as f64 / *e.denom() as f64
            }
            RealParam::Float(t) => m as f64 / n as f64 + t,
        };
        if eps == 0.0 {
            return Err(Error::Domain("eps = m/n + theta vanishes".into()));
        }
        Ok(ModuleParams { m, n, params, eps })
    }

    fn cos(&self) -> f64 {
        self.params.cos_pi_theta()
    }

    fn theta(&self) -> f64 {
        self.params.theta_value()
    }

    /// `u = 2 pi (x - m k/n)`
    fn phase_arg(&self, x: f64, k: i64) -> f64 {
        2.0 * PI * (x - self.m as f64 * k as f64 / self.n as f64)
    }

    /// The radicand `mu + sin(2 pi (x - mk/n) - pi theta)/cos(pi theta)` of
    /// the weight function.
    pub fn weight_radicand(&self, x: f64, k: i64) -> f64 {
        self.params.mu_value() + (self.phase_arg(x, k) - PI * self.theta()).sin() / self.cos()
    }

    pub fn curvature(&self) -> Complex64 {
        Complex64::new(0.0, 1.0 / (2.0 * PI * self.eps))
    }
}

/// Multiplication operators that appear in the actions.
#[derive(Debug, Clone, PartialEq)]
enum Multiplier {
    /// `W(x + dx, k + dk)`
    Weight { dx: f64, dk: i64 },
    /// `e^{+- 2 pi i (x - mk/n)}`
    Phase { sign: f64 },
    /// `1/(mu + sin(2 pi (x - mk/n) + pi theta)/cos(pi theta))`, the action
    /// of `(mu + z L + zbar L*)^{-1}`
    InvR,
    /// `a x`
    X { a: Complex64 },
}

#[derive(Debug)]
enum Node {
    /// `w_k P(x - x0) exp(-alpha (x - x0)^2 + i beta x)`
    Seed {
        weights: Vec<Complex64>,
        poly: Vec<Complex64>,
        x0: f64,
        alpha: f64,
        beta: f64,
    },
    /// `f(x + dx, k + dk)`
    Shift { child: ModuleElement, dx: f64, dk: i64 },
    Mul { child: ModuleElement, by: Multiplier },
    Sum(Vec<(Complex64, ModuleElement)>),
    /// `d/dx`
    Deriv(ModuleElement),
    Zero,
}

/// A function on `R x Z_n` with exact `x`-derivatives of every order.
#[derive(Clone)]
pub struct ModuleElement {
    node: Arc<Node>,
    mp: Arc<ModuleParams>,
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleElement({:?})", self.node)
    }
}

fn cz(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl ModuleElement {
    fn wrap(&self, node: Node) -> ModuleElement {
        ModuleElement { node: Arc::new(node), mp: self.mp.clone() }
    }

    pub fn params(&self) -> &ModuleParams {
        &self.mp
    }

    /// `w_k P(x - x0) exp(-alpha (x - x0)^2 + i beta x)`, `P` given by its
    /// coefficients in ascending degree.
    pub fn seed(mp: &ModuleParams, weights: Vec<Complex64>, poly: Vec<Complex64>, x0: f64, alpha: f64, beta: f64) -> Self {
        assert_eq!(weights.len(), mp.n as usize, "one weight per k");
        ModuleElement {
            node: Arc::new(Node::Seed { weights, poly, x0, alpha, beta }),
            mp: Arc::new(mp.clone()),
        }
    }

    /// `e^{-x^2}` on every `k`.
    pub fn gaussian(mp: &ModuleParams) -> Self {
        Self::seed(mp, vec![cz(1.0); mp.n as usize], vec![cz(1.0)], 0.0, 1.0, 0.0)
    }

    /// A random seed with weights of modulus in `[1, 2]`, a cubic prefactor,
    /// and width and oscillation drawn from moderate ranges.
    pub fn random_seed(mp: &ModuleParams, rng: &mut impl Rng) -> Self {
        let weights = (0..mp.n)
            .map(|_| Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let poly = (0..4)
            .map(|j| {
                let s = if j == 0 { 1.0 } else { 0.5 };
                Complex64::new(rng.gen_range(-s..s) + if j == 0 { 1.5 } else { 0.0 }, rng.gen_range(-s..s))
            })
            .collect();
        Self::seed(mp, weights, poly, rng.gen_range(-0.5..0.5), rng.gen_range(0.3..1.0), rng.gen_range(-2.0..2.0))
    }

    pub fn zero(mp: &ModuleParams) -> Self {
        ModuleElement { node: Arc::new(Node::Zero), mp: Arc::new(mp.clone()) }
    }

    pub fn value(&self, x: f64, k: i64) -> Complex64 {
        self.jet(x, k, 0).value()
    }

    pub fn dvalue(&self, x: f64, k: i64) -> Complex64 {
        self.jet(x, k, 1).slope()
    }

    /// Taylor coefficients at `x` up to `order`.
    pub fn jet(&self, x: f64, k: i64, order: usize) -> Jet {
        let mp = &*self.mp;
        let k = k.rem_euclid(mp.n);
        match &*self.node {
            Node::Zero => Jet::constant(cz(0.0), order),
            Node::Seed { weights, poly, x0, alpha, beta } => {
                let t = x - x0;
                // P(t + s) by Horner on jets
                let s = Jet::linear(cz(t), cz(1.0), order);
                let mut p = Jet::constant(cz(0.0), order);
                for c in poly.iter().rev() {
                    p = p.mul(&s).add(&Jet::constant(*c, order));
                }
                let quad = s.mul(&s).scale(cz(-alpha));
                let osc = Jet::linear(Complex64::new(0.0, beta * x), Complex64::new(0.0, *beta), order);
                p.mul(&quad.add(&osc).exp()).scale(weights[k as usize])
            }
            Node::Shift { child, dx, dk } => child.jet(x + dx, k + dk, order),
            Node::Mul { child, by } => multiplier_jet(mp, by, x, k, order).mul(&child.jet(x, k, order)),
            Node::Sum(terms) => terms
                .iter()
                .fold(Jet::constant(cz(0.0), order), |acc, (c, e)| acc.add(&e.jet(x, k, order).scale(*c))),
            Node::Deriv(child) => child.jet(x, k, order + 1).derivative(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.wrap(Node::Sum(vec![(c, self.clone())]))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.wrap(Node::Sum(vec![(cz(1.0), self.clone()), (cz(1.0), other.clone())]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.wrap(Node::Sum(vec![(cz(1.0), self.clone()), (cz(-1.0), other.clone())]))
    }

    pub fn derivative(&self) -> Self {
        self.wrap(Node::Deriv(self.clone()))
    }

    fn mul_by(&self, by: Multiplier) -> Self {
        self.wrap(Node::Mul { child: self.clone(), by })
    }

    fn shifted(&self, dx: f64, dk: i64) -> Self {
        self.wrap(Node::Shift { child: self.clone(), dx, dk })
    }
}

fn multiplier_jet(mp: &ModuleParams, by: &Multiplier, x: f64, k: i64, order: usize) -> Jet {
    let theta = mp.theta();
    match by {
        Multiplier::Weight { dx, dk } => {
            let u = mp.phase_arg(x + dx, k + dk);
            Jet::sin_linear(u - PI * theta, 2.0 * PI, order)
                .scale(cz(1.0 / mp.cos()))
                .add(&Jet::constant(cz(mp.params.mu_value()), order))
                .sqrt()
        }
        Multiplier::Phase { sign } => {
            let u = mp.phase_arg(x, k);
            Jet::linear(Complex64::new(0.0, sign * u), Complex64::new(0.0, sign * 2.0 * PI), order).exp()
        }
        Multiplier::InvR => {
            let u = mp.phase_arg(x, k);
            Jet::sin_linear(u + PI * theta, 2.0 * PI, order)
                .scale(cz(1.0 / mp.cos()))
                .add(&Jet::constant(cz(mp.params.mu_value()), order))
                .recip()
        }
        Multiplier::X { a } => Jet::linear(a * x, *a, order),
    }
}

/// Letters of the torus alphabet plus the designated inverse
/// `(mu + z L + zbar L*)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtFactor {
    Letter(Letter),
    InvR,
}

/// Linear combination of products of [`ExtFactor`]s.
pub type ExtPoly = Vec<(Complex64, Vec<ExtFactor>)>;

/// `phi . g` for a single factor.
pub fn act(phi: &ModuleElement, g: ExtFactor) -> Result<ModuleElement> {
    let eps = phi.mp.eps;
    Ok(match g {
        ExtFactor::Letter(Letter::W) => phi.shifted(-eps, -1).mul_by(Multiplier::Weight { dx: 0.0, dk: 0 }),
        // W(x + eps, k + 1) phi(x + eps, k + 1)
        ExtFactor::Letter(Letter::Ws) => phi.mul_by(Multiplier::Weight { dx: 0.0, dk: 0 }).shifted(eps, 1),
        ExtFactor::Letter(Letter::L) => phi.mul_by(Multiplier::Phase { sign: 1.0 }),
        ExtFactor::Letter(Letter::Ls) => phi.mul_by(Multiplier::Phase { sign: -1.0 }),
        ExtFactor::InvR => phi.mul_by(Multiplier::InvR),
        ExtFactor::Letter(l) => {
            return Err(Error::AlphabetMismatch(format!("the module carries the torus alphabet, not {l}")))
        }
    })
}

pub fn act_ext(phi: &ModuleElement, p: &ExtPoly) -> Result<ModuleElement> {
    let mut terms = Vec::with_capacity(p.len());
    for (c, word) in p {
        let mut e = phi.clone();
        for g in word {
            e = act(&e, *g)?;
        }
        terms.push((*c, e));
    }
    Ok(phi.wrap(Node::Sum(terms)))
}

/// Right action of a polynomial, `phi . (a b) = (phi . a) . b`.
pub fn act_poly<C: crate::coeff::Coefficient>(phi: &ModuleElement, p: &NcPoly<C>) -> Result<ModuleElement> {
    let ext: ExtPoly = p
        .terms()
        .map(|(w, c)| (c.to_complex(), w.letters().iter().map(|l| ExtFactor::Letter(*l)).collect()))
        .collect();
    act_ext(phi, &ext)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DerivationVariant {
    /// `d1 W = (i/2)(z L - zbar L*)(mu + z L + zbar L*)^{-1} W`
    Corrected,
    /// The same without the factor `1/2`; fails the Leibniz rule.
    Printed,
}

/// `d_j g` for a generator `g`, `j` in `{1, 2}`.
pub fn derivation(g: Letter, j: u8, params: &DeformParams, variant: DerivationVariant) -> Result<ExtPoly> {
    use ExtFactor::{InvR, Letter as Lt};
    let i = Complex64::i();
    let (z, zb) = (params.z, params.z.conj());
    let half = match variant {
        DerivationVariant::Corrected => 0.5,
        DerivationVariant::Printed => 1.0,
    };
    Ok(match (g, j) {
        (Letter::L, 1) => vec![(i, vec![Lt(Letter::L)])],
        (Letter::Ls, 1) => vec![(-i, vec![Lt(Letter::Ls)])],
        (Letter::L | Letter::Ls, 2) => vec![],
        (Letter::W, 2) => vec![(i, vec![Lt(Letter::W)])],
        (Letter::Ws, 2) => vec![(-i, vec![Lt(Letter::Ws)])],
        (Letter::W, 1) => vec![
            (i * z * half, vec![Lt(Letter::L), InvR, Lt(Letter::W)]),
            (-i * zb * half, vec![Lt(Letter::Ls), InvR, Lt(Letter::W)]),
        ],
        // the adjoint of the line above
        (Letter::Ws, 1) => vec![
            (-i * zb * half, vec![Lt(Letter::Ws), InvR, Lt(Letter::Ls)]),
            (i * z * half, vec![Lt(Letter::Ws), InvR, Lt(Letter::L)]),
        ],
        _ => return Err(Error::Domain(format!("no derivation d{j} of {g}"))),
    })
}

/// `nabla_1 = (1/2pi) d/dx`, `nabla_2 = (i/eps) x`.
pub fn connection(phi: &ModuleElement, j: u8) -> Result<ModuleElement> {
    match j {
        1 => Ok(phi.derivative().scale(cz(1.0 / (2.0 * PI)))),
        2 => Ok(phi.mul_by(Multiplier::X { a: Complex64::new(0.0, 1.0 / phi.mp.eps) })),
        _ => Err(Error::Domain(format!("connection index must be 1 or 2, got {j}"))),
    }
}

/// Uniform `x` in `[-3, 3]` and uniform `k`.
pub fn sample_points(n: i64, count: usize, seed: u64) -> Vec<(f64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (rng.gen_range(-3.0..=3.0), rng.gen_range(0..n))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleResidual {
    pub x: f64,
    pub k: i64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleCheck {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip)]
    pub samples: Vec<SampleResidual>,
}

fn check(name: String, f: &ModuleElement, points: &[(f64, i64)], tol: f64) -> ModuleCheck {
    let samples: Vec<SampleResidual> = points
        .iter()
        .map(|&(x, k)| SampleResidual { x, k, residual: f.value(x, k).norm() })
        .collect();
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    ModuleCheck { name, max_residual, tolerance: tol, pass: max_residual < tol, samples }
}

fn relation_label(rule: &str) -> &str {
    match rule {
        "S1" => "W L = q L W",
        "S2" => "W L* = qbar L* W",
        "S3" => "W* L* = q L* W*",
        "S4" => "W* L = qbar L W*",
        "S5" => "L L* = I",
        "S6" => "L* L = I",
        "S7" => "W W* = z L + zbar L* + mu",
        "S8" => "W* W = -zbar L - z L* + mu",
        other => other,
    }
}

/// `phi . r` for each relation `r = lhs - rhs` of the reduction system.
pub fn relation_checks(phi: &ModuleElement, points: &[(f64, i64)]) -> Result<Vec<ModuleCheck>> {
    let d = FloatDomain::new(&phi.mp.params);
    let sys = ReductionSystem::new(d.clone());
    sys.rules()
        .iter()
        .map(|r| {
            let rel = r.relation(&d.one());
            let out = act_poly(phi, &rel)?;
            Ok(check(relation_label(&r.name).to_string(), &out, points, 1e-12))
        })
        .collect()
}

/// `|nabla_j(phi a) - (nabla_j phi) a - phi (d_j a)|` over the sample points.
pub fn leibniz_residual(phi: &ModuleElement, a: Letter, j: u8, variant: DerivationVariant, points: &[(f64, i64)]) -> Result<ModuleCheck> {
    let g = ExtFactor::Letter(a);
    let lhs = connection(&act(phi, g)?, j)?;
    let rhs = act(&connection(phi, j)?, g)?.add(&act_ext(phi, &derivation(a, j, &phi.mp.params, variant)?)?);
    Ok(check(format!("nabla_{j}({a})"), &lhs.sub(&rhs), points, 1e-10))
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub m: i64,
    pub n: i64,
    pub eps: f64,
    pub expected: [f64; 2],
    pub constant: [f64; 2],
    pub max_deviation: f64,
    pub points_used: usize,
    pub pass: bool,
}

/// `([nabla_1, nabla_2] phi)/phi` at the sample points with `|phi| > 0.1`.
pub fn curvature_check(phi: &ModuleElement, points: &[(f64, i64)]) -> Result<CurvatureReport> {
    let c12 = connection(&connection(phi, 2)?, 1)?;
    let c21 = connection(&connection(phi, 1)?, 2)?;
    let comm = c12.sub(&c21);
    let ratios: Vec<Complex64> = points
        .iter()
        .filter_map(|&(x, k)| {
            let v = phi.value(x, k);
            (v.norm() > 0.1).then(|| comm.value(x, k) / v)
        })
        .collect();
    if ratios.is_empty() {
        return Err(Error::Domain("no sample point has |phi| > 0.1".into()));
    }
    let constant = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let expected = phi.mp.curvature();
    let max_deviation = ratios.iter().map(|r| (r - expected).norm()).fold(0.0, f64::max);
    Ok(CurvatureReport {
        m: phi.mp.m,
        n: phi.mp.n,
        eps: phi.mp.eps,
        expected: [expected.re, expected.im],
        constant: [constant.re, constant.im],
        max_deviation,
        points_used: ratios.len(),
        pass: max_deviation < 1e-12,
    })
}

/// Largest gap between the analytic derivative and a central difference.
pub fn finite_difference_gap(phi: &ModuleElement, points: &[(f64, i64)], h: f64) -> f64 {
    points
        .iter()
        .map(|&(x, k)| {
            let fd = (phi.value(x + h, k) - phi.value(x - h, k)) / (2.0 * h);
            (fd - phi.dvalue(x, k)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;

    fn mp() -> ModuleParams {
        ModuleParams::new(1, 2, derive_params(2, (1, 5)).unwrap()).unwrap()
    }

    #[test]
    fn eps_and_curvature_constant() {
        let m = mp();
        assert!((m.eps - 0.7).abs() < 1e-15);
        assert!((m.curvature().im - 1.0 / (1.4 * PI)).abs() < 1e-15);
        let m0 = ModuleParams::new(0, 1, derive_params(2, (1, 5)).unwrap()).unwrap();
        assert!((m0.eps - 0.2).abs() < 1e-15);
    }

    #[test]
    fn lambda_then_adjoint_is_identity() {
        let phi = ModuleElement::gaussian(&mp());
        let back = act(&act(&phi, ExtFactor::Letter(Letter::L)).unwrap(), ExtFactor::Letter(Letter::Ls)).unwrap();
        for (x, k) in sample_points(2, 50, 1) {
            assert!((back.value(x, k) - phi.value(x, k)).norm() < 1e-15);
        }
    }

    #[test]
    fn relations_annihilate() {
        let phi = ModuleElement::random_seed(&mp(), &mut ChaCha8Rng::seed_from_u64(3));
        for c in relation_checks(&phi, &sample_points(2, 200, 7)).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn leibniz_all_pairs() {
        let phi = ModuleElement::random_seed(&mp(), &mut ChaCha8Rng::seed_from_u64(5));
        let pts = sample_points(2, 100, 9);
        for a in Letter::TORUS {
            for j in [1, 2] {
                let r = leibniz_residual(&phi, a, j, DerivationVariant::Corrected, &pts).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
        let bad = leibniz_residual(&phi, Letter::W, 1, DerivationVariant::Printed, &pts).unwrap();
        assert!(bad.max_residual > 1e-2);
    }

    #[test]
    fn curvature_is_constant() {
        let phi = ModuleElement::gaussian(&mp());
        let r = curvature_check(&phi, &sample_points(2, 200, 11)).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let m = mp();
        let phi = ModuleElement::random_seed(&m, &mut ChaCha8Rng::seed_from_u64(13));
        let w = act(&phi, ExtFactor::Letter(Letter::W)).unwrap();
        let pts = sample_points(2, 100, 17);
        assert!(finite_difference_gap(&phi, &pts, 1e-6) < 1e-8);
        assert!(finite_difference_gap(&w, &pts, 1e-6) < 1e-8);
    }

    #[test]
    fn gaussian_connection() {
        let phi = ModuleElement::gaussian(&mp());
        let n1 = connection(&phi, 1).unwrap();
        for x in [-1.0, 0.3, 2.0] {
            let expect = -2.0 * x / (2.0 * PI) * (-x * x as f64).exp();
            assert!((n1.value(x, 0) - cz(expect)).norm() < 1e-15);
        }
    }
}
