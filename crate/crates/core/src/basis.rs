//! The basis `T_m = q^{m1 m2/2} L^{m1} W^{m2}`, `S_n = q^{-n1 n2/2} L^{n1} W*^{n2}`
//! of the quotient algebra, its product law, and the Casimir element.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Coefficient, Domain, DomainKind};
use crate::error::{Error, Result};
use crate::poly::NcPoly;
use crate::rewrite::ReductionSystem;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BasisKind {
    T,
    S,
}

/// `T` indices have `m2 >= 0`, `S` indices `m2 >= 1`; pure `L`-powers are `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasisIndex {
    pub kind: BasisKind,
    pub m1: i64,
    pub m2: i64,
}

impl BasisIndex {
    pub fn t(m1: i64, m2: i64) -> Self {
        assert!(m2 >= 0, "T indices need m2 >= 0");
        BasisIndex { kind: BasisKind::T, m1, m2 }
    }

    pub fn s(m1: i64, m2: i64) -> Self {
        assert!(m2 >= 1, "S indices need m2 >= 1");
        BasisIndex { kind: BasisKind::S, m1, m2 }
    }

    /// The underlying word `L^{m1} W^{m2}` or `L^{m1} W*^{m2}`.
    pub fn word(&self) -> Word {
        let w = match self.kind {
            BasisKind::T => Letter::W,
            BasisKind::S => Letter::Ws,
        };
        Word::lambda_power(self.m1).concat(&Word::power(w, self.m2 as usize))
    }

    /// Half-phase exponent `e` with `T_m = q^{e/2} L^{m1} W^{m2}` (and likewise for `S`).
    pub fn phase_exponent(&self) -> i64 {
        match self.kind {
            BasisKind::T => self.m1 * self.m2,
            BasisKind::S => -self.m1 * self.m2,
        }
    }

    /// `T_m* = S_(-m1, m2)` and `S_n* = T_(-n1, n2)`; pure `L`-powers map to
    /// `T_(-m1, 0)`.
    pub fn adjoint(&self) -> Self {
        match (self.kind, self.m2) {
            (_, 0) => BasisIndex::t(-self.m1, 0),
            (BasisKind::T, m2) => BasisIndex::s(-self.m1, m2),
            (BasisKind::S, m2) => BasisIndex::t(-self.m1, m2),
        }
    }

    /// All indices of one kind with `|m1| <= r` and `m2 <= r`.
    pub fn grid(kind: BasisKind, r: i64) -> Vec<BasisIndex> {
        let lo = if kind == BasisKind::T { 0 } else { 1 };
        let mut out = Vec::new();
        for m1 in -r..=r {
            for m2 in lo..=r {
                out.push(BasisIndex { kind, m1, m2 });
            }
        }
        out
    }
}

/// `m x n = m1 n2 - n1 m2`.
pub fn cross(m: (i64, i64), n: (i64, i64)) -> i64 {
    m.0 * n.1 - n.0 * m.1
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector<C: Coefficient> {
    coords: BTreeMap<BasisIndex, C>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisEntry {
    pub kind: BasisKind,
    pub m1: i64,
    pub m2: i64,
    pub re: f64,
    pub im: f64,
}

impl<C: Coefficient> BasisVector<C> {
    pub fn zero() -> Self {
        BasisVector { coords: BTreeMap::new() }
    }

    pub fn add_term(&mut self, idx: BasisIndex, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coords.remove(&idx) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.coords.insert(idx, sum);
        }
    }

    pub fn single(idx: BasisIndex, c: C) -> Self {
        let mut v = Self::zero();
        v.add_term(idx, c);
        v
    }

    pub fn coeff(&self, idx: &BasisIndex) -> Option<&C> {
        self.coords.get(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &C)> {
        self.coords.iter()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.coords {
            out.add_term(*i, c.neg());
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.values().map(|c| c.to_complex().norm()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> Vec<BasisEntry> {
        self.coords
            .iter()
            .map(|(i, c)| {
                let z = c.to_complex();
                BasisEntry { kind: i.kind, m1: i.m1, m2: i.m2, re: z.re, im: z.im }
            })
            .collect()
    }

    /// Back to a polynomial in normal form.
    pub fn to_poly<D: Domain<Coeff = C>>(&self, domain: &D) -> NcPoly<C> {
        NcPoly::from_terms(self.coords.iter().map(|(i, c)| {
            (i.word(), c.mul(&domain.half_phase_pow(i.phase_exponent())))
        }))
    }
}

/// Reads an irreducible word as `L^{k} W^{j}` or `L^{k} W*^{j}`.
fn irreducible_index(w: &Word) -> Option<(BasisIndex, i64)> {
    let mut k = 0i64;
    let mut j = 0i64;
    let mut star = None;
    let mut in_w = false;
    for l in w.letters() {
        match l {
            Letter::L | Letter::Ls if !in_w => {
                let step = if *l == Letter::L { 1 } else { -1 };
                if k != 0 && k.signum() != step {
                    return None;
                }
                k += step;
            }
            Letter::W | Letter::Ws => {
                in_w = true;
                let s = *l == Letter::Ws;
                if star.is_some_and(|x| x != s) {
                    return None;
                }
                star = Some(s);
                j += 1;
            }
            _ => return None,
        }
    }
    Some(if star == Some(true) {
        (BasisIndex::s(k, j), -k * j)
    } else {
        (BasisIndex::t(k, j), k * j)
    })
}

/// Coordinates of `NF(p)` in the `T/S` basis.
pub fn to_basis<D: Domain>(p: &NcPoly<D::Coeff>, sys: &ReductionSystem<D>) -> Result<BasisVector<D::Coeff>> {
    let nf = sys.normal_form(p)?;
    let d = sys.domain();
    let mut out = BasisVector::zero();
    for (w, c) in nf.terms() {
        let (idx, e) = irreducible_index(w).ok_or_else(|| {
            Error::Domain(format!("normal form produced a non-basis word {w}"))
        })?;
        // L^k W^j = q^{-kj/2} T_(k,j),  L^k W*^j = q^{kj/2} S_(k,j)
        out.add_term(idx, c.mul(&d.half_phase_pow(-e)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProductLaw<C> {
    Closed { phase: C, index: BasisIndex },
    /// Mixed `T.S` products; multiply polynomials and call [`to_basis`].
    NotClosed,
}

/// `T_m T_n = q^{-m x n/2} T_{m+n}` and `S_m S_n = q^{m x n/2} S_{m+n}`.
pub fn basis_product<D: Domain>(a: &BasisIndex, b: &BasisIndex, domain: &D) -> ProductLaw<D::Coeff> {
    let c = cross((a.m1, a.m2), (b.m1, b.m2));
    let (m1, m2) = (a.m1 + b.m1, a.m2 + b.m2);
    let as_t = |x: &BasisIndex| x.kind == BasisKind::T;
    if as_t(a) && as_t(b) {
        ProductLaw::Closed { phase: domain.half_phase_pow(-c), index: BasisIndex::t(m1, m2) }
    } else if !as_t(a) && !as_t(b) {
        let index = if m2 == 0 { BasisIndex::t(m1, 0) } else { BasisIndex::s(m1, m2) };
        ProductLaw::Closed { phase: domain.half_phase_pow(c), index }
    } else {
        ProductLaw::NotClosed
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductLawReport {
    pub range: i64,
    pub pairs_checked: usize,
    pub exact: bool,
    pub max_discrepancy: f64,
    /// Pairs whose discrepancy is nonzero (exact) or above tolerance (float).
    pub failures: usize,
    pub pass: bool,
}

/// Compares the closed product law with rewriting of the concatenated words
/// for all `T.T` and `S.S` pairs in the index box of radius `range`.
pub fn product_law_check<D: Domain>(sys: &ReductionSystem<D>, range: i64) -> Result<ProductLawReport> {
    let d = sys.domain();
    let exact = d.kind() == DomainKind::Exact;
    let mut pairs = Vec::new();
    for kind in [BasisKind::T, BasisKind::S] {
        let g = BasisIndex::grid(kind, range);
        for a in &g {
            for b in &g {
                pairs.push((*a, *b));
            }
        }
    }
    let results: Vec<f64> = pairs
        .par_iter()
        .map(|(a, b)| -> Result<f64> {
            let pa = BasisVector::single(*a, d.one()).to_poly(d);
            let pb = BasisVector::single(*b, d.one()).to_poly(d);
            let got = to_basis(&pa.mul(&pb), sys)?;
            let ProductLaw::Closed { phase, index } = basis_product(a, b, d) else {
                return Err(Error::Domain("like-kind products are closed".into()));
            };
            let diff = got.sub(&BasisVector::single(index, phase));
            let m = diff.max_abs();
            Ok(if exact && !diff.is_zero() { m.max(f64::MIN_POSITIVE) } else { m })
        })
        .collect::<Result<_>>()?;
    let tol = if exact { 0.0 } else { d.tolerance() };
    let failures = results.iter().filter(|x| **x > tol).count();
    Ok(ProductLawReport {
        range,
        pairs_checked: pairs.len(),
        exact,
        max_discrepancy: results.iter().cloned().fold(0.0, f64::max),
        failures,
        pass: failures == 0,
    })
}

/// Checks `c(a,b) c(a+b,c) = c(b,c) c(a,b+c)` for `c(m,n) = q^{-m x n/2}` over
/// all index triples in `[-r, r]^2`, comparing coefficients in the domain.
pub fn cocycle_check<D: Domain>(domain: &D, r: i64) -> bool {
    let pts: Vec<(i64, i64)> = (-r..=r).flat_map(|a| (-r..=r).map(move |b| (a, b))).collect();
    // phases repeat with period dividing the order of q^{1/2}; cache by exponent
    let span = 2 * (2 * r) * (2 * r) * 3;
    let table: BTreeMap<i64, D::Coeff> =
        (-span..=span).map(|e| (e, domain.half_phase_pow(e))).collect();
    let phase = |m: (i64, i64), n: (i64, i64)| &table[&-cross(m, n)];
    let add = |m: (i64, i64), n: (i64, i64)| (m.0 + n.0, m.1 + n.1);
    pts.par_iter().all(|&a| {
        pts.iter().all(|&b| {
            pts.iter().all(|&c| {
                let lhs = phase(a, b).mul(phase(add(a, b), c));
                let rhs = phase(b, c).mul(phase(a, add(b, c)));
                domain.approx_eq(&lhs, &rhs)
            })
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirVariant {
    /// `1/(4 hbar^2)` in front of the squared commutator.
    Corrected,
    /// The `1/(4 hbar^4)` normalization; it does not reduce to 1.
    Printed,
}

fn w_combinations<D: Domain>(d: &D) -> (NcPoly<D::Coeff>, NcPoly<D::Coeff>) {
    let ww = NcPoly::word(d, Word::from([Letter::W, Letter::Ws]));
    let wsw = NcPoly::word(d, Word::from([Letter::Ws, Letter::W]));
    let two_mu = NcPoly::constant(d.mu().add(&d.mu()));
    (ww.add(&wsw).sub(&two_mu), ww.sub(&wsw))
}

fn inv_hbar<D: Domain>(d: &D) -> Result<D::Coeff> {
    d.inv(&d.hbar())
        .ok_or_else(|| Error::Domain("hbar vanishes, so the Casimir normalization is undefined".into()))
}

/// `1/4 (WW* + W*W - 2 mu)^2 + c (WW* - W*W)^2` with `c = 1/(4 hbar^2)` or
/// `1/(4 hbar^4)`.
pub fn casimir_expression<D: Domain>(d: &D, variant: CasimirVariant) -> Result<NcPoly<D::Coeff>> {
    let (sym, comm) = w_combinations(d);
    let ih = inv_hbar(d)?;
    let ih2 = ih.mul(&ih);
    let c = match variant {
        CasimirVariant::Corrected => ih2,
        CasimirVariant::Printed => ih2.mul(&ih2),
    };
    let quarter = d.from_ratio(1, 4);
    Ok(sym.mul(&sym).scale(&quarter).add(&comm.mul(&comm).scale(&quarter.mul(&c))))
}

/// `(1/(2 hbar)) (WW* - W*W) + (i/2)(WW* + W*W - 2 mu)`, which equals `L`.
pub fn lambda_reconstruction<D: Domain>(d: &D) -> Result<NcPoly<D::Coeff>> {
    let (sym, comm) = w_combinations(d);
    let half = d.from_ratio(1, 2);
    Ok(comm
        .scale(&half.mul(&inv_hbar(d)?))
        .add(&sym.scale(&half.mul(&d.imag_unit()))))
}

pub fn casimir_reduce<D: Domain>(sys: &ReductionSystem<D>, variant: CasimirVariant) -> Result<NcPoly<D::Coeff>> {
    sys.normal_form(&casimir_expression(sys.domain(), variant)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ExactDomain, FloatDomain};
    use crate::params::derive_params;
    use crate::parse::parse_expression;

    fn sys(mu: i64, theta: (i64, i64)) -> ReductionSystem<ExactDomain> {
        ReductionSystem::new(ExactDomain::new(&derive_params(mu, theta).unwrap()).unwrap())
    }

    #[test]
    fn to_basis_examples() {
        let s = sys(2, (1, 5));
        let d = s.domain();
        let v = to_basis(&parse_expression("L W", d).unwrap(), &s).unwrap();
        assert_eq!(v, BasisVector::single(BasisIndex::t(1, 1), d.half_phase_pow(-1)));
        let v = to_basis(&parse_expression("1", d).unwrap(), &s).unwrap();
        assert_eq!(v, BasisVector::single(BasisIndex::t(0, 0), d.one()));
        let v = to_basis(&parse_expression("W W*", d).unwrap(), &s).unwrap();
        let mut expect = BasisVector::single(BasisIndex::t(1, 0), d.z());
        expect.add_term(BasisIndex::t(-1, 0), d.zbar());
        expect.add_term(BasisIndex::t(0, 0), d.mu());
        assert_eq!(v, expect);
    }

    #[test]
    fn product_law_examples() {
        let d = ExactDomain::new(&derive_params(2, (1, 5)).unwrap()).unwrap();
        assert_eq!(
            basis_product(&BasisIndex::t(1, 0), &BasisIndex::t(0, 1), &d),
            ProductLaw::Closed { phase: d.half_phase_pow(-1), index: BasisIndex::t(1, 1) }
        );
        assert_eq!(
            basis_product(&BasisIndex::t(3, 2), &BasisIndex::t(0, 0), &d),
            ProductLaw::Closed { phase: d.one(), index: BasisIndex::t(3, 2) }
        );
        assert_eq!(
            basis_product(&BasisIndex::s(0, 1), &BasisIndex::s(1, 1), &d),
            ProductLaw::Closed { phase: d.half_phase_pow(-1), index: BasisIndex::s(1, 2) }
        );
        assert_eq!(basis_product(&BasisIndex::t(0, 1), &BasisIndex::s(0, 1), &d), ProductLaw::NotClosed);
    }

    #[test]
    fn product_law_small_ranges() {
        let s = sys(2, (1, 5));
        let r0 = product_law_check(&s, 0).unwrap();
        assert!(r0.pass);
        let r2 = product_law_check(&s, 2).unwrap();
        assert!(r2.pass && r2.max_discrepancy == 0.0, "{r2:?}");
        let f = ReductionSystem::new(FloatDomain::new(&derive_params(2.0, 0.2).unwrap()));
        let rf = product_law_check(&f, 3).unwrap();
        assert!(rf.pass && rf.max_discrepancy < 1e-12, "{rf:?}");
    }

    #[test]
    fn casimir_and_reconstruction() {
        for (mu, th) in [(2, (1, 5)), (3, (1, 3))] {
            let s = sys(mu, th);
            let d = s.domain();
            assert_eq!(casimir_reduce(&s, CasimirVariant::Corrected).unwrap(), NcPoly::constant(d.one()));
            assert_ne!(casimir_reduce(&s, CasimirVariant::Printed).unwrap(), NcPoly::constant(d.one()));
            let l = s.normal_form(&lambda_reconstruction(d).unwrap()).unwrap();
            assert_eq!(l, NcPoly::letter(d, Letter::L));
        }
    }

    #[test]
    fn adjoint_swaps_kinds() {
        let s = sys(2, (1, 5));
        let d = s.domain();
        for idx in BasisIndex::grid(BasisKind::T, 2).into_iter().chain(BasisIndex::grid(BasisKind::S, 2)) {
            let p = BasisVector::single(idx, d.one()).to_poly(d);
            let v = to_basis(&p.adjoint(), &s).unwrap();
            assert_eq!(v, BasisVector::single(idx.adjoint(), d.one()), "{idx:?}");
        }
    }

    #[test]
    fn cocycle_small() {
        let d = ExactDomain::new(&derive_params(2, (1, 5)).unwrap()).unwrap();
        assert!(cocycle_check(&d, 1));
    }
}
