//! Noncommutative polynomials: finite linear combinations of words.

use std::collections::BTreeMap;

use crate::coeff::{Coefficient, Domain};
use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// A polynomial in canonical form: a map from [`Word`] to a nonzero coefficient,
/// ordered by the word storage order.
#[derive(Clone, PartialEq, Debug)]
pub struct NcPoly<C: Coefficient> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coefficient> Default for NcPoly<C> {
    fn default() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coefficient> NcPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(word: Word, coeff: C) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn constant(coeff: C) -> Self {
        Self::monomial(Word::unit(), coeff)
    }

    pub fn letter<D: Domain<Coeff = C>>(domain: &D, l: Letter) -> Self {
        Self::monomial(Word::letter(l), domain.one())
    }

    pub fn word<D: Domain<Coeff = C>>(domain: &D, w: Word) -> Self {
        Self::monomial(w, domain.one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, C)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Adds `coeff * word` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.mul(s));
        }
        out
    }

    /// Concatenation product without alphabet checks; see [`poly_mul`].
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, n: usize, one: &Self) -> Self {
        (0..n).fold(one.clone(), |acc, _| acc.mul(self))
    }

    /// Conjugate coefficients, reverse and star words.
    pub fn adjoint(&self) -> Self {
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.adjoint(), c.conj()))
                .collect(),
        }
    }

    /// The common alphabet of all words; `None` for constants.
    pub fn alphabet(&self) -> Result<Option<Alphabet>> {
        let mut found = None;
        for w in self.terms.keys() {
            let a = w.alphabet().map_err(|(a, b)| {
                Error::AlphabetMismatch(format!("word {w} mixes {a:?} and {b:?} letters"))
            })?;
            match (found, a) {
                (None, Some(a)) => found = Some(a),
                (Some(f), Some(a)) if f != a => {
                    return Err(Error::AlphabetMismatch(format!(
                        "polynomial mixes {f:?} and {a:?} words"
                    )))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// Largest coefficient modulus of `self - other` under the complex embedding.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other)
            .terms
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }

    pub fn map_coeffs<C2: Coefficient>(&self, f: impl Fn(&C) -> C2) -> NcPoly<C2> {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }
}

fn check_alphabets<C: Coefficient>(a: &NcPoly<C>, b: &NcPoly<C>) -> Result<()> {
    match (a.alphabet()?, b.alphabet()?) {
        (Some(x), Some(y)) if x != y => Err(Error::AlphabetMismatch(format!(
            "cannot multiply {x:?} and {y:?} polynomials"
        ))),
        _ => Ok(()),
    }
}

/// Free-algebra product with alphabet and coefficient-field checks.
pub fn poly_mul<C: Coefficient>(a: &NcPoly<C>, b: &NcPoly<C>) -> Result<NcPoly<C>> {
    check_alphabets(a, b)?;
    check_fields(a, b)?;
    Ok(a.mul(b))
}

/// Adjoint: an involutive, conjugate-linear anti-automorphism.
pub fn poly_adjoint<C: Coefficient>(a: &NcPoly<C>) -> NcPoly<C> {
    a.adjoint()
}

fn check_fields<C: Coefficient>(a: &NcPoly<C>, b: &NcPoly<C>) -> Result<()> {
    match (a.terms().next(), b.terms().next()) {
        (Some((_, x)), Some((_, y))) if !x.same_domain(y) => Err(Error::DomainMismatch(format!(
            "coefficients {x:?} and {y:?} live in different domains"
        ))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ExactDomain, FloatDomain};
    use crate::params::derive_params;
    use crate::word::Letter::*;

    fn domain() -> ExactDomain {
        ExactDomain::new(&derive_params(2, (1, 5)).unwrap()).unwrap()
    }

    #[test]
    fn concatenation_and_unit() {
        let d = domain();
        let w = NcPoly::letter(&d, W);
        let l = NcPoly::letter(&d, L);
        let wl = poly_mul(&w, &l).unwrap();
        assert_eq!(wl, NcPoly::word(&d, Word::from([W, L])));
        let one = NcPoly::constant(d.one());
        assert_eq!(poly_mul(&one, &wl).unwrap(), wl);
        assert_eq!(poly_mul(&wl, &one).unwrap(), wl);
    }

    #[test]
    fn distributivity() {
        let d = domain();
        let lhs = NcPoly::letter(&d, W).add(&NcPoly::letter(&d, L));
        let got = poly_mul(&lhs, &NcPoly::letter(&d, Ws)).unwrap();
        let expect = NcPoly::word(&d, Word::from([W, Ws])).add(&NcPoly::word(&d, Word::from([L, Ws])));
        assert_eq!(got, expect);
    }

    #[test]
    fn adjoint_of_monomial() {
        let d = domain();
        let p = NcPoly::monomial(Word::from([L, W]), d.z());
        let expect = NcPoly::monomial(Word::from([Ws, Ls]), d.zbar());
        assert_eq!(poly_adjoint(&p), expect);
        assert_eq!(poly_adjoint(&NcPoly::letter(&d, W)), NcPoly::letter(&d, Ws));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let d = domain();
        let p = NcPoly::letter(&d, W);
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).len(), 0);
    }

    #[test]
    fn mixed_alphabets_rejected() {
        let d = FloatDomain::new(&derive_params(2, 0.2).unwrap());
        let a = NcPoly::letter(&d, W);
        let b = NcPoly::letter(&d, X);
        assert!(matches!(poly_mul(&a, &b), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn mixed_fields_rejected() {
        let d1 = domain();
        let d2 = ExactDomain::new(&derive_params(3, (1, 3)).unwrap()).unwrap();
        let a = NcPoly::letter(&d1, W);
        let b = NcPoly::letter(&d2, W);
        assert!(matches!(poly_mul(&a, &b), Err(Error::DomainMismatch(_))));
    }
}
