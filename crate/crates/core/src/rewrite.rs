//! The reduction system of the deformed torus, normal forms, and overlap
//! checking.
//!
//! Rules are applied at the leftmost reducible position, trying rules in their
//! declared order. Once every ambiguity resolves the final normal form does not
//! depend on that choice; fixing it just keeps intermediate states reproducible.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Coefficient, Domain, DomainKind};
use crate::error::{Error, Result};
use crate::params::ParamSummary;
use crate::parse::{format_poly, Spell};
use crate::poly::NcPoly;
use crate::word::{Alphabet, Letter, Word};

pub const DEFAULT_STEP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WordOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// The partial order used for termination: shorter words are smaller; words of
/// equal length compare only when each letter occurs equally often, and then
/// lexicographically in `L < L* < W < W*`.
pub fn order_compare(a: &Word, b: &Word) -> WordOrder {
    match a.len().cmp(&b.len()) {
        Ordering::Less => return WordOrder::Less,
        Ordering::Greater => return WordOrder::Greater,
        Ordering::Equal => {}
    }
    if a.letter_counts() != b.letter_counts() {
        return WordOrder::Incomparable;
    }
    match a.letters().cmp(b.letters()) {
        Ordering::Less => WordOrder::Less,
        Ordering::Equal => WordOrder::Equal,
        Ordering::Greater => WordOrder::Greater,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule<C: Coefficient> {
    pub name: String,
    pub lhs: Word,
    pub rhs: NcPoly<C>,
}

impl<C: Coefficient> RewriteRule<C> {
    pub fn new(name: impl Into<String>, lhs: Word, rhs: NcPoly<C>) -> Self {
        RewriteRule {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    /// `lhs - rhs`, an element of the ideal.
    pub fn relation(&self, one: &C) -> NcPoly<C> {
        NcPoly::monomial(self.lhs.clone(), one.clone()).sub(&self.rhs)
    }

    fn compatible(&self) -> bool {
        self.lhs.len() >= 2
            && self
                .rhs
                .terms()
                .all(|(w, _)| order_compare(w, &self.lhs) == WordOrder::Less)
    }
}

#[derive(Debug, Clone)]
pub struct ReductionSystem<D: Domain> {
    domain: D,
    rules: Vec<RewriteRule<D::Coeff>>,
    step_cap: usize,
}

impl<D: Domain> ReductionSystem<D> {
    /// The eight rules `S1..S8` for the deformed torus.
    pub fn new(domain: D) -> Self {
        use Letter::*;
        let d = &domain;
        let mono = |w: &[Letter], c: D::Coeff| NcPoly::monomial(Word::from(w), c);
        let rules = vec![
            RewriteRule::new("S1", Word::from([W, L]), mono(&[L, W], d.q())),
            RewriteRule::new("S2", Word::from([W, Ls]), mono(&[Ls, W], d.qbar())),
            RewriteRule::new("S3", Word::from([Ws, Ls]), mono(&[Ls, Ws], d.q())),
            RewriteRule::new("S4", Word::from([Ws, L]), mono(&[L, Ws], d.qbar())),
            RewriteRule::new("S5", Word::from([L, Ls]), NcPoly::constant(d.one())),
            RewriteRule::new("S6", Word::from([Ls, L]), NcPoly::constant(d.one())),
            RewriteRule::new(
                "S7",
                Word::from([W, Ws]),
                mono(&[L], d.z())
                    .add(&mono(&[Ls], d.zbar()))
                    .add(&NcPoly::constant(d.mu())),
            ),
            RewriteRule::new(
                "S8",
                Word::from([Ws, W]),
                mono(&[L], d.zbar().neg())
                    .add(&mono(&[Ls], d.z().neg()))
                    .add(&NcPoly::constant(d.mu())),
            ),
        ];
        Self::from_rules(domain, rules).expect("S1..S8 are compatible with the word order")
    }

    /// A custom system; every rule must be compatible with [`order_compare`].
    pub fn from_rules(domain: D, rules: Vec<RewriteRule<D::Coeff>>) -> Result<Self> {
        if let Some(bad) = rules.iter().find(|r| !r.compatible()) {
            return Err(Error::IncompatibleRule(format!("{} ({})", bad.name, bad.lhs)));
        }
        Ok(ReductionSystem {
            domain,
            rules,
            step_cap: DEFAULT_STEP_CAP,
        })
    }

    pub fn with_step_cap(mut self, cap: usize) -> Self {
        self.step_cap = cap;
        self
    }

    /// The same system with one right-hand side replaced; used to check that
    /// broken systems are caught.
    pub fn with_rule_rhs(&self, name: &str, rhs: NcPoly<D::Coeff>) -> Result<Self> {
        let mut rules = self.rules.clone();
        let rule = rules
            .iter_mut()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Domain(format!("no rule named {name}")))?;
        rule.rhs = rhs;
        Ok(Self::from_rules(self.domain.clone(), rules)?.with_step_cap(self.step_cap))
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn rules(&self) -> &[RewriteRule<D::Coeff>] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRule<D::Coeff>> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn step_cap(&self) -> usize {
        self.step_cap
    }

    /// Leftmost position carrying some left-hand side, with the first rule
    /// that matches there.
    fn redex(&self, w: &Word) -> Option<(usize, &RewriteRule<D::Coeff>)> {
        let letters = w.letters();
        for pos in 0..letters.len() {
            for rule in &self.rules {
                let lhs = rule.lhs.letters();
                if letters[pos..].starts_with(lhs) {
                    return Some((pos, rule));
                }
            }
        }
        None
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        self.redex(w).is_none()
    }

    pub fn normal_form(&self, p: &NcPoly<D::Coeff>) -> Result<NcPoly<D::Coeff>> {
        if p.alphabet()? == Some(Alphabet::Surface) {
            return Err(Error::AlphabetMismatch(
                "the reduction system acts on the torus alphabet only".into(),
            ));
        }
        // Every rewrite replaces a word by storage-smaller words, so popping the
        // largest pending word sees all of its contributions merged.
        let mut pending: BTreeMap<Word, D::Coeff> =
            p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut done = NcPoly::zero();
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            let Some((pos, rule)) = self.redex(&w) else {
                done.add_term(w, c);
                continue;
            };
            steps += 1;
            if steps > self.step_cap {
                return Err(Error::StepCapExceeded(self.step_cap));
            }
            let prefix = w.slice(0..pos);
            let suffix = w.slice(pos + rule.lhs.len()..w.len());
            for (rw, rc) in rule.rhs.terms() {
                let word = prefix.concat(rw).concat(&suffix);
                let coeff = c.mul(rc);
                accumulate(&mut pending, word, coeff);
            }
        }
        Ok(done)
    }

    /// All overlap and inclusion ambiguities between left-hand sides.
    pub fn enumerate_ambiguities(&self) -> Vec<Ambiguity> {
        let mut out = Vec::new();
        for (ia, a) in self.rules.iter().enumerate() {
            for (ib, b) in self.rules.iter().enumerate() {
                let (la, lb) = (a.lhs.letters(), b.lhs.letters());
                for k in 1..la.len().min(lb.len()) {
                    if la[la.len() - k..] == lb[..k] {
                        out.push(Ambiguity {
                            rule_a: ia,
                            rule_b: ib,
                            overlap: a.lhs.concat(&b.lhs.slice(k..lb.len())),
                            offset_b: la.len() - k,
                        });
                    }
                }
                if ia != ib && lb.len() < la.len() {
                    for pos in 0..=la.len() - lb.len() {
                        if la[pos..].starts_with(lb) {
                            out.push(Ambiguity {
                                rule_a: ia,
                                rule_b: ib,
                                overlap: a.lhs.clone(),
                                offset_b: pos,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// The two one-step reducts of an ambiguity: rule A at the start, rule B
    /// at its offset.
    pub fn reducts(&self, amb: &Ambiguity) -> (NcPoly<D::Coeff>, NcPoly<D::Coeff>) {
        let w = &amb.overlap;
        let a = &self.rules[amb.rule_a];
        let b = &self.rules[amb.rule_b];
        let word = |x: Word| NcPoly::monomial(x, self.domain.one());
        let left = a.rhs.mul(&word(w.slice(a.lhs.len()..w.len())));
        let right = word(w.slice(0..amb.offset_b))
            .mul(&b.rhs)
            .mul(&word(w.slice(amb.offset_b + b.lhs.len()..w.len())));
        (left, right)
    }
}

fn accumulate<C: Coefficient>(map: &mut BTreeMap<Word, C>, w: Word, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub rule_a: usize,
    pub rule_b: usize,
    /// The smallest word containing both left-hand sides.
    pub overlap: Word,
    /// Where rule B's left-hand side starts inside `overlap`.
    pub offset_b: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbiguityReport {
    pub overlap: String,
    #[serde(rename = "ruleA")]
    pub rule_a: String,
    #[serde(rename = "ruleB")]
    pub rule_b: String,
    pub resolved: String,
    pub difference: String,
    pub max_abs_difference: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfluenceReport {
    pub system: String,
    /// `certificate` for exact coefficients, `evidence, not proof` for floats.
    pub mode: String,
    pub params: ParamSummary,
    pub ambiguities: Vec<AmbiguityReport>,
    pub pass: bool,
}

impl ConfluenceReport {
    /// Turns the first unresolved ambiguity into an error.
    pub fn certify(&self) -> Result<()> {
        match self.ambiguities.iter().find(|a| !a.pass) {
            None => Ok(()),
            Some(a) => Err(Error::NotConfluent {
                overlap: a.overlap.clone(),
                difference: a.difference.clone(),
            }),
        }
    }
}

impl<D: Domain + Spell> ReductionSystem<D> {
    /// Resolves every ambiguity. With exact coefficients a pass is a proof;
    /// with floats, differences below the domain tolerance count as resolved.
    pub fn check_confluence(&self) -> Result<ConfluenceReport> {
        let ambiguities = self.enumerate_ambiguities();
        let exact = self.domain.kind() == DomainKind::Exact;
        let rows: Vec<AmbiguityReport> = ambiguities
            .par_iter()
            .map(|amb| -> Result<AmbiguityReport> {
                let (left, right) = self.reducts(amb);
                let nl = self.normal_form(&left)?;
                let nr = self.normal_form(&right)?;
                let diff = nl.sub(&nr);
                let max = nl.max_abs_diff(&nr);
                let pass = if exact {
                    diff.is_zero()
                } else {
                    max <= self.domain.tolerance()
                };
                Ok(AmbiguityReport {
                    overlap: amb.overlap.to_string(),
                    rule_a: self.rules[amb.rule_a].name.clone(),
                    rule_b: self.rules[amb.rule_b].name.clone(),
                    resolved: format_poly(&nl, &self.domain),
                    difference: format_poly(&diff, &self.domain),
                    max_abs_difference: max,
                    pass,
                })
            })
            .collect::<Result<_>>()?;
        let pass = rows.iter().all(|r| r.pass);
        Ok(ConfluenceReport {
            system: self
                .rules
                .iter()
                .map(|r| r.name.as_str())
                .collect::<Vec<_>>()
                .join(","),
            mode: if exact { "certificate" } else { "evidence, not proof" }.into(),
            params: ParamSummary::from(self.domain.params()),
            ambiguities: rows,
            pass,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ExactDomain, FloatDomain};
    use crate::params::derive_params;
    use crate::parse::parse_expression;
    use Letter::*;

    fn sys() -> ReductionSystem<ExactDomain> {
        ReductionSystem::new(ExactDomain::new(&derive_params(2, (1, 5)).unwrap()).unwrap())
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_compare(&Word::from([L]), &Word::from([W, L])), WordOrder::Less);
        assert_eq!(order_compare(&Word::from([L, W]), &Word::from([W, L])), WordOrder::Less);
        assert_eq!(order_compare(&Word::from([W, W]), &Word::from([L, Ls])), WordOrder::Incomparable);
        assert_eq!(order_compare(&Word::from([W]), &Word::from([W])), WordOrder::Equal);
    }

    #[test]
    fn normal_form_examples() {
        let s = sys();
        let d = s.domain();
        let nf = |t: &str| s.normal_form(&parse_expression(t, d).unwrap()).unwrap();
        assert_eq!(nf("L L*"), NcPoly::constant(d.one()));
        assert_eq!(nf("W W* L"), parse_expression("z L^2 + mu L + zbar", d).unwrap());
        assert_eq!(nf("W* W"), parse_expression("-zbar L - z L* + mu", d).unwrap());
        assert_eq!(nf("W L"), parse_expression("q L W", d).unwrap());
    }

    #[test]
    fn twelve_overlaps() {
        let s = sys();
        let ambs = s.enumerate_ambiguities();
        assert_eq!(ambs.len(), 12);
        assert!(ambs.iter().any(|a| a.overlap == Word::from([W, Ws, L])
            && s.rules()[a.rule_a].name == "S7"
            && s.rules()[a.rule_b].name == "S4"));
        assert!(ambs.iter().any(|a| a.overlap == Word::from([L, Ls, L])));
    }

    #[test]
    fn exact_certificate() {
        let report = sys().check_confluence().unwrap();
        assert!(report.pass);
        assert_eq!(report.mode, "certificate");
        report.certify().unwrap();
        let row = report.ambiguities.iter().find(|a| a.overlap == "W W* L").unwrap();
        assert_eq!(row.resolved, "z*L^2 + mu*L + zbar*I");
        assert_eq!(row.difference, "0");
    }

    #[test]
    fn perturbed_rule_is_caught() {
        let s = sys();
        let d = s.domain().clone();
        let rhs = s.rule("S7").unwrap().rhs.add(&NcPoly::constant(d.one()));
        let broken = s.with_rule_rhs("S7", rhs).unwrap();
        let report = broken.check_confluence().unwrap();
        assert!(!report.pass);
        assert!(matches!(report.certify(), Err(Error::NotConfluent { .. })));
    }

    #[test]
    fn incompatible_rule_rejected() {
        let s = sys();
        let d = s.domain().clone();
        let bad = NcPoly::monomial(Word::from([W, W, L]), d.one());
        assert!(matches!(s.with_rule_rhs("S1", bad), Err(Error::IncompatibleRule(_))));
    }

    #[test]
    fn float_mode_is_evidence() {
        let s = ReductionSystem::new(FloatDomain::new(&derive_params(2.0, 0.2137).unwrap()));
        let report = s.check_confluence().unwrap();
        assert!(report.pass);
        assert_eq!(report.mode, "evidence, not proof");
    }

    #[test]
    fn step_cap_is_reported() {
        let s = sys().with_step_cap(3);
        let p = parse_expression("W^3 W*^3", s.domain()).unwrap();
        assert_eq!(s.normal_form(&p), Err(Error::StepCapExceeded(3)));
    }
}
