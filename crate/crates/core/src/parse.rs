//! Expression grammar for polynomials and the canonical printer.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor (['*'] factor)*          juxtaposition is a product
//! factor   := atom ['^' exponent]
//! atom     := number ['/' integer] | constant | generator | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! ```
//!
//! Generators are `W W* L L* X Y Z` and the unit `I`; a `*` directly after `W`
//! or `L` (whitespace aside) is the adjoint, anywhere else it is a product.
//! Constants are `q z zbar mu hbar i`; only `q` takes half-integer powers,
//! with `q^(1/2) = e^{i pi theta}`. Negative generator powers are allowed on
//! `L` only and mean powers of `L*`. Numbers are integers, decimals
//! (`0.25`, `1e-3`) or `p/q` rationals.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::coeff::{Coefficient, Domain, ExactDomain, FloatDomain};
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::poly::NcPoly;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Const(&'static str),
    Gen(Letter),
    Unit,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Const(c) => format!("constant `{c}`"),
            Tok::Gen(l) => format!("generator `{l}`"),
            Tok::Unit => "`I`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const CONSTANTS: [&str; 6] = ["q", "z", "zbar", "mu", "hbar", "i"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_whitespace() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'W' | b'L' => {
                let j = skip_ws(i + 1);
                let starred = j < bytes.len() && bytes[j] == b'*';
                if starred {
                    i = j;
                }
                Tok::Gen(match (c, starred) {
                    (b'W', false) => Letter::W,
                    (b'W', true) => Letter::Ws,
                    (b'L', false) => Letter::L,
                    _ => Letter::Ls,
                })
            }
            b'X' => Tok::Gen(Letter::X),
            b'Y' => Tok::Gen(Letter::Y),
            b'Z' => Tok::Gen(Letter::Z),
            b'I' => Tok::Unit,
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let s = &text[i..j];
                i = j - 1;
                Tok::Num(s.to_string())
            }
            b'a'..=b'z' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_lowercase() {
                    j += 1;
                }
                let ident = &text[i..j];
                let name = CONSTANTS.iter().find(|c| **c == ident).ok_or_else(|| Error::Parse {
                    position: start,
                    expected: CONSTANTS.iter().map(|c| format!("`{c}`")).collect(),
                    found: format!("identifier `{ident}`"),
                })?;
                i = j - 1;
                Tok::Const(name)
            }
            _ => {
                return Err(Error::Parse {
                    position: start,
                    expected: vec!["generator".into(), "constant".into(), "number".into(), "operator".into()],
                    found: format!("character `{}`", text[i..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, D: Domain> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    domain: &'a D,
}

impl<'a, D: Domain> Parser<'a, D> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Parse {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn one(&self) -> NcPoly<D::Coeff> {
        NcPoly::constant(self.domain.one())
    }

    fn expr(&mut self) -> Result<NcPoly<D::Coeff>> {
        let mut negate = false;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(t: &Tok) -> bool {
        matches!(t, Tok::Num(_) | Tok::Const(_) | Tok::Gen(_) | Tok::Unit | Tok::LParen)
    }

    fn term(&mut self) -> Result<NcPoly<D::Coeff>> {
        let mut acc = self.factor()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                let f = self.factor()?;
                acc = self.checked_mul(&acc, &f)?;
            } else if Self::starts_factor(self.peek()) {
                let f = self.factor()?;
                acc = self.checked_mul(&acc, &f)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn checked_mul(&self, a: &NcPoly<D::Coeff>, b: &NcPoly<D::Coeff>) -> Result<NcPoly<D::Coeff>> {
        crate::poly::poly_mul(a, b)
    }

    fn integer(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Num(s) if s.chars().all(|c| c.is_ascii_digit()) => {
                let at = self.offset();
                self.bump();
                s.parse::<i64>().map_err(|_| Error::Parse {
                    position: at,
                    expected: vec!["integer".into()],
                    found: format!("`{s}`"),
                })
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn signed_integer(&mut self) -> Result<i64> {
        if *self.peek() == Tok::Minus {
            self.bump();
            Ok(-self.integer()?)
        } else {
            self.integer()
        }
    }

    fn exponent(&mut self) -> Result<Rational64> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let n = self.signed_integer()?;
            let d = if *self.peek() == Tok::Slash {
                self.bump();
                self.integer()?
            } else {
                1
            };
            if d == 0 {
                return Err(self.error(&["nonzero denominator"]));
            }
            if *self.peek() != Tok::RParen {
                return Err(self.error(&["`)`"]));
            }
            self.bump();
            Ok(Rational64::new(n, d))
        } else {
            Ok(Rational64::from_integer(self.signed_integer()?))
        }
    }

    fn factor(&mut self) -> Result<NcPoly<D::Coeff>> {
        let at = self.offset();
        let tok = self.peek().clone();
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp_at = self.offset();
        let e = self.exponent()?;
        let bad = |msg: &str| Error::Parse {
            position: exp_at,
            expected: vec![msg.to_string()],
            found: format!("exponent {e}"),
        };
        if let Tok::Const("q") = tok {
            if *e.denom() > 2 {
                return Err(bad("integer or half-integer exponent"));
            }
            let k = if e.is_integer() { 2 * e.numer() } else { *e.numer() };
            return Ok(NcPoly::constant(self.domain.half_phase_pow(k)));
        }
        if !e.is_integer() {
            return Err(bad("integer exponent (half-integer powers are reserved for q)"));
        }
        let n = e.to_integer();
        match tok {
            Tok::Gen(Letter::L) => Ok(NcPoly::word(self.domain, Word::lambda_power(n))),
            Tok::Gen(l) => {
                if n < 0 {
                    return Err(bad("nonnegative exponent (negative powers only on L)"));
                }
                Ok(NcPoly::word(self.domain, Word::power(l, n as usize)))
            }
            Tok::Unit => Ok(base),
            _ => {
                // numbers, constants and parenthesized groups
                if n >= 0 {
                    return Ok(base.pow(n as usize, &self.one()));
                }
                let constant = match base.terms().next() {
                    None => None,
                    Some((w, c)) if w.is_empty() && base.len() == 1 => Some(c.clone()),
                    Some(_) => return Err(bad("nonnegative exponent on a non-constant group")),
                };
                let c = constant.ok_or_else(|| Error::Domain(format!("0 raised to {n} near byte {at}")))?;
                let inv = self
                    .domain
                    .pow(&c, n)
                    .ok_or_else(|| Error::Domain(format!("constant near byte {at} is not invertible")))?;
                Ok(NcPoly::constant(inv))
            }
        }
    }

    fn atom(&mut self) -> Result<NcPoly<D::Coeff>> {
        match self.bump() {
            Tok::Num(s) => {
                let mut value = self.domain.from_decimal(&s)?;
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let d = self.integer()?;
                    if d == 0 {
                        return Err(Error::Domain("division by zero in rational literal".into()));
                    }
                    value = value.mul(&self.domain.from_ratio(1, d));
                }
                Ok(NcPoly::constant(value))
            }
            Tok::Const(name) => {
                let d = self.domain;
                let c = match name {
                    "q" => d.q(),
                    "z" => d.z(),
                    "zbar" => d.zbar(),
                    "mu" => d.mu(),
                    "hbar" => d.hbar(),
                    _ => d.imag_unit(),
                };
                Ok(NcPoly::constant(c))
            }
            Tok::Gen(l) => Ok(NcPoly::letter(self.domain, l)),
            Tok::Unit => Ok(self.one()),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`+`", "`-`", "factor"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                if *self.peek() == Tok::End {
                    // bump does not advance past End
                    self.pos = self.toks.len() - 1;
                }
                Err(self.error(&["number", "constant", "generator", "`(`"]))
            }
        }
    }
}

/// Parses an expression, substituting the named constants from `domain`.
pub fn parse_expression<D: Domain>(text: &str, domain: &D) -> Result<NcPoly<D::Coeff>> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        domain,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`+`", "`-`", "factor", "end of input"]));
    }
    out.alphabet()?;
    Ok(out)
}

/// How a coefficient is written in front of a word.
#[derive(Debug, Clone, PartialEq)]
pub struct Spelled {
    pub negative: bool,
    /// `None` when the magnitude is exactly one.
    pub body: Option<String>,
}

/// Domains whose coefficients can be printed in the expression grammar.
pub trait Spell: Domain {
    fn spell_all(&self, coeffs: &[&Self::Coeff]) -> Vec<Spelled>;
}

fn spell_rational(r: &num_rational::BigRational) -> Spelled {
    let a = r.abs();
    let body = if a.is_one() {
        None
    } else if a.is_integer() {
        Some(a.numer().to_string())
    } else {
        Some(format!("{}/{}", a.numer(), a.denom()))
    };
    Spelled {
        negative: r.is_negative(),
        body,
    }
}

fn join_factor(r: &Spelled, atom: &str) -> Spelled {
    Spelled {
        negative: r.negative,
        body: Some(match &r.body {
            None => atom.to_string(),
            Some(b) => format!("{b}*{atom}"),
        }),
    }
}

fn q_power_name(k: i64) -> String {
    if k % 2 == 0 {
        match k / 2 {
            1 => "q".to_string(),
            h => format!("q^{h}"),
        }
    } else {
        format!("q^({k}/2)")
    }
}

impl Spell for ExactDomain {
    fn spell_all(&self, coeffs: &[&Cyclo]) -> Vec<Spelled> {
        let period = self.half_phase_period();
        let mut atoms: Vec<(String, Cyclo)> = vec![
            ("z".into(), self.z()),
            ("zbar".into(), self.zbar()),
            ("i".into(), self.imag_unit()),
            ("hbar".into(), self.hbar()),
        ];
        for k in 1..period {
            atoms.push((q_power_name(k), self.half_phase_pow(k)));
        }
        let inverses: Vec<(String, Cyclo)> = atoms
            .into_iter()
            .filter_map(|(n, a)| a.inv().map(|inv| (n, inv)))
            .collect();
        let mu = self.mu();
        let mu_r = mu.as_rational().unwrap_or_default();
        let mu_named = !mu_r.is_zero() && !mu_r.abs().is_one();
        let (za, zb) = self.zeta_in_named_constants();

        coeffs
            .iter()
            .map(|c| {
                if mu_named && **c == mu {
                    return Spelled { negative: false, body: Some("mu".into()) };
                }
                if mu_named && c.neg() == mu {
                    return Spelled { negative: true, body: Some("mu".into()) };
                }
                if let Some(r) = c.as_rational() {
                    return spell_rational(&r);
                }
                for (name, inv) in &inverses {
                    if let Some(r) = c.mul(inv).as_rational() {
                        return join_factor(&spell_rational(&r), name);
                    }
                }
                // power basis zeta^j = q^(a j / 2) i^(b j)
                let mut parts = Vec::new();
                for (j, r) in c.coefficients().iter().enumerate() {
                    if r.is_zero() {
                        continue;
                    }
                    let j = j as i64;
                    let e = (za * j).rem_euclid(period);
                    let f = (zb * j).rem_euclid(4);
                    let mut s = spell_rational(r);
                    if f >= 2 {
                        s.negative = !s.negative;
                    }
                    let mut atom = String::new();
                    if e != 0 {
                        atom.push_str(&q_power_name(e));
                    }
                    if f % 2 == 1 {
                        if !atom.is_empty() {
                            atom.push('*');
                        }
                        atom.push('i');
                    }
                    let s = if atom.is_empty() { s } else { join_factor(&s, &atom) };
                    parts.push(s);
                }
                Spelled {
                    negative: false,
                    body: Some(format!("({})", join_terms(parts.iter().map(|s| (s, None)))))
                }
            })
            .collect()
    }
}

fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Spell for FloatDomain {
    fn spell_all(&self, coeffs: &[&num_complex::Complex64]) -> Vec<Spelled> {
        coeffs
            .iter()
            .map(|c| {
                if c.im == 0.0 {
                    let body = if c.re.abs() == 1.0 { None } else { Some(format_real(c.re.abs())) };
                    Spelled { negative: c.re < 0.0, body }
                } else if c.re == 0.0 {
                    let body = if c.im.abs() == 1.0 {
                        "i".to_string()
                    } else {
                        format!("{}*i", format_real(c.im.abs()))
                    };
                    Spelled { negative: c.im < 0.0, body: Some(body) }
                } else {
                    let sign = if c.im < 0.0 { '-' } else { '+' };
                    Spelled {
                        negative: false,
                        body: Some(format!(
                            "({} {sign} {}*i)",
                            format_real(c.re),
                            format_real(c.im.abs())
                        )),
                    }
                }
            })
            .collect()
    }
}

fn join_terms<'a>(items: impl Iterator<Item = (&'a Spelled, Option<&'a Word>)>) -> String {
    let mut out = String::new();
    for (idx, (s, word)) in items.enumerate() {
        let text = match (&s.body, word) {
            (None, None) => "1".to_string(),
            (Some(b), None) => b.clone(),
            (None, Some(w)) => w.to_string(),
            (Some(b), Some(w)) => format!("{b}*{w}"),
        };
        if idx == 0 {
            if s.negative {
                out.push('-');
            }
        } else {
            out.push_str(if s.negative { " - " } else { " + " });
        }
        out.push_str(&text);
    }
    out
}

/// Canonical spelling: terms in descending word order, unit word written `I`.
pub fn format_poly<D: Spell>(p: &NcPoly<D::Coeff>, domain: &D) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<(&Word, &D::Coeff)> = p.terms().rev().collect();
    let coeffs: Vec<&D::Coeff> = terms.iter().map(|(_, c)| *c).collect();
    let spelled = domain.spell_all(&coeffs);
    join_terms(spelled.iter().zip(terms.iter().map(|(w, _)| Some(*w))))
}
