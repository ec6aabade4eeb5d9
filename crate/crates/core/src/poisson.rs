//! Commutative polynomials in `x, y, z` and the Nambu-type Poisson bracket
//! `{f, g} = grad C . (grad f x grad g)`.
//!
//! The level-set parameter `mu` is carried as a fourth, inert variable so that
//! identities hold symbolically in `mu` rather than at a sampled value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponents of `(x, y, z, mu)`.
pub type Exponents = [u32; 4];

#[derive(Clone, PartialEq, Eq, Default)]
pub struct CommutativePoly3 {
    terms: BTreeMap<Exponents, BigRational>,
}

impl CommutativePoly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::term(BigRational::from_integer(c.into()), [0; 4])
    }

    pub fn term(c: BigRational, exps: Exponents) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn x() -> Self {
        Self::term(BigRational::one(), [1, 0, 0, 0])
    }
    pub fn y() -> Self {
        Self::term(BigRational::one(), [0, 1, 0, 0])
    }
    pub fn z() -> Self {
        Self::term(BigRational::one(), [0, 0, 1, 0])
    }
    pub fn mu() -> Self {
        Self::term(BigRational::one(), [0, 0, 0, 1])
    }

    /// The level-set polynomial `C = 1/2 (x^2 + y^2 - mu)^2 + 1/2 z^2 - 1/2`.
    pub fn torus_sphere_level_set() -> Self {
        let half = Self::term(BigRational::new(1.into(), 2.into()), [0; 4]);
        let r = Self::x().pow(2).add(&Self::y().pow(2)).sub(&Self::mu());
        half.mul(&r.pow(2).add(&Self::z().pow(2)).sub(&Self::constant(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    /// Partial derivative in variable `var` (0 = x, 1 = y, 2 = z).
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < 3, "only x, y, z are differentiated");
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.add_term(d, c * BigRational::from_integer(BigInt::from(e[var])));
        }
        out
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.derivative(0), self.derivative(1), self.derivative(2)]
    }
}

/// `{f, g} = grad C . (grad f x grad g)`, computed exactly.
pub fn poisson_bracket(
    f: &CommutativePoly3,
    g: &CommutativePoly3,
    c: &CommutativePoly3,
) -> CommutativePoly3 {
    let [fx, fy, fz] = f.gradient();
    let [gx, gy, gz] = g.gradient();
    let [cx, cy, cz] = c.gradient();
    let cross = [
        fy.mul(&gz).sub(&fz.mul(&gy)),
        fz.mul(&gx).sub(&fx.mul(&gz)),
        fx.mul(&gy).sub(&fy.mul(&gx)),
    ];
    cx.mul(&cross[0])
        .add(&cy.mul(&cross[1]))
        .add(&cz.mul(&cross[2]))
}

impl fmt::Display for CommutativePoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        const NAMES: [&str; 4] = ["x", "y", "z", "mu"];
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .zip(NAMES)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CommutativePoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommutativePoly3({self})")
    }
}
