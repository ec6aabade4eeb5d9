//! Exact arithmetic in the cyclotomic field `Q(zeta_M)`.
//!
//! Elements are stored as an integer numerator vector over the power basis
//! `1, zeta, ..., zeta^{d-1}` (with `d = phi(M)`) and one positive common
//! denominator, always reduced by the gcd of all entries. Multiplication reduces
//! modulo the monic integer polynomial `Phi_M`, so products stay integral
//! before the final normalization.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Divisors of `n` in ascending order.
fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Exact division of integer polynomials (low degree first) by a monic divisor.
fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// The `n`-th cyclotomic polynomial, coefficients low degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    let mut result = vec![0i64; n + 1];
    result[0] = -1;
    result[n] = 1;
    for d in divisors(n) {
        if d < n {
            result = div_monic(&result, &cyclotomic_polynomial(d));
        }
    }
    result
}

/// `Q(zeta_M)` together with a table of `zeta^j mod Phi_M` for `0 <= j < M`.
#[derive(Debug)]
pub struct CyclotomicField {
    order: usize,
    modulus: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    pub fn new(order: usize) -> Arc<Self> {
        let modulus: Vec<BigInt> = cyclotomic_polynomial(order)
            .into_iter()
            .map(BigInt::from)
            .collect();
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by zeta
            let mut next = vec![BigInt::zero(); degree + 1];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] = c.clone();
            }
            let top = next[degree].clone();
            if !top.is_zero() {
                for (k, m) in modulus.iter().enumerate().take(degree) {
                    next[k] -= &top * m;
                }
            }
            next.truncate(degree);
            cur = next;
        }
        Arc::new(CyclotomicField {
            order,
            modulus,
            powers,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `phi(M)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        if v.len() <= d {
            v.resize(d, BigInt::zero());
            return v;
        }
        for top in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[top]);
            if c.is_zero() {
                continue;
            }
            let shift = top - d;
            for (k, m) in self.modulus.iter().enumerate().take(d) {
                if !m.is_zero() {
                    v[shift + k] -= &c * m;
                }
            }
        }
        v.truncate(d);
        v
    }
}

/// An element of `Q(zeta_M)`.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.num == other.num && self.den == other.den
    }
}

impl Eq for Cyclo {}

impl Cyclo {
    fn from_parts(field: &Arc<CyclotomicField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut out = Cyclo {
            field: Arc::clone(field),
            num,
            den,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclo {
            field: Arc::clone(field),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = r.numer().clone();
        Cyclo::from_parts(field, num, r.denom().clone())
    }

    pub fn from_ratio(field: &Arc<CyclotomicField>, n: i64, d: i64) -> Self {
        Cyclo::from_rational(field, &BigRational::new(n.into(), d.into()))
    }

    /// `zeta^j` for any integer `j`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, j: i64) -> Self {
        let m = field.order as i64;
        let idx = j.rem_euclid(m) as usize;
        Cyclo {
            field: Arc::clone(field),
            num: field.powers[idx].clone(),
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn check_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order,
            "mixing elements of Q(zeta_{}) and Q(zeta_{})",
            self.field.order,
            other.field.order
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other);
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Cyclo::from_parts(&self.field, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Cyclo::from_parts(&self.field, num, &self.den * &other.den)
    }

    pub fn neg(&self) -> Self {
        Cyclo {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return Cyclo::zero(&self.field);
        }
        let d = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(prod);
        Cyclo::from_parts(&self.field, num, &self.den * &other.den)
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.field.order;
        let mut acc = vec![BigInt::zero(); self.field.degree()];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let image = &self.field.powers[(m - k) % m];
            for (slot, p) in acc.iter_mut().zip(image) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        Cyclo::from_parts(&self.field, acc, self.den.clone())
    }

    /// Multiplicative inverse through the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let to_q = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut r0 = trim(to_q(&self.field.modulus));
        let mut r1 = trim(to_q(&self.num));
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1);
            r0 = std::mem::replace(&mut r1, rem);
            let next = poly_sub(&s0, &poly_mul(&quot, &s1));
            s0 = std::mem::replace(&mut s1, next);
        }
        // r0 is a nonzero constant because Phi_M is irreducible
        debug_assert_eq!(r0.len(), 1);
        let scale = BigRational::from_integer(self.den.clone()) / &r0[0];
        let mut acc = vec![BigRational::zero(); self.field.degree()];
        // s0 may exceed the degree; reduce through the power table
        for (k, c) in s0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let image = &self.field.powers[k % self.field.order];
            for (slot, p) in acc.iter_mut().zip(image) {
                *slot += c * BigRational::from_integer(p.clone());
            }
        }
        Some(Cyclo::from_rational_vec(&self.field, acc.into_iter().map(|c| c * &scale)))
    }

    fn from_rational_vec(
        field: &Arc<CyclotomicField>,
        coeffs: impl IntoIterator<Item = BigRational>,
    ) -> Self {
        let coeffs: Vec<BigRational> = coeffs.into_iter().collect();
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Cyclo::from_parts(field, num, den)
    }

    /// Coefficients over the power basis, as rationals.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// `Some(r)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Numerical value under the embedding `zeta -> e^{2 pi i / M}`.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.field.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum::<Complex64>()
            / den
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*zeta{}", self.field.order)?,
                _ => write!(f, "({c})*zeta{}^{k}", self.field.order)?,
            }
        }
        Ok(())
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let lead = &b[db];
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / lead;
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}
