//! Truncated Taylor series in one variable, `f(x0 + t) = sum c_j t^j`.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<Complex64>);

impl Jet {
    pub fn constant(c: Complex64, order: usize) -> Jet {
        let mut v = vec![Complex64::new(0.0, 0.0); order + 1];
        v[0] = c;
        Jet(v)
    }

    /// `a + b t`
    pub fn linear(a: Complex64, b: Complex64, order: usize) -> Jet {
        let mut j = Jet::constant(a, order);
        if order >= 1 {
            j.0[1] = b;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// First derivative at the expansion point.
    pub fn slope(&self) -> Complex64 {
        self.0.get(1).copied().unwrap_or_default()
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        Jet(self.0.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.0.len().min(o.0.len());
        Jet((0..n).map(|k| (0..=k).map(|j| self.0[j] * o.0[k - j]).sum()).collect())
    }

    pub fn exp(&self) -> Jet {
        let n = self.0.len();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        g[0] = self.0[0].exp();
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|j| self.0[j] * g[k - j] * j as f64).sum();
            g[k] = s / k as f64;
        }
        Jet(g)
    }

    /// Principal branch; the constant term must be nonzero.
    pub fn sqrt(&self) -> Jet {
        let n = self.0.len();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        g[0] = self.0[0].sqrt();
        for k in 1..n {
            let s: Complex64 = (1..k).map(|j| g[j] * g[k - j]).sum();
            g[k] = (self.0[k] - s) / (g[0] * 2.0);
        }
        Jet(g)
    }

    pub fn recip(&self) -> Jet {
        let n = self.0.len();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        g[0] = self.0[0].inv();
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|j| self.0[j] * g[k - j]).sum();
            g[k] = -s * g[0];
        }
        Jet(g)
    }

    /// `t -> sin(a + b t)` expanded exactly.
    pub fn sin_linear(a: f64, b: f64, order: usize) -> Jet {
        let derivs = [a.sin(), a.cos(), -a.sin(), -a.cos()];
        let mut out = Vec::with_capacity(order + 1);
        let mut factor = 1.0;
        for j in 0..=order {
            if j > 0 {
                factor *= b / j as f64;
            }
            out.push(Complex64::new(derivs[j % 4] * factor, 0.0));
        }
        Jet(out)
    }

    /// The derivative as a jet one order shorter.
    pub fn derivative(&self) -> Jet {
        if self.0.len() == 1 {
            return Jet(vec![Complex64::new(0.0, 0.0)]);
        }
        Jet(self.0.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect())
    }

    pub fn truncate(mut self, order: usize) -> Jet {
        self.0.truncate(order + 1);
        self
    }
}
