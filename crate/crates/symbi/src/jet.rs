//! Truncated Taylor series in one real variable with complex coefficients.
//! Used to get exact derivatives of `t -> rho(e^{it})` up to fourth order.

use crate::base::{C, ZERO};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub(crate) const ORDER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet(pub [C; ORDER]);

impl Jet {
    pub fn constant(c: C) -> Self {
        let mut a = [ZERO; ORDER];
        a[0] = c;
        Jet(a)
    }

    /// `w0 e^{i x}` expanded in `x`.
    pub fn circle(w0: C) -> Self {
        let mut a = [ZERO; ORDER];
        let mut term = w0;
        for (k, slot) in a.iter_mut().enumerate() {
            *slot = term;
            term = term * C::new(0.0, 1.0) / (k + 1) as f64;
        }
        Jet(a)
    }

    /// Conjugate as a function of the real variable.
    pub fn conj(&self) -> Self {
        Jet(self.0.map(|c| c.conj()))
    }

    /// Derivatives `f^(k)(0)` of the real part.
    pub fn real_derivatives(&self) -> [f64; ORDER] {
        let mut out = [0.0; ORDER];
        let mut fact = 1.0;
        for k in 0..ORDER {
            if k > 0 {
                fact *= k as f64;
            }
            out[k] = self.0[k].re * fact;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut a = self.0;
        for k in 0..ORDER {
            a[k] += o.0[k];
        }
        Jet(a)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut a = self.0;
        for k in 0..ORDER {
            a[k] -= o.0[k];
        }
        Jet(a)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|c| -c))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut a = [ZERO; ORDER];
        for i in 0..ORDER {
            for j in 0..ORDER - i {
                a[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(a)
    }
}

impl Mul<C> for Jet {
    type Output = Jet;
    fn mul(self, c: C) -> Jet {
        Jet(self.0.map(|x| x * c))
    }
}

impl Add<C> for Jet {
    type Output = Jet;
    fn add(self, c: C) -> Jet {
        let mut a = self.0;
        a[0] += c;
        Jet(a)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let mut q = [ZERO; ORDER];
        let d0 = o.0[0];
        for k in 0..ORDER {
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= o.0[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Jet(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_derivatives() {
        // Re(e^{ix}) = cos x: derivatives 1, 0, -1, 0, 1
        let d = Jet::circle(C::new(1.0, 0.0)).real_derivatives();
        let want = [1.0, 0.0, -1.0, 0.0, 1.0];
        for k in 0..ORDER {
            assert!((d[k] - want[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn quotient_matches_series() {
        // 1 / (2 - e^{ix}) at x = 0 against finite differences
        let j = Jet::constant(C::new(1.0, 0.0)) / (Jet::constant(C::new(2.0, 0.0)) - Jet::circle(C::new(1.0, 0.0)));
        let f = |x: f64| (C::new(1.0, 0.0) / (C::new(2.0, 0.0) - C::new(x.cos(), x.sin()))).re;
        let h = 1e-4;
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert!((j.real_derivatives()[2] - d2).abs() < 1e-6);
        let prod = j * (Jet::constant(C::new(2.0, 0.0)) - Jet::circle(C::new(1.0, 0.0)));
        assert!((prod.0[0] - 1.0).norm() < 1e-15);
        for k in 1..ORDER {
            assert!(prod.0[k].norm() < 1e-15);
        }
    }
}
