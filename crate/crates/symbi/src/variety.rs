//! Quadratic defining polynomials of geodesics, the closed-form family
//! polynomials `P_r`, `H_r` and the `V_β` relation, and the constant in
//! the extremal-difference identity for balanced datums.

use crate::base::{cis, Datum, Mobius, PointG, C, ONE, ZERO};
use crate::caratheodory::{phi_partials, phi_point};
use crate::geodesics::GeodesicMap;
use crate::kobayashi::solve_kobayashi;
use crate::poly::Poly;
use crate::{Error, Result};

/// `c[0] + c[1] s1 + c[2] s2 + c[3] s1² + c[4] s1 s2 + c[5] s2²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoly2 {
    pub c: [C; 6],
}

impl QuadPoly2 {
    pub const ZERO: QuadPoly2 = QuadPoly2 { c: [ZERO; 6] };

    pub fn eval(&self, s: &PointG) -> C {
        poly_eval(self, s)
    }

    pub fn scale(&self, k: C) -> QuadPoly2 {
        QuadPoly2 { c: self.c.map(|x| x * k) }
    }

    pub fn norm(&self) -> f64 {
        self.c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient error in `P(s) = (s2)² conj(P(conj s1 / conj s2, 1 / conj s2))`.
    pub fn self_conjugacy_error(&self) -> f64 {
        let c = &self.c;
        [
            (c[0] - c[5].conj()).norm(),
            c[2].im.abs(),
            (c[1] - c[4].conj()).norm(),
            c[3].im.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Scaled so the `s1²` coefficient has modulus one (or the largest
    /// coefficient, if that one vanishes).
    pub fn normalized(&self) -> QuadPoly2 {
        let lead = self.c[3].norm();
        let s = if lead > 1e-12 * self.norm() { lead } else { self.c.iter().map(|x| x.norm()).fold(0.0, f64::max) };
        if s == 0.0 {
            *self
        } else {
            self.scale(C::new(1.0 / s, 0.0))
        }
    }

    /// `max_k |a_k - λ b_k|` for the best complex `λ`, relative to `|a|`.
    pub fn projective_distance(&self, other: &QuadPoly2) -> f64 {
        let num: C = self.c.iter().zip(&other.c).map(|(a, b)| a * b.conj()).sum();
        let den: f64 = other.c.iter().map(|b| b.norm_sqr()).sum();
        if den == 0.0 {
            return if self.norm() == 0.0 { 0.0 } else { f64::INFINITY };
        }
        let lam = num / den;
        let err = self.c.iter().zip(&other.c).map(|(a, b)| (a - lam * b).norm()).fold(0.0, f64::max);
        err / self.norm().max(f64::MIN_POSITIVE)
    }
}

pub fn poly_eval(p: &QuadPoly2, s: &PointG) -> C {
    let c = &p.c;
    c[0] + s.s1 * (c[1] + c[3] * s.s1 + c[4] * s.s2) + s.s2 * (c[2] + c[5] * s.s2)
}

/// Defining polynomial of the range of a degree-2 geodesic.
pub fn variety_polynomial(k: &GeodesicMap) -> Result<QuadPoly2> {
    if k.degree() < 2 {
        return Err(Error::InvalidParameter("flat geodesic: use the leaf equation".into()));
    }
    let w = k.effective_omega();
    let curve = k.curve().precomposed(&k.effective_upsilon().inverse());
    let zeros = curve.k2.roots();
    if zeros.len() != 2 {
        return Err(Error::Degenerate);
    }
    let theta = curve.k2.coeff(2) / curve.k0.eval(ZERO);
    let lam = theta.sqrt().conj() / theta.norm().sqrt();
    let q = Poly::from_roots(&[]).scale(lam);
    let q = zeros.iter().fold(q, |acc, a| acc.mul(&Poly::new(vec![ONE, -a.conj()])));
    let (dq, ddq) = (q.deriv(), q.deriv().deriv());
    let wb = w.conj();
    let (q_w, dq_w, q0, dd0) = (q.eval(wb), dq.eval(wb), q.eval(ZERO), ddq.eval(ZERO));
    let p = QuadPoly2 {
        c: [
            -2.0 * dd0.conj(),
            2.0 * dq_w.conj(),
            4.0 * (2.0 * q0.re - q_w),
            -q_w,
            2.0 * dq_w,
            -2.0 * dd0,
        ],
    };
    Ok(p.normalized())
}

/// Dense bivariate polynomial, `c[i][j]` multiplying `x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    pub c: Vec<Vec<C>>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly { c: vec![vec![ZERO]] }
    }

    fn term(i: usize, j: usize, v: C) -> BiPoly {
        let mut c = vec![vec![ZERO; j + 1]; i + 1];
        c[i][j] = v;
        BiPoly { c }
    }

    pub fn eval(&self, x: C, y: C) -> C {
        self.c.iter().rev().fold(ZERO, |acc, row| acc * x + row.iter().rev().fold(ZERO, |a, v| a * y + v))
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        self.c.get(i).and_then(|r| r.get(j)).copied().unwrap_or(ZERO)
    }

    fn dims(&self) -> (usize, usize) {
        (self.c.len(), self.c.iter().map(|r| r.len()).max().unwrap_or(0))
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let (a, b) = (self.dims(), o.dims());
        let (n, m) = (a.0.max(b.0), a.1.max(b.1));
        BiPoly { c: (0..n).map(|i| (0..m).map(|j| self.coeff(i, j) + o.coeff(i, j)).collect()).collect() }
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let (a, b) = (self.dims(), o.dims());
        let mut c = vec![vec![ZERO; a.1 + b.1 - 1]; a.0 + b.0 - 1];
        for i in 0..a.0 {
            for j in 0..self.c[i].len() {
                for k in 0..b.0 {
                    for l in 0..o.c[k].len() {
                        c[i + k][j + l] += self.c[i][j] * o.c[k][l];
                    }
                }
            }
        }
        BiPoly { c }
    }

    /// `(x, y) ↦ self(x + y, x y)`.
    pub fn symmetrized(&self) -> BiPoly {
        let sum = BiPoly::term(1, 0, ONE).add(&BiPoly::term(0, 1, ONE));
        let prod = BiPoly::term(1, 1, ONE);
        let mut out = BiPoly::zero();
        let mut pow_i = BiPoly::term(0, 0, ONE);
        for row in &self.c {
            let mut pow_j = pow_i.clone();
            for v in row {
                out = out.add(&pow_j.mul(&BiPoly::term(0, 0, *v)));
                pow_j = pow_j.mul(&prod);
            }
            pow_i = pow_i.mul(&sum);
        }
        out
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, o: &BiPoly) -> f64 {
        let (a, b) = (self.dims(), o.dims());
        let mut e: f64 = 0.0;
        for i in 0..a.0.max(b.0) {
            for j in 0..a.1.max(b.1) {
                e = e.max((self.coeff(i, j) - o.coeff(i, j)).norm());
            }
        }
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// `P_r` in `(s1, s2)`.
    Pr(f64),
    /// `H_r` in `(z, w)`.
    Hr(f64),
    /// `z + w - β - conj(β) z w` in `(z, w)`.
    Vbeta(C),
}

pub fn family_polynomial(kind: FamilyKind) -> Result<BiPoly> {
    match kind {
        FamilyKind::Pr(r) => {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidParameter("P_r needs 0 < r < 1".into()));
            }
            let mut c = vec![vec![ZERO; 2]; 3];
            c[0][1] = C::new(4.0 - 4.0 * r, 0.0);
            c[1][0] = C::new(2.0 * r, 0.0);
            c[1][1] = C::new(2.0 * r, 0.0);
            c[2][0] = C::new(-(1.0 + r), 0.0);
            Ok(BiPoly { c })
        }
        FamilyKind::Hr(r) => Ok(family_polynomial(FamilyKind::Pr(r))?.symmetrized()),
        FamilyKind::Vbeta(b) => {
            if !(b.norm() < 1.0) {
                return Err(Error::InvalidParameter("V_beta needs |beta| < 1".into()));
            }
            let c = vec![vec![-b, ONE], vec![ONE, -b.conj()]];
            Ok(BiPoly { c })
        }
    }
}

/// `P_r` as a [`QuadPoly2`].
pub fn pr_quad(r: f64) -> QuadPoly2 {
    let f = |x: f64| C::new(x, 0.0);
    QuadPoly2 { c: [ZERO, f(2.0 * r), f(4.0 - 4.0 * r), f(-(1.0 + r)), f(2.0 * r), ZERO] }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceFit {
    pub c: C,
    /// Largest violation of the identity over the check samples.
    pub residual: f64,
}

/// Fit `c` in `L1(s) L2(s) (C1 - C2)(s) = c P(s)`, where `C_j = m_j ∘ Φ_{ω_j}`
/// are the left inverses of the geodesic through `δ` and `L_j` is the
/// linear denominator of `C_j`. When `m_j` are rotations `L_j` reduces to
/// `2 - ω_j s1`.
pub fn extremal_difference_constant(delta: &Datum, w1: C, w2: C, p: &QuadPoly2) -> Result<DifferenceFit> {
    let k = solve_kobayashi(delta)?.map;
    let curve = k.curve();
    let left = |w: C| -> Result<Mobius> {
        let s = curve.eval(ZERO);
        let v = curve.derivative(ZERO);
        let (d1, d2) = phi_partials(w, &s)?;
        Ok(Mobius::from_jet(phi_point(w, &s)?, d1 * v[0] + d2 * v[1])?.inverse())
    };
    let (m1, m2) = (left(w1)?, left(w2)?);
    let lhs = |s: &PointG| -> Result<C> {
        let part = |w: C, m: &Mobius| -> Result<(C, C)> {
            let l = (2.0 - w * s.s1) - m.a.conj() * (2.0 * w * s.s2 - s.s1);
            Ok((m.apply(phi_point(w, s)?), l))
        };
        let ((c1, l1), (c2, l2)) = (part(w1, &m1)?, part(w2, &m2)?);
        Ok(l1 * l2 * (c1 - c2))
    };
    let scale = p.norm();
    let sample = |j: usize| {
        let z = 0.55 * cis(0.9 + 2.3 * j as f64) * (0.3 + 0.7 * ((j * 7) % 11) as f64 / 10.0);
        let x = 0.6 * cis(-0.4 + 1.7 * j as f64) * (0.2 + 0.8 * ((j * 5) % 13) as f64 / 12.0);
        PointG::new(z + x, z * x)
    };
    let fit_at = (0..50)
        .map(sample)
        .find(|s| p.eval(s).norm() > 1e-3 * scale)
        .ok_or_else(|| Error::InvalidParameter("every fitting sample lies on the variety".into()))?;
    let c = lhs(&fit_at)? / p.eval(&fit_at);
    let mut residual: f64 = 0.0;
    for j in 50..150 {
        let s = sample(j);
        residual = residual.max((lhs(&s)? - c * p.eval(&s)).norm());
    }
    Ok(DifferenceFit { c, residual })
}
