//! An independent route to `car` for infinitesimal datums through the
//! operator pencil `(S_κ, P_κ)`: `G` is a spectral domain for the pair iff
//! the numerical range of `T_κ` lies in the closed unit disc, and that
//! happens iff `κ car(δ) ≤ 1`.

use crate::base::{cis, Datum, C, ZERO};
use crate::{Error, Result};
use nalgebra::Matrix2;
use std::f64::consts::TAU;

pub type M2 = Matrix2<C>;

/// Commuting upper-triangular Toeplitz pair built from `(s, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pencil2 {
    pub sk: M2,
    pub pk: M2,
    pub kappa: f64,
}

impl Pencil2 {
    pub fn new(delta: &Datum, kappa: f64) -> Result<Pencil2> {
        let Datum::Infinitesimal(s, v) = delta else {
            return Err(Error::InvalidParameter("pencil needs an infinitesimal datum".into()));
        };
        let k = C::new(kappa, 0.0);
        Ok(Pencil2 {
            sk: M2::new(s.s1, k * v[0], ZERO, s.s1),
            pk: M2::new(s.s2, k * v[1], ZERO, s.s2),
            kappa,
        })
    }

    /// `(1 - P*P)^{-1/2} (S - S*P) (1 - P*P)^{-1/2}`; needs `||P|| < 1`.
    pub fn t_matrix(&self) -> Result<M2> {
        let (s, p) = (self.sk, self.pk);
        let d = M2::identity() - p.adjoint() * p;
        let eig = d.symmetric_eigen();
        if eig.eigenvalues.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::BoundaryContact);
        }
        let inv_sqrt = eig.eigenvalues.map(|l| C::new(1.0 / l.sqrt(), 0.0));
        let r = eig.eigenvectors * M2::from_diagonal(&inv_sqrt) * eig.eigenvectors.adjoint();
        Ok(r * (s - s.adjoint() * p) * r)
    }
}

/// Largest eigenvalue of the Hermitian part of `e^{iθ} T`.
fn support(t: &M2, theta: f64) -> f64 {
    let a = t * cis(theta);
    let h = (a + a.adjoint()) * C::new(0.5, 0.0);
    let (p, q, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
    0.5 * (p + q) + (0.25 * (p - q) * (p - q) + b.norm_sqr()).sqrt()
}

/// Numerical radius of a 2×2 matrix: grid scan plus golden-section
/// refinement around the best few grid points.
pub fn numerical_radius(t: &M2) -> f64 {
    const N: usize = 256;
    let h = TAU / N as f64;
    let vals: Vec<f64> = (0..N).map(|j| support(t, j as f64 * h)).collect();
    let mut idx: Vec<usize> = (0..N).collect();
    idx.sort_by(|a, b| vals[*b].total_cmp(&vals[*a]));
    let mut best = vals[idx[0]];
    for &j in idx.iter().take(3) {
        let (mut a, mut b) = ((j as f64 - 1.0) * h, (j as f64 + 1.0) * h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
        let (mut f1, mut f2) = (support(t, x1), support(t, x2));
        for _ in 0..80 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = support(t, x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = support(t, x1);
            }
        }
        best = best.max(f1).max(f2);
    }
    best
}

fn admissible(delta: &Datum, kappa: f64) -> Result<bool> {
    let t = Pencil2::new(delta, kappa)?.t_matrix()?;
    Ok(numerical_radius(&t) <= 1.0)
}

/// `car(δ)` as `1/κ*`, with `κ*` the largest admissible `κ`.
pub fn car_nr_oracle(delta: &Datum) -> Result<f64> {
    delta.check()?;
    let Datum::Infinitesimal(s, v) = delta else {
        return Err(Error::InvalidParameter("oracle needs an infinitesimal datum".into()));
    };
    if !(s.s1.norm() < 2.0) || !s.in_g() {
        return Err(Error::NotInG);
    }
    // ||P_κ|| reaches one at κ_max
    let kmax = if v[1].norm() > 0.0 { (1.0 - s.s2.norm_sqr()) / v[1].norm() } else { f64::INFINITY };
    let edge = kmax * (1.0 - 1e-12);
    let mut hi = if kmax.is_finite() { edge } else { 1.0 };
    if kmax.is_finite() {
        if admissible(delta, hi)? {
            return Ok(1.0 / kmax);
        }
    } else {
        while admissible(delta, hi)? {
            hi *= 2.0;
            if hi > 1e15 {
                return Err(Error::Degenerate);
            }
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if admissible(delta, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(1.0 / (0.5 * (lo + hi)))
}
