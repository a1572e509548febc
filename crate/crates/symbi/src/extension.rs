//! Constructive extension devices.
//!
//! On `R ∪ F_0` (the royal variety together with the flat leaf through
//! the origin) the functions `f_τ` extend to `Ψ_τ = -τ2 Φ_ω` on all of
//! `G`, and Herglotz sums over atomic measures on `T²` extend with them.
//! [`improve_map`] builds, for a datum in a disc with a round hole, a map
//! into the disc that strictly increases its modulus.

use crate::base::{cis, disc_modulus, DiscDatum, Mobius, PointG, C, ONE, ZERO};
use crate::caratheodory::phi_point;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const ON_SET_TOL: f64 = 1e-9;

/// `τ1 z` on `(0, z)`, `τ2 z` on `(2z, z²)`.
pub fn f_tau(tau: (C, C), s: &PointG) -> Result<C> {
    if (s.s1 * s.s1 - 4.0 * s.s2).norm() <= ON_SET_TOL {
        Ok(tau.1 * 0.5 * s.s1)
    } else if s.s1.norm() <= ON_SET_TOL {
        Ok(tau.0 * s.s2)
    } else {
        Err(Error::OffSet("point is on neither the royal variety nor the leaf s1 = 0".into()))
    }
}

/// `Ψ_τ = -τ2 Φ_ω` with `ω = -conj(τ2) τ1`.
pub fn psi_tau(tau: (C, C), s: &PointG) -> Result<C> {
    let w = -tau.1.conj() * tau.0;
    Ok(-tau.1 * phi_point(w, s)?)
}

/// Atomic probability measure on the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasureT2 {
    atoms: Vec<(C, C, f64)>,
}

impl FiniteMeasureT2 {
    pub fn new(atoms: Vec<(C, C, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("measure needs at least one atom".into()));
        }
        let mut total = 0.0;
        for (a, b, w) in &atoms {
            if (a.norm() - 1.0).abs() > 1e-12 || (b.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter("atoms must lie on the torus".into()));
            }
            if !(*w > 0.0) {
                return Err(Error::InvalidParameter("weights must be positive".into()));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}")));
        }
        Ok(FiniteMeasureT2 { atoms })
    }

    /// Up to `max_atoms` atoms with random positions and weights.
    pub fn random(seed: u64, max_atoms: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=max_atoms.max(1));
        let raw: Vec<(C, C, f64)> = (0..n)
            .map(|_| (cis(rng.random_range(0.0..TAU)), cis(rng.random_range(0.0..TAU)), rng.random_range(0.05..1.0)))
            .collect();
        let total: f64 = raw.iter().map(|a| a.2).sum();
        let mut atoms: Vec<(C, C, f64)> = raw.into_iter().map(|(a, b, w)| (a, b, w / total)).collect();
        // absorb rounding so the weights sum to one
        let drift = 1.0 - atoms.iter().map(|a| a.2).sum::<f64>();
        atoms[0].2 += drift;
        FiniteMeasureT2 { atoms }
    }

    pub fn atoms(&self) -> &[(C, C, f64)] {
        &self.atoms
    }
}

/// `Σ w (1 + φ) / (1 - φ)` with `φ = f_τ` on the variety, `Ψ_τ` otherwise.
pub fn herglotz_eval(mu: &FiniteMeasureT2, s: &PointG, on_variety: bool) -> Result<C> {
    let mut acc = ZERO;
    for &(t1, t2, w) in &mu.atoms {
        let phi = if on_variety { f_tau((t1, t2), s)? } else { psi_tau((t1, t2), s)? };
        let d = ONE - phi;
        if d.norm() < 1e-14 {
            return Err(Error::BoundaryContact);
        }
        acc += w * (ONE + phi) / d;
    }
    Ok(acc)
}

/// Largest `|∂g/∂conj(s_j)|` at `s` by central differences with step `h`.
pub fn cauchy_riemann_residual(mu: &FiniteMeasureT2, s: &PointG, h: f64) -> Result<f64> {
    let g = |p: PointG| herglotz_eval(mu, &p, false);
    let mut worst: f64 = 0.0;
    for j in 0..2 {
        let bump = |d: C| if j == 0 { PointG::new(s.s1 + d, s.s2) } else { PointG::new(s.s1, s.s2 + d) };
        let dx = (g(bump(C::new(h, 0.0)))? - g(bump(C::new(-h, 0.0)))?) / (2.0 * h);
        let dy = (g(bump(C::new(0.0, h)))? - g(bump(C::new(0.0, -h)))?) / (2.0 * h);
        worst = worst.max((0.5 * (dx + C::new(0.0, 1.0) * dy)).norm());
    }
    Ok(worst)
}

/// `{z ∈ D : |z - w0| > r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnularRegion {
    pub w0: C,
    pub r: f64,
}

impl AnnularRegion {
    pub fn new(w0: C, r: f64) -> Result<Self> {
        if !(w0.norm() < 1.0 && r > 0.0 && r < 1.0 - w0.norm()) {
            return Err(Error::InvalidParameter("need 0 < r < 1 - |w0|".into()));
        }
        Ok(AnnularRegion { w0, r })
    }

    pub fn contains(&self, z: C) -> bool {
        z.norm() < 1.0 && (z - self.w0).norm() > self.r
    }

    /// Automorphism taking the hole to `|z| ≤ r'`, and `r'`.
    pub fn centering(&self) -> (Mobius, f64) {
        let d = self.w0.norm();
        if d == 0.0 {
            return (Mobius::identity(), self.r);
        }
        let u = self.w0 / d;
        let (a1, a2) = ((d - self.r).atanh(), (d + self.r).atanh());
        let h = (0.5 * (a1 + a2)).tanh();
        let rr = (0.5 * (a2 - a1)).tanh();
        (Mobius::blaschke(u * h), rr)
    }
}

/// `β = (m(z) - t g(m(z))) / R` where `m` centres the hole and
/// `g = (z - z1)(z - z2) h` with `h` a Laurent partial sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ImproveMap {
    pub region: AnnularRegion,
    pub centering: Mobius,
    /// Radius of the centred hole.
    pub inner: f64,
    /// Datum base points after centring.
    pub nodes: (C, C),
    pub eps: f64,
    /// Truncation order: `h(z) = Σ_{n ≤ N} h_n z^{-n-1}`.
    pub order: usize,
    pub coeffs: Vec<C>,
    pub t: f64,
    pub radius: f64,
}

impl ImproveMap {
    fn h(&self, z: C) -> C {
        let iz = ONE / z;
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * iz + c) * iz
    }

    /// `g` in centred coordinates.
    pub fn g(&self, z: C) -> C {
        (z - self.nodes.0) * (z - self.nodes.1) * self.h(z)
    }

    fn g_prime(&self, z: C) -> C {
        let e = 1e-6;
        (self.g(z + e) - self.g(z - e)) / (2.0 * e)
    }

    /// `β` in the original coordinates.
    pub fn eval(&self, z: C) -> C {
        let w = self.centering.apply(z);
        (w - self.t * self.g(w)) / self.radius
    }

    pub fn apply_datum(&self, zeta: &DiscDatum) -> DiscDatum {
        match *zeta {
            DiscDatum::Discrete(a, b) => DiscDatum::Discrete(self.eval(a), self.eval(b)),
            DiscDatum::Infinitesimal(z, c) => {
                let w = self.centering.apply(z);
                let d = (ONE - self.t * self.g_prime(w)) / self.radius;
                DiscDatum::Infinitesimal(self.eval(z), d * self.centering.derivative(z) * c)
            }
        }
    }

    /// Largest `|m(z) - t g(m(z))|` over `n` samples of each boundary
    /// circle of the region; `R` must exceed it.
    pub fn boundary_max(&self, n: usize) -> f64 {
        (0..n)
            .flat_map(|j| {
                let e = cis(TAU * j as f64 / n as f64);
                [self.eval(e), self.eval(self.region.w0 + self.region.r * e)]
            })
            .map(|v| v.norm() * self.radius)
            .fold(0.0, f64::max)
    }
}

const BOUNDARY_SAMPLES: usize = 4096;

/// Tail bound of the Laurent series on the unit circle after order `n`.
fn tail_bound(z1: C, z2: C, n: usize) -> f64 {
    let rho = z1.norm().max(z2.norm());
    let nf = n as f64;
    let crude = rho.powi(n as i32 + 1) * ((nf + 2.0) - (nf + 1.0) * rho) / (1.0 - rho).powi(2);
    let gap = (z1 - z2).norm();
    if gap < 1e-8 {
        return crude;
    }
    let (a, b) = ((z1 / (z1 - z2)).norm(), (z2 / (z2 - z1)).norm());
    let geo = |x: f64| x.powi(n as i32 + 1) / (1.0 - x);
    crude.min(a * geo(z1.norm()) + b * geo(z2.norm()))
}

pub fn improve_map(region: &AnnularRegion, zeta: &DiscDatum) -> Result<ImproveMap> {
    let (p1, p2) = match *zeta {
        DiscDatum::Discrete(a, b) => {
            if a == b {
                return Err(Error::Degenerate);
            }
            (a, b)
        }
        DiscDatum::Infinitesimal(z, c) => {
            if c == ZERO {
                return Err(Error::Degenerate);
            }
            (z, z)
        }
    };
    if !region.contains(p1) || !region.contains(p2) {
        return Err(Error::InvalidParameter("datum must lie inside the annular region".into()));
    }
    let (m, inner) = region.centering();
    let (z1, z2) = (m.apply(p1), m.apply(p2));
    let eps = 1.0 / (2.0 * (1.0 + z1.norm()) * (1.0 + z2.norm()));
    let order = (0..10_000)
        .find(|&n| tail_bound(z1, z2, n) < eps)
        .ok_or_else(|| Error::NoConvergence { residual: tail_bound(z1, z2, 10_000) })?;
    let coeffs: Vec<C> = (0..=order)
        .map(|n| (0..=n).map(|i| z1.powu(i as u32) * z2.powu((n - i) as u32)).sum())
        .collect();
    let mut map = ImproveMap {
        region: *region,
        centering: m,
        inner,
        nodes: (z1, z2),
        eps,
        order,
        coeffs,
        t: 0.0,
        radius: 1.0,
    };
    let circle: Vec<C> = (0..BOUNDARY_SAMPLES).map(|j| cis(TAU * j as f64 / BOUNDARY_SAMPLES as f64)).collect();
    let worst_fit = circle.iter().map(|z| (z.conj() * map.g(*z) - 1.0).norm()).fold(0.0, f64::max);
    if !(worst_fit < 0.5) {
        return Err(Error::NoConvergence { residual: worst_fit });
    }
    let sup_g2 = circle.iter().map(|z| map.g(*z).norm_sqr()).fold(0.0, f64::max);
    // largest image modulus on both centred boundary circles
    let image_max = |t: f64| {
        circle
            .iter()
            .flat_map(|e| [*e, inner * e])
            .map(|z| (z - t * map.g(z)).norm())
            .fold(0.0, f64::max)
    };
    let floor = z1.norm().max(z2.norm());
    let mut t = 1.0 / (2.0 * sup_g2);
    let mut best: Option<(f64, f64)> = None;
    let mut stale = 0;
    for _ in 0..200 {
        let rs = image_max(t);
        if rs < 1.0 && rs > floor {
            if best.is_none_or(|(_, b)| rs < b) {
                best = Some((t, rs));
                stale = 0;
            } else {
                stale += 1;
                if stale >= 4 {
                    break;
                }
            }
        }
        t *= 0.5;
    }
    let Some((t, rs)) = best else {
        return Err(Error::NoConvergence { residual: image_max(t) });
    };
    map.t = t;
    // margin keeps samples strictly inside without eating the gain
    map.radius = rs + ((1.0 - rs) * 1e-3).min(1e-3);
    let before = disc_modulus(zeta)?;
    let after = disc_modulus(&map.apply_datum(zeta))?;
    if !(after > before) {
        return Err(Error::NoConvergence { residual: before - after });
    }
    Ok(map)
}
