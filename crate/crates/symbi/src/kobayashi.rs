//! The Kobayashi problem: a complex geodesic through a datum.
//!
//! With a Carathéodory maximizer `ω` in hand, the geodesic can be taken
//! in normal form with `υ = id`, so that `ζ = Φ_ω(δ)` and everything
//! reduces to a degree-2 Blaschke interpolation
//! `k²(z_j) = s²_j` plus the boundary condition `k²(ω̄) = ω̄²`.
//! That problem is solved in closed form by two Schur steps; a seeded
//! Levenberg-Marquardt multistart serves as the second route.

use crate::base::{blaschke, cis, Datum, DiscDatum, Mobius, C, ONE};
use crate::caratheodory::{classify_datum_with, phi_datum, CarOptions, Classification, DatumType};
use crate::geodesics::{canonical_geodesic, Blaschke, Canonical, Family, GeodesicMap};
use crate::par::{self, Exec};
use crate::poly::Poly;
use crate::{Error, Result};
use nalgebra::{Matrix5, Vector5};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KobMethod {
    /// Closed-form Schur reduction, falling back to the multistart.
    Schur,
    /// Levenberg-Marquardt multistart only.
    Multistart,
}

#[derive(Debug, Clone, Copy)]
pub struct KobOptions {
    pub method: KobMethod,
    pub seed: u64,
    pub starts: usize,
    pub car: CarOptions,
}

impl Default for KobOptions {
    fn default() -> Self {
        KobOptions { method: KobMethod::Schur, seed: 0, starts: 8, car: CarOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KobSolution {
    pub map: GeodesicMap,
    pub zeta: DiscDatum,
    pub classification: Classification,
    /// `max ||k(ζ_j) - s_j||`, tangent mismatch included for infinitesimal datums.
    pub residual: f64,
}

pub const RESIDUAL_TOL: f64 = 1e-8;

pub fn solve_kobayashi(delta: &Datum) -> Result<KobSolution> {
    solve_kobayashi_with(delta, &KobOptions::default())
}

pub fn solve_kobayashi_with(delta: &Datum, opts: &KobOptions) -> Result<KobSolution> {
    delta.check()?;
    let cls = classify_datum_with(delta, &opts.car)?;
    let (map, zeta) = match cls.kind {
        DatumType::Flat => flat_solution(delta)?,
        DatumType::Royal => royal_solution(delta)?,
        _ => {
            let omega = cis(cls.car.maximizers[0]);
            let targets = Targets::new(delta, omega)?;
            let schur = if opts.method == KobMethod::Schur { targets.schur().ok() } else { None };
            let b = match schur {
                Some(b) if targets.residual(&b) < RESIDUAL_TOL => b,
                _ => targets.multistart(opts)?,
            };
            let map = GeodesicMap {
                family: Family::General,
                omega,
                upsilon: Mobius::identity(),
                k2: b,
                transport: Mobius::identity(),
            };
            (map, targets.zeta)
        }
    };
    let residual = datum_residual(&map, &zeta, delta);
    if !(residual < RESIDUAL_TOL) {
        return Err(Error::NoConvergence { residual });
    }
    Ok(KobSolution { map, zeta, classification: cls, residual })
}

fn flat_solution(delta: &Datum) -> Result<(GeodesicMap, DiscDatum)> {
    let beta = crate::base::flat_beta(&delta.base())?;
    let map = canonical_geodesic(Canonical::Flat(beta))?;
    let zeta = match delta {
        Datum::Discrete(p, q) => DiscDatum::Discrete(p.s2, q.s2),
        Datum::Infinitesimal(p, v) => DiscDatum::Infinitesimal(p.s2, v[1]),
    };
    Ok((map, zeta))
}

fn royal_solution(delta: &Datum) -> Result<(GeodesicMap, DiscDatum)> {
    let map = canonical_geodesic(Canonical::Royal)?;
    let zeta = match delta {
        Datum::Discrete(p, q) => DiscDatum::Discrete(0.5 * p.s1, 0.5 * q.s1),
        Datum::Infinitesimal(p, v) => DiscDatum::Infinitesimal(0.5 * p.s1, 0.5 * v[0]),
    };
    Ok((map, zeta))
}

/// `max ||k(ζ_j) - s_j||`, plus the tangent error for infinitesimal datums.
pub fn datum_residual(k: &GeodesicMap, zeta: &DiscDatum, delta: &Datum) -> f64 {
    let curve = k.curve();
    match (zeta, delta) {
        (DiscDatum::Discrete(a, b), Datum::Discrete(p, q)) => curve.eval(*a).dist(p).max(curve.eval(*b).dist(q)),
        (DiscDatum::Infinitesimal(z, c), Datum::Infinitesimal(p, v)) => {
            let d = curve.derivative(*z);
            let e = ((d[0] * c - v[0]).norm_sqr() + (d[1] * c - v[1]).norm_sqr()).sqrt();
            curve.eval(*z).dist(p).max(e)
        }
        _ => f64::INFINITY,
    }
}

/// Interpolation data for `k²` after normalizing `υ = id`.
struct Targets {
    zeta: DiscDatum,
    tau: C,
    sigma: C,
    z1: C,
    w1: C,
    /// `(z2, w2)` for discrete datums, `(z1, (k²)'(z1))` for infinitesimal ones.
    second: (C, C),
    infinitesimal: bool,
}

impl Targets {
    fn new(delta: &Datum, omega: C) -> Result<Targets> {
        let zeta = phi_datum(omega, delta)?;
        let tau = omega.conj();
        let sigma = tau * tau;
        Ok(match (delta, zeta) {
            (Datum::Discrete(p, q), DiscDatum::Discrete(z1, z2)) => Targets {
                zeta,
                tau,
                sigma,
                z1,
                w1: p.s2,
                second: (z2, q.s2),
                infinitesimal: false,
            },
            (Datum::Infinitesimal(p, v), DiscDatum::Infinitesimal(z1, c1)) => {
                if c1.norm() < 1e-300 {
                    return Err(Error::Degenerate);
                }
                Targets { zeta, tau, sigma, z1, w1: p.s2, second: (z1, v[1] / c1), infinitesimal: true }
            }
            _ => unreachable!("phi_datum keeps the datum kind"),
        })
    }

    /// Two Schur steps: peel `z1 -> w1`, then the remaining Möbius factor
    /// is pinned by one interior and one boundary value.
    fn schur(&self) -> Result<Blaschke> {
        let (z1, w1) = (self.z1, self.w1);
        let u2 = if self.infinitesimal {
            (1.0 - z1.norm_sqr()) / (1.0 - w1.norm_sqr()) * self.second.1
        } else {
            let (z2, w2) = self.second;
            blaschke(w1, w2) / blaschke(z1, z2)
        };
        if !(u2.norm() < 1.0 - 1e-12) {
            return Err(Error::Degenerate);
        }
        let z2 = self.second.0;
        let sp = blaschke(w1, self.sigma) / blaschke(z1, self.tau);
        let c = blaschke(u2, sp) / blaschke(z2, self.tau);
        let inner = Mobius::blaschke(-u2).compose(&Mobius { c: c / c.norm(), a: z2 });
        // B_{z1} * inner, then B_{-w1} on the outside
        let p = Poly::new(vec![-z1, ONE]).mul(&Poly::new(vec![-inner.c * inner.a, inner.c]));
        let q = Poly::new(vec![ONE, -z1.conj()]).mul(&Poly::new(vec![ONE, -inner.a.conj()]));
        let n = p.add(&q.scale(w1));
        let d = q.add(&p.scale(w1.conj()));
        let zeros = n.roots();
        if zeros.len() != 2 || zeros.iter().any(|a| !(a.norm() < 1.0)) {
            return Err(Error::Degenerate);
        }
        let theta = n.coeff(2) / d.coeff(0);
        Ok(Blaschke { theta: theta / theta.norm(), zeros })
    }

    fn raw(&self, theta: C, a: C, b: C) -> [f64; 5] {
        let bl = Blaschke { theta, zeros: vec![a, b] };
        let e1 = bl.eval(self.z1) - self.w1;
        let e2 = if self.infinitesimal {
            // logarithmic derivative of the product
            let dl = 1.0 / (self.z1 - a) + a.conj() / (ONE - a.conj() * self.z1) + 1.0 / (self.z1 - b)
                + b.conj() / (ONE - b.conj() * self.z1);
            bl.eval(self.z1) * dl - self.second.1
        } else {
            bl.eval(self.second.0) - self.second.1
        };
        let e3 = (bl.eval(self.tau) * self.sigma.conj()).arg();
        [e1.re, e1.im, e2.re, e2.im, e3]
    }

    fn residual(&self, b: &Blaschke) -> f64 {
        let r = self.raw(b.theta, b.zeros[0], b.zeros[1]);
        r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn multistart(&self, opts: &KobOptions) -> Result<Blaschke> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let starts: Vec<[f64; 5]> = (0..opts.starts.max(1))
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / opts.starts.max(1) as f64;
                let a = 0.5 * cis(t + rng.random_range(-0.3..0.3));
                let b = 0.3 * cis(t + std::f64::consts::PI + rng.random_range(-0.3..0.3));
                let bare = Blaschke { theta: ONE, zeros: vec![a, b] };
                let phase = (self.sigma / bare.eval(self.tau)).arg();
                let (x1, x2) = to_plane(a);
                let (x3, x4) = to_plane(b);
                [phase, x1, x2, x3, x4]
            })
            .collect();
        let exec = opts.car.exec;
        let fits = par::map_slice(exec, &starts, |x| self.levenberg_marquardt(*x));
        let best = fits
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one start");
        let bl = from_params(&best.0);
        let res = self.residual(&bl);
        if res < 1e-10 {
            Ok(bl)
        } else {
            Err(Error::NoConvergence { residual: res })
        }
    }

    fn params_residual(&self, x: &[f64; 5]) -> Vector5<f64> {
        let b = from_params(x);
        Vector5::from(self.raw(b.theta, b.zeros[0], b.zeros[1]))
    }

    fn levenberg_marquardt(&self, mut x: [f64; 5]) -> ([f64; 5], f64) {
        let mut r = self.params_residual(&x);
        let mut cost = r.norm();
        let mut lambda = 1e-3;
        for _ in 0..400 {
            if cost < 1e-15 || lambda > 1e12 {
                break;
            }
            let mut jac = Matrix5::<f64>::zeros();
            for k in 0..5 {
                let h = 1e-7 * (1.0 + x[k].abs());
                let (mut xp, mut xm) = (x, x);
                xp[k] += h;
                xm[k] -= h;
                let col = (self.params_residual(&xp) - self.params_residual(&xm)) / (2.0 * h);
                jac.set_column(k, &col);
            }
            let jtj = jac.transpose() * jac;
            let g = jac.transpose() * r;
            let mut a = jtj;
            for k in 0..5 {
                a[(k, k)] += lambda * (jtj[(k, k)] + 1e-12);
            }
            let Some(step) = a.lu().solve(&(-g)) else {
                lambda *= 4.0;
                continue;
            };
            let mut cand = x;
            for k in 0..5 {
                cand[k] += step[k];
            }
            let rc = self.params_residual(&cand);
            if rc.iter().all(|v| v.is_finite()) && rc.norm() < cost {
                x = cand;
                r = rc;
                cost = r.norm();
                lambda = (lambda / 3.0).max(1e-15);
            } else {
                lambda *= 4.0;
            }
        }
        (x, cost)
    }
}

/// `R² -> D`, `x ↦ x tanh|x| / |x|`.
fn to_disc(x: f64, y: f64) -> C {
    let r = x.hypot(y);
    if r < 1e-12 {
        C::new(x, y)
    } else {
        C::new(x, y) * (r.tanh() / r)
    }
}

fn to_plane(a: C) -> (f64, f64) {
    let r = a.norm();
    if r < 1e-12 {
        (a.re, a.im)
    } else {
        let s = r.atanh() / r;
        (a.re * s, a.im * s)
    }
}

fn from_params(x: &[f64; 5]) -> Blaschke {
    Blaschke { theta: cis(x[0]), zeros: vec![to_disc(x[1], x[2]), to_disc(x[3], x[4])] }
}

/// Batch solve; order of results follows the input.
pub fn solve_many(deltas: &[Datum], opts: &KobOptions, exec: Exec) -> Vec<Result<KobSolution>> {
    par::map_slice(exec, deltas, |d| solve_kobayashi_with(d, opts))
}
