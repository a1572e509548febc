//! The Carathéodory problem on `G`: the functions `Φ_ω`, the profile
//! `ρ_δ(ω) = |Φ_ω(δ)|²`, its maximizers over the circle and the five-way
//! classification of datums.

use crate::base::{cis, pseudo_hyperbolic, Datum, DiscDatum, Mobius, PointG, C, ONE};
use crate::geodesics::aut_datum;
use crate::jet::{Jet, ORDER};
use crate::par::{self, Exec};
use crate::{Error, Result};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatumType {
    PurelyUnbalanced,
    Exceptional,
    PurelyBalanced,
    Royal,
    Flat,
}

impl DatumType {
    pub fn name(&self) -> &'static str {
        match self {
            DatumType::PurelyUnbalanced => "PurelyUnbalanced",
            DatumType::Exceptional => "Exceptional",
            DatumType::PurelyBalanced => "PurelyBalanced",
            DatumType::Royal => "Royal",
            DatumType::Flat => "Flat",
        }
    }
}

/// Result of maximizing `ρ_δ` over the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CarSolution {
    /// `car(δ)`, the square root of the maximum of `ρ_δ`.
    pub value: f64,
    /// Maximizing angles in `[0, 2π)`, sorted. Empty when `constant_flag`
    /// is set, in which case every point of the circle is a maximizer.
    pub maximizers: Vec<f64>,
    pub constant_flag: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct CarOptions {
    pub grid: usize,
    pub exec: Exec,
}

impl Default for CarOptions {
    fn default() -> Self {
        CarOptions { grid: 4096, exec: Exec::default() }
    }
}

const POLE_TOL: f64 = 1e-14;
/// `max - min` below this counts as constant.
pub const CONSTANT_TOL: f64 = 1e-10;
/// Local maxima within this of the global maximum are maximizers.
pub const MAX_VALUE_TOL: f64 = 1e-10;
/// Maximizers closer than this (radians) are merged.
pub const MAX_SEPARATION: f64 = 1e-6;

pub fn phi_point(omega: C, s: &PointG) -> Result<C> {
    let d = 2.0 - omega * s.s1;
    if d.norm() < POLE_TOL {
        return Err(Error::Pole);
    }
    Ok((2.0 * omega * s.s2 - s.s1) / d)
}

/// `(∂Φ/∂s1, ∂Φ/∂s2)` at `s`.
pub fn phi_partials(omega: C, s: &PointG) -> Result<(C, C)> {
    let d = 2.0 - omega * s.s1;
    if d.norm() < POLE_TOL {
        return Err(Error::Pole);
    }
    Ok((-2.0 * (ONE - omega * omega * s.s2) / (d * d), 2.0 * omega / d))
}

pub fn phi_datum(omega: C, delta: &Datum) -> Result<DiscDatum> {
    match delta {
        Datum::Discrete(p, q) => Ok(DiscDatum::Discrete(phi_point(omega, p)?, phi_point(omega, q)?)),
        Datum::Infinitesimal(p, v) => {
            let (d1, d2) = phi_partials(omega, p)?;
            Ok(DiscDatum::Infinitesimal(phi_point(omega, p)?, d1 * v[0] + d2 * v[1]))
        }
    }
}

pub fn rho(delta: &Datum, omega: C) -> Result<f64> {
    match phi_datum(omega, delta)? {
        DiscDatum::Discrete(a, b) => Ok(pseudo_hyperbolic(a, b).powi(2)),
        DiscDatum::Infinitesimal(z, c) => Ok(c.norm_sqr() / (1.0 - z.norm_sqr()).powi(2)),
    }
}

fn phi_jet(w: Jet, s: &PointG) -> Result<(Jet, Jet)> {
    let den = Jet::constant(C::new(2.0, 0.0)) - w * s.s1;
    if den.0[0].norm() < POLE_TOL {
        return Err(Error::Pole);
    }
    let phi = (w * (2.0 * s.s2) + (-s.s1)) / den;
    Ok((phi, den))
}

/// `d^k/dt^k ρ_δ(e^{it})` for `k = 0..=4`, exact up to rounding.
pub fn rho_derivatives(delta: &Datum, t: f64) -> Result<[f64; ORDER]> {
    let w = Jet::circle(cis(t));
    let one = Jet::constant(ONE);
    let r = match delta {
        Datum::Discrete(p, q) => {
            let (a, _) = phi_jet(w, p)?;
            let (b, _) = phi_jet(w, q)?;
            let m = (a - b) / (one - b.conj() * a);
            m * m.conj()
        }
        Datum::Infinitesimal(p, v) => {
            let (phi, den) = phi_jet(w, p)?;
            let d1 = (one - w * w * p.s2) * C::new(-2.0, 0.0) / (den * den);
            let d2 = w * C::new(2.0, 0.0) / den;
            let c = d1 * v[0] + d2 * v[1];
            let g = one - phi * phi.conj();
            c * c.conj() / (g * g)
        }
    };
    Ok(r.real_derivatives())
}

pub fn car_solve(delta: &Datum) -> Result<CarSolution> {
    car_solve_with(delta, &CarOptions::default())
}

pub fn car_solve_with(delta: &Datum, opts: &CarOptions) -> Result<CarSolution> {
    delta.check()?;
    let vals = rho_grid(delta, opts.grid, opts.exec)?;
    let (mn, mx) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if mx - mn < CONSTANT_TOL {
        return Ok(CarSolution { value: mx.sqrt(), maximizers: vec![], constant_flag: true });
    }
    refine_maxima(delta, &vals)
}

/// `ρ_δ` at `n` equally spaced angles starting from 0.
pub fn rho_grid(delta: &Datum, n: usize, exec: Exec) -> Result<Vec<f64>> {
    par::map_range(exec, n, |j| rho(delta, cis(TAU * j as f64 / n as f64))).into_iter().collect()
}

fn refine_maxima(delta: &Datum, vals: &[f64]) -> Result<CarSolution> {
    let n = vals.len();
    let (mn, mx) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let h = TAU / n as f64;
    let mut found: Vec<(f64, f64)> = Vec::new();
    for j in 0..n {
        let (l, r) = (vals[(j + n - 1) % n], vals[(j + 1) % n]);
        if vals[j] >= l && vals[j] > r && vals[j] >= mx - 0.25 * (mx - mn) {
            let t0 = h * j as f64;
            let t = refine_one(delta, t0 - h, t0 + h, t0)?;
            found.push((t, rho(delta, cis(t))?));
        }
    }
    let best = found.iter().map(|p| p.1).fold(mx, f64::max);
    found.retain(|p| p.1 >= best - MAX_VALUE_TOL);
    found.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut keep: Vec<f64> = Vec::new();
    for (t, _) in found {
        let t = t.rem_euclid(TAU);
        if keep.iter().all(|k| circ_dist(*k, t) > MAX_SEPARATION) {
            keep.push(t);
        }
    }
    keep.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let keep = merge_flat_tops(delta, keep, best, h)?;
    Ok(CarSolution { value: best.sqrt(), maximizers: keep, constant_flag: false })
}

/// Neighbouring maximizers with no dip of `ρ` between them are rounding
/// noise on one very flat maximum; keep a single angle for them.
fn merge_flat_tops(delta: &Datum, keep: Vec<f64>, best: f64, h: f64) -> Result<Vec<f64>> {
    if keep.len() < 2 {
        return Ok(keep);
    }
    let tol = MAX_VALUE_TOL * best.max(1.0);
    let mut out: Vec<f64> = Vec::new();
    for t in keep {
        if let Some(&prev) = out.last() {
            let gap = (t - prev).rem_euclid(TAU);
            if gap < 0.05 {
                let mut flat = true;
                for j in 1..16 {
                    if rho(delta, cis(prev + gap * j as f64 / 16.0))? < best - tol {
                        flat = false;
                        break;
                    }
                }
                if flat {
                    let mid = prev + 0.5 * gap;
                    let m = refine_one(delta, prev - h, prev + gap + h, mid)?;
                    *out.last_mut().unwrap() = m.rem_euclid(TAU);
                    continue;
                }
            }
        }
        out.push(t);
    }
    // the last one may wrap onto the first
    if out.len() >= 2 {
        let (first, last) = (out[0], out[out.len() - 1]);
        let gap = (first - last).rem_euclid(TAU);
        if gap < 0.05 {
            let flat = (1..16).map(|j| rho(delta, cis(last + gap * j as f64 / 16.0))).collect::<Result<Vec<_>>>()?;
            if flat.iter().all(|v| *v >= best - tol) {
                out.pop();
            }
        }
    }
    Ok(out)
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Root of `ρ'` in `[lo, hi]` by safeguarded Newton, then, when the
/// maximum is flat to second order, a root of `ρ'''` nearby so the angle
/// is resolved to rounding level rather than to the cube root of it.
fn refine_one(delta: &Datum, lo: f64, hi: f64, start: f64) -> Result<f64> {
    let t = safeguarded_root(delta, 1, lo, hi, start)?;
    let d = rho_derivatives(delta, t)?;
    if d[2].abs() < 1e-3 * d[0].max(1e-300) {
        let w = 1e-2;
        if let Ok(t3) = safeguarded_root(delta, 3, (t - w).max(lo), (t + w).min(hi), t) {
            let d3 = rho_derivatives(delta, t3)?;
            // near the boundary ρ itself carries ~1e-12 relative noise
            if d3[0] >= d[0] * (1.0 - 1e-11) && d3[2].abs() < d[2].abs() {
                return Ok(t3);
            }
        }
    }
    Ok(t)
}

/// Root of the `k`-th derivative, decreasing through zero, in `[lo, hi]`.
fn safeguarded_root(delta: &Datum, k: usize, lo: f64, hi: f64, start: f64) -> Result<f64> {
    let fl = rho_derivatives(delta, lo)?[k];
    let fh = rho_derivatives(delta, hi)?[k];
    if !(fl >= 0.0 && fh <= 0.0) {
        if k == 1 {
            // no sign change: keep the better endpoint or the start
            let cands = [lo, start, hi];
            let mut best = start;
            let mut bv = f64::NEG_INFINITY;
            for c in cands {
                let v = rho(delta, cis(c))?;
                if v > bv {
                    bv = v;
                    best = c;
                }
            }
            return Ok(best);
        }
        return Err(Error::NoConvergence { residual: fl.abs().min(fh.abs()) });
    }
    let (mut a, mut b) = (lo, hi);
    let mut t = start.clamp(lo, hi);
    for _ in 0..200 {
        let d = rho_derivatives(delta, t)?;
        let (f, fp) = (d[k], d[k + 1]);
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            a = t;
        } else {
            b = t;
        }
        let mut tn = if fp < 0.0 { t - f / fp } else { f64::NAN };
        if !(tn > a && tn < b) {
            tn = 0.5 * (a + b);
        }
        let step = (tn - t).abs();
        t = tn;
        if step < 4.0 * f64::EPSILON * (1.0 + t.abs()) || b - a < 4.0 * f64::EPSILON * (1.0 + t.abs()) {
            break;
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatRoyal {
    Flat,
    Royal,
}

const ANALYTIC_TOL: f64 = 1e-9;

fn is_royal_point(s: &PointG) -> bool {
    (s.s1 * s.s1 - 4.0 * s.s2).norm() <= ANALYTIC_TOL
}

/// Closed-form test for the two datum types with constant `ρ`.
pub fn analytic_flat_royal(delta: &Datum) -> Option<FlatRoyal> {
    match delta {
        Datum::Discrete(p, q) => {
            if is_royal_point(p) && is_royal_point(q) {
                return Some(FlatRoyal::Royal);
            }
            let (bp, bq) = (crate::base::flat_beta(p).ok()?, crate::base::flat_beta(q).ok()?);
            ((bp - bq).norm() <= ANALYTIC_TOL).then_some(FlatRoyal::Flat)
        }
        Datum::Infinitesimal(p, v) => {
            let vn = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if is_royal_point(p) {
                // tangent to z -> (2z, z^2) is proportional to (1, z)
                let z = 0.5 * p.s1;
                if (v[1] - z * v[0]).norm() <= ANALYTIC_TOL * vn {
                    return Some(FlatRoyal::Royal);
                }
            }
            let b = crate::base::flat_beta(p).ok()?;
            ((v[0] - b.conj() * v[1]).norm() <= ANALYTIC_TOL * vn).then_some(FlatRoyal::Flat)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: DatumType,
    pub car: CarSolution,
    /// `d²ρ/dt²` at the maximizer, when there is exactly one.
    pub curvature: Option<f64>,
    /// Set when the decision sits within ten times the exceptional band,
    /// or when numeric constancy was not confirmed by the closed form.
    pub near_exceptional: bool,
}

pub fn classify_datum(delta: &Datum) -> Result<Classification> {
    classify_datum_with(delta, &CarOptions::default())
}

pub fn classify_datum_with(delta: &Datum, opts: &CarOptions) -> Result<Classification> {
    let mut car = car_solve_with(delta, opts)?;
    let mut flagged = false;
    if car.constant_flag {
        match analytic_flat_royal(delta) {
            Some(fr) => {
                let kind = if fr == FlatRoyal::Flat { DatumType::Flat } else { DatumType::Royal };
                return Ok(Classification { kind, car, curvature: None, near_exceptional: false });
            }
            None => {
                flagged = true;
                let vals = rho_grid(delta, opts.grid, opts.exec)?;
                car = refine_maxima(delta, &vals)?;
            }
        }
    }
    if car.maximizers.len() >= 2 {
        return Ok(Classification {
            kind: DatumType::PurelyBalanced,
            car,
            curvature: None,
            near_exceptional: flagged,
        });
    }
    let t = car.maximizers[0];
    let d2 = rho_derivatives(delta, t)?[2];
    let thr = 1e-8 * car.value * car.value;
    let kind = if d2.abs() <= thr { DatumType::Exceptional } else { DatumType::PurelyUnbalanced };
    let near = flagged || (d2.abs() > thr && d2.abs() <= 10.0 * thr);
    Ok(Classification { kind, car, curvature: Some(d2), near_exceptional: near })
}

/// `d²/dt² ρ_δ(e^{it})` at `t0` by five-point central differences with
/// step `1e-3`, improved by one Richardson step.
pub fn rho_curvature(delta: &Datum, t0: f64) -> Result<f64> {
    let f = |t: f64| rho(delta, cis(t));
    let d = |h: f64| -> Result<f64> {
        Ok((-f(t0 + 2.0 * h)? + 16.0 * f(t0 + h)? - 30.0 * f(t0)? + 16.0 * f(t0 - h)? - f(t0 - 2.0 * h)?)
            / (12.0 * h * h))
    };
    let h = 1e-3;
    let (a, b) = (d(h)?, d(0.5 * h)?);
    Ok((16.0 * b - a) / 15.0)
}

/// Curvature of `ρ` for `m̃(δ)` at `m∨(ω0)` and the value predicted from
/// the curvature of `ρ_δ` at its unique maximizer `ω0`.
pub fn curvature_transport_check(delta: &Datum, m: &Mobius) -> Result<(f64, f64)> {
    let car = car_solve(delta)?;
    if car.maximizers.len() != 1 {
        return Err(Error::InvalidParameter("datum needs a unique maximizer".into()));
    }
    let t0 = car.maximizers[0];
    let w0 = cis(t0);
    let factor = (ONE - m.a * w0).norm().powi(4) / (1.0 - m.a.norm_sqr()).powi(2);
    let moved = aut_datum(m, delta)?;
    let t1 = m.reflect().apply(w0).arg();
    Ok((rho_derivatives(&moved, t1)?[2], factor * rho_derivatives(delta, t0)?[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{sym_pi, ZERO};

    fn pt(a: f64, b: f64) -> PointG {
        PointG::real(a, b)
    }

    // closed forms written out independently of the geodesics module
    fn kr(r: f64, z: C) -> PointG {
        PointG::new(2.0 * (1.0 - r) * z / (1.0 - r * z), z * (z - r) / (1.0 - r * z))
    }

    fn gr(r: f64, z: C) -> PointG {
        let b = (z - r) / (1.0 - r * z);
        PointG::new(z + b, z * b)
    }

    fn hr(r: f64, z: C) -> PointG {
        let i = C::new(0.0, 1.0);
        let m = ((r - i) * z + i) / (r + i - i * z);
        PointG::new(z + m, z * m)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_point(cis(0.3), &pt(0.0, 0.0)).unwrap(), ZERO);
        let v = phi_point(C::new(0.0, 1.0), &pt(1.0, 0.25)).unwrap();
        assert!((v + 0.5).norm() < 1e-15);
        let z = C::new(0.2, -0.4);
        assert!((phi_point(ONE, &PointG::new(ZERO, z)).unwrap() - z).norm() < 1e-16);
        assert_eq!(phi_point(ONE, &pt(2.0, 1.0)), Err(Error::Pole));
    }

    #[test]
    fn phi_datum_examples() {
        let z = C::new(0.3, 0.1);
        let lam = C::new(0.5, -0.2);
        let d = Datum::Infinitesimal(PointG::new(2.0 * z, z * z), [lam, lam * z]);
        for w in [ONE, cis(1.0), cis(-2.5)] {
            match phi_datum(w, &d).unwrap() {
                DiscDatum::Infinitesimal(a, c) => {
                    assert!((a + z).norm() < 1e-15);
                    assert!((c + 0.5 * lam).norm() < 1e-15);
                }
                _ => unreachable!(),
            }
        }
        let w = C::new(0.1, 0.6);
        let d = Datum::Discrete(pt(0.0, 0.0), PointG::new(ZERO, w));
        assert_eq!(phi_datum(ONE, &d).unwrap(), DiscDatum::Discrete(ZERO, w));
    }

    #[test]
    fn partials_match_finite_differences() {
        let s = PointG::new(C::new(0.3, 0.2), C::new(-0.1, 0.25));
        let w = cis(0.9);
        let (d1, d2) = phi_partials(w, &s).unwrap();
        let h = 1e-6;
        let f = |a: C, b: C| phi_point(w, &PointG::new(s.s1 + a, s.s2 + b)).unwrap();
        let fd1 = (f(C::new(h, 0.0), ZERO) - f(C::new(-h, 0.0), ZERO)) / (2.0 * h);
        let fd2 = (f(ZERO, C::new(h, 0.0)) - f(ZERO, C::new(-h, 0.0))) / (2.0 * h);
        assert!((d1 - fd1).norm() < 1e-8 && (d2 - fd2).norm() < 1e-8);
    }

    #[test]
    fn rho_examples() {
        let d = Datum::Discrete(pt(0.0, 0.3), pt(0.0, -0.3));
        let want = (0.6f64 / 1.09).powi(2);
        for j in 0..64 {
            assert!((rho(&d, cis(0.1 * j as f64)).unwrap() - want).abs() < 1e-15);
        }
        let w = C::new(0.3, -0.2);
        let d = Datum::Discrete(pt(0.0, 0.0), PointG::new(2.0 * w, w * w));
        assert!((rho(&d, cis(2.0)).unwrap() - w.norm_sqr()).abs() < 1e-15);
        let (beta, z) = (C::new(0.2, 0.1), C::new(-0.3, 0.4));
        let d = Datum::Infinitesimal(PointG::new(beta + beta.conj() * z, z), [beta.conj(), ONE]);
        let want = 1.0 / (1.0 - z.norm_sqr()).powi(2);
        assert!((rho(&d, cis(0.7)).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn jet_derivatives_match_differences() {
        let d = Datum::Discrete(kr(0.4, C::new(0.1, 0.2)), kr(0.4, C::new(-0.5, 0.3)));
        let t = 0.37;
        let j = rho_derivatives(&d, t).unwrap();
        let f = |x: f64| rho(&d, cis(x)).unwrap();
        let h = 1e-4;
        let d1 = (f(t + h) - f(t - h)) / (2.0 * h);
        let d2 = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
        assert!((j[0] - f(t)).abs() < 1e-15);
        assert!((j[1] - d1).abs() < 1e-7);
        assert!((j[2] - d2).abs() < 1e-5);
        let di = Datum::Infinitesimal(kr(0.4, C::new(0.1, 0.2)), [C::new(0.3, 0.1), C::new(-0.2, 0.05)]);
        let j = rho_derivatives(&di, t).unwrap();
        let f = |x: f64| rho(&di, cis(x)).unwrap();
        let d3 = (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h)) / (2.0 * h * h * h);
        assert!((j[3] - d3).abs() < 1e-4 * j[3].abs().max(1.0));
    }

    #[test]
    fn car_royal_pair() {
        let d = Datum::Discrete(pt(0.0, 0.0), pt(0.8, 0.16));
        let s = car_solve(&d).unwrap();
        assert!(s.constant_flag);
        assert!((s.value - 0.4).abs() < 1e-12);
        assert_eq!(classify_datum(&d).unwrap().kind, DatumType::Royal);
    }

    #[test]
    fn car_on_k_half() {
        let d = Datum::Discrete(kr(0.5, ZERO), kr(0.5, C::new(0.3, 0.0)));
        let s = car_solve(&d).unwrap();
        assert!(!s.constant_flag);
        assert_eq!(s.maximizers.len(), 1);
        assert!((s.value - 0.3).abs() < 1e-12);
        assert!(s.maximizers[0].min(TAU - s.maximizers[0]) < 1e-9);
        let c = classify_datum(&d).unwrap();
        assert_eq!(c.kind, DatumType::PurelyUnbalanced);
    }

    #[test]
    fn car_on_g_half() {
        let d = Datum::Discrete(gr(0.5, ZERO), gr(0.5, C::new(0.3, 0.0)));
        let s = car_solve(&d).unwrap();
        assert_eq!(s.maximizers.len(), 2);
        assert!((s.value - 0.3).abs() < 1e-12);
        assert_eq!(classify_datum(&d).unwrap().kind, DatumType::PurelyBalanced);
    }

    #[test]
    fn exceptional_on_h_one() {
        let d = Datum::Discrete(hr(1.0, C::new(0.1, 0.2)), hr(1.0, C::new(-0.4, 0.3)));
        let c = classify_datum(&d).unwrap();
        assert_eq!(c.kind, DatumType::Exceptional);
        let t = c.car.maximizers[0];
        assert!(t.min(TAU - t) < 1e-10, "maximizer {t}");
        let want = pseudo_hyperbolic(C::new(0.1, 0.2), C::new(-0.4, 0.3));
        assert!((c.car.value - want).abs() < 1e-12);
        assert!(rho_curvature(&d, t).unwrap().abs() < 1e-6);
    }

    #[test]
    fn flat_and_royal_analytic() {
        let z = C::new(0.3, -0.2);
        assert_eq!(
            analytic_flat_royal(&Datum::Discrete(pt(0.0, 0.0), PointG::new(2.0 * z, z * z))),
            Some(FlatRoyal::Royal)
        );
        assert_eq!(analytic_flat_royal(&Datum::Discrete(pt(0.0, 0.2), pt(0.0, -0.5))), Some(FlatRoyal::Flat));
        assert_eq!(analytic_flat_royal(&Datum::Discrete(pt(0.0, 0.0), pt(1.0, 0.3))), None);
        assert_eq!(classify_datum(&Datum::Discrete(pt(0.0, 0.0), pt(0.0, 0.5))).unwrap().kind, DatumType::Flat);
        let s = sym_pi(C::new(0.2, 0.1), C::new(0.2, 0.1));
        let d = Datum::Infinitesimal(s, [ONE, C::new(0.2, 0.1)]);
        assert_eq!(analytic_flat_royal(&d), Some(FlatRoyal::Royal));
    }

    #[test]
    fn second_derivative_closed_form() {
        let (r, z1, z2) = (0.35, C::new(0.2, 0.3), C::new(-0.4, 0.1));
        let d = Datum::Discrete(kr(r, z1), kr(r, z2));
        let car = car_solve(&d).unwrap();
        let t = car.maximizers[0];
        let want = -(1.0 - car.value.powi(2)) * 2.0 * r * (1.0 - r) * (z1 / (1.0 - z1) - z2 / (1.0 - z2)).norm_sqr();
        let got = rho_curvature(&d, t).unwrap();
        assert!((got - want).abs() < 1e-6 * want.abs());
        let jet = rho_derivatives(&d, t).unwrap()[2];
        assert!((jet - want).abs() < 1e-10 * want.abs());
    }

    #[test]
    fn transport_identity_and_rotation() {
        let d = Datum::Discrete(kr(0.5, ZERO), kr(0.5, C::new(0.3, 0.1)));
        for m in [Mobius::identity(), Mobius::rotation(-ONE), Mobius::blaschke(C::new(0.3, 0.0))] {
            let (a, b) = curvature_transport_check(&d, &m).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs(), "{a} vs {b}");
        }
    }
}
