//! Complex geodesics of `G` in normal form, automorphism transport, royal
//! nodes and the geometric classification.
//!
//! A geodesic `k` is stored by its left-inverse parameter `ω`, the disc
//! automorphism `υ = Φ_ω ∘ k`, and the Blaschke product `k²`. The first
//! component follows from `k¹ = 2(ω k² - υ) / (1 - ω υ)`; the apparent pole
//! at `υ⁻¹(conj ω)` cancels, so after one synthetic division both
//! components share the denominator of `k²`. A post-composed automorphism
//! `m̃` of `G` is kept separately in `transport`.

use crate::base::{lift_unordered, Mobius, PointG, C, I, ONE, ZERO};
use crate::caratheodory::{phi_partials, phi_point, DatumType};
use crate::poly::{root_clusters, Poly};
use crate::{Datum, Error, Result};

/// The automorphism `m̃` of `G` induced by `m = τ B_α`.
pub fn aut_point(m: &Mobius, s: &PointG) -> Result<PointG> {
    let (t, a) = (m.c, m.a);
    let ab = a.conj();
    let e = ONE - ab * s.s1 + ab * ab * s.s2;
    if e.norm() < 1e-300 {
        return Err(Error::Pole);
    }
    let n1 = t * (-2.0 * a + (1.0 + a.norm_sqr()) * s.s1 - 2.0 * ab * s.s2);
    let n2 = t * t * (s.s2 - a * s.s1 + a * a);
    Ok(PointG::new(n1 / e, n2 / e))
}

/// Push a datum forward by `m̃`; tangent vectors go through the Jacobian.
pub fn aut_datum(m: &Mobius, delta: &Datum) -> Result<Datum> {
    match delta {
        Datum::Discrete(p, q) => Ok(Datum::Discrete(aut_point(m, p)?, aut_point(m, q)?)),
        Datum::Infinitesimal(s, v) => {
            let (t, a) = (m.c, m.a);
            let ab = a.conj();
            let e = ONE - ab * s.s1 + ab * ab * s.s2;
            let n1 = t * (-2.0 * a + (1.0 + a.norm_sqr()) * s.s1 - 2.0 * ab * s.s2);
            let n2 = t * t * (s.s2 - a * s.s1 + a * a);
            let dn1 = t * ((1.0 + a.norm_sqr()) * v[0] - 2.0 * ab * v[1]);
            let dn2 = t * t * (v[1] - a * v[0]);
            let de = -ab * v[0] + ab * ab * v[1];
            let w = [(dn1 * e - n1 * de) / (e * e), (dn2 * e - n2 * de) / (e * e)];
            Ok(Datum::Infinitesimal(PointG::new(n1 / e, n2 / e), w))
        }
    }
}

/// The disc automorphism `m1 = c B_{-α}` with `Φ_ω ∘ m̃ = m1 ∘ Φ_{(m∨)⁻¹(ω)}`.
pub fn conjugating_mobius(m: &Mobius) -> Mobius {
    Mobius { c: m.c, a: -m.a }
}

/// A finite Blaschke product `θ ∏ (z - a) / (1 - conj(a) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blaschke {
    pub theta: C,
    pub zeros: Vec<C>,
}

impl Blaschke {
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn numerator(&self) -> Poly {
        Poly::from_roots(&self.zeros).scale(self.theta)
    }

    pub fn denominator(&self) -> Poly {
        self.zeros.iter().fold(Poly::constant(ONE), |p, a| p.mul(&Poly::new(vec![ONE, -a.conj()])))
    }

    pub fn eval(&self, z: C) -> C {
        self.zeros.iter().fold(self.theta, |acc, a| acc * (z - a) / (ONE - a.conj() * z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Royal,
    Flat(C),
    PurelyUnbalanced(f64),
    PurelyBalanced(f64),
    Exceptional(f64),
    General,
}

/// Parameters for [`canonical_geodesic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Canonical {
    /// `k_r`, `0 < r < 1`.
    Kr(f64),
    /// `g_r`, `0 < r < 1`.
    Gr(f64),
    /// `h_r`, `r > 0`.
    Hr(f64),
    Royal,
    /// `f_β`, `|β| < 1`.
    Flat(C),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicMap {
    pub family: Family,
    pub omega: C,
    pub upsilon: Mobius,
    pub k2: Blaschke,
    pub transport: Mobius,
}

/// `k = (K1, K2) / K0` with quadratic (or linear) polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCurve {
    pub k0: Poly,
    pub k1: Poly,
    pub k2: Poly,
}

impl RationalCurve {
    pub fn eval(&self, z: C) -> PointG {
        let d = self.k0.eval(z);
        PointG::new(self.k1.eval(z) / d, self.k2.eval(z) / d)
    }

    pub fn derivative(&self, z: C) -> [C; 2] {
        let (d, dd) = (self.k0.eval(z), self.k0.deriv().eval(z));
        let q = |p: &Poly| (p.deriv().eval(z) * d - p.eval(z) * dd) / (d * d);
        [q(&self.k1), q(&self.k2)]
    }

    fn transported(&self, m: &Mobius) -> RationalCurve {
        let (t, a) = (m.c, m.a);
        let ab = a.conj();
        let (k0, k1, k2) = (&self.k0, &self.k1, &self.k2);
        RationalCurve {
            k0: k0.sub(&k1.scale(ab)).add(&k2.scale(ab * ab)),
            k1: k0
                .scale(-2.0 * a)
                .add(&k1.scale(C::new(1.0 + a.norm_sqr(), 0.0)))
                .sub(&k2.scale(2.0 * ab))
                .scale(t),
            k2: k2.sub(&k1.scale(a)).add(&k0.scale(a * a)).scale(t * t),
        }
    }

    /// Precompose with a disc automorphism, clearing its denominator.
    pub fn precomposed(&self, m: &Mobius) -> RationalCurve {
        // m(z) = (c z - c a) / (1 - conj(a) z)
        let num = Poly::new(vec![-m.c * m.a, m.c]);
        let den = Poly::new(vec![ONE, -m.a.conj()]);
        let deg = self.k0.degree().max(self.k1.degree()).max(self.k2.degree());
        let sub = |p: &Poly| {
            let mut out = Poly::constant(ZERO);
            for (k, c) in p.0.iter().enumerate() {
                let mut term = Poly::constant(*c);
                for _ in 0..k {
                    term = term.mul(&num);
                }
                for _ in k..deg {
                    term = term.mul(&den);
                }
                out = out.add(&term);
            }
            out
        };
        RationalCurve { k0: sub(&self.k0), k1: sub(&self.k1), k2: sub(&self.k2) }
    }
}

impl GeodesicMap {
    pub fn degree(&self) -> usize {
        self.k2.degree()
    }

    /// Normal form before transport.
    fn base_curve(&self) -> RationalCurve {
        let (w, u) = (self.omega, self.upsilon);
        let n = self.k2.numerator();
        let d = self.k2.denominator();
        let uu = Poly::new(vec![-u.c * u.a, u.c]);
        let vv = Poly::new(vec![ONE, -u.a.conj()]);
        let m = n.mul(&vv).scale(w).sub(&uu.mul(&d));
        let lead = u.a.conj() + w * u.c;
        let root = (ONE + w * u.c * u.a) / lead;
        let (q, _) = m.div_linear(root);
        RationalCurve { k0: d, k1: q.scale(-2.0 / lead), k2: n }
    }

    /// The map as a rational curve, transport included.
    pub fn curve(&self) -> RationalCurve {
        let base = self.base_curve();
        if self.transport == Mobius::identity() {
            base
        } else {
            base.transported(&self.transport)
        }
    }

    pub fn eval(&self, z: C) -> PointG {
        self.curve().eval(z)
    }

    pub fn derivative(&self, z: C) -> [C; 2] {
        self.curve().derivative(z)
    }

    /// `ω` such that `Φ_ω ∘ k` is an automorphism, transport included.
    pub fn effective_omega(&self) -> C {
        self.transport.reflect().apply(self.omega)
    }

    /// `Φ_ω ∘ k` for the effective `ω`.
    pub fn effective_upsilon(&self) -> Mobius {
        conjugating_mobius(&self.transport).compose(&self.upsilon)
    }

    /// Largest deviation of `Φ_ω ∘ k` from `υ` on a sample of the disc.
    pub fn normal_form_residual(&self) -> f64 {
        let (w, u) = (self.effective_omega(), self.effective_upsilon());
        let curve = self.curve();
        let mut worst: f64 = 0.0;
        for j in 0..24 {
            let z = (0.15 + 0.8 * (j % 4) as f64 / 3.0) * crate::base::cis(0.7 * j as f64);
            let s = curve.eval(z);
            let e = phi_point(w, &s).map(|p| (p - u.apply(z)).norm()).unwrap_or(f64::INFINITY);
            worst = worst.max(e);
        }
        worst
    }

    /// Largest violation of the distinguished-boundary criteria on `T`.
    pub fn boundary_residual(&self, n: usize) -> f64 {
        let curve = self.curve();
        (0..n)
            .map(|j| {
                let s = curve.eval(crate::base::cis(std::f64::consts::TAU * j as f64 / n as f64));
                let a = (s.s2.norm() - 1.0).abs();
                let b = (s.s1 - s.s1.conj() * s.s2).norm();
                let c = (s.s1.norm() - 2.0).max(0.0);
                a.max(b).max(c)
            })
            .fold(0.0, f64::max)
    }
}

pub fn aut_geodesic(m: &Mobius, k: &GeodesicMap) -> GeodesicMap {
    GeodesicMap { transport: m.compose(&k.transport), ..k.clone() }
}

/// Möbius `m_r` of the exceptional family, as `τ B_α`.
pub fn exceptional_mobius(r: f64) -> Mobius {
    let tau = (r - I) / (r + I);
    Mobius { c: tau, a: -I / (r - I) }
}

pub fn canonical_geodesic(p: Canonical) -> Result<GeodesicMap> {
    let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
    let minus_id = Mobius::rotation(-ONE);
    match p {
        Canonical::Kr(r) => {
            if !(r > 0.0 && r < 1.0) {
                return bad("k_r needs 0 < r < 1");
            }
            Ok(GeodesicMap {
                family: Family::PurelyUnbalanced(r),
                omega: ONE,
                upsilon: minus_id,
                k2: Blaschke { theta: ONE, zeros: vec![ZERO, C::new(r, 0.0)] },
                transport: Mobius::identity(),
            })
        }
        Canonical::Gr(r) => {
            if !(r > 0.0 && r < 1.0) {
                return bad("g_r needs 0 < r < 1");
            }
            let m = Mobius::blaschke(C::new(r, 0.0));
            from_balanced_with(m, ONE, Family::PurelyBalanced(r))
        }
        Canonical::Hr(r) => {
            if !(r > 0.0 && r.is_finite()) {
                return bad("h_r needs r > 0");
            }
            from_balanced_with(exceptional_mobius(r), ONE, Family::Exceptional(r))
        }
        Canonical::Royal => Ok(GeodesicMap {
            family: Family::Royal,
            omega: ONE,
            upsilon: minus_id,
            k2: Blaschke { theta: ONE, zeros: vec![ZERO, ZERO] },
            transport: Mobius::identity(),
        }),
        Canonical::Flat(beta) => {
            if !(beta.norm() < 1.0) {
                return bad("f_beta needs |beta| < 1");
            }
            let w = ONE;
            let c = w * (2.0 - w.conj() * beta.conj()) / (2.0 - w * beta);
            let alpha = beta / (2.0 * w - beta.conj());
            Ok(GeodesicMap {
                family: Family::Flat(beta),
                omega: w,
                upsilon: Mobius { c: c / c.norm(), a: alpha },
                k2: Blaschke { theta: ONE, zeros: vec![ZERO] },
                transport: Mobius::identity(),
            })
        }
    }
}

/// The balanced geodesic `z -> (z + m(z), z m(z))`; `m` needs a fixed
/// point on the circle.
pub fn from_balanced(m: &Mobius) -> Result<GeodesicMap> {
    if m.dist(&Mobius::identity()) < 1e-14 {
        return canonical_geodesic(Canonical::Royal);
    }
    let fps: Vec<C> = m.fixed_points().into_iter().filter(|z| (z.norm() - 1.0).abs() < 1e-6).collect();
    let Some(z0) = fps.first() else {
        return Err(Error::InvalidParameter("automorphism has no fixed point on the circle".into()));
    };
    from_balanced_with(*m, (z0 / z0.norm()).conj(), Family::General)
}

fn from_balanced_with(m: Mobius, omega: C, family: Family) -> Result<GeodesicMap> {
    // k(0) = (m(0), 0), k'(0) = (1 + m'(0), m(0))
    let m0 = m.apply(ZERO);
    let s = PointG::new(m0, ZERO);
    let v = [ONE + m.derivative(ZERO), m0];
    let (d1, d2) = phi_partials(omega, &s)?;
    let upsilon = Mobius::from_jet(phi_point(omega, &s)?, d1 * v[0] + d2 * v[1])?;
    Ok(GeodesicMap {
        family,
        omega,
        upsilon,
        k2: Blaschke { theta: m.c, zeros: vec![ZERO, m.a] },
        transport: Mobius::identity(),
    })
}

pub fn geodesic_eval(k: &GeodesicMap, z: C) -> Result<PointG> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter("parameter outside the closed disc".into()));
    }
    Ok(k.eval(z))
}

pub fn aut_apply_point(m: &Mobius, s: &PointG) -> Result<PointG> {
    aut_point(m, s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoyalNode {
    pub location: C,
    pub point: PointG,
    /// Order of the zero of `(k¹)² - 4k²`.
    pub order: usize,
    pub boundary: bool,
}

impl RoyalNode {
    /// Interior nodes count their order, boundary nodes half of it.
    pub fn multiplicity(&self) -> f64 {
        if self.boundary {
            self.order as f64 / 2.0
        } else {
            self.order as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoyalSignature {
    pub nodes: Vec<RoyalNode>,
    pub identically_royal: bool,
    pub degree: usize,
}

impl RoyalSignature {
    pub fn total_multiplicity(&self) -> f64 {
        self.nodes.iter().map(|n| n.multiplicity()).sum()
    }
}

pub const NODE_BOUNDARY_TOL: f64 = 1e-7;

pub fn royal_signature(k: &GeodesicMap) -> RoyalSignature {
    let c = k.curve();
    let r = c.k1.mul(&c.k1).sub(&c.k2.mul(&c.k0).scale(C::new(4.0, 0.0)));
    let scale = c.k1.norm().powi(2) + c.k2.norm() * c.k0.norm();
    let degree = k.degree();
    if r.norm() <= 1e-12 * scale.max(1.0) {
        return RoyalSignature { nodes: vec![], identically_royal: true, degree };
    }
    let r = r.trimmed(1e-13);
    let nodes = root_clusters(&r, 1e-7)
        .into_iter()
        .filter(|cl| cl.center.norm() <= 1.0 + NODE_BOUNDARY_TOL)
        .map(|cl| {
            let boundary = (cl.center.norm() - 1.0).abs() <= NODE_BOUNDARY_TOL;
            let location = if boundary { cl.center / cl.center.norm() } else { cl.center };
            RoyalNode { location, point: c.eval(location), order: cl.order, boundary }
        })
        .collect();
    RoyalSignature { nodes, identically_royal: false, degree }
}

pub fn geometric_classify(sig: &RoyalSignature) -> Result<DatumType> {
    if sig.identically_royal {
        return Ok(DatumType::Royal);
    }
    if (sig.total_multiplicity() - sig.degree as f64).abs() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "total multiplicity {} differs from degree {}",
            sig.total_multiplicity(),
            sig.degree
        )));
    }
    let inner = sig.nodes.iter().filter(|n| !n.boundary).count();
    let outer = sig.nodes.len() - inner;
    match (inner, outer) {
        (1, 0) => Ok(DatumType::Flat),
        (1, 1) => Ok(DatumType::PurelyUnbalanced),
        (0, 1) => Ok(DatumType::Exceptional),
        (0, 2) => Ok(DatumType::PurelyBalanced),
        _ => Err(Error::Inconsistent(format!("{inner} interior and {outer} boundary nodes"))),
    }
}

/// `max ||ρ(ρ(s)) - ρ(s)||` for the retraction `ρ = k ∘ υ⁻¹ ∘ Φ_ω`.
pub fn retraction_residual(k: &GeodesicMap, samples: &[PointG]) -> Result<f64> {
    let (w, ui) = (k.effective_omega(), k.effective_upsilon().inverse());
    let curve = k.curve();
    let retract = |s: &PointG| -> Result<PointG> { Ok(curve.eval(ui.apply(phi_point(w, s)?))) };
    let mut worst: f64 = 0.0;
    for s in samples {
        let once = retract(s)?;
        let twice = retract(&once)?;
        worst = worst.max(once.dist(&twice));
    }
    Ok(worst)
}

/// Recover `m1, m2` with `k = (m1 + m2, m1 m2)` by continuing the two
/// roots of the lift along rays from a base point.
pub fn balanced_factorization(k: &GeodesicMap) -> Result<(Mobius, Mobius)> {
    let curve = k.curve();
    let sig = royal_signature(k);
    if sig.identically_royal {
        let h = |z: C| 0.5 * curve.eval(z).s1;
        let m = mobius_through(h(ZERO), C::new(0.5, 0.0), h(C::new(0.5, 0.0)))?;
        return Ok((m, m));
    }
    let bases = [ZERO, C::new(0.3, 0.0), C::new(0.0, 0.3), C::new(-0.3, 0.0), C::new(0.0, -0.3)];
    let base = bases
        .iter()
        .copied()
        .find(|b| {
            let (x, y) = lift_unordered(&curve.eval(*b));
            (x - y).norm() > 1e-4
        })
        .ok_or_else(|| Error::Inconsistent("no separated base point".into()))?;
    let start = lift_unordered(&curve.eval(base));
    let follow = |target: C| -> (C, C) {
        let steps = 64;
        let mut cur = start;
        for j in 1..=steps {
            let z = base + (target - base) * (j as f64 / steps as f64);
            let (x, y) = lift_unordered(&curve.eval(z));
            cur = if (x - cur.0).norm() + (y - cur.1).norm() <= (y - cur.0).norm() + (x - cur.1).norm() {
                (x, y)
            } else {
                (y, x)
            };
        }
        cur
    };
    let probe = base + C::new(0.0, 0.4) * if base == ZERO { ONE } else { base / base.norm() };
    let p = follow(probe);
    let m1 = mobius_through(start.0, probe - base, p.0).map(|m| m.compose(&Mobius::blaschke(base).inverse()).compose(&Mobius::identity()));
    let m1 = m1.and_then(|_| mobius_between(base, start.0, probe, p.0))?;
    let m2 = mobius_between(base, start.1, probe, p.1)?;
    for z in [C::new(0.5, 0.2), C::new(-0.4, 0.5), C::new(0.1, -0.7)] {
        let s = curve.eval(z);
        let (a, b) = (m1.apply(z), m2.apply(z));
        if (a + b - s.s1).norm() > 1e-8 || (a * b - s.s2).norm() > 1e-8 {
            return Err(Error::Inconsistent("map is not balanced".into()));
        }
    }
    Ok((m1, m2))
}

/// Automorphism with `m(0) = u0` and `m(z1) = w` (unimodular check).
fn mobius_through(u0: C, z1: C, w: C) -> Result<Mobius> {
    let c = (u0 - w) / (z1 * (w * u0.conj() - ONE));
    if (c.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::Inconsistent("values do not come from an automorphism".into()));
    }
    let c = c / c.norm();
    Ok(Mobius { c, a: -c.conj() * u0 })
}

/// Automorphism with `m(z0) = u0` and `m(z1) = u1`.
fn mobius_between(z0: C, u0: C, z1: C, u1: C) -> Result<Mobius> {
    // m = n ∘ B_{z0}: n(0) = u0, n(B_{z0}(z1)) = u1
    let b = Mobius::blaschke(z0);
    let n = mobius_through(u0, b.apply(z1), u1)?;
    Ok(n.compose(&b))
}

/// Parameters `z` where `k(z)` has real coordinates, with the images.
/// The exceptional family is real on the arc of `|z - (1 - i r)| = r`
/// inside the disc; the other families on `[-1, 1]`.
pub fn real_slice(p: Canonical, n: usize) -> Result<Vec<(C, PointG)>> {
    let k = canonical_geodesic(p)?;
    let n = n.max(2);
    let curve = k.curve();
    let params: Vec<C> = match p {
        Canonical::Hr(r) => {
            let (a, b) = (0.5 * std::f64::consts::PI, 1.5 * std::f64::consts::PI - 2.0 * r.atan());
            (0..n)
                .map(|j| C::new(1.0, -r) + r * crate::base::cis(a + (b - a) * j as f64 / (n - 1) as f64))
                .collect()
        }
        _ => (0..n).map(|j| C::new(-1.0 + 2.0 * j as f64 / (n - 1) as f64, 0.0)).collect(),
    };
    Ok(params.into_iter().map(|z| (z, curve.eval(z))).collect())
}

/// `interior`, `royal`, `boundary` or `royal_boundary`.
pub fn region_tag(s: &PointG) -> &'static str {
    use crate::base::{region_membership, Region, BOUNDARY_TOL};
    let royal = region_membership(s, Region::RoyalClosure, BOUNDARY_TOL);
    let inside = s.in_g();
    match (royal, inside) {
        (true, true) => "royal",
        (true, false) => "royal_boundary",
        (false, true) => "interior",
        (false, false) => "boundary",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{cis, lift, region_membership, sym_pi, Region};

    fn kr(r: f64, z: C) -> PointG {
        PointG::new(2.0 * (1.0 - r) * z / (1.0 - r * z), z * (z - r) / (1.0 - r * z))
    }

    fn gr(r: f64, z: C) -> PointG {
        let b = (z - r) / (1.0 - r * z);
        PointG::new(z + b, z * b)
    }

    fn hr(r: f64, z: C) -> PointG {
        let m = ((r - I) * z + I) / (r + I - I * z);
        PointG::new(z + m, z * m)
    }

    fn samples() -> Vec<C> {
        (0..40).map(|j| (0.05 + 0.9 * (j % 5) as f64 / 4.0) * cis(1.3 * j as f64)).collect()
    }

    #[test]
    fn canonical_families_match_closed_forms() {
        for r in [0.1, 0.5, 0.83] {
            let k = canonical_geodesic(Canonical::Kr(r)).unwrap();
            let g = canonical_geodesic(Canonical::Gr(r)).unwrap();
            for z in samples() {
                assert!(k.eval(z).dist(&kr(r, z)) < 1e-12);
                assert!(g.eval(z).dist(&gr(r, z)) < 1e-12);
            }
        }
        for r in [0.2, 1.0, 3.5] {
            let h = canonical_geodesic(Canonical::Hr(r)).unwrap();
            for z in samples() {
                assert!(h.eval(z).dist(&hr(r, z)) < 1e-12, "h_{r} at {z}");
            }
            assert!(h.eval(ONE).dist(&PointG::real(2.0, 1.0)) < 1e-12);
        }
        let royal = canonical_geodesic(Canonical::Royal).unwrap();
        assert!(royal.eval(C::new(0.3, 0.0)).dist(&PointG::real(0.6, 0.09)) < 1e-15);
        let beta = C::new(0.3, -0.2);
        let f = canonical_geodesic(Canonical::Flat(beta)).unwrap();
        for z in samples() {
            assert!(f.eval(z).dist(&PointG::new(beta + beta.conj() * z, z)) < 1e-13);
        }
        let k = canonical_geodesic(Canonical::Kr(0.5)).unwrap();
        assert!(k.eval(C::new(0.4, 0.0)).dist(&PointG::real(0.5, -0.05)) < 1e-15);
        assert!(k.eval(ZERO).dist(&PointG::real(0.0, 0.0)) < 1e-15);
        assert!(k.eval(ONE).dist(&PointG::real(2.0, 1.0)) < 1e-14);
        let g = canonical_geodesic(Canonical::Gr(0.5)).unwrap();
        assert!(g.eval(-ONE).dist(&PointG::real(-2.0, 1.0)) < 1e-14);
        assert!(canonical_geodesic(Canonical::Kr(1.0)).is_err());
        assert!(canonical_geodesic(Canonical::Hr(-1.0)).is_err());
    }

    #[test]
    fn normal_form_invariants() {
        let all = [
            Canonical::Kr(0.3),
            Canonical::Gr(0.6),
            Canonical::Hr(1.0),
            Canonical::Royal,
            Canonical::Flat(C::new(0.1, 0.5)),
        ];
        let m = Mobius::new(cis(0.4), C::new(0.2, -0.5)).unwrap();
        for p in all {
            let k = canonical_geodesic(p).unwrap();
            assert!(k.normal_form_residual() < 1e-12, "{p:?}");
            assert!(k.boundary_residual(256) < 1e-10, "{p:?}");
            let t = aut_geodesic(&m, &k);
            assert!(t.normal_form_residual() < 1e-11, "{p:?} transported");
            assert!(t.boundary_residual(256) < 1e-9, "{p:?} transported");
            for z in samples() {
                let want = aut_point(&m, &k.eval(z)).unwrap();
                assert!(t.eval(z).dist(&want) < 1e-12);
                assert!(region_membership(&t.eval(z), Region::G, 0.0));
            }
            assert_eq!(k.degree() == 1, matches!(k.family, Family::Flat(_)));
        }
    }

    #[test]
    fn aut_matches_lift_oracle() {
        let m = Mobius::blaschke(C::new(0.5, 0.0));
        let s = aut_point(&m, &PointG::real(0.0, 0.0)).unwrap();
        assert!(s.dist(&PointG::real(-1.0, 0.25)) < 1e-15);
        let m = Mobius::new(cis(2.0), C::new(-0.3, 0.6)).unwrap();
        for z in samples() {
            let w = z * cis(0.5) * 0.7;
            let s = sym_pi(z, w);
            let want = sym_pi(m.apply(z), m.apply(w));
            assert!(aut_point(&m, &s).unwrap().dist(&want) < 1e-12);
            // tangent action against a difference quotient along z
            let h = 1e-6;
            let v = [ONE, w]; // d/dz of (z + w, z w)
            let Datum::Infinitesimal(_, got) = aut_datum(&m, &Datum::Infinitesimal(s, v)).unwrap() else { unreachable!() };
            let a = aut_point(&m, &sym_pi(z + h, w)).unwrap();
            let b = aut_point(&m, &sym_pi(z - h, w)).unwrap();
            assert!((got[0] - (a.s1 - b.s1) / (2.0 * h)).norm() < 1e-7);
            assert!((got[1] - (a.s2 - b.s2) / (2.0 * h)).norm() < 1e-7);
        }
        // royal variety is invariant
        let royal = canonical_geodesic(Canonical::Royal).unwrap();
        for z in samples() {
            let s = aut_point(&m, &royal.eval(z)).unwrap();
            assert!((s.s1 * s.s1 - 4.0 * s.s2).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugation_identity() {
        let m = Mobius::new(cis(-1.1), C::new(0.4, 0.35)).unwrap();
        let m1 = conjugating_mobius(&m);
        for (j, z) in samples().into_iter().enumerate() {
            let s = sym_pi(z, 0.6 * cis(0.3 * j as f64));
            let w = cis(0.77 * j as f64);
            let lhs = phi_point(w, &aut_point(&m, &s).unwrap()).unwrap();
            let rhs = m1.apply(phi_point(m.reflect().inverse().apply(w), &s).unwrap());
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn royal_signatures_of_families() {
        let sig = royal_signature(&canonical_geodesic(Canonical::Kr(0.4)).unwrap());
        assert_eq!(sig.nodes.len(), 2);
        assert!(sig.nodes[0].location.norm() < 1e-12 && !sig.nodes[0].boundary && sig.nodes[0].order == 1);
        assert!((sig.nodes[1].location - ONE).norm() < 1e-9 && sig.nodes[1].boundary && sig.nodes[1].order == 2);
        assert_eq!(geometric_classify(&sig).unwrap(), DatumType::PurelyUnbalanced);

        let sig = royal_signature(&canonical_geodesic(Canonical::Gr(0.4)).unwrap());
        assert_eq!(sig.nodes.len(), 2);
        assert!(sig.nodes.iter().all(|n| n.boundary && n.order == 2));
        assert_eq!(geometric_classify(&sig).unwrap(), DatumType::PurelyBalanced);

        for r in [0.3, 1.0, 4.0] {
            let sig = royal_signature(&canonical_geodesic(Canonical::Hr(r)).unwrap());
            assert_eq!(sig.nodes.len(), 1, "h_{r}: {sig:?}");
            let n = sig.nodes[0];
            assert!(n.boundary && n.order == 4 && (n.location - ONE).norm() < 1e-8);
            assert!(n.point.dist(&PointG::real(2.0, 1.0)) < 1e-8);
            assert_eq!(geometric_classify(&sig).unwrap(), DatumType::Exceptional);
        }

        let sig = royal_signature(&canonical_geodesic(Canonical::Royal).unwrap());
        assert!(sig.identically_royal);
        assert_eq!(geometric_classify(&sig).unwrap(), DatumType::Royal);

        let sig = royal_signature(&canonical_geodesic(Canonical::Flat(C::new(0.3, 0.4))).unwrap());
        assert_eq!(sig.nodes.len(), 1);
        assert!(!sig.nodes[0].boundary);
        assert_eq!(geometric_classify(&sig).unwrap(), DatumType::Flat);
    }

    #[test]
    fn retractions_are_idempotent() {
        let pts: Vec<PointG> = samples().iter().map(|z| sym_pi(*z, 0.5 * z.conj() + 0.1)).collect();
        for p in [Canonical::Flat(ZERO), Canonical::Royal, Canonical::Kr(0.5), Canonical::Hr(2.0)] {
            let k = canonical_geodesic(p).unwrap();
            assert!(retraction_residual(&k, &pts).unwrap() < 1e-10, "{p:?}");
            let on: Vec<PointG> = samples().iter().map(|z| k.eval(*z)).collect();
            let (w, ui) = (k.effective_omega(), k.effective_upsilon().inverse());
            for s in on {
                let back = k.eval(ui.apply(phi_point(w, &s).unwrap()));
                assert!(back.dist(&s) < 1e-9);
            }
        }
    }

    #[test]
    fn balanced_factorizations() {
        for p in [Canonical::Gr(0.5), Canonical::Hr(1.0), Canonical::Royal] {
            let k = canonical_geodesic(p).unwrap();
            let (m1, m2) = balanced_factorization(&k).unwrap();
            for z in samples() {
                let s = k.eval(z);
                assert!((m1.apply(z) + m2.apply(z) - s.s1).norm() < 1e-8);
                assert!((m1.apply(z) * m2.apply(z) - s.s2).norm() < 1e-8);
            }
        }
        let k = canonical_geodesic(Canonical::Kr(0.5)).unwrap();
        assert!(balanced_factorization(&k).is_err());
        let _ = lift(&PointG::real(0.0, 0.0));
    }

    #[test]
    fn real_slices_are_real() {
        for p in [Canonical::Kr(0.5), Canonical::Gr(0.3), Canonical::Hr(0.7), Canonical::Royal, Canonical::Flat(C::new(0.2, 0.0))] {
            let pts = real_slice(p, 64).unwrap();
            assert_eq!(pts.len(), 64);
            for (z, s) in pts {
                assert!(z.norm() <= 1.0 + 1e-12);
                assert!(s.s1.im.abs() < 1e-12 && s.s2.im.abs() < 1e-12, "{p:?} {s:?}");
            }
        }
        // k_{1/2} traces p = s(3s - 2) / (2(s + 2))
        for (_, s) in real_slice(Canonical::Kr(0.5), 33).unwrap() {
            let x = s.s1.re;
            assert!((s.s2.re - x * (3.0 * x - 2.0) / (2.0 * (x + 2.0))).abs() < 1e-12);
        }
        assert_eq!(region_tag(&PointG::real(0.0, 0.0)), "royal");
        assert_eq!(region_tag(&PointG::real(2.0, 1.0)), "royal_boundary");
        assert_eq!(region_tag(&PointG::real(0.0, -1.0)), "boundary");
        assert_eq!(region_tag(&PointG::real(0.5, 0.1)), "interior");
    }

    #[test]
    fn balanced_from_automorphism() {
        let m = Mobius::new(cis(0.9), C::new(0.5, 0.3)).unwrap();
        let k = from_balanced(&m).unwrap();
        for z in samples() {
            let want = PointG::new(z + m.apply(z), z * m.apply(z));
            assert!(k.eval(z).dist(&want) < 1e-12);
        }
        assert!(from_balanced(&Mobius::new(cis(2.0), C::new(0.05, 0.0)).unwrap()).is_err());
    }
}
