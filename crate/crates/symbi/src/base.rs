//! Value types, disc and Möbius algebra, symmetrization and region tests.

use crate::{Error, Result};
pub use num_complex::Complex64 as C;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

/// Default tolerance for the boundary strata.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[inline]
pub fn cis(t: f64) -> C {
    C::new(t.cos(), t.sin())
}

/// A point `(s1, s2)` of C², the sum and product coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointG {
    pub s1: C,
    pub s2: C,
}

impl PointG {
    pub const fn new(s1: C, s2: C) -> Self {
        PointG { s1, s2 }
    }

    pub fn real(s1: f64, s2: f64) -> Self {
        PointG::new(C::new(s1, 0.0), C::new(s2, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.s1.is_finite() && self.s2.is_finite()
    }

    /// The strict criterion `|s1 - conj(s1) s2| < 1 - |s2|^2`.
    pub fn in_g(&self) -> bool {
        self.is_finite() && (self.s1 - self.s1.conj() * self.s2).norm() < 1.0 - self.s2.norm_sqr()
    }

    pub fn dist(&self, other: &PointG) -> f64 {
        ((self.s1 - other.s1).norm_sqr() + (self.s2 - other.s2).norm_sqr()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    G,
    GammaClosure,
    DistinguishedBoundary,
    Royal,
    RoyalClosure,
    FlatLeaf(C),
}

pub fn region_membership(s: &PointG, region: Region, tol: f64) -> bool {
    if !s.is_finite() {
        return false;
    }
    let (s1, s2) = (s.s1, s.s2);
    match region {
        Region::G => s.in_g(),
        Region::GammaClosure => {
            s1.norm() <= 2.0 + tol
                && (s1 - s1.conj() * s2).norm() <= 1.0 - s2.norm_sqr() + tol
        }
        Region::DistinguishedBoundary => {
            s1.norm() <= 2.0 + tol
                && (s2.norm() - 1.0).abs() <= tol
                && (s1 - s1.conj() * s2).norm() <= tol
        }
        Region::Royal => (s1 * s1 - 4.0 * s2).norm() <= tol && s2.norm() < 1.0,
        Region::RoyalClosure => (s1 * s1 - 4.0 * s2).norm() <= tol && s2.norm() <= 1.0 + tol,
        Region::FlatLeaf(beta) => {
            (s1 - beta - beta.conj() * s2).norm() <= tol && s2.norm() < 1.0
        }
    }
}

/// `π(λ1, λ2) = (λ1 + λ2, λ1 λ2)`.
pub fn sym_pi(l1: C, l2: C) -> PointG {
    PointG::new(l1 + l2, l1 * l2)
}

/// The two roots of `λ² - s1 λ + s2`, ordered lexicographically by
/// (real, imaginary). The larger root is formed first and the other is
/// recovered as `s2 / root`, which keeps near-double roots accurate.
pub fn lift(s: &PointG) -> (C, C) {
    let (a, b) = lift_unordered(s);
    if (a.re, a.im) <= (b.re, b.im) {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn lift_unordered(s: &PointG) -> (C, C) {
    let sq = (s.s1 * s.s1 - 4.0 * s.s2).sqrt();
    let big = if (s.s1 + sq).norm() >= (s.s1 - sq).norm() {
        0.5 * (s.s1 + sq)
    } else {
        0.5 * (s.s1 - sq)
    };
    if big == ZERO {
        return (ZERO, ZERO);
    }
    (big, s.s2 / big)
}

/// The parameter of the flat leaf through `s`.
pub fn flat_beta(s: &PointG) -> Result<C> {
    if !s.in_g() {
        return Err(Error::NotInG);
    }
    Ok((s.s1 - s.s1.conj() * s.s2) / (1.0 - s.s2.norm_sqr()))
}

/// A datum in `G`: two points, or a point with a tangent vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Datum {
    Discrete(PointG, PointG),
    Infinitesimal(PointG, [C; 2]),
}

impl Datum {
    pub fn base(&self) -> PointG {
        match *self {
            Datum::Discrete(p, _) | Datum::Infinitesimal(p, _) => p,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        match self {
            Datum::Discrete(p, q) => p.dist(q) > 0.0,
            Datum::Infinitesimal(_, v) => v[0] != ZERO || v[1] != ZERO,
        }
    }

    /// Errors unless the datum is nondegenerate with base points in `G`.
    pub fn check(&self) -> Result<()> {
        match self {
            Datum::Discrete(p, q) => {
                if !p.in_g() || !q.in_g() {
                    return Err(Error::NotInG);
                }
            }
            Datum::Infinitesimal(p, v) => {
                if !p.in_g() {
                    return Err(Error::NotInG);
                }
                if !(v[0].is_finite() && v[1].is_finite()) {
                    return Err(Error::Degenerate);
                }
            }
        }
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        Ok(())
    }
}

/// A datum in the unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscDatum {
    Discrete(C, C),
    Infinitesimal(C, C),
}

/// Pseudohyperbolic modulus of a disc datum (Poincaré length for tangents).
pub fn disc_modulus(z: &DiscDatum) -> Result<f64> {
    match *z {
        DiscDatum::Discrete(z1, z2) => {
            if z1 == z2 {
                return Err(Error::Degenerate);
            }
            if z1.norm() >= 1.0 || z2.norm() >= 1.0 {
                return Err(Error::InvalidParameter("base point outside the disc".into()));
            }
            Ok(pseudo_hyperbolic(z1, z2))
        }
        DiscDatum::Infinitesimal(z, c) => {
            if c == ZERO {
                return Err(Error::Degenerate);
            }
            if z.norm() >= 1.0 {
                return Err(Error::InvalidParameter("base point outside the disc".into()));
            }
            Ok(c.norm() / (1.0 - z.norm_sqr()))
        }
    }
}

#[inline]
pub fn pseudo_hyperbolic(z1: C, z2: C) -> f64 {
    ((z1 - z2) / (ONE - z2.conj() * z1)).norm()
}

/// Blaschke factor `B_a(z) = (z - a) / (1 - conj(a) z)`.
#[inline]
pub fn blaschke(a: C, z: C) -> C {
    (z - a) / (ONE - a.conj() * z)
}

/// A disc automorphism `z -> c (z - a) / (1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub c: C,
    pub a: C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPoints {
    Identity,
    /// One fixed point, in the open disc.
    Interior,
    /// Exactly one fixed point on the circle.
    OneOnCircle,
    /// Two fixed points on the circle.
    TwoOnCircle,
}

impl Mobius {
    pub fn new(c: C, a: C) -> Result<Self> {
        if !(c.is_finite() && a.is_finite()) || (c.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("c must be unimodular".into()));
        }
        if a.norm() >= 1.0 {
            return Err(Error::InvalidParameter("a must lie in the open disc".into()));
        }
        Ok(Mobius { c: c / c.norm(), a })
    }

    pub const fn identity() -> Self {
        Mobius { c: ONE, a: ZERO }
    }

    pub fn rotation(c: C) -> Self {
        Mobius { c: c / c.norm(), a: ZERO }
    }

    pub fn blaschke(a: C) -> Self {
        Mobius { c: ONE, a }
    }

    #[inline]
    pub fn apply(&self, z: C) -> C {
        self.c * (z - self.a) / (ONE - self.a.conj() * z)
    }

    #[inline]
    pub fn derivative(&self, z: C) -> C {
        let d = ONE - self.a.conj() * z;
        self.c * (1.0 - self.a.norm_sqr()) / (d * d)
    }

    /// Push a disc datum forward; moduli are preserved.
    pub fn apply_datum(&self, z: &DiscDatum) -> DiscDatum {
        match *z {
            DiscDatum::Discrete(z1, z2) => DiscDatum::Discrete(self.apply(z1), self.apply(z2)),
            DiscDatum::Infinitesimal(z, c) => {
                DiscDatum::Infinitesimal(self.apply(z), self.derivative(z) * c)
            }
        }
    }

    pub fn inverse(&self) -> Self {
        Mobius { c: self.c.conj(), a: -self.c * self.a }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Self {
        // [[c, -c a], [-conj(a), 1]] representation, then renormalize
        let (c1, a1) = (self.c, self.a);
        let (c2, a2) = (other.c, other.a);
        let p = c1 * c2 + c1 * a1 * a2.conj();
        let q = -c1 * c2 * a2 - c1 * a1;
        let s = a1.conj() * c2 * a2 + ONE;
        let c = p / s;
        Mobius { c: c / c.norm(), a: -q / p }
    }

    /// `m∨(z) = conj(m(conj(z)))`.
    pub fn reflect(&self) -> Self {
        Mobius { c: self.c.conj(), a: self.a.conj() }
    }

    /// The automorphism with `m(0) = u0` and `m'(0) = u1`; `u1` only
    /// contributes its argument.
    pub fn from_jet(u0: C, u1: C) -> Result<Self> {
        if u0.norm() >= 1.0 || u1 == ZERO {
            return Err(Error::InvalidParameter("jet does not define an automorphism".into()));
        }
        let c = u1 / u1.norm();
        Ok(Mobius { c, a: -u0 / c })
    }

    /// Fixed points of `c B_a` in the Riemann sphere that lie in the
    /// closed disc. Empty for the identity.
    pub fn fixed_points(&self) -> Vec<C> {
        // conj(a) z^2 + (c - 1) z - c a = 0
        let (qa, qb, qc) = (self.a.conj(), self.c - ONE, -self.c * self.a);
        let mut out = Vec::new();
        if qa.norm() < 1e-300 {
            if qb.norm() > 1e-300 {
                out.push(-qc / qb);
            }
        } else {
            let sq = (qb * qb - 4.0 * qa * qc).sqrt();
            let big = if (-qb + sq).norm() >= (-qb - sq).norm() { -qb + sq } else { -qb - sq };
            let r1 = big / (2.0 * qa);
            let r2 = if r1.norm() > 0.0 { qc / (qa * r1) } else { ZERO };
            out.push(r1);
            out.push(r2);
        }
        out.retain(|z| z.norm() <= 1.0 + 1e-9);
        out
    }

    /// Classify by the criterion `|a|` against `|1 - c| / 2`.
    pub fn fixed_point_kind(&self, tol: f64) -> FixedPoints {
        let half = 0.5 * (ONE - self.c).norm();
        let am = self.a.norm();
        if am <= tol && half <= tol {
            FixedPoints::Identity
        } else if (am - half).abs() <= tol {
            FixedPoints::OneOnCircle
        } else if am > half {
            FixedPoints::TwoOnCircle
        } else {
            FixedPoints::Interior
        }
    }

    pub fn dist(&self, other: &Mobius) -> f64 {
        (self.c - other.c).norm() + (self.a - other.a).norm()
    }
}

/// Free-function form of [`Mobius::reflect`].
pub fn mobius_reflect(m: &Mobius) -> Mobius {
    m.reflect()
}
