//! Symmetric sets in the bidisc with the symmetric extension property,
//! stored by their defining data, and the correspondence with their
//! images under `π(z, w) = (z + w, z w)`.

use crate::base::{lift_unordered, sym_pi, Mobius, PointG, C, ZERO};
use crate::geodesics::{aut_point, canonical_geodesic, from_balanced, Canonical};
use crate::variety::{family_polynomial, pr_quad, variety_polynomial, FamilyKind, QuadPoly2};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymKind {
    /// `{λ, t(λ)}`.
    PointPair((C, C)),
    FullBidisc,
    /// `D ∪ t(D)` with `D = {(z, m(z))}`.
    BalancedUnion(Mobius),
    /// `z + w = β + conj(β) z w`.
    VBeta(C),
    /// The diagonal together with `V_β`.
    DiagonalUnionVBeta(C),
    /// `H_r(m(z), m(w)) = 0`.
    Vmr(Mobius, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiImage {
    Singleton,
    G,
    BalancedTypeGeodesic,
    FlatGeodesic,
    RoyalUnionFlat,
    PurelyUnbalancedGeodesic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymSet {
    pub kind: SymKind,
    /// Defining polynomial of `π(V)` where it is a degree-2 geodesic.
    relation: Option<QuadPoly2>,
}

pub fn build_sym_set(kind: SymKind) -> Result<SymSet> {
    let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
    let relation = match kind {
        SymKind::PointPair((a, b)) => {
            if !(a.norm() < 1.0 && b.norm() < 1.0) {
                return bad("point pair must lie in the open bidisc");
            }
            None
        }
        SymKind::FullBidisc => None,
        SymKind::BalancedUnion(m) => {
            // the closure of {(z, m(z))} must meet the boundary diagonal
            if m.a.norm() < 0.5 * (1.0 - m.c).norm() - 1e-12 {
                return bad("automorphism has no fixed point on the circle");
            }
            Some(variety_polynomial(&from_balanced(&m)?)?)
        }
        SymKind::VBeta(b) | SymKind::DiagonalUnionVBeta(b) => {
            if !(b.norm() < 1.0) {
                return bad("beta must lie in the disc");
            }
            None
        }
        SymKind::Vmr(_, r) => {
            if !(r > 0.0 && r < 1.0) {
                return bad("V_{m,r} needs 0 < r < 1");
            }
            None
        }
    };
    Ok(SymSet { kind, relation })
}

fn in_bidisc(l: (C, C)) -> bool {
    l.0.norm() < 1.0 && l.1.norm() < 1.0
}

fn vbeta_rel(b: C, z: C, w: C) -> C {
    z + w - b - b.conj() * z * w
}

pub fn sym_member(v: &SymSet, l: (C, C), tol: f64) -> bool {
    if !in_bidisc(l) {
        return false;
    }
    let (z, w) = l;
    match v.kind {
        SymKind::PointPair((a, b)) => {
            let d = |x: C, y: C| (x - z).norm().max((y - w).norm());
            d(a, b) <= tol || d(b, a) <= tol
        }
        SymKind::FullBidisc => true,
        SymKind::BalancedUnion(m) => (w - m.apply(z)).norm() <= tol || (z - m.apply(w)).norm() <= tol,
        SymKind::VBeta(b) => vbeta_rel(b, z, w).norm() <= tol,
        SymKind::DiagonalUnionVBeta(b) => (z - w).norm() <= tol || vbeta_rel(b, z, w).norm() <= tol,
        SymKind::Vmr(m, r) => match family_polynomial(FamilyKind::Hr(r)) {
            Ok(h) => h.eval(m.apply(z), m.apply(w)).norm() <= tol,
            Err(_) => false,
        },
    }
}

pub fn pi_image_kind(v: &SymSet) -> PiImage {
    match v.kind {
        SymKind::PointPair(_) => PiImage::Singleton,
        SymKind::FullBidisc => PiImage::G,
        SymKind::BalancedUnion(_) => PiImage::BalancedTypeGeodesic,
        SymKind::VBeta(_) => PiImage::FlatGeodesic,
        SymKind::DiagonalUnionVBeta(_) => PiImage::RoyalUnionFlat,
        SymKind::Vmr(..) => PiImage::PurelyUnbalancedGeodesic,
    }
}

/// How far `s` is from satisfying the defining relation of `π(V)`.
pub fn g_side_residual(v: &SymSet, s: &PointG) -> Result<f64> {
    let flat = |b: C| (s.s1 - b - b.conj() * s.s2).norm();
    let royal = (s.s1 * s.s1 - 4.0 * s.s2).norm();
    Ok(match v.kind {
        SymKind::PointPair((a, b)) => s.dist(&sym_pi(a, b)),
        SymKind::FullBidisc => {
            if s.in_g() {
                0.0
            } else {
                f64::INFINITY
            }
        }
        SymKind::BalancedUnion(_) => v.relation.as_ref().map_or(f64::INFINITY, |p| p.eval(s).norm()),
        SymKind::VBeta(b) => flat(b),
        SymKind::DiagonalUnionVBeta(b) => flat(b).min(royal),
        SymKind::Vmr(m, r) => pr_quad(r).eval(&aut_point(&m, s)?).norm(),
    })
}

/// Members of `V`, reproducible from the seed; transposed copies are
/// interleaved so both halves of symmetric unions are exercised.
pub fn sample_members(v: &SymSet, n: usize, seed: u64) -> Result<Vec<(C, C)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disc = move || {
        let r = 0.95 * rng.random::<f64>().sqrt();
        C::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
    };
    let mut out = Vec::with_capacity(n);
    let kr = match v.kind {
        SymKind::Vmr(_, r) => Some(canonical_geodesic(Canonical::Kr(r))?),
        _ => None,
    };
    for j in 0..n {
        let z = disc();
        let p = match v.kind {
            SymKind::PointPair((a, b)) => (a, b),
            SymKind::FullBidisc => (z, disc()),
            SymKind::BalancedUnion(m) => (z, m.apply(z)),
            SymKind::VBeta(b) => (z, (b - z) / (1.0 - b.conj() * z)),
            SymKind::DiagonalUnionVBeta(b) => {
                if j % 4 < 2 {
                    (z, z)
                } else {
                    (z, (b - z) / (1.0 - b.conj() * z))
                }
            }
            SymKind::Vmr(m, _) => {
                let s = kr.as_ref().map_or(PointG::new(ZERO, ZERO), |k| k.eval(z));
                let (x, y) = lift_unordered(&s);
                let mi = m.inverse();
                (mi.apply(x), mi.apply(y))
            }
        };
        out.push(if j % 2 == 1 { (p.1, p.0) } else { p });
    }
    Ok(out)
}
