//! Retract embeddings of `G`: companion matrices in the 2×2 spectral
//! ball, and linear slices of the tetrablock and the pentablock, each with
//! a left inverse `κ`.

use crate::base::{PointG, C, ONE, ZERO};
use crate::{Error, Result};
use nalgebra::Matrix2;

pub type Mat2 = Matrix2<C>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    SpectralBall,
    Tetrablock,
    Pentablock,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Embedded {
    Matrix(Mat2),
    Triple([C; 3]),
}

pub fn companion(s: &PointG) -> Mat2 {
    Mat2::new(ZERO, ONE, -s.s2, s.s1)
}

pub fn embed(s: &PointG, target: Target) -> Result<Embedded> {
    if !s.in_g() {
        return Err(Error::NotInG);
    }
    Ok(match target {
        Target::SpectralBall => Embedded::Matrix(companion(s)),
        Target::Tetrablock => Embedded::Triple([0.5 * s.s1, 0.5 * s.s1, s.s2]),
        Target::Pentablock => Embedded::Triple([ZERO, s.s1, s.s2]),
    })
}

/// `F(s)⁻¹ C(s) F(s)` for a caller-supplied invertible `F`.
pub fn embed_conjugated(s: &PointG, f: impl Fn(&PointG) -> Mat2) -> Result<Mat2> {
    if !s.in_g() {
        return Err(Error::NotInG);
    }
    let m = f(s);
    let inv = m.try_inverse().ok_or_else(|| Error::InvalidParameter("F(s) is singular".into()))?;
    Ok(inv * companion(s) * m)
}

/// `κ`: trace and determinant, `(z1 + z2, z3)`, or `(z2, z3)`.
pub fn retract_map(x: &Embedded, source: Target) -> Result<PointG> {
    match (x, source) {
        (Embedded::Matrix(a), Target::SpectralBall) => Ok(PointG::new(a.trace(), a.determinant())),
        (Embedded::Triple(z), Target::Tetrablock) => Ok(PointG::new(z[0] + z[1], z[2])),
        (Embedded::Triple(z), Target::Pentablock) => Ok(PointG::new(z[1], z[2])),
        _ => Err(Error::InvalidParameter("value does not match the source domain".into())),
    }
}

/// Larger eigenvalue modulus, from the characteristic quadratic.
pub fn spectral_radius(a: &Mat2) -> f64 {
    let (t, d) = (a.trace(), a.determinant());
    let disc = (t * t - 4.0 * d).sqrt();
    // stable pair: larger root first, the other from the product
    let big = if (t + disc).norm() >= (t - disc).norm() { 0.5 * (t + disc) } else { 0.5 * (t - disc) };
    let small = if big.norm() > 0.0 { d / big } else { ZERO };
    big.norm().max(small.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{cis, sym_pi};

    #[test]
    fn examples() {
        let Embedded::Matrix(a) = embed(&PointG::real(0.0, 0.0), Target::SpectralBall).unwrap() else { panic!() };
        assert_eq!(a, Mat2::new(ZERO, ONE, ZERO, ZERO));
        assert_eq!(spectral_radius(&a), 0.0);
        assert_eq!(retract_map(&Embedded::Matrix(a), Target::SpectralBall).unwrap(), PointG::real(0.0, 0.0));
        let z = C::new(0.3, -0.4);
        let s = PointG::new(2.0 * z, z * z);
        assert_eq!(embed(&s, Target::Tetrablock).unwrap(), Embedded::Triple([z, z, z * z]));
        assert!((spectral_radius(&companion(&s)) - 0.5).abs() < 1e-8);
        let w = C::new(0.1, 0.5);
        assert_eq!(embed(&PointG::new(ZERO, w), Target::Pentablock).unwrap(), Embedded::Triple([ZERO, ZERO, w]));
        let t = Embedded::Triple([C::new(0.3, 0.0), C::new(0.3, 0.0), C::new(0.1, 0.0)]);
        assert!(retract_map(&t, Target::Tetrablock).unwrap().dist(&PointG::real(0.6, 0.1)) < 1e-15);
        assert_eq!(spectral_radius(&Mat2::zeros()), 0.0);
        assert!((spectral_radius(&companion(&PointG::real(0.0, -1.0))) - 1.0).abs() < 1e-15);
        assert!(embed(&PointG::real(2.0, 1.0), Target::Tetrablock).is_err());
    }

    #[test]
    fn left_inverse_and_membership() {
        for j in 0..200 {
            let (z, w) = (0.99 * cis(0.7 * j as f64) * ((j % 10) as f64 / 10.0), 0.8 * cis(-1.3 * j as f64));
            let s = sym_pi(z, w);
            for t in [Target::SpectralBall, Target::Tetrablock, Target::Pentablock] {
                let back = retract_map(&embed(&s, t).unwrap(), t).unwrap();
                assert!(back.dist(&s) < 1e-12);
            }
            let Embedded::Matrix(a) = embed(&s, Target::SpectralBall).unwrap() else { panic!() };
            assert!((spectral_radius(&a) - z.norm().max(w.norm())).abs() < 1e-9);
            let f = |s: &PointG| Mat2::new(ONE, s.s1, ZERO, ONE);
            let b = embed_conjugated(&s, f).unwrap();
            assert!(retract_map(&Embedded::Matrix(b), Target::SpectralBall).unwrap().dist(&s) < 1e-12);
        }
        // outside G the spectral radius reaches one
        let s = sym_pi(C::new(1.2, 0.0), C::new(0.1, 0.0));
        assert!(spectral_radius(&companion(&s)) >= 1.0);
    }
}
