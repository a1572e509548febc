//! Geometric identities between modules: embeddings, symmetric sets and
//! the extension devices.

use std::f64::consts::TAU;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use symbi::base::sym_pi;
use symbi::embeddings::{embed, retract_map, spectral_radius, Embedded, Target};
use symbi::extension::{herglotz_eval, FiniteMeasureT2};
use symbi::symbidisc::{build_sym_set, pi_image_kind, sym_member, PiImage, SymKind};
use symbi::PointG;

#[test]
fn every_set_kind_reports_its_image() {
    let cases = [
        (SymKind::PointPair((C::new(0.1, 0.0), C::new(0.2, 0.3))), PiImage::Singleton),
        (SymKind::FullBidisc, PiImage::G),
        (SymKind::VBeta(C::new(0.2, 0.1)), PiImage::FlatGeodesic),
        (SymKind::DiagonalUnionVBeta(C::new(0.2, 0.1)), PiImage::RoyalUnionFlat),
    ];
    for (k, want) in cases {
        assert_eq!(pi_image_kind(&build_sym_set(k).unwrap()), want);
    }
    let v = build_sym_set(SymKind::DiagonalUnionVBeta(C::new(0.0, 0.0))).unwrap();
    assert!(sym_member(&v, (C::new(0.3, 0.2), C::new(0.3, 0.2)), 1e-12));
    assert!(sym_member(&v, (C::new(0.3, 0.2), C::new(-0.3, -0.2)), 1e-12));
    assert!(!sym_member(&v, (C::new(0.3, 0.2), C::new(0.1, 0.0)), 1e-12));
}

#[test]
fn extension_is_one_at_the_origin() {
    for seed in 0..10 {
        let mu = FiniteMeasureT2::random(seed, 8);
        let g = herglotz_eval(&mu, &PointG::real(0.0, 0.0), false).unwrap();
        assert!((g - 1.0).norm() < 1e-14);
    }
}

proptest! {
    #[test]
    fn embeddings_retract(r1 in 0.0..0.95f64, t1 in 0.0..TAU, r2 in 0.0..0.95f64, t2 in 0.0..TAU) {
        let s = sym_pi(C::from_polar(r1, t1), C::from_polar(r2, t2));
        for t in [Target::SpectralBall, Target::Tetrablock, Target::Pentablock] {
            let e = embed(&s, t).unwrap();
            prop_assert!(retract_map(&e, t).unwrap().dist(&s) < 1e-12);
            if let Embedded::Matrix(a) = e {
                prop_assert!(spectral_radius(&a) < 1.0);
            }
        }
    }
}
