//! Property checks over random samples, run by the `verify` command.
//! Each check reports a name, a verdict and the worst observed error.

use crate::base::{cis, disc_modulus, sym_pi, Datum, DiscDatum, Mobius, PointG, C, ONE, ZERO};
use crate::caratheodory::{car_solve, classify_datum, phi_datum, rho, DatumType};
use crate::embeddings::{embed, retract_map, Target};
use crate::extension::{herglotz_eval, improve_map, AnnularRegion, FiniteMeasureT2};
use crate::geodesics::{
    aut_datum, aut_point, canonical_geodesic, conjugating_mobius, geometric_classify, real_slice, royal_signature,
    Canonical,
};
use crate::kobayashi::solve_kobayashi;
use crate::numrange::car_nr_oracle;
use crate::par::{self, Exec};
use crate::symbidisc::{build_sym_set, g_side_residual, sample_members, SymKind};
use crate::variety::{family_polynomial, variety_polynomial, FamilyKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    pub exec: Exec,
    /// Samples per property (per family where families are involved).
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, exec: Exec::default(), samples: 40 }
    }
}

pub fn random_disc(rng: &mut impl Rng, radius: f64) -> C {
    C::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(0.0..TAU))
}

pub fn random_mobius(rng: &mut impl Rng) -> Mobius {
    Mobius { c: cis(rng.random_range(0.0..TAU)), a: random_disc(rng, 0.8) }
}

pub const FAMILIES: [&str; 5] = ["k_r", "g_r", "h_r", "f_beta", "royal"];

/// A canonical geodesic from family `f` (index into [`FAMILIES`]) with
/// random parameter, a datum on it and the preimage datum.
pub fn family_datum(rng: &mut impl Rng, f: usize) -> (Canonical, Datum, DiscDatum) {
    let p = match f {
        0 => Canonical::Kr(rng.random_range(0.05..0.95)),
        1 => Canonical::Gr(rng.random_range(0.05..0.95)),
        2 => Canonical::Hr(rng.random_range(0.1..5.0)),
        3 => Canonical::Flat(random_disc(rng, 0.9)),
        _ => Canonical::Royal,
    };
    let k = canonical_geodesic(p).expect("parameters drawn in range").curve();
    let z1 = random_disc(rng, 0.85);
    if rng.random_bool(0.25) {
        let c = cis(rng.random_range(0.0..TAU)) * rng.random_range(0.2..1.0);
        let d = k.derivative(z1);
        (p, Datum::Infinitesimal(k.eval(z1), [d[0] * c, d[1] * c]), DiscDatum::Infinitesimal(z1, c))
    } else {
        let mut z2 = random_disc(rng, 0.85);
        while (z2 - z1).norm() < 1e-3 {
            z2 = random_disc(rng, 0.85);
        }
        (p, Datum::Discrete(k.eval(z1), k.eval(z2)), DiscDatum::Discrete(z1, z2))
    }
}

pub fn expected_type(p: &Canonical) -> DatumType {
    match p {
        Canonical::Kr(_) => DatumType::PurelyUnbalanced,
        Canonical::Gr(_) => DatumType::PurelyBalanced,
        Canonical::Hr(_) => DatumType::Exceptional,
        Canonical::Flat(_) => DatumType::Flat,
        Canonical::Royal => DatumType::Royal,
    }
}

fn seeds(opts: &SuiteOptions, salt: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..n).map(|_| rng.random()).collect()
}

/// Worst error over per-sample results; a sample error counts as infinite.
fn worst(errs: Vec<f64>) -> f64 {
    errs.into_iter().fold(0.0, |a, e| if e.is_nan() { f64::INFINITY } else { a.max(e) })
}

fn check(name: &'static str, err: f64, tol: f64) -> Check {
    Check { name, pass: err < tol, detail: format!("max error {err:.3e} (tol {tol:.0e})") }
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<Check> {
    vec![
        car_equals_kob(opts),
        classifier_agreement(opts),
        royal_census(),
        second_derivative(opts),
        variety(opts),
        covariance(opts),
        herglotz(opts),
        annulus(opts),
        numerical_range(opts),
        bidisc(opts),
        trace_k_half(),
        universality(opts),
        embeddings(opts),
    ]
}

fn car_equals_kob(opts: &SuiteOptions) -> Check {
    let n = opts.samples * FAMILIES.len();
    let errs = par::map_slice(opts.exec, &seeds(opts, 1, n), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let (_, d, z) = family_datum(&mut rng, (*s % 5) as usize);
        let car = car_solve(&d).map(|c| c.value).unwrap_or(f64::NAN);
        let solved = solve_kobayashi(&d).and_then(|k| disc_modulus(&k.zeta)).unwrap_or(f64::NAN);
        (car - disc_modulus(&z).unwrap_or(f64::NAN)).abs().max((solved - car).abs())
    });
    check("car_equals_kob", worst(errs), 1e-9)
}

fn classifier_agreement(opts: &SuiteOptions) -> Check {
    let n = opts.samples * FAMILIES.len();
    let res = par::map_slice(opts.exec, &seeds(opts, 2, n), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let (p, d, _) = family_datum(&mut rng, (*s % 5) as usize);
        let Ok(cls) = classify_datum(&d) else { return (false, false) };
        if cls.near_exceptional {
            return (true, true);
        }
        let geo = solve_kobayashi(&d).ok().and_then(|k| geometric_classify(&royal_signature(&k.map)).ok());
        (geo == Some(cls.kind) && cls.kind == expected_type(&p), false)
    });
    let flagged = res.iter().filter(|r| r.1).count();
    let bad = res.iter().filter(|r| !r.0).count();
    Check {
        name: "classifier_agreement",
        pass: bad == 0,
        detail: format!("{bad} mismatches in {n} datums, {flagged} flagged near exceptional"),
    }
}

fn royal_census() -> Check {
    let mut bad = Vec::new();
    for p in [Canonical::Kr(0.3), Canonical::Gr(0.4), Canonical::Hr(1.2), Canonical::Flat(C::new(0.2, 0.1))] {
        let k = canonical_geodesic(p).expect("valid parameters");
        let sig = royal_signature(&k);
        let mut m: Vec<(bool, f64)> = sig.nodes.iter().map(|n| (n.boundary, n.multiplicity())).collect();
        m.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want: Vec<(bool, f64)> = match p {
            Canonical::Kr(_) => vec![(false, 1.0), (true, 1.0)],
            Canonical::Gr(_) => vec![(true, 1.0), (true, 1.0)],
            Canonical::Hr(_) => vec![(true, 2.0)],
            _ => vec![(false, 1.0)],
        };
        if m != want || (sig.total_multiplicity() - k.degree() as f64).abs() > 0.0 {
            bad.push(format!("{p:?}"));
        }
    }
    let royal = royal_signature(&canonical_geodesic(Canonical::Royal).expect("royal")).identically_royal;
    Check {
        name: "royal_census",
        pass: bad.is_empty() && royal,
        detail: if bad.is_empty() { "all families match".into() } else { format!("mismatch: {}", bad.join(", ")) },
    }
}

fn second_derivative(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 4, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let r = rng.random_range(0.05..0.95);
        let (z1, z2) = (random_disc(&mut rng, 0.8), random_disc(&mut rng, 0.8));
        let k = canonical_geodesic(Canonical::Kr(r)).expect("r in range");
        let d = Datum::Discrete(k.eval(z1), k.eval(z2));
        let Ok(car) = car_solve(&d) else { return f64::NAN };
        let want = -(1.0 - car.value * car.value) * 2.0 * r * (1.0 - r) * (z1 / (1.0 - z1) - z2 / (1.0 - z2)).norm_sqr();
        let got = crate::caratheodory::rho_curvature(&d, car.maximizers[0]).unwrap_or(f64::NAN);
        (got - want).abs() / want.abs()
    });
    check("second_derivative_closed_form", worst(errs), 1e-5)
}

fn variety(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 5, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let p = match s % 3 {
            0 => Canonical::Kr(rng.random_range(0.05..0.95)),
            1 => Canonical::Gr(rng.random_range(0.05..0.95)),
            _ => Canonical::Hr(rng.random_range(0.1..5.0)),
        };
        let k = crate::geodesics::aut_geodesic(&random_mobius(&mut rng), &canonical_geodesic(p).expect("in range"));
        let Ok(poly) = variety_polynomial(&k) else { return f64::NAN };
        let on = (0..20).map(|_| poly.eval(&k.eval(random_disc(&mut rng, 0.95))).norm()).fold(0.0, f64::max);
        on.max(poly.self_conjugacy_error())
    });
    check("variety_polynomial", worst(errs), 1e-10)
}

fn covariance(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 6, opts.samples * 5), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let m = random_mobius(&mut rng);
        let w = cis(rng.random_range(0.0..TAU));
        let sp = sym_pi(random_disc(&mut rng, 0.95), random_disc(&mut rng, 0.95));
        let sq = sym_pi(random_disc(&mut rng, 0.95), random_disc(&mut rng, 0.95));
        let inv = m.reflect().inverse();
        let lhs = aut_point(&m, &sp).and_then(|t| crate::caratheodory::phi_point(w, &t));
        let rhs = crate::caratheodory::phi_point(inv.apply(w), &sp).map(|z| conjugating_mobius(&m).apply(z));
        let e1 = match (lhs, rhs) {
            (Ok(a), Ok(b)) => (a - b).norm(),
            _ => f64::NAN,
        };
        let d = Datum::Discrete(sp, sq);
        let e2 = match (aut_datum(&m, &d).and_then(|md| rho(&md, w)), rho(&d, inv.apply(w))) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::NAN,
        };
        e1.max(e2)
    });
    let pointwise = worst(errs);
    let inv = par::map_slice(opts.exec, &seeds(opts, 16, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let (_, d, _) = family_datum(&mut rng, (*s % 5) as usize);
        let m = random_mobius(&mut rng);
        match (classify_datum(&d), aut_datum(&m, &d).and_then(|md| classify_datum(&md))) {
            (Ok(a), Ok(b)) if a.kind == b.kind || a.near_exceptional || b.near_exceptional => {
                (a.car.value - b.car.value).abs()
            }
            _ => f64::INFINITY,
        }
    });
    let invariance = worst(inv);
    Check {
        name: "automorphism_covariance",
        pass: pointwise < 1e-10 && invariance < 1e-9,
        detail: format!("identities {pointwise:.3e}, car/type invariance {invariance:.3e}"),
    }
}

fn herglotz(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 7, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let mu = FiniteMeasureT2::random(*s, 8);
        let mut e: f64 = (herglotz_eval(&mu, &PointG::new(ZERO, ZERO), false).unwrap_or(C::new(f64::NAN, 0.0)) - ONE).norm();
        for _ in 0..20 {
            let z = random_disc(&mut rng, 0.99);
            for p in [PointG::new(2.0 * z, z * z), PointG::new(ZERO, z)] {
                match (herglotz_eval(&mu, &p, true), herglotz_eval(&mu, &p, false)) {
                    (Ok(a), Ok(b)) => e = e.max((a - b).norm()),
                    _ => e = f64::NAN,
                }
            }
            let g = sym_pi(random_disc(&mut rng, 1.0), random_disc(&mut rng, 1.0));
            match herglotz_eval(&mu, &g, false) {
                Ok(v) if v.re > 0.0 => {}
                _ => e = f64::NAN,
            }
        }
        e
    });
    check("herglotz_extension", worst(errs), 1e-12)
}

/// A region with a hole of moderate size and a datum close to the hole.
pub fn annulus_case(rng: &mut impl Rng) -> (AnnularRegion, DiscDatum) {
    let w0 = random_disc(rng, 0.3);
    let r = rng.random_range(0.1..0.4f64.min(0.95 - w0.norm()));
    let region = AnnularRegion::new(w0, r).expect("radius drawn in range");
    let mut near = || w0 + (r + rng.random_range(0.02..0.15)) * cis(rng.random_range(0.0..TAU));
    let a = near();
    let zeta = if a.re > w0.re + 0.5 * r {
        DiscDatum::Infinitesimal(a, cis(a.im * 7.0))
    } else {
        DiscDatum::Discrete(a, near())
    };
    (region, zeta)
}

fn annulus(opts: &SuiteOptions) -> Check {
    let res = par::map_slice(opts.exec, &seeds(opts, 8, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let (region, zeta) = annulus_case(&mut rng);
        let Ok(m) = improve_map(&region, &zeta) else { return (false, 0.0) };
        let gain = disc_modulus(&m.apply_datum(&zeta)).unwrap_or(0.0) - disc_modulus(&zeta).unwrap_or(1.0);
        (m.radius < 1.0 && m.boundary_max(4096) < m.radius && gain >= 1e-6, gain)
    });
    let fails = res.iter().filter(|r| !r.0).count();
    let min_gain = res.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Check { name: "annulus_improvement", pass: fails == 0, detail: format!("{fails} failures, smallest gain {min_gain:.3e}") }
}

fn numerical_range(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 9, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let p = sym_pi(random_disc(&mut rng, 0.9), random_disc(&mut rng, 0.9));
        let v = [random_disc(&mut rng, 1.0), random_disc(&mut rng, 1.0)];
        let d = Datum::Infinitesimal(p, v);
        match (car_nr_oracle(&d), car_solve(&d)) {
            (Ok(a), Ok(b)) => (a - b.value).abs(),
            _ => f64::NAN,
        }
    });
    check("numerical_range_oracle", worst(errs), 1e-6)
}

fn bidisc(opts: &SuiteOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 10);
    let kinds = [
        SymKind::PointPair((random_disc(&mut rng, 0.9), random_disc(&mut rng, 0.9))),
        SymKind::FullBidisc,
        SymKind::BalancedUnion(Mobius::blaschke(C::new(rng.random_range(0.05..0.9), 0.0))),
        SymKind::VBeta(random_disc(&mut rng, 0.9)),
        SymKind::DiagonalUnionVBeta(random_disc(&mut rng, 0.9)),
        SymKind::Vmr(random_mobius(&mut rng), rng.random_range(0.05..0.95)),
    ];
    let mut err: f64 = 0.0;
    for kind in kinds {
        let Ok(v) = build_sym_set(kind) else { return check("bidisc_layer", f64::INFINITY, 1e-9) };
        for (z, w) in sample_members(&v, opts.samples, opts.seed).unwrap_or_default() {
            err = err.max(g_side_residual(&v, &sym_pi(z, w)).unwrap_or(f64::INFINITY));
        }
    }
    for r in [0.5, 0.25, 0.75] {
        let h = family_polynomial(FamilyKind::Hr(r));
        if h.map_or(true, |h| h.eval(ONE, ONE) != ZERO) {
            err = f64::INFINITY;
        }
    }
    check("bidisc_layer", err, 1e-9)
}

fn trace_k_half() -> Check {
    let err = real_slice(Canonical::Kr(0.5), 256)
        .map(|pts| {
            pts.iter()
                .map(|(_, s)| {
                    let x = s.s1.re;
                    (s.s2.re - x * (3.0 * x - 2.0) / (2.0 * (x + 2.0))).abs()
                })
                .fold(0.0, f64::max)
        })
        .unwrap_or(f64::INFINITY);
    check("trace_k_half", err, 1e-10)
}

fn universality(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 12, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let d = Datum::Discrete(
            sym_pi(random_disc(&mut rng, 0.95), random_disc(&mut rng, 0.95)),
            sym_pi(random_disc(&mut rng, 0.95), random_disc(&mut rng, 0.95)),
        );
        let Ok(car) = car_solve(&d) else { return f64::NAN };
        let mut excess: f64 = 0.0;
        for _ in 0..10 {
            let (m, w) = (random_mobius(&mut rng), cis(rng.random_range(0.0..TAU)));
            let Ok(z) = phi_datum(w, &d) else { return f64::NAN };
            excess = excess.max(disc_modulus(&m.apply_datum(&z)).unwrap_or(f64::NAN) - car.value);
        }
        excess.max(0.0)
    });
    check("caratheodory_universality", worst(errs), 1e-10)
}

fn embeddings(opts: &SuiteOptions) -> Check {
    let errs = par::map_slice(opts.exec, &seeds(opts, 13, opts.samples), |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let p = sym_pi(random_disc(&mut rng, 0.99), random_disc(&mut rng, 0.99));
        [Target::SpectralBall, Target::Tetrablock, Target::Pentablock]
            .into_iter()
            .map(|t| embed(&p, t).and_then(|e| retract_map(&e, t)).map_or(f64::NAN, |b| b.dist(&p)))
            .fold(0.0, f64::max)
    });
    check("embedding_left_inverse", worst(errs), 1e-12)
}
