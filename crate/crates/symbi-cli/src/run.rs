//! Command execution. Everything is computed into memory first so the
//! caller can write files atomically or print to stdout.

use crate::request::{
    Cnum, DatumPayload, ExtendPayload, FamilyName, GeodesicPayload, Payload, Request, SetJson, Sym2Payload, TracePayload,
    VerifyPayload,
};
use crate::svg;
use serde_json::{json, Map, Value};
use std::f64::consts::TAU;
use std::fmt::Write as _;
use symbi::base::{cis, disc_modulus, sym_pi};
use symbi::caratheodory::{classify_datum_with, CarOptions};
use symbi::extension::{herglotz_eval, improve_map, AnnularRegion, FiniteMeasureT2};
use symbi::geodesics::{aut_geodesic, canonical_geodesic, real_slice, region_tag, Canonical, Family, GeodesicMap};
use symbi::kobayashi::{solve_kobayashi_with, KobOptions};
use symbi::numrange::car_nr_oracle;
use symbi::poly::Poly;
use symbi::symbidisc::{build_sym_set, g_side_residual, pi_image_kind, sample_members, sym_member, SymKind};
use symbi::variety::variety_polynomial;
use symbi::verify::{run_suite, SuiteOptions};
use symbi::{Datum, DiscDatum, Error, Exec, Mobius, C};

pub const TRACE_ROWS: usize = 256;
pub const EXTEND_GRID: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Input(String),
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Numeric(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInG | Error::Degenerate | Error::InvalidParameter(_) | Error::OffSet(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub ext: &'static str,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub primary: Artifact,
    /// Written next to the primary file, same stem.
    pub extra: Vec<Artifact>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(primary: Artifact) -> Self {
        Outcome { primary, extra: vec![], exit_code: 0 }
    }
}

fn num(x: f64) -> Res<Value> {
    if x.is_finite() {
        Ok(json!(x))
    } else {
        Err(Failure::Numeric(format!("non-finite value {x}")))
    }
}

fn cx(z: C) -> Res<Value> {
    Ok(Value::Array(vec![num(z.re)?, num(z.im)?]))
}

fn cxs(zs: &[C]) -> Res<Value> {
    Ok(Value::Array(zs.iter().map(|z| cx(*z)).collect::<Res<_>>()?))
}

fn mobius(m: &Mobius) -> Res<Value> {
    Ok(json!({"c": cx(m.c)?, "a": cx(m.a)?}))
}

fn disc(z: &DiscDatum) -> Res<Value> {
    Ok(match *z {
        DiscDatum::Discrete(a, b) => json!({"discrete": [cx(a)?, cx(b)?]}),
        DiscDatum::Infinitesimal(a, v) => json!({"infinitesimal": [cx(a)?, cx(v)?]}),
    })
}

fn json_artifact(v: Value) -> Artifact {
    let mut body = serde_json::to_string_pretty(&v).expect("values are finite");
    body.push('\n');
    Artifact { ext: "json", body }
}

fn checked(d: Datum) -> Res<Datum> {
    d.check()?;
    Ok(d)
}

pub fn execute(req: &Request) -> Res<Outcome> {
    let exec = Exec::default();
    match &req.payload {
        Payload::Classify(p) => classify(p, exec),
        Payload::Distance(p) => distance(p, req.seed, exec),
        Payload::Geodesic(p) => geodesic(p, req.seed, exec),
        Payload::Variety(p) => variety(p, req.seed, exec),
        Payload::Trace(p) => trace(p),
        Payload::Extend(p) => extend(p),
        Payload::Sym2(p) => sym2(p, req.seed),
        Payload::Verify(p) => verify(p, req.seed, exec),
    }
}

fn car_opts(grid: Option<usize>, exec: Exec) -> Res<CarOptions> {
    let grid = grid.unwrap_or(4096);
    if grid < 16 {
        return Err(Failure::Input("payload.grid: need at least 16 points".into()));
    }
    Ok(CarOptions { grid, exec })
}

fn classify(p: &DatumPayload, exec: Exec) -> Res<Outcome> {
    let d = checked(p.datum.datum())?;
    let c = classify_datum_with(&d, &car_opts(p.grid, exec)?)?;
    let maxi: Vec<C> = c.car.maximizers.iter().map(|t| cis(*t)).collect();
    let curvature = match c.curvature {
        Some(k) => num(k)?,
        None => Value::Null,
    };
    Ok(Outcome::ok(json_artifact(json!({
        "type": c.kind.name(),
        "car": num(c.car.value)?,
        "maximizers": cxs(&maxi)?,
        "constant": c.car.constant_flag,
        "near_exceptional": c.near_exceptional,
        "curvature": curvature,
    }))))
}

fn kob_opts(seed: u64, exec: Exec) -> KobOptions {
    KobOptions { seed, car: CarOptions { exec, ..CarOptions::default() }, ..KobOptions::default() }
}

fn distance(p: &DatumPayload, seed: u64, exec: Exec) -> Res<Outcome> {
    let d = checked(p.datum.datum())?;
    let mut o = kob_opts(seed, exec);
    o.car = car_opts(p.grid, exec)?;
    let sol = solve_kobayashi_with(&d, &o)?;
    let mut out = Map::new();
    out.insert("type".into(), json!(sol.classification.kind.name()));
    out.insert("car".into(), num(sol.classification.car.value)?);
    out.insert("kobayashi".into(), num(disc_modulus(&sol.zeta)?)?);
    out.insert("residual".into(), num(sol.residual)?);
    if let Datum::Infinitesimal(..) = d {
        out.insert("numerical_range".into(), num(car_nr_oracle(&d)?)?);
    }
    Ok(Outcome::ok(json_artifact(Value::Object(out))))
}

fn canonical(f: FamilyName, r: Option<f64>, beta: Option<Cnum>) -> Res<Canonical> {
    let need_r = || r.ok_or_else(|| Failure::Input("payload.r: required for this family".into()));
    Ok(match f {
        FamilyName::Kr => Canonical::Kr(need_r()?),
        FamilyName::Gr => Canonical::Gr(need_r()?),
        FamilyName::Hr => Canonical::Hr(need_r()?),
        FamilyName::Royal => Canonical::Royal,
        FamilyName::Flat => Canonical::Flat(beta.map(Cnum::c).unwrap_or_default()),
    })
}

/// The geodesic named by the payload, and the preimage datum when it
/// was solved for.
fn source(p: &GeodesicPayload, seed: u64, exec: Exec) -> Res<(GeodesicMap, Option<DiscDatum>, Option<f64>)> {
    let (k, zeta, res) = match (&p.datum, p.family) {
        (Some(d), None) => {
            let d = checked(d.datum())?;
            let sol = solve_kobayashi_with(&d, &kob_opts(seed, exec))?;
            (sol.map, Some(sol.zeta), Some(sol.residual))
        }
        (None, Some(f)) => (canonical_geodesic(canonical(f, p.r, p.beta)?)?, None, None),
        _ => return Err(Failure::Input("payload: give exactly one of `datum` and `family`".into())),
    };
    let k = match p.transport {
        Some([c, a]) => aut_geodesic(&Mobius::new(c.c(), a.c())?, &k),
        None => k,
    };
    Ok((k, zeta, res))
}

fn family_json(f: &Family) -> Res<Value> {
    Ok(match *f {
        Family::Royal => json!({"name": "royal"}),
        Family::Flat(b) => json!({"name": "flat", "beta": cx(b)?}),
        Family::PurelyUnbalanced(r) => json!({"name": "purely_unbalanced", "r": num(r)?}),
        Family::PurelyBalanced(r) => json!({"name": "purely_balanced", "r": num(r)?}),
        Family::Exceptional(r) => json!({"name": "exceptional", "r": num(r)?}),
        Family::General => json!({"name": "general"}),
    })
}

fn poly(p: &Poly) -> Res<Value> {
    cxs(&p.0)
}

fn geodesic(p: &GeodesicPayload, seed: u64, exec: Exec) -> Res<Outcome> {
    let (k, zeta, res) = source(p, seed, exec)?;
    let curve = k.curve();
    let mut out = Map::new();
    out.insert("family".into(), family_json(&k.family)?);
    out.insert("degree".into(), json!(k.degree()));
    out.insert("omega".into(), cx(k.omega)?);
    out.insert("upsilon".into(), mobius(&k.upsilon)?);
    out.insert("theta".into(), cx(k.k2.theta)?);
    out.insert("zeros".into(), cxs(&k.k2.zeros)?);
    out.insert("transport".into(), mobius(&k.transport)?);
    out.insert("curve".into(), json!({"k0": poly(&curve.k0)?, "k1": poly(&curve.k1)?, "k2": poly(&curve.k2)?}));
    if let Some(z) = zeta {
        out.insert("zeta".into(), disc(&z)?);
    }
    if let Some(r) = res {
        out.insert("residual".into(), num(r)?);
    }
    Ok(Outcome::ok(json_artifact(Value::Object(out))))
}

fn variety(p: &GeodesicPayload, seed: u64, exec: Exec) -> Res<Outcome> {
    let (k, _, _) = source(p, seed, exec)?;
    let q = variety_polynomial(&k)?;
    Ok(Outcome::ok(json_artifact(json!({
        "monomials": ["1", "s1", "s2", "s1^2", "s1 s2", "s2^2"],
        "coefficients": cxs(&q.c)?,
        "self_conjugacy_error": num(q.self_conjugacy_error())?,
    }))))
}

fn trace(p: &TracePayload) -> Res<Outcome> {
    let n = p.n.unwrap_or(TRACE_ROWS);
    if n < 2 {
        return Err(Failure::Input("payload.n: need at least 2 rows".into()));
    }
    let fam = canonical(p.family, p.r, p.beta)?;
    if let Canonical::Flat(b) = fam {
        if b.im != 0.0 {
            return Err(Failure::Input("payload.beta: the real slice needs real beta".into()));
        }
    }
    let rows = real_slice(fam, n)?;
    let mut csv = String::from("s,p,type\n");
    let mut pts = Vec::with_capacity(rows.len());
    for (_, s) in &rows {
        if !s.is_finite() {
            return Err(Failure::Numeric("non-finite point on the slice".into()));
        }
        writeln!(csv, "{},{},{}", s.s1.re, s.s2.re, region_tag(s)).unwrap();
        pts.push((s.s1.re, s.s2.re));
    }
    let mut out = Outcome::ok(Artifact { ext: "csv", body: csv });
    if p.svg {
        out.extra.push(Artifact { ext: "svg", body: svg::trace_svg(&pts) });
    }
    Ok(out)
}

/// `n` points spread over the disc of radius 0.9.
fn disc_grid(n: usize) -> Vec<C> {
    (0..n).map(|j| 0.9 * (j + 1) as f64 / (n + 1) as f64 * cis(TAU * j as f64 / n as f64)).collect()
}

fn extend(p: &ExtendPayload) -> Res<Outcome> {
    let n = p.n.unwrap_or(EXTEND_GRID);
    if n == 0 {
        return Err(Failure::Input("payload.n: need a positive grid size".into()));
    }
    match (&p.measure, &p.annulus) {
        (Some(atoms), None) => {
            let mu = FiniteMeasureT2::new(atoms.iter().map(|(a, b, w)| (a.c(), b.c(), *w)).collect())?;
            let grid = disc_grid(n);
            let mut csv = String::from("s1_re,s1_im,s2_re,s2_im,g_re,g_im\n");
            for (i, &z) in grid.iter().enumerate() {
                for &w in &grid[i..] {
                    let s = sym_pi(z, w);
                    let g = herglotz_eval(&mu, &s, false)?;
                    if !g.is_finite() {
                        return Err(Failure::Numeric("non-finite extension value".into()));
                    }
                    writeln!(csv, "{},{},{},{},{},{}", s.s1.re, s.s1.im, s.s2.re, s.s2.im, g.re, g.im).unwrap();
                }
            }
            Ok(Outcome::ok(Artifact { ext: "csv", body: csv }))
        }
        (None, Some(a)) => {
            let region = AnnularRegion::new(a.w0.c(), a.r)?;
            let zeta = a.datum.disc();
            let map = improve_map(&region, &zeta)?;
            let image = map.apply_datum(&zeta);
            let before = disc_modulus(&zeta)?;
            let after = disc_modulus(&image)?;
            // the map on a grid of the region, boundary circles included
            let mut table = Vec::new();
            for j in 0..4 * n {
                let e = cis(TAU * j as f64 / (4 * n) as f64);
                for z in [0.999 * e, region.w0 + 1.001 * region.r * e] {
                    if region.contains(z) {
                        table.push(json!([cx(z)?, cx(map.eval(z))?]));
                    }
                }
            }
            Ok(Outcome::ok(json_artifact(json!({
                "radius": num(map.radius)?,
                "t": num(map.t)?,
                "order": map.order,
                "centering": mobius(&map.centering)?,
                "zeta": disc(&zeta)?,
                "image": disc(&image)?,
                "modulus_before": num(before)?,
                "modulus_after": num(after)?,
                "boundary_max": num(map.boundary_max(4096))?,
                "table": table,
            }))))
        }
        _ => Err(Failure::Input("payload: give exactly one of `measure` and `annulus`".into())),
    }
}

fn sym_kind(s: &SetJson) -> Res<SymKind> {
    let m = |[c, a]: [Cnum; 2]| Mobius::new(c.c(), a.c());
    Ok(match *s {
        SetJson::PointPair { lambda: [a, b] } => SymKind::PointPair((a.c(), b.c())),
        SetJson::FullBidisc => SymKind::FullBidisc,
        SetJson::BalancedUnion { m: x } => SymKind::BalancedUnion(m(x)?),
        SetJson::VBeta { beta } => SymKind::VBeta(beta.c()),
        SetJson::DiagonalUnionVBeta { beta } => SymKind::DiagonalUnionVBeta(beta.c()),
        SetJson::Vmr { m: x, r } => SymKind::Vmr(m(x)?, r),
    })
}

fn sym2(p: &Sym2Payload, seed: u64) -> Res<Outcome> {
    let tol = p.tol.unwrap_or(1e-9);
    let v = build_sym_set(sym_kind(&p.set)?)?;
    let mut points = Vec::with_capacity(p.points.len());
    for [z, w] in &p.points {
        let (z, w) = (z.c(), w.c());
        if !(z.norm() < 1.0 && w.norm() < 1.0) {
            return Err(Failure::Input("payload.points: points must lie in the open bidisc".into()));
        }
        let s = sym_pi(z, w);
        let res = g_side_residual(&v, &s)?;
        points.push(json!({
            "point": [cx(z)?, cx(w)?],
            "member": sym_member(&v, (z, w), tol),
            "image": [cx(s.s1)?, cx(s.s2)?],
            "image_on_relation": res <= tol,
        }));
    }
    let n = p.samples.unwrap_or(200);
    let members = sample_members(&v, n, seed)?;
    let mut worst: f64 = 0.0;
    for (z, w) in &members {
        worst = worst.max(g_side_residual(&v, &sym_pi(*z, *w))?);
    }
    Ok(Outcome::ok(json_artifact(json!({
        "pi_image": format!("{:?}", pi_image_kind(&v)),
        "points": points,
        "samples": members.len(),
        "max_sample_residual": num(worst)?,
        "samples_on_relation": worst <= tol,
    }))))
}

fn verify(p: &VerifyPayload, seed: u64, exec: Exec) -> Res<Outcome> {
    let mut opts = SuiteOptions { seed, exec, ..SuiteOptions::default() };
    if let Some(n) = p.samples {
        opts.samples = n.max(1);
    }
    let checks = run_suite(&opts);
    let mut body = String::new();
    for c in &checks {
        writeln!(body, "{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
    }
    let code = if checks.iter().all(|c| c.pass) { 0 } else { 2 };
    Ok(Outcome { primary: Artifact { ext: "txt", body }, extra: vec![], exit_code: code })
}
