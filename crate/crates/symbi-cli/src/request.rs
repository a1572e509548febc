//! Request schema. Every record rejects unknown fields; complex numbers
//! are a bare number or an `[re, im]` pair.

use serde::{Deserialize, Serialize};
use symbi::{Datum, DiscDatum, PointG, C};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Cnum {
    Real(f64),
    Pair([f64; 2]),
}

impl Cnum {
    pub fn c(self) -> C {
        match self {
            Cnum::Real(x) => C::new(x, 0.0),
            Cnum::Pair([a, b]) => C::new(a, b),
        }
    }
}

impl From<C> for Cnum {
    fn from(z: C) -> Self {
        Cnum::Pair([z.re, z.im])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DatumJson {
    Discrete([[Cnum; 2]; 2]),
    Infinitesimal([[Cnum; 2]; 2]),
}

impl DatumJson {
    pub fn datum(&self) -> Datum {
        match self {
            DatumJson::Discrete([p, q]) => Datum::Discrete(PointG::new(p[0].c(), p[1].c()), PointG::new(q[0].c(), q[1].c())),
            DatumJson::Infinitesimal([p, v]) => Datum::Infinitesimal(PointG::new(p[0].c(), p[1].c()), [v[0].c(), v[1].c()]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DiscDatumJson {
    Discrete([Cnum; 2]),
    Infinitesimal([Cnum; 2]),
}

impl DiscDatumJson {
    pub fn disc(&self) -> DiscDatum {
        match self {
            DiscDatumJson::Discrete([a, b]) => DiscDatum::Discrete(a.c(), b.c()),
            DiscDatumJson::Infinitesimal([a, b]) => DiscDatum::Infinitesimal(a.c(), b.c()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Distance,
    Geodesic,
    Variety,
    Trace,
    Extend,
    Sym2,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum FamilyName {
    #[serde(rename = "k_r")]
    Kr,
    #[serde(rename = "g_r")]
    Gr,
    #[serde(rename = "h_r")]
    Hr,
    #[serde(rename = "royal")]
    Royal,
    #[serde(rename = "f_beta")]
    Flat,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumPayload {
    pub datum: DatumJson,
    pub grid: Option<usize>,
}

/// Either a datum to solve through, or a named family.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicPayload {
    pub datum: Option<DatumJson>,
    pub family: Option<FamilyName>,
    pub r: Option<f64>,
    pub beta: Option<Cnum>,
    /// Optional post-composed automorphism `[c, a]`.
    pub transport: Option<[Cnum; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TracePayload {
    pub family: FamilyName,
    pub r: Option<f64>,
    pub beta: Option<Cnum>,
    pub n: Option<usize>,
    #[serde(default)]
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusJson {
    pub w0: Cnum,
    pub r: f64,
    pub datum: DiscDatumJson,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendPayload {
    /// Atoms `[τ1, τ2, weight]` of the measure on the torus.
    pub measure: Option<Vec<(Cnum, Cnum, f64)>>,
    /// Grid size per disc coordinate for the evaluation table.
    pub n: Option<usize>,
    pub annulus: Option<AnnulusJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetJson {
    PointPair { lambda: [Cnum; 2] },
    FullBidisc,
    BalancedUnion { m: [Cnum; 2] },
    VBeta { beta: Cnum },
    DiagonalUnionVBeta { beta: Cnum },
    Vmr { m: [Cnum; 2], r: f64 },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sym2Payload {
    pub set: SetJson,
    #[serde(default)]
    pub points: Vec<[Cnum; 2]>,
    pub tol: Option<f64>,
    /// Number of generated members to check against the image relation.
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyPayload {
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Classify(DatumPayload),
    Distance(DatumPayload),
    Geodesic(GeodesicPayload),
    Variety(GeodesicPayload),
    Trace(TracePayload),
    Extend(ExtendPayload),
    Sym2(Sym2Payload),
    Verify(VerifyPayload),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub command: Command,
    pub payload: Payload,
    pub seed: u64,
    pub output_path: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    command: Command,
    #[serde(default)]
    payload: Option<serde_json::Value>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    output_path: Option<String>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("{0}")]
pub struct ParseError(pub String);

fn typed<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, ParseError> {
    serde_json::from_value(v).map_err(|e| ParseError(format!("payload: {e}")))
}

pub fn parse_request(text: &str) -> Result<Request, ParseError> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| ParseError(format!("request: {e}")))?;
    let body = env.payload.unwrap_or_else(|| serde_json::Value::Object(Default::default()));
    let payload = match env.command {
        Command::Classify => Payload::Classify(typed(body)?),
        Command::Distance => Payload::Distance(typed(body)?),
        Command::Geodesic => Payload::Geodesic(typed(body)?),
        Command::Variety => Payload::Variety(typed(body)?),
        Command::Trace => Payload::Trace(typed(body)?),
        Command::Extend => Payload::Extend(typed(body)?),
        Command::Sym2 => Payload::Sym2(typed(body)?),
        Command::Verify => Payload::Verify(typed(body)?),
    };
    Ok(Request { command: env.command, payload, seed: env.seed.unwrap_or(0), output_path: env.output_path })
}
