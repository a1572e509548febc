//! Static picture of a real slice inside the real points of `G`.

use std::fmt::Write as _;

const W: f64 = 600.0;
const H: f64 = 400.0;

/// Plot window `[-2.2, 2.2] × [-1.2, 1.2]`, `p` pointing up.
fn xy(s: f64, p: f64) -> (f64, f64) {
    ((s + 2.2) / 4.4 * W, (1.2 - p) / 2.4 * H)
}

fn polyline(pts: impl Iterator<Item = (f64, f64)>) -> String {
    let mut out = String::new();
    for (s, p) in pts {
        let (x, y) = xy(s, p);
        write!(out, "{x:.2},{y:.2} ").unwrap();
    }
    out.trim_end().to_string()
}

pub fn trace_svg(curve: &[(f64, f64)]) -> String {
    let tri = polyline([(-2.0, 1.0), (2.0, 1.0), (0.0, -1.0)].into_iter());
    let royal = polyline((0..=64).map(|j| {
        let s = -2.0 + 4.0 * j as f64 / 64.0;
        (s, s * s / 4.0)
    }));
    let path = polyline(curve.iter().copied());
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 400\" width=\"600\" height=\"400\">\n\
         <rect width=\"600\" height=\"400\" fill=\"white\"/>\n\
         <polygon points=\"{tri}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n\
         <polyline points=\"{royal}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n\
         <polyline points=\"{path}\" fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\"/>\n\
         </svg>\n"
    )
}
