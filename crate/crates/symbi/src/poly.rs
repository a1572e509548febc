//! Dense univariate complex polynomials and root extraction.
//!
//! Roots come from the eigenvalues of the companion matrix (complex Schur
//! form), followed by a guarded Newton polish. Multiple roots are split by
//! rounding into small clusters; [`root_clusters`] merges them back using a
//! radius that scales with the size of the corresponding Taylor
//! coefficient, which is what a perturbation of relative size `u` predicts.

use crate::base::{C, ZERO};
use nalgebra::DMatrix;

/// Coefficients in ascending order: `c[0] + c[1] z + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<C>);

impl Poly {
    pub fn new(c: Vec<C>) -> Self {
        Poly(c)
    }

    pub fn constant(c: C) -> Self {
        Poly(vec![c])
    }

    /// `prod (z - r)`.
    pub fn from_roots(roots: &[C]) -> Self {
        roots.iter().fold(Poly(vec![C::new(1.0, 0.0)]), |p, r| p.mul(&Poly(vec![-r, C::new(1.0, 0.0)])))
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C {
        self.0.get(k).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: C) -> C {
        self.0.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn scale(&self, s: C) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(vec![]);
        }
        let mut out = vec![ZERO; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Drop leading coefficients below `rel * norm`.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let cut = rel * self.norm();
        let mut c = self.0.clone();
        while c.len() > 1 && c.last().is_some_and(|x| x.norm() <= cut) {
            c.pop();
        }
        Poly(c)
    }

    /// Divide by `(z - r)`: returns quotient and remainder.
    pub fn div_linear(&self, r: C) -> (Poly, C) {
        let n = self.0.len();
        if n <= 1 {
            return (Poly(vec![]), self.coeff(0));
        }
        let mut q = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for k in (0..n).rev() {
            acc = acc * r + self.0[k];
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        (Poly(q), acc)
    }

    /// Taylor coefficients about `m`: `p(m + x) = sum t_k x^k`.
    pub fn taylor_at(&self, m: C) -> Vec<C> {
        let mut cur = self.clone();
        let mut out = Vec::with_capacity(self.0.len());
        while !cur.0.is_empty() {
            let (q, r) = cur.div_linear(m);
            out.push(r);
            cur = q;
        }
        out
    }

    /// `z^n conj(p(1/conj z))` with `n` the nominal degree.
    pub fn reflected(&self, n: usize) -> Poly {
        Poly((0..=n).map(|k| self.coeff(n - k).conj()).collect())
    }

    /// All roots, with multiplicity, from the companion matrix.
    pub fn roots(&self) -> Vec<C> {
        let p = self.trimmed(1e-14);
        let n = p.degree();
        if n == 0 {
            return vec![];
        }
        let lead = p.0[n];
        if n == 1 {
            return vec![-p.0[0] / lead];
        }
        let mut m = DMatrix::<C>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = C::new(1.0, 0.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -p.0[i] / lead;
        }
        let dp = p.deriv();
        // the unshifted QR sweep can cycle on some companion matrices
        let eig: Vec<C> = match m.try_schur(f64::EPSILON, 5000) {
            Some(s) => s.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect(),
            None => aberth(&p),
        };
        eig.into_iter().map(|r| polish(&p, &dp, r)).collect()
    }
}

/// Simultaneous Aberth-Ehrlich iteration from a circle of Cauchy-bound
/// radius.
fn aberth(p: &Poly) -> Vec<C> {
    let n = p.degree();
    let lead = p.0[n];
    let bound = 1.0 + p.0[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let dp = p.deriv();
    let mut z: Vec<C> = (0..n).map(|k| C::from_polar(0.5 * bound, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for k in 0..n {
            let (f, d) = (p.eval(z[k]), dp.eval(z[k]));
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / d;
            let repel: C = (0..n).filter(|&j| j != k).map(|j| C::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let step = ratio / (C::new(1.0, 0.0) - ratio * repel);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    z
}

fn polish(p: &Poly, dp: &Poly, mut r: C) -> C {
    let mut f = p.eval(r).norm();
    for _ in 0..8 {
        let d = dp.eval(r);
        if d.norm() == 0.0 {
            break;
        }
        let cand = r - p.eval(r) / d;
        let fc = p.eval(cand).norm();
        if !(fc < f) {
            break;
        }
        r = cand;
        f = fc;
    }
    r
}

/// A cluster of order `l` is a simple root of `p^(l-1)`; Newton there
/// beats the mean of the individual roots.
fn refine_center(p: &Poly, mean: C, order: usize) -> C {
    if order == 1 {
        return mean;
    }
    let mut q = p.clone();
    for _ in 1..order {
        q = q.deriv();
    }
    let dq = q.deriv();
    let cand = polish(&q, &dq, mean);
    // stay with the mean if Newton wandered off
    if (cand - mean).norm() < 1e-3 {
        cand
    } else {
        mean
    }
}

/// A cluster of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: C,
    pub order: usize,
}

/// Unit roundoff assumed for the coefficients fed to [`root_clusters`].
pub const CLUSTER_ROUNDOFF: f64 = 1e-11;

/// Group roots of `p` into clusters. Two groups merge when their union
/// lies within `abs_tol` of its mean, or within the perturbation radius
/// `10 (u ||p|| / |t_l|)^(1/l)` where `t_l` is the Taylor coefficient of
/// order `l` (the cluster size) at the mean.
pub fn root_clusters(p: &Poly, abs_tol: f64) -> Vec<RootCluster> {
    let roots = p.roots();
    let pn = p.norm();
    let mut groups: Vec<Vec<C>> = roots.into_iter().map(|r| vec![r]).collect();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let merged: Vec<C> = groups[i].iter().chain(groups[j].iter()).copied().collect();
                let l = merged.len();
                let mean = merged.iter().sum::<C>() / l as f64;
                let radius = merged.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
                let t = p.taylor_at(mean);
                let tl = t.get(l).map_or(0.0, |c| c.norm());
                let pert = if tl > 0.0 {
                    10.0 * (CLUSTER_ROUNDOFF * pn / tl).powf(1.0 / l as f64)
                } else {
                    f64::INFINITY
                };
                if radius <= abs_tol.max(pert) && best.is_none_or(|(_, _, r)| radius < r) {
                    best = Some((i, j, radius));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let g = groups.remove(j);
                groups[i].extend(g);
            }
            None => break,
        }
    }
    let mut out: Vec<RootCluster> = groups
        .into_iter()
        .map(|g| {
            let order = g.len();
            let mean = g.iter().sum::<C>() / order as f64;
            RootCluster { center: refine_center(p, mean, order), order }
        })
        .collect();
    out.sort_by(|a, b| (a.center.re, a.center.im).partial_cmp(&(b.center.re, b.center.im)).unwrap());
    out
}
