//! The pinned boundary value problem: endpoints fixed, tangents free.
//!
//! The global minimizer is a planar convex wavelike arch whose modulus is
//! fixed by the chord/length ratio; flat-core candidates exist only for
//! p > 2 with |P0 - P1| >= L / (p - 1).

use crate::curvekit::{similarity_transform, wavelike_arc, SampledCurve};
use crate::pelliptic::{complete_pair, q_star, Modulus, PExponent};
use crate::root::bisect_secant;
use crate::vecn::{self, MatN};
use crate::{Error, Result};
use serde::Serialize;

/// Pinned problem data: endpoints and total length.
#[derive(Debug, Clone, Serialize)]
pub struct PinnedProblem {
    pub p: PExponent,
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    pub length: f64,
}

impl PinnedProblem {
    pub fn new(p: PExponent, p0: Vec<f64>, p1: Vec<f64>, length: f64) -> Result<Self> {
        if p0.len() != p1.len() || p0.len() < 2 {
            return Err(Error::Domain("endpoints must share a dimension >= 2".into()));
        }
        let chord = vecn::dist(&p0, &p1);
        if !(chord > 0.0 && chord < length) {
            return Err(Error::Domain(format!(
                "admissibility requires 0 < |P0 - P1| < L, got chord {chord}, length {length}"
            )));
        }
        Ok(PinnedProblem { p, p0, p1, length })
    }

    pub fn dim(&self) -> usize {
        self.p0.len()
    }

    pub fn chord(&self) -> f64 {
        vecn::dist(&self.p0, &self.p1)
    }
}

/// Chord-to-length ratio of one convex arch at modulus q:
/// r = 2 E_{1,p}(q) / K_{1,p}(q) - 1, decreasing from 1 (q -> 0) through 0
/// at q = q_p^*.
pub fn chord_ratio(p: PExponent, q: Modulus) -> Result<f64> {
    let cp = complete_pair(p, q)?;
    Ok(2.0 * cp.e / cp.k - 1.0)
}

/// Invert the chord ratio over (0, 1): the unique modulus in (0, q*) with
/// chord_ratio(p, q) = r.
pub fn solve_modulus_for_ratio(p: PExponent, r: f64) -> Result<Modulus> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "chord ratio must lie in (0, 1), got {r}"
        )));
    }
    let q_hi = q_star(p)?.get();
    let g = |q: f64| -> f64 {
        Modulus::new(q)
            .and_then(|q| chord_ratio(p, q))
            .map(|v| v - r)
            .unwrap_or(f64::NAN)
    };
    let q = bisect_secant(g, 1e-9, q_hi, 1e-14, 1e-12)?;
    Modulus::new(q)
}

/// True when a non-planar pinned flat-core solution can exist:
/// p > 2 and |P0 - P1| >= L / (p - 1).
pub fn flat_core_pinned_feasible(problem: &PinnedProblem) -> bool {
    problem.p.is_degenerate() && problem.chord() >= problem.length / (problem.p.get() - 1.0)
}

/// The unique (up to isometry) global minimizer: a planar convex arch
/// realized as the wavelike window [-K, K] at the modulus matching the
/// chord ratio, scaled and moved onto the problem data. Its endpoint
/// curvatures vanish (natural boundary conditions).
pub fn pinned_minimizer(problem: &PinnedProblem, ds: f64) -> Result<SampledCurve> {
    let p = problem.p;
    let ratio = problem.chord() / problem.length;
    let q = solve_modulus_for_ratio(p, ratio)?;
    let k = complete_pair(p, q)?.k;
    let scale = problem.length / (2.0 * k);
    let arch = wavelike_arc(p, q, (-k, k), ds / scale)?;

    // Plane: chord direction u plus the lowest-index coordinate direction
    // not parallel to the chord.
    let dim = problem.dim();
    let mut u: Vec<f64> = problem
        .p1
        .iter()
        .zip(&problem.p0)
        .map(|(a, b)| a - b)
        .collect();
    vecn::normalize(&mut u);
    let mut rows = vec![u.clone()];
    let basis = vecn::complete_basis(&rows, dim);
    rows = basis;
    // Rotation taking e1 -> u, e2 -> v: columns are the basis vectors.
    let mut rot = MatN::identity(dim);
    for (j, b) in rows.iter().enumerate() {
        for i in 0..dim {
            rot.set(i, j, b[i]);
        }
    }

    // Embed the planar arch into dim coordinates before transforming.
    let embedded = SampledCurve::from_fn(dim, arch.step(), arch.len() - 1, false, |i| {
        let pt = arch.point(i);
        let mut v = vec![0.0; dim];
        v[0] = pt[0];
        v[1] = pt[1];
        v
    });

    // Start point maps to P0: translation = P0 - scale * R * arch(0).
    let start = rot.apply(embedded.first());
    let translation: Vec<f64> = problem
        .p0
        .iter()
        .zip(&start)
        .map(|(p0, s)| p0 - scale * s)
        .collect();
    let mut c = similarity_transform(&embedded, scale, &rot, &translation)?;
    c.meta.p = Some(p.get());
    c.meta.family = Some("pinned-minimizer".into());
    c.meta.scale = Some(scale);
    Ok(c)
}
