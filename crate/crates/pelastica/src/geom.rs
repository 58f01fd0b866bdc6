//! Discrete differential-geometric measurements on sampled curves:
//! length, p-bending energy, curvature and torsion profiles, multiplicity,
//! embeddedness and affine dimension.

use crate::curvekit::SampledCurve;
use crate::pelliptic::PExponent;
use crate::vecn::{self, MatN};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// Length, bending energy and the scale-invariant normalized energy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyReport {
    pub length: f64,
    pub bending: f64,
    /// length^(p-1) * bending.
    pub normalized: f64,
    pub p: f64,
}

/// Polyline length: sum of chord lengths.
pub fn length(c: &SampledCurve) -> f64 {
    let mut total = 0.0;
    for i in 0..c.len().saturating_sub(1) {
        total += vecn::dist(c.point(i), c.point(i + 1));
    }
    total
}

/// Second difference of the samples around index i divided by ds^2, with
/// wraparound for closed curves. Interior indices only for open curves.
fn second_difference(c: &SampledCurve, i: usize) -> Option<Vec<f64>> {
    let n = c.len();
    let ds2 = c.step() * c.step();
    let (prev, next) = if c.is_closed() {
        let n_eff = n - 1;
        ((i + n_eff - 1) % n_eff, (i + 1) % n_eff)
    } else {
        if i == 0 || i + 1 >= n {
            return None;
        }
        (i - 1, i + 1)
    };
    let a = c.point(prev);
    let b = c.point(i);
    let d = c.point(next);
    Some(
        a.iter()
            .zip(b)
            .zip(d)
            .map(|((x, y), z)| (x - 2.0 * y + z) / ds2)
            .collect(),
    )
}

/// One entry of a curvature/torsion profile.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfilePoint {
    pub s: f64,
    pub k: f64,
    /// Torsion, defined for 3-dimensional curves where k exceeds the
    /// positivity threshold.
    pub tau: Option<f64>,
}

/// Curvature below which the discrete torsion is reported as undefined.
pub const TORSION_K_THRESHOLD: f64 = 1e-6;

/// Discrete curvature profile k(s) >= 0 (norm of the second difference),
/// with torsion from the discrete Frenet frame when dim = 3.
pub fn curvature_profile(c: &SampledCurve) -> Result<Vec<ProfilePoint>> {
    let n = c.len();
    if n < 3 {
        return Err(Error::InvalidCurve(
            "need at least 3 samples for curvature".into(),
        ));
    }
    let idx: Vec<usize> = if c.is_closed() {
        (0..n - 1).collect()
    } else {
        (1..n - 1).collect()
    };

    let want_tau = c.dim() == 3;

    // Unit normals from tangent-projected second differences, for torsion.
    let mut binormals: HashMap<usize, [f64; 3]> = HashMap::new();
    if want_tau {
        for &i in &idx {
            if let Some(dd) = second_difference(c, i) {
                let k = vecn::norm(&dd);
                if k > TORSION_K_THRESHOLD {
                    let t = c.tangent(i);
                    let tv = [t[0], t[1], t[2]];
                    let mut nv = [dd[0], dd[1], dd[2]];
                    let proj = tv[0] * nv[0] + tv[1] * nv[1] + tv[2] * nv[2];
                    for (nj, tj) in nv.iter_mut().zip(&tv) {
                        *nj -= proj * tj;
                    }
                    let nn = (nv[0] * nv[0] + nv[1] * nv[1] + nv[2] * nv[2]).sqrt();
                    if nn > 0.0 {
                        for nj in nv.iter_mut() {
                            *nj /= nn;
                        }
                        binormals.insert(i, vecn::cross3(&tv, &nv));
                    }
                }
            }
        }
    }

    let mut out = Vec::with_capacity(idx.len());
    for &i in &idx {
        let dd = match second_difference(c, i) {
            Some(d) => d,
            None => continue,
        };
        let k = vecn::norm(&dd);
        let mut tau = None;
        if want_tau && k > TORSION_K_THRESHOLD {
            // tau = -<B', N> with centered differences of the binormal.
            let n_eff = n - 1;
            let (ip, im) = if c.is_closed() {
                (Some((i + 1) % n_eff), Some((i + n_eff - 1) % n_eff))
            } else {
                (
                    if i + 1 < n - 1 { Some(i + 1) } else { None },
                    if i > 1 { Some(i - 1) } else { None },
                )
            };
            if let (Some(ip), Some(im)) = (ip, im) {
                if let (Some(bp), Some(bm)) = (binormals.get(&ip), binormals.get(&im)) {
                    let mut nv = dd.clone();
                    let t = c.tangent(i);
                    let proj = vecn::dot(&nv, &t);
                    for (nj, tj) in nv.iter_mut().zip(&t) {
                        *nj -= proj * tj;
                    }
                    vecn::normalize(&mut nv);
                    let db = [
                        (bp[0] - bm[0]) / (2.0 * c.step()),
                        (bp[1] - bm[1]) / (2.0 * c.step()),
                        (bp[2] - bm[2]) / (2.0 * c.step()),
                    ];
                    tau = Some(-(db[0] * nv[0] + db[1] * nv[1] + db[2] * nv[2]));
                }
            }
        }
        out.push(ProfilePoint {
            s: c.s_at(i),
            k,
            tau,
        });
    }
    Ok(out)
}

/// p-bending energy by composite trapezoidal quadrature of k^p ds.
///
/// Open curves extrapolate the two endpoint curvatures linearly from the
/// first interior estimates (clamped at zero).
pub fn bending_energy(c: &SampledCurve, p: PExponent) -> Result<EnergyReport> {
    let profile = curvature_profile(c)?;
    let pv = p.get();
    let ds = c.step();
    let total_len = length(c);

    let mut integral = 0.0;
    if c.is_closed() {
        // Periodic trapezoid = plain sum over one period.
        for pt in &profile {
            integral += pt.k.powf(pv) * ds;
        }
    } else {
        for (j, pt) in profile.iter().enumerate() {
            let w = if j == 0 || j + 1 == profile.len() {
                0.5
            } else {
                1.0
            };
            integral += w * pt.k.powf(pv) * ds;
        }
        // End strips [0, ds] and [L - ds, L] with linearly extrapolated k.
        if profile.len() >= 2 {
            let k0 = (2.0 * profile[0].k - profile[1].k).max(0.0);
            let kn = (2.0 * profile[profile.len() - 1].k - profile[profile.len() - 2].k).max(0.0);
            integral += 0.5 * (k0.powf(pv) + profile[0].k.powf(pv)) * ds;
            integral += 0.5 * (kn.powf(pv) + profile[profile.len() - 1].k.powf(pv)) * ds;
        }
    }

    Ok(EnergyReport {
        length: total_len,
        bending: integral,
        normalized: total_len.powf(pv - 1.0) * integral,
        p: pv,
    })
}

/// Multiplicity of the point P on the curve: the number of parameter
/// clusters whose samples come within `tol` of P. Clusters are merged when
/// their arclength gap is at most 10 tol; closed curves merge across the
/// seam.
pub fn multiplicity(c: &SampledCurve, point: &[f64], tol: f64) -> usize {
    assert!(tol > 0.0);
    let n = if c.is_closed() { c.len() - 1 } else { c.len() };
    let hits: Vec<usize> = (0..n)
        .filter(|&i| vecn::dist(c.point(i), point) <= tol)
        .collect();
    if hits.is_empty() {
        return 0;
    }
    let gap_limit = ((10.0 * tol) / c.step()).ceil() as usize + 1;
    let mut clusters = 1usize;
    for w in hits.windows(2) {
        if w[1] - w[0] > gap_limit {
            clusters += 1;
        }
    }
    if c.is_closed() && clusters > 1 {
        let wrap_gap = n - hits[hits.len() - 1] + hits[0];
        if wrap_gap <= gap_limit {
            clusters -= 1;
        }
    }
    clusters
}

/// Self-proximity scan: every sample pair (i, j) beyond the adjacency
/// window whose distance is at most tol. Spatial hashing keeps the scan
/// near-linear.
pub(crate) fn proximal_pairs(c: &SampledCurve, tol: f64) -> Vec<(usize, usize)> {
    let n = if c.is_closed() { c.len() - 1 } else { c.len() };
    let dim = c.dim();
    // Samples closer than ~tol along the curve are within tol trivially
    // (unit-speed curves are 1-Lipschitz), so exclude a parameter window.
    let window = ((3.0 * tol / c.step()).ceil() as usize).max(3);
    let cell = tol.max(c.step());
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let key = |pt: &[f64]| -> Vec<i64> { pt.iter().map(|&x| (x / cell).floor() as i64).collect() };
    for i in 0..n {
        grid.entry(key(c.point(i))).or_default().push(i);
    }
    let mut offsets: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for base in &offsets {
            for d in -1..=1i64 {
                let mut v = base.clone();
                v.push(d);
                next.push(v);
            }
        }
        offsets = next;
    }
    let mut out = Vec::new();
    for i in 0..n {
        let k0 = key(c.point(i));
        for off in &offsets {
            let kk: Vec<i64> = k0.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(list) = grid.get(&kk) {
                for &j in list {
                    if j <= i {
                        continue;
                    }
                    let separation = if c.is_closed() {
                        (j - i).min(n - (j - i))
                    } else {
                        j - i
                    };
                    if separation <= window {
                        continue;
                    }
                    if vecn::dist(c.point(i), c.point(j)) <= tol {
                        out.push((i, j));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Embeddedness check: true iff no two non-adjacent samples come within
/// `tol`. The witness is the first offending parameter pair.
pub fn is_embedded(c: &SampledCurve, tol: f64) -> (bool, Option<(f64, f64)>) {
    let pairs = proximal_pairs(c, tol);
    match pairs.first() {
        None => (true, None),
        Some(&(i, j)) => (false, Some((c.s_at(i), c.s_at(j)))),
    }
}

/// Affine dimension: rank of the centered second-moment matrix, counting
/// singular values at least `tol` times the largest.
pub fn affine_dimension(c: &SampledCurve, tol: f64) -> usize {
    let n = c.len();
    let dim = c.dim();
    if n < 2 {
        return 0;
    }
    let mut mean = vec![0.0; dim];
    for i in 0..n {
        for (m, x) in mean.iter_mut().zip(c.point(i)) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let mut cov = MatN::identity(dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut s = 0.0;
            for i in 0..n {
                let pt = c.point(i);
                s += (pt[a] - mean[a]) * (pt[b] - mean[b]);
            }
            cov.set(a, b, s / n as f64);
        }
    }
    let eig = vecn::sym_eigenvalues(&cov);
    let largest = eig[0].max(0.0).sqrt();
    if largest <= 0.0 {
        return 0;
    }
    eig.iter()
        .filter(|&&e| e.max(0.0).sqrt() >= tol * largest)
        .count()
}
