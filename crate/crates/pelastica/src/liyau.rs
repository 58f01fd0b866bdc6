//! The multiplicity inequality B̄_p >= varpi_p^* m^p for closed curves,
//! the existence classification of closed m-leafed curves, and the
//! embeddedness thresholds it implies.

use crate::curvekit::SampledCurve;
use crate::geom;
use crate::pelliptic::{self, PExponent};
use crate::vecn;
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Outcome of one inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct LiYauReport {
    /// Maximal multiplicity found among near-coincidence points.
    pub m: usize,
    /// varpi_p^* m^p.
    pub bound: f64,
    /// Measured normalized bending energy.
    pub measured: f64,
    pub satisfied: bool,
    /// measured - bound.
    pub gap: f64,
    /// True when the equality case was certified structurally
    /// (equal leaf lengths, per-leaf normalized energy varpi_p^*).
    pub leaf_certified: bool,
    /// The multiplicity point used, when m >= 2.
    pub joint: Option<Vec<f64>>,
}

/// The inequality bound varpi_p^* m^p.
pub fn liyau_bound(p: PExponent, m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("multiplicity must be >= 1".into()));
    }
    Ok(pelliptic::varpi_star(p)? * (m as f64).powf(p.get()))
}

/// Locate the highest-multiplicity near-coincidence point of a closed
/// curve: candidate points from the self-proximity scan, scored by
/// cluster-counting multiplicity.
fn best_multiplicity_point(c: &SampledCurve, tol: f64) -> (usize, Option<Vec<f64>>) {
    let pairs = geom::proximal_pairs(c, tol);
    if pairs.is_empty() {
        return (1, None);
    }
    // Candidate joints: deduplicate pair endpoints spatially.
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    'outer: for &(i, _) in &pairs {
        let pt = c.point(i).to_vec();
        for known in &candidates {
            if vecn::dist(&pt, known) <= 2.0 * tol {
                continue 'outer;
            }
        }
        candidates.push(pt);
        if candidates.len() > 64 {
            break;
        }
    }
    let mut best = (1usize, None);
    for cand in candidates {
        let m = geom::multiplicity(c, &cand, tol);
        if m > best.0 {
            best = (m, Some(cand));
        }
    }
    best
}

/// Check the inequality on a closed curve. The multiplicity point is the
/// strongest (largest m) of the detected near-coincidences; curves without
/// self-intersections report m = 1 and a vacuously satisfied verdict.
pub fn check_liyau(c: &SampledCurve, p: PExponent, tol: f64) -> Result<LiYauReport> {
    if !c.is_closed() {
        return Err(Error::InvalidCurve(
            "the multiplicity inequality applies to closed curves".into(),
        ));
    }
    let proximity_tol = (5.0 * c.step()).max(1e-9);
    let (m, joint) = best_multiplicity_point(c, proximity_tol);
    let energy = geom::bending_energy(c, p)?;
    let bound = liyau_bound(p, m.max(1))?;
    let gap = energy.normalized - bound;
    let satisfied = if m < 2 {
        true
    } else {
        energy.normalized >= bound - tol * bound.max(1.0)
    };
    let mut leaf_certified = false;
    if m >= 2 && gap.abs() <= tol * bound {
        if let Some(jp) = &joint {
            if let Ok(dec) = leaf_decomposition(c, jp, tol) {
                leaf_certified = dec.certified;
            }
        }
    }
    Ok(LiYauReport {
        m,
        bound,
        measured: energy.normalized,
        satisfied,
        gap,
        leaf_certified,
        joint,
    })
}

/// Existence classification result.
#[derive(Debug, Clone, Serialize)]
pub struct ExistenceReport {
    pub exists: bool,
    /// Names the witnessing construction when one exists.
    pub witness: Option<&'static str>,
}

/// Angle tolerance shared with the planar tuple construction.
const ANGLE_TOL: f64 = 1e-9;

/// Does a closed m-leafed curve exist at exponent p in R^n?
///
/// Even m: always (m/2-times covered figure-eight, planar). Odd m: never
/// below p_m^*; at the admissible rational crossing angles, in the plane;
/// strictly above p_m^* otherwise, in R^3 but not in R^2.
pub fn leafed_exists(p: PExponent, m: usize, n: usize) -> Result<ExistenceReport> {
    if m < 2 || n < 2 {
        return Err(Error::Domain("need m >= 2 and n >= 2".into()));
    }
    if m % 2 == 0 {
        return Ok(ExistenceReport {
            exists: true,
            witness: Some("covered-figure-eight"),
        });
    }
    let phi = pelliptic::phi_star(p)?;
    // Planar membership: phi^*(p) = i pi / (2 m') for admissible (i, m').
    let mut planar = false;
    let mut mp = 3;
    while mp as usize <= m {
        let mut i = 2;
        while i < mp {
            if (phi - i as f64 * PI / (2.0 * mp as f64)).abs() <= ANGLE_TOL {
                planar = true;
            }
            i += 2;
        }
        mp += 2;
    }
    // Strictly above the threshold angle (m-1)pi/(2m) <=> p > p_m^*.
    let threshold = (m as f64 - 1.0) * PI / (2.0 * m as f64);
    let strictly_above = phi < threshold - ANGLE_TOL;

    let (exists, witness) = if planar {
        (true, Some("planar-tuple"))
    } else if strictly_above && n >= 3 {
        (true, Some("latitude-tuple"))
    } else {
        (false, None)
    };
    Ok(ExistenceReport { exists, witness })
}

/// Energy threshold below which every closed curve is embedded:
/// 2^p varpi_p^* (the normalized energy of the 1-fold figure-eight).
pub fn embeddedness_threshold(p: PExponent) -> Result<f64> {
    Ok(2f64.powf(p.get()) * pelliptic::varpi_star(p)?)
}

/// Embedding certificate.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingCertificate {
    pub embedded: bool,
    /// True when decided by the sufficient energy criterion alone.
    pub by_energy: bool,
    pub threshold: f64,
    pub measured: f64,
}

/// Certify embeddedness: by the energy criterion when the normalized
/// energy sits below the threshold; otherwise by the geometric
/// self-proximity scan.
pub fn certify_embedded(c: &SampledCurve, p: PExponent) -> Result<EmbeddingCertificate> {
    let threshold = embeddedness_threshold(p)?;
    let measured = geom::bending_energy(c, p)?.normalized;
    if measured < threshold {
        return Ok(EmbeddingCertificate {
            embedded: true,
            by_energy: true,
            threshold,
            measured,
        });
    }
    let tol = (5.0 * c.step()).max(1e-9);
    let (ok, _) = geom::is_embedded(c, tol);
    Ok(EmbeddingCertificate {
        embedded: ok,
        by_energy: false,
        threshold,
        measured,
    })
}

/// Penalized-energy threshold for embeddedness preservation:
/// B_p + lambda L <= 2p (lambda/(p-1))^{(p-1)/p} (varpi_p^*)^{1/p}.
pub fn penalized_threshold(p: PExponent, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("penalization weight must be positive".into()));
    }
    let pv = p.get();
    Ok(2.0 * pv * (lambda / (pv - 1.0)).powf((pv - 1.0) / pv)
        * pelliptic::varpi_star(p)?.powf(1.0 / pv))
}

/// Decomposition of a closed curve at a multiplicity point.
#[derive(Debug)]
pub struct LeafDecomposition {
    pub leaves: Vec<SampledCurve>,
    pub lengths: Vec<f64>,
    pub per_leaf_normalized: Vec<f64>,
    /// True iff all lengths agree within tolerance and every leaf carries
    /// normalized energy varpi_p^* within tolerance (the equality case).
    pub certified: bool,
}

/// Cut a closed curve at its passages through `joint` and certify the
/// equality-case structure.
pub fn leaf_decomposition(
    c: &SampledCurve,
    joint: &[f64],
    tol: f64,
) -> Result<LeafDecomposition> {
    if !c.is_closed() {
        return Err(Error::InvalidCurve("leaf decomposition needs a closed curve".into()));
    }
    let p = PExponent::new(c.meta.p.ok_or_else(|| {
        Error::InvalidCurve("curve metadata must carry the exponent p".into())
    })?)?;
    let prox = (5.0 * c.step()).max(1e-9);
    let n = c.len() - 1;
    // Passage clusters through the joint.
    let mut reps: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < n {
        if vecn::dist(c.point(i), joint) <= prox {
            let start = i;
            let mut best = (f64::INFINITY, i);
            while i < n && vecn::dist(c.point(i), joint) <= prox {
                let d = vecn::dist(c.point(i), joint);
                if d < best.0 {
                    best = (d, i);
                }
                i += 1;
            }
            let _ = start;
            reps.push(best.1);
        } else {
            i += 1;
        }
    }
    // Merge a cluster wrapping around the seam.
    if reps.len() >= 2 {
        let first = reps[0];
        let last = *reps.last().unwrap();
        if first + (n - last) <= ((10.0 * prox) / c.step()).ceil() as usize {
            // Keep the closer representative.
            if vecn::dist(c.point(first), joint) <= vecn::dist(c.point(last), joint) {
                reps.pop();
            } else {
                reps.remove(0);
            }
        }
    }
    let m = reps.len();
    if m < 2 {
        return Err(Error::Domain(format!(
            "multiplicity at the joint is {m}, need >= 2"
        )));
    }

    let mut leaves = Vec::with_capacity(m);
    let mut lengths = Vec::with_capacity(m);
    let mut normalized = Vec::with_capacity(m);
    for j in 0..m {
        let a = reps[j];
        let b = reps[(j + 1) % m];
        let span = if b > a { b - a } else { n - a + b };
        let leaf = SampledCurve::from_fn(c.dim(), c.step(), span, false, |t| {
            c.point((a + t) % n).to_vec()
        });
        let rep = geom::bending_energy(&leaf, p)?;
        lengths.push(rep.length);
        normalized.push(rep.normalized);
        leaves.push(leaf);
    }

    let varpi = pelliptic::varpi_star(p)?;
    let mean_len = lengths.iter().sum::<f64>() / m as f64;
    let lengths_ok = lengths
        .iter()
        .all(|&l| (l - mean_len).abs() <= tol * mean_len);
    let energy_ok = normalized
        .iter()
        .all(|&e| (e - varpi).abs() <= tol * varpi);
    Ok(LeafDecomposition {
        leaves,
        lengths,
        per_leaf_normalized: normalized,
        certified: lengths_ok && energy_ok,
    })
}
