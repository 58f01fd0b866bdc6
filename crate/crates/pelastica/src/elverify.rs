//! Euler-Lagrange certification for sampled curves: weak first-variation
//! residuals against a battery of test functions, strong ODE residuals for
//! the curvature/torsion system, first-integral conservation and boundary
//! condition checks.
//!
//! The weak form evaluated here is
//!   int_0^L (1-2p)|g''|^p <g',h'> + p|g''|^{p-2} <g'',h''> + lambda <g',h'>
//! which vanishes for every admissible test function h exactly when the
//! curve is a p-elastica with multiplier lambda.

use crate::curvekit::SampledCurve;
use crate::geom;
use crate::pelliptic::PExponent;
use crate::vecn;
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// One scalar test profile times a coordinate direction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TestFn {
    pub dir: usize,
    pub freq: u32,
}

/// A family of smooth vector fields on [0, L] vanishing at the endpoints
/// (and, for the clamped battery, with vanishing endpoint derivative).
#[derive(Debug, Clone, Serialize)]
pub struct TestFunctionBattery {
    pub funcs: Vec<TestFn>,
    pub length: f64,
    pub dim: usize,
    /// Clamped batteries (h = h' = 0 at the ends) test interior
    /// criticality; pinned batteries only force h = 0.
    pub clamped: bool,
}

impl TestFunctionBattery {
    /// Default battery: polynomial bump times sin(k pi s / L), cycling
    /// through the coordinate directions.
    pub fn clamped(dim: usize, length: f64, count: usize) -> Self {
        Self::build(dim, length, count, true)
    }

    /// Pinned battery: sin profiles with free endpoint derivatives.
    pub fn pinned(dim: usize, length: f64, count: usize) -> Self {
        Self::build(dim, length, count, false)
    }

    fn build(dim: usize, length: f64, count: usize, clamped: bool) -> Self {
        let funcs = (0..count)
            .map(|j| TestFn {
                dir: j % dim,
                freq: 1 + (j / dim) as u32,
            })
            .collect();
        TestFunctionBattery {
            funcs,
            length,
            dim,
            clamped,
        }
    }

    /// Scalar profile (phi, phi', phi'') of one battery member at s.
    pub fn profile(&self, f: &TestFn, s: f64) -> (f64, f64, f64) {
        let l = self.length;
        let w = f.freq as f64 * PI / l;
        let sn = (w * s).sin();
        let cs = (w * s).cos();
        if self.clamped {
            // bump = (s (L - s) / L^2)^2 kills value and slope at the ends.
            let u = s * (l - s) / (l * l);
            let up = (l - 2.0 * s) / (l * l);
            let upp = -2.0 / (l * l);
            let b = u * u;
            let bp = 2.0 * u * up;
            let bpp = 2.0 * up * up + 2.0 * u * upp;
            (
                b * sn,
                bp * sn + b * w * cs,
                bpp * sn + 2.0 * bp * w * cs - b * w * w * sn,
            )
        } else {
            (sn, w * cs, -w * w * sn)
        }
    }

    /// W^{2,1} norm of one member (integral of |h| + |h'| + |h''|).
    fn sobolev_norm(&self, f: &TestFn, n_samples: usize) -> f64 {
        let ds = self.length / (n_samples - 1) as f64;
        let mut acc = 0.0;
        for i in 0..n_samples {
            let (a, b, c) = self.profile(f, i as f64 * ds);
            let w = if i == 0 || i + 1 == n_samples { 0.5 } else { 1.0 };
            acc += w * (a.abs() + b.abs() + c.abs()) * ds;
        }
        acc
    }
}

/// Quantified verification outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub weak_residuals: Vec<f64>,
    pub lambda_used: f64,
    pub strong_residual_sup: Option<f64>,
    pub first_integral_drift: Option<f64>,
    pub tolerance: f64,
    pub verdict: bool,
}

/// Raw weak-form pairings for one battery member:
/// a = int (1-2p)k^p <g',h'> + p <W,h''>,  b = int <g',h'>.
fn weak_pairings(
    c: &SampledCurve,
    p: f64,
    battery: &TestFunctionBattery,
) -> Result<Vec<(f64, f64)>> {
    let n = c.len();
    if n < 5 {
        return Err(Error::InvalidCurve("too few samples for weak form".into()));
    }
    if battery.dim != c.dim() {
        return Err(Error::InvalidCurve(
            "battery dimension does not match curve".into(),
        ));
    }
    if (battery.length - geom::length(c)).abs() > 0.01 * battery.length {
        return Err(Error::InvalidCurve(
            "battery length does not match curve".into(),
        ));
    }
    let ds = c.step();
    let ds2 = ds * ds;
    let mut out = vec![(0.0, 0.0); battery.funcs.len()];

    for i in 1..n - 1 {
        let s = c.s_at(i);
        let prev = c.point(i - 1);
        let here = c.point(i);
        let next = c.point(i + 1);
        let dim = c.dim();
        // gamma' and gamma'' by central differences.
        let mut g1 = vec![0.0; dim];
        let mut g2 = vec![0.0; dim];
        for d in 0..dim {
            g1[d] = (next[d] - prev[d]) / (2.0 * ds);
            g2[d] = (next[d] - 2.0 * here[d] + prev[d]) / ds2;
        }
        let k = vecn::norm(&g2);
        let kp = k.powf(p);
        // W = |g''|^{p-2} g'' stays bounded as k -> 0 since p > 1.
        let wfac = if k > 0.0 { k.powf(p - 2.0) } else { 0.0 };
        let weight = if i == 1 || i == n - 2 { 0.5 } else { 1.0 };

        for (j, f) in battery.funcs.iter().enumerate() {
            let (_, hp, hpp) = battery.profile(f, s);
            let d = f.dir;
            let t1 = g1[d] * hp;
            let t2 = wfac * g2[d] * hpp;
            out[j].0 += weight * ((1.0 - 2.0 * p) * kp * t1 + p * t2) * ds;
            out[j].1 += weight * t1 * ds;
        }
    }
    Ok(out)
}

/// Weak first-variation residuals at a given multiplier. Residuals are
/// normalized by the test function's W^{2,1} norm times (1 + B_p).
pub fn weak_el_residual(
    c: &SampledCurve,
    p: PExponent,
    lambda: f64,
    battery: &TestFunctionBattery,
    tol: f64,
) -> Result<ResidualReport> {
    let pairings = weak_pairings(c, p.get(), battery)?;
    let energy = geom::bending_energy(c, p)?.bending;
    let n = c.len();
    let mut residuals = Vec::with_capacity(pairings.len());
    for (f, &(a, b)) in battery.funcs.iter().zip(&pairings) {
        let raw = a + lambda * b;
        let norm = battery.sobolev_norm(f, n.min(4001)) * (1.0 + energy);
        residuals.push(raw.abs() / norm);
    }
    let verdict = residuals.iter().all(|&r| r <= tol);
    Ok(ResidualReport {
        weak_residuals: residuals,
        lambda_used: lambda,
        strong_residual_sup: None,
        first_integral_drift: None,
        tolerance: tol,
        verdict,
    })
}

/// Least-squares multiplier estimate: the lambda minimizing the weak
/// residual vector over the battery.
pub fn estimate_lambda(
    c: &SampledCurve,
    p: PExponent,
    battery: &TestFunctionBattery,
) -> Result<f64> {
    let pairings = weak_pairings(c, p.get(), battery)?;
    let bb: f64 = pairings.iter().map(|&(_, b)| b * b).sum();
    let ab: f64 = pairings.iter().map(|&(a, b)| a * b).sum();
    let aa: f64 = pairings.iter().map(|&(a, _)| a * a).sum();
    if bb <= 1e-16 * (1.0 + aa) {
        return Err(Error::CannotEstimate(
            "all length-variation responses vanish; any multiplier is \
             compatible (straight line)"
                .into(),
        ));
    }
    Ok(-ab / bb)
}

/// Strong Euler-Lagrange residuals for the curvature/torsion system:
/// r1 = p (k^{p-1})'' + (p-1) k^{p+1} - p k^{p-1} tau^2 - lambda k,
/// r2 = k^{2p-2} tau - C,
/// evaluated by central differences where k stays positive.
pub fn strong_residual_k_tau(
    ks: &[f64],
    taus: &[f64],
    step: f64,
    p: PExponent,
    lambda: f64,
    c_const: f64,
) -> Result<(f64, f64)> {
    if ks.len() != taus.len() || ks.len() < 3 {
        return Err(Error::InvalidCurve("profiles too short or mismatched".into()));
    }
    let pv = p.get();
    let w: Vec<f64> = ks.iter().map(|&k| k.max(0.0).powf(pv - 1.0)).collect();
    let mut r1_sup = 0.0f64;
    let mut r2_sup = 0.0f64;
    let mut any = false;
    for i in 1..ks.len() - 1 {
        let k = ks[i];
        if k <= geom::TORSION_K_THRESHOLD || ks[i - 1] <= 0.0 || ks[i + 1] <= 0.0 {
            continue;
        }
        any = true;
        let wpp = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (step * step);
        let tau = taus[i];
        let r1 = pv * wpp + (pv - 1.0) * k.powf(pv + 1.0)
            - pv * w[i] * tau * tau
            - lambda * k;
        let r2 = k.powf(2.0 * pv - 2.0) * tau - c_const;
        r1_sup = r1_sup.max(r1.abs());
        r2_sup = r2_sup.max(r2.abs());
    }
    if !any {
        return Err(Error::Domain(
            "curvature not positive anywhere in the window".into(),
        ));
    }
    Ok((r1_sup, r2_sup))
}

/// First-integral profile of the w-equation:
/// A(s) = w'^2 + (p-1)^2/p^2 w^{2p/(p-1)}
///        - 2 lambda (p-1)/p^2 w^{p/(p-1)} + C^2 w^{-2}.
#[derive(Debug, Clone, Serialize)]
pub struct FirstIntegralProfile {
    pub values: Vec<f64>,
    /// max - min over the evaluated window.
    pub drift: f64,
}

pub fn first_integral_profile(
    ws: &[f64],
    step: f64,
    p: PExponent,
    lambda: f64,
    c_const: f64,
) -> Result<FirstIntegralProfile> {
    if ws.len() < 3 {
        return Err(Error::InvalidCurve("profile too short".into()));
    }
    let pv = p.get();
    let mut values = Vec::with_capacity(ws.len() - 2);
    for i in 1..ws.len() - 1 {
        let w = ws[i];
        if w <= 0.0 {
            if c_const != 0.0 {
                return Err(Error::BlowUp(
                    "w reaches zero with C != 0: the first integral diverges".into(),
                ));
            }
            continue;
        }
        let wp = (ws[i + 1] - ws[i - 1]) / (2.0 * step);
        let a = wp * wp + ((pv - 1.0) / pv).powi(2) * w.powf(2.0 * pv / (pv - 1.0))
            - 2.0 * lambda * (pv - 1.0) / (pv * pv) * w.powf(pv / (pv - 1.0))
            + c_const * c_const / (w * w);
        values.push(a);
    }
    if values.is_empty() {
        return Err(Error::Domain("no positive-curvature samples".into()));
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(FirstIntegralProfile {
        values,
        drift: max - min,
    })
}

/// Detection threshold for zeros of the w-profile.
const ZERO_THRESHOLD: f64 = 1e-7;

/// Check the interval-transfer symmetry at interior zeros of w: the
/// one-sided slopes on both sides of each zero must be opposite
/// (both vanish at flat-core joints).
pub fn joint_symmetry_check(ws: &[f64], step: f64) -> bool {
    let n = ws.len();
    if n < 9 {
        return true;
    }
    let w_max = ws.iter().cloned().fold(0.0f64, f64::max);
    let thresh = ZERO_THRESHOLD * w_max.max(1.0);
    let slope_tol = 1e-3 * (w_max / (n as f64 * step)).max(1e-9);

    // One-sided 4-point stencils.
    let fwd = |i: usize| {
        (-11.0 * ws[i] + 18.0 * ws[i + 1] - 9.0 * ws[i + 2] + 2.0 * ws[i + 3]) / (6.0 * step)
    };
    let bwd = |i: usize| {
        (11.0 * ws[i] - 18.0 * ws[i - 1] + 9.0 * ws[i - 2] - 2.0 * ws[i - 3]) / (6.0 * step)
    };

    let mut i = 4;
    while i + 4 < n {
        if ws[i] <= thresh {
            // Zero cluster [i, j).
            let mut j = i;
            while j < n && ws[j] <= thresh {
                j += 1;
            }
            if i >= 4 && j + 4 <= n {
                let left = bwd(i);
                let right = fwd(j - 1);
                let scale = left.abs().max(right.abs());
                if scale > slope_tol && (left + right).abs() > 1e-2 * scale {
                    return false;
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    true
}

/// Outcome of the natural boundary condition check k(0) = k(L) = 0.
#[derive(Debug, Clone, Serialize)]
pub struct NaturalBcReport {
    /// Extrapolated endpoint curvatures (k units).
    pub k_start: f64,
    pub k_end: f64,
    /// Endpoint values of w = k^{p-1} relative to max w; this is the
    /// nondegenerate scale at curvature zeros (w vanishes linearly there,
    /// while k itself vanishes only like s^{1/(p-1)}).
    pub w_start_rel: f64,
    pub w_end_rel: f64,
    pub ok: bool,
}

/// Relative w-tolerance for the natural boundary condition.
pub const NATURAL_BC_TOL: f64 = 1e-6;

/// Check the pinned natural boundary conditions k(0) = k(L) = 0 by linear
/// extrapolation of the w = k^{p-1} profile to the curve ends.
pub fn natural_bc_check(c: &SampledCurve, p: PExponent) -> Result<NaturalBcReport> {
    if c.is_closed() {
        return Err(Error::InvalidCurve(
            "natural boundary conditions apply to open curves".into(),
        ));
    }
    let prof = geom::curvature_profile(c)?;
    if prof.len() < 4 {
        return Err(Error::InvalidCurve("too few samples".into()));
    }
    let pv = p.get();
    let w: Vec<f64> = prof.iter().map(|pt| pt.k.powf(pv - 1.0)).collect();
    let w_max = w.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let n = w.len();
    let w0 = (2.0 * w[0] - w[1]).max(0.0);
    let wn = (2.0 * w[n - 1] - w[n - 2]).max(0.0);
    let (r0, rn) = (w0 / w_max, wn / w_max);
    Ok(NaturalBcReport {
        k_start: w0.powf(1.0 / (pv - 1.0)),
        k_end: wn.powf(1.0 / (pv - 1.0)),
        w_start_rel: r0,
        w_end_rel: rn,
        ok: r0 <= NATURAL_BC_TOL && rn <= NATURAL_BC_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvekit::{
        figure_eight, flat_core_curve, flat_core_lambda, leaf, line_segment, wavelike_arc,
        FlatCoreSpec, SampledCurve,
    };
    use crate::pelliptic::{complete_pair, q_star, Modulus, PExponent};

    fn pex(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    fn circle(dim: usize, ds: f64) -> SampledCurve {
        let total = 2.0 * std::f64::consts::PI;
        let (n, ds_eff) = crate::curvekit::snap_step(total, ds);
        SampledCurve::from_fn(dim, ds_eff, n, true, |i| {
            let a = i as f64 * ds_eff;
            let mut p = vec![0.0; dim];
            p[0] = a.cos();
            p[1] = a.sin();
            p
        })
    }

    #[test]
    fn straight_line_is_critical_at_lambda_zero() {
        let c = line_segment(2.0, 3, 1e-3).unwrap();
        let battery = TestFunctionBattery::clamped(3, 2.0, 12);
        let rep = weak_el_residual(&c, pex(2.0), 0.0, &battery, 1e-4).unwrap();
        assert!(rep.verdict, "{:?}", rep.weak_residuals);
        assert!(rep.weak_residuals.iter().all(|&r| r < 1e-8));
    }

    #[test]
    fn circle_is_critical_at_lambda_p_minus_one() {
        for &pv in &[1.5, 2.0, 3.0] {
            let c = circle(2, 1e-4);
            let battery = TestFunctionBattery::clamped(2, geom::length(&c), 12);
            let rep = weak_el_residual(&c, pex(pv), pv - 1.0, &battery, 1e-4).unwrap();
            assert!(rep.verdict, "p = {pv}: {:?}", rep.weak_residuals);
            // A wrong multiplier is detected.
            let bad = weak_el_residual(&c, pex(pv), pv + 1.0, &battery, 1e-4).unwrap();
            assert!(!bad.verdict, "p = {pv} should fail at wrong lambda");
        }
    }

    #[test]
    fn lambda_estimate_recovers_circle_multiplier() {
        for &pv in &[1.5, 2.0, 3.0] {
            let c = circle(2, 1e-4);
            let battery = TestFunctionBattery::clamped(2, geom::length(&c), 12);
            let est = estimate_lambda(&c, pex(pv), &battery).unwrap();
            assert!((est - (pv - 1.0)).abs() < 1e-4, "p = {pv}: {est}");
        }
    }

    #[test]
    fn lambda_estimate_fails_on_line() {
        let c = line_segment(2.0, 2, 1e-3).unwrap();
        let battery = TestFunctionBattery::clamped(2, 2.0, 12);
        assert!(matches!(
            estimate_lambda(&c, pex(2.0), &battery),
            Err(Error::CannotEstimate(_))
        ));
    }

    #[test]
    fn figure_eight_lambda_consistent_across_batteries() {
        let p = pex(2.0);
        let c = figure_eight(p, 2, 1e-4).unwrap();
        let len = geom::length(&c);
        let b1 = TestFunctionBattery::clamped(2, len, 8);
        let b2 = TestFunctionBattery::clamped(2, len, 20);
        let l1 = estimate_lambda(&c, p, &b1).unwrap();
        let l2 = estimate_lambda(&c, p, &b2).unwrap();
        assert!(
            (l1 - l2).abs() < 1e-3 * l1.abs().max(1.0),
            "batteries disagree: {l1} vs {l2}"
        );
        let rep = weak_el_residual(&c, p, l1, &b2, 1e-4).unwrap();
        assert!(rep.verdict, "{:?}", rep.weak_residuals);
    }

    #[test]
    fn wavelike_passes_but_leafed_joint_turning_is_detected() {
        // Interior wavelike window at generic modulus: critical.
        let p = pex(3.0);
        let q = Modulus::new(0.75).unwrap();
        let k_cell = complete_pair(p, q).unwrap().k;
        let arc = wavelike_arc(p, q, (-0.9 * k_cell, 0.9 * k_cell), 1e-4).unwrap();
        let battery = TestFunctionBattery::clamped(2, geom::length(&arc), 12);
        let lambda = estimate_lambda(&arc, p, &battery).unwrap();
        let rep = weak_el_residual(&arc, p, lambda, &battery, 1e-4).unwrap();
        assert!(rep.verdict, "wavelike: {:?}", rep.weak_residuals);

        // A closed 3-leafed curve turns by 2 phi* at each joint passage:
        // it minimizes energy in its multiplicity class but is not an
        // unconstrained critical point, since a curvature zero with
        // nonvanishing w' forces straight same-plane continuation. The
        // battery must flag the first-order defect at the joints.
        let p2 = pex(2.0);
        let tuple = crate::curvekit::omega_tuple_spatial(3, p2).unwrap();
        let spec = crate::curvekit::LeafedSpec::new(tuple, 1.0, vec![0.0; 3]).unwrap();
        let clover = crate::curvekit::m_leafed_curve(&spec, 1e-4).unwrap();
        let battery = TestFunctionBattery::clamped(3, geom::length(&clover), 12);
        let lambda = estimate_lambda(&clover, p2, &battery).unwrap();
        let rep = weak_el_residual(&clover, p2, lambda, &battery, 1e-4).unwrap();
        assert!(!rep.verdict, "joint turning must be detected");
    }

    #[test]
    fn flat_core_curve_is_critical_at_canonical_lambda() {
        let p = pex(3.0);
        let spec = FlatCoreSpec::new(
            p,
            3,
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.0, 0.8, 0.0],
        )
        .unwrap();
        let c = flat_core_curve(&spec, 1e-4).unwrap();
        let battery = TestFunctionBattery::clamped(3, geom::length(&c), 12);
        let rep =
            weak_el_residual(&c, p, flat_core_lambda(3.0), &battery, 1e-4).unwrap();
        assert!(rep.verdict, "{:?}", rep.weak_residuals);
    }

    #[test]
    fn strong_residual_constant_helix_data() {
        // Constant (k0, tau0) with matched lambda and C solves both
        // equations exactly.
        let (k0, tau0, pv): (f64, f64, f64) = (1.3, 0.4, 2.5);
        let lambda = (pv - 1.0) * k0.powf(pv) - pv * k0.powf(pv - 2.0) * tau0 * tau0;
        let c_const = k0.powf(2.0 * pv - 2.0) * tau0;
        let ks = vec![k0; 100];
        let taus = vec![tau0; 100];
        let (r1, r2) =
            strong_residual_k_tau(&ks, &taus, 1e-3, pex(pv), lambda, c_const).unwrap();
        assert!(r1 < 1e-10 && r2 < 1e-12, "{r1} {r2}");
    }

    #[test]
    fn wavelike_profile_solves_planar_strong_el() {
        // On a window with k > 0 the closed-form curvature 2 q cn solves
        // the C = 0 strong equation at the multiplier estimated from the
        // weak form of the sampled curve. Second differences quadruple any
        // sampling noise by 1/ds^2, so the profile comes from the closed
        // form, not from curve positions.
        let p = pex(2.0);
        let q = Modulus::new(0.6).unwrap();
        let k_cell = complete_pair(p, q).unwrap().k;
        let c = wavelike_arc(p, q, (-0.9 * k_cell, 0.9 * k_cell), 1e-4).unwrap();
        let battery = TestFunctionBattery::clamped(2, geom::length(&c), 12);
        let lambda = estimate_lambda(&c, p, &battery).unwrap();

        let ds = 1e-3;
        let mut smp = crate::pelliptic::WaveSampler::new(2.0, 0.6).unwrap();
        let n = (1.8 * k_cell / ds) as usize;
        let ks: Vec<f64> = (0..=n)
            .map(|i| {
                let s = -0.9 * k_cell + i as f64 * ds;
                2.0 * 0.6 * smp.eval(s).unwrap().cn
            })
            .collect();
        let taus = vec![0.0; ks.len()];
        let (r1, r2) = strong_residual_k_tau(&ks, &taus, ds, p, lambda, 0.0).unwrap();
        assert!(r1 < 1e-4, "strong residual {r1}");
        assert_eq!(r2, 0.0);
    }

    #[test]
    fn first_integral_of_circle_profile() {
        // w = 1, w' = 0, C = 0, lambda = p - 1: A = -(p-1)^2/p^2.
        for &pv in &[1.5, 2.0, 3.0] {
            let ws = vec![1.0; 50];
            let fi = first_integral_profile(&ws, 1e-3, pex(pv), pv - 1.0, 0.0).unwrap();
            let expect = -((pv - 1.0) / pv).powi(2);
            assert!(fi.drift < 1e-14);
            assert!((fi.values[0] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn first_integral_flags_blowup() {
        let ws = vec![1.0, 0.5, 0.0, 0.5, 1.0];
        assert!(matches!(
            first_integral_profile(&ws, 1e-3, pex(2.0), 1.0, 0.5),
            Err(Error::BlowUp(_))
        ));
    }

    #[test]
    fn flat_core_loop_first_integral_is_zero() {
        // w = (2 sech_p)^{p-1} with the canonical multiplier sits on the
        // A = 0 level set (w and w' vanish together at the support ends).
        let p = pex(3.0);
        let k_support = crate::pelliptic::k_p1(p).unwrap();
        let ds = 1e-4;
        let n = (1.9 * k_support / ds) as usize;
        let ws: Vec<f64> = (0..=n)
            .map(|i| {
                let s = -0.95 * k_support + i as f64 * ds;
                (2.0 * crate::pelliptic::sech_p(p, s).unwrap()).powf(2.0)
            })
            .collect();
        let fi = first_integral_profile(&ws, ds, p, flat_core_lambda(3.0), 0.0).unwrap();
        let worst = fi.values.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-6, "A profile deviates from 0 by {worst}");
    }

    #[test]
    fn joint_symmetry_on_wavelike_and_synthetic() {
        // Wavelike w-profile crosses zero with mirror slopes.
        let p = pex(2.0);
        let q = q_star(p).unwrap();
        let k_cell = complete_pair(p, q).unwrap().k;
        let c = wavelike_arc(p, Modulus::new(q.get()).unwrap(), (0.0, 4.0 * k_cell), 1e-4)
            .unwrap();
        let prof = geom::curvature_profile(&c).unwrap();
        let ws: Vec<f64> = prof.iter().map(|x| x.k).collect();
        assert!(joint_symmetry_check(&ws, c.step()));
        // Flat-core joints: both one-sided slopes vanish, so the check
        // holds vacuously across the zero plateau between two loops.
        let p3 = pex(3.0);
        let ksup = crate::pelliptic::k_p1(p3).unwrap();
        let h = 1e-3;
        let n = (2.0 * (2.0 * ksup + 0.5) / h) as usize;
        let ws: Vec<f64> = (0..=n)
            .map(|i| {
                let s = i as f64 * h;
                // Two sech bumps separated by a straight gap of 0.5.
                let s1 = s - ksup;
                let s2 = s - (3.0 * ksup + 0.5);
                let k = 2.0 * crate::pelliptic::sech_p(p3, s1).unwrap()
                    + 2.0 * crate::pelliptic::sech_p(p3, s2).unwrap();
                k.powf(2.0)
            })
            .collect();
        assert!(joint_symmetry_check(&ws, h), "flat-core joints are vacuous");
        // Synthetic profile with equal-sign slopes around a zero: w drops
        // to zero and leaves flat, violating the transfer symmetry.
        let n = 400;
        let ws: Vec<f64> = (0..n)
            .map(|i| {
                let s = i as f64 / n as f64;
                if s < 0.5 {
                    (0.5 - s).max(0.0)
                } else {
                    2.0 * (s - 0.5)
                }
            })
            .collect();
        assert!(!joint_symmetry_check(&ws, 1.0 / n as f64));
    }

    #[test]
    fn lambda_estimate_invariant_under_rigid_motion() {
        let p = pex(2.0);
        let c = figure_eight(p, 2, 1e-3).unwrap();
        let len = geom::length(&c);
        let battery = TestFunctionBattery::clamped(2, len, 12);
        let l0 = estimate_lambda(&c, p, &battery).unwrap();
        let rot = crate::vecn::MatN::from_rows(&[vec![0.6, -0.8], vec![0.8, 0.6]]);
        let moved =
            crate::curvekit::similarity_transform(&c, 1.0, &rot, &[3.0, -2.0]).unwrap();
        let l1 = estimate_lambda(&moved, p, &battery).unwrap();
        assert!((l0 - l1).abs() < 1e-8 * l0.abs().max(1.0), "{l0} vs {l1}");
    }

    #[test]
    fn first_integral_drift_refines_quadratically() {
        // With the exact flat-core multiplier the A-level is exactly zero,
        // so the measured drift is pure central-difference error, O(h^2):
        // halving the grid reduces it by about 4x on a smooth window.
        let p = pex(3.0);
        let k_support = crate::pelliptic::k_p1(p).unwrap();
        let drift_at = |h: f64| {
            let n = (k_support / (2.0 * h)) as usize;
            let ws: Vec<f64> = (0..=n)
                .map(|i| {
                    let s = 0.2 * k_support + i as f64 * h;
                    (2.0 * crate::pelliptic::sech_p(p, s).unwrap()).powf(2.0)
                })
                .collect();
            first_integral_profile(&ws, h, p, flat_core_lambda(3.0), 0.0)
                .unwrap()
                .drift
        };
        let coarse = drift_at(2e-2);
        let fine = drift_at(1e-2);
        assert!(
            coarse > 3.0 * fine && coarse < 6.0 * fine,
            "O(h^2) refinement: {coarse} -> {fine}"
        );
    }

    #[test]
    fn natural_bc_leaf_true_circle_arc_false() {
        let p = pex(2.0);
        let lf = leaf(p, 1e-4).unwrap();
        let rep = natural_bc_check(&lf, p).unwrap();
        assert!(rep.ok, "leaf endpoints carry k = 0: {rep:?}");

        // A circular arc has k = 1 at its endpoints.
        let (n, ds_eff) = crate::curvekit::snap_step(1.0, 1e-4);
        let arc = SampledCurve::from_fn(2, ds_eff, n, false, |i| {
            let a = i as f64 * ds_eff;
            vec![a.cos(), a.sin()]
        });
        let rep = natural_bc_check(&arc, p).unwrap();
        assert!(!rep.ok);
        assert!((rep.k_start - 1.0).abs() < 1e-3);
    }

    #[test]
    fn battery_boundary_conditions_hold() {
        let clamped = TestFunctionBattery::clamped(3, 2.0, 12);
        for f in &clamped.funcs {
            let (v0, d0, _) = clamped.profile(f, 0.0);
            let (v1, d1, _) = clamped.profile(f, 2.0);
            assert!(v0 == 0.0 && v1.abs() < 1e-15);
            assert!(d0.abs() < 1e-15 && d1.abs() < 1e-15, "clamped derivative");
        }
        let pinned = TestFunctionBattery::pinned(3, 2.0, 12);
        for f in &pinned.funcs {
            let (v0, d0, _) = pinned.profile(f, 0.0);
            let (v1, _, _) = pinned.profile(f, 2.0);
            assert!(v0 == 0.0 && v1.abs() < 1e-12);
            assert!(d0.abs() > 0.1, "pinned endpoint slope stays free");
        }
        // 12 members cycle all directions and four frequencies in R^3.
        let dirs: std::collections::HashSet<usize> =
            clamped.funcs.iter().map(|f| f.dir).collect();
        assert_eq!(dirs.len(), 3);
    }
}
