//! Torsion-carrying (spatial) solutions: fixed-step RK4 integration of the
//! curvature ODE in the substituted variable w = k^{p-1},
//!
//!   w'' = lambda/p w^{1/(p-1)} - (p-1)/p w^{(p+1)/(p-1)} + C^2 w^{-3},
//!
//! with torsion tau = C / w^2, followed by Frenet reconstruction
//! T' = k N, N' = -k T + tau B, B' = -tau N with per-step
//! re-orthonormalization. Conservation of the first integral is monitored,
//! not enforced.

use crate::curvekit::SampledCurve;
use crate::elverify::{self, weak_el_residual, ResidualReport, TestFunctionBattery};
use crate::geom;
use crate::pelliptic::{self, PExponent};
use crate::vecn::cross3;
use crate::{Error, Result};
use serde::Serialize;

/// The Lagrange pair (p, lambda) with the torsion constant C and derived
/// flat-core constants.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSet {
    pub p: PExponent,
    pub lambda: f64,
    /// Torsion constant C in k^{2p-2} tau = C.
    pub c_const: f64,
    /// A_{p,lambda} = (1/2) (2 lambda / (p-1))^{1/p}; requires lambda > 0.
    pub a_pl: Option<f64>,
    /// T_{p,lambda} = K_p(1) / A_{p,lambda}; finite only for p > 2.
    pub t_pl: Option<f64>,
    /// M_p = ceil(2 / (p-2)); regularity order parameter for p > 2.
    pub m_p: Option<u32>,
}

impl ParamSet {
    pub fn new(p: PExponent, lambda: f64, c_const: f64) -> Result<Self> {
        let pv = p.get();
        let a_pl = if lambda > 0.0 {
            Some(0.5 * (2.0 * lambda / (pv - 1.0)).powf(1.0 / pv))
        } else {
            None
        };
        let t_pl = match (a_pl, p.is_degenerate()) {
            (Some(a), true) => Some(pelliptic::k_p1(p)? / a),
            _ => None,
        };
        let m_p = m_p(pv);
        Ok(ParamSet {
            p,
            lambda,
            c_const,
            a_pl,
            t_pl,
            m_p,
        })
    }

    /// First-integral level A determined by the initial data (w0, w0').
    pub fn first_integral_level(&self, w0: f64, w0p: f64) -> f64 {
        let pv = self.p.get();
        w0p * w0p + ((pv - 1.0) / pv).powi(2) * w0.powf(2.0 * pv / (pv - 1.0))
            - 2.0 * self.lambda * (pv - 1.0) / (pv * pv) * w0.powf(pv / (pv - 1.0))
            + self.c_const * self.c_const / (w0 * w0)
    }
}

/// Regularity order M_p = ceil(2/(p-2)) for p > 2.
pub fn m_p(p: f64) -> Option<u32> {
    if p > 2.0 {
        Some((2.0 / (p - 2.0)).ceil() as u32)
    } else {
        None
    }
}

/// Multiplier and torsion constant of the helix with constant curvature k0
/// and torsion tau0 (the equilibrium of the w-equation).
pub fn helix_params(p: PExponent, k0: f64, tau0: f64) -> (f64, f64) {
    let pv = p.get();
    let lambda = (pv - 1.0) * k0.powf(pv) - pv * k0.powf(pv - 2.0) * tau0 * tau0;
    let c_const = k0.powf(2.0 * pv - 2.0) * tau0;
    (lambda, c_const)
}

/// Integrated profiles of the curvature ODE.
#[derive(Debug, Clone, Serialize)]
pub struct OdeProfiles {
    pub step: f64,
    pub w: Vec<f64>,
    /// Integrator states of w'; pairing (w, w') evaluates the first
    /// integral exactly, free of finite-difference noise.
    pub wp: Vec<f64>,
    pub k: Vec<f64>,
    pub tau: Vec<f64>,
    /// First-integral level fixed by the initial data.
    pub a_level: f64,
}

impl OdeProfiles {
    /// Conservation drift: max - min of the first integral evaluated on
    /// the integrator's own (w, w') states.
    pub fn conservation_drift(&self, params: &ParamSet) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (&w, &wp) in self.w.iter().zip(&self.wp) {
            if w <= 0.0 {
                continue;
            }
            let a = params.first_integral_level(w, wp);
            lo = lo.min(a);
            hi = hi.max(a);
        }
        hi - lo
    }
}

fn w_rhs(params: &ParamSet, w: f64) -> f64 {
    let pv = params.p.get();
    let wc = w.max(0.0);
    let mut f = params.lambda / pv * wc.powf(1.0 / (pv - 1.0))
        - (pv - 1.0) / pv * wc.powf((pv + 1.0) / (pv - 1.0));
    if params.c_const != 0.0 {
        f += params.c_const * params.c_const / (w * w * w);
    }
    f
}

/// RK4 integration of the w-equation from (w0, w0') over [0, length].
///
/// With C != 0 the orbit must stay strictly positive; reaching w <= 0 is
/// reported as a first-integral blow-up.
pub fn integrate_curvature_ode(
    params: &ParamSet,
    w0: f64,
    w0p: f64,
    length: f64,
    step: f64,
) -> Result<OdeProfiles> {
    if !(length > 0.0 && step > 0.0) {
        return Err(Error::Domain("length and step must be positive".into()));
    }
    if params.c_const != 0.0 && w0 <= 0.0 {
        return Err(Error::Domain("C != 0 requires w0 > 0".into()));
    }
    let (n, h) = crate::curvekit::snap_step(length, step);
    let pv = params.p.get();
    let mut w = w0;
    let mut wp = w0p;
    let mut ws = Vec::with_capacity(n + 1);
    let mut wps = Vec::with_capacity(n + 1);
    ws.push(w);
    wps.push(wp);
    for _ in 0..n {
        // RK4 on the system (w, w') -> (w', f(w)).
        let k1 = (wp, w_rhs(params, w));
        let k2 = (wp + 0.5 * h * k1.1, w_rhs(params, w + 0.5 * h * k1.0));
        let k3 = (wp + 0.5 * h * k2.1, w_rhs(params, w + 0.5 * h * k2.0));
        let k4 = (wp + h * k3.1, w_rhs(params, w + h * k3.0));
        w += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        wp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if params.c_const != 0.0 && w <= 0.0 {
            return Err(Error::BlowUp(format!(
                "orbit reached w = {w} <= 0 with C != 0"
            )));
        }
        ws.push(w);
        wps.push(wp);
    }
    let k: Vec<f64> = ws.iter().map(|&w| w.max(0.0).powf(1.0 / (pv - 1.0))).collect();
    let tau: Vec<f64> = ws
        .iter()
        .map(|&w| {
            if params.c_const == 0.0 {
                0.0
            } else {
                params.c_const / (w * w)
            }
        })
        .collect();
    Ok(OdeProfiles {
        step: h,
        w: ws,
        wp: wps,
        k,
        tau,
        a_level: params.first_integral_level(w0, w0p),
    })
}

/// Orthonormal Frenet frame plus position.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrenetState {
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
    pub binormal: [f64; 3],
    pub position: [f64; 3],
}

impl FrenetState {
    /// Canonical frame (e1, e2, e3) at the origin.
    pub fn canonical() -> Self {
        FrenetState {
            tangent: [1.0, 0.0, 0.0],
            normal: [0.0, 1.0, 0.0],
            binormal: [0.0, 0.0, 1.0],
            position: [0.0, 0.0, 0.0],
        }
    }

    /// Largest deviation of the frame Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let vs = [self.tangent, self.normal, self.binormal];
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    fn reorthonormalize(&mut self) {
        let t = &mut self.tangent;
        let nt = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
        for x in t.iter_mut() {
            *x /= nt;
        }
        let t = self.tangent;
        let n = &mut self.normal;
        let proj = t[0] * n[0] + t[1] * n[1] + t[2] * n[2];
        for (x, ti) in n.iter_mut().zip(&t) {
            *x -= proj * ti;
        }
        let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        for x in n.iter_mut() {
            *x /= nn;
        }
        self.binormal = cross3(&self.tangent, &self.normal);
    }
}

fn frenet_derivative(state: &[f64; 12], k: f64, tau: f64) -> [f64; 12] {
    let (t, n, b) = (&state[0..3], &state[3..6], &state[6..9]);
    let mut d = [0.0; 12];
    for i in 0..3 {
        d[i] = k * n[i];
        d[3 + i] = -k * t[i] + tau * b[i];
        d[6 + i] = -tau * n[i];
        d[9 + i] = t[i];
    }
    d
}

fn pack(fs: &FrenetState) -> [f64; 12] {
    let mut s = [0.0; 12];
    s[0..3].copy_from_slice(&fs.tangent);
    s[3..6].copy_from_slice(&fs.normal);
    s[6..9].copy_from_slice(&fs.binormal);
    s[9..12].copy_from_slice(&fs.position);
    s
}

fn unpack(s: &[f64; 12]) -> FrenetState {
    FrenetState {
        tangent: [s[0], s[1], s[2]],
        normal: [s[3], s[4], s[5]],
        binormal: [s[6], s[7], s[8]],
        position: [s[9], s[10], s[11]],
    }
}

#[allow(clippy::too_many_arguments)]
fn rk4_frenet_step(
    state: &mut FrenetState,
    h: f64,
    k0: f64,
    k_mid: f64,
    k1: f64,
    t0: f64,
    t_mid: f64,
    t1: f64,
) {
    let s = pack(state);
    let d1 = frenet_derivative(&s, k0, t0);
    let mut s2 = s;
    for i in 0..12 {
        s2[i] += 0.5 * h * d1[i];
    }
    let d2 = frenet_derivative(&s2, k_mid, t_mid);
    let mut s3 = s;
    for i in 0..12 {
        s3[i] += 0.5 * h * d2[i];
    }
    let d3 = frenet_derivative(&s3, k_mid, t_mid);
    let mut s4 = s;
    for i in 0..12 {
        s4[i] += h * d3[i];
    }
    let d4 = frenet_derivative(&s4, k1, t1);
    let mut out = s;
    for i in 0..12 {
        out[i] += h / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
    }
    *state = unpack(&out);
    state.reorthonormalize();
}

/// Reconstruct a 3-dimensional curve from curvature and torsion profiles
/// on a common uniform grid. Midpoint values are interpolated linearly, so
/// the reconstruction is exact-order for smooth profiles sampled densely
/// and second-order otherwise.
pub fn frenet_reconstruct(
    ks: &[f64],
    taus: &[f64],
    step: f64,
    init: FrenetState,
) -> Result<SampledCurve> {
    if ks.len() != taus.len() || ks.len() < 2 {
        return Err(Error::InvalidCurve("profiles too short or mismatched".into()));
    }
    if init.orthonormality_defect() > 1e-8 {
        return Err(Error::Domain("initial frame is not orthonormal".into()));
    }
    let mut state = init;
    let n = ks.len() - 1;
    let mut c = SampledCurve::from_fn(3, step, n, false, |i| {
        if i > 0 {
            let (k0, k1) = (ks[i - 1], ks[i]);
            let (t0, t1) = (taus[i - 1], taus[i]);
            rk4_frenet_step(
                &mut state,
                step,
                k0,
                0.5 * (k0 + k1),
                k1,
                t0,
                0.5 * (t0 + t1),
                t1,
            );
        }
        state.position.to_vec()
    });
    c.meta.family = Some("frenet".into());
    Ok(c)
}

/// A genuinely spatial solution: joint RK4 integration of the w-equation
/// and the Frenet system (full fourth order, since k and tau are evaluated
/// exactly at the stage points), followed by Euler-Lagrange verification.
pub fn spatial_elastica(
    params: &ParamSet,
    w0: f64,
    w0p: f64,
    length: f64,
    step: f64,
) -> Result<(SampledCurve, ResidualReport)> {
    if params.c_const == 0.0 {
        return Err(Error::Domain(
            "spatial solutions require a nonzero torsion constant".into(),
        ));
    }
    if w0 <= 0.0 {
        return Err(Error::Domain("w0 must be positive".into()));
    }
    let (n, h) = crate::curvekit::snap_step(length, step);
    let pv = params.p.get();
    let k_of = |w: f64| w.max(1e-300).powf(1.0 / (pv - 1.0));
    let tau_of = |w: f64| params.c_const / (w * w);

    // State: (w, w', T, N, B, x).
    let mut w = w0;
    let mut wp = w0p;
    let mut frame = FrenetState::canonical();
    let mut ws = Vec::with_capacity(n + 1);
    let mut wps = Vec::with_capacity(n + 1);
    ws.push(w);
    wps.push(wp);

    let mut c = SampledCurve::from_fn(3, h, n, false, |i| {
        if i > 0 {
            let deriv = |w: f64, wp: f64, fs: &[f64; 12]| -> (f64, f64, [f64; 12]) {
                (wp, w_rhs(params, w), frenet_derivative(fs, k_of(w), tau_of(w)))
            };
            let s0 = pack(&frame);
            let (a1, b1, d1) = deriv(w, wp, &s0);
            let mut s = s0;
            for j in 0..12 {
                s[j] = s0[j] + 0.5 * h * d1[j];
            }
            let (a2, b2, d2) = deriv(w + 0.5 * h * a1, wp + 0.5 * h * b1, &s);
            for j in 0..12 {
                s[j] = s0[j] + 0.5 * h * d2[j];
            }
            let (a3, b3, d3) = deriv(w + 0.5 * h * a2, wp + 0.5 * h * b2, &s);
            for j in 0..12 {
                s[j] = s0[j] + h * d3[j];
            }
            let (a4, b4, d4) = deriv(w + h * a3, wp + h * b3, &s);
            let mut out = s0;
            for j in 0..12 {
                out[j] += h / 6.0 * (d1[j] + 2.0 * d2[j] + 2.0 * d3[j] + d4[j]);
            }
            w += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            wp += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            frame = unpack(&out);
            frame.reorthonormalize();
            ws.push(w);
            wps.push(wp);
        }
        frame.position.to_vec()
    });
    if ws.iter().any(|&w| w <= 0.0) {
        return Err(Error::BlowUp("orbit reached w <= 0 with C != 0".into()));
    }
    c.meta = crate::curvekit::CurveMeta {
        p: Some(pv),
        lambda: Some(params.lambda),
        family: Some("spatial".into()),
        scale: Some(1.0),
    };

    // Verification: weak residual plus conserved-quantity drift on the
    // integrator's own states.
    let battery = TestFunctionBattery::clamped(3, geom::length(&c), 12);
    let mut report = weak_el_residual(&c, params.p, params.lambda, &battery, 1e-4)?;
    let a0 = params.first_integral_level(w0, w0p);
    let drift = ws
        .iter()
        .zip(&wps)
        .map(|(&w, &wp)| params.first_integral_level(w, wp))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
            (lo.min(a), hi.max(a))
        });
    let drift = drift.1 - drift.0;
    let ks: Vec<f64> = ws.iter().map(|&w| k_of(w)).collect();
    let taus: Vec<f64> = ws.iter().map(|&w| tau_of(w)).collect();
    let (r1, _r2) =
        elverify::strong_residual_k_tau(&ks, &taus, h, params.p, params.lambda, params.c_const)?;
    report.strong_residual_sup = Some(r1);
    report.first_integral_drift = Some(drift);
    report.verdict = report.verdict && drift <= 1e-6 * (1.0 + a0.abs());
    Ok((c, report))
}
