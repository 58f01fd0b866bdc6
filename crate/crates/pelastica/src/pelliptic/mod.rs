//! p-elliptic special functions and the constants derived from them.
//!
//! Conventions (fixed here once, verified by the consistency tests):
//!
//! * first kind:  F(x, q) = int_0^x |cos t|^(1-2/p) (1 - q^2 sin^2 t)^(-1/2) dt
//! * second kind: E(x, q) = int_0^x |cos t|^(1-2/p) (1 - q^2 sin^2 t)^(+1/2) dt
//! * amplitude:   am(s, q) inverts F on the principal branch, extended by
//!   am(s + 2K) = am(s) + pi
//! * cn_p(s, q) = sign(cos am) |cos am|^(2/p)
//! * sech_p = cn_p(., 1) for p > 2 (zero outside [-K_p(1), K_p(1)]),
//!   and for p <= 2 the solution of the same first-order ODE on all of R;
//!   tanh_p(s) = int_0^s sech_p^p
//!
//! These are the unique conventions under which the wavelike curve map is
//! unit-speed, K_{1,p}(1) equals the printed K_p(1) integral, and sech_p
//! satisfies the zero-torsion first integral at lambda = 2^(p-1)(p-1).

pub(crate) mod cell;
pub(crate) mod sampler;

use cell::CellIntegrand;
pub use sampler::{WaveSample, WaveSampler};

use crate::root::bisect_secant;
use crate::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Mutex, OnceLock};

/// The energy exponent p in (1, oo).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::Domain(format!("exponent must satisfy p > 1, got {p}")));
        }
        Ok(PExponent(p))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// 1 < p < 2.
    pub fn is_singular(self) -> bool {
        self.0 < 2.0
    }

    /// p = 2.
    pub fn is_classical(self) -> bool {
        self.0 == 2.0
    }

    /// p > 2.
    pub fn is_degenerate(self) -> bool {
        self.0 > 2.0
    }
}

/// Elliptic modulus q in [0, 1]; q = 1 is the degenerate hyperbolic branch.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Modulus(f64);

impl Modulus {
    pub const ONE: Modulus = Modulus(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && (0.0..=1.0).contains(&q)) {
            return Err(Error::Domain(format!("modulus must lie in [0, 1], got {q}")));
        }
        Ok(Modulus(q))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_degenerate(self) -> bool {
        self.0 == 1.0
    }
}

/// Complete first/second-kind values at a given (p, q).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CompletePair {
    pub k: f64,
    pub e: f64,
    pub p: PExponent,
    pub q: Modulus,
}

fn completes_cache() -> &'static Mutex<HashMap<(u64, u64), (f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), (f64, f64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Complete pair K_{1,p}(q), E_{1,p}(q); memoized per (p, q).
pub fn complete_pair(p: PExponent, q: Modulus) -> Result<CompletePair> {
    let key = (p.get().to_bits(), q.get().to_bits());
    if let Some(&(k, e)) = completes_cache().lock().unwrap().get(&key) {
        return Ok(CompletePair { k, e, p, q });
    }
    let f = CellIntegrand::first_kind(p.get(), q.get());
    if !f.integrable() {
        return Err(Error::Divergence(format!(
            "K_{{1,p}}(1) is infinite for p = {} <= 2 (no flat-core solutions)",
            p.get()
        )));
    }
    let k = f.complete()?;
    let e = CellIntegrand::second_kind(p.get(), q.get()).complete()?;
    completes_cache().lock().unwrap().insert(key, (k, e));
    Ok(CompletePair { k, e, p, q })
}

/// Incomplete first-kind integral F(x, q), extended to all x by
/// F(x + pi) = F(x) + 2K and oddness.
pub fn incomplete_f(p: PExponent, x: f64, q: Modulus) -> Result<f64> {
    let g = CellIntegrand::first_kind(p.get(), q.get());
    if q.is_degenerate() {
        if !g.integrable() {
            return Err(Error::Divergence(format!(
                "first-kind integral diverges at q = 1 for p = {} <= 2",
                p.get()
            )));
        }
        if x.abs() > FRAC_PI_2 + 1e-12 {
            return Err(Error::Domain(
                "q = 1 first-kind integral defined for |x| <= pi/2".into(),
            ));
        }
        return Ok(x.signum() * g.integral(0.0, x.abs().min(FRAC_PI_2))?);
    }
    let k2 = 2.0 * complete_pair(p, q)?.k;
    fold_incomplete(x, k2, |y| g.integral(0.0, y), k2)
}

/// Incomplete second-kind integral E(x, q), extended by
/// E(x + pi) = E(x) + 2E(pi/2) and oddness.
pub fn incomplete_e(p: PExponent, x: f64, q: Modulus) -> Result<f64> {
    let g = CellIntegrand::second_kind(p.get(), q.get());
    let e2 = 2.0 * g.integral(0.0, FRAC_PI_2)?;
    fold_incomplete(x, e2, |y| g.integral(0.0, y), e2)
}

/// Reduce x into [0, pi] by periodicity/oddness and evaluate.
fn fold_incomplete(
    x: f64,
    full: f64,
    cell: impl Fn(f64) -> Result<f64>,
    per_period: f64,
) -> Result<f64> {
    if x < 0.0 {
        return fold_incomplete(-x, full, cell, per_period).map(|v| -v);
    }
    let n = (x / PI).floor();
    let y = x - n * PI;
    let val = if y <= FRAC_PI_2 {
        cell(y)?
    } else {
        full - cell(PI - y)?
    };
    Ok(n * per_period + val)
}

/// K_p(1) = int_0^{pi/2} (cos t)^(-2/p) dt, finite only for p > 2.
pub fn k_p1(p: PExponent) -> Result<f64> {
    Ok(complete_pair(p, Modulus::ONE)?.k)
}

/// Amplitude am(s, q): inverse of `incomplete_f` in x.
pub fn amplitude_am(p: PExponent, s: f64, q: Modulus) -> Result<f64> {
    let mut smp = WaveSampler::new(p.get(), q.get())?;
    if q.is_degenerate() {
        return Ok(s.signum() * smp.eval(s.abs())?.am);
    }
    smp.eval(s).map(|w| w.am)
}

/// cn_p(s, q) = sign(cos am) |cos am|^(2/p).
pub fn cn_p(p: PExponent, s: f64, q: Modulus) -> Result<f64> {
    let mut smp = WaveSampler::new(p.get(), q.get())?;
    if q.is_degenerate() {
        return Ok(smp.eval(s.abs())?.cn);
    }
    smp.eval(s).map(|w| w.cn)
}

/// p-hyperbolic secant. Compactly supported on [-K_p(1), K_p(1)] for p > 2;
/// positive on all of R for p <= 2 (outside the flat-core regime).
pub fn sech_p(p: PExponent, s: f64) -> Result<f64> {
    let pv = p.get();
    let s = s.abs();
    if pv > 2.0 {
        let k = k_p1(p)?;
        if s >= k {
            return Ok(0.0);
        }
        let mut smp = WaveSampler::new(pv, 1.0)?;
        return Ok(smp.eval(s)?.cn);
    }
    if pv == 2.0 {
        return Ok(1.0 / s.cosh());
    }
    let x = invert_singular_first_kind(pv, s)?;
    Ok((FRAC_PI_2 - x).sin().powf(2.0 / pv))
}

/// p-hyperbolic tangent, tanh_p(s) = int_0^s sech_p(t)^p dt.
pub fn tanh_p(p: PExponent, s: f64) -> Result<f64> {
    let pv = p.get();
    let sign = s.signum();
    let s = s.abs();
    let second = CellIntegrand::second_kind(pv, 1.0);
    if pv > 2.0 {
        let k = k_p1(p)?;
        if s >= k {
            return Ok(sign * second.complete()?);
        }
        let mut smp = WaveSampler::new(pv, 1.0)?;
        return Ok(sign * smp.eval(s)?.e_inc);
    }
    if pv == 2.0 {
        return Ok(sign * s.tanh());
    }
    let x = invert_singular_first_kind(pv, s)?;
    Ok(sign * second.integral(0.0, x)?)
}

/// Solve int_0^x (cos t)^(-2/p) dt = s for p <= 2, where the integral climbs
/// to +infinity as x -> pi/2 and the inverse is defined for every s >= 0.
fn invert_singular_first_kind(p: f64, s: f64) -> Result<f64> {
    debug_assert!(p <= 2.0 && s >= 0.0);
    if s == 0.0 {
        return Ok(0.0);
    }
    let g = CellIntegrand::first_kind(p, 1.0);
    let hi = FRAC_PI_2 - 1e-13;
    let upper = g.integral(0.0, hi)?;
    if s >= upper {
        return Err(Error::Domain(format!(
            "sech_p argument {s} beyond invertible range for p = {p}"
        )));
    }
    bisect_secant(
        |x| g.integral(0.0, x).unwrap_or(f64::NAN) - s,
        0.0,
        hi,
        1e-15,
        1e-13,
    )
}

fn qstar_cache() -> &'static Mutex<HashMap<u64, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The modulus q_p^*: unique solution of 2 E_{1,p}(q) / K_{1,p}(q) = 1.
pub fn q_star(p: PExponent) -> Result<Modulus> {
    let key = p.get().to_bits();
    if let Some(&q) = qstar_cache().lock().unwrap().get(&key) {
        return Ok(Modulus(q));
    }
    let residual = |q: f64| -> f64 {
        match complete_pair(p, Modulus(q)) {
            Ok(cp) => 2.0 * cp.e - cp.k,
            Err(_) => f64::NAN,
        }
    };
    // The root lies in (1/sqrt(2), 1). The standard bracket starts at 0.71;
    // as p -> 1 the root approaches 1/sqrt(2) from above, so widen downward
    // if the sign is already negative at 0.71.
    let hi = 1.0 - 1e-12;
    let mut lo = 0.71;
    let inv_sqrt2 = 0.5f64.sqrt();
    let mut shrink = 0.71 - inv_sqrt2;
    while residual(lo) <= 0.0 {
        shrink *= 0.5;
        lo = inv_sqrt2 + shrink;
        if shrink < 1e-14 {
            return Err(Error::Bracket(format!(
                "q* bracket collapsed onto 1/sqrt(2) for p = {}",
                p.get()
            )));
        }
    }
    let q = bisect_secant(residual, lo, hi, 1e-15, 0.0)?;
    qstar_cache().lock().unwrap().insert(key, q);
    Ok(Modulus(q))
}

/// The universal constant
/// varpi_p^* = 2^(3p-1) (q*)^(p-2) (2 q*^2 - 1) E_{1,p}(q*)^p.
pub fn varpi_star(p: PExponent) -> Result<f64> {
    let q = q_star(p)?;
    let e = complete_pair(p, q)?.e;
    let qv = q.get();
    Ok(2f64.powf(3.0 * p.get() - 1.0)
        * qv.powf(p.get() - 2.0)
        * (2.0 * qv * qv - 1.0)
        * e.powf(p.get()))
}

/// Crossing angle phi^*(p) = pi - 2 arcsin(q_p^*), strictly decreasing from
/// pi/2 (p -> 1) to 0 (p -> oo).
pub fn phi_star(p: PExponent) -> Result<f64> {
    Ok(PI - 2.0 * q_star(p)?.get().asin())
}

fn phi_inv_cache() -> &'static Mutex<HashMap<u64, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Inverse crossing angle: the unique p with phi^*(p) = theta, theta in (0, pi/2).
pub fn phi_star_inv(theta: f64) -> Result<PExponent> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "crossing angle must lie in (0, pi/2), got {theta}"
        )));
    }
    let key = theta.to_bits();
    if let Some(&p) = phi_inv_cache().lock().unwrap().get(&key) {
        return PExponent::new(p);
    }
    let g = |p: f64| -> f64 {
        PExponent::new(p)
            .and_then(phi_star)
            .map(|v| v - theta)
            .unwrap_or(f64::NAN)
    };
    // Expand the upper end geometrically until the sign flips (phi^* is
    // strictly decreasing), then refine.
    let mut lo = 1.0 + 1e-9;
    let mut hi = 2.0;
    while g(hi) > 0.0 {
        lo = hi;
        hi = (hi - 1.0) * 8.0 + 1.0;
        if hi > 1e6 {
            hi = 1e6;
            break;
        }
    }
    let p = bisect_secant(g, lo, hi, 1e-12, 0.0)?;
    phi_inv_cache().lock().unwrap().insert(key, p);
    PExponent::new(p)
}

/// Admissible crossing-angle fractions for planar closed m-leafed curves:
/// angles i*pi/(2m') over odd 3 <= m' <= m and even 1 < i < m'.
fn pm_angles(m: u32) -> Result<Vec<(u32, u32)>> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::Domain(format!("m must be odd and >= 3, got {m}")));
    }
    let mut pairs = Vec::new();
    let mut mp = 3;
    while mp <= m {
        let mut i = 2;
        while i < mp {
            pairs.push((i, mp));
            i += 2;
        }
        mp += 2;
    }
    Ok(pairs)
}

/// The exponent list P_m, sorted ascending. Entries are indexed by the
/// admissible pairs (i, m'); the same exponent recurs whenever two pairs
/// share the angle i/(2m') (first at m = 9, where (6, 9) repeats (2, 3)),
/// so the length is exactly (m-1)(m+1)/8.
pub fn pm_set(m: u32) -> Result<Vec<PExponent>> {
    let pairs = pm_angles(m)?;
    let mut by_angle: HashMap<u64, f64> = HashMap::new();
    let mut out = Vec::with_capacity(pairs.len());
    for (i, mp) in pairs {
        let theta = i as f64 * PI / (2.0 * mp as f64);
        let p = match by_angle.get(&theta.to_bits()) {
            Some(&p) => p,
            None => {
                let p = phi_star_inv(theta)?.get();
                by_angle.insert(theta.to_bits(), p);
                p
            }
        };
        out.push(PExponent(p));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// p_m^* = min P_m = (phi^*)^{-1}((m-1) pi / (2m)).
pub fn pm_star(m: u32) -> Result<PExponent> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::Domain(format!("m must be odd and >= 3, got {m}")));
    }
    phi_star_inv((m - 1) as f64 * PI / (2.0 * m as f64))
}
