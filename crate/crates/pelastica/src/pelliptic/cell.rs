//! Integration machinery on the fundamental cell [0, pi/2].
//!
//! Both p-elliptic integrands share the shape `|cos t|^alpha * w(t)` with a
//! smooth modulus weight `w`. The only delicate point is the cell corner
//! t = pi/2 where the cosine power is singular (alpha < 0) or non-smooth
//! (0 < alpha < 1). Near the corner we integrate in the variable
//! `u = (pi/2 - t)^(alpha+1)`, which removes the power exactly:
//! the transformed integrand is bounded with value `w(pi/2)/(alpha+1)` at
//! u = 0. All quadrature is adaptive Gauss-Kronrod.

use crate::quad;
use crate::Result;
use std::f64::consts::FRAC_PI_2;

/// Angle below which sin(t)/t is evaluated by series to avoid 0/0.
const SINC_SERIES_CUTOFF: f64 = 1e-6;

/// Cell split point: direct quadrature on [0, XSPLIT], corner-substituted
/// quadrature on [XSPLIT, pi/2].
pub(crate) const XSPLIT: f64 = 1.0;

/// Absolute quadrature tolerance.
pub(crate) const QUAD_TOL: f64 = 1e-12;

fn sinc(t: f64) -> f64 {
    if t.abs() < SINC_SERIES_CUTOFF {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// One integrand `|cos t|^alpha * (1 - q^2 sin^2 t)^half` on the cell.
///
/// The degenerate branch q = 1 is always stored with the modulus factor
/// folded into the exponent (`half = 0`), so `alpha` alone carries the
/// corner behaviour.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellIntegrand {
    pub alpha: f64,
    pub q_sq: f64,
    /// 1 - q^2 formed as (1-q)(1+q): exact cancellation-free complement.
    pub omq_sq: f64,
    pub half: f64,
}

impl CellIntegrand {
    /// First-kind integrand for modulus q < 1: |cos|^(1-2/p) (1-q^2 sin^2)^(-1/2).
    pub fn first_kind(p: f64, q: f64) -> Self {
        if q == 1.0 {
            CellIntegrand {
                alpha: -2.0 / p,
                q_sq: 1.0,
                omq_sq: 0.0,
                half: 0.0,
            }
        } else {
            CellIntegrand {
                alpha: 1.0 - 2.0 / p,
                q_sq: q * q,
                omq_sq: (1.0 - q) * (1.0 + q),
                half: -0.5,
            }
        }
    }

    /// Second-kind integrand: |cos|^(1-2/p) (1-q^2 sin^2)^(1/2).
    pub fn second_kind(p: f64, q: f64) -> Self {
        if q == 1.0 {
            CellIntegrand {
                alpha: 2.0 - 2.0 / p,
                q_sq: 1.0,
                omq_sq: 0.0,
                half: 0.0,
            }
        } else {
            CellIntegrand {
                alpha: 1.0 - 2.0 / p,
                q_sq: q * q,
                omq_sq: (1.0 - q) * (1.0 + q),
                half: 0.5,
            }
        }
    }

    /// True when the cell integral over [0, pi/2] is finite.
    pub fn integrable(&self) -> bool {
        self.alpha > -1.0
    }

    /// Integrand value at angle `theta` in [0, pi/2].
    pub fn at(&self, theta: f64) -> f64 {
        let c = theta.cos().abs();
        let pow = if self.alpha == 0.0 { 1.0 } else { c.powf(self.alpha) };
        pow * self.weight_at(theta)
    }

    fn weight_at(&self, theta: f64) -> f64 {
        if self.half == 0.0 {
            1.0
        } else {
            // 1 - q^2 sin^2 = (1 - q^2) + q^2 cos^2, a cancellation-free sum.
            let c = theta.cos();
            (self.omq_sq + self.q_sq * c * c).powf(self.half)
        }
    }

    /// Transformed integrand in the corner variable u = t^(alpha+1),
    /// t = pi/2 - theta. Equals the original integrand times dtheta/du.
    pub fn corner_at(&self, u: f64) -> f64 {
        let ap1 = self.alpha + 1.0;
        let t = if u <= 0.0 { 0.0 } else { u.powf(1.0 / ap1) };
        let ratio = sinc(t).powf(self.alpha);
        let w = if self.half == 0.0 {
            1.0
        } else {
            // At theta = pi/2 - t: 1 - q^2 cos^2 t = (1 - q^2) + q^2 sin^2 t.
            let s = t.sin();
            (self.omq_sq + self.q_sq * s * s).powf(self.half)
        };
        ratio * w / ap1
    }

    /// Corner variable for a given distance t = pi/2 - theta from the corner.
    pub fn u_of_t(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            t.powf(self.alpha + 1.0)
        }
    }

    /// Inverse of `u_of_t`.
    pub fn t_of_u(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            u.powf(1.0 / (self.alpha + 1.0))
        }
    }

    /// Signed tail difference: integral of the original integrand over the
    /// angles [pi/2 - t_hi, pi/2 - t_lo] expressed through u bounds. Also
    /// valid for a divergent corner (alpha <= -1) as long as t_lo > 0: the
    /// substitution then reverses orientation but the bounds stay finite.
    pub fn tail_between_t(&self, t_lo: f64, t_hi: f64) -> Result<f64> {
        quad::integrate(
            &|u| self.corner_at(u),
            self.u_of_t(t_lo),
            self.u_of_t(t_hi),
            QUAD_TOL,
        )
    }

    /// Integral over [x0, x1] inside [0, pi/2], split at XSPLIT so that the
    /// corner part runs in the u variable. Signed in the orientation x0 -> x1.
    /// For a divergent corner (alpha <= -1) the upper end must stay strictly
    /// below pi/2.
    pub fn integral(&self, x0: f64, x1: f64) -> Result<f64> {
        if x0 == x1 {
            return Ok(0.0);
        }
        if x0 > x1 {
            return self.integral(x1, x0).map(|v| -v);
        }
        debug_assert!((0.0..=FRAC_PI_2 + 1e-12).contains(&x0));
        debug_assert!(x1 <= FRAC_PI_2 + 1e-12);

        if !self.integrable() && x1 >= FRAC_PI_2 {
            return Err(crate::Error::Divergence(
                "cell integral diverges at the corner for this exponent".into(),
            ));
        }

        let mut total = 0.0;
        if x0 < XSPLIT {
            total += quad::integrate(&|th| self.at(th), x0, x1.min(XSPLIT), QUAD_TOL)?;
        }
        if x1 > XSPLIT {
            let t_hi = FRAC_PI_2 - x0.max(XSPLIT);
            let t_lo = FRAC_PI_2 - x1;
            total += self.tail_between_t(t_lo.max(0.0), t_hi)?;
        }
        Ok(total)
    }

    /// Complete integral over the cell [0, pi/2].
    pub fn complete(&self) -> Result<f64> {
        self.integral(0.0, FRAC_PI_2)
    }
}

/// A position inside the cell, tracking the corner distance t = pi/2 - x
/// explicitly so that `cos x = sin t` keeps full relative precision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellPos {
    pub x: f64,
    pub t: f64,
}

impl CellPos {
    pub fn origin() -> Self {
        CellPos {
            x: 0.0,
            t: FRAC_PI_2,
        }
    }

    pub fn from_x(x: f64) -> Self {
        CellPos {
            x,
            t: FRAC_PI_2 - x,
        }
    }

    pub fn from_t(t: f64) -> Self {
        CellPos {
            x: FRAC_PI_2 - t,
            t,
        }
    }

    /// sin of the cell angle.
    pub fn sin_x(&self) -> f64 {
        if self.t < 0.25 {
            self.t.cos()
        } else {
            self.x.sin()
        }
    }

    /// cos of the cell angle (nonnegative on the cell).
    pub fn cos_x(&self) -> f64 {
        if self.t < 0.25 {
            self.t.sin()
        } else {
            self.x.cos()
        }
    }
}

/// Integral of `g` between two tracked positions, using the corner
/// substitution for whatever part lies beyond XSPLIT.
pub(crate) fn integral_between(g: &CellIntegrand, a: CellPos, b: CellPos) -> Result<f64> {
    if a.x == b.x {
        return Ok(0.0);
    }
    if a.x > b.x {
        return integral_between(g, b, a).map(|v| -v);
    }
    let mut total = 0.0;
    if a.x < XSPLIT {
        total += quad::integrate(&|th| g.at(th), a.x, b.x.min(XSPLIT), QUAD_TOL)?;
    }
    if b.x > XSPLIT {
        let t_hi = if a.x >= XSPLIT { a.t } else { FRAC_PI_2 - XSPLIT };
        total += g.tail_between_t(b.t, t_hi)?;
    }
    Ok(total)
}
