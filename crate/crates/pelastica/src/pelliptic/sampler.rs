//! Amplitude inversion and incremental sampling of the p-elliptic kernel.
//!
//! A `WaveSampler` answers, for a stream of arclength values `s`, the tuple
//! (am, sin am, cos am, E(am), cn) where `am` inverts the first-kind
//! incomplete integral. Consecutive queries warm-start a Newton iteration
//! whose residual is evaluated by local quadrature panels, so a full curve
//! scan costs O(samples) small panels instead of O(samples) full inversions.
//!
//! Near the cell corner x = pi/2 the inversion runs in the substituted
//! variable u = (pi/2 - x)^(alpha+1), where the first-kind integral is a
//! smooth function with nonvanishing derivative; this keeps full accuracy
//! at curvature zeros for every p.

use super::cell::{integral_between, CellIntegrand, CellPos, XSPLIT};
use crate::quad;
use crate::root::bisect_secant;
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

const WARM_MAX: f64 = 0.25;
const PANEL_TOL: f64 = 1e-13;

/// One evaluated sample of the wavelike kernel.
#[derive(Debug, Clone, Copy)]
pub struct WaveSample {
    /// Extended amplitude am(s, q).
    pub am: f64,
    /// sin of the extended amplitude.
    pub sin_am: f64,
    /// cos of the extended amplitude (signed).
    pub cos_am: f64,
    /// Extended incomplete second-kind integral at am(s, q).
    pub e_inc: f64,
    /// cn_p(s, q) = sign(cos am) |cos am|^(2/p).
    pub cn: f64,
}

#[derive(Debug, Clone, Copy)]
struct Warm {
    /// Cell arclength target this state was solved for.
    rc: f64,
    /// Chain measurement of F_cell at pos. Anchoring the next solve to this
    /// value (instead of to rc) keeps Newton exit residuals from feeding
    /// back into the chain, where their consistent sign on monotone scans
    /// would accumulate linearly.
    fval: f64,
    pos: CellPos,
    /// Incomplete second-kind integral at pos.
    e_cell: f64,
}

/// Incremental evaluator of amplitude, cn and the second-kind integral.
#[derive(Debug)]
pub struct WaveSampler {
    p: f64,
    q: f64,
    f: CellIntegrand,
    e: CellIntegrand,
    /// Complete first-kind cell integral (quarter period).
    pub k_complete: f64,
    /// Complete second-kind cell integral.
    pub e_complete: f64,
    f_at_split: f64,
    warm: Option<Warm>,
}

impl WaveSampler {
    /// Build a sampler for exponent `p` and modulus `q` (0 <= q <= 1;
    /// q = 1 requires p > 2 and restricts the domain to |s| <= K_p(1)).
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let f = CellIntegrand::first_kind(p, q);
        let e = CellIntegrand::second_kind(p, q);
        if !f.integrable() {
            return Err(Error::Divergence(format!(
                "first-kind integral diverges at q = 1 for p = {p} <= 2"
            )));
        }
        let k_complete = f.complete()?;
        let e_complete = e.complete()?;
        let f_at_split = f.integral(0.0, XSPLIT)?;
        Ok(WaveSampler {
            p,
            q,
            f,
            e,
            k_complete,
            e_complete,
            f_at_split,
            warm: None,
        })
    }

    pub fn modulus(&self) -> f64 {
        self.q
    }

    /// Solve F_cell(x) = rc for rc in [0, K], reusing the previous solution
    /// when it is close.
    fn solve_cell(&mut self, rc: f64) -> Result<Warm> {
        let rc = rc.clamp(0.0, self.k_complete);
        let warm_ok = self
            .warm
            .filter(|w| (w.rc - rc).abs() <= WARM_MAX)
            .is_some();

        let w = if rc >= self.f_at_split {
            self.solve_corner(rc, warm_ok)?
        } else {
            self.solve_middle(rc, warm_ok)?
        };
        self.warm = Some(w);
        Ok(w)
    }

    fn solve_middle(&mut self, rc: f64, warm_ok: bool) -> Result<Warm> {
        let ftol = 5e-13 * (1.0 + self.k_complete);
        let (mut x, mut fx, prev) = if warm_ok {
            let w = self.warm.unwrap();
            if w.pos.x <= XSPLIT {
                (w.pos.x, w.fval, Some(w))
            } else {
                // Previous state sits in the corner region: restart from
                // the split anchor, whose F value is known exactly.
                (XSPLIT, self.f_at_split, Some(w))
            }
        } else {
            // Cold start: bracketed solve on [0, XSPLIT].
            let f = &self.f;
            let x0 = bisect_secant(
                |x| f.integral(0.0, x).unwrap_or(f64::NAN) - rc,
                0.0,
                XSPLIT,
                1e-13,
                ftol,
            )?;
            (x0, self.f.integral(0.0, x0)?, None)
        };
        // Warm Newton with locally integrated residual updates. The final
        // first-order correction closes the exit residual to O(err^2), so
        // fval = rc is honest for the next anchor.
        for _ in 0..60 {
            let err = rc - fx;
            let slope = self.f.at(x).max(1e-300);
            if err.abs() <= ftol {
                let x_fin = (x + err / slope).clamp(0.0, XSPLIT);
                let pos = CellPos::from_x(x_fin);
                let e_cell = self.e_cell_at(pos, prev)?;
                return Ok(Warm {
                    rc,
                    fval: rc,
                    pos,
                    e_cell,
                });
            }
            let x_new = (x + err / slope).clamp(0.0, XSPLIT);
            fx += quad::integrate(&|th| self.f.at(th), x, x_new, PANEL_TOL)?;
            x = x_new;
        }
        Err(Error::Quadrature(format!(
            "amplitude Newton stalled at rc = {rc}"
        )))
    }

    fn solve_corner(&mut self, rc: f64, warm_ok: bool) -> Result<Warm> {
        let tail_target = (self.k_complete - rc).max(0.0);
        let u_max = self.f.u_of_t(FRAC_PI_2 - XSPLIT);
        let ftol = 5e-13 * (1.0 + self.k_complete);

        let (mut v, mut tv, prev) = if warm_ok && self.warm.unwrap().pos.x >= XSPLIT {
            let w = self.warm.unwrap();
            (
                self.f.u_of_t(w.pos.t),
                (self.k_complete - w.fval).max(0.0),
                Some(w),
            )
        } else {
            let f = &self.f;
            let v0 = bisect_secant(
                |v| f.tail_between_t(0.0, f.t_of_u(v)).unwrap_or(f64::NAN) - tail_target,
                0.0,
                u_max,
                1e-16,
                ftol,
            )?;
            (v0, self.f.tail_between_t(0.0, self.f.t_of_u(v0))?, None)
        };
        for _ in 0..60 {
            let err = tail_target - tv;
            let slope = self.f.corner_at(v).max(1e-300);
            if err.abs() <= ftol {
                let v_fin = (v + err / slope).clamp(0.0, u_max);
                let pos = CellPos::from_t(self.f.t_of_u(v_fin));
                let e_cell = self.e_cell_at(pos, prev)?;
                return Ok(Warm {
                    rc,
                    fval: rc,
                    pos,
                    e_cell,
                });
            }
            let v_new = (v + err / slope).clamp(0.0, u_max);
            tv += quad::integrate(&|u| self.f.corner_at(u), v, v_new, PANEL_TOL)?;
            v = v_new;
        }
        Err(Error::Quadrature(format!(
            "corner Newton stalled at rc = {rc}"
        )))
    }

    fn e_cell_at(&self, pos: CellPos, prev: Option<Warm>) -> Result<f64> {
        match prev {
            Some(w) => Ok(w.e_cell + integral_between(&self.e, w.pos, pos)?),
            None => integral_between(&self.e, CellPos::origin(), pos),
        }
    }

    /// Evaluate at arclength `s`. For q < 1 any real `s` is admissible; the
    /// q = 1 branch is restricted to s in [0, K + eps].
    pub fn eval(&mut self, s: f64) -> Result<WaveSample> {
        let k = self.k_complete;
        let (n2, desc, rc) = if self.q == 1.0 {
            if !(-1e-9..=k * (1.0 + 1e-12) + 1e-12).contains(&s) {
                return Err(Error::Domain(format!(
                    "amplitude at q = 1 defined for |s| <= K_p(1) = {k}, got {s}"
                )));
            }
            (0i64, false, s.clamp(0.0, k))
        } else {
            let period = 2.0 * k;
            let n2f = (s / period).floor();
            let r = s - period * n2f;
            let n2 = n2f as i64;
            if r <= k {
                (n2, false, r)
            } else {
                (n2, true, period - r)
            }
        };

        let w = self.solve_cell(rc)?;
        let sign_n2 = if n2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let sin_cell = w.pos.sin_x();
        let cos_cell = w.pos.cos_x();

        let (x_half, cos_sign) = if desc {
            (PI - w.pos.x, -1.0)
        } else {
            (w.pos.x, 1.0)
        };
        let am = n2 as f64 * PI + x_half;
        let sin_am = sign_n2 * sin_cell;
        let cos_am = sign_n2 * cos_sign * cos_cell;
        let e_half = if desc {
            2.0 * self.e_complete - w.e_cell
        } else {
            w.e_cell
        };
        let e_inc = 2.0 * self.e_complete * n2 as f64 + e_half;
        let cn = cos_am.signum() * cos_cell.powf(2.0 / self.p);

        Ok(WaveSample {
            am,
            sin_am,
            cos_am,
            e_inc,
            cn,
        })
    }
}
