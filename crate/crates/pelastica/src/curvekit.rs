//! Curve data model and constructors: lines, flat-core loops and curves,
//! wavelike arcs, figure-eights, leaves and closed m-leafed curves.
//!
//! Every constructor emits an arclength-sampled `SampledCurve` at canonical
//! scale (flat-core at A = 1, wavelike at modulus scale); physical scales
//! are reached through `similarity_transform`.

use crate::pelliptic::{self, Modulus, PExponent, WaveSampler};
use crate::vecn::{self, MatN};
use crate::{Error, Result};
use serde::Serialize;

/// Optional metadata carried by a sampled curve.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CurveMeta {
    pub p: Option<f64>,
    pub lambda: Option<f64>,
    pub family: Option<String>,
    /// Cumulative similarity scale relative to the canonical construction.
    pub scale: Option<f64>,
}

/// An arclength-sampled immersed curve in R^n.
///
/// Points are stored flat, `dim` coordinates per sample, with uniform
/// arclength spacing `step`. A closed curve repeats its first point at the
/// end of the buffer.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    dim: usize,
    step: f64,
    points: Vec<f64>,
    closed: bool,
    pub meta: CurveMeta,
}

/// Number of segments and effective step after snapping `ds` to an exact
/// divisor of the total length.
pub(crate) fn snap_step(total: f64, ds: f64) -> (usize, f64) {
    assert!(total > 0.0 && ds > 0.0);
    let n = ((total / ds).round() as usize).max(1);
    (n, total / n as f64)
}

impl SampledCurve {
    /// Build from a sampling closure `f(i) -> point` over `n_seg + 1` samples.
    pub fn from_fn(
        dim: usize,
        step: f64,
        n_seg: usize,
        closed: bool,
        mut f: impl FnMut(usize) -> Vec<f64>,
    ) -> Self {
        let mut points = Vec::with_capacity((n_seg + 1) * dim);
        for i in 0..=n_seg {
            let p = f(i);
            assert_eq!(p.len(), dim);
            points.extend_from_slice(&p);
        }
        SampledCurve {
            dim,
            step,
            points,
            closed,
            meta: CurveMeta::default(),
        }
    }

    pub fn from_points(dim: usize, step: f64, points: Vec<f64>, closed: bool) -> Result<Self> {
        if dim < 1 || points.len() % dim != 0 || points.len() / dim < 1 {
            return Err(Error::InvalidCurve("point buffer does not match dim".into()));
        }
        Ok(SampledCurve {
            dim,
            step,
            points,
            closed,
            meta: CurveMeta::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Number of stored samples (a closed curve counts its duplicate
    /// closing sample).
    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn first(&self) -> &[f64] {
        self.point(0)
    }

    pub fn last(&self) -> &[f64] {
        self.point(self.len() - 1)
    }

    pub fn raw(&self) -> &[f64] {
        &self.points
    }

    /// Arclength of sample i.
    pub fn s_at(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    /// Central-difference unit tangent (one-sided at open ends, wrapping
    /// when closed).
    pub fn tangent(&self, i: usize) -> Vec<f64> {
        let n = self.len();
        let (a, b, span) = if self.closed {
            let n_eff = n - 1;
            let prev = (i + n_eff - 1) % n_eff;
            let next = (i + 1) % n_eff;
            (prev, next, 2.0 * self.step)
        } else if i == 0 {
            (0, 1, self.step)
        } else if i == n - 1 {
            (n - 2, n - 1, self.step)
        } else {
            (i - 1, i + 1, 2.0 * self.step)
        };
        let pa = self.point(a);
        let pb = self.point(b);
        let mut t: Vec<f64> = pb.iter().zip(pa).map(|(x, y)| (x - y) / span).collect();
        vecn::normalize(&mut t);
        t
    }

    /// Largest relative deviation of consecutive chord lengths from `step`.
    pub fn unit_speed_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() - 1 {
            let d = vecn::dist(self.point(i), self.point(i + 1));
            worst = worst.max((d - self.step).abs() / self.step);
        }
        worst
    }

    pub fn with_meta(mut self, meta: CurveMeta) -> Self {
        self.meta = meta;
        self
    }
}

/// Straight segment of length `length` along -e1 starting at the origin.
pub fn line_segment(length: f64, dim: usize, ds: f64) -> Result<SampledCurve> {
    if length < 0.0 || dim < 2 {
        return Err(Error::Domain("length >= 0 and dim >= 2 required".into()));
    }
    if length == 0.0 {
        let mut c = SampledCurve::from_fn(dim, ds, 0, false, |_| vec![0.0; dim]);
        c.meta.family = Some("line".into());
        return Ok(c);
    }
    let (n, ds_eff) = snap_step(length, ds);
    let mut c = SampledCurve::from_fn(dim, ds_eff, n, false, |i| {
        let mut p = vec![0.0; dim];
        p[0] = -(i as f64) * ds_eff;
        p
    });
    c.meta = CurveMeta {
        p: None,
        lambda: Some(0.0),
        family: Some("line".into()),
        scale: Some(1.0),
    };
    Ok(c)
}

/// Canonical multiplier of the unit-scale flat-core family (A_{p,lambda} = 1).
pub fn flat_core_lambda(p: f64) -> f64 {
    2f64.powf(p - 1.0) * (p - 1.0)
}

fn check_loop_dir(theta: &[f64], dim: usize) -> Result<()> {
    if theta.len() != dim {
        return Err(Error::Domain("loop direction has wrong dimension".into()));
    }
    if theta[0].abs() > 1e-10 {
        return Err(Error::Domain(
            "loop direction must be orthogonal to e1".into(),
        ));
    }
    if (vecn::norm(theta) - 1.0).abs() > 1e-10 {
        return Err(Error::Domain("loop direction must be a unit vector".into()));
    }
    Ok(())
}

/// One canonical flat-core loop: the planar curve
/// (2 tanh_p s - s) e1 + p/(p-1) (sech_p s)^{p-1} theta on [-K_p(1), K_p(1)],
/// with curvature 2 sech_p(s) and both endpoint tangents -e1.
pub fn flat_core_loop(p: PExponent, theta: &[f64], dim: usize, ds: f64) -> Result<SampledCurve> {
    if !p.is_degenerate() {
        return Err(Error::Domain(format!(
            "flat-core loops require p > 2, got {}",
            p.get()
        )));
    }
    check_loop_dir(theta, dim)?;
    let k = pelliptic::k_p1(p)?;
    let (n, ds_eff) = snap_step(2.0 * k, ds);
    let mut smp = WaveSampler::new(p.get(), 1.0)?;
    let coef = p.get() / (p.get() - 1.0);

    let mut c = SampledCurve::from_fn(dim, ds_eff, n, false, |i| {
        let s = -k + i as f64 * ds_eff;
        let w = smp.eval(s.abs().min(k)).expect("|s| <= K");
        let tanh = s.signum() * w.e_inc;
        let sech_pow = w.cn.max(0.0).powf(p.get() - 1.0);
        let mut pt = vec![0.0; dim];
        pt[0] = 2.0 * tanh - s;
        for (d, th) in pt.iter_mut().zip(theta).skip(1) {
            *d += coef * sech_pow * th;
        }
        pt
    });
    c.meta = CurveMeta {
        p: Some(p.get()),
        lambda: Some(flat_core_lambda(p.get())),
        family: Some("flat-core-loop".into()),
        scale: Some(1.0),
    };
    Ok(c)
}

/// Concatenation: `b` is translated so its start meets the end of `a`.
///
/// Constructors snap their step to divide the curve length exactly, so two
/// inputs rarely share a bit-identical step; a small mismatch is absorbed
/// by resampling `b` onto the step of `a`.
pub fn concat(a: &SampledCurve, b: &SampledCurve) -> Result<SampledCurve> {
    if a.dim != b.dim {
        return Err(Error::InvalidCurve("dimension mismatch in concat".into()));
    }
    if a.closed || b.closed {
        return Err(Error::InvalidCurve("concat requires open curves".into()));
    }
    if (a.step - b.step).abs() > 0.1 * a.step.max(b.step) {
        return Err(Error::InvalidCurve(format!(
            "step mismatch in concat: {} vs {}",
            a.step, b.step
        )));
    }
    if a.len() < 2 {
        return Ok(b.clone());
    }
    if b.len() < 2 {
        return Ok(a.clone());
    }
    let shift: Vec<f64> = a
        .last()
        .iter()
        .zip(b.first())
        .map(|(x, y)| x - y)
        .collect();
    let mut points = a.points.clone();
    for i in 1..b.len() {
        for (d, s) in b.point(i).iter().zip(&shift) {
            points.push(d + s);
        }
    }
    let mut c = SampledCurve {
        dim: a.dim,
        step: a.step,
        points,
        closed: false,
        meta: CurveMeta::default(),
    };
    if a.step != b.step {
        // Snapped constructor steps rarely coincide exactly; rebuild a
        // uniform parameterization over the joined polyline.
        c = resample(&c, a.step)?;
    }
    if a.meta.p == b.meta.p {
        c.meta.p = a.meta.p;
    }
    Ok(c)
}

/// Combinatorial description of a flat-core curve: N loops with directions
/// theta_j, separated by straight segments of lengths L_1..L_{N+1} (the
/// trailing length extends the pattern past the last loop), a parameter
/// shift into the first line/loop pair, a similarity scale and a rigid frame.
#[derive(Debug, Clone)]
pub struct FlatCoreSpec {
    pub p: PExponent,
    pub dim: usize,
    pub loop_dirs: Vec<Vec<f64>>,
    pub seg_lengths: Vec<f64>,
    pub shift: f64,
    pub scale: f64,
    pub rotation: Option<MatN>,
    pub translation: Option<Vec<f64>>,
}

impl FlatCoreSpec {
    pub fn new(
        p: PExponent,
        dim: usize,
        loop_dirs: Vec<Vec<f64>>,
        seg_lengths: Vec<f64>,
    ) -> Result<Self> {
        let spec = FlatCoreSpec {
            p,
            dim,
            loop_dirs,
            seg_lengths,
            shift: 0.0,
            scale: 1.0,
            rotation: None,
            translation: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_frame(mut self, rotation: MatN, translation: Vec<f64>) -> Self {
        self.rotation = Some(rotation);
        self.translation = Some(translation);
        self
    }

    pub fn n_loops(&self) -> usize {
        self.loop_dirs.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.is_degenerate() {
            return Err(Error::Domain("flat-core curves require p > 2".into()));
        }
        let n = self.loop_dirs.len();
        if n == 0 {
            return Err(Error::Domain("at least one loop required".into()));
        }
        if self.seg_lengths.len() != n + 1 {
            return Err(Error::Domain(format!(
                "expected {} segment lengths for {} loops",
                n + 1,
                n
            )));
        }
        if self.seg_lengths.iter().any(|&l| !(l >= 0.0)) {
            return Err(Error::Domain("segment lengths must be >= 0".into()));
        }
        for th in &self.loop_dirs {
            check_loop_dir(th, self.dim)?;
        }
        if !(self.scale > 0.0) {
            return Err(Error::Domain("scale must be positive".into()));
        }
        let k = pelliptic::k_p1(self.p)?;
        if !(0.0..2.0 * k + self.seg_lengths[0]).contains(&self.shift) {
            return Err(Error::Domain(format!(
                "shift must lie in [0, 2K + L1) = [0, {})",
                2.0 * k + self.seg_lengths[0]
            )));
        }
        if let Some(r) = &self.rotation {
            if r.n != self.dim || r.orthogonality_defect() > 1e-10 {
                return Err(Error::Domain("frame rotation must be orthogonal".into()));
            }
        }
        Ok(())
    }
}

/// Sample a flat-core curve from its spec. The emitted window is the full
/// concatenated pattern minus the initial `shift`.
pub fn flat_core_curve(spec: &FlatCoreSpec, ds: f64) -> Result<SampledCurve> {
    spec.validate()?;
    let p = spec.p.get();
    let k = pelliptic::k_p1(spec.p)?;
    let n_loops = spec.n_loops();
    let coef = p / (p - 1.0);

    enum Piece {
        Line,
        Loop(usize),
    }
    // (pattern arclength at start, x-offset at start, kind, length)
    let mut pieces: Vec<(f64, f64, Piece, f64)> = Vec::new();
    let tanh_k = pelliptic::tanh_p(spec.p, k)?;
    let loop_dx = 4.0 * tanh_k - 2.0 * k;
    let mut s_acc = 0.0;
    let mut x_acc = 0.0;
    for (j, &l) in spec.seg_lengths.iter().take(n_loops).enumerate() {
        if l > 0.0 {
            pieces.push((s_acc, x_acc, Piece::Line, l));
            s_acc += l;
            x_acc -= l;
        }
        pieces.push((s_acc, x_acc, Piece::Loop(j), 2.0 * k));
        s_acc += 2.0 * k;
        x_acc += loop_dx;
    }
    let trailing = spec.seg_lengths[n_loops];
    if trailing > 0.0 {
        pieces.push((s_acc, x_acc, Piece::Line, trailing));
        s_acc += trailing;
    }
    let total = s_acc - spec.shift;
    if total <= 0.0 {
        return Err(Error::Domain("shift leaves an empty window".into()));
    }

    let (n, ds_eff) = snap_step(total, ds);
    let mut smp = WaveSampler::new(p, 1.0)?;
    // gamma_b(-K) offset along e1 inside a loop piece.
    let loop_start_x = -2.0 * tanh_k + k;

    let mut eval = |u: f64| -> Vec<f64> {
        let idx = pieces
            .iter()
            .rposition(|&(s0, _, _, _)| u >= s0 - 1e-12)
            .unwrap_or(0);
        let (s0, x0, ref kind, len) = pieces[idx];
        let local = (u - s0).clamp(0.0, len);
        let mut pt = vec![0.0; spec.dim];
        match kind {
            Piece::Line => {
                pt[0] = x0 - local;
            }
            Piece::Loop(j) => {
                let s = -k + local;
                let w = smp.eval(s.abs().min(k)).expect("|s| <= K");
                let tanh = s.signum() * w.e_inc;
                let sech_pow = w.cn.max(0.0).powf(p - 1.0);
                pt[0] = x0 + (2.0 * tanh - s) - loop_start_x;
                for (d, th) in pt.iter_mut().zip(&spec.loop_dirs[*j]).skip(1) {
                    *d += coef * sech_pow * th;
                }
            }
        }
        pt
    };

    let origin = eval(spec.shift);
    let mut c = SampledCurve::from_fn(spec.dim, ds_eff, n, false, |i| {
        let u = spec.shift + i as f64 * ds_eff;
        let mut pt = eval(u.min(s_acc));
        for (x, o) in pt.iter_mut().zip(&origin) {
            *x -= o;
        }
        pt
    });

    c.meta = CurveMeta {
        p: Some(p),
        lambda: if spec.scale == 1.0 {
            Some(flat_core_lambda(p))
        } else {
            None
        },
        family: Some("flat-core".into()),
        scale: Some(spec.scale),
    };
    if spec.scale != 1.0 || spec.rotation.is_some() || spec.translation.is_some() {
        let rot = spec
            .rotation
            .clone()
            .unwrap_or_else(|| MatN::identity(spec.dim));
        let tr = spec
            .translation
            .clone()
            .unwrap_or_else(|| vec![0.0; spec.dim]);
        let meta = c.meta.clone();
        c = similarity_transform(&c, spec.scale, &rot, &tr)?;
        c.meta = meta;
        c.meta.scale = Some(spec.scale);
    }
    Ok(c)
}

/// Aligned representative: rotate every loop plane onto the first one.
///
/// Curves sampled from a `FlatCoreSpec` end either inside a straight
/// segment or at a loop endpoint, so the curve end always has vanishing
/// curvature and every loop (including the last) is aligned; the result
/// is at most two-dimensional with the same bending energy.
pub fn aligned_representative(spec: &FlatCoreSpec) -> Result<FlatCoreSpec> {
    spec.validate()?;
    let mut out = spec.clone();
    let first = out.loop_dirs[0].clone();
    for d in out.loop_dirs.iter_mut() {
        *d = first.clone();
    }
    Ok(out)
}

/// Planar wavelike arc at modulus q in (0, 1), canonical scale:
/// gamma(s) = (2E(am(s)) - s) e1 - q p/(p-1) |cn|^{p-2} cn e2,
/// with signed curvature 2 q cn_p(s, q).
pub fn wavelike_arc(
    p: PExponent,
    q: Modulus,
    s_range: (f64, f64),
    ds: f64,
) -> Result<SampledCurve> {
    let qv = q.get();
    if qv <= 0.0 || qv >= 1.0 {
        return Err(Error::Domain(
            "wavelike arcs require q strictly inside (0, 1); use the line or \
             flat-core constructors at the ends of the family"
                .into(),
        ));
    }
    let (s0, s1) = s_range;
    if !(s1 > s0) {
        return Err(Error::Domain("empty arclength window".into()));
    }
    let (n, ds_eff) = snap_step(s1 - s0, ds);
    let mut smp = WaveSampler::new(p.get(), qv)?;
    let coef = qv * p.get() / (p.get() - 1.0);
    let pv = p.get();

    let mut c = SampledCurve::from_fn(2, ds_eff, n, false, |i| {
        let s = s0 + i as f64 * ds_eff;
        let w = smp.eval(s).expect("q < 1 admits any s");
        let cn_pow = w.cn.signum() * w.cn.abs().powf(pv - 1.0);
        vec![2.0 * w.e_inc - s, -coef * cn_pow]
    });
    c.meta = CurveMeta {
        p: Some(pv),
        lambda: None,
        family: Some("wavelike".into()),
        scale: Some(1.0),
    };
    Ok(c)
}

/// N/2-fold figure-eight: the wavelike curve at the special modulus q_p^*
/// over [0, 2N K]. Closes in position and tangent for even N.
pub fn figure_eight(p: PExponent, n_half: u32, ds: f64) -> Result<SampledCurve> {
    if n_half == 0 {
        return Err(Error::Domain("figure-eight needs N >= 1".into()));
    }
    let q = pelliptic::q_star(p)?;
    let k = pelliptic::complete_pair(p, q)?.k;
    let mut c = wavelike_arc(p, q, (0.0, 2.0 * n_half as f64 * k), ds)?;
    if n_half % 2 == 0 {
        c.closed = true;
    }
    c.meta.family = Some("figure-eight".into());
    Ok(c)
}

/// One leaf: the wavelike window [K, 3K] at modulus q_p^*, shifted so both
/// endpoints sit at the origin (the joint). Endpoint tangents make the
/// angle 2 phi^*(p).
pub fn leaf(p: PExponent, ds: f64) -> Result<SampledCurve> {
    let q = pelliptic::q_star(p)?;
    let k = pelliptic::complete_pair(p, q)?.k;
    let mut c = wavelike_arc(p, q, (k, 3.0 * k), ds)?;
    let start = c.first().to_vec();
    let dim = c.dim;
    for i in 0..c.len() {
        for (d, o) in c.points[i * dim..(i + 1) * dim].iter_mut().zip(&start) {
            *d -= o;
        }
    }
    c.meta.family = Some("leaf".into());
    Ok(c)
}

/// Endpoint tangents of the canonical leaf, in its own plane.
pub(crate) fn leaf_tangents(q: f64) -> ([f64; 2], [f64; 2]) {
    let c = 1.0 - 2.0 * q * q;
    let s = 2.0 * q * (1.0 - q * q).sqrt();
    ([c, s], [c, -s])
}

/// An m-tuple of unit tangents at a joint with consecutive inner products
/// cos 2 phi^*(p).
#[derive(Debug, Clone)]
pub struct OmegaTuple {
    pub p: PExponent,
    pub vectors: Vec<Vec<f64>>,
}

impl OmegaTuple {
    pub fn new(p: PExponent, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let t = OmegaTuple { p, vectors };
        t.validate()?;
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.vectors.len();
        if m < 2 {
            return Err(Error::Domain("tuple needs at least two tangents".into()));
        }
        let dim = self.dim();
        let target = (2.0 * pelliptic::phi_star(self.p)?).cos();
        for (i, v) in self.vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Domain("mixed dimensions in tuple".into()));
            }
            if (vecn::norm(v) - 1.0).abs() > 1e-10 {
                return Err(Error::Domain(format!("tangent {i} is not unit length")));
            }
            let next = &self.vectors[(i + 1) % m];
            let ip = vecn::dot(v, next);
            if (ip - target).abs() > 1e-10 {
                return Err(Error::Domain(format!(
                    "inner product <w_{}, w_{}> = {ip} differs from cos 2phi* = {target}",
                    i + 1,
                    i
                )));
            }
        }
        Ok(())
    }

    /// Embed the tuple into a higher ambient dimension (zero padding).
    pub fn embedded(&self, dim: usize) -> Result<OmegaTuple> {
        if dim < self.dim() {
            return Err(Error::Domain("cannot shrink tuple dimension".into()));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.resize(dim, 0.0);
                w
            })
            .collect();
        Ok(OmegaTuple {
            p: self.p,
            vectors,
        })
    }
}

/// Angle tolerance for recognising membership of phi^*(p) in the admissible
/// rational-angle set.
const ANGLE_TOL: f64 = 1e-9;

/// Planar tuple: for odd m it exists only when phi^*(p) = i pi / (2 m')
/// for an admissible pair (odd m' <= m, even 1 < i < m'); the tuple turns
/// m' times forward and closes the remaining leaves in cancelling pairs.
/// Even m always closes by alternation (covered figure-eight).
pub fn omega_tuple_planar(m: u32, p: PExponent) -> Result<OmegaTuple> {
    if m < 2 {
        return Err(Error::Domain("m >= 2 required".into()));
    }
    let phi = pelliptic::phi_star(p)?;
    let two_phi = 2.0 * phi;

    let m_prime = if m % 2 == 0 {
        0
    } else {
        let mut admissible: Option<u32> = None;
        let mut mp = 3;
        while mp <= m {
            let mut i = 2;
            while i < mp {
                let angle = i as f64 * std::f64::consts::PI / (2.0 * mp as f64);
                if (phi - angle).abs() <= ANGLE_TOL {
                    admissible = Some(mp);
                }
                i += 2;
            }
            mp += 2;
        }
        match admissible {
            Some(mp) => mp,
            None => {
                return Err(Error::Nonexistent(format!(
                    "no planar closed {m}-leafed curve at p = {}: phi*(p) is \
                     not an admissible rational angle",
                    p.get()
                )))
            }
        }
    };

    // Rotation signs: m' forward turns, then alternating pairs.
    let mut angle = 0.0f64;
    let mut vectors = Vec::with_capacity(m as usize);
    for i in 0..m {
        vectors.push(vec![angle.cos(), angle.sin()]);
        let sign = if i < m_prime {
            1.0
        } else if (i - m_prime) % 2 == 0 {
            -1.0
        } else {
            1.0
        };
        angle += sign * two_phi;
    }
    OmegaTuple::new(p, vectors)
}

/// Spatial tuple for odd m: equidistributed points on the latitude circle
/// x3 = -h of the unit sphere, stepped by (m-1) pi / m, where
/// h = sqrt(1 - sin^2 phi^* / sin^2((m-1) pi / (2m))). Requires p > p_m^*.
pub fn omega_tuple_spatial(m: u32, p: PExponent) -> Result<OmegaTuple> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::Domain(
            "spatial latitude tuples are for odd m >= 3".into(),
        ));
    }
    let phi = pelliptic::phi_star(p)?;
    let half_step = (m - 1) as f64 * std::f64::consts::PI / (2.0 * m as f64);
    let ratio = phi.sin() / half_step.sin();
    if ratio >= 1.0 {
        return Err(Error::Nonexistent(format!(
            "no closed {m}-leafed curve for p = {} <= p_{m}^*",
            p.get()
        )));
    }
    let h = (1.0 - ratio * ratio).sqrt();
    let rho = ratio;
    let mut vectors = Vec::with_capacity(m as usize);
    for i in 0..m {
        let a = 2.0 * half_step * i as f64;
        vectors.push(vec![rho * a.cos(), rho * a.sin(), -h]);
    }
    OmegaTuple::new(p, vectors)
}

/// Specification of a closed m-leafed curve: the tangent tuple at the
/// joint, a common leaf length and the joint position.
#[derive(Debug, Clone)]
pub struct LeafedSpec {
    pub tuple: OmegaTuple,
    pub leaf_length: f64,
    pub joint: Vec<f64>,
}

impl LeafedSpec {
    pub fn new(tuple: OmegaTuple, leaf_length: f64, joint: Vec<f64>) -> Result<Self> {
        if !(leaf_length > 0.0) {
            return Err(Error::Domain("leaf length must be positive".into()));
        }
        if joint.len() != tuple.dim() {
            return Err(Error::Domain("joint dimension mismatch".into()));
        }
        tuple.validate()?;
        Ok(LeafedSpec {
            tuple,
            leaf_length,
            joint,
        })
    }
}

/// Closed m-leafed curve: m equal leaves joined C^1 at the joint, leaf i
/// carrying endpoint tangents (w_{i-1}, w_i).
pub fn m_leafed_curve(spec: &LeafedSpec, ds: f64) -> Result<SampledCurve> {
    let p = spec.tuple.p;
    let dim = spec.tuple.dim();
    let m = spec.tuple.m();
    let q = pelliptic::q_star(p)?.get();
    let k = pelliptic::complete_pair(p, pelliptic::q_star(p)?)?.k;
    let canonical_len = 2.0 * k;
    let scale = spec.leaf_length / canonical_len;

    // Canonical leaf sampled so the scaled step equals ds.
    let canonical = leaf(p, ds / scale)?;
    let (t_start, t_end) = leaf_tangents(q);

    // Orthonormal coordinates of the canonical leaf in its own plane.
    let u1 = t_start;
    let d = t_end[0] * u1[0] + t_end[1] * u1[1];
    let mut u2 = [t_end[0] - d * u1[0], t_end[1] - d * u1[1]];
    vecn::normalize(&mut u2);

    let nleaf = canonical.len();
    let mut points: Vec<f64> = Vec::with_capacity(((nleaf - 1) * m + 1) * dim);
    for i in 0..m {
        let w_prev = &spec.tuple.vectors[(i + m - 1) % m];
        let w_next = &spec.tuple.vectors[i];
        // The unique linear isometry of the leaf plane onto
        // span{w_prev, w_next} with (t_start, t_end) -> (w_prev, w_next).
        let v1 = w_prev.clone();
        let c = vecn::dot(w_next, &v1);
        let mut v2: Vec<f64> = w_next.iter().zip(&v1).map(|(x, y)| x - c * y).collect();
        vecn::normalize(&mut v2);

        let start = if i == 0 { 0 } else { 1 };
        for j in start..nleaf {
            let pt = canonical.point(j);
            let a = pt[0] * u1[0] + pt[1] * u1[1];
            let b = pt[0] * u2[0] + pt[1] * u2[1];
            for d in 0..dim {
                points.push(spec.joint[d] + scale * (a * v1[d] + b * v2[d]));
            }
        }
    }
    let mut c = SampledCurve {
        dim,
        step: canonical.step() * scale,
        points,
        closed: true,
        meta: CurveMeta {
            p: Some(p.get()),
            lambda: None,
            family: Some("m-leafed".into()),
            scale: Some(scale),
        },
    };
    // The assembled closing point coincides with the joint; snap it exactly.
    let n = c.len();
    for d in 0..dim {
        c.points[(n - 1) * dim + d] = c.points[d];
    }
    Ok(c)
}

/// Similarity transform x -> scale * R x + b. Bending energy scales by
/// scale^(1-p), length by scale, normalized energy is invariant.
pub fn similarity_transform(
    c: &SampledCurve,
    scale: f64,
    rotation: &MatN,
    translation: &[f64],
) -> Result<SampledCurve> {
    if !(scale > 0.0) {
        return Err(Error::Domain("scale must be positive".into()));
    }
    if rotation.n != c.dim || translation.len() != c.dim {
        return Err(Error::Domain("frame dimension mismatch".into()));
    }
    if rotation.orthogonality_defect() > 1e-10 {
        return Err(Error::Domain("rotation must be orthogonal".into()));
    }
    let mut points = Vec::with_capacity(c.points.len());
    for i in 0..c.len() {
        let rp = rotation.apply(c.point(i));
        for (v, t) in rp.iter().zip(translation) {
            points.push(scale * v + t);
        }
    }
    let mut out = SampledCurve {
        dim: c.dim,
        step: c.step * scale,
        points,
        closed: c.closed,
        meta: c.meta.clone(),
    };
    out.meta.scale = c.meta.scale.map(|s| s * scale);
    if scale != 1.0 {
        out.meta.lambda = None;
    }
    Ok(out)
}

/// Arclength resampling by linear interpolation along the polyline.
pub fn resample(c: &SampledCurve, ds_new: f64) -> Result<SampledCurve> {
    if ds_new <= 0.0 {
        return Err(Error::Domain("step must be positive".into()));
    }
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidCurve(
            "cannot resample a degenerate curve".into(),
        ));
    }
    let mut cum = Vec::with_capacity(n);
    cum.push(0.0);
    for i in 1..n {
        cum.push(cum[i - 1] + vecn::dist(c.point(i - 1), c.point(i)));
    }
    let total = *cum.last().unwrap();
    if total <= 0.0 {
        return Err(Error::InvalidCurve("zero-length curve".into()));
    }
    let (nseg, ds_eff) = snap_step(total, ds_new);
    let mut cursor = 0usize;
    let mut out = SampledCurve::from_fn(c.dim, ds_eff, nseg, c.closed, |i| {
        let target = (i as f64 * ds_eff).min(total);
        while cursor + 1 < n - 1 && cum[cursor + 1] < target {
            cursor += 1;
        }
        let seg = (cum[cursor + 1] - cum[cursor]).max(1e-300);
        let t = ((target - cum[cursor]) / seg).clamp(0.0, 1.0);
        c.point(cursor)
            .iter()
            .zip(c.point(cursor + 1))
            .map(|(a, b)| a + t * (b - a))
            .collect()
    });
    out.meta = c.meta.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pelliptic::{complete_pair, phi_star, q_star};

    fn pex(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    const DS: f64 = 1e-4;

    #[test]
    fn line_is_straight_and_measured() {
        let c = line_segment(2.0, 3, 1e-3).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.unit_speed_defect() < 1e-12);
        assert_eq!(c.first(), &[0.0, 0.0, 0.0]);
        let end = c.last();
        assert!((end[0] + 2.0).abs() < 1e-12 && end[1] == 0.0);
        let degenerate = line_segment(0.0, 2, 1e-3).unwrap();
        assert_eq!(degenerate.len(), 1);
    }

    #[test]
    fn concat_of_collinear_lines() {
        let a = line_segment(1.0, 2, 1e-3).unwrap();
        let b = line_segment(1.0, 2, 1e-3).unwrap();
        let c = concat(&a, &b).unwrap();
        assert!((c.last()[0] + 2.0).abs() < 1e-12);
        assert!(c.unit_speed_defect() < 1e-12);
    }

    #[test]
    fn concat_translates_second_operand() {
        let a = line_segment(1.0, 2, 1e-3).unwrap();
        let lp = flat_core_loop(pex(3.0), &[0.0, 1.0], 2, 1e-3).unwrap();
        let d = concat(&a, &lp).unwrap();
        // end = a.end + (b.end - b.start)
        let expect0 = a.last()[0] + lp.last()[0] - lp.first()[0];
        assert!((d.last()[0] - expect0).abs() < 1e-10);
        // start tangent of the loop part is -e1 (gamma_l followed by
        // gamma_b both march along -e1 at the junction).
        let tj = d.tangent(a.len() - 1);
        assert!((tj[0] + 1.0).abs() < 1e-6, "{tj:?}");
    }

    #[test]
    fn flat_core_loop_geometry() {
        let p = pex(4.0);
        let c = flat_core_loop(p, &[0.0, 1.0, 0.0], 3, DS).unwrap();
        assert!(c.unit_speed_defect() < 1e-6, "{}", c.unit_speed_defect());
        let t0 = c.tangent(0);
        let t1 = c.tangent(c.len() - 1);
        for t in [&t0, &t1] {
            assert!((t[0] + 1.0).abs() < 1e-6, "{t:?}");
            assert!(t[2].abs() < 1e-12);
        }
        // Peak height p/(p-1) above the axis at s = 0.
        let mid = c.point(c.len() / 2);
        assert!((mid[1] - 4.0 / 3.0).abs() < 1e-6);
        assert!(flat_core_loop(pex(2.0), &[0.0, 1.0, 0.0], 3, DS).is_err());
    }

    #[test]
    fn flat_core_curve_matches_single_loop() {
        let p = pex(3.0);
        let spec = FlatCoreSpec::new(p, 3, vec![vec![0.0, 1.0, 0.0]], vec![0.0, 0.0]).unwrap();
        let c = flat_core_curve(&spec, 1e-3).unwrap();
        let lp = flat_core_loop(p, &[0.0, 1.0, 0.0], 3, 1e-3).unwrap();
        assert_eq!(c.len(), lp.len());
        let mut worst = 0.0f64;
        for i in 0..c.len() {
            let d: f64 = c
                .point(i)
                .iter()
                .zip(lp.point(i))
                .zip(lp.point(0))
                .map(|((a, b), o)| (a - (b - o)).abs())
                .fold(0.0, f64::max);
            worst = worst.max(d);
        }
        assert!(worst < 1e-9, "max deviation {worst}");
    }

    #[test]
    fn flat_core_two_loops_is_unit_speed() {
        let p = pex(4.0);
        let spec = FlatCoreSpec::new(
            p,
            3,
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.0, 0.7, 0.0],
        )
        .unwrap();
        let c = flat_core_curve(&spec, DS).unwrap();
        assert!(c.unit_speed_defect() < 1e-6, "{}", c.unit_speed_defect());
    }

    #[test]
    fn aligned_representative_aligns_and_fixes_aligned() {
        let p = pex(3.5);
        let spec = FlatCoreSpec::new(
            p,
            3,
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.1, 0.5, 0.2],
        )
        .unwrap();
        let aligned = aligned_representative(&spec).unwrap();
        assert!(aligned
            .loop_dirs
            .iter()
            .all(|d| d == &spec.loop_dirs[0]));
        let again = aligned_representative(&aligned).unwrap();
        assert_eq!(again.loop_dirs, aligned.loop_dirs);
    }

    #[test]
    fn wavelike_arc_is_unit_speed_with_expected_tangent() {
        let p = pex(3.0);
        let q = Modulus::new(0.8).unwrap();
        let c = wavelike_arc(p, q, (0.0, 3.0), DS).unwrap();
        assert!(c.unit_speed_defect() < 1e-6, "{}", c.unit_speed_defect());
        // Tangent x-component: 1 - 2 q^2 sin^2(am).
        let mut smp = WaveSampler::new(3.0, 0.8).unwrap();
        for &i in &[1usize, 1000, 20000] {
            let s = i as f64 * c.step();
            let w = smp.eval(s).unwrap();
            let expect = 1.0 - 2.0 * 0.64 * w.sin_am * w.sin_am;
            let t = c.tangent(i);
            assert!((t[0] - expect).abs() < 1e-6, "i = {i}: {} vs {expect}", t[0]);
        }
        assert!(wavelike_arc(p, Modulus::new(0.0).unwrap(), (0.0, 1.0), DS).is_err());
        assert!(wavelike_arc(p, Modulus::ONE, (0.0, 1.0), DS).is_err());
    }

    #[test]
    fn figure_eight_closes_for_even_n() {
        let p = pex(2.0);
        let c = figure_eight(p, 2, DS).unwrap();
        assert!(c.is_closed());
        let gap = vecn::dist(c.first(), c.last());
        assert!(gap < 1e-6, "closure gap {gap}");
        let open = figure_eight(p, 1, DS).unwrap();
        assert!(!open.is_closed());
    }

    #[test]
    fn leaf_endpoints_and_crossing_angle() {
        for &pv in &[1.5, 2.0, 3.0] {
            let p = pex(pv);
            let c = leaf(p, DS).unwrap();
            let gap = vecn::dist(c.first(), c.last());
            assert!(gap < 1e-6, "p = {pv}: endpoint gap {gap}");
            assert!(vecn::norm(c.first()) < 1e-9, "joint at origin");
            // cos(angle between end tangents) = 1 - 8 q*^2 + 8 q*^4.
            let q = q_star(p).unwrap().get();
            let want = 1.0 - 8.0 * q * q + 8.0 * q.powi(4);
            let t0 = c.tangent(0);
            let t1 = c.tangent(c.len() - 1);
            let got = vecn::dot(&t0, &t1);
            assert!((got - want).abs() < 1e-6, "p = {pv}: {got} vs {want}");
            let phi2 = (2.0 * phi_star(p).unwrap()).cos();
            assert!((want - phi2).abs() < 1e-12);
        }
    }

    #[test]
    fn planar_tuple_for_three_leaves_at_p_dagger() {
        let pd = crate::pelliptic::pm_star(3).unwrap();
        let t = omega_tuple_planar(3, pd).unwrap();
        assert_eq!(t.m(), 3);
        for i in 0..3 {
            let ip = vecn::dot(&t.vectors[i], &t.vectors[(i + 1) % 3]);
            assert!((ip - (2.0 * std::f64::consts::PI / 3.0).cos()).abs() < 1e-9);
        }
        assert!(omega_tuple_planar(3, pex(2.0)).is_err());
        // Even m always has a planar tuple.
        assert!(omega_tuple_planar(4, pex(2.0)).is_ok());
        // m = 5 at p dagger: planar via the (2,3) pair plus a figure-eight.
        assert!(omega_tuple_planar(5, pd).is_ok());
    }

    #[test]
    fn spatial_tuple_inner_products_and_closure() {
        for &(m, pv) in &[(3u32, 2.0), (5, 2.0), (7, 3.0)] {
            let p = pex(pv);
            let t = omega_tuple_spatial(m, p).unwrap();
            assert_eq!(t.m(), m as usize);
            assert_eq!(t.dim(), 3);
            t.validate().unwrap();
        }
        assert!(omega_tuple_spatial(3, pex(1.2)).is_err());
    }

    #[test]
    fn spatial_tuple_degenerates_to_equator() {
        // p slightly above p_3^*: latitude h close to 0.
        let p3 = crate::pelliptic::pm_star(3).unwrap().get();
        let t = omega_tuple_spatial(3, pex(p3 + 1e-6)).unwrap();
        let h = -t.vectors[0][2];
        assert!(h > 0.0 && h < 0.01, "h = {h}");
    }

    #[test]
    fn m_leafed_curve_closes_with_unit_speed() {
        let p = pex(2.0);
        let tuple = omega_tuple_spatial(3, p).unwrap();
        let spec = LeafedSpec::new(tuple, 2.0, vec![0.0; 3]).unwrap();
        let c = m_leafed_curve(&spec, 1e-3).unwrap();
        assert!(c.is_closed());
        assert!(c.unit_speed_defect() < 2e-5, "{}", c.unit_speed_defect());
        assert_eq!(c.first(), c.last());
    }

    #[test]
    fn similarity_scales_and_moves() {
        let p = pex(2.0);
        let c = leaf(p, 1e-3).unwrap();
        let rot = MatN::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let moved = similarity_transform(&c, 2.5, &rot, &[1.0, -2.0]).unwrap();
        assert_eq!(moved.len(), c.len());
        assert!((moved.step() - 2.5 * c.step()).abs() < 1e-15);
        let d0 = vecn::dist(moved.first(), &[1.0, -2.0]);
        assert!(d0 < 1e-9, "start maps to the translation, {d0}");
        let skew = MatN::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]);
        assert!(similarity_transform(&c, 1.0, &skew, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn resample_round_trip_stays_close() {
        let p = pex(2.0);
        let q = q_star(p).unwrap();
        let k = complete_pair(p, q).unwrap().k;
        let c = wavelike_arc(p, q, (0.0, 2.0 * k), 1e-4).unwrap();
        let coarse = resample(&c, 2e-4).unwrap();
        let fine = resample(&coarse, 1e-4).unwrap();
        let mut worst = 0.0f64;
        for i in (0..fine.len()).step_by(97) {
            let mut best = f64::INFINITY;
            let j0 = i.saturating_sub(4);
            for j in j0..(i + 4).min(c.len()) {
                best = best.min(vecn::dist(fine.point(i), c.point(j)));
            }
            worst = worst.max(best);
        }
        assert!(worst < 1e-8, "round-trip deviation {worst}");
        let line = line_segment(1.0, 2, 1e-3).unwrap();
        let r = resample(&line, 7e-3).unwrap();
        assert!(r.unit_speed_defect() < 1e-12);
        assert!(resample(&line_segment(0.0, 2, 1e-3).unwrap(), 1e-3).is_err());
        // Closed curves stay closed.
        let f8 = figure_eight(p, 2, 1e-3).unwrap();
        let rf = resample(&f8, 2.5e-3).unwrap();
        assert!(rf.is_closed());
        assert!(vecn::dist(rf.first(), rf.last()) < 1e-9);
    }
}
