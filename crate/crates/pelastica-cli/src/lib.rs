//! Command-line driver: constructs, verifies and classifies p-elasticae,
//! reading/writing the curve CSV and JSON report formats.
//!
//! Exit codes: 0 success, 2 usage or i/o, 3 domain error (including proven
//! nonexistence), 4 verification failure.

pub mod format;

use clap::{Parser, Subcommand, ValueEnum};
use format::{defined, read_curve, report, undefined, verdict, write_curve};
use pelastica::curvekit::{
    figure_eight, flat_core_curve, flat_core_lambda, flat_core_loop, leaf, line_segment,
    m_leafed_curve, omega_tuple_planar, omega_tuple_spatial, wavelike_arc, FlatCoreSpec,
    LeafedSpec, SampledCurve,
};
use pelastica::elverify::{estimate_lambda, weak_el_residual, TestFunctionBattery};
use pelastica::pelliptic::{
    complete_pair, k_p1, phi_star, pm_set, pm_star, q_star, Modulus, PExponent,
};
use pelastica::spatial::{m_p, spatial_elastica, ParamSet};
use pelastica::{geom, liyau, pinned, Error as PError};
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "pelastica",
    version,
    about = "Construct, classify and verify p-elasticae in R^n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Verdict tolerance; falls back to PELASTICA_TOL, then 1e-4.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for parameter sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Line,
    FlatCoreLoop,
    FlatCore,
    Wavelike,
    FigureEight,
    Leaf,
    MLeafed,
    Spatial,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report the derived constants at a given exponent.
    Constants {
        /// Exponent(s) p > 1; repeat the flag for a sweep.
        #[arg(long, required = true)]
        p: Vec<f64>,
        /// Multiplier for A_{p,lambda} / T_{p,lambda}; defaults to the
        /// canonical flat-core multiplier 2^{p-1}(p-1).
        #[arg(long)]
        lambda: Option<f64>,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a curve family to a CSV file.
    Curve {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        p: Option<f64>,
        /// Arclength step; default 1e-3 times the curve length.
        #[arg(long)]
        ds: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write an (s, k, tau) profile CSV.
        #[arg(long)]
        emit_plot: Option<PathBuf>,
        /// Ambient dimension (line, flat-core, m-leafed).
        #[arg(long)]
        dim: Option<usize>,
        /// Length (line) or integration length (spatial).
        #[arg(long)]
        length: Option<f64>,
        /// Modulus q in (0,1) (wavelike).
        #[arg(long)]
        q: Option<f64>,
        /// Window start/end (wavelike).
        #[arg(long)]
        s0: Option<f64>,
        #[arg(long)]
        s1: Option<f64>,
        /// Half-fold count N (figure-eight).
        #[arg(long)]
        folds: Option<u32>,
        /// Leaf count (m-leafed).
        #[arg(long)]
        m: Option<u32>,
        /// Common leaf length (m-leafed).
        #[arg(long)]
        leaf_length: Option<f64>,
        /// Loop direction, comma-separated (flat-core-loop).
        #[arg(long)]
        dir: Option<String>,
        /// Loop directions, semicolon-separated vectors (flat-core).
        #[arg(long)]
        dirs: Option<String>,
        /// Segment lengths L_1..L_{N+1}, comma-separated (flat-core).
        #[arg(long)]
        lengths: Option<String>,
        /// Parameter shift into the first line/loop pair (flat-core).
        #[arg(long)]
        shift: Option<f64>,
        /// Similarity scale (flat-core).
        #[arg(long)]
        scale: Option<f64>,
        /// Multiplier lambda (spatial).
        #[arg(long)]
        lambda: Option<f64>,
        /// Torsion constant C != 0 (spatial).
        #[arg(long)]
        c_const: Option<f64>,
        /// Initial w = k^{p-1} (spatial).
        #[arg(long)]
        w0: Option<f64>,
        /// Initial w' (spatial).
        #[arg(long, default_value_t = 0.0)]
        w0p: f64,
        /// Integrator step (spatial).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Verify that a sampled curve is a p-elastica.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Exponent; defaults to the file metadata.
        #[arg(long)]
        p: Option<f64>,
        /// Multiplier; estimated by least squares when absent.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_plot: Option<PathBuf>,
    },
    /// Check the multiplicity inequality on a closed curve.
    Liyau {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the pinned boundary value problem.
    Pinned {
        #[arg(long)]
        p: f64,
        /// Chord-to-length ratio in (0, 1).
        #[arg(long)]
        ratio: f64,
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        ds: Option<f64>,
        /// Write the minimizer curve here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
    /// List the planar m-leafed exponent set P_m and p_m^*.
    Pm {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a torsion-carrying solution and verify it.
    Spatial {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        c_const: f64,
        #[arg(long)]
        w0: f64,
        #[arg(long, default_value_t = 0.0)]
        w0p: f64,
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
}

fn default_tol(cli_tol: Option<f64>) -> f64 {
    cli_tol
        .or_else(|| {
            std::env::var("PELASTICA_TOL")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1e-4)
}

fn math_exit(e: &PError) -> i32 {
    match e {
        PError::Domain(_)
        | PError::Divergence(_)
        | PError::Nonexistent(_)
        | PError::Bracket(_)
        | PError::BlowUp(_)
        | PError::InvalidCurve(_)
        | PError::CannotEstimate(_)
        | PError::Quadrature(_) => EXIT_DOMAIN,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
}

impl From<PError> for Failure {
    fn from(e: PError) -> Self {
        Failure {
            code: math_exit(&e),
            message: e.to_string(),
        }
    }
}

impl From<format::FormatError> for Failure {
    fn from(e: format::FormatError) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("i/o error: {e}"),
        }
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).expect("serializable report");
    println!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}

fn parse_vec(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("bad number {t:?}")))
        })
        .collect()
}

fn cmd_constants(
    ps: &[f64],
    lambda: Option<f64>,
    out: Option<&Path>,
    jobs: usize,
) -> Result<i32, Failure> {
    let compute = |pv: f64| -> Result<Value, PError> {
        let p = PExponent::new(pv)?;
        let lam = lambda.unwrap_or_else(|| flat_core_lambda(pv));
        let mut m = Map::new();
        m.insert("p".into(), defined(pv));
        m.insert("lambda".into(), defined(lam));
        let qs = q_star(p)?;
        m.insert("q_star".into(), defined(qs.get()));
        m.insert("varpi_star".into(), defined(pelastica::pelliptic::varpi_star(p)?));
        m.insert("phi_star".into(), defined(phi_star(p)?));
        m.insert(
            "embeddedness_threshold".into(),
            defined(liyau::embeddedness_threshold(p)?),
        );
        match k_p1(p) {
            Ok(k) => {
                m.insert("k_p_1".into(), defined(k));
            }
            Err(_) => {
                m.insert(
                    "k_p_1".into(),
                    undefined("divergent for p <= 2: no flat-core solutions"),
                );
            }
        }
        let params = ParamSet::new(p, lam, 0.0)?;
        match params.a_pl {
            Some(a) => {
                m.insert("a_p_lambda".into(), defined(a));
            }
            None => {
                m.insert("a_p_lambda".into(), undefined("defined for lambda > 0"));
            }
        }
        match params.t_pl {
            Some(t) => {
                m.insert("t_p_lambda".into(), defined(t));
            }
            None => {
                m.insert(
                    "t_p_lambda".into(),
                    undefined("finite only for p > 2 and lambda > 0"),
                );
            }
        }
        match m_p(pv) {
            Some(v) => {
                m.insert("m_p".into(), json!(v));
            }
            None => {
                m.insert("m_p".into(), undefined("regularity order applies for p > 2"));
            }
        }
        Ok(Value::Object(m))
    };

    let entries: Vec<Result<Value, PError>> = if jobs > 1 && ps.len() > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ps.iter().map(|&pv| scope.spawn(move || compute(pv))).collect();
            handles.into_iter().map(|h| h.join().expect("worker")).collect()
        })
    } else {
        ps.iter().map(|&pv| compute(pv)).collect()
    };
    let mut values = Vec::new();
    for e in entries {
        values.push(e.map_err(Failure::from)?);
    }
    let mut body = Map::new();
    body.insert("constants".into(), Value::Array(values));
    body.insert("seed".into(), Value::Null);
    emit(&report("constants", body), out)?;
    Ok(EXIT_OK)
}

struct CurveArgs<'a> {
    p: Option<f64>,
    ds: Option<f64>,
    dim: Option<usize>,
    length: Option<f64>,
    q: Option<f64>,
    s0: Option<f64>,
    s1: Option<f64>,
    folds: Option<u32>,
    m: Option<u32>,
    leaf_length: Option<f64>,
    dir: Option<&'a str>,
    dirs: Option<&'a str>,
    lengths: Option<&'a str>,
    shift: Option<f64>,
    scale: Option<f64>,
    lambda: Option<f64>,
    c_const: Option<f64>,
    w0: Option<f64>,
    w0p: f64,
    step: Option<f64>,
}

fn need_p(a: &CurveArgs) -> Result<PExponent, Failure> {
    let pv = a.p.ok_or_else(|| Failure::usage("--p is required for this family"))?;
    Ok(PExponent::new(pv)?)
}

/// Default sampling step: 1e-3 times the curve length.
fn ds_for(a: &CurveArgs, len: f64) -> f64 {
    a.ds.unwrap_or(1e-3 * len)
}

fn build_curve(family: Family, a: &CurveArgs) -> Result<SampledCurve, Failure> {
    match family {
        Family::Line => {
            let len = a.length.ok_or_else(|| Failure::usage("--length required"))?;
            Ok(line_segment(len, a.dim.unwrap_or(2), ds_for(a, len.max(1e-9)))?)
        }
        Family::FlatCoreLoop => {
            let p = need_p(a)?;
            let dim = a.dim.unwrap_or(2);
            let theta = match a.dir {
                Some(text) => parse_vec(text)?,
                None => {
                    let mut v = vec![0.0; dim];
                    v[1] = 1.0;
                    v
                }
            };
            let len = 2.0 * k_p1(p)?;
            Ok(flat_core_loop(p, &theta, dim, ds_for(a, len))?)
        }
        Family::FlatCore => {
            let p = need_p(a)?;
            let dirs_text = a.dirs.ok_or_else(|| Failure::usage("--dirs required"))?;
            let dirs: Vec<Vec<f64>> = dirs_text
                .split(';')
                .map(parse_vec)
                .collect::<Result<_, _>>()?;
            let dim = a.dim.unwrap_or_else(|| dirs.first().map_or(2, |d| d.len()));
            let lengths = match a.lengths {
                Some(text) => parse_vec(text)?,
                None => vec![0.0; dirs.len() + 1],
            };
            let mut spec = FlatCoreSpec::new(p, dim, dirs, lengths)?;
            if let Some(s) = a.shift {
                spec = spec.with_shift(s);
            }
            if let Some(s) = a.scale {
                spec = spec.with_scale(s);
            }
            spec.validate()?;
            let n_loops = spec.n_loops() as f64;
            let len = (2.0 * k_p1(p)? * n_loops + spec.seg_lengths.iter().sum::<f64>())
                * spec.scale;
            Ok(flat_core_curve(&spec, ds_for(a, len) / spec.scale)?)
        }
        Family::Wavelike => {
            let p = need_p(a)?;
            let q = Modulus::new(a.q.ok_or_else(|| Failure::usage("--q required"))?)?;
            let k = complete_pair(p, q)?.k;
            let (s0, s1) = (a.s0.unwrap_or(0.0), a.s1.unwrap_or(2.0 * k));
            Ok(wavelike_arc(p, q, (s0, s1), ds_for(a, (s1 - s0).abs().max(1e-9)))?)
        }
        Family::FigureEight => {
            let p = need_p(a)?;
            let folds = a.folds.unwrap_or(2);
            let k = complete_pair(p, q_star(p)?)?.k;
            let len = 2.0 * folds as f64 * k;
            Ok(figure_eight(p, folds, ds_for(a, len))?)
        }
        Family::Leaf => {
            let p = need_p(a)?;
            let len = 2.0 * complete_pair(p, q_star(p)?)?.k;
            Ok(leaf(p, ds_for(a, len))?)
        }
        Family::MLeafed => {
            let p = need_p(a)?;
            let m = a.m.ok_or_else(|| Failure::usage("--m required"))?;
            let dim = a.dim.unwrap_or(2);
            let tuple = if dim == 2 {
                omega_tuple_planar(m, p)?
            } else {
                // Prefer the latitude construction; fall back to an
                // embedded planar tuple (even m, or p in P_m).
                match omega_tuple_spatial(m, p) {
                    Ok(t) => t.embedded(dim)?,
                    Err(_) => omega_tuple_planar(m, p)?.embedded(dim)?,
                }
            };
            let leaf_len = a.leaf_length.unwrap_or(1.0);
            let spec = LeafedSpec::new(tuple, leaf_len, vec![0.0; dim])?;
            let len = m as f64 * leaf_len;
            Ok(m_leafed_curve(&spec, ds_for(a, len))?)
        }
        Family::Spatial => {
            let p = need_p(a)?;
            let lambda = a.lambda.ok_or_else(|| Failure::usage("--lambda required"))?;
            let c_const = a.c_const.ok_or_else(|| Failure::usage("--c-const required"))?;
            let w0 = a.w0.ok_or_else(|| Failure::usage("--w0 required"))?;
            let length = a.length.ok_or_else(|| Failure::usage("--length required"))?;
            let params = ParamSet::new(p, lambda, c_const)?;
            let (c, _report) =
                spatial_elastica(&params, w0, a.w0p, length, a.step.unwrap_or(1e-4))?;
            Ok(c)
        }
    }
}

fn maybe_emit_plot(c: &SampledCurve, path: Option<&Path>) -> Result<(), Failure> {
    if let Some(p) = path {
        let prof = geom::curvature_profile(c)?;
        std::fs::write(p, format::profile_to_string(&prof))?;
    }
    Ok(())
}

fn cmd_verify(
    input: &Path,
    p_flag: Option<f64>,
    lambda_flag: Option<f64>,
    tol: f64,
    out: Option<&Path>,
    emit_plot: Option<&Path>,
) -> Result<i32, Failure> {
    let c = read_curve(input)?;
    let pv = p_flag
        .or(c.meta.p)
        .ok_or_else(|| Failure::usage("exponent unknown: pass --p or use a file with p metadata"))?;
    let p = PExponent::new(pv)?;
    let battery = TestFunctionBattery::clamped(c.dim(), geom::length(&c), 12);

    let (lambda, lambda_source) = match lambda_flag.or(c.meta.lambda) {
        Some(l) => (l, if lambda_flag.is_some() { "flag" } else { "metadata" }),
        None => (estimate_lambda(&c, p, &battery)?, "estimated"),
    };
    let rep = weak_el_residual(&c, p, lambda, &battery, tol)?;
    maybe_emit_plot(&c, emit_plot)?;

    let mut body = Map::new();
    body.insert(
        "params".into(),
        json!({ "p": pv, "lambda": lambda, "lambda_source": lambda_source, "dim": c.dim(), "samples": c.len() }),
    );
    let energies = geom::bending_energy(&c, p)?;
    body.insert("energies".into(), serde_json::to_value(&energies).unwrap());
    body.insert(
        "residuals".into(),
        json!({
            "weak": rep.weak_residuals,
            "weak_max": rep.weak_residuals.iter().cloned().fold(0.0f64, f64::max),
            "strong": Value::Null,
            "strong_reason": "strong residuals apply to closed-form or integrated profiles; see the spatial command",
        }),
    );
    body.insert(
        "verdicts".into(),
        json!([verdict("weak-euler-lagrange", rep.verdict, tol)]),
    );
    body.insert("seed".into(), Value::Null);
    emit(&report("verify", body), out)?;
    Ok(if rep.verdict { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_liyau(
    input: &Path,
    p_flag: Option<f64>,
    tol: Option<f64>,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let c = read_curve(input)?;
    let pv = p_flag
        .or(c.meta.p)
        .ok_or_else(|| Failure::usage("exponent unknown: pass --p or use a file with p metadata"))?;
    let p = PExponent::new(pv)?;
    let tol = tol.unwrap_or(1e-3);
    let rep = liyau::check_liyau(&c, p, tol)?;
    let mut body = Map::new();
    body.insert("params".into(), json!({ "p": pv, "tolerance": tol }));
    body.insert("liyau".into(), serde_json::to_value(&rep).unwrap());
    body.insert(
        "verdicts".into(),
        json!([verdict("liyau-inequality", rep.satisfied, tol)]),
    );
    body.insert("seed".into(), Value::Null);
    emit(&report("liyau", body), out)?;
    Ok(if rep.satisfied { EXIT_OK } else { EXIT_VERIFY })
}

#[allow(clippy::too_many_arguments)]
fn cmd_pinned(
    pv: f64,
    ratio: f64,
    length: f64,
    dim: usize,
    ds: Option<f64>,
    out: Option<&Path>,
    report_out: Option<&Path>,
    tol: f64,
) -> Result<i32, Failure> {
    let p = PExponent::new(pv)?;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Failure::usage("--ratio must lie in (0, 1)"));
    }
    let mut p1 = vec![0.0; dim.max(2)];
    p1[0] = ratio * length;
    let problem = pinned::PinnedProblem::new(p, vec![0.0; dim.max(2)], p1, length)?;
    let c = pinned::pinned_minimizer(&problem, ds.unwrap_or(1e-3 * length))?;
    if let Some(path) = out {
        write_curve(path, &c)?;
    }
    let bc = pelastica::elverify::natural_bc_check(&c, p)?;
    let energies = geom::bending_energy(&c, p)?;
    let mut body = Map::new();
    body.insert(
        "params".into(),
        json!({ "p": pv, "ratio": ratio, "length": length, "dim": dim }),
    );
    body.insert(
        "pinned".into(),
        json!({
            "flat_core_feasible": pinned::flat_core_pinned_feasible(&problem),
            "modulus": pinned::solve_modulus_for_ratio(p, ratio)?.get(),
            "natural_bc": serde_json::to_value(&bc).unwrap(),
        }),
    );
    body.insert("energies".into(), serde_json::to_value(&energies).unwrap());
    body.insert(
        "verdicts".into(),
        json!([verdict("natural-boundary-conditions", bc.ok, pelastica::elverify::NATURAL_BC_TOL)]),
    );
    body.insert("seed".into(), Value::Null);
    emit(&report("pinned", body), report_out)?;
    let _ = tol;
    Ok(EXIT_OK)
}

fn cmd_pm(m: u32, out: Option<&Path>, jobs: usize) -> Result<i32, Failure> {
    // pm_set memoizes by crossing angle; a sweep only pays once per angle,
    // so parallelism just warms the cache.
    let values = if jobs > 1 {
        std::thread::scope(|scope| {
            let handle = scope.spawn(|| pm_set(m));
            handle.join().expect("worker")
        })?
    } else {
        pm_set(m)?
    };
    let list: Vec<f64> = values.iter().map(|p| p.get()).collect();
    let mut body = Map::new();
    body.insert(
        "pm".into(),
        json!({
            "m": m,
            "count": list.len(),
            "values": list,
            "p_m_star": pm_star(m)?.get(),
        }),
    );
    body.insert("seed".into(), Value::Null);
    emit(&report("pm", body), out)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_spatial(
    pv: f64,
    lambda: f64,
    c_const: f64,
    w0: f64,
    w0p: f64,
    length: f64,
    step: f64,
    out: Option<&Path>,
    report_out: Option<&Path>,
) -> Result<i32, Failure> {
    let p = PExponent::new(pv)?;
    let params = ParamSet::new(p, lambda, c_const)?;
    let (c, rep) = spatial_elastica(&params, w0, w0p, length, step)?;
    if let Some(path) = out {
        write_curve(path, &c)?;
    }
    let mut body = Map::new();
    body.insert(
        "params".into(),
        json!({
            "p": pv, "lambda": lambda, "c_const": c_const,
            "w0": w0, "w0p": w0p, "length": length, "step": step,
            "a_level": params.first_integral_level(w0, w0p),
        }),
    );
    body.insert("residuals".into(), serde_json::to_value(&rep).unwrap());
    body.insert("energies".into(), serde_json::to_value(&geom::bending_energy(&c, p)?).unwrap());
    body.insert(
        "verdicts".into(),
        json!([verdict("spatial-elastica", rep.verdict, rep.tolerance)]),
    );
    body.insert("seed".into(), Value::Null);
    emit(&report("spatial", body), report_out)?;
    Ok(if rep.verdict { EXIT_OK } else { EXIT_VERIFY })
}

/// Run the parsed CLI; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let tol = default_tol(cli.tol);
    let outcome: Result<i32, Failure> = match &cli.command {
        Command::Constants { p, lambda, out } => {
            cmd_constants(p, *lambda, out.as_deref(), cli.jobs)
        }
        Command::Curve {
            family,
            p,
            ds,
            out,
            emit_plot,
            dim,
            length,
            q,
            s0,
            s1,
            folds,
            m,
            leaf_length,
            dir,
            dirs,
            lengths,
            shift,
            scale,
            lambda,
            c_const,
            w0,
            w0p,
            step,
        } => (|| {
            let args = CurveArgs {
                p: *p,
                ds: *ds,
                dim: *dim,
                length: *length,
                q: *q,
                s0: *s0,
                s1: *s1,
                folds: *folds,
                m: *m,
                leaf_length: *leaf_length,
                dir: dir.as_deref(),
                dirs: dirs.as_deref(),
                lengths: lengths.as_deref(),
                shift: *shift,
                scale: *scale,
                lambda: *lambda,
                c_const: *c_const,
                w0: *w0,
                w0p: *w0p,
                step: *step,
            };
            let c = build_curve(*family, &args)?;
            write_curve(out, &c)?;
            maybe_emit_plot(&c, emit_plot.as_deref())?;
            eprintln!(
                "wrote {} samples (dim {}, ds {}) to {}",
                c.len(),
                c.dim(),
                c.step(),
                out.display()
            );
            Ok(EXIT_OK)
        })(),
        Command::Verify {
            input,
            p,
            lambda,
            out,
            emit_plot,
        } => cmd_verify(input, *p, *lambda, tol, out.as_deref(), emit_plot.as_deref()),
        Command::Liyau { input, p, out } => cmd_liyau(input, *p, cli.tol, out.as_deref()),
        Command::Pinned {
            p,
            ratio,
            length,
            dim,
            ds,
            out,
            report_out,
        } => cmd_pinned(
            *p,
            *ratio,
            *length,
            *dim,
            *ds,
            out.as_deref(),
            report_out.as_deref(),
            tol,
        ),
        Command::Pm { m, out } => cmd_pm(*m, out.as_deref(), cli.jobs),
        Command::Spatial {
            p,
            lambda,
            c_const,
            w0,
            w0p,
            length,
            step,
            out,
            report_out,
        } => cmd_spatial(
            *p,
            *lambda,
            *c_const,
            *w0,
            *w0p,
            *length,
            *step,
            out.as_deref(),
            report_out.as_deref(),
        ),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
