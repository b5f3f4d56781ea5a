//! Experiment drivers: each turns a [`RunConfig`] into a [`Sweep`].
//!
//! Grid points run on a rayon pool and are emitted in grid order, so the
//! worker count never changes the output.

use crate::config::{Gap, RunConfig};
use crate::record::{Sweep, SweepRecord};
use crate::HarnessError;
use fht_core::apps::{self, fit, RegimeTag};
use fht_core::asympt::{hn_correction, uniform_terms, widom_log_e, widom_prediction};
use fht_core::specfun::QuadratureSpec;
use fht_core::symbol::literal::{format_symbol, parse_symbol};
use fht_core::symbol::{fourier_coeffs, AnalyticPart, FhSymbol, Singularity};
use fht_core::toeplitz::{chi_tail, logdet_levinson, logdet_reference, DetResult};
use fht_core::{Complex, Error};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::time::Instant;

pub const EXPERIMENTS: &[&str] = &["detn", "uniformity", "chi-ladder", "cue", "selberg", "boson"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    /// Cross-check Levinson against dense Cholesky (`detn`, `n ≤ 256`).
    pub verify: bool,
    /// Record wall times; off gives byte-identical output across runs.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            verify: false,
            timing: true,
        }
    }
}

/// Largest order checked against the dense reference under `--verify`.
pub const VERIFY_MAX_N: usize = 256;

pub fn run(experiment: &str, cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    match experiment {
        "detn" => detn(cfg, opts),
        "uniformity" => uniformity(cfg, opts),
        "chi-ladder" => chi_ladder(cfg, opts),
        "cue" => cue(cfg, opts),
        "selberg" => selberg(cfg, opts),
        "boson" => boson(cfg, opts),
        other => Err(HarnessError::Config(format!(
            "unknown experiment `{other}` (one of {})",
            EXPERIMENTS.join(", ")
        ))),
    }
}

type PointResult = Result<SweepRecord, (Map<String, Value>, Error)>;

/// Evaluates `f` on every point in a pool of `opts.workers` threads and
/// returns records in point order, or the first failure in point order.
fn sweep_points<P, F>(name: &str, points: &[P], opts: &RunOptions, f: F) -> Result<Vec<SweepRecord>, HarnessError>
where
    P: Sync,
    F: Fn(&P) -> PointResult + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let results: Vec<PointResult> = pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let start = Instant::now();
                f(p).map(|mut r| {
                    if opts.timing {
                        r.wall_time_ms = start.elapsed().as_millis() as u64;
                    }
                    r
                })
            })
            .collect()
    });
    results
        .into_iter()
        .map(|r| {
            r.map_err(|(params, source)| HarnessError::Numeric {
                experiment: name.to_string(),
                params,
                source,
            })
        })
        .collect()
}

macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = Map::new();
        $(m.insert($k.to_string(), json!($v));)*
        m
    }};
}

fn num(e: Error, p: &Map<String, Value>) -> (Map<String, Value>, Error) {
    (p.clone(), e)
}

fn det(sym: &FhSymbol, n: usize, tol: f64) -> Result<DetResult, Error> {
    let c = fourier_coeffs(sym, (n.max(2)) - 1, tol)?;
    logdet_levinson(&c, n)
}

fn parse_sym(cfg: &RunConfig) -> Result<FhSymbol, HarnessError> {
    parse_symbol(cfg.str_or("symbol", "")).map_err(|e| HarnessError::Config(format!("symbol: {e}")))
}

fn positive(name: &str, v: f64) -> Result<f64, HarnessError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(HarnessError::Config(format!("{name} must be positive")))
    }
}

fn orders(cfg: &RunConfig, default: &str) -> Result<Vec<usize>, HarnessError> {
    let ns = cfg.uint_grid_or("n", default)?;
    if ns.contains(&0) {
        return Err(HarnessError::Config("n must be at least 1".into()));
    }
    Ok(ns)
}

/// `log D_n` by Levinson, with the separated-singularity prediction.
fn detn(cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    cfg.check_keys(&["symbol", "n", "tol", "chi", "verify"])?;
    let sym = parse_sym(cfg)?;
    let ns = orders(cfg, "64")?;
    let tol = positive("tol", cfg.real_or("tol", 1e-12)?)?;
    let with_chi = cfg.bool_or("chi", false)?;
    let verify = opts.verify || cfg.bool_or("verify", false)?;
    let literal = format_symbol(&sym);
    let records = sweep_points("detn", &ns, opts, |&n| {
        let mut p = params!("n" => n, "symbol" => literal);
        let d = det(&sym, n, tol).map_err(|e| num(e, &p))?;
        p.insert("min_step".into(), json!(d.min_step));
        p.insert("double_double".into(), json!(d.double_double));
        if with_chi {
            p.insert("log_chi_tail".into(), json!(chi_tail(&d, n).map_err(|e| num(e, &p))?));
        }
        if verify && n <= VERIFY_MAX_N {
            let c = fourier_coeffs(&sym, n.max(2) - 1, tol).map_err(|e| num(e, &p))?;
            let r = logdet_reference(&c, n).map_err(|e| num(e, &p))?;
            let diff = (r - d.log_det).abs();
            p.insert("reference".into(), json!(r));
            p.insert("verify_diff".into(), json!(diff));
            if diff > 1e-8 * n as f64 {
                return Err(num(
                    Error::ToleranceNotAchievable {
                        requested: 1e-8 * n as f64,
                        attainable: diff,
                    },
                    &p,
                ));
            }
        }
        let pred = widom_prediction(&sym, n).map_err(|e| num(e, &p))?;
        Ok(SweepRecord::new("detn", p, Some(d.log_det), Some(pred.total())))
    })?;
    Ok(Sweep {
        records,
        footer: Map::new(),
    })
}

/// Singularities `t0 + j·gap`, `j < m`; a zero gap merges them into one.
fn family(m: usize, alpha: f64, beta: f64, t0: f64, gap: f64) -> (Vec<Singularity>, Result<FhSymbol, Error>) {
    let raw: Vec<Singularity> = (0..m)
        .map(|j| Singularity::new(t0 + j as f64 * gap, alpha, beta))
        .collect();
    let sym = if gap == 0.0 {
        FhSymbol::new(
            AnalyticPart::zero(),
            vec![Singularity::new(t0, m as f64 * alpha, m as f64 * beta)],
        )
    } else {
        FhSymbol::new(AnalyticPart::zero(), raw.clone())
    };
    (raw, sym)
}

fn check_t0_family(m: usize, t0: f64, gaps: &[f64]) -> Result<(), HarnessError> {
    let max_gap = gaps.iter().fold(0.0f64, |a, &b| a.max(b));
    if !(t0 >= 0.0) || t0 + (m as f64 - 1.0) * max_gap >= 2.0 * std::f64::consts::PI {
        return Err(HarnessError::Config("t0 + (m-1)*gap must stay inside [0, 2pi)".into()));
    }
    Ok(())
}

/// Residuals `log D_n − (uniform main terms)` over orders and gaps.
fn uniformity(cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    cfg.check_keys(&["m", "alpha", "beta", "n", "gaps", "t0", "tol"])?;
    let m = cfg.uint_or("m", 2)? as usize;
    if !(m == 2 || m == 3) {
        return Err(HarnessError::Config("uniformity needs m = 2 or m = 3".into()));
    }
    let alpha = cfg.real_or("alpha", 0.5)?;
    let beta = cfg.real_or("beta", 0.0)?;
    let ns = orders(cfg, "64..1024x2")?;
    let gaps = cfg.gap_grid_or("gaps", "0,0.1/n,1/n,10/n,0.1,1.0")?;
    let t0 = cfg.real_or("t0", 1.0)?;
    let tol = positive("tol", cfg.real_or("tol", 1e-12)?)?;
    let all_gaps: Vec<f64> = ns.iter().flat_map(|&n| gaps.iter().map(move |g| g.at(n))).collect();
    check_t0_family(m, t0, &all_gaps)?;
    let points: Vec<(usize, Gap)> = ns.iter().flat_map(|&n| gaps.iter().map(move |&g| (n, g))).collect();
    let records = sweep_points("uniformity", &points, opts, |&(n, g)| {
        let gap = g.at(n);
        let mut p =
            params!("n" => n, "m" => m, "alpha" => alpha, "beta" => beta, "gap" => g.label(), "gap_value" => gap);
        let (raw, sym) = family(m, alpha, beta, t0, gap);
        let sym = sym.map_err(|e| num(e, &p))?;
        let d = det(&sym, n, tol).map_err(|e| num(e, &p))?;
        p.insert("min_step".into(), json!(d.min_step));
        p.insert("double_double".into(), json!(d.double_double));
        let pred = uniform_terms(0.0, &raw, n).map_err(|e| num(e, &p))?;
        Ok(SweepRecord::new("uniformity", p, Some(d.log_det), Some(pred.total())))
    })?;
    let mut footer = Map::new();
    let (_, merged) = family(m, alpha, beta, t0, 0.0);
    if let Ok(s) = merged {
        if let Ok(e) = widom_log_e(&s) {
            footer.insert("coalesced_log_e".into(), json!(e));
        }
    }
    let mut per_n = Map::new();
    for &n in &ns {
        let max = records
            .iter()
            .filter(|r| r.params["n"] == json!(n))
            .filter_map(|r| r.residual)
            .fold(0.0f64, |a, b| a.max(b.abs()));
        per_n.insert(n.to_string(), json!(max));
    }
    footer.insert("max_abs_residual_by_n".into(), Value::Object(per_n));
    Ok(Sweep { records, footer })
}

/// `log χ_{n−1}` against `−V_0/2 − H_n`; `scaled` is `n` times the residual.
fn chi_ladder(cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    cfg.check_keys(&["m", "alpha", "beta", "gap", "t0", "v0", "v1", "n", "u0", "tol"])?;
    let m = cfg.uint_or("m", 1)? as usize;
    if !(1..=3).contains(&m) {
        return Err(HarnessError::Config("chi-ladder needs 1 <= m <= 3".into()));
    }
    let alpha = cfg.real_or("alpha", 1.0)?;
    let beta = cfg.real_or("beta", 0.0)?;
    let gap = Gap::parse(cfg.str_or("gap", "1.0")).map_err(HarnessError::Config)?;
    let t0 = cfg.real_or("t0", 1.0)?;
    let v0 = cfg.real_or("v0", 0.0)?;
    let v1 = cfg.real_or("v1", 0.0)?;
    let ns = orders(cfg, "64..1024x2")?;
    let u0 = positive("u0", cfg.real_or("u0", fht_core::asympt::DEFAULT_U0)?)?;
    let tol = positive("tol", cfg.real_or("tol", 1e-12)?)?;
    if m > 1 && gap.value == 0.0 {
        return Err(HarnessError::Config("chi-ladder needs a positive gap".into()));
    }
    let gaps: Vec<f64> = ns.iter().map(|&n| gap.at(n)).collect();
    check_t0_family(m, t0, &gaps)?;
    let analytic = AnalyticPart::new(v0, &[Complex::new(v1, 0.0)]).map_err(|e| HarnessError::Config(e.to_string()))?;
    let records = sweep_points("chi-ladder", &ns, opts, |&n| {
        let g = gap.at(n);
        let mut p = params!("n" => n, "m" => m, "alpha" => alpha, "beta" => beta, "gap" => gap.label(), "gap_value" => g, "v0" => v0, "v1" => v1);
        let sings = (0..m)
            .map(|j| Singularity::new(t0 + j as f64 * g, alpha, beta))
            .collect();
        let sym = FhSymbol::new(analytic.clone(), sings).map_err(|e| num(e, &p))?;
        let d = det(&sym, n, tol).map_err(|e| num(e, &p))?;
        let chi = chi_tail(&d, n).map_err(|e| num(e, &p))?;
        let h = hn_correction(&sym, n, u0).map_err(|e| num(e, &p))?;
        let pred = -v0 / 2.0 - h;
        p.insert("scaled".into(), json!(n as f64 * (chi - pred)));
        p.insert("min_step".into(), json!(d.min_step));
        Ok(SweepRecord::new("chi-ladder", p, Some(chi), Some(pred)))
    })?;
    let max = records
        .iter()
        .filter_map(|r| r.params["scaled"].as_f64())
        .fold(0.0f64, |a, b| a.max(b.abs()));
    let mut footer = Map::new();
    footer.insert("max_abs_scaled".into(), json!(max));
    Ok(Sweep { records, footer })
}

fn quad_spec(cfg: &RunConfig, default: f64) -> Result<QuadratureSpec, HarnessError> {
    let rel = positive("quad_tol", cfg.real_or("quad_tol", default)?)?;
    Ok(QuadratureSpec::with_tol(1e-14, rel))
}

fn expected_slope(m: u32, alpha: f64) -> f64 {
    let mf = m as f64;
    match RegimeTag::classify(m, alpha) {
        RegimeTag::Subcritical => mf * alpha * alpha,
        RegimeTag::Critical => 1.0,
        RegimeTag::Supercritical => (mf * alpha).powi(2) + 1.0 - mf,
    }
}

/// Moments `E[X_n(α)^m]`: deterministic (`method = exact`, logged) or by
/// Metropolis sampling (`method = mc`).
fn cue(cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    cfg.check_keys(&["m", "alpha", "n", "method", "chains", "steps", "quad_tol"])?;
    let m = cfg.uint_or("m", 1)? as u32;
    let alpha = cfg.real_or("alpha", 0.5)?;
    let ns = orders(cfg, "32..256x2")?;
    let method = cfg.str_or("method", "exact").to_string();
    let chains = cfg.uint_or("chains", 4)? as usize;
    let steps = cfg.uint_or("steps", 2000)? as usize;
    let seed = cfg.uint_or("seed", 0)?;
    let q = quad_spec(cfg, 1e-8)?;
    if m == 0 || !(alpha > 0.0) {
        return Err(HarnessError::Config("cue needs m >= 1 and alpha > 0".into()));
    }
    let regime = RegimeTag::classify(m, alpha);
    let records = match method.as_str() {
        "exact" => {
            if m > 2 {
                return Err(HarnessError::Config("method = exact supports m = 1 and m = 2".into()));
            }
            sweep_points("cue", &ns, opts, |&n| {
                let p = params!("n" => n, "m" => m, "alpha" => alpha, "method" => "exact", "regime" => regime.as_str());
                let v = apps::xn_moment_exact(n, m, alpha, &q).map_err(|e| num(e, &p))?;
                let pred = if n >= 2 {
                    Some(apps::fk_prediction(n, m, alpha).map_err(|e| num(e, &p))?.0)
                } else {
                    None
                };
                Ok(SweepRecord::new("cue", p, Some(v.ln()), pred))
            })?
        }
        "mc" => sweep_points("cue", &ns, opts, |&n| {
            let mut p = params!("n" => n, "m" => m, "alpha" => alpha, "method" => "mc", "chains" => chains, "steps" => steps, "seed" => seed);
            let e = apps::cue_mc_moment(n, m, alpha, chains, steps, seed).map_err(|e| num(e, &p))?;
            p.insert("std_err".into(), json!(e.std_err));
            p.insert("samples".into(), json!(e.samples));
            let exact = if m <= 2 {
                Some(apps::xn_moment_exact(n, m, alpha, &q).map_err(|e| num(e, &p))?)
            } else {
                None
            };
            Ok(SweepRecord::new("cue", p, Some(e.value), exact))
        })?,
        other => return Err(HarnessError::Config(format!("unknown method `{other}` (exact or mc)"))),
    };
    let mut footer = Map::new();
    footer.insert("regime".into(), json!(regime.as_str()));
    footer.insert("expected_slope".into(), json!(expected_slope(m, alpha)));
    if method == "exact" && ns.len() >= 2 {
        let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let y: Vec<f64> = records.iter().filter_map(|r| r.exact).collect();
        if let Ok(f) = fit::linear_fit(&x, &y) {
            footer.insert("slope".into(), json!(f.slope));
            footer.insert("intercept".into(), json!(f.intercept));
        }
        if let Ok(c) = apps::fk_constant(m, alpha) {
            footer.insert("c_m".into(), json!(c));
        }
        if regime == RegimeTag::Critical {
            footer.insert("rss_log_n".into(), json!(fit::offset_rss(&x, &y, |l| l)));
            footer.insert(
                "rss_log_n_log_log_n".into(),
                json!(fit::offset_rss(&x, &y, |l| l + l.ln())),
            );
        }
    }
    Ok(Sweep { records, footer })
}

/// `I_ε` by Monte Carlo against the Selberg closed form at `ε = 0`, with a
/// scaling fit over the positive `ε` values.
fn selberg(cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    cfg.check_keys(&["m", "alpha", "eps", "samples"])?;
    let m = cfg.uint_or("m", 2)? as u32;
    let alpha = cfg.real_or("alpha", 0.5)?;
    let eps = cfg.real_grid_or("eps", "0")?;
    let samples = cfg.uint_or("samples", 100_000)?;
    let seed = cfg.uint_or("seed", 0)?;
    let regime = RegimeTag::classify(m, alpha);
    let records = sweep_points("selberg", &eps, opts, |&e| {
        let mut p = params!("m" => m, "alpha" => alpha, "eps" => e, "samples" => samples, "seed" => seed);
        let est = apps::i_eps_mc(m, alpha, e, samples, seed).map_err(|err| num(err, &p))?;
        p.insert("std_err".into(), json!(est.std_err));
        let pred = if e == 0.0 {
            Some(apps::selberg_i0(m, alpha).map_err(|err| num(err, &p))?)
        } else {
            None
        };
        Ok(SweepRecord::new("selberg", p, Some(est.value), pred))
    })?;
    let mut footer = Map::new();
    footer.insert("regime".into(), json!(regime.as_str()));
    let pos: Vec<(f64, f64)> = eps
        .iter()
        .zip(&records)
        .filter(|(e, _)| **e > 0.0)
        .filter_map(|(e, r)| r.exact.map(|v| (*e, v)))
        .collect();
    if regime != RegimeTag::Subcritical && pos.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = if regime == RegimeTag::Critical {
            pos.iter().map(|&(e, v)| (-e.ln(), v)).unzip()
        } else {
            pos.iter().map(|&(e, v)| (e.ln(), v.ln())).unzip()
        };
        if let Ok(f) = fit::linear_fit(&x, &y) {
            footer.insert("slope".into(), json!(f.slope));
            footer.insert("slope_err".into(), json!(f.slope_err));
            footer.insert("r2".into(), json!(f.r2));
        }
        if regime == RegimeTag::Supercritical {
            let mf = m as f64;
            footer.insert("expected_slope".into(), json!((mf - 1.0) * (1.0 - mf * alpha * alpha)));
        }
    }
    Ok(Sweep { records, footer })
}

/// `π_{k,n}(0)` against `n^{k/2}` times the limit constant.
fn boson(cfg: &RunConfig, opts: &RunOptions) -> Result<Sweep, HarnessError> {
    cfg.check_keys(&["k", "n", "quad_tol"])?;
    let k = cfg.uint_or("k", 1)? as u32;
    let ns = orders(cfg, "16..128x2")?;
    let q = quad_spec(cfg, 1e-8)?;
    let limit = apps::n0_limit_constant(k).map_err(|e| HarnessError::Numeric {
        experiment: "boson".into(),
        params: params!("k" => k),
        source: e,
    })?;
    let records = sweep_points("boson", &ns, opts, |&n| {
        let mut p = params!("k" => k, "n" => n);
        let v = apps::pi_kn_zero(k, n, &q).map_err(|e| num(e, &p))?;
        let scale = (n as f64).powf(k as f64 / 2.0);
        p.insert("ratio".into(), json!(v / scale));
        Ok(SweepRecord::new("boson", p, Some(v), Some(scale * limit.0)))
    })?;
    let mut footer = Map::new();
    footer.insert("limit".into(), json!(limit.0));
    footer.insert("limit_err".into(), json!(limit.1));
    let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let y: Vec<f64> = records.iter().filter_map(|r| r.params["ratio"].as_f64()).collect();
    if let Ok(r) = fit::richardson(&x, &y, 0.5) {
        footer.insert("richardson".into(), json!(r));
        footer.insert("richardson_rel_dev".into(), json!((r - limit.0) / limit.0));
    }
    Ok(Sweep { records, footer })
}
