//! The subcommands. Each reads a `RunConfig` and returns a status, a JSON
//! summary and a list of artifacts; nothing here touches stdout or files.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use trefoil_core::curve::Polyline3;
use trefoil_core::knots::ghys::knot_certificate;
use trefoil_core::knots::{
    alexander_from_diagram, ghys_word_check, polyline_to_diagram, primitive_words, word_to_matrix, AlexanderPoly,
    KnotDiagram, KnotError, Letter, LorenzWord, ProjectionConfig,
};
use trefoil_core::lorenz::{
    assemble_trefoil, eigen_data, find_tpoint, hopf_threshold, integrate, LorenzError, LorenzParams, SeparatrixConfig,
    TPointConfig, TrefoilConfig,
};
use trefoil_core::model::{
    self, classify_regime, entropy_estimate, horseshoe_markov, periodic_orbit_from_word, survivor_intervals,
    ModelError, ModelParams, PointStatus, Regime, ReturnMapPoint,
};
use trefoil_core::modular::{
    build_representation, first_return, orbit, periodic_seed, return_map_csv, section_geometry, theta_bounds,
    CrossSection, ModularError, Representation, SectionPoint,
};

use crate::config::{ConfigError, RunConfig};
use crate::output::Artifact;

pub const COMMANDS: [&str; 11] = [
    "tpoint-find",
    "trefoil-certify",
    "lorenz-orbit",
    "model-classify",
    "model-horseshoe",
    "model-orbit",
    "modular-return",
    "modular-itinerary",
    "knot-from-word",
    "ghys-check",
    "sweep",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Fail,
    Unresolved,
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration: reported with usage, exit 2.
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error(transparent)]
    Lorenz(#[from] LorenzError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Knot(#[from] KnotError),
}

impl CliError {
    pub fn is_usage(&self) -> bool {
        matches!(self, CliError::Config(_) | CliError::UnknownCommand(_))
    }
}

impl From<trefoil_core::knots::ghys::GhysError> for CliError {
    fn from(e: trefoil_core::knots::ghys::GhysError) -> Self {
        use trefoil_core::knots::ghys::GhysError;
        match e {
            GhysError::Knot(k) => CliError::Knot(k),
            GhysError::Modular(m) => CliError::Modular(m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub summary: Map<String, Value>,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    fn new(status: Status, summary: Value) -> Self {
        let summary = match summary {
            Value::Object(m) => m,
            other => Map::from_iter([("result".to_string(), other)]),
        };
        Self { status, summary, artifacts: Vec::new() }
    }

    fn with(mut self, a: Artifact) -> Self {
        self.artifacts.push(a);
        self
    }
}

fn status_if(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Fail
    }
}

pub fn run_command(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command.as_str() {
        "tpoint-find" => tpoint_find(cfg),
        "trefoil-certify" => trefoil_certify(cfg),
        "lorenz-orbit" => lorenz_orbit(cfg),
        "model-classify" => model_classify(cfg),
        "model-horseshoe" => model_horseshoe(cfg),
        "model-orbit" => model_orbit(cfg),
        "modular-return" => modular_return(cfg),
        "modular-itinerary" => modular_itinerary(cfg),
        "knot-from-word" => knot_from_word(cfg),
        "ghys-check" => ghys_check(cfg),
        "sweep" => sweep(cfg),
        other => Err(CliError::UnknownCommand(other.to_string())),
    }
}

fn word_string(ls: &[Letter]) -> String {
    ls.iter().map(|l| l.as_char()).collect()
}

fn required<T: std::str::FromStr>(cfg: &RunConfig, key: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    cfg.get(key)?.ok_or_else(|| CliError::Config(ConfigError::Value {
        key: key.to_string(),
        value: String::new(),
        reason: "missing".into(),
    }))
}

fn alexander_json(a: &AlexanderPoly) -> Value {
    json!(a.coefficients())
}

// ---------------------------------------------------------------- lorenz

fn separatrix_config(cfg: &RunConfig) -> Result<SeparatrixConfig, CliError> {
    let d = SeparatrixConfig::default();
    Ok(SeparatrixConfig { eps: cfg.get_or("eps", d.eps)?, tol: cfg.get_or("tol", d.tol)?, ..d })
}

fn tpoint_config(cfg: &RunConfig) -> Result<TPointConfig, CliError> {
    let d = TPointConfig::default();
    Ok(TPointConfig {
        miss_tol: cfg.get_or("miss_tol", d.miss_tol)?,
        max_iter: cfg.get_or("max_iter", d.max_iter)?,
        fd_step: cfg.get_or("fd_step", d.fd_step)?,
        separatrix: separatrix_config(cfg)?,
        ..d
    })
}

fn start_params(cfg: &RunConfig) -> Result<LorenzParams, CliError> {
    Ok(LorenzParams::new(cfg.get_or("sigma0", 10.0)?, cfg.get_or("rho0", 30.0)?, cfg.get_or("beta", 8.0 / 3.0)?)?)
}

fn tpoint_find(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let accept: f64 = cfg.get_or("accept_miss", 1e-6)?;
    let r = find_tpoint(&start_params(cfg)?, &tpoint_config(cfg)?)?;
    let miss = r.miss.norm();
    let log: Vec<Value> = r
        .log
        .iter()
        .map(|s| json!({"iteration": s.iteration, "rho": s.rho, "sigma": s.sigma, "miss": s.miss_norm, "damping": s.damping}))
        .collect();
    let summary = json!({
        "rho": r.params.rho,
        "sigma": r.params.sigma,
        "beta": r.params.beta,
        "miss": [r.miss.dx, r.miss.dy],
        "miss_norm": miss,
        "jacobian": r.jacobian,
        "condition_number": r.condition_number,
        "iterations": r.log.len(),
    });
    Ok(Outcome::new(status_if(miss < accept), summary).with(Artifact::json("tpoint_search_log.json", &log)))
}

fn polyline_csv(c: &Polyline3) -> String {
    let mut s = String::from("i,x,y,z\n");
    for (i, p) in c.points.iter().enumerate() {
        s.push_str(&format!("{i},{:.16e},{:.16e},{:.16e}\n", p[0], p[1], p[2]));
    }
    s
}

fn trefoil_certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = match (cfg.get::<f64>("rho")?, cfg.get::<f64>("sigma")?) {
        (Some(rho), Some(sigma)) => LorenzParams::new(sigma, rho, cfg.get_or("beta", 8.0 / 3.0)?)?,
        _ => find_tpoint(&start_params(cfg)?, &tpoint_config(cfg)?)?.params,
    };
    let radii = cfg.list::<f64>("radii")?.unwrap_or_else(|| vec![500.0, 1000.0]);
    let projections: usize = cfg.get_or("projections", 3)?;
    let seed = cfg.seed()?;
    let d = TrefoilConfig::default();
    let base = TrefoilConfig {
        eps: cfg.get_or("eps", d.eps)?,
        tol: cfg.get_or("tol", d.tol)?,
        truncation: cfg.get_or("truncation", d.truncation)?,
        min_spacing: cfg.get_or("min_spacing", d.min_spacing)?,
        ..d
    };
    let mut rows = Vec::new();
    let mut artifacts = Vec::new();
    let mut all_trefoil = !radii.is_empty() && projections > 0;
    for &r_infinity in &radii {
        let curve = assemble_trefoil(&p, &TrefoilConfig { r_infinity, ..base })?;
        artifacts.push(Artifact::new(format!("trefoil_R{r_infinity}.csv"), polyline_csv(&curve)));
        let mut views = Vec::new();
        for k in 0..projections {
            let pc = ProjectionConfig { seed: seed.wrapping_add(k as u64), ..Default::default() };
            let dg = polyline_to_diagram(&curve, &pc)?;
            let a = alexander_from_diagram(&dg)?;
            all_trefoil &= a == AlexanderPoly::trefoil();
            if k == 0 {
                artifacts.push(Artifact::json(format!("trefoil_R{r_infinity}_pd.json"), &dg));
            }
            views.push(json!({"projection_seed": pc.seed, "crossings": dg.crossings.len(), "alexander": alexander_json(&a)}));
        }
        rows.push(json!({"r_infinity": r_infinity, "vertices": curve.points.len(), "length": curve.length(), "projections": views}));
    }
    let summary = json!({
        "rho": p.rho,
        "sigma": p.sigma,
        "beta": p.beta,
        "closures": rows,
        "trefoil": all_trefoil,
    });
    let mut out = Outcome::new(status_if(all_trefoil), summary);
    out.artifacts = artifacts;
    Ok(out)
}

fn lorenz_orbit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = LorenzParams::new(cfg.get_or("sigma", 10.0)?, cfg.get_or("rho", 28.0)?, cfg.get_or("beta", 8.0 / 3.0)?)?;
    let x0 = [cfg.get_or("x0", 1.0)?, cfg.get_or("y0", 1.0)?, cfg.get_or("z0", 1.0)?];
    let t_end: f64 = cfg.get_or("t_end", 50.0)?;
    let tr = integrate(x0, &p, t_end, cfg.get_or("tol", 1e-10)?)?;
    let (t, y) = tr.last();
    let eig = eigen_data(&p);
    let mut csv = String::from("t,x,y,z\n");
    for (t, s) in &tr.samples {
        csv.push_str(&format!("{t:.16e},{:.16e},{:.16e},{:.16e}\n", s[0], s[1], s[2]));
    }
    let summary = json!({
        "params": p,
        "initial": x0,
        "final_time": t,
        "final_state": y,
        "samples": tr.samples.len(),
        "stats": tr.stats,
        "eigen": eig,
        "hopf_threshold": hopf_threshold(p.sigma, p.beta).ok(),
    });
    Ok(Outcome::new(Status::Ok, summary).with(Artifact::new("trajectory.csv", csv)))
}

// ----------------------------------------------------------------- model

fn model_params(cfg: &RunConfig) -> Result<ModelParams, CliError> {
    let d = ModelParams::default();
    Ok(ModelParams::new(cfg.get_or("r", d.r)?, cfg.get_or("nu", d.nu)?, cfg.get_or("delta", d.delta)?)?)
}

fn model_classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mp = model_params(cfg)?;
    let rep = classify_regime(&mp, cfg.get_or("depth", 16)?)?;
    let status = if rep.regime == Regime::Unresolved { Status::Unresolved } else { Status::Ok };
    let kn = model::kneading(&mp, cfg.get_or("kneading", 16)?)?;
    let mut summary = serde_json::to_value(&rep).expect("report serializes");
    summary["mu"] = json!(mp.mu());
    summary["kneading_plus"] = json!(word_string(&kn.plus));
    summary["kneading_minus"] = json!(word_string(&kn.minus));
    Ok(Outcome::new(status, summary).with(Artifact::new("map_graph.csv", model::graph_csv(&mp, 400))))
}

fn all_words(n: usize) -> Vec<LorenzWord> {
    (0u64..1 << n)
        .map(|bits| {
            let ls = (0..n).map(|i| if bits >> (n - 1 - i) & 1 == 1 { Letter::R } else { Letter::L }).collect();
            LorenzWord::new(ls).expect("n >= 1")
        })
        .collect()
}

fn model_horseshoe(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mp = model_params(cfg)?;
    let hs = horseshoe_markov(&mp)?;
    let period: usize = cfg.get_or("period", 8)?;
    if !(1..=16).contains(&period) {
        return Err(ConfigError::Value { key: "period".into(), value: period.to_string(), reason: "must be in 1..=16".into() }.into());
    }
    let depth: usize = cfg.get_or("depth", 16)?;
    let rows: Vec<(LorenzWord, ReturnMapPoint)> =
        all_words(period).into_par_iter().map(|w| { let p = periodic_orbit_from_word(&w, &mp); (w, p) }).collect();
    let realized = rows.iter().all(|(w, p)| {
        let it = model::itinerary(p, period, &mp);
        it == w.letters()
    });
    let mut xs: Vec<f64> = rows.iter().map(|(_, p)| p.x).collect();
    xs.sort_by(f64::total_cmp);
    let distinct = 1 + xs.windows(2).filter(|v| v[1] - v[0] > 1e-9).count();
    let entropy = entropy_estimate(&mp, depth);
    let all_ones = hs.transition == [[1, 1], [1, 1]];
    let oriented = hs.unstable_orientation_preserved && hs.stable_orientation_preserved;
    let ok = all_ones && oriented && realized && distinct == rows.len() && (entropy - 2f64.ln()).abs() < 0.01;
    let survivors = survivor_intervals(&mp, cfg.get_or("survivor_depth", 8)?);
    let summary = json!({
        "r": mp.r,
        "markov": hs,
        "period": period,
        "periodic_orbits": rows.len(),
        "distinct": distinct,
        "itineraries_realized": realized,
        "entropy": entropy,
        "entropy_depth": depth,
        "log2": 2f64.ln(),
        "survivor_intervals": survivors.len(),
    });
    Ok(Outcome::new(status_if(ok), summary)
        .with(Artifact::new("survivors.csv", model::intervals_csv(&survivors)))
        .with(Artifact::new("periodic_orbits.csv", model::periodic_table_csv(&rows)))
        .with(Artifact::new("map_graph.csv", model::graph_csv(&mp, 400))))
}

fn status_name(s: PointStatus) -> Value {
    serde_json::to_value(s).expect("status serializes")
}

fn model_orbit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mp = model_params(cfg)?;
    let word: Option<LorenzWord> = cfg.get("word")?;
    let start = match &word {
        Some(w) => periodic_orbit_from_word(w, &mp),
        None => ReturnMapPoint::alive(cfg.get_or("x0", 0.3)?, cfg.get_or("y0", 0.0)?),
    };
    let n: usize = cfg.get_or("n", word.as_ref().map_or(20, |w| 2 * w.len()))?;
    let mut pts = vec![start];
    for _ in 0..n {
        let q = model::return_map(pts.last().unwrap(), &mp);
        if q.status != PointStatus::Alive {
            pts.push(q);
            break;
        }
        pts.push(q);
    }
    let itin = word_string(&model::itinerary(&start, n, &mp));
    let mut csv = String::from("k,x,y,status\n");
    for (k, p) in pts.iter().enumerate() {
        csv.push_str(&format!("{k},{:.16e},{:.16e},{}\n", p.x, p.y, status_name(p.status).as_str().unwrap_or("")));
    }
    let last = pts.last().unwrap();
    let mut summary = json!({
        "r": mp.r,
        "start": [start.x, start.y],
        "itinerary": itin,
        "steps": pts.len() - 1,
        "final": [last.x, last.y],
        "final_status": status_name(last.status),
    });
    let mut status = Status::Ok;
    if let Some(w) = &word {
        let ok = itin.len() >= w.len() && itin[..w.len()] == w.to_string();
        summary["word"] = json!(w.to_string());
        summary["periodic"] = json!(ok);
        status = status_if(ok);
    }
    Ok(Outcome::new(status, summary).with(Artifact::new("model_orbit.csv", csv)))
}

// --------------------------------------------------------------- modular

fn modular_setup(cfg: &RunConfig) -> Result<(Representation, CrossSection), CliError> {
    let rep = build_representation(cfg.get_or("l", 0.5)?)?;
    let sec = section_geometry(&rep)?;
    Ok((rep, sec))
}

fn steps_json(steps: &[trefoil_core::modular::ReturnStep]) -> Value {
    json!(steps
        .iter()
        .map(|s| json!({"x": s.point.x, "theta": s.point.theta, "letter": s.letter.as_char().to_string(), "time": s.time}))
        .collect::<Vec<_>>())
}

fn modular_return(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (rep, sec) = modular_setup(cfg)?;
    let tmax: f64 = cfg.get_or("tmax", 50.0)?;
    let point = match (cfg.get::<f64>("x")?, cfg.get::<f64>("theta")?) {
        (Some(x), Some(theta)) => Some(SectionPoint { x, theta }),
        _ => None,
    };
    let samples: usize = cfg.get_or("samples", if point.is_some() { 0 } else { 200 })?;
    let mut summary = json!({"l": rep.l, "trim": sec.trim});
    let mut rows = Vec::new();
    if let Some(pt) = point {
        let n: usize = cfg.get_or("n", 1)?;
        let mut cur = pt;
        let mut steps = Vec::new();
        let mut wandered = None;
        for _ in 0..n {
            match first_return(&rep, &sec, &cur, tmax) {
                Ok(s) => {
                    rows.push((cur, s));
                    steps.push(s);
                    cur = s.point;
                }
                Err(ModularError::Wandering { side, time }) => {
                    wandered = Some(json!({"side": side, "time": time}));
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let b = theta_bounds(&sec, pt.x)?;
        summary["start"] = json!(pt);
        summary["in_band"] = json!(b.contains(pt.theta));
        summary["returns"] = steps_json(&steps);
        summary["itinerary"] = json!(word_string(&steps.iter().map(|s| s.letter).collect::<Vec<_>>()));
        summary["wandered"] = wandered.unwrap_or(Value::Null);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed()?);
    let mut wandering = 0;
    for _ in 0..samples {
        let pt = SectionPoint { x: (2.0 * rng.gen::<f64>() - 1.0) * sec.trim * 0.999, theta: PI * rng.gen_range(0.001..0.999) };
        match first_return(&rep, &sec, &pt, tmax) {
            Ok(s) => rows.push((pt, s)),
            Err(ModularError::Wandering { .. }) => wandering += 1,
            Err(e) => return Err(e.into()),
        }
    }
    summary["samples"] = json!(samples);
    summary["sample_wandering"] = json!(wandering);
    summary["min_return_time"] = json!(rows.iter().map(|(_, s)| s.time).fold(f64::INFINITY, f64::min));
    Ok(Outcome::new(Status::Ok, summary).with(Artifact::new("return_map.csv", return_map_csv(&rows))))
}

fn modular_itinerary(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (rep, sec) = modular_setup(cfg)?;
    let tmax: f64 = cfg.get_or("tmax", 50.0)?;
    if let Some(w) = cfg.get::<LorenzWord>("word")? {
        let seed = periodic_seed(&rep, &sec, &w)?;
        let steps = orbit(&rep, &sec, &seed.point, w.len(), tmax)?;
        let letters: Vec<Letter> = steps.iter().map(|s| s.letter).collect();
        let got = LorenzWord::new(letters.clone())?;
        let agree = got.cyclically_equal(&w);
        let time: f64 = steps.iter().map(|s| s.time).sum();
        let summary = json!({
            "l": rep.l,
            "word": w.to_string(),
            "seed": seed.point,
            "geodesic_length": seed.length,
            "return_time": time,
            "itinerary": word_string(&letters),
            "agree": agree,
            "returns": steps_json(&steps),
        });
        return Ok(Outcome::new(status_if(agree), summary));
    }
    let pt = SectionPoint { x: required(cfg, "x")?, theta: required(cfg, "theta")? };
    let n: usize = cfg.get_or("n", 10)?;
    let steps = orbit(&rep, &sec, &pt, n, tmax)?;
    let summary = json!({
        "l": rep.l,
        "start": pt,
        "itinerary": word_string(&steps.iter().map(|s| s.letter).collect::<Vec<_>>()),
        "returns": steps_json(&steps),
    });
    Ok(Outcome::new(Status::Ok, summary))
}

// ----------------------------------------------------------------- knots

fn knot_from_word(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let w: LorenzWord = required(cfg, "word")?;
    let m = word_to_matrix(&w);
    let cert = knot_certificate(&w)?;
    let dg = KnotDiagram::from_braid(&cert.braid, true);
    let diagram_alexander = alexander_from_diagram(&dg)?;
    let summary = json!({
        "word": w.to_string(),
        "primitive": w.is_primitive(),
        "trace": m.trace() as i64,
        "matrix": [[m.a as i64, m.b as i64], [m.c as i64, m.d as i64]],
        "braid": cert.braid,
        "genus": cert.genus,
        "alexander": alexander_json(&cert.alexander),
        "alexander_text": cert.alexander.to_string(),
        "diagram_agrees": diagram_alexander == cert.alexander,
    });
    Ok(Outcome::new(status_if(diagram_alexander == cert.alexander), summary).with(Artifact::json("knot_pd.json", &dg)))
}

fn ghys_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (rep, sec) = modular_setup(cfg)?;
    let mp = model_params(cfg)?;
    let words: Vec<LorenzWord> = match cfg.list::<LorenzWord>("words")? {
        Some(ws) => ws,
        None => {
            let max: usize = cfg.get_or("max_len", 6)?;
            (2..=max).flat_map(primitive_words).filter(|w| w.is_mixed()).collect()
        }
    };
    let reports = words
        .par_iter()
        .map(|w| ghys_word_check(w, &rep, &sec, &mp))
        .collect::<Result<Vec<_>, _>>()?;
    let agree = reports.iter().filter(|r| r.agree).count();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "word": r.word,
                "trace": r.trace as i64,
                "modular_itinerary": r.modular_itinerary,
                "model_itinerary": r.model_itinerary,
                "return_time": r.return_time,
                "geodesic_length": r.geodesic_length,
                "genus": r.certificate.genus,
                "alexander": alexander_json(&r.certificate.alexander),
                "agree": r.agree,
            })
        })
        .collect();
    let summary = json!({"l": rep.l, "r": mp.r, "words": reports.len(), "agree": agree, "reports": rows});
    Ok(Outcome::new(status_if(!reports.is_empty() && agree == reports.len()), summary))
}

// ----------------------------------------------------------------- sweep

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let target: String = required(cfg, "target")?;
    if target == "sweep" || !COMMANDS.contains(&target.as_str()) {
        return Err(CliError::UnknownCommand(target));
    }
    let key: String = required(cfg, "key")?;
    let values: Vec<String> = cfg.list("values")?.unwrap_or_default();
    if values.is_empty() {
        return Err(ConfigError::Value { key: "values".into(), value: String::new(), reason: "empty".into() }.into());
    }
    let runs: Vec<(String, Result<Outcome, CliError>)> = values
        .par_iter()
        .map(|v| {
            let mut sub = cfg.clone();
            sub.command = target.clone();
            sub.set(&key, v);
            (v.clone(), run_command(&sub))
        })
        .collect();
    let mut results = BTreeMap::new();
    let mut artifacts = Vec::new();
    let mut all_ok = true;
    for (v, r) in runs {
        match r {
            Ok(o) => {
                all_ok &= o.status == Status::Ok;
                let mut entry = o.summary;
                entry.insert("status".into(), json!(o.status));
                results.insert(v.clone(), Value::Object(entry));
                for a in o.artifacts {
                    artifacts.push(Artifact::new(format!("{key}_{v}/{}", a.name), a.contents));
                }
            }
            Err(e) => {
                all_ok = false;
                results.insert(v, json!({"status": Status::Fail, "error": e.to_string()}));
            }
        }
    }
    let mut out = Outcome::new(status_if(all_ok), json!({"target": target, "key": key, "results": results}));
    out.artifacts = artifacts;
    Ok(out)
}
