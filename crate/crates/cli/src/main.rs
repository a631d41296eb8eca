//! `trefoil`: experiments on the Lorenz T-point trefoil, the geometric
//! Lorenz model and the modular geodesic flow.
//!
//! Every subcommand reads an optional key-value config file (`--config`),
//! applies flag overrides, prints a JSON summary with a `status` field and,
//! given `--out DIR`, writes its CSV/JSON artifacts there. Exit code 0 means
//! `ok`, 1 means `fail`, `unresolved` or a module error, 2 is a usage error.

mod commands;
mod config;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{run_command, Status};
use config::RunConfig;
use output::{to_json, write_artifacts};

#[derive(Parser, Debug)]
#[command(name = "trefoil", version, about = "Lorenz T-point trefoil, geometric Lorenz model and modular flow experiments")]
struct Cli {
    /// Key-value config file; `[command]` sections apply to one command.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts (nothing is written without it).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run the invariant suite of the command's module instead.
    #[arg(long, global = true)]
    selftest: bool,
    #[command(subcommand)]
    command: Cmd,
}

macro_rules! flags {
    ($name:ident { $($field:ident : $ty:ty),* $(,)? }) => {
        #[derive(Args, Debug)]
        struct $name {
            $(
                #[arg(long, allow_negative_numbers = true)]
                $field: Option<$ty>,
            )*
            /// Extra `key=value` overrides.
            #[arg(long = "set", value_name = "KEY=VALUE")]
            set: Vec<String>,
        }

        impl $name {
            fn apply(&self, cfg: &mut RunConfig) -> Result<(), String> {
                $( cfg.set_opt(stringify!($field), self.$field.as_ref()); )*
                apply_sets(&self.set, cfg)
            }
        }
    };
}

fn apply_sets(sets: &[String], cfg: &mut RunConfig) -> Result<(), String> {
    for kv in sets {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got {kv:?}"))?;
        cfg.set(k, v.trim());
    }
    Ok(())
}

flags!(TpointArgs { rho0: f64, sigma0: f64, beta: f64, eps: f64, tol: f64, miss_tol: f64, max_iter: usize, fd_step: f64, accept_miss: f64 });
flags!(TrefoilArgs {
    rho: f64, sigma: f64, rho0: f64, sigma0: f64, beta: f64, radii: String, projections: usize,
    eps: f64, tol: f64, truncation: f64, min_spacing: f64,
});
flags!(OrbitArgs { sigma: f64, rho: f64, beta: f64, x0: f64, y0: f64, z0: f64, t_end: f64, tol: f64 });
flags!(ClassifyArgs { r: f64, nu: f64, delta: f64, depth: usize, kneading: usize });
flags!(HorseshoeArgs { r: f64, nu: f64, delta: f64, period: usize, depth: usize, survivor_depth: usize });
flags!(ModelOrbitArgs { r: f64, nu: f64, delta: f64, x0: f64, y0: f64, n: usize, word: String });
flags!(ReturnArgs { l: f64, x: f64, theta: f64, n: usize, samples: usize, tmax: f64 });
flags!(ItineraryArgs { l: f64, word: String, x: f64, theta: f64, n: usize, tmax: f64 });
flags!(KnotArgs { word: String });
flags!(GhysArgs { l: f64, r: f64, nu: f64, delta: f64, words: String, max_len: usize });
flags!(SweepArgs { target: String, key: String, values: String });

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Newton search for the T-point from (rho0, sigma0).
    TpointFind(TpointArgs),
    /// Assemble the heteroclinic trefoil and compute its Alexander polynomial.
    TrefoilCertify(TrefoilArgs),
    /// Integrate one Lorenz trajectory.
    LorenzOrbit(OrbitArgs),
    /// Regime of the geometric model at r.
    ModelClassify(ClassifyArgs),
    /// Markov partition, periodic orbits and entropy for r > 0.
    ModelHorseshoe(HorseshoeArgs),
    /// Iterate the model return map from a point or a periodic word.
    ModelOrbit(ModelOrbitArgs),
    /// First returns of the modular flow to its cross-section.
    ModularReturn(ReturnArgs),
    /// Symbolic itinerary of a modular orbit or of a word's closed geodesic.
    ModularItinerary(ItineraryArgs),
    /// Lorenz braid, genus and Alexander polynomial of a word.
    KnotFromWord(KnotArgs),
    /// Compare word, modular and model codings of periodic orbits.
    GhysCheck(GhysArgs),
    /// Run another command over a list of values of one key, in parallel.
    Sweep(SweepArgs),
}

impl Cmd {
    fn name_and_apply(&self, cfg: &mut RunConfig) -> Result<(), String> {
        match self {
            Cmd::TpointFind(a) => a.apply(cfg),
            Cmd::TrefoilCertify(a) => a.apply(cfg),
            Cmd::LorenzOrbit(a) => a.apply(cfg),
            Cmd::ModelClassify(a) => a.apply(cfg),
            Cmd::ModelHorseshoe(a) => a.apply(cfg),
            Cmd::ModelOrbit(a) => a.apply(cfg),
            Cmd::ModularReturn(a) => a.apply(cfg),
            Cmd::ModularItinerary(a) => a.apply(cfg),
            Cmd::KnotFromWord(a) => a.apply(cfg),
            Cmd::GhysCheck(a) => a.apply(cfg),
            Cmd::Sweep(a) => a.apply(cfg),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Cmd::TpointFind(_) => "tpoint-find",
            Cmd::TrefoilCertify(_) => "trefoil-certify",
            Cmd::LorenzOrbit(_) => "lorenz-orbit",
            Cmd::ModelClassify(_) => "model-classify",
            Cmd::ModelHorseshoe(_) => "model-horseshoe",
            Cmd::ModelOrbit(_) => "model-orbit",
            Cmd::ModularReturn(_) => "modular-return",
            Cmd::ModularItinerary(_) => "modular-itinerary",
            Cmd::KnotFromWord(_) => "knot-from-word",
            Cmd::GhysCheck(_) => "ghys-check",
            Cmd::Sweep(_) => "sweep",
        }
    }
}

fn emit(command: &str, status: Status, body: Map<String, Value>) {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("status".into(), json!(status));
    m.extend(body);
    println!("{}", to_json(&Value::Object(m)));
}

fn diagnostic(command: &str, kind: &str, msg: &str) {
    let body = Map::from_iter([("error".to_string(), json!(msg)), ("error_kind".to_string(), json!(kind))]);
    emit(command, Status::Fail, body);
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = cli.command.name();

    let mut cfg = match &cli.config {
        Some(p) => match RunConfig::load(name, p) {
            Ok(c) => c,
            Err(e) => {
                diagnostic(name, "config", &e.to_string());
                return ExitCode::from(2);
            }
        },
        None => RunConfig::new(name),
    };
    cfg.set_opt("seed", cli.seed);
    cfg.set_opt("out_dir", cli.out.as_ref().map(|p| p.display().to_string()));
    if let Err(e) = cli.command.name_and_apply(&mut cfg) {
        diagnostic(name, "config", &e);
        return ExitCode::from(2);
    }

    if cli.selftest {
        let module = selftest::module_of(name);
        let checks = selftest::selftest(module);
        let ok = checks.iter().all(|c| c.passed);
        let status = if ok { Status::Ok } else { Status::Fail };
        let body = Map::from_iter([
            ("selftest".to_string(), json!(module)),
            ("checks".to_string(), json!(checks)),
        ]);
        emit(name, status, body);
        return ExitCode::from(if ok { 0 } else { 1 });
    }

    match run_command(&cfg) {
        Ok(out) => {
            let mut body = out.summary;
            if let Some(dir) = cfg.out_dir() {
                match write_artifacts(&dir, &out.artifacts) {
                    Ok(paths) => {
                        let names: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
                        body.insert("artifacts".into(), json!(names));
                    }
                    Err(e) => {
                        diagnostic(name, "io", &format!("writing artifacts to {}: {e}", dir.display()));
                        return ExitCode::from(1);
                    }
                }
            }
            emit(name, out.status, body);
            ExitCode::from(if out.status == Status::Ok { 0 } else { 1 })
        }
        Err(e) => {
            let usage = e.is_usage();
            diagnostic(name, if usage { "config" } else { "module" }, &e.to_string());
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
