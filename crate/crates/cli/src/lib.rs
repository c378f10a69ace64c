//! `expwell` command-line front end.
//!
//! Exit codes: 0 success, 1 computational failure (including failed
//! verification checks), 2 argument errors.

mod format;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expwell::mellin::{g_closed, match_parameters, mellin_bessel_sqrt, mellin_numeric, QuadratureConfig};
use expwell::solver::{decay_radius, normalize, spectrum, wavefunction_table};
use expwell::specfun::BESSEL_ENVELOPE;
use expwell::verify::{cross_validate, run_suite};
use expwell::{Error, PotentialParams, SolverConfig};
use format::{csv_line, jnum, num, opt_jnum, opt_num, to_json};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "expwell", version, about = "Bound states of the exponential well V(r) = -V0 exp(-beta r)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies with Numerov and finite-difference cross-checks.
    Spectrum,
    /// Sampled u(r) and R(r) = u/r of one normalized bound state.
    Wavefunction(WavefunctionArgs),
    /// Run the cross-validation suite; exits 1 if any check fails.
    Verify,
    /// Tabulate the difference-equation solution against the Bessel Mellin pair.
    MellinCheck(MellinArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Well depth V0 (energy units).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v0: Option<f64>,
    /// Inverse range beta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Mass (default 0.5, i.e. 2 mu = 1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Reduced Planck constant (default 1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub root_tol: Option<f64>,
    #[arg(long, global = true)]
    pub bracket_step: Option<f64>,
    #[arg(long, global = true)]
    pub residual_tol: Option<f64>,
    #[arg(long, global = true)]
    pub scan_steps: Option<usize>,
    #[arg(long, global = true)]
    pub energy_tol: Option<f64>,
    #[arg(long, global = true)]
    pub fd_levels: Option<usize>,
    #[arg(long, global = true)]
    pub decay_lengths: Option<f64>,
    #[arg(long, global = true)]
    pub step_scale: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub panels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    /// State index n (0 = ground state).
    #[arg(long, default_value_t = 0)]
    pub state: usize,
    /// Outer radius of the table (default: where the state has decayed).
    #[arg(long, allow_hyphen_values = true)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct MellinArgs {
    /// rho = alpha / beta; if omitted, every bound state of --v0/--beta is used.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub y_max: f64,
    #[arg(long, default_value_t = 12)]
    pub y_steps: usize,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositive { .. } | Error::Config(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) if ok => 0,
                Ok(()) => 1,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    1
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn solver_config(c: &Common) -> Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig::default();
    macro_rules! apply {
        ($($field:ident => $target:expr),* $(,)?) => {
            $(if let Some(v) = c.$field { $target = v; })*
        };
    }
    apply!(
        root_tol => cfg.root_tol,
        bracket_step => cfg.bracket_step,
        residual_tol => cfg.residual_tol,
        scan_steps => cfg.energy_scan_steps,
        energy_tol => cfg.energy_tol,
        fd_levels => cfg.fd_levels,
        decay_lengths => cfg.decay_lengths,
        step_scale => cfg.step_scale,
        t_max => cfg.quadrature.t_max,
        panels => cfg.quadrature.n_panels,
    );
    cfg.validate()?;
    Ok(cfg)
}

fn params(c: &Common) -> Result<Option<PotentialParams>, Failure> {
    match (c.v0, c.beta) {
        (None, None) => Ok(None),
        (Some(_), None) => Err(Failure::Usage("missing required parameter --beta".into())),
        (None, Some(_)) => Err(Failure::Usage("missing required parameter --v0".into())),
        (Some(v0), Some(beta)) => {
            let p = PotentialParams::new(v0, beta, c.mu.unwrap_or(0.5), c.hbar.unwrap_or(1.0))?;
            Ok(Some(p))
        }
    }
}

fn required_params(c: &Common) -> Result<PotentialParams, Failure> {
    params(c)?.ok_or_else(|| Failure::Usage("missing required parameters --v0 and --beta".into()))
}

fn params_json(p: &PotentialParams) -> Value {
    json!({
        "V0": jnum(p.v0()),
        "beta": jnum(p.beta()),
        "mu": jnum(p.mu()),
        "hbar": jnum(p.hbar()),
        "gamma": jnum(p.gamma()),
        "z0": jnum(p.z0()),
    })
}

fn params_text(p: &PotentialParams) -> String {
    format!(
        "# V0 = {}, beta = {}, mu = {}, hbar = {}, gamma = {}, z0 = {}\n",
        num(p.v0()),
        num(p.beta()),
        num(p.mu()),
        num(p.hbar()),
        num(p.gamma()),
        num(p.z0())
    )
}

/// Returns the rendered output and whether the command succeeded.
fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    let cfg = solver_config(&cli.common)?;
    let fmt = cli.common.format;
    match &cli.command {
        Command::Spectrum => cmd_spectrum(&required_params(&cli.common)?, &cfg, fmt).map(|s| (s, true)),
        Command::Wavefunction(args) => cmd_wavefunction(&required_params(&cli.common)?, args, &cfg, fmt).map(|s| (s, true)),
        Command::Verify => cmd_verify(params(&cli.common)?, &cfg, fmt),
        Command::MellinCheck(args) => cmd_mellin(&cli.common, args, &cfg, fmt).map(|s| (s, true)),
    }
}

fn rel_dev(oracle: Option<f64>, analytic: f64) -> Option<f64> {
    oracle.map(|o| ((o - analytic) / analytic).abs())
}

fn cmd_spectrum(p: &PotentialParams, cfg: &SolverConfig, fmt: OutputFormat) -> Result<String, Failure> {
    let cv = cross_validate(p, cfg)?;
    let mut warnings = cv.analytic.warnings.clone();
    if cv.analytic.states.is_empty() {
        warnings.push("no bound states".to_string());
    }
    if !cv.counts_agree() {
        warnings.push(format!(
            "oracle state counts differ: analytic {}, numerov {}, finite difference {}",
            cv.analytic.states.len(),
            cv.numerov.energies.len(),
            cv.finite_difference.energies.len()
        ));
    }
    let rows: Vec<_> = cv
        .analytic
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let numerov = cv.numerov.energies.get(i).copied();
            let fd = cv.finite_difference.energies.get(i).copied();
            (s, numerov, fd, rel_dev(numerov, s.energy), rel_dev(fd, s.energy))
        })
        .collect();

    Ok(match fmt {
        OutputFormat::Json => {
            let states: Vec<Value> = rows
                .iter()
                .map(|(s, numerov, fd, dn, df)| {
                    json!({
                        "n": s.n,
                        "nu": jnum(s.nu),
                        "alpha": jnum(s.alpha),
                        "energy": jnum(s.energy),
                        "energy_numerov": opt_jnum(*numerov),
                        "energy_fd": opt_jnum(*fd),
                        "rel_dev_numerov": opt_jnum(*dn),
                        "rel_dev_fd": opt_jnum(*df),
                    })
                })
                .collect();
            to_json(&json!({ "params": params_json(p), "states": states, "warnings": warnings }))
        }
        OutputFormat::Csv => {
            let mut s = csv_line(&[
                "n", "nu", "alpha", "energy", "energy_numerov", "energy_fd", "rel_dev_numerov", "rel_dev_fd",
            ]
            .map(String::from));
            for (st, numerov, fd, dn, df) in &rows {
                s += &csv_line(&[
                    st.n.to_string(),
                    num(st.nu),
                    num(st.alpha),
                    num(st.energy),
                    opt_num(*numerov),
                    opt_num(*fd),
                    opt_num(*dn),
                    opt_num(*df),
                ]);
            }
            s
        }
        OutputFormat::Text => {
            let mut s = params_text(p);
            if rows.is_empty() {
                s += "no bound states\n";
            } else {
                s += "n\tnu\talpha\tenergy\tenergy_numerov\tenergy_fd\trel_dev_numerov\trel_dev_fd\n";
                for (st, numerov, fd, dn, df) in &rows {
                    s += &format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                        st.n,
                        num(st.nu),
                        num(st.alpha),
                        num(st.energy),
                        opt_num(*numerov),
                        opt_num(*fd),
                        opt_num(*dn),
                        opt_num(*df)
                    );
                }
            }
            for w in &warnings {
                if w != "no bound states" {
                    s += &format!("warning: {w}\n");
                }
            }
            s
        }
    })
}

fn cmd_wavefunction(
    p: &PotentialParams,
    args: &WavefunctionArgs,
    cfg: &SolverConfig,
    fmt: OutputFormat,
) -> Result<String, Failure> {
    let states = spectrum(p, cfg)?.states;
    let Some(state) = states.get(args.state) else {
        return Err(Failure::Usage(format!(
            "--state {} out of range: this well has {} bound state(s)",
            args.state,
            states.len()
        )));
    };
    if args.points < 2 {
        return Err(Failure::Usage(format!("--points must be at least 2, got {}", args.points)));
    }
    let state = normalize(p, state, cfg)?;
    let r_max = args.r_max.unwrap_or_else(|| decay_radius(p, &state).max(10.0 / p.beta()));
    let table = wavefunction_table(p, &state, r_max, args.points, cfg)?;

    Ok(match fmt {
        OutputFormat::Json => {
            let rows: Vec<Value> = (0..table.len())
                .map(|i| json!({ "r": jnum(table.r[i]), "u": jnum(table.u[i]), "R": opt_jnum(table.radial[i]) }))
                .collect();
            to_json(&json!({
                "params": params_json(p),
                "state": {
                    "n": state.n,
                    "nu": jnum(state.nu),
                    "alpha": jnum(state.alpha),
                    "energy": jnum(state.energy),
                    "norm_c": jnum(state.norm_c),
                },
                "table": rows,
            }))
        }
        OutputFormat::Csv => {
            let mut s = csv_line(&["r", "u", "R"].map(String::from));
            for i in 0..table.len() {
                s += &csv_line(&[num(table.r[i]), num(table.u[i]), opt_num(table.radial[i])]);
            }
            s
        }
        OutputFormat::Text => {
            let mut s = params_text(p);
            s += &format!(
                "# state n = {}, nu = {}, alpha = {}, energy = {}, C = {}\n",
                state.n,
                num(state.nu),
                num(state.alpha),
                num(state.energy),
                num(state.norm_c)
            );
            s += "r\tu\tR\n";
            for i in 0..table.len() {
                s += &format!("{}\t{}\t{}\n", num(table.r[i]), num(table.u[i]), opt_num(table.radial[i]));
            }
            s
        }
    })
}

fn config_entries(cfg: &SolverConfig) -> Vec<(&'static str, String)> {
    vec![
        ("root_tol", num(cfg.root_tol)),
        ("bracket_step", num(cfg.bracket_step)),
        ("residual_tol", num(cfg.residual_tol)),
        ("energy_scan_steps", cfg.energy_scan_steps.to_string()),
        ("energy_tol", num(cfg.energy_tol)),
        ("fd_levels", cfg.fd_levels.to_string()),
        ("decay_lengths", num(cfg.decay_lengths)),
        ("step_scale", num(cfg.step_scale)),
        ("norm_tol", num(cfg.norm_tol)),
        ("quadrature_t_max", num(cfg.quadrature.t_max)),
        ("quadrature_panels", cfg.quadrature.n_panels.to_string()),
        ("random_seed", expwell::verify::SEED.to_string()),
    ]
}

fn cmd_verify(p: Option<PotentialParams>, cfg: &SolverConfig, fmt: OutputFormat) -> Result<(String, bool), Failure> {
    let extra: Vec<PotentialParams> = p.into_iter().collect();
    let checks = run_suite(&extra, cfg)?;
    let all = checks.iter().all(|c| c.passed);
    let text = match fmt {
        OutputFormat::Json => {
            let config: serde_json::Map<String, Value> = config_entries(cfg)
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.parse::<f64>().map(jnum).unwrap_or(Value::String(v))))
                .collect();
            let list: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            to_json(&json!({ "config": config, "checks": list, "passed": all }))
        }
        OutputFormat::Csv => {
            let mut s = csv_line(&["check", "result", "detail"].map(String::from));
            for (k, v) in config_entries(cfg) {
                s += &csv_line(&[format!("config.{k}"), v, String::new()]);
            }
            for c in &checks {
                s += &csv_line(&[c.name.clone(), if c.passed { "PASS" } else { "FAIL" }.into(), c.detail.clone()]);
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::from("# configuration\n");
            for (k, v) in config_entries(cfg) {
                s += &format!("#   {k} = {v}\n");
            }
            for c in &checks {
                s += &format!("[{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            s += &format!("{} checks, {} failed\n", checks.len(), failed);
            s
        }
    };
    Ok((text, all))
}

struct MellinRow {
    y: f64,
    closed: f64,
    pair: f64,
    numeric: Option<f64>,
}

fn mellin_rows(rho: f64, args: &MellinArgs, cfg: &SolverConfig) -> Result<Vec<MellinRow>, Failure> {
    let m = match_parameters(rho)?;
    let q = QuadratureConfig { t_max: cfg.quadrature.t_max.min(BESSEL_ENVELOPE), ..cfg.quadrature.clone() };
    let steps = args.y_steps.max(1);
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let y = args.y_min + (args.y_max - args.y_min) * i as f64 / steps as f64;
        let closed = g_closed(rho, y, m.g0)?;
        let pair = mellin_bessel_sqrt(m.nu, m.a, y)?;
        // Numeric transform only where the integral converges and the tail
        // is comfortably decaying.
        let numeric = if y > -0.5 * m.nu && y <= 0.5 && m.nu <= BESSEL_ENVELOPE {
            let nu = m.nu;
            let est = mellin_numeric(|x| expwell::specfun::bessel_j(nu, 2.0 * x.sqrt()).unwrap_or(f64::NAN), y, &q)?;
            Some(est.value)
        } else {
            None
        };
        rows.push(MellinRow { y, closed, pair, numeric });
    }
    Ok(rows)
}

fn cmd_mellin(c: &Common, args: &MellinArgs, cfg: &SolverConfig, fmt: OutputFormat) -> Result<String, Failure> {
    if !(args.y_min.is_finite() && args.y_max.is_finite() && args.y_min <= args.y_max) {
        return Err(Failure::Usage("--y-min must not exceed --y-max".into()));
    }
    let rhos: Vec<f64> = match args.rho {
        Some(rho) => vec![rho],
        None => {
            let p = params(c)?.ok_or_else(|| Failure::Usage("mellin-check needs --rho or --v0 and --beta".into()))?;
            spectrum(&p, cfg)?.states.iter().map(|s| s.rho(&p)).collect()
        }
    };
    let mut tables = Vec::new();
    for rho in rhos {
        tables.push((rho, match_parameters(rho)?, mellin_rows(rho, args, cfg)?));
    }

    Ok(match fmt {
        OutputFormat::Json => {
            let list: Vec<Value> = tables
                .iter()
                .map(|(rho, m, rows)| {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "y": jnum(r.y),
                                "g_closed": jnum(r.closed),
                                "mellin_bessel_sqrt": jnum(r.pair),
                                "abs_diff": jnum((r.closed - r.pair).abs()),
                                "numeric": opt_jnum(r.numeric),
                            })
                        })
                        .collect();
                    json!({ "rho": jnum(*rho), "a": jnum(m.a), "nu": jnum(m.nu), "g0": jnum(m.g0), "rows": rows })
                })
                .collect();
            to_json(&json!({ "tables": list }))
        }
        OutputFormat::Csv => {
            let mut s = csv_line(&["rho", "a", "nu", "g0", "y", "g_closed", "mellin_bessel_sqrt", "abs_diff", "numeric"].map(String::from));
            for (rho, m, rows) in &tables {
                for r in rows {
                    s += &csv_line(&[
                        num(*rho),
                        num(m.a),
                        num(m.nu),
                        num(m.g0),
                        num(r.y),
                        num(r.closed),
                        num(r.pair),
                        num((r.closed - r.pair).abs()),
                        opt_num(r.numeric),
                    ]);
                }
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            if tables.is_empty() {
                s += "no bound states\n";
            }
            for (rho, m, rows) in &tables {
                s += &format!("# rho = {}: a = {}, nu = {}, g0 = {}\n", num(*rho), num(m.a), num(m.nu), num(m.g0));
                s += "y\tg_closed\tmellin_bessel_sqrt\tabs_diff\tnumeric\n";
                for r in rows {
                    s += &format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        num(r.y),
                        num(r.closed),
                        num(r.pair),
                        num((r.closed - r.pair).abs()),
                        opt_num(r.numeric)
                    );
                }
            }
            s
        }
    })
}
