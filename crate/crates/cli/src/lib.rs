//! Batch front-end for `ep3-core`: reads a run config, dispatches one
//! computation and writes CSV artifacts (plus SVG renderings of them).

pub mod config;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ep3_core::exec::Execution;
use ep3_core::kerr_drive::drive_sweep;
use ep3_core::params::{ep3_operating_point, g_ep3, g_min, omega_ep3, PhysicalParams};
use ep3_core::puiseux::{
    eigenvalues_near_ep3, exact_eigenvalues_at, match_to_series, puiseux_coefficients, Branch,
};
use ep3_core::scattering::{
    enhancement_curve, find_dips, s_abs2, scan, DipReport, EnhancementBase, ProbeWindow,
    SpectrumTrace, DEFAULT_HALF_WIDTH, DEFAULT_POINTS,
};
use ep3_core::spectral::{
    build_heff, eigenvalues, eigenvalues_with_tol, find_ep3, DEFAULT_COALESCENCE_TOL,
};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::svg::{render_csv, PlotSpec, Scale};

pub const SPECTRUM_HEADER: [&str; 2] = ["delta_cp_over_gamma2", "s_abs2"];
pub const KERR_HEADER: [&str; 5] = ["omega_d", "branch_index", "m", "delta_k", "multistable"];
pub const ENHANCEMENT_HEADER: [&str; 4] = ["eta", "xi", "delta_omega_p", "enhancement"];

#[derive(Debug, Parser)]
#[command(name = "ep3", version, about = "Third-order exceptional point Kerr-shift sensing")]
pub struct Cli {
    /// Directory receiving the CSV and SVG artifacts.
    #[arg(long, short, env = "EP3_OUT_DIR", default_value = "out", global = true)]
    pub out: PathBuf,

    /// Also render every CSV as an SVG plot.
    #[arg(long, global = true)]
    pub plot: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy, Default)]
pub struct GridArgs {
    /// Window center in delta_cp (default: -Omega_EP3).
    #[arg(long, allow_negative_numbers = true)]
    pub center: Option<f64>,
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the exceptional point numerically and compare with the closed form.
    Ep3 {
        #[arg(long)]
        config: PathBuf,
        /// Lower end of the coupling bracket (default: g_min).
        #[arg(long)]
        lo: Option<f64>,
        /// Upper end of the coupling bracket (default: 2 g_EP3 + 1).
        #[arg(long)]
        hi: Option<f64>,
    },
    /// Exact eigenvalues of the effective Hamiltonian.
    Eigen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta_cp: f64,
        #[arg(long, default_value_t = DEFAULT_COALESCENCE_TOL)]
        tol: f64,
    },
    /// Two-term series eigenvalues next to the exact ones.
    Puiseux {
        #[arg(long)]
        config: PathBuf,
    },
    /// Output spectrum |S|^2 over a probe window.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Dip positions and their distance.
    Dips {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Enhancement table, each eta at its own exceptional point.
    Enhance {
        /// Supplies kappa_int, port_split and kerr_scale.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
        etas: Vec<f64>,
        /// Kerr shifts (default: 31 log-spaced values from 1e-3 to 0.3).
        #[arg(long, value_delimiter = ',')]
        xis: Option<Vec<f64>>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Driven steady states along a sweep of the drive strength.
    KerrSteady {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        omega_min: f64,
        /// Upper end of the sweep (default: omega_d from the config).
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },
    /// Regenerate the data behind a figure.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source}")]
    Config {
        #[source]
        source: ConfigError,
    },
    #[error("{source}")]
    Core {
        module: &'static str,
        operation: &'static str,
        #[source]
        source: ep3_core::Error,
    },
    #[error("{message}")]
    Output {
        operation: &'static str,
        message: String,
    },
    #[error("{message}")]
    Usage {
        operation: &'static str,
        message: String,
    },
}

impl From<ConfigError> for CliError {
    fn from(source: ConfigError) -> Self {
        CliError::Config { source }
    }
}

impl CliError {
    pub fn module(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Core { module, .. } => module,
            CliError::Output { .. } | CliError::Usage { .. } => "cli",
        }
    }

    pub fn operation(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "load_config",
            CliError::Core { operation, .. }
            | CliError::Output { operation, .. }
            | CliError::Usage { operation, .. } => operation,
        }
    }

    /// 1 for rejected input, 2 for a failed numerical procedure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } if source.is_numerical() => 2,
            _ => 1,
        }
    }

    /// Error record as a small TOML document.
    pub fn record(&self) -> String {
        let mut fields = toml::Table::new();
        fields.insert("module".into(), self.module().into());
        fields.insert("operation".into(), self.operation().into());
        fields.insert("message".into(), self.to_string().into());
        fields.insert("exit_code".into(), i64::from(self.exit_code()).into());
        let mut root = toml::Table::new();
        root.insert("error".into(), fields.into());
        toml::to_string(&root).unwrap_or_else(|_| format!("error: {self}\n"))
    }
}

fn core<T>(
    module: &'static str,
    operation: &'static str,
    r: ep3_core::Result<T>,
) -> Result<T, CliError> {
    r.map_err(|source| CliError::Core {
        module,
        operation,
        source,
    })
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub summary: Vec<String>,
    pub artifacts: Vec<PathBuf>,
}

/// Formats a number so that it round-trips exactly and stays readable.
pub fn num(v: f64) -> String {
    if v != 0.0 && v.is_finite() && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

struct Writer<'a> {
    out: &'a Path,
    plot: bool,
    outcome: Outcome,
}

impl Writer<'_> {
    fn csv(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        let fail = |e: &dyn std::fmt::Display| CliError::Output {
            operation: "write_csv",
            message: format!("{}: {e}", path.display()),
        };
        let mut w = csv::Writer::from_path(&path).map_err(|e| fail(&e))?;
        w.write_record(header).map_err(|e| fail(&e))?;
        for row in rows {
            w.write_record(&row).map_err(|e| fail(&e))?;
        }
        w.flush().map_err(|e| fail(&e))?;
        self.outcome.artifacts.push(path.clone());
        Ok(path)
    }

    fn key_values(&mut self, name: &str, pairs: Vec<(&str, String)>) -> Result<PathBuf, CliError> {
        let rows = pairs
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect();
        self.csv(name, &["key", "value"], rows)
    }

    fn svg(&mut self, csv_path: &Path, spec: PlotSpec) -> Result<(), CliError> {
        if !self.plot {
            return Ok(());
        }
        let fail = |message: String| CliError::Output {
            operation: "render_svg",
            message,
        };
        let doc = render_csv(csv_path, &spec).map_err(fail)?;
        let path = csv_path.with_extension("svg");
        fs::write(&path, doc).map_err(|e| fail(format!("{}: {e}", path.display())))?;
        self.outcome.artifacts.push(path);
        Ok(())
    }

    fn say(&mut self, line: String) {
        self.outcome.summary.push(line);
    }

    fn spectrum(&mut self, name: &str, trace: &SpectrumTrace) -> Result<(), CliError> {
        let rows = trace
            .delta_cp
            .iter()
            .zip(&trace.s_abs2)
            .map(|(d, s)| vec![num(*d), num(*s)])
            .collect();
        let path = self.csv(name, &SPECTRUM_HEADER, rows)?;
        self.svg(
            &path,
            PlotSpec {
                title: "output spectrum",
                x_column: SPECTRUM_HEADER[0],
                y_column: SPECTRUM_HEADER[1],
                group_column: None,
                x_scale: Scale::Linear,
                y_scale: Scale::Linear,
                markers: false,
            },
        )
    }

    fn enhancement(&mut self, name: &str, rows: &[ep3_core::scattering::EnhancementRow]) -> Result<(), CliError> {
        let data = rows
            .iter()
            .map(|r| vec![num(r.eta), num(r.xi), num(r.delta_omega_p), num(r.enhancement)])
            .collect();
        let path = self.csv(name, &ENHANCEMENT_HEADER, data)?;
        if self.plot {
            for (y, y_scale, suffix) in [
                ("delta_omega_p", Scale::Log, "distance"),
                ("enhancement", Scale::Linear, "factor"),
            ] {
                let doc = render_csv(
                    &path,
                    &PlotSpec {
                        title: suffix,
                        x_column: "xi",
                        y_column: y,
                        group_column: Some("eta"),
                        x_scale: Scale::Log,
                        y_scale,
                        markers: false,
                    },
                )
                .map_err(|message| CliError::Output {
                    operation: "render_svg",
                    message,
                })?;
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("enhancement");
                let svg_path = path.with_file_name(format!("{stem}_{suffix}.svg"));
                fs::write(&svg_path, doc).map_err(|e| CliError::Output {
                    operation: "render_svg",
                    message: format!("{}: {e}", svg_path.display()),
                })?;
                self.outcome.artifacts.push(svg_path);
            }
        }
        Ok(())
    }
}

fn window_for(eta: f64, grid: &GridArgs) -> Result<ProbeWindow, CliError> {
    core(
        "scattering",
        "scan",
        ProbeWindow::new(
            grid.center.unwrap_or(-omega_ep3(eta, 0.0)),
            grid.half_width.unwrap_or(DEFAULT_HALF_WIDTH),
            grid.points.unwrap_or(DEFAULT_POINTS),
        ),
    )
}

fn config_params(cfg: &RunConfig) -> Result<PhysicalParams, CliError> {
    core("params", "derive_pseudo_hermitian", cfg.params())
}

fn mhz(cfg: &RunConfig, v: f64) -> String {
    match cfg.gamma2_mhz {
        Some(g) => format!("{} ({} MHz)", num(v), num(v * g)),
        None => num(v),
    }
}

/// Log-spaced Kerr shifts from 1e-3 to 0.3 used for the enhancement table.
pub fn default_xis() -> Vec<f64> {
    let (lo, hi) = (1e-3f64.ln(), 0.3f64.ln());
    (0..31)
        .map(|i| match i {
            0 => 1e-3,
            30 => 0.3,
            _ => (lo + (hi - lo) * i as f64 / 30.0).exp(),
        })
        .collect()
}

fn dip_pairs(report: &DipReport) -> Vec<(&'static str, String)> {
    let [d1, d2] = report.dips;
    vec![
        ("delta_k", num(report.delta_k)),
        ("dip1_delta_cp", num(d1.delta_cp)),
        ("dip1_probe_offset", num(d1.probe_offset)),
        ("dip1_s_abs2", num(d1.depth)),
        ("dip2_delta_cp", num(d2.delta_cp)),
        ("dip2_probe_offset", num(d2.probe_offset)),
        ("dip2_s_abs2", num(d2.depth)),
        ("delta_omega_p", num(report.delta_omega_p)),
        (
            "enhancement",
            report.enhancement.map(num).unwrap_or_default(),
        ),
        ("qualifying_dips", report.qualifying.to_string()),
    ]
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    fs::create_dir_all(&cli.out).map_err(|e| CliError::Output {
        operation: "create_output_dir",
        message: format!("{}: {e}", cli.out.display()),
    })?;
    let mut w = Writer {
        out: &cli.out,
        plot: cli.plot,
        outcome: Outcome::default(),
    };
    match &cli.command {
        Command::Ep3 { config, lo, hi } => {
            let cfg = RunConfig::load(config)?;
            let eta = cfg.eta;
            let lo = lo.unwrap_or_else(|| g_min(eta));
            let hi = hi.unwrap_or_else(|| 2.0 * g_ep3(eta) + 1.0);
            let g = core("spectral", "find_ep3", find_ep3(eta, lo, hi))?;
            let at = core(
                "params",
                "derive_pseudo_hermitian",
                ep3_operating_point(eta),
            )?;
            let spread = eigenvalues(&core("spectral", "build_heff", build_heff(&at, 0.0))?).spread();
            w.say(format!("g_EP3 = {} (closed form {})", mhz(&cfg, g), num(g_ep3(eta))));
            w.say(format!("Omega_EP3 = {}", mhz(&cfg, omega_ep3(eta, 0.0))));
            w.key_values(
                "ep3.csv",
                vec![
                    ("eta", num(eta)),
                    ("g_min", num(g_min(eta))),
                    ("g_ep3_numeric", num(g)),
                    ("g_ep3_closed_form", num(g_ep3(eta))),
                    ("omega_ep3", num(omega_ep3(eta, 0.0))),
                    ("eigenvalue_spread", num(spread)),
                ],
            )?;
        }
        Command::Eigen {
            config,
            delta_cp,
            tol,
        } => {
            let cfg = RunConfig::load(config)?;
            let params = config_params(&cfg)?;
            if !(*tol > 0.0) {
                return Err(CliError::Usage {
                    operation: "eigenvalues",
                    message: format!("tol must be positive, got {tol}"),
                });
            }
            let h = core("spectral", "build_heff", build_heff(&params, *delta_cp))?;
            let s = eigenvalues_with_tol(&h, *tol);
            w.say(format!("class {}", s.class.as_str()));
            let rows = [("minus", s.minus), ("zero", s.zero), ("plus", s.plus)]
                .iter()
                .map(|(l, z)| {
                    w.say(format!("Omega_{l} = {} {:+}i", num(z.re), num(z.im)));
                    vec![l.to_string(), num(z.re), num(z.im), s.class.as_str().to_string()]
                })
                .collect::<Vec<_>>();
            w.csv("eigen.csv", &["label", "re", "im", "class"], rows)?;
        }
        Command::Puiseux { config } => {
            let cfg = RunConfig::load(config)?;
            let params = config_params(&cfg)?;
            let sol = core("puiseux", "puiseux_coefficients", puiseux_coefficients(cfg.eta))?;
            let series = core(
                "puiseux",
                "eigenvalues_near_ep3",
                eigenvalues_near_ep3(cfg.eta, 0.0, cfg.delta_k),
            )?;
            let h = core("spectral", "build_heff", build_heff(&params, 0.0))?;
            let exact = match_to_series(&series, &eigenvalues(&h));
            let mut rows = Vec::new();
            for (branch, s, e) in [
                (Branch::Plus, series.plus, exact.plus),
                (Branch::Zero, series.zero, exact.zero),
                (Branch::Minus, series.minus, exact.minus),
            ] {
                let b = sol.branch(branch);
                w.say(format!(
                    "branch {}: series {} {:+}i, exact {} {:+}i",
                    branch.label(),
                    num(s.re),
                    num(s.im),
                    num(e.re),
                    num(e.im)
                ));
                rows.push(vec![
                    branch.label().to_string(),
                    num(b.theta),
                    num(b.lambda1.re),
                    num(b.lambda1.im),
                    num(b.lambda2.re),
                    num(b.lambda2.im),
                    num(s.re),
                    num(s.im),
                    num(e.re),
                    num(e.im),
                ]);
            }
            w.csv(
                "puiseux.csv",
                &[
                    "branch", "theta", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im",
                    "series_re", "series_im", "exact_re", "exact_im",
                ],
                rows,
            )?;
        }
        Command::Spectrum { config, grid } => {
            let cfg = RunConfig::load(config)?;
            let params = config_params(&cfg)?;
            let window = window_for(cfg.eta, grid)?;
            let trace = core("scattering", "scan", scan(&params, cfg.delta_k, &window))?;
            let i = trace.argmin();
            w.say(format!(
                "min |S|^2 = {} at delta_cp = {}",
                num(trace.s_abs2[i]),
                mhz(&cfg, trace.delta_cp[i])
            ));
            w.spectrum("spectrum.csv", &trace)?;
        }
        Command::Dips { config, grid } => {
            let cfg = RunConfig::load(config)?;
            let params = config_params(&cfg)?;
            let window = window_for(cfg.eta, grid)?;
            let trace = core("scattering", "scan", scan(&params, cfg.delta_k, &window))?;
            let report = core("scattering", "find_dips", find_dips(&trace))?;
            w.say(format!("delta_omega_p = {}", mhz(&cfg, report.delta_omega_p)));
            if let Some(e) = report.enhancement {
                w.say(format!("enhancement = {}", num(e)));
            }
            w.key_values("dips.csv", dip_pairs(&report))?;
        }
        Command::Enhance {
            config,
            etas,
            xis,
            half_width,
            points,
        } => {
            let mut base = EnhancementBase::default();
            if let Some(path) = config {
                let cfg = RunConfig::load(path)?;
                base.kappa_int = cfg.kappa_int;
                base.port_split = cfg.port_split;
                base.kerr_scale = cfg.kerr_scale;
            }
            if let Some(h) = half_width {
                base.half_width = *h;
            }
            if let Some(n) = points {
                base.points = *n;
            }
            let xis = xis.clone().unwrap_or_else(default_xis);
            let rows = core(
                "scattering",
                "enhancement_curve",
                enhancement_curve(etas, &xis, &base),
            )?;
            for r in rows.iter().filter(|r| r.xi == xis[0] || r.xi == xis[xis.len() - 1]) {
                w.say(format!("eta {} xi {}: enhancement {}", num(r.eta), num(r.xi), num(r.enhancement)));
            }
            w.enhancement("enhancement.csv", &rows)?;
        }
        Command::KerrSteady {
            config,
            omega_min,
            omega_max,
            steps,
        } => {
            let cfg = RunConfig::load(config)?;
            let drive = cfg.drive.ok_or(ConfigError::MissingKey("delta_cd"))?;
            let params = config_params(&cfg)?;
            let hi = omega_max.unwrap_or(drive.omega_d_rabi);
            if *steps < 2 || !(hi > *omega_min) || *omega_min < 0.0 {
                return Err(CliError::Usage {
                    operation: "drive_sweep",
                    message: format!(
                        "need 0 <= omega_min < omega_max and steps >= 2, got [{omega_min}, {hi}] with {steps}"
                    ),
                });
            }
            let omegas: Vec<f64> = (0..*steps)
                .map(|i| omega_min + (hi - omega_min) * i as f64 / (*steps - 1) as f64)
                .collect();
            let states = core(
                "kerr_drive",
                "steady_state",
                drive_sweep(&params, &drive, &omegas, Execution::default()),
            )?;
            let mut rows = Vec::new();
            for (omega, state) in omegas.iter().zip(&states) {
                for (i, b) in state.branches.iter().enumerate() {
                    rows.push(vec![
                        num(*omega),
                        i.to_string(),
                        num(b.occupation),
                        num(b.delta_k),
                        state.multistable.to_string(),
                    ]);
                }
            }
            let multistable = states.iter().filter(|s| s.multistable).count();
            w.say(format!("{multistable} of {steps} drive strengths are multistable"));
            let path = w.csv("kerr_steady.csv", &KERR_HEADER, rows)?;
            w.svg(
                &path,
                PlotSpec {
                    title: "Kerr shift per branch",
                    x_column: "omega_d",
                    y_column: "delta_k",
                    group_column: Some("branch_index"),
                    x_scale: Scale::Linear,
                    y_scale: Scale::Linear,
                    markers: true,
                },
            )?;
        }
        Command::Reproduce { figure } => match figure {
            Figure::Fig2 => reproduce_fig2(&mut w)?,
            Figure::Fig3 => reproduce_fig3(&mut w)?,
            Figure::Fig4 => {
                let rows = core(
                    "scattering",
                    "enhancement_curve",
                    enhancement_curve(&[1.0, 2.0, 3.0], &default_xis(), &EnhancementBase::default()),
                )?;
                for r in rows.iter().filter(|r| r.xi == 1e-3 || r.xi == 0.3) {
                    w.say(format!("eta {} xi {}: enhancement {}", num(r.eta), num(r.xi), num(r.enhancement)));
                }
                w.enhancement("fig4.csv", &rows)?;
            }
        },
    }
    Ok(w.outcome)
}

fn reproduce_fig2(w: &mut Writer) -> Result<(), CliError> {
    let xis: Vec<f64> = (1..=300).map(|i| i as f64 * 1e-3).collect();
    for eta in [1.0, 2.0] {
        let centre = omega_ep3(eta, 0.0);
        let mut rows = Vec::new();
        for &xi in &xis {
            let series = core("puiseux", "eigenvalues_near_ep3", eigenvalues_near_ep3(eta, 0.0, xi))?;
            let exact = match_to_series(
                &series,
                &core("puiseux", "exact_eigenvalues", exact_eigenvalues_at(eta, 0.0, xi))?,
            );
            for (label, s, e) in [
                ("+", series.plus, exact.plus),
                ("0", series.zero, exact.zero),
                ("-", series.minus, exact.minus),
            ] {
                rows.push(vec![
                    num(xi),
                    label.to_string(),
                    num(s.re - centre),
                    num(s.im),
                    num(e.re - centre),
                    num(e.im),
                ]);
            }
        }
        let name = format!("fig2_eta{eta}.csv");
        let path = w.csv(
            &name,
            &["xi", "branch", "re_shift_series", "im_series", "re_shift_exact", "im_exact"],
            rows,
        )?;
        if w.plot {
            for (col, suffix) in [("re_shift_series", "re"), ("im_series", "im")] {
                let doc = render_csv(
                    &path,
                    &PlotSpec {
                        title: suffix,
                        x_column: "xi",
                        y_column: col,
                        group_column: Some("branch"),
                        x_scale: Scale::Linear,
                        y_scale: Scale::Linear,
                        markers: false,
                    },
                )
                .map_err(|message| CliError::Output {
                    operation: "render_svg",
                    message,
                })?;
                let svg_path = path.with_file_name(format!("fig2_eta{eta}_{suffix}.svg"));
                fs::write(&svg_path, doc).map_err(|e| CliError::Output {
                    operation: "render_svg",
                    message: format!("{}: {e}", svg_path.display()),
                })?;
                w.outcome.artifacts.push(svg_path);
            }
        }
        w.say(format!("eta {eta}: {} series points per branch", xis.len()));
    }
    Ok(())
}

fn reproduce_fig3(w: &mut Writer) -> Result<(), CliError> {
    let params = core("params", "derive_pseudo_hermitian", ep3_operating_point(1.0))?;
    let window = ProbeWindow::around_ep3(1.0);
    let at_ep3 = core("scattering", "scan", scan(&params, 0.0, &window))?;
    w.say(format!(
        "|S|^2 at the exceptional point = {}",
        num(s_abs2(&params, -omega_ep3(1.0, 0.0), 0.0))
    ));
    w.spectrum("fig3a.csv", &at_ep3)?;
    let shifted = core("scattering", "scan", scan(&params, 0.01, &window))?;
    w.spectrum("fig3b.csv", &shifted)?;
    let report = core("scattering", "find_dips", find_dips(&shifted))?;
    w.say(format!("delta_omega_p = {}", num(report.delta_omega_p)));
    w.key_values("fig3b_dips.csv", dip_pairs(&report))?;
    Ok(())
}
