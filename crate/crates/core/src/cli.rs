//! Command-line front end.
//!
//! Every command writes a single CSV table or JSON document. Floats are
//! printed with 17 significant digits so repeated runs are byte-identical.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::doubleshell::{critical_theta2, threshold_constants, zero_energy_solution};
use crate::error::Error;
use crate::model::{DoubleShellConfig, ShellConfig};
use crate::oracle::{default_r_max, numerov_phase_shift, transfer_matrix_s, zero_energy_exterior};
use crate::smatrix::{
    default_ell_max, phase_curve, s_coefficient, s_coefficient_direct, s_sweep, total_cross_section,
};
use crate::spectral::find_bound_states;

/// Largest deviation between routes that `oracle-compare` accepts.
pub const ORACLE_TOLERANCE: f64 = 1e-8;
/// Default Numerov step count for `oracle-compare --numerov`.
pub const DEFAULT_NUMEROV_STEPS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "shellscat",
    version,
    about = "Partial-wave scattering on concentric delta shells"
)]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Upper bound on worker threads for sweeps.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[arg(long)]
    pub kmin: f64,
    #[arg(long)]
    pub kmax: f64,
    #[arg(long)]
    pub points: usize,
    /// Logarithmic instead of linear spacing.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase shift and S-matrix coefficient over a wavenumber sweep (CSV).
    PhaseShift {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Total and partial cross sections over a wavenumber sweep (CSV).
    CrossSection {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        sweep: Sweep,
        /// Highest partial wave; defaults to ceil(kmax·R_N) + 8.
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Threshold constants and scattering length of a double shell (JSON).
    ScatteringLength {
        #[arg(long)]
        config: PathBuf,
    },
    /// Critical second coupling for given radii and first coupling (JSON).
    Threshold {
        #[arg(long = "R1")]
        r1: f64,
        #[arg(long = "R2")]
        r2: f64,
        #[arg(long = "theta1", allow_hyphen_values = true)]
        theta1: f64,
    },
    /// Negative-energy eigenvalues in one channel (JSON).
    BoundStates {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        kappa_max: f64,
        #[arg(long, default_value_t = 256)]
        grid_points: usize,
    },
    /// Zero-energy s-wave solution (JSON).
    ZeroEnergy {
        #[arg(long)]
        config: PathBuf,
    },
    /// S-matrix coefficient by every available route, with deviations (JSON).
    OracleCompare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: f64,
        /// Also integrate the radial equation with Numerov's method.
        #[arg(long)]
        numerov: bool,
        #[arg(long, default_value_t = DEFAULT_NUMEROV_STEPS)]
        steps: usize,
    },
}

/// Failure of a command, mapped onto the exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e)
        }
    }
}

struct Output {
    body: String,
    status: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Self { body, status: 0 }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let _ = writeln!(
                stderr,
                "{}",
                text.lines().next().unwrap_or("error: bad arguments")
            );
            return 2;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli.command),
    };
    let output = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
        Err(Failure::Numerical(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output.body).map_err(|e| (path.clone(), e)),
        None => stdout
            .write_all(output.body.as_bytes())
            .map_err(|e| (PathBuf::from("<stdout>"), e)),
    };
    if let Err((path, e)) = written {
        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
        return 2;
    }
    output.status
}

fn execute(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::PhaseShift { config, ell, sweep } => phase_shift(&load(config)?, *ell, sweep),
        Command::CrossSection {
            config,
            sweep,
            lmax,
        } => cross_section(&load(config)?, sweep, *lmax),
        Command::ScatteringLength { config } => {
            let cfg = DoubleShellConfig::try_from(load(config)?)?;
            Ok(Output::ok(to_json(&threshold_constants(&cfg))))
        }
        Command::Threshold { r1, r2, theta1 } => threshold(*r1, *r2, *theta1),
        Command::BoundStates {
            config,
            ell,
            kappa_max,
            grid_points,
        } => {
            let states = find_bound_states(&load(config)?, *ell, *kappa_max, *grid_points)?;
            Ok(Output::ok(to_json(&states)))
        }
        Command::ZeroEnergy { config } => zero_energy(&load(config)?),
        Command::OracleCompare {
            config,
            ell,
            k,
            numerov,
            steps,
        } => oracle_compare(&load(config)?, *ell, *k, numerov.then_some(*steps)),
    }
}

fn load(path: &Path) -> Result<ShellConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    ShellConfig::from_json(&text)
        .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
}

impl Sweep {
    fn grid(&self) -> Result<Vec<f64>, Failure> {
        let (a, b, n) = (self.kmin, self.kmax, self.points);
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Failure::Usage(format!(
                "need 0 < kmin < kmax, got kmin = {a}, kmax = {b}"
            )));
        }
        if n < 2 {
            return Err(Failure::Usage(format!("need at least 2 points, got {n}")));
        }
        let last = (n - 1) as f64;
        let mut ks: Vec<f64> = if self.log {
            let span = (b / a).ln();
            (0..n).map(|i| a * (span * i as f64 / last).exp()).collect()
        } else {
            (0..n).map(|i| a + (b - a) * i as f64 / last).collect()
        };
        ks[0] = a;
        ks[n - 1] = b;
        Ok(ks)
    }
}

fn phase_shift(cfg: &ShellConfig, ell: usize, sweep: &Sweep) -> Result<Output, Failure> {
    let ks = sweep.grid()?;
    let channels = s_sweep(cfg, ell, &ks)
        .into_iter()
        .collect::<crate::Result<Vec<_>>>()?;
    let curve = phase_curve(cfg, ell, &ks)?;
    let mut body = String::from("k,delta,re_S,im_S,abs_det\n");
    for (ch, delta) in channels.iter().zip(&curve.deltas) {
        let row = [
            ch.k,
            *delta,
            ch.s_value.re,
            ch.s_value.im,
            ch.det_plus.norm(),
        ];
        push_row(&mut body, &row);
    }
    Ok(Output::ok(body))
}

fn cross_section(cfg: &ShellConfig, sweep: &Sweep, lmax: Option<usize>) -> Result<Output, Failure> {
    let ks = sweep.grid()?;
    let lmax = lmax.unwrap_or_else(|| default_ell_max(cfg, sweep.kmax));
    let rows = ks
        .par_iter()
        .map(|&k| total_cross_section(cfg, k, Some(lmax)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut body = String::from("k,sigma_total");
    for ell in 0..=lmax {
        let _ = write!(body, ",sigma_{ell}");
    }
    body.push('\n');
    for cs in &rows {
        let mut row = vec![cs.k, cs.total];
        row.extend_from_slice(&cs.partial);
        push_row(&mut body, &row);
    }
    Ok(Output::ok(body))
}

fn threshold(r1: f64, r2: f64, theta1: f64) -> Result<Output, Failure> {
    let critical = critical_theta2(r1, r2, theta1)?;
    let report = critical
        .map(|t2| {
            DoubleShellConfig::from_thetas(r1, r2, theta1, t2).map(|cfg| threshold_constants(&cfg))
        })
        .transpose()?;
    let value = json!({
        "R1": r1,
        "R2": r2,
        "theta1": theta1,
        "theta2_critical": critical,
        "C0": report.as_ref().map(|r| r.c0),
        "Gamma0": report.as_ref().map(|r| r.gamma0),
        "C2": report.as_ref().map(|r| r.c2),
        "regime_at_critical": report.as_ref().map(|r| r.regime),
    });
    Ok(Output::ok(to_json(&value)))
}

fn zero_energy(cfg: &ShellConfig) -> Result<Output, Failure> {
    let (d, e) = zero_energy_exterior(cfg);
    let double = match DoubleShellConfig::try_from(cfg.clone()) {
        Ok(ds) => Some(zero_energy_solution(&ds, 1.0)?),
        Err(_) => None,
    };
    let value = json!({ "d": d, "e": e, "double_shell": double });
    Ok(Output::ok(to_json(&value)))
}

fn oracle_compare(
    cfg: &ShellConfig,
    ell: usize,
    k: f64,
    numerov_steps: Option<usize>,
) -> Result<Output, Failure> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Failure::Usage(format!("--k must be positive, got {k}")));
    }
    let det = s_coefficient(cfg, ell, k)?;
    let direct = s_coefficient_direct(cfg, ell, k)?;
    let transfer = transfer_matrix_s(cfg, ell, k)?;
    let route =
        |s: Complex64| json!({ "re_S": s.re, "im_S": s.im, "delta": reduce_mod_pi(s.arg() / 2.0) });

    let mut routes = serde_json::Map::new();
    routes.insert("det_ratio".into(), route(det.s_value));
    routes.insert("direct".into(), route(direct.s_value));
    routes.insert("transfer".into(), route(transfer));
    let mut deviations = serde_json::Map::new();
    let pairs = [
        ("det_ratio_vs_direct", (det.s_value - direct.s_value).norm()),
        ("det_ratio_vs_transfer", (det.s_value - transfer).norm()),
        ("direct_vs_transfer", (direct.s_value - transfer).norm()),
    ];
    let mut worst: f64 = 0.0;
    for (name, dev) in pairs {
        worst = worst.max(dev);
        deviations.insert(name.into(), json!(dev));
    }
    if let Some(steps) = numerov_steps {
        let delta = numerov_phase_shift(cfg, ell, k, default_r_max(cfg, k), steps)?;
        routes.insert("numerov".into(), json!({ "delta": delta, "steps": steps }));
        let dev = reduce_mod_pi(delta - det.s_value.arg() / 2.0).abs();
        worst = worst.max(dev);
        deviations.insert("numerov_vs_det_ratio".into(), json!(dev));
    }
    let pass = worst <= ORACLE_TOLERANCE;
    let value = json!({
        "ell": ell,
        "k": k,
        "routes": routes,
        "deviations": deviations,
        "max_deviation": worst,
        "tolerance": ORACLE_TOLERANCE,
        "pass": pass,
    });
    Ok(Output {
        body: to_json(&value),
        status: if pass { 0 } else { 1 },
    })
}

fn reduce_mod_pi(d: f64) -> f64 {
    let r = d - PI * (d / PI).round();
    if r <= -FRAC_PI_2 {
        r + PI
    } else {
        r
    }
}

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn push_row(body: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            body.push(',');
        }
        body.push_str(&format_float(*v));
    }
    body.push('\n');
}

/// JSON formatter that prints floats like [`format_float`] and non-finite
/// values as `null`.
struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Compact JSON with fixed float formatting and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(10.0 / 11.0), "9.0909090909090906e-1");
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
        assert_eq!(format_float(-0.0), "0.0000000000000000e0");
        assert_eq!(
            to_json(&json!({"a": 1.5, "b": f64::NAN, "n": 3})),
            "{\"a\":1.5000000000000000e0,\"b\":null,\"n\":3}\n"
        );
    }

    #[test]
    fn printed_floats_round_trip() {
        for &x in &[PI, -1e-300, 6.02214076e23, 1.0 / 3.0, f64::MIN_POSITIVE] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn sweep_grids() {
        let lin = Sweep {
            kmin: 1.0,
            kmax: 2.0,
            points: 5,
            log: false,
        }
        .grid()
        .unwrap();
        assert_eq!(lin, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        let log = Sweep {
            kmin: 0.01,
            kmax: 100.0,
            points: 5,
            log: true,
        }
        .grid()
        .unwrap();
        for (got, want) in log.iter().zip([0.01, 0.1, 1.0, 10.0, 100.0]) {
            assert!((got / want - 1.0).abs() < 1e-14);
        }
        assert!(Sweep {
            kmin: 2.0,
            kmax: 1.0,
            points: 5,
            log: false
        }
        .grid()
        .is_err());
        assert!(Sweep {
            kmin: 1.0,
            kmax: 2.0,
            points: 1,
            log: false
        }
        .grid()
        .is_err());
    }

    #[test]
    fn threshold_example() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = [
            "shellscat",
            "threshold",
            "--R1",
            "1",
            "--R2",
            "2",
            "--theta1",
            "1",
        ];
        assert_eq!(run(args, &mut out, &mut err), 0);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert!((v["theta2_critical"].as_f64().unwrap() + 8.0 / 3.0).abs() < 1e-12);
        assert!((v["C2"].as_f64().unwrap() - 160.0 / 9.0).abs() < 1e-10);
        assert_eq!(v["regime_at_critical"], "ExceptionalNondegenerate");
    }

    #[test]
    fn bad_arguments_exit_two() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(
            run(
                [
                    "shellscat",
                    "threshold",
                    "--R1",
                    "2",
                    "--R2",
                    "1",
                    "--theta1",
                    "1"
                ],
                &mut out,
                &mut err
            ),
            2
        );
        assert_eq!(run(["shellscat", "no-such-command"], &mut out, &mut err), 2);
        assert_eq!(String::from_utf8(err).unwrap().lines().count(), 2);
    }
}
