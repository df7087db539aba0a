// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! `wgqed` command-line interface.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid parameters or bad
//! config, 64 usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wgqed::config::{RunConfig, SchemeParams};
use wgqed::memory::{retrieve, store};
use wgqed::metrics::{fidelity_sweep, leakage_sweep_4ls, GateScheme, Purcell, SweepResult};
use wgqed::oracle::{agreement_check, MAX_RESIDUAL};
use wgqed::params::solve_gate_conditions_with;
use wgqed::protocol::{three_ls_photon_atom_gate, truth_table, ProtocolOptions};
use wgqed::{
    reflect_3ls, AtomState, Error, MemoryParams, ReflectionSet, SystemParams3LS, SystemParams4LS, Tolerances,
};

#[derive(Parser, Debug)]
#[command(name = "wgqed", version, about = "Waveguide-QED photon gates and quantum memory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write results here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Emitter scheme; defaults to the config's scheme, else 4ls
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeArg>,

    /// Give photon C the bare mirror phase when it passes the emitter in level 1
    #[arg(long, global = true)]
    c_trivial_phase: bool,

    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reflection amplitudes at the given frequencies
    Amplitudes {
        /// Probe frequencies (default: the qubit and auxiliary frequencies)
        #[arg(long, value_delimiter = ',')]
        omega: Vec<f64>,
    },
    /// Gate phase table at the qubit center frequencies
    TruthTable,
    /// Fidelity and leakage over pulse widths and Purcell factors
    FidelitySweep {
        #[arg(long = "delta-t", value_delimiter = ',', default_value = "10")]
        delta_t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,inf")]
        purcell: Vec<Purcell>,
    },
    /// Four-level leakage over Purcell factors at one pulse width
    LeakageSweep {
        #[arg(long = "delta-t", default_value_t = 10.0)]
        delta_t: f64,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,30,40,50,60,70,80,90,100")]
        purcell: Vec<Purcell>,
    },
    /// Store and retrieve photonic qubits in the five-level memory
    MemoryDemo {
        /// Random input states in addition to the fixed ones
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Compare closed-form amplitudes with the linear-system oracle
    OracleCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Snap target frequencies onto the gate-condition lattice
    SolveConditions {
        #[arg(long)]
        omega12: f64,
        #[arg(long)]
        omega32: f64,
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    #[value(name = "4ls")]
    FourLevel,
    #[value(name = "3ls")]
    ThreeLevel,
}

enum Failure {
    Invalid(String),
    Internal(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(report) => {
                let mut msg = format!("invalid parameters: {report}");
                for c in &report.checks {
                    msg.push_str(&format!("\n  {:<24} {}  measured {}", c.name, if c.pass { "ok" } else { "FAIL" }, c.measured));
                }
                Failure::Invalid(msg)
            }
            e @ (Error::BadInput(_) | Error::NoValidSolution(_) | Error::PulseOverlap { .. }) => {
                Failure::Invalid(e.to_string())
            }
            other => Failure::Internal(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

/// Tabular result with a JSON rendering.
struct Output {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&s).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn complex_cells(z: Complex64) -> [String; 2] {
    [fmt_num(z.re), fmt_num(z.im)]
}

fn load_config(cli: &Cli) -> Result<Option<RunConfig>, Failure> {
    cli.config.as_ref().map(RunConfig::load).transpose().map_err(Failure::from)
}

fn select_scheme(cli: &Cli, cfg: Option<&RunConfig>) -> Result<SchemeParams, Failure> {
    let from_config = cfg.map(|c| c.system);
    match (cli.scheme, from_config) {
        (None, Some(s)) => Ok(s),
        (None, None) | (Some(SchemeArg::FourLevel), None) => {
            Ok(SchemeParams::FourLevel(SystemParams4LS::antinode_preset(0.0)))
        }
        (Some(SchemeArg::ThreeLevel), None) => Ok(SchemeParams::ThreeLevel(SystemParams3LS::antinode_preset(0.0))),
        (Some(SchemeArg::FourLevel), Some(s @ SchemeParams::FourLevel(_)))
        | (Some(SchemeArg::ThreeLevel), Some(s @ SchemeParams::ThreeLevel(_))) => Ok(s),
        (Some(arg), Some(_)) => Err(Failure::Invalid(format!(
            "bad config: --scheme {} does not match the config's scheme",
            arg.to_possible_value().unwrap().get_name()
        ))),
    }
}

fn check_valid(report: wgqed::ValidationReport) -> Result<(), Failure> {
    if report.ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(report).into())
    }
}

fn tolerances(cfg: Option<&RunConfig>) -> Tolerances {
    cfg.map(|c| c.tolerances).unwrap_or_default()
}

fn protocol_options(cli: &Cli, cfg: Option<&RunConfig>) -> ProtocolOptions {
    ProtocolOptions {
        c_trivial_phase: cli.c_trivial_phase || cfg.is_some_and(|c| c.c_trivial_phase),
    }
}

fn amplitudes(cli: &Cli, cfg: Option<&RunConfig>, omega: &[f64]) -> Result<Output, Failure> {
    match select_scheme(cli, cfg)? {
        SchemeParams::FourLevel(p) => {
            check_valid(p.validate_with(&tolerances(cfg)))?;
            let omegas = if omega.is_empty() { vec![p.omega1, p.omega0, p.omega32] } else { omega.to_vec() };
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for w in omegas {
                let s = ReflectionSet::at(&p, w)?;
                let mut row = vec![fmt_num(w)];
                for z in [s.r11, s.r13, s.r33, s.r31, s.r3] {
                    row.extend(complex_cells(z));
                }
                rows.push(row);
                json_rows.push(json!({"omega": w, "r11": s.r11, "r13": s.r13, "r33": s.r33, "r31": s.r31, "R3": s.r3}));
            }
            Ok(Output {
                header: vec![
                    "omega", "r11_re", "r11_im", "r13_re", "r13_im", "r33_re", "r33_im", "r31_re", "r31_im", "R3_re",
                    "R3_im",
                ],
                rows,
                json: Value::Array(json_rows),
            })
        }
        SchemeParams::ThreeLevel(p) => {
            check_valid(p.validate_with(&tolerances(cfg)))?;
            let omegas = if omega.is_empty() { vec![p.omega1, p.omega0] } else { omega.to_vec() };
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for w in omegas {
                let rg = reflect_3ls(&p, AtomState::G, w)?;
                let rs = reflect_3ls(&p, AtomState::S, w)?;
                let mut row = vec![fmt_num(w)];
                row.extend(complex_cells(rg));
                row.extend(complex_cells(rs));
                rows.push(row);
                json_rows.push(json!({"omega": w, "r_g": rg, "r_s": rs}));
            }
            Ok(Output {
                header: vec!["omega", "r_g_re", "r_g_im", "r_s_re", "r_s_im"],
                rows,
                json: Value::Array(json_rows),
            })
        }
        SchemeParams::Memory(_) => Err(Failure::Invalid("bad config: amplitudes needs a 4ls or 3ls config".into())),
    }
}

fn table_output(entries: Vec<(String, Complex64)>) -> Output {
    let rows = entries
        .iter()
        .map(|(k, z)| {
            let [re, im] = complex_cells(*z);
            vec![k.clone(), re, im]
        })
        .collect();
    let json = Value::Object(entries.into_iter().map(|(k, z)| (k, json!([z.re, z.im]))).collect());
    Output {
        header: vec!["entry", "re", "im"],
        rows,
        json,
    }
}

fn truth_table_cmd(cli: &Cli, cfg: Option<&RunConfig>) -> Result<Output, Failure> {
    match select_scheme(cli, cfg)? {
        SchemeParams::FourLevel(p) => {
            check_valid(p.validate_with(&tolerances(cfg)))?;
            let t = truth_table(&p, protocol_options(cli, cfg))?;
            let entries = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (format!("{i}{j}"), t.get(i, j)))
                .collect();
            Ok(table_output(entries))
        }
        SchemeParams::ThreeLevel(p) => {
            check_valid(p.validate_with(&tolerances(cfg)))?;
            let t = three_ls_photon_atom_gate(&p)?;
            let mut entries = Vec::new();
            for i in 0..2 {
                for (name, atom) in [("g", AtomState::G), ("s", AtomState::S)] {
                    entries.push((format!("{i}{name}"), t.get(i, atom)));
                }
            }
            Ok(table_output(entries))
        }
        SchemeParams::Memory(_) => Err(Failure::Invalid("bad config: truth-table needs a 4ls or 3ls config".into())),
    }
}

fn sweep_output(r: SweepResult) -> Output {
    let rows = r
        .rows
        .iter()
        .map(|row| {
            vec![
                fmt_num(row.delta_t),
                row.purcell.to_string(),
                fmt_num(row.fidelity),
                fmt_num(row.leakage),
                fmt_num(row.grid_residual),
            ]
        })
        .collect();
    Output {
        header: vec!["delta_t", "purcell", "fidelity", "leakage", "grid_residual"],
        rows,
        json: serde_json::to_value(&r).expect("sweep serializes"),
    }
}

fn gate_scheme(cli: &Cli, cfg: Option<&RunConfig>) -> Result<GateScheme, Failure> {
    match select_scheme(cli, cfg)? {
        SchemeParams::FourLevel(p) => {
            check_valid(p.validate_with(&tolerances(cfg)))?;
            Ok(GateScheme::FourLevel(p))
        }
        SchemeParams::ThreeLevel(p) => {
            check_valid(p.validate_with(&tolerances(cfg)))?;
            Ok(GateScheme::ThreeLevel(p))
        }
        SchemeParams::Memory(_) => Err(Failure::Invalid("bad config: sweeps need a 4ls or 3ls config".into())),
    }
}

fn memory_demo(cli: &Cli, cfg: Option<&RunConfig>, samples: usize) -> Result<Output, Failure> {
    let mp = match cfg.map(|c| c.system) {
        Some(SchemeParams::Memory(mp)) => mp,
        Some(_) => return Err(Failure::Invalid("bad config: memory-demo needs a memory config".into())),
        None => MemoryParams::symmetric_preset(0.0),
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut inputs = vec![
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(h, 0.0), Complex64::new(h, 0.0)),
        (Complex64::new(h, 0.0), Complex64::new(0.0, h)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    for _ in 0..samples {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        inputs.push((Complex64::new((0.5 * theta).cos(), 0.0), Complex64::from_polar((0.5 * theta).sin(), phi)));
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (alpha, beta) in inputs {
        let (q, c) = store(&mp, alpha, beta)?;
        let (a, b) = retrieve(&mp, q)?;
        let fidelity = (alpha.conj() * a + beta.conj() * b).norm_sqr();
        let mut row = Vec::new();
        for z in [alpha, beta, q.alpha, q.beta, a, b] {
            row.extend(complex_cells(z));
        }
        row.push(fmt_num(c));
        row.push(fmt_num(fidelity));
        rows.push(row);
        json_rows.push(json!({
            "alpha": alpha, "beta": beta,
            "stored": {"s0": q.alpha, "s1": q.beta},
            "c_photon": c,
            "retrieved": {"alpha": a, "beta": b},
            "fidelity": fidelity,
        }));
    }
    Ok(Output {
        header: vec![
            "alpha_re", "alpha_im", "beta_re", "beta_im", "s0_re", "s0_im", "s1_re", "s1_im", "out_alpha_re",
            "out_alpha_im", "out_beta_re", "out_beta_im", "c_photon", "fidelity",
        ],
        rows,
        json: Value::Array(json_rows),
    })
}

fn oracle_check(cli: &Cli, samples: usize) -> Result<Output, Failure> {
    let report = agreement_check(cli.seed, samples)?;
    for f in &report.families {
        eprintln!("{:<28} max deviation {:.3e} over {} samples", f.family, f.max_deviation, f.samples);
    }
    let worst = report.max_deviation();
    if worst.is_nan() || worst > MAX_RESIDUAL {
        return Err(Failure::Internal(anyhow::anyhow!(
            "closed forms disagree with the oracle: max deviation {worst:.3e}"
        )));
    }
    let rows = report
        .families
        .iter()
        .map(|f| vec![f.family.clone(), f.samples.to_string(), fmt_num(f.max_deviation)])
        .collect();
    Ok(Output {
        header: vec!["family", "samples", "max_deviation"],
        rows,
        json: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn solve_conditions(
    cfg: Option<&RunConfig>,
    omega12: f64,
    omega32: f64,
    omega0: f64,
    a: f64,
    gamma: f64,
) -> Result<Output, Failure> {
    let sol = solve_gate_conditions_with(omega12, omega32, omega0, a, gamma, &tolerances(cfg))?;
    let row = vec![
        fmt_num(sol.omega12),
        fmt_num(sol.a),
        fmt_num(sol.omega32),
        fmt_num(sol.omega0),
        sol.n1.to_string(),
        sol.n0.to_string(),
        fmt_num(sol.residuals[0]),
        fmt_num(sol.residuals[1]),
    ];
    Ok(Output {
        header: vec!["omega12", "a", "omega32", "omega0", "n1", "n0", "raman_residual", "qubit_residual"],
        rows: vec![row],
        json: serde_json::to_value(sol).expect("solution serializes"),
    })
}

fn write_output(cli: &Cli, default: Format, out: &Output) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format.unwrap_or(default) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&out.header)?;
            for row in &out.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &out.json)?;
            writeln!(sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let cfg = cfg.as_ref();
    let grid = cfg.map(|c| c.grid).unwrap_or_default();
    let (out, default) = match &cli.command {
        Command::Amplitudes { omega } => (amplitudes(cli, cfg, omega)?, Format::Csv),
        Command::TruthTable => (truth_table_cmd(cli, cfg)?, Format::Json),
        Command::FidelitySweep { delta_t, purcell } => {
            let scheme = gate_scheme(cli, cfg)?;
            let r = fidelity_sweep(&scheme, delta_t, purcell, &grid, protocol_options(cli, cfg))?;
            (sweep_output(r), Format::Csv)
        }
        Command::LeakageSweep { delta_t, purcell } => {
            let p = match gate_scheme(cli, cfg)? {
                GateScheme::FourLevel(p) => p,
                GateScheme::ThreeLevel(_) => {
                    return Err(Failure::Invalid("leakage-sweep supports the 4ls scheme only".into()))
                }
            };
            let r = leakage_sweep_4ls(&p, *delta_t, purcell, &grid, protocol_options(cli, cfg))?;
            (sweep_output(r), Format::Csv)
        }
        Command::MemoryDemo { samples } => (memory_demo(cli, cfg, *samples)?, Format::Csv),
        Command::OracleCheck { samples } => (oracle_check(cli, *samples)?, Format::Csv),
        Command::SolveConditions {
            omega12,
            omega32,
            omega0,
            a,
            gamma,
        } => (solve_conditions(cfg, *omega12, *omega32, *omega0, *a, *gamma)?, Format::Csv),
    };
    write_output(cli, default, &out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.855204361234567), "0.855204361235");
        assert_eq!(fmt_num(10.0), "10");
        assert_eq!(fmt_num(1e-13), "1e-13");
        assert_eq!(fmt_num(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(0.0), "0");
    }
}
