//! `zrp`: command-line front end for the zero-range-process laboratory.
//! Every command prints its result (JSON or CSV) to stdout or writes it
//! to `--out`, and serializes a run manifest with parameters, version,
//! and output checksums alongside.

mod dense;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use zrp_core::{
    capacity, cardinality, discrete_i_alpha, enumerate, i_alpha, limit_capacity_prediction,
    limit_constants, partition_wells, run, separation_report, stationarity_check,
    trace_mean_rates, trace_statistics, CapacityReport, ChiSquareReport, Error, Initial,
    Operators, SimConfig, StateSpace, WellPartition,
};

use manifest::emit;

#[derive(Parser)]
#[command(name = "zrp", version, about = "Condensate dynamics of the totally asymmetric zero-range process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Limiting constants of the condensate walk for one alpha
    Constants {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity between the wells of a site set and its complement
    Capacity {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        alpha: f64,
        /// Well width; defaults to the growth rule floor(N^min(1/2, gamma/2))
        #[arg(long = "ellN")]
        ell: Option<u32>,
        /// Comma-separated torus sites
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<usize>,
        /// Cross-check against an independently assembled dense solve
        #[arg(long = "dense-oracle")]
        dense_oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence table of scaled capacities over a list of N
    Sweep {
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        alpha: f64,
        /// "sqrt", "pow:<gamma>", "const:<k>", or "default"
        #[arg(long = "ellN-rule", default_value = "default")]
        ell_rule: String,
        #[arg(long = "N-list", value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
        #[arg(long = "A", value_delimiter = ',', default_value = "0")]
        a: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace-process mean rates and well-separation diagnostics
    Trace {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "ellN")]
        ell: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Event-driven simulation replicas with trace statistics
    Simulate {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "ellN")]
        ell: Option<u32>,
        #[arg(long)]
        seed: u64,
        /// Unscaled process time per replica
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        /// Write the first replica's well-visit segments as CSV
        #[arg(long = "traj-csv")]
        traj_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Default well width: `floor(N^min(1/2, gamma/2))` with
/// `gamma = (1 + alpha) / (1 + alpha (L - 1))`.
fn default_ell(l: usize, n: u32, alpha: f64) -> u32 {
    let gamma = (1.0 + alpha) / (1.0 + alpha * (l as f64 - 1.0));
    let exponent = 0.5f64.min(gamma / 2.0);
    ((n as f64).powf(exponent).floor() as u32).max(1)
}

fn ell_from_rule(rule: &str, l: usize, n: u32, alpha: f64) -> Result<u32, Error> {
    if rule == "sqrt" {
        return Ok(((n as f64).sqrt().floor() as u32).max(1));
    }
    if rule == "default" {
        return Ok(default_ell(l, n, alpha));
    }
    if let Some(g) = rule.strip_prefix("pow:") {
        let g: f64 = g
            .parse()
            .map_err(|_| Error::domain(format!("bad exponent in ell rule '{rule}'")))?;
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::domain("ell rule exponent must be in (0, 1)"));
        }
        return Ok(((n as f64).powf(g).floor() as u32).max(1));
    }
    if let Some(k) = rule.strip_prefix("const:") {
        return k
            .parse()
            .map_err(|_| Error::domain(format!("bad constant in ell rule '{rule}'")));
    }
    Err(Error::domain(format!(
        "unknown ell rule '{rule}' (expected sqrt, pow:<gamma>, const:<k>, default)"
    )))
}

fn scale(n: u32, alpha: f64) -> f64 {
    (n as f64).powf(1.0 + alpha)
}

fn well_sets(
    l: usize,
    wells: &WellPartition,
    a: &[usize],
) -> Result<(Vec<usize>, Vec<usize>), Error> {
    let mut sites: Vec<usize> = a.to_vec();
    sites.sort_unstable();
    sites.dedup();
    if sites.iter().any(|&x| x >= l) || sites.is_empty() || sites.len() >= l {
        return Err(Error::domain(
            "A must be a nonempty proper subset of the torus sites",
        ));
    }
    let complement: Vec<usize> = (0..l).filter(|x| !sites.contains(x)).collect();
    Ok((wells.union(&sites), wells.union(&complement)))
}

fn cmd_constants(alpha: f64) -> Result<String, Error> {
    let i = i_alpha(alpha)?;
    let body = match limit_constants(alpha) {
        Ok(c) => serde_json::to_string_pretty(&c).unwrap(),
        Err(e) => serde_json::to_string_pretty(&json!({
            "alpha": alpha,
            "gamma_alpha": null,
            "i_alpha": i,
            "hop_rate": null,
            "note": e.to_string(),
        }))
        .unwrap(),
    };
    Ok(body)
}

#[derive(Serialize)]
struct CapacityOutput {
    report: CapacityReport,
    scaled_cap: f64,
    scaled_cap_sym: f64,
    prediction: Option<f64>,
    ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
struct OracleCheck {
    cap: f64,
    rel_error: f64,
}

fn cmd_capacity(
    l: usize,
    n: u32,
    alpha: f64,
    ell: Option<u32>,
    a: &[usize],
    dense_oracle: bool,
) -> Result<String, Error> {
    let space = enumerate(l, n, alpha)?;
    let ell = ell.unwrap_or_else(|| default_ell(l, n, alpha));
    let wells = partition_wells(&space, ell)?;
    let (set_a, set_b) = well_sets(l, &wells, a)?;
    let ops = Operators::build(&space);
    let mut report = capacity(&space, &ops, &set_a, &set_b)?;
    report.ell = Some(ell);
    let s = scale(n, alpha);
    let prediction = limit_capacity_prediction(l, alpha, a).ok();
    let oracle = if dense_oracle {
        if space.len() > 3000 {
            return Err(Error::domain(
                "dense oracle limited to state spaces of at most 3000 configurations",
            ));
        }
        let cap = dense::dense_capacity(&space, &set_a, &set_b);
        Some(OracleCheck {
            cap,
            rel_error: (report.cap - cap).abs() / cap,
        })
    } else {
        None
    };
    let out = CapacityOutput {
        scaled_cap: s * report.cap,
        scaled_cap_sym: s * report.cap_sym,
        ratio: prediction.map(|p| s * report.cap / p),
        prediction,
        oracle,
        report,
    };
    Ok(serde_json::to_string_pretty(&out).unwrap())
}

struct SweepRow {
    n: u32,
    ell: u32,
    result: Result<(f64, f64, f64), Error>, // scaled cap, scaled cap_sym, discrete i_alpha
}

fn cmd_sweep(
    l: usize,
    alpha: f64,
    ell_rule: &str,
    n_list: &[u32],
    a: &[usize],
) -> Result<String, Error> {
    if n_list.is_empty() {
        return Err(Error::domain("empty N list"));
    }
    let prediction = limit_capacity_prediction(l, alpha, a)?;
    let ia = i_alpha(alpha)?;
    let rows: Vec<SweepRow> = n_list
        .par_iter()
        .map(|&n| {
            let ell = match ell_from_rule(ell_rule, l, n, alpha) {
                Ok(e) => e,
                Err(err) => {
                    return SweepRow {
                        n,
                        ell: 0,
                        result: Err(err),
                    }
                }
            };
            let result = (|| {
                let space = enumerate(l, n, alpha)?;
                let wells = partition_wells(&space, ell)?;
                let (set_a, set_b) = well_sets(l, &wells, a)?;
                let ops = Operators::build(&space);
                let rep = capacity(&space, &ops, &set_a, &set_b)?;
                let s = scale(n, alpha);
                Ok((s * rep.cap, s * rep.cap_sym, discrete_i_alpha(n, alpha)?))
            })();
            SweepRow { n, ell, result }
        })
        .collect();

    let mut csv = String::from(
        "N,ellN,scaled_cap,scaled_cap_sym,prediction,ratio,ratio_sym,discrete_ialpha,status\n",
    );
    let mut sym_values = Vec::new();
    let mut ia_errors = Vec::new();
    for row in &rows {
        match &row.result {
            Ok((cap, cap_sym, di)) => {
                csv.push_str(&format!(
                    "{},{},{:.12e},{:.12e},{:.12e},{:.8},{:.8},{:.12e},ok\n",
                    row.n,
                    row.ell,
                    cap,
                    cap_sym,
                    prediction,
                    cap / prediction,
                    cap_sym / prediction,
                    di
                ));
                sym_values.push(*cap_sym);
                ia_errors.push((di - ia).abs());
            }
            Err(e) => {
                csv.push_str(&format!(
                    "{},{},,,{prediction:.12e},,,,error: {e}\n",
                    row.n, row.ell
                ));
            }
        }
    }
    let monotone = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0]);
    csv.push_str(&format!(
        "# summary: rows_ok={} ialpha_error_decreasing={} sym_gap_decreasing={}\n",
        sym_values.len(),
        monotone(&ia_errors),
        monotone(
            &sym_values
                .iter()
                .map(|v| (v / prediction - 1.0).abs())
                .collect::<Vec<_>>()
        ),
    ));
    Ok(csv)
}

fn cmd_trace(l: usize, n: u32, alpha: f64, ell: Option<u32>) -> Result<String, Error> {
    let space = enumerate(l, n, alpha)?;
    let ell = ell.unwrap_or_else(|| default_ell(l, n, alpha));
    let wells = partition_wells(&space, ell)?;
    let ops = Operators::build(&space);
    let table = trace_mean_rates(&space, &ops.forward, &wells)?;
    let separation = separation_report(&space, &ops, &wells, &table)?;

    // exit-rate / capacity identity, through the independent capacity path
    let mut identity_rel_error: f64 = 0.0;
    for y in 0..l {
        let rest = wells.complement_wells(y);
        let rep = capacity(&space, &ops, &wells.wells[y], &rest)?;
        let lhs = table.exit_rates[y] * table.well_masses[y];
        identity_rel_error = identity_rel_error.max((lhs - rep.cap).abs() / rep.cap);
    }
    let hop = limit_constants(alpha).ok().map(|c| c.hop_rate);
    let s = scale(n, alpha);
    let scaled_over_hop: Option<Vec<Vec<f64>>> = hop.map(|h| {
        table
            .rates
            .iter()
            .map(|row| row.iter().map(|r| r * s / h).collect())
            .collect()
    });
    let body = json!({
        "table": table,
        "separation": separation,
        "rotation_defect": table.rotation_defect(),
        "rotation_invariant": table.rotation_defect() < 1e-10,
        "identity_rel_error": identity_rel_error,
        "identity_ok": identity_rel_error < 1e-8,
        "scaled_rate_over_hop_rate": scaled_over_hop,
    });
    Ok(serde_json::to_string_pretty(&body).unwrap())
}

#[derive(Serialize)]
struct ReplicaSummary {
    seed: u64,
    events: u64,
    transitions: u64,
    delta_fraction: f64,
    mean_holding_rescaled: Option<f64>,
}

fn cmd_simulate(
    l: usize,
    n: u32,
    alpha: f64,
    ell: Option<u32>,
    seed: u64,
    tmax: f64,
    replicas: usize,
    traj_csv: Option<&PathBuf>,
) -> Result<(String, Vec<(PathBuf, Vec<u8>)>), Error> {
    if replicas == 0 {
        return Err(Error::domain("need at least one replica"));
    }
    let ell = ell.unwrap_or_else(|| default_ell(l, n, alpha));
    let cfgs: Vec<SimConfig> = (0..replicas)
        .map(|r| SimConfig {
            l,
            n,
            alpha,
            ell,
            seed: seed.wrapping_add(r as u64),
            t_max: tmax,
            initial: Initial::Well(0),
        })
        .collect();
    cfgs[0].validate()?;
    let results: Vec<_> = cfgs
        .par_iter()
        .map(|cfg| run(cfg).map(|t| {
            let stats = trace_statistics(&t, cfg.scale());
            (t, stats)
        }))
        .collect::<Result<_, _>>()?;

    let s = scale(n, alpha);
    let mut pooled_displacements = vec![0u64; l];
    let mut pooled_holdings = Vec::new();
    let mut delta_time = 0.0;
    let mut total_time = 0.0;
    let mut summaries = Vec::new();
    for (cfg, (traj, stats)) in cfgs.iter().zip(&results) {
        for (d, c) in stats.displacement_counts.iter().enumerate() {
            pooled_displacements[d] += c;
        }
        pooled_holdings.extend_from_slice(&stats.holding_times);
        delta_time += traj.delta_time;
        total_time += traj.total_time;
        summaries.push(ReplicaSummary {
            seed: cfg.seed,
            events: traj.events,
            transitions: stats.transitions,
            delta_fraction: stats.delta_fraction,
            mean_holding_rescaled: mean(&stats.holding_times),
        });
    }

    let stationarity: Option<ChiSquareReport> = if cardinality(l, n) <= 20_000 {
        let space: StateSpace = enumerate(l, n, alpha)?;
        stationarity_check(&space, &cfgs[0], 200_000, 1_500).ok()
    } else {
        None
    };

    let body = serde_json::to_string_pretty(&json!({
        "L": l, "N": n, "alpha": alpha, "ellN": ell,
        "scale": s,
        "replicas": summaries,
        "pooled": {
            "transitions": pooled_displacements.iter().sum::<u64>(),
            "displacement_counts": pooled_displacements,
            "mean_holding_rescaled": mean(&pooled_holdings),
            "delta_fraction": delta_time / total_time,
        },
        "stationarity": stationarity,
    }))
    .unwrap();

    let mut extra = Vec::new();
    if let Some(path) = traj_csv {
        let mut buf = Vec::new();
        results[0]
            .0
            .write_csv(&mut buf)
            .map_err(|e| Error::domain(format!("trajectory CSV: {e}")))?;
        extra.push((path.clone(), buf));
    }
    Ok((body, extra))
}

fn mean(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        None
    } else {
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Constants { alpha, out } => {
            let body = cmd_constants(alpha)?;
            emit("constants", json!({ "alpha": alpha }), None, &body, out.as_deref(), &[])
        }
        Command::Capacity {
            l,
            n,
            alpha,
            ell,
            a,
            dense_oracle,
            out,
        } => {
            let body = cmd_capacity(l, n, alpha, ell, &a, dense_oracle)?;
            emit(
                "capacity",
                json!({"L": l, "N": n, "alpha": alpha, "ellN": ell, "A": a, "dense_oracle": dense_oracle}),
                None,
                &body,
                out.as_deref(),
                &[],
            )
        }
        Command::Sweep {
            l,
            alpha,
            ell_rule,
            n_list,
            a,
            out,
        } => {
            let body = cmd_sweep(l, alpha, &ell_rule, &n_list, &a)?;
            emit(
                "sweep",
                json!({"L": l, "alpha": alpha, "ellN_rule": ell_rule, "N_list": n_list, "A": a}),
                None,
                &body,
                out.as_deref(),
                &[],
            )
        }
        Command::Trace { l, n, alpha, ell, out } => {
            let body = cmd_trace(l, n, alpha, ell)?;
            emit(
                "trace",
                json!({"L": l, "N": n, "alpha": alpha, "ellN": ell}),
                None,
                &body,
                out.as_deref(),
                &[],
            )
        }
        Command::Simulate {
            l,
            n,
            alpha,
            ell,
            seed,
            tmax,
            replicas,
            traj_csv,
            out,
        } => {
            let (body, extra) =
                cmd_simulate(l, n, alpha, ell, seed, tmax, replicas, traj_csv.as_ref())?;
            emit(
                "simulate",
                json!({"L": l, "N": n, "alpha": alpha, "ellN": ell, "seed": seed, "tmax": tmax, "replicas": replicas}),
                Some(seed),
                &body,
                out.as_deref(),
                &extra,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SizeCap { .. } => ExitCode::from(3),
                Error::Domain(_) | Error::Dimension { .. } => ExitCode::from(2),
                Error::Solver(_) => ExitCode::FAILURE,
            }
        }
    }
}
