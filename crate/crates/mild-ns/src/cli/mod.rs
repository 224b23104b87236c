//! Batch front door: subcommands consuming JSON run configs and emitting
//! deterministic CSV/JSON/SVG artifacts.
//!
//! Exit codes: 0 success, 2 validation error, 3 numeric-convergence failure
//! (artifacts are still written where possible). Outputs are byte-identical
//! across repeated runs with the same config and seed: CSV carries 17
//! significant digits, JSON uses a stable key order.

pub mod config;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::constants::{eta_table, ConstantsTable};
use crate::error::{Error, Result};
use crate::estimates;
use crate::initial::generate;
use crate::kernels::{
    kernel_grid, pointwise_decay_constant, semigroup_residual, KernelTag, MultiplierSpec,
};
use crate::lorentz::{field_lorentz, LorentzIndex, NormKind};
use crate::regularity::regularity_report;
use crate::solver::{picard_solve, remaining_lifespan_bound, SolveReport};
use config::{KernelSection, RegularitySection, RunConfig};

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub enum Command {
    Constants {
        n: usize,
        rs: Vec<f64>,
        out: PathBuf,
    },
    Norms {
        config: PathBuf,
        overrides: Overrides,
    },
    KernelCheck {
        config: PathBuf,
        overrides: Overrides,
    },
    EstimateCheck {
        config: PathBuf,
        overrides: Overrides,
    },
    Solve {
        config: PathBuf,
        overrides: Overrides,
    },
    RegularityReport {
        config: PathBuf,
        overrides: Overrides,
    },
    BlowupReport {
        config: PathBuf,
        overrides: Overrides,
    },
    Plot {
        csv: PathBuf,
        out: PathBuf,
    },
}

/// Run a command, mapping errors to the documented exit codes.
pub fn execute(cmd: Command) -> i32 {
    match run(cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Run a command; `Ok` carries the exit code (3 for a written-but-divergent
/// solve report).
pub fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Constants { n, rs, out } => {
            let table = eta_table(n, &rs)?;
            fs::create_dir_all(&out)?;
            write_text(&out.join("constants.json"), &constants_json(&table))?;
            Ok(0)
        }
        Command::Norms { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = out_dir(&cfg)?;
            let grid = cfg.grid()?;
            let field = generate(grid, &cfg.initial_data)?;
            let mut rows = Vec::new();
            for idx in cfg.indices()? {
                rows.push(format!(
                    "{},{},{},{}",
                    idx.p().label(),
                    idx.q().label(),
                    kind_label(&idx),
                    fmt_f64(field_lorentz(&field, &idx)?)
                ));
            }
            write_csv(&out.join("norms.csv"), "p,q,kind,value", &rows)?;
            Ok(0)
        }
        Command::KernelCheck { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = out_dir(&cfg)?;
            let section = cfg.kernel.clone().unwrap_or_default();
            let rows = kernel_check_rows(&cfg, &section)?;
            let p_header: Vec<String> = section.ps.iter().map(|p| format!("lp1_{p}")).collect();
            let header = format!(
                "tag,alpha,t,l1_norm,{},decay_constant,semigroup_residual",
                p_header.join(",")
            );
            write_csv(&out.join("kernel_check.csv"), &header, &rows)?;
            Ok(0)
        }
        Command::EstimateCheck { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = out_dir(&cfg)?;
            let grid = cfg.grid()?;
            let n = grid.dimension();
            let mut rs = vec![f64::INFINITY, 2.0 * n as f64];
            for r in cfg.table_rs()? {
                if !rs
                    .iter()
                    .any(|&s| s == r || (s.is_infinite() && r.is_infinite()))
                {
                    rs.push(r);
                }
            }
            let table = eta_table(n, &rs)?;
            let count = cfg.estimates.clone().unwrap_or_default().trajectories;
            let harness = estimates::full_harness_on(
                grid,
                cfg.horizon,
                cfg.time_nodes,
                &table,
                count,
                cfg.seed,
            )?;
            let mut rows: Vec<String> = harness
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{}",
                        r.estimate,
                        r.case,
                        fmt_f64(r.lhs),
                        fmt_f64(r.rhs),
                        fmt_f64(r.ratio())
                    )
                })
                .collect();
            // raw-field inequalities on the same ensemble
            for k in 0..count {
                let mk = |tag: u64| {
                    generate(
                        grid,
                        &crate::initial::InitialData::RandomSolenoidal {
                            seed: cfg.seed.wrapping_add(31 * k as u64 + tag),
                            spectral_slope: -2.0,
                            amplitude: 1.0,
                        },
                    )
                };
                let f = mk(1)?;
                let g = mk(2)?;
                let case = format!("pair{k}");
                for row in estimates::pointwise_inequality_rows(&f, &g, &case)?
                    .iter()
                    .chain(estimates::convolution_rows(&f, &g, &case)?.iter())
                {
                    rows.push(format!(
                        "{},{},{},{},{}",
                        row.estimate,
                        row.case,
                        fmt_f64(row.lhs),
                        fmt_f64(row.rhs),
                        fmt_f64(row.ratio())
                    ));
                }
            }
            write_csv(
                &out.join("estimates.csv"),
                "estimate,case,lhs,rhs,ratio",
                &rows,
            )?;
            Ok(0)
        }
        Command::Solve { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = out_dir(&cfg)?;
            let (report, _table) = solve_from_config(&cfg)?;
            write_solve_artifacts(&out, &cfg, &report)?;
            Ok(if report.converged { 0 } else { 3 })
        }
        Command::RegularityReport { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = out_dir(&cfg)?;
            let (report, _table) = solve_from_config(&cfg)?;
            write_solve_artifacts(&out, &cfg, &report)?;
            if !report.converged {
                return Ok(3);
            }
            let section = cfg.regularity.clone().unwrap_or_default();
            write_regularity_csv(&out, &cfg, &report, &section)?;
            Ok(0)
        }
        Command::BlowupReport { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = out_dir(&cfg)?;
            let (report, table) = solve_from_config(&cfg)?;
            write_solve_artifacts(&out, &cfg, &report)?;
            write_blowup_csv(&out, &cfg, &report, &table)?;
            Ok(if report.converged { 0 } else { 3 })
        }
        Command::Plot { csv, out } => {
            plot_csv(&csv, &out)?;
            Ok(0)
        }
    }
}

fn load(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(out) = &overrides.out {
        cfg.output_dir = out.display().to_string();
    }
    if let Some(strict) = overrides.strict {
        cfg.strict = strict;
    }
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let out = PathBuf::from(&cfg.output_dir);
    fs::create_dir_all(&out)?;
    Ok(out)
}

fn kind_label(idx: &LorentzIndex) -> &'static str {
    match idx.kind() {
        NormKind::Quasinorm => "quasinorm",
        NormKind::Norm => "norm",
    }
}

/// 17 significant digits; infinities spelled out.
fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

fn json_num(v: f64) -> serde_json::Value {
    if v.is_infinite() {
        json!(if v > 0.0 { "inf" } else { "-inf" })
    } else {
        json!(v)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    file.write_all(text.as_bytes())?;
    Ok(())
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    write_text(path, &text)
}

fn constants_json(table: &ConstantsTable) -> String {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            json!({
                "r": json_num(row.r),
                "r_conjugate": json_num(row.r_conjugate),
                "beta": json_num(row.beta),
                "delta": json_num(row.delta),
                "eta": json_num(row.eta),
                "diverged": row.diverged,
            })
        })
        .collect();
    let value = json!({
        "n": table.n,
        "alpha": json_num(table.alpha),
        "gamma": json_num(table.gamma),
        "rows": rows,
        "provenance": {
            "gamma_lattices": table.provenance.gamma_lattices,
            "gamma_consistency": json_num(table.provenance.gamma_consistency),
            "alpha_grid_points": table.provenance.alpha_grid_points,
            "quadrature_rel_tol": json_num(table.provenance.quadrature_rel_tol),
        },
    });
    format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
}

fn kernel_check_rows(cfg: &RunConfig, section: &KernelSection) -> Result<Vec<String>> {
    let grid = cfg.grid()?;
    let mut rows = Vec::new();
    let specs = [
        MultiplierSpec::heat(),
        MultiplierSpec::with_gradient_axis(KernelTag::Heat, 0)?,
        MultiplierSpec::oseen(),
        MultiplierSpec::with_gradient_axis(KernelTag::Oseen, 0)?,
    ];
    for spec in &specs {
        let decay = pointwise_decay_constant(spec, &section.times, grid, cfg.strict)?;
        for (k, &t) in section.times.iter().enumerate() {
            let profile = kernel_grid(spec, t, grid, cfg.strict)?;
            let mut lp1 = Vec::with_capacity(section.ps.len());
            for &p in &section.ps {
                lp1.push(fmt_f64(profile.lorentz_quasinorm_p1(p)?));
            }
            let residual = semigroup_residual(spec, t / 2.0, t / 2.0, grid, cfg.strict)?;
            let alpha_label: String = spec.derivative().iter().map(|d| d.to_string()).collect();
            rows.push(format!(
                "{},{},{},{},{},{},{}",
                match spec.tag() {
                    KernelTag::Heat => "heat",
                    KernelTag::Oseen => "oseen",
                },
                if alpha_label.is_empty() {
                    "0".into()
                } else {
                    alpha_label
                },
                fmt_f64(t),
                fmt_f64(profile.l1_norm()),
                lp1.join(","),
                fmt_f64(decay.per_time[k]),
                fmt_f64(residual)
            ));
        }
    }
    Ok(rows)
}

fn solve_from_config(cfg: &RunConfig) -> Result<(SolveReport, ConstantsTable)> {
    let grid = cfg.grid()?;
    let table = eta_table(grid.dimension(), &cfg.table_rs()?)?;
    let field = generate(grid, &cfg.initial_data)?;
    let solve_cfg = cfg.solve_config()?;
    let report = picard_solve(&field, &solve_cfg, &table)?;
    Ok((report, table))
}

fn threshold_label(r: f64) -> String {
    if r.is_infinite() {
        "inf".into()
    } else {
        format!("{r}")
    }
}

fn write_solve_artifacts(out: &Path, cfg: &RunConfig, report: &SolveReport) -> Result<()> {
    let indices = cfg.indices()?;
    let solve_cfg = cfg.solve_config()?;
    let mut header = String::from("t");
    for idx in &indices {
        header.push_str(&format!(",lorentz_{}_{}", idx.p().label(), idx.q().label()));
    }
    header.push_str(",sup_norm");
    for &r in &solve_cfg.threshold_rs {
        header.push_str(&format!(",blowup_threshold_{}", threshold_label(r)));
    }
    let mut rows = Vec::with_capacity(report.trajectory.len());
    for (j, &t) in report.trajectory.times().iter().enumerate() {
        let mut row = fmt_f64(t);
        for value in &report.norm_records[j] {
            row.push(',');
            row.push_str(&fmt_f64(*value));
        }
        row.push(',');
        row.push_str(&fmt_f64(report.sup_norms[j]));
        for value in &report.thresholds[j] {
            row.push(',');
            row.push_str(&fmt_f64(*value));
        }
        rows.push(row);
    }
    write_csv(&out.join("norms.csv"), &header, &rows)?;

    let summary = json!({
        "g0": json_num(report.g0),
        "lambda": report.lambda.map(json_num).unwrap_or(serde_json::Value::Null),
        "iterations": report.iterations,
        "converged": report.converged,
        "existence_horizon": json_num(report.existence_horizon),
        "residual": json_num(report.residual),
    });
    write_text(
        &out.join("summary.json"),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&summary).expect("json")
        ),
    )?;
    Ok(())
}

fn write_regularity_csv(
    out: &Path,
    cfg: &RunConfig,
    report: &SolveReport,
    section: &RegularitySection,
) -> Result<()> {
    let indices = cfg.indices()?;
    let grid = cfg.grid()?;
    let radius_cap = section.radius_cap.unwrap_or(grid.box_length() / 8.0);
    let reg = regularity_report(&report.trajectory, &section.alphas, radius_cap, &indices)?;
    let mut header = String::from("t,alpha,quotient,bracket,ratio");
    for idx in &indices {
        header.push_str(&format!(",gap_{}_{}", idx.p().label(), idx.q().label()));
    }
    let mut rows = Vec::new();
    for series in &reg.holder {
        for &(t_idx, quotient, bracket, ratio) in &series.rows {
            let mut row = format!(
                "{},{},{},{},{}",
                fmt_f64(report.trajectory.times()[t_idx]),
                fmt_f64(series.alpha),
                fmt_f64(quotient),
                fmt_f64(bracket),
                fmt_f64(ratio)
            );
            for (_, gaps) in &reg.continuity {
                row.push(',');
                row.push_str(&fmt_f64(gaps[t_idx - 1]));
            }
            rows.push(row);
        }
    }
    write_csv(&out.join("regularity.csv"), &header, &rows)
}

fn write_blowup_csv(
    out: &Path,
    cfg: &RunConfig,
    report: &SolveReport,
    table: &ConstantsTable,
) -> Result<()> {
    let solve_cfg = cfg.solve_config()?;
    let n = cfg.dimension;
    let mut rows = Vec::new();
    for (j, &t) in report.trajectory.times().iter().enumerate() {
        for (k, &r) in solve_cfg.threshold_rs.iter().enumerate() {
            let weak = report.weak_norms[j][k];
            let threshold = report.thresholds[j][k];
            let margin = threshold - weak;
            let lifespan = remaining_lifespan_bound(weak, n, r, table)?;
            rows.push(format!(
                "{},{},{},{},{},{}",
                fmt_f64(t),
                threshold_label(r),
                fmt_f64(weak),
                fmt_f64(threshold),
                fmt_f64(margin),
                fmt_f64(lifespan)
            ));
        }
    }
    write_csv(
        &out.join("blowup.csv"),
        "t,r,weak_norm,threshold,margin,lifespan_bound",
        &rows,
    )
}

/// Parse a norms.csv and emit one SVG per norm column, overlaying the
/// blowup-threshold curves when present.
fn plot_csv(csv_path: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(csv_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", csv_path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty CSV".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.first() != Some(&"t") {
        return Err(Error::Config(format!(
            "malformed CSV: first column must be t, got {:?}",
            columns.first()
        )));
    }
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(Error::Config(format!(
                "malformed CSV: row {} has {} cells, header has {}",
                lineno + 2,
                cells.len(),
                columns.len()
            )));
        }
        for (slot, cell) in data.iter_mut().zip(&cells) {
            let value = match *cell {
                "inf" => f64::INFINITY,
                "-inf" => f64::NEG_INFINITY,
                other => other
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("malformed CSV cell {other:?}: {e}")))?,
            };
            slot.push(value);
        }
    }
    fs::create_dir_all(out)?;
    let t = &data[0];
    let thresholds: Vec<(usize, &str)> = columns
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, name)| name.starts_with("blowup_threshold_"))
        .map(|(i, name)| (i, *name))
        .collect();
    for (i, name) in columns.iter().enumerate().skip(1) {
        if name.starts_with("blowup_threshold_") {
            continue;
        }
        let mut series = vec![svg::Series {
            label: name.to_string(),
            points: t.iter().copied().zip(data[i].iter().copied()).collect(),
            overlay: false,
        }];
        for (k, threshold_name) in &thresholds {
            series.push(svg::Series {
                label: threshold_name.to_string(),
                points: t.iter().copied().zip(data[*k].iter().copied()).collect(),
                overlay: true,
            });
        }
        let svg_text = svg::line_plot(name, &series);
        write_text(&out.join(format!("{name}.svg")), &svg_text)?;
    }
    Ok(())
}
