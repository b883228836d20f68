use std::fs;
use std::io::Write;
use std::path::Path;

use nmim::analysis::{min_gap, GapReport};
use nmim::coding::{
    baseline_equal, baseline_proportional, cap_and_iterate, importance_loss, AllocationProblem,
    ErrorModel,
};
use nmim::sources::{
    normal_discrete, rayleigh_discrete, storage_example, zipf, DEFAULT_ZIPF_EXPONENT,
};
use nmim::transmission::{delta, plan_max_transmission, psi, rmim, BscChannel};
use nmim::{nmim, Distribution};
use serde::Serialize;

use crate::args::{Cli, Command, ModelChoice};
use crate::grid::{parse_counts, parse_floats};
use crate::table::{Cell, Table};
use crate::{source, CliError, Result};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute { source, out } => {
            let d = source::load(&source)?;
            let mut text = serde_json::to_string_pretty(&compute(&d))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())
        }
        Command::Allocate {
            source,
            k,
            l,
            model,
            gamma,
            out,
        } => {
            let d = source::load(&source)?;
            let ks = parse_counts(&k)?;
            let models = match model {
                ModelChoice::Reciprocal => vec![ErrorModel::Reciprocal],
                ModelChoice::Exponent => vec![ErrorModel::Exponent],
                ModelChoice::Both => vec![ErrorModel::Reciprocal, ErrorModel::Exponent],
            };
            if l == 0 {
                return Err(CliError::Validation("--l must be >= 1".into()));
            }
            if models.contains(&ErrorModel::Exponent) && gamma < 2 {
                return Err(CliError::Validation("--gamma must be >= 2".into()));
            }
            let table = allocate(&d, &ks, l, gamma, &models);
            write_table(out.as_deref(), &table, "allocate")?;
            // every row is still written; the status only flags a sweep with
            // no feasible budget at all
            if table.all_failed() {
                return Err(CliError::Infeasible(
                    "no budget in the sweep is feasible".into(),
                ));
            }
            Ok(())
        }
        Command::Bsc { p, eps, out } => {
            let table = bsc(&parse_floats(&p)?, eps)?;
            write_table(out.as_deref(), &table, "bsc")
        }
        Command::Distortion { p, d, out } => {
            let table = distortion(&parse_floats(&p)?, &parse_floats(&d)?);
            write_table(out.as_deref(), &table, "distortion")
        }
        Command::Plan { c, t, delta, out } => {
            let table = plan(&parse_floats(&c)?, t, &parse_floats(&delta)?);
            write_table(out.as_deref(), &table, "plan")
        }
        Command::Figures { out } => figures(&out),
    }
}

#[derive(Debug, Serialize)]
pub struct ComputeReport {
    pub probs: Vec<f64>,
    pub n: usize,
    /// Natural log of the mean importance.
    pub nmim: f64,
    /// `ln p_i + (1 − p_i)/p_i` per event.
    pub event_importance: Vec<f64>,
    pub gap: Option<GapReport>,
    /// Why `gap` is missing, if it is.
    pub gap_note: Option<String>,
}

pub fn compute(d: &Distribution) -> ComputeReport {
    let (gap, gap_note) = match min_gap(d) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ComputeReport {
        probs: d.probs().to_vec(),
        n: d.len(),
        nmim: nmim(d).log_value(),
        event_importance: d.log_importances(),
        gap,
        gap_note,
    }
}

const ALLOCATE_HEADER: [&str; 12] = [
    "model",
    "k",
    "l",
    "gamma",
    "scheme",
    "status",
    "lengths",
    "realized_total",
    "importance_loss",
    "avg_length",
    "compression_ratio",
    "iterations",
];

/// One row per model, K and scheme (NMIM, Code1, Code2). Budgets above `L`
/// are capped event by event; budgets no length vector can meet are reported
/// as infeasible rows.
pub fn allocate(
    d: &Distribution,
    ks: &[usize],
    cap: usize,
    gamma: u32,
    models: &[ErrorModel],
) -> Table {
    let mut table = Table::new(&ALLOCATE_HEADER);
    let n = d.len();
    for &model in models {
        for &k in ks {
            let inputs = |scheme: &str, status: &str| {
                vec![
                    Cell::from(model.name()),
                    Cell::Int(k),
                    Cell::Int(cap),
                    Cell::Int(gamma as usize),
                    Cell::from(scheme),
                    Cell::from(status),
                ]
            };
            let nmim_result = AllocationProblem::new(d.clone(), k, cap, gamma, model)
                .and_then(|p| cap_and_iterate(&p));
            match nmim_result {
                Ok(r) => {
                    let mut row = inputs("nmim", "ok");
                    row.extend(allocation_cells(
                        &r.lengths,
                        r.importance_loss,
                        r.avg_length,
                        cap,
                    ));
                    row.push(Cell::Int(r.iterations));
                    table.push(row);
                }
                Err(e) => {
                    let status = if e.is_infeasibility() {
                        "infeasible"
                    } else {
                        "invalid"
                    };
                    table.push_failed(
                        inputs("nmim", status),
                        format!("{} K={k} nmim: {e}", model.name()),
                    );
                }
            }
            for (scheme, lengths) in [
                ("code1", baseline_equal(d, k)),
                ("code2", baseline_proportional(d, k)),
            ] {
                let outcome = if k > n.saturating_mul(cap) {
                    Err(format!("K = {k} exceeds n·L = {}", n * cap))
                } else {
                    lengths.map_err(|e| e.to_string()).and_then(|l| {
                        let l: Vec<usize> = l.into_iter().map(|x| x.min(cap)).collect();
                        importance_loss(d, &l, model, gamma)
                            .map(|loss| (l, loss))
                            .map_err(|e| e.to_string())
                    })
                };
                match outcome {
                    Ok((l, loss)) => {
                        let mut row = inputs(scheme, "ok");
                        row.extend(allocation_cells(&l, loss, avg_length(d, &l), cap));
                        row.push(Cell::Empty);
                        table.push(row);
                    }
                    Err(e) => table.push_failed(
                        inputs(scheme, "infeasible"),
                        format!("{} K={k} {scheme}: {e}", model.name()),
                    ),
                }
            }
        }
    }
    table
}

fn avg_length(d: &Distribution, lengths: &[usize]) -> f64 {
    d.probs()
        .iter()
        .zip(lengths)
        .map(|(p, &l)| p * l as f64)
        .sum()
}

fn allocation_cells(lengths: &[usize], loss: f64, avg: f64, cap: usize) -> Vec<Cell> {
    let joined = lengths
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(";");
    vec![
        Cell::Text(joined),
        Cell::Int(lengths.iter().sum()),
        Cell::Float(loss),
        Cell::Float(avg),
        Cell::Float(avg / cap as f64),
    ]
}

pub fn bsc(ps: &[f64], eps: f64) -> Result<Table> {
    let channel = BscChannel::new(eps)?;
    let mut table = Table::new(&[
        "p",
        "epsilon",
        "output_p",
        "exact",
        "coarse",
        "fine",
        "lower_bound",
        "upper_bound",
    ]);
    for &p in ps {
        match psi(p, &channel) {
            Ok(r) => table.push(vec![
                p.into(),
                eps.into(),
                r.output_p.into(),
                r.exact.into(),
                r.coarse.into(),
                r.fine.into(),
                r.lower_bound.into(),
                r.upper_bound.into(),
            ]),
            Err(e) => table.push_failed(vec![p.into(), eps.into()], format!("p={p}: {e}")),
        }
    }
    Ok(table)
}

pub fn distortion(ps: &[f64], ds: &[f64]) -> Table {
    let mut table = Table::new(&["p", "distortion", "loss", "delta_p"]);
    for &p in ps {
        let plateau = delta(p);
        for &d in ds {
            let row = plateau
                .clone()
                .and_then(|dp| rmim(p, d).map(|loss| (loss, dp)));
            match row {
                Ok((loss, dp)) => table.push(vec![p.into(), d.into(), loss.into(), dp.into()]),
                Err(e) => table.push_failed(vec![p.into(), d.into()], format!("p={p} D={d}: {e}")),
            }
        }
    }
    table
}

pub fn plan(cs: &[f64], t: f64, deltas: &[f64]) -> Table {
    let mut table = Table::new(&[
        "delta",
        "capacity",
        "time",
        "p0",
        "delta_p0",
        "distortion",
        "received_p",
        "regime",
        "max_entropy",
    ]);
    for &c in cs {
        for &dl in deltas {
            match plan_max_transmission(dl, c, t) {
                Ok(r) => table.push(vec![
                    dl.into(),
                    c.into(),
                    t.into(),
                    r.p0.into(),
                    r.delta_p0.into(),
                    r.distortion.into(),
                    r.received_p.into(),
                    r.regime.name().into(),
                    r.max_entropy.into(),
                ]),
                Err(e) => table.push_failed(
                    vec![dl.into(), c.into(), t.into()],
                    format!("delta={dl} C={c}: {e}"),
                ),
            }
        }
    }
    table
}

/// Gap between NMIM and the rarest event's importance for the generated
/// families at `n = 5..=20`.
pub fn gap_table() -> Table {
    let mut table = Table::new(&[
        "family",
        "n",
        "nmim",
        "l_pmin",
        "gap",
        "p_min",
        "p_smin",
        "condition_i",
        "condition_ii",
    ]);
    let families: [(&str, Generator); 3] = [
        ("zipf", |n| zipf(n, DEFAULT_ZIPF_EXPONENT)),
        ("normal", normal_discrete),
        ("rayleigh", rayleigh_discrete),
    ];
    for (name, make) in families {
        for n in 5..=20 {
            match make(n).and_then(|d| min_gap(&d)) {
                Ok(r) => table.push(vec![
                    name.into(),
                    n.into(),
                    r.nmim_total.log_value().into(),
                    r.l_pmin.log_value().into(),
                    r.gap.into(),
                    r.p_min.into(),
                    r.p_smin.into(),
                    bool_cell(r.condition_i),
                    bool_cell(r.condition_ii),
                ]),
                Err(e) => {
                    table.push_failed(vec![name.into(), n.into()], format!("{name} n={n}: {e}"))
                }
            }
        }
    }
    table
}

type Generator = fn(usize) -> nmim::Result<Distribution>;

fn bool_cell(b: bool) -> Cell {
    Cell::from(if b { "true" } else { "false" })
}

fn figures(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let models = [ErrorModel::Reciprocal, ErrorModel::Exponent];
    let ks = parse_counts("10:200:10")?;
    let outputs = [
        ("gap.csv", gap_table()),
        (
            "allocation.csv",
            allocate(&storage_example(), &ks, 100, 2, &models),
        ),
        ("bsc.csv", bsc(&parse_floats("0.05:0.5:0.01")?, 0.01)?),
        (
            "distortion.csv",
            distortion(
                &parse_floats("0.1,0.15,0.2,0.25")?,
                &parse_floats("0:0.6:0.005")?,
            ),
        ),
        (
            "plan.csv",
            plan(
                &parse_floats("0.2,0.4,0.6,0.8")?,
                1.0,
                &parse_floats("0:8:0.01")?,
            ),
        ),
    ];
    for (name, table) in &outputs {
        write_table(Some(&dir.join(name)), table, name)?;
    }
    Ok(())
}

fn write_table(out: Option<&Path>, table: &Table, what: &str) -> Result<()> {
    let mut buf = Vec::new();
    table
        .write(&mut buf)
        .map_err(|e| CliError::io(out.unwrap_or(Path::new("<stdout>")), e))?;
    emit(out, &buf)?;
    table.report_warnings(what);
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}
