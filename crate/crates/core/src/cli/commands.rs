use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::assort::{assortativity_profile, write_leave_one_out_csv, write_profile_csv, ProfileEntry};
use crate::centrality::{extended_pagerank, top_k, weighted_hits, AuxiliaryVector, PageRankConfig, RankTable, ScoreVector};
use crate::community::{ami_matrix, greedy_communities, triangle_matrix, AmiMatrix, Partition};
use crate::error::{Error, Result};
use crate::iot::{parse_iot, to_network, validate_balance, IOTable, ParseOptions};
use crate::network::IONetwork;
use crate::report::{fmt_num, to_json_bytes, write_file};

use super::config::{Measure, OutputFormat, RunConfig};
use super::inputs::{discover, table_format, TableRef};
use super::{Job, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

/// Collects per-table problems so a batch reports everything at once.
struct Status {
    code: i32,
}

impl Status {
    fn new() -> Self {
        Status { code: EXIT_OK }
    }

    fn input_error(&mut self, what: &str, e: &Error) {
        eprintln!("error: {what}: {e}");
        self.code = self.code.max(EXIT_USAGE);
    }

    fn failure(&mut self, what: &str, e: &Error) {
        eprintln!("error: {what}: {e}");
        self.code = self.code.max(EXIT_FAILURE);
    }
}

pub(crate) fn execute(cfg: &RunConfig, job: Job) -> i32 {
    let result = match job {
        Job::Ami => run_ami(cfg),
        Job::Compare { series_a, series_b } => run_compare(cfg, series_a, series_b),
        Job::Validate => run_tables(cfg, |cfg, t, table, st| validate(cfg, t, table, st)),
        Job::Strengths => run_measures(cfg, &[Measure::Strengths]),
        Job::Assort => run_measures(cfg, &[Measure::Assort]),
        Job::Pagerank => run_measures(cfg, &[Measure::Pagerank]),
        Job::Hits => run_measures(cfg, &[Measure::Hits]),
        Job::Communities => run_measures(cfg, &[Measure::Communities]),
        Job::Analyze => {
            let mut m = cfg.measures.clone();
            m.sort();
            m.dedup();
            run_measures(cfg, &m)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NoSuchInput(_) | Error::Parameter(_) | Error::Format(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn parse_options(cfg: &RunConfig) -> ParseOptions {
    ParseOptions {
        strict_registry: cfg.strict_registry,
    }
}

fn load_table(cfg: &RunConfig, path: &Path) -> Result<IOTable> {
    parse_iot(path, table_format(path)?, parse_options(cfg))
}

fn run_tables<F>(cfg: &RunConfig, mut each: F) -> Result<i32>
where
    F: FnMut(&RunConfig, &TableRef, &IOTable, &mut Status),
{
    let paths = discover(&cfg.inputs, &["csv", "json"])?;
    if paths.is_empty() {
        return Err(Error::Parameter("no input tables found".into()));
    }
    let mut status = Status::new();
    for path in paths {
        let t = TableRef::from_path(&path);
        match load_table(cfg, &path) {
            Ok(table) => each(cfg, &t, &table, &mut status),
            Err(e) => status.input_error(&path.display().to_string(), &e),
        }
    }
    Ok(status.code)
}

fn run_measures(cfg: &RunConfig, measures: &[Measure]) -> Result<i32> {
    run_tables(cfg, |cfg, t, table, status| {
        let g = match to_network(table) {
            Ok(g) => g,
            Err(e) => return status.failure(&t.stem, &e),
        };
        for &m in measures {
            let res = match m {
                Measure::Strengths => strengths(cfg, t, &g),
                Measure::Assort => assort(cfg, t, &g),
                Measure::Pagerank => pagerank(cfg, t, &g),
                Measure::Hits => hits(cfg, t, &g),
                Measure::Communities => communities(cfg, t, &g),
            };
            if let Err(e) = res {
                status.failure(&format!("{} ({m:?})", t.stem).to_lowercase(), &e);
            }
        }
    })
}

fn out_path(cfg: &RunConfig, name: &str, ext: &str) -> PathBuf {
    cfg.out.join(format!("{name}.{ext}"))
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

/// Writes `<name>.csv` (plus `<name>.meta.json` when `meta` is given) or a
/// single `<name>.json` holding both metadata and body.
fn emit<B: Serialize>(
    cfg: &RunConfig,
    name: &str,
    csv: impl FnOnce(&mut Vec<u8>) -> Result<()>,
    body: &B,
    meta: Option<serde_json::Value>,
) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => {
            write_file(&out_path(cfg, name, "csv"), &csv_bytes(csv)?)?;
            if let Some(meta) = meta {
                write_file(&out_path(cfg, &format!("{name}.meta"), "json"), &to_json_bytes(&meta)?)?;
            }
            Ok(())
        }
        OutputFormat::Json => {
            let doc = match meta {
                Some(meta) => json!({ "meta": meta, "data": body }),
                None => serde_json::to_value(body)?,
            };
            write_file(&out_path(cfg, name, "json"), &to_json_bytes(&doc)?)
        }
    }
}

fn validate(cfg: &RunConfig, t: &TableRef, table: &IOTable, status: &mut Status) {
    let report = validate_balance(table, cfg.tol_balance);
    let name = format!("{}_balance", t.stem);
    let meta = json!({
        "tol_balance": report.tol_balance,
        "max_row_residual": report.max_row_residual,
        "max_col_residual": report.max_col_residual,
        "passed": report.passed,
    });
    if let Err(e) = emit(cfg, &name, |b| report.write_csv(b), &report.failing_sectors, Some(meta)) {
        return status.failure(&t.stem, &e);
    }
    if !report.passed {
        let sectors: Vec<String> = report
            .failing_sectors
            .iter()
            .map(|f| format!("{} ({:?})", f.code, f.axis).to_lowercase())
            .collect();
        eprintln!("{}: balance check failed for sectors {}", t.stem, sectors.join(", "));
        status.code = status.code.max(EXIT_FAILURE);
    }
}

fn strengths(cfg: &RunConfig, t: &TableRef, g: &IONetwork) -> Result<()> {
    let summary = g.strength_summary();
    match cfg.format {
        OutputFormat::Csv => {
            write_file(
                &out_path(cfg, &format!("{}_strengths", t.stem), "csv"),
                &csv_bytes(|b| summary.write_csv(b))?,
            )?;
            write_file(
                &out_path(cfg, &format!("{}_edges", t.stem), "csv"),
                &csv_bytes(|b| g.write_edge_list(b))?,
            )?;
            let stats = csv_bytes(|b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["strength", "positive", "zero", "log10_min", "log10_q1", "log10_median", "log10_q3", "log10_max"])?;
                for (label, s) in [
                    ("in", &summary.in_strength),
                    ("out", &summary.out_strength),
                    ("total", &summary.total_strength),
                ] {
                    let opt = crate::report::fmt_opt;
                    w.write_record([
                        label.to_string(),
                        s.positive.to_string(),
                        s.zero.to_string(),
                        opt(s.log10_min),
                        opt(s.log10_q1),
                        opt(s.log10_median),
                        opt(s.log10_q3),
                        opt(s.log10_max),
                    ])?;
                }
                w.flush().map_err(|e| Error::io("writing strength stats", e))?;
                Ok(())
            })?;
            write_file(&out_path(cfg, &format!("{}_strength_stats", t.stem), "csv"), &stats)
        }
        OutputFormat::Json => {
            let edges: Vec<_> = g
                .edges()
                .iter()
                .map(|e| json!({"source": g.nodes()[e.source], "target": g.nodes()[e.target], "weight": e.weight}))
                .collect();
            let doc = json!({ "strengths": summary, "edges": edges });
            write_file(&out_path(cfg, &format!("{}_strengths", t.stem), "json"), &to_json_bytes(&doc)?)
        }
    }
}

fn assort(cfg: &RunConfig, t: &TableRef, g: &IONetwork) -> Result<()> {
    let profile: Vec<ProfileEntry> = assortativity_profile(g, cfg.jackknife)
        .into_iter()
        .filter(|p| cfg.types.contains(&p.kind))
        .collect();
    for p in &profile {
        if let Err(e) = &p.result {
            eprintln!("warning: {}: {} assortativity: {e}", t.stem, p.kind);
        }
    }
    let name = format!("{}_assort", t.stem);
    match cfg.format {
        OutputFormat::Csv => {
            write_file(&out_path(cfg, &name, "csv"), &csv_bytes(|b| write_profile_csv(&profile, b))?)?;
            if cfg.jackknife {
                write_file(
                    &out_path(cfg, &format!("{name}_loo"), "csv"),
                    &csv_bytes(|b| write_leave_one_out_csv(&profile, b))?,
                )?;
            }
            Ok(())
        }
        OutputFormat::Json => {
            let rows: Vec<_> = profile
                .iter()
                .map(|p| match &p.result {
                    Ok(est) => serde_json::to_value(est).unwrap_or_default(),
                    Err(e) => json!({ "type": p.kind, "error": e.to_string() }),
                })
                .collect();
            write_file(&out_path(cfg, &name, "json"), &to_json_bytes(&rows)?)
        }
    }
}

fn read_aux_file(path: &Path, g: &IONetwork) -> Result<AuxiliaryVector> {
    let text = fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::NoSuchInput(path.to_path_buf())
        } else {
            Error::io(format!("reading {}", path.display()), e)
        }
    })?;
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut by_node = BTreeMap::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let value: f64 = rec
            .get(1)
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(i + 2, 2, "expected node,value"))?;
        by_node.insert(rec[0].trim().to_string(), value);
    }
    let values = g
        .nodes()
        .iter()
        .map(|n| {
            by_node
                .get(n)
                .copied()
                .ok_or_else(|| Error::Parameter(format!("aux file lacks node {n:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    AuxiliaryVector::new(values)
}

fn auxiliary(cfg: &RunConfig, g: &IONetwork) -> Result<AuxiliaryVector> {
    match cfg.aux.as_str() {
        "uniform" => Ok(AuxiliaryVector::uniform(g.node_count())),
        s => match s.strip_prefix("file:") {
            Some(path) => read_aux_file(Path::new(path), g),
            None => AuxiliaryVector::from_attr(g, s.strip_prefix("aux:").unwrap_or(s)),
        },
    }
}

fn rank_meta(cfg: &RunConfig, s: &ScoreVector, table: &RankTable) -> serde_json::Value {
    json!({
        "kind": s.kind,
        "gamma": s.gamma,
        "lambda_source": s.gamma.map(|_| cfg.aux.clone()),
        "iterations": s.iterations,
        "residual": s.residual,
        "tol": cfg.tol,
        "k": table.k,
    })
}

fn pagerank(cfg: &RunConfig, t: &TableRef, g: &IONetwork) -> Result<()> {
    let lambda = auxiliary(cfg, g)?;
    for &gamma in &cfg.gammas {
        let pr_cfg = PageRankConfig {
            gamma,
            tol: cfg.tol,
            max_iter: cfg.max_iter,
        };
        let scores = extended_pagerank(g, pr_cfg, &lambda)?;
        let table = top_k(&scores, cfg.top_k)?;
        let name = format!("{}_pagerank_g{}", t.stem, fmt_num(gamma));
        emit(cfg, &name, |b| table.write_csv(b), &table.rows, Some(rank_meta(cfg, &scores, &table)))?;
    }
    Ok(())
}

fn hits(cfg: &RunConfig, t: &TableRef, g: &IONetwork) -> Result<()> {
    let (hub, authority) = weighted_hits(g, cfg.tol, cfg.max_iter)?;
    for (label, s) in [("hub", &hub), ("authority", &authority)] {
        let table = top_k(s, cfg.top_k)?;
        let name = format!("{}_{label}", t.stem);
        emit(cfg, &name, |b| table.write_csv(b), &table.rows, Some(rank_meta(cfg, s, &table)))?;
    }
    Ok(())
}

fn communities(cfg: &RunConfig, t: &TableRef, g: &IONetwork) -> Result<()> {
    let p = greedy_communities(g, cfg.variant)?;
    let meta = json!({ "variant": cfg.variant, "modularity": p.modularity, "k": p.k });
    let rows: Vec<_> = p
        .nodes
        .iter()
        .zip(&p.labels)
        .map(|(n, l)| json!({"node": n, "community": l}))
        .collect();
    emit(cfg, &format!("{}_communities", t.stem), |b| p.write_csv(b), &rows, Some(meta))
}

fn write_matrix(cfg: &RunConfig, name: &str, m: &AmiMatrix) -> Result<()> {
    emit(cfg, name, |b| m.write_csv(b), m, None)
}

fn run_ami(cfg: &RunConfig) -> Result<i32> {
    let paths = discover(&cfg.inputs, &["csv"])?;
    let mut parts = Vec::new();
    for path in &paths {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let p = Partition::read_csv(text.as_bytes())
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        parts.push((TableRef::from_path(path).stem, p));
    }
    if parts.is_empty() {
        return Err(Error::Parameter("no partition files found".into()));
    }
    let m = ami_matrix(&parts)?;
    write_matrix(cfg, "ami_matrix", &m)?;
    Ok(EXIT_OK)
}

fn run_compare(cfg: &RunConfig, series_a: Option<String>, series_b: Option<String>) -> Result<i32> {
    let paths = discover(&cfg.inputs, &["csv", "json"])?;
    let mut series: BTreeMap<String, Vec<TableRef>> = BTreeMap::new();
    for p in &paths {
        let t = TableRef::from_path(p);
        if t.year.is_none() {
            return Err(Error::Format(format!(
                "{}: compare needs files named <series>_<year>",
                p.display()
            )));
        }
        series.entry(t.series.clone()).or_default().push(t);
    }
    for (name, tables) in series.iter_mut() {
        tables.sort_by_key(|t| t.year);
        if tables.windows(2).any(|w| w[0].year == w[1].year) {
            return Err(Error::Format(format!("series {name} lists a year twice")));
        }
    }
    let (a, b) = match (series_a, series_b) {
        (Some(a), Some(b)) => (a, b),
        (None, None) if series.len() == 2 => {
            let mut keys = series.keys().cloned();
            (keys.next().unwrap_or_default(), keys.next().unwrap_or_default())
        }
        _ => {
            return Err(Error::Parameter(format!(
                "found series {:?}; name two with --series-a and --series-b",
                series.keys().collect::<Vec<_>>()
            )))
        }
    };
    let get = |s: &str| {
        series
            .get(s)
            .ok_or_else(|| Error::Parameter(format!("no tables for series {s:?}")))
    };
    let (ta, tb) = (get(&a)?, get(&b)?);
    let years_a: Vec<u32> = ta.iter().filter_map(|t| t.year).collect();
    let years_b: Vec<u32> = tb.iter().filter_map(|t| t.year).collect();
    if years_a != years_b {
        let missing_b: Vec<_> = years_a.iter().filter(|y| !years_b.contains(y)).collect();
        let missing_a: Vec<_> = years_b.iter().filter(|y| !years_a.contains(y)).collect();
        return Err(Error::Format(format!(
            "year misalignment: missing in {a}: {missing_a:?}; missing in {b}: {missing_b:?}"
        )));
    }

    let mut status = Status::new();
    let mut detect = |tables: &[TableRef]| -> Vec<Option<Partition>> {
        tables
            .iter()
            .map(|t| {
                let table = match load_table(cfg, &t.path) {
                    Ok(table) => table,
                    Err(e) => {
                        status.input_error(&t.stem, &e);
                        return None;
                    }
                };
                match to_network(&table).and_then(|g| greedy_communities(&g, cfg.variant)) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        status.failure(&t.stem, &e);
                        None
                    }
                }
            })
            .collect()
    };
    let pa = detect(ta);
    let pb = detect(tb);
    if status.code != EXIT_OK {
        return Ok(status.code);
    }
    let pa: Vec<Partition> = pa.into_iter().flatten().collect();
    let pb: Vec<Partition> = pb.into_iter().flatten().collect();
    let ids: Vec<String> = years_a.iter().map(|y| y.to_string()).collect();
    let m = triangle_matrix(&ids, &pa, &pb)?;
    write_matrix(cfg, &format!("{a}_{b}_ami"), &m)?;
    Ok(EXIT_OK)
}
