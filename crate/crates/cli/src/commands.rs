use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};

use serde::Serialize;

use qratio::enumerate::{ingest_graph6, EnumerationChunk, IngestMode};
use qratio::graph::{build_kite, build_named, is_connected, Family, Graph, KiteParams};
use qratio::graph6::Graph6Codec;
use qratio::kite::{best_kite_k, kite_gamma, kite_q1, Scale};
use qratio::spectral::analyze;
use qratio::verify::{
    asymptotic_scan, check_maximizer, decompose_maximizer, extremal_search, extremal_search_chunks,
    extremal_search_graphs, universal_sweep_chunks, universal_sweep_graphs, ExtremalRecord,
    LemmaFinding, MaximizerDecomposition, UniversalSummary, VerifyError,
};

use crate::error::{CliError, EXIT_NOT_CONNECTED, EXIT_VIOLATIONS};
use crate::render::{csv_rows, join, json_line, opt, write_pairs, Table};
use crate::{
    input_path, Builtin, CheckArgs, ChunkSpec, Cli, CliResult, Command, GraphArgs, Mode, Output,
    Suite,
};

/// Kites with paths longer than this default to log mode.
const LOG_MODE_K: usize = 100;

/// Chunks per native sweep when the caller does not pick a slice.
const DEFAULT_PARTITION: u64 = 64;

pub fn run(cli: &Cli, out: &mut impl Write) -> CliResult<u8> {
    match &cli.command {
        Command::Ratio(args) => ratio(cli, args, out),
        Command::Kite { n, k, mode } => kite(cli, *n, *k, *mode, out),
        Command::BestKite { n, mode } => best_kite(cli, *n, *mode, out),
        Command::Search {
            n,
            input,
            chunk,
            top,
        } => search(cli, *n, input.as_deref(), *chunk, *top, out),
        Command::Check(args) => check(cli, args, out),
        Command::Scan { n } => scan(cli, n, out),
    }
}

fn codec() -> Graph6Codec {
    Graph6Codec::long_form()
}

fn encode(g: &Graph) -> String {
    codec().encode(g).expect("long form covers every order")
}

fn scale(mode: Mode) -> Scale {
    match mode {
        Mode::Linear => Scale::Linear,
        Mode::Log => Scale::Log,
    }
}

/// The single graph named by `--builtin` or `--graph6`, if any.
fn single_graph(args: &GraphArgs) -> CliResult<Option<Graph>> {
    if let Some(s) = &args.graph6 {
        return Ok(Some(codec().decode(s.trim())?));
    }
    let Some(b) = args.builtin else {
        return Ok(None);
    };
    let n = args
        .n
        .ok_or_else(|| CliError::malformed("--builtin needs --n"))?;
    let g = match b {
        Builtin::Kite => {
            let k = args
                .k
                .ok_or_else(|| CliError::malformed("--builtin kite needs --k"))?;
            build_kite(KiteParams::new(n, k)?)
        }
        Builtin::Path => build_named(Family::Path, n)?,
        Builtin::Cycle => build_named(Family::Cycle, n)?,
        Builtin::Complete => build_named(Family::Complete, n)?,
        Builtin::Star => build_named(Family::Star, n)?,
    };
    Ok(Some(g))
}

/// Connected graphs of a graph6 stream, in input order. Under `--strict`
/// the first malformed or disconnected line aborts; otherwise such lines
/// are skipped with a warning. Also returns the number of disconnected
/// graphs skipped.
fn connected_stream(cli: &Cli, path: &str) -> CliResult<(Vec<Graph>, u64)> {
    let reader: Box<dyn BufRead> = match input_path(path) {
        Some(p) => {
            Box::new(BufReader::new(File::open(&p).map_err(|e| {
                CliError::malformed(format!("{}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufReader::new(io::stdin())),
    };
    let mode = if cli.strict {
        IngestMode::Strict
    } else {
        IngestMode::Lenient
    };
    let mut kept = Vec::new();
    let mut skipped = 0;
    for item in ingest_graph6(reader, mode).with_codec(codec()) {
        match item {
            Ok(g) if g.connected => kept.push(g.graph),
            Ok(g) if cli.strict => {
                return Err(CliError::new(
                    EXIT_NOT_CONNECTED,
                    format!("line {}: graph is not connected", g.line),
                ))
            }
            Ok(g) => {
                eprintln!("qratio: skipping line {}: graph is not connected", g.line);
                skipped += 1;
            }
            Err(e) if cli.strict => return Err(e.into()),
            Err(e) => eprintln!("qratio: skipping: {e}"),
        }
    }
    Ok((kept, skipped))
}

#[derive(Serialize)]
struct RatioLine {
    graph6: String,
    n: usize,
    edges: usize,
    gamma: f64,
    q1: f64,
    vmin: usize,
    vmax: usize,
    path: Vec<usize>,
    pendant_prefix: usize,
    log_space_recommended: bool,
}

#[derive(Serialize)]
struct RatioCsv<'a> {
    graph6: &'a str,
    n: usize,
    edges: usize,
    gamma: f64,
    q1: f64,
    vmin: usize,
    vmax: usize,
    path: String,
    pendant_prefix: usize,
    log_space_recommended: bool,
}

fn ratio_line(cli: &Cli, g: &Graph) -> CliResult<RatioLine> {
    let (pr, r) = analyze(g, cli.tol)?;
    Ok(RatioLine {
        graph6: encode(g),
        n: g.n(),
        edges: g.edge_count(),
        gamma: r.gamma,
        q1: pr.q1,
        vmin: r.vmin,
        vmax: r.vmax,
        path: r.path,
        pendant_prefix: r.pendant_prefix,
        log_space_recommended: r.log_space_recommended,
    })
}

fn ratio(cli: &Cli, args: &GraphArgs, out: &mut impl Write) -> CliResult<u8> {
    let lines = if let Some(g) = single_graph(args)? {
        vec![ratio_line(cli, &g)?]
    } else if let Some(path) = &args.input {
        let (graphs, _) = connected_stream(cli, path)?;
        graphs
            .iter()
            .map(|g| ratio_line(cli, g))
            .collect::<CliResult<_>>()?
    } else {
        return Err(CliError::malformed("give --builtin, --graph6 or --input"));
    };
    match cli.output {
        Output::Json => {
            for l in &lines {
                json_line(out, l)?;
            }
        }
        Output::Csv => {
            let rows: Vec<RatioCsv> = lines
                .iter()
                .map(|l| RatioCsv {
                    graph6: &l.graph6,
                    n: l.n,
                    edges: l.edges,
                    gamma: l.gamma,
                    q1: l.q1,
                    vmin: l.vmin,
                    vmax: l.vmax,
                    path: join(&l.path),
                    pendant_prefix: l.pendant_prefix,
                    log_space_recommended: l.log_space_recommended,
                })
                .collect();
            csv_rows(out, &rows)?;
        }
        Output::Table if lines.len() == 1 => {
            let l = &lines[0];
            write_pairs(
                out,
                &[
                    ("graph6", l.graph6.clone()),
                    ("n", l.n.to_string()),
                    ("edges", l.edges.to_string()),
                    ("gamma", l.gamma.to_string()),
                    ("q1", l.q1.to_string()),
                    ("vmin", l.vmin.to_string()),
                    ("vmax", l.vmax.to_string()),
                    ("path", join(&l.path)),
                    ("pendant_prefix", l.pendant_prefix.to_string()),
                    ("log_space_recommended", l.log_space_recommended.to_string()),
                ],
            )?;
        }
        Output::Table => {
            let mut t = Table::new(&["graph6", "n", "gamma", "q1", "vmin", "vmax", "k", "pendant"]);
            for l in &lines {
                t.push(vec![
                    l.graph6.clone(),
                    l.n.to_string(),
                    l.gamma.to_string(),
                    l.q1.to_string(),
                    l.vmin.to_string(),
                    l.vmax.to_string(),
                    l.path.len().to_string(),
                    l.pendant_prefix.to_string(),
                ]);
            }
            t.write(out)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct KiteLine {
    n: usize,
    k: usize,
    q1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_gamma: Option<f64>,
}

fn kite(cli: &Cli, n: usize, k: usize, mode: Option<Mode>, out: &mut impl Write) -> CliResult<u8> {
    let mode = mode.unwrap_or(if k > LOG_MODE_K {
        Mode::Log
    } else {
        Mode::Linear
    });
    let value = kite_gamma(n, k, scale(mode))?;
    let line = KiteLine {
        n,
        k,
        q1: kite_q1(n, k)?,
        gamma: (mode == Mode::Linear).then_some(value),
        log_gamma: (mode == Mode::Log).then_some(value),
    };
    match cli.output {
        Output::Json => json_line(out, &line)?,
        Output::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                k: usize,
                q1: f64,
                mode: &'static str,
                value: f64,
            }
            let mode = if mode == Mode::Log { "log" } else { "linear" };
            csv_rows(
                out,
                &[Row {
                    n,
                    k,
                    q1: line.q1,
                    mode,
                    value,
                }],
            )?;
        }
        Output::Table => {
            let label = if mode == Mode::Log {
                "log_gamma"
            } else {
                "gamma"
            };
            write_pairs(
                out,
                &[
                    ("n", n.to_string()),
                    ("k", k.to_string()),
                    ("q1", line.q1.to_string()),
                    (label, value.to_string()),
                ],
            )?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BestKiteLine {
    n: usize,
    k_star: usize,
    log_gamma: f64,
}

fn best_kite(cli: &Cli, n: usize, mode: Mode, out: &mut impl Write) -> CliResult<u8> {
    let (k_star, log_gamma) = best_kite_k(n, scale(mode))?;
    let line = BestKiteLine {
        n,
        k_star,
        log_gamma,
    };
    match cli.output {
        Output::Json => json_line(out, &line)?,
        Output::Csv => csv_rows(out, &[line])?,
        Output::Table => write_pairs(
            out,
            &[
                ("n", n.to_string()),
                ("k_star", k_star.to_string()),
                ("log_gamma", log_gamma.to_string()),
            ],
        )?,
    }
    Ok(0)
}

fn native_chunks(n: usize, chunk: Option<ChunkSpec>) -> CliResult<Vec<EnumerationChunk>> {
    Ok(match chunk {
        Some(c) => vec![EnumerationChunk::part(n, c.i, c.m)?],
        None => EnumerationChunk::partition(n, DEFAULT_PARTITION)?,
    })
}

#[derive(Serialize)]
struct RankCsv<'a> {
    rank: usize,
    graph6: &'a str,
    gamma: f64,
    q1: f64,
    is_kite: bool,
    kite_k: Option<usize>,
}

fn search(
    cli: &Cli,
    n: Option<usize>,
    input: Option<&str>,
    chunk: Option<ChunkSpec>,
    top: usize,
    out: &mut impl Write,
) -> CliResult<u8> {
    let record = match (n, input) {
        (Some(n), _) => extremal_search_chunks(&native_chunks(n, chunk)?)?,
        (None, Some(path)) => extremal_search_graphs(connected_stream(cli, path)?.0)?,
        (None, None) => return Err(CliError::malformed("give --n or --input")),
    };
    write_record(cli, &record, top, out)?;
    Ok(0)
}

fn write_record(cli: &Cli, r: &ExtremalRecord, top: usize, out: &mut impl Write) -> CliResult<()> {
    match cli.output {
        Output::Json => json_line(out, r)?,
        Output::Csv => {
            let rows: Vec<RankCsv> = r
                .ranking
                .iter()
                .map(|e| RankCsv {
                    rank: e.rank,
                    graph6: &e.graph6,
                    gamma: e.gamma,
                    q1: e.q1,
                    is_kite: e.is_kite,
                    kite_k: e.kite_k,
                })
                .collect();
            csv_rows(out, &rows)?;
        }
        Output::Table => {
            write_pairs(
                out,
                &[
                    ("n", r.n.to_string()),
                    ("gamma_max", r.gamma_max.to_string()),
                    ("argmax_graph6", r.argmax_graph6.clone()),
                    ("q1", r.q1.to_string()),
                    ("is_kite", r.is_kite.to_string()),
                    ("kite_k", opt(r.kite_k)),
                    ("best_kite_gamma", opt(r.best_kite_gamma)),
                    ("labeled_count", r.labeled_count.to_string()),
                    ("class_count", r.class_count.to_string()),
                ],
            )?;
            writeln!(out)?;
            let shown = if top == 0 {
                r.ranking.len()
            } else {
                top.min(r.ranking.len())
            };
            let mut t = Table::new(&["rank", "graph6", "gamma", "q1", "kite_k"]);
            for e in &r.ranking[..shown] {
                t.push(vec![
                    e.rank.to_string(),
                    e.graph6.clone(),
                    e.gamma.to_string(),
                    e.q1.to_string(),
                    opt(e.kite_k),
                ]);
            }
            t.write(out)?;
        }
    }
    Ok(())
}

fn check(cli: &Cli, args: &CheckArgs, out: &mut impl Write) -> CliResult<u8> {
    match args.suite {
        Suite::Universal => check_universal(cli, args, out),
        Suite::Maximizer => check_maximizers(cli, args, out),
    }
}

/// Summary of one corpus in the universal suite.
#[derive(Serialize)]
struct CorpusSummary<'a> {
    corpus: String,
    graphs: u64,
    skipped: u64,
    low_q_graphs: u64,
    violations: u64,
    tallies: &'a [qratio::verify::LemmaTally],
}

#[derive(Serialize)]
struct TallyCsv<'a> {
    corpus: &'a str,
    lemma_id: &'static str,
    holds: u64,
    violated: u64,
    not_applicable: u64,
    min_rel_margin: f64,
}

fn check_universal(cli: &Cli, args: &CheckArgs, out: &mut impl Write) -> CliResult<u8> {
    let mut runs: Vec<(String, UniversalSummary)> = Vec::new();
    if let Some(n_max) = args.n_max {
        for n in 2..=n_max {
            let chunks = native_chunks(n, None)?;
            runs.push((
                format!("n={n}"),
                universal_sweep_chunks(&chunks, cli.tol, args.all)?,
            ));
        }
    } else if let Some(g) = single_graph(&args.graph)? {
        if !is_connected(&g) {
            return Err(CliError::new(EXIT_NOT_CONNECTED, "graph is not connected"));
        }
        runs.push((encode(&g), universal_sweep_graphs([g], cli.tol, true)?));
    } else if let Some(n) = args.graph.n {
        let chunks = native_chunks(n, args.chunk)?;
        let label = match args.chunk {
            Some(c) => format!("n={n} chunk {}/{}", c.i, c.m),
            None => format!("n={n}"),
        };
        runs.push((label, universal_sweep_chunks(&chunks, cli.tol, args.all)?));
    } else if let Some(path) = &args.graph.input {
        let (graphs, skipped) = connected_stream(cli, path)?;
        let mut s = universal_sweep_graphs(graphs, cli.tol, args.all)?;
        s.skipped += skipped;
        runs.push((path.clone(), s));
    } else {
        return Err(CliError::malformed(
            "give --n-max, --n, --input, --graph6 or --builtin",
        ));
    }

    let violations: u64 = runs.iter().map(|(_, s)| s.violations()).sum();
    match cli.output {
        Output::Json => {
            for (corpus, s) in &runs {
                for f in &s.findings {
                    json_line(out, f)?;
                }
                json_line(
                    out,
                    &CorpusSummary {
                        corpus: corpus.clone(),
                        graphs: s.graphs,
                        skipped: s.skipped,
                        low_q_graphs: s.low_q_graphs,
                        violations: s.violations(),
                        tallies: &s.tallies,
                    },
                )?;
            }
        }
        Output::Csv => {
            let rows: Vec<TallyCsv> = runs
                .iter()
                .flat_map(|(corpus, s)| {
                    s.tallies.iter().map(move |t| TallyCsv {
                        corpus,
                        lemma_id: t.lemma_id.as_str(),
                        holds: t.holds,
                        violated: t.violated,
                        not_applicable: t.not_applicable,
                        min_rel_margin: t.min_rel_margin,
                    })
                })
                .collect();
            csv_rows(out, &rows)?;
        }
        Output::Table => {
            let mut t = Table::new(&[
                "corpus",
                "graphs",
                "low_q",
                "lemma",
                "holds",
                "violated",
                "n/a",
                "min_rel_margin",
            ]);
            for (corpus, s) in &runs {
                for tally in &s.tallies {
                    t.push(vec![
                        corpus.clone(),
                        s.graphs.to_string(),
                        s.low_q_graphs.to_string(),
                        tally.lemma_id.as_str().to_string(),
                        tally.holds.to_string(),
                        tally.violated.to_string(),
                        tally.not_applicable.to_string(),
                        format!("{:.3e}", tally.min_rel_margin),
                    ]);
                }
            }
            t.write(out)?;
            let findings: Vec<&LemmaFinding> = runs.iter().flat_map(|(_, s)| &s.findings).collect();
            if !findings.is_empty() {
                writeln!(out)?;
                findings_table(&findings, out)?;
            }
        }
    }
    Ok(if violations > 0 { EXIT_VIOLATIONS } else { 0 })
}

fn findings_table(findings: &[&LemmaFinding], out: &mut impl Write) -> CliResult<()> {
    let mut t = Table::new(&["graph_id", "lemma", "status", "margin", "details"]);
    for f in findings {
        t.push(vec![
            f.graph_id.clone(),
            f.lemma_id.as_str().to_string(),
            serde_json::to_value(f.status)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
            format!("{:.6e}", f.margin),
            f.details.clone(),
        ]);
    }
    t.write(out)
}

#[derive(Serialize)]
struct DecompositionLine {
    graph6: String,
    n: usize,
    q1: f64,
    gamma: f64,
    k: usize,
    path: Vec<usize>,
    c: Vec<usize>,
    s: Vec<usize>,
    t: Vec<usize>,
}

#[derive(Serialize)]
struct FindingCsv<'a> {
    graph_id: &'a str,
    lemma_id: &'static str,
    status: String,
    margin: f64,
    scale: f64,
    details: &'a str,
}

fn check_maximizers(cli: &Cli, args: &CheckArgs, out: &mut impl Write) -> CliResult<u8> {
    let mut graphs = Vec::new();
    if let Some(g) = single_graph(&args.graph)? {
        graphs.push(g);
    } else {
        let orders: Vec<usize> = match (args.n_max, args.graph.n) {
            (Some(m), _) => (2..=m).collect(),
            (None, Some(n)) => vec![n],
            (None, None) => {
                return Err(CliError::malformed(
                    "give --n, --n-max, --graph6 or --builtin",
                ))
            }
        };
        for n in orders {
            let r = extremal_search(n, DEFAULT_PARTITION)?;
            graphs.push(codec().decode(&r.argmax_graph6)?);
        }
    }
    let single = graphs.len() == 1;
    let mut decs: Vec<MaximizerDecomposition> = Vec::new();
    for g in &graphs {
        match decompose_maximizer(g) {
            Ok(d) => decs.push(d),
            Err(e @ (VerifyError::Domain(_) | VerifyError::Degenerate)) if !single => {
                eprintln!("qratio: {} (n = {}) not applicable: {e}", encode(g), g.n());
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut csv = Vec::new();
    for d in &decs {
        let findings = check_maximizer(d);
        let line = DecompositionLine {
            graph6: encode(&d.g),
            n: d.g.n(),
            q1: d.pr.q1,
            gamma: d.report.gamma,
            k: d.k,
            path: d.report.path.clone(),
            c: d.c.clone(),
            s: d.s.clone(),
            t: d.t.clone(),
        };
        match cli.output {
            Output::Json => {
                json_line(out, &line)?;
                for f in &findings {
                    json_line(out, f)?;
                }
            }
            Output::Csv => csv.extend(findings),
            Output::Table => {
                write_pairs(
                    out,
                    &[
                        ("graph6", line.graph6),
                        ("n", line.n.to_string()),
                        ("q1", line.q1.to_string()),
                        ("gamma", line.gamma.to_string()),
                        ("k", line.k.to_string()),
                        ("path", join(&line.path)),
                        ("C", join(&line.c)),
                        ("S", join(&line.s)),
                        ("T", join(&line.t)),
                    ],
                )?;
                writeln!(out)?;
                findings_table(&findings.iter().collect::<Vec<_>>(), out)?;
                writeln!(out)?;
            }
        }
    }
    if cli.output == Output::Csv {
        let rows: Vec<FindingCsv> = csv
            .iter()
            .map(|f| {
                Ok(FindingCsv {
                    graph_id: &f.graph_id,
                    lemma_id: f.lemma_id.as_str(),
                    status: serde_json::to_value(f.status)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                    margin: f.margin,
                    scale: f.scale,
                    details: &f.details,
                })
            })
            .collect::<CliResult<_>>()?;
        csv_rows(out, &rows)?;
    }
    Ok(0)
}

fn scan(cli: &Cli, ns: &[usize], out: &mut impl Write) -> CliResult<u8> {
    let rows = asymptotic_scan(ns)?;
    match cli.output {
        Output::Json => {
            for r in &rows {
                json_line(out, r)?;
            }
        }
        Output::Csv => csv_rows(out, &rows)?,
        Output::Table => {
            let mut t = Table::new(&[
                "n",
                "k_star",
                "log_gamma",
                "length_ratio",
                "in_band",
                "x_k_minus_1",
                "n^(-1/6)",
                "x_below",
            ]);
            for r in &rows {
                t.push(vec![
                    r.n.to_string(),
                    r.k_star.to_string(),
                    format!("{:.6}", r.log_gamma),
                    format!("{:.6}", r.length_ratio),
                    r.in_band.to_string(),
                    format!("{:.6e}", r.x_k_minus_1),
                    format!("{:.6}", r.n_pow),
                    r.x_below.to_string(),
                ]);
            }
            t.write(out)?;
        }
    }
    Ok(0)
}
