//! Command implementations behind the `bigramsey` binary.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use bigramsey::colorings::{
    omega_k_color, realized_colors, witness_sample, zeta_color, RuleColoring,
};
use bigramsey::constructions::{build_h, verify_prefix, ConstructionError, GroundSequence};
use bigramsey::counting::{degree, degree_zeta, table, BigCount};
use bigramsey::ordinal::{parse_edge, Edge, ElementError, Ordinal, ParseError};
use bigramsey::rules::{enumerate_rules, GeneralColoringRule, RuleError, DEFAULT_BUDGET};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "bigramsey",
    version,
    about = "Exact big Ramsey degrees of ordinals below ω^ω"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Cap on partial rules visited while enumerating.
    #[arg(long, env = "RAMSEY_BUDGET", default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
    Bfile,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Big Ramsey degree T(n, α); `zeta` gives the integers.
    Degree {
        ordinal: String,
        #[arg(short)]
        n: usize,
    },
    /// Degrees of ω^d for d ≤ max-d, n ≤ max-n.
    Table {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        max_d: usize,
    },
    /// List the coloring rules of n-subsets.
    Rules {
        ordinal: String,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Compare recurrence counts with enumerated rule counts, size by size.
    Verify {
        ordinal: String,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        max_p: Option<usize>,
    },
    /// Emit terms of an OEIS sequence.
    Oeis {
        #[arg(value_enum)]
        sequence: Sequence,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Antidiagonal read order for the table sequence.
        #[arg(long, value_enum)]
        order: Option<ReadOrder>,
        /// First index for the table sequence.
        #[arg(long, default_value_t = 0)]
        offset: u64,
    },
    /// The rule an edge satisfies and its color.
    Classify {
        ordinal: String,
        #[arg(long)]
        edge: String,
    },
    /// Build a prefix of a homogeneous set and check every n-edge.
    Witness {
        ordinal: String,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        prefix: usize,
        /// File with one natural per line, strictly increasing.
        #[arg(long)]
        ground: Option<PathBuf>,
    },
    /// Count colors realized on a finite sample.
    Realize {
        #[command(subcommand)]
        sample: RealizeCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum RealizeCommand {
    /// Sign patterns on {-m..m} without 0.
    Zeta {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        window: u32,
    },
    /// Copy sequences on {(i, x) : i ≤ k, x < span}.
    OmegaK {
        #[arg(short)]
        k: u64,
        #[arg(short)]
        n: usize,
        /// Defaults to n·k.
        #[arg(long)]
        span: Option<u64>,
    },
    /// Rule colors on a sample holding one edge per rule.
    Rules {
        ordinal: String,
        #[arg(short)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sequence {
    A000311,
    A079309,
    A364026,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadOrder {
    /// Within each antidiagonal d runs 0, 1, ...
    DAscending,
    /// Within each antidiagonal n runs 0, 1, ...
    NAscending,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Budget(RuleError),
    #[error("{0}")]
    Check(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) | CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ElementError> for CliError {
    fn from(e: ElementError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RuleError> for CliError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::BudgetExceeded { .. } => CliError::Budget(e),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<bigramsey::colorings::ColoringError> for CliError {
    fn from(e: bigramsey::colorings::ColoringError) -> Self {
        use bigramsey::colorings::ColoringError;
        match e {
            ColoringError::Rule(r) => r.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn ordinal(text: &str) -> Result<Ordinal, CliError> {
    Ok(text.parse()?)
}

fn number(v: &BigCount) -> Value {
    Value::Number(v.to_string().parse().expect("decimal integer"))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Runs one command and returns what it prints on stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.format == Format::Bfile && !matches!(cli.command, Command::Oeis { .. }) {
        return Err(CliError::Input("bfile output only applies to oeis".into()));
    }
    let structured = cli.format == Format::Structured;
    match &cli.command {
        Command::Degree { ordinal: text, n } => cmd_degree(text, *n, structured),
        Command::Table { max_n, max_d } => Ok(cmd_table(*max_n, *max_d, structured)),
        Command::Rules {
            ordinal: text,
            n,
            size,
        } => cmd_rules(text, *n, *size, cli.budget, structured),
        Command::Verify {
            ordinal: text,
            n,
            max_p,
        } => cmd_verify(text, *n, *max_p, cli.budget, structured),
        Command::Oeis {
            sequence,
            count,
            order,
            offset,
        } => cmd_oeis(*sequence, *count, *order, *offset, structured),
        Command::Classify {
            ordinal: text,
            edge,
        } => cmd_classify(text, edge, cli.budget, structured),
        Command::Witness {
            ordinal: text,
            n,
            prefix,
            ground,
        } => cmd_witness(text, *n, *prefix, ground.as_ref(), structured),
        Command::Realize { sample } => cmd_realize(sample, cli.budget, structured),
    }
}

pub fn cmd_degree(text: &str, n: usize, structured: bool) -> Result<String, CliError> {
    let value = if matches!(text.trim(), "zeta" | "ζ") {
        degree_zeta(n)
    } else {
        degree(n, &ordinal(text)?)
    };
    Ok(if structured {
        pretty(&json!({ "ordinal": text.trim(), "n": n, "degree": number(&value) }))
    } else {
        format!("{value}\n")
    })
}

pub fn cmd_table(max_n: usize, max_d: usize, structured: bool) -> String {
    let rows = table(max_n, max_d);
    if structured {
        let rows: Vec<Value> = rows
            .iter()
            .map(|row| Value::Array(row.iter().map(number).collect()))
            .collect();
        return pretty(&Value::Array(rows));
    }
    let mut out = String::new();
    for (d, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(out, "d={d}: {}", cells.join(" ")).unwrap();
    }
    out
}

pub fn cmd_rules(
    text: &str,
    n: usize,
    size: Option<usize>,
    budget: u64,
    structured: bool,
) -> Result<String, CliError> {
    let rules = enumerate_rules(n, &ordinal(text)?, size, budget)?;
    if structured {
        return Ok(pretty(&json!({ "rules": rules, "count": rules.len() })));
    }
    let mut out = String::new();
    for r in &rules {
        writeln!(out, "{r}").unwrap();
    }
    writeln!(out, "count: {}", rules.len()).unwrap();
    Ok(out)
}

pub fn cmd_verify(
    text: &str,
    n: usize,
    max_p: Option<usize>,
    budget: u64,
    structured: bool,
) -> Result<String, CliError> {
    let alpha = ordinal(text)?;
    let rules = enumerate_rules(n, &alpha, None, budget)?;
    let max_p = max_p.unwrap_or(n * alpha.degree());
    let mut rows = Vec::new();
    let mut all_match = true;
    for p in 0..=max_p {
        let recurrence = bigramsey::counting::count_s_size(n, &alpha, p);
        let enumerated = BigCount::from(rules.iter().filter(|r| r.size() == p).count());
        all_match &= recurrence == enumerated;
        rows.push((p, recurrence, enumerated));
    }
    let total_rec = degree(n, &alpha);
    let total_enum = BigCount::from(rules.len());
    all_match &= max_p < n * alpha.degree() || total_rec == total_enum;

    let out = if structured {
        let sizes: Vec<Value> = rows
            .iter()
            .map(|(p, r, e)| json!({ "p": p, "recurrence": number(r), "enumerated": number(e), "match": r == e }))
            .collect();
        pretty(&json!({
            "ordinal": alpha.to_string(),
            "n": n,
            "sizes": sizes,
            "total": { "recurrence": number(&total_rec), "enumerated": number(&total_enum) },
            "match": all_match,
        }))
    } else {
        let mut out = String::new();
        for (p, r, e) in &rows {
            let tag = if r == e { "ok" } else { "MISMATCH" };
            writeln!(out, "p={p} recurrence={r} enumerated={e} {tag}").unwrap();
        }
        writeln!(out, "total recurrence={total_rec} enumerated={total_enum}").unwrap();
        out
    };
    if all_match {
        Ok(out)
    } else {
        Err(CliError::Check(format!(
            "{out}recurrence and enumeration disagree"
        )))
    }
}

/// Terms `(index, value)` of a supported sequence.
pub fn oeis_terms(
    sequence: Sequence,
    count: usize,
    order: Option<ReadOrder>,
    offset: u64,
) -> Result<Vec<(u64, BigCount)>, CliError> {
    let terms = match sequence {
        // offset 0, a(0) = 0, a(n) = T(n-1, ω²)
        Sequence::A000311 => (0..count as u64)
            .map(|i| {
                let v = if i == 0 {
                    BigCount::from(0u32)
                } else {
                    degree(i as usize - 1, &Ordinal::omega_power(2, 1))
                };
                (i, v)
            })
            .collect(),
        // offset 1, a(d) = T(2, ω^d)
        Sequence::A079309 => (1..=count as u64)
            .map(|d| (d, degree(2, &Ordinal::omega_power(d as usize, 1))))
            .collect(),
        Sequence::A364026 => {
            let order = order.ok_or_else(|| {
                CliError::Input(
                    "A364026 needs --order d-ascending|n-ascending; the read order is not fixed here".into(),
                )
            })?;
            let mut terms = Vec::with_capacity(count);
            'diagonals: for s in 0.. {
                for i in 0..=s {
                    if terms.len() == count {
                        break 'diagonals;
                    }
                    let (d, n) = match order {
                        ReadOrder::DAscending => (i, s - i),
                        ReadOrder::NAscending => (s - i, i),
                    };
                    let v = degree(n, &Ordinal::omega_power(d, 1));
                    terms.push((offset + terms.len() as u64, v));
                }
            }
            terms
        }
    };
    Ok(terms)
}

pub fn cmd_oeis(
    sequence: Sequence,
    count: usize,
    order: Option<ReadOrder>,
    offset: u64,
    structured: bool,
) -> Result<String, CliError> {
    let terms = oeis_terms(sequence, count, order, offset)?;
    if structured {
        let rows: Vec<Value> = terms.iter().map(|(i, v)| json!([i, number(v)])).collect();
        return Ok(pretty(&Value::Array(rows)));
    }
    Ok(terms.iter().map(|(i, v)| format!("{i} {v}\n")).collect())
}

pub fn cmd_classify(
    text: &str,
    edge_text: &str,
    budget: u64,
    structured: bool,
) -> Result<String, CliError> {
    let alpha = ordinal(text)?;
    let edge = parse_edge(&alpha, edge_text)?;
    let coloring = RuleColoring::new(edge.len(), &alpha, budget)?;
    let found = coloring.classify(&edge)?;
    let color = found.map_or(1, |(c, _)| c);
    let rule = found.map(|(_, r)| r);
    if structured {
        return Ok(pretty(&json!({
            "ordinal": alpha.to_string(),
            "edge": edge_json(&edge),
            "rule": rule,
            "color": color,
        })));
    }
    let mut out = String::new();
    for el in edge.elements() {
        writeln!(out, "element: {} = {el}", el.value(&alpha)).unwrap();
    }
    match rule {
        Some(r) => writeln!(out, "rule: {r}").unwrap(),
        None => writeln!(out, "rule: none").unwrap(),
    }
    writeln!(out, "color: {color}").unwrap();
    Ok(out)
}

fn edge_json(edge: &Edge) -> Value {
    Value::Array(
        edge.elements()
            .iter()
            .map(|el| {
                json!({
                    "value": el.value(edge.ambient()).to_string(),
                    "c": el.origin(),
                    "b": el.lead(),
                    "a": el.tail(),
                })
            })
            .collect(),
    )
}

fn read_ground(path: &PathBuf) -> Result<GroundSequence, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let values = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<u64>()
                .map_err(|_| CliError::Input(format!("ground line {}: not a natural: {l}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroundSequence::prefix(values)?)
}

pub fn cmd_witness(
    text: &str,
    n: usize,
    prefix: usize,
    ground: Option<&PathBuf>,
    structured: bool,
) -> Result<String, CliError> {
    let alpha = ordinal(text)?;
    let g = match ground {
        Some(path) => read_ground(path)?,
        None => GroundSequence::Identity,
    };
    let h = build_h(&alpha, &g, prefix)?;
    if h.elements.len() < n {
        return Err(CliError::Input(format!(
            "prefix has {} elements, fewer than n = {n}",
            h.elements.len()
        )));
    }
    let report = verify_prefix(&h, n)?;
    let ok = report.all_satisfied() && report.within_bound();
    let out = if structured {
        let elements = Edge::new(alpha.clone(), h.elements.clone())?;
        let rules: Vec<&GeneralColoringRule> = report.rules.iter().collect();
        pretty(&json!({
            "ordinal": alpha.to_string(),
            "n": n,
            "prefix": edge_json(&elements),
            "edges": report.edges,
            "satisfied": report.satisfied,
            "distinct_rules": report.rules.len(),
            "rules": rules,
            "degree": number(&report.degree),
            "ok": ok,
        }))
    } else {
        let mut out = String::new();
        for el in &h.elements {
            writeln!(out, "{} = {el}", el.value(&alpha)).unwrap();
        }
        writeln!(out, "edges: {}", report.edges).unwrap();
        writeln!(out, "satisfied: {}", report.satisfied).unwrap();
        writeln!(out, "distinct rules: {}", report.rules.len()).unwrap();
        writeln!(out, "degree: {}", report.degree).unwrap();
        writeln!(out, "verified: {}", if ok { "yes" } else { "no" }).unwrap();
        out
    };
    if ok {
        Ok(out)
    } else {
        Err(CliError::Check(format!("{out}prefix verification failed")))
    }
}

fn realize_report(structured: bool, colors: usize, expected: &BigCount, sample: usize) -> String {
    if structured {
        pretty(&json!({ "sample": sample, "colors": colors, "expected": number(expected) }))
    } else {
        format!("sample: {sample}\ncolors: {colors}\nexpected: {expected}\n")
    }
}

pub fn cmd_realize(
    sample: &RealizeCommand,
    budget: u64,
    structured: bool,
) -> Result<String, CliError> {
    match sample {
        RealizeCommand::Zeta { n, window } => {
            let m = i64::from(*window);
            let points: Vec<i64> = (-m..=m).filter(|&x| x != 0).collect();
            let colors = realized_colors(&points, *n, |s| zeta_color(s).expect("distinct"));
            Ok(realize_report(
                structured,
                colors.len(),
                &degree_zeta(*n),
                points.len(),
            ))
        }
        RealizeCommand::OmegaK { k, n, span } => {
            let span = span.unwrap_or(*n as u64 * k);
            let points: Vec<(u64, u64)> = (1..=*k)
                .flat_map(|i| (0..span).map(move |x| (i, x)))
                .collect();
            let colors = realized_colors(&points, *n, omega_k_color);
            let expected = BigCount::from(*k).pow(*n as u32);
            Ok(realize_report(
                structured,
                colors.len(),
                &expected,
                points.len(),
            ))
        }
        RealizeCommand::Rules { ordinal: text, n } => {
            let alpha = ordinal(text)?;
            let coloring = RuleColoring::new(*n, &alpha, budget)?;
            let points = witness_sample(*n, &alpha, budget)?;
            let colors: BTreeSet<u64> = realized_colors(&points, *n, |s| {
                let e = Edge::new(alpha.clone(), s.to_vec()).expect("distinct sample elements");
                coloring.color(&e).expect("edge of the coloring's ambient")
            });
            Ok(realize_report(
                structured,
                colors.len(),
                &degree(*n, &alpha),
                points.len(),
            ))
        }
    }
}
