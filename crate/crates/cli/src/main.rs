//! `pbell` — tables of probabilistic Stirling numbers, Bell polynomials, and
//! exact verification of their Spivey-type recurrences.
//!
//! Exit status: 0 on success (and all identities equal), 1 when a verify or
//! sweep found an inequality, 2 on usage errors. Diagnostics go to stderr;
//! rationals are always rendered exactly (`num` or `num/den`).

use std::io::Write;
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pbell::identities::{all_equal, ParseIdentityError};
use pbell::rational::{format_rational, parse_rational, ParseRationalError, Rational};
use pbell::{
    make_provider, sweep, verify, BellFamily, DistributionSpec, IdentityId, IdentityReport,
    SpecError, StirlingTable,
};

#[derive(Parser)]
#[command(
    name = "pbell",
    version,
    about = "Exact probabilistic Stirling/Bell computations and identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// Aligned, human-readable text
    Pretty,
    /// One JSON document per invocation
    Json,
    /// One CSV row per report or table row
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the triangle of probabilistic r-Stirling numbers for 0 <= k <= n <= n-max
    Stirling {
        /// Distribution spec: det:<c>, bernoulli:<p>, discrete:(a1,p1);(a2,p2);..., poisson:<rate>
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// Print one Bell polynomial (univariate by default, --bivariate for the two-variable family)
    Bell {
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        /// Polynomial order
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long)]
        bivariate: bool,
        /// Substitute this exact rational for x
        #[arg(long, value_parser = parse_rat)]
        at_x: Option<Rational>,
        /// Substitute this exact rational for y
        #[arg(long, value_parser = parse_rat)]
        at_y: Option<Rational>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// Verify one identity at fixed (m, n, r); exit 0 iff both sides are equal
    Verify {
        /// One of: thm22 thm24 thm25 thm26 thm27 eq4 eq5 eq9 eq10 cor22 cor24 cor25 cor27
        #[arg(value_parser = parse_identity)]
        identity: IdentityId,
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
    },
    /// Verify an identity for every m + n <= max-total; exit 0 iff all cells are equal
    Sweep {
        #[arg(value_parser = parse_identity)]
        identity: IdentityId,
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        /// Bound on m + n (default: 8 when sweeping r = 0 only, 7 otherwise)
        #[arg(long)]
        max_total: Option<u32>,
        /// Comma-separated r values (ignored by identities without an r parameter)
        #[arg(long, value_delimiter = ',', default_value = "0")]
        r: Vec<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
        /// Worker threads for the sweep; 1 keeps evaluation sequential
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn parse_dist(s: &str) -> Result<DistributionSpec, SpecError> {
    s.parse()
}

fn parse_identity(s: &str) -> Result<IdentityId, ParseIdentityError> {
    s.parse()
}

fn parse_rat(s: &str) -> Result<Rational, ParseRationalError> {
    parse_rational(s)
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            exit(2);
        }
    }
}

fn run(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Stirling {
            dist,
            n_max,
            r,
            format,
        } => cmd_stirling(&dist, n_max, r, format),
        Command::Bell {
            dist,
            n,
            r,
            bivariate,
            at_x,
            at_y,
            format,
        } => cmd_bell(&dist, n, r, bivariate, at_x, at_y, format),
        Command::Verify {
            identity,
            dist,
            m,
            n,
            r,
            format,
        } => cmd_verify(identity, &dist, m, n, r, format),
        Command::Sweep {
            identity,
            dist,
            max_total,
            r,
            format,
            jobs,
        } => cmd_sweep(identity, &dist, max_total, &r, format, jobs),
    }
}

fn cmd_stirling(
    dist: &DistributionSpec,
    n_max: u32,
    r: u32,
    format: OutputFormat,
) -> anyhow::Result<i32> {
    let table = StirlingTable::new(make_provider(dist)?);
    let rows: Vec<Vec<Rational>> = (0..=n_max)
        .map(|n| (0..=n).map(|k| table.prob_stirling2(n, k, r)).collect())
        .collect();
    match format {
        OutputFormat::Pretty => {
            println!("prob-stirling  dist={dist}  r={r}");
            print_triangle(&rows);
        }
        OutputFormat::Csv => {
            let mut out = std::io::stdout().lock();
            for row in &rows {
                let line: Vec<String> = row.iter().map(format_rational).collect();
                writeln!(out, "{}", line.join(","))?;
            }
        }
        OutputFormat::Json => {
            let rows_json: Vec<Vec<String>> = rows
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect();
            let doc = json!({
                "dist": dist.to_string(),
                "r": r,
                "n_max": n_max,
                "rows": rows_json,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(0)
}

fn print_triangle(rows: &[Vec<Rational>]) {
    let label_width = format!("{}", rows.len() - 1).len().max(3);
    let mut widths: Vec<usize> = (0..rows.len()).map(|k| format!("{k}").len()).collect();
    for row in rows {
        for (k, v) in row.iter().enumerate() {
            widths[k] = widths[k].max(format_rational(v).len());
        }
    }
    let mut header = format!("{:>label_width$}", "n\\k");
    for (k, w) in widths.iter().enumerate() {
        header.push_str(&format!("  {k:>w$}"));
    }
    println!("{header}");
    for (n, row) in rows.iter().enumerate() {
        let mut line = format!("{n:>label_width$}");
        for (k, v) in row.iter().enumerate() {
            line.push_str(&format!("  {:>w$}", format_rational(v), w = widths[k]));
        }
        println!("{line}");
    }
}

fn cmd_bell(
    dist: &DistributionSpec,
    n: u32,
    r: u32,
    bivariate: bool,
    at_x: Option<Rational>,
    at_y: Option<Rational>,
    format: OutputFormat,
) -> anyhow::Result<i32> {
    let family = BellFamily::probabilistic(make_provider(dist)?, bivariate, r);
    let mut poly = family.polynomial(n);
    if let Some(x) = &at_x {
        poly = poly.eval_x(x);
    }
    if let Some(y) = &at_y {
        poly = poly.eval_y(y);
    }
    match format {
        OutputFormat::Pretty => println!("{poly}"),
        OutputFormat::Json => {
            let doc = json!({
                "dist": dist.to_string(),
                "n": n,
                "r": r,
                "bivariate": bivariate,
                "at_x": at_x.as_ref().map(format_rational),
                "at_y": at_y.as_ref().map(format_rational),
                "poly": poly.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(std::io::stdout().lock());
            wtr.write_record(["dist", "n", "r", "bivariate", "poly"])?;
            wtr.write_record([
                dist.to_string(),
                n.to_string(),
                r.to_string(),
                bivariate.to_string(),
                poly.to_string(),
            ])?;
            wtr.flush()?;
        }
    }
    Ok(0)
}

const REPORT_COLUMNS: [&str; 9] = [
    "identity",
    "m",
    "n",
    "r",
    "dist",
    "lhs",
    "rhs",
    "equal",
    "elapsed_ms",
];

fn report_record(report: &IdentityReport) -> [String; 9] {
    [
        report.identity.name().to_string(),
        report.m.to_string(),
        report.n.to_string(),
        report.r.to_string(),
        report.dist.to_string(),
        report.lhs.to_string(),
        report.rhs.to_string(),
        report.equal.to_string(),
        (report.elapsed.as_millis() as u64).to_string(),
    ]
}

fn cmd_verify(
    identity: IdentityId,
    dist: &DistributionSpec,
    m: u32,
    n: u32,
    r: u32,
    format: OutputFormat,
) -> anyhow::Result<i32> {
    let report = verify(identity, dist, m, n, r)?;
    match format {
        OutputFormat::Pretty => {
            println!(
                "identity: {}  ({})",
                report.identity,
                report.identity.description()
            );
            println!("dist: {}", report.dist);
            println!("m: {}", report.m);
            println!("n: {}", report.n);
            println!("r: {}", report.r);
            println!("lhs: {}", report.lhs);
            println!("rhs: {}", report.rhs);
            println!("equal: {}", report.equal);
            println!("elapsed_ms: {}", report.elapsed.as_millis());
        }
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(std::io::stdout().lock());
            wtr.write_record(REPORT_COLUMNS)?;
            wtr.write_record(report_record(&report))?;
            wtr.flush()?;
        }
    }
    Ok(if report.equal { 0 } else { 1 })
}

fn cmd_sweep(
    identity: IdentityId,
    dist: &DistributionSpec,
    max_total: Option<u32>,
    r_values: &[u32],
    format: OutputFormat,
    jobs: usize,
) -> anyhow::Result<i32> {
    let shifted = identity.uses_r() && r_values.iter().any(|&r| r > 0);
    let max_total = max_total.unwrap_or(if shifted { 7 } else { 8 });
    let reports = sweep(identity, dist, max_total, r_values, jobs)?;
    let equal_count = reports.iter().filter(|r| r.equal).count();
    let ok = all_equal(&reports);
    match format {
        OutputFormat::Pretty => {
            for report in &reports {
                println!(
                    "{} m={} n={} r={} equal={}",
                    report.identity, report.m, report.n, report.r, report.equal
                );
                if !report.equal {
                    println!("  lhs: {}", report.lhs);
                    println!("  rhs: {}", report.rhs);
                }
            }
            println!("{equal_count}/{} equal", reports.len());
        }
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(std::io::stdout().lock());
            wtr.write_record(REPORT_COLUMNS)?;
            for report in &reports {
                wtr.write_record(report_record(report))?;
            }
            wtr.flush()?;
            // keep stdout machine-parseable; the tally is advisory
            eprintln!("{equal_count}/{} equal", reports.len());
        }
        OutputFormat::Json => {
            let doc = json!({
                "identity": identity.name(),
                "dist": reports.first().map(|r| r.dist.to_string()),
                "max_total": max_total,
                "r_values": r_values,
                "reports": reports,
                "total": reports.len(),
                "equal": equal_count,
                "all_equal": ok,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(if ok { 0 } else { 1 })
}
