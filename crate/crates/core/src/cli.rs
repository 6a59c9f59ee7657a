//! Command-line front end.
//!
//! Exit codes: 0 when every requested verification passes, 1 when one
//! fails, 2 for invalid input, 3 for I/O failures.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::incidence::Bijection;
use crate::report::{run_request, sweep, Family, RunReport, RunRequest, SweepSummary, VerifyScope};
use crate::scheme::Eigenmatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "assoc-schemes", version, about = "Build and verify association schemes from prime-power pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schemes from twin prime powers q, q+2.
    Twin(RunArgs),
    /// Schemes from prime powers q, q+1.
    Gdd(RunArgs),
    /// The 4-class quadratic-character scheme on 𝔽_q × 𝔽_{q+2}.
    Intro(RunArgs),
    /// Full verification of every valid q up to a bound.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyArg {
    Axioms,
    Designs,
    Props,
    All,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub q: u64,
    /// Checks to run; repeat the flag or separate with commas.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub verify: Vec<VerifyArg>,
    /// Compute the first and second eigenmatrices.
    #[arg(long)]
    pub eigen: bool,
    /// Search for a self-duality pairing.
    #[arg(long)]
    pub selfdual: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Custom bijection φ as `element,label` CSV rows.
    #[arg(long)]
    pub phi: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long = "max-q")]
    pub max_q: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::ConstructionMismatch(_) | Error::Singular | Error::OrderMismatch { .. } | Error::Overflow(_) => {
            EXIT_FAILED
        }
        _ => EXIT_INVALID,
    }
}

fn scope(v: &[VerifyArg]) -> VerifyScope {
    let mut s = VerifyScope::default();
    for a in v {
        match a {
            VerifyArg::Axioms => s.axioms = true,
            VerifyArg::Designs => s.designs = true,
            VerifyArg::Props => s.props = true,
            VerifyArg::All => s = VerifyScope::ALL,
        }
    }
    s
}

fn read_phi(path: &PathBuf, family: Family, q: u64) -> Result<Bijection, Error> {
    crate::report::validate(family, q)?;
    let (r, with_y) = match family {
        Family::Twin => (q + 2, true),
        Family::Gdd => (q + 1, false),
        Family::Intro => return Err(Error::InvalidParameter("the intro family takes no bijection".into())),
    };
    Bijection::from_csv(File::open(path)?, r as usize, q as usize, with_y)
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `stdout` or `--out` and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Twin(a) => run_family(Family::Twin, a, stdout),
        Command::Gdd(a) => run_family(Family::Gdd, a, stdout),
        Command::Intro(a) => run_family(Family::Intro, a, stdout),
        Command::Sweep(a) => run_sweep(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn run_family(family: Family, a: RunArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let phi = a.phi.as_ref().map(|p| read_phi(p, family, a.q)).transpose()?;
    let req = RunRequest { family, q: a.q, verify: scope(&a.verify), eigen: a.eigen, selfdual: a.selfdual, phi };
    let report = run_request(&req)?;
    let text = match a.format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report_csv(&report)?,
        Format::Pretty => report_pretty(&report),
    };
    emit(&a.out, &text, stdout)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
}

fn run_sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let summary = sweep(a.family, a.max_q)?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
        Format::Csv => sweep_csv(&summary)?,
        Format::Pretty => sweep_pretty(&summary),
    };
    emit(&a.out, &text, stdout)?;
    Ok(if summary.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<(), Error>) -> Result<String, Error> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    build(&mut w)?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Clause rows, then (after a blank line) the first eigenmatrix with each
/// entry written as its coefficient vector over ζ_n, separated by `;`.
pub fn report_csv(r: &RunReport) -> Result<String, Error> {
    let mut text = csv_string(|w| {
        w.write_record(["section", "clause", "passed", "context", "row", "col", "expected", "found", "note"])?;
        let mut groups: Vec<(&str, &crate::check::CheckReport)> =
            r.sections.iter().map(|s| (s.name.as_str(), &s.report)).collect();
        if let Some(e) = &r.eigen {
            groups.push(("eigen", &e.checks));
        }
        if let Some(d) = &r.selfdual {
            groups.push(("selfdual", &d.checks));
        }
        for (name, rep) in groups {
            for c in &rep.clauses {
                let wit = c.witness.as_ref();
                let opt = |f: &dyn Fn(&crate::check::Witness) -> String| wit.map(f).unwrap_or_default();
                w.write_record([
                    name.to_string(),
                    c.name.clone(),
                    c.passed.to_string(),
                    opt(&|w| w.context.clone()),
                    opt(&|w| w.row.to_string()),
                    opt(&|w| w.col.to_string()),
                    opt(&|w| w.expected.to_string()),
                    opt(&|w| w.found.to_string()),
                    c.note.clone().unwrap_or_default(),
                ])?;
            }
        }
        Ok(())
    })?;
    if let Some(e) = &r.eigen {
        text.push('\n');
        text.push_str(&csv_string(|w| {
            let p = &e.first;
            let mut header = vec![format!("eigenspace (zeta order {})", p.order), "multiplicity".into()];
            header.extend(p.col_labels.iter().cloned());
            w.write_record(&header)?;
            for (i, row) in p.entries.iter().enumerate() {
                let mut rec = vec![p.row_labels[i].clone(), p.multiplicities[i].to_string()];
                rec.extend(
                    row.iter().map(|c| {
                        c.coeffs().iter().map(crate::exact_arith::format_rational).collect::<Vec<_>>().join(";")
                    }),
                );
                w.write_record(&rec)?;
            }
            Ok(())
        })?);
    }
    Ok(text)
}

fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let width: Vec<usize> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].chars().count()).chain([header[j].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().zip(&width).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    out.push_str(&line(&width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn eigen_tables(p: &Eigenmatrix) -> String {
    let mut header = vec![String::new(), "mult".to_string()];
    header.extend(p.col_labels.iter().cloned());
    let rows = |f: &dyn Fn(&crate::exact_arith::Cyclotomic) -> String| -> Vec<Vec<String>> {
        p.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = vec![p.row_labels[i].clone(), p.multiplicities[i].to_string()];
                r.extend(row.iter().map(f));
                r
            })
            .collect()
    };
    let mut out = format!("First eigenmatrix (ζ = e^(2πi/{})):\n", p.order);
    out.push_str(&table(&header, &rows(&|c| c.to_zeta_string())));
    out.push_str("\nDecimal values:\n");
    out.push_str(&table(&header, &rows(&|c| c.approx(3))));
    out
}

pub fn report_pretty(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} scheme, q = {}: {} vertices, {} classes", r.family, r.q, r.vertices, r.classes);
    let _ = writeln!(s, "valencies: {:?}", r.valencies);
    let _ = writeln!(s, "symmetric: {}", r.symmetric);
    if let Some(phi) = &r.phi {
        let map: Vec<String> = phi.iter().map(|e| format!("{}→{}", e.element, e.label)).collect();
        let _ = writeln!(s, "φ: {}", map.join(", "));
    }
    let mut groups: Vec<(&str, &crate::check::CheckReport)> =
        r.sections.iter().map(|x| (x.name.as_str(), &x.report)).collect();
    if let Some(e) = &r.eigen {
        groups.push(("eigen", &e.checks));
    }
    if let Some(d) = &r.selfdual {
        groups.push(("selfdual", &d.checks));
    }
    for (name, rep) in groups {
        let _ = writeln!(s, "\n[{name}]");
        for c in &rep.clauses {
            let _ = write!(s, "  {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            if let Some(n) = &c.note {
                let _ = write!(s, " ({n})");
            }
            s.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(
                    s,
                    "       at {} ({}, {}): expected {}, found {}",
                    w.context, w.row, w.col, w.expected, w.found
                );
            }
        }
    }
    if let Some(d) = &r.difference_set {
        let _ = writeln!(s, "\ndifference set: v={} k={} λ={:?} histogram={:?}", d.v, d.k, d.lambda, d.histogram);
    }
    if let Some(e) = &r.eigen {
        s.push('\n');
        s.push_str(&eigen_tables(&e.first));
    }
    if let Some(d) = &r.selfdual {
        if let Some(w) = &d.witness {
            let pairs: Vec<String> = w
                .tau
                .iter()
                .enumerate()
                .map(|(i, &e)| {
                    let rel = r.class_labels.get(i).map_or("?", String::as_str);
                    let eig = r
                        .eigen
                        .as_ref()
                        .and_then(|x| x.first.row_labels.get(e))
                        .map_or_else(|| e.to_string(), Clone::clone);
                    format!("{rel}↔{eig}")
                })
                .collect();
            let _ = writeln!(s, "\nself-duality pairing: {}", pairs.join(", "));
        }
        let direct: Vec<String> = r
            .class_labels
            .iter()
            .zip(&d.element_to_character)
            .map(|(rel, m)| format!("{rel}→{}", m.as_deref().unwrap_or("none")))
            .collect();
        let _ = writeln!(s, "a ↦ χ_a carries relations to eigenspaces: {}", direct.join(", "));
    }
    let _ = writeln!(s, "\n{}", if r.passed { "ALL PASSED" } else { "FAILED" });
    s
}

fn sweep_csv(sm: &SweepSummary) -> Result<String, Error> {
    csv_string(|w| {
        w.write_record(["q", "vertices", "classes", "passed", "ms", "failures"])?;
        for (i, r) in sm.rows.iter().enumerate() {
            let ms = sm.timings_ms.as_ref().and_then(|t| t.get(i)).map(u64::to_string).unwrap_or_default();
            w.write_record([
                r.q.to_string(),
                r.vertices.to_string(),
                r.classes.to_string(),
                r.passed.to_string(),
                ms,
                r.failures.join("; "),
            ])?;
        }
        Ok(())
    })
}

fn sweep_pretty(sm: &SweepSummary) -> String {
    let header: Vec<String> = ["q", "vertices", "classes", "result", "ms"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = sm
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                r.q.to_string(),
                r.vertices.to_string(),
                r.classes.to_string(),
                if r.passed { "pass".into() } else { format!("FAIL: {}", r.failures.join("; ")) },
                sm.timings_ms.as_ref().and_then(|t| t.get(i)).map(u64::to_string).unwrap_or_default(),
            ]
        })
        .collect();
    format!("{} sweep up to q = {}\n{}", sm.family, sm.max_q, table(&header, &rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Io(io::Error::other("disk"))), EXIT_IO);
        assert_eq!(exit_code(&Error::ConstructionMismatch("R1".into())), EXIT_FAILED);
        assert_eq!(exit_code(&Error::Singular), EXIT_FAILED);
        assert_eq!(exit_code(&Error::EvenOrder(4)), EXIT_INVALID);
        assert_eq!(exit_code(&Error::InvalidParameter("q".into())), EXIT_INVALID);
    }

    #[test]
    fn verify_flags_combine() {
        let s = scope(&[VerifyArg::Axioms, VerifyArg::Props]);
        assert!(s.axioms && s.props && !s.designs);
        assert_eq!(scope(&[VerifyArg::All]), VerifyScope::ALL);
    }
}
