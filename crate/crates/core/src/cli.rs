//! Command-line front end. Exit codes: 0 success, 1 failed identity check,
//! 2 usage or guard error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bijections::{
    self, area_flip, complement, f_inverse, f_levels_to_cycles, g_ascents, g_inverse, levels_involution,
    sper_involution, CycleForm,
};
use crate::gfseries::{self, parse_rational, Rational, RationalSeries, TotalGf};
use crate::invseq::{self, enumerate, from_permutation, to_permutation, InversionSequence, Permutation};
use crate::recur::{self, DistTable};
use crate::verify::{self, GfPoint, Suite, VerifyOptions};

pub const MAX_ENUMERATE: usize = 12;
pub const MAX_BRUTE: usize = 10;
pub const MAX_VERIFY_N: usize = 9;
pub const MAX_VERIFY_ORDER: usize = 12;
pub const MAX_SERIES_ORDER: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "invbar",
    version,
    about = "Bargraph statistics on inversion sequences"
)]
pub struct Cli {
    /// Output format. Each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    AreaSper,
    Lda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Brute,
    Lemma,
    Threeterm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapName {
    F,
    FInverse,
    G,
    GInverse,
    Complement,
    AreaFlip,
    SperInvolution,
    LevelsInvolution,
    ToPerm,
    FromPerm,
    Cycles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesName {
    #[value(name = "A")]
    A,
    #[value(name = "A1")]
    A1,
    AreaGf,
    Tote1,
    Tote2,
    Tote3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    All,
    Recurrences,
    Totals,
    Signbalance,
    Bijections,
    Gf,
}

impl From<SuiteName> for Suite {
    fn from(s: SuiteName) -> Self {
        match s {
            SuiteName::All => Suite::All,
            SuiteName::Recurrences => Suite::Recurrences,
            SuiteName::Totals => Suite::Totals,
            SuiteName::Signbalance => Suite::SignBalance,
            SuiteName::Bijections => Suite::Bijections,
            SuiteName::Gf => Suite::Gf,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number (expected a or a/b, b ≠ 0)"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every inversion sequence of length n.
    Enumerate {
        #[arg(short)]
        n: usize,
    },
    /// Bargraph statistics of one sequence, e.g. `1,2,1,3`.
    Stats { seq: String },
    /// Distribution table up to row n.
    Dist {
        kind: DistKind,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Engine::Lemma)]
        engine: Engine,
    },
    /// Closed-form statistic totals over all sequences of length n.
    Totals {
        #[arg(short)]
        n: usize,
    },
    /// Apply a map to a sequence, permutation or cycle form.
    Map { map: MapName, input: String },
    /// Coefficients of x^0..x^N of a generating function.
    Series {
        which: SeriesName,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        p: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        y: Option<Rational>,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Run identity suites and print a JSON report.
    Verify {
        #[arg(value_enum, default_value_t = SuiteName::All)]
        suite: SuiteName,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        p: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        q: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        r: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        y: Option<Rational>,
        #[arg(long, hide = true)]
        inject_corruption: bool,
    },
}

/// Usage or guard error; maps to exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

/// Result of a command: its rendered output and whether every check passed.
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, ok: true }
    }
}

fn guard(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

fn parse_seq(s: &str) -> Result<InversionSequence, CliError> {
    s.parse().map_err(|e: invseq::SeqError| usage(e.to_string()))
}

fn parse_perm(s: &str) -> Result<Permutation, CliError> {
    s.parse().map_err(|e: invseq::SeqError| usage(e.to_string()))
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable value")
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Enumerate { n } => {
            let n = *n;
            guard((1..=MAX_ENUMERATE).contains(&n), || {
                format!("-n must be in 1..={MAX_ENUMERATE}")
            })?;
            let out = match fmt.unwrap_or(Format::Text) {
                Format::Json => {
                    let all: Vec<Vec<u32>> = enumerate(n).map(InversionSequence::into_vec).collect();
                    serde_json::to_string(&all).expect("serializable")
                }
                Format::Csv | Format::Text => {
                    let mut s = String::new();
                    for seq in enumerate(n) {
                        s.push_str(&seq.to_string());
                        s.push('\n');
                    }
                    s
                }
            };
            Ok(Outcome::ok(out))
        }
        Command::Stats { seq } => {
            let seq = parse_seq(seq)?;
            let st = invseq::stats(&seq);
            let out = match fmt.unwrap_or(Format::Json) {
                Format::Json => to_json(&st),
                Format::Csv => format!(
                    "area,sper,levels,descents,ascents\n{},{},{},{},{}\n",
                    st.area, st.sper, st.levels, st.descents, st.ascents
                ),
                Format::Text => format!(
                    "area {}\nsper {}\nlevels {}\ndescents {}\nascents {}\n",
                    st.area, st.sper, st.levels, st.descents, st.ascents
                ),
            };
            Ok(Outcome::ok(out))
        }
        Command::Dist { kind, n, engine } => {
            let n = *n;
            guard(n >= 1, || "-n must be at least 1".into())?;
            if *engine == Engine::Brute {
                guard(n <= MAX_BRUTE, || {
                    format!("the brute engine is limited to n ≤ {MAX_BRUTE}")
                })?;
            }
            let table = dist_table(*kind, *engine, n);
            let out = match fmt.unwrap_or(Format::Csv) {
                Format::Json => table.to_json(),
                Format::Csv => table.to_csv(),
                Format::Text => recur::render_table(&table),
            };
            Ok(Outcome::ok(out))
        }
        Command::Totals { n } => {
            let n = *n;
            guard(n >= 1, || "-n must be at least 1".into())?;
            let rows = [
                ("area", recur::total_area(n)),
                ("sper", recur::total_sper(n)),
                ("levels", recur::total_levels(n)),
                ("descents", recur::total_descents(n)),
                ("ascents", recur::total_ascents(n)),
            ];
            let out = match fmt.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("n".into(), json!(n));
                    for (k, v) in &rows {
                        obj.insert((*k).into(), json!(v.to_string()));
                    }
                    to_json(&obj)
                }
                Format::Csv => {
                    let mut s = String::from("statistic,total\n");
                    for (k, v) in &rows {
                        s.push_str(&format!("{k},{v}\n"));
                    }
                    s
                }
                Format::Text => rows.iter().map(|(k, v)| format!("{k} {v}\n")).collect(),
            };
            Ok(Outcome::ok(out))
        }
        Command::Map { map, input } => {
            let result = apply_map(*map, input)?;
            let text = result.clone().unwrap_or_else(|| "undefined".to_string());
            let out = match fmt.unwrap_or(Format::Text) {
                Format::Json => to_json(&json!({
                    "map": map.to_possible_value().map(|v| v.get_name().to_string()),
                    "input": input,
                    "output": result,
                })),
                Format::Csv | Format::Text => format!("{text}\n"),
            };
            Ok(Outcome::ok(out))
        }
        Command::Series { which, p, y, order } => {
            let order = *order;
            guard(order <= MAX_SERIES_ORDER, || {
                format!("--order must be at most {MAX_SERIES_ORDER}")
            })?;
            let s = series(*which, p.as_ref(), y.as_ref(), order)?;
            Ok(Outcome::ok(render_series(&s, fmt.unwrap_or(Format::Text))))
        }
        Command::Verify {
            suite,
            nmax,
            order,
            seed,
            p,
            q,
            r,
            y,
            inject_corruption,
        } => {
            guard((3..=MAX_VERIFY_N).contains(nmax), || {
                format!("--nmax must be in 3..={MAX_VERIFY_N}")
            })?;
            guard((1..=MAX_VERIFY_ORDER).contains(order), || {
                format!("--order must be in 1..={MAX_VERIFY_ORDER}")
            })?;
            let opts = VerifyOptions {
                suite: (*suite).into(),
                nmax: *nmax,
                order: *order,
                seed: *seed,
                point: GfPoint {
                    p: p.clone(),
                    q: q.clone(),
                    r: r.clone(),
                    y: y.clone(),
                },
                corrupt: *inject_corruption,
            };
            let records = verify::run(&opts);
            let ok = verify::all_passed(&records);
            Ok(Outcome {
                output: to_json(&records),
                ok,
            })
        }
    }
}

fn dist_table(kind: DistKind, engine: Engine, n: usize) -> DistTable {
    match (kind, engine) {
        (DistKind::AreaSper, Engine::Brute) => invseq::brute_dist_area_sper(n),
        (DistKind::AreaSper, Engine::Lemma) => recur::a_table_lemma(n),
        (DistKind::AreaSper, Engine::Threeterm) => recur::a_table_threeterm(n),
        (DistKind::Lda, Engine::Brute) => invseq::brute_dist_lda(n),
        (DistKind::Lda, Engine::Lemma) => recur::b_table_lemma(n),
        (DistKind::Lda, Engine::Threeterm) => recur::b_table_threeterm(n),
    }
}

fn apply_map(map: MapName, input: &str) -> Result<Option<String>, CliError> {
    let out = match map {
        MapName::F => Some(f_levels_to_cycles(&parse_seq(input)?).to_string()),
        MapName::FInverse => {
            let c: CycleForm = input
                .parse()
                .map_err(|e: bijections::BijectionError| usage(e.to_string()))?;
            Some(f_inverse(&c).to_string())
        }
        MapName::G => Some(g_ascents(&parse_seq(input)?).to_string()),
        MapName::GInverse => Some(g_inverse(&parse_perm(input)?).to_string()),
        MapName::Complement => Some(complement(&parse_seq(input)?).to_string()),
        MapName::AreaFlip => Some(
            area_flip(&parse_seq(input)?)
                .map_err(|e| usage(e.to_string()))?
                .to_string(),
        ),
        MapName::SperInvolution => sper_involution(&parse_seq(input)?).map(|s| s.to_string()),
        MapName::LevelsInvolution => levels_involution(&parse_seq(input)?).map(|s| s.to_string()),
        MapName::ToPerm => Some(to_permutation(&parse_seq(input)?).to_string()),
        MapName::FromPerm => Some(from_permutation(&parse_perm(input)?).to_string()),
        MapName::Cycles => Some(CycleForm::from_permutation(&parse_perm(input)?).to_string()),
    };
    Ok(out)
}

fn series(
    which: SeriesName,
    p: Option<&Rational>,
    y: Option<&Rational>,
    order: usize,
) -> Result<RationalSeries, CliError> {
    let need =
        |v: Option<&Rational>, name: &str| v.cloned().ok_or_else(|| usage(format!("--{name} is required")));
    let res = match which {
        SeriesName::A => gfseries::expand_a_closed(&need(p, "p")?, &need(y, "y")?, order),
        SeriesName::A1 => gfseries::expand_a1_closed(&need(p, "p")?, order),
        SeriesName::AreaGf => gfseries::total_gf_closed(TotalGf::Area, &need(y, "y")?, order),
        SeriesName::Tote1 => gfseries::total_gf_closed(TotalGf::Levels, &need(y, "y")?, order),
        SeriesName::Tote2 => gfseries::total_gf_closed(TotalGf::Descents, &need(y, "y")?, order),
        SeriesName::Tote3 => gfseries::total_gf_closed(TotalGf::Ascents, &need(y, "y")?, order),
    };
    res.map_err(|e| usage(e.to_string()))
}

fn render_series(s: &RationalSeries, fmt: Format) -> String {
    let coeffs = s.coeff_strings();
    match fmt {
        Format::Json => to_json(&coeffs),
        Format::Csv => {
            let mut out = String::from("k,coeff\n");
            for (k, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("{k},{c}\n"));
            }
            out
        }
        Format::Text => coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("x^{k}: {c}\n"))
            .collect(),
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut output = outcome.output;
    if !output.is_empty() && !output.ends_with('\n') {
        output.push('\n');
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output),
        None => std::io::stdout().lock().write_all(output.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 2;
    }
    if outcome.ok {
        0
    } else {
        eprintln!("error: one or more identity checks failed");
        1
    }
}
