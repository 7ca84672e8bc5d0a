//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! outcomes to exit codes.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::bijection::{
    eigen_forward, eigen_inverse, window_forward, window_inverse, EigenPair, MarkedPermutation,
    PermList,
};
use crate::error::{Error, Result};
use crate::four_patterns::{
    a051295_seq, classify, new_seq, table_mismatches, PatternClass, REFERENCE_TABLE,
};
use crate::perm::{
    census_with_limit, check_census_limit, par_count, word_avoids, word_is_35241ok, Permutation,
    UnderlinedPattern, DEFAULT_CENSUS_LIMIT,
};
use crate::recurrences::{bell_numbers, catalan_via_compositions, recurrence_tables};
use crate::series::eigensequence;
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "eigenperm",
    version,
    about = "Underlined-pattern permutations and the composition eigensequence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first N terms of a sequence.
    Seq(SeqArgs),
    /// Count permutations of [n] satisfying an underlined pattern.
    Count(CountArgs),
    /// Classify the 96 underlined 4-patterns.
    Classify4 {
        #[arg(long)]
        json: bool,
    },
    /// Apply the moving-window bijection or its inverse.
    Biject {
        #[arg(value_enum)]
        direction: Direction,
        #[arg(long)]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Split an OK permutation into (rho, list) or put one back together.
    Eigen {
        #[arg(value_enum)]
        direction: EigenDirection,
        #[arg(long)]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Run exhaustive verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long = "max-n", default_value_t = 7)]
        max_n: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SequenceKind {
    Eigen,
    A,
    Catalan,
    Bell,
    A051295,
    New4,
}

#[derive(Debug, Args)]
struct SeqArgs {
    #[arg(value_enum)]
    kind: SequenceKind,
    /// Number of terms.
    #[arg(long)]
    n: usize,
    /// One "index value" line per term, 1-indexed.
    #[arg(long, conflicts_with = "json")]
    bfile: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "fast")]
    brute: bool,
    /// Structural check; only for 3(5)241.
    #[arg(long)]
    fast: bool,
    /// Also require avoiding this classical pattern.
    #[arg(long = "also-avoid")]
    also_avoid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_CENSUS_LIMIT)]
    limit: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EigenDirection {
    Decompose,
    Compose,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Recurrences,
    Bijection,
    Fourpatterns,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Recurrences => Suite::Recurrences,
            SuiteArg::Bijection => Suite::Bijection,
            SuiteArg::Fourpatterns => Suite::FourPatterns,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Serialize)]
struct SeqRecord {
    n: usize,
    value: Number,
}

#[derive(Debug, Serialize, Deserialize)]
struct MarkedJson {
    permutation: Vec<u32>,
    #[serde(default)]
    marks: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ListJson {
    items: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PairJson {
    rho: Vec<u32>,
    items: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize)]
struct ClassJson {
    representative: String,
    members: Vec<String>,
    label: String,
    trivial: bool,
    counts: Vec<u64>,
}

/// Parses `argv` (program name first), writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e);
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e);
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => EXIT_INVALID_INPUT,
        Error::LimitExceeded { .. } => EXIT_LIMIT,
        Error::Classification(_) => EXIT_MISMATCH,
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("write failed: {}", e))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Seq(args) => seq(&args, out),
        Command::Count(args) => {
            let n = count(&args)?;
            writeln!(out, "{}", n).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Classify4 { json } => classify4(json, out),
        Command::Biject {
            direction,
            input,
            json,
        } => biject(direction, &input, json, out),
        Command::Eigen {
            direction,
            input,
            json,
        } => eigen(direction, &input, json, out),
        Command::Verify { suite, max_n } => {
            let report = run_suite(suite.into(), max_n)?;
            writeln!(out, "{}", report).map_err(io)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
    }
}

fn sequence_terms(kind: SequenceKind, n: usize) -> Result<Vec<String>> {
    let strings = |v: Vec<BigUint>| v.into_iter().map(|x| x.to_string()).collect();
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(match kind {
        SequenceKind::Eigen => eigensequence(n)
            .into_iter()
            .map(|x| x.to_string())
            .collect(),
        SequenceKind::A => strings(recurrence_tables(n - 1).a),
        SequenceKind::Catalan => strings(catalan_via_compositions(n - 1)?),
        SequenceKind::Bell => strings(bell_numbers(n - 1)),
        SequenceKind::A051295 => strings(a051295_seq(n - 1)),
        SequenceKind::New4 => strings(new_seq(n - 1)),
    })
}

fn seq(args: &SeqArgs, out: &mut dyn Write) -> Result<i32> {
    let terms = sequence_terms(args.kind, args.n)?;
    if args.bfile {
        for (i, t) in terms.iter().enumerate() {
            writeln!(out, "{} {}", i + 1, t).map_err(io)?;
        }
    } else if args.json {
        let records: Vec<SeqRecord> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| SeqRecord {
                n: i + 1,
                value: t.parse().expect("decimal integer"),
            })
            .collect();
        writeln!(
            out,
            "{}",
            serde_json::to_string(&records).expect("serializable")
        )
        .map_err(io)?;
    } else {
        writeln!(out, "{}", terms.join(" ")).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn count(args: &CountArgs) -> Result<u64> {
    let up: UnderlinedPattern = args.pattern.parse()?;
    let avoid: Option<Permutation> = args.also_avoid.as_deref().map(str::parse).transpose()?;
    if let Some(q) = &avoid {
        if !q.is_standard() {
            return Err(Error::InvalidInput(format!(
                "{} is not a standard pattern",
                q
            )));
        }
    }
    let avoid_ok = |w: &[u32]| avoid.as_ref().is_none_or(|q| word_avoids(w, q.entries()));
    if args.fast {
        if up != "3(5)241".parse::<UnderlinedPattern>()? {
            return Err(Error::InvalidInput(
                "--fast is only available for 3(5)241".to_string(),
            ));
        }
        check_census_limit(args.n, args.limit)?;
        return Ok(par_count(args.n, |w| word_is_35241ok(w) && avoid_ok(w)));
    }
    match &avoid {
        None => census_with_limit(&up, args.n, args.limit),
        Some(_) => {
            check_census_limit(args.n, args.limit)?;
            let ext = crate::perm::Extension::new(&up);
            Ok(par_count(args.n, |w| {
                avoid_ok(w) && crate::perm::word_satisfies(w, &ext)
            }))
        }
    }
}

fn ordered_members(class: &PatternClass) -> Vec<String> {
    let mut members: Vec<String> = class.members.iter().map(|m| m.to_string()).collect();
    members.sort();
    for (col, _) in REFERENCE_TABLE {
        let mut listed: Vec<String> = col.iter().map(|s| s.to_string()).collect();
        listed.sort();
        if listed == members {
            return col.iter().map(|s| s.to_string()).collect();
        }
    }
    members
}

fn classify4(json: bool, out: &mut dyn Write) -> Result<i32> {
    let classes = classify()?;
    let mismatches = table_mismatches(&classes);
    if json {
        let records: Vec<ClassJson> = classes
            .iter()
            .map(|c| ClassJson {
                representative: c.representative.to_string(),
                members: ordered_members(c),
                label: c.label.to_string(),
                trivial: c.trivial,
                counts: c.counts.clone(),
            })
            .collect();
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&records).expect("serializable")
        )
        .map_err(io)?;
    } else {
        write!(out, "{}", classification_table(&classes)).map_err(io)?;
        for m in &mismatches {
            writeln!(out, "mismatch: {}", m).map_err(io)?;
        }
    }
    Ok(if mismatches.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

/// Nontrivial classes as columns with their labels underneath, then the
/// trivial classes one per line.
pub fn classification_table(classes: &[PatternClass]) -> String {
    let columns: Vec<(Vec<String>, String)> = classes
        .iter()
        .filter(|c| !c.trivial)
        .map(|c| (ordered_members(c), c.label.to_string()))
        .collect();
    let width = columns
        .iter()
        .flat_map(|(m, l)| m.iter().chain(std::iter::once(l)))
        .map(String::len)
        .max()
        .unwrap_or(0)
        + 2;
    let height = columns.iter().map(|(m, _)| m.len()).max().unwrap_or(0);
    let mut s = String::new();
    let line = |cells: Vec<&str>| -> String {
        let row: String = cells
            .iter()
            .map(|c| format!("{:<width$}", c, width = width))
            .collect();
        format!("{}\n", row.trim_end())
    };
    for r in 0..height {
        s += &line(
            columns
                .iter()
                .map(|(m, _)| m.get(r).map_or("", String::as_str))
                .collect(),
        );
    }
    s += &line(columns.iter().map(|(_, l)| l.as_str()).collect());
    let trivial: Vec<&PatternClass> = classes.iter().filter(|c| c.trivial).collect();
    let count: usize = trivial.iter().map(|c| c.members.len()).sum();
    s += &format!(
        "\ntrivial: {} patterns in {} classes\n",
        count,
        trivial.len()
    );
    for c in trivial {
        let members: Vec<String> = c.members.iter().map(|m| m.to_string()).collect();
        s += &format!("{} {}: {}\n", c.label, c.members.len(), members.join(" "));
    }
    s
}

fn is_json(input: &str) -> bool {
    input.trim_start().starts_with('{')
}

fn from_json<T: serde::de::DeserializeOwned>(input: &str) -> Result<T> {
    serde_json::from_str(input).map_err(|e| Error::InvalidInput(format!("malformed JSON: {}", e)))
}

fn parse_marked(input: &str) -> Result<MarkedPermutation> {
    if is_json(input) {
        let m: MarkedJson = from_json(input)?;
        MarkedPermutation::new(
            Permutation::new(m.permutation)?,
            m.marks.into_iter().collect(),
        )
    } else {
        input.parse()
    }
}

fn parse_list(input: &str) -> Result<PermList> {
    if is_json(input) {
        let l: ListJson = from_json(input)?;
        l.items
            .into_iter()
            .map(Permutation::new)
            .collect::<Result<_>>()
            .map(PermList)
    } else {
        input.parse()
    }
}

fn parse_permutation(input: &str) -> Result<Permutation> {
    if is_json(input) {
        let m: MarkedJson = from_json(input)?;
        if !m.marks.is_empty() {
            return Err(Error::InvalidInput("unexpected marks".to_string()));
        }
        Permutation::new(m.permutation)
    } else {
        input.parse()
    }
}

fn parse_pair(input: &str) -> Result<EigenPair> {
    if is_json(input) {
        let p: PairJson = from_json(input)?;
        Ok(EigenPair {
            rho: Permutation::new(p.rho)?,
            lists: PermList(
                p.items
                    .into_iter()
                    .map(Permutation::new)
                    .collect::<Result<_>>()?,
            ),
        })
    } else {
        input.parse()
    }
}

fn list_json(v: &PermList) -> String {
    let l = ListJson {
        items: v.items().iter().map(|q| q.entries().to_vec()).collect(),
    };
    serde_json::to_string(&l).expect("serializable")
}

fn marked_json(m: &MarkedPermutation) -> String {
    let j = MarkedJson {
        permutation: m.base().entries().to_vec(),
        marks: m.marks().iter().copied().collect(),
    };
    serde_json::to_string(&j).expect("serializable")
}

fn biject(dir: Direction, input: &str, json: bool, out: &mut dyn Write) -> Result<i32> {
    let text = match dir {
        Direction::Forward => {
            let v = window_forward(&parse_marked(input)?)?;
            if json {
                list_json(&v)
            } else {
                v.to_string()
            }
        }
        Direction::Inverse => {
            let m = window_inverse(&parse_list(input)?)?;
            if json {
                marked_json(&m)
            } else {
                m.to_string()
            }
        }
    };
    writeln!(out, "{}", text).map_err(io)?;
    Ok(EXIT_OK)
}

fn eigen(dir: EigenDirection, input: &str, json: bool, out: &mut dyn Write) -> Result<i32> {
    let text = match dir {
        EigenDirection::Decompose => {
            let pair = eigen_forward(&parse_permutation(input)?)?;
            if json {
                let j = PairJson {
                    rho: pair.rho.entries().to_vec(),
                    items: pair
                        .lists
                        .items()
                        .iter()
                        .map(|q| q.entries().to_vec())
                        .collect(),
                };
                serde_json::to_string(&j).expect("serializable")
            } else {
                pair.to_string()
            }
        }
        EigenDirection::Compose => {
            let p = eigen_inverse(&parse_pair(input)?)?;
            if json {
                marked_json(&MarkedPermutation::unmarked(p))
            } else {
                p.to_string()
            }
        }
    };
    writeln!(out, "{}", text).map_err(io)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("eigenperm").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn seq_eigen() {
        let (code, out, _) = call(&["seq", "eigen", "--n", "7"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1 1 2 6 23 104 531\n");
    }

    #[test]
    fn seq_formats() {
        let (_, out, _) = call(&["seq", "bell", "--n", "4", "--bfile"]);
        assert_eq!(out, "1 1\n2 1\n3 2\n4 5\n");
        let (_, out, _) = call(&["seq", "a", "--n", "3", "--json"]);
        assert_eq!(
            out,
            "[{\"n\":1,\"value\":1},{\"n\":2,\"value\":1},{\"n\":3,\"value\":2}]\n"
        );
        let (_, out, _) = call(&["seq", "new4", "--n", "9"]);
        assert_eq!(out, "1 1 2 5 15 55 248 1357 8809\n");
        let (_, out, _) = call(&["seq", "a051295", "--n", "0"]);
        assert_eq!(out, "\n");
    }

    #[test]
    fn seq_json_keeps_big_values_exact() {
        let (_, out, _) = call(&["seq", "eigen", "--n", "40", "--json"]);
        let b = eigensequence(40);
        assert!(out.contains(&format!("\"value\":{}", b[39])));
    }

    #[test]
    fn seq_catalan_limit() {
        let (code, _, err) = call(&["seq", "catalan", "--n", "30"]);
        assert_eq!(code, EXIT_LIMIT);
        assert!(err.contains("limit"));
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            call(&["count", "--pattern", "3(5)241", "--n", "4"]).1,
            "23\n"
        );
        assert_eq!(
            call(&["count", "--pattern", "3(5)241", "--n", "6", "--fast"]).1,
            "531\n"
        );
        assert_eq!(
            call(&["count", "--pattern", "32(4)1", "--n", "5", "--brute"]).1,
            "52\n"
        );
    }

    #[test]
    fn count_errors() {
        assert_eq!(
            call(&["count", "--pattern", "32(4)1", "--n", "4", "--fast"]).0,
            EXIT_INVALID_INPUT
        );
        assert_eq!(
            call(&["count", "--pattern", "3241", "--n", "4"]).0,
            EXIT_INVALID_INPUT
        );
        assert_eq!(
            call(&["count", "--pattern", "3(5)241", "--n", "12"]).0,
            EXIT_LIMIT
        );
        assert_eq!(
            call(&["count", "--pattern", "3(5)241", "--n", "4", "--bogus"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["count", "--pattern", "3(5)241"]).0, EXIT_USAGE);
    }

    #[test]
    fn count_also_avoid() {
        let (code, out, _) = call(&[
            "count",
            "--pattern",
            "3(5)241",
            "--n",
            "5",
            "--also-avoid",
            "2 3 1",
        ]);
        assert_eq!(code, 0);
        let expected = crate::verify::permutations_where(5, |p| {
            crate::perm::fast_35241ok(p) && word_avoids(p.entries(), &[2, 3, 1])
        })
        .len();
        assert_eq!(out, format!("{}\n", expected));
    }

    const WORKED: &str =
        "3 1 5 2 8 4 6 12 7 15 9 17 10 11 20 25 26^ 13 27 28^ 14 29^ 16 30 18 19 21 22 23 24";
    const WORKED_IMAGE: &str =
        "2 1 4 5 3 / 2 3 1 / 3 1 5 2 7 4 6 9 8 11 10 / 3 1 2 6 11 4 5 7 8 9 10";

    #[test]
    fn biject_worked_example() {
        let (code, out, _) = call(&["biject", "forward", "--input", WORKED]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), WORKED_IMAGE);
        let (_, out, _) = call(&["biject", "inverse", "--input", WORKED_IMAGE]);
        assert_eq!(out.trim(), WORKED);
    }

    #[test]
    fn biject_json_round_trip() {
        let (_, json, _) = call(&["biject", "forward", "--input", WORKED, "--json"]);
        assert!(json.starts_with("{\"items\":[[2,1,4,5,3]"));
        let (_, back, _) = call(&["biject", "inverse", "--input", json.trim(), "--json"]);
        let (_, text, _) = call(&["biject", "forward", "--input", back.trim()]);
        assert_eq!(text.trim(), WORKED_IMAGE);
    }

    #[test]
    fn biject_rejects_bad_input() {
        let (code, _, err) = call(&["biject", "forward", "--input", "3 2 1"]);
        assert_eq!(code, EXIT_INVALID_INPUT);
        assert!(err.contains("321"));
        assert_eq!(
            call(&["biject", "forward", "--input", "1 x 2"]).0,
            EXIT_INVALID_INPUT
        );
        assert_eq!(
            call(&["biject", "inverse", "--input", "{\"items\": 3}"]).0,
            EXIT_INVALID_INPUT
        );
        assert_eq!(call(&["biject", "sideways", "--input", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn eigen_round_trip() {
        let pi = "2 8 3 1 11 4 6 5 13 7 15 9 10 14 12";
        let (code, pair, _) = call(&["eigen", "decompose", "--input", pi]);
        assert_eq!(code, 0);
        assert!(pair.starts_with("1 2 4 3 ; "));
        let (_, back, _) = call(&["eigen", "compose", "--input", pair.trim()]);
        assert_eq!(back.trim(), pi);

        let (_, json, _) = call(&["eigen", "decompose", "--input", pi, "--json"]);
        let (_, back, _) = call(&["eigen", "compose", "--input", json.trim(), "--json"]);
        let (_, again, _) = call(&["eigen", "decompose", "--input", back.trim(), "--json"]);
        assert_eq!(again, json);
    }

    #[test]
    fn verify_small() {
        let (code, out, _) = call(&["verify", "--suite", "bijection", "--max-n", "4"]);
        assert_eq!(code, 0, "{}", out);
        assert!(out.contains("PASS"));
        assert_eq!(call(&["verify", "--suite", "nothing"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--max-n", "50"]).0, EXIT_LIMIT);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, err) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("classify4"));
        assert!(err.is_empty());
    }
}
