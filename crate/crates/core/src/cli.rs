//! The `qhorn` command-line tool.
//!
//! Every subcommand writes plain line records to `out`. Failures print a
//! single `ERROR <code>: <message>` line to `err` and exit with 2 (bad input)
//! or 3 (a computational cap was hit). Membership checks exit 1 for "no",
//! and self-tests exit 1 when any comparison disagrees.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

use crate::cone::{self, DominantWeight, SigmaVector, Violation};
use crate::error::Error;
use crate::euler::Weight;
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::harness;
use crate::horn::{HornEngine, DEFAULT_CAP};
use crate::lp::DEFAULT_LP_CAP;
use crate::lr::{self, Partition, StarChecker};
use crate::model::{parse_quiver, parse_subfamily, subquotient, LabeledFamily, Quiver};
use crate::oracle::{self, OracleConfig};
use crate::par::Parallelism;

#[derive(Debug, Parser)]
#[command(name = "qhorn", version, about = "Horn inequalities for quiver Mumford cones")]
struct Cli {
    /// Spread engine work over all cores (output is unchanged).
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Theo1,
    Theo2,
    Theo3,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the Horn subfamilies of the family in FILE with their Euler numbers.
    Horn {
        file: PathBuf,
        /// Only members with eul = 0.
        #[arg(long)]
        essential: bool,
        /// Largest number of subfamilies to enumerate.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Emit the trace equality and one inequality per Horn member.
    Inequalities {
        file: PathBuf,
        #[arg(long)]
        essential: bool,
        /// Remove inequalities implied by the others (exact LP).
        #[arg(long)]
        prune: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        /// Largest LP tableau, in cells.
        #[arg(long, default_value_t = DEFAULT_LP_CAP)]
        lp_cap: usize,
    },
    /// Cone membership of the weight in WEIGHTS (exit 0 member, 1 not).
    Check {
        file: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
    /// Emit the inequalities of the semi-invariant subcone.
    Sigma { file: PathBuf },
    /// Membership of a constant-per-vertex weight such as `x=1,y=-1`.
    SigmaCheck {
        file: PathBuf,
        #[arg(long)]
        sigma: String,
    },
    /// Covering, Ressayre and Horn-element status of one subfamily.
    Classify {
        file: PathBuf,
        #[arg(long = "K", value_name = "LITERAL")]
        k: String,
    },
    /// Randomized rank report for the sub/quotient pair of one subfamily.
    Oracle {
        file: PathBuf,
        #[arg(long = "K", value_name = "LITERAL")]
        k: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
    },
    /// Compare the Horn recursion with the rank oracle.
    #[command(group(ArgGroup::new("input").required(true).args(["file", "sweep"])))]
    Selftest {
        file: Option<PathBuf>,
        /// `V,A,N`: every quiver with at most V vertices and A arrows, every
        /// canonical family with all n_x <= N.
        #[arg(long, value_name = "V,A,N")]
        sweep: Option<String>,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "theo1")]
        mode: Mode,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Random pairs per quiver in theo2 mode.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
    /// Littlewood-Richardson coefficients.
    Lr {
        #[arg(long)]
        lam: String,
        #[arg(long)]
        mu: String,
        /// Print only this coefficient; otherwise list every nonzero one.
        #[arg(long)]
        nu: Option<String>,
        /// Keep only ν with at most this many rows.
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Compare an LR multiplicity with star-quiver cone membership.
    StarCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// One partition per source; repeat the flag.
        #[arg(long, required = true)]
        lam: Vec<String>,
        #[arg(long)]
        mu: String,
    },
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

/// Parses `args` (program name first), runs one subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "ERROR usage: {first}");
            return 2;
        }
    };
    let mode = Parallelism::from_flag(cli.parallel);
    match dispatch(cli.command, mode) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
                return 2;
            }
            code
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "ERROR {}: {}", e.code(), one_line(&e.to_string()));
            e.exit_code()
        }
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(err, "ERROR io: {}: {}", path.display(), one_line(&e.to_string()));
            2
        }
    }
}

fn one_line(s: &str) -> String {
    s.lines().collect::<Vec<_>>().join(" ")
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(path: &Path) -> std::result::Result<(Quiver, LabeledFamily), Failure> {
    parse_quiver(&read(path)?).map_err(Failure::Lib)
}

fn dispatch(command: Command, mode: Parallelism) -> Outcome {
    match command {
        Command::Horn { file, essential, cap } => {
            let (q, j) = load(&file)?;
            let engine = HornEngine::new(&q).with_cap(cap).with_parallelism(mode);
            let members = if essential { engine.essential_horn(&j)? } else { engine.horn_families(&j)? };
            let mut s = String::new();
            for m in &members {
                let _ = writeln!(s, "K\t{}\teul={}", m.sub.to_braced(&q, &j), m.eul);
            }
            let _ = writeln!(s, "TOTAL {}", members.len());
            Ok((s, 0))
        }
        Command::Inequalities { file, essential, prune, cap, lp_cap } => {
            let (q, j) = load(&file)?;
            let engine = HornEngine::new(&q).with_cap(cap).with_parallelism(mode);
            let mut sys = cone::cone_inequalities(&engine, &j, essential)?;
            if prune {
                sys = sys.prune(lp_cap)?;
            }
            Ok((sys.render(), 0))
        }
        Command::Check { file, weights } => {
            let (q, j) = load(&file)?;
            let weight = parse_weights(&q, &j, &read(&weights)?)?;
            let weight = DominantWeight::new(&q, &j, weight)?;
            let engine = HornEngine::new(&q).with_parallelism(mode);
            let sys = cone::cone_inequalities(&engine, &j, true)?;
            Ok(match sys.first_violation(&weight)? {
                None => ("MEMBER\n".into(), 0),
                Some(Violation::Trace) => ("NOT_MEMBER\ttrace\n".into(), 1),
                Some(Violation::Inequality(i)) => {
                    let ineq = &sys.inequalities[i];
                    (format!("NOT_MEMBER\tK\t{}\teul={}\n", ineq.sub.to_braced(&q, &j), ineq.eul), 1)
                }
            })
        }
        Command::Sigma { file } => {
            let (q, j) = load(&file)?;
            let engine = HornEngine::new(&q).with_parallelism(mode);
            Ok((cone::sigma_inequalities(&engine, &j)?.render(), 0))
        }
        Command::SigmaCheck { file, sigma } => {
            let (q, j) = load(&file)?;
            let sigma = parse_sigma(&q, &sigma)?;
            let engine = HornEngine::new(&q).with_parallelism(mode);
            Ok(if cone::sigma_contains(&engine, &j, &sigma)? {
                ("MEMBER\n".into(), 0)
            } else {
                ("NOT_MEMBER\n".into(), 1)
            })
        }
        Command::Classify { file, k } => {
            let (q, j) = load(&file)?;
            let sub = parse_subfamily(&q, &j, &k)?;
            let engine = HornEngine::new(&q).with_parallelism(mode);
            let c = cone::classify_element(&engine, &j, &sub)?;
            let s = format!(
                "CLASSIFY K={} eul={} admissible={} covering={} ressayre={} horn_element={}\n",
                sub.to_literal(&q, &j),
                c.eul,
                u8::from(c.admissible),
                u8::from(c.covering),
                u8::from(c.ressayre),
                u8::from(c.horn_element)
            );
            Ok((s, 0))
        }
        Command::Oracle { file, k, trials, seed, prime } => {
            if trials == 0 {
                return Err(Error::Invalid("--trials must be at least 1".into()).into());
            }
            let (q, j) = load(&file)?;
            let sub = parse_subfamily(&q, &j, &k)?;
            let cfg =
                OracleConfig::new(seed).with_trials(trials).with_field(PrimeField::new(prime)?).with_parallelism(mode);
            let (s, t) = subquotient(&q, &j, &sub)?;
            let r = oracle::ext_min(&q, &s, &t, &cfg)?;
            let det = if r.rows == r.cols {
                u8::from(oracle::det_p_nonzero(&q, &s, &t, &cfg)?).to_string()
            } else {
                "n/a".into()
            };
            let text = format!(
                "ORACLE K={} rows={} cols={} rank={} ext_min={} hom_min={} eul={} det={}\n",
                sub.to_literal(&q, &j),
                r.rows,
                r.cols,
                r.rank,
                r.ext_min,
                r.hom_min,
                r.eul,
                det
            );
            Ok((text, 0))
        }
        Command::Selftest { file, sweep, seed, mode: which, trials, pairs } => {
            if trials == 0 {
                return Err(Error::Invalid("--trials must be at least 1".into()).into());
            }
            let cfg = OracleConfig::new(seed).with_trials(trials).with_parallelism(mode);
            match (file, sweep) {
                (Some(file), _) => {
                    let (q, j) = load(&file)?;
                    selftest_file(&q, &j, which, pairs, &cfg)
                }
                (None, Some(bounds)) => selftest_sweep(&bounds, which, pairs, &cfg),
                (None, None) => unreachable!("clap requires one input"),
            }
        }
        Command::Lr { lam, mu, nu, rows } => {
            let lam: Partition = lam.parse()?;
            let mu: Partition = mu.parse()?;
            let mut s = String::new();
            match nu {
                Some(nu) => {
                    let nu: Partition = nu.parse()?;
                    let _ = writeln!(s, "LR {lam} {mu} {nu} = {}", lr::lr_coefficient(&lam, &mu, &nu));
                }
                None => {
                    let height = lam.len() + mu.len();
                    let width = lam.part(0) + mu.part(0);
                    let bound = Partition::new(vec![width; height])?;
                    for nu in lr::partitions_within(&bound, lam.size() + mu.size()) {
                        if rows.is_some_and(|r| nu.len() > r) {
                            continue;
                        }
                        let c = lr::lr_coefficient(&lam, &mu, &nu);
                        if c > 0 {
                            let _ = writeln!(s, "LR {lam} {mu} {nu} = {c}");
                        }
                    }
                }
            }
            Ok((s, 0))
        }
        Command::StarCheck { n, s, lam, mu } => {
            if lam.len() != s {
                return Err(Error::Invalid(format!("--s {s} needs {s} --lam flags, got {}", lam.len())).into());
            }
            let lambdas = lam.iter().map(|l| l.parse()).collect::<crate::Result<Vec<Partition>>>()?;
            let mu: Partition = mu.parse()?;
            let c = StarChecker::new(n, s)?.check(&lambdas, &mu)?;
            let names: Vec<String> = lambdas.iter().map(Partition::to_string).collect();
            let text = format!(
                "STAR n={n} s={s} lam={} mu={mu} multiplicity={} cone={} agree={}\n",
                names.join(","),
                c.multiplicity,
                u8::from(c.cone),
                u8::from(c.agree())
            );
            Ok((text, if c.agree() { 0 } else { 1 }))
        }
    }
}

/// Lines `weight <vertex> v1 ... vk`, values aligned with ascending labels.
/// Vertices that are not listed get the zero weight.
fn parse_weights(quiver: &Quiver, ambient: &LabeledFamily, text: &str) -> crate::Result<Weight> {
    let mut values: Vec<Option<Vec<Rational64>>> = vec![None; quiver.vertex_count()];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        if tokens.next() != Some("weight") {
            return Err(Error::Parse { line, msg: "expected `weight <vertex> <values>`".into() });
        }
        let name = tokens.next().ok_or_else(|| Error::Parse { line, msg: "missing vertex name".into() })?;
        let x = quiver.vertex_index(name).ok_or_else(|| Error::UnknownVertex { line, name: name.into() })?;
        if values[x].is_some() {
            return Err(Error::Parse { line, msg: format!("second weight line for vertex `{name}`") });
        }
        let vals = tokens
            .map(|t| {
                t.parse::<Rational64>()
                    .map_err(|_| Error::Parse { line, msg: format!("`{t}` is not a rational number") })
            })
            .collect::<crate::Result<Vec<_>>>()?;
        if vals.len() != ambient.labels(x).len() {
            return Err(Error::SizeMismatch(format!(
                "line {line}: vertex `{name}` has {} labels but {} values",
                ambient.labels(x).len(),
                vals.len()
            )));
        }
        values[x] = Some(vals);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.unwrap_or_else(|| vec![Rational64::from_integer(0); ambient.labels(x).len()]))
        .collect();
    Ok(Weight::from_values(values))
}

/// `x=1,y=-1/2`; unlisted vertices get 0.
fn parse_sigma(quiver: &Quiver, text: &str) -> crate::Result<SigmaVector> {
    let mut sigma = vec![Rational64::from_integer(0); quiver.vertex_count()];
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, value) =
            item.split_once('=').ok_or_else(|| Error::Invalid(format!("`{item}` is not of the form vertex=value")))?;
        let x = quiver
            .vertex_index(name.trim())
            .ok_or_else(|| Error::UnknownVertex { line: 0, name: name.trim().into() })?;
        sigma[x] =
            value.trim().parse().map_err(|_| Error::Invalid(format!("`{}` is not a rational number", value.trim())))?;
    }
    Ok(SigmaVector(sigma))
}

fn parse_bounds(text: &str) -> crate::Result<(usize, usize, usize)> {
    let parts = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Invalid(format!("sweep bounds `{text}` must be V,A,N")))?;
    match parts.as_slice() {
        &[v, a, n] if v >= 1 => Ok((v, a, n)),
        _ => Err(Error::Invalid(format!("sweep bounds `{text}` must be V,A,N with V >= 1"))),
    }
}

/// Agreement count and the report lines for one family.
fn selftest_group(
    q: &Quiver,
    j: &LabeledFamily,
    which: Mode,
    pairs: usize,
    cfg: &OracleConfig,
    only_disagreements: bool,
) -> crate::Result<(usize, usize, String)> {
    let engine = HornEngine::new(q).with_parallelism(cfg.mode);
    let mut lines = String::new();
    let (agree, total) = match which {
        Mode::Theo1 => {
            let inst = harness::theo1(&engine, j, cfg)?;
            let shown: Vec<_> = inst.iter().filter(|i| !only_disagreements || !i.agree()).cloned().collect();
            harness::render_theo1(q, j, &shown, &mut lines);
            (inst.iter().filter(|i| i.agree()).count(), inst.len())
        }
        Mode::Theo2 => {
            let max_dim = j.dims().0.iter().copied().max().unwrap_or(0);
            let max_label = j.all_labels().iter().flatten().copied().max().unwrap_or(1);
            let checks = harness::theo2(&engine, pairs, max_dim, max_label, cfg)?;
            let shown: Vec<_> = checks.iter().filter(|c| !only_disagreements || !c.agree()).cloned().collect();
            harness::render_theo2(q, &shown, &mut lines);
            (checks.iter().filter(|c| c.agree()).count(), checks.len())
        }
        Mode::Theo3 => {
            let checks = harness::theo3(&engine, j, cfg)?;
            let shown: Vec<_> = checks.iter().filter(|c| !only_disagreements || !c.agree()).cloned().collect();
            harness::render_theo3(q, j, &shown, &mut lines);
            (checks.iter().filter(|c| c.agree()).count(), checks.len())
        }
    };
    Ok((agree, total, lines))
}

fn selftest_file(q: &Quiver, j: &LabeledFamily, which: Mode, pairs: usize, cfg: &OracleConfig) -> Outcome {
    let (agree, total, mut s) = selftest_group(q, j, which, pairs, cfg, false)?;
    let _ = writeln!(s, "AGREEMENTS {agree}/{total}");
    Ok((s, if agree == total { 0 } else { 1 }))
}

fn selftest_sweep(bounds: &str, which: Mode, pairs: usize, cfg: &OracleConfig) -> Outcome {
    let (v, a, n) = parse_bounds(bounds)?;
    let mut s = String::new();
    let (mut agree, mut total) = (0, 0);
    for q in harness::small_quivers(v, a) {
        // theo2 draws its own families, so one group per quiver is enough
        let families: Vec<LabeledFamily> = match which {
            Mode::Theo2 => vec![LabeledFamily::canonical(&crate::DimensionVector(vec![n; q.vertex_count()]))],
            _ => harness::dimension_vectors(q.vertex_count(), n).iter().map(LabeledFamily::canonical).collect(),
        };
        for j in &families {
            let (ga, gt, lines) = selftest_group(&q, j, which, pairs, cfg, true)?;
            let _ = writeln!(
                s,
                "QUIVER {} dims=[{}] AGREEMENTS {ga}/{gt}",
                harness::render_quiver(&q),
                j.dims().0.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            );
            s.push_str(&lines);
            agree += ga;
            total += gt;
        }
    }
    let _ = writeln!(s, "AGREEMENTS {agree}/{total}");
    Ok((s, if agree == total { 0 } else { 1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qhorn").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn a2() -> (Quiver, LabeledFamily) {
        parse_quiver("vertex x 1 2\nvertex y 1 2\narrow x y\n").unwrap()
    }

    #[test]
    fn weights_parse() {
        let (q, j) = a2();
        let w = parse_weights(&q, &j, "# comment\nweight x 2 1\nweight y -1 -2\n").unwrap();
        assert_eq!(w, Weight::from_integers(&[vec![2, 1], vec![-1, -2]]));
        let w = parse_weights(&q, &j, "weight y 1/2 -1/2\n").unwrap();
        assert_eq!(w.vertex(0), &[Rational64::from_integer(0); 2]);
        assert!(matches!(parse_weights(&q, &j, "weight z 1 2\n"), Err(Error::UnknownVertex { line: 1, .. })));
        assert!(matches!(parse_weights(&q, &j, "weight x 1\n"), Err(Error::SizeMismatch(_))));
        assert!(matches!(parse_weights(&q, &j, "weight x a b\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_weights(&q, &j, "w x 1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sigma_and_bounds_parse() {
        let (q, _) = a2();
        assert_eq!(parse_sigma(&q, "x=1,y=-1").unwrap(), SigmaVector::from_integers(&[1, -1]));
        assert_eq!(parse_sigma(&q, "y=2").unwrap(), SigmaVector::from_integers(&[0, 2]));
        assert!(parse_sigma(&q, "w=1").is_err());
        assert!(parse_sigma(&q, "x1").is_err());
        assert_eq!(parse_bounds("2,1,2").unwrap(), (2, 1, 2));
        assert!(parse_bounds("2,1").is_err());
        assert!(parse_bounds("0,1,1").is_err());
    }

    #[test]
    fn usage_errors_are_single_lines() {
        let (code, out, err) = run_str(&["horn"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.starts_with("ERROR usage: "));
        assert_eq!(err.lines().count(), 1);
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("selftest"));
        let (code, _, err) = run_str(&["selftest", "--seed", "1"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("ERROR usage: "));
    }

    #[test]
    fn lr_and_star_subcommands() {
        let (code, out, _) = run_str(&["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1"]);
        assert_eq!((code, out.as_str()), (0, "LR (2,1) (2,1) (3,2,1) = 2\n"));
        let (code, out, _) = run_str(&["lr", "--lam", "1", "--mu", "1"]);
        assert_eq!((code, out.as_str()), (0, "LR (1) (1) (2) = 1\nLR (1) (1) (1,1) = 1\n"));
        let (_, out, _) = run_str(&["lr", "--lam", "1", "--mu", "1", "--rows", "1"]);
        assert_eq!(out, "LR (1) (1) (2) = 1\n");
        let (code, _, err) = run_str(&["lr", "--lam", "1,2", "--mu", "1"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("ERROR invalid: "));
        let (code, out, _) =
            run_str(&["star-check", "--n", "2", "--s", "2", "--lam", "1", "--lam", "1", "--mu", "1,1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "STAR n=2 s=2 lam=(1),(1) mu=(1,1) multiplicity=1 cone=1 agree=1\n");
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let (code, _, err) = run_str(&["horn", "/nonexistent/q.quiver"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("ERROR io: /nonexistent/q.quiver: "));
    }
}
