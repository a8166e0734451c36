//! The `linres` command line. [`run`] parses arguments, writes results to
//! `out` and diagnostics to `err`, and returns the process exit code:
//! 0 for success, accept or unsat; 1 for reject, false, a satisfying
//! assignment or a failed computation; 2 for usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::clausal::{check_reslin, check_reslin_neq, unit_clauses, Calculus, Derivation};
use crate::combinatorics::{run_trial, Lemma, TrialParams, TrialRow};
use crate::error::Error;
use crate::games::{
    play_lintrees, play_reslin, FirstDelayer, GameConfig, GameKind, GreedyProver, LinProver,
    PaperDelayer, RandomProver, RandomResProver, StrategyParams, Transcript, TransferDelayer,
    CSV_HEADER,
};
use crate::gf::{Budget, Field};
use crate::instances::{
    code_distance, gen_instance, zero_one_image, zero_one_sat, GenParams, GeneratorKind,
    LinearSystem,
};
use crate::refutations::{build_layered_refutation, check_refutation, Refutation};
use crate::robustness::{conjecture_probe, path_witness, probe_csv, robustness_profile};

#[derive(Parser, Debug)]
#[command(
    name = "linres",
    version,
    about = "Refutations, games and oracles for 0-1 unsatisfiable linear systems over F_p"
)]
struct Cli {
    /// Cap on worker threads for parallel enumerations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Enumeration budget; overrides LINRES_BUDGET.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a 0-1 unsatisfiable instance from a code.
    Gen(GenArgs),
    /// Print the code distance of the instance matrix.
    Distance(InstanceArg),
    /// Size (and optionally the points) of the boolean image of the matrix.
    Image(ImageArgs),
    /// Decide 0-1 satisfiability; exit 0 on unsat, 1 with a witness on sat.
    Sat(InstanceArg),
    /// Check a splitting refutation.
    Check(CheckArgs),
    /// Check a Res(lin) or Res(lin!=) derivation.
    CheckClausal(ClausalArgs),
    /// Build the layered regular dag refutation.
    BuildLayered(BuildArgs),
    /// Play a Prover-Delayer game.
    Play(PlayArgs),
    /// Seeded trials of a combinatorial claim, one CSV row per trial.
    VerifyLemma(LemmaArgs),
    /// Brute-force (s, r)-robustness profile.
    RobustnessScan(ScanArgs),
    /// Sub-assignment witness along the path of a full assignment.
    PathWitness(PathArgs),
}

#[derive(Args, Debug)]
struct InstanceArg {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Rs,
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "min-d", default_value_t = 1)]
    min_d: usize,
    /// Required for random codes.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ImageArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    /// Also print the image points in lexicographic order.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    #[arg(short = 'P', long = "proof")]
    proof: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CalculusArg {
    Reslin,
    ReslinNeq,
}

#[derive(Args, Debug)]
struct ClausalArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    #[arg(short = 'P', long = "proof")]
    proof: PathBuf,
    #[arg(long, value_enum, default_value_t = CalculusArg::Reslin)]
    calculus: CalculusArg,
    /// Res(lin!=): allow `input j` to cite the clause of equation j.
    #[arg(long = "instance-clauses")]
    instance_clauses: bool,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Comma-separated 0-based variable order; default 0..n.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProverArg {
    Random,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DelayerArg {
    Paper,
    Transfer,
    First,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    #[arg(long, default_value = "lintrees")]
    game: GameKind,
    #[arg(long, value_enum, default_value_t = ProverArg::Random)]
    prover: ProverArg,
    /// Default: paper for LinTrees, transfer for tree-like Res(lin).
    #[arg(long, value_enum)]
    delayer: Option<DelayerArg>,
    #[arg(long)]
    seed: u64,
    #[arg(long = "max-rounds", default_value_t = 1000)]
    max_rounds: usize,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    tau0: Option<usize>,
    /// Play seeds seed..seed+N and print one CSV row per game.
    #[arg(long)]
    sweep: Option<u64>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    lemma: Lemma,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Fill the elapsed column with milliseconds.
    #[arg(long)]
    timing: bool,
    /// Append the trial's detail column.
    #[arg(long)]
    detail: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    #[arg(long = "s-max", default_value_t = 2)]
    s_max: usize,
    /// Instead of the profile, the minimum unsatisfiable equation counts per assignment of this support size.
    #[arg(long)]
    probe: Option<usize>,
}

#[derive(Args, Debug)]
struct PathArgs {
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    #[arg(short = 'P', long = "proof")]
    proof: PathBuf,
    /// Full assignment as a 0/1 string, x1 first.
    #[arg(short = 'x', long)]
    assignment: String,
    #[arg(short = 's', long)]
    s: usize,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let budget = cli.budget.map(Budget).unwrap_or_else(Budget::from_env);
    let mut buf: Vec<u8> = Vec::new();
    let result = match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(cli.cmd, budget, &mut buf)),
            Err(e) => Err(Failure::Run(e.to_string())),
        },
        None => dispatch(cli.cmd, budget, &mut buf),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Run(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> std::result::Result<LinearSystem, Failure> {
    LinearSystem::parse(&read(path)?).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn emit(
    output: &Option<PathBuf>,
    text: &str,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cmd: Cmd, budget: Budget, out: &mut Vec<u8>) -> Outcome {
    match cmd {
        Cmd::Gen(a) => gen(a, budget, out),
        Cmd::Distance(a) => {
            let inst = load_instance(&a.instance)?;
            writeln!(out, "{}", code_distance(inst.a(), budget)?)?;
            Ok(0)
        }
        Cmd::Image(a) => {
            let inst = load_instance(&a.instance)?;
            let img = zero_one_image(inst.a(), budget)?;
            writeln!(out, "size {}", img.len())?;
            if a.list {
                for v in img.sorted() {
                    let cs: Vec<String> = v.iter().map(u32::to_string).collect();
                    writeln!(out, "{}", cs.join(" "))?;
                }
            }
            Ok(0)
        }
        Cmd::Sat(a) => {
            let inst = load_instance(&a.instance)?;
            match zero_one_sat(&inst, budget)? {
                None => {
                    writeln!(out, "unsat")?;
                    Ok(0)
                }
                Some(x) => {
                    let bits: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    writeln!(out, "sat {bits}")?;
                    Ok(1)
                }
            }
        }
        Cmd::Check(a) => {
            let inst = load_instance(&a.instance)?;
            let verdict = match Refutation::parse(&read(&a.proof)?, inst.field(), inst.n()) {
                Ok(t) => check_refutation(&t, &inst, budget)?,
                Err(e) => crate::refutations::Verdict::Reject(e.to_string()),
            };
            writeln!(out, "{verdict}")?;
            Ok(if verdict.is_accept() { 0 } else { 1 })
        }
        Cmd::CheckClausal(a) => {
            let inst = load_instance(&a.instance)?;
            let calculus = match a.calculus {
                CalculusArg::Reslin => Calculus::ResLin,
                CalculusArg::ReslinNeq => Calculus::ResLinNeq,
            };
            let verdict =
                match Derivation::parse(&read(&a.proof)?, calculus, inst.field(), inst.n()) {
                    Ok(d) => match calculus {
                        Calculus::ResLin => check_reslin(&d, &unit_clauses(&inst)),
                        Calculus::ResLinNeq => check_reslin_neq(&d, &inst, a.instance_clauses),
                    },
                    Err(e) => crate::refutations::Verdict::Reject(e.to_string()),
                };
            writeln!(out, "{verdict}")?;
            Ok(if verdict.is_accept() { 0 } else { 1 })
        }
        Cmd::BuildLayered(a) => {
            let inst = load_instance(&a.instance)?;
            let order = a.order.unwrap_or_else(|| (0..inst.n()).collect());
            let built = build_layered_refutation(&inst, &order, budget)?;
            let text = built.refutation.to_text();
            match &a.output {
                Some(_) => {
                    emit(&a.output, &text, out)?;
                    let layers: Vec<String> =
                        built.layer_sizes.iter().map(usize::to_string).collect();
                    writeln!(
                        out,
                        "nodes {} layers {}",
                        built.refutation.size(),
                        layers.join(",")
                    )?;
                }
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Cmd::Play(a) => play(a, budget, out),
        Cmd::VerifyLemma(a) => verify_lemma(a, budget, out),
        Cmd::RobustnessScan(a) => {
            let inst = load_instance(&a.instance)?;
            if let Some(s) = a.probe {
                let rows = conjecture_probe(&inst, s, budget)?;
                out.write_all(probe_csv(s, &rows).as_bytes())?;
                return Ok(0);
            }
            let prof = robustness_profile(&inst, a.s_max, budget)?;
            out.write_all(prof.to_csv().as_bytes())?;
            let consistent = prof
                .rows
                .iter()
                .all(|r| prof.bound_consistent(r) && prof.witness_verified(r));
            Ok(if consistent { 0 } else { 1 })
        }
        Cmd::PathWitness(a) => {
            let inst = load_instance(&a.instance)?;
            let t = Refutation::parse(&read(&a.proof)?, inst.field(), inst.n())?;
            let x = parse_bits(&a.assignment, inst.n())?;
            match path_witness(&t, &inst, &x, a.s, budget) {
                Ok(w) => {
                    out.write_all(w.to_text().as_bytes())?;
                    Ok(0)
                }
                Err(Error::NeverReached) => {
                    writeln!(out, "never reached")?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn parse_bits(s: &str, n: usize) -> std::result::Result<Vec<bool>, Failure> {
    let bits: Option<Vec<bool>> = s
        .chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect();
    match bits {
        Some(b) if b.len() == n => Ok(b),
        _ => Err(Failure::Usage(format!(
            "assignment must be {n} characters of 0/1"
        ))),
    }
}

fn gen(a: GenArgs, budget: Budget, out: &mut dyn Write) -> Outcome {
    let (kind, seed) = match (a.kind, a.seed) {
        (KindArg::Rs, s) => (GeneratorKind::ReedSolomon, s.unwrap_or(0)),
        (KindArg::Random, Some(s)) => (GeneratorKind::RandomDistance, s),
        (KindArg::Random, None) => {
            return Err(Failure::Usage("--seed is required for random codes".into()))
        }
    };
    let e = gen_instance(
        GenParams {
            kind,
            p: a.p,
            n: a.n,
            k: a.k,
            min_d: a.min_d,
            seed,
        },
        budget,
    )?;
    let text = e.system.to_text();
    emit(&a.output, &text, out)?;
    if a.output.is_some() {
        writeln!(out, "d {}", e.d)?;
    }
    Ok(0)
}

fn play_one(
    inst: &LinearSystem,
    a: &PlayArgs,
    params: StrategyParams,
    seed: u64,
    budget: Budget,
) -> crate::error::Result<Transcript> {
    let cfg = GameConfig {
        max_rounds: a.max_rounds,
        budget,
    };
    match a.game {
        GameKind::LinTrees => {
            let mut prover: Box<dyn LinProver> = match a.prover {
                ProverArg::Random => Box::new(RandomProver::new(seed)),
                ProverArg::Greedy => Box::new(GreedyProver),
            };
            let mut delayer = PaperDelayer::new(params, budget);
            play_lintrees(inst, prover.as_mut(), &mut delayer, cfg)
        }
        GameKind::TreelikeResLin => {
            let mut prover = RandomResProver::new(seed);
            match a.delayer {
                Some(DelayerArg::First) => play_reslin(inst, &mut prover, &mut FirstDelayer, cfg),
                _ => {
                    let mut d = TransferDelayer::new(inst, PaperDelayer::new(params, budget));
                    play_reslin(inst, &mut prover, &mut d, cfg)
                }
            }
        }
    }
}

fn play(a: PlayArgs, budget: Budget, out: &mut dyn Write) -> Outcome {
    let inst = load_instance(&a.instance)?;
    match (a.game, a.delayer, a.prover) {
        (GameKind::LinTrees, Some(DelayerArg::Transfer | DelayerArg::First), _) => {
            return Err(Failure::Usage(
                "LinTrees is played against the paper delayer".into(),
            ))
        }
        (GameKind::TreelikeResLin, Some(DelayerArg::Paper), _) => {
            return Err(Failure::Usage(
                "tree-like Res(lin) takes the transfer or first delayer".into(),
            ))
        }
        (GameKind::TreelikeResLin, _, ProverArg::Greedy) => {
            return Err(Failure::Usage(
                "tree-like Res(lin) has only the random prover".into(),
            ))
        }
        _ => {}
    }
    let d = code_distance(inst.a(), budget)?;
    let mut params = StrategyParams::for_distance(inst.field().p(), d);
    if let Some(t) = a.tau {
        params = params.with_tau(t);
    }
    if let Some(t) = a.tau0 {
        params = params.with_tau0(t);
    }
    match a.sweep {
        Some(count) => {
            let seeds: Vec<u64> = (0..count).map(|i| a.seed.wrapping_add(i)).collect();
            let rows = seeds
                .par_iter()
                .map(|&s| {
                    play_one(&inst, &a, params, s, budget)
                        .map(|t| t.csv_row(s, inst.n(), inst.k(), d))
                })
                .collect::<crate::error::Result<Vec<String>>>()?;
            let mut text = format!("{CSV_HEADER}\n");
            for r in rows {
                text.push_str(&r);
                text.push('\n');
            }
            emit(&a.output, &text, out)?;
        }
        None => {
            let t = play_one(&inst, &a, params, a.seed, budget)?;
            emit(&a.output, &t.to_text(), out)?;
        }
    }
    Ok(0)
}

/// `pass` when the claim held and the recount agreed, `fail` on a verified
/// counterexample, `mismatch` when the recount disagreed.
fn outcome_label(row: &TrialRow) -> &'static str {
    match (row.ok, row.verified) {
        (true, true) => "pass",
        (false, true) => "fail",
        (_, false) => "mismatch",
    }
}

fn verify_lemma(a: LemmaArgs, budget: Budget, out: &mut dyn Write) -> Outcome {
    Field::new(a.p)?;
    let mut params = TrialParams::defaults(a.lemma, a.p);
    if let Some(m) = a.m {
        params.m = m;
    }
    if let Some(n) = a.n {
        params.n = n;
    }
    let seeds: Vec<u64> = (0..a.trials).map(|i| a.seed.wrapping_add(i)).collect();
    let rows = seeds
        .par_iter()
        .map(|&s| {
            let start = Instant::now();
            run_trial(a.lemma, params, s, budget).map(|r| (r, start.elapsed()))
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    let mut text = String::from(if a.detail {
        "seed,params,outcome,elapsed,detail\n"
    } else {
        "seed,params,outcome,elapsed\n"
    });
    let mut all_pass = true;
    for (row, elapsed) in &rows {
        all_pass &= row.ok && row.verified;
        let el = if a.timing {
            format!("{:.3}", elapsed.as_secs_f64() * 1e3)
        } else {
            "-".into()
        };
        text.push_str(&format!(
            "{},{},{},{el}",
            row.seed,
            row.params,
            outcome_label(row)
        ));
        if a.detail {
            text.push(',');
            text.push_str(&row.detail);
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(if all_pass { 0 } else { 1 })
}
