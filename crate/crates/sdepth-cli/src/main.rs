//! Command-line front end: exact Stanley depth, witness files, witness
//! verification, the explicit constructions, a randomized survey, and the
//! acceptance self-test.
//!
//! Exit codes: 0 success, 1 violation or counterexample, 2 usage error,
//! 3 search budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use sdepth::constructions::{
    boolean_upper_discrete, ci_partition, four_gen_partition, lem_lift,
    parse_generator_triple, rem_lift, step0_extend, step_private_extend,
    three_gen_partition, upper_discrete_refine, GeneratorTriple,
};
use sdepth::ideal::{parse_ideal, MonomialIdeal};
use sdepth::poset::{CharacteristicPoset, IntervalPartition};
use sdepth::sampling::random_ideal;
use sdepth::search::{sdepth_exact, SdepthError, SearchConfig};
use sdepth::witness::{parse_witness, WitnessFile};

#[derive(Parser)]
#[command(
    name = "sdepth",
    about = "Stanley depth of monomial ideals via interval partitions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact Stanley depth and write a witness partition.
    Sdepth(SdepthArgs),
    /// Compute an optimal witness partition and print it as JSON.
    Witness(WitnessArgs),
    /// Check a witness file against a recomputed poset.
    Verify(VerifyArgs),
    /// Run one of the explicit partition constructions.
    Construct(ConstructArgs),
    /// Random m-generated ideals: how far does sdepth sit above n - floor(m/2)?
    Survey(SurveyArgs),
    /// Run the acceptance criteria.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct IdealSource {
    /// Ideal in compact (`n=3; x1*x2, x2*x3`) or JSON form.
    #[arg(short, long, conflicts_with = "file")]
    ideal: Option<String>,
    /// Read the ideal from a file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl IdealSource {
    fn load(&self) -> Result<MonomialIdeal, Failure> {
        let text = match (&self.ideal, &self.file) {
            (Some(t), None) => t.clone(),
            (None, Some(p)) => fs::read_to_string(p)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))?,
            _ => return Err(Failure::usage("provide exactly one of --ideal or --file".into())),
        };
        parse_ideal(&text).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Args)]
struct SdepthArgs {
    #[command(flatten)]
    source: IdealSource,
    /// Node budget for the backtracking search.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Worker threads (parallel root branching when above 1).
    #[arg(long)]
    threads: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Where to write the witness file.
    #[arg(long, default_value = "witness.json")]
    out: PathBuf,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    source: IdealSource,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the witness here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Witness file to check.
    #[arg(long)]
    witness: PathBuf,
    #[command(flatten)]
    source: IdealSource,
    /// Also require the partition to be upper-discrete of this degree.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionName {
    /// Optimal witness for a squarefree complete intersection.
    Ci,
    /// Lower-bound witness for a 3-generated squarefree ideal.
    ThreeGen,
    /// Lower-bound witness for a squarefree ideal with at most 4 generators.
    FourGen,
    /// Upper-discrete partition of the full subset lattice.
    BooleanUd,
    /// Upper-discrete refinement of a witness at degree k.
    Refine,
    /// Private-variable lift of a witness.
    LemLift,
    /// Degree-aware private-variable lift of an upper-discrete witness.
    RemLift,
    /// Shared-variable extension of an all-type-2 generator triple.
    Step0,
    /// Private-variable step for a generator triple.
    StepPrivate,
}

#[derive(Args)]
struct ConstructArgs {
    /// Which construction to run.
    #[arg(value_enum)]
    name: ConstructionName,
    #[command(flatten)]
    source: IdealSource,
    /// Generator triple for step0/step-private, e.g. "n=2; x1, x1, 1".
    #[arg(long)]
    triple: Option<String>,
    /// Input witness file (constructions that rewrite a partition).
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Degree parameter (boolean-ud, refine, rem-lift).
    #[arg(long)]
    k: Option<usize>,
    /// Ambient variable count (boolean-ud).
    #[arg(long)]
    n: Option<usize>,
    /// Pivot variable (lem-lift, rem-lift).
    #[arg(long)]
    pivot: Option<usize>,
    /// Generator pair "i,j" receiving the new variable (step0).
    #[arg(long)]
    pair: Option<String>,
    /// Step index 1..=3 (step-private).
    #[arg(long)]
    step: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Where to write the resulting witness (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurveyArgs {
    /// Ambient variable count.
    #[arg(long)]
    n: usize,
    /// Number of minimal generators per instance.
    #[arg(long)]
    m: usize,
    /// Number of instances.
    #[arg(long, default_value_t = 20)]
    count: u64,
    /// RNG seed; instance i uses stream i of this seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Line-delimited JSON rows.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run a single criterion (1..=8).
    #[arg(long)]
    only: Option<usize>,
    #[arg(long)]
    json: bool,
}

/// A failure with its exit code and a machine-readable description.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { code: 2, kind: "usage", message }
    }

    fn violation(message: String) -> Self {
        Failure { code: 1, kind: "violation", message }
    }

    fn budget(message: String) -> Self {
        Failure { code: 3, kind: "budget", message }
    }

    fn from_search(err: SdepthError) -> Self {
        match err {
            SdepthError::Budget { .. } => Failure::budget(err.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let report = json!({ "error": failure.message, "kind": failure.kind });
            eprintln!("{report}");
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sdepth(args) => cmd_sdepth(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Survey(args) => cmd_survey(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

fn search_config(budget: u64, threads: Option<usize>) -> SearchConfig {
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    SearchConfig { node_budget: budget, parallel: threads.is_some_and(|t| t > 1) }
}

fn cmd_sdepth(args: SdepthArgs) -> Result<(), Failure> {
    let ideal = args.source.load()?;
    let cfg = search_config(args.budget, args.threads);
    let res = sdepth_exact(&ideal, &cfg).map_err(Failure::from_search)?;
    let witness = WitnessFile::from_partition(&res.witness);
    fs::write(&args.out, witness.to_json())
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", args.out.display())))?;
    if args.json {
        println!(
            "{}",
            json!({
                "n": ideal.ambient(),
                "m": ideal.num_generators(),
                "sdepth": res.value,
                "witness": args.out.display().to_string(),
            })
        );
    } else {
        println!("sdepth = {} (n = {}, m = {})", res.value, ideal.ambient(), ideal.num_generators());
        println!("witness written to {}", args.out.display());
    }
    Ok(())
}

fn cmd_witness(args: WitnessArgs) -> Result<(), Failure> {
    let ideal = args.source.load()?;
    let cfg = search_config(args.budget, args.threads);
    let res = sdepth_exact(&ideal, &cfg).map_err(Failure::from_search)?;
    emit_witness(&res.witness, &args.out)
}

fn emit_witness(part: &IntervalPartition, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = WitnessFile::from_partition(part).to_json();
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let ideal = args.source.load()?;
    let text = fs::read_to_string(&args.witness)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.witness.display())))?;
    let file = parse_witness(&text).map_err(|e| Failure::usage(e.to_string()))?;
    let g = sdepth::ideal::Exponent::new(file.g.clone());
    let poset = CharacteristicPoset::build(&ideal, Some(g))
        .map_err(|e| Failure::usage(e.to_string()))?;
    let part = file.attach(&poset).map_err(|e| Failure::usage(e.to_string()))?;

    if let Err(v) = part.verify() {
        let report = serde_json::to_value(&v).expect("violation serializes");
        if args.json {
            println!("{report}");
        } else {
            println!("violation: {v}");
        }
        return Err(Failure::violation(v.to_string()));
    }
    let depth = part.sdepth().expect("verified partition");
    let upper_discrete = match args.k {
        Some(k) => {
            let ok = part
                .is_upper_discrete(k)
                .map_err(|e| Failure::usage(e.to_string()))?;
            if !ok {
                let msg = format!("partition is not upper-discrete of degree {k}");
                if args.json {
                    println!("{}", json!({ "ok": false, "sdepth": depth, "upper_discrete": false, "k": k }));
                } else {
                    println!("{msg}");
                }
                return Err(Failure::violation(msg));
            }
            Some(k)
        }
        None => None,
    };
    if args.json {
        let mut report = json!({ "ok": true, "sdepth": depth });
        if let Some(k) = upper_discrete {
            report["upper_discrete"] = json!(true);
            report["k"] = json!(k);
        }
        println!("{report}");
    } else {
        match upper_discrete {
            Some(k) => println!("Ok: partition of depth {depth}, upper-discrete of degree {k}"),
            None => println!("Ok: partition of depth {depth}"),
        }
    }
    Ok(())
}

fn load_input_partition(
    args: &ConstructArgs,
    ideal: &MonomialIdeal,
) -> Result<IntervalPartition, Failure> {
    let poset = CharacteristicPoset::build(ideal, None)
        .map_err(|e| Failure::usage(e.to_string()))?;
    match &args.witness {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_witness(&text).map_err(|e| Failure::usage(e.to_string()))?;
            file.attach(&poset).map_err(|e| Failure::usage(e.to_string()))
        }
        None => {
            let cfg = SearchConfig::default();
            let res = sdepth_exact(ideal, &cfg).map_err(Failure::from_search)?;
            Ok(res.witness)
        }
    }
}

fn load_triple_partition(
    triple: &GeneratorTriple,
    path: &Option<PathBuf>,
) -> Result<IntervalPartition, Failure> {
    let poset = triple.poset().map_err(|e| Failure::usage(e.to_string()))?;
    match path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_witness(&text).map_err(|e| Failure::usage(e.to_string()))?;
            file.attach(&poset).map_err(|e| Failure::usage(e.to_string()))
        }
        None if triple.ambient() == 0 => {
            GeneratorTriple::base_partition().map_err(|e| Failure::usage(e.to_string()))
        }
        None => Err(Failure::usage("this construction needs --witness".into())),
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<(), Failure> {
    let constructed = match args.name {
        ConstructionName::Ci => {
            let ideal = args.source.load()?;
            ci_partition(&ideal).map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::ThreeGen => {
            let ideal = args.source.load()?;
            three_gen_partition(&ideal).map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::FourGen => {
            let ideal = args.source.load()?;
            four_gen_partition(&ideal).map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::BooleanUd => {
            let n = args.n.ok_or_else(|| Failure::usage("boolean-ud needs --n".into()))?;
            let k = args.k.ok_or_else(|| Failure::usage("boolean-ud needs --k".into()))?;
            boolean_upper_discrete(n, k).map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::Refine => {
            let ideal = args.source.load()?;
            let k = args.k.ok_or_else(|| Failure::usage("refine needs --k".into()))?;
            let part = load_input_partition(&args, &ideal)?;
            upper_discrete_refine(&ideal, &part, k)
                .map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::LemLift => {
            let ideal = args.source.load()?;
            let pivot =
                args.pivot.ok_or_else(|| Failure::usage("lem-lift needs --pivot".into()))?;
            let part = load_input_partition(&args, &ideal)?;
            lem_lift(&ideal, &part, pivot, ideal.ambient() + 1)
                .map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::RemLift => {
            let ideal = args.source.load()?;
            let pivot =
                args.pivot.ok_or_else(|| Failure::usage("rem-lift needs --pivot".into()))?;
            let k = args.k.ok_or_else(|| Failure::usage("rem-lift needs --k".into()))?;
            let part = match &args.witness {
                Some(_) => load_input_partition(&args, &ideal)?,
                None => {
                    let base = load_input_partition(&args, &ideal)?;
                    upper_discrete_refine(&ideal, &base, k)
                        .map_err(|e| Failure::violation(e.to_string()))?
                }
            };
            rem_lift(&ideal, &part, k, pivot, ideal.ambient() + 1)
                .map_err(|e| Failure::violation(e.to_string()))?
        }
        ConstructionName::Step0 => {
            let text = args
                .triple
                .as_ref()
                .ok_or_else(|| Failure::usage("step0 needs --triple".into()))?;
            let triple =
                parse_generator_triple(text).map_err(|e| Failure::usage(e.to_string()))?;
            let pair_text =
                args.pair.as_ref().ok_or_else(|| Failure::usage("step0 needs --pair".into()))?;
            let (i, j) = pair_text
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Failure::usage("--pair must look like `1,2`".into()))?;
            let part = load_triple_partition(&triple, &args.witness)?;
            let (_, out) = step0_extend(&triple, &part, (i, j), triple.ambient() + 1)
                .map_err(|e| Failure::violation(e.to_string()))?;
            out
        }
        ConstructionName::StepPrivate => {
            let text = args
                .triple
                .as_ref()
                .ok_or_else(|| Failure::usage("step-private needs --triple".into()))?;
            let triple =
                parse_generator_triple(text).map_err(|e| Failure::usage(e.to_string()))?;
            let step = args
                .step
                .ok_or_else(|| Failure::usage("step-private needs --step".into()))?;
            let part = load_triple_partition(&triple, &args.witness)?;
            let (_, out) = step_private_extend(&triple, &part, step, triple.ambient() + 1)
                .map_err(|e| Failure::violation(e.to_string()))?;
            out
        }
    };

    let depth = constructed.sdepth().expect("constructions verify their output");
    if args.json {
        println!(
            "{}",
            json!({
                "n": constructed.poset().ambient(),
                "intervals": constructed.len(),
                "sdepth": depth,
            })
        );
    } else {
        println!(
            "constructed partition: {} intervals, depth {} over n = {}",
            constructed.len(),
            depth,
            constructed.poset().ambient()
        );
    }
    emit_witness(&constructed, &args.out)
}

fn cmd_survey(args: SurveyArgs) -> Result<(), Failure> {
    let cfg = search_config(args.budget, args.threads);
    let rows: Result<Vec<_>, Failure> = (0..args.count)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(idx);
            let ideal = random_ideal(args.n, args.m, &mut rng)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let res = sdepth_exact(&ideal, &cfg).map_err(Failure::from_search)?;
            let bound = args.n as i64 - (args.m / 2) as i64;
            Ok((idx, ideal, res.value, bound, res.value as i64 - bound))
        })
        .collect();
    let rows = rows?;

    let mut min_slack = i64::MAX;
    for (idx, ideal, value, bound, slack) in &rows {
        min_slack = min_slack.min(*slack);
        if args.json {
            println!(
                "{}",
                json!({
                    "seed": args.seed,
                    "idx": idx,
                    "n": args.n,
                    "m": args.m,
                    "sdepth": value,
                    "bound": bound,
                    "slack": slack,
                })
            );
        } else {
            println!("[{idx}] {ideal}  sdepth={value} bound={bound} slack={slack}");
        }
    }
    if !args.json {
        println!(
            "{} instances (n={}, m={}, seed={}): min slack {}",
            rows.len(),
            args.n,
            args.m,
            args.seed,
            min_slack
        );
    }
    if min_slack < 0 {
        return Err(Failure::violation(format!(
            "instance with sdepth below n - floor(m/2): slack {min_slack}"
        )));
    }
    Ok(())
}

fn cmd_selftest(args: SelftestArgs) -> Result<(), Failure> {
    let results = match args.only {
        Some(id) => {
            if !(1..=sdepth::acceptance::NUM_CRITERIA).contains(&id) {
                return Err(Failure::usage(format!(
                    "criterion {id} out of 1..={}",
                    sdepth::acceptance::NUM_CRITERIA
                )));
            }
            vec![sdepth::acceptance::run_criterion(id)]
        }
        None => sdepth::acceptance::run_all(),
    };
    let mut all_ok = true;
    for r in &results {
        all_ok &= r.passed;
        if args.json {
            println!(
                "{}",
                json!({
                    "criterion": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seconds": r.seconds,
                })
            );
        } else {
            println!("{}", r.line());
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::violation("self-test criteria failed".into()))
    }
}
