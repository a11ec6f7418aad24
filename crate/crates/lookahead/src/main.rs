use clap::{Args, Parser, Subcommand};
use lookahead::analysis::{
    self, inefficiency_report, potential_minimizers, reproduce_fixture, verify_check, IneffRatio,
    SuiteConfig, SuiteReport, TrialOutcome, CHECK_IDS, REPRODUCE_IDS,
};
use lookahead::games::{
    random_consensus, random_cost_sharing, random_generic_sncg, random_sncg, DelayStyle,
};
use lookahead::instance::{
    congestion_instance, consensus_instance, cost_sharing_instance, load_instance, sncg_instance,
    Built, Family, InstanceFile,
};
use lookahead::model::{
    Action, ActionProfile, CongestionGame, PlayerOrder, TieBreakRule,
};
use lookahead::solver::{
    greedy_sequence, k_lookahead_set, spo_set, spo_unique, CongestionView, DEFAULT_NODE_BUDGET,
};
use lookahead::{games, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "lookahead", version, about = "Exact k-lookahead analysis of congestion games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance: equilibria, SPOs, k-lookahead sets, inefficiency.
    Analyze(AnalyzeArgs),
    /// Run a theorem/property suite over seeded random instances.
    Verify(VerifyArgs),
    /// Replay a bundled worked example and assert its documented facts.
    Reproduce(ReproduceArgs),
    /// Write a random schema-valid instance file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Player order as comma-separated player indices (default: identity).
    #[arg(long)]
    order: Option<String>,
    /// Lookahead depths to report, comma-separated (default: 1..=n).
    #[arg(long)]
    k: Option<String>,
    /// "lex", or per-player action-index rankings like "0:1,0;1:0,1".
    #[arg(long)]
    tiebreak: Option<String>,
    /// Emit the inefficiency sweep as CSV instead of a JSON report.
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id (see --list), or "all".
    id: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Maximum number of players per sampled instance.
    #[arg(long, default_value_t = 4)]
    players: usize,
    /// Maximum number of arcs per sampled network term.
    #[arg(long, default_value_t = 6)]
    term_size: usize,
    /// Worker threads for trials (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Example id (see --list), or "all".
    id: String,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Family: congestion | sncg-term | cost-sharing | consensus.
    family: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    players: usize,
    #[arg(long, default_value_t = 5)]
    term_size: usize,
    #[arg(long, default_value_t = 3)]
    resources: usize,
    #[arg(long, default_value_t = 4)]
    vertices: usize,
    /// Restrict sncg terms to extension-parallel shape.
    #[arg(long)]
    ep: bool,
    /// Resample sncg instances until the genericity check passes.
    #[arg(long)]
    generic: bool,
    /// Draw cost-sharing delays from the a/x + b family.
    #[arg(long)]
    axb: bool,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args, started),
        Command::Verify(args) => cmd_verify(args, started),
        Command::Reproduce(args) => cmd_reproduce(args, started),
        Command::Generate(args) => cmd_generate(args, started),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::BudgetExceeded(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn env_budget() -> Option<usize> {
    std::env::var("LOOKAHEAD_LAB_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn budgets() -> (usize, usize) {
    match env_budget() {
        Some(b) => (b, b),
        None => (DEFAULT_NODE_BUDGET, analysis::DEFAULT_PROFILE_BUDGET),
    }
}

fn emit(command: Value, results: Value, timing: bool, started: Instant) {
    let mut root = Map::new();
    root.insert("tool".into(), json!("lookahead"));
    root.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    root.insert("command".into(), command);
    root.insert("results".into(), results);
    if timing {
        root.insert(
            "timing_ms".into(),
            json!(started.elapsed().as_millis() as u64),
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes")
    );
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} entry {part:?}")))
        })
        .collect()
}

fn parse_tiebreak(text: &str, game: &CongestionGame) -> Result<TieBreakRule, Error> {
    if text == "lex" {
        return Ok(TieBreakRule::Lex);
    }
    let mut rankings = BTreeMap::new();
    for segment in text.split(';') {
        let (player, ranks) = segment.split_once(':').ok_or_else(|| {
            Error::Parse(format!(
                "bad tiebreak segment {segment:?}: expected player:i,j,…"
            ))
        })?;
        let player: usize = player
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad player index {player:?}")))?;
        let menu = game.actions_of(player)?;
        let order = parse_usize_list(ranks, "tiebreak rank")?
            .into_iter()
            .map(|i| {
                menu.get(i)
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("player {player} has no action {i}")))
            })
            .collect::<Result<Vec<Action>, _>>()?;
        rankings.insert(player, order);
    }
    let rule = TieBreakRule::Explicit(rankings);
    rule.validate(game)?;
    Ok(rule)
}

fn profile_json(game: &CongestionGame, profile: &ActionProfile) -> Value {
    Value::Array(
        game.players()
            .iter()
            .map(|&p| {
                let action = profile.get(p).expect("complete profile");
                Value::Array(
                    action
                        .resources()
                        .iter()
                        .map(|&r| json!(game.resources()[r]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn profiles_json<'a>(
    game: &CongestionGame,
    profiles: impl IntoIterator<Item = &'a ActionProfile>,
) -> Value {
    Value::Array(
        profiles
            .into_iter()
            .map(|p| profile_json(game, p))
            .collect(),
    )
}

fn cmd_analyze(args: AnalyzeArgs, started: Instant) -> Result<ExitCode, Error> {
    let instance = load_instance(&args.instance)?;
    let built = instance.build()?;
    let command = json!({
        "analyze": args.instance.display().to_string(),
        "order": args.order,
        "k": args.k,
        "tiebreak": args.tiebreak,
        "csv": args.csv,
    });
    let (node_budget, profile_budget) = budgets();
    match &built.game {
        Built::Congestion(game) => {
            let n = game.n_players();
            let order_indices = match &args.order {
                Some(text) => parse_usize_list(text, "order")?,
                None => (0..n).collect(),
            };
            let order = PlayerOrder::new(order_indices.clone(), game)?;
            let view = CongestionView::new(game, &order)?;
            let ks = match &args.k {
                Some(text) => parse_usize_list(text, "k")?,
                None => (1..=n).collect(),
            };
            let nash = game.enumerate_nash(profile_budget)?;
            let spos = view.to_profiles(&spo_set(&view, node_budget)?);
            let mut k_sets = Map::new();
            for &k in &ks {
                let set = view.to_profiles(&k_lookahead_set(&view, k, node_budget)?);
                k_sets.insert(k.to_string(), profiles_json(game, &set));
            }
            let (minima, phi) = potential_minimizers(game, profile_budget)?;
            let report = inefficiency_report(game, &ks, node_budget, profile_budget)?;
            if args.csv {
                print_inefficiency_csv(&report);
                return Ok(ExitCode::SUCCESS);
            }
            let mut results = Map::new();
            results.insert("family".into(), json!(instance.family.id()));
            results.insert("players".into(), json!(n));
            results.insert("tables_extended".into(), json!(built.tables_extended));
            results.insert("order".into(), json!(order_indices));
            results.insert("nash".into(), profiles_json(game, &nash));
            results.insert("spo".into(), profiles_json(game, &spos));
            results.insert(
                "spo_non_nash".into(),
                profiles_json(
                    game,
                    spos.iter()
                        .filter(|p| !game.is_nash(p).unwrap_or(true))
                        .collect::<Vec<_>>(),
                ),
            );
            results.insert("k_lookahead".into(), Value::Object(k_sets));
            results.insert(
                "potential_minimizers".into(),
                json!({
                    "value": phi,
                    "profiles": profiles_json(game, &minima),
                }),
            );
            results.insert(
                "inefficiency".into(),
                serde_json::to_value(&report).expect("report serializes"),
            );
            if let Some(text) = &args.tiebreak {
                let rule = parse_tiebreak(text, game)?;
                let greedy = greedy_sequence(game, &order, &rule)?;
                let rank = view.rank_fn(&rule);
                let unique = view.to_profile(&spo_unique(&view, &rank, node_budget)?);
                results.insert("greedy".into(), profile_json(game, &greedy));
                results.insert("spo_unique".into(), profile_json(game, &unique));
            }
            emit(command, Value::Object(results), args.timing, started);
            Ok(ExitCode::SUCCESS)
        }
        Built::Consensus(game) => {
            let n = game.n_players();
            let order = match &args.order {
                Some(text) => parse_usize_list(text, "order")?,
                None => (0..n).collect(),
            };
            let view = games::consensus_view(game, &order)?;
            let ks: Vec<usize> = match &args.k {
                Some(text) => parse_usize_list(text, "k")?,
                None => (1..=n).collect(),
            };
            let choices_json = |outcome: &Vec<usize>| -> Value {
                Value::Array(
                    view.to_choices(outcome)
                        .iter()
                        .map(|c| json!(format!("{c:?}")))
                        .collect(),
                )
            };
            let spos = spo_set(&view, node_budget)?;
            let mut k_sets = Map::new();
            for &k in &ks {
                let set = k_lookahead_set(&view, k, node_budget)?;
                k_sets.insert(
                    k.to_string(),
                    Value::Array(set.iter().map(&choices_json).collect()),
                );
            }
            let results = json!({
                "family": "consensus",
                "players": n,
                "order": order,
                "tree_respecting_order": game.is_tree_respecting(&order),
                "spo": spos.iter().map(|o| json!({
                    "choices": choices_json(o),
                    "stable": game.is_nash(&view.to_choices(o)),
                    "optimal": game.is_optimal(&view.to_choices(o)),
                    "social_cost": game.social_cost(&view.to_choices(o)),
                })).collect::<Vec<_>>(),
                "k_lookahead": k_sets,
            });
            if args.csv {
                return Err(Error::Invalid(
                    "--csv applies to congestion-family instances".into(),
                ));
            }
            emit(command, results, args.timing, started);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_inefficiency_csv(report: &analysis::InefficiencyReport) {
    println!("metric,k,numerator,denominator");
    let cell = |r: &IneffRatio| match r {
        IneffRatio::Ratio(v) => format!("{},{}", v.numer(), v.denom()),
        IneffRatio::ZeroOptimum { all_optimal } => {
            format!("zero-optimum,all-optimal={all_optimal}")
        }
    };
    if let Some(poa) = &report.poa {
        println!("poa,,{}", cell(poa));
    }
    if let Some(pos) = &report.pos {
        println!("pos,,{}", cell(pos));
    }
    println!("spoa,,{}", cell(&report.spoa));
    for (k, ratio) in &report.k_lpoa {
        println!("k-lpoa,{k},{}", cell(ratio));
    }
}

fn suite_config(args: &VerifyArgs) -> SuiteConfig {
    let (node_budget, profile_budget) = budgets();
    SuiteConfig {
        trials: args.trials,
        seed: args.seed,
        max_players: args.players,
        term_size: args.term_size,
        node_budget,
        profile_budget,
        ..SuiteConfig::default()
    }
}

/// Evaluates seeded trials in a chunked worker pool. Outcomes are folded in
/// attempt order, so the verdict matches the single-threaded run exactly.
fn pooled_report(id: &str, cfg: &SuiteConfig, jobs: usize) -> Result<SuiteReport, Error> {
    let seeds = analysis::trial_seeds(id, cfg.seed, analysis::max_attempts(cfg.trials));
    let chunk = (jobs * 4).max(1);
    let mut outcomes: Vec<(u64, Result<TrialOutcome, Error>)> = Vec::new();
    let mut cursor = 0usize;
    let mut qualifying = 0usize;
    let mut failures = 0usize;
    while cursor < seeds.len() && qualifying < cfg.trials && failures < 5 {
        let batch = &seeds[cursor..(cursor + chunk).min(seeds.len())];
        cursor += batch.len();
        let mut results: Vec<Option<(u64, Result<TrialOutcome, Error>)>> =
            batch.iter().map(|_| None).collect();
        std::thread::scope(|scope| {
            for (worker, slot_chunk) in results.chunks_mut(batch.len().div_ceil(jobs)).enumerate() {
                let offset = worker * batch.len().div_ceil(jobs);
                let seeds = &batch[offset..offset + slot_chunk.len()];
                scope.spawn(move || {
                    for (slot, &seed) in slot_chunk.iter_mut().zip(seeds) {
                        *slot = Some((seed, analysis::seeded_trial(id, seed, cfg)));
                    }
                });
            }
        });
        for entry in results.into_iter().flatten() {
            match &entry.1 {
                Ok(TrialOutcome::Pass) => qualifying += 1,
                Ok(TrialOutcome::Fail(_)) => {
                    qualifying += 1;
                    failures += 1;
                }
                _ => {}
            }
            outcomes.push(entry);
        }
    }
    let mut report = analysis::assemble_report(id, cfg, outcomes)?;
    if let Some(outcome) = analysis::fixture_trial(id, cfg) {
        match outcome {
            Ok(TrialOutcome::Pass) => report.qualifying += 1,
            Ok(TrialOutcome::Skip) => report.skipped += 1,
            Ok(TrialOutcome::Fail(detail)) => {
                report.qualifying += 1;
                report
                    .failures
                    .insert(0, analysis::CheckFailure { seed: 0, detail });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

fn cmd_verify(args: VerifyArgs, started: Instant) -> Result<ExitCode, Error> {
    let cfg = suite_config(&args);
    let jobs = args
        .jobs
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
        .max(1);
    let ids: Vec<&str> = if args.id == "all" {
        CHECK_IDS.to_vec()
    } else if CHECK_IDS.contains(&args.id.as_str()) {
        vec![CHECK_IDS[CHECK_IDS.iter().position(|c| *c == args.id).unwrap()]]
    } else {
        return Err(Error::UnknownCheck(args.id));
    };
    let mut reports = Vec::new();
    for id in ids {
        let report = if id == "ex5" || jobs == 1 {
            verify_check(id, &cfg)?
        } else {
            pooled_report(id, &cfg, jobs)?
        };
        reports.push(report);
    }
    let all_pass = reports.iter().all(SuiteReport::passed);
    let command = json!({
        "verify": args.id,
        "trials": args.trials,
        "seed": args.seed,
        "players": args.players,
        "term_size": args.term_size,
    });
    let results = Value::Array(
        reports
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("report serializes");
                v.as_object_mut()
                    .unwrap()
                    .insert("passed".into(), json!(r.passed()));
                v
            })
            .collect(),
    );
    emit(command, results, args.timing, started);
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_reproduce(args: ReproduceArgs, started: Instant) -> Result<ExitCode, Error> {
    let (node_budget, profile_budget) = budgets();
    let cfg = SuiteConfig {
        node_budget,
        profile_budget,
        ..SuiteConfig::default()
    };
    let ids: Vec<&str> = if args.id == "all" {
        REPRODUCE_IDS.to_vec()
    } else if REPRODUCE_IDS.contains(&args.id.as_str()) {
        vec![REPRODUCE_IDS[REPRODUCE_IDS.iter().position(|c| *c == args.id).unwrap()]]
    } else {
        return Err(Error::UnknownCheck(args.id));
    };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(reproduce_fixture(id, &cfg)?);
    }
    let all_pass = reports.iter().all(SuiteReport::passed);
    let command = json!({ "reproduce": args.id });
    let results = Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "passed": r.passed(),
                    "failures": serde_json::to_value(&r.failures).expect("serializes"),
                })
            })
            .collect(),
    );
    emit(command, results, args.timing, started);
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_generate(args: GenerateArgs, started: Instant) -> Result<ExitCode, Error> {
    let family = Family::from_id(&args.family)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let payload = match family {
        Family::SncgTerm => {
            let (term, game) = if args.generic {
                random_generic_sncg(args.seed, args.term_size, args.players, args.ep, 2_000_000)?
            } else {
                random_sncg(
                    &mut rng,
                    args.term_size,
                    args.players,
                    args.ep,
                    DelayStyle::Fine,
                )?
            };
            sncg_instance(&term, &game)
        }
        Family::Congestion => {
            let (term, game) = random_sncg(
                &mut rng,
                args.term_size,
                args.players,
                args.ep,
                DelayStyle::Fine,
            )?;
            drop(term);
            congestion_instance(&game)?
        }
        Family::CostSharing => {
            let game = random_cost_sharing(&mut rng, args.players, args.resources, args.axb)?;
            cost_sharing_instance(&game)?
        }
        Family::Consensus => {
            let game = random_consensus(&mut rng, args.vertices, 100);
            consensus_instance(&game)
        }
    };
    let instance = InstanceFile::new(family, payload)
        .named(&format!("{}-seed{}", family.id(), args.seed));
    std::fs::write(&args.out, instance.to_string_pretty())
        .map_err(|e| Error::Invalid(format!("{}: {e}", args.out.display())))?;
    let command = json!({
        "generate": family.id(),
        "seed": args.seed,
        "players": args.players,
        "term_size": args.term_size,
        "resources": args.resources,
        "vertices": args.vertices,
        "ep": args.ep,
        "generic": args.generic,
        "axb": args.axb,
    });
    emit(
        command,
        json!({ "out": args.out.display().to_string(), "family": family.id() }),
        args.timing,
        started,
    );
    Ok(ExitCode::SUCCESS)
}
