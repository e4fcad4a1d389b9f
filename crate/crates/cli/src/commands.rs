//! Subcommand implementations.

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;

use two_cycle_core::equilibria::{
    bayesian_ne_regret, cce_regret, ce_regret, ne_regret, rule_ce_regret, uniform_correlated,
    wsne_regret, MixedStrategy, RegretReport,
};
use two_cycle_core::files::{DistributionFile, InstanceFile, Meta};
use two_cycle_core::game::{BayesianTwoCycleGame, KeyVertices, TwoCycleGame, WinLoseGame};
use two_cycle_core::generators::{
    cycle_ne, exact_cce, gen_instance, perturbed_ce, perturbed_ne, trivial_ace, trivial_ane,
    trivial_wsne, InstanceOptions,
};
use two_cycle_core::oracle::{enumerate_pure_nash, DenseWinLoseGame};
use two_cycle_core::recovery::{
    recover_bayesian, recover_from_correlated, recover_from_nash, recover_from_wsne, PartyViewA,
    PartyViewB, ProtocolError, RecoveryOutcome,
};
use two_cycle_core::Vertex;

use crate::records::{RunRecord, RUN_RECORD_SCHEMA};
use crate::{
    BayesianArgs, BuildArgs, GenArgs, OutputFormat, RecoverArgs, RecoverKindArg, SweepArgs,
    SweepKind, TrivialArgs, TrivialKind, VerifyArgs, VerifyKind,
};

type CliResult = Result<ExitCode, Box<dyn Error>>;

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Box<dyn Error>> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Box<dyn Error>> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    emit(out, &s)
}

fn load_instance(path: &Path) -> Result<InstanceFile, Box<dyn Error>> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn load_dist(path: &Path) -> Result<DistributionFile, Box<dyn Error>> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn gen(args: GenArgs) -> CliResult {
    let options = InstanceOptions {
        n: args.n,
        seed: args.seed,
        zero_prefix: args.zero_prefix,
        disputed_position: args.disputed,
    };
    let (x, y) = gen_instance(&options)?;
    log::info!("generated instance n={} seed={}", args.n, args.seed);
    emit_json(&args.out, &InstanceFile::from_strings(x, y, true))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BuildReport {
    n: usize,
    n_actions: usize,
    promise: bool,
    x: String,
    y: String,
    disputed_indices: Vec<usize>,
    key_vertices: Option<KeyVertices>,
    degree_histogram_a: Vec<usize>,
    degree_histogram_b: Vec<usize>,
    two_cycles: Vec<(Vertex, Vertex)>,
    pure_nash: Vec<(Vertex, Vertex)>,
}

pub fn build(args: BuildArgs) -> CliResult {
    let file = load_instance(&args.game)?;
    let game = file.to_game()?;
    let n_actions = game.num_actions();
    let mut hist_a = vec![0usize; 4];
    let mut hist_b = vec![0usize; 4];
    for idx in 0..n_actions {
        hist_a[game.degree_a(game.vertex(idx))] += 1;
        hist_b[game.degree_b(game.vertex(idx))] += 1;
    }
    let pairs = |list: Vec<(usize, usize)>| {
        list.into_iter()
            .map(|(u, v)| (game.vertex(u), game.vertex(v)))
            .collect::<Vec<_>>()
    };
    let report = BuildReport {
        n: game.n(),
        n_actions,
        promise: game.promise(),
        x: game.x().to_string(),
        y: game.y().to_string(),
        disputed_indices: two_cycle_core::disputed_indices(game.x(), game.y())?,
        key_vertices: game.key_vertices().ok(),
        degree_histogram_a: hist_a,
        degree_histogram_b: hist_b,
        two_cycles: pairs(game.two_cycles()),
        pure_nash: pairs(enumerate_pure_nash(&DenseWinLoseGame::from_game(&game))),
    };
    emit_json(&args.out, &report)?;
    Ok(ExitCode::SUCCESS)
}

pub fn trivial(args: TrivialArgs) -> CliResult {
    let file = load_instance(&args.game)?;
    let game = file.to_game()?;
    let out = match args.kind {
        TrivialKind::Uniform => DistributionFile::from_correlated(&uniform_correlated(&game)),
        TrivialKind::Cce => DistributionFile::from_correlated(&exact_cce(&game)?),
        TrivialKind::Ace => {
            let (mu, alpha) = trivial_ace(game.x(), game.y())?;
            DistributionFile::from_correlated(&mu).with_meta(Meta {
                alpha: Some(alpha),
                ..Meta::default()
            })
        }
        TrivialKind::Ane => {
            let (a, b) = trivial_ane(game.x(), game.y())?;
            DistributionFile::from_profile(&a, &b)
        }
        TrivialKind::Wsne => {
            let prof = trivial_wsne(game.x(), game.y())?;
            DistributionFile::from_profile(&prof.a, &prof.b).with_meta(Meta {
                scale_a: Some(prof.scale_a),
                scale_b: Some(prof.scale_b),
                ..Meta::default()
            })
        }
    };
    emit_json(&args.out, &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    kind: String,
    epsilon: f64,
    measured: RegretReport,
    verified: bool,
}

pub fn verify(args: VerifyArgs) -> CliResult {
    let file = load_instance(&args.game)?;
    let dist = load_dist(&args.dist)?;
    let (kind_name, measured) = match args.kind {
        VerifyKind::Ce | VerifyKind::Rce | VerifyKind::Cce => {
            let game = file.to_game()?;
            let mu = dist.to_correlated(game.num_actions())?;
            match args.kind {
                VerifyKind::Ce => ("ce", ce_regret(&game, &mu)?),
                VerifyKind::Rce => ("rce", rule_ce_regret(&game, &mu)?),
                _ => ("cce", cce_regret(&game, &mu)?),
            }
        }
        VerifyKind::Ne | VerifyKind::Wsne => {
            let game = file.to_game()?;
            let (a, b) = dist.to_profile(game.num_actions())?;
            match args.kind {
                VerifyKind::Ne => ("ne", ne_regret(&game, &a, &b)?),
                _ => ("wsne", wsne_regret(&game, &a, &b)?),
            }
        }
        VerifyKind::Bne => {
            let t = args.types.ok_or("--kind bne requires --T")?;
            let bgame = BayesianTwoCycleGame::build(&file.x, &file.y, t)?;
            let profiles = dist.to_bayesian_profiles(t, bgame.num_actions())?;
            ("bne", bayesian_ne_regret(&bgame, &profiles)?)
        }
    };
    let verified = measured.value <= args.epsilon;
    log::info!(
        "{kind_name} regret {} against epsilon {}",
        measured.value,
        args.epsilon
    );
    let report = VerifyReport {
        kind: kind_name.into(),
        epsilon: args.epsilon,
        measured,
        verified,
    };
    emit_json(&args.out, &report)?;
    Ok(if report.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn protocol_outcome(
    result: Result<RecoveryOutcome, ProtocolError>,
    out: &Option<PathBuf>,
    expected: Option<(Vertex, Vertex, Option<usize>)>,
) -> CliResult {
    match result {
        Ok(outcome) => {
            let matched = expected
                .is_none_or(|(u, v, t)| outcome.u == u && outcome.v == v && outcome.game_type == t);
            emit_json(out, &outcome)?;
            Ok(if matched {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Err(err @ (ProtocolError::Precondition(_) | ProtocolError::ScanFailed { .. })) => {
            eprintln!("recovery failed: {err}");
            Ok(ExitCode::from(1))
        }
        Err(err @ ProtocolError::ClassificationAmbiguous { .. }) => {
            eprintln!("recovery failed: {err}");
            Ok(ExitCode::from(1))
        }
        Err(err) => Err(err.into()),
    }
}

pub fn recover(args: RecoverArgs) -> CliResult {
    let file = load_instance(&args.game)?;
    let game = file.to_game()?;
    let key = game.key_vertices()?;
    let view_a = PartyViewA::from_bits(game.x());
    let view_b = PartyViewB::from_bits(game.y());
    let dist = load_dist(&args.dist)?;
    let result = match args.kind {
        RecoverKindArg::Correlated => {
            let mu = dist.to_correlated(game.num_actions())?;
            let epsilon = match args.epsilon {
                Some(e) => e,
                None => ce_regret(&game, &mu)?.value,
            };
            recover_from_correlated(&view_a, &view_b, &mu, epsilon)
        }
        RecoverKindArg::Nash => {
            let (a, b) = dist.to_profile(game.num_actions())?;
            let epsilon = match args.epsilon {
                Some(e) => e,
                None => ne_regret(&game, &a, &b)?.value,
            };
            recover_from_nash(&view_a, &view_b, &a, &b, epsilon)
        }
        RecoverKindArg::Wsne => {
            let (a, b) = dist.to_profile(game.num_actions())?;
            recover_from_wsne(&view_a, &view_b, &a, &b)
        }
    };
    protocol_outcome(result, &args.out, Some((key.u_star, key.v0, None)))
}

fn bayesian_views(bgame: &BayesianTwoCycleGame) -> (Vec<PartyViewA>, Vec<PartyViewB>) {
    let views_a = bgame
        .sub_games()
        .iter()
        .map(|g| PartyViewA::from_bits(g.x()))
        .collect();
    let views_b = bgame
        .sub_games()
        .iter()
        .map(|g| PartyViewB::from_bits(g.y()))
        .collect();
    (views_a, views_b)
}

pub fn bayesian(args: BayesianArgs) -> CliResult {
    let file = load_instance(&args.game)?;
    let bgame = BayesianTwoCycleGame::build(&file.x, &file.y, args.types)?;
    let profiles = match &args.dist {
        Some(path) => load_dist(path)?.to_bayesian_profiles(args.types, bgame.num_actions())?,
        None => bgame.sub_games().iter().map(cycle_ne).collect(),
    };
    let epsilon = bayesian_ne_regret(&bgame, &profiles)?.value;
    let (views_a, views_b) = bayesian_views(&bgame);
    let t = bgame.disputed_type();
    let key = bgame.sub_game(t).key_vertices()?;
    let result = recover_bayesian(&views_a, &views_b, &profiles, epsilon);
    protocol_outcome(result, &args.out, Some((key.u_star, key.v0, Some(t))))
}

fn parse_range(range: &str) -> Result<(usize, usize), Box<dyn Error>> {
    let (lo, hi) = range.split_once("..").ok_or("range must look like A..B")?;
    let lo: usize = lo.trim().parse()?;
    let hi: usize = hi.trim().parse()?;
    if lo < 3 || hi < lo {
        return Err(format!("bad range {range}: need 3 <= A <= B").into());
    }
    Ok((lo, hi))
}

fn sweep_trial(kind: SweepKind, n: usize, seed: u64, args: &SweepArgs) -> RunRecord {
    let kind_name = match kind {
        SweepKind::Correlated => "correlated",
        SweepKind::Nash => "nash",
        SweepKind::Wsne => "wsne",
        SweepKind::Bayesian => "bayesian",
    };
    let types = args.types.unwrap_or(2);
    let total_bits = if kind == SweepKind::Bayesian {
        n * types
    } else {
        n
    };
    let mut record = RunRecord {
        schema: RUN_RECORD_SCHEMA,
        n,
        seed,
        kind: kind_name.into(),
        x: String::new(),
        y: String::new(),
        regret: 0.0,
        threshold: 0.0,
        disputed: 0,
        recovered: None,
        ok: false,
        bits: 0,
        wall_ms: None,
    };
    let run = || -> Result<RunRecord, Box<dyn Error>> {
        let mut rec = record.clone();
        let (x, y) = gen_instance(&InstanceOptions::new(total_bits, seed))?;
        rec.x = x.to_string();
        rec.y = y.to_string();
        rec.disputed = two_cycle_core::disputed_indices(&x, &y)?[0];
        match kind {
            SweepKind::Correlated | SweepKind::Nash | SweepKind::Wsne => {
                let game = TwoCycleGame::build(x.clone(), y.clone(), true)?;
                let big_n = game.num_actions() as f64;
                let view_a = PartyViewA::from_bits(&x);
                let view_b = PartyViewB::from_bits(&y);
                let outcome = match kind {
                    SweepKind::Correlated => {
                        let eta = args.eta.unwrap_or(1.0 / (100.0 * big_n));
                        let mu = perturbed_ce(&game, eta)?;
                        rec.regret = ce_regret(&game, &mu)?.value;
                        rec.threshold = 1.0 / (24.0 * big_n.powi(3));
                        recover_from_correlated(&view_a, &view_b, &mu, rec.regret)
                    }
                    SweepKind::Nash => {
                        let scale = 1.0 / (32.0 * big_n * big_n);
                        let (a, b) = perturbed_ne(&game, scale)?;
                        rec.regret = ne_regret(&game, &a, &b)?.value;
                        rec.threshold = 1.0 / (16.0 * big_n * big_n);
                        recover_from_nash(&view_a, &view_b, &a, &b, rec.regret)
                    }
                    _ => {
                        let k = game.key_vertices()?;
                        let a = MixedStrategy::point_mass(game.num_actions(), game.index(k.u_star));
                        let b = MixedStrategy::point_mass(game.num_actions(), game.index(k.v0));
                        rec.regret = wsne_regret(&game, &a, &b)?.value;
                        rec.threshold = 1.0 / big_n;
                        recover_from_wsne(&view_a, &view_b, &a, &b)
                    }
                };
                if let Ok(outcome) = outcome {
                    rec.recovered = Some(outcome.v.layer);
                    rec.bits = outcome.transcript.total_bits;
                    let key = game.key_vertices()?;
                    rec.ok = outcome.u == key.u_star && outcome.v == key.v0;
                }
            }
            SweepKind::Bayesian => {
                let bgame = BayesianTwoCycleGame::build(&x, &y, types)?;
                let profiles: Vec<_> = bgame.sub_games().iter().map(cycle_ne).collect();
                rec.regret = bayesian_ne_regret(&bgame, &profiles)?.value;
                let big_n = bgame.num_actions() as f64;
                rec.threshold = 1.0 / (16.0 * big_n * big_n);
                let (views_a, views_b) = bayesian_views(&bgame);
                if let Ok(outcome) = recover_bayesian(&views_a, &views_b, &profiles, rec.regret) {
                    let t = outcome.game_type.unwrap_or(0);
                    rec.recovered = Some(bgame.n() * (t - 1) + outcome.v.layer);
                    rec.bits = outcome.transcript.total_bits;
                    let truth_t = bgame.disputed_type();
                    let key = bgame.sub_game(truth_t).key_vertices()?;
                    rec.ok = t == truth_t && outcome.u == key.u_star && outcome.v == key.v0;
                }
            }
        }
        Ok(rec)
    };
    let started = Instant::now();
    match run() {
        Ok(rec) => record = rec,
        Err(err) => log::info!("trial n={n} seed={seed} failed: {err}"),
    }
    if args.timings {
        record.wall_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    record
}

pub fn sweep(args: SweepArgs) -> CliResult {
    let (lo, hi) = parse_range(&args.n_range)?;
    let mut rows = Vec::new();
    let mut counter: u64 = 0;
    for n in lo..=hi {
        for _ in 0..args.trials {
            let seed = args.seed.wrapping_add(counter);
            counter += 1;
            rows.push(sweep_trial(args.kind, n, seed, &args));
        }
    }
    rows.sort_by_key(|r| (r.seed, r.n));
    let all_ok = rows.iter().all(|r| r.ok);
    match args.format {
        OutputFormat::Json => emit_json(&args.out, &rows)?,
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(RunRecord::csv_header(args.timings).split(','))?;
            for row in &rows {
                wtr.write_record(row.csv_row(args.timings))?;
            }
            let data = String::from_utf8(wtr.into_inner()?)?;
            emit(&args.out, &data)?;
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
