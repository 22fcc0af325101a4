//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a check fails (invalid game, violated
//! constraint, infeasible completion), 2 on malformed input or arguments.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use qgame_core::classical::{enumerate_pure_ne, is_nash_classical, mixed_payoff_classical, MixedProfile};
use qgame_core::epr::{
    ccc_margins, complete_distribution, ddd_margins, epr_is_nash, epr_mixed_payoff, CompletionInput,
};
use qgame_core::game::{validate_pd, GameParams, PayoffRatios, PdCondition, Player, PureProfile};
use qgame_core::joint::{
    check_embedding_zeros, check_no_signaling, check_normalization, check_pairwise_no_signaling, extract_marginals,
    JointDistribution,
};
use qgame_core::nash::NEReport;
use qgame_core::search::{Method, SearchConfig};
use qgame_core::simulate::SimulationConfig;
use qgame_core::{Error, Rational};

use crate::formats::{
    distribution_json, parse_completion_values, parse_distribution, parse_game, parse_rational, write_distribution,
    Located, ParseError,
};
use crate::parallel;
use crate::report::{three_decimals_truncated, NumberStyle, Report, Value};

#[derive(Debug, Parser)]
#[command(name = "qgame", version, about = "Equilibria of a symmetric three-player game under classical and correlated play")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Print numbers as decimals with six significant digits.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Lp,
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the generalized Prisoner's Dilemma conditions.
    ValidateGame { game: PathBuf },
    /// Pure equilibria of the classical game, or margins of one mixed profile.
    ClassicalNe {
        game: PathBuf,
        /// Probabilities x,y,z of playing the first strategy.
        #[arg(long, value_parser = parse_profile)]
        profile: Option<MixedProfile>,
    },
    /// Certify a joint table and report the (S1,S1,S1) and (S2,S2,S2) margins.
    AnalyzeDist {
        game: PathBuf,
        dist: PathBuf,
        #[arg(long, value_parser = parse_profile)]
        profile: Option<MixedProfile>,
    },
    /// Fill a joint table from its ten independent entries.
    Complete {
        input: PathBuf,
        /// Write the table here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read off single-party marginals and test whether they reproduce the table.
    FactorCheck { dist: PathBuf },
    /// Maximize the smallest (S1,S1,S1) margin over admissible tables.
    Search {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "lp")]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Float pre-screen window of the random method.
        #[arg(long, value_parser = parse_rational, default_value = "1/1000000000")]
        tolerance: Rational,
        /// Feasible table the result must match or beat.
        #[arg(long)]
        warm_start: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the payoffs at a profile.
    Simulate {
        game: PathBuf,
        dist: PathBuf,
        #[arg(long, value_parser = parse_profile)]
        profile: MixedProfile,
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Recompute the worked example from its built-in inputs.
    #[command(name = "reproduce-paper")]
    ReproduceExample,
}

fn parse_profile(s: &str) -> Result<MixedProfile, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err("expected three comma-separated probabilities x,y,z".into());
    };
    MixedProfile::new(parse_rational(x)?, parse_rational(y)?, parse_rational(z)?).map_err(|e| e.to_string())
}

enum Failure {
    Malformed(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Check(e.to_string())
    }
}

enum Output {
    Report(Report),
    Raw(String),
}

struct Outcome {
    output: Output,
    ok: bool,
}

impl Outcome {
    fn report(report: Report, ok: bool) -> Self {
        Outcome { output: Output::Report(report), ok }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn located(path: &Path, error: ParseError) -> Failure {
    Failure::Malformed(Located { path: path.display().to_string(), error }.to_string())
}

fn load_game(path: &Path) -> Result<GameParams, Failure> {
    parse_game(&read(path)?).map_err(|e| located(path, e))
}

fn load_distribution(path: &Path) -> Result<JointDistribution, Failure> {
    parse_distribution(&read(path)?).map_err(|e| located(path, e))
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let style = if cli.decimal { NumberStyle::Decimal } else { NumberStyle::Exact };
    match dispatch(cli.command, cli.json) {
        Ok(outcome) => {
            let text = match outcome.output {
                Output::Raw(s) => s,
                Output::Report(r) if cli.json => r.render_json(style),
                Output::Report(r) => r.render_text(style),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Malformed(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "check failed: {m}");
            1
        }
    }
}

fn dispatch(command: Command, json: bool) -> Result<Outcome, Failure> {
    match command {
        Command::ValidateGame { game } => validate_game(&load_game(&game)?),
        Command::ClassicalNe { game, profile } => classical_ne(&load_game(&game)?, profile),
        Command::AnalyzeDist { game, dist, profile } => {
            analyze_dist(&load_game(&game)?, &load_distribution(&dist)?, profile)
        }
        Command::Complete { input, output } => complete(&input, output.as_deref(), json),
        Command::FactorCheck { dist } => factor_check(&load_distribution(&dist)?),
        Command::Search { game, method, seed, iterations, workers, tolerance, warm_start } => {
            let method = match method {
                MethodArg::Lp => Method::Lp,
                MethodArg::Random => Method::Random,
            };
            let mut config = SearchConfig::new(load_game(&game)?, method);
            config.seed = seed;
            config.iterations = iterations;
            config.workers = workers;
            config.tolerance = tolerance;
            config.warm_start = warm_start.as_deref().map(load_distribution).transpose()?;
            search(&config)
        }
        Command::Simulate { game, dist, profile, runs, seed, workers } => {
            let mut config = SimulationConfig::new(load_distribution(&dist)?, profile, runs, seed);
            config.workers = workers;
            simulate(&load_game(&game)?, &config)
        }
        Command::ReproduceExample => reproduce_example(),
    }
}

fn push_game(r: &mut Report, p: &GameParams) {
    for (name, v) in crate::formats::GAME_FIELDS.iter().zip(p.as_array()) {
        r.push(*name, v);
    }
}

fn condition_key(c: PdCondition) -> String {
    format!("({}) {c}", c.group())
}

fn validate_game(p: &GameParams) -> Result<Outcome, Failure> {
    let failing = validate_pd(p);
    let mut r = Report::new();
    push_game(&mut r, p);
    for c in PdCondition::ALL {
        r.push(condition_key(c), if failing.contains(&c) { "fails" } else { "holds" });
    }
    let verdict = if failing.is_empty() {
        "valid generalized PD".to_string()
    } else {
        format!("not a generalized PD ({} of 11 conditions fail)", failing.len())
    };
    r.push("verdict", verdict);
    Ok(Outcome::report(r, failing.is_empty()))
}

fn push_ne(r: &mut Report, prefix: &str, report: &NEReport) {
    r.push(format!("{prefix}margins"), report.margins.clone());
    r.push(format!("{prefix}nash"), report.nash);
}

fn profile_label(p: &MixedProfile) -> String {
    let [x, y, z] = p.as_array();
    format!("({x},{y},{z})")
}

fn classical_ne(p: &GameParams, profile: Option<MixedProfile>) -> Result<Outcome, Failure> {
    let mut r = Report::new();
    match profile {
        Some(prof) => {
            r.push("profile", profile_label(&prof));
            r.push("payoffs", mixed_payoff_classical(p, &prof).0);
            push_ne(&mut r, "", &is_nash_classical(p, &prof));
        }
        None => {
            let ne = enumerate_pure_ne(p);
            let list = if ne.is_empty() {
                "none".to_string()
            } else {
                ne.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            };
            r.push("pure_equilibria", list);
            for profile in PureProfile::all() {
                let report = is_nash_classical(p, &MixedProfile::pure(profile));
                r.push(format!("margins {profile}"), report.margins);
            }
        }
    }
    Ok(Outcome::report(r, true))
}

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Alice => "Alice",
        Player::Bob => "Bob",
        Player::Chris => "Chris",
    }
}

fn analyze_dist(p: &GameParams, d: &JointDistribution, profile: Option<MixedProfile>) -> Result<Outcome, Failure> {
    let mut r = Report::new();
    let norm = check_normalization(d);
    r.push("block_sums", norm.block_sums.clone());
    let norm_text = if norm.ok() {
        "ok".to_string()
    } else {
        format!("fails (blocks {:?}, negative entries {:?})", norm.failing_blocks(), norm.negative)
    };
    r.push("normalization", norm_text);
    let ns = check_no_signaling(d);
    let ns_text = if ns.ok() {
        "ok".to_string()
    } else {
        let rows: Vec<String> =
            ns.violations.iter().map(|v| format!("{} chain {}", player_name(v.player), v.row + 1)).collect();
        format!("fails ({})", rows.join(", "))
    };
    r.push("no_signaling", ns_text);
    let pairwise = check_pairwise_no_signaling(d).len();
    r.push("pairwise_no_signaling", if pairwise == 0 { "ok".to_string() } else { format!("fails ({pairwise} marginals)") });
    let emb = check_embedding_zeros(d);
    r.push("embedding", if emb.ok() { "ok".to_string() } else { format!("fails (nonzero entries {:?})", emb.nonzero) });
    if norm.ok() {
        let f = extract_marginals(d)?;
        r.push("factorizable", f.factorizable);
    }
    let ok = norm.ok() && ns.ok() && emb.ok();
    if norm.ok() && emb.ok() {
        if PayoffRatios::of(p).is_ok() {
            let ccc = ccc_margins(p, d)?;
            let nash = ccc.iter().all(|m| !m.is_negative());
            r.push("ccc_margins", ccc);
            r.push("ccc_nash", nash);
        }
        let ddd = ddd_margins(p, d)?;
        let nash = ddd.iter().all(|m| !m.is_negative());
        r.push("ddd_margins", ddd);
        r.push("ddd_nash", nash);
    }
    if let Some(prof) = profile {
        if norm.ok() {
            r.push("profile", profile_label(&prof));
            r.push("payoffs", epr_mixed_payoff(p, d, &prof)?.0);
            push_ne(&mut r, "profile_", &epr_is_nash(p, d, &prof)?);
        }
    }
    Ok(Outcome::report(r, ok))
}

fn complete(input: &Path, output: Option<&Path>, json: bool) -> Result<Outcome, Failure> {
    let values = parse_completion_values(&read(input)?).map_err(|e| located(input, e))?;
    let input = CompletionInput::new(values).map_err(|e| Failure::Malformed(e.to_string()))?;
    let d = complete_distribution(&input)?;
    let text = if json {
        let mut s = serde_json::to_string_pretty(&distribution_json(&d)).expect("serializable");
        s.push('\n');
        s
    } else {
        write_distribution(&d)
    };
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
            let mut r = Report::new();
            r.push("written", path.display().to_string());
            Ok(Outcome::report(r, true))
        }
        None => Ok(Outcome { output: Output::Raw(text), ok: true }),
    }
}

fn factor_check(d: &JointDistribution) -> Result<Outcome, Failure> {
    let f = extract_marginals(d)?;
    let mut r = Report::new();
    r.push("r", f.marginals.first.clone());
    r.push("s", f.marginals.second.clone());
    r.push("verdict", if f.factorizable { "factorizable" } else { "non-factorizable" });
    if let Some(i) = f.first_mismatch {
        r.push("first_mismatch", format!("p{i}"));
        // Marginals of a normalized table lie in [0, 1].
        let product = JointDistribution::from_marginals(&f.marginals)?;
        r.push("table_value", d.p(i));
        r.push("product_value", product.p(i));
    }
    Ok(Outcome::report(r, true))
}

fn search(config: &SearchConfig) -> Result<Outcome, Failure> {
    let res = parallel::search(config)?;
    let mut r = Report::new();
    r.push("method", match res.method {
        Method::Lp => "lp",
        Method::Random => "random",
    });
    if res.method == Method::Random {
        r.push("seed", config.seed.to_string());
        r.push("iterations", config.iterations.to_string());
        r.push("workers", config.workers.to_string());
    }
    r.push("evaluated", res.evaluated.to_string());
    r.push("objective", &res.objective);
    r.push("ccc_margins", res.margins.clone());
    if let Some(w) = &res.warm_start_objective {
        r.push("warm_start_objective", w);
    }
    r.push("normalization", res.certificate.normalization);
    r.push("no_signaling", res.certificate.no_signaling);
    r.push("embedding", res.certificate.embedding);
    r.push("distribution", Value::Table(res.distribution.clone()));
    Ok(Outcome::report(r, res.certificate.ok()))
}

fn simulate(p: &GameParams, config: &SimulationConfig) -> Result<Outcome, Failure> {
    let res = parallel::simulate(p, config)?;
    let analytic = epr_mixed_payoff(p, &config.distribution, &config.profile)?;
    let mut r = Report::new();
    r.push("profile", profile_label(&config.profile));
    r.push("runs", res.runs.to_string());
    r.push("seed", res.seed.to_string());
    r.push("workers", config.workers.to_string());
    r.push("means", Value::Floats(res.means.to_vec()));
    r.push("std_errors", Value::Floats(res.std_errors.to_vec()));
    r.push("exact_sample_means", res.exact_means.clone());
    r.push("analytic", analytic.0);
    r.push("block_visits", Value::Integers(res.tally.block_visits().to_vec()));
    Ok(Outcome::report(r, true))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The worked example: payoffs scaled so that `β = 100`, the ten published
/// independents, and the margins derived from them.
pub fn worked_example() -> (GameParams, CompletionInput) {
    let params = GameParams::new(q(90, 1), q(100, 1), q(1, 5), q(9, 10), q(1, 1), q(1, 1));
    let input = CompletionInput::new(
        [(1, 10), (13, 100), (4, 25), (1, 10), (7, 50), (2, 5), (13, 100), (1, 4), (37, 100), (1, 5)]
            .map(|(n, d)| q(n, d)),
    )
    .expect("published values lie in [0, 1]");
    (params, input)
}

fn reproduce_example() -> Result<Outcome, Failure> {
    let (p, input) = worked_example();
    let d = complete_distribution(&input)?;
    let ratios = PayoffRatios::of(&p)?;
    let mut r = Report::new();
    r.push("alpha_over_beta", ratios.alpha_over_beta);
    r.push("theta_over_beta", ratios.theta_over_beta);
    r.push("delta_over_theta", ratios.delta_over_theta);
    r.push("omega_over_beta", ratios.omega_over_beta);
    r.push("epsilon_over_omega", ratios.epsilon_over_omega);
    push_game(&mut r, &p);
    let pd = validate_pd(&p);
    r.push("pd_conditions_failing", if pd.is_empty() {
        "none".to_string()
    } else {
        pd.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    });
    let norm = check_normalization(&d).ok();
    let ns = check_no_signaling(&d).ok();
    let emb = check_embedding_zeros(&d).ok();
    r.push("normalization", norm).push("no_signaling", ns).push("embedding", emb);
    let f = extract_marginals(&d)?;
    r.push("factorizable", f.factorizable);
    let ccc = ccc_margins(&p, &d)?;
    r.push("ccc_margins", ccc.clone());
    r.push("ccc_margins_rounded", ccc.iter().map(three_decimals_truncated).collect::<Vec<_>>().join(" "));
    let ccc_nash = ccc.iter().all(|m| !m.is_negative());
    r.push("ccc_nash", ccc_nash);
    let ddd = ddd_margins(&p, &d)?;
    let ddd_nash = ddd.iter().all(|m| !m.is_negative());
    r.push("ddd_margins", ddd).push("ddd_nash", ddd_nash);
    let unit = MixedProfile::new(Rational::one(), Rational::one(), Rational::one())?;
    r.push("payoffs_at_s1_s1_s1", epr_mixed_payoff(&p, &d, &unit)?.0);
    r.push("distribution", Value::Table(d));
    let ok = norm && ns && emb && ccc_nash && ddd_nash && !f.factorizable;
    Ok(Outcome::report(r, ok))
}
