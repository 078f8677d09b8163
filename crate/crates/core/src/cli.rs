//! The `polymu` command line.
//!
//! Exit codes: 0 success, 1 a `false` verdict (only `check --status`) or a
//! failed sweep, 2 engine disagreement, 3 input error.

use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::alternation::{alternation_depth, Class};
use crate::bisim::{bisim_formula, bisimulation_classes};
use crate::diagonal::{diagonal_check, diagonal_formula, encode_lts, DiagReport};
use crate::fixed_sig::{diagonal_check_fixed, diagonal_formula_fixed, encode_lts_fixed};
use crate::formula::{normalize_replacements, parse_formula, Formula};
use crate::games::{dump_game, parse_game, solve_exhaustive, solve_parity, verify_solution, Player};
use crate::generator::{gen_formula, gen_game, gen_lts, GenConfig, ReplMode};
use crate::lts::{parse_lts, Lts, StateId};
use crate::semantics::{evaluate, Environment};
use crate::{holds, Engine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "polymu", version, about = "Polyadic modal mu-calculus workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a tuple of states satisfies a closed formula.
    Check(CheckArgs),
    /// Print arity, alternation depths and Sigma/Pi levels.
    Analyze {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Rewrite every replacement into single swaps and copies.
    Normalize {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Encode a formula as a transition system.
    Encode(EncodeArgs),
    /// Print the simulating formula for arity k and level m.
    Diagonal(DiagonalArgs),
    /// Check the diagonal property on one formula or a seeded sweep.
    Diagcheck(DiagcheckArgs),
    /// Bisimulation classes, or whether two states are bisimilar.
    Bisim(BisimArgs),
    /// Generate a random formula, system or game.
    Gen(GenArgs),
    /// Solve a parity game given in the dump format.
    SolveGame(SolveGameArgs),
    /// Run every cross-validation sweep.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct FormulaArg {
    /// Formula file (`-` for stdin), or the formula itself with `-e`.
    #[arg(value_name = "FORMULA")]
    pub formula: String,
    /// Read FORMULA as formula text instead of a path.
    #[arg(short = 'e', long)]
    pub expr: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Naive,
    Game,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Naive => Engine::Naive,
            EngineArg::Game => Engine::Game,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Sigma,
    Pi,
}

impl From<ClassArg> for Class {
    fn from(c: ClassArg) -> Class {
        match c {
            ClassArg::Sigma => Class::Sigma,
            ClassArg::Pi => Class::Pi,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReplArg {
    None,
    Simple,
    Arbitrary,
}

impl From<ReplArg> for ReplMode {
    fn from(r: ReplArg) -> ReplMode {
        match r {
            ReplArg::None => ReplMode::None,
            ReplArg::Simple => ReplMode::Simple,
            ReplArg::Arbitrary => ReplMode::Arbitrary,
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub formula: FormulaArg,
    /// System file (`-` for stdin).
    pub lts: PathBuf,
    /// Comma-separated states; defaults to the initial state at every position.
    #[arg(long, value_delimiter = ',')]
    pub tuple: Option<Vec<StateId>>,
    #[arg(long, value_enum, default_value = "naive")]
    pub engine: EngineArg,
    /// Run both engines and compare.
    #[arg(long)]
    pub both: bool,
    /// Largest tuple length accepted.
    #[arg(long, default_value_t = 4)]
    pub max_arity: usize,
    /// Exit with status 1 when the verdict is false.
    #[arg(long)]
    pub status: bool,
    /// Write the model-checking game to this file.
    #[arg(long, value_name = "FILE")]
    pub dump_game: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub formula: FormulaArg,
    /// Gadget encoding over the fixed ten-proposition signature.
    #[arg(long)]
    pub fixed: bool,
    /// Proposition list for the indexed encoding; defaults to the formula's own.
    #[arg(long, value_delimiter = ',')]
    pub props: Option<Vec<String>>,
    /// Arity for the fixed encoding; defaults to the formula's arity.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DiagonalArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub fixed: bool,
    #[arg(long, value_delimiter = ',', default_value = "p,q")]
    pub props: Vec<String>,
    /// Flip every fixpoint (for Pi inputs).
    #[arg(long)]
    pub dual: bool,
}

#[derive(Args, Debug)]
pub struct DiagcheckArgs {
    /// Formula file; omit to run a generated sweep.
    #[arg(value_name = "FORMULA")]
    pub formula: Option<String>,
    /// Read FORMULA as formula text instead of a path.
    #[arg(short = 'e', long)]
    pub expr: bool,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub fixed: bool,
    #[arg(long, value_enum, default_value = "sigma")]
    pub class: ClassArg,
    /// Defaults to naive for the indexed pipeline and game for the fixed one.
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    /// Also run the other engine and compare.
    #[arg(long)]
    pub both: bool,
    #[arg(long, value_delimiter = ',')]
    pub props: Option<Vec<String>>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Node budget of generated formulas.
    #[arg(long, default_value_t = 10)]
    pub budget: usize,
}

#[derive(Args, Debug)]
pub struct BisimArgs {
    pub lts: PathBuf,
    pub s: Option<StateId>,
    pub t: Option<StateId>,
    #[arg(long, value_enum, default_value = "naive")]
    pub engine: EngineArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Formula,
    Lts,
    Game,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "sigma")]
    pub class: ClassArg,
    #[arg(long, default_value_t = 12)]
    pub budget: usize,
    #[arg(long, value_delimiter = ',', default_value = "p,q")]
    pub props: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "a")]
    pub acts: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    #[arg(long, value_enum, default_value = "simple")]
    pub repl: ReplArg,
    /// Number of formulas, one per line.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 6)]
    pub positions: usize,
    #[arg(long, default_value_t = 3)]
    pub max_priority: usize,
}

#[derive(Args, Debug)]
pub struct SolveGameArgs {
    /// Game file (`-` for stdin).
    pub game: PathBuf,
    /// Compare with exhaustive strategy enumeration (small games only).
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure that maps to exit code 3.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<i32, InputError>;

/// One failing instance of a sweep, with what is needed to replay it.
#[derive(Clone, Debug)]
pub struct Failure {
    pub seed: Option<u64>,
    pub instance: String,
    pub detail: String,
}

/// Outcome of a sweep or a single run.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub run: usize,
    pub passed: usize,
    pub disagreements: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl RunReport {
    fn new(command: &str, inputs: &[(&str, String)]) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            ..RunReport::default()
        }
    }

    /// Folds per-instance outcomes in input order.
    fn record(&mut self, outcomes: Vec<Outcome>) {
        for o in outcomes {
            self.run += 1;
            match o {
                Outcome::Pass => self.passed += 1,
                Outcome::Fail(f) => self.failures.push(f),
                Outcome::Disagree(f) => {
                    self.disagreements += 1;
                    self.failures.push(f);
                }
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.disagreements > 0 {
            EXIT_DISAGREE
        } else if self.passed < self.run {
            EXIT_FALSE
        } else {
            EXIT_OK
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.command)?;
        for (k, v) in &self.inputs {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "  passed {}/{} ({} disagreements) in {:.2}s",
            self.passed,
            self.run,
            self.disagreements,
            self.elapsed.as_secs_f64()
        )?;
        for fail in &self.failures {
            match fail.seed {
                Some(s) => writeln!(f, "  FAIL seed={s}: {}", fail.detail)?,
                None => writeln!(f, "  FAIL: {}", fail.detail)?,
            }
            for line in fail.instance.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Fail(Failure),
    Disagree(Failure),
}

fn sweep(report: &mut RunReport, count: usize, seed: u64, one: impl Fn(u64) -> Outcome + Sync) {
    let start = Instant::now();
    let outcomes = (0..count as u64)
        .into_par_iter()
        .map(|i| one(seed.wrapping_add(i)))
        .collect();
    report.record(outcomes);
    report.elapsed = start.elapsed();
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(InputError(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

pub fn run(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Check(a) => cmd_check(a, out),
        Command::Analyze { formula } => cmd_analyze(&load_formula(&formula)?, out),
        Command::Normalize { formula } => {
            writeln!(out, "{}", normalize_replacements(&load_formula(&formula)?))?;
            Ok(EXIT_OK)
        }
        Command::Encode(a) => cmd_encode(a, out),
        Command::Diagonal(a) => cmd_diagonal(a, out),
        Command::Diagcheck(a) => cmd_diagcheck(a, out),
        Command::Bisim(a) => cmd_bisim(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::SolveGame(a) => cmd_solve_game(a, out),
        Command::Selftest(a) => cmd_selftest(a, out),
    }
}

fn read_input(path: &Path) -> Result<String, InputError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_formula_input(arg: &str, inline: bool) -> Result<Formula, InputError> {
    let text = if inline {
        arg.to_string()
    } else {
        read_input(Path::new(arg))?
    };
    let phi = parse_formula(&text)?;
    phi.validate_closed()?;
    Ok(phi)
}

fn load_formula(arg: &FormulaArg) -> Result<Formula, InputError> {
    parse_formula_input(&arg.formula, arg.expr)
}

fn load_lts(path: &Path) -> Result<Lts, InputError> {
    parse_lts(&read_input(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> CmdResult {
    let phi = load_formula(&a.formula)?;
    let lts = load_lts(&a.lts)?;
    let tuple = match a.tuple {
        Some(t) => t,
        None => vec![lts.init(); phi.arity().max(1)],
    };
    if tuple.len() < phi.arity() {
        return Err(InputError(format!(
            "tuple has {} states but the formula has arity {}",
            tuple.len(),
            phi.arity()
        )));
    }
    if tuple.len() > a.max_arity {
        return Err(InputError(format!(
            "arity {} exceeds --max-arity {}",
            tuple.len(),
            a.max_arity
        )));
    }
    if let Some(&s) = tuple.iter().find(|&&s| s >= lts.num_states()) {
        return Err(InputError(format!("state {s} is not a state of the system")));
    }
    if let Some(path) = &a.dump_game {
        let mc = crate::games::build_game_from(&phi, &lts, tuple.len(), std::slice::from_ref(&tuple))?;
        std::fs::write(path, dump_game(&mc.game, |v| mc.label(v)))?;
    }
    let result = if a.both {
        let n = holds(Engine::Naive, &phi, &lts, &tuple)?;
        let g = holds(Engine::Game, &phi, &lts, &tuple)?;
        writeln!(out, "naive: {}", verdict(n))?;
        writeln!(out, "game: {}", verdict(g))?;
        if n != g {
            writeln!(out, "engines disagree")?;
            return Ok(EXIT_DISAGREE);
        }
        n
    } else {
        holds(a.engine.into(), &phi, &lts, &tuple)?
    };
    writeln!(out, "{}", verdict(result))?;
    Ok(if a.status && !result { EXIT_FALSE } else { EXIT_OK })
}

fn cmd_analyze(phi: &Formula, out: &mut dyn Write) -> CmdResult {
    let info = alternation_depth(phi);
    writeln!(out, "arity {}", info.arity)?;
    for (x, d) in &info.depth {
        writeln!(out, "ad {x} = {d} ({})", info.kind[x])?;
    }
    let chain: Vec<String> = info.alternation_type.iter().map(|k| k.to_string()).collect();
    writeln!(out, "alternation type ({})", chain.join(", "))?;
    let k = info.arity.max(1);
    writeln!(
        out,
        "least class Sigma^{k}_{} and Pi^{k}_{}",
        info.sigma_level, info.pi_level
    )?;
    Ok(EXIT_OK)
}

fn cmd_encode(a: EncodeArgs, out: &mut dyn Write) -> CmdResult {
    let phi = load_formula(&a.formula)?;
    let lts = if a.fixed {
        if !phi.is_normalized() {
            return Err(InputError(
                "the fixed encoding needs a normalized formula (see `normalize`)".into(),
            ));
        }
        encode_lts_fixed(&phi, a.k.unwrap_or(phi.arity().max(1)))?
    } else {
        let props = a
            .props
            .unwrap_or_else(|| phi.propositions().into_iter().map(str::to_string).collect());
        encode_lts(&phi, &props)?
    };
    write!(out, "{lts}")?;
    Ok(EXIT_OK)
}

fn cmd_diagonal(a: DiagonalArgs, out: &mut dyn Write) -> CmdResult {
    let f = if a.fixed {
        diagonal_formula_fixed(a.k, a.m, a.dual)?
    } else {
        diagonal_formula(a.k, a.m, &a.props, a.dual)?
    };
    writeln!(out, "{f}")?;
    Ok(EXIT_OK)
}

struct DiagSetup {
    k: usize,
    m: usize,
    fixed: bool,
    class: Class,
    engine: Engine,
    both: bool,
    props: Vec<String>,
}

impl DiagSetup {
    fn check(&self, phi: &Formula, engine: Engine) -> Result<DiagReport, crate::diagonal::DiagonalError> {
        if self.fixed {
            diagonal_check_fixed(phi, self.k, self.m, self.class, engine)
        } else {
            diagonal_check(phi, self.k, self.m, &self.props, self.class, engine)
        }
    }

    fn other(&self) -> Engine {
        match self.engine {
            Engine::Naive => Engine::Game,
            Engine::Game => Engine::Naive,
        }
    }

    fn outcome(&self, phi: &Formula, seed: Option<u64>) -> Outcome {
        let fail = |detail: String| Failure {
            seed,
            instance: phi.to_string(),
            detail,
        };
        let r = match self.check(phi, self.engine) {
            Ok(r) => r,
            Err(e) => return Outcome::Fail(fail(e.to_string())),
        };
        if self.both {
            match self.check(phi, self.other()) {
                Ok(o) if o != r => {
                    return Outcome::Disagree(fail(format!(
                        "{} gives {r:?}, {} gives {o:?}",
                        self.engine,
                        self.other()
                    )))
                }
                Ok(_) => {}
                Err(e) => return Outcome::Fail(fail(e.to_string())),
            }
        }
        if r.ok() {
            Outcome::Pass
        } else {
            Outcome::Fail(fail(format!(
                "phi {} and simulating formula {}",
                verdict(r.phi_holds),
                verdict(r.diag_holds)
            )))
        }
    }
}

fn cmd_diagcheck(a: DiagcheckArgs, out: &mut dyn Write) -> CmdResult {
    let single = match &a.formula {
        Some(f) => Some(parse_formula_input(f, a.expr)?),
        None => None,
    };
    let fixed_default = || vec!["ppos".to_string(), "pdot".to_string()];
    let props = match (&a.props, &single) {
        (Some(p), _) => p.clone(),
        (None, Some(phi)) if !a.fixed => phi.propositions().into_iter().map(str::to_string).collect(),
        (None, _) if a.fixed => fixed_default(),
        (None, _) => vec!["p".into(), "q".into()],
    };
    let setup = DiagSetup {
        k: a.k,
        m: a.m,
        fixed: a.fixed,
        class: a.class.into(),
        engine: a
            .engine
            .map(Engine::from)
            .unwrap_or(if a.fixed { Engine::Game } else { Engine::Naive }),
        both: a.both,
        props,
    };
    let mode = if a.fixed { "fixed" } else { "prop0" };

    if let Some(phi) = single {
        let r = setup.check(&phi, setup.engine)?;
        writeln!(out, "phi: {}", verdict(r.phi_holds))?;
        writeln!(out, "simulating: {}", verdict(r.diag_holds))?;
        writeln!(out, "states: {}", r.states)?;
        if setup.both {
            let o = setup.check(&phi, setup.other())?;
            if o != r {
                writeln!(out, "engines disagree")?;
                return Ok(EXIT_DISAGREE);
            }
        }
        writeln!(out, "xor: {}", if r.ok() { "ok" } else { "violated" })?;
        return Ok(if r.ok() { EXIT_OK } else { EXIT_FALSE });
    }

    let mut cfg = GenConfig::new(a.k, a.m, setup.class);
    cfg.budget = a.budget;
    cfg.props = setup.props.clone();
    cfg.repl = ReplMode::Simple;
    // Fail early on a bad configuration.
    gen_formula(&cfg)?;
    let mut report = RunReport::new(
        "diagcheck",
        &[
            ("k", a.k.to_string()),
            ("m", a.m.to_string()),
            ("mode", mode.to_string()),
            ("class", setup.class.to_string()),
            ("engine", setup.engine.to_string()),
            ("seed", a.seed.to_string()),
            ("count", a.count.to_string()),
        ],
    );
    sweep(&mut report, a.count, a.seed, |seed| {
        let phi = gen_formula(&cfg.clone().with_seed(seed)).expect("configuration was validated");
        setup.outcome(&phi, Some(seed))
    });
    write!(out, "{report}")?;
    Ok(report.exit_code())
}

fn cmd_bisim(a: BisimArgs, out: &mut dyn Write) -> CmdResult {
    let lts = load_lts(&a.lts)?;
    let props: Vec<String> = {
        let mut all: Vec<String> = lts.states().flat_map(|s| lts.labels(s).iter().cloned()).collect();
        all.sort();
        all.dedup();
        all
    };
    let phi = bisim_formula(&props, lts.actions());
    let block = bisimulation_classes(&lts);
    match (a.s, a.t) {
        (Some(s), Some(t)) => {
            for x in [s, t] {
                if x >= lts.num_states() {
                    return Err(InputError(format!("state {x} is not a state of the system")));
                }
            }
            let refined = block[s] == block[t];
            let by_formula = holds(a.engine.into(), &phi, &lts, &[s, t])?;
            if refined != by_formula {
                writeln!(out, "partition refinement: {}", verdict(refined))?;
                writeln!(out, "formula: {}", verdict(by_formula))?;
                return Ok(EXIT_DISAGREE);
            }
            writeln!(out, "{}", verdict(refined))?;
        }
        (None, None) => {
            let blocks = block.iter().max().map_or(0, |b| b + 1);
            for b in 0..blocks {
                let members: Vec<String> = lts.states().filter(|&s| block[s] == b).map(|s| s.to_string()).collect();
                writeln!(out, "{{{}}}", members.join(", "))?;
            }
        }
        _ => return Err(InputError("give two states or none".into())),
    }
    Ok(EXIT_OK)
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> CmdResult {
    let mut cfg = GenConfig::new(a.k, a.m, a.class.into()).with_seed(a.seed);
    cfg.budget = a.budget;
    cfg.props = a.props;
    cfg.acts = a.acts;
    cfg.states = a.states;
    cfg.repl = a.repl.into();
    match a.kind {
        GenKind::Formula => {
            for i in 0..a.count as u64 {
                writeln!(out, "{}", gen_formula(&cfg.clone().with_seed(a.seed.wrapping_add(i)))?)?;
            }
        }
        GenKind::Lts => write!(out, "{}", gen_lts(&cfg)?)?,
        GenKind::Game => {
            let g = gen_game(a.seed, a.positions, a.max_priority);
            write!(out, "{}", dump_game(&g, |_| String::new()))?;
        }
    }
    Ok(EXIT_OK)
}

fn player_code(p: Player) -> char {
    match p {
        Player::Verifier => 'V',
        Player::Refuter => 'R',
    }
}

fn cmd_solve_game(a: SolveGameArgs, out: &mut dyn Write) -> CmdResult {
    let (game, labels) = parse_game(&read_input(&a.game)?)?;
    let sol = solve_parity(&game);
    verify_solution(&game, &sol).map_err(|e| InputError(format!("internal: solution failed verification: {e}")))?;
    for v in game.positions() {
        let mv = sol.strategy[v].map_or("-".to_string(), |w| w.to_string());
        write!(out, "{v} {} {mv}", player_code(sol.winner[v]))?;
        if !labels[v].is_empty() {
            write!(out, " {}", labels[v])?;
        }
        writeln!(out)?;
    }
    let won = sol.winner.iter().filter(|&&p| p == Player::Verifier).count();
    writeln!(out, "# verifier wins {won}/{}", game.len())?;
    if a.exhaustive {
        if game.len() > 12 {
            return Err(InputError("exhaustive enumeration is limited to 12 positions".into()));
        }
        if solve_exhaustive(&game) != sol.winner {
            writeln!(out, "# exhaustive enumeration disagrees")?;
            return Ok(EXIT_DISAGREE);
        }
        writeln!(out, "# exhaustive enumeration agrees")?;
    }
    Ok(EXIT_OK)
}

/// The self-test sweeps, each over `count` seeded instances.
pub fn selftest_reports(count: usize, seed: u64) -> Vec<RunReport> {
    let mut reports = Vec::new();
    let inputs = |name: &str| RunReport::new(name, &[("seed", seed.to_string()), ("count", count.to_string())]);

    let mut r = inputs("engines");
    sweep(&mut r, count, seed, |s| {
        let mut cfg = GenConfig::new(1 + (s % 3) as usize, (s / 3 % 3) as usize, Class::Sigma).with_seed(s);
        cfg.acts = vec!["a".into(), "b".into()];
        cfg.states = 5;
        if s % 4 == 0 {
            cfg.repl = ReplMode::Arbitrary;
        }
        let phi = gen_formula(&cfg).expect("valid configuration");
        let lts = gen_lts(&cfg).expect("valid configuration");
        let tuple = vec![lts.init(); cfg.k];
        let instance = format!("{phi}\n{lts}");
        match (
            holds(Engine::Naive, &phi, &lts, &tuple),
            holds(Engine::Game, &phi, &lts, &tuple),
        ) {
            (Ok(n), Ok(g)) if n == g => Outcome::Pass,
            (Ok(n), Ok(g)) => Outcome::Disagree(Failure {
                seed: Some(s),
                instance,
                detail: format!("naive {n}, game {g}"),
            }),
            (Err(e), _) | (_, Err(e)) => Outcome::Fail(Failure {
                seed: Some(s),
                instance,
                detail: e.to_string(),
            }),
        }
    });
    reports.push(r);

    for fixed in [false, true] {
        // The fixed-signature games are much larger, so that sweep is thinned.
        let n = if fixed { count.div_ceil(5) } else { count };
        let name = if fixed { "diagonal-fixed" } else { "diagonal-prop0" };
        let mut r = RunReport::new(name, &[("seed", seed.to_string()), ("count", n.to_string())]);
        let props: Vec<String> = if fixed {
            vec!["ppos".into(), "pdot".into()]
        } else {
            vec!["p".into(), "q".into()]
        };
        sweep(&mut r, n, seed, |s| {
            let class = if s % 2 == 0 { Class::Sigma } else { Class::Pi };
            let (k, m) = (1, 1 + (s / 2 % 2) as usize);
            let setup = DiagSetup {
                k,
                m,
                fixed,
                class,
                engine: if fixed { Engine::Game } else { Engine::Naive },
                both: !fixed && s % 10 == 0,
                props: props.clone(),
            };
            let mut cfg = GenConfig::new(k, m, class).with_seed(s);
            cfg.props = props.clone();
            cfg.budget = 10;
            setup.outcome(&gen_formula(&cfg).expect("valid configuration"), Some(s))
        });
        reports.push(r);
    }

    let mut r = inputs("bisimulation");
    sweep(&mut r, count, seed, |s| {
        let mut cfg = GenConfig::new(2, 0, Class::Sigma).with_seed(s);
        cfg.states = 6;
        cfg.acts = vec!["a".into(), "b".into()];
        let lts = gen_lts(&cfg).expect("valid configuration");
        let phi = bisim_formula(&cfg.props, &cfg.acts);
        let rel = evaluate(&phi, &lts, 2, &Environment::new()).expect("closed binary formula");
        let block = bisimulation_classes(&lts);
        let bad = lts
            .states()
            .flat_map(|s| lts.states().map(move |t| (s, t)))
            .find(|&(s, t)| rel.contains(&[s, t]) != (block[s] == block[t]));
        match bad {
            None => Outcome::Pass,
            Some((a, b)) => Outcome::Disagree(Failure {
                seed: Some(s),
                instance: lts.to_string(),
                detail: format!("states {a} and {b}"),
            }),
        }
    });
    reports.push(r);

    let mut r = inputs("normalization");
    sweep(&mut r, count, seed, |s| {
        let mut cfg = GenConfig::new(3, (s % 3) as usize, Class::Sigma).with_seed(s);
        cfg.repl = ReplMode::Arbitrary;
        let phi = gen_formula(&cfg).expect("valid configuration");
        let norm = normalize_replacements(&phi);
        let lts = gen_lts(&cfg).expect("valid configuration");
        let fail = |detail: &str| {
            Outcome::Fail(Failure {
                seed: Some(s),
                instance: format!("{phi}\n{lts}"),
                detail: detail.to_string(),
            })
        };
        if !norm.is_normalized() {
            return fail("normal form still has a compound replacement");
        }
        let before = evaluate(&phi, &lts, 3, &Environment::new());
        let after = evaluate(&norm, &lts, 3, &Environment::new());
        match (before, after) {
            (Ok(x), Ok(y)) if x == y => Outcome::Pass,
            _ => fail("denotation changed"),
        }
    });
    reports.push(r);

    let mut r = inputs("parity-solver");
    sweep(&mut r, count, seed, |s| {
        let g = gen_game(s, 5, 3);
        let sol = solve_parity(&g);
        let instance = dump_game(&g, |_| String::new());
        if let Err(e) = verify_solution(&g, &sol) {
            return Outcome::Fail(Failure {
                seed: Some(s),
                instance,
                detail: e.to_string(),
            });
        }
        if solve_exhaustive(&g) == sol.winner {
            Outcome::Pass
        } else {
            Outcome::Disagree(Failure {
                seed: Some(s),
                instance,
                detail: "exhaustive enumeration disagrees".into(),
            })
        }
    });
    reports.push(r);
    reports
}

fn cmd_selftest(a: SelftestArgs, out: &mut dyn Write) -> CmdResult {
    let reports = selftest_reports(a.count, a.seed);
    for r in &reports {
        write!(out, "{r}")?;
    }
    Ok(reports.iter().map(RunReport::exit_code).max().unwrap_or(EXIT_OK))
}
