use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use tricross_cli::api::{router, AppState};
use tricross_core::record::{replay, run_match, BoardSpec, GameRecord, MatchConfig};
use tricross_core::render::{render_record, render_svg, Format, RenderOptions};
use tricross_core::solver::{solve_with, winner_table, SolveCache, SolverOptions, TableRanges, DEFAULT_CAP};
use tricross_core::{GameRules, GameState, Suite};

#[derive(Parser)]
#[command(name = "tricross", version, about = "Crossing games on triangular and hexagonal grids")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "TRICROSS_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one match and print the result.
    Play(PlayArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Solve a small board exactly, or print a winner table.
    Solve(SolveArgs),
    /// Draw a board or a recorded game as SVG.
    Render(RenderArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Args)]
struct GameArgs {
    /// tri:MxN or hex:NxM.
    #[arg(long, default_value = "tri:8x3")]
    board: BoardSpec,
    /// Maker's claims per turn; omit p and q for the secure game.
    #[arg(short, long)]
    p: Option<u32>,
    #[arg(short, long)]
    q: Option<u32>,
}

impl GameArgs {
    fn rules(&self) -> Result<GameRules, String> {
        match (self.p, self.q) {
            (Some(p), Some(q)) => Ok(GameRules::crossing(p, q)),
            (None, None) => Ok(GameRules::secure(self.board.family())),
            _ => Err("give both -p and -q, or neither for the secure game".into()),
        }
    }
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
    /// strategy, or a policy: random[:SEED], greedy, gate-attacker, bracket-attacker.
    #[arg(long, default_value = "strategy")]
    maker: String,
    #[arg(long, default_value = "greedy")]
    breaker: String,
    /// Play a strategy even where its guarantee does not hold.
    #[arg(long = "unsafe")]
    unsafe_heuristic: bool,
    /// Write the game record here.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemma1_1, lemma2_1, lemma3_1, lemma4_1, lemma4_2, duality or solver_agree.
    suite: String,
    /// Samples: components, turns, colorings or positions.
    #[arg(long, default_value_t = 1000)]
    budget: u64,
    /// Where to write the report when the suite fails.
    #[arg(long, default_value = "verify-failure.json")]
    failures: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Solve the final position of this record instead of an empty board.
    #[arg(long)]
    record: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long)]
    no_memo: bool,
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    single_thread: bool,
    /// Print a winner table over ranges like 2..=6 instead.
    #[arg(long)]
    table: bool,
    #[arg(long, default_value = "2..=6")]
    m: String,
    #[arg(long, default_value = "2..=6")]
    n: String,
    #[arg(long = "ps", default_value = "1..=3")]
    ps: String,
    #[arg(long = "qs", default_value = "1..=6")]
    qs: String,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Solved cells are kept here between runs.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Board to draw when no record is given.
    #[arg(long, default_value = "tri:6x5")]
    board: BoardSpec,
    /// Draw this recorded game.
    #[arg(long)]
    record: Option<PathBuf>,
    /// With a record: write one frame per move into this directory.
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long, default_value = "board.svg")]
    out: PathBuf,
    #[arg(long, default_value = "svg")]
    format: String,
    #[arg(long)]
    no_dual: bool,
    #[arg(long)]
    labels: bool,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Serve a built UI from here.
    #[arg(long = "static")]
    static_dir: Option<PathBuf>,
    /// Append each game's record here after every change.
    #[arg(long)]
    journal: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed;
    let result = match cli.command {
        Command::Play(a) => play(a, seed),
        Command::Verify(a) => verify(a, seed),
        Command::Solve(a) => solve_cmd(a),
        Command::Render(a) => render(a),
        Command::Serve(a) => serve(a, seed),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn read_record(path: &PathBuf) -> Result<GameRecord, Box<dyn std::error::Error>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn play(a: PlayArgs, seed: u64) -> CmdResult {
    let config = MatchConfig {
        board: a.game.board,
        rules: a.game.rules()?,
        maker: a.maker,
        breaker: a.breaker,
        seed,
        unsafe_heuristic: a.unsafe_heuristic,
    };
    let record = run_match(config)?;
    let result = serde_json::to_string(&record.result)?;
    println!("{} {} moves, result {result}", record.topology_ref.kind, record.moves.len());
    if let Some(path) = a.record {
        std::fs::write(&path, serde_json::to_string_pretty(&record)?)?;
        println!("record written to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs, seed: u64) -> CmdResult {
    let suite: Suite = a.suite.parse()?;
    let report = suite.run(a.budget, seed);
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        std::fs::write(&a.failures, &json)?;
        eprintln!("{} failed; report written to {}", suite.name(), a.failures.display());
        Ok(ExitCode::FAILURE)
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u32>, String> {
    let bad = || format!("bad range {s:?}; expected A..=B or A");
    if let Some((lo, hi)) = s.split_once("..=") {
        Ok(lo.parse().map_err(|_| bad())?..=hi.parse().map_err(|_| bad())?)
    } else {
        let v = s.parse().map_err(|_| bad())?;
        Ok(v..=v)
    }
}

fn solve_cmd(a: SolveArgs) -> CmdResult {
    if a.table {
        let ranges = TableRanges { m: parse_range(&a.m)?, n: parse_range(&a.n)?, p: parse_range(&a.ps)?, q: parse_range(&a.qs)? };
        let mut cache = match &a.cache {
            Some(path) => SolveCache::load(path)?,
            None => SolveCache::default(),
        };
        let table = winner_table(&ranges, a.cap, &mut cache);
        if let Some(path) = &a.cache {
            cache.save(path)?;
        }
        match a.format.as_str() {
            "csv" => print!("{}", table.to_csv()?),
            "json" => println!("{}", serde_json::to_string_pretty(&table)?),
            other => return Err(format!("unknown table format {other:?}; expected csv or json").into()),
        }
        return Ok(ExitCode::SUCCESS);
    }
    let (state, p, q) = match &a.record {
        Some(path) => {
            let record = read_record(path)?;
            let tricross_core::GameKind::Crossing { p, q } = record.rules.kind else {
                return Err("the solver plays crossing games".into());
            };
            let last = replay(&record)?.pop().expect("replay yields the empty board");
            (last, p, q)
        }
        None => {
            let (Some(p), Some(q)) = (a.game.p, a.game.q) else {
                return Err("give -p and -q".into());
            };
            let topo = Arc::new(a.game.board.build()?);
            (GameState::new(topo, GameRules::crossing(p, q))?, p, q)
        }
    };
    let opts = SolverOptions {
        cap: a.cap,
        memo: !a.no_memo,
        symmetry: !a.no_symmetry,
        parallel: !a.single_thread,
        subsets: false,
    };
    let r = solve_with(state.topology(), p, q, &state, opts)?;
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(ExitCode::SUCCESS)
}

fn render(a: RenderArgs) -> CmdResult {
    let Format::Svg = a.format.parse::<Format>()?;
    let opts = RenderOptions { dual: !a.no_dual, labels: a.labels };
    match &a.record {
        Some(path) => {
            let record = read_record(path)?;
            let frames = render_record(&record, opts)?;
            if let Some(dir) = &a.frames {
                std::fs::create_dir_all(dir)?;
                for (i, svg) in frames.iter().enumerate() {
                    std::fs::write(dir.join(format!("frame-{i:04}.svg")), svg)?;
                }
                println!("{} frames written to {}", frames.len(), dir.display());
            }
            std::fs::write(&a.out, frames.last().expect("at least the empty board"))?;
        }
        None => {
            let topo = Arc::new(a.board.build()?);
            let state = GameState::new(topo, GameRules::crossing(1, 1))?;
            std::fs::write(&a.out, render_svg(&state, None, opts))?;
        }
    }
    println!("wrote {}", a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn serve(a: ServeArgs, seed: u64) -> CmdResult {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        if let Some(dir) = &a.journal {
            std::fs::create_dir_all(dir)?;
        }
        let state = AppState::new(a.journal.clone(), seed);
        let restored = state.restore_journal()?;
        if restored > 0 {
            println!("restored {restored} games from the journal");
        }
        let mut app = router(state);
        if let Some(dir) = &a.static_dir {
            app = app.fallback_service(tower_http::services::ServeDir::new(dir));
        }
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", a.port)).await?;
        println!("listening on {}", listener.local_addr()?);
        axum::serve(listener, app).await?;
        Ok::<_, Box<dyn std::error::Error>>(())
    })?;
    Ok(ExitCode::SUCCESS)
}
