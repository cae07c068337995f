//! `skat`: command-line client of the skat service.
//!
//! Talks to `--server`/`SKAT_SERVER` when given, otherwise starts the service
//! in-process on a loopback port. Exit codes: 0 ok, 1 input error, 2 internal.

mod output;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use skat_api::*;
use skat_client::{Client, ClientError};
use skat_core::cards::{CardSet, GameType, Position};
use skat_core::harness::bench::{BenchConfig, Playout};
use skat_core::harness::corpus::CorpusMode;
use skat_core::harness::replay::ReplayPolicy;
use skat_core::skatselect::Policy;
use skat_service::{AppState, ServiceConfig};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "skat", version, about = "Skat discard selection, bidding and benchmarks")]
struct Cli {
    /// Base URL of a running service; without it one is started in-process.
    #[arg(long, env = "SKAT_SERVER", global = true)]
    server: Option<String>,
    /// Probability table directory.
    #[arg(long, env = skat_service::TABLES_ENV, global = true)]
    tables: Option<PathBuf>,
    /// Selection config file (lambda rows, thresholds, rule adjustments).
    #[arg(long, env = skat_service::CONFIG_ENV, global = true)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print deals by seed (one ChaCha stream per deal) or by index.
    #[command(group(ArgGroup::new("source").required(true).args(["seed", "index"])))]
    Deal {
        #[arg(long)]
        seed: Option<u64>,
        /// Lexicographic deal index; `--count` continues with index+1, ...
        #[arg(long)]
        index: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Rank the 66 puts of a hand for one game.
    Select(SelectArgs),
    /// Run the bidding loop over seeded deals.
    Auction {
        #[arg(long, default_value_t = 1000)]
        deals: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Any of `folds`, `declarations`.
        #[arg(long, value_delimiter = ',', default_value = "folds")]
        report: Vec<AuctionReport>,
        #[arg(long)]
        loss_base: Option<i64>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Double-dummy value and principal variation of a position.
    Solve {
        /// Hands by seat as `fore/middle/rear[/skat]`, each a code list.
        #[arg(long)]
        state: String,
        #[arg(long)]
        game: GameType,
        #[arg(long, default_value = "fore")]
        declarer: Position,
    },
    /// Probability tables.
    Table {
        #[command(subcommand)]
        command: TableCommand,
    },
    /// Compare put policies on identical deals.
    Bench(BenchArgs),
    /// Cross-tabulate recorded, glassbox and policy outcomes of game records.
    Replay {
        #[arg(long)]
        from: PathBuf,
        /// `recorded` or a policy name.
        #[arg(long, default_value = "proposal")]
        policy: ReplayPolicy,
    },
    /// Run the HTTP service in the foreground.
    Serve {
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Args, Debug)]
struct SelectArgs {
    /// 12 codes, or 10 together with `--skat`.
    #[arg(long)]
    hand: CardSet,
    #[arg(long)]
    skat: Option<CardSet>,
    #[arg(long)]
    game: GameType,
    #[arg(long, default_value = "fore")]
    pos: Position,
    #[arg(long, default_value_t = 18)]
    bid: u32,
    #[arg(long, default_value = "proposal")]
    policy: Policy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Show features and fired rules per candidate.
    #[arg(long)]
    explain: bool,
    /// Candidates to print; 0 prints all.
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Subcommand, Debug)]
enum TableCommand {
    /// Build tables from a record file or from self-play.
    #[command(group(ArgGroup::new("input").required(true).args(["from", "selfplay"])))]
    Build {
        #[arg(long)]
        from: Option<PathBuf>,
        /// Generate this many double-dummy self-play records.
        #[arg(long)]
        selfplay: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the self-play records here.
        #[arg(long, requires = "selfplay")]
        records_out: Option<PathBuf>,
        #[arg(long)]
        min_samples: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    deals: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "proposal,winprob,stegen,kinback,random")]
    policies: Vec<Policy>,
    #[arg(long, value_enum, default_value_t = PlayoutArg::Glassbox)]
    playout: PlayoutArg,
    /// Redeals per game in pimc playout.
    #[arg(long, default_value_t = 8)]
    worlds: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Auction)]
    mode: ModeArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AuctionReport {
    Folds,
    Declarations,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlayoutArg {
    Glassbox,
    Pimc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auction,
    Forced,
    Strongest,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("skat: {e}");
            return ExitCode::from(2);
        }
    };
    match runtime.block_on(run(cli)) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("skat: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn service_config(cli: &Cli) -> ServiceConfig {
    ServiceConfig {
        tables: cli.tables.clone(),
        config: cli.config.clone(),
        ..ServiceConfig::from_env()
    }
}

fn app_state(cli: &Cli) -> CliResult<AppState> {
    AppState::from_config(&service_config(cli)).map_err(|e| CliError::Input(format!("loading engine: {e}")))
}

async fn connect(cli: &Cli) -> CliResult<Client> {
    if let Some(url) = &cli.server {
        return Ok(Client::new(url.clone()));
    }
    let addr = skat_service::spawn(SocketAddr::from(([127, 0, 0, 1], 0)), app_state(cli)?)
        .await
        .map_err(|e| CliError::Internal(format!("starting service: {e}")))?;
    Ok(Client::new(format!("http://{addr}")))
}

/// The service resolves paths itself; relative ones are made absolute here.
fn server_path(p: &Path) -> CliResult<String> {
    std::path::absolute(p)
        .map(|p| p.to_string_lossy().into_owned())
        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}

fn parse_state(s: &str) -> CliResult<([CardSet; 3], CardSet)> {
    let parts: Vec<&str> = s.split('/').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(CliError::Input(format!("state needs 3 or 4 '/'-separated parts, got {}", parts.len())));
    }
    let sets = parts
        .iter()
        .map(|p| p.parse::<CardSet>().map_err(|e| CliError::Input(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(([sets[0], sets[1], sets[2]], sets.get(3).copied().unwrap_or_default()))
}

async fn run(cli: Cli) -> CliResult<String> {
    if let Command::Serve { port } = cli.command {
        let state = app_state(&cli)?;
        let addr = SocketAddr::from(([0, 0, 0, 0], port));
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Input(format!("bind {addr}: {e}")))?;
        log::warn!("listening on {addr}");
        skat_service::serve(listener, state)
            .await
            .map_err(|e| CliError::Internal(e.to_string()))?;
        return Ok(String::new());
    }
    let client = connect(&cli).await?;
    let f = cli.format;
    Ok(match &cli.command {
        Command::Deal { seed, index, count } => {
            let resp = client.deal(&DealRequest { seed: *seed, index: *index, count: *count }).await?;
            output::deals(&resp, f)
        }
        Command::Select(a) => {
            let req = SelectRequest {
                hand: a.hand,
                skat: a.skat,
                game: a.game,
                position: a.pos,
                bid: a.bid,
                policy: a.policy,
                seed: a.seed,
            };
            output::select(&client.select(&req).await?, f, a.explain, a.top)
        }
        Command::Auction { deals, seed, report, loss_base, threshold } => {
            let req = AuctionRequest { deals: *deals, seed: *seed, loss_base: *loss_base, threshold: *threshold };
            let resp = client.auction(&req).await?;
            output::auction(
                &resp,
                f,
                report.contains(&AuctionReport::Folds),
                report.contains(&AuctionReport::Declarations),
            )
        }
        Command::Solve { state, game, declarer } => {
            let (hands, skat) = parse_state(state)?;
            let req = SolveRequest { hands, skat, game: *game, declarer: *declarer };
            output::solve(&client.solve(&req).await?, f)
        }
        Command::Table { command: TableCommand::Build { from, selfplay, seed, out, records_out, min_samples } } => {
            let req = TableBuildRequest {
                from: from.as_deref().map(server_path).transpose()?,
                selfplay_deals: *selfplay,
                seed: *seed,
                records_out: records_out.as_deref().map(server_path).transpose()?,
                out: server_path(out)?,
                min_samples: *min_samples,
            };
            output::table_build(&client.table_build(&req).await?, f)
        }
        Command::Bench(a) => {
            let req = BenchConfig {
                deals: a.deals,
                seed: a.seed,
                policies: a.policies.clone(),
                playout: match a.playout {
                    PlayoutArg::Glassbox => Playout::Glassbox,
                    PlayoutArg::Pimc => Playout::Pimc { worlds: a.worlds },
                },
                mode: match a.mode {
                    ModeArg::Auction => CorpusMode::Auction,
                    ModeArg::Forced => CorpusMode::Forced,
                    ModeArg::Strongest => CorpusMode::Strongest,
                },
            };
            output::bench(&client.bench(&req).await?, f)
        }
        Command::Replay { from, policy } => {
            let req = ReplayRequest { from: server_path(from)?, policy: *policy };
            output::replay(&client.replay(&req).await?, f)
        }
        Command::Serve { .. } => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_parsing() {
        let (hands, skat) = parse_state("CJ SJ/HJ DJ/CA CT/SA ST").unwrap();
        assert_eq!(hands[1], "HJ DJ".parse().unwrap());
        assert_eq!(skat.len(), 2);
        assert_eq!(parse_state("CJ/SJ/HJ").unwrap().1, CardSet::EMPTY);
        assert!(matches!(parse_state("CJ/SJ"), Err(CliError::Input(_))));
        assert!(matches!(parse_state("CJ/SJ/XX"), Err(CliError::Input(_))));
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
