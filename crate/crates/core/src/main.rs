use std::fs::File;
use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use torcov::cli::{self, Command, Format, Request, EXIT_USAGE};
use torcov::modp::DEFAULT_CAP;
use torcov::ExponentMode;

#[derive(Parser)]
#[command(
    name = "torcov",
    version,
    about = "Quandle cocycle invariants and unknotting bounds for torus-covering knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension and basis of the p-coloring space of the closure.
    Colorings(QueryArgs),
    /// Shadow cocycle invariant multiset of the closure.
    Shadow(QueryArgs),
    /// Cocycle invariant multiset of S_m(b, Δ^e).
    Cocycle(QueryArgs),
    /// Unknotting and triple point cancelling number bounds.
    Bounds(QueryArgs),
    /// Run the brute-force verifiers for this braid and prime.
    Verify(QueryArgs),
    /// Process newline-delimited JSON requests, one report per line.
    Batch { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Raw,
    Ln,
    #[value(name = "2n")]
    Twice,
}

impl From<ModeArg> for ExponentMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => ExponentMode::Raw,
            ModeArg::Ln => ExponentMode::LTimes,
            ModeArg::Twice => ExponentMode::Twice,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct QueryArgs {
    /// Braid word, e.g. "m=3: s1^3 s2^-1" or "m=3: (s1 s2^-1)^4".
    #[arg(long, conflicts_with = "blocks", required_unless_present = "blocks")]
    braid: Option<String>,
    /// Power blocks "m=3: 1:1 2:-2", where i:c stands for σ_i^(c·p).
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, value_enum, default_value = "raw")]
    mode: ModeArg,
    /// Maximum number of enumerated evaluations.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Attach brute-force verifier results.
    #[arg(long)]
    verify: bool,
}

impl QueryArgs {
    fn into_request(self, command: Command) -> Request {
        Request {
            command,
            braid: self.braid,
            blocks: self.blocks,
            p: self.p,
            n: self.n,
            mode: self.mode.into(),
            cap: self.cap,
            format: match self.format {
                FormatArg::Text => Format::Text,
                FormatArg::Json => Format::Json,
            },
            verify: self.verify,
        }
    }
}

fn query(req: Request) -> ExitCode {
    match cli::run(&req) {
        Ok(report) => {
            print!("{}", cli::render(&report, req.format));
            if report.verified() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a verifier failed");
                ExitCode::from(EXIT_USAGE as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match args.command {
        Cmd::Colorings(a) => query(a.into_request(Command::Colorings)),
        Cmd::Shadow(a) => query(a.into_request(Command::Shadow)),
        Cmd::Cocycle(a) => query(a.into_request(Command::Cocycle)),
        Cmd::Bounds(a) => query(a.into_request(Command::Bounds)),
        Cmd::Verify(a) => query(a.into_request(Command::Verify)),
        Cmd::Batch { path } => {
            let file = match File::open(&path) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE as u8);
                }
            };
            match cli::batch(BufReader::new(file), io::stdout().lock()) {
                Ok(summary) => {
                    if summary.failed > 0 {
                        eprintln!(
                            "{} of {} requests failed",
                            summary.failed,
                            summary.ok + summary.failed
                        );
                    }
                    ExitCode::from(summary.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_USAGE as u8)
                }
            }
        }
    }
}
