mod commands;
mod render;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use setcalc::acceptance::FamilyKind;
use setcalc::arbitrage::Condition;
use setcalc::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "setcalc",
    version,
    about = "Exact superhedging and risk-arbitrage analysis on scenario trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Acceptance family: essinf, expectation or entropic.
    #[arg(long, global = true, default_value = "essinf", value_parser = parse_family)]
    pub acceptance: FamilyKind,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Add non-authoritative decimal approximations to JSON output.
    #[arg(long, global = true)]
    pub decimal: bool,
    /// SVG viewport as xmin,xmax,ymin,ymax.
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "-20,20,-20,20", value_parser = parse_viewport)]
    pub viewport: Viewport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rational,
    pub xmax: Rational,
    pub ymin: Rational,
    pub ymax: Rational,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a tree document and report what it contains.
    Validate { input: PathBuf },
    /// Superhedging price sets of the claim (zero when absent) at every node.
    Price { input: PathBuf },
    /// Risk-arbitrage verdicts with witnesses.
    Arbitrage {
        input: PathBuf,
        /// Comma-separated conditions; all that apply to the family by default.
        #[arg(long, value_delimiter = ',', value_parser = parse_condition)]
        conditions: Vec<Condition>,
        /// Exit with status 3 when any condition fails.
        #[arg(long)]
        fail_on_arbitrage: bool,
    },
    /// Search for a weakly (or strictly) consistent price system.
    Cps {
        input: PathBuf,
        #[arg(long)]
        strict: bool,
        /// Starting time of the price system.
        #[arg(long, default_value_t = 0)]
        t: usize,
    },
    /// Interval recursions and theorem checks for a bid-ask tree.
    TwoAsset { input: PathBuf },
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.parse()
        .map_err(|_| format!("unknown acceptance family {s:?}"))
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    s.parse().map_err(|_| format!("unknown condition {s:?}"))
}

fn parse_viewport(s: &str) -> Result<Viewport, String> {
    let parts: Vec<Rational> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<Rational>()
                .map_err(|e| format!("{p:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    let [xmin, xmax, ymin, ymax]: [Rational; 4] = parts
        .try_into()
        .map_err(|_| "viewport needs four numbers xmin,xmax,ymin,ymax".to_string())?;
    if xmin >= xmax || ymin >= ymax {
        return Err("viewport must have xmin < xmax and ymin < ymax".into());
    }
    Ok(Viewport {
        xmin,
        xmax,
        ymin,
        ymax,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { input } => commands::validate(input, &cli.common),
        Command::Price { input } => commands::price(input, &cli.common),
        Command::Arbitrage {
            input,
            conditions,
            fail_on_arbitrage,
        } => commands::arbitrage(input, &cli.common, conditions, *fail_on_arbitrage),
        Command::Cps { input, strict, t } => commands::cps(input, &cli.common, *strict, *t),
        Command::TwoAsset { input } => commands::two_asset(input, &cli.common),
    };
    match outcome.and_then(|out| commands::emit(&cli.common, out)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("setcalc: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
