use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lierine_cli::{parse_instance, run, Command, GeneratorMode, Options};

#[derive(Parser)]
#[command(name = "lierine", version, about = "Exact checks for Lie-Rinehart, twilled and bialgebra structures")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate Lie-Rinehart algebras, modules and connections
    CheckLr(Common),
    /// Check the twilled axioms and their equivalent forms
    CheckTwilled(Common),
    /// Cohomology dimensions; on a twilled pair, compare both complexes
    Cohomology(Common),
    /// Evaluate bracket queries
    Bracket(Common),
    /// Build, validate or square generators
    Generator {
        #[arg(value_enum)]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Check the bialgebra compatibility
    CheckBialgebra(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FromConnection,
    Validate,
    Square,
    ToConnection,
    WeakDbv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLike,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.command {
        Cmd::CheckLr(c) => (Command::CheckLr, c),
        Cmd::CheckTwilled(c) => (Command::CheckTwilled, c),
        Cmd::Cohomology(c) => (Command::Cohomology, c),
        Cmd::Bracket(c) => (Command::Bracket, c),
        Cmd::CheckBialgebra(c) => (Command::CheckBialgebra, c),
        Cmd::Generator { mode, common } => {
            let m = match mode {
                Mode::FromConnection => GeneratorMode::FromConnection,
                Mode::Validate => GeneratorMode::Validate,
                Mode::Square => GeneratorMode::Square,
                Mode::ToConnection => GeneratorMode::ToConnection,
                Mode::WeakDbv => GeneratorMode::WeakDbv,
            };
            (Command::Generator(m), common)
        }
    };
    let text = match std::fs::read_to_string(&common.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.input.display());
            return ExitCode::from(2);
        }
    };
    let set = match parse_instance(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", common.input.display());
            return ExitCode::from(2);
        }
    };
    let opts = Options { name: common.name, max_degree: common.max_degree };
    match run(cmd, &set, &opts) {
        Ok(report) => {
            let out = if common.format == Format::JsonLike { report.to_json() } else { report.to_text() };
            print!("{out}");
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
