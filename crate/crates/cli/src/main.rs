//! `hamcouple`: verification campaigns, simulations, composition
//! experiments and parity checks from the command line.
//!
//! Exit codes: 0 all checks pass, 1 a check fails, 2 usage error (unknown
//! name, bad config, schema mismatch), 3 blow-up during a run, 4 matched-pair
//! compatibility failure, 5 undefined parity.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hamcouple::state::Parity;
use hamcouple::Error;

mod commands;
mod plot;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BLOWUP: u8 = 3;
pub const EXIT_COMPATIBILITY: u8 = 4;
pub const EXIT_PARITY: u8 = 5;

#[derive(Parser)]
#[command(name = "hamcouple", version, about = "Poisson brackets for matter coupled to electromagnetic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Antisymmetry, Leibniz, energy, Jacobi, Casimir and constraint checks.
    Verify {
        /// Catalog bracket name.
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        bracket: Option<String>,
        /// Every catalog bracket.
        #[arg(long)]
        all: bool,
        /// Points per axis for field brackets.
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time integration from a run config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: $HAMCOUPLE_OUT, else ./hamcouple-out).
        #[arg(long, env = "HAMCOUPLE_OUT", default_value = "hamcouple-out")]
        out: PathBuf,
    },
    /// Builds a bracket from combinators or a finite matched pair and checks it.
    Compose {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Onsager-Casimir parity check of a catalog bracket.
    Ocrr {
        #[arg(long)]
        bracket: String,
        /// Points per axis of the dense domain.
        #[arg(long, default_value_t = 4)]
        grid: usize,
        #[arg(long, default_value_t = 5)]
        states: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Parity override, `VAR=even` or `VAR=odd`; repeatable.
        #[arg(long = "parity", value_parser = parse_parity)]
        parities: Vec<(String, Parity)>,
        #[arg(long, env = "HAMCOUPLE_OUT", default_value = "hamcouple-out")]
        out: PathBuf,
    },
    /// Poisson-map test of a projection between two catalog brackets.
    Project {
        #[arg(long)]
        map: String,
        #[arg(long)]
        fine: String,
        #[arg(long)]
        coarse: String,
        /// Points per axis for field brackets.
        #[arg(long, default_value_t = 6)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "HAMCOUPLE_OUT", default_value = "hamcouple-out")]
        out: PathBuf,
    },
}

fn parse_parity(s: &str) -> Result<(String, Parity), String> {
    let (name, p) = s.split_once('=').ok_or_else(|| format!("expected VAR=even|odd, got `{s}`"))?;
    let parity = match p {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        _ => return Err(format!("parity must be `even` or `odd`, got `{p}`")),
    };
    Ok((name.to_string(), parity))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownName { .. } | Error::Config(_) | Error::Schema(_) | Error::Dimension { .. } => EXIT_USAGE,
        Error::BlowUp { .. } => EXIT_BLOWUP,
        Error::ParityUndefined(_) => EXIT_PARITY,
        _ => EXIT_FAIL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { bracket, all, grid, seed } => commands::verify(bracket.as_deref(), all, grid, seed),
        Command::Simulate { config, out } => commands::simulate(&config, &out),
        Command::Compose { spec } => commands::compose(&spec),
        Command::Ocrr {
            bracket,
            grid,
            states,
            seed,
            tol,
            parities,
            out,
        } => commands::ocrr(&bracket, grid, states, seed, tol, &parities, &out),
        Command::Project {
            map,
            fine,
            coarse,
            grid,
            seed,
            out,
        } => commands::project(&map, &fine, &coarse, grid, seed, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_overrides_parse() {
        assert_eq!(parse_parity("B=even").unwrap(), ("B".to_string(), Parity::Even));
        assert_eq!(parse_parity("u=odd").unwrap().1, Parity::Odd);
        assert!(parse_parity("B").is_err());
        assert!(parse_parity("B=sideways").is_err());
    }

    #[test]
    fn errors_map_to_documented_codes() {
        let unknown = Error::UnknownName {
            kind: "bracket",
            name: "x".into(),
        };
        assert_eq!(exit_code(&unknown), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Schema("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::BlowUp {
                step: 3,
                detail: "nan".into()
            }),
            EXIT_BLOWUP
        );
        assert_eq!(exit_code(&Error::ParityUndefined("f".into())), EXIT_PARITY);
        assert_eq!(exit_code(&Error::Numerical("x".into())), EXIT_FAIL);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
