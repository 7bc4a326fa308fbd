//! Command-line front end for `catcodes`: rates, thresholds, length scans,
//! figure data, degradability verdicts and oracle checks.

pub mod app;
pub mod error;
pub mod grid;
pub mod spec;

pub use app::{run, Cli, Command};
pub use error::CliError;

use clap::Parser;

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr());
    match run(cli, &mut out, &mut err) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
