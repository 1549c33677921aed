pub mod compare;
pub mod enumerate;
pub mod explain;
pub mod export;
pub mod realize;

use crate::error::CliError;
use crate::output::Context;

#[derive(Debug, clap::Subcommand)]
pub enum Commands {
    /// Classify all arrangements with up to n lines, one catalog file per level
    Enumerate(enumerate::Args),

    /// Show the point table, constraints and filter verdicts of one class
    Explain(explain::Args),

    /// Search for complex coordinates realizing a class
    ///
    /// Exits with 10 when the search budget runs out. That outcome says
    /// nothing about whether the class is realizable.
    Realize(realize::Args),

    /// Compare two arrangements combinatorially, and projectively when both
    /// carry coordinates
    Compare(compare::Args),

    /// Write candidate reports for every level up to n
    Export(export::Args),
}

pub fn run(ctx: &Context, command: &Commands) -> Result<u8, CliError> {
    match command {
        Commands::Enumerate(args) => enumerate::run(ctx, args),
        Commands::Explain(args) => explain::run(ctx, args),
        Commands::Realize(args) => realize::run(ctx, args),
        Commands::Compare(args) => compare::run(ctx, args),
        Commands::Export(args) => export::run(ctx, args),
    }
}
