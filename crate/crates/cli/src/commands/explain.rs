use serde::Serialize;
use zscan_core::minimality::Analysis;
use zscan_core::{analyze, CanonicalKey};

use crate::catalog::resolve;
use crate::error::CliError;
use crate::output::{emit, Context};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Canonical class key, or path to an arrangement JSON file
    pub target: String,
}

#[derive(Serialize)]
struct Explanation {
    key: CanonicalKey,
    analysis: Analysis,
}

pub fn run(ctx: &Context, args: &Args) -> Result<u8, CliError> {
    let (key, a) = resolve(ctx, &args.target)?;
    let explanation = Explanation { key, analysis: analyze(&a) };
    emit(ctx, &explanation, || format!("class {}\n{}", explanation.key, explanation.analysis.render_text()));
    Ok(0)
}
