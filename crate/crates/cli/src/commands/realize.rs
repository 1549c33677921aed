use serde::Serialize;
use zscan_core::realization::{realize, RealizationResult, RealizationStatus, Tolerances, DEFAULT_BUDGET};
use zscan_core::CanonicalKey;

use crate::catalog::resolve;
use crate::error::CliError;
use crate::output::{emit, ensure_dir, hex_prefix, to_json, write_file, Context, Header};

#[derive(Debug, Clone, clap::Args)]
pub struct ToleranceArgs {
    /// Largest accepted sum of squared incidence residuals
    #[arg(long, allow_negative_numbers = true, default_value_t = Tolerances::default().res)]
    pub tol_res: f64,
    /// Distance below which two points coincide
    #[arg(long, allow_negative_numbers = true, default_value_t = Tolerances::default().cluster)]
    pub tol_cluster: f64,
    /// Discriminant modulus below which a line is tangent
    #[arg(long, allow_negative_numbers = true, default_value_t = Tolerances::default().tan)]
    pub tol_tan: f64,
}

impl ToleranceArgs {
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let tol = Tolerances { res: self.tol_res, cluster: self.tol_cluster, tan: self.tol_tan };
        tol.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(tol)
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Canonical class key, or path to an arrangement JSON file
    pub target: String,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    /// Number of random starts
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Serialize)]
struct RealizeConfig<'a> {
    command: &'static str,
    key: &'a CanonicalKey,
    tolerances: Tolerances,
    budget: usize,
}

#[derive(Serialize)]
struct RealizationFile {
    header: Header,
    key: CanonicalKey,
    tolerances: Tolerances,
    budget: usize,
    result: RealizationResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

const UNKNOWN_NOTE: &str = "the search exhausted its budget; this does not show the class is unrealizable";

/// Exit 0 when realized, 10 when the search gave up.
pub fn run(ctx: &Context, args: &Args) -> Result<u8, CliError> {
    let tol = args.tolerances.tolerances()?;
    let (key, a) = resolve(ctx, &args.target)?;
    let result = realize(&a, args.budget, ctx.seed, &tol).map_err(|e| CliError::Config(e.to_string()))?;
    let config = RealizeConfig { command: "realize", key: &key, tolerances: tol, budget: args.budget };
    let header = Header::new(ctx.seed, &config);
    let realized = result.status == RealizationStatus::Realized;
    let file = RealizationFile {
        header,
        key: key.clone(),
        tolerances: tol,
        budget: args.budget,
        result,
        note: (!realized).then_some(UNKNOWN_NOTE),
    };
    ensure_dir(&ctx.out)?;
    let path = ctx.out.join(format!("realization-{}.json", hex_prefix(key.as_str().as_bytes(), 16)));
    write_file(&path, &to_json(&file))?;
    emit(ctx, &file, || match &file.result.geometry {
        Some(g) => format!(
            "class {key}\nrealized after {} attempt(s), residual {:.3e}, separation {:.3e}\nwritten to {}\n",
            file.result.attempts,
            g.residual,
            g.separation,
            path.display()
        ),
        None => format!(
            "class {key}\nunknown after {} attempt(s): {UNKNOWN_NOTE}\nwritten to {}\n",
            file.result.attempts,
            path.display()
        ),
    });
    Ok(if realized { 0 } else { 10 })
}
