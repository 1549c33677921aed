use serde::Serialize;
use zscan_core::candidate_report;
use zscan_core::minimality::CandidateReport;

use crate::catalog::{catalog_for, enumerate_header};
use crate::error::CliError;
use crate::output::{emit, ensure_dir, to_json, write_file, Context, Header};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Write reports for levels 0 through this one
    #[arg(short = 'n', long = "n-max")]
    pub n_max: usize,
}

#[derive(Serialize)]
struct ReportFile {
    header: Header,
    report: CandidateReport,
}

#[derive(Serialize)]
struct ExportSummary {
    levels: Vec<LevelSurvivors>,
}

#[derive(Serialize)]
struct LevelSurvivors {
    n: usize,
    classes: usize,
    survivors: usize,
}

/// Writes `report-<j>.json` and `report-<j>.txt`, the candidate report of
/// each level, using catalog files from the output directory when present.
pub fn run(ctx: &Context, args: &Args) -> Result<u8, CliError> {
    ensure_dir(&ctx.out)?;
    let mut levels = Vec::new();
    for j in 0..=args.n_max {
        let report = candidate_report(&catalog_for(ctx, j)?);
        levels.push(LevelSurvivors { n: j, classes: report.classes.len(), survivors: report.survivors.len() });
        let text = report.render_text();
        let file = ReportFile { header: enumerate_header(ctx.seed), report };
        write_file(&ctx.out.join(format!("report-{j}.json")), &to_json(&file))?;
        write_file(&ctx.out.join(format!("report-{j}.txt")), &text)?;
    }
    let summary = ExportSummary { levels };
    emit(ctx, &summary, || {
        summary
            .levels
            .iter()
            .map(|l| format!("level {}: {} classes, {} survivors\n", l.n, l.classes, l.survivors))
            .collect()
    });
    Ok(0)
}
