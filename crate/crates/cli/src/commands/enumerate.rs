use std::time::Instant;

use serde::Serialize;
use zscan_core::generator::next_level;
use zscan_core::ClassCatalog;

use crate::catalog::{enumerate_header, level_path, load_level, LevelFile};
use crate::error::CliError;
use crate::output::{emit, ensure_dir, to_json, write_file, Context, Header};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Largest number of lines to classify
    #[arg(short = 'n', long = "n-max")]
    pub n_max: usize,
}

#[derive(Serialize)]
struct Summary {
    header: Header,
    n_max: usize,
    counts: Vec<usize>,
    total: usize,
}

#[derive(Serialize)]
struct LevelTiming {
    n: usize,
    seconds: f64,
    reused: bool,
}

#[derive(Serialize)]
struct Timing {
    levels: Vec<LevelTiming>,
}

/// Writes one catalog file per level and `summary.json`. Wall-clock times
/// go to `timing.json`, which is the only output that varies between runs.
pub fn run(ctx: &Context, args: &Args) -> Result<u8, CliError> {
    ensure_dir(&ctx.out)?;
    let header = enumerate_header(ctx.seed);
    let mut catalogs: Vec<ClassCatalog> = Vec::with_capacity(args.n_max + 1);
    let mut timing = Vec::new();
    let mut reusing = ctx.resume;
    for j in 0..=args.n_max {
        let start = Instant::now();
        let prev = catalogs.last();
        let loaded = if reusing { load_level(ctx, j, prev) } else { None };
        let reused = loaded.is_some();
        let catalog = match loaded {
            Some(c) => c,
            None => {
                // Later levels were derived from a file that is gone or stale.
                reusing = false;
                let catalog = prev.map_or_else(ClassCatalog::level_zero, next_level);
                let file = LevelFile::new(header.clone(), catalog);
                write_file(&level_path(&ctx.out, j), &to_json(&file))?;
                file.into_catalog()
            }
        };
        timing.push(LevelTiming { n: j, seconds: start.elapsed().as_secs_f64(), reused });
        catalogs.push(catalog);
    }

    let counts: Vec<usize> = catalogs.iter().map(ClassCatalog::len).collect();
    let summary = Summary { header, n_max: args.n_max, total: counts.iter().sum(), counts };
    write_file(&ctx.out.join("summary.json"), &to_json(&summary))?;
    write_file(&ctx.out.join("timing.json"), &to_json(&Timing { levels: timing }))?;

    emit(ctx, &summary, || {
        let mut text = String::new();
        for (j, c) in summary.counts.iter().enumerate() {
            text.push_str(&format!("level {j}: {c} classes\n"));
        }
        text.push_str(&format!("total: {} classes, catalogs in {}\n", summary.total, ctx.out.display()));
        text
    });
    Ok(0)
}
