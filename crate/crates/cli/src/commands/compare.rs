use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use zscan_core::equivalence::Witness;
use zscan_core::realization::{extract_combinatorics, projective_equivalent, ProjectiveVerdict, RealizedArrangement, Tolerances};
use zscan_core::{are_equivalent, canonical_key, Arrangement, CanonicalKey};

use super::realize::ToleranceArgs;
use crate::error::CliError;
use crate::output::{emit, read_file, Context};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Arrangement, realized arrangement, or realization output file
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

enum Input {
    Combinatorial(Arrangement),
    Realized(RealizedArrangement),
}

fn load(path: &Path) -> Result<Input, CliError> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::invalid(path, e))?;
    let geometry = match (value.get("conic"), value.pointer("/result/geometry")) {
        (Some(_), _) => Some(value),
        (None, Some(Value::Null)) => return Err(CliError::invalid(path, "realization file holds no geometry")),
        (None, Some(g)) => Some(g.clone()),
        (None, None) => None,
    };
    match geometry {
        Some(g) => serde_json::from_value(g).map(Input::Realized).map_err(|e| CliError::invalid(path, e)),
        None => Arrangement::from_json(&text).map(Input::Combinatorial).map_err(|e| CliError::invalid(path, e)),
    }
}

fn combinatorics(path: &Path, input: &Input, tol: &Tolerances) -> Result<Arrangement, CliError> {
    match input {
        Input::Combinatorial(a) => Ok(a.clone()),
        Input::Realized(g) => extract_combinatorics(g, tol).map_err(|e| CliError::invalid(path, e)),
    }
}

#[derive(Serialize)]
struct Comparison {
    keys: [CanonicalKey; 2],
    combinatorially_equivalent: bool,
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    projective: Option<ProjectiveVerdict>,
    exit_code: u8,
}

impl Comparison {
    fn render_text(&self) -> String {
        let mut out = format!("first:  {}\nsecond: {}\n", self.keys[0], self.keys[1]);
        match &self.witness {
            Some(w) => {
                let sigma: Vec<String> = w.sigma.iter().enumerate().map(|(i, s)| format!("L{} -> L{s}", i + 1)).collect();
                out.push_str(&format!("combinatorially equivalent: {}\n", sigma.join(", ")));
            }
            None => out.push_str("combinatorially inequivalent\n"),
        }
        match &self.projective {
            Some(ProjectiveVerdict::Equivalent { matrix, residual, .. }) => {
                out.push_str(&format!("projectively equivalent (residual {residual:.3e}), matrix:\n"));
                for row in matrix {
                    let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
                    out.push_str(&format!("  {}\n", cells.join("  ")));
                }
            }
            Some(ProjectiveVerdict::NotFound { reason }) => {
                out.push_str(&format!("no projective witness found ({reason})\n"));
            }
            None => {}
        }
        out
    }
}

/// Exit 0 when equivalent, 11 when only the combinatorics agree, 12 when
/// the combinatorics differ.
pub fn run(ctx: &Context, args: &Args) -> Result<u8, CliError> {
    let tol = args.tolerances.tolerances()?;
    let first = load(&args.first)?;
    let second = load(&args.second)?;
    let a = combinatorics(&args.first, &first, &tol)?;
    let b = combinatorics(&args.second, &second, &tol)?;
    let witness = are_equivalent(&a, &b);
    let projective = match (&first, &second, &witness) {
        (Input::Realized(g1), Input::Realized(g2), Some(_)) => Some(
            projective_equivalent(g1, g2, &tol).unwrap_or_else(|e| ProjectiveVerdict::NotFound { reason: e.to_string() }),
        ),
        _ => None,
    };
    let exit_code = match (&witness, &projective) {
        (None, _) => 12,
        (Some(_), Some(ProjectiveVerdict::NotFound { .. })) => 11,
        _ => 0,
    };
    let comparison = Comparison {
        keys: [canonical_key(&a), canonical_key(&b)],
        combinatorially_equivalent: witness.is_some(),
        witness,
        projective,
        exit_code,
    };
    emit(ctx, &comparison, || comparison.render_text());
    Ok(exit_code)
}
