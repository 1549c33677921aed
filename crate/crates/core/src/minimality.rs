//! Line removal and the minimality filters.
//!
//! A class is excluded when one of three structural criteria shows it cannot
//! contain a minimal Zariski pair:
//!
//! * Lemma 1: some line passes through no constraint.
//! * Lemma 2: some non-tangent line passes through exactly one constraint,
//!   and after removing the line, that point's characteristic is unique.
//! * Lemma 3: some non-tangent line passes through exactly two constraints,
//!   and after removing the line, no other pair of points carries the same
//!   pair of characteristics.
//!
//! Tangent lines are never used as witnesses for Lemmas 2 and 3: a tangent
//! line cannot be put back uniquely from the characteristic of its constraint
//! alone. Such lines are reported as inconclusive.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::CanonicalKey;
use crate::generator::ClassCatalog;
use crate::model::{Arrangement, CharTriple, LineId, ModelError, PointRecord};

/// Removes `line` and relabels the lines above it downward. Points left on
/// fewer than two components disappear; a tangency point of the removed line
/// that other lines pass through stays as a transverse conic point.
pub fn remove_line(a: &Arrangement, line: LineId) -> Result<Arrangement, ModelError> {
    remove_line_mapped(a, line).map(|(r, _)| r)
}

/// Like [`remove_line`], also returning for each point of `a` its index in the
/// reduced arrangement, if it survives.
pub fn remove_line_mapped(a: &Arrangement, line: LineId) -> Result<(Arrangement, Vec<Option<usize>>), ModelError> {
    a.check_line(line)?;
    let shift = |l: LineId| if l > line { LineId(l.0 - 1) } else { l };
    let mut kept: Vec<(usize, PointRecord)> = Vec::new();
    for (i, p) in a.points().iter().enumerate() {
        let lines: Vec<LineId> = p.lines.iter().copied().filter(|&l| l != line).map(shift).collect();
        let survives = if p.on_conic { !lines.is_empty() } else { lines.len() >= 2 };
        if survives {
            let tangent_line = p.tangent_line.filter(|&t| t != line).map(shift);
            kept.push((i, PointRecord { lines, on_conic: p.on_conic, tangent_line }));
        }
    }
    // Same order as normalization, so positions are stable through validation.
    kept.sort_by(|(_, x), (_, y)| {
        (&x.lines, x.on_conic, x.tangent_line.map_or(0, |l| l.0))
            .cmp(&(&y.lines, y.on_conic, y.tangent_line.map_or(0, |l| l.0)))
    });
    let mut map = vec![None; a.points().len()];
    for (pos, (orig, _)) in kept.iter().enumerate() {
        map[*orig] = Some(pos);
    }
    let reduced = Arrangement::validate(a.n() - 1, kept.into_iter().map(|(_, p)| p).collect())?;
    Ok((reduced, map))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lemma {
    L1,
    L2,
    L3,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self {
            Lemma::L1 => 1,
            Lemma::L2 => 2,
            Lemma::L3 => 3,
        };
        write!(f, "Lemma {k}")
    }
}

/// Class-level outcome of one filter. `excluded` carries a witness line,
/// except for the lineless arrangement, which is excluded outright.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub lemma: Lemma,
    pub excluded: bool,
    pub witness_line: Option<LineId>,
    pub witness_points: Vec<usize>,
    pub narrative: String,
}

/// Outcome of one filter on one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineOutcome {
    Excludes,
    Passes,
    NotApplicable,
    /// The line is tangent; the filter is not applied.
    Inconclusive,
}

impl fmt::Display for LineOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineOutcome::Excludes => "excludes",
            LineOutcome::Passes => "passes",
            LineOutcome::NotApplicable => "not applicable",
            LineOutcome::Inconclusive => "inconclusive (tangent line)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCheck {
    pub line: LineId,
    pub tangent: bool,
    pub constraints: Vec<usize>,
    pub lemma1: LineOutcome,
    pub lemma2: LineOutcome,
    pub lemma3: LineOutcome,
    /// Characteristics, in the arrangement without this line, of this
    /// line's constraints.
    pub reduced_chars: Vec<CharTriple>,
}

fn line_constraints(a: &Arrangement, line: LineId) -> Vec<usize> {
    a.points_on(line)
        .filter(|&i| a.points()[i].characteristic().is_constraint())
        .collect()
}

/// Number of unordered point pairs in `a` whose characteristics form the
/// unordered pair `{c1, c2}`, not counting the pair the constraints map to.
fn other_pair_count(a: &Arrangement, c1: CharTriple, c2: CharTriple) -> usize {
    let count = |c: CharTriple| a.points().iter().filter(|p| p.characteristic() == c).count();
    let total = if c1 == c2 {
        let m = count(c1);
        m * m.saturating_sub(1) / 2
    } else {
        count(c1) * count(c2)
    };
    total - 1
}

pub fn check_line(a: &Arrangement, line: LineId) -> Result<LineCheck, ModelError> {
    a.check_line(line)?;
    let tangent = a.is_tangent(line);
    let constraints = line_constraints(a, line);
    let lemma1 = if constraints.is_empty() { LineOutcome::Excludes } else { LineOutcome::Passes };
    let mut lemma2 = LineOutcome::NotApplicable;
    let mut lemma3 = LineOutcome::NotApplicable;
    let mut reduced_chars = Vec::new();

    if matches!(constraints.len(), 1 | 2) {
        let (reduced, map) = remove_line_mapped(a, line)?;
        reduced_chars = constraints
            .iter()
            .map(|&i| {
                let j = map[i].expect("a constraint keeps at least two components");
                reduced.points()[j].characteristic()
            })
            .collect();
        let outcome = if tangent {
            LineOutcome::Inconclusive
        } else if constraints.len() == 1 {
            let c = reduced_chars[0];
            let occurrences = reduced.points().iter().filter(|p| p.characteristic() == c).count();
            if occurrences == 1 { LineOutcome::Excludes } else { LineOutcome::Passes }
        } else if other_pair_count(&reduced, reduced_chars[0], reduced_chars[1]) == 0 {
            LineOutcome::Excludes
        } else {
            LineOutcome::Passes
        };
        if constraints.len() == 1 {
            lemma2 = outcome;
        } else {
            lemma3 = outcome;
        }
    }

    Ok(LineCheck { line, tangent, constraints, lemma1, lemma2, lemma3, reduced_chars })
}

pub fn check_lines(a: &Arrangement) -> Vec<LineCheck> {
    a.lines().map(|l| check_line(a, l).expect("line in range")).collect()
}

fn point_labels(a: &Arrangement, points: &[usize]) -> String {
    points.iter().map(|&i| a.points()[i].label()).collect::<Vec<_>>().join(", ")
}

fn verdict_from(a: &Arrangement, checks: &[LineCheck], lemma: Lemma) -> LemmaVerdict {
    fn outcome_of(c: &LineCheck, lemma: Lemma) -> &LineOutcome {
        match lemma {
            Lemma::L1 => &c.lemma1,
            Lemma::L2 => &c.lemma2,
            Lemma::L3 => &c.lemma3,
        }
    }
    let outcome = |c: &LineCheck| outcome_of(c, lemma).clone();
    if lemma == Lemma::L1 && a.n() == 0 {
        return LemmaVerdict {
            lemma,
            excluded: true,
            witness_line: None,
            witness_points: Vec::new(),
            narrative: "no lines: the conic alone has no constraints".into(),
        };
    }
    match checks.iter().find(|c| outcome(c) == LineOutcome::Excludes) {
        Some(c) => {
            let narrative = match lemma {
                Lemma::L1 => format!("{} passes through no constraint", c.line),
                Lemma::L2 => format!(
                    "{} passes through exactly one constraint {}; without {} its characteristic {} is unique",
                    c.line,
                    point_labels(a, &c.constraints),
                    c.line,
                    c.reduced_chars[0]
                ),
                Lemma::L3 => format!(
                    "{} passes through exactly two constraints {}; without {} no other pair of points has characteristics {} and {}",
                    c.line,
                    point_labels(a, &c.constraints),
                    c.line,
                    c.reduced_chars[0],
                    c.reduced_chars[1]
                ),
            };
            LemmaVerdict {
                lemma,
                excluded: true,
                witness_line: Some(c.line),
                witness_points: c.constraints.clone(),
                narrative,
            }
        }
        None => {
            let inconclusive: Vec<String> = checks
                .iter()
                .filter(|c| outcome(c) == LineOutcome::Inconclusive)
                .map(|c| c.line.to_string())
                .collect();
            let narrative = if inconclusive.is_empty() {
                "no line triggers this criterion".to_string()
            } else {
                format!("no exclusion; inconclusive on tangent lines {}", inconclusive.join(", "))
            };
            LemmaVerdict {
                lemma,
                excluded: false,
                witness_line: None,
                witness_points: Vec::new(),
                narrative,
            }
        }
    }
}

pub fn lemma1_filter(a: &Arrangement) -> LemmaVerdict {
    verdict_from(a, &check_lines(a), Lemma::L1)
}

pub fn lemma2_filter(a: &Arrangement) -> LemmaVerdict {
    verdict_from(a, &check_lines(a), Lemma::L2)
}

pub fn lemma3_filter(a: &Arrangement) -> LemmaVerdict {
    verdict_from(a, &check_lines(a), Lemma::L3)
}

/// One row of the point table: label and a description of its
/// characteristic, lines and tangency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub point: String,
    pub characteristic: CharTriple,
    pub lines: Vec<LineId>,
    pub tangency: Option<LineId>,
    pub constraint: bool,
}

impl TableRow {
    pub fn description(&self) -> String {
        let lines: Vec<String> = self.lines.iter().map(|l| l.0.to_string()).collect();
        let mut s = format!("characteristic is {}, lines are {}", self.characteristic, lines.join(", "));
        if let Some(t) = self.tangency {
            s.push_str(&format!(", tangency is {}", t.0));
        }
        s
    }
}

/// Full diagnostics for one arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub table: Vec<TableRow>,
    pub constraints: Vec<String>,
    pub lines: Vec<LineCheck>,
    pub verdicts: Vec<LemmaVerdict>,
    pub excluded: bool,
    pub status: String,
}

pub fn analyze(a: &Arrangement) -> Analysis {
    let table = a
        .points()
        .iter()
        .map(|p| TableRow {
            point: p.label(),
            characteristic: p.characteristic(),
            lines: p.lines.clone(),
            tangency: p.tangent_line,
            constraint: p.characteristic().is_constraint(),
        })
        .collect();
    let constraint_idx = a.constraints();
    let lines = check_lines(a);
    let verdicts: Vec<LemmaVerdict> =
        [Lemma::L1, Lemma::L2, Lemma::L3].into_iter().map(|l| verdict_from(a, &lines, l)).collect();
    let excluded = verdicts.iter().any(|v| v.excluded);
    let status = match verdicts.iter().find(|v| v.excluded) {
        None => "candidate (survives all filters)".to_string(),
        Some(v) if a.n() == 0 => format!("excluded by {} (no lines)", v.lemma),
        Some(v) if v.lemma == Lemma::L1 && constraint_idx.is_empty() => {
            format!("excluded by {} (no constraints)", v.lemma)
        }
        Some(v) => {
            let line = v.witness_line.expect("exclusion names a line");
            if v.witness_points.is_empty() {
                format!("excluded by {} (witness {line}, no constraint on the line)", v.lemma)
            } else {
                format!("excluded by {} (witness {line}, {})", v.lemma, point_labels(a, &v.witness_points))
            }
        }
    };
    Analysis {
        table,
        constraints: constraint_idx.iter().map(|&i| a.points()[i].label()).collect(),
        lines,
        verdicts,
        excluded,
        status,
    }
}

impl Analysis {
    /// Plain-text rendering: the point table, constraints, per-line checks
    /// and the class status.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let width = self.table.iter().map(|r| r.point.len()).max().unwrap_or(0).max("Point".len());
        out.push_str(&format!("{:<width$} | Characteristic\n", "Point"));
        for row in &self.table {
            out.push_str(&format!("{:<width$} | {}\n", row.point, row.description()));
        }
        out.push_str(&format!(
            "constraints: {}\n",
            if self.constraints.is_empty() { "none".to_string() } else { self.constraints.join(", ") }
        ));
        for c in &self.lines {
            out.push_str(&format!(
                "{}: {}, {} constraint(s); Lemma 1 {}; Lemma 2 {}; Lemma 3 {}\n",
                c.line,
                if c.tangent { "tangent" } else { "transverse" },
                c.constraints.len(),
                c.lemma1,
                c.lemma2,
                c.lemma3
            ));
        }
        for v in &self.verdicts {
            out.push_str(&format!(
                "{}: {} ({})\n",
                v.lemma,
                if v.excluded { "excluded" } else { "not excluded" },
                v.narrative
            ));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub key: CanonicalKey,
    pub analysis: Analysis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub n: usize,
    pub classes: Vec<CandidateEntry>,
    /// Keys of the classes no filter excludes.
    pub survivors: Vec<CanonicalKey>,
}

pub fn candidate_report(catalog: &ClassCatalog) -> CandidateReport {
    let classes: Vec<CandidateEntry> = catalog
        .classes
        .par_iter()
        .map(|c| CandidateEntry {
            key: c.key.clone(),
            analysis: analyze(&c.representative),
        })
        .collect();
    let survivors = classes
        .iter()
        .filter(|c| !c.analysis.excluded)
        .map(|c| c.key.clone())
        .collect();
    CandidateReport { n: catalog.n, classes, survivors }
}

impl CandidateReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "level {}: {} classes, {} survivors\n",
            self.n,
            self.classes.len(),
            self.survivors.len()
        );
        for c in &self.classes {
            out.push_str(&format!("\n== {}\n", c.key));
            out.push_str(&c.analysis.render_text());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::weak_numerical_type;
    use crate::fixtures;
    use crate::model::char_counts;

    fn chars(a: &Arrangement) -> Vec<CharTriple> {
        weak_numerical_type(a).triples().to_vec()
    }

    #[test]
    fn fig1_remove_l4() {
        let a = fixtures::fig1();
        let (r, map) = remove_line_mapped(&a, LineId(4)).unwrap();
        assert_eq!(r.n(), 3);
        let mut expected = vec![
            CharTriple::new(1, 1, 1),
            CharTriple::new(0, 1, 2),
            CharTriple::new(0, 0, 2),
            CharTriple::new(0, 1, 1),
        ];
        expected.sort();
        assert_eq!(chars(&r), expected);
        let p34 = a.points().iter().position(|p| p.label() == "P(3,4)").unwrap();
        let image = &r.points()[map[p34].unwrap()];
        assert_eq!(image.characteristic(), CharTriple::new(0, 1, 1));
    }

    #[test]
    fn fig1_remove_tangent_line() {
        let r = remove_line(&fixtures::fig1(), LineId(1)).unwrap();
        assert_eq!(r.points().len(), 5);
        let counts = char_counts(&chars(&r));
        assert_eq!(counts[&CharTriple::new(0, 1, 1)], 2);
        assert_eq!(counts[&CharTriple::new(0, 0, 2)], 1);
        assert_eq!(counts[&CharTriple::new(0, 1, 2)], 2);
        // former tangency point is now a plain crossing of the old L2
        assert!(r.points().iter().any(|p| p.lines == [LineId(1)] && p.on_conic && p.tangent_line.is_none()));
    }

    #[test]
    fn remove_only_line() {
        assert_eq!(remove_line(&fixtures::single_tangent(), LineId(1)).unwrap(), Arrangement::conic_only());
        assert!(remove_line(&fixtures::single_tangent(), LineId(2)).is_err());
    }

    #[test]
    fn lemma1_cases() {
        let v = lemma1_filter(&fixtures::fig1());
        assert!(!v.excluded);
        let t = lemma1_filter(&fixtures::tangent_triangle());
        assert!(t.excluded);
        assert!(t.witness_line.is_some());
        assert!(lemma1_filter(&fixtures::conic_only()).excluded);
        assert!(lemma1_filter(&fixtures::single_tangent()).excluded);
        assert!(lemma1_filter(&fixtures::single_transverse()).excluded);
    }

    #[test]
    fn lemma2_on_fig1() {
        let a = fixtures::fig1();
        let v = lemma2_filter(&a);
        assert!(v.excluded);
        assert_eq!(v.witness_line, Some(LineId(4)));
        assert_eq!(v.witness_points.len(), 1);
        assert_eq!(a.points()[v.witness_points[0]].label(), "P(3,4)");
        let l1 = check_line(&a, LineId(1)).unwrap();
        assert_eq!(l1.lemma2, LineOutcome::Inconclusive);
    }

    /// Pair test by direct scan over all unordered point pairs.
    fn scan_other_pairs(a: &Arrangement, line: LineId) -> usize {
        let cons = line_constraints(a, line);
        let (r, map) = remove_line_mapped(a, line).unwrap();
        let p = map[cons[0]].unwrap();
        let q = map[cons[1]].unwrap();
        let target = {
            let mut t = [r.points()[p].characteristic(), r.points()[q].characteristic()];
            t.sort();
            t
        };
        let mut hits = 0;
        for x in 0..r.points().len() {
            for y in x + 1..r.points().len() {
                if (x, y) == (p.min(q), p.max(q)) {
                    continue;
                }
                let mut t = [r.points()[x].characteristic(), r.points()[y].characteristic()];
                t.sort();
                hits += usize::from(t == target);
            }
        }
        hits
    }

    #[test]
    fn lemma3_on_fig1_matches_scan() {
        let a = fixtures::fig1();
        for l in [LineId(2), LineId(3)] {
            let c = check_line(&a, l).unwrap();
            assert_eq!(c.constraints.len(), 2);
            let expected = if scan_other_pairs(&a, l) == 0 { LineOutcome::Excludes } else { LineOutcome::Passes };
            assert_eq!(c.lemma3, expected);
        }
        // L2 and L3 both keep a sibling pair after removal
        assert!(!lemma3_filter(&a).excluded);
    }

    #[test]
    fn lemma3_pair_count_matches_scan_everywhere() {
        for level in crate::generator::enumerate_classes(4) {
            for c in &level.classes {
                let a = &c.representative;
                for check in check_lines(a) {
                    if check.constraints.len() == 2 && !check.tangent {
                        let expected =
                            if scan_other_pairs(a, check.line) == 0 { LineOutcome::Excludes } else { LineOutcome::Passes };
                        assert_eq!(check.lemma3, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn tangent_lines_never_witness_lemma2_or_3() {
        for level in crate::generator::enumerate_classes(4) {
            for c in &level.classes {
                let a = &c.representative;
                for v in [lemma2_filter(a), lemma3_filter(a)] {
                    if let Some(l) = v.witness_line {
                        assert!(!a.is_tangent(l));
                    }
                }
            }
        }
    }

    #[test]
    fn fig1_status() {
        let an = analyze(&fixtures::fig1());
        assert!(an.excluded);
        assert_eq!(an.status, "excluded by Lemma 2 (witness L4, P(3,4))");
        assert_eq!(an.table.len(), 7);
        let text = an.render_text();
        assert!(text.contains("characteristic is (1, 1, 1), lines are 1, 2, tangency is 1"));
        assert_eq!(analyze(&fixtures::tangent_triangle()).status, "excluded by Lemma 1 (no constraints)");
        let c = analyze(&fixtures::conic_only());
        assert!(c.excluded && c.table.is_empty());
    }

    #[test]
    fn low_levels_fully_excluded() {
        for level in crate::generator::enumerate_classes(1) {
            let report = candidate_report(&level);
            assert!(report.survivors.is_empty());
        }
    }

    #[test]
    fn report_matches_per_class_filters() {
        let level = crate::generator::enumerate_classes(3).pop().unwrap();
        let report = candidate_report(&level);
        let expected: Vec<CanonicalKey> = level
            .classes
            .iter()
            .filter(|c| {
                let a = &c.representative;
                !(lemma1_filter(a).excluded || lemma2_filter(a).excluded || lemma3_filter(a).excluded)
            })
            .map(|c| c.key.clone())
            .collect();
        assert_eq!(report.survivors, expected);
        assert_eq!(candidate_report(&level), report);
    }
}
