//! Combinatorial data model of an (n,1) conic-line arrangement.
//!
//! An [`Arrangement`] is a list of intersection points. Each point records
//! which lines pass through it, whether it lies on the conic, and which line
//! (if any) is tangent to the conic there. Every pair of lines meets in
//! exactly one recorded point; a tangent line touches the conic at one point
//! and a transverse line crosses it at two.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based line label `L1..Ln`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LineId(pub u32);

impl LineId {
    pub fn new(value: u32) -> Self {
        LineId(value)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position, for indexing per-line tables.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_index(i: usize) -> Self {
        LineId(i as u32 + 1)
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

/// Characteristic triple of an intersection point: tangency flag, conic
/// membership flag, and the number of non-tangent lines through the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharTriple {
    pub chi1: u8,
    pub chi2: u8,
    pub chi3: u32,
}

impl CharTriple {
    pub const fn new(chi1: u8, chi2: u8, chi3: u32) -> Self {
        CharTriple { chi1, chi2, chi3 }
    }

    /// Number of components through the point. At most one line can be
    /// tangent to a smooth conic at a given point, so the sum counts each
    /// component exactly once.
    pub fn components(&self) -> u32 {
        self.chi1 as u32 + self.chi2 as u32 + self.chi3
    }

    pub fn is_constraint(&self) -> bool {
        self.components() >= 3
    }
}

impl fmt::Display for CharTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.chi1, self.chi2, self.chi3)
    }
}

/// One intersection point of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointRecord {
    pub lines: Vec<LineId>,
    pub on_conic: bool,
    pub tangent_line: Option<LineId>,
}

impl PointRecord {
    pub fn new(lines: impl IntoIterator<Item = u32>, on_conic: bool, tangent_line: Option<u32>) -> Self {
        let mut lines: Vec<LineId> = lines.into_iter().map(LineId).collect();
        lines.sort_unstable();
        PointRecord {
            lines,
            on_conic,
            tangent_line: tangent_line.map(LineId),
        }
    }

    pub fn contains(&self, line: LineId) -> bool {
        self.lines.binary_search(&line).is_ok()
    }

    pub fn characteristic(&self) -> CharTriple {
        let chi1 = u8::from(self.tangent_line.is_some());
        CharTriple {
            chi1,
            chi2: u8::from(self.on_conic),
            chi3: self.lines.len() as u32 - chi1 as u32,
        }
    }

    /// Display label in the `P(1,2)` style.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.lines.iter().map(|l| l.0.to_string()).collect();
        format!("P({})", inner.join(","))
    }

    fn order_key(&self) -> (&[LineId], bool, u32) {
        (&self.lines, self.on_conic, self.tangent_line.map_or(0, |l| l.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line index {line} out of range 1..={n}")]
    IndexOutOfRange { line: u32, n: usize },
    #[error("point {point} lists line {line} more than once")]
    RepeatedLine { point: usize, line: u32 },
    #[error("point {point} lies on fewer than two components")]
    TooFewComponents { point: usize },
    #[error("point {point} designates a tangent line but is not on the conic or does not contain it")]
    TangentNotOnConic { point: usize },
    #[error("line {line} is designated tangent at more than one point")]
    TangentCollision { line: u32 },
    #[error("lines {a} and {b} meet at more than one point")]
    PairDuplicated { a: u32, b: u32 },
    #[error("lines {a} and {b} never meet")]
    PairMissing { a: u32, b: u32 },
    #[error("line {line} has {found} conic points, expected {expected}")]
    TangentConicCount { line: u32, found: usize, expected: usize },
    #[error("no point with index {index}")]
    UnknownPoint { index: usize },
}

/// Unvalidated arrangement, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArrangement {
    pub n: usize,
    pub points: Vec<PointRecord>,
}

/// A validated (n,1)-arrangement with points in normalized order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawArrangement")]
pub struct Arrangement {
    n: usize,
    points: Vec<PointRecord>,
}

impl TryFrom<RawArrangement> for Arrangement {
    type Error = ModelError;

    fn try_from(raw: RawArrangement) -> Result<Self, Self::Error> {
        Arrangement::validate(raw.n, raw.points)
    }
}

/// Per-line summary used for pruning relabeling searches and by the lemma
/// filters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LineProfile {
    pub is_tangent: bool,
    /// Sorted characteristics of the points on the line.
    pub chars: Vec<CharTriple>,
    pub constraints: usize,
}

impl Arrangement {
    /// The unique arrangement with no lines.
    pub fn conic_only() -> Self {
        Arrangement { n: 0, points: Vec::new() }
    }

    pub fn validate(n: usize, mut points: Vec<PointRecord>) -> Result<Self, ModelError> {
        let mut tangent_at = vec![0usize; n];
        for (i, p) in points.iter_mut().enumerate() {
            for l in &p.lines {
                if l.0 == 0 || l.0 as usize > n {
                    return Err(ModelError::IndexOutOfRange { line: l.0, n });
                }
            }
            if let Some(t) = p.tangent_line {
                if t.0 == 0 || t.0 as usize > n {
                    return Err(ModelError::IndexOutOfRange { line: t.0, n });
                }
            }
            p.lines.sort_unstable();
            if let Some(w) = p.lines.windows(2).find(|w| w[0] == w[1]) {
                return Err(ModelError::RepeatedLine { point: i, line: w[0].0 });
            }
            if let Some(t) = p.tangent_line {
                if !p.on_conic || !p.contains(t) {
                    return Err(ModelError::TangentNotOnConic { point: i });
                }
                tangent_at[t.index()] += 1;
            }
            if p.lines.len() + usize::from(p.on_conic) < 2 {
                return Err(ModelError::TooFewComponents { point: i });
            }
        }
        if let Some(l) = tangent_at.iter().position(|&c| c > 1) {
            return Err(ModelError::TangentCollision { line: l as u32 + 1 });
        }

        let mut pair_seen = vec![false; n * n];
        for p in &points {
            for (k, a) in p.lines.iter().enumerate() {
                for b in &p.lines[k + 1..] {
                    let slot = &mut pair_seen[a.index() * n + b.index()];
                    if *slot {
                        return Err(ModelError::PairDuplicated { a: a.0, b: b.0 });
                    }
                    *slot = true;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !pair_seen[a * n + b] {
                    return Err(ModelError::PairMissing { a: a as u32 + 1, b: b as u32 + 1 });
                }
            }
        }

        let mut conic_points = vec![0usize; n];
        for p in points.iter().filter(|p| p.on_conic) {
            for l in &p.lines {
                conic_points[l.index()] += 1;
            }
        }
        for (i, &found) in conic_points.iter().enumerate() {
            let expected = if tangent_at[i] == 1 { 1 } else { 2 };
            if found != expected {
                return Err(ModelError::TangentConicCount { line: i as u32 + 1, found, expected });
            }
        }

        points.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        Ok(Arrangement { n, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[PointRecord] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Result<&PointRecord, ModelError> {
        self.points.get(index).ok_or(ModelError::UnknownPoint { index })
    }

    pub fn lines(&self) -> impl Iterator<Item = LineId> {
        (1..=self.n as u32).map(LineId)
    }

    pub fn check_line(&self, line: LineId) -> Result<(), ModelError> {
        if line.0 == 0 || line.0 as usize > self.n {
            Err(ModelError::IndexOutOfRange { line: line.0, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn char_of_point(&self, index: usize) -> Result<CharTriple, ModelError> {
        self.point(index).map(PointRecord::characteristic)
    }

    /// Indices of points lying on at least three components.
    pub fn constraints(&self) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.characteristic().is_constraint())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_tangent(&self, line: LineId) -> bool {
        self.points.iter().any(|p| p.tangent_line == Some(line))
    }

    pub fn tangent_count(&self) -> usize {
        self.points.iter().filter(|p| p.tangent_line.is_some()).count()
    }

    /// Indices of the points through `line`.
    pub fn points_on(&self, line: LineId) -> impl Iterator<Item = usize> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.contains(line))
            .map(|(i, _)| i)
    }

    pub fn line_profile(&self, line: LineId) -> Result<LineProfile, ModelError> {
        self.check_line(line)?;
        let mut chars: Vec<CharTriple> = self
            .points_on(line)
            .map(|i| self.points[i].characteristic())
            .collect();
        chars.sort_unstable();
        let constraints = chars.iter().filter(|c| c.is_constraint()).count();
        Ok(LineProfile {
            is_tangent: self.is_tangent(line),
            chars,
            constraints,
        })
    }

    pub fn to_raw(&self) -> RawArrangement {
        RawArrangement {
            n: self.n,
            points: self.points.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serializes")
    }
}

/// Multiset of characteristics, as counts.
pub fn char_counts<'a>(chars: impl IntoIterator<Item = &'a CharTriple>) -> BTreeMap<CharTriple, usize> {
    let mut out = BTreeMap::new();
    for c in chars {
        *out.entry(*c).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pt(lines: &[u32], on_conic: bool, tangent: Option<u32>) -> PointRecord {
        PointRecord::new(lines.iter().copied(), on_conic, tangent)
    }

    #[test]
    fn fig1_validates() {
        let a = fixtures::fig1();
        assert_eq!(a.n(), 4);
        assert_eq!(a.points().len(), 7);
    }

    #[test]
    fn duplicated_pair_rejected() {
        let points = vec![
            pt(&[1, 2], false, None),
            pt(&[1, 2], false, None),
            pt(&[1], true, None),
            pt(&[1], true, None),
            pt(&[2], true, None),
            pt(&[2], true, None),
        ];
        assert_eq!(
            Arrangement::validate(2, points),
            Err(ModelError::PairDuplicated { a: 1, b: 2 })
        );
    }

    #[test]
    fn tangent_with_two_conic_points_rejected() {
        let points = vec![pt(&[1], true, Some(1)), pt(&[1], true, None)];
        assert_eq!(
            Arrangement::validate(1, points),
            Err(ModelError::TangentConicCount { line: 1, found: 2, expected: 1 })
        );
    }

    #[test]
    fn other_errors() {
        assert_eq!(
            Arrangement::validate(1, vec![pt(&[2], true, None), pt(&[1], true, None)]),
            Err(ModelError::IndexOutOfRange { line: 2, n: 1 })
        );
        assert_eq!(
            Arrangement::validate(2, vec![pt(&[1], true, None), pt(&[1], true, None), pt(&[2], true, None), pt(&[2], true, None)]),
            Err(ModelError::PairMissing { a: 1, b: 2 })
        );
        assert_eq!(
            Arrangement::validate(1, vec![pt(&[1], false, Some(1))]),
            Err(ModelError::TangentNotOnConic { point: 0 })
        );
        assert_eq!(
            Arrangement::validate(2, vec![pt(&[1], true, Some(2)), pt(&[2], true, None)]),
            Err(ModelError::TangentNotOnConic { point: 0 })
        );
        assert_eq!(
            Arrangement::validate(1, vec![pt(&[1], false, None)]),
            Err(ModelError::TooFewComponents { point: 0 })
        );
        assert_eq!(
            Arrangement::validate(2, vec![pt(&[1, 1], true, None)]),
            Err(ModelError::RepeatedLine { point: 0, line: 1 })
        );
    }

    #[test]
    fn tangent_collision_rejected() {
        let points = vec![
            pt(&[1, 2], true, Some(1)),
            pt(&[1], true, Some(1)),
            pt(&[2], true, None),
        ];
        assert_eq!(
            Arrangement::validate(2, points),
            Err(ModelError::TangentCollision { line: 1 })
        );
    }

    #[test]
    fn characteristics_match_table() {
        let a = fixtures::fig1();
        let find = |lines: &[u32], on_conic: bool| {
            a.points()
                .iter()
                .position(|p| p.lines.iter().map(|l| l.0).eq(lines.iter().copied()) && p.on_conic == on_conic)
                .unwrap()
        };
        assert_eq!(a.char_of_point(find(&[1, 2], true)).unwrap(), CharTriple::new(1, 1, 1));
        assert_eq!(a.char_of_point(find(&[4], true)).unwrap(), CharTriple::new(0, 1, 1));
        assert_eq!(a.char_of_point(find(&[2, 4], false)).unwrap(), CharTriple::new(0, 0, 2));
        assert_eq!(a.char_of_point(99), Err(ModelError::UnknownPoint { index: 99 }));
    }

    #[test]
    fn constraint_sets() {
        let a = fixtures::fig1();
        let labels: Vec<String> = a.constraints().iter().map(|&i| a.points()[i].label()).collect();
        assert_eq!(labels, ["P(1,2)", "P(2,3)", "P(3,4)"]);
        assert!(Arrangement::conic_only().constraints().is_empty());
        assert!(fixtures::tangent_triangle().constraints().is_empty());
    }

    #[test]
    fn line_profiles() {
        let a = fixtures::fig1();
        let l4 = a.line_profile(LineId(4)).unwrap();
        assert!(!l4.is_tangent);
        assert_eq!(
            l4.chars,
            vec![CharTriple::new(0, 0, 2), CharTriple::new(0, 0, 2), CharTriple::new(0, 1, 1), CharTriple::new(0, 1, 2)]
        );
        assert_eq!(l4.constraints, 1);

        let l1 = a.line_profile(LineId(1)).unwrap();
        assert!(l1.is_tangent);
        assert_eq!(
            l1.chars,
            vec![CharTriple::new(0, 0, 2), CharTriple::new(0, 0, 2), CharTriple::new(1, 1, 1)]
        );
        assert_eq!(l1.constraints, 1);

        let single = fixtures::single_tangent();
        let p = single.line_profile(LineId(1)).unwrap();
        assert_eq!((p.is_tangent, p.chars.as_slice(), p.constraints), (true, &[CharTriple::new(1, 1, 0)][..], 0));
        assert_eq!(
            single.line_profile(LineId(2)),
            Err(ModelError::IndexOutOfRange { line: 2, n: 1 })
        );
    }

    #[test]
    fn json_roundtrip_is_idempotent() {
        let a = fixtures::fig1();
        let text = a.to_json();
        let b = Arrangement::from_json(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(text, b.to_json());
        assert!(text.contains("\"tangent_line\":null"));
    }

    #[test]
    fn unsorted_input_is_normalized() {
        let points = vec![
            pt(&[2], true, None),
            pt(&[2, 1], true, Some(1)),
        ];
        let a = Arrangement::validate(2, points).unwrap();
        assert_eq!(a.points()[0].lines, vec![LineId(1), LineId(2)]);
        assert_eq!(a.points()[1].lines, vec![LineId(2)]);
    }
}
