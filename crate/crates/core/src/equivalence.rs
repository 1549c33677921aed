//! Combinatorial equivalence: line relabelings, the weak numerical type, and
//! canonical keys.
//!
//! Two arrangements are equivalent when some relabeling of the lines makes
//! their normalized point lists identical. That preserves, point by point,
//! the characteristic triple, the set of line indices and the tangency
//! designation. [`canonical_key`] decides this by minimizing a serialization
//! over all relabelings; [`are_equivalent`] searches for a witness directly.
//! The two routes are independent and are tested against each other.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{char_counts, Arrangement, CharTriple, LineId, LineProfile, PointRecord};

/// Version tag of the canonical key string format.
pub const KEY_FORMAT: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("relabeling is not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
}

/// Applies `sigma`, where `sigma[i]` is the new label of line `i + 1`.
pub fn relabel(a: &Arrangement, sigma: &[u32]) -> Result<Arrangement, EquivalenceError> {
    let n = a.n();
    let not_perm = EquivalenceError::NotAPermutation { n };
    if sigma.len() != n {
        return Err(not_perm);
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s == 0 || s as usize > n || seen[s as usize - 1] {
            return Err(not_perm);
        }
        seen[s as usize - 1] = true;
    }
    Ok(relabel_unchecked(a, sigma))
}

fn map_record(p: &PointRecord, sigma: &[u32]) -> PointRecord {
    let mut lines: Vec<LineId> = p.lines.iter().map(|l| LineId(sigma[l.index()])).collect();
    lines.sort_unstable();
    PointRecord {
        lines,
        on_conic: p.on_conic,
        tangent_line: p.tangent_line.map(|l| LineId(sigma[l.index()])),
    }
}

fn relabel_unchecked(a: &Arrangement, sigma: &[u32]) -> Arrangement {
    let points = a.points().iter().map(|p| map_record(p, sigma)).collect();
    Arrangement::validate(a.n(), points).expect("relabeling preserves validity")
}

/// Multiset of characteristic triples, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeakNumericalType(Vec<CharTriple>);

impl WeakNumericalType {
    pub fn triples(&self) -> &[CharTriple] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, c: CharTriple) -> usize {
        self.0.iter().filter(|&&x| x == c).count()
    }
}

impl fmt::Display for WeakNumericalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = char_counts(&self.0)
            .into_iter()
            .map(|(c, k)| if k == 1 { c.to_string() } else { format!("{c}x{k}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn weak_numerical_type(a: &Arrangement) -> WeakNumericalType {
    let mut chars: Vec<CharTriple> = a.points().iter().map(PointRecord::characteristic).collect();
    chars.sort_unstable();
    WeakNumericalType(chars)
}

/// Canonical identity of an equivalence class.
///
/// Format: `n=<n>:` followed by the sorted point records
/// `(<on_conic>,<tangent label or 0>,[<labels>])`, choosing the relabeling
/// whose concatenation is lexicographically smallest.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of lines encoded in the key prefix.
    pub fn n(&self) -> Option<usize> {
        self.0.strip_prefix("n=")?.split(':').next()?.parse().ok()
    }

    pub fn parse(text: &str) -> Option<Self> {
        let key = CanonicalKey(text.to_string());
        key.n().map(|_| key)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn push_number(buf: &mut Vec<u8>, v: u32) {
    let mut digits = [0u8; 10];
    let mut k = 0;
    let mut v = v;
    loop {
        digits[k] = b'0' + (v % 10) as u8;
        k += 1;
        v /= 10;
        if v == 0 {
            break;
        }
    }
    buf.extend(digits[..k].iter().rev());
}

fn encode_record(buf: &mut Vec<u8>, p: &PointRecord, sigma: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    scratch.extend(p.lines.iter().map(|l| sigma[l.index()]));
    scratch.sort_unstable();
    buf.push(b'(');
    buf.push(if p.on_conic { b'1' } else { b'0' });
    buf.push(b',');
    push_number(buf, p.tangent_line.map_or(0, |l| sigma[l.index()]));
    buf.extend_from_slice(b",[");
    for (k, &l) in scratch.iter().enumerate() {
        if k > 0 {
            buf.push(b',');
        }
        push_number(buf, l);
    }
    buf.extend_from_slice(b"])");
}

/// Serialization of `a` under a fixed relabeling.
pub fn serialize_under(a: &Arrangement, sigma: &[u32]) -> String {
    let mut records = vec![Vec::new(); a.points().len()];
    let mut scratch = Vec::new();
    for (buf, p) in records.iter_mut().zip(a.points()) {
        encode_record(buf, p, sigma, &mut scratch);
    }
    records.sort_unstable();
    String::from_utf8(records.concat()).expect("ascii")
}

pub fn canonical_key(a: &Arrangement) -> CanonicalKey {
    let n = a.n();
    let count = a.points().len();
    let mut records: Vec<Vec<u8>> = vec![Vec::new(); count];
    let mut order: Vec<usize> = (0..count).collect();
    let mut scratch = Vec::new();
    let mut candidate: Vec<u8> = Vec::new();
    let mut best: Option<Vec<u8>> = None;

    for sigma in (1..=n as u32).permutations(n) {
        for (buf, p) in records.iter_mut().zip(a.points()) {
            buf.clear();
            encode_record(buf, p, &sigma, &mut scratch);
        }
        order.sort_unstable_by(|&x, &y| records[x].cmp(&records[y]));
        candidate.clear();
        for &i in &order {
            candidate.extend_from_slice(&records[i]);
        }
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate.clone());
        }
    }

    let body = String::from_utf8(best.unwrap_or_default()).expect("ascii");
    CanonicalKey(format!("n={n}:{body}"))
}

/// Evidence that two arrangements are equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// `sigma[i]` is the label in the second arrangement of line `i + 1`.
    pub sigma: Vec<u32>,
    /// `point_map[i]` is the index in the second arrangement of point `i`.
    pub point_map: Vec<usize>,
}

fn profiles(a: &Arrangement) -> Vec<LineProfile> {
    a.lines().map(|l| a.line_profile(l).expect("line in range")).collect()
}

/// Characteristic and tangency role of the point where lines `i` and `j` meet.
fn pair_table(a: &Arrangement) -> Vec<(CharTriple, u8)> {
    let n = a.n();
    let mut table = vec![(CharTriple::new(0, 0, 0), 0u8); n * n];
    for p in a.points() {
        let c = p.characteristic();
        for &x in &p.lines {
            for &y in &p.lines {
                if x != y {
                    let role = u8::from(p.tangent_line == Some(x));
                    table[x.index() * n + y.index()] = (c, role);
                }
            }
        }
    }
    table
}

/// Visits every relabeling `sigma` with `relabel(a, sigma) == b`. Lines are
/// only mapped between equal profiles, and partial assignments must preserve
/// the characteristic of every pairwise meeting point. The visitor returns
/// `true` to stop.
pub fn visit_isomorphisms(a: &Arrangement, b: &Arrangement, visit: &mut dyn FnMut(&[u32]) -> bool) {
    if a.n() != b.n() || a.points().len() != b.points().len() {
        return;
    }
    if weak_numerical_type(a) != weak_numerical_type(b) {
        return;
    }
    let n = a.n();
    let pa = profiles(a);
    let pb = profiles(b);
    let ta = pair_table(a);
    let tb = pair_table(b);
    let mut sigma = vec![0u32; n];
    let mut used = vec![false; n];

    struct Ctx<'a> {
        n: usize,
        a: &'a Arrangement,
        b: &'a Arrangement,
        pa: &'a [LineProfile],
        pb: &'a [LineProfile],
        ta: &'a [(CharTriple, u8)],
        tb: &'a [(CharTriple, u8)],
    }

    fn go(ctx: &Ctx, i: usize, sigma: &mut [u32], used: &mut [bool], visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if i == ctx.n {
            return relabel_unchecked(ctx.a, sigma).points() == ctx.b.points() && visit(sigma);
        }
        for j in 0..ctx.n {
            if used[j] || ctx.pa[i] != ctx.pb[j] {
                continue;
            }
            let compatible = (0..i).all(|k| {
                let jk = sigma[k] as usize - 1;
                ctx.ta[i * ctx.n + k] == ctx.tb[j * ctx.n + jk] && ctx.ta[k * ctx.n + i] == ctx.tb[jk * ctx.n + j]
            });
            if !compatible {
                continue;
            }
            used[j] = true;
            sigma[i] = j as u32 + 1;
            if go(ctx, i + 1, sigma, used, visit) {
                return true;
            }
            used[j] = false;
        }
        false
    }

    let ctx = Ctx { n, a, b, pa: &pa, pb: &pb, ta: &ta, tb: &tb };
    go(&ctx, 0, &mut sigma, &mut used, visit);
}

/// All relabelings carrying `a` onto `b`.
pub fn isomorphisms(a: &Arrangement, b: &Arrangement) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    visit_isomorphisms(a, b, &mut |s| {
        out.push(s.to_vec());
        false
    });
    out
}

/// Point correspondence induced by a relabeling known to carry `a` onto `b`.
/// Content-identical records are paired in index order.
pub fn point_map(a: &Arrangement, b: &Arrangement, sigma: &[u32]) -> Vec<usize> {
    let mut taken = vec![false; b.points().len()];
    a.points()
        .iter()
        .map(|p| {
            let image = map_record(p, sigma);
            let j = b
                .points()
                .iter()
                .enumerate()
                .position(|(j, q)| !taken[j] && *q == image)
                .expect("sigma is an isomorphism");
            taken[j] = true;
            j
        })
        .collect()
}

pub fn are_equivalent(a: &Arrangement, b: &Arrangement) -> Option<Witness> {
    let mut found = None;
    visit_isomorphisms(a, b, &mut |s| {
        found = Some(s.to_vec());
        true
    });
    found.map(|sigma| Witness {
        point_map: point_map(a, b, &sigma),
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_relabel_is_noop() {
        let a = fixtures::fig1();
        assert_eq!(relabel(&a, &[1, 2, 3, 4]).unwrap(), a);
        let c = fixtures::conic_only();
        assert_eq!(relabel(&c, &[]).unwrap(), c);
    }

    #[test]
    fn transposition_moves_tangency() {
        let a = fixtures::fig1();
        let b = relabel(&a, &[2, 1, 3, 4]).unwrap();
        let p = b.points().iter().find(|p| p.lines == [LineId(1), LineId(2)]).unwrap();
        assert_eq!(p.tangent_line, Some(LineId(2)));
        assert!(p.on_conic);
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        let a = fixtures::fig1();
        assert!(relabel(&a, &[1, 1, 2, 3]).is_err());
        assert!(relabel(&a, &[1, 2, 3]).is_err());
        assert!(relabel(&a, &[1, 2, 3, 5]).is_err());
    }

    #[test]
    fn weak_types() {
        let w = weak_numerical_type(&fixtures::fig1());
        assert_eq!(w.len(), 7);
        assert_eq!(w.count(CharTriple::new(1, 1, 1)), 1);
        assert_eq!(w.count(CharTriple::new(0, 1, 1)), 1);
        assert_eq!(w.count(CharTriple::new(0, 0, 2)), 3);
        assert_eq!(w.count(CharTriple::new(0, 1, 2)), 2);

        let t = weak_numerical_type(&fixtures::tangent_triangle());
        assert_eq!(t.count(CharTriple::new(1, 1, 0)), 3);
        assert_eq!(t.count(CharTriple::new(0, 0, 2)), 3);
        assert_eq!(t.len(), 6);

        assert!(weak_numerical_type(&fixtures::conic_only()).is_empty());
    }

    #[test]
    fn small_keys() {
        assert_eq!(canonical_key(&fixtures::conic_only()).as_str(), "n=0:");
        assert_eq!(canonical_key(&fixtures::single_tangent()).as_str(), "n=1:(1,1,[1])");
        assert_eq!(canonical_key(&fixtures::single_transverse()).as_str(), "n=1:(1,0,[1])(1,0,[1])");
        assert_eq!(canonical_key(&fixtures::fig1()).n(), Some(4));
    }

    #[test]
    fn key_invariant_under_four_cycle() {
        let a = fixtures::fig1();
        // (1 3 2 4): 1->3, 3->2, 2->4, 4->1
        let b = relabel(&a, &[3, 4, 2, 1]).unwrap();
        assert_ne!(a, b);
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn equivalence_with_witness() {
        let a = fixtures::fig1();
        let b = relabel(&a, &[3, 4, 2, 1]).unwrap();
        let w = are_equivalent(&a, &b).expect("equivalent");
        for (i, p) in a.points().iter().enumerate() {
            let q = &b.points()[w.point_map[i]];
            assert_eq!(p.characteristic(), q.characteristic());
            let mapped: Vec<u32> = p.lines.iter().map(|l| w.sigma[l.index()]).sorted().collect();
            assert_eq!(mapped, q.lines.iter().map(|l| l.0).collect::<Vec<_>>());
            assert_eq!(p.tangent_line.map(|l| w.sigma[l.index()]), q.tangent_line.map(|l| l.0));
        }
    }

    #[test]
    fn inequivalent_pairs() {
        assert!(are_equivalent(&fixtures::single_tangent(), &fixtures::single_transverse()).is_none());
        let n2 = fixtures::n2_classes();
        let shared = &n2[3];
        let disjoint = &n2[4];
        assert!(are_equivalent(shared, disjoint).is_none());
        assert_ne!(weak_numerical_type(shared), weak_numerical_type(disjoint));
        assert_eq!(weak_numerical_type(shared).count(CharTriple::new(0, 1, 2)), 1);
        assert_eq!(weak_numerical_type(disjoint).count(CharTriple::new(0, 1, 1)), 4);
    }

    #[test]
    fn fig1_has_trivial_automorphism_group() {
        let a = fixtures::fig1();
        assert_eq!(isomorphisms(&a, &a), vec![vec![1, 2, 3, 4]]);
        let t = fixtures::tangent_triangle();
        assert_eq!(isomorphisms(&t, &t).len(), 6);
    }
}
