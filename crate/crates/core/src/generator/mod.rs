//! Inductive generation of all (n,1)-arrangements up to equivalence.
//!
//! Level `j` is produced from the representatives of level `j - 1` by adding
//! a line in every combinatorially possible way and keeping one
//! representative per canonical key.

mod brute_force;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivalence::{canonical_key, CanonicalKey};
use crate::model::{Arrangement, LineId, PointRecord};

pub use brute_force::{brute_force_enumerate, brute_force_enumerate_with, DEFAULT_BRUTE_FORCE_MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("brute-force enumeration of {n} lines exceeds the limit of {max}")]
    BudgetExceeded { n: usize, max: usize },
}

/// How a new line is added: whether it is tangent to the conic, and which
/// existing points (by index in the parent) it passes through.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtensionChoice {
    pub tangent: bool,
    pub through: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub choice: ExtensionChoice,
    pub arrangement: Arrangement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub key: CanonicalKey,
    pub representative: Arrangement,
    pub parent: Option<CanonicalKey>,
    pub choice: Option<ExtensionChoice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCatalog {
    pub n: usize,
    pub classes: Vec<ClassEntry>,
}

impl ClassCatalog {
    pub fn level_zero() -> Self {
        let conic = Arrangement::conic_only();
        ClassCatalog {
            n: 0,
            classes: vec![ClassEntry {
                key: canonical_key(&conic),
                representative: conic,
                parent: None,
                choice: None,
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&ClassEntry> {
        self.classes
            .binary_search_by(|c| c.key.cmp(key))
            .ok()
            .map(|i| &self.classes[i])
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.classes.iter().map(|c| &c.key)
    }
}

/// Every legal way of adding a line to `a`, in a fixed order: transverse
/// choices first, then tangent ones, each in lexicographic order of `through`.
/// Content-identical points (the two free conic crossings of one line) are
/// interchangeable, so only the first of them is offered.
pub fn extension_choices(a: &Arrangement) -> Vec<ExtensionChoice> {
    let masks: Vec<u64> = a
        .points()
        .iter()
        .map(|p| p.lines.iter().fold(0u64, |m, l| m | 1 << l.index()))
        .collect();

    fn go(
        a: &Arrangement,
        masks: &[u64],
        tangent: bool,
        start: usize,
        used: u64,
        conic: usize,
        through: &mut Vec<usize>,
        out: &mut Vec<ExtensionChoice>,
    ) {
        out.push(ExtensionChoice { tangent, through: through.clone() });
        for i in start..masks.len() {
            if masks[i] & used != 0 || (i > 0 && a.points()[i] == a.points()[i - 1]) {
                continue;
            }
            let p = &a.points()[i];
            let mut conic_next = conic;
            if p.on_conic {
                conic_next += 1;
                let allowed = if tangent { p.tangent_line.is_none() && conic_next <= 1 } else { conic_next <= 2 };
                if !allowed {
                    continue;
                }
            }
            through.push(i);
            go(a, masks, tangent, i + 1, used | masks[i], conic_next, through, out);
            through.pop();
        }
    }

    let mut out = Vec::new();
    for tangent in [false, true] {
        go(a, &masks, tangent, 0, 0, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Builds the arrangement obtained from `a` by the given choice. The new line
/// gets label `n + 1`.
pub fn apply_extension(a: &Arrangement, choice: &ExtensionChoice) -> Arrangement {
    let new = LineId::from_index(a.n());
    let mut points: Vec<PointRecord> = a.points().to_vec();
    let mut covered = vec![false; a.n()];
    let mut conic_hits = 0;
    for &i in &choice.through {
        let p = &mut points[i];
        for l in &p.lines {
            covered[l.index()] = true;
        }
        p.lines.push(new);
        if p.on_conic {
            conic_hits += 1;
            if choice.tangent {
                p.tangent_line = Some(new);
            }
        }
    }
    for (i, _) in covered.iter().enumerate().filter(|(_, c)| !**c) {
        points.push(PointRecord {
            lines: vec![LineId::from_index(i), new],
            on_conic: false,
            tangent_line: None,
        });
    }
    let fresh_conic = if choice.tangent { 1 - conic_hits } else { 2 - conic_hits };
    for _ in 0..fresh_conic {
        points.push(PointRecord {
            lines: vec![new],
            on_conic: true,
            tangent_line: choice.tangent.then_some(new),
        });
    }
    Arrangement::validate(a.n() + 1, points).expect("legal extension yields a valid arrangement")
}

pub fn extensions(a: &Arrangement) -> Vec<Extension> {
    extension_choices(a)
        .into_iter()
        .map(|choice| Extension {
            arrangement: apply_extension(a, &choice),
            choice,
        })
        .collect()
}

/// Extends every class of `prev` and deduplicates by canonical key. The first
/// occurrence in (parent key, choice) order is kept as representative, so the
/// result does not depend on scheduling.
pub fn next_level(prev: &ClassCatalog) -> ClassCatalog {
    let produced: Vec<Vec<(CanonicalKey, Extension)>> = prev
        .classes
        .par_iter()
        .map(|entry| {
            extensions(&entry.representative)
                .into_par_iter()
                .map(|e| (canonical_key(&e.arrangement), e))
                .collect()
        })
        .collect();

    let mut merged: BTreeMap<CanonicalKey, ClassEntry> = BTreeMap::new();
    for (entry, children) in prev.classes.iter().zip(produced) {
        for (key, ext) in children {
            merged.entry(key.clone()).or_insert_with(|| ClassEntry {
                key,
                representative: ext.arrangement,
                parent: Some(entry.key.clone()),
                choice: Some(ext.choice),
            });
        }
    }
    ClassCatalog {
        n: prev.n + 1,
        classes: merged.into_values().collect(),
    }
}

/// Catalogs for every level `0..=n_max`.
pub fn enumerate_classes(n_max: usize) -> Vec<ClassCatalog> {
    let mut levels = vec![ClassCatalog::level_zero()];
    while levels.len() <= n_max {
        let next = next_level(levels.last().expect("nonempty"));
        levels.push(next);
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::weak_numerical_type;
    use crate::fixtures;
    use crate::minimality::remove_line;
    use crate::model::CharTriple;

    #[test]
    fn conic_only_has_two_extensions() {
        let ext = extensions(&fixtures::conic_only());
        assert_eq!(ext.len(), 2);
        let types: Vec<Vec<CharTriple>> =
            ext.iter().map(|e| weak_numerical_type(&e.arrangement).triples().to_vec()).collect();
        assert!(types.contains(&vec![CharTriple::new(1, 1, 0)]));
        assert!(types.contains(&vec![CharTriple::new(0, 1, 1); 2]));
    }

    #[test]
    fn extension_counts_of_single_line() {
        let tangent = extensions(&fixtures::single_tangent());
        assert_eq!(tangent.len(), 3);
        // tangent at the existing tangency point is illegal
        assert!(!tangent.iter().any(|e| e.choice.tangent && !e.choice.through.is_empty()));

        let transverse = extensions(&fixtures::single_transverse());
        assert_eq!(transverse.len(), 4);
        assert!(!transverse.iter().any(|e| e.choice.through.len() == 2));
    }

    #[test]
    fn small_level_counts() {
        let levels = enumerate_classes(2);
        let counts: Vec<usize> = levels.iter().map(ClassCatalog::len).collect();
        assert_eq!(counts, [1, 2, 5]);
        let mut fixture_keys: Vec<CanonicalKey> = fixtures::n2_classes().iter().map(canonical_key).collect();
        fixture_keys.sort();
        let keys: Vec<CanonicalKey> = levels[2].keys().cloned().collect();
        assert_eq!(keys, fixture_keys);
    }

    #[test]
    fn extensions_remove_back_to_parent() {
        for level in enumerate_classes(3) {
            for entry in &level.classes {
                let a = &entry.representative;
                for e in extensions(a) {
                    let back = remove_line(&e.arrangement, LineId::from_index(a.n())).unwrap();
                    assert_eq!(&back, a);
                }
            }
        }
    }

    #[test]
    fn catalogs_are_sorted_and_consistent() {
        for level in enumerate_classes(3) {
            assert!(level.classes.windows(2).all(|w| w[0].key < w[1].key));
            for c in &level.classes {
                assert_eq!(canonical_key(&c.representative), c.key);
                assert_eq!(c.representative.n(), level.n);
                assert!(level.get(&c.key).is_some());
            }
        }
    }

    #[test]
    fn provenance_reproduces_each_class() {
        let levels = enumerate_classes(3);
        for j in 1..levels.len() {
            for c in &levels[j].classes {
                let parent = levels[j - 1].get(c.parent.as_ref().unwrap()).unwrap();
                let child = apply_extension(&parent.representative, c.choice.as_ref().unwrap());
                assert_eq!(child, c.representative);
            }
        }
    }

    #[test]
    fn tangent_triangle_is_generated() {
        let levels = enumerate_classes(3);
        assert!(levels[3].get(&canonical_key(&fixtures::tangent_triangle())).is_some());
    }
}
