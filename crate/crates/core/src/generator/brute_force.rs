//! Direct enumeration of all arrangements with a given number of lines,
//! independent of the inductive path. Used as an oracle for small `n`.
//!
//! An arrangement is assembled from three choices:
//! 1. a partition of the line pairs into blocks, each block being the set of
//!    lines through one multiple point (a linear space on the lines);
//! 2. which blocks lie on the conic;
//! 3. which lines are tangent.
//!
//! The remaining conic points of each line are single-line records.

use std::collections::BTreeMap;

use super::{ClassCatalog, ClassEntry, GeneratorError};
use crate::equivalence::canonical_key;
use crate::model::{Arrangement, PointRecord};

pub const DEFAULT_BRUTE_FORCE_MAX_N: usize = 4;

pub fn brute_force_enumerate(n: usize) -> Result<ClassCatalog, GeneratorError> {
    brute_force_enumerate_with(n, DEFAULT_BRUTE_FORCE_MAX_N)
}

pub fn brute_force_enumerate_with(n: usize, max_n: usize) -> Result<ClassCatalog, GeneratorError> {
    if n > max_n {
        return Err(GeneratorError::BudgetExceeded { n, max: max_n });
    }
    let mut classes = BTreeMap::new();
    for blocks in linear_spaces(n) {
        for on_conic in 0u32..(1 << blocks.len()) {
            for tangent in 0u32..(1 << n) {
                if let Some(a) = assemble(n, &blocks, on_conic, tangent) {
                    let key = canonical_key(&a);
                    classes.entry(key.clone()).or_insert(ClassEntry {
                        key,
                        representative: a,
                        parent: None,
                        choice: None,
                    });
                }
            }
        }
    }
    Ok(ClassCatalog {
        n,
        classes: classes.into_values().collect(),
    })
}

/// All partitions of the pairs of `0..n` into blocks of size at least two,
/// each block a bitmask of lines.
fn linear_spaces(n: usize) -> Vec<Vec<u32>> {
    fn go(n: usize, covered: &mut Vec<bool>, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let first = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !covered[i * n + j]);
        let Some((i, j)) = first else {
            out.push(blocks.clone());
            return;
        };
        let free = |x: usize, y: usize, covered: &Vec<bool>| !covered[x.min(y) * n + x.max(y)];
        let extra: Vec<usize> = (0..n)
            .filter(|&k| k != i && k != j && free(i, k, covered) && free(j, k, covered))
            .collect();
        for subset in 0u32..(1 << extra.len()) {
            let mut members = vec![i, j];
            members.extend(extra.iter().enumerate().filter(|(b, _)| subset >> b & 1 == 1).map(|(_, &k)| k));
            let pairwise_free = members
                .iter()
                .enumerate()
                .all(|(x, &u)| members[x + 1..].iter().all(|&v| free(u, v, covered)));
            if !pairwise_free {
                continue;
            }
            for (x, &u) in members.iter().enumerate() {
                for &v in &members[x + 1..] {
                    covered[u.min(v) * n + u.max(v)] = true;
                }
            }
            blocks.push(members.iter().fold(0, |m, &k| m | 1 << k));
            go(n, covered, blocks, out);
            blocks.pop();
            for (x, &u) in members.iter().enumerate() {
                for &v in &members[x + 1..] {
                    covered[u.min(v) * n + u.max(v)] = false;
                }
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut vec![false; n * n], &mut Vec::new(), &mut out);
    out
}

fn assemble(n: usize, blocks: &[u32], on_conic: u32, tangent: u32) -> Option<Arrangement> {
    let mut points = Vec::new();
    let mut conic_count = vec![0usize; n];
    for (b, &mask) in blocks.iter().enumerate() {
        let lines: Vec<u32> = (0..n as u32).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
        let on = on_conic >> b & 1 == 1;
        let mut tangent_line = None;
        if on {
            for &l in &lines {
                conic_count[l as usize - 1] += 1;
                if tangent >> (l - 1) & 1 == 1 {
                    if tangent_line.is_some() {
                        return None;
                    }
                    tangent_line = Some(l);
                }
            }
        }
        points.push(PointRecord::new(lines, on, tangent_line));
    }
    for l in 0..n {
        let is_tangent = tangent >> l & 1 == 1;
        let needed = if is_tangent { 1 } else { 2 };
        if conic_count[l] > needed {
            return None;
        }
        for _ in conic_count[l]..needed {
            let label = l as u32 + 1;
            points.push(PointRecord::new([label], true, is_tangent.then_some(label)));
        }
    }
    Some(Arrangement::validate(n, points).expect("assembled structure satisfies the model invariants"))
}
