//! Reading the combinatorial class off a realization.

use super::linalg::{conic_frame, conic_point, line_conic_roots, normalize, projective_distance, reference_conic, M3, V3};
use super::{RealizationError, RealizedArrangement, Tolerances};
use crate::model::{Arrangement, LineId, PointRecord};

/// Result of extraction: the class, one coordinate vector per point (aligned
/// with the normalized point order), and the minimal distance between
/// distinct points.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub arrangement: Arrangement,
    pub coords: Vec<V3>,
    pub separation: f64,
    /// Carries the reference conic onto the conic of the geometry.
    pub frame: M3,
}

struct Candidate {
    coords: V3,
    lines: Vec<u32>,
    on_conic: bool,
    tangent: Option<u32>,
}

pub fn extract_combinatorics(g: &RealizedArrangement, tol: &Tolerances) -> Result<Arrangement, RealizationError> {
    extract_detailed(g, tol).map(|e| e.arrangement)
}

pub fn extract_detailed(g: &RealizedArrangement, tol: &Tolerances) -> Result<Extraction, RealizationError> {
    tol.validate()?;
    let conic = g.conic_matrix();
    let frame = conic_frame(&conic).ok_or_else(|| RealizationError::DegenerateInput("degenerate conic".into()))?;
    let lines = g.line_vectors();
    for (i, l) in lines.iter().enumerate() {
        if l.norm() == 0.0 || !l.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(RealizationError::DegenerateInput(format!("line {} has no valid coefficients", i + 1)));
        }
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if projective_distance(&lines[i], &lines[j]) < tol.cluster {
                return Err(RealizationError::DegenerateInput(format!("lines {} and {} coincide", i + 1, j + 1)));
            }
        }
    }

    let mut candidates = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            candidates.push(Candidate {
                coords: normalize(&lines[i].cross(&lines[j])),
                lines: vec![i as u32 + 1, j as u32 + 1],
                on_conic: false,
                tangent: None,
            });
        }
    }
    for (i, l) in lines.iter().enumerate() {
        // Work in the frame where the conic is the reference one.
        let local = frame.transpose() * l;
        let (disc, roots) = line_conic_roots(&local, tol.tan);
        let tangent = roots.len() == 1;
        if !tangent && disc.norm() < 10.0 * tol.tan {
            return Err(RealizationError::TangencyAmbiguity { line: i as u32 + 1, value: disc.norm() });
        }
        for (s, t) in roots {
            // The pole of a tangent line is its tangency point, and unlike the
            // double root it is well conditioned.
            let local_point = if tangent { reference_conic() * local } else { conic_point(s, t) };
            candidates.push(Candidate {
                coords: normalize(&(frame * local_point)),
                lines: vec![i as u32 + 1],
                on_conic: true,
                tangent: tangent.then_some(i as u32 + 1),
            });
        }
    }

    // Union-find over candidates closer than the cluster tolerance.
    let count = candidates.len();
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for x in 0..count {
        for y in x + 1..count {
            let d = projective_distance(&candidates[x].coords, &candidates[y].coords);
            if d < tol.cluster {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            } else if d < 10.0 * tol.cluster {
                return Err(RealizationError::ClusterAmbiguity { distance: d });
            }
        }
    }

    let mut clusters: Vec<(usize, Candidate)> = Vec::new();
    for x in 0..count {
        let root = find(&mut parent, x);
        let cand = &candidates[x];
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, merged)) => {
                merged.lines.extend(&cand.lines);
                merged.on_conic |= cand.on_conic;
                if let Some(t) = cand.tangent {
                    if merged.tangent.is_some_and(|u| u != t) {
                        return Err(RealizationError::DegenerateInput("two lines tangent at one point".into()));
                    }
                    merged.tangent = Some(t);
                }
            }
            None => clusters.push((
                root,
                Candidate {
                    coords: cand.coords,
                    lines: cand.lines.clone(),
                    on_conic: cand.on_conic,
                    tangent: cand.tangent,
                },
            )),
        }
    }

    let mut separation = std::f64::consts::SQRT_2;
    for x in 0..clusters.len() {
        for y in x + 1..clusters.len() {
            separation = separation.min(projective_distance(&clusters[x].1.coords, &clusters[y].1.coords));
        }
    }

    let mut records: Vec<(PointRecord, V3)> = clusters
        .into_iter()
        .map(|(_, mut cand)| {
            cand.lines.sort_unstable();
            cand.lines.dedup();
            (PointRecord::new(cand.lines, cand.on_conic, cand.tangent), cand.coords)
        })
        .collect();
    records.sort_by(|(x, _), (y, _)| {
        (&x.lines, x.on_conic, x.tangent_line.map_or(0, |l: LineId| l.0))
            .cmp(&(&y.lines, y.on_conic, y.tangent_line.map_or(0, |l| l.0)))
    });
    let coords = records.iter().map(|(_, v)| *v).collect();
    let arrangement = Arrangement::validate(lines.len(), records.into_iter().map(|(p, _)| p).collect())?;
    Ok(Extraction { arrangement, coords, separation, frame })
}
