//! Projective transformations of realizations and projective equivalence.
//!
//! A transformation `M` moves points by `P -> M P`, lines by the inverse
//! transpose, and the conic matrix by congruence with `M^-1`.
//!
//! Equivalence search: every combinatorial isomorphism between the two
//! extracted classes induces a correspondence of points. Four corresponding
//! points in general position determine `M` up to scale; it is accepted when
//! it carries the conic, every line and every point onto its partner. When
//! the configuration has fewer than three conic points its stabilizer is
//! transitive on the remaining conic points, so matching sample points on the
//! two conics completes the frame without loss of generality.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::extract::{extract_detailed, Extraction};
use super::linalg::{c, conic_point, det3, matrix_distance, normalize, normalize_matrix, projective_distance, C, M3, V3};
use super::{RealizationError, RealizedArrangement, Tolerances};
use crate::equivalence::{canonical_key, isomorphisms};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProjectiveVerdict {
    Equivalent {
        /// Carries points of the first geometry onto the second.
        matrix: [[Complex64; 3]; 3],
        /// Line correspondence: line `i + 1` maps to line `sigma[i]`.
        sigma: Vec<u32>,
        residual: f64,
    },
    NotFound {
        reason: String,
    },
}

impl ProjectiveVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, ProjectiveVerdict::Equivalent { .. })
    }

    pub fn matrix(&self) -> Option<M3> {
        match self {
            ProjectiveVerdict::Equivalent { matrix, .. } => Some(M3::from_fn(|i, j| matrix[i][j])),
            ProjectiveVerdict::NotFound { .. } => None,
        }
    }
}

fn checked_inverse(m: &M3) -> Result<M3, RealizationError> {
    let sv = m.singular_values();
    let (max, min) = (sv.max(), sv.min());
    if min.is_nan() || min <= 1e-12 * max {
        return Err(RealizationError::SingularMatrix);
    }
    m.try_inverse().ok_or(RealizationError::SingularMatrix)
}

pub fn projective_transfer(g: &RealizedArrangement, m: &M3) -> Result<RealizedArrangement, RealizationError> {
    let inv = checked_inverse(m)?;
    let conic = inv.transpose() * g.conic_matrix() * inv;
    let lines: Vec<V3> = g.line_vectors().iter().map(|l| inv.transpose() * l).collect();
    let mut out = RealizedArrangement::new(&conic, &lines);
    out.residual = g.residual;
    out.separation = extract_detailed(&out, &Tolerances::default()).map_or(0.0, |e| e.separation);
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Rank {
    Constraint,
    Tangency,
    Conic,
    Sample,
    Pole,
    Other,
}

struct Pair {
    rank: Rank,
    src: V3,
    dst: V3,
    on_conic: bool,
}

/// All bijections of points compatible with `sigma`. Only the two free conic
/// crossings of a line are interchangeable.
fn point_correspondences(e1: &Extraction, e2: &Extraction, sigma: &[u32], cap: usize) -> Vec<Vec<usize>> {
    let a = &e1.arrangement;
    let b = &e2.arrangement;
    let images: Vec<Vec<usize>> = a
        .points()
        .iter()
        .map(|p| {
            let mut lines: Vec<u32> = p.lines.iter().map(|l| sigma[l.index()]).collect();
            lines.sort_unstable();
            let tangent = p.tangent_line.map(|l| sigma[l.index()]);
            b.points()
                .iter()
                .enumerate()
                .filter(|(_, q)| {
                    q.on_conic == p.on_conic
                        && q.tangent_line.map(|l| l.0) == tangent
                        && q.lines.iter().map(|l| l.0).eq(lines.iter().copied())
                })
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    fn go(images: &[Vec<usize>], i: usize, used: &mut Vec<bool>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if i == images.len() {
            out.push(current.clone());
            return;
        }
        for &j in &images[i] {
            if !used[j] {
                used[j] = true;
                current.push(j);
                go(images, i + 1, used, current, out, cap);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&images, 0, &mut vec![false; b.points().len()], &mut Vec::new(), &mut out, cap);
    out
}

const SAMPLE_PARAMETERS: [(f64, f64); 6] = [(0.3, 0.2), (-0.6, 0.9), (1.7, -0.4), (-1.3, -1.1), (0.1, -2.2), (2.4, 1.3)];

fn build_pairs(
    e1: &Extraction,
    e2: &Extraction,
    corr: &[usize],
    conics: (&M3, &M3),
) -> Option<Vec<Pair>> {
    let a = &e1.arrangement;
    let mut pairs: Vec<Pair> = a
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ch = p.characteristic();
            let rank = if ch.is_constraint() {
                Rank::Constraint
            } else if p.tangent_line.is_some() {
                Rank::Tangency
            } else if p.on_conic {
                Rank::Conic
            } else {
                Rank::Other
            };
            Pair { rank, src: e1.coords[i], dst: e2.coords[corr[i]], on_conic: p.on_conic }
        })
        .collect();

    let mut conic_points: Vec<(V3, V3)> = pairs.iter().filter(|p| p.on_conic).map(|p| (p.src, p.dst)).collect();
    for (re, im) in SAMPLE_PARAMETERS {
        if conic_points.len() >= 3 {
            break;
        }
        let local = conic_point(c(1.0, 0.0), c(re, im));
        let (v, w) = (normalize(&(e1.frame * local)), normalize(&(e2.frame * local)));
        let far = conic_points
            .iter()
            .all(|(p, q)| projective_distance(p, &v) > 1e-3 && projective_distance(q, &w) > 1e-3);
        if far {
            conic_points.push((v, w));
            pairs.push(Pair { rank: Rank::Sample, src: v, dst: w, on_conic: true });
        }
    }

    let (inv1, inv2) = (conics.0.try_inverse()?, conics.1.try_inverse()?);
    let mut on_conic = pairs.iter().filter(|p| p.on_conic);
    if let (Some(p), Some(q)) = (on_conic.next(), on_conic.next()) {
        let pole = Pair {
            rank: Rank::Pole,
            src: normalize(&(inv1 * p.src.cross(&q.src))),
            dst: normalize(&(inv2 * p.dst.cross(&q.dst))),
            on_conic: false,
        };
        pairs.push(pole);
    }
    pairs.sort_by_key(|p| p.rank);
    Some(pairs)
}

fn unit(v: &V3) -> V3 {
    v / C::from(v.norm())
}

/// First four pairs, in rank order, with no three collinear on either side.
fn general_quad(pairs: &[Pair]) -> Option<[usize; 4]> {
    let mut chosen: Vec<usize> = Vec::with_capacity(4);
    for (k, p) in pairs.iter().enumerate() {
        let ok = chosen.iter().all(|&x| {
            projective_distance(&pairs[x].src, &p.src) > 1e-6 && projective_distance(&pairs[x].dst, &p.dst) > 1e-6
        }) && chosen.iter().enumerate().all(|(i, &x)| {
            chosen[i + 1..].iter().all(|&y| {
                det3(&unit(&pairs[x].src), &unit(&pairs[y].src), &unit(&p.src)).norm() > 1e-6
                    && det3(&unit(&pairs[x].dst), &unit(&pairs[y].dst), &unit(&p.dst)).norm() > 1e-6
            })
        });
        if ok {
            chosen.push(k);
            if chosen.len() == 4 {
                return Some([chosen[0], chosen[1], chosen[2], chosen[3]]);
            }
        }
    }
    None
}

/// Matrix sending the standard frame `e1, e2, e3, e1 + e2 + e3` onto the
/// four given points.
fn frame_matrix(p: [&V3; 4]) -> Option<M3> {
    let base = Matrix3::from_columns(&[*p[0], *p[1], *p[2]]);
    let scale = base.lu().solve(p[3])?;
    if scale.iter().any(|s| s.norm() < 1e-12) {
        return None;
    }
    Some(Matrix3::from_columns(&[p[0] * scale[0], p[1] * scale[1], p[2] * scale[2]]))
}

fn four_point(pairs: &[Pair], quad: [usize; 4]) -> Option<M3> {
    let src = frame_matrix(quad.map(|k| &pairs[k].src))?;
    let dst = frame_matrix(quad.map(|k| &pairs[k].dst))?;
    Some(dst * src.try_inverse()?)
}

/// Largest mismatch after applying `m` to `g1`: conic, lines under `sigma`,
/// and corresponding points.
fn transfer_residual(m: &M3, g1: &RealizedArrangement, g2: &RealizedArrangement, sigma: &[u32], pairs: &[Pair]) -> f64 {
    let Some(inv) = m.try_inverse() else {
        return f64::INFINITY;
    };
    let conic = inv.transpose() * g1.conic_matrix() * inv;
    let mut worst = matrix_distance(&conic, &g2.conic_matrix());
    let l2 = g2.line_vectors();
    for (i, l) in g1.line_vectors().iter().enumerate() {
        worst = worst.max(projective_distance(&(inv.transpose() * l), &l2[sigma[i] as usize - 1]));
    }
    for p in pairs.iter().filter(|p| p.rank != Rank::Sample) {
        worst = worst.max(projective_distance(&(m * p.src), &p.dst));
    }
    worst
}

fn cross_matrix(v: &V3) -> M3 {
    let z = C::from(0.0);
    M3::new(z, -v[2], v[1], v[2], z, -v[0], -v[1], v[0], z)
}

/// Least-squares matrix for all point pairs (`q ~ M p`) and line pairs
/// (`l ~ M^T l'`) at once, as the right singular vector of the stacked linear
/// conditions with the smallest singular value.
fn refine(pairs: &[Pair], lines: &[(V3, V3)]) -> Option<M3> {
    let rows = 3 * (pairs.len() + lines.len());
    let mut a = DMatrix::<C>::zeros(rows, 9);
    let mut row = 0;
    for pair in pairs {
        let (p, q) = (unit(&pair.src), unit(&pair.dst));
        let qx = cross_matrix(&q);
        for r in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    a[(row, 3 * i + j)] = qx[(r, i)] * p[j];
                }
            }
            row += 1;
        }
    }
    for (l, l2) in lines {
        let (l, l2) = (unit(l), unit(l2));
        let lx = cross_matrix(&l);
        for r in 0..3 {
            for i in 0..3 {
                for k in 0..3 {
                    a[(row, 3 * i + k)] = lx[(r, k)] * l2[i];
                }
            }
            row += 1;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t?;
    let k = svd.singular_values.argmin().0;
    let v = v_t.row(k).adjoint();
    Some(M3::from_fn(|i, j| v[3 * i + j]))
}

const MAX_CORRESPONDENCES: usize = 4096;

/// Looks for a projective transformation carrying `g1` onto `g2`. Only a
/// positive answer is conclusive.
pub fn projective_equivalent(
    g1: &RealizedArrangement,
    g2: &RealizedArrangement,
    tol: &Tolerances,
) -> Result<ProjectiveVerdict, RealizationError> {
    let e1 = extract_detailed(g1, tol)?;
    let e2 = extract_detailed(g2, tol)?;
    if canonical_key(&e1.arrangement) != canonical_key(&e2.arrangement) {
        return Ok(ProjectiveVerdict::NotFound { reason: "combinatorially inequivalent".into() });
    }
    let (c1, c2) = (g1.conic_matrix(), g2.conic_matrix());
    let (l1, l2) = (g1.line_vectors(), g2.line_vectors());
    let mut tried = 0usize;
    let mut best = f64::INFINITY;
    for sigma in isomorphisms(&e1.arrangement, &e2.arrangement) {
        for corr in point_correspondences(&e1, &e2, &sigma, MAX_CORRESPONDENCES) {
            let Some(pairs) = build_pairs(&e1, &e2, &corr, (&c1, &c2)) else {
                return Err(RealizationError::DegenerateInput("degenerate conic".into()));
            };
            let Some(quad) = general_quad(&pairs) else {
                continue;
            };
            let Some(m) = four_point(&pairs, quad) else {
                continue;
            };
            tried += 1;
            let line_pairs: Vec<(V3, V3)> =
                l1.iter().enumerate().map(|(i, l)| (*l, l2[sigma[i] as usize - 1])).collect();
            let (m, residual) = [Some(m), refine(&pairs, &line_pairs)]
                .into_iter()
                .flatten()
                .map(|m| (m, transfer_residual(&m, g1, g2, &sigma, &pairs)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("at least the four-point matrix");
            best = best.min(residual);
            if residual < tol.cluster {
                let m = normalize_matrix(&m);
                return Ok(ProjectiveVerdict::Equivalent {
                    matrix: std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])),
                    sigma,
                    residual,
                });
            }
        }
    }
    if tried == 0 {
        return Err(RealizationError::TooFewDistinguishedPoints);
    }
    Ok(ProjectiveVerdict::NotFound {
        reason: format!("{tried} point correspondences tried; smallest mismatch {best:.3e}"),
    })
}
