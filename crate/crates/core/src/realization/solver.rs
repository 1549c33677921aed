//! Realization search by damped least squares from random complex starts.
//!
//! The conic is fixed to the reference quadric and conic points are written
//! through its rational parametrization, so conic membership holds by
//! construction. Unknowns are the line coefficient vectors, one parameter per
//! multiple conic point, and two chart coordinates per multiple point off the
//! conic. All residuals are holomorphic in the unknowns, so the damped
//! Gauss-Newton step is taken directly over the complex numbers.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::extract::extract_detailed;
use super::linalg::{c, conic_point, reference_conic, C, V3};
use super::{RealizationError, RealizationResult, RealizationStatus, RealizedArrangement, Tolerances};
use crate::model::Arrangement;

pub const DEFAULT_BUDGET: usize = 200;

const MAX_ITERATIONS: usize = 300;

/// Parameters pinning the residual symmetry of the conic on the first three
/// multiple conic points.
const GAUGE: [(f64, f64); 3] = [(0.37, 0.21), (-0.81, 0.46), (1.29, -0.58)];

/// Generic affine chart `h + u g1 + v g2` for points off the conic.
fn chart() -> [V3; 3] {
    [
        V3::new(c(0.11, 0.07), c(-0.23, 0.05), c(1.0, 0.0)),
        V3::new(c(1.0, 0.0), c(0.13, -0.09), c(0.04, 0.17)),
        V3::new(c(-0.06, 0.12), c(1.0, 0.0), c(-0.15, 0.08)),
    ]
}

enum Location {
    Conic(ConicParam),
    Chart { u: usize, v: usize },
}

enum ConicParam {
    Fixed(C),
    Free(usize),
}

struct Problem {
    n: usize,
    unknowns: usize,
    points: Vec<(Location, Vec<usize>)>,
    /// (line, index into `points` of its tangency point)
    tangent: Vec<(usize, usize)>,
    gauge: Vec<DVector<C>>,
}

impl Problem {
    fn new(a: &Arrangement) -> Self {
        let n = a.n();
        let mut unknowns = 3 * n;
        let mut points = Vec::new();
        let mut fixed = 0;
        let mut tangent = Vec::new();
        for p in a.points() {
            let lines: Vec<usize> = p.lines.iter().map(|l| l.index()).collect();
            if p.on_conic {
                if lines.len() < 2 && p.tangent_line.is_none() {
                    continue;
                }
                let param = if fixed < GAUGE.len() {
                    let (re, im) = GAUGE[fixed];
                    fixed += 1;
                    ConicParam::Fixed(c(re, im))
                } else {
                    unknowns += 1;
                    ConicParam::Free(unknowns - 1)
                };
                if let Some(t) = p.tangent_line {
                    tangent.push((t.index(), points.len()));
                }
                points.push((Location::Conic(param), lines));
            } else if lines.len() >= 3 {
                points.push((Location::Chart { u: unknowns, v: unknowns + 1 }, lines));
                unknowns += 2;
            }
        }
        Problem { n, unknowns, points, tangent, gauge: Vec::new() }
    }

    fn line(&self, x: &DVector<C>, i: usize) -> V3 {
        V3::new(x[3 * i], x[3 * i + 1], x[3 * i + 2])
    }

    fn residual_count(&self) -> usize {
        self.points.iter().map(|(_, l)| l.len()).sum::<usize>() + 3 * self.tangent.len() + self.n
    }

    /// Position of tracked point `k` and its derivatives with respect to
    /// the unknowns it depends on.
    fn point(&self, x: &DVector<C>, k: usize) -> (V3, Vec<(usize, V3)>) {
        let [h, g1, g2] = chart();
        let two = c(2.0, 0.0);
        match &self.points[k].0 {
            Location::Conic(ConicParam::Fixed(t)) => (conic_point(c(1.0, 0.0), *t), Vec::new()),
            Location::Conic(ConicParam::Free(j)) => {
                let t = x[*j];
                (conic_point(c(1.0, 0.0), t), vec![(*j, V3::new(-two * t, two, two * t))])
            }
            Location::Chart { u, v } => (h + g1 * x[*u] + g2 * x[*v], vec![(*u, g1), (*v, g2)]),
        }
    }

    /// Residual vector and Jacobian at `x`. Tangency of line `i` at point
    /// `P` is imposed as `l_i x (Q P) = 0`, which vanishes to first order
    /// only at the tangent line itself.
    fn evaluate(&self, x: &DVector<C>) -> (DVector<C>, DMatrix<C>) {
        let m = self.residual_count();
        let mut r = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, self.unknowns);
        let q = reference_conic();
        let mut row = 0;
        for (k, (_, lines)) in self.points.iter().enumerate() {
            let (point, derivs) = self.point(x, k);
            for &i in lines {
                let l = self.line(x, i);
                r[row] = l.dot(&point);
                for a in 0..3 {
                    jac[(row, 3 * i + a)] = point[a];
                }
                for (j, dir) in &derivs {
                    jac[(row, *j)] = l.dot(dir);
                }
                row += 1;
            }
        }
        for &(i, k) in &self.tangent {
            let l = self.line(x, i);
            let (point, derivs) = self.point(x, k);
            let pole = q * point;
            let cross = l.cross(&pole);
            for a in 0..3 {
                r[row + a] = cross[a];
            }
            for b in 0..3 {
                let mut e = V3::zeros();
                e[b] = c(1.0, 0.0);
                let d = e.cross(&pole);
                for a in 0..3 {
                    jac[(row + a, 3 * i + b)] = d[a];
                }
            }
            for (j, dir) in &derivs {
                let d = l.cross(&(q * dir));
                for a in 0..3 {
                    jac[(row + a, *j)] = d[a];
                }
            }
            row += 3;
        }
        for (i, w) in self.gauge.iter().enumerate() {
            let l = self.line(x, i);
            r[row] = w[0] * l[0] + w[1] * l[1] + w[2] * l[2] - c(1.0, 0.0);
            for a in 0..3 {
                jac[(row, 3 * i + a)] = w[a];
            }
            row += 1;
        }
        (r, jac)
    }

    /// Sum of squared incidence and tangency residuals with every line and
    /// point scaled to unit norm.
    fn intrinsic_residual(&self, x: &DVector<C>) -> f64 {
        let unit = |v: V3| v / C::from(v.norm());
        let q = reference_conic();
        let mut total = 0.0;
        for (k, (_, lines)) in self.points.iter().enumerate() {
            let point = unit(self.point(x, k).0);
            for &i in lines {
                total += unit(self.line(x, i)).dot(&point).norm_sqr();
            }
        }
        for &(i, k) in &self.tangent {
            let pole = unit(q * self.point(x, k).0);
            total += unit(self.line(x, i)).cross(&pole).norm_squared();
        }
        total
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) / C::from(2f64.sqrt())
}

/// Damped Gauss-Newton over complex unknowns. Returns the final point and
/// its cost (sum of squared residual moduli).
fn minimize(problem: &Problem, mut x: DVector<C>) -> (DVector<C>, f64) {
    let (mut r, mut jac) = problem.evaluate(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERATIONS {
        if cost < 1e-30 {
            break;
        }
        let jh = jac.adjoint();
        let grad = &jh * &r;
        let normal = &jh * &jac;
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = normal.clone();
            for k in 0..damped.nrows() {
                damped[(k, k)] += C::from(lambda);
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= 4.0;
                continue;
            };
            let step = -chol.solve(&grad);
            let candidate = &x + &step;
            let (r_new, jac_new) = problem.evaluate(&candidate);
            let cost_new = r_new.norm_squared();
            if cost_new.is_finite() && cost_new < cost {
                let small = step.norm() <= 1e-15 * (1.0 + x.norm());
                x = candidate;
                r = r_new;
                jac = jac_new;
                cost = cost_new;
                lambda = (lambda / 3.0).max(1e-15);
                improved = !small;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost)
}

fn attempt(a: &Arrangement, seed: u64, index: usize, tol: &Tolerances) -> Option<RealizedArrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    let mut problem = Problem::new(a);
    let x = DVector::from_fn(problem.unknowns, |_, _| complex_gaussian(&mut rng));
    // Scale of each line is pinned by w . l = 1 at the start vector.
    problem.gauge = (0..problem.n)
        .map(|i| {
            let l = problem.line(&x, i);
            DVector::from_iterator(3, l.iter().map(|z| z.conj() / C::from(l.norm_squared())))
        })
        .collect();
    let (x, _) = minimize(&problem, x);
    let residual = problem.intrinsic_residual(&x);
    if residual.is_nan() || residual >= tol.res {
        return None;
    }
    let lines: Vec<V3> = (0..problem.n).map(|i| problem.line(&x, i)).collect();
    let mut geometry = RealizedArrangement::new(&reference_conic(), &lines);
    geometry.residual = residual;
    let extraction = extract_detailed(&geometry, tol).ok()?;
    geometry.separation = extraction.separation;
    (extraction.arrangement == *a && extraction.separation > tol.separation()).then_some(geometry)
}

/// Searches for a realization of `a` over the complex numbers, trying up to
/// `budget` seeded random starts. Attempts run in parallel; the lowest
/// successful attempt index wins, so the result depends only on the seed.
pub fn realize(a: &Arrangement, budget: usize, seed: u64, tol: &Tolerances) -> Result<RealizationResult, RealizationError> {
    tol.validate()?;
    if a.n() == 0 {
        let mut geometry = RealizedArrangement::new(&reference_conic(), &[]);
        geometry.separation = extract_detailed(&geometry, tol)?.separation;
        return Ok(RealizationResult {
            status: RealizationStatus::Realized,
            geometry: Some(geometry),
            attempts: 0,
        });
    }
    let found = (0..budget)
        .into_par_iter()
        .find_map_first(|k| attempt(a, seed, k, tol).map(|g| (k, g)));
    Ok(match found {
        Some((k, g)) => RealizationResult {
            status: RealizationStatus::Realized,
            geometry: Some(g),
            attempts: k + 1,
        },
        None => RealizationResult {
            status: RealizationStatus::Unknown,
            geometry: None,
            attempts: budget,
        },
    })
}
