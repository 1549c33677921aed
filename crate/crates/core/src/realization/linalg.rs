//! Small complex projective helpers.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

pub type C = Complex64;
pub type V3 = Vector3<C>;
pub type M3 = Matrix3<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// The reference conic `x^2 + y^2 - z^2`.
pub fn reference_conic() -> M3 {
    M3::from_diagonal(&V3::new(c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)))
}

/// Unit norm, with the first component of largest modulus made real positive.
pub fn normalize(v: &V3) -> V3 {
    let norm = v.norm();
    if norm == 0.0 {
        return *v;
    }
    let mut k = 0;
    for i in 1..3 {
        if v[i].norm() > v[k].norm() * (1.0 + 1e-12) {
            k = i;
        }
    }
    let phase = v[k].conj() / v[k].norm();
    v * (phase / norm)
}

pub fn normalize_matrix(m: &M3) -> M3 {
    let norm = m.norm();
    if norm == 0.0 {
        return *m;
    }
    let mut best = m[0];
    for z in m.iter() {
        if z.norm() > best.norm() * (1.0 + 1e-12) {
            best = *z;
        }
    }
    m * (best.conj() / best.norm() / norm)
}

/// Distance between the points of projective space represented by `p` and
/// `q`: the Euclidean distance of their unit representatives after optimal
/// phase alignment. Ranges over `[0, sqrt(2)]`.
pub fn projective_distance(p: &V3, q: &V3) -> f64 {
    let (pn, qn) = (p.norm(), q.norm());
    if pn == 0.0 || qn == 0.0 {
        return f64::INFINITY;
    }
    let p = p / C::from(pn);
    let q = q / C::from(qn);
    let w = p.dotc(&q);
    let phase = if w.norm() > 0.0 { w / w.norm() } else { c(1.0, 0.0) };
    (q - p * phase).norm()
}

/// Same as [`projective_distance`] for matrices up to scale.
pub fn matrix_distance(a: &M3, b: &M3) -> f64 {
    let (an, bn) = (a.norm(), b.norm());
    if an == 0.0 || bn == 0.0 {
        return f64::INFINITY;
    }
    let a = a / C::from(an);
    let b = b / C::from(bn);
    let w = a.dotc(&b);
    let phase = if w.norm() > 0.0 { w / w.norm() } else { c(1.0, 0.0) };
    (b - a * phase).norm()
}

/// Bilinear (not Hermitian) form `u^T m v`.
pub fn bilinear(m: &M3, u: &V3, v: &V3) -> C {
    u.dot(&(m * v))
}

/// A matrix `A` with `A^T m A` proportional to the reference conic, so that
/// `A` carries the reference conic onto the conic of `m`. `None` when `m` is
/// degenerate.
pub fn conic_frame(m: &M3) -> Option<M3> {
    let m = m / C::from(m.norm());
    let e = |i: usize| {
        let mut v = V3::zeros();
        v[i] = c(1.0, 0.0);
        v
    };
    let candidates = [e(0), e(1), e(2), e(0) + e(1), e(0) + e(2), e(1) + e(2)];
    let mut basis: Vec<(V3, C)> = Vec::with_capacity(3);
    for _ in 0..3 {
        let mut best: Option<(V3, C, f64)> = None;
        for cand in &candidates {
            let mut v = *cand;
            for (b, d) in &basis {
                v -= b * (bilinear(&m, b, &v) / d);
            }
            let vn = v.norm();
            if vn < 1e-9 {
                continue;
            }
            let d = bilinear(&m, &v, &v);
            let score = d.norm() / (vn * vn);
            if best.as_ref().is_none_or(|(_, _, s)| score > *s * (1.0 + 1e-12)) {
                best = Some((v, d, score));
            }
        }
        let (v, d, score) = best?;
        if score < 1e-10 {
            return None;
        }
        basis.push((v, d));
    }
    // Columns v_k / sqrt(d_k) give an orthonormal basis for the form; the
    // last column then absorbs the sign of the reference conic.
    let mut a = M3::zeros();
    for (k, (v, d)) in basis.iter().enumerate() {
        let mut col = v / d.sqrt();
        if k == 2 {
            col *= c(0.0, 1.0);
        }
        a.set_column(k, &col);
    }
    Some(a)
}

/// Point of the reference conic with homogeneous parameter `[s : t]`.
pub fn conic_point(s: C, t: C) -> V3 {
    V3::new(s * s - t * t, c(2.0, 0.0) * s * t, s * s + t * t)
}

/// Inverse of [`conic_point`] for a point on the reference conic.
pub fn conic_parameter(p: &V3) -> (C, C) {
    let (x, y, z) = (p[0], p[1], p[2]);
    let first = (z + x, y);
    let second = (y, z - x);
    if first.0.norm() + first.1.norm() >= second.0.norm() + second.1.norm() {
        first
    } else {
        second
    }
}

/// Intersection of a line with the reference conic. Returns the discriminant
/// of the restricted binary quadratic (zero exactly for tangent lines, for a
/// unit line vector) and the parameter roots: one root when `tangent`, two
/// otherwise.
pub fn line_conic_roots(l: &V3, tangent_tol: f64) -> (C, Vec<(C, C)>) {
    let l = l / C::from(l.norm());
    // l . P(s,t) = a s^2 + 2 b s t + c t^2
    let a = l[0] + l[2];
    let b = l[1];
    let cc = l[2] - l[0];
    let disc = b * b - a * cc;
    if disc.norm() < tangent_tol {
        let root = if a.norm() >= cc.norm() { (-b, a) } else { (cc, -b) };
        return (disc, vec![root]);
    }
    let sq = disc.sqrt();
    let w1 = -b - sq;
    let w2 = -b + sq;
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    // roots [w : a] and [c : w], with w (w') = a c
    (disc, vec![(w, a), (cc, w)])
}

pub fn det3(a: &V3, b: &V3, c3: &V3) -> C {
    M3::from_columns(&[*a, *b, *c3]).determinant()
}
