//! Support polygon of the grounded contact points.

use crate::error::{Error, Result};
use crate::linalg::{Vec2, Vec3};
use crate::model::params::LEG_COUNT;
use crate::model::state::ContactFlags;

/// Convex hull of up to four ground points, counter-clockwise. Two vertices
/// make a segment, one a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SupportPolygon {
    vertices: [Vec2; LEG_COUNT],
    len: usize,
}

fn cross(o: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (*a - *o).perp_dot(&(*b - *o))
}

fn closest_on_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> Vec2 {
    let ab = *b - *a;
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return *a;
    }
    let t = ((*p - *a).dot(&ab) / len2).clamp(0.0, 1.0);
    *a + ab * t
}

impl SupportPolygon {
    pub fn from_points(points: &[Vec2]) -> Self {
        assert!(points.len() <= LEG_COUNT);
        let n = points.len();
        let mut out = Self::default();
        if n == 0 {
            return out;
        }
        let scale = points.iter().map(|p| p.max_abs()).fold(1.0, f64::max);
        let eps = 1e-12 * scale * scale;

        // Monotone chain on at most four points; ties keep input order.
        let mut idx: [usize; LEG_COUNT] = [0, 1, 2, 3];
        let idx = &mut idx[..n];
        idx.sort_by(|&i, &j| {
            let (a, b) = (points[i], points[j]);
            a[0].total_cmp(&b[0])
                .then(a[1].total_cmp(&b[1]))
                .then(i.cmp(&j))
        });
        let mut hull = [Vec2::zeros(); 2 * LEG_COUNT];
        let mut k = 0;
        for &i in idx.iter() {
            while k >= 2 && cross(&hull[k - 2], &hull[k - 1], &points[i]) <= eps {
                k -= 1;
            }
            hull[k] = points[i];
            k += 1;
        }
        let lower = k + 1;
        for &i in idx.iter().rev().skip(1) {
            while k >= lower && cross(&hull[k - 2], &hull[k - 1], &points[i]) <= eps {
                k -= 1;
            }
            hull[k] = points[i];
            k += 1;
        }
        // The chain closes on its first point.
        let len = if k > 1 { k - 1 } else { k };

        if len < 3 {
            // Segment ends follow the caller's order.
            if len == 2 {
                let pos = |h: &Vec2| points.iter().position(|p| p == h).unwrap_or(usize::MAX);
                if pos(&hull[1]) < pos(&hull[0]) {
                    hull.swap(0, 1);
                }
            }
            out.vertices[..len].copy_from_slice(&hull[..len]);
            out.len = len;
            return out;
        }

        // Start from the vertex with the smallest bearing about the centroid.
        let mut c = Vec2::zeros();
        for v in &hull[..len] {
            c += *v;
        }
        c = c * (1.0 / len as f64);
        let bearing = |v: &Vec2| (v[1] - c[1]).atan2(v[0] - c[0]);
        let mut start = 0;
        for i in 1..len {
            if bearing(&hull[i]) < bearing(&hull[start]) {
                start = i;
            }
        }
        for i in 0..len {
            out.vertices[i] = hull[(start + i) % len];
        }
        out.len = len;
        out
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Membership with a signed-distance tolerance.
    pub fn contains(&self, p: &Vec2, tol: f64) -> bool {
        let v = self.vertices();
        match v.len() {
            0 => false,
            1 => (*p - v[0]).norm() <= tol,
            2 => (*p - closest_on_segment(p, &v[0], &v[1])).norm() <= tol,
            n => (0..n).all(|i| {
                let a = v[i];
                let b = v[(i + 1) % n];
                let edge = b - a;
                edge.perp_dot(&(*p - a)) >= -tol * edge.norm()
            }),
        }
    }

    /// Point of the polygon nearest to `p`; `p` itself when inside.
    pub fn closest_point(&self, p: &Vec2) -> Result<Vec2> {
        let v = self.vertices();
        match v.len() {
            0 => Err(Error::EmptyPolygon),
            1 => Ok(v[0]),
            2 => Ok(closest_on_segment(p, &v[0], &v[1])),
            n => {
                if self.contains(p, 0.0) {
                    return Ok(*p);
                }
                let mut best = v[0];
                let mut best_d = f64::INFINITY;
                for i in 0..n {
                    let q = closest_on_segment(p, &v[i], &v[(i + 1) % n]);
                    let d = (*p - q).norm();
                    if d < best_d {
                        best_d = d;
                        best = q;
                    }
                }
                Ok(best)
            }
        }
    }
}

/// Hull of the grounded contact points.
pub fn support_polygon(contacts: &ContactFlags, of: &[Vec3; LEG_COUNT]) -> SupportPolygon {
    let mut pts = [Vec2::zeros(); LEG_COUNT];
    let mut n = 0;
    for leg in 0..LEG_COUNT {
        if contacts.sigma[leg] {
            pts[n] = of[leg].xy();
            n += 1;
        }
    }
    SupportPolygon::from_points(&pts[..n])
}
