//! Bounded convex cells carried in mutually consistent H- and V-representation.
//!
//! Dimension 2 keeps an ordered vertex ring (counter-clockwise, edge `i` runs
//! from vertex `i` to vertex `i+1` and lies on `halfspaces[i]`). Dimension 3
//! keeps a face lattice: `faces[i]` is the vertex ring of the facet supported
//! by `halfspaces[i]`, counter-clockwise seen from outside. Both are updated
//! incrementally by [`ConvexCell::clip`], so the cell never has to be
//! re-enumerated inside the samplers' inner loops.

use std::collections::HashMap;

use super::hyperplane::Halfspace;
use super::vector::{Point, UnitVector};
use super::{GeometryError, EPS_GEOM};

#[derive(Clone, Debug)]
pub struct ConvexCell {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Point>,
    faces: Vec<Vec<usize>>, // dimension 3 only, aligned with halfspaces
}

impl ConvexCell {
    /// Builds a planar cell from the extreme points of a convex polygon
    /// (arbitrary order; near-duplicate and collinear points are dropped).
    pub fn convex_polygon(points: &[Point]) -> Result<Self, GeometryError> {
        if points.iter().any(|p| p.dim() != 2) {
            return Err(GeometryError::InvalidInput("polygon points must be planar"));
        }
        let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
        let tol = EPS_GEOM * scale;

        let n = points.len() as f64;
        let mut center = Point::zeros(2);
        for p in points {
            center = center + *p;
        }
        center = center.scale(1.0 / n);
        let mut ordered: Vec<Point> = points.to_vec();
        ordered.sort_by(|a, b| {
            let ta = (a.coords()[1] - center[1]).atan2(a.coords()[0] - center[0]);
            let tb = (b.coords()[1] - center[1]).atan2(b.coords()[0] - center[0]);
            ta.total_cmp(&tb)
        });
        // Drop duplicates and collinear middle points.
        let mut verts: Vec<Point> = Vec::with_capacity(ordered.len());
        for p in ordered {
            if verts.last().map_or(false, |q| q.dist(&p) <= tol) {
                continue;
            }
            verts.push(p);
        }
        while verts.len() >= 2 && verts[0].dist(verts.last().unwrap()) <= tol {
            verts.pop();
        }
        let mut keep = true;
        while keep && verts.len() >= 3 {
            keep = false;
            let m = verts.len();
            for i in 0..m {
                let a = verts[(i + m - 1) % m];
                let b = verts[i];
                let c = verts[(i + 1) % m];
                let crossz = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
                if crossz <= tol * (1.0 + a.dist(&c)) {
                    verts.remove(i);
                    keep = true;
                    break;
                }
            }
        }
        if verts.len() < 3 {
            return Err(GeometryError::InvalidInput("fewer than 3 extreme points"));
        }

        let m = verts.len();
        let mut halfspaces = Vec::with_capacity(m);
        for i in 0..m {
            let a = verts[i];
            let b = verts[(i + 1) % m];
            let e = b - a;
            let normal = UnitVector::new(&[e[1], -e[0]])?;
            halfspaces.push(Halfspace::new(normal, normal.dot(&a)));
        }
        let cell = Self { dim: 2, halfspaces, vertices: verts, faces: Vec::new() };
        cell.check_widths()?;
        Ok(cell)
    }

    /// Assembles a cell from consistent parts; callers are responsible for the
    /// representation invariants (used by the simplex constructors).
    pub(crate) fn from_parts(
        dim: usize,
        halfspaces: Vec<Halfspace>,
        vertices: Vec<Point>,
        faces: Vec<Vec<usize>>,
    ) -> Self {
        Self { dim, halfspaces, vertices, faces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of facets; each stored halfspace supports one facet.
    pub fn facet_count(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Facet vertex rings (dimension 3).
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Relative tolerance used for feasibility, merging and emptiness tests.
    pub fn tolerance(&self) -> f64 {
        EPS_GEOM * (1.0 + self.max_vertex_norm())
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `h(K, u) = max {<x, u> : x in K}`, evaluated over the vertex set.
    pub fn support_function(&self, u: &UnitVector) -> f64 {
        self.vertices
            .iter()
            .map(|v| u.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains_point(&self, x: &Point, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }

    /// Undirected edges as `(vertex_a, vertex_b, face_left, face_right)`.
    /// For planar cells the two incident "faces" are the two incident edges'
    /// halfspace indices.
    pub fn edges(&self) -> Result<Vec<(usize, usize, usize, usize)>, GeometryError> {
        match self.dim {
            2 => {
                let n = self.vertices.len();
                Ok((0..n).map(|i| (i, (i + 1) % n, i, i)).collect())
            }
            3 => {
                let mut seen: HashMap<(usize, usize), (usize, Option<usize>)> = HashMap::new();
                for (f, ring) in self.faces.iter().enumerate() {
                    for k in 0..ring.len() {
                        let a = ring[k];
                        let b = ring[(k + 1) % ring.len()];
                        let key = (a.min(b), a.max(b));
                        match seen.get_mut(&key) {
                            None => {
                                seen.insert(key, (f, None));
                            }
                            Some((_, second @ None)) => *second = Some(f),
                            Some(_) => {
                                return Err(GeometryError::InvalidInput(
                                    "edge shared by more than two faces",
                                ))
                            }
                        }
                    }
                }
                let mut out = Vec::with_capacity(seen.len());
                for ((a, b), (f1, f2)) in seen {
                    let f2 = f2.ok_or(GeometryError::InvalidInput("open edge in face lattice"))?;
                    out.push((a, b, f1, f2));
                }
                out.sort_unstable();
                Ok(out)
            }
            d => Err(GeometryError::UnsupportedDimension(d)),
        }
    }

    pub fn translated(&self, shift: &Point) -> ConvexCell {
        ConvexCell {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(|h| h.translated(shift)).collect(),
            vertices: self.vertices.iter().map(|v| *v + *shift).collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn scaled(&self, t: f64) -> ConvexCell {
        assert!(t > 0.0);
        ConvexCell {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(|h| h.scaled(t)).collect(),
            vertices: self.vertices.iter().map(|v| v.scale(t)).collect(),
            faces: self.faces.clone(),
        }
    }

    /// Smallest support width measured along the stored facet normals; a flat
    /// (empty-interior) cell always shows a near-zero width here.
    pub fn min_facet_width(&self) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| {
                let lowest = self
                    .vertices
                    .iter()
                    .map(|v| h.normal().dot(v))
                    .fold(f64::INFINITY, f64::min);
                h.bound() - lowest
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn check_widths(&self) -> Result<(), GeometryError> {
        if self.min_facet_width() < self.tolerance() {
            return Err(GeometryError::EmptyCell);
        }
        Ok(())
    }

    /// Intersects the cell with a halfspace.
    ///
    /// If the halfspace already contains the cell, the cell is returned
    /// unchanged and the redundant constraint is not stored. Constraints whose
    /// facets vanish under the cut are dropped, so the halfspace list stays
    /// irredundant.
    pub fn clip(&self, hs: &Halfspace) -> Result<ConvexCell, GeometryError> {
        match self.dim {
            2 => self.clip2(hs),
            3 => self.clip3(hs),
            d => Err(GeometryError::UnsupportedDimension(d)),
        }
    }

    fn clip2(&self, hs: &Halfspace) -> Result<ConvexCell, GeometryError> {
        let tol = self.tolerance();
        let s: Vec<f64> = self.vertices.iter().map(|v| hs.excess(v)).collect();
        let smax = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        if smax <= tol {
            return Ok(self.clone());
        }
        if smin >= -tol {
            return Err(GeometryError::EmptyCell);
        }

        let n = self.vertices.len();
        let keep = |x: f64| x <= tol;
        let mut out_v: Vec<Point> = Vec::with_capacity(n + 2);
        let mut out_h: Vec<Halfspace> = Vec::with_capacity(n + 2);
        let crossing = |a: usize, b: usize| {
            let t = s[a] / (s[a] - s[b]);
            self.vertices[a] + (self.vertices[b] - self.vertices[a]).scale(t)
        };
        for a in 0..n {
            let b = (a + 1) % n;
            match (keep(s[a]), keep(s[b])) {
                (true, true) => {
                    out_v.push(self.vertices[a]);
                    out_h.push(self.halfspaces[a]);
                }
                (true, false) => {
                    out_v.push(self.vertices[a]);
                    out_h.push(self.halfspaces[a]);
                    out_v.push(crossing(a, b));
                    out_h.push(*hs);
                }
                (false, true) => {
                    out_v.push(crossing(a, b));
                    out_h.push(self.halfspaces[a]);
                }
                (false, false) => {}
            }
        }

        // Merge near-duplicate consecutive vertices (grazing cuts), dropping
        // the zero-length edge's support.
        let mut verts: Vec<Point> = Vec::with_capacity(out_v.len());
        let mut hspaces: Vec<Halfspace> = Vec::with_capacity(out_h.len());
        for (v, h) in out_v.iter().zip(out_h.iter()) {
            if let Some(last) = verts.last() {
                if last.dist(v) <= tol {
                    *hspaces.last_mut().unwrap() = *h;
                    continue;
                }
            }
            verts.push(*v);
            hspaces.push(*h);
        }
        while verts.len() >= 2 && verts[0].dist(verts.last().unwrap()) <= tol {
            verts.pop();
            hspaces.pop();
        }
        if verts.len() < 3 {
            return Err(GeometryError::EmptyCell);
        }
        let cell = ConvexCell { dim: 2, halfspaces: hspaces, vertices: verts, faces: Vec::new() };
        cell.check_widths()?;
        Ok(cell)
    }

    fn clip3(&self, hs: &Halfspace) -> Result<ConvexCell, GeometryError> {
        let tol = self.tolerance();
        let s: Vec<f64> = self.vertices.iter().map(|v| hs.excess(v)).collect();
        let smax = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        if smax <= tol {
            return Ok(self.clone());
        }
        if smin >= -tol {
            return Err(GeometryError::EmptyCell);
        }
        // A vertex inside the tolerance band while others are strictly outside
        // is a measure-zero configuration; reject it instead of perturbing.
        if s.iter().any(|&x| x.abs() <= tol) {
            return Err(GeometryError::DegenerateClip);
        }

        let inside: Vec<bool> = s.iter().map(|&x| x < 0.0).collect();
        let mut new_index = vec![usize::MAX; self.vertices.len()];
        let mut verts: Vec<Point> = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if inside[i] {
                new_index[i] = verts.len();
                verts.push(*v);
            }
        }
        let mut cut_points: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cut_point = |a: usize, b: usize, verts: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *cut_points.entry(key).or_insert_with(|| {
                let t = s[a] / (s[a] - s[b]);
                let p = self.vertices[a] + (self.vertices[b] - self.vertices[a]).scale(t);
                verts.push(p);
                verts.len() - 1
            })
        };

        let mut faces: Vec<Vec<usize>> = Vec::with_capacity(self.faces.len() + 1);
        let mut halfspaces: Vec<Halfspace> = Vec::with_capacity(self.halfspaces.len() + 1);
        // Directed chords of the cut plane: the cap traverses entry -> exit,
        // the reverse of the clipped face's own traversal.
        let mut chords: HashMap<usize, usize> = HashMap::new();
        for (ring, h) in self.faces.iter().zip(self.halfspaces.iter()) {
            let mut out: Vec<usize> = Vec::with_capacity(ring.len() + 2);
            let mut entry: Option<usize> = None;
            let mut exit: Option<usize> = None;
            for k in 0..ring.len() {
                let a = ring[k];
                let b = ring[(k + 1) % ring.len()];
                match (inside[a], inside[b]) {
                    (true, true) => out.push(new_index[a]),
                    (true, false) => {
                        out.push(new_index[a]);
                        let p = cut_point(a, b, &mut verts);
                        out.push(p);
                        exit = Some(p);
                    }
                    (false, true) => {
                        let p = cut_point(a, b, &mut verts);
                        out.push(p);
                        entry = Some(p);
                    }
                    (false, false) => {}
                }
            }
            if out.len() >= 3 {
                faces.push(out);
                halfspaces.push(*h);
            }
            if let (Some(en), Some(ex)) = (entry, exit) {
                if chords.insert(en, ex).is_some() {
                    return Err(GeometryError::DegenerateClip);
                }
            }
        }

        // Chain the chords into the cap ring.
        if chords.len() < 3 {
            return Err(GeometryError::DegenerateClip);
        }
        let start = *chords.keys().min().unwrap();
        let mut cap = vec![start];
        let mut cur = start;
        loop {
            let Some(&next) = chords.get(&cur) else {
                return Err(GeometryError::DegenerateClip);
            };
            if next == start {
                break;
            }
            if cap.len() > chords.len() {
                return Err(GeometryError::DegenerateClip);
            }
            cap.push(next);
            cur = next;
        }
        if cap.len() != chords.len() {
            return Err(GeometryError::DegenerateClip);
        }
        if newell_normal(&cap, &verts).dot(&hs.normal().as_point()) < 0.0 {
            cap.reverse();
        }
        faces.push(cap);
        halfspaces.push(*hs);

        if verts.len() < 4 || faces.len() < 4 {
            return Err(GeometryError::EmptyCell);
        }
        let cell = ConvexCell { dim: 3, halfspaces, vertices: verts, faces };
        cell.check_widths()?;
        Ok(cell)
    }

    /// Internal consistency check used by tests: every vertex satisfies every
    /// constraint, every facet touches its supporting plane, rings are closed.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let tol = 10.0 * self.tolerance();
        for v in &self.vertices {
            for h in &self.halfspaces {
                if h.excess(v) > tol {
                    return Err(GeometryError::InvalidInput("vertex violates a constraint"));
                }
            }
        }
        match self.dim {
            2 => {
                let n = self.vertices.len();
                if self.halfspaces.len() != n {
                    return Err(GeometryError::InvalidInput("ring/support length mismatch"));
                }
                for i in 0..n {
                    let h = &self.halfspaces[i];
                    for &j in [i, (i + 1) % n].iter() {
                        if h.excess(&self.vertices[j]).abs() > tol {
                            return Err(GeometryError::InvalidInput("edge not on its support"));
                        }
                    }
                }
            }
            3 => {
                if self.faces.len() != self.halfspaces.len() {
                    return Err(GeometryError::InvalidInput("face/support length mismatch"));
                }
                for (ring, h) in self.faces.iter().zip(&self.halfspaces) {
                    if ring.len() < 3 {
                        return Err(GeometryError::InvalidInput("short face ring"));
                    }
                    for &i in ring {
                        if h.excess(&self.vertices[i]).abs() > tol {
                            return Err(GeometryError::InvalidInput("face vertex off its plane"));
                        }
                    }
                }
                let e = self.edges()?.len();
                // Euler: V - E + F = 2
                if self.vertices.len() + self.faces.len() != e + 2 {
                    return Err(GeometryError::InvalidInput("Euler relation violated"));
                }
            }
            d => return Err(GeometryError::UnsupportedDimension(d)),
        }
        Ok(())
    }
}

fn newell_normal(ring: &[usize], verts: &[Point]) -> Point {
    let mut n = Point::zeros(3);
    for k in 0..ring.len() {
        let a = verts[ring[k]];
        let b = verts[ring[(k + 1) % ring.len()]];
        n = n + Point::new(&[
            (a[1] - b[1]) * (a[2] + b[2]),
            (a[2] - b[2]) * (a[0] + b[0]),
            (a[0] - b[0]) * (a[1] + b[1]),
        ]);
    }
    n
}

/// Orders the vertices of a planar 3D face counter-clockwise as seen from the
/// direction of `outward` (used when assembling simplices).
pub(crate) fn order_ring_ccw(indices: &mut [usize], verts: &[Point], outward: &UnitVector) {
    let ring: Vec<usize> = indices.to_vec();
    let n = newell_normal(&ring, verts);
    if n.dot(&outward.as_point()) < 0.0 {
        indices.reverse();
    }
}
