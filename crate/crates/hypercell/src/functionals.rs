//! Size functionals (inradius, circumradius, diameter, boundary measures,
//! volume, phi-content), center functions and the scale-free shape map.

use crate::directions::{DensityKind, DirectionalDistribution};
use crate::geometry::{lp, ConvexCell, GeometryError, Point, UnitVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FunctionalError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("quadrature did not reach the target accuracy within the node cap")]
    QuadratureNotConverged,
    #[error("shape normalization failed to reach unit phi-content")]
    NormalizationFailed,
    #[error("functional not defined in dimension {0}")]
    WrongDimension(usize),
}

/// The size functionals exposed by name. Degrees are fixed by (name, dim).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SizeFunctional {
    Inradius,
    Circumradius,
    Diameter,
    Perimeter,
    SurfaceArea,
    Volume,
    PhiContent,
}

impl SizeFunctional {
    pub fn name(&self) -> &'static str {
        match self {
            SizeFunctional::Inradius => "inradius",
            SizeFunctional::Circumradius => "circumradius",
            SizeFunctional::Diameter => "diameter",
            SizeFunctional::Perimeter => "perimeter",
            SizeFunctional::SurfaceArea => "surface_area",
            SizeFunctional::Volume => "volume",
            SizeFunctional::PhiContent => "phi_content",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "inradius" => SizeFunctional::Inradius,
            "circumradius" => SizeFunctional::Circumradius,
            "diameter" => SizeFunctional::Diameter,
            "perimeter" => SizeFunctional::Perimeter,
            "surface_area" => SizeFunctional::SurfaceArea,
            "volume" => SizeFunctional::Volume,
            "phi_content" => SizeFunctional::PhiContent,
            _ => return None,
        })
    }

    /// Homogeneity degree `k` in `Sigma(tK) = t^k Sigma(K)`.
    pub fn degree(&self, dim: usize) -> f64 {
        match self {
            SizeFunctional::Volume => dim as f64,
            SizeFunctional::SurfaceArea => 2.0,
            _ => 1.0,
        }
    }

    pub fn defined_in_dim(&self, dim: usize) -> bool {
        match self {
            SizeFunctional::Perimeter => dim == 2,
            SizeFunctional::SurfaceArea => dim == 3,
            _ => true,
        }
    }

    /// Value on the unit ball, `Sigma(B^d)`; the constant of the sandwich
    /// inequality and of the truncation caps.
    pub fn unit_ball_value(&self, dim: usize) -> f64 {
        use std::f64::consts::PI;
        match self {
            SizeFunctional::Inradius | SizeFunctional::Circumradius | SizeFunctional::PhiContent => 1.0,
            SizeFunctional::Diameter => 2.0,
            SizeFunctional::Perimeter => 2.0 * PI,
            SizeFunctional::SurfaceArea => 4.0 * PI,
            SizeFunctional::Volume => {
                if dim == 2 {
                    PI
                } else {
                    4.0 * PI / 3.0
                }
            }
        }
    }
}

/// Translation-covariant center choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterFunction {
    Incenter,
    Centroid,
}

impl CenterFunction {
    pub fn name(&self) -> &'static str {
        match self {
            CenterFunction::Incenter => "incenter",
            CenterFunction::Centroid => "centroid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InradiusResult {
    pub radius: f64,
    pub center: Point,
    pub non_unique: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnclosingBall {
    pub radius: f64,
    pub center: Point,
}

impl EnclosingBall {
    fn contains(&self, p: &Point) -> bool {
        self.center.dist(p) <= self.radius * (1.0 + 1e-12) + 1e-14
    }
}

/// Scale-free shape descriptors, evaluated on the normalized body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSummary {
    pub fcount: usize,
    pub phi: f64,
    pub circ_over_in: f64,
    pub iso_ratio: f64,
    pub diam_norm: f64,
}

/// The full functional set evaluated on one cell. `boundary` is the perimeter
/// in the plane and the surface area in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValues {
    pub phi_content: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub diameter: f64,
    pub volume: f64,
    pub boundary: f64,
}

impl FunctionalValues {
    pub fn get(&self, sigma: SizeFunctional) -> f64 {
        match sigma {
            SizeFunctional::Inradius => self.inradius,
            SizeFunctional::Circumradius => self.circumradius,
            SizeFunctional::Diameter => self.diameter,
            SizeFunctional::Perimeter | SizeFunctional::SurfaceArea => self.boundary,
            SizeFunctional::Volume => self.volume,
            SizeFunctional::PhiContent => self.phi_content,
        }
    }
}

// ---------------------------------------------------------------------------
// Inradius (Chebyshev center)
// ---------------------------------------------------------------------------

/// Minimizes `cost . x` over `{x : rows_i . x <= rhs_i}` with free `x`
/// (variables split into positive parts for the standard-form solver).
fn linear_minimize(
    rows: &[Vec<f64>],
    rhs: &[f64],
    cost: &[f64],
    dim: usize,
) -> Option<Vec<f64>> {
    let m = rows.len();
    let ncols = 2 * dim + m;
    let mut a = Vec::with_capacity(m);
    for r in rows {
        let mut row = vec![0.0; ncols];
        for k in 0..dim {
            row[k] = r[k];
            row[dim + k] = -r[k];
        }
        row.extend_from_slice(&[0.0; 0]);
        a.push(row);
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[2 * dim + i] = 1.0;
    }
    let mut c = vec![0.0; ncols];
    for k in 0..dim {
        c[k] = cost[k];
        c[dim + k] = -cost[k];
    }
    let lp = lp::StandardForm { ncols, rows: a, rhs: rhs.to_vec(), cost: c };
    match lp::solve(&lp).ok()? {
        lp::LpOutcome::Optimal { x, .. } => {
            Some((0..dim).map(|k| x[k] - x[dim + k]).collect())
        }
        _ => None,
    }
}

/// Largest inscribed ball: solves `max r` subject to `<u_i, x> + r <= b_i`
/// with a dense simplex. Non-unique optimal centers are resolved to the
/// lexicographically smallest point of the optimal face and flagged.
pub fn inradius(cell: &ConvexCell) -> Result<InradiusResult, FunctionalError> {
    let dim = cell.dim();
    let hs = cell.halfspaces();
    let m = hs.len();
    // Variables: x+ (dim), x- (dim), r, slack (m).
    let ncols = 2 * dim + 1 + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, h) in hs.iter().enumerate() {
        let mut row = vec![0.0; ncols];
        for k in 0..dim {
            row[k] = h.normal()[k];
            row[dim + k] = -h.normal()[k];
        }
        row[2 * dim] = 1.0;
        row[2 * dim + 1 + i] = 1.0;
        rows.push(row);
        rhs.push(h.bound());
    }
    let mut cost = vec![0.0; ncols];
    cost[2 * dim] = -1.0;
    let lp_problem = lp::StandardForm { ncols, rows, rhs, cost };
    let scale = 1.0 + cell.max_vertex_norm();
    let (radius, x0) = match lp::solve(&lp_problem) {
        Ok(lp::LpOutcome::Optimal { x, .. }) => {
            let r = x[2 * dim];
            let center: Vec<f64> = (0..dim).map(|k| x[k] - x[dim + k]).collect();
            (r, center)
        }
        Ok(lp::LpOutcome::Infeasible) => return Err(GeometryError::EmptyCell.into()),
        _ => return Err(GeometryError::EmptyCell.into()),
    };
    if radius <= crate::geometry::EPS_GEOM * scale {
        return Err(GeometryError::EmptyCell.into());
    }

    // The optimal center is unique iff the active (inball-tangent) normals
    // positively span the space: any direction with nonpositive products
    // against all of them would move the center without losing radius.
    let x0p = Point::new(&x0);
    let act_tol = 1e-6 * scale;
    let active: Vec<crate::geometry::UnitVector> = hs
        .iter()
        .filter(|h| (h.normal().dot(&x0p) + radius - h.bound()).abs() <= act_tol)
        .map(|h| h.normal())
        .collect();
    let unique = active.len() >= dim + 1
        && crate::geometry::positively_spans(&active, dim) == crate::geometry::SpanningVerdict::Spanning;

    if unique {
        // Polish the basic optimum with a fresh direct solve on the active
        // constraints; tableau rounding compounds over pivots, a one-shot
        // solve on the original rows does not.
        let (radius, center) = polish_chebyshev(hs, dim, radius, &x0, scale);
        return Ok(InradiusResult { radius, center, non_unique: false });
    }

    // Lexicographically smallest point of the optimal face
    // Q = {x : <u_i, x> <= b_i - r*}, slightly inflated so the rounded r*
    // cannot make it empty.
    let slack = 1e-12 * scale;
    let mut rows: Vec<Vec<f64>> = hs.iter().map(|h| h.normal().coords().to_vec()).collect();
    let mut rhs: Vec<f64> = hs.iter().map(|h| h.bound() - radius + slack).collect();
    let mut center = vec![0.0; dim];
    for j in 0..dim {
        let mut cost = vec![0.0; dim];
        cost[j] = 1.0;
        center[j] = linear_minimize(&rows, &rhs, &cost, dim)
            .ok_or(FunctionalError::Geometry(GeometryError::EmptyCell))?[j];
        // Pin coordinate j before minimizing the next one.
        let mut up = vec![0.0; dim];
        up[j] = 1.0;
        rows.push(up.clone());
        rhs.push(center[j] + slack);
        let mut down = up;
        down[j] = -1.0;
        rows.push(down);
        rhs.push(-center[j] + slack);
    }

    Ok(InradiusResult { radius, center: Point::new(&center), non_unique: true })
}

/// One Newton-style refinement of a Chebyshev optimum: solve the linear
/// system of `dim + 1` active constraints `<u_i, x> + r = b_i` directly and
/// keep the result if it stays feasible and fits the actives better.
fn polish_chebyshev(
    hs: &[crate::geometry::Halfspace],
    dim: usize,
    radius: f64,
    x0: &[f64],
    scale: f64,
) -> (f64, Point) {
    let x0p = Point::new(x0);
    let act_tol = 1e-6 * scale;
    let active: Vec<usize> = (0..hs.len())
        .filter(|&i| (hs[i].normal().dot(&x0p) + radius - hs[i].bound()).abs() <= act_tol)
        .collect();
    if active.len() < dim + 1 {
        return (radius, x0p);
    }
    let mut rows = Vec::with_capacity(dim + 1);
    let mut rhs = Vec::with_capacity(dim + 1);
    for &i in active.iter().take(dim + 1) {
        let mut row = hs[i].normal().coords().to_vec();
        row.push(1.0);
        rows.push(Point::new(&row));
        rhs.push(hs[i].bound());
    }
    let Ok((sol, _cond)) = crate::geometry::vector::solve_with_condition(&rows, &rhs) else {
        return (radius, x0p);
    };
    let center = Point::new(&sol.coords()[..dim]);
    let r = sol.coords()[dim];
    let feasible = hs
        .iter()
        .all(|h| h.normal().dot(&center) + r <= h.bound() + 1e-9 * scale);
    if feasible && (r - radius).abs() <= act_tol {
        (r, center)
    } else {
        (radius, x0p)
    }
}

// ---------------------------------------------------------------------------
// Circumradius (smallest enclosing ball)
// ---------------------------------------------------------------------------

/// Smallest ball with all given points on its boundary (within their affine
/// hull); `None` when the points are affinely dependent beyond repair.
fn circumsphere(points: &[Point]) -> Option<EnclosingBall> {
    match points.len() {
        0 => None,
        1 => Some(EnclosingBall { radius: 0.0, center: points[0] }),
        _ => {
            let base = points[0];
            let k = points.len() - 1;
            let diffs: Vec<Point> = points[1..].iter().map(|p| *p - base).collect();
            let mut rows = Vec::with_capacity(k);
            let mut rhs = Vec::with_capacity(k);
            for di in &diffs {
                let mut row = Vec::with_capacity(k);
                for dj in &diffs {
                    row.push(2.0 * di.dot(dj));
                }
                rows.push(row);
                rhs.push(di.dot(di));
            }
            // Tiny symmetric solve by Gaussian elimination. The singularity
            // guard is relative to the Gram scale so that very small support
            // sets (heavily conditioned cells) are not misread as degenerate.
            let gram_scale = rows
                .iter()
                .flat_map(|r| r.iter().map(|v| v.abs()))
                .fold(1e-300, f64::max);
            let mut a = rows;
            let mut b = rhs;
            for col in 0..k {
                let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
                if a[piv][col].abs() < 1e-13 * gram_scale {
                    return None;
                }
                a.swap(col, piv);
                b.swap(col, piv);
                for row in 0..k {
                    if row != col {
                        let f = a[row][col] / a[col][col];
                        for c in col..k {
                            a[row][c] -= f * a[col][c];
                        }
                        b[row] -= f * b[col];
                    }
                }
            }
            let coeffs: Vec<f64> = (0..k).map(|i| b[i] / a[i][i]).collect();
            let mut center = base;
            for (c, d) in coeffs.iter().zip(&diffs) {
                center = center + d.scale(*c);
            }
            let radius = points.iter().map(|p| center.dist(p)).fold(0.0, f64::max);
            Some(EnclosingBall { radius, center })
        }
    }
}

/// Smallest ball containing all support points, found by trying every
/// boundary subset; exact for the tiny support sets Welzl produces. Exactly
/// affinely dependent supports fall back to the centroid ball, which still
/// encloses everything.
fn ball_of_support(support: &[Point]) -> Option<EnclosingBall> {
    if support.is_empty() {
        return None;
    }
    let mut best: Option<EnclosingBall> = None;
    let n = support.len();
    for mask in 1u32..(1 << n) {
        let subset: Vec<Point> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| support[i]).collect();
        if let Some(ball) = circumsphere(&subset) {
            if support.iter().all(|p| ball.contains(p))
                && best.as_ref().map_or(true, |b| ball.radius < b.radius)
            {
                best = Some(ball);
            }
        }
    }
    best.or_else(|| {
        let mut center = Point::zeros(support[0].dim());
        for p in support {
            center = center + *p;
        }
        center = center.scale(1.0 / n as f64);
        let radius = support.iter().map(|p| center.dist(p)).fold(0.0, f64::max) * (1.0 + 1e-12);
        Some(EnclosingBall { radius, center })
    })
}

fn welzl(points: &mut [Point], end: usize, support: &mut Vec<Point>, dim: usize) -> Option<EnclosingBall> {
    let mut ball = ball_of_support(support);
    if support.len() == dim + 1 {
        return ball;
    }
    for k in 0..end {
        let p = points[k];
        if ball.as_ref().map_or(true, |b| !b.contains(&p)) {
            support.push(p);
            ball = welzl(points, k, support, dim);
            support.pop();
            points[..=k].rotate_right(1);
        }
    }
    ball
}

/// Minimum enclosing ball of the vertex set (move-to-front Welzl recursion
/// over a deterministically shuffled order).
pub fn circumradius(cell: &ConvexCell) -> EnclosingBall {
    smallest_enclosing_ball(cell.vertices(), cell.dim())
}

pub fn smallest_enclosing_ball(points: &[Point], dim: usize) -> EnclosingBall {
    assert!(!points.is_empty());
    let mut pts = points.to_vec();
    // Deterministic Fisher-Yates so replays are bit-identical.
    let mut state = 0x9e3779b97f4a7c15u64 ^ (pts.len() as u64);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for i in (1..pts.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        pts.swap(i, j);
    }
    let n = pts.len();
    welzl(&mut pts, n, &mut Vec::new(), dim)
        .expect("nonempty point set always has an enclosing ball")
}

// ---------------------------------------------------------------------------
// Elementary functionals
// ---------------------------------------------------------------------------

/// Maximal pairwise vertex distance.
pub fn diameter(cell: &ConvexCell) -> f64 {
    let v = cell.vertices();
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].dist(&v[j]));
        }
    }
    best
}

pub fn perimeter(cell: &ConvexCell) -> Result<f64, FunctionalError> {
    if cell.dim() != 2 {
        return Err(FunctionalError::WrongDimension(cell.dim()));
    }
    let v = cell.vertices();
    let n = v.len();
    Ok((0..n).map(|i| v[i].dist(&v[(i + 1) % n])).sum())
}

pub fn surface_area(cell: &ConvexCell) -> Result<f64, FunctionalError> {
    if cell.dim() != 3 {
        return Err(FunctionalError::WrongDimension(cell.dim()));
    }
    let v = cell.vertices();
    let mut total = 0.0;
    for ring in cell.faces() {
        let mut n = Point::zeros(3);
        let a = v[ring[0]];
        for k in 1..ring.len() - 1 {
            n = n + (v[ring[k]] - a).cross(&(v[ring[k + 1]] - a));
        }
        total += 0.5 * n.norm();
    }
    Ok(total)
}

/// Area by the shoelace formula (dimension 2) or a signed fan decomposition
/// from the vertex mean (dimension 3).
pub fn volume(cell: &ConvexCell) -> f64 {
    match cell.dim() {
        2 => {
            let v = cell.vertices();
            let n = v.len();
            0.5 * (0..n)
                .map(|i| {
                    let a = v[i];
                    let b = v[(i + 1) % n];
                    a[0] * b[1] - b[0] * a[1]
                })
                .sum::<f64>()
        }
        _ => {
            let v = cell.vertices();
            let mut refp = Point::zeros(3);
            for p in v {
                refp = refp + *p;
            }
            refp = refp.scale(1.0 / v.len() as f64);
            let mut total = 0.0;
            for ring in cell.faces() {
                let a = v[ring[0]] - refp;
                for k in 1..ring.len() - 1 {
                    let b = v[ring[k]] - refp;
                    let c = v[ring[k + 1]] - refp;
                    total += a.dot(&b.cross(&c)) / 6.0;
                }
            }
            total
        }
    }
}

/// Volume centroid (center of mass of the solid body).
pub fn centroid(cell: &ConvexCell) -> Point {
    match cell.dim() {
        2 => {
            let v = cell.vertices();
            let n = v.len();
            let mut area = 0.0;
            let mut cx = 0.0;
            let mut cy = 0.0;
            for i in 0..n {
                let a = v[i];
                let b = v[(i + 1) % n];
                let w = a[0] * b[1] - b[0] * a[1];
                area += w;
                cx += (a[0] + b[0]) * w;
                cy += (a[1] + b[1]) * w;
            }
            area *= 0.5;
            Point::new(&[cx / (6.0 * area), cy / (6.0 * area)])
        }
        _ => {
            let v = cell.vertices();
            let mut refp = Point::zeros(3);
            for p in v {
                refp = refp + *p;
            }
            refp = refp.scale(1.0 / v.len() as f64);
            let mut total = 0.0;
            let mut acc = Point::zeros(3);
            for ring in cell.faces() {
                let a = v[ring[0]];
                for k in 1..ring.len() - 1 {
                    let b = v[ring[k]];
                    let c = v[ring[k + 1]];
                    let w = (a - refp).dot(&(b - refp).cross(&(c - refp))) / 6.0;
                    let tet_centroid = (refp + a + b + c).scale(0.25);
                    acc = acc + tet_centroid.scale(w);
                    total += w;
                }
            }
            acc.scale(1.0 / total)
        }
    }
}

// ---------------------------------------------------------------------------
// Phi-content
// ---------------------------------------------------------------------------

/// `Phi(K) = int h(K, u) dphi(u)`.
///
/// Every exposed distribution family admits an exact route: discrete parts
/// sum support values over the atom pairs; the planar continuous parts
/// integrate the support function in closed form over the normal fan of the
/// polygon (the Cauchy formula `perimeter / 2 pi` is the isotropic special
/// case); spatial isotropy uses the edge/exterior-angle form of the mean
/// width. [`phi_content_quadrature`] provides the independent numerical route.
pub fn phi_content(cell: &ConvexCell, dist: &DirectionalDistribution) -> Result<f64, FunctionalError> {
    match dist {
        DirectionalDistribution::Isotropic => match cell.dim() {
            2 => Ok(perimeter(cell)? / (2.0 * std::f64::consts::PI)),
            3 => {
                let v = cell.vertices();
                let hs = cell.halfspaces();
                let mut sum = 0.0;
                for (a, b, f1, f2) in cell.edges()? {
                    let len = v[a].dist(&v[b]);
                    let cosang = hs[f1].normal().dot_unit(&hs[f2].normal()).clamp(-1.0, 1.0);
                    sum += len * cosang.acos();
                }
                Ok(sum / (8.0 * std::f64::consts::PI))
            }
            d => Err(FunctionalError::WrongDimension(d)),
        },
        DirectionalDistribution::Discrete { pairs } => {
            let mut total = 0.0;
            for p in pairs {
                let plus = cell.support_function(&p.dir);
                let minus = cell.support_function(&p.dir.flipped());
                total += p.mass * 0.5 * (plus + minus);
            }
            Ok(total)
        }
        DirectionalDistribution::Density { kind, .. } => {
            if cell.dim() != 2 || kind.dim() != 2 {
                return Err(FunctionalError::WrongDimension(cell.dim()));
            }
            Ok(planar_fan_integral(cell, kind))
        }
        DirectionalDistribution::Mixture { parts } => {
            let mut total = 0.0;
            for (w, d) in parts {
                total += w * phi_content(cell, d)?;
            }
            Ok(total)
        }
    }
}

/// Exact integral of `h(K, u(theta)) rho(theta)` over the polygon's normal
/// fan: vertex `i` attains the support function on the angular arc between
/// the outward normals of its two incident edges.
fn planar_fan_integral(cell: &ConvexCell, kind: &DensityKind) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let verts = cell.vertices();
    let hs = cell.halfspaces();
    let n = verts.len();
    let angle = |i: usize| {
        let u = hs[i].normal();
        u[1].atan2(u[0])
    };
    let mut total = 0.0;
    for i in 0..n {
        // Vertex i sits between edge i-1 and edge i.
        let prev = (i + n - 1) % n;
        let a = angle(prev);
        let span = (angle(i) - a).rem_euclid(tau);
        total += fan_antiderivative(kind, &verts[i], a + span) - fan_antiderivative(kind, &verts[i], a);
    }
    total
}

fn fan_antiderivative(kind: &DensityKind, v: &Point, theta: f64) -> f64 {
    match kind {
        DensityKind::Cos2Theta { amplitude } => {
            let a = *amplitude;
            let tau = 2.0 * std::f64::consts::PI;
            let sx = theta.sin() + 0.5 * a * (theta.sin() + (3.0 * theta).sin() / 3.0);
            let sy = -theta.cos() + 0.5 * a * (theta.cos() - (3.0 * theta).cos() / 3.0);
            (v[0] * sx + v[1] * sy) / tau
        }
    }
}

/// Planar angular quadrature of `Phi` with doubling refinement; the
/// independent check of the closed-form routes. Errors out if the target
/// relative accuracy is not met below the node cap.
pub fn phi_content_quadrature(
    cell: &ConvexCell,
    dist: &DirectionalDistribution,
    target_rel: f64,
    max_nodes: usize,
) -> Result<f64, FunctionalError> {
    if cell.dim() != 2 {
        return Err(FunctionalError::WrongDimension(cell.dim()));
    }
    // Continuous angular density of the distribution plus exact atom terms.
    fn split(dist: &DirectionalDistribution, weight: f64, dens: &mut Vec<(f64, DensityKind)>, iso: &mut f64, atoms: &mut f64, cell: &ConvexCell) {
        match dist {
            DirectionalDistribution::Isotropic => *iso += weight,
            DirectionalDistribution::Density { kind, .. } => dens.push((weight, *kind)),
            DirectionalDistribution::Discrete { pairs } => {
                for p in pairs {
                    let h = 0.5 * (cell.support_function(&p.dir) + cell.support_function(&p.dir.flipped()));
                    *atoms += weight * p.mass * h;
                }
            }
            DirectionalDistribution::Mixture { parts } => {
                for (w, d) in parts {
                    split(d, weight * w, dens, iso, atoms, cell);
                }
            }
        }
    }
    let mut dens = Vec::new();
    let mut iso = 0.0;
    let mut atoms = 0.0;
    split(dist, 1.0, &mut dens, &mut iso, &mut atoms, cell);

    let tau = 2.0 * std::f64::consts::PI;
    let rho = |theta: f64| {
        let mut r = iso / tau;
        for (w, kind) in &dens {
            r += w * kind.planar_density(theta);
        }
        r
    };
    let h = |theta: f64| {
        let u = UnitVector::from_angle(theta);
        cell.support_function(&u)
    };
    let integral_at = |nodes: usize| {
        let step = tau / nodes as f64;
        (0..nodes).map(|k| h(k as f64 * step) * rho(k as f64 * step) * step).sum::<f64>()
    };
    let mut nodes = 64;
    let mut prev = integral_at(nodes);
    while nodes * 2 <= max_nodes {
        nodes *= 2;
        let cur = integral_at(nodes);
        if (cur - prev).abs() <= target_rel * cur.abs().max(1e-300) {
            return Ok(cur + atoms);
        }
        prev = cur;
    }
    Err(FunctionalError::QuadratureNotConverged)
}

// ---------------------------------------------------------------------------
// Shape map
// ---------------------------------------------------------------------------

pub fn evaluate_all(cell: &ConvexCell, dist: &DirectionalDistribution) -> Result<FunctionalValues, FunctionalError> {
    let boundary = match cell.dim() {
        2 => perimeter(cell)?,
        3 => surface_area(cell)?,
        d => return Err(FunctionalError::WrongDimension(d)),
    };
    Ok(FunctionalValues {
        phi_content: phi_content(cell, dist)?,
        inradius: inradius(cell)?.radius,
        circumradius: circumradius(cell).radius,
        diameter: diameter(cell),
        volume: volume(cell),
        boundary,
    })
}

/// Translates the cell to its center and rescales to unit phi-content,
/// returning the normalized body and its summary. The normalization is
/// re-verified to `1e-9`.
pub fn shape(
    cell: &ConvexCell,
    center_kind: CenterFunction,
    dist: &DirectionalDistribution,
) -> Result<(ConvexCell, ShapeSummary), FunctionalError> {
    let c = match center_kind {
        CenterFunction::Incenter => inradius(cell)?.center,
        CenterFunction::Centroid => centroid(cell),
    };
    let phi = phi_content(cell, dist)?;
    if !(phi > 0.0) {
        return Err(FunctionalError::NormalizationFailed);
    }
    let normalized = cell.translated(&(-c)).scaled(1.0 / phi);
    let phi_check = phi_content(&normalized, dist)?;
    if (phi_check - 1.0).abs() > 1e-9 {
        return Err(FunctionalError::NormalizationFailed);
    }
    let summary = summarize(&normalized, dist)?;
    Ok((normalized, summary))
}

/// Shape summary straight from raw functional values; every field is scale-
/// and translation-free, so this agrees with [`summarize`] on the normalized
/// body without building it.
pub fn summary_from_values(values: &FunctionalValues, fcount: usize, dim: usize) -> ShapeSummary {
    let iso_ratio = match dim {
        2 => 4.0 * std::f64::consts::PI * values.volume / (values.boundary * values.boundary),
        _ => {
            36.0 * std::f64::consts::PI * values.volume * values.volume
                / (values.boundary * values.boundary * values.boundary)
        }
    };
    ShapeSummary {
        fcount,
        phi: 1.0,
        circ_over_in: values.circumradius / values.inradius,
        iso_ratio,
        diam_norm: values.diameter / values.phi_content,
    }
}

/// Shape summary of an already normalized body.
pub fn summarize(normalized: &ConvexCell, dist: &DirectionalDistribution) -> Result<ShapeSummary, FunctionalError> {
    let _ = dist;
    let r = inradius(normalized)?.radius;
    let ball = circumradius(normalized);
    let vol = volume(normalized);
    let iso_ratio = match normalized.dim() {
        2 => {
            let p = perimeter(normalized)?;
            4.0 * std::f64::consts::PI * vol / (p * p)
        }
        _ => {
            let s = surface_area(normalized)?;
            36.0 * std::f64::consts::PI * vol * vol / (s * s * s)
        }
    };
    Ok(ShapeSummary {
        fcount: normalized.facet_count(),
        phi: 1.0,
        circ_over_in: ball.radius / r,
        iso_ratio,
        diam_norm: diameter(normalized),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DirectionTuple, Halfspace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn unit_square() -> ConvexCell {
        ConvexCell::convex_polygon(&[
            Point::new(&[0.0, 0.0]),
            Point::new(&[1.0, 0.0]),
            Point::new(&[1.0, 1.0]),
            Point::new(&[0.0, 1.0]),
        ])
        .unwrap()
    }

    fn equilateral_cell() -> ConvexCell {
        DirectionTuple::new(vec![
            UnitVector::from_angle(0.0),
            UnitVector::from_angle(2.0 * std::f64::consts::PI / 3.0),
            UnitVector::from_angle(4.0 * std::f64::consts::PI / 3.0),
        ])
        .unwrap()
        .tangent_simplex()
        .unwrap()
    }

    fn regular_tetra_cell() -> ConvexCell {
        DirectionTuple::new(vec![
            UnitVector::new(&[1.0, 1.0, 1.0]).unwrap(),
            UnitVector::new(&[1.0, -1.0, -1.0]).unwrap(),
            UnitVector::new(&[-1.0, 1.0, -1.0]).unwrap(),
            UnitVector::new(&[-1.0, -1.0, 1.0]).unwrap(),
        ])
        .unwrap()
        .tangent_simplex()
        .unwrap()
    }

    fn axes_2d() -> DirectionalDistribution {
        DirectionalDistribution::discrete(vec![
            (UnitVector::new(&[1.0, 0.0]).unwrap(), 0.5),
            (UnitVector::new(&[0.0, 1.0]).unwrap(), 0.5),
        ])
        .unwrap()
    }

    #[test]
    fn inradius_examples() {
        let sq = inradius(&unit_square()).unwrap();
        assert!((sq.radius - 0.5).abs() < 1e-9);
        assert!(sq.center.dist(&Point::new(&[0.5, 0.5])) < 1e-9);
        assert!(!sq.non_unique);

        let tri = ConvexCell::convex_polygon(&[
            Point::new(&[0.0, 0.0]),
            Point::new(&[4.0, 0.0]),
            Point::new(&[0.0, 3.0]),
        ])
        .unwrap();
        let t = inradius(&tri).unwrap();
        assert!((t.radius - 1.0).abs() < 1e-9, "r = {}", t.radius);
        assert!(t.center.dist(&Point::new(&[1.0, 1.0])) < 1e-9);
    }

    #[test]
    fn inradius_rectangle_ties_are_flagged_and_lex_minimal() {
        let rect = ConvexCell::convex_polygon(&[
            Point::new(&[0.0, 0.0]),
            Point::new(&[2.0, 0.0]),
            Point::new(&[2.0, 1.0]),
            Point::new(&[0.0, 1.0]),
        ])
        .unwrap();
        let r = inradius(&rect).unwrap();
        assert!((r.radius - 0.5).abs() < 1e-9);
        assert!(r.non_unique);
        // Optimal centers form the segment [0.5, 1.5] x {0.5}.
        assert!(r.center.dist(&Point::new(&[0.5, 0.5])) < 1e-7, "center {:?}", r.center);
    }

    #[test]
    fn inradius_matches_grid_search_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pts: Vec<Point> = (0..8)
                .map(|_| Point::new(&[rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0]))
                .collect();
            let Ok(cell) = ConvexCell::convex_polygon(&pts) else { continue };
            let got = inradius(&cell).unwrap();
            // Dense grid over the bounding box. The slack is 1-Lipschitz, so
            // the grid maximum is within step * sqrt(2) / 2 of the truth.
            let slack = |x: f64, y: f64| {
                let p = Point::new(&[x, y]);
                cell.halfspaces()
                    .iter()
                    .map(|h| h.bound() - h.normal().dot(&p))
                    .fold(f64::INFINITY, f64::min)
            };
            let xs: Vec<f64> = cell.vertices().iter().map(|v| v[0]).collect();
            let ys: Vec<f64> = cell.vertices().iter().map(|v| v[1]).collect();
            let (x0, x1) = (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            let (y0, y1) = (ys.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            let step = 1e-3;
            let mut best = f64::NEG_INFINITY;
            let nx = ((x1 - x0) / step).ceil() as usize;
            let ny = ((y1 - y0) / step).ceil() as usize;
            for i in 0..=nx {
                for j in 0..=ny {
                    best = best.max(slack(x0 + step * i as f64, y0 + step * j as f64));
                }
            }
            assert!((got.radius - best).abs() < 1e-3, "lp {} grid {}", got.radius, best);
        }
    }

    #[test]
    fn incenter_translation_scale_covariance() {
        let tri = ConvexCell::convex_polygon(&[
            Point::new(&[0.0, 0.0]),
            Point::new(&[4.0, 0.0]),
            Point::new(&[0.0, 3.0]),
        ])
        .unwrap();
        let base = inradius(&tri).unwrap();
        let shift = Point::new(&[-1.5, 2.0]);
        let t = 3.25;
        let moved = inradius(&tri.scaled(t).translated(&shift)).unwrap();
        assert!((moved.radius - t * base.radius).abs() < 1e-9);
        assert!(moved.center.dist(&(base.center.scale(t) + shift)) < 1e-8);
    }

    #[test]
    fn circumradius_examples() {
        let sq = circumradius(&unit_square());
        assert!((sq.radius - 0.5 * 2.0_f64.sqrt()).abs() < 1e-12);
        assert!(sq.center.dist(&Point::new(&[0.5, 0.5])) < 1e-12);

        let eq = circumradius(&equilateral_cell());
        assert!((eq.radius - 2.0).abs() < 1e-12);
        assert!(eq.center.norm() < 1e-9);
    }

    #[test]
    fn circumradius_matches_exhaustive_oracle_3d() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..15 {
            let pts: Vec<Point> = (0..12)
                .map(|_| {
                    Point::new(&[
                        rng.gen::<f64>() * 2.0 - 1.0,
                        rng.gen::<f64>() * 2.0 - 1.0,
                        rng.gen::<f64>() * 2.0 - 1.0,
                    ])
                })
                .collect();
            let got = smallest_enclosing_ball(&pts, 3);
            // O(n^4) oracle over all support subsets of size <= 4.
            let mut best = f64::INFINITY;
            let n = pts.len();
            let mut consider = |subset: &[Point]| {
                if let Some(b) = circumsphere(subset) {
                    if pts.iter().all(|p| b.contains(p)) {
                        best = best.min(b.radius);
                    }
                }
            };
            for i in 0..n {
                consider(&[pts[i]]);
                for j in i + 1..n {
                    consider(&[pts[i], pts[j]]);
                    for k in j + 1..n {
                        consider(&[pts[i], pts[j], pts[k]]);
                        for l in k + 1..n {
                            consider(&[pts[i], pts[j], pts[k], pts[l]]);
                        }
                    }
                }
            }
            assert!((got.radius - best).abs() < 1e-9, "welzl {} oracle {}", got.radius, best);
        }
    }

    #[test]
    fn elementary_functionals_on_square() {
        let sq = unit_square();
        assert!((diameter(&sq) - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((perimeter(&sq).unwrap() - 4.0).abs() < 1e-12);
        assert!((volume(&sq) - 1.0).abs() < 1e-12);
        assert!(centroid(&sq).dist(&Point::new(&[0.5, 0.5])) < 1e-12);
    }

    #[test]
    fn equilateral_perimeter_and_area() {
        let eq = equilateral_cell();
        let s3 = 3.0_f64.sqrt();
        assert!((perimeter(&eq).unwrap() - 6.0 * s3).abs() < 1e-9);
        assert!((volume(&eq) - 3.0 * s3).abs() < 1e-9);
    }

    #[test]
    fn tetrahedron_volume_surface_tangency_identity() {
        let tet = regular_tetra_cell();
        let s3 = 3.0_f64.sqrt();
        let vol = volume(&tet);
        let surf = surface_area(&tet).unwrap();
        assert!((vol - 8.0 * s3).abs() < 1e-9, "vol {vol}");
        assert!((surf - 24.0 * s3).abs() < 1e-9, "surf {surf}");
        // V = S r / 3 with inradius 1.
        let r = inradius(&tet).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-9);
        assert!((vol - surf * r.radius / 3.0).abs() < 1e-9);
        assert!(r.center.norm() < 1e-9);
    }

    #[test]
    fn phi_content_examples() {
        // Unit square under the axis atoms: h-values 1,0,1,0 with masses 1/4.
        let sq = unit_square();
        assert!((phi_content(&sq, &axes_2d()).unwrap() - 0.5).abs() < 1e-12);

        // Equilateral tangent triangle under isotropy: perimeter / 2 pi.
        let eq = equilateral_cell();
        let phi = phi_content(&eq, &DirectionalDistribution::isotropic()).unwrap();
        let expect = 3.0 * 3.0_f64.sqrt() / std::f64::consts::PI;
        assert!((phi - expect).abs() < 1e-9, "phi {phi}");
        // Independent quadrature route.
        let quad = phi_content_quadrature(&eq, &DirectionalDistribution::isotropic(), 1e-7, 1 << 20).unwrap();
        assert!((phi - quad).abs() < 1e-6 * phi);
    }

    #[test]
    fn phi_density_fan_matches_quadrature() {
        let dist = DirectionalDistribution::density_cos2theta(0.5, 1.5 / (2.0 * std::f64::consts::PI)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..10 {
            let pts: Vec<Point> = (0..7)
                .map(|_| Point::new(&[rng.gen::<f64>() * 3.0 - 1.0, rng.gen::<f64>() * 3.0 - 1.5]))
                .collect();
            let Ok(cell) = ConvexCell::convex_polygon(&pts) else { continue };
            let exact = phi_content(&cell, &dist).unwrap();
            let quad = phi_content_quadrature(&cell, &dist, 1e-8, 1 << 21).unwrap();
            assert!((exact - quad).abs() < 1e-5 * exact.abs(), "exact {exact} quad {quad}");
        }
    }

    /// Large tangent simplex in generic position (the symmetric tetrahedron
    /// would drop clipped vertices exactly onto the cube planes).
    fn big_generic_simplex() -> ConvexCell {
        let rot = |v: [f64; 3]| {
            let (a, b) = (0.3f64, 0.2f64);
            let (x, y, z) = (v[0], v[1], v[2]);
            let (x1, y1) = (x * a.cos() - y * a.sin(), x * a.sin() + y * a.cos());
            let (y2, z2) = (y1 * b.cos() - z * b.sin(), y1 * b.sin() + z * b.cos());
            UnitVector::new(&[x1, y2, z2]).unwrap()
        };
        DirectionTuple::new(vec![
            rot([1.0, 1.0, 1.0]),
            rot([1.0, -1.0, -1.0]),
            rot([-1.0, 1.0, -1.0]),
            rot([-1.0, -1.0, 1.0]),
        ])
        .unwrap()
        .tangent_simplex()
        .unwrap()
        .scaled(100.0)
    }

    #[test]
    fn phi_cube_isotropic_3d() {
        // Build the side-2 cube by clipping a large tangent simplex.
        let mut cell = big_generic_simplex();
        for (n, b) in [
            ([1.0, 0.0, 0.0], 1.0),
            ([-1.0, 0.0, 0.0], 1.0),
            ([0.0, 1.0, 0.0], 1.0),
            ([0.0, -1.0, 0.0], 1.0),
            ([0.0, 0.0, 1.0], 1.0),
            ([0.0, 0.0, -1.0], 1.0),
        ] {
            cell = cell.clip(&Halfspace::new(UnitVector::new(&n).unwrap(), b)).unwrap();
        }
        cell.validate().unwrap();
        assert_eq!(cell.facet_count(), 6);
        assert_eq!(cell.vertices().len(), 8);
        // Cube of side 2: mean width 3, phi = 3/2; edge formula.
        let phi = phi_content(&cell, &DirectionalDistribution::isotropic()).unwrap();
        assert!((phi - 1.5).abs() < 1e-9, "phi {phi}");
        assert!((volume(&cell) - 8.0).abs() < 1e-9);
        assert!((surface_area(&cell).unwrap() - 24.0).abs() < 1e-9);
    }

    #[test]
    fn phi_tetra_isotropic_matches_spherical_quadrature() {
        let tet = regular_tetra_cell();
        let phi = phi_content(&tet, &DirectionalDistribution::isotropic()).unwrap();
        // Analytic value: 6 edges of length 2 sqrt 6, exterior angle
        // arccos(-1/3), phi = sum len * angle / (8 pi).
        let expect = 6.0 * 2.0 * 6.0_f64.sqrt() * (-1.0f64 / 3.0).acos() / (8.0 * std::f64::consts::PI);
        assert!((phi - expect).abs() < 1e-12);
        // Latitude-longitude quadrature oracle of the support function.
        let n_theta = 400;
        let n_phi = 800;
        let mut acc = 0.0;
        for i in 0..n_theta {
            let theta = (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
            for j in 0..n_phi {
                let ph = (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / n_phi as f64;
                let u = UnitVector::new(&[theta.sin() * ph.cos(), theta.sin() * ph.sin(), theta.cos()])
                    .unwrap();
                acc += tet.support_function(&u) * theta.sin();
            }
        }
        let quad = acc * std::f64::consts::PI / n_theta as f64 * 2.0 * std::f64::consts::PI
            / n_phi as f64
            / (4.0 * std::f64::consts::PI);
        assert!((phi - quad).abs() < 2e-3, "phi {phi} quad {quad}");
    }

    #[test]
    fn phi_bounded_by_circumradius() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let dists = [
            DirectionalDistribution::isotropic(),
            axes_2d(),
            DirectionalDistribution::density_cos2theta(0.7, 0.28).unwrap(),
        ];
        for _ in 0..20 {
            let pts: Vec<Point> = (0..6)
                .map(|_| Point::new(&[rng.gen::<f64>() * 6.0 - 3.0, rng.gen::<f64>() * 6.0 - 3.0]))
                .collect();
            let Ok(cell) = ConvexCell::convex_polygon(&pts) else { continue };
            let big_r = circumradius(&cell).radius;
            for d in &dists {
                let phi = phi_content(&cell, d).unwrap();
                assert!(phi <= big_r + 1e-9, "phi {phi} R {big_r}");
            }
        }
    }

    #[test]
    fn shape_normalizes_and_is_scale_translation_free() {
        let dist = DirectionalDistribution::isotropic();
        let eq = equilateral_cell();
        let (norm, summary) = shape(&eq, CenterFunction::Incenter, &dist).unwrap();
        assert!((perimeter(&norm).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
        let expect_iso = std::f64::consts::PI * 3.0_f64.sqrt() / 9.0;
        assert!((summary.iso_ratio - expect_iso).abs() < 1e-9, "iso {}", summary.iso_ratio);
        assert!((summary.circ_over_in - 2.0).abs() < 1e-9);

        let mut rng = ChaCha12Rng::seed_from_u64(37);
        for _ in 0..10 {
            let t = rng.gen::<f64>() * 9.9 + 0.1;
            let shift = Point::new(&[rng.gen::<f64>() * 8.0 - 4.0, rng.gen::<f64>() * 8.0 - 4.0]);
            let (_, s2) = shape(&eq.scaled(t).translated(&shift), CenterFunction::Incenter, &dist).unwrap();
            assert!((s2.iso_ratio - summary.iso_ratio).abs() < 1e-8);
            assert!((s2.circ_over_in - summary.circ_over_in).abs() < 1e-8);
            assert!((s2.diam_norm - summary.diam_norm).abs() < 1e-8);
        }
    }

    #[test]
    fn homogeneity_and_monotonicity() {
        let dist = DirectionalDistribution::isotropic();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..10 {
            let pts: Vec<Point> = (0..7)
                .map(|_| Point::new(&[rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0]))
                .collect();
            let Ok(cell) = ConvexCell::convex_polygon(&pts) else { continue };
            let vals = evaluate_all(&cell, &dist).unwrap();
            let t = rng.gen::<f64>() * 5.0 + 0.2;
            let scaled = evaluate_all(&cell.scaled(t), &dist).unwrap();
            for sigma in [
                SizeFunctional::Inradius,
                SizeFunctional::Circumradius,
                SizeFunctional::Diameter,
                SizeFunctional::Perimeter,
                SizeFunctional::Volume,
                SizeFunctional::PhiContent,
            ] {
                let k = sigma.degree(2);
                let lhs = scaled.get(sigma);
                let rhs = t.powf(k) * vals.get(sigma);
                assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs(), "{sigma:?}: {lhs} vs {rhs}");
            }
            // Clipping shrinks every functional.
            let hs = Halfspace::new(UnitVector::from_angle(rng.gen::<f64>() * 6.28), 0.3);
            if let Ok(cut) = cell.clip(&hs) {
                let cvals = evaluate_all(&cut, &dist).unwrap();
                for sigma in [
                    SizeFunctional::Inradius,
                    SizeFunctional::Circumradius,
                    SizeFunctional::Diameter,
                    SizeFunctional::Perimeter,
                    SizeFunctional::Volume,
                    SizeFunctional::PhiContent,
                ] {
                    assert!(cvals.get(sigma) <= vals.get(sigma) + 1e-9, "{sigma:?}");
                }
            }
        }
    }

    #[test]
    fn sandwich_inequality() {
        let dist = DirectionalDistribution::isotropic();
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        for _ in 0..15 {
            let pts: Vec<Point> = (0..6)
                .map(|_| Point::new(&[rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0]))
                .collect();
            let Ok(cell) = ConvexCell::convex_polygon(&pts) else { continue };
            let vals = evaluate_all(&cell, &dist).unwrap();
            for sigma in [
                SizeFunctional::Inradius,
                SizeFunctional::Circumradius,
                SizeFunctional::Diameter,
                SizeFunctional::Perimeter,
                SizeFunctional::Volume,
                SizeFunctional::PhiContent,
            ] {
                let k = sigma.degree(2);
                let c = sigma.unit_ball_value(2).powf(1.0 / k);
                let s = vals.get(sigma).powf(1.0 / k);
                assert!(c * vals.inradius <= s + 1e-9, "{sigma:?} lower");
                assert!(s <= c * vals.circumradius + 1e-9, "{sigma:?} upper");
            }
        }
    }

    #[test]
    fn centroid_covariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        let pts: Vec<Point> = (0..6)
            .map(|_| Point::new(&[rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0]))
            .collect();
        let cell = ConvexCell::convex_polygon(&pts).unwrap();
        let c = centroid(&cell);
        let t = 2.5;
        let shift = Point::new(&[1.0, -7.0]);
        let moved = centroid(&cell.scaled(t).translated(&shift));
        assert!(moved.dist(&(c.scale(t) + shift)) < 1e-10);
    }
}
