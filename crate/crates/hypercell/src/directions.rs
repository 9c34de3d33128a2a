//! Directional distributions: even probability measures on the unit sphere
//! driving the hyperplane normals, plus the structural predicates on their
//! support (minimal facet count, atom detection, size-bias envelopes).

use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::{positively_spans, SpanningVerdict, UnitVector};

/// Cap on the number of signed support directions enumerated by `n_min`.
pub const SUPPORT_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DirectionsError {
    #[error("density exceeds its configured envelope at a sampled point ({value:.6e} > {bound:.6e})")]
    EnvelopeViolation { value: f64, bound: f64 },
    #[error("discrete support holds {0} signed directions, above the cap")]
    SupportTooLarge(usize),
    #[error("discrete support is contained in a great circle")]
    GreatCircleSupport,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
}

/// Named density families exposed through the configuration surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityKind {
    /// Planar density `rho(theta) = (1 + amplitude cos 2 theta) / (2 pi)`.
    Cos2Theta { amplitude: f64 },
}

impl DensityKind {
    pub fn dim(&self) -> usize {
        match self {
            DensityKind::Cos2Theta { .. } => 2,
        }
    }

    /// Density against the angular Lebesgue measure, already symmetrized over
    /// the antipodal pair.
    pub fn planar_density(&self, theta: f64) -> f64 {
        match self {
            DensityKind::Cos2Theta { amplitude } => {
                let raw = |t: f64| (1.0 + amplitude * (2.0 * t).cos()) / (2.0 * std::f64::consts::PI);
                0.5 * (raw(theta) + raw(theta + std::f64::consts::PI))
            }
        }
    }
}

/// One antipodal atom pair `{u, -u}` with its shared mass; the representative
/// carries a lexicographically nonnegative leading coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPair {
    pub dir: UnitVector,
    pub mass: f64,
}

/// An even probability measure on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectionalDistribution {
    Isotropic,
    Density { kind: DensityKind, bound: f64 },
    Discrete { pairs: Vec<AtomPair> },
    Mixture { parts: Vec<(f64, DirectionalDistribution)> },
}

fn canonical(u: UnitVector) -> UnitVector {
    for k in 0..u.dim() {
        if u[k] > 1e-12 {
            return u;
        }
        if u[k] < -1e-12 {
            return u.flipped();
        }
    }
    u
}

impl DirectionalDistribution {
    pub fn isotropic() -> Self {
        DirectionalDistribution::Isotropic
    }

    /// Builds a discrete distribution from atom pairs. Masses must be positive
    /// and sum to one; pairs are canonicalized and merged. The great-circle
    /// check on the support happens in [`Self::validate_support`], since a
    /// component used inside a mixture need not span on its own.
    pub fn discrete(atoms: Vec<(UnitVector, f64)>) -> Result<Self, DirectionsError> {
        if atoms.is_empty() {
            return Err(DirectionsError::InvalidDistribution("no atoms"));
        }
        let dim = atoms[0].0.dim();
        if atoms.iter().any(|(u, _)| u.dim() != dim) {
            return Err(DirectionsError::InvalidDistribution("mixed atom dimensions"));
        }
        if atoms.iter().any(|(_, m)| !(*m > 0.0)) {
            return Err(DirectionsError::InvalidDistribution("atom masses must be positive"));
        }
        let total: f64 = atoms.iter().map(|(_, m)| m).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(DirectionsError::InvalidDistribution("atom masses must sum to 1"));
        }
        let mut pairs: Vec<AtomPair> = Vec::new();
        for (u, m) in atoms {
            let cu = canonical(u);
            match pairs.iter_mut().find(|p| p.dir.dot_unit(&cu) >= 1.0 - 1e-12) {
                Some(p) => p.mass += m,
                None => pairs.push(AtomPair { dir: cu, mass: m }),
            }
        }
        Ok(DirectionalDistribution::Discrete { pairs })
    }

    /// Checks that the measure makes sense in dimension `d`: the dimension is
    /// compatible and the support is not contained in a great circle. Process
    /// parameters and configuration loading call this once upfront.
    pub fn validate_support(&self, d: usize) -> Result<(), DirectionsError> {
        if !self.compatible_with_dim(d) {
            return Err(DirectionsError::InvalidDistribution("distribution pins a different dimension"));
        }
        if self.has_continuous_part() {
            return Ok(());
        }
        let pts: Vec<_> = self.weighted_atoms().iter().map(|p| p.dir.as_point()).collect();
        if crate::geometry::vector::rank(&pts, 1e-10) < d {
            return Err(DirectionsError::GreatCircleSupport);
        }
        Ok(())
    }

    /// Planar density `1 + amplitude cos(2 theta)` (normalized), with a
    /// rejection envelope `bound >= max rho` supplied by the caller and
    /// re-verified on every draw.
    pub fn density_cos2theta(amplitude: f64, bound: f64) -> Result<Self, DirectionsError> {
        if !(amplitude.abs() <= 1.0) {
            return Err(DirectionsError::InvalidDistribution("amplitude must be in [-1, 1]"));
        }
        let peak = (1.0 + amplitude.abs()) / (2.0 * std::f64::consts::PI);
        if !(bound >= peak - 1e-15) {
            return Err(DirectionsError::InvalidDistribution("envelope below the density maximum"));
        }
        Ok(DirectionalDistribution::Density { kind: DensityKind::Cos2Theta { amplitude }, bound })
    }

    pub fn mixture(parts: Vec<(f64, DirectionalDistribution)>) -> Result<Self, DirectionsError> {
        if parts.is_empty() {
            return Err(DirectionsError::InvalidDistribution("empty mixture"));
        }
        if parts.iter().any(|(w, _)| !(*w > 0.0)) {
            return Err(DirectionsError::InvalidDistribution("mixture weights must be positive"));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(DirectionsError::InvalidDistribution("mixture weights must sum to 1"));
        }
        let dims: Vec<Option<usize>> = parts.iter().map(|(_, d)| d.dim()).collect();
        let mut fixed = None;
        for d in dims.into_iter().flatten() {
            match fixed {
                None => fixed = Some(d),
                Some(f) if f == d => {}
                Some(_) => {
                    return Err(DirectionsError::InvalidDistribution("mixture components disagree on dimension"))
                }
            }
        }
        Ok(DirectionalDistribution::Mixture { parts })
    }

    /// The ambient dimension pinned by the distribution, if any (isotropic
    /// works in every dimension).
    pub fn dim(&self) -> Option<usize> {
        match self {
            DirectionalDistribution::Isotropic => None,
            DirectionalDistribution::Density { kind, .. } => Some(kind.dim()),
            DirectionalDistribution::Discrete { pairs } => Some(pairs[0].dir.dim()),
            DirectionalDistribution::Mixture { parts } => {
                parts.iter().find_map(|(_, d)| d.dim())
            }
        }
    }

    pub fn compatible_with_dim(&self, d: usize) -> bool {
        self.dim().map_or(true, |fixed| fixed == d)
    }

    /// True when the measure has no discrete component anywhere.
    pub fn is_absolutely_continuous(&self) -> bool {
        match self {
            DirectionalDistribution::Isotropic | DirectionalDistribution::Density { .. } => true,
            DirectionalDistribution::Discrete { .. } => false,
            DirectionalDistribution::Mixture { parts } => {
                parts.iter().all(|(_, d)| d.is_absolutely_continuous())
            }
        }
    }

    /// True when the measure has an absolutely continuous component.
    pub fn has_continuous_part(&self) -> bool {
        match self {
            DirectionalDistribution::Isotropic | DirectionalDistribution::Density { .. } => true,
            DirectionalDistribution::Discrete { .. } => false,
            DirectionalDistribution::Mixture { parts } => {
                parts.iter().any(|(_, d)| d.has_continuous_part())
            }
        }
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            DirectionalDistribution::Discrete { .. } => true,
            DirectionalDistribution::Mixture { parts } => parts.iter().any(|(_, d)| d.has_atoms()),
            _ => false,
        }
    }

    /// Atom pairs of all discrete components with their effective weights.
    pub fn weighted_atoms(&self) -> Vec<AtomPair> {
        match self {
            DirectionalDistribution::Discrete { pairs } => pairs.clone(),
            DirectionalDistribution::Mixture { parts } => {
                let mut out: Vec<AtomPair> = Vec::new();
                for (w, d) in parts {
                    for p in d.weighted_atoms() {
                        let scaled = AtomPair { dir: p.dir, mass: w * p.mass };
                        match out.iter_mut().find(|q| q.dir.dot_unit(&scaled.dir) >= 1.0 - 1e-12) {
                            Some(q) => q.mass += scaled.mass,
                            None => out.push(scaled),
                        }
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// `phi({u, -u})`.
    pub fn atom_mass(&self, u: &UnitVector) -> f64 {
        let cu = canonical(*u);
        self.weighted_atoms()
            .iter()
            .filter(|p| p.dir.dot_unit(&cu) >= 1.0 - 1e-12)
            .map(|p| p.mass)
            .sum()
    }

    /// Both signed copies of every atom direction.
    fn signed_support(&self) -> Vec<UnitVector> {
        let mut out = Vec::new();
        for p in self.weighted_atoms() {
            out.push(p.dir);
            out.push(p.dir.flipped());
        }
        out
    }

    /// Draws a direction from the distribution.
    pub fn sample(&self, rng: &mut impl Rng) -> Result<UnitVector, DirectionsError> {
        match self {
            DirectionalDistribution::Isotropic => Ok(sample_isotropic(2, rng)),
            DirectionalDistribution::Density { kind, bound } => loop {
                let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                let rho = kind.planar_density(theta);
                if rho > *bound {
                    return Err(DirectionsError::EnvelopeViolation { value: rho, bound: *bound });
                }
                if rng.gen::<f64>() * *bound <= rho {
                    return Ok(UnitVector::from_angle(theta));
                }
            },
            DirectionalDistribution::Discrete { pairs } => {
                let x: f64 = rng.gen();
                let mut acc = 0.0;
                let mut chosen = pairs[pairs.len() - 1].dir;
                for p in pairs {
                    acc += p.mass;
                    if x < acc {
                        chosen = p.dir;
                        break;
                    }
                }
                Ok(if rng.gen::<f64>() < 0.5 { chosen } else { chosen.flipped() })
            }
            DirectionalDistribution::Mixture { parts } => {
                let x: f64 = rng.gen();
                let mut acc = 0.0;
                for (w, d) in parts {
                    acc += w;
                    if x < acc {
                        return d.sample(rng);
                    }
                }
                parts[parts.len() - 1].1.sample(rng)
            }
        }
    }

    /// Isotropic sampling needs the ambient dimension from the caller.
    pub fn sample_in_dim(&self, dim: usize, rng: &mut impl Rng) -> Result<UnitVector, DirectionsError> {
        match self {
            DirectionalDistribution::Isotropic => Ok(sample_isotropic(dim, rng)),
            DirectionalDistribution::Mixture { parts } => {
                let x: f64 = rng.gen();
                let mut acc = 0.0;
                for (w, d) in parts {
                    acc += w;
                    if x < acc {
                        return d.sample_in_dim(dim, rng);
                    }
                }
                parts[parts.len() - 1].1.sample_in_dim(dim, rng)
            }
            _ => self.sample(rng),
        }
    }

    /// Minimal facet count with positive probability for the typical cell:
    /// the smallest `n` such that some `n`-subset of the signed support
    /// positively spans `R^d`. Any continuous component gives `d + 1`.
    pub fn n_min(&self, d: usize) -> Result<usize, DirectionsError> {
        if self.has_continuous_part() {
            return Ok(d + 1);
        }
        let signed = self.signed_support();
        if signed.len() > SUPPORT_CAP {
            return Err(DirectionsError::SupportTooLarge(signed.len()));
        }
        for n in (d + 1)..=signed.len() {
            let mut found = false;
            for_each_combination(signed.len(), n, &mut |idx| {
                if found {
                    return;
                }
                let subset: Vec<UnitVector> = idx.iter().map(|&i| signed[i]).collect();
                if positively_spans(&subset, d) == SpanningVerdict::Spanning {
                    found = true;
                }
            });
            if found {
                return Ok(n);
            }
        }
        // A validated (full-rank) discrete support always spans using every
        // signed direction, so this point is unreachable.
        Err(DirectionsError::InvalidDistribution("support does not positively span"))
    }

    /// Whether the support contains `d + 1` points not all inside a closed
    /// half sphere (equivalently, `n_min = d + 1`).
    pub fn supp_condition_atoms(&self, d: usize) -> Result<bool, DirectionsError> {
        if self.has_continuous_part() {
            return Ok(true);
        }
        Ok(self.n_min(d)? == d + 1)
    }

    /// Upper envelope for the hull volume of support tuples, used by the
    /// size-biased rejection sampler. Full-support distributions attain the
    /// regular-simplex maximum; discrete supports are enumerated.
    pub fn delta_max(&self, d: usize) -> f64 {
        if self.has_continuous_part() {
            return regular_simplex_hull_volume(d);
        }
        let signed = self.signed_support();
        let mut best = 0.0f64;
        for_each_combination(signed.len(), d + 1, &mut |idx| {
            let tuple: Vec<UnitVector> = idx.iter().map(|&i| signed[i]).collect();
            let t = crate::geometry::DirectionTuple::new(tuple);
            if let Ok(t) = t {
                best = best.max(t.hull_volume());
            }
        });
        best
    }
}

/// Intensity, dimension and directional distribution of the hyperplane
/// process.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessParams {
    pub gamma: f64,
    pub dim: usize,
    pub dist: DirectionalDistribution,
}

impl ProcessParams {
    pub fn new(gamma: f64, dim: usize, dist: DirectionalDistribution) -> Result<Self, DirectionsError> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(DirectionsError::InvalidDistribution("intensity must be positive"));
        }
        if dim < 2 {
            return Err(DirectionsError::InvalidDistribution("dimension must be at least 2"));
        }
        dist.validate_support(dim)?;
        Ok(Self { gamma, dim, dist })
    }
}

/// Uniform direction on `S^{d-1}`.
pub fn sample_isotropic(dim: usize, rng: &mut impl Rng) -> UnitVector {
    if dim == 2 {
        let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
        return UnitVector::from_angle(theta);
    }
    loop {
        let mut coords = [0.0; crate::geometry::MAX_DIM];
        for c in coords.iter_mut().take(dim) {
            *c = rng.sample(StandardNormal);
        }
        if let Ok(u) = UnitVector::new(&coords[..dim]) {
            return u;
        }
    }
}

/// Hull volume of the regular `(d+1)`-tuple inscribed in the unit sphere,
/// `(d+1)^{(d+1)/2} / (d! d^{d/2})`: the maximum over all spanning tuples.
pub fn regular_simplex_hull_volume(d: usize) -> f64 {
    let df = d as f64;
    let mut fact = 1.0;
    for k in 2..=d {
        fact *= k as f64;
    }
    (df + 1.0).powf((df + 1.0) / 2.0) / (fact * df.powf(df / 2.0))
}

fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
