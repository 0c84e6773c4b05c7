//! Hub-connectivity distribution: the probability gamma_h that a user is
//! connected to h hubs. Either supplied explicitly or computed from a
//! square-grid coverage geometry (hubs on a uniform grid with spacing d,
//! each covering a disk of radius r; border effects neglected).

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::popularity::uniform_f64;
use crate::{Error, Result};

/// Finite-support pmf over hub counts h >= 0, sorted by h.
#[derive(Debug, Clone)]
pub struct ConnectivityDist {
    gamma: Vec<(u32, f64)>,
}

impl ConnectivityDist {
    /// Validate an explicit distribution. Probabilities must be nonnegative
    /// and sum to 1 within 1e-6; the stored values are renormalized.
    pub fn explicit(values: &[(u32, f64)]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDistribution("empty connectivity distribution"));
        }
        let mut gamma: Vec<(u32, f64)> = Vec::with_capacity(values.len());
        let mut sum = 0.0;
        for &(h, g) in values {
            if !(g >= 0.0) || !g.is_finite() {
                return Err(Error::InvalidDistribution("negative or non-finite gamma_h"));
            }
            if gamma.iter().any(|&(h2, _)| h2 == h) {
                return Err(Error::InvalidDistribution("duplicate hub count h"));
            }
            sum += g;
            if g > 0.0 {
                gamma.push((h, g));
            }
        }
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidDistribution("gamma does not sum to 1 within 1e-6"));
        }
        for (_, g) in gamma.iter_mut() {
            *g /= sum;
        }
        gamma.sort_by_key(|&(h, _)| h);
        Ok(ConnectivityDist { gamma })
    }

    /// Deterministic midpoint quadrature over the fundamental cell
    /// [0, d/2]^2 of the grid (the full plane folds onto it by the grid's
    /// symmetries). Each sample point is classified by how many hubs lie
    /// within distance r; hubs are enumerated out to r + d*sqrt(2).
    pub fn from_grid(geom: &GridGeometry) -> Self {
        let r2 = geom.r * geom.r;
        let reach = ((geom.r + geom.d * libm::sqrt(2.0)) / geom.d) as i64 + 1;
        let mut hubs = Vec::new();
        for i in -reach..=reach {
            for j in -reach..=reach {
                hubs.push((i as f64 * geom.d, j as f64 * geom.d));
            }
        }
        let res = geom.resolution;
        let step = geom.d / 2.0 / res as f64;
        let mut counts: Vec<u64> = Vec::new();
        for a in 0..res {
            let x = (a as f64 + 0.5) * step;
            for b in 0..res {
                let y = (b as f64 + 0.5) * step;
                let mut h = 0usize;
                for &(hx, hy) in &hubs {
                    let (dx, dy) = (hx - x, hy - y);
                    if dx * dx + dy * dy <= r2 {
                        h += 1;
                    }
                }
                if counts.len() <= h {
                    counts.resize(h + 1, 0);
                }
                counts[h] += 1;
            }
        }
        let total = (res as u64 * res as u64) as f64;
        let gamma = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(h, &c)| (h as u32, c as f64 / total))
            .collect();
        ConnectivityDist { gamma }
    }

    /// Support with probabilities, sorted by h. Zero-mass entries are dropped.
    pub fn gamma(&self) -> &[(u32, f64)] {
        &self.gamma
    }

    pub fn prob(&self, h: u32) -> f64 {
        self.gamma
            .iter()
            .find(|&&(h2, _)| h2 == h)
            .map_or(0.0, |&(_, g)| g)
    }

    /// Average number of covering hubs, sum h * gamma_h.
    pub fn mean(&self) -> f64 {
        self.gamma.iter().map(|&(h, g)| h as f64 * g).sum()
    }

    /// Probability mass at h = 0 (uncovered users).
    pub fn uncovered_mass(&self) -> f64 {
        self.prob(0)
    }

    /// Condition on H >= 1. Unconnected users cannot be served at all, so
    /// the rate model only applies to the connected population. Returns the
    /// conditioned distribution and the mass that was dropped.
    pub fn condition_on_connected(&self) -> Result<(ConnectivityDist, f64)> {
        let dropped = self.uncovered_mass();
        if dropped == 0.0 {
            return Ok((self.clone(), 0.0));
        }
        let keep = 1.0 - dropped;
        if keep <= 0.0 {
            return Err(Error::InvalidDistribution("no mass at h >= 1"));
        }
        let gamma = self
            .gamma
            .iter()
            .filter(|&&(h, _)| h > 0)
            .map(|&(h, g)| (h, g / keep))
            .collect();
        Ok((ConnectivityDist { gamma }, dropped))
    }

    /// Draw a hub count by inverse-cdf sampling.
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> u32 {
        let u = uniform_f64(rng);
        let mut acc = 0.0;
        for &(h, g) in &self.gamma {
            acc += g;
            if u < acc {
                return h;
            }
        }
        self.gamma.last().map(|&(h, _)| h).unwrap_or(0)
    }
}

/// Square-grid coverage geometry: hub spacing d, coverage radius r (both in
/// the same length unit), and quadrature points per axis.
#[derive(Debug, Clone, Copy)]
pub struct GridGeometry {
    pub r: f64,
    pub d: f64,
    pub resolution: u32,
}

impl GridGeometry {
    pub fn new(r: f64, d: f64, resolution: u32) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter("coverage radius r must be > 0"));
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidParameter("grid spacing d must be > 0"));
        }
        if resolution < 100 {
            return Err(Error::InvalidParameter("quadrature resolution must be >= 100"));
        }
        Ok(GridGeometry { r, d, resolution })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_single_hub() {
        let c = ConnectivityDist::explicit(&[(1, 1.0)]).unwrap();
        assert_eq!(c.gamma(), &[(1, 1.0)]);
        assert_eq!(c.mean(), 1.0);
    }

    #[test]
    fn explicit_grid_derived_values_accepted() {
        let c = ConnectivityDist::explicit(&[(1, 0.2907), (2, 0.6591), (3, 0.0430), (4, 0.0072)])
            .unwrap();
        let sum: f64 = c.gamma().iter().map(|&(_, g)| g).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_bad_sum_rejected() {
        assert!(matches!(
            ConnectivityDist::explicit(&[(1, 0.5), (2, 0.4)]),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn explicit_rejects_negative_and_duplicates() {
        assert!(ConnectivityDist::explicit(&[(1, -0.2), (2, 1.2)]).is_err());
        assert!(ConnectivityDist::explicit(&[(1, 0.5), (1, 0.5)]).is_err());
    }

    #[test]
    fn grid_small_radius_has_uncovered_corners() {
        // r = d/2: cell corners are at distance d*sqrt(2)/2 > r from every hub.
        let g = GridGeometry::new(22.5, 45.0, 301).unwrap();
        let c = ConnectivityDist::from_grid(&g);
        assert!(c.uncovered_mass() > 0.0);
        for &(h, _) in c.gamma() {
            assert!(h <= 2, "unexpected hub count {h} for r = d/2");
        }
    }

    #[test]
    fn grid_mean_matches_disk_area() {
        // Expected covering multiplicity of an infinite grid of disks is
        // pi r^2 / d^2 exactly.
        for (r, d) in [(30.0, 45.0), (45.0, 45.0), (60.0, 45.0)] {
            let g = GridGeometry::new(r, d, 601).unwrap();
            let c = ConnectivityDist::from_grid(&g);
            let expect = core::f64::consts::PI * r * r / (d * d);
            assert!((c.mean() - expect).abs() < 5e-3, "r={r} mean={} expect={expect}", c.mean());
        }
    }

    #[test]
    fn grid_large_radius_covers_everything_at_least_four_times() {
        // r=60, d=45: the 4 nearest hubs are within d*sqrt(2)/2 ~ 31.8 < 60.
        let g = GridGeometry::new(60.0, 45.0, 301).unwrap();
        let c = ConnectivityDist::from_grid(&g);
        for &(h, _) in c.gamma() {
            assert!(h >= 4, "point covered by only {h} hubs");
        }
    }

    #[test]
    fn grid_no_uncovered_when_radius_reaches_corner() {
        let d = 45.0;
        let r = d * core::f64::consts::SQRT_2 / 2.0 + 1e-9;
        let c = ConnectivityDist::from_grid(&GridGeometry::new(r, d, 201).unwrap());
        assert_eq!(c.uncovered_mass(), 0.0);
    }

    #[test]
    fn grid_converges_as_resolution_doubles() {
        let tv = |a: &ConnectivityDist, b: &ConnectivityDist| -> f64 {
            let hs: std::vec::Vec<u32> =
                a.gamma().iter().chain(b.gamma()).map(|&(h, _)| h).collect();
            hs.iter().map(|&h| (a.prob(h) - b.prob(h)).abs()).sum::<f64>() / 2.0
        };
        let g = |res| ConnectivityDist::from_grid(&GridGeometry::new(60.0, 45.0, res).unwrap());
        let (a, b, c) = (g(200), g(400), g(800));
        let d1 = tv(&a, &b);
        let d2 = tv(&b, &c);
        assert!(d2 <= d1 + 1e-12, "not Cauchy: {d1} then {d2}");
        assert!(d2 < 0.01);
    }

    #[test]
    fn condition_on_connected() {
        let c = ConnectivityDist::explicit(&[(0, 0.2), (1, 0.5), (2, 0.3)]).unwrap();
        let (cc, dropped) = c.condition_on_connected().unwrap();
        assert!((dropped - 0.2).abs() < 1e-12);
        assert!((cc.prob(1) - 0.625).abs() < 1e-12);
        assert!((cc.prob(2) - 0.375).abs() < 1e-12);
        assert_eq!(cc.uncovered_mass(), 0.0);
    }

    #[test]
    fn geometry_validation() {
        assert!(GridGeometry::new(0.0, 45.0, 300).is_err());
        assert!(GridGeometry::new(60.0, -1.0, 300).is_err());
        assert!(GridGeometry::new(60.0, 45.0, 99).is_err());
    }
}
