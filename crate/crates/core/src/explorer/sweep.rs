//! Radius sweeps on a private worker pool.
//!
//! Every radius is an independent query, so results are assembled by index
//! and do not depend on the number of workers or on completion order.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::{
    div_geodesic, div_pair, gersten_divergence, lower_divergence, DivergenceSample, ExplorerError,
    RegionMode, SearchCaps, DEFAULT_CAP_NODES, DEFAULT_STABILIZATION_DELTA,
};
use crate::constructions::GeodesicSpec;
use crate::presentation::DefiningGraph;

#[derive(Clone, Debug)]
pub enum Measure {
    Geodesic(GeodesicSpec),
    Pair(GeodesicSpec, GeodesicSpec),
    Lower {
        gamma: GeodesicSpec,
        window: RangeInclusive<i64>,
    },
    Gersten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapRadius {
    /// `cap_radius = factor · r` (at least 1).
    Scaled(u32),
    Fixed(u32),
}

/// How caps are chosen for each radius of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CapsPolicy {
    pub radius: CapRadius,
    pub cap_nodes: u64,
    pub stabilization_delta: u32,
    pub region: RegionMode,
}

impl Default for CapsPolicy {
    fn default() -> Self {
        CapsPolicy {
            radius: CapRadius::Scaled(4),
            cap_nodes: DEFAULT_CAP_NODES,
            stabilization_delta: DEFAULT_STABILIZATION_DELTA,
            region: RegionMode::Reduced,
        }
    }
}

impl CapsPolicy {
    pub fn for_radius(&self, r: u32) -> SearchCaps {
        let cap_radius = match self.radius {
            CapRadius::Scaled(k) => k.saturating_mul(r).max(1),
            CapRadius::Fixed(c) => c,
        };
        SearchCaps {
            cap_radius,
            cap_nodes: self.cap_nodes,
            stabilization_delta: self.stabilization_delta,
            region: self.region,
        }
    }
}

/// Evaluates `measure` at one radius.
pub fn measure_at(
    g: &DefiningGraph,
    measure: &Measure,
    r: u32,
    caps: &SearchCaps,
) -> Result<DivergenceSample, ExplorerError> {
    match measure {
        Measure::Geodesic(gamma) => div_geodesic(g, gamma, r, caps),
        Measure::Pair(a, b) => div_pair(g, a, b, r, caps),
        Measure::Lower { gamma, window } => lower_divergence(g, gamma, r, window.clone(), caps),
        Measure::Gersten => Ok(gersten_divergence(g, r, caps)?.sample),
    }
}

/// Evaluates `measure` at every radius using `workers` threads (0 picks the
/// number of available cores). Output order follows `radii`.
pub fn sweep(
    g: &DefiningGraph,
    measure: &Measure,
    radii: &[u32],
    policy: &CapsPolicy,
    workers: usize,
) -> Result<Vec<DivergenceSample>, ExplorerError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExplorerError::InvalidQuery(format!("worker pool: {e}")))?;
    pool.install(|| {
        radii
            .par_iter()
            .map(|&r| measure_at(g, measure, r, &policy.for_radius(r)))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::build_gamma;

    #[test]
    fn scaled_caps() {
        let p = CapsPolicy::default();
        assert_eq!(p.for_radius(0).cap_radius, 1);
        assert_eq!(p.for_radius(3).cap_radius, 12);
        let fixed = CapsPolicy {
            radius: CapRadius::Fixed(9),
            ..p
        };
        assert_eq!(fixed.for_radius(3).cap_radius, 9);
    }

    #[test]
    fn sweep_order_independent_of_workers() {
        let g = build_gamma(2).unwrap();
        let alpha = GeodesicSpec::periodic(&g, &g.parse_word("a_2 b_2").unwrap()).unwrap();
        let m = Measure::Geodesic(alpha);
        let radii = [4, 1, 3, 2];
        let one = sweep(&g, &m, &radii, &CapsPolicy::default(), 1).unwrap();
        let four = sweep(&g, &m, &radii, &CapsPolicy::default(), 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.iter().map(|s| s.r).collect::<Vec<_>>(), radii);
    }
}
