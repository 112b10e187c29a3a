//! Implicit Cayley-graph exploration: balls, spheres and divergence
//! estimators built on avoidant breadth-first search.
//!
//! All searches happen in the closed annulus `r ≤ d(x0, y) ≤ ceiling` around
//! the ball centre `x0`. Two region modes are available:
//!
//! * [`RegionMode::Capped`] searches the whole annulus up to `cap_radius`.
//! * [`RegionMode::Reduced`] (default) stops at height
//!   `max(r + 1, |p|, |q|)`, measured from `x0`. The Cayley graph of a
//!   right-angled Coxeter group is a median graph, so a path through a peak
//!   `y` at height `h ≥ r + 2` can be rerouted through the median of `x0` and
//!   the two neighbours of `y`, which sits at height `h - 2`; the length is
//!   unchanged. Repeating this removes every such peak, hence shortest
//!   avoidant paths never rise above that height and both modes report the
//!   same value whenever `cap_radius` is at least that height. The same
//!   argument certifies [`AvoidStatus::Infinite`] when the search exhausts
//!   the region.

mod search;
pub mod sweep;

use std::ops::RangeInclusive;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::constructions::GeodesicSpec;
use crate::presentation::DefiningGraph;
use crate::words::{push_letter, shortlex, Letters, NormalForm, WordError};
use search::{Annulus, Outcome, Search};

/// Default node budget per query.
pub const DEFAULT_CAP_NODES: u64 = 50_000_000;
/// Default radius increment for the stabilisation re-run.
pub const DEFAULT_STABILIZATION_DELTA: u32 = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExplorerError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid caps: {0}")]
    InvalidCaps(String),
    #[error("capacity exceeded: more than {limit} elements")]
    Capacity { limit: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RegionMode {
    /// Search only up to the height where shortest avoidant paths live.
    #[default]
    Reduced,
    /// Search the whole annulus up to `cap_radius`.
    Capped,
}

/// Search budget for one query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchCaps {
    pub cap_radius: u32,
    pub cap_nodes: u64,
    pub stabilization_delta: u32,
    pub region: RegionMode,
}

impl SearchCaps {
    /// Defaults for a radius-`r` query: `cap_radius = 4r` (at least 1).
    pub fn for_radius(r: u32) -> Self {
        SearchCaps {
            cap_radius: (4 * r).max(1),
            cap_nodes: DEFAULT_CAP_NODES,
            stabilization_delta: DEFAULT_STABILIZATION_DELTA,
            region: RegionMode::Reduced,
        }
    }

    pub fn with_region(mut self, region: RegionMode) -> Self {
        self.region = region;
        self
    }

    pub fn validate(&self, r: u32) -> Result<(), ExplorerError> {
        if self.cap_nodes == 0 {
            return Err(ExplorerError::InvalidCaps(
                "cap_nodes must be at least 1".into(),
            ));
        }
        if u64::from(self.cap_radius) < 2 * u64::from(r) {
            return Err(ExplorerError::InvalidCaps(format!(
                "cap_radius {} is below 2r = {}",
                self.cap_radius,
                2 * r
            )));
        }
        Ok(())
    }

    fn widened(&self) -> SearchCaps {
        SearchCaps {
            cap_radius: self.cap_radius + self.stabilization_delta,
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AvoidStatus {
    Found(u32),
    NotFoundWithinBudget,
    /// No avoiding path exists at all.
    Infinite,
}

impl AvoidStatus {
    pub fn value(self) -> Option<u32> {
        match self {
            AvoidStatus::Found(v) => Some(v),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            AvoidStatus::Found(_) => "found",
            AvoidStatus::NotFoundWithinBudget => "budget",
            AvoidStatus::Infinite => "infinite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidantResult {
    pub status: AvoidStatus,
    pub nodes_explored: u64,
    pub caps: SearchCaps,
    /// Highest height the search was allowed to visit.
    pub ceiling: u32,
}

/// One measured point of a divergence function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceSample {
    pub r: u32,
    pub status: AvoidStatus,
    pub caps: SearchCaps,
    pub nodes_explored: u64,
    /// Same status when re-run with `cap_radius + stabilization_delta`.
    pub stabilized: bool,
    /// Minimising centre for lower divergence.
    pub min_t: Option<i64>,
}

impl DivergenceSample {
    pub fn value(&self) -> Option<u32> {
        self.status.value()
    }
}

/// Prepared query in translated coordinates (centre = identity).
struct Query {
    r: usize,
    p: Letters,
    q: Letters,
}

impl Query {
    fn new(
        g: &DefiningGraph,
        x0: &NormalForm,
        r: u32,
        p: &NormalForm,
        q: &NormalForm,
    ) -> Result<Self, ExplorerError> {
        for x in [p, q] {
            if x.graph_id() != g.id() {
                return Err(WordError::GraphMismatch.into());
            }
        }
        if x0.graph_id() != g.id() {
            return Err(WordError::GraphMismatch.into());
        }
        let p = g.quotient_letters(x0.letters(), p.letters());
        let q = g.quotient_letters(x0.letters(), q.letters());
        let r = r as usize;
        if p.len() < r || q.len() < r {
            return Err(ExplorerError::InvalidQuery(format!(
                "endpoints at distances {} and {} from the centre, inside radius {r}",
                p.len(),
                q.len()
            )));
        }
        Ok(Query { r, p, q })
    }

    fn natural_ceiling(&self) -> usize {
        (self.r + 1).max(self.p.len()).max(self.q.len())
    }

    fn ceiling(&self, caps: &SearchCaps) -> usize {
        let cap = caps.cap_radius as usize;
        match caps.region {
            RegionMode::Reduced => cap.min(self.natural_ceiling()),
            RegionMode::Capped => cap,
        }
    }

    fn run(
        &self,
        g: &DefiningGraph,
        caps: &SearchCaps,
        want_path: bool,
    ) -> Result<(AvoidantResult, Option<Vec<Letters>>), ExplorerError> {
        let ceiling = self.ceiling(caps);
        if self.p.len() > ceiling || self.q.len() > ceiling {
            return Err(ExplorerError::InvalidQuery(format!(
                "endpoint beyond cap_radius {}",
                caps.cap_radius
            )));
        }
        let mut search = Search::new(
            g,
            Annulus {
                inner: self.r,
                ceiling,
            },
            caps.cap_nodes,
        );
        let outcome = search.run(&self.p, Some(&self.q), want_path);
        let (status, path) = match outcome {
            Outcome::Reached { length, path } => (AvoidStatus::Found(length), path),
            Outcome::Exhausted if ceiling >= self.natural_ceiling() => {
                (AvoidStatus::Infinite, None)
            }
            Outcome::Exhausted | Outcome::Budget => (AvoidStatus::NotFoundWithinBudget, None),
        };
        let result = AvoidantResult {
            status,
            nodes_explored: search.nodes_explored(),
            caps: *caps,
            ceiling: ceiling as u32,
        };
        Ok((result, path))
    }

    /// Runs at `caps` and at the widened caps. When widening does not change
    /// the searched region the second run would repeat the first exactly, so
    /// its result is reused.
    fn run_stabilized(
        &self,
        g: &DefiningGraph,
        caps: &SearchCaps,
    ) -> Result<(AvoidantResult, bool), ExplorerError> {
        let (first, _) = self.run(g, caps, false)?;
        let wide = caps.widened();
        let second_status = if self.ceiling(&wide) == self.ceiling(caps) {
            first.status
        } else {
            self.run(g, &wide, false)?.0.status
        };
        let stable =
            first.status == second_status && first.status != AvoidStatus::NotFoundWithinBudget;
        Ok((first, stable))
    }
}

/// `x · s` for every generator `s`, in generator order.
pub fn neighbors(g: &DefiningGraph, x: &NormalForm) -> Vec<NormalForm> {
    g.generators().map(|s| g.mul_gen(x, s)).collect()
}

/// A closed ball with exact distances from its centre.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: NormalForm,
    pub radius: u32,
    entries: Vec<(NormalForm, u32)>,
    lookup: FxHashMap<NormalForm, u32>,
}

impl Ball {
    /// Elements with their distances, by distance and then ShortLex order of
    /// the translated element.
    pub fn entries(&self) -> &[(NormalForm, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distance(&self, x: &NormalForm) -> Option<u32> {
        self.lookup.get(x).copied()
    }

    pub fn sphere(&self, k: u32) -> impl Iterator<Item = &NormalForm> {
        self.entries
            .iter()
            .filter(move |(_, d)| *d == k)
            .map(|(x, _)| x)
    }

    pub fn sphere_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.radius as usize + 1];
        for (_, d) in &self.entries {
            sizes[*d as usize] += 1;
        }
        sizes
    }
}

/// Normal forms of length exactly `0..=radius`, layer by layer, sorted
/// ShortLex within each layer.
fn length_layers(
    g: &DefiningGraph,
    radius: u32,
    max_nodes: u64,
) -> Result<Vec<Vec<Letters>>, ExplorerError> {
    let mut layers: Vec<Vec<Letters>> = vec![vec![Letters::new()]];
    let mut total = 1u64;
    for k in 0..radius as usize {
        let mut seen: FxHashSet<Letters> = FxHashSet::default();
        let mut next = Vec::new();
        for x in &layers[k] {
            for s in g.generators() {
                let mut y = x.clone();
                if push_letter(g, &mut y, s) {
                    continue;
                }
                if seen.insert(y.clone()) {
                    total += 1;
                    if total > max_nodes {
                        return Err(ExplorerError::Capacity { limit: max_nodes });
                    }
                    next.push(y);
                }
            }
        }
        next.sort_unstable_by(|a, b| shortlex(a, b));
        layers.push(next);
    }
    Ok(layers)
}

/// Exact closed ball `{y : d(center, y) ≤ radius}`.
pub fn ball(
    g: &DefiningGraph,
    center: &NormalForm,
    radius: u32,
    max_nodes: u64,
) -> Result<Ball, ExplorerError> {
    if center.graph_id() != g.id() {
        return Err(WordError::GraphMismatch.into());
    }
    let layers = length_layers(g, radius, max_nodes)?;
    let mut entries = Vec::new();
    let mut lookup = FxHashMap::default();
    for (d, layer) in layers.into_iter().enumerate() {
        for z in layer {
            let mut y = center.letters().iter().copied().collect::<Letters>();
            for &s in z.iter() {
                push_letter(g, &mut y, s);
            }
            let y = NormalForm::from_normal_letters(g, y);
            lookup.insert(y.clone(), d as u32);
            entries.push((y, d as u32));
        }
    }
    Ok(Ball {
        center: center.clone(),
        radius,
        entries,
        lookup,
    })
}

/// `|S_k(e)|` for `k = 0..=radius`.
pub fn sphere_sizes(
    g: &DefiningGraph,
    radius: u32,
    max_nodes: u64,
) -> Result<Vec<u64>, ExplorerError> {
    Ok(length_layers(g, radius, max_nodes)?
        .iter()
        .map(|l| l.len() as u64)
        .collect())
}

/// Shortest path from `p` to `q` avoiding the open ball `B(x0, r)`.
pub fn avoidant_path(
    g: &DefiningGraph,
    x0: &NormalForm,
    r: u32,
    p: &NormalForm,
    q: &NormalForm,
    caps: &SearchCaps,
) -> Result<AvoidantResult, ExplorerError> {
    caps.validate(r)?;
    Ok(Query::new(g, x0, r, p, q)?.run(g, caps, false)?.0)
}

/// [`avoidant_path`] that also returns the vertices of a shortest path.
pub fn avoidant_path_traced(
    g: &DefiningGraph,
    x0: &NormalForm,
    r: u32,
    p: &NormalForm,
    q: &NormalForm,
    caps: &SearchCaps,
) -> Result<(AvoidantResult, Option<Vec<NormalForm>>), ExplorerError> {
    caps.validate(r)?;
    let (result, path) = Query::new(g, x0, r, p, q)?.run(g, caps, true)?;
    let path = path.map(|steps| {
        steps
            .into_iter()
            .map(|z| {
                let mut y: Letters = x0.letters().iter().copied().collect();
                for &s in z.iter() {
                    push_letter(g, &mut y, s);
                }
                NormalForm::from_normal_letters(g, y)
            })
            .collect()
    });
    Ok((result, path))
}

fn sample(r: u32, result: AvoidantResult, stabilized: bool) -> DivergenceSample {
    DivergenceSample {
        r,
        status: result.status,
        caps: result.caps,
        nodes_explored: result.nodes_explored,
        stabilized,
        min_t: None,
    }
}

/// Divergence of two rays sharing `vertex(0)`, evaluated at radius `r`.
pub fn div_pair(
    g: &DefiningGraph,
    alpha: &GeodesicSpec,
    beta: &GeodesicSpec,
    r: u32,
    caps: &SearchCaps,
) -> Result<DivergenceSample, ExplorerError> {
    caps.validate(r)?;
    if alpha.basepoint() != beta.basepoint() {
        return Err(ExplorerError::InvalidQuery(
            "rays must share their initial point".into(),
        ));
    }
    let x0 = alpha.basepoint();
    let p = alpha.vertex(g, i64::from(r));
    let q = beta.vertex(g, i64::from(r));
    let (result, stable) = Query::new(g, x0, r, &p, &q)?.run_stabilized(g, caps)?;
    Ok(sample(r, result, stable))
}

/// `ρ_γ(r, t)`: avoidant distance from `γ(t-r)` to `γ(t+r)` around `γ(t)`.
pub fn rho(
    g: &DefiningGraph,
    gamma: &GeodesicSpec,
    r: u32,
    t_center: i64,
    caps: &SearchCaps,
) -> Result<AvoidantResult, ExplorerError> {
    caps.validate(r)?;
    let (x0, p, q) = rho_points(g, gamma, r, t_center);
    Ok(Query::new(g, &x0, r, &p, &q)?.run(g, caps, false)?.0)
}

fn rho_points(
    g: &DefiningGraph,
    gamma: &GeodesicSpec,
    r: u32,
    t: i64,
) -> (NormalForm, NormalForm, NormalForm) {
    let r = i64::from(r);
    let vs = gamma.vertices(g, t - r, t + r);
    let n = vs.len();
    (vs[r as usize].clone(), vs[0].clone(), vs[n - 1].clone())
}

/// Divergence of a bi-infinite geodesic: its two half-rays from `γ(0)`.
pub fn div_geodesic(
    g: &DefiningGraph,
    gamma: &GeodesicSpec,
    r: u32,
    caps: &SearchCaps,
) -> Result<DivergenceSample, ExplorerError> {
    caps.validate(r)?;
    let (x0, p, q) = rho_points(g, gamma, r, 0);
    let (result, stable) = Query::new(g, &x0, r, &p, &q)?.run_stabilized(g, caps)?;
    Ok(sample(r, result, stable))
}

/// Minimum of `ρ_γ(r, t)` over `t` in `window`, an upper bound on the lower
/// divergence. Records the first minimising centre.
pub fn lower_divergence(
    g: &DefiningGraph,
    gamma: &GeodesicSpec,
    r: u32,
    window: RangeInclusive<i64>,
    caps: &SearchCaps,
) -> Result<DivergenceSample, ExplorerError> {
    caps.validate(r)?;
    if window.is_empty() {
        return Err(ExplorerError::InvalidQuery("empty window".into()));
    }
    let centres: Vec<i64> = window.collect();
    let runs: Vec<(i64, AvoidantResult, bool)> = centres
        .par_iter()
        .map(|&t| {
            let (x0, p, q) = rho_points(g, gamma, r, t);
            let (res, stable) = Query::new(g, &x0, r, &p, &q)?.run_stabilized(g, caps)?;
            Ok((t, res, stable))
        })
        .collect::<Result<_, ExplorerError>>()?;

    let nodes: u64 = runs.iter().map(|(_, res, _)| res.nodes_explored).sum();
    let best = runs
        .iter()
        .filter_map(|(t, res, _)| res.status.value().map(|v| (v, *t)))
        .min_by_key(|&(v, t)| (v, centres.iter().position(|&c| c == t)));
    let censored = runs
        .iter()
        .any(|(_, res, _)| res.status == AvoidStatus::NotFoundWithinBudget);
    let all_stable = runs.iter().all(|(_, _, s)| *s);
    let (status, min_t) = match best {
        Some((v, t)) => (AvoidStatus::Found(v), Some(t)),
        None if censored => (AvoidStatus::NotFoundWithinBudget, None),
        None => (AvoidStatus::Infinite, None),
    };
    Ok(DivergenceSample {
        r,
        status,
        caps: *caps,
        nodes_explored: nodes,
        stabilized: all_stable && !censored,
        min_t,
    })
}

/// Result of a Gersten divergence evaluation.
#[derive(Clone, Debug)]
pub struct GerstenSample {
    pub sample: DivergenceSample,
    pub sphere_size: usize,
    /// A pair realising the maximum.
    pub witness: Option<(NormalForm, NormalForm)>,
    /// Pairs whose distance could not be settled within the node budget;
    /// they are left out of the supremum.
    pub censored: Vec<(NormalForm, NormalForm)>,
    /// Pairs that no avoiding path connects.
    pub infinite_pairs: usize,
}

/// `δ(r) = sup d_r(x1, x2)` over sphere points with finite `d_r`.
pub fn gersten_divergence(
    g: &DefiningGraph,
    r: u32,
    caps: &SearchCaps,
) -> Result<GerstenSample, ExplorerError> {
    caps.validate(r)?;
    let layers = length_layers(g, r, caps.cap_nodes)?;
    let sphere = &layers[r as usize];

    let evaluate = |caps: &SearchCaps| -> Vec<SourceRow> {
        let ceiling = match caps.region {
            RegionMode::Reduced => (r as usize + 1).min(caps.cap_radius as usize),
            RegionMode::Capped => caps.cap_radius as usize,
        };
        let certified = ceiling > r as usize;
        sphere
            .par_iter()
            .enumerate()
            .map(|(i, x1)| {
                let mut search = Search::new(
                    g,
                    Annulus {
                        inner: r as usize,
                        ceiling,
                    },
                    caps.cap_nodes,
                );
                let outcome = search.run(x1, None, false);
                let budget_hit = matches!(outcome, Outcome::Budget);
                let mut row = SourceRow {
                    nodes: search.nodes_explored(),
                    ..SourceRow::default()
                };
                for (j, x2) in sphere.iter().enumerate().skip(i + 1) {
                    match search.distance_to(x2) {
                        Some(d) => {
                            if row.best.is_none_or(|(bd, _)| d > bd) {
                                row.best = Some((d, j));
                            }
                        }
                        None if budget_hit || !certified => row.censored.push(j),
                        None => row.infinite += 1,
                    }
                }
                row
            })
            .collect()
    };

    let rows = evaluate(caps);
    let wide = caps.widened();
    let same_region = match caps.region {
        RegionMode::Reduced => caps.cap_radius > r,
        RegionMode::Capped => false,
    };
    let max_of = |rows: &[SourceRow]| -> Option<(u32, usize, usize)> {
        rows.iter()
            .enumerate()
            .filter_map(|(i, row)| row.best.map(|(d, j)| (d, i, j)))
            .fold(None, |acc: Option<(u32, usize, usize)>, cur| match acc {
                Some(a) if a.0 >= cur.0 => Some(a),
                _ => Some(cur),
            })
    };
    let best = max_of(&rows);
    let censored_count: usize = rows.iter().map(|row| row.censored.len()).sum();
    let stable = if same_region {
        true
    } else {
        let wide_rows = evaluate(&wide);
        max_of(&wide_rows).map(|b| b.0) == best.map(|b| b.0)
            && wide_rows
                .iter()
                .map(|row| row.censored.len())
                .sum::<usize>()
                == censored_count
    };

    let to_nf = |x: &Letters| NormalForm::from_normal_letters(g, x.clone());
    let censored: Vec<(NormalForm, NormalForm)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.censored.iter().map(move |&j| (i, j)))
        .map(|(i, j)| (to_nf(&sphere[i]), to_nf(&sphere[j])))
        .collect();
    let infinite_pairs = rows.iter().map(|row| row.infinite).sum();
    let nodes = rows.iter().map(|row| row.nodes).sum();

    let status = match best {
        Some((d, _, _)) => AvoidStatus::Found(d),
        // a single sphere point: the only pair is (x, x)
        None if sphere.len() == 1 => AvoidStatus::Found(0),
        None if !censored.is_empty() => AvoidStatus::NotFoundWithinBudget,
        None => AvoidStatus::Infinite,
    };
    let witness = best
        .map(|(_, i, j)| (to_nf(&sphere[i]), to_nf(&sphere[j])))
        .or_else(|| (sphere.len() == 1).then(|| (to_nf(&sphere[0]), to_nf(&sphere[0]))));
    Ok(GerstenSample {
        sample: DivergenceSample {
            r,
            status,
            caps: *caps,
            nodes_explored: nodes,
            stabilized: stable && censored.is_empty(),
            min_t: None,
        },
        sphere_size: sphere.len(),
        witness,
        censored,
        infinite_pairs,
    })
}

#[derive(Default)]
struct SourceRow {
    nodes: u64,
    best: Option<(u32, usize)>,
    censored: Vec<usize>,
    infinite: usize,
}
