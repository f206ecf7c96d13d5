//! Exact shortest-path metric: BFS distances, diameters, balls, and the
//! doubling / bounded-geometry analyzers.
//!
//! All distances are hop counts; a graph's uniform edge length is applied
//! only when a [`Length`] is reported.

mod doubling;
mod oracle;

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::recgraph::export::serialize_length;
use crate::recgraph::{Length, MetricGraph, Vertex};

pub use doubling::{doubling_bounds, DoublingReport, DoublingStrategy, DEFAULT_SCAN_LIMIT};
pub use oracle::{distance_oracle, DistanceOracle, OracleMethod, OracleResult};

pub const UNREACHABLE: u32 = u32::MAX;

/// Distances from one source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceVector {
    pub source: Vertex,
    #[serde(serialize_with = "serialize_length")]
    pub edge_length: Length,
    /// Hop counts; [`UNREACHABLE`] for vertices in other components.
    #[serde(rename = "hops")]
    pub distances: Vec<u32>,
}

impl DistanceVector {
    pub fn hops(&self, v: Vertex) -> u64 {
        u64::from(self.distances[v as usize])
    }

    pub fn distance(&self, v: Vertex) -> Option<Length> {
        let h = self.distances[v as usize];
        (h != UNREACHABLE).then(|| self.edge_length * u64::from(h))
    }

    pub fn eccentricity_hops(&self) -> u64 {
        self.distances.iter().copied().max().map_or(0, u64::from)
    }
}

pub(crate) fn bfs_into(
    graph: &MetricGraph,
    source: Vertex,
    limit: u32,
    dist: &mut [u32],
    queue: &mut VecDeque<Vertex>,
) {
    dist.fill(UNREACHABLE);
    queue.clear();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize];
        if dx >= limit {
            continue;
        }
        for &y in graph.neighbors(x) {
            if dist[y as usize] == UNREACHABLE {
                dist[y as usize] = dx + 1;
                queue.push_back(y);
            }
        }
    }
}

pub fn sssp(graph: &MetricGraph, source: Vertex) -> Result<DistanceVector> {
    graph.check_vertex(source)?;
    let mut distances = vec![UNREACHABLE; graph.vertex_count()];
    bfs_into(
        graph,
        source,
        UNREACHABLE,
        &mut distances,
        &mut VecDeque::new(),
    );
    Ok(DistanceVector {
        source,
        edge_length: graph.edge_length(),
        distances,
    })
}

/// Row-major all-pairs hop distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    hops: Vec<u32>,
}

impl DistanceMatrix {
    pub fn new(graph: &MetricGraph) -> Self {
        let n = graph.vertex_count();
        let mut hops = vec![UNREACHABLE; n * n];
        hops.par_chunks_mut(n.max(1)).enumerate().for_each_init(
            VecDeque::new,
            |queue, (s, row)| {
                bfs_into(graph, s as Vertex, UNREACHABLE, row, queue);
            },
        );
        DistanceMatrix { n, hops }
    }

    /// Builds a matrix from explicit hop distances (row-major, `n * n`).
    pub fn from_rows(n: usize, hops: Vec<u32>) -> Self {
        assert_eq!(hops.len(), n * n);
        DistanceMatrix { n, hops }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.hops[u as usize * self.n + v as usize]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.hops[u as usize * self.n..(u as usize + 1) * self.n]
    }

    pub fn is_connected(&self) -> bool {
        !self.hops.contains(&UNREACHABLE)
    }
}

/// Exact diameter in hops, by eccentricity bounding: every BFS tightens
/// lower and upper eccentricity bounds of all vertices, and vertices whose
/// upper bound cannot beat the best eccentricity found are dropped.
pub fn diameter_hops(graph: &MetricGraph) -> Result<u64> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::Domain("diameter of an empty graph".into()));
    }
    let mut lower = vec![0u64; n];
    let mut upper = vec![u64::MAX; n];
    let mut candidates: Vec<Vertex> = graph.vertices().collect();
    let mut best = 0u64;
    let mut pick_high = true;
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = VecDeque::new();
    while !candidates.is_empty() {
        let v = if pick_high {
            *candidates
                .iter()
                .max_by_key(|&&w| (upper[w as usize], std::cmp::Reverse(w)))
                .unwrap()
        } else {
            *candidates
                .iter()
                .min_by_key(|&&w| (lower[w as usize], w))
                .unwrap()
        };
        pick_high = !pick_high;
        bfs_into(graph, v, UNREACHABLE, &mut dist, &mut queue);
        if dist.contains(&UNREACHABLE) {
            return Err(Error::Domain("graph is disconnected".into()));
        }
        let ecc = u64::from(*dist.iter().max().unwrap());
        best = best.max(ecc);
        for w in 0..n {
            let d = u64::from(dist[w]);
            lower[w] = lower[w].max(d.max(ecc - d));
            upper[w] = upper[w].min(ecc + d);
        }
        candidates.retain(|&w| w != v && upper[w as usize] > best);
    }
    Ok(best)
}

pub fn diameter(graph: &MetricGraph) -> Result<Length> {
    Ok(graph.hops_to_length(diameter_hops(graph)?))
}

/// Vertices within hop distance `radius_hops` of `center`, sorted.
pub fn ball_hops(graph: &MetricGraph, center: Vertex, radius_hops: u64) -> Result<Vec<Vertex>> {
    graph.check_vertex(center)?;
    let limit = radius_hops.min(u64::from(UNREACHABLE - 1)) as u32;
    let mut dist = vec![UNREACHABLE; graph.vertex_count()];
    bfs_into(graph, center, limit, &mut dist, &mut VecDeque::new());
    Ok(graph
        .vertices()
        .filter(|&v| dist[v as usize] != UNREACHABLE)
        .collect())
}

pub fn ball(graph: &MetricGraph, center: Vertex, radius: Length) -> Result<Vec<Vertex>> {
    ball_hops(graph, center, graph.length_to_hops(radius))
}

/// Maximum ball cardinality `M(r)` for a list of radii.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometryProfile {
    pub graph: String,
    pub entries: Vec<ProfileEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    #[serde(serialize_with = "serialize_length")]
    pub radius: Length,
    pub max_ball_cardinality: u64,
    /// Lowest-id center attaining the maximum.
    pub center: Vertex,
}

pub fn geometry_profile(graph: &MetricGraph, radii: &[Length]) -> Result<GeometryProfile> {
    if radii.is_empty() {
        return Err(Error::Domain("at least one radius is required".into()));
    }
    let hop_radii: Vec<u64> = radii.iter().map(|&r| graph.length_to_hops(r)).collect();
    let max_hops = (*hop_radii.iter().max().unwrap()).min(u64::from(UNREACHABLE - 1)) as u32;
    let n = graph.vertex_count();
    // per center: cumulative counts by hop, then the cardinality per radius
    let per_center: Vec<Vec<u64>> = graph
        .vertices()
        .into_par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], VecDeque::new()),
            |(dist, queue), c| {
                bfs_into(graph, c, max_hops, dist, queue);
                let mut by_hop = vec![0u64; max_hops as usize + 1];
                for &d in dist.iter() {
                    if d != UNREACHABLE {
                        by_hop[d as usize] += 1;
                    }
                }
                for i in 1..by_hop.len() {
                    by_hop[i] += by_hop[i - 1];
                }
                hop_radii
                    .iter()
                    .map(|&h| by_hop[(h as usize).min(max_hops as usize)])
                    .collect()
            },
        )
        .collect();
    let entries = radii
        .iter()
        .enumerate()
        .map(|(i, &radius)| {
            let (center, max) = per_center
                .iter()
                .enumerate()
                .map(|(c, counts)| (c as Vertex, counts[i]))
                .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
            ProfileEntry {
                radius,
                max_ball_cardinality: max,
                center,
            }
        })
        .collect();
    Ok(GeometryProfile {
        graph: graph.id(),
        entries,
    })
}
