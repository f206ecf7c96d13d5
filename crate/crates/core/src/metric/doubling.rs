//! Ball-based doubling analysis.
//!
//! For a ball `B` the lower bound counts points that are pairwise farther
//! apart than `diam(B) / 2`; no set of diameter `diam(B) / 2` can hold two
//! of them, so any cover of `B` by such sets needs at least that many. The
//! upper bound is a greedy cover of `B(c, r)` by balls `B(x, ⌊r/2⌋)`, with
//! centers anywhere in the graph and ties going to the lowest id. Both
//! bounds refer to balls only, never to arbitrary bounded sets.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{ball_hops, DistanceMatrix, UNREACHABLE};
use crate::error::{Error, Result};
use crate::recgraph::export::serialize_length;
use crate::recgraph::{Length, MetricGraph, Vertex};

/// Default cap on scanned `(center, radius)` pairs.
pub const DEFAULT_SCAN_LIMIT: u64 = 1_000_000;

/// Scanning needs all-pairs distances; larger graphs are refused.
pub const SCAN_MAX_VERTICES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DoublingStrategy {
    /// The radius-1 ball around the bottom vertex (vertex 0 for graphs
    /// without one).
    WitnessBottomBall,
    /// Every center with every radius from 1 to `⌊diam/2⌋` hops, up to
    /// `limit` balls.
    ScanAllBalls { limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    pub graph: String,
    pub strategy: DoublingStrategy,
    /// Ball attaining `witness_lower_bound`.
    pub ball_center: Vertex,
    #[serde(serialize_with = "serialize_length")]
    pub ball_radius: Length,
    pub ball_size: usize,
    pub witness_lower_bound: u64,
    /// Certificate for the lower bound: pairwise far-apart points of the ball.
    pub witness_points: Vec<Vertex>,
    /// Maximum greedy cover size over the scanned balls.
    pub greedy_upper_bound: u64,
    /// Ball attaining `greedy_upper_bound`.
    pub upper_ball_center: Vertex,
    #[serde(serialize_with = "serialize_length")]
    pub upper_ball_radius: Length,
    pub scanned_balls: u64,
    pub complete: bool,
}

pub fn doubling_bounds(graph: &MetricGraph, strategy: DoublingStrategy) -> Result<DoublingReport> {
    if graph.vertex_count() == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    match strategy {
        DoublingStrategy::WitnessBottomBall => witness_bottom_ball(graph),
        DoublingStrategy::ScanAllBalls { limit } => scan_all_balls(graph, limit),
    }
}

/// BFS that only resets the entries it touched.
struct LocalBfs {
    dist: Vec<u32>,
    touched: Vec<Vertex>,
    queue: VecDeque<Vertex>,
}

impl LocalBfs {
    fn new(n: usize) -> Self {
        LocalBfs {
            dist: vec![UNREACHABLE; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn run(&mut self, graph: &MetricGraph, source: Vertex, limit: u32) {
        for &t in &self.touched {
            self.dist[t as usize] = UNREACHABLE;
        }
        self.touched.clear();
        self.dist[source as usize] = 0;
        self.touched.push(source);
        self.queue.push_back(source);
        while let Some(x) = self.queue.pop_front() {
            let dx = self.dist[x as usize];
            if dx >= limit {
                continue;
            }
            for &y in graph.neighbors(x) {
                if self.dist[y as usize] == UNREACHABLE {
                    self.dist[y as usize] = dx + 1;
                    self.touched.push(y);
                    self.queue.push_back(y);
                }
            }
        }
    }
}

/// Greedy independent set in the "closer than a threshold" relation,
/// visiting points by increasing closeness degree, then id.
fn far_apart_points(members: &[Vertex], close: &dyn Fn(usize, usize) -> bool) -> Vec<Vertex> {
    let k = members.len();
    let degree: Vec<usize> = (0..k)
        .map(|i| (0..k).filter(|&j| close(i, j)).count())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (degree[i], members[i]));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&c| !close(c, i)) {
            chosen.push(i);
        }
    }
    let mut out: Vec<Vertex> = chosen.into_iter().map(|i| members[i]).collect();
    out.sort_unstable();
    out
}

fn greedy_cover(members: &[Vertex], covers: &dyn Fn(usize, usize) -> bool) -> u64 {
    let k = members.len();
    let mut uncovered = vec![true; k];
    let mut left = k;
    let mut sets = 0;
    while left > 0 {
        let (best, _) = (0..k)
            .map(|i| (i, (0..k).filter(|&j| uncovered[j] && covers(i, j)).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        for (j, u) in uncovered.iter_mut().enumerate() {
            if *u && covers(best, j) {
                *u = false;
                left -= 1;
            }
        }
        sets += 1;
    }
    sets
}

fn witness_bottom_ball(graph: &MetricGraph) -> Result<DoublingReport> {
    let center = graph.bottom().unwrap_or(0);
    let radius = 1u32;
    let members = ball_hops(graph, center, u64::from(radius))?;
    let k = members.len();
    let mut bfs = LocalBfs::new(graph.vertex_count());
    let mut d = vec![0u32; k * k];
    for (i, &x) in members.iter().enumerate() {
        bfs.run(graph, x, 2 * radius);
        for (j, &y) in members.iter().enumerate() {
            d[i * k + j] = bfs.dist[y as usize];
        }
    }
    let diam = d.iter().copied().max().unwrap_or(0);
    // 2 d(x, y) <= diam  <=>  d(x, y) <= diam / 2
    let close = |i: usize, j: usize| 2 * d[i * k + j] <= diam;
    let witness = far_apart_points(&members, &close);
    let half = radius / 2;
    let upper = greedy_cover(&members, &|i, j| d[i * k + j] <= half);
    Ok(DoublingReport {
        graph: graph.id(),
        strategy: DoublingStrategy::WitnessBottomBall,
        ball_center: center,
        ball_radius: graph.hops_to_length(u64::from(radius)),
        ball_size: k,
        witness_lower_bound: witness.len() as u64,
        witness_points: witness,
        greedy_upper_bound: upper,
        upper_ball_center: center,
        upper_ball_radius: graph.hops_to_length(u64::from(radius)),
        scanned_balls: 1,
        complete: true,
    })
}

fn scan_all_balls(graph: &MetricGraph, limit: u64) -> Result<DoublingReport> {
    let n = graph.vertex_count();
    if n > SCAN_MAX_VERTICES {
        return Err(Error::Budget(format!(
            "ball scan needs all-pairs distances; {n} vertices exceeds {SCAN_MAX_VERTICES}"
        )));
    }
    let matrix = DistanceMatrix::new(graph);
    if !matrix.is_connected() {
        return Err(Error::Domain("graph is disconnected".into()));
    }
    let diam = graph
        .vertices()
        .map(|u| *matrix.row(u).iter().max().unwrap())
        .max()
        .unwrap();
    let max_r = (diam / 2) as usize;
    // a cover center only helps if it lies within r + r/2 of c
    let max_rho = max_r + max_r / 2;

    // balls[x][rho] as bitsets, rho = 0..=max_rho
    let balls: Vec<Vec<FixedBitSet>> = graph
        .vertices()
        .map(|x| {
            let mut rings = vec![FixedBitSet::with_capacity(n); max_rho + 1];
            for (y, &d) in matrix.row(x).iter().enumerate() {
                if (d as usize) <= max_rho {
                    rings[d as usize].insert(y);
                }
            }
            for rho in 1..=max_rho {
                let (lo, hi) = rings.split_at_mut(rho);
                hi[0].union_with(&lo[rho - 1]);
            }
            rings
        })
        .collect();

    let mut report = DoublingReport {
        graph: graph.id(),
        strategy: DoublingStrategy::ScanAllBalls { limit },
        ball_center: 0,
        ball_radius: Length::from_integer(0),
        ball_size: 1,
        witness_lower_bound: 1,
        witness_points: vec![0],
        greedy_upper_bound: 1,
        upper_ball_center: 0,
        upper_ball_radius: Length::from_integer(0),
        scanned_balls: 0,
        complete: true,
    };
    'outer: for c in graph.vertices() {
        for r in 1..=max_r {
            if report.scanned_balls >= limit {
                report.complete = false;
                break 'outer;
            }
            report.scanned_balls += 1;
            let ball = &balls[c as usize][r];
            let members: Vec<usize> = ball.ones().collect();

            let mut by_degree: Vec<(usize, usize)> = members
                .iter()
                .map(|&x| (balls[x][r].intersection_count(ball), x))
                .collect();
            by_degree.sort_unstable();
            let mut blocked = FixedBitSet::with_capacity(n);
            let mut witness = Vec::new();
            for &(_, x) in &by_degree {
                if !blocked.contains(x) {
                    witness.push(x as Vertex);
                    blocked.union_with(&balls[x][r]);
                }
            }
            if witness.len() as u64 > report.witness_lower_bound {
                witness.sort_unstable();
                report.witness_lower_bound = witness.len() as u64;
                report.witness_points = witness;
                report.ball_center = c;
                report.ball_radius = graph.hops_to_length(r as u64);
                report.ball_size = members.len();
            }

            let half = r / 2;
            let candidates: Vec<usize> = balls[c as usize][r + half].ones().collect();
            let mut uncovered = ball.clone();
            let mut sets = 0u64;
            while !uncovered.is_clear() {
                let mut best = (0usize, usize::MAX);
                for &x in &candidates {
                    let gain = balls[x][half].intersection_count(&uncovered);
                    if best.1 == usize::MAX || gain > best.0 {
                        best = (gain, x);
                    }
                }
                uncovered.difference_with(&balls[best.1][half]);
                sets += 1;
            }
            if sets > report.greedy_upper_bound {
                report.greedy_upper_bound = sets;
                report.upper_ball_center = c;
                report.upper_ball_radius = graph.hops_to_length(r as u64);
            }
        }
    }
    Ok(report)
}
