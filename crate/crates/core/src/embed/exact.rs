use rayon::prelude::*;
use serde::Serialize;

use super::symmetry::orbit_representatives;
use super::{
    require_connected_source, value_lt, EmbeddingMap, ExactValue, Frac, SolverResult, SolverStatus,
};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, UNREACHABLE};
use crate::recgraph::{MetricGraph, Vertex};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Targets above this size are refused: the search keeps all-pairs
/// distances and per-vertex distance orders.
pub const MAX_TARGET_VERTICES: usize = 8192;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOptions {
    /// Total search nodes, split evenly over the root images.
    pub node_budget: u64,
    /// Explore root subtrees on the rayon pool. Results do not depend on it.
    pub parallel: bool,
    /// A known map whose distortion seeds the bound; the search then looks
    /// only for strictly better maps.
    pub preload: Option<Vec<Vertex>>,
    /// Restrict the root's image to one vertex per target symmetry class.
    pub symmetry: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            parallel: false,
            preload: None,
            symmetry: true,
        }
    }
}

/// What was searched. When `exhausted`, every map with distortion below
/// `bound` would have been found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchCertificate {
    pub exhausted: bool,
    pub bound: ExactValue,
    /// Source vertices in branching order.
    pub source_order: Vec<Vertex>,
    /// Images tried for the first source vertex.
    pub root_images: Vec<Vertex>,
    /// Complete maps found that beat the bound current at the time.
    pub improving_leaves: u64,
    pub preloaded: bool,
}

/// Target distances plus, for each vertex, all vertices sorted by distance
/// from it (ties by id).
pub(crate) struct TargetIndex {
    pub dist: DistanceMatrix,
    by_distance: Vec<Vertex>,
    pub roots: Vec<Vertex>,
}

impl TargetIndex {
    pub fn new(target: &MetricGraph, symmetry: bool) -> Result<Self> {
        let n = target.vertex_count();
        if n > MAX_TARGET_VERTICES {
            return Err(Error::Budget(format!(
                "target has {n} vertices; the exact search handles at most {MAX_TARGET_VERTICES}"
            )));
        }
        let dist = DistanceMatrix::new(target);
        let mut by_distance = Vec::with_capacity(n * n);
        for a in target.vertices() {
            let row = dist.row(a);
            let mut order: Vec<Vertex> = target.vertices().collect();
            order.sort_by_key(|&w| (row[w as usize], w));
            by_distance.extend(order);
        }
        let roots = if symmetry {
            orbit_representatives(target)
        } else {
            target.vertices().collect()
        };
        Ok(TargetIndex {
            dist,
            by_distance,
            roots,
        })
    }

    fn len(&self) -> usize {
        self.dist.len()
    }

    fn nearest_from(&self, a: Vertex) -> &[Vertex] {
        let n = self.len();
        &self.by_distance[a as usize * n..(a as usize + 1) * n]
    }
}

/// A finite metric on `0..k` given by hop counts.
pub(crate) struct SourceMetric {
    pub k: usize,
    pub d: Vec<u32>,
}

impl SourceMetric {
    pub fn from_graph(graph: &MetricGraph) -> Self {
        let m = DistanceMatrix::new(graph);
        let k = graph.vertex_count();
        let d = (0..k as Vertex).flat_map(|u| m.row(u).to_vec()).collect();
        SourceMetric { k, d }
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.k + v]
    }

    fn eccentricity(&self, u: usize) -> u32 {
        (0..self.k).map(|v| self.get(u, v)).max().unwrap_or(0)
    }

    /// Branching order: starting from the vertex of largest eccentricity
    /// (lowest id on ties), repeatedly take the unplaced vertex closest to
    /// the placed ones, lowest id on ties. On a graph metric this visits
    /// vertices breadth first.
    pub fn branching_order(&self) -> Vec<usize> {
        let root = (0..self.k)
            .max_by_key(|&u| (self.eccentricity(u), std::cmp::Reverse(u)))
            .unwrap();
        let mut order = vec![root];
        let mut gap: Vec<u32> = (0..self.k).map(|v| self.get(root, v)).collect();
        let mut placed = vec![false; self.k];
        placed[root] = true;
        while order.len() < self.k {
            let next = (0..self.k)
                .filter(|&v| !placed[v])
                .min_by_key(|&v| (gap[v], v))
                .unwrap();
            placed[next] = true;
            order.push(next);
            for (v, g) in gap.iter_mut().enumerate() {
                *g = (*g).min(self.get(next, v));
            }
        }
        order
    }
}

pub(crate) struct SubtreeOutcome {
    pub best: Option<(Frac, Vec<Vertex>)>,
    pub nodes: u64,
    pub improving_leaves: u64,
    pub exhausted: bool,
}

struct Dfs<'m> {
    src: &'m SourceMetric,
    tgt: &'m TargetIndex,
    order: &'m [usize],
    /// `anchor[i]`: position of the earlier vertex closest to `order[i]`.
    anchor: &'m [usize],
    image: Vec<Vertex>,
    used: Vec<bool>,
    expansion: Vec<Frac>,
    contraction: Vec<Frac>,
    incumbent: Option<Frac>,
    best: Option<Vec<Vertex>>,
    nodes: u64,
    budget: u64,
    improving: u64,
    aborted: bool,
}

impl Dfs<'_> {
    fn descend(&mut self, depth: usize) {
        let v = self.order[depth];
        let a = self.order[self.anchor[depth]];
        let da = u64::from(self.src.get(a, v));
        let (e0, c0) = (self.expansion[depth - 1], self.contraction[depth - 1]);
        let tgt = self.tgt;
        for &w in tgt.nearest_from(self.image[a]) {
            if self.used[w as usize] {
                continue;
            }
            let dw = tgt.dist.get(self.image[a], w);
            if dw == UNREACHABLE {
                break;
            }
            // later candidates are farther from the anchor's image, so their
            // expansion alone already reaches this
            if c0.num > 0 && !value_lt(Some(Frac::new(u64::from(dw), da).mul(c0)), self.incumbent) {
                break;
            }
            if self.nodes >= self.budget {
                self.aborted = true;
                return;
            }
            self.nodes += 1;
            let (mut e, mut c) = (e0, c0);
            let mut feasible = true;
            for &u in &self.order[..depth] {
                let dy = tgt.dist.get(self.image[u], w);
                if dy == UNREACHABLE {
                    feasible = false;
                    break;
                }
                let (dx, dy) = (u64::from(self.src.get(u, v)), u64::from(dy));
                e = e.max(Frac::new(dy, dx));
                c = c.max(Frac::new(dx, dy));
            }
            if !feasible || !value_lt(Some(e.mul(c)), self.incumbent) {
                continue;
            }
            self.image[v] = w;
            if depth + 1 == self.order.len() {
                self.incumbent = Some(e.mul(c));
                self.best = Some(self.image.clone());
                self.improving += 1;
                continue;
            }
            self.used[w as usize] = true;
            self.expansion[depth] = e;
            self.contraction[depth] = c;
            self.descend(depth + 1);
            self.used[w as usize] = false;
            if self.aborted {
                return;
            }
        }
    }
}

/// Value of a complete injective assignment, `None` if it collapses a pair
/// or the target is disconnected between images.
pub(crate) fn assignment_value(
    src: &SourceMetric,
    tgt: &TargetIndex,
    image: &[Vertex],
) -> Option<Frac> {
    let mut e = Frac::new(0, 1);
    let mut c = Frac::new(0, 1);
    for u in 0..src.k {
        for v in u + 1..src.k {
            let dy = tgt.dist.get(image[u], image[v]);
            if dy == 0 || dy == UNREACHABLE {
                return None;
            }
            let (dx, dy) = (u64::from(src.get(u, v)), u64::from(dy));
            e = e.max(Frac::new(dy, dx));
            c = c.max(Frac::new(dx, dy));
        }
    }
    Some(e.mul(c))
}

pub(crate) struct SearchPlan {
    pub order: Vec<usize>,
    pub anchor: Vec<usize>,
}

impl SearchPlan {
    pub fn new(src: &SourceMetric) -> Self {
        let order = src.branching_order();
        let anchor = (0..order.len())
            .map(|i| {
                (0..i)
                    .min_by_key(|&j| (src.get(order[j], order[i]), j))
                    .unwrap_or(0)
            })
            .collect();
        SearchPlan { order, anchor }
    }
}

/// Searches the maps sending the first vertex of the plan to `root`.
pub(crate) fn search_subtree(
    src: &SourceMetric,
    tgt: &TargetIndex,
    plan: &SearchPlan,
    root: Vertex,
    budget: u64,
    incumbent: Option<Frac>,
) -> SubtreeOutcome {
    if budget == 0 {
        return SubtreeOutcome {
            best: None,
            nodes: 0,
            improving_leaves: 0,
            exhausted: false,
        };
    }
    let k = src.k;
    let mut dfs = Dfs {
        src,
        tgt,
        order: &plan.order,
        anchor: &plan.anchor,
        image: vec![Vertex::MAX; k],
        used: vec![false; tgt.len()],
        expansion: vec![Frac::new(0, 1); k],
        contraction: vec![Frac::new(0, 1); k],
        incumbent,
        best: None,
        nodes: 1,
        budget,
        improving: 0,
        aborted: false,
    };
    dfs.image[plan.order[0]] = root;
    dfs.used[root as usize] = true;
    dfs.descend(1);
    SubtreeOutcome {
        best: dfs.best.map(|b| (dfs.incumbent.unwrap(), b)),
        nodes: dfs.nodes,
        improving_leaves: dfs.improving,
        exhausted: !dfs.aborted,
    }
}

pub(crate) struct SearchOutcome {
    pub best: Option<(Frac, Vec<Vertex>)>,
    pub nodes: u64,
    pub improving_leaves: u64,
    pub exhausted: bool,
}

/// Runs every root subtree with an equal share of `budget`, each starting
/// from `incumbent`, and keeps the least value (lexicographically least
/// assignment on ties). Subtrees never share bounds, so the outcome is the
/// same whether or not they run in parallel.
pub(crate) fn search_all(
    src: &SourceMetric,
    tgt: &TargetIndex,
    budget: u64,
    incumbent: Option<Frac>,
    parallel: bool,
) -> SearchOutcome {
    let plan = SearchPlan::new(src);
    let roots = &tgt.roots;
    let r = roots.len() as u64;
    let share = |i: usize| budget / r + u64::from((i as u64) < budget % r);
    let run =
        |(i, &root): (usize, &Vertex)| search_subtree(src, tgt, &plan, root, share(i), incumbent);
    let outcomes: Vec<SubtreeOutcome> = if parallel {
        roots.par_iter().enumerate().map(run).collect()
    } else {
        roots.iter().enumerate().map(run).collect()
    };
    let mut out = SearchOutcome {
        best: None,
        nodes: 0,
        improving_leaves: 0,
        exhausted: true,
    };
    for o in outcomes {
        out.nodes += o.nodes;
        out.improving_leaves += o.improving_leaves;
        out.exhausted &= o.exhausted;
        if let Some((value, image)) = o.best {
            let better = match &out.best {
                None => true,
                Some((bv, bi)) => value.lt(*bv) || (!bv.lt(value) && image < *bi),
            };
            if better {
                out.best = Some((value, image));
            }
        }
    }
    out
}

/// Minimum distortion of an injective map from `source` into `target` by
/// branch and bound.
pub fn min_distortion_exact<'a>(
    source: &'a MetricGraph,
    target: &'a MetricGraph,
    options: &ExactOptions,
) -> Result<SolverResult<'a>> {
    if options.node_budget == 0 {
        return Err(Error::Domain("node budget must be positive".into()));
    }
    require_connected_source(source)?;
    if source.vertex_count() > target.vertex_count() {
        return Ok(SolverResult {
            status: SolverStatus::InfeasibleInjective,
            value: ExactValue::Infinite,
            witness: None,
            nodes_explored: 0,
            certificate: None,
        });
    }
    let src = SourceMetric::from_graph(source);
    let tgt = TargetIndex::new(target, options.symmetry)?;
    let preload = match &options.preload {
        Some(p) => {
            let map = EmbeddingMap::new(source, target, p.clone())?;
            Some((assignment_value(&src, &tgt, map.assignment()), map))
        }
        None => None,
    };
    let start = preload.as_ref().and_then(|(v, _)| *v);
    let outcome = search_all(&src, &tgt, options.node_budget, start, options.parallel);

    let (value, witness) = match (outcome.best, preload) {
        (Some((v, image)), _) => (Some(v), Some(EmbeddingMap::new(source, target, image)?)),
        (None, Some((v, map))) => (v, Some(map)),
        (None, None) => (None, None),
    };
    let value = ExactValue::from_frac(value);
    let status = if outcome.exhausted {
        SolverStatus::Optimal
    } else {
        SolverStatus::UpperBoundOnly
    };
    let plan = SearchPlan::new(&src);
    Ok(SolverResult {
        status,
        value: value.clone(),
        witness,
        nodes_explored: outcome.nodes,
        certificate: Some(SearchCertificate {
            exhausted: outcome.exhausted,
            bound: value,
            source_order: plan.order.iter().map(|&v| v as Vertex).collect(),
            root_images: tgt.roots.clone(),
            improving_leaves: outcome.improving_leaves,
            preloaded: options.preload.is_some(),
        }),
    })
}
