use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{sssp, DistanceOracle};
use crate::recgraph::{Family, MetricGraph, Subdiamond, Vertex};

/// A diamond graph with some subdiamonds replaced by paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientGraph {
    #[serde(skip)]
    pub graph: MetricGraph,
    pub vertex_count: usize,
    pub edges: Vec<[Vertex; 2]>,
    /// `projection[v]` is the quotient vertex of original vertex `v`.
    pub projection: Vec<Vertex>,
    pub collapsed: Vec<Subdiamond>,
}

/// Replaces each subdiamond of height `H` in `subs` by a path of length
/// `H` from its top to its bottom; a vertex `v` of the subdiamond goes to
/// the path vertex at position `d(v, top)`.
///
/// Quotient ids: the vertices outside every collapsed subdiamond come
/// first, in original id order, followed by the inner path vertices of each
/// subdiamond in input order, top side first.
pub fn collapse_subdiamonds(graph: &MetricGraph, subs: &[Subdiamond]) -> Result<QuotientGraph> {
    if graph.family() != Family::Diamond {
        return Err(Error::Family {
            expected: "diamond",
            found: graph.family().name().into(),
        });
    }
    for s in subs {
        if Subdiamond::from_path(graph, &s.root_edge_path)? != *s {
            return Err(Error::Domain(format!(
                "subdiamond {:?} does not belong to {}",
                s.root_edge_path,
                graph.id()
            )));
        }
    }
    for (i, a) in subs.iter().enumerate() {
        for b in &subs[i + 1..] {
            if a.encloses(b) || b.encloses(a) {
                return Err(Error::Precondition(format!(
                    "subdiamonds {:?} and {:?} are nested",
                    a.root_edge_path, b.root_edge_path
                )));
            }
        }
    }

    let n = graph.vertex_count();
    let mut inner = FixedBitSet::with_capacity(n);
    for s in subs {
        for v in s.vertices(graph) {
            if v != s.top && v != s.bottom {
                inner.insert(v as usize);
            }
        }
    }
    let mut projection = vec![Vertex::MAX; n];
    let mut next: Vertex = 0;
    for v in graph.vertices() {
        if !inner.contains(v as usize) {
            projection[v as usize] = next;
            next += 1;
        }
    }
    let mut edges: Vec<[Vertex; 2]> = graph
        .edges()
        .iter()
        .filter(|[u, v]| !inner.contains(*u as usize) && !inner.contains(*v as usize))
        .map(|&[u, v]| [projection[u as usize], projection[v as usize]])
        .collect();

    let oracle = DistanceOracle::new(graph).expect("diamond graph");
    for s in subs {
        // path[p] is the quotient vertex at distance p from the top
        let mut path = vec![projection[s.top as usize]];
        path.extend(next..next + s.height as Vertex - 1);
        path.push(projection[s.bottom as usize]);
        next += s.height as Vertex - 1;
        edges.extend(path.windows(2).map(|w| [w[0], w[1]]));
        for v in s.vertices(graph) {
            if inner.contains(v as usize) {
                projection[v as usize] = path[oracle.distance_hops(v, s.top) as usize];
            }
        }
    }

    let quotient = MetricGraph::from_edges_with_length(next as usize, &edges, graph.edge_length())?;
    Ok(QuotientGraph {
        graph: quotient,
        vertex_count: next as usize,
        edges,
        projection,
        collapsed: subs.to_vec(),
    })
}

impl QuotientGraph {
    /// Checks the projection against `original`: surjective, 1-Lipschitz,
    /// isometric on uncollapsed vertices, and preserving distances to the
    /// top and bottom of every collapsed subdiamond.
    pub fn verify(&self, original: &MetricGraph) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        let mut hit = FixedBitSet::with_capacity(self.vertex_count);
        for &p in &self.projection {
            hit.insert(p as usize);
        }
        if hit.count_ones(..) != self.vertex_count {
            return fail("projection is not surjective".into());
        }
        for &[u, v] in original.edges() {
            let (pu, pv) = (self.projection[u as usize], self.projection[v as usize]);
            if pu != pv && !self.graph.has_edge(pu, pv) {
                return fail(format!("edge {u}-{v} is stretched"));
            }
        }
        for s in &self.collapsed {
            for corner in [s.top, s.bottom] {
                let d = sssp(original, corner)?;
                let dq = sssp(&self.graph, self.projection[corner as usize])?;
                for v in s.vertices(original) {
                    if dq.hops(self.projection[v as usize]) != d.hops(v) {
                        return fail(format!("vertex {v} moved relative to corner {corner}"));
                    }
                }
            }
        }
        let mut inner = FixedBitSet::with_capacity(original.vertex_count());
        for s in &self.collapsed {
            for v in s.vertices(original) {
                if v != s.top && v != s.bottom {
                    inner.insert(v as usize);
                }
            }
        }
        inner.toggle_range(..);
        let outside: Vec<Vertex> = inner.ones().map(|v| v as Vertex).collect();
        for &u in &outside {
            let d = sssp(original, u)?;
            let dq = sssp(&self.graph, self.projection[u as usize])?;
            for &v in &outside {
                if dq.hops(self.projection[v as usize]) != d.hops(v) {
                    return fail(format!("distance {u}-{v} changed"));
                }
            }
        }
        Ok(())
    }
}

/// `graph` with every edge split in two. The midpoint of edge `i` gets id
/// `vertex_count + i`.
pub fn subdivide_edges(graph: &MetricGraph) -> Result<MetricGraph> {
    let n = graph.vertex_count() as Vertex;
    let edges: Vec<[Vertex; 2]> = graph
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(i, &[u, v])| [[u, n + i as Vertex], [n + i as Vertex, v]])
        .collect();
    MetricGraph::from_edges_with_length(
        graph.vertex_count() + graph.edge_count(),
        &edges,
        graph.edge_length() / 2,
    )
}
