use serde::Serialize;

use super::sssp;
use crate::error::Result;
use crate::recgraph::export::serialize_length;
use crate::recgraph::{digits, Gadget, Length, MetricGraph, Origin, Vertex};

/// Distance queries answered from vertex addresses alone.
///
/// The piece grown from an edge meets the rest of the graph only at its two
/// endpoints, so a vertex's distances to the ends of every enclosing piece
/// follow from the gadget's node distances, one level at a time. A query
/// climbs both vertices to their smallest common piece and combines the
/// endpoint distances through that piece's gadget. Cost is `O(level)`.
#[derive(Debug, Clone)]
pub struct DistanceOracle<'g> {
    graph: &'g MetricGraph,
    gadget: &'static Gadget,
    node_dist: Vec<Vec<u64>>,
    /// `heights[k]` = hop height of a level-`k` piece.
    heights: Vec<u64>,
}

#[derive(Debug, Clone, Copy)]
struct Anchor {
    node: u8,
    hops: u64,
}

impl<'g> DistanceOracle<'g> {
    /// `None` when the graph is not a substitution family.
    pub fn new(graph: &'g MetricGraph) -> Option<Self> {
        let gadget = graph.gadget()?;
        Some(DistanceOracle {
            graph,
            gadget,
            node_dist: gadget.node_distances(),
            heights: (0..=graph.level()).map(|k| graph.piece_height(k)).collect(),
        })
    }

    /// Distances from a slot vertex to the bottom and top of the level-`target`
    /// piece containing it.
    fn climb(&self, edge_level: u32, edge_index: u64, slot: u8, target: u32) -> [u64; 2] {
        let nd = &self.node_dist;
        let node = 2 + slot as usize;
        let h = self.heights[edge_level as usize + 1];
        let mut d = [h * nd[node][0], h * nd[node][1]];
        let b = self.gadget.branching();
        let (mut level, mut index) = (edge_level, edge_index);
        while level > target {
            let (x, y) = self.gadget.edges[(index % b) as usize];
            let (x, y) = (x as usize, y as usize);
            let h = self.heights[level as usize];
            d = [
                (d[0] + h * nd[x][0]).min(d[1] + h * nd[y][0]),
                (d[0] + h * nd[x][1]).min(d[1] + h * nd[y][1]),
            ];
            level -= 1;
            index /= b;
        }
        d
    }

    fn label_path(&self, v: Vertex) -> Option<(u32, u64, u8, Vec<u8>)> {
        match self.graph.origin(v) {
            Origin::Slot {
                edge_level,
                edge_index,
                slot,
            } => Some((
                edge_level,
                edge_index,
                slot,
                digits(edge_index, self.gadget.branching(), edge_level),
            )),
            _ => None,
        }
    }

    fn anchors(
        &self,
        v: Vertex,
        info: &Option<(u32, u64, u8, Vec<u8>)>,
        common: u32,
    ) -> Vec<Anchor> {
        match info {
            None => vec![Anchor {
                node: if v == 0 { 0 } else { 1 },
                hops: 0,
            }],
            Some((level, _, slot, _)) if *level == common => vec![Anchor {
                node: 2 + slot,
                hops: 0,
            }],
            Some((level, index, slot, path)) => {
                let [to_bottom, to_top] = self.climb(*level, *index, *slot, common + 1);
                let (x, y) = self.gadget.edges[path[common as usize] as usize];
                vec![
                    Anchor {
                        node: x,
                        hops: to_bottom,
                    },
                    Anchor {
                        node: y,
                        hops: to_top,
                    },
                ]
            }
        }
    }

    pub fn distance_hops(&self, u: Vertex, v: Vertex) -> u64 {
        if u == v {
            return 0;
        }
        if self.graph.level() == 0 {
            return 1;
        }
        let iu = self.label_path(u);
        let iv = self.label_path(v);
        let common = match (&iu, &iv) {
            (Some((_, _, _, pu)), Some((_, _, _, pv))) => {
                pu.iter().zip(pv).take_while(|(a, b)| a == b).count() as u32
            }
            _ => 0,
        };
        let h = self.heights[common as usize + 1];
        let au = self.anchors(u, &iu, common);
        let av = self.anchors(v, &iv, common);
        au.iter()
            .flat_map(|a| av.iter().map(move |b| (a, b)))
            .map(|(a, b)| a.hops + h * self.node_dist[a.node as usize][b.node as usize] + b.hops)
            .min()
            .unwrap()
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Length {
        self.graph.hops_to_length(self.distance_hops(u, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Hierarchical,
    BfsFallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub u: Vertex,
    pub v: Vertex,
    pub hops: u64,
    #[serde(serialize_with = "serialize_length")]
    pub length: Length,
    pub method: OracleMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// One-shot distance query; graphs outside the substitution families fall
/// back to BFS and say so in `note`.
pub fn distance_oracle(graph: &MetricGraph, u: Vertex, v: Vertex) -> Result<OracleResult> {
    graph.check_vertex(u)?;
    graph.check_vertex(v)?;
    let (hops, method, note) = match DistanceOracle::new(graph) {
        Some(o) => (o.distance_hops(u, v), OracleMethod::Hierarchical, None),
        None => (
            sssp(graph, u)?.hops(v),
            OracleMethod::BfsFallback,
            Some(format!(
                "{} graphs have no address hierarchy; answered by BFS",
                graph.family()
            )),
        ),
    };
    Ok(OracleResult {
        u,
        v,
        hops,
        length: graph.hops_to_length(hops),
        method,
        note,
    })
}
