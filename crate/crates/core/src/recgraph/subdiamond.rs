use serde::Serialize;

use super::{digits, Family, MetricGraph, Origin, Vertex};
use crate::error::{Error, Result};

/// The part of a diamond graph that evolved from one edge of a lower level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subdiamond {
    /// Labels of the edge it evolved from; its length is the edge's level.
    pub root_edge_path: Vec<u8>,
    #[serde(skip)]
    pub edge_index: u64,
    pub height: u64,
    pub top: Vertex,
    pub bottom: Vertex,
    pub leftmost: Vertex,
    pub rightmost: Vertex,
}

fn require_diamond(graph: &MetricGraph) -> Result<()> {
    if graph.family() == Family::Diamond {
        Ok(())
    } else {
        Err(Error::Family {
            expected: "diamond",
            found: graph.family().name().to_string(),
        })
    }
}

impl Subdiamond {
    /// The subdiamond grown from edge `index` of level `k`; needs `k < n`.
    pub fn from_edge(graph: &MetricGraph, k: u32, index: u64) -> Result<Self> {
        require_diamond(graph)?;
        if k >= graph.level() {
            return Err(Error::Domain(format!(
                "an edge of level {k} does not span a subdiamond of height >= 2 in level {}",
                graph.level()
            )));
        }
        if index >= 4u64.pow(k) {
            return Err(Error::Domain(format!("level {k} has no edge {index}")));
        }
        let [bottom, top] = graph.edge_endpoints(k, index);
        Ok(Subdiamond {
            root_edge_path: digits(index, 4, k),
            edge_index: index,
            height: graph.piece_height(k),
            top,
            bottom,
            leftmost: graph.slot_vertex(k, index, 0),
            rightmost: graph.slot_vertex(k, index, 1),
        })
    }

    pub fn from_path(graph: &MetricGraph, path: &[u8]) -> Result<Self> {
        if path.iter().any(|&l| l > 3) {
            return Err(Error::Domain("diamond edge labels are 0..=3".into()));
        }
        let index = path.iter().fold(0u64, |q, &l| 4 * q + u64::from(l));
        Self::from_edge(graph, path.len() as u32, index)
    }

    pub fn level(&self) -> u32 {
        self.root_edge_path.len() as u32
    }

    pub fn contains(&self, graph: &MetricGraph, v: Vertex) -> bool {
        if v == self.top || v == self.bottom {
            return true;
        }
        match graph.origin(v) {
            Origin::Slot {
                edge_level,
                edge_index,
                ..
            } => {
                let k = self.level();
                edge_level >= k && edge_index / 4u64.pow(edge_level - k) == self.edge_index
            }
            _ => false,
        }
    }

    /// Whether `other` lies inside this subdiamond (or equals it).
    pub fn encloses(&self, other: &Subdiamond) -> bool {
        other.root_edge_path.starts_with(&self.root_edge_path)
    }

    /// All vertices, in increasing id order.
    pub fn vertices(&self, graph: &MetricGraph) -> Vec<Vertex> {
        let mut out = vec![self.bottom, self.top];
        let k = self.level();
        for born_from in k..graph.level() {
            let span = 4u64.pow(born_from - k);
            for e in self.edge_index * span..(self.edge_index + 1) * span {
                out.push(graph.slot_vertex(born_from, e, 0));
                out.push(graph.slot_vertex(born_from, e, 1));
            }
        }
        out.sort_unstable();
        out
    }

    /// The four subdiamonds one level down, in label order; empty at height 2.
    pub fn children(&self, graph: &MetricGraph) -> Vec<Subdiamond> {
        if self.height <= 2 {
            return Vec::new();
        }
        (0..4)
            .map(|l| {
                Subdiamond::from_edge(graph, self.level() + 1, self.edge_index * 4 + l).unwrap()
            })
            .collect()
    }
}

/// Every subdiamond of height at least `min_height`, ordered by level then
/// edge index.
pub fn enumerate_subdiamonds(graph: &MetricGraph, min_height: u64) -> Result<Vec<Subdiamond>> {
    require_diamond(graph)?;
    let n = graph.level();
    if min_height < 2 || !min_height.is_power_of_two() || min_height > 1 << n {
        return Err(Error::Domain(format!(
            "min_height must be a power of two in [2, {}], got {min_height}",
            1u64 << n
        )));
    }
    let max_level = n - min_height.trailing_zeros();
    let mut out = Vec::new();
    for k in 0..=max_level {
        for e in 0..4u64.pow(k) {
            out.push(Subdiamond::from_edge(graph, k, e)?);
        }
    }
    Ok(out)
}
