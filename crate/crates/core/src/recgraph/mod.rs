//! Generators for the recursive graph families and their hierarchical
//! vertex addressing.
//!
//! Diamond, Laakso and M-graphs are produced by repeatedly substituting a
//! [`Gadget`] for every edge. Vertex ids are assigned in generation order:
//! the two root vertices are `0` (bottom) and `1` (top), and the vertices
//! created at level `k` follow all vertices of level `k - 1`, grouped by the
//! parent edge they replace. Edges of level `k` are numbered so that edge
//! `q * b + l` is child `l` of edge `q` of level `k - 1` (`b` = gadget edge
//! count), which makes an edge index the base-`b` reading of its label path.
//! Because lower levels are a prefix of higher ones, a vertex keeps both its
//! id and its address when the level grows.

mod address;
pub mod export;
pub mod gadget;
mod subdiamond;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use address::{AddressKind, VertexAddress};
pub use gadget::Gadget;
pub use subdiamond::{enumerate_subdiamonds, Subdiamond};

pub type Vertex = u32;

/// Exact length of a path or edge.
pub type Length = Ratio<u64>;

/// Default cap on the number of edges a generator may produce.
pub const DEFAULT_MAX_EDGES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Diamond,
    Laakso,
    MVariant,
    QuaternaryTree,
    Generic,
}

impl Family {
    pub fn gadget(self) -> Option<&'static Gadget> {
        match self {
            Family::Diamond => Some(&gadget::DIAMOND),
            Family::Laakso => Some(&gadget::LAAKSO),
            Family::MVariant => Some(&gadget::M_VARIANT),
            Family::QuaternaryTree | Family::Generic => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Diamond => "diamond",
            Family::Laakso => "laakso",
            Family::MVariant => "m_variant",
            Family::QuaternaryTree => "quaternary_tree",
            Family::Generic => "generic",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::QuaternaryTree => "q",
            Family::Generic => "g",
            f => f.gadget().map(|g| g.tag).unwrap_or("g"),
        }
    }

    pub fn is_recursive(self) -> bool {
        self.gadget().is_some()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diamond" | "d" => Ok(Family::Diamond),
            "laakso" | "l" => Ok(Family::Laakso),
            "m" | "m_variant" | "m-variant" | "mvariant" => Ok(Family::MVariant),
            "tree" | "q" | "quaternary_tree" | "quaternary-tree" => Ok(Family::QuaternaryTree),
            "generic" | "g" => Ok(Family::Generic),
            other => Err(Error::Usage(format!("unknown graph family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    Unweighted,
    Weighted,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unweighted" | "u" => Ok(Normalization::Unweighted),
            "weighted" | "w" => Ok(Normalization::Weighted),
            other => Err(Error::Usage(format!("unknown normalization `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateOptions {
    pub max_edges: u64,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

/// Where a vertex of a recursive family came from.
/// Which of a gadget's two bottom-to-top geodesics to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Left = 0,
    Right = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Bottom,
    Top,
    /// Created in slot `slot` when edge `edge_index` of level `edge_level`
    /// was replaced by the gadget; the vertex is born at `edge_level + 1`.
    Slot {
        edge_level: u32,
        edge_index: u64,
        slot: u8,
    },
}

/// A finite graph with uniform exact edge length.
///
/// Distances are integer hop counts; [`MetricGraph::edge_length`] converts
/// them to lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    family: Family,
    level: u32,
    normalization: Normalization,
    edge_length: Length,
    offsets: Vec<usize>,
    adjacency: Vec<Vertex>,
    edges: Vec<[Vertex; 2]>,
    /// `level_vertex_counts[k]` is the vertex count of the level-`k` graph.
    level_vertex_counts: Vec<u64>,
}

/// Vertex and edge counts of `family` at `level`, or `None` on overflow.
pub fn closed_form_counts(family: Family, level: u32) -> Option<(u128, u128)> {
    match family {
        Family::Diamond => {
            let e = 4u128.checked_pow(level)?;
            Some((2 + 2 * (e - 1) / 3, e))
        }
        Family::Laakso => {
            let e = 6u128.checked_pow(level)?;
            Some((2 + 4 * (e - 1) / 5, e))
        }
        Family::MVariant => {
            let e = 10u128.checked_pow(level)?;
            Some((2 + 8 * (e - 1) / 9, e))
        }
        Family::QuaternaryTree => {
            let v = (4u128.checked_pow(level.checked_add(1)?)? - 1) / 3;
            Some((v, v - 1))
        }
        Family::Generic => None,
    }
}

impl MetricGraph {
    pub fn generate(family: Family, level: u32, normalization: Normalization) -> Result<Self> {
        Self::generate_with(family, level, normalization, &GenerateOptions::default())
    }

    pub fn generate_with(
        family: Family,
        level: u32,
        normalization: Normalization,
        options: &GenerateOptions,
    ) -> Result<Self> {
        if family == Family::Generic {
            return Err(Error::Usage(
                "generic graphs are built from edge lists, not generated".into(),
            ));
        }
        let requested = closed_form_counts(family, level).map_or(u128::MAX, |(_, e)| e);
        if requested > u128::from(options.max_edges) {
            return Err(Error::SizeCap {
                requested,
                cap: options.max_edges,
            });
        }
        match family.gadget() {
            Some(g) => Ok(Self::substitute(family, g, level, normalization)),
            None => Ok(Self::quaternary_tree(level)),
        }
    }

    fn substitute(family: Family, g: &Gadget, level: u32, normalization: Normalization) -> Self {
        let slots = g.slot_count() as u64;
        let mut edges: Vec<[Vertex; 2]> = vec![[0, 1]];
        let mut next_id: u64 = 2;
        let mut counts = vec![2u64];
        for _ in 0..level {
            let mut expanded = Vec::with_capacity(edges.len() * g.edges.len());
            for (e, &[u, v]) in edges.iter().enumerate() {
                let base = next_id + e as u64 * slots;
                let node = |x: u8| match x {
                    0 => u,
                    1 => v,
                    s => (base + u64::from(s) - 2) as Vertex,
                };
                expanded.extend(g.edges.iter().map(|&(a, b)| [node(a), node(b)]));
            }
            next_id += edges.len() as u64 * slots;
            counts.push(next_id);
            edges = expanded;
        }
        let edge_length = match normalization {
            Normalization::Unweighted => Length::from_integer(1),
            Normalization::Weighted => Length::new(1, g.diameter.pow(level)),
        };
        let (offsets, adjacency) = build_csr(next_id as usize, &edges);
        MetricGraph {
            family,
            level,
            normalization,
            edge_length,
            offsets,
            adjacency,
            edges,
            level_vertex_counts: counts,
        }
    }

    fn quaternary_tree(depth: u32) -> Self {
        let (v, _) = closed_form_counts(Family::QuaternaryTree, depth).expect("checked by caller");
        let edges: Vec<[Vertex; 2]> = (1..v as Vertex).map(|c| [(c - 1) / 4, c]).collect();
        let (offsets, adjacency) = build_csr(v as usize, &edges);
        MetricGraph {
            family: Family::QuaternaryTree,
            level: depth,
            normalization: Normalization::Unweighted,
            edge_length: Length::from_integer(1),
            offsets,
            adjacency,
            edges,
            level_vertex_counts: Vec::new(),
        }
    }

    /// Builds a generic unit-length graph from an undirected edge list.
    pub fn from_edges(vertex_count: usize, edges: &[[Vertex; 2]]) -> Result<Self> {
        Self::from_edges_with_length(vertex_count, edges, Length::from_integer(1))
    }

    pub fn from_edges_with_length(
        vertex_count: usize,
        edges: &[[Vertex; 2]],
        edge_length: Length,
    ) -> Result<Self> {
        if edge_length <= Length::from_integer(0) {
            return Err(Error::Domain("edge length must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &[u, v] in edges {
            for x in [u, v] {
                if x as usize >= vertex_count {
                    return Err(Error::Range {
                        vertex: x as usize,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::Precondition(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Precondition(format!("parallel edge {u}-{v}")));
            }
        }
        let (offsets, adjacency) = build_csr(vertex_count, edges);
        Ok(MetricGraph {
            family: Family::Generic,
            level: 0,
            normalization: Normalization::Unweighted,
            edge_length,
            offsets,
            adjacency,
            edges: edges.to_vec(),
            level_vertex_counts: Vec::new(),
        })
    }

    pub(crate) fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn edge_length(&self) -> Length {
        self.edge_length
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count() as Vertex
    }

    /// Neighbors of `v` in increasing id order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges in generation order, oriented bottom to top for the
    /// substitution families.
    pub fn edges(&self) -> &[[Vertex; 2]] {
        &self.edges
    }

    pub fn gadget(&self) -> Option<&'static Gadget> {
        self.family.gadget()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::Range {
                vertex: v as usize,
                count: self.vertex_count(),
            })
        }
    }

    /// Compact identifier, `family:level[:weighted]`.
    pub fn id(&self) -> String {
        match (self.family, self.normalization) {
            (Family::Generic, _) => format!("generic:{}", self.vertex_count()),
            (f, Normalization::Weighted) => format!("{}:{}:weighted", f.name(), self.level),
            (f, Normalization::Unweighted) => format!("{}:{}", f.name(), self.level),
        }
    }

    pub fn hops_to_length(&self, hops: u64) -> Length {
        self.edge_length * hops
    }

    /// Largest hop count whose length does not exceed `length`.
    pub fn length_to_hops(&self, length: Length) -> u64 {
        (length / self.edge_length).to_integer()
    }

    pub fn bottom(&self) -> Option<Vertex> {
        self.family.is_recursive().then_some(0)
    }

    pub fn top(&self) -> Option<Vertex> {
        self.family.is_recursive().then_some(1)
    }

    /// Vertex count of the level-`k` member of this family (`k <= level`).
    pub fn level_vertex_count(&self, k: u32) -> Option<u64> {
        self.level_vertex_counts.get(k as usize).copied()
    }

    /// Hop distance between the endpoints of any level-`k` edge once fully
    /// expanded to this graph's level.
    pub fn piece_height(&self, k: u32) -> u64 {
        self.gadget().map_or(1, |g| g.diameter.pow(self.level - k))
    }

    fn require_recursive(&self) -> Result<&'static Gadget> {
        self.gadget().ok_or_else(|| Error::Family {
            expected: "diamond, laakso or m_variant",
            found: self.family.name().to_string(),
        })
    }

    /// The vertex in `slot` of the gadget replacing edge `edge_index` of
    /// level `edge_level`.
    pub fn slot_vertex(&self, edge_level: u32, edge_index: u64, slot: u8) -> Vertex {
        let g = self.gadget().expect("recursive family");
        (self.level_vertex_counts[edge_level as usize]
            + edge_index * g.slot_count() as u64
            + u64::from(slot)) as Vertex
    }

    /// Bottom and top endpoint of edge `index` of level `k`, as vertices of
    /// this graph.
    pub fn edge_endpoints(&self, k: u32, index: u64) -> [Vertex; 2] {
        let g = self.gadget().expect("recursive family");
        let b = g.branching();
        let mut ends = [0, 1];
        for j in 1..=k {
            let parent = index / b.pow(k - j + 1);
            let label = (index / b.pow(k - j)) % b;
            let (x, y) = g.edges[label as usize];
            let node = |n: u8| match n {
                0 => ends[0],
                1 => ends[1],
                s => self.slot_vertex(j - 1, parent, s - 2),
            };
            ends = [node(x), node(y)];
        }
        ends
    }

    /// A bottom-to-top geodesic through the piece grown from edge `index` of
    /// level `k`. `choose` is asked for a branch at every gadget copy
    /// entered, in depth-first order.
    pub fn piece_geodesic(
        &self,
        k: u32,
        index: u64,
        choose: &mut dyn FnMut() -> Branch,
    ) -> Result<Vec<Vertex>> {
        let g = self.require_recursive()?;
        if k > self.level || index >= g.branching().pow(k) {
            return Err(Error::Domain(format!(
                "no edge {index} at level {k} of {}",
                self.id()
            )));
        }
        let ends = self.edge_endpoints(k, index);
        let mut out = vec![ends[0]];
        self.extend_geodesic(k, index, ends, choose, &mut out);
        Ok(out)
    }

    fn extend_geodesic(
        &self,
        k: u32,
        index: u64,
        ends: [Vertex; 2],
        choose: &mut dyn FnMut() -> Branch,
        out: &mut Vec<Vertex>,
    ) {
        if k == self.level {
            out.push(ends[1]);
            return;
        }
        let g = self.gadget().expect("recursive family");
        let node = |x: u8| match x {
            0 => ends[0],
            1 => ends[1],
            s => self.slot_vertex(k, index, s - 2),
        };
        for &l in g.branches[choose() as usize] {
            let (x, y) = g.edges[l as usize];
            let child = index * g.branching() + u64::from(l);
            self.extend_geodesic(k + 1, child, [node(x), node(y)], choose, out);
        }
    }

    pub fn origin(&self, v: Vertex) -> Origin {
        let g = self.gadget().expect("recursive family");
        match v {
            0 => Origin::Bottom,
            1 => Origin::Top,
            _ => {
                let id = u64::from(v);
                let born = self.level_vertex_counts.partition_point(|&c| c <= id) as u32;
                let offset = id - self.level_vertex_counts[born as usize - 1];
                let slots = g.slot_count() as u64;
                Origin::Slot {
                    edge_level: born - 1,
                    edge_index: offset / slots,
                    slot: (offset % slots) as u8,
                }
            }
        }
    }

    pub fn address(&self, v: Vertex) -> VertexAddress {
        match self.family {
            Family::Generic => VertexAddress::generic(v),
            Family::QuaternaryTree => {
                let mut seq = Vec::new();
                let mut c = v;
                while c > 0 {
                    seq.push(((c - 1) % 4) as u8);
                    c = (c - 1) / 4;
                }
                seq.reverse();
                VertexAddress::tree(seq)
            }
            f => match self.origin(v) {
                Origin::Bottom => VertexAddress::root_bottom(f),
                Origin::Top => VertexAddress::root_top(f),
                Origin::Slot {
                    edge_level,
                    edge_index,
                    slot,
                } => {
                    let b = f.gadget().unwrap().branching();
                    VertexAddress::derived(
                        f,
                        edge_level + 1,
                        digits(edge_index, b, edge_level),
                        slot,
                    )
                }
            },
        }
    }

    /// Inverse of [`MetricGraph::address`].
    pub fn resolve(&self, address: &VertexAddress) -> Option<Vertex> {
        let v = match (&address.kind, self.family) {
            (AddressKind::Generic { id }, Family::Generic) => *id,
            (AddressKind::Tree { sequence }, Family::QuaternaryTree) => {
                if sequence.len() > self.level as usize || sequence.iter().any(|&d| d > 3) {
                    return None;
                }
                sequence.iter().fold(0u32, |c, &d| 4 * c + 1 + u32::from(d))
            }
            (AddressKind::RootBottom, f) if f.is_recursive() && address.family == f => 0,
            (AddressKind::RootTop, f) if f.is_recursive() && address.family == f => 1,
            (
                AddressKind::Derived {
                    birth_level,
                    parent_edge_path,
                    slot,
                },
                f,
            ) if f.is_recursive() && address.family == f => {
                let g = f.gadget().unwrap();
                let b = g.branching() as u8;
                if *birth_level == 0
                    || *birth_level > self.level
                    || parent_edge_path.len() != *birth_level as usize - 1
                    || parent_edge_path.iter().any(|&l| l >= b)
                    || *slot as usize >= g.slot_count()
                {
                    return None;
                }
                let index = parent_edge_path
                    .iter()
                    .fold(0u64, |q, &l| q * u64::from(b) + u64::from(l));
                self.slot_vertex(birth_level - 1, index, *slot)
            }
            _ => return None,
        };
        ((v as usize) < self.vertex_count()).then_some(v)
    }

    pub fn address_string(&self, v: Vertex) -> String {
        self.address(v).to_string()
    }

    /// Address-preserving injection of the level `n - 1` graph into this one.
    pub fn include_lower_level(&self) -> Result<LevelInclusion> {
        if self.level == 0 {
            return Err(Error::Domain("level 0 has no lower level".into()));
        }
        self.include_from_level(self.level - 1)
    }

    /// Address-preserving injection of the level-`lower` graph into this one.
    pub fn include_from_level(&self, lower: u32) -> Result<LevelInclusion> {
        let g = self.require_recursive()?;
        if lower > self.level {
            return Err(Error::Domain(format!(
                "level {lower} is above this graph's level {}",
                self.level
            )));
        }
        let count = self.level_vertex_counts[lower as usize];
        let hop_scale = g.diameter.pow(self.level - lower);
        let length_scale = match self.normalization {
            Normalization::Unweighted => Length::from_integer(hop_scale),
            Normalization::Weighted => Length::from_integer(1),
        };
        Ok(LevelInclusion {
            from_level: lower,
            to_level: self.level,
            map: (0..count as Vertex).collect(),
            hop_scale,
            length_scale,
        })
    }
}

/// The inclusion of a lower level into a higher one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelInclusion {
    pub from_level: u32,
    pub to_level: u32,
    /// `map[v]` is the image of lower-level vertex `v`.
    pub map: Vec<Vertex>,
    /// Factor applied to hop distances.
    pub hop_scale: u64,
    /// Factor applied to lengths under the graph's normalization.
    pub length_scale: Length,
}

impl LevelInclusion {
    pub fn compose(&self, then: &LevelInclusion) -> Result<LevelInclusion> {
        if self.to_level != then.from_level {
            return Err(Error::Domain("inclusions do not chain".into()));
        }
        Ok(LevelInclusion {
            from_level: self.from_level,
            to_level: then.to_level,
            map: self.map.iter().map(|&v| then.map[v as usize]).collect(),
            hop_scale: self.hop_scale * then.hop_scale,
            length_scale: self.length_scale * then.length_scale,
        })
    }
}

/// The `len` base-`b` digits of `index`, most significant first.
pub(crate) fn digits(mut index: u64, b: u64, len: u32) -> Vec<u8> {
    let mut out = vec![0u8; len as usize];
    for slot in out.iter_mut().rev() {
        *slot = (index % b) as u8;
        index /= b;
    }
    out
}

fn build_csr(n: usize, edges: &[[Vertex; 2]]) -> (Vec<usize>, Vec<Vertex>) {
    let mut offsets = vec![0usize; n + 1];
    for &[u, v] in edges {
        offsets[u as usize + 1] += 1;
        offsets[v as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut adjacency = vec![0 as Vertex; offsets[n]];
    for &[u, v] in edges {
        adjacency[fill[u as usize]] = v;
        fill[u as usize] += 1;
        adjacency[fill[v as usize]] = u;
        fill[v as usize] += 1;
    }
    for i in 0..n {
        adjacency[offsets[i]..offsets[i + 1]].sort_unstable();
    }
    (offsets, adjacency)
}
