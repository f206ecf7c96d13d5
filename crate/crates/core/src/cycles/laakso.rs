use serde::{Serialize, Serializer};

use super::Cycle;
use crate::error::{Error, Result};
use crate::metric::DistanceOracle;
use crate::recgraph::{Branch, Family, MetricGraph, Vertex};

// Laakso gadget labels: 0 bottom-jl, 1 jl-ml, 2 ml-jh, 3 jl-mr, 4 mr-jh, 5 jh-top.
const JL: u8 = 0;
/// Sub-pieces met when walking the central cycle from jl through ml.
const ARCS_FORWARD: [u8; 4] = [1, 2, 4, 3];

fn require_laakso(graph: &MetricGraph) -> Result<()> {
    if graph.family() == Family::Laakso {
        Ok(())
    } else {
        Err(Error::Family {
            expected: "laakso",
            found: graph.family().name().into(),
        })
    }
}

fn path_index(path: &[u8]) -> Result<u64> {
    if path.iter().any(|&l| l > 5) {
        return Err(Error::Domain("laakso edge labels are 0..=5".into()));
    }
    Ok(path.iter().fold(0u64, |q, &l| 6 * q + u64::from(l)))
}

fn left_geodesic(graph: &MetricGraph, k: u32, index: u64) -> Vec<Vertex> {
    graph
        .piece_geodesic(k, index, &mut || Branch::Left)
        .expect("valid piece")
}

/// Central cycle of the piece grown from edge `index` of level `k < n`, as
/// a sequence starting at the piece's jl and leaving through ml, together
/// with the sub-piece label of each quarter arc in that order.
fn central_cycle(graph: &MetricGraph, k: u32, index: u64) -> (Vec<Vertex>, [u8; 4]) {
    let arc = |l: u8| left_geodesic(graph, k + 1, index * 6 + u64::from(l));
    let mut seq = arc(1);
    seq.extend_from_slice(&arc(2)[1..]);
    let mut back = arc(4);
    back.reverse();
    seq.extend_from_slice(&back[1..]);
    let mut back = arc(3);
    back.reverse();
    seq.extend_from_slice(&back[1..back.len() - 1]);
    debug_assert_eq!(seq[0], graph.slot_vertex(k, index, JL));
    (seq, ARCS_FORWARD)
}

/// An isometric cycle of length `4^h` in `L_n`: the central cycle of the
/// piece reached by `copy_selector`, a label path of length `n - h`
/// (default all zeros).
pub fn isometric_cycle(graph: &MetricGraph, h: u32, copy_selector: Option<&[u8]>) -> Result<Cycle> {
    require_laakso(graph)?;
    let n = graph.level();
    if h < 1 || h > n {
        return Err(Error::Domain(format!("h must lie in 1..={n}, got {h}")));
    }
    let k = n - h;
    let default = vec![0u8; k as usize];
    let path = copy_selector.unwrap_or(&default);
    if path.len() != k as usize {
        return Err(Error::Domain(format!(
            "copy selector must have {k} labels for h = {h}, got {}",
            path.len()
        )));
    }
    let (seq, _) = central_cycle(graph, k, path_index(path)?);
    Ok(Cycle::trusted(graph, seq))
}

fn serialize_digits<S: Serializer>(path: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(
        &path
            .iter()
            .map(|d| char::from(b'0' + d))
            .collect::<String>(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyNode {
    /// Position in the quaternary label tree; empty for the root.
    #[serde(serialize_with = "serialize_digits")]
    pub label: Vec<u8>,
    /// Edge label path of the piece whose central cycle this is.
    #[serde(serialize_with = "serialize_digits")]
    pub piece_path: Vec<u8>,
    pub cycle: Cycle,
}

/// Cycles `c_τ` for label sequences `τ` of length at most `s - t`, with
/// `c_τ` of length `4^(s - |τ|)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleFamily {
    pub n: u32,
    pub s: u32,
    pub t: u32,
    /// The `4^n` cycle the root must touch.
    pub canonical: Cycle,
    /// Ordered by depth, then label.
    pub nodes: Vec<FamilyNode>,
}

impl CycleFamily {
    pub fn node(&self, label: &[u8]) -> Option<&FamilyNode> {
        self.nodes.iter().find(|c| c.label == label)
    }

    pub fn children(&self, label: &[u8]) -> Vec<&FamilyNode> {
        self.nodes
            .iter()
            .filter(|c| c.label.len() == label.len() + 1 && c.label.starts_with(label))
            .collect()
    }

    /// Checks lengths, disjointness of siblings, contact with the parent and
    /// contact of the root with the canonical cycle.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        if self.canonical.hops() != 4u64.pow(self.n) {
            return fail(format!(
                "canonical cycle has length {}",
                self.canonical.hops()
            ));
        }
        let expected = (0..=self.s - self.t).map(|m| 4usize.pow(m)).sum::<usize>();
        if self.nodes.len() != expected {
            return fail(format!("{} nodes, expected {expected}", self.nodes.len()));
        }
        for node in &self.nodes {
            let m = node.label.len() as u32;
            if node.cycle.hops() != 4u64.pow(self.s - m) {
                return fail(format!(
                    "cycle {:?} has length {}",
                    node.label,
                    node.cycle.hops()
                ));
            }
            let kids = self.children(&node.label);
            if m < self.s - self.t && kids.len() != 4 {
                return fail(format!("node {:?} has {} children", node.label, kids.len()));
            }
            for (i, a) in kids.iter().enumerate() {
                if !a.cycle.shares_vertex_with(&node.cycle) {
                    return fail(format!("child {:?} misses its parent", a.label));
                }
                for b in &kids[i + 1..] {
                    if a.cycle.shares_vertex_with(&b.cycle) {
                        return fail(format!("siblings {:?} and {:?} meet", a.label, b.label));
                    }
                }
            }
        }
        match self.node(&[]) {
            Some(root) if root.cycle.shares_vertex_with(&self.canonical) => Ok(()),
            _ => fail("root does not meet the canonical cycle".into()),
        }
    }
}

/// The labelled family of nested cycles between scales `4^s` and `4^t` in
/// `L_n`. The root is the central cycle of the piece at `root_selector`
/// (a label path of length `n - s`, default `1, 0, 0, ...`). Children of a
/// cycle are the central cycles of the pieces under its four quarter arcs,
/// labelled in cyclic order from the cycle's vertex nearest the bottom and
/// heading to its lower-id neighbour first.
pub fn cycle_family(
    graph: &MetricGraph,
    s: u32,
    t: u32,
    root_selector: Option<&[u8]>,
) -> Result<CycleFamily> {
    require_laakso(graph)?;
    let n = graph.level();
    if !(n > s && s >= t && t >= 1) {
        return Err(Error::Domain(format!(
            "need n > s >= t >= 1, got n = {n}, s = {s}, t = {t}"
        )));
    }
    let mut default = vec![0u8; (n - s) as usize];
    default[0] = 1;
    let root_path = root_selector.unwrap_or(&default).to_vec();
    if root_path.len() != (n - s) as usize {
        return Err(Error::Domain(format!(
            "root selector must have {} labels, got {}",
            n - s,
            root_path.len()
        )));
    }
    path_index(&root_path)?;
    let canonical = isometric_cycle(graph, n, None)?;
    let oracle = DistanceOracle::new(graph).expect("laakso graph");
    let bottom = graph.bottom().expect("laakso graph");

    let mut nodes = Vec::new();
    let mut frontier = vec![(Vec::new(), root_path)];
    for depth in 0..=s - t {
        let mut next = Vec::new();
        for (label, piece_path) in frontier {
            let k = piece_path.len() as u32;
            let index = path_index(&piece_path)?;
            let (seq, arcs) = central_cycle(graph, k, index);
            if depth < s - t {
                let nearest = (0..seq.len())
                    .min_by_key(|&i| (oracle.distance_hops(bottom, seq[i]), seq[i]))
                    .unwrap();
                if nearest != 0 {
                    return Err(Error::Contract(format!(
                        "central cycle of piece {piece_path:?} is nearest the bottom away from its jl"
                    )));
                }
                let order: Vec<u8> = if seq[1] < seq[seq.len() - 1] {
                    arcs.to_vec()
                } else {
                    arcs.iter().rev().copied().collect()
                };
                for (i, &arc) in order.iter().enumerate() {
                    let mut child_label = label.clone();
                    child_label.push(i as u8);
                    let mut child_path = piece_path.clone();
                    child_path.push(arc);
                    next.push((child_label, child_path));
                }
            }
            let cycle = Cycle::trusted(graph, seq);
            nodes.push(FamilyNode {
                label,
                piece_path,
                cycle,
            });
        }
        frontier = next;
    }
    nodes.sort_by(|a, b| {
        a.label
            .len()
            .cmp(&b.label.len())
            .then_with(|| a.label.cmp(&b.label))
    });
    let family = CycleFamily {
        n,
        s,
        t,
        canonical,
        nodes,
    };
    if !family.nodes[0].cycle.shares_vertex_with(&family.canonical) {
        return Err(Error::Domain(format!(
            "root piece {:?} does not meet the canonical 4^{n} cycle",
            family.nodes[0].piece_path
        )));
    }
    Ok(family)
}
