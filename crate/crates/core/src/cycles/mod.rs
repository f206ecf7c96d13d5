//! Cycle structure of diamonds and Laakso graphs.
//!
//! Every [`Cycle`] is stored in canonical form: it starts at its least
//! vertex id and runs in the direction whose second vertex is smaller. Two
//! cycles are equal exactly when they have the same vertex set in the same
//! cyclic order, up to rotation and reflection.

mod collapse;
mod laakso;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::sssp;
use crate::recgraph::export::serialize_length;
use crate::recgraph::{Branch, Family, Length, MetricGraph, Origin, Subdiamond, Vertex};

pub use collapse::{collapse_subdiamonds, subdivide_edges, QuotientGraph};
pub use laakso::{cycle_family, isometric_cycle, CycleFamily, FamilyNode};

/// Default cap on the number of cycles [`enumerate_simple_cycles`] returns.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle {
    hops: u64,
    #[serde(serialize_with = "serialize_length")]
    length: Length,
    vertices: Vec<Vertex>,
}

impl Cycle {
    /// Validates `vertices` as a closed walk without repeats in `graph`.
    pub fn new(graph: &MetricGraph, vertices: Vec<Vertex>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::Domain(format!(
                "a cycle needs at least 3 vertices, got {k}"
            )));
        }
        let mut seen = FixedBitSet::with_capacity(graph.vertex_count());
        for &v in &vertices {
            graph.check_vertex(v)?;
            if seen.put(v as usize) {
                return Err(Error::Domain(format!("vertex {v} repeats")));
            }
        }
        for i in 0..k {
            let (u, v) = (vertices[i], vertices[(i + 1) % k]);
            if !graph.has_edge(u, v) {
                return Err(Error::Domain(format!("{u} and {v} are not adjacent")));
            }
        }
        Ok(Self::trusted(graph, vertices))
    }

    fn trusted(graph: &MetricGraph, vertices: Vec<Vertex>) -> Self {
        let hops = vertices.len() as u64;
        Cycle {
            hops,
            length: graph.hops_to_length(hops),
            vertices: canonical_form(vertices),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges.
    pub fn hops(&self) -> u64 {
        self.hops
    }

    pub fn length(&self) -> Length {
        self.length
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn shares_vertex_with(&self, other: &Cycle) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    /// Whether distances along the cycle agree with distances in `graph`
    /// for every pair of cycle vertices.
    pub fn is_isometric(&self, graph: &MetricGraph) -> Result<bool> {
        let k = self.vertices.len();
        for (i, &u) in self.vertices.iter().enumerate() {
            let d = sssp(graph, u)?;
            for (j, &v) in self.vertices.iter().enumerate().skip(i + 1) {
                let along = (j - i).min(k - (j - i)) as u64;
                if d.hops(v) != along {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn canonical_form(mut seq: Vec<Vertex>) -> Vec<Vertex> {
    let k = seq.len();
    let start = (0..k).min_by_key(|&i| seq[i]).unwrap();
    seq.rotate_left(start);
    if seq[k - 1] < seq[1] {
        seq[1..].reverse();
    }
    seq
}

/// All simple cycles of `graph`, ordered by length and then by vertex
/// sequence. Fails once more than `cap` cycles have been found.
pub fn enumerate_simple_cycles(graph: &MetricGraph, cap: usize) -> Result<Vec<Cycle>> {
    let n = graph.vertex_count();
    let mut found: Vec<Vec<Vertex>> = Vec::new();
    let mut on_path = FixedBitSet::with_capacity(n);
    let mut path: Vec<Vertex> = Vec::new();
    // (vertex, index of the next neighbour to try)
    let mut stack: Vec<(Vertex, usize)> = Vec::new();
    for s in graph.vertices() {
        path.push(s);
        on_path.insert(s as usize);
        stack.push((s, 0));
        while let Some(top) = stack.last_mut() {
            let (x, i) = *top;
            let nbrs = graph.neighbors(x);
            if i == nbrs.len() {
                stack.pop();
                path.pop();
                on_path.set(x as usize, false);
                continue;
            }
            top.1 += 1;
            let y = nbrs[i];
            if y == s {
                // each cycle is seen twice; keep the direction starting low
                if path.len() >= 3 && path[1] < x {
                    if found.len() == cap {
                        return Err(Error::Enumeration {
                            cap,
                            partial: found.len(),
                        });
                    }
                    found.push(path.clone());
                }
            } else if y > s && !on_path.contains(y as usize) {
                path.push(y);
                on_path.insert(y as usize);
                stack.push((y, 0));
            }
        }
    }
    found.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found
        .into_iter()
        .map(|c| Cycle::trusted(graph, c))
        .collect())
}

/// The cycle through the four corners of `sub` made of a geodesic on each
/// side. Selectors list branch choices for the gadget copies below the top
/// one, in depth-first order; missing choices default to [`Branch::Left`]
/// on the left side and [`Branch::Right`] on the right.
pub fn principal_cycle(
    graph: &MetricGraph,
    sub: &Subdiamond,
    left_selector: &[Branch],
    right_selector: &[Branch],
) -> Result<Cycle> {
    if sub.height < 2 {
        return Err(Error::Domain(
            "a subdiamond of height < 2 has no cycle".into(),
        ));
    }
    if Subdiamond::from_path(graph, &sub.root_edge_path)? != *sub {
        return Err(Error::Domain(
            "subdiamond does not belong to this graph".into(),
        ));
    }
    let side = |labels: [u64; 2], selector: &[Branch], default: Branch| -> Result<Vec<Vertex>> {
        let mut used = 0;
        let mut choose = || {
            used += 1;
            selector.get(used - 1).copied().unwrap_or(default)
        };
        let k = sub.level() + 1;
        let mut out = graph.piece_geodesic(k, sub.edge_index * 4 + labels[0], &mut choose)?;
        let upper = graph.piece_geodesic(k, sub.edge_index * 4 + labels[1], &mut choose)?;
        out.extend_from_slice(&upper[1..]);
        if used < selector.len() {
            return Err(Error::Domain(format!(
                "selector has {} choices but the geodesic makes only {used}",
                selector.len()
            )));
        }
        Ok(out)
    };
    let mut seq = side([0, 1], left_selector, Branch::Left)?;
    let right = side([2, 3], right_selector, Branch::Right)?;
    seq.extend(right[1..right.len() - 1].iter().rev());
    Ok(Cycle::trusted(graph, seq))
}

/// The unique subdiamond of which `cycle` is a principal cycle.
pub fn classify_cycle(graph: &MetricGraph, cycle: &Cycle) -> Result<Subdiamond> {
    if graph.family() != Family::Diamond {
        return Err(Error::Family {
            expected: "diamond",
            found: graph.family().name().into(),
        });
    }
    Cycle::new(graph, cycle.vertices.clone())?;
    // The last-born vertex lies strictly inside every subdiamond containing
    // the cycle, so those subdiamonds are the ancestors of its parent edge.
    let deepest = *cycle.vertices.iter().max().unwrap();
    let Origin::Slot {
        edge_level,
        edge_index,
        ..
    } = graph.origin(deepest)
    else {
        return Err(Error::Classification(format!(
            "cycle {:?} has no interior vertex",
            cycle.vertices
        )));
    };
    for k in (0..=edge_level).rev() {
        let sub = Subdiamond::from_edge(graph, k, edge_index / 4u64.pow(edge_level - k))?;
        if !cycle.vertices.iter().all(|&v| sub.contains(graph, v)) {
            continue;
        }
        let corners = [sub.top, sub.bottom, sub.leftmost, sub.rightmost];
        if corners.iter().all(|&c| cycle.contains(c)) && cycle.hops == 2 * sub.height {
            return Ok(sub);
        }
    }
    Err(Error::Classification(format!(
        "cycle {:?} is not a principal cycle of any subdiamond",
        cycle.vertices
    )))
}
