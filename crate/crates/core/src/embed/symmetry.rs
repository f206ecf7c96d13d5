//! Vertex classes of family graphs that lie in a single automorphism orbit.
//!
//! Any automorphism of a gadget that fixes both endpoints can be applied to
//! one gadget copy on its own, so two vertices whose label paths agree up to
//! such automorphisms, position by position, lie in the same orbit. When the
//! gadget also has an endpoint-swapping automorphism, applying it to every
//! copy at once reflects the whole graph. Vertices of a quaternary tree at
//! equal depth are equivalent. Classes found this way can be finer than the
//! true orbits, which costs only redundant work.

use std::collections::BTreeMap;

use crate::recgraph::{digits, Family, Gadget, MetricGraph, Origin, Vertex};

/// Node permutations of `g` that map `{bottom, top}` onto itself.
fn gadget_automorphisms(g: &Gadget) -> Vec<Vec<u8>> {
    let k = g.node_count();
    let mut adj = vec![vec![false; k]; k];
    for &(a, b) in g.edges {
        adj[a as usize][b as usize] = true;
        adj[b as usize][a as usize] = true;
    }
    let mut out = Vec::new();
    let mut perm = vec![u8::MAX; k];
    let mut used = vec![false; k];
    fn extend(
        i: usize,
        k: usize,
        adj: &[Vec<bool>],
        perm: &mut [u8],
        used: &mut [bool],
        out: &mut Vec<Vec<u8>>,
    ) {
        if i == k {
            out.push(perm.to_vec());
            return;
        }
        for img in 0..k {
            let endpoint_ok = (i < 2) == (img < 2);
            if used[img] || !endpoint_ok {
                continue;
            }
            if (0..i).any(|j| adj[i][j] != adj[img][perm[j] as usize]) {
                continue;
            }
            perm[i] = img as u8;
            used[img] = true;
            extend(i + 1, k, adj, perm, used, out);
            used[img] = false;
        }
        perm[i] = u8::MAX;
    }
    extend(0, k, &adj, &mut perm, &mut used, &mut out);
    out
}

struct LabelAction {
    /// `fixing[i][l]`: image of edge label `l` under the i-th endpoint-fixing
    /// automorphism; likewise for nodes.
    fixing_labels: Vec<Vec<u8>>,
    fixing_nodes: Vec<Vec<u8>>,
    flip: Option<(Vec<u8>, Vec<u8>)>,
}

fn label_action(g: &Gadget) -> LabelAction {
    let edge_of = |a: u8, b: u8| {
        g.edges
            .iter()
            .position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
            .unwrap() as u8
    };
    let labels = |p: &[u8]| -> Vec<u8> {
        g.edges
            .iter()
            .map(|&(x, y)| edge_of(p[x as usize], p[y as usize]))
            .collect()
    };
    let mut action = LabelAction {
        fixing_labels: Vec::new(),
        fixing_nodes: Vec::new(),
        flip: None,
    };
    for p in gadget_automorphisms(g) {
        if p[0] == 0 {
            action.fixing_labels.push(labels(&p));
            action.fixing_nodes.push(p);
        } else if action.flip.is_none() {
            action.flip = Some((labels(&p), p));
        }
    }
    action
}

fn class_key(graph: &MetricGraph, action: &LabelAction, v: Vertex) -> Vec<u32> {
    let g = graph.gadget().expect("recursive family");
    let canon_label = |l: u8| {
        action
            .fixing_labels
            .iter()
            .map(|p| p[l as usize])
            .min()
            .unwrap()
    };
    let canon_node = |x: u8| {
        action
            .fixing_nodes
            .iter()
            .map(|p| p[x as usize])
            .min()
            .unwrap()
    };
    let key_of = |path: &[u8], node: u8| -> Vec<u32> {
        let mut key = vec![path.len() as u32];
        key.extend(path.iter().map(|&l| u32::from(canon_label(l))));
        key.push(u32::from(canon_node(node)));
        key
    };
    let (path, node) = match graph.origin(v) {
        Origin::Bottom => (Vec::new(), 0u8),
        Origin::Top => (Vec::new(), 1u8),
        Origin::Slot {
            edge_level,
            edge_index,
            slot,
        } => (digits(edge_index, g.branching(), edge_level), 2 + slot),
    };
    let key = key_of(&path, node);
    match &action.flip {
        None => key,
        Some((labels, nodes)) => {
            let flipped: Vec<u8> = path.iter().map(|&l| labels[l as usize]).collect();
            key.min(key_of(&flipped, nodes[node as usize]))
        }
    }
}

/// One vertex (the lowest id) from each symmetry class of `graph`, in
/// increasing id order.
pub fn orbit_representatives(graph: &MetricGraph) -> Vec<Vertex> {
    let mut first: BTreeMap<Vec<u32>, Vertex> = BTreeMap::new();
    match graph.family() {
        Family::Generic => return graph.vertices().collect(),
        Family::QuaternaryTree => {
            for v in graph.vertices() {
                let mut depth = 0u32;
                let mut x = v;
                while x > 0 {
                    x = (x - 1) / 4;
                    depth += 1;
                }
                first.entry(vec![depth]).or_insert(v);
            }
        }
        _ => {
            let action = label_action(graph.gadget().unwrap());
            for v in graph.vertices() {
                first.entry(class_key(graph, &action, v)).or_insert(v);
            }
        }
    }
    let mut reps: Vec<Vertex> = first.into_values().collect();
    reps.sort_unstable();
    reps
}
