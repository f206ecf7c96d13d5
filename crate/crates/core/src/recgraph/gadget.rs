//! Replacement gadgets for the edge-substitution families.
//!
//! Gadget nodes are numbered `0` = bottom endpoint, `1` = top endpoint, and
//! `2 + s` for slot `s`. Gadget edges are oriented bottom to top and listed in
//! label order; the label of a child edge is its index in `edges`.

/// A fixed graph that replaces every edge at each recursion step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gadget {
    pub name: &'static str,
    /// Short tag used as the first component of vertex addresses.
    pub tag: &'static str,
    pub slot_names: &'static [&'static str],
    pub edges: &'static [(u8, u8)],
    /// Distance between the two endpoints, in gadget edges.
    pub diameter: u64,
    /// Labels of the two bottom-to-top geodesics, left branch first.
    pub branches: [&'static [u8]; 2],
}

/// Quadrilateral `u, a, v, b`: labels `(u→a)=0, (a→v)=1, (u→b)=2, (b→v)=3`.
pub const DIAMOND: Gadget = Gadget {
    name: "diamond",
    tag: "d",
    slot_names: &["a", "b"],
    edges: &[(0, 2), (2, 1), (0, 3), (3, 1)],
    diameter: 2,
    branches: [&[0, 1], &[2, 3]],
};

/// Path, split into two branches, merge, path. Left branch labels precede
/// the right branch.
pub const LAAKSO: Gadget = Gadget {
    name: "laakso",
    tag: "l",
    slot_names: &["jl", "ml", "mr", "jh"],
    edges: &[(0, 2), (2, 3), (3, 5), (2, 4), (4, 5), (5, 1)],
    diameter: 4,
    branches: [&[0, 1, 2, 5], &[0, 3, 4, 5]],
};

/// Length-2 path, quadrilateral, length-4 path.
pub const M_VARIANT: Gadget = Gadget {
    name: "m_variant",
    tag: "m",
    slot_names: &["lo", "split", "left", "right", "merge", "hi1", "hi2", "hi3"],
    edges: &[
        (0, 2),
        (2, 3),
        (3, 4),
        (4, 6),
        (3, 5),
        (5, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 1),
    ],
    diameter: 8,
    branches: [&[0, 1, 2, 3, 6, 7, 8, 9], &[0, 1, 4, 5, 6, 7, 8, 9]],
};

impl Gadget {
    pub fn slot_count(&self) -> usize {
        self.slot_names.len()
    }

    pub fn node_count(&self) -> usize {
        self.slot_names.len() + 2
    }

    pub fn branching(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn slot_index(&self, name: &str) -> Option<u8> {
        self.slot_names
            .iter()
            .position(|s| *s == name)
            .map(|i| i as u8)
    }

    /// All-pairs hop distances between gadget nodes.
    pub fn node_distances(&self) -> Vec<Vec<u64>> {
        let k = self.node_count();
        let mut d = vec![vec![u64::MAX / 4; k]; k];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(a, b) in self.edges {
            d[a as usize][b as usize] = 1;
            d[b as usize][a as usize] = 1;
        }
        for m in 0..k {
            for i in 0..k {
                for j in 0..k {
                    let via = d[i][m] + d[m][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }
}
