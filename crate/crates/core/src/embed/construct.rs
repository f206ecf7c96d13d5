use serde::Serialize;

use super::EmbeddingMap;
use crate::error::{Error, Result};
use crate::recgraph::{Family, GenerateOptions, MetricGraph, Normalization, Vertex};

/// An explicit map together with the graphs it connects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub source: MetricGraph,
    pub target: MetricGraph,
    pub assignment: Vec<Vertex>,
}

impl Construction {
    pub fn map(&self) -> EmbeddingMap<'_> {
        EmbeddingMap::new(&self.source, &self.target, self.assignment.clone())
            .expect("constructions are total")
    }
}

impl Serialize for Construction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.map().serialize(s)
    }
}

/// Where each edge of the M gadget goes inside a `D_3` copy: the label path
/// of the `D_3` edge, relative to the edge being replaced. The bottom path
/// runs up the lowest edges, the quadrilateral is the principal cycle of the
/// height-2 subdiamond above them, and the top path follows the left side of
/// the upper half.
const M_TO_D3: [[u8; 3]; 10] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 1, 0],
    [0, 1, 1],
    [0, 1, 2],
    [0, 1, 3],
    [1, 0, 0],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
];

/// Isometric map of `M_n` into `D_{3n}`. An edge of `M_n` with label path
/// `l_1 ... l_n` goes to the edge of `D_{3n}` whose path concatenates the
/// images of the `l_i`, and each vertex follows its edges.
pub fn construct_m_embedding(
    n: u32,
    normalization: Normalization,
    options: &GenerateOptions,
) -> Result<Construction> {
    let target_level = n
        .checked_mul(3)
        .ok_or_else(|| Error::Domain(format!("level 3 * {n} overflows")))?;
    let source = MetricGraph::generate_with(Family::MVariant, n, normalization, options)?;
    let target = MetricGraph::generate_with(Family::Diamond, target_level, normalization, options)?;
    let mut assignment = vec![Vertex::MAX; source.vertex_count()];
    for (e, &ends) in source.edges().iter().enumerate() {
        let mut rest = e as u64;
        let mut labels = Vec::with_capacity(n as usize);
        for _ in 0..n {
            labels.push((rest % 10) as usize);
            rest /= 10;
        }
        let image_edge = labels
            .iter()
            .rev()
            .flat_map(|&l| M_TO_D3[l])
            .fold(0u64, |q, d| 4 * q + u64::from(d));
        let image_ends = target.edges()[image_edge as usize];
        for (x, y) in ends.into_iter().zip(image_ends) {
            let slot = &mut assignment[x as usize];
            if *slot != Vertex::MAX && *slot != y {
                return Err(Error::Contract(format!(
                    "vertex {x} would map to both {slot} and {y}"
                )));
            }
            *slot = y;
        }
    }
    Ok(Construction {
        source,
        target,
        assignment,
    })
}

/// Isometric map of `L_1` into `D_2`. The quadrilateral of `L_1` goes onto
/// the principal cycle of the height-2 subdiamond on edge `bottom-b`, the
/// bottom vertex to a neighbour of `D_2`'s bottom in the subdiamond on
/// `bottom-a`, and the top vertex one step above `b`.
pub fn construct_l1_to_d2(normalization: Normalization) -> Result<Construction> {
    let source = MetricGraph::generate(Family::Laakso, 1, normalization)?;
    let target = MetricGraph::generate(Family::Diamond, 2, normalization)?;
    let s = |a: &str| {
        source
            .resolve(&a.parse()?)
            .ok_or_else(|| Error::Contract(a.into()))
    };
    let t = |a: &str| {
        target
            .resolve(&a.parse()?)
            .ok_or_else(|| Error::Contract(a.into()))
    };
    let pairs = [
        ("l:bottom", "d:2:0:a"),
        ("l:1::jl", "d:bottom"),
        ("l:1::ml", "d:2:2:a"),
        ("l:1::mr", "d:2:2:b"),
        ("l:1::jh", "d:1::b"),
        ("l:top", "d:2:3:a"),
    ];
    let mut assignment = vec![Vertex::MAX; source.vertex_count()];
    for (from, to) in pairs {
        assignment[s(from)? as usize] = t(to)?;
    }
    Ok(Construction {
        source,
        target,
        assignment,
    })
}
