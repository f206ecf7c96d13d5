//! Structured-document form of graphs and exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use super::{Family, Length, MetricGraph, Normalization, Vertex, VertexAddress};
use crate::error::{Error, Result};

/// An exact rational as `{num, den}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalDoc {
    pub num: u64,
    pub den: u64,
}

impl From<Length> for RationalDoc {
    fn from(r: Length) -> Self {
        RationalDoc {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<RationalDoc> for Length {
    fn from(r: RationalDoc) -> Self {
        Length::new(r.num, r.den)
    }
}

pub fn serialize_length<S: Serializer>(r: &Length, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalDoc::from(*r).serialize(s)
}

/// Writes a big rational as `{num, den}`, using JSON integers when they fit
/// in 64 bits and decimal strings otherwise.
pub fn serialize_big_ratio<S: Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    #[serde(untagged)]
    enum Int {
        Small(i64),
        Big(String),
    }
    fn int(v: &BigInt) -> Int {
        v.to_i64()
            .map_or_else(|| Int::Big(v.to_string()), Int::Small)
    }
    #[derive(Serialize)]
    struct Doc {
        num: Int,
        den: Int,
    }
    Doc {
        num: int(r.numer()),
        den: int(r.denom()),
    }
    .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: Vertex,
    pub address: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub family: Family,
    pub level: u32,
    pub normalization: Normalization,
    pub edge_length: RationalDoc,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[Vertex; 2]>,
}

impl MetricGraph {
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            family: self.family(),
            level: self.level(),
            normalization: self.normalization(),
            edge_length: self.edge_length().into(),
            vertices: self
                .vertices()
                .map(|id| VertexEntry {
                    id,
                    address: self.address_string(id),
                })
                .collect(),
            edges: self.edges().to_vec(),
        }
    }

    /// Rebuilds a graph from its document. Family graphs are regenerated and
    /// must match the document exactly.
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let graph = if doc.family == Family::Generic {
            for (i, v) in doc.vertices.iter().enumerate() {
                if v.id as usize != i {
                    return Err(Error::Contract(format!(
                        "vertex ids must be 0..n, found {}",
                        v.id
                    )));
                }
            }
            MetricGraph::from_edges_with_length(
                doc.vertices.len(),
                &doc.edges,
                doc.edge_length.into(),
            )?
            .with_level(doc.level)
        } else {
            MetricGraph::generate(doc.family, doc.level, doc.normalization)?
        };
        let regenerated = graph.to_document();
        if doc.family != Family::Generic && regenerated != *doc {
            return Err(Error::Contract(format!(
                "document does not match generated {}",
                graph.id()
            )));
        }
        Ok(graph)
    }
}

impl VertexEntry {
    pub fn parsed_address(&self) -> Result<VertexAddress> {
        self.address.parse()
    }
}
