//! Recursive diamond, Laakso and Laakso-type graphs with exact metric
//! structure, cycle analysis, and bilipschitz distortion solvers.
//!
//! Modules mirror the pipeline: [`recgraph`] builds graphs, [`metric`]
//! measures them, [`cycles`] studies their cycle structure, and [`embed`]
//! evaluates and searches maps between them.

pub mod cycles;
pub mod embed;
pub mod error;
pub mod metric;
pub mod recgraph;

pub use error::{Error, Result};
pub use recgraph::{
    enumerate_subdiamonds, Branch, Family, GenerateOptions, Length, MetricGraph, Normalization,
    Subdiamond, Vertex, VertexAddress,
};
