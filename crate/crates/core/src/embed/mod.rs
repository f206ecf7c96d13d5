//! Distortion of vertex maps between metric graphs, exact and heuristic
//! minimum-distortion search, lower bounds, and explicit isometric
//! constructions.
//!
//! A map `f` has expansion `max d_Y(f u, f v) / d_X(u, v)` and contraction
//! `max d_X(u, v) / d_Y(f u, f v)` over distinct pairs; its distortion is
//! their product, which is the least `C` admitting a scale `r` with
//! `r d_X <= d_Y∘f <= r C d_X`. The free scale cancels, so no search over
//! `r` is needed. All comparisons are exact integer cross-multiplications.

mod construct;
mod exact;
mod growth;
mod heuristic;
mod lower;
mod symmetry;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::{sssp, UNREACHABLE};
use crate::recgraph::export::serialize_big_ratio;
use crate::recgraph::{Length, MetricGraph, Vertex};

pub use construct::{construct_l1_to_d2, construct_m_embedding, Construction};
pub use exact::{min_distortion_exact, ExactOptions, SearchCertificate, DEFAULT_NODE_BUDGET};
pub use growth::{growth_experiment, GrowthOptions, GrowthRow};
pub use heuristic::{min_distortion_heuristic, DEFAULT_ITERATIONS};
pub use lower::{distortion_lower_bound, LowerBoundOptions, LowerBoundReport};
pub use symmetry::orbit_representatives;

/// An exact non-negative rational, or infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Finite(BigRational),
    Infinite,
}

impl ExactValue {
    pub fn one() -> Self {
        ExactValue::Finite(BigRational::from_integer(1.into()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExactValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExactValue::Finite(r) => Some(r),
            ExactValue::Infinite => None,
        }
    }

    pub(crate) fn from_frac(f: Option<Frac>) -> Self {
        match f {
            Some(f) => ExactValue::Finite(BigRational::new(f.num.into(), f.den.into())),
            None => ExactValue::Infinite,
        }
    }
}

impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactValue::Finite(a), ExactValue::Finite(b)) => a.cmp(b),
            (ExactValue::Finite(_), ExactValue::Infinite) => Ordering::Less,
            (ExactValue::Infinite, ExactValue::Finite(_)) => Ordering::Greater,
            (ExactValue::Infinite, ExactValue::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Finite(r) => write!(f, "{r}"),
            ExactValue::Infinite => f.write_str("inf"),
        }
    }
}

/// `{num, den}` when finite, the string `"infinite"` otherwise.
impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExactValue::Finite(r) => serialize_big_ratio(r, s),
            ExactValue::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A ratio of hop counts, small enough that products of two of them and
/// cross-multiplications stay exact in 128 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Frac {
    pub num: u64,
    pub den: u64,
}

impl Frac {
    pub fn new(num: u64, den: u64) -> Self {
        Frac { num, den }
    }

    pub fn lt(self, other: Frac) -> bool {
        u128::from(self.num) * u128::from(other.den) < u128::from(other.num) * u128::from(self.den)
    }

    pub fn max(self, other: Frac) -> Frac {
        if self.lt(other) {
            other
        } else {
            self
        }
    }

    pub fn mul(self, other: Frac) -> Frac {
        Frac {
            num: self.num * other.num,
            den: self.den * other.den,
        }
    }
}

/// `a < b` where `None` is infinity.
pub(crate) fn value_lt(a: Option<Frac>, b: Option<Frac>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a.lt(b),
        (Some(_), None) => true,
        (None, _) => false,
    }
}

/// A vertex map from `source` into `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMap<'a> {
    source: &'a MetricGraph,
    target: &'a MetricGraph,
    assignment: Vec<Vertex>,
    /// Optional scale `r` of the bilipschitz inequality. Distortion never
    /// depends on it.
    pub scale_hint: Option<BigRational>,
}

impl<'a> EmbeddingMap<'a> {
    pub fn new(
        source: &'a MetricGraph,
        target: &'a MetricGraph,
        assignment: Vec<Vertex>,
    ) -> Result<Self> {
        if assignment.len() != source.vertex_count() {
            return Err(Error::Contract(format!(
                "assignment covers {} of {} source vertices",
                assignment.len(),
                source.vertex_count()
            )));
        }
        if let Some(&bad) = assignment
            .iter()
            .find(|&&w| w as usize >= target.vertex_count())
        {
            return Err(Error::Contract(format!(
                "image {bad} is not a vertex of {} ({} vertices)",
                target.id(),
                target.vertex_count()
            )));
        }
        Ok(EmbeddingMap {
            source,
            target,
            assignment,
            scale_hint: None,
        })
    }

    pub fn source(&self) -> &'a MetricGraph {
        self.source
    }

    pub fn target(&self) -> &'a MetricGraph {
        self.target
    }

    pub fn assignment(&self) -> &[Vertex] {
        &self.assignment
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.assignment[v as usize]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.vertex_count()];
        self.assignment
            .iter()
            .all(|&w| !std::mem::replace(&mut seen[w as usize], true))
    }

    /// Follows this map with a level inclusion of the target family into
    /// `bigger`, whose level must be the inclusion's upper level.
    pub fn then_include(
        &self,
        bigger: &'a MetricGraph,
        inclusion: &crate::recgraph::LevelInclusion,
    ) -> Result<EmbeddingMap<'a>> {
        if bigger.family() != self.target.family()
            || inclusion.from_level != self.target.level()
            || inclusion.to_level != bigger.level()
        {
            return Err(Error::Domain(
                "inclusion does not start at this map's target".into(),
            ));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&w| inclusion.map[w as usize])
            .collect();
        let mut out = EmbeddingMap::new(self.source, bigger, assignment)?;
        out.scale_hint = self.scale_hint.as_ref().map(|r| {
            let s = inclusion.length_scale;
            r * BigRational::new(BigInt::from(*s.numer()), BigInt::from(*s.denom()))
        });
        Ok(out)
    }
}

impl Serialize for EmbeddingMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'m> {
            source: String,
            target: String,
            assignment: &'m [Vertex],
            #[serde(skip_serializing_if = "Option::is_none")]
            scale_hint: Option<ExactValue>,
        }
        Doc {
            source: self.source.id(),
            target: self.target.id(),
            assignment: &self.assignment,
            scale_hint: self.scale_hint.clone().map(ExactValue::Finite),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistortionReport {
    pub source: String,
    pub target: String,
    /// Largest `d_Y / d_X` over distinct pairs, in lengths.
    pub expansion: ExactValue,
    /// Largest `d_X / d_Y` over distinct pairs, in lengths.
    pub contraction: ExactValue,
    pub distortion: ExactValue,
    pub witness_expansion_pair: [Vertex; 2],
    pub witness_contraction_pair: [Vertex; 2],
    pub pairs_checked: u64,
}

fn length_ratio(a: Length, b: Length) -> BigRational {
    BigRational::new(BigInt::from(*a.numer()), BigInt::from(*a.denom()))
        / BigRational::new(BigInt::from(*b.numer()), BigInt::from(*b.denom()))
}

fn require_connected_source(source: &MetricGraph) -> Result<()> {
    if source.vertex_count() < 2 {
        return Err(Error::Domain("source needs at least 2 vertices".into()));
    }
    if sssp(source, 0)?.distances.contains(&UNREACHABLE) {
        return Err(Error::Domain("source graph is disconnected".into()));
    }
    Ok(())
}

/// Exact distortion of `map` over all pairs of source vertices. Ties for a
/// witness pair go to the first pair in lexicographic order.
pub fn evaluate(map: &EmbeddingMap<'_>) -> Result<DistortionReport> {
    let (source, target) = (map.source, map.target);
    require_connected_source(source)?;
    // Ratios in hops: expansion a/b = d_Y / d_X and contraction c/d = d_X / d_Y.
    let mut expansion: Option<Frac> = Some(Frac::new(0, 1));
    let mut contraction: Option<Frac> = Some(Frac::new(0, 1));
    let mut wit_e = [0, 1];
    let mut wit_c = [0, 1];
    let mut pairs = 0u64;
    for u in source.vertices() {
        let ds = sssp(source, u)?;
        let dt = sssp(target, map.image(u))?;
        for v in u + 1..source.vertex_count() as Vertex {
            pairs += 1;
            let hx = ds.hops(v);
            let hy = u64::from(dt.distances[map.image(v) as usize]);
            if hy == u64::from(UNREACHABLE) {
                if expansion.is_some() {
                    expansion = None;
                    wit_e = [u, v];
                }
                continue;
            }
            if hy == 0 {
                if contraction.is_some() {
                    contraction = None;
                    wit_c = [u, v];
                }
                continue;
            }
            if let Some(e) = expansion {
                if e.lt(Frac::new(hy, hx)) {
                    expansion = Some(Frac::new(hy, hx));
                    wit_e = [u, v];
                }
            }
            if let Some(c) = contraction {
                if c.lt(Frac::new(hx, hy)) {
                    contraction = Some(Frac::new(hx, hy));
                    wit_c = [u, v];
                }
            }
        }
    }
    let distortion = match (expansion, contraction) {
        (Some(e), Some(c)) => ExactValue::from_frac(Some(e.mul(c))),
        _ => ExactValue::Infinite,
    };
    let to_length = |f: Option<Frac>, scale: BigRational| match ExactValue::from_frac(f) {
        ExactValue::Finite(r) => ExactValue::Finite(r * scale),
        inf => inf,
    };
    let ly_over_lx = length_ratio(target.edge_length(), source.edge_length());
    Ok(DistortionReport {
        source: source.id(),
        target: target.id(),
        expansion: to_length(expansion, ly_over_lx.clone()),
        contraction: to_length(contraction, ly_over_lx.recip()),
        distortion,
        witness_expansion_pair: wit_e,
        witness_contraction_pair: wit_c,
        pairs_checked: pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    UpperBoundOnly,
    InfeasibleInjective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverResult<'a> {
    pub status: SolverStatus,
    pub value: ExactValue,
    /// A map attaining `value`; absent when no map was evaluated.
    pub witness: Option<EmbeddingMap<'a>>,
    pub nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SearchCertificate>,
}
