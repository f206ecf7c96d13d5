use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::exact::{search_all, SourceMetric, TargetIndex};
use super::{require_connected_source, ExactValue, Frac};
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::recgraph::{MetricGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBoundOptions {
    /// Points per subset, 2 to 4.
    pub subset_size: usize,
    /// Subsets examined; all subsets when there are no more than this.
    pub samples: usize,
    /// Work allowance, charged `|V(target)|^subset_size` per subset.
    pub budget: u64,
    pub seed: u64,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions {
            subset_size: 4,
            samples: 32,
            budget: 100_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub source: String,
    pub target: String,
    pub options: LowerBoundOptions,
    /// Largest minimum distortion over the examined subsets.
    pub value: ExactValue,
    pub subsets_evaluated: usize,
    /// Whether every subset of the source was examined.
    pub all_subsets: bool,
    /// First examined subset attaining `value`, with a best map for it.
    pub best_subset: Vec<Vertex>,
    pub best_subset_image: Vec<Vertex>,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Lexicographic successor of a sorted `k`-subset of `0..n`.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A lower bound on the minimum distortion of `source` into `target`: any
/// map restricts to every subset, so the exact minimum for a subset of
/// source points can never exceed the minimum for the whole source.
pub fn distortion_lower_bound(
    source: &MetricGraph,
    target: &MetricGraph,
    options: &LowerBoundOptions,
) -> Result<LowerBoundReport> {
    let k = options.subset_size;
    if !(2..=4).contains(&k) {
        return Err(Error::Domain(format!(
            "subset size must be 2, 3 or 4, got {k}"
        )));
    }
    require_connected_source(source)?;
    let n = source.vertex_count();
    if k > n {
        return Err(Error::Domain(format!(
            "subset size {k} exceeds the {n} source vertices"
        )));
    }
    let t = target.vertex_count();
    let cost = (t as u128).pow(k as u32);
    let affordable = u128::from(options.budget) / cost.max(1);
    if affordable == 0 {
        return Err(Error::Budget(format!(
            "one subset costs {cost} assignments, budget is {}",
            options.budget
        )));
    }
    let wanted = options
        .samples
        .min(affordable.min(usize::MAX as u128) as usize);
    if wanted == 0 {
        return Err(Error::Domain("samples must be positive".into()));
    }
    let total = binomial(n, k);
    let subsets: Vec<Vec<usize>> = if total <= wanted as u128 {
        let mut s: Vec<usize> = (0..k).collect();
        let mut all = vec![s.clone()];
        while next_subset(&mut s, n) {
            all.push(s.clone());
        }
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut chosen = BTreeSet::new();
        while chosen.len() < wanted {
            let mut s = rand::seq::index::sample(&mut rng, n, k).into_vec();
            s.sort_unstable();
            chosen.insert(s);
        }
        chosen.into_iter().collect()
    };

    let full = DistanceMatrix::new(source);
    let tgt = TargetIndex::new(target, true)?;
    let mut best: Option<(Option<Frac>, Vec<usize>, Vec<Vertex>)> = None;
    for s in &subsets {
        let d = s
            .iter()
            .flat_map(|&u| s.iter().map(move |&v| (u, v)))
            .map(|(u, v)| full.get(u as Vertex, v as Vertex))
            .collect();
        let sub = SourceMetric { k, d };
        let (value, image) = if k > t {
            (None, Vec::new())
        } else {
            let found = search_all(&sub, &tgt, u64::MAX, None, false);
            match found.best {
                Some((v, image)) => (Some(v), image),
                None => (None, Vec::new()),
            }
        };
        let improves = match &best {
            None => true,
            Some((b, _, _)) => super::value_lt(*b, value),
        };
        if improves {
            best = Some((value, s.clone(), image));
        }
    }
    let (value, subset, image) = best.unwrap();
    Ok(LowerBoundReport {
        source: source.id(),
        target: target.id(),
        options: *options,
        value: ExactValue::from_frac(value),
        subsets_evaluated: subsets.len(),
        all_subsets: subsets.len() as u128 == total,
        best_subset: subset.into_iter().map(|v| v as Vertex).collect(),
        best_subset_image: image,
    })
}
