//! Acceptance suite. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any criterion fails.

mod oracles;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use mfl_core::cycles::{
    classify_cycle, collapse_subdiamonds, cycle_family, enumerate_simple_cycles, subdivide_edges,
    DEFAULT_CYCLE_CAP,
};
use mfl_core::embed::{
    construct_l1_to_d2, construct_m_embedding, distortion_lower_bound, evaluate,
    min_distortion_exact, min_distortion_heuristic, ExactOptions, ExactValue, LowerBoundOptions,
    SolverStatus,
};
use mfl_core::metric::{
    ball_hops, diameter_hops, distance_oracle, doubling_bounds, DoublingStrategy,
};
use mfl_core::{
    enumerate_subdiamonds, Family, GenerateOptions, MetricGraph, Normalization, Vertex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oracles::*;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gen(family: Family, n: u32) -> MetricGraph {
    MetricGraph::generate_with(
        family,
        n,
        Normalization::Unweighted,
        &GenerateOptions::default(),
    )
    .unwrap_or_else(|e| panic!("{family}:{n} failed to generate: {e}"))
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Check {
    if elapsed < limit {
        Ok(format!("{label} {:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "{label} took {:.2}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

/// Vertex and edge counts from the substitution recurrence: each level adds
/// `inner` vertices per edge of the level below and multiplies edges by `b`.
fn recurrence_counts(b: u128, inner: u128, n: u32) -> (u128, u128) {
    let (mut v, mut e) = (2u128, 1u128);
    for _ in 0..n {
        v += inner * e;
        e *= b;
    }
    (v, e)
}

fn criterion_1() -> Check {
    // diamond: 2 new vertices per edge, 4 edges; Laakso: 4 and 6; M: 8 and 10
    let table = [
        (Family::Diamond, 4, 2),
        (Family::Laakso, 6, 4),
        (Family::MVariant, 10, 8),
    ];
    for (family, b, inner) in table {
        for n in 0..=6 {
            let g = gen(family, n);
            let (v, e) = recurrence_counts(b, inner, n);
            ensure!(
                (g.vertex_count() as u128, g.edge_count() as u128) == (v, e),
                "{family}:{n} has ({}, {}), expected ({v}, {e})",
                g.vertex_count(),
                g.edge_count()
            );
            let unique: BTreeSet<[Vertex; 2]> = g
                .edges()
                .iter()
                .map(|&[a, b]| [a.min(b), a.max(b)])
                .collect();
            ensure!(
                unique.len() == g.edge_count(),
                "{family}:{n} has repeated edges"
            );
        }
    }
    let d2 = gen(Family::Diamond, 2);
    ensure!(
        (d2.vertex_count(), d2.edge_count()) == (12, 16),
        "D_2 is not 12 vertices and 16 edges"
    );
    let start = Instant::now();
    let d8 = gen(Family::Diamond, 8);
    let elapsed = start.elapsed();
    ensure!(
        d8.edge_count() == 65_536,
        "D_8 has {} edges",
        d8.edge_count()
    );
    Ok(format!(
        "counts for n <= 6 match; {}",
        within("D_8 generated in", elapsed, Duration::from_secs(5))?
    ))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    for n in 0..=5 {
        let d = gen(Family::Diamond, n);
        ensure!(diameter_hops(&d).unwrap() == 1 << n, "diam D_{n} != 2^{n}");
        let l = gen(Family::Laakso, n);
        ensure!(
            diameter_hops(&l).unwrap() == 1 << (2 * n),
            "diam L_{n} != 4^{n}"
        );
        // the two endpoints realise it, by an independent BFS
        let top = bfs(&adjacency(&l), 0)[1];
        ensure!(
            u64::from(top) == 1 << (2 * n),
            "d(bottom, top) in L_{n} is {top}"
        );
    }
    for family in [Family::Diamond, Family::Laakso] {
        let g = gen(family, 3);
        let truth = all_pairs(&adjacency(&g));
        for u in g.vertices() {
            for v in g.vertices() {
                let got = distance_oracle(&g, u, v).unwrap().hops;
                ensure!(
                    got == u64::from(truth[u as usize][v as usize]),
                    "{family}:3 oracle d({u}, {v}) = {got}, BFS says {}",
                    truth[u as usize][v as usize]
                );
            }
        }
    }
    let d8 = gen(Family::Diamond, 8);
    let adj = adjacency(&d8);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = d8.vertex_count();
    let pairs: Vec<(usize, usize)> = (0..10_000)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let workers = std::thread::available_parallelism().map_or(4, |p| p.get());
    let mismatch = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .chunks(pairs.len().div_ceil(workers))
            .map(|chunk| {
                let (adj, d8) = (&adj, &d8);
                s.spawn(move || {
                    chunk.iter().copied().find(|&(u, v)| {
                        u64::from(bfs(adj, u)[v])
                            != distance_oracle(d8, u as Vertex, v as Vertex).unwrap().hops
                    })
                })
            })
            .collect();
        handles.into_iter().find_map(|h| h.join().unwrap())
    });
    ensure!(
        mismatch.is_none(),
        "D_8 oracle disagrees with BFS on {mismatch:?}"
    );
    Ok(format!(
        "diameters for n <= 5, all pairs of D_3 and L_3, 10^4 pairs of D_8; {}",
        within("total", start.elapsed(), Duration::from_secs(60))?
    ))
}

fn criterion_3() -> Check {
    for n in 2..=10 {
        let d = gen(Family::Diamond, n);
        let size = ball_hops(&d, 0, 1).unwrap().len();
        let counted = bfs(&adjacency(&d), 0).iter().filter(|&&x| x <= 1).count();
        ensure!(size == counted, "ball disagrees with BFS in D_{n}");
        ensure!(size == (1 << n) + 1, "|B(bottom, 1)| in D_{n} is {size}");
    }
    let mut lower = Vec::new();
    for n in 2..=6 {
        let d = gen(Family::Diamond, n);
        let r = doubling_bounds(&d, DoublingStrategy::WitnessBottomBall).unwrap();
        // certificate: the witnesses lie in the ball and are pairwise more
        // than half its diameter apart
        let adj = adjacency(&d);
        let members = ball_hops(&d, r.ball_center, 1).unwrap();
        let dist: Vec<Vec<u32>> = members.iter().map(|&x| bfs(&adj, x as usize)).collect();
        let diam = dist
            .iter()
            .flat_map(|row| members.iter().map(|&y| row[y as usize]))
            .max()
            .unwrap();
        for (i, &x) in r.witness_points.iter().enumerate() {
            ensure!(
                members.contains(&x),
                "witness {x} lies outside the ball in D_{n}"
            );
            for &y in &r.witness_points[i + 1..] {
                let dxy = bfs(&adj, x as usize)[y as usize];
                ensure!(
                    2 * dxy > diam,
                    "witnesses {x}, {y} of D_{n} are only {dxy} apart"
                );
            }
        }
        ensure!(
            r.witness_points.len() as u64 == r.witness_lower_bound,
            "certificate size mismatch"
        );
        let floor = ((1u64 << n) + 1).div_ceil(2);
        ensure!(
            r.witness_lower_bound >= floor,
            "D_{n} lower bound {} < {floor}",
            r.witness_lower_bound
        );
        lower.push(r.witness_lower_bound);
    }
    ensure!(
        lower.windows(2).all(|w| w[0] < w[1]),
        "D_2..D_6 lower bounds not increasing: {lower:?}"
    );
    let mut upper = Vec::new();
    for n in 1..=4 {
        let l = gen(Family::Laakso, n);
        let r = doubling_bounds(&l, DoublingStrategy::ScanAllBalls { limit: u64::MAX }).unwrap();
        ensure!(r.complete, "L_{n} scan incomplete");
        upper.push(r.greedy_upper_bound);
    }
    let summary = format!("D_2..D_6 witness bounds {lower:?}; L_1..L_4 greedy bounds {upper:?}");
    ensure!(
        upper[1..].iter().all(|&u| u <= upper[0]),
        "{summary}; L_n greedy bound exceeds the L_1 value {}",
        upper[0]
    );
    Ok(summary)
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in [2, 3] {
        let g = gen(Family::Diamond, n);
        let cycles = enumerate_simple_cycles(&g, DEFAULT_CYCLE_CAP).unwrap();
        let mut masks: Vec<u64> = cycles
            .iter()
            .map(|c| cycle_mask(&g, c.vertices()))
            .collect();
        masks.sort_unstable();
        ensure!(
            masks == cycle_space_cycles(&g),
            "D_{n} cycle set differs from the cycle-space oracle"
        );
        let subs = enumerate_subdiamonds(&g, 2).unwrap();
        let members: Vec<BTreeSet<Vertex>> = subs
            .iter()
            .map(|s| s.vertices(&g).into_iter().collect())
            .collect();
        for c in &cycles {
            let on: BTreeSet<Vertex> = c.vertices().iter().copied().collect();
            let owners: Vec<usize> = (0..subs.len())
                .filter(|&i| {
                    let s = &subs[i];
                    on.is_subset(&members[i])
                        && [s.top, s.bottom, s.leftmost, s.rightmost]
                            .iter()
                            .all(|v| on.contains(v))
                        && c.hops() == 2 * s.height
                })
                .collect();
            ensure!(
                owners.len() == 1,
                "cycle {:?} of D_{n} has {} owners",
                c.vertices(),
                owners.len()
            );
            let s = &subs[owners[0]];
            ensure!(
                s.height.is_power_of_two(),
                "height {} is not a power of two",
                s.height
            );
            let t = s.height.trailing_zeros();
            ensure!(
                c.hops() == 1 << (t + 1),
                "cycle length {} is not 2^(t+1)",
                c.hops()
            );
            let named = classify_cycle(&g, c).map_err(|e| e.to_string())?;
            ensure!(
                named == *s,
                "classify_cycle names {:?}, expected {:?}",
                named.root_edge_path,
                s.root_edge_path
            );
        }
        counts.push(cycles.len());
    }
    ensure!(counts[0] == 20, "D_2 has {} cycles, expected 20", counts[0]);
    Ok(format!(
        "D_2: {} cycles, D_3: {} cycles, each principal for exactly one subdiamond; {}",
        counts[0],
        counts[1],
        within("took", start.elapsed(), Duration::from_secs(300))?
    ))
}

fn criterion_5() -> Check {
    let mut sizes = Vec::new();
    for (n, s, t) in [(3, 2, 1), (4, 3, 1), (4, 3, 2)] {
        let g = gen(Family::Laakso, n);
        let adj = adjacency(&g);
        let fam = cycle_family(&g, s, t, None).map_err(|e| e.to_string())?;
        fam.verify().map_err(|e| e.to_string())?;
        let expected: usize = (0..=s - t).map(|m| 4usize.pow(m)).sum();
        ensure!(
            fam.nodes.len() == expected,
            "({n},{s},{t}) has {} cycles, expected {expected}",
            fam.nodes.len()
        );
        ensure!(
            fam.canonical.hops() == 4u64.pow(n),
            "canonical cycle length {}",
            fam.canonical.hops()
        );
        ensure!(
            is_simple_cycle(&adj, fam.canonical.vertices()),
            "canonical cycle is not a cycle"
        );
        let sets: Vec<BTreeSet<Vertex>> = fam
            .nodes
            .iter()
            .map(|c| c.cycle.vertices().iter().copied().collect())
            .collect();
        for (i, node) in fam.nodes.iter().enumerate() {
            let m = node.label.len() as u32;
            ensure!(
                is_simple_cycle(&adj, node.cycle.vertices()),
                "c_{:?} is not a simple cycle",
                node.label
            );
            ensure!(
                node.cycle.hops() == 4u64.pow(s - m),
                "c_{:?} has length {}, expected 4^{}",
                node.label,
                node.cycle.hops(),
                s - m
            );
            if m == 0 {
                let canon: BTreeSet<Vertex> = fam.canonical.vertices().iter().copied().collect();
                ensure!(!sets[i].is_disjoint(&canon), "root misses the 4^n cycle");
            }
            let children: Vec<usize> = (0..fam.nodes.len())
                .filter(|&j| {
                    fam.nodes[j].label.len() as u32 == m + 1
                        && fam.nodes[j].label.starts_with(&node.label)
                })
                .collect();
            ensure!(
                children.len() == if m < s - t { 4 } else { 0 },
                "c_{:?} has {} children",
                node.label,
                children.len()
            );
            for (a, &x) in children.iter().enumerate() {
                ensure!(
                    !sets[x].is_disjoint(&sets[i]),
                    "c_{:?} misses its parent",
                    fam.nodes[x].label
                );
                for &y in &children[a + 1..] {
                    ensure!(
                        sets[x].is_disjoint(&sets[y]),
                        "siblings c_{:?} and c_{:?} meet",
                        fam.nodes[x].label,
                        fam.nodes[y].label
                    );
                }
            }
        }
        sizes.push(format!("({n},{s},{t}): {} cycles", fam.nodes.len()));
    }
    Ok(sizes.join(", "))
}

fn criterion_6() -> Check {
    let d3 = gen(Family::Diamond, 3);
    let subs: Vec<_> = enumerate_subdiamonds(&d3, 2)
        .unwrap()
        .into_iter()
        .filter(|s| s.height == 2)
        .collect();
    ensure!(
        subs.len() == 16,
        "D_3 has {} height-2 subdiamonds",
        subs.len()
    );
    let q = collapse_subdiamonds(&d3, &subs).map_err(|e| e.to_string())?;
    let sub_d2 = subdivide_edges(&gen(Family::Diamond, 2)).unwrap();
    let qa = adjacency_of(
        q.vertex_count,
        q.edges.iter().map(|&[u, v]| (u as usize, v as usize)),
    );
    ensure!(
        isomorphic(&qa, &adjacency(&sub_d2)),
        "quotient is not isomorphic to subdivided D_2"
    );

    let dq = all_pairs(&qa);
    let full = adjacency(&d3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let v = rng.gen_range(0..d3.vertex_count()) as Vertex;
        let s = subs
            .iter()
            .find(|s| s.contains(&d3, v))
            .ok_or(format!("{v} is in no subdiamond"))?;
        let dv = bfs(&full, v as usize);
        let pv = q.projection[v as usize] as usize;
        for corner in [s.top, s.bottom] {
            let before = dv[corner as usize];
            let after = dq[pv][q.projection[corner as usize] as usize];
            ensure!(
                before == after,
                "d({v}, {corner}) = {before} but {after} after collapsing"
            );
        }
    }
    Ok(format!(
        "{} vertices, {} edges, isomorphic to subdivided D_2; 100 sampled projections exact",
        q.vertex_count,
        q.edges.len()
    ))
}

fn criterion_7() -> Check {
    for n in 0..=2 {
        let c = construct_m_embedding(n, Normalization::Unweighted, &GenerateOptions::default())
            .map_err(|e| e.to_string())?;
        let (ds, dt) = (
            all_pairs(&adjacency(&c.source)),
            all_pairs(&adjacency(&c.target)),
        );
        let f = &c.assignment;
        for u in 0..f.len() {
            for v in 0..f.len() {
                ensure!(
                    dt[f[u] as usize][f[v] as usize] == ds[u][v],
                    "M_{n}: d({u}, {v}) = {} but images are {} apart",
                    ds[u][v],
                    dt[f[u] as usize][f[v] as usize]
                );
            }
        }
        let r = evaluate(&c.map()).unwrap();
        ensure!(
            r.distortion == ExactValue::one(),
            "M_{n} reported distortion {}",
            r.distortion
        );
    }
    let c = construct_l1_to_d2(Normalization::Unweighted).unwrap();
    let r = evaluate(&c.map()).unwrap();
    ensure!(
        r.distortion == ExactValue::one(),
        "L_1 -> D_2 construction has distortion {}",
        r.distortion
    );
    let best = min_distortion_exact(&c.source, &c.target, &ExactOptions::default()).unwrap();
    ensure!(
        best.status == SolverStatus::Optimal,
        "exact L_1 -> D_2 not optimal"
    );
    ensure!(
        best.value == r.distortion,
        "exact L_1 -> D_2 gives {}",
        best.value
    );
    Ok(
        "M_0, M_1, M_2 isometric into D_0, D_3, D_6; L_1 -> D_2 distortion 1 = exact optimum"
            .into(),
    )
}

fn chain(source: &MetricGraph, target: &MetricGraph, exact: &ExactValue, seed: u64) -> Check {
    let k = source.vertex_count().min(3);
    let lower = distortion_lower_bound(
        source,
        target,
        &LowerBoundOptions {
            subset_size: k,
            samples: 16,
            budget: 100_000_000,
            seed,
        },
    )
    .map_err(|e| e.to_string())?
    .value;
    let upper = min_distortion_heuristic(source, target, seed, 3_000)
        .map_err(|e| e.to_string())?
        .value;
    ensure!(
        lower <= *exact && *exact <= upper,
        "chain broken: {lower} <= {exact} <= {upper}"
    );
    Ok(String::new())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let named = [
        (Family::Diamond, 1),
        (Family::Diamond, 2),
        (Family::Laakso, 1),
        (Family::MVariant, 1),
    ];
    let mut infinite = 0;
    let mut seen_values = BTreeSet::new();
    for i in 0..50 {
        let k = rng.gen_range(2..=5);
        let source = if i % 5 == 4 && k >= 3 {
            MetricGraph::from_edges(k, &cycle_edges(k)).unwrap()
        } else {
            let chords = rng.gen_range(0.0..0.6);
            MetricGraph::from_edges(k, &random_connected(&mut rng, k, chords)).unwrap()
        };
        let target = match i % 3 {
            0 => {
                let (f, n) = named[(i / 3) % named.len()];
                gen(f, n)
            }
            1 => {
                let t = rng.gen_range(2..=12);
                MetricGraph::from_edges(t, &random_connected(&mut rng, t, 0.15)).unwrap()
            }
            _ => {
                let t = rng.gen_range(3..=12);
                MetricGraph::from_edges(t, &cycle_edges(t)).unwrap()
            }
        };
        let truth = exact_value(brute_force_distortion(
            &all_pairs(&adjacency(&source)),
            &all_pairs(&adjacency(&target)),
        ));
        let seq = min_distortion_exact(&source, &target, &ExactOptions::default())
            .map_err(|e| e.to_string())?;
        let par = min_distortion_exact(
            &source,
            &target,
            &ExactOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            seq == par,
            "instance {i}: parallel and sequential results differ"
        );
        ensure!(
            seq.value == truth,
            "instance {i} ({} -> {} vertices): solver {} vs oracle {truth}",
            source.vertex_count(),
            target.vertex_count(),
            seq.value
        );
        let expected_status = if truth.is_finite() {
            SolverStatus::Optimal
        } else {
            SolverStatus::InfeasibleInjective
        };
        ensure!(
            seq.status == expected_status,
            "instance {i}: status {:?}",
            seq.status
        );
        if let Some(w) = &seq.witness {
            ensure!(
                evaluate(w).unwrap().distortion == seq.value,
                "instance {i}: witness does not attain the value"
            );
        }
        infinite += usize::from(!truth.is_finite());
        seen_values.insert(truth.to_string());
        chain(&source, &target, &seq.value, i as u64)?;
    }

    let l1 = gen(Family::Laakso, 1);
    let (d1, d2) = (gen(Family::Diamond, 1), gen(Family::Diamond, 2));
    let r = min_distortion_exact(&l1, &d1, &ExactOptions::default()).unwrap();
    ensure!(
        r.status == SolverStatus::InfeasibleInjective,
        "L_1 -> D_1 status {:?}",
        r.status
    );
    ensure!(
        r.value == ExactValue::Infinite,
        "L_1 -> D_1 value {}",
        r.value
    );

    let d3 = gen(Family::Diamond, 3);
    let start = Instant::now();
    let r = min_distortion_exact(
        &l1,
        &d3,
        &ExactOptions {
            node_budget: 1_000_000_000,
            ..Default::default()
        },
    )
    .unwrap();
    let elapsed = start.elapsed();
    ensure!(
        r.status == SolverStatus::Optimal,
        "L_1 -> D_3 status {:?}",
        r.status
    );
    let timing = within("L_1 -> D_3 optimal in", elapsed, Duration::from_secs(60))?;
    for (t, v) in [
        (&d1, ExactValue::Infinite),
        (&d2, ExactValue::one()),
        (&d3, r.value.clone()),
    ] {
        chain(&l1, t, &v, 7)?;
    }
    Ok(format!(
        "50 instances match the exhaustive oracle ({infinite} infeasible, values {seen_values:?}); L_1 -> D_1 infeasible; L_1 -> D_3 = {}, {timing}; chain holds on all runs",
        r.value
    ))
}

fn mfl(args: &[&str], env: &[(&str, &str)]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(args)
        .env_remove("MFL_MAX_EDGES")
        .envs(env.iter().copied())
        .output()
        .expect("mfl runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_9() -> Check {
    let matrix: &[&[&str]] = &[
        &["gen", "--family", "diamond", "--level", "2"],
        &["gen", "--graph", "laakso:2:weighted"],
        &[
            "dist",
            "--graph",
            "diamond:3",
            "--u",
            "d:bottom",
            "--v",
            "1",
        ],
        &["diam", "--graph", "laakso:3"],
        &[
            "ball",
            "--graph",
            "diamond:4",
            "--center",
            "0",
            "--radius",
            "1",
        ],
        &["doubling", "--graph", "diamond:4"],
        &["doubling", "--graph", "laakso:2", "--strategy", "scan"],
        &["profile", "--graph", "laakso:2", "--radii", "0,1,2,4"],
        &[
            "profile",
            "--graph",
            "diamond:3",
            "--radii",
            "0,1",
            "--format",
            "csv",
        ],
        &["cycles", "enumerate", "--graph", "diamond:2"],
        &[
            "cycles",
            "classify-all",
            "--family",
            "diamond",
            "--level",
            "2",
        ],
        &["cycles", "family", "--n", "3", "--s", "2", "--t", "1"],
        &[
            "cycles",
            "collapse",
            "--graph",
            "diamond:3",
            "--height",
            "2",
        ],
        &[
            "embed",
            "eval",
            "--source",
            "laakso:1",
            "--target",
            "diamond:2",
            "--assignment",
            "4,10,0,8,9,3",
        ],
        &[
            "embed",
            "exact",
            "--source",
            "laakso:1",
            "--target",
            "diamond:2",
        ],
        &[
            "embed",
            "exact",
            "--source",
            "laakso:1",
            "--target",
            "diamond:3",
            "--parallel",
        ],
        &[
            "embed",
            "heuristic",
            "--source",
            "laakso:2",
            "--target",
            "diamond:3",
            "--seed",
            "11",
            "--iterations",
            "5000",
        ],
        &[
            "embed",
            "lower-bound",
            "--source",
            "laakso:2",
            "--target",
            "diamond:3",
            "--subset-size",
            "3",
            "--seed",
            "5",
        ],
        &["embed", "construct-m", "--n", "2"],
        &["embed", "construct-l1"],
        &["embed", "growth", "--n-max", "1", "--format", "csv"],
    ];
    for args in matrix {
        let (code_a, a) = mfl(args, &[]);
        let (code_b, b) = mfl(args, &[]);
        ensure!(
            code_a == 0 && code_b == 0,
            "`mfl {}` exited {code_a}/{code_b}",
            args.join(" ")
        );
        ensure!(
            a == b,
            "`mfl {}` output differs between runs",
            args.join(" ")
        );
        ensure!(!a.is_empty(), "`mfl {}` printed nothing", args.join(" "));
    }

    let path = std::env::temp_dir().join(format!("mfl-acceptance-{}.csv", std::process::id()));
    let args = [
        "embed",
        "growth",
        "--n-max",
        "1",
        "--targets",
        "2",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ];
    let mut written = Vec::new();
    for _ in 0..2 {
        let (code, stdout) = mfl(&args, &[]);
        ensure!(
            code == 0 && stdout.is_empty(),
            "growth with --output exited {code}"
        );
        written.push(std::fs::read(&path).unwrap());
    }
    let _ = std::fs::remove_file(&path);
    ensure!(
        !written[0].is_empty() && written[0] == written[1],
        "--output files differ between runs"
    );

    let json =
        |args: &[&str]| -> serde_json::Value { serde_json::from_slice(&mfl(args, &[]).1).unwrap() };
    let g = json(&["gen", "--family", "diamond", "--level", "2"]);
    ensure!(
        g["report"]["vertices"].as_array().map(Vec::len) == Some(12)
            && g["report"]["edges"].as_array().map(Vec::len) == Some(16),
        "gen D_2 is not 12 vertices / 16 edges"
    );
    ensure!(g["config"]["command"] == "gen", "config is not echoed");
    let c = json(&[
        "cycles",
        "classify-all",
        "--family",
        "diamond",
        "--level",
        "2",
    ]);
    ensure!(
        c["report"]["count"] == 20 && c["report"]["classified"] == 20,
        "classify-all D_2 is not 20/20"
    );
    let e = json(&[
        "embed",
        "exact",
        "--source",
        "laakso:1",
        "--target",
        "diamond:2",
    ]);
    ensure!(
        e["report"]["value"] == serde_json::json!({"num": 1, "den": 1}),
        "exact L_1 -> D_2 is not 1"
    );

    type Case<'a> = (&'a [&'a str], &'a [(&'a str, &'a str)], i32);
    let failures: &[Case] = &[
        (&["frobnicate"], &[], 64),
        (&["embed", "teleport"], &[], 64),
        (&["gen", "--graph", "hexagon:2"], &[], 64),
        (&["gen", "--graph", "diamond:2", "--format", "csv"], &[], 64),
        (
            &["dist", "--graph", "diamond:2", "--u", "0", "--v", "99"],
            &[],
            1,
        ),
        (
            &["cycles", "family", "--n", "2", "--s", "2", "--t", "1"],
            &[],
            1,
        ),
        (&["cycles", "classify-all", "--graph", "laakso:1"], &[], 1),
        (&["gen", "--graph", "/nonexistent/graph.json"], &[], 1),
        (
            &["gen", "--graph", "diamond:3"],
            &[("MFL_MAX_EDGES", "10")],
            2,
        ),
        (
            &["cycles", "enumerate", "--graph", "diamond:3", "--cap", "5"],
            &[],
            2,
        ),
        (
            &[
                "embed",
                "lower-bound",
                "--source",
                "laakso:1",
                "--target",
                "diamond:3",
                "--budget",
                "10",
            ],
            &[],
            2,
        ),
    ];
    for (args, env, expected) in failures {
        let (code, _) = mfl(args, env);
        ensure!(
            code == *expected,
            "`mfl {}` exited {code}, expected {expected}",
            args.join(" ")
        );
    }
    Ok(format!(
        "{} commands byte-identical across runs; {} exit-code cases",
        matrix.len(),
        failures.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("counts", criterion_1),
        ("metric ground truth", criterion_2),
        ("doubling contrast", criterion_3),
        ("diamond cycles are principal", criterion_4),
        ("Laakso cycle families", criterion_5),
        ("collapse", criterion_6),
        ("isometric constructions", criterion_7),
        ("solver soundness", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} PASS ({name}, {secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL ({name}, {secs:.1}s): {why}");
            }
        }
    }
    println!("acceptance: {failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
