use std::collections::BTreeMap;

use clap::ValueEnum;
use mfl_core::cycles::{
    classify_cycle, collapse_subdiamonds, cycle_family, enumerate_simple_cycles, Cycle,
};
use mfl_core::embed::{
    construct_l1_to_d2, construct_m_embedding, distortion_lower_bound, evaluate, growth_experiment,
    min_distortion_exact, min_distortion_heuristic, EmbeddingMap, ExactOptions, GrowthOptions,
    LowerBoundOptions,
};
use mfl_core::metric::{
    ball, diameter, diameter_hops, distance_oracle, doubling_bounds, geometry_profile,
    DoublingStrategy,
};
use mfl_core::recgraph::export::RationalDoc;
use mfl_core::{
    enumerate_subdiamonds, Family, GenerateOptions, Length, MetricGraph, Normalization, Subdiamond,
    Vertex,
};
use serde::Serialize;

use crate::config::{
    generate_options, parse_list, resolve_vertex, usage, CliError, CliResult, Format, GraphSource,
    RunConfig,
};
use crate::{Cli, Command, CyclesCommand, EmbedCommand, GraphArgs, PairArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    /// The radius-1 ball around the bottom vertex.
    Witness,
    /// Every center and radius up to half the diameter.
    Scan,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    report: T,
}

fn normalization(weighted: bool) -> Normalization {
    if weighted {
        Normalization::Weighted
    } else {
        Normalization::Unweighted
    }
}

fn graph_source(args: &GraphArgs) -> CliResult<GraphSource> {
    match (&args.graph, &args.family, args.level) {
        (Some(spec), _, _) => {
            if args.weighted {
                return Err(usage(
                    "--weighted goes inside --graph as family:level:weighted".into(),
                ));
            }
            GraphSource::parse(spec)
        }
        (None, Some(family), Some(level)) => Ok(GraphSource::Family {
            family: family.parse()?,
            level,
            normalization: normalization(args.weighted),
        }),
        _ => Err(usage("give --graph, or --family with --level".into())),
    }
}

fn emit<T: Serialize>(config: &RunConfig, report: T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(&Envelope { config, report })?;
    text.push('\n');
    Ok(text)
}

fn emit_csv<T: Serialize>(
    config: &RunConfig,
    rows: impl IntoIterator<Item = T>,
) -> CliResult<String> {
    let mut out = format!("# config: {}\n", serde_json::to_string(config)?).into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut out);
        for row in rows {
            writer
                .serialize(row)
                .map_err(|e| CliError::Io(format!("csv output failed: {e}")))?;
        }
        writer
            .flush()
            .map_err(|e| CliError::Io(format!("csv output failed: {e}")))?;
    }
    Ok(String::from_utf8(out).expect("csv output is utf-8"))
}

fn document_only(config: &RunConfig) -> CliResult<()> {
    if config.format == Format::Csv {
        return Err(usage(format!(
            "csv output is only offered for `profile` and `embed growth`, not `{}`",
            config.subcommand.as_deref().unwrap_or(&config.command)
        )));
    }
    Ok(())
}

/// Loads the single graph of a command and records it in the config.
fn one_graph(
    config: &mut RunConfig,
    args: &GraphArgs,
    opts: &GenerateOptions,
) -> CliResult<MetricGraph> {
    let source = graph_source(args)?;
    config.graph("graph", &source);
    source.load(opts)
}

fn two_graphs(
    config: &mut RunConfig,
    pair: &PairArgs,
    opts: &GenerateOptions,
) -> CliResult<(MetricGraph, MetricGraph)> {
    let s = GraphSource::parse(&pair.source)?;
    let t = GraphSource::parse(&pair.target)?;
    config.graph("source", &s).graph("target", &t);
    Ok((s.load(opts)?, t.load(opts)?))
}

fn parse_length(text: &str) -> CliResult<Length> {
    text.trim()
        .parse()
        .map_err(|_| usage(format!("`{text}` is not an exact nonnegative rational")))
}

fn digits(text: &str) -> CliResult<Vec<u8>> {
    text.trim()
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| usage(format!("`{text}` is not a label path")))
        })
        .collect()
}

#[derive(Serialize)]
struct DiameterReport {
    graph: String,
    diameter: RationalDoc,
    hops: u64,
}

#[derive(Serialize)]
struct BallReport {
    graph: String,
    center: Vertex,
    radius: RationalDoc,
    size: usize,
    vertices: Vec<Vertex>,
}

#[derive(Serialize)]
struct CycleListReport {
    graph: String,
    count: usize,
    cycles: Vec<Cycle>,
}

#[derive(Serialize)]
struct ClassifiedCycle {
    vertices: Vec<Vertex>,
    hops: u64,
    subdiamond: Subdiamond,
}

#[derive(Serialize)]
struct ClassifyReport {
    graph: String,
    count: usize,
    classified: usize,
    /// Number of cycles per subdiamond height.
    by_height: BTreeMap<u64, usize>,
    cycles: Vec<ClassifiedCycle>,
}

#[derive(Serialize)]
struct ProfileRow {
    radius: String,
    max_ball_cardinality: u64,
    center: Vertex,
}

#[derive(Serialize)]
struct GrowthCsvRow {
    n: u32,
    target_level: u32,
    source_vertices: usize,
    target_vertices: usize,
    upper: String,
    lower: String,
}

pub fn run(cli: Cli) -> CliResult<String> {
    let opts = generate_options()?;
    let (name, sub) = match &cli.command {
        Command::Gen(_) => ("gen", None),
        Command::Dist { .. } => ("dist", None),
        Command::Diam(_) => ("diam", None),
        Command::Ball { .. } => ("ball", None),
        Command::Doubling { .. } => ("doubling", None),
        Command::Profile { .. } => ("profile", None),
        Command::Cycles(c) => (
            "cycles",
            Some(match c {
                CyclesCommand::Enumerate { .. } => "enumerate",
                CyclesCommand::ClassifyAll { .. } => "classify-all",
                CyclesCommand::Family { .. } => "family",
                CyclesCommand::Collapse { .. } => "collapse",
            }),
        ),
        Command::Embed(c) => (
            "embed",
            Some(match c {
                EmbedCommand::Eval { .. } => "eval",
                EmbedCommand::Exact { .. } => "exact",
                EmbedCommand::Heuristic { .. } => "heuristic",
                EmbedCommand::LowerBound { .. } => "lower-bound",
                EmbedCommand::ConstructM { .. } => "construct-m",
                EmbedCommand::ConstructL1 { .. } => "construct-l1",
                EmbedCommand::Growth { .. } => "growth",
            }),
        ),
    };
    let mut config = RunConfig::new(name, sub, opts.max_edges);
    config.output = cli.output.clone();
    config.format = cli.format;
    let tabular = matches!(
        cli.command,
        Command::Profile { .. } | Command::Embed(EmbedCommand::Growth { .. })
    );
    if !tabular {
        document_only(&config)?;
    }

    let text = match cli.command {
        Command::Gen(args) => {
            let g = one_graph(&mut config, &args, &opts)?;
            emit(&config, g.to_document())?
        }
        Command::Dist { graph, u, v } => {
            let g = one_graph(&mut config, &graph, &opts)?;
            config.param("u", &u).param("v", &v);
            let (u, v) = (resolve_vertex(&g, &u)?, resolve_vertex(&g, &v)?);
            emit(&config, distance_oracle(&g, u, v)?)?
        }
        Command::Diam(args) => {
            let g = one_graph(&mut config, &args, &opts)?;
            let report = DiameterReport {
                graph: g.id(),
                diameter: diameter(&g)?.into(),
                hops: diameter_hops(&g)?,
            };
            emit(&config, report)?
        }
        Command::Ball {
            graph,
            center,
            radius,
        } => {
            let g = one_graph(&mut config, &graph, &opts)?;
            config.param("center", &center).param("radius", &radius);
            let c = resolve_vertex(&g, &center)?;
            let r = parse_length(&radius)?;
            let vertices = ball(&g, c, r)?;
            let report = BallReport {
                graph: g.id(),
                center: c,
                radius: r.into(),
                size: vertices.len(),
                vertices,
            };
            emit(&config, report)?
        }
        Command::Doubling {
            graph,
            strategy,
            limit,
        } => {
            let g = one_graph(&mut config, &graph, &opts)?;
            let strategy = match strategy {
                StrategyArg::Witness => DoublingStrategy::WitnessBottomBall,
                StrategyArg::Scan => DoublingStrategy::ScanAllBalls { limit },
            };
            config.param("strategy", strategy);
            emit(&config, doubling_bounds(&g, strategy)?)?
        }
        Command::Profile { graph, radii } => {
            let g = one_graph(&mut config, &graph, &opts)?;
            config.param("radii", &radii);
            let radii = radii
                .split(',')
                .map(parse_length)
                .collect::<CliResult<Vec<_>>>()?;
            let profile = geometry_profile(&g, &radii)?;
            match config.format {
                Format::Document => emit(&config, profile)?,
                Format::Csv => emit_csv(
                    &config,
                    profile.entries.iter().map(|e| ProfileRow {
                        radius: e.radius.to_string(),
                        max_ball_cardinality: e.max_ball_cardinality,
                        center: e.center,
                    }),
                )?,
            }
        }
        Command::Cycles(c) => cycles(&mut config, c, &opts)?,
        Command::Embed(c) => embed(&mut config, c, &opts)?,
    };

    match &config.output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cycles(
    config: &mut RunConfig,
    command: CyclesCommand,
    opts: &GenerateOptions,
) -> CliResult<String> {
    match command {
        CyclesCommand::Enumerate { graph, cap } => {
            let g = one_graph(config, &graph, opts)?;
            config.param("cap", cap);
            let cycles = enumerate_simple_cycles(&g, cap)?;
            emit(
                config,
                CycleListReport {
                    graph: g.id(),
                    count: cycles.len(),
                    cycles,
                },
            )
        }
        CyclesCommand::ClassifyAll { graph, cap } => {
            let g = one_graph(config, &graph, opts)?;
            config.param("cap", cap);
            if g.family() != Family::Diamond {
                return Err(mfl_core::Error::Family {
                    expected: "diamond",
                    found: g.family().name().into(),
                }
                .into());
            }
            let cycles = enumerate_simple_cycles(&g, cap)?;
            let mut by_height = BTreeMap::new();
            let mut out = Vec::with_capacity(cycles.len());
            for cycle in &cycles {
                let sub = classify_cycle(&g, cycle)?;
                *by_height.entry(sub.height).or_insert(0) += 1;
                out.push(ClassifiedCycle {
                    vertices: cycle.vertices().to_vec(),
                    hops: cycle.hops(),
                    subdiamond: sub,
                });
            }
            let report = ClassifyReport {
                graph: g.id(),
                count: cycles.len(),
                classified: out.len(),
                by_height,
                cycles: out,
            };
            emit(config, report)
        }
        CyclesCommand::Family {
            n,
            s,
            t,
            root,
            weighted,
        } => {
            let source = GraphSource::Family {
                family: Family::Laakso,
                level: n,
                normalization: normalization(weighted),
            };
            config.graph("graph", &source).param("s", s).param("t", t);
            let root = root.map(|r| parse_list::<u8>(&r, "label")).transpose()?;
            if let Some(r) = &root {
                config.param("root", r);
            }
            let g = source.load(opts)?;
            let family = cycle_family(&g, s, t, root.as_deref())?;
            family.verify()?;
            emit(config, family)
        }
        CyclesCommand::Collapse {
            graph,
            height,
            paths,
        } => {
            let g = one_graph(config, &graph, opts)?;
            let subs = match (height, paths) {
                (Some(h), _) => {
                    config.param("height", h);
                    enumerate_subdiamonds(&g, h)?
                        .into_iter()
                        .filter(|s| s.height == h)
                        .collect()
                }
                (None, Some(p)) => {
                    config.param("paths", &p);
                    p.split(',')
                        .map(|path| Ok(Subdiamond::from_path(&g, &digits(path)?)?))
                        .collect::<CliResult<Vec<_>>>()?
                }
                (None, None) => return Err(usage("give --height or --paths".into())),
            };
            let quotient = collapse_subdiamonds(&g, &subs)?;
            quotient.verify(&g)?;
            emit(config, quotient)
        }
    }
}

fn embed(
    config: &mut RunConfig,
    command: EmbedCommand,
    opts: &GenerateOptions,
) -> CliResult<String> {
    match command {
        EmbedCommand::Eval { pair, assignment } => {
            let (s, t) = two_graphs(config, &pair, opts)?;
            config.param("assignment", &assignment);
            let images = assignment
                .split(',')
                .map(|v| resolve_vertex(&t, v.trim()))
                .collect::<CliResult<Vec<_>>>()?;
            let map = EmbeddingMap::new(&s, &t, images)?;
            emit(config, evaluate(&map)?)
        }
        EmbedCommand::Exact {
            pair,
            budget,
            parallel,
            no_symmetry,
            preload,
        } => {
            let (s, t) = two_graphs(config, &pair, opts)?;
            config.budget = Some(budget);
            config
                .param("parallel", parallel)
                .param("symmetry", !no_symmetry);
            let preload = preload
                .map(|p| parse_list::<Vertex>(&p, "vertex id"))
                .transpose()?;
            if let Some(p) = &preload {
                config.param("preload", p);
            }
            let options = ExactOptions {
                node_budget: budget,
                parallel,
                preload,
                symmetry: !no_symmetry,
            };
            emit(config, min_distortion_exact(&s, &t, &options)?)
        }
        EmbedCommand::Heuristic {
            pair,
            seed,
            iterations,
        } => {
            let (s, t) = two_graphs(config, &pair, opts)?;
            config.seed = Some(seed);
            config.iterations = Some(iterations);
            emit(config, min_distortion_heuristic(&s, &t, seed, iterations)?)
        }
        EmbedCommand::LowerBound {
            pair,
            subset_size,
            samples,
            budget,
            seed,
        } => {
            let (s, t) = two_graphs(config, &pair, opts)?;
            config.seed = Some(seed);
            config.budget = Some(budget);
            config
                .param("subset_size", subset_size)
                .param("samples", samples);
            let options = LowerBoundOptions {
                subset_size,
                samples,
                budget,
                seed,
            };
            emit(config, distortion_lower_bound(&s, &t, &options)?)
        }
        EmbedCommand::ConstructM { n, weighted } => {
            config
                .param("n", n)
                .param("normalization", normalization(weighted));
            let c = construct_m_embedding(n, normalization(weighted), opts)?;
            let report = evaluate(&c.map())?;
            emit(
                config,
                Construction {
                    map: &c,
                    distortion: report,
                },
            )
        }
        EmbedCommand::ConstructL1 { weighted } => {
            config.param("normalization", normalization(weighted));
            let c = construct_l1_to_d2(normalization(weighted))?;
            let report = evaluate(&c.map())?;
            emit(
                config,
                Construction {
                    map: &c,
                    distortion: report,
                },
            )
        }
        EmbedCommand::Growth {
            n_max,
            targets,
            seed,
            iterations,
            subset_size,
            samples,
            budget,
        } => {
            let levels = parse_list::<u32>(&targets, "diamond level")?;
            config.seed = Some(seed);
            config.iterations = Some(iterations);
            config.budget = Some(budget);
            config
                .param("n_max", n_max)
                .param("targets", &levels)
                .param("subset_size", subset_size)
                .param("samples", samples);
            let options = GrowthOptions {
                iterations,
                seed,
                lower: LowerBoundOptions {
                    subset_size,
                    samples,
                    budget,
                    seed,
                },
            };
            let rows = growth_experiment(n_max, &levels, &options, opts)?;
            match config.format {
                Format::Document => emit(config, rows),
                Format::Csv => emit_csv(
                    config,
                    rows.iter().map(|r| GrowthCsvRow {
                        n: r.n,
                        target_level: r.target_level,
                        source_vertices: r.source_vertices,
                        target_vertices: r.target_vertices,
                        upper: r.upper.to_string(),
                        lower: r.lower.to_string(),
                    }),
                ),
            }
        }
    }
}

#[derive(Serialize)]
struct Construction<'a> {
    map: &'a mfl_core::embed::Construction,
    distortion: mfl_core::embed::DistortionReport,
}
