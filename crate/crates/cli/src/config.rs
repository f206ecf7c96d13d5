use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use mfl_core::recgraph::export::GraphDocument;
use mfl_core::{Family, GenerateOptions, MetricGraph, Normalization, Vertex, VertexAddress};
use serde::Serialize;
use serde_json::Value;

pub const MAX_EDGES_VAR: &str = "MFL_MAX_EDGES";

#[derive(Debug)]
pub enum CliError {
    Core(mfl_core::Error),
    Io(String),
}

impl From<mfl_core::Error> for CliError {
    fn from(e: mfl_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mfl_core::Error::Usage(_)) => 64,
            CliError::Core(e) if e.is_resource_limit() => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Document,
    Csv,
}

/// How a graph argument was given, echoed into the run configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GraphSource {
    Family {
        family: Family,
        level: u32,
        normalization: Normalization,
    },
    File {
        path: String,
    },
}

impl GraphSource {
    /// `family:level[:weighted]`, or a path to a graph document.
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.ends_with(".json") || text.contains(std::path::MAIN_SEPARATOR) {
            return Ok(GraphSource::File {
                path: text.to_string(),
            });
        }
        let parts: Vec<&str> = text.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(usage(format!(
                "graph `{text}` is not of the form family:level[:weighted]"
            )));
        }
        let family: Family = parts[0].parse()?;
        let level = parts[1]
            .parse()
            .map_err(|_| usage(format!("level `{}` is not a number", parts[1])))?;
        let normalization = match parts.get(2) {
            Some(n) => n.parse()?,
            None => Normalization::Unweighted,
        };
        Ok(GraphSource::Family {
            family,
            level,
            normalization,
        })
    }

    pub fn load(&self, options: &GenerateOptions) -> CliResult<MetricGraph> {
        match self {
            GraphSource::Family {
                family,
                level,
                normalization,
            } => Ok(MetricGraph::generate_with(
                *family,
                *level,
                *normalization,
                options,
            )?),
            GraphSource::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?;
                let doc: GraphDocument = serde_json::from_str(&text)
                    .map_err(|e| CliError::Io(format!("{path} is not a graph document: {e}")))?;
                Ok(MetricGraph::from_document(&doc)?)
            }
        }
    }
}

pub fn usage(msg: String) -> CliError {
    CliError::Core(mfl_core::Error::Usage(msg))
}

pub fn generate_options() -> CliResult<GenerateOptions> {
    match std::env::var(MAX_EDGES_VAR) {
        Ok(v) => {
            let max_edges = v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{MAX_EDGES_VAR}=`{v}` is not a whole number")))?;
            Ok(GenerateOptions { max_edges })
        }
        Err(_) => Ok(GenerateOptions::default()),
    }
}

/// A vertex given as an id or as an address such as `d:2:03:a`.
pub fn resolve_vertex(graph: &MetricGraph, text: &str) -> CliResult<Vertex> {
    if let Ok(id) = text.parse::<Vertex>() {
        graph.check_vertex(id)?;
        return Ok(id);
    }
    let address: VertexAddress = text.parse()?;
    graph.resolve(&address).ok_or_else(|| {
        CliError::Core(mfl_core::Error::Domain(format!(
            "no vertex at address {text} in {}",
            graph.id()
        )))
    })
}

pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("`{s}` is not a valid {what}")))
        })
        .collect()
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    pub graphs: BTreeMap<String, GraphSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
    pub max_edges: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str, subcommand: Option<&str>, max_edges: u64) -> Self {
        RunConfig {
            command: command.to_string(),
            subcommand: subcommand.map(str::to_string),
            graphs: BTreeMap::new(),
            seed: None,
            budget: None,
            iterations: None,
            parameters: BTreeMap::new(),
            max_edges,
            output: None,
            format: Format::Document,
        }
    }

    pub fn graph(&mut self, role: &str, source: &GraphSource) -> &mut Self {
        self.graphs.insert(role.to_string(), source.clone());
        self
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let value = serde_json::to_value(value).expect("parameters serialize");
        self.parameters.insert(key.to_string(), value);
        self
    }
}
