use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{Family, Vertex};
use crate::error::Error;

/// Hierarchical name of a vertex, independent of the level it is viewed at.
///
/// Text form: `d:bottom`, `d:top`, `<tag>:<birth_level>:<parent_edge_path>:<slot>`
/// (for example `d:4:031:a`), `q:<sequence>` for tree vertices and `g:<id>`
/// for generic graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress {
    pub family: Family,
    pub kind: AddressKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AddressKind {
    RootBottom,
    RootTop,
    Derived {
        birth_level: u32,
        /// Edge labels of length `birth_level - 1`.
        parent_edge_path: Vec<u8>,
        slot: u8,
    },
    Tree {
        sequence: Vec<u8>,
    },
    Generic {
        id: Vertex,
    },
}

impl VertexAddress {
    pub fn root_bottom(family: Family) -> Self {
        Self {
            family,
            kind: AddressKind::RootBottom,
        }
    }

    pub fn root_top(family: Family) -> Self {
        Self {
            family,
            kind: AddressKind::RootTop,
        }
    }

    pub fn derived(family: Family, birth_level: u32, parent_edge_path: Vec<u8>, slot: u8) -> Self {
        Self {
            family,
            kind: AddressKind::Derived {
                birth_level,
                parent_edge_path,
                slot,
            },
        }
    }

    pub fn tree(sequence: Vec<u8>) -> Self {
        Self {
            family: Family::QuaternaryTree,
            kind: AddressKind::Tree { sequence },
        }
    }

    pub fn generic(id: Vertex) -> Self {
        Self {
            family: Family::Generic,
            kind: AddressKind::Generic { id },
        }
    }
}

fn digit_string(labels: &[u8]) -> String {
    labels.iter().map(|&d| char::from(b'0' + d)).collect()
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = self.family.tag();
        match &self.kind {
            AddressKind::RootBottom => write!(f, "{tag}:bottom"),
            AddressKind::RootTop => write!(f, "{tag}:top"),
            AddressKind::Derived {
                birth_level,
                parent_edge_path,
                slot,
            } => {
                let slot_name = self
                    .family
                    .gadget()
                    .and_then(|g| g.slot_names.get(*slot as usize))
                    .copied()
                    .unwrap_or("?");
                write!(
                    f,
                    "{tag}:{birth_level}:{}:{slot_name}",
                    digit_string(parent_edge_path)
                )
            }
            AddressKind::Tree { sequence } => write!(f, "q:{}", digit_string(sequence)),
            AddressKind::Generic { id } => write!(f, "g:{id}"),
        }
    }
}

impl Serialize for VertexAddress {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for VertexAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Usage(format!("malformed vertex address `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let family = match parts[0] {
            "d" => Family::Diamond,
            "l" => Family::Laakso,
            "m" => Family::MVariant,
            "q" => Family::QuaternaryTree,
            "g" => Family::Generic,
            _ => return Err(bad()),
        };
        let labels = |text: &str| -> Result<Vec<u8>, Error> {
            text.bytes()
                .map(|c| {
                    if c.is_ascii_digit() {
                        Ok(c - b'0')
                    } else {
                        Err(bad())
                    }
                })
                .collect()
        };
        match (family, parts.as_slice()) {
            (Family::Generic, [_, id]) => Ok(Self::generic(id.parse().map_err(|_| bad())?)),
            (Family::QuaternaryTree, [_, seq]) => Ok(Self::tree(labels(seq)?)),
            (_, [_, "bottom"]) => Ok(Self::root_bottom(family)),
            (_, [_, "top"]) => Ok(Self::root_top(family)),
            (_, [_, level, path, slot]) => {
                let gadget = family.gadget().ok_or_else(bad)?;
                Ok(Self::derived(
                    family,
                    level.parse().map_err(|_| bad())?,
                    labels(path)?,
                    gadget.slot_index(slot).ok_or_else(bad)?,
                ))
            }
            _ => Err(bad()),
        }
    }
}
