//! Free colored PROPs on a signature of generators, realized as decorated
//! directed acyclic graphs.

mod diagram;
mod enumerate;
mod expr;
mod presentation;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profile::{Palette, Profile};

pub use diagram::{graphs_compare, graphs_equal, CanonicalGraph, Edge, Port, PropGraph};
pub use enumerate::{enumerate_graphs, enumerate_graphs_capped, free_component_dim, DEFAULT_CANDIDATE_CAP};
pub use expr::{parse, parse_permutation, Expression, Node};
pub use presentation::{validate_presentation, GraphCombination, PresentationReport, PropPresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    name: String,
    out: Profile,
    input: Profile,
    degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, out: Profile, input: Profile, degree: u32) -> Result<Self> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::InvalidGraph(format!("{name:?} is not a generator name")));
        }
        if out.is_empty() || input.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if !out.same_palette(&input) {
            return Err(Error::PaletteMismatch);
        }
        Ok(Generator { name, out, input, degree })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn out(&self) -> &Profile {
        &self.out
    }

    pub fn input(&self) -> &Profile {
        &self.input
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// Identifiers name generators; `o` is reserved for vertical composition.
pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "o"
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    palette: Arc<Palette>,
    generators: Vec<Generator>,
    by_name: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(palette: &Arc<Palette>, generators: Vec<Generator>) -> Result<Self> {
        let mut by_name = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if **g.out.palette() != **palette {
                return Err(Error::PaletteMismatch);
            }
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("generator {:?} declared twice", g.name)));
            }
        }
        Ok(Signature { palette: palette.clone(), generators, by_name })
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.by_name.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}
