//! Quasi-free presentations: a signature with a degree −1 differential on
//! generators, extended to graphs as a derivation.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

use super::diagram::{CanonicalGraph, PropGraph};
use super::expr::Expression;
use super::Signature;

/// A formal ℚ-linear combination of canonical graphs.
pub type GraphCombination = BTreeMap<CanonicalGraph, Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropPresentation {
    pub signature: Signature,
    /// `δ(g)` for each generator name; absent generators have `δ = 0`.
    pub delta: BTreeMap<String, Vec<(Q, Expression)>>,
    pub relations: Vec<(Expression, Expression)>,
}

fn add_term(acc: &mut GraphCombination, g: CanonicalGraph, c: Q) {
    let entry = acc.entry(g).or_insert_with(Q::zero);
    *entry += c;
}

fn prune(mut acc: GraphCombination) -> GraphCombination {
    acc.retain(|_, c| !c.is_zero());
    acc
}

impl PropPresentation {
    pub fn new(signature: Signature, delta: BTreeMap<String, Vec<(Q, Expression)>>, relations: Vec<(Expression, Expression)>) -> Result<Self> {
        for name in delta.keys() {
            signature.index_of(name)?;
        }
        Ok(PropPresentation { signature, delta, relations })
    }

    /// A presentation with zero differential and no relations.
    pub fn free(signature: Signature) -> Self {
        PropPresentation { signature, delta: BTreeMap::new(), relations: Vec::new() }
    }

    pub fn delta_of(&self, generator: &str) -> &[(Q, Expression)] {
        self.delta.get(generator).map_or(&[], Vec::as_slice)
    }

    /// The expression as a signed canonical graph.
    pub fn combination_of(&self, e: &Expression) -> GraphCombination {
        let (c, odd) = PropGraph::from_expression(e, &self.signature).canonical(&self.signature);
        let mut acc = GraphCombination::new();
        add_term(&mut acc, c, if odd { -Q::from_integer(1.into()) } else { Q::from_integer(1.into()) });
        acc
    }

    /// `δ` of a graph, applied vertex by vertex with the Koszul sign of
    /// moving `δ` past the earlier vertices.
    pub fn delta_graph(&self, g: &PropGraph) -> GraphCombination {
        let sig = &self.signature;
        let mut acc = GraphCombination::new();
        let mut passed = 0u32;
        for (v, &gen) in g.vertices().iter().enumerate() {
            let sign = if passed % 2 == 1 { -Q::from_integer(1.into()) } else { Q::from_integer(1.into()) };
            for (c, e) in self.delta_of(sig.get(gen).name()) {
                let h = PropGraph::from_expression(e, sig);
                let (canon, odd) = g.substitute(v, &h).canonical(sig);
                let s = if odd { -&sign } else { sign.clone() };
                add_term(&mut acc, canon, s * c);
            }
            passed += sig.get(gen).degree();
        }
        prune(acc)
    }

    pub fn delta_combination(&self, x: &GraphCombination) -> Result<GraphCombination> {
        let mut acc = GraphCombination::new();
        for (g, c) in x {
            for (h, d) in self.delta_graph(&g.to_graph(&self.signature)?) {
                add_term(&mut acc, h, d * c);
            }
        }
        Ok(prune(acc))
    }

    /// `δ(δ(g))` for a generator.
    pub fn delta_squared(&self, generator: &str) -> Result<GraphCombination> {
        let mut first = GraphCombination::new();
        for (c, e) in self.delta_of(generator) {
            for (g, s) in self.combination_of(e) {
                add_term(&mut first, g, s * c);
            }
        }
        self.delta_combination(&prune(first))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationReport {
    pub failures: Vec<String>,
}

impl PresentationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidPresentation(self.failures.join("; ")))
        }
    }
}

/// Checks degrees, profiles, triangularity, `δ² = 0` and relation typing.
pub fn validate_presentation(p: &PropPresentation) -> PresentationReport {
    let sig = &p.signature;
    let mut failures = Vec::new();
    for (name, terms) in &p.delta {
        let gen = match sig.index_of(name) {
            Ok(i) => sig.get(i),
            Err(e) => {
                failures.push(e.to_string());
                continue;
            }
        };
        for (c, e) in terms {
            if e.out() != gen.out() || e.input() != gen.input() {
                failures.push(format!(
                    "δ{name}: term {} has profiles {} <- {}, expected {} <- {}",
                    e,
                    e.out().display(),
                    e.input().display(),
                    gen.out().display(),
                    gen.input().display()
                ));
            }
            if e.degree() as i64 != gen.degree() as i64 - 1 {
                failures.push(format!("δ{name}: term {} (coefficient {}) has degree {}, expected {}", e, format_q(c), e.degree(), gen.degree() as i64 - 1));
            }
            let graph = PropGraph::from_expression(e, sig);
            if let Some(&v) = graph.vertices().iter().find(|&&v| sig.get(v).degree() >= gen.degree()) {
                failures.push(format!("δ{name}: triangularity violated, term {} mentions {} of degree {}", e, sig.get(v).name(), sig.get(v).degree()));
            }
        }
    }
    if failures.is_empty() {
        for g in sig.generators() {
            match p.delta_squared(g.name()) {
                Ok(d2) if d2.is_empty() => {}
                Ok(d2) => failures.push(format!("δ²{} ≠ 0 ({} nonzero graph terms)", g.name(), d2.len())),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    for (i, (a, b)) in p.relations.iter().enumerate() {
        if a.out() != b.out() || a.input() != b.input() {
            failures.push(format!(
                "relation {}: {} <- {} vs {} <- {}",
                i + 1,
                a.out().display(),
                a.input().display(),
                b.out().display(),
                b.input().display()
            ));
        }
    }
    PresentationReport { failures }
}
