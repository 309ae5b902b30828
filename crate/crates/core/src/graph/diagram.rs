//! Decorated graphs, their construction from expressions, and canonical forms.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::profile::Profile;

use super::expr::{Expression, Node};
use super::Signature;

/// A port of a vertex: an output port when it is the source of an edge or
/// an output leg, an input port otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub vertex: usize,
    pub port: usize,
}

/// Output port `from` feeds input port `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: Port,
    pub to: Port,
}

/// A graph whose vertices are decorated by generators. Vertex order matters
/// for signs: it is the order in which the generators are tensored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropGraph {
    vertices: Vec<usize>,
    edges: Vec<Edge>,
    inputs: Vec<Port>,
    outputs: Vec<Port>,
}

impl PropGraph {
    pub fn new(sig: &Signature, vertices: Vec<usize>, edges: Vec<Edge>, inputs: Vec<Port>, outputs: Vec<Port>) -> Result<Self> {
        let g = PropGraph { vertices, edges, inputs, outputs };
        g.validate(sig)?;
        Ok(g)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &[Port] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Port] {
        &self.outputs
    }

    pub fn degree(&self, sig: &Signature) -> u32 {
        self.vertices.iter().map(|&g| sig.get(g).degree()).sum()
    }

    pub fn out_profile(&self, sig: &Signature) -> Profile {
        let colors = self.outputs.iter().map(|p| sig.get(self.vertices[p.vertex]).out().get(p.port)).collect();
        Profile::new(sig.palette(), colors).expect("leg colors")
    }

    pub fn in_profile(&self, sig: &Signature) -> Profile {
        let colors = self.inputs.iter().map(|p| sig.get(self.vertices[p.vertex]).input().get(p.port)).collect();
        Profile::new(sig.palette(), colors).expect("leg colors")
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGraph(msg));
        if self.vertices.is_empty() {
            return bad("a graph needs at least one vertex".into());
        }
        let nv = self.vertices.len();
        if let Some(&g) = self.vertices.iter().find(|&&g| g >= sig.generators().len()) {
            return bad(format!("unknown generator index {g}"));
        }
        let mut out_used: Vec<Vec<u8>> = self.vertices.iter().map(|&g| vec![0; sig.get(g).out().len()]).collect();
        let mut in_used: Vec<Vec<u8>> = self.vertices.iter().map(|&g| vec![0; sig.get(g).input().len()]).collect();
        let mark = |used: &mut Vec<Vec<u8>>, p: &Port, what: &str| -> Result<()> {
            match used.get_mut(p.vertex).and_then(|v| v.get_mut(p.port)) {
                Some(slot) => {
                    *slot += 1;
                    Ok(())
                }
                None => Err(Error::InvalidGraph(format!("{what} port {}.{} does not exist", p.vertex, p.port))),
            }
        };
        for e in &self.edges {
            mark(&mut out_used, &e.from, "output")?;
            mark(&mut in_used, &e.to, "input")?;
            let a = sig.get(self.vertices[e.from.vertex]).out().get(e.from.port);
            let b = sig.get(self.vertices[e.to.vertex]).input().get(e.to.port);
            if a != b {
                return bad(format!("edge {}.{} → {}.{} joins different colors", e.from.vertex, e.from.port, e.to.vertex, e.to.port));
            }
        }
        for p in &self.outputs {
            mark(&mut out_used, p, "output")?;
        }
        for p in &self.inputs {
            mark(&mut in_used, p, "input")?;
        }
        for (v, (o, i)) in out_used.iter().zip(&in_used).enumerate() {
            if let Some(k) = o.iter().position(|&c| c != 1) {
                return bad(format!("output port {v}.{k} is used {} times", o[k]));
            }
            if let Some(k) = i.iter().position(|&c| c != 1) {
                return bad(format!("input port {v}.{k} is used {} times", i[k]));
            }
        }
        // Kahn's algorithm
        let mut indegree = vec![0usize; nv];
        for e in &self.edges {
            indegree[e.to.vertex] += 1;
        }
        let mut ready: Vec<usize> = (0..nv).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for e in self.edges.iter().filter(|e| e.from.vertex == v) {
                indegree[e.to.vertex] -= 1;
                if indegree[e.to.vertex] == 0 {
                    ready.push(e.to.vertex);
                }
            }
        }
        if seen != nv {
            return bad("the graph has a directed cycle".into());
        }
        Ok(())
    }

    fn cat<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
        [a, b].concat()
    }

    fn shifted(&self, by: usize) -> PropGraph {
        let s = |p: &Port| Port { vertex: p.vertex + by, port: p.port };
        PropGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|e| Edge { from: s(&e.from), to: s(&e.to) }).collect(),
            inputs: self.inputs.iter().map(s).collect(),
            outputs: self.outputs.iter().map(s).collect(),
        }
    }

    /// `self ∘ lower`: every output leg of `lower` feeds the matching input leg of `self`.
    pub fn graft(&self, lower: &PropGraph) -> PropGraph {
        let low = lower.shifted(self.vertices.len());
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&low.vertices);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&low.edges);
        edges.extend(low.outputs.iter().zip(&self.inputs).map(|(&from, &to)| Edge { from, to }));
        PropGraph { vertices, edges, inputs: low.inputs, outputs: self.outputs.clone() }
    }

    pub fn juxtapose(&self, right: &PropGraph) -> PropGraph {
        let r = right.shifted(self.vertices.len());
        PropGraph {
            vertices: Self::cat(&self.vertices, &r.vertices),
            edges: Self::cat(&self.edges, &r.edges),
            inputs: Self::cat(&self.inputs, &r.inputs),
            outputs: Self::cat(&self.outputs, &r.outputs),
        }
    }

    pub fn from_expression(e: &Expression, sig: &Signature) -> PropGraph {
        match e.node() {
            Node::Gen(g) => {
                let gen = sig.get(*g);
                PropGraph {
                    vertices: vec![*g],
                    edges: Vec::new(),
                    inputs: (0..gen.input().len()).map(|port| Port { vertex: 0, port }).collect(),
                    outputs: (0..gen.out().len()).map(|port| Port { vertex: 0, port }).collect(),
                }
            }
            Node::Vert(f, g) => Self::from_expression(f, sig).graft(&Self::from_expression(g, sig)),
            Node::Horiz(f, g) => Self::from_expression(f, sig).juxtapose(&Self::from_expression(g, sig)),
            Node::Left(sigma, f) => {
                let mut inner = Self::from_expression(f, sig);
                let mut outputs = inner.outputs.clone();
                for (i, p) in inner.outputs.iter().enumerate() {
                    outputs[sigma.apply(i)] = *p;
                }
                inner.outputs = outputs;
                inner
            }
            Node::Right(f, tau) => {
                let mut inner = Self::from_expression(f, sig);
                inner.inputs = (0..inner.inputs.len()).map(|i| inner.inputs[tau.apply(i)]).collect();
                inner
            }
        }
    }

    /// Replaces vertex `v` by the graph `h`, whose legs take over the ports
    /// of `v`. The vertices of `h` take the place of `v` in the vertex order.
    pub fn substitute(&self, v: usize, h: &PropGraph) -> PropGraph {
        let hn = h.vertices.len();
        let old = |p: &Port| Port { vertex: if p.vertex < v { p.vertex } else { p.vertex - 1 + hn }, port: p.port };
        let new = |p: &Port| Port { vertex: p.vertex + v, port: p.port };
        let mut vertices = self.vertices[..v].to_vec();
        vertices.extend_from_slice(&h.vertices);
        vertices.extend_from_slice(&self.vertices[v + 1..]);
        let mut edges: Vec<Edge> = h.edges.iter().map(|e| Edge { from: new(&e.from), to: new(&e.to) }).collect();
        for e in &self.edges {
            let from = if e.from.vertex == v { new(&h.outputs[e.from.port]) } else { old(&e.from) };
            let to = if e.to.vertex == v { new(&h.inputs[e.to.port]) } else { old(&e.to) };
            edges.push(Edge { from, to });
        }
        let legs = |legs: &[Port], inner: &[Port]| legs.iter().map(|p| if p.vertex == v { new(&inner[p.port]) } else { old(p) }).collect();
        PropGraph { vertices, edges, inputs: legs(&self.inputs, &h.inputs), outputs: legs(&self.outputs, &h.outputs) }
    }

    /// The canonical form and whether reaching it reorders the odd-degree
    /// vertices by an odd permutation.
    ///
    /// Legs are decorations and every vertex is connected to a leg, so an
    /// isomorphism is determined by where it sends the legs; labeling
    /// vertices in breadth-first order from the legs, ports in order, is
    /// therefore canonical.
    pub fn canonical(&self, sig: &Signature) -> (CanonicalGraph, bool) {
        let nv = self.vertices.len();
        let mut out_adj: Vec<Vec<Option<Port>>> = self.vertices.iter().map(|&g| vec![None; sig.get(g).out().len()]).collect();
        let mut in_adj: Vec<Vec<Option<Port>>> = self.vertices.iter().map(|&g| vec![None; sig.get(g).input().len()]).collect();
        for e in &self.edges {
            out_adj[e.from.vertex][e.from.port] = Some(e.to);
            in_adj[e.to.vertex][e.to.port] = Some(e.from);
        }
        let mut label = vec![usize::MAX; nv];
        let mut order = Vec::with_capacity(nv);
        let mut queue = VecDeque::new();
        let visit = |v: usize, label: &mut Vec<usize>, order: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
            if label[v] == usize::MAX {
                label[v] = order.len();
                order.push(v);
                queue.push_back(v);
            }
        };
        for p in self.outputs.iter().chain(&self.inputs) {
            visit(p.vertex, &mut label, &mut order, &mut queue);
        }
        while let Some(v) = queue.pop_front() {
            for p in out_adj[v].iter().chain(&in_adj[v]).flatten() {
                visit(p.vertex, &mut label, &mut order, &mut queue);
            }
        }
        debug_assert_eq!(order.len(), nv, "every vertex touches a leg through some path");
        let relabel = |p: &Port| (label[p.vertex], p.port);
        let mut edges: Vec<(usize, usize, usize, usize)> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = relabel(&e.from);
                let (c, d) = relabel(&e.to);
                (a, b, c, d)
            })
            .collect();
        edges.sort();
        let canonical = CanonicalGraph {
            vertices: order.iter().map(|&v| sig.get(self.vertices[v]).name().to_string()).collect(),
            edges,
            inputs: self.inputs.iter().map(relabel).collect(),
            outputs: self.outputs.iter().map(relabel).collect(),
        };
        let odd: Vec<usize> = order.iter().copied().filter(|&v| sig.get(self.vertices[v]).degree() % 2 == 1).collect();
        let inversions = (0..odd.len()).flat_map(|i| (i + 1..odd.len()).map(move |j| (i, j))).filter(|&(i, j)| odd[i] > odd[j]).count();
        (canonical, inversions % 2 == 1)
    }
}

/// A graph up to isomorphism respecting decorations and leg orders.
/// Vertices are named by their generators; edges are
/// `(from vertex, output port, to vertex, input port)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, usize, usize)>,
    pub inputs: Vec<(usize, usize)>,
    pub outputs: Vec<(usize, usize)>,
}

impl CanonicalGraph {
    /// The graph with vertices in canonical order.
    pub fn to_graph(&self, sig: &Signature) -> Result<PropGraph> {
        let vertices = self.vertices.iter().map(|n| sig.index_of(n)).collect::<Result<Vec<_>>>()?;
        let port = |&(vertex, port): &(usize, usize)| Port { vertex, port };
        let edges = self.edges.iter().map(|&(a, b, c, d)| Edge { from: Port { vertex: a, port: b }, to: Port { vertex: c, port: d } }).collect();
        PropGraph::new(sig, vertices, edges, self.inputs.iter().map(port).collect(), self.outputs.iter().map(port).collect())
    }
}

impl fmt::Display for CanonicalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().enumerate().map(|(i, n)| format!("{i}:{n}")).collect();
        let es: Vec<String> = self.edges.iter().map(|(a, b, c, d)| format!("{a}.{b}->{c}.{d}")).collect();
        let legs = |l: &[(usize, usize)]| l.iter().map(|(v, p)| format!("{v}.{p}")).collect::<Vec<_>>().join(" ");
        write!(f, "vertices [{}] edges [{}] out [{}] in [{}]", vs.join(" "), es.join(" "), legs(&self.outputs), legs(&self.inputs))
    }
}

/// `Some(+1)` or `Some(−1)` when the two expressions are the same graph up
/// to sign, `None` when they are different graphs.
pub fn graphs_compare(e1: &Expression, e2: &Expression, sig: &Signature) -> Result<Option<i8>> {
    if e1.out() != e2.out() || e1.input() != e2.input() {
        return Err(Error::ProfileMismatch {
            left: format!("{} <- {}", e1.out().display(), e1.input().display()),
            right: format!("{} <- {}", e2.out().display(), e2.input().display()),
        });
    }
    let (c1, s1) = PropGraph::from_expression(e1, sig).canonical(sig);
    let (c2, s2) = PropGraph::from_expression(e2, sig).canonical(sig);
    Ok((c1 == c2).then_some(if s1 == s2 { 1 } else { -1 }))
}

/// Equality in the free PROP: same canonical graph with the same sign.
pub fn graphs_equal(e1: &Expression, e2: &Expression, sig: &Signature) -> Result<bool> {
    Ok(graphs_compare(e1, e2, sig)? == Some(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse, Generator};
    use crate::profile::Palette;

    fn sig() -> Signature {
        let p = Palette::new(["c"]).unwrap();
        let c1 = Profile::from_names(&p, &["c"]).unwrap();
        let c2 = Profile::from_names(&p, &["c", "c"]).unwrap();
        Signature::new(
            &p,
            vec![
                Generator::new("mu", c1.clone(), c2.clone(), 0).unwrap(),
                Generator::new("i", c1.clone(), c1.clone(), 0).unwrap(),
                Generator::new("m3", c1, Profile::from_names(&p, &["c", "c", "c"]).unwrap(), 1).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn interchange_and_equivariance() {
        let s = sig();
        let e = |t: &str| parse(t, &s).unwrap();
        assert!(graphs_equal(&e("(mu * mu) o (i * i * i * i)"), &e("(mu o (i * i)) * (mu o (i * i))"), &s).unwrap());
        assert!(!graphs_equal(&e("mu"), &e("mu . [2 1]"), &s).unwrap());
        assert!(!graphs_equal(&e("mu o (mu * i)"), &e("mu o (i * mu)"), &s).unwrap());
        assert!(graphs_equal(&e("(mu . [2 1]) o (i * mu)"), &e("mu o ([2 1] . (i * mu))"), &s).unwrap());
    }

    #[test]
    fn odd_vertices_pick_up_signs() {
        let s = sig();
        let e = |t: &str| parse(t, &s).unwrap();
        // (m3 ⊗ m3) ∘ (f ⊗ g) against (m3 ∘ f) ⊗ (m3 ∘ g) with odd m3 in the middle
        let lhs = e("(m3 * m3) o (m3 * i * i * m3 * i * i)");
        let rhs = e("(m3 o (m3 * i * i)) * (m3 o (m3 * i * i))");
        assert_eq!(graphs_compare(&lhs, &rhs, &s).unwrap(), Some(-1));
        let (c, _) = PropGraph::from_expression(&lhs, &s).canonical(&s);
        assert_eq!(c.to_graph(&s).unwrap().canonical(&s), (c, false));
    }

    #[test]
    fn validation_rejects_bad_graphs() {
        let s = sig();
        let p = |vertex, port| Port { vertex, port };
        assert!(PropGraph::new(&s, vec![1], vec![], vec![p(0, 0)], vec![p(0, 0)]).is_ok());
        assert!(PropGraph::new(&s, vec![1], vec![], vec![p(0, 0)], vec![]).is_err());
        let cycle = vec![Edge { from: p(0, 0), to: p(1, 0) }, Edge { from: p(1, 0), to: p(0, 0) }];
        assert!(PropGraph::new(&s, vec![1, 1], cycle, vec![], vec![]).is_err());
        assert!(PropGraph::new(&s, vec![], vec![], vec![], vec![]).is_err());
    }
}
