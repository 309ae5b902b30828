//! Exhaustive enumeration of graphs with prescribed leg profiles.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::profile::Profile;

use super::diagram::{CanonicalGraph, Edge, Port, PropGraph};
use super::Signature;

/// Raw graphs examined before enumeration gives up.
pub const DEFAULT_CANDIDATE_CAP: usize = 2_000_000;

pub fn enumerate_graphs(sig: &Signature, out: &Profile, input: &Profile, max_vertices: usize) -> Result<Vec<CanonicalGraph>> {
    enumerate_graphs_capped(sig, out, input, max_vertices, DEFAULT_CANDIDATE_CAP)
}

/// The dimension of the free PROP component in degree-blind form: the
/// number of graphs with at most `max_vertices` vertices.
pub fn free_component_dim(sig: &Signature, out: &Profile, input: &Profile, max_vertices: usize) -> Result<usize> {
    Ok(enumerate_graphs(sig, out, input, max_vertices)?.len())
}

struct Search<'a> {
    sig: &'a Signature,
    out: &'a Profile,
    input: &'a Profile,
    max_vertices: usize,
    cap: usize,
    examined: usize,
    found: BTreeSet<CanonicalGraph>,
    vertices: Vec<usize>,
    edges: Vec<Edge>,
    free_in: Vec<Port>,
    free_out: Vec<Port>,
}

/// Builds every graph as a sequence of vertices in topological order: each
/// input port of a new vertex is either fed by a free output port of an
/// earlier vertex or becomes an input leg. Leftover ports are then matched
/// with the legs in every color-respecting way.
pub fn enumerate_graphs_capped(sig: &Signature, out: &Profile, input: &Profile, max_vertices: usize, cap: usize) -> Result<Vec<CanonicalGraph>> {
    if max_vertices == 0 {
        return Err(Error::Precondition("max vertices must be at least 1".into()));
    }
    if !out.same_palette(input) || **out.palette() != **sig.palette() {
        return Err(Error::PaletteMismatch);
    }
    let mut s = Search {
        sig,
        out,
        input,
        max_vertices,
        cap,
        examined: 0,
        found: BTreeSet::new(),
        vertices: Vec::new(),
        edges: Vec::new(),
        free_in: Vec::new(),
        free_out: Vec::new(),
    };
    s.grow()?;
    Ok(s.found.into_iter().collect())
}

impl Search<'_> {
    fn grow(&mut self) -> Result<()> {
        if !self.vertices.is_empty() {
            self.close()?;
        }
        if self.vertices.len() == self.max_vertices {
            return Ok(());
        }
        for g in 0..self.sig.generators().len() {
            let v = self.vertices.len();
            self.vertices.push(g);
            self.wire(v, 0)?;
            self.vertices.pop();
        }
        Ok(())
    }

    /// Chooses a source for input port `port` of the newest vertex `v`.
    fn wire(&mut self, v: usize, port: usize) -> Result<()> {
        let gen = self.sig.get(self.vertices[v]);
        if port == gen.input().len() {
            let added = gen.out().len();
            self.free_out.extend((0..added).map(|p| Port { vertex: v, port: p }));
            self.grow()?;
            self.free_out.truncate(self.free_out.len() - added);
            return Ok(());
        }
        let color = gen.input().get(port);
        let here = Port { vertex: v, port };
        if self.free_in.len() < self.input.len() {
            self.free_in.push(here);
            self.wire(v, port + 1)?;
            self.free_in.pop();
        }
        for k in 0..self.free_out.len() {
            let src = self.free_out[k];
            if src.vertex == v || self.sig.get(self.vertices[src.vertex]).out().get(src.port) != color {
                continue;
            }
            self.free_out.remove(k);
            self.edges.push(Edge { from: src, to: here });
            self.wire(v, port + 1)?;
            self.edges.pop();
            self.free_out.insert(k, src);
        }
        Ok(())
    }

    /// Records every leg assignment of the current partial graph when its
    /// leftover ports match the target profiles.
    fn close(&mut self) -> Result<()> {
        if self.free_in.len() != self.input.len() || self.free_out.len() != self.out.len() {
            return Ok(());
        }
        let in_colors: Vec<_> = self.free_in.iter().map(|p| self.sig.get(self.vertices[p.vertex]).input().get(p.port)).collect();
        let out_colors: Vec<_> = self.free_out.iter().map(|p| self.sig.get(self.vertices[p.vertex]).out().get(p.port)).collect();
        let ins = assignments(&in_colors, self.input.colors());
        if ins.is_empty() {
            return Ok(());
        }
        let outs = assignments(&out_colors, self.out.colors());
        for o in &outs {
            for i in &ins {
                self.examined += 1;
                if self.examined > self.cap {
                    return Err(Error::ResourceCap(format!("more than {} candidate graphs", self.cap)));
                }
                let graph = PropGraph::new(
                    self.sig,
                    self.vertices.clone(),
                    self.edges.clone(),
                    i.iter().map(|&k| self.free_in[k]).collect(),
                    o.iter().map(|&k| self.free_out[k]).collect(),
                )
                .expect("enumerated graphs are valid");
                self.found.insert(graph.canonical(self.sig).0);
            }
        }
        Ok(())
    }
}

/// Every bijection `legs → ports` (as a list of port indices, one per leg)
/// preserving colors.
fn assignments<C: PartialEq>(ports: &[C], legs: &[C]) -> Vec<Vec<usize>> {
    fn go<C: PartialEq>(ports: &[C], legs: &[C], used: &mut Vec<bool>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = acc.len();
        if i == legs.len() {
            out.push(acc.clone());
            return;
        }
        for k in 0..ports.len() {
            if !used[k] && ports[k] == legs[i] {
                used[k] = true;
                acc.push(k);
                go(ports, legs, used, acc, out);
                acc.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    if ports.len() == legs.len() {
        go(ports, legs, &mut vec![false; ports.len()], &mut Vec::new(), &mut out);
    }
    out
}
