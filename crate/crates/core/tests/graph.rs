mod common;

use std::collections::BTreeSet;

use common::rng;
use cprop::graph::{
    enumerate_graphs, free_component_dim, graphs_compare, graphs_equal, parse, Edge, Expression, Generator, Port, PropGraph,
    Signature,
};
use cprop::profile::{Palette, Permutation, Profile};
use cprop::samples;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_profile(r: &mut impl Rng, sig: &Signature, max: usize) -> Profile {
    let n = r.gen_range(1..=max);
    samples::profile(r, sig.palette(), n)
}

fn random_sig(r: &mut impl Rng) -> Signature {
    let colors = r.gen_range(1..=3);
    let extra = r.gen_range(1..=(4 - colors).max(1));
    samples::signature(r, colors, extra, 2)
}

/// Brute-force isomorphism: every vertex bijection is tried.
fn brute_isomorphic(g: &PropGraph, h: &PropGraph) -> bool {
    if g.vertices().len() != h.vertices().len() || g.inputs().len() != h.inputs().len() || g.outputs().len() != h.outputs().len() {
        return false;
    }
    let n = g.vertices().len();
    let target_edges: BTreeSet<Edge> = h.edges().iter().copied().collect();
    Permutation::all(n).into_iter().any(|pi| {
        let m = |p: &Port| Port { vertex: pi.apply(p.vertex), port: p.port };
        (0..n).all(|v| g.vertices()[v] == h.vertices()[pi.apply(v)])
            && g.inputs().iter().map(m).eq(h.inputs().iter().copied())
            && g.outputs().iter().map(m).eq(h.outputs().iter().copied())
            && g.edges().iter().map(|e| Edge { from: m(&e.from), to: m(&e.to) }).collect::<BTreeSet<_>>() == target_edges
    })
}

fn relabel(sig: &Signature, g: &PropGraph, pi: &Permutation) -> PropGraph {
    let m = |p: &Port| Port { vertex: pi.apply(p.vertex), port: p.port };
    let mut vertices = vec![0; g.vertices().len()];
    for (v, &gen) in g.vertices().iter().enumerate() {
        vertices[pi.apply(v)] = gen;
    }
    let edges = g.edges().iter().map(|e| Edge { from: m(&e.from), to: m(&e.to) }).collect();
    PropGraph::new(sig, vertices, edges, g.inputs().iter().map(m).collect(), g.outputs().iter().map(m).collect()).unwrap()
}

fn koszul(a: &Expression, b: &Expression) -> i8 {
    if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
        -1
    } else {
        1
    }
}

#[test]
fn interchange_holds_on_random_quadruples() {
    let mut r = rng(40);
    for _ in 0..1000 {
        let sig = random_sig(&mut r);
        let (a1, a2) = (random_profile(&mut r, &sig, 2), random_profile(&mut r, &sig, 2));
        let (d1, d2) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let f1 = samples::expression(&mut r, &sig, &a1, d1);
        let f2 = samples::expression(&mut r, &sig, &a2, d2);
        let g1 = samples::expression(&mut r, &sig, &f1.input().clone(), 1);
        let g2 = samples::expression(&mut r, &sig, &f2.input().clone(), 1);
        let lhs = Expression::vert(Expression::horiz(f1.clone(), f2.clone()).unwrap(), Expression::horiz(g1.clone(), g2.clone()).unwrap()).unwrap();
        let rhs = Expression::horiz(Expression::vert(f1, g1.clone()).unwrap(), Expression::vert(f2.clone(), g2).unwrap()).unwrap();
        assert_eq!(graphs_compare(&lhs, &rhs, &sig).unwrap(), Some(koszul(&g1, &f2)), "{lhs} vs {rhs}");
    }
}

#[test]
fn actions_are_bi_equivariant() {
    let mut r = rng(41);
    for _ in 0..300 {
        let sig = random_sig(&mut r);
        let a = random_profile(&mut r, &sig, 3);
        let f = samples::expression(&mut r, &sig, &a, 1);
        let g = samples::expression(&mut r, &sig, &f.input().clone(), 1);
        let sigma = samples::permutation(&mut r, f.out().len());
        let tau = samples::permutation(&mut r, g.input().len());
        let mid = samples::permutation(&mut r, f.input().len());
        let fg = Expression::vert(f.clone(), g.clone()).unwrap();
        let eq = |x: &Expression, y: &Expression| assert!(graphs_equal(x, y, &sig).unwrap(), "{x} vs {y}");
        eq(&Expression::left(sigma.clone(), fg.clone()).unwrap(), &Expression::vert(Expression::left(sigma.clone(), f.clone()).unwrap(), g.clone()).unwrap());
        eq(&Expression::right(fg.clone(), tau.clone()).unwrap(), &Expression::vert(f.clone(), Expression::right(g.clone(), tau.clone()).unwrap()).unwrap());
        // (f·μ) ∘ g' = f ∘ (μ·g')
        let g2 = samples::expression(&mut r, &sig, &f.input().right(&mid), 1);
        eq(
            &Expression::vert(Expression::right(f.clone(), mid.clone()).unwrap(), g2.clone()).unwrap(),
            &Expression::vert(f.clone(), Expression::left(mid.clone(), g2).unwrap()).unwrap(),
        );
        eq(
            &Expression::right(Expression::left(sigma.clone(), f.clone()).unwrap(), mid.clone()).unwrap(),
            &Expression::left(sigma.clone(), Expression::right(f.clone(), mid.clone()).unwrap()).unwrap(),
        );
        // horizontal equivariance: (σ₁·f) ⊗ (σ₂·g) = (σ₁ ⊕ σ₂)·(f ⊗ g)
        let s2 = samples::permutation(&mut r, g.out().len());
        eq(
            &Expression::horiz(Expression::left(sigma.clone(), f.clone()).unwrap(), Expression::left(s2.clone(), g.clone()).unwrap()).unwrap(),
            &Expression::left(sigma.direct_sum(&s2), Expression::horiz(f.clone(), g.clone()).unwrap()).unwrap(),
        );
        let t1 = samples::permutation(&mut r, f.input().len());
        eq(
            &Expression::horiz(Expression::right(f.clone(), t1.clone()).unwrap(), Expression::right(g.clone(), tau.clone()).unwrap()).unwrap(),
            &Expression::right(Expression::horiz(f.clone(), g.clone()).unwrap(), t1.direct_sum(&tau)).unwrap(),
        );
        // associativity of both compositions
        let h = samples::expression(&mut r, &sig, &g.input().clone(), 1);
        eq(
            &Expression::vert(Expression::vert(f.clone(), g.clone()).unwrap(), h.clone()).unwrap(),
            &Expression::vert(f.clone(), Expression::vert(g.clone(), h.clone()).unwrap()).unwrap(),
        );
        eq(
            &Expression::horiz(Expression::horiz(f.clone(), g.clone()).unwrap(), h.clone()).unwrap(),
            &Expression::horiz(f.clone(), Expression::horiz(g, h).unwrap()).unwrap(),
        );
    }
}

#[test]
fn canonical_forms_agree_with_brute_force_isomorphism() {
    let mut r = rng(42);
    let mut agreements = (0, 0);
    for _ in 0..1000 {
        let sig = random_sig(&mut r);
        let a = random_profile(&mut r, &sig, 2);
        let e = samples::expression(&mut r, &sig, &a, 2);
        let g = PropGraph::from_expression(&e, &sig);
        if g.vertices().len() > 6 {
            continue;
        }
        let pi = samples::permutation(&mut r, g.vertices().len());
        let shuffled = relabel(&sig, &g, &pi);
        let other = match r.gen_range(0..3) {
            0 => shuffled,
            1 => {
                // a second random expression with the same profiles
                let f = samples::expression(&mut r, &sig, &a, 2);
                let mut h = PropGraph::from_expression(&f, &sig);
                if h.in_profile(&sig) != g.in_profile(&sig) || h.vertices().len() > 6 {
                    h = shuffled;
                }
                h
            }
            _ => {
                // swap two input legs of the same color
                let mut ins = shuffled.inputs().to_vec();
                let n = ins.len();
                let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
                ins.swap(i, j);
                match PropGraph::new(&sig, shuffled.vertices().to_vec(), shuffled.edges().to_vec(), ins, shuffled.outputs().to_vec()) {
                    Ok(h) => h,
                    Err(_) => shuffled,
                }
            }
        };
        let same = g.canonical(&sig).0 == other.canonical(&sig).0;
        assert_eq!(same, brute_isomorphic(&g, &other));
        if same {
            agreements.0 += 1;
        } else {
            agreements.1 += 1;
        }
        // idempotence
        let (c, _) = g.canonical(&sig);
        assert_eq!(c.to_graph(&sig).unwrap().canonical(&sig).0, c);
    }
    assert!(agreements.0 > 100 && agreements.1 > 100, "{agreements:?}");
}

#[test]
fn reversed_vertex_order_gives_the_same_canonical_form() {
    let mut r = rng(43);
    for _ in 0..200 {
        let sig = random_sig(&mut r);
        let a = random_profile(&mut r, &sig, 3);
        let g = PropGraph::from_expression(&samples::expression(&mut r, &sig, &a, 3), &sig);
        let n = g.vertices().len();
        let rev = Permutation::new((0..n).rev().collect()).unwrap();
        assert_eq!(relabel(&sig, &g, &rev).canonical(&sig).0, g.canonical(&sig).0);
    }
}

fn binary_signature() -> (Signature, impl Fn(usize) -> Profile) {
    let p = Palette::new(["c"]).unwrap();
    let q = p.clone();
    let prof = move |n: usize| Profile::from_names(&q, &vec!["c"; n]).unwrap();
    (Signature::new(&p, vec![Generator::new("mu", prof(1), prof(2), 0).unwrap()]).unwrap(), prof)
}

/// Every graph on `v` binary vertices by choosing a source for each input
/// port, then every leg order; classes counted by brute-force isomorphism.
fn exhaustive_binary_count(sig: &Signature, outs: usize, ins: usize, max_vertices: usize) -> usize {
    let mut classes: Vec<PropGraph> = Vec::new();
    for v in 1..=max_vertices {
        // choice k < v means "output port of vertex k", k = v means "input leg"
        let ports = 2 * v;
        let mut choice = vec![0usize; ports];
        loop {
            let mut used = vec![false; v];
            let mut ok = true;
            let mut edges = Vec::new();
            let mut free_in = Vec::new();
            for (p, &c) in choice.iter().enumerate() {
                let to = Port { vertex: p / 2, port: p % 2 };
                if c == v {
                    free_in.push(to);
                } else if used[c] || c == p / 2 {
                    ok = false;
                } else {
                    used[c] = true;
                    edges.push(Edge { from: Port { vertex: c, port: 0 }, to });
                }
            }
            let free_out: Vec<Port> = (0..v).filter(|&k| !used[k]).map(|k| Port { vertex: k, port: 0 }).collect();
            if ok && free_in.len() == ins && free_out.len() == outs {
                for pi in Permutation::all(ins) {
                    for po in Permutation::all(outs) {
                        let inputs = (0..ins).map(|i| free_in[pi.apply(i)]).collect();
                        let outputs = (0..outs).map(|i| free_out[po.apply(i)]).collect();
                        if let Ok(g) = PropGraph::new(sig, vec![0; v], edges.clone(), inputs, outputs) {
                            if !classes.iter().any(|h| brute_isomorphic(h, &g)) {
                                classes.push(g);
                            }
                        }
                    }
                }
            }
            // next choice vector
            let mut k = 0;
            while k < ports {
                choice[k] += 1;
                if choice[k] <= v {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == ports {
                break;
            }
        }
    }
    classes.len()
}

/// Planar binary trees with `n` labelled leaves: Catalan(n−1)·n!.
fn tree_count(n: usize) -> usize {
    let mut catalan = vec![1usize; n];
    for k in 1..n {
        catalan[k] = (0..k).map(|i| catalan[i] * catalan[k - 1 - i]).sum();
    }
    catalan[n - 1] * (1..=n).product::<usize>()
}

#[test]
fn free_component_dimensions_for_a_binary_generator() {
    let (sig, prof) = binary_signature();
    for (m, n, k, want) in [(1, 2, 1, 2), (1, 3, 2, 12), (2, 3, 3, 0)] {
        assert_eq!(free_component_dim(&sig, &prof(m), &prof(n), k).unwrap(), want);
        assert_eq!(exhaustive_binary_count(&sig, m, n, 3), want);
    }
    for n in 2..=4 {
        assert_eq!(free_component_dim(&sig, &prof(1), &prof(n), n - 1).unwrap(), tree_count(n));
    }
    // forests: two trees side by side
    assert_eq!(free_component_dim(&sig, &prof(2), &prof(4), 2).unwrap(), exhaustive_binary_count(&sig, 2, 4, 2));
}

#[test]
fn enumeration_is_stable_under_generator_order() {
    let mut r = rng(44);
    for _ in 0..20 {
        let sig = samples::signature(&mut r, 2, 2, 0);
        let mut gens = sig.generators().to_vec();
        gens.shuffle(&mut r);
        let shuffled = Signature::new(sig.palette(), gens).unwrap();
        let out = random_profile(&mut r, &sig, 2);
        let input = random_profile(&mut r, &sig, 3);
        let a = enumerate_graphs(&sig, &out, &input, 2).unwrap();
        let b = enumerate_graphs(&shuffled, &out, &input, 2).unwrap();
        assert_eq!(a, b);
        for c in &a {
            let g = c.to_graph(&sig).unwrap();
            assert_eq!(g.out_profile(&sig), out);
            assert_eq!(g.in_profile(&sig), input);
        }
    }
}

#[test]
fn parsed_interchange_examples() {
    let (sig, _) = binary_signature();
    let e = |t: &str| parse(t, &sig).unwrap();
    assert!(!graphs_equal(&e("mu"), &e("mu . [2 1]"), &sig).unwrap());
    assert!(graphs_equal(&e("mu o (mu * mu)"), &e("mu o (mu * mu)"), &sig).unwrap());
    assert!(graphs_compare(&e("mu"), &e("mu o (mu * mu)"), &sig).is_err());
}
