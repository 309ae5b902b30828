#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use cprop::profile::{OrbitKey, Palette, Permutation, Profile};
use cprop::{Component, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn palette(names: &[&str]) -> Arc<Palette> {
    Palette::new(names.iter().copied()).unwrap()
}

pub fn prof(p: &Arc<Palette>, s: &str) -> Profile {
    let names: Vec<String> = s.chars().map(|c| c.to_string()).collect();
    Profile::from_names(p, &names).unwrap()
}

pub fn key(p: &Arc<Palette>, s: &str) -> OrbitKey {
    prof(p, s).orbit_key()
}

/// All permutations of `rep.len()` points fixing `rep`, found by brute force.
pub fn brute_stabilizer(rep: &Profile) -> Vec<Permutation> {
    Permutation::all(rep.len()).into_iter().filter(|g| &rep.left(g) == rep).collect()
}

/// Left action matrices of every group element, by closing the generator set
/// under multiplication (independent of descent words).
pub fn left_closure(key: &OrbitKey, gens: &[Matrix], dim: usize) -> HashMap<Permutation, Matrix> {
    let n = key.len();
    let g_perms = key.stabilizer_generators();
    let mut out = HashMap::new();
    out.insert(Permutation::identity(n), Matrix::identity(dim));
    let mut frontier = vec![Permutation::identity(n)];
    while let Some(g) = frontier.pop() {
        let mg = out[&g].clone();
        for (s, ms) in g_perms.iter().zip(gens) {
            let sg = s.compose(&g);
            if !out.contains_key(&sg) {
                out.insert(sg.clone(), ms * &mg);
                frontier.push(sg);
            }
        }
    }
    out
}

/// Right action matrices `R(g)` with `R(gs) = R(s)·R(g)`.
pub fn right_closure(key: &OrbitKey, gens: &[Matrix], dim: usize) -> HashMap<Permutation, Matrix> {
    let n = key.len();
    let g_perms = key.stabilizer_generators();
    let mut out = HashMap::new();
    out.insert(Permutation::identity(n), Matrix::identity(dim));
    let mut frontier = vec![Permutation::identity(n)];
    while let Some(g) = frontier.pop() {
        let mg = out[&g].clone();
        for (s, ms) in g_perms.iter().zip(gens) {
            let gs = g.compose(s);
            if !out.contains_key(&gs) {
                out.insert(gs.clone(), ms * &mg);
                frontier.push(gs);
            }
        }
    }
    out
}

pub fn total_left_gens(c: &Component) -> Vec<Matrix> {
    c.left_generators().iter().map(|g| g.total_matrix()).collect()
}

pub fn total_right_gens(c: &Component) -> Vec<Matrix> {
    c.right_generators().iter().map(|g| g.total_matrix()).collect()
}

/// Number of left cosets `gH` in `G`, by brute force on sets.
pub fn coset_count(group: &[Permutation], sub: &[Permutation]) -> usize {
    let cosets: BTreeSet<BTreeSet<Permutation>> =
        group.iter().map(|g| sub.iter().map(|h| g.compose(h)).collect()).collect();
    cosets.len()
}

/// Compares the graded characters of two components on every element of
/// `Stab(out) × Stab(in)`; over the rationals this decides isomorphism of the
/// underlying graded representations.
pub fn isomorphic(a: &Component, b: &Component) -> bool {
    if a.keys() != b.keys() || a.carrier().dims() != b.carrier().dims() {
        return false;
    }
    let (out_key, in_key) = a.keys();
    let chars = |c: &Component| {
        let (la, ra) = (total_left_gens(c), total_right_gens(c));
        let l = left_closure(&out_key, &la, c.dim());
        let r = right_closure(&in_key, &ra, c.dim());
        let mut table = Vec::new();
        for g in out_key.stabilizer_elements() {
            for h in in_key.stabilizer_elements() {
                let (lg, rh) = (&l[&g], &r[&h]);
                let mut per_degree = Vec::new();
                for n in 0..c.carrier().len() {
                    let off = c.carrier().offset(n);
                    let mut t = cprop::rational::q(0);
                    for i in off..off + c.carrier().dims()[n] {
                        for j in 0..c.dim() {
                            t += lg.get(i, j) * rh.get(j, i);
                        }
                    }
                    per_degree.push(t);
                }
                table.push(per_degree);
            }
        }
        table
    };
    chars(a) == chars(b)
}
