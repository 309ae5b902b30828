//! Colors, profiles, permutations and the connected groupoids of profiles.
//!
//! A permutation acts on a profile from the left by `(σc)ᵢ = c_{σ⁻¹(i)}` and
//! from the right by `(cτ)ᵢ = c_{τ(i)}`. Each orbit of profiles is stored
//! through its non-decreasing representative; every profile carries a
//! transport permutation `t` with `t(rep) = c`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Palette {
    colors: Vec<String>,
}

impl Palette {
    pub fn new<S: Into<String>>(colors: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let colors: Vec<String> = colors.into_iter().map(Into::into).collect();
        if colors.is_empty() {
            return Err(Error::InvalidPalette("no colors".into()));
        }
        for (i, c) in colors.iter().enumerate() {
            if colors[..i].contains(c) {
                return Err(Error::InvalidPalette(format!("duplicate color {c:?}")));
            }
        }
        Ok(Arc::new(Palette { colors }))
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<Color> {
        self.colors
            .iter()
            .position(|c| c == name)
            .map(|i| Color(i as u16))
            .ok_or_else(|| Error::UnknownColor(name.to_string()))
    }

    pub fn name(&self, c: Color) -> &str {
        &self.colors[c.0 as usize]
    }
}

/// Index into a palette; the palette's declaration order is the color order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(pub u16);

/// A bijection of `{0..n-1}` stored in one-line notation.
/// Composition is `(σ·τ)(i) = σ(τ(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// From 1-based one-line notation as written in files and expressions.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&i| i == 0) {
            return Err(Error::NotAPermutation(images.to_vec()));
        }
        Self::new(images.iter().map(|i| i - 1).collect()).map_err(|_| Error::NotAPermutation(images.to_vec()))
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The adjacent transposition exchanging `i` and `i + 1`.
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(i, i + 1);
        Permutation(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// Block sum: `self` on the first `len` points, `other` shifted after it.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len();
        Permutation(self.0.iter().copied().chain(other.0.iter().map(|i| i + n)).collect())
    }

    pub fn direct_sum_all(parts: &[Permutation]) -> Permutation {
        let mut out = Vec::new();
        for p in parts {
            let n = out.len();
            out.extend(p.0.iter().map(|i| i + n));
        }
        Permutation(out)
    }

    pub fn is_odd(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut transpositions = 0;
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 1
    }

    /// Adjacent-transposition indices `i₁..i_k` with `self = s_{i_k} ⋯ s_{i₁}`
    /// where `s_i = adjacent(n, i)`; the word is reduced.
    pub fn descent_word(&self) -> Vec<usize> {
        let mut w = self.0.clone();
        let mut word = Vec::new();
        loop {
            let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) else {
                return word;
            };
            w.swap(i, i + 1);
            word.push(i);
        }
    }

    /// All permutations of `n` points in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                return out;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

/// A finite non-empty sequence of colors from one palette.
#[derive(Clone)]
pub struct Profile {
    palette: Arc<Palette>,
    colors: Vec<Color>,
}

/// Which side a permutation acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Profile {
    pub fn new(palette: &Arc<Palette>, colors: Vec<Color>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(c) = colors.iter().find(|c| c.0 as usize >= palette.len()) {
            return Err(Error::UnknownColor(format!("#{}", c.0)));
        }
        Ok(Profile { palette: palette.clone(), colors })
    }

    pub fn from_names<S: AsRef<str>>(palette: &Arc<Palette>, names: &[S]) -> Result<Self> {
        let colors = names.iter().map(|n| palette.index_of(n.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(palette, colors)
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn names(&self) -> Vec<String> {
        self.colors.iter().map(|&c| self.palette.name(c).to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Color {
        self.colors[i]
    }

    pub fn same_palette(&self, other: &Profile) -> bool {
        Arc::ptr_eq(&self.palette, &other.palette) || self.palette == other.palette
    }

    pub fn concat(&self, other: &Profile) -> Result<Profile> {
        if !self.same_palette(other) {
            return Err(Error::PaletteMismatch);
        }
        let mut colors = self.colors.clone();
        colors.extend_from_slice(&other.colors);
        Ok(Profile { palette: self.palette.clone(), colors })
    }

    pub fn concat_all(parts: &[Profile]) -> Result<Profile> {
        let (first, rest) = parts.split_first().ok_or(Error::EmptyProfile)?;
        rest.iter().try_fold(first.clone(), |acc, p| acc.concat(p))
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Profile> {
        Profile::new(&self.palette, self.colors[range].to_vec())
    }

    pub fn apply(&self, perm: &Permutation, side: Side) -> Result<Profile> {
        if perm.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: perm.len() });
        }
        let colors = match side {
            Side::Left => {
                let inv = perm.inverse();
                (0..self.len()).map(|i| self.colors[inv.apply(i)]).collect()
            }
            Side::Right => (0..self.len()).map(|i| self.colors[perm.apply(i)]).collect(),
        };
        Ok(Profile { palette: self.palette.clone(), colors })
    }

    pub fn left(&self, perm: &Permutation) -> Profile {
        self.apply(perm, Side::Left).expect("permutation length")
    }

    pub fn right(&self, perm: &Permutation) -> Profile {
        self.apply(perm, Side::Right).expect("permutation length")
    }

    /// Orbit key plus the lexicographically least `t` with `t(rep) = self`.
    pub fn canonicalize(&self) -> (OrbitKey, Permutation) {
        let mut sorted = self.colors.clone();
        sorted.sort();
        let mut used = vec![false; self.len()];
        let t: Vec<usize> = sorted
            .iter()
            .map(|c| {
                let i = (0..self.len()).find(|&i| !used[i] && self.colors[i] == *c).unwrap();
                used[i] = true;
                i
            })
            .collect();
        let rep = Profile { palette: self.palette.clone(), colors: sorted };
        (OrbitKey::from_sorted(rep), Permutation(t))
    }

    pub fn orbit_key(&self) -> OrbitKey {
        self.canonicalize().0
    }

    pub fn display(&self) -> String {
        format!("({})", self.names().join(","))
    }
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        self.colors == other.colors && self.same_palette(other)
    }
}

impl Eq for Profile {}

impl std::hash::Hash for Profile {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.colors.hash(state);
    }
}

impl PartialOrd for Profile {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Profile {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.colors.cmp(&other.colors))
            .then_with(|| if self.same_palette(other) { Ordering::Equal } else { self.palette.cmp(&other.palette) })
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// An orbit of profiles, represented by its sorted member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey {
    rep: Profile,
    block_sizes: Vec<usize>,
}

impl OrbitKey {
    fn from_sorted(rep: Profile) -> Self {
        let mut block_sizes = Vec::new();
        let mut prev = None;
        for &c in &rep.colors {
            if Some(c) == prev {
                *block_sizes.last_mut().unwrap() += 1;
            } else {
                block_sizes.push(1);
                prev = Some(c);
            }
        }
        OrbitKey { rep, block_sizes }
    }

    pub fn rep(&self) -> &Profile {
        &self.rep
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Positions `i` such that `i` and `i + 1` lie in the same color block.
    /// The adjacent transpositions at these positions generate the stabilizer.
    pub fn generator_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut start = 0;
        for &b in &self.block_sizes {
            out.extend(start..start + b - 1);
            start += b;
        }
        out
    }

    pub fn stabilizer_generators(&self) -> Vec<Permutation> {
        let n = self.len();
        self.generator_positions().into_iter().map(|i| Permutation::adjacent(n, i)).collect()
    }

    pub fn stabilizer_order(&self) -> u128 {
        self.block_sizes.iter().map(|&b| factorial(b)).product()
    }

    pub fn orbit_object_count(&self) -> u128 {
        factorial(self.len()) / self.stabilizer_order()
    }

    pub fn in_stabilizer(&self, p: &Permutation) -> bool {
        p.len() == self.len() && (0..self.len()).all(|i| self.rep.colors[p.apply(i)] == self.rep.colors[i])
    }

    /// Every element of the stabilizer, in lexicographic order.
    pub fn stabilizer_elements(&self) -> Vec<Permutation> {
        let mut blocks: Vec<Vec<Permutation>> = Vec::new();
        for &b in &self.block_sizes {
            blocks.push(Permutation::all(b));
        }
        let mut out = vec![Vec::new()];
        for choices in &blocks {
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for prefix in &out {
                for c in choices {
                    let mut v: Vec<Permutation> = prefix.clone();
                    v.push(c.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        let mut perms: Vec<Permutation> = out.iter().map(|parts| Permutation::direct_sum_all(parts)).collect();
        perms.sort();
        perms
    }

    /// Maps a descent-word letter (a position) to its index among the generators.
    pub fn generator_index(&self, position: usize) -> usize {
        self.generator_positions()
            .iter()
            .position(|&p| p == position)
            .expect("position is not a stabilizer generator")
    }

    pub fn display(&self) -> String {
        format!("[{}]", self.rep.names().join(","))
    }
}

impl fmt::Debug for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All profiles of the given orbit, in lexicographic color order.
pub fn orbit_members(key: &OrbitKey) -> Vec<Profile> {
    let mut out: Vec<Profile> = Permutation::all(key.len()).iter().map(|p| key.rep().left(p)).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pal() -> Arc<Palette> {
        Palette::new(["a", "b", "c"]).unwrap()
    }

    fn prof(p: &Arc<Palette>, s: &str) -> Profile {
        let names: Vec<String> = s.chars().map(|c| c.to_string()).collect();
        Profile::from_names(p, &names).unwrap()
    }

    #[test]
    fn concat_examples() {
        let p = pal();
        assert_eq!(prof(&p, "ab").concat(&prof(&p, "b")).unwrap(), prof(&p, "abb"));
        assert_eq!(prof(&p, "a").concat(&prof(&p, "a")).unwrap(), prof(&p, "aa"));
        assert_eq!(prof(&p, "ba").concat(&prof(&p, "ac")).unwrap(), prof(&p, "baac"));
        let other = Palette::new(["x"]).unwrap();
        assert_eq!(prof(&p, "a").concat(&prof(&other, "x")), Err(Error::PaletteMismatch));
    }

    #[test]
    fn left_action_examples() {
        let p = pal();
        let swap = Permutation::from_one_line(&[2, 1]).unwrap();
        assert_eq!(prof(&p, "ab").left(&swap), prof(&p, "ba"));
        assert_eq!(prof(&p, "abc").left(&Permutation::identity(3)), prof(&p, "abc"));
        assert!(prof(&p, "ab").apply(&Permutation::identity(3), Side::Left).is_err());
    }

    #[test]
    fn left_action_composition_law_on_s3() {
        let p = pal();
        let c = prof(&p, "abb");
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                assert_eq!(c.left(&s.compose(&t)), c.left(&t).left(&s));
                assert_eq!(c.right(&s.compose(&t)), c.right(&s).right(&t));
            }
        }
    }

    #[test]
    fn canonicalize_examples() {
        let p = pal();
        let (k, t) = prof(&p, "bab").canonicalize();
        assert_eq!(k.rep(), &prof(&p, "abb"));
        assert_eq!(k.rep().left(&t), prof(&p, "bab"));
        let (k, t) = prof(&p, "aa").canonicalize();
        assert_eq!(k.rep(), &prof(&p, "aa"));
        assert!(t.is_identity());
    }

    #[test]
    fn transport_is_lexicographically_least() {
        let p = pal();
        for c in ["bab", "bba", "cab", "abca"] {
            let c = prof(&p, c);
            let (k, t) = c.canonicalize();
            let best = Permutation::all(c.len()).into_iter().find(|s| k.rep().left(s) == c).unwrap();
            assert_eq!(t, best);
        }
    }

    #[test]
    fn stabilizers_and_orbit_counts() {
        let p = pal();
        let k = prof(&p, "abb").orbit_key();
        assert_eq!(k.stabilizer_order(), 2);
        assert_eq!(k.orbit_object_count(), 3);
        let distinct = prof(&p, "abc").orbit_key();
        assert_eq!(distinct.stabilizer_order(), 1);
        assert_eq!(distinct.orbit_object_count(), 6);
        let mono = prof(&p, "aaa").orbit_key();
        assert_eq!(mono.stabilizer_order(), 6);
        assert_eq!(mono.orbit_object_count(), 1);
        assert_eq!(mono.stabilizer_elements().len(), 6);
        assert_eq!(prof(&p, "aabbb").orbit_key().stabilizer_elements().len(), 12);
    }

    #[test]
    fn descent_word_reconstructs() {
        for perm in Permutation::all(4) {
            let mut acc = Permutation::identity(4);
            for &i in &perm.descent_word() {
                acc = Permutation::adjacent(4, i).compose(&acc);
            }
            assert_eq!(acc, perm);
        }
    }

    #[test]
    fn orbit_members_share_a_key() {
        let p = pal();
        let k = prof(&p, "abb").orbit_key();
        let members = orbit_members(&k);
        assert_eq!(members.len(), 3);
        for m in members {
            assert_eq!(m.orbit_key(), k);
        }
    }
}
