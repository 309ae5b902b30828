//! Colored operads in degree 0, truncated at a maximal arity.
//!
//! A component `O(d; K)` is stored at the sorted representative of `K` as a
//! [`Component`] whose out key is the one-color profile `(d)`. Compositions
//! `γ(x; y₁, …, y_n)` are stored for inputs at representatives only; the
//! value lies at the concatenation `E` of the representatives of the `y_j`
//! and is recorded in coordinates relative to the canonical transport of
//! `(d; E)`. Everything else follows from the two equivariance axioms.

mod algebra;
mod prop;

pub use algebra::{algebra_round_trip, check_operad_algebra, phi, OperadAlgebra, RoundTripReport};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::bimodule::{ColoredBimodule, Component};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{Color, OrbitKey, Palette, Permutation, Profile};
use crate::rational::Q;

pub use prop::{check_unit_identity, forget_to_operad, prop_from_operad, EndoProp, Factor, Monomial, OperadProp, PropData, UnitReport};

/// Address of a stored composition: `γ: O(out; input) ⊗ ⊗_j O(input_j; parts[j])`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaKey {
    pub out: Color,
    pub input: OrbitKey,
    pub parts: Vec<OrbitKey>,
}

impl GammaKey {
    pub fn arity(&self) -> usize {
        self.parts.iter().map(OrbitKey::len).sum()
    }

    /// Concatenation of the representatives of the parts.
    pub fn concat(&self) -> Profile {
        let reps: Vec<Profile> = self.parts.iter().map(|k| k.rep().clone()).collect();
        Profile::concat_all(&reps).expect("parts share a palette")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredOperad {
    palette: Arc<Palette>,
    max_arity: usize,
    components: ColoredBimodule,
    gamma: BTreeMap<GammaKey, Matrix>,
}

/// Outcome of checking the operad axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperadReport {
    /// Whether basis tuples were enumerated (rather than random vectors).
    pub exhaustive: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl OperadReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn kron_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

pub(crate) fn kron_all(parts: &[&[Q]]) -> Vec<Q> {
    parts.iter().fold(vec![Q::one()], |acc, v| kron_vec(&acc, v))
}

pub(crate) fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Splits a row-major Kronecker index into per-factor indices.
pub(crate) fn multi_index(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = k % d;
        k /= d;
    }
    out
}

/// Every orbit key over the palette with between 1 and `n` letters.
pub fn keys_up_to(palette: &Arc<Palette>, n: usize) -> Vec<OrbitKey> {
    fn go(palette: &Arc<Palette>, n: usize, start: u16, prefix: &mut Vec<Color>, out: &mut Vec<OrbitKey>) {
        if !prefix.is_empty() {
            out.push(Profile::new(palette, prefix.clone()).expect("palette colors").orbit_key());
        }
        if prefix.len() == n {
            return;
        }
        for c in start..palette.len() as u16 {
            prefix.push(Color(c));
            go(palette, n, c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(palette, n, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub(crate) fn single(palette: &Arc<Palette>, d: Color) -> Profile {
    Profile::new(palette, vec![d]).expect("palette color")
}

fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| Q::from_integer(rng.gen_range(-3i64..=3).into())).collect()
}

impl ColoredOperad {
    pub fn new(palette: &Arc<Palette>, max_arity: usize, components: Vec<Component>, gamma: BTreeMap<GammaKey, Matrix>) -> Result<Self> {
        if max_arity == 0 {
            return Err(Error::Operad("maximal arity must be positive".into()));
        }
        let mut bimodule = ColoredBimodule::new(palette);
        for c in components {
            if c.out_key().len() != 1 {
                return Err(Error::Operad(format!("component {:?} has {} outputs", c.out_key(), c.out_key().len())));
            }
            if c.in_key().len() > max_arity {
                return Err(Error::Operad(format!("component {:?} exceeds arity {max_arity}", c.in_key())));
            }
            if c.carrier().len() > 1 {
                return Err(Error::Operad(format!("component {:?} is not concentrated in degree 0", c.in_key())));
            }
            c.validate()?;
            bimodule.insert(c)?;
        }
        let mut op = ColoredOperad { palette: palette.clone(), max_arity, components: bimodule, gamma: BTreeMap::new() };
        for (key, m) in gamma {
            op.check_gamma_key(&key)?;
            let want = op.gamma_shape(&key);
            if m.shape() != want {
                return Err(Error::Operad(format!("γ at {} has shape {:?}, expected {want:?}", op.describe(&key), m.shape())));
            }
            if !m.is_zero() {
                op.gamma.insert(key, m);
            }
        }
        Ok(op)
    }

    fn check_gamma_key(&self, key: &GammaKey) -> Result<()> {
        if key.parts.len() != key.input.len() {
            return Err(Error::Operad(format!("γ key {} has {} parts for {} inputs", self.describe(key), key.parts.len(), key.input.len())));
        }
        if key.arity() > self.max_arity {
            return Err(Error::Operad(format!("γ key {} exceeds arity {}", self.describe(key), self.max_arity)));
        }
        Ok(())
    }

    fn gamma_shape(&self, key: &GammaKey) -> (usize, usize) {
        let rows = self.dim(key.out, &key.concat().orbit_key());
        let mut cols = self.dim(key.out, &key.input);
        for (j, k) in key.parts.iter().enumerate() {
            cols *= self.dim(key.input.rep().get(j), k);
        }
        (rows, cols)
    }

    pub fn describe(&self, key: &GammaKey) -> String {
        let parts: Vec<String> = key.parts.iter().map(OrbitKey::display).collect();
        format!("{}({};{})", self.palette.name(key.out), key.input.display(), parts.join(","))
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// The components as a colored bimodule with one-color outputs.
    pub fn components(&self) -> &ColoredBimodule {
        &self.components
    }

    pub fn gamma(&self) -> &BTreeMap<GammaKey, Matrix> {
        &self.gamma
    }

    pub fn component(&self, d: Color, key: &OrbitKey) -> Option<&Component> {
        self.components.get(&single(&self.palette, d).orbit_key(), key)
    }

    pub fn dim(&self, d: Color, key: &OrbitKey) -> usize {
        self.component(d, key).map_or(0, Component::dim)
    }

    /// The nonzero components, as `(output color, input key)`.
    pub fn support(&self) -> Vec<(Color, OrbitKey)> {
        self.components.support().into_iter().map(|(o, i)| (o.rep().get(0), i)).collect()
    }

    /// Sequences of input keys for parts with the given output colors and
    /// total arity at most `budget`, restricted to the support.
    pub fn part_choices(&self, colors: &[Color], budget: usize) -> Vec<Vec<OrbitKey>> {
        let support = self.support();
        let mut out = Vec::new();
        fn go(support: &[(Color, OrbitKey)], colors: &[Color], budget: usize, prefix: &mut Vec<OrbitKey>, out: &mut Vec<Vec<OrbitKey>>) {
            let j = prefix.len();
            if j == colors.len() {
                out.push(prefix.clone());
                return;
            }
            let rest = colors.len() - j - 1;
            for (c, k) in support {
                if *c == colors[j] && k.len() + rest <= budget {
                    prefix.push(k.clone());
                    go(support, colors, budget - k.len(), prefix, out);
                    prefix.pop();
                }
            }
        }
        go(&support, colors, budget, &mut Vec::new(), &mut out);
        out
    }

    /// Every composable shape `(d, K, parts)` within the arity bound.
    pub fn gamma_keys(&self) -> Vec<GammaKey> {
        let mut out = Vec::new();
        for (d, k) in self.support() {
            for parts in self.part_choices(k.rep().colors(), self.max_arity) {
                out.push(GammaKey { out: d, input: k.clone(), parts });
            }
        }
        out
    }

    /// Coordinates at `(d; c·τ)` of `x·τ` for `x` at the concrete `(d; c)`.
    pub fn act(&self, d: Color, c: &Profile, tau: &Permutation, x: &[Q]) -> Vec<Q> {
        let (key, tc) = c.canonicalize();
        match self.component(d, &key) {
            Some(comp) => comp.relocate(&Permutation::identity(1), &tc.inverse().compose(tau)).block(0).apply(x),
            None => Vec::new(),
        }
    }

    /// `γ(x; y₁, …, y_n)` with `x` at the representative of `key` and each
    /// `y_j` at the representative of `parts[j]`. Returns the concatenated
    /// input profile and the coordinates there.
    pub fn compose_reps(&self, d: Color, key: &OrbitKey, x: &[Q], parts: &[(&OrbitKey, &[Q])]) -> (Profile, Vec<Q>) {
        let gk = GammaKey { out: d, input: key.clone(), parts: parts.iter().map(|(k, _)| (*k).clone()).collect() };
        let concat = gk.concat();
        let rows = self.dim(d, &concat.orbit_key());
        let v = match self.gamma.get(&gk) {
            Some(m) => {
                let mut vecs: Vec<&[Q]> = vec![x];
                vecs.extend(parts.iter().map(|(_, y)| *y));
                m.apply(&kron_all(&vecs))
            }
            None => vec![Q::zero(); rows],
        };
        (concat, v)
    }

    /// `γ(x̃·u; ỹ₁·w₁, …, ỹ_n·w_n)` reduced to a stored composition with the
    /// equivariance axioms. `x̃` and the `ỹ_i` sit at representatives.
    fn compose_twisted(&self, d: Color, key: &OrbitKey, x: &[Q], u: &Permutation, parts: &[(&OrbitKey, &[Q])], w: &[Permutation]) -> (Profile, Vec<Q>) {
        let n = parts.len();
        let uinv = u.inverse();
        let reordered: Vec<(&OrbitKey, &[Q])> = (0..n).map(|p| parts[uinv.apply(p)]).collect();
        let (e, r) = self.compose_reps(d, key, x, &reordered);
        let ww: Vec<Permutation> = (0..n).map(|p| w[uinv.apply(p)].clone()).collect();
        let big_w = Permutation::direct_sum_all(&ww);
        let r1 = self.act(d, &e, &big_w, &r);
        let ew = e.right(&big_w);
        let mut off = vec![0; n + 1];
        for p in 0..n {
            off[p + 1] = off[p] + reordered[p].0.len();
        }
        let mut images = Vec::with_capacity(e.len());
        for (i, (k, _)) in parts.iter().enumerate() {
            for t in 0..k.len() {
                images.push(off[u.apply(i)] + t);
            }
        }
        let big_u = Permutation::new(images).expect("block permutation");
        let r2 = self.act(d, &ew, &big_u, &r1);
        (ew.right(&big_u), r2)
    }

    /// `γ(x; y₁, …, y_n)` for `x` at the concrete `(d; c)` and `y_j` at
    /// concrete `(c_j; b_j)`, given as `(b_j, coordinates)`.
    pub fn compose(&self, d: Color, c: &Profile, x: &[Q], ys: &[(Profile, Vec<Q>)]) -> Result<(Profile, Vec<Q>)> {
        if ys.len() != c.len() {
            return Err(Error::LengthMismatch { expected: c.len(), found: ys.len() });
        }
        let (key, t) = c.canonicalize();
        let total: usize = ys.iter().map(|(b, _)| b.len()).sum();
        if total > self.max_arity {
            return Err(Error::Operad(format!("composite arity {total} exceeds {}", self.max_arity)));
        }
        let x0 = self.act(d, c, &t, x);
        let mut keys = Vec::with_capacity(ys.len());
        let mut reduced = Vec::with_capacity(ys.len());
        let mut w = Vec::with_capacity(ys.len());
        for (j, (b, y)) in ys.iter().enumerate() {
            let (bk, tb) = b.canonicalize();
            reduced.push(self.act(c.get(j), b, &tb, y));
            keys.push(bk);
            w.push(tb.inverse());
        }
        let parts: Vec<(&OrbitKey, &[Q])> = keys.iter().zip(&reduced).map(|(k, y)| (k, y.as_slice())).collect();
        Ok(self.compose_twisted(d, &key, &x0, &t.inverse(), &parts, &w))
    }

    /// Associativity and both equivariance axioms, over every composable
    /// shape. Basis tuples are enumerated when the arity bound is at most 3
    /// and the shape has at most [`ColoredOperad::BASIS_TUPLE_LIMIT`] of them;
    /// other shapes are tested on a few random vectors.
    pub fn check_axioms(&self, seed: u64) -> OperadReport {
        use rand::SeedableRng;
        let exhaustive = self.max_arity <= 3;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut report = OperadReport { exhaustive, ..Default::default() };
        for gk in self.gamma_keys() {
            self.check_equivariance_at(&gk, exhaustive, &mut rng, &mut report);
            let concat = gk.concat();
            let budget = self.max_arity;
            for zparts in self.part_choices(concat.colors(), budget) {
                self.check_associativity_at(&gk, &zparts, exhaustive, &mut rng, &mut report);
            }
        }
        report
    }

    pub const BASIS_TUPLE_LIMIT: usize = 512;

    /// Test vectors for a list of dimensions: all basis tuples, or random ones.
    fn tuples(dims: &[usize], exhaustive: bool, rng: &mut impl Rng, report: &mut OperadReport) -> Vec<Vec<Vec<Q>>> {
        if dims.iter().any(|&d| d == 0) {
            return Vec::new();
        }
        let count = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if exhaustive && count.is_some_and(|c| c > Self::BASIS_TUPLE_LIMIT) {
            report.exhaustive = false;
        }
        if exhaustive && count.is_some_and(|c| c <= Self::BASIS_TUPLE_LIMIT) {
            let total: usize = dims.iter().product();
            (0..total)
                .map(|k| multi_index(k, dims).iter().zip(dims).map(|(&i, &d)| unit_vec(d, i)).collect())
                .collect()
        } else {
            (0..3).map(|_| dims.iter().map(|&d| random_vec(rng, d)).collect()).collect()
        }
    }

    fn check_equivariance_at(&self, gk: &GammaKey, exhaustive: bool, rng: &mut impl Rng, report: &mut OperadReport) {
        let comp = match self.component(gk.out, &gk.input) {
            Some(c) => c,
            None => return,
        };
        let colors = gk.input.rep().colors();
        let part_comps: Vec<&Component> = match gk.parts.iter().zip(colors).map(|(k, &c)| self.component(c, k)).collect() {
            Some(v) => v,
            None => return,
        };
        let mut dims = vec![comp.dim()];
        dims.extend(part_comps.iter().map(|c| c.dim()));
        let ids: Vec<Permutation> = gk.parts.iter().map(|k| Permutation::identity(k.len())).collect();
        for tuple in Self::tuples(&dims, exhaustive, rng, report) {
            let parts: Vec<(&OrbitKey, &[Q])> = gk.parts.iter().zip(&tuple[1..]).map(|(k, y)| (k, y.as_slice())).collect();
            for g in gk.input.stabilizer_generators() {
                report.checked += 1;
                let xg = comp.right_matrix(&g).apply(&tuple[0]);
                let lhs = self.compose_reps(gk.out, &gk.input, &xg, &parts);
                let rhs = self.compose_twisted(gk.out, &gk.input, &tuple[0], &g, &parts, &ids);
                if lhs != rhs {
                    report.failures.push(format!("equivariance in x at {} under {:?}", self.describe(gk), g));
                }
            }
            for (j, pc) in part_comps.iter().enumerate() {
                for h in gk.parts[j].stabilizer_generators() {
                    report.checked += 1;
                    let yh = pc.right_matrix(&h).apply(&tuple[j + 1]);
                    let mut moved = parts.clone();
                    moved[j] = (&gk.parts[j], &yh);
                    let lhs = self.compose_reps(gk.out, &gk.input, &tuple[0], &moved);
                    let mut w = ids.clone();
                    w[j] = h.clone();
                    let rhs = self.compose_twisted(gk.out, &gk.input, &tuple[0], &Permutation::identity(parts.len()), &parts, &w);
                    if lhs != rhs {
                        report.failures.push(format!("equivariance in input {j} at {} under {:?}", self.describe(gk), h));
                    }
                }
            }
        }
    }

    fn check_associativity_at(&self, gk: &GammaKey, zkeys: &[OrbitKey], exhaustive: bool, rng: &mut impl Rng, report: &mut OperadReport) {
        let colors = gk.input.rep().colors();
        let concat = gk.concat();
        let mut dims = vec![self.dim(gk.out, &gk.input)];
        dims.extend(gk.parts.iter().zip(colors).map(|(k, &c)| self.dim(c, k)));
        dims.extend(zkeys.iter().zip(concat.colors()).map(|(k, &c)| self.dim(c, k)));
        let n = gk.parts.len();
        for tuple in Self::tuples(&dims, exhaustive, rng, report) {
            report.checked += 1;
            let x = &tuple[0];
            let ys = &tuple[1..=n];
            let zs = &tuple[n + 1..];
            let parts: Vec<(&OrbitKey, &[Q])> = gk.parts.iter().zip(ys).map(|(k, y)| (k, y.as_slice())).collect();
            let (e, v) = self.compose_reps(gk.out, &gk.input, x, &parts);
            let zconc: Vec<(Profile, Vec<Q>)> = zkeys.iter().zip(zs).map(|(k, z)| (k.rep().clone(), z.clone())).collect();
            let lhs = self.compose(gk.out, &e, &v, &zconc);
            let mut inner = Vec::with_capacity(n);
            let mut start = 0;
            for (j, k) in gk.parts.iter().enumerate() {
                let block: Vec<(&OrbitKey, &[Q])> = (start..start + k.len()).map(|q| (&zkeys[q], zs[q].as_slice())).collect();
                inner.push(self.compose_reps(colors[j], k, &ys[j], &block));
                start += k.len();
            }
            let rhs = self.compose(gk.out, gk.input.rep(), x, &inner);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => {
                    let zs: Vec<String> = zkeys.iter().map(OrbitKey::display).collect();
                    report.failures.push(format!("associativity at {} with inner parts [{}]", self.describe(gk), zs.join(",")));
                }
            }
        }
    }

    /// Every element of `O(n)` is a word in `1, …, n` using each letter once;
    /// the right action is `w·τ = τ⁻¹∘w` and `γ` substitutes and concatenates.
    pub fn associative(max_arity: usize) -> Result<Self> {
        let palette = Palette::new(["c"])?;
        let c = Color(0);
        let key = |n: usize| Profile::new(&palette, vec![c; n]).expect("color").orbit_key();
        let words: Vec<Vec<Permutation>> = (0..=max_arity).map(Permutation::all).collect();
        let position = |n: usize, w: &Permutation| words[n].iter().position(|v| v == w).expect("word");
        let mut components = Vec::new();
        for n in 1..=max_arity {
            let dim = words[n].len();
            let right = (0..n.saturating_sub(1))
                .map(|i| {
                    let s = Permutation::adjacent(n, i);
                    let images: Vec<usize> = words[n].iter().map(|w| position(n, &s.inverse().compose(w))).collect();
                    Matrix::permutation(&images, None)
                })
                .collect();
            components.push(Component::from_matrices(key(1), key(n), dim, Vec::new(), right)?);
        }
        let mut gamma = BTreeMap::new();
        for n in 1..=max_arity {
            for arities in compositions(n, max_arity) {
                let total: usize = arities.iter().sum();
                let dims: Vec<usize> = std::iter::once(words[n].len()).chain(arities.iter().map(|&k| words[k].len())).collect();
                let cols: usize = dims.iter().product();
                let mut m = Matrix::zeros(words[total].len(), cols);
                let mut off = vec![0; n + 1];
                for j in 0..n {
                    off[j + 1] = off[j] + arities[j];
                }
                for col in 0..cols {
                    let idx = multi_index(col, &dims);
                    let w = &words[n][idx[0]];
                    let mut images = Vec::with_capacity(total);
                    for k in 0..n {
                        let j = w.apply(k);
                        let v = &words[arities[j]][idx[1 + j]];
                        images.extend((0..arities[j]).map(|l| off[j] + v.apply(l)));
                    }
                    let result = Permutation::new(images).expect("concatenated word");
                    m.set(position(total, &result), col, Q::one());
                }
                gamma.insert(GammaKey { out: c, input: key(n), parts: arities.iter().map(|&k| key(k)).collect() }, m);
            }
        }
        ColoredOperad::new(&palette, max_arity, components, gamma)
    }

    /// `O(d; K) = ℚ` with trivial actions for every color and key, `γ = 1`.
    pub fn trivial(palette: &Arc<Palette>, max_arity: usize) -> Result<Self> {
        let keys = keys_up_to(palette, max_arity);
        let mut components = Vec::new();
        for d in 0..palette.len() as u16 {
            for k in &keys {
                let right = vec![Matrix::identity(1); k.generator_positions().len()];
                components.push(Component::from_matrices(single(palette, Color(d)).orbit_key(), k.clone(), 1, Vec::new(), right)?);
            }
        }
        let mut op = ColoredOperad::new(palette, max_arity, components, BTreeMap::new())?;
        let gamma: BTreeMap<GammaKey, Matrix> = op.gamma_keys().into_iter().map(|k| (k, Matrix::identity(1))).collect();
        op.gamma = gamma;
        Ok(op)
    }
}

/// Sequences of `n` positive integers with sum at most `max`.
fn compositions(n: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let rest = n - prefix.len() - 1;
        for k in 1..=budget.saturating_sub(rest) {
            prefix.push(k);
            go(n, budget - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max, &mut Vec::new(), &mut out);
    out
}
