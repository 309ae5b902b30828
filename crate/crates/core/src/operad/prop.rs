//! The PROP generated by an operad, and the forgetful functor back.
//!
//! `O_prop(K_d; K_c)` is a direct sum over sequences of factors
//! `(e_i, K_i)` of the induced products `O(e₁; K₁) ⊡ ⋯ ⊡ O(e_m; K_m)`.
//! Every ordering of the outputs appears, so that concatenation is closed.
//! Elements are handled as monomials `σ·(x₁ ⊗ ⋯ ⊗ x_m)·τ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::bimodule::{box_dot_all, split_blocks, ColoredBimodule, Component, InducedBasis};
use crate::endo::{endo_horizontal, endo_permute, endo_vertical, ColoredFamily, EndoElement};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{Color, OrbitKey, Palette, Permutation, Profile};
use crate::rational::Q;

use super::{keys_up_to, kron_all, multi_index, single, unit_vec, ColoredOperad, GammaKey};

/// One tensor factor `O(e; K)` of a monomial.
pub type Factor = (Color, OrbitKey);

/// Concrete coordinates of a PROP-like object: the component at a concrete
/// pair of profiles is a vector space of known dimension, and composition
/// and the groupoid action are given on coordinate vectors.
pub trait PropData {
    fn palette(&self) -> &Arc<Palette>;
    fn dim(&self, out: &Profile, input: &Profile) -> usize;
    /// `x ∘ y` for `x` at `(out; mid)` and `y` at `(mid; input)`.
    fn vertical(&self, out: &Profile, mid: &Profile, input: &Profile, x: &[Q], y: &[Q]) -> Result<Vec<Q>>;
    /// `x ⊗ y`, at the concatenated profiles.
    fn horizontal(&self, x: (&Profile, &Profile, &[Q]), y: (&Profile, &Profile, &[Q])) -> Result<Vec<Q>>;
    /// `σ·x·τ`, at `(σ·out; input·τ)`.
    fn act(&self, out: &Profile, input: &Profile, sigma: &Permutation, tau: &Permutation, x: &[Q]) -> Result<Vec<Q>>;
}

/// `σ·(x₁ ⊗ ⋯ ⊗ x_m)·τ`, with the `x_i` at representatives and `inner` in
/// Kronecker coordinates of the factor components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub factors: Vec<Factor>,
    pub inner: Vec<Q>,
    pub sigma: Permutation,
    pub tau: Permutation,
}

impl Monomial {
    fn e_out(&self, palette: &Arc<Palette>) -> Profile {
        Profile::new(palette, self.factors.iter().map(|f| f.0).collect()).expect("palette colors")
    }

    fn e_in(&self) -> Profile {
        let reps: Vec<Profile> = self.factors.iter().map(|f| f.1.rep().clone()).collect();
        Profile::concat_all(&reps).expect("one palette")
    }

    pub fn out(&self, palette: &Arc<Palette>) -> Profile {
        self.e_out(palette).left(&self.sigma)
    }

    pub fn input(&self) -> Profile {
        self.e_in().right(&self.tau)
    }
}

#[derive(Clone, Debug)]
struct Summand {
    factors: Vec<Factor>,
    basis: InducedBasis,
    offset: usize,
    in_sizes: Vec<usize>,
}

/// The free PROP on an operad, truncated at `max_outputs` outputs and the
/// operad's maximal arity in inputs.
#[derive(Clone, Debug)]
pub struct OperadProp {
    operad: ColoredOperad,
    max_outputs: usize,
    bimodule: ColoredBimodule,
    summands: BTreeMap<(OrbitKey, OrbitKey), Vec<Summand>>,
    lookup: HashMap<Vec<Factor>, ((OrbitKey, OrbitKey), usize)>,
}

pub fn prop_from_operad(operad: &ColoredOperad, max_outputs: usize) -> Result<OperadProp> {
    let support = operad.support();
    let mut sequences = Vec::new();
    fn go(support: &[Factor], max_out: usize, budget: usize, prefix: &mut Vec<Factor>, out: &mut Vec<Vec<Factor>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_out {
            return;
        }
        for f in support {
            if f.1.len() <= budget {
                prefix.push(f.clone());
                go(support, max_out, budget - f.1.len(), prefix, out);
                prefix.pop();
            }
        }
    }
    go(&support, max_outputs, operad.max_arity(), &mut Vec::new(), &mut sequences);

    let mut bimodule = ColoredBimodule::new(operad.palette());
    let mut summands: BTreeMap<(OrbitKey, OrbitKey), Vec<Summand>> = BTreeMap::new();
    let mut lookup = HashMap::new();
    for factors in sequences {
        let comps: Vec<&Component> = factors.iter().map(|(d, k)| operad.component(*d, k).expect("support")).collect();
        let (comp, basis) = box_dot_all(&comps)?;
        let keys = comp.keys();
        let offset = bimodule.dim_at(&keys.0, &keys.1);
        bimodule.insert(comp)?;
        let list = summands.entry(keys.clone()).or_default();
        lookup.insert(factors.clone(), (keys, list.len()));
        let in_sizes = factors.iter().map(|f| f.1.len()).collect();
        list.push(Summand { factors, basis, offset, in_sizes });
    }
    Ok(OperadProp { operad: operad.clone(), max_outputs, bimodule, summands, lookup })
}

impl OperadProp {
    pub fn operad(&self) -> &ColoredOperad {
        &self.operad
    }

    pub fn max_outputs(&self) -> usize {
        self.max_outputs
    }

    pub fn bimodule(&self) -> &ColoredBimodule {
        &self.bimodule
    }

    /// The factor sequences contributing to a component, in order.
    pub fn summand_factors(&self, out_key: &OrbitKey, in_key: &OrbitKey) -> Vec<Vec<Factor>> {
        self.summands.get(&(out_key.clone(), in_key.clone())).map_or_else(Vec::new, |v| v.iter().map(|s| s.factors.clone()).collect())
    }

    fn summand(&self, factors: &[Factor]) -> Result<&Summand> {
        let (keys, s) = self.lookup.get(factors).ok_or_else(|| Error::Operad(format!("{} factors exceed the truncation", factors.len())))?;
        Ok(&self.summands[keys][*s])
    }

    /// Coordinates of `σ·(⊗ x_i)·τ` at its concrete profiles.
    pub fn encode(&self, m: &Monomial) -> Result<(Profile, Profile, Vec<Q>)> {
        let summand = self.summand(&m.factors)?;
        let basis = &summand.basis;
        let d = m.out(self.operad.palette());
        let c = m.input();
        let (dk, td) = d.canonicalize();
        let (ck, tc) = c.canonicalize();
        let g = td.inverse().compose(&m.sigma).compose(&basis.t_out);
        let k = basis.t_in.inverse().compose(&m.tau).compose(&tc);
        let (a, h) = basis.out_cosets.decompose(&g).clone();
        debug_assert!(h.is_identity(), "one-output factors have trivial stabilizers");
        let (b, h2) = basis.in_cosets.decompose(&k).clone();
        let parts = split_blocks(&basis.to_inner_in(&h2), &summand.in_sizes);
        let mats: Vec<Matrix> = summand
            .factors
            .iter()
            .zip(&parts)
            .map(|((e, key), p)| self.operad.component(*e, key).expect("support").right_matrix(p))
            .collect();
        let action = mats.iter().fold(Matrix::identity(1), |acc, x| acc.kron(x));
        let inner = action.apply(&m.inner);
        let mut coords = vec![Q::zero(); self.bimodule.dim_at(&dk, &ck)];
        for (i, v) in inner.into_iter().enumerate() {
            coords[summand.offset + basis.index(0, a, b, i)] = v;
        }
        Ok((d, c, coords))
    }

    /// The basis vector `k` of the component at `(rep_out; rep_in)`.
    fn decode_basis(&self, out_key: &OrbitKey, in_key: &OrbitKey, k: usize) -> Monomial {
        let list = &self.summands[&(out_key.clone(), in_key.clone())];
        let s = list.iter().rposition(|s| s.offset <= k).expect("index in range");
        let summand = &list[s];
        let basis = &summand.basis;
        let (a, b, i) = basis.split(0, k - summand.offset);
        Monomial {
            factors: summand.factors.clone(),
            inner: unit_vec(basis.inner.dim(0), i),
            sigma: basis.out_cosets.reps[a].compose(&basis.t_out.inverse()),
            tau: basis.t_in.compose(&basis.in_cosets.reps[b]),
        }
    }

    /// Expands coordinates at a concrete pair into scaled basis monomials.
    pub fn monomials(&self, out: &Profile, input: &Profile, x: &[Q]) -> Vec<(Q, Monomial)> {
        let (dk, td) = out.canonicalize();
        let (ck, tc) = input.canonicalize();
        let uc = tc.inverse();
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mut m = self.decode_basis(&dk, &ck, k);
                m.sigma = td.compose(&m.sigma);
                m.tau = m.tau.compose(&uc);
                (c.clone(), m)
            })
            .collect()
    }

    fn factor_dims(&self, factors: &[Factor]) -> Vec<usize> {
        factors.iter().map(|(e, k)| self.operad.dim(*e, k)).collect()
    }

    /// `X ∘ Y`; the input profile of `X` must equal the output profile of `Y`.
    pub fn compose_monomials(&self, x: &Monomial, y: &Monomial) -> Result<Monomial> {
        let palette = self.operad.palette();
        if x.input() != y.out(palette) {
            return Err(Error::ProfileMismatch { left: x.input().display(), right: y.out(palette).display() });
        }
        let pi = x.tau.compose(&y.sigma);
        let pinv = pi.inverse();
        let n_mid = pi.len();
        let y_ar: Vec<usize> = y.factors.iter().map(|f| f.1.len()).collect();
        let mut off_z = vec![0; n_mid + 1];
        for p in 0..n_mid {
            off_z[p + 1] = off_z[p] + y_ar[pinv.apply(p)];
        }
        let mut y_off = vec![0; y_ar.len() + 1];
        for j in 0..y_ar.len() {
            y_off[j + 1] = y_off[j] + y_ar[j];
        }
        let mut rho = vec![0; y_off[y_ar.len()]];
        for j in 0..y_ar.len() {
            for t in 0..y_ar[j] {
                rho[y_off[j] + t] = off_z[pi.apply(j)] + t;
            }
        }
        let rho = Permutation::new(rho).expect("block permutation");

        let blocks = self.composite_blocks(x, y, &pinv);
        let factors: Vec<Factor> = x.factors.iter().zip(&blocks).map(|((e, _), (k, _))| (*e, k.clone())).collect();
        let twists: Vec<Permutation> = blocks.into_iter().map(|(_, t)| t).collect();
        let x_dims = self.factor_dims(&x.factors);
        let y_dims = self.factor_dims(&y.factors);
        let mut inner = vec![Q::zero(); self.factor_dims(&factors).iter().product()];
        for (kx, cx) in x.inner.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let xi = multi_index(kx, &x_dims);
            for (ky, cy) in y.inner.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let yi = multi_index(ky, &y_dims);
                let mut pieces = Vec::with_capacity(x.factors.len());
                let mut start = 0;
                for (i, (e, key)) in x.factors.iter().enumerate() {
                    let ys: Vec<(usize, Vec<Q>)> = (start..start + key.len()).map(|p| pinv.apply(p)).map(|j| (j, unit_vec(y_dims[j], yi[j]))).collect();
                    let parts: Vec<(&OrbitKey, &[Q])> = ys.iter().map(|(j, v)| (&y.factors[*j].1, v.as_slice())).collect();
                    pieces.push(self.operad.compose_reps(*e, key, &unit_vec(x_dims[i], xi[i]), &parts).1);
                    start += key.len();
                }
                let refs: Vec<&[Q]> = pieces.iter().map(Vec::as_slice).collect();
                let c = cx * cy;
                for (a, b) in inner.iter_mut().zip(kron_all(&refs)) {
                    *a += b * &c;
                }
            }
        }
        let tau = Permutation::direct_sum_all(&twists).compose(&rho).compose(&y.tau);
        Ok(Monomial { factors, inner, sigma: x.sigma.clone(), tau })
    }

    /// For each factor of `x`, the orbit key of the inputs it receives and
    /// the twist `u` with `concatenation = rep·u`.
    fn composite_blocks(&self, x: &Monomial, y: &Monomial, pinv: &Permutation) -> Vec<(OrbitKey, Permutation)> {
        let mut start = 0;
        x.factors
            .iter()
            .map(|(_, key)| {
                let reps: Vec<Profile> = (start..start + key.len()).map(|p| y.factors[pinv.apply(p)].1.rep().clone()).collect();
                start += key.len();
                let (k, t) = Profile::concat_all(&reps).expect("one palette").canonicalize();
                (k, t.inverse())
            })
            .collect()
    }

    fn check_dim(&self, out: &Profile, input: &Profile, x: &[Q]) -> Result<()> {
        let want = self.dim(out, input);
        if x.len() != want {
            return Err(Error::LengthMismatch { expected: want, found: x.len() });
        }
        Ok(())
    }

    fn accumulate(&self, acc: &mut Vec<Q>, coef: &Q, m: &Monomial) -> Result<()> {
        let (_, _, v) = self.encode(m)?;
        for (a, b) in acc.iter_mut().zip(v) {
            *a += b * coef;
        }
        Ok(())
    }
}

impl PropData for OperadProp {
    fn palette(&self) -> &Arc<Palette> {
        self.operad.palette()
    }

    fn dim(&self, out: &Profile, input: &Profile) -> usize {
        self.bimodule.dim_at(&out.orbit_key(), &input.orbit_key())
    }

    fn vertical(&self, out: &Profile, mid: &Profile, input: &Profile, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
        self.check_dim(out, mid, x)?;
        self.check_dim(mid, input, y)?;
        let mut acc = vec![Q::zero(); self.dim(out, input)];
        let ys = self.monomials(mid, input, y);
        for (cx, mx) in self.monomials(out, mid, x) {
            for (cy, my) in &ys {
                let z = self.compose_monomials(&mx, my)?;
                self.accumulate(&mut acc, &(&cx * cy), &z)?;
            }
        }
        Ok(acc)
    }

    fn horizontal(&self, x: (&Profile, &Profile, &[Q]), y: (&Profile, &Profile, &[Q])) -> Result<Vec<Q>> {
        self.check_dim(x.0, x.1, x.2)?;
        self.check_dim(y.0, y.1, y.2)?;
        let out = x.0.concat(y.0)?;
        let input = x.1.concat(y.1)?;
        if out.len() > self.max_outputs || input.len() > self.operad.max_arity() {
            return Err(Error::Operad(format!("{} <- {} exceeds the truncation", out.display(), input.display())));
        }
        let mut acc = vec![Q::zero(); self.dim(&out, &input)];
        let ys = self.monomials(y.0, y.1, y.2);
        for (cx, mx) in self.monomials(x.0, x.1, x.2) {
            for (cy, my) in &ys {
                let mut factors = mx.factors.clone();
                factors.extend(my.factors.iter().cloned());
                let z = Monomial {
                    factors,
                    inner: super::kron_vec(&mx.inner, &my.inner),
                    sigma: mx.sigma.direct_sum(&my.sigma),
                    tau: mx.tau.direct_sum(&my.tau),
                };
                self.accumulate(&mut acc, &(&cx * cy), &z)?;
            }
        }
        Ok(acc)
    }

    fn act(&self, out: &Profile, input: &Profile, sigma: &Permutation, tau: &Permutation, x: &[Q]) -> Result<Vec<Q>> {
        self.check_dim(out, input, x)?;
        let mut acc = vec![Q::zero(); self.dim(&out.left(sigma), &input.right(tau))];
        for (c, m) in self.monomials(out, input, x) {
            let moved = Monomial { sigma: sigma.compose(&m.sigma), tau: m.tau.compose(tau), ..m };
            self.accumulate(&mut acc, &c, &moved)?;
        }
        Ok(acc)
    }
}

/// The endomorphism PROP of a family concentrated in degree 0; coordinates
/// are the entries of `X_c̄ → X_d̄`, row by row.
#[derive(Clone, Debug)]
pub struct EndoProp {
    family: ColoredFamily,
}

impl EndoProp {
    pub fn new(family: ColoredFamily) -> Result<Self> {
        if family.complexes().iter().any(|x| x.len() > 1) {
            return Err(Error::Precondition("the family must be concentrated in degree 0".into()));
        }
        Ok(EndoProp { family })
    }

    pub fn family(&self) -> &ColoredFamily {
        &self.family
    }

    pub fn element(&self, out: &Profile, input: &Profile, x: &[Q]) -> Result<EndoElement> {
        let src = self.family.tensor(input);
        let tgt = self.family.tensor(out);
        let (r, c) = (tgt.dim(0), src.dim(0));
        if x.len() != r * c {
            return Err(Error::LengthMismatch { expected: r * c, found: x.len() });
        }
        let blocks = if src.len() == 1 { vec![Matrix::from_fn(r, c, |i, j| x[i * c + j].clone())] } else { Vec::new() };
        EndoElement::from_blocks(&self.family, out.clone(), input.clone(), 0, blocks)
    }

    pub fn coords(f: &EndoElement) -> Vec<Q> {
        f.map().block(0).entries().to_vec()
    }
}

impl PropData for EndoProp {
    fn palette(&self) -> &Arc<Palette> {
        self.family.palette()
    }

    fn dim(&self, out: &Profile, input: &Profile) -> usize {
        self.family.tensor(out).dim(0) * self.family.tensor(input).dim(0)
    }

    fn vertical(&self, out: &Profile, mid: &Profile, input: &Profile, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
        let f = self.element(out, mid, x)?;
        let g = self.element(mid, input, y)?;
        Ok(Self::coords(&endo_vertical(&f, &g)?))
    }

    fn horizontal(&self, x: (&Profile, &Profile, &[Q]), y: (&Profile, &Profile, &[Q])) -> Result<Vec<Q>> {
        let f = self.element(x.0, x.1, x.2)?;
        let g = self.element(y.0, y.1, y.2)?;
        Ok(Self::coords(&endo_horizontal(&self.family, &f, &g)?))
    }

    fn act(&self, out: &Profile, input: &Profile, sigma: &Permutation, tau: &Permutation, x: &[Q]) -> Result<Vec<Q>> {
        let f = self.element(out, input, x)?;
        Ok(Self::coords(&endo_permute(&self.family, sigma, tau, &f)?))
    }
}

/// `γ(x; y₁, …, y_n) = x ∘ (y₁ ⊗ ⋯ ⊗ y_n)` computed in `p`, for `x` at
/// `(d; rep K)` and `y_j` at representatives, moved to the representative
/// of the concatenation.
fn gamma_in<P: PropData>(p: &P, key: &GammaKey, x: &[Q], ys: &[Vec<Q>]) -> Result<Vec<Q>> {
    let palette = p.palette();
    let colors = key.input.rep().colors();
    let mut acc: Option<(Profile, Profile, Vec<Q>)> = None;
    for (j, y) in ys.iter().enumerate() {
        let yo = single(palette, colors[j]);
        let yi = key.parts[j].rep();
        acc = Some(match acc {
            None => (yo, yi.clone(), y.clone()),
            Some((o, i, a)) => {
                let v = p.horizontal((&o, &i, &a), (&yo, yi, y))?;
                (o.concat(&yo)?, i.concat(yi)?, v)
            }
        });
    }
    let (out, input, ys_total) = acc.ok_or(Error::EmptyProfile)?;
    let composite = p.vertical(&single(palette, key.out), &out, &input, x, &ys_total)?;
    let (_, t) = input.canonicalize();
    p.act(&single(palette, key.out), &input, &Permutation::identity(1), &t, &composite)
}

/// The underlying operad: components with one output and at most
/// `max_arity` inputs, composed by `x ∘ (y₁ ⊗ ⋯ ⊗ y_n)`.
pub fn forget_to_operad<P: PropData>(p: &P, max_arity: usize) -> Result<ColoredOperad> {
    let palette = p.palette().clone();
    let keys = keys_up_to(&palette, max_arity);
    let mut components = Vec::new();
    for d in 0..palette.len() as u16 {
        let out = single(&palette, Color(d));
        for k in &keys {
            let dim = p.dim(&out, k.rep());
            if dim == 0 {
                continue;
            }
            let right = k
                .stabilizer_generators()
                .iter()
                .map(|s| {
                    let cols = (0..dim).map(|i| p.act(&out, k.rep(), &Permutation::identity(1), s, &unit_vec(dim, i))).collect::<Result<Vec<_>>>()?;
                    Ok(Matrix::from_fn(dim, dim, |r, c| cols[c][r].clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            components.push(Component::from_matrices(out.orbit_key(), k.clone(), dim, Vec::new(), right)?);
        }
    }
    let shell = ColoredOperad::new(&palette, max_arity, components.clone(), BTreeMap::new())?;
    let mut gamma = BTreeMap::new();
    for key in shell.gamma_keys() {
        let colors = key.input.rep().colors();
        let mut dims = vec![shell.dim(key.out, &key.input)];
        dims.extend(key.parts.iter().zip(colors).map(|(k, &c)| shell.dim(c, k)));
        let cols: usize = dims.iter().product();
        let rows = shell.dim(key.out, &key.concat().orbit_key());
        let mut m = Matrix::zeros(rows, cols);
        for col in 0..cols {
            let idx = multi_index(col, &dims);
            let ys: Vec<Vec<Q>> = (1..dims.len()).map(|j| unit_vec(dims[j], idx[j])).collect();
            let v = gamma_in(p, &key, &unit_vec(dims[0], idx[0]), &ys)?;
            for (r, value) in v.into_iter().enumerate() {
                m.set(r, col, value);
            }
        }
        gamma.insert(key, m);
    }
    ColoredOperad::new(&palette, max_arity, components, gamma)
}

/// Comparison of an operad with the underlying operad of its free PROP.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitReport {
    pub components_checked: usize,
    pub compositions_checked: usize,
    pub mismatches: Vec<String>,
}

impl UnitReport {
    pub fn is_identity(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `max_outputs` must be at least the arity bound, so that `y₁ ⊗ ⋯ ⊗ y_n`
/// exists for every composable shape.
pub fn check_unit_identity(operad: &ColoredOperad, max_outputs: usize) -> Result<UnitReport> {
    if max_outputs < operad.max_arity() {
        return Err(Error::Precondition(format!("{max_outputs} outputs cannot hold a composite of arity {}", operad.max_arity())));
    }
    let p = prop_from_operad(operad, max_outputs)?;
    let back = forget_to_operad(&p, operad.max_arity())?;
    let mut report = UnitReport::default();
    let keys: std::collections::BTreeSet<(Color, OrbitKey)> = operad.support().into_iter().chain(back.support()).collect();
    for (d, k) in keys {
        report.components_checked += 1;
        let (a, b) = (operad.component(d, &k), back.component(d, &k));
        let same = match (a, b) {
            (Some(a), Some(b)) => a.carrier() == b.carrier() && a.right_generators() == b.right_generators(),
            _ => false,
        };
        if !same {
            report.mismatches.push(format!("component {}({})", operad.palette().name(d), k.display()));
        }
    }
    for key in operad.gamma_keys() {
        report.compositions_checked += 1;
        if operad.gamma().get(&key) != back.gamma().get(&key) {
            report.mismatches.push(format!("γ at {}", operad.describe(&key)));
        }
    }
    Ok(report)
}
