//! Algebras over an operad, and the matching algebras over its free PROP.
//!
//! An `O`-algebra structure on a degree-0 family `X` is a linear map
//! `λ: O(d; K) → Hom(X_{rep K}, X_d)` for every component. `Φ(λ)` extends it
//! to `O_prop` by `σ·(x₁ ⊗ ⋯ ⊗ x_m)·τ ↦ σ·(λx₁ ⊗ ⋯ ⊗ λx_m)·τ`, and `Ψ`
//! restricts a PROP map back to one-output components.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::endo::ColoredFamily;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{Color, OrbitKey, Permutation, Profile};
use crate::rational::Q;

use super::prop::{prop_from_operad, EndoProp, Monomial, OperadProp, PropData};
use super::{multi_index, single, unit_vec, ColoredOperad};

#[derive(Clone, Debug)]
pub struct OperadAlgebra {
    endo: EndoProp,
    /// Columns are the flattened images of the basis vectors.
    images: BTreeMap<(Color, OrbitKey), Matrix>,
}

impl OperadAlgebra {
    pub fn new(operad: &ColoredOperad, family: ColoredFamily, images: BTreeMap<(Color, OrbitKey), Matrix>) -> Result<Self> {
        if family.palette() != operad.palette() {
            return Err(Error::PaletteMismatch);
        }
        let endo = EndoProp::new(family)?;
        for (d, k) in images.keys() {
            if operad.component(*d, k).is_none() {
                return Err(Error::Operad(format!("image given for empty component {}({})", operad.palette().name(*d), k.display())));
            }
        }
        for (d, k) in operad.support() {
            let want = (endo.dim(&single(operad.palette(), d), k.rep()), operad.dim(d, &k));
            match images.get(&(d, k.clone())) {
                Some(m) if m.shape() == want => {}
                Some(m) => return Err(Error::Shape(format!("images at {}({}) have shape {:?}, expected {want:?}", operad.palette().name(d), k.display(), m.shape()))),
                None => return Err(Error::Operad(format!("no images for {}({})", operad.palette().name(d), k.display()))),
            }
        }
        Ok(OperadAlgebra { endo, images })
    }

    /// `λ(w)(a₁ ⊗ ⋯ ⊗ a_n) = a_{w(1)} ⋯ a_{w(n)}` for the associative operad
    /// and an associative product `mult: A ⊗ A → A`.
    pub fn from_associative(operad: &ColoredOperad, dim: usize, mult: &Matrix) -> Result<Self> {
        if mult.shape() != (dim, dim * dim) {
            return Err(Error::Shape(format!("product has shape {:?}, expected ({dim}, {})", mult.shape(), dim * dim)));
        }
        let palette = operad.palette();
        if palette.len() != 1 {
            return Err(Error::Operad("the associative operad has one color".into()));
        }
        let family = ColoredFamily::new(palette, vec![crate::ChainComplex::concentrated(dim)])?;
        let product = |a: &[Q], b: &[Q]| mult.apply(&super::kron_vec(a, b));
        let mut images = BTreeMap::new();
        for (d, k) in operad.support() {
            let n = k.len();
            let words = Permutation::all(n);
            let cols = (0..dim.pow(n as u32)).collect::<Vec<_>>();
            let mut m = Matrix::zeros(dim * cols.len(), words.len());
            for (wi, w) in words.iter().enumerate() {
                for &col in &cols {
                    let idx = multi_index(col, &vec![dim; n]);
                    let mut acc = unit_vec(dim, idx[w.apply(0)]);
                    for t in 1..n {
                        acc = product(&acc, &unit_vec(dim, idx[w.apply(t)]));
                    }
                    for (row, v) in acc.into_iter().enumerate() {
                        m.set(row * cols.len() + col, wi, v);
                    }
                }
            }
            images.insert((d, k), m);
        }
        OperadAlgebra::new(operad, family, images)
    }

    pub fn family(&self) -> &ColoredFamily {
        self.endo.family()
    }

    pub fn images(&self) -> &BTreeMap<(Color, OrbitKey), Matrix> {
        &self.images
    }

    /// `λ(x)` for `x` at `(d; rep K)`, as endomorphism coordinates.
    pub fn lambda(&self, d: Color, key: &OrbitKey, x: &[Q]) -> Vec<Q> {
        match self.images.get(&(d, key.clone())) {
            Some(m) => m.apply(x),
            None => vec![Q::zero(); self.endo.dim(&single(self.endo.palette(), d), key.rep())],
        }
    }
}

/// Checks `λ(x·g) = λ(x)·g` and `λ(γ(x; y)) = λ(x) ∘ (λy₁ ⊗ ⋯ ⊗ λy_n)`
/// on basis elements.
pub fn check_operad_algebra(operad: &ColoredOperad, a: &OperadAlgebra) -> Result<Vec<String>> {
    let palette = operad.palette();
    let endo = &a.endo;
    let mut failures = Vec::new();
    for (d, k) in operad.support() {
        let comp = operad.component(d, &k).expect("support");
        let out = single(palette, d);
        for g in k.stabilizer_generators() {
            for i in 0..comp.dim() {
                let x = unit_vec(comp.dim(), i);
                let lhs = a.lambda(d, &k, &comp.right_matrix(&g).apply(&x));
                let rhs = endo.act(&out, k.rep(), &Permutation::identity(1), &g, &a.lambda(d, &k, &x))?;
                if lhs != rhs {
                    failures.push(format!("λ is not equivariant at {}({}) under {:?}", palette.name(d), k.display(), g));
                }
            }
        }
    }
    for key in operad.gamma_keys() {
        let colors = key.input.rep().colors();
        let mut dims = vec![operad.dim(key.out, &key.input)];
        dims.extend(key.parts.iter().zip(colors).map(|(p, &c)| operad.dim(c, p)));
        let concat = key.concat();
        let (ck, t) = concat.canonicalize();
        let out = single(palette, key.out);
        for col in 0..dims.iter().product() {
            let idx = multi_index(col, &dims);
            let x = unit_vec(dims[0], idx[0]);
            let ys: Vec<Vec<Q>> = (1..dims.len()).map(|j| unit_vec(dims[j], idx[j])).collect();
            let parts: Vec<(&OrbitKey, &[Q])> = key.parts.iter().zip(&ys).map(|(p, y)| (p, y.as_slice())).collect();
            let (_, z) = operad.compose_reps(key.out, &key.input, &x, &parts);
            let lhs = endo.act(&out, ck.rep(), &Permutation::identity(1), &t.inverse(), &a.lambda(key.out, &ck, &z))?;
            let mut acc: Option<(Profile, Profile, Vec<Q>)> = None;
            for (j, y) in ys.iter().enumerate() {
                let yo = single(palette, colors[j]);
                let yi = key.parts[j].rep();
                let ly = a.lambda(colors[j], &key.parts[j], y);
                acc = Some(match acc {
                    None => (yo, yi.clone(), ly),
                    Some((o, i, v)) => {
                        let w = endo.horizontal((&o, &i, &v), (&yo, yi, &ly))?;
                        (o.concat(&yo)?, i.concat(yi)?, w)
                    }
                });
            }
            let (mid, input, ly) = acc.ok_or(Error::EmptyProfile)?;
            let rhs = endo.vertical(&out, &mid, &input, &a.lambda(key.out, &key.input, &x), &ly)?;
            if lhs != rhs {
                failures.push(format!("λ does not respect γ at {}", operad.describe(&key)));
                break;
            }
        }
    }
    Ok(failures)
}

fn phi_monomial(prop: &OperadProp, a: &OperadAlgebra, m: &Monomial) -> Result<Vec<Q>> {
    let palette = prop.operad().palette();
    let endo = &a.endo;
    let dims: Vec<usize> = m.factors.iter().map(|(e, k)| prop.operad().dim(*e, k)).collect();
    let e_out = Profile::new(palette, m.factors.iter().map(|f| f.0).collect())?;
    let reps: Vec<Profile> = m.factors.iter().map(|f| f.1.rep().clone()).collect();
    let e_in = Profile::concat_all(&reps)?;
    let mut total = vec![Q::zero(); endo.dim(&e_out, &e_in)];
    for (k, c) in m.inner.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let idx = multi_index(k, &dims);
        let mut acc: Option<(Profile, Profile, Vec<Q>)> = None;
        for (i, (e, key)) in m.factors.iter().enumerate() {
            let yo = single(palette, *e);
            let l = a.lambda(*e, key, &unit_vec(dims[i], idx[i]));
            acc = Some(match acc {
                None => (yo, key.rep().clone(), l),
                Some((o, inp, v)) => {
                    let w = endo.horizontal((&o, &inp, &v), (&yo, key.rep(), &l))?;
                    (o.concat(&yo)?, inp.concat(key.rep())?, w)
                }
            });
        }
        let (_, _, v) = acc.ok_or(Error::EmptyProfile)?;
        for (t, x) in total.iter_mut().zip(v) {
            *t += x * c;
        }
    }
    endo.act(&e_out, &e_in, &m.sigma, &m.tau, &total)
}

/// `Φ(λ)` on an element of `O_prop` at the concrete `(out; input)`.
pub fn phi(prop: &OperadProp, a: &OperadAlgebra, out: &Profile, input: &Profile, x: &[Q]) -> Result<Vec<Q>> {
    let mut acc = vec![Q::zero(); a.endo.dim(out, input)];
    for (c, m) in prop.monomials(out, input, x) {
        for (t, v) in acc.iter_mut().zip(phi_monomial(prop, a, &m)?) {
            *t += v * &c;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundTripReport {
    /// Failures of the `O`-algebra axioms for the input.
    pub algebra_failures: Vec<String>,
    /// Components where `Ψ(Φ(λ))` differs from `λ`.
    pub psi_phi_failures: Vec<String>,
    /// Composites where `Φ(λ)` fails to be a PROP map.
    pub morphism_failures: Vec<String>,
    pub checked: usize,
}

impl RoundTripReport {
    pub fn is_identity(&self) -> bool {
        self.algebra_failures.is_empty() && self.psi_phi_failures.is_empty() && self.morphism_failures.is_empty()
    }
}

/// Builds `Φ(λ)` on `O_prop` (truncated at `max_outputs`), checks that it
/// commutes with both compositions and the groupoid action on basis
/// elements, and that `Ψ(Φ(λ)) = λ`. At most `limit` composites of each
/// kind are tested.
pub fn algebra_round_trip(operad: &ColoredOperad, a: &OperadAlgebra, max_outputs: usize, limit: usize) -> Result<RoundTripReport> {
    let mut report = RoundTripReport { algebra_failures: check_operad_algebra(operad, a)?, ..Default::default() };
    let prop = prop_from_operad(operad, max_outputs)?;
    let palette = operad.palette();
    let endo = &a.endo;

    for (d, k) in operad.support() {
        let out = single(palette, d);
        for i in 0..operad.dim(d, &k) {
            report.checked += 1;
            let m = Monomial { factors: vec![(d, k.clone())], inner: unit_vec(operad.dim(d, &k), i), sigma: Permutation::identity(1), tau: Permutation::identity(k.len()) };
            let (_, _, coords) = prop.encode(&m)?;
            if phi(&prop, a, &out, k.rep(), &coords)? != a.lambda(d, &k, &unit_vec(operad.dim(d, &k), i)) {
                report.psi_phi_failures.push(format!("Ψ(Φ(λ)) ≠ λ at {}({}) basis {i}", palette.name(d), k.display()));
            }
        }
    }

    let support = prop.bimodule().support();
    let basis = |o: &OrbitKey, i: &OrbitKey| -> Vec<Vec<Q>> {
        let n = prop.bimodule().dim_at(o, i);
        (0..n).map(|k| unit_vec(n, k)).collect()
    };
    let mut budget = limit;
    'vertical: for (o, mid) in &support {
        for (mid2, i) in &support {
            if mid != mid2 {
                continue;
            }
            for x in basis(o, mid) {
                for y in basis(mid, i) {
                    if budget == 0 {
                        break 'vertical;
                    }
                    budget -= 1;
                    report.checked += 1;
                    let (out, m, input) = (o.rep(), mid.rep(), i.rep());
                    let lhs = phi(&prop, a, out, input, &prop.vertical(out, m, input, &x, &y)?)?;
                    let rhs = endo.vertical(out, m, input, &phi(&prop, a, out, m, &x)?, &phi(&prop, a, m, input, &y)?)?;
                    if lhs != rhs {
                        report.morphism_failures.push(format!("vertical at {} <- {} <- {}", out.display(), m.display(), input.display()));
                    }
                }
            }
        }
    }
    let mut budget = limit;
    'horizontal: for (o1, i1) in &support {
        for (o2, i2) in &support {
            if o1.len() + o2.len() > max_outputs || i1.len() + i2.len() > operad.max_arity() {
                continue;
            }
            for x in basis(o1, i1) {
                for y in basis(o2, i2) {
                    if budget == 0 {
                        break 'horizontal;
                    }
                    budget -= 1;
                    report.checked += 1;
                    let xs = (o1.rep(), i1.rep(), x.as_slice());
                    let ys = (o2.rep(), i2.rep(), y.as_slice());
                    let (out, input) = (o1.rep().concat(o2.rep())?, i1.rep().concat(i2.rep())?);
                    let lhs = phi(&prop, a, &out, &input, &prop.horizontal(xs, ys)?)?;
                    let fx = phi(&prop, a, xs.0, xs.1, &x)?;
                    let fy = phi(&prop, a, ys.0, ys.1, &y)?;
                    let rhs = endo.horizontal((xs.0, xs.1, &fx), (ys.0, ys.1, &fy))?;
                    if lhs != rhs {
                        report.morphism_failures.push(format!("horizontal at {} ⊗ {}", o1.display(), o2.display()));
                    }
                }
            }
        }
    }
    let mut budget = limit;
    'action: for (o, i) in &support {
        let sigmas: Vec<Permutation> = (0..o.len().saturating_sub(1)).map(|p| Permutation::adjacent(o.len(), p)).collect();
        let taus: Vec<Permutation> = (0..i.len().saturating_sub(1)).map(|p| Permutation::adjacent(i.len(), p)).collect();
        let moves = sigmas.iter().map(|s| (s.clone(), Permutation::identity(i.len()))).chain(taus.iter().map(|t| (Permutation::identity(o.len()), t.clone())));
        for (s, t) in moves {
            for x in basis(o, i) {
                if budget == 0 {
                    break 'action;
                }
                budget -= 1;
                report.checked += 1;
                let lhs = phi(&prop, a, &o.rep().left(&s), &i.rep().right(&t), &prop.act(o.rep(), i.rep(), &s, &t, &x)?)?;
                let rhs = endo.act(o.rep(), i.rep(), &s, &t, &phi(&prop, a, o.rep(), i.rep(), &x)?)?;
                if lhs != rhs {
                    report.morphism_failures.push(format!("action at {} <- {}", o.display(), i.display()));
                }
            }
        }
    }
    Ok(report)
}
