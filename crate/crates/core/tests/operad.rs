mod common;

use std::sync::Arc;

use common::{palette, prof, rng};
use cprop::operad::{
    algebra_round_trip, check_unit_identity, forget_to_operad, prop_from_operad, ColoredOperad, EndoProp, OperadAlgebra, OperadProp, PropData,
};
use cprop::profile::{factorial, OrbitKey, Palette, Permutation, Profile};
use cprop::rational::q;
use cprop::{samples, Matrix, Q};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

/// Ordered compositions of `n` into `m` positive parts.
fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    (1..=n)
        .flat_map(|k| {
            compositions(n - k, m - 1).into_iter().map(move |mut rest| {
                rest.insert(0, k);
                rest
            })
        })
        .collect()
}

/// One-colored count: `m!·n!·Σ ∏ dim O(k_i)/k_i!` over ordered compositions.
fn one_color_dim(dim_o: impl Fn(usize) -> u128, m: usize, n: usize) -> u128 {
    compositions(n, m)
        .iter()
        .map(|ks| {
            let inner: u128 = ks.iter().map(|&k| dim_o(k)).product();
            let stab: u128 = ks.iter().map(|&k| factorial(k)).product();
            factorial(m) * factorial(n) * inner / stab
        })
        .sum()
}

fn key(p: &Arc<Palette>, n: usize) -> OrbitKey {
    Profile::from_names(p, &vec!["c"; n]).unwrap().orbit_key()
}

#[test]
fn associative_prop_dimensions() {
    let op = ColoredOperad::associative(3).unwrap();
    let p = prop_from_operad(&op, 3).unwrap();
    let pal = op.palette().clone();
    assert_eq!(p.bimodule().dim_at(&key(&pal, 2), &key(&pal, 3)), 24);
    for m in 1..=3 {
        for n in m..=3 {
            let want = one_color_dim(|k| factorial(k), m, n);
            assert_eq!(p.bimodule().dim_at(&key(&pal, m), &key(&pal, n)) as u128, want, "({m},{n})");
        }
    }
    assert_eq!(p.bimodule().dim_at(&key(&pal, 3), &key(&pal, 2)), 0);
}

#[test]
fn arity_four_dimensions() {
    let op = ColoredOperad::associative(4).unwrap();
    let p = prop_from_operad(&op, 3).unwrap();
    let trivial = prop_from_operad(&ColoredOperad::trivial(op.palette(), 4).unwrap(), 3).unwrap();
    let pal = op.palette().clone();
    for m in 1..=3 {
        for n in 1..=4 {
            let (dk, ck) = (key(&pal, m), key(&pal, n));
            assert_eq!(p.bimodule().dim_at(&dk, &ck) as u128, one_color_dim(|k| factorial(k), m, n), "({m},{n})");
            assert_eq!(trivial.bimodule().dim_at(&dk, &ck) as u128, one_color_dim(|_| 1, m, n), "({m},{n})");
        }
    }
}

#[test]
fn trivial_prop_dimensions() {
    let pal = palette(&["c"]);
    let op = ColoredOperad::trivial(&pal, 2).unwrap();
    let p = prop_from_operad(&op, 2).unwrap();
    assert_eq!(p.bimodule().dim_at(&key(&pal, 2), &key(&pal, 2)), 4);
    assert_eq!(p.bimodule().dim_at(&key(&pal, 1), &key(&pal, 2)) as u128, one_color_dim(|_| 1, 1, 2));
}

/// Brute force over colored factor sequences: every sequence of operad
/// components whose outputs and inputs land in the given orbits contributes
/// `∏ dim · |Stab(d)|·|Stab(c)| / ∏ |Stab(K_i)|`.
fn colored_dim(op: &ColoredOperad, d: &OrbitKey, c: &OrbitKey) -> u128 {
    let support = op.support();
    let mut total = 0u128;
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(seq) = stack.pop() {
        if seq.len() == d.len() {
            let outs: Vec<_> = seq.iter().map(|&i| support[i].0).collect();
            let ins: Vec<Profile> = seq.iter().map(|&i| support[i].1.rep().clone()).collect();
            let out_key = Profile::new(op.palette(), outs).unwrap().orbit_key();
            let in_key = Profile::concat_all(&ins).unwrap().orbit_key();
            if &out_key == d && &in_key == c {
                let dims: u128 = seq.iter().map(|&i| op.dim(support[i].0, &support[i].1) as u128).product();
                let stabs: u128 = seq.iter().map(|&i| support[i].1.stabilizer_order()).product();
                total += dims * d.stabilizer_order() * c.stabilizer_order() / stabs;
            }
            continue;
        }
        for i in 0..support.len() {
            let mut next = seq.clone();
            next.push(i);
            stack.push(next);
        }
    }
    total
}

#[test]
fn colored_prop_dimensions_match_coset_count() {
    let pal = palette(&["a", "b"]);
    let mut r = rng(3);
    let op = samples::endo_operad(&mut r, &pal, 2, 3);
    let p = prop_from_operad(&op, 2).unwrap();
    for d in ["a", "b", "aa", "ab", "bb"] {
        for c in ["a", "b", "aa", "ab", "bb", "aab", "abb", "bbb"] {
            let (dk, ck) = (prof(&pal, d).orbit_key(), prof(&pal, c).orbit_key());
            assert_eq!(p.bimodule().dim_at(&dk, &ck) as u128, colored_dim(&op, &dk, &ck), "{d} <- {c}");
        }
    }
}

#[test]
fn free_prop_restricts_to_the_operad() {
    let assoc = ColoredOperad::associative(3).unwrap();
    let report = check_unit_identity(&assoc, 3).unwrap();
    assert!(report.is_identity(), "{:?}", report.mismatches);
    assert!(report.compositions_checked > 5);

    let trivial = ColoredOperad::trivial(&palette(&["c"]), 3).unwrap();
    assert!(check_unit_identity(&trivial, 3).unwrap().is_identity());
    let trivial = ColoredOperad::trivial(&palette(&["a", "b"]), 2).unwrap();
    assert!(check_unit_identity(&trivial, 2).unwrap().is_identity());
    assert!(check_unit_identity(&assoc, 2).is_err());

    let mut r = rng(11);
    let endo = samples::endo_operad(&mut r, &palette(&["a", "b"]), 2, 2);
    assert!(endo.check_axioms(0).is_valid());
    let report = check_unit_identity(&endo, 2).unwrap();
    assert!(report.is_identity(), "{:?}", report.mismatches);
}

#[test]
fn endomorphism_operads_satisfy_the_axioms() {
    let mut r = rng(5);
    for _ in 0..3 {
        let op = samples::endo_operad(&mut r, &palette(&["a", "b"]), 2, 2);
        let report = op.check_axioms(1);
        assert!(report.is_valid(), "{:?}", report.failures);
    }
    let op = samples::endo_operad(&mut r, &palette(&["a"]), 2, 3);
    let report = op.check_axioms(3);
    assert!(report.exhaustive && report.is_valid(), "{:?}", report.failures);
    let op = samples::endo_operad(&mut r, &palette(&["a"]), 1, 4);
    let report = op.check_axioms(2);
    assert!(!report.exhaustive);
    assert!(report.is_valid(), "{:?}", report.failures);
}

fn random_element(r: &mut impl Rng, p: &OperadProp, out: &Profile, input: &Profile) -> Vec<Q> {
    (0..p.dim(out, input)).map(|_| q(r.gen_range(-2..=2))).collect()
}

#[test]
fn free_prop_axioms_on_random_elements() {
    let mut r = rng(21);
    let pal = palette(&["a", "b"]);
    let op = samples::endo_operad(&mut r, &pal, 2, 3);
    let p = prop_from_operad(&op, 2).unwrap();
    for _ in 0..8 {
        // x: d ← b, y: b ← c, z: c ← e with concrete, non-sorted profiles.
        let d = samples::profile(&mut r, &pal, 1);
        let b = samples::profile(&mut r, &pal, 2);
        let c = samples::profile(&mut r, &pal, 2);
        let e = samples::profile(&mut r, &pal, 3);
        let x = random_element(&mut r, &p, &d, &b);
        let y = random_element(&mut r, &p, &b, &c);
        let z = random_element(&mut r, &p, &c, &e);
        let xy = p.vertical(&d, &b, &c, &x, &y).unwrap();
        let yz = p.vertical(&b, &c, &e, &y, &z).unwrap();
        assert_eq!(p.vertical(&d, &c, &e, &xy, &z).unwrap(), p.vertical(&d, &b, &e, &x, &yz).unwrap());

        // (x·τ)∘(τ⁻¹·y) = x∘y and (x∘y)·ρ = x∘(y·ρ).
        let tau = samples::permutation(&mut r, b.len());
        let xt = p.act(&d, &b, &Permutation::identity(1), &tau, &x).unwrap();
        let ty = p.act(&b, &c, &tau.inverse(), &Permutation::identity(c.len()), &y).unwrap();
        assert_eq!(p.vertical(&d, &b.right(&tau), &c, &xt, &ty).unwrap(), xy);
        let rho = samples::permutation(&mut r, c.len());
        let moved = p.act(&d, &c, &Permutation::identity(1), &rho, &xy).unwrap();
        let yr = p.act(&b, &c, &Permutation::identity(b.len()), &rho, &y).unwrap();
        assert_eq!(p.vertical(&d, &b, &c.right(&rho), &x, &yr).unwrap(), moved);
    }
}

#[test]
fn free_prop_interchange_and_horizontal_equivariance() {
    let mut r = rng(8);
    let op = ColoredOperad::associative(3).unwrap();
    let pal = op.palette().clone();
    let p = prop_from_operad(&op, 2).unwrap();
    let c = |n| Profile::from_names(&pal, &vec!["c"; n]).unwrap();
    for _ in 0..10 {
        // (x1 ⊗ x2) ∘ (y1 ⊗ y2) = (x1 ∘ y1) ⊗ (x2 ∘ y2) with x_i: 1 ← 1.
        let x1 = random_element(&mut r, &p, &c(1), &c(1));
        let x2 = random_element(&mut r, &p, &c(1), &c(1));
        let y1 = random_element(&mut r, &p, &c(1), &c(1));
        let y2 = random_element(&mut r, &p, &c(1), &c(2));
        let xs = p.horizontal((&c(1), &c(1), &x1), (&c(1), &c(1), &x2)).unwrap();
        let ys = p.horizontal((&c(1), &c(1), &y1), (&c(1), &c(2), &y2)).unwrap();
        let lhs = p.vertical(&c(2), &c(2), &c(3), &xs, &ys).unwrap();
        let a = p.vertical(&c(1), &c(1), &c(1), &x1, &y1).unwrap();
        let b = p.vertical(&c(1), &c(1), &c(2), &x2, &y2).unwrap();
        assert_eq!(lhs, p.horizontal((&c(1), &c(1), &a), (&c(1), &c(2), &b)).unwrap());

        // (x·τ) ⊗ y = (x ⊗ y)·(τ ⊕ id)
        let x = random_element(&mut r, &p, &c(1), &c(2));
        let y = random_element(&mut r, &p, &c(1), &c(1));
        let tau = Permutation::adjacent(2, 0);
        let xt = p.act(&c(1), &c(2), &Permutation::identity(1), &tau, &x).unwrap();
        let left = p.horizontal((&c(1), &c(2), &xt), (&c(1), &c(1), &y)).unwrap();
        let xy = p.horizontal((&c(1), &c(2), &x), (&c(1), &c(1), &y)).unwrap();
        let right = p.act(&c(2), &c(3), &Permutation::identity(2), &tau.direct_sum(&Permutation::identity(1)), &xy).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn swapping_outputs_is_not_an_identity() {
    let op = ColoredOperad::trivial(&palette(&["c"]), 2).unwrap();
    let p = prop_from_operad(&op, 2).unwrap();
    let pal = op.palette().clone();
    let c = |n| Profile::from_names(&pal, &vec!["c"; n]).unwrap();
    let x = vec![q(1)];
    let xx = p.horizontal((&c(1), &c(1), &x), (&c(1), &c(1), &x)).unwrap();
    let swap = Permutation::adjacent(2, 0);
    let swapped = p.act(&c(2), &c(2), &swap, &swap, &xx).unwrap();
    assert_ne!(swapped, xx);
    assert_eq!(p.act(&c(2), &c(2), &swap, &swap, &swapped).unwrap(), xx);
}

fn dual_numbers() -> Matrix {
    // basis 1, x with x² = 0
    let mut m = Matrix::zeros(2, 4);
    m.set(0, 0, q(1));
    m.set(1, 1, q(1));
    m.set(1, 2, q(1));
    m
}

fn upper_triangular() -> Matrix {
    // basis e11, e12, e22 of upper triangular 2×2 matrices
    let mut m = Matrix::zeros(3, 9);
    let idx = |a: usize, b: usize| a * 3 + b;
    m.set(0, idx(0, 0), q(1));
    m.set(1, idx(0, 1), q(1));
    m.set(1, idx(1, 2), q(1));
    m.set(2, idx(2, 2), q(1));
    m
}

#[test]
fn algebra_round_trips() {
    let op = ColoredOperad::associative(3).unwrap();
    for (dim, mult) in [(1, Matrix::from_i64(1, 1, &[1])), (2, dual_numbers()), (3, upper_triangular())] {
        let a = OperadAlgebra::from_associative(&op, dim, &mult).unwrap();
        let report = algebra_round_trip(&op, &a, 2, 400).unwrap();
        assert!(report.is_identity(), "dim {dim}: {report:?}");
        assert!(report.checked > 50);
    }
}

#[test]
fn non_associative_product_is_flagged() {
    let op = ColoredOperad::associative(3).unwrap();
    let mut mult = upper_triangular();
    mult.set(0, 1, q(1));
    let a = OperadAlgebra::from_associative(&op, 3, &mult).unwrap();
    let report = algebra_round_trip(&op, &a, 2, 200).unwrap();
    assert!(!report.algebra_failures.is_empty());
    assert!(report.algebra_failures.iter().any(|f| f.contains("γ")));
}

#[test]
fn perturbed_image_is_flagged() {
    let op = ColoredOperad::associative(3).unwrap();
    let a = OperadAlgebra::from_associative(&op, 2, &dual_numbers()).unwrap();
    let mut images = a.images().clone();
    let k2 = key(op.palette(), 2);
    let m = images.get_mut(&(cprop::Color(0), k2)).unwrap();
    m.set(0, 1, m.get(0, 1) + q(1));
    let bad = OperadAlgebra::new(&op, a.family().clone(), images).unwrap();
    let report = algebra_round_trip(&op, &bad, 2, 200).unwrap();
    assert!(!report.is_identity());
    assert!(!report.algebra_failures.is_empty());
}

#[test]
fn endomorphism_prop_forgets_to_its_operad() {
    let mut r = rng(2);
    let pal = palette(&["a", "b"]);
    let op = samples::endo_operad(&mut r, &pal, 2, 2);
    let family = {
        // rebuild the same family from the component dimensions
        let da = (op.dim(cprop::Color(0), &prof(&pal, "a").orbit_key()) as f64).sqrt() as usize;
        let db = (op.dim(cprop::Color(1), &prof(&pal, "b").orbit_key()) as f64).sqrt() as usize;
        cprop::endo::ColoredFamily::new(&pal, vec![cprop::ChainComplex::concentrated(da), cprop::ChainComplex::concentrated(db)]).unwrap()
    };
    let again = forget_to_operad(&EndoProp::new(family).unwrap(), 2).unwrap();
    assert_eq!(again, op);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_prop_action_is_a_groupoid_action(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let op = ColoredOperad::trivial(&palette(&["a", "b"]), 3).unwrap();
        let p = prop_from_operad(&op, 2).unwrap();
        let pal = op.palette().clone();
        let dl = r.gen_range(1..=2);
        let d = samples::profile(&mut r, &pal, dl);
        let cl = r.gen_range(dl..=3);
        let c = samples::profile(&mut r, &pal, cl);
        let x = random_element(&mut r, &p, &d, &c);
        let (s1, t1) = (samples::permutation(&mut r, d.len()), samples::permutation(&mut r, c.len()));
        let (s2, t2) = (samples::permutation(&mut r, d.len()), samples::permutation(&mut r, c.len()));
        let once = p.act(&d, &c, &s1, &t1, &x).unwrap();
        let twice = p.act(&d.left(&s1), &c.right(&t1), &s2, &t2, &once).unwrap();
        prop_assert_eq!(twice, p.act(&d, &c, &s2.compose(&s1), &t1.compose(&t2), &x).unwrap());
        let back = p.act(&d.left(&s1), &c.right(&t1), &s1.inverse(), &t1.inverse(), &once).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn monomial_expansion_inverts_encoding(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let op = ColoredOperad::associative(3).unwrap();
        let p = prop_from_operad(&op, 3).unwrap();
        let pal = op.palette().clone();
        let m = r.gen_range(1..=3);
        let n = r.gen_range(m..=3);
        let c = |k| Profile::from_names(&pal, &vec!["c"; k]).unwrap();
        let x = random_element(&mut r, &p, &c(m), &c(n));
        let mut acc = vec![Q::zero(); x.len()];
        for (coef, mono) in p.monomials(&c(m), &c(n), &x) {
            let (_, _, v) = p.encode(&mono).unwrap();
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b * &coef;
            }
        }
        prop_assert_eq!(acc, x);
    }
}
