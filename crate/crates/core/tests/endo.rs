mod common;

use common::{palette, prof, rng};
use cprop::chain::{symmetry, tensor_maps, ChainComplex};
use cprop::endo::{
    endo_component, endo_horizontal, endo_permute, endo_vertical, morphism_witness, permutation_iso, relative_endo_membership, ColoredFamily,
    EndoElement, FamilyMap,
};
use cprop::rational::{q, sign};
use cprop::{samples, Matrix, Permutation, Profile};
use rand::Rng;
use std::collections::BTreeMap;

fn random_profile(r: &mut impl Rng, f: &ColoredFamily, max_len: usize) -> Profile {
    let len = r.gen_range(1..=max_len);
    samples::profile(r, f.palette(), len)
}

fn parity(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

#[test]
fn hom_complex_squares_to_zero_and_counts_maps() {
    let mut r = rng(1);
    let p = palette(&["a", "b"]);
    for _ in 0..40 {
        let f = samples::family(&mut r, &p, 3, 2);
        let out = random_profile(&mut r, &f, 2);
        let input = random_profile(&mut r, &f, 2);
        let hom = endo_component(&f, &out, &input);
        let (x, y) = (f.tensor(&input), f.tensor(&out));
        for k in 0..hom.len() {
            let expected: usize = (0..x.len()).map(|j| x.dims()[j] * y.dim((j + k) as i64)).sum();
            assert_eq!(hom.dims()[k], expected);
        }
        for k in 2..hom.len() as i64 {
            assert!((&hom.d(k - 1) * &hom.d(k)).is_zero());
        }
    }
}

#[test]
fn hom_of_two_term_complex() {
    let p = palette(&["c"]);
    let x = ChainComplex::new(vec![1, 1], vec![Matrix::zeros(1, 1)]).unwrap();
    let f = ColoredFamily::new(&p, vec![x]).unwrap();
    let hom = endo_component(&f, &prof(&p, "c"), &prof(&p, "c"));
    assert_eq!(hom.dims(), &[2, 1]);
    // D(h) = d∘h + h∘d for the degree-1 map h of the disc
    let disc = ColoredFamily::new(&p, vec![ChainComplex::disc(1)]).unwrap();
    let hom = endo_component(&disc, &prof(&p, "c"), &prof(&p, "c"));
    assert_eq!(hom.d(1), Matrix::from_i64(2, 1, &[1, 1]));
}

#[test]
fn differential_is_a_derivation() {
    let mut r = rng(2);
    let p = palette(&["a", "b"]);
    for _ in 0..60 {
        let f = samples::family(&mut r, &p, 3, 2);
        let (a, b, c) = (random_profile(&mut r, &f, 2), random_profile(&mut r, &f, 2), random_profile(&mut r, &f, 2));
        let (kg, kh) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let g = samples::endo_element(&mut r, &f, &a, &b, kg);
        let h = samples::endo_element(&mut r, &f, &b, &c, kh);
        let dgh = endo_vertical(&g, &h).unwrap().differential();
        let rhs = endo_vertical(&g.differential(), &h).unwrap().add(&endo_vertical(&g, &h.differential()).unwrap().scale(&sign(parity(kg)))).unwrap();
        assert_eq!(dgh, rhs);
        let dgh = endo_horizontal(&f, &g, &h).unwrap().differential();
        let rhs = endo_horizontal(&f, &g.differential(), &h)
            .unwrap()
            .add(&endo_horizontal(&f, &g, &h.differential()).unwrap().scale(&sign(parity(kg))))
            .unwrap();
        assert_eq!(dgh, rhs);
        assert!(g.differential().differential().is_zero());
    }
}

#[test]
fn two_factor_tensor_matches_chain_tensor() {
    let mut r = rng(3);
    let p = palette(&["a", "b"]);
    for _ in 0..60 {
        let f = samples::family(&mut r, &p, 3, 2);
        let (a, b) = (prof(&p, "a"), prof(&p, "b"));
        let (kg, kh) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let g = samples::endo_element(&mut r, &f, &b, &a, kg);
        let h = samples::endo_element(&mut r, &f, &a, &b, kh);
        let ours = endo_horizontal(&f, &g, &h).unwrap();
        let theirs = tensor_maps(g.map(), h.map());
        assert_eq!(ours.map().blocks(), theirs.blocks());
        let ab = prof(&p, "ab");
        let swap = Permutation::from_one_line(&[2, 1]).unwrap();
        let s = permutation_iso(&f, &ab, &swap).unwrap();
        assert_eq!(s.blocks(), symmetry(f.get(ab.get(0)), f.get(ab.get(1))).blocks());
    }
}

#[test]
fn compositions_are_associative() {
    let mut r = rng(4);
    let p = palette(&["a", "b"]);
    for _ in 0..40 {
        let f = samples::family(&mut r, &p, 2, 2);
        let ps: Vec<Profile> = (0..4).map(|_| random_profile(&mut r, &f, 2)).collect();
        let ks: Vec<i64> = (0..3).map(|_| r.gen_range(-1..=1)).collect();
        let x = samples::endo_element(&mut r, &f, &ps[0], &ps[1], ks[0]);
        let y = samples::endo_element(&mut r, &f, &ps[1], &ps[2], ks[1]);
        let z = samples::endo_element(&mut r, &f, &ps[2], &ps[3], ks[2]);
        assert_eq!(
            endo_vertical(&endo_vertical(&x, &y).unwrap(), &z).unwrap(),
            endo_vertical(&x, &endo_vertical(&y, &z).unwrap()).unwrap()
        );
        assert_eq!(
            endo_horizontal(&f, &endo_horizontal(&f, &x, &y).unwrap(), &z).unwrap(),
            endo_horizontal(&f, &x, &endo_horizontal(&f, &y, &z).unwrap()).unwrap()
        );
    }
}

#[test]
fn interchange_with_koszul_sign() {
    let mut r = rng(5);
    let p = palette(&["a", "b"]);
    for _ in 0..60 {
        let f = samples::family(&mut r, &p, 2, 2);
        let ps: Vec<Profile> = (0..6).map(|_| random_profile(&mut r, &f, 2)).collect();
        let ks: Vec<i64> = (0..4).map(|_| r.gen_range(-1..=1)).collect();
        let f1 = samples::endo_element(&mut r, &f, &ps[0], &ps[1], ks[0]);
        let f2 = samples::endo_element(&mut r, &f, &ps[1], &ps[2], ks[1]);
        let g1 = samples::endo_element(&mut r, &f, &ps[3], &ps[4], ks[2]);
        let g2 = samples::endo_element(&mut r, &f, &ps[4], &ps[5], ks[3]);
        let lhs = endo_vertical(&endo_horizontal(&f, &f1, &g1).unwrap(), &endo_horizontal(&f, &f2, &g2).unwrap()).unwrap();
        let rhs = endo_horizontal(&f, &endo_vertical(&f1, &f2).unwrap(), &endo_vertical(&g1, &g2).unwrap()).unwrap();
        assert_eq!(lhs, rhs.scale(&sign(parity(ks[2]) && parity(ks[1]))));
    }
}

#[test]
fn group_actions_compose_and_commute() {
    let mut r = rng(6);
    let p = palette(&["a", "b"]);
    for _ in 0..60 {
        let f = samples::family(&mut r, &p, 2, 2);
        let (n, m) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let (out, input) = (samples::profile(&mut r, &p, n), samples::profile(&mut r, &p, m));
        let k = r.gen_range(-1..=1);
        let x = samples::endo_element(&mut r, &f, &out, &input, k);
        let (s1, s2) = (samples::permutation(&mut r, n), samples::permutation(&mut r, n));
        let (t1, t2) = (samples::permutation(&mut r, m), samples::permutation(&mut r, m));
        let id_n = Permutation::identity(n);
        let id_m = Permutation::identity(m);
        assert_eq!(endo_permute(&f, &id_n, &id_m, &x).unwrap(), x);
        let step = endo_permute(&f, &s1, &t1, &x).unwrap();
        let twice = endo_permute(&f, &s2, &t2, &step).unwrap();
        assert_eq!(twice, endo_permute(&f, &s2.compose(&s1), &t1.compose(&t2), &x).unwrap());
        let left_then_right = endo_permute(&f, &id_n, &t1, &endo_permute(&f, &s1, &id_m, &x).unwrap()).unwrap();
        assert_eq!(left_then_right, step);
    }
}

#[test]
fn compositions_are_equivariant() {
    let mut r = rng(7);
    let p = palette(&["a", "b"]);
    for _ in 0..40 {
        let f = samples::family(&mut r, &p, 2, 2);
        let lens: Vec<usize> = (0..4).map(|_| r.gen_range(1..=2)).collect();
        let ps: Vec<Profile> = lens.iter().map(|&l| samples::profile(&mut r, &p, l)).collect();
        let (kx, ky) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let x = samples::endo_element(&mut r, &f, &ps[0], &ps[1], kx);
        let y = samples::endo_element(&mut r, &f, &ps[2], &ps[3], ky);
        let perms: Vec<Permutation> = lens.iter().map(|&l| samples::permutation(&mut r, l)).collect();
        let lhs = endo_horizontal(&f, &endo_permute(&f, &perms[0], &perms[1], &x).unwrap(), &endo_permute(&f, &perms[2], &perms[3], &y).unwrap()).unwrap();
        let rhs = endo_permute(&f, &perms[0].direct_sum(&perms[2]), &perms[1].direct_sum(&perms[3]), &endo_horizontal(&f, &x, &y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);

        // (x·τ)∘z = x∘(τ·z)
        let z = samples::endo_element(&mut r, &f, &ps[1].right(&perms[1]), &ps[2], ky);
        let z_moved = endo_permute(&f, &perms[1], &Permutation::identity(lens[2]), &z).unwrap();
        let x_moved = endo_permute(&f, &Permutation::identity(lens[0]), &perms[1], &x).unwrap();
        assert_eq!(endo_vertical(&x_moved, &z).unwrap(), endo_vertical(&x, &z_moved).unwrap());
    }
}

#[test]
fn block_swap_commutes_horizontal_product() {
    let mut r = rng(8);
    let p = palette(&["a", "b"]);
    for _ in 0..40 {
        let f = samples::family(&mut r, &p, 2, 2);
        let ps: Vec<Profile> = (0..4).map(|_| random_profile(&mut r, &f, 2)).collect();
        let (kx, ky) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let x = samples::endo_element(&mut r, &f, &ps[0], &ps[1], kx);
        let y = samples::endo_element(&mut r, &f, &ps[2], &ps[3], ky);
        let block = |a: usize, b: usize| Permutation::new((0..a + b).map(|i| if i < a { i + b } else { i - a }).collect()).unwrap();
        let (no, ni) = (ps[0].len(), ps[1].len());
        let (mo, mi) = (ps[2].len(), ps[3].len());
        let lhs = endo_permute(&f, &block(no, mo), &Permutation::identity(ni + mi), &endo_horizontal(&f, &x, &y).unwrap()).unwrap();
        let rhs = endo_permute(&f, &Permutation::identity(mo + no), &block(ni, mi), &endo_horizontal(&f, &y, &x).unwrap()).unwrap();
        assert_eq!(lhs, rhs.scale(&sign(parity(kx) && parity(ky))));
    }
}

#[test]
fn degree_zero_horizontal_is_kronecker_on_concentrated_family() {
    let mut r = rng(9);
    let p = palette(&["a", "b"]);
    for _ in 0..30 {
        let f = ColoredFamily::new(&p, vec![ChainComplex::concentrated(r.gen_range(1..=2)), ChainComplex::concentrated(r.gen_range(1..=2))]).unwrap();
        let (a, b) = (prof(&p, "a"), prof(&p, "b"));
        let x = samples::endo_element(&mut r, &f, &a, &b, 0);
        let y = samples::endo_element(&mut r, &f, &b, &a, 0);
        let xy = endo_horizontal(&f, &x, &y).unwrap();
        assert_eq!(xy.map().block(0), x.map().block(0).kron(&y.map().block(0)));
    }
}

#[test]
fn relative_membership_and_witness() {
    let mut r = rng(10);
    let p = palette(&["c"]);
    let c1 = prof(&p, "c");
    let c2 = prof(&p, "cc");
    for _ in 0..20 {
        let x = ColoredFamily::new(&p, vec![samples::complex(&mut r, 3, 1)]).unwrap();
        let y = ColoredFamily::new(&p, vec![samples::complex(&mut r, 3, 1)]).unwrap();
        let map = samples::chain_map(&mut r, x.get(c1.get(0)), y.get(c1.get(0)));
        let fam = FamilyMap::new(x.clone(), y.clone(), vec![map]).unwrap();
        // identities always lie in E_f
        let ix = EndoElement::identity(&x, c2.clone());
        let iy = EndoElement::identity(&y, c2.clone());
        assert!(relative_endo_membership(&fam, &ix, &iy).unwrap().blocks().iter().all(Matrix::is_zero));
        // f ⊗ f commutes with the symmetry
        let swap = Permutation::from_one_line(&[2, 1]).unwrap();
        let sx = EndoElement::new(&x, c2.clone(), c2.clone(), permutation_iso(&x, &c2, &swap).unwrap()).unwrap();
        let sy = EndoElement::new(&y, c2.clone(), c2.clone(), permutation_iso(&y, &c2, &swap).unwrap()).unwrap();
        assert!(relative_endo_membership(&fam, &sx, &sy).unwrap().blocks().iter().all(Matrix::is_zero));
        let mut lx = BTreeMap::new();
        let mut ly = BTreeMap::new();
        lx.insert("s".to_string(), sx.clone());
        ly.insert("s".to_string(), sy.clone());
        assert!(morphism_witness(&fam, &lx, &ly).unwrap().is_ok());
        if !fam.get(c1.get(0)).blocks().iter().all(Matrix::is_zero) {
            lx.insert("t".to_string(), sx.scale(&q(2)));
            ly.insert("t".to_string(), sy);
            let failure = morphism_witness(&fam, &lx, &ly).unwrap().unwrap_err();
            assert_eq!(failure.generator, "t");
        }
    }
}
