mod common;

use common::*;
use cprop::bimodule::{box_dot, box_dot_all, box_h, box_v, change_colors, tensor_over_sigma, ColorMap, Direction};
use cprop::profile::{Color, Permutation, Profile};
use cprop::rational::{q, Q};
use cprop::{samples, ColoredBimodule, Component, Matrix};
use num_traits::One;
use rand::Rng;

/// Coinvariants of `X ⊗ Y` computed on total spaces with the whole group,
/// both as a quotient and as the rank of the averaging projector.
fn coinvariant_oracles(x: &Component, y: &Component) -> (usize, usize) {
    let key = x.in_key();
    let (nx, ny) = (x.dim(), y.dim());
    let right = right_closure(key, &total_right_gens(x), nx);
    let left = left_closure(key, &total_left_gens(y), ny);
    let group = brute_stabilizer(key.rep());
    assert_eq!(group.len(), right.len());
    let mut rows = Vec::new();
    let mut avg = Matrix::zeros(nx * ny, nx * ny);
    for g in &group {
        let rel = &right[g].kron(&Matrix::identity(ny)) - &Matrix::identity(nx).kron(&left[g]);
        rows.push(rel.transpose());
        let term = right[&g.inverse()].kron(&left[g]);
        avg = &avg + &term;
    }
    let stacked = Matrix::vstack(&rows.iter().collect::<Vec<_>>());
    let quotient_dim = nx * ny - stacked.rank();
    let avg = avg.scale(&(Q::one() / q(group.len() as i64)));
    (quotient_dim, avg.rank())
}

#[test]
fn coinvariants_match_full_group_oracles() {
    let p = palette(&["a"]);
    let mut r = rng(11);
    for trial in 0..60 {
        let k = r.gen_range(1..=3);
        let mid = key(&p, &"a".repeat(k));
        let out = key(&p, &"a".repeat(r.gen_range(1..=2)));
        let inp = key(&p, &"a".repeat(r.gen_range(1..=2)));
        let (x, y) = if trial % 3 == 0 {
            (samples::graded_component(&mut r, &out, &mid, 4), samples::graded_component(&mut r, &mid, &inp, 4))
        } else {
            (samples::component(&mut r, &out, &mid, 5), samples::component(&mut r, &mid, &inp, 5))
        };
        let t = tensor_over_sigma(&x, &y).unwrap();
        t.component.validate().unwrap();
        let (quot, avg) = coinvariant_oracles(&x, &y);
        assert_eq!(t.component.dim(), quot, "trial {trial}");
        assert_eq!(t.component.dim(), avg, "trial {trial}");
    }
}

#[test]
fn tensor_over_sigma_rejects_mismatched_middle() {
    let p = palette(&["a", "b"]);
    let x = Component::trivial(key(&p, "a"), key(&p, "a"), cprop::ChainComplex::unit());
    let y = Component::trivial(key(&p, "b"), key(&p, "a"), cprop::ChainComplex::unit());
    assert!(tensor_over_sigma(&x, &y).is_err());
}

#[test]
fn box_dot_dimension_law_against_coset_enumeration() {
    let p = palette(&["a", "b"]);
    let mut r = rng(12);
    for _ in 0..60 {
        let (l1, l2) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let (m1, m2) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let d1 = samples::profile(&mut r, &p, l1).orbit_key();
        let d2 = samples::profile(&mut r, &p, l2).orbit_key();
        let c1 = samples::profile(&mut r, &p, m1).orbit_key();
        let c2 = samples::profile(&mut r, &p, m2).orbit_key();
        let x = samples::component(&mut r, &d1, &c1, 3);
        let y = samples::component(&mut r, &d2, &c2, 3);
        let (z, _) = box_dot(&x, &y).unwrap();
        z.validate().unwrap();
        let index = |a: &Profile, b: &Profile| {
            let e = a.concat(b).unwrap();
            let (k, t) = e.canonicalize();
            let g = brute_stabilizer(k.rep());
            let h: Vec<Permutation> = brute_stabilizer(a)
                .iter()
                .flat_map(|ha| brute_stabilizer(b).into_iter().map(move |hb| ha.direct_sum(&hb)))
                .map(|h| t.inverse().compose(&h).compose(&t))
                .collect();
            coset_count(&g, &h)
        };
        let expected = index(d1.rep(), d2.rep()) * index(c1.rep(), c2.rep()) * x.dim() * y.dim();
        assert_eq!(z.dim(), expected);
    }
}

#[test]
fn box_dot_examples() {
    let p = palette(&["a", "b"]);
    let one = Component::trivial(key(&p, "a"), key(&p, "a"), cprop::ChainComplex::unit());
    assert_eq!(box_dot(&one, &one).unwrap().0.dim(), 4);
    let other = Component::trivial(key(&p, "b"), key(&p, "b"), cprop::ChainComplex::unit());
    assert_eq!(box_dot(&one, &other).unwrap().0.dim(), 1);
}

#[test]
fn action_matrices_satisfy_the_group_law() {
    let p = palette(&["a", "b"]);
    let mut r = rng(13);
    for _ in 0..8 {
        let d1 = samples::orbit_key(&mut r, &p, 2);
        let d2 = samples::orbit_key(&mut r, &p, 2);
        let c1 = samples::orbit_key(&mut r, &p, 2);
        let x = samples::component(&mut r, &d1, &c1, 2);
        let y = samples::component(&mut r, &d2, &c1, 1);
        let (z, _) = box_dot(&x, &y).unwrap();
        let g = z.out_key().stabilizer_elements();
        assert!(g.len() <= 48);
        for a in &g {
            for b in &g {
                assert_eq!(z.left_matrix(&a.compose(b)), &z.left_matrix(a) * &z.left_matrix(b));
            }
        }
        let g = z.in_key().stabilizer_elements();
        for a in &g {
            for b in &g {
                assert_eq!(z.right_matrix(&a.compose(b)), &z.right_matrix(b) * &z.right_matrix(a));
            }
        }
    }
}

#[test]
fn box_dot_is_associative_up_to_isomorphism() {
    let p = palette(&["a", "b"]);
    let mut r = rng(14);
    for trial in 0..25 {
        let keys: Vec<_> = (0..6).map(|_| samples::orbit_key(&mut r, &p, 1)).collect();
        let xs: Vec<Component> = (0..3).map(|i| samples::component(&mut r, &keys[2 * i], &keys[2 * i + 1], 1)).collect();
        let left = box_dot(&box_dot(&xs[0], &xs[1]).unwrap().0, &xs[2]).unwrap().0;
        let right = box_dot(&xs[0], &box_dot(&xs[1], &xs[2]).unwrap().0).unwrap().0;
        let flat = box_dot_all(&[&xs[0], &xs[1], &xs[2]]).unwrap().0;
        assert!(isomorphic(&left, &flat), "trial {trial}");
        assert!(isomorphic(&right, &flat), "trial {trial}");
    }
}

fn dims(b: &ColoredBimodule) -> Vec<((String, String), usize)> {
    b.components().map(|c| ((c.out_key().display(), c.in_key().display()), c.dim())).collect()
}

#[test]
fn box_v_associativity_dimensions() {
    let p = palette(&["a", "b"]);
    let mut r = rng(15);
    for _ in 0..15 {
        let ps: Vec<ColoredBimodule> = (0..3).map(|_| samples::bimodule(&mut r, &p, 2, 3, 3)).collect();
        let left = box_v(&box_v(&ps[0], &ps[1]).unwrap().bimodule, &ps[2]).unwrap().bimodule;
        let right = box_v(&ps[0], &box_v(&ps[1], &ps[2]).unwrap().bimodule).unwrap().bimodule;
        assert_eq!(dims(&left), dims(&right));
        for c in left.components() {
            let other = right.get(c.out_key(), c.in_key()).unwrap();
            assert!(isomorphic(c, other));
        }
    }
}

#[test]
fn box_h_symmetry_and_associativity_dimensions() {
    let p = palette(&["a", "b"]);
    let mut r = rng(16);
    for _ in 0..15 {
        let ps: Vec<ColoredBimodule> = (0..3).map(|_| samples::bimodule(&mut r, &p, 1, 2, 1)).collect();
        let pq = box_h(&ps[0], &ps[1]).unwrap().bimodule;
        let qp = box_h(&ps[1], &ps[0]).unwrap().bimodule;
        assert_eq!(dims(&pq), dims(&qp));
        let left = box_h(&pq, &ps[2]).unwrap().bimodule;
        let right = box_h(&ps[0], &box_h(&ps[1], &ps[2]).unwrap().bimodule).unwrap().bimodule;
        assert_eq!(dims(&left), dims(&right));
        for c in left.components() {
            assert!(isomorphic(c, right.get(c.out_key(), c.in_key()).unwrap()));
        }
    }
    let z = ColoredBimodule::new(&p);
    assert!(box_h(&ps_single(&p), &z).unwrap().bimodule.is_zero());
}

fn ps_single(p: &std::sync::Arc<cprop::Palette>) -> ColoredBimodule {
    let mut b = ColoredBimodule::new(p);
    b.insert(Component::trivial(key(p, "a"), key(p, "b"), cprop::ChainComplex::unit())).unwrap();
    b
}

#[test]
fn box_h_single_summand() {
    let p = palette(&["a", "b"]);
    let s = ps_single(&p);
    let h = box_h(&s, &s).unwrap().bimodule;
    assert_eq!(h.support(), vec![(key(&p, "aa"), key(&p, "bb"))]);
    assert_eq!(h.dim_at(&key(&p, "aa"), &key(&p, "bb")), 4);
}

#[test]
fn concrete_transport_is_functorial() {
    let p = palette(&["a", "b"]);
    let mut r = rng(17);
    for _ in 0..30 {
        let b = samples::bimodule(&mut r, &p, 3, 1, 3);
        let comp = b.components().next().unwrap();
        let d = comp.out_key().rep().left(&samples::permutation(&mut r, comp.out_key().len()));
        let c = comp.in_key().rep().right(&samples::permutation(&mut r, comp.in_key().len()));
        let (s1, t1) = (samples::permutation(&mut r, d.len()), samples::permutation(&mut r, c.len()));
        let (s2, t2) = (samples::permutation(&mut r, d.len()), samples::permutation(&mut r, c.len()));
        let at = b.component_at(&d, &c);
        let first = at.transport(&s1, &t1);
        let mid = b.component_at(&d.left(&s1), &c.right(&t1));
        let second = mid.transport(&s2, &t2);
        let both = at.transport(&s2.compose(&s1), &t1.compose(&t2));
        assert_eq!(second.compose(&first).unwrap(), both);
        let id = at.transport(&Permutation::identity(d.len()), &Permutation::identity(c.len()));
        assert!(id.total_matrix().is_identity());
    }
}

fn random_injection(r: &mut impl Rng, src: usize, tgt: usize) -> Vec<Color> {
    let mut pool: Vec<u16> = (0..tgt as u16).collect();
    let mut out = Vec::new();
    for _ in 0..src {
        let i = r.gen_range(0..pool.len());
        out.push(Color(pool.remove(i)));
    }
    out
}

#[test]
fn restriction_after_induction_along_injection_is_identity() {
    let src = palette(&["a", "b"]);
    let tgt = palette(&["u", "v", "w"]);
    let mut r = rng(18);
    for _ in 0..50 {
        let alpha = ColorMap::new(&src, &tgt, random_injection(&mut r, 2, 3)).unwrap();
        let b = samples::bimodule(&mut r, &src, 3, 3, 3);
        let induced = change_colors(&alpha, Direction::Induce, &b).unwrap();
        induced.validate().unwrap();
        let back = change_colors(&alpha, Direction::Restrict, &induced).unwrap();
        assert_eq!(back, b);
    }
}

#[test]
fn identity_color_map_is_identity_both_ways() {
    let p = palette(&["a", "b"]);
    let mut r = rng(19);
    let b = samples::bimodule(&mut r, &p, 3, 3, 3);
    let id = ColorMap::identity(&p);
    assert_eq!(change_colors(&id, Direction::Induce, &b).unwrap(), b);
    assert_eq!(change_colors(&id, Direction::Restrict, &b).unwrap(), b);
}

#[test]
fn collapsing_colors_sums_over_concrete_preimages() {
    let src = palette(&["a", "b"]);
    let tgt = palette(&["x"]);
    let alpha = ColorMap::new(&src, &tgt, vec![Color(0), Color(0)]).unwrap();
    let mut r = rng(20);
    for _ in 0..20 {
        let b = samples::bimodule(&mut r, &src, 3, 3, 3);
        let induced = change_colors(&alpha, Direction::Induce, &b).unwrap();
        induced.validate().unwrap();
        for c in induced.components() {
            // every concrete preimage pair (d; c) of the representatives contributes dim P(d; c)
            let mut expected = 0;
            for d in all_profiles(&src, c.out_key().len()) {
                for e in all_profiles(&src, c.in_key().len()) {
                    expected += b.dim_at(&d.orbit_key(), &e.orbit_key());
                }
            }
            assert_eq!(c.dim(), expected);
        }
    }
}

fn all_profiles(p: &std::sync::Arc<cprop::Palette>, len: usize) -> Vec<Profile> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Color>| (0..p.len() as u16).map(move |c| {
                let mut w = v.clone();
                w.push(Color(c));
                w
            }))
            .collect();
    }
    out.into_iter().map(|cs| Profile::new(p, cs).unwrap()).collect()
}

#[test]
fn restriction_reads_the_image_component() {
    let src = palette(&["a", "b"]);
    let tgt = palette(&["x"]);
    let alpha = ColorMap::new(&src, &tgt, vec![Color(0), Color(0)]).unwrap();
    let mut b = ColoredBimodule::new(&tgt);
    let sign = Matrix::from_i64(1, 1, &[-1]);
    b.insert(Component::from_matrices(key(&tgt, "xx"), key(&tgt, "x"), 1, vec![sign], vec![]).unwrap()).unwrap();
    let res = change_colors(&alpha, Direction::Restrict, &b).unwrap();
    // (a,a), (a,b), (b,b) over x, times a or b over x
    assert_eq!(res.support().len(), 6);
    let aa = res.get(&key(&src, "aa"), &key(&src, "a")).unwrap();
    assert_eq!(aa.left_generators()[0].total_matrix(), Matrix::from_i64(1, 1, &[-1]));
    assert!(res.get(&key(&src, "ab"), &key(&src, "a")).unwrap().left_generators().is_empty());
    let _ = q(0);
}
