use cprop::profile::{factorial, orbit_members, Color, Palette, Permutation, Profile, Side};
use proptest::prelude::*;

fn palette() -> std::sync::Arc<Palette> {
    Palette::new(["a", "b", "c"]).unwrap()
}

fn arb_profile(max_len: usize) -> impl Strategy<Value = Profile> {
    prop::collection::vec(0u16..3, 1..=max_len).prop_map(|cs| Profile::new(&palette(), cs.into_iter().map(Color).collect()).unwrap())
}

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn orbit_times_stabilizer_is_factorial(p in arb_profile(6)) {
        let key = p.orbit_key();
        let members = orbit_members(&key);
        prop_assert_eq!(members.len() as u128, key.orbit_object_count());
        prop_assert_eq!(key.orbit_object_count() * key.stabilizer_order(), factorial(p.len()));
        let brute = Permutation::all(p.len()).into_iter().filter(|g| key.rep().left(g) == *key.rep()).count();
        prop_assert_eq!(brute as u128, key.stabilizer_order());
    }

    #[test]
    fn canonical_form_is_constant_on_orbits(
        (p, g) in arb_profile(6).prop_flat_map(|p| { let n = p.len(); (Just(p), arb_perm(n)) })
    ) {
        let (k1, t1) = p.canonicalize();
        let moved = p.apply(&g, Side::Left).unwrap();
        let (k2, t2) = moved.canonicalize();
        prop_assert_eq!(&k1, &k2);
        prop_assert_eq!(k1.rep().left(&t1), p.clone());
        prop_assert_eq!(k2.rep().left(&t2), moved);
        prop_assert_eq!(p.right(&g).orbit_key(), k1);
    }

    #[test]
    fn descent_word_spells_the_permutation(g in (1usize..7).prop_flat_map(arb_perm)) {
        let n = g.len();
        let word = g.descent_word();
        // perm = s_{i_k} ⋯ s_{i_1}
        let built = word.iter().fold(Permutation::identity(n), |acc, &i| Permutation::adjacent(n, i).compose(&acc));
        prop_assert_eq!(built, g.clone());
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| g.apply(i) > g.apply(j)).count();
        prop_assert_eq!(word.len(), inversions);
        prop_assert_eq!(g.is_odd(), inversions % 2 == 1);
    }

    #[test]
    fn actions_are_actions(
        (p, g, h) in arb_profile(5).prop_flat_map(|p| { let n = p.len(); (Just(p), arb_perm(n), arb_perm(n)) })
    ) {
        prop_assert_eq!(p.left(&g.compose(&h)), p.left(&h).left(&g));
        prop_assert_eq!(p.right(&g.compose(&h)), p.right(&g).right(&h));
        prop_assert_eq!(g.compose(&g.inverse()), Permutation::identity(p.len()));
    }

    #[test]
    fn stabilizer_elements_match_brute_force(p in arb_profile(5)) {
        let key = p.orbit_key();
        let mut brute: Vec<Permutation> = Permutation::all(p.len()).into_iter().filter(|g| key.rep().left(g) == *key.rep()).collect();
        brute.sort();
        prop_assert_eq!(key.stabilizer_elements(), brute);
        for g in key.stabilizer_generators() {
            prop_assert!(key.in_stabilizer(&g));
        }
    }
}

#[test]
fn one_line_notation_is_one_based() {
    let g = Permutation::from_one_line(&[2, 3, 1]).unwrap();
    assert_eq!(g.apply(0), 1);
    assert_eq!(g.one_line(), vec![2, 3, 1]);
    assert!(Permutation::from_one_line(&[1, 1]).is_err());
    assert!(Permutation::from_one_line(&[0, 1]).is_err());
}

#[test]
fn profiles_reject_foreign_colors() {
    let p = palette();
    assert!(Profile::from_names(&p, &["a", "z"]).is_err());
    assert!(Palette::new(["a", "a"]).is_err());
    assert!(Palette::new(Vec::<String>::new()).is_err());
}
