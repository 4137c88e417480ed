use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use cubical::boxcat::{epi_mono_factorize, hom_set, CubeMorphism};
use cubical::catalg::{chains, square_poset, z2_category};
use cubical::coeff::{constant_system, direct_image, pullback_system, Variance};
use cubical::cubset::{Cube, CubicalMap, GeneratorId};
use cubical::fixtures;
use cubical::homcalc::homology;
use cubical::zlinalg::{
    homology_of_complex, is_unimodular, kernel_basis, rank, smith_normal_form, unimodular_inverse,
    FreeChainComplex, IntMatrix,
};

fn morphism(m: usize, n: usize) -> impl Strategy<Value = CubeMorphism> {
    let all = hom_set(m, n);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn composable() -> impl Strategy<Value = (CubeMorphism, CubeMorphism, CubeMorphism)> {
    (0..=3usize, 0..=3usize, 0..=3usize, 0..=3usize).prop_flat_map(|(a, b, c, d)| {
        (morphism(a, b), morphism(b, c), morphism(c, d))
    })
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (0..=6usize, 0..=6usize).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |d| IntMatrix::from_i64(r, c, &d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative((f, g, h) in composable()) {
        let left = h.after(&g).unwrap().after(&f).unwrap();
        let right = h.after(&g.after(&f).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn factorization_reconstructs(f in (0..=4usize, 0..=4usize).prop_flat_map(|(m, n)| morphism(m, n))) {
        let fact = epi_mono_factorize(&f);
        prop_assert!(fact.epi.is_epi());
        prop_assert!(fact.mono.is_mono());
        prop_assert_eq!(fact.mono.after(&fact.epi).unwrap(), f.clone());
        prop_assert_eq!(f.canonical_form().compose().unwrap(), f);
    }

    #[test]
    fn snf_decomposition(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        prop_assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.shape().0));
        prop_assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.shape().1));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], 0.into());
        }
    }

    #[test]
    fn rank_plus_nullity(a in matrix()) {
        let k = kernel_basis(&a);
        prop_assert_eq!(rank(&a) + k.shape().1, a.shape().1);
        prop_assert!((&a * &k).is_zero());
    }

    #[test]
    fn homology_ignores_change_of_basis(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = fixtures::random_presented(&mut rng);
        let f = fixtures::random_system(&mut rng, &x, 2, Variance::Contravariant);
        let c = cubical::homcalc::unnormalized_complex(&f).unwrap().complex;
        let g: Vec<IntMatrix> = c.ranks().iter().map(|&r| fixtures::random_unimodular(&mut rng, r)).collect();
        let moved = FreeChainComplex::new(
            c.ranks().to_vec(),
            (1..c.ranks().len())
                .map(|n| &(&g[n - 1] * c.boundary(n)) * &unimodular_inverse(&g[n]).unwrap())
                .collect(),
        )
        .unwrap();
        prop_assert_eq!(homology_of_complex(&moved).unwrap(), homology_of_complex(&c).unwrap());
    }

    #[test]
    fn action_respects_composition(seed in any::<u64>(), a in 0..=2usize, b in 0..=2usize) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = fixtures::random_presented(&mut rng);
        let n = 2;
        let cubes = x.cubes(n);
        let c = &cubes[rand::Rng::gen_range(&mut rng, 0..cubes.len())];
        let alpha = hom_set(b, n);
        let beta = hom_set(a, b);
        let al = &alpha[rand::Rng::gen_range(&mut rng, 0..alpha.len())];
        let be = &beta[rand::Rng::gen_range(&mut rng, 0..beta.len())];
        // X(α∘β) = X(β) X(α)
        let lhs = x.apply_morphism(&al.after(be).unwrap(), c).unwrap();
        let rhs = x.apply_morphism(be, &x.apply_morphism(al, c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_systems_are_functorial(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = fixtures::random_presented(&mut rng);
        for v in [Variance::Contravariant, Variance::Covariant] {
            let f = fixtures::random_system(&mut rng, &x, 2, v);
            prop_assert!(f.validate().is_valid());
            prop_assert!(f.transposed().validate().is_valid());
        }
    }

    #[test]
    fn identity_transport_is_identity(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = fixtures::random_presented(&mut rng);
        let f = fixtures::random_system(&mut rng, &x, 2, Variance::Contravariant);
        let id = CubicalMap::identity(x);
        prop_assert_eq!(&pullback_system(&id, &f).unwrap(), &f);
        prop_assert_eq!(&direct_image(&id, &f).unwrap(), &f);
    }

    #[test]
    fn direct_image_sums_ranks(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let map = fixtures::random_map(&mut rng);
        let f = fixtures::random_system(&mut rng, map.source(), 2, Variance::Contravariant);
        let pushed = direct_image(&map, &f).unwrap();
        prop_assert!(pushed.validate().is_valid());
        for n in 0..=2 {
            prop_assert_eq!(pushed.total_rank(n), f.total_rank(n));
        }
    }

    #[test]
    fn pullback_to_point_is_constant(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = fixtures::random_presented(&mut rng);
        let map = CubicalMap::to_point(x.clone());
        let base = fixtures::point().expand(2);
        let f = constant_system(&base, 2, Variance::Covariant);
        let pulled = pullback_system(&map, &f).unwrap();
        prop_assert_eq!(pulled, constant_system(&x.expand(2), 2, Variance::Covariant));
    }

    #[test]
    fn bar_faces_are_simplicial(k in 0..64usize) {
        for c in [square_poset(), z2_category()] {
            let ch = chains(&c, 3);
            let x = &ch[3][k % ch[3].len()];
            let d = |y: &cubical::catalg::Chain, i: usize| cubical::catalg::chain_face(&c, y, i);
            for j in 1..=3 {
                for i in 0..j {
                    prop_assert_eq!(d(&d(x, j), i), d(&d(x, i), j - 1));
                }
            }
        }
    }
}

#[test]
fn disjoint_union_splits_homology() {
    let x = fixtures::disjoint_union(&fixtures::torus(), &fixtures::circle());
    let h = homology(&constant_system(&x.expand(3), 1, Variance::Contravariant), 2).unwrap();
    let betti: Vec<usize> = h.iter().map(|g| g.betti).collect();
    assert_eq!(betti, vec![2, 3, 1]);
    let v = x.find("r_v").unwrap();
    assert_eq!(v, GeneratorId { dim: 0, index: 1 });
    assert!(!Cube::generator(v).is_degenerate());
}
