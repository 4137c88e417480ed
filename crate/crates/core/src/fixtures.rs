//! Named example sets, maps and systems, plus seeded random generators for
//! property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::boxcat::CubeMorphism;
use crate::catalg::{FactorizationCategory, FiniteCategory, FiniteDiagram};
use crate::coeff::{local_system, system_from_generators, CoefficientSystem, SemiCubicalSystem, Variance};
use crate::cubset::{
    standard_cube, universal_from_semicubical, Cube, CubicalMap, GeneratorId, PresentedCubicalSet, SemiCubicalSet,
};
use crate::error::Result;
use crate::zlinalg::{unimodular_inverse, IntMatrix};

pub fn point() -> PresentedCubicalSet {
    standard_cube(0)
}

pub fn interval() -> PresentedCubicalSet {
    standard_cube(1)
}

pub fn two_points() -> PresentedCubicalSet {
    PresentedCubicalSet::from_keys(&[("p", vec![]), ("q", vec![])]).expect("valid")
}

pub fn circle_semi() -> SemiCubicalSet {
    SemiCubicalSet::from_names(&[("v", vec![]), ("e", vec![["v", "v"]])]).expect("valid")
}

pub fn circle() -> PresentedCubicalSet {
    universal_from_semicubical(&circle_semi())
}

pub fn torus_semi() -> SemiCubicalSet {
    SemiCubicalSet::from_names(&[
        ("v", vec![]),
        ("a", vec![["v", "v"]]),
        ("b", vec![["v", "v"]]),
        ("t", vec![["a", "a"], ["b", "b"]]),
    ])
    .expect("valid")
}

pub fn torus() -> PresentedCubicalSet {
    universal_from_semicubical(&torus_semi())
}

/// One square glued along `y, x` and `x, y`: `H_1 = ℤ ⊕ ℤ/2`.
pub fn twisted_square_semi() -> SemiCubicalSet {
    SemiCubicalSet::from_names(&[
        ("v", vec![]),
        ("x", vec![["v", "v"]]),
        ("y", vec![["v", "v"]]),
        ("a", vec![["y", "x"], ["x", "y"]]),
    ])
    .expect("valid")
}

pub fn twisted_square() -> PresentedCubicalSet {
    universal_from_semicubical(&twisted_square_semi())
}

/// The circle with monodromy `-1`.
pub fn monodromy_circle(variance: Variance, t: usize) -> CoefficientSystem {
    let m = |v: i64| IntMatrix::from_rows(&[vec![v]]);
    local_system(&circle(), t, 1, &[vec![vec![]], vec![vec![[m(1), m(-1)]]]], variance).expect("valid")
}

pub fn monodromy_circle_semi() -> SemiCubicalSystem {
    let m = |v: i64| IntMatrix::from_rows(&[vec![v]]);
    SemiCubicalSystem::new(
        circle_semi(),
        Variance::Contravariant,
        vec![vec![1], vec![1]],
        vec![vec![vec![]], vec![vec![[m(1), m(-1)]]]],
    )
    .expect("valid")
}

pub fn interval_collapse() -> CubicalMap {
    CubicalMap::to_point(interval())
}

pub fn two_points_to_point() -> CubicalMap {
    CubicalMap::to_point(two_points())
}

fn prefixed(prefix: &str, set: &PresentedCubicalSet) -> (Vec<Vec<String>>, Vec<Vec<Vec<[Cube; 2]>>>) {
    let names = (0..=set.top_dim())
        .map(|n| set.generator_names(n).iter().map(|s| format!("{prefix}{s}")).collect())
        .collect();
    let faces = (0..=set.top_dim())
        .map(|n| {
            (0..set.generator_count(n))
                .map(|index| {
                    let g = GeneratorId { dim: n, index };
                    (1..=n)
                        .map(|i| [false, true].map(|e| set.generator_face(g, i, e).clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    (names, faces)
}

/// `A ⊔ B` with generators renamed `l_*` and `r_*`.
pub fn disjoint_union(a: &PresentedCubicalSet, b: &PresentedCubicalSet) -> PresentedCubicalSet {
    let (mut names, mut faces) = prefixed("l_", a);
    let (bn, mut bf) = prefixed("r_", b);
    let top = a.top_dim().max(b.top_dim());
    names.resize(top + 1, Vec::new());
    faces.resize(top + 1, Vec::new());
    let count_a = |d: usize| if d <= a.top_dim() { a.generator_count(d) } else { 0 };
    for (n, fs) in bf.iter_mut().enumerate() {
        for c in fs.iter_mut().flatten().flatten() {
            c.generator.index += count_a(c.generator.dim);
        }
        names[n].extend(bn[n].iter().cloned());
        faces[n].append(fs);
    }
    PresentedCubicalSet::new(names, faces).expect("disjoint union is well formed")
}

/// `X ⊔ X -> X`.
pub fn fold_map(x: &PresentedCubicalSet) -> CubicalMap {
    let u = disjoint_union(x, x);
    let assignment = (0..=x.top_dim())
        .map(|n| {
            (0..2 * x.generator_count(n))
                .map(|k| Cube::generator(GeneratorId {
                    dim: n,
                    index: k % x.generator_count(n),
                }))
                .collect()
        })
        .collect();
    CubicalMap::new(u, x.clone(), assignment).expect("fold is well formed")
}

pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(r);
    for _ in 0..2 * r {
        let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(r);
        e.set(i, j, rng.gen_range(-2i64..=2).into());
        m = &e * &m;
    }
    let mut perm: Vec<usize> = (0..r).collect();
    perm.shuffle(rng);
    let mut p = IntMatrix::zeros(r, r);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, if rng.gen_bool(0.5) { 1 } else { -1 }.into());
    }
    &p * &m
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(-2i64..=2)).collect::<Vec<_>>();
    IntMatrix::from_i64(rows, cols, &data)
}

/// A small random semi-cubical set: up to three vertices, up to four edges
/// and up to two squares found by rejection sampling.
pub fn random_semicubical<R: Rng>(rng: &mut R) -> SemiCubicalSet {
    let nv = rng.gen_range(1..=3);
    let ne = rng.gen_range(1..=4);
    let names = vec![
        (0..nv).map(|k| format!("v{k}")).collect::<Vec<_>>(),
        (0..ne).map(|k| format!("e{k}")).collect(),
    ];
    let edges: Vec<Vec<[usize; 2]>> = (0..ne)
        .map(|_| vec![[rng.gen_range(0..nv), rng.gen_range(0..nv)]])
        .collect();
    let base = SemiCubicalSet::new(names.clone(), vec![vec![Vec::new(); nv], edges.clone()]).expect("graph");
    let mut squares = Vec::new();
    let wanted = rng.gen_range(0..=2);
    for _ in 0..40 {
        if squares.len() == wanted {
            break;
        }
        let f = vec![
            [rng.gen_range(0..ne), rng.gen_range(0..ne)],
            [rng.gen_range(0..ne), rng.gen_range(0..ne)],
        ];
        // ∂_1^α ∂_2^β = ∂_1^β ∂_1^α
        let ok = [false, true].iter().all(|&a| {
            [false, true]
                .iter()
                .all(|&b| base.face(1, f[1][b as usize], 1, a) == base.face(1, f[0][a as usize], 1, b))
        });
        if ok {
            squares.push(f);
        }
    }
    let mut all_names = names;
    let mut faces = vec![vec![Vec::new(); nv], edges];
    if !squares.is_empty() {
        all_names.push((0..squares.len()).map(|k| format!("s{k}")).collect());
        faces.push(squares);
    }
    SemiCubicalSet::new(all_names, faces).expect("rejection keeps rel1")
}

/// A random presented set: the universal set of a random semi-cubical set,
/// sometimes with an extra square whose first pair of faces is degenerate.
pub fn random_presented<R: Rng>(rng: &mut R) -> PresentedCubicalSet {
    let s = random_semicubical(rng);
    let u = universal_from_semicubical(&s);
    if !rng.gen_bool(0.4) {
        return u;
    }
    let e = GeneratorId {
        dim: 1,
        index: rng.gen_range(0..u.generator_count(1)),
    };
    let deg = |eps| {
        let v = u.generator_face(e, 1, eps).generator;
        Cube {
            epi: CubeMorphism::epi_from_deleted(1, &[1]).expect("epi"),
            generator: v,
        }
    };
    let (mut names, mut faces) = prefixed("", &u);
    if names.len() < 3 {
        names.push(Vec::new());
        faces.push(Vec::new());
    }
    names[2].push("c".into());
    faces[2].push(vec![[deg(false), deg(true)], [Cube::generator(e), Cube::generator(e)]]);
    PresentedCubicalSet::new(names, faces).expect("collapsed cylinder is well formed")
}

/// Identifies vertices of a semi-cubical set along a random partition and
/// returns the induced map of universal sets.
pub fn random_quotient_map<R: Rng>(rng: &mut R, s: &SemiCubicalSet) -> CubicalMap {
    let nv = s.count(0);
    let classes: Vec<usize> = (0..nv).map(|v| rng.gen_range(0..=v)).collect();
    // representatives are the smallest member of each class
    let mut rep = vec![0; nv];
    for v in 0..nv {
        rep[v] = if classes[v] == v { v } else { rep[classes[v]] };
    }
    let kept: Vec<usize> = (0..nv).filter(|&v| rep[v] == v).collect();
    let new_index = |v: usize| kept.iter().position(|&k| k == rep[v]).expect("kept");
    let mut names = s.names().to_vec();
    names[0] = kept.iter().map(|&v| s.name(0, v).to_string()).collect();
    let faces = (0..=s.top_dim())
        .map(|n| {
            if n == 0 {
                return vec![Vec::new(); kept.len()];
            }
            (0..s.count(n))
                .map(|x| {
                    (1..=n)
                        .map(|i| {
                            [false, true].map(|e| {
                                let f = s.face(n, x, i, e);
                                if n == 1 {
                                    new_index(f)
                                } else {
                                    f
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let quotient = SemiCubicalSet::new(names, faces).expect("quotient keeps rel1");
    let (src, tgt) = (universal_from_semicubical(s), universal_from_semicubical(&quotient));
    let assignment = (0..=s.top_dim())
        .map(|n| {
            (0..s.count(n))
                .map(|x| Cube::generator(GeneratorId {
                    dim: n,
                    index: if n == 0 { new_index(x) } else { x },
                }))
                .collect()
        })
        .collect();
    CubicalMap::new(src, tgt, assignment).expect("quotient map is well formed")
}

/// A random map among vertex quotients, collapses to a point and folds.
pub fn random_map<R: Rng>(rng: &mut R) -> CubicalMap {
    match rng.gen_range(0..3) {
        0 => {
            let s = random_semicubical(rng);
            random_quotient_map(rng, &s)
        }
        1 => CubicalMap::to_point(random_presented(rng)),
        _ => fold_map(&random_presented(rng)),
    }
}

/// A random local system of rank `1..=max_rank`. On sets of dimension at
/// most one every face matrix is an independent unimodular matrix; with
/// squares the matrices are `G_h G_g^{-1}` (covariant: `G_g G_h^{-1}`) for
/// random unimodular `G`.
pub fn random_local_system<R: Rng>(
    rng: &mut R,
    set: &PresentedCubicalSet,
    t: usize,
    max_rank: usize,
    variance: Variance,
) -> CoefficientSystem {
    let r = rng.gen_range(1..=max_rank);
    let flat = set.top_dim() <= 1;
    let gauge: Vec<Vec<IntMatrix>> = (0..=set.top_dim())
        .map(|n| (0..set.generator_count(n)).map(|_| random_unimodular(rng, r)).collect())
        .collect();
    let faces: Vec<Vec<Vec<[IntMatrix; 2]>>> = (0..=set.top_dim())
        .map(|n| {
            (0..set.generator_count(n))
                .map(|index| {
                    let g = GeneratorId { dim: n, index };
                    (1..=n)
                        .map(|i| {
                            [false, true].map(|e| {
                                if flat {
                                    return random_unimodular(rng, r);
                                }
                                let h = set.generator_face(g, i, e).generator;
                                let (g, h) = (&gauge[n][index], &gauge[h.dim][h.index]);
                                match variance {
                                    Variance::Contravariant => h * &unimodular_inverse(g).expect("unimodular"),
                                    Variance::Covariant => g * &unimodular_inverse(h).expect("unimodular"),
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    local_system(set, t, r, &faces, variance).expect("random local system is valid")
}

/// A random system with arbitrary integer matrices on sets of dimension at
/// most one, and a random local system otherwise.
pub fn random_system<R: Rng>(rng: &mut R, set: &PresentedCubicalSet, t: usize, variance: Variance) -> CoefficientSystem {
    if set.top_dim() > 1 {
        return random_local_system(rng, set, t, 2, variance);
    }
    let ranks: Vec<Vec<usize>> = (0..=set.top_dim())
        .map(|n| (0..set.generator_count(n)).map(|_| rng.gen_range(0..=2)).collect())
        .collect();
    let faces: Vec<Vec<Vec<[IntMatrix; 2]>>> = (0..=set.top_dim())
        .map(|n| {
            (0..set.generator_count(n))
                .map(|index| {
                    let g = GeneratorId { dim: n, index };
                    (1..=n)
                        .map(|i| {
                            [false, true].map(|e| {
                                let h = set.generator_face(g, i, e).generator;
                                let (a, b) = (ranks[n][index], ranks[h.dim][h.index]);
                                match variance {
                                    Variance::Contravariant => random_matrix(rng, b, a),
                                    Variance::Covariant => random_matrix(rng, a, b),
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    system_from_generators(set, t, &ranks, &faces, variance).expect("graph systems are always functorial")
}

/// A random system on a semi-cubical set: arbitrary matrices on graphs, a
/// gauge-trivial rank-`r` system when squares are present.
pub fn random_semicubical_system<R: Rng>(rng: &mut R, s: &SemiCubicalSet) -> SemiCubicalSystem {
    let top = s.top_dim();
    let ranks: Vec<Vec<usize>> = if top <= 1 {
        (0..=top).map(|n| (0..s.count(n)).map(|_| rng.gen_range(0..=2)).collect()).collect()
    } else {
        let r = rng.gen_range(1..=2);
        (0..=top).map(|n| vec![r; s.count(n)]).collect()
    };
    let gauge: Vec<Vec<IntMatrix>> = (0..=top)
        .map(|n| (0..s.count(n)).map(|x| random_unimodular(rng, ranks[n][x])).collect())
        .collect();
    let faces = (0..=top)
        .map(|n| {
            (0..s.count(n))
                .map(|x| {
                    (1..=n)
                        .map(|i| {
                            [false, true].map(|e| {
                                let y = s.face(n, x, i, e);
                                if top <= 1 {
                                    random_matrix(rng, ranks[n - 1][y], ranks[n][x])
                                } else {
                                    let inv = unimodular_inverse(&gauge[n][x]).expect("unimodular");
                                    &gauge[n - 1][y] * &inv
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    SemiCubicalSystem::new(s.clone(), Variance::Contravariant, ranks, faces).expect("valid shapes")
}

/// Rank-one diagram with the given scalar per named morphism; identities
/// act by `1`.
pub fn scalar_diagram(category: FiniteCategory, weights: &[(&str, i64)]) -> Result<FiniteDiagram> {
    let named: Vec<(&str, IntMatrix)> = weights
        .iter()
        .map(|&(n, w)| (n, IntMatrix::from_rows(&[vec![w]])))
        .collect();
    let ranks = vec![1; category.object_count()];
    FiniteDiagram::from_named(category, ranks, &named)
}

/// Multiplicative weights on the square poset: `t∘l = r∘b = d` all weigh 6.
pub const SQUARE_WEIGHTS: [(&str, i64); 5] = [("l", 2), ("t", 3), ("b", 6), ("r", 1), ("d", 6)];

/// Rank-one natural system `(u0, u1) ↦ w(u0)·w(u1)` for a multiplicative
/// weight `w` on the morphisms of `𝒞`, given by name (unnamed morphisms
/// weigh 1).
pub fn weighted_natural_system(c: &FiniteCategory, fc: &FactorizationCategory, weights: &[(&str, i64)]) -> FiniteDiagram {
    let w = |m: usize| {
        weights
            .iter()
            .find(|(n, _)| *n == c.morphism(m).name)
            .map_or(1, |p| p.1)
    };
    let matrices = fc
        .pairs
        .iter()
        .map(|&(u0, u1)| IntMatrix::from_rows(&[vec![w(u0) * w(u1)]]))
        .collect();
    let ranks = vec![1; fc.category.object_count()];
    FiniteDiagram::new(fc.category.clone(), ranks, matrices).expect("weights are multiplicative")
}

/// On `𝔉[1]`: `ℤ` at `id_0`, `ℤ²` at `a`, `ℤ` at `id_1`.
pub fn arrow_natural_system(fc: &FactorizationCategory) -> Result<FiniteDiagram> {
    let c = &fc.category;
    let rank = |name: &str| if name == "a" { 2 } else { 1 };
    let ranks = c.objects().iter().map(|o| rank(o)).collect();
    FiniteDiagram::from_named(
        c.clone(),
        ranks,
        &[
            ("(id_0,a):id_0->a", IntMatrix::from_rows(&[vec![1], vec![0]])),
            ("(a,id_1):id_1->a", IntMatrix::from_rows(&[vec![1], vec![2]])),
        ],
    )
}

/// On `[1]^op`: `ℤ²` at `0`, `ℤ` at `1`, `a ↦ (1, 2)ᵀ`.
pub fn arrow_op_diagram(c: &FiniteCategory) -> Result<FiniteDiagram> {
    FiniteDiagram::from_named(c.opposite(), vec![2, 1], &[("a", IntMatrix::from_rows(&[vec![1], vec![2]]))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn named_fixtures_validate() {
        for x in [point(), interval(), two_points(), circle(), torus(), twisted_square()] {
            assert!(x.validate().is_valid());
        }
        for m in [interval_collapse(), two_points_to_point(), fold_map(&torus())] {
            assert!(m.validate().is_valid());
        }
        assert!(monodromy_circle(Variance::Covariant, 2).validate().is_valid());
        let u = disjoint_union(&circle(), &interval());
        assert_eq!(u.generator_count(0), 3);
        assert!(u.find("r_[x1]").is_some());
        assert!(u.validate().is_valid());
    }

    #[test]
    fn category_fixtures_are_functorial() {
        use crate::catalg::{arrow_category, factorization_category, square_poset};
        let sq = square_poset();
        assert!(scalar_diagram(sq.opposite(), &SQUARE_WEIGHTS).is_ok());
        let fc = factorization_category(&sq).unwrap();
        assert!(weighted_natural_system(&sq, &fc, &SQUARE_WEIGHTS).validate().is_valid());
        let a = arrow_category();
        assert!(arrow_op_diagram(&a).is_ok());
        assert!(arrow_natural_system(&factorization_category(&a).unwrap()).is_ok());
    }

    #[test]
    fn random_fixtures_validate() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_semicubical(&mut rng);
            assert!(s.validate().is_valid());
            assert!(random_semicubical_system(&mut rng, &s).validate().is_valid());
            let x = random_presented(&mut rng);
            assert!(x.validate().is_valid());
            assert!(random_local_system(&mut rng, &x, 2, 2, Variance::Contravariant).is_local());
            assert!(random_system(&mut rng, &x, 2, Variance::Covariant).validate().is_valid());
            assert!(random_map(&mut rng).validate().is_valid());
        }
    }

    #[test]
    fn unimodular_is_unimodular() {
        let mut rng = StdRng::seed_from_u64(1);
        for r in 0..4 {
            assert!(crate::zlinalg::is_unimodular(&random_unimodular(&mut rng, r)));
        }
    }
}
