use crate::boxcat::{face, CubeMorphism, Token};
use crate::cubset::{universal_from_semicubical, GeneratorId, PresentedCubicalSet, SemiCubicalSet};
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::zlinalg::{is_unimodular, IntMatrix};

use super::{check_shape, CoefficientSystem, Variance};

/// Matrices on generators, in contravariant orientation `F(g) -> F(∂g)`.
struct GeneratorData<'a> {
    set: &'a PresentedCubicalSet,
    ranks: &'a [Vec<usize>],
    faces: Vec<Vec<Vec<[IntMatrix; 2]>>>,
}

impl GeneratorData<'_> {
    /// `F` on the morphism of `□/X` from `g` to `X(μ)(g)` for a mono `μ`:
    /// peel the last constant coordinate, as the set action does.
    fn psi(&self, mono: &CubeMorphism, g: GeneratorId) -> IntMatrix {
        let word = mono.assignment();
        let Some(pos) = word.iter().rposition(|t| !matches!(t, Token::Var(_))) else {
            return IntMatrix::identity(self.ranks[g.dim][g.index]);
        };
        let eps = matches!(word[pos], Token::One);
        let mut rest = word.to_vec();
        rest.remove(pos);
        let rest = CubeMorphism::new(mono.source_dim(), rest).expect("sub-word of a mono");
        let f = self.set.generator_face(g, pos + 1, eps);
        let fact = f.epi.after(&rest).expect("dimensions agree").factorize();
        &self.psi(&fact.mono, f.generator) * &self.faces[g.dim][g.index][pos][eps as usize]
    }
}

/// The system on `expand(X, t)` whose value on `X(γ)(g)` is `F(g)`, with
/// identity degeneracy matrices and face matrices composed from the given
/// generator face matrices. For covariant systems the matrices are read as
/// `F(∂g) -> F(g)`.
pub fn system_from_generators(
    set: &PresentedCubicalSet,
    t: usize,
    ranks: &[Vec<usize>],
    faces: &[Vec<Vec<[IntMatrix; 2]>>],
    variance: Variance,
) -> Result<CoefficientSystem> {
    let top = set.top_dim();
    if ranks.len() != top + 1 || faces.len() != top + 1 {
        return Err(Error::Invalid("generator data does not cover all dimensions".into()));
    }
    for g in set.generators() {
        if ranks[g.dim].len() != set.generator_count(g.dim) || faces[g.dim].len() != ranks[g.dim].len() {
            return Err(Error::Invalid(format!("generator data size mismatch in dim {}", g.dim)));
        }
        let gf = &faces[g.dim][g.index];
        if gf.len() != g.dim {
            return Err(Error::Invalid(format!("`{}` needs {} face pairs", set.name(g), g.dim)));
        }
        for i in 1..=g.dim {
            for eps in [false, true] {
                let h = set.generator_face(g, i, eps).generator;
                let (from, to) = (ranks[g.dim][g.index], ranks[h.dim][h.index]);
                let (r, c) = match variance {
                    Variance::Contravariant => (to, from),
                    Variance::Covariant => (from, to),
                };
                check_shape(&gf[i - 1][eps as usize], r, c, || {
                    format!("face ({i},{}) of `{}`", eps as u8, set.name(g))
                })?;
            }
        }
    }
    let contra_faces = match variance {
        Variance::Contravariant => faces.to_vec(),
        Variance::Covariant => faces
            .iter()
            .map(|fs| {
                fs.iter()
                    .map(|gf| gf.iter().map(|p| [p[0].transpose(), p[1].transpose()]).collect())
                    .collect()
            })
            .collect(),
    };
    let data = GeneratorData {
        set,
        ranks,
        faces: contra_faces,
    };
    let table = set.expand(t);
    let cubes: Vec<Vec<_>> = (0..=t)
        .map(|n| {
            table
                .keys(n)
                .iter()
                .map(|k| set.cube_from_key(k).expect("expanded key"))
                .collect()
        })
        .collect();
    let sys_ranks: Vec<Vec<usize>> = cubes
        .iter()
        .map(|cs| cs.iter().map(|c| ranks[c.generator.dim][c.generator.index]).collect())
        .collect();
    let sys_faces = cubes
        .iter()
        .enumerate()
        .map(|(n, cs)| {
            crate::par::map(cs, |c| {
                (1..=n)
                    .map(|i| {
                        [false, true].map(|eps| {
                            let composite = c.epi.after(&face(n, i, eps).expect("valid")).expect("valid");
                            data.psi(&composite.factorize().mono, c.generator)
                        })
                    })
                    .collect()
            })
        })
        .collect();
    let sys_degens = (0..=t)
        .map(|n| {
            (0..table.count(n))
                .map(|c| {
                    let ds = if n < t { n + 1 } else { 0 };
                    vec![IntMatrix::identity(sys_ranks[n][c]); ds]
                })
                .collect()
        })
        .collect();
    let sys = CoefficientSystem::new(table, Variance::Contravariant, sys_ranks, sys_faces, sys_degens)?;
    Ok(match variance {
        Variance::Contravariant => sys,
        Variance::Covariant => sys.transposed(),
    })
}

/// Local system of rank `r` given by unimodular face matrices on generators.
pub fn local_system(
    set: &PresentedCubicalSet,
    t: usize,
    r: usize,
    faces: &[Vec<Vec<[IntMatrix; 2]>>],
    variance: Variance,
) -> Result<CoefficientSystem> {
    for g in set.generators() {
        let gf = faces
            .get(g.dim)
            .and_then(|fs| fs.get(g.index))
            .ok_or_else(|| Error::Invalid(format!("no face matrices for `{}`", set.name(g))))?;
        for (i, pair) in gf.iter().enumerate() {
            for (e, m) in pair.iter().enumerate() {
                if m.shape() != (r, r) || !is_unimodular(m) {
                    return Err(Error::NotInvertible(format!(
                        "face ({},{e}) of `{}`",
                        i + 1,
                        set.name(g)
                    )));
                }
            }
        }
    }
    let ranks: Vec<Vec<usize>> = (0..=set.top_dim())
        .map(|n| vec![r; set.generator_count(n)])
        .collect();
    system_from_generators(set, t, &ranks, faces, variance)
}

/// A system on a semi-cubical set: ranks per cube and face matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiCubicalSystem {
    set: SemiCubicalSet,
    variance: Variance,
    ranks: Vec<Vec<usize>>,
    faces: Vec<Vec<Vec<[IntMatrix; 2]>>>,
}

impl SemiCubicalSystem {
    pub fn new(
        set: SemiCubicalSet,
        variance: Variance,
        ranks: Vec<Vec<usize>>,
        faces: Vec<Vec<Vec<[IntMatrix; 2]>>>,
    ) -> Result<Self> {
        let top = set.top_dim();
        if ranks.len() != top + 1 || faces.len() != top + 1 {
            return Err(Error::Invalid("system does not cover all dimensions".into()));
        }
        for n in 0..=top {
            if ranks[n].len() != set.count(n) || faces[n].len() != set.count(n) {
                return Err(Error::Invalid(format!("system size mismatch in dim {n}")));
            }
            for x in 0..set.count(n) {
                if faces[n][x].len() != n {
                    return Err(Error::Invalid(format!("`{}` needs {n} face pairs", set.name(n, x))));
                }
                for i in 1..=n {
                    for eps in [false, true] {
                        let (from, to) = (ranks[n][x], ranks[n - 1][set.face(n, x, i, eps)]);
                        let (r, c) = match variance {
                            Variance::Contravariant => (to, from),
                            Variance::Covariant => (from, to),
                        };
                        check_shape(&faces[n][x][i - 1][eps as usize], r, c, || {
                            format!("face ({i},{}) of `{}`", eps as u8, set.name(n, x))
                        })?;
                    }
                }
            }
        }
        Ok(Self {
            set,
            variance,
            ranks,
            faces,
        })
    }

    pub fn constant(set: SemiCubicalSet, r: usize, variance: Variance) -> Self {
        let id = IntMatrix::identity(r);
        let ranks = (0..=set.top_dim()).map(|n| vec![r; set.count(n)]).collect();
        let faces = (0..=set.top_dim())
            .map(|n| vec![vec![[id.clone(), id.clone()]; n]; set.count(n)])
            .collect();
        Self::new(set, variance, ranks, faces).expect("constant system is well formed")
    }

    pub fn set(&self) -> &SemiCubicalSet {
        &self.set
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn rank(&self, n: usize, x: usize) -> usize {
        self.ranks[n][x]
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn face_matrix(&self, n: usize, x: usize, i: usize, eps: bool) -> &IntMatrix {
        &self.faces[n][x][i - 1][eps as usize]
    }

    /// The face identity lifted to matrices.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = self.set.validate();
        if !rep.is_valid() {
            return rep;
        }
        let s = &self.set;
        for n in 2..=s.top_dim() {
            for x in 0..s.count(n) {
                for j in 2..=n {
                    for i in 1..j {
                        for a in [false, true] {
                            for b in [false, true] {
                                let (p, q) = (s.face(n, x, j, b), s.face(n, x, i, a));
                                let (l1, l2) = (self.face_matrix(n - 1, p, i, a), self.face_matrix(n, x, j, b));
                                let (r1, r2) = (self.face_matrix(n - 1, q, j - 1, b), self.face_matrix(n, x, i, a));
                                let equal = match self.variance {
                                    Variance::Contravariant => l1 * l2 == r1 * r2,
                                    Variance::Covariant => l2 * l1 == r2 * r1,
                                };
                                if !equal {
                                    rep.push(
                                        "rel1",
                                        format!(
                                            "(i={i}, j={j}, α={}, β={}) at `{}`",
                                            a as u8,
                                            b as u8,
                                            s.name(n, x)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        rep
    }
}

/// `F ∘ S^op` on the universal cubical set: the value at `(γ, x)` is `F(x)`
/// and only the mono part of a morphism acts.
pub fn extend_semicubical(
    f: &SemiCubicalSystem,
    t: usize,
) -> Result<(PresentedCubicalSet, CoefficientSystem)> {
    let x = universal_from_semicubical(&f.set);
    let sys = system_from_generators(&x, t, &f.ranks, &f.faces, f.variance)?;
    Ok((x, sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::constant_system;

    fn circle() -> PresentedCubicalSet {
        PresentedCubicalSet::from_keys(&[("v", vec![]), ("e", vec![["v@", "v@"]])]).unwrap()
    }

    fn m(v: i64) -> IntMatrix {
        IntMatrix::from_rows(&[vec![v]])
    }

    #[test]
    fn monodromy_circle() {
        let faces = vec![vec![vec![]], vec![vec![[m(1), m(-1)]]]];
        let f = local_system(&circle(), 2, 1, &faces, Variance::Contravariant).unwrap();
        assert!(f.validate().is_valid());
        assert!(f.is_local());
        let e = f.base().find("e@x1").unwrap();
        assert_eq!(f.face_matrix(1, e.1, 1, true), &m(-1));
        let g = local_system(&circle(), 2, 1, &faces, Variance::Covariant).unwrap();
        assert!(g.validate().is_valid());
    }

    #[test]
    fn trivial_matrices_give_constant() {
        let faces = vec![vec![vec![]], vec![vec![[m(1), m(1)]]]];
        let f = local_system(&circle(), 2, 1, &faces, Variance::Contravariant).unwrap();
        assert_eq!(f, constant_system(&circle().expand(2), 1, Variance::Contravariant));
    }

    #[test]
    fn rank_two_swap() {
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let faces = vec![vec![vec![]], vec![vec![[IntMatrix::identity(2), swap]]]];
        let f = local_system(&circle(), 3, 2, &faces, Variance::Contravariant).unwrap();
        assert!(f.validate().is_valid());
        assert!(f.is_local());
    }

    #[test]
    fn rejects_non_invertible() {
        let faces = vec![vec![vec![]], vec![vec![[m(1), m(2)]]]];
        assert!(matches!(
            local_system(&circle(), 2, 1, &faces, Variance::Contravariant),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn semicubical_extension_matches_local() {
        let s = SemiCubicalSet::from_names(&[("v", vec![]), ("e", vec![["v", "v"]])]).unwrap();
        let f = SemiCubicalSystem::new(
            s,
            Variance::Contravariant,
            vec![vec![1], vec![1]],
            vec![vec![vec![]], vec![vec![[m(1), m(-1)]]]],
        )
        .unwrap();
        assert!(f.validate().is_valid());
        let (_, ext) = extend_semicubical(&f, 2).unwrap();
        let faces = vec![vec![vec![]], vec![vec![[m(1), m(-1)]]]];
        let loc = local_system(&circle(), 2, 1, &faces, Variance::Contravariant).unwrap();
        assert_eq!(ext.ranks(), loc.ranks());
        assert!(ext.validate().is_valid());
        for c in 0..ext.base().count(2) {
            for i in 1..=2 {
                assert_eq!(ext.face_matrix(2, c, i, true), loc.face_matrix(2, c, i, true));
            }
        }
    }

    #[test]
    fn torus_constant_extension() {
        let s = SemiCubicalSet::from_names(&[
            ("v", vec![]),
            ("a", vec![["v", "v"]]),
            ("b", vec![["v", "v"]]),
            ("t", vec![["a", "a"], ["b", "b"]]),
        ])
        .unwrap();
        let f = SemiCubicalSystem::constant(s, 1, Variance::Contravariant);
        let (x, ext) = extend_semicubical(&f, 3).unwrap();
        assert_eq!(ext, constant_system(&x.expand(3), 1, Variance::Contravariant));
    }
}
