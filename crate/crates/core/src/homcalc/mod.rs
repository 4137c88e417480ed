//! Chain and cochain complexes of cubical sets with coefficients, their
//! homology, and the fiber criterion.

mod build;

use serde::Serialize;

pub use build::{
    cochain_complex, normalized_complex, normalized_complex_local, unnormalized_complex, BasisLabel,
    CochainBuildReport, ComplexBuildReport,
};

use crate::coeff::{constant_system, CoefficientSystem, SemiCubicalSystem, Variance};
use crate::cubset::{pullback_fiber, CubicalMap};
use crate::error::{Error, Result};
use crate::par;
use crate::zlinalg::{
    cohomology_of_complex, homology_of_complex, FreeChainComplex, HomologyGroup, HomologyRecord, IntMatrix,
};

fn need(f: &CoefficientSystem, n_max: usize) -> Result<()> {
    if f.truncation() < n_max + 1 {
        return Err(Error::Truncation {
            available: f.truncation(),
            required: n_max + 1,
        });
    }
    Ok(())
}

/// `H_0, …, H_{n_max}` of the normalized complex. Local systems take the
/// non-degenerate shortcut.
pub fn homology(f: &CoefficientSystem, n_max: usize) -> Result<Vec<HomologyGroup>> {
    need(f, n_max)?;
    let report = if f.variance() == Variance::Contravariant && f.is_local() {
        normalized_complex_local(f)?
    } else {
        normalized_complex(f)?
    };
    let mut h = homology_of_complex(&report.complex)?;
    h.truncate(n_max + 1);
    Ok(h)
}

/// `H^0, …, H^{n_max}` of the normalized cochain complex.
pub fn cohomology(g: &CoefficientSystem, n_max: usize) -> Result<Vec<HomologyGroup>> {
    need(g, n_max)?;
    let mut h = cohomology_of_complex(&cochain_complex(g)?.complex)?;
    h.truncate(n_max + 1);
    Ok(h)
}

/// Homology of a semi-cubical set: `C_n = ⊕_{x ∈ S_n} F(x)` with the signed
/// face differential, no normalization.
pub fn semicubical_homology(f: &SemiCubicalSystem, n_max: usize) -> Result<Vec<HomologyGroup>> {
    if f.variance() != Variance::Contravariant {
        return Err(Error::Variance("contravariant system"));
    }
    f.validate().into_result()?;
    let s = f.set();
    let t = n_max + 1;
    let count = |n: usize| if n <= s.top_dim() { s.count(n) } else { 0 };
    let offsets: Vec<Vec<usize>> = (0..=t)
        .map(|n| {
            (0..count(n))
                .scan(0, |acc, x| {
                    let o = *acc;
                    *acc += f.rank(n, x);
                    Some(o)
                })
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = (0..=t)
        .map(|n| (0..count(n)).map(|x| f.rank(n, x)).sum())
        .collect();
    let boundaries = (1..=t)
        .map(|n| {
            let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
            for x in 0..count(n) {
                for i in 1..=n {
                    for eps in [false, true] {
                        let y = s.face(n, x, i, eps);
                        let m = f.face_matrix(n, x, i, eps);
                        if (i % 2 == 0) != eps {
                            d.add_block(offsets[n - 1][y], offsets[n][x], m);
                        } else {
                            d.sub_block(offsets[n - 1][y], offsets[n][x], m);
                        }
                    }
                }
            }
            d
        })
        .collect();
    homology_of_complex(&FreeChainComplex::new(ranks, boundaries)?)
}

/// `(ℤ, 0, …, 0)` with `n_max + 1` entries.
pub fn point_homology(n_max: usize) -> Vec<HomologyGroup> {
    let mut h = vec![HomologyGroup::zero(); n_max + 1];
    h[0] = HomologyGroup::free(1);
    h
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberEntry {
    pub cube: String,
    pub dim: usize,
    pub homology: Vec<HomologyRecord>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberCriterionReport {
    pub entries: Vec<FiberEntry>,
    pub verdict: bool,
}

impl FiberCriterionReport {
    pub fn failures(&self) -> impl Iterator<Item = &FiberEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// For every cube `y` of `expand(Y, t)`, compares `H_0..H_{n_max}` of the
/// fiber `f/y` (built at truncation `n_max + 1`) with the homology of a
/// point.
pub fn fiber_criterion(f: &CubicalMap, n_max: usize, t: usize) -> Result<FiberCriterionReport> {
    f.validate().into_result()?;
    let y = f.target().expand(t);
    let cubes: Vec<(usize, String)> = (0..=t)
        .flat_map(|n| y.keys(n).iter().map(move |k| (n, k.clone())))
        .collect();
    let expected = point_homology(n_max);
    let entries = par::map(&cubes, |(n, key)| -> Result<FiberEntry> {
        let cube = f.target().cube_from_key(key)?;
        let fiber = pullback_fiber(f, &cube, n_max + 1)?;
        let h = homology(&constant_system(&fiber, 1, Variance::Contravariant), n_max)?;
        Ok(FiberEntry {
            cube: key.clone(),
            dim: *n,
            pass: h == expected,
            homology: h.iter().enumerate().map(|(d, g)| g.to_record(d)).collect(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let verdict = entries.iter().all(|e| e.pass);
    Ok(FiberCriterionReport { entries, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{extend_semicubical, local_system};
    use crate::cubset::{product, standard_cube, universal_from_semicubical, PresentedCubicalSet, SemiCubicalSet};

    fn z() -> HomologyGroup {
        HomologyGroup::free(1)
    }

    #[test]
    fn standard_cubes_are_acyclic() {
        for n in 0..=2 {
            let f = constant_system(&standard_cube(n).expand(n + 2), 1, Variance::Contravariant);
            let h = homology(&f, n + 1).unwrap();
            assert_eq!(h, point_homology(n + 1));
            let g = constant_system(&standard_cube(n).expand(n + 2), 1, Variance::Covariant);
            assert_eq!(cohomology(&g, n + 1).unwrap(), point_homology(n + 1));
        }
    }

    #[test]
    fn product_of_intervals() {
        let p = product(&standard_cube(1), &standard_cube(1), 3);
        let f = constant_system(&p, 1, Variance::Contravariant);
        assert_eq!(homology(&f, 2).unwrap(), vec![z(), z(), z()]);
    }

    #[test]
    fn torus_and_twisted_square() {
        let torus = SemiCubicalSet::from_names(&[
            ("v", vec![]),
            ("a", vec![["v", "v"]]),
            ("b", vec![["v", "v"]]),
            ("t", vec![["a", "a"], ["b", "b"]]),
        ])
        .unwrap();
        let x = universal_from_semicubical(&torus).expand(3);
        let f = constant_system(&x, 1, Variance::Contravariant);
        assert_eq!(homology(&f, 2).unwrap(), vec![z(), HomologyGroup::free(2), z()]);
        let sf = SemiCubicalSystem::constant(torus, 1, Variance::Contravariant);
        assert_eq!(semicubical_homology(&sf, 2).unwrap(), vec![z(), HomologyGroup::free(2), z()]);

        let twisted = PresentedCubicalSet::from_keys(&[
            ("v", vec![]),
            ("x", vec![["v@", "v@"]]),
            ("y", vec![["v@", "v@"]]),
            ("a", vec![["y@x1", "x@x1"], ["x@x1", "y@x1"]]),
        ])
        .unwrap();
        let f = constant_system(&twisted.expand(3), 1, Variance::Contravariant);
        assert_eq!(
            homology(&f, 2).unwrap(),
            vec![z(), HomologyGroup::new(1, vec![2]), HomologyGroup::zero()]
        );
    }

    #[test]
    fn monodromy_circle() {
        let c = PresentedCubicalSet::from_keys(&[("v", vec![]), ("e", vec![["v@", "v@"]])]).unwrap();
        let m = |v: i64| IntMatrix::from_rows(&[vec![v]]);
        let faces = [vec![vec![]], vec![vec![[m(1), m(-1)]]]];
        let f = local_system(&c, 2, 1, &faces, Variance::Contravariant).unwrap();
        assert_eq!(homology(&f, 1).unwrap(), vec![HomologyGroup::new(0, vec![2]), HomologyGroup::zero()]);
        let g = local_system(&c, 2, 1, &faces, Variance::Covariant).unwrap();
        assert_eq!(cohomology(&g, 1).unwrap(), vec![HomologyGroup::zero(), HomologyGroup::new(0, vec![2])]);
        let s = SemiCubicalSet::from_names(&[("v", vec![]), ("e", vec![["v", "v"]])]).unwrap();
        let sf = SemiCubicalSystem::new(
            s,
            Variance::Contravariant,
            vec![vec![1], vec![1]],
            vec![vec![vec![]], vec![vec![[m(1), m(-1)]]]],
        )
        .unwrap();
        let (_, ext) = extend_semicubical(&sf, 2).unwrap();
        assert_eq!(semicubical_homology(&sf, 1).unwrap(), homology(&ext, 1).unwrap());
    }

    #[test]
    fn truncation_is_enforced() {
        let f = constant_system(&standard_cube(1).expand(1), 1, Variance::Contravariant);
        assert!(matches!(homology(&f, 1), Err(Error::Truncation { .. })));
    }

    #[test]
    fn fiber_criterion_on_collapse() {
        let id = CubicalMap::identity(standard_cube(1));
        assert!(fiber_criterion(&id, 1, 1).unwrap().verdict);
        let collapse = CubicalMap::to_point(standard_cube(1));
        let rep = fiber_criterion(&collapse, 1, 1).unwrap();
        assert!(!rep.verdict);
        let fails: Vec<_> = rep.failures().collect();
        assert_eq!(fails.len(), 1);
        assert_eq!(fails[0].cube, "[]@del:1");
        assert_eq!(fails[0].homology[1].betti, 1);
    }
}
