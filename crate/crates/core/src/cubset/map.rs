use crate::boxcat::face;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::presented::{Cube, PresentedCubicalSet};
use super::table::CubesTable;

/// Map of presented cubical sets, determined by the image of each generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalMap {
    source: PresentedCubicalSet,
    target: PresentedCubicalSet,
    /// `assignment[n][g]` is a target cube of dimension `n`.
    assignment: Vec<Vec<Cube>>,
}

impl CubicalMap {
    pub fn new(
        source: PresentedCubicalSet,
        target: PresentedCubicalSet,
        assignment: Vec<Vec<Cube>>,
    ) -> Result<Self> {
        if assignment.len() != source.top_dim() + 1 {
            return Err(Error::Invalid("assignment does not cover all dimensions".into()));
        }
        for (n, cs) in assignment.iter().enumerate() {
            if cs.len() != source.generator_count(n) {
                return Err(Error::Invalid(format!("assignment size mismatch in dim {n}")));
            }
            for c in cs {
                if c.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: c.dim(),
                    });
                }
                // Rejects cubes that do not belong to the target.
                target.apply_morphism(&crate::boxcat::CubeMorphism::identity(n), c)?;
            }
        }
        Ok(Self {
            source,
            target,
            assignment,
        })
    }

    /// From `(source generator, target cube key)` pairs.
    pub fn from_keys(
        source: PresentedCubicalSet,
        target: PresentedCubicalSet,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut assignment: Vec<Vec<Option<Cube>>> = (0..=source.top_dim())
            .map(|n| vec![None; source.generator_count(n)])
            .collect();
        for (g, key) in pairs {
            let id = source
                .find(g)
                .ok_or_else(|| Error::UnknownCube(g.to_string()))?;
            assignment[id.dim][id.index] = Some(target.cube_from_key(key)?);
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(n, cs)| {
                cs.into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.ok_or_else(|| {
                            Error::Invalid(format!(
                                "generator `{}` has no image",
                                source.generator_names(n)[i]
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, assignment)
    }

    /// The unique map to the point `□^0`.
    pub fn to_point(source: PresentedCubicalSet) -> Self {
        let point = super::presented::standard_cube(0);
        let pt = Cube::generator(point.generators().next().expect("one vertex"));
        let assignment = (0..=source.top_dim())
            .map(|n| {
                let c = Cube {
                    epi: crate::boxcat::CubeMorphism::epi_from_deleted(n, &(1..=n).collect::<Vec<_>>())
                        .expect("valid"),
                    generator: pt.generator,
                };
                vec![c; source.generator_count(n)]
            })
            .collect();
        Self::new(source, point, assignment).expect("constant map")
    }

    pub fn identity(x: PresentedCubicalSet) -> Self {
        let assignment = (0..=x.top_dim())
            .map(|n| {
                (0..x.generator_count(n))
                    .map(|index| Cube::generator(super::GeneratorId { dim: n, index }))
                    .collect()
            })
            .collect();
        Self::new(x.clone(), x, assignment).expect("identity map")
    }

    pub fn source(&self) -> &PresentedCubicalSet {
        &self.source
    }

    pub fn target(&self) -> &PresentedCubicalSet {
        &self.target
    }

    pub fn image_of_generator(&self, g: super::GeneratorId) -> &Cube {
        &self.assignment[g.dim][g.index]
    }

    /// `f(X(γ)(g)) = Y(γ)(f(g))`.
    pub fn map_cube(&self, c: &Cube) -> Result<Cube> {
        let img = self
            .assignment
            .get(c.generator.dim)
            .and_then(|cs| cs.get(c.generator.index))
            .ok_or_else(|| Error::UnknownCube(format!("{:?}", c.generator)))?;
        self.target.apply_morphism(&c.epi, img)
    }

    /// Naturality against every generator face.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = self.source.validate();
        rep.extend(self.target.validate());
        for g in self.source.generators() {
            let n = g.dim;
            for i in 1..=n {
                for eps in [false, true] {
                    let lhs = self
                        .map_cube(self.source.generator_face(g, i, eps))
                        .expect("source face belongs to source");
                    let rhs = self
                        .target
                        .apply_morphism(&face(n, i, eps).expect("valid"), &self.assignment[n][g.index])
                        .expect("image belongs to target");
                    if lhs != rhs {
                        rep.push(
                            "naturality",
                            format!(
                                "(i={i}, ε={}) on `{}`: `{}` vs `{}`",
                                eps as u8,
                                self.source.name(g),
                                self.target.cube_key(&lhs),
                                self.target.cube_key(&rhs)
                            ),
                        );
                    }
                }
            }
        }
        rep
    }

    /// The induced map of truncations as index tables, with both sides
    /// expanded at the same truncation.
    pub fn table_map(&self, src: &CubesTable, tgt: &CubesTable) -> Result<Vec<Vec<usize>>> {
        let t = src.truncation().min(tgt.truncation());
        (0..=t)
            .map(|n| {
                src.keys(n)
                    .iter()
                    .map(|k| {
                        let img = self.map_cube(&self.source.cube_from_key(k)?)?;
                        let key = self.target.cube_key(&img);
                        tgt.find(&key)
                            .map(|(_, i)| i)
                            .ok_or(Error::UnknownCube(key))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubset::standard_cube;

    fn circle() -> PresentedCubicalSet {
        PresentedCubicalSet::from_keys(&[("v", vec![]), ("e", vec![["v@", "v@"]])]).unwrap()
    }

    #[test]
    fn interval_onto_circle() {
        let map = CubicalMap::from_keys(
            standard_cube(1),
            circle(),
            &[("[0]", "v@"), ("[1]", "v@"), ("[x1]", "e@x1")],
        )
        .unwrap();
        assert!(map.validate().is_valid());
        let tm = map.table_map(&map.source().expand(2), &map.target().expand(2)).unwrap();
        assert_eq!(tm[0], vec![0, 0]);
    }

    #[test]
    fn bad_naturality() {
        let two = PresentedCubicalSet::from_keys(&[
            ("a", vec![]),
            ("b", vec![]),
            ("e", vec![["a@", "b@"]]),
        ])
        .unwrap();
        let map = CubicalMap::from_keys(
            standard_cube(1),
            two,
            &[("[0]", "a@"), ("[1]", "a@"), ("[x1]", "e@x1")],
        )
        .unwrap();
        let rep = map.validate();
        assert_eq!(rep.violations.len(), 1);
        assert!(rep.to_string().contains("ε=1"));
    }

    #[test]
    fn collapse_and_identity() {
        assert!(CubicalMap::to_point(circle()).validate().is_valid());
        assert!(CubicalMap::identity(standard_cube(2)).validate().is_valid());
    }
}
