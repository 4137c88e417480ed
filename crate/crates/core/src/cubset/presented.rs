use std::collections::HashMap;

use crate::boxcat::{degeneracy, epis, face, monos, CubeMorphism};
use crate::error::{Error, Result};
use crate::par;
use crate::report::ValidationReport;

use super::table::CubesTable;

/// A generator of a presented cubical set: its dimension and position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub dim: usize,
    pub index: usize,
}

/// The cube `X(γ)(g)` for an epimorphism `γ: I^n ->> I^k` and a generator
/// `g` of dimension `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub epi: CubeMorphism,
    pub generator: GeneratorId,
}

impl Cube {
    pub fn generator(generator: GeneratorId) -> Self {
        Self {
            epi: CubeMorphism::identity(generator.dim),
            generator,
        }
    }

    pub fn dim(&self) -> usize {
        self.epi.source_dim()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.epi.is_identity()
    }
}

/// Cubical set given by generators per dimension and, for every generator of
/// dimension `n >= 1`, the `2n` faces as cubes of dimension `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedCubicalSet {
    names: Vec<Vec<String>>,
    /// `faces[n][g][i-1][ε]`
    faces: Vec<Vec<Vec<[Cube; 2]>>>,
    lookup: HashMap<String, GeneratorId>,
}

impl PresentedCubicalSet {
    pub fn new(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<[Cube; 2]>>>) -> Result<Self> {
        if names.len() != faces.len() {
            return Err(Error::Invalid("face table does not match generator list".into()));
        }
        let mut lookup = HashMap::new();
        for (dim, ns) in names.iter().enumerate() {
            for (index, name) in ns.iter().enumerate() {
                if name.is_empty() || name.contains(['@', '(', ')', '|']) {
                    return Err(Error::Invalid(format!("bad generator name `{name}`")));
                }
                if lookup.insert(name.clone(), GeneratorId { dim, index }).is_some() {
                    return Err(Error::Invalid(format!("duplicate generator `{name}`")));
                }
            }
        }
        for (n, fs) in faces.iter().enumerate() {
            if fs.len() != names[n].len() {
                return Err(Error::Invalid(format!("face table size mismatch in dim {n}")));
            }
            for (g, gf) in fs.iter().enumerate() {
                if gf.len() != n {
                    return Err(Error::Invalid(format!(
                        "generator `{}` needs {n} face pairs, has {}",
                        names[n][g],
                        gf.len()
                    )));
                }
                for c in gf.iter().flatten() {
                    let ok = c.dim() + 1 == n
                        && c.epi.is_epi()
                        && c.epi.target_dim() == c.generator.dim
                        && c.generator.dim < names.len()
                        && c.generator.index < names[c.generator.dim].len();
                    if !ok {
                        return Err(Error::Invalid(format!(
                            "bad face cube on generator `{}`",
                            names[n][g]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            names,
            faces,
            lookup,
        })
    }

    /// Builds a set from `(name, faces)` entries where each face is given by
    /// its cube key; the dimension of an entry is its number of face pairs.
    /// Entries may come in any order as long as faces refer to known names.
    pub fn from_keys(entries: &[(&str, Vec<[&str; 2]>)]) -> Result<Self> {
        let top = entries.iter().map(|(_, f)| f.len()).max().unwrap_or(0);
        let mut names = vec![Vec::new(); top + 1];
        for (name, f) in entries {
            names[f.len()].push(name.to_string());
        }
        let lookup: HashMap<String, GeneratorId> = names
            .iter()
            .enumerate()
            .flat_map(|(dim, ns)| {
                ns.iter()
                    .enumerate()
                    .map(move |(index, n)| (n.clone(), GeneratorId { dim, index }))
            })
            .collect();
        let mut faces: Vec<Vec<Vec<[Cube; 2]>>> = names.iter().map(|_| Vec::new()).collect();
        for (_, f) in entries {
            let mut gf = Vec::with_capacity(f.len());
            for pair in f {
                let c0 = cube_from_key_with(&lookup, pair[0])?;
                let c1 = cube_from_key_with(&lookup, pair[1])?;
                gf.push([c0, c1]);
            }
            faces[f.len()].push(gf);
        }
        Self::new(names, faces)
    }

    pub fn top_dim(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn generator_names(&self, dim: usize) -> &[String] {
        self.names.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn generator_count(&self, dim: usize) -> usize {
        self.generator_names(dim).len()
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.names
            .iter()
            .enumerate()
            .flat_map(|(dim, ns)| (0..ns.len()).map(move |index| GeneratorId { dim, index }))
    }

    pub fn name(&self, g: GeneratorId) -> &str {
        &self.names[g.dim][g.index]
    }

    pub fn find(&self, name: &str) -> Option<GeneratorId> {
        self.lookup.get(name).copied()
    }

    /// `∂_i^ε g` as stored in the face table.
    pub fn generator_face(&self, g: GeneratorId, i: usize, eps: bool) -> &Cube {
        &self.faces[g.dim][g.index][i - 1][eps as usize]
    }

    fn check(&self, c: &Cube) -> Result<()> {
        let g = c.generator;
        if g.dim >= self.names.len() || g.index >= self.names[g.dim].len() {
            return Err(Error::UnknownCube(format!("generator {}:{}", g.dim, g.index)));
        }
        if !c.epi.is_epi() || c.epi.target_dim() != g.dim {
            return Err(Error::InvalidMorphism(format!(
                "`{}` is not an epimorphism onto I^{}",
                c.epi, g.dim
            )));
        }
        Ok(())
    }

    /// `X(α)(c)` for `α: I^m -> I^n` and `c` of dimension `n`.
    pub fn apply_morphism(&self, alpha: &CubeMorphism, c: &Cube) -> Result<Cube> {
        self.check(c)?;
        if alpha.target_dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: c.dim(),
                found: alpha.target_dim(),
            });
        }
        Ok(self.apply_unchecked(alpha, c))
    }

    fn apply_unchecked(&self, alpha: &CubeMorphism, c: &Cube) -> Cube {
        let composite = c.epi.after(alpha).expect("dimensions checked");
        let fact = composite.factorize();
        let pushed = self.push_mono(&fact.mono, c.generator);
        Cube {
            epi: pushed.epi.after(&fact.epi).expect("dimensions agree"),
            generator: pushed.generator,
        }
    }

    /// `X(μ)(g)` for a mono `μ` into `I^{dim g}`: peel off the face with the
    /// highest constant position, look it up and recurse.
    fn push_mono(&self, mono: &CubeMorphism, g: GeneratorId) -> Cube {
        let word = mono.assignment();
        let Some(pos) = word.iter().rposition(|t| !matches!(t, crate::boxcat::Token::Var(_))) else {
            return Cube::generator(g);
        };
        let eps = matches!(word[pos], crate::boxcat::Token::One);
        let mut rest = word.to_vec();
        rest.remove(pos);
        let rest = CubeMorphism::new(mono.source_dim(), rest).expect("sub-word of a mono");
        let f = self.generator_face(g, pos + 1, eps).clone();
        self.apply_unchecked(&rest, &f)
    }

    /// `"g@x1,x2"` for a generator, `"g@del:2"` for a degenerate cube.
    pub fn cube_key(&self, c: &Cube) -> String {
        let name = self.name(c.generator);
        if c.epi.is_identity() {
            format!("{name}@{}", c.epi)
        } else {
            format!("{name}@{}", c.epi.epi_wire())
        }
    }

    pub fn cube_from_key(&self, key: &str) -> Result<Cube> {
        cube_from_key_with(&self.lookup, key)
    }

    /// All cubes of dimension `n`: generators first, then degenerate cubes by
    /// decreasing generator dimension.
    pub fn cubes(&self, n: usize) -> Vec<Cube> {
        let mut out = Vec::new();
        for k in (0..=n.min(self.top_dim())).rev() {
            for gamma in epis(n, k) {
                for index in 0..self.generator_count(k) {
                    out.push(Cube {
                        epi: gamma.clone(),
                        generator: GeneratorId { dim: k, index },
                    });
                }
            }
        }
        out
    }

    /// Tabulates `X_0, …, X_T` with all face and degeneracy operators.
    pub fn expand(&self, t: usize) -> CubesTable {
        let cubes: Vec<Vec<Cube>> = (0..=t).map(|n| self.cubes(n)).collect();
        self.tabulate(&cubes)
    }

    pub(crate) fn tabulate(&self, cubes: &[Vec<Cube>]) -> CubesTable {
        let t = cubes.len() - 1;
        let index: Vec<HashMap<&Cube, usize>> = cubes
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let keys = cubes
            .iter()
            .map(|cs| cs.iter().map(|c| self.cube_key(c)).collect())
            .collect();
        let faces = (0..=t)
            .map(|n| {
                par::map(&cubes[n], |c| {
                    (1..=n)
                        .map(|i| {
                            [false, true].map(|eps| {
                                let f = face(n, i, eps).expect("valid face");
                                index[n - 1][&self.apply_unchecked(&f, c)]
                            })
                        })
                        .collect()
                })
            })
            .collect();
        let degeneracies = (0..=t)
            .map(|m| {
                par::map(&cubes[m], |c| {
                    if m == t {
                        return Vec::new();
                    }
                    (1..=m + 1)
                        .map(|i| {
                            let s = degeneracy(m + 1, i).expect("valid degeneracy");
                            index[m + 1][&self.apply_unchecked(&s, c)]
                        })
                        .collect()
                })
            })
            .collect();
        CubesTable::new(t, keys, faces, degeneracies).expect("expansion is well formed")
    }

    /// Checks the face identities on every generator.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        for g in self.generators() {
            let n = g.dim;
            let c = Cube::generator(g);
            for j in 2..=n {
                for i in 1..j {
                    for a in [false, true] {
                        for b in [false, true] {
                            let lhs = self.apply_unchecked(
                                &face(n - 1, i, a).expect("valid"),
                                self.generator_face(g, j, b),
                            );
                            let rhs = self.apply_unchecked(
                                &face(n - 1, j - 1, b).expect("valid"),
                                self.generator_face(g, i, a),
                            );
                            if lhs != rhs {
                                rep.push(
                                    "rel1",
                                    format!(
                                        "(i={i}, j={j}, α={}, β={}) on `{}`: `{}` vs `{}`",
                                        a as u8,
                                        b as u8,
                                        self.name(g),
                                        self.cube_key(&lhs),
                                        self.cube_key(&rhs)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
            debug_assert_eq!(self.apply_unchecked(&CubeMorphism::identity(n), &c), c);
        }
        rep
    }
}

fn cube_from_key_with(lookup: &HashMap<String, GeneratorId>, key: &str) -> Result<Cube> {
    let (name, epi) = key
        .rsplit_once('@')
        .ok_or_else(|| Error::Parse(format!("cube key `{key}` lacks `@`")))?;
    let generator = *lookup
        .get(name)
        .ok_or_else(|| Error::UnknownCube(key.to_string()))?;
    let epi = CubeMorphism::parse_epi(epi, generator.dim)?;
    Ok(Cube { epi, generator })
}

/// The standard cube `□^n = □(-, I^n)`; generators of dimension `k` are the
/// monos `I^k -> I^n`, named by their token word in brackets.
pub fn standard_cube(n: usize) -> PresentedCubicalSet {
    let gens: Vec<Vec<CubeMorphism>> = (0..=n).map(|k| monos(k, n)).collect();
    let pos: Vec<HashMap<&CubeMorphism, usize>> = gens
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();
    let names = gens
        .iter()
        .map(|ms| ms.iter().map(|m| format!("[{m}]")).collect())
        .collect();
    let faces = gens
        .iter()
        .enumerate()
        .map(|(k, ms)| {
            ms.iter()
                .map(|m| {
                    (1..=k)
                        .map(|i| {
                            [false, true].map(|eps| {
                                let fm = m.after(&face(k, i, eps).expect("valid")).expect("valid");
                                let fact = fm.factorize();
                                let d = fact.mono.source_dim();
                                Cube {
                                    epi: fact.epi,
                                    generator: GeneratorId {
                                        dim: d,
                                        index: pos[d][&fact.mono],
                                    },
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    PresentedCubicalSet::new(names, faces).expect("standard cube is well formed")
}

/// The cube of `□^n` corresponding to a morphism `α: I^m -> I^n`.
pub fn standard_cube_element(n: usize, alpha: &CubeMorphism) -> Result<Cube> {
    if alpha.target_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.target_dim(),
        });
    }
    let fact = alpha.factorize();
    let d = fact.mono.source_dim();
    let index = monos(d, n)
        .iter()
        .position(|m| *m == fact.mono)
        .expect("every mono is listed");
    Ok(Cube {
        epi: fact.epi,
        generator: GeneratorId { dim: d, index },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcat::hom_set_count;

    fn interval() -> PresentedCubicalSet {
        PresentedCubicalSet::from_keys(&[("a", vec![]), ("b", vec![]), ("e", vec![["a@", "b@"]])])
            .unwrap()
    }

    #[test]
    fn face_lookup_and_degeneracy() {
        let x = interval();
        let e = x.cube_from_key("e@x1").unwrap();
        let a = x.apply_morphism(&face(1, 1, false).unwrap(), &e).unwrap();
        assert_eq!(x.cube_key(&a), "a@");
        let a0 = x.cube_from_key("a@").unwrap();
        let sa = x.apply_morphism(&degeneracy(1, 1).unwrap(), &a0).unwrap();
        assert_eq!(x.cube_key(&sa), "a@del:1");
        assert!(sa.is_degenerate());
        assert_eq!(x.apply_morphism(&CubeMorphism::identity(1), &e).unwrap(), e);
    }

    #[test]
    fn expand_counts() {
        let x = interval().expand(1);
        assert_eq!(x.counts(), vec![2, 3]);
        assert_eq!(x.nondegenerate(1).len(), 1);
        assert!(x.validate().is_valid());
        let p = PresentedCubicalSet::from_keys(&[("p", vec![])]).unwrap().expand(2);
        assert_eq!(p.counts(), vec![1, 1, 1]);
        assert!(p.is_degenerate(1, 0) && p.is_degenerate(2, 0));
    }

    #[test]
    fn standard_cube_generators() {
        let c: Vec<usize> = (0..=2).map(|k| standard_cube(2).generator_count(k)).collect();
        assert_eq!(c, vec![4, 4, 1]);
        assert_eq!(standard_cube(0).generator_count(0), 1);
        assert!(standard_cube(2).validate().is_valid());
        let t = standard_cube(1).expand(2);
        assert_eq!(t.count(2), 4);
        for n in 0..=2 {
            let t = standard_cube(n).expand(3);
            for k in 0..=3 {
                assert_eq!(t.count(k) as u128, hom_set_count(k, n));
            }
            assert!(t.validate().is_valid());
        }
    }

    #[test]
    fn degenerate_tag_matches_epi() {
        let x = standard_cube(2);
        let cubes: Vec<Vec<Cube>> = (0..=3).map(|n| x.cubes(n)).collect();
        let t = x.tabulate(&cubes);
        for n in 0..=3 {
            for (i, c) in cubes[n].iter().enumerate() {
                assert_eq!(t.is_degenerate(n, i), c.is_degenerate());
            }
        }
    }

    #[test]
    fn detects_rel1_violation() {
        // A square whose faces do not agree at a corner.
        let x = PresentedCubicalSet::from_keys(&[
            ("a", vec![]),
            ("b", vec![]),
            ("e", vec![["a@", "a@"]]),
            ("f", vec![["b@", "b@"]]),
            ("s", vec![["e@x1", "e@x1"], ["f@x1", "f@x1"]]),
        ])
        .unwrap();
        let rep = x.validate();
        assert!(!rep.is_valid());
        assert!(rep.to_string().contains("i=1, j=2"));
    }

    #[test]
    fn circle_is_valid() {
        let x = PresentedCubicalSet::from_keys(&[("v", vec![]), ("e", vec![["v@", "v@"]])]).unwrap();
        assert!(x.validate().is_valid());
        assert!(x.expand(2).validate().is_valid());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(PresentedCubicalSet::from_keys(&[("e", vec![["a@", "a@"]])]).is_err());
        assert!(interval().cube_from_key("e@del:1").is_ok());
        assert!(interval().cube_from_key("q@").is_err());
    }
}
