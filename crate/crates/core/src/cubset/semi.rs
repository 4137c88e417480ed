use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::presented::{Cube, GeneratorId, PresentedCubicalSet};

/// Semi-cubical set: named cubes per dimension with face maps only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiCubicalSet {
    names: Vec<Vec<String>>,
    /// `faces[n][x][i-1] = [∂_i^0 x, ∂_i^1 x]`
    faces: Vec<Vec<Vec<[usize; 2]>>>,
}

impl SemiCubicalSet {
    pub fn new(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<[usize; 2]>>>) -> Result<Self> {
        if names.len() != faces.len() {
            return Err(Error::Invalid("face table does not match cube list".into()));
        }
        for (n, fs) in faces.iter().enumerate() {
            if fs.len() != names[n].len() {
                return Err(Error::Invalid(format!("face table size mismatch in dim {n}")));
            }
            for (x, xf) in fs.iter().enumerate() {
                if xf.len() != n || xf.iter().flatten().any(|&y| y >= names[n - 1].len()) {
                    return Err(Error::Invalid(format!("bad faces on `{}`", names[n][x])));
                }
            }
        }
        Ok(Self { names, faces })
    }

    /// From `(name, faces)` entries with faces given by cube names; the
    /// dimension of an entry is its number of face pairs.
    pub fn from_names(entries: &[(&str, Vec<[&str; 2]>)]) -> Result<Self> {
        let top = entries.iter().map(|(_, f)| f.len()).max().unwrap_or(0);
        let mut names = vec![Vec::new(); top + 1];
        let mut pos = HashMap::new();
        for (name, f) in entries {
            if pos.insert(*name, names[f.len()].len()).is_some() {
                return Err(Error::Invalid(format!("duplicate cube `{name}`")));
            }
            names[f.len()].push(name.to_string());
        }
        let mut faces: Vec<Vec<Vec<[usize; 2]>>> = vec![Vec::new(); top + 1];
        for (name, f) in entries {
            let n = f.len();
            let mut xf = Vec::with_capacity(n);
            for pair in f {
                let mut idx = [0; 2];
                for (slot, fname) in idx.iter_mut().zip(pair) {
                    match pos.get(fname) {
                        Some(&i) if names[n - 1].get(i).map(String::as_str) == Some(*fname) => {
                            *slot = i
                        }
                        _ => {
                            return Err(Error::UnknownCube(format!(
                                "`{fname}` as a face of `{name}`"
                            )))
                        }
                    }
                }
                xf.push(idx);
            }
            faces[n].push(xf);
        }
        Self::new(names, faces)
    }

    pub fn top_dim(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn count(&self, n: usize) -> usize {
        self.names.get(n).map_or(0, Vec::len)
    }

    pub fn name(&self, n: usize, x: usize) -> &str {
        &self.names[n][x]
    }

    pub fn names(&self) -> &[Vec<String>] {
        &self.names
    }

    pub fn face(&self, n: usize, x: usize, i: usize, eps: bool) -> usize {
        self.faces[n][x][i - 1][eps as usize]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        for n in 2..self.names.len() {
            for x in 0..self.count(n) {
                for j in 2..=n {
                    for i in 1..j {
                        for a in [false, true] {
                            for b in [false, true] {
                                let lhs = self.face(n - 1, self.face(n, x, j, b), i, a);
                                let rhs = self.face(n - 1, self.face(n, x, i, a), j - 1, b);
                                if lhs != rhs {
                                    rep.push(
                                        "rel1",
                                        format!(
                                            "(i={i}, j={j}, α={}, β={}) on `{}`: `{}` vs `{}`",
                                            a as u8,
                                            b as u8,
                                            self.name(n, x),
                                            self.name(n - 2, lhs),
                                            self.name(n - 2, rhs)
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

/// Left Kan extension along `□_+ -> □`: generators are the cubes of `S`
/// and every face is a non-degenerate cube.
pub fn universal_from_semicubical(s: &SemiCubicalSet) -> PresentedCubicalSet {
    let faces = s
        .faces
        .iter()
        .enumerate()
        .map(|(n, fs)| {
            fs.iter()
                .map(|xf| {
                    xf.iter()
                        .map(|pair| {
                            pair.map(|index| Cube::generator(GeneratorId { dim: n - 1, index }))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    PresentedCubicalSet::new(s.names.clone(), faces).expect("semi-cubical data is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn torus() -> SemiCubicalSet {
        SemiCubicalSet::from_names(&[
            ("v", vec![]),
            ("a", vec![["v", "v"]]),
            ("b", vec![["v", "v"]]),
            ("t", vec![["a", "a"], ["b", "b"]]),
        ])
        .unwrap()
    }

    #[test]
    fn universal_of_interval() {
        let s = SemiCubicalSet::from_names(&[("a", vec![]), ("b", vec![]), ("e", vec![["a", "b"]])])
            .unwrap();
        let x = universal_from_semicubical(&s);
        let t = x.expand(1);
        assert_eq!(t.counts(), vec![2, 3]);
        let e = t.find("e@x1").unwrap();
        assert_eq!(t.key(0, t.face(1, e.1, 1, false)), "a@");
        assert_eq!(t.key(0, t.face(1, e.1, 1, true)), "b@");
    }

    #[test]
    fn torus_presented() {
        let s = torus();
        assert!(s.validate().is_valid());
        let x = universal_from_semicubical(&s);
        assert_eq!(x.generators().count(), 4);
        assert!(x.validate().is_valid());
        assert!(x.expand(3).validate().is_valid());
    }

    #[test]
    fn point_only() {
        let s = SemiCubicalSet::from_names(&[("p", vec![])]).unwrap();
        assert_eq!(universal_from_semicubical(&s).expand(2).counts(), vec![1, 1, 1]);
    }

    #[test]
    fn semicubical_violation() {
        let s = SemiCubicalSet::from_names(&[
            ("u", vec![]),
            ("w", vec![]),
            ("a", vec![["u", "u"]]),
            ("b", vec![["w", "w"]]),
            ("t", vec![["a", "a"], ["b", "b"]]),
        ])
        .unwrap();
        assert!(!s.validate().is_valid());
        assert!(SemiCubicalSet::from_names(&[("e", vec![["x", "x"]])]).is_err());
    }
}
