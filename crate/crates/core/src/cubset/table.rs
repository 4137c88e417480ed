use std::collections::HashMap;

use crate::boxcat::CubeMorphism;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Position of a cube in a table: `(dimension, index)`.
pub type CubeIndex = (usize, usize);

/// Explicit truncation `X_0, …, X_T` of a cubical set with face and
/// degeneracy operator tables.
///
/// `faces[n][x][i-1] = [∂_i^0 x, ∂_i^1 x]` for `1 <= n <= T`, and
/// `degeneracies[m][y][i-1] = s_i^{m+1} y` for `m < T`. A cube is tagged
/// degenerate iff it lies in the image of some `s_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubesTable {
    truncation: usize,
    keys: Vec<Vec<String>>,
    degenerate: Vec<Vec<bool>>,
    faces: Vec<Vec<Vec<[usize; 2]>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
    index: HashMap<String, CubeIndex>,
}

impl CubesTable {
    /// `faces` must have `T + 1` entries (entry 0 holds empty lists) and
    /// `degeneracies` `T + 1` entries (the last one holds empty lists).
    pub fn new(
        truncation: usize,
        keys: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<[usize; 2]>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let t = truncation;
        if keys.len() != t + 1 || faces.len() != t + 1 || degeneracies.len() != t + 1 {
            return Err(Error::Invalid(format!(
                "table of truncation {t} needs {} dimensions",
                t + 1
            )));
        }
        let mut index = HashMap::new();
        for (n, ks) in keys.iter().enumerate() {
            for (x, k) in ks.iter().enumerate() {
                if index.insert(k.clone(), (n, x)).is_some() {
                    return Err(Error::Invalid(format!("duplicate cube key `{k}`")));
                }
            }
        }
        for n in 0..=t {
            if faces[n].len() != keys[n].len() || degeneracies[n].len() != keys[n].len() {
                return Err(Error::Invalid(format!("operator table size mismatch in dim {n}")));
            }
            for (x, fs) in faces[n].iter().enumerate() {
                let expect = n;
                if fs.len() != expect {
                    return Err(Error::Invalid(format!(
                        "cube `{}` has {} face pairs, expected {expect}",
                        keys[n][x],
                        fs.len()
                    )));
                }
                if fs.iter().flatten().any(|&y| n == 0 || y >= keys[n - 1].len()) {
                    return Err(Error::Invalid(format!("face of `{}` out of range", keys[n][x])));
                }
            }
            for (y, ss) in degeneracies[n].iter().enumerate() {
                let expect = if n < t { n + 1 } else { 0 };
                if ss.len() != expect {
                    return Err(Error::Invalid(format!(
                        "cube `{}` has {} degeneracies, expected {expect}",
                        keys[n][y],
                        ss.len()
                    )));
                }
                if ss.iter().any(|&z| z >= keys[n + 1].len()) {
                    return Err(Error::Invalid(format!(
                        "degeneracy of `{}` out of range",
                        keys[n][y]
                    )));
                }
            }
        }
        let mut degenerate: Vec<Vec<bool>> = keys.iter().map(|k| vec![false; k.len()]).collect();
        for m in 0..t {
            for ss in &degeneracies[m] {
                for &z in ss {
                    degenerate[m + 1][z] = true;
                }
            }
        }
        Ok(Self {
            truncation,
            keys,
            degenerate,
            faces,
            degeneracies,
            index,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn count(&self, n: usize) -> usize {
        self.keys.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.keys.iter().map(Vec::len).collect()
    }

    pub fn key(&self, n: usize, x: usize) -> &str {
        &self.keys[n][x]
    }

    pub fn keys(&self, n: usize) -> &[String] {
        &self.keys[n]
    }

    pub fn find(&self, key: &str) -> Option<CubeIndex> {
        self.index.get(key).copied()
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        self.degenerate[n][x]
    }

    /// Indices of the non-degenerate cubes of dimension `n`.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.count(n)).filter(|&x| !self.degenerate[n][x]).collect()
    }

    /// `∂_i^ε x` for `x ∈ X_n`.
    pub fn face(&self, n: usize, x: usize, i: usize, eps: bool) -> usize {
        self.faces[n][x][i - 1][eps as usize]
    }

    /// `s_i^{m+1} y` for `y ∈ X_m`, `m < T`.
    pub fn degeneracy(&self, m: usize, y: usize, i: usize) -> usize {
        self.degeneracies[m][y][i - 1]
    }

    pub fn raw_faces(&self) -> &[Vec<Vec<[usize; 2]>>] {
        &self.faces
    }

    pub fn raw_degeneracies(&self) -> &[Vec<Vec<usize>>] {
        &self.degeneracies
    }

    /// Action `X(α)` of a cube morphism `α: I^m -> I^n` on `x ∈ X_n`,
    /// through its normal form. Needs `m, n <= T`.
    pub fn act(&self, alpha: &CubeMorphism, n: usize, x: usize) -> Result<usize> {
        if alpha.target_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: alpha.target_dim(),
            });
        }
        let t = self.truncation;
        if alpha.source_dim() > t || n > t {
            return Err(Error::Truncation {
                available: t,
                required: alpha.source_dim().max(n),
            });
        }
        let form = alpha.canonical_form();
        let (mut dim, mut cur) = (n, x);
        for &(j, eps) in &form.faces {
            cur = self.face(dim, cur, j, eps);
            dim -= 1;
        }
        for &i in &form.degeneracies {
            cur = self.degeneracy(dim, cur, i);
            dim += 1;
        }
        Ok(cur)
    }

    /// Checks the three relation families element-wise inside the truncation.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let t = self.truncation;
        let s = |m: usize, y: usize, i: usize| self.degeneracy(m, y, i);
        for n in 2..=t {
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
                                            self.key(n, x),
                                            self.key(n - 2, lhs),
                                            self.key(n - 2, rhs)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        // s^n_i s^{n-1}_j = s^n_{j+1} s^{n-1}_i for i <= j
        for n in 2..=t {
            for y in 0..self.count(n - 2) {
                for j in 1..n {
                    for i in 1..=j {
                        let lhs = s(n - 1, s(n - 2, y, j), i);
                        let rhs = s(n - 1, s(n - 2, y, i), j + 1);
                        if lhs != rhs {
                            rep.push(
                                "rel2",
                                format!("(i={i}, j={j}) on `{}`", self.key(n - 2, y)),
                            );
                        }
                    }
                }
            }
        }
        // ∂_i^{n+1,α} s_j^{n+1}
        for n in 0..t {
            for x in 0..self.count(n) {
                for j in 1..=n + 1 {
                    let sx = s(n, x, j);
                    for i in 1..=n + 1 {
                        for a in [false, true] {
                            let lhs = self.face(n + 1, sx, i, a);
                            let rhs = if i < j {
                                s(n - 1, self.face(n, x, i, a), j - 1)
                            } else if j < i {
                                s(n - 1, self.face(n, x, i - 1, a), j)
                            } else {
                                x
                            };
                            if lhs != rhs {
                                rep.push(
                                    "rel3",
                                    format!(
                                        "(i={i}, j={j}, α={}) on `{}`",
                                        a as u8,
                                        self.key(n, x)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    /// Same cubical set cut down to a smaller truncation.
    pub fn truncate(&self, t: usize) -> Result<Self> {
        if t > self.truncation {
            return Err(Error::Truncation {
                available: self.truncation,
                required: t,
            });
        }
        let mut degens: Vec<Vec<Vec<usize>>> = self.degeneracies[..=t].to_vec();
        for d in degens[t].iter_mut() {
            d.clear();
        }
        Self::new(
            t,
            self.keys[..=t].to_vec(),
            self.faces[..=t].to_vec(),
            degens,
        )
    }
}
