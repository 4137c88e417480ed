//! Coefficient systems of finitely generated free abelian groups on cubical
//! sets, stored on elementary morphisms only.

mod diagram;
mod induced;
mod transport;

use serde::{Deserialize, Serialize};

use crate::cubset::CubesTable;
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::zlinalg::{is_unimodular, unimodular_inverse, IntMatrix};

pub use diagram::{natural_system_via_d, system_from_diagram_last_vertex};
pub use induced::{extend_semicubical, local_system, system_from_generators, SemiCubicalSystem};
pub use transport::{direct_image, direct_image_along, pullback_along, pullback_system};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Contravariant,
    Covariant,
}

impl Variance {
    pub fn flip(self) -> Self {
        match self {
            Variance::Contravariant => Variance::Covariant,
            Variance::Covariant => Variance::Contravariant,
        }
    }
}

/// A system over a [`CubesTable`].
///
/// Contravariant: face matrix `M(x,i,ε): F(x) -> F(∂_i^ε x)` and degeneracy
/// matrix `N(y,i): F(y) -> F(s_i y)`. Covariant systems store the reversed
/// matrices `F(∂_i^ε x) -> F(x)` and `F(s_i y) -> F(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSystem {
    variance: Variance,
    base: CubesTable,
    ranks: Vec<Vec<usize>>,
    /// `faces[n][x][i-1][ε]`
    faces: Vec<Vec<Vec<[IntMatrix; 2]>>>,
    /// `degeneracies[m][y][i-1]` for `s_i^{m+1}`.
    degeneracies: Vec<Vec<Vec<IntMatrix>>>,
}

impl CoefficientSystem {
    pub fn new(
        base: CubesTable,
        variance: Variance,
        ranks: Vec<Vec<usize>>,
        faces: Vec<Vec<Vec<[IntMatrix; 2]>>>,
        degeneracies: Vec<Vec<Vec<IntMatrix>>>,
    ) -> Result<Self> {
        let t = base.truncation();
        if ranks.len() != t + 1 || faces.len() != t + 1 || degeneracies.len() != t + 1 {
            return Err(Error::Invalid("system does not cover the truncation".into()));
        }
        let contra = variance == Variance::Contravariant;
        let expect = |from: usize, to: usize| if contra { (to, from) } else { (from, to) };
        for n in 0..=t {
            if ranks[n].len() != base.count(n)
                || faces[n].len() != base.count(n)
                || degeneracies[n].len() != base.count(n)
            {
                return Err(Error::Invalid(format!("system size mismatch in dim {n}")));
            }
            for x in 0..base.count(n) {
                let key = base.key(n, x);
                if faces[n][x].len() != n {
                    return Err(Error::Invalid(format!("`{key}` needs {n} face pairs")));
                }
                for i in 1..=n {
                    for eps in [false, true] {
                        let y = base.face(n, x, i, eps);
                        let m = &faces[n][x][i - 1][eps as usize];
                        let (er, ec) = expect(ranks[n][x], ranks[n - 1][y]);
                        check_shape(m, er, ec, || format!("face ({i},{}) of `{key}`", eps as u8))?;
                    }
                }
                let ds = if n < t { n + 1 } else { 0 };
                if degeneracies[n][x].len() != ds {
                    return Err(Error::Invalid(format!("`{key}` needs {ds} degeneracies")));
                }
                for i in 1..=ds {
                    let z = base.degeneracy(n, x, i);
                    let m = &degeneracies[n][x][i - 1];
                    let (er, ec) = expect(ranks[n][x], ranks[n + 1][z]);
                    check_shape(m, er, ec, || format!("degeneracy {i} of `{key}`"))?;
                }
            }
        }
        Ok(Self {
            variance,
            base,
            ranks,
            faces,
            degeneracies,
        })
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn base(&self) -> &CubesTable {
        &self.base
    }

    pub fn truncation(&self) -> usize {
        self.base.truncation()
    }

    pub fn rank(&self, n: usize, x: usize) -> usize {
        self.ranks[n][x]
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    /// Sum of ranks over `X_n`.
    pub fn total_rank(&self, n: usize) -> usize {
        self.ranks[n].iter().sum()
    }

    pub fn face_matrix(&self, n: usize, x: usize, i: usize, eps: bool) -> &IntMatrix {
        &self.faces[n][x][i - 1][eps as usize]
    }

    pub fn degeneracy_matrix(&self, m: usize, y: usize, i: usize) -> &IntMatrix {
        &self.degeneracies[m][y][i - 1]
    }

    /// Same data read with the opposite variance (every matrix transposed).
    pub fn transposed(&self) -> Self {
        Self {
            variance: self.variance.flip(),
            base: self.base.clone(),
            ranks: self.ranks.clone(),
            faces: self
                .faces
                .iter()
                .map(|fs| {
                    fs.iter()
                        .map(|xf| xf.iter().map(|p| [p[0].transpose(), p[1].transpose()]).collect())
                        .collect()
                })
                .collect(),
            degeneracies: self
                .degeneracies
                .iter()
                .map(|ds| ds.iter().map(|yd| yd.iter().map(IntMatrix::transpose).collect()).collect())
                .collect(),
        }
    }

    /// Every matrix identity induced by the cube relations inside the
    /// truncation.
    pub fn validate(&self) -> ValidationReport {
        if self.variance == Variance::Covariant {
            return self.transposed().validate();
        }
        let mut rep = self.base.validate();
        let x = &self.base;
        let t = x.truncation();
        let m = |n: usize, c: usize, i: usize, e: bool| self.face_matrix(n, c, i, e);
        let nn = |k: usize, c: usize, i: usize| self.degeneracy_matrix(k, c, i);
        if !rep.is_valid() {
            return rep;
        }
        for n in 2..=t {
            for c in 0..x.count(n) {
                for j in 2..=n {
                    for i in 1..j {
                        for a in [false, true] {
                            for b in [false, true] {
                                let lhs = m(n - 1, x.face(n, c, j, b), i, a) * m(n, c, j, b);
                                let rhs = m(n - 1, x.face(n, c, i, a), j - 1, b) * m(n, c, i, a);
                                if lhs != rhs {
                                    rep.push(
                                        "rel1",
                                        format!(
                                            "(i={i}, j={j}, α={}, β={}) at `{}`",
                                            a as u8,
                                            b as u8,
                                            x.key(n, c)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        for n in 2..=t {
            for y in 0..x.count(n - 2) {
                for j in 1..n {
                    for i in 1..=j {
                        let lhs = nn(n - 1, x.degeneracy(n - 2, y, j), i) * nn(n - 2, y, j);
                        let rhs = nn(n - 1, x.degeneracy(n - 2, y, i), j + 1) * nn(n - 2, y, i);
                        if lhs != rhs {
                            rep.push("rel2", format!("(i={i}, j={j}) at `{}`", x.key(n - 2, y)));
                        }
                    }
                }
            }
        }
        for n in 0..t {
            for c in 0..x.count(n) {
                for j in 1..=n + 1 {
                    let sc = x.degeneracy(n, c, j);
                    for i in 1..=n + 1 {
                        for a in [false, true] {
                            let lhs = m(n + 1, sc, i, a) * nn(n, c, j);
                            let ok = if i < j {
                                lhs == nn(n - 1, x.face(n, c, i, a), j - 1) * m(n, c, i, a)
                            } else if j < i {
                                lhs == nn(n - 1, x.face(n, c, i - 1, a), j) * m(n, c, i - 1, a)
                            } else {
                                lhs.is_identity()
                            };
                            if !ok {
                                rep.push(
                                    "rel3",
                                    format!("(i={i}, j={j}, α={}) at `{}`", a as u8, x.key(n, c)),
                                );
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    /// Every face and degeneracy matrix is unimodular.
    pub fn is_local(&self) -> bool {
        self.faces.iter().flatten().flatten().flatten().all(is_unimodular)
            && self.degeneracies.iter().flatten().flatten().all(is_unimodular)
    }

    /// Replaces `F(x)` by an isomorphic copy through the unimodular matrices
    /// `change[n][x]: F(x) -> F'(x)`.
    pub fn conjugate(&self, change: &[Vec<IntMatrix>]) -> Result<Self> {
        let inv = change
            .iter()
            .map(|ps| {
                ps.iter()
                    .map(|p| unimodular_inverse(p).ok_or(Error::NotInvertible("change of basis".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let x = &self.base;
        let contra = self.variance == Variance::Contravariant;
        // For a matrix F(a) -> F(b) (contravariant orientation) the new one is P_b M P_a^{-1}.
        let conj = |mat: &IntMatrix, (na, a): (usize, usize), (nb, b): (usize, usize)| {
            if contra {
                &(&change[nb][b] * mat) * &inv[na][a]
            } else {
                &(&change[na][a] * mat) * &inv[nb][b]
            }
        };
        let faces = (0..=x.truncation())
            .map(|n| {
                (0..x.count(n))
                    .map(|c| {
                        (1..=n)
                            .map(|i| {
                                [false, true].map(|e| {
                                    conj(self.face_matrix(n, c, i, e), (n, c), (n - 1, x.face(n, c, i, e)))
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let degeneracies = (0..=x.truncation())
            .map(|n| {
                (0..x.count(n))
                    .map(|c| {
                        (1..=self.degeneracies[n][c].len())
                            .map(|i| {
                                conj(self.degeneracy_matrix(n, c, i), (n, c), (n + 1, x.degeneracy(n, c, i)))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(x.clone(), self.variance, self.ranks.clone(), faces, degeneracies)
    }

    /// Cube-wise direct sum `F ⊕ G` over the same table.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.base != other.base || self.variance != other.variance {
            return Err(Error::Invalid("direct sum needs the same base and variance".into()));
        }
        let ranks = self
            .ranks
            .iter()
            .zip(&other.ranks)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p + q).collect())
            .collect();
        let faces = self
            .faces
            .iter()
            .zip(&other.faces)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(p, q)| {
                        p.iter()
                            .zip(q)
                            .map(|(u, v)| {
                                [
                                    IntMatrix::block_diag(&[&u[0], &v[0]]),
                                    IntMatrix::block_diag(&[&u[1], &v[1]]),
                                ]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let degeneracies = self
            .degeneracies
            .iter()
            .zip(&other.degeneracies)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(p, q)| p.iter().zip(q).map(|(u, v)| IntMatrix::block_diag(&[u, v])).collect())
                    .collect()
            })
            .collect();
        Self::new(self.base.clone(), self.variance, ranks, faces, degeneracies)
    }
}

fn check_shape(m: &IntMatrix, rows: usize, cols: usize, ctx: impl FnOnce() -> String) -> Result<()> {
    if m.shape() == (rows, cols) {
        Ok(())
    } else {
        Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
            expected_rows: rows,
            expected_cols: cols,
            context: ctx(),
        })
    }
}

/// Rank `r` everywhere with identity matrices.
pub fn constant_system(base: &CubesTable, r: usize, variance: Variance) -> CoefficientSystem {
    let t = base.truncation();
    let id = IntMatrix::identity(r);
    let ranks = (0..=t).map(|n| vec![r; base.count(n)]).collect();
    let faces = (0..=t)
        .map(|n| vec![vec![[id.clone(), id.clone()]; n]; base.count(n)])
        .collect();
    let degeneracies = (0..=t)
        .map(|n| vec![vec![id.clone(); if n < t { n + 1 } else { 0 }]; base.count(n)])
        .collect();
    CoefficientSystem::new(base.clone(), variance, ranks, faces, degeneracies)
        .expect("constant system is well formed")
}

/// Rank `r` on cubes where `keep` holds and `0` elsewhere, identities
/// between kept cubes. Functorial when the kept cubes are closed under
/// degeneracies and convex for faces, e.g. a subcomplex or its complement.
pub fn indicator_system(
    base: &CubesTable,
    r: usize,
    variance: Variance,
    keep: impl Fn(usize, usize) -> bool,
) -> CoefficientSystem {
    let t = base.truncation();
    let rk = |n: usize, c: usize| if keep(n, c) { r } else { 0 };
    let map = |from: (usize, usize), to: (usize, usize)| {
        let (a, b) = (rk(from.0, from.1), rk(to.0, to.1));
        let (rows, cols) = match variance {
            Variance::Contravariant => (b, a),
            Variance::Covariant => (a, b),
        };
        if a == b {
            IntMatrix::identity(a)
        } else {
            IntMatrix::zeros(rows, cols)
        }
    };
    let ranks = (0..=t).map(|n| (0..base.count(n)).map(|c| rk(n, c)).collect()).collect();
    let faces = (0..=t)
        .map(|n| {
            (0..base.count(n))
                .map(|c| {
                    (1..=n)
                        .map(|i| [false, true].map(|e| map((n, c), (n - 1, base.face(n, c, i, e)))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..=t)
        .map(|n| {
            (0..base.count(n))
                .map(|c| {
                    let ds = if n < t { n + 1 } else { 0 };
                    (1..=ds).map(|i| map((n, c), (n + 1, base.degeneracy(n, c, i)))).collect()
                })
                .collect()
        })
        .collect();
    CoefficientSystem::new(base.clone(), variance, ranks, faces, degeneracies)
        .expect("indicator system is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubset::{standard_cube, PresentedCubicalSet};

    #[test]
    fn constant_is_valid_and_local() {
        let t = standard_cube(2).expand(3);
        let f = constant_system(&t, 3, Variance::Contravariant);
        assert!(f.validate().is_valid());
        assert!(f.is_local());
        let z = constant_system(&t, 0, Variance::Covariant);
        assert!(z.validate().is_valid());
        assert_eq!(z.total_rank(2), 0);
    }

    #[test]
    fn rel3_diagonal_violation() {
        let t = PresentedCubicalSet::from_keys(&[("v", vec![])]).unwrap().expand(1);
        let f = constant_system(&t, 1, Variance::Contravariant);
        let mut faces = f.faces.clone();
        faces[1][0][0][0] = IntMatrix::from_rows(&[vec![2]]);
        let g = CoefficientSystem::new(t, Variance::Contravariant, f.ranks.clone(), faces, f.degeneracies.clone())
            .unwrap();
        let rep = g.validate();
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| v.relation == "rel3" && v.witness.contains("i=1, j=1")));
        assert!(!g.is_local());
    }

    #[test]
    fn shape_errors() {
        let t = standard_cube(1).expand(1);
        let f = constant_system(&t, 1, Variance::Contravariant);
        let mut ranks = f.ranks.clone();
        ranks[0][0] = 2;
        assert!(matches!(
            CoefficientSystem::new(t, Variance::Contravariant, ranks, f.faces.clone(), f.degeneracies.clone()),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn conjugation_and_sum_stay_valid() {
        let t = standard_cube(1).expand(2);
        let f = constant_system(&t, 2, Variance::Contravariant);
        let p = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let change: Vec<Vec<IntMatrix>> = (0..=2).map(|n| vec![p.clone(); t.count(n)]).collect();
        let g = f.conjugate(&change).unwrap();
        assert!(g.validate().is_valid());
        let h = g.direct_sum(&f).unwrap();
        assert!(h.validate().is_valid());
        assert_eq!(h.rank(1, 0), 4);
        assert!(f.transposed().validate().is_valid());
    }

    #[test]
    fn indicator_of_complement() {
        let x = standard_cube(1);
        let t = x.expand(2);
        // Complement of the vertex [0] and everything degenerate on it.
        let f = indicator_system(&t, 1, Variance::Contravariant, |n, c| {
            !t.key(n, c).starts_with("[0]@")
        });
        assert!(f.validate().is_valid());
    }
}
