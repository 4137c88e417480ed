use crate::cubset::{CubesTable, CubicalMap};
use crate::error::{Error, Result};
use crate::zlinalg::IntMatrix;

use super::{CoefficientSystem, Variance};

fn same_table(a: &CubesTable, b: &CubesTable) -> Result<()> {
    if a.truncation() != b.truncation() {
        return Err(Error::Truncation {
            available: b.truncation(),
            required: a.truncation(),
        });
    }
    if (0..=a.truncation()).any(|n| a.keys(n) != b.keys(n)) {
        return Err(Error::Invalid("system is not based on the expected table".into()));
    }
    Ok(())
}

/// `F ∘ (□/f)^op` along a table map `map[n][x] = f(x)`; the value at `x` is
/// the value at `f(x)`.
pub fn pullback_along(
    base: &CubesTable,
    map: &[Vec<usize>],
    f: &CoefficientSystem,
) -> Result<CoefficientSystem> {
    let t = base.truncation();
    if f.truncation() != t || map.len() != t + 1 {
        return Err(Error::Truncation {
            available: f.truncation(),
            required: t,
        });
    }
    let ranks = (0..=t)
        .map(|n| map[n].iter().map(|&y| f.rank(n, y)).collect())
        .collect();
    let faces = (0..=t)
        .map(|n| {
            map[n]
                .iter()
                .map(|&y| {
                    (1..=n)
                        .map(|i| [false, true].map(|e| f.face_matrix(n, y, i, e).clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..=t)
        .map(|n| {
            map[n]
                .iter()
                .map(|&y| {
                    let ds = if n < t { n + 1 } else { 0 };
                    (1..=ds).map(|i| f.degeneracy_matrix(n, y, i).clone()).collect()
                })
                .collect()
        })
        .collect();
    CoefficientSystem::new(base.clone(), f.variance(), ranks, faces, degeneracies)
}

/// `f^* F` for `F` over `expand(Y, T)`; the result lives on `expand(X, T)`.
pub fn pullback_system(map: &CubicalMap, f: &CoefficientSystem) -> Result<CoefficientSystem> {
    let t = f.truncation();
    same_table(&map.target().expand(t), f.base())?;
    let src = map.source().expand(t);
    let tm = map.table_map(&src, f.base())?;
    pullback_along(&src, &tm, f)
}

/// `f_* F` along a table map from `F`'s base into `target`: the value at
/// `y` is the direct sum of `F(x)` over `f(x) = y`, in index order.
pub fn direct_image_along(
    target: &CubesTable,
    map: &[Vec<usize>],
    f: &CoefficientSystem,
) -> Result<CoefficientSystem> {
    let src = f.base();
    let t = target.truncation();
    if src.truncation() != t || map.len() != t + 1 {
        return Err(Error::Truncation {
            available: src.truncation(),
            required: t,
        });
    }
    // offset[n][x]: position of F(x) inside (f_*F)(f(x)).
    let mut ranks: Vec<Vec<usize>> = (0..=t).map(|n| vec![0; target.count(n)]).collect();
    let mut offset: Vec<Vec<usize>> = Vec::with_capacity(t + 1);
    for n in 0..=t {
        let mut off = Vec::with_capacity(src.count(n));
        for (x, &y) in map[n].iter().enumerate() {
            off.push(ranks[n][y]);
            ranks[n][y] += f.rank(n, x);
        }
        offset.push(off);
    }
    let contra = f.variance() == Variance::Contravariant;
    let mut faces: Vec<Vec<Vec<[IntMatrix; 2]>>> = (0..=t)
        .map(|n| {
            (0..target.count(n))
                .map(|y| {
                    (1..=n)
                        .map(|i| {
                            [false, true].map(|e| {
                                let (a, b) = (ranks[n][y], ranks[n - 1][target.face(n, y, i, e)]);
                                if contra {
                                    IntMatrix::zeros(b, a)
                                } else {
                                    IntMatrix::zeros(a, b)
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut degeneracies: Vec<Vec<Vec<IntMatrix>>> = (0..=t)
        .map(|n| {
            (0..target.count(n))
                .map(|y| {
                    let ds = if n < t { n + 1 } else { 0 };
                    (1..=ds)
                        .map(|i| {
                            let (a, b) = (ranks[n][y], ranks[n + 1][target.degeneracy(n, y, i)]);
                            if contra {
                                IntMatrix::zeros(b, a)
                            } else {
                                IntMatrix::zeros(a, b)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let not_natural = |what: &str, n: usize, x: usize| {
        Error::Invalid(format!("table map does not commute with {what} at `{}`", src.key(n, x)))
    };
    for n in 0..=t {
        for x in 0..src.count(n) {
            let y = map[n][x];
            for i in 1..=n {
                for e in [false, true] {
                    let dx = src.face(n, x, i, e);
                    if map[n - 1][dx] != target.face(n, y, i, e) {
                        return Err(not_natural("faces", n, x));
                    }
                    let (r, c) = if contra {
                        (offset[n - 1][dx], offset[n][x])
                    } else {
                        (offset[n][x], offset[n - 1][dx])
                    };
                    faces[n][y][i - 1][e as usize].add_block(r, c, f.face_matrix(n, x, i, e));
                }
            }
            if n < t {
                for i in 1..=n + 1 {
                    let sx = src.degeneracy(n, x, i);
                    if map[n + 1][sx] != target.degeneracy(n, y, i) {
                        return Err(not_natural("degeneracies", n, x));
                    }
                    let (r, c) = if contra {
                        (offset[n + 1][sx], offset[n][x])
                    } else {
                        (offset[n][x], offset[n + 1][sx])
                    };
                    degeneracies[n][y][i - 1].add_block(r, c, f.degeneracy_matrix(n, x, i));
                }
            }
        }
    }
    CoefficientSystem::new(target.clone(), f.variance(), ranks, faces, degeneracies)
}

/// `f_* F` for `F` over `expand(X, T)`; the result lives on `expand(Y, T)`.
pub fn direct_image(map: &CubicalMap, f: &CoefficientSystem) -> Result<CoefficientSystem> {
    let t = f.truncation();
    same_table(&map.source().expand(t), f.base())?;
    let tgt = map.target().expand(t);
    let tm = map.table_map(f.base(), &tgt)?;
    direct_image_along(&tgt, &tm, f)
}
