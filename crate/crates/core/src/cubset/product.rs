use crate::error::{Error, Result};

use super::presented::PresentedCubicalSet;
use super::table::CubesTable;

/// Levelwise product `A × B` truncated at `t`.
pub fn product(a: &PresentedCubicalSet, b: &PresentedCubicalSet, t: usize) -> CubesTable {
    product_tables(&a.expand(t), &b.expand(t)).expect("equal truncations")
}

/// Levelwise product of two tables of the same truncation. Pairs are keyed
/// `(ka|kb)` and indexed `a * |B_n| + b`.
pub fn product_tables(a: &CubesTable, b: &CubesTable) -> Result<CubesTable> {
    let t = a.truncation();
    if b.truncation() != t {
        return Err(Error::DimensionMismatch {
            expected: t,
            found: b.truncation(),
        });
    }
    let keys = (0..=t)
        .map(|n| {
            let mut ks = Vec::with_capacity(a.count(n) * b.count(n));
            for ka in a.keys(n) {
                for kb in b.keys(n) {
                    ks.push(format!("({ka}|{kb})"));
                }
            }
            ks
        })
        .collect();
    let faces = (0..=t)
        .map(|n| {
            let nb = b.count(n);
            let nb1 = if n == 0 { 0 } else { b.count(n - 1) };
            (0..a.count(n) * nb)
                .map(|p| {
                    let (x, y) = (p / nb, p % nb);
                    (1..=n)
                        .map(|i| {
                            [false, true]
                                .map(|e| a.face(n, x, i, e) * nb1 + b.face(n, y, i, e))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..=t)
        .map(|m| {
            let nb = b.count(m);
            let nb1 = b.count(m + 1);
            (0..a.count(m) * nb)
                .map(|p| {
                    if m == t {
                        return Vec::new();
                    }
                    let (x, y) = (p / nb, p % nb);
                    (1..=m + 1)
                        .map(|i| a.degeneracy(m, x, i) * nb1 + b.degeneracy(m, y, i))
                        .collect()
                })
                .collect()
        })
        .collect();
    CubesTable::new(t, keys, faces, degeneracies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubset::standard_cube;

    #[test]
    fn square_of_intervals() {
        let p = product(&standard_cube(1), &standard_cube(1), 2);
        assert_eq!(p.count(0), 4);
        assert_eq!(p.nondegenerate(2).len(), 2);
        assert!(p.validate().is_valid());
    }

    #[test]
    fn unit_law() {
        let x = standard_cube(2);
        let pt = standard_cube(0);
        let p = product(&pt, &x, 3);
        let e = x.expand(3);
        assert_eq!(p.counts(), e.counts());
        for n in 0..=3 {
            for c in 0..e.count(n) {
                assert_eq!(p.is_degenerate(n, c), e.is_degenerate(n, c));
                for i in 1..=n {
                    for eps in [false, true] {
                        assert_eq!(p.face(n, c, i, eps), e.face(n, c, i, eps));
                    }
                }
            }
        }
    }
}
