//! Smith normal form over ℤ with optional tracking of the unimodular
//! transforms and their inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain `d1 | d2 | …`. The inverses are kept because the
/// cokernel section and the kernel retraction need them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Transforms {
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect()
}

fn to_matrix(rows: Vec<Vec<BigInt>>, ncols: usize) -> IntMatrix {
    let n = rows.len();
    IntMatrix::from_vec(n, ncols, rows.into_iter().flatten().collect())
}

/// `row[dst] += q * row[src]`, skipping zeros of the source row.
fn axpy_rows(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for j in from..b.len() {
        if !b[j].is_zero() {
            a[j] += q * &b[j];
        }
    }
}

/// `col[dst] += q * col[src]` on a row-major matrix.
fn axpy_cols(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize) {
    for row in m.iter_mut().skip(from) {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] += t;
        }
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

struct Engine {
    d: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    tr: Option<Transforms>,
}

impl Engine {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap(a, b);
        if let Some(t) = &mut self.tr {
            t.u.swap(a, b);
            swap_cols(&mut t.u_inv, a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        swap_cols(&mut self.d, a, b);
        if let Some(t) = &mut self.tr {
            swap_cols(&mut t.v, a, b);
            t.v_inv.swap(a, b);
        }
    }

    /// `row_dst += q row_src`.
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        axpy_rows(&mut self.d, dst, src, q, from);
        if let Some(t) = &mut self.tr {
            axpy_rows(&mut t.u, dst, src, q, 0);
            axpy_cols(&mut t.u_inv, src, dst, &-q, 0);
        }
    }

    /// `col_dst += q col_src`.
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        axpy_cols(&mut self.d, dst, src, q, from);
        if let Some(t) = &mut self.tr {
            axpy_cols(&mut t.v, dst, src, q, 0);
            axpy_rows(&mut t.v_inv, src, dst, &-q, 0);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in self.d[r].iter_mut() {
            *x = -&*x;
        }
        if let Some(t) = &mut self.tr {
            for x in t.u[r].iter_mut() {
                *x = -&*x;
            }
            for row in t.u_inv.iter_mut() {
                row[r] = -&row[r];
            }
        }
    }

    /// Minimal-|.| nonzero entry of the trailing submatrix, first in
    /// row-major order among ties.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.d[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < self.d[bi][bj].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            loop {
                let Some((pi, pj)) = self.find_pivot(t) else {
                    return t;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.d[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.d[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.d[i][t] / &p;
                    if !q.is_zero() {
                        self.add_row(i, t, &-q, t);
                    }
                    if !self.d[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    if self.d[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.d[t][j] / &p;
                    if !q.is_zero() {
                        self.add_col(j, t, &-q, t);
                    }
                    if !self.d[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                if !p.magnitude().is_one() {
                    let bad = (t + 1..self.rows).find(|&i| {
                        (t + 1..self.cols).any(|j| !self.d[i][j].is_multiple_of(&p))
                    });
                    if let Some(i) = bad {
                        self.add_row(t, i, &BigInt::one(), t);
                        continue;
                    }
                }
                break;
            }
            if self.d[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

fn engine(a: &IntMatrix, track: bool) -> Engine {
    let (rows, cols) = a.shape();
    let d = (0..rows).map(|i| a.row(i).to_vec()).collect();
    Engine {
        d,
        rows,
        cols,
        tr: track.then(|| Transforms {
            u: identity_rows(rows),
            u_inv: identity_rows(rows),
            v: identity_rows(cols),
            v_inv: identity_rows(cols),
        }),
    }
}

/// Full decomposition with transforms. Pivot rule: smallest nonzero absolute
/// value, ties broken by (row, col) order, so the output is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut e = engine(a, true);
    let rank = e.run();
    let (rows, cols) = (e.rows, e.cols);
    let t = e.tr.take().expect("tracked");
    SmithDecomposition {
        u: to_matrix(t.u, rows),
        u_inv: to_matrix(t.u_inv, rows),
        v: to_matrix(t.v, cols),
        v_inv: to_matrix(t.v_inv, cols),
        d: to_matrix(e.d, cols),
        rank,
    }
}

/// Nonzero invariant factors only; skips the transform bookkeeping.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut e = engine(a, false);
    let rank = e.run();
    (0..rank).map(|i| e.d[i][i].clone()).collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).len()
}

/// Square with determinant ±1.
pub fn is_unimodular(a: &IntMatrix) -> bool {
    a.is_square() && {
        let f = invariant_factors(a);
        f.len() == a.rows() && f.iter().all(One::is_one)
    }
}

/// Inverse of a unimodular matrix, or `None`.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if !a.is_square() {
        return None;
    }
    let s = smith_normal_form(a);
    if s.rank != a.rows() || !s.d.is_identity() {
        return None;
    }
    // U A V = I  =>  A^{-1} = V U
    Some(&s.v * &s.u)
}

/// Determinant via the Smith form (sign from the transforms is lost), so only
/// the absolute value is returned.
pub fn abs_determinant(a: &IntMatrix) -> BigInt {
    assert!(a.is_square());
    let f = invariant_factors(a);
    if f.len() < a.rows() {
        BigInt::zero()
    } else {
        f.iter().product()
    }
}

/// ℤ-basis of `ker A` as the columns of a `cols x (cols - rank)` matrix,
/// together with an integer left inverse of that basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub basis: IntMatrix,
    pub retraction: IntMatrix,
}

pub fn kernel(a: &IntMatrix) -> Kernel {
    let s = smith_normal_form(a);
    let c = a.cols();
    Kernel {
        basis: s.v.select_cols(s.rank..c),
        retraction: s.v_inv.select_rows(s.rank..c),
    }
}

/// Columns form a saturated ℤ-basis of `{x : Ax = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    kernel(a).basis
}

/// Projection of `ℤ^rows` onto the free part of `coker A`, a section of it,
/// and the torsion of the cokernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CokernelProjection {
    pub proj: IntMatrix,
    pub section: IntMatrix,
    pub torsion: Vec<BigInt>,
}

pub fn cokernel_projection(a: &IntMatrix) -> CokernelProjection {
    let s = smith_normal_form(a);
    let r = a.rows();
    let torsion = s
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    CokernelProjection {
        proj: s.u.select_rows(s.rank..r),
        section: s.u_inv.select_cols(s.rank..r),
        torsion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!((&s.u * &s.u_inv).is_identity());
        assert!((&s.v * &s.v_inv).is_identity());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(f.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn two_by_two_example() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        check_decomposition(&a);
    }

    #[test]
    fn zero_and_identity() {
        for (r, c) in [(0, 0), (2, 3), (3, 1)] {
            let z = IntMatrix::zeros(r, c);
            let s = smith_normal_form(&z);
            assert!(s.d.is_zero());
            assert_eq!(s.rank, 0);
        }
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = (k.get(0, 0).clone(), k.get(1, 0).clone());
        assert!(v == (1.into(), (-1).into()) || v == ((-1).into(), 1.into()));

        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);

        let k = kernel(&IntMatrix::from_rows(&[vec![0, 0]]));
        assert_eq!(k.basis.cols(), 2);
        assert_eq!(abs_determinant(&k.basis), BigInt::one());
        assert!((&k.retraction * &k.basis).is_identity());
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_projection(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(c.torsion, vec![BigInt::from(2)]);
        assert_eq!(c.proj.rows(), 0);

        let c = cokernel_projection(&IntMatrix::from_rows(&[vec![1], vec![0]]));
        assert!(c.torsion.is_empty());
        assert_eq!(c.proj, IntMatrix::from_rows(&[vec![0, 1]]));
        assert!((&c.proj * &c.section).is_identity());

        let c = cokernel_projection(&IntMatrix::zeros(2, 1));
        assert_eq!(c.proj, IntMatrix::identity(2));
    }

    #[test]
    fn inverses() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert!(is_unimodular(&a));
        let inv = unimodular_inverse(&a).unwrap();
        assert!((&a * &inv).is_identity());
        assert!(!is_unimodular(&IntMatrix::from_rows(&[vec![2]])));
        assert!(unimodular_inverse(&IntMatrix::from_rows(&[vec![1, 1]])).is_none());
        assert_eq!(abs_determinant(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])), BigInt::from(8));
    }

    #[test]
    fn chain_needs_divisibility_fix() {
        // diag(2,3) is not in Smith form; the result must be diag(1,6).
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
        check_decomposition(&a);
    }

    #[test]
    fn deterministic() {
        let a = IntMatrix::from_rows(&[vec![3, 5, -7], vec![4, 6, 8], vec![-2, 9, 1]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        check_decomposition(&a);
    }
}
