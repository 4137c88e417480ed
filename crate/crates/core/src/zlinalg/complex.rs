use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{invariant_factors, IntMatrix};
use crate::error::{Error, Result};
use crate::par;

/// `0 <- C_0 <- C_1 <- … <- C_T` with `d_n: C_n -> C_{n-1}` of shape
/// `r_{n-1} x r_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl FreeChainComplex {
    /// `boundaries[n-1]` is `d_n` for `1 <= n <= T`, `T = ranks.len() - 1`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        check_shapes(&ranks, &boundaries, true)?;
        Ok(Self { ranks, boundaries })
    }

    pub fn zero(top_degree: usize) -> Self {
        Self {
            ranks: vec![0; top_degree + 1],
            boundaries: (0..top_degree).map(|_| IntMatrix::zeros(0, 0)).collect(),
        }
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d_n` for `n >= 1`.
    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n - 1]
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    /// First degree `n` with `d_n d_{n+1} != 0`, if any.
    pub fn square_defect(&self) -> Option<usize> {
        (1..self.boundaries.len())
            .find(|&n| !(&self.boundaries[n - 1] * &self.boundaries[n]).is_zero())
    }
}

/// `0 -> C^0 -> C^1 -> … -> C^T` with `d^k: C^k -> C^{k+1}` of shape
/// `r_{k+1} x r_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCochainComplex {
    ranks: Vec<usize>,
    coboundaries: Vec<IntMatrix>,
}

impl FreeCochainComplex {
    /// `coboundaries[k]` is `d^k` for `0 <= k < T`.
    pub fn new(ranks: Vec<usize>, coboundaries: Vec<IntMatrix>) -> Result<Self> {
        check_shapes(&ranks, &coboundaries, false)?;
        Ok(Self {
            ranks,
            coboundaries,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn coboundary(&self, k: usize) -> &IntMatrix {
        &self.coboundaries[k]
    }

    pub fn coboundaries(&self) -> &[IntMatrix] {
        &self.coboundaries
    }

    pub fn square_defect(&self) -> Option<usize> {
        (1..self.coboundaries.len())
            .find(|&k| !(&self.coboundaries[k] * &self.coboundaries[k - 1]).is_zero())
            .map(|k| k - 1)
    }
}

fn check_shapes(ranks: &[usize], maps: &[IntMatrix], chain: bool) -> Result<()> {
    if ranks.is_empty() || maps.len() + 1 != ranks.len() {
        return Err(Error::Invalid(format!(
            "{} ranks need {} maps, got {}",
            ranks.len(),
            ranks.len().saturating_sub(1),
            maps.len()
        )));
    }
    for (k, m) in maps.iter().enumerate() {
        let (er, ec) = if chain {
            (ranks[k], ranks[k + 1])
        } else {
            (ranks[k + 1], ranks[k])
        };
        if m.shape() != (er, ec) {
            return Err(Error::Shape {
                rows: m.rows(),
                cols: m.cols(),
                expected_rows: er,
                expected_cols: ec,
                context: format!("{} {}", if chain { "d_" } else { "d^" }, if chain { k + 1 } else { k }),
            });
        }
    }
    Ok(())
}

/// `ℤ^betti ⊕ ℤ/t1 ⊕ ℤ/t2 ⊕ …` with `t1 | t2 | …`, all `t_i >= 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(betti: usize) -> Self {
        Self {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn new(betti: usize, torsion: Vec<i64>) -> Self {
        Self {
            betti,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// JSON record `{degree, betti, torsion}`; torsion entries that do not
    /// fit an `i64` are written as decimal strings.
    pub fn to_record(&self, degree: usize) -> HomologyRecord {
        HomologyRecord {
            degree,
            betti: self.betti,
            torsion: self
                .torsion
                .iter()
                .map(|t| match i64::try_from(t) {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => serde_json::Value::from(t.to_string()),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomologyRecord {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<serde_json::Value>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

/// `"H_0 = Z; H_1 = Z^2"`; `prefix` is `"H_"` or `"H^"`.
pub fn format_groups(prefix: &str, groups: &[HomologyGroup]) -> String {
    groups
        .iter()
        .enumerate()
        .map(|(n, g)| format!("{prefix}{n} = {g}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// `ker(outgoing) / im(incoming)` on `ℤ^dim`, given the invariant factors of
/// both maps. Since the kernel is saturated its torsion is that of
/// `ℤ^dim / im(incoming)`.
fn subquotient(dim: usize, outgoing: &[BigInt], incoming: &[BigInt]) -> HomologyGroup {
    HomologyGroup {
        betti: dim - outgoing.len() - incoming.len(),
        torsion: incoming.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// `H_n = ker d_n / im d_{n+1}` for `0 <= n < T`. Degree `T` is not reported
/// because `d_{T+1}` is unknown.
pub fn homology_of_complex(c: &FreeChainComplex) -> Result<Vec<HomologyGroup>> {
    if let Some(n) = c.square_defect() {
        return Err(Error::InvalidComplex { degree: n });
    }
    let factors = par::map(c.boundaries(), invariant_factors);
    let top = c.top_degree();
    Ok((0..top)
        .map(|n| {
            let out: &[BigInt] = if n == 0 { &[] } else { &factors[n - 1] };
            subquotient(c.ranks[n], out, &factors[n])
        })
        .collect())
}

/// `H^k = ker d^k / im d^{k-1}` for `0 <= k < T`.
pub fn cohomology_of_complex(c: &FreeCochainComplex) -> Result<Vec<HomologyGroup>> {
    if let Some(k) = c.square_defect() {
        return Err(Error::InvalidComplex { degree: k });
    }
    let factors = par::map(c.coboundaries(), invariant_factors);
    let top = c.top_degree();
    Ok((0..top)
        .map(|k| {
            let inc: &[BigInt] = if k == 0 { &[] } else { &factors[k - 1] };
            subquotient(c.ranks[k], &factors[k], inc)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let c = FreeChainComplex::new(vec![1, 1], vec![IntMatrix::zeros(1, 1)]).unwrap();
        assert_eq!(homology_of_complex(&c).unwrap(), vec![HomologyGroup::free(1)]);
    }

    #[test]
    fn multiplication_by_two() {
        let c = FreeChainComplex::new(vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        assert_eq!(homology_of_complex(&c).unwrap(), vec![HomologyGroup::new(0, vec![2])]);
    }

    #[test]
    fn torsion_in_degree_one() {
        let c = FreeChainComplex::new(
            vec![1, 2, 1],
            vec![IntMatrix::zeros(1, 2), IntMatrix::from_rows(&[vec![2], vec![-2]])],
        )
        .unwrap();
        let h = homology_of_complex(&c).unwrap();
        assert_eq!(h, vec![HomologyGroup::free(1), HomologyGroup::new(1, vec![2])]);
        assert_eq!(format_groups("H_", &h), "H_0 = Z; H_1 = Z (+) Z/2");
    }

    #[test]
    fn rejects_non_complex() {
        let c = FreeChainComplex::new(
            vec![1, 1, 1],
            vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![1]])],
        )
        .unwrap();
        assert_eq!(homology_of_complex(&c), Err(Error::InvalidComplex { degree: 1 }));
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(FreeChainComplex::new(vec![1, 2], vec![IntMatrix::zeros(2, 1)]).is_err());
        assert!(FreeChainComplex::new(vec![1, 2], vec![]).is_err());
    }

    #[test]
    fn cochain_dual_of_torsion() {
        let c = FreeCochainComplex::new(vec![1, 1], vec![IntMatrix::from_rows(&[vec![-2]])]).unwrap();
        assert_eq!(cohomology_of_complex(&c).unwrap(), vec![HomologyGroup::zero()]);
        let c = FreeCochainComplex::new(
            vec![1, 1, 0],
            vec![IntMatrix::from_rows(&[vec![-2]]), IntMatrix::zeros(0, 1)],
        )
        .unwrap();
        assert_eq!(
            cohomology_of_complex(&c).unwrap(),
            vec![HomologyGroup::zero(), HomologyGroup::new(0, vec![2])]
        );
    }

    #[test]
    fn display() {
        assert_eq!(HomologyGroup::zero().to_string(), "0");
        assert_eq!(HomologyGroup::free(2).to_string(), "Z^2");
        assert_eq!(HomologyGroup::new(0, vec![2, 4]).to_string(), "Z/2 (+) Z/4");
    }
}
