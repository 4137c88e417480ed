use num_bigint::BigInt;
use serde::Serialize;

use crate::coeff::{CoefficientSystem, Variance};
use crate::error::{Error, Result};
use crate::par;
use crate::zlinalg::{cokernel_projection, kernel, FreeChainComplex, FreeCochainComplex, IntMatrix};

/// Basis vector `coordinate` of `F(cube)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisLabel {
    pub cube: String,
    pub coordinate: usize,
}

/// A chain complex together with how it was obtained.
///
/// `labels[n]` names the basis of the direct sum the degree-`n` group was
/// built from. When `projections[n]` is present, degree `n` of `complex`
/// is the quotient of that sum given by the projection, with
/// `sections[n]` a right inverse.
#[derive(Debug, Clone)]
pub struct ComplexBuildReport {
    pub complex: FreeChainComplex,
    pub labels: Vec<Vec<BasisLabel>>,
    pub projections: Vec<Option<IntMatrix>>,
    pub sections: Vec<Option<IntMatrix>>,
    /// Torsion of the degeneracy cokernel per degree; always empty on valid
    /// input.
    pub torsion: Vec<Vec<BigInt>>,
}

/// A cochain complex; degree `k` is the subgroup of the labelled direct sum
/// spanned by the columns of `inclusions[k]` when present.
#[derive(Debug, Clone)]
pub struct CochainBuildReport {
    pub complex: FreeCochainComplex,
    pub labels: Vec<Vec<BasisLabel>>,
    pub inclusions: Vec<Option<IntMatrix>>,
    pub retractions: Vec<Option<IntMatrix>>,
}

fn require(f: &CoefficientSystem, v: Variance) -> Result<()> {
    if f.variance() != v {
        return Err(Error::Variance(match v {
            Variance::Contravariant => "contravariant system",
            Variance::Covariant => "covariant system",
        }));
    }
    f.validate().into_result()
}

fn offsets(f: &CoefficientSystem, n: usize) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(f.base().count(n));
    let mut total = 0;
    for x in 0..f.base().count(n) {
        off.push(total);
        total += f.rank(n, x);
    }
    (off, total)
}

fn labels(f: &CoefficientSystem, n: usize, keep: impl Fn(usize) -> bool) -> Vec<BasisLabel> {
    let x = f.base();
    (0..x.count(n))
        .filter(|&c| keep(c))
        .flat_map(|c| {
            (0..f.rank(n, c)).map(move |coordinate| BasisLabel {
                cube: x.key(n, c).to_string(),
                coordinate,
            })
        })
        .collect()
}

/// `+1` for `(-1)^i` with `ε = 0`, negated for `ε = 1`.
fn sign(i: usize, eps: bool) -> bool {
    (i % 2 == 0) != eps
}

/// `d_n = Σ_i (-1)^i (∂_i^0 - ∂_i^1)` on `⊕_{x ∈ X_n} F(x)`.
fn boundary(f: &CoefficientSystem, n: usize) -> IntMatrix {
    let x = f.base();
    let (off_lo, rows) = offsets(f, n - 1);
    let (off_hi, cols) = offsets(f, n);
    let mut d = IntMatrix::zeros(rows, cols);
    for c in 0..x.count(n) {
        for i in 1..=n {
            for eps in [false, true] {
                let y = x.face(n, c, i, eps);
                let m = f.face_matrix(n, c, i, eps);
                if sign(i, eps) {
                    d.add_block(off_lo[y], off_hi[c], m);
                } else {
                    d.sub_block(off_lo[y], off_hi[c], m);
                }
            }
        }
    }
    d
}

/// `C_n = ⊕_{x ∈ X_n} F(x)` with the signed face differential.
pub fn unnormalized_complex(f: &CoefficientSystem) -> Result<ComplexBuildReport> {
    require(f, Variance::Contravariant)?;
    let t = f.truncation();
    let ranks = (0..=t).map(|n| f.total_rank(n)).collect();
    let boundaries = par::map_range(t, |k| boundary(f, k + 1));
    Ok(ComplexBuildReport {
        complex: FreeChainComplex::new(ranks, boundaries)?,
        labels: (0..=t).map(|n| labels(f, n, |_| true)).collect(),
        projections: vec![None; t + 1],
        sections: vec![None; t + 1],
        torsion: vec![Vec::new(); t + 1],
    })
}

/// Per-cube cokernel of the degeneracy images landing in `F(x)`, assembled
/// block-diagonally: `(proj, section, torsion)` for degree `n`.
fn degeneracy_cokernel(f: &CoefficientSystem, n: usize) -> (IntMatrix, IntMatrix, Vec<BigInt>) {
    let x = f.base();
    let mut incoming: Vec<Vec<&IntMatrix>> = vec![Vec::new(); x.count(n)];
    if n > 0 {
        for y in 0..x.count(n - 1) {
            for i in 1..=n {
                incoming[x.degeneracy(n - 1, y, i)].push(f.degeneracy_matrix(n - 1, y, i));
            }
        }
    }
    let parts = par::map_range(x.count(n), |c| {
        let s = IntMatrix::hstack(f.rank(n, c), &incoming[c]);
        cokernel_projection(&s)
    });
    let projs: Vec<&IntMatrix> = parts.iter().map(|p| &p.proj).collect();
    let sections: Vec<&IntMatrix> = parts.iter().map(|p| &p.section).collect();
    let torsion = parts.iter().flat_map(|p| p.torsion.iter().cloned()).collect();
    (IntMatrix::block_diag(&projs), IntMatrix::block_diag(&sections), torsion)
}

/// Quotient of the unnormalized complex by the images of all degeneracies,
/// `d^N_n = proj_{n-1} d_n section_n`.
pub fn normalized_complex(f: &CoefficientSystem) -> Result<ComplexBuildReport> {
    let raw = unnormalized_complex(f)?;
    let t = f.truncation();
    let cok: Vec<_> = (0..=t).map(|n| degeneracy_cokernel(f, n)).collect();
    for (n, (_, _, tor)) in cok.iter().enumerate() {
        if !tor.is_empty() {
            return Err(Error::NonFreeCokernel {
                degree: n,
                torsion: tor.iter().map(ToString::to_string).collect(),
            });
        }
    }
    let ranks = cok.iter().map(|(p, _, _)| p.rows()).collect();
    let boundaries = par::map_range(t, |k| {
        let n = k + 1;
        &(&cok[n - 1].0 * raw.complex.boundary(n)) * &cok[n].1
    });
    let complex = FreeChainComplex::new(ranks, boundaries)?;
    let mut projections = Vec::with_capacity(t + 1);
    let mut sections = Vec::with_capacity(t + 1);
    let mut torsion = Vec::with_capacity(t + 1);
    for (p, s, tor) in cok {
        projections.push(Some(p));
        sections.push(Some(s));
        torsion.push(tor);
    }
    Ok(ComplexBuildReport {
        complex,
        labels: raw.labels,
        projections,
        sections,
        torsion,
    })
}

/// For local systems: `C^N_n = ⊕` over non-degenerate cubes and
/// `d^N = pr ∘ d ∘ incl`.
pub fn normalized_complex_local(f: &CoefficientSystem) -> Result<ComplexBuildReport> {
    require(f, Variance::Contravariant)?;
    if !f.is_local() {
        return Err(Error::NotLocal);
    }
    let x = f.base();
    let t = f.truncation();
    // positions of non-degenerate coordinates inside the full sum
    let keep: Vec<Vec<usize>> = (0..=t)
        .map(|n| {
            let (off, _) = offsets(f, n);
            x.nondegenerate(n)
                .into_iter()
                .flat_map(|c| off[c]..off[c] + f.rank(n, c))
                .collect()
        })
        .collect();
    let boundaries = par::map_range(t, |k| {
        let n = k + 1;
        let d = boundary(f, n);
        let mut out = IntMatrix::zeros(keep[n - 1].len(), keep[n].len());
        for (r, &i) in keep[n - 1].iter().enumerate() {
            for (c, &j) in keep[n].iter().enumerate() {
                out.set(r, c, d.get(i, j).clone());
            }
        }
        out
    });
    let complex = FreeChainComplex::new(keep.iter().map(Vec::len).collect(), boundaries)?;
    Ok(ComplexBuildReport {
        complex,
        labels: (0..=t).map(|n| labels(f, n, |c| !x.is_degenerate(n, c))).collect(),
        projections: vec![None; t + 1],
        sections: vec![None; t + 1],
        torsion: vec![Vec::new(); t + 1],
    })
}

/// `C^k = ⊕_{x ∈ X_k} G(x)` restricted to `∩_i Ker G(σ_i)`, with coboundary
/// `d^k = Σ_{i=1}^{k+1} (-1)^i (∂_i^0 - ∂_i^1)^*`.
pub fn cochain_complex(g: &CoefficientSystem) -> Result<CochainBuildReport> {
    require(g, Variance::Covariant)?;
    let x = g.base();
    let t = g.truncation();
    let kernels: Vec<(IntMatrix, IntMatrix)> = (0..=t)
        .map(|k| {
            let mut constraints: Vec<Vec<&IntMatrix>> = vec![Vec::new(); x.count(k)];
            if k > 0 {
                for y in 0..x.count(k - 1) {
                    for i in 1..=k {
                        constraints[x.degeneracy(k - 1, y, i)].push(g.degeneracy_matrix(k - 1, y, i));
                    }
                }
            }
            let parts = par::map_range(x.count(k), |c| {
                // rows of all constraints, stacked
                let cols: Vec<IntMatrix> = constraints[c].iter().map(|m| m.transpose()).collect();
                let refs: Vec<&IntMatrix> = cols.iter().collect();
                kernel(&IntMatrix::hstack(g.rank(k, c), &refs).transpose())
            });
            let bases: Vec<&IntMatrix> = parts.iter().map(|p| &p.basis).collect();
            let retr: Vec<&IntMatrix> = parts.iter().map(|p| &p.retraction).collect();
            (IntMatrix::block_diag(&bases), IntMatrix::block_diag(&retr))
        })
        .collect();
    let coboundaries = par::map_range(t, |k| {
        let (off_lo, cols) = offsets(g, k);
        let (off_hi, rows) = offsets(g, k + 1);
        let mut d = IntMatrix::zeros(rows, cols);
        for c in 0..x.count(k + 1) {
            for i in 1..=k + 1 {
                for eps in [false, true] {
                    let y = x.face(k + 1, c, i, eps);
                    let m = g.face_matrix(k + 1, c, i, eps);
                    if sign(i, eps) {
                        d.add_block(off_hi[c], off_lo[y], m);
                    } else {
                        d.sub_block(off_hi[c], off_lo[y], m);
                    }
                }
            }
        }
        &(&kernels[k + 1].1 * &d) * &kernels[k].0
    });
    let ranks = kernels.iter().map(|(b, _)| b.cols()).collect();
    let complex = FreeCochainComplex::new(ranks, coboundaries)?;
    let (inclusions, retractions) = kernels.into_iter().map(|(b, r)| (Some(b), Some(r))).unzip();
    Ok(CochainBuildReport {
        complex,
        labels: (0..=t).map(|n| labels(g, n, |_| true)).collect(),
        inclusions,
        retractions,
    })
}
