use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::zlinalg::IntMatrix;

use super::FiniteCategory;

/// Covariant functor from a finite category to free abelian groups: a rank
/// per object and a matrix `F(dom) -> F(cod)` per morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDiagram {
    category: FiniteCategory,
    ranks: Vec<usize>,
    matrices: Vec<IntMatrix>,
}

impl FiniteDiagram {
    pub fn new(category: FiniteCategory, ranks: Vec<usize>, matrices: Vec<IntMatrix>) -> Result<Self> {
        if ranks.len() != category.object_count() || matrices.len() != category.morphism_count() {
            return Err(Error::Invalid("diagram does not match its category".into()));
        }
        for (m, mat) in matrices.iter().enumerate() {
            let (r, c) = (ranks[category.cod(m)], ranks[category.dom(m)]);
            if mat.shape() != (r, c) {
                return Err(Error::Shape {
                    rows: mat.rows(),
                    cols: mat.cols(),
                    expected_rows: r,
                    expected_cols: c,
                    context: format!("morphism `{}`", category.morphism(m).name),
                });
            }
        }
        Ok(Self {
            category,
            ranks,
            matrices,
        })
    }

    /// Matrices given by morphism name; identities default to identity
    /// matrices, every other morphism must be listed.
    pub fn from_named(
        category: FiniteCategory,
        ranks: Vec<usize>,
        named: &[(&str, IntMatrix)],
    ) -> Result<Self> {
        if ranks.len() != category.object_count() {
            return Err(Error::Invalid("one rank per object is required".into()));
        }
        let mut matrices: Vec<Option<IntMatrix>> = (0..category.morphism_count())
            .map(|m| {
                category
                    .is_identity(m)
                    .then(|| IntMatrix::identity(ranks[category.dom(m)]))
            })
            .collect();
        for (name, mat) in named {
            let m = category
                .find_morphism(name)
                .ok_or_else(|| Error::Invalid(format!("unknown morphism `{name}`")))?;
            matrices[m] = Some(mat.clone());
        }
        let matrices = matrices
            .into_iter()
            .enumerate()
            .map(|(m, mat)| {
                mat.ok_or_else(|| {
                    Error::Invalid(format!("no matrix for `{}`", category.morphism(m).name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(category, ranks, matrices)
    }

    pub fn constant(category: FiniteCategory, r: usize) -> Self {
        let ranks = vec![r; category.object_count()];
        let matrices = vec![IntMatrix::identity(r); category.morphism_count()];
        Self::new(category, ranks, matrices).expect("constant diagram")
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn rank(&self, o: usize) -> usize {
        self.ranks[o]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn matrix(&self, m: usize) -> &IntMatrix {
        &self.matrices[m]
    }

    /// `F(g∘f) = F(g)F(f)` and `F(id) = I`.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = self.category.validate();
        let c = &self.category;
        for o in 0..c.object_count() {
            if !self.matrices[c.identity(o)].is_identity() {
                rep.push("identity", format!("F(id_{}) is not the identity", c.object_name(o)));
            }
        }
        for f in 0..c.morphism_count() {
            for g in c.out_of(c.cod(f)) {
                let h = c.compose(g, f).expect("composable");
                if &self.matrices[g] * &self.matrices[f] != self.matrices[h] {
                    rep.push(
                        "functoriality",
                        format!("F({} ∘ {})", c.morphism(g).name, c.morphism(f).name),
                    );
                }
            }
        }
        rep
    }
}
