use std::collections::HashMap;

use crate::error::Result;

use super::category::Morphism;
use super::FiniteCategory;

/// The factorization category `𝔉𝒞`. Object `k` is morphism `k` of `𝒞`; a
/// morphism `f -> g` is a pair `(u0, u1)` with `u0: dom g -> dom f`,
/// `u1: cod f -> cod g` and `g = u1 ∘ f ∘ u0`.
#[derive(Debug, Clone)]
pub struct FactorizationCategory {
    pub category: FiniteCategory,
    /// `pairs[m] = (u0, u1)` for every morphism `m` of `𝔉𝒞`.
    pub pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize, usize), usize>,
}

impl FactorizationCategory {
    /// The morphism `(u0, u1)` out of object `f`, if it is one.
    pub fn find(&self, f: usize, u0: usize, u1: usize) -> Option<usize> {
        self.lookup.get(&(f, u0, u1)).copied()
    }
}

/// Composition `(v0, v1) ∘ (u0, u1) = (u0 ∘ v0, v1 ∘ u1)`.
pub fn factorization_category(c: &FiniteCategory) -> Result<FactorizationCategory> {
    let objects: Vec<String> = c.morphisms().iter().map(|m| m.name.clone()).collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    let mut lookup = HashMap::new();
    for f in 0..c.morphism_count() {
        for u1 in c.out_of(c.cod(f)) {
            let u1f = c.compose(u1, f).expect("composable");
            for u0 in 0..c.morphism_count() {
                if c.cod(u0) != c.dom(f) {
                    continue;
                }
                let g = c.compose(u1f, u0).expect("composable");
                lookup.insert((f, u0, u1), morphisms.len());
                morphisms.push(Morphism {
                    name: format!(
                        "({},{}):{}->{}",
                        c.morphism(u0).name,
                        c.morphism(u1).name,
                        c.morphism(f).name,
                        c.morphism(g).name
                    ),
                    dom: f,
                    cod: g,
                });
                pairs.push((u0, u1));
            }
        }
    }
    let identities: Vec<usize> = (0..c.morphism_count())
        .map(|f| lookup[&(f, c.identity(c.dom(f)), c.identity(c.cod(f)))])
        .collect();
    let nm = morphisms.len();
    let mut comp = vec![vec![None; nm]; nm];
    for (a, ma) in morphisms.iter().enumerate() {
        for (b, mb) in morphisms.iter().enumerate() {
            if ma.cod != mb.dom {
                continue;
            }
            // b ∘ a
            let (u0, u1) = pairs[a];
            let (v0, v1) = pairs[b];
            let w0 = c.compose(u0, v0).expect("composable");
            let w1 = c.compose(v1, u1).expect("composable");
            comp[b][a] = Some(lookup[&(ma.dom, w0, w1)]);
        }
    }
    let category = FiniteCategory::new(objects, morphisms, identities, comp)?;
    Ok(FactorizationCategory {
        category,
        pairs,
        lookup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalg::{arrow_category, point_category, square_poset, z2_category};

    #[test]
    fn object_counts() {
        assert_eq!(factorization_category(&point_category()).unwrap().category.object_count(), 1);
        assert_eq!(factorization_category(&point_category()).unwrap().category.morphism_count(), 1);
        let fa = factorization_category(&arrow_category()).unwrap();
        assert_eq!(fa.category.object_count(), 3);
        // id_0 -> a, id_1 -> a, and one identity each
        assert_eq!(fa.category.morphism_count(), 5);
        assert_eq!(factorization_category(&z2_category()).unwrap().category.object_count(), 2);
        assert!(factorization_category(&square_poset()).unwrap().category.validate().is_valid());
    }
}
