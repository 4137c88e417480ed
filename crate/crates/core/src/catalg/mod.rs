//! Finite categories, diagrams, bar/cobar complexes, cubical nerves and the
//! factorization category.

mod bar;
mod category;
mod diagram;
mod factorization;
mod nerve;

use serde::Serialize;

pub use bar::{bar_complex, category_cohomology, category_homology, chain_face, chains, cobar_complex, Chain};
pub use category::{arrow_category, point_category, square_poset, z2_category, FiniteCategory, Morphism};
pub use diagram::FiniteDiagram;
pub use factorization::{factorization_category, FactorizationCategory};
pub use nerve::{cube_value, cubical_nerve, precompose, CubicalNerve, NerveCube};

use crate::coeff::{natural_system_via_d, system_from_diagram_last_vertex};
use crate::error::{Error, Result};
use crate::homcalc::{cohomology, homology};
use crate::zlinalg::{HomologyGroup, HomologyRecord};

/// Two computations of the same groups in degrees `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub cubical: Vec<HomologyRecord>,
    pub oracle: Vec<HomologyRecord>,
    pub verdict: bool,
}

impl Comparison {
    fn of(cubical: &[HomologyGroup], oracle: &[HomologyGroup]) -> Self {
        let rec = |gs: &[HomologyGroup]| gs.iter().enumerate().map(|(d, g)| g.to_record(d)).collect();
        Self {
            cubical: rec(cubical),
            oracle: rec(oracle),
            verdict: cubical == oracle,
        }
    }
}

/// Homology of the cubical nerve with last-vertex coefficients against the
/// bar complex of `𝒞^op`, for `F` a diagram on `𝒞^op`.
pub fn nerve_vs_bar_comparison(c: &FiniteCategory, f: &FiniteDiagram, n_max: usize) -> Result<Comparison> {
    let nerve = cubical_nerve(c, n_max + 1)?;
    let sys = system_from_diagram_last_vertex(c, f, &nerve)?;
    let cubical = homology(&sys, n_max)?;
    let oracle = category_homology(&c.opposite(), f, n_max)?;
    Ok(Comparison::of(&cubical, &oracle))
}

fn factorization_for(c: &FiniteCategory, g: &FiniteDiagram) -> Result<FactorizationCategory> {
    let fc = factorization_category(c)?;
    if &fc.category != g.category() {
        return Err(Error::Invalid("natural system must live on the factorization category".into()));
    }
    Ok(fc)
}

/// `H^n(nr^□ 𝒞, G∘𝔡)` for a natural system `G` on `𝔉𝒞`.
pub fn bw_cohomology_cubical(c: &FiniteCategory, g: &FiniteDiagram, n_max: usize) -> Result<Vec<HomologyGroup>> {
    let fc = factorization_for(c, g)?;
    let nerve = cubical_nerve(c, n_max + 1)?;
    cohomology(&natural_system_via_d(c, &fc, g, &nerve)?, n_max)
}

/// `lim^n` of `G` over `𝔉𝒞` through the cobar complex.
pub fn bw_cohomology_oracle(c: &FiniteCategory, g: &FiniteDiagram, n_max: usize) -> Result<Vec<HomologyGroup>> {
    let fc = factorization_for(c, g)?;
    category_cohomology(&fc.category, g, n_max)
}
