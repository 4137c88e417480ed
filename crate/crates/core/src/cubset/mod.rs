//! Cubical and semi-cubical sets: presented form, tabulated truncations,
//! maps, products and pullback fibers.

mod fiber;
mod map;
mod presented;
mod product;
mod semi;
mod table;

pub use fiber::pullback_fiber;
pub use map::CubicalMap;
pub use presented::{standard_cube, standard_cube_element, Cube, GeneratorId, PresentedCubicalSet};
pub use product::{product, product_tables};
pub use semi::{universal_from_semicubical, SemiCubicalSet};
pub use table::{CubeIndex, CubesTable};
