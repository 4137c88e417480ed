use crate::boxcat::{degeneracy, face, CubeMorphism};
use crate::catalg::{cube_value, CubicalNerve, FactorizationCategory, FiniteCategory, FiniteDiagram};
use crate::error::{Error, Result};
use crate::zlinalg::IntMatrix;

use super::{CoefficientSystem, Variance};

fn ones(n: usize) -> Vec<bool> {
    vec![true; n]
}

fn zeros(n: usize) -> Vec<bool> {
    vec![false; n]
}

fn check_nerve(c: &FiniteCategory, nerve: &CubicalNerve) -> Result<()> {
    let ok = nerve.cubes.iter().flatten().flatten().all(|&m| m < c.morphism_count());
    if !ok || nerve.table.count(0) != c.object_count() {
        return Err(Error::Invalid("nerve was not built from this category".into()));
    }
    Ok(())
}

/// Assembles a system from a value per cube and the matrix of `X(θ)` on an
/// `n`-cube for every elementary `θ` with target `I^n`.
fn assemble(
    nerve: &CubicalNerve,
    variance: Variance,
    rank: impl Fn(usize, usize) -> usize,
    matrix: impl Fn(usize, usize, &CubeMorphism) -> IntMatrix,
) -> Result<CoefficientSystem> {
    let table = &nerve.table;
    let t = table.truncation();
    let ranks = (0..=t).map(|n| (0..table.count(n)).map(|x| rank(n, x)).collect()).collect();
    let faces = (0..=t)
        .map(|n| {
            (0..table.count(n))
                .map(|x| {
                    (1..=n)
                        .map(|i| [false, true].map(|e| matrix(n, x, &face(n, i, e).expect("valid face"))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..=t)
        .map(|n| {
            (0..table.count(n))
                .map(|y| {
                    if n == t {
                        return Vec::new();
                    }
                    (1..=n + 1)
                        .map(|i| matrix(n, y, &degeneracy(n + 1, i).expect("valid degeneracy")))
                        .collect()
                })
                .collect()
        })
        .collect();
    CoefficientSystem::new(table.clone(), variance, ranks, faces, degeneracies)
}

/// `x ↦ F(x(1^n))` for a diagram `F` on `𝒞^op`. The operator along
/// `θ: I^m -> I^n` is `F` of `x(θ(1^m) <= 1^n)`.
pub fn system_from_diagram_last_vertex(
    c: &FiniteCategory,
    f: &FiniteDiagram,
    nerve: &CubicalNerve,
) -> Result<CoefficientSystem> {
    if f.category() != &c.opposite() {
        return Err(Error::Invalid("diagram must live on the opposite category".into()));
    }
    f.validate().into_result()?;
    check_nerve(c, nerve)?;
    let last = |n: usize, x: usize| c.cod(cube_value(&nerve.cubes[n][x], &zeros(n), &ones(n)));
    assemble(
        nerve,
        Variance::Contravariant,
        |n, x| f.rank(last(n, x)),
        |n, x, theta| {
            let v = theta.apply_to_vertex(&ones(theta.source_dim()));
            f.matrix(cube_value(&nerve.cubes[n][x], &v, &ones(n))).clone()
        },
    )
}

/// `x ↦ G(𝔡x)` with `𝔡x = x(0^n <= 1^n)` for a diagram `G` on `𝔉𝒞`. The
/// operator along `θ` is `G` of `(x(0^n <= θ(0^m)), x(θ(1^m) <= 1^n))`.
pub fn natural_system_via_d(
    c: &FiniteCategory,
    fc: &FactorizationCategory,
    g: &FiniteDiagram,
    nerve: &CubicalNerve,
) -> Result<CoefficientSystem> {
    if &fc.category != g.category() || fc.category.object_count() != c.morphism_count() {
        return Err(Error::Invalid("diagram must live on the factorization category".into()));
    }
    g.validate().into_result()?;
    check_nerve(c, nerve)?;
    let diag = |n: usize, x: usize| cube_value(&nerve.cubes[n][x], &zeros(n), &ones(n));
    assemble(
        nerve,
        Variance::Covariant,
        |n, x| g.rank(diag(n, x)),
        |n, x, theta| {
            let m = theta.source_dim();
            let cube = &nerve.cubes[n][x];
            let u0 = cube_value(cube, &zeros(n), &theta.apply_to_vertex(&zeros(m)));
            let u1 = cube_value(cube, &theta.apply_to_vertex(&ones(m)), &ones(n));
            let from = cube_value(
                cube,
                &theta.apply_to_vertex(&zeros(m)),
                &theta.apply_to_vertex(&ones(m)),
            );
            let arrow = fc.find(from, u0, u1).expect("factorization morphism exists");
            g.matrix(arrow).clone()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalg::{arrow_category, cubical_nerve, factorization_category, point_category};

    #[test]
    fn last_vertex_ranks() {
        let c = arrow_category();
        let op = c.opposite();
        let id0 = c.identity(c.find_object("0").unwrap());
        let f = FiniteDiagram::new(
            op.clone(),
            vec![1, 0],
            (0..op.morphism_count())
                .map(|m| {
                    let (d, k) = (op.dom(m), op.cod(m));
                    let r = |o: usize| if o == 0 { 1 } else { 0 };
                    if m == id0 {
                        IntMatrix::identity(1)
                    } else {
                        IntMatrix::zeros(r(k), r(d))
                    }
                })
                .collect(),
        )
        .unwrap();
        let nerve = cubical_nerve(&c, 1).unwrap();
        let sys = system_from_diagram_last_vertex(&c, &f, &nerve).unwrap();
        assert!(sys.validate().is_valid());
        // only the identity edge of 0 ends at 0
        assert_eq!(sys.ranks()[0], vec![1, 0]);
        assert_eq!(sys.ranks()[1].iter().sum::<usize>(), 1);
    }

    #[test]
    fn constant_diagrams_give_constant_systems() {
        let c = point_category();
        let nerve = cubical_nerve(&c, 2).unwrap();
        let f = FiniteDiagram::constant(c.opposite(), 2);
        let sys = system_from_diagram_last_vertex(&c, &f, &nerve).unwrap();
        assert_eq!(sys.ranks(), &[vec![2], vec![2], vec![2]]);
        let fc = factorization_category(&c).unwrap();
        let g = FiniteDiagram::constant(fc.category.clone(), 3);
        let sys = natural_system_via_d(&c, &fc, &g, &nerve).unwrap();
        assert!(sys.validate().is_valid());
        assert_eq!(sys.ranks(), &[vec![3], vec![3], vec![3]]);
    }
}
