use std::collections::HashMap;

use crate::boxcat::{degeneracy, face, hom_set, CubeMorphism};
use crate::error::{Error, Result};
use crate::par;

use super::map::CubicalMap;
use super::presented::Cube;
use super::table::CubesTable;

/// The fiber `f/y`: cubes of dimension `k` are pairs `(x, α)` with
/// `x ∈ X_k`, `α: I^k -> I^n` and `f(x) = Y(α)(y)`. Keys are `(xkey|α)`.
pub fn pullback_fiber(f: &CubicalMap, y: &Cube, t: usize) -> Result<CubesTable> {
    let (x, tgt) = (f.source(), f.target());
    let n = y.dim();
    // Rejects cubes that are not in the target.
    tgt.apply_morphism(&CubeMorphism::identity(n), y)?;
    let table = x.expand(t);
    let mut cubes: Vec<Vec<(usize, CubeMorphism)>> = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let xs = x.cubes(k);
        let images = par::map(&xs, |c| f.map_cube(c).expect("cube of the source"));
        let mut by_image: HashMap<&Cube, Vec<usize>> = HashMap::new();
        for (i, img) in images.iter().enumerate() {
            by_image.entry(img).or_default().push(i);
        }
        let mut level = Vec::new();
        for alpha in hom_set(k, n) {
            let ya = tgt.apply_morphism(&alpha, y)?;
            if let Some(idx) = by_image.get(&ya) {
                level.extend(idx.iter().map(|&i| (i, alpha.clone())));
            }
        }
        level.sort();
        cubes.push(level);
    }
    let index: Vec<HashMap<&(usize, CubeMorphism), usize>> = cubes
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let lookup = |k: usize, c: (usize, CubeMorphism)| -> Result<usize> {
        index[k]
            .get(&c)
            .copied()
            .ok_or_else(|| Error::Invalid("fiber is not closed under operators".into()))
    };
    let keys = cubes
        .iter()
        .enumerate()
        .map(|(k, cs)| {
            cs.iter()
                .map(|(xi, a)| format!("({}|{a})", table.key(k, *xi)))
                .collect()
        })
        .collect();
    let mut faces = Vec::with_capacity(t + 1);
    let mut degens = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let mut fk = Vec::with_capacity(cubes[k].len());
        let mut dk = Vec::with_capacity(cubes[k].len());
        for (xi, a) in &cubes[k] {
            let mut pairs = Vec::with_capacity(k);
            for i in 1..=k {
                let mut pair = [0; 2];
                for eps in [false, true] {
                    let fa = a.after(&face(k, i, eps)?)?;
                    pair[eps as usize] = lookup(k - 1, (table.face(k, *xi, i, eps), fa))?;
                }
                pairs.push(pair);
            }
            fk.push(pairs);
            let mut ss = Vec::new();
            if k < t {
                for i in 1..=k + 1 {
                    let sa = a.after(&degeneracy(k + 1, i)?)?;
                    ss.push(lookup(k + 1, (table.degeneracy(k, *xi, i), sa))?);
                }
            }
            dk.push(ss);
        }
        faces.push(fk);
        degens.push(dk);
    }
    CubesTable::new(t, keys, faces, degens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcat::hom_set_count;
    use crate::cubset::{product, standard_cube, PresentedCubicalSet};

    #[test]
    fn identity_fiber_is_standard_cube() {
        let x = standard_cube(2);
        let f = CubicalMap::identity(x.clone());
        let y = x.cube_from_key("[x1,1]@x1").unwrap();
        let fib = pullback_fiber(&f, &y, 2).unwrap();
        for k in 0..=2 {
            assert_eq!(fib.count(k) as u128, hom_set_count(k, 1));
        }
        assert!(fib.validate().is_valid());
    }

    #[test]
    fn collapse_fiber_over_degenerate_edge() {
        let f = CubicalMap::to_point(standard_cube(1));
        let y = f.target().cube_from_key("[]@del:1").unwrap();
        let fib = pullback_fiber(&f, &y, 2).unwrap();
        let sq = product(&standard_cube(1), &standard_cube(1), 2);
        assert_eq!(fib.counts(), sq.counts());
        for k in 0..=2 {
            assert_eq!(fib.nondegenerate(k).len(), sq.nondegenerate(k).len());
        }
        assert!(fib.validate().is_valid());
    }

    #[test]
    fn fiber_over_vertex_is_source() {
        let x = PresentedCubicalSet::from_keys(&[("v", vec![]), ("e", vec![["v@", "v@"]])]).unwrap();
        let f = CubicalMap::to_point(x.clone());
        let y = f.target().cube_from_key("[]@").unwrap();
        let fib = pullback_fiber(&f, &y, 2).unwrap();
        assert_eq!(fib.counts(), x.expand(2).counts());
    }
}
