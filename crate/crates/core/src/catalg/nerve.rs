use std::collections::HashMap;

use crate::boxcat::{degeneracy, face, CubeMorphism};
use crate::cubset::CubesTable;
use crate::error::Result;

use super::FiniteCategory;

/// A functor `I^n -> 𝒞`, stored as its value on every comparable vertex
/// pair `v <= w`. The pair is encoded in base 3, one digit per coordinate:
/// `0` for `(0,0)`, `1` for `(0,1)`, `2` for `(1,1)`.
pub type NerveCube = Vec<usize>;

/// Cubical nerve of a finite category up to a truncation, together with the
/// functor behind every cube.
#[derive(Debug, Clone)]
pub struct CubicalNerve {
    pub table: CubesTable,
    pub cubes: Vec<Vec<NerveCube>>,
}

fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

fn decode(mut code: usize, n: usize) -> (Vec<bool>, Vec<bool>) {
    let (mut v, mut w) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let d = code % 3;
        code /= 3;
        v.push(d == 2);
        w.push(d >= 1);
    }
    (v, w)
}

fn encode(v: &[bool], w: &[bool]) -> usize {
    v.iter()
        .zip(w)
        .rev()
        .fold(0, |acc, (&a, &b)| acc * 3 + (a as usize) + (b as usize))
}

/// `x ∘ α` for `α: I^m -> I^n`.
pub fn precompose(x: &NerveCube, alpha: &CubeMorphism) -> NerveCube {
    let m = alpha.source_dim();
    (0..pow3(m))
        .map(|code| {
            let (v, w) = decode(code, m);
            x[encode(&alpha.apply_to_vertex(&v), &alpha.apply_to_vertex(&w))]
        })
        .collect()
}

/// `x(v <= w)` for vertices of `I^n`.
pub fn cube_value(x: &NerveCube, v: &[bool], w: &[bool]) -> usize {
    x[encode(v, w)]
}

/// Key of a cube: the object for `n = 0`, otherwise the edge morphisms in
/// code order, `[m1;m2;…]`.
fn cube_key(c: &FiniteCategory, x: &NerveCube, n: usize) -> String {
    if n == 0 {
        return c.object_name(c.dom(x[0])).to_string();
    }
    let edges: Vec<&str> = (0..pow3(n))
        .filter(|&code| {
            let (v, w) = decode(code, n);
            v.iter().zip(&w).filter(|(a, b)| a != b).count() == 1
        })
        .map(|code| c.morphism(x[code]).name.as_str())
        .collect();
    format!("[{}]", edges.join(";"))
}

/// All functors `I^n -> 𝒞` built from pairs `(a, b)` of `(n-1)`-cubes and
/// natural transformations `a => b`.
fn extend(c: &FiniteCategory, prev: &[NerveCube], n: usize) -> Vec<NerveCube> {
    let m = n - 1;
    let pairs: Vec<(Vec<bool>, Vec<bool>)> = (0..pow3(m)).map(|code| decode(code, m)).collect();
    let vertices: Vec<usize> = (0..pow3(m))
        .filter(|&code| {
            let (v, w) = &pairs[code];
            v == w
        })
        .collect();
    let object_at = |x: &NerveCube, vcode: usize| c.dom(x[vcode]);
    let mut out = Vec::new();
    for a in prev {
        for b in prev {
            let choices: Vec<&[usize]> = vertices
                .iter()
                .map(|&vc| c.hom(object_at(a, vc), object_at(b, vc)))
                .collect();
            if choices.iter().any(|h| h.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; vertices.len()];
            loop {
                let t_at: HashMap<usize, usize> = vertices
                    .iter()
                    .zip(&pick)
                    .enumerate()
                    .map(|(k, (&vc, &p))| (vc, choices[k][p]))
                    .collect();
                let vcode = |v: &[bool]| encode(v, v);
                let natural = pairs.iter().enumerate().all(|(code, (v, w))| {
                    let lhs = c.compose(b[code], t_at[&vcode(v)]);
                    let rhs = c.compose(t_at[&vcode(w)], a[code]);
                    lhs == rhs
                });
                if natural {
                    let mut x = vec![0; pow3(n)];
                    for (code, (v, _)) in pairs.iter().enumerate() {
                        x[code] = a[code];
                        x[code + 2 * pow3(m)] = b[code];
                        x[code + pow3(m)] = c.compose(b[code], t_at[&vcode(v)]).expect("composable");
                    }
                    out.push(x);
                }
                // next choice of transformation components
                let mut k = 0;
                loop {
                    if k == pick.len() {
                        break;
                    }
                    pick[k] += 1;
                    if pick[k] < choices[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
                if k == pick.len() {
                    break;
                }
            }
        }
    }
    out
}

/// `nr^□_n(𝒞) = Cat(I^n, 𝒞)` for `n <= t`, with operators by precomposition.
pub fn cubical_nerve(c: &FiniteCategory, t: usize) -> Result<CubicalNerve> {
    let mut cubes: Vec<Vec<NerveCube>> = vec![(0..c.object_count()).map(|o| vec![c.identity(o)]).collect()];
    for n in 1..=t {
        let next = extend(c, &cubes[n - 1], n);
        cubes.push(next);
    }
    let index: Vec<HashMap<&NerveCube, usize>> = cubes
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    let keys = cubes
        .iter()
        .enumerate()
        .map(|(n, cs)| cs.iter().map(|x| cube_key(c, x, n)).collect())
        .collect();
    let faces = (0..=t)
        .map(|n| {
            crate::par::map(&cubes[n], |x| {
                (1..=n)
                    .map(|i| {
                        [false, true].map(|e| {
                            index[n - 1][&precompose(x, &face(n, i, e).expect("valid"))]
                        })
                    })
                    .collect()
            })
        })
        .collect();
    let degeneracies = (0..=t)
        .map(|n| {
            crate::par::map(&cubes[n], |x| {
                if n == t {
                    return Vec::new();
                }
                (1..=n + 1)
                    .map(|i| index[n + 1][&precompose(x, &degeneracy(n + 1, i).expect("valid"))])
                    .collect()
            })
        })
        .collect();
    let table = CubesTable::new(t, keys, faces, degeneracies)?;
    Ok(CubicalNerve { table, cubes })
}
