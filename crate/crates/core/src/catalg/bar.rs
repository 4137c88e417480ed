use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::zlinalg::{
    cohomology_of_complex, homology_of_complex, FreeChainComplex, FreeCochainComplex, HomologyGroup,
    IntMatrix,
};

use super::{FiniteCategory, FiniteDiagram};

/// A chain `c_0 -> … -> c_n`: the start object and the arrows in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Chain {
    pub fn end(&self, c: &FiniteCategory) -> usize {
        self.arrows.last().map_or(self.start, |&a| c.cod(a))
    }
}

/// All chains of length `0..=t`, identities included.
pub fn chains(c: &FiniteCategory, t: usize) -> Vec<Vec<Chain>> {
    let mut out: Vec<Vec<Chain>> = vec![(0..c.object_count())
        .map(|o| Chain {
            start: o,
            arrows: Vec::new(),
        })
        .collect()];
    for n in 1..=t {
        let mut level = Vec::new();
        for ch in &out[n - 1] {
            for a in c.out_of(ch.end(c)) {
                let mut arrows = ch.arrows.clone();
                arrows.push(a);
                level.push(Chain {
                    start: ch.start,
                    arrows,
                });
            }
        }
        out.push(level);
    }
    out
}

/// `i`-th face of a chain of length `n >= 1`: drop the first arrow, compose
/// arrows `i` and `i+1`, or drop the last arrow.
pub fn chain_face(c: &FiniteCategory, ch: &Chain, i: usize) -> Chain {
    let n = ch.arrows.len();
    let mut arrows = ch.arrows.clone();
    if i == 0 {
        let a = arrows.remove(0);
        Chain {
            start: c.cod(a),
            arrows,
        }
    } else if i < n {
        let g = arrows.remove(i);
        arrows[i - 1] = c.compose(g, arrows[i - 1]).expect("composable");
        Chain {
            start: ch.start,
            arrows,
        }
    } else {
        arrows.pop();
        Chain {
            start: ch.start,
            arrows,
        }
    }
}

fn check_category(c: &FiniteCategory, f: &FiniteDiagram) -> Result<()> {
    if f.category() != c {
        return Err(Error::Invalid("diagram lives on a different category".into()));
    }
    f.validate().into_result()
}

struct Layout {
    chains: Vec<Vec<Chain>>,
    offsets: Vec<Vec<usize>>,
    index: Vec<HashMap<Chain, usize>>,
    ranks: Vec<usize>,
}

fn layout(c: &FiniteCategory, t: usize, rank_of: impl Fn(&Chain) -> usize) -> Layout {
    let chains = chains(c, t);
    let mut offsets = Vec::with_capacity(t + 1);
    let mut ranks = Vec::with_capacity(t + 1);
    for level in &chains {
        let mut off = Vec::with_capacity(level.len());
        let mut total = 0;
        for ch in level {
            off.push(total);
            total += rank_of(ch);
        }
        offsets.push(off);
        ranks.push(total);
    }
    let index = chains
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(i, ch)| (ch, i)).collect())
        .collect();
    Layout {
        chains,
        offsets,
        index,
        ranks,
    }
}

/// `C_n = ⊕ F(c_0)` over chains of length `n`, `d_n = Σ (-1)^i d^i` with
/// `d^0` applying `F(α_1)`.
pub fn bar_complex(c: &FiniteCategory, f: &FiniteDiagram, t: usize) -> Result<FreeChainComplex> {
    check_category(c, f)?;
    let lay = layout(c, t, |ch| f.rank(ch.start));
    let boundaries = (1..=t)
        .map(|n| {
            let mut d = IntMatrix::zeros(lay.ranks[n - 1], lay.ranks[n]);
            for (k, ch) in lay.chains[n].iter().enumerate() {
                let col = lay.offsets[n][k];
                for i in 0..=n {
                    let fc = chain_face(c, ch, i);
                    let row = lay.offsets[n - 1][lay.index[n - 1][&fc]];
                    let block = if i == 0 {
                        f.matrix(ch.arrows[0]).clone()
                    } else {
                        IntMatrix::identity(f.rank(ch.start))
                    };
                    if i % 2 == 0 {
                        d.add_block(row, col, &block);
                    } else {
                        d.sub_block(row, col, &block);
                    }
                }
            }
            d
        })
        .collect();
    FreeChainComplex::new(lay.ranks, boundaries)
}

/// `C^n = ⊕ G(c_n)` over chains of length `n`, with
/// `(δφ)(α_1..α_{n+1}) = φ(α_2..) + Σ_{0<i<n+1} (-1)^i φ(.., α_{i+1}α_i, ..)
/// + (-1)^{n+1} G(α_{n+1}) φ(α_1..α_n)`.
pub fn cobar_complex(c: &FiniteCategory, g: &FiniteDiagram, t: usize) -> Result<FreeCochainComplex> {
    check_category(c, g)?;
    let lay = layout(c, t, |ch| g.rank(ch.end(c)));
    let coboundaries = (0..t)
        .map(|n| {
            let mut d = IntMatrix::zeros(lay.ranks[n + 1], lay.ranks[n]);
            for (k, ch) in lay.chains[n + 1].iter().enumerate() {
                let row = lay.offsets[n + 1][k];
                for i in 0..=n + 1 {
                    let fc = chain_face(c, ch, i);
                    let col = lay.offsets[n][lay.index[n][&fc]];
                    let block = if i == n + 1 {
                        g.matrix(ch.arrows[n]).clone()
                    } else {
                        IntMatrix::identity(g.rank(ch.end(c)))
                    };
                    if i % 2 == 0 {
                        d.add_block(row, col, &block);
                    } else {
                        d.sub_block(row, col, &block);
                    }
                }
            }
            d
        })
        .collect();
    FreeCochainComplex::new(lay.ranks, coboundaries)
}

/// `colim_n F` for `n = 0..=n_max`.
pub fn category_homology(c: &FiniteCategory, f: &FiniteDiagram, n_max: usize) -> Result<Vec<HomologyGroup>> {
    homology_of_complex(&bar_complex(c, f, n_max + 1)?)
}

/// `lim^n G` for `n = 0..=n_max`.
pub fn category_cohomology(c: &FiniteCategory, g: &FiniteDiagram, n_max: usize) -> Result<Vec<HomologyGroup>> {
    cohomology_of_complex(&cobar_complex(c, g, n_max + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalg::{arrow_category, point_category, square_poset, z2_category};

    #[test]
    fn point_homology() {
        let c = point_category();
        let f = FiniteDiagram::constant(c.clone(), 1);
        assert_eq!(bar_complex(&c, &f, 2).unwrap().ranks(), &[1, 1, 1]);
        let h = category_homology(&c, &f, 3).unwrap();
        assert_eq!(h, vec![HomologyGroup::free(1), HomologyGroup::zero(), HomologyGroup::zero(), HomologyGroup::zero()]);
        let g = FiniteDiagram::constant(c.clone(), 2);
        assert_eq!(category_cohomology(&c, &g, 1).unwrap(), vec![HomologyGroup::free(2), HomologyGroup::zero()]);
    }

    #[test]
    fn z2_group_homology() {
        let c = z2_category();
        let f = FiniteDiagram::constant(c.clone(), 1);
        assert_eq!(bar_complex(&c, &f, 4).unwrap().ranks(), &[1, 2, 4, 8, 16]);
        let h = category_homology(&c, &f, 3).unwrap();
        assert_eq!(
            h,
            vec![
                HomologyGroup::free(1),
                HomologyGroup::new(0, vec![2]),
                HomologyGroup::zero(),
                HomologyGroup::new(0, vec![2])
            ]
        );
        let coh = category_cohomology(&c, &f, 2).unwrap();
        assert_eq!(coh, vec![HomologyGroup::free(1), HomologyGroup::zero(), HomologyGroup::new(0, vec![2])]);
    }

    #[test]
    fn contractible_categories() {
        for c in [arrow_category(), square_poset()] {
            let f = FiniteDiagram::constant(c.clone(), 1);
            let h = category_homology(&c, &f, 2).unwrap();
            assert_eq!(h, vec![HomologyGroup::free(1), HomologyGroup::zero(), HomologyGroup::zero()]);
        }
    }

    #[test]
    fn faces_satisfy_simplicial_identities() {
        let c = square_poset();
        let ch = chains(&c, 3);
        for x in &ch[3] {
            for j in 1..=3 {
                for i in 0..j {
                    let lhs = chain_face(&c, &chain_face(&c, x, j), i);
                    let rhs = chain_face(&c, &chain_face(&c, x, i), j - 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
