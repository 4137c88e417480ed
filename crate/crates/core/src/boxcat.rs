//! The cube category: morphisms `I^m -> I^n` stored as target-assignment
//! token words.
//!
//! A morphism `f: I^m -> I^n` is a word of `n` tokens. Token `k` says what the
//! `k`-th output coordinate is: the constant 0, the constant 1, or the input
//! coordinate `x_i`. Variables appear in strictly increasing order, which is
//! exactly the canonical form of a composite of face insertions and coordinate
//! deletions. Composition is token substitution.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// One output coordinate of a cube morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Zero,
    One,
    /// Input coordinate, 1-based.
    Var(usize),
}

impl Token {
    pub fn constant(eps: bool) -> Token {
        if eps {
            Token::One
        } else {
            Token::Zero
        }
    }
}

/// A morphism of the cube category in canonical target-assignment form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeMorphism {
    source_dim: usize,
    assignment: Vec<Token>,
}

impl CubeMorphism {
    /// Builds a morphism `I^source_dim -> I^assignment.len()`, checking that
    /// variable indices are in range and strictly increasing.
    pub fn new(source_dim: usize, assignment: Vec<Token>) -> Result<Self> {
        let mut last = 0;
        for t in &assignment {
            if let Token::Var(i) = *t {
                if i == 0 || i > source_dim {
                    return Err(Error::InvalidMorphism(format!(
                        "variable x{i} outside 1..={source_dim}"
                    )));
                }
                if i <= last {
                    return Err(Error::InvalidMorphism(format!(
                        "variables not strictly increasing at x{i}"
                    )));
                }
                last = i;
            }
        }
        Ok(Self {
            source_dim,
            assignment,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            source_dim: n,
            assignment: (1..=n).map(Token::Var).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[Token] {
        &self.assignment
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim == self.assignment.len() && self.is_epi()
    }

    /// Epimorphism: no constant tokens.
    pub fn is_epi(&self) -> bool {
        self.assignment.iter().all(|t| matches!(t, Token::Var(_)))
    }

    /// Monomorphism (injection on vertices): every source coordinate is used.
    pub fn is_mono(&self) -> bool {
        self.used_vars() == self.source_dim
    }

    fn used_vars(&self) -> usize {
        self.assignment
            .iter()
            .filter(|t| matches!(t, Token::Var(_)))
            .count()
    }

    /// Source coordinates that do not occur in the assignment, ascending.
    pub fn deleted_coordinates(&self) -> Vec<usize> {
        let mut used = vec![false; self.source_dim + 1];
        for t in &self.assignment {
            if let Token::Var(i) = *t {
                used[i] = true;
            }
        }
        (1..=self.source_dim).filter(|&i| !used[i]).collect()
    }

    /// The epimorphism `I^source_dim -> I^(source_dim - deleted.len())`
    /// deleting the listed coordinates.
    pub fn epi_from_deleted(source_dim: usize, deleted: &[usize]) -> Result<Self> {
        let mut sorted = deleted.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != deleted.len() {
            return Err(Error::InvalidMorphism("repeated deleted coordinate".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i == 0 || i > source_dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                bound: source_dim,
            });
        }
        Ok(Self {
            source_dim,
            assignment: (1..=source_dim)
                .filter(|i| sorted.binary_search(i).is_err())
                .map(Token::Var)
                .collect(),
        })
    }

    /// Evaluates the vertex map `{0,1}^m -> {0,1}^n`.
    pub fn apply_to_vertex(&self, vertex: &[bool]) -> Vec<bool> {
        assert_eq!(vertex.len(), self.source_dim, "vertex dimension");
        self.assignment
            .iter()
            .map(|t| match *t {
                Token::Zero => false,
                Token::One => true,
                Token::Var(i) => vertex[i - 1],
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &CubeMorphism) -> Result<CubeMorphism> {
        if inner.target_dim() != self.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim,
                found: inner.target_dim(),
            });
        }
        Ok(CubeMorphism {
            source_dim: inner.source_dim,
            assignment: self
                .assignment
                .iter()
                .map(|t| match *t {
                    Token::Var(i) => inner.assignment[i - 1],
                    c => c,
                })
                .collect(),
        })
    }

    /// Canonical epi–mono factorization `self = mono ∘ epi`.
    pub fn factorize(&self) -> CanonicalFactorization {
        let mut renumber = vec![0; self.source_dim + 1];
        let mut epi = Vec::new();
        for t in &self.assignment {
            if let Token::Var(i) = *t {
                epi.push(Token::Var(i));
                renumber[i] = epi.len();
            }
        }
        let mono = self
            .assignment
            .iter()
            .map(|t| match *t {
                Token::Var(i) => Token::Var(renumber[i]),
                c => c,
            })
            .collect();
        let mid = epi.len();
        CanonicalFactorization {
            epi: CubeMorphism {
                source_dim: self.source_dim,
                assignment: epi,
            },
            mono: CubeMorphism {
                source_dim: mid,
                assignment: mono,
            },
        }
    }

    /// The normal-form data `δ_{j1}…δ_{js} σ_{i1}…σ_{ir}`.
    pub fn canonical_form(&self) -> CanonicalForm {
        let degeneracies = self.deleted_coordinates();
        let faces = self
            .assignment
            .iter()
            .enumerate()
            .rev()
            .filter_map(|(pos, t)| match *t {
                Token::Zero => Some((pos + 1, false)),
                Token::One => Some((pos + 1, true)),
                Token::Var(_) => None,
            })
            .collect();
        CanonicalForm {
            source_dim: self.source_dim,
            faces,
            degeneracies,
        }
    }

    /// Parses the comma-separated wire format (`"1,x1"`); the empty string is
    /// the unique map into `I^0`.
    pub fn parse_wire(s: &str, source_dim: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::new(source_dim, Vec::new());
        }
        let tokens = s
            .split(',')
            .map(|tok| match tok.trim() {
                "0" => Ok(Token::Zero),
                "1" => Ok(Token::One),
                t => t
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .map(Token::Var)
                    .ok_or_else(|| Error::Parse(format!("bad morphism token `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source_dim, tokens)
    }

    /// The smallest source dimension compatible with the word, i.e. the
    /// largest variable index. Used when parsing words without context.
    pub fn parse_wire_minimal(s: &str) -> Result<Self> {
        let probe = Self::parse_wire(s, usize::MAX)?;
        let m = probe
            .assignment
            .iter()
            .filter_map(|t| match t {
                Token::Var(i) => Some(*i),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        Self::new(m, probe.assignment)
    }

    /// Epi encoding `del:i,j` (empty string for the identity).
    pub fn epi_wire(&self) -> String {
        debug_assert!(self.is_epi());
        let del = self.deleted_coordinates();
        if del.is_empty() {
            String::new()
        } else {
            let parts: Vec<String> = del.iter().map(|i| i.to_string()).collect();
            format!("del:{}", parts.join(","))
        }
    }

    /// Parses an epi encoding with a known target dimension: `""`,
    /// `"del:1,3"`, or an all-variable token word such as `"x1,x2"`.
    pub fn parse_epi(s: &str, target_dim: usize) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("del:") {
            let deleted = rest
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad deleted coordinate `{p}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::epi_from_deleted(target_dim + deleted.len(), &deleted);
        }
        if s.is_empty() {
            return Ok(Self::identity(target_dim));
        }
        let f = Self::parse_wire_minimal(s)?;
        if !f.is_epi() || f.target_dim() != target_dim {
            return Err(Error::Parse(format!(
                "`{s}` is not an epimorphism onto I^{target_dim}"
            )));
        }
        Ok(f)
    }
}

impl fmt::Display for CubeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.assignment.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            match t {
                Token::Zero => write!(f, "0")?,
                Token::One => write!(f, "1")?,
                Token::Var(i) => write!(f, "x{i}")?,
            }
        }
        Ok(())
    }
}

/// `δ_i^{n,ε}: I^{n-1} -> I^n`.
pub fn face(n: usize, i: usize, eps: bool) -> Result<CubeMorphism> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    let mut assignment: Vec<Token> = (1..n).map(Token::Var).collect();
    assignment.insert(i - 1, Token::constant(eps));
    Ok(CubeMorphism {
        source_dim: n - 1,
        assignment,
    })
}

/// `σ_i^n: I^n -> I^{n-1}`.
pub fn degeneracy(n: usize, i: usize) -> Result<CubeMorphism> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    CubeMorphism::epi_from_deleted(n, &[i])
}

/// `g ∘ f` for `f: I^a -> I^b`, `g: I^b -> I^c`.
pub fn compose(f: &CubeMorphism, g: &CubeMorphism) -> Result<CubeMorphism> {
    g.after(f)
}

/// `f = mono ∘ epi` with `epi` deleting the unused source coordinates and
/// `mono` inserting the constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalFactorization {
    pub epi: CubeMorphism,
    pub mono: CubeMorphism,
}

pub fn epi_mono_factorize(f: &CubeMorphism) -> CanonicalFactorization {
    f.factorize()
}

/// Normal form `f = δ^{ε1}_{j1} ⋯ δ^{εs}_{js} σ_{i1} ⋯ σ_{ir}` with
/// `j1 > … > js` and `i1 < … < ir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub source_dim: usize,
    /// `(j, ε)` pairs, `j` strictly decreasing.
    pub faces: Vec<(usize, bool)>,
    /// Deleted coordinates, strictly increasing.
    pub degeneracies: Vec<usize>,
}

impl CanonicalForm {
    /// Multiplies the generators back together.
    pub fn compose(&self) -> Result<CubeMorphism> {
        let mut dim = self.source_dim;
        let mut acc = CubeMorphism::identity(dim);
        for &i in self.degeneracies.iter().rev() {
            acc = degeneracy(dim, i)?.after(&acc)?;
            dim -= 1;
        }
        for &(j, eps) in self.faces.iter().rev() {
            acc = face(dim + 1, j, eps)?.after(&acc)?;
            dim += 1;
        }
        Ok(acc)
    }
}

/// All morphisms `I^m -> I^n`, each exactly once, in token order.
pub fn hom_set(m: usize, n: usize) -> Vec<CubeMorphism> {
    fn rec(m: usize, n: usize, next: usize, word: &mut Vec<Token>, out: &mut Vec<CubeMorphism>) {
        if word.len() == n {
            out.push(CubeMorphism {
                source_dim: m,
                assignment: word.clone(),
            });
            return;
        }
        for t in [Token::Zero, Token::One]
            .into_iter()
            .chain((next..=m).map(Token::Var))
        {
            word.push(t);
            let nn = if let Token::Var(i) = t { i + 1 } else { next };
            rec(m, n, nn, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, 1, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All epimorphisms `I^m ↠ I^k`, ordered by deleted coordinate set.
pub fn epis(m: usize, k: usize) -> Vec<CubeMorphism> {
    hom_set(m, k).into_iter().filter(|f| f.is_epi()).collect()
}

/// All monomorphisms `I^k ↣ I^n`.
pub fn monos(k: usize, n: usize) -> Vec<CubeMorphism> {
    hom_set(k, n).into_iter().filter(|f| f.is_mono()).collect()
}

/// `Σ_k C(m,k)·C(n,k)·2^{n−k}`.
pub fn hom_set_count(m: usize, n: usize) -> u128 {
    fn binom(a: usize, b: usize) -> u128 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u128, |acc, t| acc * (a - t) as u128 / (t + 1) as u128)
    }
    (0..=m.min(n))
        .map(|k| binom(m, k) * binom(n, k) * (1u128 << (n - k)))
        .sum()
}

/// An element of the free abelian group `ℤ□(I^m, I^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMorphismSum {
    source_dim: usize,
    target_dim: usize,
    terms: BTreeMap<CubeMorphism, i64>,
}

impl FormalMorphismSum {
    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        Self {
            source_dim,
            target_dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_morphism(f: CubeMorphism) -> Self {
        let mut s = Self::zero(f.source_dim(), f.target_dim());
        s.terms.insert(f, 1);
        s
    }

    pub fn identity(n: usize) -> Self {
        Self::from_morphism(CubeMorphism::identity(n))
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn terms(&self) -> &BTreeMap<CubeMorphism, i64> {
        &self.terms
    }

    pub fn coefficient(&self, f: &CubeMorphism) -> i64 {
        self.terms.get(f).copied().unwrap_or(0)
    }

    fn add_term(&mut self, f: CubeMorphism, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(f) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Composite `self ∘ rhs`, extended bilinearly.
    pub fn after(&self, rhs: &FormalMorphismSum) -> Result<FormalMorphismSum> {
        if rhs.target_dim != self.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim,
                found: rhs.target_dim,
            });
        }
        let mut out = Self::zero(rhs.source_dim, self.target_dim);
        for (g, a) in &self.terms {
            for (f, b) in &rhs.terms {
                out.add_term(g.after(f)?, a * b);
            }
        }
        Ok(out)
    }
}

impl Add for &FormalMorphismSum {
    type Output = FormalMorphismSum;
    fn add(self, rhs: &FormalMorphismSum) -> FormalMorphismSum {
        assert_eq!(
            (self.source_dim, self.target_dim),
            (rhs.source_dim, rhs.target_dim),
            "formal sums over different hom-sets"
        );
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(f.clone(), *c);
        }
        out
    }
}

impl Neg for &FormalMorphismSum {
    type Output = FormalMorphismSum;
    fn neg(self) -> FormalMorphismSum {
        FormalMorphismSum {
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            terms: self.terms.iter().map(|(f, c)| (f.clone(), -c)).collect(),
        }
    }
}

impl Sub for &FormalMorphismSum {
    type Output = FormalMorphismSum;
    fn sub(self, rhs: &FormalMorphismSum) -> FormalMorphismSum {
        self + &(-rhs)
    }
}

/// `a * b` is the composite `a ∘ b`; panics on a dimension mismatch.
impl Mul for &FormalMorphismSum {
    type Output = FormalMorphismSum;
    fn mul(self, rhs: &FormalMorphismSum) -> FormalMorphismSum {
        self.after(rhs).expect("composable formal sums")
    }
}

/// `z = 1 − Π_{i=1..k} (1 − δ_i^{k,0} σ_i^k)` in `ℤ□(I^k, I^k)`. Right
/// multiplication by `z` retracts onto the degenerate morphisms.
pub fn degeneracy_idempotent(k: usize) -> Result<FormalMorphismSum> {
    if k == 0 {
        return Err(Error::IndexOutOfRange { index: 0, bound: 0 });
    }
    let one = FormalMorphismSum::identity(k);
    let mut product = one.clone();
    for i in 1..=k {
        let e = face(k, i, false)?.after(&degeneracy(k, i)?)?;
        let factor = &one - &FormalMorphismSum::from_morphism(e);
        product = &product * &factor;
    }
    Ok(&one - &product)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(src: usize, s: &str) -> CubeMorphism {
        CubeMorphism::parse_wire(s, src).unwrap()
    }

    #[test]
    fn faces_and_degeneracies() {
        let f = face(1, 1, false).unwrap();
        assert_eq!(f.source_dim(), 0);
        assert_eq!(f.assignment(), &[Token::Zero]);
        assert_eq!(face(2, 1, true).unwrap(), m(1, "1,x1"));
        assert_eq!(face(3, 2, false).unwrap(), m(2, "x1,0,x2"));
        assert!(face(2, 3, false).is_err());
        assert!(face(0, 1, false).is_err());

        let s = degeneracy(1, 1).unwrap();
        assert_eq!((s.source_dim(), s.target_dim()), (1, 0));
        assert_eq!(degeneracy(2, 1).unwrap(), m(2, "x2"));
        assert_eq!(degeneracy(2, 2).unwrap(), m(2, "x1"));
        assert!(degeneracy(2, 0).is_err());
    }

    #[test]
    fn composition_examples() {
        let id0 = compose(&face(1, 1, false).unwrap(), &degeneracy(1, 1).unwrap()).unwrap();
        assert_eq!(id0, CubeMorphism::identity(0));

        // σ_2^2 δ_1^{2,0} = δ_1^{1,0} σ_1^1 (rel3 with i < j)
        let lhs = compose(&face(2, 1, false).unwrap(), &degeneracy(2, 2).unwrap()).unwrap();
        let rhs = compose(&degeneracy(1, 1).unwrap(), &face(1, 1, false).unwrap()).unwrap();
        assert_eq!(lhs, rhs);

        for f in hom_set(3, 2) {
            assert_eq!(compose(&CubeMorphism::identity(3), &f).unwrap(), f);
        }
        assert!(compose(&face(2, 1, false).unwrap(), &face(2, 1, false).unwrap()).is_err());
    }

    #[test]
    fn factorization_examples() {
        let c = m(1, "0").factorize();
        assert_eq!(c.epi, degeneracy(1, 1).unwrap());
        assert_eq!(c.mono, face(1, 1, false).unwrap());

        let c = CubeMorphism::identity(3).factorize();
        assert!(c.epi.is_identity() && c.mono.is_identity());

        let c = m(2, "1,x1").factorize();
        assert_eq!(c.epi, degeneracy(2, 2).unwrap());
        assert_eq!(c.mono, face(2, 1, true).unwrap());
    }

    #[test]
    fn epi_mono_predicates() {
        let s = degeneracy(2, 1).unwrap();
        assert!(s.is_epi() && !s.is_mono());
        let d = face(2, 1, false).unwrap();
        assert!(!d.is_epi() && d.is_mono());
        let f = m(2, "0,x2");
        assert!(!f.is_epi() && !f.is_mono());
    }

    #[test]
    fn small_hom_sets() {
        assert_eq!(hom_set(0, 0).len(), 1);
        assert_eq!(hom_set(1, 1).len(), 3);
        assert_eq!(hom_set(2, 1).len(), 4);
        assert_eq!(hom_set(3, 0), vec![CubeMorphism::new(3, vec![]).unwrap()]);
    }

    #[test]
    fn idempotent_low_dims() {
        let z1 = degeneracy_idempotent(1).unwrap();
        let d1s1 = face(1, 1, false).unwrap().after(&degeneracy(1, 1).unwrap()).unwrap();
        assert_eq!(z1.terms().len(), 1);
        assert_eq!(z1.coefficient(&d1s1), 1);

        let e = |i| face(2, i, false).unwrap().after(&degeneracy(2, i).unwrap()).unwrap();
        let z2 = degeneracy_idempotent(2).unwrap();
        let e12 = e(1).after(&e(2)).unwrap();
        assert_eq!(z2.terms().len(), 3);
        assert_eq!(z2.coefficient(&e(1)), 1);
        assert_eq!(z2.coefficient(&e(2)), 1);
        assert_eq!(z2.coefficient(&e12), -1);

        let z3 = degeneracy_idempotent(3).unwrap();
        assert!(z3.terms().keys().all(|t| !t.is_mono()));
        assert!(degeneracy_idempotent(0).is_err());
    }

    #[test]
    fn wire_format() {
        let f = m(1, "1,x1");
        assert_eq!(f.to_string(), "1,x1");
        assert_eq!(f.target_dim(), 2);
        assert!(CubeMorphism::parse_wire("x2,x1", 2).is_err());
        assert!(CubeMorphism::parse_wire("x3", 2).is_err());
        assert!(CubeMorphism::parse_wire("y1", 2).is_err());
        assert_eq!(CubeMorphism::parse_wire("", 2).unwrap().target_dim(), 0);

        let s = degeneracy(3, 2).unwrap();
        assert_eq!(s.epi_wire(), "del:2");
        assert_eq!(CubeMorphism::parse_epi("del:2", 2).unwrap(), s);
        assert_eq!(CubeMorphism::parse_epi("", 2).unwrap(), CubeMorphism::identity(2));
        assert_eq!(CubeMorphism::parse_epi("x1", 1).unwrap(), CubeMorphism::identity(1));
        assert!(CubeMorphism::parse_epi("0", 1).is_err());
    }

    #[test]
    fn vertex_map() {
        let f = m(2, "x1,1,x2");
        assert_eq!(f.apply_to_vertex(&[true, false]), vec![true, true, false]);
    }
}
