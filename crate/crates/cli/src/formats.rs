//! File formats. Every document is a JSON object whose `"type"` field names
//! the entity kind; see the README for the full schema.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use cubical::boxcat::CubeMorphism;
use cubical::catalg::{factorization_category, FiniteCategory, FiniteDiagram};
use cubical::coeff::{
    constant_system, local_system, system_from_generators, CoefficientSystem, SemiCubicalSystem, Variance,
};
use cubical::cubset::{CubesTable, CubicalMap, GeneratorId, PresentedCubicalSet, SemiCubicalSet};
use cubical::zlinalg::IntMatrix;

/// A parse or conversion error with its position: line and column for
/// syntax errors, a JSON path for everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: Option<(usize, usize)>,
    pub path: String,
    pub message: String,
}

impl FormatError {
    pub fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            line: None,
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((l, c)) = self.line {
            write!(f, "line {l}, column {c}: ")?;
        }
        if !self.path.is_empty() && self.path != "." {
            write!(f, "at `{}`: ", self.path)?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for FormatError {}

type Result<T> = std::result::Result<T, FormatError>;

/// Document kinds, as spelled in the `"type"` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocType {
    CubicalSet,
    SemicubicalSet,
    CubesTable,
    CubicalMap,
    System,
    SemicubicalSystem,
    Category,
    Diagram,
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().expect("string"))
    }
}

/// Reads the `"type"` field of a document.
pub fn doc_type(text: &str) -> Result<DocType> {
    #[derive(Deserialize)]
    struct Head {
        #[serde(rename = "type")]
        ty: DocType,
    }
    parse_as::<Head>(text).map(|h| h.ty)
}

/// Deserializes `text`, keeping the line, column and JSON path of the
/// first error.
pub fn parse_as<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        FormatError {
            line: (inner.line() > 0).then(|| (inner.line(), inner.column())),
            path,
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| FormatError {
        line: Some((e.line(), e.column())),
        path: String::new(),
        message: strip_position(&e.to_string()),
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

/// Parses a document of the expected kind.
pub fn parse_doc<T: DeserializeOwned>(text: &str, expected: DocType) -> Result<T> {
    let found = doc_type(text)?;
    if found != expected {
        return Err(FormatError::at("type", format!("expected a {expected} document, found {found}")));
    }
    parse_as(text)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn conv<T>(path: &str, r: cubical::Result<T>) -> Result<T> {
    r.map_err(|e| FormatError::at(path, e))
}

// ---------------------------------------------------------------- matrices

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Small(i64),
    /// Decimal digits, for entries that do not fit in 64 bits.
    Big(String),
}

/// Row-major integer matrix with an explicit shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub shape: [usize; 2],
    pub data: Vec<Entry>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let (r, c) = m.shape();
        let data = (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| {
                let v = m.get(i, j);
                v.to_i64().map_or_else(|| Entry::Big(v.to_string()), Entry::Small)
            })
            .collect();
        Self { shape: [r, c], data }
    }

    pub fn to_matrix(&self, path: &str) -> Result<IntMatrix> {
        let [r, c] = self.shape;
        if self.data.len() != r * c {
            return Err(FormatError::at(
                path,
                format!("shape {r}x{c} needs {} entries, found {}", r * c, self.data.len()),
            ));
        }
        let mut m = IntMatrix::zeros(r, c);
        for (k, e) in self.data.iter().enumerate() {
            let v = match e {
                Entry::Small(v) => BigInt::from(*v),
                Entry::Big(s) => BigInt::from_str(s)
                    .map_err(|_| FormatError::at(format!("{path}.data[{k}]"), format!("`{s}` is not an integer")))?,
            };
            m.set(k / c, k % c, v);
        }
        Ok(m)
    }
}

fn expect_shape(m: &IntMatrix, rows: usize, cols: usize, path: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(FormatError::at(
            path,
            format!("matrix is {}x{}, expected {rows}x{cols}", m.shape().0, m.shape().1),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------- cubical sets

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    /// One `[∂_i^0, ∂_i^1]` pair of cube keys per direction; the dimension is
    /// the number of pairs.
    #[serde(default)]
    pub faces: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub generators: Vec<GeneratorDoc>,
}

impl SetDoc {
    pub fn from_set(x: &PresentedCubicalSet) -> Self {
        let generators = x
            .generators()
            .map(|g| GeneratorDoc {
                name: x.name(g).to_string(),
                faces: (1..=g.dim)
                    .map(|i| [false, true].map(|e| x.cube_key(x.generator_face(g, i, e))))
                    .collect(),
            })
            .collect();
        Self {
            ty: DocType::CubicalSet,
            generators,
        }
    }

    pub fn to_set(&self) -> Result<PresentedCubicalSet> {
        let entries: Vec<(&str, Vec<[&str; 2]>)> = self
            .generators
            .iter()
            .map(|g| (g.name.as_str(), g.faces.iter().map(|[a, b]| [a.as_str(), b.as_str()]).collect()))
            .collect();
        // Resolve every key up front for a precise path.
        let dims: HashMap<&str, usize> = entries.iter().map(|(n, f)| (*n, f.len())).collect();
        for (k, g) in self.generators.iter().enumerate() {
            for (i, pair) in g.faces.iter().enumerate() {
                for (e, key) in pair.iter().enumerate() {
                    let path = format!("generators[{k}].faces[{i}][{e}]");
                    let (name, epi) = key.rsplit_once('@').unwrap_or((key, ""));
                    let dim = dims
                        .get(name)
                        .filter(|_| key.contains('@'))
                        .ok_or_else(|| FormatError::at(&path, format!("`{key}` does not name a cube of this set")))?;
                    CubeMorphism::parse_epi(epi, *dim).map_err(|err| FormatError::at(&path, format!("`{key}`: {err}")))?;
                }
            }
        }
        conv("generators", PresentedCubicalSet::from_keys(&entries))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    /// Faces name other generators directly.
    pub generators: Vec<GeneratorDoc>,
}

impl SemiDoc {
    pub fn from_semi(s: &SemiCubicalSet) -> Self {
        let generators = (0..=s.top_dim())
            .flat_map(|n| (0..s.count(n)).map(move |x| (n, x)))
            .map(|(n, x)| GeneratorDoc {
                name: s.name(n, x).to_string(),
                faces: (1..=n)
                    .map(|i| [false, true].map(|e| s.name(n - 1, s.face(n, x, i, e)).to_string()))
                    .collect(),
            })
            .collect();
        Self {
            ty: DocType::SemicubicalSet,
            generators,
        }
    }

    pub fn to_semi(&self) -> Result<SemiCubicalSet> {
        let entries: Vec<(&str, Vec<[&str; 2]>)> = self
            .generators
            .iter()
            .map(|g| (g.name.as_str(), g.faces.iter().map(|[a, b]| [a.as_str(), b.as_str()]).collect()))
            .collect();
        conv("generators", SemiCubicalSet::from_names(&entries))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableCubeDoc {
    pub key: String,
    #[serde(default)]
    pub faces: Vec<[String; 2]>,
    #[serde(default)]
    pub degeneracies: Vec<String>,
}

/// A truncated cubical set listed cube by cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub truncation: usize,
    pub cubes: Vec<Vec<TableCubeDoc>>,
}

impl TableDoc {
    pub fn from_table(t: &CubesTable) -> Self {
        let top = t.truncation();
        let cubes = (0..=top)
            .map(|n| {
                (0..t.count(n))
                    .map(|x| TableCubeDoc {
                        key: t.key(n, x).to_string(),
                        faces: (1..=n)
                            .map(|i| [false, true].map(|e| t.key(n - 1, t.face(n, x, i, e)).to_string()))
                            .collect(),
                        degeneracies: if n < top {
                            (1..=n + 1).map(|i| t.key(n + 1, t.degeneracy(n, x, i)).to_string()).collect()
                        } else {
                            Vec::new()
                        },
                    })
                    .collect()
            })
            .collect();
        Self {
            ty: DocType::CubesTable,
            truncation: top,
            cubes,
        }
    }

    pub fn to_table(&self) -> Result<CubesTable> {
        let t = self.truncation;
        if self.cubes.len() != t + 1 {
            return Err(FormatError::at("cubes", format!("expected {} dimensions, found {}", t + 1, self.cubes.len())));
        }
        let index: Vec<HashMap<&str, usize>> = self
            .cubes
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.key.as_str(), i)).collect())
            .collect();
        let lookup = |n: usize, key: &str, path: String| {
            index[n]
                .get(key)
                .copied()
                .ok_or_else(|| FormatError::at(path, format!("no cube `{key}` in dimension {n}")))
        };
        let mut keys = Vec::new();
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for (n, cs) in self.cubes.iter().enumerate() {
            keys.push(cs.iter().map(|c| c.key.clone()).collect());
            let mut fs = Vec::new();
            let mut ds = Vec::new();
            for (x, c) in cs.iter().enumerate() {
                let p = format!("cubes[{n}][{x}]");
                if c.faces.len() != n {
                    return Err(FormatError::at(format!("{p}.faces"), format!("needs {n} face pairs")));
                }
                let mut f = Vec::new();
                for (i, [a, b]) in c.faces.iter().enumerate() {
                    f.push([
                        lookup(n - 1, a, format!("{p}.faces[{i}][0]"))?,
                        lookup(n - 1, b, format!("{p}.faces[{i}][1]"))?,
                    ]);
                }
                fs.push(f);
                let want = if n < t { n + 1 } else { 0 };
                if c.degeneracies.len() != want {
                    return Err(FormatError::at(format!("{p}.degeneracies"), format!("needs {want} entries")));
                }
                let mut d = Vec::new();
                for (i, k) in c.degeneracies.iter().enumerate() {
                    d.push(lookup(n + 1, k, format!("{p}.degeneracies[{i}]"))?);
                }
                ds.push(d);
            }
            faces.push(fs);
            degeneracies.push(ds);
        }
        conv("cubes", CubesTable::new(t, keys, faces, degeneracies))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub source: SetDoc,
    pub target: SetDoc,
    /// Source generator name to target cube key.
    pub assignment: BTreeMap<String, String>,
}

impl MapDoc {
    pub fn from_map(f: &CubicalMap) -> Self {
        let assignment = f
            .source()
            .generators()
            .map(|g| (f.source().name(g).to_string(), f.target().cube_key(f.image_of_generator(g))))
            .collect();
        Self {
            ty: DocType::CubicalMap,
            source: SetDoc::from_set(f.source()),
            target: SetDoc::from_set(f.target()),
            assignment,
        }
    }

    pub fn to_map(&self) -> Result<CubicalMap> {
        let source = self.source.to_set().map_err(|e| nest("source", e))?;
        let target = self.target.to_set().map_err(|e| nest("target", e))?;
        for (g, key) in &self.assignment {
            if source.find(g).is_none() {
                return Err(FormatError::at(format!("assignment.{g}"), format!("`{g}` is not a source generator")));
            }
            target
                .cube_from_key(key)
                .map_err(|e| FormatError::at(format!("assignment.{g}"), e))?;
        }
        let pairs: Vec<(&str, &str)> = self.assignment.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        conv("assignment", CubicalMap::from_keys(source, target, &pairs))
    }
}

fn nest(prefix: &str, mut e: FormatError) -> FormatError {
    e.path = if e.path.is_empty() {
        prefix.to_string()
    } else {
        format!("{prefix}.{}", e.path)
    };
    e
}

// ---------------------------------------------------------------- systems

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// `rank` everywhere, identity matrices.
    Constant,
    /// `ranks` and `faces` on generators, identity degeneracies.
    Generators,
    /// Rank `rank`, unimodular `faces` on generators.
    Local,
    /// Every cube of the truncated set listed explicitly.
    Table,
}

/// Face matrices keyed by `"i,ε"`, degeneracy matrices by `"i"`.
pub type MatrixMap = BTreeMap<String, MatrixDoc>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub variance: Variance,
    pub kind: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ranks: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<String, MatrixMap>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub degeneracies: BTreeMap<String, MatrixMap>,
}

/// What a system file is read against.
#[derive(Debug, Clone)]
pub enum Base {
    Set(PresentedCubicalSet),
    Table(CubesTable),
}

impl Base {
    /// The cubes table at truncation `t`; a table base must already have it.
    pub fn table(&self, t: usize) -> Result<CubesTable> {
        match self {
            Base::Set(x) => Ok(x.expand(t)),
            Base::Table(tab) if tab.truncation() == t => Ok(tab.clone()),
            Base::Table(tab) if tab.truncation() > t => conv("truncation", tab.truncate(t)),
            Base::Table(tab) => Err(FormatError::at(
                "truncation",
                format!("the cubes table stops at dimension {}, {t} is needed", tab.truncation()),
            )),
        }
    }

    pub fn truncation(&self) -> Option<usize> {
        match self {
            Base::Set(_) => None,
            Base::Table(t) => Some(t.truncation()),
        }
    }
}

fn face_key(i: usize, eps: bool) -> String {
    format!("{i},{}", eps as u8)
}

fn require<'a, T>(map: &'a BTreeMap<String, T>, key: &str, path: &str) -> Result<&'a T> {
    map.get(key)
        .ok_or_else(|| FormatError::at(path, format!("missing entry for `{key}`")))
}

impl SystemDoc {
    pub fn constant(variance: Variance, rank: usize) -> Self {
        Self {
            ty: DocType::System,
            variance,
            kind: SystemKind::Constant,
            truncation: None,
            rank: Some(rank),
            ranks: BTreeMap::new(),
            faces: BTreeMap::new(),
            degeneracies: BTreeMap::new(),
        }
    }

    /// Table form of any system.
    pub fn from_system(f: &CoefficientSystem) -> Self {
        let base = f.base();
        let t = base.truncation();
        let mut doc = Self {
            kind: SystemKind::Table,
            truncation: Some(t),
            rank: None,
            ..Self::constant(f.variance(), 0)
        };
        for n in 0..=t {
            for x in 0..base.count(n) {
                let key = base.key(n, x).to_string();
                doc.ranks.insert(key.clone(), f.rank(n, x));
                if n > 0 {
                    let fm = (1..=n)
                        .flat_map(|i| [false, true].map(|e| (i, e)))
                        .map(|(i, e)| (face_key(i, e), MatrixDoc::from_matrix(f.face_matrix(n, x, i, e))))
                        .collect();
                    doc.faces.insert(key.clone(), fm);
                }
                if n < t {
                    let dm = (1..=n + 1)
                        .map(|i| (i.to_string(), MatrixDoc::from_matrix(f.degeneracy_matrix(n, x, i))))
                        .collect();
                    doc.degeneracies.insert(key, dm);
                }
            }
        }
        doc
    }

    /// Builds the system. `default_t` is used when the document does not fix
    /// a truncation.
    pub fn to_system(&self, base: &Base, default_t: usize) -> Result<CoefficientSystem> {
        let t = self.truncation.or(base.truncation()).unwrap_or(default_t);
        match self.kind {
            SystemKind::Constant => {
                let r = self.rank.ok_or_else(|| FormatError::at("rank", "a constant system needs `rank`"))?;
                Ok(constant_system(&base.table(t)?, r, self.variance))
            }
            SystemKind::Generators | SystemKind::Local => {
                let Base::Set(x) = base else {
                    return Err(FormatError::at("kind", "generator data needs a cubical_set, not a cubes table"));
                };
                let (ranks, faces) = self.generator_data(x)?;
                let r = if self.kind == SystemKind::Local {
                    Some(self.rank.ok_or_else(|| FormatError::at("rank", "a local system needs `rank`"))?)
                } else {
                    None
                };
                match r {
                    Some(r) => conv("faces", local_system(x, t, r, &faces, self.variance)),
                    None => conv("faces", system_from_generators(x, t, &ranks, &faces, self.variance)),
                }
            }
            SystemKind::Table => {
                let t = self
                    .truncation
                    .or(base.truncation())
                    .ok_or_else(|| FormatError::at("truncation", "a table system needs `truncation`"))?;
                self.table_system(&base.table(t)?)
            }
        }
    }

    fn generator_data(&self, x: &PresentedCubicalSet) -> Result<(Vec<Vec<usize>>, Vec<Vec<Vec<[IntMatrix; 2]>>>)> {
        let local = self.kind == SystemKind::Local;
        let rank_of = |g: GeneratorId| -> Result<usize> {
            if local {
                return self.rank.ok_or_else(|| FormatError::at("rank", "a local system needs `rank`"));
            }
            require(&self.ranks, x.name(g), "ranks").copied()
        };
        let mut ranks: Vec<Vec<usize>> = (0..=x.top_dim()).map(|n| Vec::with_capacity(x.generator_count(n))).collect();
        let mut faces: Vec<Vec<Vec<[IntMatrix; 2]>>> = (0..=x.top_dim()).map(|_| Vec::new()).collect();
        for g in x.generators() {
            ranks[g.dim].push(rank_of(g)?);
        }
        for g in x.generators() {
            let name = x.name(g);
            let mut gf = Vec::new();
            if g.dim > 0 {
                let fm = require(&self.faces, name, "faces")?;
                for i in 1..=g.dim {
                    let mut pair = Vec::new();
                    for e in [false, true] {
                        let k = face_key(i, e);
                        let path = format!("faces.{name}.{k}");
                        let m = require(fm, &k, &format!("faces.{name}"))?.to_matrix(&path)?;
                        let h = x.generator_face(g, i, e).generator;
                        let (from, to) = (ranks[g.dim][g.index], ranks[h.dim][h.index]);
                        let (r, c) = match self.variance {
                            Variance::Contravariant => (to, from),
                            Variance::Covariant => (from, to),
                        };
                        expect_shape(&m, r, c, &path)?;
                        pair.push(m);
                    }
                    let [a, b]: [IntMatrix; 2] = pair.try_into().expect("two matrices");
                    gf.push([a, b]);
                }
            }
            faces[g.dim].push(gf);
        }
        Ok((ranks, faces))
    }

    fn table_system(&self, table: &CubesTable) -> Result<CoefficientSystem> {
        let t = table.truncation();
        let contra = self.variance == Variance::Contravariant;
        let ranks: Vec<Vec<usize>> = (0..=t)
            .map(|n| {
                (0..table.count(n))
                    .map(|x| require(&self.ranks, table.key(n, x), "ranks").copied())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let oriented = |from: usize, to: usize| if contra { (to, from) } else { (from, to) };
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for n in 0..=t {
            let mut fs = Vec::new();
            let mut ds = Vec::new();
            for x in 0..table.count(n) {
                let key = table.key(n, x);
                let mut f = Vec::new();
                if n > 0 {
                    let fm = require(&self.faces, key, "faces")?;
                    for i in 1..=n {
                        let mut pair = Vec::new();
                        for e in [false, true] {
                            let k = face_key(i, e);
                            let path = format!("faces.{key}.{k}");
                            let m = require(fm, &k, &format!("faces.{key}"))?.to_matrix(&path)?;
                            let (r, c) = oriented(ranks[n][x], ranks[n - 1][table.face(n, x, i, e)]);
                            expect_shape(&m, r, c, &path)?;
                            pair.push(m);
                        }
                        let [a, b]: [IntMatrix; 2] = pair.try_into().expect("two matrices");
                        f.push([a, b]);
                    }
                }
                fs.push(f);
                let mut d = Vec::new();
                if n < t {
                    let dm = require(&self.degeneracies, key, "degeneracies")?;
                    for i in 1..=n + 1 {
                        let k = i.to_string();
                        let path = format!("degeneracies.{key}.{k}");
                        let m = require(dm, &k, &format!("degeneracies.{key}"))?.to_matrix(&path)?;
                        let (r, c) = oriented(ranks[n][x], ranks[n + 1][table.degeneracy(n, x, i)]);
                        expect_shape(&m, r, c, &path)?;
                        d.push(m);
                    }
                }
                ds.push(d);
            }
            faces.push(fs);
            degeneracies.push(ds);
        }
        conv("", CoefficientSystem::new(table.clone(), self.variance, ranks, faces, degeneracies))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiSystemKind {
    Constant,
    Generators,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiSystemDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub variance: Variance,
    pub kind: SemiSystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ranks: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<String, MatrixMap>,
}

impl SemiSystemDoc {
    pub fn from_system(f: &SemiCubicalSystem) -> Self {
        let s = f.set();
        let mut ranks = BTreeMap::new();
        let mut faces = BTreeMap::new();
        for n in 0..=s.top_dim() {
            for x in 0..s.count(n) {
                ranks.insert(s.name(n, x).to_string(), f.rank(n, x));
                if n > 0 {
                    let fm = (1..=n)
                        .flat_map(|i| [false, true].map(|e| (i, e)))
                        .map(|(i, e)| (face_key(i, e), MatrixDoc::from_matrix(f.face_matrix(n, x, i, e))))
                        .collect();
                    faces.insert(s.name(n, x).to_string(), fm);
                }
            }
        }
        Self {
            ty: DocType::SemicubicalSystem,
            variance: f.variance(),
            kind: SemiSystemKind::Generators,
            rank: None,
            ranks,
            faces,
        }
    }

    pub fn to_system(&self, s: &SemiCubicalSet) -> Result<SemiCubicalSystem> {
        if self.kind == SemiSystemKind::Constant {
            let r = self.rank.ok_or_else(|| FormatError::at("rank", "a constant system needs `rank`"))?;
            return Ok(SemiCubicalSystem::constant(s.clone(), r, self.variance));
        }
        let ranks: Vec<Vec<usize>> = (0..=s.top_dim())
            .map(|n| {
                (0..s.count(n))
                    .map(|x| require(&self.ranks, s.name(n, x), "ranks").copied())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut faces = Vec::new();
        for n in 0..=s.top_dim() {
            let mut fs = Vec::new();
            for x in 0..s.count(n) {
                let name = s.name(n, x);
                let mut f = Vec::new();
                if n > 0 {
                    let fm = require(&self.faces, name, "faces")?;
                    for i in 1..=n {
                        let mut pair = Vec::new();
                        for e in [false, true] {
                            let k = face_key(i, e);
                            let path = format!("faces.{name}.{k}");
                            let m = require(fm, &k, &format!("faces.{name}"))?.to_matrix(&path)?;
                            let (from, to) = (ranks[n][x], ranks[n - 1][s.face(n, x, i, e)]);
                            let (r, c) = match self.variance {
                                Variance::Contravariant => (to, from),
                                Variance::Covariant => (from, to),
                            };
                            expect_shape(&m, r, c, &path)?;
                            pair.push(m);
                        }
                        let [a, b]: [IntMatrix; 2] = pair.try_into().expect("two matrices");
                        f.push([a, b]);
                    }
                }
                fs.push(f);
            }
            faces.push(fs);
        }
        conv("", SemiCubicalSystem::new(s.clone(), self.variance, ranks, faces))
    }
}

// ------------------------------------------------------------- categories

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// Objects, non-identity morphisms and the composition table as rows
/// `"g∘f = h"`. Identities are implicit and named `id_<object>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default)]
    pub compositions: Vec<String>,
}

fn parse_composition(row: &str, path: &str) -> Result<(String, String, String)> {
    let bad = || FormatError::at(path, format!("`{row}` is not of the form `g∘f = h`"));
    let (lhs, h) = row.split_once('=').ok_or_else(bad)?;
    let (g, f) = lhs.split_once('∘').or_else(|| lhs.split_once('*')).ok_or_else(bad)?;
    let (g, f, h) = (g.trim(), f.trim(), h.trim());
    if g.is_empty() || f.is_empty() || h.is_empty() {
        return Err(bad());
    }
    Ok((g.to_string(), f.to_string(), h.to_string()))
}

impl CategoryDoc {
    pub fn from_category(c: &FiniteCategory) -> Self {
        let arrows: Vec<usize> = (0..c.morphism_count()).filter(|&m| !c.is_identity(m)).collect();
        let morphisms = arrows
            .iter()
            .map(|&m| MorphismDoc {
                name: c.morphism(m).name.clone(),
                dom: c.object_name(c.dom(m)).to_string(),
                cod: c.object_name(c.cod(m)).to_string(),
            })
            .collect();
        let mut compositions = Vec::new();
        for &g in &arrows {
            for &f in &arrows {
                if let Some(h) = c.compose(g, f) {
                    let name = |m: usize| c.morphism(m).name.as_str();
                    compositions.push(format!("{}∘{} = {}", name(g), name(f), name(h)));
                }
            }
        }
        Self {
            ty: DocType::Category,
            objects: c.objects().to_vec(),
            morphisms,
            compositions,
        }
    }

    pub fn to_category(&self) -> Result<FiniteCategory> {
        let rows = self
            .compositions
            .iter()
            .enumerate()
            .map(|(k, r)| parse_composition(r, &format!("compositions[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let objects: Vec<&str> = self.objects.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> = self
            .morphisms
            .iter()
            .map(|m| (m.name.as_str(), m.dom.as_str(), m.cod.as_str()))
            .collect();
        let comps: Vec<(&str, &str, &str)> = rows.iter().map(|(g, f, h)| (g.as_str(), f.as_str(), h.as_str())).collect();
        conv("compositions", FiniteCategory::from_spec(&objects, &arrows, &comps))
    }
}

/// Which category a diagram file lives on, relative to its `category`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Over {
    Category,
    Opposite,
    Factorization,
}

/// Rank per object and matrix per non-identity morphism of the category it
/// lives on. Identities default to identity matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    #[serde(rename = "type")]
    pub ty: DocType,
    pub category: CategoryDoc,
    pub over: Over,
    pub ranks: BTreeMap<String, usize>,
    #[serde(default)]
    pub matrices: BTreeMap<String, MatrixDoc>,
}

/// Category a diagram of the given placement lives on.
pub fn support(c: &FiniteCategory, over: Over) -> Result<FiniteCategory> {
    match over {
        Over::Category => Ok(c.clone()),
        Over::Opposite => Ok(c.opposite()),
        Over::Factorization => conv("over", factorization_category(c).map(|f| f.category)),
    }
}

impl DiagramDoc {
    pub fn from_diagram(base: &FiniteCategory, over: Over, f: &FiniteDiagram) -> Self {
        let d = f.category();
        let ranks = (0..d.object_count())
            .map(|o| (d.object_name(o).to_string(), f.rank(o)))
            .collect();
        let matrices = (0..d.morphism_count())
            .filter(|&m| !d.is_identity(m))
            .map(|m| (d.morphism(m).name.clone(), MatrixDoc::from_matrix(f.matrix(m))))
            .collect();
        Self {
            ty: DocType::Diagram,
            category: CategoryDoc::from_category(base),
            over,
            ranks,
            matrices,
        }
    }

    /// The base category and the diagram on `support(base, over)`.
    pub fn to_diagram(&self) -> Result<(FiniteCategory, FiniteDiagram)> {
        let base = self.category.to_category().map_err(|e| nest("category", e))?;
        let d = support(&base, self.over)?;
        let ranks = (0..d.object_count())
            .map(|o| require(&self.ranks, d.object_name(o), "ranks").copied())
            .collect::<Result<Vec<_>>>()?;
        for name in self.ranks.keys() {
            if d.find_object(name).is_none() {
                return Err(FormatError::at(format!("ranks.{name}"), format!("`{name}` is not an object")));
            }
        }
        let mut named = Vec::new();
        for (name, m) in &self.matrices {
            let path = format!("matrices.{name}");
            let id = d
                .find_morphism(name)
                .ok_or_else(|| FormatError::at(&path, format!("`{name}` is not a morphism")))?;
            let m = m.to_matrix(&path)?;
            expect_shape(&m, ranks[d.cod(id)], ranks[d.dom(id)], &path)?;
            named.push((name.as_str(), m));
        }
        let diagram = conv("matrices", FiniteDiagram::from_named(d, ranks, &named))?;
        Ok((base, diagram))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cubical::catalg::{square_poset, z2_category};
    use cubical::fixtures;

    fn round_trip<T: Serialize + DeserializeOwned + PartialEq + fmt::Debug>(doc: &T, ty: DocType) {
        let text = to_json(doc);
        let back: T = parse_doc(&text, ty).unwrap();
        assert_eq!(&back, doc);
    }

    #[test]
    fn sets_round_trip() {
        for x in [fixtures::point(), fixtures::torus(), fixtures::twisted_square(), fixtures::disjoint_union(&fixtures::circle(), &fixtures::interval())] {
            let doc = SetDoc::from_set(&x);
            round_trip(&doc, DocType::CubicalSet);
            assert_eq!(doc.to_set().unwrap(), x);
        }
        let s = fixtures::torus_semi();
        let doc = SemiDoc::from_semi(&s);
        round_trip(&doc, DocType::SemicubicalSet);
        assert_eq!(doc.to_semi().unwrap(), s);
        let t = fixtures::circle().expand(2);
        let doc = TableDoc::from_table(&t);
        round_trip(&doc, DocType::CubesTable);
        assert_eq!(doc.to_table().unwrap(), t);
    }

    #[test]
    fn maps_and_systems_round_trip() {
        let f = fixtures::fold_map(&fixtures::circle());
        let doc = MapDoc::from_map(&f);
        round_trip(&doc, DocType::CubicalMap);
        assert_eq!(doc.to_map().unwrap(), f);

        let sys = fixtures::monodromy_circle(Variance::Covariant, 2);
        let doc = SystemDoc::from_system(&sys);
        round_trip(&doc, DocType::System);
        assert_eq!(doc.to_system(&Base::Set(fixtures::circle()), 5).unwrap(), sys);

        let semi = fixtures::monodromy_circle_semi();
        let doc = SemiSystemDoc::from_system(&semi);
        round_trip(&doc, DocType::SemicubicalSystem);
        assert_eq!(doc.to_system(semi.set()).unwrap(), semi);
    }

    #[test]
    fn categories_round_trip() {
        for c in [square_poset(), z2_category()] {
            let doc = CategoryDoc::from_category(&c);
            round_trip(&doc, DocType::Category);
            assert_eq!(doc.to_category().unwrap(), c);
        }
        let sq = square_poset();
        let d = fixtures::scalar_diagram(sq.opposite(), &fixtures::SQUARE_WEIGHTS).unwrap();
        let doc = DiagramDoc::from_diagram(&sq, Over::Opposite, &d);
        round_trip(&doc, DocType::Diagram);
        assert_eq!(doc.to_diagram().unwrap(), (sq, d));
    }

    #[test]
    fn big_entries_survive() {
        let mut m = IntMatrix::zeros(1, 1);
        m.set(0, 0, BigInt::from_str("123456789012345678901234567890").unwrap());
        let doc = MatrixDoc::from_matrix(&m);
        assert!(matches!(doc.data[0], Entry::Big(_)));
        let back: MatrixDoc = parse_as(&to_json(&doc)).unwrap();
        assert_eq!(back.to_matrix("m").unwrap(), m);
    }

    #[test]
    fn errors_carry_positions() {
        let e = doc_type("{\n  \"type\": \"cubical_set\",\n  \"generators\": [\n").unwrap_err();
        assert!(e.line.is_some());
        let text = r#"{"type": "cubical_set", "generators": [{"name": "v"}, {"name": "e", "faces": [["v@", 3]]}]}"#;
        let e = parse_doc::<SetDoc>(text, DocType::CubicalSet).unwrap_err();
        assert_eq!(e.path, "generators[1].faces[0][1]");
        assert!(e.line.is_some());
        let text = r#"{"type": "cubical_set", "generators": [{"name": "v"}, {"name": "e", "faces": [["v@", "w@"]]}]}"#;
        let e = parse_doc::<SetDoc>(text, DocType::CubicalSet).unwrap().to_set().unwrap_err();
        assert_eq!(e.path, "generators[1].faces[0][1]");
        let e = parse_doc::<SetDoc>(r#"{"type": "system"}"#, DocType::CubicalSet).unwrap_err();
        assert!(e.message.contains("expected a cubical_set document"));
    }

    #[test]
    fn rejects_non_increasing_variables() {
        let text = r#"{"type": "cubical_set", "generators": [
            {"name": "v"},
            {"name": "e", "faces": [["v@", "v@"]]},
            {"name": "s", "faces": [["e@x1", "e@x1"], ["e@x1", "e@x1"]]},
            {"name": "c", "faces": [["s@x2,x1", "s@x1,x2"], ["s@x1,x2", "s@x1,x2"], ["s@x1,x2", "s@x1,x2"]]}
        ]}"#;
        let e = parse_doc::<SetDoc>(text, DocType::CubicalSet).unwrap().to_set().unwrap_err();
        assert_eq!(e.path, "generators[3].faces[0][0]");
        assert!(e.to_string().contains("x2,x1"), "{e}");
    }

    #[test]
    fn rejects_wrong_matrix_shape() {
        let text = r#"{"type": "system", "variance": "contravariant", "kind": "local", "rank": 1,
            "faces": {"e": {"1,0": {"shape": [1, 1], "data": [1]}, "1,1": {"shape": [2, 1], "data": [1, 0]}}}}"#;
        let doc: SystemDoc = parse_doc(text, DocType::System).unwrap();
        let e = doc.to_system(&Base::Set(fixtures::circle()), 2).unwrap_err();
        assert_eq!(e.path, "faces.e.1,1");
        let bad = r#"{"shape": [2, 2], "data": [1, 0, 0]}"#;
        let m: MatrixDoc = parse_as(bad).unwrap();
        assert!(m.to_matrix("m").is_err());
    }
}
