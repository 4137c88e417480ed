use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// Finite category given by its full composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `comp[g][f] = g ∘ f` whenever `cod f = dom g`.
    comp: Vec<Vec<Option<usize>>>,
    /// `hom[a][b]`: morphisms `a -> b` in id order.
    hom: Vec<Vec<Vec<usize>>>,
}

impl FiniteCategory {
    /// Checks that the table is complete, associative and unital.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let nm = morphisms.len();
        if identities.len() != objects.len() || comp.len() != nm || comp.iter().any(|r| r.len() != nm) {
            return Err(Error::Invalid("category table has the wrong size".into()));
        }
        let mut names = HashMap::new();
        for m in &morphisms {
            if m.dom >= objects.len() || m.cod >= objects.len() {
                return Err(Error::Invalid(format!("morphism `{}` has an unknown end", m.name)));
            }
            if names.insert(m.name.as_str(), ()).is_some() {
                return Err(Error::Invalid(format!("duplicate morphism `{}`", m.name)));
            }
        }
        let mut hom = vec![vec![Vec::new(); objects.len()]; objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.dom][m.cod].push(i);
        }
        let cat = Self {
            objects,
            morphisms,
            identities,
            comp,
            hom,
        };
        cat.validate().into_result()?;
        Ok(cat)
    }

    /// From object names, non-identity arrows `(name, dom, cod)` and the
    /// composites `(g, f, g∘f)` of all composable non-identity pairs.
    /// Identities are added as `id_<object>`.
    pub fn from_spec(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        compositions: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let obj: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        if obj.len() != objects.len() {
            return Err(Error::Invalid("duplicate object".into()));
        }
        let find_obj = |o: &str| {
            obj.get(o)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("unknown object `{o}`")))
        };
        let mut morphisms: Vec<Morphism> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                dom: i,
                cod: i,
            })
            .collect();
        for (name, d, c) in arrows {
            morphisms.push(Morphism {
                name: name.to_string(),
                dom: find_obj(d)?,
                cod: find_obj(c)?,
            });
        }
        let ids: Vec<usize> = (0..objects.len()).collect();
        let index: HashMap<String, usize> =
            morphisms.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        let find = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("unknown morphism `{n}`")))
        };
        let nm = morphisms.len();
        let mut comp = vec![vec![None; nm]; nm];
        for f in 0..nm {
            let (d, c) = (morphisms[f].dom, morphisms[f].cod);
            comp[f][ids[d]] = Some(f);
            comp[ids[c]][f] = Some(f);
        }
        for (g, f, h) in compositions {
            let (g, f, h) = (find(g)?, find(f)?, find(h)?);
            if morphisms[f].cod != morphisms[g].dom {
                return Err(Error::Invalid(format!(
                    "`{}` and `{}` are not composable",
                    morphisms[g].name, morphisms[f].name
                )));
            }
            comp[g][f] = Some(h);
        }
        Self::new(objects.iter().map(|o| o.to_string()).collect(), morphisms, ids, comp)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn dom(&self, m: usize) -> usize {
        self.morphisms[m].dom
    }

    pub fn cod(&self, m: usize) -> usize {
        self.morphisms[m].cod
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.dom(m)] == m
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a][b]
    }

    /// Morphisms with the given domain.
    pub fn out_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.hom[a].iter().flatten().copied()
    }

    pub fn find_object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// `𝒞^op` with the same object and morphism ids.
    pub fn opposite(&self) -> Self {
        let nm = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                dom: m.cod,
                cod: m.dom,
            })
            .collect::<Vec<_>>();
        let comp = (0..nm)
            .map(|g| (0..nm).map(|f| self.comp[f][g]).collect())
            .collect();
        let mut hom = vec![vec![Vec::new(); self.objects.len()]; self.objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.dom][m.cod].push(i);
        }
        Self {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            comp,
            hom,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let nm = self.morphisms.len();
        let name = |m: usize| self.morphisms[m].name.as_str();
        for (o, &id) in self.identities.iter().enumerate() {
            if id >= nm || self.dom(id) != o || self.cod(id) != o {
                rep.push("identity", format!("bad identity for `{}`", self.objects[o]));
                return rep;
            }
        }
        for g in 0..nm {
            for f in 0..nm {
                let composable = self.cod(f) == self.dom(g);
                match self.comp[g][f] {
                    None if composable => {
                        rep.push("composition", format!("`{} ∘ {}` missing", name(g), name(f)))
                    }
                    Some(_) if !composable => rep.push(
                        "composition",
                        format!("`{} ∘ {}` given for a non-composable pair", name(g), name(f)),
                    ),
                    Some(h) if h >= nm || self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) => rep
                        .push(
                            "composition",
                            format!("`{} ∘ {}` has the wrong ends", name(g), name(f)),
                        ),
                    _ => {}
                }
            }
        }
        if !rep.is_valid() {
            return rep;
        }
        for f in 0..nm {
            if self.comp[self.identities[self.cod(f)]][f] != Some(f)
                || self.comp[f][self.identities[self.dom(f)]] != Some(f)
            {
                rep.push("identity", format!("unit law fails at `{}`", name(f)));
            }
        }
        for h in 0..nm {
            for g in self.out_of(self.cod(h)) {
                for f in self.out_of(self.cod(g)) {
                    let gh = self.comp[g][h].expect("composable");
                    let fg = self.comp[f][g].expect("composable");
                    if self.comp[f][gh] != self.comp[fg][h] {
                        rep.push(
                            "associativity",
                            format!("({} ∘ {}) ∘ {}", name(f), name(g), name(h)),
                        );
                    }
                }
            }
        }
        rep
    }
}

/// The terminal category.
pub fn point_category() -> FiniteCategory {
    FiniteCategory::from_spec(&["*"], &[], &[]).expect("point")
}

/// `[1] = {0 -> 1}`.
pub fn arrow_category() -> FiniteCategory {
    FiniteCategory::from_spec(&["0", "1"], &[("a", "0", "1")], &[]).expect("arrow")
}

/// The poset `[1] × [1]`: four objects, nine morphisms.
pub fn square_poset() -> FiniteCategory {
    FiniteCategory::from_spec(
        &["00", "01", "10", "11"],
        &[
            ("l", "00", "01"),
            ("b", "00", "10"),
            ("r", "10", "11"),
            ("t", "01", "11"),
            ("d", "00", "11"),
        ],
        &[("t", "l", "d"), ("r", "b", "d")],
    )
    .expect("square poset")
}

/// The group `ℤ/2` as a one-object category.
pub fn z2_category() -> FiniteCategory {
    FiniteCategory::from_spec(&["*"], &[("t", "*", "*")], &[("t", "t", "id_*")]).expect("Z/2")
}
