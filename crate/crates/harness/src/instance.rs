//! The JSON instance format: named categories, functors, set-valued
//! functors, profunctors, product choices and declared checks.
//!
//! Sets are given by cardinality and morphism maps as dense arrays. Every
//! component is validated on load.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use equipment::algebra::{AlgebraError, BinaryProduct, ProductChoice};
use equipment::fincat::{CategoryError, FunctorError, RawCategory};
use equipment::kanext::{Copresheaf, Presheaf, SetFunctorError};
use equipment::prof::{companion, compose, conjoint, ProfError};
use equipment::{FinCat, FinFunctor, Profunctor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus;
use crate::report::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CategorySpec {
    /// `composites` lists `[g, f, g∘f]` for every composable pair.
    Raw {
        objects: usize,
        morphisms: Vec<[usize; 2]>,
        identities: Vec<usize>,
        composites: Vec<[usize; 3]>,
    },
    /// The reflexive transitive closure of `relations`, which must be
    /// antisymmetric.
    Poset {
        elements: usize,
        relations: Vec<[usize; 2]>,
    },
    Library {
        name: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub dom: String,
    pub cod: String,
    pub objects: Vec<usize>,
    /// May be omitted when the codomain is thin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphisms: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFunctorSpec {
    pub category: String,
    pub sizes: Vec<usize>,
    /// `maps[m]` acts on the fiber over the source of `m` for a
    /// copresheaf, over the target for a presheaf.
    pub maps: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfunctorSpec {
    /// `sizes[a][b]`; `left[α][b]` maps `J(tgt α, b) → J(src α, b)` and
    /// `right[β][a]` maps `J(a, src β) → J(a, tgt β)`.
    Table {
        dom: String,
        cod: String,
        sizes: Vec<Vec<usize>>,
        left: Vec<Vec<Vec<usize>>>,
        right: Vec<Vec<Vec<usize>>>,
    },
    Hom {
        category: String,
    },
    Companion {
        functor: String,
    },
    Conjoint {
        functor: String,
    },
    /// `1 ⇸ A` from a copresheaf.
    Copresheaf {
        copresheaf: String,
    },
    Composite {
        left: String,
        right: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductChoiceSpec {
    pub category: String,
    /// Omitted together with `pairs` to take the least choice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<usize>,
    /// `[apex, p1, p2]` for `x × y` at position `x * n + y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[usize; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// The three verdicts on a copresheaf `d: A → Set`.
    Thm1 {
        copresheaf: String,
    },
    CoYoneda {
        copresheaf: String,
    },
    Rbc {
        profunctor: String,
    },
    Cosifted {
        copresheaf: String,
    },
    /// `j: A → B`, `d: A → M`, with product choices on `B` and `M` and
    /// optionally on `A`.
    Thm23 {
        j: String,
        d: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<String>,
        b: String,
        m: String,
    },
    /// Structure cell iso against RBC of the conjoint.
    Colax {
        functor: String,
        dom: String,
        cod: String,
    },
    Lemma {
        lemma: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        functors: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        profunctors: Vec<String>,
        /// Compose without the coend quotient.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        raw_coend: bool,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, CategorySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub copresheaves: BTreeMap<String, SetFunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub presheaves: BTreeMap<String, SetFunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub profunctors: BTreeMap<String, ProfunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub product_choices: BTreeMap<String, ProductChoiceSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{component}: {law} violated: {witness}")]
    Validation { component: String, law: String, witness: String },
}

fn invalid(component: impl Into<String>, law: &str, witness: impl ToString) -> InstanceError {
    InstanceError::Validation { component: component.into(), law: law.to_string(), witness: witness.to_string() }
}

fn category_law(e: &CategoryError) -> &'static str {
    match e {
        CategoryError::NonAssociative { .. } => "associativity",
        CategoryError::IdentityLaw(_) | CategoryError::BadIdentity { .. } | CategoryError::IdentityCount { .. } => {
            "identity"
        }
        CategoryError::MissingComposite { .. } | CategoryError::DuplicateComposite { .. } => "composition table",
        CategoryError::NotTransitive { .. } | CategoryError::NotReflexive(_) => "preorder",
        CategoryError::BadEndpoint { .. } | CategoryError::BadMorphism(_) | CategoryError::IllTypedComposite { .. } => {
            "typing"
        }
    }
}

fn functor_law(e: &FunctorError) -> &'static str {
    match e {
        FunctorError::Shape | FunctorError::BadObject(_) | FunctorError::Endpoints(_) => "typing",
        FunctorError::Identity(_) => "identity",
        FunctorError::Composition { .. } => "composition",
    }
}

fn set_functor_law(e: &SetFunctorError) -> &'static str {
    match e {
        SetFunctorError::Shape | SetFunctorError::OutOfRange(_) => "typing",
        SetFunctorError::Identity(_) => "identity",
        SetFunctorError::Composition { .. } => "composition",
    }
}

fn prof_law(e: &ProfError) -> &'static str {
    match e {
        ProfError::Shape | ProfError::OutOfRange { .. } => "typing",
        ProfError::Identity(_) => "identity",
        ProfError::LeftFunctoriality(..) | ProfError::RightFunctoriality(..) => "functoriality",
        ProfError::Commutation { .. } => "commutation of actions",
    }
}

/// A fully validated instance.
#[derive(Debug, Clone, Default)]
pub struct Instance {
    pub name: Option<String>,
    pub categories: BTreeMap<String, Arc<FinCat>>,
    pub functors: BTreeMap<String, FinFunctor>,
    pub copresheaves: BTreeMap<String, Copresheaf>,
    pub presheaves: BTreeMap<String, Presheaf>,
    pub profunctors: BTreeMap<String, Profunctor>,
    pub product_choices: BTreeMap<String, ProductChoice>,
    pub checks: Vec<CheckSpec>,
    /// The document the instance was resolved from.
    pub doc: InstanceDoc,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str, from: &str) -> Result<&'a T, InstanceError> {
    map.get(name).ok_or_else(|| invalid(from, "reference", format!("unknown {kind} `{name}`")))
}

fn build_category(name: &str, spec: &CategorySpec) -> Result<Arc<FinCat>, InstanceError> {
    let component = format!("categories.{name}");
    let cat = match spec {
        CategorySpec::Raw { objects, morphisms, identities, composites } => {
            let raw = RawCategory {
                objects: *objects,
                morphisms: morphisms.iter().map(|&[s, t]| (s, t)).collect(),
                identities: identities.clone(),
                composites: composites.iter().map(|&[g, f, h]| (g, f, h)).collect(),
            };
            FinCat::from_raw(&raw).map_err(|e| invalid(&component, category_law(&e), &e))?
        }
        CategorySpec::Poset { elements, relations } => {
            if let Some(&[x, y]) = relations.iter().find(|r| r[0] >= *elements || r[1] >= *elements) {
                return Err(invalid(&component, "typing", format!("relation ({x},{y}) out of range")));
            }
            let rel: Vec<(usize, usize)> = relations.iter().map(|&[x, y]| (x, y)).collect();
            let c = FinCat::preorder_closure(*elements, &rel).map_err(|e| invalid(&component, category_law(&e), &e))?;
            if let Some(x) = (0..c.objects()).find(|&x| (0..c.objects()).any(|y| x != y && c.leq(x, y) && c.leq(y, x)))
            {
                return Err(invalid(&component, "antisymmetry", format!("element {x} lies in a cycle")));
            }
            c
        }
        CategorySpec::Library { name: lib } => {
            return corpus::library_category(lib)
                .ok_or_else(|| invalid(&component, "reference", format!("no library category `{lib}`")))
        }
    };
    Ok(Arc::new(cat))
}

impl InstanceDoc {
    pub fn new() -> Self {
        InstanceDoc { schema: SCHEMA, ..Default::default() }
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        if text.trim().is_empty() {
            return Ok(InstanceDoc::new());
        }
        serde_json::from_str(text).map_err(|e| InstanceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance documents serialize")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("instance documents serialize")
    }

    /// Builds and validates every component, then checks that the declared
    /// checks refer to components of the right shape.
    pub fn resolve(&self) -> Result<Instance, InstanceError> {
        if self.schema != SCHEMA {
            return Err(invalid("schema", "version", format!("expected {SCHEMA}, found {}", self.schema)));
        }
        let mut inst = Instance { name: self.name.clone(), doc: self.clone(), ..Default::default() };
        for (name, spec) in &self.categories {
            inst.categories.insert(name.clone(), build_category(name, spec)?);
        }
        for (name, spec) in &self.functors {
            let component = format!("functors.{name}");
            let dom = lookup(&inst.categories, "category", &spec.dom, &component)?.clone();
            let cod = lookup(&inst.categories, "category", &spec.cod, &component)?.clone();
            let f = match &spec.morphisms {
                Some(mor) => FinFunctor::new(dom, cod, spec.objects.clone(), mor.clone()),
                None if cod.is_thin() => FinFunctor::monotone(dom, cod, spec.objects.clone()),
                None => return Err(invalid(&component, "typing", "morphism map required for a non-thin codomain")),
            }
            .map_err(|e| invalid(&component, functor_law(&e), &e))?;
            inst.functors.insert(name.clone(), f);
        }
        for (name, spec) in &self.copresheaves {
            let component = format!("copresheaves.{name}");
            let cat = lookup(&inst.categories, "category", &spec.category, &component)?.clone();
            let d = Copresheaf::new(cat, spec.sizes.clone(), spec.maps.clone())
                .map_err(|e| invalid(&component, set_functor_law(&e), &e))?;
            inst.copresheaves.insert(name.clone(), d);
        }
        for (name, spec) in &self.presheaves {
            let component = format!("presheaves.{name}");
            let cat = lookup(&inst.categories, "category", &spec.category, &component)?.clone();
            let p = Presheaf::new(cat, spec.sizes.clone(), spec.maps.clone())
                .map_err(|e| invalid(&component, set_functor_law(&e), &e))?;
            inst.presheaves.insert(name.clone(), p);
        }
        self.resolve_profunctors(&mut inst)?;
        for (name, spec) in &self.product_choices {
            let component = format!("product_choices.{name}");
            let cat = lookup(&inst.categories, "category", &spec.category, &component)?.clone();
            let choice = match (&spec.terminal, &spec.pairs) {
                (None, None) => ProductChoice::find(&cat),
                (Some(t), Some(pairs)) => {
                    let pairs = pairs.iter().map(|&[apex, p1, p2]| BinaryProduct { apex, p1, p2 }).collect();
                    ProductChoice::new(&cat, *t, pairs)
                }
                _ => return Err(invalid(&component, "typing", "give both `terminal` and `pairs`, or neither")),
            }
            .map_err(|e| {
                let law = match e {
                    AlgebraError::NoProducts(_) => "existence of finite products",
                    _ => "universal property",
                };
                invalid(&component, law, &e)
            })?;
            inst.product_choices.insert(name.clone(), choice);
        }
        for (i, check) in self.checks.iter().enumerate() {
            check_refs(&inst, check, &format!("checks[{i}]"))?;
        }
        inst.checks = self.checks.clone();
        Ok(inst)
    }

    /// Profunctors may refer to each other through composites; they are
    /// built in dependency order.
    fn resolve_profunctors(&self, inst: &mut Instance) -> Result<(), InstanceError> {
        let mut pending: Vec<(&String, &ProfunctorSpec)> = self.profunctors.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for (name, spec) in pending {
                let component = format!("profunctors.{name}");
                if let ProfunctorSpec::Composite { left, right } = spec {
                    if !self.profunctors.contains_key(left) || !self.profunctors.contains_key(right) {
                        let missing = if self.profunctors.contains_key(left) { right } else { left };
                        return Err(invalid(&component, "reference", format!("unknown profunctor `{missing}`")));
                    }
                    if !inst.profunctors.contains_key(left) || !inst.profunctors.contains_key(right) {
                        rest.push((name, spec));
                        continue;
                    }
                }
                let p = build_profunctor(inst, spec, &component)?;
                inst.profunctors.insert(name.clone(), p);
            }
            if rest.len() == before {
                return Err(invalid(format!("profunctors.{}", rest[0].0), "reference", "cyclic composite"));
            }
            pending = rest;
        }
        Ok(())
    }
}

fn build_profunctor(inst: &Instance, spec: &ProfunctorSpec, component: &str) -> Result<Profunctor, InstanceError> {
    Ok(match spec {
        ProfunctorSpec::Table { dom, cod, sizes, left, right } => {
            let dom = lookup(&inst.categories, "category", dom, component)?.clone();
            let cod = lookup(&inst.categories, "category", cod, component)?.clone();
            Profunctor::from_tables(dom, cod, sizes.clone(), left.clone(), right.clone())
                .map_err(|e| invalid(component, prof_law(&e), &e))?
        }
        ProfunctorSpec::Hom { category } => Profunctor::hom(lookup(&inst.categories, "category", category, component)?),
        ProfunctorSpec::Companion { functor } => companion(lookup(&inst.functors, "functor", functor, component)?).prof,
        ProfunctorSpec::Conjoint { functor } => conjoint(lookup(&inst.functors, "functor", functor, component)?).prof,
        ProfunctorSpec::Copresheaf { copresheaf } => {
            lookup(&inst.copresheaves, "copresheaf", copresheaf, component)?.to_profunctor()
        }
        ProfunctorSpec::Composite { left, right } => {
            let (l, r) = (&inst.profunctors[left], &inst.profunctors[right]);
            compose(l, r).map_err(|e| invalid(component, "typing", e))?.prof
        }
    })
}

fn check_refs(inst: &Instance, check: &CheckSpec, component: &str) -> Result<(), InstanceError> {
    match check {
        CheckSpec::Thm1 { copresheaf } | CheckSpec::CoYoneda { copresheaf } | CheckSpec::Cosifted { copresheaf } => {
            lookup(&inst.copresheaves, "copresheaf", copresheaf, component)?;
        }
        CheckSpec::Rbc { profunctor } => {
            lookup(&inst.profunctors, "profunctor", profunctor, component)?;
        }
        CheckSpec::Thm23 { j, d, a, b, m } => {
            let jf = lookup(&inst.functors, "functor", j, component)?;
            let df = lookup(&inst.functors, "functor", d, component)?;
            let pb = lookup(&inst.product_choices, "product choice", b, component)?;
            let pm = lookup(&inst.product_choices, "product choice", m, component)?;
            let mut ok = *jf.dom() == *df.dom() && *jf.cod() == *pb.cat() && *df.cod() == *pm.cat();
            if let Some(a) = a {
                ok &= *lookup(&inst.product_choices, "product choice", a, component)?.cat() == *jf.dom();
            }
            if !ok {
                return Err(invalid(component, "typing", "functors and product choices do not line up"));
            }
        }
        CheckSpec::Colax { functor, dom, cod } => {
            let f = lookup(&inst.functors, "functor", functor, component)?;
            let pa = lookup(&inst.product_choices, "product choice", dom, component)?;
            let pc = lookup(&inst.product_choices, "product choice", cod, component)?;
            if *f.dom() != *pa.cat() || *f.cod() != *pc.cat() {
                return Err(invalid(component, "typing", "functor and product choices do not line up"));
            }
        }
        CheckSpec::Lemma { functors, profunctors, .. } => {
            for f in functors {
                lookup(&inst.functors, "functor", f, component)?;
            }
            for p in profunctors {
                lookup(&inst.profunctors, "profunctor", p, component)?;
            }
        }
    }
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<Instance, InstanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
    InstanceDoc::parse(&text)?.resolve()
}

/// Writes components into a document under generated names, reusing a
/// name when the same component is added twice.
#[derive(Debug, Default)]
pub struct InstanceBuilder {
    doc: InstanceDoc,
    cats: Vec<(Arc<FinCat>, String)>,
    functors: Vec<(FinFunctor, String)>,
    profs: Vec<(Profunctor, String)>,
}

impl InstanceBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        let doc = InstanceDoc { name: Some(name.into()), ..InstanceDoc::new() };
        InstanceBuilder { doc, ..Default::default() }
    }

    pub fn category(&mut self, c: &Arc<FinCat>) -> String {
        if let Some((_, n)) = self.cats.iter().find(|(x, _)| **x == **c) {
            return n.clone();
        }
        let name = format!("C{}", self.cats.len());
        let raw = c.to_raw();
        let spec = CategorySpec::Raw {
            objects: raw.objects,
            morphisms: raw.morphisms.iter().map(|&(s, t)| [s, t]).collect(),
            identities: raw.identities,
            composites: raw.composites.iter().map(|&(g, f, h)| [g, f, h]).collect(),
        };
        self.doc.categories.insert(name.clone(), spec);
        self.cats.push((c.clone(), name.clone()));
        name
    }

    pub fn functor(&mut self, f: &FinFunctor) -> String {
        if let Some((_, n)) = self.functors.iter().find(|(x, _)| x == f) {
            return n.clone();
        }
        let name = format!("f{}", self.functors.len());
        let spec = FunctorSpec {
            dom: self.category(f.dom()),
            cod: self.category(f.cod()),
            objects: f.obj_map().to_vec(),
            morphisms: Some(f.mor_map().to_vec()),
        };
        self.doc.functors.insert(name.clone(), spec);
        self.functors.push((f.clone(), name.clone()));
        name
    }

    pub fn copresheaf(&mut self, d: &Copresheaf) -> String {
        let name = format!("d{}", self.doc.copresheaves.len());
        let spec =
            SetFunctorSpec { category: self.category(d.cat()), sizes: d.sizes().to_vec(), maps: d.maps().to_vec() };
        self.doc.copresheaves.insert(name.clone(), spec);
        name
    }

    pub fn presheaf(&mut self, p: &Presheaf) -> String {
        let name = format!("p{}", self.doc.presheaves.len());
        let spec =
            SetFunctorSpec { category: self.category(p.cat()), sizes: p.sizes().to_vec(), maps: p.maps().to_vec() };
        self.doc.presheaves.insert(name.clone(), spec);
        name
    }

    pub fn profunctor(&mut self, j: &Profunctor) -> String {
        if let Some((_, n)) = self.profs.iter().find(|(x, _)| x == j) {
            return n.clone();
        }
        let name = format!("J{}", self.profs.len());
        let spec = ProfunctorSpec::Table {
            dom: self.category(j.dom()),
            cod: self.category(j.cod()),
            sizes: j.size_table(),
            left: j.left_table().to_vec(),
            right: j.right_table().to_vec(),
        };
        self.doc.profunctors.insert(name.clone(), spec);
        self.profs.push((j.clone(), name.clone()));
        name
    }

    pub fn product_choice(&mut self, p: &ProductChoice) -> String {
        let name = format!("P{}", self.doc.product_choices.len());
        let n = p.cat().objects();
        let pairs = (0..n * n)
            .map(|i| {
                let b = p.pair(i / n, i % n);
                [b.apex, b.p1, b.p2]
            })
            .collect();
        let spec =
            ProductChoiceSpec { category: self.category(p.cat()), terminal: Some(p.terminal()), pairs: Some(pairs) };
        self.doc.product_choices.insert(name.clone(), spec);
        name
    }

    pub fn check(&mut self, c: CheckSpec) {
        self.doc.checks.push(c);
    }

    pub fn finish(self) -> InstanceDoc {
        self.doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_documents() {
        let inst = InstanceDoc::parse("").unwrap().resolve().unwrap();
        assert!(inst.categories.is_empty() && inst.checks.is_empty());
        let inst = InstanceDoc::parse(r#"{"schema": 1}"#).unwrap().resolve().unwrap();
        assert!(inst.functors.is_empty());
    }

    #[test]
    fn parse_errors_have_positions() {
        match InstanceDoc::parse("{\n  \"schema\": 1,\n  oops\n}") {
            Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(InstanceDoc::parse(r#"{"schema": 1, "extra": 0}"#), Err(InstanceError::Parse { .. })));
    }

    #[test]
    fn wrong_schema_version() {
        let err = InstanceDoc::parse(r#"{"schema": 2}"#).unwrap().resolve().unwrap_err();
        assert!(matches!(err, InstanceError::Validation { ref law, .. } if law == "version"));
    }

    #[test]
    fn non_associative_table_names_the_triple() {
        // a∘a = a, a∘b = a, b∘a = b, b∘b = a: (b∘a)∘b = a but b∘(a∘b) = b
        let text = r#"{"schema": 1, "categories": {"X": {"kind": "raw", "objects": 1,
            "morphisms": [[0,0],[0,0],[0,0]], "identities": [0],
            "composites": [[0,0,0],[0,1,1],[0,2,2],[1,0,1],[2,0,2],
                           [1,1,1],[1,2,1],[2,1,2],[2,2,1]]}}}"#;
        match InstanceDoc::parse(text).unwrap().resolve() {
            Err(InstanceError::Validation { component, law, witness }) => {
                assert_eq!(component, "categories.X");
                assert_eq!(law, "associativity");
                assert!(witness.contains("h=") && witness.contains("g=") && witness.contains("f="), "{witness}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_references() {
        let text = r#"{"schema": 1, "functors": {"f": {"dom": "A", "cod": "A", "objects": []}}}"#;
        let err = InstanceDoc::parse(text).unwrap().resolve().unwrap_err();
        assert!(matches!(err, InstanceError::Validation { ref law, .. } if law == "reference"));
        let text = r#"{"schema": 1, "categories": {"A": {"kind": "library", "name": "arrow"}},
            "profunctors": {"P": {"kind": "composite", "left": "Q", "right": "Q"},
                            "Q": {"kind": "composite", "left": "P", "right": "P"}}}"#;
        let err = InstanceDoc::parse(text).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("cyclic"), "{err}");
    }

    #[test]
    fn poset_must_be_antisymmetric() {
        let text =
            r#"{"schema": 1, "categories": {"A": {"kind": "poset", "elements": 2, "relations": [[0,1],[1,0]]}}}"#;
        let err = InstanceDoc::parse(text).unwrap().resolve().unwrap_err();
        assert!(matches!(err, InstanceError::Validation { ref law, .. } if law == "antisymmetry"));
    }

    #[test]
    fn builder_round_trips() {
        let sq = corpus::boolean_square();
        let c2 = Arc::new(FinCat::chain(2));
        let f = FinFunctor::monotone(sq.clone(), c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let mut b = InstanceBuilder::new("rt");
        let fname = b.functor(&f);
        let jname = b.profunctor(&companion(&f).prof);
        let pname = b.product_choice(&ProductChoice::find(&sq).unwrap());
        let dname = b.copresheaf(&Copresheaf::representable(sq.clone(), 1));
        b.check(CheckSpec::Rbc { profunctor: jname.clone() });
        let doc = b.finish();
        let text = doc.to_json();
        let back = InstanceDoc::parse(&text).unwrap();
        assert_eq!(back, doc);
        let inst = back.resolve().unwrap();
        assert_eq!(inst.functors[&fname], f);
        assert_eq!(inst.profunctors[&jname], companion(&f).prof);
        assert_eq!(**inst.product_choices[&pname].cat(), *sq);
        assert_eq!(inst.copresheaves[&dname], Copresheaf::representable(sq, 1));
        assert_eq!(inst.categories.len(), 2);
    }
}
