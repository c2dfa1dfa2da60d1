use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A sort name. Sorts live in their own namespace, separate from symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(Arc::from(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Sort {
    fn from(name: &str) -> Self {
        Sort::new(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FuncDecl {
    pub name: String,
    pub args: Vec<Sort>,
    pub result: Sort,
}

impl FuncDecl {
    pub fn is_constant(&self) -> bool {
        self.args.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PredDecl {
    pub name: String,
    pub args: Vec<Sort>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("empty name")]
    EmptyName,
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("symbol `{symbol}` mentions undeclared sort `{sort}`")]
    UndeclaredSort { symbol: String, sort: String },
    #[error("symbol `{0}` declared with conflicting profiles")]
    Conflict(String),
}

/// Sorts plus function and relation symbols, kept in declaration order.
///
/// Function and relation symbols share one namespace: a name is either a
/// function or a relation, never both. Equality is built in and is not a
/// relation symbol of the signature.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Signature {
    sorts: Vec<Sort>,
    functions: IndexMap<String, FuncDecl>,
    relations: IndexMap<String, PredDecl>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.sorts.clone();
        let mut b = other.sorts.clone();
        a.sort();
        b.sort();
        a == b && self.functions == other.functions && self.relations == other.relations
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn has_sort(&self, sort: &Sort) -> bool {
        self.sorts.contains(sort)
    }

    pub fn functions(&self) -> impl Iterator<Item = &FuncDecl> {
        self.functions.values()
    }

    pub fn relations(&self) -> impl Iterator<Item = &PredDecl> {
        self.relations.values()
    }

    pub fn function(&self, name: &str) -> Option<&FuncDecl> {
        self.functions.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&PredDecl> {
        self.relations.get(name)
    }

    /// True when `name` is taken by any function or relation symbol.
    pub fn has_symbol(&self, name: &str) -> bool {
        self.functions.contains_key(name) || self.relations.contains_key(name)
    }

    pub fn add_sort(&mut self, sort: impl Into<Sort>) -> Result<(), SignatureError> {
        let sort = sort.into();
        if sort.name().is_empty() {
            return Err(SignatureError::EmptyName);
        }
        if self.has_sort(&sort) {
            return Err(SignatureError::DuplicateSort(sort.name().to_string()));
        }
        self.sorts.push(sort);
        Ok(())
    }

    fn check_profile<'a>(
        &self,
        name: &str,
        sorts: impl IntoIterator<Item = &'a Sort>,
    ) -> Result<(), SignatureError> {
        if name.is_empty() {
            return Err(SignatureError::EmptyName);
        }
        for s in sorts {
            if !self.has_sort(s) {
                return Err(SignatureError::UndeclaredSort {
                    symbol: name.to_string(),
                    sort: s.name().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Declares a function symbol. Re-declaring with an identical profile is a no-op.
    pub fn add_function(
        &mut self,
        name: impl Into<String>,
        args: Vec<Sort>,
        result: Sort,
    ) -> Result<(), SignatureError> {
        let decl = FuncDecl { name: name.into(), args, result };
        self.check_profile(&decl.name, decl.args.iter().chain(Some(&decl.result)))?;
        if self.relations.contains_key(&decl.name) {
            return Err(SignatureError::Conflict(decl.name));
        }
        match self.functions.get(&decl.name) {
            Some(existing) if *existing == decl => Ok(()),
            Some(_) => Err(SignatureError::Conflict(decl.name)),
            None => {
                self.functions.insert(decl.name.clone(), decl);
                Ok(())
            }
        }
    }

    pub fn add_constant(&mut self, name: impl Into<String>, sort: Sort) -> Result<(), SignatureError> {
        self.add_function(name, Vec::new(), sort)
    }

    pub fn add_relation(&mut self, name: impl Into<String>, args: Vec<Sort>) -> Result<(), SignatureError> {
        let decl = PredDecl { name: name.into(), args };
        self.check_profile(&decl.name, decl.args.iter())?;
        if self.functions.contains_key(&decl.name) {
            return Err(SignatureError::Conflict(decl.name));
        }
        match self.relations.get(&decl.name) {
            Some(existing) if *existing == decl => Ok(()),
            Some(_) => Err(SignatureError::Conflict(decl.name)),
            None => {
                self.relations.insert(decl.name.clone(), decl);
                Ok(())
            }
        }
    }

    /// True when every sort and symbol of `self` occurs in `other` with the same profile.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.sorts.iter().all(|s| other.has_sort(s))
            && self.functions.values().all(|f| other.function(&f.name) == Some(f))
            && self.relations.values().all(|r| other.relation(&r.name) == Some(r))
    }
}

/// Union of two signatures. Shared names must carry identical profiles.
pub fn signature_union(s1: &Signature, s2: &Signature) -> Result<Signature, SignatureError> {
    let mut out = s1.clone();
    for sort in &s2.sorts {
        if !out.has_sort(sort) {
            out.sorts.push(sort.clone());
        }
    }
    for f in s2.functions.values() {
        out.add_function(f.name.clone(), f.args.clone(), f.result.clone())?;
    }
    for r in s2.relations.values() {
        out.add_relation(r.name.clone(), r.args.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arith() -> Signature {
        let mut s = Signature::new();
        s.add_sort("Q").unwrap();
        s.add_function("add", vec!["Q".into(), "Q".into()], "Q".into()).unwrap();
        s
    }

    #[test]
    fn rejects_undeclared_sorts_and_conflicts() {
        let mut s = arith();
        assert_eq!(
            s.add_relation("P", vec!["B".into()]),
            Err(SignatureError::UndeclaredSort { symbol: "P".into(), sort: "B".into() })
        );
        assert_eq!(
            s.add_function("add", vec!["Q".into()], "Q".into()),
            Err(SignatureError::Conflict("add".into()))
        );
        assert_eq!(s.add_relation("add", vec![]), Err(SignatureError::Conflict("add".into())));
        assert!(s.add_sort("Q").is_err());
    }

    #[test]
    fn union_is_idempotent() {
        let s = arith();
        assert_eq!(signature_union(&s, &s).unwrap(), s);
    }

    #[test]
    fn union_of_disjoint_signatures_keeps_everything() {
        let s1 = arith();
        let mut s2 = Signature::new();
        s2.add_sort("B").unwrap();
        s2.add_relation("Ph", vec!["B".into()]).unwrap();
        let u = signature_union(&s1, &s2).unwrap();
        assert!(s1.is_subsignature_of(&u) && s2.is_subsignature_of(&u));
        assert_eq!(u.sorts().len(), 2);
    }

    #[test]
    fn shared_identical_symbol_merges() {
        let u = signature_union(&arith(), &arith()).unwrap();
        assert_eq!(u.functions().count(), 1);
    }

    #[test]
    fn union_conflict_names_symbol() {
        let mut other = Signature::new();
        other.add_sort("Q").unwrap();
        other.add_relation("add", vec!["Q".into()]).unwrap();
        assert_eq!(signature_union(&arith(), &other), Err(SignatureError::Conflict("add".into())));
    }

    #[test]
    fn union_is_commutative_up_to_set_equality() {
        let mut s2 = Signature::new();
        s2.add_sort("B").unwrap();
        s2.add_sort("Q").unwrap();
        s2.add_relation("lt", vec!["Q".into(), "Q".into()]).unwrap();
        let a = signature_union(&arith(), &s2).unwrap();
        let b = signature_union(&s2, &arith()).unwrap();
        assert_eq!(a, b);
    }
}
