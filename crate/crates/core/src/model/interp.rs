use std::fmt::{self, Write};

use indexmap::IndexMap;
use thiserror::Error;

use crate::logic::{Signature, Sort};

use super::eval::{EvalError, Structure};

/// Domain size per sort, in signature order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DomainAssignment {
    sizes: Vec<(Sort, usize)>,
}

impl DomainAssignment {
    /// Sizes listed in the signature's sort order. Sizes below 1 are raised to 1.
    pub fn new(sig: &Signature, sizes: &[usize]) -> Self {
        assert_eq!(sig.sorts().len(), sizes.len(), "one size per sort");
        DomainAssignment { sizes: sig.sorts().iter().cloned().zip(sizes.iter().map(|&n| n.max(1))).collect() }
    }

    pub fn uniform(sig: &Signature, n: usize) -> Self {
        DomainAssignment::new(sig, &vec![n; sig.sorts().len()])
    }

    pub fn get(&self, sort: &Sort) -> Option<usize> {
        self.sizes.iter().find(|(s, _)| s == sort).map(|(_, n)| *n)
    }

    pub fn sizes(&self) -> &[(Sort, usize)] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().map(|(_, n)| n).sum()
    }

    /// Every assignment between all-ones and `self`, ordered by total size
    /// and then lexicographically.
    pub fn up_to(&self) -> Vec<DomainAssignment> {
        let mut out = vec![Vec::new()];
        for (_, max) in &self.sizes {
            out = out.into_iter().flat_map(|prefix: Vec<usize>| (1..=*max).map(move |n| [prefix.clone(), vec![n]].concat())).collect();
        }
        out.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
        out.into_iter()
            .map(|sizes| DomainAssignment { sizes: self.sizes.iter().map(|(s, _)| s.clone()).zip(sizes).collect() })
            .collect()
    }
}

impl fmt::Display for DomainAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|(s, n)| format!("{s}={n}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// A finite structure: each sort is `{0, .., n-1}`; function and relation
/// tables are total. Table entries are indexed by the argument tuple read
/// as a mixed-radix number, first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInterpretation {
    signature: Signature,
    domains: DomainAssignment,
    functions: IndexMap<String, Vec<usize>>,
    relations: IndexMap<String, Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no domain size for sort `{0}`")]
    MissingDomain(String),
    #[error("no table entry for {0}")]
    MissingEntry(String),
}

impl FiniteInterpretation {
    /// All functions constantly 0 and all relations empty.
    pub fn new(signature: &Signature, domains: DomainAssignment) -> Self {
        let size = |s: &Sort| domains.get(s).expect("domain for every sort");
        let rows = |args: &[Sort]| args.iter().map(size).product::<usize>();
        let functions = signature.functions().map(|f| (f.name.clone(), vec![0; rows(&f.args)])).collect();
        let relations = signature.relations().map(|r| (r.name.clone(), vec![false; rows(&r.args)])).collect();
        FiniteInterpretation { signature: signature.clone(), domains, functions, relations }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domains(&self) -> &DomainAssignment {
        &self.domains
    }

    pub fn size(&self, sort: &Sort) -> usize {
        self.domains.get(sort).unwrap_or(0)
    }

    fn row(&self, args_sorts: &[Sort], args: &[usize]) -> Option<usize> {
        if args_sorts.len() != args.len() {
            return None;
        }
        let mut k = 0;
        for (s, &a) in args_sorts.iter().zip(args) {
            let n = self.size(s);
            if a >= n {
                return None;
            }
            k = k * n + a;
        }
        Some(k)
    }

    pub fn function(&self, name: &str, args: &[usize]) -> Option<usize> {
        let decl = self.signature.function(name)?;
        let k = self.row(&decl.args, args)?;
        Some(self.functions[name][k])
    }

    pub fn relation(&self, name: &str, args: &[usize]) -> Option<bool> {
        let decl = self.signature.relation(name)?;
        let k = self.row(&decl.args, args)?;
        Some(self.relations[name][k])
    }

    pub fn set_function(&mut self, name: &str, args: &[usize], value: usize) {
        let decl = self.signature.function(name).expect("declared function").clone();
        assert!(value < self.size(&decl.result), "value out of range");
        let k = self.row(&decl.args, args).expect("arguments in range");
        self.functions[name][k] = value;
    }

    pub fn set_relation(&mut self, name: &str, args: &[usize], value: bool) {
        let decl = self.signature.relation(name).expect("declared relation").clone();
        let k = self.row(&decl.args, args).expect("arguments in range");
        self.relations[name][k] = value;
    }

    /// Forgets symbols and sorts outside `sig`, which must be a subsignature.
    pub fn restrict(&self, sig: &Signature) -> FiniteInterpretation {
        let sizes: Vec<usize> = sig.sorts().iter().map(|s| self.size(s)).collect();
        let mut out = FiniteInterpretation::new(sig, DomainAssignment::new(sig, &sizes));
        for f in sig.functions() {
            out.functions[&f.name] = self.functions[&f.name].clone();
        }
        for r in sig.relations() {
            out.relations[&r.name] = self.relations[&r.name].clone();
        }
        out
    }

    /// Every argument tuple over the given sorts, lexicographically.
    pub fn tuples(&self, sorts: &[Sort]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for s in sorts {
            let n = self.size(s);
            out = out.into_iter().flat_map(|p: Vec<usize>| (0..n).map(move |a| [p.clone(), vec![a]].concat())).collect();
        }
        out
    }

    /// Plain-text table: domain sizes, then one line per function and
    /// relation entry in signature order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, n) in self.domains.sizes() {
            let _ = writeln!(out, "domain {s} {n}");
        }
        let fmt_args = |args: &[usize]| {
            if args.is_empty() {
                String::new()
            } else {
                format!("({})", args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            }
        };
        for f in self.signature.functions() {
            for (k, args) in self.tuples(&f.args).iter().enumerate() {
                let _ = writeln!(out, "func {}{} = {}", f.name, fmt_args(args), self.functions[&f.name][k]);
            }
        }
        for r in self.signature.relations() {
            for (k, args) in self.tuples(&r.args).iter().enumerate() {
                let _ = writeln!(out, "rel {}{} = {}", r.name, fmt_args(args), self.relations[&r.name][k]);
            }
        }
        out
    }

    /// Reads the format written by [`to_text`](Self::to_text). Every table
    /// entry must be present.
    pub fn parse(text: &str, sig: &Signature) -> Result<FiniteInterpretation, InterpError> {
        let mut sizes: Vec<Option<usize>> = vec![None; sig.sorts().len()];
        let mut entries: Vec<(usize, bool, String, Vec<usize>, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let ln = i + 1;
            let err = |m: &str| InterpError::Syntax { line: ln, message: m.to_string() };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("domain ") {
                let mut parts = rest.split_whitespace();
                let (Some(s), Some(n), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(err("expected `domain SORT SIZE`"));
                };
                let idx = sig.sorts().iter().position(|x| x.name() == s).ok_or_else(|| err("unknown sort"))?;
                let n: usize = n.parse().map_err(|_| err("bad size"))?;
                if n == 0 {
                    return Err(err("domains must be nonempty"));
                }
                sizes[idx] = Some(n);
                continue;
            }
            let (is_func, rest) = if let Some(r) = line.strip_prefix("func ") {
                (true, r)
            } else if let Some(r) = line.strip_prefix("rel ") {
                (false, r)
            } else {
                return Err(err("expected `domain`, `func` or `rel`"));
            };
            let (lhs, value) = rest.split_once('=').ok_or_else(|| err("expected `=`"))?;
            let lhs = lhs.trim();
            let (name, args) = match lhs.split_once('(') {
                Some((n, a)) => {
                    let a = a.strip_suffix(')').ok_or_else(|| err("expected `)`"))?;
                    let args: Result<Vec<usize>, _> = a.split(',').map(|x| x.trim().parse::<usize>()).collect();
                    (n.trim().to_string(), args.map_err(|_| err("bad argument"))?)
                }
                None => (lhs.to_string(), Vec::new()),
            };
            entries.push((ln, is_func, name, args, value.trim().to_string()));
        }
        let mut sz = Vec::new();
        for (s, n) in sig.sorts().iter().zip(&sizes) {
            sz.push(n.ok_or_else(|| InterpError::MissingDomain(s.to_string()))?);
        }
        let mut m = FiniteInterpretation::new(sig, DomainAssignment::new(sig, &sz));
        let mut seen: std::collections::BTreeSet<(String, Vec<usize>)> = Default::default();
        for (ln, is_func, name, args, value) in entries {
            let err = |msg: &str| InterpError::Syntax { line: ln, message: msg.to_string() };
            if is_func {
                let decl = sig.function(&name).ok_or_else(|| err("unknown function"))?.clone();
                m.row(&decl.args, &args).ok_or_else(|| err("arguments out of range"))?;
                let v: usize = value.parse().map_err(|_| err("bad value"))?;
                if v >= m.size(&decl.result) {
                    return Err(err("value out of range"));
                }
                m.set_function(&name, &args, v);
            } else {
                let decl = sig.relation(&name).ok_or_else(|| err("unknown relation"))?.clone();
                m.row(&decl.args, &args).ok_or_else(|| err("arguments out of range"))?;
                let v = match value.as_str() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err("expected `true` or `false`")),
                };
                m.set_relation(&name, &args, v);
            }
            seen.insert((name, args));
        }
        for f in sig.functions() {
            for args in m.tuples(&f.args) {
                if !seen.contains(&(f.name.clone(), args.clone())) {
                    return Err(InterpError::MissingEntry(format!("{}{:?}", f.name, args)));
                }
            }
        }
        for r in sig.relations() {
            for args in m.tuples(&r.args) {
                if !seen.contains(&(r.name.clone(), args.clone())) {
                    return Err(InterpError::MissingEntry(format!("{}{:?}", r.name, args)));
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for FiniteInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Structure for FiniteInterpretation {
    type Elem = usize;

    fn domain(&self, sort: &Sort) -> Option<Vec<usize>> {
        self.domains.get(sort).map(|n| (0..n).collect())
    }

    fn apply(&self, f: &str, args: &[usize]) -> Result<usize, EvalError> {
        self.function(f, args).ok_or_else(|| EvalError::UnknownSymbol(f.to_string()))
    }

    fn holds(&self, r: &str, args: &[usize]) -> Result<bool, EvalError> {
        self.relation(r, args).ok_or_else(|| EvalError::UnknownSymbol(r.to_string()))
    }
}
