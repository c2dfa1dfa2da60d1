use std::collections::BTreeMap;

use crate::logic::{Formula, NamedFormula, Signature, Sort, Term, Theory, Var};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseDiagnostic, ParseErrors, Parsed, Pos, Severity, SourceSpan, ADD, LT, MUL};

type PResult<T> = Result<T, ParseDiagnostic>;

const KEYWORDS: &[&str] = &["theory", "sorts", "func", "const", "pred", "axiom", "forall", "exists"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    file: String,
    sig: Signature,
    scope: Vec<Var>,
    diags: Vec<ParseDiagnostic>,
    /// Set when undeclared symbols are declared on first use.
    infer: Option<Inference>,
}

/// Sort inference for inline theories. Symbols first seen without a known
/// sort get a placeholder sort `?n`; placeholders are unified as usage
/// constrains them.
#[derive(Clone, Default)]
struct Inference {
    fresh: usize,
    bound: BTreeMap<Sort, Sort>,
}

/// Sort given to symbols whose usage never fixes one.
pub const DEFAULT_SORT: &str = "U";

fn is_placeholder(s: &Sort) -> bool {
    s.name().starts_with('?')
}

impl Parser {
    fn new(text: &str, file: &str, sig: Signature) -> PResult<Parser> {
        Ok(Parser {
            toks: tokenize(text, file)?,
            pos: 0,
            file: file.to_string(),
            sig,
            scope: Vec::new(),
            diags: Vec::new(),
            infer: None,
        })
    }

    fn fresh_sort(&mut self) -> Sort {
        let inf = self.infer.as_mut().expect("inference mode");
        let s = Sort::new(format!("?{}", inf.fresh));
        inf.fresh += 1;
        self.sig.add_sort(s.clone()).expect("placeholders are fresh");
        s
    }

    fn resolve(&self, s: &Sort) -> Sort {
        let mut cur = s.clone();
        if let Some(inf) = &self.infer {
            while let Some(next) = inf.bound.get(&cur) {
                cur = next.clone();
            }
        }
        cur
    }

    /// Sort equality, unifying placeholders in inference mode.
    fn same_sort(&mut self, a: &Sort, b: &Sort) -> bool {
        let (ra, rb) = (self.resolve(a), self.resolve(b));
        if ra == rb {
            return true;
        }
        let Some(inf) = self.infer.as_mut() else { return false };
        if is_placeholder(&ra) {
            inf.bound.insert(ra, rb);
        } else if is_placeholder(&rb) {
            inf.bound.insert(rb, ra);
        } else {
            return false;
        }
        true
    }

    /// In inference mode, whether the identifier at the cursor heads an
    /// atom rather than the left side of a comparison.
    fn looks_like_predicate(&self) -> bool {
        let mut k = 1;
        if *self.peek_at(1) == Tok::LParen {
            let mut depth = 0usize;
            loop {
                match self.peek_at(k) {
                    Tok::LParen => depth += 1,
                    Tok::RParen => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    Tok::Eof => return true,
                    _ => {}
                }
                k += 1;
            }
            k += 1;
        }
        !matches!(self.peek_at(k), Tok::Equals | Tok::NotEquals | Tok::Less | Tok::Plus | Tok::Star)
    }

    /// Declares `name` as a binary operator over one fresh sort.
    fn infer_operator(&mut self, name: &str, relation: bool) {
        let s = self.fresh_sort();
        let r = if relation {
            self.sig.add_relation(name, vec![s.clone(), s])
        } else {
            self.sig.add_function(name, vec![s.clone(), s.clone()], s)
        };
        r.expect("operator symbol is new");
    }

    /// The signature with placeholders replaced by what they unified with.
    fn resolved_signature(&self) -> Result<Signature, String> {
        let fix = |s: &Sort| {
            let r = self.resolve(s);
            if is_placeholder(&r) {
                Sort::new(DEFAULT_SORT)
            } else {
                r
            }
        };
        let mut out = Signature::new();
        for s in self.sig.sorts().iter().filter(|s| !is_placeholder(s)) {
            out.add_sort(s.clone()).map_err(|e| e.to_string())?;
        }
        let need_default = |out: &mut Signature, s: &Sort| {
            if !out.has_sort(s) {
                out.add_sort(s.clone()).expect("checked");
            }
        };
        for f in self.sig.functions() {
            let args: Vec<Sort> = f.args.iter().map(fix).collect();
            let result = fix(&f.result);
            for s in args.iter().chain(Some(&result)) {
                need_default(&mut out, s);
            }
            out.add_function(f.name.clone(), args, result).map_err(|e| e.to_string())?;
        }
        for r in self.sig.relations() {
            let args: Vec<Sort> = r.args.iter().map(fix).collect();
            for s in &args {
                need_default(&mut out, s);
            }
            out.add_relation(r.name.clone(), args).map_err(|e| e.to_string())?;
        }
        Ok(out)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn start(&self) -> Pos {
        self.toks[self.pos].start
    }

    fn last_end(&self) -> Pos {
        if self.pos == 0 {
            self.toks[0].start
        } else {
            self.toks[self.pos - 1].end
        }
    }

    fn span_from(&self, start: Pos) -> SourceSpan {
        SourceSpan::new(&self.file, start, self.last_end().max(start))
    }

    fn here(&self) -> SourceSpan {
        let t = &self.toks[self.pos];
        SourceSpan::new(&self.file, t.start, t.end)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseDiagnostic {
        ParseDiagnostic::error(self.here(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error(&mut self, span: SourceSpan, msg: impl Into<String>) {
        self.diags.push(ParseDiagnostic::error(span, msg));
    }

    fn sort_ref(&mut self) -> PResult<Sort> {
        let span = self.here();
        let name = self.ident("a sort name")?;
        let sort = Sort::new(name);
        if !self.sig.has_sort(&sort) {
            if self.infer.is_some() {
                self.sig.add_sort(sort.clone()).expect("checked");
            } else {
                self.error(span, format!("undeclared sort `{sort}`"));
            }
        }
        Ok(sort)
    }

    // ---- theory files -------------------------------------------------

    fn theory(&mut self) -> PResult<Option<Theory>> {
        if *self.peek() == Tok::Eof {
            return Err(ParseDiagnostic::error(self.here(), "empty input: a `theory` header is required"));
        }
        if !self.at_keyword("theory") {
            return Err(self.unexpected("`theory`"));
        }
        self.bump();
        let name = self.ident("a theory name")?;
        self.expect(Tok::LBrace, "`{`")?;
        self.declarations()?;
        let mut axioms = Vec::new();
        let mut spans = Vec::new();
        while self.at_keyword("axiom") {
            let start = self.start();
            self.bump();
            let label = self.ident("an axiom label")?;
            self.expect(Tok::Colon, "`:`")?;
            let f = self.formula()?;
            self.expect(Tok::Semi, "`;` after axiom")?;
            spans.push(self.span_from(start));
            axioms.push(NamedFormula::new(label, f));
        }
        if *self.peek() != Tok::RBrace {
            return Err(self.unexpected("`axiom` or `}`"));
        }
        self.bump();
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of input after theory"));
        }
        if self.diags.iter().any(|d| d.severity == Severity::Error) {
            return Ok(None);
        }
        let sig = self.sig.clone();
        Theory::new(name, sig, axioms.clone()).map(Some).map_err(|e| {
            let span = match &e {
                crate::logic::TheoryError::DuplicateLabel(l)
                | crate::logic::TheoryError::AlphaDuplicate { label: l, .. }
                | crate::logic::TheoryError::IllSorted { label: l, .. }
                | crate::logic::TheoryError::FreeVariables { label: l, .. } => axioms
                    .iter()
                    .rposition(|a| &a.label == l)
                    .map(|i| spans[i].clone()),
                _ => None,
            };
            ParseDiagnostic::error(span.unwrap_or_else(|| self.here()), e.to_string())
        })
    }

    fn declarations(&mut self) -> PResult<()> {
        loop {
            let start = self.start();
            if self.at_keyword("sorts") {
                self.bump();
                loop {
                    let span = self.here();
                    let name = self.ident("a sort name")?;
                    if let Err(e) = self.sig.add_sort(name.as_str()) {
                        self.error(span, e.to_string());
                    }
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::Semi, "`;` after sort list")?;
            } else if self.at_keyword("func") {
                self.bump();
                let name = self.ident("a function name")?;
                self.expect(Tok::Colon, "`:`")?;
                let args = self.sort_list()?;
                self.expect(Tok::Arrow, "`->`")?;
                let result = self.sort_ref()?;
                self.expect(Tok::Semi, "`;` after declaration")?;
                if let Err(e) = self.sig.add_function(name, args, result) {
                    let span = self.span_from(start);
                    self.error(span, e.to_string());
                }
            } else if self.at_keyword("const") {
                self.bump();
                let name = self.ident("a constant name")?;
                self.expect(Tok::Colon, "`:`")?;
                let sort = self.sort_ref()?;
                self.expect(Tok::Semi, "`;` after declaration")?;
                if let Err(e) = self.sig.add_constant(name, sort) {
                    let span = self.span_from(start);
                    self.error(span, e.to_string());
                }
            } else if self.at_keyword("pred") {
                self.bump();
                let name = self.ident("a predicate name")?;
                let args = if *self.peek() == Tok::Colon {
                    self.bump();
                    self.sort_list()?
                } else {
                    Vec::new()
                };
                self.expect(Tok::Semi, "`;` after declaration")?;
                if let Err(e) = self.sig.add_relation(name, args) {
                    let span = self.span_from(start);
                    self.error(span, e.to_string());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn sort_list(&mut self) -> PResult<Vec<Sort>> {
        let mut out = vec![self.sort_ref()?];
        while matches!(self.peek(), Tok::Ident(s) if s == "x") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            out.push(self.sort_ref()?);
        }
        Ok(out)
    }

    // ---- formulas -----------------------------------------------------

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if self.at_keyword("forall") || self.at_keyword("exists") {
            return self.quantified();
        }
        self.primary()
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let universal = self.at_keyword("forall");
        self.bump();
        let mut binders = Vec::new();
        loop {
            let span = self.here();
            let name = self.ident("a variable name")?;
            let sort = if self.infer.is_some() && *self.peek() != Tok::Colon {
                self.fresh_sort()
            } else {
                self.expect(Tok::Colon, "`:` and a sort for the bound variable")?;
                self.sort_ref()?
            };
            binders.push((Var::new(name, sort), span));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Dot, "`.` after quantified variables")?;
        let depth = self.scope.len();
        self.scope.extend(binders.iter().map(|(v, _)| v.clone()));
        let body = self.formula();
        self.scope.truncate(depth);
        let mut body = body?;
        for (v, span) in binders.into_iter().rev() {
            if !body.free_vars().contains(&v) {
                self.diags.push(ParseDiagnostic::warning(span, format!("bound variable `{}` is never used", v.name)));
            }
            body = if universal { Formula::forall(v, body) } else { Formula::exists(v, body) };
        }
        Ok(body)
    }

    fn primary(&mut self) -> PResult<Formula> {
        if *self.peek() != Tok::LParen {
            return self.atomic();
        }
        // `(` opens either a formula or a term on the left of a comparison.
        let save = self.pos;
        let saved_diags = self.diags.len();
        let saved_infer = self.infer.as_ref().map(|i| (i.clone(), self.sig.clone()));
        self.bump();
        let first = self.formula().and_then(|f| {
            if *self.peek() == Tok::RParen {
                self.bump();
                Ok(f)
            } else {
                Err(self.unexpected("`)`"))
            }
        });
        match first {
            Ok(f) => Ok(f),
            Err(e1) => {
                let reached = self.pos;
                self.pos = save;
                self.diags.truncate(saved_diags);
                if let Some((inf, sig)) = saved_infer {
                    self.infer = Some(inf);
                    self.sig = sig;
                }
                match self.atomic() {
                    Ok(f) => Ok(f),
                    Err(e2) => {
                        let further = if reached > self.pos { e1 } else { e2 };
                        Err(further)
                    }
                }
            }
        }
    }

    fn is_bound(&self, name: &str) -> bool {
        self.scope.iter().any(|v| &*v.name == name)
    }

    fn atomic(&mut self) -> PResult<Formula> {
        let start = self.start();
        if let Tok::Ident(name) = self.peek().clone() {
            if !self.is_bound(&name) && self.sig.relation(&name).is_some() {
                self.bump();
                let args = if *self.peek() == Tok::LParen { self.arguments()? } else { Vec::new() };
                let span = self.span_from(start);
                let decl = self.sig.relation(&name).cloned().expect("checked above");
                self.check_args(&name, &decl.args, &args, span);
                return Ok(Formula::Atom(name, args.into_iter().map(|(t, _)| t).collect()));
            }
            if self.infer.is_some()
                && !is_keyword(&name)
                && !self.is_bound(&name)
                && !self.sig.has_symbol(&name)
                && self.looks_like_predicate()
            {
                self.bump();
                let args = if *self.peek() == Tok::LParen { self.arguments()? } else { Vec::new() };
                let sorts = args.iter().map(|(_, s)| s.clone().unwrap_or_else(|| self.fresh_sort())).collect();
                self.sig.add_relation(name.as_str(), sorts).expect("symbol is new");
                return Ok(Formula::Atom(name, args.into_iter().map(|(t, _)| t).collect()));
            }
        }
        let (lhs, ls) = self.term()?;
        let op = self.peek().clone();
        if !matches!(op, Tok::Equals | Tok::NotEquals | Tok::Less) {
            return Err(self.unexpected("`=`, `!=` or `<` after a term"));
        }
        self.bump();
        let (rhs, rs) = self.term()?;
        let span = self.span_from(start);
        match op {
            Tok::Less => {
                if self.infer.is_some() && !self.sig.has_symbol(LT) {
                    self.infer_operator(LT, true);
                }
                match self.sig.relation(LT).cloned() {
                    Some(decl) => self.check_args("<", &decl.args, &[(lhs.clone(), ls), (rhs.clone(), rs)], span),
                    None => self.error(span, format!("`<` requires a declared binary predicate `{LT}`")),
                }
                Ok(Formula::Atom(LT.to_string(), vec![lhs, rhs]))
            }
            _ => {
                if let (Some(a), Some(b)) = (&ls, &rs) {
                    if !self.same_sort(a, b) {
                        self.error(span, format!("equality between sorts `{a}` and `{b}`"));
                    }
                }
                let eq = Formula::eq(lhs, rhs);
                Ok(if op == Tok::NotEquals { Formula::not(eq) } else { eq })
            }
        }
    }

    fn arguments(&mut self) -> PResult<Vec<(Term, Option<Sort>)>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }

    fn check_args(&mut self, name: &str, want: &[Sort], got: &[(Term, Option<Sort>)], span: SourceSpan) {
        if want.len() != got.len() {
            self.error(span, format!("`{name}` expects {} arguments, got {}", want.len(), got.len()));
            return;
        }
        for (i, (w, (_, g))) in want.iter().zip(got).enumerate() {
            if let Some(g) = g {
                if !self.same_sort(w, g) {
                    self.error(
                        span.clone(),
                        format!("argument {} of `{name}` has sort `{g}`, expected `{w}`", i + 1),
                    );
                }
            }
        }
    }

    fn term(&mut self) -> PResult<(Term, Option<Sort>)> {
        self.binary_term(0)
    }

    fn binary_term(&mut self, level: u8) -> PResult<(Term, Option<Sort>)> {
        if level == 2 {
            return self.atomic_term();
        }
        let (op_tok, symbol) = if level == 0 { (Tok::Plus, ADD) } else { (Tok::Star, MUL) };
        let start = self.start();
        let mut lhs = self.binary_term(level + 1)?;
        while *self.peek() == op_tok {
            self.bump();
            let rhs = self.binary_term(level + 1)?;
            let span = self.span_from(start);
            if self.infer.is_some() && !self.sig.has_symbol(symbol) {
                self.infer_operator(symbol, false);
            }
            let sort = match self.sig.function(symbol).cloned() {
                Some(decl) => {
                    self.check_args(symbol, &decl.args, &[lhs.clone(), rhs.clone()], span);
                    Some(decl.result)
                }
                None => {
                    self.error(span, format!("operator requires a declared binary function `{symbol}`"));
                    None
                }
            };
            lhs = (Term::app(symbol, vec![lhs.0, rhs.0]), sort);
        }
        Ok(lhs)
    }

    fn atomic_term(&mut self) -> PResult<(Term, Option<Sort>)> {
        let start = self.start();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                if let Some(v) = self.scope.iter().rev().find(|v| *v.name == *name) {
                    return Ok((Term::Var(v.clone()), Some(v.sort.clone())));
                }
                let args = if *self.peek() == Tok::LParen { self.arguments()? } else { Vec::new() };
                let span = self.span_from(start);
                if self.infer.is_some() && !self.sig.has_symbol(&name) {
                    let sorts = args.iter().map(|(_, s)| s.clone().unwrap_or_else(|| self.fresh_sort())).collect();
                    let result = self.fresh_sort();
                    self.sig.add_function(name.as_str(), sorts, result).expect("symbol is new");
                }
                let Some(decl) = self.sig.function(&name).cloned() else {
                    let kind = if self.sig.relation(&name).is_some() { "relation used as a term" } else { "unknown symbol" };
                    return Err(ParseDiagnostic::error(span, format!("{kind} `{name}`")));
                };
                self.check_args(&name, &decl.args, &args, span);
                Ok((Term::App(name.into(), args.into_iter().map(|(t, _)| t).collect()), Some(decl.result)))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn finish<T>(mut self, value: PResult<T>) -> Result<Parsed<T>, ParseErrors> {
        match value {
            Ok(v) if !self.diags.iter().any(|d| d.severity == Severity::Error) => {
                Ok(Parsed { value: v, warnings: self.diags })
            }
            Ok(_) => Err(ParseErrors(self.diags)),
            Err(e) => {
                if !self.diags.contains(&e) {
                    self.diags.push(e);
                }
                self.diags.retain(|d| d.severity == Severity::Error);
                Err(ParseErrors(self.diags))
            }
        }
    }
}

/// Parses a `.why` theory file, returning warnings alongside the theory.
pub fn parse_theory_in(text: &str, file: &str) -> Result<Parsed<Theory>, ParseErrors> {
    let mut p = Parser::new(text, file, Signature::new()).map_err(|e| ParseErrors(vec![e]))?;
    let th = p.theory();
    match p.finish(th)? {
        Parsed { value: Some(value), warnings } => Ok(Parsed { value, warnings }),
        Parsed { value: None, warnings } => Err(ParseErrors(warnings)),
    }
}

pub fn parse_theory(text: &str) -> Result<Theory, ParseErrors> {
    parse_theory_in(text, "<input>").map(|p| p.value)
}

/// Parses a closed formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseErrors> {
    let mut p = Parser::new(text, "<input>", sig.clone()).map_err(|e| ParseErrors(vec![e]))?;
    let f = p.formula().and_then(|f| {
        if *p.peek() == Tok::Eof {
            Ok(f)
        } else {
            Err(p.unexpected("end of input"))
        }
    });
    p.finish(f).map(|p| p.value)
}

/// Parses an inline theory `{f1, f2, ...}` and extra formulas over one
/// inferred signature.
///
/// Undeclared symbols are declared on first use: an identifier heading an
/// atom becomes a predicate, one in term position a function or constant.
/// Sorts come from annotated bound variables; symbols never connected to
/// one get the sort [`DEFAULT_SORT`]. Axioms are labelled `a1, a2, ...`.
pub fn parse_inline(name: &str, theory: &str, extra: &[&str]) -> Result<(Theory, Vec<Formula>), ParseErrors> {
    let mut p = Parser::new(theory, "<theory>", Signature::new()).map_err(|e| ParseErrors(vec![e]))?;
    p.infer = Some(Inference::default());
    let body = p.inline_body();
    let (axioms, mut parser) = p.finish_keep(body)?;
    let mut formulas = Vec::new();
    for (i, text) in extra.iter().enumerate() {
        let file = format!("<formula {}>", i + 1);
        parser.toks = tokenize(text, &file).map_err(|e| ParseErrors(vec![e]))?;
        parser.pos = 0;
        parser.file = file;
        let f = parser.formula().and_then(|f| {
            if *parser.peek() == Tok::Eof {
                Ok(f)
            } else {
                Err(parser.unexpected("end of input"))
            }
        });
        let (f, next) = parser.finish_keep(f)?;
        formulas.push(f);
        parser = next;
    }
    let sig = parser
        .resolved_signature()
        .map_err(|e| ParseErrors(vec![ParseDiagnostic::error(parser.here(), e)]))?;
    let fix = |s: &Sort| {
        let r = parser.resolve(s);
        if is_placeholder(&r) {
            Sort::new(DEFAULT_SORT)
        } else {
            r
        }
    };
    let formulas = formulas.iter().map(|f| resort(f, &fix)).collect();
    let named = axioms.iter().enumerate().map(|(i, f)| NamedFormula::new(format!("a{}", i + 1), resort(f, &fix))).collect();
    let th = Theory::new(name, sig, named)
        .map_err(|e| ParseErrors(vec![ParseDiagnostic::error(SourceSpan::new("<theory>", Pos { line: 1, column: 1 }, Pos { line: 1, column: 1 }), e.to_string())]))?;
    Ok((th, formulas))
}

/// `f` with the sort of every variable passed through `fix`.
fn resort(f: &Formula, fix: &impl Fn(&Sort) -> Sort) -> Formula {
    let var = |v: &Var| Var { name: v.name.clone(), sort: fix(&v.sort) };
    fn term(t: &Term, var: &impl Fn(&Var) -> Var) -> Term {
        match t {
            Term::Var(v) => Term::Var(var(v)),
            Term::App(name, args) => Term::App(name.clone(), args.iter().map(|a| term(a, var)).collect()),
        }
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| term(a, &var)).collect()),
        Formula::Eq(a, b) => Formula::Eq(term(a, &var), term(b, &var)),
        Formula::Not(g) => Formula::not(resort(g, fix)),
        Formula::Binary(c, a, b) => Formula::Binary(*c, Box::new(resort(a, fix)), Box::new(resort(b, fix))),
        Formula::Quant(q, v, body) => Formula::Quant(*q, var(v), Box::new(resort(body, fix))),
    }
}

impl Parser {
    fn inline_body(&mut self) -> PResult<Vec<Formula>> {
        self.expect(Tok::LBrace, "`{` opening an inline theory")?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                out.push(self.formula()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of input after inline theory"));
        }
        Ok(out)
    }

    /// As `finish`, but hands the parser back on success.
    fn finish_keep<T>(mut self, value: PResult<T>) -> Result<(T, Parser), ParseErrors> {
        match value {
            Ok(v) if !self.diags.iter().any(|d| d.severity == Severity::Error) => {
                self.diags.clear();
                Ok((v, self))
            }
            other => Err(self.finish(other).err().expect("a failing input carries an error")),
        }
    }
}
