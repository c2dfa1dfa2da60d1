use std::collections::BTreeMap;

use thiserror::Error;

use crate::logic::{Connective, Formula, Quantifier, Sort, Term, Var};

/// An interpretation of a signature that formulas can be evaluated in.
///
/// Quantifiers need an enumerable domain; structures with infinite sorts
/// return `None` from [`domain`](Structure::domain) and can still evaluate
/// quantifier-free formulas.
pub trait Structure {
    type Elem: Clone + PartialEq;

    fn domain(&self, sort: &Sort) -> Option<Vec<Self::Elem>>;
    fn apply(&self, f: &str, args: &[Self::Elem]) -> Result<Self::Elem, EvalError>;
    fn holds(&self, r: &str, args: &[Self::Elem]) -> Result<bool, EvalError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value for free variable `{0}`")]
    MissingBinding(String),
    #[error("cannot quantify over the infinite sort `{0}`")]
    InfiniteDomain(String),
    #[error("symbol `{0}` is not interpreted (or applied outside its domain)")]
    UnknownSymbol(String),
}

pub type Env<E> = BTreeMap<Var, E>;

pub fn eval_term<S: Structure>(m: &S, t: &Term, env: &Env<S::Elem>) -> Result<S::Elem, EvalError> {
    match t {
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::MissingBinding(v.name.to_string())),
        Term::App(f, args) => {
            let vals = args.iter().map(|a| eval_term(m, a, env)).collect::<Result<Vec<_>, _>>()?;
            m.apply(f, &vals)
        }
    }
}

/// Tarskian truth value of `f` in `m` under `env`.
pub fn evaluate<S: Structure>(m: &S, f: &Formula, env: &Env<S::Elem>) -> Result<bool, EvalError> {
    match f {
        Formula::Atom(r, args) => {
            let vals = args.iter().map(|a| eval_term(m, a, env)).collect::<Result<Vec<_>, _>>()?;
            m.holds(r, &vals)
        }
        Formula::Eq(a, b) => Ok(eval_term(m, a, env)? == eval_term(m, b, env)?),
        Formula::Not(g) => Ok(!evaluate(m, g, env)?),
        Formula::Binary(c, a, b) => {
            let x = evaluate(m, a, env)?;
            Ok(match c {
                Connective::And => x && evaluate(m, b, env)?,
                Connective::Or => x || evaluate(m, b, env)?,
                Connective::Implies => !x || evaluate(m, b, env)?,
                Connective::Iff => x == evaluate(m, b, env)?,
            })
        }
        Formula::Quant(q, v, body) => {
            let dom = m.domain(&v.sort).ok_or_else(|| EvalError::InfiniteDomain(v.sort.to_string()))?;
            let mut env = env.clone();
            for e in dom {
                env.insert(v.clone(), e);
                let val = evaluate(m, body, &env)?;
                match q {
                    Quantifier::Forall if !val => return Ok(false),
                    Quantifier::Exists if val => return Ok(true),
                    _ => {}
                }
            }
            Ok(matches!(q, Quantifier::Forall))
        }
    }
}

/// Truth value of a closed formula.
pub fn holds<S: Structure>(m: &S, f: &Formula) -> Result<bool, EvalError> {
    evaluate(m, f, &Env::new())
}
