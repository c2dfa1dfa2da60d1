//! Turning THEORY and formula arguments into theories and goals.

use std::fs;
use std::path::Path;

use whyq::answers::{Registry, Source};
use whyq::logic::signature_union;
use whyq::parser::{parse_formula, parse_inline, parse_theory_in};
use whyq::specrel::{noftl_formula, specrel_theory};
use whyq::{Formula, Signature, Theory};

use crate::Failure;

/// Formula argument that stands for the shipped NoFTL statement.
pub const NOFTL: &str = "noftl";

/// A goal or question together with the signature it was parsed over.
#[derive(Clone, Debug)]
pub struct Goal {
    pub formula: Formula,
    pub signature: Signature,
}

/// A theory argument resolved against the registry. `key` is the name it
/// can be looked up under afterwards.
pub struct Loaded {
    pub key: String,
    pub theory: Theory,
    pub goals: Vec<Goal>,
}

fn is_inline(arg: &str) -> bool {
    arg.trim_start().starts_with('{')
}

fn noftl_goal() -> Goal {
    Goal { formula: noftl_formula(), signature: specrel_theory().signature().clone() }
}

/// Resolves `arg` as an inline theory, a `.why` file or a registry name,
/// and parses `formulas` over its signature. Inline theories are inserted
/// into the registry under their text.
pub fn load(reg: &mut Registry, arg: &str, name: &str, formulas: &[&str]) -> Result<Loaded, Failure> {
    if is_inline(arg) {
        let plain: Vec<&str> = formulas.iter().copied().filter(|f| *f != NOFTL).collect();
        let (theory, parsed) = parse_inline(name, arg, &plain).map_err(|e| Failure::Usage(e.to_string()))?;
        let mut parsed = parsed.into_iter();
        let goals = formulas
            .iter()
            .map(|f| match *f {
                NOFTL => noftl_goal(),
                _ => Goal { formula: parsed.next().expect("one formula per argument"), signature: theory.signature().clone() },
            })
            .collect();
        reg.insert(arg, theory.clone(), arg, Source::Inline);
        return Ok(Loaded { key: arg.to_string(), theory, goals });
    }
    let (key, theory) = if arg.ends_with(".why") || Path::new(arg).is_file() {
        let path = Path::new(arg);
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        let parsed = parse_theory_in(&text, arg).map_err(|e| Failure::Usage(e.to_string()))?;
        for w in &parsed.warnings {
            eprintln!("{w}");
        }
        let key = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg).to_string();
        reg.insert(&key, parsed.value.clone(), &text, Source::File(path.to_path_buf()));
        (key, parsed.value)
    } else {
        (arg.to_string(), reg.get(arg).map_err(|e| Failure::Usage(e.to_string()))?.clone())
    };
    let goals = formulas
        .iter()
        .map(|f| match *f {
            NOFTL => Ok(noftl_goal()),
            _ => parse_formula(f, theory.signature())
                .map(|formula| Goal { formula, signature: theory.signature().clone() })
                .map_err(|e| Failure::Usage(e.to_string())),
        })
        .collect::<Result<_, _>>()?;
    Ok(Loaded { key, theory, goals })
}

/// `th` over a signature that also covers `goal`.
pub fn lift_to(th: &Theory, goal: &Goal) -> Result<Theory, Failure> {
    let sig = signature_union(th.signature(), &goal.signature).map_err(|e| Failure::Usage(e.to_string()))?;
    th.lift(&sig).map_err(|e| Failure::Usage(e.to_string()))
}
