//! Special relativity: the SpecRel axiom system, the NoFTL goal and an
//! exact-rational Minkowski model for instance checking.

mod instances;
pub mod lorentz;
mod roster;
mod standard;

pub use instances::{check_axiom_instances, check_field_laws, InstanceError, InstanceReport, INSTANCE_AXIOMS};
pub use roster::{Body, BodyKind, Roster, RosterError, Worldline};
pub use standard::{check_noftl, lightlike, NoftlReport, SpeedError, StandardModel, Value, Violation, BODY, QUANTITY};

use std::sync::OnceLock;

use crate::logic::{split_conjunctions, split_formula, Formula, Theory};
use crate::parser::{parse_formula, parse_theory};

pub const SPECREL_SOURCE: &str = include_str!("../../data/specrel.why");
pub const SPECREL0_SOURCE: &str = include_str!("../../data/specrel0.why");
pub const NOFTL_SOURCE: &str = include_str!("../../data/noftl.txt");
pub const ROSTER_SEED0: &str = include_str!("../../data/roster-seed0.txt");

/// Axiom labels of SpecRel, in file order.
pub const AXIOMS: [&str; 5] = ["AxField", "AxSelf", "AxPh", "AxEv", "AxSymd"];

pub fn specrel_theory() -> Theory {
    parse_theory(SPECREL_SOURCE).expect("shipped SpecRel parses")
}

pub fn specrel0_theory() -> Theory {
    parse_theory(SPECREL0_SOURCE).expect("shipped SpecRel0 parses")
}

/// SpecRel with AxField broken into its individual field and order laws.
pub fn specrel_split_theory() -> Theory {
    split_conjunctions(&specrel_theory())
}

/// NoFTL with `speed_o(b)` expanded into two coordinatized events of `b`.
pub fn noftl_formula() -> Formula {
    parse_formula(NOFTL_SOURCE, specrel_theory().signature()).expect("shipped NoFTL parses")
}

/// The shipped seed-0 roster: 20 observers followed by 10 photons.
pub fn default_roster() -> Roster {
    Roster::parse(ROSTER_SEED0).expect("shipped roster parses")
}

/// True when `th` contains every ordered-field law of AxField, possibly
/// split up or spread over several axioms. Ordered fields are infinite, so
/// finite model search on such a theory cannot succeed.
pub fn requires_infinite_domain(th: &Theory) -> bool {
    static LAWS: OnceLock<Vec<Formula>> = OnceLock::new();
    let laws = LAWS.get_or_init(|| {
        let th = specrel_theory();
        split_formula(&th.axiom("AxField").expect("shipped AxField").formula)
    });
    let split = split_conjunctions(th);
    laws.iter().all(|law| split.contains_alpha(law))
}
