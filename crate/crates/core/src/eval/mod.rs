//! Evaluation rules for bracket series: the master theorem, exact index-zero
//! solves, maximal-rank enumeration, and single-index elimination.

mod linear;
mod rules;

pub use linear::{cofactor_determinant, IndexSolution, LinearSystem, SystemDump};
pub use rules::{
    bracket_for, evaluate_square, is_parameter_only, partial_eliminate, rule_e1, rule_e2, rule_e3_enumerate, Candidate,
    ClosedForm, Evaluation,
};
