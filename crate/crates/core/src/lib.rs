//! Splitting t-designs and c-splitting authentication codes.
//!
//! - [`design`], [`design_file`], [`verify`], [`feasibility`]: the design data
//!   model, its text format, coverage verification and necessary conditions.
//! - [`search`]: backtracking search for designs with `lambda = 1`.
//! - [`code`], [`matrix`]: authentication codes, their encoding matrices and
//!   the conversions between codes and designs.
//! - [`security`]: exact spoofing probabilities and their lower bounds.
//!
//! All ratios are exact rationals; nothing on a verdict path uses floats.

pub mod arith;
pub mod code;
pub mod design;
pub mod design_file;
pub mod error;
pub mod feasibility;
pub mod fixtures;
pub mod matrix;
pub mod search;
pub mod security;
pub mod subsets;
pub mod verify;

pub use num_rational::BigRational;

pub use arith::format_ratio;
pub use code::{code_to_design, design_to_code, AuthCode, Decoded, EncodingRule, SplitIndex};
pub use design::{Block, DesignParams, Labels, SplittingDesign};
pub use design_file::{format_design, parse_design, parse_params, DesignFile};
pub use error::{Error, ParseError, Result};
pub use feasibility::{
    check_divisibility, check_fisher, check_parameter_relations, feasibility, replication_number,
    FeasibilityReport, ParameterRelations, Verdict,
};
pub use matrix::{load_matrix, store_matrix, EncodingMatrix};
pub use search::{search, Restarts, SearchConfig, SearchOutcome, SearchStats, SearchStatus};
pub use security::{
    acceptance_probability, deception_bound, deception_probability, deception_profile,
    encoding_rule_bound, is_optimal, security_order, Deception, DeceptionProfile, Evaluator,
    OrderProfile, SecurityModel, SuccessRule, Witness,
};
pub use verify::{count_qualifying_blocks, verify_splitting_design, VerificationReport};
