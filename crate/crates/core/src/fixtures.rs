//! Reference designs and codes shipped with the crate.

use crate::code::AuthCode;
use crate::design_file::{parse_design, DesignFile};
use crate::matrix::load_matrix;

/// 2-(9,9,4=2x2,1) splitting design on points 1..9.
pub const BIBD_9_DESIGN: &str = include_str!("../fixtures/2-9-9-4-1.design");
/// 3-(10,15,6=2x3,1) splitting design on points 1..9,0.
pub const THREE_DESIGN_10: &str = include_str!("../fixtures/3-10-15-6-1.design");
/// Fano plane written as a 1-splitting 2-(7,7,3=1x3,1) design.
pub const FANO_DESIGN: &str = include_str!("../fixtures/fano.design");
/// Encoding matrix of the 2-splitting code with 2 sources, 9 messages, 9 rules.
pub const BIBD_9_MATRIX: &str = include_str!("../fixtures/2-9-9-4-1.matrix");
/// Encoding matrix of the 2-splitting code with 3 sources, 10 messages, 15 rules.
pub const THREE_DESIGN_10_MATRIX: &str = include_str!("../fixtures/3-10-15-6-1.matrix");

pub fn bibd_9() -> DesignFile {
    parse_design(BIBD_9_DESIGN).expect("bundled fixture parses")
}

pub fn three_design_10() -> DesignFile {
    parse_design(THREE_DESIGN_10).expect("bundled fixture parses")
}

pub fn fano() -> DesignFile {
    parse_design(FANO_DESIGN).expect("bundled fixture parses")
}

pub fn bibd_9_code() -> AuthCode {
    load_matrix(BIBD_9_MATRIX).expect("bundled fixture parses")
}

pub fn three_design_10_code() -> AuthCode {
    load_matrix(THREE_DESIGN_10_MATRIX).expect("bundled fixture parses")
}
