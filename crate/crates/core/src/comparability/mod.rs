//! Attachment of covectors to parameters, the sets `Q_χ`, the comparability
//! pre-order and the shifting cone.

mod attach;
mod qset;
mod shift_cone;

pub use attach::{combine, validate_witness, Attachment, DEFAULT_RADIUS};
pub use qset::{
    chi_arrow, d1_covectors, d1_matrix, decide_attached, decide_attached_with_radius, is_maximal, q_set,
    q_set_d1_closed_form, q_set_d1_from_definition, ArrowDetails, Maximality, ParamSpace, QSet, SignVector,
};
pub use shift_cone::{shifting_cone, shifting_cone_in, GeneratorCheck, ShiftCone, VALIDATION_MULTIPLES};

use crate::exactnum::ParamScalar;

/// A parameter `χ ∈ (ℚ ⊕ ℚτ)^d`.
pub type Character = Vec<ParamScalar>;
