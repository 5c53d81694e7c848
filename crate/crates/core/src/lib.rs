//! Exact symbolic toolkit for germs of polynomial vector fields and
//! differential forms at the origin of K^n, K a number field.
//!
//! Variables are indexed from 0 in this API and printed as `x1, x2, ...`.

pub mod analysis;
pub mod blowup;
pub mod error;
pub mod exterior;
pub mod lattice;
pub mod linalg;
pub mod pencil;
pub mod polyalg;
pub mod resonance;
pub mod scalars;

pub use analysis::{
    invariant_hypersurface_check, invariant_hypersurface_search, jouanolou, ratio_identities,
    recognize_normal_form, simple_ch_check, tangent_log_pencil, InvariantSurface, NormalForm,
    SimpleSingularityReport, SurfaceSearch, TangentLogPencil,
};
pub use blowup::{
    axis_invariance, diagonal_linear_part, transform_form, transform_vector_field, BlowupChart,
    StrictTransform,
};
pub use error::{Error, ErrorClass, Result};
pub use exterior::{
    directional_derivative, ext_derivative, interior_product, is_first_integral, is_integrable,
    is_tangent, remove_codim1, wedge, FirstIntegralVerdict, MeroForm, VectorField,
};
pub use lattice::{q_linear_relation_lattice, IntegerRelationBasis};
pub use pencil::{
    codim1_sample, connection_form_with, decompose_over_pair, log_form, log_pencil, pencil_condition,
    pencil_from_three, potential, verify_classification, Codim1Sample, Pencil, PencilClassification,
    YChoice,
};
pub use polyalg::{poly_gcd, poly_lcm, Monomial, Poly, RatFunc};
pub use resonance::{
    blowup_eigenvalue_law, is_strongly_diagonalizable, nonneg_resonance_search, strong_resonances,
    Eigenvalues, NonnegResonance,
};
pub use scalars::{FieldElement, NumberField, Rational};
