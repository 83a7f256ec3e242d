//! Exact alternating sums of multilinear forms over products of symmetric
//! groups, with two worked families: colorful determinants (signed Latin
//! squares, transversal bases) and spinor assignments on complete graphs.

pub mod engine;
pub mod error;
pub mod exact;
pub mod onn;
pub mod parallel;
pub mod perms;
pub mod random;
pub mod svrtan;

pub use engine::{
    alternating_sum, invariant_at_identity, verify_identity, BoundForm, DenseTensorForm, FnForm,
    IdentityReport, MatrixTuple, MultilinearForm, SearchOutcome,
};
pub use error::{Error, Result};
pub use exact::{det, format_rational, parse_rational, poly_det, poly_mul, Matrix, Polynomial, Rational};
pub use onn::{
    alon_tarsi_count, colorful_form, latin_sign, rota_search, verify_onn, ColorfulInstance,
    LatinSquare, TransversalSelection,
};
pub use parallel::ExecConfig;
pub use perms::{act, enumerate_product, enumerate_signed, Shape, Sign, SignedPerm, SignedPermTuple};
pub use svrtan::{
    as_engine_instance, choice_det, choice_polys, nonzero_term_census, svrtan_search,
    verify_svrtan, Census, Choice, EdgeBasis, SearchOptions, SpinorInstance,
};
