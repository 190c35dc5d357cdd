//! Exact symbolic tools for polynomial maps `H = (u, v, h)` of three
//! variables whose Jacobian matrix is nilpotent: parsing, nilpotency
//! checks, linear dependence, common generators of plane polynomials with
//! vanishing Jacobian, the classified families, and exhaustive searches
//! over small coefficient spaces.

pub mod cli;
pub mod dependence;
pub mod families;
pub mod jacobian;
pub mod kernel;
pub mod linalg;
pub mod parser;
pub mod poly;
pub mod search;

pub use dependence::{linear_dependence, origin_check, DependenceResult};
pub use families::{
    conjugate_by_transposition, conjugate_linear, corollary_3_7_family, remark_2_2_family,
    shape_matches, theorem_3_3_family, FamilyParams, ShapeId, ShapeReport,
};
pub use jacobian::{
    char_coeffs, is_nilpotent, jacobian_matrix, potential, CharCoeffs, LinearMap, PolyMap,
    PolyMatrix,
};
pub use kernel::{express_in, find_kernel_generator, KernelGenerator};
pub use parser::{format, parse, parse_map, parse_uni, MapSource};
pub use poly::{Degree, Monomial, Polynomial, Rational, UniPoly, Var};
pub use search::{verify_theorem, SearchError, SearchSpace, TheoremReport};
