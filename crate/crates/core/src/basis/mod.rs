//! GLL and Gauss quadrature, nodal and edge polynomials, and the
//! reduction / reconstruction / projection operators.

mod family;
mod forms;
mod quadrature;

pub use family::{edge_eval, lagrange_eval, BasisFamily1D};
pub use forms::{field, project, reconstruct, reduce, DiscreteForm, ScalarField, SmoothForm};
pub(crate) use forms::tensor_sum;
pub use quadrature::{gauss_legendre, gll_rule, legendre, GLLRule, GaussRule, MAX_GLL_ORDER};
