//! Hyperbolic geometry and the modular flow, the Lorenz system and its T-point
//! trefoil, a geometric Lorenz model, and Lorenz knots with exact Alexander
//! polynomials.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod hyperbolic;
pub mod knots;
pub mod lorenz;
pub mod model;
pub mod modular;
