//! Exact-arithmetic machinery for incidence stratifications on Hilbert
//! schemes of points in the plane.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`], [`upoly`], [`mpoly`], [`ratfunc`], [`linalg`], [`parse`]:
//!   exact scalars, polynomials, rational functions and linear algebra,
//!   generic over the base field.
//! - [`uni`]: tuples of univariate polynomials stratified by the colength of
//!   the ideal they generate.
//! - [`charts`]: the stratified blowup of that space, chart by chart, with
//!   smoothness / normal-crossings certificates at sampled points.
//! - [`monomial`]: the determinantal monomial ideals, their colength, tangent
//!   and obstruction dimensions, and deformations.
//! - [`ideal`]: bivariate Gröbner bases, the torus flat limit, monomialization
//!   and incidence length along the x-axis.
//! - [`poisson`]: pullback of the local product bivector to a blowup chart.
//! - [`harness`]: seeded suites and JSON reports used by the CLI.
//!
//! Everything is generic over [`field::Scalar`]; the aliases below fix the
//! rationals, which are the default.

pub mod charts;
pub mod error;
pub mod field;
pub mod harness;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod mpoly;
pub mod parse;
pub mod poisson;
pub mod ratfunc;
pub mod sample;
pub mod uni;
pub mod upoly;

pub use error::{Error, Result};
pub use field::{Field, Fp, Ring, Scalar};

/// Arbitrary-precision rationals, the default base field.
pub type Q = num_rational::BigRational;

/// Default prime for the prime-field mode.
pub type F32003 = Fp<32003>;

pub type UPolyQ = upoly::UPoly<Q>;
pub type MPolyQ = mpoly::MPoly<Q>;
pub type RationalFuncQ = ratfunc::RationalFunc<Q>;
pub type MatrixQ = linalg::Matrix<Q>;
pub type StratPointQ = uni::StratPoint<Q>;
pub type ChartTowerQ = charts::ChartTower<Q>;
pub type BiIdealQ = ideal::BiIdeal<Q>;
pub type BivectorQ = poisson::Bivector<Q>;
