//! Supply-chain pricing under demand uncertainty.
//!
//! An upstream supplier facing uncertain demand charges the wholesale price
//! that is the fixed point of the demand distribution's mean residual life
//! function. This crate provides:
//!
//! - [`dist`]: demand-distribution families and combinators behind one
//!   immutable [`Dist`] handle, with a declarative JSON spec format;
//! - [`reliability`]: MRL/GMRL/hazard/GFR curves and grid certificates for
//!   the DMRL, DGMRL, IFR and IGFR properties;
//! - [`orders`]: certificates for six stochastic orders (st, hr, mrl, cx,
//!   disp, ew) with violation witnesses;
//! - [`equilibrium`]: the fixed-point solver, per-realization market
//!   fundamentals, profit split and price-of-anarchy arithmetic;
//! - [`oracle`]: a brute-force verification layer (grid argmax, Cournot
//!   deviation checks, seeded Monte Carlo) kept independent of the solver;
//! - [`comparative`]: experiment harnesses that certify every hypothesis
//!   numerically before testing the predicted price ordering, plus the
//!   stochastically-larger-market counterexample reproduction.

pub mod comparative;
pub mod dist;
pub mod equilibrium;
mod error;
pub mod oracle;
pub mod orders;
pub mod quad;
pub mod reliability;
pub mod roots;

pub use dist::{make_family, Demand, Dist, DistSpec, Family, Moments, PhiSpec};
pub use error::{Error, Result};
