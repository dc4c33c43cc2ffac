//! Exact wall-crossing arithmetic for stable-pair counting invariants.
//!
//! Everything is computed over the rationals — no floating point anywhere.
//! The crate is organized along the pipeline:
//!
//! * [`cone`] — effective classes, the cone model, slopes, and ordered
//!   decompositions of a class at a stability parameter;
//! * [`stability`] — the one-parameter family of stability conditions, its
//!   wall set, chamber sampling, and dominance;
//! * [`coeff`] — the combinatorial S- and U-coefficients and their
//!   specializations;
//! * [`hall`] — a truncated free algebra on formal symbols with the
//!   δ/ε-change-of-basis and wall-crossing transformations;
//! * [`integrate`] — invariant tables, the Lie-algebra integration map over
//!   labeled trees, and the wall-crossing / chain formulas for L;
//! * [`series`] — Laurent windows, canonical rational functions of q, and
//!   the `P = L·exp(N′)` factorization round trip.
//!
//! ```
//! use wallcross::cone::{ConeModel, NumClass};
//! use wallcross::stability::StabilityParam;
//! use wallcross::rat::rat;
//!
//! let model = ConeModel::with_constant_tables(vec![1], &vec![3], 0).unwrap();
//! let v = NumClass::pair(vec![2], 2).unwrap();
//! let k = StabilityParam::new(rat(-1, 1));
//! let decs = wallcross::cone::decompositions(&v, &k, &model).unwrap();
//! assert!(decs.iter().all(|d| NumClass::sum_raw(d.iter()) == Some(v.clone())));
//! ```

pub mod book;
pub mod cone;
pub mod coeff;
pub mod config;
pub mod error;
pub mod hall;
pub mod integrate;
pub mod rat;
pub mod selftest;
pub mod series;
pub mod stability;

pub use error::{Error, Result};
