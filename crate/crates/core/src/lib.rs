//! Measuring bias between two populations of items from pairwise duels.
//!
//! Items from a reference population (side A) are paired against items from
//! a compared population (side B); raters pick a winner per duel. This crate
//! holds the arithmetic of such studies and does no IO:
//!
//! * [`choice`] fits Bradley-Terry scores to duel outcomes,
//! * [`schedule`] builds balanced A-vs-B duel schedules and simulates how well
//!   a comparison budget recovers the true ranking,
//! * [`bias`] turns fitted scores and raw outcomes into bias statistics,
//! * [`tags`] ranks free-form rater tags by how typical they are of a group,
//! * [`stats`] and [`bootstrap`] provide the shared tests and intervals.
//!
//! The crate is `no_std` and needs only `alloc`. Enable the `serde` feature to
//! derive `Serialize`/`Deserialize` on the result types.

#![no_std]
extern crate alloc;

pub mod bias;
pub mod bootstrap;
pub mod choice;
pub mod error;
pub mod pvalue;
pub mod schedule;
pub mod stats;
pub mod tags;

pub use error::{Error, Result};
pub use pvalue::PValue;
