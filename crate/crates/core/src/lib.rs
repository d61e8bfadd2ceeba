//! Certification and optimization toolkit for sharp Beckner-Sobolev
//! constants and diameter bounds on compact Kahler manifolds with a Ricci
//! lower bound: closed-form constants, exact rational-polynomial identity
//! certification of the underlying coefficient algebra, two independent
//! diameter-bound pipelines, and numerical validation on the product model
//! CP^1 x CP^1.
//!
//! Start with the runnable examples (`cargo run --example ...`) or the
//! `kahler-bounds` binary.

pub mod commands;
pub mod constants;
pub mod diameter;
pub mod error;
pub mod geometry;
pub mod identities;
pub mod model;
pub mod quad;
pub mod ratpoly;
pub mod rayleigh;
pub mod report;

pub use error::{Error, Result};
pub use geometry::GeometryParams;
