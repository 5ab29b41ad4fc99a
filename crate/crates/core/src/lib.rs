//! Exact and certified bounds for codes in distance-regular and homogeneous
//! spaces: zonal orthogonal polynomials, Delsarte linear programs,
//! three-point semidefinite programs and Lovász θ.

pub mod certlib;
pub mod codes;
pub mod delsarte;
pub mod error;
pub mod linalg;
pub mod orthopoly;
pub mod poly;
pub mod rational;
pub mod schrijver;
pub mod sdp;
pub mod solvers;
pub mod theta;
pub mod zonal;

pub use error::{Error, Result};
pub use rational::Rational;
