//! Exact arithmetic over Q and Q(√D).

pub mod quadext;
pub mod rational;

pub use quadext::QuadExt;
pub use rational::ExactRational;
