pub mod acceptance;
pub mod arbitrage;
pub mod bid_ask;
pub mod conditional;
pub mod document;
pub mod entropic;
pub mod hedging;
pub mod linalg;
pub mod lp;
pub mod parallel;
pub mod polyhedron;
pub mod rational;
pub mod sample;
pub mod tree;

pub use polyhedron::{Comparison, Halfspace, Hyperplane, PolyError, Polyhedron, SupportValue};
pub use rational::Rational;
