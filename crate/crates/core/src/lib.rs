//! Certified numerics for the Cesàro operator on weighted `l1` spaces.

pub mod numerics;
pub mod weights;
pub mod criteria;
pub mod sections;
pub mod spectral;
pub mod ergodic;
pub mod cli;
