//! Generalized augmentations of link diagrams and the geometric bounds they
//! certify for the original link.

pub mod augment;
pub mod braid;
pub mod diagram;
pub mod format;
pub mod geometry;
mod map;
pub mod report;
pub mod twist;
