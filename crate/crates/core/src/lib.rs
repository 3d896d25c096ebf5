pub mod exactmath;
pub mod apc;
pub mod bundles;
pub mod complex;
pub mod groups;
pub mod reps;
pub mod model;
pub mod catalog;
pub mod runner;
