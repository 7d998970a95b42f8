pub mod cli;
pub mod controllers;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod plant;
pub mod ratpoly;
pub mod sim;
pub mod tuning;
