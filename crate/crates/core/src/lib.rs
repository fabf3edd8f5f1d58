pub mod error;
pub mod exec;
pub mod poly;
pub mod qarith;
pub mod univar;
pub mod realroot;
pub mod cad;
pub mod groebner;
pub mod heuristics;
pub mod features;
pub mod svm;
pub mod modelsel;
pub mod harness;
