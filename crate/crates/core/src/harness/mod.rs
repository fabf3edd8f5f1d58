//! Dataset generation, labeling, the two experiment pipelines, and file
//! formats.

pub mod case_a;
pub mod case_b;
pub mod feature_table;
pub mod generate;
pub mod label;
pub mod model_io;
pub mod problem;
pub mod table;

pub use case_a::{run_case_a, CaseAConfig, CaseAReport};
pub use case_b::{run_case_b, CaseBConfig, CaseBReport, SelectionMode};
pub use generate::{gen_dataset, Dataset, GenSpec};
pub use label::{label_case_a, label_case_b, LabelFileA, LabelFileB, LimitsSpec};
pub use model_io::{load_model, save_model};
pub use problem::{ProblemInstance, FORMAT_VERSION};
