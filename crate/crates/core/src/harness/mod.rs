//! Instance generation and experiment orchestration.

mod experiment;
mod generate;
mod random;

pub use experiment::{
    instance_plan, instances_csv, load_config, run_experiment, run_instance, witnesses_csv, write_reports,
    ExperimentConfig, ExperimentReport, InstanceReport, PromiseSide, WitnessKind, WitnessRow, INSTANCES_CSV_HEADER,
    SUITE_TOL, WITNESSES_CSV_HEADER,
};
pub use generate::{gen_local_embedded, gen_random_instance, gen_random_instance_with_headroom, LocalTerm};
pub use random::{random_density, random_gate, random_generalized_verifier, random_state, random_unit_vector};
