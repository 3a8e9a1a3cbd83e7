//! Product test, multi-prover protocol simulation and parameter maps.

mod params;
mod product;

pub use params::{
    helper_inequality_check, helper_slack_exact, param_maps, region_boundary, region_contains, region_csv,
    region_curve, sw_bound, ParamMap, ParamValues, RegionPoint, REGION_CSV_HEADER,
};
pub use product::{
    grid_product_overlap, max_product_overlap, product_test, product_test_circuit, product_test_density,
    product_test_pure_density, simulate_k_to_2, OverlapResult, Partition,
};

pub mod toys;
