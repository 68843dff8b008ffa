//! Lattice realization of the mass-m, spin-0 representation together with
//! the localization operators built on it.

mod causality;
mod config;
mod lattice;
mod packets;
mod position;
mod pvm;
mod representation;
mod state;
mod verify;

pub use causality::{
    causality_experiment, commutator_witness, prepare_localized, region_center, CausalityOutcome,
};
pub use config::ModelConfig;
pub use lattice::Model;
pub use packets::{make_gaussian, random_states, random_wave_packets};
pub use position::{
    apply_nw, nw_component_stats, nw_expectation, ComponentStats, MeanVariance, NwPosition,
    VectorState,
};
pub use pvm::{canonical_map, localization_probability, pvm_project, Projector, PvmHandle};
pub use representation::{
    apply_boost, apply_boost_with, apply_poincare, apply_poincare_with, apply_rotation, apply_translation, evolve, lattice_symmetries,
    lattice_translation, rapidity_cap, support_energy, BandPolicy, BoostOutcome, LatticeSymmetry, MapChain,
};
pub use state::LatticeState;
pub use verify::{
    centered_region, standard_boost, verify_eq1, verify_prop1, verify_prop1_boost, verify_prop2,
    verify_prop2_negative, verify_prop3, verify_prop4, ResidualReport,
};
