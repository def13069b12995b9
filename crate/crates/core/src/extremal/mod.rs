//! Planarity, minors, small exhaustive searches and the structure of
//! extremal inner graphs.

mod canon;
mod minor;
mod planar;
mod spex;
mod structure;
mod sweep;

pub use canon::{are_isomorphic, canonical_form, canonical_graph6, CanonicalForm};
pub use minor::{has_minor, has_minor_plain, has_star_minor, MINOR_MAX_HOST, MINOR_MAX_TARGET, MINOR_NODE_BUDGET};
pub use planar::is_planar;
pub use spex::{spex_bruteforce, RankedGraph, SPEX_MAX_ORDER};
pub use structure::{
    contract_switch, rebalance_check, structure_report, RebalanceOutcome, StructureReport, SwitchOutcome,
    REBALANCE_MAX_CORE,
};
pub use sweep::{candidate_sweep, SweepConfig, SweepReport, SweepRow, SweepScope, SWEEP_EXHAUSTIVE_LIMIT};
