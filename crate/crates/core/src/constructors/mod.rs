//! Explicit element constructions.

mod bridge;
mod connector;
mod random;
mod reconstruct;
mod tree;

pub use bridge::{bridge_any, bridge_pz, transversal_crossing, Bridge, Crossing};
pub use connector::{b01, connector, make_end_offset, make_gi1};
pub use tree::{
    fn_beta_preimage, golden_pair_to_map, random_fn_element, random_ftau_element, tree_pair_to_map,
    GoldenTree, NTree,
};
pub use reconstruct::reconstruct_via_monitoring;
pub use random::{
    fn_base, ftau_base, gi_generators, hz_generators, random_connector, random_fn11, random_fn_conjugator,
    random_ftau_conjugator, random_gi1, random_gi_conjugator, random_golden_unit, random_hz_g1, random_hz_segment_map, random_hz_word,
    random_n_adic, random_ppq_element, random_ppq_g1, random_pz_point, random_rational, random_segment_map,
    random_unimodular_at,
};
