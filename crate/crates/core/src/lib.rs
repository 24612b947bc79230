//! Finite-field toolkit and S-box analysis engine for group-action
//! perfect nonlinearity.
//!
//! The crate builds GF(p^m) with a fixed primitive element, equips the
//! nonzero elements with the star multiplication gamma^i x gamma^j =
//! gamma^{ij}, computes derivative spectra of lookup-table functions under
//! pluggable group actions, and constructs the perfect nonlinear and doubly
//! perfect nonlinear permutation families those structures support.

pub mod actions;
pub mod analyzer;
pub mod constructions;
pub mod double_field;
pub mod error;
pub mod field;

pub use actions::{ActionSpec, FiniteGroup};
pub use analyzer::{
    derivative, differential_uniformity, is_doubly_pn, is_doubly_pn_with, is_perfect_nonlinear,
    spectrum, DoublyPnReport, DoublyPnVerdict, Part1Target, PnFailure, PnVerdict, SBox,
    SpectrumTable,
};
pub use constructions::{
    frobenius_sbox, power_map_sbox, random_additive_epimorphism, subgroup_pn_setting, AdditiveMap,
    SplitMix64, SubgroupPnOutcome, VectorSpaceSpec,
};
pub use double_field::{
    all_unit_subgroups, find_difference_unit_subgroups, mersenne_factor, FieldRing,
    MersenneFactorization, RingClass, UnitSubgroup,
};
pub use error::{Error, Result};
pub use field::FieldSpec;
