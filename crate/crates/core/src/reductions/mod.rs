//! Hardness constructions as instance generators, together with witness
//! builders for their forward directions.

pub mod cnf;
mod completion;
mod sat_smi;

pub use cnf::{formula_b, parse_cnf_22e3, random_22e3, CnfError, CnfFormula, Polarity};
pub use completion::{
    companions, complete_lists, dummy, global_ranking, minba_complete, minba_label, smi_to_sri, RegimeUnsupported,
};
pub use sat_smi::{
    direct_witness, gadget, path_subinstance, sat_to_direct_smi, sat_to_perfect_smi, strip_connectors,
    witness_matching, GadgetIndex, GadgetKind, PathSubinstance, WitnessError,
};
