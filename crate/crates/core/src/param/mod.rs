//! Parameter-dependent systems and their specializations.

pub mod elem;
pub mod mpoly;
pub mod specialize;

pub use elem::{ParamElem, ParamSpace};
pub use mpoly::MPoly;
pub use specialize::{
    analyze_generic, bad_locus_regsing, preservation_sweep, BadLocus, GenericAnalysis, ParamMatrix, ParamSystem, Specialization,
    SpecializeError, SweepReport,
};
