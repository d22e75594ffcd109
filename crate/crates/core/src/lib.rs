//! Weighted dual graphs of boundaries of affine ruled surfaces.

pub mod canon;
pub mod catalog;
pub mod chain;
pub mod dsl;
pub mod emit;
pub mod extended;
pub mod graph;
pub mod invariants;
pub mod presentation;
pub mod standard;
pub mod surgery;

pub use canon::{canonical_code, shape_code, CanonicalCode};
pub use chain::{classify_chain, is_standard_circular, ChainClass, ChainError, Zigzag};
pub use graph::{GraphError, Role, Vertex, VertexId, WeightedGraph};
pub use standard::{is_standard_graph, segments, Segment};
pub use surgery::{
    blow_down, blow_up, confluence_oracle, elementary_transform, reverse, standardize,
    standardize_with, BlowupSite, ElemDirection, OracleResult, SearchBudget, StepKind,
    SurgeryError, SurgeryStep, SurgeryTranscript,
};
pub use extended::{
    contract_canonically, mother_map, normalize, validate, ComponentKind, ContractionRecord,
    ContractionTranscript, ExtendedError, ExtendedGraph, FeatherMother, Fiber, FiberFailure,
    FiberOutcome, FiberReport, MotherAssignment, NormalizedExtendedGraph,
};
pub use invariants::{
    canonical_config, config_space_dim, configuration_invariant, decide_equivalence,
    match_feather_data, reverse_normalized, BaseCoordinate, ConfigDimensions,
    ConfigurationInvariant, CoordinatedGraph, FeatherData, FeatherTriple, InvariantError,
    PointConfig, Verdict, Witness,
};
pub use presentation::{
    instantiate, one_skeleton, presentation_dimension, schedule_from, BlowupSchedule, OneSkeleton,
    PresentationError, PresentationInstance, ScheduleStep, Slot, SlotKind, StepSite, StepType,
};
pub use dsl::{parse, Document, DslError, ItemDecl, Resolved};
pub use emit::emit_dot;
