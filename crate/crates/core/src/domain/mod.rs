//! Domain data: generators, storage, system instances and policy overrides.

mod sets;
mod types;
mod validate;

pub use sets::{classify_assets, IndexSets};
pub use types::{
    AssetStatus, DurationClass, GeneratorKind, GeneratorSpec, PolicyOverrides, Profile,
    StorageInvestLimit, StorageSpec, SystemInstance,
};
pub use validate::{validate_instance, validate_overrides, ValidationReport, Violation};
