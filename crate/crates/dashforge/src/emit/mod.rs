//! Platform-specific dashboard generation.
//!
//! An [`EmitterRegistry`] maps target names to [`Emitter`] implementations.
//! Two targets ship by default: `grafana` (an importable Grafana dashboard
//! document) and `canonical` (the interchange document, handy for debugging
//! and piping). New targets are added by registering another `Emitter`; the
//! rest of the pipeline is unaffected.

pub mod grafana;

pub use grafana::{compute_grid, emit_grafana, GridPosition};

use crate::dsl::dump_canonical;
use crate::model::{ensure_valid, DashboardModel, InvalidModel};

/// Identity of a registered emitter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitterTarget {
    /// Registry key: lowercase, no whitespace.
    pub name: String,
    pub description: String,
}

/// A produced dashboard document plus non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitResult {
    pub document: Vec<u8>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmitError {
    #[error("unknown target \"{name}\"; available: {}", available.join(", "))]
    UnknownTarget {
        name: String,
        available: Vec<String>,
    },
    #[error("model is not enriched: {} KPI(s) have no visualization (run enrich first): {}", unclaimed.len(), unclaimed.join(", "))]
    NotEnriched { unclaimed: Vec<String> },
    #[error(transparent)]
    Invalid(#[from] InvalidModel),
    #[error("an emitter named \"{0}\" is already registered")]
    DuplicateTarget(String),
    #[error("invalid emitter name \"{0}\": names are lowercase with no whitespace")]
    InvalidTargetName(String),
    #[error("visualization \"{vis_id}\" has group key \"{group_key}\" which is not in the group list")]
    InconsistentGroups { vis_id: String, group_key: String },
}

/// A translator from an enriched model to one target platform's document.
///
/// Emitters are stateless; the registry performs the shared precondition
/// checks (validity, enrichment) before dispatching.
pub trait Emitter {
    fn target(&self) -> EmitterTarget;
    fn emit(&self, model: &DashboardModel) -> Result<EmitResult, EmitError>;
}

struct GrafanaEmitter;

impl Emitter for GrafanaEmitter {
    fn target(&self) -> EmitterTarget {
        EmitterTarget {
            name: "grafana".into(),
            description: "Grafana dashboard JSON, importable via Import dashboard".into(),
        }
    }

    fn emit(&self, model: &DashboardModel) -> Result<EmitResult, EmitError> {
        emit_grafana(model)
    }
}

struct CanonicalEmitter;

impl Emitter for CanonicalEmitter {
    fn target(&self) -> EmitterTarget {
        EmitterTarget {
            name: "canonical".into(),
            description: "canonical interchange document (JSON)".into(),
        }
    }

    fn emit(&self, model: &DashboardModel) -> Result<EmitResult, EmitError> {
        let document = dump_canonical(model)?;
        Ok(EmitResult {
            document,
            warnings: vec![],
        })
    }
}

/// Ordered collection of emitters, keyed by target name.
pub struct EmitterRegistry {
    emitters: Vec<Box<dyn Emitter>>,
}

impl EmitterRegistry {
    /// Registry with the shipped targets, `grafana` then `canonical`.
    pub fn with_builtins() -> Self {
        let mut registry = EmitterRegistry { emitters: vec![] };
        registry
            .register(Box::new(GrafanaEmitter))
            .expect("builtin names are valid");
        registry
            .register(Box::new(CanonicalEmitter))
            .expect("builtin names are valid");
        registry
    }

    /// Registry with no targets, for assembling custom sets.
    pub fn empty() -> Self {
        EmitterRegistry { emitters: vec![] }
    }

    pub fn register(&mut self, emitter: Box<dyn Emitter>) -> Result<(), EmitError> {
        let target = emitter.target();
        if target.name.is_empty()
            || target.name.chars().any(|c| c.is_whitespace() || c.is_uppercase())
        {
            return Err(EmitError::InvalidTargetName(target.name));
        }
        if self.emitters.iter().any(|e| e.target().name == target.name) {
            return Err(EmitError::DuplicateTarget(target.name));
        }
        self.emitters.push(emitter);
        Ok(())
    }

    /// Registered targets in registration order.
    pub fn list_targets(&self) -> Vec<EmitterTarget> {
        self.emitters.iter().map(|e| e.target()).collect()
    }

    /// Translate a validated, enriched model for the named target.
    pub fn emit(&self, model: &DashboardModel, target: &str) -> Result<EmitResult, EmitError> {
        let emitter = self
            .emitters
            .iter()
            .find(|e| e.target().name == target)
            .ok_or_else(|| EmitError::UnknownTarget {
                name: target.to_string(),
                available: self.list_targets().into_iter().map(|t| t.name).collect(),
            })?;
        ensure_valid(model)?;
        ensure_enriched(model)?;
        emitter.emit(model)
    }
}

impl Default for EmitterRegistry {
    fn default() -> Self {
        EmitterRegistry::with_builtins()
    }
}

/// Every KPI must be claimed by some visualization before emission.
pub fn ensure_enriched(model: &DashboardModel) -> Result<(), EmitError> {
    let unclaimed = model.unclaimed_kpis();
    if unclaimed.is_empty() {
        Ok(())
    } else {
        Err(EmitError::NotEnriched {
            unclaimed: unclaimed.into_iter().map(str::to_string).collect(),
        })
    }
}
