//! dashforge compiles a textual list of KPI definitions into a
//! technology-agnostic dashboard model, automatically assigns
//! visualizations, and renders a ready-to-import document for a target
//! dashboard platform (Grafana ships in the box).
//!
//! The pipeline has three independent phases:
//!
//! 1. **Definition** — [`dsl::parse_model`] turns `.dash` text into a
//!    [`model::DashboardModel`]; [`model::validate_model`] checks it against
//!    the metamodel invariants.
//! 2. **Enrichment** — [`enrich::enrich`] partitions KPIs by group and unit
//!    into visualizations, picking each one's type from its queries.
//! 3. **Generation** — [`emit::EmitterRegistry`] translates the enriched
//!    model for a target platform, e.g. Grafana dashboard JSON.
//!
//! Each phase is a pure function over immutable values, so models can be
//! serialized ([`dsl::serialize_model`], [`dsl::dump_canonical`]), edited,
//! and re-run through any phase in any order.

pub mod cli;
pub mod dsl;
pub mod emit;
pub mod enrich;
pub mod model;

#[cfg(test)]
pub(crate) mod testdata;
