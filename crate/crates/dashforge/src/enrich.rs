//! Automatic definition of KPI visualizations.
//!
//! Given a bare validated model, [`enrich`] partitions the KPIs by their
//! active group label and unit of measure, picks a visualization type from
//! the member queries' dimensions, and derives an id from the member names.
//! Operator-authored (manual) visualizations pass through untouched and the
//! KPIs they claim are excluded from generation, so a hand-tuned dashboard
//! survives regeneration.

use std::collections::HashSet;

use indexmap::IndexMap;

use crate::model::{
    ensure_valid, group_label, DashboardModel, InvalidModel, Kpi, QueryKind, Visualization,
    VisualizationType,
};

/// Partition key for generated visualizations: one group label, one unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupKey {
    pub label: String,
    /// May be empty (dimensionless KPIs group together).
    pub unit: String,
}

/// The input slice of KPIs was empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("operation requires at least one KPI")]
pub struct EmptyInput;

/// Group the model's unclaimed KPIs by (group label, unit).
///
/// Buckets are ordered by the first appearance of their key in KPI
/// declaration order, and KPIs keep declaration order within each bucket.
/// KPIs already claimed by a manual visualization are skipped.
pub fn partition_kpis(
    model: &DashboardModel,
) -> Result<Vec<(GroupKey, Vec<&Kpi>)>, InvalidModel> {
    ensure_valid(model)?;
    let claimed: HashSet<&str> = model
        .visualizations
        .iter()
        .filter(|v| v.manual)
        .flat_map(|v| v.kpi_names.iter().map(String::as_str))
        .collect();

    let mut buckets: IndexMap<GroupKey, Vec<&Kpi>> = IndexMap::new();
    for kpi in &model.kpis {
        if claimed.contains(kpi.name.as_str()) {
            continue;
        }
        // validation guarantees the dimension is present
        let label = group_label(kpi, model.structure)
            .expect("validated model has the structure dimension on every KPI");
        let key = GroupKey {
            label: label.to_string(),
            unit: kpi.unit.clone(),
        };
        buckets.entry(key).or_default().push(kpi);
    }
    Ok(buckets.into_iter().collect())
}

/// Pick the visualization type for a set of KPIs from their query kinds:
/// any temporal query forces a timeseries, otherwise a gauge. Bar charts are
/// never inferred; they stay available for manual assignment.
pub fn select_visualization_type(kpis: &[&Kpi]) -> Result<VisualizationType, EmptyInput> {
    if kpis.is_empty() {
        return Err(EmptyInput);
    }
    let temporal = kpis
        .iter()
        .flat_map(|k| &k.queries)
        .any(|q| q.kind == QueryKind::Temporal);
    Ok(if temporal {
        VisualizationType::Timeseries
    } else {
        VisualizationType::Gauge
    })
}

/// Compose a visualization id from the member KPI names, joined by `_`.
///
/// On a collision with `existing`, the smallest free numeric suffix
/// (`_2`, `_3`, …) is appended.
pub fn make_visualization_id(
    kpis: &[&Kpi],
    existing: &HashSet<String>,
) -> Result<String, EmptyInput> {
    if kpis.is_empty() {
        return Err(EmptyInput);
    }
    let base = kpis
        .iter()
        .map(|k| k.name.as_str())
        .collect::<Vec<_>>()
        .join("_");
    if !existing.contains(&base) {
        return Ok(base);
    }
    let mut suffix: u64 = 2;
    loop {
        let candidate = format!("{base}_{suffix}");
        if !existing.contains(&candidate) {
            return Ok(candidate);
        }
        suffix += 1;
    }
}

/// Produce an enriched copy of the model: manual visualizations first,
/// unchanged and in their original order, then one generated visualization
/// per (group label, unit) bucket of the remaining KPIs.
///
/// Enrichment is deterministic and idempotent; the input is not mutated.
pub fn enrich(model: &DashboardModel) -> Result<DashboardModel, InvalidModel> {
    let buckets = partition_kpis(model)?;

    let mut visualizations: Vec<Visualization> = model
        .visualizations
        .iter()
        .filter(|v| v.manual)
        .cloned()
        .collect();
    let mut ids: HashSet<String> = visualizations.iter().map(|v| v.id.clone()).collect();

    for (key, kpis) in buckets {
        let vtype =
            select_visualization_type(&kpis).expect("partition buckets are never empty");
        let id = make_visualization_id(&kpis, &ids).expect("partition buckets are never empty");
        ids.insert(id.clone());
        visualizations.push(Visualization {
            id,
            vtype,
            kpi_names: kpis.iter().map(|k| k.name.clone()).collect(),
            group_key: key.label,
            manual: false,
        });
    }

    Ok(DashboardModel {
        visualizations,
        ..model.clone()
    })
}
