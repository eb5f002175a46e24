//! Shared fixtures for unit tests.

use crate::model::{DashboardModel, Datasource, Kpi, Query, QueryKind, StructureKind};

/// The worked two-KPI reliability example used throughout the tests.
pub(crate) fn fig1_model() -> DashboardModel {
    DashboardModel {
        title: "Node Exporter".into(),
        structure: StructureKind::Categorical,
        datasource: Datasource {
            uid: "cc893e83".into(),
            kind: "prometheus".into(),
        },
        kpis: vec![
            Kpi {
                name: "EstimatedErrorTime".into(),
                unit: "s".into(),
                category: Some("Reliability".into()),
                target: None,
                custom_group: None,
                queries: vec![Query {
                    body: "node_timex_estimated_error_seconds".into(),
                    kind: QueryKind::Temporal,
                }],
            },
            Kpi {
                name: "MaximumErrorTime".into(),
                unit: "s".into(),
                category: Some("Reliability".into()),
                target: None,
                custom_group: None,
                queries: vec![Query {
                    body: "node_timex_maxerror_seconds".into(),
                    kind: QueryKind::Temporal,
                }],
            },
        ],
        visualizations: vec![],
    }
}
