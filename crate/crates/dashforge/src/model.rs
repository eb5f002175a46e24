//! The technology-agnostic dashboard metamodel.
//!
//! A [`DashboardModel`] is the central artifact of the pipeline: it names the
//! KPIs to display, the datasource their queries run against, and (after
//! enrichment) the visualizations that present them. All types here are plain
//! immutable values; semantic conformance is checked by [`validate_model`]
//! rather than enforced by constructors, so partially-broken models can be
//! loaded, diagnosed, and repaired.

use std::collections::HashMap;
use std::fmt;

/// Where KPI queries are executed, e.g. a Prometheus instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Datasource {
    /// Opaque identifier the target platform uses to resolve the datasource.
    pub uid: String,
    /// Datasource type, e.g. `"prometheus"`.
    pub kind: String,
}

/// The dimension of a query's result set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryKind {
    /// Results span a time dimension.
    Temporal,
    /// A single point-in-time value.
    Instant,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryKind::Temporal => f.write_str("temporal"),
            QueryKind::Instant => f.write_str("instant"),
        }
    }
}

/// An opaque query against the model's datasource.
///
/// The body is never interpreted; any query-language validation belongs to
/// the target platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub body: String,
    pub kind: QueryKind,
}

/// A named indicator with a unit of measure and the queries that extract it.
///
/// A KPI may carry all three grouping dimensions at once; the model's
/// [`StructureKind`] selects which one is active.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kpi {
    pub name: String,
    /// Unit-of-measure label, e.g. `"s"`. Empty means dimensionless.
    pub unit: String,
    pub category: Option<String>,
    pub target: Option<String>,
    pub custom_group: Option<String>,
    pub queries: Vec<Query>,
}

/// The dimension along which KPIs are grouped into visualizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Categorical,
    Target,
    Custom,
}

impl StructureKind {
    /// The DSL / interchange spelling of the variant.
    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Categorical => "categorical",
            StructureKind::Target => "target",
            StructureKind::Custom => "custom",
        }
    }

    /// Name of the KPI field this structure groups by.
    pub fn dimension_name(self) -> &'static str {
        match self {
            StructureKind::Categorical => "category",
            StructureKind::Target => "target",
            StructureKind::Custom => "group",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a visualization renders its KPIs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VisualizationType {
    Timeseries,
    Gauge,
    BarChart,
}

impl VisualizationType {
    pub fn as_str(self) -> &'static str {
        match self {
            VisualizationType::Timeseries => "timeseries",
            VisualizationType::Gauge => "gauge",
            VisualizationType::BarChart => "barchart",
        }
    }
}

impl fmt::Display for VisualizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A set of KPIs rendered together under a group label.
///
/// `manual` distinguishes operator-authored visualizations, which enrichment
/// preserves verbatim, from generated ones, which it recomputes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visualization {
    pub id: String,
    pub vtype: VisualizationType,
    pub kpi_names: Vec<String>,
    pub group_key: String,
    pub manual: bool,
}

/// The root of the metamodel: everything needed to render one dashboard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DashboardModel {
    pub title: String,
    pub structure: StructureKind,
    pub datasource: Datasource,
    pub kpis: Vec<Kpi>,
    /// Empty before enrichment.
    pub visualizations: Vec<Visualization>,
}

impl DashboardModel {
    /// Look up a KPI by name.
    pub fn kpi(&self, name: &str) -> Option<&Kpi> {
        self.kpis.iter().find(|k| k.name == name)
    }

    /// Names of KPIs not referenced by any visualization.
    pub fn unclaimed_kpis(&self) -> Vec<&str> {
        self.kpis
            .iter()
            .filter(|k| {
                !self
                    .visualizations
                    .iter()
                    .any(|v| v.kpi_names.contains(&k.name))
            })
            .map(|k| k.name.as_str())
            .collect()
    }
}

/// Stable machine-readable diagnostic codes reported by [`validate_model`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagnosticCode {
    EmptyTitle,
    EmptyDatasourceUid,
    DatasourceUidWhitespace,
    EmptyDatasourceType,
    EmptyKpiName,
    DuplicateKpi,
    MissingGroupDimension,
    NoQueries,
    EmptyQueryBody,
    EmptyVisId,
    DuplicateVisId,
    EmptyVisKpis,
    DanglingKpiRef,
    DuplicateVisKpi,
    KpiInMultipleVis,
    EmptyModel,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::EmptyTitle => "EMPTY_TITLE",
            DiagnosticCode::EmptyDatasourceUid => "EMPTY_DATASOURCE_UID",
            DiagnosticCode::DatasourceUidWhitespace => "DATASOURCE_UID_WHITESPACE",
            DiagnosticCode::EmptyDatasourceType => "EMPTY_DATASOURCE_TYPE",
            DiagnosticCode::EmptyKpiName => "EMPTY_KPI_NAME",
            DiagnosticCode::DuplicateKpi => "DUPLICATE_KPI",
            DiagnosticCode::MissingGroupDimension => "MISSING_GROUP_DIMENSION",
            DiagnosticCode::NoQueries => "NO_QUERIES",
            DiagnosticCode::EmptyQueryBody => "EMPTY_QUERY_BODY",
            DiagnosticCode::EmptyVisId => "EMPTY_VIS_ID",
            DiagnosticCode::DuplicateVisId => "DUPLICATE_VIS_ID",
            DiagnosticCode::EmptyVisKpis => "EMPTY_VIS_KPIS",
            DiagnosticCode::DanglingKpiRef => "DANGLING_KPI_REF",
            DiagnosticCode::DuplicateVisKpi => "DUPLICATE_VIS_KPI",
            DiagnosticCode::KpiInMultipleVis => "KPI_IN_MULTIPLE_VIS",
            DiagnosticCode::EmptyModel => "EMPTY_MODEL",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One violated invariant, pointing at the offending model element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// Path into the model, e.g. `kpis[1].name` or `datasource.uid`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.code, self.location, self.message)
    }
}

/// Outcome of [`validate_model`]: a model is valid iff `errors` is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// A model failed validation where a valid one was required.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("model has {} validation error(s); first: {}", .0.errors.len(), .0.errors.first().map(|d| d.to_string()).unwrap_or_default())]
pub struct InvalidModel(pub ValidationReport);

/// A KPI lacks the grouping dimension required by the model structure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("KPI \"{kpi}\" has no {} but structure is {structure}", structure.dimension_name())]
pub struct MissingDimension {
    pub kpi: String,
    pub structure: StructureKind,
}

/// The group label a KPI falls under for the given structure.
pub fn group_label(kpi: &Kpi, structure: StructureKind) -> Result<&str, MissingDimension> {
    let field = match structure {
        StructureKind::Categorical => &kpi.category,
        StructureKind::Target => &kpi.target,
        StructureKind::Custom => &kpi.custom_group,
    };
    field.as_deref().ok_or_else(|| MissingDimension {
        kpi: kpi.name.clone(),
        structure,
    })
}

/// Check every model invariant and report each violation with a stable code.
///
/// Diagnostics come out in model declaration order (title, datasource, KPIs,
/// visualizations, model-level), ties broken by code, so identical models
/// always yield identical reports.
pub fn validate_model(model: &DashboardModel) -> ValidationReport {
    // (element ordinal, diagnostic); ordinal follows declaration order.
    let mut errors: Vec<(usize, Diagnostic)> = Vec::new();
    let mut warnings: Vec<(usize, Diagnostic)> = Vec::new();
    let push = |list: &mut Vec<(usize, Diagnostic)>,
                    ordinal: usize,
                    code: DiagnosticCode,
                    location: String,
                    message: String| {
        list.push((
            ordinal,
            Diagnostic {
                code,
                location,
                message,
            },
        ));
    };

    if model.title.is_empty() {
        push(
            &mut errors,
            0,
            DiagnosticCode::EmptyTitle,
            "title".into(),
            "dashboard title must not be empty".into(),
        );
    }

    let ds = &model.datasource;
    if ds.uid.is_empty() {
        push(
            &mut errors,
            1,
            DiagnosticCode::EmptyDatasourceUid,
            "datasource.uid".into(),
            "datasource uid must not be empty".into(),
        );
    } else if ds.uid.chars().any(char::is_whitespace) {
        push(
            &mut errors,
            1,
            DiagnosticCode::DatasourceUidWhitespace,
            "datasource.uid".into(),
            format!("datasource uid \"{}\" must not contain whitespace", ds.uid),
        );
    }
    if ds.kind.is_empty() {
        push(
            &mut errors,
            1,
            DiagnosticCode::EmptyDatasourceType,
            "datasource.type".into(),
            "datasource type must not be empty".into(),
        );
    }

    let kpi_base = 2;
    let mut seen_names: HashMap<&str, usize> = HashMap::new();
    for (i, kpi) in model.kpis.iter().enumerate() {
        let ordinal = kpi_base + i;
        if kpi.name.is_empty() {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::EmptyKpiName,
                format!("kpis[{i}].name"),
                "KPI name must not be empty".into(),
            );
        }
        if let Some(first) = seen_names.get(kpi.name.as_str()) {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::DuplicateKpi,
                format!("kpis[{i}].name"),
                format!(
                    "KPI name \"{}\" already declared at kpis[{first}]",
                    kpi.name
                ),
            );
        } else {
            seen_names.insert(kpi.name.as_str(), i);
        }
        if let Err(e) = group_label(kpi, model.structure) {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::MissingGroupDimension,
                format!("kpis[{i}]"),
                e.to_string(),
            );
        }
        if kpi.queries.is_empty() {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::NoQueries,
                format!("kpis[{i}].queries"),
                format!("KPI \"{}\" must declare at least one query", kpi.name),
            );
        }
        for (j, query) in kpi.queries.iter().enumerate() {
            if query.body.trim().is_empty() {
                push(
                    &mut errors,
                    ordinal,
                    DiagnosticCode::EmptyQueryBody,
                    format!("kpis[{i}].queries[{j}]"),
                    format!("query body of KPI \"{}\" must not be blank", kpi.name),
                );
            }
        }
    }

    let vis_base = kpi_base + model.kpis.len();
    let mut seen_ids: HashMap<&str, usize> = HashMap::new();
    let mut claimed: HashMap<&str, usize> = HashMap::new();
    for (v, vis) in model.visualizations.iter().enumerate() {
        let ordinal = vis_base + v;
        if vis.id.is_empty() {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::EmptyVisId,
                format!("visualizations[{v}].id"),
                "visualization id must not be empty".into(),
            );
        }
        if let Some(first) = seen_ids.get(vis.id.as_str()) {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::DuplicateVisId,
                format!("visualizations[{v}].id"),
                format!(
                    "visualization id \"{}\" already declared at visualizations[{first}]",
                    vis.id
                ),
            );
        } else {
            seen_ids.insert(vis.id.as_str(), v);
        }
        if vis.kpi_names.is_empty() {
            push(
                &mut errors,
                ordinal,
                DiagnosticCode::EmptyVisKpis,
                format!("visualizations[{v}].kpis"),
                format!("visualization \"{}\" must reference at least one KPI", vis.id),
            );
        }
        let mut local: HashMap<&str, usize> = HashMap::new();
        for (k, name) in vis.kpi_names.iter().enumerate() {
            if model.kpi(name).is_none() {
                push(
                    &mut errors,
                    ordinal,
                    DiagnosticCode::DanglingKpiRef,
                    format!("visualizations[{v}].kpis[{k}]"),
                    format!(
                        "visualization \"{}\" references unknown KPI \"{name}\"",
                        vis.id
                    ),
                );
            }
            if local.contains_key(name.as_str()) {
                push(
                    &mut errors,
                    ordinal,
                    DiagnosticCode::DuplicateVisKpi,
                    format!("visualizations[{v}].kpis[{k}]"),
                    format!(
                        "visualization \"{}\" lists KPI \"{name}\" more than once",
                        vis.id
                    ),
                );
            } else {
                local.insert(name.as_str(), k);
                if let Some(other) = claimed.get(name.as_str()) {
                    push(
                        &mut errors,
                        ordinal,
                        DiagnosticCode::KpiInMultipleVis,
                        format!("visualizations[{v}].kpis[{k}]"),
                        format!(
                            "KPI \"{name}\" already claimed by visualizations[{other}]"
                        ),
                    );
                } else {
                    claimed.insert(name.as_str(), v);
                }
            }
        }
    }

    if model.kpis.is_empty() && model.visualizations.is_empty() {
        push(
            &mut warnings,
            vis_base,
            DiagnosticCode::EmptyModel,
            "model".into(),
            "model declares no KPIs and no visualizations".into(),
        );
    }

    let finish = |mut list: Vec<(usize, Diagnostic)>| -> Vec<Diagnostic> {
        list.sort_by(|(oa, da), (ob, db)| {
            oa.cmp(ob)
                .then_with(|| da.code.as_str().cmp(db.code.as_str()))
                .then_with(|| da.location.cmp(&db.location))
        });
        list.into_iter().map(|(_, d)| d).collect()
    };
    ValidationReport {
        errors: finish(errors),
        warnings: finish(warnings),
    }
}

/// Validate and convert the outcome into a `Result`.
pub fn ensure_valid(model: &DashboardModel) -> Result<(), InvalidModel> {
    let report = validate_model(model);
    if report.is_valid() {
        Ok(())
    } else {
        Err(InvalidModel(report))
    }
}
