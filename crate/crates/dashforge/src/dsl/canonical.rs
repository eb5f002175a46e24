//! The canonical interchange document: a machine-readable JSON encoding of a
//! model, used to hand enriched models between pipeline stages and tools.
//!
//! Top-level keys appear in a fixed order (`formatVersion`, `title`,
//! `structure`, `datasource`, `kpis`, `visualizations`) and output bytes are
//! deterministic, so documents can be compared byte-for-byte. Loading is
//! strict: unknown or mistyped keys are rejected with the JSON path of the
//! offending element.

use serde::Serialize;
use serde_json::Value;

use crate::model::{
    ensure_valid, DashboardModel, Datasource, InvalidModel, Kpi, Query, QueryKind, StructureKind,
    Visualization, VisualizationType,
};

pub const FORMAT_VERSION: u64 = 1;

/// A document failed to match the interchange schema.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("schema error at `{path}`: {message}")]
pub struct SchemaError {
    /// JSON path of the offending element, e.g. `kpis[1].queries`.
    pub path: String,
    pub message: String,
}

impl SchemaError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Serialize)]
struct DocRoot<'a> {
    #[serde(rename = "formatVersion")]
    format_version: u64,
    title: &'a str,
    structure: &'a str,
    datasource: DocDatasource<'a>,
    kpis: Vec<DocKpi<'a>>,
    visualizations: Vec<DocVisualization<'a>>,
}

#[derive(Serialize)]
struct DocDatasource<'a> {
    uid: &'a str,
    #[serde(rename = "type")]
    kind: &'a str,
}

#[derive(Serialize)]
struct DocKpi<'a> {
    name: &'a str,
    unit: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    category: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<&'a str>,
    queries: Vec<DocQuery<'a>>,
}

#[derive(Serialize)]
struct DocQuery<'a> {
    kind: &'a str,
    body: &'a str,
}

#[derive(Serialize)]
struct DocVisualization<'a> {
    id: &'a str,
    #[serde(rename = "type")]
    vtype: &'a str,
    kpis: &'a [String],
    #[serde(rename = "groupKey")]
    group_key: &'a str,
    manual: bool,
}

/// Serialize a validated model as deterministic interchange bytes.
pub fn dump_canonical(model: &DashboardModel) -> Result<Vec<u8>, InvalidModel> {
    ensure_valid(model)?;
    let doc = DocRoot {
        format_version: FORMAT_VERSION,
        title: &model.title,
        structure: model.structure.as_str(),
        datasource: DocDatasource {
            uid: &model.datasource.uid,
            kind: &model.datasource.kind,
        },
        kpis: model
            .kpis
            .iter()
            .map(|k| DocKpi {
                name: &k.name,
                unit: &k.unit,
                category: k.category.as_deref(),
                target: k.target.as_deref(),
                group: k.custom_group.as_deref(),
                queries: k
                    .queries
                    .iter()
                    .map(|q| DocQuery {
                        kind: match q.kind {
                            QueryKind::Temporal => "temporal",
                            QueryKind::Instant => "instant",
                        },
                        body: &q.body,
                    })
                    .collect(),
            })
            .collect(),
        visualizations: model
            .visualizations
            .iter()
            .map(|v| DocVisualization {
                id: &v.id,
                vtype: v.vtype.as_str(),
                kpis: &v.kpi_names,
                group_key: &v.group_key,
                manual: v.manual,
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("interchange document serializes");
    bytes.push(b'\n');
    Ok(bytes)
}

/// Parse interchange bytes back into a model.
///
/// Schema checks only; run `validate_model` afterwards for semantic
/// conformance.
pub fn load_canonical(document: &[u8]) -> Result<DashboardModel, SchemaError> {
    let value: Value = serde_json::from_slice(document)
        .map_err(|e| SchemaError::new("", format!("invalid JSON: {e}")))?;
    let root = Walk::root(&value);
    let obj = root.object()?;
    obj.allow_keys(&[
        "formatVersion",
        "title",
        "structure",
        "datasource",
        "kpis",
        "visualizations",
    ])?;

    if let Some(version) = obj.optional("formatVersion") {
        let version = version.u64()?;
        if version.1 != FORMAT_VERSION {
            return Err(SchemaError::new(
                version.0,
                format!("unsupported format version {} (expected {FORMAT_VERSION})", version.1),
            ));
        }
    }

    let title = obj.required("title")?.string()?;
    let structure = obj.required("structure")?;
    let structure = match structure.string()?.as_str() {
        "categorical" => StructureKind::Categorical,
        "target" => StructureKind::Target,
        "custom" => StructureKind::Custom,
        other => {
            return Err(SchemaError::new(
                structure.path,
                format!("expected \"categorical\", \"target\", or \"custom\", got \"{other}\""),
            ))
        }
    };

    let ds = obj.required("datasource")?;
    let ds_obj = ds.object()?;
    ds_obj.allow_keys(&["uid", "type"])?;
    let datasource = Datasource {
        uid: ds_obj.required("uid")?.string()?,
        kind: ds_obj.required("type")?.string()?,
    };

    let mut kpis = Vec::new();
    for item in obj.required("kpis")?.array()? {
        kpis.push(load_kpi(&item)?);
    }
    let mut visualizations = Vec::new();
    for item in obj.required("visualizations")?.array()? {
        visualizations.push(load_visualization(&item)?);
    }

    Ok(DashboardModel {
        title,
        structure,
        datasource,
        kpis,
        visualizations,
    })
}

fn load_kpi(walk: &Walk<'_>) -> Result<Kpi, SchemaError> {
    let obj = walk.object()?;
    obj.allow_keys(&["name", "unit", "category", "target", "group", "queries"])?;
    let mut queries = Vec::new();
    for item in obj.required("queries")?.array()? {
        let q = item.object()?;
        q.allow_keys(&["kind", "body"])?;
        let kind = q.required("kind")?;
        let kind = match kind.string()?.as_str() {
            "temporal" => QueryKind::Temporal,
            "instant" => QueryKind::Instant,
            other => {
                return Err(SchemaError::new(
                    kind.path,
                    format!("expected \"temporal\" or \"instant\", got \"{other}\""),
                ))
            }
        };
        queries.push(Query {
            kind,
            body: q.required("body")?.string()?,
        });
    }
    Ok(Kpi {
        name: obj.required("name")?.string()?,
        unit: obj.required("unit")?.string()?,
        category: obj.optional("category").map(|w| w.string()).transpose()?,
        target: obj.optional("target").map(|w| w.string()).transpose()?,
        custom_group: obj.optional("group").map(|w| w.string()).transpose()?,
        queries,
    })
}

fn load_visualization(walk: &Walk<'_>) -> Result<Visualization, SchemaError> {
    let obj = walk.object()?;
    obj.allow_keys(&["id", "type", "kpis", "groupKey", "manual"])?;
    let vtype = obj.required("type")?;
    let vtype = match vtype.string()?.as_str() {
        "timeseries" => VisualizationType::Timeseries,
        "gauge" => VisualizationType::Gauge,
        "barchart" => VisualizationType::BarChart,
        other => {
            return Err(SchemaError::new(
                vtype.path,
                format!("expected \"timeseries\", \"gauge\", or \"barchart\", got \"{other}\""),
            ))
        }
    };
    let mut kpi_names = Vec::new();
    for item in obj.required("kpis")?.array()? {
        kpi_names.push(item.string()?);
    }
    Ok(Visualization {
        id: obj.required("id")?.string()?,
        vtype,
        kpi_names,
        group_key: obj.required("groupKey")?.string()?,
        manual: obj.required("manual")?.bool()?,
    })
}

/// A JSON value paired with the path that reaches it, for error reporting.
struct Walk<'a> {
    value: &'a Value,
    path: String,
}

struct WalkObject<'a> {
    map: &'a serde_json::Map<String, Value>,
    path: String,
}

impl<'a> Walk<'a> {
    fn root(value: &'a Value) -> Self {
        Walk {
            value,
            path: String::new(),
        }
    }

    fn type_name(&self) -> &'static str {
        match self.value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        }
    }

    fn object(&self) -> Result<WalkObject<'a>, SchemaError> {
        match self.value {
            Value::Object(map) => Ok(WalkObject {
                map,
                path: self.path.clone(),
            }),
            _ => Err(SchemaError::new(
                &self.path,
                format!("expected object, got {}", self.type_name()),
            )),
        }
    }

    fn array(&self) -> Result<Vec<Walk<'a>>, SchemaError> {
        match self.value {
            Value::Array(items) => Ok(items
                .iter()
                .enumerate()
                .map(|(i, value)| Walk {
                    value,
                    path: format!("{}[{i}]", self.path),
                })
                .collect()),
            _ => Err(SchemaError::new(
                &self.path,
                format!("expected array, got {}", self.type_name()),
            )),
        }
    }

    fn string(&self) -> Result<String, SchemaError> {
        match self.value {
            Value::String(s) => Ok(s.clone()),
            _ => Err(SchemaError::new(
                &self.path,
                format!("expected string, got {}", self.type_name()),
            )),
        }
    }

    fn bool(&self) -> Result<bool, SchemaError> {
        match self.value {
            Value::Bool(b) => Ok(*b),
            _ => Err(SchemaError::new(
                &self.path,
                format!("expected boolean, got {}", self.type_name()),
            )),
        }
    }

    fn u64(&self) -> Result<(String, u64), SchemaError> {
        match self.value.as_u64() {
            Some(n) => Ok((self.path.clone(), n)),
            None => Err(SchemaError::new(
                &self.path,
                format!("expected non-negative integer, got {}", self.type_name()),
            )),
        }
    }
}

impl<'a> WalkObject<'a> {
    fn child_path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn required(&self, key: &str) -> Result<Walk<'a>, SchemaError> {
        self.optional(key)
            .ok_or_else(|| SchemaError::new(self.child_path(key), "missing required key"))
    }

    fn optional(&self, key: &str) -> Option<Walk<'a>> {
        self.map.get(key).map(|value| Walk {
            value,
            path: self.child_path(key),
        })
    }

    fn allow_keys(&self, allowed: &[&str]) -> Result<(), SchemaError> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(SchemaError::new(
                    self.child_path(key),
                    "unknown key".to_string(),
                ));
            }
        }
        Ok(())
    }
}
