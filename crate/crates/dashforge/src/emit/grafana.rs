//! Grafana translation rules: groups become rows, visualizations become
//! panels, queries become panel targets.
//!
//! The output is a dashboard exchange document that Grafana's
//! "Import dashboard" accepts unchanged. Emission is byte-deterministic:
//! object keys are sorted, the dashboard uid is a hash of the title, and the
//! document ends with a single LF.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::{ensure_enriched, EmitError, EmitResult};
use crate::model::{ensure_valid, DashboardModel, Visualization};

/// Grafana pins dashboards to this schema version on export.
pub const SCHEMA_VERSION: u64 = 39;

/// Width of the Grafana layout grid, in columns.
pub const GRID_COLUMNS: u32 = 24;

const PANEL_WIDTH: u32 = 12;
const PANEL_HEIGHT: u32 = 8;
const ROW_HEIGHT: u32 = 1;
const PANELS_PER_LINE: u32 = GRID_COLUMNS / PANEL_WIDTH;

/// Placement of one panel on Grafana's 24-column grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPosition {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl GridPosition {
    fn to_json(self) -> Value {
        json!({"h": self.h, "w": self.w, "x": self.x, "y": self.y})
    }

    /// True when two placements share any grid cell.
    pub fn overlaps(&self, other: &GridPosition) -> bool {
        self.x < other.x + other.w
            && other.x < self.x + self.w
            && self.y < other.y + other.h
            && other.y < self.y + self.h
    }
}

/// Lay out row headers and panels.
///
/// Row headers span the full grid width; within a group, panels go
/// left-to-right two per line and wrap. Positions come back in walk order:
/// each group's row header, then its panels in visualization order.
pub fn compute_grid(
    visualizations: &[Visualization],
    groups: &[&str],
) -> Result<Vec<GridPosition>, EmitError> {
    for vis in visualizations {
        if !groups.contains(&vis.group_key.as_str()) {
            return Err(EmitError::InconsistentGroups {
                vis_id: vis.id.clone(),
                group_key: vis.group_key.clone(),
            });
        }
    }

    let mut positions = Vec::new();
    let mut y = 0;
    for group in groups {
        positions.push(GridPosition {
            x: 0,
            y,
            w: GRID_COLUMNS,
            h: ROW_HEIGHT,
        });
        y += ROW_HEIGHT;
        let mut column = 0;
        let mut line_open = false;
        for _ in visualizations.iter().filter(|v| v.group_key == *group) {
            if column == PANELS_PER_LINE {
                y += PANEL_HEIGHT;
                column = 0;
            }
            positions.push(GridPosition {
                x: column * PANEL_WIDTH,
                y,
                w: PANEL_WIDTH,
                h: PANEL_HEIGHT,
            });
            column += 1;
            line_open = true;
        }
        if line_open {
            y += PANEL_HEIGHT;
        }
    }
    Ok(positions)
}

/// Distinct group keys in order of first appearance.
fn distinct_groups(visualizations: &[Visualization]) -> Vec<&str> {
    let mut groups: Vec<&str> = Vec::new();
    for vis in visualizations {
        if !groups.contains(&vis.group_key.as_str()) {
            groups.push(&vis.group_key);
        }
    }
    groups
}

/// Deterministic dashboard uid: the first 12 hex chars of a hash of the
/// title, so regenerating a dashboard overwrites its previous import.
fn dashboard_uid(title: &str) -> String {
    let digest = Sha256::digest(title.as_bytes());
    let mut uid = String::with_capacity(12);
    for byte in digest.iter().take(6) {
        uid.push_str(&format!("{byte:02x}"));
    }
    uid
}

/// Grafana-style target letters: A..Z, AA, AB, ...
fn ref_id(index: usize) -> String {
    let mut n = index + 1;
    let mut letters = Vec::new();
    while n > 0 {
        n -= 1;
        letters.push(b'A' + (n % 26) as u8);
        n /= 26;
    }
    letters.reverse();
    String::from_utf8(letters).expect("ASCII letters")
}

/// Translate a validated, enriched model into a Grafana dashboard document.
pub fn emit_grafana(model: &DashboardModel) -> Result<EmitResult, EmitError> {
    ensure_valid(model)?;
    ensure_enriched(model)?;

    let mut warnings = Vec::new();
    if model.kpis.is_empty() {
        warnings.push("EMPTY_DASHBOARD model declares no KPIs; emitting an empty dashboard".into());
    }

    let groups = distinct_groups(&model.visualizations);
    let grid = compute_grid(&model.visualizations, &groups)?;
    let mut grid = grid.into_iter();

    let mut panels: Vec<Value> = Vec::new();
    for group in &groups {
        let row_pos = grid.next().expect("one position per row header");
        panels.push(json!({
            "gridPos": row_pos.to_json(),
            "title": group,
            "type": "row",
        }));
        for vis in model.visualizations.iter().filter(|v| v.group_key == *group) {
            let pos = grid.next().expect("one position per panel");
            panels.push(panel_json(model, vis, pos, &mut warnings));
        }
    }

    let document = json!({
        "panels": panels,
        "schemaVersion": SCHEMA_VERSION,
        "title": model.title,
        "uid": dashboard_uid(&model.title),
    });
    let mut bytes = serde_json::to_vec_pretty(&document).expect("document serializes");
    bytes.push(b'\n');
    Ok(EmitResult {
        document: bytes,
        warnings,
    })
}

fn panel_json(
    model: &DashboardModel,
    vis: &Visualization,
    pos: GridPosition,
    warnings: &mut Vec<String>,
) -> Value {
    let members: Vec<_> = vis
        .kpi_names
        .iter()
        .filter_map(|name| model.kpi(name))
        .collect();

    let mut units: Vec<&str> = members.iter().map(|k| k.unit.as_str()).collect();
    units.sort_unstable();
    units.dedup();
    let unit = if units.len() == 1 {
        units[0]
    } else {
        warnings.push(format!(
            "MIXED_UNITS visualization \"{}\" mixes units [{}]; emitting an empty unit",
            vis.id,
            units.join(", ")
        ));
        ""
    };

    let mut targets: Vec<Value> = Vec::new();
    for kpi in &members {
        for query in &kpi.queries {
            targets.push(json!({
                "expr": query.body,
                "legendFormat": kpi.name,
                "refId": ref_id(targets.len()),
            }));
        }
    }

    let mut panel = Map::new();
    panel.insert(
        "datasource".into(),
        json!({"type": model.datasource.kind, "uid": model.datasource.uid}),
    );
    panel.insert("fieldConfig".into(), json!({"defaults": {"unit": unit}}));
    panel.insert("gridPos".into(), pos.to_json());
    panel.insert("targets".into(), Value::Array(targets));
    panel.insert("title".into(), json!(vis.id));
    panel.insert("type".into(), json!(vis.vtype.as_str()));
    Value::Object(panel)
}
