//! Canonical pretty-printer for the `.dash` syntax.
//!
//! Output is the normal form the parser round-trips exactly: two-space
//! indent, LF newlines, KPIs written top-level with inline attributes (group
//! blocks from the source are flattened), one query or attribute per line.

use crate::model::{ensure_valid, DashboardModel, InvalidModel, Kpi, Visualization};

/// Render a validated model as canonical DSL text.
///
/// `parse_model(serialize_model(m))` reproduces `m` field-for-field, and a
/// second serialize pass is a fixed point.
pub fn serialize_model(model: &DashboardModel) -> Result<String, InvalidModel> {
    ensure_valid(model)?;
    let mut out = String::new();
    out.push_str(&format!("dashboard {} {{\n", quote(&model.title)));
    out.push_str(&format!("  structure {}\n", model.structure));
    out.push_str("  datasource {\n");
    out.push_str(&format!("    uid {}\n", quote(&model.datasource.uid)));
    out.push_str(&format!("    type {}\n", quote(&model.datasource.kind)));
    out.push_str("  }\n");
    for kpi in &model.kpis {
        print_kpi(&mut out, kpi);
    }
    for vis in &model.visualizations {
        print_visualization(&mut out, vis);
    }
    out.push_str("}\n");
    Ok(out)
}

fn print_kpi(out: &mut String, kpi: &Kpi) {
    out.push_str(&format!("  kpi {} unit {}", quote(&kpi.name), quote(&kpi.unit)));
    if let Some(category) = &kpi.category {
        out.push_str(&format!(" category {}", quote(category)));
    }
    if let Some(target) = &kpi.target {
        out.push_str(&format!(" target {}", quote(target)));
    }
    if let Some(group) = &kpi.custom_group {
        out.push_str(&format!(" group {}", quote(group)));
    }
    out.push_str(" {\n");
    for query in &kpi.queries {
        out.push_str(&format!("    query {} {}\n", query.kind, quote(&query.body)));
    }
    out.push_str("  }\n");
}

fn print_visualization(out: &mut String, vis: &Visualization) {
    out.push_str(&format!("  visualization {} type {}", quote(&vis.id), vis.vtype));
    if !vis.manual {
        out.push_str(" generated");
    }
    out.push_str(" {\n    kpis");
    for name in &vis.kpi_names {
        out.push(' ');
        out.push_str(&quote(name));
    }
    out.push_str("\n  }\n");
}

/// Quote a string literal, escaping only `"` and `\`.
fn quote(s: &str) -> String {
    let mut quoted = String::with_capacity(s.len() + 2);
    quoted.push('"');
    for c in s.chars() {
        match c {
            '"' => quoted.push_str("\\\""),
            '\\' => quoted.push_str("\\\\"),
            _ => quoted.push(c),
        }
    }
    quoted.push('"');
    quoted
}
