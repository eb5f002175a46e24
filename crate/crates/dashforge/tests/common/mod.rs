//! Shared helpers for the integration suites: a generator for random valid
//! models, an independent partition oracle, and binary-invocation plumbing.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

use proptest::prelude::*;

use dashforge::model::{
    DashboardModel, Datasource, Kpi, Query, QueryKind, StructureKind, Visualization,
    VisualizationType,
};

pub const UNIT_PALETTE: &[&str] = &["", "s", "%", "ms", "bytes", "req/s"];

fn arb_structure() -> impl Strategy<Value = StructureKind> {
    prop_oneof![
        Just(StructureKind::Categorical),
        Just(StructureKind::Target),
        Just(StructureKind::Custom),
    ]
}

/// Name-like strings, occasionally with spaces, escapes, or non-ASCII.
fn arb_text() -> impl Strategy<Value = String> {
    prop_oneof![
        5 => "[A-Za-z][A-Za-z0-9_]{0,11}",
        1 => "[A-Z][a-z]{1,6} [a-z]{1,6}",
        1 => r#"[a-z]{1,3}["\\#][a-z]{1,3}"#,
        1 => "[a-zéµ]{1,6}",
    ]
}

type KpiSeed = (
    prop::sample::Index,                  // group label pick
    prop::sample::Index,                  // unit pick
    Vec<(bool, String)>,                  // queries: (temporal?, body suffix)
    Option<String>,                       // extra dimension value
    Option<String>,                       // extra dimension value
);

/// Random models that pass validation: up to 20 KPIs over at most 4 group
/// labels and 3 units, sometimes with manual visualizations claiming a few
/// KPIs up front.
pub fn arb_valid_model() -> impl Strategy<Value = DashboardModel> {
    (
        arb_structure(),
        arb_text(),
        "[a-z0-9][a-z0-9._-]{0,11}",
        prop::sample::select(vec!["prometheus", "influxdb", "elasticsearch"]),
        prop::collection::btree_set(arb_text(), 1..=4),
        prop::sample::subsequence(UNIT_PALETTE.to_vec(), 1..=3),
        prop::collection::btree_set(arb_text(), 0..=20),
    )
        .prop_flat_map(|(structure, title, uid, ds_kind, labels, units, names)| {
            let labels: Vec<String> = labels.into_iter().collect();
            let units: Vec<String> = units.into_iter().map(str::to_string).collect();
            let names: Vec<String> = names.into_iter().collect();
            let n = names.len();
            let seeds = prop::collection::vec(
                (
                    any::<prop::sample::Index>(),
                    any::<prop::sample::Index>(),
                    prop::collection::vec((any::<bool>(), "[a-z0-9_() ]{0,16}"), 1..=3),
                    prop::option::weighted(0.3, arb_text()),
                    prop::option::weighted(0.3, arb_text()),
                ),
                n..=n,
            );
            (
                Just(structure),
                Just(title),
                Just(uid),
                Just(ds_kind),
                Just(labels),
                Just(units),
                Just(names),
                seeds,
                0usize..=3,
                any::<u8>(),
            )
        })
        .prop_map(
            |(structure, title, uid, ds_kind, labels, units, names, seeds, claim, bits)| {
                build_model(
                    structure, title, uid, ds_kind, &labels, &units, names, seeds, claim, bits,
                )
            },
        )
}

#[allow(clippy::too_many_arguments)]
fn build_model(
    structure: StructureKind,
    title: String,
    uid: String,
    ds_kind: &str,
    labels: &[String],
    units: &[String],
    names: Vec<String>,
    seeds: Vec<KpiSeed>,
    claim: usize,
    bits: u8,
) -> DashboardModel {
    let kpis: Vec<Kpi> = names
        .into_iter()
        .zip(seeds)
        .enumerate()
        .map(|(i, (name, (label_ix, unit_ix, queries, extra_a, extra_b)))| {
            let label = labels[label_ix.index(labels.len())].clone();
            let unit = units[unit_ix.index(units.len())].clone();
            let mut kpi = Kpi {
                name,
                unit,
                category: None,
                target: None,
                custom_group: None,
                queries: queries
                    .into_iter()
                    .enumerate()
                    .map(|(j, (temporal, suffix))| Query {
                        body: format!("q{i}_{j}_{suffix}"),
                        kind: if temporal {
                            QueryKind::Temporal
                        } else {
                            QueryKind::Instant
                        },
                    })
                    .collect(),
            };
            match structure {
                StructureKind::Categorical => {
                    kpi.category = Some(label);
                    kpi.target = extra_a;
                    kpi.custom_group = extra_b;
                }
                StructureKind::Target => {
                    kpi.target = Some(label);
                    kpi.category = extra_a;
                    kpi.custom_group = extra_b;
                }
                StructureKind::Custom => {
                    kpi.custom_group = Some(label);
                    kpi.category = extra_a;
                    kpi.target = extra_b;
                }
            }
            kpi
        })
        .collect();

    // the first `claim` KPIs go to manual visualizations, split in two when
    // the claim is big enough
    let claim = claim.min(kpis.len());
    let mut visualizations: Vec<Visualization> = Vec::new();
    if claim > 0 {
        let vtypes = [
            VisualizationType::Timeseries,
            VisualizationType::Gauge,
            VisualizationType::BarChart,
        ];
        let split = if claim >= 2 && bits & 1 == 1 { claim / 2 } else { claim };
        let chunks: Vec<&[Kpi]> = if split == claim {
            vec![&kpis[..claim]]
        } else {
            vec![&kpis[..split], &kpis[split..claim]]
        };
        for (v, chunk) in chunks.into_iter().enumerate() {
            let active = active_label(&chunk[0], structure).to_string();
            visualizations.push(Visualization {
                id: format!("pinned_{v}"),
                vtype: vtypes[(bits as usize + v) % 3],
                kpi_names: chunk.iter().map(|k| k.name.clone()).collect(),
                group_key: active,
                manual: true,
            });
        }
    }

    DashboardModel {
        title,
        structure,
        datasource: Datasource {
            uid,
            kind: ds_kind.to_string(),
        },
        kpis,
        visualizations,
    }
}

/// Direct field projection, bypassing `group_label`.
pub fn active_label(kpi: &Kpi, structure: StructureKind) -> &str {
    match structure {
        StructureKind::Categorical => kpi.category.as_deref().unwrap(),
        StructureKind::Target => kpi.target.as_deref().unwrap(),
        StructureKind::Custom => kpi.custom_group.as_deref().unwrap(),
    }
}

/// Brute-force partition oracle: walk KPIs in declaration order, skip those
/// claimed by manual visualizations, and bucket by (label, unit) with a
/// linear scan preserving first-appearance order.
pub fn brute_force_partition(model: &DashboardModel) -> Vec<((String, String), Vec<String>)> {
    let mut claimed: Vec<&str> = Vec::new();
    for vis in &model.visualizations {
        if vis.manual {
            for name in &vis.kpi_names {
                claimed.push(name);
            }
        }
    }
    let mut buckets: Vec<((String, String), Vec<String>)> = Vec::new();
    for kpi in &model.kpis {
        if claimed.contains(&kpi.name.as_str()) {
            continue;
        }
        let key = (
            active_label(kpi, model.structure).to_string(),
            kpi.unit.clone(),
        );
        match buckets.iter_mut().find(|(k, _)| *k == key) {
            Some((_, names)) => names.push(kpi.name.clone()),
            None => buckets.push((key, vec![kpi.name.clone()])),
        }
    }
    buckets
}

// --- binary invocation -----------------------------------------------------

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Every `.dash` file in the corpus, sorted by name.
pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory exists")
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "dash"))
        .collect();
    files.sort();
    assert!(files.len() >= 10, "golden corpus must hold at least 10 models");
    files
}

/// Run the dashforge binary with the given arguments.
pub fn dashforge(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_dashforge"))
        .args(args)
        .env_remove("DASHFORGE_TARGET")
        .output()
        .expect("binary runs")
}

pub fn stdout_of(output: &Output) -> &[u8] {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    &output.stdout
}
