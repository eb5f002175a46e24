//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line (visible with `cargo test -- --nocapture`).

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

use common::{
    arb_valid_model, brute_force_partition, corpus_files, dashforge, golden, stdout_of,
};
use dashforge::dsl::{dump_canonical, load_canonical, parse_model, serialize_model};
use dashforge::emit::emit_grafana;
use dashforge::enrich::{enrich, partition_kpis};
use dashforge::model::{QueryKind, VisualizationType};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        ..Config::default()
    })
}

/// Criterion 1: the worked example reproduces the checked-in Grafana
/// document byte-for-byte, in under a second.
#[test]
fn acceptance_1_worked_example_end_to_end() {
    let fig1 = common::corpus_dir().join("fig1.dash");
    let started = Instant::now();
    let output = dashforge(&["generate", fig1.to_str().unwrap(), "--target", "grafana"]);
    let elapsed = started.elapsed();
    let document = stdout_of(&output).to_vec();

    let expected = std::fs::read(golden("fig1.grafana.golden.json")).unwrap();
    assert_eq!(
        document, expected,
        "generated document differs from the golden file"
    );

    // structural spot-checks of the pinned content
    let doc: Value = serde_json::from_slice(&document).unwrap();
    let panels = doc["panels"].as_array().unwrap();
    let rows: Vec<&Value> = panels.iter().filter(|p| p["type"] == "row").collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["title"], "Reliability");
    let charts: Vec<&Value> = panels.iter().filter(|p| p["type"] == "timeseries").collect();
    assert_eq!(charts.len(), 1);
    assert_eq!(charts[0]["title"], "EstimatedErrorTime_MaximumErrorTime");
    assert_eq!(charts[0]["targets"].as_array().unwrap().len(), 2);

    assert!(
        elapsed < Duration::from_secs(1),
        "generation took {elapsed:?}, budget is 1s"
    );
    println!("ACCEPTANCE 1 worked-example golden match ({elapsed:?}): PASS");
}

/// Criterion 2: coverage, homogeneity, the temporal rule, and idempotence
/// hold on 1000 random valid models, within a 30s budget.
#[test]
fn acceptance_2_enrichment_properties() {
    let started = Instant::now();
    runner(1000)
        .run(&arb_valid_model(), |model| {
            let enriched = enrich(&model).unwrap();

            // coverage: every KPI is in exactly one visualization
            let mut claims: HashMap<&str, usize> = HashMap::new();
            for vis in &enriched.visualizations {
                for name in &vis.kpi_names {
                    *claims.entry(name).or_default() += 1;
                }
            }
            assert_eq!(claims.len(), enriched.kpis.len());
            for kpi in &enriched.kpis {
                assert_eq!(claims.get(kpi.name.as_str()), Some(&1), "KPI {}", kpi.name);
            }

            for vis in enriched.visualizations.iter().filter(|v| !v.manual) {
                let members: Vec<_> = vis
                    .kpi_names
                    .iter()
                    .map(|n| enriched.kpi(n).unwrap())
                    .collect();

                // homogeneity: one (group label, unit) pair per generated vis
                let mut pairs: Vec<(&str, &str)> = members
                    .iter()
                    .map(|k| {
                        (
                            common::active_label(k, enriched.structure),
                            k.unit.as_str(),
                        )
                    })
                    .collect();
                pairs.dedup();
                assert_eq!(pairs.len(), 1, "visualization {} mixes groups", vis.id);
                assert_eq!(vis.group_key, pairs[0].0);

                // temporal rule: timeseries iff some member query is temporal
                let temporal = members
                    .iter()
                    .flat_map(|k| &k.queries)
                    .any(|q| q.kind == QueryKind::Temporal);
                let expected = if temporal {
                    VisualizationType::Timeseries
                } else {
                    VisualizationType::Gauge
                };
                assert_eq!(vis.vtype, expected, "visualization {}", vis.id);
            }

            // idempotence
            assert_eq!(enrich(&enriched).unwrap(), enriched);
            Ok(())
        })
        .unwrap();
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "enrichment property suite took {elapsed:?}, budget is 30s"
    );
    println!("ACCEPTANCE 2 enrichment properties x1000 ({elapsed:?}): PASS");
}

/// Criterion 3: partition_kpis agrees with an independent brute-force
/// grouping on 500 random models.
#[test]
fn acceptance_3_partition_oracle_equivalence() {
    runner(500)
        .run(&arb_valid_model(), |model| {
            let got: Vec<((String, String), Vec<String>)> = partition_kpis(&model)
                .unwrap()
                .into_iter()
                .map(|(key, kpis)| {
                    (
                        (key.label, key.unit),
                        kpis.into_iter().map(|k| k.name.clone()).collect(),
                    )
                })
                .collect();
            assert_eq!(got, brute_force_partition(&model));
            Ok(())
        })
        .unwrap();
    println!("ACCEPTANCE 3 partition oracle equivalence x500: PASS");
}

/// Criterion 4: parse∘serialize and load∘dump are identities on 1000 random
/// models, and serialization is a fixed point after one pass.
#[test]
fn acceptance_4_round_trips() {
    runner(1000)
        .run(&arb_valid_model(), |model| {
            let text = serialize_model(&model).unwrap();
            let reparsed = parse_model(&text).unwrap();
            assert_eq!(reparsed, model, "DSL round trip");
            assert_eq!(serialize_model(&reparsed).unwrap(), text, "canonical fixed point");

            let bytes = dump_canonical(&model).unwrap();
            let reloaded = load_canonical(&bytes).unwrap();
            assert_eq!(reloaded, model, "interchange round trip");
            assert_eq!(dump_canonical(&reloaded).unwrap(), bytes);
            Ok(())
        })
        .unwrap();
    println!("ACCEPTANCE 4 round-trip identities x1000: PASS");
}

/// Criterion 5: every command is deterministic on the whole corpus.
#[test]
fn acceptance_5_byte_determinism() {
    for file in corpus_files() {
        let path = file.to_str().unwrap();
        let invocations: Vec<Vec<&str>> = vec![
            vec!["validate", path],
            vec!["enrich", path],
            vec!["enrich", path, "--emit-format", "canonical"],
            vec!["generate", path, "--target", "grafana"],
            vec!["generate", path, "--target", "canonical"],
        ];
        for args in invocations {
            let first = dashforge(&args);
            let second = dashforge(&args);
            assert_eq!(first.status.code(), second.status.code(), "{args:?}");
            assert_eq!(first.stdout, second.stdout, "{args:?}");
            assert_eq!(first.stderr, second.stderr, "{args:?}");
        }
    }
    println!("ACCEPTANCE 5 byte determinism across the corpus: PASS");
}

/// Criterion 6: structural validity of every emitted Grafana document.
#[test]
fn acceptance_6_grafana_structure() {
    for file in corpus_files() {
        let text = std::fs::read_to_string(&file).unwrap();
        let enriched = enrich(&parse_model(&text).unwrap()).unwrap();
        let result = emit_grafana(&enriched).unwrap();
        let doc: Value = serde_json::from_slice(&result.document)
            .unwrap_or_else(|e| panic!("{file:?}: not well-formed JSON: {e}"));

        let panels = doc["panels"].as_array().unwrap();
        let rows: Vec<&Value> = panels.iter().filter(|p| p["type"] == "row").collect();
        let charts: Vec<&Value> = panels.iter().filter(|p| p["type"] != "row").collect();

        let mut distinct_groups: Vec<&str> = Vec::new();
        for vis in &enriched.visualizations {
            if !distinct_groups.contains(&vis.group_key.as_str()) {
                distinct_groups.push(&vis.group_key);
            }
        }
        assert_eq!(charts.len(), enriched.visualizations.len(), "{file:?}");
        assert_eq!(rows.len(), distinct_groups.len(), "{file:?}");

        // pairwise-disjoint grid rectangles
        let rects: Vec<(u64, u64, u64, u64)> = panels
            .iter()
            .map(|p| {
                let g = &p["gridPos"];
                (
                    g["x"].as_u64().unwrap(),
                    g["y"].as_u64().unwrap(),
                    g["w"].as_u64().unwrap(),
                    g["h"].as_u64().unwrap(),
                )
            })
            .collect();
        for (i, a) in rects.iter().enumerate() {
            assert!(a.0 + a.2 <= 24, "{file:?}: panel exceeds the grid");
            for b in rects.iter().skip(i + 1) {
                let overlap =
                    a.0 < b.0 + b.2 && b.0 < a.0 + a.2 && a.1 < b.1 + b.3 && b.1 < a.1 + a.3;
                assert!(!overlap, "{file:?}: panels overlap: {a:?} vs {b:?}");
            }
        }

        // each query body appears exactly once as an expr
        let mut expected: Vec<&str> = enriched
            .kpis
            .iter()
            .flat_map(|k| k.queries.iter().map(|q| q.body.as_str()))
            .collect();
        expected.sort_unstable();
        let mut exprs: Vec<&str> = charts
            .iter()
            .flat_map(|p| p["targets"].as_array().unwrap())
            .map(|t| t["expr"].as_str().unwrap())
            .collect();
        exprs.sort_unstable();
        assert_eq!(exprs, expected, "{file:?}");
    }
    println!("ACCEPTANCE 6 Grafana structural validation across the corpus: PASS");
}

/// Criterion 7: the 0/1/2 exit-code contract, table-driven, all 12 cells.
///
/// `targets` accepts no model input, so it has no semantic failure mode; its
/// misuse cell asserts that command-line errors land in the environmental
/// class (2), and its I/O cell is exercised by writing to /dev/full.
#[test]
fn acceptance_7_exit_code_contract() {
    let corpus = common::corpus_dir();
    let fig1 = corpus.join("fig1.dash");
    let fig1 = fig1.to_str().unwrap();
    let dup = common::fixture("duplicate_kpi.dash");
    let missing_cat = common::fixture("missing_category.dash");
    let syntax = common::fixture("syntax_error.dash");
    let schema = common::fixture("schema_error.json");

    let cells: Vec<(Vec<&str>, i32)> = vec![
        // validate: ok / semantic / parse+io
        (vec!["validate", fig1], 0),
        (vec!["validate", dup.to_str().unwrap()], 1),
        (vec!["validate", "does/not/exist.dash"], 2),
        // enrich
        (vec!["enrich", fig1], 0),
        (vec!["enrich", missing_cat.to_str().unwrap()], 1),
        (vec!["enrich", syntax.to_str().unwrap()], 2),
        // generate
        (vec!["generate", fig1, "--target", "grafana"], 0),
        (vec!["generate", fig1, "--target", "nope"], 1),
        (vec!["generate", schema.to_str().unwrap(), "--target", "grafana"], 2),
        // targets
        (vec!["targets"], 0),
        (vec!["targets", "--bogus-flag"], 2),
    ];
    for (args, expected) in &cells {
        let output = dashforge(args);
        assert_eq!(
            output.status.code(),
            Some(*expected),
            "{args:?}: stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }

    // 12th cell: targets with an unwritable standard output
    let full = std::fs::OpenOptions::new().write(true).open("/dev/full");
    match full {
        Ok(sink) => {
            let output = std::process::Command::new(env!("CARGO_BIN_EXE_dashforge"))
                .arg("targets")
                .stdout(sink)
                .stderr(std::process::Stdio::piped())
                .output()
                .unwrap();
            assert_eq!(output.status.code(), Some(2), "targets with a full output device");
            assert!(String::from_utf8_lossy(&output.stderr).starts_with("ERROR IO <stdout>"));
        }
        Err(e) => panic!("/dev/full unavailable on this platform: {e}"),
    }
    println!("ACCEPTANCE 7 exit-code contract, 12 cells: PASS");
}

/// Criterion 8: `enrich` piped into `generate --no-enrich` matches direct
/// `generate` byte-for-byte on the whole corpus.
#[test]
fn acceptance_8_pipe_composability() {
    let workdir = tempfile::tempdir().unwrap();
    for file in corpus_files() {
        let path = file.to_str().unwrap();
        for target in ["grafana", "canonical"] {
            let direct = dashforge(&["generate", path, "--target", target]);
            let enriched = dashforge(&["enrich", path]);
            let staged = workdir.path().join("staged.dash");
            std::fs::write(&staged, stdout_of(&enriched)).unwrap();
            let piped = dashforge(&[
                "generate",
                staged.to_str().unwrap(),
                "--no-enrich",
                "--target",
                target,
            ]);
            assert_eq!(
                stdout_of(&direct),
                stdout_of(&piped),
                "{file:?} via {target}"
            );
        }
    }
    println!("ACCEPTANCE 8 pipe composability across the corpus: PASS");
}
