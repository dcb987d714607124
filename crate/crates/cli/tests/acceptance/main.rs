//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its key numbers. Runs entirely on synthetic data with fixed seeds.

mod oracles;

use rand::prelude::*;
use rand_distr::{Distribution, Normal};
use support::{
    assert_series_close, bits_equal, close, dataset, random_library_pipeline, random_series, rng,
};
use tspipe_core::engine::as_subpipeline_params;
use tspipe_core::{
    align, csvio, parse_definition, serialize_definition, slice_time, DataSet, Error, Module,
    ModuleState, Params, Pipeline, PipelineDefinition, PredicateRef, Registry, Step, StepDef,
    TimeArray, TimeIndex,
};

const DEFAULT_HOLIDAYS: [(u32, u32); 3] = [(1, 1), (12, 25), (12, 26)];

fn build(registry: &Registry, type_id: &str, params: Params) -> Box<dyn tspipe_core::Module> {
    registry.build(type_id, &params).unwrap()
}

fn transform_x(
    module: &dyn tspipe_core::Module,
    stamps: &[i64],
    values: &[f64],
) -> tspipe_core::Result<DataSet> {
    module.transform(&ModuleState::unfitted(), &dataset("x", stamps, values))
}

/// Criterion 1: every library transform matches an independent brute-force
/// implementation on 200 randomized series (lengths 1..=500, 10% NaN),
/// exactly for index and NaN placement, within 1e-9 relative for values.
#[test]
fn criterion_1_transform_oracle_suite() {
    let registry = Registry::with_builtins();
    let mut rng = rng(101);
    let mut checked = [0usize; 11];

    for _ in 0..200 {
        let len = rng.random_range(1..=500);
        let (stamps, values) = random_series(&mut rng, len, 0.10);

        // calendar
        {
            let module = build(&registry, "calendar", Params::new());
            let out = module
                .transform(&ModuleState::unfitted(), &dataset("x", &stamps, &values))
                .unwrap();
            for (row, &ts) in stamps.iter().enumerate() {
                let facts = oracles::calendar(ts, &DEFAULT_HOLIDAYS);
                for (name, want) in [
                    ("year", facts.year),
                    ("month", facts.month),
                    ("day", facts.day),
                    ("weekday", facts.weekday),
                    ("hour", facts.hour),
                    ("is_weekend", facts.is_weekend),
                    ("is_holiday", facts.is_holiday),
                ] {
                    let got = out.get(name).unwrap().value(row);
                    assert!(close(got, want), "calendar {name} at ts {ts}: {got} vs {want}");
                }
            }
            checked[0] += 1;
        }

        // change_direction
        {
            let module = build(&registry, "change_direction", Params::new());
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let want = oracles::change_direction(&values);
            assert_series_close("change_direction", &stamps, out.get("x").unwrap(), &want);
            checked[1] += 1;
        }

        // clock_shift
        {
            let bound = 5.min(len as i64 - 1);
            let shift = if bound == 0 {
                0
            } else {
                rng.random_range(-bound..=bound)
            };
            let module = build(&registry, "clock_shift", Params::new().with("shift", shift));
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let want = oracles::clock_shift(&values, shift);
            assert_series_close("clock_shift", &stamps, out.get("x").unwrap(), &want);
            checked[2] += 1;
        }

        // differentiate
        if len >= 2 {
            let order = rng.random_range(1..=3.min(len as i64 - 1)) as usize;
            let module = build(
                &registry,
                "differentiate",
                Params::new().with("order", order as i64),
            );
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let want = oracles::differentiate(&values, order);
            assert_series_close("differentiate", &stamps, out.get("x").unwrap(), &want);
            checked[3] += 1;
        } else {
            let module = build(&registry, "differentiate", Params::new().with("order", 1));
            assert!(matches!(
                transform_x(module.as_ref(), &stamps, &values),
                Err(Error::OrderTooLarge { .. })
            ));
        }

        // interpolate
        {
            let module = build(&registry, "interpolate", Params::new());
            match oracles::interpolate(&values, &stamps) {
                Some(want) => {
                    let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
                    assert_series_close("interpolate", &stamps, out.get("x").unwrap(), &want);
                    checked[4] += 1;
                }
                None => {
                    assert!(matches!(
                        transform_x(module.as_ref(), &stamps, &values),
                        Err(Error::AllMissing)
                    ));
                }
            }
        }

        // missing_mask
        {
            let module = build(&registry, "missing_mask", Params::new());
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let want = oracles::missing_mask(&values);
            assert_series_close("missing_mask", &stamps, out.get("x").unwrap(), &want);
            checked[5] += 1;
        }

        // resample
        if len >= 2 {
            let (target, mode_name, mode) = if rng.random_bool(0.5) {
                let factor = rng.random_range(2..=4i64);
                let mode = match rng.random_range(0..4) {
                    0 => ("mean", oracles::ResampleMode::Mean),
                    1 => ("sum", oracles::ResampleMode::Sum),
                    2 => ("min", oracles::ResampleMode::Min),
                    _ => ("max", oracles::ResampleMode::Max),
                };
                (3600 * factor, mode.0, mode.1)
            } else {
                let divisor = *[2i64, 3, 4].choose(&mut rng).unwrap();
                let mode = if rng.random_bool(0.5) {
                    ("forward", oracles::ResampleMode::Forward)
                } else {
                    ("linear", oracles::ResampleMode::Linear)
                };
                (3600 / divisor, mode.0, mode.1)
            };
            let module = build(
                &registry,
                "resample",
                Params::new()
                    .with("target_step", target)
                    .with("mode", mode_name),
            );
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let (want_ts, want_values) = oracles::resample(&values, &stamps, 3600, target, &mode);
            let got = out.get("x").unwrap();
            assert_eq!(got.index().as_slice(), &want_ts[..], "resample index");
            for (t, (&g, &w)) in got.values().iter().zip(&want_values).enumerate() {
                assert!(
                    (g.is_nan() && w.is_nan()) || close(g, w),
                    "resample {mode_name} row {t}: {g} vs {w}"
                );
            }
            checked[6] += 1;
        } else {
            let module = build(
                &registry,
                "resample",
                Params::new().with("target_step", 7200).with("mode", "mean"),
            );
            assert!(matches!(
                transform_x(module.as_ref(), &stamps, &values),
                Err(Error::NonEquidistantInput)
            ));
        }

        // rolling_mean
        {
            let window = rng.random_range(1..=6.min(len as i64)) as usize;
            let module = build(
                &registry,
                "rolling_mean",
                Params::new().with("window", window as i64),
            );
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let want = oracles::rolling_mean(&values, window);
            assert_series_close("rolling_mean", &stamps, out.get("x").unwrap(), &want);
            checked[7] += 1;
        }

        // rmse
        {
            let (_, other) = random_series(&mut rng, len, 0.10);
            let index = TimeIndex::new(stamps.clone()).unwrap();
            let pair = DataSet::from_arrays([
                TimeArray::series("y", index.clone(), values.clone()).unwrap(),
                TimeArray::series("y_hat", index, other.clone()).unwrap(),
            ])
            .unwrap();
            let module = build(&registry, "rmse", Params::new());
            match oracles::rmse(&values, &other) {
                Some(want) => {
                    let out = module.transform(&ModuleState::unfitted(), &pair).unwrap();
                    let got = out.get("rmse").unwrap();
                    assert_eq!(got.index().as_slice(), &[*stamps.last().unwrap()]);
                    assert!(close(got.value(0), want), "rmse {} vs {want}", got.value(0));
                    checked[8] += 1;
                }
                None => {
                    assert!(matches!(
                        module.transform(&ModuleState::unfitted(), &pair),
                        Err(Error::NoFinitePairs)
                    ));
                }
            }
        }

        // sampler
        {
            let size = rng.random_range(1..=5.min(len as i64)) as usize;
            let module = build(&registry, "sampler", Params::new().with("size", size as i64));
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let got = out.get("x").unwrap();
            let want = oracles::sample(&values, size);
            assert_eq!(got.index().as_slice(), &stamps[..]);
            assert_eq!(got.feature_shape(), &[size]);
            for (t, want_row) in want.iter().enumerate() {
                for (c, (&g, &w)) in got.row(t).iter().zip(want_row).enumerate() {
                    assert!(
                        (g.is_nan() && w.is_nan()) || close(g, w),
                        "sampler row {t} col {c}: {g} vs {w}"
                    );
                }
            }
            checked[9] += 1;
        }

        // trend
        if len >= 2 {
            let period = rng.random_range(1..=3.min(len as i64 - 1)) as usize;
            let max_reps = ((len - 1) / period).min(2).max(1);
            let reps = rng.random_range(1..=max_reps);
            let module = build(
                &registry,
                "trend",
                Params::new()
                    .with("period_steps", period as i64)
                    .with("repetitions", reps as i64),
            );
            let out = transform_x(module.as_ref(), &stamps, &values).unwrap();
            let got = out.get("x").unwrap();
            let want = oracles::trend(&values, period, reps);
            assert_eq!(got.index().as_slice(), &stamps[..]);
            for (t, want_row) in want.iter().enumerate() {
                for (c, (&g, &w)) in got.row(t).iter().zip(want_row).enumerate() {
                    assert!(
                        (g.is_nan() && w.is_nan()) || close(g, w),
                        "trend row {t} col {c}: {g} vs {w}"
                    );
                }
            }
            checked[10] += 1;
        } else {
            let module = build(
                &registry,
                "trend",
                Params::new().with("period_steps", 1).with("repetitions", 1),
            );
            assert!(matches!(
                transform_x(module.as_ref(), &stamps, &values),
                Err(Error::PeriodTooLarge { .. })
            ));
        }
    }

    assert!(checked.iter().all(|&n| n >= 150), "coverage {checked:?}");
    println!("criterion 1 (transform oracle suite, 200 series x 11 ops): PASS {checked:?}");
}

/// Criterion 2: for every module with a finite lookback, transforming the
/// trailing window of lookback+1 rows ending at t reproduces the
/// full-series output at t, on 100 random cases per module.
#[test]
fn criterion_2_lookback_soundness() {
    let registry = Registry::with_builtins();
    let mut rng = rng(202);

    type ParamDraw = fn(&mut rand_chacha::ChaCha8Rng) -> Params;
    let modules: Vec<(&str, ParamDraw)> = vec![
        ("calendar", |_| Params::new()),
        ("change_direction", |_| Params::new()),
        ("clock_shift", |r| {
            Params::new().with("shift", r.random_range(0..=4i64))
        }),
        ("differentiate", |r| {
            Params::new().with("order", r.random_range(1..=3i64))
        }),
        ("missing_mask", |_| Params::new()),
        ("rolling_mean", |r| {
            Params::new().with("window", r.random_range(1..=6i64))
        }),
        ("sampler", |r| {
            Params::new().with("size", r.random_range(1..=6i64))
        }),
        ("trend", |r| {
            Params::new()
                .with("period_steps", r.random_range(1..=4i64))
                .with("repetitions", r.random_range(1..=3i64))
        }),
        ("persistence", |r| {
            Params::new().with("horizon", r.random_range(1..=5i64))
        }),
    ];

    for (type_id, draw) in modules {
        for case in 0..100 {
            let params = draw(&mut rng);
            let module = registry.build(type_id, &params).unwrap();
            let lookback = module
                .descriptor()
                .lookback
                .expect("criterion 2 covers finite-lookback modules");

            let len = lookback + 1 + rng.random_range(1..150);
            let (stamps, values) = random_series(&mut rng, len, 0.10);
            let t = rng.random_range(lookback..len);

            let full = module
                .transform(&ModuleState::unfitted(), &dataset("x", &stamps, &values))
                .unwrap();
            let window = dataset(
                "x",
                &stamps[t - lookback..=t],
                &values[t - lookback..=t],
            );
            let windowed = module.transform(&ModuleState::unfitted(), &window).unwrap();

            let ts = stamps[t];
            for array in full.arrays() {
                let full_row = array.index().position(ts).map(|p| array.row(p).to_vec());
                let win_array = windowed.get(array.name()).unwrap();
                let win_row = win_array
                    .index()
                    .position(ts)
                    .map(|p| win_array.row(p).to_vec());
                match (full_row, win_row) {
                    (Some(a), Some(b)) => assert!(
                        bits_equal(&a, &b),
                        "{type_id} case {case}: window and full disagree at t={t}: {a:?} vs {b:?}"
                    ),
                    (a, b) => panic!("{type_id} case {case}: output missing at t: {a:?} {b:?}"),
                }
            }
        }
    }
    println!("criterion 2 (lookback soundness, 100 cases x 9 finite-lookback modules): PASS");
}

/// Criterion 3: on 50 randomized library pipelines of depth <= 6:
/// (a) run twice is bitwise equal, (b) save/load/run is bitwise equal,
/// (c) CSV and definition round-trips are exact.
#[test]
fn criterion_3_determinism_and_round_trips() {
    let registry = Registry::with_builtins();
    let mut rng = rng(303);
    let dir = tempfile::tempdir().unwrap();

    for case in 0..50 {
        let len = rng.random_range(60..=200);
        let depth = rng.random_range(1..=6);
        let def = random_library_pipeline(&mut rng, len, depth, false);

        // (c) definition round-trip.
        let text = serialize_definition(&def);
        let reparsed = parse_definition(&text).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(def, reparsed, "case {case}: definition round-trip");

        let (stamps, values) = random_series(&mut rng, len, 0.10);
        let data = dataset("load", &stamps, &values);

        // (c) CSV round-trip of the input.
        let csv_path = dir.path().join(format!("data_{case}.csv"));
        csvio::write_csv(&data, &csv_path).unwrap();
        let reread = csvio::read_csv(&csv_path).unwrap();
        assert!(reread.bit_eq(&data), "case {case}: input CSV round-trip");

        let pipeline = Pipeline::from_definition(&def, &registry)
            .unwrap_or_else(|e| panic!("case {case}: build failed: {e}\n{text}"));

        // (a) determinism.
        let first = pipeline
            .run(&data)
            .unwrap_or_else(|e| panic!("case {case}: run failed: {e}\n{text}"));
        let second = pipeline.run(&data).unwrap();
        for (sink, out) in &first.sinks {
            assert!(
                out.bit_eq(&second.sinks[sink]),
                "case {case}: repeated runs disagree at sink '{sink}'"
            );
        }

        // (b) save -> load -> run.
        let saved = dir.path().join(format!("pipeline_{case}"));
        pipeline.save(&saved).unwrap();
        let loaded = Pipeline::load(&saved, &registry).unwrap();
        let replayed = loaded.run(&data).unwrap();
        for (sink, out) in &first.sinks {
            assert!(
                out.bit_eq(&replayed.sinks[sink]),
                "case {case}: loaded pipeline disagrees at sink '{sink}'"
            );
        }

        // (c) CSV round-trip of sink outputs, including feature columns.
        for (sink, out) in &first.sinks {
            if out.rows() == 0 {
                continue;
            }
            let path = dir.path().join(format!("sink_{case}_{sink}.csv"));
            csvio::write_csv(out, &path).unwrap();
            let back = csvio::read_csv(&path).unwrap();
            assert!(back.bit_eq(out), "case {case}: sink '{sink}' CSV round-trip");
        }
    }
    println!("criterion 3 (determinism + save/load + CSV/definition round-trips, 50 pipelines): PASS");
}

/// Criterion 4: on 25 random causal fit-free pipelines, online execution
/// equals batch at every timestamp where the batch output is finite.
#[test]
fn criterion_4_online_equals_batch() {
    let registry = Registry::with_builtins();
    let mut rng = rng(404);

    for case in 0..25 {
        let len = rng.random_range(60..=120);
        let depth = rng.random_range(1..=4);
        let def = random_library_pipeline(&mut rng, len, depth, true);
        let (stamps, values) = random_series(&mut rng, len, 0.10);
        let data = dataset("load", &stamps, &values);

        let pipeline = Pipeline::from_definition(&def, &registry).unwrap();
        let batch = pipeline
            .run(&data)
            .unwrap_or_else(|e| panic!("case {case}: batch failed: {e}"));
        let online = pipeline
            .run_online(&data)
            .unwrap_or_else(|e| panic!("case {case}: online failed: {e}"));

        // The criterion: equality at every timestamp where the batch
        // output is finite. Partially-finite warm-up rows (lag stacks) are
        // exempt; online emits NaN there.
        for (sink, batch_out) in &batch.sinks {
            let online_out = &online.sinks[sink];
            for array in batch_out.arrays() {
                let online_array = online_out
                    .get(array.name())
                    .unwrap_or_else(|| panic!("case {case}: online misses '{}'", array.name()));
                let mut finite_rows = 0usize;
                for (row, ts) in array.index().iter().enumerate() {
                    let batch_row = array.row(row);
                    if !batch_row.iter().all(|v| v.is_finite()) {
                        continue;
                    }
                    finite_rows += 1;
                    let online_row = online_array.index().position(ts).unwrap_or_else(|| {
                        panic!("case {case}: sink '{sink}' misses finite batch row at ts {ts}")
                    });
                    assert!(
                        bits_equal(batch_row, online_array.row(online_row)),
                        "case {case}: sink '{sink}' differs at ts {ts}"
                    );
                }
                assert!(
                    finite_rows > 0,
                    "case {case}: sink '{sink}' has no finite rows to compare"
                );
            }
        }
    }
    println!("criterion 4 (online == batch on finite rows, 25 pipelines): PASS");
}

/// Criterion 5: on 10 random graphs, a nested subpipeline produces exactly
/// the same bits as the hand-inlined flat graph.
#[test]
fn criterion_5_subpipeline_transparency() {
    let registry = Registry::with_builtins();
    let mut rng = rng(505);

    for case in 0..10 {
        let len = rng.random_range(60..=120);
        let (stamps, values) = random_series(&mut rng, len, 0.05);
        let data = dataset("load", &stamps, &values);

        // Random inner chain of 2-3 scalar-to-scalar transforms.
        let inner_len = rng.random_range(2..=3);
        let mut inner_ops: Vec<(String, Params)> = Vec::new();
        for _ in 0..inner_len {
            inner_ops.push(match rng.random_range(0..4) {
                0 => (
                    "clock_shift".into(),
                    Params::new().with("shift", rng.random_range(0..=2i64)),
                ),
                1 => ("differentiate".into(), Params::new().with("order", 1)),
                2 => (
                    "rolling_mean".into(),
                    Params::new().with("window", rng.random_range(2..=4i64)),
                ),
                _ => ("change_direction".into(), Params::new()),
            });
        }

        let mut inner_steps = Vec::new();
        for (i, (type_id, params)) in inner_ops.iter().enumerate() {
            let mut step = StepDef::new(&format!("i{i}"), type_id);
            step.params = params.clone();
            let upstream = if i == 0 { "x".into() } else { format!("i{}", i - 1) };
            step.inputs.insert("x".into(), upstream);
            inner_steps.push(step);
        }
        let inner_def = PipelineDefinition::new(
            vec!["x".into()],
            inner_steps,
            vec![format!("i{}", inner_len - 1)],
        );

        // Nested: load -> pre -> subpipeline -> post.
        let mut nested = Pipeline::new(vec!["load".into()]);
        nested
            .add_step(
                Step::module("pre", "rolling_mean", Params::new().with("window", 2))
                    .with_input("x", "load"),
                &registry,
            )
            .unwrap();
        nested
            .add_step(
                Step::module("sub", "subpipeline", as_subpipeline_params(&inner_def, "sub"))
                    .with_input("x", "pre"),
                &registry,
            )
            .unwrap();
        nested
            .add_step(
                Step::module("post", "missing_mask", Params::new()).with_input("x", "sub"),
                &registry,
            )
            .unwrap();
        nested.set_sinks(vec!["post".into()]).unwrap();

        // Flat: the same chain with the inner steps spliced in.
        let mut flat = Pipeline::new(vec!["load".into()]);
        flat.add_step(
            Step::module("pre", "rolling_mean", Params::new().with("window", 2))
                .with_input("x", "load"),
            &registry,
        )
        .unwrap();
        let mut upstream = "pre".to_string();
        for (i, (type_id, params)) in inner_ops.iter().enumerate() {
            let id = format!("i{i}");
            flat.add_step(
                Step::module(&id, type_id, params.clone()).with_input("x", &upstream),
                &registry,
            )
            .unwrap();
            upstream = id;
        }
        flat.add_step(
            Step::module("post", "missing_mask", Params::new()).with_input("x", &upstream),
            &registry,
        )
        .unwrap();
        flat.set_sinks(vec!["post".into()]).unwrap();

        let a = nested.run(&data).unwrap();
        let b = flat.run(&data).unwrap();
        assert!(
            a.sinks["post"].bit_eq(&b.sinks["post"]),
            "case {case}: nested and inlined graphs disagree"
        );
    }
    println!("criterion 5 (subpipeline transparency, 10 graphs): PASS");
}

/// Criterion 6: a day/night condition over a 14-day hourly series routes
/// [8,20) hours to one persistence model and the rest to another; the
/// merged output covers every timestamp exactly once and the day rows
/// equal the day branch applied alone to the day rows.
#[test]
fn criterion_6_condition_scenario() {
    let registry = Registry::with_builtins();
    let len = 14 * 24;
    let stamps: Vec<i64> = (0..len as i64).map(|i| i * 3600).collect();
    let mut rng = rng(606);
    let values: Vec<f64> = (0..len)
        .map(|t| {
            100.0
                + 20.0 * ((t as f64) * std::f64::consts::TAU / 24.0).sin()
                + rng.random_range(-1.0..1.0)
        })
        .collect();
    let data = dataset("load", &stamps, &values);

    let mut p = Pipeline::new(vec!["load".into()]);
    p.add_step(
        Step::module("day_model", "persistence", Params::new().with("horizon", 2)),
        &registry,
    )
    .unwrap();
    p.add_step(
        Step::module("night_model", "persistence", Params::new().with("horizon", 3)),
        &registry,
    )
    .unwrap();
    p.add_step(
        Step::condition(
            "route",
            PredicateRef {
                id: "hour_between".into(),
                params: Params::new().with("from", 8).with("to", 20),
            },
            "day_model",
            "night_model",
        )
        .with_input("x", "load"),
        &registry,
    )
    .unwrap();
    p.set_sinks(vec!["route".into()]).unwrap();

    let out = p.run(&data).unwrap();
    let merged = &out.sinks["route"];

    // Every input timestamp appears exactly once.
    assert_eq!(merged.index().unwrap().as_slice(), &stamps[..]);

    // Day/night row counts from the independent calendar oracle.
    let day_positions: Vec<usize> = (0..len)
        .filter(|&t| {
            let hour = oracles::calendar(stamps[t], &DEFAULT_HOLIDAYS).hour as i64;
            (8..20).contains(&hour)
        })
        .collect();
    assert_eq!(day_positions.len(), 14 * 12, "12 day hours per day");

    // Day rows equal the day branch applied alone to the day rows.
    let day_stamps: Vec<i64> = day_positions.iter().map(|&t| stamps[t]).collect();
    let day_values: Vec<f64> = day_positions.iter().map(|&t| values[t]).collect();
    let day_module = registry
        .build("persistence", &Params::new().with("horizon", 2))
        .unwrap();
    let expected_day = day_module
        .transform(&ModuleState::unfitted(), &dataset("x", &day_stamps, &day_values))
        .unwrap();

    let merged_array = merged.get("x").unwrap();
    let expected_array = expected_day.get("x").unwrap();
    for (row, &ts) in day_stamps.iter().enumerate() {
        let merged_row = merged_array.row(merged_array.index().position(ts).unwrap());
        assert!(
            bits_equal(merged_row, expected_array.row(row)),
            "day branch output differs at ts {ts}"
        );
    }
    println!("criterion 6 (day/night condition scenario, 336 rows = 168 + 168): PASS");
}

/// Criterion 7: on a synthetic load (daily sine + weekday offset + seeded
/// Gaussian noise), a calendar + sampler(24) + scaler + least-squares
/// pipeline predicting one hour ahead beats 24-hour persistence in RMSE on
/// the chronological 30% test split.
#[test]
fn criterion_7_forecasting_scenario() {
    let registry = Registry::with_builtins();
    let days = 35;
    let len = days * 24;
    let stamps: Vec<i64> = (0..len as i64).map(|i| i * 3600).collect();
    let mut noise_rng = rng(707);
    let noise = Normal::new(0.0, 2.0).unwrap();
    let values: Vec<f64> = (0..len)
        .map(|t| {
            let hour = t % 24;
            let facts = oracles::calendar(stamps[t], &DEFAULT_HOLIDAYS);
            100.0
                + 20.0 * ((hour as f64) * std::f64::consts::TAU / 24.0).sin()
                + 15.0 * facts.is_weekend
                + noise.sample(&mut noise_rng)
        })
        .collect();
    let data = dataset("load", &stamps, &values);

    let text = r#"{
      "version": 1,
      "sources": ["load"],
      "steps": [
        {"id": "cal", "type": "calendar", "inputs": {"x": "load"}},
        {"id": "lags", "type": "sampler", "params": {"size": 24}, "inputs": {"x": "load"}},
        {"id": "scaled", "type": "scaler", "inputs": {"x": "lags"}},
        {"id": "target", "type": "clock_shift", "params": {"shift": -1}, "inputs": {"x": "load"}},
        {"id": "model", "type": "ols",
         "inputs": {"cal": "cal", "lags": "scaled"}, "target": "target"}
      ],
      "sinks": ["model"]
    }"#;
    let def = parse_definition(text).unwrap();
    let mut pipeline = Pipeline::from_definition(&def, &registry).unwrap();

    // Chronological 70/30 split: fit on the first 70%, score on the rest.
    let split_row = (len as f64 * 0.7) as usize;
    let train_data = slice_time(&data, i64::MIN, stamps[split_row - 1]);
    pipeline.train(&train_data).unwrap();
    let out = pipeline.run(&data).unwrap();
    let predictions = out.sinks["model"].get("y_hat").unwrap();

    // y(t) = load(t + 1); evaluate on test rows only.
    let mut pipeline_pairs = Vec::new();
    let mut persistence_pairs = Vec::new();
    for t in split_row..len - 1 {
        let actual = values[t + 1];
        let predicted = predictions.value(predictions.index().position(stamps[t]).unwrap());
        pipeline_pairs.push((actual, predicted));
        // 24 h persistence predicting load(t+1) by load(t+1-24).
        persistence_pairs.push((actual, values[t + 1 - 24]));
    }
    let rmse = |pairs: &[(f64, f64)]| {
        let finite: Vec<&(f64, f64)> = pairs
            .iter()
            .filter(|(a, p)| a.is_finite() && p.is_finite())
            .collect();
        assert!(!finite.is_empty());
        (finite.iter().map(|(a, p)| (a - p) * (a - p)).sum::<f64>() / finite.len() as f64).sqrt()
    };
    let pipeline_rmse = rmse(&pipeline_pairs);
    let persistence_rmse = rmse(&persistence_pairs);
    assert!(
        pipeline_rmse < persistence_rmse,
        "pipeline RMSE {pipeline_rmse} must beat persistence RMSE {persistence_rmse}"
    );
    println!(
        "criterion 7 (forecasting scenario): PASS, pipeline RMSE {pipeline_rmse:.4} < persistence RMSE {persistence_rmse:.4}"
    );
}

/// Criterion 8: least squares recovers exactly linear data within 1e-8 and
/// matches the covariance/variance closed form for one feature.
#[test]
fn criterion_8_ols_oracle() {
    let mut rng = rng(808);

    // Exactly linear, two features.
    let len = 60;
    let stamps: Vec<i64> = (0..len as i64).map(|i| i * 3600).collect();
    let a: Vec<f64> = (0..len).map(|_| rng.random_range(-5.0..5.0)).collect();
    let b: Vec<f64> = (0..len).map(|_| rng.random_range(-5.0..5.0)).collect();
    let y: Vec<f64> = (0..len).map(|t| 3.0 * a[t] - 2.0 * b[t] + 7.0).collect();

    let index = TimeIndex::new(stamps.clone()).unwrap();
    let features = DataSet::from_arrays([
        TimeArray::series("a", index.clone(), a.clone()).unwrap(),
        TimeArray::series("b", index.clone(), b).unwrap(),
    ])
    .unwrap();
    let target = DataSet::from_arrays([TimeArray::series("y", index.clone(), y).unwrap()]).unwrap();

    let ols = tspipe_core::estimators::OlsRegression::new(&Params::new()).unwrap();
    let state = ols.fit(&features, Some(&target)).unwrap();
    let model = ols.model(&state).unwrap();
    assert!((model.coefficients[0] - 3.0).abs() < 1e-8, "{:?}", model.coefficients);
    assert!((model.coefficients[1] + 2.0).abs() < 1e-8, "{:?}", model.coefficients);
    assert!((model.intercept - 7.0).abs() < 1e-8, "{}", model.intercept);

    // Single feature: slope must match cov(x, y) / var(x).
    let x: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..10.0)).collect();
    let y2: Vec<f64> = x
        .iter()
        .map(|v| 1.5 * v - 4.0 + rng.random_range(-1.0..1.0))
        .collect();
    let features1 =
        DataSet::from_arrays([TimeArray::series("x", index.clone(), x.clone()).unwrap()]).unwrap();
    let target1 =
        DataSet::from_arrays([TimeArray::series("y", index, y2.clone()).unwrap()]).unwrap();
    let state1 = ols.fit(&features1, Some(&target1)).unwrap();
    let model1 = ols.model(&state1).unwrap();

    let n = len as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y2.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(&y2).map(|(u, v)| (u - mx) * (v - my)).sum();
    let var: f64 = x.iter().map(|u| (u - mx) * (u - mx)).sum();
    let slope = cov / var;
    let intercept = my - slope * mx;
    assert!(
        (model1.coefficients[0] - slope).abs() < 1e-8,
        "slope {} vs closed form {slope}",
        model1.coefficients[0]
    );
    assert!(
        (model1.intercept - intercept).abs() < 1e-8,
        "intercept {} vs closed form {intercept}",
        model1.intercept
    );
    println!("criterion 8 (least-squares oracle): PASS");
}

/// Criterion 9: the five specified error paths raise their specified
/// errors and name the offending step or location.
#[test]
fn criterion_9_error_paths() {
    let registry = Registry::with_builtins();
    let stamps: Vec<i64> = (0..6).map(|i| i * 3600).collect();
    let values = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let data = dataset("load", &stamps, &values);

    // Cycle insertion.
    let mut p = Pipeline::new(vec!["load".into()]);
    let err = p
        .add_step(
            Step::module("loop", "missing_mask", Params::new()).with_input("x", "loop"),
            &registry,
        )
        .unwrap_err();
    assert!(matches!(&err, Error::CycleDetected { step } if step == "loop"), "{err}");

    // Unknown type id in a definition.
    let def_text = r#"{"version":1,"sources":["load"],
        "steps":[{"id":"w","type":"sklearn","inputs":{"x":"load"}}],"sinks":["w"]}"#;
    let def = parse_definition(def_text).unwrap();
    let err = Pipeline::from_definition(&def, &registry).unwrap_err();
    assert!(matches!(&err, Error::UnknownTypeId { type_id } if type_id == "sklearn"), "{err}");

    // Corrupt state blob, named by step.
    let mut trainable = Pipeline::new(vec!["load".into()]);
    trainable
        .add_step(
            Step::module("scale", "scaler", Params::new()).with_input("x", "load"),
            &registry,
        )
        .unwrap();
    trainable.set_sinks(vec!["scale".into()]).unwrap();
    trainable.train(&data).unwrap();
    let dir = tempfile::tempdir().unwrap();
    trainable.save(dir.path()).unwrap();
    let blob_path = dir.path().join("state/scale.bin");
    let mut blob = std::fs::read(&blob_path).unwrap();
    let mid = blob.len() / 2;
    blob[mid] ^= 0x10;
    std::fs::write(&blob_path, blob).unwrap();
    let err = Pipeline::load(dir.path(), &registry).unwrap_err();
    assert_eq!(err.step_id(), Some("scale"), "{err}");
    assert!(matches!(err.root(), Error::CorruptState { .. }), "{err}");

    // Disjoint align: directly on the operation...
    let other = dataset("y", &[1_000_000, 1_003_600], &[1.0, 2.0]);
    let err = align(&data, &other).unwrap_err();
    assert!(matches!(err, Error::EmptyIntersection), "{err}");

    // ...and inside the engine, where the failing step is named: a
    // whole-series metric row never overlaps bucket starts here.
    let mut disjoint = Pipeline::new(vec!["load".into()]);
    disjoint
        .add_step(
            Step::module("score", "rmse", Params::new())
                .with_input("y", "load")
                .with_input("y_hat", "load"),
            &registry,
        )
        .unwrap();
    disjoint
        .add_step(
            Step::module(
                "coarse",
                "resample",
                Params::new().with("target_step", "2h").with("mode", "mean"),
            )
            .with_input("x", "load"),
            &registry,
        )
        .unwrap();
    disjoint
        .add_step(
            Step::module("cmp", "rmse", Params::new())
                .with_input("y", "score")
                .with_input("y_hat", "coarse"),
            &registry,
        )
        .unwrap();
    disjoint.set_sinks(vec!["cmp".into()]).unwrap();
    let err = disjoint.run(&data).unwrap_err();
    assert_eq!(err.step_id(), Some("cmp"), "{err}");
    assert!(matches!(err.root(), Error::EmptyIntersection), "{err}");

    // Unfitted run.
    let mut unfitted = Pipeline::new(vec!["load".into()]);
    unfitted
        .add_step(
            Step::module("scale", "scaler", Params::new()).with_input("x", "load"),
            &registry,
        )
        .unwrap();
    unfitted.set_sinks(vec!["scale".into()]).unwrap();
    let err = unfitted.run(&data).unwrap_err();
    assert_eq!(err.step_id(), Some("scale"), "{err}");
    assert!(matches!(err.root(), Error::NotFitted { .. }), "{err}");

    println!("criterion 9 (error paths name their step/location): PASS");
}
