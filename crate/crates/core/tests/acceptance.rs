//! Acceptance gate: one test per guaranteed property, each printing a PASS
//! line with its runtime (visible under `--nocapture`). The checks here
//! recompute expectations from scratch — counting oracles, closed forms,
//! finite differences — rather than trusting the code under test.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roughsel::classifier::{
    self, NetworkConfig, UpdateMode, DEFAULT_WEIGHT_SCALE,
};
use roughsel::clustering::{self, DEFAULT_MAX_ITER, DEFAULT_TOL};
use roughsel::evaluation::{confusion, metrics_tables, MetricsRow};
use roughsel::pipeline::{
    generate_synthetic, read_json, run_pipeline, write_matrix_csv, Manifest, PipelineConfig,
    SyntheticSpec,
};
use roughsel::roughset::{self, Gamma};
use roughsel::table::DecisionTable;

fn pass(what: &str, started: Instant) {
    println!("PASS {what} ({:.2}s)", started.elapsed().as_secs_f64());
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|j| format!("a{j}")).collect()
}

/// Dependency degree counted the slow way: a sample is consistent when every
/// sample agreeing with it on the chosen attributes also shares its
/// decision. Deliberately ignorant of partitions and approximations.
fn counting_gamma(
    condition: &[Vec<usize>],
    decision: &[usize],
    attrs: &BTreeSet<usize>,
) -> (usize, usize) {
    let n = decision.len();
    let mut consistent = 0;
    for i in 0..n {
        let clashes = (0..n).any(|j| {
            decision[j] != decision[i]
                && attrs.iter().all(|&a| condition[j][a] == condition[i][a])
        });
        if !clashes {
            consistent += 1;
        }
    }
    (consistent, n)
}

fn random_table(rng: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, Vec<usize>, DecisionTable) {
    let n = rng.random_range(1..=24);
    let width = rng.random_range(1..=8);
    let condition: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..width).map(|_| rng.random_range(0..3usize)).collect())
        .collect();
    let decision: Vec<usize> = (0..n).map(|_| rng.random_range(0..3usize)).collect();
    let table =
        DecisionTable::from_codes(condition.clone(), decision.clone(), names(width)).unwrap();
    (condition, decision, table)
}

#[test]
fn gamma_and_quick_reduct_match_a_counting_oracle_on_random_tables() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    for case in 0..200 {
        let (condition, decision, table) = random_table(&mut rng);
        let width = table.n_attributes();
        let all: BTreeSet<usize> = (0..width).collect();

        // gamma agrees with the counting oracle on assorted subsets.
        let mask: BTreeSet<usize> = (0..width).filter(|_| rng.random_range(0..2) == 1).collect();
        for attrs in [BTreeSet::new(), mask, all.clone()] {
            let got = roughset::gamma(&table, &attrs).unwrap();
            let (num, den) = counting_gamma(&condition, &decision, &attrs);
            assert_eq!(
                (got.numerator(), got.denominator()),
                (num, den),
                "case {case}: gamma disagrees with the counting oracle on {attrs:?}"
            );
        }

        // The greedy selection reaches the full dependency degree exactly.
        let result = roughset::quick_reduct(&table).unwrap();
        assert!(result.reached_full, "case {case}: greedy search fell short");
        let selected: BTreeSet<usize> = result.selected.iter().copied().collect();
        let achieved = roughset::gamma(&table, &selected).unwrap();
        assert_eq!(
            achieved, result.gamma_full,
            "case {case}: selected set does not reproduce the full degree"
        );

        // Exhaustive enumeration bounds the greedy answer from below, and
        // every minimal subset it reports passes the counting oracle.
        let found = roughset::exhaustive_reducts(&table, 20).unwrap();
        let smallest = found.minimal.iter().map(BTreeSet::len).min().unwrap();
        assert!(
            selected.len() >= smallest,
            "case {case}: greedy found {} attributes but a reduct of {smallest} exists",
            selected.len()
        );
        let (full_num, full_den) = counting_gamma(&condition, &decision, &all);
        for reduct in &found.minimal {
            let (num, den) = counting_gamma(&condition, &decision, reduct);
            assert_eq!(
                (num, den),
                (full_num, full_den),
                "case {case}: reported reduct {reduct:?} does not preserve the degree"
            );
        }
    }
    assert!(
        started.elapsed().as_secs_f64() < 30.0,
        "random-table sweep exceeded its 30 s budget"
    );
    pass(
        "gamma and quick reduct match a counting oracle on 200 random tables",
        started,
    );
}

#[test]
fn small_table_fixtures_produce_their_known_reducts() {
    let started = Instant::now();

    // Two attributes where the first alone decides the class.
    let t1 = DecisionTable::from_codes(
        vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        vec![0, 0, 1, 1],
        names(2),
    )
    .unwrap();
    let result = roughset::quick_reduct(&t1).unwrap();
    assert_eq!(result.selected, vec![0]);
    assert_eq!(result.gamma_full, Gamma::new(4, 4).unwrap());
    let found = roughset::exhaustive_reducts(&t1, 20).unwrap();
    assert_eq!(found.minimal, vec![BTreeSet::from([0])]);

    // One attribute that only decides half the samples.
    let t2 = DecisionTable::from_codes(
        vec![vec![0], vec![0], vec![1], vec![1]],
        vec![0, 1, 1, 1],
        names(1),
    )
    .unwrap();
    let half = roughset::gamma(&t2, &BTreeSet::from([0])).unwrap();
    assert_eq!(half, Gamma::new(2, 4).unwrap());
    assert_eq!(half.as_f64(), 0.5);

    // Exclusive-or: neither attribute helps alone, both are required.
    let xor = DecisionTable::from_codes(
        vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        vec![0, 1, 1, 0],
        names(2),
    )
    .unwrap();
    let result = roughset::quick_reduct(&xor).unwrap();
    let selected: BTreeSet<usize> = result.selected.iter().copied().collect();
    assert_eq!(selected, BTreeSet::from([0, 1]));
    assert!(result.reached_full);

    assert!(
        started.elapsed().as_secs_f64() < 1.0,
        "fixture checks exceeded their 1 s budget"
    );
    pass("small fixture tables produce their known reducts", started);
}

#[test]
fn fcm_memberships_stay_normalized_and_handle_coincident_points() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce93);
    for run in 0..50 {
        let n = rng.random_range(2..=40);
        let dim = rng.random_range(1..=3);
        let data: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let c = rng.random_range(1..=n.min(5));
        let m = rng.random_range(1.1..4.0);
        let model = clustering::fcm(&data, c, m, run as u64, DEFAULT_MAX_ITER, DEFAULT_TOL)
            .unwrap();
        assert!(
            model.max_row_sum_error < 1e-9,
            "run {run}: worst row-sum error {} across iterations",
            model.max_row_sum_error
        );
        for (i, row) in model.membership.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            assert!(
                (sum - 1.0).abs() < 1e-9,
                "run {run}: final membership row {i} sums to {sum}"
            );
            assert!(
                row.iter().all(|u| u.is_finite() && *u >= 0.0),
                "run {run}: row {i} has a bad membership: {row:?}"
            );
        }
    }

    // Points sitting exactly on a centroid must come out crisp, not NaN.
    let data = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![3.0, 3.0]];
    let centroids = vec![vec![0.0, 0.0], vec![3.0, 3.0]];
    let membership = clustering::membership_update(&data, &centroids, 2.0).unwrap();
    assert_eq!(membership[0], vec![1.0, 0.0]);
    assert_eq!(membership[2], vec![0.0, 1.0]);
    let mid: f64 = membership[1].iter().sum();
    assert!((mid - 1.0).abs() < 1e-12);
    assert!(membership[1].iter().all(|u| u.is_finite()));

    pass(
        "fcm memberships stay normalized over 50 random runs and coincident points come out crisp",
        started,
    );
}

#[test]
fn kmeans_inertia_is_monotone_and_matches_closed_forms() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce94);
    for run in 0..100 {
        let n = rng.random_range(1..=40);
        let dim = rng.random_range(1..=4);
        let data: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let k = rng.random_range(1..=n);
        let model =
            clustering::kmeans(&data, k, run as u64, DEFAULT_MAX_ITER, DEFAULT_TOL).unwrap();
        for w in model.inertia_history.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-9 * w[0].max(1.0),
                "run {run}: inertia rose from {} to {}",
                w[0],
                w[1]
            );
        }

        // One cluster per point leaves nothing unexplained.
        let exact = clustering::kmeans(&data, n, run as u64, DEFAULT_MAX_ITER, DEFAULT_TOL)
            .unwrap();
        assert_eq!(exact.inertia, 0.0, "run {run}: k = n should zero the inertia");

        // A single cluster is the column-mean solution.
        let single =
            clustering::kmeans(&data, 1, run as u64, DEFAULT_MAX_ITER, DEFAULT_TOL).unwrap();
        let mean: Vec<f64> = (0..dim)
            .map(|j| data.iter().map(|row| row[j]).sum::<f64>() / n as f64)
            .collect();
        let spread: f64 = data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&mean)
                    .map(|(x, mu)| (x - mu) * (x - mu))
                    .sum::<f64>()
            })
            .sum();
        assert!(
            (single.inertia - spread).abs() <= 1e-9 * spread.max(1.0),
            "run {run}: single-cluster inertia {} differs from the mean form {spread}",
            single.inertia
        );
    }
    pass(
        "kmeans inertia is monotone over 100 random runs and matches both closed forms",
        started,
    );
}

#[test]
fn backprop_gradients_match_finite_differences_and_xor_trains_to_one() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce95);
    for run in 0..100u64 {
        let input_dim = rng.random_range(1..=4);
        let output_dim = rng.random_range(1..=3);
        let hidden: Vec<usize> = (0..rng.random_range(1..=2))
            .map(|_| rng.random_range(1..=5))
            .collect();
        let config = NetworkConfig {
            input_dim,
            hidden_sizes: hidden,
            output_dim,
            learning_rate: 0.5,
            epochs: 1,
            seed: run,
            weight_init_scale: DEFAULT_WEIGHT_SCALE,
            update_mode: UpdateMode::Stochastic,
        };
        let net = classifier::init_network(&config).unwrap();
        let input: Vec<f64> = (0..input_dim).map(|_| rng.random_range(0.0..1.0)).collect();
        let target: Vec<f64> = (0..output_dim).map(|_| rng.random_range(0.0..1.0)).collect();
        let worst = classifier::gradient_check(&net, &input, &target, 1e-5).unwrap();
        assert!(
            worst < 1e-4,
            "run {run}: worst relative gradient error {worst}"
        );
    }

    let config = NetworkConfig {
        input_dim: 2,
        hidden_sizes: vec![4],
        output_dim: 2,
        learning_rate: 0.5,
        epochs: 5000,
        seed: 1,
        weight_init_scale: DEFAULT_WEIGHT_SCALE,
        update_mode: UpdateMode::Stochastic,
    };
    let mut net = classifier::init_network(&config).unwrap();
    let inputs = vec![
        vec![0.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
    ];
    let labels = vec![0, 1, 1, 0];
    let report = classifier::train(&mut net, &inputs, &labels, &config).unwrap();
    assert_eq!(
        report.final_train_accuracy, 1.0,
        "exclusive-or did not reach perfect training accuracy"
    );

    assert!(
        started.elapsed().as_secs_f64() < 60.0,
        "gradient sweep exceeded its 60 s budget"
    );
    pass(
        "backprop matches finite differences on 100 random networks and exclusive-or trains to 1.0",
        started,
    );
}

#[test]
fn confusion_reports_satisfy_exact_identities_and_the_rate_table_fixture() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce96);
    for run in 0..100 {
        let n = rng.random_range(1..=100);
        let predicted: Vec<usize> = (0..n).map(|_| rng.random_range(0..4usize)).collect();
        let truth: Vec<usize> = (0..n).map(|_| rng.random_range(0..4usize)).collect();
        let positive = rng.random_range(0..4);
        let report = confusion(&predicted, &truth, positive).unwrap();

        let count_sum = report.true_positives
            + report.false_positives
            + report.true_negatives
            + report.false_negatives;
        assert_eq!(count_sum, n, "run {run}: counts do not cover every sample");
        assert_eq!(
            report.accuracy + report.error,
            1.0,
            "run {run}: accuracy and error do not sum to one exactly"
        );
        let expected_accuracy =
            (report.true_positives + report.true_negatives) as f64 / n as f64;
        assert_eq!(report.accuracy, expected_accuracy, "run {run}: accuracy formula");
        if let (Some(tp), Some(fn_)) = (report.tp_rate, report.fn_rate) {
            assert_eq!(tp + fn_, 1.0, "run {run}: positive-class rates");
        }
        if let (Some(tn), Some(fp)) = (report.tn_rate, report.fp_rate) {
            assert_eq!(tn + fp, 1.0, "run {run}: negative-class rates");
        }
        assert_eq!(report.tp_rate.is_some(), report.fn_rate.is_some());
        assert_eq!(report.tn_rate.is_some(), report.fp_rate.is_some());
    }

    // 16 of 17 positives caught: the rate pair must print as 0.9412/0.0588.
    let mut predicted = vec![1usize; 16];
    predicted.push(0);
    predicted.extend([0, 0, 0]);
    let mut truth = vec![1usize; 17];
    truth.extend([0, 0, 0]);
    let report = confusion(&predicted, &truth, 1).unwrap();
    assert_eq!(report.tp_rate, Some(16.0 / 17.0));
    let text = metrics_tables(&[MetricsRow {
        dataset: "blood".to_string(),
        method: "bpn".to_string(),
        report,
    }]);
    assert!(text.contains("0.9412"), "rate table:\n{text}");
    assert!(text.contains("0.0588"), "rate table:\n{text}");

    pass(
        "confusion reports satisfy exact identities on 100 random vectors and the 16/17 fixture prints as 0.9412/0.0588",
        started,
    );
}

#[test]
fn classifier_beats_clustering_on_separated_synthetic_data() {
    let started = Instant::now();
    let mut kmeans_acc = Vec::new();
    let mut fcm_acc = Vec::new();
    let mut bpn_acc = Vec::new();
    let mut clean_selections = 0;

    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10u64 {
        let spec = SyntheticSpec {
            samples: 60,
            informative: 2,
            noise: 48,
            classes: 2,
            separation: 4.0,
            seed,
        };
        let data = generate_synthetic(&spec).unwrap();
        let input = dir.path().join(format!("data{seed}.csv"));
        write_matrix_csv(&data.matrix, "class", &input).unwrap();

        let config = PipelineConfig {
            bins: 2,
            seed,
            ..PipelineConfig::new(&input)
        };
        let out = dir.path().join(format!("run{seed}"));
        let report = run_pipeline(&config, &out).unwrap();

        if report
            .selected_names
            .iter()
            .all(|name| data.informative_genes.contains(name))
        {
            clean_selections += 1;
        }
        for row in &report.metrics {
            match row.method.as_str() {
                "kmeans" => kmeans_acc.push(row.report.accuracy),
                "fcm" => fcm_acc.push(row.report.accuracy),
                "bpn" => bpn_acc.push(row.report.accuracy),
                other => panic!("unexpected method {other}"),
            }
        }
    }

    let median = |values: &[f64]| -> f64 {
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (sorted[4] + sorted[5]) / 2.0
    };
    let (md_bpn, md_km, md_fcm) = (median(&bpn_acc), median(&kmeans_acc), median(&fcm_acc));
    assert!(
        md_bpn >= md_km,
        "median network accuracy {md_bpn} fell below kmeans {md_km}"
    );
    assert!(
        md_bpn >= md_fcm,
        "median network accuracy {md_bpn} fell below fcm {md_fcm}"
    );
    assert!(
        clean_selections >= 9,
        "only {clean_selections}/10 runs selected signal genes exclusively"
    );
    assert!(
        started.elapsed().as_secs_f64() < 120.0,
        "synthetic sweep exceeded its 2 min budget"
    );
    pass(
        "median network accuracy matches or beats both clusterings over 10 seeds and selections stay on signal genes",
        started,
    );
}

#[test]
fn identical_runs_produce_byte_identical_artifacts() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        samples: 24,
        informative: 2,
        noise: 6,
        classes: 2,
        separation: 3.0,
        seed: 21,
    };
    let data = generate_synthetic(&spec).unwrap();
    let input = dir.path().join("data.csv");
    write_matrix_csv(&data.matrix, "class", &input).unwrap();

    let config = PipelineConfig {
        bins: 2,
        epochs: 60,
        seed: 21,
        ..PipelineConfig::new(&input)
    };
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_pipeline(&config, &out_a).unwrap();
    run_pipeline(&config, &out_b).unwrap();

    let manifest_a = std::fs::read(out_a.join("manifest.json")).unwrap();
    let manifest_b = std::fs::read(out_b.join("manifest.json")).unwrap();
    assert_eq!(manifest_a, manifest_b, "manifests differ between identical runs");

    let manifest: Manifest = read_json(&out_a.join("manifest.json")).unwrap();
    assert!(manifest.complete);
    for name in manifest.artifacts.keys() {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} differs between identical runs");
    }
    pass("identical configurations produce byte-identical artifacts", started);
}
