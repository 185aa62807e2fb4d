//! Acceptance suite: one test per criterion, each ending in a single
//! `ACCEPTANCE ... PASS` line (visible with `--nocapture`).

use gafs_core::features::{
    build_matrix, expected_columns, hjorth_mobility, morlet_psd, welch_psd, Band, ColumnMeta,
    FeatureKind, FeatureMatrix, MorletConfig, RowMeta, WelchConfig,
};
use gafs_core::ga::{
    family_fitness, run_with_model, EvalContext, FitnessFamily, GaConfig, GaMode,
    StopReason, WrappedModel,
};
use gafs_core::ingest::{synthesize, ChannelSpec, InstanceSet, Sinusoid};
use gafs_core::learners::{
    city_block, classification_report, cluster_evaluator_sweep, kmeans, silhouette,
    svm_cv_accuracy, ClassMetrics, LabeledData, LearnError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::sync::Mutex;

fn plain_matrix(rows: Vec<Vec<f64>>, labels: &[String]) -> FeatureMatrix {
    let d = rows[0].len();
    let columns = (0..d)
        .map(|c| ColumnMeta {
            name: format!("f{c}"),
            electrode: String::new(),
            kind: FeatureKind::Activity,
            band: None,
        })
        .collect();
    let metas = labels
        .iter()
        .enumerate()
        .map(|(r, l)| RowMeta {
            subject: format!("r{r}"),
            condition: l.clone(),
        })
        .collect();
    FeatureMatrix::from_parts(columns, metas, rows.into_iter().flatten().collect()).unwrap()
}

// ---------------------------------------------------------------------------
// 1. fitness arithmetic reconstructed from the reported tables
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_fitness_arithmetic() {
    let f = family_fitness(FitnessFamily::Vmff, 0.88, 1.00, 35, 209);
    assert!((f - 0.10).abs() <= 0.01, "VMFF(1.0, 35/209) = {f}");
    let f = family_fitness(FitnessFamily::Vmff, 0.88, 1.00, 209, 209);
    assert!((f - 0.00).abs() <= 0.01, "VMFF(1.0, full) = {f}");
    let f = family_fitness(FitnessFamily::Vmff, 0.88, 0.87, 291, 576);
    assert!(
        (0.17 - 0.01..=0.18 + 0.01).contains(&f),
        "VMFF(0.87, 291/576) = {f}"
    );
    for perf in [0.0, 0.25, 0.87, 1.0] {
        assert_eq!(
            family_fitness(FitnessFamily::Nff, 0.88, perf, 576, 576),
            0.0,
            "NFF on a full mask must be exactly zero"
        );
    }
    println!("ACCEPTANCE criterion 1 (fitness arithmetic cross-checks): PASS");
}

// ---------------------------------------------------------------------------
// 2. column-count formula on actually built matrices
// ---------------------------------------------------------------------------

fn electrode_set(n_channels: usize, seed: u64) -> InstanceSet {
    let spec: Vec<ChannelSpec> = (0..n_channels)
        .map(|c| ChannelSpec {
            label: format!("e{c}"),
            components: vec![Sinusoid {
                amplitude: 1.0,
                freq_hz: 5.0 + (c % 20) as f64,
                phase: 0.1 * c as f64,
            }],
            noise_std: 0.2,
        })
        .collect();
    let recs = (0..2)
        .map(|i| {
            synthesize(&spec, 4.0, 160.0, seed + i)
                .unwrap()
                .with_condition(if i == 0 { "A" } else { "B" })
        })
        .collect();
    InstanceSet::new(recs).unwrap()
}

#[test]
fn criterion_2_column_count_formula() {
    let sub_bands = vec![
        Band::theta_low(),
        Band::theta_high(),
        Band::beta_low(),
        Band::beta_high(),
    ];
    let rhythms = vec![Band::theta(), Band::alpha(), Band::beta()];
    let wcfg = WelchConfig::for_signal(160.0, 640);
    let mcfg = MorletConfig::default();
    for (channels, bands, want) in [
        (19usize, &sub_bands, 209usize),
        (64, &rhythms, 576),
        (15, &rhythms, 135),
    ] {
        assert_eq!(expected_columns(channels, bands.len()), want);
        let m = build_matrix(&electrode_set(channels, 7), bands, &wcfg, &mcfg).unwrap();
        assert_eq!(m.n_cols(), want, "{channels} electrodes, {} bands", bands.len());
    }
    println!("ACCEPTANCE criterion 2 (column-count formula 209/576/135): PASS");
}

// ---------------------------------------------------------------------------
// 3. stopping machine: cap sequence 200 → 300 → 450 → 675
// ---------------------------------------------------------------------------

/// Performance that steps up by 0.03 right after each fitness-checkpoint
/// recording, saturating at 1; also logs every generation cap it sees.
struct SteppingStub {
    base: f64,
    caps: Mutex<Vec<usize>>,
}

impl WrappedModel for SteppingStub {
    fn performance(
        &self,
        _data: &LabeledData,
        _mask: &[bool],
        _seed: u64,
        ctx: &EvalContext,
    ) -> Result<f64, LearnError> {
        let mut caps = self.caps.lock().unwrap();
        if caps.last() != Some(&ctx.max_generations) {
            caps.push(ctx.max_generations);
        }
        Ok((self.base + 0.03 * ctx.checkpoints as f64).min(1.0))
    }
}

fn tiny_data(n_cols: usize) -> LabeledData {
    let rows = vec![vec![0.0; n_cols], vec![1.0; n_cols]];
    LabeledData::from_matrix(plain_matrix(rows, &["a".into(), "b".into()]))
}

#[test]
fn criterion_3_stopping_machine_cap_sequence() {
    let data = tiny_data(12);
    let stub = SteppingStub {
        base: 0.91,
        caps: Mutex::new(Vec::new()),
    };
    let cfg = GaConfig {
        seed: 5,
        fitness_family: FitnessFamily::Poff,
        ..GaConfig::default()
    };
    let report = run_with_model(&data, &stub, &cfg).unwrap();
    assert_eq!(
        *stub.caps.lock().unwrap(),
        vec![200, 300, 450, 675],
        "generation-cap evolution"
    );
    assert_eq!(report.generations_run, 675);
    assert_eq!(report.max_generations, 675);
    assert_eq!(report.stop_reason, StopReason::MaxGenerations);
    println!("ACCEPTANCE criterion 3 (stopping machine 200→300→450→675, stop at 675): PASS");
}

// ---------------------------------------------------------------------------
// 4. GA invariant suite over 50 randomized micro-runs
// ---------------------------------------------------------------------------

fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Deterministic pseudo-performance from the mask and seed.
struct HashStub;

impl WrappedModel for HashStub {
    fn performance(
        &self,
        _data: &LabeledData,
        mask: &[bool],
        seed: u64,
        _ctx: &EvalContext,
    ) -> Result<f64, LearnError> {
        let mut h = mix(seed);
        for (i, &bit) in mask.iter().enumerate() {
            if bit {
                h = mix(h ^ i as u64);
            }
        }
        Ok((h % 100_000) as f64 / 100_000.0)
    }
}

#[test]
fn criterion_4_ga_invariant_suite() {
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for run in 0..50u64 {
        let n_if = rng.gen_range(4..=30usize);
        let family = [FitnessFamily::Poff, FitnessFamily::Vmff, FitnessFamily::Nff]
            [rng.gen_range(0..3)];
        let cfg = GaConfig {
            seed: mix(run),
            max_generations: rng.gen_range(20..=60),
            fitness_family: family,
            ..GaConfig::default()
        };
        let data = tiny_data(n_if);
        let a = run_with_model(&data, &HashStub, &cfg).unwrap();
        let b = run_with_model(&data, &HashStub, &cfg).unwrap();
        // determinism under a fixed seed (elapsed excluded)
        assert_eq!(a.trace, b.trace, "run {run}");
        assert_eq!(a.best_chromosome, b.best_chromosome, "run {run}");
        assert_eq!(a.final_chromosome, b.final_chromosome, "run {run}");
        assert_eq!(a.stop_reason, b.stop_reason, "run {run}");
        // trace bookkeeping and monotone global best
        assert_eq!(a.trace.len(), a.generations_run, "run {run}");
        let running_max = a.trace.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(running_max, a.best_fitness, "run {run}");
        // masks submitted for evaluation are never empty
        assert!(a.best_chromosome.popcount() > 0, "run {run}");
        assert!(a.final_chromosome.popcount() > 0, "run {run}");
        // final within one std of the mean, never above the max
        assert!(a.final_fitness <= a.max + 1e-12, "run {run}");
        assert!(a.final_fitness >= a.mean - a.std - 1e-12, "run {run}");
        assert!(a.final_fitness <= a.mean + a.std + 1e-12, "run {run}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "suite took {elapsed:.1} s");
    println!(
        "ACCEPTANCE criterion 4 (GA invariants over 50 micro-runs in {elapsed:.1} s): PASS"
    );
}

// ---------------------------------------------------------------------------
// 5. supervised synthetic feature recovery
// ---------------------------------------------------------------------------

const INFORMATIVE: [usize; 5] = [3, 11, 24, 37, 44];

/// 100 × 50 matrix: two Gaussian classes separated along five scattered
/// columns, everything else N(0, 1) noise. The separation is spread across
/// instance strata — each informative column separates one fifth of the
/// instances — so every informative column carries accuracy the others
/// cannot supply and the product fitness cannot profitably drop it.
fn recovery_fixture(separation: f64, seed: u64) -> LabeledData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::with_capacity(100);
    let mut labels = Vec::with_capacity(100);
    for class in 0..2usize {
        for i in 0..50usize {
            let mut row: Vec<f64> = (0..50).map(|_| normal.sample(&mut rng)).collect();
            let sign = if class == 1 { 1.0 } else { -1.0 };
            row[INFORMATIVE[i % 5]] += sign * separation / 2.0;
            rows.push(row);
            labels.push(if class == 0 { "low".to_string() } else { "high".to_string() });
        }
    }
    LabeledData::from_matrix(plain_matrix(rows, &labels))
}

#[test]
fn criterion_5_supervised_feature_recovery() {
    let data = recovery_fixture(10.0, 2000);
    let cfg = GaConfig {
        seed: 20,
        mode: GaMode::Supervised,
        fitness_family: FitnessFamily::Nff,
        ..GaConfig::default()
    };
    let report = gafs_core::ga::run(&data, &cfg).unwrap();
    let selected: Vec<usize> = (0..50).filter(|&c| report.selected()[c]).collect();
    let informative_hits = INFORMATIVE
        .iter()
        .filter(|c| selected.contains(c))
        .count();
    let masked = data.masked(report.selected()).unwrap();
    let acc = svm_cv_accuracy(&masked, 10, cfg.seed).unwrap().value;
    assert!(
        selected.len() <= 20,
        "selected {} columns: {selected:?}",
        selected.len()
    );
    assert!(
        informative_hits >= 4,
        "only {informative_hits} informative columns in {selected:?}"
    );
    assert!(acc >= 0.95, "CV accuracy {acc}");
    assert!(
        report.elapsed_minutes <= 2.0,
        "run took {:.2} min",
        report.elapsed_minutes
    );
    println!(
        "ACCEPTANCE criterion 5 (supervised recovery: {} columns, {informative_hits}/5 informative, acc {acc:.3}, {:.2} min): PASS",
        selected.len(),
        report.elapsed_minutes
    );
}

// ---------------------------------------------------------------------------
// 6. unsupervised counterpart: silhouette gain and evaluator sweep
// ---------------------------------------------------------------------------

/// 90 × 50 matrix: three blobs drawn apart along six structured columns,
/// 44 noise columns.
fn blob_fixture(separation: f64, seed: u64) -> LabeledData {
    let patterns: [[usize; 2]; 3] = [[0, 7], [19, 28], [33, 42]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::with_capacity(90);
    let mut labels = Vec::with_capacity(90);
    for (b, pattern) in patterns.iter().enumerate() {
        for _ in 0..30 {
            let mut row = vec![0.0; 50];
            for v in row.iter_mut() {
                *v = normal.sample(&mut rng);
            }
            for &c in pattern {
                row[c] += separation;
            }
            rows.push(row);
            labels.push(format!("blob{b}"));
        }
    }
    LabeledData::from_matrix(plain_matrix(rows, &labels))
}

#[test]
fn criterion_6_unsupervised_silhouette_gain_and_sweep() {
    let data = blob_fixture(6.0, 2718);
    let cfg = GaConfig {
        seed: 11,
        mode: GaMode::Unsupervised,
        fitness_family: FitnessFamily::Nff,
        k: Some(3),
        ..GaConfig::default()
    };
    let baseline = kmeans(data.matrix(), 3, cfg.seed).unwrap().avg_silhouette;
    let report = gafs_core::ga::run(&data, &cfg).unwrap();
    let masked = data.masked(report.selected()).unwrap();
    let selected_sil = kmeans(masked.matrix(), 3, cfg.seed).unwrap().avg_silhouette;
    assert!(
        selected_sil - baseline >= 0.05,
        "silhouette {selected_sil:.3} vs baseline {baseline:.3}"
    );
    let sweep = cluster_evaluator_sweep(masked.matrix(), 2, 4, cfg.seed).unwrap();
    assert_eq!(sweep.best_k, 3, "sweep entries {:?}", sweep.entries);
    assert!(
        report.elapsed_minutes <= 1.0,
        "run took {:.2} min",
        report.elapsed_minutes
    );
    println!(
        "ACCEPTANCE criterion 6 (unsupervised gain {:.3}→{:.3}, argmax k = 3, {:.2} min): PASS",
        baseline, selected_sil, report.elapsed_minutes
    );
}

// ---------------------------------------------------------------------------
// 7. signal-processing oracles
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_signal_oracles() {
    // Hjorth mobility vs the closed form 2r·sin(πf/r)
    for (f, r) in [(5.0, 100.0), (10.0, 500.0), (13.0, 160.0)] {
        let n = (20.0 * r) as usize;
        let x: Vec<f64> = (0..n)
            .map(|t| (2.0 * std::f64::consts::PI * f * t as f64 / r).sin())
            .collect();
        let mob = hjorth_mobility(&x, r).unwrap();
        let closed = 2.0 * r * (std::f64::consts::PI * f / r).sin();
        assert!(
            (mob - closed).abs() / closed < 0.01,
            "f={f}, r={r}: {mob} vs {closed}"
        );
    }

    // Welch band partition vs the one-band total
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let x: Vec<f64> = (0..8000).map(|_| rng.gen::<f64>() - 0.5).collect();
    let cfg = WelchConfig::new(400);
    let rate = 400.0;
    let edges = [0.5, 7.5, 50.5, 120.5, 199.5];
    let mut parts = 0.0;
    for w in edges.windows(2) {
        parts += welch_psd(&x, rate, &Band::new("part", w[0], w[1]).unwrap(), &cfg).unwrap();
    }
    let whole = welch_psd(&x, rate, &Band::new("all", 0.5, 199.5).unwrap(), &cfg).unwrap();
    assert!(
        (parts - whole).abs() / whole < 1e-6,
        "partition {parts} vs total {whole}"
    );

    // Morlet tone localization at 6, 10 and 20 Hz
    let rate = 250.0;
    let mcfg = MorletConfig {
        anchor: Some((4.0, 30.0)),
        ..MorletConfig::default()
    };
    for tone in [6.0, 10.0, 20.0] {
        let x: Vec<f64> = (0..4000)
            .map(|t| (2.0 * std::f64::consts::PI * tone * t as f64 / rate).sin())
            .collect();
        let mut best = (0.0, f64::NEG_INFINITY);
        let mut f = 4.0;
        while f <= 30.0 + 1e-9 {
            let band = Band::new("probe", f - 1e-3, f + 1e-3).unwrap();
            let p = morlet_psd(&x, rate, &band, &mcfg).unwrap();
            if p > best.1 {
                best = (f, p);
            }
            f += 0.5;
        }
        assert!(
            (best.0 - tone).abs() < 0.26,
            "tone {tone} Hz localized at {} Hz",
            best.0
        );
    }
    println!("ACCEPTANCE criterion 7 (Hjorth/Welch/Morlet oracles): PASS");
}

// ---------------------------------------------------------------------------
// 8. learner oracles
// ---------------------------------------------------------------------------

/// Straightforward silhouette from a precomputed distance matrix.
fn brute_force_silhouette(rows: &[Vec<f64>], assignments: &[usize]) -> f64 {
    let n = rows.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = city_block(&rows[i], &rows[j]);
        }
    }
    let k = assignments.iter().max().unwrap() + 1;
    let sizes: Vec<usize> = (0..k)
        .map(|c| assignments.iter().filter(|&&a| a == c).count())
        .collect();
    let mut total = 0.0;
    for e in 0..n {
        let own = assignments[e];
        if sizes[own] <= 1 {
            continue;
        }
        let a = (0..n)
            .filter(|&o| o != e && assignments[o] == own)
            .map(|o| dist[e][o])
            .sum::<f64>()
            / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| {
                (0..n)
                    .filter(|&o| assignments[o] == c)
                    .map(|o| dist[e][o])
                    .sum::<f64>()
                    / sizes[c] as f64
            })
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

#[test]
fn criterion_8_learner_oracles() {
    // silhouette vs brute force on 200 random small cases
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for case in 0..200 {
        let n = rng.gen_range(4..=12usize);
        let d = rng.gen_range(1..=3usize);
        let k = rng.gen_range(2..=3usize).min(n - 1);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen::<f64>() * 8.0).collect())
        .collect();
        // guarantee at least two non-empty clusters
        let assignments: Vec<usize> = (0..n).map(|i| i % k).collect();
        let labels: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
        let m = plain_matrix(rows.clone(), &labels);
        let ours = silhouette(&m, &assignments).unwrap();
        let oracle = brute_force_silhouette(&rows, &assignments);
        assert!(
            (ours - oracle).abs() <= 1e-12,
            "case {case}: {ours} vs {oracle}"
        );
    }

    // k-means cost trace non-increasing on every logged iteration
    let mut logged = 0usize;
    for seed in 0..25u64 {
        let n = rng.gen_range(8..=24usize);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..3).map(|_| rng.gen::<f64>() * 10.0).collect())
            .collect();
        let labels: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
        let m = plain_matrix(rows, &labels);
        for k in 2..=3 {
            let result = kmeans(&m, k, seed).unwrap();
            for w in result.cost_trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "cost rose: {:?}", result.cost_trace);
                logged += 1;
            }
        }
    }
    assert!(logged >= 100, "only {logged} iterations logged");

    // hand-computed confusion examples
    let m = ClassMetrics::from_confusion(
        vec!["a".into(), "b".into()],
        vec![vec![9, 1], vec![1, 9]],
        10,
        false,
    );
    assert!((m.global_accuracy - 0.9).abs() < 1e-12);
    assert!((m.weighted_f1 - 0.9).abs() < 1e-12);

    // degenerate features force one-class predictions on a balanced set
    let rows = vec![vec![2.0, 2.0]; 10];
    let labels: Vec<String> = (0..10)
        .map(|i| if i < 5 { "a".into() } else { "b".into() })
        .collect();
    let data = LabeledData::from_matrix(plain_matrix(rows, &labels));
    let report = classification_report(&data, 5, 3).unwrap();
    assert!((report.global_accuracy - 0.5).abs() < 1e-12);
    assert!((report.weighted_f1 - 1.0 / 3.0).abs() < 1e-12);

    println!("ACCEPTANCE criterion 8 (silhouette/k-means/report oracles, {logged} iterations): PASS");
}

// ---------------------------------------------------------------------------
// 9. optional: PhysioNet mental-arithmetic EDFs (network-dependent, not
//    gating). Point GAFS_EEGMAT_DIR at a directory of SubjectNN_{1,2}.edf
//    files and run with --ignored.
// ---------------------------------------------------------------------------

const DATASET_A_ELECTRODES: [&str; 19] = [
    "C3", "C4", "Cz", "F3", "F4", "F7", "F8", "Fp1", "Fp2", "Fz", "O1", "O2", "P3", "P4", "Pz",
    "T3", "T4", "T5", "T6",
];

#[test]
#[ignore = "needs locally supplied PhysioNet EDF files (GAFS_EEGMAT_DIR)"]
fn criterion_9_dataset_a_all_strategy() {
    let dir = match std::env::var("GAFS_EEGMAT_DIR") {
        Ok(d) => d,
        Err(_) => {
            println!("ACCEPTANCE criterion 9: SKIPPED (GAFS_EEGMAT_DIR not set)");
            return;
        }
    };
    let mut recordings = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(&dir)
        .expect("dataset directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "edf"))
        .collect();
    entries.sort();
    for path in entries {
        let stem = path.file_stem().unwrap().to_string_lossy().to_string();
        // Subject04 and Subject31 carry an incorrect sample count upstream
        if stem.starts_with("Subject04") || stem.starts_with("Subject31") {
            continue;
        }
        let condition = if stem.ends_with("_1") { "REST" } else { "MAT" };
        let raw = gafs_core::ingest::load_edf(&path).unwrap();
        // keep the named 10/20 electrodes, in a fixed order
        let cleaned: Vec<String> = raw
            .channels()
            .iter()
            .map(|c| c.trim_start_matches("EEG ").trim().to_string())
            .collect();
        let mut chans = Vec::new();
        let mut samples = Vec::new();
        for want in DATASET_A_ELECTRODES {
            if let Some(i) = cleaned.iter().position(|c| c == want) {
                chans.push(want.to_string());
                samples.push(raw.channel(i).to_vec());
            }
        }
        assert_eq!(chans.len(), 19, "{stem}: electrodes {cleaned:?}");
        let rec = gafs_core::ingest::Recording::new(chans, samples, raw.sampling_rate())
            .unwrap()
            .with_condition(condition)
            .with_subject(stem.trim_end_matches("_1").trim_end_matches("_2"));
        recordings.push(gafs_core::preprocess::zscore(&rec).unwrap());
    }
    let set = InstanceSet::new(recordings).unwrap();
    let bands = vec![
        Band::theta_low(),
        Band::theta_high(),
        Band::beta_low(),
        Band::beta_high(),
    ];
    let n = set.recordings()[0].n_samples();
    let matrix = build_matrix(
        &set,
        &bands,
        &WelchConfig::for_signal(500.0, n),
        &MorletConfig::default(),
    )
    .unwrap();
    assert_eq!(matrix.n_cols(), 209);
    let data = LabeledData::from_matrix(matrix);
    let report = classification_report(&data, 10, 1).unwrap();
    assert!(
        (report.global_accuracy - 1.00).abs() <= 0.02,
        "gAcc {}",
        report.global_accuracy
    );
    println!(
        "ACCEPTANCE criterion 9 (dataset A ALL-strategy gAcc {:.3}): PASS",
        report.global_accuracy
    );
}
