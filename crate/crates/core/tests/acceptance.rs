//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measured numbers. Run with
//! `cargo test -p thermotrack --test acceptance -- --nocapture`.

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermotrack::data::{
    grad_histogram, mass_above, render_synth, synth_sequence_in_memory, MotionModel, SynthSpec,
};
use thermotrack::dcf::{self, gaussian_label, RegParams};
use thermotrack::eco::{
    eco_objective, eco_objective_fourier, gaussian_label_coeffs, interpolate_map, learn_joint_gn,
    solve_filter_cg, spatial_reg, ContinuousFilter, FilterOperator, JointConfig,
    ProjectionMatrix, RegularizerParams, SampleMemory, SpatialRegularizer,
};
use thermotrack::eval::{
    accuracy, default_thresholds, eao, evaluate_dataset, ope_success, robustness, run_vot,
    write_reports, Accuracy, EaoInterval, EvalRun, FrameOutcome, Protocol, ReportFiles,
    SequenceTracker, VotOptions,
};
use thermotrack::features::{FeatureChannelMap, MotionConfig, LAYER_INTENSITY};
use thermotrack::fft::Fft2d;
use thermotrack::frame::Frame;
use thermotrack::geometry::BoundingBox;
use thermotrack::tracker::TrackerConfig;
use thermotrack::translate::{
    cgan_loss, cycle_loss, pseudo_tir, translation_distance, DiscriminatorOutput, Domain,
    MappingFn,
};

fn random_features(size: usize, channels: usize, rng: &mut ChaCha8Rng) -> FeatureChannelMap<f64> {
    let values: Vec<f64> = (0..size * size * channels)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    FeatureChannelMap::new(LAYER_INTENSITY, size, channels, values).unwrap()
}

// ---------------------------------------------------------------------
// 1. Closed-form filter solve vs dense per-frequency normal equations.
// ---------------------------------------------------------------------

/// Independent oracle: per-frequency D x D complex normal equations solved
/// by Gaussian elimination with partial pivoting.
fn dense_dcf_solve(
    fft: &mut Fft2d<f64>,
    x: &FeatureChannelMap<f64>,
    y: &dcf::LabelMap<f64>,
    lambda: f64,
) -> Vec<Vec<Complex<f64>>> {
    let n = y.size;
    let d = x.channels;
    let xhat: Vec<Vec<Complex<f64>>> = (0..d).map(|c| fft.forward_real(x.plane(c), n)).collect();
    let yhat = fft.forward_real(y.values(), n);
    let mut out = vec![vec![Complex::new(0.0, 0.0); n * n]; d];
    for k in 0..n * n {
        let mut a = vec![vec![Complex::new(0.0, 0.0); d]; d];
        let mut rhs = vec![Complex::new(0.0, 0.0); d];
        for i in 0..d {
            for j in 0..d {
                a[i][j] = xhat[i][k].conj() * xhat[j][k];
                if i == j {
                    a[i][j] += Complex::new(lambda, 0.0);
                }
            }
            rhs[i] = xhat[i][k].conj() * yhat[k];
        }
        for col in 0..d {
            let mut piv = col;
            for r in col + 1..d {
                if a[r][col].norm() > a[piv][col].norm() {
                    piv = r;
                }
            }
            a.swap(col, piv);
            rhs.swap(col, piv);
            let diag = a[col][col];
            for r in col + 1..d {
                let m = a[r][col] / diag;
                for c2 in col..d {
                    let v = a[col][c2];
                    a[r][c2] -= m * v;
                }
                let v = rhs[col];
                rhs[r] -= m * v;
            }
        }
        let mut g = vec![Complex::new(0.0, 0.0); d];
        for r in (0..d).rev() {
            let mut acc = rhs[r];
            for c2 in r + 1..d {
                acc -= a[r][c2] * g[c2];
            }
            g[r] = acc / a[r][r];
        }
        for (ch, gv) in out.iter_mut().zip(&g) {
            ch[k] = gv.conj();
        }
    }
    out
}

#[test]
fn criterion_01_dcf_closed_form_matches_dense_oracle() {
    let started = Instant::now();
    let mut fft = Fft2d::new();
    let mut worst: f64 = 0.0;
    for &n in &[4usize, 8, 16] {
        for &d in &[1usize, 2, 3] {
            for seed in 0..50u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed * 100 + (n * 10 + d) as u64);
                let x = random_features(n, d, &mut rng);
                let y = gaussian_label(n, 0.1 * n as f64 + 0.5).unwrap();
                let lambda = 10f64.powf(rng.random_range(-4.0..0.0));
                let filt = dcf::solve_dcf(&mut fft, &x, &y, RegParams::new(lambda).unwrap())
                    .unwrap();
                let dense = dense_dcf_solve(&mut fft, &x, &y, lambda);
                let mut num = 0.0;
                let mut den = 0.0;
                for (ch, dch) in filt.channels().iter().zip(&dense) {
                    for (a, b) in ch.iter().zip(dch) {
                        num += (a - b).norm_sqr();
                        den += b.norm_sqr();
                    }
                }
                worst = worst.max((num / den).sqrt());
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(worst < 1e-8, "worst relative error {worst:e}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 PASS: closed-form vs dense normal equations, worst rel err {worst:.2e}, {} ms",
        elapsed.as_millis()
    );
}

// ---------------------------------------------------------------------
// 2. Parseval gate between the spatial and Fourier objectives.
// ---------------------------------------------------------------------

fn tiny_instance(
    seed: u64,
) -> (
    ContinuousFilter<f64>,
    ProjectionMatrix<f64>,
    SampleMemory<f64>,
    SpatialRegularizer<f64>,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fft = Fft2d::new();
    let samples = (seed % 3 + 1) as usize;
    let mut memory = SampleMemory::new(3, 0.05).unwrap();
    for _ in 0..samples {
        let map = random_features(8, 1, &mut rng);
        let z = interpolate_map(&mut fft, &map, 4).unwrap();
        let sigma = rng.random_range(0.04..0.12);
        let label = gaussian_label_coeffs(4, (sigma, sigma), (0.5, 0.5)).unwrap();
        memory.insert(z, label);
    }
    let filt_map = random_features(8, 1, &mut rng);
    let z = interpolate_map(&mut fft, &filt_map, 4).unwrap();
    let mut filter = ContinuousFilter::zeros_like(&z);
    filter.axpy(1.0, &ContinuousFilter {
        channels: z.channels.clone(),
        bandwidths: z.bandwidths.clone(),
    });
    let w = spatial_reg(RegularizerParams {
        base: 1e-2,
        growth: rng.random_range(0.02..0.2),
        radii: (0.2, 0.25),
    })
    .unwrap();
    (filter, ProjectionMatrix::identity(1), memory, w)
}

#[test]
fn criterion_02_parseval_equivalence_of_objectives() {
    let started = Instant::now();
    let mut fft = Fft2d::new();
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let (filter, p, memory, w) = tiny_instance(seed);
        let lambda = 1e-3;
        let spatial = eco_objective(&mut fft, &filter, &p, &memory, &w, lambda).unwrap();
        let fourier = eco_objective_fourier(&filter, &p, &memory, &w, lambda).unwrap();
        worst = worst.max((spatial - fourier).abs() / fourier.abs());
    }
    let elapsed = started.elapsed();
    assert!(worst < 1e-6, "worst relative difference {worst:e}");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 PASS: spatial vs Fourier objective, worst rel diff {worst:.2e}, {} ms",
        elapsed.as_millis()
    );
}

// ---------------------------------------------------------------------
// 3. Conjugate gradients vs a dense solve of the same normal equations.
// ---------------------------------------------------------------------

fn dense_filter_solve(
    op: &FilterOperator<'_, f64>,
    template: &ContinuousFilter<f64>,
) -> ContinuousFilter<f64> {
    let bw = template.common_bandwidth() as isize;
    let mut dof: Vec<(usize, isize, isize, bool)> = Vec::new();
    for (c, &mask) in template.bandwidths.iter().enumerate() {
        let m = mask as isize;
        for ky in -bw..=bw {
            for kx in -bw..=bw {
                if ky.abs() <= m && kx.abs() <= m {
                    dof.push((c, ky, kx, false));
                    dof.push((c, ky, kx, true));
                }
            }
        }
    }
    let n = dof.len();
    let to_filter = |v: &[f64]| -> ContinuousFilter<f64> {
        let mut f = template.clone();
        for ch in &mut f.channels {
            ch.scale(0.0);
        }
        for (i, &(c, ky, kx, imag)) in dof.iter().enumerate() {
            let mut cur = f.channels[c].get(ky, kx);
            if imag {
                cur.im += v[i];
            } else {
                cur.re += v[i];
            }
            f.channels[c].set(ky, kx, cur);
        }
        f
    };
    let from_filter = |f: &ContinuousFilter<f64>| -> Vec<f64> {
        dof.iter()
            .map(|&(c, ky, kx, imag)| {
                let v = f.channels[c].get(ky, kx);
                if imag {
                    v.im
                } else {
                    v.re
                }
            })
            .collect()
    };
    let mut a = vec![vec![0.0f64; n]; n];
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        for (row, v) in from_filter(&op.apply(&to_filter(&e))).into_iter().enumerate() {
            a[row][col] = v;
        }
    }
    let mut b = from_filter(&op.rhs());
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for r in col + 1..n {
            let m = a[r][col] / d;
            if m == 0.0 {
                continue;
            }
            for c2 in col..n {
                a[r][c2] -= m * a[col][c2];
            }
            b[r] -= m * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c2 in r + 1..n {
            acc -= a[r][c2] * x[c2];
        }
        x[r] = acc / a[r][r];
    }
    to_filter(&x)
}

#[test]
fn criterion_03_cg_matches_dense_solver() {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for seed in 0..5u64 {
        let (f0_template, _p, memory, w) = tiny_instance(seed + 40);
        // 81 complex coefficients -> 162 real unknowns (within the 200 cap).
        let mut f0 = f0_template.clone();
        for ch in &mut f0.channels {
            ch.scale(0.0);
        }
        let op = FilterOperator::from_memory(&memory, &w).unwrap();
        let start_objective = op.objective(&f0);
        let (got, stats) = solve_filter_cg(&memory, &w, &f0, 400, 1e-8).unwrap();
        assert!(
            op.objective(&got) <= start_objective * (1.0 + 1e-12),
            "objective increased"
        );
        worst_residual = worst_residual.max(stats.relative_residual);
        let want = dense_filter_solve(&op, &f0);
        let mut num = 0.0;
        let mut den = 0.0;
        for (g, d) in got.channels.iter().zip(&want.channels) {
            for (a, b) in g.data().iter().zip(d.data()) {
                num += (a - b).norm_sqr();
                den += b.norm_sqr();
            }
        }
        worst = worst.max((num / den).sqrt());
    }
    let elapsed = started.elapsed();
    assert!(worst < 1e-8, "worst relative error {worst:e}");
    assert!(worst_residual <= 1e-6, "residual {worst_residual:e}");
    println!(
        "ACCEPTANCE 3 PASS: CG vs dense solve on 162 unknowns, worst rel err {worst:.2e}, \
         worst residual {worst_residual:.2e}, {} ms",
        elapsed.as_millis()
    );
}

// ---------------------------------------------------------------------
// 4. Gauss-Newton objective monotonicity.
// ---------------------------------------------------------------------

#[test]
fn criterion_04_gauss_newton_is_monotone() {
    let started = Instant::now();
    let mut fft = Fft2d::new();
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let map = random_features(8, 3, &mut rng);
        let sample = interpolate_map(&mut fft, &map, 4).unwrap();
        let label = gaussian_label_coeffs(4, (0.06, 0.06), (0.5, 0.5)).unwrap();
        let w = spatial_reg(RegularizerParams {
            base: 1e-2,
            growth: 0.05,
            radii: (0.2, 0.2),
        })
        .unwrap();
        let trained = learn_joint_gn(
            &sample,
            &label,
            &w,
            &JointConfig {
                output_channels: Some(2),
                gn_iterations: 5,
                cg_iterations: 80,
                tolerance: 1e-8,
                projection_reg: 1e-4,
            },
        )
        .unwrap();
        let t = &trained.objective_trace;
        assert_eq!(t.len(), 6);
        for i in 1..t.len() {
            assert!(
                t[i] <= t[i - 1] * (1.0 + 1e-6),
                "seed {seed}: objective rose {} -> {}",
                t[i - 1],
                t[i]
            );
        }
    }
    println!(
        "ACCEPTANCE 4 PASS: joint optimization objective non-increasing over 5 iterations \
         on 10 instances, {} ms",
        started.elapsed().as_millis()
    );
}

// ---------------------------------------------------------------------
// 5. End-to-end tracking on the easy synthetic suite.
// ---------------------------------------------------------------------

fn easy_suite() -> Vec<SynthSpec> {
    let base = SynthSpec {
        width: 192,
        height: 144,
        length: 100,
        target_size: (28.0, 28.0),
        foreground: 205,
        background: 55,
        ..Default::default()
    };
    vec![
        SynthSpec {
            motion: MotionModel::Static,
            noise_sigma: 2.0,
            seed: 11,
            ..base.clone()
        },
        SynthSpec {
            motion: MotionModel::Linear { vx: 1.2, vy: 0.0 },
            start_center: Some((30.0, 72.0)),
            noise_sigma: 3.0,
            seed: 12,
            ..base.clone()
        },
        SynthSpec {
            motion: MotionModel::Linear { vx: 0.0, vy: -0.7 },
            start_center: Some((96.0, 110.0)),
            noise_sigma: 5.0,
            seed: 13,
            ..base.clone()
        },
        SynthSpec {
            motion: MotionModel::Linear { vx: 1.0, vy: 0.5 },
            start_center: Some((48.0, 40.0)),
            noise_sigma: 4.0,
            seed: 14,
            ..base.clone()
        },
        // Peak speed amp * 2 pi / period = 3 px/frame.
        SynthSpec {
            motion: MotionModel::Sinusoidal {
                amp_x: 30.0,
                amp_y: 10.0,
                period: 63.0,
            },
            noise_sigma: 3.0,
            seed: 15,
            ..base
        },
    ]
}

#[test]
fn criterion_05_easy_synthetic_suite_tracks_cleanly() {
    let started = Instant::now();
    let mut total_overlap = 0.0;
    let mut overlap_count = 0usize;
    let mut failures = 0usize;
    for (i, spec) in easy_suite().iter().enumerate() {
        let seq = synth_sequence_in_memory::<f64>(spec, &format!("easy{i}")).unwrap();
        let mut tracker =
            thermotrack::eval::CorrelationTracker::new(TrackerConfig::<f64>::default());
        let run = run_vot(&mut tracker, &seq, &VotOptions::default()).unwrap();
        failures += run.failures.len();
        for v in run.tracked_overlaps() {
            total_overlap += v;
            overlap_count += 1;
        }
    }
    let mean_iou = total_overlap / overlap_count as f64;
    let elapsed = started.elapsed();
    assert_eq!(failures, 0, "expected a failure-free easy suite");
    assert!(mean_iou >= 0.7, "mean IoU {mean_iou:.3}");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 5 PASS: easy suite mean IoU {mean_iou:.3}, 0 failures, {:.1} s",
        elapsed.as_secs_f64()
    );
}

// ---------------------------------------------------------------------
// 6. Motion channel helps on the low-contrast suite (directional).
// ---------------------------------------------------------------------

fn low_contrast_spec(seed: u64) -> SynthSpec {
    SynthSpec {
        width: 160,
        height: 120,
        length: 60,
        target_size: (12.0, 12.0),
        foreground: 92,
        background: 80,
        noise_sigma: 4.0,
        motion: MotionModel::Linear { vx: 1.9, vy: 1.0 },
        start_center: Some((35.0, 34.0)),
        seed,
        ..Default::default()
    }
}

fn trend_config(motion: bool) -> TrackerConfig<f64> {
    let mut cfg = TrackerConfig::<f64> {
        patch_size: 80,
        gn_iterations: 2,
        cg_first_frame: 30,
        ..Default::default()
    };
    cfg.channels.motion = MotionConfig {
        // The suite's contrast is 12; a threshold of 10 fires on target
        // motion while staying above most noise differences.
        threshold: 10.0,
        enabled: motion,
    };
    cfg
}

#[test]
fn criterion_06_motion_channel_trend_on_low_contrast_suite() {
    let started = Instant::now();
    let mut failures = [0usize; 2];
    let mut eao_sums = [0.0f64; 2];
    for seed in 0..10u64 {
        let seq = synth_sequence_in_memory::<f64>(&low_contrast_spec(100 + seed), "low").unwrap();
        for (slot, motion) in [(0usize, false), (1usize, true)] {
            let mut tracker =
                thermotrack::eval::CorrelationTracker::new(trend_config(motion));
            let run = run_vot(&mut tracker, &seq, &VotOptions::default()).unwrap();
            failures[slot] += run.failures.len();
            let curve = eao(&[run], EaoInterval::Auto).unwrap();
            eao_sums[slot] += curve.eao;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        failures[1] <= failures[0],
        "failures with motion {} > without {}",
        failures[1],
        failures[0]
    );
    assert!(
        eao_sums[1] >= eao_sums[0],
        "mean EAO with motion {:.4} < without {:.4}",
        eao_sums[1] / 10.0,
        eao_sums[0] / 10.0
    );
    println!(
        "ACCEPTANCE 6 PASS: motion channel failures {} <= {} and mean EAO {:.3} >= {:.3}, {:.1} s",
        failures[1],
        failures[0],
        eao_sums[1] / 10.0,
        eao_sums[0] / 10.0,
        elapsed.as_secs_f64()
    );
}

// ---------------------------------------------------------------------
// 7. Metric arithmetic against hand-derived values.
// ---------------------------------------------------------------------

#[test]
fn criterion_07_metrics_match_hand_derivations() {
    let started = Instant::now();

    // Reset schedule: a tracker lost from the start fails 4 times in 20
    // frames (failures at 1, 7, 13, 19).
    {
        struct Lost;
        impl SequenceTracker<f64> for Lost {
            fn init(&mut self, _f: &Frame, _b: BoundingBox<f64>) -> thermotrack::Result<()> {
                Ok(())
            }
            fn track(&mut self, _f: &Frame) -> thermotrack::Result<BoundingBox<f64>> {
                BoundingBox::new(1e6, 1e6, 1.0, 1.0)
            }
        }
        let frames = vec![Frame::filled(32, 32, 0); 20];
        let gt = vec![BoundingBox::new(8.0, 8.0, 8.0, 8.0).unwrap(); 20];
        let seq = thermotrack::sequence::Sequence::in_memory("t".into(), frames, gt).unwrap();
        let run = run_vot(&mut Lost, &seq, &VotOptions::default()).unwrap();
        assert_eq!(run.failures, vec![1, 7, 13, 19]);
    }

    let tracked = |n: usize, v: f64| -> Vec<FrameOutcome<f64>> {
        let mut frames = vec![FrameOutcome::Init];
        frames.extend(std::iter::repeat_n(FrameOutcome::Tracked(v), n - 1));
        frames
    };
    let run = |name: &str, frames: Vec<FrameOutcome<f64>>, failures: Vec<usize>, reinits: Vec<usize>| {
        let n = frames.len();
        EvalRun {
            sequence: name.to_string(),
            frames,
            failures,
            reinits,
            boxes: vec![None; n],
        }
    };

    // Burn-in case: 40 frames at overlap 0.5, failure at 6, re-init at 11;
    // the mean over counted frames stays exactly 0.5.
    {
        let mut frames = vec![FrameOutcome::Init];
        frames.extend(std::iter::repeat_n(FrameOutcome::Tracked(0.5), 5));
        frames.push(FrameOutcome::Failure);
        frames.extend(std::iter::repeat_n(FrameOutcome::Skipped, 4));
        frames.push(FrameOutcome::Init);
        frames.extend(std::iter::repeat_n(FrameOutcome::Tracked(0.5), 28));
        let r = run("burnin", frames, vec![6], vec![11]);
        let a: Accuracy<f64> = accuracy(&[r]).unwrap();
        assert!((a.value - 0.5).abs() <= 1e-9);
    }

    // Two sequences with means 0.4 and 0.6 average to 0.5.
    {
        let a = run("a", tracked(20, 0.4), vec![], vec![]);
        let b = run("b", tracked(50, 0.6), vec![], vec![]);
        let acc = accuracy(&[a, b]).unwrap();
        assert!((acc.value - 0.5).abs() <= 1e-9);
    }

    // Robustness of failure counts {2, 0, 1} is 1.
    {
        let a = run("a", tracked(10, 1.0), vec![2, 8], vec![]);
        let b = run("b", tracked(10, 1.0), vec![], vec![]);
        let c = run("c", tracked(10, 1.0), vec![4], vec![]);
        assert!((robustness(&[a, b, c]).unwrap() - 1.0).abs() <= 1e-9);
    }

    // EAO: constant 0.5 without failure -> EAO over [10, 50] is 0.5; ten
    // perfect frames then a failure -> phi(20) = 0.5; perfect run -> 1.0.
    {
        let r = run("c", tracked(100, 0.5), vec![], vec![]);
        let curve = eao(&[r], EaoInterval::Fixed(10, 50)).unwrap();
        assert!((curve.eao - 0.5).abs() <= 1e-9);

        let mut frames = vec![FrameOutcome::Init];
        frames.extend(std::iter::repeat_n(FrameOutcome::Tracked(1.0), 10));
        frames.push(FrameOutcome::Failure);
        let r = run("f", frames, vec![11], vec![]);
        let curve = eao(&[r], EaoInterval::Fixed(20, 20)).unwrap();
        assert!((curve.phi[19] - 0.5).abs() <= 1e-9);

        let r = run("p", tracked(80, 1.0), vec![], vec![]);
        let curve = eao(&[r], EaoInterval::Auto).unwrap();
        assert!((curve.eao - 1.0).abs() <= 1e-9);
    }

    // Success/AUC: all-ones run has AUC 100/101 under default sampling;
    // bimodal overlaps give success(0.5) = 0.5; all-zero AUC is 0.
    {
        let r = run("s", tracked(51, 1.0), vec![], vec![]);
        let curve = ope_success(&r, &default_thresholds()).unwrap();
        assert!((curve.auc - 100.0 / 101.0).abs() <= 1e-9);

        let mut frames = vec![FrameOutcome::Init];
        frames.extend(std::iter::repeat_n(FrameOutcome::Tracked(0.25), 50));
        frames.extend(std::iter::repeat_n(FrameOutcome::Tracked(0.75), 50));
        let r = run("m", frames, vec![], vec![]);
        let curve = ope_success(&r, &[0.5]).unwrap();
        assert!((curve.success[0] - 0.5).abs() <= 1e-9);

        let r = run("z", tracked(51, 0.0), vec![], vec![]);
        let curve = ope_success(&r, &default_thresholds()).unwrap();
        assert!(curve.auc.abs() <= 1e-9);
    }

    println!(
        "ACCEPTANCE 7 PASS: accuracy/robustness/EAO/AUC reproduce hand-derived values, {} ms",
        started.elapsed().as_millis()
    );
}

// ---------------------------------------------------------------------
// 8. Translation-loss arithmetic.
// ---------------------------------------------------------------------

#[test]
fn criterion_08_translation_math() {
    let started = Instant::now();

    let real = DiscriminatorOutput::new(vec![0.5; 16]);
    let fake = DiscriminatorOutput::new(vec![0.5; 16]);
    let loss: f64 = cgan_loss(&real, &fake).unwrap();
    assert!((loss + 2.0 * std::f64::consts::LN_2).abs() <= 1e-12);

    let g = MappingFn::affine(Domain::X, Domain::Y, 1.0, 10.0, false);
    let f = MappingFn::affine(Domain::Y, Domain::X, 1.0, -10.0, false);
    let x = vec![thermotrack::translate::RealImage::new(4, 4, vec![37.0; 16]).unwrap()];
    let y = vec![thermotrack::translate::RealImage::new(4, 4, vec![81.0; 16]).unwrap()];
    let cyc = cycle_loss(&g, &f, &x, &y).unwrap();
    assert_eq!(cyc, 0.0);

    let a = vec![Frame::filled(12, 9, 100); 4];
    let b = vec![Frame::filled(12, 9, 101); 4];
    let d: f64 = translation_distance(&a, &b).unwrap();
    assert!((d - 1.0).abs() <= 1e-12);

    println!(
        "ACCEPTANCE 8 PASS: adversarial, cycle and distance arithmetic exact, {} ms",
        started.elapsed().as_millis()
    );
}

// ---------------------------------------------------------------------
// 9. Determinism of full evaluations.
// ---------------------------------------------------------------------

#[test]
fn criterion_09_identical_evaluations_are_byte_identical() {
    let started = Instant::now();
    let specs: Vec<SynthSpec> = (0..2)
        .map(|i| SynthSpec {
            length: 40,
            noise_sigma: 3.0,
            seed: 70 + i,
            motion: MotionModel::Linear { vx: 2.0, vy: 0.0 },
            start_center: Some((50.0, 72.0)),
            ..Default::default()
        })
        .collect();
    let sequences: Vec<_> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| synth_sequence_in_memory::<f64>(s, &format!("d{i}")).unwrap())
        .collect();
    let cfg = TrackerConfig::<f64> {
        patch_size: 80,
        gn_iterations: 2,
        cg_first_frame: 20,
        ..Default::default()
    };

    let mut blobs = Vec::new();
    for tag in ["a", "b"] {
        let runs = evaluate_dataset(&sequences, &cfg, Protocol::Vot, &VotOptions::default(), 2)
            .unwrap();
        let acc = accuracy(&runs).unwrap();
        let rob = robustness(&runs).unwrap();
        let curve = eao(&runs, EaoInterval::Auto).unwrap();
        let dir = std::env::temp_dir().join(format!(
            "thermotrack-acceptance-{}-{tag}",
            std::process::id()
        ));
        let written = write_reports(
            &dir,
            &ReportFiles {
                protocol: "vot",
                accuracy: Some(&acc),
                robustness: Some(rob),
                eao: Some(&curve),
                success: None,
                runs: &runs,
                attributes: None,
            },
        )
        .unwrap();
        let mut blob = Vec::new();
        for path in written {
            blob.extend(std::fs::read(path).unwrap());
        }
        std::fs::remove_dir_all(&dir).unwrap();
        blobs.push(blob);
    }
    assert_eq!(blobs[0], blobs[1], "report bytes differ between runs");
    println!(
        "ACCEPTANCE 9 PASS: two identical evaluations emitted byte-identical reports, {:.1} s",
        started.elapsed().as_secs_f64()
    );
}

// ---------------------------------------------------------------------
// 10. Statistics tooling and the pseudo-thermal low-pass property.
// ---------------------------------------------------------------------

#[test]
fn criterion_10_statistics_tooling() {
    let started = Instant::now();

    let constant = Frame::filled(32, 32, 144);
    let hist = grad_histogram::<f64>(&[constant], 16, (0.0, 128.0)).unwrap();
    assert_eq!(hist.frequencies[0], 1.0);
    assert!(hist.frequencies[1..].iter().all(|&f| f == 0.0));

    // A sharp high-contrast texture has gradient mass in the upper bins;
    // inverting the low-pass component must not add any.
    let (frames, _) = render_synth(&SynthSpec {
        length: 3,
        noise_sigma: 30.0,
        foreground: 240,
        background: 20,
        seed: 5,
        ..Default::default()
    })
    .unwrap();
    let bins = 64usize;
    let range = (0.0f64, 128.0);
    let input_hist = grad_histogram(&frames, bins, range).unwrap();
    let translated: Vec<Frame> = frames.iter().map(|f| pseudo_tir(f, 3)).collect();
    let output_hist = grad_histogram(&translated, bins, range).unwrap();
    let threshold = range.1 * 50.0 / bins as f64;
    let input_mass = mass_above(&input_hist, threshold);
    let output_mass = mass_above(&output_hist, threshold);
    assert!(
        output_mass <= input_mass,
        "high-frequency mass grew: {output_mass:.4} > {input_mass:.4}"
    );
    assert!(input_mass > 0.0, "suite input has no high-gradient mass");

    println!(
        "ACCEPTANCE 10 PASS: histogram mass checks (high-band {input_mass:.4} -> {output_mass:.4}), {} ms",
        started.elapsed().as_millis()
    );
}
