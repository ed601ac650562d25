//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use clipnoise::bussgang::{beta_analytic, beta_empirical};
use clipnoise::clipper::{clip_frame, normal_pdf, ClipConfig};
use clipnoise::experiments::{compare_noise, Grid, SweepSpec};
use clipnoise::noise_model::ClipNoisePdf;
use clipnoise::signal_chain::{
    build_hermitian, imag_residue, map_bits, FrameSource, QamConstellation, IMAG_RESIDUE_TOL,
};
use clipnoise::stats::quadrature::adaptive_simpson;
use clipnoise::stats::{hellinger, kl_divergence, ks_statistic, EmpiricalPdf, Moments};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const SIGMA: f64 = 1.0;

fn spec_at(frames: u64, seed: u64) -> SweepSpec {
    SweepSpec {
        grid: Grid::Diagonal(vec![1.0]),
        frame_len: 1024,
        frames,
        qam_order: 16,
        seed,
        bins: 200,
    }
}

/// 10^7 chain samples per point.
const FRAMES_1E7: u64 = 9766;

fn c1_beta() -> Outcome {
    let cfg = ClipConfig::new(1.0, 1.0, SIGMA).unwrap();
    let phi = |x: f64| normal_pdf(x, SIGMA);
    let oracle = adaptive_simpson(|x| -x * phi(x), -40.0, -1.0, 1e-15)
        + adaptive_simpson(|x| x * x * phi(x), -1.0, 1.0, 1e-15)
        + adaptive_simpson(|x| x * phi(x), 1.0, 40.0, 1e-15);
    let beta = beta_analytic(&cfg);

    // 10^6 chain samples.
    let source = FrameSource::new(1024, QamConstellation::new(16).unwrap(), 101).unwrap();
    let chain_cfg = ClipConfig::new(1.0, 1.0, source.sigma_x()).unwrap();
    let (mut x, mut xc) = (Vec::new(), Vec::new());
    for i in 0..977 {
        let f = source.frame(i).unwrap();
        xc.extend(clip_frame(&f, &chain_cfg).samples);
        x.extend(f.samples);
    }
    let emp = beta_empirical(&x, &xc).unwrap();
    let pass = (beta - oracle).abs() < 1e-9 && (emp - beta).abs() < 0.005;
    outcome(
        pass,
        format!(
            "beta={beta:.12} quadrature={oracle:.12} |diff|={:.1e} (tol 1e-9); empirical({})={emp:.6} |diff|={:.1e} (tol 5e-3)",
            (beta - oracle).abs(),
            x.len(),
            (emp - beta).abs()
        ),
    )
}

const GRID16: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

fn c2_normalization() -> Outcome {
    let mut worst = 0.0f64;
    for a1 in GRID16 {
        for a2 in GRID16 {
            let m = ClipNoisePdf::new(&ClipConfig::new(a1, a2, SIGMA).unwrap()).unwrap();
            worst = worst.max((m.total_mass() - 1.0).abs());
        }
    }
    outcome(worst < 1e-6, format!("max |mass - 1| over 16 configs = {worst:.2e} (tol 1e-6)"))
}

/// 50 test points: 16 in each tail, 18 between the knots, none within
/// `guard` of a knot.
fn fd_points(m: &ClipNoisePdf, guard: f64) -> Vec<f64> {
    let (k1, k2) = (m.lower_knot(), m.upper_knot());
    let spread = 4.0 * m.sigma_x();
    let mut pts = Vec::with_capacity(50);
    for i in 0..16 {
        let t = (i as f64 + 0.5) / 16.0;
        pts.push(k1 - guard - t * spread);
        pts.push(k2 + guard + t * spread);
    }
    for i in 0..18 {
        let z = k1 + (k2 - k1) * (i as f64 + 0.5) / 18.0;
        if (z - k1).abs() > guard && (z - k2).abs() > guard {
            pts.push(z);
        }
    }
    pts
}

fn c3_cdf_pdf() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for a1 in GRID16 {
        for a2 in GRID16 {
            let m = ClipNoisePdf::new(&ClipConfig::new(a1, a2, SIGMA).unwrap()).unwrap();
            let h = 1e-5 * m.sigma_x();
            for z in fd_points(&m, 20.0 * h) {
                // Centered five-point stencil.
                let d = (m.cdf(z - 2.0 * h) - 8.0 * m.cdf(z - h) + 8.0 * m.cdf(z + h)
                    - m.cdf(z + 2.0 * h))
                    / (12.0 * h);
                worst = worst.max((d - m.pdf(z)).abs());
                count += 1;
            }
        }
    }
    outcome(
        worst < 1e-6 && count == 16 * 50,
        format!("{count} points, max |dF/dz - f| = {worst:.2e} (tol 1e-6)"),
    )
}

fn c4_pushforward() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, (a1, a2)) in [(1.0, 1.0), (0.5, 2.0), (2.0, 3.0)].into_iter().enumerate() {
        let m = ClipNoisePdf::new(&ClipConfig::new(a1, a2, SIGMA).unwrap()).unwrap();
        let z = m.sample(1_000_000, 4000 + i as u64);
        let d = ks_statistic(&z, |g| m.cdf(g));
        pass &= d < 0.0015;
        parts.push(format!("({a1},{a2}) KS={d:.5}"));
    }
    outcome(pass, format!("{} (tol 0.0015)", parts.join(", ")))
}

fn c5_kurtosis_trend() -> Outcome {
    let spec = spec_at(FRAMES_1E7, 5);
    let k4 = clipnoise::experiments::clipped_moments(&spec, 4.0, 4.0).unwrap();
    let k1 = clipnoise::experiments::clipped_moments(&spec, 1.0, 1.0).unwrap();
    let (v4, v1) = (k4.kurtosis().unwrap(), k1.kurtosis().unwrap());
    outcome(
        (v4 - 3.0).abs() < 0.05 && (v1 - 3.0).abs() > 0.5 && k4.count() >= 10_000_000,
        format!(
            "n={} Kurt(4,4)={v4:.4} (|K-3|<0.05), Kurt(1,1)={v1:.4} (|K-3|>0.5)",
            k4.count()
        ),
    )
}

const FIG_GRID: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

fn c6_hellinger_trend() -> Outcome {
    let spec = spec_at(FRAMES_1E7, 6);
    let mut pass = true;
    let mut parts = Vec::new();
    for a1 in FIG_GRID {
        let (h1, h2) = compare_noise(&spec, a1, 2.0).unwrap().hellinger().unwrap();
        pass &= h1 < h2 && h1 < 0.05;
        parts.push(format!("a1={a1}: H1={h1:.4} H2={h2:.4}"));
    }
    outcome(pass, format!("alpha2=2, {} (need H1<H2, H1<0.05)", parts.join("; ")))
}

fn c7_kl_trend() -> Outcome {
    let spec = spec_at(FRAMES_1E7, 7);
    let mut pass = true;
    let mut parts = Vec::new();
    for a1 in FIG_GRID {
        let (d1, d2) = compare_noise(&spec, a1, 2.0).unwrap().kl();
        let (d1, d2) = (d1.unwrap(), d2.unwrap());
        pass &= d1 < d2;
        parts.push(format!("a1={a1}: KL1={d1:.5} KL2={d2:.4}"));
    }
    let (d1, d2) = compare_noise(&spec, 5.0, 2.0).unwrap().kl();
    let (d1, d2) = (d1.unwrap(), d2.unwrap());
    pass &= d2 > 2.0 * d1;
    parts.push(format!("(5,2): KL1={d1:.5} KL2={d2:.4} (need KL2 > 2 KL1)"));
    outcome(pass, format!("alpha2=2, {}", parts.join("; ")))
}

fn c8_metric_kernels() -> Outcome {
    let (lo, hi, bins) = (-30.0, 30.0, 200_000);
    let pairs = [
        // (mu_p, s_p, mu_g, s_g)
        (0.0, 1.0, 1.0, 1.0),
        (0.0, 1.0, 0.0, 2.0),
        (0.5, 0.7, -0.3, 1.6),
    ];
    let mut worst = 0.0f64;
    for (mp, sp, mg, sg) in pairs {
        let p = EmpiricalPdf::tabulate(|z| normal_pdf(z - mp, sp), lo, hi, bins).unwrap();
        let g = |z: f64| normal_pdf(z - mg, sg);
        let h = hellinger(&p, g).unwrap();
        let d = kl_divergence(&p, g).unwrap();
        let s2 = sp * sp + sg * sg;
        let h_closed =
            (1.0 - (2.0 * sp * sg / s2).sqrt() * (-(mp - mg) * (mp - mg) / (4.0 * s2)).exp()).sqrt();
        let d_closed = (sg / sp).ln() + (sp * sp + (mp - mg) * (mp - mg)) / (2.0 * sg * sg) - 0.5;
        worst = worst.max((h - h_closed).abs()).max((d - d_closed).abs());
    }
    outcome(worst < 1e-4, format!("3 Gaussian pairs, max |numeric - closed form| = {worst:.2e} (tol 1e-4)"))
}

fn c9_chain_sanity() -> Outcome {
    let q = QamConstellation::new(16).unwrap();
    let source = FrameSource::new(1024, q.clone(), 9).unwrap();
    let frames = 10_000u64;
    let mut worst_residue = 0.0f64;
    let mut pooled = Moments::new();
    let mut mean_var = 0.0;
    for i in 0..frames {
        if i < 200 {
            let syms = map_bits(&source.frame_bits(i), &q).unwrap();
            worst_residue = worst_residue.max(imag_residue(&build_hermitian(&syms).unwrap()).unwrap());
        }
        let f = source.frame(i).unwrap();
        let m = Moments::from_slice(&f.samples);
        mean_var += m.variance();
        pooled.merge(&m);
    }
    mean_var /= frames as f64;
    let sigma2 = source.sigma_x().powi(2);
    let kurt = pooled.kurtosis().unwrap();
    let rel = (mean_var - sigma2).abs() / sigma2;
    outcome(
        worst_residue < IMAG_RESIDUE_TOL && (kurt - 3.0).abs() < 0.05 && rel < 0.01,
        format!(
            "residue={worst_residue:.1e} (tol 1e-9); kurtosis({})={kurt:.4} (3+-0.05); variance={mean_var:.5} vs {sigma2:.5} rel {rel:.1e} (tol 1e-2)",
            pooled.count()
        ),
    )
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_clipnoise");
    let run = |cmd: &[&str], name: &str| -> Vec<String> {
        let out = dir.path().join(name);
        let status = Command::new(exe)
            .args(cmd)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success(), "{cmd:?} failed");
        std::fs::read_to_string(out)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_owned)
            .collect()
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for cmd in [
        &["kurtosis", "--alpha-grid", "1:2:0.5", "--n", "256", "--frames", "200", "--seed", "7"][..],
        &["hellinger", "--alpha-grid", "1,2", "--alpha2", "2", "--n", "256", "--frames", "400"][..],
        &["pdf", "--alpha1", "1", "--alpha2", "2", "--samples", "200000", "--bins", "50"][..],
    ] {
        let a = run(cmd, "a.csv");
        let b = run(cmd, "b.csv");
        pass &= a == b && a.len() > 1;
        parts.push(format!("{} ({} rows)", cmd[0], a.len() - 1));
    }
    outcome(pass, format!("identical data rows on rerun: {}", parts.join(", ")))
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 beta correctness", Some(Duration::from_secs(10)), c1_beta),
        ("2 pdf normalization", Some(Duration::from_secs(1)), c2_normalization),
        ("3 cdf/pdf consistency", Some(Duration::from_secs(1)), c3_cdf_pdf),
        ("4 pushforward fidelity", Some(Duration::from_secs(30)), c4_pushforward),
        ("5 kurtosis trend", Some(Duration::from_secs(120)), c5_kurtosis_trend),
        ("6 Hellinger trend", Some(Duration::from_secs(300)), c6_hellinger_trend),
        ("7 KL trend", Some(Duration::from_secs(300)), c7_kl_trend),
        ("8 metric kernels vs closed forms", None, c8_metric_kernels),
        ("9 chain sanity", None, c9_chain_sanity),
        ("10 CLI determinism", None, c10_determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed < b);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = budget.map_or(String::new(), |b| format!(" / budget {:.0?}", b));
        println!(
            "[{}] criterion {name}: {} [{:.2?}{budget}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
