use clipnoise::clipper::ClipConfig;
use clipnoise::experiments::{pdf_overlay, Grid, SweepSpec};
use clipnoise::noise_model::ClipNoisePdf;

fn spec(frames: u64) -> SweepSpec {
    SweepSpec {
        grid: Grid::Diagonal(vec![1.0]),
        frame_len: 256,
        frames,
        qam_order: 16,
        seed: 11,
        bins: 120,
    }
}

#[test]
fn analytic_column_carries_the_model_mass() {
    let ov = pdf_overlay(1.5, 1.5, &spec(800)).unwrap();
    assert_eq!(ov.rows.len(), 120);
    let w = ov.bin_width;
    let lo = ov.rows[0].z - w / 2.0;
    let hi = ov.rows[119].z + w / 2.0;
    let g1: f64 = ov.rows.iter().map(|r| r.g1_analytic * w).sum();
    let q: f64 = ov.rows.iter().map(|r| r.q_empirical * w).sum();
    let model = ClipNoisePdf::new(&ClipConfig::new(1.5, 1.5, 1.0).unwrap()).unwrap();
    let z_scale = (254.0f64 / 256.0).sqrt();
    let expect = model.cdf(hi / z_scale) - model.cdf(lo / z_scale);
    assert!((g1 - expect).abs() < 1e-9 || (g1 - expect).abs() < 1e-3 * expect);
    assert!(g1 > 1.0 - 1e-3, "{g1}");
    assert!((q - 1.0).abs() < 1e-12);
}

#[test]
fn symmetric_clipping_peaks_at_zero() {
    let ov = pdf_overlay(2.0, 2.0, &spec(400)).unwrap();
    let peak = ov
        .rows
        .iter()
        .max_by(|a, b| a.g1_analytic.total_cmp(&b.g1_analytic))
        .unwrap();
    assert!(peak.z.abs() < 2.0 * ov.bin_width);
    let emp = ov
        .rows
        .iter()
        .max_by(|a, b| a.q_empirical.total_cmp(&b.q_empirical))
        .unwrap();
    assert!((emp.z - peak.z).abs() < 3.0 * ov.bin_width);
}

#[test]
fn too_few_samples_is_rejected() {
    assert!(pdf_overlay(1.0, 1.0, &spec(10)).is_err());
}
