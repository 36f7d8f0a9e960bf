use rapidec::fourier::{inverse, parseval_defect, roundtrip_error, transform, FourierConfig};
use rapidec::{Family, GridPolicy, Net};
use std::f64::consts::PI;

#[test]
fn gaussian_is_self_dual_up_to_scaling() {
    // (2 pi)^{-1/2} int exp(-x^2) exp(-i x xi) dx = 2^{-1/2} exp(-xi^2 / 4)
    let net = Net::on_real_line(Family::GaussianPeak { p: 0.0 }).unwrap();
    let grid = net.grid(0.5, &GridPolicy::default(), 0, 0).unwrap();
    let spec = transform(&net, 0.5, &grid, &FourierConfig::default()).unwrap();
    let axis = &spec.axes[0];
    let worst = axis
        .xi
        .iter()
        .zip(&axis.values)
        .map(|(&xi, v)| (v - (-xi * xi / 4.0).exp() / 2f64.sqrt()).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn transform_is_linear_in_the_amplitude() {
    let base = Net::on_real_line(Family::GaussianPeak { p: 0.0 }).unwrap();
    let peak = Net::on_real_line(Family::GaussianPeak { p: 1.0 }).unwrap();
    let eps = 0.25;
    let grid = base.grid(eps, &GridPolicy::default(), 0, 0).unwrap();
    let cfg = FourierConfig::default();
    let a = transform(&base, eps, &grid, &cfg).unwrap().dense();
    let b = transform(&peak, eps, &grid, &cfg).unwrap().dense();
    for (x, y) in a.iter().zip(&b) {
        assert!((x / eps - y).norm() < 1e-14);
    }
}

#[test]
fn modulation_shifts_the_spectrum() {
    // exp(i x / eps) phi(x) has transform phi_hat(xi - 1/eps); its modulus
    // peaks near xi = 1/eps.
    let net = Net::on_real_line(Family::Oscillatory).unwrap();
    let cfg = FourierConfig::default();
    for eps in [0.2, 0.05] {
        let grid = net.grid(eps, &GridPolicy::default(), 0, 0).unwrap();
        let spec = transform(&net, eps, &grid, &cfg).unwrap();
        let axis = &spec.axes[0];
        let (k, _) = axis
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        assert!((axis.xi[k] - 1.0 / eps).abs() <= axis.spacing, "eps={eps}: peak at {}", axis.xi[k]);
    }
}

#[test]
fn roundtrip_and_parseval_hold_on_tensor_nets() {
    let net = rapidec::suite::suite_net::<f64>("tensor_2d").unwrap().unwrap();
    let cfg = FourierConfig::default();
    let grid = net.grid(0.3, &GridPolicy::default(), 0, 0).unwrap();
    assert!(roundtrip_error(&net, 0.3, &grid, &cfg).unwrap().relative < 1e-12);
    assert!(parseval_defect(&net, 0.3, &grid, &cfg).unwrap() < 1e-12);
    let spec = transform(&net, 0.3, &grid, &cfg).unwrap();
    assert_eq!(inverse(&spec).len(), grid.node_count());
    assert!(spec.axes[0].spacing > 0.0 && spec.axes[0].spacing < 2.0 * PI);
}

#[test]
fn half_line_has_no_fourier_scale() {
    let net = rapidec::suite::suite_net::<f64>("half_line_gaussian").unwrap().unwrap();
    let grid = net.grid(0.3, &GridPolicy::default(), 0, 0).unwrap();
    assert!(matches!(
        transform(&net, 0.3, &grid, &FourierConfig::default()),
        Err(rapidec::Error::NotApplicable(_))
    ));
}
