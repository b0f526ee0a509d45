use thinfrac::constants::c_closed;
use thinfrac::geometry::{BaseDomain, FractionalParams, ThinFilm};
use thinfrac::kernelquad::{self, box_seminorm_mc, McBox, QuadratureSpec};
use thinfrac::testfns::{linear_seminorm_1d, reference_seminorm_1d, Profile, TestFunction};
use thinfrac::Error;

fn film(d: u32, eps: f64) -> ThinFilm {
    ThinFilm::new(BaseDomain::unit_for_dimension(d).unwrap(), eps).unwrap()
}

#[test]
fn sandwich_ratio_tends_to_one() {
    let spec = QuadratureSpec::graded_grid(16);
    for tag in ["vertical-linear", "vertical-sine:c=2", "planar-sine:k=1+vertical-linear"] {
        let f: TestFunction = tag.parse().unwrap();
        for s in [0.25, 0.5, 0.75] {
            let params = FractionalParams::quadratic(2, s).unwrap();
            let c = c_closed(s, 2).unwrap();
            let mut gaps = Vec::new();
            for eps in [1e-1, 1e-2, 1e-3] {
                let film = film(2, eps).with_margin(0.1).unwrap();
                let v = kernelquad::vertical_seminorm(&f, &film, &params, &spec).unwrap().value;
                let e = kernelquad::seminorm(&f, &film.interior(), &params, &spec).unwrap().value;
                gaps.push((c * v / e - 1.0).abs());
            }
            assert!(gaps[2] < gaps[0], "{tag} s={s}: {gaps:?}");
            assert!(gaps[2] < 0.02, "{tag} s={s}: {gaps:?}");
        }
    }
}

#[test]
fn vertical_functional_examples() {
    let spec = QuadratureSpec::default();
    let params = FractionalParams::quadratic(2, 0.3).unwrap();
    let film = film(2, 0.01).with_margin(0.1).unwrap();
    let planar = kernelquad::vertical_seminorm(&TestFunction::planar_sine(vec![1]), &film, &params, &spec).unwrap();
    assert_eq!(planar.value, 0.0);
    let v = kernelquad::vertical_seminorm(&TestFunction::vertical(Profile::Linear), &film, &params, &spec).unwrap();
    let exact = 0.8 * 0.01f64.powf(0.4) / (0.7 * 2.4);
    assert!((v.value - exact).abs() <= 1e-12 * exact);
}

#[test]
fn monte_carlo_matches_one_dimensional_oracle() {
    let bx = McBox::new(vec![0.0], vec![1.0]);
    for (s, p) in [(0.3, 2.0), (0.6, 3.0), (0.5, 1.0)] {
        let spec = QuadratureSpec::monte_carlo(2_000_000, 17);
        let mc = box_seminorm_mc(&bx, |x, h| Profile::Sine.increment(x[0], h[0]), s, p, &spec).unwrap();
        let oracle = reference_seminorm_1d(Profile::Sine, s, p).unwrap().value;
        let z = (mc.value - oracle) / mc.std_error;
        assert!(z.abs() <= 3.0, "s={s} p={p}: MC {} ± {} vs {oracle}", mc.value, mc.std_error);
    }
}

#[test]
fn halving_panels_reduces_error_estimate() {
    for (tag, p) in [("planar-sine:k=1", 3.0), ("vertical-sine", 1.0), ("planar-sine:k=3", 1.5)] {
        let f: TestFunction = tag.parse().unwrap();
        let params = FractionalParams::new(2, 0.5, p).unwrap();
        let coarse = kernelquad::seminorm(&f, &film(2, 0.1), &params, &QuadratureSpec::graded_grid(8)).unwrap();
        let fine = kernelquad::seminorm(&f, &film(2, 0.1), &params, &QuadratureSpec::graded_grid(16)).unwrap();
        assert!(fine.error * 2.0 <= coarse.error, "{tag}: {} then {}", coarse.error, fine.error);
        assert!((fine.value - coarse.value).abs() <= coarse.error.max(1e-12 * fine.value) * 1.01);
    }
}

#[test]
fn grid_agrees_with_closed_form_on_a_square_film() {
    let params = FractionalParams::quadratic(2, 0.4).unwrap();
    let square = ThinFilm::new(BaseDomain::unit_interval(), 1.0).unwrap();
    let e = kernelquad::seminorm(&TestFunction::vertical(Profile::Linear), &square, &params, &QuadratureSpec::graded_grid(16))
        .unwrap();
    let mc = kernelquad::seminorm(
        &TestFunction::vertical(Profile::Linear),
        &square,
        &params,
        &QuadratureSpec::monte_carlo(2_000_000, 4),
    )
    .unwrap();
    assert!((e.value - mc.value).abs() <= 3.0 * (mc.error + e.error));
    assert!(e.value > linear_seminorm_1d(1.0, 0.4, 2.0));
}

#[test]
fn thin_vertical_monte_carlo_recovers_first_scaling_value() {
    let eps = 1e-3;
    let params = FractionalParams::quadratic(2, 0.3).unwrap();
    let spec = QuadratureSpec::monte_carlo(10_000_000, 2024).with_shift(-1.2);
    let e = kernelquad::seminorm(&TestFunction::vertical(Profile::Linear), &film(2, eps), &params, &spec).unwrap();
    let scaled = eps.powf(2.0 * 0.3 - 1.0) * e.value;
    let predicted = c_closed(0.3, 2).unwrap() / (0.7 * 2.4);
    assert!((scaled / predicted - 1.0).abs() <= 0.05, "{scaled} vs {predicted}");
    assert!(!e.low_confidence);
}

#[test]
fn three_dimensional_films_use_monte_carlo() {
    let params = FractionalParams::quadratic(3, 0.5).unwrap();
    let f = TestFunction::vertical(Profile::Linear);
    let grid = kernelquad::seminorm(&f, &film(3, 0.01), &params, &QuadratureSpec::graded_grid(8));
    assert!(matches!(grid, Err(Error::Unsupported(_))));
    let spec = QuadratureSpec::monte_carlo(2_000_000, 8).with_shift(-0.8);
    let e = kernelquad::seminorm(&f, &film(3, 0.01), &params, &spec).unwrap();
    let predicted = c_closed(0.5, 3).unwrap() / ((1.0 - 0.5) * (3.0 - 1.0));
    assert!((e.value / predicted - 1.0).abs() <= 0.05, "{} ± {} vs {predicted}", e.value, e.error);
}

#[test]
fn monte_carlo_seeds_are_reproducible_and_distinct() {
    let f = TestFunction::planar_sine(vec![1, 1]);
    let params = FractionalParams::quadratic(3, 0.6).unwrap();
    let film = film(3, 0.1);
    let a = kernelquad::seminorm(&f, &film, &params, &QuadratureSpec::monte_carlo(50_000, 1)).unwrap();
    let b = kernelquad::seminorm(&f, &film, &params, &QuadratureSpec::monte_carlo(50_000, 1).with_threads(3)).unwrap();
    let c = kernelquad::seminorm(&f, &film, &params, &QuadratureSpec::monte_carlo(50_000, 2)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_ne!(a.value, c.value);
    assert!((a.value - c.value).abs() <= 5.0 * (a.error + c.error));
}
