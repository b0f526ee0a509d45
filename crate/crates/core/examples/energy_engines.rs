//! One energy from both engines, and Monte Carlo determinism across worker counts.

use thinfrac::geometry::{BaseDomain, FractionalParams, ThinFilm};
use thinfrac::kernelquad::{seminorm, QuadratureSpec};
use thinfrac::testfns::TestFunction;

fn main() -> thinfrac::Result<()> {
    let f: TestFunction = "planar-linear:a=1".parse()?;
    let film = ThinFilm::new(BaseDomain::unit_interval(), 0.05)?;
    let params = FractionalParams::quadratic(2, 0.75)?;

    let grid = seminorm(&f, &film, &params, &QuadratureSpec::graded_grid(16))?;
    println!("grid  {:.10} ± {:.1e} ({} evaluations)", grid.value, grid.error, grid.evaluations);
    for shift in [0.0, -0.3] {
        let spec = QuadratureSpec::monte_carlo(2_000_000, 1).with_shift(shift);
        let mc = seminorm(&f, &film, &params, &spec)?;
        println!(
            "mc    {:.10} ± {:.1e} (radial shift {shift}, z = {:+.2})",
            mc.value,
            mc.error,
            (mc.value - grid.value) / (mc.error + grid.error)
        );
    }
    let spec = QuadratureSpec::monte_carlo(500_000, 9);
    let a = seminorm(&f, &film, &params, &spec.clone().with_threads(1))?;
    let b = seminorm(&f, &film, &params, &spec.with_threads(4))?;
    println!("1 vs 4 threads bit-identical: {}", a.value.to_bits() == b.value.to_bits());

    let d3 = ThinFilm::new(BaseDomain::unit_square(), 0.05)?;
    let f3: TestFunction = "planar-sine:k=1,1".parse()?;
    let e3 = seminorm(&f3, &d3, &FractionalParams::quadratic(3, 0.75)?, &QuadratureSpec::monte_carlo(1_000_000, 3))?;
    println!("d = 3 planar sine: {:.6} ± {:.1e}", e3.value, e3.error);
    Ok(())
}
