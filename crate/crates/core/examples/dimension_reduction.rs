//! Planar functions in the three dimension-reduction regimes.

use thinfrac::asymptotics::{dyadic_ladder, run_sweep};
use thinfrac::geometry::FractionalParams;
use thinfrac::kernelquad::QuadratureSpec;
use thinfrac::testfns::TestFunction;

fn main() -> thinfrac::Result<()> {
    let spec = QuadratureSpec::graded_grid(16);
    let ladder = dyadic_ladder(3, 10);
    for (tag, s) in [("planar-sine:k=1", 0.2), ("planar-linear:a=1", 0.25), ("planar-linear:a=1", 0.75)] {
        let f: TestFunction = tag.parse()?;
        let r = run_sweep(&f, &FractionalParams::quadratic(2, s)?, &ladder, &spec, None)?;
        println!("{tag} s={s} ({} regime)", r.regime.label);
        for (e, v) in r.eps_ladder.iter().zip(&r.scaled_energies) {
            println!("  ε = {e:<12} scaled {v:.6}");
        }
        println!(
            "  predicted {:.6}, Richardson {:.6}, OLS slope {:.4}, last-pair slope {:.4}, expected {}",
            r.predicted_limit.unwrap_or(f64::NAN),
            r.richardson_limit.unwrap_or(f64::NAN),
            r.fitted_slope.unwrap_or(f64::NAN),
            r.tail_slope.unwrap_or(f64::NAN),
            r.predicted_slope
        );
    }
    Ok(())
}
