//! The ε^{1-2s} scaling of vertically oscillating functions.

use thinfrac::asymptotics::{dyadic_ladder, run_sweep};
use thinfrac::geometry::{BaseDomain, FractionalParams, ThinFilm};
use thinfrac::kernelquad::{self, QuadratureSpec};
use thinfrac::testfns::{Profile, TestFunction};

fn main() -> thinfrac::Result<()> {
    let spec = QuadratureSpec::graded_grid(16);
    for profile in [Profile::Linear, Profile::Sine] {
        for s in [0.3, 0.7] {
            let f = TestFunction::vertical(profile);
            let r = run_sweep(&f, &FractionalParams::quadratic(2, s)?, &dyadic_ladder(3, 10), &spec, None)?;
            println!(
                "{f:<16} s={s}: slope {:.4} (expected {:.1}), scaled at 2^-10 {:.6}, predicted {:.6}",
                r.fitted_slope.unwrap_or(f64::NAN),
                r.predicted_slope,
                r.extrapolated_limit,
                r.predicted_limit.unwrap_or(f64::NAN),
            );
        }
    }
    let f = TestFunction::vertical(Profile::Linear);
    let params = FractionalParams::quadratic(2, 0.5)?;
    let film = ThinFilm::new(BaseDomain::unit_interval(), 1e-3)?.with_margin(0.1)?;
    let v = kernelquad::vertical_seminorm(&f, &film, &params, &spec)?;
    let e = kernelquad::seminorm(&f, &film.interior(), &params, &spec)?;
    println!("C·V_ε / E(interior film) at ε = 1e-3: {:.5}", 2.0 * v.value / e.value);
    Ok(())
}
