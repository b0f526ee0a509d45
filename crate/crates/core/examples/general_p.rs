//! Exponents p ≠ 2: constants, regimes and sweeps.

use thinfrac::asymptotics::{classify_regime, dyadic_ladder, run_sweep};
use thinfrac::constants::{k_p, k_p_closed};
use thinfrac::geometry::FractionalParams;
use thinfrac::kernelquad::QuadratureSpec;
use thinfrac::testfns::TestFunction;

fn main() -> thinfrac::Result<()> {
    for (s, p) in [(0.8, 3.0), (0.9, 1.5), (0.5, 4.0)] {
        match (k_p(s, 2, p), k_p_closed(s, 2, p)) {
            (Ok(q), Ok(c)) => println!("K_(s={s},2;p={p}) quadrature {q:.12}, closed {c:.12}"),
            (q, c) => println!("K_(s={s},2;p={p}): {:?} / {:?}", q.err(), c.err()),
        }
    }
    println!("(0.25, 4) is {}", classify_regime(&FractionalParams::new(2, 0.25, 4.0)?).label);

    let spec = QuadratureSpec::graded_grid(16);
    let f = TestFunction::planar_linear(vec![1.0]);
    for (s, p) in [(0.2, 3.0), (0.9, 1.5), (0.5, 4.0)] {
        let r = run_sweep(&f, &FractionalParams::new(2, s, p)?, &dyadic_ladder(3, 10), &spec, None)?;
        println!(
            "s={s} p={p} {}: slope {:.4} (regime exponent {}), scaled {:.6}, predicted {:?}",
            r.regime.label,
            r.fitted_slope.unwrap_or(f64::NAN),
            r.predicted_slope,
            r.extrapolated_limit,
            r.predicted_limit
        );
        for n in &r.notes {
            println!("  note: {n}");
        }
    }
    Ok(())
}
