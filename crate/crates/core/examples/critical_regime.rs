//! The ε²|log ε| regime at s = 1/2 and the two candidate constants.

use thinfrac::asymptotics::{critical_sweep, dyadic_ladder};
use thinfrac::kernelquad::QuadratureSpec;
use thinfrac::testfns::TestFunction;

fn main() -> thinfrac::Result<()> {
    let f = TestFunction::planar_linear(vec![1.0]);
    let r = critical_sweep(&f, 2, 2.0, &dyadic_ladder(4, 12), &QuadratureSpec::graded_grid(16))?;
    for (e, v) in r.eps_ladder.iter().zip(&r.raw_energies) {
        println!("ε = 2^{:<3} E/ε² = {:.6}", e.log2(), v / (e * e));
    }
    let fit = r.critical.expect("critical fit");
    println!("coefficient of |log ε|: {:.5}", fit.log_coefficient);
    println!("σ₁/(d-1)     = {} (relative error {:.3})", fit.full_moment_constant, fit.relative_error_full);
    println!("σ₁/(2(d-1))  = {} (relative error {:.3})", fit.half_moment_constant, fit.relative_error_half);
    Ok(())
}
