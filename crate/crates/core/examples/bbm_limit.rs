//! Joint limit ε → 0, s → 1 along the two built-in schedules.

use thinfrac::asymptotics::{bbm_sweep, dyadic_ladder, SSchedule};
use thinfrac::kernelquad::QuadratureSpec;
use thinfrac::testfns::TestFunction;

fn main() -> thinfrac::Result<()> {
    let f = TestFunction::planar_linear(vec![1.0]);
    let spec = QuadratureSpec::graded_grid(16);
    let r = bbm_sweep(&f, 2, 2.0, &dyadic_ladder(3, 10), &SSchedule::BbmLog2, &spec)?;
    for ((e, s), v) in r.eps_ladder.iter().zip(&r.s_values).zip(&r.scaled_energies) {
        println!("ε = {e:<12} s = {s:.5}  (1-s)E/ε^(3-2s) = {v:.5}");
    }
    println!("target π/2 = {:.5}", std::f64::consts::FRAC_PI_2);

    let r = bbm_sweep(&f, 2, 2.0, &dyadic_ladder(3, 30), &SSchedule::BbmLog, &spec)?;
    let kappa = (-1.0f64).exp();
    let alt = r.expansion_scaled.as_ref().expect("bbm sweep");
    println!(
        "\nε^(1-s) = e^-1: (1-s)E/ε at 2^-10 {:.5}, at 2^-30 {:.5}, target κ²π/2 = {:.5}",
        alt[7],
        alt[alt.len() - 1],
        kappa * kappa * std::f64::consts::FRAC_PI_2
    );
    Ok(())
}
