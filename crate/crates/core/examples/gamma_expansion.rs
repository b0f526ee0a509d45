//! Two-scale decomposition of a planar + vertical sum.

use thinfrac::asymptotics::{dyadic_ladder, expansion_report};
use thinfrac::geometry::FractionalParams;
use thinfrac::kernelquad::QuadratureSpec;
use thinfrac::testfns::TestFunction;

fn main() -> thinfrac::Result<()> {
    let f: TestFunction = "planar-sine:k=1+vertical-linear".parse()?;
    let r = expansion_report(&f, &FractionalParams::quadratic(2, 0.75)?, &dyadic_ladder(3, 10), &QuadratureSpec::graded_grid(16))?;
    println!("first-scale coefficient {:.6}, second-scale prediction {:?}", r.first_scale_term, r.second_scale_term);
    for i in 0..r.eps_ladder.len() {
        println!(
            "ε = {:<12} raw {:.6e}  first term {:.6e}  residual/ε^1.5 {:.4}",
            r.eps_ladder[i], r.raw_energies[i], r.first_terms[i], r.residual_scaled[i]
        );
    }
    for n in &r.notes {
        println!("note: {n}");
    }
    Ok(())
}
