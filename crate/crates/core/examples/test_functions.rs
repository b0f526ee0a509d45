//! Test-function tags, pointwise values and one-dimensional reference seminorms.

use thinfrac::geometry::BaseDomain;
use thinfrac::testfns::{reference_seminorm_1d, Profile, TestFunction};

fn main() -> thinfrac::Result<()> {
    let eps = 0.1;
    for tag in ["planar-linear:a=2", "planar-sine:k=1", "vertical-sine:c=2", "planar-sine:k=1+vertical-linear", "constant:c=3"] {
        let f: TestFunction = tag.parse()?;
        let x = [0.25, 0.05];
        println!(
            "{tag:<34} f({:?}) = {:>8.5}  planar = {:<5}  Dirichlet = {}",
            x,
            f.evaluate(&x, eps),
            f.is_planar(),
            f.dirichlet_planar(&BaseDomain::unit_interval(), 2.0)
                .map(|v| format!("{v:.6}"))
                .unwrap_or_else(|e| e.to_string()),
        );
    }
    for (g, s, p) in [(Profile::Linear, 0.5, 2.0), (Profile::Sine, 0.3, 2.0), (Profile::Sine, 0.7, 3.0)] {
        let r = reference_seminorm_1d(g, s, p)?;
        println!("⌊{g:?}⌋^{p}_{s}(0,1) = {:.10} ({:?}, est. error {:.1e})", r.value, r.provenance, r.error_estimate);
    }
    Ok(())
}
