//! Write a sweep's CSV table and log-log SVG plot to the temp directory.

use thinfrac::asymptotics::{dyadic_ladder, run_sweep};
use thinfrac::geometry::FractionalParams;
use thinfrac::kernelquad::QuadratureSpec;
use thinfrac::plot::sweep_svg;
use thinfrac::testfns::TestFunction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f: TestFunction = "vertical-sine".parse()?;
    let r = run_sweep(&f, &FractionalParams::quadratic(2, 0.3)?, &dyadic_ladder(3, 10), &QuadratureSpec::graded_grid(16), None)?;
    let dir = std::env::temp_dir();
    let csv = dir.join("thinfrac-sweep.csv");
    let svg = dir.join("thinfrac-sweep.svg");
    std::fs::write(&csv, r.to_csv())?;
    std::fs::write(&svg, sweep_svg(&r))?;
    print!("{}", r.to_csv());
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
