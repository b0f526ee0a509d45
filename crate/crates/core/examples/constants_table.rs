//! Limit constants: closed forms against their defining integrals.

use thinfrac::constants::{
    c_closed, c_p, constants_table, i_one_closed, j_recursion_residual, k_closed, k_p, surface_measure,
};

fn main() -> thinfrac::Result<()> {
    println!("{:<4} {:>5} {:>2} {:>4} {:>22} {:>22} {:>10}", "name", "s", "d", "p", "closed", "quadrature", "gap");
    for r in constants_table(&[0.25, 0.5, 0.75], &[2, 3], &[2.0, 3.0])? {
        println!(
            "{:<4} {:>5} {:>2} {:>4} {:>22.16} {:>22} {:>10}",
            r.name,
            r.s,
            r.d,
            r.p,
            r.closed_form,
            r.quadrature.map(|q| format!("{q:.16}")).unwrap_or_else(|| "n/a".into()),
            r.relative_gap.map(|g| format!("{g:.1e}")).unwrap_or_else(|| "n/a".into()),
        );
    }

    let (s, d) = (0.75, 2);
    let k = k_closed(s, d)?;
    println!("\nK(2s-1)(3-2s)/C at s={s}, d={d}: {:.15}", k * (2.0 * s - 1.0) * (3.0 - 2.0 * s) / c_closed(s, d)?);
    println!("K(0.999, 2)·4/σ₂ = {:.6}", k_closed(0.999, 2)? * 4.0 / surface_measure(2)?);
    println!("J recursion residual at (0.5, 4): {:.1e}", j_recursion_residual(0.5, 4)?);
    println!("I¹_3 = {:.12}", i_one_closed(3)?);
    println!("C_(0.5,2;3) = {:.12}, K_(0.8,2;3) = {:.12}", c_p(0.5, 2, 3.0)?, k_p(0.8, 2, 3.0)?);
    Ok(())
}
