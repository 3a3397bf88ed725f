//! Matrix exponential, eigenvalues and the norms used by the stability tests.
//!
//! cargo run --example matrix_functions

use switchstab::linalg::{
    commutator, determinant, mat_exp, operator_norm_2, spectral_abscissa, spectral_radius, spectrum,
};
use switchstab::presets;

fn main() -> switchstab::Result<()> {
    let [a1, a2] = presets::mode_matrices();

    for (name, a) in [("A1", &a1), ("A2", &a2)] {
        let s = spectrum(a)?;
        println!("{name}: eigenvalues {:?}", s.sorted());
        println!(
            "    abscissa {:+.6}  (unstable on its own)",
            spectral_abscissa(a)?
        );
    }

    let avg = &a1.scaled(0.5) + &a2.scaled(0.5);
    println!("(A1 + A2) / 2 = {:?}", avg.to_rows());
    println!("    abscissa {:+.6}", spectral_abscissa(&avg)?);

    let e = mat_exp(&a1)?;
    println!(
        "det exp(A1) = {:.12}, exp(tr A1) = {:.12}",
        determinant(&e)?,
        a1.trace().exp()
    );
    println!(
        "rho(exp(A1)) = {:.6}, ||exp(A1)||_2 = {:.6}",
        spectral_radius(&e)?,
        operator_norm_2(&e)?
    );

    let c = commutator(&a2, &a1)?;
    println!("[A2, A1] = {:?}", c.to_rows());
    Ok(())
}
