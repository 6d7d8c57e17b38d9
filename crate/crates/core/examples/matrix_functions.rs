//! Square roots, pseudo-inverse roots and trace norms.

use qsd::hermitian::{eig_hermitian, mat_sqrt_psd, pinv_sqrt, sqrt_2x2_levinger, trace_norm, HermitianMatrix};

fn main() -> qsd::Result<()> {
    let s = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]])?;
    let a = sqrt_2x2_levinger(&s)?;
    let b = mat_sqrt_psd(&s)?;
    println!("Levinger vs eigen square root: max diff {:.1e}", a.max_abs_diff(&b));
    println!("eigenvalues {:?}", eig_hermitian(&s)?.values);

    let singular = HermitianMatrix::diag(&[1.0, 0.0]);
    println!("pinv sqrt of diag(1, 0): {:?}", pinv_sqrt(&singular, 1e-12)?.as_matrix().as_slice());
    let diff = HermitianMatrix::diag(&[0.5, 0.0]).sub(&HermitianMatrix::diag(&[0.0, 0.5]));
    println!("||diag(1/2, -1/2)||_1 = {}", trace_norm(diff.as_matrix())?);
    Ok(())
}
