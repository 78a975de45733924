//! Small dense complex-matrix helpers shared by the morphism algebra
//! and the unitary search.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;

/// Max-entry absolute value.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Max-entry absolute difference.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    max_abs(&(a - b))
}

/// Unitary polar factor of a square matrix, via SVD: M = UΣV* ↦ UV*.
/// Zero singular directions contribute arbitrary but deterministic
/// unitary directions from the SVD factors.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    assert_eq!(m.nrows(), m.ncols(), "polar factor needs a square matrix");
    if m.nrows() == 0 {
        return m.clone();
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    u * v_t
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the R
/// diagonal phases absorbed into Q.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    if dim == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
