//! Seeded test-matrix generators.
//!
//! Haar samples follow the usual recipe: QR-factor a Gaussian matrix and
//! rescale the columns of Q so that R ends up with a positive real diagonal.
//! Without that correction the distribution of Q depends on the sign
//! conventions of the QR routine and is not Haar.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, C64};

fn rng_for(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn complex_gaussian(rng: &mut ChaCha20Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn haar_from_gaussian(g: DMatrix<C64>) -> ComplexMatrix {
    let n = g.nrows();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for col in 0..n {
        let d = r[(col, col)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..n {
            q[(row, col)] *= phase;
        }
    }
    ComplexMatrix::from_nalgebra(&q)
}

/// Haar-distributed element of U(n). Deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    let mut rng = rng_for(seed);
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
    haar_from_gaussian(g)
}

/// Haar-distributed element of O(n), stored with zero imaginary parts.
pub fn haar_orthogonal(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "haar_orthogonal needs n >= 1");
    let mut rng = rng_for(seed);
    let g = DMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), 0.0));
    let q = haar_from_gaussian(g);
    // Real input keeps everything real up to rounding; drop the residue.
    let data = q.as_slice().iter().map(|z| C64::new(z.re, 0.0)).collect();
    ComplexMatrix::new(n, n, data).expect("finite orthogonal factor")
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn random_complex(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed);
    let data = (0..rows * cols).map(|_| complex_gaussian(&mut rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite gaussian entries")
}

/// Random strict contraction: a Gaussian matrix divided by 1.01 times its
/// largest singular value.
pub fn random_contraction(n: usize, seed: u64) -> ComplexMatrix {
    let g = random_complex(n, n, seed);
    let norm = g.operator_norm();
    g.scale(C64::new(1.0 / (1.01 * norm), 0.0))
}
