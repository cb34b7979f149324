//! Random fixtures shared by the unit-test suites.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::qmat::ComplexMatrix;

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in i + 1..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// Haar-ish random 2x2 unitary from a normalized random SU(2) row pair.
pub fn random_unitary_2x2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm < 1e-3 {
            continue;
        }
        let (a, b) = (a / norm, b / norm);
        let mut u = ComplexMatrix::zeros(2);
        u.set(0, 0, a);
        u.set(0, 1, b);
        u.set(1, 0, -b.conj());
        u.set(1, 1, a.conj());
        return u;
    }
}
