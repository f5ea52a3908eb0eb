//! Dense 5x5 complex matrix exponential by Pade(6) with scaling and squaring.

use num_complex::Complex64;

use crate::modes::{identity5, mat_add, mat_mul, mat_scale, mat_solve, mat_sub, Matrix5};

/// exp(A) for a 5x5 complex matrix.
pub fn matrix_exp(a: &Matrix5) -> Matrix5 {
    // crude infinity-norm bound
    let norm = a
        .iter()
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let mut s = 0u32;
    let mut scaled = *a;
    if norm > 0.5 {
        s = (norm / 0.5).log2().ceil() as u32;
        let f = Complex64::new(1.0 / (1u64 << s) as f64, 0.0);
        scaled = mat_scale(&scaled, f);
    }

    // Pade(6, 6): coefficients c0..c6
    const C: [f64; 7] = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15_840.0,
        1.0 / 665_280.0,
    ];
    let a1 = scaled;
    let a2 = mat_mul(&a1, &a1);
    let a4 = mat_mul(&a2, &a2);
    let a6 = mat_mul(&a4, &a2);

    let one = Complex64::new(1.0, 0.0);
    // U = A (c1 I + c3 A^2 + c5 A^4); V = c0 I + c2 A^2 + c4 A^4 + c6 A^6
    let mut inner = mat_scale(&identity5(), one * C[1]);
    inner = mat_add(&inner, &mat_scale(&a2, one * C[3]));
    inner = mat_add(&inner, &mat_scale(&a4, one * C[5]));
    let u = mat_mul(&a1, &inner);

    let mut v = mat_scale(&identity5(), one * C[0]);
    v = mat_add(&v, &mat_scale(&a2, one * C[2]));
    v = mat_add(&v, &mat_scale(&a4, one * C[4]));
    v = mat_add(&v, &mat_scale(&a6, one * C[6]));

    // exp ~ (V - U)^{-1} (V + U)
    let mut e = mat_solve(&mat_sub(&v, &u), &mat_add(&v, &u));
    for _ in 0..s {
        e = mat_mul(&e, &e);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::DimensionlessParams;
    use crate::modes::{l_symbol, max_abs, zeros5, Wavevector};

    #[test]
    fn exponential_of_zero_is_identity() {
        let e = matrix_exp(&zeros5());
        assert!(max_abs(&mat_sub(&e, &identity5())) < 1e-15);
    }

    #[test]
    fn matches_taylor_series_for_small_argument() {
        let p = DimensionlessParams::ideal_gas_beta(1e-2, 0.0, 1e-2, 1.4).unwrap();
        let l = l_symbol(Wavevector::new(0.3, 1.2, -0.5), &p);
        let dt = 1e-3;
        let a = mat_scale(&l, Complex64::new(-dt, 0.0));
        let e = matrix_exp(&a);
        // 6-term Taylor series
        let mut series = identity5();
        let mut term = identity5();
        for n in 1..=8 {
            term = mat_mul(&term, &a);
            term = mat_scale(&term, Complex64::new(1.0 / n as f64, 0.0));
            series = mat_add(&series, &term);
        }
        assert!(max_abs(&mat_sub(&e, &series)) < 1e-14);
    }

    #[test]
    fn forward_backward_is_identity() {
        let p = DimensionlessParams::ideal_gas_beta(1e-2, 0.0, 5e-2, 1.4).unwrap();
        let l = l_symbol(Wavevector::new(1.0, 2.0, 0.5), &p);
        let dt = 0.4;
        let e1 = matrix_exp(&mat_scale(&l, Complex64::new(-dt, 0.0)));
        let e2 = matrix_exp(&mat_scale(&l, Complex64::new(dt, 0.0)));
        assert!(max_abs(&mat_sub(&mat_mul(&e1, &e2), &identity5())) < 1e-11);
    }

    #[test]
    fn semigroup_property() {
        let p = DimensionlessParams::ideal_gas_beta(1e-2, 0.0, 5e-2, 1.4).unwrap();
        let l = l_symbol(Wavevector::new(0.2, 1.5, 0.0), &p);
        let e1 = matrix_exp(&mat_scale(&l, Complex64::new(-0.3, 0.0)));
        let e2 = matrix_exp(&mat_scale(&l, Complex64::new(-0.7, 0.0)));
        let e3 = matrix_exp(&mat_scale(&l, Complex64::new(-1.0, 0.0)));
        assert!(max_abs(&mat_sub(&mat_mul(&e1, &e2), &e3)) < 1e-12);
    }
}
