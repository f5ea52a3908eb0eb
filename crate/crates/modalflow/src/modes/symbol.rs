//! The Fourier symbol of the linear operator and dense 5x5 complex helpers.

use num_complex::Complex64;

use crate::material::DimensionlessParams;

/// Dense 5x5 complex matrix, row-major.
pub type Matrix5 = [[Complex64; 5]; 5];
/// Complex five-vector.
pub type Vector5 = [Complex64; 5];

pub fn zeros5() -> Matrix5 {
    [[Complex64::new(0.0, 0.0); 5]; 5]
}

pub fn identity5() -> Matrix5 {
    let mut m = zeros5();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn mat_mul(a: &Matrix5, b: &Matrix5) -> Matrix5 {
    let mut out = zeros5();
    for i in 0..5 {
        for k in 0..5 {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..5 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_sub(a: &Matrix5, b: &Matrix5) -> Matrix5 {
    let mut out = zeros5();
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = a[i][j] - b[i][j];
        }
    }
    out
}

pub fn mat_add(a: &Matrix5, b: &Matrix5) -> Matrix5 {
    let mut out = zeros5();
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

pub fn mat_scale(a: &Matrix5, s: Complex64) -> Matrix5 {
    let mut out = *a;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    out
}

pub fn mat_vec(a: &Matrix5, x: &Vector5) -> Vector5 {
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i] += a[i][j] * x[j];
        }
    }
    out
}

/// Largest entry magnitude.
pub fn max_abs(a: &Matrix5) -> f64 {
    a.iter().flatten().fold(0.0_f64, |m, c| m.max(c.norm()))
}

pub fn vec_max_abs(x: &Vector5) -> f64 {
    x.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
}

/// Solve A X = B for X by Gaussian elimination with partial pivoting.
/// Panics on exactly singular input (callers control conditioning).
pub fn mat_solve(a: &Matrix5, b: &Matrix5) -> Matrix5 {
    let mut m = *a;
    let mut rhs = *b;
    for col in 0..5 {
        let mut piv = col;
        let mut best = m[col][col].norm();
        for (r, row) in m.iter().enumerate().skip(col + 1) {
            let v = row[col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        assert!(best > 0.0, "singular 5x5 system");
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        for j in 0..5 {
            m[col][j] /= d;
            rhs[col][j] /= d;
        }
        for r in 0..5 {
            if r == col {
                continue;
            }
            let f = m[r][col];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..5 {
                let mcj = m[col][j];
                let rcj = rhs[col][j];
                m[r][j] -= f * mcj;
                rhs[r][j] -= f * rcj;
            }
        }
    }
    rhs
}

/// The wavevector; `ky` dominates in the beam geometry.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Wavevector {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl Wavevector {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Wavevector { kx, ky, kz }
    }

    pub fn planar(ky: f64) -> Self {
        Wavevector { kx: 0.0, ky, kz: 0.0 }
    }

    /// kx^2 + kz^2
    pub fn transverse_sq(&self) -> f64 {
        self.kx * self.kx + self.kz * self.kz
    }
}

/// Fourier symbol of the linear operator under `d/dx -> -i kx`.
///
/// The third velocity row is the z-momentum row (the beam-weighted mirror of
/// the x row); the dimensionless Laplacian is `mu kx^2 + ky^2 + mu kz^2`.
/// The linear system reads `d psi~/dt + L~ psi~ = 0`, so eigenvalues of `L~`
/// are `-i omega` with `omega` from the dispersion relation.
pub fn l_symbol(k: Wavevector, params: &DimensionlessParams) -> Matrix5 {
    let i = Complex64::new(0.0, 1.0);
    let mu = params.mu;
    let sq = mu.sqrt();
    let (kx, ky, kz) = (k.kx, k.ky, k.kz);
    let kappa2 = mu * kx * kx + ky * ky + mu * kz * kz;
    let d11 = params.delta11;
    let d12 = params.delta12;
    let d21 = params.delta21;
    let d22 = params.delta22;

    let mut l = zeros5();
    // vx row
    l[0][0] = Complex64::new(d11 * mu * kx * kx + d12 * kappa2, 0.0);
    l[0][1] = Complex64::new(d11 * sq * kx * ky, 0.0);
    l[0][2] = Complex64::new(d11 * mu * kx * kz, 0.0);
    l[0][3] = -i * sq * kx;
    // vy row
    l[1][0] = Complex64::new(d11 * sq * kx * ky, 0.0);
    l[1][1] = Complex64::new(d11 * ky * ky + d12 * kappa2, 0.0);
    l[1][2] = Complex64::new(d11 * sq * ky * kz, 0.0);
    l[1][3] = -i * ky;
    // vz row
    l[2][0] = Complex64::new(d11 * mu * kx * kz, 0.0);
    l[2][1] = Complex64::new(d11 * sq * kz * ky, 0.0);
    l[2][2] = Complex64::new(d11 * mu * kz * kz + d12 * kappa2, 0.0);
    l[2][3] = -i * sq * kz;
    // pressure row
    l[3][0] = -i * sq * kx;
    l[3][1] = -i * ky;
    l[3][2] = -i * sq * kz;
    l[3][3] = Complex64::new(d21 * kappa2, 0.0);
    l[3][4] = Complex64::new(d22 * kappa2, 0.0);
    // continuity row
    l[4][0] = -i * sq * kx;
    l[4][1] = -i * ky;
    l[4][2] = -i * sq * kz;
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::DimensionlessParams;

    fn params() -> DimensionlessParams {
        DimensionlessParams::ideal_gas_beta(1e-2, 0.0, 1e-2, 1.4).unwrap()
    }

    #[test]
    fn planar_inviscid_symbol_couples_vy_p_rho_only() {
        let p = DimensionlessParams::ideal_gas_beta(1e-2, 0.0, 0.0, 1.4).unwrap();
        let l = l_symbol(Wavevector::planar(1.5), &p);
        // vx and vz rows and columns vanish
        for j in 0..5 {
            assert_eq!(l[0][j].norm(), 0.0);
            assert_eq!(l[2][j].norm(), 0.0);
            assert_eq!(l[j][0].norm(), 0.0);
            assert_eq!(l[j][2].norm(), 0.0);
        }
        assert!(l[1][3].norm() > 0.0);
        assert!(l[3][1].norm() > 0.0);
        assert!(l[4][1].norm() > 0.0);
    }

    #[test]
    fn symbol_at_minus_k_is_conjugate() {
        let p = params();
        let k = Wavevector::new(0.7, 1.3, -0.4);
        let a = l_symbol(k, &p);
        let b = l_symbol(Wavevector::new(-k.kx, -k.ky, -k.kz), &p);
        for i in 0..5 {
            for j in 0..5 {
                assert!((a[i][j].conj() - b[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn solve_round_trip() {
        let p = params();
        let l = l_symbol(Wavevector::new(0.3, 1.1, 0.2), &p);
        // A * X = I -> X = A^{-1}; then A X should be I. Shift to avoid singularity.
        let mut a = l;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += Complex64::new(2.0, 1.0);
        }
        let x = mat_solve(&a, &identity5());
        let id = mat_mul(&a, &x);
        assert!(max_abs(&mat_sub(&id, &identity5())) < 1e-12);
    }
}
