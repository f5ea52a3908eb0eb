//! Graded complex numbers for first-order truncation bookkeeping.
//!
//! Every eigenvector entry is a sum of terms with a definite smallness grade,
//! counted in half-units: grade 0 for O(1), 1 for O(sqrt(mu)), 2 for O(mu) and
//! O(beta) alike (each dissipation number counts a full unit). Products add
//! grades; anything beyond grade 2 is outside the retained first order and is
//! dropped, which is exactly the truncation discipline of the printed
//! eigenvectors and projectors.

use num_complex::Complex64;

pub const MAX_GRADE: usize = 2;

/// A complex value split by smallness grade (half-units of the joint
/// (sqrt(mu), beta) grading).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradedC {
    pub g: [Complex64; MAX_GRADE + 1],
}

impl GradedC {
    pub const ZERO: GradedC = GradedC {
        g: [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    };

    /// A single term with the given value and grade (0, 1 or 2 half-units).
    pub fn term(value: Complex64, grade: usize) -> Self {
        assert!(grade <= MAX_GRADE, "grade {grade} out of range");
        let mut g = [Complex64::new(0.0, 0.0); MAX_GRADE + 1];
        g[grade] = value;
        GradedC { g }
    }

    pub fn order0(value: Complex64) -> Self {
        Self::term(value, 0)
    }

    /// Sum of the retained terms.
    pub fn value(&self) -> Complex64 {
        self.g[0] + self.g[1] + self.g[2]
    }

    pub fn add(&self, other: &GradedC) -> GradedC {
        let mut g = self.g;
        for i in 0..=MAX_GRADE {
            g[i] += other.g[i];
        }
        GradedC { g }
    }

    /// Graded product: terms whose combined grade exceeds the retained order
    /// are discarded.
    pub fn mul(&self, other: &GradedC) -> GradedC {
        let mut g = [Complex64::new(0.0, 0.0); MAX_GRADE + 1];
        for (i, a) in self.g.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in other.g.iter().enumerate() {
                if i + j > MAX_GRADE {
                    continue;
                }
                g[i + j] += a * b;
            }
        }
        GradedC { g }
    }
}

/// A five-vector of graded entries.
pub type GradedVec5 = [GradedC; 5];

pub fn graded_zero_vec() -> GradedVec5 {
    [GradedC::ZERO; 5]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_truncates_above_first_order() {
        let sqrt_mu = GradedC::term(c(0.5, 0.0), 1);
        let beta = GradedC::term(c(0.0, 0.25), 2);
        // sqrt(mu) * sqrt(mu) -> grade 2 kept
        let mu = sqrt_mu.mul(&sqrt_mu);
        assert_eq!(mu.g[2], c(0.25, 0.0));
        // sqrt(mu) * beta -> grade 3 dropped
        let cross = sqrt_mu.mul(&beta);
        assert_eq!(cross, GradedC::ZERO);
        // beta * beta -> grade 4 dropped
        assert_eq!(beta.mul(&beta), GradedC::ZERO);
    }

    #[test]
    fn value_sums_grades() {
        let x = GradedC::order0(c(1.0, 0.0))
            .add(&GradedC::term(c(0.2, 0.0), 1))
            .add(&GradedC::term(c(0.0, 0.03), 2));
        assert_eq!(x.value(), c(1.2, 0.03));
    }
}
