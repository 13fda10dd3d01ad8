//! Two-detector density matrix at second order in the coupling, and the
//! entanglement and correlation measures built from it.
//!
//! Basis order: `|g_A g_B>, |e_A g_B>, |g_A e_B>, |e_A e_B>`. Logarithms are
//! natural.

use num_complex::Complex64;

use crate::elements::ElementSet;
use crate::math::{ln, sqrt};
use crate::{Error, Result};

/// Above this value of `lambda^2 (L_AA + L_BB)` the second-order state is
/// flagged as leaving the perturbative regime.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// Slack allowed in `|L_AB|^2 <= L_AA L_BB` before it counts as a violation.
pub const CAUCHY_SCHWARZ_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDetectorState {
    pub rho: [[Complex64; 4]; 4],
    pub lambda_product: f64,
    /// `lambda^2 (L_AA + L_BB)` exceeds [`PERTURBATIVE_LIMIT`].
    pub perturbativity_warning: bool,
}

/// Builds the state from couplings-factored elements.
pub fn density_matrix(es: &ElementSet, lambda_a: f64, lambda_b: f64) -> Result<TwoDetectorState> {
    if !(es.l_aa.is_finite() && es.l_bb.is_finite() && es.l_ab.is_finite() && es.m.is_finite()) {
        return Err(Error::Domain {
            what: "element set is not finite",
            value: f64::NAN,
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let (la2, lb2, lab) = (lambda_a * lambda_a, lambda_b * lambda_b, lambda_a * lambda_b);
    let p_a = la2 * es.l_aa;
    let p_b = lb2 * es.l_bb;
    let mut rho = [[zero; 4]; 4];
    rho[0][0] = Complex64::new(1.0 - (p_a + p_b), 0.0);
    rho[1][1] = Complex64::new(p_a, 0.0);
    rho[2][2] = Complex64::new(p_b, 0.0);
    rho[1][2] = es.l_ab * lab;
    rho[2][1] = rho[1][2].conj();
    rho[3][0] = es.m * lab;
    rho[0][3] = rho[3][0].conj();
    Ok(TwoDetectorState {
        rho,
        lambda_product: lab,
        perturbativity_warning: p_a + p_b > PERTURBATIVE_LIMIT,
    })
}

impl TwoDetectorState {
    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + (self.rho[1][1].re + self.rho[2][2].re) + self.rho[3][3].re
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.rho[i][j] - self.rho[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order. The matrix splits into the
    /// `{|gg>, |ee>}` and `{|eg>, |ge>}` blocks, each solved in closed form.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        let (outer_lo, outer_hi) = hermitian_2x2(self.rho[0][0].re, self.rho[3][3].re, self.rho[0][3]);
        let (inner_lo, inner_hi) = hermitian_2x2(self.rho[1][1].re, self.rho[2][2].re, self.rho[1][2]);
        out[0] = outer_lo;
        out[1] = outer_hi;
        out[2] = inner_lo;
        out[3] = inner_hi;
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Eigenvalues of `[[a, c], [conj(c), b]]`, smaller one first. The small root
/// is formed as a product-over-sum so it stays accurate when `|c|` is tiny
/// compared with the diagonal.
fn hermitian_2x2(a: f64, b: f64, c: Complex64) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let half_diff = 0.5 * (a - b);
    let radius = sqrt(half_diff * half_diff + c.norm_sqr());
    let hi = mean + radius;
    let lo = if hi != 0.0 && mean > 0.0 {
        (a * b - c.norm_sqr()) / hi
    } else {
        mean - radius
    };
    (lo, hi)
}

/// `N2 = -(L_AA + L_BB - sqrt((L_AA - L_BB)^2 + 4 |M|^2)) / 2`.
pub fn negativity2_from_parts(l_aa: f64, l_bb: f64, m_abs: f64) -> f64 {
    let d = l_aa - l_bb;
    -0.5 * (l_aa + l_bb - sqrt(d * d + 4.0 * m_abs * m_abs))
}

pub fn negativity2(es: &ElementSet) -> f64 {
    negativity2_from_parts(es.l_aa, es.l_bb, es.m.norm())
}

/// `N2` clamped at zero; NaN stays NaN.
pub fn negativity_from_parts(l_aa: f64, l_bb: f64, m_abs: f64) -> f64 {
    clamp_negativity(negativity2_from_parts(l_aa, l_bb, m_abs))
}

pub fn clamp_negativity(n2: f64) -> f64 {
    if n2 < 0.0 {
        0.0
    } else {
        n2
    }
}

pub fn negativity(es: &ElementSet) -> f64 {
    negativity_from_parts(es.l_aa, es.l_bb, es.m.norm())
}

fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * ln(x)
    }
}

/// `I = L+ ln L+ + L- ln L- - L_AA ln L_AA - L_BB ln L_BB` with
/// `L+- = (L_AA + L_BB +- sqrt((L_AA - L_BB)^2 + 4 |L_AB|^2)) / 2`.
pub fn mutual_information_from_parts(l_aa: f64, l_bb: f64, l_ab_abs: f64) -> Result<f64> {
    for (what, v) in [("L_AA", l_aa), ("L_BB", l_bb), ("|L_AB|", l_ab_abs)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::Domain { what, value: v });
        }
    }
    if l_ab_abs == 0.0 {
        return Ok(0.0);
    }
    let c2 = l_ab_abs * l_ab_abs;
    let det = l_aa * l_bb - c2;
    if det < -CAUCHY_SCHWARZ_SLACK {
        return Err(Error::CauchySchwarz { excess: -det });
    }
    let d = l_aa - l_bb;
    let l_plus = 0.5 * (l_aa + l_bb + sqrt(d * d + 4.0 * c2));
    let l_minus = (det / l_plus).max(0.0);
    let i = x_ln_x(l_plus) + x_ln_x(l_minus) - x_ln_x(l_aa) - x_ln_x(l_bb);
    Ok(i.max(0.0))
}

pub fn mutual_information(es: &ElementSet) -> Result<f64> {
    mutual_information_from_parts(es.l_aa, es.l_bb, es.l_ab.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::TruncationReport;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn es(l_aa: f64, l_bb: f64, l_ab: Complex64, m: Complex64) -> ElementSet {
        ElementSet {
            l_aa,
            l_bb,
            l_ab,
            m,
            m_plus: m,
            m_minus: Complex64::new(0.0, 0.0),
            c_ab: Complex64::new(0.0, 0.0),
            c_ba: Complex64::new(0.0, 0.0),
            report: TruncationReport::default(),
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_elements_give_ground_state() {
        let s = density_matrix(&es(0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)), 0.01, 0.01).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(s.rho[i][j], c(want, 0.0));
            }
        }
        assert_eq!(s.eigenvalues(), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn trace_is_exactly_one() {
        for (a, b) in [(0.3, 0.7), (1e3, 2.5), (0.1 + 0.2, 1.0 / 3.0)] {
            let s = density_matrix(&es(a, b, c(0.1, 0.2), c(0.05, -0.4)), 0.013, 0.007).unwrap();
            assert_eq!(s.trace(), 1.0);
        }
    }

    #[test]
    fn zero_pattern_and_hermiticity() {
        let s = density_matrix(&es(0.4, 0.5, c(0.1, -0.3), c(0.2, 0.05)), 0.01, 0.02).unwrap();
        let nonzero = [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1), (3, 0), (0, 3)];
        for i in 0..4 {
            for j in 0..4 {
                if !nonzero.contains(&(i, j)) {
                    assert_eq!(s.rho[i][j], c(0.0, 0.0));
                }
            }
        }
        assert!(s.hermiticity_defect() <= 1e-14);
        assert_eq!(s.rho[3][0], c(0.2, 0.05) * 2e-4);
    }

    #[test]
    fn perturbativity_flag() {
        let small = density_matrix(&es(1.0, 1.0, c(0.0, 0.0), c(0.0, 0.0)), 0.01, 0.01).unwrap();
        assert!(!small.perturbativity_warning);
        let big = density_matrix(&es(1.0, 1.0, c(0.0, 0.0), c(0.0, 0.0)), 0.3, 0.3).unwrap();
        assert!(big.perturbativity_warning);
        let bad = es(f64::NAN, 1.0, c(0.0, 0.0), c(0.0, 0.0));
        assert!(density_matrix(&bad, 0.01, 0.01).is_err());
    }

    #[test]
    fn eigenvalues_match_dense_solver() {
        let s = density_matrix(&es(0.37, 0.52, c(0.2, -0.1), c(0.31, 0.12)), 0.05, 0.04).unwrap();
        let m = nalgebra::Matrix4::from_fn(|i, j| {
            nalgebra::Complex::new(s.rho[i][j].re, s.rho[i][j].im)
        });
        let mut dense: std::vec::Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        for (a, b) in s.eigenvalues().iter().zip(dense) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn small_eigenvalue_keeps_relative_accuracy() {
        let m = 1e-9;
        let s = density_matrix(&es(0.0, 0.0, c(0.0, 0.0), c(m, 0.0)), 1.0, 1.0).unwrap();
        // Exact: (1 - sqrt(1 + 4 m^2)) / 2 = -m^2 / (1 + ...) to leading order.
        assert_relative_eq!(s.min_eigenvalue(), -m * m, max_relative = 1e-12);
    }

    #[test]
    fn clamp_keeps_nan() {
        assert!(negativity_from_parts(0.1, 0.1, f64::NAN).is_nan());
        assert_eq!(negativity_from_parts(0.1, 0.1, 0.01), 0.0);
    }

    #[test]
    fn negativity2_examples() {
        assert_relative_eq!(negativity2_from_parts(0.1, 0.1, 0.3), 0.2, epsilon = 1e-15);
        assert_relative_eq!(negativity2_from_parts(0.25, 0.25, 0.0), -0.25, epsilon = 1e-15);
        let want = -0.15 + 0.5 * sqrt(0.01 + 0.16);
        assert_relative_eq!(negativity2_from_parts(0.2, 0.1, 0.2), want, epsilon = 1e-15);
        assert_relative_eq!(want, 0.056_155_3, epsilon = 1e-7);
    }

    #[test]
    fn negativity_reduces_to_difference_for_equal_locals() {
        for (l, m) in [(0.125, 0.5), (0.75, 0.25), (3.0, 0.0), (0.5, 0.5)] {
            assert_eq!(negativity2_from_parts(l, l, m), m - l);
        }
    }

    #[test]
    fn negativity_clamps() {
        assert_eq!(negativity_from_parts(0.2, 0.2, 0.1), 0.0);
        assert_relative_eq!(negativity_from_parts(0.1, 0.1, 0.3), 0.2, epsilon = 1e-15);
        let phased = es(0.1, 0.2, c(0.0, 0.0), c(0.3, 0.0));
        let rotated = es(0.1, 0.2, c(0.0, 0.0), Complex64::from_polar(0.3, 1.1));
        assert_relative_eq!(negativity2(&phased), negativity2(&rotated), epsilon = 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        assert_eq!(mutual_information_from_parts(0.3, 0.4, 0.0).unwrap(), 0.0);
        let cval = 0.37;
        assert_relative_eq!(
            mutual_information_from_parts(cval, cval, cval).unwrap(),
            2.0 * cval * ln(2.0),
            max_relative = 1e-14
        );
        assert!(matches!(
            mutual_information_from_parts(0.1, 0.1, 0.2),
            Err(Error::CauchySchwarz { .. })
        ));
        assert!(mutual_information_from_parts(-0.1, 0.1, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn mutual_information_nonnegative_and_symmetric(a in 0.0f64..2.0, b in 0.0f64..2.0, f in 0.0f64..=1.0) {
            let c_abs = f * sqrt(a * b);
            let i = mutual_information_from_parts(a, b, c_abs).unwrap();
            let j = mutual_information_from_parts(b, a, c_abs).unwrap();
            prop_assert!(i >= 0.0);
            prop_assert!((i - j).abs() <= 1e-13 * a.max(b));
        }

        #[test]
        fn negativity_monotone_in_m(l in 0.0f64..1.0, m1 in 0.0f64..1.0, dm in 0.0f64..1.0) {
            prop_assert!(negativity_from_parts(l, l, m1 + dm) >= negativity_from_parts(l, l, m1));
        }

        #[test]
        fn second_order_state_is_positive(
            l_aa in 0.0f64..5.0, l_bb in 0.0f64..5.0, f in 0.0f64..=1.0, phase in 0.0f64..6.3, m in 0.0f64..0.05,
        ) {
            let lab = Complex64::from_polar(f * sqrt(l_aa * l_bb), phase);
            // The negative eigenvalue is fourth order, lambda^4 |M|^2.
            let s = density_matrix(&es(l_aa, l_bb, lab, c(m, 0.0)), 0.01, 0.01).unwrap();
            prop_assert!(s.min_eigenvalue() >= -1e-10);
        }
    }
}
