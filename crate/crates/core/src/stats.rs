//! Small statistics helpers: moments, normal-approximation intervals and the
//! Student t distribution.

use libm::{exp, fabs, lgamma, log};

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_sd(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some(libm::sqrt(ss / (xs.len() - 1) as f64))
}

/// Mean with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    /// `None` when fewer than two observations are available.
    pub half_width: Option<f64>,
    pub n: usize,
}

impl MeanCi {
    pub fn low(&self) -> Option<f64> {
        self.half_width.map(|h| self.mean - h)
    }

    pub fn high(&self) -> Option<f64> {
        self.half_width.map(|h| self.mean + h)
    }
}

pub const Z_95: f64 = 1.96;

pub fn mean_ci95(xs: &[f64]) -> Option<MeanCi> {
    let mean = mean(xs)?;
    let half_width = sample_sd(xs).map(|sd| Z_95 * sd / libm::sqrt(xs.len() as f64));
    Some(MeanCi {
        mean,
        half_width,
        n: xs.len(),
    })
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if fabs(del - 1.0) < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta I_x(a, b).
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log(1.0 - x);
    let front = exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(df / 2.0, 0.5, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ci_of_two_values() {
        let ci = mean_ci95(&[0.2, 0.4]).unwrap();
        assert!((ci.mean - 0.3).abs() < 1e-15);
        // sd = sqrt(0.02) = 0.141421..., half width 1.96 * sd / sqrt(2) = 0.196
        assert!((ci.half_width.unwrap() - 0.196).abs() < 1e-12);
    }

    #[test]
    fn ci_single_value_undefined() {
        let ci = mean_ci95(&[0.7]).unwrap();
        assert_eq!(ci.half_width, None);
        assert!(mean_ci95(&[]).is_none());
    }

    #[test]
    fn equal_values_zero_width() {
        assert_eq!(mean_ci95(&[0.5; 4]).unwrap().half_width, Some(0.0));
    }

    #[test]
    fn t_two_df_closed_form() {
        // with df = 2 the two-sided p is 1 - t / sqrt(2 + t^2)
        for t in [0.5, 1.0, 3.4641016151377544, 10.0] {
            let exact = 1.0 - t / libm::sqrt(2.0 + t * t);
            assert!((student_t_two_sided_p(t, 2.0) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn t_one_df_is_cauchy() {
        // df = 1: p = 1 - 2 atan(|t|) / pi
        for t in [0.3, 1.0, 7.0] {
            let exact = 1.0 - 2.0 * libm::atan(t) / core::f64::consts::PI;
            assert!((student_t_two_sided_p(t, 1.0) - exact).abs() < 1e-12);
        }
    }
}
