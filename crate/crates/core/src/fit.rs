//! Least-squares fitting shared by every scaling-law check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least-squares line fit with slope standard error and R^2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r_squared: f64,
}

/// OLS on raw (x, y) pairs.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() || n < 3 {
        return Err(Error::validation("fit needs at least 3 paired samples"));
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::validation("degenerate fit: constant abscissa"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = (syy - slope * sxy).max(0.0);
    let stderr = if n > 2 {
        (ss_res / ((nf - 2.0) * sxx)).sqrt()
    } else {
        0.0
    };
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LineFit {
        slope,
        intercept,
        stderr,
        r_squared,
    })
}

/// OLS on (log x, log y). All inputs must be strictly positive. This is the
/// scaling-exponent estimator behind every "≲ N^c" diagnostic.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::validation("fit_exponent needs positive finite inputs"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Finite-difference slopes of log y against log x between consecutive
/// samples. Used to detect superlinear (diverging) log-log growth.
pub fn local_slopes(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::validation("local_slopes needs at least 2 samples"));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::validation("local_slopes needs positive finite inputs"));
    }
    Ok(xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] / y[0]).ln() / (x[1] / x[0]).ln())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_square_law() {
        let xs: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let fit = fit_exponent(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 2.0, epsilon = 1e-12);
        assert!(fit.stderr < 1e-12);
        assert_relative_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_response() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys = [3.0, 3.0, 3.0, 3.0];
        let fit = fit_exponent(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_nonpositive_input() {
        assert!(fit_exponent(&[1.0, 2.0, 3.0], &[1.0, -2.0, 3.0]).is_err());
        assert!(fit_exponent(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn local_slopes_of_power_law() {
        let xs = [2.0, 4.0, 8.0];
        let ys = [4.0, 16.0, 64.0];
        let s = local_slopes(&xs, &ys).unwrap();
        assert_relative_eq!(s[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(s[1], 2.0, epsilon = 1e-12);
    }
}
