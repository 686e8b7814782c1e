use crate::error::{LidError, Result};

/// Sample Pearson correlation coefficient, computed two-pass in f64.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(LidError::LengthMismatch { gold: x.len(), predictions: y.len() });
    }
    if x.len() < 2 {
        return Err(LidError::TooFewPoints(x.len()));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(LidError::DegenerateVariance);
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}
