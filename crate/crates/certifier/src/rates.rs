use crate::CertError;

/// Worst-case L-inf rate for a single-hidden-layer approximation of a
/// C^n-smooth d-variate function by N neurons: C_M * N^(-n/d) under the
/// explicit constant convention C_M = 1. Targets are affinely rescaled into
/// the normalized Sobolev ball and the bound un-rescaled, with the rescale
/// factors recorded in the certificate, so the rate itself is dimensionless.
/// n = 0 returns exactly C_M (the O(1) bound for discontinuous targets).
pub fn shallow_rate(neurons: usize, n: u32, d: usize) -> f64 {
    assert!(neurons >= 1 && d >= 1);
    (neurons as f64).powf(-(n as f64) / (d as f64))
}

/// Error of a composition from per-factor errors: || f.g - f~.g~ || <=
/// e_f + L e_g for L-Lipschitz f. Exactly one multiply and one add.
pub fn compose_bound(e_f: f64, lipschitz: f64, e_g: f64) -> Result<f64, CertError> {
    for (name, v) in [("e_f", e_f), ("L", lipschitz), ("e_g", e_g)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(CertError::BadInput(format!(
                "{name} = {v} must be finite and non-negative"
            )));
        }
    }
    Ok(e_f + lipschitz * e_g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shallow_rate_named_values() {
        assert_eq!(shallow_rate(64, 1, 2), 0.125);
        assert_eq!(shallow_rate(128, 2, 2), 0.0078125);
        assert_eq!(shallow_rate(64, 0, 2), 1.0);
        assert_eq!(shallow_rate(999, 0, 3), 1.0);
    }

    #[test]
    fn compose_bound_values() {
        assert_eq!(compose_bound(0.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(compose_bound(0.1, 0.5, 1.0).unwrap(), 0.6);
        assert!(compose_bound(-0.1, 0.5, 1.0).is_err());
        assert!(compose_bound(0.1, f64::INFINITY, 1.0).is_err());
    }
}
