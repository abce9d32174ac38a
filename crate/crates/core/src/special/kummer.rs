use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;

/// Kummer's confluent hypergeometric function
/// `M(a, b, z) = sum_j (a)_j / (b)_j z^j / j!`.
///
/// Negative arguments go through Kummer's transformation
/// `M(a, b, z) = e^z M(b - a, b, -z)` so the summed series never alternates.
/// Accuracy is targeted at `|z| <= 50`; larger positive `z` still converges
/// and is used internally by [`pcf_d`](super::pcf_d).
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64> {
    if b <= 0.0 && b == libm::floor(b) {
        return Err(Error::Domain("kummer M: b must not be a non-positive integer"));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::Domain("kummer M: non-finite argument"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 && !is_polynomial(a) {
        return Ok(libm::exp(z) * series(b - a, b, -z)?);
    }
    series(a, b, z)
}

fn is_polynomial(a: f64) -> bool {
    a <= 0.0 && a == libm::floor(a)
}

fn series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        let ratio = (a + jf) / (b + jf) * z / (jf + 1.0);
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // past the peak of the terms and below round-off
        if ratio.abs() < 1.0 && term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Precision("kummer M series did not converge in 10^4 terms"))
}
