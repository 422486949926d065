use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{Real, C};

/// `Σ_{i=1..n} Tⁱ` by binary doubling:
/// `G(2m) = G(m) + TᵐG(m)`, `G(m+1) = G(m) + Tᵐ⁺¹`.
///
/// Uses `O(log n)` products and a fixed evaluation order, so the result is
/// reproducible bit for bit.
pub fn power_sum<T: Real>(t: &CMatrix<T>, n: usize) -> CMatrix<T> {
    let d = t.rows();
    let mut sum = CMatrix::zeros(d, d);
    let mut power = CMatrix::identity(d);
    if n == 0 {
        return sum;
    }
    let bits = usize::BITS - n.leading_zeros();
    for b in (0..bits).rev() {
        // m -> 2m
        sum = &sum + &(&power * &sum);
        power = &power * &power;
        if (n >> b) & 1 == 1 {
            // m -> m + 1
            power = &power * t;
            sum = &sum + &power;
        }
    }
    sum
}

/// Cesàro mean `A_n(L/λ) = n⁻¹ Σ_{i=1..n} (L/λ)ⁱ` for unit-modulus `λ`.
///
/// Computed from matrix products only; no spectral information is used, so
/// it serves as an independent route to the projector `P_λ`.
pub fn cesaro_average<T: Real>(l: &Superoperator<T>, lambda: C<T>, n: usize) -> Result<CMatrix<T>> {
    if n == 0 {
        return Err(Error::Domain("Cesàro average needs n >= 1".into()));
    }
    if (lambda.norm() - T::one()).abs() > T::lit(1e-12) {
        return Err(Error::Domain(format!(
            "Cesàro average needs |lambda| = 1, got {}",
            lambda.norm()
        )));
    }
    let scaled = l.matrix().scale(lambda.inv());
    Ok(power_sum(&scaled, n).scale_real(T::one() / T::from_count(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Side;
    use crate::scalar::c;

    #[test]
    fn power_sum_matches_running_sum() {
        let t = CMatrix::<f64>::from_real(2, 2, &[0.5, 0.2, -0.1, 0.3]).unwrap();
        for n in [1, 2, 3, 7, 8, 13] {
            let mut acc = CMatrix::zeros(2, 2);
            let mut p = CMatrix::identity(2);
            for _ in 0..n {
                p = &p * &t;
                acc = &acc + &p;
            }
            assert!(power_sum(&t, n).max_abs_diff(&acc) < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn trivial_averages() {
        let id = Superoperator::from_matrix(2, Side::Forward, CMatrix::<f64>::identity(4)).unwrap();
        assert!(cesaro_average(&id, c(1.0), 17).unwrap().max_abs_diff(&CMatrix::identity(4)) < 1e-15);

        let neg = Superoperator::from_matrix(2, Side::Forward, CMatrix::<f64>::identity(4).scale_real(-1.0)).unwrap();
        assert!(cesaro_average(&neg, c(1.0), 10).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let id = Superoperator::from_matrix(1, Side::Forward, CMatrix::<f64>::identity(1)).unwrap();
        assert!(matches!(cesaro_average(&id, c(0.9), 5), Err(Error::Domain(_))));
        assert!(matches!(cesaro_average(&id, c(1.0), 0), Err(Error::Domain(_))));
    }
}
