//! Weight vectors for the sorted ℓ1 norm.
//!
//! A [`WeightVector`] holds `w₁ ≥ w₂ ≥ … ≥ wₙ ≥ 0` with `w₁ > 0`. Validation is
//! exact: values are compared as given, without any tolerance, and are never
//! reordered. Trailing zeros are allowed, which is what makes the ℓ∞ norm
//! expressible.
//!
//! Non-decreasing weight sequences (small-magnitude-penalizing variants) give a
//! non-convex penalty and cannot be represented.

use std::ops::Deref;

use crate::error::WeightError;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
}

impl WeightVector {
    /// Validates `values` and wraps them.
    pub fn new(values: Vec<f64>) -> Result<Self, WeightError> {
        if values.is_empty() {
            return Err(WeightError::Empty);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(WeightError::NonFinite { index });
        }
        if let Some(index) = values.iter().position(|&v| v < 0.0) {
            return Err(WeightError::Negative {
                index,
                value: values[index],
            });
        }
        if let Some(index) = values.windows(2).position(|p| p[0] < p[1]) {
            return Err(WeightError::NotSorted {
                index,
                value: values[index],
                next_value: values[index + 1],
            });
        }
        if values[0] <= 0.0 {
            return Err(WeightError::ZeroLeading);
        }
        Ok(Self { values })
    }

    /// Same as [`WeightVector::new`], from a slice.
    pub fn custom(values: &[f64]) -> Result<Self, WeightError> {
        Self::new(values.to_vec())
    }

    /// OSCAR weights `wᵢ = λ1 + λ2·(n − i)` for `i = 1..n`.
    ///
    /// With `λ2 = 0` this is `λ1‖x‖₁`.
    pub fn oscar(n: usize, lambda1: f64, lambda2: f64) -> Result<Self, WeightError> {
        if n == 0 {
            return Err(WeightError::Empty);
        }
        check_param("lambda1", lambda1)?;
        check_param("lambda2", lambda2)?;
        let values = (0..n)
            .map(|i| lambda1 + lambda2 * (n - 1 - i) as f64)
            .collect();
        Self::new(values)
    }

    /// Constant weights, giving `λ‖x‖₁`.
    pub fn l1(n: usize, lambda: f64) -> Result<Self, WeightError> {
        Self::oscar(n, lambda, 0.0)
    }

    /// `(t1, 0, …, 0)`, giving `t1‖x‖∞`.
    pub fn linf(n: usize, t1: f64) -> Result<Self, WeightError> {
        if n == 0 {
            return Err(WeightError::Empty);
        }
        check_param("t1", t1)?;
        if t1 == 0.0 {
            return Err(WeightError::ZeroLeading);
        }
        let mut values = vec![0.0; n];
        values[0] = t1;
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    /// Weights multiplied by `factor > 0`.
    ///
    /// `prox` of `c·Ω_w` equals `prox` of `Ω_{c·w}`, so this is how step sizes are
    /// folded into the weights.
    pub fn scaled(&self, factor: f64) -> Result<Self, WeightError> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(WeightError::InvalidParameter(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        Self::new(self.values.iter().map(|w| w * factor).collect())
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = WeightError;

    fn try_from(values: Vec<f64>) -> Result<Self, WeightError> {
        Self::new(values)
    }
}

fn check_param(name: &str, value: f64) -> Result<(), WeightError> {
    if !value.is_finite() || value < 0.0 {
        return Err(WeightError::InvalidParameter(format!(
            "{name} must be finite and non-negative, got {value}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn oscar_direct_evaluation() {
        let w = WeightVector::oscar(3, 1.0, 0.5).unwrap();
        assert_eq!(w.as_slice(), &[2.0, 1.5, 1.0]);
    }

    #[test]
    fn oscar_without_lambda2_is_constant() {
        let w = WeightVector::oscar(4, 1.0, 0.0).unwrap();
        assert_eq!(w.as_slice(), &[1.0; 4]);
    }

    #[test]
    fn oscar_rejects_zero_and_negative() {
        assert_eq!(
            WeightVector::oscar(2, 0.0, 0.0),
            Err(WeightError::ZeroLeading)
        );
        assert_eq!(WeightVector::oscar(0, 1.0, 1.0), Err(WeightError::Empty));
        assert!(matches!(
            WeightVector::oscar(3, -1.0, 1.0),
            Err(WeightError::InvalidParameter(_))
        ));
        assert!(matches!(
            WeightVector::oscar(3, 1.0, -0.1),
            Err(WeightError::InvalidParameter(_))
        ));
        // n = 1 makes λ2 irrelevant, so only λ1 can keep w₁ positive.
        assert_eq!(
            WeightVector::oscar(1, 0.0, 3.0),
            Err(WeightError::ZeroLeading)
        );
        assert_eq!(
            WeightVector::oscar(2, 0.0, 3.0).unwrap().as_slice(),
            &[3.0, 0.0]
        );
    }

    #[test]
    fn linf_constructor() {
        assert_eq!(
            WeightVector::linf(3, 1.0).unwrap().as_slice(),
            &[1.0, 0.0, 0.0]
        );
        assert_eq!(WeightVector::linf(1, 2.0).unwrap().as_slice(), &[2.0]);
        assert_eq!(WeightVector::linf(2, 0.0), Err(WeightError::ZeroLeading));
        assert!(WeightVector::linf(2, -1.0).is_err());
    }

    #[test]
    fn custom_validation() {
        assert!(WeightVector::custom(&[2.0, 1.5, 1.0]).is_ok());
        assert!(matches!(
            WeightVector::custom(&[1.0, 2.0]),
            Err(WeightError::NotSorted { index: 0, .. })
        ));
        assert!(matches!(
            WeightVector::custom(&[1.0, -0.5]),
            Err(WeightError::Negative { index: 1, .. })
        ));
        assert_eq!(
            WeightVector::custom(&[0.0, 0.0]),
            Err(WeightError::ZeroLeading)
        );
        assert_eq!(WeightVector::custom(&[]), Err(WeightError::Empty));
        assert_eq!(
            WeightVector::custom(&[1.0, f64::NAN]),
            Err(WeightError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn validation_is_exact() {
        // One ulp above the previous entry is already out of order.
        let a = 1.0_f64;
        let b = f64::from_bits(a.to_bits() + 1);
        assert!(WeightVector::custom(&[a, b]).is_err());
        assert!(WeightVector::custom(&[b, a]).is_ok());
    }

    #[test]
    fn scaling() {
        let w = WeightVector::oscar(3, 1.0, 0.5).unwrap();
        assert_eq!(w.scaled(2.0).unwrap().as_slice(), &[4.0, 3.0, 2.0]);
        assert!(w.scaled(0.0).is_err());
    }

    proptest! {
        #[test]
        fn oscar_has_constant_decrement(n in 1usize..40, l1 in 0.01f64..10.0, l2 in 0.0f64..10.0) {
            let w = WeightVector::oscar(n, l1, l2).unwrap();
            for pair in w.windows(2) {
                prop_assert!(pair[0] >= pair[1]);
                prop_assert!(((pair[0] - pair[1]) - l2).abs() <= 1e-12 * (1.0 + pair[0]));
            }
            prop_assert!(WeightVector::custom(&w).is_ok());
        }

        #[test]
        fn constructors_pass_custom_validation(n in 1usize..40, t in 0.001f64..100.0) {
            let linf = WeightVector::linf(n, t).unwrap();
            prop_assert_eq!(WeightVector::custom(&linf).unwrap(), linf);
            let l1 = WeightVector::l1(n, t).unwrap();
            prop_assert!(l1.iter().all(|&v| v == t));
            prop_assert_eq!(WeightVector::custom(&l1).unwrap(), l1);
        }
    }
}
