use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Lower bound on the number of distinct methods with between `i_min` and
/// `i_max` smoothing steps when each step offers `n` smoothers:
/// sum over i of (3n)^i.
pub fn count_lower_bound(n: u32, i_min: u32, i_max: u32) -> BigUint {
    let base = BigUint::from(3 * n);
    let mut term = BigUint::one();
    let mut sum = BigUint::zero();
    for i in 0..=i_max {
        if i >= i_min {
            sum += &term;
        }
        term *= &base;
    }
    sum
}
