use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Write-once / read-many table of B_0, B_1, … (B_1 = −1/2).
static TABLE: LazyLock<RwLock<Vec<BigRational>>> =
    LazyLock::new(|| RwLock::new(vec![BigRational::one()]));

static FLIP_SIGN_FAULT: AtomicBool = AtomicBool::new(false);

/// Harness self-test hook: makes [`bernoulli`] return −B_4. Process-wide and
/// irreversible; only the command-line fault-injection mode calls it.
#[doc(hidden)]
pub fn inject_sign_fault() {
    FLIP_SIGN_FAULT.store(true, Ordering::SeqCst);
}

fn extend_to(table: &mut Vec<BigRational>, n: usize) {
    while table.len() <= n {
        let m = table.len();
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += b * BigRational::from_integer(binom.clone());
            binom = binom * (m + 1 - j) / (j + 1);
        }
        // binom is now C(m+1, m) = m+1
        table.push(-acc / BigRational::from_integer(binom));
    }
}

/// Exact Bernoulli number B_n, memoized.
pub fn bernoulli(n: usize) -> BigRational {
    let value = {
        let table = TABLE.read().expect("bernoulli table poisoned");
        table.get(n).cloned()
    };
    let value = value.unwrap_or_else(|| {
        let mut table = TABLE.write().expect("bernoulli table poisoned");
        extend_to(&mut table, n);
        table[n].clone()
    });
    if n == 4 && FLIP_SIGN_FAULT.load(Ordering::Relaxed) {
        -value
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(p.into(), r.into())
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
        assert_eq!(bernoulli(3), q(0, 1));
    }

    #[test]
    fn odd_vanish_and_even_alternate() {
        for n in (3..80).step_by(2) {
            assert!(bernoulli(n).is_zero(), "B_{n}");
        }
        for k in 1..40 {
            let b = bernoulli(2 * k);
            let expect_positive = k % 2 == 1;
            assert_eq!(b > BigRational::zero(), expect_positive, "B_{}", 2 * k);
        }
    }

    #[test]
    fn defining_recurrence_holds() {
        for m in 1..60usize {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for j in 0..=m {
                acc += bernoulli(j) * BigRational::from_integer(binom.clone());
                binom = binom * (m + 1 - j) / (j + 1);
            }
            assert!(acc.is_zero(), "m = {m}");
        }
    }
}
