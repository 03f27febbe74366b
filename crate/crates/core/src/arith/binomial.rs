use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Exact `binom(a, b)`; zero when `b < 0`, `b > a` or `a < 0`.
///
/// Multiplicative formula over the shorter side, dividing out the gcd of each
/// new numerator/denominator pair before touching the accumulator.
pub fn binomial_big(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 1..=b {
        let mut num = a - b + i;
        let mut den = i;
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        acc *= num;
        // acc * (a-b+i) / i is an integer, so after the gcd step `den` divides `acc`.
        acc /= den;
    }
    acc
}

/// Exact binomial in 128 bits, `None` on overflow.
pub fn binomial_u128(a: u64, b: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 1..=b as u128 {
        let num = a as u128 - b as u128 + i;
        let g = gcd_u128(acc, i);
        let (acc_r, den_r) = (acc / g, i / g);
        let g2 = gcd_u128(num, den_r);
        acc = acc_r.checked_mul(num / g2)?;
        acc /= den_r / g2;
    }
    Some(acc)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pascal's triangle up to row `max`, as big integers. `table[a][b] = binom(a, b)`.
pub fn pascal_rows(max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max + 1);
    for a in 0..=max {
        let mut row = Vec::with_capacity(a + 1);
        for b in 0..=a {
            if b == 0 || b == a {
                row.push(BigUint::one());
            } else {
                let v = &rows[a - 1][b - 1] + &rows[a - 1][b];
                row.push(v);
            }
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(binomial_big(12, 8), BigUint::from(495u32));
        assert_eq!(binomial_big(9, 0), BigUint::one());
        assert_eq!(binomial_big(0, 0), BigUint::one());
        assert_eq!(binomial_big(5, 7), BigUint::zero());
        assert_eq!(binomial_big(5, -1), BigUint::zero());
        assert_eq!(binomial_big(-3, 1), BigUint::zero());
        assert_eq!(binomial_big(30, 8), BigUint::from(5_852_925u32));
    }

    #[test]
    fn matches_pascal_recurrence() {
        let table = pascal_rows(60);
        for a in 0..=60i64 {
            for b in 0..=a {
                assert_eq!(binomial_big(a, b), table[a as usize][b as usize], "({a},{b})");
                assert_eq!(
                    binomial_u128(a as u64, b as u64).map(BigUint::from),
                    Some(table[a as usize][b as usize].clone())
                );
            }
        }
    }

    #[test]
    fn u128_overflow_is_reported() {
        assert!(binomial_u128(200, 100).is_none());
        assert_eq!(binomial_u128(3, 5), Some(0));
    }
}
