//! Integer sets and the elementary sumset algebra.

mod bits;
mod params;
mod set;

pub use bits::Bits;
pub use params::LambdaParams;
pub use set::{IntegerSet, Progression, MAX_WINDOW_BITS};

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{domain, Error, Result};

fn require_nonempty(s: &IntegerSet, name: &str) -> Result<()> {
    if s.is_empty() {
        domain(format!("operand `{name}` is empty"))
    } else {
        Ok(())
    }
}

/// `A + B`, computed by OR-ing shifted copies of the larger operand's bit-vector.
///
/// The result window is `[a.lo + b.lo, a.hi + b.hi]`.
pub fn sumset(a: &IntegerSet, b: &IntegerSet) -> Result<IntegerSet> {
    require_nonempty(a, "a")?;
    require_nonempty(b, "b")?;
    Ok(sumset_unchecked(a, b))
}

pub(crate) fn sumset_unchecked(a: &IntegerSet, b: &IntegerSet) -> IntegerSet {
    let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (blo, bhi) = big.window();
    let (slo, shi) = small.window();
    let width = (bhi - blo) + (shi - slo) + 1;
    let mut out = Bits::zeros(width as usize);
    for y in small.iter() {
        out.or_shifted(big.bits(), (y - slo) as usize);
    }
    IntegerSet::from_bits(out, blo + slo)
}

/// `A - B = {x - y}`.
pub fn difference_set(a: &IntegerSet, b: &IntegerSet) -> Result<IntegerSet> {
    require_nonempty(a, "a")?;
    require_nonempty(b, "b")?;
    Ok(sumset_unchecked(a, &b.negated()))
}

/// `|A+A| / |A|` as an exact rational.
pub fn doubling_ratio(a: &IntegerSet) -> Result<Rational64> {
    require_nonempty(a, "a")?;
    let s = sumset_unchecked(a, a).len();
    Ok(Rational64::new(s as i64, a.len() as i64))
}

/// The shortest progression containing `a`: step is the gcd of consecutive
/// gaps, start is `min(a)`. A singleton gets step 1.
pub fn smallest_progression(a: &IntegerSet) -> Result<Progression> {
    require_nonempty(a, "a")?;
    let els = a.elements();
    let step = els.windows(2).fold(0i64, |g, w| g.gcd(&(w[1] - w[0])));
    let step = if step == 0 { 1 } else { step };
    let (lo, hi) = (els[0], els[els.len() - 1]);
    Progression::new(lo, step, (hi - lo) / step + 1)
}

/// `l(A)`: length of the shortest progression containing `a`.
pub fn ell(a: &IntegerSet) -> Result<i64> {
    smallest_progression(a).map(|p| p.length)
}

/// `M(A) = {1, ..., lambda*k} \ (A+A)`.
pub fn missing_set(a: &IntegerSet, params: &LambdaParams) -> Result<IntegerSet> {
    require_nonempty(a, "a")?;
    let top = params.lambda_k()?;
    let ss = sumset_unchecked(a, a);
    Ok(IntegerSet::new((1..=top).filter(|&x| !ss.contains(x))))
}

/// `b(A) = |A \ [lambda*k/2]|` and `r(A) = max(A) - min(A) - lambda*k/2`.
///
/// `r` is returned as is, possibly negative.
pub fn b_r_stats(a: &IntegerSet, params: &LambdaParams) -> Result<(i64, i64)> {
    require_nonempty(a, "a")?;
    let half = params.half_lambda_k()?;
    Ok(b_r_with_half(a, half))
}

pub(crate) fn b_r_with_half(a: &IntegerSet, half: i64) -> (i64, i64) {
    let b = a.iter().filter(|&x| x < 1 || x > half).count() as i64;
    let r = a.max().unwrap() - a.min().unwrap() - half;
    (b, r)
}

/// The index set `{j : start + j*step in A}`; fails on the first element off the lattice.
pub fn normalize_to_interval(a: &IntegerSet, prog: &Progression) -> Result<IntegerSet> {
    require_nonempty(a, "a")?;
    let mut out = Vec::with_capacity(a.len());
    for x in a.iter() {
        let off = x - prog.start;
        if off % prog.step != 0 {
            return domain(format!(
                "element {x} is not on the lattice {} + {}Z",
                prog.start, prog.step
            ));
        }
        out.push(off / prog.step);
    }
    Ok(IntegerSet::new(out))
}

/// `{start + step*j : j in A}`.
pub fn affine_image(a: &IntegerSet, start: i64, step: i64) -> Result<IntegerSet> {
    require_nonempty(a, "a")?;
    if step < 1 {
        return domain(format!("affine step must be positive (got {step})"));
    }
    let mut out = Vec::with_capacity(a.len());
    for j in a.iter() {
        let x = j
            .checked_mul(step)
            .and_then(|v| v.checked_add(start))
            .ok_or_else(|| Error::Storage(format!("affine image of {j} overflows")))?;
        out.push(x);
    }
    let (lo, hi) = (out[0], out[out.len() - 1]);
    if hi - lo >= MAX_WINDOW_BITS {
        return Err(Error::Storage(format!("affine image spans [{lo}, {hi}]")));
    }
    Ok(IntegerSet::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn set(xs: &[i64]) -> IntegerSet {
        IntegerSet::new(xs.iter().copied())
    }

    fn brute_sum(a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: BTreeSet<i64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
        s.into_iter().collect()
    }

    fn lp(n: i64, k: i64, num: i64, den: i64) -> LambdaParams {
        LambdaParams::new(n, k, Rational64::new(num, den)).unwrap()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&[1, 2, 3]), &set(&[1, 2, 3])).unwrap(), set(&[2, 3, 4, 5, 6]));
        assert_eq!(
            sumset(&set(&[1, 2, 4]), &set(&[1, 2, 4])).unwrap().elements(),
            brute_sum(&[1, 2, 4], &[1, 2, 4])
        );
        assert_eq!(sumset(&set(&[1, 2, 4]), &set(&[1, 2, 4])).unwrap(), set(&[2, 3, 4, 5, 6, 8]));
        assert_eq!(sumset(&set(&[0]), &set(&[0])).unwrap(), set(&[0]));
        let s = sumset(&set(&[-3, 0]), &set(&[10, 12])).unwrap();
        assert_eq!(s.window(), (7, 12));
    }

    #[test]
    fn empty_operand_is_named() {
        let err = sumset(&set(&[1]), &IntegerSet::empty()).unwrap_err();
        assert!(err.to_string().contains("`b`"));
        assert!(difference_set(&IntegerSet::empty(), &set(&[1])).is_err());
        assert!(doubling_ratio(&IntegerSet::empty()).is_err());
        assert!(smallest_progression(&IntegerSet::empty()).is_err());
    }

    #[test]
    fn difference_examples() {
        assert_eq!(
            difference_set(&set(&[0, 1, 3]), &set(&[0, 1, 3])).unwrap(),
            set(&[-3, -2, -1, 0, 1, 2, 3])
        );
        assert_eq!(difference_set(&set(&[5]), &set(&[5])).unwrap(), set(&[0]));
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_ratio(&set(&[1, 2, 3])).unwrap(), Rational64::new(5, 3));
        assert_eq!(doubling_ratio(&set(&[1, 2, 4])).unwrap(), Rational64::from_integer(2));
        assert_eq!(doubling_ratio(&set(&[7])).unwrap(), Rational64::from_integer(1));
    }

    #[test]
    fn smallest_progression_examples() {
        assert_eq!(smallest_progression(&set(&[3, 7, 11])).unwrap(), Progression::new(3, 4, 3).unwrap());
        assert_eq!(smallest_progression(&set(&[0, 2, 3])).unwrap(), Progression::new(0, 1, 4).unwrap());
        assert_eq!(smallest_progression(&set(&[5])).unwrap(), Progression::new(5, 1, 1).unwrap());
    }

    #[test]
    fn missing_set_examples() {
        let params = lp(6, 3, 2, 1);
        assert_eq!(missing_set(&set(&[1, 2, 3]), &params).unwrap(), set(&[1]));
        let params = lp(20, 7, 2, 1);
        assert_eq!(missing_set(&set(&[1, 2, 3, 4, 5, 6, 7]), &params).unwrap(), set(&[1]));
        // a+a = {0..8} covers [6]
        assert!(missing_set(&set(&[0, 1, 2, 3, 4]), &lp(10, 3, 2, 1)).unwrap().is_empty());
    }

    #[test]
    fn missing_set_needs_integer_lambda_k() {
        let params = lp(10, 3, 5, 2);
        assert!(missing_set(&set(&[1, 2, 3]), &params).is_err());
        let params = params.with_floor_mode(true);
        // lambda*k = 15/2 rounds to 7
        assert_eq!(missing_set(&set(&[1, 2, 3]), &params).unwrap(), set(&[1, 7]));
    }

    #[test]
    fn b_r_examples() {
        let params = lp(20, 4, 3, 1);
        assert_eq!(b_r_stats(&set(&[0, 1, 5, 8]), &params).unwrap(), (2, 2));
        assert_eq!(b_r_stats(&set(&[1, 3, 6]), &params).unwrap(), (0, -1));
        assert_eq!(b_r_stats(&set(&[1, 2, 3, 6]), &params).unwrap(), (0, -1));
        assert!(b_r_stats(&set(&[1, 2]), &lp(20, 3, 3, 1)).is_err());
    }

    #[test]
    fn normalize_and_affine_examples() {
        let p = Progression::new(3, 4, 3).unwrap();
        assert_eq!(normalize_to_interval(&set(&[3, 7, 11]), &p).unwrap(), set(&[0, 1, 2]));
        let p = Progression::new(3, 2, 1).unwrap();
        assert_eq!(normalize_to_interval(&set(&[-1, 3, 5]), &p).unwrap(), set(&[-2, 0, 1]));
        let err = normalize_to_interval(&set(&[3, 4]), &p).unwrap_err();
        assert!(err.to_string().contains("element 4"));

        assert_eq!(affine_image(&set(&[0, 1, 2]), 3, 4).unwrap(), set(&[3, 7, 11]));
        assert_eq!(affine_image(&set(&[4, 9]), 0, 1).unwrap(), set(&[4, 9]));
        let a = set(&[0, 2, 5]);
        let img = affine_image(&a, 1, 3).unwrap();
        let lhs = sumset(&a, &a).unwrap().len();
        let rhs = sumset(&img, &img).unwrap().len();
        assert_eq!((lhs, rhs), (brute_sum(&[0, 2, 5], &[0, 2, 5]).len(), 6));
        assert_eq!(lhs, 6);
    }

    #[test]
    fn cauchy_davenport_floor_is_tight_exactly_on_progressions() {
        for mask in 0u32..(1 << 15) {
            let pop = mask.count_ones();
            if !(2..=6).contains(&pop) {
                continue;
            }
            let a = IntegerSet::from_mask(mask as u64, 0);
            let s = sumset(&a, &a).unwrap().len();
            assert!(s >= 2 * a.len() - 1, "{a}");
            let is_ap = ell(&a).unwrap() == a.len() as i64;
            assert_eq!(s == 2 * a.len() - 1, is_ap, "{a}");
        }
    }

    fn small_set() -> impl Strategy<Value = IntegerSet> {
        prop::collection::btree_set(-40i64..40, 1..12).prop_map(IntegerSet::new)
    }

    proptest! {
        #[test]
        fn sumset_matches_brute_force_and_commutes(a in small_set(), b in small_set()) {
            let ab = sumset(&a, &b).unwrap();
            prop_assert_eq!(ab.elements(), &brute_sum(a.elements(), b.elements())[..]);
            prop_assert_eq!(&ab, &sumset(&b, &a).unwrap());
            prop_assert!(ab.len() <= a.len() * b.len());
        }

        #[test]
        fn sumset_is_monotone(a in small_set(), extra in small_set()) {
            let bigger = a.union(&extra);
            prop_assert!(sumset(&a, &a).unwrap().is_subset(&sumset(&bigger, &bigger).unwrap()));
        }

        #[test]
        fn difference_set_is_symmetric(a in small_set()) {
            let d = difference_set(&a, &a).unwrap();
            prop_assert!(d.contains(0));
            prop_assert_eq!(&d, &d.negated());
        }

        #[test]
        fn affine_maps_preserve_doubling_and_ell(a in small_set(), start in -50i64..50, step in 1i64..9) {
            let img = affine_image(&a, start, step).unwrap();
            prop_assert_eq!(doubling_ratio(&a).unwrap(), doubling_ratio(&img).unwrap());
            prop_assert_eq!(ell(&a).unwrap(), ell(&img).unwrap());
            let p = Progression::new(start, step, 1).unwrap();
            prop_assert_eq!(normalize_to_interval(&img, &p).unwrap(), a);
        }

        #[test]
        fn missing_set_partitions_the_target(a in prop::collection::btree_set(1i64..30, 1..10), k in 1i64..10) {
            let a = IntegerSet::new(a);
            let params = LambdaParams::new(60, k, Rational64::from_integer(3)).unwrap();
            let top = params.lambda_k().unwrap();
            let m = missing_set(&a, &params).unwrap();
            let ss = sumset(&a, &a).unwrap();
            prop_assert!(m.is_disjoint(&ss));
            let covered = (1..=top).filter(|&x| ss.contains(x)).count();
            prop_assert_eq!(covered + m.len(), top as usize);
        }
    }
}
