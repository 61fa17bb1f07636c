use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// `n = s * r^2` with `s` squarefree and carrying the sign of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareFreeDecomp {
    pub s: BigInt,
    pub r: BigInt,
}

/// Prime support of the squarefree part together with the square cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SquareSplit {
    pub negative: bool,
    /// Primes dividing `n` to an odd power, ascending.
    pub odd_primes: Vec<BigInt>,
    pub r: BigInt,
}

pub fn squarefree_part(n: &BigInt) -> Result<SquareFreeDecomp, ArithError> {
    squarefree_part_with_bound(n, DEFAULT_TRIAL_BOUND)
}

pub fn squarefree_part_with_bound(n: &BigInt, bound: u64) -> Result<SquareFreeDecomp, ArithError> {
    let split = split_square(n, bound)?;
    let mut s: BigInt = split.odd_primes.iter().product();
    if split.negative {
        s = -s;
    }
    Ok(SquareFreeDecomp { s, r: split.r })
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub(crate) fn split_square(n: &BigInt, bound: u64) -> Result<SquareSplit, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let negative = n.sign() == Sign::Minus;
    let mut rest = n.abs();
    let mut odd_primes = Vec::new();
    let mut r = BigInt::one();

    let record = |p: BigInt, e: u32, odd_primes: &mut Vec<BigInt>, r: &mut BigInt| {
        if e % 2 == 1 {
            odd_primes.push(p.clone());
        }
        *r *= num_traits::pow(p, (e / 2) as usize);
    };

    let mut candidates = TrialCandidates::new();
    loop {
        if rest.is_one() {
            break;
        }
        let p = candidates.next_candidate();
        if p > bound {
            break;
        }
        // Fast path once the cofactor fits a machine word.
        if let Some(small) = rest.to_u128() {
            let pp = p as u128;
            if pp * pp > small {
                break;
            }
            if small % pp == 0 {
                let mut e = 0u32;
                let mut v = small;
                while v % pp == 0 {
                    v /= pp;
                    e += 1;
                }
                rest = BigInt::from(v);
                record(BigInt::from(p), e, &mut odd_primes, &mut r);
            }
        } else {
            let bp = BigInt::from(p);
            if (&rest % &bp).is_zero() {
                let mut e = 0u32;
                while (&rest % &bp).is_zero() {
                    rest /= &bp;
                    e += 1;
                }
                record(bp, e, &mut odd_primes, &mut r);
            }
        }
    }

    if !rest.is_one() {
        let b = BigInt::from(bound);
        if &b * &b >= rest {
            // every prime factor below the bound has been removed
            odd_primes.push(rest);
        } else if is_perfect_square(&rest) {
            r *= rest.sqrt();
        } else if is_prime(&rest) == Some(true) {
            odd_primes.push(rest);
        } else {
            return Err(ArithError::FactorizationIncomplete {
                value: n.clone(),
                cofactor: rest,
                bound,
            });
        }
    }
    odd_primes.sort();
    Ok(SquareSplit {
        negative,
        odd_primes,
        r,
    })
}

/// Trial divisors 2, 3 and then numbers of the form 6k +- 1.
struct TrialCandidates {
    next: u64,
    step_two: bool,
}

impl TrialCandidates {
    fn new() -> Self {
        Self {
            next: 2,
            step_two: true,
        }
    }

    fn next_candidate(&mut self) -> u64 {
        let p = self.next;
        self.next = match p {
            2 => 3,
            3 => 5,
            _ => {
                let step = if self.step_two { 2 } else { 4 };
                self.step_two = !self.step_two;
                p + step
            }
        };
        p
    }
}

/// Miller-Rabin with the first thirteen prime bases, deterministic below
/// 3.317e24. Returns `None` when the input is too large for a proof.
pub fn is_prime(n: &BigInt) -> Option<bool> {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    if n < &BigInt::from(2) {
        return Some(false);
    }
    for &b in &BASES {
        let bb = BigInt::from(b);
        if n == &bb {
            return Some(true);
        }
        if (n % &bb).is_zero() {
            return Some(false);
        }
    }
    let limit: BigInt = "3317044064679887385961981".parse().unwrap();
    if n >= &limit {
        return None;
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return Some(false);
    }
    Some(true)
}
