//! Elementary integer arithmetic: primality, factorization, the Kronecker
//! symbol and the multiplicative functions ψ, φ, ω and μ.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Prime factorization by trial division, smallest prime first.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// ψ(n) = |ℙ¹(ℤ/nℤ)| = n·∏_{p|n}(1 + 1/p).
pub fn psi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p + 1))
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn big_valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Kronecker symbol (a|n) for arbitrary integers, with the usual
/// extensions (a|2) and (a|−1).
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let two = BigInt::from(2);
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut k = 1i32;
    // strip powers of two from n
    let mut v = 0u32;
    while n.is_even() {
        n /= &two;
        v += 1;
    }
    if v % 2 == 1 {
        let r: BigInt = a.mod_floor(&BigInt::from(8));
        let r = r.to_u32().unwrap();
        if r == 3 || r == 5 {
            k = -k;
        }
    }
    if n.sign() == Sign::Minus {
        n = -n;
        if a.sign() == Sign::Minus {
            k = -k;
        }
    }
    // now n odd positive: Jacobi symbol
    loop {
        if a.is_zero() {
            return if n.is_one() { k } else { 0 };
        }
        let mut v = 0u32;
        while a.is_even() {
            a /= &two;
            v += 1;
        }
        if v % 2 == 1 {
            let r = (&n % BigInt::from(8)).to_u32().unwrap();
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        // reciprocity
        let a4 = a.mod_floor(&BigInt::from(4)).to_u32().unwrap();
        let n4 = (&n % BigInt::from(4)).to_u32().unwrap();
        if a.sign() == Sign::Minus {
            // (a|n) = (−1|n)(|a| | n)
            if n4 == 3 {
                k = -k;
            }
            a = -a;
            let a4 = (&a % BigInt::from(4)).to_u32().unwrap();
            if a4 == 3 && n4 == 3 {
                k = -k;
            }
        } else if a4 == 3 && n4 == 3 {
            k = -k;
        }
        let r = &n % &a;
        n = a;
        a = r;
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Integer square root of a non-negative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative number");
    n.sqrt()
}

/// Integer k-th root rounded up.
pub fn iroot_ceil(n: &BigUint, k: u32) -> BigUint {
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        r
    } else {
        r + 1u32
    }
}

/// Natural logarithm of a positive big integer, accurate to f64 precision.
pub fn big_ln(n: &BigInt) -> f64 {
    assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jacobi_brute(a: i64, p: i64) -> i32 {
        // Euler criterion for odd primes
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(60).into_iter().filter(|&p| p > 2) {
            for a in -50i64..50 {
                assert_eq!(
                    kronecker(&BigInt::from(a), &BigInt::from(p)),
                    jacobi_brute(a, p as i64),
                    "({a}|{p})"
                );
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        // (a|2) = 0 for a even, 1 for a ≡ ±1 mod 8, −1 for a ≡ ±3 mod 8
        for a in -40i64..40 {
            let expect = match a.rem_euclid(8) {
                0 | 2 | 4 | 6 => 0,
                1 | 7 => 1,
                _ => -1,
            };
            assert_eq!(kronecker(&BigInt::from(a), &BigInt::from(2)), expect);
        }
        assert_eq!(kronecker(&BigInt::from(-3), &BigInt::from(-1)), -1);
        assert_eq!(kronecker(&BigInt::from(5), &BigInt::from(-1)), 1);
    }

    #[test]
    fn multiplicative_functions() {
        assert_eq!(psi(7), 8);
        assert_eq!(psi(12), 24);
        assert_eq!(psi(6), 12);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(omega(12), 2);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primality() {
        let sieve = primes_up_to(2000);
        for n in 0..2000u64 {
            assert_eq!(is_prime(n), sieve.binary_search(&n).is_ok());
        }
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn roots() {
        assert_eq!(iroot_ceil(&BigUint::from(27u32), 3), BigUint::from(3u32));
        assert_eq!(iroot_ceil(&BigUint::from(28u32), 3), BigUint::from(4u32));
        assert_eq!(isqrt(&BigInt::from(99)), BigInt::from(9));
    }
}
