//! Extended Euclid, modular inverses and simultaneous congruences.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Returns `(g, u, v)` with `g = gcd(a, b) > 0` and `a*u + b*v = g`.
///
/// At least one argument must be nonzero.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    assert!(
        !(a.is_zero() && b.is_zero()),
        "gcd of (0, 0) is undefined"
    );
    // Iterative Euclid carrying both Bezout rows.
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut u0, mut u1) = (BigInt::one(), BigInt::zero());
    let (mut v0, mut v1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = core::mem::replace(&mut r1, r);
        let u = &u0 - &q * &u1;
        u0 = core::mem::replace(&mut u1, u);
        let v = &v0 - &q * &v1;
        v0 = core::mem::replace(&mut v1, v);
    }
    if r0.is_negative() {
        (-r0, -u0, -v0)
    } else {
        (r0, u0, v0)
    }
}

/// Inverse of `a` modulo `m`, i.e. the unique `x` in `[0, m)` with
/// `a*x = 1 (mod m)`. Fails with [`Error::NotInvertible`] when
/// `gcd(a, m) != 1` or `m < 2`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    if *m < BigUint::from(2u32) {
        return Err(Error::NotInvertible);
    }
    let (g, u, _) = extended_gcd(&BigInt::from(a.clone()), &BigInt::from(m.clone()));
    if !g.is_one() {
        return Err(Error::NotInvertible);
    }
    let m_int = BigInt::from(m.clone());
    let inv = u.mod_floor(&m_int);
    Ok(inv.to_biguint().expect("mod_floor by positive is non-negative"))
}

/// A system of simultaneous congruences `x = r_k (mod p_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem {
    pairs: Vec<(BigUint, BigUint)>,
}

impl CongruenceSystem {
    /// Builds a system from `(residue, modulus)` pairs. Each modulus must be
    /// at least 2 and each residue reduced, i.e. `r_k < p_k`. Coprimality of
    /// the moduli is checked by [`crt_solve`], not here.
    pub fn new(pairs: Vec<(BigUint, BigUint)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Invalid("empty congruence system"));
        }
        for (r, p) in &pairs {
            if *p < BigUint::from(2u32) {
                return Err(Error::Invalid("congruence modulus below 2"));
            }
            if r >= p {
                return Err(Error::Invalid("residue not reduced by its modulus"));
            }
        }
        Ok(CongruenceSystem { pairs })
    }

    pub fn pairs(&self) -> &[(BigUint, BigUint)] {
        &self.pairs
    }

    /// Product of all moduli.
    pub fn modulus_product(&self) -> BigUint {
        self.pairs.iter().fold(BigUint::one(), |acc, (_, p)| acc * p)
    }
}

/// Solves the system, returning the unique `x` in `[0, prod p_k)`.
///
/// Fails with [`Error::NonCoprimeModuli`] when two moduli share a factor.
pub fn crt_solve(sys: &CongruenceSystem) -> Result<BigUint> {
    let pairs = sys.pairs();
    for (i, (_, pi)) in pairs.iter().enumerate() {
        for (_, pj) in &pairs[i + 1..] {
            if !pi.gcd(pj).is_one() {
                return Err(Error::NonCoprimeModuli);
            }
        }
    }
    let product = sys.modulus_product();
    let mut acc = BigUint::zero();
    for (r, p) in pairs {
        let quotient = &product / p;
        // quotient mod p is invertible because the moduli are pairwise coprime.
        let inv = mod_inverse(&(&quotient % p), p)?;
        acc += r * quotient * inv;
    }
    Ok(acc % product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn uint(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn gcd_with_zero_argument() {
        let (g, u, v) = extended_gcd(&int(0), &int(7));
        assert_eq!(g, int(7));
        assert_eq!(&int(0) * &u + &int(7) * &v, g);
    }

    #[test]
    fn gcd_classic_pair() {
        let (g, u, v) = extended_gcd(&int(240), &int(46));
        assert_eq!(g, int(2));
        assert_eq!(&int(240) * &u + &int(46) * &v, g);
    }

    #[test]
    fn gcd_of_coprime_primes_is_one() {
        let (g, u, v) = extended_gcd(&int(29), &int(31));
        assert_eq!(g, int(1));
        assert_eq!(&int(29) * &u + &int(31) * &v, g);
    }

    #[test]
    fn gcd_handles_negative_inputs() {
        for (a, b) in [(-240i64, 46i64), (240, -46), (-240, -46), (-7, 0)] {
            let (g, u, v) = extended_gcd(&int(a), &int(b));
            assert!(g.is_positive());
            assert_eq!(&int(a) * &u + &int(b) * &v, g);
        }
    }

    #[test]
    #[should_panic]
    fn gcd_rejects_double_zero() {
        extended_gcd(&int(0), &int(0));
    }

    #[test]
    fn inverse_of_one_is_one() {
        assert_eq!(mod_inverse(&uint(1), &uint(97)).unwrap(), uint(1));
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        // Oracle: scan the full residue ring.
        let a = uint(31);
        let m = uint(29);
        let got = mod_inverse(&a, &m).unwrap();
        let mut expected = None;
        for x in 0..29u64 {
            if (31 * x) % 29 == 1 {
                expected = Some(uint(x));
                break;
            }
        }
        assert_eq!(got, expected.unwrap());
        assert_eq!(got, uint(15));
    }

    #[test]
    fn inverse_rejects_shared_factor() {
        assert_eq!(mod_inverse(&uint(10), &uint(15)), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_rejects_tiny_modulus() {
        assert_eq!(mod_inverse(&uint(3), &uint(1)), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_accepts_unreduced_element() {
        let got = mod_inverse(&uint(100), &uint(7)).unwrap();
        assert_eq!((uint(100) * got) % uint(7), uint(1));
    }

    #[test]
    fn crt_two_congruences() {
        let sys =
            CongruenceSystem::new(vec![(uint(5), uint(29)), (uint(18), uint(31))]).unwrap();
        assert_eq!(crt_solve(&sys).unwrap(), uint(266));
    }

    #[test]
    fn crt_single_congruence_is_identity() {
        let sys = CongruenceSystem::new(vec![(uint(4), uint(11))]).unwrap();
        assert_eq!(crt_solve(&sys).unwrap(), uint(4));
    }

    #[test]
    fn crt_four_congruences() {
        let sys = CongruenceSystem::new(vec![
            (uint(4), uint(11)),
            (uint(0), uint(13)),
            (uint(9), uint(17)),
            (uint(3), uint(23)),
        ])
        .unwrap();
        assert_eq!(crt_solve(&sys).unwrap(), uint(26));
    }

    #[test]
    fn crt_rejects_shared_factor() {
        let sys =
            CongruenceSystem::new(vec![(uint(1), uint(6)), (uint(2), uint(9))]).unwrap();
        assert_eq!(crt_solve(&sys), Err(Error::NonCoprimeModuli));
    }

    #[test]
    fn system_rejects_empty_and_unreduced() {
        assert!(CongruenceSystem::new(vec![]).is_err());
        assert!(CongruenceSystem::new(vec![(uint(5), uint(5))]).is_err());
        assert!(CongruenceSystem::new(vec![(uint(0), uint(1))]).is_err());
    }

    #[test]
    fn crt_agrees_with_brute_force_scan() {
        // Oracle: scan [0, P) for the unique solution.
        let cases = vec![
            vec![(3u64, 5u64), (4, 7), (2, 9)],
            vec![(0, 2), (2, 3), (3, 25)],
            vec![(1, 4), (2, 9), (4, 5), (6, 7)],
        ];
        for case in cases {
            let pairs: Vec<_> = case.iter().map(|&(r, p)| (uint(r), uint(p))).collect();
            let sys = CongruenceSystem::new(pairs).unwrap();
            let got = crt_solve(&sys).unwrap();
            let product: u64 = case.iter().map(|&(_, p)| p).product();
            let mut found = None;
            for x in 0..product {
                if case.iter().all(|&(r, p)| x % p == r) {
                    found = Some(x);
                    break;
                }
            }
            assert_eq!(got, uint(found.expect("solution exists")));
        }
    }
}
