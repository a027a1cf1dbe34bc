//! Finite divisibility tables for subgroups of Q containing 1.
//!
//! A table assigns finitely many primes to P^inf (divide 1 to all orders) or
//! P^fin with an exponent (divide 1 exactly to that order); every other
//! prime defaults to P^0.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QDivTable {
    pub inf: BTreeSet<u64>,
    pub fin: BTreeMap<u64, u32>,
}

impl QDivTable {
    pub fn new(inf: BTreeSet<u64>, fin: BTreeMap<u64, u32>) -> Result<Self> {
        for p in inf.iter().chain(fin.keys()) {
            if !is_prime(*p) {
                return Err(Error::Input(format!("{p} is not prime")));
            }
        }
        for (p, k) in &fin {
            if inf.contains(p) {
                return Err(Error::Input(format!("prime {p} in both P^inf and P^fin")));
            }
            if *k == 0 {
                return Err(Error::Input("P^fin exponent must be >= 1".into()));
            }
        }
        Ok(QDivTable { inf, fin })
    }

    /// Does the table admit denominator `d` (a positive integer)?
    pub fn allows_denominator(&self, d: &BigInt) -> bool {
        let mut d = d.clone();
        let mut p = BigInt::from(2);
        while &p * &p <= d {
            let mut e = 0u32;
            while (&d % &p).is_zero() {
                d /= &p;
                e += 1;
            }
            if e > 0 && !self.allows_prime_power(&p, e) {
                return false;
            }
            p += 1;
        }
        if d > BigInt::one() {
            // d is prime
            if !self.allows_prime_power(&d, 1) {
                return false;
            }
        }
        true
    }

    fn allows_prime_power(&self, p: &BigInt, e: u32) -> bool {
        let p: u64 = match p.try_into() {
            Ok(v) => v,
            Err(_) => return false,
        };
        self.inf.contains(&p) || self.fin.get(&p).is_some_and(|&k| k >= e)
    }

    pub fn member(&self, q: &BigRational) -> bool {
        self.allows_denominator(q.denom())
    }

    /// The exact divisibility order of prime p at the element 1: None for
    /// P^inf, Some(k) for P^fin (k >= 1), Some(0) for P^0.
    pub fn order_of(&self, p: u64) -> Option<u32> {
        if self.inf.contains(&p) {
            None
        } else {
            Some(self.fin.get(&p).copied().unwrap_or(0))
        }
    }
}

impl fmt::Display for QDivTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inf=")?;
        let infs: Vec<String> = self.inf.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", if infs.is_empty() { "-".into() } else { infs.join(",") })?;
        write!(f, " fin=")?;
        let fins: Vec<String> = self.fin.iter().map(|(p, k)| format!("{p}:{k}")).collect();
        write!(f, "{}", if fins.is_empty() { "-".into() } else { fins.join(",") })?;
        write!(f, " default=P0")
    }
}

impl QDivTable {
    pub fn parse(s: &str) -> Result<QDivTable> {
        let mut inf = BTreeSet::new();
        let mut fin = BTreeMap::new();
        for part in s.split_whitespace() {
            if let Some(v) = part.strip_prefix("inf=") {
                if v != "-" {
                    for tok in v.split(',') {
                        inf.insert(
                            tok.parse()
                                .map_err(|_| Error::Parse(format!("bad prime '{tok}'")))?,
                        );
                    }
                }
            } else if let Some(v) = part.strip_prefix("fin=") {
                if v != "-" {
                    for tok in v.split(',') {
                        let (p, k) = tok
                            .split_once(':')
                            .ok_or_else(|| Error::Parse(format!("bad fin entry '{tok}'")))?;
                        fin.insert(
                            p.parse()
                                .map_err(|_| Error::Parse(format!("bad prime '{p}'")))?,
                            k.parse()
                                .map_err(|_| Error::Parse(format!("bad exponent '{k}'")))?,
                        );
                    }
                }
            } else if part == "default=P0" {
                // fixed default
            } else {
                return Err(Error::Parse(format!("unexpected token '{part}'")));
            }
        }
        QDivTable::new(inf, fin)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The i-th prime, indexed p_0 = 2, p_1 = 3, ...
pub fn nth_prime(i: u64) -> u64 {
    let mut count = 0;
    let mut p = 2;
    loop {
        if is_prime(p) {
            if count == i {
                return p;
            }
            count += 1;
        }
        p += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn table(inf: &[u64], fin: &[(u64, u32)]) -> QDivTable {
        QDivTable::new(
            inf.iter().copied().collect(),
            fin.iter().copied().collect(),
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn member_inf_prime() {
        let t = table(&[2], &[]);
        assert!(t.member(&q(1, 8)));
        assert!(!t.member(&q(1, 3)));
    }

    #[test]
    fn member_fin_prime() {
        let t = table(&[], &[(3, 2)]);
        assert!(t.member(&q(1, 9)));
        assert!(!t.member(&q(1, 27)));
    }

    #[test]
    fn display_parse_roundtrip() {
        let t = table(&[2, 5], &[(3, 2)]);
        let s = t.to_string();
        assert_eq!(s, "inf=2,5 fin=3:2 default=P0");
        assert_eq!(QDivTable::parse(&s).unwrap(), t);
    }

    #[test]
    fn primes() {
        assert_eq!(nth_prime(0), 2);
        assert_eq!(nth_prime(1), 3);
        assert_eq!(nth_prime(5), 13);
    }
}
