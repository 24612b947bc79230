//! The second multiplication on GF(p^m)*.
//!
//! Transporting the ring structure of Z_{p^m-1} through the exponential
//! i -> gamma^i equips the nonzero field elements with a star product
//! gamma^i x gamma^j = gamma^{ij} that distributes over the field
//! multiplication. The result is a field-ring, and a double-field exactly
//! when p^m - 1 is prime.

use crate::error::{Error, Result};
use crate::field::{is_prime, prime_factors, FieldSpec};

/// Classification of the star structure on GF(p^m)*.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingClass {
    /// The star product only forms a commutative unitary ring.
    FieldRing,
    /// p^m - 1 is prime, so the star ring is a field.
    DoubleField,
}

/// GF(p^m)* equipped with the star multiplication.
#[derive(Debug, Clone)]
pub struct FieldRing<'f> {
    field: &'f FieldSpec,
    n: u64,
    double_field: bool,
}

impl<'f> FieldRing<'f> {
    pub fn new(field: &'f FieldSpec) -> FieldRing<'f> {
        let n = field.mult_order();
        FieldRing {
            field,
            n,
            double_field: is_prime(n),
        }
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    /// Modulus of the exponent ring, p^m - 1.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Star multiplicative identity, the fixed primitive element.
    pub fn star_identity(&self) -> u64 {
        self.field.gamma()
    }

    pub fn is_double_field(&self) -> bool {
        self.double_field
    }

    pub fn classify(&self) -> RingClass {
        if self.double_field {
            RingClass::DoubleField
        } else {
            RingClass::FieldRing
        }
    }

    /// gamma^i x gamma^j = gamma^{ij mod n}. Zero is outside the carrier.
    pub fn star_mul(&self, a: u64, b: u64) -> Result<u64> {
        if a == 0 || b == 0 {
            return Err(Error::StarZeroOperand);
        }
        let i = self.field.log_gamma(a)?;
        let j = self.field.log_gamma(b)?;
        self.field.exp_gamma(i * j % self.n)
    }

    /// Star inverse of a unit; star zero divisors are rejected with a
    /// witness exponent j such that i*j = 0 mod n.
    pub fn star_inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::StarZeroOperand);
        }
        let i = self.field.log_gamma(a)?;
        let g = gcd(i, self.n);
        if g != 1 {
            return Err(Error::StarZeroDivisor {
                exponent: i,
                witness: if i == 0 { 1 } else { self.n / g },
                n: self.n,
            });
        }
        self.field.exp_gamma(mod_inverse(i, self.n))
    }

    /// The star units {gamma^i : gcd(i, n) = 1}, in ascending exponent order.
    /// When n is prime this is all of GF(p^m) minus {0, 1}.
    pub fn units(&self) -> Vec<u64> {
        (0..self.n)
            .filter(|&i| gcd(i, self.n) == 1)
            .map(|i| self.field.exp_gamma(i).unwrap())
            .collect()
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of a mod n for gcd(a, n) = 1, by the extended Euclidean algorithm.
pub(crate) fn mod_inverse(a: u64, n: u64) -> u64 {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    (t0.rem_euclid(n as i128)) as u64
}

/// The two-factor split of k^m - 1 obtained from a composite exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MersenneFactorization {
    /// k^r - 1 for r the smallest prime factor of m.
    pub factor: u128,
    /// The geometric cofactor; factor * cofactor = k^m - 1.
    pub cofactor: u128,
}

/// Splits k^m - 1 for composite m as (k^r - 1) * sum_{i=1..s} k^{r(s-i)}
/// with r the smallest prime factor of m and s = m / r.
pub fn mersenne_factor(k: u64, m: u32) -> Result<MersenneFactorization> {
    if m <= 1 || is_prime(m as u64) {
        return Err(Error::CompositeExponentRequired(m));
    }
    if k <= 1 {
        return Err(Error::BaseTooSmall(k));
    }
    let r = *prime_factors(m as u64).first().unwrap() as u32;
    let s = m / r;
    let base = checked_pow_u128(k as u128, r).ok_or(Error::Overflow)?;
    let factor = base - 1;
    let mut cofactor: u128 = 0;
    for i in 1..=s {
        let term = checked_pow_u128(base, s - i).ok_or(Error::Overflow)?;
        cofactor = cofactor.checked_add(term).ok_or(Error::Overflow)?;
    }
    debug_assert_eq!(
        factor.checked_mul(cofactor),
        checked_pow_u128(k as u128, m).map(|v| v - 1)
    );
    Ok(MersenneFactorization { factor, cofactor })
}

fn checked_pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// A subgroup of the unit group U(Z_n), kept as a sorted residue list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnitSubgroup {
    n: u64,
    members: Vec<u64>,
    difference_unit: bool,
}

impl UnitSubgroup {
    /// Validates that `members` is a subgroup of U(Z_n): every member is a
    /// unit, the set contains 1 and is closed under products and inverses.
    pub fn new(n: u64, members: &[u64]) -> Result<UnitSubgroup> {
        if n < 2 {
            return Err(Error::ModulusOutOfRange(n));
        }
        let mut sorted: Vec<u64> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let reject = || Error::NotAUnitSubgroup {
            n,
            residues: members.to_vec(),
        };
        if sorted.is_empty() || !sorted.contains(&1) {
            return Err(reject());
        }
        for &i in &sorted {
            if i == 0 || i >= n || gcd(i, n) != 1 {
                return Err(reject());
            }
        }
        for &i in &sorted {
            for &j in &sorted {
                if sorted.binary_search(&(i * j % n)).is_err() {
                    return Err(reject());
                }
            }
        }
        // Closure under products on a finite set implies inverses exist.
        let difference_unit = sorted
            .iter()
            .filter(|&&i| i != 1)
            .all(|&i| gcd(i - 1, n) == 1);
        Ok(UnitSubgroup {
            n,
            members: sorted,
            difference_unit,
        })
    }

    /// Wraps a residue set already known to be multiplicatively closed.
    fn from_closed_members(n: u64, mut members: Vec<u64>) -> UnitSubgroup {
        members.sort_unstable();
        members.dedup();
        let difference_unit = members
            .iter()
            .filter(|&&i| i != 1)
            .all(|&i| gcd(i - 1, n) == 1);
        UnitSubgroup {
            n,
            members,
            difference_unit,
        }
    }

    /// The cyclic subgroup generated by a unit g.
    pub fn cyclic(n: u64, g: u64) -> Result<UnitSubgroup> {
        if n < 2 {
            return Err(Error::ModulusOutOfRange(n));
        }
        if g == 0 || g >= n || gcd(g, n) != 1 {
            return Err(Error::NotAUnitSubgroup {
                n,
                residues: vec![g],
            });
        }
        let mut members = vec![1u64];
        let mut t = g;
        while t != 1 {
            members.push(t);
            t = t * g % n;
        }
        Ok(UnitSubgroup::from_closed_members(n, members))
    }

    /// {1, n-1}, the subgroup generated by negation. Equals {1} when n = 2.
    pub fn negation(n: u64) -> Result<UnitSubgroup> {
        if n < 2 {
            return Err(Error::ModulusOutOfRange(n));
        }
        UnitSubgroup::cyclic(n, n - 1)
    }

    /// The full unit group U(Z_n).
    pub fn full(n: u64) -> Result<UnitSubgroup> {
        if n < 2 {
            return Err(Error::ModulusOutOfRange(n));
        }
        let members: Vec<u64> = (1..n).filter(|&i| gcd(i, n) == 1).collect();
        Ok(UnitSubgroup::from_closed_members(n, members))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when every member i != 1 has i - 1 invertible mod n.
    pub fn is_difference_unit(&self) -> bool {
        self.difference_unit
    }

    /// True when every member of `other` already lies in this subgroup.
    fn contains_subgroup(&self, other: &UnitSubgroup) -> bool {
        other
            .members
            .iter()
            .all(|g| self.members.binary_search(g).is_ok())
    }

    /// Join with another subgroup mod the same n. In an abelian group the
    /// product set of two subgroups is already their join.
    fn join(&self, other: &UnitSubgroup) -> UnitSubgroup {
        let n = self.n;
        let mut members: Vec<u64> = Vec::with_capacity(self.members.len());
        for &h in &self.members {
            for &k in &other.members {
                members.push(h * k % n);
            }
        }
        UnitSubgroup::from_closed_members(n, members)
    }
}

/// Every subgroup of U(Z_n), by closing the cyclic subgroups under joins.
///
/// Any subgroup of an abelian group is a join of cyclic subgroups, so the
/// fixpoint of joining known subgroups with the cyclic generators reaches
/// all of them. Results are sorted by size, then lexicographically.
pub fn all_unit_subgroups(n: u64) -> Result<Vec<UnitSubgroup>> {
    if !(2..=1 << 16).contains(&n) {
        return Err(Error::ModulusOutOfRange(n));
    }
    let mut seen: std::collections::BTreeSet<Vec<u64>> = std::collections::BTreeSet::new();
    let mut cyclic: Vec<UnitSubgroup> = Vec::new();
    for g in 1..n {
        if gcd(g, n) == 1 {
            let c = UnitSubgroup::cyclic(n, g).unwrap();
            if seen.insert(c.members.clone()) {
                cyclic.push(c);
            }
        }
    }
    let mut worklist: Vec<UnitSubgroup> = cyclic.clone();
    let mut out: Vec<UnitSubgroup> = Vec::new();
    while let Some(h) = worklist.pop() {
        for c in &cyclic {
            if h.contains_subgroup(c) {
                continue;
            }
            let joined = h.join(c);
            if seen.insert(joined.members.clone()) {
                worklist.push(joined.clone());
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| {
        (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members))
    });
    Ok(out)
}

/// Subgroups of U(Z_n) in which every member other than 1 stays a unit
/// after subtracting 1. The trivial subgroup {1} is reported only when it
/// is all of U(Z_n); otherwise it would qualify vacuously for every n.
/// Non-empty exactly when n = 2 or n is odd.
pub fn find_difference_unit_subgroups(n: u64, max_count: usize) -> Result<Vec<UnitSubgroup>> {
    let totient = (1..n.max(2)).filter(|&i| gcd(i, n) == 1).count();
    let mut out: Vec<UnitSubgroup> = all_unit_subgroups(n)?
        .into_iter()
        .filter(|g| g.is_difference_unit())
        .filter(|g| g.len() > 1 || totient == 1)
        .collect();
    out.truncate(max_count);
    Ok(out)
}
