//! Exact arithmetic in GF(p^m) with a canonical modulus and primitive element.
//!
//! Elements are encoded as integers in `[0, p^m)`: the base-p digits of the
//! encoding are the coefficients of the polynomial-basis representation,
//! least significant digit first. For p = 2 this is the usual bitmask
//! convention. The modulus is encoded the same way with its leading
//! coefficient included, so a monic degree-m polynomial lives in
//! `[p^m, 2*p^m)`.

use crate::error::{Error, Result};

/// Largest supported field order. Keeps both tables comfortably in memory.
pub const MAX_FIELD_ORDER: u64 = 1 << 26;

const NO_LOG: u32 = u32::MAX;

/// A concrete GF(p^m): prime, degree, irreducible modulus, fixed primitive
/// element and the discrete exp/log tables over it.
///
/// Immutable after construction; all operations are pure and the struct can
/// be shared read-only across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    order: u64,
    n: u64,
    modulus: u64,
    gamma: u64,
    exp_table: Vec<u32>,
    log_table: Vec<u32>,
}

impl FieldSpec {
    /// Builds GF(p^m). When `modulus` is omitted the monic irreducible
    /// degree-m polynomial with the smallest integer encoding is chosen;
    /// the primitive element is always the one with the smallest encoding.
    /// Equal arguments always produce byte-identical tables.
    pub fn build(p: u64, m: u32, modulus: Option<u64>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidDegree);
        }
        let order = checked_pow(p, m).ok_or(Error::FieldTooLarge { p, m })?;
        if order > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, m });
        }

        let modulus = match modulus {
            Some(enc) => {
                if enc < order || enc >= 2 * order {
                    return Err(Error::InvalidModulus(enc));
                }
                if !is_irreducible(enc, m, p) {
                    return Err(Error::ReducibleModulus(enc));
                }
                enc
            }
            None => (order..2 * order)
                .find(|&enc| is_irreducible(enc, m, p))
                .expect("a monic irreducible of every degree exists"),
        };

        let n = order - 1;
        let prime_factors = prime_factors(n);
        let gamma = (1..order)
            .find(|&g| {
                prime_factors
                    .iter()
                    .all(|&q| poly_pow(g, n / q, modulus, m, p) != 1)
            })
            .expect("every finite field has a primitive element");

        let mut exp_table = vec![0u32; n as usize];
        let mut log_table = vec![NO_LOG; order as usize];
        let mut t = 1u64;
        for i in 0..n {
            exp_table[i as usize] = t as u32;
            log_table[t as usize] = i as u32;
            t = poly_mul_mod(t, gamma, modulus, m, p);
        }
        debug_assert_eq!(t, 1, "gamma must have multiplicative order exactly n");

        Ok(FieldSpec {
            p,
            m,
            order,
            n,
            modulus,
            gamma,
            exp_table,
            log_table,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order p^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order of the multiplicative group, p^m - 1.
    pub fn mult_order(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The fixed primitive element.
    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    /// exp_table[i] = gamma^i, for i in [0, p^m - 1).
    pub fn exp_table(&self) -> &[u32] {
        &self.exp_table
    }

    fn check(&self, enc: u64) -> Result<u64> {
        if enc < self.order {
            Ok(enc)
        } else {
            Err(Error::OutOfRange {
                enc,
                order: self.order,
            })
        }
    }

    /// Digit-wise sum mod p; bitwise XOR in characteristic 2.
    pub fn add(&self, a: u64, b: u64) -> Result<u64> {
        self.check(a)?;
        self.check(b)?;
        Ok(digitwise(a, b, self.p, |x, y| (x + y) % self.p))
    }

    pub fn sub(&self, a: u64, b: u64) -> Result<u64> {
        self.check(a)?;
        self.check(b)?;
        Ok(digitwise(a, b, self.p, |x, y| (self.p + x - y) % self.p))
    }

    pub fn neg(&self, a: u64) -> Result<u64> {
        self.sub(0, a)
    }

    /// Polynomial product reduced mod the modulus, via the log tables.
    pub fn mul(&self, a: u64, b: u64) -> Result<u64> {
        self.check(a)?;
        self.check(b)?;
        if a == 0 || b == 0 {
            return Ok(0);
        }
        let la = self.log_table[a as usize] as u64;
        let lb = self.log_table[b as usize] as u64;
        Ok(self.exp_table[((la + lb) % self.n) as usize] as u64)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let la = self.log_table[a as usize] as u64;
        let n = self.n;
        Ok(self.exp_table[((n - la) % n) as usize] as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        self.check(a)?;
        self.check(b)?;
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        if a == 0 {
            return Ok(0);
        }
        let n = self.n;
        let la = self.log_table[a as usize] as u64;
        let lb = self.log_table[b as usize] as u64;
        Ok(self.exp_table[((la + n - lb) % n) as usize] as u64)
    }

    /// a^k with the usual conventions 0^0 = 1, 0^k = 0 for k > 0.
    pub fn pow(&self, a: u64, k: u64) -> Result<u64> {
        self.check(a)?;
        if a == 0 {
            return Ok(if k == 0 { 1 } else { 0 });
        }
        let n = self.n;
        let la = self.log_table[a as usize] as u64;
        Ok(self.exp_table[(la * (k % n) % n) as usize] as u64)
    }

    /// gamma^i for a residue i in [0, p^m - 1). Out-of-range exponents are
    /// rejected; reduction is the caller's responsibility.
    pub fn exp_gamma(&self, i: u64) -> Result<u64> {
        if i >= self.n {
            return Err(Error::ExponentOutOfRange { i, n: self.n });
        }
        Ok(self.exp_table[i as usize] as u64)
    }

    /// Discrete log base gamma of a nonzero element.
    pub fn log_gamma(&self, a: u64) -> Result<u64> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::LogOfZero);
        }
        Ok(self.log_table[a as usize] as u64)
    }

    /// a^(p^r), the r-fold iterate of x -> x^p, for r in [0, m).
    pub fn frobenius(&self, r: u32, a: u64) -> Result<u64> {
        if r >= self.m {
            return Err(Error::FrobeniusOutOfRange { r, m: self.m });
        }
        self.pow(a, checked_pow(self.p, r).expect("p^r <= p^m"))
    }

    /// Textual field descriptor `p m modulus gamma`, decimal.
    pub fn descriptor(&self) -> String {
        format!("{} {} {} {}", self.p, self.m, self.modulus, self.gamma)
    }

    /// Rebuilds a field from a `p m modulus gamma` descriptor, rejecting
    /// descriptors whose gamma differs from the canonical choice.
    pub fn from_descriptor(s: &str) -> Result<FieldSpec> {
        let nums: Vec<u64> = s
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| Error::InvalidModulus(0)))
            .collect::<Result<_>>()?;
        if nums.len() != 4 {
            return Err(Error::InvalidModulus(0));
        }
        let field = FieldSpec::build(nums[0], nums[1] as u32, Some(nums[2]))?;
        if field.gamma() != nums[3] {
            return Err(Error::OutOfRange {
                enc: nums[3],
                order: field.order(),
            });
        }
        Ok(field)
    }
}

fn digitwise(a: u64, b: u64, p: u64, f: impl Fn(u64, u64) -> u64) -> u64 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0;
    let mut scale = 1;
    let (mut a, mut b) = (a, b);
    while a != 0 || b != 0 {
        out += f(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// Trial-division primality; inputs here are tiny.
pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn poly_degree(enc: u64, p: u64) -> i64 {
    if enc == 0 {
        return -1;
    }
    let mut deg = -1i64;
    let mut e = enc;
    while e != 0 {
        deg += 1;
        e /= p;
    }
    deg
}

fn digit(enc: u64, i: i64, p: u64) -> u64 {
    (enc / checked_pow(p, i as u32).unwrap()) % p
}

/// Remainder of `a` modulo the monic polynomial `b`, both encoded.
fn poly_rem(a: u64, b: u64, p: u64) -> u64 {
    let db = poly_degree(b, p);
    debug_assert!(db >= 0 && digit(b, db, p) == 1);
    let mut digits: Vec<u64> = {
        let mut v = Vec::new();
        let mut e = a;
        while e != 0 {
            v.push(e % p);
            e /= p;
        }
        v
    };
    let mut da = digits.len() as i64 - 1;
    while da >= db {
        let lead = digits[da as usize];
        if lead != 0 {
            for j in 0..=db {
                let idx = (da - db + j) as usize;
                let sub = lead * digit(b, j, p) % p;
                digits[idx] = (digits[idx] + p - sub) % p;
            }
        }
        da -= 1;
    }
    let mut out = 0;
    for (i, d) in digits.iter().enumerate() {
        out += d * checked_pow(p, i as u32).unwrap();
    }
    out
}

/// Product of two field elements reduced mod the modulus, digit arithmetic
/// only. Used to bootstrap the tables; the public `mul` goes through them.
pub(crate) fn poly_mul_mod(a: u64, b: u64, modulus: u64, m: u32, p: u64) -> u64 {
    if p == 2 {
        // Carryless shift-and-xor with on-the-fly reduction.
        let mut acc = 0u64;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> m & 1 == 1 {
                a ^= modulus;
            }
        }
        return acc;
    }
    let mut prod = vec![0u64; 2 * m as usize];
    let mut ai = a;
    let mut i = 0usize;
    while ai != 0 {
        let da = ai % p;
        if da != 0 {
            let mut bj = b;
            let mut j = 0usize;
            while bj != 0 {
                let db = bj % p;
                prod[i + j] = (prod[i + j] + da * db) % p;
                bj /= p;
                j += 1;
            }
        }
        ai /= p;
        i += 1;
    }
    // Reduce the high digits against the monic modulus.
    for k in (m as usize..2 * m as usize).rev() {
        let lead = prod[k];
        if lead != 0 {
            prod[k] = 0;
            for j in 0..m as i64 {
                let sub = lead * digit(modulus, j, p) % p;
                let idx = k - m as usize + j as usize;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
    }
    let mut out = 0;
    for (i, d) in prod[..m as usize].iter().enumerate() {
        out += d * checked_pow(p, i as u32).unwrap();
    }
    out
}

fn poly_pow(base: u64, mut exp: u64, modulus: u64, m: u32, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = base;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(acc, b, modulus, m, p);
        }
        b = poly_mul_mod(b, b, modulus, m, p);
        exp >>= 1;
    }
    acc
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most m/2.
fn is_irreducible(enc: u64, m: u32, p: u64) -> bool {
    debug_assert_eq!(poly_degree(enc, p), m as i64);
    for t in 1..=m / 2 {
        let lo = checked_pow(p, t).unwrap();
        for g in lo..2 * lo {
            if poly_rem(enc, g, p) == 0 {
                return false;
            }
        }
    }
    true
}
