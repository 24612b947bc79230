//! Builders for the function families the analyzer studies: Frobenius
//! powers, power maps, additive epimorphisms between vector spaces over
//! finite fields, and the combined Frobenius/star-subgroup setting.

use crate::actions::{ActionSpec, FiniteGroup};
use crate::analyzer::{is_perfect_nonlinear, PnVerdict, SBox};
use crate::double_field::{gcd, FieldRing, UnitSubgroup};
use crate::error::{Error, Result};
use crate::field::{checked_pow, FieldSpec};

/// Largest supported vector-space carrier, matching the field bound.
const MAX_CARRIER: u64 = 1 << 26;

/// Deterministic 64-bit multiply-xor-shift generator used for epimorphism
/// sampling. The constants are part of the file-format contract so seeded
/// test vectors stay portable.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from [0, bound) by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// V(p,m,d): the d-dimensional vector space over GF(p^m). The carrier is
/// the set of d-tuples of element encodings, indexed lexicographically with
/// the first coordinate most significant.
#[derive(Debug, Clone)]
pub struct VectorSpaceSpec {
    field: FieldSpec,
    d: u32,
    carrier_len: u64,
}

impl VectorSpaceSpec {
    pub fn new(p: u64, m: u32, d: u32) -> Result<VectorSpaceSpec> {
        VectorSpaceSpec::try_from_field(FieldSpec::build(p, m, None)?, d)
    }

    pub fn from_field(field: FieldSpec, d: u32) -> VectorSpaceSpec {
        VectorSpaceSpec::try_from_field(field, d).expect("carrier bound exceeded")
    }

    pub fn try_from_field(field: FieldSpec, d: u32) -> Result<VectorSpaceSpec> {
        if d == 0 {
            return Err(Error::InvalidDegree);
        }
        let mut carrier_len: u64 = 1;
        for _ in 0..d {
            carrier_len = carrier_len
                .checked_mul(field.order())
                .filter(|&v| v <= MAX_CARRIER)
                .ok_or(Error::CarrierTooLarge(usize::MAX))?;
        }
        Ok(VectorSpaceSpec {
            field,
            d,
            carrier_len,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn carrier_len(&self) -> usize {
        self.carrier_len as usize
    }

    /// Number of GF(p) digits in a coordinate expansion, m*d.
    pub fn digit_len(&self) -> usize {
        (self.field.m() * self.d) as usize
    }

    /// The d coordinates of a carrier index, first coordinate first.
    pub fn coords(&self, idx: usize) -> Vec<u64> {
        let s = self.field.order();
        let mut rem = idx as u64;
        let mut out = vec![0u64; self.d as usize];
        for j in (0..self.d as usize).rev() {
            out[j] = rem % s;
            rem /= s;
        }
        out
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.d as usize);
        let s = self.field.order();
        let mut idx = 0u64;
        for &c in coords {
            debug_assert!(c < s);
            idx = idx * s + c;
        }
        idx as usize
    }

    /// Componentwise vector sum.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let sum: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| self.field.add(x, y).unwrap())
            .collect();
        self.index_of(&sum)
    }

    /// alpha . (v_1, ..., v_d) = (alpha v_1, ..., alpha v_d).
    pub fn scalar_mul(&self, alpha: u64, v: usize) -> usize {
        let coords: Vec<u64> = self
            .coords(v)
            .iter()
            .map(|&x| self.field.mul(alpha, x).unwrap())
            .collect();
        self.index_of(&coords)
    }

    /// Coordinate expansion: each coordinate as m base-p digits, least
    /// significant digit first, coordinates concatenated in order.
    pub fn digits(&self, idx: usize) -> Vec<u64> {
        let p = self.field.p();
        let m = self.field.m() as usize;
        let mut out = Vec::with_capacity(self.digit_len());
        for c in self.coords(idx) {
            let mut e = c;
            for _ in 0..m {
                out.push(e % p);
                e /= p;
            }
        }
        out
    }

    pub fn index_from_digits(&self, digits: &[u64]) -> usize {
        debug_assert_eq!(digits.len(), self.digit_len());
        let p = self.field.p();
        let m = self.field.m() as usize;
        let coords: Vec<u64> = digits
            .chunks(m)
            .map(|chunk| {
                chunk
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &d| acc * p + d)
            })
            .collect();
        self.index_of(&coords)
    }
}

/// A group homomorphism (V(p,m,d), +) -> (V(p,n,e), +), stored as an
/// (n*e) x (m*d) matrix over GF(p) acting on coordinate expansions.
#[derive(Debug, Clone)]
pub struct AdditiveMap {
    source: VectorSpaceSpec,
    target: VectorSpaceSpec,
    matrix: Vec<u64>,
    rank: u32,
}

impl AdditiveMap {
    /// Wraps an explicit matrix, validating the shape and digit range and
    /// computing the rank.
    pub fn from_matrix(
        source: VectorSpaceSpec,
        target: VectorSpaceSpec,
        matrix: Vec<u64>,
    ) -> Result<AdditiveMap> {
        let p = source.field().p();
        if p != target.field().p() {
            return Err(Error::CharacteristicMismatch {
                src: p,
                tgt: target.field().p(),
            });
        }
        let rows = target.digit_len();
        let cols = source.digit_len();
        if matrix.len() != rows * cols {
            return Err(Error::MatrixShape {
                rows: matrix.len() / cols.max(1),
                cols,
            });
        }
        if let Some(&bad) = matrix.iter().find(|&&v| v >= p) {
            return Err(Error::MatrixDigitOutOfRange(bad));
        }
        let rank = matrix_rank(&matrix, rows, cols, p);
        Ok(AdditiveMap {
            source,
            target,
            matrix,
            rank,
        })
    }

    pub fn source(&self) -> &VectorSpaceSpec {
        &self.source
    }

    pub fn target(&self) -> &VectorSpaceSpec {
        &self.target
    }

    pub fn matrix(&self) -> &[u64] {
        &self.matrix
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_surjective(&self) -> bool {
        self.rank as usize == self.target.digit_len()
    }

    /// |ker| = p^(md - rank) by rank-nullity.
    pub fn kernel_size(&self) -> u64 {
        checked_pow(
            self.source.field().p(),
            self.source.digit_len() as u32 - self.rank,
        )
        .expect("kernel within carrier bound")
    }

    /// Image of a source carrier index.
    pub fn apply(&self, v: usize) -> usize {
        let p = self.source.field().p();
        let x = self.source.digits(v);
        let cols = x.len();
        let y: Vec<u64> = (0..self.target.digit_len())
            .map(|r| {
                self.matrix[r * cols..(r + 1) * cols]
                    .iter()
                    .zip(&x)
                    .map(|(&a, &b)| a * b % p)
                    .sum::<u64>()
                    % p
            })
            .collect();
        self.target.index_from_digits(&y)
    }

    /// Materializes the map as a lookup table over carrier indices, with a
    /// seeded 100-pair additivity spot check.
    pub fn to_sbox(&self) -> SBox {
        let table: Vec<u32> = (0..self.source.carrier_len())
            .map(|v| self.apply(v) as u32)
            .collect();
        let mut rng = SplitMix64::new(0x5b0c_ca11);
        let len = self.source.carrier_len() as u64;
        for _ in 0..100 {
            let u = rng.below(len) as usize;
            let v = rng.below(len) as usize;
            let lhs = table[self.source.add(u, v)] as usize;
            let rhs = self.target.add(table[u] as usize, table[v] as usize);
            assert_eq!(lhs, rhs, "additivity spot check failed at ({u}, {v})");
        }
        SBox::new(table, self.target.carrier_len() as u32).expect("entries lie in the target")
    }
}

/// Row-reduction rank over GF(p).
fn matrix_rank(matrix: &[u64], rows: usize, cols: usize, p: u64) -> u32 {
    let mut m: Vec<u64> = matrix.to_vec();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
        let Some(pivot) = pivot else { continue };
        for c in 0..cols {
            m.swap(pivot * cols + c, rank * cols + c);
        }
        let inv = crate::double_field::mod_inverse(m[rank * cols + col], p);
        for c in 0..cols {
            m[rank * cols + c] = m[rank * cols + c] * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r * cols + col] != 0 {
                let factor = m[r * cols + col];
                for c in 0..cols {
                    let sub = factor * m[rank * cols + c] % p;
                    m[r * cols + c] = (m[r * cols + c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank as u32
}

/// Uniformly samples full-rank (n*e) x (m*d) matrices over GF(p) by
/// rejection from the seeded generator. The kernel of the resulting
/// epimorphism has exactly p^(md - ne) elements. Deterministic given seed.
pub fn random_additive_epimorphism(
    source: &VectorSpaceSpec,
    target: &VectorSpaceSpec,
    seed: u64,
) -> Result<AdditiveMap> {
    let p = source.field().p();
    if p != target.field().p() {
        return Err(Error::CharacteristicMismatch {
            src: p,
            tgt: target.field().p(),
        });
    }
    let rows = target.digit_len();
    let cols = source.digit_len();
    if cols < rows {
        return Err(Error::DimensionTooSmall {
            src: cols as u32,
            tgt: rows as u32,
        });
    }
    let mut rng = SplitMix64::new(seed);
    loop {
        let matrix: Vec<u64> = (0..rows * cols).map(|_| rng.below(p)).collect();
        if matrix_rank(&matrix, rows, cols, p) as usize == rows {
            return AdditiveMap::from_matrix(source.clone(), target.clone(), matrix);
        }
    }
}

/// The lookup table of x -> x^(p^r); a permutation fixing 0 and 1.
pub fn frobenius_sbox(f: &FieldSpec, r: u32) -> Result<SBox> {
    let table: Vec<u32> = (0..f.order())
        .map(|x| f.frobenius(r, x).map(|v| v as u32))
        .collect::<Result<_>>()?;
    SBox::new(table, f.order() as u32)
}

/// The lookup table of x -> x^k with 0 -> 0; a permutation exactly when
/// gcd(k, p^m - 1) = 1.
pub fn power_map_sbox(f: &FieldSpec, k: u64) -> Result<SBox> {
    if k == 0 {
        return Err(Error::ZeroPowerExponent);
    }
    let table: Vec<u32> = (0..f.order())
        .map(|x| f.pow(x, k).map(|v| v as u32))
        .collect::<Result<_>>()?;
    SBox::new(table, f.order() as u32)
}

/// Outcome of the subgroup setting: the Frobenius-power table together
/// with its verdicts under the multiplicative translation action and the
/// star action of gamma^G.
#[derive(Debug, Clone)]
pub struct SubgroupPnOutcome {
    pub sbox: SBox,
    /// Full-domain check: GF(2^m)* acting by multiplication, additive target.
    pub mult_verdict: PnVerdict,
    /// Restricted check: gamma^G acting by star product, multiplicative target.
    pub star_verdict: PnVerdict,
}

/// Builds lambda = Frobenius^r over GF(2^m) and runs both perfect
/// nonlinearity checks for a difference-unit subgroup G of U(Z_{2^m - 1}):
/// lambda under the multiplicative translation action, and the restriction
/// of lambda under the star action of gamma^G. The hypotheses are
/// validated here rather than trusted.
pub fn subgroup_pn_setting(
    field: &FieldSpec,
    g: &UnitSubgroup,
    r: u32,
) -> Result<SubgroupPnOutcome> {
    if field.p() != 2 {
        return Err(Error::CharacteristicNotTwo(field.p()));
    }
    if field.m() <= 1 {
        return Err(Error::DegreeTooSmallForSubgroupSetting { m: field.m() });
    }
    let n = field.mult_order();
    if g.n() != n {
        return Err(Error::SubgroupModulusMismatch {
            expected: n,
            got: g.n(),
        });
    }
    if !g.is_difference_unit() {
        let member = g
            .members()
            .iter()
            .copied()
            .find(|&i| i != 1 && gcd(i - 1, n) != 1)
            .unwrap_or(1);
        return Err(Error::MissingDifferenceUnit { n, member });
    }

    let sbox = frobenius_sbox(field, r)?;
    let mult_verdict = {
        let action = ActionSpec::mul_translation(field)?;
        let h = FiniteGroup::field_additive(field)?;
        is_perfect_nonlinear(&sbox, &action, &h)?
    };
    let star_verdict = {
        let fr = FieldRing::new(field);
        let action = ActionSpec::star(&fr, g)?;
        let h = FiniteGroup::field_multiplicative(field)?;
        let restricted = sbox.restrict_to_nonzero()?;
        is_perfect_nonlinear(&restricted, &action, &h)?
    };
    Ok(SubgroupPnOutcome {
        sbox,
        mult_verdict,
        star_verdict,
    })
}
