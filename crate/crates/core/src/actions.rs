//! Finite groups and their actions on finite sets.
//!
//! Groups are Cayley tables over u16 indices with opaque u64 labels;
//! actions are materialized permutation arrays, one per group element, so
//! predicates can be checked exhaustively and application in the analyzer
//! inner loop is a single lookup.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::constructions::VectorSpaceSpec;
use crate::double_field::{FieldRing, UnitSubgroup};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Largest supported group order / carrier size (u16 indices, u16 counters).
pub const MAX_INDEX: usize = u16::MAX as usize;

/// Exhaustive associativity is checked up to this order, sampled above.
const EXHAUSTIVE_ASSOC_ORDER: usize = 1 << 8;

/// A finite group: indexed labels, Cayley table, identity and inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<u64>,
    op: Vec<u16>,
    identity: u16,
    inverse: Vec<u16>,
}

impl FiniteGroup {
    /// Validates a Cayley table: Latin square, two-sided identity, two-sided
    /// inverses, associativity (exhaustive for orders up to 2^8, sampled
    /// deterministically above).
    pub fn new(labels: Vec<u64>, op: Vec<u16>) -> Result<FiniteGroup> {
        let k = labels.len();
        if k == 0 || k > MAX_INDEX {
            return Err(Error::InvalidGroup(format!(
                "order {k} outside [1, {MAX_INDEX}]"
            )));
        }
        if op.len() != k * k {
            return Err(Error::InvalidGroup("table shape mismatch".into()));
        }
        let mut seen = vec![false; k];
        for row in 0..k {
            seen.iter_mut().for_each(|s| *s = false);
            for col in 0..k {
                let v = op[row * k + col] as usize;
                if v >= k || seen[v] {
                    return Err(Error::InvalidGroup(format!("row {row} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        // Column permutation check in cache-friendly column blocks.
        const BLOCK: usize = 256;
        let words = k.div_ceil(64);
        let mut col_seen = vec![0u64; BLOCK.min(k) * words];
        for c0 in (0..k).step_by(BLOCK) {
            let bw = BLOCK.min(k - c0);
            col_seen.iter_mut().for_each(|w| *w = 0);
            for row in 0..k {
                let base = row * k + c0;
                for j in 0..bw {
                    let v = op[base + j] as usize;
                    let w = j * words + v / 64;
                    let bit = 1u64 << (v % 64);
                    if col_seen[w] & bit != 0 {
                        return Err(Error::InvalidGroup(format!(
                            "column {} is not a permutation",
                            c0 + j
                        )));
                    }
                    col_seen[w] |= bit;
                }
            }
        }
        let identity = (0..k)
            .find(|&e| (0..k).all(|x| op[e * k + x] as usize == x && op[x * k + e] as usize == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))? as u16;
        let mut inverse = vec![0u16; k];
        for x in 0..k {
            let y = (0..k)
                .find(|&y| op[x * k + y] == identity && op[y * k + x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
            inverse[x] = y as u16;
        }
        let assoc_ok = if k <= EXHAUSTIVE_ASSOC_ORDER {
            let mut ok = true;
            'outer: for a in 0..k {
                for b in 0..k {
                    let ab = op[a * k + b] as usize;
                    for c in 0..k {
                        let bc = op[b * k + c] as usize;
                        if op[ab * k + c] != op[a * k + bc] {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            ok
        } else {
            // Deterministic sampling for large tables.
            let mut state = 0x9e3779b97f4a7c15u64 ^ (k as u64);
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            (0..1 << 16).all(|_| {
                let a = (next() % k as u64) as usize;
                let b = (next() % k as u64) as usize;
                let c = (next() % k as u64) as usize;
                let ab = op[a * k + b] as usize;
                let bc = op[b * k + c] as usize;
                op[ab * k + c] == op[a * k + bc]
            })
        };
        if !assoc_ok {
            return Err(Error::InvalidGroup("associativity fails".into()));
        }
        Ok(FiniteGroup {
            labels,
            op,
            identity,
            inverse,
        })
    }

    /// The cyclic group Z_k under addition, labelled by residues.
    pub fn cyclic(k: u64) -> Result<FiniteGroup> {
        if k == 0 || k as usize > MAX_INDEX {
            return Err(Error::InvalidGroup(format!("order {k} out of range")));
        }
        let k = k as usize;
        let mut op = vec![0u16; k * k];
        for i in 0..k {
            for j in 0..k {
                op[i * k + j] = ((i + j) % k) as u16;
            }
        }
        FiniteGroup::new((0..k as u64).collect(), op)
    }

    /// (GF(p^m), +), labelled by element encodings in ascending order.
    pub fn field_additive(f: &FieldSpec) -> Result<FiniteGroup> {
        let k = f.order() as usize;
        if k > MAX_INDEX {
            return Err(Error::CarrierTooLarge(k));
        }
        let mut op = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                op[a * k + b] = f.add(a as u64, b as u64).unwrap() as u16;
            }
        }
        FiniteGroup::new((0..k as u64).collect(), op)
    }

    /// (GF(p^m)*, .), labelled by the nonzero encodings in ascending order.
    pub fn field_multiplicative(f: &FieldSpec) -> Result<FiniteGroup> {
        let k = f.mult_order() as usize;
        if k > MAX_INDEX {
            return Err(Error::CarrierTooLarge(k));
        }
        let mut op = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                let prod = f.mul(a as u64 + 1, b as u64 + 1).unwrap();
                op[a * k + b] = (prod - 1) as u16;
            }
        }
        FiniteGroup::new((1..=k as u64).collect(), op)
    }

    /// The additive group of V(p,m,d), labelled by carrier indices.
    pub fn vector_additive(vs: &VectorSpaceSpec) -> Result<FiniteGroup> {
        let k = vs.carrier_len();
        if k > MAX_INDEX {
            return Err(Error::CarrierTooLarge(k));
        }
        let f = vs.field();
        let s = f.order();
        let coords: Vec<Vec<u64>> = (0..k).map(|v| vs.coords(v)).collect();
        let mut op = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                let mut idx = 0u64;
                for (&x, &y) in coords[a].iter().zip(&coords[b]) {
                    idx = idx * s + f.add(x, y).unwrap();
                }
                op[a * k + b] = idx as u16;
            }
        }
        FiniteGroup::new((0..k as u64).collect(), op)
    }

    /// (gamma^G, x, gamma) for a subgroup G of U(Z_n), labelled by field
    /// encodings, ordered by ascending exponent.
    pub fn star_units(fr: &FieldRing, g: &UnitSubgroup) -> Result<FiniteGroup> {
        if g.n() != fr.n() {
            return Err(Error::SubgroupModulusMismatch {
                expected: fr.n(),
                got: g.n(),
            });
        }
        let n = fr.n();
        let members = g.members();
        let k = members.len();
        if k > MAX_INDEX {
            return Err(Error::CarrierTooLarge(k));
        }
        let mut index_of_residue = vec![u16::MAX; n as usize];
        for (idx, &r) in members.iter().enumerate() {
            index_of_residue[r as usize] = idx as u16;
        }
        let mut op = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                let prod = members[a] * members[b] % n;
                op[a * k + b] = index_of_residue[prod as usize];
            }
        }
        let labels = members
            .iter()
            .map(|&r| fr.field().exp_gamma(r % n).unwrap())
            .collect();
        FiniteGroup::new(labels, op)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: u16, b: u16) -> u16 {
        self.op[a as usize * self.labels.len() + b as usize]
    }

    /// Row of the Cayley table: all products a op x in index order.
    pub fn op_row(&self, a: u16) -> &[u16] {
        let k = self.labels.len();
        &self.op[a as usize * k..(a as usize + 1) * k]
    }

    #[inline]
    pub fn inverse(&self, a: u16) -> u16 {
        self.inverse[a as usize]
    }

    pub fn label(&self, idx: u16) -> u64 {
        self.labels[idx as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn index_of(&self, label: u64) -> Option<u16> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| i as u16)
    }
}

/// A finite group acting on an indexed carrier by a permutation per element.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    group: FiniteGroup,
    carrier: Vec<u64>,
    perm: Vec<u16>,
}

impl ActionSpec {
    /// Wraps explicit permutation rows. Each row must be a bijection over
    /// the carrier and the identity row must be the identity permutation;
    /// use `check_homomorphism` to verify the full action law.
    pub fn new(group: FiniteGroup, carrier: Vec<u64>, rows: Vec<Vec<u16>>) -> Result<ActionSpec> {
        let x = carrier.len();
        if x == 0 || x > MAX_INDEX {
            return Err(Error::CarrierTooLarge(x));
        }
        if rows.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} rows for a group of order {}",
                rows.len(),
                group.order()
            )));
        }
        let mut perm = Vec::with_capacity(group.order() * x);
        let mut seen = vec![false; x];
        for (g, row) in rows.iter().enumerate() {
            if row.len() != x {
                return Err(Error::InvalidAction(format!("row {g} has wrong length")));
            }
            seen.iter_mut().for_each(|s| *s = false);
            for &v in row {
                if v as usize >= x || seen[v as usize] {
                    return Err(Error::InvalidAction(format!("row {g} is not a bijection")));
                }
                seen[v as usize] = true;
            }
            perm.extend_from_slice(row);
        }
        let e = group.identity() as usize;
        if (0..x).any(|i| perm[e * x + i] as usize != i) {
            return Err(Error::InvalidAction(
                "identity row is not the identity permutation".into(),
            ));
        }
        Ok(ActionSpec {
            group,
            carrier,
            perm,
        })
    }

    /// G = GF(p^m)* acting on GF(p^m) by multiplication.
    pub fn mul_translation(f: &FieldSpec) -> Result<ActionSpec> {
        let group = FiniteGroup::field_multiplicative(f)?;
        let carrier: Vec<u64> = (0..f.order()).collect();
        let rows = group
            .labels()
            .iter()
            .map(|&a| {
                (0..f.order())
                    .map(|x| f.mul(a, x).unwrap() as u16)
                    .collect()
            })
            .collect();
        ActionSpec::new(group, carrier, rows)
    }

    /// G = (GF(p^m), +) acting on itself by translation; the XOR setting
    /// in characteristic 2.
    pub fn add_translation(f: &FieldSpec) -> Result<ActionSpec> {
        let group = FiniteGroup::field_additive(f)?;
        let carrier: Vec<u64> = (0..f.order()).collect();
        let rows = group
            .labels()
            .iter()
            .map(|&a| {
                (0..f.order())
                    .map(|x| f.add(a, x).unwrap() as u16)
                    .collect()
            })
            .collect();
        ActionSpec::new(group, carrier, rows)
    }

    /// G = (V(p,m,d), +) acting on itself by translation.
    pub fn vector_add_translation(vs: &VectorSpaceSpec) -> Result<ActionSpec> {
        let group = FiniteGroup::vector_additive(vs)?;
        let carrier: Vec<u64> = (0..vs.carrier_len() as u64).collect();
        let rows = (0..vs.carrier_len() as u16)
            .map(|a| group.op_row(a).to_vec())
            .collect();
        ActionSpec::new(group, carrier, rows)
    }

    /// G = GF(p^m)* acting componentwise on V(p,m,d) by scalar
    /// multiplication. For d = 1 this is `mul_translation`.
    pub fn scalar(vs: &VectorSpaceSpec) -> Result<ActionSpec> {
        let f = vs.field();
        let group = FiniteGroup::field_multiplicative(f)?;
        if vs.carrier_len() > MAX_INDEX {
            return Err(Error::CarrierTooLarge(vs.carrier_len()));
        }
        let s = f.order();
        let coords: Vec<Vec<u64>> = (0..vs.carrier_len()).map(|v| vs.coords(v)).collect();
        let carrier: Vec<u64> = (0..vs.carrier_len() as u64).collect();
        let rows = group
            .labels()
            .iter()
            .map(|&alpha| {
                coords
                    .iter()
                    .map(|c| {
                        let mut idx = 0u64;
                        for &x in c {
                            idx = idx * s + f.mul(alpha, x).unwrap();
                        }
                        idx as u16
                    })
                    .collect()
            })
            .collect();
        ActionSpec::new(group, carrier, rows)
    }

    /// G = gamma^g under the star product acting on GF(p^m)* by
    /// gamma^i . gamma^j = gamma^{ij}. Every permutation is a group
    /// automorphism of (GF(p^m)*, .) and fixes 1 = gamma^0.
    pub fn star(fr: &FieldRing, g: &UnitSubgroup) -> Result<ActionSpec> {
        let group = FiniteGroup::star_units(fr, g)?;
        let f = fr.field();
        let n = fr.n();
        let carrier: Vec<u64> = (1..f.order()).collect();
        let rows = g
            .members()
            .iter()
            .map(|&i| {
                carrier
                    .iter()
                    .map(|&enc| {
                        let j = f.log_gamma(enc).unwrap();
                        (f.exp_gamma(i * j % n).unwrap() - 1) as u16
                    })
                    .collect()
            })
            .collect();
        ActionSpec::new(group, carrier, rows)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn carrier(&self) -> &[u64] {
        &self.carrier
    }

    pub fn carrier_len(&self) -> usize {
        self.carrier.len()
    }

    /// The permutation of g as a row of carrier indices.
    #[inline]
    pub fn perm_row(&self, g: u16) -> &[u16] {
        let x = self.carrier.len();
        &self.perm[g as usize * x..(g as usize + 1) * x]
    }

    /// g.x as carrier indices.
    #[inline]
    pub fn apply(&self, g: u16, x: usize) -> usize {
        self.perm[g as usize * self.carrier.len() + x] as usize
    }

    /// Group indices of G* = G minus the identity, in index order.
    pub fn non_identity_indices(&self) -> impl Iterator<Item = u16> + '_ {
        let e = self.group.identity();
        (0..self.group.order() as u16).filter(move |&g| g != e)
    }

    /// True iff distinct group elements act by distinct permutations.
    pub fn is_faithful(&self) -> bool {
        let mut hashed: Vec<(u64, u16)> = (0..self.group.order() as u16)
            .map(|g| {
                let mut h = DefaultHasher::new();
                self.perm_row(g).hash(&mut h);
                (h.finish(), g)
            })
            .collect();
        hashed.sort_unstable();
        for w in hashed.windows(2) {
            if w[0].0 == w[1].0 && self.perm_row(w[0].1) == self.perm_row(w[1].1) {
                return false;
            }
        }
        true
    }

    /// True iff for every ordered pair (x, y) exactly one group element
    /// sends x to y.
    pub fn is_regular(&self) -> bool {
        let x_len = self.carrier.len();
        if self.group.order() != x_len {
            return false;
        }
        let mut seen = vec![false; x_len];
        for x in 0..x_len {
            seen.iter_mut().for_each(|s| *s = false);
            for g in 0..self.group.order() as u16 {
                let y = self.apply(g, x);
                if seen[y] {
                    return false;
                }
                seen[y] = true;
            }
        }
        true
    }

    /// Full action law: perm[g op h] = perm[g] after perm[h], and the
    /// identity acts as the identity. Quadratic in |G|; intended for tests.
    pub fn check_homomorphism(&self) -> Result<()> {
        let x_len = self.carrier.len();
        for g in 0..self.group.order() as u16 {
            for h in 0..self.group.order() as u16 {
                let gh = self.group.op(g, h);
                for x in 0..x_len {
                    if self.apply(gh, x) != self.apply(g, self.apply(h, x)) {
                        return Err(Error::InvalidAction(format!(
                            "perm[{g} op {h}] differs from composition at {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn gf(p: u64, m: u32) -> FieldSpec {
        FieldSpec::build(p, m, None).unwrap()
    }

    #[test]
    fn mul_translation_is_faithful_not_regular() {
        let f = gf(2, 3);
        let a = ActionSpec::mul_translation(&f).unwrap();
        assert!(a.is_faithful());
        assert!(!a.is_regular()); // zero is fixed by every element
        a.check_homomorphism().unwrap();
    }

    #[test]
    fn add_translation_is_regular() {
        let f = gf(2, 2);
        let a = ActionSpec::add_translation(&f).unwrap();
        assert!(a.is_regular());
        assert!(a.is_faithful());
        a.check_homomorphism().unwrap();
        // Translation by 1 swaps (0,1) and (gamma, gamma+1).
        let g1 = a.group().index_of(1).unwrap();
        assert_eq!(a.perm_row(g1), &[1, 0, 3, 2]);
    }

    #[test]
    fn trivial_action_is_not_faithful() {
        let group = FiniteGroup::cyclic(2).unwrap();
        let a = ActionSpec::new(group, vec![0, 1], vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!a.is_faithful());
    }

    #[test]
    fn subgroup_translation_is_faithful_not_regular() {
        // Z_2 inside Z_4, translating Z_4.
        let group = FiniteGroup::cyclic(2).unwrap();
        let rows = vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]];
        let a = ActionSpec::new(group, vec![0, 1, 2, 3], rows).unwrap();
        assert!(a.is_faithful());
        assert!(!a.is_regular());
    }

    #[test]
    fn mul_translation_perm_of_gamma_on_gf4() {
        let f = gf(2, 2);
        let a = ActionSpec::mul_translation(&f).unwrap();
        let g = a.group().index_of(f.gamma()).unwrap();
        // gamma maps [0, 1, gamma, gamma+1] to [0, gamma, gamma+1, 1].
        assert_eq!(a.perm_row(g), &[0, 2, 3, 1]);
        let one = a.group().index_of(1).unwrap();
        assert_eq!(a.perm_row(one), &[0, 1, 2, 3]);
        assert_eq!(a.group().order() as u64, f.mult_order());
    }

    #[test]
    fn star_action_on_gf8() {
        let f = gf(2, 3);
        let fr = FieldRing::new(&f);
        let g = UnitSubgroup::full(7).unwrap();
        let a = ActionSpec::star(&fr, &g).unwrap();
        assert!(a.is_faithful());
        a.check_homomorphism().unwrap();
        // gamma^2 sends gamma^j to gamma^{2j}; carrier order is 1,...,7.
        let g2 = a.group().index_of(f.exp_gamma(2).unwrap()).unwrap();
        let expected: Vec<u16> = (1..8u64)
            .map(|enc| {
                let j = f.log_gamma(enc).unwrap();
                (f.exp_gamma(2 * j % 7).unwrap() - 1) as u16
            })
            .collect();
        assert_eq!(a.perm_row(g2), expected.as_slice());
        // gamma acts as the identity, and every permutation fixes 1.
        let gid = a.group().index_of(f.gamma()).unwrap();
        assert_eq!(gid, a.group().identity());
        for g in 0..a.group().order() as u16 {
            assert_eq!(a.apply(g, 0), 0);
        }
    }

    #[test]
    fn star_rows_are_multiplicative_automorphisms() {
        let f = gf(2, 3);
        let fr = FieldRing::new(&f);
        let g = UnitSubgroup::full(7).unwrap();
        let a = ActionSpec::star(&fr, &g).unwrap();
        for gi in 0..a.group().order() as u16 {
            for x in 1..8u64 {
                for y in 1..8u64 {
                    let xy = f.mul(x, y).unwrap();
                    let lhs = a.apply(gi, (xy - 1) as usize);
                    let px = a.apply(gi, (x - 1) as usize) as u64 + 1;
                    let py = a.apply(gi, (y - 1) as usize) as u64 + 1;
                    let rhs = (f.mul(px, py).unwrap() - 1) as usize;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn scalar_action_matches_componentwise_mul() {
        let f = gf(2, 2);
        let vs = VectorSpaceSpec::from_field(f.clone(), 2);
        let a = ActionSpec::scalar(&vs).unwrap();
        a.check_homomorphism().unwrap();
        assert!(a.is_faithful());
        assert!(!a.is_regular());
        // gamma . (1, gamma) = (gamma, gamma+1)
        let v = vs.index_of(&[1, f.gamma()]);
        let img = vs.index_of(&[f.gamma(), f.mul(f.gamma(), f.gamma()).unwrap()]);
        let g = a.group().index_of(f.gamma()).unwrap();
        assert_eq!(a.apply(g, v), img);
        // Scalar 1 is the identity permutation.
        let one = a.group().index_of(1).unwrap();
        assert_eq!(one, a.group().identity());
    }

    #[test]
    fn scalar_in_dimension_one_is_mul_translation() {
        let f = gf(3, 2);
        let vs = VectorSpaceSpec::from_field(f.clone(), 1);
        let scalar = ActionSpec::scalar(&vs).unwrap();
        let mul = ActionSpec::mul_translation(&f).unwrap();
        assert_eq!(scalar.group().labels(), mul.group().labels());
        for g in 0..mul.group().order() as u16 {
            assert_eq!(scalar.perm_row(g), mul.perm_row(g));
        }
    }

    #[test]
    fn group_validation_rejects_bad_tables() {
        // Not a Latin square.
        assert!(FiniteGroup::new(vec![0, 1], vec![0, 0, 1, 1]).is_err());
        // Latin square without identity (no two-sided identity row/col).
        assert!(FiniteGroup::new(vec![0, 1, 2], vec![1, 0, 2, 0, 2, 1, 2, 1, 0]).is_err());
    }
}
