//! Derivative spectra of lookup-table functions under group actions.
//!
//! For a function f on the action carrier with values indexed by a target
//! group H, the derivative in direction alpha is x -> f(alpha.x) (x)
//! f(x)^{-1} in H; written additively this is f(alpha.x) - f(x). The
//! spectrum table collects the counts N(alpha, beta) over all non-identity
//! directions, and f is perfect nonlinear exactly when every count equals
//! |X| / |H|. All comparisons are exact integer comparisons.

use rayon::prelude::*;

use crate::actions::{ActionSpec, FiniteGroup, MAX_INDEX};
use crate::double_field::{FieldRing, UnitSubgroup};
use crate::error::{Error, Result};

/// Row work below this many derivative evaluations stays sequential.
const PARALLEL_THRESHOLD: usize = 1 << 22;

/// A total function on an indexed carrier, given as a lookup table of
/// codomain indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBox {
    table: Vec<u32>,
    codomain_size: u32,
    is_permutation: bool,
}

impl SBox {
    /// Validates that every entry lies in the codomain and caches whether
    /// the table is a bijection onto it.
    pub fn new(table: Vec<u32>, codomain_size: u32) -> Result<SBox> {
        for &v in &table {
            if v >= codomain_size {
                return Err(Error::EntryOutOfRange {
                    entry: v as u64,
                    codomain: codomain_size as u64,
                });
            }
        }
        let is_permutation = if table.len() == codomain_size as usize {
            let mut seen = vec![false; table.len()];
            table.iter().all(|&v| {
                let hit = seen[v as usize];
                seen[v as usize] = true;
                !hit
            })
        } else {
            false
        };
        Ok(SBox {
            table,
            codomain_size,
            is_permutation,
        })
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn codomain_size(&self) -> u32 {
        self.codomain_size
    }

    pub fn is_permutation(&self) -> bool {
        self.is_permutation
    }

    #[inline]
    pub fn get(&self, x: usize) -> u32 {
        self.table[x]
    }

    /// Drops index 0 of a full field table and shifts the remaining values
    /// into nonzero-element indices, for analyses on GF(p^m)*. Fails when an
    /// invertible input maps to zero.
    pub fn restrict_to_nonzero(&self) -> Result<SBox> {
        let mut table = Vec::with_capacity(self.table.len().saturating_sub(1));
        for (x, &v) in self.table.iter().enumerate().skip(1) {
            if v == 0 {
                return Err(Error::NonzeroMapsToZero { x: x as u64 });
            }
            table.push(v - 1);
        }
        SBox::new(table, self.codomain_size - 1)
    }

    /// Reindexes field-encoded values into multiplicative-group indices
    /// (encoding minus 1) without touching the domain. Fails when any value
    /// is zero.
    pub fn reindex_for_multiplicative_target(&self) -> Result<SBox> {
        let mut table = Vec::with_capacity(self.table.len());
        for (x, &v) in self.table.iter().enumerate() {
            if v == 0 {
                return Err(Error::ZeroValueInMultiplicativeTarget { x: x as u64 });
            }
            table.push(v - 1);
        }
        SBox::new(table, self.codomain_size - 1)
    }
}

/// The counts N(alpha, beta) = |{x : d_alpha f(x) = beta}| for all
/// non-identity alpha and all beta in H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable {
    alphas: Vec<u16>,
    h_order: usize,
    carrier_len: usize,
    counts: Vec<u16>,
    target_ratio: Option<u64>,
}

impl SpectrumTable {
    /// Group indices of the directions, one per row.
    pub fn alphas(&self) -> &[u16] {
        &self.alphas
    }

    pub fn h_order(&self) -> usize {
        self.h_order
    }

    pub fn carrier_len(&self) -> usize {
        self.carrier_len
    }

    /// |X| / |H| when integral.
    pub fn target_ratio(&self) -> Option<u64> {
        self.target_ratio
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.counts[i * self.h_order..(i + 1) * self.h_order]
    }

    pub fn rows(&self) -> impl Iterator<Item = (u16, &[u16])> + '_ {
        self.alphas
            .iter()
            .enumerate()
            .map(|(i, &alpha)| (alpha, self.row(i)))
    }

    /// Largest entry; 0 for a spectrum with no directions.
    pub fn max_count(&self) -> u16 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// First (row, beta, count) whose count differs from the target ratio.
    pub fn first_unbalanced(&self, ratio: u64) -> Option<(usize, usize, u16)> {
        for i in 0..self.alphas.len() {
            for (beta, &c) in self.row(i).iter().enumerate() {
                if c as u64 != ratio {
                    return Some((i, beta, c));
                }
            }
        }
        None
    }
}

fn check_compatible(f: &SBox, a: &ActionSpec, h: &FiniteGroup) -> Result<()> {
    if f.domain_size() != a.carrier_len() {
        return Err(Error::DomainMismatch {
            sbox: f.domain_size(),
            carrier: a.carrier_len(),
        });
    }
    if f.codomain_size() as usize != h.order() {
        return Err(Error::CodomainMismatch {
            sbox: f.codomain_size() as u64,
            group: h.order() as u64,
        });
    }
    if a.carrier_len() > MAX_INDEX {
        return Err(Error::CarrierTooLarge(a.carrier_len()));
    }
    Ok(())
}

#[inline]
fn fill_row(f: &SBox, a: &ActionSpec, h: &FiniteGroup, alpha: u16, row: &mut [u16]) {
    let perm = a.perm_row(alpha);
    let table = f.table();
    for (x, &px) in perm.iter().enumerate() {
        let fx = table[x] as u16;
        let fax = table[px as usize] as u16;
        let d = h.op(fax, h.inverse(fx));
        row[d as usize] += 1;
    }
}

/// The derivative of f in direction alpha: x -> f(alpha.x) (x) f(x)^{-1},
/// as a vector of H indices over the carrier. The identity direction is
/// rejected; it lies outside G*.
pub fn derivative(f: &SBox, a: &ActionSpec, h: &FiniteGroup, alpha: u16) -> Result<Vec<u16>> {
    check_compatible(f, a, h)?;
    if alpha == a.group().identity() {
        return Err(Error::IdentityDirection);
    }
    let perm = a.perm_row(alpha);
    Ok((0..f.domain_size())
        .map(|x| {
            let fx = f.get(x) as u16;
            let fax = f.get(perm[x] as usize) as u16;
            h.op(fax, h.inverse(fx))
        })
        .collect())
}

/// Counts of every derivative value over every non-identity direction.
/// Rows are independent and may be filled in parallel; the result is
/// identical to the sequential order regardless of worker count.
pub fn spectrum(f: &SBox, a: &ActionSpec, h: &FiniteGroup) -> Result<SpectrumTable> {
    check_compatible(f, a, h)?;
    let alphas: Vec<u16> = a.non_identity_indices().collect();
    let h_order = h.order();
    let x_len = a.carrier_len();
    let mut counts = vec![0u16; alphas.len() * h_order];
    if alphas.len() * x_len >= PARALLEL_THRESHOLD {
        counts
            .par_chunks_mut(h_order)
            .zip(alphas.par_iter())
            .for_each(|(row, &alpha)| fill_row(f, a, h, alpha, row));
    } else {
        for (row, &alpha) in counts.chunks_mut(h_order).zip(alphas.iter()) {
            fill_row(f, a, h, alpha, row);
        }
    }
    let target_ratio = if x_len.is_multiple_of(h_order) {
        Some((x_len / h_order) as u64)
    } else {
        None
    };
    Ok(SpectrumTable {
        alphas,
        h_order,
        carrier_len: x_len,
        counts,
        target_ratio,
    })
}

/// Why a perfect-nonlinearity check came back negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PnFailure {
    /// |H| does not divide |X|, so no balanced derivative can exist.
    Divisibility { carrier: usize, target: usize },
    /// The first spectrum entry that differs from |X| / |H|.
    Unbalanced {
        alpha: u16,
        alpha_label: u64,
        beta: u16,
        beta_label: u64,
        count: u16,
        expected: u64,
    },
}

/// Outcome of a perfect-nonlinearity check, with the full spectrum.
#[derive(Debug, Clone)]
pub struct PnVerdict {
    pub pn: bool,
    pub failure: Option<PnFailure>,
    pub spectrum: SpectrumTable,
}

/// f is perfect nonlinear with respect to the action exactly when every
/// spectrum entry equals |X| / |H|. A divisibility obstruction is reported
/// as a negative verdict rather than an error so batch screening never
/// aborts.
pub fn is_perfect_nonlinear(f: &SBox, a: &ActionSpec, h: &FiniteGroup) -> Result<PnVerdict> {
    let spec = spectrum(f, a, h)?;
    match spec.target_ratio() {
        None => Ok(PnVerdict {
            pn: false,
            failure: Some(PnFailure::Divisibility {
                carrier: a.carrier_len(),
                target: h.order(),
            }),
            spectrum: spec,
        }),
        Some(ratio) => match spec.first_unbalanced(ratio) {
            None => Ok(PnVerdict {
                pn: true,
                failure: None,
                spectrum: spec,
            }),
            Some((row, beta, count)) => {
                let alpha = spec.alphas()[row];
                Ok(PnVerdict {
                    pn: false,
                    failure: Some(PnFailure::Unbalanced {
                        alpha,
                        alpha_label: a.group().label(alpha),
                        beta: beta as u16,
                        beta_label: h.label(beta as u16),
                        count,
                        expected: ratio,
                    }),
                    spectrum: spec,
                })
            }
        },
    }
}

/// Maximum spectrum entry over all directions and target values. In the
/// additive-translation setting with equal input and output sizes, a value
/// of 2 is the almost-perfect-nonlinear optimum for permutations.
pub fn differential_uniformity(f: &SBox, a: &ActionSpec, h: &FiniteGroup) -> Result<u16> {
    Ok(spectrum(f, a, h)?.max_count())
}

/// Which target group the full-domain half of the doubly-PN check uses.
/// The definition reduces to an additive epimorphism argument, so the
/// additive group is the default; the multiplicative variant is exposed
/// for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Part1Target {
    #[default]
    Additive,
    Multiplicative,
}

/// Verdict of the doubly-PN check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoublyPnVerdict {
    DoublyPn,
    NotDoublyPn,
    /// The star ring is not a field (or the characteristic is not 2), so
    /// the notion does not apply.
    Inapplicable,
}

/// Both halves of the doubly-PN check with their spectra.
#[derive(Debug, Clone)]
pub struct DoublyPnReport {
    pub verdict: DoublyPnVerdict,
    pub reason: Option<String>,
    /// f under GF(2^q)* acting by multiplication on GF(2^q).
    pub mult_part: Option<PnVerdict>,
    /// f* under GF(2^q)** acting by star multiplication on GF(2^q)*.
    pub star_part: Option<PnVerdict>,
}

/// Checks whether f is perfect nonlinear for both the multiplicative
/// translation action on GF(2^q) and the star action of GF(2^q)** on
/// GF(2^q)*. Requires 2^q - 1 prime; f must send invertible elements to
/// invertible elements.
pub fn is_doubly_pn(f: &SBox, fr: &FieldRing) -> Result<DoublyPnReport> {
    is_doubly_pn_with(f, fr, Part1Target::Additive)
}

/// `is_doubly_pn` with an explicit target group for the full-domain half.
pub fn is_doubly_pn_with(
    f: &SBox,
    fr: &FieldRing,
    part1_target: Part1Target,
) -> Result<DoublyPnReport> {
    let field = fr.field();
    let order = field.order();
    if f.domain_size() != order as usize {
        return Err(Error::DomainMismatch {
            sbox: f.domain_size(),
            carrier: order as usize,
        });
    }
    if f.codomain_size() as u64 != order {
        return Err(Error::CodomainMismatch {
            sbox: f.codomain_size() as u64,
            group: order,
        });
    }
    if field.p() != 2 {
        return Ok(DoublyPnReport {
            verdict: DoublyPnVerdict::Inapplicable,
            reason: Some(format!("characteristic {} is not 2", field.p())),
            mult_part: None,
            star_part: None,
        });
    }
    if !fr.is_double_field() {
        return Ok(DoublyPnReport {
            verdict: DoublyPnVerdict::Inapplicable,
            reason: Some(format!("{} is not prime", fr.n())),
            mult_part: None,
            star_part: None,
        });
    }
    for x in 1..order as usize {
        if f.get(x) == 0 {
            return Err(Error::NonzeroMapsToZero { x: x as u64 });
        }
    }

    let mult_part = {
        let action = ActionSpec::mul_translation(field)?;
        match part1_target {
            Part1Target::Additive => {
                let h = FiniteGroup::field_additive(field)?;
                is_perfect_nonlinear(f, &action, &h)?
            }
            Part1Target::Multiplicative => {
                let h = FiniteGroup::field_multiplicative(field)?;
                let f1 = f.reindex_for_multiplicative_target()?;
                is_perfect_nonlinear(&f1, &action, &h)?
            }
        }
    };

    let star_part = {
        let units = UnitSubgroup::full(fr.n())?;
        let action = ActionSpec::star(fr, &units)?;
        let h = FiniteGroup::field_multiplicative(field)?;
        let f2 = f.restrict_to_nonzero()?;
        is_perfect_nonlinear(&f2, &action, &h)?
    };

    let verdict = if mult_part.pn && star_part.pn {
        DoublyPnVerdict::DoublyPn
    } else {
        DoublyPnVerdict::NotDoublyPn
    };
    let reason = match (&mult_part.failure, &star_part.failure) {
        (None, None) => None,
        (Some(f1), _) => Some(format!("multiplicative half fails: {f1:?}")),
        (None, Some(f2)) => Some(format!("star half fails: {f2:?}")),
    };
    Ok(DoublyPnReport {
        verdict,
        reason,
        mult_part: Some(mult_part),
        star_part: Some(star_part),
    })
}
