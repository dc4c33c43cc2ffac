//! The transformation coefficients S and U, the ordered-surjection
//! combinatorics feeding them, and the surjection identity Σ = 1/l!.

use std::cmp::Ordering;

use crate::cone::{ConeModel, NumClass};
use crate::error::{Error, Result};
use crate::rat::{factorial, rat_int, sign_pow, Rat};
use crate::stability::{compare, StabilityParam};

/// A weakly monotone surjection `{1..l} → {1..m}`, stored as the sizes of the
/// m preimage blocks (a composition of l into m parts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedSurjection {
    pub l: usize,
    pub m: usize,
    pub block_sizes: Vec<usize>,
}

impl OrderedSurjection {
    /// Half-open index ranges of the blocks, in order.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.m);
        let mut start = 0;
        for &s in &self.block_sizes {
            out.push(start..start + s);
            start += s;
        }
        out
    }

    /// Block index (0-based) of position `i` (0-based).
    pub fn block_of(&self, i: usize) -> usize {
        let mut start = 0;
        for (b, &s) in self.block_sizes.iter().enumerate() {
            start += s;
            if i < start {
                return b;
            }
        }
        unreachable!("index out of range")
    }
}

/// All weakly monotone surjections `{1..l} → {1..m}`, i.e. all compositions
/// of l into m positive parts; `binomial(l−1, m−1)` of them, and none when
/// `m > l`.
pub fn surjections(l: usize, m: usize) -> Vec<OrderedSurjection> {
    let mut out = Vec::new();
    if m == 0 || m > l {
        return out;
    }
    let mut parts = Vec::with_capacity(m);
    compose(l, m, &mut parts, &mut out);
    out
}

fn compose(rest: usize, slots: usize, parts: &mut Vec<usize>, out: &mut Vec<OrderedSurjection>) {
    if slots == 1 {
        parts.push(rest);
        out.push(OrderedSurjection {
            l: parts.iter().sum(),
            m: parts.len(),
            block_sizes: parts.clone(),
        });
        parts.pop();
        return;
    }
    for first in 1..=rest - (slots - 1) {
        parts.push(first);
        compose(rest - first, slots - 1, parts, out);
        parts.pop();
    }
}

/// The coefficient `S({v_1..v_l}, Z, Z′) ∈ {−1, 0, 1}`.
///
/// Each adjacent position must flip order between the two comparators:
/// either `Z(v_i) ⪯ Z(v_{i+1})` with the partial sums strictly descending
/// under `Z′`, or `Z(v_i) ≻ Z(v_{i+1})` with the partial sums weakly
/// ascending under `Z′`. The sign counts the first kind.
pub fn s_coeff(
    classes: &[NumClass],
    k_z: &StabilityParam,
    k_zp: &StabilityParam,
    model: &ConeModel,
) -> Result<i64> {
    if classes.is_empty() {
        return Err(Error::Precondition("s_coeff needs a nonempty tuple".into()));
    }
    let mut flips = 0usize;
    for i in 1..classes.len() {
        let left = NumClass::sum_checked(&classes[..i])?;
        let right = NumClass::sum_checked(&classes[i..])?;
        let z = compare(&classes[i - 1], &classes[i], k_z, model)?;
        let zp = compare(&left, &right, k_zp, model)?;
        let eith1 = z != Ordering::Greater && zp == Ordering::Greater;
        let eigh2 = z == Ordering::Greater && zp != Ordering::Greater;
        if eith1 {
            flips += 1;
        } else if !eigh2 {
            return Ok(0);
        }
    }
    Ok(if flips % 2 == 0 { 1 } else { -1 })
}

/// The coefficient `U({v_1..v_l}, Z, Z′)`.
///
/// Double sum over nested monotone surjections ψ (blocks of equal Z-phase)
/// and ξ (superblocks whose class sums share one Z′-phase), each term a
/// product of S-coefficients of the block sums times
/// `(−1)^{m′−1}/m′ · ∏_b 1/|ψ⁻¹(b)|!`.
pub fn u_coeff(
    classes: &[NumClass],
    k_z: &StabilityParam,
    k_zp: &StabilityParam,
    model: &ConeModel,
) -> Result<Rat> {
    let l = classes.len();
    if l == 0 {
        return Err(Error::Precondition("u_coeff needs a nonempty tuple".into()));
    }
    let mut total = rat_int(0);
    for m in 1..=l {
        'psi: for psi in surjections(l, m) {
            let blocks = psi.blocks();
            for range in &blocks {
                for i in range.start + 1..range.end {
                    if compare(&classes[i - 1], &classes[i], k_z, model)? != Ordering::Equal {
                        continue 'psi;
                    }
                }
            }
            let w: Vec<NumClass> = blocks
                .iter()
                .map(|r| NumClass::sum_checked(&classes[r.clone()]))
                .collect::<Result<_>>()?;
            let psi_weight: Rat = psi
                .block_sizes
                .iter()
                .map(|&s| factorial(s).recip())
                .product();
            for mp in 1..=m {
                'xi: for xi in surjections(m, mp) {
                    let superblocks = xi.blocks();
                    let sums: Vec<NumClass> = superblocks
                        .iter()
                        .map(|r| NumClass::sum_checked(&w[r.clone()]))
                        .collect::<Result<_>>()?;
                    for i in 1..sums.len() {
                        if compare(&sums[i - 1], &sums[i], k_zp, model)? != Ordering::Equal {
                            continue 'xi;
                        }
                    }
                    let mut s_prod = rat_int(1);
                    for r in &superblocks {
                        let s = s_coeff(&w[r.clone()], k_z, k_zp, model)?;
                        if s == 0 {
                            continue 'xi;
                        }
                        s_prod *= rat_int(s);
                    }
                    total += s_prod
                        * sign_pow(mp - 1)
                        * Rat::new(1.into(), (mp as i64).into())
                        * &psi_weight;
                }
            }
        }
    }
    Ok(total)
}

/// The specialized U-sum for pattern tuples: exactly one rank −1 entry `e`,
/// all other entries torsion with nonzero n. Sums `(−1)^{ψ(e)−1} ∏_b 1/|ψ⁻¹(b)|!`
/// over monotone surjections whose blocks respect the slope constraints:
/// equal slopes within blocks left of `e`, slope `−2k` for torsion sharing
/// the block of `e`, and blocks right of `e` exactly the equal-slope runs.
pub fn u_coeff_specialized(
    classes: &[NumClass],
    k_z: &StabilityParam,
    model: &ConeModel,
) -> Result<Rat> {
    let l = classes.len();
    let e = unique_rank_index(classes)?;
    let mut mus: Vec<Option<Rat>> = Vec::with_capacity(l);
    for c in classes {
        if c.is_torsion() {
            let d = model.deg(&c.beta)?;
            mus.push(Some(Rat::new(c.n.into(), d.into())));
        } else {
            mus.push(None);
        }
    }
    let threshold = k_z.threshold();
    let mut total = rat_int(0);
    for m in 1..=l {
        for psi in surjections(l, m) {
            if !usat_satisfied(&psi, e, &mus, &threshold) {
                continue;
            }
            let weight: Rat = psi
                .block_sizes
                .iter()
                .map(|&s| factorial(s).recip())
                .product();
            total += sign_pow(psi.block_of(e)) * weight;
        }
    }
    Ok(total)
}

/// The block constraints of the specialized U-sum: equal slopes within
/// blocks left of `e` (only an implication there, matching the weak ascent),
/// slope `−2k` for any entry left of `e` sharing the block of `e`, and on
/// the strictly-descending right side the blocks are exactly the maximal
/// equal-slope runs — with `e` itself counting as a run of slope `−2k`, so
/// a right entry shares e's block if and only if its slope is `−2k`.
/// `mus[i]` is `None` at `i = e`.
pub fn usat_satisfied(
    psi: &OrderedSurjection,
    e: usize,
    mus: &[Option<Rat>],
    threshold: &Rat,
) -> bool {
    let l = mus.len();
    for i in 0..l {
        for j in i + 1..l {
            let same = psi.block_of(i) == psi.block_of(j);
            if i < e && j < e && same && mus[i] != mus[j] {
                return false;
            }
            if j == e && same && mus[i].as_ref() != Some(threshold) {
                return false;
            }
            if i == e && same != (mus[j].as_ref() == Some(threshold)) {
                return false;
            }
            if i > e && j > e && same != (mus[i] == mus[j]) {
                return false;
            }
        }
    }
    true
}

/// Index of the unique rank −1 entry of a pattern tuple.
pub fn unique_rank_index(classes: &[NumClass]) -> Result<usize> {
    let mut found = None;
    for (i, c) in classes.iter().enumerate() {
        if c.r == -1 {
            if found.is_some() {
                return Err(Error::Precondition("tuple has two rank -1 entries".into()));
            }
            found = Some(i);
        }
    }
    found.ok_or_else(|| Error::Precondition("tuple has no rank -1 entry".into()))
}

/// The surjection identity: Σ over m and monotone surjections of
/// `(−1)^{l−m} ∏_b 1/|ψ⁻¹(b)|!` equals `1/l!`.
pub fn elem_identity(l: usize) -> Rat {
    let mut total = rat_int(0);
    for m in 1..=l {
        for psi in surjections(l, m) {
            let weight: Rat = psi
                .block_sizes
                .iter()
                .map(|&s| factorial(s).recip())
                .product();
            total += sign_pow(l - m) * weight;
        }
    }
    total
}
