//! The numerical lattice: classes `(r, β, n)` with `r ∈ {0, −1}`, the toy
//! effective cone (a nonnegative orthant with degree weights `ω`), the Euler
//! pairing, slopes, and the finite decomposition enumerations every
//! wall-crossing sum ranges over.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{floor_i64, rat_int, Rat};
use crate::stability::StabilityParam;

/// An effective curve class: a vector of nonnegative integers of length ρ.
pub type Beta = Vec<i64>;

/// Componentwise `a ≤ b`.
pub fn beta_le(a: &Beta, b: &Beta) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn beta_add(a: &Beta, b: &Beta) -> Beta {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Componentwise `a − b`; caller guarantees `b ≤ a`.
pub fn beta_sub(a: &Beta, b: &Beta) -> Beta {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn beta_is_zero(b: &Beta) -> bool {
    b.iter().all(|&x| x == 0)
}

/// All β with `0 ≤ β ≤ bound` componentwise, in lexicographic order.
pub fn beta_box(bound: &Beta) -> Vec<Beta> {
    let mut out = vec![Vec::new()];
    for &hi in bound {
        let mut next = Vec::new();
        for prefix in &out {
            for x in 0..=hi {
                let mut b = prefix.clone();
                b.push(x);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

/// A numerical class `(r, β, n)` with `r ∈ {0, −1}`.
///
/// Torsion classes (`r = 0`) always carry `β ≠ 0`; the only rank −1 class
/// with `β = 0` is `(−1, 0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NumClass {
    pub r: i64,
    pub beta: Beta,
    pub n: i64,
}

impl NumClass {
    pub fn new(r: i64, beta: Beta, n: i64) -> Result<Self> {
        if r != 0 && r != -1 {
            return Err(Error::Precondition(format!("rank must be 0 or -1, got {r}")));
        }
        if beta.iter().any(|&x| x < 0) {
            return Err(Error::Precondition(format!("beta not effective: {beta:?}")));
        }
        if r == 0 && beta_is_zero(&beta) {
            return Err(Error::Precondition("torsion class with beta = 0".into()));
        }
        if r == -1 && beta_is_zero(&beta) && n != 0 {
            return Err(Error::Precondition(format!(
                "rank -1 class with beta = 0 must have n = 0, got n = {n}"
            )));
        }
        Ok(NumClass { r, beta, n })
    }

    pub fn torsion(beta: Beta, n: i64) -> Result<Self> {
        Self::new(0, beta, n)
    }

    pub fn pair(beta: Beta, n: i64) -> Result<Self> {
        Self::new(-1, beta, n)
    }

    pub fn is_torsion(&self) -> bool {
        self.r == 0
    }

    /// Sum of classes, without re-checking the class invariants. Used for
    /// block sums whose validity the caller establishes separately.
    pub fn sum_raw<'a>(parts: impl IntoIterator<Item = &'a NumClass>) -> Option<NumClass> {
        let mut it = parts.into_iter();
        let first = it.next()?;
        let mut r = first.r;
        let mut beta = first.beta.clone();
        let mut n = first.n;
        for p in it {
            r += p.r;
            beta = beta_add(&beta, &p.beta);
            n += p.n;
        }
        Some(NumClass { r, beta, n })
    }

    /// Sum of classes checked against the `NumClass` invariants.
    pub fn sum_checked<'a>(parts: impl IntoIterator<Item = &'a NumClass>) -> Result<NumClass> {
        let raw = Self::sum_raw(parts)
            .ok_or_else(|| Error::Precondition("empty class sum".into()))?;
        NumClass::new(raw.r, raw.beta, raw.n)
    }

    /// The dual class `(r, β, −n)`.
    pub fn dual(&self) -> NumClass {
        NumClass { r: self.r, beta: self.beta.clone(), n: -self.n }
    }

    /// Slope of this class under `model`.
    pub fn slope(&self, model: &ConeModel) -> Result<Slope> {
        if self.r == -1 {
            return Ok(Slope::Pair);
        }
        let d = model.deg(&self.beta)?;
        if d == 0 {
            return Err(Error::Precondition("torsion class with beta = 0".into()));
        }
        Ok(Slope::Finite(Rat::new(self.n.into(), d.into())))
    }
}

impl fmt::Display for NumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let beta: Vec<String> = self.beta.iter().map(|b| b.to_string()).collect();
        write!(f, "({},({}),{})", self.r, beta.join(","), self.n)
    }
}

/// Slope of a class: `n/(ω·β)` for torsion, no finite value for rank −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(Rat),
    /// Rank −1 classes share a common leading term and carry no finite slope.
    Pair,
}

/// The toy geometry: degree weights `ω`, the `m(β)` table, and the
/// `N(β)` vanishing bounds for P-tables.
#[derive(Debug, Clone)]
pub struct ConeModel {
    omega: Vec<i64>,
    m_table: BTreeMap<Beta, i64>,
    n_floor_table: BTreeMap<Beta, i64>,
}

impl ConeModel {
    pub fn new(
        omega: Vec<i64>,
        m_table: BTreeMap<Beta, i64>,
        n_floor_table: BTreeMap<Beta, i64>,
    ) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::Config("omega must be nonempty".into()));
        }
        if omega.iter().any(|&w| w <= 0) {
            return Err(Error::Config(format!("omega entries must be positive: {omega:?}")));
        }
        let zero = vec![0; omega.len()];
        if let Some(&m0) = m_table.get(&zero) {
            if m0 != 0 {
                return Err(Error::Config(format!("m(0) must be 0, got {m0}")));
            }
        }
        for b in m_table.keys().chain(n_floor_table.keys()) {
            if b.len() != omega.len() {
                return Err(Error::Config(format!(
                    "table key {b:?} has wrong dimension (rank is {})",
                    omega.len()
                )));
            }
        }
        Ok(ConeModel { omega, m_table, n_floor_table })
    }

    /// Model with `m ≡ 0` and `N ≡ floor` on the whole box below `bound`.
    pub fn with_constant_tables(omega: Vec<i64>, bound: &Beta, floor: i64) -> Result<Self> {
        let mut m = BTreeMap::new();
        let mut f = BTreeMap::new();
        for b in beta_box(bound) {
            m.insert(b.clone(), 0);
            f.insert(b.clone(), if beta_is_zero(&b) { 0 } else { floor });
        }
        ConeModel::new(omega, m, f)
    }

    pub fn rank(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[i64] {
        &self.omega
    }

    /// The degree `ω·β`.
    pub fn deg(&self, beta: &Beta) -> Result<i64> {
        if beta.len() != self.omega.len() {
            return Err(Error::Config(format!(
                "beta {beta:?} has {} components, rank is {}",
                beta.len(),
                self.omega.len()
            )));
        }
        if beta.iter().any(|&x| x < 0) {
            return Err(Error::Config(format!("beta not effective: {beta:?}")));
        }
        Ok(self.omega.iter().zip(beta).map(|(w, b)| w * b).sum())
    }

    pub fn m(&self, beta: &Beta) -> Result<i64> {
        if beta_is_zero(beta) {
            return Ok(0);
        }
        self.m_table
            .get(beta)
            .copied()
            .ok_or_else(|| Error::MissingEntry(format!("m({beta:?})")))
    }

    /// The vanishing bound `N(β)`; `N(0) = 0` by the pair convention.
    pub fn n_floor(&self, beta: &Beta) -> Result<i64> {
        if beta_is_zero(beta) {
            return Ok(0);
        }
        self.n_floor_table
            .get(beta)
            .copied()
            .ok_or_else(|| Error::MissingEntry(format!("N({beta:?})")))
    }
}

/// The Euler pairing `χ(v, w) = r_v·n_w − r_w·n_v`.
///
/// Torsion against torsion pairs to 0; a torsion class of Euler
/// characteristic `n` pairs with the rank −1 class to `n`.
pub fn euler_pairing(v: &NumClass, w: &NumClass) -> i64 {
    v.r * w.n - w.r * v.n
}

/// The limit slope bound `μ_{n,β} = max over 0 ≠ β′ ≤ β of (n − m(β−β′))/(ω·β′)`.
pub fn mu_n_beta(n: i64, beta: &Beta, model: &ConeModel) -> Result<Rat> {
    if beta_is_zero(beta) {
        return Err(Error::Domain("mu_{n,beta} undefined at beta = 0".into()));
    }
    let mut best: Option<Rat> = None;
    for bp in beta_box(beta) {
        if beta_is_zero(&bp) {
            continue;
        }
        let num = n - model.m(&beta_sub(beta, &bp))?;
        let den = model.deg(&bp)?;
        let val = Rat::new(num.into(), den.into());
        if best.as_ref().map_or(true, |b| val > *b) {
            best = Some(val);
        }
    }
    Ok(best.expect("nonzero beta has at least one subclass"))
}

/// All torsion classes `(0, β′, n)` with `0 < β′ ≤ bound` and slope in
/// `[0, −2k]`, the parts admitted by the decomposition pattern.
pub fn torsion_parts(bound: &Beta, k: &StabilityParam, model: &ConeModel) -> Result<Vec<NumClass>> {
    let top = -rat_int(2) * k.value();
    let mut out = Vec::new();
    for b in beta_box(bound) {
        if beta_is_zero(&b) {
            continue;
        }
        let d = model.deg(&b)?;
        let n_hi = floor_i64(&(top.clone() * rat_int(d)));
        for n in 0..=n_hi {
            out.push(NumClass { r: 0, beta: b.clone(), n });
        }
    }
    Ok(out)
}

/// Every ordered tuple `(v_1, …, v_l)` summing to `v` with exactly one rank −1
/// entry, the rest torsion with `β ≠ 0` and `0 ≤ μ ≤ −2k`. Finite,
/// duplicate-free, in lexicographic order.
pub fn decompositions(
    v: &NumClass,
    k: &StabilityParam,
    model: &ConeModel,
) -> Result<Vec<Vec<NumClass>>> {
    if v.r != -1 {
        return Err(Error::Precondition(format!("decompositions needs rank -1, got {v}")));
    }
    if !k.is_negative() {
        return Err(Error::Precondition("decompositions needs k < 0".into()));
    }
    let parts = torsion_parts(&v.beta, k, model)?;
    let mut tuples = Vec::new();
    // Ordered torsion sequences within the beta budget, then the rank −1
    // remainder inserted at each position.
    let mut seq: Vec<NumClass> = Vec::new();
    collect_torsion_seqs(&parts, &v.beta, &mut seq, &mut |seq| {
        let spent = NumClass::sum_raw(seq.iter());
        let (beta_used, n_used) = match &spent {
            Some(s) => (s.beta.clone(), s.n),
            None => (vec![0; v.beta.len()], 0),
        };
        let beta_e = beta_sub(&v.beta, &beta_used);
        let n_e = v.n - n_used;
        if beta_is_zero(&beta_e) && n_e != 0 {
            return;
        }
        let pair = NumClass { r: -1, beta: beta_e, n: n_e };
        for e in 0..=seq.len() {
            let mut tuple = seq.to_vec();
            tuple.insert(e, pair.clone());
            tuples.push(tuple);
        }
    });
    tuples.sort();
    Ok(tuples)
}

fn collect_torsion_seqs(
    parts: &[NumClass],
    budget: &Beta,
    seq: &mut Vec<NumClass>,
    emit: &mut impl FnMut(&[NumClass]),
) {
    emit(seq);
    for p in parts {
        if beta_le(&p.beta, budget) {
            let rest = beta_sub(budget, &p.beta);
            seq.push(p.clone());
            collect_torsion_seqs(parts, &rest, seq, emit);
            seq.pop();
        }
    }
}
