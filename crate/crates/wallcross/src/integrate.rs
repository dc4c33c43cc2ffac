//! The Lie algebra on class symbols, labeled-tree sums, and the specialized
//! wall-crossing formulas relating the N, L, and P invariant tables.

use std::collections::BTreeMap;

use crate::cone::{
    beta_box, beta_is_zero, beta_le, beta_sub, decompositions, euler_pairing, Beta, ConeModel,
    NumClass,
};
use crate::coeff::{surjections, u_coeff, unique_rank_index, usat_satisfied};
use crate::error::{Error, Result};
use crate::rat::{factorial, rat, rat_int, sign_pow, Rat};
use crate::stability::StabilityParam;

/// An element of the Lie algebra spanned by basis symbols `c_v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<NumClass, Rat>,
}

impl LieElement {
    pub fn basis(v: NumClass) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(v, rat_int(1));
        LieElement { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (NumClass, Rat)>) -> Self {
        let mut out = LieElement::default();
        for (v, c) in terms {
            out.add_term(v, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<NumClass, Rat> {
        &self.terms
    }

    fn add_term(&mut self, v: NumClass, c: Rat) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(v) {
            Entry::Vacant(e) => {
                if c != rat_int(0) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == rat_int(0) {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> LieElement {
        LieElement::from_terms(
            self.terms
                .iter()
                .map(|(v, x)| (v.clone(), x.clone() * c)),
        )
    }

    /// The bracket `[c_v, c_w] = χ(v, w)·c_{v+w}`, extended bilinearly.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        let mut out = LieElement::default();
        for (v, a) in &self.terms {
            for (w, b) in &other.terms {
                let chi = euler_pairing(v, w);
                if chi == 0 {
                    continue;
                }
                let sum = NumClass::sum_checked([v, w])?;
                out.add_term(sum, rat_int(chi) * a * b);
            }
        }
        Ok(out)
    }
}

/// All labeled trees on `{0..l-1}` as edge lists `(i, j)` with `i < j`,
/// decoded from Pruefer sequences; `l^{l-2}` of them.
pub fn labeled_trees(l: usize) -> Vec<Vec<(usize, usize)>> {
    match l {
        0 => vec![],
        1 => vec![vec![]],
        2 => vec![vec![(0, 1)]],
        _ => {
            let mut out = Vec::new();
            let mut seq = vec![0usize; l - 2];
            loop {
                out.push(pruefer_decode(&seq, l));
                // odometer over sequences in {0..l-1}^{l-2}
                let mut i = 0;
                loop {
                    if i == seq.len() {
                        return out;
                    }
                    seq[i] += 1;
                    if seq[i] < l {
                        break;
                    }
                    seq[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

fn pruefer_decode(seq: &[usize], l: usize) -> Vec<(usize, usize)> {
    let mut deg = vec![1usize; l];
    for &s in seq {
        deg[s] += 1;
    }
    let mut edges = Vec::with_capacity(l - 1);
    let push = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
        edges.push((a.min(b), a.max(b)));
    };
    for &s in seq {
        let leaf = (0..l).find(|&i| deg[i] == 1).expect("leaf exists");
        push(leaf, s, &mut edges);
        deg[leaf] = 0;
        deg[s] -= 1;
    }
    let rest: Vec<usize> = (0..l).filter(|&i| deg[i] == 1).collect();
    push(rest[0], rest[1], &mut edges);
    edges.sort();
    edges
}

/// Which of the three invariant families a table stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    N,
    L,
    P,
}

/// An exact invariant table: `N` stored periodically (one period of length
/// `d = ω·β` per class), `L` and `P` as finite support windows per class.
#[derive(Debug, Clone)]
pub struct InvariantTable {
    kind: TableKind,
    periods: BTreeMap<Beta, Vec<Rat>>,
    windows: BTreeMap<Beta, BTreeMap<i64, Rat>>,
}

impl InvariantTable {
    /// An N-table from one period of values per β (length must be `ω·β`).
    pub fn periodic(entries: BTreeMap<Beta, Vec<Rat>>, model: &ConeModel) -> Result<Self> {
        for (beta, values) in &entries {
            let d = model.deg(beta)?;
            if beta_is_zero(beta) {
                return Err(Error::Config("N-table indexed by beta = 0".into()));
            }
            if values.len() != d as usize {
                return Err(Error::Config(format!(
                    "N period for beta {beta:?} has {} values, needs d = {d}",
                    values.len()
                )));
            }
        }
        Ok(InvariantTable { kind: TableKind::N, periods: entries, windows: BTreeMap::new() })
    }

    /// An L- or P-table from finite support windows per β.
    pub fn window(kind: TableKind, entries: BTreeMap<Beta, BTreeMap<i64, Rat>>) -> Result<Self> {
        if kind == TableKind::N {
            return Err(Error::Config("N-tables are periodic, not windowed".into()));
        }
        Ok(InvariantTable { kind, periods: BTreeMap::new(), windows: entries })
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn periods(&self) -> &BTreeMap<Beta, Vec<Rat>> {
        &self.periods
    }

    pub fn windows(&self) -> &BTreeMap<Beta, BTreeMap<i64, Rat>> {
        &self.windows
    }

    /// The table value at `(n, β)`.
    ///
    /// Undeclared β is an input error; an absent `n` inside a declared β
    /// reads as 0 (finite support). P reads 0 below `N(β)`, and at `β = 0`
    /// the pair conventions apply: `P_{0,0} = 1`, `L_{0,0} = 1` unless
    /// overridden, both vanishing for `n ≠ 0`.
    pub fn value(&self, n: i64, beta: &Beta, model: &ConeModel) -> Result<Rat> {
        match self.kind {
            TableKind::N => {
                let values = self.periods.get(beta).ok_or_else(|| {
                    Error::MissingEntry(format!("N table has no class beta = {beta:?} (n = {n})"))
                })?;
                let d = values.len() as i64;
                Ok(values[n.rem_euclid(d) as usize].clone())
            }
            TableKind::L | TableKind::P => {
                if beta_is_zero(beta) {
                    if let Some(w) = self.windows.get(beta) {
                        return Ok(w.get(&n).cloned().unwrap_or_else(|| rat_int(0)));
                    }
                    return Ok(if n == 0 { rat_int(1) } else { rat_int(0) });
                }
                let w = self.windows.get(beta).ok_or_else(|| {
                    Error::MissingEntry(format!(
                        "{:?} table has no class beta = {beta:?} (n = {n})",
                        self.kind
                    ))
                })?;
                if self.kind == TableKind::P && n < model.n_floor(beta)? {
                    return Ok(rat_int(0));
                }
                Ok(w.get(&n).cloned().unwrap_or_else(|| rat_int(0)))
            }
        }
    }

    /// Checks the table-family invariants: N symmetric and periodic, L
    /// symmetric, P vanishing below its floor.
    pub fn check_invariants(&self, model: &ConeModel) -> Result<()> {
        match self.kind {
            TableKind::N => {
                for (beta, values) in &self.periods {
                    let d = values.len();
                    for j in 1..d {
                        if values[j] != values[d - j] {
                            return Err(Error::Config(format!(
                                "N not symmetric at beta {beta:?}, residue {j}"
                            )));
                        }
                    }
                }
            }
            TableKind::L => {
                for (beta, w) in &self.windows {
                    for (&n, val) in w {
                        let mirror = w.get(&-n).cloned().unwrap_or_else(|| rat_int(0));
                        if *val != mirror {
                            return Err(Error::Config(format!(
                                "L not symmetric at beta {beta:?}, n = {n}"
                            )));
                        }
                    }
                }
            }
            TableKind::P => {
                for (beta, w) in &self.windows {
                    if beta_is_zero(beta) {
                        continue;
                    }
                    let floor = model.n_floor(beta)?;
                    for (&n, val) in w {
                        if n < floor && *val != rat_int(0) {
                            return Err(Error::Config(format!(
                                "P nonzero below its floor at beta {beta:?}, n = {n}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The tree-sum transform: Σ over ordered decompositions of `v` and labeled
/// trees of `(1/2^{l−1})·U·∏_edges χ·∏ J`.
pub fn j_transform(
    v: &NumClass,
    j_table: &BTreeMap<NumClass, Rat>,
    k_z: &StabilityParam,
    k_zp: &StabilityParam,
    model: &ConeModel,
) -> Result<Rat> {
    let mut total = rat_int(0);
    for tuple in decompositions(v, k_z, model)? {
        let l = tuple.len();
        let u = u_coeff(&tuple, k_z, k_zp, model)?;
        if u == rat_int(0) {
            continue;
        }
        let mut tree_sum = 0i64;
        for tree in labeled_trees(l) {
            let mut prod = 1i64;
            for &(i, j) in &tree {
                prod *= euler_pairing(&tuple[i], &tuple[j]);
                if prod == 0 {
                    break;
                }
            }
            tree_sum += prod;
        }
        if tree_sum == 0 {
            continue;
        }
        let mut j_prod = rat_int(1);
        for part in &tuple {
            let val = j_table
                .get(part)
                .ok_or_else(|| Error::MissingEntry(format!("J table has no class {part}")))?;
            j_prod *= val;
        }
        let half_pow = rat(1, 2).pow((l - 1) as i32);
        total += half_pow * u * rat_int(tree_sum) * j_prod;
    }
    Ok(total)
}

fn torsion_mu(c: &NumClass, model: &ConeModel) -> Result<Rat> {
    Ok(Rat::new(c.n.into(), model.deg(&c.beta)?.into()))
}

/// The star-path wall-crossing sum: `L_{n,β}` at `k′ = 0` from an
/// `L(σ_k)`-table and an N-table, over slope-patterned decompositions with
/// the (Usat) surjection weights.
pub fn l_wallcross(
    n: i64,
    beta: &Beta,
    k: &StabilityParam,
    l_sigma: &InvariantTable,
    n_tab: &InvariantTable,
    model: &ConeModel,
) -> Result<Rat> {
    if !k.is_negative() {
        return Err(Error::Precondition("l_wallcross needs k < 0".into()));
    }
    if beta_is_zero(beta) {
        // only the rank -1 class (−1,0,0) exists over beta = 0
        return if n == 0 {
            l_sigma.value(0, beta, model)
        } else {
            Ok(rat_int(0))
        };
    }
    let v = NumClass::pair(beta.clone(), n)?;
    let threshold = k.threshold();
    let mut total = rat_int(0);
    'tuple: for tuple in decompositions(&v, k, model)? {
        let l = tuple.len();
        let e = unique_rank_index(&tuple)?;
        let mut mus: Vec<Option<Rat>> = Vec::with_capacity(l);
        for (i, c) in tuple.iter().enumerate() {
            if i == e {
                mus.push(None);
            } else {
                if c.n == 0 {
                    continue 'tuple; // the ∏ n_i factor vanishes
                }
                mus.push(Some(torsion_mu(c, model)?));
            }
        }
        // ascending slopes before e, descending after (bounds vs -2k are
        // already enforced by the decomposition enumeration)
        for i in 1..e {
            if mus[i - 1] > mus[i] {
                continue 'tuple;
            }
        }
        for i in e + 2..l {
            if mus[i - 1] < mus[i] {
                continue 'tuple;
            }
        }
        let mut inner = rat_int(0);
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
                // (−1)^{ψ(e)−e} with both 1-based; parities add
                inner += sign_pow(psi.block_of(e) + e) * weight;
            }
        }
        if inner == rat_int(0) {
            continue;
        }
        let mut inputs = l_sigma.value(tuple[e].n, &tuple[e].beta, model)?;
        for (i, c) in tuple.iter().enumerate() {
            if i == e {
                continue;
            }
            inputs *= rat_int(c.n) * n_tab.value(c.n, &c.beta, model)?;
        }
        if inputs == rat_int(0) {
            continue;
        }
        total += rat(-1, 2).pow((l - 1) as i32) * inner * inputs;
    }
    Ok(total)
}

/// A `k` below every (takek) bound for `(n, β)`, making `L(σ_k) = P` usable
/// as the `l_wallcross` input.
pub fn takek_param(n: i64, beta: &Beta, model: &ConeModel) -> Result<StabilityParam> {
    let mut bound: Option<Rat> = None;
    for bp in beta_box(beta) {
        if beta_is_zero(&bp) {
            continue;
        }
        let b1 = -rat(1, 2) * rat_int(n - model.n_floor(&bp)?);
        let b2 = -rat(1, 2) * crate::cone::mu_n_beta(n, &bp, model)?;
        for b in [b1, b2] {
            if bound.as_ref().map_or(true, |x| b < *x) {
                bound = Some(b);
            }
        }
    }
    let k = bound.map_or(rat_int(-1), |b| b - rat_int(1));
    // keep it strictly negative even when the bounds sit above zero
    Ok(StabilityParam::new(if k < rat_int(0) { k } else { rat_int(-1) }))
}

/// Weight of one ascending torsion sequence in the k-free formula:
/// `(−1/2)^{len} / ∏ (run length)! · ∏ n_i N_{n_i,β_i}`.
fn seq_weight(
    seq: &[NumClass],
    n_tab: &InvariantTable,
    model: &ConeModel,
) -> Result<Rat> {
    let mut w = rat(-1, 2).pow(seq.len() as i32);
    let mut run = 1usize;
    for i in 0..seq.len() {
        let here = torsion_mu(&seq[i], model)?;
        let next = if i + 1 < seq.len() {
            Some(torsion_mu(&seq[i + 1], model)?)
        } else {
            None
        };
        if next.as_ref() == Some(&here) {
            run += 1;
        } else {
            w /= factorial(run);
            run = 1;
        }
        w *= rat_int(seq[i].n) * n_tab.value(seq[i].n, &seq[i].beta, model)?;
    }
    Ok(w)
}

/// Accumulated weights of all ascending positive-slope torsion sequences,
/// keyed by their class sum `(β, n)`.
fn ascending_weights(
    beta_bound: &Beta,
    n_budget: i64,
    n_tab: &InvariantTable,
    model: &ConeModel,
) -> Result<BTreeMap<(Beta, i64), Rat>> {
    let mut parts: Vec<(Rat, NumClass)> = Vec::new();
    for b in beta_box(beta_bound) {
        if beta_is_zero(&b) {
            continue;
        }
        for n in 1..=n_budget {
            let c = NumClass { r: 0, beta: b.clone(), n };
            parts.push((torsion_mu(&c, model)?, c));
        }
    }
    let zero_key = (vec![0; beta_bound.len()], 0);
    let mut acc: BTreeMap<(Beta, i64), Rat> = BTreeMap::new();
    acc.insert(zero_key, rat_int(1));
    let mut seq: Vec<NumClass> = Vec::new();
    fn recurse(
        parts: &[(Rat, NumClass)],
        beta_left: &Beta,
        n_left: i64,
        min_mu: Option<&Rat>,
        seq: &mut Vec<NumClass>,
        acc: &mut BTreeMap<(Beta, i64), Rat>,
        n_tab: &InvariantTable,
        model: &ConeModel,
    ) -> Result<()> {
        for (mu, p) in parts {
            if min_mu.map_or(false, |m| mu < m) {
                continue;
            }
            if p.n > n_left || !beta_le(&p.beta, beta_left) {
                continue;
            }
            seq.push(p.clone());
            let sum = NumClass::sum_raw(seq.iter()).expect("nonempty");
            let w = seq_weight(seq, n_tab, model)?;
            if w != rat_int(0) {
                *acc.entry((sum.beta.clone(), sum.n))
                    .or_insert_with(|| rat_int(0)) += w;
            }
            recurse(
                parts,
                &beta_sub(beta_left, &p.beta),
                n_left - p.n,
                Some(mu),
                seq,
                acc,
                n_tab,
                model,
            )?;
            seq.pop();
        }
        Ok(())
    }
    recurse(&parts, beta_bound, n_budget, None, &mut seq, &mut acc, n_tab, model)?;
    Ok(acc)
}

/// The k-free formula for a whole window: `L_{n,β}` for every `β ≤ cutoff`
/// and `n_lo ≤ n ≤ n_hi` from P- and N-tables.
pub fn l_from_pn_window(
    beta_cutoff: &Beta,
    n_lo: i64,
    n_hi: i64,
    p_tab: &InvariantTable,
    n_tab: &InvariantTable,
    model: &ConeModel,
) -> Result<BTreeMap<(Beta, i64), Rat>> {
    // every torsion part has n_i >= 1, so the torsion budget is bounded by
    // n_hi minus the smallest P-floor in the box
    let mut min_floor = 0i64;
    for b in beta_box(beta_cutoff) {
        min_floor = min_floor.min(model.n_floor(&b)?);
    }
    let n_budget = (n_hi - min_floor).max(0);
    let g = ascending_weights(beta_cutoff, n_budget, n_tab, model)?;
    // pair of independent ascending chains (left of e, reversed right of e)
    let mut h: BTreeMap<(Beta, i64), Rat> = BTreeMap::new();
    for ((ba, na), wa) in &g {
        for ((bb, nb), wb) in &g {
            let key_beta = crate::cone::beta_add(ba, bb);
            if !beta_le(&key_beta, beta_cutoff) {
                continue;
            }
            let w = wa.clone() * wb;
            if w == rat_int(0) {
                continue;
            }
            *h.entry((key_beta, na + nb)).or_insert_with(|| rat_int(0)) += w;
        }
    }
    // the rank -1 remainder carries (−1/2)^0 times its P value
    let mut out = BTreeMap::new();
    for beta in beta_box(beta_cutoff) {
        for n in n_lo..=n_hi {
            let mut total = rat_int(0);
            for ((bt, nt), w) in &h {
                if !beta_le(bt, &beta) {
                    continue;
                }
                let be = beta_sub(&beta, bt);
                let ne = n - nt;
                if beta_is_zero(&be) && ne != 0 {
                    continue;
                }
                // the chain-pair weight carries (−1/2)^{l−1} for the full tuple
                let p = p_tab.value(ne, &be, model)?;
                if p == rat_int(0) {
                    continue;
                }
                total += w.clone() * p;
            }
            if total != rat_int(0) {
                out.insert((beta.clone(), n), total);
            }
        }
    }
    Ok(out)
}

/// The k-free formula for a single `(n, β)`.
pub fn l_from_pn(
    n: i64,
    beta: &Beta,
    p_tab: &InvariantTable,
    n_tab: &InvariantTable,
    model: &ConeModel,
) -> Result<Rat> {
    let table = l_from_pn_window(beta, n, n, p_tab, n_tab, model)?;
    Ok(table
        .get(&(beta.clone(), n))
        .cloned()
        .unwrap_or_else(|| rat_int(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ConeModel {
        ConeModel::with_constant_tables(vec![1], &vec![4], 0).unwrap()
    }

    /// N ≡ a at every beta ≤ (4).
    fn n_const(a: i64, m: &ConeModel) -> InvariantTable {
        let mut entries = BTreeMap::new();
        for b in beta_box(&vec![4]) {
            if beta_is_zero(&b) {
                continue;
            }
            let d = m.deg(&b).unwrap() as usize;
            entries.insert(b, vec![rat_int(a); d]);
        }
        InvariantTable::periodic(entries, m).unwrap()
    }

    /// P with P_{n,(b)} = a·n + c·[n=0] for n ≥ 0, matching N ≡ a at d=1.
    fn p_micro(a: i64, c: i64) -> InvariantTable {
        let mut entries = BTreeMap::new();
        for b in 1..=4i64 {
            let mut w = BTreeMap::new();
            for n in 0..=40i64 {
                let val = rat_int(a * n) + if n == 0 { rat_int(c) } else { rat_int(0) };
                if val != rat_int(0) {
                    w.insert(n, val);
                }
            }
            entries.insert(vec![b], w);
        }
        InvariantTable::window(TableKind::P, entries).unwrap()
    }

    #[test]
    fn tree_counts_follow_cayley() {
        assert_eq!(labeled_trees(1), vec![Vec::new()]);
        assert_eq!(labeled_trees(2).len(), 1);
        assert_eq!(labeled_trees(3).len(), 3);
        assert_eq!(labeled_trees(4).len(), 16);
        for t in labeled_trees(4) {
            assert_eq!(t.len(), 3);
            for &(i, j) in &t {
                assert!(i < j && j < 4);
            }
        }
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi() {
        let t1 = LieElement::basis(NumClass::torsion(vec![1], 2).unwrap());
        let t2 = LieElement::basis(NumClass::torsion(vec![2], -1).unwrap());
        let t3 = LieElement::basis(NumClass::torsion(vec![1], -1).unwrap());
        let e = LieElement::basis(NumClass::pair(vec![0], 0).unwrap());
        // only one operand may carry the rank -1 class: iterated brackets of
        // two such leave the r in {0, -1} pattern
        let x = t1.add(&t2.scale(&rat(1, 3)));
        let y = t3.add(&t1.scale(&rat_int(2)));
        let z = e.scale(&rat(-2, 5)).add(&t2);
        let xz = x.bracket(&z).unwrap();
        let zx = z.bracket(&x).unwrap();
        assert_ne!(xz, LieElement::default());
        assert_eq!(xz, zx.scale(&rat_int(-1)));
        let jac = x
            .bracket(&y.bracket(&z).unwrap())
            .unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap())
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap());
        assert_eq!(jac, LieElement::default());
    }

    #[test]
    fn invariant_table_lookup_rules() {
        let m = model();
        let n_tab = n_const(3, &m);
        assert_eq!(n_tab.value(5, &vec![2], &m).unwrap(), rat_int(3));
        assert!(n_tab.value(0, &vec![5], &m).is_err());
        let p = p_micro(2, 7);
        assert_eq!(p.value(0, &vec![1], &m).unwrap(), rat_int(7));
        assert_eq!(p.value(3, &vec![1], &m).unwrap(), rat_int(6));
        assert_eq!(p.value(-1, &vec![1], &m).unwrap(), rat_int(0));
        // beta = 0 conventions
        assert_eq!(p.value(0, &vec![0], &m).unwrap(), rat_int(1));
        assert_eq!(p.value(2, &vec![0], &m).unwrap(), rat_int(0));
    }

    #[test]
    fn micro_model_l_from_pn() {
        let m = model();
        let (a, c) = (3, 5);
        let n_tab = n_const(a, &m);
        let p = p_micro(a, c);
        for n in -3..=6 {
            let want = if n == 0 { rat_int(c) } else { rat_int(0) };
            assert_eq!(l_from_pn(n, &vec![1], &p, &n_tab, &m).unwrap(), want, "n = {n}");
        }
    }

    #[test]
    fn micro_model_l_wallcross_matches() {
        let m = model();
        let (a, c) = (2, -3);
        let n_tab = n_const(a, &m);
        let p = p_micro(a, c);
        for n in -2..=4 {
            let k = takek_param(n, &vec![1], &m).unwrap();
            let via_wall = l_wallcross(n, &vec![1], &k, &p, &n_tab, &m).unwrap();
            let via_free = l_from_pn(n, &vec![1], &p, &n_tab, &m).unwrap();
            assert_eq!(via_wall, via_free, "n = {n}");
        }
    }

    #[test]
    fn l_wallcross_constant_within_a_chamber() {
        let m = model();
        let n_tab = n_const(1, &m);
        let p = p_micro(1, 4);
        // both k in the chamber (-9/2, -4): same tuple set, same outcomes
        let k1 = StabilityParam::new(rat(-17, 4));
        let k2 = StabilityParam::new(rat(-22, 5));
        for n in 0..=4 {
            assert_eq!(
                l_wallcross(n, &vec![2], &k1, &p, &n_tab, &m).unwrap(),
                l_wallcross(n, &vec![2], &k2, &p, &n_tab, &m).unwrap()
            );
        }
    }

    #[test]
    fn j_transform_reduces_to_j_for_trivial_patterns() {
        let m = model();
        let k = StabilityParam::new(rat_int(-1));
        let kz = StabilityParam::new(rat(-1, 2));
        let v = NumClass::pair(vec![0], 0).unwrap();
        let mut j = BTreeMap::new();
        j.insert(v.clone(), rat(7, 3));
        assert_eq!(j_transform(&v, &j, &k, &kz, &m).unwrap(), rat(7, 3));
    }
}
