//! The acceptance suite: nine exactness criteria spanning every module,
//! runnable from the CLI (`selftest`) and from the integration tests. All
//! randomized sweeps are seeded, so repeated runs render byte-identical
//! reports.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::{
    elem_identity, s_coeff, u_coeff, u_coeff_specialized, unique_rank_index,
};
use crate::cone::{beta_box, beta_is_zero, decompositions, Beta, ConeModel, NumClass};
use crate::error::Result;
use crate::hall::{
    delta_from_eps, eps_from_delta, invert_delta, transform_delta, transform_eps, GeneratorSet,
    HallExpr, Sym,
};
use crate::integrate::{
    j_transform, l_from_pn, l_wallcross, takek_param, InvariantTable, TableKind,
};
use crate::rat::{factorial, fmt_rat, rat, rat_int, sign_pow, Rat};
use crate::series::{
    expan_build, n_closed_form, q_symmetry_check, series_matches_expansion, Coef, ConeSeries,
    LaurentPoly, SeriesMode,
};
use crate::stability::{check_dominance, walls, StabilityParam};

/// One criterion's outcome.
#[derive(Debug, Clone)]
pub struct Section {
    pub name: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub detail: Option<String>,
}

impl Section {
    fn line(&self, idx: usize) -> String {
        let status = if self.pass { "pass" } else { "FAIL" };
        let mut s = format!(
            "criterion {idx}: {} ... {status} ({} checks)",
            self.name, self.checks
        );
        if let Some(d) = &self.detail {
            s.push_str(&format!("\n  {d}"));
        }
        s
    }
}

/// The rendered suite outcome.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub sections: Vec<Section>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            out.push_str(&s.line(i + 1));
            out.push('\n');
        }
        let passed = self.sections.iter().filter(|s| s.pass).count();
        let checks: usize = self.sections.iter().map(|s| s.checks).sum();
        out.push_str(&format!(
            "selftest: {passed}/{} criteria passed, {checks} checks\n",
            self.sections.len()
        ));
        out
    }
}

fn section(name: &'static str, checks: usize, fails: Vec<String>) -> Section {
    Section {
        name,
        pass: fails.is_empty(),
        checks,
        detail: fails.into_iter().next(),
    }
}

// ---------------------------------------------------------------- criterion 1

/// Surjection identity: `elem_identity(l) = 1/l!` for `1 ≤ l ≤ 7`.
pub fn criterion_surjection() -> Result<Section> {
    let mut fails = Vec::new();
    for l in 1..=7usize {
        let got = elem_identity(l);
        let want = factorial(l).recip();
        if got != want {
            fails.push(format!("l = {l}: got {}, want {}", fmt_rat(&got), fmt_rat(&want)));
        }
    }
    Ok(section("surjection identity equals 1/l! for l <= 7", 7, fails))
}

// ---------------------------------------------------------------- criterion 2

fn torsion_beta_seqs(parts: usize, max_sum: i64) -> Vec<Vec<i64>> {
    if parts == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=max_sum {
        for rest in torsion_beta_seqs(parts - 1, max_sum - first) {
            let mut seq = vec![first];
            seq.extend(rest);
            out.push(seq);
        }
    }
    out
}

fn n_assignments(slots: usize, bound: i64) -> Vec<Vec<i64>> {
    if slots == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for n in -bound..=bound {
        for rest in n_assignments(slots - 1, bound) {
            let mut v = vec![n];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Every pattern tuple (one rank −1 entry, torsion rest) with total β ≤
/// `beta_bound` and all |n_i| ≤ `n_bound`, ρ = 1.
fn condition1_tuples(beta_bound: i64, n_bound: i64, max_torsion: usize) -> Vec<Vec<NumClass>> {
    let mut out = Vec::new();
    for t in 0..=max_torsion {
        for betas in torsion_beta_seqs(t, beta_bound) {
            let bt: i64 = betas.iter().sum();
            for be in 0..=(beta_bound - bt) {
                for ns in n_assignments(t + 1, n_bound) {
                    for e in 0..=t {
                        // rank entry at position e, n values assigned in order
                        let rank = match NumClass::new(-1, vec![be], ns[e]) {
                            Ok(c) => c,
                            Err(_) => continue, // (-1, 0, n != 0) is not a class
                        };
                        let mut tuple = Vec::with_capacity(t + 1);
                        let mut bi = betas.iter();
                        for (i, &n) in ns.iter().enumerate() {
                            if i == e {
                                tuple.push(rank.clone());
                            } else {
                                tuple.push(
                                    NumClass::torsion(vec![*bi.next().unwrap()], n).unwrap(),
                                );
                            }
                        }
                        out.push(tuple);
                    }
                }
            }
        }
    }
    out
}

fn slope(c: &NumClass, model: &ConeModel) -> Result<Rat> {
    Ok(Rat::new(c.n.into(), model.deg(&c.beta)?.into()))
}

/// The weak slope pattern `0 ≤ μ_1 ≤ … ≤ μ_{e−1} ≤ −2k ≥ μ_{e+1} ≥ … ≥ 0`.
fn onlyif_holds(tuple: &[NumClass], e: usize, k: &StabilityParam, model: &ConeModel) -> Result<bool> {
    let th = k.threshold();
    let mut prev: Option<Rat> = None;
    for c in &tuple[..e] {
        let mu = slope(c, model)?;
        if mu < rat_int(0) || mu > th || prev.map_or(false, |p| p > mu) {
            return Ok(false);
        }
        prev = Some(mu);
    }
    let mut prev: Option<Rat> = None;
    for c in &tuple[e + 1..] {
        let mu = slope(c, model)?;
        if mu < rat_int(0) || mu > th || prev.map_or(false, |p| p < mu) {
            return Ok(false);
        }
        prev = Some(mu);
    }
    Ok(true)
}

/// The strict pattern `0 < μ_1 ≤ … ≤ μ_{e−1} ≤ −2k > μ_{e+1} > … > μ_l ≥ 0`.
fn muor_holds(tuple: &[NumClass], e: usize, k: &StabilityParam, model: &ConeModel) -> Result<bool> {
    let th = k.threshold();
    let mut prev: Option<Rat> = None;
    for c in &tuple[..e] {
        let mu = slope(c, model)?;
        if mu <= rat_int(0) || mu > th || prev.map_or(false, |p| p > mu) {
            return Ok(false);
        }
        prev = Some(mu);
    }
    let mut prev: Option<Rat> = None;
    for c in &tuple[e + 1..] {
        let mu = slope(c, model)?;
        if mu < rat_int(0) || mu >= th || prev.map_or(false, |p| p <= mu) {
            return Ok(false);
        }
        prev = Some(mu);
    }
    Ok(true)
}

/// Coefficient oracles: U against its specialization, the slope-pattern
/// vanishing, and the S-coefficient lemmas, on an exhaustive small sweep.
pub fn criterion_coefficients() -> Result<Section> {
    let model = ConeModel::with_constant_tables(vec![1], &vec![3], 0)?;
    let k_zero = StabilityParam::new(rat_int(0));
    let mut checks = 0usize;
    let mut fails = Vec::new();
    for k in [StabilityParam::new(rat_int(-1)), StabilityParam::new(rat(-3, 2))] {
        for tuple in condition1_tuples(3, 4, 3) {
            let e = unique_rank_index(&tuple)?;
            let u = u_coeff(&tuple, &k, &k_zero, &model)?;
            checks += 1;
            if !onlyif_holds(&tuple, e, &k, &model)? {
                if u != rat_int(0) {
                    fails.push(format!(
                        "U nonzero off the slope pattern: k = {}, tuple #{e}",
                        fmt_rat(k.value())
                    ));
                }
            } else if tuple.iter().enumerate().all(|(i, c)| i == e || c.n != 0) {
                let special = u_coeff_specialized(&tuple, &k, &model)?;
                if u != special {
                    fails.push(format!(
                        "U = {} but specialization gives {} (k = {})",
                        fmt_rat(&u),
                        fmt_rat(&special),
                        fmt_rat(k.value())
                    ));
                }
            }
            let s = s_coeff(&tuple, &k, &k_zero, &model)?;
            checks += 1;
            let muor = muor_holds(&tuple, e, &k, &model)?;
            if muor && rat_int(s) != sign_pow(e) {
                fails.push(format!("S = {s} under the strict pattern, want (-1)^{e}"));
            }
            if s != 0 && !muor {
                fails.push(format!("S = {s} nonzero off the strict pattern"));
            }
        }
        // all-torsion tuples: S = 1 for a single class, 0 otherwise
        for t in 1..=3usize {
            for betas in torsion_beta_seqs(t, 3) {
                for ns in n_assignments(t, 4) {
                    let tuple: Vec<NumClass> = betas
                        .iter()
                        .zip(&ns)
                        .map(|(&b, &n)| NumClass::torsion(vec![b], n).unwrap())
                        .collect();
                    let s = s_coeff(&tuple, &k, &k_zero, &model)?;
                    checks += 1;
                    let want = if t == 1 { 1 } else { 0 };
                    if s != want {
                        fails.push(format!("all-torsion S = {s}, want {want} (l = {t})"));
                    }
                }
            }
        }
    }
    Ok(section(
        "coefficient oracles: U vs specialization, pattern vanishing, S lemmas",
        checks,
        fails,
    ))
}

// ---------------------------------------------------------------- criterion 3

/// Hall round trips: δ/ε block inversion, transform ∘ invert across one
/// wall, and the equal-parameter identity forcing `U({v}) = 1`.
pub fn criterion_hall() -> Result<Section> {
    let model = ConeModel::with_constant_tables(vec![1], &vec![4], 0)?;
    let k = StabilityParam::new(rat_int(-1));
    let mut checks = 0usize;
    let mut fails = Vec::new();

    // (a) eps/delta inversion inside a fixed-phase block, 4 generators
    let classes: Vec<NumClass> = (1..=4)
        .map(|b| NumClass::torsion(vec![b], b).unwrap())
        .collect();
    let gens = GeneratorSet::new(classes, NumClass::pair(vec![4], 64)?, 4)?;
    for b in 1..=4i64 {
        let v = NumClass::torsion(vec![b], b).unwrap();
        let eps = eps_from_delta(&v, &gens, &k, &model)?;
        let back = eps.substitute(&gens, &mut |sym| {
            Ok(Some(delta_from_eps(&sym.class, &gens, &k, &model)?))
        })?;
        checks += 1;
        if back != HallExpr::word(vec![Sym::eps(v.clone(), &k)], rat_int(1)) {
            fails.push(format!("eps-delta-eps round trip broke at v = {v}"));
        }
        let delta = delta_from_eps(&v, &gens, &k, &model)?;
        let back = delta.substitute(&gens, &mut |sym| {
            Ok(Some(eps_from_delta(&sym.class, &gens, &k, &model)?))
        })?;
        checks += 1;
        if back != HallExpr::word(vec![Sym::delta(v.clone(), &k)], rat_int(1)) {
            fails.push(format!("delta-eps-delta round trip broke at v = {v}"));
        }
    }

    // (b) transform ∘ invert across the wall k0 = -1/2
    let kw = StabilityParam::new(rat(-1, 2));
    let v = NumClass::pair(vec![2], 2)?;
    let gens = GeneratorSet::from_decompositions(&v, &k, &model, 6)?;
    let inverted = invert_delta(&v, &gens, &k, &kw, &model)?;
    let expanded = inverted.substitute(&gens, &mut |sym| {
        Ok(Some(transform_delta(&sym.class, &gens, &k, &kw, &model)?))
    })?;
    checks += 1;
    if expanded != HallExpr::word(vec![Sym::delta(v.clone(), &k)], rat_int(1)) {
        fails.push("transform-invert round trip is not the identity".into());
    }

    // (c) equal-parameter transform is the identity (U({v}) = 1)
    for v in [NumClass::pair(vec![1], 1)?, NumClass::pair(vec![2], 2)?] {
        let gens = GeneratorSet::from_decompositions(&v, &k, &model, 4)?;
        let got = transform_eps(&v, &gens, &k, &k, &model)?;
        checks += 1;
        if got != HallExpr::word(vec![Sym::eps(v.clone(), &k)], rat_int(1)) {
            fails.push(format!("transform_eps at equal k is not the identity for {v}"));
        }
    }
    Ok(section(
        "hall round trips: block inversion, wall crossing, sign lock",
        checks,
        fails,
    ))
}

// -------------------------------------------------------- shared table setup

fn random_symmetric_n(rng: &mut ChaCha8Rng, model: &ConeModel, cutoff: &Beta) -> Result<InvariantTable> {
    let mut entries = BTreeMap::new();
    for beta in beta_box(cutoff) {
        if beta_is_zero(&beta) {
            continue;
        }
        let d = model.deg(&beta)? as usize;
        let mut values = vec![rat_int(0); d];
        for j in 0..=d / 2 {
            let x = rat_int(rng.gen_range(-3..=3));
            values[j] = x.clone();
            if j != 0 {
                values[d - j] = x;
            }
        }
        entries.insert(beta, values);
    }
    InvariantTable::periodic(entries, model)
}

fn random_symmetric_window(
    rng: &mut ChaCha8Rng,
    kind: TableKind,
    cutoff: &Beta,
    half_width: i64,
) -> Result<InvariantTable> {
    let mut entries = BTreeMap::new();
    for beta in beta_box(cutoff) {
        let mut w = BTreeMap::new();
        for n in 0..=half_width {
            let x = rat_int(rng.gen_range(-2..=2));
            if x != rat_int(0) {
                w.insert(n, x.clone());
                w.insert(-n, x);
            }
        }
        entries.insert(beta, w);
    }
    InvariantTable::window(kind, entries)
}

// ---------------------------------------------------------------- criterion 4

/// Tree-sum collapse: the generic labeled-tree transform equals the star
/// path for ρ = 1, β ≤ (3), |n| ≤ 6, k = −2.
pub fn criterion_trees(seed: u64) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7453);
    let model = ConeModel::with_constant_tables(vec![1], &vec![3], -20)?;
    let n_tab = random_symmetric_n(&mut rng, &model, &vec![3])?;
    let l_tab = random_symmetric_window(&mut rng, TableKind::L, &vec![3], 20)?;
    let k = StabilityParam::new(rat_int(-2));
    let k_zero = StabilityParam::new(rat_int(0));
    let mut checks = 0usize;
    let mut fails = Vec::new();
    for b in 1..=3i64 {
        let beta = vec![b];
        for n in -6..=6i64 {
            let v = NumClass::pair(beta.clone(), n)?;
            let mut j_table: BTreeMap<NumClass, Rat> = BTreeMap::new();
            for tuple in decompositions(&v, &k, &model)? {
                for part in tuple {
                    if j_table.contains_key(&part) {
                        continue;
                    }
                    let tab = if part.is_torsion() { &n_tab } else { &l_tab };
                    let val = tab.value(part.n, &part.beta, &model)?;
                    j_table.insert(part, val);
                }
            }
            let via_trees = j_transform(&v, &j_table, &k, &k_zero, &model)?;
            let via_star = l_wallcross(n, &beta, &k, &l_tab, &n_tab, &model)?;
            checks += 1;
            if via_trees != via_star {
                fails.push(format!(
                    "tree sum {} != star sum {} at (n, beta) = ({n}, ({b}))",
                    fmt_rat(&via_trees),
                    fmt_rat(&via_star)
                ));
            }
        }
    }
    Ok(section("tree-sum transform equals the star path", checks, fails))
}

// ---------------------------------------------------------------- criterion 5

/// Chamber identification: with `L(σ) := P` and k below every (takek)
/// bound, the wall-crossing sum equals the k-free chain formula.
pub fn criterion_chamber(seed: u64) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc4a3);
    let model = ConeModel::with_constant_tables(vec![1], &vec![2], -10)?;
    let n_tab = random_symmetric_n(&mut rng, &model, &vec![2])?;
    let mut p_entries = BTreeMap::new();
    for beta in beta_box(&vec![2]) {
        if beta_is_zero(&beta) {
            continue;
        }
        let mut w = BTreeMap::new();
        for n in -3..=8i64 {
            let x = rat_int(rng.gen_range(-2..=2));
            if x != rat_int(0) {
                w.insert(n, x);
            }
        }
        p_entries.insert(beta, w);
    }
    let p_tab = InvariantTable::window(TableKind::P, p_entries)?;
    let mut checks = 0usize;
    let mut fails = Vec::new();
    for b in 1..=2i64 {
        let beta = vec![b];
        for n in -4..=6i64 {
            let k = takek_param(n, &beta, &model)?;
            let wall = l_wallcross(n, &beta, &k, &p_tab, &n_tab, &model)?;
            let chain = l_from_pn(n, &beta, &p_tab, &n_tab, &model)?;
            checks += 1;
            if wall != chain {
                fails.push(format!(
                    "L(sigma) {} != chain {} at (n, beta) = ({n}, ({b})), k = {}",
                    fmt_rat(&wall),
                    fmt_rat(&chain),
                    fmt_rat(k.value())
                ));
            }
        }
    }
    Ok(section(
        "chamber identification: wall-crossing sum equals the k-free chain formula",
        checks,
        fails,
    ))
}

// ---------------------------------------------------------------- criterion 6

fn micro_model_check(fails: &mut Vec<String>) -> Result<()> {
    let model = ConeModel::with_constant_tables(vec![1], &vec![1], 0)?;
    let (a, c) = (3i64, -2i64);
    let mut n_entries = BTreeMap::new();
    n_entries.insert(vec![1], vec![rat_int(a)]);
    let n_tab = InvariantTable::periodic(n_entries, &model)?;
    let mut w = BTreeMap::new();
    for t in 0..=40i64 {
        let val = rat_int(a * t) + if t == 0 { rat_int(c) } else { rat_int(0) };
        if val != rat_int(0) {
            w.insert(t, val);
        }
    }
    let mut p_entries = BTreeMap::new();
    p_entries.insert(vec![1], w);
    let p_tab = InvariantTable::window(TableKind::P, p_entries)?;
    let report = crate::series::verify_roundtrip(&p_tab, &n_tab, &model, &vec![1], (-12, 12))?;
    if !report.pass() {
        fails.push("micro-model round trip failed".into());
    }
    for t in -12..=12i64 {
        let want = if t == 0 { rat_int(c) } else { rat_int(0) };
        let got = report
            .recovered_l
            .get(&(vec![1], t))
            .cloned()
            .unwrap_or_else(|| rat_int(0));
        if got != want {
            fails.push(format!("micro-model recovered L wrong at n = {t}"));
            break;
        }
    }
    Ok(())
}

/// Main factorization: the micro-model plus 100 randomized admissible
/// table pairs round-trip exactly, with closed-mode q ↔ 1/q symmetry.
pub fn criterion_factorization(seed: u64) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfac0);
    let mut checks = 1usize;
    let mut fails = Vec::new();
    micro_model_check(&mut fails)?;

    for trial in 0..100usize {
        let rank = 1 + trial % 2;
        let cutoff: Beta = (0..rank)
            .map(|_| rng.gen_range(1..=2i64))
            .collect();
        let model = ConeModel::with_constant_tables(vec![1; rank], &cutoff, -8)?;
        let n_tab = random_symmetric_n(&mut rng, &model, &cutoff)?;
        // symmetric L with support |n| <= 3; the build margin covers the
        // negative L-support so every stored coefficient <= 12 is exact
        let degree_hi = 18i64;
        let mut l_series = ConeSeries::new(cutoff.clone());
        let mut l_input: BTreeMap<(Beta, i64), Rat> = BTreeMap::new();
        for beta in beta_box(&cutoff) {
            let mut p = LaurentPoly::zero();
            if beta_is_zero(&beta) {
                let c0 = rat_int(rng.gen_range(1..=3));
                p.add_coeff(0, c0.clone());
                l_input.insert((beta.clone(), 0), c0);
            } else {
                for n in 0..=3i64 {
                    let x = rat_int(rng.gen_range(-2..=2));
                    if x != rat_int(0) {
                        p.set(n, x.clone());
                        p.set(-n, x.clone());
                        l_input.insert((beta.clone(), n), x.clone());
                        l_input.insert((beta.clone(), -n), x);
                    }
                }
            }
            l_series.set(beta, Coef::Window(p))?;
        }
        let p_series = expan_build(
            &l_series,
            &n_tab,
            &model,
            &cutoff,
            SeriesMode::Window { degree_hi },
        )?;
        let mut p_entries = BTreeMap::new();
        for beta in beta_box(&cutoff) {
            let w = match p_series.coefficient(&beta) {
                Some(Coef::Window(p)) => p.truncate_above(12).coeffs().clone(),
                _ => BTreeMap::new(),
            };
            p_entries.insert(beta, w);
        }
        let p_tab = InvariantTable::window(TableKind::P, p_entries)?;
        let report =
            crate::series::verify_roundtrip(&p_tab, &n_tab, &model, &cutoff, (-12, 12))?;
        checks += 1;
        if !report.pass() {
            fails.push(format!("trial {trial}: round trip failed\n{report}"));
            continue;
        }
        // the recovered table must be the L we started from
        for ((beta, n), want) in &l_input {
            let got = report
                .recovered_l
                .get(&(beta.clone(), *n))
                .cloned()
                .unwrap_or_else(|| rat_int(0));
            if got != *want {
                fails.push(format!(
                    "trial {trial}: recovered L differs at beta = {beta:?}, n = {n}"
                ));
                break;
            }
        }
    }
    Ok(section(
        "main factorization round trip with closed-mode symmetry",
        checks,
        fails,
    ))
}

// ---------------------------------------------------------------- criterion 7

/// Closed forms: the rational N-series matches the direct window to degree
/// 50 and is q ↔ 1/q symmetric, over randomized admissible N.
pub fn criterion_closed_forms(seed: u64) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc105);
    let model = ConeModel::with_constant_tables(vec![1], &vec![3], 0)?;
    let mut checks = 0usize;
    let mut fails = Vec::new();
    for _ in 0..5 {
        let n_tab = random_symmetric_n(&mut rng, &model, &vec![3])?;
        n_tab.check_invariants(&model)?;
        for b in 1..=3i64 {
            let beta = vec![b];
            let f = n_closed_form(&n_tab, &beta, &model)?;
            let mut window = LaurentPoly::zero();
            for t in 1..=50i64 {
                window.add_coeff(t, rat_int(t) * n_tab.value(t, &beta, &model)?);
            }
            checks += 2;
            if !series_matches_expansion(&f, &window, 50)? {
                fails.push(format!("closed form differs from the window at beta = ({b})"));
            }
            if !q_symmetry_check(&f) {
                fails.push(format!("closed form not q-symmetric at beta = ({b})"));
            }
        }
    }
    Ok(section(
        "closed N-series match their windows and are q-symmetric",
        checks,
        fails,
    ))
}

// ---------------------------------------------------------------- criterion 8

/// Dominance: every wall in `S(β) ∩ [−3, 0)` dominates its adjacent chamber
/// samples on the decomposition parts, β ≤ (2).
pub fn criterion_dominance() -> Result<Section> {
    let model = ConeModel::with_constant_tables(vec![1], &vec![2], 0)?;
    let mut checks = 0usize;
    let mut fails = Vec::new();
    for b in 1..=2i64 {
        let beta = vec![b];
        let ws = walls(&beta, &model)?;
        for k0 in ws.walls_in(&rat_int(-3), &rat_int(0)) {
            if k0 >= rat_int(0) {
                continue;
            }
            let (lo, hi) = ws.chamber_samples(&k0)?;
            let k0_param = StabilityParam::new(k0.clone());
            for sample in [lo, hi] {
                if sample >= rat_int(0) {
                    continue;
                }
                let k_pm = StabilityParam::new(sample);
                let mut classes: Vec<NumClass> = Vec::new();
                for n in 0..=2i64 {
                    let v = NumClass::pair(beta.clone(), n)?;
                    for tuple in decompositions(&v, &k_pm, &model)? {
                        for part in tuple {
                            if !classes.contains(&part) {
                                classes.push(part);
                            }
                        }
                    }
                }
                checks += 1;
                if !check_dominance(&k_pm, &k0_param, &classes, &model)? {
                    fails.push(format!(
                        "wall {} does not dominate sample {} at beta = ({b})",
                        fmt_rat(&k0),
                        fmt_rat(k_pm.value())
                    ));
                }
            }
        }
    }
    Ok(section(
        "walls dominate their adjacent chamber samples",
        checks,
        fails,
    ))
}

// ------------------------------------------------------------------- the run

fn run_once(seed: u64) -> Result<Vec<Section>> {
    Ok(vec![
        criterion_surjection()?,
        criterion_coefficients()?,
        criterion_hall()?,
        criterion_trees(seed)?,
        criterion_chamber(seed)?,
        criterion_factorization(seed)?,
        criterion_closed_forms(seed)?,
        criterion_dominance()?,
    ])
}

/// Runs the whole suite twice and appends the determinism criterion
/// (byte-identical rendering of the repeated run).
pub fn run(seed: u64) -> Result<SelftestReport> {
    let first = run_once(seed)?;
    let second = run_once(seed)?;
    let render = |sections: &[Section]| {
        sections
            .iter()
            .enumerate()
            .map(|(i, s)| s.line(i + 1))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let identical = render(&first) == render(&second);
    let mut sections = first;
    sections.push(Section {
        name: "repeated runs render byte-identical reports",
        pass: identical,
        checks: 1,
        detail: if identical {
            None
        } else {
            Some("second run diverged from the first".into())
        },
    });
    Ok(SelftestReport { sections })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_sweep_has_the_expected_shape() {
        let tuples = condition1_tuples(2, 1, 2);
        assert!(!tuples.is_empty());
        for t in &tuples {
            assert_eq!(t.iter().filter(|c| c.r == -1).count(), 1);
            let beta: i64 = t.iter().map(|c| c.beta[0]).sum();
            assert!(beta <= 2);
        }
    }

    #[test]
    fn pattern_predicates_agree_on_simple_cases() {
        let m = ConeModel::with_constant_tables(vec![1], &vec![3], 0).unwrap();
        let k = StabilityParam::new(rat_int(-1));
        let tuple = vec![
            NumClass::torsion(vec![1], 1).unwrap(),
            NumClass::pair(vec![0], 0).unwrap(),
            NumClass::torsion(vec![1], 1).unwrap(),
        ];
        // suffix slope 1 is not strictly below -2k = 2? it is; but equal to
        // the prefix bound, so onlyif holds while muor also holds
        assert!(onlyif_holds(&tuple, 1, &k, &m).unwrap());
        assert!(muor_holds(&tuple, 1, &k, &m).unwrap());
        let bad = vec![
            NumClass::torsion(vec![1], 3).unwrap(),
            NumClass::pair(vec![0], 0).unwrap(),
        ];
        assert!(!onlyif_holds(&bad, 1, &k, &m).unwrap());
    }
}
