//! The limit stability comparator for `σ = kω + iω`, the wall set `S(β)`,
//! and dominance checks between stability parameters.
//!
//! Phases live in a totally ordered field; the comparator below is the
//! closed-form residue of that order. Torsion classes compare by slope
//! `n/(ω·β)`; all rank −1 classes share one phase; a rank −1 class sits
//! below a torsion class exactly when the torsion slope exceeds `−2k`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::Signed;

use crate::cone::{beta_box, beta_is_zero, Beta, ConeModel, NumClass};
use crate::error::{Error, Result};
use crate::rat::{rat_int, Rat};

/// Outcome of a phase comparison. `Lt` means the first phase is smaller.
pub type PhaseOrder = Ordering;

/// The rational `k` selecting the stability condition `σ = kω + iω`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabilityParam(Rat);

impl StabilityParam {
    pub fn new(k: Rat) -> Self {
        StabilityParam(k)
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The dual parameter (negated k), matching the dual class `n ↦ −n`.
    pub fn dual(&self) -> StabilityParam {
        StabilityParam(-self.0.clone())
    }

    /// The slope threshold `−2k` separating torsion from rank −1 phases.
    pub fn threshold(&self) -> Rat {
        -rat_int(2) * &self.0
    }
}

fn torsion_slope(v: &NumClass, model: &ConeModel) -> Result<Rat> {
    let d = model.deg(&v.beta)?;
    if d == 0 {
        return Err(Error::Precondition(format!("torsion class with beta = 0: {v}")));
    }
    Ok(Rat::new(v.n.into(), d.into()))
}

/// Compares the phases of `v` and `w` under `Z_{μ_σ}` for `σ = kω + iω`.
pub fn compare(v: &NumClass, w: &NumClass, k: &StabilityParam, model: &ConeModel) -> Result<PhaseOrder> {
    match (v.r, w.r) {
        (0, 0) => Ok(torsion_slope(v, model)?.cmp(&torsion_slope(w, model)?)),
        (-1, -1) => Ok(Ordering::Equal),
        (-1, 0) => {
            // the rank -1 phase sits at the threshold slope -2k
            Ok(k.threshold().cmp(&torsion_slope(w, model)?))
        }
        (0, -1) => Ok(torsion_slope(v, model)?.cmp(&k.threshold())),
        _ => Err(Error::Precondition(format!("invalid ranks {} / {}", v.r, w.r))),
    }
}

/// The wall set `S(β)`: all `k` with `k·2ωβ′ ∈ ℤ` for some `0 ≠ β′ ≤ β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallSet {
    denominators: BTreeSet<i64>,
}

impl WallSet {
    pub fn denominators(&self) -> &BTreeSet<i64> {
        &self.denominators
    }

    /// Membership test `k ∈ S(β)`.
    pub fn contains(&self, k: &Rat) -> bool {
        self.denominators
            .iter()
            .any(|&d| (k * rat_int(d)).is_integer())
    }

    /// Sample points in the chambers adjacent to an on-wall `k₀`.
    pub fn chamber_samples(&self, k0: &Rat) -> Result<(Rat, Rat)> {
        if !self.contains(k0) {
            return Err(Error::Precondition(format!(
                "k = {k0} is not on a wall of this set"
            )));
        }
        let lcm = self
            .denominators
            .iter()
            .fold(1i64, |acc, &d| num::integer::lcm(acc, d));
        let mut step = Rat::new(1.into(), (2 * lcm).into());
        // walls lie in (1/lcm)Z, so half the grid step is off-wall; the
        // halving loop is a safety net, not an expected path
        while self.contains(&(k0 - &step)) || self.contains(&(k0 + &step)) {
            step /= rat_int(2);
        }
        Ok((k0 - &step, k0 + &step))
    }

    /// All wall values inside the half-open interval `[lo, hi)`.
    pub fn walls_in(&self, lo: &Rat, hi: &Rat) -> Vec<Rat> {
        let mut out = BTreeSet::new();
        for &d in &self.denominators {
            let dd = rat_int(d);
            let mut m = (lo * &dd).ceil();
            loop {
                let k = &m / &dd;
                if k >= *hi {
                    break;
                }
                if k >= *lo {
                    out.insert(k);
                }
                m += rat_int(1);
            }
        }
        out.into_iter().collect()
    }
}

/// The wall set `S(β)` of a nonzero effective class.
pub fn walls(beta: &Beta, model: &ConeModel) -> Result<WallSet> {
    if beta_is_zero(beta) {
        return Err(Error::Domain("S(beta) undefined at beta = 0".into()));
    }
    let mut denominators = BTreeSet::new();
    for bp in beta_box(beta) {
        if beta_is_zero(&bp) {
            continue;
        }
        denominators.insert(2 * model.deg(&bp)?);
    }
    Ok(WallSet { denominators })
}

/// True iff `kB` dominates `kA` on the supplied classes: every `⪰` under
/// `kA` stays `⪰` under `kB`.
pub fn check_dominance(
    k_a: &StabilityParam,
    k_b: &StabilityParam,
    classes: &[NumClass],
    model: &ConeModel,
) -> Result<bool> {
    for v in classes {
        for w in classes {
            let a = compare(v, w, k_a, model)?;
            let b = compare(v, w, k_b, model)?;
            if a != Ordering::Less && b == Ordering::Less {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::decompositions;
    use crate::rat::rat;

    fn model() -> ConeModel {
        ConeModel::with_constant_tables(vec![1], &vec![4], 0).unwrap()
    }

    fn k(p: i64, q: i64) -> StabilityParam {
        StabilityParam::new(rat(p, q))
    }

    #[test]
    fn rank_vs_torsion_threshold() {
        let m = model();
        let v = NumClass::pair(vec![1], 0).unwrap();
        let w = NumClass::torsion(vec![1], 3).unwrap();
        // slope 3 > 2 = -2k: the rank -1 phase is below
        assert_eq!(compare(&v, &w, &k(-1, 1), &m).unwrap(), Ordering::Less);
        assert_eq!(compare(&w, &v, &k(-1, 1), &m).unwrap(), Ordering::Greater);
        let w2 = NumClass::torsion(vec![1], 2).unwrap();
        assert_eq!(compare(&v, &w2, &k(-1, 1), &m).unwrap(), Ordering::Equal);
        let w1 = NumClass::torsion(vec![1], 1).unwrap();
        assert_eq!(compare(&v, &w1, &k(-1, 1), &m).unwrap(), Ordering::Greater);
    }

    #[test]
    fn rank_minus_one_phases_coincide() {
        let m = model();
        let v = NumClass::pair(vec![1], 4).unwrap();
        let w = NumClass::pair(vec![2], -7).unwrap();
        for kk in [k(-1, 1), k(3, 5), k(0, 1)] {
            assert_eq!(compare(&v, &w, &kk, &m).unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn torsion_compares_by_slope() {
        let m = model();
        let v = NumClass::torsion(vec![1], 2).unwrap();
        let w = NumClass::torsion(vec![2], 4).unwrap();
        assert_eq!(compare(&v, &w, &k(0, 1), &m).unwrap(), Ordering::Equal);
        let u = NumClass::torsion(vec![2], 5).unwrap();
        assert_eq!(compare(&v, &u, &k(0, 1), &m).unwrap(), Ordering::Less);
    }

    #[test]
    fn duality_mirrors_comparisons() {
        let m = model();
        let classes = [
            NumClass::torsion(vec![1], 2).unwrap(),
            NumClass::torsion(vec![2], -3).unwrap(),
            NumClass::pair(vec![1], 1).unwrap(),
        ];
        let kk = k(-3, 4);
        for v in &classes {
            for w in &classes {
                let direct = compare(v, w, &kk, &m).unwrap();
                let dual = compare(&v.dual(), &w.dual(), &kk.dual(), &m).unwrap();
                assert_eq!(direct, dual.reverse());
            }
        }
    }

    #[test]
    fn total_preorder_on_a_finite_set() {
        let m = model();
        let classes = [
            NumClass::torsion(vec![1], 0).unwrap(),
            NumClass::torsion(vec![1], 1).unwrap(),
            NumClass::torsion(vec![2], 2).unwrap(),
            NumClass::pair(vec![0], 0).unwrap(),
            NumClass::pair(vec![2], 3).unwrap(),
        ];
        let kk = k(-1, 2);
        for a in &classes {
            for b in &classes {
                let ab = compare(a, b, &kk, &m).unwrap();
                assert_eq!(ab, compare(b, a, &kk, &m).unwrap().reverse());
                for c in &classes {
                    let bc = compare(b, c, &kk, &m).unwrap();
                    let ac = compare(a, c, &kk, &m).unwrap();
                    if ab != Ordering::Greater && bc != Ordering::Greater {
                        assert_ne!(ac, Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn wall_denominators() {
        let m = model();
        let s = walls(&vec![2], &m).unwrap();
        assert_eq!(
            s.denominators().iter().copied().collect::<Vec<_>>(),
            vec![2, 4]
        );
        let s1 = walls(&vec![1], &m).unwrap();
        assert_eq!(
            s1.denominators().iter().copied().collect::<Vec<_>>(),
            vec![2]
        );
        assert!(walls(&vec![0], &m).is_err());
    }

    #[test]
    fn wall_membership() {
        let m = model();
        let s = walls(&vec![2], &m).unwrap();
        assert!(s.contains(&rat(3, 4)));
        assert!(!s.contains(&rat(1, 3)));
        assert!(s.contains(&rat(-1, 2)));
    }

    #[test]
    fn chamber_samples_sit_off_wall() {
        let m = model();
        let s = walls(&vec![2], &m).unwrap();
        let (lo, hi) = s.chamber_samples(&rat(-1, 2)).unwrap();
        assert!(lo < rat(-1, 2) && rat(-1, 2) < hi);
        assert!(!s.contains(&lo) && !s.contains(&hi));
        assert!(s.walls_in(&lo, &rat(-1, 2)).is_empty());
        assert!(s.chamber_samples(&rat(1, 3)).is_err());
    }

    #[test]
    fn walls_in_interval() {
        let m = model();
        let s = walls(&vec![1], &m).unwrap();
        // S = (1/2)Z
        assert_eq!(
            s.walls_in(&rat(-1, 1), &rat(0, 1)),
            vec![rat(-1, 1), rat(-1, 2)]
        );
    }

    #[test]
    fn dominance_reflexive_and_wall_dominates_chamber() {
        let m = model();
        let v = NumClass::pair(vec![1], 1).unwrap();
        let ka = k(-3, 4);
        let parts: Vec<NumClass> = decompositions(&v, &ka, &m)
            .unwrap()
            .into_iter()
            .flatten()
            .collect();
        assert!(check_dominance(&ka, &ka, &parts, &m).unwrap());
        assert!(check_dominance(&ka, &k(-1, 2), &parts, &m).unwrap());
    }

    #[test]
    fn chamber_does_not_dominate_wall() {
        let m = model();
        let classes = [
            NumClass::pair(vec![1], 0).unwrap(),
            NumClass::torsion(vec![1], 1).unwrap(),
        ];
        // equal at the wall k=-1/2 (threshold 1), strict at k=-3/4
        assert!(!check_dominance(&k(-1, 2), &k(-3, 4), &classes, &m).unwrap());
    }
}
