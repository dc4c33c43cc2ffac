//! Laurent windows, canonical rational functions in q, cone-graded series,
//! the closed form of the N-series, and the factorization round trip
//! `P = L·exp(N)` with its q ↔ 1/q certification.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::cone::{beta_box, beta_is_zero, beta_le, Beta, ConeModel};
use crate::error::{Error, Result};
use crate::integrate::{l_from_pn_window, InvariantTable};
use crate::rat::{rat_int, Rat};

/// A Laurent polynomial in q: finite exponent → coefficient map, no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = LaurentPoly::default();
        p.set(0, c);
        p
    }

    pub fn monomial(exp: i64, c: Rat) -> Self {
        let mut p = LaurentPoly::default();
        p.set(exp, c);
        p
    }

    pub fn from_coeffs(entries: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut p = LaurentPoly::default();
        for (e, c) in entries {
            p.add_coeff(e, c);
        }
        p
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rat> {
        &self.coeffs
    }

    pub fn get(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn set(&mut self, exp: i64, c: Rat) {
        if c.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, c);
        }
    }

    pub fn add_coeff(&mut self, exp: i64, c: Rat) {
        let v = self.get(exp) + c;
        self.set(exp, v);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &other.coeffs {
            out.add_coeff(e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, x)| (e, x.clone() * c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                out.add_coeff(ea + eb, ca.clone() * cb);
            }
        }
        out
    }

    /// Drops every coefficient above `deg`.
    pub fn truncate_above(&self, deg: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&e, _)| e <= deg)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// True iff coefficients satisfy `c_n = c_{−n}`.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&e, c)| self.get(-e) == *c)
    }
}

/// A dense polynomial in q over the rationals; no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_vec(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(rat_int(1))
    }

    pub fn from_vec(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_vec((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_vec((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::from_vec(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![rat_int(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b;
            }
        }
        Poly::from_vec(out)
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![rat_int(0); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::from_vec(coeffs)
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn divrem(&self, den: &Poly) -> (Poly, Poly) {
        assert!(!den.is_zero(), "division by the zero polynomial");
        let dd = den.degree().unwrap();
        let lead = den.coeffs[dd].clone();
        let mut rem = self.clone();
        let mut quot = vec![rat_int(0); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.coeffs[rd].clone() / &lead;
            quot[rd - dd] = f.clone();
            rem = rem.sub(&den.scale(&f).shift(rd - dd));
        }
        (Poly::from_vec(quot), rem)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scaled to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.degree() {
            None => Poly::zero(),
            Some(d) => self.scale(&self.coeffs[d].clone().recip()),
        }
    }

    /// The reversal `q^deg · p(1/q)`.
    pub fn reversed(&self) -> Poly {
        Poly::from_vec(self.coeffs.iter().rev().cloned().collect())
    }
}

/// A rational function of q in canonical reduced form: `gcd(num, den) = 1`
/// and the denominator monic, so equality is literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFn { num: Poly::zero(), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lead = den.coeffs[den.degree().unwrap()].clone();
        RationalFn {
            num: num.scale(&lead.clone().recip()),
            den: den.scale(&lead.recip()),
        }
    }

    pub fn zero() -> Self {
        RationalFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        RationalFn { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// A Laurent polynomial as a rational function (`q^{−m}` → denominator
    /// power).
    pub fn from_laurent(p: &LaurentPoly) -> Self {
        if p.is_zero() {
            return RationalFn::zero();
        }
        let min = p.min_exp().unwrap();
        let shift = (-min).max(0) as usize;
        let mut num = vec![rat_int(0); (p.max_exp().unwrap() + shift as i64 + 1) as usize];
        for (&e, c) in p.coeffs() {
            num[(e + shift as i64) as usize] = c.clone();
        }
        Self::reduce(Poly::from_vec(num), Poly::one().shift(shift))
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        Self::reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rat) -> RationalFn {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    /// The substitution `q ↦ 1/q`, cleared of denominators and re-reduced.
    pub fn subst_inv(&self) -> RationalFn {
        if self.is_zero() {
            return RationalFn::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        // f(1/q) = rev(num)·q^dd / (rev(den)·q^dn)
        Self::reduce(self.num.reversed().shift(dd), self.den.reversed().shift(dn))
    }

    /// Laurent expansion at q = 0 up to and including `degree_bound`.
    pub fn expand(&self, degree_bound: i64) -> Result<LaurentPoly> {
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        // factor q^s out of the denominator
        let s = self
            .den
            .coeffs()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero denominator");
        let den0 = Poly::from_vec(self.den.coeffs()[s..].to_vec());
        let lead = den0.coeff(0);
        let terms = degree_bound + s as i64 + 1;
        if terms <= 0 {
            return Ok(LaurentPoly::zero());
        }
        let mut series: Vec<Rat> = Vec::with_capacity(terms as usize);
        for t in 0..terms as usize {
            let mut c = self.num.coeff(t);
            for i in 1..=t.min(den0.coeffs().len().saturating_sub(1)) {
                c -= den0.coeff(i) * series[t - i].clone();
            }
            series.push(c / &lead);
        }
        Ok(LaurentPoly::from_coeffs(
            series
                .into_iter()
                .enumerate()
                .map(|(t, c)| (t as i64 - s as i64, c)),
        ))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_poly = |p: &Poly| -> String {
            if p.is_zero() {
                return "0".into();
            }
            let mut parts = Vec::new();
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = crate::rat::fmt_rat(c);
                parts.push(match i {
                    0 => c,
                    1 => format!("{c}*q"),
                    _ => format!("{c}*q^{i}"),
                });
            }
            parts.join(" + ")
        };
        write!(f, "({}) / ({})", fmt_poly(&self.num), fmt_poly(&self.den))
    }
}

/// True iff `f(1/q) = f(q)` as reduced rational functions.
pub fn q_symmetry_check(f: &RationalFn) -> bool {
    f.subst_inv() == *f
}

/// True iff the Laurent expansion of `f` agrees with `window` on every
/// exponent up to `degree_bound`.
pub fn series_matches_expansion(
    f: &RationalFn,
    window: &LaurentPoly,
    degree_bound: i64,
) -> Result<bool> {
    let expansion = f.expand(degree_bound)?;
    let mut exps: std::collections::BTreeSet<i64> = expansion.coeffs().keys().copied().collect();
    exps.extend(window.coeffs().keys().copied());
    for e in exps {
        if e > degree_bound {
            continue;
        }
        if expansion.get(e) != window.get(e) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The closed form of `N_β(q) = Σ_{n≥0} n·N_{n,β} qⁿ` from one period of N.
pub fn n_closed_form(
    n_tab: &InvariantTable,
    beta: &Beta,
    model: &ConeModel,
) -> Result<RationalFn> {
    if beta_is_zero(beta) {
        return Err(Error::Domain("N_beta(q) undefined at beta = 0".into()));
    }
    let d = model.deg(beta)?;
    let mut num = LaurentPoly::zero();
    for j in 1..d {
        let half = n_tab.value(j, beta, model)? / rat_int(2);
        if half.is_zero() {
            continue;
        }
        let dj = rat_int(d - j);
        let jj = rat_int(j);
        num.add_coeff(j + d, half.clone() * &dj);
        num.add_coeff(d - j, half.clone() * &dj);
        num.add_coeff(j, half.clone() * &jj);
        num.add_coeff(2 * d - j, half * &jj);
    }
    num.add_coeff(d, n_tab.value(0, beta, model)? * rat_int(d));
    // denominator (1 − q^d)^2
    let mut den = vec![rat_int(0); 2 * d as usize + 1];
    den[0] = rat_int(1);
    den[d as usize] = rat_int(-2);
    den[2 * d as usize] = rat_int(1);
    let numer = RationalFn::from_laurent(&num);
    RationalFn::new(numer.num().clone(), numer.den().mul(&Poly::from_vec(den)))
}

/// Coefficient of one β in a cone-graded series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coef {
    Window(LaurentPoly),
    Closed(RationalFn),
}

impl Coef {
    pub fn add(&self, other: &Coef) -> Result<Coef> {
        match (self, other) {
            (Coef::Window(a), Coef::Window(b)) => Ok(Coef::Window(a.add(b))),
            (Coef::Closed(a), Coef::Closed(b)) => Ok(Coef::Closed(a.add(b))),
            _ => Err(Error::Precondition("mixed series modes".into())),
        }
    }

    pub fn mul(&self, other: &Coef, degree_hi: Option<i64>) -> Result<Coef> {
        match (self, other) {
            (Coef::Window(a), Coef::Window(b)) => {
                let p = a.mul(b);
                Ok(Coef::Window(match degree_hi {
                    Some(d) => p.truncate_above(d),
                    None => p,
                }))
            }
            (Coef::Closed(a), Coef::Closed(b)) => Ok(Coef::Closed(a.mul(b))),
            _ => Err(Error::Precondition("mixed series modes".into())),
        }
    }

    pub fn scale(&self, c: &Rat) -> Coef {
        match self {
            Coef::Window(a) => Coef::Window(a.scale(c)),
            Coef::Closed(a) => Coef::Closed(a.scale(c)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Window(a) => a.is_zero(),
            Coef::Closed(a) => a.is_zero(),
        }
    }
}

/// A series graded by effective classes below a cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSeries {
    cutoff: Beta,
    terms: BTreeMap<Beta, Coef>,
}

impl ConeSeries {
    pub fn new(cutoff: Beta) -> Self {
        ConeSeries { cutoff, terms: BTreeMap::new() }
    }

    pub fn cutoff(&self) -> &Beta {
        &self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<Beta, Coef> {
        &self.terms
    }

    pub fn coefficient(&self, beta: &Beta) -> Option<&Coef> {
        self.terms.get(beta)
    }

    pub fn set(&mut self, beta: Beta, coef: Coef) -> Result<()> {
        if !beta_le(&beta, &self.cutoff) {
            return Err(Error::Precondition(format!(
                "class {beta:?} exceeds the cutoff {:?}",
                self.cutoff
            )));
        }
        if coef.is_zero() {
            self.terms.remove(&beta);
        } else {
            self.terms.insert(beta, coef);
        }
        Ok(())
    }

    pub fn add(&self, other: &ConeSeries) -> Result<ConeSeries> {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            let merged = match out.terms.get(b) {
                Some(existing) => existing.add(c)?,
                None => c.clone(),
            };
            out.set(b.clone(), merged)?;
        }
        Ok(out)
    }

    /// Graded product, truncated at the cutoff (and at `degree_hi` in q for
    /// window coefficients).
    pub fn mul(&self, other: &ConeSeries, degree_hi: Option<i64>) -> Result<ConeSeries> {
        let mut out = ConeSeries::new(self.cutoff.clone());
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let b = crate::cone::beta_add(ba, bb);
                if !beta_le(&b, &self.cutoff) {
                    continue;
                }
                let prod = ca.mul(cb, degree_hi)?;
                let merged = match out.terms.get(&b) {
                    Some(existing) => existing.add(&prod)?,
                    None => prod,
                };
                out.set(b, merged)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> ConeSeries {
        let mut out = ConeSeries::new(self.cutoff.clone());
        for (b, x) in &self.terms {
            let scaled = x.scale(c);
            if !scaled.is_zero() {
                out.terms.insert(b.clone(), scaled);
            }
        }
        out
    }

    /// The truncated exponential; the exponent must have no β = 0 term.
    pub fn exp(&self, unit: Coef, degree_hi: Option<i64>) -> Result<ConeSeries> {
        let zero = vec![0; self.cutoff.len()];
        if self.terms.contains_key(&zero) {
            return Err(Error::Precondition(
                "exp needs an exponent with no beta = 0 term".into(),
            ));
        }
        let mut acc = ConeSeries::new(self.cutoff.clone());
        acc.set(zero, unit)?;
        let bound: i64 = self.cutoff.iter().sum();
        let mut power = acc.clone();
        for m in 1..=bound.max(0) {
            power = power.mul(self, degree_hi)?;
            acc = acc.add(&power.scale(&Rat::new(1.into(), m.into()).clone()))?;
            // dividing the running power keeps it equal to X^m/m!
            power = power.scale(&Rat::new(1.into(), m.into()));
        }
        Ok(acc)
    }
}

/// Mode selector for [`expan_build`] and the round-trip check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// Laurent windows computed exactly up to this q-degree.
    Window { degree_hi: i64 },
    /// Canonical rational functions.
    Closed,
}

/// The N′ exponent series `Σ_β N′_β(q) v^β` over `0 < β ≤ cutoff`.
fn n_prime_series(
    n_tab: &InvariantTable,
    model: &ConeModel,
    cutoff: &Beta,
    mode: SeriesMode,
) -> Result<ConeSeries> {
    let mut out = ConeSeries::new(cutoff.clone());
    for beta in beta_box(cutoff) {
        if beta_is_zero(&beta) {
            continue;
        }
        let coef = match mode {
            SeriesMode::Window { degree_hi } => {
                let mut p = LaurentPoly::zero();
                for n in 1..=degree_hi {
                    p.add_coeff(n, rat_int(n) * n_tab.value(n, &beta, model)?);
                }
                Coef::Window(p)
            }
            SeriesMode::Closed => Coef::Closed(n_closed_form(n_tab, &beta, model)?),
        };
        out.set(beta, coef)?;
    }
    Ok(out)
}

/// The factorization `P = L · exp(Σ N′_β v^β)`.
pub fn expan_build(
    l_series: &ConeSeries,
    n_tab: &InvariantTable,
    model: &ConeModel,
    cutoff: &Beta,
    mode: SeriesMode,
) -> Result<ConeSeries> {
    let degree_hi = match mode {
        SeriesMode::Window { degree_hi } => Some(degree_hi),
        SeriesMode::Closed => None,
    };
    let n_prime = n_prime_series(n_tab, model, cutoff, mode)?;
    let unit = match mode {
        SeriesMode::Window { .. } => Coef::Window(LaurentPoly::constant(rat_int(1))),
        SeriesMode::Closed => Coef::Closed(RationalFn::constant(rat_int(1))),
    };
    let exp = n_prime.exp(unit, degree_hi)?;
    l_series.mul(&exp, degree_hi)
}

/// Outcome of [`verify_roundtrip`].
#[derive(Debug, Clone)]
pub struct RoundtripReport {
    /// (i) `expan_build(L, N)` reproduces P on the window.
    pub expansion_ok: bool,
    pub first_expansion_fail: Option<(Beta, i64)>,
    /// (ii) recovered L is symmetric and supported inside the window.
    pub l_symmetric_ok: bool,
    pub l_support_ok: bool,
    pub first_l_fail: Option<(Beta, i64)>,
    /// (iii) closed-mode P_β is invariant under q ↔ 1/q and matches the
    /// window expansion.
    pub closed_symmetric_ok: bool,
    pub first_closed_fail: Option<(Beta, i64)>,
    /// The recovered L-values on the window.
    pub recovered_l: BTreeMap<(Beta, i64), Rat>,
}

impl RoundtripReport {
    pub fn pass(&self) -> bool {
        self.expansion_ok && self.l_symmetric_ok && self.l_support_ok && self.closed_symmetric_ok
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "expansion equality:  {}", mark(self.expansion_ok))?;
        if let Some((b, n)) = &self.first_expansion_fail {
            writeln!(f, "  first failure at beta = {b:?}, q-degree {n}")?;
        }
        writeln!(
            f,
            "recovered L shape:   {} (symmetric) / {} (support)",
            mark(self.l_symmetric_ok),
            mark(self.l_support_ok)
        )?;
        if let Some((b, n)) = &self.first_l_fail {
            writeln!(f, "  first failure at beta = {b:?}, n = {n}")?;
        }
        writeln!(f, "closed-form symmetry: {}", mark(self.closed_symmetric_ok))?;
        if let Some((b, n)) = &self.first_closed_fail {
            writeln!(f, "  first failure at beta = {b:?}, q-degree {n}")?;
        }
        write!(f, "overall: {}", mark(self.pass()))
    }
}

/// Recovers L from P and N on the window, rebuilds P both ways, and
/// certifies symmetry and rationality.
pub fn verify_roundtrip(
    p_tab: &InvariantTable,
    n_tab: &InvariantTable,
    model: &ConeModel,
    beta_cutoff: &Beta,
    q_window: (i64, i64),
) -> Result<RoundtripReport> {
    let (lo, hi) = q_window;
    if lo > hi {
        return Err(Error::Precondition(format!("bad q-window [{lo}, {hi}]")));
    }
    let guard = hi - lo;
    let degree_hi = hi + guard;
    let recovered_l = l_from_pn_window(beta_cutoff, lo, hi, p_tab, n_tab, model)?;

    // (ii) symmetry and support of the recovered L
    let mut l_symmetric_ok = true;
    let mut l_support_ok = true;
    let mut first_l_fail = None;
    let get_l = |beta: &Beta, n: i64| -> Rat {
        recovered_l
            .get(&(beta.clone(), n))
            .cloned()
            .unwrap_or_else(|| rat_int(0))
    };
    for beta in beta_box(beta_cutoff) {
        for n in 0..=hi {
            if -n >= lo && get_l(&beta, n) != get_l(&beta, -n) {
                l_symmetric_ok = false;
                first_l_fail.get_or_insert((beta.clone(), n));
            }
        }
        for n in lo..=hi {
            if n.abs() > hi - 2 && get_l(&beta, n) != rat_int(0) {
                l_support_ok = false;
                first_l_fail.get_or_insert((beta.clone(), n));
            }
        }
    }

    // (i) window-mode rebuild against the P table
    // the margin check above certifies the window sees all of L's support,
    // so the rebuild may use the window slice as the whole series
    let mut l_window = ConeSeries::new(beta_cutoff.clone());
    for beta in beta_box(beta_cutoff) {
        let mut p = LaurentPoly::zero();
        for n in lo..=hi {
            p.add_coeff(n, get_l(&beta, n));
        }
        l_window.set(beta, Coef::Window(p))?;
    }
    let p_window = expan_build(
        &l_window,
        n_tab,
        model,
        beta_cutoff,
        SeriesMode::Window { degree_hi },
    )?;
    let mut expansion_ok = true;
    let mut first_expansion_fail = None;
    for beta in beta_box(beta_cutoff) {
        let built = match p_window.coefficient(&beta) {
            Some(Coef::Window(p)) => p.clone(),
            Some(Coef::Closed(_)) => unreachable!("window mode"),
            None => LaurentPoly::zero(),
        };
        for n in lo..=hi {
            if built.get(n) != p_tab.value(n, &beta, model)? {
                expansion_ok = false;
                first_expansion_fail.get_or_insert((beta.clone(), n));
                break;
            }
        }
    }

    // (iii) closed-mode rebuild: q <-> 1/q symmetry plus window agreement
    let mut l_closed = ConeSeries::new(beta_cutoff.clone());
    for beta in beta_box(beta_cutoff) {
        let mut p = LaurentPoly::zero();
        for n in lo..=hi {
            p.add_coeff(n, get_l(&beta, n));
        }
        l_closed.set(beta, Coef::Closed(RationalFn::from_laurent(&p)))?;
    }
    let p_closed = expan_build(&l_closed, n_tab, model, beta_cutoff, SeriesMode::Closed)?;
    let mut closed_symmetric_ok = true;
    let mut first_closed_fail = None;
    for beta in beta_box(beta_cutoff) {
        let built = match p_closed.coefficient(&beta) {
            Some(Coef::Closed(r)) => r.clone(),
            Some(Coef::Window(_)) => unreachable!("closed mode"),
            None => RationalFn::zero(),
        };
        if !q_symmetry_check(&built) {
            closed_symmetric_ok = false;
            let direct = built.expand(hi)?;
            let mirrored = built.subst_inv().expand(hi)?;
            let mut deg = hi;
            let mut exps: std::collections::BTreeSet<i64> =
                direct.coeffs().keys().copied().collect();
            exps.extend(mirrored.coeffs().keys().copied());
            for e in exps {
                if direct.get(e) != mirrored.get(e) {
                    deg = e;
                    break;
                }
            }
            first_closed_fail.get_or_insert((beta.clone(), deg));
            continue;
        }
        let window = match p_window.coefficient(&beta) {
            Some(Coef::Window(p)) => p.truncate_above(hi),
            _ => LaurentPoly::zero(),
        };
        if !series_matches_expansion(&built, &window, hi)? {
            closed_symmetric_ok = false;
            first_closed_fail.get_or_insert((beta.clone(), hi));
        }
    }

    Ok(RoundtripReport {
        expansion_ok,
        first_expansion_fail,
        l_symmetric_ok,
        l_support_ok,
        first_l_fail,
        closed_symmetric_ok,
        first_closed_fail,
        recovered_l,
    })
}
