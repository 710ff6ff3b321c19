//! Exact expected symmetric polynomials, determinant moments, and expected
//! characteristic polynomials over the β-Hermite and β-Laguerre ensembles,
//! as polynomials in s = β/2 (and the Laguerre parameter a).
//!
//! The engine expands the tridiagonal characteristic-polynomial recurrence
//! with matrix entries as formal variables, then replaces entry powers by
//! their exact moments using independence. Subdiagonal variables can only
//! appear at even powers — a structural consequence of the recurrence — and
//! even chi moments are rising factorials in s, so every result is an exact
//! polynomial. Arithmetic is big-rational throughout; floating point only
//! enters through explicit evaluation.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Default monomial cap for symbolic expansion.
pub const DEFAULT_MONOMIAL_CAP: u64 = 10_000_000;

/// Exact polynomial in s = β/2 and a, keyed by (s power, a power).
/// Hermite-ensemble results use a-power 0 only.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BetaPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BetaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The variable s = β/2.
    pub fn var_s() -> Self {
        let mut p = Self::zero();
        p.add_term(1, 0, BigRational::one());
        p
    }

    /// The Laguerre parameter a.
    pub fn var_a() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 1, BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s_pow: u32, a_pow: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((s_pow, a_pow)) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), t) in &self.terms {
            out.add_term(i, j, t * c);
        }
        out
    }

    pub fn degree_s(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn degree_a(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s_pow: u32, a_pow: u32) -> BigRational {
        self.terms
            .get(&(s_pow, a_pow))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// All coefficients are integers.
    pub fn integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.denom().abs().is_one())
    }

    /// Floating-point evaluation at numeric (s, a).
    pub fn eval(&self, s: f64, a: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in &self.terms {
            acc += c.to_f64().unwrap() * s.powi(i as i32) * a.powi(j as i32);
        }
        acc
    }

    /// Exact evaluation at rational (s, a).
    pub fn eval_exact(&self, s: &BigRational, a: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..i {
                term *= s;
            }
            for _ in 0..j {
                term *= a;
            }
            acc += term;
        }
        acc
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: vec!["s".into(), "a".into()],
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|((i, j), c)| PolyTermJson {
                    exp: [i, j],
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    fn sorted_terms(&self) -> Vec<((u32, u32), BigRational)> {
        let mut ts: Vec<_> = self.terms.iter().map(|(&k, v)| (k, v.clone())).collect();
        ts.sort_by(|a, b| {
            let ta = a.0 .0 + a.0 .1;
            let tb = b.0 .0 + b.0 .1;
            tb.cmp(&ta).then(b.0 .1.cmp(&a.0 .1)).then(b.0 .0.cmp(&a.0 .0))
        });
        ts
    }
}

impl fmt::Display for BetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.sorted_terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                factors.push(if mag.denom().is_one() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                });
            }
            if i > 0 {
                factors.push(if i == 1 { "s".into() } else { format!("s^{i}") });
            }
            if j > 0 {
                factors.push(if j == 1 { "a".into() } else { format!("a^{j}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Serialized polynomial: arbitrary-precision integers as decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<PolyTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub exp: [u32; 2],
    pub num: String,
    pub den: String,
}

/// Entry kinds for moment lookup, indexed as the matrix displays read:
/// Hermite subdiagonal position k counts from the bottom (the χ_{kβ}/√2
/// law); Laguerre positions i count from the bottom likewise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    /// N(0,1) diagonal entry of the Hermite model.
    HermiteDiag,
    /// χ_{kβ}/√2 subdiagonal entry, k = 1..n−1 from the bottom.
    HermiteSubdiag { k: usize },
    /// x_i² = squared diagonal entry of the Laguerre factor, i = 1..m from
    /// the bottom (so i = m is the χ_{2a} entry).
    LaguerreDiagSq { i: usize, m: usize },
    /// y_i² = squared subdiagonal entry, i = 1..m−1 from the bottom.
    LaguerreSubdiagSq { i: usize },
}

/// (c·s + a·a_coeff + offset + t) for t = 0..j−1, multiplied out: the
/// rising factorial of a linear polynomial.
fn rising_factorial_poly(linear: &BetaPoly, j: u32) -> BetaPoly {
    let mut acc = BetaPoly::one();
    for t in 0..j {
        let shifted = linear.add(&BetaPoly::from_integer(t as i64));
        acc = acc.mul(&shifted);
    }
    acc
}

fn double_factorial_odd(j: u32) -> BigRational {
    // (2j-1)!! = 1·3·5···(2j-1)
    let mut acc = BigInt::one();
    let mut t = 1u32;
    while t + 1 <= 2 * j {
        acc *= BigInt::from(t);
        t += 2;
    }
    BigRational::from_integer(acc)
}

/// Exact moment E[entry^power] as a polynomial in (s, a).
///
/// Gaussian entries: odd powers vanish, even powers 2j give (2j−1)!!.
/// Chi entries appear through even powers only; an odd chi power is an
/// error because it is not a polynomial in s. For the squared Laguerre
/// entries `power` counts the square, so all powers are legal.
pub fn entry_moment(kind: EntryKind, power: u32) -> Result<BetaPoly> {
    match kind {
        EntryKind::HermiteDiag => {
            if power % 2 == 1 {
                Ok(BetaPoly::zero())
            } else {
                Ok(BetaPoly::constant(double_factorial_odd(power / 2)))
            }
        }
        EntryKind::HermiteSubdiag { k } => {
            if k == 0 {
                return Err(Error::InvalidParameter(
                    "subdiagonal position counts from 1".into(),
                ));
            }
            if power % 2 == 1 {
                return Err(Error::OddChiMoment);
            }
            // E[(χ_{kβ}/√2)^{2j}] = (k s)_j
            let ks = BetaPoly::var_s().scale(&BigRational::from_integer(BigInt::from(k)));
            Ok(rising_factorial_poly(&ks, power / 2))
        }
        EntryKind::LaguerreDiagSq { i, m } => {
            if i == 0 || i > m {
                return Err(Error::InvalidParameter(
                    "diagonal position must lie in 1..=m".into(),
                ));
            }
            // E[x_i^{2j}] = 2^j (a − s(m−i))_j
            let lin = BetaPoly::var_a().sub(
                &BetaPoly::var_s().scale(&BigRational::from_integer(BigInt::from(m - i))),
            );
            let rf = rising_factorial_poly(&lin, power);
            Ok(rf.scale(&BigRational::from_integer(BigInt::from(2u8).pow(power))))
        }
        EntryKind::LaguerreSubdiagSq { i } => {
            if i == 0 {
                return Err(Error::InvalidParameter(
                    "subdiagonal position counts from 1".into(),
                ));
            }
            // E[y_i^{2j}] = 2^j (s i)_j
            let lin = BetaPoly::var_s().scale(&BigRational::from_integer(BigInt::from(i)));
            let rf = rising_factorial_poly(&lin, power);
            Ok(rf.scale(&BigRational::from_integer(BigInt::from(2u8).pow(power))))
        }
    }
}

/// Which ensemble a symbolic moment refers to; β (and a) stay symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentEnsemble {
    Hermite { n: usize },
    Laguerre { m: usize },
}

/// Sparse polynomial over the formal entry variables, keyed by exponent
/// vectors. Variables 0..n are diagonal entries top-to-bottom; n.. are
/// subdiagonal entries (Hermite: the entries themselves; Laguerre: the
/// squares x², y²).
#[derive(Clone, Debug)]
struct EntryPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl EntryPoly {
    fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    fn var(nvars: usize, idx: usize) -> Self {
        let mut exp = vec![0u16; nvars];
        exp[idx] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exp, BigRational::one());
        p
    }

    fn add_term(&mut self, exp: Vec<u16>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    fn mul(&self, other: &Self, cap: u64) -> Result<Self> {
        let projected = self.terms.len() as u64 * other.terms.len() as u64;
        if projected > cap {
            return Err(Error::ResourceCap {
                needed: projected,
                cap,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        if out.terms.len() as u64 > cap {
            return Err(Error::ResourceCap {
                needed: out.terms.len() as u64,
                cap,
            });
        }
        Ok(out)
    }

    fn monomials(&self) -> u64 {
        self.terms.len() as u64
    }
}

/// Per-variable moment lookup for one ensemble layout.
fn variable_moment(ens: MomentEnsemble, var: usize, power: u32) -> Result<BetaPoly> {
    match ens {
        MomentEnsemble::Hermite { n } => {
            if var < n {
                entry_moment(EntryKind::HermiteDiag, power)
            } else {
                // storage subdiagonal index j -> bottom-up position k = n-1-j
                let j = var - n;
                entry_moment(EntryKind::HermiteSubdiag { k: n - 1 - j }, power)
            }
        }
        MomentEnsemble::Laguerre { m } => {
            if var < m {
                // storage diagonal index j -> bottom-up position i = m-j
                entry_moment(
                    EntryKind::LaguerreDiagSq { i: m - var, m },
                    power,
                )
            } else {
                let j = var - m;
                entry_moment(EntryKind::LaguerreSubdiagSq { i: m - 1 - j }, power)
            }
        }
    }
}

/// Replace entry powers by their moments using independence across the
/// mutually independent entries.
fn substitute_moments(p: &EntryPoly, ens: MomentEnsemble) -> Result<BetaPoly> {
    let mut acc = BetaPoly::zero();
    'terms: for (exp, coeff) in &p.terms {
        let mut term = BetaPoly::constant(coeff.clone());
        for (var, &pow) in exp.iter().enumerate() {
            if pow == 0 {
                continue;
            }
            let m = variable_moment(ens, var, u32::from(pow))?;
            if m.is_zero() {
                continue 'terms;
            }
            term = term.mul(&m);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The tridiagonal entries of the ensemble as entry polynomials:
/// (diagonal entries, squared subdiagonal entries).
fn tridiagonal_entry_polys(ens: MomentEnsemble) -> (Vec<EntryPoly>, Vec<EntryPoly>) {
    match ens {
        MomentEnsemble::Hermite { n } => {
            let nvars = 2 * n - 1;
            let diag: Vec<EntryPoly> = (0..n).map(|i| EntryPoly::var(nvars, i)).collect();
            let bsq: Vec<EntryPoly> = (0..n - 1)
                .map(|j| {
                    let mut exp = vec![0u16; nvars];
                    exp[n + j] = 2;
                    let mut p = EntryPoly::zero(nvars);
                    p.terms.insert(exp, BigRational::one());
                    p
                })
                .collect();
            (diag, bsq)
        }
        MomentEnsemble::Laguerre { m } => {
            // variables: X_j = x_j² (0..m), Y_j = y_j² (m..2m-1), storage order
            let nvars = 2 * m - 1;
            let mut diag = Vec::with_capacity(m);
            diag.push(EntryPoly::var(nvars, 0));
            for j in 1..m {
                diag.push(EntryPoly::var(nvars, j).add(&EntryPoly::var(nvars, m + j - 1)));
            }
            let bsq: Vec<EntryPoly> = (0..m - 1)
                .map(|j| {
                    // b_j² = X_j · Y_j
                    let mut exp = vec![0u16; nvars];
                    exp[j] = 1;
                    exp[m + j] = 1;
                    let mut p = EntryPoly::zero(nvars);
                    p.terms.insert(exp, BigRational::one());
                    p
                })
                .collect();
            (diag, bsq)
        }
    }
}

fn ensemble_order(ens: MomentEnsemble) -> usize {
    match ens {
        MomentEnsemble::Hermite { n } => n,
        MomentEnsemble::Laguerre { m } => m,
    }
}

/// Coefficients (in z) of the characteristic polynomial det(zI − T) with
/// formal entries, built from the bottom-right three-term recurrence.
fn charpoly_entry_coeffs(ens: MomentEnsemble, cap: u64) -> Result<Vec<EntryPoly>> {
    let n = ensemble_order(ens);
    let (diag, bsq) = tridiagonal_entry_polys(ens);
    let nvars = diag[0].nvars;
    // P_0 = 1
    let mut prev = vec![EntryPoly::constant(nvars, BigRational::one())];
    if n == 0 {
        return Ok(prev);
    }
    // P_1 = z − a_1 (bottom-right entry)
    let mut cur = vec![
        EntryPoly::zero(nvars).sub(&diag[n - 1]),
        EntryPoly::constant(nvars, BigRational::one()),
    ];
    for k in 2..=n {
        let a_k = &diag[n - k];
        let bsq_k = &bsq[n - k];
        let mut next: Vec<EntryPoly> = vec![EntryPoly::zero(nvars); k + 1];
        // z * P_{k-1}
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] = next[j + 1].add(c);
        }
        // − a_k P_{k-1}
        for (j, c) in cur.iter().enumerate() {
            next[j] = next[j].sub(&a_k.mul(c, cap)?);
        }
        // − b_{k-1}² P_{k-2}
        for (j, c) in prev.iter().enumerate() {
            next[j] = next[j].sub(&bsq_k.mul(c, cap)?);
        }
        let total: u64 = next.iter().map(EntryPoly::monomials).sum();
        if total > cap {
            return Err(Error::ResourceCap { needed: total, cap });
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// What to compute over the chosen ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentTarget {
    /// E[e_i(λ)], the expected i-th elementary symmetric polynomial of the
    /// eigenvalues.
    ElementarySymmetric(usize),
    /// E[det(T)^k].
    DeterminantPower(u32),
}

/// A symbolic moment request with an expansion guard.
#[derive(Clone, Copy, Debug)]
pub struct MomentQuery {
    pub ensemble: MomentEnsemble,
    pub target: MomentTarget,
    pub monomial_cap: u64,
}

impl MomentQuery {
    pub fn new(ensemble: MomentEnsemble, target: MomentTarget) -> Self {
        Self {
            ensemble,
            target,
            monomial_cap: DEFAULT_MONOMIAL_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.monomial_cap = cap;
        self
    }
}

/// E[e_i(λ)] as an exact polynomial: e_i is (−1)^i times the z^{n−i}
/// coefficient of the characteristic polynomial.
pub fn expected_elementary_symmetric(q: &MomentQuery) -> Result<BetaPoly> {
    let i = match q.target {
        MomentTarget::ElementarySymmetric(i) => i,
        _ => {
            return Err(Error::InvalidParameter(
                "query target is not an elementary symmetric index".into(),
            ))
        }
    };
    let n = ensemble_order(q.ensemble);
    if i > n {
        return Err(Error::InvalidParameter(format!(
            "e_{i} undefined for order {n}"
        )));
    }
    if i == 0 {
        return Ok(BetaPoly::one());
    }
    let coeffs = charpoly_entry_coeffs(q.ensemble, q.monomial_cap)?;
    let sub = substitute_moments(&coeffs[n - i], q.ensemble)?;
    Ok(if i % 2 == 0 { sub } else { sub.neg() })
}

/// E[det(T)^k] as an exact polynomial. Hermite results are checked against
/// the integer-coefficient invariant.
pub fn det_moment(q: &MomentQuery) -> Result<BetaPoly> {
    let k = match q.target {
        MomentTarget::DeterminantPower(k) => k,
        _ => {
            return Err(Error::InvalidParameter(
                "query target is not a determinant power".into(),
            ))
        }
    };
    if k == 0 {
        return Ok(BetaPoly::one());
    }
    let n = ensemble_order(q.ensemble);
    let (diag, bsq) = tridiagonal_entry_polys(q.ensemble);
    let nvars = diag[0].nvars;
    // leading-minor determinant recurrence from the top
    let mut prev = EntryPoly::constant(nvars, BigRational::one());
    let mut cur = diag[0].clone();
    for j in 1..n {
        let next = diag[j]
            .mul(&cur, q.monomial_cap)?
            .sub(&bsq[j - 1].mul(&prev, q.monomial_cap)?);
        prev = cur;
        cur = next;
    }
    let mut power = EntryPoly::constant(nvars, BigRational::one());
    for _ in 0..k {
        power = power.mul(&cur, q.monomial_cap)?;
    }
    let result = substitute_moments(&power, q.ensemble)?;
    if matches!(q.ensemble, MomentEnsemble::Hermite { .. }) && !result.integer_coefficients() {
        return Err(Error::Domain(
            "Hermite determinant moment produced non-integer coefficients; \
             this contradicts an exact theorem and indicates a bug"
                .into(),
        ));
    }
    Ok(result)
}

/// Monic expected characteristic polynomial: coefficients of y^j, each an
/// exact polynomial in (s, a).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedCharPoly {
    coeffs: Vec<BetaPoly>,
}

impl ExpectedCharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of y^j.
    pub fn coeff(&self, j: usize) -> &BetaPoly {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[BetaPoly] {
        &self.coeffs
    }

    pub fn eval(&self, y: f64, s: f64, a: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c.eval(s, a);
        }
        acc
    }

    pub fn to_json(&self) -> CharPolyJson {
        CharPolyJson {
            monic_in: "y".into(),
            vars: vec!["s".into(), "a".into()],
            coefficients: self.coeffs.iter().map(BetaPoly::to_json).collect(),
        }
    }
}

impl fmt::Display for ExpectedCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for j in (0..=n).rev() {
            let c = &self.coeffs[j];
            if c.is_zero() {
                continue;
            }
            let y_part = match j {
                0 => String::new(),
                1 => "y".to_string(),
                _ => format!("y^{j}"),
            };
            let single = c.terms.len() == 1;
            let c_str = c.to_string();
            let body = if j == 0 {
                c_str
            } else if c_str == "1" {
                y_part
            } else if c_str == "-1" {
                format!("-{y_part}")
            } else if single {
                format!("{c_str}*{y_part}")
            } else {
                format!("({c_str})*{y_part}")
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, "-{rest}")?;
            } else {
                write!(f, "+{body}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialized expected characteristic polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharPolyJson {
    pub monic_in: String,
    pub vars: Vec<String>,
    pub coefficients: Vec<PolyJson>,
}

/// E[P_n](y) over the chosen ensemble.
///
/// Hermite uses the linear recurrence E[P_k] = y E[P_{k−1}] − s(k−1)
/// E[P_{k−2}], valid because the step-k entries are independent of the
/// earlier minors. Laguerre entries share chi variables across the
/// recurrence, so that shortcut is invalid; the full symbolic expansion is
/// used instead.
pub fn expected_charpoly(ens: MomentEnsemble, cap: u64) -> Result<ExpectedCharPoly> {
    match ens {
        MomentEnsemble::Hermite { n } => {
            let mut prev = vec![BetaPoly::one()];
            if n == 0 {
                return Ok(ExpectedCharPoly { coeffs: prev });
            }
            let mut cur = vec![BetaPoly::zero(), BetaPoly::one()];
            for k in 2..=n {
                let mut next = vec![BetaPoly::zero(); k + 1];
                for (j, c) in cur.iter().enumerate() {
                    next[j + 1] = next[j + 1].add(c);
                }
                let s_k = BetaPoly::var_s()
                    .scale(&BigRational::from_integer(BigInt::from(k as i64 - 1)));
                for (j, c) in prev.iter().enumerate() {
                    next[j] = next[j].sub(&s_k.mul(c));
                }
                prev = cur;
                cur = next;
            }
            Ok(ExpectedCharPoly { coeffs: cur })
        }
        MomentEnsemble::Laguerre { .. } => {
            let coeffs = charpoly_entry_coeffs(ens, cap)?;
            let coeffs = coeffs
                .iter()
                .map(|c| substitute_moments(c, ens))
                .collect::<Result<Vec<_>>>()?;
            Ok(ExpectedCharPoly { coeffs })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{classical_monic, PolyFamily};

    fn s_poly(pairs: &[(u32, i64)]) -> BetaPoly {
        let mut p = BetaPoly::zero();
        for &(pow, c) in pairs {
            p.add_term(pow, 0, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }

    #[test]
    fn entry_moment_hermite_cases() {
        // subdiagonal k=1, power 2: E[χ_β²]/2 = s
        let m = entry_moment(EntryKind::HermiteSubdiag { k: 1 }, 2).unwrap();
        assert_eq!(m, s_poly(&[(1, 1)]));
        // power 4: s(s+1) = s² + s
        let m = entry_moment(EntryKind::HermiteSubdiag { k: 1 }, 4).unwrap();
        assert_eq!(m, s_poly(&[(2, 1), (1, 1)]));
        // Gaussian fourth moment: 3
        let m = entry_moment(EntryKind::HermiteDiag, 4).unwrap();
        assert_eq!(m, BetaPoly::from_integer(3));
        assert!(entry_moment(EntryKind::HermiteDiag, 3).unwrap().is_zero());
        assert!(matches!(
            entry_moment(EntryKind::HermiteSubdiag { k: 2 }, 3),
            Err(Error::OddChiMoment)
        ));
    }

    #[test]
    fn entry_moment_laguerre_cases() {
        // E[x_m²] = 2a for the top (i = m) entry
        let m = entry_moment(EntryKind::LaguerreDiagSq { i: 2, m: 2 }, 1).unwrap();
        let mut expect = BetaPoly::zero();
        expect.add_term(0, 1, BigRational::from_integer(BigInt::from(2)));
        assert_eq!(m, expect);
        // E[y_1²] = 2s
        let m = entry_moment(EntryKind::LaguerreSubdiagSq { i: 1 }, 1).unwrap();
        assert_eq!(m, s_poly(&[(1, 2)]));
    }

    #[test]
    fn elementary_symmetric_values() {
        // Hermite trace expectation vanishes at every order
        for n in 1..=6 {
            let q = MomentQuery::new(
                MomentEnsemble::Hermite { n },
                MomentTarget::ElementarySymmetric(1),
            );
            assert!(expected_elementary_symmetric(&q).unwrap().is_zero());
        }
        // n = 2 determinant: E[a₁a₂ − b²] = −s
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 2 },
            MomentTarget::ElementarySymmetric(2),
        );
        assert_eq!(expected_elementary_symmetric(&q).unwrap(), s_poly(&[(1, -1)]));
        // Laguerre m = 1 trace: 2a
        let q = MomentQuery::new(
            MomentEnsemble::Laguerre { m: 1 },
            MomentTarget::ElementarySymmetric(1),
        );
        let mut expect = BetaPoly::zero();
        expect.add_term(0, 1, BigRational::from_integer(BigInt::from(2)));
        assert_eq!(expected_elementary_symmetric(&q).unwrap(), expect);
        // e_0 is 1 by convention
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 3 },
            MomentTarget::ElementarySymmetric(0),
        );
        assert_eq!(expected_elementary_symmetric(&q).unwrap(), BetaPoly::one());
    }

    #[test]
    fn det_moment_values() {
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 1 },
            MomentTarget::DeterminantPower(2),
        );
        assert_eq!(det_moment(&q).unwrap(), BetaPoly::one());
        // n = 2, k = 2: 1 + E[b⁴] = 1 + s(s+1) = s² + s + 1
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 2 },
            MomentTarget::DeterminantPower(2),
        );
        let got = det_moment(&q).unwrap();
        assert_eq!(got, s_poly(&[(2, 1), (1, 1), (0, 1)]));
        assert_eq!(got.to_string(), "s^2+s+1");
        // Laguerre m = 2, k = 1: E[x₁²x₂²] = 4a(a−s) = 4a² − 4sa
        let q = MomentQuery::new(
            MomentEnsemble::Laguerre { m: 2 },
            MomentTarget::DeterminantPower(1),
        );
        let got = det_moment(&q).unwrap();
        let mut expect = BetaPoly::zero();
        expect.add_term(0, 2, BigRational::from_integer(BigInt::from(4)));
        expect.add_term(1, 1, BigRational::from_integer(BigInt::from(-4)));
        assert_eq!(got, expect);
        assert_eq!(got.to_string(), "4*a^2-4*s*a");
    }

    #[test]
    fn det_moment_display_minus_s() {
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 2 },
            MomentTarget::DeterminantPower(1),
        );
        assert_eq!(det_moment(&q).unwrap().to_string(), "-s");
    }

    #[test]
    fn hermite_det_moments_integer_coefficients() {
        for n in 1..=4 {
            for k in 0..=3 {
                let q = MomentQuery::new(
                    MomentEnsemble::Hermite { n },
                    MomentTarget::DeterminantPower(k),
                );
                let p = det_moment(&q).unwrap();
                assert!(p.integer_coefficients(), "n={n} k={k}: {p}");
            }
        }
    }

    #[test]
    fn degree_bound_on_elementary_symmetric() {
        // each b² carries one s, so deg_s E[e_i] <= i
        for n in 1..=5usize {
            for i in 0..=n {
                let q = MomentQuery::new(
                    MomentEnsemble::Hermite { n },
                    MomentTarget::ElementarySymmetric(i),
                );
                let p = expected_elementary_symmetric(&q).unwrap();
                assert!(p.degree_s() <= i as u32, "n={n} i={i}: deg {}", p.degree_s());
            }
        }
    }

    #[test]
    fn resource_cap_enforced() {
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 8 },
            MomentTarget::DeterminantPower(3),
        )
        .with_cap(50);
        match det_moment(&q) {
            Err(Error::ResourceCap { needed, cap }) => {
                assert!(needed > 50 && cap == 50);
            }
            other => panic!("expected resource cap, got {other:?}"),
        }
    }

    #[test]
    fn expected_charpoly_hermite_small() {
        let p = expected_charpoly(MomentEnsemble::Hermite { n: 2 }, DEFAULT_MONOMIAL_CAP).unwrap();
        assert_eq!(p.to_string(), "y^2-s");
        let p = expected_charpoly(MomentEnsemble::Hermite { n: 3 }, DEFAULT_MONOMIAL_CAP).unwrap();
        assert_eq!(p.to_string(), "y^3-3*s*y");
    }

    #[test]
    fn expected_charpoly_hermite_matches_probabilists_at_beta2() {
        // s = 1: coefficients equal the monic probabilists' Hermite exactly
        let one = BigRational::one();
        for n in 1..=6usize {
            let p = expected_charpoly(MomentEnsemble::Hermite { n }, DEFAULT_MONOMIAL_CAP).unwrap();
            let he = classical_monic(PolyFamily::HermiteProbabilists, n);
            for j in 0..=n {
                let coeff = p.coeff(j).eval_exact(&one, &one);
                assert_eq!(coeff, he.monic[j], "n={n} j={j}");
            }
        }
    }

    #[test]
    fn expected_charpoly_hermite_formal_identity() {
        // E[P_n](y) = s^{n/2} He_n(y/√s): the y^{n−2i} coefficient equals
        // He_n's coefficient times s^i, exactly
        for n in 1..=8usize {
            let p = expected_charpoly(MomentEnsemble::Hermite { n }, DEFAULT_MONOMIAL_CAP).unwrap();
            let he = classical_monic(PolyFamily::HermiteProbabilists, n);
            for j in 0..=n {
                let c = p.coeff(j);
                if (n - j) % 2 == 1 {
                    assert!(c.is_zero() && he.monic[j].is_zero(), "odd gap n={n} j={j}");
                    continue;
                }
                let i = ((n - j) / 2) as u32;
                let mut expect = BetaPoly::zero();
                expect.add_term(i, 0, he.monic[j].clone());
                assert_eq!(c, &expect, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn expected_charpoly_laguerre_small() {
        let p = expected_charpoly(MomentEnsemble::Laguerre { m: 1 }, DEFAULT_MONOMIAL_CAP).unwrap();
        // y − 2a
        assert_eq!(p.degree(), 1);
        let mut expect = BetaPoly::zero();
        expect.add_term(0, 1, BigRational::from_integer(BigInt::from(-2)));
        assert_eq!(p.coeff(0), &expect);
        // m = 2: y² − 4a·y + 4a(a−s)
        let p = expected_charpoly(MomentEnsemble::Laguerre { m: 2 }, DEFAULT_MONOMIAL_CAP).unwrap();
        let mut c1 = BetaPoly::zero();
        c1.add_term(0, 1, BigRational::from_integer(BigInt::from(-4)));
        assert_eq!(p.coeff(1), &c1);
        let mut c0 = BetaPoly::zero();
        c0.add_term(0, 2, BigRational::from_integer(BigInt::from(4)));
        c0.add_term(1, 1, BigRational::from_integer(BigInt::from(-4)));
        assert_eq!(p.coeff(0), &c0);
    }

    #[test]
    fn expected_charpoly_laguerre_matches_classical_at_beta2() {
        // at s = 1 (β = 2) the expected characteristic polynomial equals the
        // monic-in-y generalized Laguerre with α = a − m under y = 2z:
        // q(y) = 2^m m! (−1)^m L_m^{a−m}(y/2); verified at rational a points
        // (degree-m polynomial identity per coefficient)
        let one = BigRational::one();
        for m in 1..=4usize {
            let p = expected_charpoly(MomentEnsemble::Laguerre { m }, DEFAULT_MONOMIAL_CAP)
                .unwrap();
            for num in [3i64, 7, 10, 15, 21] {
                let a = BigRational::new(BigInt::from(num), BigInt::from(2));
                let alpha = &a - BigRational::from_integer(BigInt::from(m as i64));
                let l = classical_monic(PolyFamily::GeneralizedLaguerre { alpha }, m);
                // q(y) = 2^m p_z(y/2): coefficient of y^j is 2^{m-j} l[j]
                for j in 0..=m {
                    let got = p.coeff(j).eval_exact(&one, &a);
                    let scale = BigRational::from_integer(BigInt::from(2).pow((m - j) as u32));
                    assert_eq!(got, &l.monic[j] * scale, "m={m} a={a} j={j}");
                }
            }
        }
    }

    #[test]
    fn poly_json_schema() {
        let q = MomentQuery::new(
            MomentEnsemble::Hermite { n: 2 },
            MomentTarget::DeterminantPower(2),
        );
        let json = serde_json::to_string(&det_moment(&q).unwrap().to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"vars":["s","a"],"terms":[{"exp":[2,0],"num":"1","den":"1"},{"exp":[1,0],"num":"1","den":"1"},{"exp":[0,0],"num":"1","den":"1"}]}"#
        );
    }

    #[test]
    fn beta_poly_eval_routes_agree() {
        let q = MomentQuery::new(
            MomentEnsemble::Laguerre { m: 3 },
            MomentTarget::DeterminantPower(1),
        );
        let p = det_moment(&q).unwrap();
        let s = 1.35;
        let a = 4.2;
        let exact = p.eval_exact(
            &BigRational::new(BigInt::from(135), BigInt::from(100)),
            &BigRational::new(BigInt::from(42), BigInt::from(10)),
        );
        let approx = p.eval(s, a);
        let exact_f = exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap();
        assert!((approx - exact_f).abs() < 1e-10 * exact_f.abs());
    }
}
