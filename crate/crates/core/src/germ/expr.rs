//! Logarithmico-exponential germs `Σ a · t^c · Π_m (log_m t)^{r_m}`.
//!
//! Terms are kept merged and sorted by decreasing growth. The growth order is
//! lexicographic on `(c, r_1, r_2, ...)`: any power of `log_m` beats every power
//! of `log_{m+1}`, and every power of `t` beats every power of any logarithm.

use rug::Rational;
use std::cmp::Ordering;
use std::fmt;

use super::basis::{Basis, SymbolicReal, ONE};
use super::interval::Interval;
use super::linalg::NumberField;
use crate::error::{Error, Result};

/// `coeff · t^{t_exp} · Π_m (log_m t)^{logs[m-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GermTerm {
    pub coeff: SymbolicReal,
    pub t_exp: SymbolicReal,
    /// Exponent of `log_m t` at index `m - 1`; trailing zeros are trimmed.
    pub logs: Vec<Rational>,
}

/// The growth signature of a term, i.e. everything but the coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub t_exp: SymbolicReal,
    pub logs: Vec<Rational>,
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|x| *x == 0) {
        v.pop();
    }
    v
}

impl GermTerm {
    pub fn new(coeff: SymbolicReal, t_exp: SymbolicReal) -> Self {
        GermTerm { coeff, t_exp, logs: Vec::new() }
    }

    /// Rational coefficient times a rational power of `t`.
    pub fn power(coeff: impl Into<Rational>, p: impl Into<Rational>) -> Self {
        GermTerm::new(SymbolicReal::rational(coeff), SymbolicReal::rational(p))
    }

    /// Attach `(log_depth t)^r`; depth 0 means no logarithm.
    pub fn with_log(mut self, depth: u32, r: impl Into<Rational>) -> Self {
        let r = r.into();
        if depth > 0 {
            let i = depth as usize - 1;
            if self.logs.len() <= i {
                self.logs.resize(i + 1, Rational::new());
            }
            self.logs[i] = r;
        }
        self.logs = trim(std::mem::take(&mut self.logs));
        self
    }

    pub fn signature(&self) -> Signature {
        Signature { t_exp: self.t_exp.clone(), logs: self.logs.clone() }
    }

    pub fn log_exp(&self, depth: usize) -> Rational {
        self.logs.get(depth - 1).cloned().unwrap_or_default()
    }
}

impl Signature {
    pub fn unit() -> Self {
        Signature { t_exp: SymbolicReal::zero(), logs: Vec::new() }
    }

    pub fn power(p: impl Into<Rational>) -> Self {
        Signature { t_exp: SymbolicReal::rational(p), logs: Vec::new() }
    }

    /// `t^d` with `d` a non-negative integer.
    pub fn polynomial_degree(&self) -> Option<u32> {
        if !self.logs.is_empty() {
            return None;
        }
        let q = self.t_exp.as_rational()?;
        if *q.denom() == 1 && q >= 0 {
            q.numer().to_u32()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial_degree().is_some()
    }
}

/// Certified comparison of two exponents.
pub fn cmp_exponent(basis: &Basis, a: &SymbolicReal, b: &SymbolicReal) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return Ok(x.cmp(&y));
    }
    let d = a.sub(b);
    let mut prec = 128;
    while prec <= 4096 {
        if let Some(s) = basis.enclose(&d, prec)?.sign() {
            return Ok(s);
        }
        prec *= 2;
    }
    Err(Error::Unknown(format!("cannot order exponents {a} and {b}")))
}

fn cmp_logs(a: &[Rational], b: &[Rational]) -> Ordering {
    let n = a.len().max(b.len());
    let z = Rational::new();
    for i in 0..n {
        let x = a.get(i).unwrap_or(&z);
        let y = b.get(i).unwrap_or(&z);
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Growth order of signatures: `Less` means strictly slower growth.
pub fn cmp_signature(basis: &Basis, a: &Signature, b: &Signature) -> Result<Ordering> {
    Ok(cmp_exponent(basis, &a.t_exp, &b.t_exp)?.then_with(|| cmp_logs(&a.logs, &b.logs)))
}

/// `sig ≺ 1`, i.e. terms with this signature tend to zero.
pub fn is_decaying(basis: &Basis, sig: &Signature) -> Result<bool> {
    Ok(cmp_signature(basis, sig, &Signature::unit())? == Ordering::Less)
}

/// A germ in normal form: merged, nonzero terms sorted by decreasing growth.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HardyExpr {
    terms: Vec<GermTerm>,
}

impl HardyExpr {
    pub fn zero() -> Self {
        HardyExpr::default()
    }

    pub fn new(basis: &Basis, terms: Vec<GermTerm>) -> Result<Self> {
        for t in &terms {
            basis.check_symbols(&t.coeff)?;
            basis.check_symbols(&t.t_exp)?;
        }
        let mut merged: Vec<GermTerm> = Vec::new();
        for mut t in terms {
            t.logs = trim(t.logs);
            if t.coeff.is_zero() {
                continue;
            }
            if let Some(m) = merged.iter_mut().find(|m| m.t_exp == t.t_exp && m.logs == t.logs) {
                m.coeff = m.coeff.add(&t.coeff);
            } else {
                merged.push(t);
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        let mut err = None;
        merged.sort_by(|a, b| match cmp_signature(basis, &b.signature(), &a.signature()) {
            Ok(o) => o,
            Err(e) => {
                err.get_or_insert(e);
                Ordering::Equal
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(HardyExpr { terms: merged })
    }

    /// Polynomial with rational coefficients, `coeffs[d]` multiplying `t^d`.
    pub fn polynomial(coeffs: &[Rational]) -> Self {
        let terms = coeffs.iter().enumerate().map(|(d, c)| GermTerm::power(c.clone(), d as i64)).collect();
        HardyExpr::new(&Basis::new(), terms).expect("rational exponents always compare")
    }

    /// Single term with rational data.
    pub fn monomial(coeff: impl Into<Rational>, p: impl Into<Rational>) -> Self {
        HardyExpr::new(&Basis::new(), vec![GermTerm::power(coeff, p)]).expect("rational term")
    }

    pub fn terms(&self) -> &[GermTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&GermTerm> {
        self.terms.first()
    }

    pub fn add(&self, basis: &Basis, o: &HardyExpr) -> Result<HardyExpr> {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        HardyExpr::new(basis, t)
    }

    pub fn neg(&self) -> HardyExpr {
        HardyExpr {
            terms: self.terms.iter().map(|t| GermTerm { coeff: t.coeff.neg(), ..t.clone() }).collect(),
        }
    }

    pub fn sub(&self, basis: &Basis, o: &HardyExpr) -> Result<HardyExpr> {
        self.add(basis, &o.neg())
    }

    /// Multiply by a constant using the product table.
    pub fn scale(&self, basis: &Basis, c: &SymbolicReal) -> Result<HardyExpr> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let coeff = match c.as_rational() {
                Some(q) => t.coeff.scale(&q),
                None => basis.mul(&t.coeff, c)?,
            };
            terms.push(GermTerm { coeff, ..t.clone() });
        }
        HardyExpr::new(basis, terms)
    }

    pub fn scale_rational(&self, q: &Rational) -> HardyExpr {
        if *q == 0 {
            return HardyExpr::zero();
        }
        HardyExpr { terms: self.terms.iter().map(|t| GermTerm { coeff: t.coeff.scale(q), ..t.clone() }).collect() }
    }

    /// Symbols occurring in coefficients.
    pub fn coefficient_symbols(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().flat_map(|t| t.coeff.symbols()).filter(|s| *s != ONE)
    }

    /// Exact derivative; iterated logarithms contribute their full chain rule factor.
    pub fn derivative(&self, basis: &Basis) -> Result<HardyExpr> {
        let mut out = Vec::new();
        for t in &self.terms {
            // power rule
            if !t.t_exp.is_zero() {
                let coeff = match t.t_exp.as_rational() {
                    Some(q) => t.coeff.scale(&q),
                    None => basis.mul(&t.coeff, &t.t_exp)?,
                };
                out.push(GermTerm {
                    coeff,
                    t_exp: t.t_exp.sub(&SymbolicReal::one()),
                    logs: t.logs.clone(),
                });
            }
            // d/dt log_m t = 1 / (t log_1 t ... log_{m-1} t)
            for (i, r) in t.logs.iter().enumerate() {
                if *r == 0 {
                    continue;
                }
                let mut logs = t.logs.clone();
                for l in logs.iter_mut().take(i + 1) {
                    *l -= 1;
                }
                out.push(GermTerm { coeff: t.coeff.scale(r), t_exp: t.t_exp.sub(&SymbolicReal::one()), logs });
            }
        }
        HardyExpr::new(basis, out)
    }

    pub fn nth_derivative(&self, basis: &Basis, k: usize) -> Result<HardyExpr> {
        let mut f = self.clone();
        for _ in 0..k {
            f = f.derivative(basis)?;
        }
        Ok(f)
    }

    /// Split into (polynomial part, non-polynomial non-decaying part, decaying part).
    pub fn split(&self, basis: &Basis) -> Result<(HardyExpr, HardyExpr, HardyExpr)> {
        let (mut p, mut np, mut dec) = (Vec::new(), Vec::new(), Vec::new());
        for t in &self.terms {
            let s = t.signature();
            if s.is_polynomial() {
                p.push(t.clone());
            } else if is_decaying(basis, &s)? {
                dec.push(t.clone());
            } else {
                np.push(t.clone());
            }
        }
        Ok((HardyExpr { terms: p }, HardyExpr { terms: np }, HardyExpr { terms: dec }))
    }

    /// Coefficient of `t^d` among the polynomial terms.
    pub fn poly_coeff(&self, d: u32) -> SymbolicReal {
        self.terms
            .iter()
            .find(|t| t.signature().polynomial_degree() == Some(d))
            .map(|t| t.coeff.clone())
            .unwrap_or_default()
    }

    /// Coefficient attached to a given signature.
    pub fn coeff_of(&self, sig: &Signature) -> SymbolicReal {
        self.terms
            .iter()
            .find(|t| t.t_exp == sig.t_exp && t.logs == sig.logs)
            .map(|t| t.coeff.clone())
            .unwrap_or_default()
    }

    /// Largest `d` with a `t^d` term, if the germ is a polynomial.
    pub fn as_polynomial(&self) -> Option<Vec<SymbolicReal>> {
        let mut out: Vec<SymbolicReal> = Vec::new();
        for t in &self.terms {
            let d = t.signature().polynomial_degree()? as usize;
            if out.len() <= d {
                out.resize(d + 1, SymbolicReal::zero());
            }
            out[d] = t.coeff.clone();
        }
        Some(out)
    }

    /// Interval enclosure of `f(t)`; requires every iterated logarithm used to be positive.
    pub fn eval(&self, basis: &Basis, t: &Interval) -> Result<Interval> {
        let prec = t.prec();
        let depth = self.terms.iter().map(|x| x.logs.len()).max().unwrap_or(0);
        let mut logs: Vec<Interval> = Vec::with_capacity(depth);
        let mut cur = t.clone();
        if cur.sign() != Some(Ordering::Greater) {
            return Err(Error::Domain("germs are evaluated at t > 0".into()));
        }
        let ln_t = cur.ln()?;
        for m in 0..depth {
            let l = cur.ln().map_err(|_| Error::Domain(format!("log_{} t is undefined here", m + 1)))?;
            cur = l.clone();
            logs.push(l);
        }
        let mut acc = Interval::zero(prec);
        for term in &self.terms {
            let mut v = basis.enclose(&term.coeff, prec)?;
            if !term.t_exp.is_zero() {
                let p = match term.t_exp.as_rational() {
                    Some(q) if *q.denom() == 1 && q.numer().to_i32().is_some() => t.powi(q.numer().to_i32().unwrap())?,
                    _ => ln_t.mul(&basis.enclose(&term.t_exp, prec)?).exp(),
                };
                v = v.mul(&p);
            }
            for (i, r) in term.logs.iter().enumerate() {
                if *r == 0 {
                    continue;
                }
                if logs[i].sign() != Some(Ordering::Greater) {
                    return Err(Error::Domain(format!("log_{} t must be positive", i + 1)));
                }
                v = v.mul(&logs[i].pow_rational(r)?);
            }
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    /// Midpoint of a 128-bit enclosure.
    pub fn eval_f64(&self, basis: &Basis, t: f64) -> Result<f64> {
        Ok(self.eval(basis, &Interval::point_f64(128, t))?.mid_f64())
    }

    /// Value with at least `digits` correct significant digits, escalating precision.
    pub fn eval_certified(&self, basis: &Basis, t: f64, digits: u32) -> Result<Interval> {
        let mut prec = (digits as f64 * 3.33) as u32 + 64;
        let cap = 8192;
        while prec <= cap {
            let v = self.eval(basis, &Interval::point_f64(prec, t))?;
            let w = v.width_f64();
            let mag = v.abs_upper_f64();
            if w <= mag * 10f64.powi(-(digits as i32)) || (mag == 0.0 && w == 0.0) {
                return Ok(v);
            }
            prec *= 2;
        }
        Err(Error::PrecisionExhausted(format!("cannot certify {digits} digits at t = {t}")))
    }
}

impl fmt::Display for GermTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeff.to_string();
        if self.coeff.coords().len() > 1 {
            write!(f, "({c})")?;
        } else {
            write!(f, "{c}")?;
        }
        if !self.t_exp.is_zero() {
            match self.t_exp.as_rational() {
                Some(q) if q == 1 => write!(f, "*t")?,
                Some(q) => write!(f, "*t^{q}")?,
                None => write!(f, "*t^({})", self.t_exp)?,
            }
        }
        for (i, r) in self.logs.iter().enumerate() {
            if *r == 0 {
                continue;
            }
            let name = if i == 0 { "log(t)".to_string() } else { format!("log_{}(t)", i + 1) };
            if *r == 1 {
                write!(f, "*{name}")?;
            } else {
                write!(f, "*{name}^{r}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for HardyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Limit of `f/g` when both grow at the same rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Ratio {
    /// Exact value when the leading coefficients allow it.
    pub exact: Option<SymbolicReal>,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GrowthComparison {
    /// `f ≺ g`
    Precedes,
    /// `f ≍ g` with the limit of `f/g`
    SameOrder(Ratio),
    /// `f ≻ g`
    Dominates,
}

/// Compare the growth of two germs by their leading signatures.
pub fn compare(basis: &Basis, f: &HardyExpr, g: &HardyExpr) -> Result<GrowthComparison> {
    let (a, b) = match (f.leading(), g.leading()) {
        (None, None) => return Err(Error::Precondition("cannot compare two zero germs".into())),
        (None, Some(_)) => return Ok(GrowthComparison::Precedes),
        (Some(_), None) => return Ok(GrowthComparison::Dominates),
        (Some(a), Some(b)) => (a, b),
    };
    Ok(match cmp_signature(basis, &a.signature(), &b.signature())? {
        Ordering::Less => GrowthComparison::Precedes,
        Ordering::Greater => GrowthComparison::Dominates,
        Ordering::Equal => {
            let approx = basis.value_f64(&a.coeff) / basis.value_f64(&b.coeff);
            let exact = match a.coeff.rational_ratio(&b.coeff) {
                Some(q) => Some(SymbolicReal::rational(q)),
                None => NumberField::generated_by(basis, a.coeff.symbols().chain(b.coeff.symbols()))
                    .ok()
                    .and_then(|fld| basis.inverse_in(&b.coeff, &fld.symbols).ok().flatten())
                    .and_then(|inv| basis.mul(&a.coeff, &inv).ok()),
            };
            GrowthComparison::SameOrder(Ratio { exact, approx })
        }
    })
}

/// Least `d ≥ 1` with `|f| ≪ t^d`.
pub fn degree(basis: &Basis, f: &HardyExpr) -> Result<u32> {
    let Some(lead) = f.leading() else { return Ok(1) };
    let c = &lead.t_exp;
    let logs_positive = cmp_logs(&lead.logs, &[]) == Ordering::Greater;
    let d = match c.as_rational() {
        Some(q) => {
            if *q.denom() == 1 {
                let n = q.numer().to_i64().ok_or_else(|| Error::Precondition("exponent too large".into()))?;
                if logs_positive {
                    n + 1
                } else {
                    n
                }
            } else {
                q.ceil().numer().to_i64().unwrap_or(i64::MAX)
            }
        }
        None => {
            let mut prec = 128;
            loop {
                let iv = basis.enclose(c, prec)?;
                if let Some(k) = iv.floor_certified() {
                    break k.to_i64().unwrap_or(i64::MAX) + 1;
                }
                prec *= 2;
                if prec > 4096 {
                    return Err(Error::Unknown(format!("cannot locate exponent {c} between integers")));
                }
            }
        }
    };
    Ok(d.max(1) as u32)
}

/// `(m_1, ..., m_d)`: number of asymptotic-equivalence classes of each degree.
pub fn characteristic_vector(basis: &Basis, family: &[HardyExpr]) -> Result<Vec<u32>> {
    let mut classes: Vec<(u32, Signature, SymbolicReal)> = Vec::new();
    for f in family {
        let d = degree(basis, f)?;
        let lead = f.leading().ok_or_else(|| Error::Precondition("zero germ in family".into()))?;
        let key = (d, lead.signature(), lead.coeff.clone());
        if !classes.contains(&key) {
            classes.push(key);
        }
    }
    let dmax = classes.iter().map(|c| c.0).max().unwrap_or(0);
    let mut v = vec![0u32; dmax as usize];
    for c in &classes {
        v[c.0 as usize - 1] += 1;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn b() -> Basis {
        Basis::new()
    }

    #[test]
    fn normalizes_terms() {
        let f = HardyExpr::new(&b(), vec![
            GermTerm::power(1, 1),
            GermTerm::power(2, 3),
            GermTerm::power(-1, 1),
            GermTerm::power(1, q(1, 2)).with_log(1, 1),
        ])
        .unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.leading().unwrap().t_exp, SymbolicReal::int(3));
    }

    #[test]
    fn derivative_of_t_log_t() {
        let f = HardyExpr::new(&b(), vec![GermTerm::power(1, 1).with_log(1, 1)]).unwrap();
        let d = f.derivative(&b()).unwrap();
        let want = HardyExpr::new(&b(), vec![GermTerm::power(1, 0).with_log(1, 1), GermTerm::power(1, 0)]).unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn derivative_of_log_log() {
        let f = HardyExpr::new(&b(), vec![GermTerm::power(1, 0).with_log(2, 1)]).unwrap();
        let d = f.derivative(&b()).unwrap();
        // 1 / (t log t)
        let want = HardyExpr::new(&b(), vec![GermTerm::power(1, -1).with_log(1, -1)]).unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn growth_comparisons() {
        let t = HardyExpr::monomial(1, 1);
        let t32 = HardyExpr::monomial(1, q(3, 2));
        let tlog = HardyExpr::new(&b(), vec![GermTerm::power(1, 1).with_log(1, 1)]).unwrap();
        assert_eq!(compare(&b(), &t32, &tlog).unwrap(), GrowthComparison::Dominates);
        assert_eq!(compare(&b(), &t, &tlog).unwrap(), GrowthComparison::Precedes);
        let two_t = HardyExpr::monomial(2, 1);
        match compare(&b(), &two_t, &t).unwrap() {
            GrowthComparison::SameOrder(r) => assert_eq!(r.exact, Some(SymbolicReal::int(2))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(&b(), &HardyExpr::monomial(1, q(5, 2))).unwrap(), 3);
        assert_eq!(degree(&b(), &HardyExpr::monomial(1, 2)).unwrap(), 2);
        assert_eq!(degree(&b(), &HardyExpr::monomial(1, q(-1, 2))).unwrap(), 1);
        let tlog = HardyExpr::new(&b(), vec![GermTerm::power(1, 1).with_log(1, 1)]).unwrap();
        assert_eq!(degree(&b(), &tlog).unwrap(), 2);
        let log = HardyExpr::new(&b(), vec![GermTerm::power(1, 0).with_log(1, 1)]).unwrap();
        assert_eq!(degree(&b(), &log).unwrap(), 1);
    }

    #[test]
    fn characteristic_vectors() {
        let f1 = HardyExpr::monomial(1, q(5, 2));
        let f2 = HardyExpr::new(&b(), vec![GermTerm::power(1, q(5, 2)), GermTerm::power(1, 1)]).unwrap();
        let f3 = HardyExpr::monomial(1, 1);
        assert_eq!(characteristic_vector(&b(), &[f1, f2, f3]).unwrap(), vec![1, 0, 1]);
        let v = characteristic_vector(&b(), &[HardyExpr::monomial(1, 1), HardyExpr::monomial(2, 1)]).unwrap();
        assert_eq!(v, vec![2]);
        assert_eq!(characteristic_vector(&b(), &[HardyExpr::monomial(1, 2)]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn eval_domain() {
        let ll = HardyExpr::new(&b(), vec![GermTerm::power(1, 0).with_log(2, 1)]).unwrap();
        assert!(ll.eval_f64(&b(), 2.0).is_err());
        let v = ll.eval_f64(&b(), 100.0).unwrap();
        assert!((v - 100f64.ln().ln()).abs() < 1e-14);
    }

    #[test]
    fn eval_certified_digits() {
        let f = HardyExpr::monomial(1, q(1, 2));
        let v = f.eval_certified(&b(), 2.0, 50).unwrap();
        assert!(v.width_f64() < 1e-49);
        assert!((v.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    fn arb_term() -> impl Strategy<Value = GermTerm> {
        (-5i64..6, -6i64..7, 1i64..4, -2i64..3, 0u32..3).prop_map(|(c, pn, pd, r, depth)| {
            let c = if c == 0 { 1 } else { c };
            GermTerm::power(c, q(pn, pd)).with_log(depth, r)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn derivative_matches_difference_quotient(terms in proptest::collection::vec(arb_term(), 1..4)) {
            let basis = b();
            let f = HardyExpr::new(&basis, terms).unwrap();
            let d = f.derivative(&basis).unwrap();
            let t = 50.0;
            let h = 1e-5;
            let num = (f.eval_f64(&basis, t + h).unwrap() - f.eval_f64(&basis, t - h).unwrap()) / (2.0 * h);
            let ex = d.eval_f64(&basis, t).unwrap();
            prop_assert!((num - ex).abs() <= 1e-5 * (1.0 + ex.abs()), "{} vs {}", num, ex);
        }

        #[test]
        fn derivative_is_linear(a in proptest::collection::vec(arb_term(), 1..4), c in proptest::collection::vec(arb_term(), 1..4)) {
            let basis = b();
            let f = HardyExpr::new(&basis, a).unwrap();
            let g = HardyExpr::new(&basis, c).unwrap();
            let lhs = f.add(&basis, &g).unwrap().derivative(&basis).unwrap();
            let rhs = f.derivative(&basis).unwrap().add(&basis, &g.derivative(&basis).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn comparison_is_antisymmetric(a in proptest::collection::vec(arb_term(), 1..3), c in proptest::collection::vec(arb_term(), 1..3)) {
            let basis = b();
            let f = HardyExpr::new(&basis, a).unwrap();
            let g = HardyExpr::new(&basis, c).unwrap();
            prop_assume!(!f.is_zero() && !g.is_zero());
            let x = compare(&basis, &f, &g).unwrap();
            let y = compare(&basis, &g, &f).unwrap();
            match (x, y) {
                (GrowthComparison::Precedes, GrowthComparison::Dominates) => {}
                (GrowthComparison::Dominates, GrowthComparison::Precedes) => {}
                (GrowthComparison::SameOrder(_), GrowthComparison::SameOrder(_)) => {}
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
