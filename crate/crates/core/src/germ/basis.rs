//! Declared real constants and exact linear combinations of them.
//!
//! A [`SymbolicReal`] is a finite rational combination of named constants,
//! with the reserved symbol `"1"` standing for the rational unit. Products of
//! two constants are never guessed: they come from the [`Basis`] product table.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::interval::Interval;
use super::linalg::QMatrix;
use crate::error::{Error, Result};

/// Name of the rational unit.
pub const ONE: &str = "1";

/// Parse `"p/q"`, an integer, or a finite decimal such as `"0.05"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("not a rational number: `{s}`"));
    if s.contains('/') {
        return Rational::from_str_radix(s, 10).map_err(|_| bad());
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let n = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let mut q = Rational::from(n);
    if scale >= 0 {
        q *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        q /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Exact element of the rational span of the declared constants.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SymbolicReal {
    coords: BTreeMap<String, Rational>,
}

impl SymbolicReal {
    pub fn zero() -> Self {
        SymbolicReal::default()
    }

    pub fn one() -> Self {
        SymbolicReal::rational(Rational::from(1))
    }

    pub fn rational(q: impl Into<Rational>) -> Self {
        SymbolicReal::term(ONE, q)
    }

    pub fn int(n: i64) -> Self {
        SymbolicReal::rational(Rational::from(n))
    }

    pub fn symbol(name: &str) -> Self {
        SymbolicReal::term(name, Rational::from(1))
    }

    pub fn term(name: &str, q: impl Into<Rational>) -> Self {
        let q = q.into();
        let mut coords = BTreeMap::new();
        if q != 0 {
            coords.insert(name.to_string(), q);
        }
        SymbolicReal { coords }
    }

    pub fn from_coords<I, S>(it: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut r = SymbolicReal::zero();
        for (k, v) in it {
            r.add_term(&k.into(), &v);
        }
        r
    }

    pub fn coords(&self) -> &BTreeMap<String, Rational> {
        &self.coords
    }

    pub fn coord(&self, name: &str) -> Rational {
        self.coords.get(name).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// The rational value when no constant other than `"1"` occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coords.len() {
            0 => Some(Rational::new()),
            1 => self.coords.get(ONE).cloned(),
            _ => None,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.coords.keys().map(|s| s.as_str())
    }

    fn add_term(&mut self, name: &str, q: &Rational) {
        if *q == 0 {
            return;
        }
        let e = self.coords.entry(name.to_string()).or_default();
        *e += q;
        if *e == 0 {
            self.coords.remove(name);
        }
    }

    pub fn add(&self, o: &SymbolicReal) -> SymbolicReal {
        let mut r = self.clone();
        for (k, v) in &o.coords {
            r.add_term(k, v);
        }
        r
    }

    pub fn sub(&self, o: &SymbolicReal) -> SymbolicReal {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SymbolicReal {
        SymbolicReal { coords: self.coords.iter().map(|(k, v)| (k.clone(), Rational::from(-v))).collect() }
    }

    pub fn scale(&self, q: &Rational) -> SymbolicReal {
        if *q == 0 {
            return SymbolicReal::zero();
        }
        SymbolicReal { coords: self.coords.iter().map(|(k, v)| (k.clone(), Rational::from(v * q))).collect() }
    }

    /// If `self = q * other` for a rational `q`, return `q`.
    pub fn rational_ratio(&self, other: &SymbolicReal) -> Option<Rational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Rational::new());
        }
        if self.coords.len() != other.coords.len() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for (k, v) in &self.coords {
            let w = other.coords.get(k)?;
            let r = Rational::from(v / w);
            match &ratio {
                Some(x) if *x != r => return None,
                _ => ratio = Some(r),
            }
        }
        ratio
    }
}

impl fmt::Debug for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // rational part first
        let ordered = self.coords.get_key_value(ONE).into_iter().chain(self.coords.iter().filter(|(k, _)| *k != ONE));
        for (k, v) in ordered {
            let neg = *v < 0;
            let a = Rational::from(v.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == ONE {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{a}*{k}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SymbolicReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&str, String> = self.coords.iter().map(|(k, v)| (k.as_str(), v.to_string())).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
            Map(BTreeMap<String, RawQ>),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum RawQ {
            Int(i64),
            Str(String),
        }
        let q = |r: RawQ| -> std::result::Result<Rational, D::Error> {
            match r {
                RawQ::Int(i) => Ok(Rational::from(i)),
                RawQ::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom),
            }
        };
        match Raw::deserialize(d)? {
            Raw::Num(x) => {
                if x.fract() == 0.0 && x.abs() < 9e15 {
                    Ok(SymbolicReal::int(x as i64))
                } else {
                    Err(serde::de::Error::custom("non-integer numbers must be given as strings"))
                }
            }
            Raw::Str(s) => Ok(SymbolicReal::rational(parse_rational(&s).map_err(serde::de::Error::custom)?)),
            Raw::Map(m) => {
                let mut out = SymbolicReal::zero();
                for (k, v) in m {
                    out.add_term(&k, &q(v)?);
                }
                Ok(out)
            }
        }
    }
}

/// A declared real constant.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Constant {
    pub name: String,
    pub value: String,
    #[serde(default = "default_true")]
    pub independent: bool,
}

fn default_true() -> bool {
    true
}

/// One entry of the product table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: SymbolicReal,
}

/// Declared constants with their decimal values and product table.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    constants: BTreeMap<String, (Constant, Rational)>,
    products: BTreeMap<(String, String), SymbolicReal>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// `x` as a plain decimal literal with `digits` digits after the point (truncated).
pub fn plain_decimal(x: &Float, digits: usize) -> String {
    let scale = Integer::from(10).pow(digits as u32);
    let scaled = Float::with_val(x.prec(), x * &scale);
    let mut k = scaled.abs().trunc().to_integer().unwrap_or_default().to_string();
    if k.len() <= digits {
        k = format!("{}{}", "0".repeat(digits + 1 - k.len()), k);
    }
    let (ip, fp) = k.split_at(k.len() - digits);
    let sign = if x.is_sign_negative() && (ip.chars().chain(fp.chars()).any(|c| c != '0')) { "-" } else { "" };
    format!("{sign}{ip}.{fp}")
}

/// Minimum number of significant digits accepted for a constant.
pub const MIN_DIGITS: usize = 64;

impl Basis {
    pub fn new() -> Self {
        Basis::default()
    }

    /// Declare a constant from a decimal string carrying at least 64 significant digits.
    pub fn declare(&mut self, name: &str, value: &str, independent: bool) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidConstant { name: name.to_string(), reason: reason.to_string() };
        if name == ONE || name.is_empty() {
            return Err(invalid("reserved name"));
        }
        let v = value.trim();
        let body = v.trim_start_matches(['-', '+']);
        let (ip, fp) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if ip.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return Err(invalid("value must be a plain decimal literal"));
        }
        let sig = format!("{ip}{fp}").trim_start_matches('0').len();
        if sig < MIN_DIGITS {
            return Err(invalid(&format!("only {sig} significant digits, need {MIN_DIGITS}")));
        }
        let err = Rational::from((1, Integer::from(Integer::u_pow_u(10, fp.len() as u32))));
        let c = Constant { name: name.to_string(), value: v.to_string(), independent };
        self.constants.insert(name.to_string(), (c, err));
        Ok(())
    }

    pub fn declare_product(&mut self, a: &str, b: &str, value: SymbolicReal) -> Result<()> {
        for s in [a, b].into_iter().chain(value.symbols()) {
            if s != ONE && !self.constants.contains_key(s) {
                return Err(Error::UnknownConstant(s.to_string()));
            }
        }
        if a == ONE || b == ONE {
            return Err(Error::Schema("products with the unit are implicit".into()));
        }
        self.products.insert(key(a, b), value);
        Ok(())
    }

    pub fn constants(&self) -> impl Iterator<Item = &Constant> {
        self.constants.values().map(|(c, _)| c)
    }

    pub fn product_entries(&self) -> Vec<ProductEntry> {
        self.products
            .iter()
            .map(|((a, b), v)| ProductEntry { left: a.clone(), right: b.clone(), value: v.clone() })
            .collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        name == ONE || self.constants.contains_key(name)
    }

    pub fn is_independent(&self, name: &str) -> bool {
        name == ONE || self.constants.get(name).map(|c| c.0.independent).unwrap_or(false)
    }

    pub fn check_symbols(&self, x: &SymbolicReal) -> Result<()> {
        for s in x.symbols() {
            if !self.contains(s) {
                return Err(Error::UnknownConstant(s.to_string()));
            }
        }
        Ok(())
    }

    /// Product of two basis symbols.
    pub fn product(&self, a: &str, b: &str) -> Result<SymbolicReal> {
        if a == ONE {
            return Ok(SymbolicReal::symbol(b));
        }
        if b == ONE {
            return Ok(SymbolicReal::symbol(a));
        }
        self.products.get(&key(a, b)).cloned().ok_or_else(|| Error::MissingProduct(a.to_string(), b.to_string()))
    }

    pub fn has_product(&self, a: &str, b: &str) -> bool {
        a == ONE || b == ONE || self.products.contains_key(&key(a, b))
    }

    pub fn mul(&self, x: &SymbolicReal, y: &SymbolicReal) -> Result<SymbolicReal> {
        let mut out = SymbolicReal::zero();
        for (a, p) in x.coords() {
            for (b, q) in y.coords() {
                let pq = Rational::from(p * q);
                out = out.add(&self.product(a, b)?.scale(&pq));
            }
        }
        Ok(out)
    }

    /// Enclosure of a single constant at `prec` bits.
    pub fn enclose_symbol(&self, name: &str, prec: u32) -> Result<Interval> {
        if name == ONE {
            return Ok(Interval::one(prec));
        }
        let (c, err) = self.constants.get(name).ok_or_else(|| Error::UnknownConstant(name.to_string()))?;
        Interval::decimal(prec, &c.value, err)
    }

    pub fn enclose(&self, x: &SymbolicReal, prec: u32) -> Result<Interval> {
        let mut acc = Interval::zero(prec);
        for (k, q) in x.coords() {
            let term = if k == ONE { Interval::rational(prec, q) } else { self.enclose_symbol(k, prec)?.mul_rational(q) };
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Decimal error of the stored value of a constant.
    pub fn symbol_error(&self, name: &str) -> Rational {
        self.constants.get(name).map(|c| c.1.clone()).unwrap_or_default()
    }

    /// Number of decimal digits stored for the least precise constant in `x`.
    pub fn digits_of(&self, x: &SymbolicReal) -> u32 {
        x.symbols()
            .filter(|s| *s != ONE)
            .filter_map(|s| self.constants.get(s))
            .map(|(c, _)| c.value.split('.').nth(1).map(|f| f.len()).unwrap_or(0) as u32)
            .min()
            .unwrap_or(u32::MAX)
    }

    pub fn value_f64(&self, x: &SymbolicReal) -> f64 {
        self.enclose(x, 128).map(|i| i.mid_f64()).unwrap_or(f64::NAN)
    }

    /// Value with an absolute error bound, as `(value, error)`.
    pub fn value_f64_with_error(&self, x: &SymbolicReal) -> Result<(f64, f64)> {
        let i = self.enclose(x, 128)?;
        let mid = i.mid_f64();
        let lo = i.lo.to_f64();
        let hi = i.hi.to_f64();
        let err = (mid - lo).abs().max((hi - mid).abs()) + mid.abs() * f64::EPSILON;
        Ok((mid, err))
    }

    pub fn float(&self, x: &SymbolicReal, prec: u32) -> Result<Float> {
        let i = self.enclose(x, prec)?;
        Ok(Float::with_val(prec, &i.lo + &i.hi) / 2u32)
    }

    /// Check every declared product against the decimal values.
    pub fn validate_products(&self) -> Result<()> {
        let prec = 256;
        for ((a, b), v) in &self.products {
            let lhs = self.enclose_symbol(a, prec)?.mul(&self.enclose_symbol(b, prec)?);
            let rhs = self.enclose(v, prec)?;
            let d = lhs.sub(&rhs);
            let tol = Interval::rational(prec, &Rational::from((1, Integer::from(Integer::u_pow_u(10, 40)))));
            if d.lo < tol.neg().lo || d.hi > tol.hi {
                return Err(Error::InvalidConstant {
                    name: format!("{a}*{b}"),
                    reason: format!("declared product {v} disagrees numerically"),
                });
            }
        }
        Ok(())
    }

    /// Closure of a set of symbols under declared products.
    ///
    /// Fails with [`Error::MissingProduct`] when some needed product is not declared.
    pub fn closure<'a>(&self, start: impl IntoIterator<Item = &'a str>) -> Result<BTreeSet<String>> {
        let mut set: BTreeSet<String> = start.into_iter().filter(|s| *s != ONE).map(String::from).collect();
        loop {
            let items: Vec<String> = set.iter().cloned().collect();
            let mut grown = false;
            for (i, a) in items.iter().enumerate() {
                for b in &items[i..] {
                    for s in self.product(a, b)?.symbols() {
                        if s != ONE && set.insert(s.to_string()) {
                            grown = true;
                        }
                    }
                }
            }
            if !grown {
                return Ok(set);
            }
        }
    }

    /// Multiplicative inverse inside the field spanned by `symbols` and `1`.
    ///
    /// `symbols` must be closed under products. Returns `None` for zero.
    pub fn inverse_in(&self, x: &SymbolicReal, symbols: &BTreeSet<String>) -> Result<Option<SymbolicReal>> {
        if x.is_zero() {
            return Ok(None);
        }
        if let Some(q) = x.as_rational() {
            return Ok(Some(SymbolicReal::rational(q.recip())));
        }
        let names: Vec<String> = std::iter::once(ONE.to_string()).chain(symbols.iter().cloned()).collect();
        let idx: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let n = names.len();
        // column j = x * basis_j
        let mut m = QMatrix::zeros(n, n);
        for (j, b) in names.iter().enumerate() {
            let col = self.mul(x, &SymbolicReal::symbol(b))?;
            for (s, q) in col.coords() {
                let i = *idx.get(s.as_str()).ok_or_else(|| Error::MissingProduct(s.clone(), b.clone()))?;
                m.set(i, j, q.clone());
            }
        }
        let mut rhs = vec![Rational::new(); n];
        rhs[0] = Rational::from(1);
        Ok(m.solve(&rhs).map(|y| SymbolicReal::from_coords(names.iter().cloned().zip(y))))
    }

    /// Whether the rational span of `{1} ∪ symbols` is closed under the product table.
    pub fn is_closed(&self, symbols: &BTreeSet<String>) -> bool {
        for a in symbols {
            for b in symbols {
                match self.product(a, b) {
                    Ok(v) => {
                        if v.symbols().any(|s| s != ONE && !symbols.contains(s)) {
                            return false;
                        }
                    }
                    Err(_) => return false,
                }
            }
        }
        true
    }
}
