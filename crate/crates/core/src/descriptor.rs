//! JSON family files and experiment descriptors.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::builtins;
use crate::correlate::{RoundingMode, SetSpec};
use crate::error::{Error, Result};
use crate::germ::{parse_rational, Basis, Constant, Family, GermTerm, HardyExpr, ProductEntry, SymbolicReal};
use crate::patterns::{BohrSet, ExplicitSet, IntegerSet, Predicate};
use crate::systems::{Arc, BoxSet, System};
use crate::uniformity::FiniteObservable;

pub const SCHEMA_VERSION: u32 = 1;

fn default_one() -> SymbolicReal {
    SymbolicReal::one()
}

fn is_zero(x: &SymbolicReal) -> bool {
    x.is_zero()
}

/// `coeff · t^{t_exp} · (log_{log_depth} t)^{log_exp}`; `logs` lists exponents of `log t, log log t, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    #[serde(default = "default_one")]
    pub coeff: SymbolicReal,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub t_exp: SymbolicReal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_exp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub logs: Vec<String>,
}

impl TermJson {
    fn to_term(&self) -> Result<GermTerm> {
        let mut t = GermTerm::new(self.coeff.clone(), self.t_exp.clone());
        for (i, r) in self.logs.iter().enumerate() {
            let r = parse_rational(r)?;
            let cur = t.log_exp(i + 1);
            t = t.with_log(i as u32 + 1, cur + r);
        }
        match (&self.log_exp, self.log_depth) {
            (Some(r), d) => {
                let d = d.unwrap_or(1);
                if d == 0 {
                    return Err(Error::Schema("log_depth must be at least 1".into()));
                }
                let r = parse_rational(r)?;
                let cur = t.log_exp(d as usize);
                t = t.with_log(d, cur + r);
            }
            (None, Some(_)) => return Err(Error::Schema("log_depth given without log_exp".into())),
            (None, None) => {}
        }
        Ok(t)
    }

    fn from_term(t: &GermTerm) -> Self {
        let nonzero: Vec<usize> = (0..t.logs.len()).filter(|&i| t.logs[i] != 0).collect();
        let (log_exp, log_depth, logs) = match nonzero.as_slice() {
            [] => (None, None, Vec::new()),
            [i] => (Some(t.logs[*i].to_string()), Some(*i as u32 + 1), Vec::new()),
            _ => (None, None, t.logs.iter().map(|r| r.to_string()).collect()),
        };
        TermJson { coeff: t.coeff.clone(), t_exp: t.t_exp.clone(), log_exp, log_depth, logs }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionJson {
    pub name: String,
    pub terms: Vec<TermJson>,
}

/// Constants, product table and named germs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    #[serde(default)]
    pub constants: Vec<Constant>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    pub functions: Vec<FunctionJson>,
}

impl FamilyJson {
    pub fn to_family(&self) -> Result<Family> {
        let mut b = Basis::new();
        for c in &self.constants {
            if c.independent && builtins::constant_value(c.value.trim()).is_some() {
                builtins::declare_builtin(&mut b, &c.name, c.value.trim())?;
            } else {
                b.declare(&c.name, &builtins::resolve_value(&c.value)?, c.independent)?;
            }
        }
        for p in &self.products {
            b.declare_product(&p.left, &p.right, p.value.clone())?;
        }
        b.validate_products()?;
        let mut fs = Vec::new();
        for f in &self.functions {
            let terms = f.terms.iter().map(TermJson::to_term).collect::<Result<Vec<_>>>()?;
            fs.push((f.name.clone(), HardyExpr::new(&b, terms)?));
        }
        Ok(Family::new(b, fs))
    }

    pub fn from_family(f: &Family) -> Self {
        FamilyJson {
            constants: f.basis.constants().cloned().collect(),
            products: f.basis.product_entries(),
            functions: f
                .names
                .iter()
                .zip(&f.functions)
                .map(|(n, h)| FunctionJson { name: n.clone(), terms: h.terms().iter().map(TermJson::from_term).collect() })
                .collect(),
        }
    }
}

/// A builtin family with its parameter slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exponents: Vec<String>,
}

impl BuiltinRef {
    pub fn to_family(&self) -> Result<Family> {
        match self.name.as_str() {
            "example1" => Ok(builtins::example1()),
            "example2" => Ok(builtins::example2()),
            "example4" => Ok(builtins::example4()),
            "example5" => Ok(builtins::example5()),
            "example8" => {
                let alpha = self.alpha.as_deref().unwrap_or("sqrt2_minus_1");
                let c = parse_rational(self.c.as_deref().unwrap_or("1/20"))?;
                builtins::example8(alpha, &c)
            }
            "corollaryA2" => {
                let e = self.exponents.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                builtins::corollary_a2(&e)
            }
            other => Err(Error::Schema(format!("unknown builtin family '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemJson {
    Cyclic { modulus: u64, shift: u64 },
    Torus { alpha: Vec<SymbolicReal> },
    Skew { alpha: SymbolicReal },
}

/// Declare every undeclared symbol of `xs` that names a builtin constant.
pub fn declare_builtin_symbols<'a>(basis: &mut Basis, xs: impl IntoIterator<Item = &'a SymbolicReal>) -> Result<()> {
    for x in xs {
        for s in x.symbols() {
            if s != "1" && !basis.contains(s) && builtins::constant_value(s).is_some() {
                builtins::declare_builtin(basis, s, s)?;
            }
        }
    }
    Ok(())
}

impl SystemJson {
    /// Constants the system refers to.
    pub fn constants(&self) -> Vec<&SymbolicReal> {
        match self {
            SystemJson::Cyclic { .. } => Vec::new(),
            SystemJson::Torus { alpha } => alpha.iter().collect(),
            SystemJson::Skew { alpha } => vec![alpha],
        }
    }

    pub fn to_system(&self, basis: &Basis) -> Result<System> {
        match self {
            SystemJson::Cyclic { modulus, shift } => System::cyclic(*modulus, *shift),
            SystemJson::Torus { alpha } => System::torus(basis, alpha),
            SystemJson::Skew { alpha } => System::skew(basis, alpha),
        }
    }
}

/// A subset of the phase space (`cyclic`, `box`) or of `ℕ` (the rest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetJson {
    Cyclic { members: Vec<u64> },
    Box { arcs: Vec<[f64; 2]> },
    Odds,
    All,
    Evens,
    Squares,
    Residue { modulus: u64, residue: u64 },
    Explicit { n_max: u64, members: Vec<u64> },
    Bohr { alphas: Vec<SymbolicReal>, windows: Vec<[String; 2]> },
}

impl SetJson {
    /// Constants the set refers to.
    pub fn constants(&self) -> Vec<&SymbolicReal> {
        match self {
            SetJson::Bohr { alphas, .. } => alphas.iter().collect(),
            _ => Vec::new(),
        }
    }

    pub fn to_phase_set(&self, sys: &System) -> Result<SetSpec> {
        match self {
            SetJson::Cyclic { members } => {
                let System::CyclicRotation { modulus, .. } = sys else {
                    return Err(Error::Precondition("cyclic set needs a cyclic system".into()));
                };
                let mut v = vec![false; *modulus as usize];
                for &m in members {
                    *v.get_mut(m as usize).ok_or_else(|| Error::Precondition(format!("{m} ≥ modulus {modulus}")))? = true;
                }
                Ok(SetSpec::Cyclic(v))
            }
            SetJson::Box { arcs } => {
                for [u, v] in arcs {
                    if !(0.0..=1.0).contains(u) || !(0.0..=1.0).contains(v) {
                        return Err(Error::Precondition("arc endpoints must lie in [0, 1]".into()));
                    }
                }
                Ok(SetSpec::Box(BoxSet::new(arcs.iter().map(|[u, v]| Arc::new(*u, *v)).collect())))
            }
            _ => Err(Error::Schema("expected a 'cyclic' or 'box' set".into())),
        }
    }

    pub fn to_integer_set(&self, basis: &Basis) -> Result<IntegerSet> {
        Ok(match self {
            SetJson::Odds => IntegerSet::Odds,
            SetJson::All => IntegerSet::Predicate(Predicate::All),
            SetJson::Evens => IntegerSet::Predicate(Predicate::Evens),
            SetJson::Squares => IntegerSet::Predicate(Predicate::Squares),
            SetJson::Residue { modulus, residue } => {
                if *modulus == 0 {
                    return Err(Error::Precondition("modulus must be positive".into()));
                }
                IntegerSet::Predicate(Predicate::Residue { modulus: *modulus, residue: *residue })
            }
            SetJson::Explicit { n_max, members } => IntegerSet::Explicit(ExplicitSet::from_members(*n_max, members.iter().copied())?),
            SetJson::Bohr { alphas, windows } => {
                let w = windows
                    .iter()
                    .map(|[l, h]| Ok((parse_rational(l)?, parse_rational(h)?)))
                    .collect::<Result<Vec<(Rational, Rational)>>>()?;
                IntegerSet::Bohr(Box::new(BohrSet::new(basis, alphas.clone(), w)?))
            }
            _ => return Err(Error::Schema("expected a set of positive integers".into())),
        })
    }
}

/// Real sequence for `avg`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SequenceJson {
    Constant { value: f64 },
    /// indicator of `n ≡ residue (mod modulus)`
    Residue { modulus: u64, residue: u64 },
    /// `{f(n)}`
    Frac { function: String },
    /// `cos(2π h f(n))`
    Cos {
        function: String,
        #[serde(default = "default_h")]
        h: i64,
    },
}

fn default_h() -> i64 {
    1
}

/// Observable on `Z_m` for `seminorm`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObservableJson {
    Values {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
        #[serde(default = "default_shift")]
        shift: u64,
    },
    Indicator {
        modulus: u64,
        members: Vec<u64>,
        #[serde(default = "default_shift")]
        shift: u64,
    },
    /// `e(h x / m)`
    Character {
        modulus: u64,
        h: i64,
        #[serde(default = "default_shift")]
        shift: u64,
    },
    /// `e(x² / m)`
    Quadratic {
        modulus: u64,
        #[serde(default = "default_shift")]
        shift: u64,
    },
}

fn default_shift() -> u64 {
    1
}

impl ObservableJson {
    pub fn to_observable(&self) -> Result<FiniteObservable> {
        use num_complex::Complex64;
        let e = |num: i128, m: u64| crate::systems::e((num.rem_euclid(m as i128)) as f64 / m as f64);
        match self {
            ObservableJson::Values { re, im, shift } => {
                if !im.is_empty() && im.len() != re.len() {
                    return Err(Error::Precondition("'re' and 'im' must have the same length".into()));
                }
                let v = re.iter().enumerate().map(|(i, r)| Complex64::new(*r, im.get(i).copied().unwrap_or(0.0))).collect();
                FiniteObservable::new(v, *shift)
            }
            ObservableJson::Indicator { modulus, members, shift } => {
                let mut v = vec![0.0; *modulus as usize];
                for &m in members {
                    *v.get_mut(m as usize).ok_or_else(|| Error::Precondition(format!("{m} ≥ modulus {modulus}")))? = 1.0;
                }
                FiniteObservable::real(&v, *shift)
            }
            ObservableJson::Character { modulus, h, shift } => {
                FiniteObservable::new((0..*modulus).map(|x| e(*h as i128 * x as i128, *modulus)).collect(), *shift)
            }
            ObservableJson::Quadratic { modulus, shift } => {
                FiniteObservable::new((0..*modulus).map(|x| e(x as i128 * x as i128, *modulus)).collect(), *shift)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Condition,
    Avg,
    Multicorr,
    Seminorm,
    Equi,
    Pattern,
    ReturnSet,
    Probe,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Condition => "condition",
            Analysis::Avg => "avg",
            Analysis::Multicorr => "multicorr",
            Analysis::Seminorm => "seminorm",
            Analysis::Equi => "equi",
            Analysis::Pattern => "pattern",
            Analysis::ReturnSet => "return-set",
            Analysis::Probe => "probe",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// One experiment; fields not used by the chosen analysis are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDescriptor {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableJson>,
    /// a ladder name or `auto`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default = "default_mode")]
    pub mode: RoundingMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<u64>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    /// per-function largest shift of `probe`; overrides `ell`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shifts: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub windows: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub int_bound: Option<u64>,
    /// `(c, i, j)` triples of `Σ c f_i(t + j)`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub combination: Vec<(i64, usize, u64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub combination_t: Vec<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

fn default_mode() -> RoundingMode {
    RoundingMode::Floor
}

impl ExperimentDescriptor {
    pub fn new(analysis: Analysis) -> Self {
        ExperimentDescriptor {
            schema_version: SCHEMA_VERSION,
            analysis: Some(analysis),
            family: None,
            builtin: None,
            system: None,
            set: None,
            sequence: None,
            observable: None,
            weight: None,
            mode: RoundingMode::Floor,
            grid: Vec::new(),
            n: None,
            n_min: None,
            n_max: None,
            a_max: None,
            ell: None,
            shifts: Vec::new(),
            h_max: None,
            orders: Vec::new(),
            windows: Vec::new(),
            int_bound: None,
            combination: Vec::new(),
            combination_t: Vec::new(),
            seed: 0,
            samples: None,
            format: None,
            threads: None,
            precision: None,
        }
    }

    /// Parse and check the schema version; errors carry line and column.
    pub fn from_json(s: &str) -> Result<Self> {
        let d: ExperimentDescriptor = serde_json::from_str(s)?;
        if d.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", d.schema_version)));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    /// The family, from `family` or `builtin`; builtin constant names used by
    /// the system or set but not declared by the family are declared on the fly.
    pub fn family(&self) -> Result<Family> {
        let mut fam = match (&self.family, &self.builtin) {
            (Some(f), None) => f.to_family()?,
            (None, Some(b)) => b.to_family()?,
            (None, None) => return Err(Error::Schema("missing field 'family' (or 'builtin')".into())),
            (Some(_), Some(_)) => return Err(Error::Schema("give either 'family' or 'builtin', not both".into())),
        };
        let mut extra = self.system.as_ref().map(SystemJson::constants).unwrap_or_default();
        extra.extend(self.set.as_ref().map(SetJson::constants).unwrap_or_default());
        declare_builtin_symbols(&mut fam.basis, extra)?;
        Ok(fam)
    }

    /// The family basis, or an empty basis when the analysis needs no family.
    pub fn basis(&self) -> Result<Basis> {
        if self.family.is_none() && self.builtin.is_none() {
            return Ok(Basis::new());
        }
        Ok(self.family()?.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_families_round_trip() {
        let fams = [
            builtins::example1(),
            builtins::example2(),
            builtins::example4(),
            builtins::example5(),
            builtins::example8("sqrt2_minus_1", &Rational::from((1, 20))).unwrap(),
            builtins::corollary_a2(&[Rational::from((3, 2)), Rational::from(2)]).unwrap(),
        ];
        for f in fams {
            let j = serde_json::to_string(&FamilyJson::from_family(&f)).unwrap();
            let back: FamilyJson = serde_json::from_str(&j).unwrap();
            let g = back.to_family().unwrap();
            assert_eq!(g.functions, f.functions);
            assert_eq!(g.names, f.names);
            assert_eq!(g.basis.constants().collect::<Vec<_>>(), f.basis.constants().collect::<Vec<_>>());
            assert_eq!(g.basis.product_entries(), f.basis.product_entries());
        }
    }

    #[test]
    fn term_schema() {
        let j = r#"{"functions":[{"name":"f","terms":[
            {"coeff":{"1":"3/2"},"t_exp":"1/2","log_exp":"-1","log_depth":2},
            {"coeff":2,"logs":["1","1/3"]}]}]}"#;
        let f: FamilyJson = serde_json::from_str(j).unwrap();
        let fam = f.to_family().unwrap();
        let h = &fam.functions[0];
        assert_eq!(h.terms().len(), 2);
        assert_eq!(h.terms()[0].logs, vec![Rational::new(), Rational::from(-1)]);
        assert_eq!(h.terms()[1].logs, vec![Rational::from(1), Rational::from((1, 3))]);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = ExperimentDescriptor::from_json("{\"schema_version\": 1,\n \"grid\": [1, 2], \"bogus\": 3}").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 2"), "{msg}");
        assert_eq!(e.exit_code(), 2);
        let v = ExperimentDescriptor::from_json("{\"schema_version\": 7}").unwrap_err();
        assert_eq!(v.exit_code(), 2);
    }

    #[test]
    fn descriptor_round_trip() {
        let mut d = ExperimentDescriptor::new(Analysis::Pattern);
        d.builtin = Some(BuiltinRef { name: "example1".into(), alpha: None, c: None, exponents: vec![] });
        d.set = Some(SetJson::Odds);
        d.n_max = Some(100);
        let back = ExperimentDescriptor::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
}
