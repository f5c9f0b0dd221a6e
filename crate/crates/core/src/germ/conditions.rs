//! Polynomial span, normal form, the two recurrence conditions, property P and
//! the weight ladder.

use rug::{Integer, Rational};
use std::cmp::Ordering;

use super::basis::{Basis, SymbolicReal, ONE};
use super::expr::{cmp_signature, is_decaying, GermTerm, HardyExpr, Signature};
use super::interval::Interval;
use super::linalg::{nullspace, rational_points_of_span, rref, solve, Matrix, NumberField, QMatrix, Q};
use crate::error::{Error, Result};
use crate::intersective::{jointly_intersective_up_to, IntPoly, Screening};

/// Outcome of a condition check.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<H, F> {
    Holds(H),
    Fails(F),
    Unknown(String),
}

impl<H, F> Verdict<H, F> {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "holds",
            Verdict::Fails(_) => "fails",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Coefficient data of a family split by signature class.
struct Layout {

    /// rows: non-polynomial, non-decaying signatures; columns: family members
    a: Matrix<SymbolicReal>,
    /// rows: degree 0..=dmax
    p: Matrix<SymbolicReal>,
    dmax: usize,
}

fn layout(basis: &Basis, family: &[HardyExpr]) -> Result<Layout> {
    let k = family.len();
    let mut np_sigs: Vec<Signature> = Vec::new();
    let mut dmax = 0usize;
    for f in family {
        let (p, np, _) = f.split(basis)?;
        for t in np.terms() {
            let s = t.signature();
            if !np_sigs.contains(&s) {
                np_sigs.push(s);
            }
        }
        for t in p.terms() {
            dmax = dmax.max(t.signature().polynomial_degree().unwrap() as usize);
        }
    }
    let mut sort_err = None;
    np_sigs.sort_by(|x, y| {
        cmp_signature(basis, y, x).unwrap_or_else(|e| {
            sort_err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = sort_err {
        return Err(e);
    }
    let mut a = Matrix::filled(np_sigs.len(), k, SymbolicReal::zero());
    let mut p = Matrix::filled(dmax + 1, k, SymbolicReal::zero());
    for (i, f) in family.iter().enumerate() {
        for (r, s) in np_sigs.iter().enumerate() {
            a.set(r, i, f.coeff_of(s));
        }
        for d in 0..=dmax {
            p.set(d, i, f.poly_coeff(d as u32));
        }
    }
    Ok(Layout { a, p, dmax })
}

fn field_for<'a>(basis: &'a Basis, family: &[HardyExpr]) -> Result<NumberField<'a>> {
    let syms: Vec<&str> = family.iter().flat_map(|f| f.coefficient_symbols()).collect();
    NumberField::generated_by(basis, syms)
}

fn identity(k: usize) -> Vec<Vec<SymbolicReal>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { SymbolicReal::one() } else { SymbolicReal::zero() }).collect())
        .collect()
}

fn kernel(field: &NumberField<'_>, a: &Matrix<SymbolicReal>) -> Result<Vec<Vec<SymbolicReal>>> {
    if a.rows == 0 {
        return Ok(identity(a.cols));
    }
    nullspace(field, a)
}

fn apply(field: &NumberField<'_>, m: &Matrix<SymbolicReal>, v: &[SymbolicReal]) -> Result<Vec<SymbolicReal>> {
    let mut out = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut acc = SymbolicReal::zero();
        for (j, x) in v.iter().enumerate() {
            if !x.is_zero() && !m.get(i, j).is_zero() {
                acc = acc.add(&super::linalg::FieldOps::mul(field, m.get(i, j), x)?);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

fn poly_from_coeffs(basis: &Basis, coeffs: &[SymbolicReal]) -> Result<HardyExpr> {
    let terms =
        coeffs.iter().enumerate().map(|(d, c)| GermTerm::new(c.clone(), SymbolicReal::int(d as i64))).collect();
    HardyExpr::new(basis, terms)
}

/// Basis of the real polynomials approximable by elements of the span of the family.
///
/// The basis is in reduced echelon form with monic leading terms.
pub fn poly_span(basis: &Basis, family: &[HardyExpr]) -> Result<Vec<HardyExpr>> {
    let lay = layout(basis, family)?;
    let field = field_for(basis, family).map_err(|e| Error::Unknown(format!("coefficient field not closed: {e}")))?;
    let ker = kernel(&field, &lay.a)?;
    let d = lay.dmax + 1;
    // columns ordered from the top degree down
    let mut rows = Vec::new();
    for k in &ker {
        let img = apply(&field, &lay.p, k)?;
        rows.push(img.into_iter().rev().collect::<Vec<_>>());
    }
    let mut m = Matrix::from_rows(d, rows);
    let pivots = rref(&field, &mut m)?;
    let mut out = Vec::new();
    for row in m.data.iter().take(pivots.len()) {
        let coeffs: Vec<SymbolicReal> = row.iter().rev().cloned().collect();
        out.push(poly_from_coeffs(basis, &coeffs)?);
    }
    Ok(out)
}

/// A family member that differs from a combination of independent members by a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct DependentMember {
    pub index: usize,
    /// `(j, λ_{i,j})` for the independent members `j`
    pub lambdas: Vec<(usize, SymbolicReal)>,
    /// polynomial `p_i` with `f_i - Σ λ_{i,j} f_j - p_i → 0`
    pub poly: HardyExpr,
}

/// Partition of a family into independent members and polynomial-dependent members.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    /// indices forming the independent part, 0-based
    pub independent: Vec<usize>,
    pub dependent: Vec<DependentMember>,
}

pub fn normal_form(basis: &Basis, family: &[HardyExpr]) -> Result<NormalForm> {
    let lay = layout(basis, family)?;
    let field = field_for(basis, family).map_err(|e| Error::Unknown(format!("coefficient field not closed: {e}")))?;
    let mut indep: Vec<usize> = Vec::new();
    let mut dependent = Vec::new();
    for i in 0..family.len() {
        let cols: Vec<usize> = indep.iter().copied().chain(std::iter::once(i)).collect();
        let sub = Matrix::from_rows(
            cols.len(),
            (0..lay.a.rows).map(|r| cols.iter().map(|&c| lay.a.get(r, c).clone()).collect()).collect(),
        );
        let ker = kernel(&field, &sub)?;
        match ker.into_iter().find(|v| !v.last().unwrap().is_zero()) {
            None => indep.push(i),
            Some(v) => {
                let inv = super::linalg::FieldOps::inv(&field, v.last().unwrap())?;
                let mut eta = Vec::with_capacity(v.len());
                for x in &v {
                    eta.push(super::linalg::FieldOps::mul(&field, x, &inv)?);
                }
                let lambdas: Vec<(usize, SymbolicReal)> =
                    indep.iter().zip(&eta).map(|(&j, e)| (j, e.neg())).filter(|(_, l)| !l.is_zero()).collect();
                let full: Vec<SymbolicReal> = (0..family.len())
                    .map(|c| cols.iter().position(|&x| x == c).map(|p| eta[p].clone()).unwrap_or_default())
                    .collect();
                let poly = poly_from_coeffs(basis, &apply(&field, &lay.p, &full)?)?;
                dependent.push(DependentMember { index: i, lambdas, poly });
            }
        }
    }
    Ok(NormalForm { independent: indep, dependent })
}

/// Combination `Σ c_i f_i`.
pub fn combine(basis: &Basis, family: &[HardyExpr], c: &[SymbolicReal]) -> Result<HardyExpr> {
    let mut acc = HardyExpr::zero();
    for (f, ci) in family.iter().zip(c) {
        if !ci.is_zero() {
            acc = acc.add(basis, &f.scale(basis, ci)?)?;
        }
    }
    Ok(acc)
}

/// Witness that some nonzero combination minus an integer polynomial converges.
#[derive(Clone, Debug, PartialEq)]
pub struct InfWitness {
    pub c: Vec<SymbolicReal>,
    /// integer coefficients, `q[d]` multiplying `t^d`
    pub q: Vec<Integer>,
    pub residual: SymbolicReal,
    /// `(t, |Σ c_i f_i(t) - q(t) - residual|)` sample checks
    pub samples: Vec<(f64, f64)>,
}

pub type InfVerdict = Verdict<String, InfWitness>;

/// Numerically certified full column rank of a constant matrix.
fn certified_full_column_rank(basis: &Basis, a: &Matrix<SymbolicReal>) -> Result<bool> {
    if a.rows < a.cols {
        return Ok(false);
    }
    let prec = 256;
    let mut m: Vec<Vec<Interval>> = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut row = Vec::with_capacity(a.cols);
        for j in 0..a.cols {
            row.push(basis.enclose(a.get(i, j), prec)?);
        }
        m.push(row);
    }
    let mut r = 0;
    for c in 0..a.cols {
        // pivot: certified nonzero entry of largest magnitude
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            if row[c].sign().is_some_and(|s| s != Ordering::Equal) {
                let mag = row[c].mid_f64().abs();
                if best.is_none_or(|b| mag > b.1) {
                    best = Some((i, mag));
                }
            }
        }
        let Some((p, _)) = best else { return Ok(false) };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in (r + 1)..m.len() {
            let factor = m[i][c].div(&piv)?;
            for j in c..a.cols {
                let t = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        r += 1;
    }
    Ok(true)
}

fn primitive(v: &[Rational]) -> Vec<Integer> {
    let mut l = Integer::from(1);
    for x in v {
        l.lcm_mut(x.denom());
    }
    let ints: Vec<Integer> = v.iter().map(|x| Rational::from(x * &l).numer().clone()).collect::<Vec<_>>();
    let mut g = Integer::new();
    for x in &ints {
        g.gcd_mut(x);
    }
    if g == 0 {
        return ints;
    }
    let mut out: Vec<Integer> = ints.into_iter().map(|x| x / &g).collect();
    if out.iter().rev().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in &mut out {
            *x = Integer::from(-&*x);
        }
    }
    out
}

fn verify_inf(basis: &Basis, family: &[HardyExpr], w: &mut InfWitness) -> Result<()> {
    let f = combine(basis, family, &w.c)?;
    let q: Vec<Rational> = w.q.iter().map(|x| Rational::from(x.clone())).collect();
    let mut rest = f.sub(basis, &HardyExpr::polynomial(&q))?;
    rest = rest.sub(basis, &HardyExpr::new(basis, vec![GermTerm::new(w.residual.clone(), SymbolicReal::zero())])?)?;
    for t in rest.terms() {
        if !is_decaying(basis, &t.signature())? {
            return Err(Error::Unknown(format!("witness check left a non-decaying term {t}")));
        }
    }
    for t in [1e3, 1e4, 1e5] {
        let v = rest.eval(basis, &Interval::point_f64(320, t))?;
        w.samples.push((t, v.abs_upper_f64()));
    }
    Ok(())
}

/// Decide whether every nonzero combination of the family stays away from integer polynomials.
///
/// `Fails` carries `c`, `q` and the constant `r` with `Σ c_i f_i - q → r`.
pub fn check_condition_inf(basis: &Basis, family: &[HardyExpr]) -> Result<InfVerdict> {
    let lay = layout(basis, family)?;
    let k = family.len();
    if k == 0 {
        return Ok(Verdict::Holds("empty family".into()));
    }
    if lay.a.rows > 0 && certified_full_column_rank(basis, &lay.a)? {
        return Ok(Verdict::Holds("non-polynomial coefficient matrix has full column rank".into()));
    }
    let field = match field_for(basis, family) {
        Ok(f) => f,
        Err(e) => return Ok(Verdict::Unknown(format!("coefficient field not closed under declared products: {e}"))),
    };
    let ker = kernel(&field, &lay.a)?;
    if ker.is_empty() {
        return Ok(Verdict::Holds("no combination cancels the non-polynomial part".into()));
    }
    let r = ker.len();
    // L: positive-degree polynomial coefficients of the kernel combinations
    let mut l = Matrix::filled(lay.dmax, r, SymbolicReal::zero());
    let mut p0 = Vec::with_capacity(r);
    for (j, kv) in ker.iter().enumerate() {
        let img = apply(&field, &lay.p, kv)?;
        for d in 1..=lay.dmax {
            l.set(d - 1, j, img[d].clone());
        }
        p0.push(img[0].clone());
    }
    let combo = |y: &[SymbolicReal]| -> Result<Vec<SymbolicReal>> {
        let mut c = vec![SymbolicReal::zero(); k];
        for (kv, yj) in ker.iter().zip(y) {
            for (ci, kvi) in c.iter_mut().zip(kv) {
                *ci = ci.add(&super::linalg::FieldOps::mul(&field, kvi, yj)?);
            }
        }
        Ok(c)
    };
    let residual_of = |c: &[SymbolicReal]| -> Result<SymbolicReal> {
        let mut acc = SymbolicReal::zero();
        for (i, ci) in c.iter().enumerate() {
            acc = acc.add(&super::linalg::FieldOps::mul(&field, lay.p.get(0, i), ci)?);
        }
        Ok(acc)
    };
    let lker = if l.rows == 0 { identity(r) } else { nullspace(&field, &l)? };
    if let Some(y) = lker.first() {
        let c = combo(y)?;
        let residual = residual_of(&c)?;
        let mut w = InfWitness { c, q: vec![Integer::new()], residual, samples: Vec::new() };
        verify_inf(basis, family, &mut w)?;
        return Ok(Verdict::Fails(w));
    }
    let z = rational_points_of_span(&field, &l)?;
    let Some(z0) = z.first() else {
        return Ok(Verdict::Holds(
            "no nonzero rational polynomial lies in the polynomial image of the cancelling combinations".into(),
        ));
    };
    let zi = primitive(z0);
    let rhs: Vec<SymbolicReal> = zi.iter().map(|x| SymbolicReal::rational(Rational::from(x.clone()))).collect();
    let y = solve(&field, &l, &rhs)?.ok_or_else(|| Error::Unknown("inconsistent rational point".into()))?;
    let c = combo(&y)?;
    let residual = residual_of(&c)?;
    let mut q = vec![Integer::new()];
    q.extend(zi);
    let mut w = InfWitness { c, q, residual, samples: Vec::new() };
    verify_inf(basis, family, &mut w)?;
    Ok(Verdict::Fails(w))
}

/// Integer polynomials certifying the integer-recurrence condition.
#[derive(Clone, Debug, PartialEq)]
pub struct IntHolds {
    pub q: Vec<IntPoly>,
    /// moduli screened, `None` when a common root at 0 settles it
    pub screened_up_to: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntFails {
    pub q: Vec<IntPoly>,
    /// least modulus at which the polynomials have no common root
    pub modulus: u64,
}

pub type IntVerdict = Verdict<IntHolds, IntFails>;

/// Rational polynomials spanning the smallest rationally defined space containing the polynomial span.
pub fn rational_hull(basis: &Basis, family: &[HardyExpr]) -> Result<Vec<IntPoly>> {
    let span = poly_span(basis, family)?;
    let dmax = span.iter().filter_map(|p| p.as_polynomial()).map(|c| c.len()).max().unwrap_or(0);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for p in &span {
        let c = p.as_polynomial().expect("span elements are polynomials");
        let mut syms: Vec<&str> = c.iter().flat_map(|x| x.symbols()).collect();
        syms.sort();
        syms.dedup();
        if syms.is_empty() {
            syms.push(ONE);
        }
        for s in syms {
            let mut row: Vec<Rational> = (0..dmax).rev().map(|d| c.get(d).map(|x| x.coord(s)).unwrap_or_default()).collect();
            if row.iter().all(|x| *x == 0) {
                row.clear();
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    let mut m = QMatrix::from_rows(dmax, rows);
    let piv = rref(&Q, &mut m)?;
    Ok(m.data
        .iter()
        .take(piv.len())
        .map(|row| {
            let asc: Vec<Rational> = row.iter().rev().cloned().collect();
            IntPoly::new(primitive(&asc))
        })
        .collect())
}

/// Decide whether the polynomial span sits inside the span of jointly intersective integer polynomials.
pub fn check_condition_int(basis: &Basis, family: &[HardyExpr], bound: u64) -> Result<IntVerdict> {
    let hull = match rational_hull(basis, family) {
        Ok(h) => h,
        Err(Error::Unknown(s)) => return Ok(Verdict::Unknown(s)),
        Err(e) => return Err(e),
    };
    if hull.iter().all(|p| p.eval_i(0) == 0) {
        return Ok(Verdict::Holds(IntHolds { q: hull, screened_up_to: None }));
    }
    Ok(match jointly_intersective_up_to(&hull, bound) {
        Screening::AllPass(m) => Verdict::Holds(IntHolds { q: hull, screened_up_to: Some(m) }),
        Screening::NoWitness(m) => Verdict::Fails(IntFails { q: hull, modulus: m }),
    })
}

/// A weight from the ladder or an explicit germ.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Germ(HardyExpr),
    /// `exp(sqrt(log t))`
    ExpSqrtLog,
}

impl Weight {
    pub fn t() -> Self {
        Weight::Germ(HardyExpr::monomial(1, 1))
    }

    /// The ladder ordered by decreasing growth.
    pub fn ladder() -> Vec<(&'static str, Weight)> {
        let g = |t: GermTerm| Weight::Germ(HardyExpr::new(&Basis::new(), vec![t]).unwrap());
        vec![
            ("t", g(GermTerm::power(1, 1))),
            ("t/log t", g(GermTerm::power(1, 1).with_log(1, -1))),
            ("t^1/2", g(GermTerm::power(1, Rational::from((1, 2))))),
            ("t^1/3", g(GermTerm::power(1, Rational::from((1, 3))))),
            ("exp(sqrt(log t))", Weight::ExpSqrtLog),
            ("log t", g(GermTerm::power(1, 0).with_log(1, 1))),
            ("log log t", g(GermTerm::power(1, 0).with_log(2, 1))),
        ]
    }

    pub fn by_name(name: &str) -> Option<Weight> {
        Weight::ladder().into_iter().find(|(n, _)| *n == name).map(|x| x.1)
    }

    pub fn name(&self) -> String {
        for (n, w) in Weight::ladder() {
            if w == *self {
                return n.to_string();
            }
        }
        match self {
            Weight::Germ(h) => h.to_string(),
            Weight::ExpSqrtLog => "exp(sqrt(log t))".into(),
        }
    }

    /// Signature of `log W`.
    pub fn log_signature(&self, basis: &Basis) -> Result<Signature> {
        match self {
            Weight::ExpSqrtLog => Ok(Signature {
                t_exp: SymbolicReal::zero(),
                logs: vec![Rational::from((1, 2))],
            }),
            Weight::Germ(h) => {
                let lead = h.leading().ok_or_else(|| Error::Precondition("zero weight".into()))?;
                let s = lead.signature();
                if cmp_signature(basis, &s, &Signature::unit())? != Ordering::Greater {
                    return Err(Error::Precondition(format!("weight {h} does not tend to infinity")));
                }
                if cmp_signature(basis, &s, &Signature::power(1))? == Ordering::Greater {
                    return Err(Error::Precondition(format!("weight {h} grows faster than t")));
                }
                if !lead.t_exp.is_zero() {
                    return Ok(Signature { t_exp: SymbolicReal::zero(), logs: vec![Rational::from(1)] });
                }
                let m = lead.logs.iter().position(|r| *r != 0).expect("growing weight has a log factor");
                let mut logs = vec![Rational::new(); m + 1];
                logs[m] = Rational::from(1);
                Ok(Signature { t_exp: SymbolicReal::zero(), logs })
            }
        }
    }

    /// `W(t)` in double precision; `None` outside the domain.
    pub fn eval_f64(&self, basis: &Basis, t: f64) -> Option<f64> {
        match self {
            Weight::ExpSqrtLog => {
                if t < 1.0 {
                    None
                } else {
                    Some(t.ln().sqrt().exp())
                }
            }
            Weight::Germ(h) => {
                if let Some(p) = single_power(h) {
                    if t <= 0.0 {
                        return None;
                    }
                    return Some(p.0 * t.powf(p.1));
                }
                h.eval_f64(basis, t).ok()
            }
        }
    }

    /// `w(n) = max(0, W(n+1) - W(n))`, zero where `W` is undefined.
    pub fn increment(&self, basis: &Basis, n: u64) -> f64 {
        if let Weight::Germ(h) = self {
            if let Some((c, p)) = single_power(h) {
                if n == 0 {
                    return (c * 1f64.powf(p)).max(0.0);
                }
                if p == 1.0 {
                    return c.max(0.0);
                }
                let x = n as f64;
                let d = c * x.powf(p) * (p * (1.0 / x).ln_1p()).exp_m1();
                return d.max(0.0);
            }
        }
        match (self.eval_f64(basis, n as f64), self.eval_f64(basis, n as f64 + 1.0)) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => (b - a).max(0.0),
            _ => 0.0,
        }
    }
}

fn single_power(h: &HardyExpr) -> Option<(f64, f64)> {
    if h.terms().len() != 1 {
        return None;
    }
    let t = &h.terms()[0];
    if !t.logs.is_empty() {
        return None;
    }
    Some((t.coeff.as_rational()?.to_f64(), t.t_exp.as_rational()?.to_f64()))
}

/// First non-polynomial signature of some derivative lying strictly between `1` and `log W`.
#[derive(Clone, Debug, PartialEq)]
pub struct PFailure {
    pub member: usize,
    pub derivative: usize,
    pub signature: Signature,
}

pub type PVerdict = Verdict<(), PFailure>;

/// Every non-polynomial signature of every derivative is either `≪ 1` or `≻ log W`.
pub fn check_property_p(basis: &Basis, family: &[HardyExpr], w: &Weight) -> Result<PVerdict> {
    let log_w = w.log_signature(basis)?;
    for (i, f) in family.iter().enumerate() {
        let mut g = f.clone();
        for k in 0..64 {
            let mut live = false;
            for t in g.terms() {
                let s = t.signature();
                if is_decaying(basis, &s)? {
                    continue;
                }
                live = true;
                if s.is_polynomial() {
                    continue;
                }
                if cmp_signature(basis, &s, &log_w)? != Ordering::Greater {
                    return Ok(Verdict::Fails(PFailure { member: i, derivative: k, signature: s }));
                }
            }
            if !live {
                break;
            }
            g = g.derivative(basis)?;
        }
    }
    Ok(Verdict::Holds(()))
}

/// Fastest weight of the ladder for which property P holds.
pub fn choose_weight(basis: &Basis, family: &[HardyExpr]) -> Result<Weight> {
    for (_, w) in Weight::ladder() {
        if let Verdict::Holds(()) = check_property_p(basis, family, &w)? {
            return Ok(w);
        }
    }
    Err(Error::NoCompatibleWeight)
}
