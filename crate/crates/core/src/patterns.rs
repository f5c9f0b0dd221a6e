//! Integer sets, configuration search `{a, a+[f_1(n)], ..., a+[f_k(n)]}`, densities and return sets.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::correlate::{segment_fold, Multicorrelation, Rounder, RoundingMode, SetSpec};
use crate::error::{Error, Result};
use crate::germ::{Basis, GermTerm, HardyExpr, Interval, SymbolicReal};
use crate::systems::{measure_intersection, Arc, BoxSet, Phase, System};

/// Finite set of positive integers `⊂ [1, n_max]`, stored as a bitset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitSet {
    n_max: u64,
    bits: Vec<u64>,
}

impl ExplicitSet {
    pub fn empty(n_max: u64) -> Self {
        ExplicitSet { n_max, bits: vec![0; (n_max as usize).div_ceil(64) + 1] }
    }

    pub fn from_members(n_max: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = Self::empty(n_max);
        for m in members {
            if m == 0 || m > n_max {
                return Err(Error::Precondition(format!("member {m} outside [1, {n_max}]")));
            }
            s.insert(m);
        }
        Ok(s)
    }

    pub fn full(n_max: u64) -> Self {
        Self::from_members(n_max, 1..=n_max).expect("members in range")
    }

    fn insert(&mut self, m: u64) {
        self.bits[(m / 64) as usize] |= 1 << (m % 64);
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn contains(&self, m: u64) -> bool {
        m >= 1 && m <= self.n_max && self.bits[(m / 64) as usize] >> (m % 64) & 1 == 1
    }

    pub fn len(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.n_max).filter(|&m| self.contains(m))
    }

    /// Smallest member `≥ from`.
    pub fn next_member(&self, from: u64) -> Option<u64> {
        let from = from.max(1);
        if from > self.n_max {
            return None;
        }
        let mut w = (from / 64) as usize;
        let mut word = self.bits[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                let m = w as u64 * 64 + word.trailing_zeros() as u64;
                return (m <= self.n_max).then_some(m);
            }
            w += 1;
            if w >= self.bits.len() {
                return None;
            }
            word = self.bits[w];
        }
    }
}

/// Named membership rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Predicate {
    All,
    Evens,
    Squares,
    Residue { modulus: u64, residue: u64 },
}

/// `{n : {n α_i} ∈ [lo_i, hi_i) for every i}`, with memberships certified by exact rounding.
#[derive(Clone, Debug)]
pub struct BohrSet {
    alphas: Vec<SymbolicReal>,
    windows: Vec<(Rational, Rational)>,
    lo: Vec<Rounder>,
    hi: Vec<Rounder>,
    phases: Vec<Phase>,
    boxes: BoxSet,
}

impl BohrSet {
    pub fn new(basis: &Basis, alphas: Vec<SymbolicReal>, windows: Vec<(Rational, Rational)>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != windows.len() {
            return Err(Error::Precondition("one window per Bohr constant".into()));
        }
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let mut arcs = Vec::new();
        for (a, (l, h)) in alphas.iter().zip(&windows) {
            if !(*l >= 0 && l < h && *h <= 1) {
                return Err(Error::Precondition(format!("window [{l}, {h}) must satisfy 0 ≤ lo < hi ≤ 1")));
            }
            let shifted = |c: &Rational| {
                HardyExpr::new(basis, vec![
                    GermTerm::new(a.clone(), SymbolicReal::one()),
                    GermTerm::new(SymbolicReal::rational(-c.clone()), SymbolicReal::zero()),
                ])
            };
            lo.push(Rounder::new(basis, &shifted(l)?, RoundingMode::Floor)?);
            hi.push(Rounder::new(basis, &shifted(h)?, RoundingMode::Floor)?);
            arcs.push(Arc { start: l.to_f64(), len: (h.clone() - l).to_f64() });
        }
        let phases = alphas.iter().map(|a| Phase::from_symbolic(basis, a)).collect::<Result<Vec<_>>>()?;
        Ok(BohrSet { alphas, windows, lo, hi, phases, boxes: BoxSet::new(arcs) })
    }

    /// `{n : {nα} ∈ [0, ε)}`
    pub fn single(basis: &Basis, alpha: SymbolicReal, eps: Rational) -> Result<Self> {
        Self::new(basis, vec![alpha], vec![(Rational::new(), eps)])
    }

    pub fn alphas(&self) -> &[SymbolicReal] {
        &self.alphas
    }

    pub fn windows(&self) -> &[(Rational, Rational)] {
        &self.windows
    }

    /// `{nα} ∈ [lo, hi)` iff `⌊nα - lo⌋ - ⌊nα - hi⌋ = 1`.
    pub fn contains(&self, n: u64) -> Result<bool> {
        for (l, h) in self.lo.iter().zip(&self.hi) {
            if l.round(n)? - h.round(n)? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A set `E ⊂ ℕ`.
#[derive(Clone, Debug)]
pub enum IntegerSet {
    Explicit(ExplicitSet),
    Odds,
    Bohr(Box<BohrSet>),
    Predicate(Predicate),
}

fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

impl IntegerSet {
    pub fn contains(&self, n: i128) -> Result<bool> {
        if n < 1 || n > u64::MAX as i128 {
            return Ok(false);
        }
        let n = n as u64;
        Ok(match self {
            IntegerSet::Explicit(s) => s.contains(n),
            IntegerSet::Odds => n % 2 == 1,
            IntegerSet::Bohr(b) => b.contains(n)?,
            IntegerSet::Predicate(p) => match p {
                Predicate::All => true,
                Predicate::Evens => n % 2 == 0,
                Predicate::Squares => is_square(n),
                Predicate::Residue { modulus, residue } => n % modulus == residue % modulus,
            },
        })
    }

    /// Period of membership on positive integers, when it has one.
    pub fn period(&self) -> Option<u64> {
        match self {
            IntegerSet::Odds | IntegerSet::Predicate(Predicate::Evens) => Some(2),
            IntegerSet::Predicate(Predicate::All) => Some(1),
            IntegerSet::Predicate(Predicate::Residue { modulus, .. }) => Some(*modulus),
            _ => None,
        }
    }

    /// Smallest member `≥ from` for sparse sets.
    fn next_member(&self, from: u64) -> Option<u64> {
        match self {
            IntegerSet::Explicit(s) => s.next_member(from),
            IntegerSet::Predicate(Predicate::Squares) => {
                let r = from.max(1).isqrt();
                Some(if r * r >= from { r * r } else { (r + 1) * (r + 1) })
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            IntegerSet::Explicit(s) => format!("explicit({} members ≤ {})", s.len(), s.n_max()),
            IntegerSet::Odds => "odds".into(),
            IntegerSet::Bohr(b) => format!("bohr({} constants)", b.alphas.len()),
            IntegerSet::Predicate(p) => format!("{p:?}").to_lowercase(),
        }
    }
}

/// `a, a + r_1, ..., a + r_k ∈ E`, re-verified when built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    pub a: u64,
    pub n: u64,
    pub offsets: Vec<i128>,
}

impl PatternWitness {
    pub fn new(set: &IntegerSet, a: u64, n: u64, offsets: Vec<i128>) -> Result<Self> {
        if !set.contains(a as i128)? {
            return Err(Error::Precondition(format!("a = {a} is not in E")));
        }
        for r in &offsets {
            if !set.contains(a as i128 + r)? {
                return Err(Error::Precondition(format!("a + {r} = {} is not in E", a as i128 + r)));
            }
        }
        Ok(PatternWitness { a, n, offsets })
    }

    pub fn elements(&self) -> Vec<i128> {
        std::iter::once(self.a as i128).chain(self.offsets.iter().map(|r| self.a as i128 + r)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub n_min: u64,
    pub n_max: u64,
    pub a_max: u64,
}

impl SearchBounds {
    pub fn new(n_max: u64, a_max: u64) -> Self {
        SearchBounds { n_min: 1, n_max, a_max }
    }

    pub fn from_n(mut self, n_min: u64) -> Self {
        self.n_min = n_min;
        self
    }
}

/// Search outcome; `None` means no configuration within the bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternSearch {
    pub witness: Option<PatternWitness>,
    pub bounds: SearchBounds,
}

const CHUNK: u64 = 4096;
/// Slack added to Bohr windows before pruning, far above phase rounding error.
const BOHR_SLACK: f64 = 1e-9;

fn first_a(set: &IntegerSet, offsets: &[i128], a_max: u64) -> Result<Option<u64>> {
    let lowest = offsets.iter().copied().min().unwrap_or(0).min(0);
    let a0 = (1 - lowest).max(1);
    if a0 > a_max as i128 {
        return Ok(None);
    }
    let a0 = a0 as u64;
    let ok = |a: u64| -> Result<bool> {
        if !set.contains(a as i128)? {
            return Ok(false);
        }
        for r in offsets {
            if !set.contains(a as i128 + r)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if let Some(p) = set.period() {
        for a in a0..(a0 + p).min(a_max + 1) {
            if ok(a)? {
                return Ok(Some(a));
            }
        }
        return Ok(None);
    }
    if let IntegerSet::Bohr(b) = set {
        // feasible region for ({aα_i})_i, slightly enlarged
        let mut boxes = Vec::with_capacity(offsets.len() + 1);
        let widen = |bx: &BoxSet| BoxSet::new(bx.arcs.iter().map(|a| Arc { start: (a.start - BOHR_SLACK).rem_euclid(1.0), len: (a.len + 2.0 * BOHR_SLACK).min(1.0) }).collect());
        boxes.push(widen(&b.boxes));
        for r in offsets {
            let arcs = b.boxes.arcs.iter().zip(&b.phases).map(|(arc, ph)| arc.shifted(-ph.mul_int(*r).to_f64())).collect();
            boxes.push(widen(&BoxSet::new(arcs)));
        }
        if measure_intersection(&boxes) <= 0.0 {
            return Ok(None);
        }
        for a in a0..=a_max {
            let x: Vec<f64> = b.phases.iter().map(|p| p.mul_int(a as i128).to_f64()).collect();
            if boxes.iter().all(|bx| bx.contains(&x)) && ok(a)? {
                return Ok(Some(a));
            }
        }
        return Ok(None);
    }
    let mut a = a0;
    while let Some(m) = set.next_member(a) {
        if m > a_max {
            break;
        }
        if ok(m)? {
            return Ok(Some(m));
        }
        a = m + 1;
    }
    Ok(None)
}

/// First `(n, a)` in lexicographic order with all offsets from `offsets(n)` landing in `E`.
pub fn search_offsets<O>(set: &IntegerSet, offsets: O, bounds: SearchBounds, threads: usize) -> Result<PatternSearch>
where
    O: Fn(u64) -> Result<Vec<i128>> + Sync,
{
    let pool = crate::correlate::thread_pool(threads)?;
    let batch = (threads.max(1) * 4) as u64;
    let mut start = bounds.n_min.max(1);
    while start <= bounds.n_max {
        let chunks: Vec<(u64, u64)> = (0..batch)
            .map(|i| start + i * CHUNK)
            .take_while(|&s| s <= bounds.n_max)
            .map(|s| (s, (s + CHUNK - 1).min(bounds.n_max)))
            .collect();
        let results: Vec<Result<Option<PatternWitness>>> = pool.install(|| {
            chunks
                .par_iter()
                .map(|&(lo, hi)| {
                    for n in lo..=hi {
                        let r = offsets(n)?;
                        if let Some(a) = first_a(set, &r, bounds.a_max)? {
                            return Ok(Some(PatternWitness::new(set, a, n, r)?));
                        }
                    }
                    Ok(None)
                })
                .collect()
        });
        for r in results {
            if let Some(w) = r? {
                return Ok(PatternSearch { witness: Some(w), bounds });
            }
        }
        start = chunks.last().map(|c| c.1 + 1).unwrap_or(bounds.n_max + 1);
    }
    Ok(PatternSearch { witness: None, bounds })
}

/// Search for `{a, a+[f_1(n)], ..., a+[f_k(n)]} ⊂ E`.
pub fn find_pattern(
    basis: &Basis,
    set: &IntegerSet,
    family: &[HardyExpr],
    mode: RoundingMode,
    bounds: SearchBounds,
    threads: usize,
) -> Result<PatternSearch> {
    let rounders = family.iter().map(|f| Rounder::new(basis, f, mode)).collect::<Result<Vec<_>>>()?;
    search_offsets(set, |n| rounders.iter().map(|r| r.round(n)).collect(), bounds, threads)
}

/// Search for the shifted family `{f_i(n + j) : 0 ≤ j ≤ shifts[i]}`, offsets ordered by `i` then `j`.
pub fn cor_a4_probe(
    basis: &Basis,
    family: &[HardyExpr],
    shifts: &[u32],
    set: &IntegerSet,
    mode: RoundingMode,
    bounds: SearchBounds,
    threads: usize,
) -> Result<PatternSearch> {
    if shifts.len() != family.len() {
        return Err(Error::Precondition(format!("{} shifts given for {} functions", shifts.len(), family.len())));
    }
    let rounders = family.iter().map(|f| Rounder::new(basis, f, mode)).collect::<Result<Vec<_>>>()?;
    let width: usize = shifts.iter().map(|&l| l as usize + 1).sum();
    search_offsets(
        set,
        |n| {
            let mut out = Vec::with_capacity(width);
            for (r, &ell) in rounders.iter().zip(shifts) {
                for j in 0..=ell as u64 {
                    out.push(r.round(n + j)?);
                }
            }
            Ok(out)
        },
        bounds,
        threads,
    )
}

/// Enclosure of `Σ c · f_i(t + j)` over the given `(c, i, j)` triples.
pub fn shifted_combination(basis: &Basis, family: &[HardyExpr], terms: &[(i64, usize, u64)], t: u64, digits: u32) -> Result<Interval> {
    let prec = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
    let mut acc = Interval::zero(prec);
    for &(c, i, j) in terms {
        let f = family.get(i).ok_or_else(|| Error::Precondition(format!("no family member {i}")))?;
        let v = f.eval(basis, &Interval::point_u64(prec, t + j))?;
        acc = acc.add(&v.mul(&Interval::point_int(prec, &rug::Integer::from(c))));
    }
    Ok(acc)
}

/// `f_1(t+2) - 2 f_1(t+1) + f_1(t) - f_2(t+1) + f_2(t)`
pub const EXAMPLE5_COMBINATION: [(i64, usize, u64); 5] = [(1, 0, 2), (-2, 0, 1), (1, 0, 0), (-1, 1, 1), (1, 1, 0)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityPoint {
    #[serde(rename = "N")]
    pub n: u64,
    pub count: u64,
    pub density: f64,
}

/// `|E ∩ [1, N]| / N` on the grid, with exact counts.
pub fn upper_density_estimate(set: &IntegerSet, grid: &[u64], threads: usize) -> Result<Vec<DensityPoint>> {
    let counts = segment_fold(
        grid,
        threads,
        || 0u64,
        |c, n| {
            if set.contains(n as i128)? {
                *c += 1;
            }
            Ok(())
        },
        |t, p| *t += p,
        |t| *t,
    )?;
    Ok(grid.iter().zip(counts).map(|(&n, count)| DensityPoint { n, count, density: count as f64 / n as f64 }).collect())
}

/// `{n ≤ N : μ(A ∩ T^{-[f_1(n)]}A ∩ ...) > 0}` with an exact engine.
pub fn return_set(
    basis: &Basis,
    sys: &System,
    set: &SetSpec,
    family: &[HardyExpr],
    mode: RoundingMode,
    n: u64,
    threads: usize,
) -> Result<ExplicitSet> {
    if matches!(sys, System::QuadraticSkew { .. }) {
        return Err(Error::Precondition("return sets need an exact engine (cyclic or torus)".into()));
    }
    let mc = Multicorrelation::new(basis, sys, set, family, mode)?;
    let ns: Vec<u64> = (1..=n).collect();
    let flags: Vec<Result<bool>> = crate::correlate::thread_pool(threads)?
        .install(|| ns.par_iter().map(|&k| Ok(mc.alpha(k)?.0 > 0.0)).collect());
    let mut out = ExplicitSet::empty(n);
    for (k, f) in ns.iter().zip(flags) {
        if f? {
            out.insert(*k);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BanachRow {
    pub length: u64,
    pub max_count: u64,
    pub density: f64,
    /// left end `M` of a densest window `[M, M + L)`
    pub at: u64,
}

/// `max_M |R ∩ [M, M + L)| / L` over windows inside `[1, n_max]`.
pub fn banach_density_probe(r: &ExplicitSet, lengths: &[u64]) -> Result<Vec<BanachRow>> {
    let n = r.n_max();
    let mut prefix = vec![0u64; n as usize + 1];
    for m in 1..=n {
        prefix[m as usize] = prefix[m as usize - 1] + r.contains(m) as u64;
    }
    lengths
        .iter()
        .map(|&l| {
            if l == 0 || l > n {
                return Err(Error::Precondition(format!("window length {l} must lie in [1, {n}]")));
            }
            let (mut best, mut at) = (0, 1);
            for m in 1..=n - l + 1 {
                let c = prefix[(m + l - 1) as usize] - prefix[m as usize - 1];
                if c > best {
                    best = c;
                    at = m;
                }
            }
            Ok(BanachRow { length: l, max_count: best, density: best as f64 / l as f64, at })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::plain_decimal;
    use proptest::prelude::*;
    use rug::Float;

    fn sqrt2_minus_one() -> Basis {
        let mut b = Basis::new();
        let s = Float::with_val(1000, 2).sqrt() - 1u32;
        b.declare("a", &plain_decimal(&s, 200), true).unwrap();
        b
    }

    #[test]
    fn everything_contains_the_trivial_pattern() {
        let b = Basis::new();
        let r = find_pattern(&b, &IntegerSet::Predicate(Predicate::All), &[HardyExpr::monomial(1, 2)], RoundingMode::Floor, SearchBounds::new(10, 10), 2)
            .unwrap();
        assert_eq!(r.witness.unwrap(), PatternWitness { a: 1, n: 1, offsets: vec![1] });
    }

    #[test]
    fn parity_obstruction() {
        let b = Basis::new();
        // n and n + 1 never both odd
        let fam = [HardyExpr::monomial(1, 1), HardyExpr::polynomial(&[Rational::from(1), Rational::from(1)])];
        let r = find_pattern(&b, &IntegerSet::Odds, &fam, RoundingMode::Floor, SearchBounds::new(5000, 5000), 3).unwrap();
        assert!(r.witness.is_none());
    }

    #[test]
    fn first_witness_is_lexicographic() {
        let b = Basis::new();
        let set = IntegerSet::Explicit(ExplicitSet::from_members(100, [7, 10, 16, 40, 42, 43]).unwrap());
        let fam = [HardyExpr::monomial(1, 1), HardyExpr::monomial(3, 1)];
        for threads in [1, 4] {
            let r = find_pattern(&b, &set, &fam, RoundingMode::Floor, SearchBounds::new(50, 100), threads).unwrap();
            assert_eq!(r.witness.unwrap(), PatternWitness { a: 7, n: 3, offsets: vec![3, 9] });
        }
    }

    #[test]
    fn bohr_membership_and_density() {
        let b = sqrt2_minus_one();
        let bohr = BohrSet::single(&b, SymbolicReal::symbol("a"), Rational::from((1, 8))).unwrap();
        let x = 2f64.sqrt() - 1.0;
        for n in 1..2000u64 {
            assert_eq!(bohr.contains(n).unwrap(), (n as f64 * x).fract() < 0.125, "{n}");
        }
        let d = upper_density_estimate(&IntegerSet::Bohr(Box::new(bohr)), &[100_000], 2).unwrap();
        assert!((d[0].density - 0.125).abs() < 0.01);
    }

    #[test]
    fn bohr_pruned_search_agrees_with_brute_force() {
        let b = sqrt2_minus_one();
        let set = IntegerSet::Bohr(Box::new(BohrSet::single(&b, SymbolicReal::symbol("a"), Rational::from((1, 5))).unwrap()));
        let fam = [HardyExpr::monomial(1, 2), HardyExpr::monomial(2, 1)];
        let r = find_pattern(&b, &set, &fam, RoundingMode::Floor, SearchBounds::new(60, 60), 2).unwrap();
        let mut brute = None;
        'outer: for n in 1..=60u64 {
            let offs = [(n * n) as i128, 2 * n as i128];
            for a in 1..=60u64 {
                if std::iter::once(0).chain(offs).all(|o| set.contains(a as i128 + o).unwrap()) {
                    brute = Some((n, a));
                    break 'outer;
                }
            }
        }
        assert_eq!(r.witness.map(|w| (w.n, w.a)), brute);
    }

    #[test]
    fn densities() {
        let d = upper_density_estimate(&IntegerSet::Odds, &[10, 100, 1000], 1).unwrap();
        assert!(d.iter().all(|p| p.density == 0.5));
        let e = upper_density_estimate(&IntegerSet::Explicit(ExplicitSet::empty(50)), &[50], 1).unwrap();
        assert_eq!(e[0].count, 0);
    }

    #[test]
    fn return_sets_on_two_points() {
        let b = Basis::new();
        let sys = System::cyclic(2, 1).unwrap();
        let a = SetSpec::Cyclic(vec![true, false]);
        let r = return_set(&b, &sys, &a, &[HardyExpr::monomial(1, 1)], RoundingMode::Floor, 100, 2).unwrap();
        assert!(r.members().all(|n| n % 2 == 0));
        assert_eq!(r.len(), 50);
        let whole = SetSpec::Cyclic(vec![true, true]);
        let r = return_set(&b, &sys, &whole, &[HardyExpr::monomial(1, 1)], RoundingMode::Floor, 100, 2).unwrap();
        assert_eq!(r, ExplicitSet::full(100));
    }

    #[test]
    fn banach_windows() {
        let evens = ExplicitSet::from_members(1000, (1..=500).map(|k| 2 * k)).unwrap();
        assert_eq!(banach_density_probe(&evens, &[100]).unwrap()[0].density, 0.5);
        assert_eq!(banach_density_probe(&ExplicitSet::full(300), &[100]).unwrap()[0].density, 1.0);
    }

    #[test]
    fn squares_are_scanned() {
        let b = Basis::new();
        // a and a + 2n + 1 both squares: (n, a) = (1, 1)
        let fam = [HardyExpr::polynomial(&[Rational::from(1), Rational::from(2)])];
        let r = find_pattern(&b, &IntegerSet::Predicate(Predicate::Squares), &fam, RoundingMode::Floor, SearchBounds::new(5, 100), 1).unwrap();
        assert_eq!(r.witness.unwrap().elements(), vec![1, 4]);
    }

    #[test]
    fn shifted_second_difference() {
        let b = Basis::new();
        let fam = [HardyExpr::monomial(1, 2), HardyExpr::monomial(1, 1)];
        let v = shifted_combination(&b, &fam, &EXAMPLE5_COMBINATION, 1000, 64).unwrap();
        // 2 - 1
        assert!((v.mid_f64() - 1.0).abs() < 1e-30);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn explicit_search_matches_brute_force(members in prop::collection::btree_set(1u64..80, 0..30), k in 1i64..4) {
            let b = Basis::new();
            let set = IntegerSet::Explicit(ExplicitSet::from_members(80, members.iter().copied()).unwrap());
            let fam = [HardyExpr::monomial(k, 1)];
            let r = find_pattern(&b, &set, &fam, RoundingMode::Floor, SearchBounds::new(30, 80), 2).unwrap();
            let mut brute = None;
            'o: for n in 1..=30u64 {
                for &a in &members {
                    if members.contains(&(a + k as u64 * n)) {
                        brute = Some((n, a));
                        break 'o;
                    }
                }
            }
            prop_assert_eq!(r.witness.map(|w| (w.n, w.a)), brute);
        }
    }
}
