//! Acceptance suite: every primary criterion at its stated tolerance.
//!
//! Prints one `PASS` or `FAIL` line per criterion and exits non-zero when any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::path::Path;
use std::time::{Duration, Instant};

use hfl::builtins::{self, constant_value};
use hfl::correlate::{
    ap_decomposition_check, multicorrelation, torus_alpha_monte_carlo, Multicorrelation, Rounder, RoundingMode, SetSpec,
};
use hfl::descriptor::ExperimentDescriptor;
use hfl::germ::{check_condition_inf, Basis, GermTerm, HardyExpr, Interval, SymbolicReal, Verdict, Weight};
use hfl::intersective::{is_intersective_up_to, jointly_intersective_up_to, IntPoly, Screening};
use hfl::patterns::{
    banach_density_probe, cor_a4_probe, find_pattern, return_set, shifted_combination, BohrSet, IntegerSet, SearchBounds,
    EXAMPLE5_COMBINATION,
};
use hfl::runner;
use hfl::systems::{Arc, BoxSet, Point, System};
use hfl::uniformity::{gowers_box_oracle, gowers_seminorm, weyl_discrepancy, FiniteObservable};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Float, Integer, Rational};

const THREADS: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn c1_example1() -> hfl::Result<Outcome> {
    let fam = builtins::example1();
    // n = 1 gives f_1(1) = 0, the degenerate triple {a, a, a + 2}
    let t = Instant::now();
    let floor = find_pattern(
        &fam.basis,
        &IntegerSet::Odds,
        &fam.functions,
        RoundingMode::Floor,
        SearchBounds::new(1_000_000, 1_000_000).from_n(2),
        THREADS,
    )?;
    let floor_time = t.elapsed();
    let t = Instant::now();
    let nearest = find_pattern(
        &fam.basis,
        &IntegerSet::Odds,
        &fam.functions,
        RoundingMode::Nearest,
        // [f_1(2)] = 0 under Nearest, again a degenerate triple
        SearchBounds::new(100, 1_000_000).from_n(3),
        THREADS,
    )?;
    let nearest_time = t.elapsed();

    let mut verified = false;
    if let Some(w) = &nearest.witness {
        // independent check at 256 bits: a odd, a + [f_i(n)] odd
        let ok_offsets = fam.functions.iter().zip(&w.offsets).all(|(f, &o)| {
            let v = f.eval(&fam.basis, &Interval::point_u64(256, w.n)).expect("eval");
            let half = Interval::rational(256, &Rational::from((1, 2)));
            v.add(&half).floor_certified().is_some_and(|r| r == o)
        });
        let members = w.elements().iter().all(|&x| x > 0 && x % 2 == 1);
        verified = ok_offsets && members && w.n <= 100;
    }
    let pass = floor.witness.is_none()
        && floor_time <= Duration::from_secs(300)
        && verified
        && nearest_time <= Duration::from_secs(1);
    Ok(outcome(
        pass,
        format!(
            "floor: {} for 2 <= n <= 10^6, a <= 10^6 in {}; nearest: {} in {}",
            if floor.witness.is_none() { "none".to_string() } else { format!("{:?}", floor.witness) },
            secs(floor_time),
            match &nearest.witness {
                Some(w) => format!("n={} a={} offsets={:?} verified={verified}", w.n, w.a, w.offsets),
                None => "no witness".into(),
            },
            secs(nearest_time),
        ),
    ))
}

fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|k| k * k == n)
}

fn c2_example4() -> hfl::Result<Outcome> {
    let fam = builtins::example4();
    let r1 = Rounder::new(&fam.basis, &fam.functions[0], RoundingMode::Floor)?;
    let r2 = Rounder::new(&fam.basis, &fam.functions[1], RoundingMode::Floor)?;
    let mut bad = Vec::new();
    let mut squares = 0;
    for n in 1..=100_000u64 {
        let (a, b) = (r1.round(n)?, r2.round(n)?);
        let ok = if is_square(n) {
            squares += 1;
            a % 2 == 0 && b % 2 == 0
        } else {
            (a - b) % 2 != 0
        };
        if !ok {
            bad.push(n);
        }
    }
    Ok(outcome(bad.is_empty(), format!("{squares} squares, {} violations {:?}", bad.len(), &bad[..bad.len().min(5)])))
}

/// `{n ≤ N : {nα - shift} < C/n}` at 2000 bits.
fn fractional_window_set(alpha: &str, shift: &Rational, c: &Rational, n_max: u64) -> Vec<u64> {
    let prec = 2000;
    let a = Float::with_val(prec, Float::parse(alpha).expect("decimal"));
    let mut out = Vec::new();
    for n in 1..=n_max {
        let x = Float::with_val(prec, &a * n) - shift;
        let frac = Float::with_val(prec, &x - x.clone().floor());
        let lhs = frac * n;
        if lhs < *c {
            out.push(n);
        }
    }
    out
}

fn c3_example8() -> hfl::Result<Outcome> {
    let c = Rational::from((1, 20));
    let fam = builtins::example8("sqrt2_minus_1", &c)?;
    let sys = builtins::two_point();
    let set = SetSpec::Cyclic(vec![true, false]);
    let n = 100_000;
    let computed = return_set(&fam.basis, &sys, &set, &fam.functions, RoundingMode::Floor, n, THREADS)?;
    let computed: Vec<u64> = computed.members().collect();
    let alpha = constant_value("sqrt2_minus_1").expect("builtin");
    let stated = fractional_window_set(&alpha, &Rational::from((1, 2)), &c, n);
    let quarter = fractional_window_set(&alpha, &Rational::from((1, 4)), &c, n);
    let rs = hfl::patterns::ExplicitSet::from_members(n, computed.iter().copied())?;
    let banach = banach_density_probe(&rs, &[1000])?;
    let density = banach[0].density;
    let pass = computed == stated && density < 0.02;
    Ok(outcome(
        pass,
        format!(
            "|R|={} |{{nα-1/2}}<C/n|={} |{{nα-1/4}}<C/n|={} equal={} banach(10^3)={density}",
            computed.len(),
            stated.len(),
            quarter.len(),
            computed == stated
        ),
    ))
}

fn c4_example2() -> hfl::Result<Outcome> {
    let fam = builtins::example2();
    let b = &fam.basis;
    let verdict = check_condition_inf(b, &fam.functions)?;
    let Verdict::Fails(w) = verdict else {
        return Ok(outcome(false, format!("INF verdict {}", verdict.label())));
    };
    let prec = 512;
    let mut worst: f64 = 0.0;
    for t in [1_000u64, 10_000, 100_000] {
        let tt = Interval::point_u64(prec, t);
        let mut acc = Interval::zero(prec);
        for (c, f) in w.c.iter().zip(&fam.functions) {
            let cv = b.enclose(c, prec)?;
            acc = acc.add(&cv.mul(&f.eval(b, &tt)?));
        }
        let q = IntPoly::new(w.q.clone());
        let qt = Interval::point_int(prec, &q.coeffs().iter().rev().fold(Integer::new(), |s, a| s * t + a));
        let r = acc.sub(&qt).sub(&Interval::rational(prec, &Rational::from((1, 2))));
        worst = worst.max(r.abs_upper_f64());
    }
    let residual_ok = w.residual == SymbolicReal::rational(Rational::from((1, 2))) && worst < 1e-6;
    let bohr = BohrSet::new(
        b,
        vec![SymbolicReal::symbol("alpha"), SymbolicReal::symbol("beta")],
        vec![(Rational::new(), Rational::from((1, 8))), (Rational::new(), Rational::from((1, 8)))],
    )?;
    let t = Instant::now();
    let s = find_pattern(
        b,
        &IntegerSet::Bohr(Box::new(bohr)),
        &fam.functions,
        RoundingMode::Nearest,
        SearchBounds::new(100_000, 100_000),
        THREADS,
    )?;
    Ok(outcome(
        residual_ok && s.witness.is_none(),
        format!(
            "witness c=({}) q={} residual={} max deviation {worst:.1e}; bohr nearest search n <= 10^5: {} in {}",
            w.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
            IntPoly::new(w.q.clone()),
            w.residual,
            if s.witness.is_none() { "none".to_string() } else { format!("{:?}", s.witness) },
            secs(t.elapsed())
        ),
    ))
}

fn c5_corollary_b3() -> hfl::Result<Outcome> {
    let (b, sys) = builtins::torus_sqrt2();
    let fam = builtins::corollary_a2(&[Rational::from((3, 2)), Rational::from((4, 3))])?;
    let set = SetSpec::Box(BoxSet::interval(0.0, 0.3));
    let t = Instant::now();
    let rep = multicorrelation(&b, &sys, &set, &fam.functions, RoundingMode::Floor, &Weight::t(), &[1_000_000], THREADS)?;
    let v = rep.points[0].weighted_average;
    let target = 0.3f64.powi(3);
    let el = t.elapsed();
    Ok(outcome(
        (v - target).abs() <= 0.02 && el <= Duration::from_secs(600),
        format!("average at N=10^6 = {v:.6}, mu(A)^3 = {target:.6}, {}", secs(el)),
    ))
}

fn random_observable(rng: &mut StdRng, m: usize) -> FiniteObservable {
    let shift = loop {
        let a = rng.gen_range(1..=m.max(2) as u64) % m as u64;
        if gcd(a, m as u64) == 1 {
            break a;
        }
    };
    let v = (0..m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    FiniteObservable::new(v, shift).expect("observable")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn c6_gowers() -> hfl::Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(6);
    let mut oracle_err: f64 = 0.0;
    let mut mono_ok = true;
    let mut shift_err: f64 = 0.0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=16);
        let h = random_observable(&mut rng, m);
        let mut prev = None;
        for s in 1..=3 {
            let v = gowers_seminorm(&h, s);
            oracle_err = oracle_err.max((v - gowers_box_oracle(&h, s)).abs());
            shift_err = shift_err.max((gowers_seminorm(&h.translate(), s) - v).abs());
            if let Some(p) = prev {
                mono_ok &= p <= v + 1e-9;
            }
            prev = Some(v);
        }
    }
    let mut one_ok = true;
    for m in 1..=16usize {
        let one = FiniteObservable::real(&vec![1.0; m], 1)?;
        for s in 1..=4 {
            one_ok &= gowers_seminorm(&one, s) == 1.0;
        }
    }
    let mut ind_err: f64 = 0.0;
    for m in 2..=16usize {
        let mut v = vec![0.0; m];
        v[0] = 1.0;
        let h = FiniteObservable::real(&v, 1)?;
        ind_err = ind_err.max((gowers_seminorm(&h, 2) - (m as f64).powf(-0.75)).abs());
    }
    let pass = oracle_err <= 1e-9 && one_ok && ind_err <= 1e-9 && mono_ok && shift_err <= 1e-9;
    Ok(outcome(
        pass,
        format!(
            "oracle gap {oracle_err:.1e}, |||1|||_s exact {one_ok}, indicator gap {ind_err:.1e}, monotone {mono_ok}, shift gap {shift_err:.1e}"
        ),
    ))
}

fn c7_equidistribution() -> hfl::Result<Outcome> {
    let mut b = Basis::new();
    b.declare("r", &constant_value("sqrt2").expect("builtin"), true)?;
    let n_sqrt2 = HardyExpr::new(&b, vec![GermTerm::new(SymbolicReal::symbol("r"), SymbolicReal::one())])?;
    let sqrt_n = HardyExpr::monomial(1, Rational::from((1, 2)));
    let log_n = HardyExpr::new(&b, vec![GermTerm::power(1, 0).with_log(1, 1)])?;
    let n = 1_000_000;
    let h_max = 10;
    let disc = |f: &HardyExpr| -> hfl::Result<f64> {
        let r = Rounder::new(&b, f, RoundingMode::Floor)?;
        // germs are evaluated from t = 2 on; every sequence here vanishes mod 1 at n = 1
        Ok(weyl_discrepancy(&b, |k| if k == 1 { Ok(0.0) } else { r.frac_f64(k) }, &Weight::t(), n, h_max, THREADS)?.max)
    };
    let (a, c, d) = (disc(&n_sqrt2)?, disc(&sqrt_n)?, disc(&log_n)?);
    Ok(outcome(
        a < 0.01 && c < 0.02 && d > 0.1,
        format!("H=10, N=10^6: n*sqrt2 {a:.2e} (< 0.01), sqrt n {c:.2e} (< 0.02), log n {d:.3} (> 0.1)"),
    ))
}

fn c8_example5() -> hfl::Result<Outcome> {
    let fam = builtins::example5();
    let v = shifted_combination(&fam.basis, &fam.functions, &EXAMPLE5_COMBINATION, 10_000, 64)?;
    let value = v.mid_f64();
    let combination_ok = (value - 1.0).abs() <= 1e-3;
    let mut b = fam.basis.clone();
    builtins::declare_builtin(&mut b, "alpha", "sqrt2_minus_1")?;
    let bohr = BohrSet::single(&b, SymbolicReal::symbol("alpha"), Rational::from((1, 100)))?;
    let t = Instant::now();
    let s = cor_a4_probe(
        &b,
        &fam.functions,
        &[2, 1],
        &IntegerSet::Bohr(Box::new(bohr)),
        RoundingMode::Floor,
        SearchBounds::new(100_000, 100_000),
        THREADS,
    )?;
    Ok(outcome(
        combination_ok && s.witness.is_none(),
        format!(
            "combination at t=10^4 = {value:.6} (target 1 ± 1e-3); probe over {{nα}} < 0.01 for n, a <= 10^5: {} in {}",
            if s.witness.is_none() { "none".to_string() } else { format!("{:?}", s.witness) },
            secs(t.elapsed())
        ),
    ))
}

fn c9_intersective() -> hfl::Result<Outcome> {
    let t = Instant::now();
    let a = is_intersective_up_to(&IntPoly::from_i64(&[1, 0, 1]), 10_000);
    let p = |c: i64| IntPoly::from_i64(&[-c, 0, 1]);
    let b = is_intersective_up_to(&p(13).mul(&p(17)).mul(&p(221)), 10_000);
    let c = jointly_intersective_up_to(&[IntPoly::from_i64(&[-1, 1]), IntPoly::from_i64(&[1, 1])], 10_000);
    let el = t.elapsed();
    let pass = a == Screening::NoWitness(4)
        && b == Screening::AllPass(10_000)
        && c == Screening::NoWitness(3)
        && el <= Duration::from_secs(30);
    Ok(outcome(
        pass,
        format!("t^2+1 -> {a:?} (want NoWitness(4)); (t^2-13)(t^2-17)(t^2-221) -> {b:?}; {{t-1, t+1}} -> {c:?}; {}", secs(el)),
    ))
}

fn brute_force_cyclic(sys: &System, set: &[bool], offsets: &[i128]) -> f64 {
    let m = set.len();
    let mut count = 0;
    for x in 0..m {
        if !set[x] {
            continue;
        }
        let all = offsets.iter().all(|&r| {
            let mut p = Point::Cyclic(x as u64);
            for _ in 0..r.rem_euclid(m as i128) {
                p = sys.step(&p);
            }
            let Point::Cyclic(y) = p else { unreachable!() };
            set[y as usize]
        });
        if all {
            count += 1;
        }
    }
    count as f64 / m as f64
}

fn c10_engines() -> hfl::Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(10);
    let b = Basis::new();

    let mut cyclic_mismatch = 0;
    for _ in 0..40 {
        let m = rng.gen_range(1..=64u64);
        let sys = System::cyclic(m, rng.gen_range(0..m))?;
        let set: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        let k = rng.gen_range(1..=3);
        let fam: Vec<HardyExpr> = (0..k)
            .map(|_| HardyExpr::monomial(rng.gen_range(1..=3), Rational::from((rng.gen_range(1..=7), rng.gen_range(1..=3)))))
            .collect();
        let mc = Multicorrelation::new(&b, &sys, &SetSpec::Cyclic(set.clone()), &fam, RoundingMode::Floor)?;
        for n in 1..=200 {
            let r = mc.offsets(n)?;
            if mc.alpha(n)?.0 != brute_force_cyclic(&sys, &set, &r) {
                cyclic_mismatch += 1;
            }
        }
    }

    let mut torus_worst: f64 = 0.0;
    for i in 0..50 {
        let d = rng.gen_range(1..=2);
        let alpha: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
        let sys = System::torus_f64(&alpha);
        let arcs: Vec<Arc> = (0..d).map(|_| Arc::new(rng.gen_range(0.0..1.0), rng.gen_range(0.1..0.9))).collect();
        let a = BoxSet::new(arcs);
        let offsets: Vec<i128> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-1000..=1000)).collect();
        let exact = Multicorrelation::new(&b, &sys, &SetSpec::Box(a.clone()), &[], RoundingMode::Floor)?.alpha_at_offsets(&offsets, 0)?.0;
        let (p, se) = torus_alpha_monte_carlo(&sys, &a, &offsets, 100_000, 1000 + i)?;
        torus_worst = torus_worst.max((exact - p).abs() / se);
    }

    let mut rb = Basis::new();
    rb.declare("r", &constant_value("sqrt2").expect("builtin"), true)?;
    let f = HardyExpr::new(&rb, vec![GermTerm::new(SymbolicReal::symbol("r"), SymbolicReal::one())])?;
    let r = Rounder::new(&rb, &f, RoundingMode::Floor)?;
    let n = 1_000_000;
    let ones = ap_decomposition_check(&rb, |_| Ok(Complex64::new(1.0, 0.0)), &Weight::t(), 4, n, THREADS)?.residual;
    let alt = ap_decomposition_check(&rb, |k| Ok(Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)), &Weight::t(), 2, n, THREADS)?
        .residual;
    let weyl = ap_decomposition_check(&rb, |k| Ok(hfl::systems::e(r.frac_f64(k)?)), &Weight::t(), 3, n, THREADS)?.residual;
    let ap_ok = ones <= 1e-12 && alt < 1e-2 && weyl < 1e-2;
    Ok(outcome(
        cyclic_mismatch == 0 && torus_worst <= 4.0 && ap_ok,
        format!(
            "cyclic mismatches {cyclic_mismatch}/8000; torus worst |exact-mc|/se {torus_worst:.2}; AP residuals 1: {ones:.1e}, (-1)^n: {alt:.1e}, e(n sqrt2): {weyl:.1e}"
        ),
    ))
}

fn c11_reproducibility() -> hfl::Result<Outcome> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/descriptors");
    let mut files: Vec<_> = std::fs::read_dir(&dir)?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.retain(|p| p.extension().is_some_and(|x| x == "json"));
    files.sort();
    let mut differing = Vec::new();
    for p in &files {
        let d = ExperimentDescriptor::from_json(&std::fs::read_to_string(p)?)?;
        let one = runner::run(&d, Some(1))?.payload();
        let eight = runner::run(&d, Some(8))?.payload();
        if one != eight {
            differing.push(p.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    Ok(outcome(
        differing.is_empty() && !files.is_empty(),
        format!("{} golden descriptors, differing payloads: {:?}", files.len(), differing),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> hfl::Result<Outcome>); 11] = [
        ("Example 1 pattern search", c1_example1),
        ("Example 4 parity law", c2_example4),
        ("Example 8 return set", c3_example8),
        ("Example 2 condition checker", c4_example2),
        ("torus multicorrelation trend", c5_corollary_b3),
        ("uniformity seminorm suite", c6_gowers),
        ("equidistribution suite", c7_equidistribution),
        ("Example 5 combination and probe", c8_example5),
        ("intersectivity screening", c9_intersective),
        ("engine equivalences", c10_engines),
        ("reproducibility across threads", c11_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2}. {name}: {} [{}]", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail, secs(t.elapsed()));
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

