//! Dispatch of experiment descriptors to analyses, and the resulting reports.
//!
//! CSV column orders, per analysis:
//!
//! | analysis | columns |
//! |---|---|
//! | condition | `check,verdict,detail` |
//! | avg, multicorr | `N,weighted_average,weight_total,stderr` |
//! | seminorm | `s,value,oracle` |
//! | equi (Weyl) | `N,H,value` |
//! | equi (joint orbit) | `N,box_level,value` |
//! | pattern, probe | `result,n,a,offsets,n_min,n_max,a_max` |
//! | return-set | `n` |

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rug::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::correlate::{multicorrelation, weighted_avg, Multicorrelation, Rounder, DEFAULT_SAMPLES};
use crate::descriptor::{Analysis, ExperimentDescriptor, SequenceJson, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::germ::{
    check_condition_inf, check_condition_int, check_property_p, choose_weight, normal_form, poly_span, Family,
    HardyExpr, Verdict, Weight,
};
use crate::intersective::IntPoly;
use crate::patterns::{banach_density_probe, cor_a4_probe, find_pattern, return_set, shifted_combination, PatternSearch, SearchBounds};
use crate::uniformity::{gowers_box_oracle, gowers_seminorm, joint_orbit_discrepancy, weyl_discrepancy};

/// Default `N` grid for averaging analyses.
pub const DEFAULT_GRID: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
/// Digits used for certified evaluations when no precision is requested.
pub const DEFAULT_PRECISION: u32 = 64;
/// Default modulus bound of the intersectivity screening.
pub const DEFAULT_INT_BOUND: u64 = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub analysis: String,
    pub descriptor: ExperimentDescriptor,
    pub results: Value,
    pub precision_digits: u32,
    pub wall_time_ms: f64,
    #[serde(skip)]
    pub csv: String,
}

impl RunReport {
    /// The results payload; identical descriptors give identical payloads.
    pub fn payload(&self) -> String {
        serde_json::to_string(&self.results).expect("results serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Output {
    json: Value,
    csv: String,
}

fn str_verdict<H, F>(v: &Verdict<H, F>) -> &'static str {
    v.label()
}

/// Run the descriptor; `threads` of `None` uses the descriptor value, then 1.
pub fn run(desc: &ExperimentDescriptor, threads: Option<usize>) -> Result<RunReport> {
    let start = Instant::now();
    let analysis = desc.analysis.ok_or_else(|| Error::Schema("missing field 'analysis'".into()))?;
    let threads = threads.or(desc.threads).unwrap_or(1).max(1);
    let precision = desc.precision.unwrap_or(DEFAULT_PRECISION);
    if precision < 16 {
        return Err(Error::Precondition("precision must be at least 16 digits".into()));
    }
    let out = match analysis {
        Analysis::Condition => condition(desc)?,
        Analysis::Avg => avg(desc, threads)?,
        Analysis::Multicorr => multicorr(desc, threads)?,
        Analysis::Seminorm => seminorm(desc)?,
        Analysis::Equi => equi(desc, threads)?,
        Analysis::Pattern => pattern(desc, threads)?,
        Analysis::ReturnSet => return_set_analysis(desc, threads)?,
        Analysis::Probe => probe(desc, threads, precision)?,
    };
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        analysis: analysis.name().to_string(),
        descriptor: desc.clone(),
        results: out.json,
        precision_digits: precision,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        csv: out.csv,
    })
}

fn weight_of(desc: &ExperimentDescriptor, fam: Option<&Family>, default: &str) -> Result<Weight> {
    let name = match desc.weight.as_deref().unwrap_or(default) {
        // Cesàro averaging is W = t
        "cesaro" => "t",
        n => n,
    };
    if name == "auto" {
        let f = fam.ok_or_else(|| Error::Schema("weight 'auto' needs a family".into()))?;
        return choose_weight(&f.basis, &f.functions);
    }
    let w = Weight::by_name(name).ok_or_else(|| Error::Schema(format!("unknown weight '{name}'")))?;
    if let Some(f) = fam {
        if let Verdict::Fails(p) = check_property_p(&f.basis, &f.functions, &w)? {
            return Err(Error::Precondition(format!(
                "weight {name} violates property P: member {} derivative {} has a term of order t^{} between 1 and log W",
                p.member, p.derivative, p.signature.t_exp
            )));
        }
    }
    Ok(w)
}

fn grid(desc: &ExperimentDescriptor) -> Vec<u64> {
    if desc.grid.is_empty() {
        DEFAULT_GRID.to_vec()
    } else {
        desc.grid.clone()
    }
}

fn csv_line(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "{}", cells.join(","));
}

fn condition(desc: &ExperimentDescriptor) -> Result<Output> {
    let fam = desc.family()?;
    let (b, fs) = (&fam.basis, &fam.functions);
    let mut csv = String::from("check,verdict,detail\n");
    let functions: Vec<Value> = fam.names.iter().zip(fs).map(|(n, f)| json!({"name": n, "expr": f.to_string()})).collect();
    let nf = normal_form(b, fs)?;
    let nf_json = json!({
        "independent": nf.independent.iter().map(|&i| fam.names[i].clone()).collect::<Vec<_>>(),
        "dependent": nf.dependent.iter().map(|d| json!({
            "name": fam.names[d.index],
            "lambdas": d.lambdas.iter().map(|(j, l)| json!({"of": fam.names[*j], "value": l.to_string()})).collect::<Vec<_>>(),
            "poly": d.poly.to_string(),
        })).collect::<Vec<_>>(),
    });
    let span: Vec<String> = poly_span(b, fs)?.iter().map(|p| p.to_string()).collect();
    let inf = check_condition_inf(b, fs)?;
    let inf_json = match &inf {
        Verdict::Holds(r) => json!({"verdict": "holds", "reason": r}),
        Verdict::Unknown(r) => json!({"verdict": "unknown", "reason": r}),
        Verdict::Fails(w) => json!({"verdict": "fails", "witness": {
            "c": w.c.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "q": IntPoly::new(w.q.clone()).to_string(),
            "residual": w.residual.to_string(),
            "samples": w.samples,
        }}),
    };
    let detail = match &inf {
        Verdict::Fails(w) => format!(
            "c=({}) q={} residual={}",
            w.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
            IntPoly::new(w.q.clone()),
            w.residual
        ),
        Verdict::Holds(r) | Verdict::Unknown(r) => r.clone(),
    };
    csv_line(&mut csv, &["inf".into(), str_verdict(&inf).into(), detail.replace(',', ";")]);
    let bound = desc.int_bound.unwrap_or(DEFAULT_INT_BOUND);
    let int = check_condition_int(b, fs, bound)?;
    let qs = |q: &[IntPoly]| q.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let int_json = match &int {
        Verdict::Holds(h) => json!({"verdict": "holds", "q": qs(&h.q), "screened_up_to": h.screened_up_to}),
        Verdict::Fails(f) => json!({"verdict": "fails", "q": qs(&f.q), "modulus": f.modulus}),
        Verdict::Unknown(r) => json!({"verdict": "unknown", "reason": r}),
    };
    let int_detail = match &int {
        Verdict::Holds(h) => format!("q=[{}]", qs(&h.q).join(" ; ")),
        Verdict::Fails(f) => format!("q=[{}] modulus={}", qs(&f.q).join(" ; "), f.modulus),
        Verdict::Unknown(r) => r.clone(),
    };
    csv_line(&mut csv, &["int".into(), str_verdict(&int).into(), int_detail.replace(',', ";")]);
    let requested = desc.weight.clone().unwrap_or_else(|| "auto".into());
    let weight_json = if requested == "auto" {
        match choose_weight(b, fs) {
            Ok(w) => json!({"requested": "auto", "chosen": w.name(), "property_p": "holds"}),
            Err(Error::NoCompatibleWeight) => json!({"requested": "auto", "chosen": null, "property_p": "fails"}),
            Err(e) => return Err(e),
        }
    } else {
        let w = Weight::by_name(&requested).ok_or_else(|| Error::Schema(format!("unknown weight '{requested}'")))?;
        match check_property_p(b, fs, &w)? {
            Verdict::Fails(p) => json!({"requested": requested, "chosen": null, "property_p": "fails",
                "failure": {"member": fam.names[p.member], "derivative": p.derivative,
                    "t_exp": p.signature.t_exp.to_string(), "logs": p.signature.logs.iter().map(|r| r.to_string()).collect::<Vec<_>>()}}),
            v => json!({"requested": requested, "chosen": w.name(), "property_p": v.label()}),
        }
    };
    csv_line(&mut csv, &[
        "property_p".into(),
        weight_json["property_p"].as_str().unwrap_or("").into(),
        format!("weight={}", weight_json["chosen"].as_str().unwrap_or("none")),
    ]);
    Ok(Output {
        json: json!({"functions": functions, "normal_form": nf_json, "poly_span": span, "inf": inf_json, "int": int_json, "weight": weight_json}),
        csv,
    })
}

fn member<'a>(fam: &'a Family, name: &str) -> Result<&'a HardyExpr> {
    fam.get(name).ok_or_else(|| Error::Schema(format!("no function named '{name}' in the family")))
}

fn avg(desc: &ExperimentDescriptor, threads: usize) -> Result<Output> {
    let seq = desc.sequence.as_ref().ok_or_else(|| Error::Schema("missing field 'sequence'".into()))?;
    let fam = if desc.family.is_some() || desc.builtin.is_some() { Some(desc.family()?) } else { None };
    let basis = fam.as_ref().map(|f| f.basis.clone()).unwrap_or_default();
    let w = weight_of(desc, fam.as_ref(), "t")?;
    let g = grid(desc);
    let rounder = |name: &str| -> Result<Rounder> {
        let f = fam.as_ref().ok_or_else(|| Error::Schema("sequence refers to a family but none is given".into()))?;
        Rounder::new(&f.basis, member(f, name)?, desc.mode)
    };
    let rep = match seq {
        SequenceJson::Constant { value } => weighted_avg(&basis, |_| Ok(*value), &w, &g, threads)?,
        SequenceJson::Residue { modulus, residue } => {
            if *modulus == 0 {
                return Err(Error::Precondition("modulus must be positive".into()));
            }
            weighted_avg(&basis, |n| Ok(if n % modulus == residue % modulus { 1.0 } else { 0.0 }), &w, &g, threads)?
        }
        SequenceJson::Frac { function } => {
            let r = rounder(function)?;
            weighted_avg(&basis, |n| r.frac_f64(n), &w, &g, threads)?
        }
        SequenceJson::Cos { function, h } => {
            let r = rounder(function)?;
            weighted_avg(&basis, |n| Ok((2.0 * std::f64::consts::PI * (*h as f64 * r.frac_f64(n)?).fract()).cos()), &w, &g, threads)?
        }
    };
    let mut csv = String::from("N,weighted_average,weight_total,stderr\n");
    for p in &rep.points {
        csv_line(&mut csv, &[p.n.to_string(), p.weighted_average.to_string(), p.weight_total.to_string(), String::new()]);
    }
    Ok(Output { json: serde_json::to_value(&rep)?, csv })
}

fn multicorr(desc: &ExperimentDescriptor, threads: usize) -> Result<Output> {
    let fam = desc.family()?;
    let sys = desc.system.as_ref().ok_or_else(|| Error::Schema("missing field 'system'".into()))?.to_system(&fam.basis)?;
    let set = desc.set.as_ref().ok_or_else(|| Error::Schema("missing field 'set'".into()))?.to_phase_set(&sys)?;
    let w = weight_of(desc, Some(&fam), "t")?;
    let g = grid(desc);
    let rep = if matches!(sys, crate::systems::System::QuadraticSkew { .. }) {
        Multicorrelation::new(&fam.basis, &sys, &set, &fam.functions, desc.mode)?
            .with_sampling(desc.samples.unwrap_or(DEFAULT_SAMPLES), desc.seed)
            .run(&fam.basis, &w, &g, threads)?
    } else {
        multicorrelation(&fam.basis, &sys, &set, &fam.functions, desc.mode, &w, &g, threads)?
    };
    let mut csv = String::from("N,weighted_average,weight_total,stderr\n");
    for p in &rep.points {
        csv_line(&mut csv, &[
            p.n.to_string(),
            p.weighted_average.to_string(),
            p.weight_total.to_string(),
            p.stderr.map(|s| s.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(Output { json: serde_json::to_value(&rep)?, csv })
}

/// Largest `m^{s+1} 2^s` for which the box oracle is also evaluated.
const ORACLE_BUDGET: f64 = 5e7;

fn seminorm(desc: &ExperimentDescriptor) -> Result<Output> {
    let h = desc.observable.as_ref().ok_or_else(|| Error::Schema("missing field 'observable'".into()))?.to_observable()?;
    let orders = if desc.orders.is_empty() { vec![1, 2, 3] } else { desc.orders.clone() };
    let m = h.modulus() as f64;
    let mut rows = Vec::new();
    let mut csv = String::from("s,value,oracle\n");
    for &s in &orders {
        if s > 6 {
            return Err(Error::Precondition("seminorm order above 6 is not supported".into()));
        }
        let v = gowers_seminorm(&h, s);
        let oracle = (m.powi(s as i32 + 1) * 2f64.powi(s as i32) <= ORACLE_BUDGET).then(|| gowers_box_oracle(&h, s));
        csv_line(&mut csv, &[s.to_string(), v.to_string(), oracle.map(|o| o.to_string()).unwrap_or_default()]);
        rows.push(json!({"s": s, "value": v, "oracle": oracle}));
    }
    Ok(Output { json: json!({"modulus": h.modulus(), "shift": h.shift(), "rows": rows}), csv })
}

fn equi(desc: &ExperimentDescriptor, threads: usize) -> Result<Output> {
    let fam = desc.family()?;
    let n = desc.n.unwrap_or(1_000_000);
    let w = weight_of(desc, None, "t")?;
    if let Some(sj) = &desc.system {
        let sys = sj.to_system(&fam.basis)?;
        let rep = joint_orbit_discrepancy(&fam.basis, &sys, &fam.functions, desc.mode, &w, n, threads)?;
        let mut csv = String::from("N,box_level,value\n");
        for (i, v) in rep.box_discrepancy.iter().enumerate() {
            csv_line(&mut csv, &[n.to_string(), (i + 1).to_string(), v.to_string()]);
        }
        return Ok(Output { json: serde_json::to_value(&rep)?, csv });
    }
    let name = match &desc.sequence {
        Some(SequenceJson::Frac { function }) => function.clone(),
        None => fam.names.first().cloned().ok_or_else(|| Error::Schema("family has no functions".into()))?,
        Some(_) => return Err(Error::Schema("equi takes a 'frac' sequence".into())),
    };
    let r = Rounder::new(&fam.basis, member(&fam, &name)?, desc.mode)?;
    let rep = weyl_discrepancy(&fam.basis, |k| r.frac_f64(k), &w, n, desc.h_max.unwrap_or(10), threads)?;
    let mut csv = String::from("N,H,value\n");
    for (i, v) in rep.per_frequency.iter().enumerate() {
        csv_line(&mut csv, &[n.to_string(), (i + 1).to_string(), v.to_string()]);
    }
    Ok(Output { json: serde_json::to_value(&rep)?, csv })
}

fn bounds(desc: &ExperimentDescriptor) -> SearchBounds {
    let n_max = desc.n_max.unwrap_or(10_000);
    SearchBounds::new(n_max, desc.a_max.unwrap_or(n_max)).from_n(desc.n_min.unwrap_or(1))
}

fn search_output(s: &PatternSearch) -> (Value, String) {
    let mut csv = String::from("result,n,a,offsets,n_min,n_max,a_max\n");
    let b = s.bounds;
    let (result, n, a, offs) = match &s.witness {
        Some(w) => (
            "found",
            w.n.to_string(),
            w.a.to_string(),
            w.offsets.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" "),
        ),
        None => ("none", String::new(), String::new(), String::new()),
    };
    csv_line(&mut csv, &[result.into(), n, a, offs, b.n_min.to_string(), b.n_max.to_string(), b.a_max.to_string()]);
    let json = json!({
        "result": result,
        "witness": s.witness,
        "searched_n": b.n_max,
        "n_min": b.n_min,
        "a_max": b.a_max,
    });
    (json, csv)
}

fn pattern(desc: &ExperimentDescriptor, threads: usize) -> Result<Output> {
    let fam = desc.family()?;
    let set = desc.set.as_ref().ok_or_else(|| Error::Schema("missing field 'set'".into()))?.to_integer_set(&fam.basis)?;
    let s = find_pattern(&fam.basis, &set, &fam.functions, desc.mode, bounds(desc), threads)?;
    let (json, csv) = search_output(&s);
    Ok(Output { json, csv })
}

fn return_set_analysis(desc: &ExperimentDescriptor, threads: usize) -> Result<Output> {
    let fam = desc.family()?;
    let sys = desc.system.as_ref().ok_or_else(|| Error::Schema("missing field 'system'".into()))?.to_system(&fam.basis)?;
    let set = desc.set.as_ref().ok_or_else(|| Error::Schema("missing field 'set'".into()))?.to_phase_set(&sys)?;
    let n = desc.n.unwrap_or(10_000);
    let r = return_set(&fam.basis, &sys, &set, &fam.functions, desc.mode, n, threads)?;
    let windows: Vec<u64> = if desc.windows.is_empty() { vec![n.min(1000)] } else { desc.windows.clone() };
    let banach = banach_density_probe(&r, &windows)?;
    let members: Vec<u64> = r.members().collect();
    let mut csv = String::from("n\n");
    for m in &members {
        csv_line(&mut csv, &[m.to_string()]);
    }
    Ok(Output { json: json!({"N": n, "count": members.len(), "members": members, "banach": banach}), csv })
}

fn probe(desc: &ExperimentDescriptor, threads: usize, digits: u32) -> Result<Output> {
    let fam = desc.family()?;
    let set = desc.set.as_ref().ok_or_else(|| Error::Schema("missing field 'set'".into()))?.to_integer_set(&fam.basis)?;
    let shifts = if desc.shifts.is_empty() { vec![desc.ell.unwrap_or(1); fam.len()] } else { desc.shifts.clone() };
    let s = cor_a4_probe(&fam.basis, &fam.functions, &shifts, &set, desc.mode, bounds(desc), threads)?;
    let (mut json, csv) = search_output(&s);
    if !desc.combination.is_empty() {
        let ts = if desc.combination_t.is_empty() { vec![10_000] } else { desc.combination_t.clone() };
        let mut vals = Vec::new();
        for t in ts {
            let v = shifted_combination(&fam.basis, &fam.functions, &desc.combination, t, digits)?;
            vals.push(json!({"t": t, "value": v.mid_f64(), "radius": v.width_f64() / 2.0}));
        }
        json["combination"] = Value::Array(vals);
    }
    Ok(Output { json, csv })
}

/// Complex sequence `e(h · {f(n)})`, used by the examples for AP checks.
pub fn phase_sequence(r: &Rounder, h: i64) -> impl Fn(u64) -> Result<Complex64> + Sync + '_ {
    move |n| Ok(crate::systems::e((h as f64 * r.frac_f64(n)?).rem_euclid(1.0)))
}

/// `q` of an INF witness as a polynomial.
pub fn witness_poly(q: &[Integer]) -> IntPoly {
    IntPoly::new(q.to_vec())
}
