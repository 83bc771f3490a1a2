use std::collections::BTreeMap;
use std::fmt::Write;

use queerlab::amodule::{self, AAlgebra, HomDimCase, MembershipCase};
use queerlab::heckeclifford::{decompose_regular, tensor_ideal_cases, IsotypicReport, TensorIdealCase};
use queerlab::partitions::{enumerate_strict_up_to, StrictPartition};
use queerlab::queer::dim_t;
use queerlab::scalars::Rational;
use queerlab::symfunc::{self, gamma_product, pieri as pieri_rule, GammaElement};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, Config, MAX_A_RANK, MAX_DEGREE, MAX_H_RANK, MAX_PIERI};

/// A finished run: pass flag plus the same content in each output format.
#[derive(Debug, Clone)]
pub struct Report {
    pub pass: bool,
    pub json: Value,
    pub csv: Vec<Vec<String>>,
    pub text: String,
}

impl Report {
    pub fn csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.csv {
            w.write_record(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

fn compute_err(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn label(p: &StrictPartition) -> String {
    format!("{p:?}")
}

fn labels(ps: &[StrictPartition]) -> String {
    ps.iter().map(label).collect::<Vec<_>>().join(" ")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn expansion_text(terms: &BTreeMap<StrictPartition, Rational>) -> String {
    let parts: Vec<String> = terms.iter().rev().map(|(mu, c)| format!("{c}·Q{}", label(mu))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn pieri(c: &Config) -> Result<Report, CliError> {
    let bound = c.bound("degree", c.degree.unwrap_or(MAX_PIERI), MAX_PIERI)?;
    let rows: Vec<(StrictPartition, BTreeMap<StrictPartition, Rational>, BTreeMap<StrictPartition, Rational>)> =
        enumerate_strict_up_to(bound)
            .into_par_iter()
            .map(|lambda| {
                let rule = pieri_rule(&lambda).into_iter().map(|(mu, k)| (mu, Rational::from_int(k))).collect();
                let product = gamma_product(&GammaElement::basis(StrictPartition::from_slice(&[1])), &GammaElement::basis(lambda.clone()));
                (lambda, rule, product.terms().clone())
            })
            .collect();
    let pass = rows.iter().all(|(_, r, p)| r == p);
    let mut text = String::new();
    let mut csv = vec![vec!["lambda".into(), "pieri".into(), "product".into(), "pass".into()]];
    let mut cases = Vec::new();
    for (lambda, rule, product) in &rows {
        let ok = rule == product;
        writeln!(text, "Q1·Q{} = {}  {}", label(lambda), expansion_text(product), verdict(ok)).unwrap();
        csv.push(vec![label(lambda), expansion_text(rule), expansion_text(product), ok.to_string()]);
        cases.push(json!({"lambda": lambda, "pieri": expansion_text(rule), "product": expansion_text(product), "pass": ok}));
    }
    writeln!(text, "{} rows: {}", rows.len(), verdict(pass)).unwrap();
    Ok(Report { pass, json: json!({"bound": bound, "cases": cases, "pass": pass}), csv, text })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RankCheck {
    n: usize,
    total: usize,
    expected: usize,
    pass: bool,
}

fn isotypic_report(c: &Config, n: usize) -> Result<IsotypicReport, CliError> {
    c.cache().get_or_compute(&format!("isotypic-n{n}-seed{}", c.seed), || {
        decompose_regular(n, c.seed).map(|t| t.report()).map_err(compute_err)
    })
}

pub fn hecke_ideals(c: &Config) -> Result<Report, CliError> {
    let nmax = c.bound("nmax", c.nmax.unwrap_or(4), MAX_H_RANK)?;
    let ranks: Vec<RankCheck> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let report = isotypic_report(c, n)?;
            let total = report.blocks.iter().map(|b| b.dim_j).sum();
            let expected = (1usize << n) * (1..=n).product::<usize>();
            Ok(RankCheck { n, total, expected, pass: total == expected })
        })
        .collect::<Result<_, CliError>>()?;
    let lambdas = enumerate_strict_up_to(nmax);
    let per_lambda: Vec<Vec<TensorIdealCase>> = lambdas
        .par_iter()
        .map(|l| {
            c.cache().get_or_compute(&format!("tensor-ideal-{}-m{}-seed{}", l.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("_"), nmax - l.size(), c.seed), || {
                tensor_ideal_cases(l, nmax - l.size(), c.seed).map_err(compute_err)
            })
        })
        .collect::<Result<_, CliError>>()?;
    let cases: Vec<TensorIdealCase> = per_lambda.into_iter().flatten().collect();
    let pass = ranks.iter().all(|r| r.pass) && cases.iter().all(|c| c.pass);
    let mut text = String::new();
    for r in &ranks {
        writeln!(text, "n={}: Σ dim J = {} (2^n·n! = {})  {}", r.n, r.total, r.expected, verdict(r.pass)).unwrap();
    }
    let mut csv = vec![["lambda", "m", "predicted_support", "observed_support", "dim", "pass"].map(String::from).to_vec()];
    for case in &cases {
        writeln!(
            text,
            "Σ^{}(J{}): {}  {}",
            case.m,
            label(&case.lambda),
            labels(&case.observed_support),
            verdict(case.pass)
        )
        .unwrap();
        csv.push(vec![
            label(&case.lambda),
            case.m.to_string(),
            labels(&case.predicted_support),
            labels(&case.observed_support),
            case.dim.to_string(),
            case.pass.to_string(),
        ]);
    }
    writeln!(text, "{} ranks, {} tensor-ideal cases: {}", ranks.len(), cases.len(), verdict(pass)).unwrap();
    let json = json!({"nmax": nmax, "seed": c.seed, "ranks": ranks, "cases": cases, "pass": pass});
    Ok(Report { pass, json, csv, text })
}

fn a_ranks(c: &Config) -> Result<(usize, usize), CliError> {
    let n = c.bound("n", c.n.unwrap_or(3), MAX_A_RANK)?;
    let m = c.bound("m", c.m.unwrap_or(n), MAX_A_RANK)?;
    Ok((n, m))
}

pub fn main_theorem(c: &Config) -> Result<Report, CliError> {
    let (n, m) = a_ranks(c)?;
    let d_max = c.bound("dmax", c.dmax.unwrap_or(5), MAX_DEGREE)?;
    let alg = AAlgebra::shared(n, m).map_err(compute_err)?;
    let lambdas = amodule::visible_partitions(n, m, d_max);
    let rows: Vec<Vec<MembershipCase>> = lambdas
        .par_iter()
        .map(|l| {
            let key = format!("main-theorem-n{n}-m{m}-d{d_max}-l{}", l.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("_"));
            c.cache().get_or_compute(&key, || Ok(amodule::main_theorem_row(&alg, l, d_max)))
        })
        .collect::<Result<_, CliError>>()?;
    let report = amodule::MainTheoremReport { n, m, d_max, cases: rows.iter().flatten().cloned().collect() };
    let pass = report.passed();
    let mut header = vec!["lambda\\mu".to_string()];
    header.extend(lambdas.iter().map(label));
    let mut csv = vec![header];
    let mut text = format!("columns μ = {}\n", labels(&lambdas));
    for row in &rows {
        let mut line = vec![label(&row[0].lambda)];
        line.extend(row.iter().map(|case| {
            let mark = if case.observed { "1" } else { "0" };
            if case.pass {
                mark.to_string()
            } else {
                format!("{mark}!")
            }
        }));
        writeln!(text, "{:>9}  {}", line[0], line[1..].join(" ")).unwrap();
        csv.push(line);
    }
    let failures: Vec<&MembershipCase> = report.cases.iter().filter(|c| !c.pass).collect();
    for f in &failures {
        writeln!(text, "mismatch: λ={} μ={} predicted {} observed {}", label(&f.lambda), label(&f.mu), f.predicted, f.observed).unwrap();
    }
    writeln!(text, "A({n},{m}) to degree {d_max}: {} cases, {} mismatches: {}", report.cases.len(), failures.len(), verdict(pass)).unwrap();
    Ok(Report { pass, json: serde_json::to_value(&report).unwrap(), csv, text })
}

pub fn determinantal(c: &Config) -> Result<Report, CliError> {
    let (n, m) = a_ranks(c)?;
    let d_max = c.bound("dmax", c.dmax.unwrap_or(5), MAX_DEGREE)?;
    let reports: Vec<amodule::DeterminantalReport> = (0..n.min(m))
        .into_par_iter()
        .map(|r| amodule::determinantal_ideal_check(n, m, r, d_max).map_err(compute_err))
        .collect::<Result<_, CliError>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let mut text = String::new();
    let mut csv = vec![["r", "generator", "predicted_support", "observed_support", "quotient_lengths", "pass"].map(String::from).to_vec()];
    for r in &reports {
        let bounds: Vec<String> = r.bounds.iter().map(|b| format!("ℓ(A/I{}) = {}", label(&b.lambda), b.quotient_length)).collect();
        writeln!(text, "r={} I{}: support {}; {}  {}", r.r, label(&r.generator), labels(&r.observed_support), bounds.join(", "), verdict(r.pass)).unwrap();
        csv.push(vec![
            r.r.to_string(),
            label(&r.generator),
            labels(&r.predicted_support),
            labels(&r.observed_support),
            r.bounds.iter().map(|b| format!("{}:{}", label(&b.lambda), b.quotient_length)).collect::<Vec<_>>().join(" "),
            r.pass.to_string(),
        ]);
    }
    writeln!(text, "{}", verdict(pass)).unwrap();
    Ok(Report { pass, json: json!({"n": n, "m": m, "d_max": d_max, "cases": reports, "pass": pass}), csv, text })
}

pub fn cauchy(c: &Config) -> Result<Report, CliError> {
    let degree = c.bound("degree", c.degree.unwrap_or(6), MAX_DEGREE)?;
    let vars = c.bound("vars", c.vars.unwrap_or(degree), MAX_DEGREE)?;
    let result = symfunc::cauchy_check(degree, vars);
    let pass = result.is_ok();
    let mismatch = result.as_ref().err().map(|e| e.to_string());
    let text = match &mismatch {
        None => format!("Cauchy identity through degree {degree} in {vars} variables: PASS\n"),
        Some(e) => format!("{e}\nFAIL\n"),
    };
    let csv = vec![
        vec!["degree".into(), "vars".into(), "pass".into(), "mismatch".into()],
        vec![degree.to_string(), vars.to_string(), pass.to_string(), mismatch.clone().unwrap_or_default()],
    ];
    Ok(Report { pass, json: json!({"degree": degree, "vars": vars, "pass": pass, "mismatch": mismatch}), csv, text })
}

pub fn phi_psi(c: &Config) -> Result<Report, CliError> {
    let n_max = c.bound("n", c.n.unwrap_or(3), MAX_A_RANK)?;
    let order = c.bound("jet-order", c.jet_order.unwrap_or(3), MAX_DEGREE)?;
    let results: Vec<(amodule::PhiPsiReport, amodule::MStabilityReport)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let pp = amodule::phi_psi_check(n, order, 40, c.seed).map_err(compute_err)?;
            let ms = amodule::m_stability_check(n).map_err(compute_err)?;
            Ok((pp, ms))
        })
        .collect::<Result<_, CliError>>()?;
    let pass = results.iter().all(|(p, s)| p.pass && s.offending.is_empty());
    let mut text = String::new();
    let mut csv = vec![["n", "jet_order", "round_trip_failures", "identity_failures", "multiplicativity_failures", "m_offending", "pass"].map(String::from).to_vec()];
    for (p, s) in &results {
        let ok = p.pass && s.offending.is_empty();
        writeln!(
            text,
            "n={}: ψ∘φ failures {}, identity failures {}, product failures {}/{}, 𝔪 offenders {}/{}  {}",
            p.n,
            p.round_trip_failures.len(),
            p.identity_failures.len(),
            p.multiplicativity_failures.len(),
            p.samples,
            s.offending.len(),
            s.checked,
            verdict(ok)
        )
        .unwrap();
        csv.push(vec![
            p.n.to_string(),
            p.order.to_string(),
            p.round_trip_failures.join(" "),
            p.identity_failures.join(" "),
            p.multiplicativity_failures.len().to_string(),
            s.offending.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(" "),
            ok.to_string(),
        ]);
    }
    writeln!(text, "jets of order {order}: {}", verdict(pass)).unwrap();
    let (pp, ms): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(Report { pass, json: json!({"jet_order": order, "phi_psi": pp, "m_stability": ms, "pass": pass}), csv, text })
}

pub fn prop_dim(c: &Config) -> Result<Report, CliError> {
    let (n, m) = a_ranks(c)?;
    let size_max = c.bound("dmax", c.dmax.unwrap_or(2), MAX_DEGREE)?;
    let r_max = c.bound("degree", c.degree.unwrap_or(2), MAX_DEGREE)?;
    let alg = AAlgebra::shared(n, m).map_err(compute_err)?;
    let visible = |d| amodule::visible_partitions(n, m, d);
    let mut quads = Vec::new();
    for alpha in visible(size_max) {
        for beta in visible(size_max) {
            for lambda in visible(alpha.size() + r_max) {
                for mu in visible(beta.size() + r_max) {
                    quads.push((lambda.clone(), mu, alpha.clone(), beta.clone()));
                }
            }
        }
    }
    let cases: Vec<HomDimCase> = quads
        .par_iter()
        .map(|(l, u, a, b)| amodule::hom_dim_check(&alg, l, u, a, b).map_err(compute_err))
        .collect::<Result<_, CliError>>()?;
    let pass = cases.iter().all(|c| c.pass);
    let mut text = String::new();
    let mut csv = vec![["lambda", "mu", "alpha", "beta", "brute_force", "formula", "total_dim", "pass"].map(String::from).to_vec()];
    for case in &cases {
        if !case.formula.is_zero() || !case.brute_force.is_zero() || !case.pass {
            writeln!(
                text,
                "Hom(T{}⊠T{}, T{}⊠T{}⊗A): {} = {}  {}",
                label(&case.lambda),
                label(&case.mu),
                label(&case.alpha),
                label(&case.beta),
                case.brute_force,
                case.formula,
                verdict(case.pass)
            )
            .unwrap();
        }
        csv.push(vec![
            label(&case.lambda),
            label(&case.mu),
            label(&case.alpha),
            label(&case.beta),
            case.brute_force.to_string(),
            case.formula.to_string(),
            case.total_dim.to_string(),
            case.pass.to_string(),
        ]);
    }
    writeln!(text, "{} cases (zero cases omitted above): {}", cases.len(), verdict(pass)).unwrap();
    let json = json!({"n": n, "m": m, "size_max": size_max, "r_max": r_max, "cases": cases, "pass": pass});
    Ok(Report { pass, json, csv, text })
}

pub fn isotypic(c: &Config) -> Result<Report, CliError> {
    let n = c.bound("n", c.n.unwrap_or(3), MAX_H_RANK)?;
    let report = isotypic_report(c, n)?;
    let mut text = String::new();
    let mut csv = vec![["lambda", "dim_J", "dim_S", "type"].map(String::from).to_vec()];
    for b in &report.blocks {
        writeln!(text, "{} {} {}", label(&b.lambda), b.dim_j, b.kind).unwrap();
        csv.push(vec![label(&b.lambda), b.dim_j.to_string(), b.dim_s.to_string(), b.kind.to_string()]);
    }
    Ok(Report { pass: true, json: serde_json::to_value(&report).unwrap(), csv, text })
}

fn selected(c: &Config, default_size: usize) -> Result<Vec<StrictPartition>, CliError> {
    match &c.lambda {
        Some(l) => {
            c.bound("lambda size", l.size(), MAX_DEGREE)?;
            Ok(vec![l.clone()])
        }
        None => Ok(enumerate_strict_up_to(c.bound("degree", c.degree.unwrap_or(default_size), MAX_DEGREE)?)),
    }
}

pub fn q_expansion(c: &Config) -> Result<Report, CliError> {
    let lambdas = selected(c, 4)?;
    let rows: Vec<(StrictPartition, String)> =
        lambdas.into_iter().map(|l| { let e = symfunc::q_expansion(&l).to_string(); (l, e) }).collect();
    let text = if c.lambda.is_some() {
        format!("{}\n", rows[0].1)
    } else {
        rows.iter().map(|(l, e)| format!("Q{} = {e}\n", label(l))).collect()
    };
    let mut csv = vec![vec!["lambda".to_string(), "expansion".to_string()]];
    csv.extend(rows.iter().map(|(l, e)| vec![label(l), e.clone()]));
    let json = Value::Array(rows.iter().map(|(l, e)| json!({"lambda": l, "expansion": e})).collect());
    Ok(Report { pass: true, json, csv, text })
}

pub fn dims(c: &Config) -> Result<Report, CliError> {
    let n = c.bound("n", c.n.unwrap_or(2), MAX_H_RANK)?;
    let lambdas = selected(c, 4)?;
    let rows: Vec<(StrictPartition, usize)> = lambdas
        .into_par_iter()
        .map(|l| dim_t(&l, n).map(|d| (l, d)).map_err(compute_err))
        .collect::<Result<_, CliError>>()?;
    let text = if c.lambda.is_some() {
        format!("{}\n", rows[0].1)
    } else {
        rows.iter().map(|(l, d)| format!("{} {d}\n", label(l))).collect()
    };
    let mut csv = vec![vec!["lambda".to_string(), "n".to_string(), "dim".to_string()]];
    csv.extend(rows.iter().map(|(l, d)| vec![label(l), n.to_string(), d.to_string()]));
    let json = Value::Array(rows.iter().map(|(l, d)| json!({"lambda": l, "n": n, "dim": d})).collect());
    Ok(Report { pass: true, json, csv, text })
}
