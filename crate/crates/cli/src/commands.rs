//! One function per command; each calls exactly one library operation.

use std::fs;
use std::path::Path;

use blaschke::arith::TermBudget;
use blaschke::blaschke::{factored_lift, lift_budgeted, Blaschke2D, DegreeMatrix};
use blaschke::dynamics::{c_plus, degree_sequence, estimate_lambda1, predicted_degrees, pullback_matrix};
use blaschke::geometry::{expected_indeterminacy_count, indeterminacy_points, line_arrangement};
use blaschke::topology::{
    classify_case, is_generic, topological_degree_with, Case, DegreeStrategy, TopologicalDegree,
};
use blaschke::torus::{
    backward_measure_sample_with, curve_growth_entropy, homology_action, BackwardSampling, TorusPoint,
};
use serde_json::{json, Value};

use crate::config::{MapConfig, RunConfig};
use crate::error::CliError;
use crate::report::{cell, cpair, exact, num, Report, Table};

fn budget(cfg: &RunConfig) -> TermBudget {
    TermBudget {
        max_terms: cfg.params.max_terms,
    }
}

fn matrix_json(n: DegreeMatrix) -> Value {
    json!(n.rows())
}

fn strategy(cfg: &RunConfig, f: &Blaschke2D) -> DegreeStrategy {
    let numeric = DegreeStrategy::Numeric { seed: cfg.params.seed };
    match cfg.params.strategy.as_str() {
        "exact-generic" => DegreeStrategy::ExactGeneric,
        "monomial" => DegreeStrategy::Monomial,
        "numeric" => numeric,
        _ if f.is_monomial() => DegreeStrategy::Monomial,
        _ if is_generic(f).generic => DegreeStrategy::ExactGeneric,
        _ => numeric,
    }
}

fn strategy_name(s: DegreeStrategy) -> &'static str {
    match s {
        DegreeStrategy::ExactGeneric => "exact-generic",
        DegreeStrategy::Monomial => "monomial",
        DegreeStrategy::Numeric { .. } => "numeric",
    }
}

fn top_degree(cfg: &RunConfig, f: &Blaschke2D) -> Result<TopologicalDegree, CliError> {
    topological_degree_with(f, strategy(cfg, f), &cfg.tolerances.solver()).map_err(CliError::from_module)
}

/// Common header of every report.
fn envelope(command: &str, cfg: &RunConfig, f: &Blaschke2D, result: Value) -> Value {
    json!({
        "command": command,
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "degree_matrix": matrix_json(f.degree_matrix()),
        "provenance": {
            "seed": cfg.params.seed,
            "tolerances": serde_json::to_value(&cfg.tolerances).expect("tolerances serialize"),
            "version": env!("CARGO_PKG_VERSION"),
        },
        "result": result,
    })
}

pub fn classify(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let d = top_degree(cfg, f)?;
    let l = classify_case(f.degree_matrix(), d.value as i64).map_err(CliError::from_module)?;
    let g = is_generic(f);
    let result = json!({
        "case": l.case.to_string(),
        "d_top": d.value,
        "d_top_strategy": strategy_name(d.strategy),
        "c_plus": l.c_plus.to_string(),
        "c_plus_value": num(l.c_plus.value()),
        "witness": {
            "p_at_d_top": l.p_value,
            "trace": l.trace,
            "det": l.det,
            "twice_d_top": 2 * l.d_top,
        },
        "generic": g.generic,
        "non_generic_reasons": g.reasons,
    });
    Ok(Report {
        json: envelope("classify", cfg, f, result),
        table: None,
    })
}

pub fn lift(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let h = lift_budgeted(f, &budget(cfg)).map_err(CliError::from_module)?;
    let (_, removed) = factored_lift(f);
    let mut t = Table::new(&["component", "polynomial"]);
    for (i, p) in h.f.iter().enumerate() {
        t.rows.push(vec![format!("F{}", i + 1), p.to_string()]);
    }
    let result = json!({
        "degree": h.degree(),
        "unreduced_degree": f.degree_matrix().total(),
        "components": h.f.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "common_factors": removed.iter().map(|l| l.to_tripoly().to_string()).collect::<Vec<_>>(),
        "terms": h.term_count(),
    });
    Ok(Report {
        json: envelope("lift", cfg, f, result),
        table: Some(t),
    })
}

pub fn degrees(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let n = f.degree_matrix();
    let measured = degree_sequence(f, cfg.params.n_max, &budget(cfg)).map_err(CliError::from_module)?;
    let predicted = predicted_degrees(n, cfg.params.n_max);
    let est = estimate_lambda1(&measured).ok();
    let mut t = Table::new(&["n", "measured", "predicted"]);
    for (k, p) in predicted.degrees.iter().enumerate() {
        let m = measured.degrees.get(k).map_or(String::new(), |d| d.to_string());
        t.rows.push(vec![(k + 1).to_string(), m, p.to_string()]);
    }
    let c = c_plus(n);
    let result = json!({
        "measured": measured.degrees,
        "predicted": predicted.degrees,
        "truncated_at": measured.truncated_at,
        "agree": measured.degrees == predicted.degrees[..measured.degrees.len()],
        "c_plus": c.to_string(),
        "c_plus_value": num(c.value()),
        "last_ratio": est.map(|e| num(e.ratio)),
        "last_root": est.map(|e| num(e.root)),
        "pullback_matrix": pullback_matrix(n).m,
    });
    Ok(Report {
        json: envelope("degrees", cfg, f, result),
        table: Some(t),
    })
}

pub fn indeterminacy(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let s = indeterminacy_points(f);
    let mut t = Table::new(&["z", "w"]);
    for (z, w) in &s.finite {
        t.rows.push(vec![z.to_string(), w.to_string()]);
    }
    let lines: Vec<Value> = line_arrangement(f)
        .iter()
        .map(|l| json!({"kind": l.kind.to_string(), "index": l.index, "form": l.polynomial().to_string(), "degenerate": l.degenerate}))
        .collect();
    let result = json!({
        "finite": s.finite.iter().map(|(z, w)| json!([exact(z), exact(w)])).collect::<Vec<_>>(),
        "finite_count": s.finite.len(),
        "expected_count": expected_indeterminacy_count(f),
        "infinite": s.infinite.iter().map(|p| p.iter().map(exact).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "warnings": s.warnings,
        "lines": lines,
    });
    Ok(Report {
        json: envelope("indeterminacy", cfg, f, result),
        table: Some(t),
    })
}

pub fn topdeg(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let d = top_degree(cfg, f)?;
    let mut t = Table::new(&["target", "re_z", "im_z", "re_w", "im_w", "residual"]);
    for (i, s) in d.solutions.iter().enumerate() {
        for (p, r) in s.points.iter().zip(&s.residuals) {
            t.rows.push(vec![i.to_string(), cell(p.0.re), cell(p.0.im), cell(p.1.re), cell(p.1.im), cell(*r)]);
        }
    }
    let result = json!({
        "d_top": d.value,
        "strategy": strategy_name(d.strategy),
        "targets": d.targets.iter().map(|&p| cpair(p)).collect::<Vec<_>>(),
        "solutions": d.solutions.iter().map(|s| json!({
            "count": s.len(),
            "points": s.points.iter().map(|&p| cpair(p)).collect::<Vec<_>>(),
            "residuals": s.residuals.iter().map(|&r| num(r)).collect::<Vec<_>>(),
            "multiplicity_flags": s.multiplicity_flags,
            "resultant_degree": s.resultant_degree,
        })).collect::<Vec<_>>(),
    });
    Ok(Report {
        json: envelope("topdeg", cfg, f, result),
        table: Some(t),
    })
}

pub fn preimage_measure(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let d_top = match cfg.params.d_top {
        Some(d) => d,
        None => top_degree(cfg, f)?.value,
    };
    let p = BackwardSampling {
        depth: cfg.params.depth,
        samples: cfg.params.samples,
        seed: cfg.params.seed,
        d_top: d_top as usize,
    };
    let [x, y] = cfg.params.torus_point;
    let cloud = backward_measure_sample_with(f, TorusPoint::new(x, y), &p, &cfg.tolerances.solver()).map_err(CliError::from_module)?;
    let mut t = Table::new(&["re_z", "im_z", "re_w", "im_w", "dist"]);
    for (q, d) in cloud.points.iter().zip(&cloud.dist) {
        t.rows.push(vec![cell(q.0.re), cell(q.0.im), cell(q.1.re), cell(q.1.im), cell(*d)]);
    }
    let result = json!({
        "depth": cloud.depth,
        "samples": p.samples,
        "d_top": d_top,
        "endpoints": cloud.points.len(),
        "deficiency_count": cloud.deficiencies,
        "dropped": cloud.dropped,
        "histogram": {
            "upper_edges": cloud.histogram.upper_edges.iter().map(|&e| num(e)).collect::<Vec<_>>(),
            "counts": cloud.histogram.counts,
        },
        "far_fraction": num(cloud.far_fraction),
        "max_preimage_dist": num(cloud.max_node_dist),
    });
    Ok(Report {
        json: envelope("preimage-measure", cfg, f, result),
        table: Some(t),
    })
}

pub fn torus_entropy(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let e = curve_growth_entropy(f, cfg.params.n_max, cfg.params.samples).map_err(CliError::from_module)?;
    let c = c_plus(f.degree_matrix());
    let mut t = Table::new(&["n", "log_length"]);
    for (k, l) in e.log_lengths.iter().enumerate() {
        t.rows.push(vec![k.to_string(), cell(*l)]);
    }
    let target = c.value().ln();
    let result = json!({
        "entropy": num(e.entropy),
        "log_c_plus": num(target),
        "relative_error": num((e.entropy - target).abs() / target),
        "log_lengths": e.log_lengths.iter().map(|&l| num(l)).collect::<Vec<_>>(),
        "segments": e.segments,
    });
    Ok(Report {
        json: envelope("torus-entropy", cfg, f, result),
        table: Some(t),
    })
}

pub fn winding(cfg: &RunConfig, f: &Blaschke2D) -> Result<Report, CliError> {
    let n = f.degree_matrix();
    let mut t = Table::new(&["n", "h11", "h12", "h21", "h22", "matches_power"]);
    let mut items = Vec::new();
    for k in 1..=cfg.params.n_max {
        let h = homology_action(f, k).map_err(CliError::from_module)?;
        let want = n.pow(k).map(|r| r.map(|x| x as i64));
        t.rows.push(vec![
            k.to_string(),
            h[0][0].to_string(),
            h[0][1].to_string(),
            h[1][0].to_string(),
            h[1][1].to_string(),
            (h == want).to_string(),
        ]);
        items.push(json!({"n": k, "action": h, "matrix_power": want, "matches": h == want}));
    }
    Ok(Report {
        json: envelope("winding", cfg, f, json!({ "iterates": items })),
        table: Some(t),
    })
}

pub fn run_command(command: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let f = cfg.build_map()?;
    match command {
        "classify" => classify(cfg, &f),
        "lift" => lift(cfg, &f),
        "degrees" => degrees(cfg, &f),
        "indeterminacy" => indeterminacy(cfg, &f),
        "topdeg" => topdeg(cfg, &f),
        "preimage-measure" => preimage_measure(cfg, &f),
        "torus-entropy" => torus_entropy(cfg, &f),
        "winding" => winding(cfg, &f),
        other => Err(CliError::Validation {
            code: "UnknownCommand".into(),
            message: format!("unknown command {other:?}"),
        }),
    }
}

fn family(name: &str) -> MapConfig {
    MapConfig {
        family: Some(name.into()),
        ..MapConfig::default()
    }
}

fn generic(rows: [[u32; 2]; 2], seed: u64) -> MapConfig {
    MapConfig {
        family: Some("random".into()),
        degrees: Some(rows),
        seed: Some(seed),
        ..MapConfig::default()
    }
}

struct Check {
    id: &'static str,
    claim: &'static str,
    observed: Value,
    pass: bool,
}

/// Runs the reproduction suite, writing one report per run into `dir` and a
/// `summary.json` listing every check.
pub fn reproduce_paper(dir: &Path, seed: u64) -> Result<Report, CliError> {
    fs::create_dir_all(dir)?;
    let mut checks: Vec<Check> = Vec::new();
    let write = |name: &str, r: &Report| -> Result<(), CliError> {
        fs::write(dir.join(format!("{name}.json")), r.render("json")?)?;
        Ok(())
    };
    let with = |map: MapConfig, tweak: &dyn Fn(&mut RunConfig)| {
        let mut c = RunConfig::for_map(map);
        c.params.seed = seed;
        tweak(&mut c);
        c
    };

    // low topological degree family
    let c = with(family("low-top-degree"), &|c| c.params.strategy = "numeric".into());
    let r = run_command("classify", &c)?;
    write("low-top-degree-classify", &r)?;
    let res = &r.json["result"];
    checks.push(Check {
        id: "low-top-degree",
        claim: "d_top = 5, case II with p(5) = -4, c+ = (6+sqrt(32))/2",
        observed: json!({"d_top": res["d_top"], "case": res["case"], "p": res["witness"]["p_at_d_top"], "c_plus": res["c_plus"]}),
        pass: res["d_top"] == 5 && res["case"] == "II" && res["witness"]["p_at_d_top"] == -4 && res["c_plus"] == "(6+sqrt(32))/2",
    });

    // equal degree family
    let c = with(family("equal-degree"), &|c| c.params.strategy = "numeric".into());
    let r = run_command("classify", &c)?;
    write("equal-degree-classify", &r)?;
    let res = r.json["result"].clone();
    let c = with(family("equal-degree"), &|c| {
        c.params.depth = 3;
        c.params.samples = 32;
        c.params.d_top = Some(5);
        c.params.torus_point = [0.31, 0.77];
    });
    let m = run_command("preimage-measure", &c)?;
    write("equal-degree-preimages", &m)?;
    let dist = m.json["result"]["max_preimage_dist"].as_f64().unwrap_or(f64::INFINITY);
    checks.push(Check {
        id: "equal-degree",
        claim: "d_top = 5 = det N, case III with p(5) = 0, torus preimages stay on the torus",
        observed: json!({"d_top": res["d_top"], "case": res["case"], "p": res["witness"]["p_at_d_top"], "max_preimage_dist": num(dist)}),
        pass: res["d_top"] == 5 && res["case"] == Case::III.to_string() && res["witness"]["p_at_d_top"] == 0 && dist < 1e-8,
    });

    // degree growth
    let c = with(generic([[1, 1], [1, 2]], seed), &|_| {});
    let r = run_command("degrees", &c)?;
    write("generic-degrees", &r)?;
    let res = &r.json["result"];
    let ratio = res["last_ratio"].as_f64().unwrap_or(0.0);
    let cp = res["c_plus_value"].as_f64().unwrap_or(1.0);
    checks.push(Check {
        id: "dynamical-degree",
        claim: "generic [[1,1],[1,2]]: degrees 5, 13, 34 as predicted, ratio near c+",
        observed: json!({"measured": res["measured"], "predicted": res["predicted"], "ratio": res["last_ratio"]}),
        pass: res["measured"] == json!([5, 13, 34]) && res["agree"] == true && (ratio - cp).abs() / cp < 0.005,
    });

    // pullback matrix
    let mut bad = Vec::new();
    for m in 1..=5 {
        for n in 1..=5 {
            for p in 1..=5 {
                for q in 1..=5 {
                    let Ok(d) = DegreeMatrix::new(m, n, p, q) else { continue };
                    if pullback_matrix(d).char_poly() != [0, d.det(), -d.trace(), 1] {
                        bad.push(d.rows());
                    }
                }
            }
        }
    }
    checks.push(Check {
        id: "pullback-matrix",
        claim: "char(M) = x (x^2 - (m+q) x + det N) for all N with entries <= 5",
        observed: json!({"mismatches": bad}),
        pass: bad.is_empty(),
    });

    // topological degree of generic maps
    let mut seen = Vec::new();
    let mut ok = true;
    for (k, rows) in [[[1, 1], [1, 2]], [[2, 1], [1, 1]], [[1, 2], [1, 3]]].into_iter().enumerate() {
        let c = with(generic(rows, seed + k as u64), &|c| c.params.strategy = "numeric".into());
        let r = run_command("topdeg", &c)?;
        write(&format!("topdeg-{k}"), &r)?;
        let want = (rows[0][0] * rows[1][1] + rows[0][1] * rows[1][0]) as u64;
        ok &= r.json["result"]["d_top"] == want;
        seen.push(json!({"degree_matrix": rows, "d_top": r.json["result"]["d_top"], "expected": want}));
    }
    checks.push(Check {
        id: "topological-degree",
        claim: "numeric preimage count equals mq + np for generic maps",
        observed: json!(seen),
        pass: ok,
    });

    // indeterminacy
    let c = with(generic([[2, 1], [1, 2]], seed), &|_| {});
    let r = run_command("indeterminacy", &c)?;
    write("indeterminacy", &r)?;
    let res = &r.json["result"];
    checks.push(Check {
        id: "indeterminacy",
        claim: "2(mn+pq) + (mq+np) finite indeterminacy points",
        observed: json!({"count": res["finite_count"], "expected": res["expected_count"]}),
        pass: res["finite_count"] == res["expected_count"] && res["warnings"] == json!([]),
    });

    // homology
    let c = with(generic([[1, 1], [1, 2]], seed), &|c| c.params.n_max = 3);
    let r = run_command("winding", &c)?;
    write("winding", &r)?;
    let all = r.json["result"]["iterates"].as_array().is_some_and(|v| v.iter().all(|i| i["matches"] == true));
    checks.push(Check {
        id: "homology",
        claim: "action on first homology of f^n is N^n",
        observed: r.json["result"]["iterates"].clone(),
        pass: all,
    });

    // entropy
    let c = with(family("monomial"), &|c| {
        c.map.degrees = Some([[2, 1], [1, 1]]);
        c.params.n_max = 12;
        c.params.samples = 128;
    });
    let r = run_command("torus-entropy", &c)?;
    write("torus-entropy", &r)?;
    let err = r.json["result"]["relative_error"].as_f64().unwrap_or(1.0);
    checks.push(Check {
        id: "torus-entropy",
        claim: "curve growth entropy of the linear torus map is log c+",
        observed: json!({"entropy": r.json["result"]["entropy"], "log_c_plus": r.json["result"]["log_c_plus"]}),
        pass: err < 0.1,
    });

    // the support probe: reported, not asserted
    let c = with(
        MapConfig {
            max_modulus: Some(0.05),
            ..generic([[1, 1], [1, 2]], seed)
        },
        &|c| {
            c.params.depth = 4;
            c.params.samples = 32;
            c.params.d_top = Some(3);
        },
    );
    let r = run_command("preimage-measure", &c)?;
    write("generic-preimages", &r)?;

    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = json!({
        "command": "reproduce-paper",
        "seed": seed,
        "passed": passed,
        "total": checks.len(),
        "checks": checks.iter().map(|c| json!({"id": c.id, "claim": c.claim, "observed": c.observed, "pass": c.pass})).collect::<Vec<_>>(),
        "support_probe": {
            "far_fraction": r.json["result"]["far_fraction"],
            "histogram": r.json["result"]["histogram"],
        },
    });
    let mut t = Table::new(&["id", "pass"]);
    for c in &checks {
        t.rows.push(vec![c.id.to_string(), c.pass.to_string()]);
    }
    let report = Report {
        json: summary,
        table: Some(t),
    };
    write("summary", &report)?;
    Ok(report)
}
