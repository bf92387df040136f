use std::path::Path;

use cluster_core::algebra::{LaurentPolynomial, Rat, RationalFunction};
use cluster_core::battery::{run_parallel, BatteryConfig, CRITERIA};
use cluster_core::models::{gr2_flip_closure, markov_enumerate, plucker_verify};
use cluster_core::pentagram::{conserved_quantities, pentagram_step, random_polygon, y_params};
use cluster_core::poisson::{clear_denominators, solve_compatible, CompatibleSolution};
use cluster_core::quantum::{QuantumSeed, SkewForm};
use cluster_core::rank2::{denominator_of, finite_type_census, rank2_var, Census, Rank2Params};
use cluster_core::seed::{enumerate_exchange_graph, GraphStatus, Seed};
use cluster_core::zamolodchikov::verify_period;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::seedfile::{display_vars, load, SeedFile};
use crate::{CliError, Report};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn matrix_string<T: ToString>(rows: &[Vec<T>]) -> String {
    let rows: Vec<String> =
        rows.iter().map(|r| format!("[{}]", r.iter().map(T::to_string).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn rat_rows(rows: &[Vec<Rat>]) -> Value {
    json!(rows.iter().map(|r| r.iter().map(Rat::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Converts 1-based directions, checking them against n.
fn directions(at: &[usize], n: usize) -> Result<Vec<usize>, CliError> {
    at.iter()
        .map(|&k| if (1..=n).contains(&k) { Ok(k - 1) } else { Err(bad(format!("direction {k} is not in 1..={n}"))) })
        .collect()
}

pub fn mutate(path: &Path, at: &[usize], out: Option<&Path>) -> Result<Report, CliError> {
    let loaded = load(path)?;
    let path_dirs = directions(at, loaded.seed.n())?;
    let mut s = loaded.seed.clone();
    let mut text = Vec::new();
    let mut steps = Vec::new();
    for &k in &path_dirs {
        s = s.mutate(k).map_err(|e| bad(e.to_string()))?;
        let v = s.vars()[k].format_with(&loaded.names);
        text.push(format!("{}' = {v}", loaded.names[k]));
        steps.push(json!({"at": k + 1, "variable": v}));
    }
    let b = matrix_string(s.matrix().rows());
    text.push(format!("B' = {b}"));
    let cluster = display_vars(s.vars(), &loaded.names);
    text.push(format!("cluster: ({})", cluster.join(", ")));
    if let Some(out) = out {
        let file = SeedFile::from_seed(&s, &loaded.names, loaded.mutable_names.clone(), loaded.frozen_names.clone());
        write_json(out, &file)?;
    }
    let json = json!({"steps": steps, "B": s.matrix().rows(), "cluster": cluster});
    Ok(Report { text, json, ok: true })
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| bad(format!("{}: {e}", path.display())))
}

pub fn explore(path: &Path, max_nodes: usize, dump: Option<&Path>) -> Result<Report, CliError> {
    let loaded = load(path)?;
    let g = enumerate_exchange_graph(&loaded.seed, max_nodes).map_err(|e| bad(e.to_string()))?;
    let complete = g.status == GraphStatus::Complete;
    let vars: Vec<String> = g.variables.iter().map(|v| v.format_with(&loaded.names)).collect();
    let mut text = vec![
        format!("seeds: {}{}", g.nodes.len(), if complete { "" } else { " (truncated)" }),
        format!("edges: {}", g.edges.len()),
        format!("cluster variables: {}", vars.len()),
    ];
    text.extend(vars.iter().map(|v| format!("  {v}")));
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir).map_err(|e| bad(format!("{}: {e}", dir.display())))?;
        for (i, s) in g.nodes.iter().enumerate() {
            let file =
                SeedFile::from_seed(s, &loaded.names, loaded.mutable_names.clone(), loaded.frozen_names.clone());
            write_json(&dir.join(format!("seed_{i:04}.json")), &file)?;
        }
        text.push(format!("wrote {} seed files to {}", g.nodes.len(), dir.display()));
    }
    let edges: Vec<[usize; 3]> = g.edges.iter().map(|&(u, k, v)| [u, k + 1, v]).collect();
    let json = json!({
        "seeds": g.nodes.len(),
        "complete": complete,
        "edges": edges,
        "cluster_variables": vars,
    });
    Ok(Report { text, json, ok: true })
}

pub fn rank2(b: u32, c: u32, list: bool, count: usize) -> Result<Report, CliError> {
    if b == 0 || c == 0 {
        return Err(bad("b and c must be positive"));
    }
    let p = Rank2Params::new(b, c);
    let census = finite_type_census(p, 30);
    let verdict = match census {
        Census::Finite(n) => format!("finite type: {n} cluster variables"),
        Census::InfiniteEvidence => "infinite type: denominator vectors keep growing".to_string(),
        Census::Inconclusive => "inconclusive".to_string(),
    };
    let mut text = vec![format!("B = [[0,{b}],[-{c},0]]"), verdict.clone()];
    let mut vars = Vec::new();
    if list {
        let shown = match census {
            Census::Finite(n) => n,
            _ => count,
        };
        for k in 1..=shown as i64 {
            let x = rank2_var(k, p);
            let (d1, d2) = denominator_of(&x);
            let shown = RationalFunction::from_laurent(&x).to_string();
            text.push(format!("x{k} = {shown}    d = ({d1},{d2})"));
            vars.push(json!({"k": k, "variable": shown, "denominator": [d1, d2]}));
        }
    }
    let json = json!({"b": b, "c": c, "census": verdict, "variables": vars});
    Ok(Report { text, json, ok: true })
}

pub fn ysystem(r: usize, s: usize) -> Result<Report, CliError> {
    if r == 0 || s == 0 {
        return Err(bad("r and s must be positive"));
    }
    let p = verify_period(r, s);
    let order = p.period_found.map_or("not found".to_string(), |n| n.to_string());
    let text = vec![
        format!("grid {r} x {s}"),
        format!("order of the composite mutation: {order}"),
        format!("r + s + 2 = {}", p.expected),
        format!("(r+s+2)-th power is the identity: {}", p.power_is_identity),
    ];
    let json = json!({"r": r, "s": s, "order": p.period_found, "expected": p.expected, "power_is_identity": p.power_is_identity});
    Ok(Report { text, json, ok: true })
}

pub fn pentagram(n: usize, invariants: bool, steps: usize, rng_seed: u64) -> Result<Report, CliError> {
    if invariants {
        if !(4..=6).contains(&n) {
            return Err(bad("--invariants needs 4 <= n <= 6"));
        }
        let sums = conserved_quantities(n);
        let mut text = vec![format!("{} classes of perfect matchings", sums.len())];
        let mut classes = Vec::new();
        for ((a, b), p) in &sums {
            text.push(format!("({a},{b}): {p}"));
            classes.push(json!({"class": [a, b], "sum": p.to_string()}));
        }
        return Ok(Report { text, json: json!({"n": n, "classes": classes}), ok: true });
    }
    if n < 5 {
        return Err(bad("a polygon needs n >= 5"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut poly = random_polygon(n, steps, &mut rng);
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for t in 0..=steps {
        if t > 0 {
            poly = pentagram_step(&poly).map_err(|e| bad(e.to_string()))?;
        }
        let y = y_params(&poly).map_err(|e| bad(e.to_string()))?;
        let product: Rat = y.iter().product();
        ok &= product == Rat::from_integer(1.into());
        let y: Vec<String> = y.iter().map(Rat::to_string).collect();
        text.push(format!("T^{t}: y = ({})  product = {product}", y.join(", ")));
        rows.push(json!({"step": t, "y": y, "product": product.to_string()}));
    }
    Ok(Report { text, json: json!({"n": n, "rng_seed": rng_seed, "steps": rows}), ok })
}

pub fn poisson(path: &Path) -> Result<Report, CliError> {
    let loaded = load(path)?;
    let b = loaded.seed.matrix();
    match solve_compatible(b).map_err(|e| bad(e.to_string()))? {
        CompatibleSolution::NoSolution => Ok(Report {
            text: vec!["no compatible Poisson structure: B does not have full rank".to_string()],
            json: json!({"found": false}),
            ok: true,
        }),
        CompatibleSolution::Found(fam) => {
            let d: Vec<String> = fam.d.iter().map(Rat::to_string).collect();
            let text = vec![
                format!("dimension: {} (expected {})", fam.dimension, fam.expected_dimension),
                format!("dimension at fixed D: {}", fam.fixed_d_dimension),
                format!("D = ({})", d.join(", ")),
                format!("Omega = {}", matrix_string(fam.base.matrix())),
            ];
            let json = json!({
                "found": true,
                "dimension": fam.dimension,
                "expected_dimension": fam.expected_dimension,
                "fixed_d_dimension": fam.fixed_d_dimension,
                "D": d,
                "omega": rat_rows(fam.base.matrix()),
            });
            Ok(Report { text, json, ok: fam.dimension == fam.expected_dimension })
        }
    }
}

pub fn quantum(path: &Path, at: &[usize]) -> Result<Report, CliError> {
    let loaded = load(path)?;
    if loaded.seed != Seed::initial(loaded.seed.matrix().clone()) {
        return Err(bad("quantum mutation starts from an initial seed (no vars in the file)"));
    }
    let b = loaded.seed.matrix().clone();
    let path_dirs = directions(at, b.n())?;
    let CompatibleSolution::Found(fam) = solve_compatible(&b).map_err(|e| bad(e.to_string()))? else {
        return Err(bad("no compatible quantum structure: B does not have full rank"));
    };
    let form = SkewForm::new(clear_denominators(fam.base.matrix())).map_err(|e| bad(e.to_string()))?;
    let lambda_rows = form.rows().to_vec();
    let q = QuantumSeed::initial(form, b.clone())
        .and_then(|q| q.mutate_path(&path_dirs))
        .map_err(|e| bad(e.to_string()))?;
    let classical = Seed::initial(b).mutate_path(&path_dirs).map_err(|e| bad(e.to_string()))?;
    let classical: Option<Vec<LaurentPolynomial>> = classical.vars().iter().map(RationalFunction::to_laurent).collect();
    let specializes = classical.as_ref() == Some(&q.specialize());
    let bar = q.vars().iter().all(|x| x.is_bar_invariant());
    let commutes = q.quasi_commutes();
    let mut text = vec![format!("Lambda = {}", matrix_string(&lambda_rows))];
    let vars: Vec<String> = q.vars().iter().map(ToString::to_string).collect();
    text.extend(vars.iter().enumerate().map(|(i, v)| format!("X{} = {v}", i + 1)));
    text.push(format!("bar-invariant: {bar}"));
    text.push(format!("quasi-commuting: {commutes}"));
    text.push(format!("v = 1 gives the classical cluster: {specializes}"));
    let json = json!({
        "lambda": lambda_rows,
        "variables": vars,
        "bar_invariant": bar,
        "quasi_commuting": commutes,
        "specializes": specializes,
    });
    Ok(Report { text, json, ok: bar && commutes && specializes })
}

pub fn markov(bound: u64) -> Result<Report, CliError> {
    let found = markov_enumerate(bound);
    let ok = found.iter().all(|t| t.satisfies_equation());
    let mut text = vec![format!("{} Markov triples with entries up to {bound}", found.len())];
    text.extend(found.iter().map(ToString::to_string));
    let triples: Vec<[String; 3]> =
        found.iter().map(|t| [t.a.to_string(), t.b.to_string(), t.c.to_string()]).collect();
    Ok(Report { text, json: json!({"bound": bound, "triples": triples}), ok })
}

pub fn gr2(n: usize) -> Result<Report, CliError> {
    if !(4..=8).contains(&n) {
        return Err(bad("n must be between 4 and 8"));
    }
    let closure = gr2_flip_closure(n).map_err(|e| bad(e.to_string()))?;
    let pl = plucker_verify(n).map_err(|e| bad(e.to_string()))?;
    let text = vec![
        format!("triangulations: {}", closure.triangulations.len()),
        format!("chords: {}", closure.chords.len()),
        format!("cluster variables: {}", closure.cluster_variables),
        format!("all cluster variables are Plucker coordinates: {}", closure.variables_are_pluckers),
        format!("flips disagreeing with mutation: {}", closure.mismatches.len()),
        format!("three-term Plucker relations: {}/{}", pl.instances - pl.failures.len(), pl.instances),
    ];
    let ok = closure.mismatches.is_empty() && closure.variables_are_pluckers && pl.passed();
    let json = json!({
        "n": n,
        "triangulations": closure.triangulations.len(),
        "chords": closure.chords.len(),
        "cluster_variables": closure.cluster_variables,
        "variables_are_pluckers": closure.variables_are_pluckers,
        "mismatches": closure.mismatches.len(),
        "plucker_instances": pl.instances,
        "plucker_failures": pl.failures,
    });
    Ok(Report { text, json, ok })
}

pub fn verify(only: &[usize], quick: bool, rng_seed: Option<u64>, jobs: usize) -> Result<Report, CliError> {
    let ids: Vec<usize> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    if let Some(id) = ids.iter().find(|id| !(1..=CRITERIA.len()).contains(id)) {
        return Err(bad(format!("no criterion {id}")));
    }
    let mut cfg = if quick { BatteryConfig::quick() } else { BatteryConfig::full() };
    // wall-clock limits would make the report depend on the machine
    cfg.enforce_time_limits = false;
    if let Some(s) = rng_seed {
        cfg.rng_seed = s;
    }
    let outcomes = run_parallel(&ids, &cfg, jobs);
    let mut text = Vec::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        text.push(format!("{verdict} {:>2} {}: {}", o.id, o.name, o.detail));
        rows.push(json!({"id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail}));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    text.push(format!("{passed}/{} passed", outcomes.len()));
    let json = json!({"rng_seed": cfg.rng_seed, "results": rows, "passed": passed, "total": outcomes.len()});
    Ok(Report { text, json, ok: passed == outcomes.len() })
}
