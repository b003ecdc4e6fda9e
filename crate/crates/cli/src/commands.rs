use std::fmt::{Display, Write as _};
use std::fs;
use std::path::Path;

use gaussci::exec::Execution;
use gaussci::gaussoid::{close, glob, verify_conjecture_n4, verify_conjecture_on, ConjectureReport, GaussoidError};
use gaussci::graph::{Dag, Edge, GraphError, NodeSet};
use gaussci::implication::{
    iterative_decompose, AugmentedModel, CiStatement, Decomposition, GraphAlgebra, ImplicationError,
    IterativeOutcome,
};
use gaussci::numeric::{
    approx_implies, search_counterexample, upgrade_verdict, ApproxQuery, NumericError, NumericSem, SearchOutcome,
};
use gaussci::param::{ParamError, SymbolicCovariance};
use gaussci::sweep::{
    approx_sweep, dags_between, equivalence_sweep, mi_gap_sweep, soundness_sweep, trek_rule_sweep, SoundnessConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{CliError, Command, Common, SweepKind, Triple};

/// What a command prints: `text` normally, `json` under `--json`.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

trait Guarded: Display {
    fn is_size_limit(&self) -> bool;
}

macro_rules! guarded {
    ($($t:ty),*) => {
        $(impl Guarded for $t {
            fn is_size_limit(&self) -> bool {
                <$t>::is_size_limit(self)
            }
        })*
    };
}

guarded!(GraphError, ParamError, ImplicationError, GaussoidError, NumericError);

fn fail<E: Guarded>(e: E) -> CliError {
    if e.is_size_limit() {
        CliError::Guard(e.to_string())
    } else {
        CliError::Usage(e.to_string())
    }
}

fn load_graph(common: &Common) -> Result<Dag, CliError> {
    let path = common
        .graph
        .as_ref()
        .ok_or_else(|| CliError::Usage("--graph <FILE> is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    text.parse::<Dag>().map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        if e.is_size_limit() {
            CliError::Guard(msg)
        } else {
            CliError::Usage(msg)
        }
    })
}

fn statement(g: &Dag, s: &str) -> Result<CiStatement, CliError> {
    let st: CiStatement = s.parse().map_err(|e| CliError::Usage(format!("statement `{s}`: {e}")))?;
    st.check_against(g).map_err(|e| CliError::Usage(format!("statement `{s}`: {e}")))?;
    Ok(st)
}

fn elementary(g: &Dag, s: &str) -> Result<(CiStatement, (usize, usize, NodeSet)), CliError> {
    let st = statement(g, s)?;
    let triple = st.as_elementary().map_err(|e| CliError::Usage(format!("statement `{s}`: {e}")))?;
    Ok((st, triple))
}

fn node_set(s: &str) -> Result<NodeSet, CliError> {
    s.parse().map_err(|e: GraphError| CliError::Usage(e.to_string()))
}

fn union_line(count: usize) -> String {
    format!("union of {count} graphical model{}\n", if count == 1 { "" } else { "s" })
}

fn edge_text((a, b): Edge) -> String {
    format!("{a}->{b}")
}

fn edges_text(g: &Dag) -> String {
    if g.edges().is_empty() {
        return "(no edges)".into();
    }
    g.edges().iter().map(|&e| edge_text(e)).collect::<Vec<_>>().join(" ")
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Dsep { common, statement: s } => dsep(common, s),
        Command::Phi { common, i, j } => phi(common, *i, *j),
        Command::Minor { common, statement: s } => minor(common, s),
        Command::Implies { common, extra, query, budget } => implies(common, extra, query, *budget),
        Command::Decompose { common, statement: s, saturated, emit_graphs } => {
            decompose(common, s, *saturated, emit_graphs.as_deref())
        }
        Command::Iterate { common, statements } => iterate(common, statements),
        Command::GaussoidClose { common, statements } => gaussoid_close(common, statements),
        Command::VerifyN4 { common } => verify_n4(common),
        Command::ApproxImplies { common, triple } => approx(common, triple),
        Command::Witness { common, triple, budget } => witness(common, triple, *budget),
        Command::Sweep { common, kind, max_n, draws, budget } => sweep(common, *kind, *max_n, *draws, *budget),
    }
}

fn dsep(common: &Common, s: &str) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let st = statement(&g, s)?;
    let sep = g.d_separated(st.a(), st.b(), st.c()).map_err(fail)?;
    Ok(Report {
        text: if sep { "d-separated\n" } else { "NOT d-separated\n" }.into(),
        json: json!({"command": "dsep", "statement": st.to_string(), "d_separated": sep}),
    })
}

fn phi(common: &Common, i: usize, j: usize) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let sigma = SymbolicCovariance::new(&g).minor(&[i], &[j]).map_err(fail)?;
    Ok(Report {
        text: format!("{sigma}\n"),
        json: json!({"command": "phi", "i": i, "j": j, "sigma": sigma.to_string()}),
    })
}

fn minor(common: &Common, s: &str) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let (st, (i, j, k)) = elementary(&g, s)?;
    let alg = GraphAlgebra::new(&g);
    let raw = alg.minor(i, j, k).map_err(fail)?;
    let saturated = if raw.is_zero() { raw.clone() } else { alg.saturated_minor(i, j, k).map_err(fail)? };
    let rows: Vec<usize> = std::iter::once(i).chain(k.iter()).collect();
    let cols: Vec<usize> = std::iter::once(j).chain(k.iter()).collect();
    Ok(Report {
        text: format!(
            "minor: {raw}\nsaturated: {saturated}\nmonomial: {}\n",
            if raw.is_monomial() { "yes" } else { "no" }
        ),
        json: json!({
            "command": "minor",
            "statement": st.to_string(),
            "rows": rows,
            "cols": cols,
            "minor": raw.to_string(),
            "saturated": saturated.to_string(),
            "monomial": raw.is_monomial(),
        }),
    })
}

fn sem_text(sem: &NumericSem) -> String {
    let mut out = String::new();
    for (&e, x) in sem.lambda() {
        let _ = writeln!(out, "  lambda {} = {x}", edge_text(e));
    }
    for (v, w) in sem.omega().iter().enumerate() {
        let _ = writeln!(out, "  omega {} = {w}", v + 1);
    }
    out
}

fn implies(common: &Common, extra: &str, query: &str, budget: usize) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let (extra_st, triple) = elementary(&g, extra)?;
    let query_st = statement(&g, query)?;
    let model = AugmentedModel::single(g.clone(), extra_st).map_err(fail)?;
    let alg = GraphAlgebra::new(model.dag());
    let verdict = alg.implies_exact(triple, &query_st).map_err(fail)?;
    let (verdict, sem) = upgrade_verdict(&alg, triple, &query_st, verdict, budget, common.seed).map_err(fail)?;
    let mut text = format!("{verdict}\n");
    if let Some(sem) = &sem {
        text.push_str("refuting model:\n");
        text.push_str(&sem_text(sem));
    }
    Ok(Report {
        text,
        json: json!({
            "command": "implies",
            "extra": extra_st.to_string(),
            "query": query_st.to_string(),
            "verdict": to_json(&verdict),
            "refuting_model": sem.as_ref().map(to_json),
        }),
    })
}

fn deleted_edge(g: &Dag, h: &Dag) -> Option<Edge> {
    g.edges().iter().copied().find(|&(a, b)| !h.has_edge(a, b))
}

fn decompose(common: &Common, s: &str, saturated: bool, emit: Option<&Path>) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let (st, (i, j, k)) = elementary(&g, s)?;
    let model = AugmentedModel::single(g.clone(), st).map_err(fail)?;
    let alg = GraphAlgebra::new(model.dag());
    let d = if saturated { alg.decompose_saturated(i, j, k) } else { alg.decompose(i, j, k) }.map_err(fail)?;
    let mut text = String::new();
    let mut json = json!({"command": "decompose", "statement": st.to_string(), "saturated": saturated});
    match &d {
        Decomposition::UnionOfGraphicalModels(parts) => {
            text.push_str(&union_line(parts.len()));
            let mut files = Vec::new();
            if let Some(dir) = emit {
                fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
            }
            let mut components = Vec::new();
            for (idx, h) in parts.iter().enumerate() {
                let deleted = deleted_edge(&g, h);
                let label = deleted.map(edge_text).unwrap_or_else(|| "nothing".into());
                let _ = writeln!(text, "  without {label}: {}", edges_text(h));
                if let Some(dir) = emit {
                    let path = dir.join(format!("component_{}.dag", idx + 1));
                    fs::write(&path, h.to_text()).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    let _ = writeln!(text, "  wrote {}", path.display());
                    files.push(path.display().to_string());
                }
                components.push(json!({"deleted": deleted, "graph": to_json(h)}));
            }
            json["graphical"] = json!(true);
            json["components"] = json!(components);
            if emit.is_some() {
                json["files"] = json!(files);
            }
        }
        Decomposition::NonGraphical { graphical_edges, residual } => {
            let edges: Vec<String> = graphical_edges.iter().map(|&e| edge_text(e)).collect();
            let _ = writeln!(text, "not graphical");
            let _ = writeln!(text, "  edge factors: {}", if edges.is_empty() { "none".into() } else { edges.join(" ") });
            let _ = writeln!(text, "  residual: {residual}");
            json["graphical"] = json!(false);
            json["graphical_edges"] = json!(graphical_edges);
            json["residual"] = json!(residual.to_string());
        }
    }
    Ok(Report { text, json })
}

fn iterate(common: &Common, statements: &[String]) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let sts: Vec<CiStatement> = statements.iter().map(|s| Ok(elementary(&g, s)?.0)).collect::<Result<_, CliError>>()?;
    let outcome = iterative_decompose(&g, &sts).map_err(fail)?;
    let listed = |dags: &[Dag], text: &mut String| {
        for h in dags {
            let _ = writeln!(text, "  {}", edges_text(h));
        }
        dags.iter().map(to_json).collect::<Vec<_>>()
    };
    let mut text = String::new();
    let json = match &outcome {
        IterativeOutcome::UnionOfGraphicalModels(dags) => {
            text.push_str(&union_line(dags.len()));
            json!({"command": "iterate", "graphical": true, "graphs": listed(dags, &mut text)})
        }
        IterativeOutcome::Stuck { at, partial } => {
            let _ = writeln!(text, "not graphical at `{}`; candidates before it:", sts[*at]);
            json!({
                "command": "iterate",
                "graphical": false,
                "stuck_at": sts[*at].to_string(),
                "graphs": listed(partial, &mut text),
            })
        }
    };
    Ok(Report { text, json })
}

fn gaussoid_close(common: &Common, statements: &[String]) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let mut input = glob(&g).map_err(fail)?;
    for s in statements {
        input.insert(&statement(&g, s)?).map_err(fail)?;
    }
    let r = close(&input).map_err(fail)?;
    let mut text = format!("input: {input}\ncommon: {}\n", r.common);
    for (idx, b) in r.branches.iter().enumerate() {
        let _ = writeln!(text, "branch {}: {b}", idx + 1);
    }
    Ok(Report {
        text,
        json: json!({
            "command": "gaussoid-close",
            "input": to_json(&input),
            "common": to_json(&r.common),
            "branches": to_json(&r.branches),
        }),
    })
}

fn verify_n4(common: &Common) -> Result<Report, CliError> {
    let single = common.graph.is_some();
    let report: ConjectureReport = if single {
        let g = load_graph(common)?;
        verify_conjecture_on(&[g], Execution::default()).map_err(fail)?
    } else {
        verify_conjecture_n4().map_err(fail)?
    };
    let s = &report.summary;
    let mut text = format!(
        "graphs: {}\ncases: {}\nviolations: {}\naxiom-only consequences: {}\nexceptional matches: {}\nmulti-branch cases: {}\n",
        s.dags, s.cases, s.violations, s.gaussoid_not_algebraic, s.exceptional_matches, s.multi_branch_cases
    );
    let mut json = json!({"command": "verify-n4", "summary": to_json(s)});
    if single {
        for r in &report.records {
            let _ = writeln!(
                text,
                "{}: algebraic {} axioms {}{}",
                r.extra,
                r.implied_algebraic,
                r.implied_gaussoid,
                if r.violation { " VIOLATION" } else { "" }
            );
        }
        json["records"] = json!(report
            .records
            .iter()
            .map(|r| json!({
                "extra": r.extra,
                "implied_algebraic": to_json(&r.implied_algebraic),
                "implied_gaussoid": to_json(&r.implied_gaussoid),
                "violation": r.violation,
            }))
            .collect::<Vec<_>>());
    }
    Ok(Report { text, json })
}

fn query(g: &Dag, t: &Triple) -> Result<ApproxQuery, CliError> {
    let q = ApproxQuery::new(t.i, t.j, t.l, node_set(&t.given)?, t.delta);
    q.validate(g).map_err(fail)?;
    Ok(q)
}

fn query_json(command: &str, q: &ApproxQuery) -> Value {
    json!({"command": command, "i": q.i, "j": q.j, "l": q.l, "given": to_json(&q.k), "delta": q.delta})
}

fn approx(common: &Common, t: &Triple) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let q = query(&g, t)?;
    let implied = approx_implies(&g, &q).map_err(fail)?;
    let mut json = query_json("approx-implies", &q);
    json["implied"] = json!(implied);
    Ok(Report { text: if implied { "implied\n" } else { "not implied\n" }.into(), json })
}

fn witness(common: &Common, t: &Triple, budget: usize) -> Result<Report, CliError> {
    let g = load_graph(common)?;
    let q = query(&g, t)?;
    let outcome = search_counterexample(&g, &q, budget, common.seed).map_err(fail)?;
    let mut json = query_json("witness", &q);
    let text = match &outcome {
        SearchOutcome::Witness(w) => {
            json["found"] = json!(true);
            json["witness"] = to_json(w);
            format!("witness found\n  rho_ij = {}\n  rho_il = {}\n{}", w.rho_ij, w.rho_il, sem_text(&w.sem))
        }
        SearchOutcome::NotFound { restarts } => {
            json["found"] = json!(false);
            json["restarts"] = json!(restarts);
            format!("no witness after {restarts} restarts\n")
        }
    };
    Ok(Report { text, json })
}

fn sweep(common: &Common, kind: SweepKind, max_n: usize, draws: usize, budget: usize) -> Result<Report, CliError> {
    let exec = Execution::default();
    let dags = match &common.graph {
        Some(_) if kind == SweepKind::MiGap => {
            return Err(CliError::Usage("the mi-gap sweep draws its own graphs; drop --graph".into()))
        }
        Some(_) => vec![load_graph(common)?],
        None if kind == SweepKind::MiGap => Vec::new(),
        None => dags_between(1, max_n).map_err(fail)?,
    };
    let (name, report, clean) = match kind {
        SweepKind::Equivalence => {
            let r = equivalence_sweep(&dags, exec).map_err(fail)?;
            ("equivalence", to_json(&r), r.is_clean())
        }
        SweepKind::TrekRule => {
            let r = trek_rule_sweep(&dags, exec).map_err(fail)?;
            ("trek-rule", to_json(&r), r.mismatches == 0)
        }
        SweepKind::Soundness => {
            let cfg = SoundnessConfig { sems_per_case: draws, seed: common.seed, ..Default::default() };
            let r = soundness_sweep(&dags, cfg, exec).map_err(fail)?;
            ("soundness", to_json(&r), r.dsep_failures == 0 && r.implied_failures == 0)
        }
        SweepKind::Approx => {
            let r = approx_sweep(&dags, 0.05, draws, budget, common.seed, exec).map_err(fail)?;
            let clean = r.not_found.is_empty() && r.max_excess <= 1e-9;
            ("approx", to_json(&r), clean)
        }
        SweepKind::MiGap => {
            if max_n > 9 {
                return Err(CliError::Guard(format!("mi-gap sweep is limited to 9 nodes, got {max_n}")));
            }
            let r = mi_gap_sweep(50, draws, max_n.max(3), common.seed, exec).map_err(fail)?;
            ("mi-gap", to_json(&r), r.negative == 0)
        }
    };
    let mut text = format!("sweep: {name}\n");
    if let Value::Object(fields) = &report {
        for (key, value) in fields {
            let _ = writeln!(text, "{key}: {value}");
        }
    }
    let _ = writeln!(text, "clean: {clean}");
    Ok(Report { text, json: json!({"command": "sweep", "kind": name, "clean": clean, "report": report}) })
}
