use std::collections::HashSet;

use serde::Serialize;

use super::{canonical_form, close, CiStructure, GaussoidError, Universe};
use crate::exec::Execution;
use crate::graph::{all_dags, Dag};
use crate::implication::{CiStatement, GraphAlgebra, Verdict};

/// Every elementary statement that holds by d-separation in `g`.
pub fn glob(g: &Dag) -> Result<CiStructure, GaussoidError> {
    CiStructure::global_markov(g)
}

/// The five four-node structures that are closed under the axioms without
/// being closed for positive definite matrices, in the listed order.
pub fn exceptional_structures_n4() -> Vec<CiStructure> {
    const LISTS: [&[&str]; 5] = [
        &["1 _||_ 2 | 3", "1 _||_ 3 | 4", "1 _||_ 4 | 2"],
        &["1 _||_ 2", "1 _||_ 2 | {3,4}", "3 _||_ 4 | 1", "3 _||_ 4 | 2"],
        &["1 _||_ 2", "1 _||_ 3 | {2,4}", "2 _||_ 4 | {1,3}", "3 _||_ 4"],
        &["1 _||_ 2 | 3", "1 _||_ 3 | 4", "2 _||_ 4 | 1", "3 _||_ 4 | 2"],
        &["1 _||_ 2", "1 _||_ 3 | {2,4}", "2 _||_ 4 | 3", "3 _||_ 4 | 1"],
    ];
    LISTS
        .iter()
        .map(|list| {
            let parsed: Vec<CiStatement> = list.iter().map(|s| s.parse().expect("valid literal")).collect();
            CiStructure::from_statements(4, &parsed).expect("four-node literal")
        })
        .collect()
}

/// One (graph, added statement) pair. The two statement lists hold what
/// each method adds beyond `glob(G)` and the added statement itself.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub dag: Dag,
    pub extra: String,
    pub implied_algebraic: CiStructure,
    pub implied_gaussoid: CiStructure,
    /// Some algebraically implied statement is not derivable by the axioms.
    pub violation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConjectureSummary {
    pub dags: usize,
    pub cases: usize,
    pub violations: usize,
    /// Axiom consequences that the algebraic test did not confirm.
    pub gaussoid_not_algebraic: usize,
    /// Cases whose structure or one of its closure branches is a relabeling
    /// of an exceptional structure.
    pub exceptional_matches: usize,
    pub multi_branch_cases: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub summary: ConjectureSummary,
    pub records: Vec<CaseRecord>,
}

/// Runs the comparison over all labeled DAGs on four nodes.
pub fn verify_conjecture_n4() -> Result<ConjectureReport, GaussoidError> {
    verify_conjecture_on(&all_dags(4)?, Execution::default())
}

/// For every graph and every elementary statement not already separated,
/// compares the algebraically implied statements with the axiom closure of
/// `glob(G)` plus that statement.
pub fn verify_conjecture_on(dags: &[Dag], exec: Execution) -> Result<ConjectureReport, GaussoidError> {
    let exceptional = exceptional_forms()?;
    let per_dag = exec.map(dags, |g| cases_for(g, &exceptional));
    let mut summary = ConjectureSummary { dags: dags.len(), ..Default::default() };
    let mut records = Vec::new();
    for result in per_dag {
        let (cases, tally) = result?;
        summary.cases += cases.len();
        summary.violations += tally.violations;
        summary.gaussoid_not_algebraic += tally.gaussoid_not_algebraic;
        summary.exceptional_matches += tally.exceptional_matches;
        summary.multi_branch_cases += tally.multi_branch_cases;
        records.extend(cases);
    }
    Ok(ConjectureReport { summary, records })
}

fn exceptional_forms() -> Result<HashSet<CiStructure>, GaussoidError> {
    let mut forms = HashSet::new();
    for c in exceptional_structures_n4() {
        forms.insert(canonical_form(&c));
        for b in close(&c)?.branches {
            forms.insert(canonical_form(&b));
        }
    }
    Ok(forms)
}

fn cases_for(g: &Dag, exceptional: &HashSet<CiStructure>) -> Result<(Vec<CaseRecord>, ConjectureSummary), GaussoidError> {
    let n = g.n();
    let u = Universe::get(n)?;
    let base = glob(g)?;
    let algebra = GraphAlgebra::new(g);
    let all: Vec<CiStatement> = CiStructure::from_bits(n, full_bits(u.len())).statements();
    let mut records = Vec::new();
    let mut tally = ConjectureSummary::default();
    for extra in all.iter().filter(|s| !base.contains(s)) {
        let start = base.with(extra)?;
        let mut algebraic = CiStructure::empty(n)?;
        let key = extra.as_elementary()?;
        for q in all.iter().filter(|q| !start.contains(q)) {
            if algebra.implies_exact(key, q)? == Verdict::Implied {
                algebraic.insert(q)?;
            }
        }
        let closure = close(&start)?;
        let gaussoid = closure.common.difference(&start)?;
        let violation = !algebraic.is_subset(&gaussoid);
        tally.violations += violation as usize;
        tally.gaussoid_not_algebraic += gaussoid.difference(&algebraic)?.len();
        tally.multi_branch_cases += !closure.is_single_branch() as usize;
        let hits = std::iter::once(&start)
            .chain(&closure.branches)
            .any(|s| s.n() == 4 && exceptional.contains(&canonical_form(s)));
        tally.exceptional_matches += hits as usize;
        records.push(CaseRecord {
            dag: g.clone(),
            extra: extra.to_string(),
            implied_algebraic: algebraic,
            implied_gaussoid: gaussoid,
            violation,
        });
    }
    Ok((records, tally))
}

fn full_bits(len: usize) -> super::Bits {
    (0..len).fold(super::Bits::default(), |b, k| b.with(k))
}
