use std::collections::{BTreeMap, HashMap};

use gaussci::gaussoid::{canonical_form, close, permutations, relabel, CiStructure};
use gaussci::graph::{Dag, Edge, NodeSet};
use gaussci::implication::{
    iterative_decompose, CiStatement, Decomposition, GraphAlgebra, IterativeOutcome,
};
use gaussci::numeric::{build_sigma, partial_correlation, partial_correlation_via_inverse};
use gaussci::param::{phi_sigma, principal_minor_images, trek_rule_sigma, Saturator};
use gaussci::poly::{Integer, Monomial, MvPoly, PolyMatrix, Var, VarKind};
use gaussci::sweep::elementary_triples;
use nalgebra::DMatrix;
use proptest::prelude::*;

const POOL: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pool_var(k: usize) -> Var {
    match POOL[k] {
        (0, v) => Var::omega(v),
        (a, b) => Var::lambda(a, b),
    }
}

fn poly() -> impl Strategy<Value = MvPoly> {
    let term = (-6i64..=6, proptest::collection::vec((0..6usize, 0..3u32), 0..4));
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        MvPoly::from_terms(terms.into_iter().map(|(c, fs)| {
            (Monomial::from_factors(fs.into_iter().map(|(k, e)| (pool_var(k), e))), Integer::from(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = MvPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// Dense exponent-vector representation, multiplied term by term.
type Naive = HashMap<[u32; 6], i128>;

fn naive(p: &MvPoly) -> Naive {
    let mut out = Naive::new();
    for (m, c) in p.terms() {
        let mut key = [0u32; 6];
        for &(v, e) in m.factors() {
            key[(0..6).find(|&k| pool_var(k) == v).unwrap()] = e;
        }
        *out.entry(key).or_default() += c.to_big().try_into().unwrap_or(0i128);
    }
    out.retain(|_, c| *c != 0);
    out
}

fn naive_mul(a: &Naive, b: &Naive) -> Naive {
    let mut out = Naive::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let key: [u32; 6] = std::array::from_fn(|i| ka[i] + kb[i]);
            *out.entry(key).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn naive_add(a: &Naive, b: &Naive) -> Naive {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_default() += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn eval_at(p: &MvPoly, point: &[i64; 6]) -> Integer {
    p.eval_integer(&|v| Integer::from(point[(0..6).find(|&k| pool_var(k) == v).unwrap()]))
}

fn dag(max_n: usize) -> impl Strategy<Value = Dag> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<bool>(), pairs),
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(bits, order)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[k] {
                            edges.push((order[a], order[b]));
                        }
                        k += 1;
                    }
                }
                Dag::new(n, edges).unwrap()
            })
    })
}

/// A graph with weights in [-1.5, 1.5] and variances in [0.3, 2].
fn weighted_dag(max_n: usize) -> impl Strategy<Value = (Dag, BTreeMap<Edge, f64>, Vec<f64>)> {
    dag(max_n).prop_flat_map(|g| {
        let m = g.edges().len();
        let n = g.n();
        (
            Just(g),
            proptest::collection::vec(-1.5f64..1.5, m),
            proptest::collection::vec(0.3f64..2.0, n),
        )
            .prop_map(|(g, w, omega)| {
                let lambda = g.edges().iter().copied().zip(w).collect();
                (g, lambda, omega)
            })
    })
}

fn all_statements(n: usize) -> Vec<CiStatement> {
    elementary_triples(n)
        .into_iter()
        .map(|(i, j, k)| CiStatement::elementary(i, j, k).unwrap())
        .collect()
}

fn structure4() -> impl Strategy<Value = CiStructure> {
    proptest::collection::vec(any::<bool>(), 24).prop_map(|bits| {
        let chosen: Vec<CiStatement> = all_statements(4)
            .into_iter()
            .zip(bits)
            .filter_map(|(s, keep)| keep.then_some(s))
            .take(4)
            .collect();
        CiStructure::from_statements(4, &chosen).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(naive(&(&a * &b)), naive_mul(&naive(&a), &naive(&b)));
        prop_assert_eq!(naive(&(&a + &b)), naive_add(&naive(&a), &naive(&b)));
    }

    #[test]
    fn exact_division_inverts_multiplication(f in poly(), g in nonzero_poly()) {
        prop_assert_eq!((&f * &g).exact_divide(&g).unwrap(), f);
    }

    #[test]
    fn equality_matches_evaluation(
        a in poly(),
        b in poly(),
        c in poly(),
        points in proptest::collection::vec(proptest::array::uniform6(-9i64..=9), 20),
    ) {
        let left = &(&a + &b) * &(&a - &c);
        let right = &(&(&a * &a) - &(&a * &c)) + &(&(&b * &a) - &(&b * &c));
        prop_assert_eq!(&left, &right);
        let agree = |x: &MvPoly, y: &MvPoly| points.iter().all(|p| eval_at(x, p) == eval_at(y, p));
        prop_assert!(agree(&left, &right));
        // Distinct polynomials of this size are separated by one of 20 points.
        prop_assert_eq!(a == b, agree(&a, &b));
    }

    #[test]
    fn determinant_sign_and_duplicates(entries in proptest::collection::vec(poly(), 9)) {
        let rows: Vec<Vec<MvPoly>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let m = PolyMatrix::from_rows(rows.clone()).unwrap();
        let mut swapped = m.clone();
        swapped.swap_rows(0, 2);
        prop_assert_eq!(swapped.determinant(), -m.determinant());
        prop_assert_eq!(m.determinant_bareiss(), m.determinant_cofactor());
        let dup = PolyMatrix::from_rows(vec![rows[0].clone(), rows[1].clone(), rows[0].clone()]).unwrap();
        prop_assert!(dup.determinant().is_zero());
    }

    #[test]
    fn d_separation_is_symmetric_and_path_free(g in dag(6), i in 1usize..=6, j in 1usize..=6, bits in 0u64..64) {
        let n = g.n();
        prop_assume!(i <= n && j <= n && i != j);
        let k = NodeSet::from_bits(bits).intersection(NodeSet::full(n)).without(i).without(j);
        let sep = g.d_separated_pair(i, j, k).unwrap();
        prop_assert_eq!(sep, g.d_separated_pair(j, i, k).unwrap());
        prop_assert_eq!(sep, g.d_connecting_paths(i, j, k).unwrap().is_empty());
    }

    #[test]
    fn treks_reverse(g in dag(6), i in 1usize..=6, j in 1usize..=6) {
        prop_assume!(i <= g.n() && j <= g.n());
        let mut forward: Vec<String> = g.enumerate_treks(i, j).iter().map(|t| t.reversed().to_string()).collect();
        let mut back: Vec<String> = g.enumerate_treks(j, i).iter().map(|t| t.to_string()).collect();
        forward.sort();
        back.sort();
        prop_assert_eq!(forward, back);
    }

    #[test]
    fn graph_text_round_trips(g in dag(8)) {
        prop_assert_eq!(g.to_text().parse::<Dag>().unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covariance_matches_trek_rule(g in dag(9)) {
        let cov = phi_sigma(&g);
        for i in 1..=g.n() {
            for j in i..=g.n() {
                prop_assert_eq!(&trek_rule_sigma(&g, i, j).unwrap(), cov.sigma(i, j));
            }
        }
    }

    #[test]
    fn saturation_is_idempotent_and_order_free(g in dag(5), seed in any::<u64>()) {
        let images = principal_minor_images(&g).unwrap();
        let mut shuffled = images.clone();
        // A cheap deterministic shuffle driven by the seed.
        let len = shuffled.len();
        for k in (1..len).rev() {
            shuffled.swap(k, (seed.rotate_left(k as u32) as usize) % (k + 1));
        }
        let forward = Saturator::from_images(&images);
        let permuted = Saturator::from_images(&shuffled);
        let cov = phi_sigma(&g);
        for (i, j, k) in elementary_triples(g.n()) {
            let m = cov.almost_principal_minor(i, j, k).unwrap();
            if m.is_zero() {
                continue;
            }
            let s = forward.saturate(&m).unwrap();
            prop_assert_eq!(&s, &permuted.saturate(&m).unwrap());
            prop_assert_eq!(&forward.saturate(&s).unwrap(), &s);
        }
    }

    #[test]
    fn numeric_covariance_matches_symbolic((g, lambda, omega) in weighted_dag(6)) {
        let sem = build_sigma(&g, lambda, omega).unwrap();
        let cov = phi_sigma(&g);
        let value = |v: Var| match v.kind() {
            VarKind::Omega(k) => sem.omega()[k - 1],
            VarKind::Lambda(a, b) => sem.lambda().get(&(a, b)).copied().unwrap_or(0.0),
        };
        for i in 1..=g.n() {
            for j in 1..=g.n() {
                let symbolic = cov.sigma(i, j).eval_f64(&value);
                let numeric = sem.sigma()[(i - 1, j - 1)];
                prop_assert!((symbolic - numeric).abs() <= 1e-9 * (1.0 + numeric.abs()), "{symbolic} vs {numeric}");
            }
        }
    }

    #[test]
    fn covariance_matches_path_series((g, lambda, omega) in weighted_dag(6)) {
        let n = g.n();
        let mut l = DMatrix::<f64>::zeros(n, n);
        for (&(a, b), &x) in &lambda {
            l[(a - 1, b - 1)] = x;
        }
        // (I - L)^{-1} = I + L + L^2 + ..., finite because L is nilpotent.
        let mut s = DMatrix::<f64>::identity(n, n);
        let mut power = DMatrix::<f64>::identity(n, n);
        for _ in 1..n {
            power = &power * &l;
            s += &power;
        }
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(omega.clone()));
        let expected = s.transpose() * d * &s;
        let sem = build_sigma(&g, lambda, omega).unwrap();
        let diff = (sem.sigma() - &expected).abs().max();
        prop_assert!(diff <= 1e-12 * (1.0 + expected.abs().max()), "diff {diff}");
    }

    #[test]
    fn partial_correlation_two_ways((g, lambda, omega) in weighted_dag(6), bits in 0u64..64) {
        let sem = build_sigma(&g, lambda, omega).unwrap();
        let n = g.n();
        let k = NodeSet::from_bits(bits).intersection(NodeSet::full(n)).without(1).without(2);
        let a = partial_correlation(sem.sigma(), 1, 2, k).unwrap();
        let b = partial_correlation_via_inverse(sem.sigma(), 1, 2, k).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn monomial_decomposition_deletes_each_edge(g in dag(5)) {
        let alg = GraphAlgebra::new(&g);
        for (i, j, k) in elementary_triples(g.n()) {
            let m = alg.minor(i, j, k).unwrap();
            if m.is_zero() || !m.is_monomial() {
                continue;
            }
            let Decomposition::UnionOfGraphicalModels(parts) = alg.decompose(i, j, k).unwrap() else {
                return Err(TestCaseError::fail("monomial minor gave a non-graphical decomposition"));
            };
            let lambdas = m.terms()[0].0.vars().filter(|v| v.is_lambda()).count();
            prop_assert_eq!(parts.len(), lambdas);
            for h in &parts {
                prop_assert!(h.is_subgraph_of(&g));
                prop_assert_eq!(h.edges().len() + 1, g.edges().len());
            }
        }
    }

    #[test]
    fn iteration_ignores_statement_order(g in dag(4), a in 0usize..24, b in 0usize..24) {
        let n = g.n();
        let all = all_statements(n);
        prop_assume!(!all.is_empty());
        let (s, t) = (all[a % all.len()], all[b % all.len()]);
        let forward = iterative_decompose(&g, &[s, t]).unwrap();
        let backward = iterative_decompose(&g, &[t, s]).unwrap();
        if let (IterativeOutcome::UnionOfGraphicalModels(_), IterativeOutcome::UnionOfGraphicalModels(_)) =
            (&forward, &backward)
        {
            prop_assert_eq!(forward, backward);
        }
    }

    #[test]
    fn closure_is_monotone_and_idempotent(small in structure4(), extra in structure4()) {
        let large = small.union(&extra).unwrap();
        let rs = close(&small).unwrap();
        let rl = close(&large).unwrap();
        prop_assert!(small.is_subset(&rs.common));
        for big in &rl.branches {
            prop_assert!(rs.branches.iter().any(|b| b.is_subset(big)));
        }
        prop_assert!(rs.common.is_subset(&rl.common));
        let again = close(&rs.common).unwrap();
        prop_assert_eq!(again.common, rs.common);
        for b in &rs.branches {
            let r = close(b).unwrap();
            prop_assert!(r.is_single_branch());
            prop_assert_eq!(&r.common, b);
        }
    }

    #[test]
    fn canonical_form_respects_closure(s in structure4(), p in 0usize..24) {
        let perm = &permutations(4)[p];
        let common = close(&s).unwrap().common;
        prop_assert_eq!(close(&relabel(&s, perm).unwrap()).unwrap().common, relabel(&common, perm).unwrap());
        let via_canonical = close(&canonical_form(&s)).unwrap().common;
        prop_assert_eq!(canonical_form(&common), canonical_form(&via_canonical));
    }
}
