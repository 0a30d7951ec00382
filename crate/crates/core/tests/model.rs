mod common;

use common::*;
use cpref::model::{classify, dependency_graph, preorder_to_cp, CpNet, Formula, Instantiation};
use cpref::semantics::{closure_oracle, BitMatrix, ExplicitPreorder, DEFAULT_CAP};
use cpref::textio::parse_theory;
use proptest::prelude::*;

#[test]
fn holiday_theory_profile() {
    let t = theory("example2.cpt");
    // the C chain is written as one line and expands into two statements
    assert_eq!(t.len(), 6);
    let p = classify(&t);
    assert_eq!(p.max_swap_width, 2);
    assert!(p.conjunctive);
    assert!(!p.free_empty);
    assert!(!p.cpnet);
    // W -> C, W -> P, P -> C: acyclic, but a triangle once undirected
    let g = dependency_graph(&t);
    assert_eq!(
        g.edges().iter().copied().collect::<Vec<_>>(),
        vec![(0, 1), (0, 2), (2, 1)]
    );
    assert!(p.acyclic);
    assert!(!p.polytree);
}

#[test]
fn conditional_pair_cpnet_shape() {
    let t = theory("example3.cpt");
    assert!(!classify(&t).cpnet);
    let t = parse_theory(
        "attr A : a, na\nattr B : b, nb\n\
         stmt true : A=a >= A=na\nstmt A=a : B=b >= B=nb\nstmt A=na : B=nb >= B=b\n",
    )
    .unwrap();
    let p = classify(&t);
    assert!(p.cpnet && p.acyclic && p.polytree);
    let net = CpNet::from_theory(&t).unwrap();
    assert_eq!(net.to_statements(), t);
}

/// `x_i ≥ x̄_i`; `x_1 … x_n : y ≥ ȳ`; `x̄_i : ȳ ≥ y`.
fn many_parents(n: usize) -> cpref::model::CpTheory {
    let mut text = String::new();
    for i in 1..=n {
        text.push_str(&format!("attr X{i} : x{i}, nx{i}\n"));
    }
    text.push_str("attr Y : y, ny\n");
    for i in 1..=n {
        text.push_str(&format!("stmt true : X{i}=x{i} >= X{i}=nx{i}\n"));
    }
    let all: Vec<String> = (1..=n).map(|i| format!("X{i}=x{i}")).collect();
    text.push_str(&format!("stmt {} : Y=y >= Y=ny\n", all.join(" and ")));
    for i in 1..=n {
        text.push_str(&format!("stmt X{i}=nx{i} : Y=ny >= Y=y\n"));
    }
    parse_theory(&text).unwrap()
}

#[test]
fn expansion_to_a_net_is_exponential_in_parents() {
    for n in 3..=6 {
        let t = many_parents(n);
        assert_eq!(t.len(), 2 * n + 1);
        let net = CpNet::from_theory(&t).unwrap();
        let y = net.tables().last().unwrap();
        assert_eq!(y.parents.len(), n);
        assert_eq!(y.rules.len(), 1 << n);
        // only the all-positive context prefers y
        let prefers_y = y.rules.iter().filter(|(_, order)| order[0] == 0).count();
        assert_eq!(prefers_y, 1);
    }
}

#[test]
fn net_expansion_preserves_the_order() {
    let t = many_parents(3);
    let net = CpNet::from_theory(&t).unwrap();
    let a = closure_oracle(&t, DEFAULT_CAP).unwrap();
    let b = closure_oracle(&net.to_statements(), DEFAULT_CAP).unwrap();
    assert_eq!(a, b);
}

#[test]
fn inconsistent_table_is_not_a_net() {
    let t =
        parse_theory("attr A : a, na\nstmt true : A=a >= A=na\nstmt true : A=na >= A=a\n").unwrap();
    assert!(CpNet::from_theory(&t).is_err());
}

#[test]
fn linear_order_round_trip() {
    let t = theory("example3.cpt");
    let oracle = closure_oracle(&t, DEFAULT_CAP).unwrap();
    assert!(oracle.is_linear_order());
    let back = preorder_to_cp(&oracle).unwrap();
    assert!(classify(&back).conjunctive);
    assert_eq!(closure_oracle(&back, DEFAULT_CAP).unwrap(), oracle);
}

#[test]
fn instantiation_formula() {
    let i = Instantiation::new([(2, 1), (0, 0)]).unwrap();
    assert_eq!(
        Formula::from_instantiation(&i),
        Formula::and(Formula::atom(0, 0), Formula::atom(2, 1))
    );
    assert_eq!(
        Formula::from_instantiation(&Instantiation::empty()),
        Formula::True
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preorders_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = schema(&mut r, 3, 3);
        let n = s.universe_size().unwrap() as usize;
        prop_assume!(n <= 12);
        let m = preorder_matrix(&mut r, n);
        let mut bits = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if m[i][j] {
                    bits.set(i, j);
                }
            }
        }
        let p = ExplicitPreorder::new(s, bits).unwrap();
        let t = preorder_to_cp(&p).unwrap();
        prop_assert_eq!(reference_relation(&t), m);
    }

    #[test]
    fn statement_parts_are_disjoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = schema(&mut r, 5, 3);
        let st = statement(&mut r, &s);
        let (u, v, w) = (st.condition_vars(), st.free(), st.swapped());
        prop_assert!(u.is_disjoint(v) && u.is_disjoint(w) && v.is_disjoint(w));
        prop_assert!(w.iter().all(|a| st.better().get(a) != st.worse().get(a)));
    }
}
