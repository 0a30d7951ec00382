mod common;

use common::*;
use cpref::lptree::is_complete;
use cpref::textio::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn fixtures_parse() {
    for name in [
        "example2.cpt",
        "example3.cpt",
        "example5.cpt",
        "example9.cpt",
        "example9_plus.cpt",
    ] {
        let t = theory(name);
        let text = serialize_theory(&t);
        assert_eq!(parse_theory(&text).unwrap(), t, "{name}");
    }
}

#[test]
fn holiday_text_is_canonical() {
    let t = theory("example2.cpt");
    assert_eq!(
        serialize_theory(&t),
        "attr W : w, nw
attr C : c1, c2, c3
attr P : p, np

stmt true | {C, P} : W=nw >= W=w
stmt true : C=c3 >= C=c1
stmt true : C=c1 >= C=c2
stmt W=nw : P=p >= P=np
stmt W=nw : C=c1,P=p >= C=c3,P=np
stmt W=w | {C} : P=np >= P=p
"
    );
}

#[test]
fn diagnostics_carry_positions() {
    let e = parse_theory("attr A : a, na\nattr B : b\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 6));
    let e = parse_theory("attr A : a, na\nstmt true A=a >= A=na\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 11));
    assert_eq!(e.to_string(), "2:11: expected `:`, found `A`");
    let e = parse_theory("attr A : a, na\nstmt true : A=a >= A=na $\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 25));
    let e = parse_theory("attr not : a, na\n").unwrap_err();
    assert!(e.message.contains("reserved"));
    let e = parse_lptree(
        "attr A : a, na\nnode {A}\n  rule true : A=a > A=na\n  edge A=a {\n    node {A}\n",
    )
    .unwrap_err();
    assert_eq!(e.line, 5);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let t = parse_theory(
        "# header\n\nattr A : a, na # binary\n\n# none yet\nstmt true : A=a >= A=na\n",
    )
    .unwrap();
    assert_eq!(t.len(), 1);
}

#[test]
fn dimacs_stops_at_percent() {
    let cnf = parse_dimacs("c trailing section\np cnf 2 1\n1 -2 0\n%\n0\n").unwrap();
    assert_eq!(cnf.clauses, vec![vec![1, -2]]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn theories_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = schema(&mut r, 5, 4);
        let t = random_theory(&mut r, &s, 8);
        let text = serialize_theory(&t);
        let back = parse_theory(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_theory(&back), text);
    }

    #[test]
    fn trees_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = schema(&mut r, 4, 3);
        let shape = TreeShape { k: r.gen_range(1..=2), complete: r.gen_bool(0.5), ties: true };
        let t = lptree(&mut r, &s, shape);
        let text = serialize_lptree(&t);
        let back = parse_lptree(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_lptree(&back), text);
        prop_assert_eq!(is_complete(&back), is_complete(&t));
    }

    #[test]
    fn alternatives_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = schema(&mut r, 5, 4);
        let o = cpref::model::Alternative((0..s.len()).map(|a| r.gen_range(0..s.domain_size(a))).collect());
        prop_assert_eq!(parse_alternative(&s, &s.render_alternative(&o)).unwrap(), o);
    }

    #[test]
    fn dimacs_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = cnf(&mut r, 6, 8);
        prop_assert_eq!(parse_dimacs(&serialize_dimacs(&c)).unwrap(), c);
    }
}
