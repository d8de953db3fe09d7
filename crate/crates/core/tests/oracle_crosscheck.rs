//! The library against the brute-force oracle on the lex fixtures.

mod oracle;

use std::sync::Arc;

use oracle::RawLogic;
use revlab::audit::{check_postulates, AuditOptions, Postulate};
use revlab::change::{make_builtin_ex, make_full_meet};
use revlab::extract::extract_relation;
use revlab::kernel::{lex_core, lex_paper, propositional, Logic};
use revlab::loops::{find_critical_loops, is_disjunctive};

fn fixtures() -> Vec<(Logic, RawLogic)> {
    vec![
        (lex_paper(), RawLogic::lex(true)),
        (lex_core(), RawLogic::lex(false)),
    ]
}

#[test]
fn closures_agree() {
    for (l, raw) in fixtures() {
        let ours: Vec<Vec<usize>> = l
            .expressible_closure()
            .into_iter()
            .map(|m| m.iter().collect())
            .collect();
        let mut ours = ours;
        ours.sort();
        let theirs: Vec<Vec<usize>> = raw
            .expressible()
            .into_keys()
            .map(|s| s.into_iter().collect())
            .collect();
        assert_eq!(ours, theirs, "{}", l.name());
    }
}

#[test]
fn ex_postulate_verdicts_agree() {
    for (l, raw) in fixtures() {
        let l = Arc::new(l);
        let report = check_postulates(
            &make_builtin_ex(l.clone()).unwrap(),
            &Postulate::ALL,
            &AuditOptions::default(),
        );
        let expected = oracle::postulates(&raw, oracle::ex);
        for (name, ok) in expected {
            assert_eq!(
                report.check(name).unwrap().verdict.is_pass(),
                ok,
                "{name} on {}",
                l.name()
            );
        }
    }
}

#[test]
fn full_meet_postulate_verdicts_agree() {
    for (l, raw) in fixtures() {
        let report = check_postulates(
            &make_full_meet(Arc::new(l)),
            &Postulate::ALL,
            &AuditOptions::default(),
        );
        assert!(oracle::postulates(&raw, oracle::full_meet)
            .values()
            .all(|ok| *ok));
        assert!(report.passed());
    }
}

#[test]
fn extraction_agrees_over_all_raw_bases() {
    for (l, raw) in fixtures() {
        let l = Arc::new(l);
        for op_name in ["ex", "full-meet"] {
            for k in [vec!["ψ0"], vec!["φ1"], vec![], vec!["ψ0", "ψ1"]] {
                let kb = l.base(&k).unwrap();
                let rel = match op_name {
                    "ex" => extract_relation(&make_builtin_ex(l.clone()).unwrap(), &kb),
                    _ => extract_relation(&make_full_meet(l.clone()), &kb),
                };
                let expected = match op_name {
                    "ex" => oracle::extract(&raw, oracle::ex, raw.base(&k)),
                    _ => oracle::extract(&raw, oracle::full_meet, raw.base(&k)),
                };
                assert_eq!(rel.matrix(), expected, "{op_name} K={k:?} on {}", l.name());
            }
        }
    }
}

#[test]
fn loop_counts_agree() {
    for (l, raw) in fixtures() {
        assert_eq!(
            find_critical_loops(&l, usize::MAX).total,
            oracle::count_loops(&raw),
            "{}",
            l.name()
        );
    }
    let p2 = propositional(2).unwrap();
    assert_eq!(find_critical_loops(&p2, 10).total, 0);
}

#[test]
fn disjunctivity_agrees() {
    for (l, raw) in fixtures() {
        assert_eq!(is_disjunctive(&l).holds(), oracle::disjunctive(&raw));
    }
    assert!(oracle::disjunctive(&RawLogic::propositional(1)));
    assert!(is_disjunctive(&propositional(1).unwrap()).holds());
}
