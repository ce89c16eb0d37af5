use mub_core::classify::{classify, render_table, ClassCount, Classes, ProvenanceKind};

fn failing(rep: &mub_core::classify::ClassificationReport) -> Vec<String> {
    rep.provenance
        .iter()
        .filter(|p| !p.holds)
        .map(|p| p.statement.clone())
        .collect()
}

#[test]
fn d5_counts_and_evidence() {
    let rep = classify(5).unwrap();
    assert_eq!(rep.counts, rep.expected, "{}", render_table(std::slice::from_ref(&rep)));
    assert!(rep.evidence_holds(), "{:?}", failing(&rep));
    assert_eq!(rep.counts[1], Some(ClassCount::Finite(2)));
    let splits = rep
        .provenance
        .iter()
        .filter(|p| p.kind == ProvenanceKind::Split && p.r == Some(3))
        .count();
    assert_eq!(splits, 2);
}

#[test]
fn d4_counts_and_evidence() {
    let rep = classify(4).unwrap();
    assert_eq!(rep.counts, rep.expected);
    assert!(rep.evidence_holds(), "{:?}", failing(&rep));
    match rep.classes(3).unwrap() {
        Classes::Parametric(p) => assert_eq!(p.parameters.len(), 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn table_renders_every_dimension() {
    let reps: Vec<_> = (2..=5).map(|d| classify(d).unwrap()).collect();
    let table = render_table(&reps);
    assert!(table.contains("∞^3"));
    assert_eq!(table.lines().count(), 6);
}
