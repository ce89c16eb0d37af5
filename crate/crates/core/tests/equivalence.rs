use mub_core::equivalence::{are_equivalent, d5_triple, inequivalence_d5_triples, Verdict};
use mub_core::matrices::{Basis, MuBasisSet, PhaseMatrix};
use mub_core::solvers::{h3, h5};
use mub_core::MuBasisSet64;

fn d5_set(ks: &[u32]) -> MuBasisSet64 {
    let mut bases = vec![Basis::identity(5), Basis::Phase(PhaseMatrix::fourier(5))];
    bases.extend(ks.iter().map(|&k| Basis::Phase(h5(k))));
    MuBasisSet::new(bases).unwrap()
}

fn assert_equivalent(a: &MuBasisSet64, b: &MuBasisSet64) {
    let cert = are_equivalent(a, b).unwrap();
    assert_eq!(cert.verdict, Verdict::Equivalent);
    let w = cert.witness.as_ref().unwrap();
    assert!(w.is_exact());
    assert!(w.maps(a, b).unwrap());
    assert!(cert.replay(a, b).unwrap());
    assert_eq!(are_equivalent(b, a).unwrap().verdict, Verdict::Equivalent);
}

#[test]
fn qutrit_triples_merge() {
    let t = |k| {
        MuBasisSet::new(vec![
            Basis::identity(3),
            Basis::Phase(PhaseMatrix::fourier(3)),
            Basis::Phase(h3(k)),
        ])
        .unwrap()
    };
    assert_equivalent(&t(1), &t(2));
}

#[test]
fn d5_triples_merge_under_d_shift() {
    assert_equivalent(&d5_set(&[1]), &d5_set(&[4]));
    assert_equivalent(&d5_set(&[2]), &d5_set(&[3]));
}

#[test]
fn d5_quadruple_chains() {
    for chain in [[[1, 2], [3, 4], [1, 4]], [[1, 3], [2, 4], [2, 3]]] {
        assert_equivalent(&d5_set(&chain[0]), &d5_set(&chain[1]));
        assert_equivalent(&d5_set(&chain[0]), &d5_set(&chain[2]));
    }
    assert_equivalent(&d5_set(&[1, 2]), &d5_set(&[1, 3]));
}

#[test]
fn d5_quintuples_merge() {
    for ks in [[1, 2, 4], [1, 3, 4], [2, 3, 4]] {
        assert_equivalent(&d5_set(&[1, 2, 3]), &d5_set(&ks));
    }
}

#[test]
fn d5_triples_are_inequivalent_both_ways() {
    for (a, b) in [(1, 2), (2, 1), (1, 3), (4, 2)] {
        let cert = are_equivalent(&d5_set(&[a]), &d5_set(&[b])).unwrap();
        assert_eq!(cert.verdict, Verdict::Inequivalent, "{a} vs {b}");
        let r = cert.refutation.unwrap();
        assert_eq!(r.branches.len(), 6);
        assert_eq!(r.permutations_tried(), 6 * 120);
    }
}

#[test]
fn restricted_argument_is_complete() {
    let cert = inequivalence_d5_triples().unwrap();
    assert_eq!(cert.verdict, Verdict::Inequivalent);
    let r = cert.refutation.as_ref().unwrap();
    assert_eq!(r.steps.len(), 6);
    for s in &r.steps {
        assert!(s.holds, "{}: {}", s.name, s.detail);
    }
    assert!(cert.replay(&d5_triple(1), &d5_triple(2)).unwrap());
}
