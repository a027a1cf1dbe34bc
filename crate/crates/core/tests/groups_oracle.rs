//! Word-problem cross-checks against independent oracles at moderate word
//! lengths. The full length-8 exhaustive runs live in the acceptance suite.

mod common;

use common::gen::all_reduced_words;
use common::oracles;
use scottbench::groups::GroupSpec;
use std::collections::HashMap;

/// Check that two word -> value maps induce the same partition on words.
fn partitions_agree<A, B>(words: &[scottbench::words::Word], f: A, g: B)
where
    A: Fn(&scottbench::words::Word) -> String,
    B: Fn(&scottbench::words::Word) -> String,
{
    let mut fwd: HashMap<String, String> = HashMap::new();
    let mut bwd: HashMap<String, String> = HashMap::new();
    for w in words {
        let a = f(w);
        let b = g(w);
        if let Some(prev) = fwd.insert(a.clone(), b.clone()) {
            assert_eq!(prev, b, "implementation merges words the oracle separates: {w}");
        }
        if let Some(prev) = bwd.insert(b, a.clone()) {
            assert_eq!(prev, a, "oracle merges words the implementation separates: {w}");
        }
    }
}

#[test]
fn heisenberg_matches_matrix_representation() {
    let spec = GroupSpec::free_nilpotent(2, 2).unwrap();
    let gens = spec.designated_generators().unwrap();
    let words = all_reduced_words(2, 6);
    let x = oracles::Unitri3::gen_x();
    let y = oracles::Unitri3::gen_y();
    partitions_agree(
        &words,
        |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
        |w| format!("{:?}", oracles::unitri_eval(&w.0, &x, &y)),
    );
}

#[test]
fn heisenberg_spec_examples() {
    let spec = GroupSpec::free_nilpotent(2, 2).unwrap();
    let gens = spec.designated_generators().unwrap();
    // x y x^-1 y^-1 is the basic commutator with exponent 1
    let w = scottbench::words::Word(vec![(0, 1), (1, 1), (0, -1), (1, -1)]);
    let v = spec.evaluate_word(&w, &gens).unwrap();
    assert_eq!(format!("{v:?}"), "FreeNilpotent { coords: [(2, 1)] }");
    // [[x,y],x] is the identity: the commutator is central
    let c = v;
    let x = &gens[0];
    let lhs = {
        let ci = spec.invert(&c).unwrap();
        let xi = spec.invert(x).unwrap();
        let t = spec.multiply(&ci, &xi).unwrap();
        let t = spec.multiply(&t, &c).unwrap();
        spec.multiply(&t, x).unwrap()
    };
    assert_eq!(lhs, spec.identity());
}

#[test]
fn bs_matches_rewriting_oracle() {
    for n in [2u64, 3] {
        let spec = GroupSpec::bs1n(n).unwrap();
        let gens = spec.designated_generators().unwrap();
        let words = all_reduced_words(2, 6);
        partitions_agree(
            &words,
            |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
            |w| format!("{:?}", oracles::bs_rewrite(n as i128, &w.0)),
        );
    }
}

#[test]
fn lamplighter_matches_rewriting_and_finite_wreath() {
    for d in [2i64, 3] {
        let spec = GroupSpec::lamplighter(d as u64).unwrap();
        let gens = spec.designated_generators().unwrap();
        let words = all_reduced_words(2, 6);
        partitions_agree(
            &words,
            |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
            |w| format!("{:?}", oracles::wreath_rewrite(Some(d), &w.0)),
        );
        partitions_agree(
            &words,
            |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
            |w| format!("{:?}", oracles::finite_wreath_eval(Some(d), 15, &w.0)),
        );
    }
}

#[test]
fn zwrz_matches_rewriting_oracle() {
    let spec = GroupSpec::ZWrZ;
    let gens = spec.designated_generators().unwrap();
    let words = all_reduced_words(2, 6);
    partitions_agree(
        &words,
        |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
        |w| format!("{:?}", oracles::wreath_rewrite(None, &w.0)),
    );
}

#[test]
fn class3_matches_bch_oracle() {
    let lie = oracles::LieCtx::new(2);
    assert!(lie.jacobi_holds(), "oracle structure constants violate Jacobi");
    let spec = GroupSpec::free_nilpotent(3, 2).unwrap();
    let gens = spec.designated_generators().unwrap();
    let words = all_reduced_words(2, 5);
    partitions_agree(
        &words,
        |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
        |w| format!("{:?}", lie.eval_word(&w.0)),
    );
}

#[test]
fn class3_rank3_matches_bch_oracle() {
    let lie = oracles::LieCtx::new(3);
    assert!(lie.jacobi_holds());
    let spec = GroupSpec::free_nilpotent(3, 3).unwrap();
    let gens = spec.designated_generators().unwrap();
    let words = all_reduced_words(3, 4);
    partitions_agree(
        &words,
        |w| format!("{:?}", spec.evaluate_word(w, &gens).unwrap()),
        |w| format!("{:?}", lie.eval_word(&w.0)),
    );
}

#[test]
fn relators_iff_identity_evaluation() {
    // for every family: evaluate_word(w, designated) = identity iff R(w)
    let specs = [
        GroupSpec::fg_abelian(1, vec![2]).unwrap(),
        GroupSpec::free_nilpotent(2, 2).unwrap(),
        GroupSpec::lamplighter(2).unwrap(),
        GroupSpec::bs1n(2).unwrap(),
    ];
    for spec in &specs {
        let gens = spec.designated_generators().unwrap();
        for w in all_reduced_words(gens.len(), 5) {
            let v = spec.evaluate_word(&w, &gens).unwrap();
            assert_eq!(
                v == spec.identity(),
                spec.in_relators(&w).unwrap(),
                "{spec}: {w}"
            );
        }
    }
}

#[test]
fn group_axioms_on_fragments() {
    // associativity, identity, inverses on a size-50 fragment per family
    let specs = [
        GroupSpec::fg_abelian(2, vec![]).unwrap(),
        GroupSpec::free_nilpotent(2, 2).unwrap(),
        GroupSpec::free_nilpotent(3, 2).unwrap(),
        GroupSpec::lamplighter(2).unwrap(),
        GroupSpec::ZWrZ,
        GroupSpec::zd_wr_z2(2).unwrap(),
        GroupSpec::bs1n(2).unwrap(),
        GroupSpec::bswr(2).unwrap(),
    ];
    for spec in &specs {
        let frag = spec.enumerate(50).unwrap();
        assert_eq!(frag.len(), 50, "{spec}");
        let id = spec.identity();
        for g in &frag {
            assert_eq!(&spec.multiply(g, &id).unwrap(), g);
            let gi = spec.invert(g).unwrap();
            assert_eq!(spec.multiply(&gi, g).unwrap(), id);
        }
        // associativity on a subsample of triples
        for (i, a) in frag.iter().step_by(7).enumerate() {
            for b in frag.iter().skip(i % 3).step_by(11) {
                for c in frag.iter().step_by(13) {
                    let ab_c = spec
                        .multiply(&spec.multiply(a, b).unwrap(), c)
                        .unwrap();
                    let a_bc = spec
                        .multiply(a, &spec.multiply(b, c).unwrap())
                        .unwrap();
                    assert_eq!(ab_c, a_bc, "{spec}");
                }
            }
        }
    }
}
