//! Small hand-checked values for nets, cubes, complexes and pipelines.

use std::sync::Arc;

use num_bigint::BigInt;
use petri_homology::cubical::{build_q, Cube, SemicubicalSet};
use petri_homology::homology::{
    boundary_matrices, cubical_homology, directed_boundary_matrices, directed_cubical_homology, homology,
    is_point_like, mv_check, ChainComplex, Endpoint, HomologyGroup,
};
use petri_homology::matrix::IntegerMatrix;
use petri_homology::net::{explore, ElementaryNet, EventDef, Marking, Mode, StateSpace};
use petri_homology::pipelines::{make_pipeline, verify_theorems, PipelineSpec, Variant};
use petri_homology::snf::smith_normal_form_with_transforms;

fn net(n: usize, v: Variant) -> Arc<ElementaryNet> {
    Arc::new(make_pipeline(PipelineSpec::new(n, v)).unwrap())
}

fn space(n: usize, v: Variant, mode: Mode) -> StateSpace {
    explore(net(n, v), mode, 1 << 16).unwrap()
}

fn m(s: &str) -> Marking {
    s.parse().unwrap()
}

fn strings(v: Vec<Marking>) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[test]
fn pipeline_independence() {
    let p4 = net(4, Variant::P);
    assert!(p4.independent_named("t1", "t3").unwrap());
    assert!(!p4.independent_named("t1", "t2").unwrap());
    for e in ["t1", "t2", "t3", "t4"] {
        assert!(!p4.independent_named(e, e).unwrap());
    }
}

#[test]
fn pipeline_firing() {
    let p3 = net(3, Variant::P);
    assert_eq!(p3.fire_named(&m("10"), &["t1"]).unwrap(), None);
    assert_eq!(p3.fire_named(&m("00"), &["t1"]).unwrap(), Some(m("10")));
    assert_eq!(
        p3.fire_named(&m("00"), &["t1", "t2", "t3"]).unwrap(),
        Some(m("00"))
    );
    assert_eq!(p3.fire_named(&m("00"), &["t2"]).unwrap(), None);
    assert_eq!(p3.fire_named::<&str>(&m("01"), &[]).unwrap(), Some(m("01")));
    for n in 3..=6 {
        let p = net(n, Variant::P);
        for tail in 0..1u64 << (n - 3) {
            let rest = Marking::from_index(n - 3, tail).to_string();
            let from = m(&format!("10{rest}"));
            assert_eq!(
                p.fire_named(&from, &["t2"]).unwrap(),
                Some(m(&format!("01{rest}")))
            );
        }
    }
}

#[test]
fn state_spaces() {
    let s = space(3, Variant::P, Mode::Reachable);
    assert_eq!(strings(s.states().to_vec()), ["00", "01", "10", "11"]);
    assert_eq!(space(3, Variant::P, Mode::AllStates).len(), 4);
    let idle = Arc::new(ElementaryNet::new(vec!["a".into(), "b".into()], vec![], &["b"]).unwrap());
    let s = explore(idle.clone(), Mode::Reachable, 16).unwrap();
    assert_eq!(strings(s.states().to_vec()), ["01"]);
    let all = explore(idle, Mode::AllStates, 16).unwrap();
    assert_eq!(all.deadlocks().len(), 4);
    assert_eq!(all.senders().len(), 4);
}

#[test]
fn deadlocks_and_senders() {
    for n in 2..=6 {
        for mode in [Mode::Reachable, Mode::AllStates] {
            let s = space(n, Variant::P, mode);
            assert!(s.deadlocks().is_empty() && s.senders().is_empty());
        }
    }
    let n3 = space(3, Variant::N, Mode::AllStates);
    assert_eq!(strings(n3.deadlocks()), ["00"]);
    assert_eq!(strings(n3.senders()), ["11"]);
}

#[test]
fn binary_state_index() {
    for n in 2..=8 {
        assert_eq!(m(&"1".repeat(n - 1)).state_index(), (1 << (n - 1)) - 1);
        assert_eq!(m(&"0".repeat(n - 1)).state_index(), 0);
    }
    assert_eq!(m("101").state_index(), 5);
}

#[test]
fn q_of_p3() {
    let q = build_q(&space(3, Variant::P, Mode::AllStates)).unwrap();
    assert_eq!(q.counts(), [4, 5, 1]);
    let p3 = q.net().clone();
    let (t1, t3) = (p3.event_id("t1").unwrap(), p3.event_id("t3").unwrap());
    let square = Cube::new(m("01"), vec![t1, t3]);
    assert_eq!(q.grade(2), std::slice::from_ref(&square));
    assert_eq!(q.face(2, 1, 1, &square).unwrap(), Cube::new(m("11"), vec![t3]));
    assert_eq!(q.face(2, 2, 0, &square).unwrap(), Cube::new(m("01"), vec![t1]));
    let edge = Cube::new(m("00"), vec![t1]);
    assert_eq!(q.face(1, 1, 0, &edge).unwrap(), Cube::vertex(m("00")));
    assert_eq!(q.face(1, 1, 1, &edge).unwrap(), Cube::vertex(m("10")));
    assert!(q.validate().is_empty());
}

#[test]
fn q_basics() {
    let s = space(5, Variant::P, Mode::Reachable);
    let q = build_q(&s).unwrap();
    let vertices: Vec<Marking> = q.grade(0).iter().map(|c| c.base().clone()).collect();
    assert_eq!(vertices, s.states());
    // No two events of P_3 without t3 are independent.
    let chain = Arc::new(net(3, Variant::P).without_events(&["t3"]).unwrap());
    let q = build_q(&explore(chain, Mode::AllStates, 16).unwrap()).unwrap();
    assert_eq!(q.grade_count(), 2);
    let empty = SemicubicalSet::empty(net(3, Variant::P));
    assert!(empty.validate().is_empty());
    assert!(homology(&boundary_matrices(&empty))
        .unwrap()
        .iter()
        .all(HomologyGroup::is_zero));
    assert_eq!(boundary_matrices(&empty).ranks(), [0]);
    for n in 2..=6 {
        assert!(build_q(&space(n, Variant::P, Mode::Reachable))
            .unwrap()
            .validate()
            .is_empty());
    }
}

#[test]
fn restrictions_and_lattice() {
    for n in 3..=6 {
        let q = build_q(&space(n, Variant::P, Mode::Reachable)).unwrap();
        let all: Vec<_> = q.net().event_ids().collect();
        assert_eq!(q.restrict_to_events(&all).unwrap(), q);
        assert_eq!(q.intersection(&q).unwrap(), q);
        let x1 = q.without_events(&["t1"]).unwrap();
        let x2 = q.without_events(&["t2"]).unwrap();
        assert_eq!(
            x1.named_cubes(),
            build_q(&space(n, Variant::N, Mode::AllStates))
                .unwrap()
                .named_cubes()
        );
        assert_eq!(
            x2.named_cubes(),
            build_q(&space(n, Variant::NPrime, Mode::AllStates))
                .unwrap()
                .named_cubes()
        );
        assert_eq!(x1.union(&x2).unwrap(), q);
        let meet = x1.intersection(&x2).unwrap();
        let nm1 = build_q(&space(n - 1, Variant::N, Mode::AllStates)).unwrap();
        assert_eq!(meet.component_counts(), vec![nm1.counts(); 2]);
    }
}

#[test]
fn differentials_of_p3() {
    let q = build_q(&space(3, Variant::P, Mode::AllStates)).unwrap();
    let c = boundary_matrices(&q);
    assert_eq!(c.ranks(), [4, 5, 1]);
    let d1 = c.differential(1).unwrap();
    assert_eq!(smith_normal_form_with_transforms(d1).rank(), 3);
    assert_eq!(
        smith_normal_form_with_transforms(c.differential(2).unwrap()).rank(),
        1
    );
    assert_eq!(
        homology(&c).unwrap(),
        [
            HomologyGroup::free(1),
            HomologyGroup::free(1),
            HomologyGroup::zero()
        ]
    );
    for k in 0..q.len(1) {
        let col: Vec<BigInt> = (0..4).map(|r| d1.get(r, k)).collect();
        assert_eq!(col.iter().sum::<BigInt>(), BigInt::from(0));
    }
    let d0 = directed_boundary_matrices(&q, Endpoint::Initial);
    assert_eq!(homology(&d0).unwrap()[0], HomologyGroup::zero());
}

#[test]
fn snf_of_the_theta_matrix() {
    let m = IntegerMatrix::from_rows(2, 2, &[vec![1, 1], vec![1, 1]]);
    let r = smith_normal_form_with_transforms(&m);
    assert_eq!(r.diagonal, [BigInt::from(1), BigInt::from(0)]);
    let id = IntegerMatrix::identity(3);
    assert_eq!(
        smith_normal_form_with_transforms(&id).diagonal,
        vec![BigInt::from(1); 3]
    );
}

#[test]
fn homology_of_small_complexes() {
    // Z --2--> Z has H_0 = Z/2.
    let c = ChainComplex::new(vec![1, 1], vec![IntegerMatrix::from_rows(1, 1, &[vec![2]])]).unwrap();
    let h = homology(&c).unwrap();
    assert_eq!(h[0].betti, 0);
    assert_eq!(h[0].torsion, [BigInt::from(2)]);
    assert_eq!(h[0].to_string(), "Z/2");
    let zero = ChainComplex::new(vec![2, 3], vec![IntegerMatrix::zeros(2, 3)]).unwrap();
    assert_eq!(
        homology(&zero).unwrap(),
        [HomologyGroup::free(2), HomologyGroup::free(3)]
    );
}

#[test]
fn pipeline_homology() {
    for n in 2..=8 {
        let q = build_q(&space(n, Variant::P, Mode::Reachable)).unwrap();
        let h = cubical_homology(&q).unwrap();
        assert_eq!(h[..2], [HomologyGroup::free(1), HomologyGroup::free(1)]);
        assert!(h[2..].iter().all(HomologyGroup::is_zero));
        for e in Endpoint::BOTH {
            assert!(directed_cubical_homology(&q, e)
                .unwrap()
                .iter()
                .all(HomologyGroup::is_zero));
        }
        for v in [Variant::N, Variant::NPrime] {
            let q = build_q(&space(n, v, Mode::AllStates)).unwrap();
            assert!(is_point_like(&cubical_homology(&q).unwrap()));
            for e in Endpoint::BOTH {
                assert!(is_point_like(&directed_cubical_homology(&q, e).unwrap()));
            }
        }
    }
}

#[test]
fn mayer_vietoris_cases() {
    let q = build_q(&space(4, Variant::P, Mode::Reachable)).unwrap();
    let x1 = q.without_events(&["t1"]).unwrap();
    let x2 = q.without_events(&["t2"]).unwrap();
    let r = mv_check(&x1, &x2).unwrap();
    assert!(r.exact() && r.euler_additive());
    assert_eq!(r.h0_theta, [[1, 1], [1, 1]]);
    let same = mv_check(&q, &q).unwrap();
    assert!(same.exact());
    assert_eq!(same.h0_theta, [[1], [1]]);
    // A decomposition whose pieces are not connected.
    let a = q.without_events(&["t1", "t3"]).unwrap();
    let b = q.without_events(&["t2", "t4"]).unwrap();
    let r = mv_check(&a, &b).unwrap();
    assert!(r.exact() && r.euler_additive());
}

#[test]
fn pipeline_shapes() {
    let p4 = net(4, Variant::P);
    assert_eq!((p4.place_count(), p4.event_count()), (3, 4));
    let pre: Vec<_> = p4.events().iter().map(|e| e.pre.clone()).collect();
    assert_eq!(pre, [vec![], vec!["p1"], vec!["p2"], vec!["p3"]]);
    let n4 = net(4, Variant::N);
    let names: Vec<_> = n4.events().iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["t2", "t3", "t4"]);
    let p2 = space(2, Variant::P, Mode::Reachable);
    assert_eq!(
        (p2.net().place_count(), p2.net().event_count(), p2.len()),
        (1, 2, 2)
    );
    let h = cubical_homology(&build_q(&p2).unwrap()).unwrap();
    assert_eq!(h, [HomologyGroup::free(1), HomologyGroup::free(1)]);
}

#[test]
fn verify_passes_for_small_n() {
    let r = verify_theorems(5, 1 << 12).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    let counts = build_q(&space(2, Variant::N, Mode::AllStates)).unwrap().counts();
    let q3 = build_q(&space(3, Variant::P, Mode::Reachable)).unwrap();
    let meet = q3
        .without_events(&["t1"])
        .unwrap()
        .intersection(&q3.without_events(&["t2"]).unwrap())
        .unwrap();
    assert_eq!(meet.component_counts(), vec![counts; 2]);
}

#[test]
fn event_definitions_may_share_places() {
    let places = vec!["a".to_string(), "b".to_string()];
    let events = vec![
        EventDef::new("x", vec!["a"], vec!["b"]),
        EventDef::new("y", vec!["b"], vec!["a"]),
    ];
    let net = Arc::new(ElementaryNet::new(places, events, &["a"]).unwrap());
    let s = explore(net, Mode::Reachable, 8).unwrap();
    assert_eq!(strings(s.states().to_vec()), ["01", "10"]);
    let h = cubical_homology(&build_q(&s).unwrap()).unwrap();
    assert_eq!(h, [HomologyGroup::free(1), HomologyGroup::free(1)]);
}
