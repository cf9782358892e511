mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use petri_homology::cubical::build_q;
use petri_homology::homology::{cubical_homology, directed_cubical_homology, Endpoint};
use petri_homology::matrix::IntegerMatrix;
use petri_homology::net::{explore, ElementaryNet, EventId, Marking, Mode};
use petri_homology::netfile::{emit_net, parse_net};
use petri_homology::snf::{smith_normal_form, smith_normal_form_with_transforms};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn net_from(seed: u64, max_places: usize) -> Arc<ElementaryNet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let places = 2 + (seed as usize % (max_places - 1));
    let events = 2 + (seed as usize / 7 % 5);
    Arc::new(common::random_net(&mut rng, places, events))
}

fn matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(move |rows| IntegerMatrix::from_rows(r, c, &rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marking_encodings_round_trip(width in 1usize..=64, raw in any::<u64>()) {
        let index = if width == 64 { raw } else { raw & ((1 << width) - 1) };
        let m = Marking::from_index(width, index);
        prop_assert_eq!(m.state_index(), index);
        prop_assert_eq!(m.to_string().parse::<Marking>().unwrap(), m.clone());
        prop_assert_eq!(m.count(), index.count_ones() as usize);
        let other = Marking::from_index(width, index / 2);
        prop_assert_eq!(m.cmp(&other), index.cmp(&(index / 2)));
    }

    #[test]
    fn wide_markings_round_trip(bits in prop::collection::vec(any::<bool>(), 65..200)) {
        let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let m: Marking = text.parse().unwrap();
        prop_assert_eq!(m.width(), bits.len());
        prop_assert_eq!(m.to_string(), text);
        let occupied: Vec<usize> = (0..bits.len()).filter(|&i| bits[i]).collect();
        prop_assert_eq!(m.occupied().collect::<Vec<_>>(), occupied);
    }

    #[test]
    fn independence_is_symmetric_irreflexive_and_commutes(seed in any::<u64>()) {
        let net = net_from(seed, 8);
        let ev = common::event_sets(&net);
        let ids: Vec<EventId> = net.event_ids().collect();
        for &a in &ids {
            prop_assert!(!net.independent(a, a).unwrap());
            for &b in &ids {
                let ind = net.independent(a, b).unwrap();
                prop_assert_eq!(ind, net.independent(b, a).unwrap());
                prop_assert_eq!(ind, a != b && common::independent(&ev[a.index()], &ev[b.index()]));
                if ind {
                    for bits in 0..1u64 << net.place_count() {
                        let s = Marking::from_index(net.place_count(), bits);
                        prop_assert_eq!(net.fire_trace(&s, &[a, b]).unwrap(), net.fire_trace(&s, &[b, a]).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn firing_matches_set_semantics(seed in any::<u64>()) {
        let net = net_from(seed, 8);
        let ev = common::event_sets(&net);
        for bits in 0..1u64 << net.place_count() {
            let s = Marking::from_index(net.place_count(), bits);
            for a in net.event_ids() {
                let (pre, post) = &ev[a.index()];
                let want = common::fire(pre, post, &common::to_state(&s));
                let got = net.fire(&s, a).unwrap().map(|m| common::to_state(&m));
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn reachable_states_match_bfs_oracle(seed in any::<u64>()) {
        let net = net_from(seed, 10);
        let space = explore(net.clone(), Mode::Reachable, 1 << 12).unwrap();
        let got: BTreeSet<_> = space.states().iter().map(common::to_state).collect();
        prop_assert_eq!(got, common::reachable(&net));
    }

    #[test]
    fn cube_counts_match_subset_enumeration(seed in any::<u64>(), all in any::<bool>()) {
        let net = net_from(seed, 7);
        let (mode, states) = if all {
            (Mode::AllStates, common::all_states(net.place_count()))
        } else {
            (Mode::Reachable, common::reachable(&net))
        };
        let q = build_q(&explore(net.clone(), mode, 1 << 12).unwrap()).unwrap();
        prop_assert_eq!(q.counts(), common::cube_counts(&net, &states));
        prop_assert!(q.validate().is_empty());
    }

    #[test]
    fn euler_characteristic_equals_alternating_betti_sum(seed in any::<u64>()) {
        let net = net_from(seed, 8);
        let q = build_q(&explore(net, Mode::AllStates, 1 << 12).unwrap()).unwrap();
        let h = cubical_homology(&q).unwrap();
        let chi: i64 = h.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum();
        prop_assert_eq!(chi, q.euler_characteristic());
    }

    #[test]
    fn directed_h0_counts_deadlocks_and_senders(seed in any::<u64>()) {
        let net = net_from(seed, 10);
        let space = explore(net.clone(), Mode::Reachable, 1 << 12).unwrap();
        let (d, s) = common::deadlocks_and_senders(&net, &common::reachable(&net));
        prop_assert_eq!(space.deadlocks().len(), d);
        prop_assert_eq!(space.senders().len(), s);
        let q = build_q(&space).unwrap();
        let h0 = directed_cubical_homology(&q, Endpoint::Initial).unwrap();
        let h1 = directed_cubical_homology(&q, Endpoint::Final).unwrap();
        prop_assert_eq!(h0[0].betti, d);
        prop_assert_eq!(h1[0].betti, s);
        prop_assert!(h0[0].torsion.is_empty() && h1[0].torsion.is_empty());
    }

    #[test]
    fn homology_ignores_event_order(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let net = net_from(seed, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        let order = common::random_permutation(&mut rng, net.event_count());
        let shuffled = Arc::new(net.reorder_events(&order).unwrap());
        let groups = |n: &Arc<ElementaryNet>| {
            let q = build_q(&explore(n.clone(), Mode::AllStates, 1 << 12).unwrap()).unwrap();
            (
                cubical_homology(&q).unwrap(),
                directed_cubical_homology(&q, Endpoint::Initial).unwrap(),
                directed_cubical_homology(&q, Endpoint::Final).unwrap(),
                q.counts(),
            )
        };
        prop_assert_eq!(groups(&net), groups(&shuffled));
    }

    #[test]
    fn restriction_lattice_laws(seed in any::<u64>(), a_mask in any::<u8>(), b_mask in any::<u8>()) {
        let net = net_from(seed, 7);
        let q = build_q(&explore(net.clone(), Mode::AllStates, 1 << 12).unwrap()).unwrap();
        let pick = |mask: u8| -> Vec<EventId> { net.event_ids().filter(|e| mask >> e.index() & 1 == 1).collect() };
        let (ea, eb) = (pick(a_mask), pick(b_mask));
        let both: Vec<EventId> = ea.iter().copied().filter(|e| eb.contains(e)).collect();
        let either: Vec<EventId> = net.event_ids().filter(|e| ea.contains(e) || eb.contains(e)).collect();
        let xa = q.restrict_to_events(&ea).unwrap();
        let xb = q.restrict_to_events(&eb).unwrap();
        let meet = xa.intersection(&xb).unwrap();
        let join = xa.union(&xb).unwrap();
        prop_assert_eq!(&meet, &q.restrict_to_events(&both).unwrap());
        prop_assert!(join.is_subset_of(&q.restrict_to_events(&either).unwrap()));
        prop_assert!(meet.is_subset_of(&xa) && xa.is_subset_of(&join) && join.is_subset_of(&q));
        prop_assert_eq!(&join, &xb.union(&xa).unwrap());
        prop_assert!(join.validate().is_empty() && meet.validate().is_empty());
    }

    #[test]
    fn net_documents_round_trip(seed in any::<u64>()) {
        let net = net_from(seed, 10);
        let text = emit_net(&net);
        let back = parse_net(&text).unwrap();
        prop_assert_eq!(&back, net.as_ref());
        prop_assert_eq!(emit_net(&back), text);
    }

    #[test]
    fn sparse_and_dense_snf_agree(m in matrix()) {
        let dense = smith_normal_form_with_transforms(&m);
        prop_assert_eq!(&smith_normal_form(&m).diagonal, &dense.diagonal);
        let (u, v) = dense.transforms.clone().unwrap();
        prop_assert_eq!(u.mul(&m).mul(&v), dense.diagonal_matrix(m.rows(), m.cols()));
        prop_assert_eq!(dense.rank(), common::rational_rank(&m.to_dense()));
        for t in [&u, &v] {
            let det = common::determinant(&t.to_dense());
            prop_assert!(det == BigInt::from(1) || det == BigInt::from(-1), "det {}", det);
        }
    }

    #[test]
    fn snf_of_transpose_has_the_same_diagonal(m in matrix()) {
        prop_assert_eq!(smith_normal_form(&m).diagonal, smith_normal_form(&m.transpose()).diagonal);
    }
}
