use super::*;
use crate::graph::fixtures::{chain3, six_node};
use crate::graph::parent_graph;
use crate::separation::{brute_force_mu_separated, GraphOracle, SeparationQuery};

fn edges(g: &Dmg) -> Vec<(String, String)> {
    g.directed_edges()
        .map(|(t, h)| (g.labels()[t].clone(), g.labels()[h].clone()))
        .collect()
}

fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
    p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn six_node_oracle() -> GraphOracle {
    let g = six_node();
    let o = g.resolve_labels(&["alpha", "delta", "epsilon"]).unwrap();
    GraphOracle::new(g, &o).unwrap()
}

fn dg(n: usize, e: &[(usize, usize)]) -> Dmg {
    let mut b = DmgBuilder::with_nodes(n);
    for &(t, h) in e {
        b.add_directed(NodeId(t), NodeId(h)).unwrap();
    }
    b.build()
}

#[test]
fn trek_step_on_loops_only() {
    let o = GraphOracle::fully_observed(Dmg::empty(3));
    let d = trek_step(&o).unwrap();
    assert_eq!(d, Dmg::empty(3));
    assert_eq!(o.calls(), 6);
}

#[test]
fn trek_step_is_asymmetric() {
    let o = GraphOracle::fully_observed(dg(2, &[(0, 1)]));
    let d = trek_step(&o).unwrap();
    assert_eq!(d.directed_edges().collect::<Vec<_>>(), vec![(0, 1)]);
    assert_eq!(o.calls(), 2);
}

/// Hand check of the six-node example trek step, confirmed by the brute-force walk
/// search: besides alpha -> delta, alpha -> epsilon and delta -> epsilon, the
/// confounding walk epsilon <- phi -> delta keeps epsilon -> delta.
#[test]
fn trek_step_on_six_node() {
    let truth = six_node();
    let l = |s| truth.node_by_label(s).unwrap().index();
    let q = SeparationQuery::pair(l("epsilon"), l("delta"), NodeSet::singleton(l("delta")));
    assert!(!brute_force_mu_separated(&truth, &q).unwrap());

    let o = six_node_oracle();
    let d = trek_step(&o).unwrap();
    assert_eq!(
        edges(&d),
        pairs(&[("alpha", "delta"), ("alpha", "epsilon"), ("delta", "epsilon"), ("epsilon", "delta")])
    );
    assert_eq!(o.calls(), 6);
}

#[test]
fn parent_step_on_chain() {
    let o = GraphOracle::fully_observed(chain3());
    let d = trek_step(&o).unwrap();
    assert_eq!(d.directed_edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    let before = o.calls();
    let mut s = Session::on(&o, d.to_builder(), ScreeningOptions::default());
    steps::parent_pass(&mut s).unwrap();
    assert_eq!(o.calls() - before, 3);
    assert_eq!(s.graph.view(), &chain3());
    assert_eq!(
        s.certificates.get(&(0, 2)),
        Some(&Certificate::Separating { set: vec![1, 2] })
    );
}

#[test]
fn parent_step_without_edges_makes_no_calls() {
    let o = GraphOracle::fully_observed(chain3());
    let d = parent_step(&o, &Dmg::empty(3)).unwrap();
    assert_eq!(d, Dmg::empty(3));
    assert_eq!(o.calls(), 0);
}

#[test]
fn parent_step_on_six_node_keeps_everything() {
    let o = six_node_oracle();
    let d = trek_step(&o).unwrap();
    let p = parent_step(&o, &d).unwrap();
    assert_eq!(p, d);
    let truth = six_node();
    let target = parent_graph(&truth, &truth.resolve_labels(&["alpha", "delta", "epsilon"]).unwrap()).unwrap();
    assert!(target.directed_subgraph_of(&p));
    assert_eq!(p.directed_count() - target.directed_count(), 2);
}

#[test]
fn parent_step_rejects_mismatched_graph() {
    let o = GraphOracle::fully_observed(chain3());
    assert!(matches!(parent_step(&o, &Dmg::empty(2)), Err(Error::NodeSetMismatch)));
}

#[test]
fn cheap_propagation_examples() {
    let d = dg(3, &[(0, 1), (1, 2)]);
    assert_eq!(ancestry_propagation_cheap(&d), dg(3, &[(0, 1)]));

    let labels: Vec<String> = (0..4).map(|i| i.to_string()).collect();
    let complete = Dmg::complete(&labels).unwrap();
    assert_eq!(ancestry_propagation_cheap(&complete), complete);

    let o = six_node_oracle();
    let d = trek_step(&o).unwrap();
    assert_eq!(ancestry_propagation_cheap(&d), d);
}

#[test]
fn cheap_propagation_is_batched() {
    // 0 -> 1 -> 2 -> 3: sequential removal of 1 -> 2 would stop 2 -> 3 from
    // qualifying through 1; batching evaluates every triple on the input.
    let d = dg(4, &[(0, 1), (1, 2), (2, 3)]);
    assert_eq!(ancestry_propagation_cheap(&d), dg(4, &[(0, 1)]));
}

#[test]
fn oracle_propagation_examples() {
    let d = dg(3, &[(0, 1), (1, 2)]);

    let independent = GraphOracle::fully_observed(Dmg::empty(3));
    assert_eq!(ancestry_propagation(&independent, &d).unwrap(), dg(3, &[(0, 1)]));
    assert_eq!(independent.calls(), 1);

    let dependent = GraphOracle::fully_observed(dg(3, &[(0, 2)]));
    assert_eq!(ancestry_propagation(&dependent, &d).unwrap(), d);
    assert_eq!(dependent.calls(), 1);
}

#[test]
fn cs_on_six_node() {
    let o = six_node_oracle();
    let r = run(AlgorithmId::Cs, &o, ScreeningOptions::default()).unwrap();
    assert_eq!(
        edges(&r.graph),
        pairs(&[("alpha", "delta"), ("alpha", "epsilon"), ("delta", "epsilon"), ("epsilon", "delta")])
    );
    assert!(r.oracle_calls <= 12);
    assert_eq!(r.oracle_calls, o.calls());
    // removed pairs each carry one certificate
    assert_eq!(r.certificates.len(), 2);
}

#[test]
fn cs_recovers_unconfounded_truth() {
    let truth = dg(4, &[(0, 1), (1, 2), (3, 2), (2, 0)]);
    let o = GraphOracle::fully_observed(truth.clone());
    let r = run(AlgorithmId::Cs, &o, ScreeningOptions::default()).unwrap();
    assert_eq!(r.graph, truth);
}

#[test]
fn ca_on_loops_only() {
    let o = GraphOracle::fully_observed(Dmg::empty(3));
    let r = ca_baseline(&o, ScreeningOptions::default()).unwrap();
    assert_eq!(r.graph, Dmg::empty(3));
    assert_eq!(r.oracle_calls, 6);
    assert!(r
        .certificates
        .values()
        .all(|c| *c == Certificate::Separating { set: vec![] }));
    assert_eq!(r.certificates.len(), 6);
}

#[test]
fn ca_enumerates_by_cardinality() {
    // chain: 0 -> 2 needs {1}; sets tried: {}, {1}
    let o = GraphOracle::fully_observed(chain3()).with_log();
    let r = ca_baseline(&o, ScreeningOptions::default()).unwrap();
    assert_eq!(r.graph, chain3());
    assert_eq!(r.certificates[&(0, 2)], Certificate::Separating { set: vec![1] });
    let log = o.log();
    let tried: Vec<_> = log.iter().filter(|q| q.a == [0] && q.b == [2]).map(|q| q.c.clone()).collect();
    assert_eq!(tried, vec![vec![], vec![1]]);
}

#[test]
fn trace_and_certificates_are_consistent() {
    for alg in AlgorithmId::ALL {
        let o = six_node_oracle();
        let r = run(alg, &o, ScreeningOptions::default()).unwrap();
        let removed: Vec<_> = r
            .trace
            .iter()
            .filter(|t| t.action != Action::Kept)
            .map(|t| (t.tail, t.head))
            .collect();
        for &(t, h) in &removed {
            assert!(!r.graph.has_directed(t, h));
        }
        let certified = r.trace.iter().filter(|t| t.action == Action::Removed).count();
        assert_eq!(certified, r.certificates.len(), "{alg}");
        assert_eq!(removed.len(), 6 - r.graph.directed_count(), "{alg}");
    }
}

#[test]
fn runs_are_deterministic() {
    let opts = ScreeningOptions { order: PairOrder::Random(11), parent_fixpoint: false };
    for alg in AlgorithmId::ALL {
        let a = run(alg, &six_node_oracle(), opts).unwrap();
        let b = run(alg, &six_node_oracle(), opts).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn fixpoint_never_adds_edges() {
    let opts = ScreeningOptions { parent_fixpoint: true, ..Default::default() };
    let single = run(AlgorithmId::Cs, &six_node_oracle(), ScreeningOptions::default()).unwrap();
    let fix = run(AlgorithmId::Cs, &six_node_oracle(), opts).unwrap();
    assert!(fix.graph.directed_subgraph_of(&single.graph));
}

#[test]
fn json_report_uses_labels() {
    let r = run(AlgorithmId::Cs, &six_node_oracle(), ScreeningOptions::default()).unwrap();
    let v = r.to_json(true, true);
    assert_eq!(v["oracle_calls"], 10);
    assert_eq!(v["algorithm"], "cs");
    assert_eq!(v["certificates"][0]["kind"], "separating");
    assert!(v["trace"].as_array().unwrap().len() >= 6);
    assert_eq!(v["nodes"][0], "alpha");
}
