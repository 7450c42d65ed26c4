use condlab_core::analysis::McEstimate;
use condlab_core::distributions::FitnessDistribution;
use condlab_core::panetwork::*;
use condlab_core::rng::replica_stream;

fn grow(n: usize, per_vertex: bool, replica: u64) -> FitnessGraph {
    let q = FitnessDistribution::polynomial_tail(2.0).unwrap();
    let rule = NormalizationRule::Deterministic(ZSequence::Constant(0.8));
    let mut rng = replica_stream(if per_vertex { 41 } else { 42 }, replica);
    let mut g = FitnessGraph::new(rule, &q, &mut rng);
    while g.len() < n {
        if per_vertex {
            g.grow_step_per_vertex(&q, &mut rng).unwrap();
        } else {
            g.grow_step(&q, &mut rng).unwrap();
        }
    }
    g
}

#[test]
fn pooled_and_per_vertex_steps_agree() {
    let n = 600;
    let stats = |per_vertex: bool| {
        let graphs: Vec<FitnessGraph> = (0..300).map(|r| grow(n, per_vertex, r)).collect();
        let edges: Vec<f64> = graphs.iter().map(|g| g.edge_count() as f64).collect();
        let top: Vec<f64> = graphs.iter().map(|g| g.impact_measure().mass_above(0.8)).collect();
        (McEstimate::from_samples(&edges), McEstimate::from_samples(&top))
    };
    let (e1, t1) = stats(false);
    let (e2, t2) = stats(true);
    let close = |a: McEstimate, b: McEstimate| {
        (a.mean - b.mean).abs() < 4.0 * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt()
    };
    assert!(close(e1, e2), "{e1:?} {e2:?}");
    assert!(close(t1, t2), "{t1:?} {t2:?}");
}

#[test]
fn deterministic_wave_is_monotone_and_bounded() {
    let q = FitnessDistribution::polynomial_tail(2.0).unwrap();
    let rule = NormalizationRule::Deterministic(ZSequence::log_corrected(2.0).unwrap());
    let graphs: Vec<FitnessGraph> = (0..10).map(|r| simulate_replica(5000, &rule, &q, 8, r).unwrap()).collect();
    let xs: Vec<f64> = (1..=16).map(|k| 0.5 * k as f64).collect();
    let wave = wave_estimate(&graphs, &xs, 2.0).unwrap();
    assert!(wave.monotone);
    for (g, row) in graphs.iter().zip(&wave.per_replica) {
        assert!(*row.last().unwrap() <= g.impact_measure().total_mass());
    }
}
