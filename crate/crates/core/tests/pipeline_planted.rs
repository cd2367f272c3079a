use pattern_hc::model::At;
use pattern_hc::pipeline::planted::{planted_trace, PlantedSpec};
use pattern_hc::pipeline::{assign_bins, run_attempt, run_pipeline, PipelineConfig, Setup};
use pattern_hc::rng::trial_rng;
use pattern_hc::{verify_pi_hc, Pattern};

fn relaxed() -> PipelineConfig {
    PipelineConfig {
        enforce_handsome: false,
        ..PipelineConfig::default()
    }
}

#[test]
fn planted_runs_succeed_and_verify() {
    for (pi, n) in [(">><", 300), ("><", 302), (">><<>", 500)] {
        let pi: Pattern = pi.parse().unwrap();
        let mut ok = 0;
        for t in 0..5 {
            let mut rng = trial_rng(40, t);
            let (trace, _) = planted_trace(n, &pi, &PlantedSpec::default(), &mut rng).unwrap();
            let run = run_pipeline(&trace, &pi, &relaxed(), &mut rng);
            if let Ok(w) = &run.result {
                let d = trace.prefix_digraph(At::Count(run.m_star.unwrap())).unwrap();
                assert!(verify_pi_hc(&d, w, &pi));
                ok += 1;
            } else {
                eprintln!("{pi} trial {t}: {:?}", run.attempts);
            }
        }
        assert!(ok >= 4, "{pi}: {ok}/5");
    }
}

#[test]
fn path_bins_and_orientations_are_consistent() {
    let pi: Pattern = ">><".parse().unwrap();
    let mut rng = trial_rng(41, 0);
    let (trace, _) = planted_trace(300, &pi, &PlantedSpec::default(), &mut rng).unwrap();
    let setup = Setup::new(300, &pi).unwrap();
    let rep = run_attempt(&trace, &setup, &relaxed(), assign_bins(300, &pi).unwrap(), &mut rng);
    assert!(rep.result.is_ok(), "{:?}", rep.result);
    assert_eq!(rep.paths.len(), 6);
    for p in &rep.paths {
        for (t, &v) in p.vertices.iter().enumerate() {
            assert_eq!(rep.bins.bin_of[v as usize], t % 3);
        }
    }
    assert_eq!(rep.bins.sizes(), vec![100; 3]);
    assert_eq!(rep.audit.premature_reveals, 0);
}

