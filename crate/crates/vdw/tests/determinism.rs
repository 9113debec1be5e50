//! Figure-preset sweeps give byte-identical tables across runs and worker counts.

use vdw::sweep::{csv_string, manifest, presets, resolve, run_sweep, RunOptions};

fn table(name: &str, workers: usize, fast: bool) -> (String, String) {
    let res = resolve(&presets::load(name).unwrap()).unwrap();
    let opts = RunOptions {
        workers: Some(workers),
        fast,
        ..Default::default()
    };
    let out = run_sweep(&res, &opts).unwrap();
    assert_eq!(out.failed_rows(), 0, "{name}");
    (csv_string(&out), manifest(&res, &opts, &out).to_string())
}

#[test]
fn presets_are_identical_across_worker_counts() {
    for p in presets::PRESETS {
        let (one, m1) = table(p.name, 1, false);
        let (three, m3) = table(p.name, 3, false);
        let (again, _) = table(p.name, 3, false);
        assert!(one == three, "{} differs between 1 and 3 workers", p.name);
        assert!(three == again, "{} differs between runs", p.name);
        assert_eq!(m1, m3);
    }
}

#[test]
fn fast_mode_is_deterministic() {
    for name in ["fig1a", "fig1c", "fig3a"] {
        assert!(table(name, 1, true) == table(name, 4, true), "{name}");
    }
}
