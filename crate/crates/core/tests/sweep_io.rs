use sanloc::experiment::{
    fig2d_sweep, read_csv, run_sweep, run_sweep_with_threads, write_csv, ExperimentConfig, COLUMNS, SCHEMA_VERSION,
};
use sanloc::{Mode, Receiver};

fn small() -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.sweep.seeds = vec![0, 7, 3];
    c.sweep.snr_db = vec![-10.0, 5.0, 20.0];
    c
}

fn csv_bytes(c: &ExperimentConfig, threads: usize) -> Vec<u8> {
    let out = run_sweep_with_threads(c, threads).unwrap();
    let mut buf = Vec::new();
    write_csv(&out.rows, &mut buf).unwrap();
    buf
}

#[test]
fn serial_and_parallel_csv_are_identical() {
    let c = small();
    let serial = csv_bytes(&c, 1);
    assert_eq!(serial, csv_bytes(&c, 4));
    assert_eq!(serial, csv_bytes(&c, 3));
}

#[test]
fn rerun_is_byte_identical_on_disk() {
    let c = small();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out = run_sweep(&c).unwrap();
    let (csv_a, man_a) = out.write(a.path(), &c).unwrap();
    let (csv_b, man_b) = run_sweep(&c).unwrap().write(b.path(), &c).unwrap();
    assert_eq!(std::fs::read(csv_a).unwrap(), std::fs::read(csv_b).unwrap());
    assert_eq!(std::fs::read(man_a).unwrap(), std::fs::read(man_b).unwrap());
}

#[test]
fn one_row_per_cell_with_fixed_schema() {
    let c = small();
    let out = run_sweep(&c).unwrap();
    assert_eq!(out.rows.len(), 3 * 2 * 3 * 3);
    let mut buf = Vec::new();
    write_csv(&out.rows, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, out.rows);
    for mode in Mode::ALL {
        for receiver in [Receiver::Bob, Receiver::Eve] {
            for snr in &c.sweep.snr_db {
                for seed in &c.sweep.seeds {
                    let n = back
                        .iter()
                        .filter(|r| r.mode == mode && r.receiver == receiver && r.snr_db == *snr && r.seed == *seed)
                        .count();
                    assert_eq!(n, 1);
                }
            }
        }
    }
    assert!(back.iter().all(|r| r.schema_version == SCHEMA_VERSION));
    assert!(back.iter().all(|r| r.toa_bounds_m.0.len() == 3 && r.aod_bounds_rad.0.len() == 3));
    assert!(back.iter().all(|r| r.toa_bounds_m.0[0] == r.toa_bound_los_m));
}

#[test]
fn every_row_round_trips_its_snr() {
    let out = run_sweep(&small()).unwrap();
    assert!(out.rows.iter().all(|r| r.snr_roundtrip_db < 1e-6));
}

#[test]
fn lpl_pairs_matching_rows() {
    let out = run_sweep(&small()).unwrap();
    for r in &out.rows {
        let peb = |who: Receiver| {
            out.rows
                .iter()
                .find(|o| o.receiver == who && o.mode == r.mode && o.snr_db == r.snr_db && o.seed == r.seed)
                .unwrap()
                .peb_m
        };
        let expected = (peb(Receiver::Bob) - peb(Receiver::Eve)) / peb(Receiver::Bob);
        assert_eq!(r.lpl, Some(expected));
    }
}

#[test]
fn unit_scale_fig2d_reproduces_run() {
    let c = small();
    assert_eq!(fig2d_sweep(&c, 1.0).unwrap(), run_sweep(&c).unwrap());
}

#[test]
fn manifest_hash_changes_iff_config_changes() {
    let c = small();
    let base = run_sweep(&c).unwrap().manifest;
    let mut moved = c.clone();
    moved.output.dir = "somewhere/else".into();
    assert_eq!(run_sweep(&moved).unwrap().manifest, base);
    let scaled = fig2d_sweep(&c, 2.0).unwrap().manifest;
    let line = |m: &str| m.lines().find(|l| l.starts_with("config_sha256")).unwrap().to_string();
    assert_ne!(line(&scaled), line(&base));
    assert!(scaled.contains("key_scale = 2"));
}

#[test]
fn key_too_large_is_reported() {
    let mut c = small();
    c.key.delta_theta_rad = 1.2;
    assert!(run_sweep(&c).is_err());
}

#[test]
fn bob_only_sweep_has_no_lpl() {
    let mut c = small();
    c.sweep.receivers = vec![Receiver::Bob];
    let out = run_sweep(&c).unwrap();
    assert!(out.rows.iter().all(|r| r.lpl.is_none()));
}
