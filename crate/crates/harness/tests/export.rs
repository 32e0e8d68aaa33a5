use std::fs;

use caprise_core::{Sample, Trajectory, TrajectoryMeta};
use caprise_harness::export::{parse_csv, read_trajectory, sidecar_path, write_csv, write_trajectory};
use caprise_harness::Error;
use proptest::prelude::*;

fn sample_traj() -> Trajectory {
    let samples = vec![
        Sample { t: 0.0, h: 0.01, v: 0.0 },
        Sample { t: 1.0 / 3.0, h: 0.012_345_678_901_234_568, v: -1e-300 },
        Sample { t: 2.5, h: 1e20, v: 123.456 },
    ];
    let mut meta = TrajectoryMeta::new("omega_1", "extended");
    meta.h_inf = Some(0.0191605);
    Trajectory::new(samples, meta)
}

#[test]
fn csv_layout() {
    let mut buf = Vec::new();
    write_csv(&mut buf, &sample_traj()).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.split('\n').collect();
    assert_eq!(lines[0], "t,h,hdot");
    assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e-2,0.0000000000000000e0");
    assert_eq!(lines[3], "2.5000000000000000e0,1.0000000000000000e20,1.2345600000000000e2");
    assert_eq!(lines.last(), Some(&""));
    assert!(!text.contains('\r'));
    for line in &lines[1..lines.len() - 1] {
        assert!(!line.ends_with(','));
        for field in line.split(',') {
            let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{field}");
        }
    }
}

#[test]
fn round_trip_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let traj = sample_traj();
    write_trajectory(&path, &traj).unwrap();
    assert!(sidecar_path(&path).exists());
    assert_eq!(read_trajectory(&path).unwrap(), traj);

    fs::remove_file(sidecar_path(&path)).unwrap();
    let bare = read_trajectory(&path).unwrap();
    assert_eq!(bare.samples, traj.samples);
    assert_eq!(bare.meta.label, "x");
    assert_eq!(bare.meta.h_inf, None);
}

#[test]
fn malformed_input_is_rejected() {
    let p = std::path::Path::new("in.csv");
    assert!(matches!(parse_csv("a,b,c\n", p), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(parse_csv("t,h,hdot\n1,2\n", p), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_csv("t,h,hdot\n1,2,x\n", p), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_csv("t,h,hdot\n1,2,3\n1,2,3\n", p), Err(Error::Parse { line: 3, .. })));
    assert_eq!(parse_csv("t,h,hdot\n", p).unwrap().len(), 0);
    assert!(read_trajectory(std::path::Path::new("/nonexistent/x.csv")).is_err());
}

proptest! {
    #[test]
    fn values_round_trip_exactly(t in 0.0f64..1e3, h in -1e6f64..1e6, v in proptest::num::f64::NORMAL) {
        let traj = Trajectory::new(
            vec![Sample { t, h, v }, Sample { t: t + 1.0, h: -h, v: v / 3.0 }],
            TrajectoryMeta::new("p", "test"),
        );
        let mut buf = Vec::new();
        write_csv(&mut buf, &traj).unwrap();
        let back = parse_csv(std::str::from_utf8(&buf).unwrap(), std::path::Path::new("p")).unwrap();
        prop_assert_eq!(back, traj.samples);
    }
}
