use std::fs;

use chlab_sweep::*;

fn records() -> Vec<SweepRecord> {
    let mut c = SweepConfig {
        flow: FlowFamily::Rolls,
        nu_list: vec![1e-2, 1e-3],
        ..Default::default()
    };
    c.toggles.direct_min_nu = Some(5e-3);
    c.toggles.run_maximizer = false;
    c.toggles.run_pair = false;
    run_sweep(&c).unwrap()
}

#[test]
fn empty_reports_have_headers() {
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&[], &[], dir.path(), "empty").unwrap();
    assert_eq!(fs::read_to_string(&files.jsonl).unwrap(), "");
    let csv = fs::read_to_string(&files.csv).unwrap();
    assert_eq!(csv.trim(), CSV_COLUMNS.join(","));
    assert_eq!(fs::read_to_string(&files.fits).unwrap().trim(), "[]");
    for p in &files.plots {
        let s = fs::read_to_string(p).unwrap();
        assert!(s.starts_with("# nu "), "{}", p.display());
        assert_eq!(s.lines().count(), 1);
    }
}

#[test]
fn jsonl_round_trip_and_csv_consistency() {
    let recs = records();
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&recs, &[], dir.path(), "rolls").unwrap();
    let back = load_records(&files.jsonl).unwrap();
    assert_eq!(back, recs);
    let mut bytes = Vec::new();
    write_jsonl(&mut bytes, &back).unwrap();
    assert_eq!(bytes, fs::read(&files.jsonl).unwrap());

    let mut rdr = csv::Reader::from_path(&files.csv).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), CSV_COLUMNS.to_vec());
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), recs.len());
    let sum = |name: &str| -> f64 { rows.iter().filter_map(|r| r[col(name)].parse::<f64>().ok()).sum() };
    let js: f64 = recs.iter().filter_map(|r| r.eps_big()).sum();
    assert_eq!(sum("eps_U"), js);
    let ju: f64 = recs.iter().filter_map(|r| r.eps_u()).sum();
    assert_eq!(sum("eps_u"), ju);
    let jf: f64 = recs.iter().filter_map(|r| r.f_test()).sum();
    assert_eq!(sum("F_test"), jf);
    assert_eq!(&rows[1][col("eps_u")], "");
    assert_eq!(&rows[0][col("upper_bound_pass")], "true");
}

#[test]
fn plot_files_hold_compensated_series() {
    let recs = records();
    let dir = tempfile::tempdir().unwrap();
    emit_report(&recs, &[], dir.path(), "p").unwrap();
    let read = |name: &str| -> Vec<(f64, f64)> {
        fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split_whitespace().map(|t| t.parse::<f64>().unwrap());
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect()
    };
    let raw = read("p_eps_U.dat");
    let comp = read("p_eps_U_nu13.dat");
    let logc = read("p_eps_U_log2sq.dat");
    assert_eq!(raw.len(), 2);
    for i in 0..2 {
        let (nu, e) = raw[i];
        assert!((comp[i].1 - e * nu.powf(-1.0 / 3.0)).abs() <= 1e-12 * comp[i].1);
        assert!((logc[i].1 - e * (1.0 / nu).log2().powi(2)).abs() <= 1e-12 * logc[i].1);
    }
    assert_eq!(read("p_eps_u.dat").len(), 1);
    let ll = read("p_loglaw.dat");
    assert_eq!(ll.len(), 2);
    assert!(ll.iter().all(|(_, r)| r.is_finite() && *r > 0.0));
}
