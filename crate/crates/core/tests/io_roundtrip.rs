use std::io::Cursor;

use chlab_core::io::{self, FieldFormat};
use chlab_core::{BcTag, ChannelGrid, ScalarField, VectorField};

fn sample() -> (ChannelGrid, VectorField) {
    let g = ChannelGrid::uniform(1.7, 6, 5, 2).unwrap();
    let v = VectorField::new(
        ScalarField::from_fn(&g, |x, y| (3.0 * x).sin() * y + 1.0 / 3.0),
        ScalarField::from_fn(&g, |x, y| (x * y).exp() * 1e-7),
        BcTag::None,
    );
    (g, v)
}

#[test]
fn binary_roundtrip_is_bit_exact() {
    let (g, v) = sample();
    let mut buf = Vec::new();
    io::write_binary(&mut buf, &g, &v).unwrap();
    assert_eq!(&buf[..8], b"CHFLD001");
    assert_eq!(buf.len(), 8 + 24 + 2 * 8 * g.nx() * g.ny());
    let back = io::read_binary(Cursor::new(&buf), &g).unwrap();
    assert_eq!(back.u1, v.u1);
    assert_eq!(back.u2, v.u2);
}

#[test]
fn csv_matches_binary() {
    let (g, v) = sample();
    let mut text = Vec::new();
    io::write_csv(&mut text, &g, &v).unwrap();
    let s = String::from_utf8(text.clone()).unwrap();
    assert!(s.starts_with("x1,x2,u1,u2\n"));
    assert_eq!(s.lines().count(), 1 + g.nx() * g.ny());
    let back = io::read_csv(Cursor::new(&text), &g).unwrap();
    for (a, b) in back.u1.values().iter().zip(v.u1.values()).chain(back.u2.values().iter().zip(v.u2.values())) {
        assert!((a - b).abs() <= 1e-15 * b.abs().max(1e-300));
    }
}

#[test]
fn rejects_bad_magic_and_shape() {
    let (g, v) = sample();
    let mut buf = Vec::new();
    io::write_binary(&mut buf, &g, &v).unwrap();
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(io::read_binary(Cursor::new(&bad), &g).is_err());
    let other = ChannelGrid::uniform(1.7, 8, 5, 2).unwrap();
    assert!(io::read_binary(Cursor::new(&buf), &other).is_err());
}

#[test]
fn files_on_disk() {
    let (g, v) = sample();
    let dir = std::env::temp_dir().join(format!("chlab-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (fmt, name) in [(FieldFormat::Binary, "f.bin"), (FieldFormat::Csv, "f.csv")] {
        let path = dir.join(name);
        io::dump_field(&path, &g, &v, fmt).unwrap();
        let back = io::load_field(&path, &g).unwrap();
        for (a, b) in back.u1.values().iter().zip(v.u1.values()) {
            assert!((a - b).abs() <= 1e-15 * b.abs());
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}
