use std::fs;
use std::process::{Command, Output};

fn ffnets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffnets")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_is_reproducible_and_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ffnets");
    let b = dir.path().join("b.ffnets");
    for p in [&a, &b] {
        let o = ffnets(&["construct", "--q", "2", "--s", "2", "--rows", "8", "--cols", "8", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{o:?}");
        assert!(stdout(&o).contains("digest="));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.contains("C 1 rows=8 cols=8\n1 0 0 0 0 0 0 0\n1 1 0 0 0 0 0 0\n1 0 1 0 0 0 0 0\n"));

    let o = ffnets(&["tvalue", "--in", a.to_str().unwrap(), "--mmax", "6"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l.ends_with(" 0 0 0")), "{lines:?}");

    let o = ffnets(&["netcheck", "--in", a.to_str().unwrap(), "--m", "4", "--t", "0", "--offset", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("5 of 5 shapes pass"));

    let o = ffnets(&["points", "--in", a.to_str().unwrap(), "--count", "2", "--precision", "3", "--exact", "--n0", "1"]);
    assert_eq!(stdout(&o), "1 7/8 7/8\n2 2/8 5/8\n");
}

#[test]
fn params_text_and_flags_agree() {
    let by_flags = ffnets(&["construct", "--q", "3", "--curve", "0,0,0,2,0", "--s", "3", "--variant", "gpos", "--rows", "4", "--cols", "4"]);
    let by_text = ffnets(&["construct", "--params", "variant=gpos backend=curve:0,0,0,2,0 q=3 s=3 D=2*(0,0)", "--rows", "4", "--cols", "4"]);
    assert!(by_flags.status.success() && by_text.status.success());
    assert_eq!(by_flags.stdout, by_text.stdout);
}

#[test]
fn too_many_places_is_an_error() {
    let o = ffnets(&["construct", "--q", "2", "--s", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rational places"));
}

#[test]
fn tampered_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.ffnets");
    assert!(ffnets(&["construct", "--q", "2", "--s", "2", "--out", p.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(&p).unwrap().replacen("\n1 1 0 0", "\n1 1 1 0", 1);
    fs::write(&p, text).unwrap();
    let o = ffnets(&["tvalue", "--in", p.to_str().unwrap(), "--mmax", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("digest mismatch"));
}

#[test]
fn bound_violation_sets_exit_code() {
    // a gpos-labelled file whose matrices are all zero
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z.ffnets");
    let ms = ffnets::genmat::MatrixSet::from_rows(
        ffnets::gf::prime_field(2).unwrap(),
        ffnets::construct::Variant::GenusPositive,
        1,
        1,
        vec![vec![vec![ffnets::gf::FieldElement::ZERO; 4]; 4]; 2],
    )
    .unwrap();
    fs::write(&p, ms.serialize()).unwrap();
    let o = ffnets(&["tvalue", "--in", p.to_str().unwrap(), "--mmax", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn expand_listings() {
    let o = ffnets(&["expand", "1/(1-x)", "--at", "x", "--precision", "3"]);
    assert_eq!(stdout(&o), "0 1\n1 1\n2 1\n3 1\n");
    let o = ffnets(&["expand", "x^2", "--q", "2", "--place", "x+1", "--precision", "2"]);
    assert_eq!(stdout(&o), "0 1\n1 0\n2 1\n");
    let o = ffnets(&["expand", "2", "--q", "5", "--place", "inf", "--precision", "2"]);
    assert_eq!(stdout(&o), "0 2\n1 0\n2 0\n");
    let o = ffnets(&["expand", "1/x", "--q", "3", "--curve", "0,0,0,2,0", "--at", "(0,0)", "--precision", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("-2 "));
    let o = ffnets(&["expand", "1/", "--at", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_quick_and_corrupted_golden() {
    let o = ffnets(&["selftest", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("4 of 4 checks passed"));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("golden.ffnets");
    let good = ffnets::acceptance::GOLDEN_F2;
    fs::write(&p, good.replacen("1 1 1 1 1 1 1 1", "1 1 1 1 1 1 1 0", 1)).unwrap();
    let o = ffnets(&["selftest", "--quick", "--golden", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [0]"));
}
