use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn qhorn<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_qhorn")).args(args).output().expect("spawn qhorn")
}

fn os(s: &str) -> std::ffi::OsString {
    s.into()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn golden_outputs() {
    let a2 = data("a2.quiver");
    let star = data("star2.quiver");
    let cases: Vec<(Vec<&std::ffi::OsStr>, &str)> = vec![
        (vec!["horn".as_ref(), a2.as_os_str()], "a2_horn.out"),
        (vec!["inequalities".as_ref(), a2.as_os_str(), "--essential".as_ref()], "a2_inequalities_essential.out"),
        (vec!["inequalities".as_ref(), a2.as_os_str(), "--prune".as_ref()], "a2_inequalities_pruned.out"),
        (vec!["sigma".as_ref(), a2.as_os_str()], "a2_sigma.out"),
        (vec!["selftest".as_ref(), a2.as_os_str(), "--seed".as_ref(), "7".as_ref()], "a2_selftest.out"),
        (vec!["horn".as_ref(), star.as_os_str(), "--essential".as_ref()], "star2_horn_essential.out"),
        (
            vec!["inequalities".as_ref(), star.as_os_str(), "--essential".as_ref(), "--prune".as_ref()],
            "star2_inequalities_pruned.out",
        ),
    ];
    for (args, file) in cases {
        let o = qhorn(&args);
        assert_eq!(o.status.code(), Some(0), "{file}: {}", stderr(&o));
        assert_eq!(stdout(&o), golden(file), "{file}");
        assert!(o.stderr.is_empty());
    }
}

#[test]
fn selftest_summary_and_exit() {
    let o = qhorn([os("selftest"), data("a2.quiver").into(), os("--seed"), os("7")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("AGREEMENTS 16/16\n"));

    let o = qhorn(["selftest", "--sweep", "2,2,2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("QUIVER ") || l.starts_with("AGREEMENTS ")), "{out}");

    for mode in ["theo2", "theo3"] {
        let o = qhorn([os("selftest"), data("star2.quiver").into(), os("--seed"), os("5"), os("--mode"), os(mode)]);
        assert_eq!(o.status.code(), Some(0), "{mode}");
    }
}

#[test]
fn membership_exit_codes() {
    let a2 = data("a2.quiver");
    let o = qhorn([os("check"), a2.clone().into(), os("--weights"), data("cauchy.weights").into()]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "MEMBER\n"));

    let o = qhorn([os("check"), a2.clone().into(), os("--weights"), data("outside.weights").into()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NOT_MEMBER\tK\tx:{1};y:{2}\teul=0\n");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.weights");
    fs::write(&bad, "weight x 0 1\nweight y 0 -1\n").unwrap();
    let o = qhorn([os("check"), a2.clone().into(), os("--weights"), bad.into()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR not-dominant: "));

    let o = qhorn([os("sigma-check"), a2.clone().into(), os("--sigma"), os("x=1,y=-1")]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "MEMBER\n"));
    let o = qhorn([os("sigma-check"), a2.into(), os("--sigma"), os("x=-1,y=1")]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "NOT_MEMBER\n"));
}

#[test]
fn classify_and_oracle_reports() {
    let a2 = data("a2.quiver");
    let o = qhorn([os("classify"), a2.clone().into(), os("--K"), os("x:1;y:1")]);
    assert_eq!(stdout(&o), "CLASSIFY K=x:1;y:1 eul=-1 admissible=1 covering=0 ressayre=0 horn_element=0\n");
    let o = qhorn([os("oracle"), a2.clone().into(), os("--K"), os("x:1;y:2"), os("--seed"), os("7")]);
    assert_eq!(stdout(&o), "ORACLE K=x:1;y:2 rows=1 cols=1 rank=1 ext_min=0 hom_min=0 eul=0 det=1\n");
    let o = qhorn([
        os("oracle"),
        a2.clone().into(),
        os("--K"),
        os("x:1;y:2"),
        os("--seed"),
        os("7"),
        os("--prime"),
        os("91"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR invalid: "));
    // seeds are mandatory
    let o = qhorn([os("oracle"), a2.into(), os("--K"), os("x:1;y:2")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR usage: "));
}

#[test]
fn input_errors_exit_2_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("vertex x 1 2\nvertex y 1\narrow x y\narrow y x\n", "ERROR cycle: "),
        ("vertex x 1 1\n", "ERROR duplicate-label: "),
        ("vertex x 1\nvertex x 2\n", "ERROR duplicate-vertex: "),
        ("vertex x 1\narrow x z\n", "ERROR unknown-vertex: "),
        ("edge x y\n", "ERROR parse: "),
    ];
    for (i, (text, prefix)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("q{i}.quiver"));
        fs::write(&path, text).unwrap();
        let o = qhorn([os("horn"), path.into()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        let err = stderr(&o);
        assert!(err.starts_with(prefix), "{err}");
        assert_eq!(err.lines().count(), 1);
        assert!(o.stdout.is_empty());
    }
    let o = qhorn([os("classify"), data("a2.quiver").into(), os("--K"), os("x:3")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR not-subfamily: "));
}

#[test]
fn cap_exceeded_exits_3() {
    let o = qhorn([os("horn"), data("star2.quiver").into(), os("--cap"), os("10")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR cap-exceeded: "));
    let o = qhorn([os("inequalities"), data("star2.quiver").into(), os("--prune"), os("--lp-cap"), os("10")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR lp-too-large: "));
}

#[test]
fn lr_subcommands() {
    let o = qhorn(["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1"]);
    assert_eq!(stdout(&o), "LR (2,1) (2,1) (3,2,1) = 2\n");
    let o = qhorn(["lr", "--lam", "2,1", "--mu", "2,1", "--rows", "2"]);
    assert_eq!(stdout(&o), "LR (2,1) (2,1) (4,2) = 1\nLR (2,1) (2,1) (3,3) = 1\n");
    let o = qhorn(["star-check", "--n", "2", "--s", "2", "--lam", "1", "--lam", "1", "--mu", "2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "STAR n=2 s=2 lam=(1),(1) mu=(2,1) multiplicity=0 cone=0 agree=1\n");
    let o = qhorn(["star-check", "--n", "2", "--s", "3", "--lam", "1", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parallel_flag_does_not_change_output() {
    let star = data("star2.quiver");
    for args in
        [vec![os("horn"), star.clone().into()], vec![os("selftest"), star.clone().into(), os("--seed"), os("9")]]
    {
        let seq = qhorn(&args);
        let mut par_args = vec![os("--parallel")];
        par_args.extend(args.iter().cloned());
        let par = qhorn(&par_args);
        assert_eq!(seq.stdout, par.stdout);
        assert_eq!(seq.status.code(), par.status.code());
    }
}
