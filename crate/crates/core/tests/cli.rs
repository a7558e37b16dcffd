use std::fs;

use starx::cli::run;

const TERMS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../terms");

struct Out {
    code: i32,
    out: String,
    err: String,
}

fn starx(args: &[&str], stdin: &str) -> Out {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("starx").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    Out {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn term(name: &str) -> String {
    format!("{TERMS}/{name}.sx")
}

#[test]
fn peirce_types() {
    let r = starx(&["type", &term("peirce"), "--sequent", "|- 'd:((A->B)->A)->A"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("(->R) |- 'd:((A->B)->A)->A"));
    let r = starx(&["type", &term("peirce"), "--sequent", "|- 'd:A", "--format", "json"], "");
    assert_eq!(r.code, 1);
    let v: serde_json::Value = serde_json::from_str(r.out.trim()).unwrap();
    assert_eq!(v["ok"], false);
}

#[test]
fn lafont_priorities_differ() {
    let l = starx(&["reduce", &term("lafont"), "--strategy", "left-priority"], "");
    let r = starx(&["reduce", &term("lafont"), "--strategy", "right-priority"], "");
    assert_eq!((l.code, r.code), (0, 0));
    let last = |s: &str| s.lines().last().unwrap().to_string();
    assert_ne!(last(&l.out), last(&r.out));
    assert!(last(&l.out).ends_with("eraL(v,eraR(cap(u,'c),'d))"));
}

#[test]
fn vacuous_binder_fails_check() {
    let r = starx(&["check", &term("bad")], "");
    assert_eq!(r.code, 1);
    assert!(r.err.contains("binds no occurrence"), "{}", r.err);
    // X allows it
    assert_eq!(starx(&["check", "--calculus", "x", &term("bad")], "").code, 0);
}

#[test]
fn usage_errors() {
    assert_eq!(starx(&["frobnicate"], "").code, 2);
    assert_eq!(starx(&["reduce", "--strategy", "sideways"], "cap(x,'a)").code, 2);
    assert_eq!(starx(&["type", "--sequent", "x:A |- y:A"], "cap(x,'a)").code, 2);
    assert_eq!(starx(&["check", "/no/such/file.sx"], "").code, 2);
    assert_eq!(starx(&["--help"], "").code, 0);
}

#[test]
fn stdin_input_and_infer() {
    let r = starx(&["infer"], "cap(x,'a)\n");
    assert_eq!(r.out.trim(), "x:T0 |- 'a:T0");
    let r = starx(&["infer", &term("s")], "");
    assert_eq!(r.out.trim(), "|- 'a:(T0->T1->T2)->(T0->T1)->T0->T2");
}

#[test]
fn random_strategy_is_reproducible() {
    let args = ["reduce", "--strategy", "random:42", "--format", "json"];
    let a = starx(&args, "cut(eraR(cap(u,'c),'a),'a,x,eraL(x,cap(v,'d)))");
    let b = starx(&args, "cut(eraR(cap(u,'c),'a),'a,x,eraL(x,cap(v,'d)))");
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
    for line in a.out.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn recorded_choices_replay() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("choices.txt");
    let t = term("loop");
    let live = starx(
        &["step", &t, "--disable-cutc", "--record", rec.to_str().unwrap()],
        "2\n1\n",
    );
    assert_eq!(live.code, 0, "{}", live.err);
    let recorded = fs::read_to_string(&rec).unwrap();
    assert_eq!(recorded, "2\n1\n");
    let replay = starx(
        &["step", &t, "--disable-cutc", "--choices", rec.to_str().unwrap()],
        "",
    );
    assert_eq!(replay.out, live.out);
}

#[test]
fn invalid_choice_reprompts() {
    let r = starx(&["step", &term("loop"), "--disable-cutc"], "x\n9\n2\n1\n");
    assert_eq!(r.code, 0);
    assert_eq!(r.err.matches("choose 1-3, a or q").count(), 2);
    assert!(r.out.ends_with("normal form after 2 steps: cap(u,'c)\n"));
}

#[test]
fn auto_mode_and_quit() {
    let r = starx(&["step", &term("lafont")], "a\n");
    assert!(r.out.lines().last().unwrap().starts_with("normal form after 2 steps"));
    let r = starx(&["step", &term("lafont")], "q\n");
    assert!(r.out.lines().last().unwrap().starts_with("stopped after 0 steps"));
}

#[test]
fn graph_outputs() {
    let r = starx(&["graph", &term("loop"), "--format", "dot"], "");
    assert!(r.out.starts_with("digraph"));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dot");
    let r = starx(
        &["graph", &term("loop"), "--disable-cutc", "--format", "json", "-o", file.to_str().unwrap()],
        "",
    );
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(v["shortest_cycle"].as_array().unwrap().len(), 6);
}

#[test]
fn encode_reports() {
    let r = starx(&["encode", "--to", "star", &term("shared")], "");
    let v: serde_json::Value = serde_json::from_str(r.out.trim()).unwrap();
    assert_eq!((v["erasers"].as_u64(), v["duplicators"].as_u64()), (Some(1), Some(1)));
    let r = starx(&["encode", "--to", "x", &term("peirce")], "");
    let v: serde_json::Value = serde_json::from_str(r.out.trim()).unwrap();
    assert_eq!(v["output"], "exp(z,imp(exp(x,cap(x,'a),'b,'g),'g,z,y,cap(y,'a)),'a,'d)");
    assert_eq!(starx(&["encode", "--to", "star", &term("peirce")], "").code, 1);
}

#[test]
fn simplify_and_infix_output() {
    let r = starx(&["simplify"], "dupL(eraL(x2,cap(x1,'a)),x1,x2,x)");
    assert_eq!(r.out.trim(), "cap(x,'a)");
    let r = starx(&["simplify", "--paper-notation"], "cap(x,'a)");
    assert_eq!(r.out.trim(), "⟨x.'a⟩");
}
