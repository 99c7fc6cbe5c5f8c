use super::*;

fn run(src: &str) -> Vec<Report> {
    Session::new(Options::default()).run_source(src).unwrap()
}

#[test]
fn boundary_of_log_chain() {
    let r = run("let X = P1(z);\nlet a = chain(X, id, TAU^-1*dlog(z/(z-1)), poles[z, z - 1]);\nboundary a;");
    assert_eq!(r.len(), 3);
    assert_eq!(r[2].outcome, Outcome::Ok, "{}", r[2].result);
    assert_eq!(r[2].result, "chain(Point, P1(z), [[1:0]], 1, poles[]) + chain(Point, P1(z), [[1:1]], (-1), poles[])");
    assert_eq!(exit_code(&r), 0);
}

#[test]
fn rendered_chains_reparse() {
    let s = Session::new(Options::default());
    let texts = [
        "chain(P1(t), P1(x) x P1(y), [t, t^2], dlog(t/(t-1)), poles[t, t - 1])",
        "chain(P2(a,b), P2(a,b), id, 1/(a*b*(a+b-1))*da^db, poles[a, b, a + b - 1])",
        "2*TAU*point(P1(z), [[1:3]], 1) - point(P1(z), inf, 2)",
        "chain(Curve(y^2 - x^3 - x), id, dx/y)",
    ];
    for t in texts {
        let c = normalize(&s.parse_chain(t).unwrap(), s.options()).unwrap();
        let back = normalize(&s.parse_chain(&c.render()).unwrap(), s.options()).unwrap();
        assert_eq!(back.render(), c.render(), "{t}");
    }
}

#[test]
fn dsq_and_homotopy_commands() {
    let r = run("let X = P2(a,b);\nlet w = 1/(a*b*(a+b-1))*da^db;\nlet c = chain(X, id, w, poles[a, b, a + b - 1]);\ndsq c;\nlet p = point(P1(z), 2, 1) - point(P1(z), 5, 1);\nhomotopy-verify p at 1;");
    assert!(r[3].result.starts_with("∂²c = 0"), "{}", r[3].result);
    assert_eq!(r[3].result.lines().count(), 4);
    assert_eq!(r[5].result, "∂h + h∂ = id − s∗π∗: PASS");
    assert_eq!(exit_code(&r), 0);
}

#[test]
fn residues_and_witness() {
    let r = run("let X = P1(z) x P1(w);\nlet c = chain(X, id, dlog(z)^dlog(w), poles[z, w, inf(z), inf(w)]);\nresidue c along z then w;\nresidue c along w then z;\nwitness-p1 [(0, 1), (3, -1)];\nwitness-p1 [(0, 1)];");
    assert_eq!(r[2].result, "(0, 0): 1");
    assert_eq!(r[3].result, "(0, 0): -1");
    assert!(r[4].result.ends_with("∂b = input: true"));
    assert_eq!(r[5].outcome, Outcome::ComputationError);
    assert!(r[5].result.starts_with("error ["), "{}", r[5].result);
    assert_eq!(exit_code(&r), 1);
}

#[test]
fn errors_and_exit_codes() {
    let mut s = Session::new(Options::default());
    assert!(s.run_source("let a = (z + ;").unwrap_err().is_parse());
    let r = run("let a = 1;\nlet a = 2;");
    assert_eq!(r[1].outcome, Outcome::ComputationError);
    let r = run("chain(P1(z), id, dz/z^2, poles[z]);");
    assert!(r[0].result.contains("error"), "{}", r[0].result);
    let json: serde_json::Value = serde_json::from_str(&reports_json(&r)).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["reports"][0]["status"], "error");
}

#[test]
fn total_residue_and_cycles() {
    let r = run("let X = P1(z);\nlet c = chain(X, id, (3*z + 1)/(z*(z-2))*dz, poles[z, z - 2, inf]);\ntotal-residue c;\nlet Z = sub(X, points[[[1:0]], [[1:2]], [[0:1]]], hyper[]);\niscycle c;\niscycle c rel Z;");
    assert_eq!(r[2].result, "0");
    assert_eq!(r[4].result, "cycle: false");
    assert_eq!(r[5].result, "cycle: true");
}
