use super::*;
use crate::functions::{certify_pair, parse_integrand};
use crate::special::lambda_fn;

fn f(s: &str) -> Integrand {
    parse_integrand(s).unwrap()
}

fn pt(x: f64) -> EvalPoint {
    EvalPoint::new(x).unwrap()
}

fn rl(alpha: f64) -> FractionalParams {
    FractionalParams::new(alpha, 0.0, 1.0, 0.0, 0.0).unwrap()
}

fn pair(a: &str, b: &str, x: f64) -> SynchronousPair {
    certify_pair(&f(a), &f(b), x)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn t31_hand_values() {
    let mut ev = Evaluator::default();
    let r = ev
        .gap_t31(&rl(1.0), &pair("pow:1", "pow:1", 1.0), pt(1.0))
        .unwrap();
    assert!(close(r.gap.unwrap(), 1.0 / 12.0, 1e-12));
    assert_eq!(r.verdict, Verdict::Holds);
    let r = ev
        .gap_t31(&rl(1.0), &pair("pow:1", "affine:1,-1", 1.0), pt(1.0))
        .unwrap();
    assert!(close(r.gap.unwrap(), -1.0 / 12.0, 1e-12));
    assert_eq!(r.certification, Some(Certification::Asynchronous));
    assert_eq!(r.verdict, Verdict::Holds);
    let p = FractionalParams::new(0.7, 0.3, 2.0, -0.5, 0.4).unwrap();
    let r = ev
        .gap_t31(&p, &pair("const:3", "exp:1", 1.7), pt(1.7))
        .unwrap();
    assert!(r.gap.unwrap().abs() <= r.tol);
}

#[test]
fn unknown_certification_is_indeterminate() {
    let mut ev = Evaluator::default();
    let r = ev
        .gap_t31(&rl(1.0), &pair("poly:0,1,-1", "pow:1", 1.0), pt(1.0))
        .unwrap();
    assert_eq!(r.certification, Some(Certification::Unknown));
    assert_eq!(r.verdict, Verdict::Indeterminate);
}

#[test]
fn t32_hand_value_and_degeneracy() {
    let mut ev = Evaluator::default();
    let sp = pair("pow:1", "pow:1", 1.0);
    let r = ev.gap_t32(&rl(1.0), &rl(2.0), &sp, pt(1.0)).unwrap();
    assert!(close(r.gap.unwrap(), 1.0 / 12.0, 1e-12));
    let p = FractionalParams::new(1.5, 0.5, 0.5, 1.0, -0.5).unwrap();
    let sp = pair("pow:2", "exp:1", 2.0);
    let t32 = ev.gap_t32(&p, &p, &sp, pt(2.0)).unwrap().gap.unwrap();
    let t31 = ev.gap_t31(&p, &sp, pt(2.0)).unwrap().gap.unwrap();
    let lam = lambda_fn(&p, pt(2.0)).unwrap();
    assert!(close(t32, 2.0 * lam * t31, 1e-9));
    let other = FractionalParams::new(1.5, 0.5, 0.7, 1.0, -0.5).unwrap();
    assert!(ev.gap_t32(&p, &other, &sp, pt(2.0)).is_err());
}

#[test]
fn weighted_hand_values() {
    let mut ev = Evaluator::default();
    let sp = pair("pow:1", "pow:1", 1.0);
    let r = ev
        .gap_l41(&rl(1.0), &sp, &f("pow:1"), &f("const:1"), pt(1.0))
        .unwrap();
    assert!(close(r.gap.unwrap(), 1.0 / 12.0, 1e-12));
    let r = ev
        .gap_t42(
            &rl(1.0),
            &sp,
            &f("pow:1"),
            &f("const:1"),
            &f("const:1"),
            pt(1.0),
        )
        .unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let r = ev
        .gap_l41(&rl(1.0), &sp, &f("affine:1,-2"), &f("const:1"), pt(1.0))
        .unwrap();
    assert_eq!(r.verdict, Verdict::Indeterminate);
}

#[test]
fn weighted_degeneracies() {
    let mut ev = Evaluator::default();
    let one = f("const:1");
    let p = FractionalParams::new(0.5, 0.0, 2.0, -0.5, 1.0).unwrap();
    let q = FractionalParams::new(2.5, 2.5, 2.0, -0.5, 1.0).unwrap();
    let x = pt(1.3);
    let sp = pair("log1p", "pow:1", 1.3);
    let lam = lambda_fn(&p, x).unwrap();
    let t31 = ev.gap_t31(&p, &sp, x).unwrap().gap.unwrap();
    let t32 = ev.gap_t32(&p, &q, &sp, x).unwrap().gap.unwrap();
    let l41 = ev.gap_l41(&p, &sp, &one, &one, x).unwrap().gap.unwrap();
    assert!(close(l41, 2.0 * lam * t31, 1e-9));
    let l43 = ev.gap_l43(&p, &q, &sp, &one, &one, x).unwrap().gap.unwrap();
    assert!(close(l43, t32, 1e-9));
    let t42 = ev
        .gap_t42(&p, &sp, &one, &one, &one, x)
        .unwrap()
        .gap
        .unwrap();
    assert!(close(t42, 6.0 * lam * lam * t31, 1e-9));
    let t44 = ev
        .gap_t44(&p, &q, &sp, &one, &one, &one, x)
        .unwrap()
        .gap
        .unwrap();
    assert!(close(t44, 3.0 * lam * t32, 1e-9));
    let w = f("pow:1");
    let l41w = ev.gap_l41(&p, &sp, &w, &one, x).unwrap().gap.unwrap();
    let l43w = ev.gap_l43(&p, &p, &sp, &w, &one, x).unwrap().gap.unwrap();
    assert!(close(l43w, l41w, 1e-12));
    let t42w = ev.gap_t42(&p, &sp, &w, &one, &w, x).unwrap().gap.unwrap();
    let t44w = ev
        .gap_t44(&p, &p, &sp, &w, &one, &w, x)
        .unwrap()
        .gap
        .unwrap();
    assert!(close(t44w, t42w, 1e-12));
}

#[test]
fn l51_hand_value_and_identity() {
    let mut ev = Evaluator::default();
    let one = f("const:1");
    let r = ev
        .identity_l51(&rl(1.0), &one, &f("pow:1"), &f("pow:1"), pt(1.0))
        .unwrap();
    let lhs = r.operands["lhs"].unwrap();
    let rhs = r.operands["rhs"].unwrap();
    assert!(close(lhs, 1.0 / 6.0, 1e-12) && close(rhs, 1.0 / 6.0, 1e-12));
    assert_eq!(r.verdict, Verdict::Holds);
    let p = FractionalParams::new(0.5, 0.5, 0.5, 1.0, -0.5).unwrap();
    let r = ev
        .identity_l51(&p, &f("pow:1"), &f("log1p"), &f("exp:1"), pt(2.0))
        .unwrap();
    assert!(r.converged);
    assert!(r.gap.unwrap().abs() <= 1e-9 * r.operands["lhs"].unwrap().abs().max(1.0));
    let r = ev
        .identity_l51(&p, &f("pow:1"), &f("const:2"), &f("exp:1"), pt(2.0))
        .unwrap();
    assert!(r.operands["lhs"].unwrap().abs() < 1e-12);
}

#[test]
fn t52_hand_chain() {
    let mut ev = Evaluator::default();
    let hp = HolderPair::new(2.0).unwrap();
    let one = f("const:1");
    let r = ev
        .chain_t52(&rl(1.0), &one, &f("pow:1"), &f("pow:1"), hp, pt(1.0), 1.0)
        .unwrap();
    let [a, b, c] = r.chain.unwrap();
    assert!(close(a, 1.0 / 6.0, 1e-12) && close(b, 1.0 / 3.0, 1e-12) && close(c, 1.0, 1e-12));
    assert_eq!(r.verdict, Verdict::Holds);
    let r = ev
        .chain_t52(&rl(1.0), &one, &f("const:1"), &f("pow:1"), hp, pt(1.0), 1.0)
        .unwrap();
    let [a, b, _] = r.chain.unwrap();
    assert!(a.abs() < 1e-14 && b.abs() < 1e-14);
}

#[test]
fn t53_hand_chain_and_reduction() {
    let mut ev = Evaluator::default();
    let hp = HolderPair::new(2.0).unwrap();
    let one = f("const:1");
    let (phi, psi) = (f("pow:1"), f("pow:1"));
    let r = ev
        .chain_t53(&rl(1.0), &rl(2.0), &one, &phi, &psi, hp, pt(1.0), 1.0)
        .unwrap();
    assert!(close(r.operands["A"].unwrap(), 1.0 / 12.0, 1e-12));
    let [a, b, c] = r.chain.unwrap();
    assert!(close(a, 1.0 / 12.0, 1e-12));
    assert!(close(c, 0.5, 1e-12));
    // B = ∬ (1-γ)|τ-γ| over the unit square = 1/6
    assert!(close(b, 1.0 / 6.0, 1e-12));
    assert_eq!(r.verdict, Verdict::Holds);

    let p = FractionalParams::new(1.5, 0.5, 2.0, 0.0, 1.0).unwrap();
    let h = f("pow:1");
    let (phi, psi) = (f("pow:2"), f("exp:1"));
    let t53 = ev
        .chain_t53(&p, &p, &h, &phi, &psi, hp, pt(1.0), 1.0)
        .unwrap();
    let t52 = ev.chain_t52(&p, &h, &phi, &psi, hp, pt(1.0), 1.0).unwrap();
    for (u, v) in t53.chain.unwrap().iter().zip(&t52.chain.unwrap()) {
        assert!(close(*u, *v, 1e-12));
    }
}

#[test]
fn classical_reports() {
    let mut ev = Evaluator::default();
    let one = f("const:1");
    let r = ev
        .classical_t(&pair("pow:1", "pow:1", 1.0), &one, &one, pt(1.0))
        .unwrap();
    assert!(close(r.gap.unwrap(), 1.0 / 6.0, 1e-12));
    assert!(close(r.operands["T(phi,psi)"].unwrap(), 1.0 / 12.0, 1e-12));
    let hp = HolderPair::new(2.0).unwrap();
    let r = ev
        .classical_t4(&one, &f("pow:1"), &f("pow:1"), hp, pt(1.0), 1.0)
        .unwrap();
    let [a, b, c] = r.chain.unwrap();
    assert!(close(a, 1.0 / 6.0, 1e-12) && close(b, 1.0 / 3.0, 1e-12) && close(c, 1.0, 1e-12));
}

#[test]
fn remark_matches_general_chain() {
    let mut ev = Evaluator::default();
    let hp = HolderPair::new(4.0).unwrap();
    let r = ev
        .remark_rl(0.5, &f("pow:1"), &f("pow:2"), &f("log1p"), hp, pt(2.0), 2.0)
        .unwrap();
    assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
    assert!(r.operands["mismatch_vs_T5.2"].unwrap() <= 1e-9 * r.chain.unwrap()[2]);
}

#[test]
fn reports_serialize_with_stable_fields() {
    let mut ev = Evaluator::default();
    let r = ev
        .gap_t31(&rl(1.0), &pair("pow:1", "pow:1", 1.0), pt(1.0))
        .unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for field in [
        "theorem_id",
        "params",
        "x",
        "functions",
        "operands",
        "gap",
        "tol",
        "verdict",
    ] {
        assert!(v.get(field).is_some(), "{field}");
    }
    assert_eq!(v["theorem_id"], "T3.1");
    assert_eq!(v["verdict"], "holds");
    assert!((v["gap"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-14);
    assert!(v["params"].get("delta").is_none());
    let back: InequalityReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn failed_report_is_indeterminate() {
    let err = Error::domain("x", "y");
    let r = Evaluator::failed(
        TheoremId::T31,
        ReportParams::one(&rl(1.0)),
        1.0,
        vec![],
        &err,
    );
    assert_eq!(r.verdict, Verdict::Indeterminate);
    assert!(r.note.unwrap().contains("domain"));
}
