use std::ffi::{CStr, CString};
use std::ptr;

use hmpid_ffi::*;

fn coin_params() -> *mut HmpidParams {
    let mut p = ptr::null_mut();
    let st = unsafe { hmpid_params_new(1, [1.0].as_ptr(), [0.5, 0.5].as_ptr(), [1.0].as_ptr(), &mut p) };
    assert_eq!(st, HmpidStatus::Ok);
    p
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hmpid_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn simulate_identify_coin() {
    unsafe {
        let params = coin_params();
        let mut dist = ptr::null_mut();
        assert_eq!(hmpid_simulate(params, 3, &mut dist), HmpidStatus::Ok);
        assert_eq!(hmpid_distribution_n(dist), 3);
        let mut probs = [0.0; 8];
        assert_eq!(hmpid_distribution_probs(dist, probs.as_mut_ptr(), 8), HmpidStatus::Ok);
        assert!(probs.iter().all(|&p| (p - 0.125).abs() < 1e-15));

        let mut verdict = ptr::null_mut();
        assert_eq!(hmpid_identify(dist, 0, false, &mut verdict), HmpidStatus::Ok);
        assert_eq!(hmpid_verdict_kind(verdict), HmpidVerdictKind::Hmp);
        assert_eq!(hmpid_verdict_states(verdict), 1);

        let mut residual = f64::NAN;
        assert_eq!(hmpid_certify(dist, verdict, &mut residual), HmpidStatus::Ok);
        assert!(residual < 1e-12);

        let mut rec = ptr::null_mut();
        assert_eq!(hmpid_verdict_params(verdict, &mut rec), HmpidStatus::Ok);
        let mut e = [0.0; 2];
        assert_eq!(hmpid_params_get(rec, ptr::null_mut(), e.as_mut_ptr(), ptr::null_mut()), HmpidStatus::Ok);
        assert!((e[0] - 0.5).abs() < 1e-12 && (e[1] - 0.5).abs() < 1e-12);

        let mut json = ptr::null_mut();
        assert_eq!(hmpid_verdict_to_json(verdict, &mut json), HmpidStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["verdict"], "hmp");
        assert_eq!(v["states"], 1);
        hmpid_string_free(json);

        hmpid_params_free(rec);
        hmpid_verdict_free(verdict);
        hmpid_distribution_free(dist);
        hmpid_params_free(params);
    }
}

#[test]
fn negative_control_has_no_params() {
    let probs = [0.145, 0.125, 0.135, 0.125, 0.125, 0.115, 0.125, 0.105];
    unsafe {
        let mut dist = ptr::null_mut();
        assert_eq!(hmpid_distribution_from_probs(3, probs.as_ptr(), 8, &mut dist), HmpidStatus::Ok);
        let mut verdict = ptr::null_mut();
        assert_eq!(hmpid_identify(dist, 0, false, &mut verdict), HmpidStatus::Ok);
        assert_eq!(hmpid_verdict_kind(verdict), HmpidVerdictKind::NoHmp);
        assert_eq!(hmpid_verdict_states(verdict), 2);
        let mut p = ptr::null_mut();
        assert_eq!(hmpid_verdict_params(verdict, &mut p), HmpidStatus::WrongKind);
        assert!(p.is_null());
        let mut r = 0.0;
        assert_eq!(hmpid_certify(dist, verdict, &mut r), HmpidStatus::WrongKind);
        hmpid_verdict_free(verdict);
        hmpid_distribution_free(dist);
    }
}

#[test]
fn json_inputs() {
    let dist_json = CString::new(r#"{"n":1,"probabilities":{"0":0.25,"1":0.75}}"#).unwrap();
    let params_json =
        CString::new(r#"{"d":1,"transition":[[1.0]],"emission":[[0.25,0.75]],"initial":[1.0]}"#).unwrap();
    unsafe {
        let mut dist = ptr::null_mut();
        assert_eq!(hmpid_distribution_from_json(dist_json.as_ptr(), &mut dist), HmpidStatus::Ok);
        let mut params = ptr::null_mut();
        assert_eq!(hmpid_params_from_json(params_json.as_ptr(), &mut params), HmpidStatus::Ok);
        assert_eq!(hmpid_params_states(params), 1);
        let mut sim = ptr::null_mut();
        assert_eq!(hmpid_simulate(params, 1, &mut sim), HmpidStatus::Ok);
        let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
        hmpid_distribution_probs(dist, a.as_mut_ptr(), 2);
        hmpid_distribution_probs(sim, b.as_mut_ptr(), 2);
        assert_eq!(a, b);

        let mut out = ptr::null_mut();
        assert_eq!(hmpid_params_to_json(params, &mut out), HmpidStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(hmpid_params_from_json(out, &mut back), HmpidStatus::Ok);
        hmpid_string_free(out);
        for p in [params, back] {
            hmpid_params_free(p);
        }
        hmpid_distribution_free(sim);
        hmpid_distribution_free(dist);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut dist = ptr::null_mut();
        let bad = [0.5, 0.6];
        assert_eq!(hmpid_distribution_from_probs(1, bad.as_ptr(), 2, &mut dist), HmpidStatus::Validation);
        assert!(last_error().contains("sum"));
        assert!(dist.is_null());

        assert_eq!(hmpid_distribution_from_probs(2, bad.as_ptr(), 2, &mut dist), HmpidStatus::InvalidArgument);
        assert_eq!(hmpid_distribution_from_probs(1, ptr::null(), 2, &mut dist), HmpidStatus::NullPointer);

        let garbage = CString::new("{not json").unwrap();
        assert_eq!(hmpid_distribution_from_json(garbage.as_ptr(), &mut dist), HmpidStatus::Format);

        let mut p = ptr::null_mut();
        let st = hmpid_params_new(1, [1.0].as_ptr(), [0.7, 0.7].as_ptr(), [1.0].as_ptr(), &mut p);
        assert_eq!(st, HmpidStatus::Validation);
        assert_eq!(hmpid_params_new(0, ptr::null(), ptr::null(), ptr::null(), &mut p), HmpidStatus::InvalidArgument);

        let params = coin_params();
        assert_eq!(hmpid_simulate(params, 3, ptr::null_mut()), HmpidStatus::NullPointer);
        assert_eq!(hmpid_simulate(params, 40, &mut dist), HmpidStatus::InvalidArgument);
        hmpid_params_free(params);

        let mut v = ptr::null_mut();
        assert_eq!(hmpid_identify(ptr::null(), 0, false, &mut v), HmpidStatus::NullPointer);
        assert_eq!(hmpid_verdict_states(ptr::null()), 0);
        hmpid_distribution_free(ptr::null_mut());
        hmpid_string_free(ptr::null_mut());
    }
}

#[test]
fn max_states_limit_is_forwarded() {
    unsafe {
        let params = coin_params();
        let mut dist = ptr::null_mut();
        hmpid_simulate(params, 3, &mut dist);
        let mut v = ptr::null_mut();
        assert_eq!(hmpid_identify(dist, 9, false, &mut v), HmpidStatus::InvalidArgument);
        assert_eq!(hmpid_identify(dist, 1, true, &mut v), HmpidStatus::Ok);
        assert_eq!(hmpid_verdict_states(v), 1);
        hmpid_verdict_free(v);
        hmpid_distribution_free(dist);
        hmpid_params_free(params);
    }
}

#[test]
fn header_declares_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hmpid.h")).unwrap();
    for name in [
        "hmpid_last_error",
        "hmpid_string_free",
        "hmpid_distribution_from_json",
        "hmpid_distribution_from_probs",
        "hmpid_distribution_probs",
        "hmpid_distribution_free",
        "hmpid_params_new",
        "hmpid_params_get",
        "hmpid_params_free",
        "hmpid_simulate",
        "hmpid_identify",
        "hmpid_verdict_kind",
        "hmpid_verdict_params",
        "hmpid_verdict_to_json",
        "hmpid_verdict_free",
        "typedef struct HmpidVerdict HmpidVerdict;",
        "HMPID_STATUS_WRONG_KIND = 6",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
