use std::ffi::{CStr, CString};
use std::ptr;

use nematic_ffi::*;

fn config(json: &str) -> CString {
    CString::new(json).unwrap()
}

fn last_error() -> String {
    let p = nematic_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn coefficients_of_the_unit_example() {
    let mut c = NematicCoefficients::default();
    let cfg = config(r#"{"l1": 1.0, "xi": 1.0}"#);
    assert_eq!(unsafe { nematic_coefficients(cfg.as_ptr(), &mut c) }, NematicStatus::Ok);
    assert!((c.s - 1.5).abs() < 1e-12);
    assert!((c.gamma1 - 4.5).abs() < 1e-12);
    assert!((c.gamma2 + 3.5).abs() < 1e-12);
    assert_eq!(c.checks_pass, 1);
    assert!(nematic_last_error().is_null());
}

#[test]
fn errors_map_to_status_codes() {
    let mut c = NematicCoefficients::default();
    let bad = config(r#"{"l1": -1.0}"#);
    assert_eq!(unsafe { nematic_coefficients(bad.as_ptr(), &mut c) }, NematicStatus::Validation);
    assert!(last_error().contains("elastic coercivity"), "{}", last_error());

    let bad = config(r#"{"dt": "soon"}"#);
    assert_eq!(unsafe { nematic_coefficients(bad.as_ptr(), &mut c) }, NematicStatus::Config);
    assert!(last_error().contains("dt"));

    assert_eq!(unsafe { nematic_coefficients(ptr::null(), &mut c) }, NematicStatus::NullPointer);
    let ok = config("{}");
    assert_eq!(unsafe { nematic_coefficients(ok.as_ptr(), ptr::null_mut()) }, NematicStatus::NullPointer);

    let mut be: *mut NematicBe = ptr::null_mut();
    let stiff = config(r#"{"dt": 1.0}"#);
    assert_eq!(unsafe { nematic_be_new(stiff.as_ptr(), &mut be) }, NematicStatus::Cfl);
    assert!(be.is_null());
}

#[test]
fn beris_edwards_handle_steps_and_dissipates() {
    let cfg = config(r#"{"n": [16, 16], "dt": 1e-3, "initial": "planar", "amplitude": 0.3}"#);
    let mut h: *mut NematicBe = ptr::null_mut();
    unsafe {
        assert_eq!(nematic_be_new(cfg.as_ptr(), &mut h), NematicStatus::Ok, "{}", last_error());
        let (mut t, mut step, mut nodes) = (0.0, 0u64, 0usize);
        let mut e0 = NematicBeEnergy::default();
        assert_eq!(nematic_be_energy(h, &mut e0), NematicStatus::Ok);
        assert_eq!(nematic_be_step(h, 10), NematicStatus::Ok);
        assert_eq!(nematic_be_info(h, &mut t, &mut step, &mut nodes), NematicStatus::Ok);
        assert_eq!((step, nodes), (10, 256));
        assert!((t - 0.01).abs() < 1e-12);
        let mut e1 = NematicBeEnergy::default();
        assert_eq!(nematic_be_energy(h, &mut e1), NematicStatus::Ok);
        assert!(e1.total < e0.total);

        let mut q = vec![0.0; 5 * nodes];
        assert_eq!(nematic_be_copy_q(h, q.as_mut_ptr(), q.len() - 1), NematicStatus::BufferTooSmall);
        assert_eq!(nematic_be_copy_q(h, q.as_mut_ptr(), q.len()), NematicStatus::Ok);
        assert!(q.iter().all(|x| x.is_finite()) && q.iter().any(|x| *x != 0.0));
        let mut v = vec![1.0; 3 * nodes];
        assert_eq!(nematic_be_copy_velocity(h, v.as_mut_ptr(), v.len()), NematicStatus::Ok);
        assert!(v.iter().all(|x| *x == 0.0));

        let mut snap = ptr::null_mut();
        assert_eq!(nematic_be_snapshot(h, &mut snap), NematicStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(snap).to_str().unwrap()).unwrap();
        assert_eq!(doc["format"], "nematic-snapshot");
        assert_eq!(doc["step"], 10);
        nematic_string_free(snap);
        nematic_be_free(h);
        nematic_be_free(ptr::null_mut());
    }
}

#[test]
fn ericksen_leslie_handle_keeps_unit_director() {
    let cfg = config(r#"{"n": [16, 16], "dt": 1e-4, "mode": "full", "initial": "planar"}"#);
    let mut h: *mut NematicEl = ptr::null_mut();
    unsafe {
        assert_eq!(nematic_el_new(cfg.as_ptr(), &mut h), NematicStatus::Ok, "{}", last_error());
        assert_eq!(nematic_el_step(h, 20), NematicStatus::Ok, "{}", last_error());
        let mut nodes = 0usize;
        assert_eq!(nematic_el_info(h, ptr::null_mut(), ptr::null_mut(), &mut nodes), NematicStatus::Ok);
        let mut n = vec![0.0; 3 * nodes];
        assert_eq!(nematic_el_copy_director(h, n.as_mut_ptr(), n.len()), NematicStatus::Ok);
        for v in n.chunks(3) {
            assert!(((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs() < 1e-12);
        }
        let mut v = vec![0.0; 3 * nodes];
        assert_eq!(nematic_el_copy_velocity(h, v.as_mut_ptr(), v.len()), NematicStatus::Ok);
        assert!(v.iter().any(|x| *x != 0.0));
        let mut e = NematicElEnergy::default();
        assert_eq!(nematic_el_energy(h, &mut e), NematicStatus::Ok);
        assert!((e.kinetic + e.frank - e.total).abs() < 1e-14);
        let mut snap = ptr::null_mut();
        assert_eq!(nematic_el_snapshot(h, &mut snap), NematicStatus::Ok);
        assert!(CStr::from_ptr(snap).to_str().unwrap().contains("\"n\""));
        nematic_string_free(snap);
        nematic_el_free(h);
    }
}

#[test]
fn null_handles_are_reported() {
    unsafe {
        assert_eq!(nematic_be_step(ptr::null_mut(), 1), NematicStatus::NullPointer);
        assert_eq!(nematic_el_step(ptr::null_mut(), 1), NematicStatus::NullPointer);
    }
    assert_eq!(last_error(), "null pointer argument");
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(nematic_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
