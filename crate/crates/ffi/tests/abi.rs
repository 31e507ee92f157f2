use std::ffi::{CStr, CString};
use std::ptr;

use bdcodes_ffi::*;

fn last_error() -> String {
    let p = bd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn counting_and_lengths() {
    let (mut on, mut off) = (0u64, 0u64);
    assert_eq!(bd_count_conditions(1, 1, 3, &mut on, &mut off), BdStatus::Ok);
    assert_eq!((on, off), (1, 2));
    let mut nu = 0u64;
    assert_eq!(bd_count_conditions_closed(4, 3, 3, &mut nu), BdStatus::Ok);
    assert_eq!(nu, 1);
    let mut n = 0usize;
    assert_eq!(bd_predicted_length(4, 3, 5, &mut n), BdStatus::Ok);
    assert_eq!(n, 27);
    let mut mu = 0usize;
    assert_eq!(bd_multiplicity(4, 3, 27, &mut mu), BdStatus::Ok);
    assert_eq!(mu, 4);
}

#[test]
fn errors_carry_messages() {
    let mut nu = 0u64;
    assert_eq!(bd_count_conditions_closed(4, 3, 4, &mut nu), BdStatus::InvalidInput);
    assert!(last_error().contains("odd"));
    assert_eq!(bd_count_conditions_closed(4, 5, 3, &mut nu), BdStatus::InvalidInput);
    assert_eq!(bd_count_conditions_closed(4, 3, 3, ptr::null_mut()), BdStatus::NullPointer);
    assert_eq!(bd_count_conditions_closed(4, 3, 3, &mut nu), BdStatus::Ok);
    assert!(bd_last_error_message().is_null());
}

#[test]
fn family_code_round_trip() {
    let mut code = ptr::null_mut();
    assert_eq!(bd_code_family1(4, &mut code), BdStatus::Ok);
    let mut n = 0usize;
    assert_eq!(bd_code_qubits(code, &mut n), BdStatus::Ok);
    assert_eq!(n, 11);
    let mut amps = vec![0.0; n + 1];
    assert_eq!(bd_code_amplitudes(code, amps.as_mut_ptr(), amps.len()), BdStatus::Ok);
    assert!((amps[0] - 5f64.sqrt() / 4.0).abs() < 1e-15);
    assert!((amps[8] - 11f64.sqrt() / 4.0).abs() < 1e-15);
    assert_eq!(bd_code_amplitudes(code, amps.as_mut_ptr(), 3), BdStatus::InvalidInput);

    let mut json = ptr::null_mut();
    assert_eq!(bd_code_to_json(code, &mut json), BdStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("sqrt(11)/4"));
    let mut back = ptr::null_mut();
    assert_eq!(bd_code_from_json(json, &mut back), BdStatus::Ok);
    bd_string_free(json);

    let (mut res, mut pass) = (1.0, false);
    for mode in [BD_VERIFY_SPIN, BD_VERIFY_DENSE, BD_VERIFY_SYMMETRIC] {
        assert_eq!(bd_code_verify(back, 3, mode, 1e-12, &mut res, &mut pass), BdStatus::Ok);
        assert!(pass && res < 1e-12);
    }
    assert_eq!(bd_code_verify(back, 5, BD_VERIFY_SYMMETRIC, 1e-12, &mut res, &mut pass), BdStatus::Ok);
    assert!(!pass);
    assert_eq!(bd_code_verify(back, 3, 9, 1e-12, &mut res, &mut pass), BdStatus::InvalidInput);
    bd_code_free(back);
    bd_code_free(code);
    bd_code_free(ptr::null_mut());
}

#[test]
fn search_and_bad_json() {
    let mut code = ptr::null_mut();
    assert_eq!(bd_code_search(4, 3, 5, 64, 1, &mut code), BdStatus::Ok);
    let mut n = 0usize;
    bd_code_qubits(code, &mut n);
    assert_eq!(n, 27);
    let mut d = 0u32;
    assert_eq!(bd_code_distance(code, &mut d), BdStatus::Ok);
    assert_eq!(d, 5);
    bd_code_free(code);

    let junk = CString::new("{not json").unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(bd_code_from_json(junk.as_ptr(), &mut code), BdStatus::InvalidInput);
    assert!(code.is_null());
    let mut r = ptr::null_mut();
    assert_eq!(bd_code_family2(2, &mut r), BdStatus::InvalidInput);
}
