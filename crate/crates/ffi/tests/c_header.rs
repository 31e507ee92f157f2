//! Compiles and runs a small C program against the generated header and
//! the static library. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "bdcodes.h"

int main(void) {
    uint64_t nu = 0;
    if (bd_count_conditions_closed(4, 3, 5, &nu) != BD_STATUS_OK || nu != 3) return 1;
    if (bd_count_conditions_closed(4, 3, 4, &nu) != BD_STATUS_INVALID_INPUT) return 2;
    if (bd_last_error_message() == NULL) return 3;
    BdCode *code = NULL;
    if (bd_code_family2(3, &code) != BD_STATUS_OK) return 4;
    size_t n = 0;
    bd_code_qubits(code, &n);
    double res = 1.0;
    bool pass = false;
    if (bd_code_verify(code, 3, BD_VERIFY_DENSE, 1e-12, &res, &pass) != BD_STATUS_OK || !pass) return 5;
    char *json = NULL;
    if (bd_code_to_json(code, &json) != BD_STATUS_OK) return 6;
    bd_string_free(json);
    bd_code_free(code);
    printf("n=%zu\n", n);
    return 0;
}
"#;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn c_program_links_against_header() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libbdcodes_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}, skipping", lib.display());
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "n=11");
}
