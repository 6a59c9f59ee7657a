//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "assoc_schemes.h"

int main(void) {
    AsReport *r = NULL;
    if (as_run(AS_FAMILY_GDD, 4, AS_VERIFY_AXIOMS | AS_EIGEN, &r) != AS_STATUS_OK) return 10;
    bool passed = false;
    uint64_t v = 0, c = 0;
    if (as_report_passed(r, &passed) != AS_STATUS_OK || !passed) return 11;
    if (as_report_size(r, &v, &c) != AS_STATUS_OK || v != 80 || c != 9) return 12;
    const char *json = NULL;
    if (as_report_json(r, &json) != AS_STATUS_OK || strstr(json, "\"gdd\"") == NULL) return 13;
    as_report_free(r);
    if (as_run(AS_FAMILY_TWIN, 13, 0, &r) != AS_STATUS_INVALID_ARGUMENT) return 14;
    if (strstr(as_last_error(), "prime power") == NULL) return 15;
    printf("ok %s\n", as_version());
    return 0;
}
"#;

/// The directory holding the library artifacts, two levels above this
/// test binary (`target/<profile>/deps/`).
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("libassoc_schemes_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap_or_else(|e| panic!("could not run the C compiler {cc}: {e}"));
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "client exited with {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
