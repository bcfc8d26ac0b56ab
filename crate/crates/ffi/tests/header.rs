//! Compiles and runs a small C program against the generated header and
//! the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "lnprm.h"

int main(void) {
    LnprmSample *s = NULL;
    if (lnprm_builtin_dataset(2, &s) != LNPRM_STATUS_OK) return 1;
    LnprmSearchConfig cfg = lnprm_search_config_default();
    LnprmEstimate est;
    if (lnprm_estimate(s, &cfg, &est) != LNPRM_STATUS_OK) return 2;
    lnprm_sample_free(s);
    if (!est.found || fabs(est.lambda - 0.7030) > 1e-3) return 3;
    double bad[3] = {1.0, 1.0, 0.5};
    if (lnprm_sample_new(bad, 3, &s) != LNPRM_STATUS_TIED_EXTREME) return 4;
    printf("%.4f %.4f\n", est.lambda, est.tau);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("liblnprm_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());

    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "0.7030 28.3203"
    );
}
