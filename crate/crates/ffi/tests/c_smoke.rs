//! Compiles and runs a small C program against the generated header and
//! the static library, proving the ABI end to end. Skipped silently when
//! no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "ckde.h"

int main(void) {
    CkdeParams *params = NULL;
    if (ckde_params_from_parts("3b", "5", "1", &params) != CKDE_STATUS_OK) return 10;
    char *json = NULL;
    if (ckde_params_describe(params, &json) != CKDE_STATUS_OK) return 11;
    if (strstr(json, "\"q\":\"5\"") == NULL) return 12;
    ckde_string_free(json);
    ckde_params_free(params);

    const char *config =
        "{\"params\": {\"p\": \"3b\", \"q\": \"5\", \"r\": \"1\"},"
        " \"threshold\": 2,"
        " \"holders\": [\"holder-0\", \"holder-1\", \"holder-2\"],"
        " \"nodes\": [\"alice\"],"
        " \"schedule\": [{\"event\": \"request\", \"id\": \"alice\", \"phase\": 1}],"
        " \"seed\": 7}";
    char *transcript = NULL;
    if (ckde_scenario_run(config, &transcript) != CKDE_STATUS_OK) return 13;
    if (ckde_transcript_verify(transcript) != CKDE_STATUS_OK) return 14;
    ckde_string_free(transcript);

    if (ckde_params_generate(16, 1, NULL) != CKDE_STATUS_NULL_POINTER) return 15;
    if (ckde_last_error() == NULL) return 16;
    puts("c smoke ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    // the test binary sits in target/<profile>/deps next to the freshest
    // libckde_ffi.a; the copy one level up can be stale
    let mut deps_dir = std::env::current_exe().unwrap();
    deps_dir.pop();
    let staticlib = deps_dir.join("libckde_ffi.a");
    assert!(
        staticlib.exists(),
        "staticlib missing at {}",
        staticlib.display()
    );

    let scratch = std::env::temp_dir().join(format!("ckde-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&scratch).unwrap();
    let source = scratch.join("smoke.c");
    let binary = scratch.join("smoke");
    std::fs::write(&source, C_PROGRAM).unwrap();

    let compile = Command::new(&cc)
        .arg(&source)
        .arg("-I")
        .arg(&include_dir)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .output()
        .unwrap();
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().unwrap();
    assert!(
        run.status.success(),
        "smoke binary exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c smoke ok"));
    std::fs::remove_dir_all(&scratch).ok();
}

fn which_cc() -> Result<String, ()> {
    for candidate in ["cc", "gcc", "clang"] {
        if Command::new(candidate)
            .arg("--version")
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
        {
            return Ok(candidate.to_string());
        }
    }
    Err(())
}
