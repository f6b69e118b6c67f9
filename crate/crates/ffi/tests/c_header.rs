//! Compiles `smoke.c` against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let profile = profile_dir.file_name().unwrap().to_str().unwrap().to_owned();
    // test builds link the rlib only; build the static library explicitly
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let mut build = Command::new(cargo);
    build.args(["build", "--quiet", "--lib", "-p", "conic-rigidity-ffi", "--target-dir"]);
    build.arg(profile_dir.parent().unwrap());
    if profile == "release" {
        build.arg("--release");
    }
    assert!(build.status().expect("cargo").success());
    let lib = profile_dir.join("libconic_rigidity_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("fixed points "));
}
