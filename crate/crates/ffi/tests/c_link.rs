use std::path::PathBuf;
use std::process::Command;

/// Compiles a C program against the generated header and the static library,
/// then runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcutforge_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = tempfile_dir().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler not found");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 0."));
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("cutforge-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
