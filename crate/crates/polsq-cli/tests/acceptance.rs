//! Acceptance criterion 9: identical flags and seed produce byte-identical
//! output for the fig and verify commands.

fn run_to_bytes(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let code = polsq_cli::run(args.iter().map(|s| s.to_string()), &mut out);
    (code, out)
}

#[test]
fn criterion_09_byte_identical_runs() {
    let fig1 = ["polsq", "fig", "1", "--points", "48", "--seed", "7"];
    let (code_a, a) = run_to_bytes(&fig1);
    let (code_b, b) = run_to_bytes(&fig1);
    assert_eq!(code_a, 0);
    assert_eq!(code_a, code_b);
    assert_eq!(a, b, "fig 1 output differs between runs");

    let fig2 = ["polsq", "fig", "2", "--points", "48", "--seed", "7"];
    let (_, a2) = run_to_bytes(&fig2);
    let (_, b2) = run_to_bytes(&fig2);
    assert_eq!(a2, b2, "fig 2 output differs between runs");
    assert_ne!(a, a2, "fig 1 and fig 2 must differ");

    let verify = ["polsq", "verify", "--samples", "5", "--seed", "11"];
    let (code_v1, v1) = run_to_bytes(&verify);
    let (code_v2, v2) = run_to_bytes(&verify);
    assert_eq!(code_v1, 0, "verify must pass");
    assert_eq!(code_v1, code_v2);
    assert_eq!(v1, v2, "verify output differs between runs");

    println!(
        "criterion 9 PASS: fig ({} bytes) and verify ({} bytes) byte-identical across runs",
        a.len(),
        v1.len()
    );
}
