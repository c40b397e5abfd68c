//! Behavioral tests for the command-line surface: exit codes, CSV shapes,
//! JSON schema, and sentinel tokens.

use approx::assert_abs_diff_eq;

fn run_to_string(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = polsq_cli::run(args.iter().map(|s| s.to_string()), &mut out);
    (code, String::from_utf8(out).expect("utf8 output"))
}

#[test]
fn usage_errors_exit_2() {
    let (code, _) = run_to_string(&["polsq", "fig", "3"]);
    assert_eq!(code, 2);
    let (code, _) = run_to_string(&["polsq", "fig", "1", "--points", "1"]);
    assert_eq!(code, 2);
    let (code, _) = run_to_string(&["polsq", "amplify", "--gt", "5.0"]);
    assert_eq!(code, 2);
    let (code, _) = run_to_string(&["polsq", "report", "--grid", "bogus"]);
    assert_eq!(code, 2);
    let (code, _) = run_to_string(&["polsq", "no-such-command"]);
    assert_eq!(code, 2);
    let (code, _) = run_to_string(&["polsq", "verify", "--samples", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let (code, text) = run_to_string(&["polsq", "--help"]);
    assert_eq!(code, 0);
    assert!(text.contains("report"));
    assert!(text.contains("verify"));
}

#[test]
fn measure_footer_matches_component_moments() {
    let theta = 1.1;
    let phi = 0.4;
    let theta0 = 0.6;
    let phi0 = 2.0;
    let (code, text) = run_to_string(&[
        "polsq", "measure", "--n", "5", "--theta", "1.1", "--phi", "0.4", "--theta0", "0.6",
        "--phi0", "2.0",
    ]);
    assert_eq!(code, 0);
    let mut mean = None;
    let mut variance = None;
    let mut prob_sum = 0.0;
    for line in text.lines() {
        if let Some(v) = line.strip_prefix("mean,") {
            mean = Some(v.parse::<f64>().unwrap());
        } else if let Some(v) = line.strip_prefix("variance,") {
            variance = Some(v.parse::<f64>().unwrap());
        } else if !line.starts_with('#') && !line.starts_with("outcome") {
            let (_, p) = line.split_once(',').unwrap();
            prob_sum += p.parse::<f64>().unwrap();
        }
    }
    assert_abs_diff_eq!(prob_sum, 1.0, epsilon = 1e-12);
    use polsq::polarization::{jones_from_angles, polarized_number_state, poincare_from_angles, PolarizationAngles};
    let state = polarized_number_state(5, &jones_from_angles(PolarizationAngles::new(theta, phi)));
    let dir = poincare_from_angles(PolarizationAngles::new(theta0, phi0));
    let (m, v) = polsq::stokes::component_moments(&state, &dir).unwrap();
    assert_abs_diff_eq!(mean.unwrap(), m, epsilon = 1e-10);
    assert_abs_diff_eq!(variance.unwrap(), v, epsilon = 1e-10);
}

#[test]
fn measure_single_photon_split() {
    let (code, text) = run_to_string(&[
        "polsq",
        "measure",
        "--n",
        "1",
        "--theta",
        &format!("{}", std::f64::consts::FRAC_PI_2),
    ]);
    assert_eq!(code, 0);
    let halves: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("-1,") || l.starts_with("1,"))
        .collect();
    assert_eq!(halves.len(), 2);
    for line in halves {
        let (_, p) = line.split_once(',').unwrap();
        assert_abs_diff_eq!(p.parse::<f64>().unwrap(), 0.5, epsilon = 1e-12);
    }
}

#[test]
fn fig_factors_are_nonnegative_or_inf_token() {
    let (code, text) = run_to_string(&["polsq", "fig", "1", "--points", "32"]);
    assert_eq!(code, 0);
    for line in text.lines().skip(2) {
        for field in line.split(',').skip(1) {
            if field == "inf" {
                continue;
            }
            let v: f64 = field.parse().expect("factor parses as f64");
            assert!(v >= 0.0, "negative factor {v}");
        }
    }
}

#[test]
fn report_json_shape_and_vacuum_case() {
    let (code, text) = run_to_string(&[
        "polsq", "report", "--n", "0", "--grid", "6x12", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["meta"]["schema"], "1");
    assert_eq!(doc["meta"]["command"], "report");
    let summary = &doc["report"]["summary"];
    assert_eq!(summary["squeezed"], 0);
    assert_eq!(summary["undefined"], 72);
    assert!(doc["report"]["mean_direction"].is_null());
}

#[test]
fn report_band_fully_squeezed_for_polarized_state() {
    let (code, text) = run_to_string(&[
        "polsq", "report", "--n", "8", "--theta", "1.0", "--phi", "0.7", "--grid", "20x40",
        "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    let summary = &doc["report"]["summary"];
    assert_eq!(summary["band_squeezed"], summary["band_total"]);
    assert!(summary["band_total"].as_u64().unwrap() > 0);
    // A direction exactly along m is undefined and not squeezed.
    let (code, text) = run_to_string(&[
        "polsq", "report", "--n", "8", "--theta", "0", "--phi", "0", "--grid", "2x2", "--dir",
        "1,0,0", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    let rows = doc["report"]["directions"].as_array().unwrap();
    let last = rows.last().unwrap();
    assert_eq!(last["factor"], "undefined");
    assert_eq!(last["squeezed"], false);
}

#[test]
fn verify_json_reports_pass() {
    let (code, text) = run_to_string(&[
        "polsq", "verify", "--samples", "4", "--format", "json", "--seed", "3",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["report"]["pass"], true);
    assert_eq!(doc["report"]["evolution_failures"], 0);
    let rows = doc["report"]["rows"].as_array().unwrap();
    let eq31 = rows
        .iter()
        .find(|r| r["equation"] == "eq31_s2_factor")
        .expect("eq31 row present");
    assert_eq!(eq31["verdict"], "corrected");
}

#[test]
fn amplify_csv_contains_conserved_mean() {
    let (code, text) = run_to_string(&[
        "polsq", "amplify", "--n", "8", "--theta", "1.0471975511965976", "--phi", "0", "--gt",
        "0.1", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let s1_line = text
        .lines()
        .find(|l| l.starts_with("mean_s1,"))
        .expect("mean_s1 row");
    let v: f64 = s1_line.split_once(',').unwrap().1.parse().unwrap();
    assert_abs_diff_eq!(v, 8.0 * (std::f64::consts::FRAC_PI_3).cos(), epsilon = 1e-8);
}

#[test]
fn output_file_round_trip(){
    let dir = std::env::temp_dir().join("polsq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.csv");
    let path_str = path.to_str().unwrap();
    let (code, captured) = run_to_string(&["polsq", "fig", "1", "--points", "8", "--out", path_str]);
    assert_eq!(code, 0);
    assert!(captured.is_empty(), "file output must not hit stdout");
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.starts_with("# polsq fig"));
    std::fs::remove_file(&path).ok();
}
