//! Acceptance criteria 1-10, one pass/fail line each. The process exits
//! nonzero when any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};

use steer_cli::verify::{run_suite, Check, Corpus, Suite};

const SEED: u64 = 20_240_601;

fn scenes() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenes"))
}

/// Plans the two-box scene with the real binary, then re-checks every
/// waypoint and renders it.
fn binary_round_trip() -> Result<String, String> {
    let steer = env!("CARGO_BIN_EXE_steer");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("path.json");
    let scene = scenes().join("two_boxes.json");
    let status = Command::new(steer)
        .arg("plan")
        .arg("--scene")
        .arg(&scene)
        .arg("--start")
        .arg(scenes().join("two_boxes_start.json"))
        .arg("--target")
        .arg(scenes().join("two_boxes_target.json"))
        .arg("--out")
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "steer plan: {}",
            String::from_utf8_lossy(&status.stderr).trim()
        ));
    }
    let check = Command::new(steer)
        .args(["check", "--scene"])
        .arg(&scene)
        .arg("--path")
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let report: serde_json::Value =
        serde_json::from_slice(&check.stdout).map_err(|e| e.to_string())?;
    if report["all_clear"] != serde_json::Value::Bool(true)
        || report["scene_matches"] != serde_json::Value::Bool(true)
    {
        return Err("steer check flagged a waypoint".into());
    }
    let frames = dir.path().join("frames");
    let render = Command::new(steer)
        .args(["render", "--frames", "4", "--path"])
        .arg(&path)
        .arg("--scene")
        .arg(&scene)
        .arg("--out")
        .arg(&frames)
        .status()
        .map_err(|e| e.to_string())?;
    let written = std::fs::read_dir(&frames).map(|d| d.count()).unwrap_or(0);
    if !render.success() || written != 4 {
        return Err(format!("steer render wrote {written} frames"));
    }
    let waypoints = report["waypoints"].as_array().map_or(0, |w| w.len());
    Ok(format!(
        "binary: plan, check ({waypoints} waypoints clear) and render ok"
    ))
}

fn main() -> ExitCode {
    let mut checks: Vec<Check> = run_suite(Suite::All, &Corpus::full(SEED));
    if let Some(c9) = checks.iter_mut().find(|c| c.criterion == 9) {
        match binary_round_trip() {
            Ok(note) => c9.detail.push_str(&format!("; {note}")),
            Err(e) => {
                c9.pass = false;
                c9.detail.push_str(&format!("; {e}"));
            }
        }
    }
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<u8> = checks
        .iter()
        .filter(|c| !c.ok())
        .map(|c| c.criterion)
        .collect();
    println!(
        "acceptance: {}/{} criteria pass{}",
        checks.len() - failed.len(),
        checks.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
