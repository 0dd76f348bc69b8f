//! Argument parsing and dispatch for the `steer` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use elastica_steer::cspace::Mode;
use serde::Serialize;

use crate::commands::*;
use crate::files::PathFile;
use crate::render::render_path;
use crate::scene::{default_scene, parse_scene, Scene};
use crate::verify::{run_suite, Corpus, Suite};

#[derive(Parser)]
#[command(
    name = "steer",
    version,
    about = "Flexible cable steering with Euler's elastica"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Planar,
    SemiSpatial,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a steering path between two configurations.
    Plan {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Membership and collision verdict for a configuration, or for every
    /// waypoint of a path.
    Check {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, required_unless_present = "path", conflicts_with = "path")]
        config: Option<PathBuf>,
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Sample the cable shape.
    Shape {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Closed-form and quadrature bending energy.
    Energy {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Gravitational over elastic energy.
    GravityRatio {
        #[arg(long, required_unless_present = "zip_tie", requires = "config")]
        scene: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Evaluate the zip-tie example at this cable length (m) instead.
        #[arg(long, conflicts_with_all = ["scene", "config"])]
        zip_tie: Option<f64>,
    },
    /// Write SVG snapshots of a planned path.
    Render {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        frames: usize,
        /// Scene to draw obstacles from; must match the path's digest.
        #[arg(long)]
        scene: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Smaller randomized corpora.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print a scene with every default parameter written out.
    Defaults {
        #[arg(long, value_enum, default_value = "planar")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.5)]
        length: f64,
    },
    /// Export the desk-scale stability survey as CSV.
    Survey {
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    writeln!(out, "{text}").map_err(|e| CliError::Output(e.to_string()))
}

fn load_scene(path: &PathBuf) -> Result<Scene, CliError> {
    Ok(parse_scene(&read_text(path)?)?)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            return write!(out, "{e}").map_err(|e| CliError::Output(e.to_string()));
        }
        Err(e) => return Err(CliError::input("E_USAGE", e.to_string())),
    };
    match cli.command {
        Command::Plan {
            scene,
            start,
            target,
            out,
        } => {
            let scene = load_scene(&scene)?;
            let a = parse_config(&scene, &read_text(&start)?)?;
            let b = parse_config(&scene, &read_text(&target)?)?;
            let file = cmd_plan(&scene, &a, &b)?;
            write_text(&out, &file.to_canonical())?;
            eprintln!(
                "{} waypoints, cost {:.6}, {} expansions, {:.3} s",
                file.configs.len(),
                file.stats.cost,
                file.stats.expansions,
                file.stats.runtime_s
            );
        }
        Command::Check {
            scene,
            config,
            path,
        } => {
            let scene = load_scene(&scene)?;
            match (config, path) {
                (Some(c), _) => print_json(
                    out,
                    &cmd_check(&scene, &parse_config(&scene, &read_text(&c)?)?),
                )?,
                (None, Some(p)) => {
                    let file = PathFile::parse(&read_text(&p)?)?;
                    print_json(out, &cmd_check_path(&scene, &file)?)?;
                }
                (None, None) => unreachable!("clap requires one of them"),
            }
        }
        Command::Shape {
            scene,
            config,
            samples,
        } => {
            let scene = load_scene(&scene)?;
            let c = parse_config(&scene, &read_text(&config)?)?;
            print_json(out, &cmd_shape(&scene, &c, samples))?;
        }
        Command::Energy { scene, config } => {
            let scene = load_scene(&scene)?;
            let c = parse_config(&scene, &read_text(&config)?)?;
            print_json(out, &cmd_energy(&scene, &c))?;
        }
        Command::GravityRatio {
            scene,
            config,
            zip_tie,
        } => match (zip_tie, scene, config) {
            (Some(length), _, _) => print_json(out, &cmd_zip_tie(length)?)?,
            (None, Some(scene), Some(config)) => {
                let scene = load_scene(&scene)?;
                let c = parse_config(&scene, &read_text(&config)?)?;
                print_json(out, &cmd_gravity_ratio(&scene.file.cable, &c))?;
            }
            _ => unreachable!("clap enforces the argument groups"),
        },
        Command::Render {
            path,
            out,
            frames,
            scene,
        } => {
            let file = PathFile::parse(&read_text(&path)?)?;
            let scene = scene.as_ref().map(load_scene).transpose()?;
            if let Some(s) = &scene {
                if s.digest() != file.scene_sha256 {
                    return Err(CliError::input(
                        "E_SCENE_MISMATCH",
                        "the scene digest differs from the path's",
                    ));
                }
            }
            let configs = file.to_configs()?;
            let length = match &scene {
                Some(s) => s.length(),
                None => file.planner.grid.axes.last().map_or(1.0, |a| a.min),
            };
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::Output(format!("{}: {e}", out.display())))?;
            let svgs = render_path(scene.as_ref(), &configs, length, frames);
            for (i, svg) in svgs.iter().enumerate() {
                write_text(&out.join(format!("frame_{i:03}.svg")), svg)?;
            }
            eprintln!("wrote {} frames to {}", svgs.len(), out.display());
        }
        Command::Verify {
            suite,
            seed,
            quick,
            json,
        } => {
            let corpus = if quick {
                Corpus::quick(seed)
            } else {
                Corpus::full(seed)
            };
            let checks = run_suite(suite, &corpus);
            if json {
                print_json(out, &checks)?;
            } else {
                for c in &checks {
                    writeln!(out, "{}", c.line()).map_err(|e| CliError::Output(e.to_string()))?;
                }
            }
            let failed: Vec<String> = checks
                .iter()
                .filter(|c| !c.ok())
                .map(|c| c.name.to_string())
                .collect();
            if !failed.is_empty() {
                return Err(CliError::Verification(failed.join(", ")));
            }
        }
        Command::Defaults { mode, length } => {
            let mode = match mode {
                ModeArg::Planar => Mode::Planar,
                ModeArg::SemiSpatial => Mode::SemiSpatial,
            };
            let text = default_scene(mode, length)?.canonical_json();
            writeln!(out, "{text}").map_err(|e| CliError::Output(e.to_string()))?;
        }
        Command::Survey { length, out } => write_text(&out, &cmd_survey_csv(length)?)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;
    use crate::files::ConfigFile;

    fn scenes() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
    }

    fn steer(args: &[&str]) -> (Result<(), CliError>, String) {
        let mut out = Vec::new();
        let argv = std::iter::once("steer").chain(args.iter().copied());
        let r = run(argv, &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    fn s(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    fn plan_two_boxes(dir: &Path) -> PathBuf {
        let out = dir.join("path.json");
        let scene = scenes().join("two_boxes.json");
        let (r, _) = steer(&[
            "plan",
            "--scene",
            s(&scene),
            "--start",
            s(&scenes().join("two_boxes_start.json")),
            "--target",
            s(&scenes().join("two_boxes_target.json")),
            "--out",
            s(&out),
        ]);
        r.unwrap();
        out
    }

    #[test]
    fn plan_then_check_every_waypoint() {
        let dir = tempfile::tempdir().unwrap();
        let path = plan_two_boxes(dir.path());
        let text = std::fs::read_to_string(&path).unwrap();
        let file = PathFile::parse(&text).unwrap();
        assert_eq!(file.to_canonical(), text, "path file is not canonical");
        assert_eq!(file.configs.len(), file.psi.len());
        let (r, out) = steer(&[
            "check",
            "--scene",
            s(&scenes().join("two_boxes.json")),
            "--path",
            s(&path),
        ]);
        r.unwrap();
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["all_clear"], true);
        assert_eq!(report["scene_matches"], true);
    }

    #[test]
    fn render_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let path = plan_two_boxes(dir.path());
        let scene = scenes().join("two_boxes.json");
        let mut runs = Vec::new();
        for name in ["a", "b"] {
            let out = dir.path().join(name);
            let (r, _) = steer(&[
                "render",
                "--path",
                s(&path),
                "--scene",
                s(&scene),
                "--out",
                s(&out),
                "--frames",
                "3",
            ]);
            r.unwrap();
            let mut files: Vec<_> = std::fs::read_dir(&out)
                .unwrap()
                .map(|e| e.unwrap().path())
                .collect();
            files.sort();
            runs.push(
                files
                    .iter()
                    .map(|f| std::fs::read(f).unwrap())
                    .collect::<Vec<_>>(),
            );
        }
        assert_eq!(runs[0].len(), 3);
        assert_eq!(runs[0], runs[1]);
        let svg = String::from_utf8(runs[0][0].clone()).unwrap();
        assert!(svg.contains("<polygon") && svg.contains("<polyline"));
    }

    #[test]
    fn render_refuses_a_different_scene() {
        let dir = tempfile::tempdir().unwrap();
        let path = plan_two_boxes(dir.path());
        let (r, _) = steer(&[
            "render",
            "--path",
            s(&path),
            "--scene",
            s(&scenes().join("two_boxes_frozen.json")),
            "--out",
            s(&dir.path().join("x")),
        ]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
    }

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn straight_cable_samples_are_collinear() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(
            dir.path(),
            "q.json",
            r#"{"x0_m": 0.1, "y0_m": -0.2, "phi_base_rad": 0.7, "k": 0.0, "s0_m": 0.1, "l_tilde_m": 0.8}"#,
        );
        let (r, out) = steer(&[
            "shape",
            "--scene",
            s(&scenes().join("two_boxes.json")),
            "--config",
            s(&cfg),
            "--samples",
            "33",
        ]);
        r.unwrap();
        let samples: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
        assert_eq!(samples.len(), 33);
        let p = |i: usize| {
            let v = &samples[i]["position_m"];
            (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
        };
        let (a, b) = (p(0), p(32));
        for i in 0..33 {
            let c = p(i);
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            assert!(cross.abs() < 1e-12);
        }
    }

    #[test]
    fn energy_report_agrees_with_quadrature() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(
            dir.path(),
            "q.json",
            r#"{"x0_m": 0, "y0_m": 0, "phi_base_rad": 0, "k": 0.7, "s0_m": 0.1, "l_tilde_m": 0.6}"#,
        );
        let (r, out) = steer(&[
            "energy",
            "--scene",
            s(&scenes().join("two_boxes.json")),
            "--config",
            s(&cfg),
        ]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let (a, b) = (
            v["J_E_J"].as_f64().unwrap(),
            v["J_E_quadrature_J"].as_f64().unwrap(),
        );
        assert!(a > 0.0 && (a - b).abs() <= 1e-8 * a);
    }

    #[test]
    fn check_reports_collisions_with_a_witness() {
        let dir = tempfile::tempdir().unwrap();
        // base inside the upper box
        let cfg = write(
            dir.path(),
            "q.json",
            r#"{"x0_m": 0, "y0_m": 0.3, "phi_base_rad": 0, "k": 0.4, "s0_m": 0, "l_tilde_m": 0.75}"#,
        );
        let (r, out) = steer(&[
            "check",
            "--scene",
            s(&scenes().join("two_boxes.json")),
            "--config",
            s(&cfg),
        ]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["colliding"], true);
        assert_eq!(v["clear"], false);
        assert_eq!(v["witness"]["obstacle"], 0);
        assert!(v["witness"]["s"].as_f64().unwrap() < 1e-3);
    }

    #[test]
    fn planar_config_in_a_spatial_scene_is_an_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let scene = dir.path().join("scene.json");
        let (r, text) = steer(&["defaults", "--mode", "semi-spatial", "--length", "0.5"]);
        r.unwrap();
        std::fs::write(&scene, text).unwrap();
        let (r, _) = steer(&[
            "energy",
            "--scene",
            s(&scene),
            "--config",
            s(&scenes().join("two_boxes_start.json")),
        ]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn defaults_round_trip_through_the_parser() {
        let (r, text) = steer(&["defaults"]);
        r.unwrap();
        let scene = parse_scene(&text).unwrap();
        assert_eq!(scene.canonical_json().trim(), text.trim());
        assert_eq!(scene.params.w, 0.88);
        assert_eq!(scene.params.angle_scale, 1.0);
    }

    #[test]
    fn exit_codes_by_failure_class() {
        let dir = tempfile::tempdir().unwrap();
        let bad = write(
            dir.path(),
            "bad.json",
            r#"{"mode": "planar", "cable": {"L_m": "long"}}"#,
        );
        let start = scenes().join("two_boxes_start.json");
        let target = scenes().join("two_boxes_target.json");
        let out = dir.path().join("p.json");
        let (r, _) = steer(&[
            "plan",
            "--scene",
            s(&bad),
            "--start",
            s(&start),
            "--target",
            s(&target),
            "--out",
            s(&out),
        ]);
        let e = r.unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(
            e.to_string().contains("E_SCHEMA") && e.to_string().contains("cable.L_m"),
            "{e}"
        );

        // a one-expansion budget cannot reach the target
        let text = std::fs::read_to_string(scenes().join("two_boxes.json"))
            .unwrap()
            .replace("\"max_expansions\": 200000", "\"max_expansions\": 1");
        let tight = write(dir.path(), "tight.json", &text);
        let (r, _) = steer(&[
            "plan",
            "--scene",
            s(&tight),
            "--start",
            s(&start),
            "--target",
            s(&target),
            "--out",
            s(&out),
        ]);
        assert_eq!(r.unwrap_err().exit_code(), 3);
        assert!(!out.exists());

        let (r, _) = steer(&["plan", "--scene"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, help) = steer(&["--help"]);
        r.unwrap();
        assert!(help.contains("verify"));
    }

    #[test]
    fn failing_suite_exits_with_four() {
        // the published gravity ratios lie outside the factor-two band
        let (r, out) = steer(&["verify", "--suite", "energy", "--quick"]);
        assert_eq!(r.unwrap_err().exit_code(), 4);
        assert!(out.contains("FAIL"));
        let (r, out) = steer(&["verify", "--suite", "constants"]);
        r.unwrap();
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn zip_tie_ratio_report() {
        let (r, out) = steer(&["gravity-ratio", "--zip-tie", "0.5"]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["ratio"].as_f64().unwrap() - 0.0375).abs() < 1e-3);
    }

    #[test]
    fn survey_csv_has_every_shape() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("survey.csv");
        let (r, _) = steer(&["survey", "--length", "1.0", "--out", s(&out)]);
        r.unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "kind,k,s0_m,l_tilde_m,x_l_m,y_l_m,J_J,bin"
        );
        assert_eq!(lines.count(), 800);
    }

    #[test]
    fn start_config_file_is_on_the_grid() {
        let scene = parse_scene(&std::fs::read_to_string(scenes().join("two_boxes.json")).unwrap())
            .unwrap();
        for name in ["two_boxes_start.json", "two_boxes_target.json"] {
            let q = ConfigFile::parse(&std::fs::read_to_string(scenes().join(name)).unwrap())
                .unwrap()
                .to_config()
                .unwrap();
            assert!(scene.params.grid.cell_of(&q).is_some(), "{name}");
        }
    }
}
