// Drive the command-line surface with the bundled scenario files.

use std::path::PathBuf;

use regional_sensors::cli::run;
use regional_sensors::{Error, Result};

pub fn run_example() -> Result<()> {
    let scenarios = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios");
    let out = std::env::temp_dir().join(format!("regional-sensors-example-{}", std::process::id()));
    let arg = |p: PathBuf| p.to_string_lossy().into_owned();
    let jobs: Vec<Vec<String>> = vec![
        vec![
            "modes".into(),
            "--scenario".into(),
            arg(scenarios.join("counterexample.json")),
        ],
        vec![
            "analyze".into(),
            "--scenario".into(),
            arg(scenarios.join("disc_pair.json")),
            "--out".into(),
            arg(out.join("disc.json")),
        ],
        vec![
            "reconstruct".into(),
            "--scenario".into(),
            arg(scenarios.join("reconstruct.json")),
            "--out".into(),
            arg(out.join("reconstruct.json")),
            "--plots".into(),
            arg(out.join("plots")),
        ],
        vec![
            "sweep".into(),
            "--scenario".into(),
            arg(scenarios.join("internal_point.json")),
            "--grid".into(),
            "3x3".into(),
            "--out".into(),
            arg(out.join("sweep.json")),
        ],
    ];
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    for job in jobs {
        let mut args = vec!["regional-sensors".to_string()];
        args.extend(job.iter().cloned());
        let code = run(&args, &mut stdout, &mut stderr);
        println!("{:<12} exit {code}", job[0]);
        if code != 0 {
            return Err(Error::Invariant(
                String::from_utf8_lossy(&stderr).into_owned(),
            ));
        }
    }
    print!("{}", String::from_utf8_lossy(&stdout));
    println!("reports written under {}", out.display());
    let _ = std::fs::remove_dir_all(&out);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("scenario files");
}
