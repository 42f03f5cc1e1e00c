//! Run an experiment from `key = value` text, as the command-line tool does.

use shapeflow::experiment::{run, ExperimentSpec};

const CONFIG: &str = "
command = bmi
k0 = square
k1 = rot-square
t_points = 0.25, 0.5, 0.75   # a coarse path
";

fn main() -> shapeflow::Result<()> {
    let spec = ExperimentSpec::parse_config(CONFIG, None)?;
    let out = run(&spec)?;
    print!("{}", out.summary);
    for a in &out.artifacts {
        println!("--- {}\n{}", a.name, a.content.lines().take(6).collect::<Vec<_>>().join("\n"));
    }
    println!("exit code {}", out.exit_code());
    Ok(())
}
