//! Drives the command-line front end in-process: writes a small config,
//! runs `simulate`, then lists the artifacts.

use hedgehog::cli::{main_with_args, RunConfig};

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("hedgehog_cli_example");
    let cfg = RunConfig {
        n: 256,
        r_max: 16.0,
        g0_a: 1.0,
        t_end: 2.0,
        record_every: 32,
        snapshot_times: vec![1.0],
        output_dir: dir.join("out"),
        ..Default::default()
    };
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("run.toml");
    std::fs::write(&path, cfg.to_toml())?;
    let code = main_with_args(["hedgehog", "simulate", "--config", path.to_str().expect("utf-8 path")]);
    println!("exit status {code}");
    for entry in std::fs::read_dir(dir.join("out"))? {
        let entry = entry?;
        println!("  {} ({} bytes)", entry.file_name().to_string_lossy(), entry.metadata()?.len());
    }
    Ok(())
}
