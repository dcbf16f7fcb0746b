use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use levygen_cli::{list_presets, run, workers_from_env, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "levygen", version, about = "Levy generator checks and tables")]
struct Args {
    /// Run configuration (TOML, one [job.<name>] table per job).
    #[arg(long, value_name = "PATH", required_unless_present = "list_presets")]
    config: Option<PathBuf>,
    /// Print presets and their parameter schemas.
    #[arg(long, conflicts_with = "config")]
    list_presets: bool,
    /// With --list-presets: print JSON.
    #[arg(long, requires = "list_presets")]
    json: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_presets {
        print!("{}", list_presets(args.json));
        return ExitCode::SUCCESS;
    }
    let path = args.config.expect("required by clap");
    let outcome = workers_from_env().and_then(|w| run(&path, w));
    match outcome {
        Ok(summary) => {
            for j in &summary.jobs {
                let worst = j.reports.iter().map(|r| r.max_error).fold(0.0, f64::max);
                match &j.error {
                    Some(e) => println!("{:<24} error  {e}", j.name),
                    None => println!(
                        "{:<24} {:<12} max_error={worst:.3e}",
                        j.name,
                        format!("{:?}", j.status).to_lowercase()
                    ),
                }
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("levygen: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
