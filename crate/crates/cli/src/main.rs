use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use wavedens_cli::cli::{parse_config, Command, ParseFailure};
use wavedens_cli::config::ExperimentConfig;
use wavedens_cli::{experiments, output, selftest, UsageError};

fn main() -> ExitCode {
    let (command, cfg) = match parse_config(std::env::args_os()) {
        Ok(parsed) => parsed,
        Err(ParseFailure::Clap(e)) => e.exit(),
        Err(ParseFailure::Usage(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = match experiments::thread_pool() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| dispatch(command, cfg)) {
        Ok(code) => code,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn announce(paths: &[impl AsRef<Path>]) {
    for p in paths {
        println!("wrote {}", p.as_ref().display());
    }
}

fn dispatch(command: Command, cfg: Option<ExperimentConfig>) -> Result<ExitCode> {
    let cfg = cfg.unwrap_or_default();
    match command {
        Command::Run(_) => {
            let run = experiments::run(&cfg)?;
            let r = &run.report;
            println!(
                "{}: mise {:.4e} sd {} selected mode {}",
                r.settings.model,
                r.mise_mean,
                fmt_sd(r.mise_sd),
                r.selected_mode()
            );
            let mut paths = output::write_report(&cfg.out, &cfg.model, r)?;
            paths.push(output::write_selection(
                &cfg.out,
                &cfg.model,
                &run.selection,
            )?);
            if let Some(curve) = &run.grid {
                paths.push(output::write_grid(&cfg.out, &cfg.model, curve)?);
            }
            announce(&paths);
        }
        Command::Table1(_) => {
            let reports = experiments::table1(&cfg)?;
            println!("model  mise        sd          selected mode");
            for r in &reports {
                println!(
                    "{:<6} {:.4e}  {:<10}  {}",
                    r.settings.model,
                    r.mise_mean,
                    fmt_sd(r.mise_sd),
                    r.selected_mode()
                );
            }
            announce(&output::write_table1(&cfg.out, &reports)?);
        }
        Command::Figures(_) => {
            for fig in experiments::figures(&cfg)? {
                println!("{}: mise {:.4e}", fig.model, fig.report.mise_mean);
                announce(&output::write_figure(&cfg.out, &fig)?);
            }
        }
        Command::Rates { n_list, .. } => {
            let rates = experiments::rates(&cfg, &n_list)?;
            for r in &rates.reports {
                println!("n={:<6} mise {:.4e}", r.settings.n, r.mise_mean);
            }
            println!("log-log slope {:.3}", rates.slope);
            announce(&output::write_rates(&cfg.out, &cfg.model, &rates)?);
        }
        Command::Selftest => {
            let checks = selftest::run_all();
            for c in &checks {
                println!(
                    "{} {:<16} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_sd(sd: Option<f64>) -> String {
    sd.map_or_else(|| "n/a".to_string(), |s| format!("{s:.4e}"))
}
