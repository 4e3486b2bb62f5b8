use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use rcp_core::Tolerances;

use crate::commands;
use crate::io;

pub struct BatchOptions {
    pub jobs: Option<usize>,
    pub float: bool,
    pub tolerances: Tolerances,
    pub reports: Option<PathBuf>,
    pub timing: bool,
}

struct Row {
    instance: String,
    case: String,
    verdict: String,
    runtime_ms: Option<f64>,
}

/// Synthesizes every `*.json` file in `dir`; rows are sorted by file name and
/// failures are recorded with verdict `error` instead of aborting the run.
pub fn run(dir: &Path, options: &BatchOptions) -> Result<String, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if let Some(reports) = &options.reports {
        fs::create_dir_all(reports).map_err(|e| format!("{}: {e}", reports.display()))?;
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = options.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let pool = builder.build().map_err(|e| e.to_string())?;
    let rows: Vec<Row> = pool.install(|| files.par_iter().map(|f| process(f, options)).collect());

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["instance", "case", "verdict", "runtime_ms"])
        .map_err(|e| e.to_string())?;
    for row in rows {
        let runtime = match row.runtime_ms {
            Some(ms) if options.timing => format!("{ms:.3}"),
            _ => String::new(),
        };
        writer
            .write_record([row.instance, row.case, row.verdict, runtime])
            .map_err(|e| e.to_string())?;
    }
    let bytes = writer.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn process(path: &Path, options: &BatchOptions) -> Row {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let start = Instant::now();
    let outcome = commands::load_instance(path).and_then(|inst| {
        let mut report = commands::synthesize_report(&inst, options.float, &options.tolerances, true)?;
        report.instance = Some(name.clone());
        if !options.timing {
            report.timing_ms = None;
        }
        if let Some(dir) = &options.reports {
            let out = dir.join(&name);
            io::write_atomic(&out, &report.to_json())?;
        }
        Ok(report)
    });
    let runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok(report) => Row {
            instance: name,
            case: report.case.map(|c| c.tag.to_string()).unwrap_or_default(),
            verdict: report.verdict.as_str().to_string(),
            runtime_ms,
        },
        Err(message) => {
            eprintln!("{name}: {message}");
            Row {
                instance: name,
                case: String::new(),
                verdict: "error".to_string(),
                runtime_ms,
            }
        }
    }
}
