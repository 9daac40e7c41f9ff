//! Command-line driver.
//!
//! `autoomp <loop_file> <decl_file>` runs the pipeline and writes the
//! report to stdout and diagnostics to stderr. Exit status: 0 for a clean
//! directive, 1 when a variable needs manual synchronization, 2 when the
//! inputs could not be read or parsed.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::directive::{render_directive, render_directive_preserving_case, SchedulePolicy};
use crate::error::Error;
use crate::pipeline::{analyze, Analysis, AnalysisOptions};
use crate::report::{render_json_report, render_text_report};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_MANUAL_SYNC: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Dynamic,
    Static,
}

impl From<ScheduleArg> for SchedulePolicy {
    fn from(a: ScheduleArg) -> Self {
        match a {
            ScheduleArg::Dynamic => SchedulePolicy::Dynamic,
            ScheduleArg::Static => SchedulePolicy::Static,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "autoomp",
    about = "Generate an OpenMP parallel-do directive for a Fortran do-loop"
)]
pub struct Config {
    /// File containing exactly one free-form do-loop fragment
    pub loop_file: PathBuf,
    /// File listing the subroutine's variables (declarations or bare names)
    pub decl_file: PathBuf,
    /// Cache line size in bytes
    #[arg(long = "cache-line", default_value_t = 64)]
    pub cache_line_bytes: u32,
    /// Array element size in bytes
    #[arg(long = "element-bytes", default_value_t = 8)]
    pub element_bytes: u32,
    /// Schedule policy for the emitted clause
    #[arg(long, value_enum, default_value = "dynamic")]
    pub schedule: ScheduleArg,
    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Insert the directive into the loop file (atomic rewrite)
    #[arg(long)]
    pub in_place: bool,
    /// Emit identifiers with their original source spelling
    #[arg(long)]
    pub preserve_case: bool,
    /// Show the directive in the legacy one-reduction-per-line style
    #[arg(long)]
    pub paper_style_report: bool,
    /// Maximum physical line length of the emitted directive
    #[arg(long, default_value_t = 72)]
    pub line_width: usize,
}

impl Config {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            cache_line_bytes: self.cache_line_bytes,
            element_bytes: self.element_bytes,
            schedule_policy: self.schedule.into(),
            line_width: self.line_width,
            preserve_case: self.preserve_case,
            paper_style_report: self.paper_style_report,
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Splice the (always compilable) directive into the loop file, atomically.
fn insert_in_place(config: &Config, analysis: &Analysis, loop_text: &str) -> Result<(), Error> {
    let rendered = if config.preserve_case {
        let tokens_map = crate::pipeline::spellings_of(loop_text);
        render_directive_preserving_case(&analysis.directive, config.line_width, &tokens_map)
    } else {
        render_directive(&analysis.directive, config.line_width)
    };
    let mut directive_lines = rendered.lines();
    let end_line = directive_lines.next_back().unwrap_or_default();

    let mut out = Vec::new();
    for (i, line) in loop_text.lines().enumerate() {
        let line_no = i as u32 + 1;
        if line_no == analysis.loop_nest.start_line {
            for d in rendered.lines().take_while(|l| *l != end_line) {
                out.push(d.to_string());
            }
        }
        out.push(line.to_string());
        if line_no == analysis.loop_nest.end_line {
            out.push(end_line.to_string());
        }
    }
    let mut text = out.join("\n");
    text.push('\n');

    let parent = config
        .loop_file
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let io_err = |source: std::io::Error| Error::Io {
        path: config.loop_file.display().to_string(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.persist(&config.loop_file)
        .map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Run the pipeline per the config, writing the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run_with_io(config: &Config, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32 {
    match try_run(config, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn try_run(
    config: &Config,
    out: &mut dyn std::io::Write,
    err: &mut dyn std::io::Write,
) -> Result<i32, Error> {
    let loop_text = read(&config.loop_file)?;
    let decl_text = read(&config.decl_file)?;
    let analysis = analyze(&loop_text, &decl_text, &config.options())?;

    let rendered = match config.format {
        FormatArg::Text => render_text_report(&analysis.report),
        FormatArg::Json => render_json_report(&analysis.report),
    };
    let _ = writeln!(out, "{}", rendered.trim_end());
    for d in &analysis.report.diagnostics {
        let _ = writeln!(err, "{d}");
    }

    if config.in_place {
        insert_in_place(config, &analysis, &loop_text)?;
    }

    Ok(if analysis.needs_manual_sync() {
        EXIT_MANUAL_SYNC
    } else {
        EXIT_CLEAN
    })
}

/// Entry point for the binary.
pub fn run(config: &Config) -> i32 {
    run_with_io(config, &mut std::io::stdout(), &mut std::io::stderr())
}
