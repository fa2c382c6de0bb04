//! The `cnlql` command line: `compile`, `metrics` and `check`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::metrics::{compare, halstead_nsra, halstead_ql};
use crate::qlgen::{normalize_ql, render, RenderOptions};
use crate::registry::{builtin_crypto_profile, load_profile, Registry, RegistryError};
use crate::{compile_ir, line_col, CompileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cnlql",
    version,
    about = "Compile controlled-English queries to CodeQL"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Ql,
    Ir,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProfileArg {
    /// Attribute profile overlaid on the built-in Java cryptography profile.
    #[arg(long, env = "NSRA_PROFILE")]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile queries to CodeQL (or dump the IR).
    Compile {
        inputs: Vec<PathBuf>,
        /// Output file; a directory when several inputs are given.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        profile: ProfileArg,
        #[arg(long, value_enum, default_value = "ql")]
        emit: Emit,
        /// Text placed verbatim before the generated query.
        #[arg(long)]
        header: Option<String>,
        #[arg(long, default_value_t = 100)]
        line_width: usize,
        #[arg(long, default_value_t = 2)]
        indent: usize,
    },
    /// Halstead counts for a query compared with reference QL (default: the compiled output).
    Metrics {
        input: PathBuf,
        #[arg(long)]
        ql: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Compile each input and compare it with its golden QL after normalization.
    Check {
        inputs: Vec<PathBuf>,
        /// One golden file per input, in the same order.
        #[arg(long, num_args = 1..)]
        golden: Vec<PathBuf>,
        #[command(flatten)]
        profile: ProfileArg,
    },
}

/// A diagnostic in `file:line:col: severity: message` form.
fn diagnostic(path: &Path, text: Option<&str>, offset: usize, severity: &str, msg: &str) -> String {
    match text {
        Some(text) => {
            let (line, col) = line_col(text, offset);
            format!("{}:{line}:{col}: {severity}: {msg}", path.display())
        }
        None => format!("{}: {severity}: {msg}", path.display()),
    }
}

fn compile_diagnostic(path: &Path, text: &str, err: &CompileError) -> String {
    diagnostic(
        path,
        Some(text),
        err.span().start,
        "error",
        &err.to_string(),
    )
}

fn load_registry(arg: &ProfileArg) -> Result<Registry, String> {
    let Some(path) = &arg.profile else {
        return Ok(builtin_crypto_profile());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| diagnostic(path, None, 0, "error", &format!("cannot read profile: {e}")))?;
    load_profile(&text).map_err(|e| match e {
        RegistryError::ConfigParse { line, message } => {
            format!("{}:{line}:1: error: {message}", path.display())
        }
        other => diagnostic(path, None, 0, "error", &other.to_string()),
    })
}

fn read_input(path: &Path) -> Result<String, String> {
    fs::read_to_string(path)
        .map_err(|e| diagnostic(path, None, 0, "error", &format!("cannot read: {e}")))
}

/// Writes through a temporary file in the target directory, so the target is
/// either replaced whole or left untouched.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CompileOptions {
    pub emit: Emit,
    pub header: Option<String>,
    pub render: RenderOptions,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            emit: Emit::Ql,
            header: None,
            render: RenderOptions::default(),
        }
    }
}

/// Output text for one query plus any warning diagnostics.
pub fn compile_text(
    path: &Path,
    text: &str,
    reg: &Registry,
    opts: &CompileOptions,
) -> Result<(String, Vec<String>), String> {
    let compiled = compile_ir(text, reg).map_err(|e| compile_diagnostic(path, text, &e))?;
    let warnings = compiled
        .warnings
        .iter()
        .map(|(w, span)| diagnostic(path, Some(text), span.start, "warning", &w.message))
        .collect();
    let body = match opts.emit {
        Emit::Ql => render(&compiled.ir, &opts.render),
        Emit::Ir => compiled.ir.dump(),
    };
    let out = match &opts.header {
        Some(h) => format!("{h}\n{body}"),
        None => body,
    };
    Ok((out, warnings))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileStatus {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    /// Warnings and, on failure, the error diagnostic.
    pub diagnostics: Vec<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchSummary {
    pub files: Vec<FileStatus>,
}

impl BatchSummary {
    pub fn all_ok(&self) -> bool {
        self.files.iter().all(|f| f.ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BatchError {
    #[error("no input files")]
    NoInputs,
}

fn output_path(input: &Path, out_dir: Option<&Path>, emit: Emit) -> PathBuf {
    let ext = match emit {
        Emit::Ql => "ql",
        Emit::Ir => "ir",
    };
    let file = input.with_extension(ext);
    match out_dir {
        Some(dir) => dir.join(file.file_name().unwrap_or(file.as_os_str())),
        None => file,
    }
}

/// Compiles every file independently and in parallel, writing `<stem>.ql`
/// into `out_dir` or next to each input.
pub fn batch_compile(
    paths: &[PathBuf],
    out_dir: Option<&Path>,
    reg: &Registry,
    opts: &CompileOptions,
) -> Result<BatchSummary, BatchError> {
    if paths.is_empty() {
        return Err(BatchError::NoInputs);
    }
    let files = paths
        .par_iter()
        .map(|input| {
            let target = output_path(input, out_dir, opts.emit);
            let result = read_input(input)
                .and_then(|text| compile_text(input, &text, reg, opts))
                .and_then(|(out, warnings)| {
                    write_atomic(&target, &out).map(|_| warnings).map_err(|e| {
                        diagnostic(&target, None, 0, "error", &format!("cannot write: {e}"))
                    })
                });
            match result {
                Ok(diagnostics) => FileStatus {
                    input: input.clone(),
                    output: Some(target),
                    diagnostics,
                    ok: true,
                },
                Err(diag) => FileStatus {
                    input: input.clone(),
                    output: None,
                    diagnostics: vec![diag],
                    ok: false,
                },
            }
        })
        .collect();
    Ok(BatchSummary { files })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match cli.command {
        Command::Compile {
            inputs,
            output,
            profile,
            emit,
            header,
            line_width,
            indent,
        } => {
            let render = match RenderOptions::new(line_width, indent) {
                Ok(r) => r,
                Err(e) => return usage(err, &e.to_string()),
            };
            let opts = CompileOptions {
                emit,
                header,
                render,
            };
            run_compile(&inputs, output.as_deref(), &profile, &opts, out, err)
        }
        Command::Metrics {
            input,
            ql,
            json,
            profile,
        } => run_metrics(&input, ql.as_deref(), json, &profile, out, err),
        Command::Check {
            inputs,
            golden,
            profile,
        } => run_check(&inputs, &golden, &profile, out, err),
    }
}

fn usage(err: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(err, "cnlql: usage error: {msg}");
    EXIT_USAGE
}

fn fail(err: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(err, "{msg}");
    EXIT_FAIL
}

fn run_compile(
    inputs: &[PathBuf],
    output: Option<&Path>,
    profile: &ProfileArg,
    opts: &CompileOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if inputs.is_empty() {
        return usage(err, "compile needs at least one input file");
    }
    let reg = match load_registry(profile) {
        Ok(reg) => reg,
        Err(diag) => return fail(err, &diag),
    };
    if let [input] = inputs {
        if output.is_none_or(|o| !o.is_dir()) {
            let text = match read_input(input) {
                Ok(t) => t,
                Err(diag) => return fail(err, &diag),
            };
            let (result, warnings) = match compile_text(input, &text, &reg, opts) {
                Ok(r) => r,
                Err(diag) => return fail(err, &diag),
            };
            for w in warnings {
                let _ = writeln!(err, "{w}");
            }
            return match output {
                Some(path) => match write_atomic(path, &result) {
                    Ok(()) => EXIT_OK,
                    Err(e) => fail(
                        err,
                        &diagnostic(path, None, 0, "error", &format!("cannot write: {e}")),
                    ),
                },
                None => {
                    let _ = out.write_all(result.as_bytes());
                    EXIT_OK
                }
            };
        }
    }
    if let Some(dir) = output {
        if let Err(e) = fs::create_dir_all(dir) {
            return fail(
                err,
                &diagnostic(dir, None, 0, "error", &format!("cannot create: {e}")),
            );
        }
    }
    let summary = match batch_compile(inputs, output, &reg, opts) {
        Ok(s) => s,
        Err(e) => return usage(err, &e.to_string()),
    };
    for file in &summary.files {
        for d in &file.diagnostics {
            let _ = writeln!(err, "{d}");
        }
        let status = match &file.output {
            Some(o) if file.ok => format!("ok -> {}", o.display()),
            _ => "failed".to_string(),
        };
        let _ = writeln!(out, "{}: {status}", file.input.display());
    }
    if summary.all_ok() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn run_metrics(
    input: &Path,
    ql: Option<&Path>,
    json: bool,
    profile: &ProfileArg,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(diag) => return fail(err, &diag),
    };
    let nsra = match halstead_nsra(&text) {
        Ok(c) => c,
        Err(e) => {
            let offset = match &e {
                crate::metrics::MetricsError::Parse(p) => p.span().start,
                _ => 0,
            };
            return fail(
                err,
                &diagnostic(input, Some(&text), offset, "error", &e.to_string()),
            );
        }
    };
    let (ql_name, ql_text) = match ql {
        Some(path) => match read_input(path) {
            Ok(t) => (path.display().to_string(), t),
            Err(diag) => return fail(err, &diag),
        },
        None => {
            let reg = match load_registry(profile) {
                Ok(reg) => reg,
                Err(diag) => return fail(err, &diag),
            };
            match compile_text(input, &text, &reg, &CompileOptions::default()) {
                Ok((ql, _)) => ("(generated)".to_string(), ql),
                Err(diag) => return fail(err, &diag),
            }
        }
    };
    let qlc = match halstead_ql(&ql_text) {
        Ok(c) => c,
        Err(e) => return fail(err, &format!("{ql_name}: error: {e}")),
    };
    let row = match compare(&nsra, &qlc) {
        Ok(r) => r,
        Err(e) => return fail(err, &format!("{ql_name}: error: {e}")),
    };
    if json {
        let report = serde_json::json!({
            "input": input.display().to_string(),
            "ql": ql_name,
            "nsra": nsra,
            "codeql": qlc,
            "comparison": row,
        });
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).unwrap_or_default()
        );
    } else {
        let _ = writeln!(
            out,
            "{:<10} {:>10} {:>8} {:>12} {:>10}",
            "", "vocabulary", "length", "effort", "time (s)"
        );
        for (name, c) in [("nsra", &nsra), ("codeql", &qlc)] {
            let _ = writeln!(
                out,
                "{name:<10} {:>10} {:>8} {:>12.1} {:>10.1}",
                c.vocabulary(),
                c.length(),
                c.effort(),
                c.time()
            );
        }
        let _ = writeln!(
            out,
            "reduction: length {:.1}%, vocabulary {:.1}%",
            row.reduction_pct, row.vocab_reduction_pct
        );
    }
    EXIT_OK
}

fn run_check(
    inputs: &[PathBuf],
    golden: &[PathBuf],
    profile: &ProfileArg,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if inputs.is_empty() {
        return usage(err, "check needs at least one input file");
    }
    if inputs.len() != golden.len() {
        return usage(
            err,
            &format!(
                "{} inputs but {} --golden files",
                inputs.len(),
                golden.len()
            ),
        );
    }
    let reg = match load_registry(profile) {
        Ok(reg) => reg,
        Err(diag) => return fail(err, &diag),
    };
    let results: Vec<Result<(), String>> = inputs
        .par_iter()
        .zip(golden.par_iter())
        .map(|(input, gold)| {
            let text = read_input(input)?;
            let (ql, _) = compile_text(input, &text, &reg, &CompileOptions::default())?;
            let expected = read_input(gold)?;
            let (a, b) = (normalize_ql(&ql), normalize_ql(&expected));
            if a == b {
                return Ok(());
            }
            let (line, got, want) = a
                .lines()
                .zip(b.lines())
                .enumerate()
                .find(|(_, (x, y))| x != y)
                .map(|(i, (x, y))| (i + 1, x.to_string(), y.to_string()))
                .unwrap_or((a.lines().count().min(b.lines().count()) + 1, String::new(), String::new()));
            Err(format!(
                "{}: error: normalized output differs from {} at line {line}\n  got:      {got}\n  expected: {want}",
                input.display(),
                gold.display()
            ))
        })
        .collect();
    let mut code = EXIT_OK;
    for (input, result) in inputs.iter().zip(results) {
        match result {
            Ok(()) => {
                let _ = writeln!(out, "{}: ok", input.display());
            }
            Err(diag) => {
                let _ = writeln!(err, "{diag}");
                let _ = writeln!(out, "{}: mismatch", input.display());
                code = EXIT_FAIL;
            }
        }
    }
    code
}
