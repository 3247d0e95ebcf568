use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qmc::engine::{self, BoundaryMode, EngineConfig, SweepRow};
use qmc::formula::{parse_formula, parse_path, ParseError};
use qmc::io::{self, EngineKind, IoError, ResultDocument};
use qmc::oracle::{self, OracleConfig};
use qmc::{QDtmc, Tri};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ENGINE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qmc",
    version,
    about = "Model checker for Markov chains with true/false/unknown labels",
    after_help = "MODEL is a .qdtmc file or fixture:<name> for a built-in example (m1..m5)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file and report every problem found.
    Validate { model: String },
    /// Evaluate a state formula.
    Check {
        model: String,
        #[arg(short, long)]
        formula: String,
        #[arg(long, value_enum, default_value = "qmc")]
        engine: Engine,
        #[arg(long, value_enum, default_value = "spec")]
        mode: Mode,
        /// Print the verdict at every state.
        #[arg(long)]
        all_states: bool,
        /// Print a JSON result document with evidence measures.
        #[arg(long)]
        json: bool,
        /// Path length explored by the oracle for unbounded until.
        #[arg(long, default_value_t = 64)]
        horizon: usize,
        /// Exit with 10, 11 or 12 for a T, F or ? verdict.
        #[arg(long)]
        verdict_exit: bool,
    },
    /// Check P>=theta [path] at the initial state for a range of thetas.
    Sweep {
        model: String,
        #[arg(long)]
        path: String,
        /// Either start:end:step or a comma-separated list.
        #[arg(long)]
        thetas: String,
        #[arg(long, value_enum, default_value = "spec")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "qmc")]
        engine: Engine,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write the lower (unknown as false) or upper (unknown as true) projection.
    Project {
        model: String,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List or export the built-in example models.
    Fixtures {
        #[arg(long, conflicts_with = "emit")]
        list: bool,
        #[arg(long, value_name = "NAME")]
        emit: Option<String>,
        /// Directory to write the emitted model into.
        #[arg(short, long, requires = "emit")]
        output: Option<PathBuf>,
    },
    /// Render the state graph in Graphviz format.
    ExportDot {
        model: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Qmc,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Spec,
    StrictF,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Lower,
    Upper,
}

impl From<Mode> for BoundaryMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Spec => BoundaryMode::Spec,
            Mode::StrictF => BoundaryMode::StrictF,
        }
    }
}

impl From<Engine> for EngineKind {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Qmc => EngineKind::Qmc,
            Engine::Oracle => EngineKind::Oracle,
        }
    }
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn engine(message: impl ToString) -> Self {
        Failure {
            code: EXIT_ENGINE,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate { model } => validate(&model),
        Command::Check {
            model,
            formula,
            engine,
            mode,
            all_states,
            json,
            horizon,
            verdict_exit,
        } => {
            let m = load_model(&model)?;
            let f = parse_formula(&formula).map_err(|e| formula_error(&formula, &e))?;
            let mode = BoundaryMode::from(mode);
            let (doc, per_state) = match engine {
                Engine::Qmc => {
                    let v = engine::check_all_states(&m, &f, &EngineConfig::with_boundary(mode))
                        .map_err(Failure::engine)?;
                    (
                        ResultDocument::from_qmc(&formula, mode, &v, all_states),
                        v.per_state,
                    )
                }
                Engine::Oracle => {
                    let cfg = oracle_config(mode, horizon);
                    let v = oracle::check_direct(&m, &f, &cfg).map_err(Failure::engine)?;
                    (
                        ResultDocument::from_oracle(&formula, mode, &v, all_states),
                        v.per_state,
                    )
                }
            };
            let verdict = per_state[m.init()];
            if json {
                println!("{}", doc.to_json());
            } else {
                println!("{verdict}");
                if all_states {
                    println!("state verdict");
                    for (s, v) in per_state.iter().enumerate() {
                        println!("{s} {v}");
                    }
                }
            }
            Ok(if verdict_exit {
                match verdict {
                    Tri::T => 10,
                    Tri::F => 11,
                    Tri::U => 12,
                }
            } else {
                0
            })
        }
        Command::Sweep {
            model,
            path,
            thetas,
            mode,
            engine,
            horizon,
            csv,
            json,
        } => {
            let m = load_model(&model)?;
            let psi = parse_path(&path).map_err(|e| formula_error(&path, &e))?;
            let thetas = parse_thetas(&thetas).map_err(Failure::usage)?;
            let mode = BoundaryMode::from(mode);
            let rows: Vec<SweepRow> = match engine {
                Engine::Qmc => {
                    engine::sweep_theta(&m, &psi, &thetas, &EngineConfig::with_boundary(mode))
                        .map_err(Failure::engine)?
                }
                Engine::Oracle => {
                    oracle::sweep_theta(&m, &psi, &thetas, &oracle_config(mode, horizon))
                        .map_err(Failure::engine)?
                }
            };
            if json {
                let doc = ResultDocument::from_sweep(&path, engine.into(), mode, m.init(), &rows);
                println!("{}", doc.to_json());
            } else if csv {
                print!("{}", io::sweep_csv(&rows));
            } else {
                let verdicts: Vec<String> = rows.iter().map(|r| r.verdict.to_string()).collect();
                println!("{}", verdicts.join(","));
            }
            Ok(0)
        }
        Command::Project {
            model,
            direction,
            output,
        } => {
            let m = load_model(&model)?;
            let projected = match direction {
                Direction::Lower => qmc::project_lower(&m),
                Direction::Upper => qmc::project_upper(&m),
            };
            let text = io::render_model(&projected.map_labels(|&b| Tri::from_bool(b)));
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::Fixtures {
            list,
            emit: name,
            output,
        } => {
            match name {
                Some(name) => {
                    let text = io::fixture_source(&name).ok_or_else(|| {
                        Failure::usage(IoError::UnknownFixture(name.clone()).to_string())
                    })?;
                    match output {
                        Some(dir) => {
                            fs::create_dir_all(&dir).map_err(|e| write_error(&dir, e))?;
                            emit(text, Some(&dir.join(format!("{name}.qdtmc"))))?;
                        }
                        None => print!("{text}"),
                    }
                }
                None => {
                    // listing is also the default
                    let _ = list;
                    for name in io::FIXTURE_NAMES {
                        println!("{name}  {}", io::fixture_description(name).unwrap_or(""));
                    }
                }
            }
            Ok(0)
        }
        Command::ExportDot { model, output } => {
            let m = load_model(&model)?;
            emit(&io::render_dot(&m), output.as_deref())?;
            Ok(0)
        }
    }
}

fn validate(source: &str) -> Result<u8, Failure> {
    let m = match source.strip_prefix("fixture:") {
        Some(name) => io::fixture(name).map_err(|e| Failure::usage(e.to_string()))?,
        None => io::parse_model_unvalidated(&read_file(source)?)?,
    };
    let report = m.validate();
    if report.is_empty() {
        println!(
            "valid: {} states, {} propositions, {} transitions",
            m.num_states(),
            m.aps().len(),
            m.num_transitions()
        );
        Ok(0)
    } else {
        println!("invalid:");
        for v in &report {
            println!("  {v}");
        }
        Ok(EXIT_INPUT)
    }
}

fn load_model(source: &str) -> Result<QDtmc, Failure> {
    match source.strip_prefix("fixture:") {
        Some(name) => io::fixture(name).map_err(|e| Failure::usage(e.to_string())),
        None => Ok(io::parse_model(&read_file(source)?)?),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {path}: {e}")))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| write_error(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::input(format!("cannot write {}: {e}", path.display()))
}

fn oracle_config(mode: BoundaryMode, horizon: usize) -> OracleConfig {
    OracleConfig {
        horizon,
        ..OracleConfig::with_boundary(mode)
    }
}

/// Formats a parse error with the input and a caret under the offending
/// position.
fn formula_error(text: &str, e: &ParseError) -> Failure {
    let col = text[..e.offset().min(text.len())].chars().count();
    Failure::input(format!("{e}\n  {text}\n  {}^", " ".repeat(col)))
}

fn parse_thetas(spec: &str) -> Result<Vec<f64>, String> {
    let number = |s: &str| -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("invalid theta {s:?}"))
    };
    let thetas = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, end, step] = parts[..] else {
            return Err(format!(
                "theta range {spec:?} must have the form start:end:step"
            ));
        };
        let (start, end, step) = (number(start)?, number(end)?, number(step)?);
        if step <= 0.0 {
            return Err(format!("theta step must be positive, got {step}"));
        }
        if end < start {
            return Err(format!("theta range {spec:?} is empty"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        // rounding keeps 0.1:0.9:0.1 printing as 0.3 rather than 0.30000000000000004
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if let Some(bad) = thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(format!("theta {bad} is outside [0, 1]"));
    }
    Ok(thetas)
}

#[cfg(test)]
mod tests {
    use super::parse_thetas;

    #[test]
    fn theta_grids() {
        assert_eq!(
            parse_thetas("0.1:0.9:0.1").unwrap(),
            vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        );
        assert_eq!(parse_thetas("0.25, 0.5").unwrap(), vec![0.25, 0.5]);
        assert_eq!(parse_thetas("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_thetas("0.1:0.9").is_err());
        assert!(parse_thetas("0.1:0.9:0").is_err());
        assert!(parse_thetas("0.5,1.5").is_err());
        assert!(parse_thetas("a").is_err());
    }
}
