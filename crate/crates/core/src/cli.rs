//! Batch command-line front end.
//!
//! Every job is one command plus flags. Flags may also come from a TOML
//! file given with `--config`, whose keys are the flag names with `_` for
//! `-`; flags on the command line win.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement};
use crate::fields::{commutator_sweep, twisted_delta_identity_check, Window};
use crate::kernel::{ParamPoly, Rational};
use crate::modules::{levels_up_to, Module, ModuleDescriptor, ModuleVector};
use crate::structure::{
    automorphism_group, character_csv, character_json, character_table,
    conformal_decomposition_check, gram_matrix, singular_vectors,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("missing required `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn field(field: &str, message: impl ToString) -> Self {
        CliError::Field {
            field: field.to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bracket,
    Act,
    Basis,
    Dim,
    Character,
    Gram,
    Irrdim,
    Singular,
    Aut,
    CheckJacobi,
    CheckCommutator,
    CheckDelta,
    CheckConformal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Exact computations in the twisted Heisenberg-Virasoro algebra and its modules.
#[derive(Debug, Default, Parser)]
#[command(name = "thv", version)]
pub struct Cli {
    /// Operation to run; may instead be given as `command` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// TOML file with default values for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Twist: 1 for the untwisted algebra, t >= 2 for a twisted sector.
    #[arg(long)]
    pub t: Option<u32>,
    /// Scalar of c1 on the vacuum module.
    #[arg(long, allow_hyphen_values = true)]
    pub l1: Option<String>,
    /// Scalar of c2 on the vacuum module.
    #[arg(long, allow_hyphen_values = true)]
    pub l2: Option<String>,
    /// Scalar of c3 on the vacuum module.
    #[arg(long, allow_hyphen_values = true)]
    pub l3: Option<String>,
    /// Scalar of k1 on a twisted Verma module (default l1).
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<String>,
    /// Scalar of k3 on a twisted Verma module (default l3).
    #[arg(long, allow_hyphen_values = true)]
    pub k3: Option<String>,
    /// Lowest weight of a twisted Verma module (default h).
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// First algebra element, e.g. "L[2]" or "2*L[1] + I[1]".
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Second algebra element.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Module vector, e.g. "|I[-1]>" or "l2*|0> + |L[-2]>".
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// A single level, e.g. "3/2".
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<String>,
    /// Largest level of a sweep or table.
    #[arg(long)]
    pub max_level: Option<String>,
    /// Largest |mode index| of a sweep.
    #[arg(long)]
    pub max_mode: Option<i64>,
    /// Largest |index| for the axiom check.
    #[arg(long)]
    pub bound: Option<i64>,
    /// Power of (x1 - x2) in the delta identity.
    #[arg(long)]
    pub m: Option<u32>,
    /// Number of x2-derivatives in the delta identity.
    #[arg(long)]
    pub n: Option<u32>,
    /// Twisted delta offset k in (x2/x1)^(k/t).
    #[arg(long)]
    pub k: Option<u32>,
    /// Lower exponent bound of the delta window.
    #[arg(long, allow_hyphen_values = true)]
    pub window_min: Option<String>,
    /// Upper exponent bound of the delta window.
    #[arg(long, allow_hyphen_values = true)]
    pub window_max: Option<String>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A finished job.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    /// False when a check ran and found a failure.
    pub success: bool,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome {
            report,
            success: true,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }
}

fn take_string(table: &toml::Table, key: &str) -> Result<Option<String>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(toml::Value::String(s)) => Ok(Some(s.clone())),
        Some(toml::Value::Integer(i)) => Ok(Some(i.to_string())),
        Some(other) => Err(CliError::field(
            key,
            format!("expected a string or integer, got {other}"),
        )),
    }
}

fn take_int<T: TryFrom<i64>>(table: &toml::Table, key: &str) -> Result<Option<T>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(toml::Value::Integer(i)) => T::try_from(*i)
            .map(Some)
            .map_err(|_| CliError::field(key, format!("{i} is out of range"))),
        Some(other) => Err(CliError::field(
            key,
            format!("expected an integer, got {other}"),
        )),
    }
}

fn take_enum<T: ValueEnum>(table: &toml::Table, key: &str) -> Result<Option<T>, CliError> {
    match take_string(table, key)? {
        None => Ok(None),
        Some(s) => T::from_str(&s, true)
            .map(Some)
            .map_err(|e| CliError::field(key, e)),
    }
}

const CONFIG_KEYS: &[&str] = &[
    "command",
    "t",
    "l1",
    "l2",
    "l3",
    "k1",
    "k3",
    "h",
    "x",
    "y",
    "v",
    "level",
    "max_level",
    "max_mode",
    "bound",
    "m",
    "n",
    "k",
    "window_min",
    "window_max",
    "format",
    "out",
];

impl Cli {
    /// Fills unset flags from the TOML text `config`.
    pub fn merge_config(&mut self, config: &str) -> Result<(), CliError> {
        let table: toml::Table = config
            .parse()
            .map_err(|e: toml::de::Error| CliError::field("config", e.message()))?;
        if let Some(key) = table.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(CliError::field(key, "unknown configuration key"));
        }
        macro_rules! fill {
            ($field:ident, $take:ident) => {
                if self.$field.is_none() {
                    self.$field = $take(&table, stringify!($field))?;
                }
            };
        }
        fill!(command, take_enum);
        fill!(t, take_int);
        fill!(l1, take_string);
        fill!(l2, take_string);
        fill!(l3, take_string);
        fill!(k1, take_string);
        fill!(k3, take_string);
        fill!(h, take_string);
        fill!(x, take_string);
        fill!(y, take_string);
        fill!(v, take_string);
        fill!(level, take_string);
        fill!(max_level, take_string);
        fill!(max_mode, take_int);
        fill!(bound, take_int);
        fill!(m, take_int);
        fill!(n, take_int);
        fill!(k, take_int);
        fill!(window_min, take_string);
        fill!(window_max, take_string);
        fill!(format, take_enum);
        if self.out.is_none() {
            self.out = take_string(&table, "out")?.map(PathBuf::from);
        }
        Ok(())
    }

    fn poly(
        &self,
        field: &str,
        value: &Option<String>,
        default: &str,
    ) -> Result<ParamPoly, CliError> {
        value
            .as_deref()
            .unwrap_or(default)
            .parse()
            .map_err(|e| CliError::field(field, e))
    }

    fn rational(field: &str, value: &str) -> Result<Rational, CliError> {
        value.parse().map_err(|e| CliError::field(field, e))
    }

    fn concrete(&self, field: &str, value: &Option<String>) -> Result<Rational, CliError> {
        let text = value
            .as_deref()
            .ok_or_else(|| CliError::field(field, "a rational value is required"))?;
        Cli::rational(field, text)
    }

    fn twist(&self) -> Result<u32, CliError> {
        let t = self.t.unwrap_or(1);
        Algebra::new(t).map_err(|e| CliError::field("t", e))?;
        Ok(t)
    }

    fn descriptor(&self) -> Result<ModuleDescriptor, CliError> {
        let t = self.twist()?;
        if t == 1 {
            Ok(ModuleDescriptor::vacuum(
                self.poly("l1", &self.l1, "l1")?,
                self.poly("l2", &self.l2, "l2")?,
                self.poly("l3", &self.l3, "l3")?,
            ))
        } else {
            let k1 = self.poly("k1", self.k1.as_ref().map_or(&self.l1, |_| &self.k1), "l1")?;
            let k3 = self.poly("k3", self.k3.as_ref().map_or(&self.l3, |_| &self.k3), "l3")?;
            let h = self.poly("h", &self.h, "h")?;
            ModuleDescriptor::twisted_verma(t, k1, k3, h).map_err(|e| CliError::field("t", e))
        }
    }

    fn module(&self) -> Result<Module, CliError> {
        Ok(Module::new(self.descriptor()?))
    }

    fn level(&self, desc: &ModuleDescriptor) -> Result<Rational, CliError> {
        let text = self.level.as_deref().ok_or(CliError::Missing("level"))?;
        let level = Cli::rational("level", text)?;
        on_lattice("level", &level, desc)?;
        Ok(level)
    }

    fn max_level(&self, desc: &ModuleDescriptor, default: &str) -> Result<Rational, CliError> {
        let level = Cli::rational("max_level", self.max_level.as_deref().unwrap_or(default))?;
        on_lattice("max_level", &level, desc)?;
        Ok(level)
    }

    fn element(
        &self,
        field: &str,
        value: &Option<String>,
        alg: Algebra,
    ) -> Result<AlgebraElement, CliError> {
        let text = value
            .as_deref()
            .ok_or_else(|| CliError::field(field, "an algebra element is required"))?;
        let x: AlgebraElement = text.parse().map_err(|e| CliError::field(field, e))?;
        for (g, _) in x.terms() {
            alg.validate(g).map_err(|e| CliError::field(field, e))?;
        }
        Ok(x)
    }
}

fn on_lattice(field: &str, level: &Rational, desc: &ModuleDescriptor) -> Result<(), CliError> {
    if level.is_negative() || level.scaled(desc.twist()).is_none() {
        return Err(CliError::field(
            field,
            format!(
                "{level} is not a nonnegative multiple of {}",
                desc.level_step()
            ),
        ));
    }
    if desc.twist() == 1 && !level.is_integer() {
        return Err(CliError::field(field, format!("{level} is not an integer")));
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn unsupported(cmd: Command, format: Format) -> CliError {
    CliError::field(
        "format",
        format!(
            "{} output is not available for `{}`",
            format.to_possible_value().unwrap().get_name(),
            cmd.to_possible_value().unwrap().get_name()
        ),
    )
}

fn default_format(cmd: Command) -> Format {
    match cmd {
        Command::Bracket | Command::Act | Command::Basis => Format::Text,
        Command::Character => Format::Csv,
        _ => Format::Json,
    }
}

/// Parses `args` (program name first) and runs the job without writing
/// output.
pub fn run_args<I, T>(args: I) -> Result<(Cli, Outcome), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = cli.config.clone() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::field("config", format!("{}: {e}", path.display())))?;
        cli.merge_config(&text)?;
    }
    let outcome = run(&cli)?;
    Ok((cli, outcome))
}

/// Runs one job.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cmd = cli.command.ok_or(CliError::Missing("command"))?;
    let format = cli.format.unwrap_or(default_format(cmd));
    match cmd {
        Command::Bracket => {
            let alg = Algebra::new(cli.twist()?).map_err(|e| CliError::field("t", e))?;
            let x = cli.element("x", &cli.x, alg)?;
            let y = cli.element("y", &cli.y, alg)?;
            let z = alg
                .bracket_elem(&x, &y)
                .map_err(|e| CliError::field("x", e))?;
            Ok(Outcome::ok(match format {
                Format::Text => format!("{z}\n"),
                Format::Json => pretty(
                    &json!({"x": x.to_string(), "y": y.to_string(), "bracket": z.to_string()}),
                ),
                Format::Csv => return Err(unsupported(cmd, format)),
            }))
        }
        Command::Act => {
            let module = cli.module()?;
            let desc = module.descriptor();
            let x = cli.element("x", &cli.x, desc.algebra())?;
            let text = cli.v.as_deref().unwrap_or("|0>");
            let v = ModuleVector::parse(text, desc).map_err(|e| CliError::field("v", e))?;
            let out = module
                .act_elem(&x, &v)
                .map_err(|e| CliError::field("v", e))?;
            Ok(Outcome::ok(match format {
                Format::Text => format!("{}\n", out.to_text(desc)),
                Format::Json => pretty(&json!({
                    "module": desc.to_json(),
                    "x": x.to_string(),
                    "v": v.to_json(),
                    "result": out.to_json(),
                    "text": out.to_text(desc),
                })),
                Format::Csv => return Err(unsupported(cmd, format)),
            }))
        }
        Command::Basis => {
            let module = cli.module()?;
            let desc = module.descriptor();
            let level = cli.level(desc)?;
            let basis = module.basis_at_level(&level);
            Ok(Outcome::ok(match format {
                Format::Text => basis
                    .iter()
                    .map(|m| format!("{}\n", m.to_text(desc)))
                    .collect(),
                Format::Json => pretty(&json!({
                    "module": desc.to_json(),
                    "level": level.to_string(),
                    "basis": basis,
                    "text": basis.iter().map(|m| m.to_text(desc)).collect::<Vec<_>>(),
                })),
                Format::Csv => return Err(unsupported(cmd, format)),
            }))
        }
        Command::Dim => {
            let module = cli.module()?;
            let desc = module.descriptor();
            let levels = match &cli.level {
                Some(_) => vec![cli.level(desc)?],
                None => levels_up_to(desc, &cli.max_level(desc, "4")?),
            };
            let rows: Vec<(Rational, usize)> = levels
                .into_iter()
                .map(|l| {
                    let d = module.graded_dimension(&l);
                    (l, d)
                })
                .collect();
            Ok(Outcome::ok(match format {
                Format::Text => rows.iter().map(|(l, d)| format!("{l} {d}\n")).collect(),
                Format::Csv => {
                    let mut s = String::from("level,dim\n");
                    for (l, d) in &rows {
                        let _ = writeln!(s, "{l},{d}");
                    }
                    s
                }
                Format::Json => pretty(&json!({
                    "module": desc.to_json(),
                    "dimensions": rows.iter().map(|(l, d)| json!({"level": l.to_string(), "dim": d})).collect::<Vec<_>>(),
                })),
            }))
        }
        Command::Character => {
            let module = cli.module()?;
            let max = cli.max_level(module.descriptor(), "2")?;
            let rows = character_table(&module, &max).map_err(|e| CliError::field("module", e))?;
            Ok(Outcome::ok(match format {
                Format::Csv | Format::Text => character_csv(&rows),
                Format::Json => pretty(&json!({
                    "module": module.descriptor().to_json(),
                    "rows": character_json(&rows),
                })),
            }))
        }
        Command::Gram => {
            let module = cli.module()?;
            let desc = module.descriptor();
            let level = cli.level(desc)?;
            let g = gram_matrix(&module, &level).map_err(|e| CliError::field("level", e))?;
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&g.to_json(desc)),
                Format::Text => g
                    .entries
                    .iter()
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
                        format!("{}\n", cells.join("\t"))
                    })
                    .collect(),
                Format::Csv => return Err(unsupported(cmd, format)),
            }))
        }
        Command::Irrdim => {
            let module = cli.module()?;
            let level = cli.level(module.descriptor())?;
            let rows =
                character_table(&module, &level).map_err(|e| CliError::field("module", e))?;
            let row = rows.last().expect("level 0 is always present");
            Ok(Outcome::ok(match format {
                Format::Text => format!("{}\n", row.irr_dim),
                Format::Json => pretty(&json!({
                    "level": row.level.to_string(),
                    "irr_dim": row.irr_dim,
                    "verma_dim": row.verma_dim,
                    "nullity": row.nullity,
                })),
                Format::Csv => character_csv(std::slice::from_ref(row)),
            }))
        }
        Command::Singular => {
            let module = cli.module()?;
            let desc = module.descriptor();
            let level = cli.level(desc)?;
            let vs = singular_vectors(&module, &level).map_err(|e| CliError::field("module", e))?;
            Ok(Outcome::ok(match format {
                Format::Text => vs
                    .iter()
                    .map(|v| format!("{}\n", v.to_text(desc)))
                    .collect(),
                Format::Json => pretty(&json!({
                    "module": desc.to_json(),
                    "level": level.to_string(),
                    "singular_vectors": vs.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                    "text": vs.iter().map(|v| v.to_text(desc)).collect::<Vec<_>>(),
                })),
                Format::Csv => return Err(unsupported(cmd, format)),
            }))
        }
        Command::Aut => {
            let l2 = cli.concrete("l2", &cli.l2)?;
            let l3 = cli.concrete("l3", &cli.l3)?;
            let rep = automorphism_group(&l2, &l3).map_err(|e| CliError::field("l2", e))?;
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&rep.to_json()),
                Format::Text => format!("{}\n", rep.case),
                Format::Csv => return Err(unsupported(cmd, format)),
            }))
        }
        Command::CheckJacobi => {
            let alg = Algebra::new(cli.twist()?).map_err(|e| CliError::field("t", e))?;
            let bound = cli.bound.unwrap_or(5);
            let rep = alg
                .check_axioms(bound)
                .map_err(|e| CliError::field("bound", e))?;
            let passed = rep.passed();
            let report = json!({
                "t": alg.twist(),
                "bound": bound,
                "pairs": rep.pairs,
                "triples": rep.triples,
                "antisymmetry_failures": rep.antisymmetry_failures,
                "jacobi_failures": rep.jacobi_failures,
                "centrality_failures": rep.centrality_failures,
                "grading_failures": rep.grading_failures,
                "passed": passed,
            });
            Ok(Outcome {
                report: match format {
                    Format::Json => pretty(&report),
                    Format::Text => format!(
                        "t={} bound={} pairs={} triples={} {}\n",
                        alg.twist(),
                        bound,
                        rep.pairs,
                        rep.triples,
                        if passed { "PASS" } else { "FAIL" }
                    ),
                    Format::Csv => return Err(unsupported(cmd, format)),
                },
                success: passed,
            })
        }
        Command::CheckCommutator => {
            let module = cli.module()?;
            let desc = module.descriptor();
            let max_mode = cli.max_mode.unwrap_or(3);
            let max_level = cli.max_level(desc, "3")?;
            let rep = commutator_sweep(&module, max_mode, &max_level)
                .map_err(|e| CliError::field("module", e))?;
            let passed = rep.passed();
            let report = json!({
                "module": desc.to_json(),
                "max_mode": max_mode,
                "max_level": max_level.to_string(),
                "checked": rep.checked,
                "failures": rep.failures.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
                "passed": passed,
            });
            Ok(Outcome {
                report: match format {
                    Format::Json => pretty(&report),
                    Format::Text => format!(
                        "checked={} failures={} {}\n",
                        rep.checked,
                        rep.failures.len(),
                        if passed { "PASS" } else { "FAIL" }
                    ),
                    Format::Csv => return Err(unsupported(cmd, format)),
                },
                success: passed,
            })
        }
        Command::CheckDelta => {
            let m = cli.m.ok_or(CliError::Missing("m"))?;
            let n = cli.n.ok_or(CliError::Missing("n"))?;
            let t = cli.twist()?;
            let lo = Cli::rational("window_min", cli.window_min.as_deref().unwrap_or("-6"))?;
            let hi = Cli::rational("window_max", cli.window_max.as_deref().unwrap_or("6"))?;
            let window = Window {
                x1_min: lo.clone(),
                x1_max: hi.clone(),
                x2_min: lo,
                x2_max: hi,
            };
            let rep = twisted_delta_identity_check(m, n, &window, t, cli.k.unwrap_or(0))
                .map_err(|e| CliError::field("window_min", e))?;
            // only m > n carries a claim
            let success = rep.holds_in_window || m <= n;
            Ok(Outcome {
                report: match format {
                    Format::Json => pretty(&rep.to_json()),
                    Format::Text => {
                        format!("m={m} n={n} holds_in_window={}\n", rep.holds_in_window)
                    }
                    Format::Csv => return Err(unsupported(cmd, format)),
                },
                success,
            })
        }
        Command::CheckConformal => {
            let l1 = cli.concrete("l1", &cli.l1)?;
            let l2 = cli.concrete("l2", &cli.l2)?;
            let l3 = cli.concrete("l3", &cli.l3)?;
            let desc = ModuleDescriptor::vacuum_symbolic();
            let max_level = cli.max_level(&desc, "4")?;
            let max_mode = cli.max_mode.unwrap_or(3);
            let rep = conformal_decomposition_check(&l1, &l2, &l3, &max_level, max_mode)
                .map_err(|e| CliError::field("l3", e))?;
            Ok(Outcome {
                report: match format {
                    Format::Json => pretty(&rep.to_json()),
                    Format::Text => format!(
                        "c={} checks={} {}\n",
                        rep.central_charge,
                        rep.checks,
                        if rep.passed() { "PASS" } else { "FAIL" }
                    ),
                    Format::Csv => return Err(unsupported(cmd, format)),
                },
                success: rep.passed(),
            })
        }
    }
}

/// Runs the process: parses arguments, writes the report and returns the
/// exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Err(e) = Cli::try_parse_from(&args) {
        // help and version go to stdout with status 0; usage errors exit 2
        let _ = e.print();
        return e.exit_code();
    }
    match run_args(&args) {
        Ok((cli, outcome)) => {
            if let Some(path) = &cli.out {
                if let Err(source) = std::fs::write(path, &outcome.report) {
                    let e = CliError::Io {
                        path: path.clone(),
                        source,
                    };
                    eprintln!("error: {e}");
                    return e.exit_code();
                }
            } else {
                print!("{}", outcome.report);
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
