//! Command-line front end for the sweep engine.
//!
//! One subcommand, `sweep`, configured by flags or a `key = value`
//! config file (flags win). Exit codes: 0 success, 1 usage error,
//! 2 numeric or oracle failure.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::model::{ModelParams, TEMPERATURE_FLOOR};
use crate::sweep::{
    emit_plot, run_sweep, write_csv, MeasureSelection, SweepAxis, SweepRange, SweepSpec,
};

pub const USAGE: &str = "\
usage: spincorr sweep --axis <epsilon|delta|dm|temperature> --min <f> --max <f>
                      [--steps <n>] --delta <f> --epsilon <f> --dm <f> --temp <f>
                      [--measures lqu,lqfi] --out <path> [--plot <path>]
                      [--oracle-check] [--config <path>]
       spincorr sweep --preset <fig1|fig2|fig3|fig4|fig5> [--out <path>] [--plot <path>]
                      [--measures ...] [--oracle-check]

The flag for the swept parameter is forbidden; its value comes from the range.
Defaults: --steps 201, --measures lqu,lqfi, oracle check off. A config file
holds one `key = value` per line with the same keys as the flags; explicit
flags override it. Presets default to <name>.csv / <name>.svg next to the
working directory.";

#[derive(Debug, Clone, PartialEq)]
pub struct CliCommand {
    pub spec: SweepSpec,
    pub out: PathBuf,
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// The five bundled figure-style sweeps. Parameters the source figures do
/// not state are project conventions (see README).
#[rustfmt::skip]
pub fn preset_spec(name: &str) -> Option<SweepSpec> {
    let spec = |axis, min, max, steps, delta, epsilon, dm, temperature| SweepSpec {
        axis,
        range: SweepRange { min, max, steps },
        fixed: ModelParams::new(delta, epsilon, dm, temperature),
        measures: MeasureSelection::BOTH,
        oracle_check: false,
    };
    match name {
        "fig1" => Some(spec(SweepAxis::Epsilon, -10.0, 10.0, 401, 1.0, 0.0, 0.0, 0.1)),
        "fig2" => Some(spec(SweepAxis::Delta, -10.0, 10.0, 401, 0.0, 2.0, 0.0, 0.1)),
        "fig3" => Some(spec(SweepAxis::Temperature, 0.1, 5.0, 201, 2.0, 2.0, 0.0, 0.1)),
        "fig4" => Some(spec(SweepAxis::Temperature, 0.1, 5.0, 201, 2.0, 2.0, 2.0, 0.1)),
        "fig5" => Some(spec(SweepAxis::Dm, 0.0, 8.0, 161, 2.0, 2.0, 0.0, 0.5)),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

const VALUE_KEYS: [&str; 13] = [
    "axis", "min", "max", "steps", "delta", "epsilon", "dm", "temp", "measures", "out", "plot",
    "preset", "config",
];
const BOOL_KEYS: [&str; 1] = ["oracle-check"];

/// Keys fixed by a preset; giving them alongside --preset is an error.
const PRESET_OWNED_KEYS: [&str; 8] = [
    "axis", "min", "max", "steps", "delta", "epsilon", "dm", "temp",
];

type KeyValues = BTreeMap<String, String>;

/// Parses `sweep` argv (program name excluded) into a runnable command.
pub fn parse_cli(args: &[String]) -> Result<CliCommand, UsageError> {
    let Some((first, rest)) = args.split_first() else {
        return usage("missing subcommand `sweep`");
    };
    if first != "sweep" {
        return usage(format!("unknown subcommand `{first}` (expected `sweep`)"));
    }

    let mut flags = KeyValues::new();
    let mut iter = rest.iter();
    while let Some(arg) = iter.next() {
        let Some(key) = arg.strip_prefix("--") else {
            return usage(format!("unexpected argument `{arg}`"));
        };
        if BOOL_KEYS.contains(&key) {
            insert_once(&mut flags, key, "true".to_string())?;
        } else if VALUE_KEYS.contains(&key) {
            let Some(value) = iter.next() else {
                return usage(format!("flag --{key} expects a value"));
            };
            insert_once(&mut flags, key, value.clone())?;
        } else {
            return usage(format!("unknown flag --{key}"));
        }
    }

    // Config file first, explicit flags override.
    let mut merged = match flags.get("config") {
        Some(path) => read_config(path)?,
        None => KeyValues::new(),
    };
    merged.extend(flags);
    merged.remove("config");

    build_command(&merged)
}

fn insert_once(map: &mut KeyValues, key: &str, value: String) -> Result<(), UsageError> {
    if map.insert(key.to_string(), value).is_some() {
        return usage(format!("flag --{key} given more than once"));
    }
    Ok(())
}

fn read_config(path: &str) -> Result<KeyValues, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {path}: {e}")))?;
    let mut map = KeyValues::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!("{path}:{}: expected `key = value`", lineno + 1));
        };
        let key = key.trim();
        let value = value.trim();
        if key == "config" || (!VALUE_KEYS.contains(&key) && !BOOL_KEYS.contains(&key)) {
            return usage(format!("{path}:{}: unknown key `{key}`", lineno + 1));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

fn parse_number(map: &KeyValues, key: &str) -> Result<Option<f64>, UsageError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => usage(format!("--{key}: `{raw}` is not a finite number")),
        },
    }
}

fn require_number(map: &KeyValues, key: &str) -> Result<f64, UsageError> {
    parse_number(map, key)?.map_or_else(|| usage(format!("missing required flag --{key}")), Ok)
}

fn parse_measures(raw: &str) -> Result<MeasureSelection, UsageError> {
    let mut selection = MeasureSelection {
        lqu: false,
        lqfi: false,
    };
    for part in raw.split(',') {
        match part.trim() {
            "lqu" => selection.lqu = true,
            "lqfi" => selection.lqfi = true,
            other => return usage(format!("--measures: unknown measure `{other}`")),
        }
    }
    if selection.is_empty() {
        return usage("--measures: at least one of lqu,lqfi required");
    }
    Ok(selection)
}

fn build_command(map: &KeyValues) -> Result<CliCommand, UsageError> {
    let measures = match map.get("measures") {
        Some(raw) => parse_measures(raw)?,
        None => MeasureSelection::BOTH,
    };
    let oracle_check = match map.get("oracle-check").map(String::as_str) {
        None => false,
        Some("true") => true,
        Some("false") => false,
        Some(other) => return usage(format!("oracle-check: expected true/false, got `{other}`")),
    };

    if let Some(name) = map.get("preset") {
        let Some(mut spec) = preset_spec(name) else {
            return usage(format!(
                "unknown preset `{name}` (expected fig1 through fig5)"
            ));
        };
        for key in PRESET_OWNED_KEYS {
            if map.contains_key(key) {
                return usage(format!("--{key} conflicts with --preset {name}"));
            }
        }
        spec.measures = measures;
        spec.oracle_check = oracle_check;
        let out = map
            .get("out")
            .map_or_else(|| PathBuf::from(format!("{name}.csv")), PathBuf::from);
        let plot = Some(
            map.get("plot")
                .map_or_else(|| PathBuf::from(format!("{name}.svg")), PathBuf::from),
        );
        return Ok(CliCommand { spec, out, plot });
    }

    let Some(axis_raw) = map.get("axis") else {
        return usage("missing required flag --axis");
    };
    let axis: SweepAxis = axis_raw.parse().map_err(UsageError)?;

    // The swept parameter takes its values from the range.
    let axis_flag = match axis {
        SweepAxis::Epsilon => "epsilon",
        SweepAxis::Delta => "delta",
        SweepAxis::Dm => "dm",
        SweepAxis::Temperature => "temp",
    };
    if map.contains_key(axis_flag) {
        return usage(format!(
            "--{axis_flag} conflicts with --axis {axis}: the swept value comes from --min/--max"
        ));
    }

    let min = require_number(map, "min")?;
    let max = require_number(map, "max")?;
    let steps = match map.get("steps") {
        None => 201,
        Some(raw) => match raw.parse::<usize>() {
            Ok(v) => v,
            Err(_) => return usage(format!("--steps: `{raw}` is not a positive integer")),
        },
    };

    // Placeholder on the axis field; overwritten per row.
    let mut fixed = ModelParams::new(0.0, 0.0, 0.0, if min > 0.0 { min } else { 1.0 });
    if axis != SweepAxis::Delta {
        fixed.delta = require_number(map, "delta")?;
    }
    if axis != SweepAxis::Epsilon {
        fixed.epsilon = require_number(map, "epsilon")?;
    }
    if axis != SweepAxis::Dm {
        fixed.dm = require_number(map, "dm")?;
    }
    if axis != SweepAxis::Temperature {
        fixed.temperature = require_number(map, "temp")?;
        if fixed.temperature < TEMPERATURE_FLOOR {
            return usage(format!(
                "--temp: {} is below the supported floor {TEMPERATURE_FLOOR}",
                fixed.temperature
            ));
        }
    } else if min < TEMPERATURE_FLOOR {
        return usage(format!(
            "--min: temperature sweeps must start at or above the floor {TEMPERATURE_FLOOR}"
        ));
    }
    if min >= max {
        return usage(format!("--min {min} must be below --max {max}"));
    }
    if steps < 2 {
        return usage(format!("--steps: need at least 2, got {steps}"));
    }

    let Some(out) = map.get("out") else {
        return usage("missing required flag --out");
    };

    Ok(CliCommand {
        spec: SweepSpec {
            axis,
            range: SweepRange { min, max, steps },
            fixed,
            measures,
            oracle_check,
        },
        out: PathBuf::from(out),
        plot: map.get("plot").map(PathBuf::from),
    })
}

/// Runs the CLI: parse, sweep, emit. Returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        println!("{USAGE}");
        return if args.is_empty() { 1 } else { 0 };
    }
    let command = match parse_cli(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}\n\n{USAGE}");
            return 1;
        }
    };
    match execute(&command) {
        Ok(rows) => {
            println!(
                "wrote {} rows to {}{}",
                rows,
                command.out.display(),
                command
                    .plot
                    .as_ref()
                    .map(|p| format!(" and plot to {}", p.display()))
                    .unwrap_or_default()
            );
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: &CliCommand) -> Result<usize, crate::sweep::SweepError> {
    let rows = run_sweep(&command.spec)?;
    write_csv(&rows, &command.out)?;
    if let Some(plot) = &command.plot {
        emit_plot(&command.spec, &rows, plot)?;
    }
    Ok(rows.len())
}
