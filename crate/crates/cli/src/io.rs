use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::Value;
use wrast::wave::WaveSolution;
use wrast::wrs::{self, Record};
use wrast::{builtin_window, SampledSignal, Window};

use crate::Failure;

pub fn require_file(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::usage("missing_input", format!("input file {} does not exist", path.display())))
    }
}

pub fn read_records(path: &Path) -> Result<Vec<Record>, Failure> {
    require_file(path)?;
    Ok(wrs::read_file(path)?)
}

/// Relative error left by dropping the zero-frequency bin of `f`.
///
/// Admissible windows have ĥ(0) = 0, so the mean of a signal never reaches
/// the transform and a reconstruction cannot do better than this.
pub fn mean_floor(f: &SampledSignal) -> f64 {
    let sum: wrast::C64 = f.values.iter().sum();
    let energy: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    if energy == 0.0 {
        return 0.0;
    }
    (sum.norm_sqr() / (f.values.len() as f64 * energy)).sqrt()
}

pub fn read_signal(path: &Path) -> Result<SampledSignal, Failure> {
    require_file(path)?;
    Ok(wrs::read_signal(path)?)
}

pub fn read_solution(path: &Path, s: Option<u32>) -> Result<(WaveSolution, Vec<Record>), Failure> {
    let recs = read_records(path)?;
    let mut sol = wrs::solution_from_records(&recs, s)?;
    if let Some(s) = s {
        if s != sol.s {
            return Err(Failure::usage(
                "usage",
                format!("--s {s} disagrees with s = {} recorded in {}", sol.s, path.display()),
            ));
        }
        sol.s = s;
    }
    Ok((sol, recs))
}

/// A built-in window, `gauss-deriv-product` of dimension `dim`, or a WRS1 file.
pub fn window(spec: &str, dim: usize) -> Result<Window, Failure> {
    if spec == "gauss-deriv-product" {
        return Ok(wrast::window::gauss_deriv_product(dim));
    }
    let path = Path::new(spec);
    if path.is_file() {
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok(Window::from_samples(label, &wrs::read_signal(path)?)?);
    }
    Ok(builtin_window(spec)?)
}

pub fn floats(what: &str, s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage("usage", format!("{what}: `{t}` is not a number")))
        })
        .collect()
}

pub fn fixed<const N: usize>(what: &str, s: &str) -> Result<[f64; N], Failure> {
    let v = floats(what, s)?;
    v.try_into()
        .map_err(|v: Vec<f64>| Failure::usage("usage", format!("{what} needs {N} numbers, got {}", v.len())))
}

/// `lo,hi,count` as `count` evenly spaced values.
pub fn linspace(what: &str, s: &str) -> Result<Vec<f64>, Failure> {
    let [lo, hi, n] = fixed::<3>(what, s)?;
    if !(n >= 1.0 && n.fract() == 0.0) {
        return Err(Failure::usage("usage", format!("{what}: count must be a positive integer")));
    }
    let n = n as usize;
    Ok((0..n)
        .map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
        .collect())
}

/// Writes CSV to `out`, or to stdout when `out` is `None`.
pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<(), Failure> {
    let mut text = header.join(",");
    text.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(text, "{}", cells.join(","));
    }
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::from(wrast::Error::from(e))),
        None => {
            print(&text);
            Ok(())
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
pub fn print(text: &str) {
    let mut so = std::io::stdout().lock();
    if let Err(e) = so.write_all(text.as_bytes()).and_then(|_| so.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

pub fn is_csv(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "csv")
}

/// Prints a report: JSON with `--json`, otherwise `key: value` lines.
pub fn emit(json: bool, report: &Value) {
    let mut text = String::new();
    match report {
        _ if json => text = serde_json::to_string_pretty(report).unwrap_or_default() + "\n",
        Value::Object(m) => {
            for (k, v) in m {
                let _ = match v {
                    Value::String(s) => writeln!(text, "{k}: {s}"),
                    other => writeln!(text, "{k}: {other}"),
                };
            }
        }
        other => text = format!("{other}\n"),
    }
    print(&text);
}
