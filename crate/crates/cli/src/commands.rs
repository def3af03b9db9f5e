use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wrast::ast::{ast_line_integral, ast_spectral, directional_hilbert, hilbert_eps, hilbert_spectral, hilbert_u_grid, ComplexPoint};
use wrast::checks::{run_named, run_suite, CheckReport, SuiteConfig};
use wrast::demo::generate_demo;
use wrast::radon::{radon_reconstruct, radon_sweep, rotation2, so_n_quadrature, speeds_for_band, RadonSweep, RotationQuadrature};
use wrast::wave::*;
use wrast::window::{admissibility_constant, DEFAULT_TOL};
use wrast::wrs::{self, atoms_of, solution_records, Record};
use wrast::xray::{resolution_kernel_check, ring_samples, xray_plancherel, xray_reconstruct, xray_sweep, VDesign, XRayGridField};
use wrast::{Axis, Grid, LogAxis, SampledSignal};

use crate::args::*;
use crate::io::{self, emit, fixed, floats};
use crate::Failure;

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let report = match &cli.command {
        Command::Window(WindowCmd::Info { window, dim }) => window_info(window, *dim)?,
        Command::Xray(c) => xray(c)?,
        Command::Radon(c) => radon(c)?,
        Command::Ast(c) => ast(c)?,
        Command::Wave(c) => wave(c)?,
        Command::Check(a) => return check(a, cli.no_timing),
        Command::Demo(a) => demo(a)?,
    };
    if let Some(r) = report {
        emit(cli.json, &r);
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn complex(c: C64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

fn band(s: &str) -> Result<(f64, f64), Failure> {
    let [lo, hi] = fixed::<2>("band", s)?;
    Ok((lo, hi))
}

fn point(what: &str, s: &str) -> Result<EuclideanPoint, Failure> {
    let [x, t] = fixed::<2>(what, s)?;
    Ok(EuclideanPoint::new(x, t))
}

// ---------------------------------------------------------------- window

fn window_info(spec: &str, dim: usize) -> Result<Option<Value>, Failure> {
    let h = io::window(spec, 1)?;
    let rep = admissibility_constant(&h, DEFAULT_TOL)?.for_dimension(dim);
    Ok(Some(to_json(&rep)))
}

// ------------------------------------------------------------------ xray

#[derive(Debug, Serialize, Deserialize)]
struct XrayDesignHeader {
    n: usize,
    radii: LogAxis,
    angles: usize,
    angle_offset: f64,
}

fn v_design(h: &wrast::Window, n: usize, d: &DesignArgs) -> Result<VDesign, Failure> {
    let base = VDesign::for_band(h, n, band(&d.band)?, d.radii, d.angles)?;
    Ok(VDesign::polar(n, base.radii, d.angles, d.offset)?)
}

fn xray(c: &XrayCmd) -> Result<Option<Value>, Failure> {
    match c {
        XrayCmd::Forward { signal, window, design, out } => {
            let f = io::read_signal(signal)?;
            let h = io::window(window, 1)?;
            let d = v_design(&h, f.ndim(), design)?;
            let field = xray_sweep(&f, &h, &d)?;
            let header = to_json(&XrayDesignHeader {
                n: d.n,
                radii: d.radii,
                angles: d.angles,
                angle_offset: d.angle_offset,
            });
            let recs: Vec<Record> = field
                .slices
                .iter()
                .zip(&d.nodes)
                .map(|(s, node)| {
                    Record::new(s.grid.clone(), s.values.clone())
                        .with("v", to_json(&node.v))
                        .with("weight", node.weight)
                        .with("design", header.clone())
                        .with("window", h.label.clone())
                })
                .collect();
            wrs::write_file(out, &recs)?;
            Ok(Some(json!({ "nodes": d.len(), "radii": d.radii, "angles": d.angles, "out": out })))
        }
        XrayCmd::Reconstruct { field, window, reference, out } => {
            let recs = io::read_records(field)?;
            let first = recs.first().ok_or_else(|| Failure::usage("format", "field file holds no records"))?;
            let header: XrayDesignHeader = first
                .extra
                .get("design")
                .cloned()
                .and_then(|v| serde_json::from_value(v).ok())
                .ok_or_else(|| Failure::usage("format", "field records lack a `design` header"))?;
            let design = VDesign::polar(header.n, header.radii, header.angles, header.angle_offset)?;
            if design.len() != recs.len() {
                return Err(Failure::usage(
                    "format",
                    format!("design has {} nodes, file has {} records", design.len(), recs.len()),
                ));
            }
            let slices = recs
                .into_iter()
                .map(|r| SampledSignal::new(r.grid, r.values))
                .collect::<wrast::Result<Vec<_>>>()?;
            let reference = reference.as_deref().map(io::read_signal).transpose()?;
            let h = io::window(window, 1)?;
            let r = xray_reconstruct(&XRayGridField { design, slices }, &h, reference.as_ref())?;
            wrs::write_signal(out, &r.signal)?;
            Ok(Some(json!({ "rel_error": r.rel_error, "mean_floor": reference.as_ref().map(io::mean_floor), "out": out })))
        }
        XrayCmd::Check { signal, window, design, tol } => {
            let f = io::read_signal(signal)?;
            let h = io::window(window, 1)?;
            let d = v_design(&h, f.ndim(), design)?;
            let field = xray_sweep(&f, &h, &d)?;
            let p = xray_plancherel(&field, &h, &f)?;
            let r = xray_reconstruct(&field, &h, Some(&f))?;
            let (lo, hi) = band(&design.band)?;
            let hdev = resolution_kernel_check(&h, f.ndim(), &ring_samples(f.ndim(), lo, hi, 16, 64), &d)?.max_deviation;
            let rec = r.rel_error.unwrap_or(f64::INFINITY);
            let pass = p.rel_error <= *tol && rec <= *tol && hdev <= *tol;
            let report = json!({
                "plancherel": p,
                "reconstruction_rel_error": rec,
                "h_deviation": hdev,
                "tol": tol,
                "pass": pass,
            });
            if pass {
                Ok(Some(report))
            } else {
                Err(Failure::numeric("xray check exceeded tolerance", report))
            }
        }
    }
}

// ----------------------------------------------------------------- radon

#[derive(Debug, Serialize, Deserialize)]
struct RadonDesignHeader {
    d: usize,
    n: usize,
    rotations: usize,
    #[serde(default)]
    offset: f64,
    speeds: LogAxis,
}

fn rotation_rule(n: usize, rotations: usize, offset: f64) -> Result<RotationQuadrature, Failure> {
    let rule = so_n_quadrature(n, rotations)?;
    match (n, offset) {
        (_, o) if o == 0.0 => Ok(rule),
        (2, o) => Ok(rule.rotated(&rotation2(2.0 * std::f64::consts::PI * o / rotations as f64))?),
        _ => Err(Failure::usage("usage", "--offset applies to SO(2) rules only")),
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn radon(c: &RadonCmd) -> Result<Option<Value>, Failure> {
    match c {
        RadonCmd::Forward { signal, window, d, n, rotations, offset, speeds, band: b, out } => {
            let f = io::read_signal(signal)?;
            if let Some(n) = n {
                if *n != f.ndim() {
                    return Err(Failure::usage("usage", format!("--n {n} but the signal is {}-d", f.ndim())));
                }
            }
            let h = io::window(window, *d)?;
            let offset = offset.unwrap_or(if f.ndim() == 2 { 0.5 } else { 0.0 });
            let rule = rotation_rule(f.ndim(), *rotations, offset)?;
            let sp = speeds_for_band(&h, band(b)?, *speeds)?;
            let sweep = radon_sweep(&f, &h, *d, &rule, &sp)?;
            let header = to_json(&RadonDesignHeader { d: *d, n: f.ndim(), rotations: *rotations, offset, speeds: sp });
            let motions = sweep.motions();
            let recs: Vec<Record> = sweep
                .slices
                .iter()
                .zip(&motions)
                .enumerate()
                .map(|(k, (s, (_, w)))| {
                    Record::new(s.grid.clone(), s.values.clone())
                        .with("rotation_index", k / sp.count)
                        .with("speed", sp.node(k % sp.count))
                        .with("weight", *w)
                        .with("design", header.clone())
                })
                .collect();
            wrs::write_file(out, &recs)?;
            let listing: Vec<Value> = motions
                .iter()
                .enumerate()
                .map(|(k, (a, w))| {
                    let rows: Vec<Vec<f64>> = (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
                    json!({ "rotation_index": k / sp.count, "speed": sp.node(k % sp.count), "matrix": rows, "weight": w })
                })
                .collect();
            let side = sidecar(out);
            let text = serde_json::to_string_pretty(&json!({ "design": header, "window": h.label, "motions": listing }))
                .map_err(|e| Failure::usage("format", e.to_string()))?;
            std::fs::write(&side, text).map_err(|e| Failure::from(wrast::Error::from(e)))?;
            Ok(Some(json!({ "motions": motions.len(), "out": out, "design": side })))
        }
        RadonCmd::Reconstruct { field, window, reference, out } => {
            let recs = io::read_records(field)?;
            let first = recs.first().ok_or_else(|| Failure::usage("format", "field file holds no records"))?;
            let header: RadonDesignHeader = first
                .extra
                .get("design")
                .cloned()
                .and_then(|v| serde_json::from_value(v).ok())
                .ok_or_else(|| Failure::usage("format", "field records lack a `design` header"))?;
            let rule = rotation_rule(header.n, header.rotations, header.offset)?;
            if rule.len() * header.speeds.count != recs.len() {
                return Err(Failure::usage(
                    "format",
                    format!("design has {} motions, file has {} records", rule.len() * header.speeds.count, recs.len()),
                ));
            }
            let slices = recs
                .into_iter()
                .map(|r| SampledSignal::new(r.grid, r.values))
                .collect::<wrast::Result<Vec<_>>>()?;
            let sweep = RadonSweep { d: header.d, rule, speeds: header.speeds, slices };
            let reference = reference.as_deref().map(io::read_signal).transpose()?;
            let h = io::window(window, header.d)?;
            let r = radon_reconstruct(&sweep, &h, reference.as_ref())?;
            wrs::write_signal(out, &r.signal)?;
            Ok(Some(json!({ "rel_error": r.rel_error, "mean_floor": reference.as_ref().map(io::mean_floor), "out": out })))
        }
    }
}

// ------------------------------------------------------------------- ast

fn point_columns(n: usize) -> Vec<String> {
    if n == 1 {
        return vec!["x".into(), "y".into()];
    }
    let mut cols: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    cols.extend((1..=n).map(|k| format!("y{k}")));
    cols
}

fn write_values(out: Option<&Path>, cols: Vec<String>, coords: Vec<Vec<f64>>, vals: &[C64], grid: Option<Grid>) -> Result<(), Failure> {
    match out {
        Some(p) if !io::is_csv(p) => {
            let grid = match grid {
                Some(g) => g,
                None => Grid::from_axis(Axis::new(vals.len(), 1.0, 0.0)?),
            };
            Ok(wrs::write_file(p, &[Record::new(grid, vals.to_vec())])?)
        }
        _ => {
            let mut header: Vec<&str> = cols.iter().map(String::as_str).collect();
            header.extend(["re", "im"]);
            let rows: Vec<Vec<f64>> = coords
                .into_iter()
                .zip(vals)
                .map(|(mut r, v)| {
                    r.extend([v.re, v.im]);
                    r
                })
                .collect();
            io::write_csv(out, &header, &rows)
        }
    }
}

fn ast(c: &AstCmd) -> Result<Option<Value>, Failure> {
    match c {
        AstCmd::Eval { signal, points, method, tau_step, tau_count, out } => {
            let f = io::read_signal(signal)?;
            io::require_file(points)?;
            let text = std::fs::read_to_string(points).map_err(|e| Failure::from(wrast::Error::from(e)))?;
            let pts: Vec<ComplexPoint> =
                serde_json::from_str(&text).map_err(|e| Failure::usage("format", format!("{}: {e}", points.display())))?;
            let vals = match method {
                AstMethod::Spectral => ast_spectral(&f, &pts)?.values,
                AstMethod::Line => {
                    if tau_count % 2 == 0 {
                        return Err(Failure::usage("usage", "--tau-count must be odd"));
                    }
                    let tau = Grid::from_axis(Axis::symmetric(*tau_count, *tau_step)?);
                    pts.iter().map(|z| ast_line_integral(&f, z, &tau)).collect::<wrast::Result<Vec<_>>>()?
                }
            };
            let coords = pts.iter().map(|p| p.x.iter().chain(&p.y).copied().collect()).collect();
            write_values(out.as_deref(), point_columns(f.ndim()), coords, &vals, None)?;
            Ok(out.as_ref().map(|o| json!({ "points": pts.len(), "out": o })))
        }
        AstCmd::Hilbert { signal, dir, method, eps, tol, out } => {
            let f = io::read_signal(signal)?;
            let y = floats("dir", dir)?;
            let g = match method {
                HilbertMethod::Spectral => hilbert_spectral(&f, &y)?,
                HilbertMethod::Pv => directional_hilbert(&f, &y, &hilbert_u_grid(&f, &y, *tol)?)?,
                HilbertMethod::Eps => hilbert_eps(&f, &y, *eps)?,
            };
            let cols: Vec<String> = if f.ndim() == 1 { vec!["x".into()] } else { (1..=f.ndim()).map(|k| format!("x{k}")).collect() };
            write_values(out.as_deref(), cols, g.grid.points(), &g.values, Some(g.grid.clone()))?;
            Ok(out.as_ref().map(|o| json!({ "out": o })))
        }
    }
}

// ------------------------------------------------------------------ wave

fn wave(c: &WaveCmd) -> Result<Option<Value>, Failure> {
    match c {
        WaveCmd::Norm { sol } => {
            let (f, _) = io::read_solution(&sol.solution, sol.s)?;
            let fc = frequency_components(&f);
            let mut report = json!({
                "s": f.s,
                "sobolev_norm_sq": f.sobolev_norm_sq(),
                "positive_frequency_norm_sq": fc.positive().sobolev_norm_sq(),
                "negative_frequency_norm_sq": fc.negative().sobolev_norm_sq(),
            });
            if f.s == 0 {
                report["boundary_norm"] = to_json(&boundary_norms(&f, &WAVE_EPS_SCHEDULE)?);
            } else {
                let d = XtDesign::for_solution(&f, 1e-6)?;
                report["pseudo_local_norm"] = to_json(&norm_via_theorem5(&f, &d, 1e-4)?);
            }
            Ok(Some(report))
        }
        WaveCmd::Ast { sol, points, out } => {
            let (f, _) = io::read_solution(&sol.solution, sol.s)?;
            let pts = points
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| point("points", s))
                .collect::<Result<Vec<_>, _>>()?;
            let vals = euclidean_ast(&f, &pts);
            let rows: Vec<Vec<f64>> = pts.iter().zip(&vals).map(|(p, v)| vec![p.x, p.t_prime, v.re, v.im]).collect();
            io::write_csv(out.as_deref(), &["x", "t_prime", "re", "im"], &rows)?;
            Ok(out.as_ref().map(|o| json!({ "points": pts.len(), "out": o })))
        }
        WaveCmd::Wavelet { s, z, plus, p_max, dp, out } => {
            let z = point("z", z)?;
            let g = Grid::from_axis(default_p_axis(*p_max, *dp)?);
            let mut e = wavelet_ez(*s, z, &g)?;
            if *plus {
                e = e.plus_only();
            }
            let recs: Vec<Record> = solution_records(&e).into_iter().map(|r| r.with("z", to_json(&z))).collect();
            wrs::write_file(out, &recs)?;
            Ok(Some(json!({ "s": s, "z": z, "norm_sq": e.sobolev_norm_sq(), "out": out })))
        }
        WaveCmd::Kernel { s, z1, z2 } => {
            let (a, b) = (point("z1", z1)?, point("z2", z2)?);
            Ok(Some(json!({ "s": s, "z1": a, "z2": b, "kernel": complex(reproducing_kernel(*s, a, b)?) })))
        }
        WaveCmd::Resolve { sol, other, tail_tol } => {
            let (f, _) = io::read_solution(&sol.solution, sol.s)?;
            let g = match other {
                Some(p) => io::read_solution(p, Some(f.s))?.0,
                None => f.clone(),
            };
            let d = XtDesign::for_solution(&f, *tail_tol)?;
            let r = resolution_identity_check(&f, &g, &d)?;
            Ok(Some(json!({
                "lhs": complex(r.lhs),
                "rhs": complex(r.rhs),
                "projector_form": complex(r.projector_form),
                "phase_space_form": complex(r.phase_space_form),
                "rel_error": r.rel_error,
                "form_spread": r.form_spread,
            })))
        }
        WaveCmd::Sl2 { sol, sigma, out } => sl2(sol, sigma, out.as_deref()),
        WaveCmd::PhaseSpace { sol, x, nu, out } => {
            let (f, _) = io::read_solution(&sol.solution, sol.s)?;
            let rows = phase_space(&f, &io::linspace("x", x)?, &io::linspace("nu", nu)?)?;
            let rows: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.x, r.nu, r.intensity]).collect();
            io::write_csv(out.as_deref(), &["x", "nu", "intensity"], &rows)?;
            Ok(out.as_ref().map(|o| json!({ "rows": rows.len(), "out": o })))
        }
    }
}

fn sl2(sol: &SolutionArgs, sigma: &str, out: Option<&Path>) -> Result<Option<Value>, Failure> {
    let [a, b, c, d] = fixed::<4>("sigma", sigma)?;
    let sigma = Sl2Element::new(a, b, c, d)?;
    let (f, recs) = io::read_solution(&sol.solution, sol.s)?;
    if f.s == 0 {
        return Err(Failure::usage("usage", "the SL(2, R) action needs s ≥ 1"));
    }
    let design = PlaneDesign::default();
    let atoms = atoms_of(&recs)?;
    let (method, before, after, valid, rows) = match &atoms {
        Some(at) => {
            let moved = Sl2Transformed::new(at, sigma);
            let vals = design.sample(&moved);
            let before = at.norm_sq();
            let after = plane_norm_sq(&design, &vals, None, at.s)?;
            (if at.kind == AtomKind::Plus { "atoms" } else { "atoms-sampled" }, before, after, 1.0, vals)
        }
        None => {
            let vals = design.sample(&f);
            let act = sl2_action(&design, &vals, &sigma, f.s)?;
            let before = plane_norm_sq(&design, &vals, Some(&act.valid), f.s)?;
            let after = plane_norm_sq(&design, &act.values, Some(&act.valid), f.s)?;
            let frac = act.valid.iter().filter(|v| **v).count() as f64 / act.valid.len() as f64;
            (if frac == 1.0 { "interpolated" } else { "interpolated-partial" }, before, after, frac, act.values)
        }
    };
    if let Some(p) = out {
        match &atoms {
            Some(at) if at.kind == AtomKind::Plus && !io::is_csv(p) => {
                let moved = transform_atoms(at, &sigma)?;
                let s = moved.to_solution(&f.p_grid)?;
                let json_atoms = to_json(&moved);
                let [plus, minus] = solution_records(&s);
                wrs::write_file(p, &[plus.with("atoms", json_atoms), minus])?;
            }
            _ => {
                let pts = design.points();
                let csv: Vec<Vec<f64>> = pts.iter().zip(&rows).map(|(z, v)| vec![z.x, z.t_prime, v.re, v.im]).collect();
                io::write_csv(Some(p), &["x", "t_prime", "re", "im"], &csv)?;
            }
        }
    }
    Ok(Some(json!({
        "method": method,
        "sigma": sigma,
        "norm_sq_before": before,
        "norm_sq_after": after,
        "rel_change": ((after - before) / before).abs(),
        "valid_fraction": valid,
    })))
}

// ----------------------------------------------------------------- check

fn check(a: &CheckArgs, no_timing: bool) -> Result<(), Failure> {
    let cfg = SuiteConfig { seed: a.seed, s: a.s };
    let mut reports: Vec<CheckReport> = match &a.name {
        Some(n) => vec![run_named(n, &cfg)?],
        None => run_suite(&a.suite, &cfg)?,
    };
    if no_timing {
        reports.iter_mut().for_each(|r| r.runtime_ms = 0);
    }
    io::print(&(serde_json::to_string_pretty(&reports).unwrap_or_default() + "\n"));
    let failing: Vec<&CheckReport> = reports.iter().filter(|r| !r.pass).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = failing.iter().map(|r| r.name.as_str()).collect();
        Err(Failure::numeric(format!("{} check(s) failed: {}", failing.len(), names.join(", ")), to_json(&failing)))
    }
}

// ------------------------------------------------------------------ demo

fn demo(a: &DemoArgs) -> Result<Option<Value>, Failure> {
    let recs = generate_demo(&a.name, a.seed)?;
    wrs::write_file(&a.out, &recs)?;
    Ok(Some(json!({ "demo": a.name, "seed": a.seed, "records": recs.len(), "out": a.out })))
}
