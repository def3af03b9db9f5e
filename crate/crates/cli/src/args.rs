use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wrast", version, about = "Windowed X-ray/Radon transforms, analytic-signal transform and wave wavelets")]
pub struct Cli {
    /// Print reports as JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// JSON or TOML file of option defaults; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Report `runtime_ms` as 0 so that outputs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Window admissibility.
    #[command(subcommand)]
    Window(WindowCmd),
    /// Windowed X-ray transform.
    #[command(subcommand)]
    Xray(XrayCmd),
    /// Windowed Radon transform over rigid motions.
    #[command(subcommand)]
    Radon(RadonCmd),
    /// Analytic-signal transform and Hilbert transforms.
    #[command(subcommand)]
    Ast(AstCmd),
    /// 1+1D wave solutions and their wavelets.
    #[command(subcommand)]
    Wave(WaveCmd),
    /// Run the identity checks and print a JSON array of reports.
    Check(CheckArgs),
    /// Write a deterministic demo signal or solution.
    Demo(DemoArgs),
}

#[derive(Debug, Subcommand)]
pub enum WindowCmd {
    /// Print c_h, admissibility and N.
    Info {
        /// Built-in name or a WRS1 file of time samples.
        window: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Frequency band `lo,hi` the design must resolve.
    #[arg(long, default_value = "0.5,4")]
    pub band: String,
    #[arg(long, default_value_t = 48)]
    pub radii: usize,
    #[arg(long, default_value_t = 32)]
    pub angles: usize,
    /// Angular offset of the direction rule, in steps.
    #[arg(long, default_value_t = 0.5)]
    pub offset: f64,
}

#[derive(Debug, Subcommand)]
pub enum XrayCmd {
    /// Sweep a signal over a velocity design.
    Forward {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value = "gauss-deriv-1")]
        window: String,
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Invert a field written by `xray forward`.
    Reconstruct {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value = "gauss-deriv-1")]
        window: String,
        /// Signal to compare against.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plancherel, reconstruction and H(p) deviation for one signal.
    Check {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value = "gauss-deriv-1")]
        window: String,
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RadonCmd {
    /// Sweep a signal over rigid motions of rank d.
    Forward {
        #[arg(long)]
        signal: PathBuf,
        /// Built-in 1-d name, `gauss-deriv-product`, or a WRS1 file.
        #[arg(long, default_value = "gauss-deriv-1")]
        window: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Ambient dimension; must match the signal.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 32)]
        rotations: usize,
        /// Rotation of the SO(2) rule, in angular steps; 0.5 when omitted.
        /// SO(3) rules are not offset.
        #[arg(long)]
        offset: Option<f64>,
        #[arg(long, default_value_t = 48)]
        speeds: usize,
        #[arg(long, default_value = "0.5,4")]
        band: String,
        /// WRS1 output; the motion design goes to `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Invert a field written by `radon forward`.
    Reconstruct {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value = "gauss-deriv-1")]
        window: String,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AstMethod {
    Spectral,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HilbertMethod {
    Spectral,
    Pv,
    Eps,
}

#[derive(Debug, Subcommand)]
pub enum AstCmd {
    /// Evaluate f̃ at complex points.
    Eval {
        #[arg(long)]
        signal: PathBuf,
        /// JSON array of `{"x": [...], "y": [...]}`.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = AstMethod::Spectral)]
        method: AstMethod,
        /// τ step of the line-integral route.
        #[arg(long, default_value_t = 0.05)]
        tau_step: f64,
        /// Odd number of τ nodes of the line-integral route.
        #[arg(long, default_value_t = 321)]
        tau_count: usize,
        /// `.csv` or `.wrs`; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Directional Hilbert transform on the signal grid.
    Hilbert {
        #[arg(long)]
        signal: PathBuf,
        /// Direction, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, value_enum, default_value_t = HilbertMethod::Spectral)]
        method: HilbertMethod,
        /// Offset of the ε-limit route.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Truncation tolerance of the principal-value route.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SolutionArgs {
    /// WRS1 file with `component: plus|minus` records.
    #[arg(long)]
    pub solution: PathBuf,
    /// Sobolev degree, when the file does not record it.
    #[arg(long)]
    pub s: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum WaveCmd {
    /// Spectral Sobolev norm and its pseudo-local forms.
    Norm {
        #[command(flatten)]
        sol: SolutionArgs,
    },
    /// f̃ at Euclidean points `x + it′`.
    Ast {
        #[command(flatten)]
        sol: SolutionArgs,
        /// Points `x,t′;x,t′;...`.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the wavelet e_z as a solution.
    Wavelet {
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// `x,t′`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Keep only the + part.
        #[arg(long)]
        plus: bool,
        #[arg(long, default_value_t = 8.0)]
        p_max: f64,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        dp: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproducing kernel K(z1, z).
    Kernel {
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, allow_hyphen_values = true)]
        z1: String,
        #[arg(long, allow_hyphen_values = true)]
        z2: String,
    },
    /// Resolution of the identity on the default (x, t′) design.
    Resolve {
        #[command(flatten)]
        sol: SolutionArgs,
        /// Second solution for the off-diagonal form.
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tail_tol: f64,
    },
    /// Apply B(σ⁻¹) for σ = [[a, b], [c, d]].
    Sl2 {
        #[command(flatten)]
        sol: SolutionArgs,
        /// `a,b,c,d` with ad − bc = 1.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// Transformed solution (atom input) or CSV samples (spectral input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of (x, ν, |f̃|²).
    PhaseSpace {
        #[command(flatten)]
        sol: SolutionArgs,
        /// `lo,hi,count`.
        #[arg(long, default_value = "-4,4,81", allow_hyphen_values = true)]
        x: String,
        /// `lo,hi,count` in cycles per unit length.
        #[arg(long, default_value = "0.02,1,50", allow_hyphen_values = true)]
        nu: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// all, window, xray, radon, ast or wave.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Run one check by name instead of a suite.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// gauss2d, bandlimited2d, wavepacket1p1 or two-wavelet.
    pub name: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}
