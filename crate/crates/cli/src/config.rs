use clap::{Args, ValueEnum};
use rebits_core::FloatFormat;
use rebits_kernels::montecarlo::McParams;
use rebits_kernels::{nbody, trapezoid, Order, Scheme};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// Skewed-vector summation.
    Sum,
    /// Skewed-vector summation over contiguous partitions.
    ParallelSum,
    /// The ill-conditioned grid under each traversal order (binary64 only).
    Grid,
    /// Euclidean norm of the skewed vector.
    Norm,
    /// Trapezoid integration of 400 (x sin x + cos x - 1).
    Trapezoid,
    /// Coulomb potential energy of random point charges.
    Nbody,
    /// Monte Carlo European call price.
    Mc,
    /// Double-double update loop (schemes dd, dd-rebits; binary64 only).
    DdWorkload,
    /// Adder verification: exhaustive for small formats, random pairs otherwise.
    VerifyAdder,
}

impl Kernel {
    pub fn name(&self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Data {
    /// First three quarters in [2^20, 2^21), the rest in [2^-6, 2^-5).
    Skewed,
    /// Blocks of 1024 large values followed by 3 * 2^20 stalling small ones.
    Blocks,
}

/// Command-line flags of `run`. Unset kernel-dependent values are filled in
/// by [`RunArgs::resolve`].
#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub kernel: Kernel,
    /// Comma-separated schemes [default: all schemes the kernel supports].
    #[arg(long)]
    pub scheme: Option<String>,
    /// f32, f64, or a small eXmY format for verify-adder
    /// [default: f32; f64 for grid and dd-workload].
    #[arg(long)]
    pub format: Option<String>,
    /// Comma-separated sizes: vector length, particle count, ...
    /// [default: 100000; nbody 1000,2000,...,8000; verify-adder 1000000 pairs].
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Data::Skewed)]
    pub data: Data,
    /// Number of blocks for `--data blocks`.
    #[arg(long, default_value_t = 4)]
    pub blocks: u64,
    /// Comma-separated partition counts for parallel-sum.
    #[arg(long, default_value = "4")]
    pub partitions: String,
    /// Worker threads for parallel-sum; never changes the output.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Traversal orders for grid, comma-separated, or `all`.
    #[arg(long, default_value = "all")]
    pub orders: String,
    #[arg(long, default_value_t = rebits_kernels::gen::GRID_ROWS)]
    pub rows: usize,
    #[arg(long, default_value_t = rebits_kernels::gen::GRID_COLS)]
    pub cols: usize,
    #[arg(long, default_value_t = trapezoid::STEPS)]
    pub steps: u64,
    #[arg(long, default_value_t = trapezoid::X_MAX)]
    pub x_max: f64,
    #[arg(long, default_value_t = trapezoid::SAMPLE_EVERY)]
    pub sample_every: u64,
    #[arg(long, default_value_t = rebits_kernels::montecarlo::PATHS)]
    pub paths: u64,
    #[arg(long, default_value_t = 100.0)]
    pub s0: f64,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
    #[arg(long, default_value_t = 0.1)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.25)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, default_value_t = rebits_kernels::ddwork::CALLS)]
    pub calls: u64,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub out: OutFormat,
    /// Output file [default: standard output].
    #[arg(long)]
    pub output: Option<String>,
}

/// Fully resolved run parameters, echoed into every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub kernel: Kernel,
    pub schemes: Vec<String>,
    pub format: String,
    pub n: Vec<u64>,
    pub seed: u64,
    pub data: Data,
    pub blocks: u64,
    pub partitions: Vec<u64>,
    pub orders: Vec<String>,
    pub rows: usize,
    pub cols: usize,
    pub steps: u64,
    pub x_max: f64,
    pub sample_every: u64,
    pub paths: u64,
    pub mc: McParams,
    pub calls: u64,
    pub out: OutFormat,
    pub output: Option<String>,
}

fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>, String> {
    text.split(',').map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad {what} `{s}`"))).collect()
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, String> {
        use Kernel::*;
        let k = self.kernel;
        let binary64_only = matches!(k, Grid | DdWorkload);
        let format = self.format.clone().unwrap_or_else(|| if binary64_only { "f64" } else { "f32" }.to_string());
        let parsed = FloatFormat::parse(&format).map_err(|e| e.to_string())?;
        let format = parsed.name();
        let wide = format == "f32" || format == "f64";
        if binary64_only && format != "f64" {
            return Err(format!("kernel {} is binary64 only; use --format f64", k.name()));
        }
        if k == VerifyAdder && !wide && parsed.width() > rebits_kernels::verify::MAX_EXHAUSTIVE_WIDTH {
            return Err(format!(
                "verify-adder takes f32, f64, or a format of at most {} bits",
                rebits_kernels::verify::MAX_EXHAUSTIVE_WIDTH
            ));
        }
        if k != VerifyAdder && !wide {
            return Err(format!("kernel {} needs --format f32 or f64", k.name()));
        }

        let default_schemes = match k {
            DdWorkload => "dd,dd-rebits,oracle".to_string(),
            VerifyAdder => "rebits".to_string(),
            _ => Scheme::all().iter().map(Scheme::to_string).collect::<Vec<_>>().join(","),
        };
        let list = self.scheme.clone().unwrap_or(default_schemes);
        let schemes = Scheme::parse_list(&list).map_err(|e| e.to_string())?;
        if schemes.is_empty() {
            return Err("--scheme is empty".into());
        }
        match k {
            DdWorkload if schemes.iter().any(|s| !matches!(s, Scheme::Dd(_) | Scheme::Oracle)) => {
                return Err("dd-workload runs only the dd, dd-rebits and oracle schemes".into())
            }
            VerifyAdder if schemes != [Scheme::Rebits(rebits_core::FoldPolicy::None)] => {
                return Err("verify-adder checks the adder itself; --scheme must be rebits".into())
            }
            _ => {}
        }

        let default_n = match k {
            Nbody => nbody::SWEEP.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            VerifyAdder => "1000000".to_string(),
            _ => "100000".to_string(),
        };
        let n = parse_u64_list(self.n.as_deref().unwrap_or(&default_n), "--n")?;
        if matches!(k, Sum | ParallelSum | Norm) && self.data == Data::Skewed && n.iter().any(|&n| n < 4) {
            return Err("the skewed vector needs --n of at least 4".into());
        }
        if k == Nbody && n.iter().any(|&n| n < 2) {
            return Err("nbody needs --n of at least 2".into());
        }
        let partitions = parse_u64_list(&self.partitions, "--partitions")?;
        if partitions.contains(&0) {
            return Err("--partitions must be at least 1".into());
        }
        let orders = Order::parse_list(&self.orders).map_err(|e| e.to_string())?;
        if self.steps == 0 || self.sample_every == 0 || self.x_max.is_nan() || self.x_max <= 0.0 {
            return Err("trapezoid needs --steps >= 1, --sample-every >= 1 and --x-max > 0".into());
        }
        let mc =
            McParams { s0: self.s0, strike: self.strike, rate: self.rate, sigma: self.sigma, maturity: self.maturity };
        mc.validate().map_err(|e| e.to_string())?;
        if self.paths == 0 {
            return Err("--paths must be at least 1".into());
        }
        if self.blocks == 0 || self.rows == 0 || self.cols == 0 {
            return Err("--blocks, --rows and --cols must be positive".into());
        }
        Ok(RunConfig {
            kernel: k,
            schemes: schemes.iter().map(Scheme::to_string).collect(),
            format,
            n,
            seed: self.seed,
            data: self.data,
            blocks: self.blocks,
            partitions,
            orders: orders.iter().map(|o| o.name().to_string()).collect(),
            rows: self.rows,
            cols: self.cols,
            steps: self.steps,
            x_max: self.x_max,
            sample_every: self.sample_every,
            paths: self.paths,
            mc,
            calls: self.calls,
            out: self.out,
            output: self.output.clone(),
        })
    }

    /// Worker threads; kept out of [`RunConfig`] because it cannot change any
    /// result.
    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
    }
}

impl RunConfig {
    pub fn schemes(&self) -> Vec<Scheme> {
        self.schemes.iter().map(|s| s.parse().expect("validated scheme")).collect()
    }

    pub fn orders(&self) -> Vec<Order> {
        self.orders.iter().map(|s| s.parse().expect("validated order")).collect()
    }
}
