use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sphx_core::harness::criteria::space_quadrature;
use sphx_core::harness::tables::{beam_csv, dyadic_csv, eval_csv, exponent_csv, hessian_csv, kernel_check_csv, kernel_table, verify_csv, HPath};
use sphx_core::harness::{golden_compare, run_suite, tolerance_lookup, RunConfig, Status, Suite};
use sphx_core::rootsys::{catalog_json, space, SpaceDescriptor};
use sphx_core::spherical::QuadratureSpec;
use sphx_core::Error;

#[derive(Parser)]
#[command(name = "sphx", about = "Spherical functions, L^p exponents and projector kernels on symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the space catalog as JSON.
    Catalog,
    /// Exponent graph data for one space.
    Exponent {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one spherical function.
    Eval {
        #[arg(long)]
        space: String,
        #[arg(long)]
        t: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
        #[arg(long = "H", value_delimiter = ',', allow_hyphen_values = true)]
        h: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        quad_points: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare spherical functions with their asymptotics, envelopes or Hessians.
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        #[arg(long)]
        space: String,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
        t_ladder: Vec<f64>,
        #[arg(long = "H-path", value_enum, default_value = "regular")]
        h_path: PathKind,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<f64>>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build, check or decompose projector kernels.
    Kernel {
        #[arg(value_enum)]
        what: KernelKind,
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 80.0)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160")]
        t_ladder: Vec<f64>,
        #[arg(long = "Lambda", value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1001)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L^p norms of Gaussian beams.
    Beam {
        #[arg(long)]
        space: String,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160")]
        t_ladder: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,64")]
        p: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite from a JSON config; flags override config keys.
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        suite: Option<Suite>,
        #[arg(long, value_delimiter = ',')]
        spaces: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        t_ladder: Option<Vec<f64>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Compare a run directory against golden CSV files.
    Golden {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        golden: PathBuf,
        /// Per-column absolute tolerance, `column=value`.
        #[arg(long = "column-tol", value_parser = parse_kv)]
        column_tol: Vec<(String, f64)>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Asymptotic,
    Envelope,
    Hessian,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathKind {
    WallCrossing,
    Regular,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Build,
    Check,
    Dyadic,
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected column=value, got {s}"))?;
    Ok((k.to_string(), v.parse().map_err(|e| format!("{v}: {e}"))?))
}

fn lookup(id: &str) -> Result<SpaceDescriptor, Error> {
    let canon = sphx_core::rootsys::build_catalog().into_keys().chain(["H2xH2".to_string()]).find(|k| k.eq_ignore_ascii_case(id));
    space(canon.as_deref().unwrap_or(id)).map_err(|_| Error::Config(format!("unknown space {id}")))
}

/// Default direction: the lattice basis sum on compact spaces, the simple root in rank one (so `nu = t` on H2),
/// the unit rho direction otherwise.
fn default_direction(sp: &SpaceDescriptor) -> Vec<f64> {
    match &sp.weight_lattice_basis {
        Some(b) => (0..sp.r).map(|i| b.iter().map(|v| v[i]).sum()).collect(),
        None if sp.r == 1 => sp.roots.simple_roots()[0].coords.clone(),
        None => {
            let n = sp.roots.rho.iter().map(|x| x * x).sum::<f64>().sqrt();
            sp.roots.rho.iter().map(|x| x / n).collect()
        }
    }
}

fn out_root() -> Option<PathBuf> {
    std::env::var_os("SPHX_OUT").map(PathBuf::from)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => {
            let path = match out_root() {
                Some(root) if p.is_relative() => root.join(p),
                _ => p.to_path_buf(),
            };
            if let Some(dir) = path.parent() {
                fs::create_dir_all(dir)?;
            }
            fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn suite_config(
    config: Option<PathBuf>,
    suite: Option<Suite>,
    spaces: Option<Vec<String>>,
    t_ladder: Option<Vec<f64>>,
    seed: Option<u64>,
    workers: Option<usize>,
    output_dir: Option<PathBuf>,
) -> Result<RunConfig, Error> {
    let mut cfg = match config {
        Some(p) => RunConfig::from_json(&fs::read_to_string(&p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?)?,
        None => RunConfig::default(),
    };
    if let Some(s) = suite {
        cfg.suite = s;
    }
    if let Some(s) = spaces {
        cfg.spaces = s;
    }
    if let Some(t) = t_ladder {
        cfg.t_ladder = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(root) = out_root() {
        cfg.output_dir = root;
    }
    if let Some(o) = output_dir {
        cfg.output_dir = o;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Catalog => {
            println!("{}", catalog_json());
            Ok(true)
        }
        Cmd::Exponent { space, points, out } => {
            emit(&exponent_csv(&lookup(&space)?, points)?, out.as_deref())?;
            Ok(true)
        }
        Cmd::Eval { space, t, lambda, h, quad_points, tol, out } => {
            let sp = lookup(&space)?;
            let q = QuadratureSpec { max_points: space_quadrature(&sp).max_points, ..QuadratureSpec::new(quad_points, tol)? };
            emit(&eval_csv(&sp, t, &lambda, &h, &q)?, out.as_deref())?;
            Ok(true)
        }
        Cmd::Verify { what, space, t_ladder, h_path, lambda, report } => {
            let sp = lookup(&space)?;
            let dir = lambda.unwrap_or_else(|| default_direction(&sp));
            let path = match h_path {
                PathKind::WallCrossing => HPath::WallCrossing,
                PathKind::Regular => HPath::Regular,
            };
            let text = match what {
                VerifyKind::Asymptotic | VerifyKind::Envelope => verify_csv(&sp, &dir, &t_ladder, path, &space_quadrature(&sp))?,
                VerifyKind::Hessian => {
                    let pts = sphx_core::harness::tables::h_path(&sp, t_ladder[0], path);
                    hessian_csv(&sp, &dir, &pts, 1e-3)?
                }
            };
            emit(&text, report.as_deref())?;
            Ok(true)
        }
        Cmd::Kernel { what, space, t, t_ladder, lambda, grid_points, out } => {
            let sp = lookup(&space)?;
            let dir = lambda.unwrap_or_else(|| default_direction(&sp));
            match what {
                KernelKind::Build => {
                    emit(&kernel_table(&sp, t, &dir, grid_points)?.to_csv(), out.as_deref())?;
                    Ok(true)
                }
                KernelKind::Check => {
                    let (text, drift) = kernel_check_csv(&sp, &t_ladder, &dir)?;
                    emit(&text, out.as_deref())?;
                    Ok(drift < tolerance_lookup(&BTreeMap::new(), "c6.drift"))
                }
                KernelKind::Dyadic => {
                    emit(&dyadic_csv(&sp, t, &dir)?, out.as_deref())?;
                    Ok(true)
                }
            }
        }
        Cmd::Beam { space, t_ladder, p, out } => {
            let sp = lookup(&space)?;
            emit(&beam_csv(&sp, &default_direction(&sp), &t_ladder, &p)?, out.as_deref())?;
            Ok(true)
        }
        Cmd::Suite { config, suite, spaces, t_ladder, seed, workers, output_dir } => {
            let cfg = suite_config(config, suite, spaces, t_ladder, seed, workers, output_dir)?;
            let results = run_suite(&cfg)?;
            for r in &results {
                let tag = if r.documented_deviation { " [documented deviation]" } else { "" };
                println!("{:?} c{} {}{tag}: {}", r.status, r.criterion, r.name, r.detail);
            }
            Ok(results.iter().all(|r| r.status != Status::Fail || r.documented_deviation))
        }
        Cmd::Golden { run, golden, column_tol } => {
            let defaults = BTreeMap::new();
            let tol: BTreeMap<String, f64> = column_tol.into_iter().collect();
            let (check, drifts) =
                golden_compare(&run, &golden, &tol, tolerance_lookup(&defaults, "golden.abs"), tolerance_lookup(&defaults, "golden.rel"))?;
            for d in &drifts {
                println!("drift {} row {} column {}: golden {} observed {}", d.file, d.row, d.column, d.golden, d.observed);
            }
            println!("{:?}: {}", check.status, check.detail);
            Ok(check.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Config(_) | Error::UnknownSpace(_) | Error::InvalidArgument(_) | Error::Schema { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
