use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbent::lattice::scan::OrbitalBasis;
use orbent::lattice::Boundary;
use orbent::ssr::Ssr;

#[derive(Debug, Parser)]
#[command(name = "orbent", version, about = "Superselection-compliant orbital entanglement")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Symmetry detection tolerance (Frobenius norm).
    #[arg(long, global = true, default_value_t = orbent::tol::SYMMETRY)]
    pub tol: f64,
    /// Report entanglement in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; tables default to csv, reports to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-formula entanglement of a two-orbital state file.
    Formula(FormulaArgs),
    /// Compare the closed formulas with the constrained KL oracle.
    OracleVerify(OracleArgs),
    /// Symmetry report of a two-orbital state file.
    Inspect(InspectArgs),
    /// E(l) of two sites of the free chain.
    FreeFermionScan(FreeFermionArgs),
    /// Disentangling distance versus filling.
    Lmin(LminArgs),
    /// Strong and weak bond entanglement of the extended Hubbard chain.
    EhmScan(EhmArgs),
    /// Two-site Hubbard model.
    Dimer(DimerArgs),
    /// Sum of pair entanglements of a chain ground state.
    Seniority(SeniorityArgs),
}

fn parse_ssr(s: &str) -> Result<Ssr, String> {
    s.parse()
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse()
}

fn parse_orbitals(s: &str) -> Result<OrbitalBasis, String> {
    match s {
        "site" => Ok(OrbitalBasis::Site),
        "natural" => Ok(OrbitalBasis::Natural),
        other => Err(format!("unknown orbital basis {other:?} (expected site or natural)")),
    }
}

/// Inclusive grid `a:b:n` of `n` evenly spaced points, or a single value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid(pub Vec<f64>);

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    match parts.as_slice() {
        [x] => Ok(Grid(vec![num(x)?])),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
            match n {
                0 => Err("grid needs at least one point".into()),
                1 if a != b => Err("a one-point grid needs equal ends".into()),
                1 => Ok(Grid(vec![a])),
                _ => {
                    let step = (b - a) / (n - 1) as f64;
                    Ok(Grid(
                        (0..n)
                            .map(|k| if k == n - 1 { b } else { a + step * k as f64 })
                            .collect(),
                    ))
                }
            }
        }
        _ => Err(format!("expected a value or start:stop:count, got {s:?}")),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct FormulaArgs {
    /// Density-matrix JSON file, or `-` for standard input.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value = "N", value_parser = parse_ssr)]
    pub ssr: Ssr,
    /// Remove a real Ψ₈/Ψ₉ coherence with the S² twirl before evaluating.
    #[arg(long)]
    pub twirl_spin: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    /// Density-matrix JSON file (one document or an array).
    #[arg(long, short, conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Number of random spectra per formula variant.
    #[arg(long, alias = "n")]
    pub random: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct InspectArgs {
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct FreeFermionArgs {
    /// Per-spin filling η as `a:b:n`.
    #[arg(long, value_parser = parse_grid)]
    pub eta_grid: Grid,
    #[arg(long, default_value_t = 8)]
    pub l_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LminArgs {
    #[arg(long, value_parser = parse_grid)]
    pub eta_grid: Grid,
    /// Largest distance examined; defaults to 4⌈√2/(πη(1−η))⌉.
    #[arg(long)]
    pub l_cap: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct EhmArgs {
    #[arg(long = "L", alias = "sites")]
    pub sites: usize,
    #[arg(long = "U", value_parser = parse_grid)]
    pub u: Grid,
    #[arg(long = "V", value_parser = parse_grid)]
    pub v: Grid,
    /// Shared site of the two bonds; defaults to L/2.
    #[arg(long)]
    pub pivot: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub t_hop: f64,
    #[arg(long, default_value = "N", value_parser = parse_ssr)]
    pub ssr: Ssr,
}

#[derive(Debug, Args, Serialize)]
pub struct DimerArgs {
    #[arg(long = "U")]
    pub u: f64,
    #[arg(long = "V", default_value_t = 0.0)]
    pub v: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_hop: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SeniorityArgs {
    #[arg(long = "L", alias = "sites")]
    pub sites: usize,
    #[arg(long = "U")]
    pub u: f64,
    #[arg(long = "V", default_value_t = 0.0)]
    pub v: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_hop: f64,
    #[arg(long, default_value = "open", value_parser = parse_boundary)]
    pub boundary: Boundary,
    #[arg(long, default_value = "natural", value_parser = parse_orbitals)]
    pub orbitals: OrbitalBasis,
    #[arg(long, default_value = "N", value_parser = parse_ssr)]
    pub ssr: Ssr,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("6").unwrap(), Grid(vec![6.0]));
        assert_eq!(parse_grid("0.1:0.9:9").unwrap().0.len(), 9);
        let g = parse_grid("2.5:3.5:21").unwrap().0;
        assert_eq!(g[20], 3.5);
        assert!((g[10] - 3.0).abs() < 1e-15);
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn command_line_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
