use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use orbent::entanglement::{entanglement, evaluate, oracle_value, prepare, EntanglementOptions, EntanglementResult};
use orbent::error::EntanglementError;
use orbent::fock::json::{read_state, read_states};
use orbent::fock::TwoOrbitalState;
use orbent::free_fermion::{disentangling_distance, two_site_entanglement};
use orbent::lattice::scan::{bond_scan, chain_seniority_cost, dimer, BondScanConfig, SolvedChain};
use orbent::lattice::{ChainSpec, SolverOptions};
use orbent::random::{random_spectrum, rng};
use orbent::ssr::{detect_symmetries, FormulaVariant, Ssr};

use crate::args::{DimerArgs, EhmArgs, FormulaArgs, FreeFermionArgs, InspectArgs, LminArgs, OracleArgs, SeniorityArgs};
use crate::error::CliError;
use crate::output::{Cell, RunConfig, Table};

/// Largest formula−oracle deviation accepted by `oracle-verify`.
const VERIFY_LIMIT: f64 = 1e-6;

pub enum Report {
    Json(Value),
    Table(Table),
    /// A report written before failing with the error.
    Failed(Value, CliError),
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn load_state(path: &Path) -> Result<TwoOrbitalState, CliError> {
    read_state(&read_input(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn options(config: &RunConfig, twirl_spin: bool) -> EntanglementOptions {
    EntanglementOptions {
        tol: config.tol,
        twirl_spin,
    }
}

fn result_json(r: &EntanglementResult, scale: f64) -> Value {
    json!({
        "value": r.value * scale,
        "variant": r.variant.name(),
        "basis": r.basis,
        "p": r.p,
        "q_star": r.q_star,
        "r": r.r,
        "t": r.t,
        "r_prime": r.r_prime,
        "t_prime": r.t_prime,
        "general": r.general,
        "general_prime": r.general_prime,
        "twirled": r.twirled,
    })
}

pub fn formula(args: &FormulaArgs, config: &RunConfig) -> Result<Report, CliError> {
    let rho = load_state(&args.input)?;
    let result = entanglement(&rho, args.ssr, &options(config, args.twirl_spin))?;
    Ok(Report::Json(result_json(&result, config.scale())))
}

pub fn inspect(args: &InspectArgs, config: &RunConfig) -> Result<Report, CliError> {
    let rho = load_state(&args.input)?;
    let mut rules = serde_json::Map::new();
    for ssr in [Ssr::N, Ssr::P] {
        let prepared = prepare(&rho, ssr, &options(config, false))?;
        let (variant, reason) = match &prepared.variant {
            Ok(v) => (Some(v.name()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        rules.insert(
            ssr.to_string(),
            json!({
                "projected": prepared.report,
                "variant": variant,
                "reason": reason,
                "p": prepared.spectrum.p,
            }),
        );
    }
    Ok(Report::Json(json!({
        "state": detect_symmetries(&rho, config.tol),
        "ssr": rules,
    })))
}

const VARIANTS: [FormulaVariant; 4] = [
    FormulaVariant::NssrSinglet,
    FormulaVariant::NssrGeneral,
    FormulaVariant::PssrSymmetric,
    FormulaVariant::PssrGeneral,
];

struct Deviation {
    abs: Option<f64>,
}

fn random_batch(variant_index: usize, n: usize, seed: u64) -> Result<(Value, f64), CliError> {
    let variant = VARIANTS[variant_index];
    // One ChaCha stream per draw keeps the batch independent of the thread count.
    let deviations: Vec<Deviation> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut r = rng(seed);
            r.set_stream(((variant_index as u64) << 40) | k as u64);
            let spec = random_spectrum(&mut r, variant);
            let oracle = oracle_value(&spec, variant.ssr())?;
            match evaluate(&spec, variant) {
                Ok(f) => Ok(Deviation {
                    abs: Some((f.value - oracle).abs()),
                }),
                Err(EntanglementError::DegenerateSector { .. }) => Ok(Deviation { abs: None }),
                Err(e) => Err(CliError::from(e)),
            }
        })
        .collect::<Result<_, CliError>>()?;
    let evaluated: Vec<f64> = deviations.iter().filter_map(|d| d.abs).collect();
    let max = evaluated.iter().copied().fold(0.0, f64::max);
    let mean = if evaluated.is_empty() {
        0.0
    } else {
        evaluated.iter().sum::<f64>() / evaluated.len() as f64
    };
    Ok((
        json!({
            "variant": variant.name(),
            "draws": n,
            "formula_not_applicable": n - evaluated.len(),
            "max_abs_deviation_nats": max,
            "mean_abs_deviation_nats": mean,
        }),
        max,
    ))
}

fn state_comparison(rho: &TwoOrbitalState, config: &RunConfig) -> Result<(Value, f64), CliError> {
    let scale = config.scale();
    let mut worst = 0.0f64;
    let mut rules = serde_json::Map::new();
    for ssr in [Ssr::N, Ssr::P] {
        let prepared = prepare(rho, ssr, &options(config, false))?;
        let oracle = oracle_value(&prepared.spectrum, ssr)?;
        let (formula, status) = match prepared.variant.and_then(|v| evaluate(&prepared.spectrum, v)) {
            Ok(r) => (Some(r.value), r.variant.name().to_string()),
            Err(e) => (None, format!("N/A: {e}")),
        };
        let deviation = formula.map(|f| (f - oracle).abs());
        if let Some(d) = deviation {
            worst = worst.max(d);
        }
        rules.insert(
            ssr.to_string(),
            json!({
                "formula": formula.map(|f| f * scale),
                "formula_status": status,
                "oracle": oracle * scale,
                "abs_deviation": deviation.map(|d| d * scale),
            }),
        );
    }
    Ok((Value::Object(rules), worst))
}

pub fn oracle_verify(args: &OracleArgs, config: &RunConfig) -> Result<Report, CliError> {
    let (report, worst) = match &args.input {
        Some(path) => {
            let text = read_input(path)?;
            let states = read_states(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for rho in &states {
                let (row, w) = state_comparison(rho, config)?;
                rows.push(row);
                worst = worst.max(w);
            }
            (json!({ "states": rows, "max_abs_deviation_nats": worst }), worst)
        }
        None => {
            let n = args.random.unwrap_or(10_000);
            let mut batches = Vec::new();
            let mut worst = 0.0f64;
            for k in 0..VARIANTS.len() {
                let (batch, w) = random_batch(k, n, config.seed)?;
                batches.push(batch);
                worst = worst.max(w);
            }
            (json!({ "batches": batches, "max_abs_deviation_nats": worst }), worst)
        }
    };
    let mut report = report;
    report["limit_nats"] = json!(VERIFY_LIMIT);
    report["pass"] = json!(worst <= VERIFY_LIMIT);
    if worst > VERIFY_LIMIT {
        Ok(Report::Failed(report, CliError::Verification(worst)))
    } else {
        Ok(Report::Json(report))
    }
}

fn entropy_column(name: &str, config: &RunConfig) -> String {
    format!("{name}_{}", config.units)
}

pub fn free_fermion_scan(args: &FreeFermionArgs, config: &RunConfig) -> Result<Report, CliError> {
    if args.l_max == 0 {
        return Err(CliError::Usage("--l-max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &eta in &args.eta_grid.0 {
        for l in 1..=args.l_max {
            let e = two_site_entanglement(eta, l)?;
            rows.push(vec![Cell::Float(eta), Cell::Int(l), Cell::Float(e * config.scale())]);
        }
    }
    Ok(Report::Table(Table {
        columns: vec!["eta".into(), "l_lattice_constants".into(), entropy_column("E", config)],
        rows,
    }))
}

pub fn lmin(args: &LminArgs, _config: &RunConfig) -> Result<Report, CliError> {
    let rows = args
        .eta_grid
        .0
        .iter()
        .map(|&eta| {
            let d = disentangling_distance(eta, args.l_cap)?;
            Ok(vec![
                Cell::Float(eta),
                Cell::Int(d.l_min),
                Cell::Int(d.l_cap),
                Cell::Float(d.leading_order),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Report::Table(Table {
        columns: vec![
            "eta".into(),
            "l_min_lattice_constants".into(),
            "l_cap_lattice_constants".into(),
            "leading_order_lattice_constants".into(),
        ],
        rows,
    }))
}

pub fn ehm_scan(args: &EhmArgs, config: &RunConfig) -> Result<Report, CliError> {
    let scan = BondScanConfig {
        sites: args.sites,
        pivot: args.pivot.unwrap_or(args.sites / 2),
        t_hop: args.t_hop,
        ssr: args.ssr,
    };
    let grid: Vec<(f64, f64)> = args
        .u
        .0
        .iter()
        .flat_map(|&u| args.v.0.iter().map(move |&v| (u, v)))
        .collect();
    let rows = bond_scan(&scan, &grid, &SolverOptions::default(), &options(config, false))?;
    let s = config.scale();
    Ok(Report::Table(Table {
        columns: vec![
            "U_t".into(),
            "V_t".into(),
            entropy_column("E_strong", config),
            entropy_column("E_weak", config),
            entropy_column("delta", config),
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Float(r.u),
                    Cell::Float(r.v),
                    Cell::Float(r.e_strong * s),
                    Cell::Float(r.e_weak * s),
                    Cell::Float(r.delta * s),
                ]
            })
            .collect(),
    }))
}

pub fn dimer_report(args: &DimerArgs, config: &RunConfig) -> Result<Report, CliError> {
    let d = dimer(args.u, args.v, args.t_hop)?;
    let s = config.scale();
    Ok(Report::Json(json!({
        "U": d.u,
        "V": d.v,
        "t_hop": d.t_hop,
        "energy": d.energy,
        "energy_exact": d.energy_exact,
        "E_nssr": d.e_nssr * s,
        "E_pssr": d.e_pssr * s,
        "p": d.p,
    })))
}

pub fn seniority(args: &SeniorityArgs, config: &RunConfig) -> Result<Report, CliError> {
    let spec = ChainSpec {
        sites: args.sites,
        n_up: args.sites / 2,
        n_dn: args.sites / 2,
        boundary: args.boundary,
        t_hop: args.t_hop,
        u: args.u,
        v: args.v,
    };
    let chain = SolvedChain::new(&spec, &SolverOptions::default())?;
    let cost = chain_seniority_cost(&chain, args.orbitals, args.ssr, &options(config, false))?;
    let s = config.scale();
    let pairs: Vec<(usize, usize)> = (0..args.sites)
        .flat_map(|i| (i + 1..args.sites).map(move |j| (i, j)))
        .collect();
    let rows: Vec<Value> = cost
        .pairs
        .iter()
        .map(|p| {
            let (i, j) = pairs[p.pair];
            json!({
                "i": i,
                "j": j,
                "value": p.value.map(|v| v * s),
                "method": p.method,
                "error": p.error,
            })
        })
        .collect();
    Ok(Report::Json(json!({
        "energy": chain.ground.energy,
        "total": cost.total * s,
        "partial": cost.partial,
        "pairs": rows,
    })))
}
