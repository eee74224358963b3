use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lierigid::cohomology::{dims_by_degree, direct_h1_for_weight, kostant_h1, CohomologyError};
use lierigid::grading::{grade_algebra, grade_module, grading_element, GradedDims, ParabolicMarking};
use lierigid::linalg::format_rational;
use lierigid::repthy::{gperp_decompose, oracle_bound_from_env, IrrComponent, RepError};
use lierigid::rigidity::{adjoint_scenario, run_scenario, RigidityError, RigidityVerdict, ScenarioSpec};
use lierigid::rootsys::{parse_factors, parse_weight, RootSystem, RootSystemError, SimpleFactor, Weight};
use lierigid::tableau::{
    is_involutive, prolong, stabilizer_and_tableau, torsion_quotient_dim, InvolutivityReport, SecondForm, Tableau,
};
use lierigid::vogel::{dim_g, dim_y2, dim_y3, dim_yk, VogelError, VogelParams};

mod fixtures;
mod render;

#[derive(Parser)]
#[command(name = "lierigid", version, about = "Exact Lie-theoretic rigidity computations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Grading of g (and optionally of V_λ) induced by marked nodes.
    Grading {
        #[arg(long = "type")]
        algebra: String,
        #[arg(long)]
        marked: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Irreducible components of the complement of g in sl(V_λ).
    Gperp {
        #[arg(long = "type")]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// H¹(g₋, V_Γ) by Kostant's theorem, optionally checked by brute force.
    Cohomology {
        #[arg(long = "type")]
        algebra: String,
        #[arg(long)]
        marked: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Rigidity verdict for a scenario file, bundled fixture, or inline spec.
    Rigidity {
        /// Path to a scenario JSON file or the name of a bundled fixture.
        #[arg(long, conflicts_with_all = ["algebra", "list_fixtures"])]
        scenario: Option<String>,
        #[arg(long)]
        list_fixtures: bool,
        #[arg(long = "type", requires_all = ["marked", "weight", "p"])]
        algebra: Option<String>,
        #[arg(long)]
        marked: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<i64>,
        #[arg(long)]
        oracle: bool,
    },
    /// Cartan test for a tableau, or the tableau of a second fundamental form.
    Tableau {
        /// Tableau JSON: {"dim_V", "dim_W", "basis"}.
        #[arg(long, conflicts_with = "second_form", required_unless_present = "second_form")]
        input: Option<String>,
        /// Second fundamental form JSON: {"dim_T", "components"}.
        #[arg(long)]
        second_form: Option<String>,
        /// Seed for the random part of the generic-flag search.
        #[arg(long, default_value_t = 0)]
        flag_seed: u64,
    },
    /// Universal dimension formulas at a parameter point.
    Vogel {
        /// α,β,γ as comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Cartan power Y_k; without it dim g is printed.
        #[arg(long, conflicts_with = "display")]
        k: Option<u32>,
        /// Evaluate the closed displays for Y₂ or Y₃ instead.
        #[arg(long, value_enum)]
        display: Option<Display>,
    },
    /// Adjoint variety of a simple algebra.
    Adjoint {
        #[arg(long = "type")]
        algebra: String,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        p: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Display {
    Y2,
    Y3,
}

enum CliError {
    Input { field: String, message: String },
    Internal(anyhow::Error),
}

fn input(field: &str, e: impl ToString) -> CliError {
    CliError::Input { field: field.to_string(), message: e.to_string() }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Internal(e)
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        match e {
            RigidityError::Invalid { field, message } => input(field, message),
            RigidityError::AdjointA1 => input("--type", e),
            other => CliError::Internal(other.into()),
        }
    }
}

fn cohomology_error(e: CohomologyError) -> CliError {
    match e {
        CohomologyError::Rep(RepError::OracleBound { .. }) => input("--weight", e),
        CohomologyError::Grading(_) => input("--marked", e),
        CohomologyError::RootSystem(_) => input("--weight", e),
        other => CliError::Internal(other.into()),
    }
}

fn root_system(field: &str, s: &str) -> Result<RootSystem, CliError> {
    let factors = parse_factors(s).map_err(|e| input(field, e))?;
    RootSystem::build(&factors).map_err(|e| input(field, e))
}

fn marking(rs: &RootSystem, s: &str) -> Result<ParabolicMarking, CliError> {
    let nodes = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input("--marked", e))?;
    let m = ParabolicMarking::new(nodes);
    m.validate(rs).map_err(|e| input("--marked", e))?;
    Ok(m)
}

fn weight(rs: &RootSystem, s: &str) -> Result<Weight, CliError> {
    let w = parse_weight(s).map_err(|e| input("--weight", e))?;
    match rs.weyl_dim(&w) {
        Ok(_) => Ok(w),
        Err(e @ (RootSystemError::WeightLength { .. } | RootSystemError::NotDominant(_))) => Err(input("--weight", e)),
        Err(e) => Err(CliError::Internal(e.into())),
    }
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.into())),
        Format::Table => Ok(table()),
    }
}

#[derive(Serialize)]
struct GradingReport {
    algebra: String,
    marked: ParabolicMarking,
    z_on_fundamental: Vec<String>,
    algebra_grading: GradedDims,
    #[serde(skip_serializing_if = "Option::is_none")]
    module: Option<lierigid::grading::ModuleGrading>,
}

#[derive(Serialize)]
struct GperpReport {
    algebra: String,
    highest_weight: Weight,
    components: Vec<(IrrComponent, String)>,
}

#[derive(Serialize)]
struct CohomologyOut {
    algebra: String,
    marked: ParabolicMarking,
    highest_weight: Weight,
    pieces: Vec<lierigid::cohomology::H1Piece>,
    by_degree: std::collections::BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct_by_degree: Option<std::collections::BTreeMap<String, u64>>,
}

#[derive(Serialize)]
struct TableauOut {
    dim_v: usize,
    dim_w: usize,
    involutivity: InvolutivityReport,
    torsion_quotient_dim: usize,
    flag_seed: u64,
}

#[derive(Serialize)]
struct VogelOut {
    params: VogelParams,
    quantity: String,
    value: String,
}

fn read_json<T: serde::de::DeserializeOwned>(field: &str, path: &str) -> Result<T, CliError> {
    let body = std::fs::read_to_string(path).map_err(|e| input(field, format!("{path}: {e}")))?;
    serde_json::from_str(&body).map_err(|e| input(field, format!("{path}: {e}")))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SecondFormJson {
    #[serde(rename = "dim_T")]
    dim_t: usize,
    /// One row-major `dim_T × dim_T` symmetric matrix per basis vector of N.
    components: Vec<Vec<String>>,
}

fn second_form(path: &str) -> Result<SecondForm, CliError> {
    let raw: SecondFormJson = read_json("--second-form", path)?;
    let mut comps = Vec::with_capacity(raw.components.len());
    for (k, c) in raw.components.iter().enumerate() {
        let data = c
            .iter()
            .map(|s| lierigid::linalg::parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| input("--second-form", format!("components[{k}]: {e}")))?;
        let m = lierigid::linalg::RatMatrix::from_vec(raw.dim_t, raw.dim_t, data)
            .map_err(|e| input("--second-form", format!("components[{k}]: {e}")))?;
        comps.push(m);
    }
    SecondForm::new(raw.dim_t, comps).map_err(|e| input("--second-form", e))
}

fn verdict_output(format: Format, v: &RigidityVerdict) -> Result<String, CliError> {
    emit(format, v, || render::verdict(v))
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Grading { algebra, marked, weight: w } => {
            let rs = root_system("--type", &algebra)?;
            let m = marking(&rs, &marked)?;
            let z = grading_element(&rs, &m).map_err(|e| input("--marked", e))?;
            let module = match w {
                Some(s) => {
                    let lam = weight(&rs, &s)?;
                    Some(grade_module(&rs, &m, &lam).map_err(|e| CliError::Internal(e.into()))?)
                }
                None => None,
            };
            let report = GradingReport {
                algebra: algebra.clone(),
                marked: m.clone(),
                z_on_fundamental: z.on_fundamental().iter().map(format_rational).collect(),
                algebra_grading: grade_algebra(&rs, &m).map_err(|e| CliError::Internal(e.into()))?,
                module,
            };
            emit(format, &report, || {
                let mut out = format!("algebra: {}\n", render::dims(&report.algebra_grading, true));
                if let Some(mg) = &report.module {
                    let _ = writeln!(out, "module: {}", render::dims(&mg.shifted, false));
                    let _ = writeln!(out, "top eigenvalue: {}", format_rational(&mg.top_eigenvalue));
                }
                out
            })
        }
        Command::Gperp { algebra, weight: w } => {
            let rs = root_system("--type", &algebra)?;
            let lam = weight(&rs, &w)?;
            let comps = gperp_decompose(&rs, &lam).map_err(|e| match e {
                RepError::TooSmall | RepError::AdjointMissing { .. } => input("--weight", e),
                other => CliError::Internal(other.into()),
            })?;
            let components = comps
                .into_iter()
                .map(|c| {
                    let d = rs.weyl_dim(&c.highest_weight).expect("dominant").to_string();
                    (c, d)
                })
                .collect();
            let report = GperpReport { algebra, highest_weight: lam, components };
            emit(format, &report, || render::gperp(&report.components))
        }
        Command::Cohomology { algebra, marked, weight: w, oracle } => {
            let rs = root_system("--type", &algebra)?;
            let m = marking(&rs, &marked)?;
            let lam = weight(&rs, &w)?;
            let comp = IrrComponent { highest_weight: lam.clone(), multiplicity: 1 };
            let pieces = kostant_h1(&rs, &m, &comp).map_err(cohomology_error)?;
            let kostant = dims_by_degree(&pieces);
            let direct = if oracle {
                let d = direct_h1_for_weight(&rs, &m, &lam, oracle_bound_from_env()).map_err(cohomology_error)?.h1();
                if d != kostant {
                    return Err(CliError::Internal(anyhow!("Kostant and direct H¹ disagree: {kostant:?} vs {d:?}")));
                }
                Some(d.into_iter().map(|(k, v)| (format_rational(&k), v)).collect())
            } else {
                None
            };
            let report = CohomologyOut {
                algebra,
                marked: m,
                highest_weight: lam,
                pieces,
                by_degree: kostant.into_iter().map(|(k, v)| (format_rational(&k), v)).collect(),
                direct_by_degree: direct,
            };
            emit(format, &report, || render::pieces(&report.pieces, report.direct_by_degree.is_some()))
        }
        Command::Rigidity { scenario, list_fixtures, algebra, marked, weight: w, p, oracle } => {
            if list_fixtures {
                let names: Vec<&str> = fixtures::BUNDLED.iter().map(|(n, _)| *n).collect();
                return emit(format, &names, || names.join("\n") + "\n");
            }
            let spec: ScenarioSpec = match (scenario, algebra) {
                (Some(s), _) => {
                    let body = fixtures::load(&s).ok_or_else(|| input("--scenario", format!("no file or bundled fixture named {s:?}")))?;
                    serde_json::from_str(&body).map_err(|e| input("--scenario", e))?
                }
                (None, Some(t)) => {
                    let factors: Vec<SimpleFactor> = parse_factors(&t).map_err(|e| input("--type", e))?;
                    let rs = RootSystem::build(&factors).map_err(|e| input("--type", e))?;
                    ScenarioSpec {
                        name: None,
                        algebra: factors,
                        marked: marking(&rs, marked.as_deref().unwrap_or(""))?,
                        highest_weight: weight(&rs, w.as_deref().unwrap_or(""))?,
                        p: p.expect("required by clap"),
                        oracle,
                    }
                }
                (None, None) => return Err(input("--scenario", "give a scenario, --type ..., or --list-fixtures")),
            };
            verdict_output(format, &run_scenario(&spec)?)
        }
        Command::Tableau { input: path, second_form: f2, flag_seed } => {
            if let Some(path) = f2 {
                let form = second_form(&path)?;
                let pair = stabilizer_and_tableau(&form);
                let inv = is_involutive(&pair.tableau_r_perp, flag_seed);
                #[derive(Serialize)]
                struct Out<'a> {
                    stabilizer: &'a lierigid::tableau::StabilizerPair,
                    involutivity: &'a InvolutivityReport,
                }
                return emit(format, &Out { stabilizer: &pair, involutivity: &inv }, || {
                    render::stabilizer(&pair) + &render::involutivity(&inv)
                });
            }
            let t: Tableau = read_json("--input", path.as_deref().expect("required by clap"))?;
            let involutivity = is_involutive(&t, flag_seed);
            debug_assert_eq!(involutivity.dim_prolongation, prolong(&t).len());
            let out = TableauOut {
                dim_v: t.dim_v(),
                dim_w: t.dim_w(),
                torsion_quotient_dim: torsion_quotient_dim(&t),
                involutivity,
                flag_seed,
            };
            emit(format, &out, || {
                render::involutivity(&out.involutivity) + &format!("torsion quotient: {}\n", out.torsion_quotient_dim)
            })
        }
        Command::Vogel { params, k, display } => {
            let p: VogelParams = params.parse().map_err(|e: VogelError| input("--params", e))?;
            let (quantity, value) = match (k, display) {
                (Some(k), _) => (format!("Y_{k}"), dim_yk(&p, k)),
                (None, Some(Display::Y2)) => ("Y_2 (display)".to_string(), dim_y2(&p)),
                (None, Some(Display::Y3)) => ("Y_3 (display)".to_string(), dim_y3(&p)),
                (None, None) => ("dim g".to_string(), dim_g(&p)),
            };
            let value = value.map_err(|e| match e {
                VogelError::ZeroPower => input("--k", e),
                other => input("--params", other),
            })?;
            let out = VogelOut { params: p, quantity, value: format_rational(&value) };
            emit(format, &out, || format!("{}\n", out.value))
        }
        Command::Adjoint { algebra, p } => {
            let factor: SimpleFactor = algebra.parse().map_err(|e| input("--type", e))?;
            let mut spec = adjoint_scenario(factor)?;
            spec.p = p;
            verdict_output(format, &run_scenario(&spec)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Input { field, message }) => {
            eprintln!("error: {field}: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}
