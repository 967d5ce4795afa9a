//! The `nilcalc` command line.
//!
//! Every command prints a CSV table and a JSON summary
//! `{command, group, pass, results: [{criterion, value, threshold, pass, ..}], timings}`.
//! Without `--out` the table goes to stdout and the summary to stderr; with
//! `--out DIR` both are written to `DIR/<command>.csv` and
//! `DIR/<command>.json` and one status line per criterion is printed.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use nilcalc_core::diffops::{rockland_example, OperatorDegree};
use nilcalc_core::group_poly::{taylor_polynomial, taylor_remainder};
use nilcalc_core::lie::validate_gradation;
use nilcalc_core::multi_index;
use nilcalc_core::polynomial::default_names;
use nilcalc_core::rational::fmt_rational;
use nilcalc_core::symbols::SymbolCalculus;
use nilcalc_core::{DualBasis, GradedGroup, Monomial, Polynomial, Rational, RocklandVariant};
use num_traits::One;

use crate::bessel::{bessel_potential, l2_norm_from_heat, Sampling, TimeQuadrature};
use crate::bumps::rng;
use crate::decay::FitReport;
use crate::error::{NumError, NumResult};
use crate::heat::heat_scaling_check;
use crate::parse::{parse_multi_index, parse_operator, parse_point, parse_polynomial};
use crate::spec_io::{resolve_group, resolve_spec};
use crate::verify::{self, CriterionResult, NumericConfig, Refinement, SCALING_FLOOR};

#[derive(Debug, Parser)]
#[command(name = "nilcalc", version, about = "Exact symbolic calculus and grid numerics on graded nilpotent Lie groups")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for `<command>.csv` and `<command>.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with defaults for seed, grid_n, refine, trials and out.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// `abelian:<n>`, `heisenberg:<n>`, `engel`, or a JSON/TOML spec file.
    pub group: String,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Points per axis of the heat grid (even, ≥ 16).
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Repeat the computation on a refined grid and report convergence.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check antisymmetry, Jacobi and weight compatibility.
    Validate(GroupArg),
    /// Group law polynomials; with --x and --y, their product.
    Bch {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Dual basis q_α for [α] ≤ D.
    Qbasis {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Taylor polynomial and remainder of f at homogeneous degree M.
    Taylor {
        #[command(flatten)]
        g: GroupArg,
        /// Polynomial in x1..xn, e.g. "x3 + x1^2*x2".
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// Composition of two operators written as Σ p(x) X^β.
    Compose {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Formal adjoint of an operator.
    Adjoint {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
    },
    /// A positive Rockland operator.
    Rockland {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        nu_o: Option<u32>,
        /// 1, 2 or sub.
        #[arg(long, default_value = "1")]
        variant: String,
    },
    /// Composition and adjoint expansions against direct computation.
    ComposeSymbols {
        #[command(flatten)]
        g: GroupArg,
        /// Largest symbol order.
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Leibniz coefficients c_{α₁,α₂} and the exact Leibniz defect.
    Leibniz {
        #[command(flatten)]
        g: GroupArg,
        /// Comma-separated multi-index.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Heat semigroup and its self-similarity.
    Heat {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bessel potentials from the heat kernel, L¹/L² norms and the semigroup law.
    Bessel {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated orders a.
        #[arg(long, default_value = "1,2")]
        order: String,
    },
    /// Log-log decay of 𝓑_a near the origin.
    Decay {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sobolev embedding ratio on random bumps.
    Sobolev {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Schrödinger model, Plancherel and intertwining (heisenberg:1).
    Plancherel {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Every acceptance check that applies to the group.
    VerifyAll {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        grid_n: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Bch { .. } => "bch",
            Command::Qbasis { .. } => "qbasis",
            Command::Taylor { .. } => "taylor",
            Command::Compose { .. } => "compose",
            Command::Adjoint { .. } => "adjoint",
            Command::Rockland { .. } => "rockland",
            Command::ComposeSymbols { .. } => "compose-symbols",
            Command::Leibniz { .. } => "leibniz",
            Command::Heat { .. } => "heat",
            Command::Bessel { .. } => "bessel",
            Command::Decay { .. } => "decay",
            Command::Sobolev { .. } => "sobolev",
            Command::Plancherel { .. } => "plancherel",
            Command::VerifyAll { .. } => "verify-all",
        }
    }

    fn group(&self) -> &str {
        match self {
            Command::Validate(g) => &g.group,
            Command::Bch { g, .. }
            | Command::Qbasis { g, .. }
            | Command::Taylor { g, .. }
            | Command::Compose { g, .. }
            | Command::Adjoint { g, .. }
            | Command::Rockland { g, .. }
            | Command::ComposeSymbols { g, .. }
            | Command::Leibniz { g, .. }
            | Command::Heat { g, .. }
            | Command::Bessel { g, .. }
            | Command::Decay { g, .. }
            | Command::Sobolev { g, .. }
            | Command::Plancherel { g, .. }
            | Command::VerifyAll { g, .. } => &g.group,
        }
    }
}

/// Defaults read from `--config`; command-line flags win.
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub grid_n: Option<usize>,
    pub refine: Option<bool>,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Normalized settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub group: String,
    pub seed: u64,
    pub grid_n: usize,
    pub refine: bool,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_GRID_N: usize = 64;

pub fn parse_config(cli: &Cli) -> NumResult<RunConfig> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| NumError::Config(format!("cannot read config {}: {e}", p.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| NumError::Config(format!("config {}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let (grid_n, refine, trials) = match &cli.command {
        Command::Heat { grid, .. } | Command::Bessel { grid, .. } | Command::Decay { grid, .. } => {
            (grid.grid_n, grid.refine, None)
        }
        Command::Sobolev { grid, trials, .. } => (grid.grid_n, grid.refine, *trials),
        Command::VerifyAll { grid_n, .. } => (*grid_n, true, None),
        Command::ComposeSymbols { trials, .. } | Command::Leibniz { trials, .. } | Command::Plancherel { trials, .. } => {
            (None, false, *trials)
        }
        _ => (None, false, None),
    };
    let grid_n = grid_n.or(file.grid_n).unwrap_or(DEFAULT_GRID_N);
    let refine = refine || file.refine.unwrap_or(false);
    if grid_n < 16 || grid_n % 2 != 0 {
        return Err(NumError::Config(format!("--grid-n must be even and at least 16, got {grid_n}")));
    }
    if refine && (grid_n * 3 / 4) < 16 {
        return Err(NumError::Config(format!("--refine needs --grid-n ≥ 22 for a coarse level, got {grid_n}")));
    }
    Ok(RunConfig {
        command: cli.command.name().into(),
        group: cli.command.group().into(),
        seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        grid_n,
        refine,
        trials: trials.or(file.trials),
        out: cli.out.clone().or(file.out),
    })
}

/// A CSV table: header plus rows of cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn from_results(rows: &[CriterionResult]) -> Self {
        let mut t = Table::new(&["criterion", "group", "value", "threshold", "pass", "refinement"]);
        for r in rows.iter().filter(|r| !is_timing(r)) {
            let refinement = serde_json::to_value(r.refinement).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            t.push(vec![r.criterion.clone(), r.group.clone(), fmt_num(r.value), fmt_num(r.threshold), r.pass.to_string(), refinement]);
        }
        t
    }

    pub fn write<W: Write>(&self, w: W) -> NumResult<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            wtr.write_record(r).map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> NumError {
    NumError::Io(std::io::Error::other(e))
}

fn fmt_num(v: f64) -> String {
    format!("{v:.6e}")
}

fn is_timing(r: &CriterionResult) -> bool {
    r.criterion.contains("runtime")
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub command: String,
    pub group: String,
    pub seed: u64,
    pub pass: bool,
    pub results: Vec<CriterionResult>,
    /// Wall-clock rows; excluded from `results` so that reports are
    /// reproducible for a fixed seed.
    pub timings: Vec<CriterionResult>,
}

impl Summary {
    pub fn new(cfg: &RunConfig, rows: Vec<CriterionResult>) -> Self {
        let pass = verify::all_pass(&rows);
        let (timings, results) = rows.into_iter().partition(is_timing);
        Self { command: cfg.command.clone(), group: cfg.group.clone(), seed: cfg.seed, pass, results, timings }
    }
}

/// Output of one command.
pub struct Outcome {
    pub table: Table,
    pub summary: Summary,
}

pub fn emit(cfg: &RunConfig, outcome: &Outcome) -> NumResult<()> {
    let json = serde_json::to_string_pretty(&outcome.summary).map_err(|e| NumError::Io(std::io::Error::other(e)))?;
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            outcome.table.write(std::fs::File::create(dir.join(format!("{}.csv", cfg.command)))?)?;
            std::fs::write(dir.join(format!("{}.json", cfg.command)), json + "\n")?;
            let mut out = std::io::stdout().lock();
            for r in outcome.summary.results.iter().chain(&outcome.summary.timings) {
                writeln!(out, "{} {} {} = {} (threshold {})", if r.pass { "PASS" } else { "FAIL" }, r.group, r.criterion, fmt_num(r.value), fmt_num(r.threshold))?;
            }
        }
        None => {
            outcome.table.write(std::io::stdout().lock())?;
            writeln!(std::io::stderr().lock(), "{json}")?;
        }
    }
    Ok(())
}

fn numeric_config(cfg: &RunConfig) -> NumericConfig {
    let mut n = NumericConfig { seed: cfg.seed, grid_n: cfg.grid_n, refine: cfg.refine, ..NumericConfig::default() };
    if let Some(t) = cfg.trials {
        n.sobolev_trials = t;
        n.plancherel_bumps = t;
    }
    n
}

fn var_names(n: usize) -> Vec<String> {
    default_names("x", n)
}

fn xz_names(n: usize) -> Vec<String> {
    let mut v = default_names("x", n);
    v.extend(default_names("z", n));
    v
}

fn xy_names(n: usize) -> Vec<String> {
    let mut v = default_names("x", n);
    v.extend(default_names("y", n));
    v
}

fn unit_weights(n: usize) -> Vec<u32> {
    vec![1; n]
}

fn symbolic_check(name: &str, group: &GradedGroup, failures: usize, detail: String) -> CriterionResult {
    CriterionResult::at_most(name, group.name(), failures as f64, 0.0).with_detail(detail)
}

/// Test monomials x^γ with [γ] ≤ d.
fn test_monomials(weights: &[u32], d: u32) -> Vec<Polynomial> {
    multi_index::up_to_degree(weights, d)
        .into_iter()
        .map(|g| Polynomial::monomial(weights.len(), Monomial::from_u32(g.entries()), Rational::one()))
        .collect()
}

pub fn run(cli: &Cli) -> NumResult<(RunConfig, Outcome)> {
    let cfg = parse_config(cli)?;
    let outcome = dispatch(&cli.command, &cfg)?;
    Ok((cfg, outcome))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> NumResult<Outcome> {
    let done = |table: Table, rows: Vec<CriterionResult>| Ok(Outcome { table, summary: Summary::new(cfg, rows) });
    match cmd {
        Command::Validate(g) => {
            let spec = resolve_spec(&g.group)?;
            let report = validate_gradation(&spec)?;
            let mut t = Table::new(&["violation"]);
            for m in report.messages() {
                t.push(vec![m]);
            }
            let row = CriterionResult::at_most("validate.violations", &spec.name, report.violations.len() as f64, 0.0)
                .with_detail(report.messages().join("; "));
            done(t, vec![row])
        }
        Command::Bch { g, x, y } => {
            let group = resolve_group(&g.group)?;
            let n = group.dim();
            let names = xy_names(n);
            let w2 = unit_weights(2 * n);
            let mut t = Table::new(&["coordinate", "polynomial"]);
            for k in 0..n {
                t.push(vec![format!("{}", k + 1), group.law().coordinate(k).display_with(&names, &w2)]);
            }
            if let (Some(x), Some(y)) = (x, y) {
                let p = group.bch_product(&parse_point(x, n)?, &parse_point(y, n)?);
                t.push(vec!["product".into(), p.iter().map(fmt_rational).collect::<Vec<_>>().join(",")]);
            }
            done(t, verify::group_axioms(&group, 20, cfg.seed))
        }
        Command::Qbasis { g, max_degree } => {
            let group = resolve_group(&g.group)?;
            let basis = DualBasis::new(&group, *max_degree)?;
            let names = var_names(group.dim());
            let mut t = Table::new(&["alpha", "degree", "polynomial"]);
            for alpha in multi_index::up_to_degree(group.weights(), *max_degree) {
                let d = alpha.homogeneous_degree(group.weights());
                t.push(vec![alpha.to_string(), d.to_string(), basis.q(&alpha).display_with(&names, group.weights())]);
            }
            done(t, verify::dual_basis_duality(&group, *max_degree, *max_degree))
        }
        Command::Taylor { g, f, m } => {
            let group = resolve_group(&g.group)?;
            let n = group.dim();
            let f = parse_polynomial(f, n)?;
            let basis = DualBasis::new(&group, *m)?;
            let p = taylor_polynomial(&group, &basis, &f, *m);
            let r = taylor_remainder(&group, &basis, &f, *m);
            let names = xz_names(n);
            let w2: Vec<u32> = group.weights().iter().chain(group.weights()).cloned().collect();
            let mut t = Table::new(&["part", "polynomial"]);
            t.push(vec!["taylor".into(), p.display_with(&names, &w2)]);
            t.push(vec!["remainder".into(), r.display_with(&names, &w2)]);
            let mut fails = 0;
            for alpha in multi_index::up_to_degree(group.weights(), *m) {
                if !group.apply_monomial_block(&alpha, &r, n).eliminate_block(n, n).is_zero() {
                    fails += 1;
                }
            }
            let row = symbolic_check("taylor.remainder-derivatives", &group, fails, format!("X^α_z R at z = 0 for [α] ≤ {m}"));
            done(t, vec![row])
        }
        Command::Compose { g, a, b } => {
            let group = resolve_group(&g.group)?;
            let a = parse_operator(a, group.weights())?;
            let b = parse_operator(b, group.weights())?;
            let ab = a.compose(&group, &b);
            let mut t = Table::new(&["operator", "expression"]);
            t.push(vec!["a".into(), a.to_string()]);
            t.push(vec!["b".into(), b.to_string()]);
            t.push(vec!["a∘b".into(), ab.to_string()]);
            let tests = test_monomials(group.weights(), 4);
            let fails = tests.iter().filter(|f| ab.apply(&group, f) != a.apply(&group, &b.apply(&group, f))).count();
            done(t, vec![symbolic_check("compose.soundness", &group, fails, format!("{} test monomials", tests.len()))])
        }
        Command::Adjoint { g, a } => {
            let group = resolve_group(&g.group)?;
            let a = parse_operator(a, group.weights())?;
            let adj = a.formal_adjoint(&group);
            let mut t = Table::new(&["operator", "expression"]);
            t.push(vec!["a".into(), a.to_string()]);
            t.push(vec!["a*".into(), adj.to_string()]);
            let fails = usize::from(adj.formal_adjoint(&group) != a);
            done(t, vec![symbolic_check("adjoint.involution", &group, fails, String::new())])
        }
        Command::Rockland { g, nu_o, variant } => {
            let group = resolve_group(&g.group)?;
            let v = RocklandVariant::parse(variant)
                .ok_or_else(|| NumError::Config(format!("unknown variant {variant:?}; use 1, 2 or sub")))?;
            let nu = nu_o.unwrap_or(group.algebra().nu_o());
            let r = rockland_example(group.algebra(), nu, &[], v)?;
            let mut t = Table::new(&["field", "value"]);
            t.push(vec!["variant".into(), r.variant.to_string()]);
            t.push(vec!["degree".into(), r.degree.to_string()]);
            t.push(vec!["operator".into(), r.operator.to_string()]);
            let homog = r.operator.homogeneous_degree() == OperatorDegree::Homogeneous(r.degree);
            let op = r.operator.to_var_coeff();
            let mut rows = vec![symbolic_check("rockland.homogeneous", &group, usize::from(!homog), format!("degree {}", r.degree))];
            if v != RocklandVariant::Variant2 {
                rows.push(symbolic_check("rockland.self-adjoint", &group, usize::from(op.formal_adjoint(&group) != op), String::new()));
            }
            done(t, rows)
        }
        Command::ComposeSymbols { g, m, trials } => {
            let group = resolve_group(&g.group)?;
            let rows = verify::composition_exact(&group, trials.unwrap_or(50), *m, cfg.seed)?;
            done(Table::from_results(&rows), rows)
        }
        Command::Leibniz { g, alpha, max_degree, trials } => {
            let group = resolve_group(&g.group)?;
            let alpha = parse_multi_index(alpha, group.dim())?;
            let d = alpha.homogeneous_degree(group.weights());
            let max = max_degree.unwrap_or(d.max(1));
            if max < d {
                return Err(NumError::Config(format!("--max-degree {max} is below [α] = {d}")));
            }
            let calc = SymbolCalculus::new(&group, max)?;
            let mut t = Table::new(&["alpha1", "alpha2", "c"]);
            for ((a1, a2), c) in calc.leibniz_coeff_table(&alpha)? {
                t.push(vec![a1.to_string(), a2.to_string(), fmt_rational(&c)]);
            }
            let mut r = rng(cfg.seed);
            let n_trials = trials.unwrap_or(10);
            let mut fails = 0;
            for _ in 0..n_trials {
                let s1 = verify::random_constant_symbol(&mut r, &group, d.clamp(1, 4));
                let s2 = verify::random_constant_symbol(&mut r, &group, d.clamp(1, 4));
                if !calc.leibniz_defect(&alpha, &s1, &s2)?.is_zero() {
                    fails += 1;
                }
            }
            done(t, vec![symbolic_check("4.leibniz.symbolic-failures", &group, fails, format!("α = {alpha}, {n_trials} symbol pairs"))])
        }
        Command::Heat { g, .. } => {
            let group = resolve_group(&g.group)?;
            verify::numeric_supported(&group)?;
            let ncfg = numeric_config(cfg);
            if cfg.refine {
                let (rows, _) = verify::heat_self_similarity(&group, &ncfg)?;
                return done(Table::from_results(&rows), rows);
            }
            let rockland = verify::default_rockland(&group)?;
            let run = verify::run_heat(&group, &rockland, cfg.grid_n)?;
            let rep = heat_scaling_check(&group, &run, 0.5, 1.0, SCALING_FLOOR)?;
            let mut t = Table::new(&["tau", "mass"]);
            for (tau, m) in &run.mass_trace {
                t.push(vec![fmt_num(*tau), fmt_num(*m)]);
            }
            let rows = vec![
                CriterionResult::at_most("7.heat.scaling-deviation", group.name(), rep.max_rel_deviation, 0.05)
                    .with_refinement(Refinement::NotRun)
                    .with_detail(format!("N = {}, {} nodes, dt = {:.3e}", cfg.grid_n, rep.nodes, run.dt)),
                CriterionResult::at_most("7.heat.mass-drift", group.name(), run.max_mass_drift(), 0.01),
            ];
            done(t, rows)
        }
        Command::Bessel { g, order, .. } => {
            let group = resolve_group(&g.group)?;
            verify::numeric_supported(&group)?;
            let ncfg = numeric_config(cfg);
            let orders: Result<Vec<f64>, _> = order.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let orders = orders.map_err(|_| NumError::Config(format!("bad --order {order:?}")))?;
            let rockland = verify::default_rockland(&group)?;
            let run = verify::run_heat(&group, &rockland, cfg.grid_n)?;
            let profile = verify::heat_profile(&group, &run)?;
            let grid = verify::semigroup_grid(&group, 1.0)?;
            let quad = TimeQuadrature::default();
            let h_l1 = profile.h.l1();
            let mut t = Table::new(&["a", "l1", "l2", "integral", "quadrature_drift", "l2_from_heat"]);
            let mut rows = Vec::new();
            for a in orders {
                let b = bessel_potential(&group, &profile, a, &grid, Sampling::CellAverage, &quad, None)?;
                let l2h = l2_norm_from_heat(&profile, a);
                t.push(vec![
                    fmt_num(a),
                    fmt_num(b.l1),
                    fmt_num(b.l2),
                    fmt_num(b.integral),
                    fmt_num(b.quadrature_drift),
                    l2h.map(fmt_num).unwrap_or_else(|| "inf".into()),
                ]);
                rows.push(
                    CriterionResult::at_most(&format!("bessel.l1-bound.a{a}"), group.name(), b.l1 / h_l1, 1.0 + quad.tolerance)
                        .with_detail("‖𝓑_a‖₁ / ‖h‖₁"),
                );
            }
            rows.extend(verify::bessel_semigroup(&group, &profile, &ncfg)?);
            done(t, rows)
        }
        Command::Decay { g, .. } => {
            let group = resolve_group(&g.group)?;
            verify::numeric_supported(&group)?;
            let ncfg = numeric_config(cfg);
            let rockland = verify::default_rockland(&group)?;
            let run = verify::run_heat(&group, &rockland, cfg.grid_n)?;
            let profile = verify::heat_profile(&group, &run)?;
            let q = group.algebra().homogeneous_dimension() as f64;
            let mut t = Table::new(&["a", "shell_radius", "mean_abs", "fitted_slope"]);
            for a in [1.0, 2.0].into_iter().filter(|&a| a < q) {
                let fit: FitReport = verify::decay_slope(&group, &profile, a, 48)?;
                for s in &fit.shells {
                    t.push(vec![fmt_num(a), fmt_num(s.radius), fmt_num(s.mean_abs), fmt_num(fit.slope)]);
                }
            }
            let rows = verify::kernel_decay(&group, &profile, &ncfg)?;
            done(t, rows)
        }
        Command::Sobolev { g, .. } => {
            let group = resolve_group(&g.group)?;
            verify::numeric_supported(&group)?;
            let ncfg = numeric_config(cfg);
            let rockland = verify::default_rockland(&group)?;
            let run = verify::run_heat(&group, &rockland, cfg.grid_n)?;
            let profile = verify::heat_profile(&group, &run)?;
            let (rows, ratios) = verify::sobolev_embedding(&group, &profile, &ncfg)?;
            let mut t = Table::new(&["trial", "ratio"]);
            for (i, r) in ratios.iter().enumerate() {
                t.push(vec![i.to_string(), fmt_num(*r)]);
            }
            done(t, rows)
        }
        Command::Plancherel { g, .. } => {
            let group = resolve_group(&g.group)?;
            let rows = verify::representation_sanity(&group, &numeric_config(cfg))?;
            done(Table::from_results(&rows), rows)
        }
        Command::VerifyAll { g, .. } => {
            let group = resolve_group(&g.group)?;
            let rows = verify::verify_all(&group, &numeric_config(cfg))?;
            done(Table::from_results(&rows), rows)
        }
    }
}

/// Runs the parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match run(&cli) {
        Ok((cfg, outcome)) => {
            if let Err(e) = emit(&cfg, &outcome) {
                eprintln!("nilcalc: {e}");
                return e.exit_code();
            }
            if outcome.summary.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("nilcalc: {e}");
            e.exit_code()
        }
    }
}
