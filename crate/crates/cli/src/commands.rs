use clap::{Args, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use robust_transfer::algebra::{projector_all_zero, projector_full, projector_span, SubspaceBasis};
use robust_transfer::analysis::{
    commutator_norms, extract_stabilizers, lemma_s1_check, robustness_report, theorem1_bound, theorem1_factors,
    verify_transfer, AncillaState, BoundQuery, BoundVariant, NULL_TOL,
};
use robust_transfer::protocols::{
    bridging_cost, build_fast_ghz, build_qudit_saturating, build_saturating, build_swap, build_symmetrized,
    ProtocolInstance,
};
use robust_transfer::runtime::{runtime_lower_bound, LightConeConstants, LightConeTime, RuntimeQuery};
use robust_transfer::tensor::{random_unitary, LatticeConfig, SchattenP};

use crate::error::CliError;
use crate::output::{exponent, num, Table};

pub const PROTOCOL_NORMS_COLUMNS: [&str; 10] =
    ["protocol", "L", "D", "declared_dim", "computed_dim", "p", "actual_norm", "bound", "gap", "transfer_pass"];
pub const SURFACE_COLUMNS: [&str; 3] = ["frac", "inv_p", "bound"];
pub const RUNTIME_COLUMNS: [&str; 8] = ["L", "k", "alpha", "p_star", "t_pnorm", "t_op", "t_frob", "best"];
pub const ENDMATTER_COLUMNS: [&str; 8] =
    ["protocol", "L", "k", "computed_dim", "p", "inv_p", "actual_norm", "bound"];

/// Fidelity tolerance for protocol transfer checks.
pub const TRANSFER_TOL: f64 = 1e-9;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one protocol and report its commutator norms against the bound.
    Analyze(AnalyzeArgs),
    /// Seeded random-unitary self-checks of the commutator identity and the bound.
    Sweep(SweepArgs),
    /// Bound over the (|𝒮|/2^(L−1), 1/p) plane.
    Surface(SurfaceArgs),
    /// Fast-GHZ and symmetrized protocol norms and bounds at L = 10.
    ReproduceEndmatter(EndmatterArgs),
    /// Runtime lower bounds from the light cones, with optional channel and bridging columns.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProtocolName {
    Saturating,
    FastGhz,
    Symmetrized,
    QuditSaturating,
    Swap,
}

impl ProtocolName {
    fn takes_subspace(self) -> bool {
        matches!(self, ProtocolName::Saturating | ProtocolName::QuditSaturating)
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub protocol: ProtocolName,
    #[arg(long = "L")]
    pub sites: usize,
    #[arg(long = "D", default_value_t = 2)]
    pub local_dim: usize,
    /// `zero`, `full`, or `basis:i,j,…` (computational basis states of the middle sites).
    #[arg(long)]
    pub subspace: Option<String>,
    #[arg(long = "p", value_delimiter = ',', default_value = "1,2,4,inf")]
    pub p: Vec<SchattenP>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long = "L", value_delimiter = ',', default_value = "2,3,4")]
    pub sites: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long = "L", default_value_t = 10)]
    pub sites: usize,
    #[arg(long = "grid", default_value_t = 50)]
    pub grid_n: usize,
}

#[derive(Debug, Args)]
pub struct EndmatterArgs {
    #[arg(long = "L", default_value_t = 10)]
    pub sites: usize,
    #[arg(long = "p", value_delimiter = ',', default_value = "1,1.5,2,3,4,6,8,12,16,inf")]
    pub p: Vec<SchattenP>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub sites: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    /// Transfer distance; defaults to L.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_pnorm: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_op: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_op: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_frob: f64,
    /// Exponent for the channel/measurement bound columns; defaults to p_star.
    #[arg(long)]
    pub p: Option<SchattenP>,
    #[arg(long)]
    pub reg_dim: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub m_list: Option<Vec<u64>>,
    /// Adds bridging-protocol cost columns.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0, requires = "beta")]
    pub kappa: f64,
}

fn sort_by_p(ps: &[SchattenP]) -> Vec<SchattenP> {
    let mut ps = ps.to_vec();
    ps.sort_by(|a, b| a.value().total_cmp(&b.value()));
    ps.dedup();
    ps
}

fn parse_subspace(spec: &str, middle_sites: usize, local_dim: usize) -> Result<SubspaceBasis, CliError> {
    match spec {
        "zero" => Ok(projector_all_zero(middle_sites, local_dim)?),
        "full" => Ok(projector_full(middle_sites, local_dim)?),
        other => {
            let list = other
                .strip_prefix("basis:")
                .ok_or_else(|| CliError::Validation(format!("unknown subspace {other:?}")))?;
            let full = projector_full(middle_sites, local_dim)?;
            let vectors = list
                .split(',')
                .map(|s| {
                    let idx: usize =
                        s.trim().parse().map_err(|_| CliError::Validation(format!("bad basis index {s:?}")))?;
                    full.vectors()
                        .get(idx)
                        .cloned()
                        .ok_or_else(|| CliError::Validation(format!("basis index {idx} out of range")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(projector_span(&vectors)?)
        }
    }
}

pub fn build_protocol(
    name: ProtocolName,
    sites: usize,
    local_dim: usize,
    subspace: Option<&str>,
) -> Result<ProtocolInstance, CliError> {
    if subspace.is_some() && !name.takes_subspace() {
        return Err(CliError::Validation(format!("--subspace applies only to saturating protocols, not {name:?}")));
    }
    if local_dim != 2 && !matches!(name, ProtocolName::QuditSaturating | ProtocolName::Swap) {
        return Err(CliError::Validation(format!("{name:?} is a qubit protocol; got D = {local_dim}")));
    }
    let cfg = LatticeConfig::chain(sites, local_dim)?;
    let s_prime = || parse_subspace(subspace.unwrap_or("zero"), sites - 2, local_dim);
    Ok(match name {
        ProtocolName::Saturating => build_saturating(cfg, &s_prime()?)?,
        ProtocolName::QuditSaturating => build_qudit_saturating(cfg, &s_prime()?)?,
        ProtocolName::FastGhz => build_fast_ghz(cfg)?,
        ProtocolName::Symmetrized => build_symmetrized(cfg)?,
        ProtocolName::Swap => build_swap(cfg)?,
    })
}

/// Transfer check on every declared basis state and on their uniform mixture.
pub fn declared_transfer_passes(p: &ProtocolInstance) -> Result<bool, CliError> {
    let basis = p.declared_subspace.vectors();
    for v in basis {
        if !verify_transfer(&p.unitary, &AncillaState::Pure(v.clone()), &p.cfg, TRANSFER_TOL)?.passed {
            return Ok(false);
        }
    }
    Ok(verify_transfer(&p.unitary, &AncillaState::uniform(basis), &p.cfg, TRANSFER_TOL)?.passed)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Table, CliError> {
    let ps = sort_by_p(&args.p);
    let protocol = build_protocol(args.protocol, args.sites, args.local_dim, args.subspace.as_deref())?;
    let cfg = protocol.cfg;
    let computed = robustness_report(&protocol.unitary, &cfg, NULL_TOL)?.joint.dim();
    let norms = commutator_norms(&protocol.unitary, &cfg, &ps)?;
    let transfer = declared_transfer_passes(&protocol)?;

    let mut table = Table::new(&PROTOCOL_NORMS_COLUMNS);
    for (&p, actual) in ps.iter().zip(norms) {
        // an empty robustness subspace admits no bound
        let bound = if computed == 0 {
            None
        } else {
            let q = BoundQuery {
                sites: cfg.sites(),
                dim_s: computed as f64,
                p,
                local_dim: cfg.local_dim(),
                variant: BoundVariant::for_local_dim(cfg.local_dim()),
            };
            Some(theorem1_bound(&q)?)
        };
        table.push(vec![
            protocol.name.clone(),
            cfg.sites().to_string(),
            cfg.local_dim().to_string(),
            protocol.declared_subspace.dim().to_string(),
            computed.to_string(),
            exponent(p),
            num(actual),
            bound.map_or("NA".into(), num),
            bound.map_or("NA".into(), |b| num(actual - b)),
            transfer.to_string(),
        ]);
    }
    Ok(table)
}

pub const SWEEP_COLUMNS: [&str; 7] = ["trial", "L", "computed_dim", "lemma_s1_dev", "eq6_dev", "min_gap", "pass"];

/// Tolerance for the commutator identity in the sweep.
pub const LEMMA_TOL: f64 = 1e-10;

/// Random unitaries: the commutator identity, the stabilizer relation, and the
/// bound whenever the unitary happens to transfer. A breach makes the command fail.
pub fn sweep(args: &SweepArgs) -> Result<Table, CliError> {
    if args.count == 0 {
        return Err(CliError::Validation("--count must be positive".into()));
    }
    let cfgs = args.sites.iter().map(|&l| LatticeConfig::qubit_chain(l)).collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, LatticeConfig)> =
        cfgs.iter().flat_map(|cfg| (0..args.count).map(move |t| (t, *cfg))).collect();
    let ps = [SchattenP::Finite(1.0), SchattenP::Finite(2.0), SchattenP::Finite(4.0), SchattenP::Infinity];

    let rows = jobs
        .par_iter()
        .map(|&(trial, cfg)| -> Result<(usize, usize, Vec<String>, bool), CliError> {
            let seed = args.seed ^ ((cfg.sites() as u64) << 32) ^ trial as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_unitary(cfg.dim(), &mut rng);
            let lemma = lemma_s1_check(&u, &cfg)?;
            let eq6 = extract_stabilizers(&u, &cfg)?.hermiticity_relation_deviation()?;
            let computed = robustness_report(&u, &cfg, NULL_TOL)?.joint.dim();
            let min_gap = if computed == 0 {
                None
            } else {
                let norms = commutator_norms(&u, &cfg, &ps)?;
                let mut gap = f64::INFINITY;
                for (&p, actual) in ps.iter().zip(norms) {
                    gap = gap.min(actual - theorem1_bound(&BoundQuery::qubit(cfg.sites(), computed as f64, p))?);
                }
                Some(gap)
            };
            let pass = lemma <= LEMMA_TOL && eq6 <= 1e-9 && min_gap.is_none_or(|g| g >= -1e-9);
            let row = vec![
                trial.to_string(),
                cfg.sites().to_string(),
                computed.to_string(),
                num(lemma),
                num(eq6),
                min_gap.map_or("NA".into(), num),
                pass.to_string(),
            ];
            Ok((cfg.sites(), trial, row, pass))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = rows;
    rows.sort_by_key(|r| (r.0, r.1));
    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut failures = 0;
    for (_, _, row, pass) in rows {
        failures += usize::from(!pass);
        table.push(row);
    }
    if failures > 0 {
        return Err(CliError::SelfCheck { failures, table });
    }
    Ok(table)
}

/// `2·frac^{1/p}`.
pub fn surface_bound(frac: f64, inv_p: f64) -> f64 {
    2.0 * frac.powf(inv_p)
}

/// One `(frac, 1/p, bound)` cell of the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub frac: f64,
    pub inv_p: f64,
    pub bound: f64,
}

/// Log-spaced `frac = 2^{(1−L)(1−j/(n−1))}` from `2^{1−L}` to exactly 1, and
/// `1/p = m/(n−1)` from exactly 0 to 1.
pub fn surface_grid(sites: usize, grid_n: usize) -> Result<Vec<SurfacePoint>, CliError> {
    if grid_n < 2 {
        return Err(CliError::Validation(format!("--grid must be >= 2, got {grid_n}")));
    }
    if sites < 2 {
        return Err(CliError::Validation(format!("--L must be >= 2, got {sites}")));
    }
    let last = (grid_n - 1) as f64;
    let mut points = Vec::with_capacity(grid_n * grid_n);
    for j in 0..grid_n {
        let frac = ((1.0 - sites as f64) * (grid_n - 1 - j) as f64 / last).exp2();
        for m in 0..grid_n {
            let inv_p = m as f64 / last;
            points.push(SurfacePoint { frac, inv_p, bound: surface_bound(frac, inv_p) });
        }
    }
    Ok(points)
}

pub fn surface(args: &SurfaceArgs) -> Result<Table, CliError> {
    let mut table = Table::new(&SURFACE_COLUMNS);
    for pt in surface_grid(args.sites, args.grid_n)? {
        table.push(vec![num(pt.frac), num(pt.inv_p), num(pt.bound)]);
    }
    Ok(table)
}

pub fn reproduce_endmatter(args: &EndmatterArgs) -> Result<Table, CliError> {
    let ps = sort_by_p(&args.p);
    let cfg = LatticeConfig::qubit_chain(args.sites)?;
    let builds: [fn(LatticeConfig) -> robust_transfer::Result<ProtocolInstance>; 2] =
        [build_fast_ghz, build_symmetrized];

    let mut table = Table::new(&ENDMATTER_COLUMNS);
    for build in builds {
        let protocol = build(cfg)?;
        let computed = robustness_report(&protocol.unitary, &cfg, NULL_TOL)?.joint.dim();
        if computed == 0 {
            return Err(CliError::Numerical(format!("{} has an empty robustness subspace", protocol.name)));
        }
        let norms = commutator_norms(&protocol.unitary, &cfg, &ps)?;
        for (&p, actual) in ps.iter().zip(norms) {
            let bound = theorem1_bound(&BoundQuery::qubit(args.sites, computed as f64, p))?;
            table.push(vec![
                protocol.name.clone(),
                args.sites.to_string(),
                computed.ilog2().to_string(),
                computed.to_string(),
                exponent(p),
                num(p.inverse()),
                num(actual),
                num(bound),
            ]);
        }
    }
    Ok(table)
}

fn time_cell(t: &robust_transfer::Result<LightConeTime>) -> String {
    t.as_ref().map_or("NA".into(), |t| num(t.time))
}

pub fn bounds(args: &BoundsArgs) -> Result<Table, CliError> {
    let constants = LightConeConstants {
        c_pnorm: args.c_pnorm,
        c_op: args.c_op,
        v: args.v,
        beta_op: args.beta_op,
        c_frob: args.c_frob,
    };
    constants.validate()?;
    let mut queries = Vec::new();
    for &l in &args.sites {
        for &k in &args.k {
            if l < 2 || k >= l {
                return Err(CliError::Validation(format!("need 0 <= k <= L-1, got L = {l}, k = {k}")));
            }
            for &alpha in &args.alpha {
                if !(alpha > 0.0) {
                    return Err(CliError::Validation(format!("α must be positive, got {alpha}")));
                }
                queries.push(RuntimeQuery { sites: l, r: args.r.unwrap_or(l as f64), k, alpha, constants });
            }
        }
    }
    let with_factors = args.reg_dim.is_some() || args.m_list.is_some();

    let mut columns: Vec<&str> = RUNTIME_COLUMNS.to_vec();
    columns.extend(["r", "c_pnorm", "c_op", "v", "beta_op", "c_frob"]);
    if with_factors {
        columns.extend(["p", "bound_base", "reg_factor", "meas_factor", "bound"]);
    }
    if args.beta.is_some() {
        columns.extend(["beta", "kappa", "bridging_total", "bridging_outside_regime"]);
    }
    let mut table = Table::new(&columns);
    queries.sort_by(|a, b| (a.sites, a.k).cmp(&(b.sites, b.k)).then(a.alpha.total_cmp(&b.alpha)));
    for q in &queries {
        let rb = runtime_lower_bound(q)?;
        let mut row = vec![
            q.sites.to_string(),
            q.k.to_string(),
            num(q.alpha),
            num(rb.p_star),
            time_cell(&rb.pnorm),
            time_cell(&rb.opnorm),
            time_cell(&rb.frobenius),
            rb.best().map_or("NA".into(), num),
            num(q.r),
            num(constants.c_pnorm),
            num(constants.c_op),
            num(constants.v),
            num(constants.beta_op),
            num(constants.c_frob),
        ];
        if with_factors {
            let p = args.p.unwrap_or(SchattenP::Finite(rb.p_star));
            let reg_dim = args.reg_dim.unwrap_or(1.0);
            let variant = match &args.m_list {
                Some(m) => BoundVariant::Measurement { reg_dim, outcomes: m.clone() },
                None => BoundVariant::Channel { reg_dim },
            };
            let query = BoundQuery::qubit(q.sites, (q.k as f64).exp2(), p).with_variant(variant);
            let f = theorem1_factors(&query)?;
            row.extend([exponent(p), num(f.base), num(f.register), num(f.measurement), num(f.value)]);
        }
        if let Some(beta) = args.beta {
            let cost = bridging_cost(q.sites as f64, q.alpha, beta, args.kappa)?;
            row.extend([num(beta), num(args.kappa), num(cost.total), cost.outside_regime.to_string()]);
        }
        table.push(row);
    }
    Ok(table)
}

pub fn run(command: &Command) -> Result<Table, CliError> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::Sweep(a) => sweep(a),
        Command::Surface(a) => surface(a),
        Command::ReproduceEndmatter(a) => reproduce_endmatter(a),
        Command::Bounds(a) => bounds(a),
    }
}
