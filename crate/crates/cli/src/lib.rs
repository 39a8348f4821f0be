//! Command-line front end. `run` does all the work and returns the report;
//! `main` only prints it and sets the exit code.

use std::path::Path;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use repzeta_core::catalog::{
    formula, sl3_family_solve, subgroup_factor, topological_zeta, CatalogError, FormulaFamily,
};
use repzeta_core::integral::{full_zeta_numeric, relative_zeta_numeric, IntegralError};
use repzeta_core::lattice::linalg::{diag, QMat};
use repzeta_core::lattice::{
    builtin, is_fab, load_spec_file, parse_builtin, permissible, potency_check, validate_lie,
    BuiltinParams, LatticeError, LatticeInput,
};
use repzeta_core::oracle::{full_census, relative_census, OracleConfig, OracleError, OrbitCensus, DEFAULT_BUDGET};
use repzeta_core::polyring::{abscissa, series_expand, specialize_series, PolyError, RatFuncQT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "repzeta", version, about = "Representation zeta functions of p-adic Lie lattices")]
pub struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check a lattice spec: Lie axioms, FAb, potency.
    Validate(SpecArgs),
    /// Print the closed-form zeta functions of a family.
    Formula(FamilyArgs),
    /// Expand a family's zeta function as a Dirichlet series in t = q^-s.
    Series(SeriesArgs),
    /// Count orbits over a finite quotient.
    Oracle(OracleArgs),
    /// Compare orbit counts with the closed form, coefficient by coefficient.
    Compare(CompareArgs),
    /// Certified interval for the zeta function at an integer s.
    Integral(IntegralArgs),
    /// Solve for psi and the zeta factor of a sublattice.
    SubgroupFactor(SubgroupArgs),
    /// Diagonal sublattices of sl3 with a constant zeta factor.
    Sl3Family(Sl3Args),
    /// Abscissa of convergence of a family's full zeta function.
    Abscissa(FamilyArgs),
    /// Tabulated topological zeta function of a family.
    Topzeta(FamilyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// `builtin:<selector>` or a JSON spec file.
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// sl2base | natural | sym2 | sym2z2 | hk
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Highest power of t.
    #[arg(long = "K", default_value_t = 6)]
    pub k_max: usize,
    /// Substitute q = p in the coefficients.
    #[arg(long)]
    pub p: Option<u64>,
    /// full | relative | unshifted | base
    #[arg(long, default_value = "full")]
    pub part: String,
}

#[derive(Args, Debug, Clone)]
pub struct OracleRun {
    /// Enumeration level N (the quotient mod p^N).
    #[arg(long)]
    pub level: u32,
    /// Point budget; defaults to REPZETA_BUDGET or the built-in cap.
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Follow orbits of size at most p^lift past the enumeration level.
    #[arg(long)]
    pub lift: Option<u32>,
    /// Orbits on the module dual instead of coadjoint orbits.
    #[arg(long)]
    pub relative: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub run: OracleRun,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub run: OracleRun,
    /// Family to compare against; inferred from builtin selectors.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct IntegralArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub s: i64,
    /// Refinement depth cap.
    #[arg(long = "L", default_value_t = 2)]
    pub depth: u32,
    /// Number of shells summed before the tail bound.
    #[arg(long = "J", default_value_t = 10)]
    pub shells: u32,
    /// Integrate the full zeta function of a semidirect spec.
    #[arg(long)]
    pub full: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SubgroupArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Basis change, rows separated by `;`, entries by `,`.
    #[arg(long, conflicts_with = "diag")]
    pub xi: Option<String>,
    /// Diagonal basis change, entries separated by `,`.
    #[arg(long)]
    pub diag: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Sl3Args {
    pub k6: u32,
    pub k7: u32,
    pub k8: u32,
    #[arg(long, default_value_t = 3)]
    pub p: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<IntegralError> for CliError {
    fn from(e: IntegralError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

/// Output of one command. Contains nothing that depends on timing or on
/// the worker count.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: EXIT_OK }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code with the rendered output.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match run(&cli) {
            Ok(r) => (r.code, r.render(cli.json)),
            Err(e) => (e.exit_code(), format!("error: {e}\n")),
        },
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            (code, e.to_string())
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Formula(a) => cmd_formula(a),
        Command::Series(a) => cmd_series(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Integral(a) => cmd_integral(a),
        Command::SubgroupFactor(a) => cmd_subgroup(a),
        Command::Sl3Family(a) => cmd_sl3(a),
        Command::Abscissa(a) => cmd_abscissa(a),
        Command::Topzeta(a) => cmd_topzeta(a),
    }
}

fn load(a: &SpecArgs) -> Result<LatticeInput, CliError> {
    let input = if a.spec.starts_with("builtin:") {
        parse_builtin(&a.spec, &BuiltinParams::new(a.p.unwrap_or(3), a.m.unwrap_or(1)))?
    } else {
        let f = load_spec_file(Path::new(&a.spec))?;
        let (p, m) = (a.p.unwrap_or(f.base().prime), a.m.unwrap_or(f.base().level_m));
        f.with_prime_level(p, m)
    };
    if input.base().prime < 2 {
        return Err(CliError::Invalid("p must be at least 2".into()));
    }
    Ok(input)
}

fn family_of(a: &FamilyArgs) -> Result<FormulaFamily, CliError> {
    Ok(FormulaFamily::from_selector(&a.family, a.n, a.m, a.k)?)
}

fn family_json(f: &FormulaFamily) -> Value {
    serde_json::to_value(f).expect("family serializes")
}

fn cmd_validate(a: &SpecArgs) -> Result<Report, CliError> {
    let input = load(a)?;
    let lat = input.lattice();
    if let Err(v) = validate_lie(&lat) {
        return Err(CliError::Invalid(v.to_string()));
    }
    let m = lat.level_m;
    let rows = [
        ("name", lat.name.clone()),
        ("dimension", lat.dim().to_string()),
        ("basis", lat.basis.join(", ")),
        ("prime", lat.prime.to_string()),
        ("level m", m.to_string()),
        ("semidirect", input.semidirect().is_some().to_string()),
        ("FAb", is_fab(&lat).to_string()),
        ("permissible", permissible(&lat, m).to_string()),
        ("potent", potency_check(&lat, m).to_string()),
    ];
    let mut text = String::from("lie axioms: ok\n");
    for (k, v) in &rows {
        text.push_str(&format!("{k}: {v}\n"));
    }
    let json = json!({
        "command": "validate",
        "spec": a.spec,
        "valid": true,
        "name": lat.name,
        "dimension": lat.dim(),
        "basis": lat.basis,
        "prime": lat.prime,
        "level_m": m,
        "semidirect": input.semidirect().is_some(),
        "fab": is_fab(&lat),
        "permissible": permissible(&lat, m),
        "potent": potency_check(&lat, m),
    });
    Ok(Report::ok(text, json))
}

fn cmd_formula(a: &FamilyArgs) -> Result<Report, CliError> {
    let fam = family_of(a)?;
    let b = formula(&fam)?;
    let parts = [
        ("relative_unshifted", &b.relative_unshifted),
        ("relative_shifted", &b.relative_shifted),
        ("base", &b.base),
        ("full", &b.full),
    ];
    let mut text = format!("family: {fam:?}\n");
    let mut obj = serde_json::Map::new();
    for (k, v) in parts {
        text.push_str(&format!("{k}: {v}\n"));
        obj.insert(k.into(), Value::String(v.to_string()));
    }
    Ok(Report::ok(text, json!({ "command": "formula", "family": family_json(&fam), "bundle": obj })))
}

fn pick_part(b: &repzeta_core::catalog::FormulaBundle, part: &str) -> Result<RatFuncQT, CliError> {
    Ok(match part {
        "full" => b.full.clone(),
        "relative" => b.relative_shifted.clone(),
        "unshifted" => b.relative_unshifted.clone(),
        "base" => b.base.clone(),
        _ => return Err(CliError::Invalid(format!("unknown part `{part}`"))),
    })
}

fn cmd_series(a: &SeriesArgs) -> Result<Report, CliError> {
    let fam = family_of(&a.family)?;
    let f = pick_part(&formula(&fam)?, &a.part)?;
    let s = series_expand(&f, a.k_max)?;
    let values = match a.p {
        Some(p) => Some(specialize_series(&s, &BigInt::from(p))?),
        None => None,
    };
    let mut text = format!("family: {fam:?}\npart: {}\n", a.part);
    let mut rows = Vec::new();
    for (k, c) in s.coeffs.iter().enumerate() {
        match &values {
            Some(v) => text.push_str(&format!("t^{k} | {c} | {}\n", v[k])),
            None => text.push_str(&format!("t^{k} | {c}\n")),
        }
        rows.push(json!({
            "k": k,
            "coefficient": c.to_string(),
            "value": values.as_ref().map(|v| v[k].to_string()),
        }));
    }
    Ok(Report::ok(
        text,
        json!({ "command": "series", "family": family_json(&fam), "part": a.part, "p": a.p, "coefficients": rows }),
    ))
}

fn budget(b: Option<u128>) -> Result<u128, CliError> {
    if let Some(b) = b {
        return if b == 0 { Err(CliError::Invalid("budget must be positive".into())) } else { Ok(b) };
    }
    match std::env::var("REPZETA_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| CliError::Invalid(format!("REPZETA_BUDGET=`{v}` is not a positive integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn census(input: &LatticeInput, r: &OracleRun, lift: Option<u32>) -> Result<OrbitCensus, CliError> {
    if r.workers == 0 {
        return Err(CliError::Invalid("workers must be positive".into()));
    }
    let cfg = OracleConfig { budget: budget(r.budget)?, workers: r.workers, lift_exp: lift, ..OracleConfig::default() };
    Ok(if r.relative {
        let sd = input
            .semidirect()
            .ok_or_else(|| CliError::Invalid("--relative needs a semidirect spec".into()))?;
        relative_census(sd, r.level, &cfg)?
    } else {
        full_census(&input.lattice(), r.level, &cfg)?
    })
}

fn census_json(c: &OrbitCensus) -> Value {
    let orbits: Vec<Value> = c
        .orbits
        .iter()
        .map(|(&(l, s), &n)| json!({ "level": l, "size": (c.prime as u128).pow(s).to_string(), "count": n }))
        .collect();
    let series = c.to_series();
    let coeffs: Vec<Value> = series
        .coeffs
        .iter()
        .zip(&series.final_mask)
        .enumerate()
        .map(|(k, (r, f))| json!({ "k": k, "r": r, "final": f }))
        .collect();
    json!({
        "kind": format!("{:?}", c.kind),
        "prime": c.prime,
        "level": c.level,
        "top_level": c.top_level,
        "orbits": orbits,
        "coefficients": coeffs,
    })
}

fn cmd_oracle(a: &OracleArgs) -> Result<Report, CliError> {
    let input = load(&a.spec)?;
    let c = census(&input, &a.run, a.run.lift)?;
    let kind = if a.run.relative { "relative" } else { "full" };
    let text = format!("census: {kind} spec={} level={}\n{c}", a.spec.spec, a.run.level);
    Ok(Report::ok(text, json!({ "command": "oracle", "spec": a.spec.spec, "census": census_json(&c) })))
}

fn infer_family(a: &CompareArgs, input: &LatticeInput) -> Result<FormulaFamily, CliError> {
    let m = input.base().level_m;
    let (name, n, k) = match &a.family {
        Some(f) => (f.clone(), a.n.unwrap_or(1), a.k.unwrap_or(1)),
        None => {
            let sel = a.spec.spec.strip_prefix("builtin:").ok_or_else(|| {
                CliError::Invalid("cannot infer a family from a spec file; pass --family".into())
            })?;
            let mut it = sel.split(':');
            let name = it.next().unwrap_or_default().to_string();
            let arg = |key: &str| -> Option<u32> {
                sel.split(':')
                    .skip(1)
                    .flat_map(|s| s.split(','))
                    .filter_map(|kv| kv.split_once('='))
                    .find(|(kk, _)| *kk == key)
                    .and_then(|(_, v)| v.parse().ok())
            };
            let name = match name.as_str() {
                "sl2" => "sl2base".to_string(),
                "natural" | "sym2" | "hk" => name,
                other => {
                    return Err(CliError::Invalid(format!("no closed form for builtin `{other}`; pass --family")))
                }
            };
            (name, arg("n").unwrap_or(1), arg("k").unwrap_or(1))
        }
    };
    let fam = FormulaFamily::from_selector(&name, n, m, k)?;
    if let FormulaFamily::HkSubgroup { .. } = fam {
        if m != 1 {
            return Err(CliError::Invalid("the hk family is defined for m = 1".into()));
        }
    }
    Ok(fam)
}

fn cmd_compare(a: &CompareArgs) -> Result<Report, CliError> {
    let input = load(&a.spec)?;
    let fam = infer_family(a, &input)?;
    let p = input.base().prime;
    if fam.fixed_prime().is_some_and(|fp| fp != p) {
        return Err(CliError::Invalid(format!("family {fam:?} needs p = {}", fam.fixed_prime().unwrap())));
    }
    // by default follow small orbits far enough to settle dimensions below p^N
    let lift = a.run.lift.or(if a.run.relative { None } else { Some(2 * (a.run.level - 1).max(1)) });
    let c = census(&input, &a.run, lift)?;
    let b = formula(&fam)?;
    let (target, oracle) = if a.run.relative {
        (&b.relative_shifted, c.weighted_series())
    } else {
        (&b.full, c.to_series())
    };
    let top = oracle.coeffs.len().saturating_sub(1);
    let expected = specialize_series(&series_expand(target, top)?, &BigInt::from(p))?;
    let kind = if a.run.relative { "relative" } else { "full" };
    let lift_s = lift.map_or("none".to_string(), |l| l.to_string());
    let mut text = format!(
        "compare: {kind} spec={} family={fam:?} p={p} level={} lift={lift_s}\n",
        a.spec.spec, a.run.level
    );
    text.push_str("dimension | oracle | formula | status\n");
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    let mut rows = Vec::new();
    for k in 0..=top {
        let got = oracle.coeffs[k];
        let want = &expected[k];
        let status = if !oracle.final_mask[k] {
            skip += 1;
            "SKIPPED"
        } else if *want == BigRational::from_integer(got.into()) {
            pass += 1;
            "PASS"
        } else {
            fail += 1;
            "FAIL"
        };
        text.push_str(&format!("q^{k} | {got} | {want} | {status}\n"));
        rows.push(json!({ "k": k, "oracle": got, "formula": want.to_string(), "status": status }));
    }
    let ok = fail == 0 && pass > 0;
    let verdict = if ok { "PASS" } else { "FAIL" };
    text.push_str(&format!("result: {verdict} ({pass} passed, {fail} failed, {skip} skipped)\n"));
    let json = json!({
        "command": "compare",
        "kind": kind,
        "spec": a.spec.spec,
        "family": family_json(&fam),
        "p": p,
        "level": a.run.level,
        "lift": lift,
        "rows": rows,
        "result": verdict,
    });
    Ok(Report { text, json, code: if ok { EXIT_OK } else { EXIT_MISMATCH } })
}

/// Rounds to `digits` decimal places.
pub fn decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let v = (x * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = v.is_negative();
    let v = v.abs();
    let (int, frac) = (&v / &scale, &v % &scale);
    let sign = if neg && !v.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
}

fn cmd_integral(a: &IntegralArgs) -> Result<Report, CliError> {
    let input = load(&a.spec)?;
    let s = BigRational::from_integer(a.s.into());
    let (kind, est) = match input.semidirect() {
        Some(sd) if !a.full => ("relative", relative_zeta_numeric(sd, &s, a.depth, a.shells)?),
        _ => ("full", full_zeta_numeric(&input.lattice(), &s, a.depth, a.shells)?),
    };
    let w = est.width();
    let text = format!(
        "integral: {kind} spec={} s={} L={} J={}\nlower: {} ({})\nupper: {} ({})\nwidth: {}\ntail bound: {}\nunresolved: {}\nballs: {}\n",
        a.spec.spec,
        a.s,
        a.depth,
        a.shells,
        decimal(&est.lower, 12),
        est.lower,
        decimal(&est.upper, 12),
        est.upper,
        decimal(&w, 12),
        decimal(&est.tail_bound, 12),
        decimal(&est.unresolved, 12),
        est.balls,
    );
    let json = json!({
        "command": "integral",
        "kind": kind,
        "spec": a.spec.spec,
        "estimate": serde_json::to_value(&est).expect("estimate serializes"),
        "width": w.to_string(),
    });
    Ok(Report::ok(text, json))
}

fn parse_row(s: &str) -> Result<Vec<BigRational>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| CliError::Invalid(format!("bad matrix entry `{x}`")))
        })
        .collect()
}

fn cmd_subgroup(a: &SubgroupArgs) -> Result<Report, CliError> {
    let input = load(&a.spec)?;
    let lat = input.lattice();
    let xi: QMat = match (&a.xi, &a.diag) {
        (Some(x), None) => x.split(';').map(parse_row).collect::<Result<_, _>>()?,
        (None, Some(d)) => diag(&parse_row(d)?),
        _ => return Err(CliError::Invalid("give exactly one of --xi and --diag".into())),
    };
    let r = subgroup_factor(&lat, &xi)?;
    let mut text = format!("subgroup-factor: spec={}\npsi:\n", a.spec.spec);
    for row in &r.psi {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("  [{}]\n", cells.join(", ")));
    }
    text.push_str(&format!("factor: q^{}\n", r.factor_exponent));
    let json = json!({ "command": "subgroup-factor", "spec": a.spec.spec, "result": r });
    Ok(Report::ok(text, json))
}

fn cmd_sl3(a: &Sl3Args) -> Result<Report, CliError> {
    match sl3_family_solve(a.k6, a.k7, a.k8) {
        Ok(ks) => {
            let sl3 = builtin("sl3", &BuiltinParams::new(a.p, 1))?.lattice();
            let xi = diag(&ks.map(|k| BigRational::from_integer(BigInt::from(a.p).pow(k))));
            let r = subgroup_factor(&sl3, &xi)?;
            let v: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
            let text = format!("exponents: ({})\nfactor: q^{}\n", v.join(", "), r.factor_exponent);
            let json = json!({ "command": "sl3-family", "exponents": ks, "factor_exponent": r.factor_exponent });
            Ok(Report::ok(text, json))
        }
        Err(CatalogError::Infeasible(why)) => Ok(Report::ok(
            format!("infeasible: {why}\n"),
            json!({ "command": "sl3-family", "infeasible": why }),
        )),
        Err(e) => Err(e.into()),
    }
}

fn cmd_abscissa(a: &FamilyArgs) -> Result<Report, CliError> {
    let fam = family_of(a)?;
    let r = abscissa(&formula(&fam)?.full)?;
    let cancelled: Vec<String> = r.cancelled_factors.iter().map(|(a, b)| format!("1 - q^{a} t^{b}")).collect();
    let text = format!(
        "family: {fam:?}\nabscissa: {}\nwitness: 1 - q^{} t^{}\ncancelled: [{}]\n",
        r.alpha_rational(),
        r.witness_factor.0,
        r.witness_factor.1,
        cancelled.join(", ")
    );
    let json = json!({ "command": "abscissa", "family": family_json(&fam), "report": r });
    Ok(Report::ok(text, json))
}

fn cmd_topzeta(a: &FamilyArgs) -> Result<Report, CliError> {
    let fam = family_of(a)?;
    let z = topological_zeta(&fam)?;
    Ok(Report::ok(
        format!("family: {fam:?}\ntopological zeta: {z}\n"),
        json!({ "command": "topzeta", "family": family_json(&fam), "zeta": z.to_string() }),
    ))
}
