//! The `thetadeform` command line.
//!
//! Exit codes: 0 pass, 1 failure with a witness, 2 undecided at the degree
//! bound, 64 usage error.

pub mod json;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::algebra::{generate_exchange_relations, Decision, Element, PairSelection, Presentation};
use crate::catalog::{
    build_nc_torus, build_sphere, build_su_theta, build_su_theta_full, generic4, sphere_lambda, su3_k, su4_k,
    thetaprime, CatalogName, Family,
};
use crate::coaction::{
    builtin, check_extension_with, fixed_points, match_presentation, CoactionSpec, ConstraintReport, ExtensionStatus,
    FixedPoints, MatchReport,
};
use crate::error::{Error, Result};
use crate::hopf::{check_torus_group, full_check, CheckReport, MatrixQuantumGroup, Status};
use crate::phase::{to_f64, DeformationMatrix, LinearForm, Param, Substitution};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "thetadeform", version, about = "Exact computations with θ-deformed algebras and quantum groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exchange (and structural) relations of a catalog algebra.
    Relations {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Also pair generators with starred generators.
        #[arg(long)]
        with_stars: bool,
        /// Also print structural relations (always shown for tori and spheres).
        #[arg(long)]
        structural: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the Hopf-algebra checks on su:n (or the group-like checks on torus:n).
    HopfCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a coaction extends to the deformed algebras.
    ActCheck {
        /// A built-in spec name or a JSON spec file.
        spec: String,
        /// Also reduce the images of the structural relations modulo the tensor ideal.
        #[arg(long)]
        structural: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compute generators of the fixed-point subalgebra and match them to the catalog.
    FixedPoints {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Export a presentation (catalog name or JSON file) or, with --spec, a coaction spec.
    Export {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Export this coaction spec instead of an algebra.
        #[arg(long)]
        spec: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    /// `torus:n`, `sphere:n`, `su:n`, or a presentation JSON file.
    #[arg(default_value = "su:3")]
    algebra: String,
    /// Torus matrix K of su:n.
    #[arg(long = "K")]
    k: Option<String>,
    /// Deformation matrix of torus:n and sphere:n.
    #[arg(long)]
    lambda: Option<String>,
    /// Named (thetaprime, generic4) or literal deformation matrix.
    #[arg(long)]
    matrix: Option<String>,
    /// Full 2(n−1)-square deformation matrix of su:n, not necessarily K ⊕ (−K).
    #[arg(long)]
    theta_full: Option<String>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Parameter substitutions `name=value`; values are rational-affine expressions.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Add floating-point values of the phases (export only).
    #[arg(long)]
    approx: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

/// Parses `name=value` pairs.
pub fn parse_params(items: &[String]) -> Result<Substitution> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (k, v) = s.split_once('=').ok_or_else(|| Error::Usage(format!("expected name=value, got `{s}`")))?;
            Ok((Param::new(k.trim()), LinearForm::parse(v)?))
        })
        .collect()
}

/// A deformation matrix from a preset name, a full literal
/// (`[[0,t],[-t,0]]` or `0,t;-t,0`), a list of upper entries (`a,b,c`) or
/// a single expression used for every upper entry.
pub fn parse_matrix(src: &str, dim: usize) -> Result<DeformationMatrix> {
    let m = match src.trim() {
        "thetaprime" => thetaprime(),
        "generic4" => generic4(),
        "symbolic" => DeformationMatrix::symbolic(dim, "lambda"),
        s if s.starts_with('[') || s.contains(';') => {
            let body = s.replace(' ', "").replace("],[", ";");
            let body = body.trim_start_matches('[').trim_end_matches(']');
            let rows = body
                .split(';')
                .map(|r| r.trim_matches(['[', ']']).split(',').map(LinearForm::parse).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            DeformationMatrix::from_rows(rows)?
        }
        s if s.contains(',') => {
            let entries = s.split(',').map(LinearForm::parse).collect::<Result<Vec<_>>>()?;
            let needed = dim * dim.saturating_sub(1) / 2;
            if entries.len() != needed {
                return Err(Error::Usage(format!("expected {needed} upper entries, got {}", entries.len())));
            }
            let mut it = entries.into_iter();
            DeformationMatrix::from_upper(dim, |_, _| it.next().expect("counted"))
        }
        s => {
            let f = LinearForm::parse(s)?;
            DeformationMatrix::from_upper(dim, |_, _| f.clone())
        }
    };
    if m.dim() != dim {
        return Err(Error::Dimension { expected: dim, got: m.dim() });
    }
    Ok(m)
}

enum Built {
    Plain(Presentation),
    Group(Box<MatrixQuantumGroup>),
}

impl Built {
    fn presentation(&self) -> &Presentation {
        match self {
            Built::Plain(p) => p,
            Built::Group(q) => &q.presentation,
        }
    }
}

fn build_algebra(a: &AlgebraArgs, subs: &Substitution) -> Result<Built> {
    if a.algebra.ends_with(".json") {
        let text = std::fs::read_to_string(&a.algebra).map_err(|e| Error::Usage(format!("{}: {e}", a.algebra)))?;
        let j: json::PresentationJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(Built::Plain(json::presentation_from_json(&j)?.substitute(subs)));
    }
    let name = CatalogName::parse(&a.algebra).map_err(|e| Error::Usage(e.to_string()))?;
    let dim = name.matrix_dim();
    let built = match name {
        CatalogName::Torus(n) | CatalogName::Sphere(n) => {
            if a.k.is_some() || a.theta_full.is_some() {
                return Err(Error::Usage("--K and --theta-full apply to su:n only".into()));
            }
            let lambda = match a.lambda.as_deref().or(a.matrix.as_deref()) {
                Some(s) => parse_matrix(s, dim)?,
                None => sphere_lambda(n),
            };
            let p = if matches!(name, CatalogName::Torus(_)) {
                build_nc_torus(&lambda)?
            } else {
                build_sphere(&lambda, n)?
            };
            Built::Plain(p.substitute(subs))
        }
        CatalogName::Su(n) => {
            if a.lambda.is_some() {
                return Err(Error::Usage("--lambda applies to torus:n and sphere:n; use --K".into()));
            }
            let q = match (&a.theta_full, a.k.as_deref().or(a.matrix.as_deref())) {
                (Some(_), Some(_)) => return Err(Error::Usage("give either --K or --theta-full".into())),
                (Some(t), None) => build_su_theta_full(n, &parse_matrix(t, 2 * (n - 1))?, "u")?,
                (None, Some(k)) => build_su_theta(n, &parse_matrix(k, dim)?)?,
                (None, None) => build_su_theta(n, &default_k(n))?,
            };
            Built::Group(Box::new(if subs.is_empty() { q } else { q.substitute(subs)? }))
        }
    };
    Ok(built)
}

fn default_k(n: usize) -> DeformationMatrix {
    match n {
        3 => su3_k(),
        4 => su4_k(),
        _ => DeformationMatrix::symbolic(n - 1, "k"),
    }
}

fn load_spec(name: &str, subs: &Substitution) -> Result<CoactionSpec> {
    let spec = if name.ends_with(".json") {
        let text = std::fs::read_to_string(name).map_err(|e| Error::Usage(format!("{name}: {e}")))?;
        let j: json::CoactionSpecJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        json::spec_from_json(&j)?
    } else {
        builtin(name)?
    };
    if subs.is_empty() {
        Ok(spec)
    } else {
        spec.substitute(subs)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn status_code(statuses: impl IntoIterator<Item = Status>) -> i32 {
    let all: Vec<Status> = statuses.into_iter().collect();
    if all.contains(&Status::Fail) {
        EXIT_FAIL
    } else if all.contains(&Status::Undecided) {
        EXIT_UNDECIDED
    } else {
        EXIT_PASS
    }
}

fn cmd_relations(
    a: &AlgebraArgs,
    with_stars: bool,
    structural: bool,
    common: &Common,
    out: &mut String,
) -> Result<i32> {
    let built = build_algebra(a, &parse_params(&common.params)?)?;
    let p = built.presentation();
    let ctx = p.ctx();
    let exchange = generate_exchange_relations(ctx, PairSelection { with_stars, include_trivial: true });
    let show_structural = structural || matches!(built, Built::Plain(_));
    let structural: Vec<_> = if show_structural { p.structural_relations().collect() } else { Vec::new() };
    match common.format {
        Format::Text => {
            for r in &exchange {
                out.push_str(&r.display(ctx));
                out.push('\n');
            }
            for r in &structural {
                out.push_str(&format!("{}: {}\n", r.label, r.display(ctx)));
            }
        }
        Format::Latex => {
            let mut lines: Vec<String> = exchange.iter().map(|r| render::exchange_latex(ctx, r)).collect();
            lines.extend(structural.iter().map(|r| render::relation_latex(ctx, r)));
            out.push_str(&render::align(&lines));
        }
        Format::Json => {
            let ex: Vec<_> = exchange
                .iter()
                .map(|r| {
                    json!({
                        "left": ctx.generator(r.left).label(),
                        "right": ctx.generator(r.right).label(),
                        "phase": json::FormJson::from_form(r.phase.form()),
                        "text": r.display(ctx),
                    })
                })
                .collect();
            let pj = json::presentation_to_json(p);
            let st: Vec<_> = pj.relations.iter().filter(|r| structural.iter().any(|s| s.label == r.label)).collect();
            out.push_str(&to_json(&json!({
                "algebra": p.name,
                "deformation_matrix": pj.deformation_matrix,
                "exchange": ex,
                "structural": st,
            })));
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_hopf_check(a: &AlgebraArgs, common: &Common, out: &mut String, err: &mut String) -> Result<i32> {
    let subs = parse_params(&common.params)?;
    let name = CatalogName::parse(&a.algebra).map_err(|e| Error::Usage(e.to_string()))?;
    let bound = common.degree_bound.unwrap_or(4);
    let reports: Vec<CheckReport> = match name {
        CatalogName::Su(_) => {
            let Built::Group(q) = build_algebra(a, &subs)? else { unreachable!("su:n builds a group") };
            for w in &q.warnings {
                err.push_str(&format!("warning: {w}\n"));
            }
            full_check(&q, bound)?
        }
        CatalogName::Torus(n) => {
            // the torus group itself: undeformed unless a matrix is given
            let lambda = match a.lambda.as_deref().or(a.matrix.as_deref()) {
                Some(s) => parse_matrix(s, n)?,
                None => DeformationMatrix::zero(n),
            };
            check_torus_group(&build_nc_torus(&lambda)?.substitute(&subs), bound)
        }
        CatalogName::Sphere(_) => return Err(Error::Usage("hopf-check needs su:n or torus:n".into())),
    };
    match common.format {
        Format::Json => out.push_str(&to_json(&reports)),
        _ => {
            for r in &reports {
                out.push_str(&format!("{r}\n"));
            }
        }
    }
    Ok(status_code(reports.iter().map(|r| r.status)))
}

fn extension_code(r: &ConstraintReport) -> i32 {
    if r.status == ExtensionStatus::FailsIdentically || r.structural.iter().any(|s| s.decision == Decision::Fails) {
        EXIT_FAIL
    } else if r.structural.iter().any(|s| s.decision == Decision::Undecided) {
        EXIT_UNDECIDED
    } else {
        EXIT_PASS
    }
}

fn cmd_act_check(spec: &str, structural: bool, common: &Common, out: &mut String) -> Result<i32> {
    let spec = load_spec(spec, &parse_params(&common.params)?)?;
    let r = check_extension_with(&spec, common.degree_bound.unwrap_or(4), structural)?;
    match common.format {
        Format::Json => out.push_str(&to_json(&json!({ "spec": spec.name, "report": r }))),
        Format::Latex => {
            let lines: Vec<String> =
                r.constraints.iter().map(|c| format!("{} &\\equiv 0", render::form_latex(c))).collect();
            out.push_str(&render::align(&lines));
        }
        Format::Text => {
            out.push_str(&format!("{}: {r}\n", spec.name));
            for s in &r.structural {
                out.push_str(&format!("  ρ({}): {}\n", s.relation, s.decision));
            }
        }
    }
    Ok(extension_code(&r))
}

/// Fixed points of a spec and, for degree-one generators, the catalog sphere they present.
pub fn fixed_points_with_match(spec: &CoactionSpec, degree_bound: usize) -> Result<(FixedPoints, Option<MatchReport>)> {
    let fp = fixed_points(spec, degree_bound);
    if fp.generators.is_empty() || fp.degrees.iter().any(|&d| d != 1) {
        return Ok((fp, None));
    }
    let r = check_extension_with(spec, degree_bound, false)?;
    if r.status == ExtensionStatus::FailsIdentically {
        return Ok((fp, None));
    }
    let subs = r.solution();
    let solved = spec.substitute(&subs)?;
    let gens: Vec<Element> = fp.generators.iter().map(|x| x.rebase(solved.a.ctx(), &subs)).collect();
    let m = match_presentation(&gens, &solved.a, Family::Sphere, degree_bound.max(2))?;
    Ok((fp, Some(m)))
}

fn cmd_fixed_points(spec: &str, common: &Common, out: &mut String) -> Result<i32> {
    let spec = load_spec(spec, &parse_params(&common.params)?)?;
    let (fp, m) = fixed_points_with_match(&spec, common.degree_bound.unwrap_or(2))?;
    match common.format {
        Format::Json => out.push_str(&to_json(&json!({ "spec": spec.name, "fixed_points": fp, "match": m }))),
        _ => {
            if fp.is_trivial() {
                out.push_str(&format!(
                    "{}: only constants are invariant up to degree {}\n",
                    spec.name, fp.degree_bound
                ));
            } else {
                let gens: Vec<String> = fp.generators.iter().map(|g| g.to_string()).collect();
                out.push_str(&format!("{}: generators {{{}}}\n", spec.name, gens.join(", ")));
            }
            if fp.non_closed {
                out.push_str("  not closed: new generators appear at the bound\n");
            }
            if let Some(m) = &m {
                out.push_str(&format!(
                    "  {} {} with θ′ = {}\n",
                    if m.matched { "matches" } else { "does not match" },
                    m.instance,
                    m.theta_prime
                ));
                let names: Vec<String> =
                    fp.generators.iter().enumerate().map(|(j, g)| format!("z{} ↦ {g}", j + 1)).collect();
                out.push_str(&format!("  via {}\n", names.join(", ")));
                for r in m.exchange.iter().chain(&m.structural) {
                    out.push_str(&format!("    {}: {}\n", r.relation, r.decision));
                }
                if !m.central.is_empty() {
                    let c: Vec<String> = m.central.iter().map(|j| format!("x{j}")).collect();
                    out.push_str(&format!("  central: {}\n", c.join(", ")));
                }
            }
        }
    }
    let matched = m.as_ref().is_none_or(|m| m.matched);
    Ok(if fp.non_closed || !matched { EXIT_UNDECIDED } else { EXIT_PASS })
}

fn cmd_export(a: &AlgebraArgs, spec: Option<&str>, common: &Common, out: &mut String) -> Result<i32> {
    let subs = parse_params(&common.params)?;
    if let Some(name) = spec {
        out.push_str(&to_json(&json::spec_to_json(&load_spec(name, &subs)?)?));
        return Ok(EXIT_PASS);
    }
    let built = build_algebra(a, &subs)?;
    let p = built.presentation();
    match common.format {
        Format::Text => out.push_str(&p.to_string()),
        Format::Latex => {
            let lines: Vec<String> = p.relations().iter().map(|r| render::relation_latex(p.ctx(), r)).collect();
            out.push_str(&render::align(&lines));
        }
        Format::Json => {
            let pj = json::presentation_to_json(p);
            if common.approx {
                let ctx = p.ctx();
                let phases: Vec<_> =
                    generate_exchange_relations(ctx, PairSelection { with_stars: false, include_trivial: false })
                        .iter()
                        .map(|r| {
                            let f = r.phase.form();
                            let value = f.is_constant().then(|| to_f64(f.constant_part()));
                            json!({ "relation": r.display(ctx), "phase": value })
                        })
                        .collect();
                out.push_str(&to_json(&json!({ "presentation": pj, "approx_phases": phases })));
            } else {
                out.push_str(&to_json(&pj));
            }
        }
    }
    Ok(EXIT_PASS)
}

/// Runs the command line on `args` (program name first), writing to the given
/// streams, and returns the exit code.
pub fn run(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut o = String::new();
    let mut e = String::new();
    let result = match &cli.command {
        Command::Relations { algebra, with_stars, structural, common } => {
            cmd_relations(algebra, *with_stars, *structural, common, &mut o)
        }
        Command::HopfCheck { algebra, common } => cmd_hopf_check(algebra, common, &mut o, &mut e),
        Command::ActCheck { spec, structural, common } => cmd_act_check(spec, *structural, common, &mut o),
        Command::FixedPoints { spec, common } => cmd_fixed_points(spec, common, &mut o),
        Command::Export { algebra, spec, common } => cmd_export(algebra, spec.as_deref(), common, &mut o),
    };
    let code = match result {
        Ok(code) => code,
        Err(x) => {
            e.push_str(&format!("error: {x}\n"));
            match x {
                Error::UnsupportedDegree(_) | Error::Bound { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    };
    let _ = out.write_all(o.as_bytes());
    let _ = err.write_all(e.as_bytes());
    code
}
