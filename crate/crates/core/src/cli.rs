//! The `ybe` command-line tool.
//!
//! Exit codes: 0 when every check passes, 1 when a checked property is false
//! (including violated construction hypotheses), 2 for bad input or unmet
//! preconditions.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Value};

use crate::brace::{
    check_socle_criterion, read_brace, reflection_plus_star, reflection_star_constant,
    restrict_solution, solution_from_brace, BraceSolution, FiniteBrace, PlusStarHypothesis,
};
use crate::error::{Error, Result};
use crate::factor::{central_reflection, group_preset, read_group, skew_brace_from_factorization, CentralPair};
use crate::group::{equivariant_maps, generate_group, is_equivariant};
use crate::param::{
    check_param_reflection, check_param_ybe, check_robert_identity, k_linear_combination, KFamily,
    LinMap, Verdict,
};
use crate::poly::BivarPoly;
use crate::presets::solution_preset;
use crate::reflection::{enumerate_reflections, is_reflection, ReflectionFilter};
use crate::ring::{read_ring, ring_preset, NilpotentRing};
use crate::solution::{read_solution, FiniteSolution, MapOnX};

#[derive(Parser, Debug)]
#[command(name = "ybe", version, about = "Finite Yang-Baxter solutions, reflections, braces and K-matrices")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SolutionSource {
    /// ex-3-2, ex-4-13, ex-4-19 or flip-<n>.
    #[arg(long)]
    preset: Option<String>,
    /// Solution file (JSON, 1-based tables).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BraceSource {
    /// Ring preset such as zp-trunc:2,4; products joined with '*'.
    #[arg(long)]
    ring: Option<String>,
    /// Ring file (JSON, 0-based tables).
    #[arg(long)]
    ring_file: Option<PathBuf>,
    /// Brace file (JSON, 0-based tables).
    #[arg(long)]
    brace_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ParamSource {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    ring_file: Option<PathBuf>,
    #[arg(long)]
    brace_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the ybe / involutive / nondegenerate flags.
    Verify {
        #[command(flatten)]
        source: SolutionSource,
    },
    /// List all reflections in one-line notation.
    Reflections {
        #[command(flatten)]
        source: SolutionSource,
        /// Keep only involutive reflections.
        #[arg(long)]
        involutive: bool,
        /// Keep only reflections commuting with G(X,r).
        #[arg(long)]
        equivariant: bool,
        /// Worker threads for the enumeration.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the group generated by the maps sigma_x.
    Group {
        #[command(flatten)]
        source: SolutionSource,
        /// Also list the equivariant maps.
        #[arg(long)]
        equivariant: bool,
    },
    /// Build a brace and its solution, optionally running a construction.
    Brace {
        #[command(flatten)]
        source: BraceSource,
        /// b-plus-bA, or a comma-separated list of elements.
        #[arg(long)]
        restrict: Option<String>,
        /// star-const:E, plus-star:id, plus-star:const:E, plus-power:J or socle-check:power:J.
        #[arg(long)]
        construct: Option<String>,
    },
    /// Exact factorization, skew brace and central reflection.
    Factor {
        /// d4-c4c2 or z6-z2z3.
        #[arg(long, conflicts_with = "group_file", required_unless_present = "group_file")]
        group: Option<String>,
        /// Group file (JSON with m, op, A, B; 0-based).
        #[arg(long)]
        group_file: Option<PathBuf>,
        /// Central elements c in A and d in B (0-based indices).
        #[arg(long, num_args = 2, value_names = ["C", "D"])]
        central: Option<Vec<usize>>,
    },
    /// Exact checks of the parameter-dependent equations.
    Param {
        #[command(flatten)]
        source: ParamSource,
        /// Restriction of a brace solution (see `brace --restrict`).
        #[arg(long)]
        restrict: Option<String>,
        /// The map k: one-line notation, or plus-power:J, plus-star:E, star:E on brace elements.
        #[arg(long)]
        k: Option<String>,
        #[arg(long, value_enum, default_value_t = Form::Scaled)]
        form: Form,
        /// f(u) for the scaled form.
        #[arg(long, default_value = "u")]
        f: String,
        /// MAP:COEF summand of the linear combination (repeatable).
        #[arg(long = "term")]
        terms: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Form {
    Scaled,
    Affine,
    LinearComb,
    Ybe,
    Robert,
}

struct Outcome {
    lines: Vec<String>,
    json: Value,
    ok: bool,
    warnings: Vec<String>,
}

impl Outcome {
    fn new(lines: Vec<String>, json: Value, ok: bool) -> Self {
        Outcome {
            lines,
            json,
            ok,
            warnings: Vec::new(),
        }
    }
}

pub fn run_from_env() -> i32 {
    run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Parses `args` (program name first) and executes; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                2
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let written = match cli.format {
                Format::Text => outcome.lines.iter().try_for_each(|l| writeln!(out, "{l}")),
                Format::Json => writeln!(out, "{}", outcome.json),
            };
            if written.is_err() {
                return 2;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Hypothesis { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Verify { source } => cmd_verify(&load_solution(source)?),
        Command::Reflections {
            source,
            involutive,
            equivariant,
            jobs,
        } => cmd_reflections(&load_solution(source)?, *involutive, *equivariant, *jobs),
        Command::Group { source, equivariant } => cmd_group(&load_solution(source)?, *equivariant),
        Command::Brace {
            source,
            restrict,
            construct,
        } => {
            let ctx = BraceContext::load(source.ring.as_deref(), source.ring_file.as_ref(), source.brace_file.as_ref())?;
            cmd_brace(&ctx, restrict.as_deref(), construct.as_deref())
        }
        Command::Factor {
            group,
            group_file,
            central,
        } => cmd_factor(group.as_deref(), group_file.as_ref(), central.as_deref()),
        Command::Param {
            source,
            restrict,
            k,
            form,
            f,
            terms,
        } => cmd_param(source, restrict.as_deref(), k.as_deref(), *form, f, terms),
    }
}

fn load_solution(source: &SolutionSource) -> Result<FiniteSolution> {
    match (&source.preset, &source.file) {
        (Some(name), _) => solution_preset(name),
        (_, Some(path)) => read_solution(path),
        _ => Err(Error::input("a solution preset or file is required")),
    }
}

fn flags_line(sol: &FiniteSolution) -> String {
    let f = sol.flags();
    format!(
        "ybe={} involutive={} nondegenerate={}",
        f.ybe, f.involutive, f.nondegenerate
    )
}

fn flags_json(sol: &FiniteSolution) -> Value {
    let f = sol.flags();
    json!({
        "ybe": f.ybe,
        "involutive": f.involutive,
        "nondegenerate": f.nondegenerate,
        "bijective": f.bijective,
    })
}

fn cmd_verify(sol: &FiniteSolution) -> Result<Outcome> {
    let f = sol.flags();
    let mut outcome = Outcome::new(vec![flags_line(sol)], flags_json(sol), f.ybe && f.bijective);
    outcome.warnings = sol.warnings();
    Ok(outcome)
}

fn cmd_reflections(
    sol: &FiniteSolution,
    involutive: bool,
    equivariant: bool,
    jobs: Option<usize>,
) -> Result<Outcome> {
    let filter = if involutive {
        ReflectionFilter::InvolutiveOnly
    } else {
        ReflectionFilter::All
    };
    let mut maps = match jobs {
        Some(0) => return Err(Error::input("--jobs must be at least 1")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::input(format!("thread pool: {e}")))?
            .install(|| enumerate_reflections(sol, filter)),
        None => enumerate_reflections(sol, filter),
    };
    if equivariant {
        if !sol.is_nondegenerate() {
            return Err(Error::precondition("equivariance needs a non-degenerate solution"));
        }
        maps.retain(|k| is_equivariant(sol, k));
    }
    let lines: Vec<String> = maps.iter().map(|m| m.to_string()).collect();
    let json = json!({ "count": lines.len(), "reflections": lines });
    Ok(Outcome::new(lines, json, true))
}

fn cmd_group(sol: &FiniteSolution, equivariant: bool) -> Result<Outcome> {
    let g = generate_group(sol)?;
    let elements: Vec<String> = g
        .elements()
        .iter()
        .map(|p| MapOnX::new(p.clone()).map(|m| m.to_string()))
        .collect::<Result<_>>()?;
    let mut lines = vec![format!("order={}", g.order()), format!("abelian={}", g.is_abelian()), "elements:".into()];
    lines.extend(elements.iter().cloned());
    let mut json = json!({ "order": g.order(), "abelian": g.is_abelian(), "elements": elements });
    if equivariant {
        let maps: Vec<String> = equivariant_maps(sol)?.iter().map(|m| m.to_string()).collect();
        lines.push("equivariant:".into());
        lines.extend(maps.iter().cloned());
        json["equivariant"] = json!(maps);
    }
    Ok(Outcome::new(lines, json, true))
}

/// A brace, with the ring it came from when there is one (for element names).
struct BraceContext {
    ring: Option<NilpotentRing>,
    brace: FiniteBrace,
}

impl BraceContext {
    fn load(ring: Option<&str>, ring_file: Option<&PathBuf>, brace_file: Option<&PathBuf>) -> Result<Self> {
        let ring = match (ring, ring_file) {
            (Some(spec), _) => Some(ring_preset(spec)?),
            (_, Some(path)) => Some(read_ring(path)?),
            _ => None,
        };
        let brace = match (&ring, brace_file) {
            (Some(r), _) => r.to_brace()?,
            (None, Some(path)) => read_brace(path)?,
            _ => return Err(Error::input("a ring or brace source is required")),
        };
        Ok(BraceContext { ring, brace })
    }

    fn name(&self, a: usize) -> String {
        match &self.ring {
            Some(r) => r.name(a).to_string(),
            None => a.to_string(),
        }
    }

    fn names(&self, elems: &[usize]) -> String {
        let parts: Vec<String> = elems.iter().map(|&a| self.name(a)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    fn element(&self, text: &str) -> Result<usize> {
        if let Some(a) = self.ring.as_ref().and_then(|r| r.find(text)) {
            return Ok(a);
        }
        match text.trim().parse::<usize>() {
            Ok(a) if a < self.brace.order() => Ok(a),
            _ => Err(Error::input(format!("unknown brace element {text:?}"))),
        }
    }

    fn ring(&self) -> Result<&NilpotentRing> {
        self.ring
            .as_ref()
            .ok_or_else(|| Error::input("this option needs a ring source (--ring or --ring-file)"))
    }

    fn restriction(&self, spec: Option<&str>) -> Result<BraceSolution<'_>> {
        match spec {
            None => Ok(solution_from_brace(&self.brace)),
            Some("b-plus-bA") => restrict_solution(&self.brace, &self.ring()?.subset_b_plus_b_a()?),
            Some(list) => {
                let members = list.split(',').map(|e| self.element(e)).collect::<Result<Vec<_>>>()?;
                restrict_solution(&self.brace, &members)
            }
        }
    }

    /// A map on X: one-line notation, or a formula on brace elements.
    fn map(&self, sol: &BraceSolution<'_>, spec: &str) -> Result<MapOnX> {
        let br = &self.brace;
        if let Some(j) = spec.strip_prefix("plus-power:") {
            let ring = self.ring()?;
            let j = parse_exponent(j)?;
            let powers = (0..br.order()).map(|x| ring.power(x, j)).collect::<Result<Vec<_>>>()?;
            sol.map_from_fn(|x| ring.add(x, powers[x]))
        } else if let Some(e) = spec.strip_prefix("plus-star:") {
            let e = self.element(e)?;
            sol.map_from_fn(|x| br.add(x, br.star(x, e)))
        } else if let Some(e) = spec.strip_prefix("star:") {
            let e = self.element(e)?;
            sol.map_from_fn(|x| br.star(x, e))
        } else {
            let k = MapOnX::parse(spec)?;
            if k.n() != sol.solution().n() {
                return Err(Error::input(format!("map {spec} does not have length {}", sol.solution().n())));
            }
            Ok(k)
        }
    }
}

fn parse_exponent(text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::input(format!("bad exponent {text:?}")))
}

fn cmd_brace(ctx: &BraceContext, restrict: Option<&str>, construct: Option<&str>) -> Result<Outcome> {
    let br = &ctx.brace;
    let sol = ctx.restriction(restrict)?;
    let socle = br.socle();
    let mut lines = vec![
        format!("order={}", br.order()),
        format!("abelian_additive={}", br.is_abelian_additive()),
        format!("two_sided={}", br.is_two_sided()),
        format!("socle={}", ctx.names(socle.members())),
        format!("X={}", ctx.names(sol.elements())),
        flags_line(sol.solution()),
    ];
    let names: Vec<String> = sol.elements().iter().map(|&a| ctx.name(a)).collect();
    let mut json = json!({
        "order": br.order(),
        "abelian_additive": br.is_abelian_additive(),
        "two_sided": br.is_two_sided(),
        "socle": socle.members().iter().map(|&a| ctx.name(a)).collect::<Vec<_>>(),
        "X": names,
        "solution": flags_json(sol.solution()),
    });
    let mut ok = true;

    if let Some(spec) = construct {
        let k = if let Some(e) = spec.strip_prefix("star-const:") {
            reflection_star_constant(&sol, ctx.element(e)?)?
        } else if spec == "plus-star:id" {
            reflection_plus_star(&sol, &|x| x, PlusStarHypothesis::Invariant)?
        } else if let Some(e) = spec.strip_prefix("plus-star:const:") {
            let e = ctx.element(e)?;
            reflection_plus_star(&sol, &|_| e, PlusStarHypothesis::Invariant)?
        } else if let Some(j) = spec.strip_prefix("socle-check:power:") {
            let k = ctx.map(&sol, &format!("plus-power:{}", parse_exponent(j)?))?;
            let c = check_socle_criterion(&sol, &k)?;
            lines.push(format!("k={}", k_names(ctx, &sol, &k)));
            lines.push(format!("c1={} c2={} c3={} generates={}", c.c1, c.c2, c.c3, c.generates));
            json["k"] = json!(k.to_string());
            json["socle_criterion"] = json!(c);
            return Ok(Outcome::new(lines, json, c.equivalence_holds()));
        } else if spec.starts_with("plus-power:") {
            ctx.map(&sol, spec)?
        } else {
            return Err(Error::input(format!("unknown construction {spec:?}")));
        };
        let report = is_reflection(sol.solution(), &k)?;
        ok = report.is_reflection;
        lines.push(format!("k={}", k_names(ctx, &sol, &k)));
        lines.push(format!("reflection={}", report.is_reflection));
        json["k"] = json!(k.to_string());
        json["reflection"] = json!(report);
    }
    Ok(Outcome::new(lines, json, ok))
}

/// `x -> k(x)` pairs in element names.
fn k_names(ctx: &BraceContext, sol: &BraceSolution<'_>, k: &MapOnX) -> String {
    let parts: Vec<String> = sol
        .elements()
        .iter()
        .map(|&a| format!("{} -> {}", ctx.name(a), ctx.name(sol.apply_map(k, a))))
        .collect();
    format!("{} [{}]", k, parts.join(", "))
}

fn cmd_factor(group: Option<&str>, group_file: Option<&PathBuf>, central: Option<&[usize]>) -> Result<Outcome> {
    let f = match (group, group_file) {
        (Some(name), _) => group_preset(name)?,
        (_, Some(path)) => read_group(path)?,
        _ => return Err(Error::input("--group or --group-file is required")),
    };
    let br = skew_brace_from_factorization(&f);
    let sol = solution_from_brace(&br);
    let mut lines = vec![
        format!("order={}", f.order()),
        format!("abelian={}", f.is_abelian()),
        format!("A={:?}", f.a()),
        format!("B={:?}", f.b()),
        format!("brace_abelian_additive={}", br.is_abelian_additive()),
        flags_line(sol.solution()),
    ];
    let mut json = json!({
        "order": f.order(),
        "abelian": f.is_abelian(),
        "A": f.a(),
        "B": f.b(),
        "brace_abelian_additive": br.is_abelian_additive(),
        "solution": flags_json(sol.solution()),
    });
    if let Some(&[c, d]) = central {
        let pair = CentralPair::new(&f, c, d)?;
        let k = central_reflection(&f, &pair)?;
        lines.push(format!("z={}", pair.z));
        lines.push(format!("k={k}"));
        lines.push("reflection=PASS".into());
        json["central"] = json!(pair);
        json["k"] = json!(k.to_string());
        json["reflection"] = json!("PASS");
    }
    Ok(Outcome::new(lines, json, true))
}

fn verdict_outcome(form: Form, verdict: Verdict, mut extra: Vec<String>) -> Outcome {
    let mut lines = vec![if verdict.passed() { "PASS" } else { "FAIL" }.to_string()];
    lines.append(&mut extra);
    let mismatch = verdict.mismatch.as_ref().map(|m| m.to_string());
    if let Some(m) = &mismatch {
        lines.push(format!("mismatch: {m}"));
    }
    let json = json!({
        "form": format!("{form:?}").to_lowercase(),
        "result": if verdict.passed() { "PASS" } else { "FAIL" },
        "mismatch": mismatch,
    });
    Outcome::new(lines, json, verdict.passed())
}

fn parse_term(text: &str) -> Result<(&str, BigRational)> {
    let (map, coef) = text
        .rsplit_once(':')
        .ok_or_else(|| Error::input(format!("term {text:?} is not MAP:COEF")))?;
    let coef = coef
        .trim()
        .parse::<BigRational>()
        .map_err(|_| Error::input(format!("bad coefficient in {text:?}")))?;
    Ok((map, coef))
}

fn cmd_param(
    source: &ParamSource,
    restrict: Option<&str>,
    k: Option<&str>,
    form: Form,
    f: &str,
    terms: &[String],
) -> Result<Outcome> {
    let plain = match (&source.preset, &source.file) {
        (Some(name), _) => Some(solution_preset(name)?),
        (_, Some(path)) => Some(read_solution(path)?),
        _ => None,
    };
    if plain.is_some() && restrict.is_some() {
        return Err(Error::input("--restrict needs a ring or brace source"));
    }
    let ctx = match plain {
        Some(_) => None,
        None => Some(BraceContext::load(
            source.ring.as_deref(),
            source.ring_file.as_ref(),
            source.brace_file.as_ref(),
        )?),
    };
    let brace_sol = match &ctx {
        Some(c) => Some(c.restriction(restrict)?),
        None => None,
    };
    let sol: &FiniteSolution = match (&plain, &brace_sol) {
        (Some(s), _) => s,
        (_, Some(bs)) => bs.solution(),
        _ => unreachable!("one source is present"),
    };
    let parse_map = |spec: &str| -> Result<MapOnX> {
        match (&ctx, &brace_sol) {
            (Some(c), Some(bs)) => c.map(bs, spec),
            _ => {
                let m = MapOnX::parse(spec)?;
                if m.n() != sol.n() {
                    return Err(Error::input(format!("map {spec} does not have length {}", sol.n())));
                }
                Ok(m)
            }
        }
    };
    let require_k = || -> Result<LinMap> {
        let spec = k.ok_or_else(|| Error::input(format!("--form {form:?} needs --k").to_lowercase()))?;
        Ok(LinMap::from_map(&parse_map(spec)?))
    };

    match form {
        Form::Ybe => Ok(verdict_outcome(form, check_param_ybe(sol)?, vec![])),
        Form::Scaled => {
            let family = KFamily::Scaled {
                k: require_k()?,
                f: BivarPoly::parse(f)?,
            };
            Ok(verdict_outcome(form, check_param_reflection(sol, &family)?, vec![]))
        }
        Form::Affine => {
            let family = KFamily::Affine { k: require_k()? };
            Ok(verdict_outcome(form, check_param_reflection(sol, &family)?, vec![]))
        }
        Form::Robert => Ok(verdict_outcome(form, check_robert_identity(sol, &require_k()?)?, vec![])),
        Form::LinearComb => {
            if terms.is_empty() {
                return Err(Error::input("--form linear-comb needs at least one --term"));
            }
            let parsed = terms
                .iter()
                .map(|t| {
                    let (map, coef) = parse_term(t)?;
                    Ok((parse_map(map)?, coef))
                })
                .collect::<Result<Vec<_>>>()?;
            let combo = k_linear_combination(sol, &parsed)?;
            let square = if combo.is_involutive() { "K^2=I" } else { "K^2=0" };
            let verdict = check_param_reflection(
                sol,
                &KFamily::Scaled {
                    k: combo,
                    f: BivarPoly::u(),
                },
            )?;
            Ok(verdict_outcome(form, verdict, vec![square.to_string()]))
        }
    }
}
