//! Command-line front end for the stated skein algebra workbench.
//!
//! Usage: skein <command> <file> [args] [flags]
//!
//! Commands: info, present, relators, certify, nf, mul, coact, coinv,
//! hilbert, loop-check, specialize, eval, spin-check.
//! Flags: --omega <rational>, --degree <int>, --points <file>,
//! --order <file>, --json, --guard <steps>.
//! Exit codes: 0 ok, 2 validation, 3 derivation, 4 certification failure,
//! 5 parse.

use std::process::ExitCode;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use skein_core::classical::{
    evaluate_at_point, random_points, specialize_poly, specialize_system, u_relators,
    validate_spin, Sl2Point, SpinFunction,
};
use skein_core::expr::{letter_name, parse_expression};
use skein_core::hopf::{coinvariants, Gauge, TensorElement};
use skein_core::presentation::Presentation;
use skein_core::relator::build_rewrite_system;
use skein_core::rewrite::{Letter, NcPoly, RewriteSystem, STATE_NAMES};
use skein_core::ring::Laurent;
use skein_core::surface::CiliatedGraph;

const EXIT_VALIDATION: u8 = 2;
const EXIT_DERIVATION: u8 = 3;
const EXIT_CERTIFICATION: u8 = 4;
const EXIT_PARSE: u8 = 5;

struct CliError {
    exit: u8,
    code: &'static str,
    message: String,
    context: String,
}

impl CliError {
    fn new(exit: u8, code: &'static str, message: impl Into<String>, context: impl Into<String>) -> Self {
        CliError {
            exit,
            code,
            message: message.into(),
            context: context.into(),
        }
    }

    fn validation(message: impl Into<String>, context: impl Into<String>) -> Self {
        CliError::new(EXIT_VALIDATION, "validation", message, context)
    }

    fn parse(message: impl Into<String>, context: impl Into<String>) -> Self {
        CliError::new(EXIT_PARSE, "parse", message, context)
    }
}

struct Options {
    omega: Option<String>,
    degree: Option<usize>,
    points: Option<String>,
    order: Option<String>,
    json: bool,
    guard: Option<u64>,
    positional: Vec<String>,
}

fn parse_args(args: &[String]) -> Result<Options, CliError> {
    let mut o = Options {
        omega: None,
        degree: None,
        points: None,
        order: None,
        json: false,
        guard: None,
        positional: Vec::new(),
    };
    let mut it = args.iter().peekable();
    while let Some(a) = it.next() {
        let take = |it: &mut std::iter::Peekable<std::slice::Iter<String>>, flag: &str| {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::validation(format!("flag {} needs a value", flag), ""))
        };
        match a.as_str() {
            "--omega" => o.omega = Some(take(&mut it, "--omega")?),
            "--degree" => {
                let v = take(&mut it, "--degree")?;
                o.degree = Some(v.parse().map_err(|_| {
                    CliError::validation("--degree must be a nonnegative integer", v)
                })?);
            }
            "--points" => o.points = Some(take(&mut it, "--points")?),
            "--order" => o.order = Some(take(&mut it, "--order")?),
            "--guard" => {
                let v = take(&mut it, "--guard")?;
                o.guard = Some(v.parse().map_err(|_| {
                    CliError::validation("--guard must be a positive integer", v)
                })?);
            }
            "--json" => o.json = true,
            other => o.positional.push(other.to_string()),
        }
    }
    Ok(o)
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}", path), e.to_string()))
}

enum Input {
    Graph(CiliatedGraph),
    Presentation(Presentation),
}

fn load_input(path: &str, opts: &Options) -> Result<Input, CliError> {
    let text = read_file(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::validation("input is not valid JSON", e.to_string()))?;
    let mut input = if value.get("generators").is_some() {
        Input::Presentation(
            Presentation::from_json(&text)
                .map_err(|e| CliError::validation(e.to_string(), path))?,
        )
    } else if value.get("vertices").is_some() {
        Input::Graph(
            CiliatedGraph::from_json(&text)
                .map_err(|e| CliError::validation(e.to_string(), path))?,
        )
    } else {
        return Err(CliError::validation(
            "input needs a \"generators\" or \"vertices\" field",
            path,
        ));
    };
    if let Some(order_file) = &opts.order {
        let order: Vec<String> = serde_json::from_str(&read_file(order_file)?)
            .map_err(|e| CliError::validation("order file must be a JSON array of ids", e.to_string()))?;
        let p = presentation_of(&input)?;
        input = Input::Presentation(
            p.reorder(&order)
                .map_err(|e| CliError::validation(e.to_string(), order_file))?,
        );
    }
    Ok(input)
}

fn presentation_of(input: &Input) -> Result<Presentation, CliError> {
    match input {
        Input::Presentation(p) => Ok(p.clone()),
        Input::Graph(g) => g
            .build_presentation()
            .map_err(|e| CliError::validation(e.to_string(), "graph")),
    }
}

fn system_of(p: &Presentation, opts: &Options) -> Result<RewriteSystem<Laurent>, CliError> {
    let rs = build_rewrite_system(p).map_err(|e| {
        CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "relator factory")
    })?;
    Ok(match opts.guard {
        Some(g) => rs.with_guard(g),
        None => rs,
    })
}

fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(text)
        .map_err(|_| CliError::validation("expected a rational like 2 or -3/5", text))
}

fn render_tensor(p: &Presentation, t: &TensorElement) -> String {
    let name = letter_name(p);
    let bigon_name = |l: Letter| format!("x[{}]", STATE_NAMES[(l % 4) as usize]);
    let mut lines = Vec::new();
    for ((base, slots), c) in &t.terms {
        let base_str = if base.is_empty() {
            "1".to_string()
        } else {
            base.0.iter().map(|&l| name(l)).collect::<Vec<_>>().join("*")
        };
        let mut slot_strs = Vec::new();
        for (arc, w) in p.boundary_arcs.iter().zip(slots) {
            let ws = if w.is_empty() {
                "1".to_string()
            } else {
                w.0.iter().map(|&l| bigon_name(l)).collect::<Vec<_>>().join("*")
            };
            slot_strs.push(format!("[{}: {}]", arc, ws));
        }
        lines.push(format!(
            "({}) {} (x) {}",
            c.render(),
            base_str,
            slot_strs.join(" ")
        ));
    }
    if lines.is_empty() {
        lines.push("0".to_string());
    }
    lines.join("\n")
}

fn rule_line(p: &Presentation, lead: (Letter, Letter), rhs: &NcPoly<Laurent>) -> String {
    let name = letter_name(p);
    format!("{}*{} -> {}", name(lead.0), name(lead.1), rhs.render(&name))
}

fn run() -> Result<u8, CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        return Err(CliError::validation(
            "usage: skein <command> <file> [args] [flags]",
            "commands: info present relators certify nf mul coact coinv hilbert loop-check specialize eval spin-check",
        ));
    }
    let command = args[0].clone();
    let opts = parse_args(&args[1..])?;
    let file = opts
        .positional
        .first()
        .cloned()
        .ok_or_else(|| CliError::validation("missing input file", command.clone()))?;
    let input = load_input(&file, &opts)?;
    match command.as_str() {
        "info" => {
            let g = match &input {
                Input::Graph(g) => g,
                Input::Presentation(_) => {
                    return Err(CliError::validation(
                        "info needs a ciliated graph input",
                        file,
                    ))
                }
            };
            let s = g
                .surface_invariants()
                .map_err(|e| CliError::validation(e.to_string(), file.clone()))?;
            if opts.json {
                println!(
                    "{}",
                    json!({
                        "genus": s.genus,
                        "boundary_components_of_fattening": s.boundary_components_of_fattening,
                        "punctures_closed": s.punctures_closed,
                        "boundary_arcs_open": s.boundary_arcs_open,
                        "inner_punctures_open": s.inner_punctures_open,
                    })
                );
            } else {
                println!("genus {}", s.genus);
                println!("fattening boundary components {}", s.boundary_components_of_fattening);
                println!("closed surface punctures {}", s.punctures_closed);
                println!("open surface boundary arcs {}", s.boundary_arcs_open);
                println!("open surface inner punctures {}", s.inner_punctures_open);
            }
            Ok(0)
        }
        "present" => {
            let p = presentation_of(&input)?;
            if opts.json {
                let gens: Vec<_> = p
                    .generators
                    .iter()
                    .map(|g| {
                        json!({
                            "id": g.id,
                            "source": [p.boundary_arcs[g.source.0], g.source.1],
                            "target": [p.boundary_arcs[g.target.0], g.target.1],
                            "type": g.arc_type().letter().to_string(),
                        })
                    })
                    .collect();
                println!("{}", json!({"generators": gens, "relations": p.relations.len()}));
            } else {
                for g in &p.generators {
                    println!(
                        "{}: {}[{}] -> {}[{}]  type {}",
                        g.id,
                        p.boundary_arcs[g.source.0],
                        g.source.1,
                        p.boundary_arcs[g.target.0],
                        g.target.1,
                        g.arc_type().letter()
                    );
                }
                for rel in &p.relations {
                    let word: Vec<String> = rel
                        .iter()
                        .map(|l| {
                            let mut s = p.generators[l.gen].id.clone();
                            if l.inverse {
                                s.push_str("^-1");
                            }
                            s
                        })
                        .collect();
                    println!("relation: {}", word.join(" * "));
                }
            }
            Ok(0)
        }
        "relators" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            for (&lead, rhs) in rs.rules() {
                println!("{}", rule_line(&p, lead, rhs));
            }
            Ok(0)
        }
        "certify" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let report = rs.certify_confluence().map_err(|e| {
                CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "confluence")
            })?;
            let name = letter_name(&p);
            let failures: Vec<_> = report
                .failures
                .iter()
                .map(|f| {
                    let triple: Vec<String> = f.triple.0.iter().map(|&l| name(l)).collect();
                    json!({
                        "triple": triple.join("*"),
                        "left": f.left_nf.render(&name),
                        "right": f.right_nf.render(&name),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "generators": report.generators,
                    "relators": report.relators,
                    "critical_triples": report.critical_triples,
                    "failures": failures,
                })
            );
            Ok(if report.is_confluent() { 0 } else { EXIT_CERTIFICATION })
        }
        "nf" | "mul" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let exprs = &opts.positional[1..];
            let need = if command == "nf" { 1 } else { 2 };
            if exprs.len() != need {
                return Err(CliError::validation(
                    format!("{} needs {} expression argument(s)", command, need),
                    "",
                ));
            }
            let parse = |text: &str| {
                parse_expression(&p, text).map_err(|e| CliError::parse(e.to_string(), text))
            };
            let result = if command == "nf" {
                rs.normal_form(&parse(&exprs[0])?)
            } else {
                rs.multiply(&parse(&exprs[0])?, &parse(&exprs[1])?)
            }
            .map_err(|e| CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "reduction"))?;
            println!("{}", result.render(&letter_name(&p)));
            Ok(0)
        }
        "coact" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let expr = opts
                .positional
                .get(1)
                .ok_or_else(|| CliError::validation("coact needs an expression", ""))?;
            let x = parse_expression(&p, expr).map_err(|e| CliError::parse(e.to_string(), expr))?;
            let gauge = Gauge::from_system(rs).map_err(|e| {
                CliError::validation(e.to_string(), "gauge coaction")
            })?;
            let img = gauge
                .coaction(&x)
                .map_err(|e| CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "coaction"))?;
            println!("{}", render_tensor(&p, &img));
            Ok(0)
        }
        "coinv" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let d = opts
                .degree
                .ok_or_else(|| CliError::validation("coinv needs --degree", ""))?;
            let gauge = Gauge::from_system(rs)
                .map_err(|e| CliError::validation(e.to_string(), "gauge coaction"))?;
            let basis = coinvariants(&gauge, d).map_err(|e| {
                CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "coinvariants")
            })?;
            let name = letter_name(&p);
            if opts.json {
                let items: Vec<String> = basis.iter().map(|b| b.render(&name)).collect();
                println!("{}", json!({"degree": d, "dimension": basis.len(), "basis": items}));
            } else {
                for b in &basis {
                    println!("{}", b.render(&name));
                }
            }
            Ok(0)
        }
        "hilbert" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let d = opts
                .degree
                .ok_or_else(|| CliError::validation("hilbert needs --degree", ""))?;
            if opts.json {
                let counts: Vec<String> = (0..=d).map(|n| rs.graded_dimension(n).to_string()).collect();
                println!("{}", json!({"degree": d, "counts": counts}));
            } else {
                for n in 0..=d {
                    println!("{} {}", n, rs.graded_dimension(n));
                }
            }
            Ok(0)
        }
        "loop-check" => {
            let p = presentation_of(&input)?;
            if p.relations.is_empty() {
                println!("no relations to check");
                return Ok(0);
            }
            let mut failed = 0;
            for i in 0..p.relations.len() {
                let ok = skein_core::relator::verify_relation_loop(&p, i).map_err(|e| {
                    CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), format!("relation {}", i))
                })?;
                println!("relation {}: {}", i, if ok { "pass" } else { "FAIL" });
                if !ok {
                    failed += 1;
                }
            }
            Ok(if failed == 0 { 0 } else { EXIT_CERTIFICATION })
        }
        "specialize" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let omega = parse_rational(
                opts.omega
                    .as_deref()
                    .ok_or_else(|| CliError::validation("specialize needs --omega", ""))?,
            )?;
            if omega.is_zero() {
                return Err(CliError::validation("omega must be nonzero", "--omega"));
            }
            let sp = specialize_system(&rs, &omega).map_err(|e| {
                CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "specialize")
            })?;
            let name = letter_name(&p);
            for (&(a, b), rhs) in sp.rules() {
                println!(
                    "{}*{} -> {}",
                    name(a),
                    name(b),
                    rhs.render_generic(&name)
                );
            }
            Ok(0)
        }
        "eval" => {
            let p = presentation_of(&input)?;
            let rs = system_of(&p, &opts)?;
            let omega = match opts.omega.as_deref() {
                Some(text) => parse_rational(text)?,
                None => BigRational::one(),
            };
            let points_file = opts
                .points
                .as_deref()
                .ok_or_else(|| CliError::validation("eval needs --points", ""))?;
            let raw: serde_json::Value = serde_json::from_str(&read_file(points_file)?)
                .map_err(|e| CliError::validation("points file is not valid JSON", e.to_string()))?;
            let spin = p
                .spin
                .clone()
                .map(SpinFunction)
                .unwrap_or_else(|| SpinFunction::zero(&p));
            let points = parse_points(&p, &raw)?;
            let relators = u_relators(&rs, &spin).map_err(|e| {
                CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "u relators")
            })?;
            let mut nonzero = 0usize;
            let mut total = 0usize;
            for rel in &relators {
                let sp = specialize_poly(rel, &omega).map_err(|e| {
                    CliError::new(EXIT_DERIVATION, "derivation", e.to_string(), "specialize")
                })?;
                for pt in &points {
                    total += 1;
                    let v = evaluate_at_point(&sp, &p, pt)
                        .map_err(|e| CliError::validation(e.to_string(), "point"))?;
                    if !v.is_zero() {
                        nonzero += 1;
                    }
                }
            }
            println!(
                "{}",
                json!({
                    "relators": relators.len(),
                    "points": points.len(),
                    "evaluations": total,
                    "nonzero": nonzero,
                })
            );
            Ok(if nonzero == 0 { 0 } else { EXIT_CERTIFICATION })
        }
        "spin-check" => {
            let p = presentation_of(&input)?;
            let spin = p
                .spin
                .clone()
                .map(SpinFunction)
                .unwrap_or_else(|| SpinFunction::zero(&p));
            match validate_spin(&p, &spin) {
                Ok(()) => {
                    println!("spin function satisfies the parity condition");
                    Ok(0)
                }
                Err(e) => {
                    println!("{}", e);
                    Ok(EXIT_CERTIFICATION)
                }
            }
        }
        other => Err(CliError::validation(
            format!("unknown command {}", other),
            "commands: info present relators certify nf mul coact coinv hilbert loop-check specialize eval spin-check",
        )),
    }
}

fn parse_points(p: &Presentation, raw: &serde_json::Value) -> Result<Vec<Sl2Point>, CliError> {
    // either one map generator-id -> 2x2 matrix of rational strings, or a
    // list of such maps; `random` with a count generates shear products
    if let Some(n) = raw.get("random").and_then(|v| v.as_u64()) {
        let seed = raw.get("seed").and_then(|v| v.as_u64()).unwrap_or(1);
        return Ok(random_points(p, seed, n as usize));
    }
    let maps: Vec<&serde_json::Value> = if raw.is_array() {
        raw.as_array().unwrap().iter().collect()
    } else {
        vec![raw]
    };
    let mut out = Vec::new();
    for m in maps {
        let obj = m
            .as_object()
            .ok_or_else(|| CliError::validation("each point must be an object", ""))?;
        let mut mats = Vec::new();
        for g in &p.generators {
            let entry = obj.get(&g.id).ok_or_else(|| {
                CliError::validation(format!("point is missing generator {}", g.id), "")
            })?;
            let rows = entry
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| CliError::validation("matrix must be [[a,b],[c,d]]", g.id.clone()))?;
            let mut mat = [[BigRational::zero(), BigRational::zero()], [
                BigRational::zero(),
                BigRational::zero(),
            ]];
            for (i, row) in rows.iter().enumerate() {
                let cols = row
                    .as_array()
                    .filter(|r| r.len() == 2)
                    .ok_or_else(|| CliError::validation("matrix must be [[a,b],[c,d]]", g.id.clone()))?;
                for (j, v) in cols.iter().enumerate() {
                    let text = match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    mat[i][j] = parse_rational(&text)?;
                }
            }
            mats.push(mat);
        }
        out.push(Sl2Point(mats));
    }
    Ok(out)
}

fn main() -> ExitCode {
    // default SIGPIPE disposition so piping into head behaves
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!(
                "{}",
                json!({"code": e.code, "message": e.message, "context": e.context})
            );
            ExitCode::from(e.exit)
        }
    }
}
