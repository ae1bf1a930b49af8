use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use twistlab::error::Error;
use twistlab::exactnum::{approx, Rational, RealPoint, UPoly};
use twistlab::oracle::{
    balanced_check, brute_force_twists, degree_bound_battery, identity_battery, m_threshold, oracle_window,
    OracleReport,
};
use twistlab::par::Exec;
use twistlab::sncmodel::{
    curve_builder, random_tree, random_tree_curve, synth_generator, ClassExpr, ComponentSet, Configuration,
    CurveParams,
};
use twistlab::stability::{
    kx_criterion, semistability_checks, twistable_interval, IntervalKind, Mode, Scope, UnionCheck,
};
use twistlab::twistenum::{apply_twist, enumerate_with, TraceNode, Twist};

use crate::{Bundle, Cli, Command, Format, GenKind, ModeArg, OracleKind, ScopeArg};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_MALFORMED: u8 = 3;

struct Outcome {
    code: u8,
    text: String,
    machine: Value,
}

impl Outcome {
    fn new(ok: bool, text: String, machine: Value) -> Outcome {
        Outcome {
            code: if ok { EXIT_OK } else { EXIT_NEGATIVE },
            text,
            machine,
        }
    }
}

pub fn run(cli: &Cli) -> u8 {
    let fmt = Fmt { approx: cli.approx };
    let result = match &cli.command {
        Command::Validate { config } => validate(config),
        Command::E { config, union, bundle } => e_cmd(&fmt, config, union.as_deref(), bundle),
        Command::Check {
            config,
            bundle,
            scope,
            twist,
        } => check(&fmt, config, bundle, *scope, twist.as_deref()),
        Command::Interval { config, union, bundle } => interval(&fmt, config, union, bundle),
        Command::Enumerate {
            config,
            bundle,
            root,
            trace,
        } => enumerate(&fmt, config, bundle, *root, *trace),
        Command::Oracle { kind } => oracle(&fmt, kind),
        Command::Gen { kind } => generate(kind),
    };
    match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Machine => format!("{}\n", serde_json::to_string_pretty(&out.machine).unwrap()),
            };
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            out.code
        }
        Err(e) => {
            let code = if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_MALFORMED };
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Machine => {
                    let kind = if code == EXIT_PRECONDITION { "precondition" } else { "malformed" };
                    let _ = writeln!(std::io::stdout().lock(), "{}", json!({ "error": e.to_string(), "kind": kind }));
                }
            }
            code
        }
    }
}

type Res<T> = Result<T, Error>;

struct Fmt {
    approx: bool,
}

impl Fmt {
    fn rat(&self, r: &Rational) -> String {
        if self.approx && !r.is_integer() {
            format!("{r} (~{:.6})", approx(r))
        } else {
            r.to_string()
        }
    }

    fn point(&self, p: &RealPoint) -> String {
        match p {
            RealPoint::Rational(r) => self.rat(r),
            RealPoint::Algebraic(_) if self.approx => format!("{p} (~{:.6})", p.approx()),
            RealPoint::Algebraic(_) => p.to_string(),
        }
    }
}

fn read_config(path: &Path) -> Res<Configuration> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    Configuration::from_json(&text)
}

fn load(path: &Path) -> Res<Configuration> {
    let config = read_config(path)?;
    let report = config.validate();
    if !report.passed() {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        return Err(Error::Invalid(names.join(", ")));
    }
    Ok(config)
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Minus => Mode::Minus,
        ModeArg::Plus => Mode::Plus,
    }
}

fn classes(config: &Configuration, b: &Bundle) -> Res<(ClassExpr, ClassExpr, Mode)> {
    Ok((config.parse_class(&b.bundle)?, config.parse_class(&b.polarization)?, mode(b.mode)))
}

fn union_names(config: &Configuration, y: ComponentSet) -> Vec<String> {
    y.iter().map(|i| config.symbol_name(i).to_string()).collect()
}

fn in_m(p: &UPoly) -> String {
    p.to_string().replace('x', "m")
}

fn coeff_strings(p: &UPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn parse_union(config: &Configuration, s: &str) -> Res<ComponentSet> {
    let y = config.parse_union(s)?;
    if y.is_empty() {
        return Err(Error::EmptyUnion);
    }
    if y == config.full() {
        return Err(Error::FullUnion);
    }
    Ok(y)
}

fn parse_ints(s: &str) -> Res<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| Error::Malformed(format!("not an integer: `{t}`"))))
        .collect()
}

fn validate(path: &Path) -> Res<Outcome> {
    let config = read_config(path)?;
    let report = config.validate();
    let mut text = String::new();
    for c in &report.checks {
        let _ = write!(text, "{:<24} {}", c.name, if c.passed { "ok" } else { "FAILED" });
        if let Some(d) = &c.witness {
            let _ = write!(text, "  ({d})");
        }
        text.push('\n');
    }
    let machine = json!({ "passed": report.passed(), "checks": report.checks });
    Ok(Outcome::new(report.passed(), text, machine))
}

fn e_cmd(fmt: &Fmt, path: &Path, union: Option<&str>, b: &Bundle) -> Res<Outcome> {
    let config = load(path)?;
    let (l, h, _) = classes(&config, b)?;
    let n = config.num_components();
    let unions: Vec<ComponentSet> = match union {
        Some(u) => vec![parse_union(&config, u)?],
        None if n > twistlab::oracle::MAX_COMPONENTS => {
            return Err(Error::TooManyComponents(n, twistlab::oracle::MAX_COMPONENTS))
        }
        None => ComponentSet::proper_unions(n).collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for y in unions {
        let value = twistlab::stability::e_value(&config, y, &l)?;
        let poly = twistlab::stability::e_poly_m(&config, y, &l, &h)?;
        let sign = twistlab::exactnum::eventual_sign(&poly);
        let _ = writeln!(
            text,
            "{}: e = {}    e(m) = {}    eventually {}",
            config.format_union(y),
            fmt.rat(&value),
            in_m(&poly),
            sign
        );
        rows.push(json!({
            "union": union_names(&config, y),
            "e": value.to_string(),
            "e_m": coeff_strings(&poly),
            "eventual_sign": sign,
        }));
    }
    Ok(Outcome::new(true, text, Value::Array(rows)))
}

fn check(fmt: &Fmt, path: &Path, b: &Bundle, scope: ScopeArg, twist: Option<&str>) -> Res<Outcome> {
    let config = load(path)?;
    let (mut l, h, mode) = classes(&config, b)?;
    let n = config.num_components();
    if let Some(t) = twist {
        let t = parse_ints(t)?;
        if t.len() != n {
            return Err(Error::Arity { expected: n, got: t.len() });
        }
        l = apply_twist(&l, &Twist::new(&t));
    }
    let scope = match scope {
        ScopeArg::Pairs => Scope::ConnectedPairs,
        ScopeArg::All => Scope::AllUnions,
    };
    let checks = semistability_checks(&config, &l, &h, mode, scope, Exec::default())?;
    let failing: Vec<&UnionCheck> = checks.iter().filter(|c| !c.ok).collect();
    let ok = failing.is_empty();
    let mut text = format!(
        "{} ({} unions checked)\n",
        if ok { "semistable" } else { "not semistable" },
        checks.len()
    );
    for c in &failing {
        let e = match c.e.degree() {
            None | Some(0) => format!("e = {}", fmt.rat(&c.e.coeff(0))),
            Some(_) => format!("e(m) = {}, eventually {}", in_m(&c.e), c.sign),
        };
        let _ = writeln!(text, "  {}: {e}", config.format_union(c.union));
    }
    let machine = json!({
        "semistable": ok,
        "checked": checks.len(),
        "failing": failing.iter().map(|c| json!({
            "union": union_names(&config, c.union),
            "e_m": coeff_strings(&c.e),
            "eventual_sign": c.sign,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(ok, text, machine))
}

fn interval(fmt: &Fmt, path: &Path, union: &str, b: &Bundle) -> Res<Outcome> {
    let config = load(path)?;
    let (l, h, mode) = classes(&config, b)?;
    let y = parse_union(&config, union)?;
    let report = twistable_interval(&config, y, &l, &h, mode)?;
    let kx = match kx_criterion(&config, y) {
        Ok(k) => Some(k),
        Err(Error::NoCanonical) => None,
        Err(e) => return Err(e),
    };
    let mut text = String::new();
    let _ = writeln!(text, "e_Y = {}", report.e_y);
    let _ = writeln!(text, "e_Z = {}", report.e_z);
    let ok = match &report.kind {
        IntervalKind::UnitInterval(u) => {
            let _ = writeln!(text, "twistable: {}", u.interval);
            let _ = writeln!(text, "  s = {}", fmt.point(&u.s));
            if let Some(case) = u.case {
                let check = match u.cross_check {
                    Some(true) => " (cross-check agrees)",
                    Some(false) => " (cross-check DISAGREES)",
                    None => "",
                };
                let _ = writeln!(text, "  case: {case:?}{check}");
            }
            let cands: Vec<String> = u.candidates.iter().map(i64::to_string).collect();
            let _ = writeln!(text, "  integer twists: {}", cands.join(", "));
            u.cross_check != Some(false)
        }
        IntervalKind::Degenerate(d) => {
            let _ = writeln!(text, "Degenerate: {}", d.reason);
            let parts: Vec<String> = d.feasible.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                text,
                "  feasible set: {}",
                if parts.is_empty() { "empty".to_string() } else { parts.join(" U ") }
            );
            false
        }
    };
    if let Some(k) = &kx {
        let _ = writeln!(text, "kx = {}  ({:?})", fmt.rat(&k.value), k.classification);
    }
    let mut machine = serde_json::to_value(&report).unwrap();
    machine["kx"] = serde_json::to_value(&kx).unwrap();
    Ok(Outcome::new(ok, text, machine))
}

fn trace_lines(config: &Configuration, node: &TraceNode, depth: usize, out: &mut String) {
    let (p, v) = node.edge;
    let what = match &node.interval.kind {
        IntervalKind::UnitInterval(u) => u.interval.to_string(),
        IntervalKind::Degenerate(d) => format!("degenerate ({})", d.reason),
    };
    let cands: Vec<String> = node.candidates.iter().map(i64::to_string).collect();
    let _ = writeln!(
        out,
        "{:indent$}{} -> {}: {what}, candidates [{}]",
        "",
        config.symbol_name(p),
        config.symbol_name(v),
        cands.join(", "),
        indent = 2 * depth
    );
    for child in &node.children {
        trace_lines(config, child, depth + 1, out);
    }
}

fn enumerate(_fmt: &Fmt, path: &Path, b: &Bundle, root: usize, trace: bool) -> Res<Outcome> {
    let config = load(path)?;
    let (l, h, mode) = classes(&config, b)?;
    if root >= config.num_components() {
        return Err(Error::Malformed(format!("root {root} out of range")));
    }
    let result = enumerate_with(&config, &l, &h, mode, root, Exec::default())?;
    let count = result.twists.len();
    let label = match count {
        0 => "none",
        1 => "stable",
        _ => "strictly semistable",
    };
    let mut text = format!("{count} semistable twist{} ({label})\n", if count == 1 { "" } else { "s" });
    for t in &result.twists {
        let _ = writeln!(text, "  {t:?}");
    }
    if trace {
        if let Some(step) = &result.trace.steps {
            text.push_str("trace:\n");
            trace_lines(&config, step, 1, &mut text);
        }
    }
    let machine = json!({
        "twists": result.twists,
        "count": count,
        "classification": label,
        "trace": result.trace,
    });
    Ok(Outcome::new(count > 0, text, machine))
}

fn oracle_text(report: &OracleReport) -> String {
    let mut text = String::new();
    for c in &report.checks {
        let _ = writeln!(text, "{:<24} {:>6} runs  {} failures", c.name, c.runs, c.failures);
    }
    for ce in &report.counterexamples {
        let _ = writeln!(text, "counterexample [{}] union {:?}: {}", ce.check, ce.union, ce.detail);
    }
    text
}

fn oracle(fmt: &Fmt, kind: &OracleKind) -> Res<Outcome> {
    match kind {
        OracleKind::Brute {
            config,
            bundle,
            window,
            grow,
        } => {
            let config = load(config)?;
            let (l, h, mode) = classes(&config, bundle)?;
            let w = if *grow { oracle_window(&config, &l, &h, mode, *window)? } else { *window };
            let found = brute_force_twists(&config, &l, &h, mode, w)?;
            let (agree, note) = match enumerate_with(&config, &l, &h, mode, 0, Exec::default()) {
                Ok(e) => {
                    let inside: Vec<Twist> = e
                        .twists
                        .into_iter()
                        .filter(|t| t.coords().iter().all(|x| x.unsigned_abs() <= u64::from(w)))
                        .collect();
                    (Some(inside == found), None)
                }
                Err(e) if e.is_precondition() => (None, Some(e.to_string())),
                Err(e) => return Err(e),
            };
            let mut text = format!("window {w}: {} semistable twists\n", found.len());
            for t in &found {
                let _ = writeln!(text, "  {t:?}");
            }
            match (agree, &note) {
                (Some(true), _) => text.push_str("enumeration agrees\n"),
                (Some(false), _) => text.push_str("enumeration DISAGREES\n"),
                (None, Some(n)) => {
                    let _ = writeln!(text, "enumeration not applicable: {n}");
                }
                (None, None) => {}
            }
            let machine = json!({
                "window": w,
                "twists": found,
                "enumeration_agrees": agree,
                "enumeration_note": note,
            });
            Ok(Outcome::new(agree != Some(false) && !found.is_empty(), text, machine))
        }
        OracleKind::Balanced { config, bundle } => {
            let config = load(config)?;
            let l = config.parse_class(bundle)?;
            let report = balanced_check(&config, &l)?;
            let mut text = format!("g_X = {}, deg L = {}\n", report.genus, report.degree);
            for r in &report.rows {
                let _ = writeln!(
                    text,
                    "{}: deg = {}, bound = {}, balanced {}, e = {}{}",
                    config.format_union(r.union),
                    r.degree,
                    fmt.rat(&r.bound),
                    if r.balanced { "yes" } else { "no" },
                    fmt.rat(&r.e),
                    if r.agrees { "" } else { "  DISAGREES" }
                );
            }
            let _ = writeln!(
                text,
                "{}, {}",
                if report.balanced() { "balanced" } else { "not balanced" },
                if report.all_agree() { "sign test agrees" } else { "sign test DISAGREES" }
            );
            let machine = json!({
                "balanced": report.balanced(),
                "agrees": report.all_agree(),
                "report": report,
            });
            Ok(Outcome::new(report.balanced() && report.all_agree(), text, machine))
        }
        OracleKind::Identities { config, samples, seed } => {
            let config = load(config)?;
            let report = identity_battery(&config, *samples, *seed)?;
            let ok = report.passed();
            Ok(Outcome::new(ok, oracle_text(&report), serde_json::to_value(&report).unwrap()))
        }
        OracleKind::Degrees { config, union, bundle } => {
            let config = load(config)?;
            let (l, h, _) = classes(&config, bundle)?;
            let y = parse_union(&config, union)?;
            let report = degree_bound_battery(&config, y, &l, &h)?;
            let ok = report.passed();
            Ok(Outcome::new(ok, oracle_text(&report), serde_json::to_value(&report).unwrap()))
        }
        OracleKind::Threshold { config, union, bundle } => {
            let config = load(config)?;
            let (l, h, _) = classes(&config, bundle)?;
            let y = parse_union(&config, union)?;
            let t = m_threshold(&config, y, &l, &h)?;
            let text = format!(
                "m0 = {}\nroot bound = {}\neventual sign {}\nsamples {}\n",
                t.m0,
                fmt.rat(&t.bound),
                t.eventual,
                if t.samples_agree { "agree" } else { "DISAGREE" }
            );
            Ok(Outcome::new(t.samples_agree, text, serde_json::to_value(&t).unwrap()))
        }
    }
}

fn parse_edges(s: &str) -> Res<Vec<(usize, usize, u32)>> {
    let bad = |t: &str| Error::Malformed(format!("bad edge `{t}`"));
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (pair, nodes) = match t.split_once(':') {
                Some((p, k)) => (p, k.parse::<u32>().map_err(|_| bad(t))?),
                None => (t, 1),
            };
            let (i, j) = pair.split_once('-').ok_or_else(|| bad(t))?;
            Ok((i.parse().map_err(|_| bad(t))?, j.parse().map_err(|_| bad(t))?, nodes))
        })
        .collect()
}

fn emit(config: &Configuration, out: Option<&Path>) -> Res<Outcome> {
    let body = config.to_json();
    let summary = json!({
        "components": config.num_components(),
        "dimension": config.dim(),
        "path": out.map(|p| p.display().to_string()),
    });
    let text = match out {
        Some(p) => {
            fs::write(p, format!("{body}\n")).map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?;
            format!(
                "wrote {} ({} components, dimension {})\n",
                p.display(),
                config.num_components(),
                config.dim()
            )
        }
        None => format!("{body}\n"),
    };
    let machine = if out.is_some() { summary } else { serde_json::from_str(&body).unwrap() };
    Ok(Outcome::new(true, text, machine))
}

fn generate(kind: &GenKind) -> Res<Outcome> {
    match kind {
        GenKind::Curve {
            genera,
            edges,
            degrees,
            seed,
            out,
        } => {
            let config = match genera {
                Some(g) => {
                    let genera: Vec<u32> = parse_ints(g)?
                        .into_iter()
                        .map(|x| u32::try_from(x).map_err(|_| Error::Malformed(format!("bad genus {x}"))))
                        .collect::<Res<_>>()?;
                    let edges = parse_edges(edges.as_deref().unwrap_or(""))?;
                    let mut deg = BTreeMap::new();
                    for d in degrees {
                        let (name, values) = d
                            .split_once('=')
                            .ok_or_else(|| Error::Malformed(format!("bad degree argument `{d}`")))?;
                        deg.insert(name.trim().to_string(), parse_ints(values)?);
                    }
                    curve_builder(&genera, &edges, &deg)?
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    random_tree_curve(&mut rng, &CurveParams::default())
                }
            };
            emit(&config, out.as_deref())
        }
        GenKind::Synth {
            dim,
            tree,
            components,
            seed,
            out,
        } => {
            let tree = match tree {
                Some(t) => parse_edges(t)?.into_iter().map(|(i, j, _)| (i, j)).collect(),
                None => {
                    if *components == 0 {
                        return Err(Error::Malformed("need at least one component".into()));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    random_tree(*components, &mut rng)
                }
            };
            let config = synth_generator(*dim, &tree, *seed)?;
            emit(&config, out.as_deref())
        }
    }
}
