//! Command-line surface of the dimer pipeline.
//!
//! Every command prints a JSON report on stdout (or plain text where noted).
//! Exit status: 0 success, 1 a check or relation failed, 2 bad input.
//! Errors go to stderr as one JSON object.

pub mod manifest;
pub mod render;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dimer_core::bundles::{arrow_divisor, bundle_class, verify_pic_relations, ClassGroup, Divisor};
use dimer_core::dimer::{validate_dimer, Quiver, Tiling};
use dimer_core::fan::{build_fan, Fan, Stability};
use dimer_core::io::{read_dimer, serialize_dimer};
use dimer_core::jigsaw::{audit_segment, fundamental_hexagon, jigsaw_pieces, jigsaw_transform, tau_quivers, Direction};
use dimer_core::matchings::{characteristic_polygon, check_consistency, MatchingData};
use dimer_core::mckay::{crosscheck_recipes, mckay_dimer, CyclicGroup};
use dimer_core::recipe::{run_recipe, socle_violations};
use dimer_core::Error;

use manifest::{FormatVersions, Input, RunManifest, DIMER_FORMAT, REPORT_FORMAT};
use render::Format;

#[derive(Parser, Debug)]
#[command(name = "dimer", version, about = "Combinatorial Reid's recipe for consistent dimer models")]
pub struct Cli {
    /// Stability condition: `default` or `@FILE` with a JSON array of weights.
    #[arg(long, global = true, default_value = "default")]
    pub theta: String,
    /// Zero vertex for the default stability condition.
    #[arg(long, global = true, default_value_t = 0)]
    pub zero_vertex: usize,
    /// Also write the report and a run manifest into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the model and its consistency.
    Validate { file: PathBuf },
    /// Perfect matchings and their height changes.
    Matchings {
        file: PathBuf,
        /// Print only the number of matchings.
        #[arg(long)]
        count: bool,
    },
    /// The characteristic polygon.
    Polygon { file: PathBuf },
    /// θ-stable matchings and the triangulation.
    Fan { file: PathBuf },
    /// Jigsaw transformation across an interior segment given by two ray ids.
    Jigsaw {
        file: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        tau: (usize, usize),
    },
    /// Markings of interior points and segments.
    Recipe { file: PathBuf },
    /// Tautological divisors of arrows and bundles.
    Divisors { file: PathBuf },
    /// Picard relations, one per interior point.
    Relations { file: PathBuf },
    /// Drawing of the marked triangulation, or of one fundamental hexagon.
    Render {
        file: PathBuf,
        #[arg(long, default_value = "svg")]
        format: Format,
        /// Draw `Hex(σ)` for this triangle id instead (SVG only).
        #[arg(long)]
        hexagon: Option<usize>,
    },
    /// Hexagonal model of 1/r(a,b,c) and the classical cross-check.
    Mckay {
        /// `r:a,b,c` with a + b + c ≡ 0 mod r and gcd(a, b, c, r) = 1
        #[arg(long)]
        group: String,
    },
    /// Every stage with all checks.
    CheckAll { file: PathBuf },
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected R1,R2, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// What a command produced.
pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
    /// Files for `--out`: name and contents.
    pub artifacts: Vec<(String, String)>,
    pub last_stage: &'static str,
}

impl Outcome {
    fn json(v: &Value, passed: bool, name: &str, last_stage: &'static str) -> Outcome {
        let text = serde_json::to_string_pretty(v).expect("json") + "\n";
        Outcome { stdout: text.clone(), passed, artifacts: vec![(format!("{name}.json"), text)], last_stage }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input { .. } => 2,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> String {
    let detail = match e {
        Error::Input { pointer, .. } => json!({ "pointer": pointer }),
        Error::Invalid(rep) => serde_json::to_value(&rep.violations).unwrap_or(Value::Null),
        _ => Value::Null,
    };
    json!({ "error": e.kind(), "message": e.to_string(), "detail": detail, "exit": exit_code(e) }).to_string()
}

/// Parses arguments, runs the command and returns the exit status.
pub fn run<I: IntoIterator<Item = T>, T: Into<OsString> + Clone>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                print!("{e}");
            } else {
                eprintln!("{}", json!({ "error": "usage", "message": e.to_string(), "exit": 2 }));
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(dir) = &cli.out {
                if let Err(e) = write_out(&cli, dir, &out) {
                    eprintln!("{}", error_json(&e));
                    return exit_code(&e);
                }
            }
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            exit_code(&e)
        }
    }
}

fn write_out(cli: &Cli, dir: &Path, out: &Outcome) -> dimer_core::Result<()> {
    let io = |e: std::io::Error| Error::input(dir.display().to_string(), format!("cannot write output: {e}"));
    std::fs::create_dir_all(dir).map_err(io)?;
    for (name, text) in &out.artifacts {
        std::fs::write(dir.join(name), text).map_err(io)?;
    }
    let input = match &cli.command {
        Command::Mckay { group } => Input::Generator { spec: format!("mckay {group}") },
        Command::Validate { file }
        | Command::Matchings { file, .. }
        | Command::Polygon { file }
        | Command::Fan { file }
        | Command::Jigsaw { file, .. }
        | Command::Recipe { file }
        | Command::Divisors { file }
        | Command::Relations { file }
        | Command::Render { file, .. }
        | Command::CheckAll { file } => Input::File { path: file.display().to_string() },
    };
    let m = RunManifest {
        command: command_name(&cli.command).to_string(),
        input,
        theta: cli.theta.clone(),
        zero_vertex: cli.zero_vertex,
        stages: RunManifest::stages_through(out.last_stage),
        out: Some(dir.display().to_string()),
        formats: FormatVersions { dimer: DIMER_FORMAT, report: REPORT_FORMAT },
    };
    let text = serde_json::to_string_pretty(&m).expect("json") + "\n";
    std::fs::write(dir.join("manifest.json"), text).map_err(io)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Matchings { .. } => "matchings",
        Command::Polygon { .. } => "polygon",
        Command::Fan { .. } => "fan",
        Command::Jigsaw { .. } => "jigsaw",
        Command::Recipe { .. } => "recipe",
        Command::Divisors { .. } => "divisors",
        Command::Relations { .. } => "relations",
        Command::Render { .. } => "render",
        Command::Mckay { .. } => "mckay",
        Command::CheckAll { .. } => "check-all",
    }
}

/// Loaded model with its quiver and matchings; the fan is built on demand.
struct Ctx {
    t: Tiling,
    q: Quiver,
    md: MatchingData,
}

fn load(file: &Path) -> dimer_core::Result<Tiling> {
    Tiling::new(read_dimer(file)?)
}

fn ctx(file: &Path) -> dimer_core::Result<Ctx> {
    let t = load(file)?;
    let q = t.quiver();
    let md = characteristic_polygon(&t, &q)?;
    Ok(Ctx { t, q, md })
}

/// Reads `default` or `@FILE`; weights may be integers or strings `p/q`.
pub fn stability(spec: &str, zero_vertex: usize, n: usize) -> dimer_core::Result<Stability> {
    if spec == "default" {
        if zero_vertex >= n {
            return Err(Error::input("/zero-vertex", format!("vertex {zero_vertex} out of range 0..{n}")));
        }
        return Stability::default_for(n, zero_vertex);
    }
    let path = spec
        .strip_prefix('@')
        .ok_or_else(|| Error::input("/theta", format!("expected `default` or `@FILE`, got {spec:?}")))?;
    let bytes = std::fs::read(path).map_err(|e| Error::input(path, format!("cannot read file: {e}")))?;
    let v: Vec<Value> = serde_json::from_slice(&bytes).map_err(|e| Error::input(path, format!("expected a JSON array: {e}")))?;
    let mut fracs = Vec::new();
    for (k, w) in v.iter().enumerate() {
        let bad = || Error::input(format!("/{k}"), format!("weight {w} is not an integer or p/q"));
        let (p, q) = match w {
            Value::Number(x) => (x.as_i64().ok_or_else(bad)?, 1),
            Value::String(s) => {
                let (p, q) = s.split_once('/').ok_or_else(bad)?;
                (p.trim().parse().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        if q <= 0 {
            return Err(bad());
        }
        fracs.push((p, q));
    }
    if fracs.len() != n {
        return Err(Error::input("/theta", format!("{} weights for {n} vertices", fracs.len())));
    }
    let l = fracs.iter().fold(1i64, |l, &(_, q)| l / dimer_core::lattice::gcd(l, q) * q);
    let weights: Vec<i64> = fracs.iter().map(|&(p, q)| p * (l / q)).collect();
    let negative: Vec<usize> = (0..n).filter(|&i| weights[i] < 0).collect();
    let [zero] = negative[..] else {
        return Err(Error::input("/theta", "a 0-generated condition has exactly one negative weight"));
    };
    Stability::new(zero, weights).map_err(|e| Error::input("/theta", e.to_string()))
}

fn fan_of(cli: &Cli, c: &Ctx) -> dimer_core::Result<Fan> {
    build_fan(&c.q, &c.md, &stability(&cli.theta, cli.zero_vertex, c.q.n_vertices)?)
}

fn divisor_map(d: &Divisor) -> BTreeMap<usize, i64> {
    d.iter().enumerate().filter(|(_, &m)| m != 0).map(|(k, &m)| (k, m)).collect()
}

fn fan_json(c: &Ctx, fan: &Fan) -> Value {
    let rays: Vec<Value> = fan
        .rays
        .iter()
        .enumerate()
        .map(|(k, r)| json!({ "id": k, "point": r.point, "kind": r.kind, "matching": c.t.edge_ids_of(&r.matching) }))
        .collect();
    let triangles: Vec<Value> = fan
        .triangles
        .iter()
        .enumerate()
        .map(|(k, t)| {
            json!({
                "id": k,
                "rays": t.rays,
                "support": t.module.support.to_vec(),
                "sinks": c.q.sinks(&t.module.support),
            })
        })
        .collect();
    let tris: Vec<_> = fan.triangles.iter().map(|t| t.rays.map(|r| fan.rays[r].point)).collect();
    let report = dimer_core::fan::verify_triangulation(&fan.corners, &tris, c.q.n_vertices);
    json!({
        "theta": fan.theta,
        "rays": rays,
        "interior": fan.interior,
        "triangles": triangles,
        "segments": fan.segments,
        "triangulation": report,
    })
}

fn execute(cli: &Cli) -> dimer_core::Result<Outcome> {
    match &cli.command {
        Command::Validate { file } => {
            let model = read_dimer(file)?;
            let rep = validate_dimer(&model)?;
            if !rep.is_valid() {
                let v = json!({ "valid": false, "violations": rep.violations });
                return Ok(Outcome::json(&v, false, "validate", "validate"));
            }
            let t = Tiling::new(model)?;
            let cons = check_consistency(&t);
            let v = json!({ "valid": true, "counts": t.counts(), "consistency": cons, "consistent": cons.is_consistent() });
            Ok(Outcome::json(&v, cons.is_consistent(), "validate", "validate"))
        }
        Command::Matchings { file, count } => {
            let c = ctx(file)?;
            let n = c.md.matchings.len();
            if *count {
                return Ok(Outcome { stdout: format!("{n}\n"), passed: true, artifacts: vec![("matchings.txt".into(), format!("{n}\n"))], last_stage: "matchings" });
            }
            let ms: Vec<Value> =
                c.md.matchings.iter().map(|m| json!({ "edges": c.t.edge_ids_of(&m.edges), "point": m.point })).collect();
            let v = json!({ "count": n, "height_changes": c.md.polygon.points.len(), "matchings": ms });
            Ok(Outcome::json(&v, true, "matchings", "matchings"))
        }
        Command::Polygon { file } => {
            let c = ctx(file)?;
            let p = &c.md.polygon;
            let points: Vec<Value> = p
                .points
                .iter()
                .map(|(pt, ms)| json!({ "point": pt, "kind": p.kinds[pt], "multiplicity": ms.len() }))
                .collect();
            let v = json!({
                "corners": p.corners,
                "twice_area": p.twice_area(),
                "interior": p.interior(),
                "points": points,
                "unoccupied": p.unoccupied(),
            });
            Ok(Outcome::json(&v, p.unoccupied().is_empty(), "polygon", "matchings"))
        }
        Command::Fan { file } => {
            let c = ctx(file)?;
            let fan = fan_of(cli, &c)?;
            Ok(Outcome::json(&fan_json(&c, &fan), true, "fan", "fan"))
        }
        Command::Jigsaw { file, tau } => {
            let c = ctx(file)?;
            let fan = fan_of(cli, &c)?;
            let s = fan.segment(tau.0, tau.1).ok_or_else(|| {
                Error::input("/tau", format!("rays {} and {} do not span an interior segment", tau.0, tau.1))
            })?;
            let jig = jigsaw_pieces(&c.t, &c.q, &fan, s)?;
            let quivers = tau_quivers(&c.q, &fan, &jig)?;
            let checks = audit_segment(&c.t, &c.q, &fan, s);
            let passed = checks.iter().all(|k| k.ok);
            let v = json!({
                "segment": fan.segments[s],
                "jigsaw": jig,
                "to_minus": jigsaw_transform(&fan, &jig, Direction::PlusToMinus)?,
                "to_plus": jigsaw_transform(&fan, &jig, Direction::MinusToPlus)?,
                "quivers": quivers,
                "checks": checks,
            });
            Ok(Outcome::json(&v, passed, "jigsaw", "jigsaw"))
        }
        Command::Recipe { file } => {
            let c = ctx(file)?;
            let fan = fan_of(cli, &c)?;
            let (rep, _) = run_recipe(&c.t, &c.q, &fan)?;
            let bad = socle_violations(&c.q, &fan, &rep);
            let v = json!({ "recipe": rep, "socle_violations": bad });
            Ok(Outcome::json(&v, bad.is_empty(), "recipe", "recipe"))
        }
        Command::Divisors { file } => {
            let c = ctx(file)?;
            let fan = fan_of(cli, &c)?;
            let cg = ClassGroup::new(&fan);
            let arrows: Vec<Value> = (0..c.q.n_arrows())
                .map(|a| {
                    let ar = &c.q.arrows[a];
                    json!({ "arrow": a, "tail": ar.tail, "head": ar.head, "divisor": divisor_map(&arrow_divisor(&fan, a)) })
                })
                .collect();
            let bundles: Vec<Value> = (0..c.q.n_vertices)
                .map(|i| {
                    bundle_class(&c.q, &fan, &cg, i)
                        .map(|b| json!({ "vertex": i, "divisor": divisor_map(&b.divisor), "class": b.class }))
                })
                .collect::<dimer_core::Result<_>>()?;
            let v = json!({
                "class_group": { "rank": cg.rank(), "torsion": cg.torsion() },
                "arrows": arrows,
                "bundles": bundles,
            });
            Ok(Outcome::json(&v, true, "divisors", "bundles"))
        }
        Command::Relations { file } => {
            let c = ctx(file)?;
            let fan = fan_of(cli, &c)?;
            let (rep, _) = run_recipe(&c.t, &c.q, &fan)?;
            let rel = verify_pic_relations(&c.q, &fan, &rep)?;
            let v = json!({ "relations": rel, "ok": rel.ok(), "count": rel.relations.len() });
            Ok(Outcome::json(&v, rel.ok(), "relations", "bundles"))
        }
        Command::Render { file, format, hexagon } => {
            let c = ctx(file)?;
            let fan = fan_of(cli, &c)?;
            let (text, name) = match hexagon {
                Some(k) => {
                    if *format != Format::Svg {
                        return Err(Error::input("/format", "hexagons are drawn as SVG only"));
                    }
                    if *k >= fan.triangles.len() {
                        return Err(Error::input("/hexagon", format!("no triangle {k}")));
                    }
                    let hex = fundamental_hexagon(&c.t, &c.q, &fan, *k)?;
                    (render::render_hexagon(&c.t, &hex)?, format!("hexagon-{k}.svg"))
                }
                None => {
                    let (rep, _) = run_recipe(&c.t, &c.q, &fan)?;
                    let ext = if *format == Format::Svg { "svg" } else { "tex" };
                    (render::render_fan(&fan, &rep, *format), format!("fan.{ext}"))
                }
            };
            Ok(Outcome { stdout: text.clone(), passed: true, artifacts: vec![(name, text)], last_stage: "recipe" })
        }
        Command::Mckay { group } => {
            let g = CyclicGroup::parse(group)?;
            let model = mckay_dimer(&g);
            let dimer_text = serialize_dimer(&model);
            let report = crosscheck_recipes(&g)?;
            let dimer: Value = serde_json::from_str(&dimer_text).expect("serialized dimer is JSON");
            let v = json!({ "group": g, "dimer": dimer, "crosscheck": report });
            let mut out = Outcome::json(&v, report.ok(), "mckay", "bundles");
            out.artifacts.push((format!("{}.json", model.name), dimer_text));
            Ok(out)
        }
        Command::CheckAll { file } => check_all(cli, file),
    }
}

fn check_all(cli: &Cli, file: &Path) -> dimer_core::Result<Outcome> {
    let mut stages: Vec<Value> = Vec::new();
    fn push(stages: &mut Vec<Value>, name: &str, ok: bool, detail: Value) {
        stages.push(json!({ "stage": name, "ok": ok, "detail": detail }));
    }
    let model = read_dimer(file)?;
    let rep = validate_dimer(&model)?;
    push(&mut stages, "validate", rep.is_valid(), json!(rep.violations));
    if !rep.is_valid() {
        let v = json!({ "ok": false, "stages": stages });
        return Ok(Outcome::json(&v, false, "check-all", "validate"));
    }
    let t = Tiling::new(model)?;
    let cons = check_consistency(&t);
    push(&mut stages, "consistency", cons.is_consistent(), json!(cons));
    let q = t.quiver();
    push(&mut stages, "faces", q.check_faces().is_ok(), Value::Null);
    let md = characteristic_polygon(&t, &q)?;
    push(&mut stages, "polygon", md.polygon.unoccupied().is_empty(), json!({ "matchings": md.matchings.len(), "points": md.polygon.points.len() }));
    let c = Ctx { t, q, md };
    let fan = fan_of(cli, &c)?;
    push(&mut stages, "fan", true, json!({ "rays": fan.rays.len(), "triangles": fan.triangles.len(), "segments": fan.segments.len() }));
    let mut failed = Vec::new();
    for s in 0..fan.segments.len() {
        for k in audit_segment(&c.t, &c.q, &fan, s) {
            if !k.ok {
                failed.push(json!({ "segment": s, "check": k.name, "detail": k.detail }));
            }
        }
    }
    push(&mut stages, "jigsaw", failed.is_empty(), json!(failed));
    let (rep, _) = run_recipe(&c.t, &c.q, &fan)?;
    let bad = socle_violations(&c.q, &fan, &rep);
    let warnings: Vec<&String> = rep.vertices.iter().flat_map(|v| &v.warnings).collect();
    push(&mut stages, "recipe", bad.is_empty(), json!({ "socle_violations": bad, "warnings": warnings }));
    let rel = verify_pic_relations(&c.q, &fan, &rep)?;
    push(&mut stages, "relations", rel.ok(), json!(rel));
    let ok = stages.iter().all(|s| s["ok"] == json!(true));
    let v = json!({ "ok": ok, "stages": stages });
    Ok(Outcome::json(&v, ok, "check-all", "bundles"))
}
