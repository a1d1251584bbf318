//! `bubble`: construct, check, transform, minimize and draw bubble complexes.
//!
//! Exit codes: 0 success, 1 validation failure, 2 input error, 3 infeasible
//! parameters.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bubbles::document::ComplexDocument;
use bubbles::families::{self, NgonParams};
use bubbles::fixtures::{self, Fixture};
use bubbles::minimize::{minimize_with, MinimizeProblem};
use bubbles::moves::{self, MoveReport, POP_THETA};
use bubbles::regularity;
use bubbles::{lemmas, svg, BubbleComplex, EdgeId, Error, FaceId, RegionLabel};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bubble", version, about = "Planar soap-bubble complexes")]
struct Cli {
    /// Tolerance for regularity checks.
    #[arg(long, global = true, default_value_t = regularity::DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex from a named family and write its JSON document.
    Construct(ConstructArgs),
    /// Check the regularity conditions; exits 1 if any fails.
    Validate { file: PathBuf },
    /// Print perimeter, areas, pressures and residuals.
    Measure { file: PathBuf },
    /// Apply a local move and report its perimeter and area changes.
    ApplyMove(MoveArgs),
    /// Minimize perimeter at fixed areas, printing one trace line per step.
    Minimize(MinimizeArgs),
    /// Run the built-in suite of numeric checks.
    VerifyLemmas,
    /// Draw a complex as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shape {
    Circle,
    Double,
    Triple,
    Quadruple,
    Flower,
    Ngon,
    CircleRadii,
    /// Three 3-gons and three 5-gons; faces t, f1, n1, g, n2, f2.
    SwapRing,
    /// Ring whose 3-gons t and n1 share a region.
    PopRing,
    /// Triple bubble with an empty lens chamber.
    EmptyLens,
    /// Unit disc carrying two 2-gons, top and bottom.
    Lenses,
    /// 3-gon, 4-gons and a 5-gon around three inner vertices.
    Fixture345,
    /// Two adjacent 5-gons of different size.
    AdjacentFivegons,
    /// Triple bubble with one arc bulged out of balance.
    PerturbedTriple,
    /// Three bubbles in a row.
    Chain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Threegon,
    Fourgon,
    Fivegon,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    shape: Shape,
    /// Common pressure of the equal-pressure families [default: 1].
    #[arg(long)]
    kappa: Option<f64>,
    /// n-gon kind for `--shape ngon`.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Side length of a 4-gon.
    #[arg(long)]
    t: Option<f64>,
    /// First flat side of a 5-gon.
    #[arg(long)]
    u: Option<f64>,
    /// Second flat side of a 5-gon.
    #[arg(long)]
    v: Option<f64>,
    /// Area of a circle.
    #[arg(long)]
    area: Option<f64>,
    /// Comma-separated areas for `double` and `circle-radii`.
    #[arg(long, value_delimiter = ',')]
    areas: Option<Vec<f64>>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MoveName {
    FillEmptyChamber,
    Slide2gon,
    Reflect4gonInto3gon,
    SwapRegions,
    ReflectSmallIntoLarge,
    Reflect5gonInto3gon,
    Reflect5gonInto4gon,
    PopAndExpand,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MoveArgs {
    file: PathBuf,
    #[arg(long = "move", value_enum)]
    name: MoveName,
    /// Face ids or face names recorded in the document, in the move's argument order.
    #[arg(long, value_delimiter = ',', required = true)]
    faces: Vec<String>,
    /// Arc length to slide a 2-gon by.
    #[arg(long, default_value_t = 0.0)]
    displacement: f64,
    /// Half-angle of the expanded arc for pop-and-expand.
    #[arg(long, default_value_t = POP_THETA)]
    theta: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MinimizeArgs {
    file: PathBuf,
    /// Target areas for regions 1, 2, ...; defaults to the current areas.
    #[arg(long, value_delimiter = ',')]
    areas: Option<Vec<f64>>,
    /// Budget of quasi-Newton iterations.
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// A failed command and its exit code.
enum Failure {
    Validation(String),
    Input(String),
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Input(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Input(m) | Failure::Infeasible(m) => m,
        }
    }
}

/// Errors from constructing or transforming geometry: bad numbers are infeasible.
fn infeasible(e: Error) -> Failure {
    Failure::Infeasible(e.to_string())
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Validate { file } => validate(&file, cli.tol),
        Command::Measure { file } => measure(&file, cli.tol),
        Command::ApplyMove(a) => apply_move(&a),
        Command::Minimize(a) => run_minimize(&a, cli.tol),
        Command::VerifyLemmas => verify_lemmas(),
        Command::Render { file, out } => render(&file, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("bubble: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// Prints a line, ignoring a closed pipe.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn load(path: &Path) -> Result<(BubbleComplex, ComplexDocument), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let doc = ComplexDocument::from_json(&text).map_err(input)?;
    let c = doc.to_complex().map_err(input)?;
    Ok((c, doc))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("cannot write {}: {e}", p.display()))),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn document_with_faces(c: &BubbleComplex, faces: &BTreeMap<&'static str, FaceId>) -> ComplexDocument {
    let mut doc = ComplexDocument::from_complex(c);
    if !faces.is_empty() {
        let named: BTreeMap<&str, usize> = faces.iter().map(|(k, v)| (*k, v.0)).collect();
        doc.metadata.insert("faces".into(), json!(named));
    }
    doc
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Input(format!("--{flag} is required for this shape")))
}

fn build(a: &ConstructArgs) -> Result<Fixture, Failure> {
    let kappa = a.kappa.unwrap_or(1.0);
    let plain = |c: Result<BubbleComplex, Error>| c.map(|complex| Fixture { complex, faces: BTreeMap::new() });
    let fx = match a.shape {
        Shape::Circle => {
            let area = a.area.unwrap_or(PI);
            if !(area > 0.0 && area.is_finite()) {
                return Err(Failure::Infeasible(format!("circle area must be positive, got {area}")));
            }
            plain(families::circle(bubbles::Point::ORIGIN, (area / PI).sqrt(), RegionLabel::new(1), 2))
        }
        Shape::Double => {
            let areas = a.areas.clone().unwrap_or_else(|| vec![1.0, 1.0]);
            if areas.len() != 2 {
                return Err(Failure::Input(format!("a double bubble takes two areas, got {}", areas.len())));
            }
            plain(families::construct_standard_double(areas[0], areas[1]))
        }
        Shape::Triple => plain(families::construct_standard_triple(kappa)),
        Shape::Quadruple => plain(families::construct_standard_quadruple(kappa)),
        Shape::Flower => plain(families::construct_flower(kappa, &[])),
        Shape::CircleRadii => {
            let areas = a.areas.clone().ok_or_else(|| Failure::Input("--areas is required for circle-radii".into()))?;
            plain(families::circle_with_radii(&areas))
        }
        Shape::Ngon => {
            let kind = a.kind.ok_or_else(|| Failure::Input("--kind is required for --shape ngon".into()))?;
            let p = match kind {
                Kind::Threegon => NgonParams::threegon(kappa),
                Kind::Fourgon => NgonParams::fourgon(kappa, need(a.t, "t")?),
                Kind::Fivegon => NgonParams::fivegon(kappa, need(a.u, "u")?, need(a.v, "v")?),
            };
            plain(families::build_ngon(&p))
        }
        Shape::SwapRing => fixtures::swap_ring(kappa),
        Shape::PopRing => fixtures::pop_ring(),
        Shape::EmptyLens => fixtures::empty_lens_triple(kappa),
        Shape::Lenses => fixtures::lenses_on_circle(20f64.to_radians()),
        Shape::Fixture345 => fixtures::fixture_345(kappa, 4, 1),
        Shape::AdjacentFivegons => fixtures::adjacent_fivegons(),
        Shape::PerturbedTriple => fixtures::perturbed_triple(kappa, 0.05),
        Shape::Chain => fixtures::chain3(1.0),
    };
    fx.map_err(infeasible)
}

fn construct(a: &ConstructArgs) -> Outcome {
    let fx = build(a)?;
    emit(&document_with_faces(&fx.complex, &fx.faces).to_json(), a.out.as_deref())
}

fn validate(file: &Path, tol: f64) -> Outcome {
    let (c, _) = load(file)?;
    let report = regularity::validate(&c, tol);
    say(&serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.passes() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .conditions()
            .iter()
            .filter(|(_, r)| r.evaluated && !r.pass)
            .map(|(n, _)| *n)
            .chain(report.findings.iter().map(|f| f.kind.as_str()))
            .collect();
        Err(Failure::Validation(format!("not regular: {}", failed.join(", "))))
    }
}

fn measure(file: &Path, tol: f64) -> Outcome {
    let (c, _) = load(file)?;
    let areas: BTreeMap<String, f64> = c.region_areas().iter().map(|(r, a)| (r.to_string(), *a)).collect();
    let faces: Vec<Value> = c
        .interior_faces()
        .map(|f| {
            json!({
                "id": f.id.0,
                "region_label": f.region,
                "sides": f.side_count,
                "area": c.signed_face_area(f.id),
                "gauss_bonnet_residual": regularity::gauss_bonnet_residual(&c, f.id).ok(),
            })
        })
        .collect();
    let pressures = regularity::pressures(&c, tol.max(1e-6))
        .ok()
        .map(|p| p.regions.iter().map(|(r, x)| (r.to_string(), *x)).collect::<BTreeMap<_, _>>());
    let report = json!({
        "vertices": c.vertices().len(),
        "edges": c.edges().len(),
        "faces": c.faces().len(),
        "euler_characteristic": c.euler_characteristic(),
        "perimeter": c.total_perimeter(),
        "region_areas": areas,
        "pressures": pressures,
        "cocycle_residual": regularity::cocycle_residual(&c),
        "perimeter_pressure_residual": regularity::perimeter_pressure_residual(&c).ok(),
        "face_details": faces,
    });
    say(&serde_json::to_string_pretty(&report).expect("measurement serializes"));
    Ok(())
}

/// Resolves a face given as a document id or a name listed in the document's metadata.
fn resolve_face(c: &BubbleComplex, doc: &ComplexDocument, key: &str) -> Result<FaceId, Failure> {
    let id = match key.parse::<usize>() {
        Ok(id) => id,
        Err(_) => doc
            .metadata
            .get("faces")
            .and_then(|m| m.get(key))
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| Failure::Input(format!("no face named {key:?} in the document")))?,
    };
    // Document face ids are keys; follow any edge bounding the face to its id in the loaded complex.
    doc.edges
        .iter()
        .enumerate()
        .find_map(|(i, e)| {
            if e.face_left == id {
                Some(c.half_edge(EdgeId(i).forward()).face)
            } else if e.face_right == id {
                Some(c.half_edge(EdgeId(i).backward()).face)
            } else {
                None
            }
        })
        .ok_or_else(|| Failure::Input(format!("face {id} bounds no edge")))
}

fn move_failure(e: Error) -> Failure {
    match e {
        Error::InvalidArgument(m) => Failure::Input(m),
        e => Failure::Infeasible(e.to_string()),
    }
}

fn apply_move(a: &MoveArgs) -> Outcome {
    let (c, doc) = load(&a.file)?;
    let faces: Vec<FaceId> = a.faces.iter().map(|k| resolve_face(&c, &doc, k)).collect::<Result<_, _>>()?;
    let want = match a.name {
        MoveName::FillEmptyChamber | MoveName::Slide2gon => 1,
        _ => 2,
    };
    if faces.len() != want {
        return Err(Failure::Input(format!("this move takes {want} face(s), got {}", faces.len())));
    }
    let report: MoveReport = match a.name {
        MoveName::FillEmptyChamber => moves::fill_empty_chamber(&c, faces[0]),
        MoveName::Slide2gon => moves::slide_2gon(&c, faces[0], a.displacement),
        MoveName::Reflect4gonInto3gon => moves::reflect_4gon_into_3gon(&c, faces[0], faces[1]),
        MoveName::SwapRegions => moves::swap_regions(&c, faces[0], faces[1]),
        MoveName::ReflectSmallIntoLarge => moves::reflect_small_into_large(&c, faces[0], faces[1]),
        MoveName::Reflect5gonInto3gon => moves::reflect_5gon_into_3gon(&c, faces[0], faces[1]),
        MoveName::Reflect5gonInto4gon => moves::reflect_5gon_into_4gon(&c, faces[0], faces[1]),
        MoveName::PopAndExpand => moves::pop_and_expand(&c, faces[0], faces[1], a.theta),
    }
    .map_err(move_failure)?;
    let deltas: BTreeMap<String, f64> = report.area_deltas.iter().map(|(r, d)| (r.to_string(), *d)).collect();
    let summary = json!({
        "perimeter_before": c.total_perimeter(),
        "perimeter_after": report.result.total_perimeter(),
        "perimeter_delta": report.perimeter_delta,
        "area_deltas": deltas,
        "witness": report.witness,
        "violation": report.violation,
    });
    say(&serde_json::to_string_pretty(&summary).expect("summary serializes"));
    if let Some(out) = &a.out {
        emit(&ComplexDocument::from_complex(&report.result).to_json(), Some(out))?;
    }
    Ok(())
}

fn run_minimize(a: &MinimizeArgs, tol: f64) -> Outcome {
    let (c, _) = load(&a.file)?;
    let labels: Vec<RegionLabel> = c.region_labels().into_iter().filter(|r| !r.is_exterior()).collect();
    let targets: BTreeMap<RegionLabel, f64> = match &a.areas {
        Some(v) => {
            if v.len() != labels.len() {
                return Err(Failure::Input(format!("{} areas given for {} regions", v.len(), labels.len())));
            }
            labels.iter().copied().zip(v.iter().copied()).collect()
        }
        None => c.region_areas().into_iter().filter(|(r, _)| !r.is_exterior()).collect(),
    };
    let mut p = MinimizeProblem::new(c, targets);
    p.max_iterations = a.max_iter;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = minimize_with(&p, |r| {
        let _ = writeln!(
            lock,
            "iter={} perimeter={:.15} max_area_residual={:.3e} grad_norm={:.3e}",
            r.iteration, r.perimeter, r.max_area_residual, r.grad_norm
        );
    })
    .map_err(|e| match e {
        Error::InvalidComplex(m) => Failure::Input(m),
        e => Failure::Infeasible(e.to_string()),
    })?;
    drop(lock);
    let multipliers: Vec<String> = result.lagrange_multipliers.iter().map(|(r, l)| format!("{r}:{l:.12}")).collect();
    say(&format!(
        "done converged={} iterations={} perimeter={:.15} grad_norm={:.3e} multipliers={}",
        result.converged,
        result.iterations,
        result.complex.total_perimeter(),
        result.final_grad_norm,
        multipliers.join(",")
    ));
    if let Some(out) = &a.out {
        emit(&ComplexDocument::from_complex(&result.complex).to_json(), Some(out))?;
    }
    if !result.converged {
        return Err(Failure::Validation(format!("no convergence within {} iterations", a.max_iter)));
    }
    let report = regularity::validate(&result.complex, tol.max(1e3 * p.grad_tol));
    if report.conditions_pass() {
        Ok(())
    } else {
        Err(Failure::Validation("the minimized complex fails a regularity condition".into()))
    }
}

fn verify_lemmas() -> Outcome {
    let checks = lemmas::run();
    for c in &checks {
        say(&c.to_string());
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    say(&format!("{} checks, {} failed", checks.len(), failed));
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{failed} check(s) failed")))
    }
}

fn render(file: &Path, out: Option<&Path>) -> Outcome {
    let (c, _) = load(file)?;
    let text = svg::render(&c);
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}
