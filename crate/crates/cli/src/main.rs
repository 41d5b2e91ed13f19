use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kmlat::coxeter::{GeneralizedCartanMatrix, RootVector, Sign, WeylGroup, DEFAULT_ELEMENT_CAP};
use kmlat::datum::{DatumSpec, KacMoodyRootDatum};
use kmlat::descent::{su3_involution_check, FormSpec, QuasiSplitForm, DEFAULT_CUTOFF};
use kmlat::field::GaloisField;
use kmlat::growth::{self, DEFAULT_DENOMINATOR_DEGREE, DEFAULT_DEPTH};
use kmlat::io::GcmSpec;
use kmlat::laurent::MatrixJson;
use kmlat::roots::{BalancedPair, Root, RootSystem, DEFAULT_HEIGHT_CAP, DEFAULT_RADIUS};
use kmlat::sl::{AffinePerm, TwinSl};
use kmlat::{presets, snf};

mod render;

#[derive(Debug, Parser)]
#[command(
    name = "kmlat",
    version,
    about = "Kac-Moody lattices, twin buildings and Galois descent"
)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks; echoed in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct MatrixSource {
    /// GCM or Coxeter matrix JSON file.
    #[arg(long, conflicts_with = "preset")]
    gcm: Option<PathBuf>,
    /// Named example: a2, a2tilde, dinf, pentagon, sl2, sl3, fuchsian:R.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Growth series and lattice verdict.
    Analyze {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        torus_rank: usize,
    },
    /// Real roots, prenilpotent pairs, intervals and balanced chamber pairs.
    Roots {
        #[command(flatten)]
        source: MatrixSource,
        /// Height cap for enumeration and intervals.
        #[arg(long, default_value_t = 3)]
        height: usize,
        /// Chamber search radius.
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
        /// First root of a pair query, as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true, requires = "beta")]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "alpha")]
        beta: Option<String>,
        /// Word `w` (comma-separated generator indices): report the root sets
        /// of the chamber pair `(c+, w c-)`.
        #[arg(long)]
        phi: Option<String>,
    },
    /// SL_n over F_q[t, t^-1]: factorizations, codistance and local checks.
    TwinSl {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        op: TwinOp,
        /// Input JSON: `{"entries": ...}` for bruhat/thickness, `{"g": ..., "h": ...}` for codist.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        /// Panel type for thickness.
        #[arg(long, default_value_t = 0)]
        panel: usize,
        /// Word for fixator, comma-separated generator indices.
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Quasi-split form report.
    Descend {
        #[arg(long, conflicts_with = "preset")]
        form: Option<PathBuf>,
        #[arg(long, requires = "q")]
        preset: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
        /// Also run the unitary involution check at the form's q.
        #[arg(long)]
        su3_check: bool,
    },
    /// Torus and center orders of a root datum.
    Datum {
        #[arg(long, conflicts_with_all = ["preset", "gcm"])]
        datum: Option<PathBuf>,
        #[arg(long)]
        gcm: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, value_enum, default_value_t = DatumKind::SimplyConnected)]
        kind: DatumKind,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TwinOp {
    Bruhat,
    Codist,
    Thickness,
    Refined,
    Fixator,
    Opposition,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DatumKind {
    SimplyConnected,
    Adjoint,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<kmlat::Error> for Failure {
    fn from(e: kmlat::Error) -> Self {
        Failure {
            code: if e.is_budget() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("reports serialize")
                );
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("kmlat: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

pub struct Report {
    json: Value,
    text: String,
}

fn budget() -> CliResult<usize> {
    match std::env::var("KMLAT_BUDGET") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(input_error(format!(
                "KMLAT_BUDGET must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(DEFAULT_ELEMENT_CAP),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_gcm(source: &MatrixSource) -> CliResult<GeneralizedCartanMatrix> {
    match (&source.gcm, &source.preset) {
        (Some(path), _) => {
            let spec: GcmSpec = read_json(path)?;
            spec.build()
                .map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        (None, Some(name)) => Ok(presets::gcm(name)?),
        (None, None) => Err(input_error("one of --gcm or --preset is required".into())),
    }
}

fn parse_ints(text: &str) -> CliResult<Vec<i64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| input_error(format!("bad integer {s:?} in {text:?}")))
        })
        .collect()
}

fn parse_word(text: &str) -> CliResult<Vec<usize>> {
    parse_ints(text)?
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| input_error(format!("bad generator {x}"))))
        .collect()
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Analyze {
            source,
            q,
            depth,
            torus_rank,
        } => analyze(source, *q, *depth, *torus_rank),
        Command::Roots {
            source,
            height,
            radius,
            alpha,
            beta,
            phi,
        } => roots(
            source,
            *height,
            *radius,
            alpha.as_deref().zip(beta.as_deref()),
            phi.as_deref(),
        ),
        Command::TwinSl {
            n,
            q,
            op,
            input,
            sign,
            panel,
            word,
            max_len,
            samples,
        } => {
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            twin_sl(
                cli.seed,
                *n,
                *q,
                *op,
                input.as_deref(),
                sign,
                *panel,
                word,
                *max_len,
                *samples,
            )
        }
        Command::Descend {
            form,
            preset,
            q,
            cutoff,
            su3_check,
        } => descend(
            cli.seed,
            form.as_deref(),
            preset.as_deref(),
            *q,
            *cutoff,
            *su3_check,
        ),
        Command::Datum {
            datum,
            gcm,
            preset,
            kind,
            q,
        } => datum_cmd(
            datum.as_deref(),
            gcm.as_deref(),
            preset.as_deref(),
            *kind,
            *q,
        ),
    }
}

fn gcm_json(gcm: &GeneralizedCartanMatrix) -> Value {
    serde_json::to_value(gcm).expect("GCM serializes")
}

fn analyze(source: &MatrixSource, q: u64, depth: usize, torus_rank: usize) -> CliResult<Report> {
    kmlat::field::prime_power(q)?;
    let gcm = load_gcm(source)?;
    let group = WeylGroup::new(gcm.clone()).with_cap(budget()?);
    let series = growth::growth_coeffs(&group, depth)?;
    let report = growth::lattice_report(&series, q, torus_rank);
    let rational = growth::rational_series(&series.coeffs, DEFAULT_DENOMINATOR_DEGREE);
    let partial_sums: Vec<String> = (0..series.coeffs.len())
        .map(|n| kmlat::io::rational_string(&growth::partial_sum(&series.coeffs[..=n], q)))
        .collect();
    let json = json!({
        "command": "analyze",
        "input": {"gcm": gcm_json(&gcm), "q": q, "depth": depth, "torus_rank": torus_rank},
        "matrix_hash": series.matrix_hash,
        "coxeter_matrix": gcm.coxeter_matrix(),
        "growth": series.coeffs,
        "rational_series": rational.as_ref().map(|r| r.to_string()),
        "partial_sums": partial_sums,
        "report": report,
    });
    let text = render::analyze(&gcm, &series.coeffs, rational.as_ref(), &report, q);
    Ok(Report { json, text })
}

fn root_json(group: &WeylGroup, r: &Root) -> Value {
    json!({
        "vector": r.vector(),
        "height": i64::try_from(r.height()).unwrap_or(i64::MAX),
        "reflection": group.format(r.reflection()),
    })
}

fn roots(
    source: &MatrixSource,
    height: usize,
    radius: usize,
    pair: Option<(&str, &str)>,
    phi: Option<&str>,
) -> CliResult<Report> {
    let gcm = load_gcm(source)?;
    let system = RootSystem::new(WeylGroup::new(gcm.clone()).with_cap(budget()?));
    let group = system.group();
    let positive = system.positive_roots(height)?;
    let mut json = json!({
        "command": "roots",
        "input": {"gcm": gcm_json(&gcm), "height": height, "radius": radius},
        "positive_roots": positive.iter().map(|r| root_json(group, r)).collect::<Vec<_>>(),
    });
    let mut text = render::roots(&gcm, group, &positive, height);
    if let Some((a, b)) = pair {
        let alpha = system.root(&RootVector::from_i64(&parse_ints(a)?))?;
        let beta = system.root(&RootVector::from_i64(&parse_ints(b)?))?;
        let pre = system.is_prenilpotent(&alpha, &beta, radius)?;
        let cap = DEFAULT_HEIGHT_CAP.min(height.max(4 * (height_of(&alpha) + height_of(&beta))));
        let mut query = json!({
            "alpha": root_json(group, &alpha),
            "beta": root_json(group, &beta),
            "prenilpotent": pre,
        });
        text.push_str(&format!(
            "pair {} {}: prenilpotent = {:?}\n",
            alpha.vector(),
            beta.vector(),
            pre
        ));
        if pre == kmlat::roots::Prenilpotence::Yes {
            let interval = system.interval(&alpha, &beta, cap, radius)?;
            let linear = system.linear_interval(&alpha, &beta, cap)?;
            query["interval"] = json!({
                "members": interval.members.iter().map(|r| root_json(group, r)).collect::<Vec<_>>(),
                "certified": interval.certified,
                "search_radius": interval.search_radius,
                "height_cap": cap,
            });
            query["linear_interval"] =
                Value::Array(linear.iter().map(|r| root_json(group, r)).collect());
            text.push_str(&render::interval(&interval, &linear));
        }
        json["input"]["alpha"] = json!(a);
        json["input"]["beta"] = json!(b);
        json["pair"] = query;
    }
    if let Some(word) = phi {
        let w = group.from_word(&parse_word(word)?)?;
        let balanced = BalancedPair::chambers(group, &w)?;
        let sets = system.phi_sets(&balanced)?;
        json["input"]["phi"] = json!(word);
        json["balanced_pair"] = json!({
            "w": group.format(&w),
            "length": w.length(),
            "unipotent": sets.unipotent,
            "levi": sets.levi,
        });
        text.push_str(&format!(
            "chambers (c+, w c-) with w = {}: #levi = {}, #unipotent = {}\n",
            group.format(&w),
            sets.levi.len(),
            sets.unipotent.len()
        ));
    }
    Ok(Report { json, text })
}

fn height_of(r: &Root) -> usize {
    usize::try_from(r.height().magnitude()).unwrap_or(usize::MAX)
}

#[derive(Debug, Default, serde::Deserialize)]
struct TwinInput {
    #[serde(default)]
    entries: Option<Vec<Vec<Vec<(i64, String)>>>>,
    #[serde(default)]
    g: Option<MatrixJson>,
    #[serde(default)]
    h: Option<MatrixJson>,
}

#[allow(clippy::too_many_arguments)]
fn twin_sl(
    seed: u64,
    n: usize,
    q: u64,
    op: TwinOp,
    input: Option<&Path>,
    sign: Sign,
    panel: usize,
    word: &str,
    max_len: usize,
    samples: usize,
) -> CliResult<Report> {
    let field = GaloisField::from_order(q)?;
    let twin = TwinSl::new(n, field.clone())?;
    let data: TwinInput = match input {
        Some(path) => read_json(path)?,
        None => TwinInput::default(),
    };
    let with_path = |e: kmlat::Error| -> Failure {
        let mut f = Failure::from(e);
        if let Some(p) = input {
            f.message = format!("{}: {}", p.display(), f.message);
        }
        f
    };
    let build = |m: &MatrixJson| m.build(twin.ring()).map_err(with_path);
    let main_matrix = match &data.entries {
        Some(e) => Some(build(&MatrixJson { entries: e.clone() })?),
        None => None,
    };
    let mut json = json!({
        "command": "twin-sl",
        "n": n,
        "q": q,
        "seed": seed,
        "field": field.spec(),
    });
    let perm_json = |w: &AffinePerm| -> CliResult<Value> {
        let word = twin.to_weyl(w)?;
        Ok(
            json!({"window": w.window(), "word": twin.weyl_group().format(&word), "length": w.length()}),
        )
    };
    let text;
    match op {
        TwinOp::Bruhat => {
            let m = main_matrix
                .ok_or_else(|| input_error("bruhat needs --in with \"entries\"".into()))?;
            let f = twin.bruhat_decompose(&m, sign).map_err(with_path)?;
            json["op"] = json!("bruhat");
            json["sign"] = json!(sign);
            json["input"] = json!(m.to_json());
            json["w"] = perm_json(&f.w)?;
            json["u"] = json!(f.u.to_json());
            json["b"] = json!(f.b.to_json());
            text = render::bruhat(&twin, &f);
        }
        TwinOp::Codist => {
            let g = data
                .g
                .as_ref()
                .map(build)
                .transpose()?
                .unwrap_or_else(|| twin.identity());
            let h = data
                .h
                .as_ref()
                .map(build)
                .transpose()?
                .unwrap_or_else(|| twin.identity());
            let w = twin.codistance(&g, &h).map_err(with_path)?;
            let back = twin.codistance_from_negative(&h, &g).map_err(with_path)?;
            json["op"] = json!("codist");
            json["input"] = json!({"g": g.to_json(), "h": h.to_json()});
            json["codistance"] = perm_json(&w)?;
            json["reverse_codistance"] = perm_json(&back)?;
            json["opposite"] = json!(w.length() == 0);
            text = format!(
                "codistance d*(gB+, hB-) = {} ({})\nreverse d*(hB-, gB+) = {} ({})\nopposite: {}\n",
                twin.weyl_group().format(&twin.to_weyl(&w)?),
                w,
                twin.weyl_group().format(&twin.to_weyl(&back)?),
                back,
                w.length() == 0
            );
        }
        TwinOp::Thickness => {
            let g = main_matrix.unwrap_or_else(|| twin.identity());
            let report = twin.thickness_at_panel(&g, panel).map_err(with_path)?;
            json["op"] = json!("thickness");
            json["input"] = json!({"entries": g.to_json().entries, "panel": panel});
            json["thickness"] = json!(report.thickness);
            json["chambers"] =
                Value::Array(report.chambers.iter().map(|c| json!(c.to_json())).collect());
            text = render::thickness(&report);
        }
        TwinOp::Refined => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let report = twin.verify_refined_bruhat(max_len, samples, &mut rng)?;
            json["op"] = json!("refined");
            json["report"] = json!(report);
            json["passed"] = json!(report.passed());
            text = render::refined(&report);
        }
        TwinOp::Fixator => {
            let w = twin.weyl_group().from_word(&parse_word(word)?)?;
            let fix = twin.fixator(&w)?;
            let expected = u64::from(twin.q() - 1).pow((n - 1) as u32)
                * u64::from(twin.q()).pow(w.length() as u32);
            json["op"] = json!("fixator");
            json["input"] = json!({"word": word});
            json["w"] = json!(twin.weyl_group().format(&w));
            json["order"] = json!(fix.len());
            json["expected"] = json!(expected);
            text = format!(
                "fixator of (c+, w c-) for w = {}: {} elements (T U_w predicts {})\n",
                twin.weyl_group().format(&w),
                fix.len(),
                expected
            );
        }
        TwinOp::Opposition => {
            let order = twin.opposite_stabilizer_order(budget()?)?;
            let expected = u64::from(twin.q() - 1).pow((n - 1) as u32);
            json["op"] = json!("opposition");
            json["order"] = json!(order);
            json["expected"] = json!(expected);
            text = format!("|B+ ∩ B-| = {order} (torus order {expected})\n");
        }
    }
    Ok(Report { json, text })
}

fn form_json(form: &QuasiSplitForm) -> Value {
    let labels = form.gcm().labels();
    let perm: serde_json::Map<String, Value> = form
        .automorphism()
        .perm()
        .iter()
        .enumerate()
        .map(|(s, &t)| (labels[s].clone(), json!(labels[t])))
        .collect();
    let s0: Vec<&String> = form
        .anisotropic_kernel()
        .iter()
        .map(|&s| &labels[s])
        .collect();
    json!({"gcm": gcm_json(form.gcm()), "perm": perm, "s0": s0, "q": form.q()})
}

fn descend(
    seed: u64,
    form_path: Option<&Path>,
    preset: Option<&str>,
    q: Option<u64>,
    cutoff: usize,
    su3: bool,
) -> CliResult<Report> {
    let form = match (form_path, preset) {
        (Some(path), _) => {
            let spec: FormSpec = read_json(path)?;
            spec.build().map_err(|e| {
                let mut f = Failure::from(e);
                f.message = format!("{}: {}", path.display(), f.message);
                f
            })?
        }
        (None, Some(name)) => presets::form(name, q.expect("clap enforces --q"))?,
        (None, None) => return Err(input_error("one of --form or --preset is required".into())),
    };
    let report = form.report(cutoff)?;
    let mut json = json!({
        "command": "descend",
        "input": form_json(&form),
        "cutoff": cutoff,
        "report": report,
    });
    let mut text = render::descend(&report);
    if su3 {
        let check = su3_involution_check(form.q(), seed)?;
        text.push_str(&render::su3(&check));
        json["seed"] = json!(seed);
        json["su3_check"] = json!(check);
    }
    Ok(Report { json, text })
}

fn datum_cmd(
    path: Option<&Path>,
    gcm_path: Option<&Path>,
    preset: Option<&str>,
    kind: DatumKind,
    q: u64,
) -> CliResult<Report> {
    kmlat::field::prime_power(q)?;
    let from_gcm = |gcm: &GeneralizedCartanMatrix| match kind {
        DatumKind::SimplyConnected => KacMoodyRootDatum::simply_connected(gcm),
        DatumKind::Adjoint => KacMoodyRootDatum::adjoint(gcm),
    };
    let datum = match (path, gcm_path, preset) {
        (Some(p), _, _) => {
            let spec: DatumSpec = read_json(p)?;
            spec.build()
                .map_err(|e| input_error(format!("{}: {e}", p.display())))?
        }
        (None, Some(p), _) => {
            let spec: GcmSpec = read_json(p)?;
            from_gcm(
                &spec
                    .build()
                    .map_err(|e| input_error(format!("{}: {e}", p.display())))?,
            )
        }
        (None, None, Some(name)) => match (name, kind) {
            ("sl2" | "sl3", _) => presets::datum(name)?,
            _ => from_gcm(&presets::gcm(name)?),
        },
        (None, None, None) => {
            return Err(input_error(
                "one of --datum, --gcm or --preset is required".into(),
            ))
        }
    };
    let rows: Vec<Vec<num_bigint::BigInt>> = datum
        .characters()
        .iter()
        .map(|v| v.iter().map(|&x| x.into()).collect())
        .collect();
    let factors: Vec<String> = snf::invariant_factors(&rows)
        .iter()
        .map(|d| d.to_string())
        .collect();
    let torus = datum.torus_order(q);
    let center = datum.center_order(q);
    let json = json!({
        "command": "datum",
        "input": {"datum": datum, "q": q},
        "invariant_factors": factors,
        "torus_order": torus.to_string(),
        "center_order": center.to_string(),
    });
    let text = format!(
        "lattice rank {}\ncharacter invariant factors: [{}]\ntorus order over F_{q}: {torus}\ncenter order over F_{q}: {center}\n",
        datum.lattice_rank(),
        factors.join(", "),
    );
    Ok(Report { json, text })
}
