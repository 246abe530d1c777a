use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sasaki::brieskorn::{
    batch_index_census, fano_index, fano_index_integral, s3_join, BrieskornError, ExponentVector,
};
use sasaki::circle_bundle::{
    ab_basis, blowup_bundle, hirzebruch_bundle, lerman_count, wang_ziller, BundleError,
};
use sasaki::exact_lattice::IntVec;
use sasaki::sasaki_join::{self, eta_einstein_join, join, JoinError, SasakiDescriptor};
use sasaki::smale_barden::{
    admits_toric_sasakian, classify, BardenInvariant, BardenName, ClassifyError, FinAbGroup,
    Manifold5,
};
use sasaki::sweep::{sweep, GridSpec, Range, SweepError, DEFAULT_CELL_CAP};
use sasaki::toric_surface::{is_ample, signature, Fan2D, ToricError, ToricSurface};

/// File name looked up under `$SASAKI_FIXTURES` when `census` gets no `--file`.
const FIXTURE_FILE: &str = "s5_exponents.txt";

#[derive(Parser)]
#[command(name = "sasaki", version, about = "Exact invariants of Sasakian joins, links and circle bundles")]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smale–Barden name of a simply connected 5-manifold, or the invariants of a name.
    Classify(ClassifyArgs),
    /// Join two Sasakian descriptors.
    Join(JoinArgs),
    /// Fano index of a Brieskorn–Pham link and its join with S3.
    Brieskorn(BrieskornArgs),
    /// Histogram of Fano indices over an exponent file.
    Census(CensusArgs),
    /// Wang–Ziller join of two odd spheres.
    WangZiller(WangZillerArgs),
    /// Circle bundle over a Hirzebruch surface.
    Hirzebruch(HirzebruchArgs),
    /// Circle bundle over a blown-up Hirzebruch surface.
    BlowupBundle(BlowupArgs),
    /// Inspect a 2D fan: self-intersections, intersection form, ampleness.
    Fan(FanArgs),
    /// Closed form against lattice pipeline over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Rank of H2.
    #[arg(long, required_unless_present = "name")]
    rank: Option<u32>,
    /// Barden invariant: a non-negative integer or "inf".
    #[arg(long, required_unless_present = "name")]
    barden: Option<BardenInvariant>,
    /// Orders of cyclic torsion summands of H2, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "name")]
    torsion: Vec<u64>,
    /// Parse a name such as "X_1#M_12#2(S2xS3)" instead.
    #[arg(long, conflicts_with_all = ["rank", "barden"])]
    name: Option<String>,
}

#[derive(Args)]
struct JoinArgs {
    /// Preset (S1, S3, S5, N3, ...), "brieskorn:a,b,c,d:order", @file.json or inline JSON.
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, default_value_t = 1, conflicts_with = "eta_einstein")]
    k1: u64,
    #[arg(long, default_value_t = 1, conflicts_with = "eta_einstein")]
    k2: u64,
    /// Join at the relative indices and carry the eta-Einstein structure.
    #[arg(long)]
    eta_einstein: bool,
}

#[derive(Args)]
struct BrieskornArgs {
    /// Four exponents, e.g. 2,3,7,35.
    #[arg(long)]
    exponents: ExponentVector,
    /// Order of the Sasakian structure on the link (caller supplied).
    #[arg(long, default_value_t = 1)]
    order: u64,
}

#[derive(Args)]
struct CensusArgs {
    /// Exponent file; defaults to $SASAKI_FIXTURES/s5_exponents.txt.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct WangZillerArgs {
    #[arg(long)]
    p1: u32,
    #[arg(long)]
    p2: u32,
    #[arg(long)]
    k1: u64,
    #[arg(long)]
    k2: u64,
}

#[derive(Args)]
struct HirzebruchArgs {
    #[arg(long, allow_negative_numbers = true)]
    l1: i64,
    #[arg(long, allow_negative_numbers = true)]
    l2: i64,
    #[arg(long)]
    n: u32,
    /// Also report the (a1, a2) basis with this m and the structure count.
    #[arg(long)]
    m: Option<i64>,
}

#[derive(Args)]
struct BlowupArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: usize,
    #[arg(long, allow_negative_numbers = true)]
    l2: i64,
}

#[derive(Args)]
struct FanArgs {
    /// Start from the Hirzebruch fan S_n.
    #[arg(long, conflicts_with_all = ["rays", "fan_json"], required_unless_present_any = ["rays", "fan_json"])]
    hirzebruch: Option<u32>,
    /// Rays as "x,y;x,y;...", counterclockwise.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "fan_json")]
    rays: Option<String>,
    /// Fan JSON file {"rays": [[x,y], ...]}.
    #[arg(long)]
    fan_json: Option<PathBuf>,
    /// Blow up these corners in turn (cone between ray i and ray i+1).
    #[arg(long, value_delimiter = ',')]
    corner: Vec<usize>,
    /// Blow up k times at the fixed points of S_n (needs --hirzebruch).
    #[arg(long, requires = "hirzebruch", conflicts_with = "corner")]
    blow_ups: Option<usize>,
    /// Class on the ray basis to test for ampleness.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "kahler")]
    class: Vec<i64>,
    /// Class l1*C + l2*F - l3*E1 - ... to test (needs --hirzebruch).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "hirzebruch")]
    kahler: Vec<i64>,
}

#[derive(Args)]
struct SweepArgs {
    /// hirzebruch, wang-ziller or blowup.
    #[arg(long, required_unless_present = "grid", value_parser = ["hirzebruch", "wang-ziller", "blowup"])]
    kind: Option<String>,
    /// Grid JSON file instead of range flags.
    #[arg(long, conflicts_with = "kind")]
    grid: Option<PathBuf>,
    /// Ranges as "lo..hi" or a single value.
    #[arg(long, allow_hyphen_values = true)]
    l1: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    l2: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<Range>,
    #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
    cap: u64,
    /// Only print the verdict, cell count and failures.
    #[arg(long)]
    summary: bool,
}

struct Failure {
    kind: String,
    message: String,
    usage: bool,
}

impl Failure {
    fn domain(kind: &str, message: impl ToString) -> Self {
        Failure {
            kind: kind.to_string(),
            message: message.to_string(),
            usage: false,
        }
    }

    fn usage(message: impl ToString) -> Self {
        Failure {
            kind: "Usage".to_string(),
            message: message.to_string(),
            usage: true,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::domain(e.kind(), e)
            }
        }
    )*};
}

domain_from!(ClassifyError, JoinError, BrieskornError, BundleError, ToricError, SweepError);

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::domain("Serialization", e))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::domain("Io", format!("{}: {e}", path.display())))
}

fn run_classify(a: ClassifyArgs) -> Result<Value, Failure> {
    let m = match &a.name {
        Some(name) => name.parse::<BardenName>()?.to_manifold()?,
        None => {
            let rank = a.rank.ok_or_else(|| Failure::usage("--rank is required"))?;
            let barden = a.barden.ok_or_else(|| Failure::usage("--barden is required"))?;
            Manifold5::new(FinAbGroup::from_cyclic_orders(rank, &a.torsion)?, barden)?
        }
    };
    let name = classify(&m)?;
    Ok(json!({
        "name": name.to_string(),
        "alias": name.alias(),
        "manifold": to_json(&m)?,
        "h2": m.h2().to_string(),
        "spin": m.barden().is_spin(),
        "toric": to_json(&admits_toric_sasakian(&m))?,
    }))
}

fn parse_descriptor(s: &str) -> Result<SasakiDescriptor, Failure> {
    let from_json = |text: &str| {
        serde_json::from_str::<SasakiDescriptor>(text)
            .map_err(|e| Failure::domain("InvalidDescriptor", e))
    };
    if let Some(path) = s.strip_prefix('@') {
        return from_json(&read_text(Path::new(path))?);
    }
    if s.trim_start().starts_with('{') {
        return from_json(s);
    }
    if let Some(rest) = s.strip_prefix("brieskorn:") {
        let (exps, order) = rest
            .rsplit_once(':')
            .ok_or_else(|| Failure::usage("brieskorn descriptor needs \"a,b,c,d:order\""))?;
        let a: ExponentVector = exps.parse().map_err(Failure::usage)?;
        let order: u64 = order
            .parse()
            .map_err(|_| Failure::usage(format!("bad order {order:?}")))?;
        return Ok(sasaki_join::brieskorn_link(&a, order)?);
    }
    sasaki_join::preset(s).ok_or_else(|| {
        Failure::usage(format!(
            "unknown descriptor {s:?}; use S1, S3, S5, ..., N3, N5, ..., brieskorn:a,b,c,d:order, @file.json or JSON"
        ))
    })
}

fn run_join(a: JoinArgs) -> Result<Value, Failure> {
    let left = parse_descriptor(&a.left)?;
    let right = parse_descriptor(&a.right)?;
    let r = if a.eta_einstein {
        eta_einstein_join(&left, &right)?
    } else {
        join(&left, &right, a.k1, a.k2)?
    };
    let mut v = to_json(&r)?;
    v["dimension"] = json!(r.descriptor.dimension());
    Ok(v)
}

fn run_brieskorn(a: BrieskornArgs) -> Result<Value, Failure> {
    let index = fano_index(&a.exponents);
    let integral = fano_index_integral(&a.exponents);
    let index_json = to_json_big(&index);
    let mut out = json!({
        "exponents": a.exponents.exponents(),
        "I": index_json,
        "I_integral": to_json_big(&integral),
        "non_fano": index <= 0.into(),
        "join": Value::Null,
    });
    if index > 0.into() {
        let r = s3_join(&a.exponents, a.order)?;
        out["join"] = json!({
            "l": [to_json_big(&r.weights.0), to_json_big(&r.weights.1)],
            "order_v2": r.order_v2,
            "orbifold_only": r.orbifold_only,
            "fibre": r.fibre,
            "base": r.base,
            "h4_torsion": to_json_big(&r.h4_torsion),
            "homeo": if r.homeo_s2xs5 { Value::from("S2xS5") } else { Value::Null },
        });
    }
    Ok(out)
}

fn to_json_big(x: &num_bigint::BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

fn run_census(a: CensusArgs) -> Result<Value, Failure> {
    let path = match a.file {
        Some(p) => p,
        None => {
            let dir = std::env::var_os("SASAKI_FIXTURES").ok_or_else(|| {
                Failure::domain(
                    "FixtureMissing",
                    "no --file given and SASAKI_FIXTURES is not set",
                )
            })?;
            PathBuf::from(dir).join(FIXTURE_FILE)
        }
    };
    let file = fs::File::open(&path)
        .map_err(|e| Failure::domain("Io", format!("{}: {e}", path.display())))?;
    let census = batch_index_census(BufReader::new(file))?;
    to_json(&census)
}

fn run_hirzebruch(a: HirzebruchArgs) -> Result<Value, Failure> {
    let r = hirzebruch_bundle(a.l1, a.l2, a.n)?;
    let mut v = to_json(&r)?;
    if let Some(m) = a.m {
        let ab = ab_basis(a.l1, a.l2, m);
        v["ab_basis"] = to_json(&ab)?;
        if ab.a1 > 0 && ab.a2 > 0 {
            if let Ok(c) = lerman_count(ab.a1 as u64, ab.a2 as u64) {
                v["structures"] = to_json(&c)?;
            }
        }
    }
    Ok(v)
}

fn parse_rays(s: &str) -> Result<Vec<[i64; 2]>, Failure> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|pair| {
            let xs: Vec<&str> = pair.split(',').map(str::trim).collect();
            match xs.as_slice() {
                [x, y] => match (x.parse(), y.parse()) {
                    (Ok(x), Ok(y)) => Ok([x, y]),
                    _ => Err(Failure::usage(format!("bad ray {pair:?}"))),
                },
                _ => Err(Failure::usage(format!("bad ray {pair:?}"))),
            }
        })
        .collect()
}

fn run_fan(a: FanArgs) -> Result<Value, Failure> {
    let mut out = serde_json::Map::new();
    let (fan, surface) = if let Some(n) = a.hirzebruch {
        let mut s = match a.blow_ups {
            Some(k) => ToricSurface::blown_up_hirzebruch(n, k),
            None => ToricSurface::hirzebruch(n),
        };
        for &c in &a.corner {
            s = s.blow_up(c)?;
        }
        (s.fan().clone(), Some(s))
    } else {
        if a.blow_ups.is_some() {
            return Err(Failure::usage("--blow-ups needs --hirzebruch"));
        }
        let mut fan = match (&a.rays, &a.fan_json) {
            (Some(r), _) => Fan2D::new(parse_rays(r)?)?,
            (None, Some(p)) => serde_json::from_str::<Fan2D>(&read_text(p)?)
                .map_err(|e| Failure::domain("InvalidFan", e))?,
            (None, None) => return Err(Failure::usage("one of --hirzebruch, --rays, --fan-json is required")),
        };
        for &c in &a.corner {
            fan = fan.blow_up(c)?;
        }
        (fan, None)
    };

    out.insert("rays".into(), json!(fan.rays()));
    out.insert("self_intersections".into(), json!(fan.self_intersections()));
    out.insert("picard_rank".into(), json!(fan.picard_rank()));
    out.insert(
        "ray_intersection_matrix".into(),
        matrix_json(&fan.ray_intersection_matrix()),
    );
    let anti = fan.anticanonical();
    out.insert("anticanonical".into(), ints_json(anti.entries()));

    let class = if let Some(s) = &surface {
        let gram = s.intersection_matrix();
        let (p, q, z) = signature(&gram);
        out.insert("basis".into(), json!(s.basis_labels()));
        out.insert("intersection_matrix".into(), matrix_json(&gram));
        out.insert("signature".into(), json!([p, q, z]));
        if let Some(named) = s.anticanonical().named {
            out.insert("anticanonical_named".into(), ints_json(named.entries()));
        }
        if a.kahler.is_empty() {
            None
        } else {
            Some(s.kahler_class(&a.kahler)?)
        }
    } else {
        None
    };
    let class = match class {
        Some(c) => Some(c),
        None if !a.class.is_empty() => Some(
            IntVec::from_i64(&a.class, "D").map_err(|e| Failure::domain(e.kind(), e))?,
        ),
        None => None,
    };
    if let Some(c) = class {
        let cert = is_ample(&fan, &c)?;
        out.insert("class".into(), ints_json(c.entries()));
        out.insert("ample".into(), to_json(&cert)?);
    }
    Ok(Value::Object(out))
}

fn ints_json(xs: &[num_bigint::BigInt]) -> Value {
    Value::Array(xs.iter().map(to_json_big).collect())
}

fn matrix_json(m: &sasaki::exact_lattice::IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| ints_json(m.row(r))).collect())
}

fn run_sweep(a: SweepArgs) -> Result<Value, Failure> {
    let grid = if let Some(path) = &a.grid {
        serde_json::from_str::<GridSpec>(&read_text(path)?)
            .map_err(|e| Failure::usage(format!("bad grid file: {e}")))?
    } else {
        let kind = a.kind.as_deref().unwrap_or_default();
        let reject = |name: &str, present: bool| {
            if present {
                Err(Failure::usage(format!("--{name} does not apply to --kind {kind}")))
            } else {
                Ok(())
            }
        };
        match kind {
            "hirzebruch" => {
                reject("k", a.k.is_some())?;
                reject("p", a.p.is_some())?;
                GridSpec::Hirzebruch {
                    l1: a.l1.unwrap_or(Range::new(1, 20)),
                    l2: a.l2.unwrap_or(Range::new(1, 20)),
                    n: a.n.unwrap_or(Range::new(0, 10)),
                }
            }
            "wang-ziller" => {
                reject("l1", a.l1.is_some())?;
                reject("l2", a.l2.is_some())?;
                reject("n", a.n.is_some())?;
                GridSpec::WangZiller {
                    p: a.p.unwrap_or(Range::new(1, 3)),
                    k: a.k.unwrap_or(Range::new(1, 10)),
                }
            }
            _ => {
                reject("l1", a.l1.is_some())?;
                reject("p", a.p.is_some())?;
                GridSpec::Blowup {
                    n: a.n.unwrap_or(Range::new(0, 4)),
                    k: a.k.unwrap_or(Range::new(0, 4)),
                    l2: a.l2.unwrap_or(Range::new(1, 8)),
                }
            }
        }
    };
    let report = sweep(&grid, a.cap)?;
    let mut v = to_json(&report)?;
    v["grid"] = to_json(&grid)?;
    v["total"] = json!(report.len());
    if a.summary {
        if let Some(obj) = v.as_object_mut() {
            obj.remove("cells");
        }
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Classify(a) => run_classify(a),
        Command::Join(a) => run_join(a),
        Command::Brieskorn(a) => run_brieskorn(a),
        Command::Census(a) => run_census(a),
        Command::WangZiller(a) => to_json(&wang_ziller(a.p1, a.p2, a.k1, a.k2)?),
        Command::Hirzebruch(a) => run_hirzebruch(a),
        Command::BlowupBundle(a) => to_json(&blowup_bundle(a.n, a.k, a.l2)?),
        Command::Fan(a) => run_fan(a),
        Command::Sweep(a) => run_sweep(a),
    }
}

/// Writes to stdout; a closed pipe (`sasaki ... | head`) is not an error worth a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    match run(cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n";
            match out_path {
                Some(p) => {
                    if let Err(e) = fs::write(&p, text) {
                        let err = json!({"error": {"kind": "Io", "message": format!("{}: {e}", p.display())}});
                        emit(&format!("{err}\n"));
                        return ExitCode::from(1);
                    }
                }
                None => emit(&text),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let err = json!({"error": {"kind": f.kind, "message": f.message}});
            emit(&format!("{err}\n"));
            if f.usage {
                eprintln!("usage error: {}", f.message);
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
