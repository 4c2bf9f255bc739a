//! `mols`: build squares from additive maps over small finite fields,
//! transform them with circuit-style operations, verify orthogonality and
//! unbiasedness, and reproduce the bundled worked examples.
//!
//! Exit codes: 0 success / verification passed, 1 verification failed,
//! 2 usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mols_core::curves::{desarguesian_bundle, scalar_curve, Curve};
use mols_core::field::Field;
use mols_core::latin::{
    collisions, is_complete_mols, minisquare, minisquare_commutative, nonstandard_ls, standard_ls,
    LatinSquare,
};
use mols_core::matrix::Mat;
use mols_core::monomials::MonomialError;
use mols_core::numeric::numeric_unbiasedness;
use mols_core::transforms::{
    cnot_bundle_report, cnot_on_curve, cnot_parametric, local_on_curve, local_perms,
    mixed_sf_breaks_bundle, orbit, perms_nonstandard_to_standard, perms_standard_to_standard,
    perms_to_original, CnotOp, LocalKind, LocalOp, MixedAssignment,
};

mod reproduce;

#[derive(Parser)]
#[command(name = "mols", version, about = "Orthogonal Latin squares from additive maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Squares,
    Perms,
    Report,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the field tables a given (p, n) resolves to.
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Modulus coefficients c0,c1,...,cn (constant term first).
        #[arg(long, value_delimiter = ',')]
        poly: Option<Vec<u64>>,
    },
    /// Emit Latin squares for a curve, a whole bundle, or an adjacency file.
    Generate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Bundle name; only "desarguesian" is defined.
        #[arg(long)]
        bundle: Option<String>,
        /// Scalar curve "lambda=K" for f(α) = σ^K·α.
        #[arg(long)]
        curve: Option<String>,
        /// JSON file holding an adjacency matrix or {"gamma": ..., "phi": ...}.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply a controlled-add or local operation to a curve from a file.
    Transform {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Controlled add "P,Q,M" (1-based control P, target Q, multiplier M).
        #[arg(long)]
        cnot: Option<String>,
        /// Uniform local operation "S:k1,...,kn" or "F:k1,...,kn".
        #[arg(long)]
        local: Option<String>,
        /// Input adjacency JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "squares")]
        emit: Emit,
    },
    /// Check orthogonality, completeness, unbiasedness, or the bundled
    /// non-commutative fixture.
    Verify {
        /// Two or more square JSON files to check pairwise.
        #[arg(long, num_args = 2..)]
        orthogonal: Option<Vec<PathBuf>>,
        /// Directory of square JSON files forming one set.
        #[arg(long)]
        complete: Option<PathBuf>,
        /// Numerically verify the unbiased bases of the (p, n) bundle.
        #[arg(long)]
        mub: bool,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        /// Run the commutativity test on the embedded 9×9 counterexample.
        #[arg(long)]
        hall_fixture: bool,
    },
    /// Condense an adjacency file to its n×n minisquare.
    Minisquare {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Iterate a scalar curve under self-composition and report the cycle.
    Orbit {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Seed curve "lambda=K".
        #[arg(long)]
        seed: String,
    },
    /// Recompute a bundled worked example and compare against its fixture.
    Reproduce {
        #[arg(value_parser = ["a1", "a2", "hall"])]
        target: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Field { p, n, poly } => cmd_field(p, n, poly.as_deref()),
        Cmd::Generate { p, n, bundle, curve, gamma, format } => {
            cmd_generate(p, n, bundle, curve, gamma, format)
        }
        Cmd::Transform { p, n, cnot, local, input, emit } => {
            cmd_transform(p, n, cnot, local, &input, emit)
        }
        Cmd::Verify { orthogonal, complete, mub, p, n, hall_fixture } => {
            cmd_verify(orthogonal, complete, mub, p, n, hall_fixture)
        }
        Cmd::Minisquare { p, n, gamma, format } => cmd_minisquare(p, n, &gamma, format),
        Cmd::Orbit { p, n, seed } => cmd_orbit(p, n, &seed),
        Cmd::Reproduce { target } => match target.as_str() {
            "a1" => reproduce::a1(),
            "a2" => reproduce::a2(),
            _ => reproduce::hall(),
        },
    }
}

fn cmd_field(p: u64, n: usize, poly: Option<&[u64]>) -> Result<u8> {
    let field = Field::build(p, n, poly)?;
    print_json(&field.description())?;
    Ok(0)
}

fn cmd_generate(
    p: u64,
    n: usize,
    bundle: Option<String>,
    curve: Option<String>,
    gamma: Option<PathBuf>,
    format: Format,
) -> Result<u8> {
    let given = bundle.is_some() as u8 + curve.is_some() as u8 + gamma.is_some() as u8;
    if given != 1 {
        bail!("exactly one of --bundle, --curve, --gamma is required");
    }
    let field = Field::build(p, n, None)?;

    let mut squares = Vec::new();
    if let Some(name) = bundle {
        if name != "desarguesian" {
            bail!("unknown bundle {name:?}; only \"desarguesian\" is defined");
        }
        for (e, cv) in desarguesian_bundle(&field).iter().enumerate() {
            let sq = standard_ls(&field, cv)
                .map_err(|err| anyhow!("bundle member lambda={}: {err}", e + 1))?;
            squares.push(sq.with_provenance(serde_json::json!({ "lambda": e + 1 })));
        }
    } else if let Some(spec) = curve {
        let e = parse_lambda(&spec)?;
        let cv = scalar_curve(&field, e);
        let sq = standard_ls(&field, &cv).map_err(|err| anyhow!("curve {spec:?}: {err}"))?;
        squares.push(sq.with_provenance(serde_json::json!({ "lambda": e })));
    } else if let Some(path) = gamma {
        let cv = load_curve(&field, &path)?;
        let sq = standard_ls(&field, &cv)
            .map_err(|err| anyhow!("{}: {err}", path.display()))?;
        squares.push(sq.with_provenance(serde_json::json!({ "gamma": cv.gamma.to_rows() })));
    }

    match (format, squares.len()) {
        (Format::Text, _) => {
            for (i, sq) in squares.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print_grid(&sq.grid);
            }
        }
        (Format::Json, 1) => print_json(&squares[0])?,
        (Format::Json, _) => print_json(&squares)?,
    }
    Ok(0)
}

fn cmd_transform(
    p: u64,
    n: usize,
    cnot: Option<String>,
    local: Option<String>,
    input: &Path,
    emit: Emit,
) -> Result<u8> {
    if cnot.is_some() == local.is_some() {
        bail!("exactly one of --cnot, --local is required");
    }
    let field = Field::build(p, n, None)?;
    let curve = load_curve(&field, input)?;

    if let Some(spec) = cnot {
        let op = parse_cnot(&spec)?;
        op.validate(&field).map_err(|err| anyhow!("--cnot {spec:?}: {err}"))?;
        match emit {
            Emit::Squares => {
                let tilde = nonstandard_ls(&field, &cnot_parametric(&field, &curve, &op))
                    .map_err(|err| anyhow!("transformed square: {err}"))?;
                print_grid(&tilde.grid);
                let image = cnot_on_curve(&field, &curve, &op);
                let standard = standard_ls(&field, &image)
                    .map_err(|err| anyhow!("transformed square: {err}"))?;
                println!();
                print_grid(&standard.grid);
            }
            Emit::Perms => {
                #[derive(Serialize)]
                struct Triples {
                    nonstandard_to_standard: mols_core::latin::PermutationTriple,
                    to_original: mols_core::latin::PermutationTriple,
                    standard_to_standard: mols_core::latin::PermutationTriple,
                }
                print_json(&Triples {
                    nonstandard_to_standard: perms_nonstandard_to_standard(&field, &op),
                    to_original: perms_to_original(&field, &op),
                    standard_to_standard: perms_standard_to_standard(&field, &op),
                })?;
            }
            Emit::Report => {
                let report = cnot_bundle_report(&field, &desarguesian_bundle(&field), &op)
                    .map_err(|err| anyhow!("bundle report: {err}"))?;
                print_json(&report)?;
                if !report.preserved {
                    return Ok(1);
                }
            }
        }
    } else if let Some(spec) = local {
        let op = parse_local(&spec)?;
        op.validate(&field).map_err(|err| anyhow!("--local {spec:?}: {err}"))?;
        match emit {
            Emit::Squares => {
                let pc = local_on_curve(&field, &curve, &op);
                let tilde = nonstandard_ls(&field, &pc)
                    .map_err(|err| anyhow!("transformed square: {err}"))?;
                print_grid(&tilde.grid);
                let explicit = mols_core::curves::parametric_to_explicit(&field, &pc)
                    .map_err(|err| anyhow!("transformed square: {err}"))?;
                let standard = standard_ls(&field, &explicit)
                    .map_err(|err| anyhow!("transformed square: {err}"))?;
                println!();
                print_grid(&standard.grid);
            }
            Emit::Perms => {
                #[derive(Serialize)]
                struct Triples {
                    to_original: mols_core::latin::PermutationTriple,
                }
                print_json(&Triples { to_original: local_perms(&field, &op) })?;
            }
            Emit::Report => {
                let assignment =
                    MixedAssignment { kinds: vec![op.kind; field.n()], k: op.k.clone() };
                let report =
                    mixed_sf_breaks_bundle(&field, &desarguesian_bundle(&field), &assignment)
                        .map_err(|err| anyhow!("bundle report: {err}"))?;
                print_json(&report)?;
                if !report.preserved {
                    return Ok(1);
                }
            }
        }
    }
    Ok(0)
}

fn cmd_verify(
    orthogonal: Option<Vec<PathBuf>>,
    complete: Option<PathBuf>,
    mub: bool,
    p: Option<u64>,
    n: Option<usize>,
    hall_fixture: bool,
) -> Result<u8> {
    let modes =
        orthogonal.is_some() as u8 + complete.is_some() as u8 + mub as u8 + hall_fixture as u8;
    if modes != 1 {
        bail!("exactly one of --orthogonal, --complete, --mub, --hall-fixture is required");
    }

    if let Some(files) = orthogonal {
        let squares: Vec<(String, LatinSquare)> = files
            .iter()
            .map(|f| Ok((f.display().to_string(), load_square(f)?)))
            .collect::<Result<_>>()?;
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                let (na, a) = &squares[i];
                let (nb, b) = &squares[j];
                if a.d != b.d {
                    bail!("{na} and {nb} have different orders");
                }
                let cs = collisions(a, b);
                if !cs.is_empty() {
                    println!("not orthogonal: {na} vs {nb}");
                    eprintln!("pair_a,pair_b,count");
                    for (x, y, m) in cs {
                        eprintln!("{x},{y},{m}");
                    }
                    return Ok(1);
                }
            }
        }
        println!("orthogonal: {} squares, {} pairs", squares.len(), pairs(squares.len()));
        return Ok(0);
    }

    if let Some(dir) = complete {
        let squares = load_square_dir(&dir)?;
        if squares.is_empty() {
            bail!("{}: no square JSON files found", dir.display());
        }
        let d = squares[0].d;
        if squares.len() != d - 1 {
            println!("incomplete: {} squares, need {} at d={}", squares.len(), d - 1, d);
            return Ok(1);
        }
        match is_complete_mols(&squares) {
            Ok(true) => {
                println!("complete: d={d}, {} squares", squares.len());
                return Ok(0);
            }
            Ok(false) => {
                println!("incomplete: a pair fails orthogonality at d={d}");
                return Ok(1);
            }
            Err(err) => bail!("{err}"),
        }
    }

    if mub {
        let (p, n) = match (p, n) {
            (Some(p), Some(n)) => (p, n),
            _ => bail!("--mub requires --p and --n"),
        };
        let field = Field::build(p, n, None)?;
        let report = numeric_unbiasedness(&field, &desarguesian_bundle(&field), 1e-9)
            .map_err(|err| anyhow!("{err}"))?;
        print_json(&report)?;
        return Ok(if report.passed { 0 } else { 1 });
    }

    // --hall-fixture: run the commutativity tests on the embedded example.
    let fx = mols_core::fixtures::hall_plane();
    let field = fx.field.build()?;
    let curve = mols_core::curves::curve_from_phi(&field, &fx.phi)
        .map_err(|err| anyhow!("fixture curve: {err}"))?;
    let ms = minisquare(&field, &curve);
    let trace_commutes = minisquare_commutative(&field, &ms);
    let set_commutes = !matches!(
        mols_core::monomials::curve_commuting_set(&field, &curve),
        Err(MonomialError::NotCommutative)
    );
    if trace_commutes != set_commutes {
        bail!("minisquare test and monomial test disagree on the fixture");
    }
    if trace_commutes {
        println!("commutative");
        Ok(0)
    } else {
        println!("not commutative");
        Ok(1)
    }
}

fn cmd_minisquare(p: u64, n: usize, gamma: &Path, format: Format) -> Result<u8> {
    let field = Field::build(p, n, None)?;
    let curve = load_curve(&field, gamma)?;
    let ms = minisquare(&field, &curve);
    let commutative = minisquare_commutative(&field, &ms);
    match format {
        Format::Text => {
            print_grid(&ms.entries);
            eprintln!("commutative: {commutative}");
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                entries: Vec<Vec<usize>>,
                theta_exponents: Vec<usize>,
                scaled_theta_exponents: Vec<usize>,
                commutative: bool,
            }
            print_json(&Out {
                entries: ms.entries,
                theta_exponents: ms.theta_exponents,
                scaled_theta_exponents: ms.scaled_theta_exponents,
                commutative,
            })?;
        }
    }
    Ok(0)
}

fn cmd_orbit(p: u64, n: usize, seed: &str) -> Result<u8> {
    let field = Field::build(p, n, None)?;
    let e = parse_lambda(seed)?;
    let steps = orbit(&field, &scalar_curve(&field, e))
        .map_err(|err| anyhow!("--seed {seed:?}: {err}"))?;
    #[derive(Serialize)]
    struct Out {
        length: usize,
        row_relabeling: Vec<usize>,
        gammas: Vec<Vec<Vec<u64>>>,
    }
    print_json(&Out {
        length: steps.len(),
        row_relabeling: steps[0].row_relabeling.clone(),
        gammas: steps.iter().map(|s| s.curve.gamma.to_rows()).collect(),
    })?;
    Ok(0)
}

fn pairs(k: usize) -> usize {
    k * (k - 1) / 2
}

fn parse_lambda(spec: &str) -> Result<usize> {
    let rest = spec
        .strip_prefix("lambda=")
        .ok_or_else(|| anyhow!("curve spec {spec:?} must look like \"lambda=K\""))?;
    let e: usize = rest.parse().with_context(|| format!("bad exponent in {spec:?}"))?;
    if e == 0 {
        bail!("lambda exponent must be ≥ 1 (σ^0 is written as lambda=d−1)");
    }
    Ok(e)
}

fn parse_cnot(spec: &str) -> Result<CnotOp> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        bail!("--cnot takes \"P,Q,M\"");
    }
    let control: usize = parts[0].parse().with_context(|| format!("bad control in {spec:?}"))?;
    let target: usize = parts[1].parse().with_context(|| format!("bad target in {spec:?}"))?;
    let m: u64 = parts[2].parse().with_context(|| format!("bad multiplier in {spec:?}"))?;
    Ok(CnotOp::new(control, target, m))
}

fn parse_local(spec: &str) -> Result<LocalOp> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("--local takes \"S:k1,...,kn\" or \"F:k1,...,kn\""))?;
    let kind = match kind {
        "S" => LocalKind::S,
        "F" => LocalKind::F,
        other => bail!("unknown local kind {other:?}; use S or F"),
    };
    let k: Vec<u64> = rest
        .split(',')
        .map(|t| t.parse::<u64>().with_context(|| format!("bad parameter in {spec:?}")))
        .collect::<Result<_>>()?;
    Ok(LocalOp::new(kind, k))
}

/// Reads an adjacency file: either a bare matrix `[[...], ...]` or an object
/// `{"gamma": [[...], ...], "phi": [...]}`.
fn load_curve(field: &Field, path: &Path) -> Result<Curve> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let rows_value = match &value {
        serde_json::Value::Array(_) => value.clone(),
        serde_json::Value::Object(map) => map
            .get("gamma")
            .cloned()
            .ok_or_else(|| anyhow!("{}: missing \"gamma\" member", path.display()))?,
        _ => bail!("{}: expected a matrix or an object", path.display()),
    };
    let rows: Vec<Vec<u64>> = serde_json::from_value(rows_value)
        .with_context(|| format!("{}: bad matrix rows", path.display()))?;
    let n = field.n();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        bail!("{}: adjacency must be {n}×{n} for this field", path.display());
    }
    Ok(Curve::new(Mat::from_rows(field.p(), &rows)))
}

fn load_square(path: &Path) -> Result<LatinSquare> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let sq: LatinSquare =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if !sq.is_latin() {
        bail!("{}: grid is not a Latin square", path.display());
    }
    Ok(sq)
}

/// Loads every `.json` file of a directory (sorted by name); each file may
/// hold one square or an array of squares.
fn load_square_dir(dir: &Path) -> Result<Vec<LatinSquare>> {
    let mut names: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    let mut out = Vec::new();
    for path in names {
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let parsed: Result<Vec<LatinSquare>, _> = serde_json::from_str(&text);
        let batch = match parsed {
            Ok(list) => list,
            Err(_) => vec![serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?],
        };
        for sq in batch {
            if !sq.is_latin() {
                bail!("{}: grid is not a Latin square", path.display());
            }
            out.push(sq);
        }
    }
    Ok(out)
}

fn print_grid(grid: &[Vec<usize>]) {
    for row in grid {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        println!("{}", line.join(" "));
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
