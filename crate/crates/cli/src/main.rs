use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use squeezed::complex::{face_counts, fhg_vectors, sphere_facets};
use squeezed::hamiltonian::{build_circuit, verify_circuit};
use squeezed::polytope_file::{verify_polytope_text, PolytopeFile};
use squeezed::poset::{count_ideals, enumerate_ideals, OrderIdeal};
use squeezed::realization::{certified_facets, realize};

#[derive(Parser)]
#[command(
    name = "squeezed",
    version,
    about = "Squeezed 3-spheres: enumerate, realize, verify, circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every order ideal for a ground parameter n.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize S(I) as a convex 4-polytope with a certificate.
    Realize {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the JSON form instead of the text form.
        #[arg(long)]
        json: bool,
    },
    /// Check a polytope file with the independent checker.
    Verify {
        #[arg(long)]
        polytope: PathBuf,
    },
    /// Build and verify a Hamiltonian circuit in the dual graph of S(I).
    Hamilton {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Statistics and verdicts for every ideal up to max-n, as CSV.
    Census {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit statuses.
const OK: u8 = 0;
const VERIFICATION_FAILED: u8 = 1;
const USAGE: u8 = 2;
const INTERNAL: u8 = 3;

struct Failure(u8, String);

type Outcome = Result<(), Failure>;

fn usage(msg: impl ToString) -> Failure {
    Failure(USAGE, msg.to_string())
}

fn internal(msg: impl ToString) -> Failure {
    Failure(INTERNAL, msg.to_string())
}

fn parse_ideal(spec: &str) -> Result<OrderIdeal, Failure> {
    spec.parse()
        .map_err(|e| usage(format!("invalid ideal {spec:?}: {e}")))
}

/// Writes to the file, or to stdout when no file is given.
fn emit(out: Option<&Path>, content: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Summary lines go to stdout when the document went to a file, and to
/// stderr when the document itself is on stdout.
fn summary(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn enumerate(n: usize, out: Option<&Path>) -> Outcome {
    let ideals = enumerate_ideals(n).map_err(usage)?;
    let expected = count_ideals(n).map_err(usage)?;
    if ideals.len() as u64 != expected {
        return Err(internal(format!(
            "found {} ideals, expected {expected}",
            ideals.len()
        )));
    }
    let text: String = ideals
        .iter()
        .map(|i| format!("{}\n", i.to_text()))
        .collect();
    emit(out, &text)?;
    summary(out, &format!("{} ideals", ideals.len()));
    Ok(())
}

fn realize_cmd(spec: &str, out: Option<&Path>, json: bool) -> Outcome {
    let ideal = parse_ideal(spec)?;
    let (polytope, certificate) = realize(&ideal).map_err(internal)?;
    let file = PolytopeFile::from_realization(&polytope, &certificate).map_err(internal)?;
    let text = if json { file.to_json() } else { file.to_text() };
    let verdict = verify_polytope_text(&text);
    let faces = face_counts(&polytope.facets);
    emit(out, &text)?;
    summary(out, &format!("f-vector {}", tuple(&faces)));
    match verdict {
        Ok(_) if certified_facets(&certificate).ok() == Some(sphere_facets(&ideal)) => {
            summary(out, "certificate VALID");
            Ok(())
        }
        Ok(_) => Err(Failure(
            VERIFICATION_FAILED,
            "certificate INVALID: facets differ from S(I)".into(),
        )),
        Err(e) => Err(Failure(
            VERIFICATION_FAILED,
            format!("certificate INVALID: {e}"),
        )),
    }
}

fn verify_cmd(path: &Path) -> Outcome {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    match verify_polytope_text(&text) {
        Ok(report) => {
            println!(
                "VALID: {} vertices, {} facets, ideal {}",
                report.vertices, report.facets, report.ideal
            );
            Ok(())
        }
        Err(e) => Err(Failure(VERIFICATION_FAILED, format!("INVALID: {e}"))),
    }
}

fn hamilton(spec: &str, out: Option<&Path>) -> Outcome {
    let ideal = parse_ideal(spec)?;
    let circuit = build_circuit(&ideal).map_err(internal)?;
    if !verify_circuit(&circuit, &sphere_facets(&ideal)) {
        return Err(Failure(VERIFICATION_FAILED, "circuit INVALID".into()));
    }
    emit(out, &circuit.to_text())?;
    summary(out, &format!("circuit of length {} VALID", circuit.len()));
    Ok(())
}

const CENSUS_HEADER: [&str; 19] = [
    "n",
    "generators",
    "#facets",
    "f0",
    "f1",
    "f2",
    "f3",
    "h0",
    "h1",
    "h2",
    "h3",
    "h4",
    "g0",
    "g1",
    "g2",
    "m_sequence",
    "dehn_sommerville",
    "realized",
    "hamiltonian",
];

fn verdict(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.to_string()
}

fn census_row(ideal: &OrderIdeal) -> (bool, Vec<String>) {
    let sphere = sphere_facets(ideal);
    let v = fhg_vectors(&sphere);
    let realized = realize(ideal).is_ok_and(|(p, c)| {
        PolytopeFile::from_realization(&p, &c)
            .is_ok_and(|file| verify_polytope_text(&file.to_text()).is_ok())
            && certified_facets(&c).ok() == Some(sphere.clone())
    });
    let hamiltonian = build_circuit(ideal).is_ok_and(|c| verify_circuit(&c, &sphere));
    let gens: Vec<String> = ideal.generators().iter().map(ToString::to_string).collect();
    let checks = [
        v.is_m_sequence(),
        v.dehn_sommerville(),
        realized,
        hamiltonian,
    ];
    let mut row = vec![
        ideal.n().to_string(),
        gens.join(" "),
        sphere.facets().len().to_string(),
    ];
    row.extend(
        v.f[1..]
            .iter()
            .chain(&v.h)
            .chain(&v.g)
            .map(ToString::to_string),
    );
    row.extend(checks.iter().map(|c| verdict(*c)));
    (checks.iter().all(|c| *c), row)
}

fn to_csv(rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CENSUS_HEADER).map_err(internal)?;
    for row in rows {
        writer.write_record(row).map_err(internal)?;
    }
    let bytes = writer.into_inner().map_err(internal)?;
    String::from_utf8(bytes).map_err(internal)
}

/// Sort key `(n, generators)`, overall verdict, and CSV record.
type CensusRow = (usize, Vec<(usize, usize)>, bool, Vec<String>);

fn census(max_n: usize, out: Option<&Path>) -> Outcome {
    if max_n < 4 {
        return Err(usage("--max-n must be at least 4"));
    }
    let mut ideals = Vec::new();
    for n in 4..=max_n {
        ideals.extend(enumerate_ideals(n).map_err(usage)?);
    }
    let mut rows: Vec<CensusRow> = ideals
        .par_iter()
        .map(|i| {
            let (ok, row) = census_row(i);
            let key = i.generators().iter().map(|g| (g.i, g.j)).collect();
            (i.n(), key, ok, row)
        })
        .collect();
    rows.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let records: Vec<Vec<String>> = rows.iter().map(|r| r.3.clone()).collect();
    let text = to_csv(&records)?;
    emit(out, &text)?;
    let failed = rows.iter().filter(|r| !r.2).count();
    summary(
        out,
        &format!("{} ideals, {failed} with a failed verdict", rows.len()),
    );
    if failed > 0 {
        return Err(Failure(
            VERIFICATION_FAILED,
            format!("{failed} ideals failed"),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Enumerate { n, out } => enumerate(*n, out.as_deref()),
        Command::Realize { ideal, out, json } => realize_cmd(ideal, out.as_deref(), *json),
        Command::Verify { polytope } => verify_cmd(polytope),
        Command::Hamilton { ideal, out } => hamilton(ideal, out.as_deref()),
        Command::Census { max_n, out } => census(*max_n, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::from(OK),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
