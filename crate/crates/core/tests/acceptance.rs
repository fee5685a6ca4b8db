//! Acceptance criteria 1 to 7, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use squeezed::complex::{
    ball_facets, boundary_complex, check_closed_pseudomanifold, dual_graph, face_counts,
    fhg_vectors, sphere_facets, PureComplex,
};
use squeezed::cyclic::{
    classify_upper_lower, gale_facets, geometric_facets_oracle, lower_facets,
    orientation_by_sign_test, ParamVector,
};
use squeezed::hamiltonian::{build_circuit, verify_circuit};
use squeezed::polytope_file::{verify_polytope_text, PolytopeFile};
use squeezed::poset::{
    count_ideals, enumerate_ideals, enumerate_ideals_brute_force, enumerate_poset, OrderIdeal,
};
use squeezed::realization::{certified_facets, realize};
use squeezed::Rational;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ideals_up_to(max_n: usize) -> Vec<OrderIdeal> {
    (4..=max_n)
        .flat_map(|n| enumerate_ideals(n).unwrap())
        .collect()
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || {
        format!("{what} took {spent:?}, limit {limit:?}")
    })
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for n in 4..=9 {
        let expected = 1u64 << (n - 4);
        let paths: BTreeSet<String> = enumerate_ideals(n)
            .unwrap()
            .iter()
            .map(OrderIdeal::to_text)
            .collect();
        let brute: BTreeSet<String> = enumerate_ideals_brute_force(n)
            .unwrap()
            .iter()
            .map(OrderIdeal::to_text)
            .collect();
        ensure(paths == brute, || {
            format!("n={n}: path and antichain lists differ")
        })?;
        ensure(paths.len() as u64 == expected, || {
            format!("n={n}: {} ideals", paths.len())
        })?;
        ensure(count_ideals(n).unwrap() == expected, || {
            format!("n={n}: count")
        })?;
    }
    for n in 10..=14 {
        let expected = 1u64 << (n - 4);
        ensure(count_ideals(n).unwrap() == expected, || {
            format!("n={n}: count")
        })?;
        ensure(
            enumerate_ideals(n).unwrap().len() as u64 == expected,
            || format!("n={n}: path enumeration"),
        )?;
    }
    within(start, Duration::from_secs(60), "counting")?;
    Ok("2^(n-4) ideals for 4<=n<=14, antichains agree for n<=9".into())
}

/// `{0,i,i+1,j,j+1}` for every element of the ideal.
fn ball_oracle(ideal: &OrderIdeal) -> BTreeSet<[usize; 5]> {
    ideal
        .elements()
        .iter()
        .map(|e| [0, e.i, e.i + 1, e.j, e.j + 1])
        .collect()
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let ideals = ideals_up_to(9);
    ensure(ideals.len() == 63, || format!("{} ideals", ideals.len()))?;
    for ideal in &ideals {
        let (polytope, certificate) = realize(ideal).map_err(|e| format!("{ideal}: {e}"))?;
        let visible: BTreeSet<[usize; 5]> = certificate
            .visibility
            .iter()
            .filter(|v| v.visible)
            .map(|v| v.facet)
            .collect();
        ensure(visible == ball_oracle(ideal), || {
            format!("{ideal}: visibility differs from B(I)")
        })?;
        ensure(
            certificate.hyperplanes.len() == polytope.facets.facets().len(),
            || format!("{ideal}: facet without hyperplane"),
        )?;
        let certified = certified_facets(&certificate).map_err(|e| format!("{ideal}: {e}"))?;
        ensure(certified == sphere_facets(ideal), || {
            format!("{ideal}: certified facets differ from S(I)")
        })?;
        let text = PolytopeFile::from_realization(&polytope, &certificate)
            .map_err(|e| e.to_string())?
            .to_text();
        verify_polytope_text(&text).map_err(|e| format!("{ideal}: re-check {e}"))?;
    }
    within(start, Duration::from_secs(600), "realization")?;
    Ok(format!(
        "63 ideals realized and certified in {:?}",
        start.elapsed()
    ))
}

fn criterion_3() -> Check {
    let ideals = ideals_up_to(10);
    for ideal in &ideals {
        let sphere = sphere_facets(ideal);
        ensure(sphere == boundary_complex(&ball_facets(ideal)), || {
            format!("{ideal}: S(I) differs from the boundary of B(I)")
        })?;
        ensure(check_closed_pseudomanifold(&sphere), || {
            format!("{ideal}: not a closed pseudomanifold")
        })?;
        let g = dual_graph(&sphere);
        ensure(g.is_connected(), || format!("{ideal}: disconnected"))?;
        ensure((0..g.nodes.len()).all(|v| g.degree(v) == 4), || {
            format!("{ideal}: dual graph not 4-regular")
        })?;
    }
    Ok(format!("{} spheres for n<=10", ideals.len()))
}

/// Face numbers by listing every subset of every facet.
fn f_vector_oracle(c: &PureComplex) -> Vec<i64> {
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in c.facets() {
        let v = f.vertices();
        for mask in 1u32..(1 << v.len()) {
            faces.insert(
                (0..v.len())
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| v[k])
                    .collect(),
            );
        }
    }
    let mut f = vec![1i64; c.dim() + 2];
    for (k, fk) in f.iter_mut().enumerate().skip(1) {
        *fk = faces.iter().filter(|s| s.len() == k).count() as i64;
    }
    f
}

fn criterion_4() -> Check {
    for ideal in ideals_up_to(10) {
        let sphere = sphere_facets(&ideal);
        let v = fhg_vectors(&sphere);
        ensure(v.f == f_vector_oracle(&sphere), || {
            format!("{ideal}: f-vector")
        })?;
        ensure(v.dehn_sommerville(), || {
            format!("{ideal}: h not palindromic")
        })?;
        ensure(v.is_m_sequence(), || {
            format!("{ideal}: g not an M-sequence")
        })?;
    }
    let ideal: OrderIdeal = "n=6; G=(2,5)".parse().unwrap();
    let sphere = sphere_facets(&ideal);
    let v = fhg_vectors(&sphere);
    ensure(f_vector_oracle(&sphere) == [1, 7, 20, 26, 13], || {
        "<(2,5)> f-vector".into()
    })?;
    ensure(face_counts(&sphere) == [1, 7, 20, 26, 13], || {
        "face_counts".into()
    })?;
    ensure(v.h == [1, 3, 5, 3, 1] && v.g == [1, 2, 2], || {
        format!("<(2,5)> h={:?} g={:?}", v.h, v.g)
    })?;
    Ok("Dehn-Sommerville and M-sequence for n<=10; <(2,5)> gives (1,7,20,26,13)".into())
}

fn int_params(values: &[i64]) -> ParamVector<Rational> {
    ParamVector::increasing(
        values
            .iter()
            .map(|&t| Rational::from_integer(t.into()))
            .collect(),
    )
    .unwrap()
}

fn parameter_families(size: usize) -> Vec<ParamVector<Rational>> {
    let linear: Vec<i64> = (0..size as i64).collect();
    let squares: Vec<i64> = (0..size as i64).map(|k| k * k - 7).collect();
    let uneven: Vec<i64> = (0..size as i64).map(|k| 3 * k + (k * k * k) % 3).collect();
    let mut out = vec![
        int_params(&linear),
        int_params(&squares),
        int_params(&uneven),
    ];
    out.push(
        ParamVector::increasing(
            (0..size as i64)
                .map(|k| Rational::new((2 * k + 1).into(), (k + 2).into()))
                .collect(),
        )
        .unwrap(),
    );
    out
}

fn criterion_5() -> Check {
    for n in 4..=12 {
        let ground = n + 1;
        let lower: BTreeSet<[usize; 5]> = lower_facets(ground).into_iter().collect();
        let cone: BTreeSet<[usize; 5]> = enumerate_poset(n)
            .unwrap()
            .iter()
            .map(|e| [0, e.i, e.i + 1, e.j, e.j + 1])
            .collect();
        ensure(lower == cone, || {
            format!("n={n}: lower facets differ from 0*F3(n)")
        })?;
        let facets = gale_facets(ground);
        for ts in parameter_families(ground) {
            for (f, _) in &facets {
                ensure(
                    orientation_by_sign_test(f, &ts) == Some(classify_upper_lower(f, ground)),
                    || format!("n={n}: orientation of {f:?}"),
                )?;
            }
            if ground <= 9 {
                let oracle: BTreeSet<[usize; 5]> =
                    geometric_facets_oracle(&ts).unwrap().into_iter().collect();
                let gale: BTreeSet<[usize; 5]> = facets.iter().map(|(f, _)| *f).collect();
                ensure(oracle == gale, || {
                    format!("n={n}: Gale list differs from oracle")
                })?;
            }
        }
    }
    Ok("4<=n<=12 lower facets, 4 parameter vectors, orientations agree".into())
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let ideals = ideals_up_to(10);
    for ideal in &ideals {
        let circuit = build_circuit(ideal).map_err(|e| format!("{ideal}: {e}"))?;
        ensure(verify_circuit(&circuit, &sphere_facets(ideal)), || {
            format!("{ideal}: circuit rejected")
        })?;
    }
    within(start, Duration::from_secs(120), "circuits")?;
    Ok(format!("{} circuits verified", ideals.len()))
}

/// Copies of `text` with the digit at every `stride`-th digit position
/// replaced by its successor mod 10.
fn mutations(text: &str, stride: usize) -> Vec<String> {
    let positions: Vec<usize> = text
        .bytes()
        .enumerate()
        .filter(|(_, b)| b.is_ascii_digit())
        .map(|(k, _)| k)
        .collect();
    positions
        .iter()
        .step_by(stride)
        .map(|&k| {
            let mut bytes = text.as_bytes().to_vec();
            bytes[k] = b'0' + (bytes[k] - b'0' + 1) % 10;
            String::from_utf8(bytes).unwrap()
        })
        .collect()
}

fn criterion_7() -> Check {
    let mut accepted = 0;
    let mut rejected = 0;
    for ideal in ideals_up_to(9) {
        let (p, c) = realize(&ideal).map_err(|e| e.to_string())?;
        let file = PolytopeFile::from_realization(&p, &c).map_err(|e| e.to_string())?;
        for text in [file.to_text(), file.to_json()] {
            verify_polytope_text(&text).map_err(|e| format!("{ideal}: {e}"))?;
            accepted += 1;
            let stride = match ideal.n() {
                4 | 5 => 1,
                6 => 5,
                _ => 29,
            };
            for m in mutations(&text, stride) {
                ensure(verify_polytope_text(&m).is_err(), || {
                    format!("{ideal}: mutated file accepted")
                })?;
                rejected += 1;
            }
        }
    }
    Ok(format!(
        "{accepted} files accepted, {rejected} single-digit mutations rejected"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("counting", criterion_1),
        ("realization", criterion_2),
        ("structure", criterion_3),
        ("g-theorem necessity", criterion_4),
        ("Gale/cyclic", criterion_5),
        ("Hamiltonicity", criterion_6),
        ("certificate robustness", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
