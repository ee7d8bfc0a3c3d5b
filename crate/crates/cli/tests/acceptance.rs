//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sylow_d4_core::characters::char_family_counts;
use sylow_d4_core::classes::{class_equation_check, family_counts};
use sylow_d4_core::cyclotomic::{gauss_quadratic, CycInt};
use sylow_d4_core::ffield::{Field, Fq};
use sylow_d4_core::group::{m_coordinates_zero, GraphAuto, Group, UElement};
use sylow_d4_core::oracle::{certify_characters, certify_classes, class_function_check};
use sylow_d4_core::table::{CharTable, OrthMode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn field(p: u32, a: u32) -> Result<Field, String> {
    Field::new(p, a, None).map_err(err)
}

fn is_power_of(mut d: u128, q: u128) -> bool {
    while d > 1 && d.is_multiple_of(q) {
        d /= q;
    }
    d == 1
}

/// Square table, exact class equation and degree sum, family sizes.
fn counts(t: &CharTable) -> Result<(), String> {
    let q = t.q();
    let c = t.counts();
    ensure!(c.ok(), "counts at q={q}: {c:?}");
    class_equation_check(&t.classes, q)?;
    for (name, got, want) in family_counts(&t.classes, q).into_iter().chain(char_family_counts(&t.chars, q)) {
        ensure!(got == want, "q={q}: {name} has {got} members, expected {want}");
    }
    Ok(())
}

fn full_certification(p: u32) -> Outcome {
    let f = field(p, 1)?;
    let q = f.q() as u128;
    let order = Group::new(&f).order();
    ensure!(order == q.pow(12), "group order {order}");
    let t = CharTable::build(f.clone(), true).map_err(err)?;
    counts(&t)?;
    let problems = certify_classes(&f, &t.classes).map_err(err)?;
    ensure!(problems.is_empty(), "class partition: {problems:?}");
    let orth = t.orthogonality(OrthMode::Full).map_err(err)?;
    ensure!(orth.ok(), "orthogonality: {:?}", orth.failures);
    let cert = certify_characters(&f, &t.classes, &t.chars).map_err(err)?;
    ensure!(cert.mismatch_count == 0, "{} mismatches, e.g. {:?}", cert.mismatch_count, cert.mismatches);
    ensure!(cert.reducible.is_empty(), "reducible inductions: {:?}", cert.reducible);
    let (compared, bad) = class_function_check(&f, &t.classes, &t.chars, 2, 7);
    ensure!(bad.is_empty(), "not constant on classes: {bad:?}");

    let mut special = Vec::new();
    if p == 2 {
        let half = t.chars.families.iter().filter(|fam| fam.halved).count();
        let d = t.chars.families.iter().find(|fam| fam.halved).map(|fam| fam.degree(q));
        ensure!(half > 0 && d == Some(q.pow(3) / 2), "degree q^3/2 family missing");
        special.push(format!("degree {} families: {half}", q.pow(3) / 2));
    } else {
        let c124 = t.classes.families.iter().any(|c| c.subs == [1, 2, 4] && c.tag == "q^6");
        let f567 = t.chars.find_family("F5_6_7").is_some();
        ensure!(c124 && f567, "special p=3 families missing");
        special.push("C_{1,2,4,q^6} and F5_6_7 present".into());
    }
    Ok(format!(
        "order {order}, {}x{} table, {} cells vs induction, {} constructions, {compared} conjugate checks; {}",
        t.rows(),
        t.cols(),
        cert.cells,
        cert.inducings_checked,
        special.join(", ")
    ))
}

fn sampled_orthogonality() -> Outcome {
    let mut lines = Vec::new();
    for (p, a) in [(2, 2), (5, 1), (7, 1), (3, 2)] {
        let start = Instant::now();
        let t = CharTable::build(field(p, a)?, false).map_err(err)?;
        counts(&t)?;
        let r = t.orthogonality(OrthMode::Sampled { pairs: 20_000, seed: 12 }).map_err(err)?;
        ensure!(r.row_pairs + r.col_pairs >= 10_000, "only {} pairs", r.row_pairs + r.col_pairs);
        ensure!(r.ok(), "q={}: {:?}", t.q(), r.failures);
        if p == 2 {
            let nontrivial = (0..t.rows())
                .filter(|&i| t.chars.family_of(&t.chars.labels[i]).halved && !t.chars.resolved(i).d3.is_zero())
                .count();
            ensure!(nontrivial > 0, "no halved label with a nonzero non-image pick at q=4");
        }
        lines.push(format!(
            "q={} {} rows, {}+{} pairs, {:.0}s",
            t.q(),
            t.rows(),
            r.row_pairs,
            r.col_pairs,
            start.elapsed().as_secs_f64()
        ));
    }
    Ok(lines.join("; "))
}

fn gauss_sums() -> Outcome {
    let mut checked = 0;
    for p in [3u32, 5, 7] {
        for a in [1, 2] {
            let f = field(p, a)?;
            let q = CycInt::from_int(p, f.q() as i128);
            for c in f.units() {
                let g = gauss_quadratic(&f, c);
                let n = g.mul(&g.conj()).map_err(err)?;
                ensure!(n == q, "q={}: |G({c:?})|^2 = {n}", f.q());
                checked += 1;
            }
            if a == 1 {
                let (re, im) = gauss_quadratic(&f, Fq::ONE).to_complex();
                let s = (p as f64).sqrt();
                let (want_re, want_im) = if p % 4 == 1 { (s, 0.0) } else { (0.0, s) };
                ensure!(
                    (re - want_re).abs() < 1e-9 && (im - want_im).abs() < 1e-9,
                    "G(1) at p={p} is {re}+{im}i"
                );
            }
        }
    }
    Ok(format!("{checked} norms exact; G(1) = sqrt(5), i sqrt(3), i sqrt(7)"))
}

fn degree_dichotomy() -> Outcome {
    let mut lines = Vec::new();
    for (p, a) in [(3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let t = CharTable::build(field(p, a)?, false).map_err(err)?;
        let q = t.q();
        let mut halved = 0;
        for l in &t.chars.labels {
            let fam = t.chars.family_of(l);
            let d = fam.degree(q);
            ensure!(
                is_power_of(d, q) == (p != 2 || !fam.halved),
                "q={q}: {} has degree {d}",
                t.chars.label(l)
            );
            halved += fam.halved as usize;
        }
        lines.push(format!("q={q}: {} labels, {halved} of degree q^3/2", t.rows()));
    }
    // q = 2: q^3/2 = 4 = q^2, so the halved degree is itself a power of q.
    let t = CharTable::build(field(2, 1)?, false).map_err(err)?;
    let halved = t.chars.labels.iter().filter(|l| t.chars.family_of(l).halved).count();
    ensure!(halved > 0, "no degree q^3/2 labels at q=2");
    lines.push(format!("q=2 degenerate (q^3/2 = q^2), {halved} such labels"));
    Ok(lines.join("; "))
}

fn equivariance() -> Outcome {
    let tau = GraphAuto::tau();
    let t = CharTable::build(field(5, 1)?, false).map_err(err)?;
    let r = t.equivariance(&tau).map_err(err)?;
    ensure!(r.failures.is_empty(), "q=5: {:?}", r.failures);
    let all = t.rows() * t.cols();
    ensure!(
        r.compared == all && r.skipped_rows == 0 && r.skipped_cols == 0,
        "q=5 compared {} of {all} cells",
        r.compared
    );
    let t3 = CharTable::build(field(3, 1)?, true).map_err(err)?;
    let r3 = t3.equivariance(&tau).map_err(err)?;
    ensure!(r3.failures.is_empty() && r3.compared > 0, "q=3: {:?}", r3.failures);
    Ok(format!(
        "q=5 all {all} cells; q=3 {} cells with {} rows and {} columns excluded",
        r3.compared, r3.skipped_rows, r3.skipped_cols
    ))
}

fn random_elem(rng: &mut ChaCha8Rng, q: u32) -> UElement {
    let mut x = UElement::IDENTITY;
    for t in x.0.iter_mut() {
        *t = Fq(rng.gen_range(0..q) as u16);
    }
    x
}

fn group_laws() -> Outcome {
    let mut triples = 0;
    for (p, a) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = field(p, a)?;
        let g = Group::new(&f);
        let q = f.q();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..10_000 {
            let (x, y, z) = (random_elem(&mut rng, q), random_elem(&mut rng, q), random_elem(&mut rng, q));
            ensure!(g.mul(&g.mul(&x, &y), &z) == g.mul(&x, &g.mul(&y, &z)), "q={q}: not associative");
            ensure!(g.mul(&x, &g.inv(&x)).is_identity(), "q={q}: bad inverse");
            triples += 1;
        }
        for auto in GraphAuto::all() {
            for _ in 0..1_000 {
                let (x, y) = (random_elem(&mut rng, q), random_elem(&mut rng, q));
                ensure!(
                    g.apply_auto(&auto, &g.mul(&x, &y)) == g.mul(&g.apply_auto(&auto, &x), &g.apply_auto(&auto, &y)),
                    "q={q}: {} is not multiplicative",
                    auto.name()
                );
            }
        }
    }

    let f = field(2, 1)?;
    let g = Group::new(&f);
    let mut members = 0usize;
    for i in 1..=13 {
        let zero = m_coordinates_zero(i);
        let free: Vec<usize> = (1..=12).filter(|j| !zero.contains(&(*j as u8))).collect();
        for n in 0..(1usize << free.len()) {
            let mut m = UElement::IDENTITY;
            for (b, &j) in free.iter().enumerate() {
                m.set(j, Fq(((n >> b) & 1) as u16));
            }
            for k in 1..=12 {
                ensure!(g.conj_by_root(&m, k, Fq::ONE).in_m(i), "M_{i} not normal at q=2");
            }
            members += 1;
        }
    }
    Ok(format!("{triples} triples, {} automorphisms, {members} elements of M_1..M_13", GraphAuto::all().len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("q=2 full certification", || full_certification(2)),
        ("q=3 full certification", || full_certification(3)),
        ("q in {4,5,7,9} counts and sampled orthogonality", sampled_orthogonality),
        ("quadratic Gauss sums", gauss_sums),
        ("degree dichotomy", degree_dichotomy),
        ("triality equivariance", equivariance),
        ("group laws", group_laws),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({secs:.1}s) {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({secs:.1}s) {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
