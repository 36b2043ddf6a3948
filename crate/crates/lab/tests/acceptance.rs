//! Acceptance criteria 1-9. Each test prints one verdict line straight to
//! stderr (bypassing capture) and then asserts the verdict and its time limit.

use std::io::Write as _;
use std::time::{Duration, Instant};

use cartan_ho_core::derivations::{der_space, hom_degrees, span_rank, DerOptions};
use cartan_ho_core::ho::HOAlgebra;
use cartan_ho_core::lie::{bracket_coords, normalize_coords, Adjoint};
use cartan_ho_core::linalg::{EliminationOptions, SparseMatrix};
use cartan_ho_core::{
    AlgebraParams, DegreeLayout, Fp, GradedLieAlgebra, Monomial, Parity, PrimeField, StructureConstants, SuperPoly,
};
use cartan_ho_lab::{Document, Lab, Report, Suite, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn config_a() -> AlgebraParams {
    AlgebraParams::new(3, 5, &[1, 1, 1]).unwrap()
}

fn config_b() -> AlgebraParams {
    AlgebraParams::new(3, 5, &[2, 1, 1]).unwrap()
}

/// Prints the verdict line, the failing claims, then asserts.
fn verdict(id: u32, what: &str, limit: Duration, start: Instant, pass: bool, detail: &[String]) {
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let ok = pass && in_time;
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "criterion {id}: {} | {what} | {:.1}s of {}s",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for d in detail {
        let _ = writeln!(err, "    {d}");
    }
    drop(err);
    assert!(in_time, "criterion {id} exceeded {limit:?}: {elapsed:?}");
    assert!(pass, "criterion {id} failed: {detail:?}");
}

/// Failing claims and all closed-form comparisons of a report.
fn findings(r: &Report) -> Vec<String> {
    let mut v: Vec<String> = r
        .claims
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("FAIL {}: computed {}, expected {}", c.claim, c.computed, c.expected))
        .collect();
    v.extend(r.comparisons.iter().map(|c| {
        format!(
            "{} {}: computed {}, closed form {} = {}",
            if c.agrees { "SAME" } else { "DIFF" },
            c.quantity,
            c.computed,
            c.formula,
            c.closed_form
        )
    }));
    v.extend(r.notes.iter().map(|n| format!("note: {n}")));
    v
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_1_construction() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![]).unwrap();
    let r = lab.run(Suite::Membership).unwrap();
    let cmp = |f: &str| r.comparisons.iter().find(|c| c.formula == f).map(|c| c.agrees);
    // The discrepancy with the odd-part count must be surfaced, not hidden.
    let flagged = cmp("2^(n-1) p^Σt - 1") == Some(false) && cmp("2^(n-1) p^Σt") == Some(true);
    let dims = lab.algebra().dim() == 500 && lab.algebra().layout().dim_at(-1) == 3 && lab.algebra().layout().dim_at(0) == 9;
    verdict(1, "dims, T_H rank and membership kernel by degree", secs(10), start, r.passed() && flagged && dims, &findings(&r));
}

#[test]
fn criterion_2_th_morphism() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![]).unwrap();
    let r = lab.run(Suite::ThMorphism).unwrap();
    let counts = r.claims.iter().any(|c| c.claim.contains("4096 pairs")) && r.claims.iter().any(|c| c.claim.contains("1000 seeded"));
    verdict(2, "T_H is a bracket morphism on odd elements", secs(60), start, r.passed() && counts, &findings(&r));
}

#[test]
fn criterion_3_generators() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![]).unwrap();
    let r = lab.run(Suite::Generators).unwrap();
    verdict(3, "M ∪ N generates 𝓗𝓞", secs(300), start, r.passed(), &findings(&r));
}

#[test]
fn criterion_4_centralizer_and_center() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![]).unwrap();
    let r = lab.run(Suite::Center).unwrap();
    verdict(4, "centralizer of 𝓗𝓞_{-1} in 𝓦 is 𝓖 (dim 24), center is 0", secs(120), start, r.passed(), &findings(&r));
}

#[test]
fn criterion_5_negative_degrees() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![-1, -2, -3, -4, -6]).unwrap();
    let r = lab.run(Suite::DerNeg).unwrap();
    let dims: Vec<(i32, usize)> = lab.classify(&[-6, -4, -3, -2, -1]).unwrap().iter().map(|d| (d.degree, d.der_dim)).collect();
    let ok = r.passed() && dims == [(-6, 0), (-4, 0), (-3, 0), (-2, 0), (-1, 3)];
    let mut detail = findings(&r);
    detail.push(format!("dim Der_m by degree: {dims:?}"));
    verdict(5, "Der_{-1} = ad 𝓗𝓞_{-1} (dim 3), Der_{-m} = 0 for m = 2, 3, 4, 6", secs(300), start, ok, &detail);
}

#[test]
fn criterion_6_degree_zero_and_positive() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![1, 2]).unwrap();
    let zero = lab.run(Suite::DerZero).unwrap();
    let pos = lab.run(Suite::DerPos).unwrap();
    let mut detail = findings(&zero);
    detail.extend(findings(&pos));
    verdict(
        6,
        "Der_0 = ad(𝓗𝓞 + FΓ)_0, Der_m = ad 𝓗𝓞_m for m = 1, 2, and the solve vanishing on degrees -1, 0 is trivial at m = 0, 1, 2",
        secs(600),
        start,
        zero.passed() && pos.passed(),
        &detail,
    );
}

#[test]
fn criterion_7_full_assembly() {
    let start = Instant::now();
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![]).unwrap();
    let r = lab.run(Suite::FullDer).unwrap();
    let compared = r.comparisons.len() == 2;
    verdict(7, "Der(𝓗𝓞) over every degree, outer dimension 1", secs(1800), start, r.passed() && compared, &findings(&r));
}

#[test]
fn criterion_8_p_power_derivations() {
    let start = Instant::now();
    let lab = Lab::new(&config_b(), DEFAULT_SEED, vec![-25, -5, -2, -1, 0, 1]).unwrap();
    let r = lab.run(Suite::FullDer).unwrap();
    let dims: Vec<(i32, usize)> = r.tables[0].rows.iter().map(|row| (row[0].parse().unwrap(), row[2].parse().unwrap())).collect();
    let ok = r.passed() && dims.contains(&(-5, 1)) && dims.contains(&(-25, 0));
    let mut detail = findings(&r);
    detail.push(format!("dim Der_m by degree: {dims:?}"));
    verdict(8, "(ad ∂_1)^5 outer, (ad ∂_2)^5 = (ad ∂_3)^5 = 0, outer dimension 2", secs(1800), start, ok, &detail);
}

// ---- criterion 9 ----

const CASES: usize = 10_000;

fn random_poly(p: &AlgebraParams, basis: &[Vec<Monomial>; 2], parity: Parity, rng: &mut ChaCha8Rng) -> SuperPoly {
    let k = p.field();
    let pool = &basis[parity.is_odd() as usize];
    let mut f = SuperPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        f.add_term(k, pool[rng.gen_range(0..pool.len())], k.elem(rng.gen_range(1..p.p() as i64)));
    }
    f
}

fn random_parity(rng: &mut ChaCha8Rng) -> Parity {
    Parity::from_odd(rng.gen_bool(0.5))
}

fn superalgebra_cases(rng: &mut ChaCha8Rng) -> Vec<String> {
    let p = config_b();
    let k = p.field();
    let basis = [p.enumerate_basis(None, Some(Parity::Even)), p.enumerate_basis(None, Some(Parity::Odd))];
    let all = p.enumerate_basis(None, None);
    let mut bad = [0usize; 4];
    for _ in 0..CASES {
        let (pf, pg, ph) = (random_parity(rng), random_parity(rng), random_parity(rng));
        let f = random_poly(&p, &basis, pf, rng);
        let g = random_poly(&p, &basis, pg, rng);
        let h = random_poly(&p, &basis, ph, rng);
        let fg = p.multiply(&f, &g);
        bad[0] += (fg != p.multiply(&g, &f).scaled(k, k.sign(pf.is_odd() && pg.is_odd()))) as usize;
        bad[1] += (p.multiply(&fg, &h) != p.multiply(&f, &p.multiply(&g, &h))) as usize;
        let r = rng.gen_range(1..=2 * p.n());
        let mut rhs = p.multiply(&p.partial(r, &f).unwrap(), &g);
        rhs.add_scaled(k, &p.multiply(&f, &p.partial(r, &g).unwrap()), k.sign(p.is_odd_index(r) && pf.is_odd()));
        bad[2] += (p.partial(r, &fg).unwrap() != rhs) as usize;
        let (a, b) = (all[rng.gen_range(0..all.len())], all[rng.gen_range(0..all.len())]);
        if let Some((_, m)) = p.mul_monomials(&a, &b) {
            bad[3] += (m.zdegree() != a.zdegree() + b.zdegree()) as usize;
        }
    }
    let names = ["super-commutativity", "associativity", "super-Leibniz", "grading additivity"];
    names.iter().zip(bad).filter(|(_, b)| *b > 0).map(|(n, b)| format!("{n}: {b} of {CASES} failed")).collect()
}

fn jacobi_cases(alg: &HOAlgebra, rng: &mut ChaCha8Rng) -> Vec<String> {
    let k = alg.field();
    let n = alg.dim();
    let mut bad = 0;
    for _ in 0..CASES {
        let x = [(rng.gen_range(0..n), Fp::ONE)];
        let y = [(rng.gen_range(0..n), Fp::ONE)];
        let z = [(rng.gen_range(0..n), Fp::ONE)];
        let mut s = bracket_coords(alg, &x, &bracket_coords(alg, &y, &z));
        s.extend(bracket_coords(alg, &y, &bracket_coords(alg, &z, &x)));
        s.extend(bracket_coords(alg, &z, &bracket_coords(alg, &x, &y)));
        bad += !normalize_coords(k, s).is_empty() as usize;
    }
    if bad > 0 {
        vec![format!("Jacobi on 𝓗𝓞 basis triples: {bad} of {CASES} failed")]
    } else {
        vec![]
    }
}

fn linalg_cases(rng: &mut ChaCha8Rng) -> Vec<String> {
    let k = PrimeField::new(7).unwrap();
    let sparse = EliminationOptions { dense_threshold: 2.0, ..Default::default() };
    let dense = EliminationOptions { dense_threshold: 0.0, ..Default::default() };
    let mut bad = 0;
    for _ in 0..CASES {
        let (rows, cols) = (rng.gen_range(1..8), rng.gen_range(1..8));
        let mut lists: Vec<Vec<(usize, Fp)>> = vec![Vec::new(); rows];
        for row in &mut lists {
            for j in 0..cols {
                if rng.gen_bool(0.4) {
                    row.push((j, k.elem(rng.gen_range(1..7))));
                }
            }
        }
        let m = SparseMatrix::from_rows(k, cols, &lists).unwrap();
        let (rs, rd) = (m.rank_with(k, &sparse), m.rank_with(k, &dense));
        let ker = m.kernel_basis_with(k, &sparse);
        let null = ker.iter().all(|v| m.mul_vec(k, v).unwrap().iter().all(|x| x.is_zero()));
        bad += !(rs == rd && rs + ker.len() == cols && null) as usize;
    }
    if bad > 0 {
        vec![format!("rank/kernel consistency: {bad} of {CASES} failed")]
    } else {
        vec![]
    }
}

fn sl2_oracle() -> Vec<String> {
    let k = PrimeField::new(5).unwrap();
    // e = 0, h = 1, f = 2 with [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    let g = StructureConstants::from_fn(k, DegreeLayout::from_dims(0, &[3]), |i, j, out| match (i, j) {
        (0, 1) => out.push((0, k.elem(-2))),
        (0, 2) => out.push((1, Fp::ONE)),
        (1, 2) => out.push((2, k.elem(-2))),
        _ => {}
    });
    let total: usize = hom_degrees(g.layout())
        .map(|m| der_space(&g, &Adjoint(&g), m, &DerOptions::default()).unwrap().len())
        .sum();
    let inner = span_rank(k, &cartan_ho_core::derivations::inner_basis_maps(&g, 0));
    if total == 3 && inner == 3 {
        vec![]
    } else {
        vec![format!("sl2 oracle: dim Der = {total}, dim ad = {inner}, expected 3 and 3")]
    }
}

fn order_independence(alg: &HOAlgebra) -> Vec<String> {
    let solve = |m: i32| der_space(alg, &Adjoint(alg), m, &DerOptions::default()).unwrap();
    let degrees = [-2, -1, 0, 1, 2];
    let forward: Vec<_> = degrees.iter().map(|&m| solve(m)).collect();
    let mut backward: Vec<_> = degrees.iter().rev().map(|&m| solve(m)).collect();
    backward.reverse();
    let parallel: Vec<_> = degrees.par_iter().map(|&m| solve(m)).collect();
    if forward == backward && forward == parallel {
        vec![]
    } else {
        vec!["derivation bases depend on the order of degrees".into()]
    }
}

fn export_round_trips(lab: &Lab) -> Vec<String> {
    let mut bad = Vec::new();
    let alg = lab.algebra();
    let (_, bases) = Lab::new(alg.params(), DEFAULT_SEED, vec![-1, 0]).unwrap().derive().unwrap();
    let docs = [Document::structure_constants(alg), Document::basis(alg, &[]), Document::der_basis(alg, &bases)];
    for doc in &docs {
        let text = doc.render();
        match Document::parse(&text) {
            Ok(back) if back.render() == text => {}
            _ => bad.push(format!("{:?} export does not round-trip byte for byte", doc.kind)),
        }
    }
    let rebuilt = docs[0].structure().unwrap();
    if !rebuilt.triples().eq(alg.structure().triples()) {
        bad.push("re-imported structure constants differ".into());
    }
    let again = HOAlgebra::build(alg.params()).unwrap();
    if Document::structure_constants(&again).render() != docs[0].render() {
        bad.push("two builds export different bytes".into());
    }
    bad
}

#[test]
fn criterion_9_property_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let lab = Lab::new(&config_a(), DEFAULT_SEED, vec![]).unwrap();
    let mut detail = superalgebra_cases(&mut rng);
    detail.extend(jacobi_cases(lab.algebra(), &mut rng));
    detail.extend(linalg_cases(&mut rng));
    detail.extend(sl2_oracle());
    detail.extend(order_independence(lab.algebra()));
    detail.extend(export_round_trips(&lab));
    let pass = detail.is_empty();
    verdict(9, "seeded property suites (10^4 cases each), oracles, round trips", secs(300), start, pass, &detail);
}
