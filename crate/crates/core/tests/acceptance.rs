//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fqflats::flats::flat_eq;
use fqflats::incidence::{common_neighbor_count, pair_rank, verify_decomposition};
use fqflats::richness::{exact_threshold, lund_saraf_check, paper_threshold, thm2_check, thm3_check};
use fqflats::spectral::{graph_spectrum, guarantee_threshold, incidence_bound_check_indexed, mixing_audit, BoundSource};
use fqflats::verify::default_grid;
use fqflats::{
    count_x, count_y, gaussian_binomial, Budget, CountTable, Elem, FieldCtx, Flat, FqVector, IncidenceGraph, Params, Part,
    Spectrum, SplitMix64,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

const TOL: f64 = 1e-9;
const SEED: u64 = 20240601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn build(p: Params) -> (FieldCtx, IncidenceGraph) {
    let ctx = FieldCtx::new(p.q).unwrap();
    let g = IncidenceGraph::build(&ctx, p.d, p.k, p.h, &Budget::default()).unwrap();
    (ctx, g)
}

fn spectrum(g: &IncidenceGraph) -> Spectrum {
    graph_spectrum(g, TOL, &Budget::default()).unwrap()
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

// brute-force point geometry, independent of row reduction

fn points(ctx: &FieldCtx, f: &Flat) -> Vec<Vec<Elem>> {
    let dirs: Vec<Vec<Elem>> = (0..f.dim()).map(|i| f.basis_row(i).to_vec()).collect();
    let mut pts = vec![f.base().to_vec()];
    for v in &dirs {
        let mut next = Vec::with_capacity(pts.len() * ctx.order() as usize);
        for p in &pts {
            for c in ctx.elements() {
                next.push(p.iter().zip(v).map(|(&a, &b)| ctx.add(a, ctx.mul(c, b))).collect());
            }
        }
        pts = next;
    }
    pts
}

fn point_set(ctx: &FieldCtx, f: &Flat) -> BTreeSet<Vec<Elem>> {
    points(ctx, f).into_iter().collect()
}

fn hull_dim(ctx: &FieldCtx, a: &Flat, b: &Flat) -> usize {
    let mut pts = points(ctx, a);
    pts.extend(points(ctx, b));
    let o = pts[0].clone();
    let mut span: HashSet<Vec<Elem>> = HashSet::from([vec![0; o.len()]]);
    for p in &pts[1..] {
        let g: Vec<Elem> = p.iter().zip(&o).map(|(&x, &y)| ctx.sub(x, y)).collect();
        if span.contains(&g) {
            continue;
        }
        let cur: Vec<Vec<Elem>> = span.iter().cloned().collect();
        for s in &cur {
            for c in ctx.elements().skip(1) {
                span.insert(s.iter().zip(&g).map(|(&x, &y)| ctx.add(x, ctx.mul(c, y))).collect());
            }
        }
    }
    let (mut dim, mut n) = (0, 1usize);
    while n < span.len() {
        n *= ctx.order() as usize;
        dim += 1;
    }
    dim
}

fn rerepresent(ctx: &FieldCtx, rng: &mut SplitMix64, f: &Flat) -> Flat {
    let d = f.ambient_dim();
    let q = u64::from(ctx.order());
    let dirs = f.directions();
    let combo = |rng: &mut SplitMix64| {
        dirs.iter().fold(FqVector::zero(d), |acc, v| acc.add(ctx, &v.scale(ctx, rng.below(q) as Elem)))
    };
    let base = combo(rng).add(ctx, &f.base_vector());
    loop {
        let rows: Vec<FqVector> = (0..dirs.len()).map(|_| combo(rng)).collect();
        if let Ok(g) = Flat::from_span(ctx, &rows, &base) {
            return g;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for p in default_grid() {
        let (_, g) = build(p);
        let (q, d, k, h) = (p.q, p.d as u64, p.k as u64, p.h as u64);
        let n_k = BigUint::from(q).pow((d - k) as u32) * gaussian_binomial(d, k, q);
        let n_h = BigUint::from(q).pow((d - h) as u32) * gaussian_binomial(d, h, q);
        let (x, y) = (count_x(h, k, q), count_y(d, h, k, q));
        let table = CountTable::new(q, d, k, h).unwrap();
        let degrees = g.check_biregular().ok().map(|(a, b)| (BigUint::from(a), BigUint::from(b)));
        let ok = BigUint::from(g.size(Part::A)) == n_k
            && BigUint::from(g.size(Part::B)) == n_h
            && degrees == Some((y.clone(), x.clone()))
            && &n_k * &y == &n_h * &x
            && BigUint::from(g.edge_count()) == &n_k * &y
            && table.double_count_ok();
        if !ok {
            bad.push(p.to_string());
        }
    }
    let t = start.elapsed();
    outcome(bad.is_empty() && within(t, 30), format!("{} grid entries, mismatches {bad:?}, {t:.1?}", default_grid().len()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [Params::new(3, 2, 0, 1), Params::new(3, 3, 0, 2), Params::new(3, 4, 1, 3)] {
        let (ctx, g) = build(p);
        let r = verify_decomposition(&ctx, &g, &Budget::default()).unwrap();
        for c in r.classes.iter().filter(|c| !c.diagonal) {
            let expected = if c.t > p.h { 0 } else { gaussian_binomial((p.d - c.t) as u64, (p.h - c.t) as u64, p.q).to_u64().unwrap() };
            ok &= c.constant == expected && c.observed == vec![expected] && c.exceptions == 0;
            notes.push(format!("{p} t={} G={expected} pairs={}", c.t, c.pairs));
        }
        ok &= r.exceptions == 0 && r.partition_ok;
    }
    let t = start.elapsed();
    outcome(ok && within(t, 120), format!("{}; {t:.1?}", notes.join(", ")))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [Params::new(3, 2, 0, 1), Params::new(3, 3, 0, 2), Params::new(3, 4, 1, 3)] {
        let (_, g) = build(p);
        let s = spectrum(&g);
        let (d, k, h) = (p.d as i32, p.k as i32, p.h as i32);
        let e = (d - h) * h + k * (2 * h - d - k + 1);
        let bound_sq = (2 * k + 1) as f64 * (p.q as f64).powi(e);
        let l3_sq = s.lambda3 * s.lambda3;
        ok &= l3_sq <= bound_sq * (1.0 + 10.0 * TOL);
        notes.push(format!("{p}: lambda3^2={l3_sq:.6} <= {bound_sq}"));
    }
    for q in [3u64, 5, 7, 9] {
        let (_, g) = build(Params::new(q, 2, 0, 1));
        let s = spectrum(&g);
        let err = (s.lambda3 - (q as f64).sqrt()).abs();
        ok &= err <= 1e-6;
        notes.push(format!("q={q}: |lambda3-sqrt(q)|={err:.1e}"));
    }
    let t = start.elapsed();
    outcome(ok && within(t, 180), format!("{}; {t:.1?}", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (mut samples, mut violations) = (0u64, 0u64);
    let mut worst = 0f64;
    for (i, p) in default_grid().into_iter().enumerate() {
        let (_, g) = build(p);
        let s = spectrum(&g);
        let mut rng = SplitMix64::derive(SEED, &[4, i as u64]);
        let (na, nb) = (g.size(Part::A), g.size(Part::B));
        for _ in 0..1000 {
            let xs = rng.sized_subset(na, 1, na);
            let ys = rng.sized_subset(nb, 1, nb);
            let r = mixing_audit(&g, &s, &xs, &ys).unwrap();
            samples += 1;
            violations += !r.pass_refined as u64;
            if r.bound_refined > 0.0 {
                worst = worst.max(r.deviation / r.bound_refined);
            }
        }
    }
    let t = start.elapsed();
    outcome(
        violations == 0 && within(t, 60),
        format!("{samples} samples, {violations} refined-bound violations, max deviation/bound {worst:.3}; {t:.1?}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    for q in [3u64, 5, 9] {
        ok &= guarantee_threshold(2, 0, 1, q).unwrap() == BigUint::from(q).pow(3);
        ok &= guarantee_threshold(4, 1, 3, q).unwrap() == BigUint::from(3 * q.pow(9));
    }
    let symbolic = ok;
    let (mut samples, mut violations, mut above, mut empty) = (0u64, 0u64, 0u64, 0u64);
    let mut worst = 0f64;
    for (i, p) in default_grid().into_iter().enumerate() {
        if p.h < 2 * p.k + 1 {
            continue;
        }
        let (_, g) = build(p);
        let mut rng = SplitMix64::derive(SEED, &[5, i as u64]);
        let (na, nb) = (g.size(Part::A), g.size(Part::B));
        for _ in 0..200 {
            let ps = rng.sized_subset(na, 1, na);
            let hs = rng.sized_subset(nb, 1, nb);
            let r = incidence_bound_check_indexed::<f64>(&g, &ps, &hs, BoundSource::ClosedForm, TOL).unwrap();
            samples += 1;
            violations += (r.deviation > r.bound * (1.0 + TOL)) as u64;
            above += r.above_threshold as u64;
            empty += (r.above_threshold && r.incidences == 0) as u64;
            worst = worst.max(r.ratio);
        }
    }
    ok &= violations == 0 && empty == 0;
    let t = start.elapsed();
    outcome(
        ok,
        format!(
            "thresholds q^3 and 3q^9 {}, {samples} samples, {violations} violations, {above} above threshold with {empty} empty, max ratio {worst:.3}; {t:.1?}",
            if symbolic { "match" } else { "MISMATCH" }
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let (mut runs, mut exact_pass, mut paper_pass) = (0u64, 0u64, 0u64);
    let mut skipped = Vec::new();
    for (i, p) in default_grid().into_iter().enumerate() {
        let (_, g) = build(p);
        let s = spectrum(&g);
        for t in [2usize, 3] {
            for s_part in [Part::B, Part::A] {
                let size = g.size(s_part);
                let lo = exact_threshold(&g, s_part, t).max(paper_threshold(&p, t).to_u64().unwrap()).max(1) as usize;
                if lo > size {
                    skipped.push(format!("{p} t={t} S in {s_part:?}"));
                    continue;
                }
                let mut rng = SplitMix64::derive(SEED, &[6, i as u64, t as u64, (s_part == Part::A) as u64]);
                for _ in 0..50 {
                    let set = rng.sized_subset(size, lo, size);
                    let r = match s_part {
                        Part::B => thm2_check(&g, &s, &set, t).unwrap(),
                        Part::A => thm3_check(&g, &s, &set, t).unwrap(),
                    };
                    let general = lund_saraf_check(&g, &s, s_part, &set, t).unwrap();
                    let floor = (r.c_exact * g.size(s_part.other()) as f64 * (1.0 - TOL)).ceil() as usize;
                    runs += 1;
                    exact_pass += (r.hypothesis_met_exact && r.r_count >= floor && general.pass_exact == Some(true)) as u64;
                    paper_pass += (r.pass_paper == Some(true)) as u64;
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        runs > 0 && exact_pass == runs && within(t, 60),
        format!(
            "{exact_pass}/{runs} meet c_exact, c_paper {paper_pass}/{runs}; not applicable (part smaller than hypothesis): {}; {t:.1?}",
            skipped.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut miss = [0u64; 4];
    let mut positives = [0u64; 2];
    let mut instances = 0u64;
    for (i, p) in default_grid().into_iter().enumerate() {
        let (ctx, g) = build(p);
        let b_points: Vec<HashSet<Vec<Elem>>> = g.part_b().iter().map(|f| points(&ctx, f).into_iter().collect()).collect();
        let mut rng = SplitMix64::derive(SEED, &[7, i as u64]);
        let (na, nb) = (g.size(Part::A) as u64, g.size(Part::B) as u64);
        for _ in 0..500 {
            instances += 1;
            let u = &g.part_a()[rng.below(na) as usize];
            let w = if rng.below(2) == 0 { rerepresent(&ctx, &mut rng, u) } else { g.part_a()[rng.below(na) as usize].clone() };
            let eq = flat_eq(u, &w).unwrap();
            positives[0] += eq as u64;
            miss[0] += (eq != (point_set(&ctx, u) == point_set(&ctx, &w))) as u64;

            let hi = rng.below(nb) as usize;
            let v = if rng.below(2) == 0 {
                let nbrs = g.neighbors(Part::B, hi);
                &g.part_a()[nbrs[rng.below(nbrs.len() as u64) as usize] as usize]
            } else {
                &g.part_a()[rng.below(na) as usize]
            };
            let inside = g.part_b()[hi].contains_flat(&ctx, v).unwrap();
            positives[1] += inside as u64;
            let pts = points(&ctx, v);
            miss[1] += (inside != pts.iter().all(|x| b_points[hi].contains(x))) as u64;

            let a = rng.below(na) as usize;
            let b = (a + 1 + rng.below(na - 1) as usize) % na as usize;
            let (v1, v2) = (&g.part_a()[a], &g.part_a()[b]);
            miss[2] += (pair_rank(&ctx, v1, v2).unwrap() != hull_dim(&ctx, v1, v2)) as u64;
            let (p1, p2) = (points(&ctx, v1), points(&ctx, v2));
            let common = b_points.iter().filter(|s| p1.iter().chain(&p2).all(|x| s.contains(x))).count() as u64;
            miss[3] += (common_neighbor_count(&ctx, v1, v2, p.h).unwrap() != common) as u64;
        }
    }
    let t = start.elapsed();
    outcome(
        miss == [0; 4],
        format!(
            "{instances} instances per operation, disagreements flat_eq/contains/pair_rank/common = {miss:?}, positives eq={} contains={}; {t:.1?}",
            positives[0], positives[1]
        ),
    )
}

fn verify_run(seed: &str) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fqflats::cli::run(["fqflats", "verify", "--seed", seed], &mut out, &mut err);
    (code, out)
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let (c1, a) = verify_run("7");
    let (c2, b) = verify_run("7");
    let (_, other) = verify_run("8");
    let t = start.elapsed();
    outcome(
        a == b && a != other && c1 == 0 && c2 == 0,
        format!("{} bytes, identical: {}, exit codes {c1}/{c2}, other seed differs: {}; {t:.1?}", a.len(), a == b, a != other),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("counting exactness", criterion_1),
        ("Gram decomposition", criterion_2),
        ("third-eigenvalue bound", criterion_3),
        ("mixing lemma", criterion_4),
        ("incidence bound", criterion_5),
        ("rich objects", criterion_6),
        ("oracle equivalence", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        failed += !r.ok as usize;
        println!("criterion {} ({name}): {} {}", i + 1, if r.ok { "PASS" } else { "FAIL" }, r.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
