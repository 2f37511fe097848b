//! Acceptance harness: one PASS/FAIL line per criterion, with its time
//! budget. Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{attached_by_search, random_param, random_unimodular};
use hyperloc::cherednik::{
    cyclic_quiver_matrix, delta_action, localization_verdict, radial_parts_identity_check, simple_dim,
    wall_correspondence, CherednikParams,
};
use hyperloc::comparability::{
    d1_matrix, q_set_d1_closed_form, shifting_cone_in, validate_witness, Attachment, ParamSpace,
};
use hyperloc::covectors::{covectors_brute_force, enumerate_covectors};
use hyperloc::exactnum::{int, parse_rational, rat, ParamScalar, Rational};
use hyperloc::git_fan::{chamber_of, chambers, wall_hyperplanes, ChamberResult, FanSource};
use hyperloc::lattice::{is_unimodular, minors_coprime, IntMatrix};
use hyperloc::sign::format_signs;
use hyperloc::weyl::{bracket, moment_ideal, mu_w, poisson, star, Monomial, WeylElement};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Harness {
    failed: Vec<u32>,
}

impl Harness {
    fn run(&mut self, id: u32, name: &str, budget_secs: u64, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(budget_secs);
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed.push(id);
        }
        println!(
            "{} #{id:<2} {name} [{:.2}s / {budget_secs}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn d1_closed_form() -> Outcome {
    let mut chis: Vec<ParamScalar> = (-5..=5).map(ParamScalar::from_int).collect();
    for (n, d) in [(1, 2), (-1, 2), (3, 2), (-3, 2)] {
        chis.push(ParamScalar::from(rat(n, d)));
    }
    chis.push(ParamScalar::tau_unit());
    chis.push(ParamScalar::new(int(2), int(1)));
    let mut mismatches = Vec::new();
    let mut total = 0;
    for (k, n) in [(1usize, 2usize), (1, 3), (2, 3), (2, 4)] {
        let space = ParamSpace::new(&d1_matrix(k, n));
        for chi in &chis {
            total += 1;
            let general = space.q_set(std::slice::from_ref(chi)).map_err(|e| e.to_string())?.signs();
            let table = q_set_d1_closed_form(k as i64, n as i64, chi).map_err(|e| e.to_string())?;
            if general != table {
                let show = |s: &BTreeSet<Vec<hyperloc::sign::Sign>>| {
                    s.iter().map(|v| format_signs(v)).collect::<Vec<_>>().join(",")
                };
                mismatches.push(format!("(k={k},n={n},chi={chi}): q_set={{{}}} table={{{}}}", show(&general), show(&table)));
            }
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{total} cases agree"))
    } else {
        Err(format!("{} of {total} cases differ: {}", mismatches.len(), mismatches.join("; ")))
    }
}

fn cyclic_walls() -> Outcome {
    let walls = wall_hyperplanes(&cyclic_quiver_matrix(3).map_err(|e| e.to_string())?, FanSource::FanOnMomentFiber);
    let got: BTreeSet<Vec<BigInt>> = walls.normals().into_iter().collect();
    let expected: BTreeSet<Vec<BigInt>> = [[1, 0], [0, 1], [1, -1]]
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    check(got == expected, || format!("walls {got:?}"))?;
    let count = chambers(&walls).len();
    check(count == 6, || format!("{count} chambers"))?;
    Ok("3 walls, 6 chambers".into())
}

fn quiver_unimodular() -> Outcome {
    for m in 2..=6 {
        let a = cyclic_quiver_matrix(m).map_err(|e| e.to_string())?;
        check(is_unimodular(&a) && minors_coprime(&a), || format!("m={m}"))?;
    }
    Ok("m = 2..6".into())
}

fn monomial(x: Vec<u32>, xi: Vec<u32>) -> WeylElement {
    WeylElement::monomial(int(1), Monomial::new(0, x, xi))
}

/// Up to four random terms of total degree ≤ `max_deg`, ħ-powers in [−1, 1].
fn random_element(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32, symbol_only: bool) -> WeylElement {
    let mut out = WeylElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let (mut x, mut xi) = (vec![0u32; nvars], vec![0u32; nvars]);
        for _ in 0..rng.gen_range(0..=max_deg) {
            let v = rng.gen_range(0..2 * nvars);
            if v < nvars {
                x[v] += 1;
            } else {
                xi[v - nvars] += 1;
            }
        }
        let h2 = if symbol_only { 0 } else { rng.gen_range(-2..=2) };
        let c = rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        out = out.add(&WeylElement::monomial(c, Monomial::new(h2, x, xi)));
    }
    out
}

fn star_product() -> Outcome {
    let mut monos = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                for e in 0..=3 - a - b - c {
                    monos.push(monomial(vec![a, b], vec![c, e]));
                }
            }
        }
    }
    let mut triples = 0;
    for p in &monos {
        for q in &monos {
            let pq = star(p, q);
            for r in &monos {
                triples += 1;
                check(star(&pq, r) == star(p, &star(q, r)), || format!("associativity fails on {p}, {q}, {r}"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let (a, b, c) = (
            random_element(&mut rng, 3, 4, false),
            random_element(&mut rng, 3, 4, false),
            random_element(&mut rng, 3, 4, false),
        );
        check(star(&star(&a, &b), &c) == star(&a, &star(&b, &c)), || format!("associativity fails on {a}, {b}, {c}"))?;
    }
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { WeylElement::hbar().scale(&int(-1)) } else { WeylElement::zero() };
            check(bracket(&WeylElement::x(i), &WeylElement::xi(j)) == expected, || format!("[x{i}, xi{j}]"))?;
        }
    }
    for _ in 0..100 {
        let (f, g) = (random_element(&mut rng, 3, 3, true), random_element(&mut rng, 3, 3, true));
        let pb = poisson(&f, &g).map_err(|e| e.to_string())?;
        let rest = bracket(&f, &g).sub(&pb.shift_hbar(2));
        check(rest.terms().all(|(m, _)| m.h2 >= 4), || format!("semiclassical limit fails on {f}, {g}"))?;
    }
    Ok(format!("{triples} exhaustive + 200 random triples, 9 commutators, 100 symbol pairs"))
}

fn moment_map_identities() -> Outcome {
    let mut count = 0;
    for a in [IntMatrix::from_i64(&[&[1, -1]]), cyclic_quiver_matrix(3).map_err(|e| e.to_string())?] {
        let n = a.cols();
        let mut exps: Vec<Vec<u32>> = vec![vec![]];
        // All exponent vectors of length 2n and total degree ≤ 3.
        for _ in 0..2 * n {
            exps = exps
                .into_iter()
                .flat_map(|v| {
                    let used: u32 = v.iter().sum();
                    (0..=3 - used).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        for e in exps {
            let m = Monomial::new(0, e[..n].to_vec(), e[n..].to_vec());
            let f = WeylElement::monomial(int(1), m.clone());
            let w = WeylElement::torus_weight(&m, &a);
            for i in 0..a.rows() {
                count += 1;
                let lhs = bracket(&mu_w(&a, i), &f);
                let rhs = f.scale(&Rational::from_integer(w[i].clone()));
                check(lhs == rhs, || format!("[mu_{i}, {f}] = {lhs}"))?;
            }
        }
    }
    Ok(format!("{count} identities"))
}

/// Re-derive the normal form from the certificate: `Σ_k U_ik g_k` must be
/// `D_i (x_p ξ_p − Σ_j c_ij x_j ξ_j)`.
fn verify_normal_form(a: &IntMatrix) -> Result<(), String> {
    let mi = moment_ideal(a).map_err(|e| e.to_string())?;
    let (d, n) = (a.rows(), a.cols());
    let xx = |j: usize| {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        WeylElement::monomial(int(1), Monomial::new(0, e.clone(), e))
    };
    let parse = |s: &str| parse_rational(s).map_err(|e| e.to_string());
    for i in 0..d {
        let mut lhs = WeylElement::zero();
        for k in 0..d {
            lhs = lhs.add(&mi.generators[k].scale(&parse(&mi.row_operations[i][k])?));
        }
        let di = parse(&mi.diagonal[i])?;
        let mut rhs = xx(mi.permutation[i]).scale(&di);
        for (t, &j) in mi.permutation[d..].iter().enumerate() {
            rhs = rhs.sub(&xx(j).scale(&(&di * parse(&mi.c[i][t])?)));
        }
        check(lhs == rhs, || format!("row {i} of the normal form of {a:?}"))?;
    }
    check(mi.dim_moment_fiber == 2 * n - d && mi.dim_reduction == 2 * (n - d), || "dimensions".into())?;
    check(mi.initial_ideal.len() == d, || "initial ideal".into())
}

fn flatness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mats: Vec<IntMatrix> = (2..=4).map(|m| cyclic_quiver_matrix(m).unwrap()).collect();
    for _ in 0..20 {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d + 1..=6);
        mats.push(random_unimodular(&mut rng, d, n));
    }
    for a in &mats {
        verify_normal_form(a)?;
    }
    Ok(format!("{} matrices", mats.len()))
}

fn covector_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mats: Vec<IntMatrix> = (2..=6).map(|m| cyclic_quiver_matrix(m).unwrap()).collect();
    mats.push(IntMatrix::from_i64(&[&[2, 3]]));
    mats.push(IntMatrix::from_i64(&[&[1, 1, -1]]));
    mats.push(IntMatrix::from_i64(&[&[1, 0, 1, 2], &[0, 1, 1, -1]]));
    for _ in 0..10 {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d + 1..=6);
        mats.push(random_unimodular(&mut rng, d, n));
    }
    for a in &mats {
        let fast: BTreeSet<_> = enumerate_covectors(a).into_iter().map(|c| c.signs).collect();
        let slow: BTreeSet<_> = covectors_brute_force(a).into_iter().collect();
        check(fast == slow, || format!("{a:?}: {} vs {}", fast.len(), slow.len()))?;
    }
    Ok(format!("{} matrices", mats.len()))
}

fn attachment_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut attached = 0;
    for inst in 0..300 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d + 1..=4);
        let a = random_unimodular(&mut rng, d, n);
        let covs = enumerate_covectors(&a);
        let c = &covs[rng.gen_range(0..covs.len())];
        let chi: Vec<ParamScalar> = (0..d).map(|_| random_param(&mut rng)).collect();
        let got = hyperloc::comparability::decide_attached(&a, &c.signs, &chi).map_err(|e| e.to_string())?;
        let oracle = attached_by_search(&a, &c.signs, &chi, 25);
        if let Attachment::Attached { witness } = &got {
            check(validate_witness(&a, &c.signs, &chi, witness), || format!("instance {inst}: bad witness"))?;
            attached += 1;
        }
        check(got.is_attached() == oracle, || {
            format!("instance {inst}: A={a:?} lambda={} chi={chi:?}: decided {got:?}, search {oracle}", c.label())
        })?;
    }
    Ok(format!("300 instances, {attached} attached"))
}

fn shifting_cone_criterion() -> Outcome {
    let mut notes = Vec::new();
    let cases = [
        (IntMatrix::from_i64(&[&[1, -1]]), vec![rat(1, 2)], vec![int(1)]),
        (cyclic_quiver_matrix(3).unwrap(), vec![rat(1, 2), rat(1, 3)], vec![int(3), int(1)]),
    ];
    for (a, chi, witness) in cases {
        let chi: Vec<ParamScalar> = chi.into_iter().map(ParamScalar::from).collect();
        let walls = wall_hyperplanes(&a, FanSource::FanOnMomentFiber);
        let ChamberResult::Chamber(c) = chamber_of(&witness, &walls) else {
            return Err("chamber witness lies on a wall".into());
        };
        let space = ParamSpace::new(&a);
        let cone = shifting_cone_in(&space, &chi, &c).map_err(|e| e.to_string())?;
        check(cone.checks.iter().all(|k| k.shifted_to_base), || "validation".into())?;
        check(cone.rank == a.rows(), || format!("rank {}", cone.rank))?;
        let literal = cone.checks.iter().filter(|k| k.base_to_shifted).count();
        notes.push(format!(
            "d={}: {} generators, rank {}, reverse direction holds for {literal}/{}",
            a.rows(),
            cone.generators.len(),
            cone.rank,
            cone.checks.len()
        ));
    }
    Ok(notes.join("; "))
}

fn cherednik_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut grid_points = 0;
    for m in 2..=4usize {
        for k in 0..200 {
            let h: Vec<Rational> = (0..m)
                .map(|_| {
                    if k % 2 == 0 {
                        rat(rng.gen_range(-2 * m as i64..=2 * m as i64), m as i64)
                    } else {
                        rat(rng.gen_range(-6..=6), rng.gen_range(1..=6))
                    }
                })
                .collect();
            let p = CherednikParams::new(m, h).map_err(|e| e.to_string())?;
            for i in 0..m {
                let exact = simple_dim(&p, i);
                check(delta_action(&p, i, 64).agrees_with(&exact), || format!("c_{i} at {p:?}"))?;
            }
            localization_verdict(&p).map_err(|e| e.to_string())?;
            grid_points += 1;
        }
    }
    for m in 2..=5usize {
        for _ in 0..20 {
            let h: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect();
            let p = CherednikParams::new(m, h).map_err(|e| e.to_string())?;
            let r = radial_parts_identity_check(&p, 0..=12);
            check(r.holds, || format!("radial parts at {p:?}, r = {:?}", r.failing_r))?;
        }
    }
    for m in 2..=3 {
        let w = wall_correspondence(m).map_err(|e| e.to_string())?;
        check(w.holds, || format!("wall correspondence m={m}: {w:?}"))?;
    }
    Ok(format!("{grid_points} grid points, 80 radial checks, walls for m = 2, 3"))
}

fn arrow_preorder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spaces: Vec<ParamSpace> = [(1usize, 2usize), (1, 3), (2, 3), (2, 4)]
        .iter()
        .map(|&(k, n)| ParamSpace::new(&d1_matrix(k, n)))
        .collect();
    let p = |v: i64| vec![ParamScalar::from_int(v)];
    let mut chained = 0;
    let mut reflexive = 0;
    for _ in 0..100 {
        let space = &spaces[rng.gen_range(0..spaces.len())];
        let (a, b, c) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        for v in [a, b, c] {
            reflexive += 1;
            check(space.chi_arrow(&p(v), &p(v)).map_err(|e| e.to_string())?.holds, || format!("reflexivity at {v}"))?;
        }
        let ab = space.chi_arrow(&p(a), &p(b)).map_err(|e| e.to_string())?.holds;
        let bc = space.chi_arrow(&p(b), &p(c)).map_err(|e| e.to_string())?.holds;
        if ab && bc {
            chained += 1;
            let ac = space.chi_arrow(&p(a), &p(c)).map_err(|e| e.to_string())?.holds;
            check(ac, || format!("transitivity fails on {a} -> {b} -> {c}"))?;
        }
    }
    Ok(format!("100 triples ({chained} with both premises), {reflexive} reflexivity checks"))
}

fn main() {
    let mut h = Harness { failed: Vec::new() };
    h.run(1, "d=1 closed form vs general Q-set", 10, d1_closed_form);
    h.run(2, "cyclic quiver walls and chambers", 1, cyclic_walls);
    h.run(3, "cyclic quiver unimodularity", 1, quiver_unimodular);
    h.run(4, "star product", 5, star_product);
    h.run(5, "quantized moment map identities", 2, moment_map_identities);
    h.run(6, "flatness certificate", 5, flatness);
    h.run(7, "covector oracle", 30, covector_oracle);
    h.run(8, "attachment oracle", 60, attachment_oracle);
    h.run(9, "shifting cone", 30, shifting_cone_criterion);
    h.run(10, "cherednik", 10, cherednik_criterion);
    h.run(11, "chi_arrow pre-order", 10, arrow_preorder);
    println!("acceptance: {}/11 passed", 11 - h.failed.len());
    if !h.failed.is_empty() {
        println!("failed: {:?}", h.failed);
        std::process::exit(1);
    }
}
