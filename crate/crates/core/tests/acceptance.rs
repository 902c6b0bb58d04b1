//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Reference values come from formulas implemented here independently of the
//! library (elementary symmetric functions, shoelace areas, Lagrange
//! interpolation) or from identities that must hold exactly.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valuations::normal_cycle::build_normal_cycle_with;
use valuations::product::{diagonal_power, slice_product, slice_product_left};
use valuations::valuation::default_probes;
use valuations::{
    alesker_product, euler, exterior_product, fubini_rhs, intrinsic_volumes, lambda_k, mc_integrate,
    mcmullen_decompose, nc_valuation, w_degree, AngleConfig, MultiPoly, PolyDensity, Polytope, Rational, RealValue,
    RngSpec, SliceQuadrature, ThetaTerm, ThetaValuation, Valuation,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64) -> Rational {
    Rational::from(n)
}
fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}
fn pts(raw: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
    raw.iter().map(|p| p.iter().map(|&(a, b)| r(a, b)).collect()).collect()
}
fn poly(raw: &[&[(i64, i64)]]) -> Polytope {
    Polytope::new(&pts(raw)).unwrap()
}
fn interval(a: Rational, b: Rational) -> Polytope {
    Polytope::segment(vec![a], vec![b]).unwrap()
}
fn term(c: Rational, f: MultiPoly, bodies: Vec<Polytope>) -> ThetaTerm {
    ThetaTerm::new(c, PolyDensity::new(f), bodies).unwrap()
}
fn theta(terms: Vec<ThetaTerm>) -> ThetaValuation {
    let n = terms[0].ambient_dim();
    ThetaValuation::new(n, terms).unwrap()
}
fn mono(exps: &[u32], c: Rational) -> MultiPoly {
    MultiPoly::monomial(exps.to_vec(), c)
}
fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
fn random_rational(g: &mut ChaCha8Rng, lo: i64, hi: i64, denom: i64) -> Rational {
    r(g.random_range(lo * denom..=hi * denom), denom)
}
fn random_full(g: &mut ChaCha8Rng, n: usize, count: usize, denom: i64) -> Polytope {
    loop {
        let v: Vec<Vec<Rational>> =
            (0..count).map(|_| (0..n).map(|_| random_rational(g, -1, 1, denom)).collect()).collect();
        let p = Polytope::new(&v).unwrap();
        if p.is_full_dimensional() {
            return p;
        }
    }
}
fn random_box(g: &mut ChaCha8Rng, n: usize) -> (Polytope, Vec<Rational>) {
    let lo: Vec<Rational> = (0..n).map(|_| random_rational(g, -2, 2, 6)).collect();
    let sides: Vec<Rational> = (0..n).map(|_| r(g.random_range(1..=24), g.random_range(1..=7))).collect();
    let hi: Vec<Rational> = lo.iter().zip(&sides).map(|(a, s)| a + s).collect();
    (Polytope::cuboid(&lo, &hi).unwrap(), sides)
}

/// `e_k(a)` by the product expansion `Π (1 + a_i z)`.
fn elementary_symmetric(a: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::one()];
    for x in a {
        let mut next = e.clone();
        next.push(Rational::zero());
        for k in 1..next.len() {
            next[k] = &e.get(k).cloned().unwrap_or_else(Rational::zero) + &(x * &e[k - 1]);
        }
        e = next;
    }
    e
}

/// Lagrange interpolation through `(t_i, v_i)`, returning monomial coefficients.
fn lagrange(ts: &[Rational], vs: &[Rational]) -> Vec<Rational> {
    let m = ts.len();
    let mut out = vec![Rational::zero(); m];
    for i in 0..m {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for j in 0..m {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c.clone();
                next[k] -= &(c * &ts[j]);
            }
            basis = next;
            denom *= &(&ts[i] - &ts[j]);
        }
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &vs[i] / denom.clone();
        }
    }
    out
}

/// Twice the signed area by the shoelace formula, vertices sorted by angle.
fn shoelace_area(p: &Polytope) -> Rational {
    let v: Vec<(f64, f64, Rational, Rational)> =
        p.vertices().iter().map(|x| (x[0].to_f64(), x[1].to_f64(), x[0].clone(), x[1].clone())).collect();
    let cx = v.iter().map(|x| x.0).sum::<f64>() / v.len() as f64;
    let cy = v.iter().map(|x| x.1).sum::<f64>() / v.len() as f64;
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| (v[a].1 - cy).atan2(v[a].0 - cx).total_cmp(&(v[b].1 - cy).atan2(v[b].0 - cx)));
    let mut twice = Rational::zero();
    for k in 0..order.len() {
        let (a, b) = (&v[order[k]], &v[order[(k + 1) % order.len()]]);
        twice += &(&a.2 * &b.3 - &b.2 * &a.3);
    }
    twice.abs() / q(2)
}

fn random_split(g: &mut ChaCha8Rng, p: &Polytope) -> (Polytope, Polytope, Polytope) {
    let n = p.ambient_dim();
    loop {
        let normal: Vec<Rational> = (0..n).map(|_| q(g.random_range(-3..=3))).collect();
        if normal.iter().all(Rational::is_zero) {
            continue;
        }
        let vals: Vec<Rational> =
            p.vertices().iter().map(|v| v.iter().zip(&normal).map(|(a, b)| a * b).sum()).collect();
        let lo = vals.iter().min().unwrap().clone();
        let hi = vals.iter().max().unwrap().clone();
        if lo == hi {
            continue;
        }
        let s = r(g.random_range(1..=7), 8);
        let offset = &lo + &(&(&hi - &lo) * &s);
        let (a, b) = p.split_by_hyperplane(&normal, &offset).unwrap();
        let mid = p.section(&normal, &offset).unwrap();
        return (a, b, mid);
    }
}

// Criterion 1.
fn box_intrinsic_volumes() -> Outcome {
    let mut g = rng(101);
    let mut checked = 0;
    for n in [2usize, 3] {
        for _ in 0..10 {
            let (b, sides) = random_box(&mut g, n);
            let got = intrinsic_volumes(&b).map_err(|e| e.to_string())?;
            let want = elementary_symmetric(&sides);
            for k in 0..=n {
                let exact = got[k].as_rational().ok_or(format!("V_{k} of {b:?} is not exact"))?;
                if exact != want[k] {
                    return Err(format!("V_{k} of {b:?}: {exact} != {}", want[k]));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} boxes, all V_k equal e_k(sides) exactly"))
}

// Criterion 2.
fn steiner_polygon() -> Outcome {
    let m = 360usize;
    let verts: Vec<Vec<Rational>> = (0..m)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / m as f64;
            vec![Rational::from_f64_dyadic(a.cos(), 40), Rational::from_f64_dyadic(a.sin(), 40)]
        })
        .collect();
    let disc = Polytope::new(&verts).map_err(|e| e.to_string())?;
    let square = Polytope::unit_cube(2);
    let ts: Vec<Rational> = (0..3).map(q).collect();
    let vs: Vec<Rational> = ts
        .iter()
        .map(|t| if t.is_zero() { square.volume() } else { square.minkowski_sum(&disc.scale(t)).unwrap().volume() })
        .collect();
    let c = lagrange(&ts, &vs);
    let polygon_gap = (std::f64::consts::PI - (m as f64 / 2.0) * (std::f64::consts::TAU / m as f64).sin()).abs();
    let bound = polygon_gap + 1e-9;
    let quad_err = (c[2].to_f64() - std::f64::consts::PI).abs();
    if quad_err > bound || bound > 2e-4 {
        return Err(format!("t^2 coefficient {} off pi by {quad_err:e} > {bound:e}", c[2].to_f64()));
    }
    if c[0] != q(1) {
        return Err(format!("constant coefficient {} != 1", c[0]));
    }
    if c[1] != q(4) {
        return Err(format!("linear coefficient {} != 4", c[1]));
    }
    let v1 = intrinsic_volumes(&square).map_err(|e| e.to_string())?[1].to_f64();
    if (c[1].to_f64() - 2.0 * v1).abs() > bound {
        return Err(format!("linear coefficient {} disagrees with perimeter {}", c[1], 2.0 * v1));
    }
    Ok(format!("t^2 coefficient within {quad_err:.2e} of pi (bound {bound:.2e}); linear coefficient 4 = perimeter"))
}

/// Battery of Θ-valuations in dimensions 1 and 2.
fn battery_1d() -> Vec<(&'static str, ThetaValuation)> {
    let x = MultiPoly::var(1, 0);
    let unit = interval(q(0), q(1));
    vec![
        ("chi", euler(1)),
        ("length", ThetaValuation::lebesgue(1)),
        ("moment", ThetaValuation::density(PolyDensity::new(x.clone()))),
        ("quad_body", theta(vec![term(q(1), &mono(&[2], q(1)) + &MultiPoly::one(1), vec![unit.clone()])])),
        (
            "two_bodies",
            theta(vec![
                term(q(2), x.clone(), vec![interval(q(0), q(2))]),
                term(q(1), MultiPoly::one(1), vec![interval(q(-1), q(1))]),
            ]),
        ),
        ("mixed_degree", euler(1).scale(&r(1, 2)).add(&ThetaValuation::lebesgue(1).scale(&q(-1))).unwrap()),
    ]
}

fn battery_2d() -> Vec<(&'static str, ThetaValuation)> {
    let sq = Polytope::unit_cube(2);
    let tri = Polytope::standard_simplex(2);
    let diag = poly(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 1)]]);
    let e1 = poly(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)]]);
    let e2 = poly(&[&[(0, 1), (0, 1)], &[(0, 1), (1, 2)]]);
    vec![
        ("chi", euler(2)),
        ("area", ThetaValuation::lebesgue(2)),
        ("square_mixed", theta(vec![term(q(1), MultiPoly::one(2), vec![sq.clone()])])),
        ("moment_diag", theta(vec![term(q(1), MultiPoly::var(2, 0), vec![diag])])),
        ("two_body", theta(vec![term(q(1), &MultiPoly::one(2) + &MultiPoly::var(2, 1), vec![tri, sq])])),
        (
            "segments",
            theta(vec![term(q(1), MultiPoly::one(2), vec![e1, e2])]).add(&ThetaValuation::lebesgue(2)).unwrap(),
        ),
    ]
}

fn probes_2d() -> Vec<Polytope> {
    let mut g = rng(303);
    let family: Vec<Polytope> = default_probes(2).into_iter().map(|p| p.body).collect();
    let mut out: Vec<Polytope> = family.iter().step_by(5).cloned().collect();
    out.push(random_full(&mut g, 2, 5, 4));
    out
}

fn probes_1d() -> Vec<Polytope> {
    default_probes(1).into_iter().map(|p| p.body).collect()
}

// Criterion 3.
fn algebra_laws() -> Outcome {
    let mut checks = 0usize;
    for (battery, probes, chi) in [(battery_1d(), probes_1d(), euler(1)), (battery_2d(), probes_2d(), euler(2))] {
        for (name, phi) in &battery {
            let unit = alesker_product(&chi, phi).map_err(|e| e.to_string())?;
            for k in &probes {
                let (a, b) =
                    (unit.evaluate(k).map_err(|e| e.to_string())?, phi.evaluate(k).map_err(|e| e.to_string())?);
                if a != b {
                    return Err(format!("chi*{name} on {k:?}: {a} != {b}"));
                }
                checks += 1;
            }
        }
        for i in 0..battery.len() {
            let j = (i + 1) % battery.len();
            let (na, a) = &battery[i];
            let (nb, b) = &battery[j];
            let ab = alesker_product(a, b).unwrap();
            let ba = alesker_product(b, a).unwrap();
            for k in &probes {
                let (x, y) = (ab.evaluate(k).map_err(|e| e.to_string())?, ba.evaluate(k).map_err(|e| e.to_string())?);
                if x != y {
                    return Err(format!("{na}*{nb} on {k:?}: {x} != {y}"));
                }
                checks += 1;
            }
        }
    }
    // Associativity in dimension 1, by three independent routes.
    let b = battery_1d();
    let triples = [(0, 1, 2), (2, 3, 1), (3, 4, 0), (4, 2, 3), (5, 3, 2), (1, 2, 4)];
    let bodies = [interval(q(0), q(1)), interval(r(-1, 2), r(3, 2)), interval(r(1, 3), q(2))];
    let rule = SliceQuadrature::default();
    for &(i, j, k) in &triples {
        let (phi, psi, rho) = (&b[i].1, &b[j].1, &b[k].1);
        let left = alesker_product(phi, psi).unwrap();
        let right = alesker_product(psi, rho).unwrap();
        let triple = exterior_product(&exterior_product(phi, psi), rho);
        for body in &bodies {
            let lhs = slice_product(&left, rho, body, rule).map_err(|e| e.to_string())?;
            let rhs = slice_product_left(phi, &right, body, rule).map_err(|e| e.to_string())?;
            let direct = triple.evaluate(&diagonal_power(body, 3)).map_err(|e| e.to_string())?;
            if lhs.value != rhs.value || lhs.value != direct {
                return Err(format!(
                    "({}*{})*{} on {body:?}: {} vs {} vs {direct}",
                    b[i].0, b[j].0, b[k].0, lhs.value, rhs.value
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} exact identities (unit, commutativity, {} associativity triples)", triples.len()))
}

/// `n - s` where `s` is the largest body count over the terms.
fn filtration_lower_bound(phi: &ThetaValuation) -> usize {
    phi.ambient_dim().saturating_sub(phi.max_body_count())
}

// Criterion 4.
fn filtration_compatibility() -> Outcome {
    let mut pairs = 0;
    for battery in [battery_1d(), battery_2d()] {
        let n = battery[0].1.ambient_dim();
        let probes = default_probes(n);
        for i in 0..battery.len() {
            for j in i..battery.len() {
                if n == 2 && (j - i) > 1 {
                    continue;
                }
                let (na, a) = &battery[i];
                let (nb, b) = &battery[j];
                let prod = alesker_product(a, b).unwrap();
                let lower = filtration_lower_bound(a) + filtration_lower_bound(b);
                let d = w_degree(&prod, &probes).map_err(|e| e.to_string())?;
                if d < lower.min(prod.t_degree_bound() + 1) {
                    return Err(format!("w_degree({na}*{nb}) = {d} < {lower}"));
                }
                pairs += 1;
            }
        }
    }
    let vol = ThetaValuation::lebesgue(1);
    let sq = alesker_product(&vol, &vol).unwrap();
    let probes = default_probes(1);
    for p in &probes {
        let v = sq.evaluate(&p.body).map_err(|e| e.to_string())?;
        if !v.is_zero() {
            return Err(format!("length*length on {:?} = {v}", p.body));
        }
    }
    if w_degree(&sq, &probes).unwrap() != sq.t_degree_bound() + 1 {
        return Err("length*length has a nonzero scaling curve".into());
    }
    Ok(format!("{pairs} pairs meet the summed lower bound; length*length vanishes on all {} probes", probes.len()))
}

fn random_theta(g: &mut ChaCha8Rng, n: usize, s: usize, terms: usize) -> ThetaValuation {
    let ts = (0..terms)
        .map(|_| {
            let mut f = MultiPoly::constant(n, random_rational(g, -2, 2, 3));
            for _ in 0..2 {
                let exps: Vec<u32> = (0..n).map(|_| g.random_range(0..=1)).collect();
                f = &f + &mono(&exps, random_rational(g, -2, 2, 2));
            }
            let bodies = (0..s).map(|_| random_full(g, n, n + 2, 2)).collect();
            term(random_rational(g, -2, 2, 2), f, bodies)
        })
        .collect();
    theta(ts)
}

// Criterion 5.
fn theta_filtration_placement() -> Outcome {
    let mut g = rng(505);
    let mut count = 0;
    for n in [1usize, 2] {
        let probes = default_probes(n);
        for s in 0..=n {
            for _ in 0..2 {
                let phi = random_theta(&mut g, n, s, 2);
                let d = w_degree(&phi, &probes).map_err(|e| e.to_string())?;
                if d < n - s {
                    return Err(format!("n={n}, s={s}: w_degree {d}"));
                }
                let x: Vec<Rational> = (0..n).map(|_| random_rational(&mut g, -1, 1, 3)).collect();
                let lam = lambda_k(&phi, n - s, &x).map_err(|e| e.to_string())?;
                for p in probes.iter().step_by(7) {
                    let k = &p.body;
                    let base = lam.evaluate(k).map_err(|e| e.to_string())?;
                    let shift: Vec<Rational> = (0..n).map(|i| r(2 * i as i64 - 1, 5)).collect();
                    if lam.evaluate(&k.translate(&shift).unwrap()).unwrap() != base {
                        return Err(format!("degree-{} part not translation invariant on {k:?}", n - s));
                    }
                    for t in [2i64, 3] {
                        let scaled = lam.evaluate(&k.scale(&q(t))).unwrap();
                        if scaled != &base * &q(t).pow((n - s) as u32) {
                            return Err(format!("degree-{} part not homogeneous on {k:?}", n - s));
                        }
                    }
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} random valuations certified; leading parts invariant and homogeneous"))
}

/// `φ` with `s` bodies in every term.
fn uniform_theta(g: &mut ChaCha8Rng, s: usize) -> ThetaValuation {
    random_theta(g, 2, s, 2)
}

// Criterion 6.
fn graded_compatibility() -> Outcome {
    let mut g = rng(606);
    let configs = [(1usize, 1usize), (2, 1), (1, 2), (2, 2), (2, 0), (1, 1)];
    let probes = probes_2d();
    let mut checks = 0;
    for (c, &(s1, s2)) in configs.iter().enumerate() {
        let phi = uniform_theta(&mut g, s1);
        let psi = uniform_theta(&mut g, s2);
        let (i, j) = (2 - s1, 2 - s2);
        let x: Vec<Rational> = (0..2).map(|_| random_rational(&mut g, -1, 1, 4)).collect();
        let prod = alesker_product(&phi, &psi).unwrap();
        let lead = lambda_k(&prod, i + j, &x).map_err(|e| e.to_string())?;
        let frozen = alesker_product(&phi.frozen_at(&x).unwrap(), &psi.frozen_at(&x).unwrap()).unwrap();
        for k in probes.iter().take(4) {
            let a = lead.evaluate(k).map_err(|e| e.to_string())?;
            let b = frozen.evaluate(k).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("configuration {c} (i={i}, j={j}) on {k:?}: {a} != {b}"));
            }
            checks += 1;
        }
    }
    Ok(format!("{} configurations, {checks} exact evaluations", configs.len()))
}

// Criterion 7.
fn fubini_slices() -> Outcome {
    let x = MultiPoly::var(1, 0);
    let one = MultiPoly::one(1);
    let unit = interval(q(0), q(1));
    let configs: Vec<(ThetaTerm, ThetaTerm, Polytope)> = vec![
        (term(q(1), one.clone(), vec![]), term(q(1), one.clone(), vec![]), Polytope::unit_cube(2)),
        (term(q(1), one.clone(), vec![]), term(q(1), one.clone(), vec![unit.clone()]), Polytope::unit_cube(2)),
        (term(q(1), x.clone(), vec![]), term(q(1), one.clone(), vec![]), Polytope::unit_cube(2)),
        (
            term(q(2), &x + &one, vec![unit.clone()]),
            term(q(1), x.clone(), vec![]),
            poly(&[&[(0, 1), (0, 1)], &[(2, 1), (1, 2)], &[(1, 2), (3, 2)]]),
        ),
        (
            term(q(1), mono(&[2], q(1)), vec![]),
            term(r(1, 2), one.clone(), vec![interval(q(-1), q(1))]),
            poly(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(3, 2), (1, 1)], &[(0, 1), (2, 1)]]),
        ),
        (
            term(q(1), one.clone(), vec![unit.clone()]),
            term(q(1), &x + &mono(&[2], q(1)), vec![unit.clone()]),
            poly(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 3)], &[(1, 3), (1, 1)]]),
        ),
    ];
    let mut worst = 0.0f64;
    for (c, (w, gt, k)) in configs.iter().enumerate() {
        let ext = exterior_product(&ThetaValuation::single(w.clone()), &ThetaValuation::single(gt.clone()));
        let exact = ext.evaluate(k).map_err(|e| e.to_string())?;
        let est = fubini_rhs(w, gt, k, SliceQuadrature::default()).map_err(|e| e.to_string())?;
        let diff = (&exact - &est.value).abs();
        let scale = exact.abs().to_f64().max(1.0);
        if diff > est.error_bound || est.error_bound.to_f64() > 1e-6 * scale {
            return Err(format!("configuration {c}: exterior {exact}, slices {} ± {}", est.value, est.error_bound));
        }
        worst = worst.max(diff.to_f64() / scale);
    }
    let expected = [q(1), q(1), r(1, 2)];
    for (c, want) in expected.iter().enumerate() {
        let (w, gt, k) = &configs[c];
        let got = fubini_rhs(w, gt, k, SliceQuadrature::default()).unwrap().value;
        if &got != want {
            return Err(format!("documented configuration {c}: {got} != {want}"));
        }
    }
    Ok(format!("{} configurations; worst relative discrepancy {worst:e}", configs.len()))
}

fn real_identity(whole: &RealValue, parts: &RealValue) -> bool {
    match (whole.as_exact(), parts.as_exact()) {
        (Some(a), Some(b)) => a == b,
        _ => (whole.to_f64() - parts.to_f64()).abs() <= 1e-9,
    }
}

// Criterion 8.
fn valuation_identity() -> Outcome {
    let mut g = rng(808);
    let mut splits = [0usize; 3];
    let thetas = battery_2d();
    for trial in 0..24 {
        let p = random_full(&mut g, 2, 4 + trial % 3, 4);
        let (a, b, mid) = random_split(&mut g, &p);
        let (_, phi) = &thetas[trial % thetas.len()];
        let e = |k: &Polytope| phi.evaluate(k).unwrap();
        if e(&p) != &(&e(&a) + &e(&b)) - &e(&mid) {
            return Err(format!("theta valuation identity fails on {p:?}"));
        }
        splits[0] += 1;
    }
    let b1 = battery_1d();
    let b2 = battery_2d();
    for trial in 0..24 {
        let (p, prod) = if trial % 3 == 0 {
            let prod = alesker_product(&b2[trial % 4].1, &b2[(trial + 1) % 4].1).unwrap();
            (random_full(&mut g, 2, 3, 3), prod)
        } else {
            let prod = alesker_product(&b1[trial % b1.len()].1, &b1[(trial * 5 + 1) % b1.len()].1).unwrap();
            (interval(random_rational(&mut g, -2, 0, 3), random_rational(&mut g, 1, 3, 3)), prod)
        };
        let (a, b, mid) = random_split(&mut g, &p);
        let e = |k: &Polytope| prod.evaluate(k).unwrap();
        if e(&p) != &(&e(&a) + &e(&b)) - &e(&mid) {
            return Err(format!("product valuation identity fails on {p:?}"));
        }
        splits[1] += 1;
    }
    let specs = [
        vec![(0usize, MultiPoly::one(2))],
        vec![(1, MultiPoly::one(2))],
        vec![(1, MultiPoly::var(2, 0)), (2, MultiPoly::var(2, 1))],
        vec![(0, MultiPoly::var(2, 1)), (1, &MultiPoly::one(2) + &MultiPoly::var(2, 0))],
    ];
    for trial in 0..24 {
        let nc = nc_valuation(2, specs[trial % specs.len()].clone()).unwrap();
        let p = if trial % 4 == 0 { random_box(&mut g, 2).0 } else { random_full(&mut g, 2, 4, 4) };
        let (a, b, mid) = random_split(&mut g, &p);
        let parts = nc.evaluate(&a).unwrap().add(&nc.evaluate(&b).unwrap()).sub(&nc.evaluate(&mid).unwrap());
        let whole = nc.evaluate(&p).unwrap();
        if !real_identity(&whole, &parts) {
            return Err(format!("curvature valuation identity fails on {p:?}: {whole} vs {parts}"));
        }
        splits[2] += 1;
    }
    Ok(format!("splits checked: {} theta, {} product, {} curvature", splits[0], splits[1], splits[2]))
}

// Criterion 9.
fn density_recovery() -> Outcome {
    let mut g = rng(909);
    let densities = vec![
        MultiPoly::one(2),
        MultiPoly::var(2, 0),
        mono(&[1, 1], q(3)),
        &mono(&[2, 0], r(1, 2)) + &mono(&[0, 1], q(-2)),
        &(&mono(&[1, 2], q(1)) + &mono(&[3, 0], r(-1, 3))) + &MultiPoly::constant(2, q(5)),
        mono(&[0, 4], q(1)),
    ];
    let bodies = [
        Polytope::unit_cube(2),
        poly(&[&[(0, 1), (0, 1)], &[(3, 1), (1, 2)], &[(1, 1), (2, 1)]]),
        random_full(&mut g, 2, 6, 4),
    ];
    let mut count = 0;
    for f in &densities {
        let phi = ThetaValuation::density(PolyDensity::new(f.clone()));
        let x: Vec<Rational> = (0..2).map(|_| random_rational(&mut g, -2, 2, 5)).collect();
        let lam = lambda_k(&phi, 2, &x).map_err(|e| e.to_string())?;
        let fx = f.eval(&x).unwrap();
        for k in &bodies {
            let want = &fx * &shoelace_area(k);
            let got = lam.evaluate(k).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("density {f} at {x:?} on {k:?}: {got} != {want}"));
            }
            count += 1;
        }
    }
    Ok(format!("{} densities, {count} exact comparisons with F(x) * area", densities.len()))
}

// Criterion 10.
fn mcmullen_components() -> Outcome {
    let mut g = rng(1010);
    let mut count = 0;
    for n in [1usize, 2, 3] {
        let cube = Polytope::unit_cube(n);
        let tests: Vec<ThetaValuation> = match n {
            1 => vec![euler(1), ThetaValuation::lebesgue(1).add(&euler(1).scale(&q(3))).unwrap()],
            2 => vec![
                euler(2).scale(&q(2)).add(&ThetaValuation::lebesgue(2)).unwrap(),
                theta(vec![term(q(1), MultiPoly::one(2), vec![Polytope::standard_simplex(2)])]).add(&euler(2)).unwrap(),
            ],
            _ => vec![theta(vec![term(r(1, 2), MultiPoly::one(3), vec![cube.clone(), cube.clone()])])
                .add(&ThetaValuation::lebesgue(3))
                .unwrap()],
        };
        for phi in &tests {
            for k in [random_full(&mut g, n, n + 2, 3), cube.clone()] {
                let comps = mcmullen_decompose(phi, &k).map_err(|e| e.to_string())?;
                let total: Rational = comps.iter().sum();
                if total != phi.evaluate(&k).unwrap() {
                    return Err(format!("components of {k:?} do not sum to the value"));
                }
                for t in [2i64, 3] {
                    let scaled = mcmullen_decompose(phi, &k.scale(&q(t))).unwrap();
                    for (j, (a, b)) in scaled.iter().zip(&comps).enumerate() {
                        if a != &(b * &q(t).pow(j as u32)) {
                            return Err(format!("component {j} not {j}-homogeneous on {k:?}"));
                        }
                    }
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} decompositions homogeneous and summing to the value"))
}

// Criterion 11.
fn vertex_angle_sums() -> Outcome {
    let mut g = rng(1111);
    let cfg = AngleConfig::default();
    for n in [2usize, 3] {
        for _ in 0..5 {
            let (b, _) = random_box(&mut g, n);
            let cycle = build_normal_cycle_with(&b, &cfg).map_err(|e| e.to_string())?;
            let sum = cycle.components_of_dim(0).fold(RealValue::zero(), |acc, c| acc.add(&c.angle.value));
            if sum.as_rational() != Some(q(1)) {
                return Err(format!("box vertex angles sum to {sum}"));
            }
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let s = random_full(&mut g, 3, 4, 4);
        let cycle = build_normal_cycle_with(&s, &cfg).map_err(|e| e.to_string())?;
        let sum: f64 = cycle.components_of_dim(0).map(|c| c.angle.value.to_f64()).sum();
        worst = worst.max((sum - 1.0).abs());
        if (sum - 1.0).abs() > 1e-9 {
            return Err(format!("3-simplex vertex angles sum to {sum}"));
        }
    }
    let simplex4 = random_full(&mut g, 4, 5, 3);
    let cycle = build_normal_cycle_with(&simplex4, &cfg).map_err(|e| e.to_string())?;
    let (mut sum, mut var) = (0.0, 0.0);
    for c in cycle.components_of_dim(0) {
        if let RealValue::Approx { value, std_error, .. } = c.angle.value {
            sum += value;
            var += std_error * std_error;
        } else {
            sum += c.angle.value.to_f64();
        }
    }
    let sigma = var.sqrt();
    if (sum - 1.0).abs() > 4.0 * sigma {
        return Err(format!("4-simplex vertex angles sum to {sum} (sigma {sigma:e})"));
    }
    Ok(format!("boxes exact; 3-simplices within {worst:.1e}; 4-simplex {sum:.5} with sigma {sigma:.1e}"))
}

// Criterion 12.
fn oracle_concordance() -> Outcome {
    let mut g = rng(1212);
    let mut cases: Vec<(PolyDensity, Polytope)> = Vec::new();
    for c in 0..20 {
        let n = 2 + c % 2;
        let p = if c % 5 == 0 { random_box(&mut g, n).0 } else { random_full(&mut g, n, n + 3, 4) };
        let mut f = MultiPoly::constant(n, q(1));
        if c % 4 != 0 {
            let exps: Vec<u32> = (0..n).map(|_| g.random_range(0..=2)).collect();
            f = &f + &mono(&exps, r(g.random_range(1..=3), 2));
        }
        cases.push((PolyDensity::new(f), p));
    }
    let samples = 20_000;
    let mut inside2 = vec![0usize; cases.len()];
    for (c, (mu, p)) in cases.iter().enumerate() {
        let exact = valuations::integrate(mu, p).unwrap().to_f64();
        let first = mc_integrate(mu, p, samples, &RngSpec::new(0)).map_err(|e| e.to_string())?;
        if !first.agrees(exact, 4.0) {
            return Err(format!("case {c}: exact {exact} vs {} ± {}", first.estimate, first.std_error));
        }
        for seed in 1..=20u64 {
            let est = mc_integrate(mu, p, samples, &RngSpec::new(seed)).unwrap();
            if est.agrees(exact, 2.0) {
                inside2[c] += 1;
            }
        }
    }
    let min = *inside2.iter().min().unwrap();
    if min < 17 {
        let c = inside2.iter().position(|&k| k == min).unwrap();
        return Err(format!("case {c}: only {min}/20 seeds inside 2 sigma"));
    }
    Ok(format!("20 cases inside 4 sigma; every case has >= {min}/20 seeds inside 2 sigma"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("box intrinsic volumes", box_intrinsic_volumes),
        ("steiner polynomial of square plus polygon", steiner_polygon),
        ("unit, commutativity, associativity", algebra_laws),
        ("filtration compatibility of products", filtration_compatibility),
        ("filtration placement of theta valuations", theta_filtration_placement),
        ("graded compatibility of leading terms", graded_compatibility),
        ("exterior product via slice integrals", fubini_slices),
        ("valuation identity under splits", valuation_identity),
        ("density recovery from top scaling term", density_recovery),
        ("homogeneous decomposition", mcmullen_components),
        ("vertex external angles sum to one", vertex_angle_sums),
        ("monte-carlo concordance", oracle_concordance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
