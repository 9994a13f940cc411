//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use skein_core::classical::{
    evaluate_at_point, random_points, specialize_poly, specialize_system, u_relators,
    SpinFunction,
};
use skein_core::hopf::{check_comodule, coinvariants, Bigon, Gauge};
use skein_core::linalg::solve_fraction_free;
use skein_core::mat::{c_inv_mat, c_mat, r_inv_mat, r_mat, tau_mat, Mat};
use skein_core::presentation::{ArcType, GeneratorArc, Presentation};
use skein_core::relator::{
    backsubstitute_exchange, build_rewrite_system, elimination_residues, eliminate_generator,
    exchange_relators, qdet_relator,
};
use skein_core::rewrite::{letter, reflection_theta, NcPoly, NcWord, RewriteSystem};
use skein_core::ring::Laurent;

fn report(n: u32, ok: bool, detail: &str) {
    println!(
        "acceptance {:2}: {} - {}",
        n,
        if ok { "PASS" } else { "FAIL" },
        detail
    );
    assert!(ok, "criterion {} failed: {}", n, detail);
}

const PP: u8 = 0;
const PM: u8 = 1;
const MP: u8 = 2;
const MM: u8 = 3;

#[test]
fn criterion_01_constant_identities() {
    let t = Instant::now();
    let c = c_mat();
    let ci = c_inv_mat();
    let mut ok = ci == c.scale(&(-&Laurent::a_pow(3)));
    ok &= c.mul(&ci) == Mat::identity(2) && ci.mul(&c) == Mat::identity(2);
    ok &= r_mat().mul(&r_inv_mat()) == Mat::identity(4);
    ok &= r_inv_mat().mul(&r_mat()) == Mat::identity(4);
    // 8x8 Yang-Baxter
    let i2 = Mat::identity(2);
    let r12 = r_mat().kronecker(&i2);
    let r23 = i2.kronecker(&r_mat());
    ok &= r12.mul(&r23).mul(&r12) == r23.mul(&r12).mul(&r23);
    // commutation of the Kronecker square of C^-1: exact with tau, and with
    // the braidings after composing with the flip (the dual-pairing matrix
    // of C^-1 (x) C^-1); the plain Kronecker square instead intertwines the
    // braiding with its mirror, which the test also verifies exactly
    let k = ci.kronecker(&ci);
    ok &= k.mul(&tau_mat()) == tau_mat().mul(&k);
    let kt = tau_mat().mul(&k);
    for m in [r_mat(), r_inv_mat(), tau_mat()] {
        ok &= kt.mul(&m) == m.mul(&kt);
    }
    let mirror = tau_mat().mul(&r_mat()).mul(&tau_mat());
    ok &= k.mul(&r_mat()) == mirror.mul(&k);
    report(
        1,
        ok,
        &format!(
            "constant identities exact, C-square commutation in the flip pairing ({:?})",
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_02_bigon_hopf_suite() {
    let t = Instant::now();
    let b = Bigon::new();
    let mut ok = true;
    for s in 0..4u8 {
        let x = NcPoly::from_letter(letter(0, s));
        let d = b.coproduct(&x).unwrap();
        // counit laws on both sides
        let mut left = NcPoly::zero();
        let mut right = NcPoly::zero();
        for ((u, v), cf) in &d {
            let eu = b.counit(&NcPoly::from_word(u.clone()));
            let ev = b.counit(&NcPoly::from_word(v.clone()));
            if !eu.is_zero() {
                left.add_term(v.clone(), &eu * cf);
            }
            if !ev.is_zero() {
                right.add_term(u.clone(), &ev * cf);
            }
        }
        ok &= left == x && right == x;
        // coassociativity
        let mut lhs = std::collections::BTreeMap::new();
        let mut rhs = std::collections::BTreeMap::new();
        for ((u, v), cf) in &d {
            for ((a, bb), c2) in b.coproduct(&NcPoly::from_word(u.clone())).unwrap() {
                let e = lhs.entry((a, bb, v.clone())).or_insert_with(Laurent::zero);
                *e = &*e + &(cf * &c2);
            }
            for ((a, bb), c2) in b.coproduct(&NcPoly::from_word(v.clone())).unwrap() {
                let e = rhs.entry((u.clone(), a, bb)).or_insert_with(Laurent::zero);
                *e = &*e + &(cf * &c2);
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        ok &= lhs == rhs;
        // antipode law m (S (x) id) Delta = eta eps and its mirror
        let mut acc1 = NcPoly::zero();
        let mut acc2 = NcPoly::zero();
        for ((u, v), cf) in &d {
            let su = b.antipode(&NcPoly::from_word(u.clone())).unwrap();
            let sv = b.antipode(&NcPoly::from_word(v.clone())).unwrap();
            acc1 = acc1.add(
                &b.system()
                    .multiply(&su, &NcPoly::from_word(v.clone()))
                    .unwrap()
                    .scale(cf),
            );
            acc2 = acc2.add(
                &b.system()
                    .multiply(&NcPoly::from_word(u.clone()), &sv)
                    .unwrap()
                    .scale(cf),
            );
        }
        let target = NcPoly::scalar(b.counit(&NcPoly::from_letter(letter(0, s))));
        ok &= b.normal_form(&acc1).unwrap() == target;
        ok &= b.normal_form(&acc2).unwrap() == target;
    }
    // X S(X) = S(X) X = identity as 2x2 matrices over the bigon
    for (i, j) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
        let mut fwd = NcPoly::zero();
        let mut bwd = NcPoly::zero();
        for k in 0..2usize {
            let x_ik = NcPoly::from_letter(letter(0, (2 * i + k) as u8));
            let x_kj = NcPoly::from_letter(letter(0, (2 * k + j) as u8));
            let s_kj = b.antipode(&x_kj).unwrap();
            let s_ik = b.antipode(&x_ik).unwrap();
            fwd = fwd.add(&x_ik.mul_free(&s_kj));
            bwd = bwd.add(&s_ik.mul_free(&x_kj));
        }
        let target = if i == j { NcPoly::one() } else { NcPoly::zero() };
        ok &= b.normal_form(&fwd).unwrap() == target;
        ok &= b.normal_form(&bwd).unwrap() == target;
    }
    report(2, ok, &format!("bigon Hopf axioms and X S(X) = S(X) X = 1 ({:?})", t.elapsed()));
}

fn theta_presentation() -> Presentation {
    // two boundary arcs joined by three parallel type-a arcs
    Presentation {
        boundary_arcs: vec!["u".into(), "v".into()],
        generators: (0..3)
            .map(|i| GeneratorArc {
                id: format!("e{}", i),
                source: (0, i),
                target: (1, -i),
                height: None,
            })
            .collect(),
        relations: vec![],
        spin: None,
    }
}

#[test]
fn criterion_03_relator_oracle() {
    let t = Instant::now();
    let mut ok = true;
    let mut pairs = 0;
    for p in [Presentation::daisy(1), Presentation::daisy(2), theta_presentation()] {
        for alpha in 0..p.generators.len() {
            for beta in 0..alpha {
                // derivation succeeds (coefficients denominator-free) and
                // back-substitution restores the case identity
                let d = exchange_relators(&p, alpha, beta).unwrap();
                ok &= backsubstitute_exchange(&d, alpha, beta);
                ok &= d.t_alpha.mul(&d.solution) == d.t_beta;
                pairs += 1;
            }
        }
    }
    report(
        3,
        ok,
        &format!("back-substitution on {} generator pairs ({:?})", pairs, t.elapsed()),
    );
}

#[test]
fn criterion_04_machine_diamond_lemma() {
    let mut ok = true;
    let mut details = String::new();
    for (name, p, budget_s) in [
        ("type-a", Presentation::bigon("x"), 1.0f64),
        ("type-d", Presentation::one_loop(), 1.0),
        ("daisy-1", Presentation::daisy(1), 10.0),
        ("daisy-2", Presentation::daisy(2), 60.0),
    ] {
        let t = Instant::now();
        let rs = build_rewrite_system(&p).unwrap();
        let rep = rs.certify_confluence().unwrap();
        let dt = t.elapsed();
        ok &= rep.is_confluent() && dt.as_secs_f64() < budget_s;
        details.push_str(&format!("{}: {} triples in {:?}; ", name, rep.critical_triples, dt));
    }
    // negative control: cancel the constant of a q-det-bearing relator
    let p = Presentation::one_loop();
    let good = build_rewrite_system(&p).unwrap();
    let rules: Vec<_> = good
        .rules()
        .map(|(&(a, b), rhs)| {
            let mut rhs = rhs.clone();
            if (a, b) == (letter(0, PM), letter(0, MP)) {
                rhs.add_term(NcWord::empty(), Laurent::a_pow(1));
            }
            ((a, b), rhs)
        })
        .collect();
    let bad = RewriteSystem::from_rules(p, rules).unwrap();
    let failures = bad.certify_confluence().unwrap().failures.len();
    ok &= failures >= 1;
    details.push_str(&format!("negative control: {} failures", failures));
    report(4, ok, &details);
}

#[test]
fn criterion_05_qdet_identities() {
    let t = Instant::now();
    let mut ok = true;
    // type d: a_mm a_pp - q^2 a_pm a_mp reduces to A for every generator
    let p = Presentation::daisy(2);
    let rs = build_rewrite_system(&p).unwrap();
    for rank in 0..p.generators.len() {
        assert_eq!(p.generators[rank].arc_type(), ArcType::D);
        let x = NcPoly::from_word(NcWord::pair(letter(rank, MM), letter(rank, PP))).sub(
            &NcPoly::from_term(
                NcWord::pair(letter(rank, PM), letter(rank, MP)),
                Laurent::q_pow(2),
            ),
        );
        ok &= rs.normal_form(&x).unwrap() == NcPoly::scalar(Laurent::a_pow(1));
        ok &= rs
            .normal_form(&qdet_relator(ArcType::D, rank, "d").unwrap())
            .unwrap()
            .is_zero();
    }
    // type c: a_pp a_mm - q^-2 a_mp a_pm reduces to A^-1
    let pc = Presentation::one_loop().height_flipped();
    let rsc = build_rewrite_system(&pc).unwrap();
    let x = NcPoly::from_word(NcWord::pair(letter(0, PP), letter(0, MM))).sub(&NcPoly::from_term(
        NcWord::pair(letter(0, MP), letter(0, PM)),
        Laurent::q_pow(-2),
    ));
    ok &= rsc.normal_form(&x).unwrap() == NcPoly::scalar(Laurent::a_pow(-1));
    ok &= rsc
        .normal_form(&qdet_relator(ArcType::C, 0, "c").unwrap())
        .unwrap()
        .is_zero();
    // type a
    let pa = Presentation::bigon("x");
    let rsa = build_rewrite_system(&pa).unwrap();
    ok &= rsa
        .normal_form(&qdet_relator(ArcType::A, 0, "x").unwrap())
        .unwrap()
        .is_zero();
    report(5, ok, &format!("trace and q-determinant identities exact ({:?})", t.elapsed()));
}

#[test]
fn criterion_06_reflection() {
    let t = Instant::now();
    let mut ok = true;
    let pd = Presentation::one_loop();
    let rsd = build_rewrite_system(&pd).unwrap();
    let pc = pd.height_flipped();
    let rsc = build_rewrite_system(&pc).unwrap();
    for r in rsd.relator_polys() {
        ok &= rsc.normal_form(&reflection_theta(&r)).unwrap().is_zero();
    }
    // anti-multiplicativity on 100 random word pairs: theta of a product
    // computed before and after reduction agree in the flipped system
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut rng = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..100 {
        let len_x = (rng() % 3 + 1) as usize;
        let len_y = (rng() % 3 + 1) as usize;
        let x = NcWord((0..len_x).map(|_| letter(0, (rng() % 4) as u8)).collect());
        let y = NcWord((0..len_y).map(|_| letter(0, (rng() % 4) as u8)).collect());
        let xp = NcPoly::from_word(x);
        let yp = NcPoly::from_word(y);
        let prod = rsd.multiply(&xp, &yp).unwrap();
        let lhs = rsc.normal_form(&reflection_theta(&prod)).unwrap();
        let rhs = rsc
            .normal_form(&reflection_theta(&yp).mul_free(&reflection_theta(&xp)))
            .unwrap();
        ok &= lhs == rhs;
    }
    report(6, ok, &format!("reflection maps (Rd) into (Rc), anti-multiplicative ({:?})", t.elapsed()));
}

#[test]
fn criterion_07_comodule_suite() {
    let t = Instant::now();
    let gauge = Gauge::new(&Presentation::daisy(1)).unwrap();
    let rep = check_comodule(&gauge).unwrap();
    let dt = t.elapsed();
    let ok = rep.ok() && dt.as_secs_f64() < 30.0;
    report(
        7,
        ok,
        &format!(
            "counit/coassociativity on all generators, coaction kills all {} relators ({:?})",
            gauge.rs.num_rules(),
            dt
        ),
    );
}

/// Independent rank oracle: plain fraction arithmetic over Q, written
/// without the Bareiss machinery, applied to the coaction-difference matrix
/// evaluated at a rational point.
fn rational_kernel_dim(rows: &[Vec<BigRational>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].clone().recip();
        for c in col..cols {
            let v = &m[rank][c] * &inv;
            m[rank][c] = v;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let v = &m[r][c] - &(&f * &m[rank][c]);
                    m[r][c] = v;
                }
            }
        }
        rank += 1;
    }
    cols - rank
}

#[test]
fn criterion_08_coinvariants() {
    let t = Instant::now();
    let p = Presentation::one_loop();
    let gauge = Gauge::new(&p).unwrap();
    let basis = coinvariants(&gauge, 2).unwrap();
    let mut ok = true;
    // membership of 1, y and y^2
    let mut y = NcPoly::zero();
    y.add_term(NcWord::single(letter(0, MP)), Laurent::omega(-1));
    y.add_term(NcWord::single(letter(0, PM)), -&Laurent::omega(-5));
    let y2 = gauge.rs.multiply(&y, &y).unwrap();
    for el in [NcPoly::one(), y.clone(), y2] {
        let img = gauge.coaction(&el).unwrap();
        ok &= img.sub(&gauge.times_unit(&el).unwrap()).is_zero();
        ok &= in_span(&gauge.rs, &basis, &el);
    }
    // independent kernel-dimension oracle at two rational points
    let mut words = Vec::new();
    for n in 0..=2 {
        words.extend(gauge.rs.normal_words(n));
    }
    let mut row_index = std::collections::BTreeMap::new();
    let mut entries: Vec<(usize, usize, Laurent)> = Vec::new();
    for (col, w) in words.iter().enumerate() {
        let x = NcPoly::from_word(w.clone());
        let img = gauge
            .coaction(&x)
            .unwrap()
            .sub(&gauge.times_unit(&x).unwrap());
        for (key, c) in &img.terms {
            let next = row_index.len();
            let r = *row_index.entry(key.clone()).or_insert(next);
            entries.push((r, col, c.clone()));
        }
    }
    for omega0 in ["3/2", "5/7"] {
        let w0 = BigRational::from_str(omega0).unwrap();
        let mut rows = vec![vec![BigRational::zero(); words.len()]; row_index.len()];
        for (r, c, v) in &entries {
            rows[*r][*c] = v.evaluate(&w0).unwrap();
        }
        let dim = rational_kernel_dim(&rows, words.len());
        ok &= dim == basis.len();
    }
    // products of kernel elements remain in the kernel span
    for u in &basis {
        for v in &basis {
            let prod = gauge.rs.multiply(u, v).unwrap();
            if prod.terms().all(|(w, _)| w.len() <= 2) {
                ok &= in_span(&gauge.rs, &basis, &prod);
            }
        }
    }
    let dt = t.elapsed();
    ok &= dt.as_secs_f64() < 10.0;
    report(
        8,
        ok,
        &format!("degree-2 kernel dim {} with independent oracle ({:?})", basis.len(), dt),
    );
}

fn in_span(rs: &RewriteSystem<Laurent>, basis: &[NcPoly<Laurent>], el: &NcPoly<Laurent>) -> bool {
    // exact membership over the PBW words via fraction-free solve
    let mut keys = std::collections::BTreeMap::new();
    let mut cols: Vec<Vec<(usize, Laurent)>> = Vec::new();
    for b in basis {
        let nf = rs.normal_form(b).unwrap();
        let mut col = Vec::new();
        for (w, c) in nf.terms() {
            let n = keys.len();
            col.push((*keys.entry(w.clone()).or_insert(n), c.clone()));
        }
        cols.push(col);
    }
    let target = rs.normal_form(el).unwrap();
    for (w, _) in target.terms() {
        if !keys.contains_key(w) {
            return false;
        }
    }
    let dim = keys.len();
    let n = cols.len();
    let mut t = Mat::zero(dim, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col {
            t.set(*r, c, v.clone());
        }
    }
    // choose n independent rows, solve, verify everywhere
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..dim {
        if chosen.len() == n {
            break;
        }
        let mut test = chosen.clone();
        test.push(r);
        let mut sub = Mat::zero(test.len(), n);
        for (i, &ri) in test.iter().enumerate() {
            for c in 0..n {
                sub.set(i, c, t.get(ri, c).clone());
            }
        }
        if skein_core::linalg::rank(&sub).unwrap() == test.len() {
            chosen = test;
        }
    }
    if chosen.len() < n {
        return false;
    }
    let mut tsq = Mat::zero(n, n);
    let mut b = Mat::zero(n, 1);
    let mut full = vec![Laurent::zero(); dim];
    for (w, c) in target.terms() {
        full[keys[w]] = c.clone();
    }
    for (i, &ri) in chosen.iter().enumerate() {
        for c in 0..n {
            tsq.set(i, c, t.get(ri, c).clone());
        }
        b.set(i, 0, full[ri].clone());
    }
    let Ok(sol) = solve_fraction_free(&tsq, &b) else {
        return false;
    };
    // coefficients may be genuine fractions; verify the combination over Q
    // by clearing denominators entrywise
    for r in 0..dim {
        let mut num = Laurent::zero();
        let mut den = Laurent::one();
        for c in 0..n {
            let e = &sol.entries[c][0];
            // num/den += t[r][c] * e.num / e.den
            let add_num = &(t.get(r, c) * &e.num) * &den;
            let new_den = &den * &e.den;
            num = &(&num * &e.den) + &add_num;
            den = new_den;
        }
        let expect = &full[r] * &den;
        if num != expect {
            return false;
        }
    }
    true
}

#[test]
fn criterion_09_classical_limit() {
    let t = Instant::now();
    let mut ok = true;
    let p = Presentation::daisy(1);
    let rs = build_rewrite_system(&p).unwrap();
    let one = BigRational::one();
    // all exchange relators become commutators at omega = 1
    let sp = specialize_system(&rs, &one).unwrap();
    for (&(a, b), rhs) in sp.rules() {
        if skein_core::rewrite::letter_arc(a) != skein_core::rewrite::letter_arc(b) {
            ok &= *rhs == NcPoly::from_word(NcWord::pair(b, a));
        }
    }
    // 100 random SL2(Q) points annihilate every specialized relator
    let w = SpinFunction::zero(&p);
    let relators = u_relators(&rs, &w).unwrap();
    let points = random_points(&p, 2024, 100);
    for rel in &relators {
        let spr = specialize_poly(rel, &one).unwrap();
        for pt in &points {
            ok &= evaluate_at_point(&spr, &p, pt).unwrap().is_zero();
        }
    }
    // triangle elimination: transported relators reduce to zero
    let tri = Presentation::triangle();
    for victim in ["alpha", "beta", "gamma"] {
        let elim = eliminate_generator(&tri, 0, victim).unwrap();
        let rs2 = build_rewrite_system(&elim.reduced).unwrap();
        let residues = elimination_residues(&tri, &elim, &rs2).unwrap();
        ok &= residues.iter().all(|r| r.is_zero());
        ok &= skein_core::relator::verify_relation_loop(&tri, 0).unwrap();
    }
    report(
        9,
        ok,
        &format!(
            "omega=1 commutators, {} points x {} relators vanish, triangle elimination ({:?})",
            points.len(),
            relators.len(),
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_10_graded_dimensions() {
    let t = Instant::now();
    let mut ok = true;
    // one generator: (n+1)^2
    let rs1 = build_rewrite_system(&Presentation::one_loop()).unwrap();
    let rsa = build_rewrite_system(&Presentation::bigon("x")).unwrap();
    for n in 0..=6usize {
        let expect = ((n + 1) * (n + 1)) as u128;
        ok &= rs1.graded_dimension(n) == expect;
        ok &= rsa.graded_dimension(n) == expect;
    }
    // multi-generator counts match the convolution of (n+1)^2
    let single: Vec<u128> = (0..=4).map(|n| ((n + 1) * (n + 1)) as u128).collect();
    let mut convolutions = vec![single.clone()];
    for _ in 1..3 {
        let prev = convolutions.last().unwrap();
        let mut next = vec![0u128; 5];
        for n in 0..=4usize {
            for k in 0..=n {
                next[n] += prev[n - k] * single[k];
            }
        }
        convolutions.push(next);
    }
    let two_gen = build_rewrite_system(&Presentation::daisy(1)).unwrap();
    let three_gen = build_rewrite_system(&theta_presentation()).unwrap();
    for n in 0..=4usize {
        ok &= two_gen.graded_dimension(n) == convolutions[1][n];
        ok &= three_gen.graded_dimension(n) == convolutions[2][n];
    }
    report(10, ok, &format!("PBW counts match the convolution oracle ({:?})", t.elapsed()));
}
