//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use num_complex::Complex64;
use num_rational::Rational64;
use qhj::catalog::{list_models, model_from_pairs, Model, ModelId};
use qhj::exact::{QComplex, Scalar};
use qhj::oracle::verify::{compare_states, verify_model, verify_spectrum, VerifyOptions, VerifyReport, OVERLAP_MIN};
use qhj::quantization::{quantize, RejectReason};
use qhj::residues::finite_pole_residues;
use qhj::special::{elliptic_k, jacobi_sn_cn_dn, laguerre};
use qhj::spectrum::{qes_family, solve_spectrum, SolveOptions, Spectrum};
use qhj::wavefunction::Normalization;
use std::collections::BTreeMap;
use std::time::Instant;

const ANALYTIC_TOL: f64 = 1e-10;
const ODE_TOL: f64 = 1e-8;
const ELLIPTIC_TOL: f64 = 1e-12;
const PAIR_TOL: f64 = 1e-8;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(id: ModelId, p: &[(&str, f64)]) -> Result<Model, String> {
    model_from_pairs(id, p).map_err(|e| format!("{id} {p:?}: {e}"))
}

fn solve(m: &Model, levels: u32) -> Result<Spectrum, String> {
    solve_spectrum(m, SolveOptions { levels }).map_err(|e| format!("{}: {e}", m.id))
}

fn verify(m: &Model, tol: f64, levels: u32) -> Result<VerifyReport, String> {
    let r = verify_model(m, VerifyOptions { tol: Some(tol), levels: Some(levels) }).map_err(|e| format!("{}: {e}", m.id))?;
    ensure(r.pass, || {
        let bad: Vec<String> = r
            .rows
            .iter()
            .filter(|row| !row.pass)
            .map(|row| format!("n={} E={:?} delta={:.2e} note={:?}", row.n, row.analytic, row.delta, row.note))
            .collect();
        format!("{} oracle failed: {}", m.id, bad.join("; "))
    })?;
    Ok(r)
}

fn energies(s: &Spectrum) -> Vec<Complex64> {
    s.lines.iter().map(|l| l.energy.value).collect()
}

/// Every expected value is matched by a distinct computed one.
fn same_multiset(got: &[Complex64], want: &[Complex64], tol: f64) -> Check {
    ensure(got.len() == want.len(), || format!("expected {} values, got {}: {got:?}", want.len(), got.len()))?;
    let mut used = vec![false; got.len()];
    for w in want {
        let hit = (0..got.len()).find(|&i| !used[i] && (got[i] - w).norm() <= tol * w.norm().max(1.0));
        match hit {
            Some(i) => used[i] = true,
            None => return Err(format!("missing {w} in {got:?}")),
        }
    }
    Ok(())
}

fn exact(r: Rational64) -> QComplex {
    QComplex::real(r)
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn hydrogen() -> Check {
    for l in [0i64, 1] {
        let m = model(ModelId::Hydrogen, &[("e2", 2.0), ("l", l as f64)])?;
        let s = solve(&m, 4)?;
        ensure(s.lines.len() == 4, || format!("l={l}: {} lines", s.lines.len()))?;
        for line in &s.lines {
            let n = line.n() as i64;
            // e^4 = 4
            let want = q(-1, (n + l + 1).pow(2)) + q(1, (l + 1).pow(2));
            ensure(line.energy.exact == Some(exact(want)), || format!("l={l} n={n}: {:?} != {want}", line.energy.exact))?;
            let kappa = 1.0 / (n + l + 1) as f64;
            let xs: Vec<f64> = (1..=600).map(|i| i as f64 * 0.05 / kappa).collect();
            let analytic = line.recipe.sample_at(&xs, Normalization::SupNormOne).map_err(|e| e.to_string())?;
            let reference: Vec<Complex64> = xs
                .iter()
                .map(|&r| Complex64::new(r.powi(l as i32 + 1) * (-kappa * r).exp() * laguerre(n as usize, (2 * l + 1) as f64, 2.0 * kappa * r), 0.0))
                .collect();
            let ov = compare_states(&analytic.values, &[&reference], true).overlap.unwrap_or(0.0);
            ensure(ov >= OVERLAP_MIN, || format!("l={l} n={n}: Laguerre overlap {ov}"))?;
        }
        let r = verify(&m, 2e-4, 4)?;
        ensure(r.rows.iter().all(|row| row.overlap.is_some_and(|o| o >= OVERLAP_MIN)), || "oracle overlap".into())?;
    }
    Ok(())
}

fn scarf1() -> Check {
    let cases: [((f64, f64, f64), [Rational64; 2], fn(i64) -> Rational64); 2] = [
        // b1 = (A-B)/2 + 1/4, b1' = (A+B)/2 + 1/4 ; E = (A + n)^2 - A^2
        ((2.0, 0.5, 1.0), [q(1, 1), q(3, 2)], |n| q((2 + n) * (2 + n) - 4, 1)),
        // b1 = (A-B)/2 + 1/4, b1' = -(A+B)/2 + 3/4 ; E = (B - (n + 1/2))^2 - A^2
        ((2.0, -3.0, 1.0), [q(11, 4), q(5, 4)], |n| {
            let b = q(-3, 1) - q(2 * n + 1, 2);
            b * b - q(4, 1)
        }),
    ];
    for ((a, b, alpha), residues, energy) in cases {
        let m = model(ModelId::Scarf1, &[("A", a), ("B", b), ("alpha", alpha)])?;
        let qz = quantize(&m, 4).map_err(|e| e.to_string())?;
        ensure(qz.admissible.len() == 4, || format!("A={a} B={b}: {} assignments", qz.admissible.len()))?;
        for asg in &qz.admissible {
            let got: Vec<Option<QComplex>> = asg.residues.iter().map(|r| r.exact).collect();
            let want: Vec<Option<QComplex>> = residues.iter().map(|&r| Some(exact(r))).collect();
            ensure(got == want, || format!("A={a} B={b}: residues {got:?}, expected {want:?}"))?;
        }
        let s = solve(&m, 4)?;
        for line in &s.lines {
            let want = energy(line.n() as i64);
            ensure(line.energy.exact == Some(exact(want)), || format!("A={a} B={b} n={}: {:?} != {want}", line.n(), line.energy.exact))?;
        }
        verify(&m, 2e-4, 4)?;
    }
    Ok(())
}

fn scarf_periodic() -> Check {
    let s = 0.3;
    let m = model(ModelId::ScarfPeriodic, &[("s", s)])?;
    let spec = solve(&m, 4)?;
    let want: Vec<Complex64> = (0..4)
        .flat_map(|n| [-1.0, 1.0].map(|sg| Complex64::new((n as f64 + 0.5 + sg * s).powi(2), 0.0)))
        .collect();
    same_multiset(&energies(&spec), &want, ANALYTIC_TOL)?;
    verify(&m, 5e-4, 4)?;
    let qz = quantize(&m, 4).map_err(|e| e.to_string())?;
    let mut labels: Vec<u8> = qz.admissible.iter().filter_map(|a| a.set_label).collect();
    labels.sort();
    labels.dedup();
    ensure(labels == [1, 2], || format!("admissible sets {labels:?}"))?;
    ensure(qz.rejected.iter().any(|r| r.reason == RejectReason::BranchInconsistent), || "branch (1+lambda)/2 not rejected".into())?;
    for a in &qz.admissible {
        // b1 = b1' = (1 - lambda)/2 with lambda = sqrt(E) > 0
        let lambda = a.energy.ok_or("energy not fixed by the assignment")?.value.sqrt();
        ensure(lambda.re > 0.0 && a.residues.iter().all(|r| (r.value - (1.0 - lambda) / 2.0).norm() < 1e-12), || {
            format!("set {:?}: residues {:?} not (1 - lambda)/2 for lambda {lambda}", a.set_label, a.residues)
        })?;
    }

    let bound = model(ModelId::ScarfPeriodic, &[("s", 1.5)])?;
    let spec = solve(&bound, 4)?;
    let want: Vec<Complex64> = (0..4).map(|n| Complex64::new((n as f64 + 2.0).powi(2), 0.0)).collect();
    same_multiset(&energies(&spec), &want, ANALYTIC_TOL)?;
    verify(&bound, 5e-4, 4)?;
    Ok(())
}

fn lame() -> Check {
    for mm in [0.1, 0.5, 0.9] {
        let m = model(ModelId::Lame, &[("j", 2.0), ("m", mm)])?;
        let s = solve(&m, 4)?;
        let d = (1.0 - mm + mm * mm).sqrt();
        let want: Vec<Complex64> =
            [0.0, 2.0 * d - mm - 1.0, 2.0 * d + 2.0 * mm - 1.0, 2.0 * d - mm + 2.0, 4.0 * d].map(|e| Complex64::new(e, 0.0)).to_vec();
        same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
        verify(&m, 5e-4, 4)?;
    }
    for j in 1..=5i64 {
        let m = model(ModelId::Lame, &[("j", j as f64), ("m", 0.5)])?;
        let s = solve(&m, 4)?;
        ensure(s.lines.len() == (2 * j + 1) as usize, || format!("j={j}: {} edges", s.lines.len()))?;
        let mut pattern: BTreeMap<u8, u32> = BTreeMap::new();
        for a in quantize(&m, 4).map_err(|e| e.to_string())?.admissible {
            pattern.insert(a.set_label.unwrap_or(0), a.n);
        }
        let want: BTreeMap<u8, u32> =
            [(1u8, j), (2, j - 1), (3, j - 1), (4, j - 2)].into_iter().filter(|&(_, n)| n >= 0).map(|(s, n)| (s, n as u32)).collect();
        ensure(pattern == want, || format!("j={j}: n pattern {pattern:?}, expected {want:?}"))?;
    }
    Ok(())
}

fn assoc_lame_es() -> Check {
    let mm: f64 = 0.5;
    let m = model(ModelId::AssocLameEs, &[("j", 1.0), ("m", mm)])?;
    let s = solve(&m, 4)?;
    let r = (1.0 - mm).sqrt();
    let want = [0.0, 4.0 * r, 2.0 - mm + 2.0 * r].map(|e| Complex64::new(e, 0.0));
    same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
    let forms: [(f64, fn(f64, f64, f64, f64) -> f64); 3] = [
        (want[0].re, |_, _, dn, r| dn + r / dn),
        (want[1].re, |_, _, dn, r| dn - r / dn),
        (want[2].re, |sn, cn, dn, _| cn * sn / dn),
    ];
    let k = elliptic_k(mm).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (0..800).map(|i| 4.0 * k * i as f64 / 800.0).collect();
    for (e, f) in forms {
        let line = s.lines.iter().find(|l| (l.energy.re() - e).abs() < 1e-9).ok_or("missing edge")?;
        let a = line.recipe.sample_at(&xs, Normalization::SupNormOne).map_err(|e| e.to_string())?;
        let reference: Vec<Complex64> = xs
            .iter()
            .map(|&x| {
                let t = jacobi_sn_cn_dn(x, mm).unwrap();
                Complex64::new(f(t.sn, t.cn, t.dn, r), 0.0)
            })
            .collect();
        let ov = compare_states(&a.values, &[&reference], true).overlap.unwrap_or(0.0);
        ensure(ov >= OVERLAP_MIN, || format!("E={e}: overlap {ov}"))?;
    }
    let rep = verify(&m, 5e-4, 4)?;
    ensure(rep.rows.iter().all(|row| row.overlap.is_some_and(|o| o >= OVERLAP_MIN)), || "oracle overlap".into())?;
    Ok(())
}

fn assoc_lame_qes() -> Check {
    let fam = qes_family(Scalar::ratio(7, 2), 4);
    let relations: Vec<&str> = fam.members.iter().map(|m| m.relation.as_str()).collect();
    ensure(relations == ["b - a = -n - 2", "a + b + 1 = n + 2", "b - a = -n - 1", "a + b = n"], || format!("relations {relations:?}"))?;
    let bs: Vec<Option<QComplex>> = fam.members.iter().map(|m| m.b.exact).collect();
    let want: Vec<Option<QComplex>> = [q(-5, 2), q(3, 2), q(-3, 2), q(1, 2)].map(|r| Some(exact(r))).to_vec();
    ensure(bs == want, || format!("qes_family b values {bs:?}"))?;

    let mm: f64 = 0.5;
    let m = model(ModelId::AssocLameQes, &[("a", 2.0), ("b", 1.0), ("m", mm)])?;
    let s = solve(&m, 4)?;
    let (u, v) = ((4.0 - 3.0 * mm).sqrt(), (mm * mm - 5.0 * mm + 4.0).sqrt());
    let want = [0.0, 5.0 - 3.0 * mm - 2.0 * u, 5.0 - 3.0 * mm + 2.0 * u, 5.0 - 2.0 * mm - 2.0 * v, 5.0 - 2.0 * mm + 2.0 * v]
        .map(|e| Complex64::new(e, 0.0));
    same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
    for line in &s.lines {
        let formula = &line.formula;
        ensure(relations.contains(&formula.as_str()), || format!("formula `{formula}` is not a QES relation"))?;
    }
    verify(&m, 5e-4, 4)?;

    let mm: f64 = 0.25;
    let m = model(ModelId::AssocLameQes, &[("a", 3.5), ("b", 0.5), ("m", mm)])?;
    let s = solve(&m, 4)?;
    let d9 = (4.0 - 4.0 * mm + 25.0 * mm * mm).sqrt();
    let top = 14.0 - 7.0 * mm + d9;
    let want = [0.0, d9 - mm + 2.0, 2.0 * d9, top, top].map(|e| Complex64::new(e, 0.0));
    same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
    let top_lines: Vec<_> = s.lines.iter().filter(|l| (l.energy.re() - top).abs() < 1e-8).collect();
    ensure(top_lines.len() == 2 && top_lines.iter().all(|l| l.degeneracy == 2), || {
        format!("edge {top}: {} lines, degeneracies {:?}", top_lines.len(), top_lines.iter().map(|l| l.degeneracy).collect::<Vec<_>>())
    })?;
    verify(&m, 5e-4, 4)?;
    Ok(())
}

fn khare_mandal() -> Check {
    for zeta in [0.1, 0.25] {
        let m = model(ModelId::KhareMandal, &[("zeta", zeta), ("M", 3.0)])?;
        let s = solve(&m, 4)?;
        let z2 = zeta * zeta;
        let r = (1.0 - 4.0 * z2).sqrt();
        let want = [5.0 - z2, 7.0 - z2 - 2.0 * r, 7.0 - z2 + 2.0 * r].map(|e| Complex64::new(e, 0.0));
        same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
        verify(&m, 1e-3, 4)?;
    }
    let zeta = 0.25;
    let m = model(ModelId::KhareMandal, &[("zeta", zeta), ("M", 2.0)])?;
    let s = solve(&m, 4)?;
    let want = [Complex64::new(3.0 - zeta * zeta, 2.0 * zeta), Complex64::new(3.0 - zeta * zeta, -2.0 * zeta)];
    same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
    let e = energies(&s);
    ensure((e[0] - e[1].conj()).norm() <= PAIR_TOL, || format!("pair not conjugate: {e:?}"))?;
    let rep = verify(&m, 1e-3, 4)?;
    ensure(rep.conjugation_closed == Some(true), || "oracle spectrum not closed under conjugation".into())?;

    for big_m in 1..=6u32 {
        let m = model(ModelId::KhareMandal, &[("zeta", zeta), ("M", big_m as f64)])?;
        let mut got: Vec<(u8, u32)> = quantize(&m, 4).map_err(|e| e.to_string())?.admissible.iter().map(|a| (a.set_label.unwrap_or(0), a.n)).collect();
        got.sort();
        let want: Vec<(u8, u32)> = if big_m % 2 == 1 {
            let mut v = vec![(1, (big_m - 1) / 2)];
            if big_m >= 3 {
                v.push((2, (big_m - 3) / 2));
            }
            v
        } else {
            vec![(3, big_m / 2 - 1), (4, big_m / 2 - 1)]
        };
        let mut want = want;
        want.sort();
        ensure(got == want, || format!("M={big_m}: (set, n) {got:?}, expected {want:?}"))?;
    }
    Ok(())
}

fn complex_scarf() -> Check {
    for (a, b) in [(1.0f64, 0.5f64), (6.0, 0.5), (3.0, -1.0)] {
        let m = model(ModelId::ComplexScarf, &[("A", a), ("B", b)])?;
        let s = solve(&m, 8)?;
        let t = (0.25 + a - b).sqrt();
        let sv = (0.25 + a + b).sqrt();
        let bound = 0.5 * t + 0.5 * sv - 0.5;
        let want: Vec<Complex64> =
            (0..).take_while(|&n| (n as f64) < bound).map(|n| Complex64::new(-(n as f64 + 0.5 - 0.5 * (t + sv)).powi(2), 0.0)).collect();
        let got: Vec<Complex64> = s.lines.iter().filter(|l| l.set_label == Some(1)).map(|l| l.energy.value).collect();
        same_multiset(&got, &want, ANALYTIC_TOL)?;
        ensure(s.lines.iter().all(|l| l.energy.im().abs() < 1e-12), || format!("A={a} B={b}: complex energy in unbroken phase"))?;
        if a == 1.0 {
            verify(&m, 1e-3, 8)?;
        }
    }
    let (a, b) = (1.0f64, 2.0f64);
    let m = model(ModelId::ComplexScarf, &[("A", a), ("B", b)])?;
    let s = solve(&m, 8)?;
    let r = (b - a - 0.25).sqrt();
    let sv = (a + b + 0.25).sqrt();
    let bound = 0.5 * sv - 0.5;
    let want: Vec<Complex64> = (0..)
        .take_while(|&n| (n as f64) < bound)
        .flat_map(|n| [1.0, -1.0].map(|sg| -(Complex64::new(n as f64 + 0.5 - 0.5 * sv, -0.5 * sg * r)).powi(2)))
        .collect();
    same_multiset(&energies(&s), &want, ANALYTIC_TOL)?;
    for line in &s.lines {
        let res = &line.assignment.residues;
        let decaying = Complex64::new(0.5 - 0.5 * sv, 0.0);
        let oscillating = res.iter().any(|x| (x.value - Complex64::new(0.5, 0.5 * r)).norm() < 1e-12 || (x.value - Complex64::new(0.5, -0.5 * r)).norm() < 1e-12);
        ensure(res.iter().any(|x| (x.value - decaying).norm() < 1e-12) && oscillating, || format!("residues {res:?}"))?;
        let samples = line.recipe.sample_at(&[0.0, 10.0, 20.0, 40.0], Normalization::SupNormOne).map_err(|e| e.to_string())?;
        let mods: Vec<f64> = samples.values.iter().map(|v| v.norm()).collect();
        ensure(mods.windows(2).all(|w| w[1] < w[0]) && mods[3] < 1e-5, || format!("recipe not decaying: {mods:?}"))?;
    }
    verify(&m, 1e-3, 8)?;
    Ok(())
}

fn catalog_cases() -> Vec<(ModelId, Vec<(&'static str, f64)>)> {
    vec![
        (ModelId::Hydrogen, vec![("e2", 2.0), ("l", 0.0)]),
        (ModelId::Hydrogen, vec![("e2", 3.0), ("l", 2.0)]),
        (ModelId::Scarf1, vec![("A", 2.0), ("B", 0.5), ("alpha", 1.0)]),
        (ModelId::Scarf1, vec![("A", 2.0), ("B", -3.0), ("alpha", 1.0)]),
        (ModelId::ScarfPeriodic, vec![("s", 0.3)]),
        (ModelId::ScarfPeriodic, vec![("s", 1.5)]),
        (ModelId::Lame, vec![("j", 3.0), ("m", 0.7)]),
        (ModelId::AssocLameEs, vec![("j", 2.0), ("m", 0.5)]),
        (ModelId::AssocLameQes, vec![("a", 2.0), ("b", 1.0), ("m", 0.5)]),
        (ModelId::AssocLameQes, vec![("a", 3.5), ("b", 0.5), ("m", 0.25)]),
        (ModelId::KhareMandal, vec![("zeta", 0.25), ("M", 3.0)]),
        (ModelId::KhareMandal, vec![("zeta", 0.25), ("M", 2.0)]),
        (ModelId::ComplexScarf, vec![("A", 1.0), ("B", 0.5)]),
        (ModelId::ComplexScarf, vec![("A", 1.0), ("B", 2.0)]),
    ]
}

fn properties() -> Check {
    for g2 in [q(3, 16), q(-5, 16), q(2, 9), q(-3, 4), q(0, 1)] {
        let [b0, b1] = finite_pole_residues(&Scalar::from_rational(g2));
        let sum = (b0 + b1).exact;
        ensure(sum == Some(exact(q(1, 1))), || format!("g2={g2}: root sum {sum:?}"))?;
    }
    for g2 in [-1.75, 0.3, 2.0] {
        let [b0, b1] = finite_pole_residues(&Scalar::real(g2));
        ensure((b0.value + b1.value - 1.0).norm() < 1e-15, || format!("g2={g2}: root sum {}", b0.value + b1.value))?;
    }
    ensure(list_models().len() == 8, || "catalog size".into())?;
    for (id, p) in catalog_cases() {
        let m = model(id, &p)?;
        let qz = quantize(&m, 4).map_err(|e| e.to_string())?;
        for a in &qz.admissible {
            let d = a.sum_rule_defect();
            ensure(if d.is_exact() { d.is_zero() } else { d.value.norm() < 1e-12 }, || format!("{id} set {:?}: sum rule defect {d}", a.set_label))?;
        }
        for line in &solve(&m, 4)?.lines {
            let r = line.recipe.ode_residual(&m, 64).map_err(|e| e.to_string())?;
            ensure(r <= ODE_TOL, || format!("{id} {p:?} E={}: ODE residual {r:.2e}", line.energy.value))?;
        }
    }
    for mm in [0.0, 0.1, 0.5, 0.9, 0.99] {
        for i in 0..50 {
            let x = -7.0 + 0.29 * i as f64;
            let t = jacobi_sn_cn_dn(x, mm).map_err(|e| e.to_string())?;
            let e1 = (t.sn * t.sn + t.cn * t.cn - 1.0).abs();
            let e2 = (t.dn * t.dn + mm * t.sn * t.sn - 1.0).abs();
            ensure(e1.max(e2) <= ELLIPTIC_TOL, || format!("m={mm} x={x}: identity defects {e1:.1e} {e2:.1e}"))?;
        }
    }
    for (id, p) in [
        (ModelId::Hydrogen, vec![("e2", 2.0), ("l", 1.0)]),
        (ModelId::Scarf1, vec![("A", 2.0), ("B", 0.5), ("alpha", 1.0)]),
        (ModelId::ScarfPeriodic, vec![("s", 1.5)]),
    ] {
        let m = model(id, &p)?;
        let s = solve(&m, 5)?;
        let rep = verify_spectrum(&m, &s, None).map_err(|e| e.to_string())?;
        ensure(rep.nodes_monotone == Some(true), || format!("{id}: oracle node counts not monotone"))?;
        let nodes: Vec<Option<usize>> = rep.rows.iter().map(|r| r.nodes_oracle).collect();
        let want: Vec<Option<usize>> = (0..rep.rows.len()).map(Some).collect();
        ensure(nodes == want, || format!("{id}: oracle node counts {nodes:?}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("1 hydrogen levels, Laguerre eigenfunctions, oracle", hydrogen),
        ("2 Scarf I residue picks and both phases", scarf1),
        ("3 periodic Scarf band and bound phases", scarf_periodic),
        ("4 Lame band edges and n pattern", lame),
        ("5 associated Lame ES edges and eigenfunctions", assoc_lame_es),
        ("6 associated Lame QES relations, edges, degeneracy", assoc_lame_qes),
        ("7 Khare-Mandal real levels, conjugate pair, parity sets", khare_mandal),
        ("8 complex Scarf II both phases", complex_scarf),
        ("9 property suites", properties),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS criterion {name} ({secs:.1}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
