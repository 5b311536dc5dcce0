use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use qhj::catalog::{bare_model, get_model, scarf_periodic_from_cell, Model, ModelId, RawParams};
use qhj::exact::{QComplex, Scalar};
use qhj::poly::Poly;
use qhj::quantization::quantize;
use qhj::residues::finite_pole_residues;
use qhj::special::{elliptic_k, jacobi_polynomial, jacobi_sn_cn_dn, laguerre};
use qhj::spectrum::{solve_spectrum, SolveOptions};
use qhj::wavefunction::{BcTag, Normalization};
use std::f64::consts::PI;

fn raw(pairs: &[(&str, f64)]) -> RawParams {
    pairs.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v))).collect()
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Round to two decimals so parameters parse as exact rationals.
fn dec(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Random model with parameters in its documented range and a sample point of its domain.
fn any_model() -> impl Strategy<Value = (ModelId, Vec<(&'static str, f64)>, f64)> {
    prop_oneof![
        (0.5..4.0f64, 0u32..4, 0.1..20.0f64).prop_map(|(e2, l, x)| (ModelId::Hydrogen, vec![("e2", dec(e2)), ("l", l as f64)], x)),
        (0.5..4.0f64, -4.0..4.0f64, 0.5..2.0f64, -0.95..0.95f64)
            .prop_filter("A +- B != 0", |(a, b, _, _)| (dec(*a) - dec(*b)).abs() > 0.05 && (dec(*a) + dec(*b)).abs() > 0.05)
            .prop_map(|(a, b, al, u)| {
                let al = dec(al);
                (ModelId::Scarf1, vec![("A", dec(a)), ("B", dec(b)), ("alpha", al)], u * PI / (2.0 * al))
            }),
        (0.05..3.0f64, 0.05..3.09f64)
            .prop_filter("s != 1/2", |(s, _)| (dec(*s) - 0.5).abs() > 0.005)
            .prop_map(|(s, x)| (ModelId::ScarfPeriodic, vec![("s", dec(s))], x)),
        (1u32..6, 0.05..0.95f64, -5.0..5.0f64).prop_map(|(j, m, x)| (ModelId::Lame, vec![("j", j as f64), ("m", dec(m))], x)),
        (1u32..4, 0.05..0.95f64, -5.0..5.0f64).prop_map(|(j, m, x)| (ModelId::AssocLameEs, vec![("j", j as f64), ("m", dec(m))], x)),
        (0u32..8, 0u32..4, 0.05..0.95f64, -5.0..5.0f64).prop_map(|(twice_a, n, m, x)| {
            // a + b = n keeps the model quasi-exactly solvable
            let a = 1.0 + twice_a as f64 / 2.0;
            (ModelId::AssocLameQes, vec![("a", a), ("b", n as f64 + a.ceil() - a), ("m", dec(m))], x)
        }),
        (0.05..0.45f64, 1u32..7, -2.5..2.5f64).prop_map(|(z, mm, x)| (ModelId::KhareMandal, vec![("zeta", dec(z)), ("M", mm as f64)], x)),
        (0.1..5.0f64, -5.0..5.0f64, -4.0..4.0f64).prop_map(|(a, b, x)| (ModelId::ComplexScarf, vec![("A", dec(a)), ("B", dec(b))], x)),
    ]
}

/// `sum |c_k| |y|^k / |p(y)|`, the relative sensitivity of evaluating `p` at `y`.
fn condition(p: &Poly, y: Complex64) -> f64 {
    let mag: f64 = p.coeffs.iter().enumerate().map(|(k, ck)| ck.norm() * y.norm().powi(k as i32)).sum();
    let v = p.eval(y).norm();
    if v > 0.0 { mag / v } else { f64::INFINITY }
}

fn build(id: ModelId, p: &[(&'static str, f64)]) -> Result<Model, TestCaseError> {
    get_model(id, &raw(p)).map_err(|e| TestCaseError::fail(format!("{id} {p:?}: {e}")))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn elliptic_identities_and_parity(x in -20.0..20.0f64, m in 0.0..0.999f64) {
        let t = jacobi_sn_cn_dn(x, m).unwrap();
        prop_assert!((t.sn * t.sn + t.cn * t.cn - 1.0).abs() <= 1e-12);
        prop_assert!((t.dn * t.dn + m * t.sn * t.sn - 1.0).abs() <= 1e-12);
        let r = jacobi_sn_cn_dn(-x, m).unwrap();
        prop_assert!((r.sn + t.sn).abs() <= 1e-12);
        prop_assert!((r.cn - t.cn).abs() <= 1e-12);
        prop_assert!((r.dn - t.dn).abs() <= 1e-12);
    }

    #[test]
    fn sn_derivative_is_cn_dn(x in -6.0..6.0f64, m in 0.0..0.99f64) {
        let h = 1e-4;
        let f = |x: f64| jacobi_sn_cn_dn(x, m).unwrap();
        let d = (f(x - 2.0 * h).sn - 8.0 * f(x - h).sn + 8.0 * f(x + h).sn - f(x + 2.0 * h).sn) / (12.0 * h);
        let t = f(x);
        prop_assert!((d - t.cn * t.dn).abs() <= 1e-9);
    }

    #[test]
    fn sn_has_period_four_k(x in -3.0..3.0f64, m in 0.01..0.99f64) {
        let k = elliptic_k(m).unwrap();
        let a = jacobi_sn_cn_dn(x, m).unwrap();
        let b = jacobi_sn_cn_dn(x + 2.0 * k, m).unwrap();
        prop_assert!((a.sn + b.sn).abs() <= 1e-11 && (a.cn + b.cn).abs() <= 1e-11 && (a.dn - b.dn).abs() <= 1e-11);
    }

    #[test]
    fn jacobi_polynomial_solves_its_ode(n in 0usize..5, al in -0.9..3.0f64, be in -0.9..3.0f64, t in -0.9..0.9f64) {
        let h = 0.05;
        let p = |x: f64| jacobi_polynomial(n, c(al), c(be), c(x)).re;
        let f: Vec<f64> = (-2..=2).map(|k| p(t + k as f64 * h)).collect();
        let d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
        let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
        let terms = [(1.0 - t * t) * d2, (be - al - (al + be + 2.0) * t) * d1, n as f64 * (n as f64 + al + be + 1.0) * f[2]];
        let scale = terms.iter().map(|x| x.abs()).fold(1.0, f64::max);
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-9 * scale);
    }

    #[test]
    fn laguerre_solves_its_ode(n in 0usize..5, k in 0.0..5.0f64, y in 0.1..15.0f64) {
        let h = 0.05;
        let f: Vec<f64> = (-2..=2).map(|i| laguerre(n, k, y + i as f64 * h)).collect();
        let d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
        let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
        let terms = [y * d2, (k + 1.0 - y) * d1, n as f64 * f[2]];
        let scale = terms.iter().map(|x| x.abs()).fold(1.0, f64::max);
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-9 * scale);
    }

    #[test]
    fn residue_branches_sum_to_one_exactly(p in -40i64..40, q in 1i64..40) {
        // g2 = (1 - (p/q)^2) / 4 makes the discriminant a perfect square
        let r = Rational64::new(p, q);
        let g2 = (Rational64::from_integer(1) - r * r) / Rational64::from_integer(4);
        let [b0, b1] = finite_pole_residues(&Scalar::from_rational(g2));
        prop_assert_eq!((b0 + b1).exact, Some(QComplex::real(Rational64::from_integer(1))));
        for b in [b0, b1] {
            let e = b.exact.unwrap();
            let lhs = e.checked_mul(&e).unwrap().checked_sub(&e).unwrap().checked_add(&QComplex::real(g2)).unwrap();
            prop_assert!(lhs.is_zero());
        }
    }

    #[test]
    fn residue_branches_solve_the_indicial_equation(g2 in -20.0..20.0f64) {
        for b in finite_pole_residues(&Scalar::real(g2)) {
            prop_assert!((b.value * b.value - b.value + g2).norm() <= 1e-12 * g2.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn catalog_entries_are_consistent((id, p, x) in any_model(), e in -5.0..5.0f64, ei in -1.0..1.0f64) {
        let m = build(id, &p)?;
        let energy = Complex64::new(e, ei);
        let y = m.variable.eval(c(x)).unwrap();
        let v = m.potential(c(x)).unwrap();
        let vy = m.potential_y(y);
        prop_assert!((v - vy).norm() <= 1e-9 * v.norm().max(1.0), "{id}: V(x) {v} vs V(y) {vy}");
        let g = m.g(y, energy);
        let gd = m.g_from_definition(y, energy);
        // near a pole both forms cancel inside their polynomials; bound by the evaluation condition numbers
        let (den, n0, n1) = m.g_rational();
        let r = m.metric.eval(y);
        let polys = [den, n0, n1, &m.metric, &m.potential_num, &m.potential_den];
        let cond: f64 = polys.iter().map(|p| condition(p, y)).sum();
        prop_assert!((g - gd).norm() <= (1e-12 + 64.0 * f64::EPSILON * cond) * gd.norm().max(1.0), "{id}: G {g} vs {gd} (R = {r})");
        let h = 1e-5;
        let dy = (m.variable.eval(c(x + h)).unwrap() - m.variable.eval(c(x - h)).unwrap()) / (2.0 * h);
        let metric = m.metric.eval(y);
        prop_assert!((dy * dy - metric).norm() <= 1e-6 * metric.norm().max(1.0), "{id}: (dy/dx)^2 {} vs R(y) {metric}", dy * dy);
    }

    #[test]
    fn sum_rule_is_exact((id, p, _x) in any_model()) {
        let m = build(id, &p)?;
        let q = quantize(&m, 4).unwrap();
        for a in &q.admissible {
            let d = a.sum_rule_defect();
            if d.is_exact() {
                prop_assert!(d.is_zero(), "{id} {p:?}: defect {d}");
            } else {
                prop_assert!(d.value.norm() <= 1e-12, "{id} {p:?}: defect {d}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn every_emitted_state_solves_the_equation((id, p, _x) in any_model()) {
        let m = build(id, &p)?;
        let s = solve_spectrum(&m, SolveOptions::default()).unwrap();
        prop_assert!(!s.lines.is_empty());
        for line in &s.lines {
            let r = line.recipe.ode_residual(&m, 200).unwrap();
            prop_assert!(r <= 1e-8, "{id} {p:?} E={}: residual {r:.2e}", line.energy.value);
            prop_assert_eq!(line.polynomial.coeffs.len(), line.n() as usize + 1);
        }
    }

    #[test]
    fn associated_lame_is_symmetric_under_reflection_of_orders(a in -3.0..4.0f64, b in -3.0..4.0f64, m in 0.05..0.95f64, x in -5.0..5.0f64) {
        let v = |a: f64, b: f64| bare_model(ModelId::AssocLameQes, &raw(&[("a", a), ("b", b), ("m", m)])).unwrap().potential(c(x)).unwrap();
        let base = v(a, b);
        prop_assert!((v(-a - 1.0, b) - base).norm() <= 1e-12 * base.norm().max(1.0));
        prop_assert!((v(a, -b - 1.0) - base).norm() <= 1e-12 * base.norm().max(1.0));
    }

    #[test]
    fn periodic_potentials_are_even((id, p, x) in any_model()) {
        let m = build(id, &p)?;
        let (v1, v2) = match id {
            ModelId::Lame | ModelId::AssocLameEs | ModelId::AssocLameQes => (m.potential(c(x)).unwrap(), m.potential(c(-x)).unwrap()),
            ModelId::ScarfPeriodic => {
                let u = x - PI / 2.0;
                (m.potential(c(PI / 2.0 + u)).unwrap(), m.potential(c(PI / 2.0 - u)).unwrap())
            }
            _ => return Ok(()),
        };
        prop_assert!((v1 - v2).norm() <= 1e-10 * v1.norm().max(1.0));
    }

    #[test]
    fn band_edges_have_definite_parity_and_periodicity((id, p, _x) in any_model()) {
        if !matches!(id, ModelId::Lame | ModelId::AssocLameEs | ModelId::AssocLameQes) {
            return Ok(());
        }
        let m = build(id, &p)?;
        let k = m.quarter_period.unwrap();
        for line in solve_spectrum(&m, SolveOptions::default()).unwrap().lines {
            let xs: Vec<f64> = (0..9).map(|i| 0.11 + 0.37 * i as f64).collect();
            let plus = line.recipe.sample_at(&xs, Normalization::SupNormOne).unwrap().values;
            let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
            let minus = line.recipe.sample_at(&neg, Normalization::SupNormOne).unwrap().values;
            let even = plus.iter().zip(&minus).all(|(a, b)| (a - b).norm() <= 1e-10);
            let odd = plus.iter().zip(&minus).all(|(a, b)| (a + b).norm() <= 1e-10);
            prop_assert!(even || odd, "{id} E={}: no definite parity", line.energy.value);
            let ratio = line.recipe.shift_ratio(2.0 * k).unwrap().unwrap();
            let tag = line.recipe.bc_tag().unwrap();
            let want = if tag == BcTag::Periodic { 1.0 } else { -1.0 };
            prop_assert!((ratio - want).norm() <= 1e-8, "{id}: shift ratio {ratio} for {tag:?}");
        }
    }

    #[test]
    fn periodic_scarf_cell_conversion(a in 0.5..5.0f64, v0 in -0.2..5.0f64, n in 0u32..4) {
        prop_assume!((v0 * a * a).abs() > 1e-3 && v0 * a * a / (PI * PI) > -0.24);
        let (s, scale) = scarf_periodic_from_cell(a, v0).unwrap();
        prop_assume!((s - 0.5).abs() > 1e-3);
        // scaling x -> a x / pi maps the cell onto (0, pi)
        let lhs = v0 / (PI * 0.3 / a * a / PI).sin().powi(2);
        let m = build(ModelId::ScarfPeriodic, &[("s", s)])?;
        let rhs = scale * (m.potential(c(0.3)).unwrap().re - m.energy_offset.re());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
        if s > 0.5 {
            let e = (n as f64 + 0.5 + s).powi(2) * scale;
            let spec = solve_spectrum(&m, SolveOptions { levels: 4 }).unwrap();
            let got = spec.lines.iter().find(|l| l.n() == n).unwrap().energy.re() * scale;
            prop_assert!((got - e).abs() <= 1e-10 * e);
        }
    }
}

#[test]
fn lame_zero_counts_follow_set_pattern() {
    for j in 1..=5u32 {
        let m = get_model(ModelId::Lame, &raw(&[("j", j as f64), ("m", 0.5)])).unwrap();
        for line in solve_spectrum(&m, SolveOptions::default()).unwrap().lines {
            let want = match line.set_label.unwrap() {
                1 | 2 => j,
                _ => j - 1,
            };
            assert_eq!(line.recipe.zero_count().total, want as usize, "j={j} set {:?}", line.set_label);
        }
    }
}
