use super::params::{require, ParamKind, ParamSet, ParamSpec};
use super::{
    real_only, Base, Domain, Model, ModelId, ModelInfo, PrefactorMap, ResidueOption, Rule,
    SetDef, SpectrumKind, Variable,
};
use crate::error::Result;
use crate::exact::Scalar;
use crate::poly::Poly;
use crate::residues::{Affine, FixedPole, InfinityData};
use crate::special::{elliptic_k, jacobi_sn_cn_dn};
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn spec(name: &str, kind: ParamKind, range: &str, default: Option<&str>, description: &str) -> ParamSpec {
    ParamSpec::new(name, kind, range, default, description)
}

pub(super) fn info(id: ModelId) -> ModelInfo {
    use ParamKind::*;
    let (name, potential, variable, spectrum, parameters) = match id {
        ModelId::Hydrogen => (
            "Hydrogen atom (radial, shifted)",
            "V(r) = -e2/r + l(l+1)/r^2 + e2^2/(4(l+1)^2)",
            "r",
            SpectrumKind::Bound,
            vec![
                spec("e2", Real, "e2 > 0", Some("2"), "Coulomb coupling e^2"),
                spec("l", NonNegativeInteger, "l >= 0", Some("0"), "angular momentum"),
            ],
        ),
        ModelId::Scarf1 => (
            "Scarf I (trigonometric)",
            "V(x) = -A^2 + (A^2+B^2-A alpha) sec^2(alpha x) - B(2A-alpha) tan(alpha x) sec(alpha x)",
            "sin(alpha x)",
            SpectrumKind::Bound,
            vec![
                spec("A", Real, "A +- B != 0", None, "depth parameter"),
                spec("B", Real, "real", None, "asymmetry parameter"),
                spec("alpha", Real, "alpha > 0", Some("1"), "inverse length scale"),
            ],
        ),
        ModelId::ScarfPeriodic => (
            "Periodic Scarf (trigonometric, a = pi)",
            "V(x) = (s^2 - 1/4) / sin^2 x",
            "cot x",
            SpectrumKind::BandEdges,
            vec![spec(
                "s",
                Real,
                "s > 0, s != 1/2 (band structure for s < 1/2, bound states for s > 1/2)",
                None,
                "coupling",
            )],
        ),
        ModelId::Lame => (
            "Lame (shifted to zero ground edge)",
            "V(x) = j(j+1) m sn^2(x|m) + c",
            "sn x",
            SpectrumKind::BandEdges,
            vec![
                spec("j", PositiveInteger, "j >= 1", None, "Lame order"),
                spec("m", Real, "0 < m < 1", None, "elliptic parameter"),
            ],
        ),
        ModelId::AssocLameEs => (
            "Associated Lame, exactly solvable a = b = j (shifted)",
            "V(x) = j(j+1) m sn^2 x + j(j+1) m cn^2 x / dn^2 x + c",
            "sn x",
            SpectrumKind::BandEdges,
            vec![
                spec("j", PositiveInteger, "j >= 1", None, "order a = b = j"),
                spec("m", Real, "0 < m < 1", None, "elliptic parameter"),
            ],
        ),
        ModelId::AssocLameQes => (
            "Associated Lame, quasi-exactly solvable (shifted)",
            "V(x) = a(a+1) m sn^2 x + b(b+1) m cn^2 x / dn^2 x + c",
            "sn x",
            SpectrumKind::BandEdges,
            vec![
                spec("a", Real, "real", None, "first order"),
                spec("b", Real, "real", None, "second order"),
                spec("m", Real, "0 < m < 1", None, "elliptic parameter"),
            ],
        ),
        ModelId::KhareMandal => (
            "Khare-Mandal PT-symmetric QES",
            "V(x) = -(zeta cosh 2x - i M)^2",
            "cosh 2x",
            SpectrumKind::NonHermitian,
            vec![
                spec("zeta", Real, "zeta > 0", None, "coupling"),
                spec("M", PositiveInteger, "M >= 1", None, "integer controlling the analytic sector"),
            ],
        ),
        ModelId::ComplexScarf => (
            "Complex Scarf II (PT-symmetric)",
            "V(x) = -A sech^2 x - i B sech x tanh x",
            "i sinh x",
            SpectrumKind::NonHermitian,
            vec![
                spec("A", Real, "A > -1/4", None, "real strength"),
                spec("B", Real, "real", None, "imaginary strength"),
            ],
        ),
    };
    ModelInfo {
        id,
        name: name.into(),
        potential: potential.into(),
        variable: variable.into(),
        spectrum,
        parameters,
    }
}

pub(super) fn shift_to_ground(id: ModelId) -> bool {
    matches!(id, ModelId::Lame | ModelId::AssocLameEs | ModelId::AssocLameQes)
}

fn pole(label: &str, y: Complex64, g2: Affine) -> FixedPole {
    FixedPole { label: label.into(), location: y, g2 }
}

fn fixed(g2: Scalar) -> Affine {
    Affine::fixed(g2)
}

/// `g2 = b (1 - b)` for a residue option `b`.
fn g2_of(b: Scalar) -> Scalar {
    b * (Scalar::one() - b)
}

fn pf(base: Base, offset: Scalar, terms: Vec<(usize, Scalar)>) -> PrefactorMap {
    PrefactorMap { base, offset, terms }
}

fn table(rows: &[(u8, &[usize], Option<usize>)]) -> Vec<SetDef> {
    rows.iter()
        .map(|(label, poles, inf)| SetDef { label: *label, poles: poles.to_vec(), infinity: *inf })
        .collect()
}

struct Skeleton {
    variable: Variable,
    domain: Domain,
    spectrum: SpectrumKind,
    metric: Poly,
    vnum: Poly,
    vden: Poly,
    poles: Vec<FixedPole>,
    infinity: InfinityData,
    parity_pairs: Vec<(usize, usize)>,
    parity_basis: bool,
    rules: Vec<Rule>,
    pole_options: Vec<Vec<ResidueOption>>,
    infinity_options: Vec<ResidueOption>,
    sets: Vec<SetDef>,
    prefactors: Vec<PrefactorMap>,
    quarter_period: Option<f64>,
}

pub(super) fn build(id: ModelId, p: ParamSet) -> Result<Model> {
    let s = match id {
        ModelId::Hydrogen => hydrogen(&p)?,
        ModelId::Scarf1 => scarf1(&p)?,
        ModelId::ScarfPeriodic => scarf_periodic(&p)?,
        ModelId::Lame => lame(&p)?,
        ModelId::AssocLameEs => {
            let j = p.scalar("j");
            assoc_lame(j, j, p.real("m"), true)?
        }
        ModelId::AssocLameQes => assoc_lame(p.scalar("a"), p.scalar("b"), p.real("m"), false)?,
        ModelId::KhareMandal => khare_mandal(&p)?,
        ModelId::ComplexScarf => complex_scarf(&p)?,
    };
    let mut model = Model {
        id,
        params: p,
        variable: s.variable,
        domain: s.domain,
        spectrum: s.spectrum,
        metric: s.metric,
        potential_num: s.vnum,
        potential_den: s.vden,
        energy_offset: Scalar::zero(),
        poles: s.poles,
        infinity: s.infinity,
        parity_pairs: s.parity_pairs,
        parity_basis: s.parity_basis,
        rules: s.rules,
        pole_options: s.pole_options,
        infinity_options: s.infinity_options,
        sets: s.sets,
        prefactors: s.prefactors,
        quarter_period: s.quarter_period,
        g_den: Poly::zero(),
        g_num0: Poly::zero(),
        g_num1: Poly::zero(),
    };
    model.refresh_g()?;
    Ok(model)
}

fn hydrogen(p: &ParamSet) -> Result<Skeleton> {
    let e2 = p.scalar("e2");
    require(e2.re() > 0.0, "e2", "must be positive")?;
    let l = p.scalar("l");
    let ll = l * (l + Scalar::one());
    let k = e2 * e2 / (Scalar::int(4) * (l + Scalar::one()) * (l + Scalar::one()));
    Ok(Skeleton {
        variable: Variable::Identity,
        domain: Domain::HalfLine,
        spectrum: SpectrumKind::Bound,
        metric: Poly::one(),
        vnum: Poly::new(vec![ll.value, -e2.value, k.value]),
        vden: Poly::from_real(&[0.0, 0.0, 1.0]),
        poles: vec![pole("r=0", c(0.0), fixed(-ll))],
        infinity: InfinityData {
            g0: Affine::new(-k, Scalar::one()),
            g1: fixed(e2),
            g2: fixed(-ll),
        },
        parity_pairs: vec![],
        parity_basis: false,
        rules: vec![Rule::VanishAtPole(0), Rule::DecayExponential],
        pole_options: vec![vec![
            ResidueOption::value("l+1", l + Scalar::one()),
            ResidueOption::value("-l", -l),
        ]],
        infinity_options: vec![],
        sets: table(&[(1, &[0], None), (2, &[1], None)]),
        prefactors: vec![pf(Base::Y, Scalar::zero(), vec![(0, Scalar::one())])],
        quarter_period: None,
    })
}

fn scarf1(p: &ParamSet) -> Result<Skeleton> {
    let (a, b, al) = (p.scalar("A"), p.scalar("B"), p.scalar("alpha"));
    require(al.re() > 0.0, "alpha", "must be positive")?;
    require(!(a - b).is_negligible(1e-14), "A", "A - B must be non-zero")?;
    require(!(a + b).is_negligible(1e-14), "A", "A + B must be non-zero")?;
    let two = Scalar::int(2);
    let c1 = a * a + b * b - a * al;
    let c2 = -(b * (two * a - al));
    let kappa = (a - b) / (two * al);
    let kappa_p = (a + b) / (two * al);
    let opts = |k: Scalar, tag: &str| {
        vec![
            ResidueOption::value(format!("({tag})/(2 alpha)+1/4"), k + q(1, 4)),
            ResidueOption::value(format!("3/4-({tag})/(2 alpha)"), q(3, 4) - k),
        ]
    };
    let half_width = PI / (2.0 * al.re());
    Ok(Skeleton {
        variable: Variable::SinAlpha(al.re()),
        domain: Domain::Walls { a: -half_width, b: half_width },
        spectrum: SpectrumKind::Bound,
        metric: Poly::new(vec![(al * al).value, c(0.0), (-(al * al)).value]),
        vnum: Poly::new(vec![(c1 - a * a).value, c2.value, (a * a).value]),
        vden: Poly::from_real(&[1.0, 0.0, -1.0]),
        poles: vec![
            pole("y=1", c(1.0), fixed(g2_of(kappa + q(1, 4)))),
            pole("y=-1", c(-1.0), fixed(g2_of(kappa_p + q(1, 4)))),
        ],
        infinity: InfinityData {
            g0: fixed(Scalar::zero()),
            g1: fixed(Scalar::zero()),
            g2: Affine::new(q(1, 4) - a * a / (al * al), -(Scalar::one() / (al * al))),
        },
        parity_pairs: vec![],
        parity_basis: false,
        rules: vec![
            Rule::ClassicalSign { pole: 0, kappa: kappa.re() },
            Rule::ClassicalSign { pole: 1, kappa: kappa_p.re() },
        ],
        pole_options: vec![opts(kappa, "A-B"), opts(kappa_p, "A+B")],
        infinity_options: vec![],
        sets: table(&[(1, &[0, 0], None), (2, &[0, 1], None), (3, &[1, 0], None), (4, &[1, 1], None)]),
        prefactors: vec![
            pf(Base::OneMinusY, -q(1, 4), vec![(0, Scalar::one())]),
            pf(Base::OnePlusY, -q(1, 4), vec![(1, Scalar::one())]),
        ],
        quarter_period: None,
    })
}

fn scarf_periodic(p: &ParamSet) -> Result<Skeleton> {
    let s = p.scalar("s");
    require(s.re() > 0.0, "s", "must be positive")?;
    require((s.re() - 0.5).abs() > 1e-12, "s", "s = 1/2 gives the free particle")?;
    let coupling = s * s - q(1, 4);
    let i = Complex64::i();
    let g2 = Affine::new(q(1, 4), -q(1, 4));
    let sign_opts = || vec![ResidueOption::sign("(1+lambda)/2", 1), ResidueOption::sign("(1-lambda)/2", -1)];
    Ok(Skeleton {
        variable: Variable::Cot,
        domain: Domain::Walls { a: 0.0, b: PI },
        spectrum: if s.re() < 0.5 { SpectrumKind::BandEdges } else { SpectrumKind::Bound },
        metric: Poly::from_real(&[1.0, 0.0, 2.0, 0.0, 1.0]),
        vnum: Poly::new(vec![coupling.value, c(0.0), coupling.value]),
        vden: Poly::one(),
        poles: vec![pole("y=i", i, g2), pole("y=-i", -i, g2)],
        infinity: InfinityData {
            g0: fixed(Scalar::zero()),
            g1: fixed(Scalar::zero()),
            g2: fixed(q(1, 4) - s * s),
        },
        parity_pairs: vec![(0, 1)],
        parity_basis: true,
        rules: vec![Rule::DecayAtInfinity],
        pole_options: vec![sign_opts(), sign_opts()],
        infinity_options: vec![
            ResidueOption::value("1/2-s", q(1, 2) - s),
            ResidueOption::value("1/2+s", q(1, 2) + s),
        ],
        sets: table(&[
            (1, &[1, 1], Some(0)),
            (2, &[1, 1], Some(1)),
            (3, &[0, 0], Some(0)),
            (4, &[0, 0], Some(1)),
        ]),
        prefactors: vec![pf(Base::AbsSin, Scalar::one(), vec![(0, -Scalar::one()), (1, -Scalar::one())])],
        quarter_period: None,
    })
}

fn elliptic_metric(m: f64) -> Poly {
    // (1 - t^2)(1 - m t^2)
    Poly::from_real(&[1.0, 0.0, -(1.0 + m), 0.0, m])
}

fn elliptic_poles(m: f64, g_edge: Scalar, g_inner: Scalar) -> Vec<FixedPole> {
    let r = 1.0 / m.sqrt();
    vec![
        pole("t=1", c(1.0), fixed(g_edge)),
        pole("t=-1", c(-1.0), fixed(g_edge)),
        pole("t=1/sqrt(m)", c(r), fixed(g_inner)),
        pole("t=-1/sqrt(m)", c(-r), fixed(g_inner)),
    ]
}

fn elliptic_prefactors() -> Vec<PrefactorMap> {
    vec![
        pf(Base::Cn, -q(1, 2), vec![(0, Scalar::int(2))]),
        pf(Base::Dn, -q(1, 2), vec![(2, Scalar::int(2))]),
    ]
}

fn check_m(m: f64) -> Result<()> {
    require(m > 0.0 && m < 1.0, "m", "must satisfy 0 < m < 1")
}

fn quarter_opts() -> Vec<ResidueOption> {
    vec![ResidueOption::value("3/4", q(3, 4)), ResidueOption::value("1/4", q(1, 4))]
}

fn lame(p: &ParamSet) -> Result<Skeleton> {
    let m = p.real("m");
    check_m(m)?;
    let j = p.scalar("j");
    let jj = j * (j + Scalar::one());
    let k = elliptic_k(m)?;
    Ok(Skeleton {
        variable: Variable::Sn(m),
        domain: Domain::Periodic { period: 2.0 * k },
        spectrum: SpectrumKind::BandEdges,
        metric: elliptic_metric(m),
        vnum: Poly::new(vec![c(0.0), c(0.0), jj.value * m]),
        vden: Poly::one(),
        poles: elliptic_poles(m, q(3, 16), q(3, 16)),
        infinity: InfinityData {
            g0: fixed(Scalar::zero()),
            g1: fixed(Scalar::zero()),
            g2: fixed(-jj),
        },
        parity_pairs: vec![(0, 1), (2, 3)],
        parity_basis: true,
        rules: vec![],
        pole_options: vec![quarter_opts(), quarter_opts(), quarter_opts(), quarter_opts()],
        infinity_options: vec![],
        // (b1, d1): (1/4,1/4), (3/4,1/4), (1/4,3/4), (3/4,3/4)
        sets: table(&[
            (1, &[1, 1, 1, 1], None),
            (2, &[0, 0, 1, 1], None),
            (3, &[1, 1, 0, 0], None),
            (4, &[0, 0, 0, 0], None),
        ]),
        prefactors: elliptic_prefactors(),
        quarter_period: Some(k),
    })
}

fn assoc_lame(a: Scalar, b: Scalar, m: f64, exactly_solvable: bool) -> Result<Skeleton> {
    check_m(m)?;
    let one = Scalar::one();
    let aa = a * (a + one);
    let bb = b * (b + one);
    let k = elliptic_k(m)?;
    // V = aa m t^2 + bb m (1 - t^2)/(1 - m t^2)
    let vnum = Poly::new(vec![
        (bb * Scalar::real(m)).value,
        c(0.0),
        (aa * Scalar::real(m) - bb * Scalar::real(m)).value,
        c(0.0),
        (-(aa * Scalar::real(m) * Scalar::real(m))).value,
    ]);
    let (inner_opts, sets) = if exactly_solvable {
        let hi = (Scalar::int(3) + Scalar::int(2) * a) / Scalar::int(4);
        let lo = (Scalar::one() - Scalar::int(2) * a) / Scalar::int(4);
        (
            vec![ResidueOption::value("(3+2j)/4", hi), ResidueOption::value("(1-2j)/4", lo)],
            // (b1, d1): (1/4,(1-2j)/4), (3/4,(1-2j)/4), (1/4,(3+2j)/4), (3/4,(3+2j)/4)
            table(&[
                (1, &[1, 1, 1, 1], None),
                (2, &[0, 0, 1, 1], None),
                (3, &[1, 1, 0, 0], None),
                (4, &[0, 0, 0, 0], None),
            ]),
        )
    } else {
        let hi = q(3, 4) + b / Scalar::int(2);
        let lo = q(1, 4) - b / Scalar::int(2);
        (
            vec![ResidueOption::value("3/4+b/2", hi), ResidueOption::value("1/4-b/2", lo)],
            // (b1, d1): (3/4,3/4+b/2), (3/4,1/4-b/2), (1/4,3/4+b/2), (1/4,1/4-b/2)
            table(&[
                (1, &[0, 0, 0, 0], None),
                (2, &[0, 0, 1, 1], None),
                (3, &[1, 1, 0, 0], None),
                (4, &[1, 1, 1, 1], None),
            ]),
        )
    };
    let g_inner = q(3, 16) - bb / Scalar::int(4);
    Ok(Skeleton {
        variable: Variable::Sn(m),
        domain: Domain::Periodic { period: 2.0 * k },
        spectrum: SpectrumKind::BandEdges,
        metric: elliptic_metric(m),
        vnum,
        vden: Poly::from_real(&[1.0, 0.0, -m]),
        poles: elliptic_poles(m, q(3, 16), g_inner),
        infinity: InfinityData {
            g0: fixed(Scalar::zero()),
            g1: fixed(Scalar::zero()),
            g2: fixed(-aa),
        },
        parity_pairs: vec![(0, 1), (2, 3)],
        parity_basis: true,
        rules: vec![Rule::SymmetryEquivalent(-a)],
        pole_options: vec![quarter_opts(), quarter_opts(), inner_opts.clone(), inner_opts],
        infinity_options: vec![],
        sets,
        prefactors: elliptic_prefactors(),
        quarter_period: Some(k),
    })
}

fn khare_mandal(p: &ParamSet) -> Result<Skeleton> {
    let zeta = p.scalar("zeta");
    require(zeta.re() > 0.0, "zeta", "must be positive")?;
    let mm = p.scalar("M");
    let i = Scalar::i();
    // V = -(zeta t - i M)^2 = -zeta^2 t^2 + 2 i M zeta t + M^2
    let vnum = Poly::new(vec![
        (mm * mm).value,
        (Scalar::int(2) * i * mm * zeta).value,
        (-(zeta * zeta)).value,
    ]);
    let g1 = -(i * mm * zeta) / Scalar::int(2);
    Ok(Skeleton {
        variable: Variable::CoshTwo,
        domain: Domain::RealLine,
        spectrum: SpectrumKind::NonHermitian,
        metric: Poly::from_real(&[-4.0, 0.0, 4.0]),
        vnum,
        vden: Poly::one(),
        poles: vec![pole("t=1", c(1.0), fixed(q(3, 16))), pole("t=-1", c(-1.0), fixed(q(3, 16)))],
        infinity: InfinityData {
            g0: fixed(zeta * zeta / Scalar::int(4)),
            g1: fixed(g1),
            g2: Affine::new(
                (Scalar::one() - mm * mm + zeta * zeta) / Scalar::int(4),
                q(1, 4),
            ),
        },
        parity_pairs: vec![],
        parity_basis: false,
        rules: vec![],
        pole_options: vec![quarter_opts(), quarter_opts()],
        infinity_options: vec![],
        // (b1, b1'): (1/4,1/4), (3/4,3/4), (3/4,1/4), (1/4,3/4)
        sets: table(&[(1, &[1, 1], None), (2, &[0, 0], None), (3, &[0, 1], None), (4, &[1, 0], None)]),
        prefactors: vec![
            pf(Base::Sinh, -q(1, 2), vec![(0, Scalar::int(2))]),
            pf(Base::Cosh, -q(1, 2), vec![(1, Scalar::int(2))]),
        ],
        quarter_period: None,
    })
}

fn complex_scarf(p: &ParamSet) -> Result<Skeleton> {
    let (a, b) = (p.scalar("A"), p.scalar("B"));
    require(a.re() > -0.25, "A", "must exceed -1/4")?;
    let s = (q(1, 4) + a + b).sqrt();
    let t = (q(1, 4) + a - b).sqrt();
    let half = q(1, 2);
    Ok(Skeleton {
        variable: Variable::ISinh,
        domain: Domain::RealLine,
        spectrum: SpectrumKind::NonHermitian,
        metric: Poly::from_real(&[-1.0, 0.0, 1.0]),
        vnum: Poly::new(vec![(-a).value, (-b).value]),
        vden: Poly::from_real(&[1.0, 0.0, -1.0]),
        poles: vec![
            pole("y=1", c(1.0), fixed(q(3, 16) - (a + b) / Scalar::int(4))),
            pole("y=-1", c(-1.0), fixed(q(3, 16) - (a - b) / Scalar::int(4))),
        ],
        infinity: InfinityData {
            g0: fixed(Scalar::zero()),
            g1: fixed(Scalar::zero()),
            g2: Affine::new(q(1, 4), Scalar::one()),
        },
        parity_pairs: vec![],
        parity_basis: false,
        rules: vec![Rule::DecayAtInfinity],
        pole_options: vec![
            vec![
                ResidueOption::value("1/2-s/2", half - half * s),
                ResidueOption::value("1/2+s/2", half + half * s),
            ],
            vec![
                ResidueOption::value("1/2-t/2", half - half * t),
                ResidueOption::value("1/2+t/2", half + half * t),
            ],
        ],
        infinity_options: vec![],
        sets: table(&[(1, &[0, 0], None), (2, &[0, 1], None), (3, &[1, 0], None), (4, &[1, 1], None)]),
        prefactors: vec![
            pf(Base::OneMinusY, -q(1, 4), vec![(0, Scalar::one())]),
            pf(Base::OnePlusY, -q(1, 4), vec![(1, Scalar::one())]),
        ],
        quarter_period: None,
    })
}

/// Bare potential (without the energy offset) evaluated in `x`.
pub(super) fn potential(model: &Model, x: Complex64) -> Result<Complex64> {
    let p = &model.params;
    let i = Complex64::i();
    Ok(match model.id {
        ModelId::Hydrogen => {
            let (e2, l) = (p.real("e2"), p.real("l"));
            -e2 / x + l * (l + 1.0) / (x * x) + e2 * e2 / (4.0 * (l + 1.0) * (l + 1.0))
        }
        ModelId::Scarf1 => {
            let (a, b, al) = (p.real("A"), p.real("B"), p.real("alpha"));
            let sec = 1.0 / (x * al).cos();
            let tan = (x * al).tan();
            -a * a + (a * a + b * b - a * al) * sec * sec - b * (2.0 * a - al) * tan * sec
        }
        ModelId::ScarfPeriodic => {
            let s = p.real("s");
            let sn = x.sin();
            (s * s - 0.25) / (sn * sn)
        }
        ModelId::Lame => {
            real_only(x)?;
            let j = p.real("j");
            let m = p.real("m");
            let t = jacobi_sn_cn_dn(x.re, m)?;
            c(j * (j + 1.0) * m * t.sn * t.sn)
        }
        ModelId::AssocLameEs | ModelId::AssocLameQes => {
            real_only(x)?;
            let (a, b) = if model.id == ModelId::AssocLameEs {
                (p.real("j"), p.real("j"))
            } else {
                (p.real("a"), p.real("b"))
            };
            let m = p.real("m");
            let t = jacobi_sn_cn_dn(x.re, m)?;
            c(a * (a + 1.0) * m * t.sn * t.sn + b * (b + 1.0) * m * t.cn * t.cn / (t.dn * t.dn))
        }
        ModelId::KhareMandal => {
            let (z, mm) = (p.real("zeta"), p.real("M"));
            let w = (x * 2.0).cosh() * z - i * mm;
            -(w * w)
        }
        ModelId::ComplexScarf => {
            let (a, b) = (p.real("A"), p.real("B"));
            let sech = 1.0 / x.cosh();
            -a * sech * sech - i * b * sech * x.tanh()
        }
    })
}

pub(super) fn formula(model: &Model, set: Option<u8>) -> String {
    let s = set.unwrap_or(0);
    match (model.id, s) {
        (ModelId::Hydrogen, _) => "E_n = e2^2/(4(l+1)^2) - e2^2/(4(n+l+1)^2)".into(),
        (ModelId::Scarf1, _) => {
            let (a, b) = (model.params.real("A"), model.params.real("B"));
            match (a - b > 0.0, a + b > 0.0) {
                (true, true) => "E_n = (A + n alpha)^2 - A^2".into(),
                (true, false) => "E_n = (B - (n + 1/2) alpha)^2 - A^2".into(),
                _ => "E_n = alpha^2 (n + b1 + b1' - 1/2)^2 - A^2".into(),
            }
        }
        (ModelId::ScarfPeriodic, 1) => "E_n = (n + 1/2 + s)^2".into(),
        (ModelId::ScarfPeriodic, 2) => "E_n = (n + 1/2 - s)^2".into(),
        (ModelId::Lame | ModelId::AssocLameEs, _) => "det(M0 + E M1) = 0".into(),
        (ModelId::AssocLameQes, 1) => "b - a = -n - 2".into(),
        (ModelId::AssocLameQes, 2) => "a + b + 1 = n + 2".into(),
        (ModelId::AssocLameQes, 3) => "b - a = -n - 1".into(),
        (ModelId::AssocLameQes, 4) => "a + b = n".into(),
        (ModelId::KhareMandal, 1) => "M = 2n + 1".into(),
        (ModelId::KhareMandal, 2) => "M = 2n + 3".into(),
        (ModelId::KhareMandal, 3 | 4) => "M = 2n + 2".into(),
        (ModelId::ComplexScarf, _) => "E_n = -(n + b1 + b1' - 1/2)^2".into(),
        _ => "sum of residues + n = lambda1".into(),
    }
}
