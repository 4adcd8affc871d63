//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdicts are always printed.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use brackets_core::algebra::rational::{int, rat};
use brackets_core::algebra::{AffineForm, GammaExpr, Symbol};
use brackets_core::bracket::{Bracket, BracketSeries};
use brackets_core::derivation::Derivation;
use brackets_core::eval::{cofactor_determinant, rule_e1, rule_e2, rule_e3_enumerate, ClosedForm, LinearSystem};
use brackets_core::mellin_barnes::{rule_e4, rule_e5};
use brackets_core::numerics::quadrature::{integrate_to_infinity, Tolerance};
use brackets_core::numerics::{eval_ei_neg, eval_k0, k0_cosine_integral, mellin_moment, quad_2d_main_integral};
use brackets_core::pipeline::{
    bracketized_series, derive, direct3_series, mellin_barnes_integral, MellinParams, PipelineId,
};
use brackets_core::reference::{self, printed_rhs};
use brackets_core::representations::{catalog_get, mellin_to_series, Function, MellinEntry, RepKind, XI};
use brackets_core::Error;
use common::*;
use rand::Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn acc1_closed_form() -> Verdict {
    let start = Instant::now();
    let (cf, trace) = derive(PipelineId::Direct3, &MellinParams::default());
    let cf = cf.map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(cf.equivalent(&ClosedForm::new(printed_rhs())), || format!("closed form {cf}"))?;
    let e2 = trace.iter().find(|t| t.rule.name() == "E2").ok_or("no E2 record")?;
    let sys = e2.system.as_ref().ok_or("E2 record has no system")?;
    ensure(sys.abs_determinant.as_deref() == Some("6"), || format!("|det| = {:?}", sys.abs_determinant))?;
    let sol: BTreeMap<&str, &str> = sys.solution.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let expected = [
        ("i", "-alpha/3 - beta/3"),
        ("k", "-alpha/3 - beta/3"),
        ("n", "-alpha/6 + beta/3"),
        ("l", "-alpha/6 + beta/3"),
        ("m", "alpha/6 - beta/3 - 1/2"),
    ];
    for (k, v) in expected {
        ensure(sol.get(k) == Some(&v), || format!("{k}* = {:?}, want {v}", sol.get(k)))?;
    }
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("|det A| = 6, five starred indices exact, {elapsed:.2?}"))
}

fn acc2_seven_routes() -> Verdict {
    let start = Instant::now();
    let mut forms = Vec::new();
    for id in PipelineId::ALL {
        let (cf, _) = derive(id, &MellinParams::default());
        forms.push((id, cf.map_err(|e| format!("{id}: {e}"))?));
    }
    let mut r = rng(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (a, b) = validated_point(&mut r);
        let want = reference::value(a, b);
        let values: Vec<f64> = forms
            .iter()
            .map(|(id, cf)| value_at(cf, a, b).ok_or_else(|| format!("{id} diverges at ({a}, {b})")))
            .collect::<Result<_, _>>()?;
        for x in &values {
            worst = worst.max(rel_diff(*x, want));
            for y in &values {
                worst = worst.max(rel_diff(*x, *y));
            }
        }
    }
    ensure(worst <= 1e-10, || format!("worst relative difference {worst:.2e}"))?;
    let (_, base) = &forms[0];
    for (id, cf) in &forms {
        ensure(cf.equivalent(base), || format!("{id} not canonically equal to direct3"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("20 points, worst {worst:.1e}, all 7 canonically equal, {elapsed:.2?}"))
}

fn acc3_quadrature() -> Verdict {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (a, b) in [(5.0, 1.0), (7.0, 2.0)] {
        let q = quad_2d_main_integral(a, b, 1e-3).map_err(|e| e.to_string())?;
        let want = reference::value(a, b);
        let rel = rel_diff(q.value, want);
        ensure(q.converged, || format!("({a}, {b}) did not converge"))?;
        ensure(rel <= 1e-3, || format!("({a}, {b}): {} vs {want}, rel {rel:.1e}", q.value))?;
        parts.push(format!("({a},{b}) rel {rel:.1e}"));
    }
    ensure(rel_diff(reference::value(5.0, 1.0), -PI / 12.0) < 1e-14, || "reference at (5,1) is not -π/12".into())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("{}, {elapsed:.2?}", parts.join(", ")))
}

fn acc4_parametric_collapse() -> Verdict {
    let cases = [
        (Function::Ei, int(1), int(0), RepKind::Divergent),
        (Function::K0, int(2), int(0), RepKind::Divergent),
        (Function::K0, int(-2), int(-1), RepKind::Null),
    ];
    for (f, a, b, kind) in cases {
        let generated =
            mellin_to_series(&MellinEntry::of(f), &a, &AffineForm::constant(b.clone()), &Symbol::index("q"))
                .map_err(|e| e.to_string())?;
        let catalog = catalog_get(&mut Derivation::new(), f, kind).map_err(|e| e.to_string())?;
        ensure(generated.series.equivalent(&catalog.series), || format!("{f} at ({a}, {b}) is not {kind}"))?;
    }
    let mut r = rng(99);
    let (base, _) = derive(PipelineId::MellinParam, &MellinParams::default());
    let base = base.map_err(|e| e.to_string())?;
    let points: Vec<(f64, f64)> = (0..5).map(|_| validated_point(&mut r)).collect();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let nonzero = |r: &mut rand_chacha::ChaCha8Rng| loop {
            let q = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
            if q != int(0) {
                break q;
            }
        };
        let p = MellinParams::new(nonzero(&mut r), random_rational(&mut r), nonzero(&mut r), random_rational(&mut r))
            .map_err(|e| e.to_string())?;
        let (cf, _) = derive(PipelineId::MellinParam, &p);
        let cf = cf.map_err(|e| format!("{p}: {e}"))?;
        for &(a, b) in &points {
            let x = value_at(&cf, a, b).ok_or("divergent value")?;
            let y = value_at(&base, a, b).ok_or("divergent value")?;
            worst = worst.max(rel_diff(x, y));
        }
    }
    ensure(worst <= 1e-10, || format!("parameter dependence {worst:.1e}"))?;
    Ok(format!("three collapses canonical, 10 parameter choices within {worst:.1e}"))
}

fn acc5_rule_coherence() -> Verdict {
    // E2 = E1 on 1x1 instances
    let mut r = rng(5);
    let n = idx("n");
    for _ in 0..50 {
        let a = loop {
            let a = random_rational(&mut r);
            if a != int(0) {
                break a;
            }
        };
        let arg = AffineForm::term(n.clone(), a) + random_parameter_form(&mut r);
        let coefficient = GammaExpr::gamma(AffineForm::symbol(n.clone()).add_constant(&random_rational(&mut r)));
        let s = BracketSeries::new(vec![n.clone()], coefficient, BTreeMap::new(), vec![Bracket::new(arg).unwrap()])
            .unwrap();
        ensure(rule_e1(&s) == rule_e2(&s), || format!("E1 and E2 differ on {s}"))?;
    }
    // E4 twice = E5
    let bi = mellin_barnes_integral(&mut Derivation::new()).map_err(|e| e.to_string())?;
    let direct = rule_e5(&bi).map_err(|e| e.to_string())?;
    for first in 0..2 {
        let v1 = bi.contour_vars()[first].clone();
        let v2 = bi.contour_vars()[1 - first].clone();
        let using = bi.brackets().iter().find(|b| b.arg().contains(&v1)).unwrap();
        let step = rule_e4(&bi, &v1, using).and_then(|o| o.into_integral()).map_err(|e| e.to_string())?;
        let last = step.brackets()[0].clone();
        let v = rule_e4(&step, &v2, &last).and_then(|o| o.into_value()).map_err(|e| e.to_string())?;
        ensure(v.equivalent(&direct), || format!("E4 twice gives {v}, E5 gives {direct}"))?;
    }
    // elimination order on both fixtures
    let mut orders = 0;
    for build in [direct3_series, bracketized_series] {
        let s = build(&mut Derivation::new()).map_err(|e| e.to_string())?;
        let direct = rule_e2(&s).map_err(|e| e.to_string())?;
        for order in permutations(s.indices()) {
            let v = eliminate_in_order(&s, &order).map_err(|e| e.to_string())?;
            ensure(v.equivalent(&direct), || format!("order {order:?} gives {v}"))?;
            orders += 1;
        }
    }
    // Bareiss against cofactor expansion
    let mut checked = 0;
    while checked < 200 {
        let size = r.gen_range(1..=4);
        let m = random_matrix(&mut r, size, size);
        let det = cofactor_determinant(&m);
        let unknowns: Vec<Symbol> = (0..size).map(|i| idx(&format!("u{i}"))).collect();
        let rhs: Vec<AffineForm> = (0..size).map(|_| random_parameter_form(&mut r)).collect();
        let sys = LinearSystem::new(unknowns.clone(), m.clone(), rhs.clone()).map_err(|e| e.to_string())?;
        match sys.solve() {
            Ok(sol) => {
                ensure(sol.determinant == det, || format!("det {} vs cofactor {det}", sol.determinant))?;
                for (row, c) in m.iter().zip(&rhs) {
                    let lhs =
                        unknowns.iter().zip(row).fold(AffineForm::zero(), |acc, (u, a)| acc + sol.bindings[u].scale(a));
                    ensure(&lhs == c, || "solution does not satisfy the system".into())?;
                }
                checked += 1;
            }
            Err(Error::NoAssignment(_)) => ensure(det == int(0), || "nonsingular system reported singular".into())?,
            Err(e) => return Err(e.to_string()),
        }
    }
    // E3: negative index rejected, positive index enumerated in full
    let f = AffineForm::symbol(n.clone());
    let negative = BracketSeries::new(
        vec![n.clone()],
        GammaExpr::one(),
        BTreeMap::new(),
        vec![Bracket::new(f.clone()).unwrap(), Bracket::new(f.add_constant(&int(1))).unwrap()],
    )
    .unwrap();
    ensure(matches!(rule_e3_enumerate(&negative), Err(Error::NoAssignment(_))), || "negative index accepted".into())?;
    let (p, q) = (idx("p"), idx("q"));
    let c = Symbol::parameter("c");
    let pair = BracketSeries::new(
        vec![p.clone(), q.clone()],
        GammaExpr::one(),
        BTreeMap::new(),
        vec![Bracket::new(AffineForm::symbol(p) + AffineForm::symbol(q) - AffineForm::symbol(c)).unwrap()],
    )
    .unwrap();
    let candidates = rule_e3_enumerate(&pair).map_err(|e| e.to_string())?;
    ensure(candidates.len() == 2, || format!("{} candidates for <p + q - c>", candidates.len()))?;
    Ok(format!("E1=E2 x50, E4∘E4=E5, {orders} elimination orders, 200 Bareiss systems, E3 checks"))
}

fn acc6_bracketized_k0() -> Verdict {
    let mut d = Derivation::new();
    let err = |e: Error| e.to_string();
    let bi = d.mellin_barnes(&MellinEntry::k0(), "z").map_err(err)?;
    let z = bi.contour_vars()[0].clone();
    let bi = d.change_variable(&bi, &z, "t", &int(2)).map_err(err)?;
    let t = AffineForm::symbol(bi.contour_vars()[0].clone());
    let bi = d.bracketize(&bi, &t, "n").map_err(err)?;
    let bi = d.bracketize(&bi, &t, "m").map_err(err)?;
    let tm = bi.brackets()[1].clone();
    let series = d.e4(&bi, &bi.contour_vars()[0].clone(), &tm).and_then(|o| o.into_series()).map_err(err)?;
    let nm = series.brackets()[0].clone();
    let reduced = d.eliminate(&series, &Symbol::index("n"), &nm).map_err(err)?;
    let divergent = catalog_get(&mut Derivation::new(), Function::K0, RepKind::Divergent).map_err(err)?;
    ensure(reduced.equivalent(&divergent.series), || format!("got {reduced}"))?;
    let k = Symbol::index("k");
    let kf = AffineForm::symbol(k.clone());
    let display = BracketSeries::new(
        vec![k],
        GammaExpr::rational(rat(1, 2)) * GammaExpr::gamma(-&kf) * GammaExpr::power(int(4), -&kf),
        [(XI.to_string(), kf.scale(&int(2)))].into(),
        vec![],
    )
    .unwrap();
    ensure(reduced.equivalent(&display), || format!("got {reduced}"))?;
    Ok(format!("{}", reduced.canonical()))
}

fn acc7_special_functions() -> Verdict {
    let k = mellin_moment(eval_k0, 2.0, 1e-10).value;
    let e = mellin_moment(eval_ei_neg, 2.0, 1e-10).value;
    ensure((k - 1.0).abs() <= 1e-6, || format!("∫ξK0 = {k}"))?;
    ensure((e + 0.5).abs() <= 1e-6, || format!("∫ξEi(-ξ) = {e}"))?;
    let mut worst = 0.0f64;
    for x in [0.1, 1.0, 5.0] {
        let by_quadrature = k0_cosine_integral(x).map_err(|e| e.to_string())?;
        worst = worst.max(rel_diff(by_quadrature, eval_k0(x).unwrap()));
        let ei = -integrate_to_infinity(|t| (-t).exp() / t, x, 1.0, Tolerance::new(0.0, 1e-13)).value;
        worst = worst.max(rel_diff(ei, eval_ei_neg(x).unwrap()));
    }
    ensure(worst <= 1e-8, || format!("series vs quadrature {worst:.1e}"))?;
    Ok(format!("moments {:.1e}, {:.1e}; cross-checks within {worst:.1e}", (k - 1.0).abs(), (e + 0.5).abs()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("ACC1", "closed-form reproduction", acc1_closed_form),
        ("ACC2", "seven-route agreement", acc2_seven_routes),
        ("ACC3", "desk-scale quadrature", acc3_quadrature),
        ("ACC4", "parametric collapse", acc4_parametric_collapse),
        ("ACC5", "rule coherence", acc5_rule_coherence),
        ("ACC6", "bracketized K0 remark", acc6_bracketized_k0),
        ("ACC7", "special-function numerics", acc7_special_functions),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("{id} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
