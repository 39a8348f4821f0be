//! Acceptance run: one line per criterion. Exits nonzero if a criterion
//! that is expected to hold fails. Set `REPZETA_SLOW=1` for the sl3 census.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use repzeta_cli::run_args;
use repzeta_core::catalog::{
    aux_a, aux_areas_hk, aux_c, formula, shift_consistency, sl3_family_solve, subgroup_factor,
    FormulaFamily,
};
use repzeta_core::integral::{full_zeta_numeric, relative_zeta_numeric, IntegralEstimate};
use repzeta_core::lattice::linalg::{diag, q_int};
use repzeta_core::lattice::{builtin, BuiltinParams, LatticeInput};
use repzeta_core::oracle::{
    convolution_check, full_census, relative_census, thetyspectral_ratio, OracleConfig, OrbitCensus, Thety,
};
use repzeta_core::polyring::{abscissa, reduced_zeta, series_expand, specialize, specialize_series, RatFuncQT};

const A1_FULL_LIMIT: Duration = Duration::from_secs(600);
const A1_REL_LIMIT: Duration = Duration::from_secs(5);
const A2_LIMIT: Duration = Duration::from_secs(60);
const A2_WIDTH: f64 = 1e-3;
const A3_LIMIT: Duration = Duration::from_secs(60);
const A4_LIMIT: Duration = Duration::from_secs(600);
const A5_LIMIT: Duration = Duration::from_secs(120);
const A6_LIMIT: Duration = Duration::from_secs(10);
const A8_SLOW_LIMIT: Duration = Duration::from_secs(3600);
const A9_LIMIT: Duration = Duration::from_secs(300);
const A9_WIDTH: f64 = 1e-3;
const A9_SHELLS: u32 = 10;
const A9_S: i64 = 4;
const A9_MAX_L: u32 = 8;

struct Outcome {
    pass: bool,
    detail: String,
    /// Failure is the documented outcome; it does not fail the run.
    expected_fail: bool,
}

fn ok(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail, expected_fail: false }
}

fn input(sel: &str, p: u64) -> LatticeInput {
    builtin(sel, &BuiltinParams::new(p, 1)).unwrap()
}

fn cfg(lift: Option<u32>) -> OracleConfig {
    OracleConfig { lift_exp: lift, ..OracleConfig::default() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn int_coeffs(f: &RatFuncQT, p: u64, k: usize) -> Vec<BigInt> {
    specialize_series(&series_expand(f, k).unwrap(), &BigInt::from(p))
        .unwrap()
        .into_iter()
        .map(|c| c.to_integer())
        .collect()
}

fn census_coeffs(c: &OrbitCensus, ks: std::ops::RangeInclusive<u32>) -> Option<Vec<BigInt>> {
    ks.map(|k| c.is_final(k).then(|| BigInt::from(c.coefficient(k)))).collect()
}

fn full_product(sel_family: FormulaFamily) -> RatFuncQT {
    formula(&sel_family).unwrap().full
}

fn a1() -> Outcome {
    let nat = input("natural:n=1", 3);
    let (full, t_full) = timed(|| full_census(&nat.lattice(), 3, &cfg(Some(4))).unwrap());
    let want = int_coeffs(&full_product(FormulaFamily::NaturalPower { n: 1, m: 1 }), 3, 2);
    let got = census_coeffs(&full, 0..=2);
    let full_ok = got.as_ref() == Some(&want) && want[0] == BigInt::from(243);

    let sd = nat.semidirect().unwrap();
    let (rel, t_rel) = timed(|| relative_census(sd, 2, &cfg(None)).unwrap());
    let fixed = rel.orbits.iter().filter(|((_, s), _)| *s == 0).map(|(_, c)| c).sum::<u64>();
    let size9 = rel.orbits.iter().filter(|((_, s), _)| *s == 2).map(|(_, c)| c).sum::<u64>();
    let weighted: Vec<BigInt> = rel.weighted_series().coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let rel_want = int_coeffs(&formula(&FormulaFamily::NaturalPower { n: 1, m: 1 }).unwrap().relative_shifted, 3, 2);
    let rel_ok = fixed == 9 && size9 == 8 && weighted == rel_want;
    let time_ok = t_full <= A1_FULL_LIMIT && t_rel <= A1_REL_LIMIT;
    ok(
        full_ok && rel_ok && time_ok,
        format!(
            "natural n=1 p=3: full N=3 r = {got:?} vs series {want:?} ({:.1}s); relative N=2 {fixed} fixed, {size9} of size 9, a*r_a = {weighted:?} vs {rel_want:?} ({:.2}s)",
            t_full.as_secs_f64(),
            t_rel.as_secs_f64()
        ),
    )
}

fn a2() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let (_, t) = timed(|| {
        for p in [3u64, 5] {
            let c = full_census(&input("sl2", p).lattice(), 2, &cfg(Some(2))).unwrap();
            let got = census_coeffs(&c, 0..=1);
            let q = BigInt::from(p);
            let want = vec![q.pow(3), q.pow(4) - &q];
            let series = int_coeffs(&formula(&FormulaFamily::Sl2Base { m: 1 }).unwrap().full, p, 1);
            pass &= got.as_ref() == Some(&want) && series == want;
            notes.push(format!("p={p} r = {got:?}"));
        }
    });
    let (est, t2) = timed(|| full_zeta_numeric(&input("sl2", 3).lattice(), &q_int(3), 1, 10).unwrap());
    let target = BigRational::new(121.into(), 4.into());
    let w = est.width().to_f64().unwrap();
    pass &= est.contains(&target) && w <= A2_WIDTH && t + t2 <= A2_LIMIT;
    ok(
        pass,
        format!("sl2 N=2: {}; integral s=3 contains 121/4, width {w:.2e} <= {A2_WIDTH:.0e}", notes.join(", ")),
    )
}

fn a3() -> Outcome {
    let sym = input("sym2:n=1", 3);
    let fam = FormulaFamily::Sym2Power { n: 1, m: 1 };
    let b = formula(&fam).unwrap();
    let ((rel, full), t) = timed(|| {
        (
            relative_census(sym.semidirect().unwrap(), 2, &cfg(None)).unwrap(),
            full_census(&sym.lattice(), 2, &cfg(None)).unwrap(),
        )
    });
    let w = rel.weighted_series();
    let rel_got: Option<Vec<BigInt>> =
        (0..2).map(|k| w.final_mask.get(k).copied().unwrap_or(false).then(|| BigInt::from(w.coeffs[k]))).collect();
    let rel_want = int_coeffs(&b.relative_shifted, 3, 1);
    let full_got = census_coeffs(&full, 0..=0);
    let full_want = int_coeffs(&b.full, 3, 0);
    ok(
        rel_got.as_ref() == Some(&rel_want) && full_got.as_ref() == Some(&full_want) && t <= A3_LIMIT,
        format!(
            "sym2 n=1 p=3 N=2: relative {rel_got:?} vs {rel_want:?}, full r_1 {full_got:?} vs {full_want:?} ({:.1}s)",
            t.as_secs_f64()
        ),
    )
}

/// The stated H_k formula: `q^{2k+2} (1-t)((1-(qt)^{k+1}) + q t^2 (1-(qt)^{k-1})) / ((1-qt)^2 (1+qt))`
/// times the SL2 base.
fn hk_printed(k: u32) -> RatFuncQT {
    let ki = k as i32;
    let num = &RatFuncQT::one_minus(ki + 1, k + 1) + &(&RatFuncQT::qt(1, 2) * &RatFuncQT::one_minus(ki - 1, k - 1));
    let rel = &(&(&RatFuncQT::qt(2 * ki + 2, 0) * &RatFuncQT::one_minus(0, 1)) * &num)
        / &(&RatFuncQT::one_minus(1, 1).pow(2) * &(&RatFuncQT::one() + &RatFuncQT::qt(1, 1)));
    &rel * &formula(&FormulaFamily::Sl2Base { m: 1 }).unwrap().base
}

fn a4() -> Outcome {
    let ((hk, nat), t) = timed(|| {
        (
            full_census(&input("hk:k=1", 3).lattice(), 3, &cfg(Some(4))).unwrap(),
            full_census(&input("natural:n=1", 3).lattice(), 3, &cfg(Some(4))).unwrap(),
        )
    });
    let got = census_coeffs(&hk, 0..=2);
    let printed = int_coeffs(&hk_printed(1), 3, 2);
    let catalog = int_coeffs(&full_product(FormulaFamily::HkSubgroup { k: 1 }), 3, 2);
    let ratio = thetyspectral_ratio(&hk, &nat);
    let witness = match &ratio {
        Thety::NotConstant { k, a, b } => Some(format!("q^{k}: {a} vs {b}")),
        _ => None,
    };
    let printed_match = got.as_ref() == Some(&printed);
    let catalog_match = got.as_ref() == Some(&catalog);
    // the stated criterion (agreement with the printed formula) cannot hold:
    // its leading term is q^7 while the census has q^8 fixed points
    let analysed = !printed_match && catalog_match && witness.is_some() && t <= A4_LIMIT;
    Outcome {
        pass: printed_match && witness.is_some(),
        detail: format!(
            "hk k=1 p=3 full N=3: census {got:?}; printed formula {printed:?} (prefactor q^(2k+2) off by q^k); corrected catalog {catalog:?} {}; vs natural n=1: {} ({:.1}s)",
            if catalog_match { "agrees" } else { "DISAGREES" },
            witness.clone().map_or("no witness".into(), |w| format!("NotConstant at {w}")),
            t.as_secs_f64()
        ),
        expected_fail: analysed,
    }
}

fn a5() -> Outcome {
    let ((s1, g), t) = timed(|| {
        (
            full_census(&input("sk:k=1", 3).lattice(), 3, &cfg(Some(4))).unwrap(),
            full_census(&input("sl2", 3).lattice(), 3, &cfg(Some(4))).unwrap(),
        )
    });
    let ratio = thetyspectral_ratio(&s1, &g);
    let sl2 = input("sl2", 3).lattice();
    let f = subgroup_factor(&sl2, &diag(&[q_int(3), q_int(1), q_int(3)])).unwrap();
    let nine = BigRational::from_integer(9.into());
    let ratio_ok = matches!(&ratio, Thety::Constant { ratio, compared } if *ratio == nine && !compared.is_empty());
    ok(
        ratio_ok && f.factor_exponent == 2 && t <= A5_LIMIT,
        format!("s1 vs sl2 p=3 N=3: {ratio:?}; subgroup_factor diag(3,1,3) = q^{} ({:.1}s)", f.factor_exponent, t.as_secs_f64()),
    )
}

fn a6() -> Outcome {
    let (res, t) = timed(|| -> Result<(), String> {
        for n in 1..=4 {
            shift_consistency(&FormulaFamily::NaturalPower { n, m: 1 }).map_err(|e| e.to_string())?;
            shift_consistency(&FormulaFamily::Sym2Power { n, m: 1 }).map_err(|e| e.to_string())?;
        }
        for k in 1..=3 {
            shift_consistency(&FormulaFamily::HkSubgroup { k }).map_err(|e| e.to_string())?;
            aux_areas_hk(k).map_err(|e| e.to_string())?;
        }
        for n in 1..=3 {
            for j in 1..=4 {
                aux_a(n, j).map_err(|e| e.to_string())?;
            }
        }
        for n in 1..=2 {
            for j in 1..=3 {
                aux_c(n, j).map_err(|e| e.to_string())?;
            }
        }
        let mut fams = Vec::new();
        for n in 1..=4 {
            for m in 1..=2 {
                fams.push(FormulaFamily::NaturalPower { n, m });
                fams.push(FormulaFamily::Sym2Power { n, m });
            }
        }
        fams.extend((1..=3).map(|k| FormulaFamily::HkSubgroup { k }));
        fams.extend((1..=2).map(|m| FormulaFamily::Sl2Base { m }));
        for f in fams {
            let r = reduced_zeta(&formula(&f).unwrap().full).map_err(|e| e.to_string())?;
            if r != RatFuncQT::one() {
                return Err(format!("reduced zeta of {f:?} is {r}"));
            }
        }
        let alpha = |f: FormulaFamily| abscissa(&formula(&f).unwrap().full).unwrap().alpha;
        let nat: Vec<_> = (1..=4).map(|n| alpha(FormulaFamily::NaturalPower { n, m: 1 })).collect();
        let sym: Vec<_> = (1..=3).map(|n| alpha(FormulaFamily::Sym2Power { n, m: 1 })).collect();
        if nat != [(1, 1), (3, 2), (2, 1), (8, 3)] || sym != [(3, 2), (2, 1), (3, 1)] {
            return Err(format!("abscissae {nat:?} {sym:?}"));
        }
        Ok(())
    });
    ok(
        res.is_ok() && t <= A6_LIMIT,
        format!(
            "shift, aux A/B/C, area and reduced-zeta identities, abscissae: {} ({:.2}s)",
            res.err().unwrap_or_else(|| "all exact".into()),
            t.as_secs_f64()
        ),
    )
}

fn a7() -> Outcome {
    let nat = input("natural:n=1", 3);
    let (rows, t) = timed(|| {
        let full = full_census(&nat.lattice(), 3, &cfg(Some(4))).unwrap();
        let rel = relative_census(nat.semidirect().unwrap(), 3, &cfg(None)).unwrap();
        let base = full_census(&input("sl2", 3).lattice(), 3, &cfg(Some(4))).unwrap();
        convolution_check(&full, &rel, &base, 2)
    });
    match rows {
        Ok(rows) => {
            let cells: Vec<String> = rows.iter().map(|r| format!("q^{}: {} = {}", r.k, r.lhs, r.rhs)).collect();
            ok(
                rows.iter().all(|r| r.pass) && t <= A1_FULL_LIMIT,
                format!("natural n=1 p=3, oracle only: {} ({:.1}s)", cells.join(", "), t.as_secs_f64()),
            )
        }
        Err(e) => ok(false, format!("convolution check: {e}")),
    }
}

fn a8() -> Outcome {
    let sl3 = input("sl3", 3).lattice();
    let mut parts = Vec::new();
    let mut pass = true;
    for ((k6, k7, k8), vec, want) in [
        ((1, 1, 1), [1u32; 8], 8i64),
        ((2, 1, 1), [2, 2, 2, 3, 3, 2, 1, 1], 16),
    ] {
        let ks = sl3_family_solve(k6, k7, k8).unwrap();
        let xi = diag(&ks.map(|k| BigRational::from_integer(BigInt::from(3).pow(k))));
        let f = subgroup_factor(&sl3, &xi).map(|r| r.factor_exponent);
        pass &= ks == vec && f == Ok(want);
        parts.push(format!("({k6},{k7},{k8}) -> {ks:?}, factor q^{}", f.map_or("?".into(), |v| v.to_string())));
    }
    pass &= sl3_family_solve(0, 3, 0).is_err();
    ok(pass, format!("{}; (0,3,0) infeasible", parts.join("; ")))
}

fn a8_slow() -> Option<Outcome> {
    if std::env::var("REPZETA_SLOW").ok().as_deref() != Some("1") {
        return None;
    }
    let sl3 = input("sl3", 3).lattice();
    let ks = sl3_family_solve(1, 1, 1).unwrap();
    let xi = diag(&ks.map(|k| BigRational::from_integer(BigInt::from(3).pow(k))));
    let sub = repzeta_core::lattice::sublattice(&sl3, &xi).unwrap();
    let big = OracleConfig { budget: 100_000_000, ..OracleConfig::default() };
    let ((a, b), t) = timed(|| (full_census(&sub, 2, &big), full_census(&sl3, 2, &big)));
    Some(match (a, b) {
        (Ok(a), Ok(b)) => {
            let r = thetyspectral_ratio(&a, &b);
            let want = BigRational::from_integer(BigInt::from(3).pow(8));
            ok(
                matches!(&r, Thety::Constant { ratio, .. } if *ratio == want) && t <= A8_SLOW_LIMIT,
                format!("sl3 N=2 census ratio {r:?} ({:.0}s)", t.as_secs_f64()),
            )
        }
        (a, b) => ok(false, format!("sl3 census failed: {:?} {:?}", a.err(), b.err())),
    })
}

fn a9() -> Outcome {
    let q = BigInt::from(3);
    let t_val = BigRational::new(1.into(), q.pow(A9_S as u32));
    let cases: Vec<(&str, RatFuncQT, Box<dyn Fn(u32) -> IntegralEstimate>)> = vec![
        (
            "sl2",
            formula(&FormulaFamily::Sl2Base { m: 1 }).unwrap().full,
            Box::new(|l| full_zeta_numeric(&input("sl2", 3).lattice(), &q_int(A9_S), l, A9_SHELLS).unwrap()),
        ),
        (
            "natural n=1",
            formula(&FormulaFamily::NaturalPower { n: 1, m: 1 }).unwrap().relative_unshifted,
            Box::new(|l| {
                relative_zeta_numeric(input("natural:n=1", 3).semidirect().unwrap(), &q_int(A9_S), l, A9_SHELLS).unwrap()
            }),
        ),
        (
            "sym2 n=1",
            formula(&FormulaFamily::Sym2Power { n: 1, m: 1 }).unwrap().relative_unshifted,
            Box::new(|l| {
                relative_zeta_numeric(input("sym2:n=1", 3).semidirect().unwrap(), &q_int(A9_S), l, A9_SHELLS).unwrap()
            }),
        ),
        (
            "hk k=1",
            formula(&FormulaFamily::HkSubgroup { k: 1 }).unwrap().relative_unshifted,
            Box::new(|l| {
                relative_zeta_numeric(input("hk:k=1", 3).semidirect().unwrap(), &q_int(A9_S), l, A9_SHELLS).unwrap()
            }),
        ),
    ];
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, f, est) in cases {
        let exact = specialize(&f, &q, &t_val).unwrap();
        let mut found = None;
        for l in 1..=A9_MAX_L {
            let e = est(l);
            if !e.contains(&exact) {
                pass = false;
                notes.push(format!("{name}: L={l} interval misses {exact}"));
                break;
            }
            if e.width().to_f64().unwrap() <= A9_WIDTH {
                found = Some((l, e.width().to_f64().unwrap()));
                break;
            }
        }
        match found {
            Some((l, w)) => notes.push(format!("{name} L={l} width {w:.1e}")),
            None => {
                pass = false;
                notes.push(format!("{name}: no L <= {A9_MAX_L} reaches width {A9_WIDTH:.0e}"));
            }
        }
    }
    let t = start.elapsed();
    ok(
        pass && t <= A9_LIMIT,
        format!("p=3 s={A9_S} J={A9_SHELLS}, contains catalog value: {} ({:.1}s)", notes.join("; "), t.as_secs_f64()),
    )
}

fn a10() -> Outcome {
    let reports: Vec<(i32, String)> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            run_args([
                "repzeta", "compare", "--spec", "builtin:natural:n=1", "--p", "3", "--m", "1", "--level", "3",
                "--workers", w,
            ])
        })
        .collect();
    let same = reports.windows(2).all(|w| w[0] == w[1]);
    ok(
        same && reports[0].0 == 0,
        format!("compare report over 1, 2, 8 workers: {} bytes each, identical = {same}", reports[0].1.len()),
    )
}

fn main() {
    let checks: Vec<(&str, fn() -> Outcome)> = vec![
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
    ];
    let mut unexpected = 0;
    for (name, f) in checks {
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && o.expected_fail { " [known, see analysis]" } else { "" };
        println!("{name} {status}{note} {}", o.detail);
        if !o.pass && !o.expected_fail {
            unexpected += 1;
        }
    }
    match a8_slow() {
        Some(o) => {
            println!("A8-slow {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            if !o.pass {
                unexpected += 1;
            }
        }
        None => println!("A8-slow SKIPPED set REPZETA_SLOW=1 for the sl3 census at N=2"),
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
