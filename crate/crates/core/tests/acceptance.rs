//! One PASS/FAIL line per acceptance criterion. All residuals are exact, so
//! every tolerance is zero; runtime budgets are printed alongside.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use pottsloop::curve::{check_curve, check_recurrences, compute_moments, MomentSet, MomentVariant, Shift};
use pottsloop::freealg::{NCSeries, Side, Truncation, Word, PERMUTATIONS};
use pottsloop::loopcat::{acceptance_equations, check_catalog, check_descriptors, descriptors, LoopTruncation};
use pottsloop::oracle::{compare_with_solver, planar_moment};
use pottsloop::ring::{GSeries, RationalFunction, Ring};
use pottsloop::solver::{
    eq31_residual, generating_residual, solve_pure_gravity, solve_to, AmplitudeMap, Amplitudes, ModelKind, ModelSpec,
    Recorder, SolutionTable,
};
use pottsloop::{CPoly, FastCPoly, Result};

/// Zero tolerance everywhere: an exact residual either vanishes or it does not.
const TOLERANCE: u32 = 0;
const GRADE: usize = 12;
const LOOP_TRUNCATION: (usize, usize) = (6, 6);
const RECURRENCE_ORDER: usize = 8;
const CURVE_TRUNCATION: (usize, usize) = (8, 8);
const GRAVITY_TRUNCATION: (usize, usize) = (10, 10);
const CONSISTENCY_BUDGET: Duration = Duration::from_secs(60);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn couplings() -> [BigRational; 3] {
    [q(1, 5), q(1, 4), q(1, 3)]
}

type Outcome = Result<(bool, String)>;

/// The grade-12 table at symbolic `c`, shared by the consistency and symmetry checks.
fn grade_table() -> Result<&'static SolutionTable<FastCPoly>> {
    static T: OnceLock<SolutionTable<FastCPoly>> = OnceLock::new();
    if let Some(t) = T.get() {
        return Ok(t);
    }
    let t = solve_to(&ModelSpec::potts(FastCPoly::var(), GRADE / 2, 0)?, GRADE)?;
    Ok(T.get_or_init(|| t))
}

fn consistency() -> Outcome {
    let t0 = Instant::now();
    let table = grade_table()?;
    let ng = GRADE / 2;
    let full = generating_residual(table);
    let recast = eq31_residual(table);
    let elapsed = t0.elapsed();
    let full_reach = full.trunc().complete_grade(ng);
    // the recast form strips one letter, so its outputs at grade G read Φ at G + 1
    let recast_reach = recast.trunc().complete_grade(ng) + 1;
    let reach = full_reach.min(recast_reach);
    let ok = full.is_zero() && recast.is_zero() && reach >= GRADE as i64 && elapsed < CONSISTENCY_BUDGET;
    Ok((
        ok,
        format!(
            "generating equation (grade {full_reach}) and recast form (parent grade {recast_reach}) vanish ({} coefficients, {:.1}s of {}s)",
            table.stats.entries,
            elapsed.as_secs_f64(),
            CONSISTENCY_BUDGET.as_secs()
        ),
    ))
}

fn loop_catalog() -> Outcome {
    let t = LoopTruncation::new(LOOP_TRUNCATION.0, LOOP_TRUNCATION.1);
    let eqs = acceptance_equations();
    let mut failed: Vec<String> = Vec::new();
    let mut tally = |label: String, passed: Vec<(&str, bool)>| {
        failed.extend(passed.into_iter().filter(|(_, p)| !p).map(|(id, _)| format!("{id}@{label}")));
    };
    let symbolic = check_catalog(&ModelSpec::potts(CPoly::var(), t.g_order, 0)?, &eqs, t)?;
    tally("c".into(), symbolic.iter().map(|r| (r.id, r.passed())).collect());
    for c in couplings() {
        let reports = check_catalog(&ModelSpec::potts(c.clone(), t.g_order, 0)?, &eqs, t)?;
        tally(c.to_string(), reports.iter().map(|r| (r.id, r.passed())).collect());
    }
    Ok((
        eqs.len() == 24 && failed.is_empty(),
        format!("{} equations to x^{} g^{}, symbolic c and c in {{1/5, 1/4, 1/3}}; failing: {failed:?}", eqs.len(), t.x_order, t.g_order),
    ))
}

fn moment_table(n: usize) -> Result<MomentSet<CPoly>> {
    let rec = Recorder::new(n);
    let _: MomentSet<CPoly> = compute_moments(&rec, n)?;
    let amps = AmplitudeMap::solve(&ModelSpec::potts(CPoly::var(), n, 0)?, rec.requests())?;
    compute_moments(&amps, n)
}

fn recurrences() -> Outcome {
    let m = moment_table(RECURRENCE_ORDER)?;
    let reports = check_recurrences(&CPoly::var(), &m);
    let failing: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    Ok((
        reports.len() == 3 && failing.is_empty(),
        format!("{} recurrences to g^{RECURRENCE_ORDER}; failing: {failing:?}", reports.len()),
    ))
}

fn spectral_curve() -> Outcome {
    let t0 = Instant::now();
    let t = LoopTruncation::new(CURVE_TRUNCATION.0, CURVE_TRUNCATION.1);
    let spec = ModelSpec::potts(CPoly::var(), t.g_order, 0)?;
    let reports = check_curve(&spec, t, &MomentVariant::ALL, Shift::Corrected)?;
    let passing: Vec<&str> = reports.iter().filter(|r| r.passed()).map(|r| r.variant.word()).collect();
    let notes: Vec<String> = reports
        .iter()
        .map(|r| match &r.first_nonzero {
            None => format!("p{} vanishes through x^{}", r.variant.word(), r.known_through),
            Some(nz) => format!("p{} fails at x^{} g^{}", r.variant.word(), nz.x_power, nz.g_power),
        })
        .collect();
    Ok((
        !passing.is_empty(),
        format!(
            "quintic residual to x^{} g^{}, symbolic c; passing variant {passing:?}; {} ({:.1}s)",
            t.x_order,
            t.g_order,
            notes.join(", "),
            t0.elapsed().as_secs_f64()
        ),
    ))
}

fn oracle() -> Outcome {
    let table = |kind: ModelKind, max_n: usize, max_len: usize| -> Result<AmplitudeMap<CPoly>> {
        let spec = match kind {
            ModelKind::Potts3 => ModelSpec::potts(CPoly::var(), max_n, max_len)?,
            ModelKind::PureGravity => ModelSpec::pure_gravity(max_n, max_len),
        };
        let requests = (1..=max_len).flat_map(Word::all_of_len).flat_map(|w| (0..=max_n).map(move |n| (w, n)));
        AmplitudeMap::solve(&spec, requests)
    };
    let potts = table(ModelKind::Potts3, 3, 4)?;
    let a = compare_with_solver(ModelKind::Potts3, &potts, 3, 4)?;
    let gravity = table(ModelKind::PureGravity, 2, 6)?;
    let b = compare_with_solver(ModelKind::PureGravity, &gravity, 2, 6)?;

    let c = CPoly::var();
    let one = CPoly::one();
    let spots = [("00", one.clone()), ("01", c.clone()), ("0011", one.clone() + c.clone() * c), ("0000", CPoly::from_i64(2))];
    let mut spot_ok = true;
    for (w, want) in &spots {
        let w: Word = w.parse()?;
        let from_oracle = planar_moment(ModelKind::Potts3, &w, 0)?;
        spot_ok &= from_oracle == RationalFunction::from(want) && potts.amplitude(&w, 0)? == *want;
    }
    Ok((
        a.passed() && b.passed() && spot_ok,
        format!(
            "Potts |w|<=4 n<=3: {} checked, {} mismatched; gravity |w|<=6 n<=2: {} checked, {} mismatched; spot values {}",
            a.checked,
            a.mismatches.len(),
            b.checked,
            b.mismatches.len(),
            if spot_ok { "match" } else { "differ" }
        ),
    ))
}

fn pure_gravity() -> Outcome {
    let (nx, ng) = GRAVITY_TRUNCATION;
    let chk = solve_pure_gravity(ng, nx)?;
    Ok((
        chk.matches() && chk.operator_form_residual.is_none(),
        format!(
            "series vs quadratic branch to x^{nx} g^{ng}: first mismatch {:?}; operator-form residual {}",
            chk.first_mismatch,
            if chk.operator_form_residual.is_none() { "zero" } else { "nonzero" }
        ),
    ))
}

fn schwinger_dyson() -> Outcome {
    let t = LoopTruncation::new(LOOP_TRUNCATION.0, LOOP_TRUNCATION.1);
    let descs: Vec<_> = descriptors().iter().collect();
    let mut failing: Vec<String> = Vec::new();
    for r in check_descriptors(&ModelSpec::potts(CPoly::var(), t.g_order, 0)?, &descs, t)? {
        if r.residual.is_some() {
            failing.push(format!("{}@c", r.index));
        }
    }
    for c in couplings() {
        for r in check_descriptors(&ModelSpec::potts(c.clone(), t.g_order, 0)?, &descs, t)? {
            if r.residual.is_some() {
                failing.push(format!("{}@{c}", r.index));
            }
        }
    }
    Ok((
        descs.len() == 23 && failing.is_empty(),
        format!("{} descriptors to x^{} g^{}, symbolic c and c in {{1/5, 1/4, 1/3}}; failing: {failing:?}", descs.len(), t.x_order, t.g_order),
    ))
}

fn symmetry() -> Outcome {
    let phi = &grade_table()?.phi;
    let cyclic = phi.iter().all(|(w, c)| (1..w.len()).all(|k| phi.get(&w.rotate(k)).as_ref() == Some(c)));
    let s3 = PERMUTATIONS.iter().all(|&s| phi.iter().all(|(w, c)| phi.get(&w.permute(s)).as_ref() == Some(c)));
    let parity = phi.iter().all(|(w, c)| c.coeffs().iter().enumerate().all(|(n, a)| (w.len() + n) % 2 == 0 || a.is_zero()));
    let small = phi.restrict(&Truncation::graded(8, 4, 8));
    let strings: Vec<Vec<u8>> = (0..=2).flat_map(Word::all_of_len).map(|w| w.to_vec()).collect();
    let rule = strings
        .iter()
        .flat_map(|l| strings.iter().filter(|r| !r.is_empty()).map(move |r| (l, r)))
        .all(|(l, r)| {
            let (a, b) = small.cyclic_transfer(l, r);
            a == b
        });
    let witness = NCSeries::monomial(Truncation::new(2, 0), "01".parse()?, GSeries::<BigInt>::one());
    let (a, b) = witness.cyclic_transfer(&[0], &[1]);
    let quad = phi.restrict(&Truncation::new(4, 1));
    let quad = quad.mul(&quad.mul_letter(Side::Left, 0));
    let (qa, qb) = quad.cyclic_transfer(&[1, 0], &[1, 2]);
    let witnesses_fail = a != b && qa != qb;
    Ok((
        cyclic && s3 && parity && rule && witnesses_fail,
        format!(
            "{} coefficients to grade {GRADE}: cyclic {cyclic}, S3 {s3}, parity {parity}; transfer rule on phi {rule}, fails on x0x1 and phi x0 phi {witnesses_fail}",
            phi.len()
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("generating-equation consistency", consistency),
        ("loop-equation catalog", loop_catalog),
        ("moment recurrences", recurrences),
        ("spectral curve", spectral_curve),
        ("oracle equivalence", oracle),
        ("pure gravity closed form", pure_gravity),
        ("Schwinger-Dyson identities", schwinger_dyson),
        ("symmetry suite", symmetry),
    ];
    println!("acceptance (tolerance {TOLERANCE}, exact arithmetic)");
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "{} {}. {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t0.elapsed().as_secs_f64()
        );
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
