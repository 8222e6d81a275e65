use num_rational::BigRational;
use num_traits::Zero;

use pottsloop::error::Error;
use pottsloop::freealg::Word;
use pottsloop::loopcat::{
    acceptance_equations, descriptor, equation, extract_amplitude, extract_symmetrized, first_nonzero, loop_residual,
    moment, sd_residual, Form, LoopEquation, LoopTruncation,
};
use pottsloop::ring::{GSeries, Ring};
use pottsloop::solver::{AmplitudeMap, Amplitudes, ModelSpec, Recorder};
use pottsloop::{CPoly, Rational, Result};

const T: LoopTruncation = LoopTruncation { x_order: 5, g_order: 4 };

fn q(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn accepted(id: &str) -> &'static LoopEquation {
    acceptance_equations().into_iter().find(|e| e.id == id).unwrap()
}

/// Solve exactly what `probe` reads, then run it on the solution.
fn on_solution<R: Ring, O>(c: R, probe: impl Fn(&Lookup<'_, R>) -> Result<O>) -> O {
    let rec = Recorder::new(T.g_order);
    let _ = probe(&Lookup(&|w, n| rec.amplitude(w, n)));
    let amps = AmplitudeMap::solve(&ModelSpec::potts(c, T.g_order, 0).unwrap(), rec.requests()).unwrap();
    probe(&Lookup(&|w, n| amps.amplitude(w, n))).unwrap()
}

fn residual_vanishes<R: Ring>(eq: &LoopEquation, c: R) -> bool {
    let rec = Recorder::new(T.g_order);
    loop_residual(eq, &c, &rec, T).unwrap();
    let amps = AmplitudeMap::solve(&ModelSpec::potts(c.clone(), T.g_order, 0).unwrap(), rec.requests()).unwrap();
    first_nonzero(&loop_residual(eq, &c, &amps, T).unwrap(), T).is_none()
}

#[test]
fn leading_equations_vanish() {
    for id in ["3.6", "3.16"] {
        assert!(residual_vanishes(accepted(id), CPoly::var()), "{id}");
        assert!(residual_vanishes(accepted(id), q(2, 7)), "{id}");
    }
}

#[test]
fn decoupled_limit_is_pure_gravity() {
    assert!(residual_vanishes(accepted("3.6"), Rational::zero()));
    // at c = 0 the x0 moments are those of pure gravity
    let amps = AmplitudeMap::solve(
        &ModelSpec::potts(Rational::zero(), 2, 0).unwrap(),
        (0..5).flat_map(|k| (0..=2).map(move |n| (Word::letter_repeat(0, k), n))),
    )
    .unwrap();
    let gravity = AmplitudeMap::solve(
        &ModelSpec::<Rational>::pure_gravity(2, 0),
        (0..5).flat_map(|k| (0..=2).map(move |n| (Word::letter_repeat(0, k), n))),
    )
    .unwrap();
    for k in 0..5 {
        for n in 0..=2 {
            let word = Word::letter_repeat(0, k);
            assert_eq!(amps.amplitude(&word, n).unwrap(), gravity.amplitude(&word, n).unwrap());
        }
    }
}

#[test]
fn labelled_amplitudes() {
    let c = CPoly::var();
    // φ_12 at x0^0 g^0 is ⟨Tr X1 X2⟩ = G_12 = c
    let v = on_solution(c.clone(), |a| a.amplitude(&w("12"), 0));
    assert_eq!(v, c);
    // φ_1 at x0^0 is p1: the one-letter moment
    let (series, p1) = on_solution(q(1, 4), |a| {
        Ok((extract_amplitude(a, &w("1"), 0, T)?, moment(a, &w("1"), T.g_order)?))
    });
    assert_eq!(series.series.coeff(0), p1);
    assert!(p1.coeff(0).is_zero());
    assert_eq!(p1.coeff(1), on_solution(q(1, 4), |a| a.amplitude(&w("1"), 1)));
}

#[test]
fn symmetrized_amplitude_averages_reversal() {
    let (sym, fwd, rev) = on_solution(q(1, 3), |a| {
        Ok((
            extract_symmetrized(a, &w("122"), 0, T)?,
            extract_amplitude(a, &w("122"), 0, T)?,
            extract_amplitude(a, &w("221"), 0, T)?,
        ))
    });
    let half = GSeries::constant(q(1, 2));
    assert_eq!(sym.series, (fwd.series + rev.series).scale(&half));
    assert!(sym.symmetrized);
}

#[test]
fn descriptors_paired_with_leading_equations_vanish() {
    for index in [1, 10] {
        let d = descriptor(index).unwrap();
        let c = CPoly::var();
        let rec = Recorder::new(T.g_order);
        sd_residual(d, &c, &rec, T).unwrap();
        let amps = AmplitudeMap::solve(&ModelSpec::potts(c.clone(), T.g_order, 0).unwrap(), rec.requests()).unwrap();
        assert!(first_nonzero(&sd_residual(d, &c, &amps, T).unwrap(), T).is_none(), "descriptor {index}");
    }
}

#[test]
fn gaussian_descriptors_vanish_at_zero_coupling() {
    let t = LoopTruncation::new(6, 0);
    for index in 1..=23 {
        let d = descriptor(index).unwrap();
        let c = Rational::zero();
        let rec = Recorder::new(0);
        sd_residual(d, &c, &rec, t).unwrap();
        let amps = AmplitudeMap::solve(&ModelSpec::potts(c.clone(), 0, 0).unwrap(), rec.requests()).unwrap();
        assert!(first_nonzero(&sd_residual(d, &c, &amps, t).unwrap(), t).is_none(), "descriptor {index}");
    }
}

#[test]
fn too_shallow_tables_are_rejected() {
    let amps = AmplitudeMap::solve(&ModelSpec::potts(q(1, 4), 1, 2).unwrap(), [(w("00"), 0)]).unwrap();
    let err = extract_amplitude(&amps, &w("1"), 0, T).unwrap_err();
    assert!(matches!(err, Error::MissingAmplitude { .. }), "{err}");
}

#[test]
fn unknown_ids_are_errors() {
    assert!(matches!(equation("3.99", Form::Printed), Err(Error::Unknown { .. })));
    assert!(matches!(descriptor(24), Err(Error::Unknown { .. }) | Err(Error::Invalid(_))));
    assert!(equation("3.6", Form::Printed).is_ok());
}

/// Adapts a lookup closure to the amplitude trait.
struct Lookup<'a, R>(&'a (dyn Fn(&Word, usize) -> Result<R> + Sync));

impl<R> Amplitudes<R> for Lookup<'_, R> {
    fn amplitude(&self, w: &Word, n: usize) -> Result<R> {
        (self.0)(w, n)
    }

    fn max_order(&self) -> usize {
        T.g_order
    }
}
