use num_traits::One;

use super::{ModelSpec, SolutionTable};
use crate::freealg::{Delta, NCSeries, Side, Truncation};
use crate::ring::{GSeries, Ring};

/// Accumulate `sign * RHS(Φ)` into `acc`, where the right-hand side of the
/// generating equation is, term by term,
/// `1 + Σ_i x_i Φ (Σ_j G_ij x_j) Φ + g Σ_i (Σ_j G_ij x_j) Δ_i² Φ`.
fn accumulate_rhs<R: Ring>(acc: &mut NCSeries<R>, sign: &R, spec: &ModelSpec<R>, phi: &NCSeries<R>) {
    let weight = |i: u8, j: u8| GSeries::constant(sign.mul_ref(&spec.propagator(i, j)));
    acc.add_scaled(&GSeries::constant(sign.clone()), &NCSeries::one(Truncation::exact()));
    for &j in spec.alphabet() {
        // x_i Φ x_j Φ and x_j g Δ_i² Φ share the weight G_ij
        let sandwich = phi.mul(&phi.mul_letter(Side::Left, j));
        let deriv = phi.apply(&[Delta::left(j), Delta::left(j)]).mul_g();
        for &i in spec.alphabet() {
            acc.add_scaled_prefixed(&weight(i, j), Some(i), &sandwich);
            acc.add_scaled_prefixed(&weight(j, i), Some(i), &deriv);
        }
    }
}

pub fn build_rhs_potts<R: Ring>(spec: &ModelSpec<R>, phi: &NCSeries<R>) -> NCSeries<R> {
    let mut rhs = NCSeries::zero(Truncation::exact());
    accumulate_rhs(&mut rhs, &R::one(), spec, phi);
    rhs
}

/// `Φ − RHS(Φ)`; identically zero for a solved table.
pub fn generating_residual<R: Ring>(table: &SolutionTable<R>) -> NCSeries<R> {
    let mut res = table.phi.clone();
    accumulate_rhs(&mut res, &-R::one(), &table.spec, &table.phi);
    res
}

/// The row-0 form `(1+c)Δ0Φ + (2c²−c−1)(Φ x0 Φ + g Δ0²Φ) − c(Δ1Φ + Δ2Φ)`.
pub fn eq31_residual<R: Ring>(table: &SolutionTable<R>) -> NCSeries<R> {
    let phi = &table.phi;
    let c = GSeries::constant(table.spec.c.clone());
    let one_plus_c = GSeries::constant(R::one() + table.spec.c.clone());
    let minus_d = {
        let cc = table.spec.c.clone();
        GSeries::constant(R::from_i64(2) * cc.clone() * cc.clone() - cc - R::one())
    };
    let mut res = NCSeries::zero(Truncation::exact());
    res.add_scaled(&one_plus_c, &phi.delta(Delta::left(0)));
    res.add_scaled(&minus_d, &phi.mul(&phi.mul_letter(Side::Left, 0)));
    res.add_scaled(&minus_d, &phi.apply(&[Delta::left(0), Delta::left(0)]).mul_g());
    let minus_c = -c;
    res.add_scaled(&minus_c, &phi.delta(Delta::left(1)));
    res.add_scaled(&minus_c, &phi.delta(Delta::left(2)));
    res
}

/// Generating-equation right-hand side evaluated on the trivial `Φ = 1`.
pub fn harmonic_rhs<R: Ring>(spec: &ModelSpec<R>, trunc: Truncation) -> NCSeries<R> {
    let one = NCSeries::monomial(trunc, crate::freealg::Word::EMPTY, GSeries::one());
    build_rhs_potts(spec, &one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;
    use crate::solver::solve_series;
    use crate::ring::Poly;
    use num_bigint::BigInt;

    #[test]
    fn residuals_vanish_symbolic() {
        let spec = ModelSpec::potts(Poly::<BigInt>::var(), 2, 3).unwrap();
        let t = solve_series(&spec).unwrap();
        let r = generating_residual(&t);
        assert!(r.is_zero());
        assert_eq!(r.trunc().complete_grade(2), t.grade_reached as i64);
        assert_eq!(eq31_residual(&t).trunc().complete_grade(2), t.grade_reached as i64 - 1);
        assert!(eq31_residual(&t).is_zero());
    }

    #[test]
    fn unsolved_phi_leaves_length_two_words() {
        let spec = ModelSpec::potts(Poly::<BigInt>::var(), 0, 2).unwrap();
        let trunc = Truncation::new(2, 0);
        let one = NCSeries::monomial(trunc, Word::EMPTY, GSeries::one());
        let r = one.sub(&build_rhs_potts(&spec, &one));
        let w: Word = "01".parse().unwrap();
        assert_eq!(r.coeff(&w, 0), Some(-Poly::var()));
        assert_eq!(r.coeff(&"00".parse().unwrap(), 0), Some(-Poly::<BigInt>::one()));
        assert_eq!(r.coeff(&Word::EMPTY, 0), Some(Poly::from_i64(0)));
    }
}
