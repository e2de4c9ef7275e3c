//! The topological zeta function, computed two ways: directly from the
//! resolution data (only pieces whose divisor support is no larger than
//! their generator count survive), and structurally as the constant term of
//! the geometric sum in the `L -> 1` expansion. The two must agree; the
//! acceptance suite checks them against each other on random inputs.

use num::Zero;

use crate::cone::Decomposition;
use crate::exact::{LaurentPoly, RationalFunctionS};
use crate::integral::{subset_label, EdgeConstants, GeomAssembly, ResolutionData, StratumClass};
use crate::{Error, Result};

/// A rational function of `s` with linear denominator factors: the shape of
/// every topological zeta this crate produces.
pub type TopZeta = RationalFunctionS;

/// Direct formula: sum over the pieces with `|I_k| = |M_k|` of
/// `chi(E_I_k) * prod_{j in M_k} 1/(A_j s + B_j)`. Pieces with more
/// divisors in their support than generators vanish in the `L -> 1` limit
/// and are skipped; fewer is impossible for honest cone data.
pub fn top_zeta_direct(
    r: &ResolutionData,
    d: &Decomposition,
    e: &EdgeConstants,
) -> Result<TopZeta> {
    let mut out = TopZeta::zero();
    for piece in d.pieces() {
        let support = piece.support();
        let m = piece.dim();
        if support.len() > m {
            continue;
        }
        if support.len() < m {
            return Err(Error::Internal(format!(
                "piece with support {} has {} generators",
                subset_label(&support),
                m
            )));
        }
        let stratum = r
            .stratum(&support)
            .ok_or_else(|| Error::MissingStratum(subset_label(&support)))?;
        let euler = match stratum.euler() {
            Some(chi) => chi,
            None => {
                let StratumClass::Symbol(name) = stratum.class() else {
                    return Err(Error::Internal("class without euler number".into()));
                };
                return Err(Error::UnvaluedSymbol(name.clone()));
            }
        };
        if euler.is_zero() {
            continue;
        }
        let factors = e.constants_for(piece)?;
        out = out.add(&TopZeta::piece_term(&euler, &factors));
    }
    Ok(out)
}

/// Structural limit of the geometric sum: each assembled term carries the
/// coefficient `(L-1)^|I| L^-m [E_I]` and one fraction per generator; the
/// fractions contribute `(L-1)^-1 / (A_j s + B_j)` to leading order as
/// `L -> 1`, so the term's limit is its coefficient divided by
/// `(L-1)^(fraction count)`, evaluated at `L = 1`, over the linear factors.
/// Terms whose support exceeds their generator count keep a factor of
/// `L - 1` after the division and vanish on their own.
pub fn top_zeta_limit(g: &GeomAssembly) -> Result<TopZeta> {
    let lm1 = &LaurentPoly::lefschetz() - &LaurentPoly::one();
    let mut out = TopZeta::zero();
    for piece in g.pieces() {
        let term = piece.term();
        let k = term.fraction_count();
        let divisor = lm1.pow(k);
        let q = term.coeff().div_exact(&divisor).ok_or_else(|| {
            Error::Internal(format!(
                "piece coefficient {} is not divisible by (L - 1)^{k}",
                term.coeff()
            ))
        })?;
        let mut chi = q.eval_at_one();
        if !term.symbols().is_empty() {
            let euler = piece
                .euler()
                .ok_or_else(|| match piece.class() {
                    StratumClass::Symbol(name) => Error::UnvaluedSymbol(name.clone()),
                    StratumClass::Poly(_) => Error::Internal("class without euler number".into()),
                })?
                .clone();
            chi *= euler;
        }
        if chi.is_zero() {
            continue;
        }
        out = out.add(&TopZeta::piece_term(&chi, piece.constants()));
    }
    Ok(out)
}

/// Convenience check used by tests and the verification report.
pub fn limit_agrees_with_direct(
    r: &ResolutionData,
    d: &Decomposition,
    e: &EdgeConstants,
    g: &GeomAssembly,
) -> Result<bool> {
    Ok(top_zeta_direct(r, d, e)? == top_zeta_limit(g)?)
}
