//! Large-n age approximations with thresholds as ratios `alpha = k/n`.
//!
//! For large fan-out the harmonic tails collapse, `H_n - H_((1-a)n) ->
//! -ln(1-a)`, variances vanish, and the finite-n formulas turn into closed
//! forms in the per-hop ratios alone. These are what the ratio optimizer
//! minimizes; the finite-n expressions converge to them as `n` grows at
//! fixed `alpha`.

use serde::Serialize;

use crate::distributions::ShiftedExp;
use crate::error::{Error, Result};

/// Per-hop stopping ratios, each strictly inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AlphaVector {
    alphas: Vec<f64>,
}

impl AlphaVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        for &a in &alphas {
            check_alpha(a)?;
        }
        Ok(Self { alphas })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty vectors
    }
}

fn check_alpha(a: f64) -> Result<()> {
    if !a.is_finite() || a <= 0.0 || a >= 1.0 {
        return Err(Error::Param {
            name: "alpha",
            constraint: "strictly inside (0, 1)",
            value: a,
        });
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Param {
            name,
            constraint: "positive and finite",
            value,
        });
    }
    Ok(())
}

/// Generate-at-will single-hop age in the large-n limit:
///
/// ```text
/// age ~ c/a + c/2 + 1/l - ln(1 - a) / (2 l)
/// ```
///
/// Minimized at `a = sqrt(3) - 1 ~ 0.732` for `(l, c) = (1, 1)`.
pub fn age_single_hop_limit(d: &ShiftedExp, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (l, c) = (d.rate(), d.shift());
    Ok(c / alpha + 0.5 * c + 1.0 / l - (1.0 - alpha).ln() / (2.0 * l))
}

/// Single hop with exogenous Poisson(`mu`) arrivals, large n:
///
/// ```text
/// age ~ c/a + c/2 + 1/l - ln(1-a)/(2l) + 1/(a mu) - 1/(2 mu)
///       + 1 / (2 (mu^2 c - mu^2 ln(1-a)/l + mu))
/// ```
///
/// Decreasing in `mu`; recovers [`age_single_hop_limit`] as `mu -> inf`.
pub fn age_building_block_approx(d: &ShiftedExp, mu: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("mu", mu)?;
    let (l, c) = (d.rate(), d.shift());
    let log1a = (1.0 - alpha).ln();
    Ok(
        c / alpha + 0.5 * c + 1.0 / l - log1a / (2.0 * l) + 1.0 / (alpha * mu) - 1.0 / (2.0 * mu)
            + 0.5 / (mu * mu * c - mu * mu * log1a / l + mu),
    )
}

/// Two-hop pipeline bound in ratio form. With `K1 = l c - ln(1 - a1)` and
/// `K2 = lt ct - ln(1 - a2)` (first/second hop rates `l`, `lt`, shifts
/// `c`, `ct`):
///
/// ```text
/// age' ~ 1/l + 1/lt + ct/a2 + ct/2 - ln(1-a2)/(2 lt)
///        + ((2 - a2 + 2 a1 a2) / (2 a1 a2)) c
///        + lt K1^2 / (2 a1 l (l a1 K2 + lt K1))
///        + ((3 a2 - 2 a1 a2 - 2) / (2 a1 a2 l)) ln(1 - a1)
/// ```
///
/// Kept as a direct transcription of the specialized two-hop result; the
/// tests pin it against the general pipeline form at `L = 2`.
pub fn age_two_hop_approx(p1: &ShiftedExp, p2: &ShiftedExp, a: &AlphaVector) -> Result<f64> {
    if a.len() != 2 {
        return Err(Error::HopCountMismatch {
            left: 2,
            left_what: "hops",
            right: a.len(),
            right_what: "alpha entries",
        });
    }
    let (a1, a2) = (a.as_slice()[0], a.as_slice()[1]);
    let (l, c) = (p1.rate(), p1.shift());
    let (lt, ct) = (p2.rate(), p2.shift());
    let k1 = l * c - (1.0 - a1).ln();
    let k2 = lt * ct - (1.0 - a2).ln();
    Ok(
        1.0 / l + 1.0 / lt + ct / a2 + 0.5 * ct - (1.0 - a2).ln() / (2.0 * lt)
            + (2.0 - a2 + 2.0 * a1 * a2) / (2.0 * a1 * a2) * c
            + lt * k1 * k1 / (2.0 * a1 * l * (l * a1 * k2 + lt * k1))
            + (3.0 * a2 - 2.0 * a1 * a2 - 2.0) / (2.0 * a1 * a2 * l) * (1.0 - a1).ln(),
    )
}

/// General L-hop pipeline bound in ratio form. Writing
/// `w_l = (c_l - ln(1 - a_l)/l_l) * prod_{i=l..L-1} (1/a_i)` (empty
/// product = 1), the bound is
///
/// ```text
/// age' ~ sum_l [ c_l + 1/l_l + ((1 - a_l)/(a_l l_l)) ln(1 - a_l) ]
///        + ((2 - a_L) / (2 a_L)) sum_{l=1..L} w_l
///        + (sum_{l=1..L-1} w_l)^2 / (2 sum_{l=1..L} w_l)
/// ```
///
/// At `L = 1` this reduces to [`age_single_hop_limit`].
pub fn age_multi_hop_approx(params: &[ShiftedExp], a: &AlphaVector) -> Result<f64> {
    if params.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    if params.len() != a.len() {
        return Err(Error::HopCountMismatch {
            left: params.len(),
            left_what: "hops",
            right: a.len(),
            right_what: "alpha entries",
        });
    }
    let alphas = a.as_slice();
    let l_hops = params.len();

    let mut service = 0.0;
    for (p, &al) in params.iter().zip(alphas) {
        let (l, c) = (p.rate(), p.shift());
        service += c + 1.0 / l + (1.0 - al) / (al * l) * (1.0 - al).ln();
    }

    // Suffix products of 1/alpha and the weighted service sums. The
    // product for hop l covers alphas l..L-1 inclusive, so every hop but
    // the last is scaled by its own ratio as well as the downstream ones.
    let mut full = 0.0; // sum over all hops of w_l
    let mut prod = 1.0; // prod_{i=l..L-1} 1/a_i, built from the back
    let mut w_last = 0.0;
    for (idx, (p, &al)) in params.iter().zip(alphas).enumerate().rev() {
        if idx < l_hops - 1 {
            prod /= al;
        }
        let w = (p.shift() - (1.0 - al).ln() / p.rate()) * prod;
        if idx == l_hops - 1 {
            w_last = w;
        }
        full += w;
    }
    let partial = full - w_last; // stages feeding the last hop

    let a_last = alphas[l_hops - 1];
    Ok(service + (2.0 - a_last) / (2.0 * a_last) * full + partial * partial / (2.0 * full))
}

// ================================ tests ==================================


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_params() -> impl Strategy<Value = ShiftedExp> {
        (0.1f64..10.0, 0.0f64..4.0).prop_map(|(r, s)| ShiftedExp::new(r, s).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        /// Finite and positive across the open unit cube.
        #[test]
        fn pipeline_approx_finite_positive(
            p1 in arb_params(), p2 in arb_params(), p3 in arb_params(),
            a1 in 0.01f64..0.99, a2 in 0.01f64..0.99, a3 in 0.01f64..0.99,
        ) {
            let a = AlphaVector::new(vec![a1, a2, a3]).unwrap();
            let v = age_multi_hop_approx(&[p1, p2, p3], &a).unwrap();
            prop_assert!(v.is_finite() && v > 0.0);
        }

        /// Two-hop and pipeline forms agree at L = 2 everywhere, 1e-9 rel.
        #[test]
        fn two_hop_matches_pipeline_everywhere(
            p1 in arb_params(), p2 in arb_params(),
            a1 in 0.01f64..0.99, a2 in 0.01f64..0.99,
        ) {
            let a = AlphaVector::new(vec![a1, a2]).unwrap();
            let two = age_two_hop_approx(&p1, &p2, &a).unwrap();
            let multi = age_multi_hop_approx(&[p1, p2], &a).unwrap();
            prop_assert!((two - multi).abs() <= 1e-9 * two.abs().max(1.0));
        }
    }
}
