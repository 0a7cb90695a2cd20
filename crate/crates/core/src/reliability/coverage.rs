//! Composite assumption coverage: the broadcast two-scale product and the
//! per-layer secure-communication product, in strict and tolerant modes.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::interval::RatInterval;
use super::tails::{generic_third_bound, p_exact};
use super::{p_within_model_range, rational, ReliabilityError};

/// Coverage of the two-scale hypercube broadcast:
/// `R = (1 - P(floor(s/3), s))^(n/s) * (1 - P(floor(s/3), 2s))^(n/s - 1)`,
/// with the closed-form floor `(1 - (6 e p)^(s/3))^(n/s)` evaluated in double
/// precision alongside (it contains `e` and a fractional power; the exact
/// side is a rigorous rational enclosure).
#[derive(Debug, Clone)]
pub struct BroadcastReliability {
    pub exact_nu: RatInterval,
    pub exact_nu_f64: f64,
    pub closed_form_nu: f64,
    pub clique_tail: BigRational,
    pub pair_tail: BigRational,
    /// per-node failure rate within the modeled range (p <= 1e-4)
    pub p_in_model_range: bool,
}

pub fn broadcast_reliability(
    s: u64,
    n: u64,
    p: &BigRational,
) -> Result<BroadcastReliability, ReliabilityError> {
    if n % s != 0 {
        return Err(ReliabilityError::NonDivisible { n, s });
    }
    let t = s / 3;
    let clique_tail = p_exact(t, s, p)?;
    let pair_tail = p_exact(t, 2 * s, p)?;
    let instances = n / s;

    let clique_factor = RatInterval::exact(clique_tail.clone())
        .one_minus()
        .pow(instances);
    let pair_factor = RatInterval::exact(pair_tail.clone())
        .one_minus()
        .pow(instances - 1);
    let exact_nu = clique_factor.mul(&pair_factor).one_minus().clamp_unit();

    let pf = p.to_f64().unwrap_or(f64::NAN);
    let closed_form_nu = -f64::exp_m1(instances as f64 * f64::ln_1p(-generic_third_bound(s, pf, true)));

    Ok(BroadcastReliability {
        exact_nu_f64: exact_nu.to_f64(),
        exact_nu,
        closed_form_nu,
        clique_tail,
        pair_tail,
        p_in_model_range: p_within_model_range(p),
    })
}

/// Stack descriptor for reliability evaluation: layer sizes with per-layer
/// tolerated instance failures `t_l` (strict mode is all zeros).
#[derive(Debug, Clone)]
pub struct StackReliabilityParams {
    pub n: u64,
    pub layer_sizes: Vec<u64>,
    pub tolerated: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerFactor {
    pub layer: usize,
    pub subnet_size: u64,
    pub instances: u64,
    pub tolerated: u64,
    /// instance failure probability `p_l = P(floor(s_l/3), s_l)`
    pub instance_tail_f64: f64,
    /// layer factor `1 - nu_l` (tolerant partial sum over instance failures)
    pub factor_f64: f64,
    /// the ratio-style bound on `nu_l` for `t_l >= 1`
    pub nu_bound_f64: Option<f64>,
    /// whether `p_l <= 1/(n+1)` held, gating that bound
    pub nu_bound_regime_ok: bool,
}

#[derive(Debug, Clone)]
pub struct SecurecommReliability {
    pub nu: RatInterval,
    pub nu_f64: f64,
    pub layers: Vec<LayerFactor>,
    pub p_in_model_range: bool,
}

/// Coverage of the layered secure-communication stack. Each layer
/// contributes `sum_{t=0}^{t_l} C(r_l, t) (1 - p_l)^{r_l - t} p_l^t` with
/// `p_l = P(floor(s_l/3), s_l)` and `r_l = n / s_l`; `t_l = 0` degenerates to
/// the strict factor `(1 - p_l)^{r_l}`.
pub fn securecomm_reliability(
    params: &StackReliabilityParams,
    p: &BigRational,
) -> Result<SecurecommReliability, ReliabilityError> {
    if params.layer_sizes.is_empty() {
        return Err(ReliabilityError::BadStack("no layers".into()));
    }
    if params.tolerated.len() != params.layer_sizes.len() {
        return Err(ReliabilityError::BadStack(format!(
            "{} tolerated entries for {} layers",
            params.tolerated.len(),
            params.layer_sizes.len()
        )));
    }
    for &s in &params.layer_sizes {
        if s == 0 || params.n % s != 0 {
            return Err(ReliabilityError::BadStack(format!(
                "layer size {s} does not divide n = {}",
                params.n
            )));
        }
    }

    let mut product = RatInterval::one();
    let mut layers = Vec::with_capacity(params.layer_sizes.len());
    for (l, (&s, &tol)) in params.layer_sizes.iter().zip(&params.tolerated).enumerate() {
        let r = params.n / s;
        if tol > r {
            return Err(ReliabilityError::BadStack(format!(
                "tolerated {tol} exceeds instance count {r} at layer {l}"
            )));
        }
        let instance_tail = p_exact(s / 3, s, p)?;
        // coarsen to 80 significant digits before the per-instance sums:
        // the raw tails carry denominators of ~4s decimal digits and would
        // make the rational reduction cost explode at large s
        let tail_iv = RatInterval::exact(instance_tail.clone()).round_outward(80);
        // the tolerant partial sum is itself a Q over instances
        let factor = super::tails::q_exact_interval(tol, r, &tail_iv)?;
        product = product.mul(&factor);

        let nu_bound_regime_ok = instance_tail
            <= BigRational::one() / rational((params.n + 1) as i64, 1);
        let nu_bound_f64 = if tol >= 1 {
            super::tails::tail_bound(tol, r, &tail_iv.hi, &rational(s as i64, 1))
                .ok()
                .map(|b| b.bound.to_f64().unwrap_or(f64::NAN))
        } else {
            None
        };

        layers.push(LayerFactor {
            layer: l,
            subnet_size: s,
            instances: r,
            tolerated: tol,
            instance_tail_f64: instance_tail.to_f64().unwrap_or(f64::NAN),
            factor_f64: factor.to_f64(),
            nu_bound_f64,
            nu_bound_regime_ok,
        });
    }

    let nu = product.one_minus().clamp_unit();
    Ok(SecurecommReliability {
        nu_f64: nu.to_f64(),
        nu,
        layers,
        p_in_model_range: p_within_model_range(p),
    })
}
