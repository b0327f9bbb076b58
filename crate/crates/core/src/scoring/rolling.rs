//! Incremental window-score computation.
//!
//! Every sign layout reduces to one of two base series over the window
//! starting at `j`:
//!
//! * `U_j` - all positions positive: `sum_i weight(i) * v[j+i]`
//! * `B_j` - strict alternation:    `sum_i (-1)^i * weight(i) * v[j+i]`
//!
//! With `w0 = weight(0)`:
//!
//! * all positive                        -> `U_j`
//! * head positive, rest negative        -> `2 * w0 * v[j] - U_j`
//! * head and odd positive, even negative -> `2 * w0 * v[j] - B_j`
//! * head and even positive, odd negative -> `B_j`
//!
//! so each kernel maintains only the base series it needs. Four kernels:
//!
//! * geometric, k = 1: weights are all 1; plain shift of the (alternating)
//!   window sum with a running rounding-error bound that forces a direct
//!   recomputation before drift can approach the comparison tolerances.
//! * polynomial, k = 1: `U` shifts via the plain window sum `W`
//!   (`U' = U - W + m * v_in`), `B` via the alternating sum `A`; same
//!   error-bound-driven resynchronization.
//! * geometric, k >= 2: the shift multiplies out one factor of `k`
//!   (`U' = (U - k * v_out) / k + k^m * v_in`), run in double-double
//!   arithmetic; old rounding errors are damped geometrically and a periodic
//!   resynchronization cleans up the rest.
//! * polynomial, k >= 2: block-anchored prefix moments. Within a block with
//!   local positions `x`, `(i+1)^k = sum_s C(k,s) * x^s * (1-j')^(k-s)`
//!   for the window at local start `j'`, so `k+1` double-double prefix sums
//!   of `x^s * v` give any window score as a short exact-coefficient
//!   combination. Blocks are sized so every integer coefficient is exactly
//!   representable; each new block is a fresh anchor, which bounds drift the
//!   same way a resynchronization does. When `k` is too large for any valid
//!   block size the kernel falls back to direct per-window summation.
//!
//! All of this is behaviour-transparent: results agree with the direct
//! scorer to within a relative error far below `1e-9`.

use crate::scalar::{CompensatedSum, Scalar, TwoFloat};

use super::{dot_compensated, FormulaSpec, ScoreError, SignScheme, WeightScheme};

/// Tuning knobs for the rolling scorers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RollingOptions {
    /// Upper bound on the number of windows between direct recomputations of
    /// the carried state (the sequential kernels may resynchronize earlier
    /// when their rounding-error bound fills up). The block-anchored
    /// polynomial kernel re-anchors on its own schedule instead. Values
    /// below 1 are treated as 1.
    pub resync_interval: usize,
}

impl Default for RollingOptions {
    fn default() -> Self {
        RollingOptions {
            resync_interval: 1024,
        }
    }
}

/// Whether the sign layout is built on the alternating base series.
fn alternating_base(sign: SignScheme) -> bool {
    matches!(
        sign,
        SignScheme::HeadPlusOddPlusEvenMinus | SignScheme::HeadPlusOddMinusEvenPlus
    )
}

/// Final per-window value from the base series; `two_w0` is `2 * weight(0)`.
#[inline]
fn emit_scalar<S: Scalar>(sign: SignScheme, two_w0: S, v_head: S, base: S) -> S {
    match sign {
        SignScheme::UniformPlus | SignScheme::HeadPlusOddMinusEvenPlus => base,
        _ => two_w0 * v_head - base,
    }
}

/// As [`emit_scalar`] but keeps the subtraction in double-double precision.
#[inline]
fn emit_dd<S: Scalar>(sign: SignScheme, two_w0: S, v_head: S, base: TwoFloat<S>) -> S {
    match sign {
        SignScheme::UniformPlus | SignScheme::HeadPlusOddMinusEvenPlus => base.value(),
        _ => TwoFloat::two_prod(two_w0, v_head).sub(base).value(),
    }
}

/// Allowed accumulated rounding drift for a state of the given magnitude.
/// Far below the `1e-9` comparison tolerances, far above one step's noise.
#[inline]
fn drift_budget<S: Scalar>(state: S) -> S {
    let scale = S::from_f64(2e4).expect("small constant fits every scalar");
    S::epsilon() * scale * state.abs().max(S::one())
}

pub(crate) fn series<S: Scalar>(
    spec: &FormulaSpec,
    vals: &[S],
    m: usize,
    options: &RollingOptions,
) -> Result<Vec<S>, ScoreError> {
    debug_assert!(m >= 1 && m <= vals.len());
    let windows = vals.len() - m + 1;
    let resync = options.resync_interval.max(1);
    let mut out = Vec::with_capacity(windows);
    match (spec.weight_scheme(), spec.k()) {
        (WeightScheme::Geometric, 1) => flat_series(spec.sign_scheme(), vals, m, resync, &mut out),
        (WeightScheme::Geometric, _) => geometric_series(spec, vals, m, resync, &mut out)?,
        (WeightScheme::Polynomial, 1) => {
            linear_series(spec.sign_scheme(), vals, m, resync, &mut out)
        }
        (WeightScheme::Polynomial, _) => moment_series(spec, vals, m, &mut out)?,
    }
    debug_assert_eq!(out.len(), windows);
    Ok(out)
}

/// Geometric with k = 1: every weight is 1.
fn flat_series<S: Scalar>(sign: SignScheme, vals: &[S], m: usize, resync: usize, out: &mut Vec<S>) {
    let windows = vals.len() - m + 1;
    let eps = S::epsilon();
    let two = S::from_f64(2.0).expect("2 fits");
    // (-1)^(m-1): sign under which the incoming value enters the
    // alternating sum.
    let tail = if m % 2 == 1 { S::one() } else { -S::one() };
    let alternating = alternating_base(sign);

    let recompute = |j: usize| -> S {
        let mut acc = CompensatedSum::new();
        for (i, &v) in vals[j..j + m].iter().enumerate() {
            acc.add(if alternating && i % 2 == 1 { -v } else { v });
        }
        acc.value()
    };

    let mut state = recompute(0);
    out.push(emit_scalar(sign, two, vals[0], state));
    let mut err = S::zero();
    let mut since = 0usize;
    for j in 1..windows {
        let v_out = vals[j - 1];
        let v_in = vals[j + m - 1];
        state = if alternating {
            v_out - state + tail * v_in
        } else {
            state - v_out + v_in
        };
        err = err + eps * (state.abs() + v_out.abs() + v_in.abs());
        since += 1;
        if since >= resync || err > drift_budget(state) {
            state = recompute(j);
            err = S::zero();
            since = 0;
        }
        out.push(emit_scalar(sign, two, vals[j], state));
    }
}

/// Polynomial with k = 1: weights are 1, 2, ..., m.
fn linear_series<S: Scalar>(
    sign: SignScheme,
    vals: &[S],
    m: usize,
    resync: usize,
    out: &mut Vec<S>,
) {
    let windows = vals.len() - m + 1;
    let eps = S::epsilon();
    let two = S::from_f64(2.0).expect("2 fits");
    let mf = S::from_usize(m).expect("window length fits the scalar");
    let tail = if m % 2 == 1 { S::one() } else { -S::one() };

    if !alternating_base(sign) {
        // U' = U - W + m * v_in, W' = W - v_out + v_in.
        let recompute = |j: usize| -> (S, S) {
            let mut u = CompensatedSum::new();
            let mut w = CompensatedSum::new();
            for (i, &v) in vals[j..j + m].iter().enumerate() {
                u.add(S::from_usize(i + 1).expect("index fits") * v);
                w.add(v);
            }
            (u.value(), w.value())
        };
        let (mut u, mut w) = recompute(0);
        out.push(emit_scalar(sign, two, vals[0], u));
        let (mut u_err, mut w_err) = (S::zero(), S::zero());
        let mut since = 0usize;
        for j in 1..windows {
            let v_out = vals[j - 1];
            let v_in = vals[j + m - 1];
            let grown = mf * v_in;
            u = u - w + grown;
            w = w - v_out + v_in;
            w_err = w_err + eps * (w.abs() + v_out.abs() + v_in.abs());
            u_err = u_err + w_err + eps * (u.abs() + w.abs() + grown.abs());
            since += 1;
            if since >= resync || u_err > drift_budget(u) {
                let fresh = recompute(j);
                u = fresh.0;
                w = fresh.1;
                u_err = S::zero();
                w_err = S::zero();
                since = 0;
            }
            out.push(emit_scalar(sign, two, vals[j], u));
        }
    } else {
        // B' = v_out - B - A' + (-1)^(m-1) * (m+1) * v_in, where A is the
        // plain alternating sum with A' = v_out - A + (-1)^(m-1) * v_in.
        let m1f = S::from_usize(m + 1).expect("window length fits");
        let recompute = |j: usize| -> (S, S) {
            let mut a = CompensatedSum::new();
            let mut b = CompensatedSum::new();
            for (i, &v) in vals[j..j + m].iter().enumerate() {
                let sv = if i % 2 == 1 { -v } else { v };
                a.add(sv);
                b.add(S::from_usize(i + 1).expect("index fits") * sv);
            }
            (a.value(), b.value())
        };
        let (mut a, mut b) = recompute(0);
        out.push(emit_scalar(sign, two, vals[0], b));
        let (mut a_err, mut b_err) = (S::zero(), S::zero());
        let mut since = 0usize;
        for j in 1..windows {
            let v_out = vals[j - 1];
            let v_in = vals[j + m - 1];
            let a_next = v_out - a + tail * v_in;
            let grown = tail * m1f * v_in;
            let b_next = v_out - b - a_next + grown;
            a_err = a_err + eps * (a_next.abs() + a.abs() + v_out.abs() + v_in.abs());
            b_err = b_err
                + a_err
                + eps * (b_next.abs() + b.abs() + a_next.abs() + v_out.abs() + grown.abs());
            a = a_next;
            b = b_next;
            since += 1;
            if since >= resync || b_err > drift_budget(b) {
                let fresh = recompute(j);
                a = fresh.0;
                b = fresh.1;
                a_err = S::zero();
                b_err = S::zero();
                since = 0;
            }
            out.push(emit_scalar(sign, two, vals[j], b));
        }
    }
}

/// Geometric with k >= 2, double-double state.
fn geometric_series<S: Scalar>(
    spec: &FormulaSpec,
    vals: &[S],
    m: usize,
    resync: usize,
    out: &mut Vec<S>,
) -> Result<(), ScoreError> {
    let windows = vals.len() - m + 1;
    let kf = S::from_u32(spec.k()).expect("k fits the scalar");
    let weights: Vec<S> = (0..m).map(|i| spec.weight(i)).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(ScoreError::NonFinite { m, k: spec.k() });
    }
    let alternating = alternating_base(spec.sign_scheme());
    let sign = spec.sign_scheme();
    let tail = if m % 2 == 1 { S::one() } else { -S::one() };
    // weight(m-1) = k^m is exactly the coefficient of the incoming value.
    let grow = if alternating {
        tail * weights[m - 1]
    } else {
        weights[m - 1]
    };
    let two_w0 = kf + kf;

    let recompute = |j: usize| -> TwoFloat<S> {
        let mut acc = TwoFloat::zero();
        for (i, &v) in vals[j..j + m].iter().enumerate() {
            let c = if alternating && i % 2 == 1 {
                -weights[i]
            } else {
                weights[i]
            };
            acc = acc.add(TwoFloat::two_prod(c, v));
        }
        acc
    };

    let mut state = recompute(0);
    out.push(emit_dd(sign, two_w0, vals[0], state));
    let mut since = 0usize;
    for j in 1..windows {
        let v_out = vals[j - 1];
        let v_in = vals[j + m - 1];
        state = state.sub(TwoFloat::two_prod(kf, v_out)).div_scalar(kf);
        if alternating {
            state = state.neg();
        }
        state = state.add(TwoFloat::two_prod(grow, v_in));
        since += 1;
        if since >= resync {
            state = recompute(j);
            since = 0;
        }
        out.push(emit_dd(sign, two_w0, vals[j], state));
    }
    Ok(())
}

/// Largest block extent (window positions covered) for the prefix-moment
/// kernel, or `None` when even the smallest useful block is unsafe.
///
/// Two constraints: `span^k * 2^k <= 2^52` keeps every binomial-times-power
/// coefficient an exactly representable integer, and `span^(k+1) * v_max`
/// is capped so the double-double tail of the prefix sums stays orders of
/// magnitude below the comparison tolerances.
fn moment_span_cap(k: u32, m: usize, v_max: f64) -> Option<usize> {
    if k >= 52 {
        return None;
    }
    let budget = 2f64.powi(52 - k as i32);
    let mut span_e = budget.powf(1.0 / k as f64).floor() as usize;
    let fits = |span: usize| -> bool {
        (span as u128)
            .checked_pow(k)
            .and_then(|p| p.checked_mul(1u128 << k))
            .map_or(false, |q| q <= 1u128 << 52)
    };
    while span_e > 1 && !fits(span_e) {
        span_e -= 1;
    }
    let span_m = (1e18 / v_max.max(1.0)).powf(1.0 / (k as f64 + 1.0)).floor() as usize;
    let span = span_e.min(span_m).min(65_536 + m);
    if span >= m + 1 {
        Some(span)
    } else {
        None
    }
}

/// C(k, 0..=k).
fn binomial_row(k: u32) -> Option<Vec<u128>> {
    let mut row = Vec::with_capacity(k as usize + 1);
    let mut c: u128 = 1;
    row.push(c);
    for s in 1..=k as u128 {
        c = c.checked_mul(k as u128 - s + 1)? / s;
        row.push(c);
    }
    Some(row)
}

/// Polynomial with k >= 2: block-anchored prefix moments.
fn moment_series<S: Scalar>(
    spec: &FormulaSpec,
    vals: &[S],
    m: usize,
    out: &mut Vec<S>,
) -> Result<(), ScoreError> {
    let windows = vals.len() - m + 1;
    let k = spec.k() as usize;
    let sign = spec.sign_scheme();
    let alternating = alternating_base(sign);
    let two = S::from_f64(2.0).expect("2 fits");

    let v_max = vals
        .iter()
        .fold(0f64, |acc, v| acc.max(v.abs().to_f64().unwrap_or(f64::INFINITY)));
    let (span_cap, binom) = match (moment_span_cap(spec.k(), m, v_max), binomial_row(spec.k())) {
        (Some(cap), Some(row)) => (cap, row),
        // k too large for a safe block: direct summation is the only
        // correct option left.
        _ => return naive_fill(spec, vals, m, out),
    };
    let binom: Vec<S> = binom
        .iter()
        .map(|&c| S::from_u128(c).expect("binomial fits the scalar"))
        .collect();

    let mut coeff = vec![S::zero(); k + 1];
    let mut j0 = 0usize;
    while j0 < windows {
        let block_windows = (span_cap - m + 1).min(windows - j0);
        let span = block_windows + m - 1;
        // q[s][x] = sum over local positions y < x of y^s * (+-) vals[j0+y];
        // the per-position sign is (-1)^y when the alternating base is
        // needed, corrected per window by (-1)^(local start) below.
        let mut q: Vec<Vec<TwoFloat<S>>> = vec![Vec::with_capacity(span + 1); k + 1];
        for col in q.iter_mut() {
            col.push(TwoFloat::zero());
        }
        for x in 0..span {
            let v = vals[j0 + x];
            let sv = if alternating && x % 2 == 1 { -v } else { v };
            let xf = S::from_usize(x).expect("position fits");
            let mut pw = S::one();
            for col in q.iter_mut() {
                let prev = *col.last().expect("seeded with zero");
                col.push(prev.add(TwoFloat::two_prod(pw, sv)));
                pw = pw * xf;
            }
        }
        for local in 0..block_windows {
            // (i+1)^k = sum_s C(k,s) * x^s * base^(k-s) with x the local
            // position and base = 1 - local start; all coefficients are
            // exact integers by the block size bound.
            let base = S::from_i64(1 - local as i64).expect("offset fits");
            let mut p = S::one();
            for s in (0..=k).rev() {
                coeff[s] = binom[s] * p;
                p = p * base;
            }
            let mut acc = TwoFloat::zero();
            for s in 0..=k {
                let dq = q[s][local + m].sub(q[s][local]);
                acc = acc.add(dq.mul_scalar(coeff[s]));
            }
            if alternating && local % 2 == 1 {
                acc = acc.neg();
            }
            out.push(emit_dd(sign, two, vals[j0 + local], acc));
        }
        j0 += block_windows;
    }
    Ok(())
}

/// Direct per-window summation into `out`; the correctness fallback.
fn naive_fill<S: Scalar>(
    spec: &FormulaSpec,
    vals: &[S],
    m: usize,
    out: &mut Vec<S>,
) -> Result<(), ScoreError> {
    let coeffs = spec.signed_weights::<S>(m)?;
    for j in 0..=vals.len() - m {
        out.push(dot_compensated(&coeffs, &vals[j..j + m]));
    }
    Ok(())
}
