"""Spontaneous-emission model: entangled atom-photon amplitudes and dynamics.

The model lives in dimensionless variables: xi0 is the atom-to-photon
mass-scale parameter, eta the recoil-to-packet coupling, tau the elapsed
time in decay units.  Two representations are provided:

* coordinate: psi(p, q) with p the photonic and q the atomic coordinate,
  a decaying exponential behind the light front p = tau times a Gaussian
  in the center-of-inertia combination p + q;
* momentum: psi(nu_ph, pi_a) with a Lorentzian line shape in the photon
  detuning and a Gaussian atomic packet, valid in the long-time regime.

Analytical companions: Laguerre-based approximate modes of the coordinate
amplitude, the two-level zero-order dynamics (K0, S0), and the closed-form
asymptotics of K and S for small eta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .schmidt import (
    DecompositionOptions,
    SchmidtResult,
    schmidt_decompose,
)
from .tensor_core import AmplitudeMatrix, Grid, make_grid, normalize, sample_amplitude

TAU_APPLICABILITY_WARN = 3.0
SPECTRUM_DRIFT_MODES = 32


@dataclass(frozen=True)
class AtomPhotonParams:
    """Dimensionless emission parameters; all must be positive and finite."""

    xi0: float
    eta: float
    tau: float

    def __post_init__(self):
        for name in ("xi0", "eta", "tau"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of the narrow-packet validity check.

    eta_lower and eta_upper are the bare window edges 1/xi0 and
    1/sqrt(xi0); ``satisfied`` applies the strictness factor to both.
    packet_ratio is the packet-width-to-wavelength ratio 1/(xi0*eta).
    """

    eta_lower: float
    eta_upper: float
    packet_ratio: float
    satisfied: bool
    messages: tuple


@dataclass(frozen=True)
class GridPolicy:
    """Auto-window policy for coordinate-model decompositions.

    The p window spans ``decay_span`` decay lengths behind the light
    front; the q window covers the Gaussian ridge within ``sigma_margin``
    modulus-widths.  With ``capture_check`` on, every decomposition is
    repeated with margins enlarged by 50% (mesh spacing held fixed) and
    the weight spectra must agree within ``capture_tol``.
    """

    n: int = 400
    decay_span: float = 40.0
    sigma_margin: float = 6.0
    capture_check: bool = True
    capture_tol: float = 1e-6


def _as_finite_arrays(*xs):
    out = []
    for x in xs:
        a = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(a)):
            raise ValueError("inputs must be finite")
        out.append(a)
    return out


def coord_amplitude(params: AtomPhotonParams, p, q):
    """Coordinate-representation amplitude, exactly 0 beyond the light front.

    psi = theta(tau - p) * exp(-(tau - p)/2)
        * exp(-eta^2 (p + q)^2 / (2 (1 + i tau eta^2 xi0)))

    with theta(0) = 1.  Accepts scalars or broadcastable arrays.  Warns
    (without rejecting) below tau = 3 where the long-time form is only
    qualitative; dynamics sweeps rely on this leniency.
    """
    if params.tau < TAU_APPLICABILITY_WARN:
        warnings.warn(
            f"coordinate amplitude is a long-time approximation; tau={params.tau} < 3",
            stacklevel=2,
        )
    p, q = _as_finite_arrays(p, q)
    scalar = p.ndim == 0 and q.ndim == 0
    x = params.tau - p
    inside = x >= 0.0
    xs = np.where(inside, x, 0.0)
    denom = 2.0 * (1.0 + 1j * params.tau * params.eta**2 * params.xi0)
    vals = np.exp(-xs / 2.0) * np.exp(-(params.eta**2) * (p + q) ** 2 / denom)
    vals = np.where(inside, vals, 0.0 + 0.0j)
    return complex(vals) if scalar else vals


def momentum_amplitude(params: AtomPhotonParams, nu_ph, pi_a):
    """Momentum-representation amplitude (long-time limit; tau drops out).

    psi = exp(-pi_a^2 / 2) / (nu_ph + 1/(2 xi0) - eta * pi_a + i/2)

    The Lorentzian denominator never vanishes, so the only error source is
    non-finite input.
    """
    nu_ph, pi_a = _as_finite_arrays(nu_ph, pi_a)
    scalar = nu_ph.ndim == 0 and pi_a.ndim == 0
    denom = nu_ph + 1.0 / (2.0 * params.xi0) - params.eta * pi_a + 0.5j
    vals = np.exp(-(pi_a**2) / 2.0) / denom
    return complex(vals) if scalar else vals


def coord_grid(
    params: AtomPhotonParams,
    n: int = 400,
    decay_span: float = 40.0,
    sigma_margin: float = 6.0,
) -> Grid:
    """Auto-window for the coordinate amplitude.

    p covers [tau - decay_span, tau]; q covers the ridge q = -p broadened
    by sigma_margin times the modulus-width of the Gaussian factor,
    w = sqrt(1 + (tau eta^2 xi0)^2) / eta.
    """
    tau, eta, xi0 = params.tau, params.eta, params.xi0
    w = math.sqrt(1.0 + (tau * eta**2 * xi0) ** 2) / eta
    p_lo, p_hi = tau - decay_span, tau
    return make_grid(p_lo, p_hi, -p_hi - sigma_margin * w, -p_lo + sigma_margin * w, n)


def momentum_grid(n: int = 400, nu_max: float = 60.0, pi_max: float = 6.0) -> Grid:
    """Symmetric window for the momentum amplitude.

    The Lorentzian tail in nu_ph is heavy, hence the wide default
    [-60, 60]; entanglement measures converge much faster than the norm
    because the tail is nearly separable.
    """
    return make_grid(-nu_max, nu_max, -pi_max, pi_max, n)


def coord_matrix(params: AtomPhotonParams, grid: Grid) -> AmplitudeMatrix:
    """Sample the coordinate amplitude on a grid and normalize."""
    return normalize(sample_amplitude(lambda p, q: coord_amplitude(params, p, q), grid))


def momentum_matrix(params: AtomPhotonParams, grid: Grid) -> AmplitudeMatrix:
    """Sample the momentum amplitude on a grid and normalize."""
    return normalize(
        sample_amplitude(lambda nu, pi: momentum_amplitude(params, nu, pi), grid)
    )


def _spectrum_drift(a: SchmidtResult, b: SchmidtResult) -> float:
    m = min(a.rank, b.rank, SPECTRUM_DRIFT_MODES)
    return float(np.max(np.abs(a.lambdas[:m] - b.lambdas[:m])))


def _enlarged(n: int, factor: float) -> int:
    # Scale the node count with the window so the mesh spacing is unchanged.
    return int(round(factor * (n - 1))) + 1


def coord_capture_drift(
    params: AtomPhotonParams,
    n: int = 400,
    decay_span: float = 40.0,
    sigma_margin: float = 6.0,
    enlarge: float = 1.5,
    opts: DecompositionOptions = DecompositionOptions(),
) -> float:
    """Weight-spectrum drift when the window margins grow by ``enlarge``."""
    base = schmidt_decompose(coord_matrix(params, coord_grid(params, n, decay_span, sigma_margin)), opts)
    big_grid = coord_grid(
        params, _enlarged(n, enlarge), enlarge * decay_span, enlarge * sigma_margin
    )
    big = schmidt_decompose(coord_matrix(params, big_grid), opts)
    return _spectrum_drift(base, big)


def momentum_capture_drift(
    params: AtomPhotonParams,
    n: int = 400,
    nu_max: float = 60.0,
    pi_max: float = 6.0,
    enlarge: float = 2.0,
    opts: DecompositionOptions = DecompositionOptions(),
) -> float:
    """Weight-spectrum drift when the momentum window doubles (by default)."""
    base = schmidt_decompose(momentum_matrix(params, momentum_grid(n, nu_max, pi_max)), opts)
    big_grid = momentum_grid(_enlarged(n, enlarge), enlarge * nu_max, enlarge * pi_max)
    big = schmidt_decompose(momentum_matrix(params, big_grid), opts)
    return _spectrum_drift(base, big)


def xi0_estimate(mass_ratio_M_over_m: float) -> float:
    """Estimate xi0 from the atom-to-electron mass ratio: ratio / 137."""
    return mass_ratio_M_over_m / 137.0


def eta_opt(xi0: float, tau: float) -> float:
    """Coupling that balances packet spreading against recoil: 1/sqrt(xi0*tau)."""
    return 1.0 / math.sqrt(xi0 * tau)


def validity_check(params: AtomPhotonParams, strictness: float = 3.0) -> ValidityReport:
    """Check eta against the narrow-packet window 1/xi0 << eta << 1/sqrt(xi0).

    ``strictness`` turns the soft << into hard inequalities:
    strictness/xi0 <= eta <= (1/sqrt(xi0))/strictness.  Values within a
    factor 2 of either hardened edge are flagged as marginal.  Never
    raises; the report carries human-readable messages instead.
    """
    xi0, eta = params.xi0, params.eta
    lower = 1.0 / xi0
    upper = 1.0 / math.sqrt(xi0)
    strict_lower = strictness * lower
    strict_upper = upper / strictness
    satisfied = strict_lower <= eta <= strict_upper
    messages = []
    if eta < strict_lower:
        messages.append(
            f"eta={eta:g} is below the packet-spreading bound "
            f"{strictness:g}/xi0 = {strict_lower:g}"
        )
    elif eta > strict_upper:
        messages.append(
            f"eta={eta:g} exceeds the recoil bound "
            f"(1/sqrt(xi0))/{strictness:g} = {strict_upper:g}; the narrow-packet "
            "regime does not hold"
        )
    else:
        if eta < 2.0 * strict_lower:
            messages.append(
                f"eta={eta:g} sits within a factor 2 of the lower validity edge "
                f"{strict_lower:g}"
            )
        if eta > strict_upper / 2.0:
            messages.append(
                f"eta={eta:g} sits within a factor 2 of the upper validity edge "
                f"{strict_upper:g}"
            )
    return ValidityReport(
        eta_lower=lower,
        eta_upper=upper,
        packet_ratio=1.0 / (xi0 * eta),
        satisfied=satisfied,
        messages=tuple(messages),
    )


def laguerre_mode(k: int, tau: float, p_nodes) -> np.ndarray:
    """Sampled analytical mode L_k(tau - p) exp(-(tau - p)/2) theta(tau - p).

    Uses the stable three-term recurrence
    L_0 = 1, L_1 = 1 - x, (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}
    and fixes the normalization constant by unit discrete norm on the
    given nodes (absorbing mesh-truncation effects).

    Raises
    ------
    ValueError
        For negative k or when no node falls inside the support p <= tau.
    """
    if k < 0:
        raise ValueError(f"mode index must be non-negative, got {k}")
    (p,) = _as_finite_arrays(p_nodes)
    x = tau - p
    inside = x >= 0.0
    xs = np.where(inside, x, 0.0)
    lag_prev = np.ones_like(xs)
    lag = lag_prev if k == 0 else 1.0 - xs
    for j in range(1, k):
        lag, lag_prev = ((2 * j + 1 - xs) * lag - j * lag_prev) / (j + 1), lag
    vals = np.where(inside, lag * np.exp(-xs / 2.0), 0.0)
    nrm = float(np.linalg.norm(vals))
    if nrm == 0.0:
        raise ValueError("no grid nodes inside the support p <= tau")
    return vals / nrm


def zero_order_dynamics(tau: float, squared_entropy_weights: bool = True):
    """Two-level (excited/ground) entanglement measures at time tau.

    With le = exp(-tau) and lg = 1 - exp(-tau):

    K0 = 1 / (le^2 + lg^2)

    S0 (default) squares the weights inside the entropy,
    S0 = -le^2 log2(le^2) - lg^2 log2(lg^2), matching the source form of
    the model.  Passing ``squared_entropy_weights=False`` selects the
    spectrum-consistent reading S0 = -le log2(le) - lg log2(lg), the one
    ``full_dynamics`` reduces to when the fine structure is switched off.
    Both agree at tau = 0, tau = ln 2 and tau -> infinity.

    Raises
    ------
    ValueError
        For negative tau.
    """
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    le = math.exp(-tau)
    lg = -math.expm1(-tau)

    def ent(w):
        return -sum(x * math.log2(x) for x in w if x > 0.0)

    k0 = 1.0 / (le**2 + lg**2)
    s0 = ent((le**2, lg**2)) if squared_entropy_weights else ent((le, lg))
    return k0, s0


def full_dynamics(
    params: AtomPhotonParams, tau: float, policy: GridPolicy = GridPolicy()
):
    """Entanglement measures including the photonic fine structure at time tau.

    The excited state survives with weight exp(-tau); the emitted-photon
    branch carries weight 1 - exp(-tau) spread over the Schmidt spectrum
    of the coordinate amplitude at tau.  The composite spectrum
    {exp(-tau)} U {(1 - exp(-tau)) mu_k} sums to 1 by construction, and K
    and S follow from it.  When the amplitude is effectively rank-1
    (eta -> 0) this reduces to the two-level (K0, S0) with the
    spectrum-consistent entropy reading.

    Returns (K, S, lambdas) with lambdas the composite spectrum.

    Raises
    ------
    ConvergenceError
        If the enlarged-window consistency check moves the weight spectrum
        by more than ``policy.capture_tol``.
    ValueError
        For negative tau.
    """
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    le = math.exp(-tau)
    lg = -math.expm1(-tau)
    if lg == 0.0:
        lam = np.array([1.0])
        return 1.0, 0.0, lam

    at_tau = AtomPhotonParams(params.xi0, params.eta, tau)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        grid = coord_grid(at_tau, policy.n, policy.decay_span, policy.sigma_margin)
        result = schmidt_decompose(coord_matrix(at_tau, grid))
        if policy.capture_check:
            drift = coord_capture_drift(
                at_tau, policy.n, policy.decay_span, policy.sigma_margin
            )
            if drift >= policy.capture_tol:
                raise ConvergenceError(
                    f"window capture check failed at tau={tau:g}: enlarging the "
                    f"margins by 50% moves the weight spectrum by {drift:.3e} "
                    f">= {policy.capture_tol:.1e}; widen the window or raise n"
                )

    lam = np.concatenate(([le], lg * result.lambdas))
    lam = lam / lam.sum()
    k = float(1.0 / np.sum(lam**2))
    live = lam[lam > 0.0]
    s = float(-np.sum(live * np.log2(live)))
    return k, s, lam


def asymptotics(eta: float):
    """Long-time limits of (K, S) for weak coupling.

    K_inf = 1 + eta^2;  S_inf = (eta^2/ln 2) (ln(1/eta) + (1 + ln 2)/2).

    Raises
    ------
    ValueError
        Unless 0 < eta < 1.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"asymptotics require 0 < eta < 1, got {eta}")
    k_inf = 1.0 + eta**2
    s_inf = eta**2 / math.log(2.0) * (math.log(1.0 / eta) + 0.5 * (1.0 + math.log(2.0)))
    return k_inf, s_inf
