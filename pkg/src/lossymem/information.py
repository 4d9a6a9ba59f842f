"""Closed-form entropies, mutual information, rate and relative gain.

All entropy formulas are evaluated in log space (powers like 2^{3n}, N^n and
pi^n enter only as sums of logarithms) so nothing overflows for large n. The
normalization coefficient multiplying each entropy bracket is computed rather
than assumed to be 1 and reported as c_out / c_joint; it equals 1 up to
round-off for valid parameters, which downstream checks monitor. Internal
unit is nats; conversion to bits happens once, at each entropy's return.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel_model import N_MIN, ChannelParams, EncodingPoint, assemble_model
from .errors import DegenerateBaseline, PhotonBudgetExceeded
from .matrix_core import spd_logdet

LN2 = math.log(2.0)
LN_PI = math.log(math.pi)

# Coarse-grid size seeding the golden-section branches of optimize_r.
_SEED_GRID = 256
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class InfoBreakdown:
    """Entropies (bits), mutual information, per-use rate, and the
    normalization health coefficients (both should be ~1)."""

    i_mu: float
    i_zeta: float
    i_joint: float
    i_r: float
    rate: float
    c_out: float
    c_joint: float


@dataclass(frozen=True)
class GainPoint:
    """Relative rate gain of entanglement r against the r = 0 baseline."""

    r: float
    n_mod: float
    gain: float
    info: InfoBreakdown


def photon_budget(n_eff, r):
    """Modulation variance left after spending sinh^2(r) on entanglement."""
    n_mod = n_eff - math.sinh(r) ** 2
    if not n_mod >= N_MIN:
        raise PhotonBudgetExceeded(
            f"r={r!r} leaves modulation {n_mod!r} below {N_MIN} "
            f"(admissible |r| <= {r_limit(n_eff)!r})")
    return n_mod


def r_limit(n_eff):
    """Largest |r| whose modulation variance stays >= N_MIN with margin."""
    head = n_eff - 2.0 * N_MIN
    return math.asinh(math.sqrt(head)) if head > 0.0 else 0.0


def input_entropy(n, n_mod):
    """Entropy of the Gaussian modulation ensemble, in bits."""
    if not n_mod >= N_MIN:
        raise PhotonBudgetExceeded(f"modulation variance {n_mod!r} below {N_MIN}")
    return (n + n * math.log(math.pi * n_mod)) / LN2


def output_entropy(model, n, n_mod):
    """Entropy of the measured output, in bits, plus the c_out coefficient."""
    ld_gl = model.logdet_gl
    ld_rpin = spd_logdet(model.r_p + np.eye(2 * n) / n_mod)
    ld_up = spd_logdet(model.u_p)
    ln_c = 3 * n * LN2 - n * math.log(n_mod) - 0.5 * (ld_gl + ld_rpin + ld_up)
    c_out = math.exp(ln_c)
    ln_norm = 3 * n * LN2 - n * LN_PI - n * math.log(n_mod) - 0.5 * (ld_gl + ld_rpin)
    return c_out * (n - ln_norm) / LN2, c_out


def joint_entropy(model, n, n_mod):
    """Entropy of the joint (modulation, output) density, in bits, plus c_joint."""
    ld_gl = model.logdet_gl
    ld_v = spd_logdet(model.v_n)
    ln_c = 3 * n * LN2 - n * math.log(n_mod) - 0.5 * (ld_gl + ld_v)
    c_joint = math.exp(ln_c)
    ln_norm = 3 * n * LN2 - 2 * n * LN_PI - n * math.log(n_mod) - 0.5 * ld_gl
    return c_joint * (2 * n - ln_norm) / LN2, c_joint


def mutual_information(params, r):
    """Full information breakdown at entanglement r within the photon budget."""
    n_mod = photon_budget(params.n_eff, r)
    model = assemble_model(params, EncodingPoint(r=r, n_mod=n_mod))
    n = params.n
    i_mu = input_entropy(n, n_mod)
    i_zeta, c_out = output_entropy(model, n, n_mod)
    i_joint, c_joint = joint_entropy(model, n, n_mod)
    i_r = i_mu + i_zeta - i_joint
    return InfoBreakdown(
        i_mu=i_mu, i_zeta=i_zeta, i_joint=i_joint, i_r=i_r, rate=i_r / n,
        c_out=c_out, c_joint=c_joint)


@lru_cache(maxsize=1024)
def _baseline(params):
    return mutual_information(params, 0.0)


def rate_gain(params, r):
    """Relative gain of entanglement r over the r = 0 baseline.

    The baseline is cached per params, and r = 0 reuses it directly so a
    zero-entanglement point carries gain exactly 0.
    """
    base = _baseline(params)
    if base.i_r <= 1e-12:
        raise DegenerateBaseline(
            f"baseline mutual information {base.i_r!r} is ~0 (eta too small)")
    if r == 0.0:
        return GainPoint(r=0.0, n_mod=params.n_eff, gain=0.0, info=base)
    info = mutual_information(params, r)
    return GainPoint(
        r=r, n_mod=photon_budget(params.n_eff, r),
        gain=(info.i_r - base.i_r) / base.i_r, info=info)


def _golden_max(fn, lo, hi, tol=1e-9):
    """Golden-section maximization of fn on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    mid = 0.5 * (a + b)
    return mid, fn(mid)


def optimize_r(params):
    """Maximize the relative gain over the admissible entanglement interval.

    Gain is not proven unimodal in r, so each sign branch is seeded by a
    coarse grid and golden-section search refines a bracket around the best
    grid point; the better branch wins.
    """
    lim = r_limit(params.n_eff)
    if lim <= 0.0:
        raise PhotonBudgetExceeded(f"photon budget {params.n_eff!r} leaves no admissible r")

    def gain_at(r):
        return rate_gain(params, r).gain

    grid = np.linspace(-lim, lim, _SEED_GRID)
    gains = [gain_at(r) for r in grid]
    step = grid[1] - grid[0]

    best_r, best_g = 0.0, gain_at(0.0)
    for branch_lo, branch_hi in ((-lim, 0.0), (0.0, lim)):
        in_branch = [(g, r) for g, r in zip(gains, grid) if branch_lo <= r <= branch_hi]
        g0, r0 = max(in_branch)
        lo = max(branch_lo, r0 - step)
        hi = min(branch_hi, r0 + step)
        r_ref, g_ref = _golden_max(gain_at, lo, hi)
        if g_ref < g0:
            r_ref, g_ref = r0, g0
        if g_ref > best_g:
            best_r, best_g = r_ref, g_ref
    return best_r, best_g
