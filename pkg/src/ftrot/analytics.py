"""Closed-form model of post-selected transversal-rotation preparation.

A physical rotation exp(i(theta/2)Z) applied to every qubit in the
support of a weight-d logical Z splits the encoded state into branch
pairs labelled by bit-strings b, with amplitudes

    u_b = cos^{d-|b|}(theta/2) * (i sin(theta/2))^{|b|}.

Error detection keeps only the pair {b, bbar}; the surviving state is a
logical Z rotation whose angle depends only on the weight class
m = min(|b|, d-|b|).  This module collects the resulting closed forms:
the accepted logical angle, the per-branch angles, first-order and
summed incoherent error rates, the readout-masking error, success
rates, coherent-noise spread, multi-rotation trade-offs, the
even-distance filter coefficients, and the dedicated four-qubit /
five-qubit variants.

Conventions (fixed package-wide): angles in radians; the rotation is
cos + i*sin*Z per qubit; branch angles are reported in the frame where
the codespace branch (m = 0) rotates by +logical_angle for theta in
(0, pi).  Powers like sin^{2(d-1)} are evaluated in the log domain when
they would otherwise underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .codes import Multiplicities

__all__ = [
    "RotationConfig",
    "ErrorBudget",
    "SuccessRate",
    "SubstrateLimitedError",
    "logical_angle",
    "logical_angle_small",
    "branch_angle",
    "branch_infidelity",
    "incoherent_error_first_order",
    "incoherent_error_total",
    "binomial_multiplicity",
    "readout_error",
    "accepted_error_model",
    "success_rate",
    "coherent_angle_std",
    "multi_rotation_incoherent",
    "multi_rotation_coherent_std",
    "filter_coefficients",
    "four_qubit_analytics",
    "perfect_code_analytics",
]


@dataclass(frozen=True)
class RotationConfig:
    """Parameters of one preparation attempt.

    theta: physical rotation angle, radians, in [0, pi].
    d: support weight of the logical Z (code distance for the
       odd-distance families).
    p_in: depolarizing probability per qubit per cycle.
    r: detection cycles.
    sigma_theta: per-qubit coherent angle standard deviation, radians.
    """

    theta: float
    d: int
    p_in: float = 0.0
    r: int = 1
    sigma_theta: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must be in [0, pi], got {self.theta}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not 0.0 <= self.p_in < 1.0:
            raise ValueError(f"p_in must be in [0, 1), got {self.p_in}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.sigma_theta < 0.0:
            raise ValueError("sigma_theta must be non-negative")

    @property
    def readout_flip(self) -> float:
        """Per-stabilizer per-cycle outcome-flip probability (2p/3)."""
        return 2.0 * self.p_in / 3.0


class ErrorBudget(NamedTuple):
    eps_first_order: float
    eps_total: float
    eps_readout: float
    coherent_std: float


class SuccessRate(NamedTuple):
    p_s: float
    p_s_in: float
    p_s_coh: float


class SubstrateLimitedError(ValueError):
    """Raised when the error series cannot converge: p_in/3 is at or
    above sin^2(theta/2)cos^2(theta/2), so substrate noise dominates
    the rotation itself and the perturbative sum is meaningless."""


def _stable_pow(base: float, exponent: float) -> float:
    """base**exponent via exp/log for tiny bases; exact at the edges.

    math.pow underflows to 0.0 the same way, so the two routes agree
    wherever direct evaluation is representable; the log route is kept
    as the single code path for the large-exponent formulas.
    """
    if base == 0.0:
        return 0.0 if exponent > 0 else 1.0
    if exponent == 0.0:
        return 1.0
    return math.exp(exponent * math.log(base))


def logical_angle(theta: float, d: int) -> float:
    """Accepted logical rotation angle for support weight d.

    Equals 2*asin(sin^d / sqrt(cos^{2d} + sin^{2d})) (half-angles
    implied), or equivalently 2*atan(tan^d(theta/2)), which is the
    numerically stable form used here.  Monotone nondecreasing on
    [0, pi] with fixed points 0, pi/2 (d odd), and pi.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must be in [0, pi], got {theta}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if theta == math.pi:
        return math.pi
    return 2.0 * math.atan(_stable_pow(math.tan(theta / 2.0), d))


def logical_angle_small(theta: float, d: int) -> float:
    """Small-angle form 2*(theta/2)**d of the accepted logical angle."""
    return 2.0 * _stable_pow(theta / 2.0, d)


def branch_angle(b_weight: int, d: int, theta: float) -> float:
    """Logical rotation angle of the branch pair with weight class m.

    The two branch amplitudes u_b, u_bbar give a rotation by
    2*atan((-1)^m * tan^{d-2m}(theta/2)) with m = min(w, d-w), in the
    frame anchored so branch_angle(0, d, theta) = +logical_angle.
    Weight classes w and d-w describe the same branch pair.
    """
    if not 0 <= b_weight <= d:
        raise ValueError(f"b_weight must be in [0, {d}], got {b_weight}")
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must be in [0, pi], got {theta}")
    m = min(b_weight, d - b_weight)
    sign = -1.0 if m % 2 else 1.0
    if theta == math.pi:
        return sign * math.pi
    t = _stable_pow(math.tan(theta / 2.0), d - 2 * m)
    return 2.0 * math.atan(sign * t)


def branch_infidelity(b_weight: int, d: int, theta: float,
                      theta_l_target: float | None = None) -> float:
    """sin^2((theta_L_target - branch_angle)/2) for one weight class.

    The default target is the accepted angle of the same (theta, d), so
    the codespace class m=0 has infidelity exactly 0.
    """
    if theta_l_target is None:
        theta_l_target = logical_angle(theta, d)
    phi = branch_angle(b_weight, d, theta)
    return math.sin((theta_l_target - phi) / 2.0) ** 2


def incoherent_error_first_order(cfg: RotationConfig, d_prime: int) -> float:
    """Leading-order accepted error rate, small-angle closed form.

    d_prime * (p_in/3) * sin^{2(d-1)}(theta/2) / cos(theta/2).  This is
    the compact published form; `accepted_error_model` below keeps the
    exact branch-pair factors and is what the Monte-Carlo engine is
    compared against.
    """
    if d_prime < 0:
        raise ValueError("d_prime must be >= 0")
    if cfg.p_in == 0.0 or d_prime == 0:
        return 0.0
    s = math.sin(cfg.theta / 2.0)
    c = math.cos(cfg.theta / 2.0)
    if c == 0.0:
        raise ValueError("theta = pi: cos factor vanishes")
    return d_prime * (cfg.p_in / 3.0) * _stable_pow(s, 2 * (cfg.d - 1)) / c


def binomial_multiplicity(d_prime_1: int) -> Callable[[int, int], int]:
    """Default multiplicity extrapolation: d'(d, n) = C(d'_1, n).

    Only the n=1 count is a derived quantity; higher orders use this
    combinatorial heuristic (documented, and far below leading order in
    the regimes of interest).
    """

    def mult(d: int, n: int) -> int:
        return math.comb(d_prime_1, n)

    return mult


def incoherent_error_total(
    cfg: RotationConfig,
    multiplicity_fn: Callable[[int, int], int],
    rel_tol: float = 1e-3,
) -> float:
    """Summed accepted error rate over error orders n >= 1.

    sum_n d'(d, n) (p_in/3)^n sin^{2(d-n)}(theta/2) cos^{-2n}(theta/2),
    truncated once a term falls below `rel_tol` of the running sum.
    The n=1 term carries cos^{-2}, one cos factor away from the
    first-order form above; both are exposed on purpose.

    Raises SubstrateLimitedError when p_in/3 >= sin^2 cos^2 (term ratio
    reaches 1: substrate noise exceeds the rotation being prepared).
    """
    if cfg.p_in == 0.0:
        return 0.0
    s = math.sin(cfg.theta / 2.0)
    c = math.cos(cfg.theta / 2.0)
    s2, c2 = s * s, c * c
    if cfg.p_in / 3.0 >= s2 * c2:
        raise SubstrateLimitedError(
            f"substrate-limited regime: p_in/3 = {cfg.p_in / 3.0:.3g} >= "
            f"sin^2 cos^2 = {s2 * c2:.3g} at theta = {cfg.theta:.3g}"
        )
    total = 0.0
    for n in range(1, cfg.d + 1):
        term = (
            multiplicity_fn(cfg.d, n)
            * _stable_pow(cfg.p_in / 3.0, n)
            * _stable_pow(s, 2 * (cfg.d - n))
            * _stable_pow(c, -2 * n)
        )
        total += term
        if term < rel_tol * total:
            break
    return total


def readout_error(cfg: RotationConfig, readout_combos: int) -> float:
    """Accepted error rate from r-fold masking of a weight-1 syndrome.

    A weight-1 branch pattern whose true syndrome has a single hot bit
    survives when that bit's readout flips in every cycle:
    combos * (2p_in/3)^r, times the same sin^{2(d-1)}/cos projection
    factor as the flip path.
    """
    if readout_combos < 0:
        raise ValueError("readout_combos must be >= 0")
    if cfg.p_in == 0.0 or readout_combos == 0:
        return 0.0
    s = math.sin(cfg.theta / 2.0)
    c = math.cos(cfg.theta / 2.0)
    if c == 0.0:
        raise ValueError("theta = pi: cos factor vanishes")
    q = cfg.readout_flip
    return readout_combos * _stable_pow(q, cfg.r) * _stable_pow(s, 2 * (cfg.d - 1)) / c


def accepted_error_model(
    cfg: RotationConfig, mult: Multiplicities, theta_l_target: float | None = None
) -> float:
    """Exact first-order prediction of the Monte-Carlo mean infidelity.

    Each first-order path (flip projection, secondary flip, r-fold
    readout masking) lands the accepted state in the weight-1 branch.
    Per instance, the branch pair {b, bbar} is sampled with probability
    sin^2 cos^{2(d-1)} + sin^{2(d-1)} cos^2, the surviving state is off
    by branch_angle(1), and the acceptance normalization is p_s_coh.
    The (1-p_in)^{-1} factor accounts for the conditioning of the
    single-error path on the otherwise-clean history; all neglected
    contributions are higher order in p_in.
    """
    d = cfg.d
    s = math.sin(cfg.theta / 2.0)
    c = math.cos(cfg.theta / 2.0)
    pair = (
        s * s * _stable_pow(c, 2 * (d - 1))
        + _stable_pow(s, 2 * (d - 1)) * c * c
    )
    p_s_coh = _stable_pow(c, 2 * d) + _stable_pow(s, 2 * d)
    infid = branch_infidelity(1, d, cfg.theta, theta_l_target)
    flip_rate = mult.first_order * (cfg.p_in / 3.0) / (1.0 - cfg.p_in)
    mask_rate = mult.readout_combos * _stable_pow(cfg.readout_flip, cfg.r)
    return (flip_rate + mask_rate) * pair * infid / p_s_coh


def success_rate(cfg: RotationConfig, n_qubits: int, n_stabilizers: int) -> SuccessRate:
    """Acceptance probability split into substrate and coherent parts.

    p_s_in = (1-p_in)^{r n} (1-2p_in/3)^{r n_stab}: no substrate error
    on any qubit and no readout flip on any check over r cycles.
    p_s_coh = cos^{2d} + sin^{2d}: the trivial branch pair's weight.
    """
    if n_qubits < 1 or n_stabilizers < 0:
        raise ValueError("invalid qubit/stabilizer counts")
    p_s_in = (
        _stable_pow(1.0 - cfg.p_in, cfg.r * n_qubits)
        * _stable_pow(1.0 - cfg.readout_flip, cfg.r * n_stabilizers)
    )
    c = math.cos(cfg.theta / 2.0)
    s = math.sin(cfg.theta / 2.0)
    p_s_coh = _stable_pow(c, 2 * cfg.d) + _stable_pow(s, 2 * cfg.d)
    return SuccessRate(p_s=p_s_in * p_s_coh, p_s_in=p_s_in, p_s_coh=p_s_coh)


def coherent_angle_std(d: int, theta_l0: float, sigma_frac: float) -> float:
    """Standard deviation of the logical angle under coherent noise.

    sqrt(d) * theta_L0 * sigma_frac with sigma_frac = sigma_theta /
    theta: d independent per-qubit angle errors add in quadrature, each
    entering the logical angle at first order through its fractional
    size.  Valid in the small-angle regime (theta_L0 << 1).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if theta_l0 < 0 or sigma_frac < 0:
        raise ValueError("inputs must be non-negative")
    return math.sqrt(d) * theta_l0 * sigma_frac


def multi_rotation_incoherent(m: int, cfg: RotationConfig, d_prime: int) -> float:
    """Total incoherent error of m sequential rotations hitting the
    same target angle, each at physical angle theta / m^{1/d}.

    m * d' * (p/3) * sin^{2(d-1)}(theta/(2 m^{1/d})) * cos^2(...):
    splitting a rotation reduces the per-step angle slowly enough that
    the total scales as m^{-(1-2/d)} (the error-time trade-off).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    scaled = cfg.theta / (2.0 * _stable_pow(float(m), 1.0 / cfg.d))
    s = math.sin(scaled)
    c = math.cos(scaled)
    return (
        m
        * d_prime
        * (cfg.p_in / 3.0)
        * _stable_pow(s, 2 * (cfg.d - 1))
        * c
        * c
    )


def multi_rotation_coherent_std(m: int, d: int, sigma_frac: float) -> float:
    """Fractional coherent spread after m split rotations: sqrt(d/m) * sigma_frac."""
    if m < 1 or d < 1:
        raise ValueError("m and d must be >= 1")
    if sigma_frac < 0:
        raise ValueError("sigma_frac must be non-negative")
    return math.sqrt(d / m) * sigma_frac


def filter_coefficients(theta: float, d: int, sign: int = 1) -> tuple[float, float]:
    """Amplitude pair of the even-distance weak filter.

    For even d the accepted operation is not a rotation but a filter:
    c0 = cos^d(theta/2) - sin^d(theta/2) on |0_L> and
    c1 = cos^d + sin^d on |1_L>, damping |0_L> relative to |1_L>.
    `sign` = -1 encodes the opposite (-1)^{d/2} convention and swaps
    the roles.
    """
    if d < 2 or d % 2:
        raise ValueError("filter_coefficients requires even d >= 2")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = math.cos(theta / 2.0) ** d
    s = math.sin(theta / 2.0) ** d
    c0, c1 = c - s, c + s
    if sign == -1:
        c0, c1 = c1, c0
    return (c0, c1)


class FourQubitResult(NamedTuple):
    theta_l: float
    eps_in: float
    correlation: float
    axis: str


def four_qubit_analytics(theta: float, p_in: float) -> FourQubitResult:
    """Closed forms for the weight-2-support four-qubit variant.

    The accepted rotation is by theta_L = 2 asin(sin^2 / sqrt(cos^4 +
    sin^4)) about the -y axis (the even support weight turns i^2 into a
    quarter-turn of the rotation plane).  First-order error
    eps = 8 (p/3) sin^2 cos^2 cos^2(theta_L); the two encoded qubits
    fail together, with outcome correlation 1/2 - eps/(2(1-eps)).
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError("theta must be in [0, pi]")
    s = math.sin(theta / 2.0)
    c = math.cos(theta / 2.0)
    s2, c2 = s * s, c * c
    denom = math.sqrt(c2 * c2 + s2 * s2)
    theta_l = 2.0 * math.asin(s2 / denom) if denom > 0 else 0.0
    eps = 8.0 * (p_in / 3.0) * s2 * c2 * math.cos(theta_l) ** 2
    correlation = 0.5 - eps / (2.0 * (1.0 - eps)) if eps < 1.0 else 0.0
    return FourQubitResult(theta_l=theta_l, eps_in=eps, correlation=correlation, axis="-y")


class PerfectCodeResult(NamedTuple):
    theta_l: float
    eps_in: float
    delta_theta_l: float


def perfect_code_analytics(theta: float, p_in: float) -> PerfectCodeResult:
    """Closed forms for the weight-3-support five-qubit variant.

    theta_L = -2 asin(sin^3 / sqrt(cos^6 + sin^6)): the accepted
    rotation runs backwards (theta_L ~ -theta^3/4 at small angle), so a
    rotation by theta leaves a net offset Delta = theta_L - theta.
    First-order error eps = 3 (p/3) sin^2 cos^4 sin^2(Delta/2).
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError("theta must be in [0, pi]")
    s = math.sin(theta / 2.0)
    c = math.cos(theta / 2.0)
    s2, c2 = s * s, c * c
    denom = math.sqrt(c2 ** 3 + s2 ** 3)
    theta_l = -2.0 * math.asin(s2 * s / denom) if denom > 0 else 0.0
    delta = theta_l - theta
    eps = 3.0 * (p_in / 3.0) * s2 * c2 * c2 * math.sin(delta / 2.0) ** 2
    return PerfectCodeResult(theta_l=theta_l, eps_in=eps, delta_theta_l=delta)
