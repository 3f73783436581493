"""Monte-Carlo simulation of noisy post-selected state preparation.

The protocol under test: rotate every support qubit of the logical Z,
then run r cycles of stabilizer readout and discard the state when any
observed bit is nonzero.  Because the rotation only ever creates
Z-type branch operators on the support, a trial is fully described by

  * the sampled branch string b (each bit 1 w.p. sin^2(theta/2)),
  * a persistent Pauli error frame accumulating depolarizing noise,
  * per-cycle readout flips on each stabilizer outcome.

A trial is accepted when, in every cycle, the syndrome of
frame * Z^b with readout flips applied is all-zero.  Accepted trials
land in the branch weight class m = min(|b|, d-|b|), whose infidelity
against the target angle is a closed form; the estimator averages it.

Determinism: trials are partitioned into fixed-size batches, batch i
drawing from a counter-based Philox stream keyed by (seed, i).  All
reductions are integer counts, so results are bit-identical for a
given (seed, n_trials, batch_size) regardless of thread count.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analytics
from .codes import StabilizerCode, syndrome
from .pauli import PauliString

DEFAULT_BATCH_SIZE = 1 << 16

_SIMULABLE = ("phase-flip", "surface")

__all__ = [
    "NoiseModel",
    "TrialOutcome",
    "McStats",
    "CoherentStats",
    "RareEventWarning",
    "sample_branch",
    "sample_depolarizing",
    "run_prep_trial",
    "estimate",
    "coherent_mc",
]


class RareEventWarning(UserWarning):
    """Requested N is too small to resolve the predicted error rate."""


@dataclass(frozen=True)
class NoiseModel:
    """Phenomenological noise: depolarizing p_in per data qubit per
    cycle, plus an independent outcome flip per stabilizer per cycle
    (default 2p_in/3, which folds ancilla Z/Y errors into the readout)."""

    p_in: float
    r: int = 1
    readout_flip: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_in < 1.0:
            raise ValueError(f"p_in must be in [0, 1), got {self.p_in}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.readout_flip is None:
            object.__setattr__(self, "readout_flip", 2.0 * self.p_in / 3.0)
        if not 0.0 <= self.readout_flip < 1.0:
            raise ValueError("readout_flip must be in [0, 1)")


@dataclass(frozen=True)
class TrialOutcome:
    accepted: bool
    branch_weight: int
    infidelity_sample: float | None


@dataclass(frozen=True)
class McStats:
    trials: int
    accepted: int
    acceptance_rate: float
    acceptance_stderr: float
    mean_infidelity: float | None
    infidelity_stderr: float | None
    branch_histogram: tuple[int, ...]
    seed: int
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "accepted": self.accepted,
            "acceptance_rate": self.acceptance_rate,
            "acceptance_stderr": self.acceptance_stderr,
            "mean_infidelity": self.mean_infidelity,
            "infidelity_stderr": self.infidelity_stderr,
            "branch_histogram": list(self.branch_histogram),
            "seed": self.seed,
            "params": self.params,
        }


@dataclass(frozen=True)
class CoherentStats:
    mean_theta_l: float
    std_theta_l: float
    n_samples: int
    seed: int


def sample_branch(d: int, theta: float, rng: np.random.Generator) -> np.ndarray:
    """Branch string b: each bit independently 1 w.p. sin^2(theta/2)."""
    s2 = math.sin(theta / 2.0) ** 2
    return (rng.random(d) < s2).astype(np.uint8)


def sample_depolarizing(n: int, p_in: float, rng: np.random.Generator) -> PauliString:
    """One depolarizing draw on n qubits: I w.p. 1-p, else X/Y/Z w.p. p/3.

    A single uniform per qubit selects the slice: [0, p/3) -> X,
    [p/3, 2p/3) -> Y, [2p/3, p) -> Z.  The vectorized engine uses the
    identical mapping.
    """
    v = rng.random(n)
    x = z = 0
    for q in range(n):
        if v[q] < 2.0 * p_in / 3.0:
            x |= 1 << q
        if p_in / 3.0 <= v[q] < p_in:
            z |= 1 << q
    return PauliString(n, x, z)


def _require_simulable(code: StabilizerCode) -> None:
    if code.name not in _SIMULABLE:
        raise ValueError(
            f"simulation supports code families {_SIMULABLE}, got {code.name!r}"
        )


def run_prep_trial(
    code: StabilizerCode,
    theta: float,
    noise: NoiseModel,
    rng: np.random.Generator,
    inject_z: int | None = None,
) -> TrialOutcome:
    """One preparation trial, written for readability over speed.

    `inject_z` deterministically adds a Z error on the given qubit in
    the first cycle (used to isolate single error paths).  The branch
    weight class is taken from the sampled b: on acceptance the
    surviving pair is {b, bbar}, and the residual frame is a Pauli
    layer this model does not track.
    """
    _require_simulable(code)
    d = code.d
    b = sample_branch(d, theta, rng)
    bz = 0
    for i, q in enumerate(code.z_support):
        bz |= int(b[i]) << q

    frame = PauliString.identity(code.n)
    accepted = True
    for cycle in range(noise.r):
        err = sample_depolarizing(code.n, noise.p_in, rng)
        frame = frame * err
        if cycle == 0 and inject_z is not None:
            frame = frame * PauliString.single_z(code.n, inject_z)
        true_bits = syndrome(PauliString(code.n, frame.x, frame.z ^ bz), code)
        flips = rng.random(len(true_bits)) < noise.readout_flip
        if any(bit ^ int(f) for bit, f in zip(true_bits, flips)):
            accepted = False
            break

    w = int(b.sum())
    m = min(w, d - w)
    infid = analytics.branch_infidelity(m, d, theta) if accepted else None
    return TrialOutcome(accepted=accepted, branch_weight=m, infidelity_sample=infid)


def _stabilizer_plan(
    code: StabilizerCode,
) -> list[tuple[bool, np.ndarray, np.ndarray]]:
    """Per generator: (is_x_type, data columns, branch columns).

    X-type checks see Z-frame parity XOR branch-bit parity over the
    overlap with the rotation support; Z-type checks see X-frame
    parity.  Every registered simulable code has pure-type generators.
    """
    support_pos = {q: i for i, q in enumerate(code.z_support)}
    plan = []
    for p in code.stabilizers:
        if p.x and p.z:
            raise ValueError("engine requires pure X- or Z-type generators")
        is_x = p.x != 0
        cols = np.array(p.support, dtype=np.intp)
        bcols = (
            np.array([support_pos[q] for q in p.support if q in support_pos], dtype=np.intp)
            if is_x
            else np.empty(0, dtype=np.intp)
        )
        plan.append((is_x, cols, bcols))
    return plan


def _run_batch(
    code: StabilizerCode,
    plan: list[tuple[bool, np.ndarray, np.ndarray]],
    theta: float,
    noise: NoiseModel,
    seed: int,
    batch_index: int,
    size: int,
    inject_z: int | None,
) -> tuple[int, np.ndarray]:
    """Simulate one batch; returns (accepted count, branch histogram).

    Draw order per batch is fixed (branch bits, then per cycle: one
    uniform per data qubit, one per stabilizer) and is part of the
    determinism contract.
    """
    rng = np.random.Generator(
        np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, batch_index])
    )
    n, d = code.n, code.d
    p, q = noise.p_in, noise.readout_flip
    s2 = math.sin(theta / 2.0) ** 2

    b = rng.random((size, d)) < s2
    fx = np.zeros((size, n), dtype=bool)
    fz = np.zeros((size, n), dtype=bool)
    ok = np.ones(size, dtype=bool)

    for cycle in range(noise.r):
        v = rng.random((size, n))
        fx ^= v < 2.0 * p / 3.0
        fz ^= (v >= p / 3.0) & (v < p)
        if cycle == 0 and inject_z is not None:
            fz[:, inject_z] ^= True
        ro = rng.random((size, len(plan)))
        for i, (is_x, cols, bcols) in enumerate(plan):
            if is_x:
                par = np.bitwise_xor.reduce(fz[:, cols], axis=1)
                if bcols.size:
                    par ^= np.bitwise_xor.reduce(b[:, bcols], axis=1)
            else:
                par = np.bitwise_xor.reduce(fx[:, cols], axis=1)
            ok &= ~(par ^ (ro[:, i] < q))

    w = b.sum(axis=1)
    m = np.minimum(w, d - w).astype(np.intp)
    hist = np.bincount(m[ok], minlength=d // 2 + 1)
    return int(ok.sum()), hist


def estimate(
    code: StabilizerCode,
    theta: float,
    theta_l_target: float | None,
    noise: NoiseModel,
    n_trials: int,
    seed: int,
    *,
    threads: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
    inject_z: int | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> McStats:
    """Estimate acceptance and mean accepted infidelity over n_trials.

    The batch partition depends only on (n_trials, batch_size), and
    batch i draws from Philox key (seed, i), so the result is
    bit-identical across thread counts.  theta_l_target defaults to
    the accepted angle of (theta, d), making the m=0 class exact-zero.
    """
    _require_simulable(code)
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    if inject_z is not None and not 0 <= inject_z < code.n:
        raise ValueError("inject_z out of range")

    d = code.d
    if theta_l_target is None:
        theta_l_target = analytics.logical_angle(theta, d)
    values = np.array(
        [
            analytics.branch_infidelity(m, d, theta, theta_l_target)
            for m in range(d // 2 + 1)
        ]
    )

    if inject_z is None and noise.p_in > 0:
        cfg = analytics.RotationConfig(theta=theta, d=d, p_in=noise.p_in, r=noise.r)
        predicted = analytics.accepted_error_model(cfg, code.error_multiplicities)
        p_s = analytics.success_rate(cfg, code.n, len(code.stabilizers)).p_s
        expected_events = predicted * p_s * n_trials
        if expected_events < 10.0:
            warnings.warn(
                RareEventWarning(
                    f"expected about {expected_events:.2f} accepted-error events "
                    f"at N={n_trials} (analytic rate {predicted:.3g}); "
                    "the infidelity estimate will be noise-dominated"
                ),
                stacklevel=2,
            )

    plan = _stabilizer_plan(code)
    n_batches = (n_trials + batch_size - 1) // batch_size
    sizes = [
        batch_size if i < n_batches - 1 else n_trials - batch_size * (n_batches - 1)
        for i in range(n_batches)
    ]

    def run(i: int) -> tuple[int, np.ndarray]:
        out = _run_batch(code, plan, theta, noise, seed, i, sizes[i], inject_z)
        if progress is not None:
            progress(i + 1, n_batches)
        return out

    if threads > 1 and n_batches > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(n_batches)))
    else:
        results = [run(i) for i in range(n_batches)]

    accepted = sum(r[0] for r in results)
    hist = np.sum([r[1] for r in results], axis=0, dtype=np.int64)

    rate = accepted / n_trials
    rate_err = math.sqrt(rate * (1.0 - rate) / n_trials)
    if accepted > 0:
        mean_inf = float(hist @ values) / accepted
        var = float(hist @ (values - mean_inf) ** 2) / accepted
        inf_err = math.sqrt(var / accepted)
    else:
        mean_inf = None
        inf_err = None

    params = {
        "code": code.name,
        "d": d,
        "n": code.n,
        "theta": theta,
        "theta_l_target": theta_l_target,
        "p_in": noise.p_in,
        "readout_flip": noise.readout_flip,
        "r": noise.r,
        "batch_size": batch_size,
        "inject_z": inject_z,
    }
    return McStats(
        trials=n_trials,
        accepted=accepted,
        acceptance_rate=rate,
        acceptance_stderr=rate_err,
        mean_infidelity=mean_inf,
        infidelity_stderr=inf_err,
        branch_histogram=tuple(int(c) for c in hist),
        seed=seed,
        params=params,
    )


def coherent_mc(
    d: int,
    theta: float,
    sigma_theta: float,
    n_samples: int,
    seed: int,
) -> CoherentStats:
    """Sample the logical angle under per-qubit Gaussian angle noise.

    Each sample draws d angle offsets N(0, sigma^2) and evaluates the
    exact product form theta_L = 2 atan(prod_i tan((theta+dtheta_i)/2)).
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    rng = np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, 0]))
    angles = theta + sigma_theta * rng.standard_normal((n_samples, d))
    theta_l = 2.0 * np.arctan(np.prod(np.tan(angles / 2.0), axis=1))
    return CoherentStats(
        mean_theta_l=float(theta_l.mean()),
        std_theta_l=float(theta_l.std(ddof=1)),
        n_samples=n_samples,
        seed=seed,
    )
