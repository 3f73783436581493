"""Independent reference implementations used to freeze expected values.

Everything here is deliberately brute-force and route-independent from
the package: dense state vectors and matrices, float linear algebra,
and direct enumeration.  Kept slow and obvious.
"""

from __future__ import annotations

import cmath
import math

import numpy as np


def statevector_branch_angles(d: int, theta: float) -> list[float]:
    """Logical rotation angle of every branch weight class, by brute force.

    Applies exp(-i theta/2 Z) per qubit to the amplitude of each basis
    string of d qubits starting from the uniform superposition.  A
    branch is the pair {b, complement}; in the post-selected sector
    the logical basis states are the sum and difference of the pair
    members (frame-corrected with the minimum-weight pattern), so the
    branch amplitudes map to a qubit whose Bloch vector gives the
    rotation angle geometrically: equatorial classes rotate about the
    logical Z axis, the remaining (even d - 2w) classes tilt in the
    x-z plane.  The global frame is fixed by making the weight-0
    class positive, which pins the relative signs of all others.
    """
    amps = np.zeros(1 << d, dtype=complex)
    for idx in range(1 << d):
        w = bin(idx).count("1")
        # R_z|+> per qubit: cos(t/2)|+> - i sin(t/2)|->; the |b|
        # flipped qubits each carry -i sin(t/2)
        amps[idx] = (math.cos(theta / 2) ** (d - w)) * ((-1j * math.sin(theta / 2)) ** w)

    def raw_angle(weight: int) -> float:
        w_ref = min(weight, d - weight)  # minimum-weight frame correction
        b = (1 << w_ref) - 1
        bbar = ((1 << d) - 1) ^ b
        q = amps[bbar] / amps[b]
        a0, a1 = 1.0 + q, 1.0 - q  # sector-logical amplitudes, unnormalized
        norm = abs(a0) ** 2 + abs(a1) ** 2
        cross = a0.conjugate() * a1
        x = 2.0 * cross.real / norm
        y = 2.0 * cross.imag / norm
        z = (abs(a0) ** 2 - abs(a1) ** 2) / norm
        if min(abs(y), abs(z)) > 1e-9:
            raise AssertionError(f"branch state off both rotation planes: {(x, y, z)}")
        return math.atan2(y - z, x)

    raw = [raw_angle(w) for w in range(d + 1)]
    anchor = 1.0 if raw[0] >= 0 else -1.0
    return [anchor * phi for phi in raw]


_M_I = np.eye(2, dtype=complex)
_M_X = np.array([[0, 1], [1, 0]], dtype=complex)
_M_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_M_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_MATS = {"I": _M_I, "X": _M_X, "Y": _M_Y, "Z": _M_Z}


def pauli_matrix(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label like '-iXZY' (kron in qubit order)."""
    phase = 1.0 + 0.0j
    body = label
    for prefix, value in (("-i", -1j), ("+i", 1j), ("-", -1.0), ("+", 1.0)):
        if label.startswith(prefix):
            phase = value
            body = label[len(prefix):]
            break
    out = np.array([[phase]], dtype=complex)
    for ch in body:
        out = np.kron(out, _MATS[ch])
    return out


def matrices_commute(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.allclose(a @ b, b @ a))


def walk_expected_steps_float(m: int) -> float:
    """Mean absorption time at the origin via a float linear solve."""
    size = 2 * m - 1
    a = np.zeros((size, size))
    for i in range(size):
        a[i, i] = 1.0
        if i > 0:
            a[i, i - 1] = -0.5
        if i + 1 < size:
            a[i, i + 1] = -0.5
    return float(np.linalg.solve(a, np.ones(size))[m - 1])


def gaussian_logical_angle_std(
    d: int, theta: float, sigma_theta: float, n_samples: int, seed: int
) -> float:
    """Sampling reference for the accepted-angle jitter.

    Per sample, each qubit angle gets an independent Gaussian offset
    and the exact product map gives the accepted logical angle.
    """
    rng = np.random.default_rng(seed)
    deltas = rng.normal(0.0, sigma_theta, size=(n_samples, d))
    prod = np.prod(np.tan((theta + deltas) / 2.0), axis=1)
    angles = 2.0 * np.arctan(prod)
    return float(np.std(angles, ddof=1))


def first_order_multiplicity(code) -> tuple[int, int]:
    """Count single-Pauli channels accepted via a weight-1 branch swap.

    A single error E on one qubit is accepted exactly when some branch
    pattern of weight one over the rotation support flips the same set
    of stabilizer readings E does; the sampled pattern then mislabels
    the output branch.  Returns (count, distinct qubits involved).
    Also counts the readout channels: weight-1 patterns whose reading
    signature is a single stabilizer, which one persistent readout
    flip can fake.
    """
    support = sorted(code.z_support)
    flips = 0
    qubits = set()
    for q in range(code.n):
        for p in ("X", "Y", "Z"):
            label = "".join(p if i == q else "I" for i in range(code.n))
            err_x, err_z = _label_bits(label)
            for s in support:
                pat = 1 << s
                if all(
                    _anticommutes(g.x, g.z, err_x, err_z) == _parity(g.x & pat)
                    for g in code.stabilizers
                ):
                    flips += 1
                    qubits.add(q)
                    break
    readout = sum(
        1
        for s in support
        if sum(_parity(g.x & (1 << s)) for g in code.stabilizers) == 1
    )
    return flips, readout


def _label_bits(label: str) -> tuple[int, int]:
    x = z = 0
    for i, ch in enumerate(label):
        if ch in "XY":
            x |= 1 << i
        if ch in "ZY":
            z |= 1 << i
    return x, z


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def _anticommutes(gx: int, gz: int, ex: int, ez: int) -> int:
    return (_parity(gx & ez) + _parity(gz & ex)) & 1


def logical_angle_reference(theta: float, d: int) -> float:
    """asin form of the accepted angle, evaluated independently."""
    s = math.sin(theta / 2.0) ** d
    c = math.cos(theta / 2.0) ** d
    return 2.0 * math.asin(s / math.hypot(s, c))
