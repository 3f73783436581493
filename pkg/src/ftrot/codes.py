"""Stabilizer codes used by the rotation-preparation protocol.

Four code families are registered:

``phase-flip``
    The distance-d repetition code in the X basis (stabilizers
    ``X_i X_{i+1}``).  Only phase errors are protected against, which is
    all the protocol needs; the stored distance counts Z-type logicals.
``surface``
    The rotated d x d surface code with the logical Z on the main
    diagonal and the logical X on the anti-diagonal.
``four-qubit``
    The [[4,2,2]] code with one designated logical qubit; the logical Z
    has weight-2 support, so the induced rotation axis picks up an
    extra quarter turn relative to the odd-distance families.
``perfect``
    A [[5,1,3]] code in a gauge where the logical Z is ``ZZZII``, i.e.
    supported on only three qubits.

Every code records, besides the usual stabilizer data, the three
numbers the analytic error model needs: how many single-qubit phase
errors project onto a wrong branch without tripping any check
(``flip_projection``), how many off-support errors mimic one of those
via an identical syndrome footprint (``secondary_flip``), and how many
weight-one branch patterns have a syndrome that a single readout flip
can mask (``readout_combos``).  The stored values are properties of the
check structure; the test suite re-derives them by direct search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString, commutes

Syndrome = tuple[int, ...]


@dataclass(frozen=True)
class Multiplicities:
    """First-order error-path counts for the analytic model.

    Attributes
    ----------
    flip_projection:
        Number of single-qubit Z locations (one per logical-Z support
        qubit) whose error projects the state onto a weight-1 branch
        with a perfectly clean syndrome.
    secondary_flip:
        Number of off-support single-qubit errors whose syndrome equals
        that of a support-qubit error, so they feed the same branch.
    readout_combos:
        Number of weight-1 branch patterns whose true syndrome has
        weight 1, so a single readout flip per cycle hides them.
    """

    flip_projection: int
    secondary_flip: int
    readout_combos: int

    @property
    def first_order(self) -> int:
        """Total multiplicity of the first-order substrate error path."""
        return self.flip_projection + self.secondary_flip


@dataclass(frozen=True)
class StabilizerCode:
    """An [[n, k, d]] stabilizer code with a designated logical pair.

    Attributes
    ----------
    name:
        Registry name of the family this instance came from.
    n, k, d:
        Qubit count, logical count, and code distance.  For the
        phase-flip family ``d`` counts Z-type logicals only (see
        ``distance_metric``).
    stabilizers:
        Generator tuple; the Monte-Carlo engine measures these in the
        order given.
    logical_z, logical_x:
        The designated logical pair.  ``logical_z`` is always a pure
        Z-type operator here; the rotation is transversal over its
        support.
    z_support:
        Qubit indices of ``logical_z``'s support.
    noncommuting_set:
        Indices of the generators whose X/Y part touches ``z_support``.
        These are the checks that do not commute with the transversal
        rotation and hence drive branch projection.
    error_multiplicities:
        See :class:`Multiplicities`.
    distance_metric:
        ``"full"`` for a genuine distance-d code, ``"phase"`` when only
        Z-type logicals are counted (phase-flip family).
    """

    name: str
    n: int
    k: int
    d: int
    stabilizers: tuple[PauliString, ...]
    logical_z: PauliString
    logical_x: PauliString
    z_support: tuple[int, ...]
    noncommuting_set: tuple[int, ...] = field(default=())
    error_multiplicities: Multiplicities = field(
        default=Multiplicities(0, 0, 0)
    )
    distance_metric: str = "full"

    def syndrome_of(self, error: PauliString) -> Syndrome:
        return syndrome(error, self)

    def check_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """(Gx, Gz) uint8 matrices, one row per generator.

        ``Gx[i, q]`` / ``Gz[i, q]`` are the X / Z components of
        generator i on qubit q; the simulation engine computes
        syndromes as symplectic products against these.
        """
        s = len(self.stabilizers)
        gx = np.zeros((s, self.n), dtype=np.uint8)
        gz = np.zeros((s, self.n), dtype=np.uint8)
        for i, p in enumerate(self.stabilizers):
            for q in range(self.n):
                gx[i, q] = (p.x >> q) & 1
                gz[i, q] = (p.z >> q) & 1
        return gx, gz

    def as_dict(self) -> dict:
        """JSON-ready description (used by ``ftrot codes export``)."""
        m = self.error_multiplicities
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "distance_metric": self.distance_metric,
            "stabilizers": [p.label() for p in self.stabilizers],
            "logical_z": self.logical_z.label(),
            "logical_x": self.logical_x.label(),
            "z_support": list(self.z_support),
            "noncommuting_set": list(self.noncommuting_set),
            "error_multiplicities": {
                "flip_projection": m.flip_projection,
                "secondary_flip": m.secondary_flip,
                "readout_combos": m.readout_combos,
            },
        }


def syndrome(error: PauliString, code: StabilizerCode) -> Syndrome:
    """Bit i is 1 when ``error`` anticommutes with generator i."""
    if error.n != code.n:
        raise ValueError("error length does not match code")
    return tuple(
        0 if commutes(error, s) else 1 for s in code.stabilizers
    )


def _noncommuting_set(
    stabilizers: tuple[PauliString, ...], z_support: tuple[int, ...]
) -> tuple[int, ...]:
    # A generator fails to commute with the transversal rotation exactly
    # when its X/Y part touches the rotated support at all: it then
    # anticommutes with at least one of the single-qubit Z factors.
    mask = 0
    for q in z_support:
        mask |= 1 << q
    return tuple(
        i for i, s in enumerate(stabilizers) if s.x & mask
    )


# --------------------------------------------------------------------
# code constructors
# --------------------------------------------------------------------


def phase_flip_code(d: int) -> StabilizerCode:
    """Distance-d phase-flip repetition code, [[d, 1, d]]_Z.

    Stabilizers are ``X_i X_{i+1}``; the logical Z is the full-weight
    ``Z...Z`` string and every generator is in the noncommuting set.
    """
    _require_odd(d)
    stabs = tuple(
        PauliString(d, (0b11 << i), 0) for i in range(d - 1)
    )
    mask = (1 << d) - 1
    return StabilizerCode(
        name="phase-flip",
        n=d,
        k=1,
        d=d,
        stabilizers=stabs,
        logical_z=PauliString(d, 0, mask),
        logical_x=PauliString(d, mask, 0),
        z_support=tuple(range(d)),
        noncommuting_set=tuple(range(d - 1)),
        error_multiplicities=Multiplicities(
            flip_projection=d, secondary_flip=0, readout_combos=2
        ),
        distance_metric="phase",
    )


def rotated_surface_code(d: int) -> StabilizerCode:
    """Rotated d x d surface code with diagonal logicals.

    Data qubit (r, c) has index ``d*r + c``.  Plaquette corners run
    over (i, j) in [-1, d-1]^2; a plaquette covers the up-to-four
    qubits {(i,j), (i,j+1), (i+1,j), (i+1,j+1)} inside the grid and is
    X-type when i+j is even.  Boundary halves keep the usual rotated
    layout: X halves on the top and bottom rows, Z halves on the left
    and right columns, no corner singles.  The logical Z runs down the
    main diagonal and the logical X along the anti-diagonal, so the
    rotation support is the d diagonal qubits.
    """
    _require_odd(d)
    n = d * d

    def qubit(r: int, c: int) -> int:
        return d * r + c

    stabs: list[PauliString] = []
    for i, j in itertools.product(range(-1, d), repeat=2):
        corners = [
            (r, c)
            for r, c in ((i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1))
            if 0 <= r < d and 0 <= c < d
        ]
        if len(corners) == 4:
            keep = True
        elif len(corners) == 2:
            x_type = (i + j) % 2 == 0
            if i == -1 or i == d - 1:  # top / bottom row: X halves only
                keep = x_type
            else:  # left / right column: Z halves only
                keep = not x_type
        else:  # corner singles never appear in the rotated layout
            keep = False
        if not keep:
            continue
        mask = 0
        for r, c in corners:
            mask |= 1 << qubit(r, c)
        if (i + j) % 2 == 0:
            stabs.append(PauliString(n, mask, 0))
        else:
            stabs.append(PauliString(n, 0, mask))

    assert len(stabs) == n - 1, "rotated layout must give n-1 checks"

    z_mask = 0
    x_mask = 0
    for t in range(d):
        z_mask |= 1 << qubit(t, t)
        x_mask |= 1 << qubit(t, d - 1 - t)
    z_support = tuple(qubit(t, t) for t in range(d))

    stabs_t = tuple(stabs)
    return StabilizerCode(
        name="surface",
        n=n,
        k=1,
        d=d,
        stabilizers=stabs_t,
        logical_z=PauliString(n, 0, z_mask),
        logical_x=PauliString(n, x_mask, 0),
        z_support=z_support,
        noncommuting_set=_noncommuting_set(stabs_t, z_support),
        error_multiplicities=Multiplicities(
            flip_projection=d, secondary_flip=2, readout_combos=2
        ),
    )


def four_qubit_code() -> StabilizerCode:
    """[[4,2,2]] code, one designated logical qubit.

    The designated logical Z is ``ZZII`` (weight-2 support), which makes
    the induced logical rotation axis sit in the x-y plane instead of
    along z; the analytics module carries that case separately.
    """
    stabs = (
        PauliString.from_label("XXXX"),
        PauliString.from_label("ZZZZ"),
    )
    return StabilizerCode(
        name="four-qubit",
        n=4,
        k=2,
        d=2,
        stabilizers=stabs,
        logical_z=PauliString.from_label("ZZII"),
        logical_x=PauliString.from_label("XIXI"),
        z_support=(0, 1),
        noncommuting_set=_noncommuting_set(stabs, (0, 1)),
        error_multiplicities=Multiplicities(
            flip_projection=8, secondary_flip=0, readout_combos=2
        ),
    )


def perfect_code() -> StabilizerCode:
    """[[5,1,3]] code in a gauge with a weight-3 logical Z.

    The generators are a cyclic-code gauge chosen so that
    ``logical_z = ZZZII``: the rotation then acts on three qubits only,
    at the cost of all four generators landing in the noncommuting set.
    """
    stabs = (
        PauliString.from_label("YYIZZ"),
        PauliString.from_label("IXXXZ"),
        PauliString.from_label("YXZIX"),
        PauliString.from_label("XYZXI"),
    )
    return StabilizerCode(
        name="perfect",
        n=5,
        k=1,
        d=3,
        stabilizers=stabs,
        logical_z=PauliString.from_label("ZZZII"),
        logical_x=_PERFECT_LOGICAL_X,
        z_support=(0, 1, 2),
        noncommuting_set=_noncommuting_set(stabs, (0, 1, 2)),
        error_multiplicities=Multiplicities(
            flip_projection=3, secondary_flip=0, readout_combos=1
        ),
    )


# Minimal-weight representative found by exhaustive search (validate()
# re-checks the algebra); the overall sign is a gauge choice.
_PERFECT_LOGICAL_X = PauliString.from_label("IIXYY")


# --------------------------------------------------------------------
# registry
# --------------------------------------------------------------------

_PARAMETRIZED = {"phase-flip": phase_flip_code, "surface": rotated_surface_code}
_FIXED = {"four-qubit": four_qubit_code, "perfect": perfect_code}

CODE_DESCRIPTIONS = {
    "phase-flip": "distance-d repetition code in the X basis (d odd, >= 3)",
    "surface": "rotated d x d surface code, diagonal logicals (d odd, >= 3)",
    "four-qubit": "[[4,2,2]] code, weight-2 rotation support",
    "perfect": "[[5,1,3]] code, weight-3 rotation support",
}


def list_codes() -> tuple[str, ...]:
    return tuple(CODE_DESCRIPTIONS)


def is_parametrized(name: str) -> bool:
    """True for families that take a distance, False for fixed codes."""
    if name not in CODE_DESCRIPTIONS:
        raise ValueError(f"unknown code {name!r}")
    return name in _PARAMETRIZED


def get_code(name: str, d: int | None = None) -> StabilizerCode:
    """Instantiate a registered code.

    ``d`` is required for the parametrized families (phase-flip,
    surface) and must be omitted or match for the fixed ones.
    """
    if name in _PARAMETRIZED:
        if d is None:
            raise ValueError(f"code {name!r} needs a distance d")
        return _PARAMETRIZED[name](d)
    if name in _FIXED:
        code = _FIXED[name]()
        if d is not None and d != code.d:
            raise ValueError(f"code {name!r} has fixed d={code.d}")
        return code
    raise ValueError(f"unknown code {name!r}")


def _require_odd(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"d must be odd and >= 3, got {d}")


# --------------------------------------------------------------------
# validation
# --------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[str, ...]
    distance: int | None = None


def validate(code: StabilizerCode) -> ValidationReport:
    """Re-derive the code's claimed structure from scratch.

    Checks generator commutation and independence, the logical pair
    algebra, the stored support and noncommuting set, and (for n <= 9,
    by exhaustive search over all 4^n Paulis) the distance.  The
    distance search respects ``distance_metric``: for ``"phase"`` only
    Z-type logicals are counted.
    """
    failures: list[str] = []

    for i, a in enumerate(code.stabilizers):
        for j in range(i + 1, len(code.stabilizers)):
            if not commutes(a, code.stabilizers[j]):
                failures.append(f"generators {i} and {j} anticommute")

    if len(code.stabilizers) != code.n - code.k:
        failures.append(
            f"expected {code.n - code.k} generators, "
            f"found {len(code.stabilizers)}"
        )
    if _gf2_rank(code) != len(code.stabilizers):
        failures.append("generators are not independent")

    for name, op in (("logical_z", code.logical_z), ("logical_x", code.logical_x)):
        bad = [i for i, s in enumerate(code.stabilizers) if not commutes(op, s)]
        if bad:
            failures.append(f"{name} anticommutes with generators {bad}")
    if commutes(code.logical_z, code.logical_x):
        failures.append("logical_z and logical_x commute")

    if code.logical_z.x != 0:
        failures.append("logical_z is not pure Z")
    if code.logical_z.support != code.z_support:
        failures.append("z_support does not match logical_z")

    expected_s = _noncommuting_set(code.stabilizers, code.z_support)
    if expected_s != code.noncommuting_set:
        failures.append(
            f"noncommuting_set {code.noncommuting_set} != derived {expected_s}"
        )

    distance: int | None = None
    if code.n <= 9:
        distance = _brute_force_distance(code)
        if distance != code.d:
            failures.append(f"claimed d={code.d}, brute force found {distance}")

    return ValidationReport(ok=not failures, failures=tuple(failures), distance=distance)


def _gf2_rank(code: StabilizerCode) -> int:
    rows = np.array(
        [
            [(p.x >> q) & 1 for q in range(code.n)]
            + [(p.z >> q) & 1 for q in range(code.n)]
            for p in code.stabilizers
        ],
        dtype=np.uint8,
    )
    rank = 0
    for col in range(rows.shape[1]):
        pivot = None
        for r in range(rank, rows.shape[0]):
            if rows[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[[rank, pivot]] = rows[[pivot, rank]]
        for r in range(rows.shape[0]):
            if r != rank and rows[r, col]:
                rows[r] ^= rows[rank]
        rank += 1
    return rank


def _brute_force_distance(code: StabilizerCode) -> int:
    """Minimum weight of a logical operator, by exhaustive search.

    Enumerates all 4^n Pauli masks (n <= 9 keeps this around 260k),
    keeps those commuting with every generator and outside the
    stabilizer group, and returns the minimum weight.  The group is
    small enough (2^(n-k)) to enumerate into a set.
    """
    n = code.n
    group = {(0, 0)}
    for p in code.stabilizers:
        group |= {(g[0] ^ p.x, g[1] ^ p.z) for g in group}

    svals = np.arange(1 << (2 * n), dtype=np.uint64)
    xs = svals & np.uint64((1 << n) - 1)
    zs = svals >> np.uint64(n)
    if code.distance_metric == "phase":
        keep = xs == 0
        xs, zs = xs[keep], zs[keep]

    ok = np.ones(xs.shape, dtype=bool)
    for p in code.stabilizers:
        anti = (
            np.bitwise_count(xs & np.uint64(p.z))
            + np.bitwise_count(zs & np.uint64(p.x))
        ) % 2
        ok &= anti == 0
    xs, zs = xs[ok], zs[ok]

    weights = np.bitwise_count(xs | zs)
    best = None
    for w in range(1, n + 1):
        for x, z in zip(xs[weights == w], zs[weights == w]):
            if (int(x), int(z)) not in group:
                return w
    return best if best is not None else n
