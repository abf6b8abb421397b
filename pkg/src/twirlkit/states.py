"""Constructors for the state families used throughout the toolkit.

Includes the one-parameter pure family, Werner states, the four Bell
projectors, general X-type states, depolarized pure states, a fidelity
functional, a seeded random-state generator, and the JSON state-file
loader consumed by the command line front end.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidXParamsError, OutOfRangeError, SchemaError
from .qubit_algebra import ID4, TwoQubitState, pauli_compose, PauliDecomposition, validate_density

_BELL_VECTORS = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2),
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2),
}

# (diagonal pair, off-diagonal sign); entries are exact halves so the
# projectors and everything derived from them stay float-exact.
_BELL_SUPPORT = {
    "phi+": ((0, 3), 0.5),
    "phi-": ((0, 3), -0.5),
    "psi+": ((1, 2), 0.5),
    "psi-": ((1, 2), -0.5),
}

BELL_KINDS = tuple(_BELL_SUPPORT)


def bell(kind: str) -> TwoQubitState:
    """Rank-1 projector onto a Bell state; kind is one of phi+, phi-, psi+, psi-."""
    try:
        (i, j), off = _BELL_SUPPORT[kind]
    except KeyError:
        raise OutOfRangeError(f"unknown Bell state {kind!r}; choose from {BELL_KINDS}") from None
    m = np.zeros((4, 4), dtype=complex)
    m[i, i] = m[j, j] = 0.5
    m[i, j] = m[j, i] = off
    return validate_density(m)


def pure_state(gamma: float) -> TwoQubitState:
    """Pure state cos(pi/4 - gamma/2)|uu> + sin(pi/4 - gamma/2)|dd>.

    gamma runs over [0, pi/2]; gamma = 0 gives the phi+ Bell state and
    gamma = pi/2 the product state |uu>. Bloch form: x = y = (0, 0, sin g),
    T = diag(cos g, -cos g, 1).
    """
    if not 0.0 <= gamma <= math.pi / 2:
        raise OutOfRangeError(f"gamma must lie in [0, pi/2], got {gamma}")
    c = math.cos(math.pi / 4 - gamma / 2)
    s = math.sin(math.pi / 4 - gamma / 2)
    v = np.array([c, 0.0, 0.0, s], dtype=complex)
    return validate_density(np.outer(v, v.conj()))


def werner(f: float) -> TwoQubitState:
    """Werner state: fidelity-F mixture of phi+ with the other three Bell states.

    Equivalent Bloch form: x = y = 0,
    T = ((4F-1)/3) diag(1, -1, 1).
    """
    if not 0.0 <= f <= 1.0:
        raise OutOfRangeError(f"fidelity must lie in [0, 1], got {f}")
    rho = f * bell("phi+").rho
    for kind in ("phi-", "psi+", "psi-"):
        rho = rho + (1.0 - f) / 3.0 * bell(kind).rho
    return validate_density(rho)


@dataclass(frozen=True)
class XStateParams:
    """Parameters of an X-type density matrix.

    Diagonal entries rho11..rho44, nonnegative off-diagonal magnitudes
    rho14 (outer block) and rho23 (inner block), and their phases in
    radians. The phases multiply the upper off-diagonal entries as
    exp(i gamma).
    """

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: float
    rho23: float
    gamma14: float = 0.0
    gamma13: float = 0.0


def _check_x_params(p: XStateParams) -> None:
    diag = (p.rho11, p.rho22, p.rho33, p.rho44)
    if min(diag) < 0.0:
        raise InvalidXParamsError(f"diagonal entries must be nonnegative, got {diag}")
    total = sum(diag)
    if abs(total - 1.0) > 1e-12:
        raise InvalidXParamsError(f"diagonal sum {total} differs from 1 beyond 1e-12")
    if p.rho14 < 0.0 or p.rho23 < 0.0:
        raise InvalidXParamsError("off-diagonal magnitudes must be nonnegative")
    if p.rho14 > math.sqrt(p.rho11 * p.rho44) + 1e-12:
        raise InvalidXParamsError(
            f"rho14 = {p.rho14} exceeds sqrt(rho11 rho44) = {math.sqrt(p.rho11 * p.rho44)}"
        )
    if p.rho23 > math.sqrt(p.rho22 * p.rho33) + 1e-12:
        raise InvalidXParamsError(
            f"rho23 = {p.rho23} exceeds sqrt(rho22 rho33) = {math.sqrt(p.rho22 * p.rho33)}"
        )


def x_state(p: XStateParams) -> TwoQubitState:
    """Density matrix with support on the diagonal and anti-diagonal only.

    The correlation matrix of such a state has T13 = T23 = T31 = T32 = 0.
    Raises InvalidXParamsError naming the violated positivity or
    normalization constraint.
    """
    _check_x_params(p)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = p.rho11, p.rho22, p.rho33, p.rho44
    m[0, 3] = p.rho14 * np.exp(1j * p.gamma14)
    m[3, 0] = np.conj(m[0, 3])
    m[1, 2] = p.rho23 * np.exp(1j * p.gamma13)
    m[2, 1] = np.conj(m[1, 2])
    return validate_density(m)


def depolarized_pure(gamma: float, p: float) -> TwoQubitState:
    """Convex mixture p * pure_state(gamma) + (1 - p) * I/4."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"mixing weight must lie in [0, 1], got {p}")
    rho = p * pure_state(gamma).rho + (1.0 - p) * ID4 / 4.0
    return validate_density(rho)


def fidelity_phi_plus(state: TwoQubitState) -> float:
    """Overlap <phi+| rho |phi+>, a real number in [0, 1]."""
    v = _BELL_VECTORS["phi+"]
    value = float(np.real(v.conj() @ state.rho @ v))
    return min(max(value, 0.0), 1.0)


def random_state(seed: int) -> TwoQubitState:
    """Random density matrix G G^dag / Tr(G G^dag) for a complex Gaussian G.

    Samples from the Hilbert-Schmidt measure; deterministic given the seed.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


_FAMILY_PARAMS = {"pure": ("gamma",), "werner": ("F",), "depolarized": ("gamma", "p")}


def _require_number(value, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{label} must be a number, got {value!r}")
    return float(value)


def state_from_dict(doc: dict) -> TwoQubitState:
    """Build a state from one of the three JSON representations.

    Exactly one of the keys "matrix" (4x4 of {"re":, "im":} objects),
    "pauli" ({"x": [3], "y": [3], "T": [[3]x3]}) or "family"
    ("pure" | "werner" | "depolarized" with gamma / F / p parameters)
    must be present. The result is validated as a density matrix.
    """
    if not isinstance(doc, dict):
        raise SchemaError(f"state document must be an object, got {type(doc).__name__}")
    present = [k for k in ("matrix", "pauli", "family") if k in doc]
    if len(present) != 1:
        raise SchemaError(f"exactly one of matrix/pauli/family required, found {present}")
    kind = present[0]

    if kind == "matrix":
        if set(doc) != {"matrix"}:
            raise SchemaError(f"unexpected keys alongside 'matrix': {sorted(set(doc) - {'matrix'})}")
        rows = doc["matrix"]
        if not (isinstance(rows, list) and len(rows) == 4 and all(isinstance(r, list) and len(r) == 4 for r in rows)):
            raise SchemaError("'matrix' must be a 4x4 array of {re, im} objects")
        m = np.zeros((4, 4), dtype=complex)
        for i, row in enumerate(rows):
            for j, cell in enumerate(row):
                if not isinstance(cell, dict) or set(cell) != {"re", "im"}:
                    raise SchemaError(f"matrix entry ({i},{j}) must be an object with keys re, im")
                m[i, j] = _require_number(cell["re"], "re") + 1j * _require_number(cell["im"], "im")
        return validate_density(m)

    if kind == "pauli":
        if set(doc) != {"pauli"}:
            raise SchemaError(f"unexpected keys alongside 'pauli': {sorted(set(doc) - {'pauli'})}")
        block = doc["pauli"]
        if not isinstance(block, dict) or set(block) != {"x", "y", "T"}:
            raise SchemaError("'pauli' must be an object with keys x, y, T")
        try:
            x = np.asarray(block["x"], dtype=float).reshape(3)
            y = np.asarray(block["y"], dtype=float).reshape(3)
            T = np.asarray(block["T"], dtype=float).reshape(3, 3)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"pauli block has wrong shape: {exc}") from exc
        return validate_density(pauli_compose(PauliDecomposition(x, y, T)))

    family = doc["family"]
    if family not in _FAMILY_PARAMS:
        raise SchemaError(f"unknown family {family!r}; choose from {sorted(_FAMILY_PARAMS)}")
    needed = _FAMILY_PARAMS[family]
    extra = set(doc) - {"family", *needed}
    missing = [k for k in needed if k not in doc]
    if extra or missing:
        raise SchemaError(f"family {family!r} needs keys {needed}; missing {missing}, unexpected {sorted(extra)}")
    values = {k: _require_number(doc[k], k) for k in needed}
    if family == "pure":
        return pure_state(values["gamma"])
    if family == "werner":
        return werner(values["F"])
    return depolarized_pure(values["gamma"], values["p"])


def load_state_file(path) -> TwoQubitState:
    """Read a JSON state file and normalize it to a validated TwoQubitState."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(doc)
