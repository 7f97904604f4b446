"""Block-model ensembles with zero-truncated Poisson degree distributions.

A model is described intensively: ``n[r]`` is the fraction of nodes in block
``r`` and ``e[r, s]`` the number of half-edges between blocks ``r`` and ``s``
per node of the whole network (the diagonal counts internal edges twice).
Block mean degrees are derived as ``kappa_r = sum_s e[r, s] / n[r]`` and are
never stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.special import gammaln

#: Smallest admissible block mean degree.
KAPPA_FLOOR = 1.0 + 1e-6
#: Blocks smaller than this are considered absent by consumers.
DEGENERATE_SIZE = 1e-10


class InvalidModelError(ValueError):
    """Raised when a model (or an operation's result) breaks the sum rules."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class Violation:
    """One broken invariant of a :class:`BlockModel`."""

    kind: str
    blocks: tuple[int, ...]
    message: str
    severity: str = "error"

    def __str__(self):
        return self.message


@dataclass(frozen=True, eq=False)
class BlockModel:
    """Immutable block-model ensemble.

    Parameters
    ----------
    n : array_like, shape (B,)
        Block size fractions.
    e : array_like, shape (B, B)
        Symmetric half-edge density matrix, per node of the whole network.
    """

    n: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        n = np.array(self.n, dtype=float).reshape(-1)
        e = np.array(self.e, dtype=float)
        if e.ndim != 2 or e.shape != (n.size, n.size):
            raise InvalidModelError(
                f"e must be a {n.size}x{n.size} matrix, got shape {e.shape}"
            )
        n.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "e", e)

    @property
    def B(self) -> int:
        return self.n.size

    @cached_property
    def edge_ends(self) -> np.ndarray:
        """Half-edges per network node attached to each block, ``n_r kappa_r``."""
        return self.e.sum(axis=1)

    @cached_property
    def block_degrees(self) -> np.ndarray:
        """Mean degree ``kappa_r`` of each block."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.edge_ends / self.n

    @property
    def kappa(self) -> float:
        """Mean degree of the whole network."""
        return float(self.e.sum())

    @cached_property
    def poisson_params(self) -> np.ndarray:
        """Parameter ``c_r`` of each block's zero-truncated Poisson distribution."""
        return poisson_param_from_mean(self.block_degrees)

    def __eq__(self, other):
        if not isinstance(other, BlockModel):
            return NotImplemented
        return np.array_equal(self.n, other.n) and np.array_equal(self.e, other.e)

    def __hash__(self):
        return hash((self.n.tobytes(), self.e.tobytes()))

    def __repr__(self):
        return f"BlockModel(n={self.n.tolist()!r}, e={self.e.tolist()!r})"

    @classmethod
    def single(cls, kappa: float) -> "BlockModel":
        """One-block (fully random) model with mean degree ``kappa``."""
        return cls([1.0], [[kappa]])

    def to_dict(self) -> dict:
        return {"B": self.B, "n": self.n.tolist(), "e": self.e.tolist()}

    @classmethod
    def from_dict(cls, data: dict, sym_rtol: float = 1e-9) -> "BlockModel":
        for key in ("B", "n", "e"):
            if key not in data:
                raise InvalidModelError(f"model file lacks field '{key}'")
        B = data["B"]
        if not isinstance(B, int) or isinstance(B, bool) or B < 1:
            raise InvalidModelError(f"field 'B' must be a positive integer, got {B!r}")
        try:
            n = np.asarray(data["n"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidModelError(f"field 'n' is not numeric: {exc}") from None
        if n.shape != (B,):
            raise InvalidModelError(f"field 'n' must hold {B} entries, got shape {n.shape}")
        try:
            e = np.asarray(data["e"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidModelError(f"field 'e' is not numeric: {exc}") from None
        if e.shape != (B, B):
            raise InvalidModelError(f"field 'e' must be {B}x{B}, got shape {e.shape}")
        scale = np.maximum(np.abs(e), np.abs(e.T))
        if np.any(np.abs(e - e.T) > sym_rtol * scale):
            raise InvalidModelError("field 'e' is not symmetric")
        # tolerated round-off asymmetry is removed
        return cls(n, 0.5 * (e + e.T))


def validate(model: BlockModel) -> list[Violation]:
    """Return every broken invariant of ``model``.

    Blocks smaller than :data:`DEGENERATE_SIZE` are reported with severity
    ``"warning"``; all other entries are errors.
    """
    out = []
    n, e = model.n, model.e
    if not np.all(np.isfinite(n)) or not np.all(np.isfinite(e)):
        out.append(Violation("finite", (), "model contains non-finite entries"))
        return out
    total = n.sum()
    if abs(total - 1.0) > 1e-12:
        out.append(Violation("n_sum", (), f"sum of n = {float(total)!r} != 1"))
    for r in np.flatnonzero(n <= 0):
        out.append(Violation("n_positive", (int(r),), f"n_{r} = {float(n[r])!r} <= 0"))
    for r, s in zip(*np.nonzero(np.triu(e != e.T))):
        out.append(
            Violation("symmetry", (int(r), int(s)), f"e_{r}{s} = {float(e[r, s])!r} != e_{s}{r} = {float(e[s, r])!r}")
        )
    for r, s in zip(*np.nonzero(e < 0)):
        out.append(Violation("e_nonnegative", (int(r), int(s)), f"e_{r}{s} = {float(e[r, s])!r} < 0"))
    kappas = model.block_degrees
    for r in range(model.B):
        if n[r] > 0 and not kappas[r] >= KAPPA_FLOOR:
            out.append(
                Violation("kappa_floor", (r,), f"κ_{r} = {float(kappas[r])!r} ≤ 1")
            )
        if 0 < n[r] < DEGENERATE_SIZE:
            out.append(
                Violation("degenerate", (r,), f"block {r} is degenerate (n_{r} = {float(n[r])!r})", "warning")
            )
    return out


def is_valid(model: BlockModel) -> bool:
    return not any(v.severity == "error" for v in validate(model))


def check(model: BlockModel) -> BlockModel:
    """Raise :class:`InvalidModelError` unless ``model`` is valid."""
    errors = [v for v in validate(model) if v.severity == "error"]
    if errors:
        raise InvalidModelError("; ".join(map(str, errors)), errors)
    return model


def modified_poisson_mean(c):
    """Mean ``c / (1 - exp(-c))`` of the zero-truncated Poisson distribution."""
    c = np.asarray(c, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(c > 0, c / -np.expm1(-c), 1.0)
    return out[()] if out.ndim == 0 else out


def poisson_param_from_mean(mean_degree):
    """Invert :func:`modified_poisson_mean`.

    Uses Newton's method started from ``c = mean_degree``; the mean is convex
    and increasing in ``c`` so the iterates decrease monotonically onto the
    root.

    Raises
    ------
    ValueError
        If any ``mean_degree <= 1``; such means cannot be realized.
    """
    k = np.asarray(mean_degree, dtype=float)
    if np.any(~(k > 1.0)):
        raise ValueError(f"mean degree must exceed 1, got {mean_degree!r}")
    c = k.copy()
    for _ in range(200):
        em = -np.expm1(-c)  # 1 - exp(-c)
        f = c / em - k
        # derivative of c / (1 - exp(-c))
        df = (em - c * np.exp(-c)) / em**2
        step = f / df
        c_new = np.maximum(c - step, 0.5 * c)
        if np.all(np.abs(c_new - c) <= 4e-16 * c):
            c = c_new
            break
        c = c_new
    return c[()] if c.ndim == 0 else c


def modified_poisson_pmf(c, k):
    """Probability of degree ``k`` under the zero-truncated Poisson law."""
    k = np.asarray(k)
    logp = k * np.log(c) - gammaln(k + 1.0) - c - np.log(-np.expm1(-c))
    return np.where(k >= 1, np.exp(logp), 0.0)


def g0(c, z):
    """Degree generating function ``(e^{cz} - 1) / (e^c - 1)``, overflow-safe."""
    c = np.asarray(c, dtype=float)
    z = np.asarray(z, dtype=float)
    return np.exp(c * (z - 1.0)) * np.expm1(-c * z) / np.expm1(-c)


def g1(c, z):
    """Excess-degree generating function ``g0'(z) / g0'(1) = e^{c(z-1)}``."""
    return np.exp(np.asarray(c, dtype=float) * (np.asarray(z, dtype=float) - 1.0))


def mixing_matrix(model: BlockModel) -> np.ndarray:
    """Fraction ``m[r, s]`` of block-``r`` edge ends that lead into block ``s``."""
    ends = model.edge_ends
    with np.errstate(divide="ignore", invalid="ignore"):
        m = model.e / ends[:, None]
    return np.where(ends[:, None] > 0, m, 0.0)


def merge_blocks(model: BlockModel, a: int, b: int) -> BlockModel:
    """Merge blocks ``a`` and ``b`` into one block placed at ``min(a, b)``.

    Raises
    ------
    InvalidModelError
        If the merged block's mean degree does not exceed 1.
    """
    B = model.B
    if a == b or not (0 <= a < B and 0 <= b < B):
        raise ValueError(f"cannot merge blocks {a} and {b} of a {B}-block model")
    a, b = min(a, b), max(a, b)
    # summing rows then columns gives e_aa + e_bb + 2 e_ab on the new diagonal
    e = model.e.copy()
    e[a, :] += e[b, :]
    e[:, a] += e[:, b]
    e = np.delete(np.delete(e, b, axis=0), b, axis=1)
    n = model.n.copy()
    n[a] += n[b]
    n = np.delete(n, b)
    merged = BlockModel(n, e)
    if not merged.block_degrees[a] >= KAPPA_FLOOR:
        raise InvalidModelError(
            f"merged block has mean degree {float(merged.block_degrees[a])!r} <= 1",
            [Violation("kappa_floor", (a,), f"κ_{a} = {float(merged.block_degrees[a])!r} ≤ 1")],
        )
    return merged


def write_model(model: BlockModel, path) -> None:
    """Write ``model`` as JSON with fields ``B``, ``n`` and ``e``.

    Floats are written with ``repr`` precision so they round-trip exactly.
    """
    Path(path).write_text(json.dumps(model.to_dict(), indent=2) + "\n")


def read_model(path) -> BlockModel:
    """Read a model file; asymmetry beyond ``1e-9`` relative is rejected."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidModelError(f"{path}: not a valid model document ({exc})") from None
    if not isinstance(data, dict):
        raise InvalidModelError(f"{path}: model document must be a mapping")
    return BlockModel.from_dict(data)
