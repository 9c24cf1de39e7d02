"""Numeric continuous-time quantum walks.

The walk on a graph with adjacency matrix A evolves by the unitary
U(t) = exp(-i t A); perfect state transfer from vertex x to vertex y at
time t means |U(t)[y, x]| = 1.  This module provides the dense-numpy
machinery used to cross-check the exact eigenvalue certificates: full
eigendecomposition, transfer fidelities, extraction of integer
eigenvalues with the signs of an order-2 automorphism on each
eigenspace, and a scan that derives the transfer time pi/g from an
integer spectrum and verifies the transfer (including at the odd
multiple 3 pi/g, and that it is *incomplete* at the half time).

Everything here is floating point and deliberately independent of the
character-sum route, so agreement between the two is evidence rather
than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi
from typing import Sequence

import numpy as np

from .scheme import EigenRow

__all__ = [
    "NonIntegralSpectrumError",
    "WalkSystem",
    "integer_eigenvalues",
    "derive_transfer_time",
    "integer_rows_with_signs",
    "TransferReport",
    "pst_scan",
]


class NonIntegralSpectrumError(ValueError):
    """The numeric spectrum is not integral, so no time can be derived."""


@dataclass
class WalkSystem:
    """Eigendecomposition of a real symmetric adjacency matrix."""

    adjacency: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_adjacency(cls, adjacency, tol: float = 1e-8) -> "WalkSystem":
        a = np.asarray(adjacency, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {a.shape}")
        if np.abs(a - a.T).max() > tol:
            raise ValueError("adjacency must be symmetric")
        w, v = np.linalg.eigh(a)
        drift = np.abs((v * w) @ v.T - a).max()
        if drift > tol:
            raise ValueError(f"eigendecomposition drift {drift:.3e} exceeds {tol:.0e}")
        return cls(a, w, v)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        """exp(-i t A) via the spectral decomposition."""
        phases = np.exp(-1j * t * self.eigenvalues)
        return (self.eigenvectors * phases) @ self.eigenvectors.T

    def fidelity(self, t: float, source: int, target: int) -> float:
        return abs(self.unitary(t)[target, source])

    def fidelities(self, t: float, pairs: Sequence[tuple[int, int]]) -> list[float]:
        u = self.unitary(t)
        return [abs(u[y, x]) for x, y in pairs]


def _as_walk(adjacency) -> WalkSystem:
    if isinstance(adjacency, WalkSystem):
        return adjacency
    return WalkSystem.from_adjacency(adjacency)


def integer_eigenvalues(walk: WalkSystem, tol: float = 1e-8) -> np.ndarray:
    """Rounded spectrum, or :class:`NonIntegralSpectrumError` if off by > tol."""
    rounded = np.rint(walk.eigenvalues)
    drift = np.abs(walk.eigenvalues - rounded).max()
    if drift > tol:
        raise NonIntegralSpectrumError(
            f"spectrum is not integral (largest deviation {drift:.3e}); "
            f"pass an explicit transfer time instead"
        )
    return rounded.astype(int)


def derive_transfer_time(walk: WalkSystem, tol: float = 1e-8) -> tuple[int, float]:
    """(g, pi/g) for g the gcd of differences from the top eigenvalue."""
    ints = integer_eigenvalues(walk, tol)
    theta0 = int(ints.max())
    g = 0
    for theta in ints:
        g = gcd(g, theta0 - int(theta))
    if g == 0:
        raise ValueError("all eigenvalues are equal; there is no walk")
    return g, pi / g


def _check_involution(walk: WalkSystem, perm: np.ndarray) -> None:
    n = walk.n
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("permutation must be a bijection on the vertices")
    if not np.array_equal(perm[perm], np.arange(n)):
        raise ValueError("permutation must have order at most 2")
    a = walk.adjacency
    if np.abs(a[np.ix_(perm, perm)] - a).max() > 1e-12:
        raise ValueError("permutation is not an automorphism of the graph")


def integer_rows_with_signs(
    adjacency, permutation: Sequence[int], tol: float = 1e-8
) -> list[EigenRow]:
    """Numeric eigenvalue rows (theta, sign, multiplicity) for an involution.

    The permutation must be an order-2 automorphism T; on each
    eigenspace it acts with eigenvalues +/-1 and the two multiplicities
    are read off the trace of T restricted to the eigenprojector.  An
    eigenvalue whose eigenspace carries both signs produces two rows.
    """
    walk = _as_walk(adjacency)
    perm = np.asarray(permutation, dtype=int)
    _check_involution(walk, perm)
    ints = integer_eigenvalues(walk, tol)
    rows: list[EigenRow] = []
    for theta in sorted(set(ints.tolist()), reverse=True):
        cols = walk.eigenvectors[:, ints == theta]
        mult = cols.shape[1]
        # trace of T P for P the eigenprojector: sum_i P[perm(i), i]
        t_trace = float(np.einsum("ij,ij->", cols[perm], cols))
        m_plus = round((mult + t_trace) / 2)
        if abs((mult + t_trace) / 2 - m_plus) > 1e-6:
            raise ValueError(
                f"involution trace {t_trace} on the eigenspace of {theta} "
                f"is not consistent with a +/-1 splitting"
            )
        if m_plus:
            rows.append(EigenRow(theta, 1, m_plus))
        if mult - m_plus:
            rows.append(EigenRow(theta, -1, mult - m_plus))
    return rows


@dataclass(frozen=True)
class TransferReport:
    """Numeric verdict of a transfer scan."""

    ok: bool
    time: float
    times_checked: tuple[float, ...]
    min_fidelity: float
    mid_fidelity: float
    pairs_checked: int
    reason: str = ""


def pst_scan(
    adjacency,
    pairs: Sequence[tuple[int, int]],
    time: float | None = None,
    fidelity_tol: float = 1e-9,
    mid_slack: float = 1e-3,
) -> TransferReport:
    """Simulate the walk and check perfect state transfer on ``pairs``.

    With ``time`` omitted the spectrum must be integral and the time is
    derived as pi/g; the transfer is then also required at the odd
    multiple 3 pi/g.  In both modes the fidelity at the *half* time must
    fall short of 1 by at least ``mid_slack``, so that a trivial
    always-returning walk cannot pass.
    """
    if not pairs:
        raise ValueError("no vertex pairs given")
    walk = _as_walk(adjacency)
    if time is None:
        _, tau = derive_transfer_time(walk)
        times = (tau, 3 * tau)
    else:
        tau = float(time)
        times = (tau,)
    min_fid = float(min(f for t in times for f in walk.fidelities(t, pairs)))
    mid_fid = float(max(walk.fidelities(tau / 2, pairs)))
    ok = bool(min_fid >= 1 - fidelity_tol and mid_fid < 1 - mid_slack)
    reason = ""
    if min_fid < 1 - fidelity_tol:
        reason = f"fidelity {min_fid:.12f} below 1 - {fidelity_tol:.0e}"
    elif mid_fid >= 1 - mid_slack:
        reason = f"half-time fidelity {mid_fid:.6f} already complete"
    return TransferReport(
        ok=ok,
        time=tau,
        times_checked=times,
        min_fidelity=min_fid,
        mid_fidelity=mid_fid,
        pairs_checked=len(pairs),
        reason=reason,
    )
