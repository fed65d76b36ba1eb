"""Matricial form of a nine-point stencil on the interior grid.

The unknown field is U = [u_i^n], i = 1..nx-1, n = 1..nt (rows are space,
columns are time).  Two closure variants are supported:

* ``paper``   -- one equation per interior cell, the stencil centered at
  (i, n) for n = 1..nt; stencil terms beyond the time horizon (m > nt) are
  absent, so the system reads M1 U + U M2 + L(U) = M0 with M1 tridiagonal
  (beta, delta, epsilon), M2 the alpha/gamma time-shift matrix and L the four
  zero-padded diagonal shifts.
* ``causal``  -- equations indexed by the time level they produce, which is
  exactly the time-marching recurrence.  Two-level stencils are centered at
  n = 0..nt-1; three-level stencils take level 1 from the known-value
  provider (cold start) and are centered at n = 1..nt-1.

Everything known (boundaries i = 0 and i = nx, initial level m = 0, and the
causal startup level) is folded, negated, into the right-hand side M0.

A known-value provider is any callable (i, m) -> value defined on the nodes
the chosen variant needs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import AssemblyError, UsageError
from .schemes import Discretization, SchemeCoefficients, stencil_nodes

VARIANTS = ("paper", "causal")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise UsageError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


@dataclass(frozen=True)
class AssembledProblem:
    """The matrices of one closure variant, bound to their scheme and grid."""

    m1: np.ndarray
    m2: np.ndarray
    m0: np.ndarray
    scheme: SchemeCoefficients
    disc: Discretization
    variant: str

    @property
    def shape(self):
        return (self.disc.nx - 1, self.disc.nt)


def build_m1(s, disc):
    """(nx-1)x(nx-1) tridiagonal space operator: diag beta, super delta,
    sub epsilon."""
    m = disc.nx - 1
    return (np.diag(np.full(m, s.beta))
            + np.diag(np.full(m - 1, s.delta), 1)
            + np.diag(np.full(m - 1, s.epsilon), -1))


def build_m2(s, disc):
    """nt x nt time-shift operator: zero diagonal, super gamma, sub alpha."""
    n = disc.nt
    return (np.diag(np.full(n - 1, s.gamma), 1)
            + np.diag(np.full(n - 1, s.alpha), -1))


def apply_l(s, u):
    """The diagonal-shift operator L(U) = L1 + L2 + L3 + L4.

    Entry (i, n): zeta*u_{i+1}^{n+1} + eta*u_{i-1}^{n-1}
    + theta*u_{i-1}^{n+1} + vartheta*u_{i+1}^{n-1}, zero-padded at the edges.
    """
    u = linalg.as_matrix(u, "u")
    out = np.zeros_like(u)
    if s.zeta != 0.0:
        out[:-1, :-1] += s.zeta * u[1:, 1:]
    if s.eta != 0.0:
        out[1:, 1:] += s.eta * u[:-1, :-1]
    if s.theta != 0.0:
        out[1:, :-1] += s.theta * u[:-1, 1:]
    if s.vartheta != 0.0:
        out[:-1, 1:] += s.vartheta * u[1:, :-1]
    return out


def sample_known(known, i, m):
    try:
        v = float(known(i, m))
    except Exception as exc:
        raise AssemblyError(f"known-value provider failed at node (i={i}, m={m}): {exc}") from exc
    if not np.isfinite(v):
        raise AssemblyError(f"known-value provider returned {v!r} at node (i={i}, m={m})")
    return v


def cell_equations(s, disc, variant):
    """Yield every interior equation of the chosen variant.

    Each item is (row, col, unknown_terms, known_terms): row/col locate the
    equation in the (nx-1) x nt layout; unknown_terms are (coef, r, c)
    references into U (0-based); known_terms are (coef, i, m) grid nodes to
    be sampled and moved to the right-hand side.
    """
    _check_variant(variant)
    nx, nt = disc.nx, disc.nt
    if variant == "paper":
        centers = (((i, n), i - 1, n - 1)
                   for n in range(1, nt + 1) for i in range(1, nx))
        drop_beyond_horizon = True
    else:
        if s.is_three_level:
            # cold start: level 1 is pinned to the provider
            for i in range(1, nx):
                yield i - 1, 0, [(1.0, i - 1, 0)], [(-1.0, i, 1)]
            first = 1
        else:
            first = 0
        centers = (((i, n0), i - 1, n0)
                   for n0 in range(first, nt) for i in range(1, nx))
        drop_beyond_horizon = False
    for (i, n), row, col in centers:
        unknown, known = [], []
        for coef, l, m in stencil_nodes(s, i, n):
            if coef == 0.0:
                continue
            if drop_beyond_horizon and m > nt:
                continue
            if l == 0 or l == nx or m == 0:
                known.append((coef, l, m))
            else:
                unknown.append((coef, l - 1, m - 1))
        yield row, col, unknown, known


def build_m0(s, disc, known, variant="paper"):
    """Right-hand-side matrix carrying initial and boundary data, assembled
    by first-principles term collection over the variant's equations."""
    m0 = np.zeros((disc.nx - 1, disc.nt))
    for row, col, _, known_terms in cell_equations(s, disc, variant):
        for coef, i, m in known_terms:
            m0[row, col] -= coef * sample_known(known, i, m)
    return m0


def assemble(s, disc, known, variant="paper"):
    """Build the full AssembledProblem for one scheme/grid/variant."""
    _check_variant(variant)
    return AssembledProblem(
        m1=build_m1(s, disc),
        m2=build_m2(s, disc),
        m0=build_m0(s, disc, known, variant),
        scheme=s,
        disc=disc,
        variant=variant,
    )


def apply_operator(prob, u):
    """Action of the variant's interior operator on a field U."""
    u = linalg.as_matrix(u, "u")
    if u.shape != prob.shape:
        raise UsageError(f"field shape {u.shape} does not match {prob.shape}")
    if prob.variant == "paper":
        return prob.m1 @ u + u @ prob.m2 + apply_l(prob.scheme, u)
    out = np.zeros_like(u)
    for row, col, unknown, _ in cell_equations(prob.scheme, prob.disc, prob.variant):
        out[row, col] = sum(coef * u[r, c] for coef, r, c in unknown)
    return out


def residual(prob, u):
    """operator(U) - M0; zero exactly when U solves the variant's system."""
    return apply_operator(prob, u) - prob.m0


def global_operator(s, disc, variant="paper"):
    """Vectorized operator G with G vec(U) = vec(operator(U)), vec stacking
    columns.  For the paper variant with L = 0 this equals
    kron_vec_operator(M1, M2)."""
    _check_variant(variant)
    rows, cols = disc.nx - 1, disc.nt
    size = rows * cols
    if size > linalg.MAX_VEC_SIZE:
        raise UsageError(
            f"vectorized operator of size {size} exceeds limit {linalg.MAX_VEC_SIZE}")
    g = np.zeros((size, size))
    for row, col, unknown, _ in cell_equations(s, disc, variant):
        eq = col * rows + row
        for coef, r, c in unknown:
            g[eq, c * rows + r] += coef
    return g


def normalize(prob):
    """Scale the whole system by h*sigma/c = tau (the CFL normalization);
    solutions are unchanged."""
    factor = prob.disc.tau
    return replace(prob,
                   m1=factor * prob.m1,
                   m2=factor * prob.m2,
                   m0=factor * prob.m0,
                   scheme=prob.scheme.scaled(factor))
