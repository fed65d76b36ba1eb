"""Solvers for the matrix equation A X + X B = C and the scheme error
equation built on it.

Three routes are provided: Bartels-Stewart over real Schur forms,
Kronecker-vectorized Gaussian elimination (the oracle), and minimum-norm
least squares for singular or inconsistent systems.  Unique solvability is
diagnosed from the spectra of A and -B: the equation has one solution iff
they are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import advect, assembly, linalg
from .errors import NumericalFailureError, SingularSystemError, UsageError

METHODS = ("bartels-stewart", "kron", "min-norm")


@dataclass(frozen=True)
class SylvesterProblem:
    """A X + X B = C with A m x m, B n x n, C m x n."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = linalg.as_matrix(self.a, "a", square=True)
        b = linalg.as_matrix(self.b, "b", square=True)
        c = linalg.as_matrix(self.c, "c")
        if c.shape != (a.shape[0], b.shape[0]):
            raise UsageError(
                f"c shape {c.shape} does not match ({a.shape[0]}, {b.shape[0]})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class SolvabilityReport:
    """Spectral uniqueness verdict for A X + X B = C."""

    spectrum_a: list
    spectrum_neg_b: list
    min_separation: float
    unique: bool
    sep_tol: float
    notes: str = ""


def diagnose(p, sep_tol=1e-10):
    """Unique-solvability verdict from the spectra of A and -B.

    unique iff the smallest pairwise distance between the two spectra
    exceeds sep_tol * max(1, |A|_F + |B|_F).
    """
    if not sep_tol > 0.0:
        raise UsageError(f"sep_tol must be positive, got {sep_tol}")
    spec_a = linalg.eigenvalues(p.a)
    spec_nb = [-z for z in linalg.eigenvalues(p.b)]
    min_sep = min(abs(la - mu) for la in spec_a for mu in spec_nb)
    scale = max(1.0, linalg.frobenius_norm(p.a) + linalg.frobenius_norm(p.b))
    return SolvabilityReport(
        spectrum_a=spec_a,
        spectrum_neg_b=spec_nb,
        min_separation=min_sep,
        unique=min_sep > sep_tol * scale,
        sep_tol=sep_tol,
    )


def _diagonal_blocks(t):
    """(start, size) spans of the 1x1/2x2 diagonal blocks of a real Schur T."""
    n = t.shape[0]
    blocks = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            blocks.append((i, 2))
            i += 2
        else:
            blocks.append((i, 1))
            i += 1
    return blocks


def _quasi_triangular_sylvester(ta, tb, d):
    """Solve TA Y + Y TB = D with both factors upper quasi-triangular, by
    block back-substitution (column blocks of TB left to right, row blocks
    of TA bottom to top)."""
    y = np.zeros_like(d)
    row_blocks = _diagonal_blocks(ta)
    for j0, jw in _diagonal_blocks(tb):
        js = slice(j0, j0 + jw)
        rhs_cols = d[:, js] - y[:, :j0] @ tb[:j0, js]
        s = tb[js, js]
        for i0, iw in reversed(row_blocks):
            i_slice = slice(i0, i0 + iw)
            r = rhs_cols[i_slice, :] - ta[i_slice, i0 + iw:] @ y[i0 + iw:, js]
            k = linalg.kron_vec_operator(ta[i_slice, i_slice], s)
            try:
                sol = linalg.gauss_solve(k, r.reshape(-1, order="F"))
            except SingularSystemError as exc:
                raise NumericalFailureError(
                    f"back-substitution pivot failure at block ({i0}, {j0}): {exc}"
                ) from exc
            y[i_slice, js] = sol.reshape((iw, jw), order="F")
    return y


def solve_bartels_stewart(p, sep_tol=1e-10):
    """Bartels-Stewart: Schur forms of A and B, transformed right-hand side,
    block back-substitution, transform back.  Requires unique solvability."""
    report = diagnose(p, sep_tol)
    if not report.unique:
        raise SingularSystemError(
            "A and -B share eigenvalues (min separation "
            f"{report.min_separation:.3e}); the Sylvester equation has no "
            "unique solution -- use solve_min_norm")
    fa = linalg.schur_decompose(p.a)
    fb = linalg.schur_decompose(p.b)
    d = fa.q.T @ p.c @ fb.q
    y = _quasi_triangular_sylvester(fa.t, fb.t, d)
    return fa.q @ y @ fb.q.T


def solve_kron_oracle(p):
    """Independent oracle: Gaussian elimination on the vectorized operator
    (I (x) A + B^T (x) I) vec(X) = vec(C)."""
    k = linalg.kron_vec_operator(p.a, p.b)
    x = linalg.gauss_solve(k, linalg.vec(p.c))
    return linalg.unvec(x, p.c.shape[0], p.c.shape[1])


def solve_min_norm(p, rtol=1e-11):
    """Minimum-norm least-squares solution over the vectorized operator.

    Returns (x, residual_norm, rank); reduces to the unique solution when
    the problem is uniquely solvable.
    """
    k = linalg.kron_vec_operator(p.a, p.b)
    fac = linalg.cod_factor(k, rtol=rtol)
    rhs = linalg.vec(p.c)
    x = fac.solve_min_norm(rhs)
    residual = float(np.linalg.norm(k @ x - rhs))
    return linalg.unvec(x, p.c.shape[0], p.c.shape[1]), residual, fac.rank


class ErrorEquationSolver:
    """Reusable solver for the scheme error equation on a fixed scheme, grid
    and closure variant.

    The operator factorization is computed once, so sweeping many signals is
    cheap.  Bartels-Stewart is only legal for the paper variant with L = 0
    (no corner coefficients); otherwise the solve is routed through the
    vectorized global operator.
    """

    def __init__(self, scheme, disc, variant="paper", method="min-norm",
                 sep_tol=1e-10, rtol=1e-11):
        if method not in METHODS:
            raise UsageError(f"unknown method {method!r}; expected one of {METHODS}")
        assembly._check_variant(variant)
        self.scheme = scheme
        self.disc = disc
        self.variant = variant
        self.method = method
        self.rtol = rtol
        self.m1 = assembly.build_m1(scheme, disc)
        self.m2 = assembly.build_m2(scheme, disc)
        self.sylvester_form = (variant == "paper") and not scheme.has_corner_terms

        notes = []
        if not self.sylvester_form:
            if variant != "paper":
                notes.append("causal variant: operator is the time-marching "
                             "recurrence, not of Sylvester form")
            else:
                notes.append("L != 0 (corner coefficients present): solve is "
                             "routed through the vectorized global operator")
        probe = SylvesterProblem(self.m1, self.m2, np.zeros((disc.nx - 1, disc.nt)))
        base = diagnose(probe, sep_tol)
        self.report = SolvabilityReport(
            spectrum_a=base.spectrum_a,
            spectrum_neg_b=base.spectrum_neg_b,
            min_separation=base.min_separation,
            unique=base.unique,
            sep_tol=sep_tol,
            notes="; ".join(notes),
        )

        if method == "bartels-stewart":
            if not self.sylvester_form:
                raise UsageError(
                    "bartels-stewart applies only to the paper variant with "
                    "L = 0 (the pure Sylvester form); use kron or min-norm")
            if not self.report.unique:
                raise SingularSystemError(
                    "A and -B share eigenvalues (min separation "
                    f"{self.report.min_separation:.3e}); use min-norm")
            self._fa = linalg.schur_decompose(self.m1)
            self._fb = linalg.schur_decompose(self.m2)
        else:
            if self.sylvester_form:
                self._op = linalg.kron_vec_operator(self.m1, self.m2)
            else:
                self._op = assembly.global_operator(scheme, disc, variant)
            if method == "kron":
                self._lu = linalg._lu_factor(self._op)
            else:
                self._cod = linalg.cod_factor(self._op, rtol=rtol)

    def solve(self, signal):
        """Solve for the error field of one signal.

        Returns (e, report, residual_norm) with e = U - U_exact as a
        FieldMatrix and residual_norm the achieved operator residual.
        """
        known = advect.exact_provider(self.disc, signal)
        m0 = assembly.build_m0(self.scheme, self.disc, known, self.variant)
        u_exact = advect.sample_exact(self.disc, signal)
        prob = assembly.AssembledProblem(m1=self.m1, m2=self.m2, m0=m0,
                                         scheme=self.scheme, disc=self.disc,
                                         variant=self.variant)
        f = assembly.residual(prob, u_exact.values)
        # operator(U - U_exact) = M0 - operator(U_exact) = -F
        rhs = -f
        rows, cols = self.disc.nx - 1, self.disc.nt
        if self.method == "bartels-stewart":
            d = self._fa.q.T @ rhs @ self._fb.q
            y = _quasi_triangular_sylvester(self._fa.t, self._fb.t, d)
            e = self._fa.q @ y @ self._fb.q.T
        elif self.method == "kron":
            x = linalg._lu_solve(*self._lu, linalg.vec(rhs))
            e = linalg.unvec(x, rows, cols)
        else:
            x = self._cod.solve_min_norm(linalg.vec(rhs))
            e = linalg.unvec(x, rows, cols)
        op_e = assembly.apply_operator(prob, e)
        residual_norm = linalg.frobenius_norm(op_e - rhs)
        return advect.FieldMatrix(values=e, disc=self.disc), self.report, residual_norm


def solve_error_equation(scheme, disc, signal, variant="paper",
                         method="min-norm", sep_tol=1e-10, rtol=1e-11):
    """One-shot error-equation solve; see ErrorEquationSolver.

    Returns (e, report) with e = U - U_exact (so the scheme's computed field
    is U_exact + e).
    """
    solver = ErrorEquationSolver(scheme, disc, variant=variant, method=method,
                                 sep_tol=sep_tol, rtol=rtol)
    e, report, _ = solver.solve(signal)
    return e, report
