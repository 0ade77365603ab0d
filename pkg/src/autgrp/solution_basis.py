"""Bases of ``sol(J) = {X : X* J + J X = 0}`` and ``cosol(J) = {X : X* J - J X = 0}``.

Nonsingular forms are handled through Jordan chains of the cosquare and the
``X``/``Y`` builder matrices; singular forms through the palindromic pencil
(see :mod:`autgrp.pencil_kronecker`). Every basis passes through the same
rank-reduction and normalisation step.
"""
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ._basis import SolutionBasis, equation_residual, finalize_basis
from ._config import resolve_tol
from .core_linalg import (
    Involution,
    _parse_sign,
    antidiagonal,
    as_form_matrix,
    effective_involution,
    from_coords,
    is_real_field,
    max_principal_angle,
    nullspace,
    numerical_rank,
    star,
    vec_operator,
)
from .eigenstructure import cosquare, jordan_chains, jordan_structure
from .errors import SingularInput
from .pencil_kronecker import (
    KroneckerSpec,
    kronecker_structure,
    singular_cosol_basis,
    singular_sol_basis,
)

__all__ = [
    "SolutionBasis",
    "DimReport",
    "build_pair_matrix",
    "project_centralizer",
    "sol_basis",
    "cosol_basis",
    "dim_from_structure",
    "dimension_report",
    "oracle_basis",
    "span_equal",
]

_KINDS = ("X_T", "Y_T", "X_H", "Y_H", "X_R", "Y_R")


def _pair_terms(kind, k, J, W, U):
    """The two products whose difference (X) or sum (Y) is the builder matrix."""
    if kind not in _KINDS:
        raise ValueError(f"unknown builder kind {kind!r}; expected one of {_KINDS}")
    W = np.asarray(W)
    U = np.asarray(U)
    J = np.asarray(J)
    if W.shape[0] != J.shape[0] or U.shape[0] != J.shape[0]:
        raise ValueError("W and U must have as many rows as J")
    a, b = W.shape[1], U.shape[1]
    if kind.endswith("R"):
        if a % 2 or b % 2:
            raise ValueError("realified builders need even-width chains")
        a, b = a // 2, b // 2
    if not 1 <= k <= min(a, b):
        raise ValueError(f"need 1 <= k <= min(widths) = {min(a, b)}, got k={k}")
    Eab = antidiagonal(k, a, b)
    Eba = antidiagonal(k, b, a)
    if kind.endswith("R"):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        Eab, Eba = np.kron(swap, Eab), np.kron(swap, Eba)
    inv = Involution.H if kind.endswith("H") else Involution.T
    first = W @ Eab @ star(U, inv) @ star(J, inv)
    second = U @ Eba @ star(W, inv) @ J
    return first, second


def build_pair_matrix(kind, k, J, W, U):
    """Builder matrices for the solution spaces.

    ``X_T = W E_k U^T J^T - U E_k^T W^T J`` and ``Y_T`` with ``+``;
    ``X_H``/``Y_H`` use conjugate transposes; ``X_R``/``Y_R`` replace
    ``E_k`` by ``[[0, E_k], [E_k, 0]]`` for realified chains.

    Parameters
    ----------
    kind : {'X_T', 'Y_T', 'X_H', 'Y_H', 'X_R', 'Y_R'}
    k : int
        Antidiagonal index, ``1 <= k <= min(widths)`` (half widths for ``_R``).
    J, W, U : ndarray

    Raises
    ------
    ValueError
        On a size mismatch or an out-of-range ``k``.
    """
    first, second = _pair_terms(kind, k, J, W, U)
    return first - second if kind.startswith("X") else first + second


def project_centralizer(Z, J, inv="T", sign=+1, halve=False):
    """Map ``Z`` in the centralizer of the cosquare to ``sol`` (``Z - J^{-1} Z* J``)
    or ``cosol`` (``Z + J^{-1} Z* J``).

    With ``halve=True`` the results are halved, so the two projections add up to ``Z``.

    Raises
    ------
    SingularInput
        If ``J`` is numerically singular.
    """
    J = as_form_matrix(J)
    inv = effective_involution(J, inv)
    if numerical_rank(J) < J.shape[0]:
        raise SingularInput("projection needs a nonsingular J")
    sgn = _parse_sign(sign)
    Z = np.asarray(Z)
    out = Z - sgn * np.linalg.solve(J, star(Z, inv) @ J)
    return 0.5 * out if halve else out


# --------------------------------------------------------------------------
# nonsingular route


def _on_unit_circle(lam, radius=1e-8):
    return abs(abs(lam) - 1.0) <= radius


def _used_eigenvalues(spec, cls, rep, partner):
    """Eigenvalue indices whose chains generate the class.

    One member suffices, except for real quadruples where the two members
    with positive imaginary part are needed.
    """
    eigs = spec.eigenvalues
    if spec.field == "real":
        lam = eigs[rep]
        if lam.imag != 0 and not _on_unit_circle(lam):
            upper = [i for i in cls if eigs[i].imag > 0]
            lower = [i for i in cls if eigs[i].imag < 0]
            return lower if partner else upper
        if lam.imag != 0:
            other = [i for i in cls if i != rep]
            return other if partner else [rep]
    if partner and len(cls) > 1:
        return [next(i for i in cls if i != rep)]
    return [rep]


def _nonsingular_candidates(J, inv, sign, tol, random_state, partner):
    C = cosquare(J, inv, tol)
    field = "real" if is_real_field(J) else "complex"
    spec = jordan_structure(C, tol, inv, field)
    chains = jordan_chains(C, spec, inv, random_state=random_state, J=J,
                           include_conjugates=partner and field == "real")
    by_eig = defaultdict(list)
    for ch in chains:
        by_eig[ch.block_id[0]].append(ch)
    cands, tags, scales = [], [], []
    for cls, rep in zip(spec.pairing, spec.representatives):
        for i in _used_eigenvalues(spec, cls, rep, partner):
            lam = spec.eigenvalues[i]
            group = by_eig[i]
            realified = bool(group) and group[0].realified
            # a single block at +-1 only needs the antidiagonals of one parity;
            # with several blocks U and W chains need not correspond block by
            # block, so every pair is kept and rank reduction decides
            pm1 = (inv is Involution.T and abs(lam.imag) == 0 and len(group) == 1
                   and min(abs(lam - 1), abs(lam + 1)) <= 1e-8)
            for s, cs in enumerate(group):
                for t, ct in enumerate(group):
                    _append_builders(cands, tags, scales, J, inv, sign, lam, cs, ct, s, t,
                                     realified, pm1)
    return spec, cands, tags, scales


def _append_builders(cands, tags, scales, J, inv, sign, lam, cs, ct, s, t, realified, pm1):
    W, U = cs.W, ct.U
    kmax = min(cs.size, ct.size)
    for k in range(1, kmax + 1):
        if pm1 and s == t and _parity_redundant(lam, k, sign):
            continue
        if realified:
            first, second = _pair_terms("X_R", k, J, W, U)
            items = [(first - second if sign > 0 else first + second, "XR" if sign > 0 else "YR")]
        elif inv is Involution.H:
            first, second = _pair_terms("X_H", k, J, W, U)
            x, y = first - second, first + second
            items = [(x, "XH"), (1j * y, "iYH")] if sign > 0 else [(1j * x, "iXH"), (y, "YH")]
        else:
            first, second = _pair_terms("X_T", k, J, W, U)
            items = [(first - second if sign > 0 else first + second, "XT" if sign > 0 else "YT")]
        scale = np.linalg.norm(first) + np.linalg.norm(second)
        for X, kind in items:
            cands.append(X)
            tags.append((complex(lam), s, t, k, kind))
            scales.append(scale)


def _parity_redundant(lam, k, sign):
    """At ``+1`` odd ``k`` adds nothing to sol and even ``k`` nothing to cosol; ``-1`` swaps."""
    odd = k % 2 == 1
    at_plus_one = np.real(lam) > 0
    drop_odd = (sign > 0) == at_plus_one
    return odd if drop_odd else not odd


def _basis(J, inv, sign, tol, random_state, partner):
    J = as_form_matrix(J)
    tol = resolve_tol(tol)
    inv = effective_involution(J, inv)
    if numerical_rank(J, tol) < J.shape[0]:
        fn = singular_sol_basis if sign > 0 else singular_cosol_basis
        return fn(J, inv, tol, random_state=0 if random_state is None else random_state)
    spec, cands, tags, scales = _nonsingular_candidates(J, inv, sign, tol, random_state, partner)
    basis = finalize_basis(cands, tags, J, inv, sign, scales=scales)
    basis.structure = spec
    return basis


def sol_basis(J, inv="T", tol=None, random_state=None, partner=False):
    """Basis of ``{X : X* J + J X = 0}``.

    Parameters
    ----------
    J : (n, n) array_like
        Real or complex form; may be singular.
    inv : {'T', 'H'}
        Transpose or conjugate transpose. Real ``J`` under ``'H'`` is the T case.
    tol : float, optional
        Relative rank tolerance (default from :func:`autgrp.default_tol`).
    random_state : int, optional
        Randomises the chain choice (the span does not change).
    partner : bool
        Generate each eigenvalue class from the partner eigenvalue instead of
        the canonical representative (the span does not change).

    Returns
    -------
    SolutionBasis
        Independent elements of unit Frobenius norm. For complex ``J`` with
        T the span is complex; with H it is a real span of complex matrices.

    Examples
    --------
    >>> import numpy as np
    >>> sol_basis(np.eye(2)).dim
    1
    """
    return _basis(J, inv, +1, tol, random_state, partner)


def cosol_basis(J, inv="T", tol=None, random_state=None, partner=False):
    """Basis of ``{X : X* J - J X = 0}``; parameters as in :func:`sol_basis`."""
    return _basis(J, inv, -1, tol, random_state, partner)


# --------------------------------------------------------------------------
# oracle and comparison


def oracle_basis(J, inv="T", sign=+1):
    """Orthonormal nullspace of the vectorised equation, reshaped to matrices."""
    J = as_form_matrix(J)
    inv = effective_involution(J, inv)
    sgn = _parse_sign(sign)
    real_coords = inv is Involution.H
    N = nullspace(vec_operator(J, inv, sgn))
    n = J.shape[0]
    elements = [from_coords(N[:, c], n, real_coords) for c in range(N.shape[1])]
    if is_real_field(J):
        elements = [np.real(X).astype(float) for X in elements]
    return SolutionBasis(
        space="sol" if sgn > 0 else "cosol",
        involution=inv.value,
        field="real" if is_real_field(J) else "complex",
        elements=elements,
        residuals=[equation_residual(X, J, inv, sgn) for X in elements],
        tags=[("oracle", c) for c in range(len(elements))],
        n=n,
    )


def span_equal(A, B, tol=1e-8):
    """True iff both bases have the same dimension and all principal angles are below ``tol``."""
    if A.dim != B.dim:
        return False
    if A.dim == 0:
        return True
    real_coords = A.real_coords or B.real_coords
    Ma = np.column_stack([_coords(X, real_coords) for X in A.elements])
    Mb = np.column_stack([_coords(X, real_coords) for X in B.elements])
    return max_principal_angle(Ma, Mb) < tol


def _coords(X, real_coords):
    from .core_linalg import to_coords

    return to_coords(X, real_coords)


# --------------------------------------------------------------------------
# dimension formulas


@dataclass
class DimReport:
    """Closed-form dimension count by block family.

    ``terms`` holds ``D_L, D_Z, D_1, D_-1, D_alpha, D_P, D_I`` as applicable;
    ``total`` is their sum. ``D_I_printed`` is the interaction term in the
    alternative form ``a (n - sum s)`` for real forms, with the resulting
    ``total_printed``. ``oracle`` and ``agrees`` are filled by
    :func:`dimension_report`.
    """

    space: str
    involution: str
    field: str
    terms: Dict[str, int]
    total: int
    D_I_printed: Optional[int] = None
    total_printed: Optional[int] = None
    oracle: Optional[int] = None
    constructed: Optional[int] = None
    agrees: Optional[bool] = None
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "space": self.space, "involution": self.involution, "field": self.field,
            "terms": dict(self.terms), "total": self.total,
            "D_I_printed": self.D_I_printed, "total_printed": self.total_printed,
            "oracle": self.oracle, "constructed": self.constructed,
            "agrees": self.agrees, "notes": list(self.notes),
        }


def _pairs(values):
    return [(values[j], values[k]) for j in range(len(values)) for k in range(j + 1, len(values))]


def _same_class_pairs(groups, f):
    return sum(f(x, y) for vals in groups.values() for x, y in _pairs(vals))


def _class_key(block):
    return tuple(sorted((round(z.real, 8), round(z.imag, 8)) for z in block.members))


def dim_from_structure(spec: KroneckerSpec, space="sol", n=None):
    """Evaluate the closed-form dimension of ``sol`` or ``cosol`` from the pencil structure.

    Pair sums run over unordered pairs ``j < k``. Dimensions are complex for
    complex T and real otherwise.
    """
    n = spec.n if n is None else n
    sol = space == "sol"
    inv, fld = spec.involution, spec.field
    s_list = [b.index for b in spec.of_kind("L")]
    t_list = [b.index for b in spec.of_kind("Z")]
    a = len(s_list)
    jordan = defaultdict(list)
    for b in spec.of_kind("Jordan"):
        jordan[(round(b.eigenvalue.real, 8), round(b.eigenvalue.imag, 8))].append(b.index)
    paired = defaultdict(list)
    quads = defaultdict(list)
    for b in spec.of_kind("PairedJordan"):
        (quads if len(b.members) == 4 else paired)[_class_key(b)].append(b.index)
    eq = sum(1 for x, y in _pairs(s_list) if x == y)
    terms = {}
    notes = []
    if inv == "H":
        terms["D_L"] = (sum(2 * s + 2 for s in s_list)
                        + sum(2 * max(2 * x + 1, 2 * y + 1) for x, y in _pairs(s_list)) + 2 * eq)
        terms["D_Z"] = sum(2 * t for t in t_list) + sum(min(4 * x, 4 * y) for x, y in _pairs(t_list))
        terms["D_alpha"] = (sum(sum(v) for v in jordan.values())
                            + _same_class_pairs(jordan, lambda x, y: min(2 * x, 2 * y)))
        terms["D_P"] = (sum(2 * p for v in paired.values() for p in v)
                        + _same_class_pairs(paired, lambda x, y: min(4 * x, 4 * y)))
        terms["D_I"] = a * (2 * n - sum(4 * s + 2 for s in s_list))
        printed = None
    else:
        terms["D_L"] = (sum(s + 1 for s in s_list)
                        + sum(max(2 * x + 1, 2 * y + 1) for x, y in _pairs(s_list)) + eq)
        terms["D_Z"] = sum(t_list) + sum(min(2 * x, 2 * y) for x, y in _pairs(t_list))
        plus = jordan.get((1.0, 0.0), [])
        minus = jordan.get((-1.0, 0.0), [])
        fl_p = sum(m // 2 for m in plus) if sol else sum((m + 1) // 2 for m in plus)
        fl_m = sum((m + 1) // 2 for m in minus) if sol else sum(m // 2 for m in minus)
        terms["D_1"] = fl_p + sum(min(x, y) for x, y in _pairs(plus))
        terms["D_-1"] = fl_m + sum(min(x, y) for x, y in _pairs(minus))
        if fld == "real":
            terms["D_alpha"] = (sum(p for v in paired.values() for p in v)
                                + _same_class_pairs(paired, lambda x, y: min(2 * x, 2 * y)))
            terms["D_P"] = (sum(2 * q for v in quads.values() for q in v)
                            + _same_class_pairs(quads, lambda x, y: min(4 * x, 4 * y)))
        else:
            terms["D_P"] = (sum(p for v in paired.values() for p in v)
                            + _same_class_pairs(paired, lambda x, y: min(2 * x, 2 * y)))
        terms["D_I"] = a * (n - sum(2 * s + 1 for s in s_list))
        printed = a * (n - sum(s_list)) if fld == "real" else None
    total = int(sum(terms.values()))
    total_printed = None
    if printed is not None:
        total_printed = total - terms["D_I"] + printed
        if printed != terms["D_I"]:
            notes.append(
                f"interaction term: a(n - sum(2s+1)) = {terms['D_I']}, "
                f"a(n - sum s) = {printed}")
    return DimReport(space, inv, fld, terms, total, printed, total_printed, notes=notes)


def dimension_report(J, inv="T", space="sol", tol=None, basis=None):
    """Formula count for ``J`` together with the oracle nullity and the constructed rank."""
    J = as_form_matrix(J)
    inv = effective_involution(J, inv)
    spec = kronecker_structure(J, inv, tol)
    report = dim_from_structure(spec, space, J.shape[0])
    sign = +1 if space == "sol" else -1
    report.oracle = oracle_basis(J, inv, sign).dim
    if basis is None:
        basis = (sol_basis if sign > 0 else cosol_basis)(J, inv, tol)
    report.constructed = basis.dim
    report.agrees = report.total == report.oracle == report.constructed
    return report
