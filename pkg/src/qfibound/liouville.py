"""Operator vectorization and superoperator machinery.

Operators on a d-dimensional Hilbert space are flattened row-major, so the
basis element |mu><nu| sits at index mu*d + nu.  Channels become d^2 x d^2
matrices ("superoperators") acting on these vectors; a Kronecker power of a
channel acts on the tensor-product space with the *same* global row-major
convention, which requires an index permutation relative to the naive
Kronecker power (see :func:`tensor_power`).

The Gram matrix of a differentiable channel family x -> Phi(x) is
G = Phi'^dag Phi'.  For an N-fold product channel the product rule expands
G into N single-site terms plus N(N-1) cross terms; :func:`gram_tensor_power`
assembles that expansion from the single-site Gram triple without ever
differentiating the N-site channel directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    CompletenessViolation,
    DimensionBudgetExceeded,
    DimensionMismatch,
    NonHermitian,
    NonSquare,
)
from .numerics import HERMITICITY_RTOL

#: Basis convention tag carried by every Superoperator.
BASIS_TAG = "row-major |mu><nu|"

#: Dense Liouville-space matrices are capped at this many rows
#: (4096 = six qubits); larger systems must use diagonal representations.
MAX_DENSE_ROWS = 4096

#: Default central-difference step for channel derivatives.
DEFAULT_FD_STEP = 1e-6


@dataclass(frozen=True)
class LiouvilleVector:
    """A vectorized operator: amplitudes[mu*d + nu] = A[mu, nu]."""

    amplitudes: np.ndarray
    hilbert_dim: int

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.size != self.hilbert_dim**2:
            raise DimensionMismatch(
                f"{amps.size} amplitudes do not fill a "
                f"{self.hilbert_dim}x{self.hilbert_dim} operator"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def devectorize(self) -> np.ndarray:
        d = self.hilbert_dim
        return self.amplitudes.reshape(d, d).copy()


def vectorize(a: np.ndarray) -> LiouvilleVector:
    """Flatten a square operator into its Liouville vector."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square operator, got shape {m.shape}")
    return LiouvilleVector(amplitudes=m.reshape(-1).copy(), hilbert_dim=m.shape[0])


def devectorize(v: LiouvilleVector) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    return v.devectorize()


def _amplitudes(v: "LiouvilleVector | np.ndarray") -> np.ndarray:
    if isinstance(v, LiouvilleVector):
        return v.amplitudes
    return np.asarray(v, dtype=complex).reshape(-1)


def liouville_inner(a: "LiouvilleVector | np.ndarray", b: "LiouvilleVector | np.ndarray") -> complex:
    """Inner product (a|b); equals tr(A^dag B) of the devectorized operators."""
    x, y = _amplitudes(a), _amplitudes(b)
    if x.size != y.size:
        raise DimensionMismatch(f"dimension mismatch: {x.size} vs {y.size}")
    return complex(np.vdot(x, y))


class Superoperator:
    """A linear map on vectorized operators.

    Either a dense ``matrix`` or, for maps that are diagonal in the
    |mu><nu| basis, a ``diag`` vector may be supplied; the diagonal
    representation keeps tensor powers cheap.  ``trace_preserving=True``
    asserts the map's dual fixes the identity, which is verified at
    construction time.
    """

    def __init__(
        self,
        matrix: np.ndarray | None = None,
        *,
        diag: np.ndarray | None = None,
        hilbert_dim: int | None = None,
        trace_preserving: bool = False,
    ) -> None:
        if (matrix is None) == (diag is None):
            raise ValueError("supply exactly one of matrix= or diag=")
        if matrix is not None:
            m = np.asarray(matrix, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise NonSquare(f"superoperator matrix must be square, got {m.shape}")
            rows = m.shape[0]
        else:
            m = None
            diag = np.asarray(diag, dtype=complex).reshape(-1)
            rows = diag.size
        d = math.isqrt(rows)
        if d * d != rows:
            raise DimensionMismatch(
                f"superoperator of size {rows} is not a perfect-square dimension"
            )
        if hilbert_dim is not None and hilbert_dim != d:
            raise DimensionMismatch(
                f"hilbert_dim {hilbert_dim} inconsistent with matrix size {rows}"
            )
        self._matrix = m
        self._diag = diag if m is None else None
        self.hilbert_dim = d
        self.basis = BASIS_TAG
        self.trace_preserving = bool(trace_preserving)
        if self.trace_preserving:
            self._check_trace_preserving()

    def _check_trace_preserving(self, tol: float = 1e-10) -> None:
        ident = vectorize(np.eye(self.hilbert_dim)).amplitudes
        dual_on_ident = self.dagger().apply(ident)
        defect = float(np.max(np.abs(dual_on_ident - ident)))
        if defect > tol:
            raise CompletenessViolation(
                f"map flagged trace-preserving but dual moves identity by {defect:.3e}"
            )

    # -- representations ----------------------------------------------------

    @property
    def is_diagonal(self) -> bool:
        return self._diag is not None

    @property
    def diag(self) -> np.ndarray:
        if self._diag is not None:
            return self._diag
        return np.diagonal(self._matrix).copy()

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix
        return np.diag(self._diag)

    # -- algebra ------------------------------------------------------------

    def apply(self, v: "LiouvilleVector | np.ndarray") -> "LiouvilleVector | np.ndarray":
        """Apply the map to a vectorized operator."""
        amps = _amplitudes(v)
        if amps.size != (self.hilbert_dim**2):
            raise DimensionMismatch(
                f"vector of length {amps.size} does not match Hilbert dim {self.hilbert_dim}"
            )
        out = self._diag * amps if self._diag is not None else self._matrix @ amps
        if isinstance(v, LiouvilleVector):
            return LiouvilleVector(amplitudes=out, hilbert_dim=self.hilbert_dim)
        return out

    def dagger(self) -> "Superoperator":
        if self._diag is not None:
            return Superoperator(diag=self._diag.conj())
        return Superoperator(self._matrix.conj().T)

    def compose(self, other: "Superoperator") -> "Superoperator":
        """The map self . other (other acts first)."""
        if self.hilbert_dim != other.hilbert_dim:
            raise DimensionMismatch(
                f"cannot compose maps on dims {self.hilbert_dim} and {other.hilbert_dim}"
            )
        tp = self.trace_preserving and other.trace_preserving
        if self.is_diagonal and other.is_diagonal:
            return Superoperator(diag=self._diag * other._diag, trace_preserving=tp)
        return Superoperator(self.matrix @ other.matrix, trace_preserving=tp)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        kind = "diagonal" if self.is_diagonal else "dense"
        return f"Superoperator({kind}, hilbert_dim={self.hilbert_dim})"


@dataclass(frozen=True)
class ChannelFamily:
    """A differentiable one-parameter family of channels x -> Phi(x).

    ``derivative`` is an analytic closure when available; otherwise the
    derivative falls back to a central finite difference with step
    ``fd_step``.
    """

    evaluate: Callable[[float], Superoperator]
    derivative: Callable[[float], Superoperator] | None = None
    fd_step: float = DEFAULT_FD_STEP

    @property
    def derivative_mode(self) -> str:
        return "analytic" if self.derivative is not None else "central"

    def derivative_at(self, x: float) -> Superoperator:
        if self.derivative is not None:
            return self.derivative(x)
        return finite_diff_superop(self, x, self.fd_step)


def superop_from_kraus(
    kraus: list[np.ndarray] | tuple[np.ndarray, ...],
    *,
    trace_preserving: bool = True,
) -> Superoperator:
    """Build Phi-tilde = sum_l kron(K_l, conj(K_l)) from Kraus operators.

    When ``trace_preserving`` the completeness relation
    sum_l K_l^dag K_l = I is checked to 1e-9.
    """
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise CompletenessViolation("empty Kraus list")
    shape = ops[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise NonSquare(f"Kraus operators must be square, got {shape}")
    if any(op.shape != shape for op in ops):
        raise DimensionMismatch("Kraus operators must all share one shape")
    if trace_preserving:
        gram = sum(op.conj().T @ op for op in ops)
        defect = float(np.max(np.abs(gram - np.eye(shape[0]))))
        if defect > 1e-9:
            raise CompletenessViolation(
                f"sum K^dag K deviates from identity by {defect:.3e}"
            )
    mat = sum(np.kron(op, op.conj()) for op in ops)
    return Superoperator(mat, trace_preserving=trace_preserving)


def site_permutation(d: int, n: int) -> np.ndarray:
    """Map global row-major Liouville indices to site-major Kronecker indices.

    ``perm[g] = s`` where ``g = mu * d**n + nu`` indexes |mu><nu| on the
    composite space and ``s`` is the index of the same basis element in the
    n-fold Kronecker-power ordering (site 0 most significant, each site
    contributing its own pair digit d*mu_i + nu_i).
    """
    dim = d**n
    g = np.arange(dim * dim)
    mu, nu = np.divmod(g, dim)
    s = np.zeros_like(g)
    for i in range(n):
        shift = d ** (n - 1 - i)
        mu_i = (mu // shift) % d
        nu_i = (nu // shift) % d
        s = s * (d * d) + (d * mu_i + nu_i)
    return s


def _budget_rows(rows: int) -> None:
    if rows > MAX_DENSE_ROWS:
        raise DimensionBudgetExceeded(
            f"tensor power needs {rows} Liouville rows; budget is {MAX_DENSE_ROWS}"
        )


def tensor_power(s: Superoperator, n: int) -> Superoperator:
    """N-fold Kronecker power of a channel, in the global row-major basis.

    The naive Kronecker power interleaves per-site (mu_i, nu_i) pairs; the
    result here is re-indexed so that it acts on vectorize() of composite
    operators directly.
    """
    if n < 1 or n != int(n):
        raise ValueError(f"tensor power requires integer n >= 1, got {n}")
    n = int(n)
    if n == 1:
        return s
    rows = (s.hilbert_dim**2) ** n
    _budget_rows(rows)
    perm = site_permutation(s.hilbert_dim, n)
    if s.is_diagonal:
        diag = s.diag
        out = diag
        for _ in range(n - 1):
            out = np.kron(out, diag)
        return Superoperator(diag=out[perm], trace_preserving=s.trace_preserving)
    mat = s.matrix
    out = mat
    for _ in range(n - 1):
        out = np.kron(out, mat)
    return Superoperator(
        out[np.ix_(perm, perm)], trace_preserving=s.trace_preserving
    )


@dataclass(frozen=True)
class GramTriple:
    """Single-site building blocks of the product-channel Gram matrix.

    a = Phi^dag Phi, b = Phi'^dag Phi', c = Phi'^dag Phi.  a and b are
    Hermitian PSD by construction; this is validated on creation.
    """

    a: Superoperator
    b: Superoperator
    c: Superoperator

    def __post_init__(self) -> None:
        for name, op in (("a", self.a), ("b", self.b)):
            if op.is_diagonal:
                diag = op.diag
                scale = float(np.max(np.abs(diag))) if diag.size else 0.0
                if scale == 0.0:
                    continue
                if float(np.max(np.abs(diag.imag))) > HERMITICITY_RTOL * scale:
                    raise NonHermitian(f"Gram component {name} is not Hermitian")
                if float(np.min(diag.real)) < -1e-10 * scale:
                    raise NonHermitian(f"Gram component {name} is not PSD")
                continue
            m = op.matrix
            norm = np.linalg.norm(m)
            if norm == 0.0:
                continue
            if np.linalg.norm(m - m.conj().T) / norm > HERMITICITY_RTOL:
                raise NonHermitian(f"Gram component {name} is not Hermitian")
            if float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0]) < -1e-10 * norm:
                raise NonHermitian(f"Gram component {name} is not PSD")


def gram_triple(family: ChannelFamily, x: float) -> GramTriple:
    """Evaluate (Phi^dag Phi, Phi'^dag Phi', Phi'^dag Phi) at x."""
    phi = family.evaluate(x)
    dphi = family.derivative_at(x)
    phi_dag = phi.dagger()
    dphi_dag = dphi.dagger()
    return GramTriple(
        a=phi_dag.compose(phi),
        b=dphi_dag.compose(dphi),
        c=dphi_dag.compose(phi),
    )


def gram_tensor_power(triple: GramTriple, n: int) -> Superoperator:
    """Gram matrix of the N-fold product channel from single-site blocks.

    Expanding (Phi^xN)'^dag (Phi^xN)' by the product rule gives N terms
    with one b factor plus N(N-1) cross terms with a c and a c^dag factor;
    both sums are accumulated in one left-to-right recursion.  Output is in
    the global row-major basis.
    """
    if n < 1 or n != int(n):
        raise ValueError(f"tensor power requires integer n >= 1, got {n}")
    n = int(n)
    if n == 1:
        return triple.b
    d = triple.a.hilbert_dim
    rows = (d**2) ** n
    _budget_rows(rows)
    perm = site_permutation(d, n)
    diagonal = triple.a.is_diagonal and triple.b.is_diagonal and triple.c.is_diagonal
    if diagonal:
        a, b, c = triple.a.diag, triple.b.diag, triple.c.diag
        cd = c.conj()
    else:
        a, b, c = triple.a.matrix, triple.b.matrix, triple.c.matrix
        cd = c.conj().T
    apow = a
    one_site = b  # all placements of a single b factor
    left_c = c  # all placements of a single c factor
    left_cd = cd
    cross = np.zeros_like(b)  # all placements of a (c, c^dag) pair
    for _ in range(n - 1):
        cross = np.kron(cross, a) + np.kron(left_c, cd) + np.kron(left_cd, c)
        one_site = np.kron(one_site, a) + np.kron(apow, b)
        left_c = np.kron(left_c, a) + np.kron(apow, c)
        left_cd = np.kron(left_cd, a) + np.kron(apow, cd)
        apow = np.kron(apow, a)
    total = one_site + cross
    if diagonal:
        return Superoperator(diag=total[perm])
    return Superoperator(total[np.ix_(perm, perm)])


def tensor_power_derivative(
    value: Superoperator, deriv: Superoperator, n: int
) -> Superoperator:
    """Derivative of the N-fold Kronecker power by the product rule.

    Given Phi(x) and Phi'(x) at one site, returns
    sum_i Phi x ... x Phi'_(site i) x ... x Phi in the global row-major
    basis.
    """
    if n < 1 or n != int(n):
        raise ValueError(f"tensor power requires integer n >= 1, got {n}")
    n = int(n)
    if value.hilbert_dim != deriv.hilbert_dim:
        raise DimensionMismatch(
            f"value and derivative dims differ: {value.hilbert_dim} vs {deriv.hilbert_dim}"
        )
    if n == 1:
        return deriv
    rows = (value.hilbert_dim**2) ** n
    _budget_rows(rows)
    perm = site_permutation(value.hilbert_dim, n)
    if value.is_diagonal and deriv.is_diagonal:
        base, dbase = value.diag, deriv.diag
        cur, dcur = base, dbase
        for _ in range(n - 1):
            dcur = np.kron(dcur, base) + np.kron(cur, dbase)
            cur = np.kron(cur, base)
        return Superoperator(diag=dcur[perm])
    base, dbase = value.matrix, deriv.matrix
    cur, dcur = base, dbase
    for _ in range(n - 1):
        dcur = np.kron(dcur, base) + np.kron(cur, dbase)
        cur = np.kron(cur, base)
    return Superoperator(dcur[np.ix_(perm, perm)])


def product_family(family: ChannelFamily, n: int) -> ChannelFamily:
    """The N-fold product family x -> Phi(x)^xN with product-rule derivative."""
    if n == 1:
        return family

    def evaluate(x: float) -> Superoperator:
        return tensor_power(family.evaluate(x), n)

    def derivative(x: float) -> Superoperator:
        return tensor_power_derivative(family.evaluate(x), family.derivative_at(x), n)

    return ChannelFamily(evaluate=evaluate, derivative=derivative)


def finite_diff_superop(family: ChannelFamily, x: float, h: float) -> Superoperator:
    """Central-difference derivative (Phi(x+h) - Phi(x-h)) / 2h."""
    if not h > 0.0:
        raise ValueError(f"finite-difference step must be positive, got {h}")
    plus = family.evaluate(x + h)
    minus = family.evaluate(x - h)
    if plus.is_diagonal and minus.is_diagonal:
        return Superoperator(diag=(plus.diag - minus.diag) / (2.0 * h))
    return Superoperator((plus.matrix - minus.matrix) / (2.0 * h))
