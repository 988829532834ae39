"""Saturable lower bound on the quantum Fisher information.

For a state rho_x with derivative rho'_x, the bound is

    F_down = (rho'|rho') - |(rho|rho')|^2 / (rho|rho)

with the Hilbert-Schmidt inner product (A|B) = tr(A^dag B).  Written at the
channel level with rho_x = Phi(x)[rho_0], the bound over physical initial
states never exceeds half the largest eigenvalue of the Gram matrix
G = Phi'^dag Phi'; for commuting-noise product channels the GHZ projector
attains F_down = ||G|| / 2 exactly below the crossover time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionBudgetExceeded,
    InvalidState,
    NonTraceless,
    NoPhysicalState,
    ZeroOperator,
)
from .liouville import (
    MAX_DENSE_ROWS,
    ChannelFamily,
    LiouvilleVector,
    gram_tensor_power,
    gram_triple,
    product_family,
    vectorize,
)
from .numerics import TOP_EIGENSPACE_RTOL, largest_eigval_psd

#: Absolute tolerance on density-matrix checks (Hermiticity defect, trace
#: deviation, negative-eigenvalue excursion).
STATE_TOL = 1e-9

#: A physical state counts as achieving the norm bound when its bound sits
#: within this relative distance of norm/2.
ACHIEVES_RTOL = 1e-9


@dataclass(frozen=True)
class BoundResult:
    """The bound and its two constituents.

    f_lower = term_grad - term_proj, where term_grad = (rho'|rho') and
    term_proj = |(rho|rho')|^2 / (rho|rho); purity = (rho|rho).
    """

    f_lower: float
    term_grad: float
    term_proj: float
    purity: float


@dataclass(frozen=True)
class OptimalStateResult:
    """Norm-maximized bound over initial states.

    norm_bound is ||G|| for the N-fold Gram matrix; top_eigenspace spans
    the eigenvectors within 1e-8 relative of norm_bound (empty when the
    norm vanishes).  initial_state is a physical density matrix whose
    channel bound equals norm_bound/2 (the GHZ projector for commuting
    qubit noise) or None when no such state was constructed.
    """

    norm_bound: float
    top_eigenspace: list[LiouvilleVector]
    initial_state: np.ndarray | None


def _check_density(rho: np.ndarray, *, tol: float = STATE_TOL) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidState(f"density matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidState("density matrix has non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise InvalidState("density matrix is not Hermitian")
    trace = complex(np.trace(m))
    if abs(trace - 1.0) > tol:
        raise InvalidState(f"density matrix trace {trace:.9g} is not 1")
    sym = (m + m.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    if min_eig < -tol:
        raise InvalidState(f"density matrix has negative eigenvalue {min_eig:.3e}")
    return m


def _check_derivative(rho_prime: np.ndarray, *, tol: float = STATE_TOL) -> np.ndarray:
    m = np.asarray(rho_prime, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidState(f"derivative must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidState("derivative has non-finite entries")
    scale = max(float(np.max(np.abs(m))), 1.0)
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise InvalidState("derivative is not Hermitian")
    trace = complex(np.trace(m))
    if abs(trace) > tol * scale:
        raise NonTraceless(f"derivative trace {trace:.3e} is not 0")
    return m


def _bound_from_vectors(rho_vec: np.ndarray, prime_vec: np.ndarray) -> BoundResult:
    term_grad = float(np.vdot(prime_vec, prime_vec).real)
    overlap = complex(np.vdot(rho_vec, prime_vec))
    purity = float(np.vdot(rho_vec, rho_vec).real)
    if purity <= 0.0:
        raise InvalidState("state has vanishing Hilbert-Schmidt norm")
    term_proj = abs(overlap) ** 2 / purity
    f_lower = term_grad - term_proj
    if f_lower < 0.0 and f_lower >= -1e-12 * max(term_grad, 1.0):
        f_lower = 0.0
    return BoundResult(
        f_lower=f_lower, term_grad=term_grad, term_proj=term_proj, purity=purity
    )


def lower_bound_from_state(rho: np.ndarray, rho_prime: np.ndarray) -> BoundResult:
    """The bound from an explicit (state, derivative) pair."""
    m = _check_density(rho)
    mp = _check_derivative(rho_prime)
    if m.shape != mp.shape:
        raise InvalidState(f"shape mismatch: {m.shape} vs {mp.shape}")
    return _bound_from_vectors(m.reshape(-1), mp.reshape(-1))


def lower_bound_from_channel(
    family: ChannelFamily, x: float, rho0: np.ndarray
) -> BoundResult:
    """The bound computed at the channel level: rho_x = Phi(x)[rho_0]."""
    m = _check_density(rho0)
    r0 = vectorize(m)
    rho_vec = family.evaluate(x).apply(r0).amplitudes
    prime_vec = family.derivative_at(x).apply(r0).amplitudes
    return _bound_from_vectors(rho_vec, prime_vec)


def associated_qfi(rho: np.ndarray, rho_prime: np.ndarray) -> float:
    """The Liouville-space Fisher information F-tilde.

    F-tilde = 4 [ (rho'|rho')(rho|rho) - (rho'|rho)(rho|rho') ] / (rho|rho)^2,
    which relates to the bound by F_down = (rho|rho) F-tilde / 4.  It is the
    quantity whose finite-difference limit the normalized Bures distance
    reproduces, and it is additive over tensor products.
    """
    result = lower_bound_from_state(rho, rho_prime)
    return 4.0 * result.f_lower / result.purity


def bures_distance_liouville(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Bures-type distance between normalized Liouville vectors.

    d^2 = 2 (1 - |(rho_a|rho_b)| / sqrt((rho_a|rho_a)(rho_b|rho_b))), the
    pure-state overlap formula applied to operators as unit vectors.
    """
    a = np.asarray(rho_a, dtype=complex)
    b = np.asarray(rho_b, dtype=complex)
    for name, m in (("rho_a", a), ("rho_b", b)):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidState(f"{name} must be a square matrix, got {m.shape}")
        scale = float(np.max(np.abs(m)))
        if scale == 0.0:
            raise ZeroOperator(f"{name} is the zero operator")
        if np.max(np.abs(m - m.conj().T)) > STATE_TOL * scale:
            raise InvalidState(f"{name} is not Hermitian")
    if a.shape != b.shape:
        raise InvalidState(f"shape mismatch: {a.shape} vs {b.shape}")
    va, vb = a.reshape(-1), b.reshape(-1)
    na = float(np.vdot(va, va).real)
    nb = float(np.vdot(vb, vb).real)
    overlap = abs(complex(np.vdot(va, vb))) / np.sqrt(na * nb)
    return 2.0 * (1.0 - min(overlap, 1.0))


def ghz_state(n: int) -> np.ndarray:
    """The N-qubit GHZ projector |GHZ><GHZ|, GHZ = (|0..0> + |1..1>)/sqrt(2)."""
    if n < 1 or n != int(n):
        raise ValueError(f"need an integer n >= 1, got {n}")
    n = int(n)
    if 4**n > MAX_DENSE_ROWS:
        raise DimensionBudgetExceeded(
            f"GHZ projector on {n} qubits needs {4**n} Liouville entries; "
            f"budget is {MAX_DENSE_ROWS}"
        )
    dim = 2**n
    rho = np.zeros((dim, dim), dtype=complex)
    for i in (0, dim - 1):
        for j in (0, dim - 1):
            rho[i, j] = 0.5
    return rho


def analytic_max_phase_covariant(n: int, t: float, eta_perp: float) -> float:
    """Closed form of the Gram norm for phase-covariant noise below the
    crossover time: N^2 t^2 eta_perp^(2N)."""
    if n < 1 or n != int(n):
        raise ValueError(f"need an integer n >= 1, got {n}")
    if not 0.0 <= eta_perp <= 1.0:
        raise ValueError(f"eta_perp must lie in [0, 1], got {eta_perp}")
    return float(n) ** 2 * t**2 * eta_perp ** (2 * n)


def max_bound_over_states(
    family: ChannelFamily, x: float, n: int, *, require_state: bool = False
) -> OptimalStateResult:
    """Norm-maximized bound for the N-fold product of a channel family.

    norm_bound is the largest eigenvalue of the tensor-power Gram matrix;
    over physical initial states the bound attains at most norm_bound / 2.
    For qubit families the GHZ projector is tried as the optimal state and
    returned when its channel bound equals norm_bound / 2; otherwise
    initial_state is None (or, with require_state=True, NoPhysicalState is
    raised).
    """
    triple = gram_triple(family, x)
    gram = gram_tensor_power(triple, n)
    dim = gram.hilbert_dim**2
    if gram.is_diagonal:
        values = gram.diag
        if np.max(np.abs(values.imag)) > 1e-12 * max(float(np.max(np.abs(values))), 1.0):
            raise InvalidState("Gram diagonal has a non-real entry")
        values = values.real
        norm_bound = float(np.max(values)) if values.size else 0.0
        if norm_bound > 0.0:
            idx = np.flatnonzero(values >= norm_bound * (1.0 - TOP_EIGENSPACE_RTOL))
            basis = np.eye(dim)
            vectors = [
                LiouvilleVector(amplitudes=basis[:, i], hilbert_dim=gram.hilbert_dim)
                for i in idx
            ]
        else:
            vectors = []
    else:
        top = largest_eigval_psd(gram.matrix)
        norm_bound = top.value
        if norm_bound > 0.0:
            vectors = [
                LiouvilleVector(amplitudes=top.vectors[:, i], hilbert_dim=gram.hilbert_dim)
                for i in range(top.vectors.shape[1])
            ]
        else:
            vectors = []
    initial_state: np.ndarray | None = None
    site_dim = triple.a.hilbert_dim
    if norm_bound > 0.0 and site_dim == 2:
        candidate = ghz_state(n)
        result = lower_bound_from_channel(product_family(family, n), x, candidate)
        target = norm_bound / 2.0
        if abs(result.f_lower - target) <= ACHIEVES_RTOL * max(target, 1.0):
            initial_state = candidate
    if require_state and initial_state is None and norm_bound > 0.0:
        raise NoPhysicalState(
            "no physical initial state achieving norm_bound/2 was constructed"
        )
    return OptimalStateResult(
        norm_bound=norm_bound, top_eigenspace=vectors, initial_state=initial_state
    )
