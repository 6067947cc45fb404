"""Second-moment dynamics: closed 21-dimensional linear ODE and steady state.

The quadratic model closes at second order: the 21 monomials
(9 normal ``<x_i^† x_j>``, 6 anomalous ``<x_i x_j>`` with i <= j, and their
6 conjugates) obey dm/dt = A m + d. Both A and d are derived mechanically
here by normal-ordered commutator expansion of the master equation — no
hand-copied coefficients — which makes the construction testable against
the truncated-Fock oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from numpy.typing import NDArray

from .errors import NoSteadyStateError, SingularBeyondDarkSectorError
from .model import ChainParams, build_dyn_matrix, critical_drive

_MODE_A, _MODE_B, _MODE_C = 0, 1, 2
MODE_NAMES = ("a", "b", "c")

# Monomial key: (creators sorted, annihilators sorted); value = coefficient.
# An operator is a dict of such keys (a normal-ordered polynomial).
MonomialKey = tuple[tuple[int, ...], tuple[int, ...]]

NORMAL_KEYS: list[MonomialKey] = [
    ((i,), (j,)) for i in range(3) for j in range(3)
]
ANOMALOUS_KEYS: list[MonomialKey] = [
    ((), (i, j)) for i, j in combinations_with_replacement(range(3), 2)
]
CONJUGATE_KEYS: list[MonomialKey] = [
    ((i, j), ()) for i, j in combinations_with_replacement(range(3), 2)
]
MONOMIALS: list[MonomialKey] = NORMAL_KEYS + ANOMALOUS_KEYS + CONJUGATE_KEYS
_MONOMIAL_INDEX = {key: i for i, key in enumerate(MONOMIALS)}


def _label(key: MonomialKey) -> str:
    dags, anns = key
    parts = [f"{MODE_NAMES[m]}dag" for m in dags] + [MODE_NAMES[m] for m in anns]
    return "_".join(parts)


MONOMIAL_LABELS: tuple[str, ...] = tuple(_label(k) for k in MONOMIALS)


def _normal_order(word: tuple[tuple[int, bool], ...], coeff: complex, out: dict) -> dict:
    """Normal-order a product of ladder operators.

    word is a sequence of (mode, is_creator). Repeatedly swaps the first
    adjacent (annihilator, creator) pair, adding the commutator term when
    the modes match, until all creators sit left of all annihilators.
    """
    for i in range(len(word) - 1):
        (m1, d1), (m2, d2) = word[i], word[i + 1]
        if not d1 and d2:
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2 :]
            _normal_order(swapped, coeff, out)
            if m1 == m2:
                _normal_order(word[:i] + word[i + 2 :], coeff, out)
            return out
    key = (
        tuple(sorted(m for m, d in word if d)),
        tuple(sorted(m for m, d in word if not d)),
    )
    out[key] = out.get(key, 0.0) + coeff
    return out


def _key_word(key: MonomialKey) -> tuple[tuple[int, bool], ...]:
    dags, anns = key
    return tuple((m, True) for m in dags) + tuple((m, False) for m in anns)


def _op_mul(lhs: dict, rhs: dict) -> dict:
    out: dict = {}
    for k1, v1 in lhs.items():
        for k2, v2 in rhs.items():
            for key, c in _normal_order(_key_word(k1) + _key_word(k2), 1.0, {}).items():
                out[key] = out.get(key, 0.0) + v1 * v2 * c
    return {k: v for k, v in out.items() if abs(v) > 1e-14}


def _op_add(lhs: dict, rhs: dict, scale: complex = 1.0) -> dict:
    out = dict(lhs)
    for key, v in rhs.items():
        out[key] = out.get(key, 0.0) + scale * v
    return {k: v for k, v in out.items() if abs(v) > 1e-14}


def _hamiltonian(params: ChainParams) -> dict:
    """Rotating-frame Hamiltonian as a normal-ordered operator polynomial."""
    ham: dict = {}
    for mode, det in (
        (_MODE_A, params.delta_a),
        (_MODE_B, params.delta),
        (_MODE_C, params.delta_c),
    ):
        if det != 0.0:
            ham = _op_add(ham, {((mode,), (mode,)): det})
    for m, n in ((_MODE_A, _MODE_B), (_MODE_B, _MODE_C)):
        ham = _op_add(ham, {((m,), (n,)): params.j})
        ham = _op_add(ham, {((n,), (m,)): params.j})
    half = params.omega_drive / 2.0
    ham = _op_add(ham, {((_MODE_B, _MODE_B), ()): half})
    ham = _op_add(ham, {((), (_MODE_B, _MODE_B)): half})
    return ham


@dataclass(frozen=True)
class MomentSystem:
    """The closed linear ODE dm/dt = A m + d over the 21 monomials."""

    system_matrix: NDArray[np.complex128]  # A, shape (21, 21)
    drive_vector: NDArray[np.complex128]   # d, shape (21,)
    labels: tuple[str, ...]
    nullspace_dim: int                     # numerical nullspace of A
    params: ChainParams


@dataclass(frozen=True)
class MomentState:
    """Steady-state second moments, split by monomial family."""

    normal: NDArray[np.complex128]          # <x_i^† x_j>, row-major (i, j)
    anomalous: NDArray[np.complex128]       # <x_i x_j>, i <= j
    anomalous_conj: NDArray[np.complex128]  # <x_i^† x_j^†>, i <= j
    params: ChainParams

    @property
    def vector(self) -> NDArray[np.complex128]:
        """Full 21-vector in the canonical monomial order."""
        return np.concatenate([self.normal, self.anomalous, self.anomalous_conj])

    def normal_moment(self, i: int, j: int) -> complex:
        """<x_i^† x_j> for mode indices in {0: a, 1: b, 2: c}."""
        return complex(self.normal[3 * i + j])

    def anomalous_moment(self, i: int, j: int) -> complex:
        """<x_i x_j>."""
        lo, hi = min(i, j), max(i, j)
        return complex(self.anomalous[ANOMALOUS_KEYS.index(((), (lo, hi)))])

    def conjugate_moment(self, i: int, j: int) -> complex:
        """<x_i^† x_j^†>."""
        lo, hi = min(i, j), max(i, j)
        return complex(self.anomalous_conj[CONJUGATE_KEYS.index(((lo, hi), ()))])

    def population(self, mode: str) -> float:
        """Real occupation <x^†x> of mode 'a', 'b', or 'c'."""
        idx = MODE_NAMES.index(mode)
        return float(self.normal_moment(idx, idx).real)

    def qrt_initial_vector(self) -> NDArray[np.complex128]:
        """Initial data (<b†a>, <b†b>, <b†c>, <b†a†>, <b†b†>, <b†c†>).

        These are the steady-state moments that seed the two-time
        correlation ODE in the (a, b, c, a†, b†, c†) basis.
        """
        return np.array(
            [
                self.normal_moment(1, 0),
                self.normal_moment(1, 1),
                self.normal_moment(1, 2),
                self.conjugate_moment(0, 1),
                self.conjugate_moment(1, 1),
                self.conjugate_moment(1, 2),
            ],
            dtype=np.complex128,
        )


def build_moment_system(params: ChainParams) -> MomentSystem:
    """Derive A and d for dm/dt = A m + d from the master equation.

    For each monomial O the adjoint equation
    d<O>/dt = -i<[O, H]> + gamma <2 b†Ob - b†bO - Ob†b>
    is expanded with the normal-ordering engine; the constant (identity)
    component feeds d, everything else lands in A.
    """
    ham = _hamiltonian(params)
    b_dag = {((_MODE_B,), ()): 1.0}
    b_ann = {((), (_MODE_B,)): 1.0}
    n_b = _op_mul(b_dag, b_ann)

    a_matrix = np.zeros((21, 21), dtype=np.complex128)
    drive = np.zeros(21, dtype=np.complex128)
    for row, mon in enumerate(MONOMIALS):
        op = {mon: 1.0}
        rhs = _op_add(_op_mul(op, ham), _op_mul(ham, op), -1.0)
        rhs = {k: -1j * v for k, v in rhs.items()}
        dis = {k: 2.0 * v for k, v in _op_mul(_op_mul(b_dag, op), b_ann).items()}
        dis = _op_add(dis, _op_mul(n_b, op), -1.0)
        dis = _op_add(dis, _op_mul(op, n_b), -1.0)
        rhs = _op_add(rhs, {k: params.gamma * v for k, v in dis.items()})
        for key, value in rhs.items():
            if key == ((), ()):
                drive[row] += value
            else:
                a_matrix[row, _MONOMIAL_INDEX[key]] += value

    svals = np.linalg.svd(a_matrix, compute_uv=False)
    null_dim = int(np.sum(svals < svals.max() * 1e-10))
    return MomentSystem(
        system_matrix=a_matrix,
        drive_vector=drive,
        labels=MONOMIAL_LABELS,
        nullspace_dim=null_dim,
        params=params,
    )


def _dark_pair_count(params: ChainParams) -> int:
    """Number of conserved second-moment combinations expected from symmetry.

    The second-moment system matrix has eigenvalues mu_i + mu_k (i <= k)
    where mu are the first-moment rates; its nullspace is exactly the set
    of pairs summing to zero. Counting those pairs catalogues the dark
    sector without touching A itself.
    """
    lam = np.linalg.eigvals(build_dyn_matrix(params).entries)
    mu = -1j * lam
    scale = max(1.0, float(np.max(np.abs(mu))))
    count = 0
    for i in range(6):
        for k in range(i, 6):
            if abs(mu[i] + mu[k]) < 1e-9 * scale:
                count += 1
    return count


def steady_state(system: MomentSystem, params: ChainParams) -> MomentState:
    """Vacuum-initialized steady state of dm/dt = A m + d.

    The dark sector (conserved moments of the decoupled antisymmetric
    mode) makes A singular; the physically relevant solution starts from
    vacuum, where every conserved component is zero. That is imposed by a
    constrained least-squares solve: A m = -d subject to W^H m = 0, with W
    an orthonormal basis of the left nullspace of A.

    Raises NoSteadyStateError at or above the critical drive, and
    SingularBeyondDarkSectorError if A is more singular than the
    catalogued dark sector explains.
    """
    if params.omega_drive >= critical_drive(params):
        raise NoSteadyStateError(
            f"no steady state: drive {params.omega_drive} >= critical "
            f"{critical_drive(params)}"
        )
    if params.omega_drive == 0.0:
        zeros6 = np.zeros(6, dtype=np.complex128)
        return MomentState(
            normal=np.zeros(9, dtype=np.complex128),
            anomalous=zeros6,
            anomalous_conj=zeros6.copy(),
            params=params,
        )

    a_matrix = system.system_matrix
    drive = system.drive_vector
    u_mat, svals, _ = np.linalg.svd(a_matrix)
    null_mask = svals < svals.max() * 1e-10
    null_dim = int(np.sum(null_mask))
    expected = _dark_pair_count(params)
    if null_dim > expected:
        raise SingularBeyondDarkSectorError(
            f"system matrix has nullspace dimension {null_dim}, but only "
            f"{expected} conserved dark-sector moments are catalogued"
        )

    w_basis = u_mat[:, null_mask]
    stacked = np.vstack([a_matrix, w_basis.conj().T])
    rhs = np.concatenate([-drive, np.zeros(null_dim, dtype=np.complex128)])
    solution, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)

    residual = float(np.linalg.norm(a_matrix @ solution + drive))
    if residual >= 1e-10 * float(np.linalg.norm(drive)):
        raise SingularBeyondDarkSectorError(
            f"steady-state residual {residual:.3e} exceeds tolerance; the "
            "bright-sector solve did not converge"
        )
    return MomentState(
        normal=solution[:9],
        anomalous=solution[9:15],
        anomalous_conj=solution[15:],
        params=params,
    )


def solve_steady_state(params: ChainParams) -> MomentState:
    """Convenience wrapper: build the moment system and solve it."""
    return steady_state(build_moment_system(params), params)


def closed_form_populations(params: ChainParams) -> dict[str, complex]:
    """Steady-state populations and anomalous moment in closed form.

    Returns {"n_a", "n_b", "n_c", "bdag_bdag"}; n_a = n_c = Omega^2/(4D),
    n_b = Omega^2/(2D), <b†b†> = i(gamma*Omega + i*Delta*Omega)/(2D) with
    D = gamma^2 + Delta^2 - Omega^2. Valid below the critical drive.
    """
    gamma, delta, omega = params.gamma, params.delta, params.omega_drive
    dd = gamma**2 + delta**2 - omega**2
    if dd <= 0.0:
        raise NoSteadyStateError(
            f"no steady state: drive {omega} >= critical {critical_drive(params)}"
        )
    n_b = omega**2 / (2.0 * dd)
    return {
        "n_a": n_b / 2.0,
        "n_b": n_b,
        "n_c": n_b / 2.0,
        "bdag_bdag": 1j * (gamma * omega + 1j * delta * omega) / (2.0 * dd),
    }
