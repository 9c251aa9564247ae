"""Layered parameterized circuits and their exact derivatives.

Four circuit families are supported, all with the same layer skeleton:
an entangling block followed by one ZYZ rotation per qubit.  Layer i of
the circuit is

    U_i = [prod_j R3d_j(angles_ij)] @ U_ent(layer i)

and the full circuit applies layer 1 first: U(theta) = U_L ... U_2 U_1.

Entangler choices:

* ``cnot``   - the fixed CNOT ring  Ct_n[X_1] ... Ct_2[X_3] Ct_1[X_2]
               (gate with control j, target j+1, wrapping n+1 -> 1;
               the j = 1 gate acts first).
* ``crot``   - the same ring with each CNOT replaced by a controlled ZYZ
               rotation carrying its own three angles per layer.
* ``heis1d`` - exp(-i dt H) with the open-chain coupling
               H = sum_{i<n} sigma_i . sigma_{i+1}.
* ``heisfc`` - exp(-i dt H) with all-pairs coupling
               H = (1/n) sum_{i<j} sigma_i . sigma_j.

Parameter vector layout (flat, layer-major):

* layer block for ``cnot``/``heis1d``/``heisfc``: 3 n angles, qubit-major,
  each triple ordered (phi, theta, omega) for R3d = R^z(omega) R^y(theta)
  R^z(phi);
* layer block for ``crot``: first the 3 n controlled-rotation angles of
  the entangler ring (triple j belongs to the gate controlled by qubit j),
  then the 3 n single-qubit rotation angles as above.

For a single qubit the ring degenerates (a gate cannot control itself):
the entangler is the identity and, for ``crot``, the entangler angles of
each layer exist in the layout but have no effect.

Every elementary gate G(phi) here satisfies dG/dphi = -i/2 * gen @ G for
a fixed generator ``gen`` (an embedded Pauli for plain rotations, a
projector-sandwiched Pauli for controlled ones), which gives exact
product-rule derivatives of the whole circuit.  Plain rotation angles
additionally admit the two-point shift rule
d<O>/dphi = ( <O>(phi + pi/2) - <O>(phi - pi/2) ) / 2; controlled-rotation
angles do not (their generator has three distinct eigenvalues), so the
product-rule path is used for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .gates import controlled, embed1, pauli, projector, rot
from .predict import Observable, _combined_matrix
from .qmat import frobenius_norm, herm_expm


class AnsatzKind(str, Enum):
    CNOT_BASED = "cnot"
    CROT_BASED = "crot"
    HEISENBERG_1D = "heis1d"
    HEISENBERG_FC = "heisfc"


_HEISENBERG_KINDS = (AnsatzKind.HEISENBERG_1D, AnsatzKind.HEISENBERG_FC)


@dataclass(frozen=True)
class AnsatzSpec:
    """Circuit family descriptor: kind, qubit count, layer count, time step."""

    kind: AnsatzKind
    n: int
    layers: int
    dt: float = 0.1

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", AnsatzKind(self.kind))
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        if self.layers < 1:
            raise ValueError(f"need at least one layer, got layers={self.layers}")
        if self.kind in _HEISENBERG_KINDS and not self.dt > 0:
            raise ValueError(f"Heisenberg circuits need dt > 0, got dt={self.dt}")

    @property
    def dim(self) -> int:
        return 2**self.n


def params_per_layer(spec: AnsatzSpec) -> int:
    return 6 * spec.n if spec.kind is AnsatzKind.CROT_BASED else 3 * spec.n


def param_count(spec: AnsatzSpec) -> int:
    """Length of the flat parameter vector for this circuit family."""
    return spec.layers * params_per_layer(spec)


def heisenberg_hamiltonian(kind: AnsatzKind, n: int) -> np.ndarray:
    """Coupling Hamiltonian sum_{i<j} J_ij sigma_i . sigma_j (no field term).

    J is 1 on nearest-neighbour pairs for the open chain and 1/n on all
    pairs for the fully connected variant.  For n = 1 the sum is empty.
    """
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    if kind is AnsatzKind.HEISENBERG_1D:
        pairs = [(i, i + 1, 1.0) for i in range(1, n)]
    elif kind is AnsatzKind.HEISENBERG_FC:
        pairs = [(i, j, 1.0 / n) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    else:
        raise ValueError(f"not a Heisenberg kind: {kind}")
    for i, j, coupling in pairs:
        for axis in "xyz":
            h += coupling * (embed1(pauli(axis), i, n) @ embed1(pauli(axis), j, n))
    return h


_ENTANGLER_CACHE: dict[tuple, np.ndarray] = {}


def _fixed_entangler(kind: AnsatzKind, n: int, dt: float) -> np.ndarray:
    key = (kind, n, dt if kind in _HEISENBERG_KINDS else None)
    cached = _ENTANGLER_CACHE.get(key)
    if cached is None:
        if kind is AnsatzKind.CNOT_BASED:
            u = np.eye(2**n, dtype=complex)
            if n >= 2:
                for j in range(1, n + 1):  # gate j applied first for j = 1
                    u = controlled(j, j % n + 1, pauli("x"), n) @ u
        else:
            u = herm_expm(heisenberg_hamiltonian(kind, n), dt)
        u.setflags(write=False)
        _ENTANGLER_CACHE[key] = u
        cached = u
    return cached


def entangler(spec: AnsatzSpec, layer_params: Sequence[float] | None = None) -> np.ndarray:
    """The entangling block of one layer.

    Only the controlled-rotation family consumes parameters (3 n angles per
    layer); the CNOT ring and the Heisenberg evolutions are fixed.
    """
    if spec.kind is not AnsatzKind.CROT_BASED:
        if layer_params is not None and len(layer_params) != 0:
            raise ValueError(f"{spec.kind.value} entangler takes no parameters")
        return _fixed_entangler(spec.kind, spec.n, spec.dt).copy()
    if layer_params is None or len(layer_params) != 3 * spec.n:
        got = 0 if layer_params is None else len(layer_params)
        raise ValueError(f"crot entangler needs {3 * spec.n} angles, got {got}")
    u = np.eye(spec.dim, dtype=complex)
    if spec.n == 1:
        return u
    for j in range(1, spec.n + 1):
        phi, theta, omega = layer_params[3 * (j - 1) : 3 * j]
        target = j % spec.n + 1
        for axis, angle in (("z", phi), ("y", theta), ("z", omega)):
            u = controlled(j, target, rot(axis, angle), spec.n) @ u
    return u


@dataclass
class GateFactor:
    """One elementary gate of the circuit, in application order.

    ``param`` is the flat index of the angle this factor depends on (None
    for fixed blocks); the derivative is -i/2 * generator @ matrix.
    ``shift_ok`` marks angles whose generator is an embedded Pauli, for
    which the two-point shift rule is exact.
    """

    matrix: np.ndarray
    param: int | None = None
    generator: np.ndarray | None = None
    shift_ok: bool = False


def _check_len(spec: AnsatzSpec, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    expected = param_count(spec)
    if theta.shape != (expected,):
        raise ValueError(f"expected {expected} parameters, got shape {theta.shape}")
    return theta


@dataclass(frozen=True)
class _TemplateGate:
    """Angle-independent description of one gate slot.

    kind 'fixed' carries a precomputed matrix; 'rot' and 'crot' carry the
    cached generator (and, for 'crot', the control projector) from which
    the gate matrix is assembled for a concrete angle:

        rot:  cos(a/2) I - i sin(a/2) gen
        crot: I + (cos(a/2) - 1) P1 - i sin(a/2) gen
    """

    kind: str
    param: int = -1
    matrix: np.ndarray | None = None
    gen: np.ndarray | None = None
    p1: np.ndarray | None = None


_TEMPLATE_CACHE: dict[tuple, list[_TemplateGate]] = {}


def _template(spec: AnsatzSpec) -> list[_TemplateGate]:
    key = (spec.kind, spec.n, spec.layers, spec.dt if spec.kind in _HEISENBERG_KINDS else None)
    cached = _TEMPLATE_CACHE.get(key)
    if cached is not None:
        return cached
    n = spec.n
    gates: list[_TemplateGate] = []
    per_layer = params_per_layer(spec)
    rot_gens = {
        (axis, j): _frozen(embed1(pauli(axis), j, n)) for j in range(1, n + 1) for axis in "zy"
    }
    p1s = {j: _frozen(projector(j, n, 1)) for j in range(1, n + 1)}
    crot_gens = {
        (axis, j): _frozen(p1s[j] @ rot_gens[(axis, j % n + 1)])
        for j in range(1, n + 1)
        for axis in "zy"
    }
    for layer in range(spec.layers):
        base = layer * per_layer
        if spec.kind is AnsatzKind.CROT_BASED:
            if n >= 2:
                for j in range(1, n + 1):
                    for k, axis in enumerate(("z", "y", "z")):
                        gates.append(
                            _TemplateGate(
                                kind="crot",
                                param=base + 3 * (j - 1) + k,
                                gen=crot_gens[(axis, j)],
                                p1=p1s[j],
                            )
                        )
            rot_base = base + 3 * n
        else:
            gates.append(
                _TemplateGate(kind="fixed", matrix=_fixed_entangler(spec.kind, n, spec.dt))
            )
            rot_base = base
        for j in range(1, n + 1):
            for k, axis in enumerate(("z", "y", "z")):
                gates.append(
                    _TemplateGate(
                        kind="rot",
                        param=rot_base + 3 * (j - 1) + k,
                        gen=rot_gens[(axis, j)],
                    )
                )
    _TEMPLATE_CACHE[key] = gates
    return gates


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def circuit_factors(spec: AnsatzSpec, theta: np.ndarray) -> list[GateFactor]:
    """Elementary gate sequence (application order) with parameter bookkeeping."""
    theta = _check_len(spec, theta)
    eye = np.eye(spec.dim, dtype=complex)
    factors: list[GateFactor] = []
    for g in _template(spec):
        if g.kind == "fixed":
            factors.append(GateFactor(matrix=g.matrix))
            continue
        c = np.cos(theta[g.param] / 2.0)
        s = np.sin(theta[g.param] / 2.0)
        if g.kind == "rot":
            matrix = c * eye - 1j * s * g.gen
            factors.append(
                GateFactor(matrix=matrix, param=g.param, generator=g.gen, shift_ok=True)
            )
        else:
            matrix = eye + (c - 1.0) * g.p1 - 1j * s * g.gen
            factors.append(
                GateFactor(matrix=matrix, param=g.param, generator=g.gen, shift_ok=False)
            )
    return factors


def build_unitary(spec: AnsatzSpec, theta: np.ndarray) -> np.ndarray:
    """Assemble the full 2^n x 2^n circuit unitary for parameters theta."""
    u = np.eye(spec.dim, dtype=complex)
    for f in circuit_factors(spec, theta):
        u = f.matrix @ u
    return u


def unitary_derivative(spec: AnsatzSpec, theta: np.ndarray, j: int) -> np.ndarray:
    """Exact dU/dtheta_j via the product rule on the single affected gate.

    Entangler angles of a 1-qubit controlled-rotation circuit are inert, so
    their derivative is the zero matrix.
    """
    theta = _check_len(spec, theta)
    if not 0 <= j < theta.shape[0]:
        raise ValueError(f"parameter index {j} out of range")
    factors = circuit_factors(spec, theta)
    du = np.zeros((spec.dim, spec.dim), dtype=complex)
    prefix = np.eye(spec.dim, dtype=complex)
    for k, f in enumerate(factors):
        if f.param == j:
            term = -0.5j * (f.generator @ f.matrix @ prefix)
            for g in factors[k + 1 :]:
                term = g.matrix @ term
            du += term
        prefix = f.matrix @ prefix
    return du


def shift_eligible(spec: AnsatzSpec) -> np.ndarray:
    """Boolean mask of parameters covered by the two-point shift rule."""
    mask = np.zeros(param_count(spec), dtype=bool)
    for f in circuit_factors(spec, np.zeros(param_count(spec))):
        if f.param is not None and f.shift_ok:
            mask[f.param] = True
    return mask


def expectation_gradient(
    spec: AnsatzSpec,
    theta: np.ndarray,
    psi_in: np.ndarray,
    obs: Observable | Sequence[Observable],
) -> np.ndarray:
    """Exact gradient of sum_j xi_j <O_j> with respect to every angle."""
    return expectation_gradient_batch(spec, theta, np.asarray(psi_in)[None, :], obs)[0]


def expectation_gradient_batch(
    spec: AnsatzSpec,
    theta: np.ndarray,
    states: np.ndarray,
    obs: Observable | Sequence[Observable],
) -> np.ndarray:
    """Row i holds the gradient of the observable sum for state i.

    Forward/backward sweep over the gate sequence: with psi_k the state
    after gate k and phi_k the adjoint-propagated measured state, the
    derivative for the angle of gate k is Im <phi_k | gen_k | psi_k>.
    """
    states = np.asarray(states)
    if states.shape[1] != spec.dim:
        raise ValueError(f"state dimension {states.shape[1]} != 2^n = {spec.dim}")
    o = _combined_matrix(obs)
    factors = circuit_factors(spec, theta)
    fwd = np.ascontiguousarray(states.T, dtype=complex)  # columns are states
    stack = [fwd]
    for f in factors:
        fwd = f.matrix @ fwd
        stack.append(fwd)
    bwd = o @ stack[-1]
    grads = np.zeros((states.shape[0], param_count(spec)))
    for k in range(len(factors) - 1, -1, -1):
        f = factors[k]
        if f.param is not None:
            vals = np.einsum("di,di->i", bwd.conj(), f.generator @ stack[k + 1])
            grads[:, f.param] += np.imag(vals)
        bwd = f.matrix.conj().T @ bwd
    return grads


def shift_rule_gradient(
    spec: AnsatzSpec,
    theta: np.ndarray,
    psi_in: np.ndarray,
    obs: Observable | Sequence[Observable],
) -> tuple[np.ndarray, np.ndarray]:
    """Shift-rule gradient and its eligibility mask.

    Entries outside the mask (controlled-rotation angles) are left at zero;
    use the product-rule gradient for those.
    """
    theta = _check_len(spec, theta)
    psi_in = np.asarray(psi_in)
    o = _combined_matrix(obs)
    mask = shift_eligible(spec)
    grads = np.zeros(theta.shape[0])

    def value(t: np.ndarray) -> float:
        out = build_unitary(spec, t) @ psi_in
        return float(np.real(np.vdot(out, o @ out)))

    for p in np.nonzero(mask)[0]:
        shifted = theta.copy()
        shifted[p] = theta[p] + np.pi / 2
        plus = value(shifted)
        shifted[p] = theta[p] - np.pi / 2
        minus = value(shifted)
        grads[p] = 0.5 * (plus - minus)
    return grads, mask


def random_params(spec: AnsatzSpec, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. uniform angles on [0, 2 pi)."""
    return rng.uniform(0.0, 2.0 * np.pi, size=param_count(spec))


def unitarity_defect(u: np.ndarray) -> float:
    """||U^H U - I||_F, handy for tests and validation."""
    u = np.asarray(u)
    return frobenius_norm(u.conj().T @ u - np.eye(u.shape[0]))
