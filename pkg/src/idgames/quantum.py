"""Quantum strategies: Born-rule boxes, explicit constructions and seesaw.

A strategy holds a joint state on ``C^d1 (x) ... (x) C^dn`` (unit vector or
density matrix) and, per player and input, a list of effects summing to the
identity.  For binary outcomes an observable ``A`` corresponds to effects
``((I + A)/2, (I - A)/2)``: outcome 0 is the ``+1`` eigenspace.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .game import Box, GameFunction, Scenario
from .linalg import jacobi_eigh, positive_projector

__all__ = [
    "QuantumStrategy",
    "SeesawResult",
    "born_box",
    "quantum_value",
    "relabel_strategy",
    "addition_strategy",
    "tripartite_strategy",
    "highest_sdp_strategy",
    "seesaw",
    "seesaw_fixed_state",
    "phi_plus",
    "singlet",
    "PAULI",
    "Correlator",
    "BellExpression",
    "chsh",
    "i_add",
    "i_facet",
    "bell_functional_value",
]

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

HERMITIAN_TOL = 1e-10


def phi_plus(d: int = 2) -> np.ndarray:
    """Maximally entangled ``sum_i |ii> / sqrt(d)``."""
    v = np.zeros(d * d, dtype=complex)
    v[[i * d + i for i in range(d)]] = 1 / math.sqrt(d)
    return v


def singlet() -> np.ndarray:
    return np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


def _effects_from_observable(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = A.shape[0]
    Id = np.eye(d, dtype=complex)
    return (Id + A) / 2, (Id - A) / 2


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    dims: tuple[int, ...]
    state: np.ndarray
    measurements: tuple[tuple[tuple[np.ndarray, ...], ...], ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        D = math.prod(dims)
        st = np.asarray(self.state, dtype=complex)
        if st.shape not in ((D,), (D, D)):
            raise ValueError(f"state shape {st.shape} does not match total dimension {D}")
        object.__setattr__(self, "state", st)
        meas = tuple(tuple(tuple(np.asarray(E, dtype=complex) for E in effects)
                           for effects in player) for player in self.measurements)
        object.__setattr__(self, "measurements", meas)
        if len(meas) != len(dims):
            raise ValueError("one measurement list per player is required")
        outs = {len(effects) for player in meas for effects in player}
        if len(outs) != 1:
            raise ValueError("all measurements must have the same number of outcomes")
        self.validate()

    @classmethod
    def from_observables(cls, state, observables: Sequence[Sequence[np.ndarray]]) -> QuantumStrategy:
        dims = tuple(obs[0].shape[0] for obs in observables)
        meas = tuple(tuple(_effects_from_observable(np.asarray(A, dtype=complex)) for A in obs)
                     for obs in observables)
        return cls(dims, state, meas)

    @property
    def scenario(self) -> Scenario:
        return Scenario(len(self.dims), tuple(len(p) for p in self.measurements),
                        len(self.measurements[0][0]))

    @property
    def density(self) -> np.ndarray:
        if self.state.ndim == 1:
            return np.outer(self.state, self.state.conj())
        return self.state

    def validate(self, tol: float = HERMITIAN_TOL):
        rho = self.density
        if not np.allclose(rho, rho.conj().T, atol=tol):
            raise ValueError("state is not Hermitian")
        if abs(np.trace(rho).real - 1) > tol:
            raise ValueError("state does not have unit trace")
        if np.linalg.eigvalsh(rho).min() < -tol:
            raise ValueError("state is not positive semidefinite")
        for k, player in enumerate(self.measurements):
            Id = np.eye(self.dims[k])
            for effects in player:
                for E in effects:
                    if E.shape != (self.dims[k],) * 2:
                        raise ValueError("effect has the wrong dimension")
                    if not np.allclose(E, E.conj().T, atol=tol):
                        raise ValueError("effect is not Hermitian")
                    if np.linalg.eigvalsh(E).min() < -tol:
                        raise ValueError("effect is not positive semidefinite")
                if not np.allclose(sum(effects), Id, atol=tol):
                    raise ValueError("effects do not sum to the identity")

    def effect_stack(self, k: int) -> np.ndarray:
        """Array ``[x, y, i, j]`` of player ``k``'s effects."""
        return np.array([[E for E in effects] for effects in self.measurements[k]])

    def to_document(self) -> dict:
        def cm(a):
            a = np.asarray(a)
            return {"re": a.real.tolist(), "im": a.imag.tolist()}

        return {
            "dims": list(self.dims),
            "state": cm(self.state),
            "measurements": [[[cm(E) for E in effects] for effects in player]
                             for player in self.measurements],
        }

    @classmethod
    def from_document(cls, doc: dict) -> QuantumStrategy:
        def mc(d):
            return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)

        return cls(tuple(doc["dims"]), mc(doc["state"]),
                   tuple(tuple(tuple(mc(E) for E in effects) for effects in player)
                         for player in doc["measurements"]))

    def dumps(self) -> str:
        return json.dumps(self.to_document())


def _letters(n: int) -> tuple[str, str]:
    ket = string.ascii_lowercase[:n]
    bra = string.ascii_uppercase[:n]
    return ket, bra


def born_box(qs: QuantumStrategy) -> Box:
    """``p(y|x) = tr(rho E^1_{x1,y1} (x) ... (x) E^n_{xn,yn})`` as a float box."""
    s = qs.scenario
    n = len(qs.dims)
    rho = qs.density.reshape(qs.dims + qs.dims)
    ket, bra = _letters(n)
    # rho[ket, bra] * prod_k E_k[x_k, y_k, bra_k, ket_k]
    xs = string.ascii_lowercase[n:2 * n]
    ys = string.ascii_uppercase[n:2 * n]
    terms = [ket + bra] + [xs[k] + ys[k] + bra[k] + ket[k] for k in range(n)]
    out = "".join(reversed(xs)) + "".join(reversed(ys))
    p = np.einsum(",".join(terms) + "->" + out, rho, *[qs.effect_stack(k) for k in range(n)])
    # reversed axes make the C-order flattening match player-1-least-significant indices
    p = np.real(p).reshape(s.n_inputs, s.n_outputs)
    return Box(s, p, exact=False)


def quantum_value(f: GameFunction, qs: QuantumStrategy) -> float:
    b = born_box(qs)
    if b.scenario != f.scenario:
        raise ValueError("strategy and game scenarios differ")
    return float(b.entries[np.arange(f.scenario.n_inputs), f.as_array()].mean())


# -- explicit strategies ---------------------------------------------------

def relabel_strategy(g, qs: QuantumStrategy) -> QuantumStrategy:
    """Strategy for ``apply(g, f)`` that wins exactly as often as ``qs`` wins ``f``.

    New player ``k`` holds old player ``tau[k]``'s subsystem, measures it at the
    relabelled input and maps the outcome through the output relabelling.
    """
    s = qs.scenario
    if g.scenario != s:
        raise ValueError("element and strategy live in different scenarios")
    tau = g.player_perm
    meas = []
    for k in range(s.n_players):
        old = tau[k]
        per_input = []
        for xk in range(s.inputs[k]):
            sigma = g.output_maps[old][xk]
            effects = qs.measurements[old][g.input_perms[old][xk]]
            relabelled = [None] * s.outputs
            for o, E in enumerate(effects):
                relabelled[sigma[o]] = E
            per_input.append(tuple(relabelled))
        meas.append(tuple(per_input))
    dims = tuple(qs.dims[t] for t in tau)
    n = s.n_players
    if qs.state.ndim == 1:
        state = qs.state.reshape(qs.dims).transpose(tau).reshape(-1)
    else:
        axes = list(tau) + [n + t for t in tau]
        state = qs.state.reshape(qs.dims * 2).transpose(axes).reshape(math.prod(dims), -1)
    return QuantumStrategy(dims, state, tuple(meas))


def addition_strategy() -> QuantumStrategy:
    """Maximally entangled qubits with co-planar observables for the addition game."""
    r = 1 / math.sqrt(2)
    A0, A1 = SX, SZ
    B0, B1 = (SX - SZ) * r, (-SX - SZ) * r
    return QuantumStrategy.from_observables(
        phi_plus(), [[A0, A1, -A0, -A1], [B0, B1, -B0, -B1]])


def _chsh_pair():
    """Observables winning ``a xor b = s and t`` with probability cos^2(pi/8) on |phi+>."""
    r = 1 / math.sqrt(2)
    alice = (SZ, SX)
    bob = ((SZ + SX) * r, (SZ - SX) * r)
    return alice, bob


def tripartite_strategy() -> QuantumStrategy:
    """CHSH on players 1 and 2 for the complemented inputs; player 3 answers 0."""
    alice, bob = _chsh_pair()
    one = np.ones((1, 1), dtype=complex)
    zero = np.zeros((1, 1), dtype=complex)
    meas = (
        tuple(_effects_from_observable(alice[1 - x]) for x in range(2)),
        tuple(_effects_from_observable(bob[1 - x]) for x in range(2)),
        ((one, zero), (one, zero)),
    )
    return QuantumStrategy((2, 2, 1), phi_plus(), meas)


def highest_sdp_strategy() -> QuantumStrategy:
    """Input 0 answers 0; other inputs are relabelled into a CHSH pair.

    Player 1 maps inputs 1, 2 to CHSH settings 1, 0 and player 2 maps them to
    0, 1.
    """
    alice, bob = _chsh_pair()
    det0 = (I2.copy(), np.zeros((2, 2), dtype=complex))
    meas = (
        (det0, _effects_from_observable(alice[1]), _effects_from_observable(alice[0])),
        (det0, _effects_from_observable(bob[0]), _effects_from_observable(bob[1])),
    )
    return QuantumStrategy((2, 2), phi_plus(), meas)


# -- Bell functionals ------------------------------------------------------

@dataclass(frozen=True)
class Correlator:
    """``<A_i B_m>`` (both set), ``<A_i>`` (``m`` None) or ``<B_m>`` (``i`` None)."""

    i: int | None
    m: int | None


@dataclass(frozen=True)
class BellExpression:
    terms: tuple[tuple[float, Correlator], ...]
    constant: float = 0.0
    divisor: float = 1.0

    def __add__(self, other: BellExpression) -> BellExpression:
        return BellExpression(self.terms + other.terms, self.constant + other.constant, 1.0)

    def scaled(self, c: float) -> BellExpression:
        return BellExpression(tuple((c * a, t) for a, t in self.terms), c * self.constant, 1.0)

    def evaluate(self, box: Box) -> float:
        s = box.scenario
        if s.n_players != 2 or s.outputs != 2:
            raise ValueError("correlator expressions need two players with binary outputs")
        p = np.asarray(box.entries, dtype=float).reshape(s.inputs[1], s.inputs[0], 2, 2)
        # p[x2, x1, y2, y1]
        total = self.constant
        for coef, t in self.terms:
            if t.i is not None and not 0 <= t.i < s.inputs[0]:
                raise IndexError(f"Alice setting {t.i} out of range")
            if t.m is not None and not 0 <= t.m < s.inputs[1]:
                raise IndexError(f"Bob setting {t.m} out of range")
            if t.i is not None and t.m is not None:
                q = p[t.m, t.i]
                val = q[0, 0] + q[1, 1] - q[0, 1] - q[1, 0]
            elif t.i is not None:
                q = p[0, t.i].sum(axis=0)  # marginal of y1 at x2 = 0
                val = q[0] - q[1]
            else:
                q = p[t.m, 0].sum(axis=1)
                val = q[0] - q[1]
            total += coef * val
        return float(total / self.divisor)


def corr(i: int, m: int, coef: float = 1.0) -> BellExpression:
    return BellExpression(((coef, Correlator(i, m)),))


def marg_a(i: int, coef: float = 1.0) -> BellExpression:
    return BellExpression(((coef, Correlator(i, None)),))


def chsh(i: int, j: int, m: int, n: int) -> BellExpression:
    """``-<A_i B_m> + <A_i B_n> + <A_j B_m> + <A_j B_n>``."""
    return corr(i, m, -1) + corr(i, n) + corr(j, m) + corr(j, n)


def _normalised(expr: BellExpression, constant: float, divisor: float) -> BellExpression:
    return BellExpression(expr.terms, expr.constant + constant, divisor)


def i_add() -> BellExpression:
    e = (chsh(0, 1, 0, 1).scaled(-1) + chsh(2, 3, 0, 1) + chsh(0, 1, 2, 3)
         + chsh(2, 3, 2, 3).scaled(-1))
    return _normalised(e, 16, 64)


def i_facet() -> BellExpression:
    e = (chsh(1, 0, 1, 0).scaled(-1) + chsh(1, 0, 3, 2) + chsh(2, 3, 1, 0) + chsh(2, 3, 3, 2)
         + corr(3, 0, -2) + corr(3, 2, -2) + marg_a(2, 2) + marg_a(3, 2))
    return _normalised(e, 16, 64)


def bell_functional_value(expr: BellExpression, qs_or_box) -> float:
    box = born_box(qs_or_box) if isinstance(qs_or_box, QuantumStrategy) else qs_or_box
    return expr.evaluate(box)


# -- seesaw ----------------------------------------------------------------

@dataclass
class SeesawResult:
    value: float
    strategy: QuantumStrategy
    converged: bool
    iterations: int
    restart: int
    history: list[float] = field(default_factory=list, repr=False)

    def __iter__(self):
        yield self.value
        yield self.strategy


class _Game:
    """Static per-game data for the seesaw updates."""

    def __init__(self, f: GameFunction, dims: tuple[int, ...]):
        s = f.scenario
        if s.outputs != 2:
            raise ValueError("seesaw supports binary outputs only")
        if len(dims) != s.n_players or any(d < 1 for d in dims):
            raise ValueError("one positive dimension per player is required")
        self.s, self.dims, self.n = s, dims, s.n_players
        self.w = 1.0 / s.n_inputs
        xd = s.input_digits()
        yd = np.stack([f.outputs_of(k) for k in range(self.n)], axis=1)
        self.xd, self.yd = xd, yd
        # coefficient tensors: for player k, C[a, x_j, y_j (j != k)] collects
        # +w when the required own output is 0 and -w when it is 1
        self.coef = []
        for k in range(self.n):
            shape = [s.inputs[k]]
            for j in range(self.n):
                if j != k:
                    shape += [s.inputs[j], 2]
            C = np.zeros(shape)
            for x in range(s.n_inputs):
                idx = [xd[x, k]]
                for j in range(self.n):
                    if j != k:
                        idx += [xd[x, j], yd[x, j]]
                C[tuple(idx)] += self.w if yd[x, k] == 0 else -self.w
            self.coef.append(C)
        ket, bra = _letters(self.n)
        self._reduce = []
        for k in range(self.n):
            others = [j for j in range(self.n) if j != k]
            xs = string.ascii_lowercase[self.n:self.n + len(others)]
            ys = string.ascii_uppercase[self.n:self.n + len(others)]
            terms = [ket + bra] + [xs[t] + ys[t] + bra[j] + ket[j] for t, j in enumerate(others)]
            own_ket = ket[k]
            own_bra = bra[k]
            # substitute the own bra/ket letters so they survive as the output matrix indices
            rho_term = ket.replace(own_ket, "Y") + bra.replace(own_bra, "Z")
            terms[0] = rho_term
            cidx = "p" + "".join(xs[t] + ys[t] for t in range(len(others)))
            spec = ",".join([cidx] + terms) + "->pYZ"
            self._reduce.append(spec)
        self._paths: dict[int, list] = {}
        rows = string.ascii_lowercase[:self.n]
        cols = string.ascii_uppercase[:self.n]
        self._kron_spec = ",".join("q" + rows[k] + cols[k] for k in range(self.n)) + "->" + rows + cols

    def player_operators(self, k: int, rho: np.ndarray, stacks) -> np.ndarray:
        """``M[a]`` such that the value equals ``const + tr(E^k_{a,0} M[a])``."""
        others = [stacks[j] for j in range(self.n) if j != k]
        operands = (self.coef[k], rho, *others)
        path = self._paths.get(k)
        if path is None:
            path = np.einsum_path(self._reduce[k], *operands, optimize="optimal")[0]
            self._paths[k] = path
        return np.einsum(self._reduce[k], *operands, optimize=path)

    def game_operator(self, stacks) -> np.ndarray:
        D = math.prod(self.dims)
        # effect applied by each player on each joint input, shape (J, d_k, d_k)
        picked = [stacks[k][self.xd[:, k], self.yd[:, k]] for k in range(self.n)]
        W = np.einsum(self._kron_spec, *picked, optimize=False)
        return W.reshape(D, D) * self.w


def _random_projector(d: int, rng: np.random.Generator, real: bool) -> np.ndarray:
    X = rng.normal(size=(d, d))
    if not real:
        X = X + 1j * rng.normal(size=(d, d))
    H = X + X.conj().T
    return positive_projector(H)


def _random_state(D: int, rng: np.random.Generator, real: bool) -> np.ndarray:
    v = rng.normal(size=D).astype(complex)
    if not real:
        v += 1j * rng.normal(size=D)
    return v / np.linalg.norm(v)


def _stacks_from(P: list[list[np.ndarray]]) -> list[np.ndarray]:
    out = []
    for proj in P:
        d = proj[0].shape[0]
        Id = np.eye(d, dtype=complex)
        out.append(np.array([[E, Id - E] for E in proj]))
    return out


def _single_run(game: _Game, rng, fixed_rho, real, tol, max_iter, eigh, check_monotone):
    s, dims, n = game.s, game.dims, game.n
    P = [[_random_projector(dims[k], rng, real) for _ in range(s.inputs[k])] for k in range(n)]
    if fixed_rho is None:
        psi = _random_state(math.prod(dims), rng, real)
        rho = np.outer(psi, psi.conj())
    else:
        rho = fixed_rho
    rho_t = rho.reshape(dims + dims)
    stacks = _stacks_from(P)
    W = game.game_operator(stacks)
    value = float(np.real(np.trace(rho @ W)))
    history = [value]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        for k in range(n):
            M = game.player_operators(k, rho_t, stacks)
            H = (M + M.conj().transpose(0, 2, 1)) / 2
            if real:
                H = H.real.astype(complex)
            if eigh is np.linalg.eigh:
                # one batched call for all inputs of player k
                w, V = np.linalg.eigh(H)
                keep = V * (w > 0)[:, None, :]
                P[k] = list(keep @ keep.conj().transpose(0, 2, 1))
            else:
                P[k] = [positive_projector(h, eigh) for h in H]
            stacks = _stacks_from(P)
        W = game.game_operator(stacks)
        if fixed_rho is None:
            wv, V = eigh((W + W.conj().T) / 2)
            psi = V[:, -1]
            if real:
                psi = psi.real.astype(complex)
                psi /= np.linalg.norm(psi)
            rho = np.outer(psi, psi.conj())
            rho_t = rho.reshape(dims + dims)
        new = float(np.real(np.trace(rho @ W)))
        if check_monotone and new < value - 1e-9:
            raise AssertionError(f"seesaw decreased from {value} to {new}")
        history.append(new)
        gain = new - value
        value = max(value, new)
        if gain < tol:
            converged = True
            break
    meas = tuple(tuple((st[a, 0], st[a, 1]) for a in range(st.shape[0])) for st in stacks)
    state = psi if fixed_rho is None else fixed_rho
    return value, QuantumStrategy(dims, state, meas), converged, it, history


def _as_density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    return np.outer(state, state.conj()) if state.ndim == 1 else state


def seesaw(
    f: GameFunction,
    dims: Sequence[int],
    restarts: int = 10,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    real: bool = False,
    state: np.ndarray | None = None,
    eigh=np.linalg.eigh,
    check_monotone: bool = True,
) -> SeesawResult:
    """Best value over ``restarts`` runs of alternating best responses.

    Each iteration replaces every measurement by the positive-eigenspace
    projector of its conditional payoff operator and then (unless ``state`` is
    fixed) the state by the top eigenvector of the game operator.  Restart
    ``r`` draws from its own child of ``SeedSequence(seed)``, so results do not
    depend on evaluation order; ties keep the lowest restart index.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    dims = tuple(int(d) for d in dims)
    game = _Game(f, dims)
    fixed = None if state is None else _as_density(state)
    if fixed is not None and fixed.shape != (math.prod(dims),) * 2:
        raise ValueError("fixed state does not match the dimensions")
    best = None
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(child)
        value, qs, conv, its, hist = _single_run(game, rng, fixed, real, tol, max_iter, eigh,
                                                 check_monotone)
        if best is None or value > best.value:
            best = SeesawResult(value, qs, conv, its, r, hist)
    return best


def seesaw_fixed_state(f: GameFunction, state: np.ndarray, dims: Sequence[int] | None = None,
                       **kwargs) -> SeesawResult:
    """Seesaw over measurements only, with the shared state held fixed."""
    state = np.asarray(state, dtype=complex)
    if dims is None:
        D = state.shape[0]
        d = round(D ** (1 / f.scenario.n_players))
        if d ** f.scenario.n_players != D:
            raise ValueError("cannot infer equal local dimensions; pass dims")
        dims = (d,) * f.scenario.n_players
    return seesaw(f, dims, state=state, **kwargs)


def jacobi_backend(M):
    return jacobi_eigh(M)
