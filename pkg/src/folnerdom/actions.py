"""Measure-preserving actions through finite quotients.

The action is the left regular representation of a finite quotient group
Q: states are the elements of Q, a group element g acts by s -> q(g)s
through the quotient homomorphism q, and observables are rational-valued
functions on Q or symmetric rational matrices conjugated by the
permutation matrices.  Ergodic averages over a Folner set push the
uniform measure through q first, so the cost scales with |Q|, not |F_n|.

Shipped quotients: Z^d -> (Z/m)^d, Heisenberg with entries mod m, and
lamplighter -> (Z/m) x| (Z/2)^m (position mod m, lamp parity per residue
class).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .chains import Chain
from .groups import Group, Heisenberg, Lamplighter, Zd
from .measures import FinSupMeasure
from .sets import FiniteSubset


# -- observables ----------------------------------------------------------


@dataclass(frozen=True)
class Observable:
    """A function on the state space (tuple) or a symmetric matrix."""

    kind: str  # "function" | "matrix"
    data: tuple  # tuple[Fraction] or tuple[tuple[Fraction]]

    @classmethod
    def function(cls, values: Iterable) -> "Observable":
        return cls("function", tuple(Fraction(v) for v in values))

    @classmethod
    def matrix(cls, rows: Iterable[Iterable]) -> "Observable":
        mat = tuple(tuple(Fraction(v) for v in row) for row in rows)
        if any(len(row) != len(mat) for row in mat):
            raise ValueError("matrix must be square")
        if any(mat[i][j] != mat[j][i] for i in range(len(mat)) for j in range(i)):
            raise ValueError("matrix must be symmetric")
        return cls("matrix", mat)

    @classmethod
    def indicator(cls, size: int, where: Iterable[int]) -> "Observable":
        hot = set(where)
        return cls.function(Fraction(1) if i in hot else Fraction(0) for i in range(size))

    @property
    def size(self) -> int:
        return len(self.data)

    def is_nonnegative(self) -> bool:
        if self.kind == "function":
            return all(v >= 0 for v in self.data)
        ok, _ = psd_check(self.data)
        return ok

    def add(self, other: "Observable") -> "Observable":
        self._like(other)
        if self.kind == "function":
            return Observable("function", tuple(a + b for a, b in zip(self.data, other.data)))
        return Observable(
            "matrix",
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            ),
        )

    def scale(self, c) -> "Observable":
        c = Fraction(c)
        if self.kind == "function":
            return Observable("function", tuple(c * v for v in self.data))
        return Observable("matrix", tuple(tuple(c * v for v in row) for row in self.data))

    def sub(self, other: "Observable") -> "Observable":
        return self.add(other.scale(-1))

    def square(self) -> "Observable":
        """x*x: pointwise square, or the matrix product (x symmetric)."""
        if self.kind == "function":
            return Observable("function", tuple(v * v for v in self.data))
        m = self.data
        n = len(m)
        return Observable(
            "matrix",
            tuple(
                tuple(sum(m[i][k] * m[k][j] for k in range(n)) for j in range(n))
                for i in range(n)
            ),
        )

    def sup_distance(self, other: "Observable") -> Fraction:
        self._like(other)
        if self.kind == "function":
            return max(abs(a - b) for a, b in zip(self.data, other.data))
        return max(
            abs(a - b)
            for ra, rb in zip(self.data, other.data)
            for a, b in zip(ra, rb)
        )

    def _like(self, other: "Observable") -> None:
        if self.kind != other.kind or self.size != other.size:
            raise ValueError("observable shape mismatch")


def psd_check(mat: Sequence[Sequence[Fraction]]) -> tuple[bool, Fraction]:
    """Exact PSD test by pivoted LDL^T on a symmetric rational matrix.

    Pivots on the largest remaining diagonal entry; a negative diagonal
    or a nonzero row under a zero diagonal disproves PSD.  Returns
    (verdict, proxy) where the proxy is the smallest pivot used (a crude
    stand-in for the least eigenvalue; 0 for singular PSD matrices).
    """
    n = len(mat)
    a = [[Fraction(mat[i][j]) for j in range(n)] for i in range(n)]
    live = list(range(n))
    min_pivot: Fraction | None = None
    while live:
        p = max(live, key=lambda i: a[i][i])
        piv = a[p][p]
        if piv < 0:
            return False, piv
        if piv == 0:
            for i in live:
                if any(a[i][j] != 0 for j in live):
                    return False, Fraction(0)
            return True, Fraction(0)
        min_pivot = piv if min_pivot is None else min(min_pivot, piv)
        live.remove(p)
        for i in live:
            f = a[i][p] / piv
            for j in live:
                a[i][j] -= f * a[p][j]
    return True, min_pivot if min_pivot is not None else Fraction(0)


def psd_order_holds(lo: Observable, hi: Observable) -> tuple[bool, Fraction]:
    """hi - lo >= 0: pointwise slack for functions, pivoted LDL^T for matrices."""
    diff = hi.sub(lo)
    if diff.kind == "function":
        slack = min(diff.data)
        return slack >= 0, slack
    return psd_check(diff.data)


# -- actions --------------------------------------------------------------


class FiniteAction:
    """Left regular representation of a finite quotient group.

    ``states`` are the quotient elements in a fixed canonical order;
    ``qmap`` is the quotient homomorphism; ``qmul``/``qinv`` implement the
    quotient law on states.  ``weights`` is the invariant probability on
    states (uniform by default, and uniform is always invariant for the
    regular representation).
    """

    def __init__(
        self,
        group: Group,
        states: Sequence,
        qmap: Callable,
        qmul: Callable,
        qinv: Callable,
        weights: Sequence[Fraction] | None = None,
    ):
        self.group = group
        self.states = tuple(states)
        self.index = {s: i for i, s in enumerate(self.states)}
        self.qmap = qmap
        self.qmul = qmul
        self.qinv = qinv
        m = len(self.states)
        self.weights = (
            tuple(Fraction(1, m) for _ in range(m))
            if weights is None
            else tuple(Fraction(w) for w in weights)
        )
        if sum(self.weights) != 1 or any(w < 0 for w in self.weights):
            raise ValueError("weights must be a probability vector")
        self._perm_cache: dict[int, tuple[int, ...]] = {}

    @property
    def size(self) -> int:
        return len(self.states)

    def state_of(self, g) -> int:
        return self.index[self.qmap(g)]

    def perm(self, qi: int) -> tuple[int, ...]:
        """Permutation s -> q*s of state indices, for quotient element qi."""
        cached = self._perm_cache.get(qi)
        if cached is None:
            q = self.states[qi]
            cached = tuple(self.index[self.qmul(q, s)] for s in self.states)
            self._perm_cache[qi] = cached
        return cached

    def act(self, qi: int, x: Observable) -> Observable:
        """alpha_q(x)(s) = x(q^{-1} s); matrices conjugated by the same
        permutation."""
        inv_qi = self.index[self.qinv(self.states[qi])]
        sigma_inv = self.perm(inv_qi)  # maps s -> q^{-1} s
        if x.kind == "function":
            return Observable("function", tuple(x.data[sigma_inv[s]] for s in range(self.size)))
        return Observable(
            "matrix",
            tuple(
                tuple(x.data[sigma_inv[i]][sigma_inv[j]] for j in range(self.size))
                for i in range(self.size)
            ),
        )

    def act_element(self, g, x: Observable) -> Observable:
        return self.act(self.state_of(g), x)

    # -- pushforwards and averages -------------------------------------

    def push_set(self, F: FiniteSubset) -> dict[int, Fraction]:
        """Pushforward of uniform(F) through the quotient map."""
        if len(F) == 0:
            raise ValueError("empty Folner set")
        counts: dict[int, int] = {}
        for g in F:
            i = self.state_of(g)
            counts[i] = counts.get(i, 0) + 1
        return {i: Fraction(c, len(F)) for i, c in counts.items()}

    def push_measure(self, mu: FinSupMeasure) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for g, mass in mu.items():
            i = self.state_of(g)
            out[i] = out.get(i, 0) + mass
        return out

    def apply_push(self, push: dict[int, Fraction], x: Observable) -> Observable:
        acc: Observable | None = None
        for qi, w in sorted(push.items()):
            term = self.act(qi, x).scale(w)
            acc = term if acc is None else acc.add(term)
        if acc is None:
            raise ValueError("empty pushforward")
        return acc

    def one_norm(self, x: Observable) -> Fraction:
        """tau(|x|): weighted absolute sum, or weighted trace norm proxy
        using the diagonal for matrices (only used for function probes)."""
        if x.kind != "function":
            raise ValueError("one_norm is defined for function observables")
        return sum(w * abs(v) for w, v in zip(self.weights, x.data))


def zd_mod_action(d: int, m: int) -> FiniteAction:
    """Z^d acting on (Z/m)^d by translation."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    states = []

    def build(prefix):
        if len(prefix) == d:
            states.append(tuple(prefix))
            return
        for v in range(m):
            build(prefix + [v])

    build([])
    qmap = lambda g: tuple(v % m for v in g)
    qmul = lambda a, b: tuple((x + y) % m for x, y in zip(a, b))
    qinv = lambda a: tuple((-x) % m for x in a)
    return FiniteAction(Zd(d), states, qmap, qmul, qinv)


def heisenberg_mod_action(m: int) -> FiniteAction:
    """Heisenberg group with all three entries reduced mod m."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    states = [(a, b, c) for a in range(m) for b in range(m) for c in range(m)]
    qmap = lambda g: (g[0] % m, g[1] % m, g[2] % m)
    qmul = lambda u, v: ((u[0] + v[0]) % m, (u[1] + v[1]) % m, (u[2] + v[2] + u[0] * v[1]) % m)
    qinv = lambda u: ((-u[0]) % m, (-u[1]) % m, (u[0] * u[1] - u[2]) % m)
    return FiniteAction(Heisenberg(), states, qmap, qmul, qinv)


def lamplighter_mod_action(m: int) -> FiniteAction:
    """Lamplighter onto (Z/m) x| (Z/2)^m: position mod m, lamp parity per
    residue class; the shift part rotates the parity vector."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    states = [(t, bits) for t in range(m) for bits in _all_bits(m)]

    def qmap(g):
        t, lamps = g
        par = [0] * m
        for k in lamps:
            par[k % m] ^= 1
        return (t % m, tuple(par))

    def qmul(u, v):
        t1, b1 = u
        t2, b2 = v
        rotated = tuple(b2[(i - t1) % m] for i in range(m))
        return ((t1 + t2) % m, tuple(x ^ y for x, y in zip(b1, rotated)))

    def qinv(u):
        t, b = u
        rotated = tuple(b[(i + t) % m] for i in range(m))
        return ((-t) % m, rotated)

    return FiniteAction(Lamplighter(), states, qmap, qmul, qinv)


def _all_bits(m: int) -> list[tuple[int, ...]]:
    return [tuple((k >> i) & 1 for i in range(m)) for k in range(2**m)]


# -- the operators of the ergodic theorem -----------------------------------


def ergodic_average(act: FiniteAction, Fn: FiniteSubset, x: Observable) -> Observable:
    """A_n(x) = (1/|F_n|) sum_{g in F_n} alpha_g(x), exactly."""
    return act.apply_push(act.push_set(Fn), x)


def markov_apply(act: FiniteAction, omega: FinSupMeasure, x: Observable) -> Observable:
    """T(x) = sum_g omega(g) alpha_g(x); contractive when mass <= 1."""
    return act.apply_push(act.push_measure(omega), x)


def cesaro_mean(
    act: FiniteAction, omega: FinSupMeasure, N: int, x: Observable
) -> Observable:
    """M_N(x) = (1/N) sum_{j<N} T^j(x), by iterating T on the quotient."""
    if N < 1:
        raise ValueError("N must be >= 1")
    push = act.push_measure(omega)
    total = x
    tj = x
    for _ in range(1, N):
        tj = act.apply_push(push, tj)
        total = total.add(tj)
    return total.scale(Fraction(1, N))


def invariant_projection(act: FiniteAction, x: Observable) -> Observable:
    """P(x): average of alpha_q(x) over the whole finite quotient group."""
    m = act.size
    return act.apply_push({i: Fraction(1, m) for i in range(m)}, x)


def check_dominance(
    act: FiniteAction,
    chain: Chain,
    n: int,
    x: Observable,
    c_emp: Fraction,
    cap: int | None = None,
) -> tuple[bool, Fraction]:
    """A_n(x) <= c_emp * M_{N(n)}(x), pointwise or in PSD order.

    Returns (verdict, minimal slack): the least entry of the difference
    for functions, the smallest factorization pivot for matrices.
    """
    if not x.is_nonnegative():
        raise ValueError("dominance transfer needs a positive observable")
    Fn, _ = chain.level(n)
    left = ergodic_average(act, Fn, x)
    right = cesaro_mean(act, chain.omega, chain.schedule.N(n), x).scale(c_emp)
    return psd_order_holds(left, right)


def convergence_diagnostics(
    act: FiniteAction,
    folner: Sequence[tuple[int, FiniteSubset]],
    x: Observable,
) -> list[tuple[int, Fraction]]:
    """Per index n: the sup distance between A_n(x) and P(x), exact."""
    proj = invariant_projection(act, x)
    return [(n, ergodic_average(act, F, x).sup_distance(proj)) for n, F in folner]


def weak11_probe(
    act: FiniteAction,
    folner: Sequence[tuple[int, FiniteSubset]],
    x: Observable,
    eps: Fraction,
    c_emp: Fraction,
) -> tuple[frozenset, Fraction, Fraction, bool]:
    """Finite-space weak (1,1) probe for the maximal function.

    e = {s : max_n A_n(x)(s) <= c_emp * eps}; returns (e, complement
    mass, the bound (4 c_emp / eps) ||x||_1, and whether mass <= bound).
    """
    if x.kind != "function":
        raise ValueError("weak (1,1) probe is for function observables")
    if any(v < 0 for v in x.data):
        raise ValueError("x must be nonnegative")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    maxed = [Fraction(0)] * act.size
    for _, F in folner:
        avg = ergodic_average(act, F, x)
        maxed = [max(a, b) for a, b in zip(maxed, avg.data)]
    good = frozenset(s for s, v in enumerate(maxed) if v <= c_emp * eps)
    comp_mass = sum(act.weights[s] for s in range(act.size) if s not in good)
    bound = 4 * c_emp / eps * act.one_norm(x)
    return good, Fraction(comp_mass), bound, comp_mass <= bound


def kadison_check(
    act: FiniteAction, Fn: FiniteSubset, x: Observable
) -> tuple[bool, Fraction]:
    """A_n(x)*A_n(x) <= A_n(x*x) in PSD order (A_n is unital positive)."""
    ax = ergodic_average(act, Fn, x)
    return psd_order_holds(ax.square(), ergodic_average(act, Fn, x.square()))
