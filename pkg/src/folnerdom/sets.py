"""Finite-subset algebra: products, interiors, Folner ratios, extraction.

All operations are pure; a FiniteSubset is an immutable wrapper around a
frozenset of group elements together with the group that owns the law.
Cardinality doubles as the counting Haar measure, which on a discrete
group is exact and bi-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .errors import SizeCapExceeded
from .groups import Group, group_from_token, require_same_group


@dataclass(frozen=True)
class FiniteSubset:
    group: Group
    elements: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, group: Group, elems: Iterable) -> "FiniteSubset":
        return cls(group, frozenset(elems))

    @classmethod
    def singleton(cls, group: Group, el) -> "FiniteSubset":
        return cls(group, frozenset((el,)))

    @classmethod
    def identity_set(cls, group: Group) -> "FiniteSubset":
        return cls(group, frozenset((group.identity,)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, el) -> bool:
        return el in self.elements

    @property
    def cardinality(self) -> int:
        """lambda(A) for the counting Haar measure."""
        return len(self.elements)

    def union(self, other: "FiniteSubset") -> "FiniteSubset":
        require_same_group(self.group, other.group)
        return FiniteSubset(self.group, self.elements | other.elements)

    def difference(self, other: "FiniteSubset") -> "FiniteSubset":
        require_same_group(self.group, other.group)
        return FiniteSubset(self.group, self.elements - other.elements)

    def issubset(self, other: "FiniteSubset") -> bool:
        require_same_group(self.group, other.group)
        return self.elements <= other.elements

    def sorted_encodings(self) -> list[bytes]:
        enc = self.group.encode
        return sorted(enc(a) for a in self.elements)

    def serialize(self) -> str:
        """Header with group token and cardinality, then sorted hex lines."""
        lines = [f"folnerdom-set {self.group.token()} {len(self)}"]
        lines.extend(e.hex() for e in self.sorted_encodings())
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "FiniteSubset":
        lines = text.strip().splitlines()
        magic, token, card = lines[0].split()
        if magic != "folnerdom-set":
            raise ValueError("not a folnerdom set listing")
        group = group_from_token(token)
        elems = frozenset(group.decode(bytes.fromhex(h)) for h in lines[1:])
        if len(elems) != int(card):
            raise ValueError("cardinality header mismatch")
        return cls(group, elems)


def _check_cap(what: str, needed: int, cap: int | None) -> None:
    if cap is not None and needed > cap:
        raise SizeCapExceeded(what, needed, cap)


def product(A: FiniteSubset, B: FiniteSubset, cap: int | None = None) -> FiniteSubset:
    """Pointwise set product {ab : a in A, b in B}."""
    require_same_group(A.group, B.group)
    mul = A.group.mul
    out = set()
    belems = list(B.elements)
    for a in A.elements:
        for b in belems:
            out.add(mul(a, b))
        if cap is not None and len(out) > cap:
            raise SizeCapExceeded("set product", len(out), cap)
    return FiniteSubset(A.group, frozenset(out))


def inverse_set(A: FiniteSubset) -> FiniteSubset:
    inv = A.group.inv
    return FiniteSubset(A.group, frozenset(inv(a) for a in A.elements))


def power(A: FiniteSubset, k: int, cap: int | None = None) -> FiniteSubset:
    """A^k by square-and-multiply on set products."""
    if k < 1:
        raise ValueError("exponent must be >= 1")
    result = None
    base = A
    while k:
        if k & 1:
            result = base if result is None else product(result, base, cap)
        k >>= 1
        if k:
            base = product(base, base, cap)
    return result


def symmetrize(A: FiniteSubset) -> FiniteSubset:
    """A U A^{-1} U {e}."""
    return FiniteSubset(
        A.group,
        A.elements | inverse_set(A).elements | {A.group.identity},
    )


def is_symmetric_with_identity(A: FiniteSubset) -> bool:
    return A.group.identity in A.elements and inverse_set(A).elements == A.elements


def interior_left(H: FiniteSubset, K: FiniteSubset) -> FiniteSubset:
    """{g in K : Hg subset K}, via incremental intersection with early exit."""
    require_same_group(H.group, K.group)
    mul = K.group.mul
    kel = K.elements
    current = kel
    for h in H.elements:
        current = frozenset(g for g in current if mul(h, g) in kel)
        if not current:
            break
    return FiniteSubset(K.group, current)


def interior_right(H: FiniteSubset, K: FiniteSubset) -> FiniteSubset:
    """{g in K : gH subset K}."""
    require_same_group(H.group, K.group)
    mul = K.group.mul
    kel = K.elements
    current = kel
    for h in H.elements:
        current = frozenset(g for g in current if mul(g, h) in kel)
        if not current:
            break
    return FiniteSubset(K.group, current)


def interior_bilateral(
    H1: FiniteSubset, H2: FiniteSubset, K: FiniteSubset
) -> FiniteSubset:
    """{g in K : H1 g H2 subset K}.

    Two intersection passes: first R = {y : y H2 subset K} as the
    intersection of right translates K h2^{-1}, then K intersected with
    the left translates h1^{-1} R; linear in |H1| + |H2| per element of K
    instead of the cubic definition scan.
    """
    require_same_group(H1.group, K.group)
    require_same_group(H2.group, K.group)
    if not H1.elements or not H2.elements:
        return K  # H1 g H2 is empty, hence vacuously inside K
    mul, inv = K.group.mul, K.group.inv
    kel = K.elements
    right: set | frozenset | None = None
    for h2 in H2.elements:
        h2i = inv(h2)
        translate = {mul(g, h2i) for g in kel}
        right = translate if right is None else right & translate
        if not right:
            break
    current = kel
    for h1 in H1.elements:
        h1i = inv(h1)
        current = current & {mul(h1i, y) for y in right}
        if not current:
            break
    return FiniteSubset(K.group, frozenset(current))


def folner_ratio(
    K1: FiniteSubset, F: FiniteSubset, K2: FiniteSubset, cap: int | None = None
) -> Fraction:
    """|K1 F K2 \\ F| / |F| as an exact rational; 0 means exact bi-invariance."""
    require_same_group(K1.group, F.group)
    require_same_group(K2.group, F.group)
    if len(F) == 0:
        raise ValueError("F must be nonempty")
    moved = product(product(K1, F, cap), K2, cap)
    return Fraction(len(moved.elements - F.elements), len(F))


def temperedness_constant(
    prefix: list[FiniteSubset], cap: int | None = None
) -> Fraction:
    """max_n |U_{i<n} F_i^{-1} F_n| / |F_n| over the given prefix."""
    if len(prefix) < 2:
        raise ValueError("need at least two sets")
    best = Fraction(0)
    for n in range(1, len(prefix)):
        Fn = prefix[n]
        if len(Fn) == 0:
            raise ValueError("empty Folner set in prefix")
        union: set = set()
        for Fi in prefix[:n]:
            union |= product(inverse_set(Fi), Fn, cap).elements
            _check_cap("temperedness union", len(union), cap)
        best = max(best, Fraction(len(union), len(Fn)))
    return best


@dataclass(frozen=True)
class ExtractionStep:
    k: int
    index: int
    folner_set: FiniteSubset
    envelope: FiniteSubset  # E_k
    ratio: Fraction  # |E_k \ F_{n_k}| / |F_{n_k}|


@dataclass(frozen=True)
class ExtractionResult:
    steps: list[ExtractionStep]
    status: str  # "ok" | "budget"
    best_ratio: Fraction | None = None  # best ratio seen on a failed step


def extract_subsequence(
    folner: Iterable[tuple[int, FiniteSubset]],
    N: Callable[[int], int],
    eps: Callable[[int], Fraction],
    depth: int,
    budget: int = 64,
    cap: int | None = None,
) -> ExtractionResult:
    """Pick a subsequence F_{n_k} whose envelopes E_k stay eps_k-close.

    ``folner`` yields (index, set) pairs with strictly increasing indices.
    Step 1 takes the first set as E_1 = F_{n_1}; for k >= 2 candidates are
    consumed until

        |E_k \\ F_{n_k}| / |F_{n_k}| < eps(k),
        E_k = (E_{k-1}^{N(k)-2})^{-1} F_{n_k} (E_{k-1}^{N(k)-2})^{-1},

    or ``budget`` candidates have been tried, in which case the result
    carries status "budget" and the best ratio found.  A success at step k
    guarantees |F_{n_k}| / |E_k| >= 1 / (1 + eps(k)).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    it = iter(folner)
    last_index = None
    try:
        idx, F1 = next(it)
    except StopIteration:
        raise ValueError("empty Folner stream") from None
    if not is_symmetric_with_identity(F1):
        raise ValueError("first Folner set must be symmetric and contain e")
    steps = [ExtractionStep(1, idx, F1, F1, Fraction(0))]
    last_index = idx
    E_prev = F1
    for k in range(2, depth + 1):
        Nk = N(k)
        if Nk <= 2:
            raise ValueError("N(k) must exceed 2 for k >= 2")
        pad = inverse_set(power(E_prev, Nk - 2, cap))
        eps_k = eps(k)
        best: Fraction | None = None
        found = None
        tried = 0
        for idx, Fc in it:
            if last_index is not None and idx <= last_index:
                raise ValueError("Folner indices must be strictly increasing")
            last_index = idx
            tried += 1
            Ek = product(product(pad, Fc, cap), pad, cap)
            ratio = Fraction(len(Ek.elements - Fc.elements), len(Fc))
            if best is None or ratio < best:
                best = ratio
            if ratio < eps_k:
                found = ExtractionStep(k, idx, Fc, Ek, ratio)
                break
            if tried >= budget:
                break
        if found is None:
            return ExtractionResult(steps, "budget", best)
        steps.append(found)
        E_prev = found.envelope
    return ExtractionResult(steps, "ok")
