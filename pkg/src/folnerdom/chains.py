"""Envelope chains: the E_n recursion, the measure omega, and manifests.

A chain bundles the Folner subsequence F_n, the envelopes

    E_1 = F_1,   E_n = (E_{n-1}^{N(n)-2})^{-1} F_n (E_{n-1}^{N(n)-2})^{-1},

and the sub-probability measure omega = sum_{n<=K} t_n u_{E_n} truncated at
depth K (total mass 1 - r_{K+1}; renormalizing would silently change the
weights, and every finite-n certificate only uses indices <= n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import SizeCapExceeded
from .groups import Group, Lamplighter, generated_closure
from .measures import FinSupMeasure, mix
from .sets import (
    FiniteSubset,
    interior_bilateral,
    inverse_set,
    is_symmetric_with_identity,
    power,
    product,
)
from .schedules import Schedule, fn_size, ftilde_size


def _lamp_subsets(n: int) -> list[frozenset]:
    rng = range(n + 1)
    out = [frozenset()]
    for r in rng:
        out.extend(frozenset(c) for c in combinations(rng, r + 1))
    return out


def lamplighter_folner(n: int, cap: int | None = None) -> tuple[FiniteSubset, FiniteSubset]:
    """(F~_n, F_n) for the lamplighter group.

    F~_n = {(t, K) : t in [0,n], K subset [0,n]} is right-Folner only;
    F_n = F~_n^{-1} F~_n = {(t'-t, -t+K)} is two-sided, symmetric, and
    contains the identity.  Built by direct parametrization, never by the
    |F~_n|^2 pairwise product.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    for name, size in (("F~_n", ftilde_size(n)), ("F_n", fn_size(n))):
        if cap is not None and size > cap:
            raise SizeCapExceeded(f"lamplighter {name}", size, cap)
    G = Lamplighter()
    rng = range(n + 1)
    subs = _lamp_subsets(n)
    ftilde = FiniteSubset.of(G, ((t, K) for t in rng for K in subs))
    big = set()
    for t in rng:
        shifted = [frozenset(k - t for k in K) for K in subs]
        for tp in rng:
            u = tp - t
            for L in shifted:
                big.add((u, L))
    return ftilde, FiniteSubset(G, frozenset(big))


@dataclass(frozen=True)
class Chain:
    """A built chain: Folner sets, envelopes, schedule, and omega."""

    group: Group
    folner: list[FiniteSubset]  # F_1 .. F_K
    envelopes: list[FiniteSubset]  # E_1 .. E_K
    schedule: Schedule
    omega: FinSupMeasure

    @property
    def depth(self) -> int:
        return len(self.envelopes)

    def level(self, n: int) -> tuple[FiniteSubset, FiniteSubset]:
        if not 1 <= n <= self.depth:
            raise ValueError(f"level {n} outside chain depth {self.depth}")
        return self.folner[n - 1], self.envelopes[n - 1]


def build_E_sequence(
    Fsub: list[FiniteSubset],
    sched: Schedule,
    depth: int | None = None,
    cap: int | None = None,
) -> list[FiniteSubset]:
    """E_1 = F_1, then the padded-product recursion level by level."""
    depth = len(Fsub) if depth is None else depth
    if not 1 <= depth <= len(Fsub):
        raise ValueError("depth must be between 1 and len(Fsub)")
    if not is_symmetric_with_identity(Fsub[0]):
        raise ValueError("F_1 must be symmetric and contain the identity")
    E = [Fsub[0]]
    for n in range(2, depth + 1):
        Nn = sched.N(n)
        if Nn <= 2:
            raise ValueError("N(n) must exceed 2")
        try:
            pad = inverse_set(power(E[-1], Nn - 2, cap))
            En = product(product(pad, Fsub[n - 1], cap), pad, cap)
        except SizeCapExceeded as exc:
            raise SizeCapExceeded(f"E_{n} ({exc.what})", exc.needed, exc.cap) from exc
        E.append(En)
    return E


def build_omega(E: list[FiniteSubset], sched: Schedule) -> FinSupMeasure:
    """omega = sum_{n<=K} t_n * uniform(E_n); total mass 1 - r_{K+1}."""
    if not E:
        raise ValueError("need at least one envelope")
    return mix([(sched.t(n), FinSupMeasure.uniform(En)) for n, En in enumerate(E, 1)])


def build_chain(
    Fsub: list[FiniteSubset],
    sched: Schedule,
    depth: int | None = None,
    cap: int | None = None,
) -> Chain:
    depth = len(Fsub) if depth is None else depth
    E = build_E_sequence(Fsub, sched, depth, cap)
    return Chain(Fsub[0].group, Fsub[:depth], E, sched, build_omega(E, sched))


def check_chain_identities(chain: Chain, cap: int | None = None) -> None:
    """Raise AssertionError unless the structural chain identities hold.

    For every built level: e in E_n = E_n^{-1} subset E_{n+1}, F_n subset
    E_n, and F_n subset iota(P^{-1}, P^{-1}, E_n) with P = E_{n-1}^{N(n)-2}
    -- the containment that makes every g in F_n absorb the padded
    convolutions.  (Equality with the interior holds for interval chains
    on Z but not in general: the level-2 lamplighter interior is strictly
    larger than F_2.)
    """
    for n in range(1, chain.depth + 1):
        Fn, En = chain.level(n)
        assert is_symmetric_with_identity(En), f"E_{n} not symmetric with e"
        assert Fn.issubset(En), f"F_{n} not inside E_{n}"
        if n < chain.depth:
            assert En.issubset(chain.envelopes[n]), f"E_{n} not inside E_{n+1}"
        if n >= 2:
            pad = inverse_set(power(chain.envelopes[n - 2], chain.schedule.N(n) - 2, cap))
            inner = interior_bilateral(pad, pad, En)
            assert Fn.issubset(inner), f"interior containment fails at level {n}"


def support_generates(chain: Chain, target: FiniteSubset, max_size: int) -> bool:
    """True if the BFS closure of supp(omega) reaches ``target``.

    Finite stand-in for nondegeneracy: the group generated by the support
    of omega must be everything, otherwise the averages could miss F_n
    entirely (EF_n disjoint from F_n for E outside the closure).
    """
    supp = chain.omega.support()
    for closure in generated_closure(chain.group, supp.elements, max_size):
        if target.elements <= closure:
            return True
    return False


def _rat(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def chain_manifest(chain: Chain, set_files: dict[str, str] | None = None) -> str:
    """JSON manifest: per level |F_n|, |E_n|, N(n), t_n, r_n, plus file refs."""
    sched = chain.schedule
    levels = []
    for n in range(1, chain.depth + 1):
        Fn, En = chain.level(n)
        levels.append(
            {
                "n": n,
                "card_F": len(Fn),
                "card_E": len(En),
                "N": sched.N(n),
                "t": _rat(sched.t(n)),
                "r": _rat(sched.r(n)),
            }
        )
    doc = {
        "schema": 1,
        "group": chain.group.token(),
        "depth": chain.depth,
        "tail_base": sched.tail_base,
        "length_base": sched.length_base,
        "omega_total_mass": _rat(chain.omega.total_mass),
        "levels": levels,
        "set_files": set_files or {},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
