"""Exact element algebra for three discrete amenable groups.

Elements are plain hashable Python values; the group object owns the law:

* ``Zd(d)``       -- tuples of ``d`` ints, componentwise addition;
* ``Heisenberg()``-- int triples ``(a, b, c)`` for upper-unitriangular
  matrices, ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')``;
* ``Lamplighter()`` -- pairs ``(t, lamps)`` with ``lamps`` a frozenset of
  ints, ``(t1,K1)(t2,K2) = (t1+t2, K1 ^ (t1+K2))``.

Every element has a canonical byte encoding (tag byte, then signed
varints; lamp sets length-prefixed and sorted ascending) which is
injective and is used as the serialization key and the deterministic
tie-break order everywhere downstream.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import GroupMismatchError, SizeCapExceeded

_TAG_ZD = 0x01
_TAG_HEISENBERG = 0x02
_TAG_LAMPLIGHTER = 0x03


def _write_svarint(out: bytearray, n: int) -> None:
    # zigzag, then base-128 little-endian
    z = n << 1 if n >= 0 else (-n << 1) - 1
    while True:
        b = z & 0x7F
        z >>= 7
        if z:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def _read_svarint(data: bytes, pos: int) -> tuple[int, int]:
    z = 0
    shift = 0
    while True:
        b = data[pos]
        pos += 1
        z |= (b & 0x7F) << shift
        shift += 7
        if not b & 0x80:
            break
    return (z >> 1 if not z & 1 else -((z + 1) >> 1)), pos


class Group:
    """Base class: element algebra plus a symmetric generating set."""

    kind: str
    identity: object
    generators: tuple

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def encode(self, a) -> bytes:
        raise NotImplementedError

    def decode(self, data: bytes):
        el, pos = self._decode_at(data, 0)
        if pos != len(data):
            raise ValueError("trailing bytes in element encoding")
        return el

    def _decode_at(self, data: bytes, pos: int):
        raise NotImplementedError

    def token(self) -> str:
        """Short text descriptor, invertible via group_from_token()."""
        return self.kind

    def __eq__(self, other):
        return type(self) is type(other) and self.token() == other.token()

    def __hash__(self):
        return hash(self.token())

    def __repr__(self):
        return f"<group {self.token()}>"


class Zd(Group):
    kind = "zd"

    def __init__(self, d: int = 1):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = d
        self.identity = (0,) * d
        gens = []
        for i in range(d):
            for s in (1, -1):
                v = [0] * d
                v[i] = s
                gens.append(tuple(v))
        self.generators = tuple(gens)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b, strict=True))

    def inv(self, a):
        return tuple(-x for x in a)

    def encode(self, a) -> bytes:
        out = bytearray([_TAG_ZD])
        for x in a:
            _write_svarint(out, x)
        return bytes(out)

    def _decode_at(self, data, pos):
        if data[pos] != _TAG_ZD:
            raise ValueError("bad tag for Z^d element")
        pos += 1
        v = []
        for _ in range(self.d):
            x, pos = _read_svarint(data, pos)
            v.append(x)
        return tuple(v), pos

    def token(self):
        return f"zd:{self.d}"


class Heisenberg(Group):
    kind = "heisenberg"
    identity = (0, 0, 0)

    def __init__(self):
        # x = (1,0,0), y = (0,1,0) and their inverses
        self.generators = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))

    def mul(self, a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def inv(self, a):
        return (-a[0], -a[1], a[0] * a[1] - a[2])

    def encode(self, a) -> bytes:
        out = bytearray([_TAG_HEISENBERG])
        for x in a:
            _write_svarint(out, x)
        return bytes(out)

    def _decode_at(self, data, pos):
        if data[pos] != _TAG_HEISENBERG:
            raise ValueError("bad tag for Heisenberg element")
        pos += 1
        a, pos = _read_svarint(data, pos)
        b, pos = _read_svarint(data, pos)
        c, pos = _read_svarint(data, pos)
        return (a, b, c), pos


class Lamplighter(Group):
    kind = "lamplighter"
    identity = (0, frozenset())

    def __init__(self):
        self.generators = (
            (1, frozenset()),
            (-1, frozenset()),
            (0, frozenset((0,))),
        )

    def mul(self, a, b):
        t1, k1 = a
        t2, k2 = b
        return (t1 + t2, k1 ^ frozenset(t1 + k for k in k2))

    def inv(self, a):
        t, k = a
        return (-t, frozenset(x - t for x in k))

    def encode(self, a) -> bytes:
        t, k = a
        out = bytearray([_TAG_LAMPLIGHTER])
        _write_svarint(out, t)
        _write_svarint(out, len(k))
        for x in sorted(k):
            _write_svarint(out, x)
        return bytes(out)

    def _decode_at(self, data, pos):
        if data[pos] != _TAG_LAMPLIGHTER:
            raise ValueError("bad tag for lamplighter element")
        pos += 1
        t, pos = _read_svarint(data, pos)
        n, pos = _read_svarint(data, pos)
        lamps = []
        for _ in range(n):
            x, pos = _read_svarint(data, pos)
            lamps.append(x)
        if lamps != sorted(set(lamps)):
            raise ValueError("lamp set not strictly sorted")
        return (t, frozenset(lamps)), pos


def group_from_token(token: str) -> Group:
    if token.startswith("zd:"):
        return Zd(int(token.split(":", 1)[1]))
    if token == "heisenberg":
        return Heisenberg()
    if token == "lamplighter":
        return Lamplighter()
    raise ValueError(f"unknown group token {token!r}")


def require_same_group(a: Group, b: Group) -> None:
    if a != b:
        raise GroupMismatchError(f"group mismatch: {a.token()} vs {b.token()}")


def word_ball(group: Group, radius: int, cap: int | None = None) -> frozenset:
    """Elements expressible as products of at most ``radius`` generators.

    The generating set must be symmetric, so the ball is symmetric and
    contains the identity.  Breadth-first closure; raises SizeCapExceeded
    before the ball outgrows ``cap``.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if not group.generators:
        raise ValueError("empty generating set")
    seen = {group.identity}
    frontier = [group.identity]
    mul = group.mul
    for _ in range(radius):
        nxt = []
        for a in frontier:
            for g in group.generators:
                x = mul(a, g)
                if x not in seen:
                    if cap is not None and len(seen) >= cap:
                        raise SizeCapExceeded("word_ball", len(seen) + 1, cap)
                    seen.add(x)
                    nxt.append(x)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def generated_closure(
    group: Group, seed: Iterable, max_size: int
) -> Iterator[frozenset]:
    """BFS closure of ``seed`` under group multiplication.

    Yields the growing closure after each round; stops once stable or the
    size budget is hit.  Used to confirm that a measure's support
    generates the (finite quotient of the) group.
    """
    current = frozenset(seed) | {group.identity}
    mul = group.mul
    while True:
        yield current
        if len(current) > max_size:
            return
        grown = set(current)
        for a in current:
            for b in current:
                grown.add(mul(a, b))
                if len(grown) > max_size:
                    break
        grown_f = frozenset(grown)
        if grown_f == current:
            return
        current = grown_f
