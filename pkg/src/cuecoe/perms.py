"""Permutations on plain sets {1..t} and barred sets Z_t = {1..t, tbar..1bar}.

Labels are stored as (index, barred) pairs; externally a barred label k-bar
is written as the negative integer -k.  The linear order on Z_t used
throughout the project is 1 < 1bar < 2 < 2bar < ... < t < tbar, which is
exactly the lexicographic order on (index, barred).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple


class Label(NamedTuple):
    """A trajectory-end label: plain k or barred k-bar (encoded as -k)."""

    index: int
    barred: bool

    @staticmethod
    def from_int(z: int) -> "Label":
        if z == 0:
            raise ValueError("label 0 is not allowed (labels are signed nonzero)")
        return Label(abs(z), z < 0)

    def to_int(self) -> int:
        return -self.index if self.barred else self.index

    @property
    def bar(self) -> "Label":
        return Label(self.index, not self.barred)

    def __str__(self) -> str:
        return str(self.to_int())


def as_label(z) -> Label:
    return z if isinstance(z, Label) else Label.from_int(z)


def plain_domain(t: int) -> tuple[Label, ...]:
    return tuple(Label(i, False) for i in range(1, t + 1))


def barred_domain(t: int) -> tuple[Label, ...]:
    """Z_t in its linear order 1 < 1bar < ... < t < tbar."""
    out = []
    for i in range(1, t + 1):
        out.append(Label(i, False))
        out.append(Label(i, True))
    return tuple(out)


@dataclass(frozen=True)
class CycleType:
    """An integer partition: cycle lengths sorted descending."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be >= 1, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


class Permutation:
    """An immutable bijection on {1..t} or on Z_t.

    Composition convention, fixed project-wide: (p * q)(x) = p(q(x)).
    """

    __slots__ = ("size", "barred", "_images", "_domain", "_index")

    def __init__(self, size: int, barred: bool, images: tuple[Label, ...]):
        domain = barred_domain(size) if barred else plain_domain(size)
        if sorted(images) != sorted(domain):
            raise ValueError("image table is not a bijection on the ground set")
        self.size = size
        self.barred = barred
        self._domain = domain
        self._images = tuple(images)
        self._index = {lab: i for i, lab in enumerate(domain)}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(size: int, barred: bool = False) -> "Permutation":
        dom = barred_domain(size) if barred else plain_domain(size)
        return Permutation(size, barred, dom)

    @staticmethod
    def from_mapping(mapping: dict, size: int, barred: bool = False) -> "Permutation":
        """Build from a {label: label} dict; signed ints accepted."""
        m = {as_label(k): as_label(v) for k, v in mapping.items()}
        dom = barred_domain(size) if barred else plain_domain(size)
        images = tuple(m.get(x, x) for x in dom)
        return Permutation(size, barred, images)

    @staticmethod
    def from_one_line(images: Iterable[int], barred: bool = False) -> "Permutation":
        """One-line notation over the domain in its linear order."""
        labs = tuple(as_label(z) for z in images)
        size = len(labs) // 2 if barred else len(labs)
        return Permutation(size, barred, labs)

    @staticmethod
    def from_cycles(cycles: Iterable[Iterable[int]], size: int,
                    barred: bool = False) -> "Permutation":
        mapping: dict[Label, Label] = {}
        for cyc in cycles:
            cyc = [as_label(z) for z in cyc]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if a in mapping:
                    raise ValueError(f"label {a} appears twice in cycles")
                mapping[a] = b
        return Permutation.from_mapping(mapping, size, barred)

    @staticmethod
    def parse(text: str, size: int | None = None, barred: bool = False) -> "Permutation":
        """Parse cycle notation like "(1 2)(3 -1)"; omitted labels are fixed."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*-?\d+(\s+-?\d+)*\s*\))*", text):
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = [[int(z) for z in grp.split()] for grp in re.findall(r"\(([^()]*)\)", text)]
        seen = [z for cyc in cycles for z in cyc]
        if barred is False and any(z < 0 for z in seen):
            barred = True
        if size is None:
            size = max((abs(z) for z in seen), default=1)
        return Permutation.from_cycles(cycles, size, barred)

    # -- basic protocol ----------------------------------------------------

    def __call__(self, z):
        lab = as_label(z)
        try:
            img = self._images[self._index[lab]]
        except KeyError:
            raise ValueError(f"label {lab} not in ground set") from None
        return img if isinstance(z, Label) else img.to_int()

    def __eq__(self, other) -> bool:
        return (isinstance(other, Permutation) and self.size == other.size
                and self.barred == other.barred and self._images == other._images)

    def __hash__(self) -> int:
        return hash((self.size, self.barred, self._images))

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r})"

    @property
    def domain(self) -> tuple[Label, ...]:
        return self._domain

    def one_line(self) -> list[int]:
        return [lab.to_int() for lab in self._images]

    # -- group operations --------------------------------------------------

    def compose(self, other: "Permutation") -> "Permutation":
        """(self * other)(x) = self(other(x))."""
        if self.size != other.size or self.barred != other.barred:
            raise ValueError("cannot compose permutations on different ground sets")
        images = tuple(self._images[self._index[y]] for y in other._images)
        return Permutation(self.size, self.barred, images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = {img: x for x, img in zip(self._domain, self._images)}
        return Permutation(self.size, self.barred, tuple(inv[x] for x in self._domain))

    def is_identity(self) -> bool:
        return self._images == self._domain

    # -- cycles ------------------------------------------------------------

    def cycles(self) -> list[tuple[Label, ...]]:
        """Cycle decomposition; each cycle starts at its minimal label,
        cycles sorted by their minimal label."""
        seen: set[Label] = set()
        out = []
        for start in self._domain:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> CycleType:
        return CycleType(len(c) for c in self.cycles())

    def cycle_string(self) -> str:
        return "".join("(" + " ".join(str(x) for x in cyc) + ")" for cyc in self.cycles())


def bar_swap(t: int) -> Permutation:
    """The involution T = (1 1bar)(2 2bar)...(t tbar) on Z_t."""
    return Permutation(t, True, tuple(lab.bar for lab in barred_domain(t)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    return p.compose(q)


def cycle_type(p: Permutation) -> CycleType:
    return p.cycle_type()


def target_unitary(sigma: Permutation, pi: Permutation) -> Permutation:
    """Target permutation of the broken-TRS case: sigma^{-1} * pi."""
    if sigma.barred or pi.barred:
        raise ValueError("unitary targets live on plain ground sets")
    return sigma.inverse().compose(pi)


def target_orthogonal(varpi: Permutation) -> Permutation:
    """Target permutation of the TRS case: varpi^{-1} T varpi T on Z_t."""
    if not varpi.barred:
        raise ValueError("orthogonal targets require a permutation on a barred set Z_t")
    T = bar_swap(varpi.size)
    return varpi.inverse().compose(T).compose(varpi).compose(T)


def is_valid_orthogonal_target(tau: Permutation) -> bool:
    """True iff T*tau is a fixed-point-free involution on Z_t."""
    if not tau.barred:
        return False
    for x in tau.domain:
        y = tau(x)
        if y == x.bar:
            return False
        if tau(y.bar) != x.bar:
            return False
    return True


def halved_cycle_type(tau: Permutation) -> CycleType:
    """One cycle length per mirror pair of cycles of a valid orthogonal target."""
    if not is_valid_orthogonal_target(tau):
        raise ValueError("not a valid orthogonal target permutation")
    cycles = tau.cycles()
    by_min = {min(c): frozenset(c) for c in cycles}
    parts = []
    used: set[frozenset] = set()
    for cyc in cycles:
        fs = frozenset(cyc)
        if fs in used:
            continue
        mirror = frozenset(x.bar for x in cyc)
        if mirror == fs or mirror not in by_min.values():
            raise ValueError("cycles of tau do not pair into mirror images")
        used.add(fs)
        used.add(mirror)
        parts.append(len(cyc))
    return CycleType(parts)
