"""Ribbon diagrams: dart-based combinatorial maps with leaves and twists.

A diagram consists of vertices, each carrying a cyclic rotation of darts,
a fixed-point-free pairing of darts into edges, and a twist flag per edge.
Degree-1 vertices are leaves labeled by elements of the barred set Z_t;
all other vertices are internal.  Boundary walks are traced through the
fattened graph and read off the target permutation; tying, untying,
contraction and splitting realize the cancellation involution whose fixed
points are the monotone (resp. palindromic) factorizations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .factorizations import (MonotoneFactorization, PalindromicFactorization,
                             Transposition)
from .perms import (Label, Permutation, barred_domain,
                    is_valid_orthogonal_target, plain_domain)
from .ratfun import LaurentSeries

UNITARY = "unitary"
ORTHOGONAL = "orthogonal"


def _edge_key(d1: int, d2: int) -> tuple[int, int]:
    return (d1, d2) if d1 < d2 else (d2, d1)


class RibbonDiagram:
    """Immutable combinatorial map with labeled leaves."""

    __slots__ = ("rotations", "leaf_labels", "alpha", "twisted", "vertex_of",
                 "_cert")

    def __init__(self, rotations, leaf_labels, alpha, twisted):
        self._cert = None
        self.rotations = tuple(tuple(r) for r in rotations)
        self.leaf_labels = tuple(leaf_labels)
        self.alpha = tuple(alpha)
        self.twisted = frozenset(twisted)
        darts = [d for rot in self.rotations for d in rot]
        if sorted(darts) != list(range(len(darts))):
            raise ValueError("darts must partition 0..D-1 across rotations")
        if len(self.alpha) != len(darts):
            raise ValueError("edge pairing size mismatch")
        if any(self.alpha[self.alpha[d]] != d or self.alpha[d] == d for d in darts):
            raise ValueError("edge pairing is not a fixed-point-free involution")
        if len(self.leaf_labels) != len(self.rotations):
            raise ValueError("one label slot per vertex required")
        for vtx, (rot, lab) in enumerate(zip(self.rotations, self.leaf_labels)):
            if (lab is not None) != (len(rot) == 1):
                raise ValueError(f"vertex {vtx}: leaves are exactly the labeled "
                                 "degree-1 vertices")
        vo = [0] * len(darts)
        for vtx, rot in enumerate(self.rotations):
            for d in rot:
                vo[d] = vtx
        self.vertex_of = tuple(vo)
        labels = [lab for lab in self.leaf_labels if lab is not None]
        if len(set(labels)) != len(labels):
            raise ValueError("leaf labels must be distinct")

    # -- basic structure ----------------------------------------------------

    @property
    def size(self) -> int:
        """t, where the leaves are labeled by Z_t."""
        return sum(1 for lab in self.leaf_labels if lab is not None) // 2

    @property
    def num_edges(self) -> int:
        return len(self.alpha) // 2

    @property
    def internal_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, lab in enumerate(self.leaf_labels) if lab is None)

    @property
    def num_internal(self) -> int:
        return len(self.internal_vertices)

    def leaf_dart(self, label: Label) -> int:
        for vtx, lab in enumerate(self.leaf_labels):
            if lab == label:
                return self.rotations[vtx][0]
        raise ValueError(f"no leaf labeled {label}")

    def edge_of(self, dart: int) -> tuple[int, int]:
        return _edge_key(dart, self.alpha[dart])

    def is_twisted(self, dart: int) -> bool:
        return self.edge_of(dart) in self.twisted

    def is_leaf_dart(self, dart: int) -> bool:
        return self.leaf_labels[self.vertex_of[dart]] is not None

    def _rot_step(self, dart: int, back: bool) -> int:
        rot = self.rotations[self.vertex_of[dart]]
        i = rot.index(dart)
        return rot[(i - 1) % len(rot)] if back else rot[(i + 1) % len(rot)]

    def contribution(self) -> "DiagramContribution":
        v, e = self.num_internal, self.num_edges
        return DiagramContribution(v=v, e=e, order=e - v, sign=(-1) ** v)

    def __eq__(self, other) -> bool:
        return isinstance(other, RibbonDiagram) and certificate(self) == certificate(other)

    def __hash__(self) -> int:
        return hash(certificate(self))

    def __repr__(self) -> str:
        c = self.contribution()
        return f"RibbonDiagram(t={self.size}, v={c.v}, e={c.e})"


@dataclass(frozen=True)
class BoundaryWalk:
    """One boundary circle: traversal states plus the leaf labels passed."""

    states: tuple[tuple[int, int], ...]
    labels: tuple[Label, ...]


@dataclass(frozen=True)
class DiagramContribution:
    v: int
    e: int
    order: int
    sign: int


# -- construction helpers ----------------------------------------------------


def build_diagram(t: int, internal_rotations, edges) -> RibbonDiagram:
    """Assemble a diagram from leaf count t, internal rotations given as
    lists of opaque port names, and edges as (port, port, twist) triples.
    Leaf ports are the labels of Z_t themselves."""
    ports: dict = {}
    rotations, labels = [], []
    for lab in barred_domain(t):
        ports[lab] = len(ports)
        rotations.append([ports[lab]])
        labels.append(lab)
    for rot in internal_rotations:
        out = []
        for p in rot:
            ports[p] = len(ports)
            out.append(ports[p])
        rotations.append(out)
        labels.append(None)
    alpha = [None] * len(ports)
    twisted = set()
    for p1, p2, tw in edges:
        d1, d2 = ports[p1], ports[p2]
        alpha[d1], alpha[d2] = d2, d1
        if tw:
            twisted.add(_edge_key(d1, d2))
    return RibbonDiagram(rotations, labels, alpha, twisted)


# -- boundary walks ----------------------------------------------------------


def _walk_step(d: RibbonDiagram, state: tuple[int, int]) -> tuple[int, int]:
    """Advance one state: cross the edge of the current dart, then turn
    around the corner of the vertex reached.  The side bit flips on
    twisted edges and selects the turning direction."""
    dart, side = state
    side2 = side ^ d.is_twisted(dart)
    return (d._rot_step(d.alpha[dart], back=bool(side2)), side2)


def _reverse_state(d: RibbonDiagram, state: tuple[int, int]) -> tuple[int, int]:
    """The state traversing the same physical boundary side backwards."""
    dart, side = state
    return (d.alpha[dart], side ^ 1 ^ d.is_twisted(dart))


def boundary_walks(d: RibbonDiagram) -> list[BoundaryWalk]:
    """All boundary circles, one representative per traversal direction."""
    all_states = [(dart, s) for dart in range(len(d.alpha)) for s in (0, 1)]
    orbit_of: dict[tuple[int, int], int] = {}
    orbits: list[list[tuple[int, int]]] = []
    for start in all_states:
        if start in orbit_of:
            continue
        orbit, st = [], start
        while st not in orbit_of:
            orbit_of[st] = len(orbits)
            orbit.append(st)
            st = _walk_step(d, st)
        if st != start:
            raise ValueError("malformed rotation system: walk does not close")
        orbits.append(orbit)
    walks = []
    for i, orbit in enumerate(orbits):
        j = orbit_of[_reverse_state(d, orbit[0])]
        if j < i:
            continue  # the reversed circle was already emitted
        # rotate the representative to start at its minimal state
        k = orbit.index(min(orbit))
        orbit = orbit[k:] + orbit[:k]
        labels = tuple(d.leaf_labels[d.vertex_of[dart]]
                       for dart, _ in orbit if d.is_leaf_dart(dart))
        walks.append(BoundaryWalk(tuple(orbit), labels))
    return walks


# -- target read-off ---------------------------------------------------------


def _walk_variants(labels: tuple[Label, ...], unitary: bool):
    """Viable (direction, phase) readings of a cyclic label sequence as the
    pattern z, z-bar, tau(z), tau(z)-bar, ...; yields (variant, constraints)."""
    m = len(labels)
    if m == 0 or m % 2:
        return
    for rev in (False, True):
        seq = tuple(reversed(labels)) if rev else labels
        for phase in (0, 1):
            s = seq[phase:] + seq[:phase]
            if any(s[2 * i + 1] != s[2 * i].bar for i in range(m // 2)):
                continue
            if unitary and any(s[2 * i].barred for i in range(m // 2)):
                continue
            cons = {s[2 * i]: s[(2 * i + 2) % m] for i in range(m // 2)}
            yield (rev, phase), cons


def read_target(d: RibbonDiagram, symmetry: str) -> Permutation:
    """The target permutation encoded by the boundary walks."""
    unitary = symmetry == UNITARY
    t = d.size
    mapping: dict[Label, Label] = {}
    for walk in boundary_walks(d):
        if not walk.labels:
            raise ValueError("boundary walk visits no leaves")
        viable = list(_walk_variants(walk.labels, unitary))
        if not viable:
            raise ValueError(f"walk labels {walk.labels} violate the "
                             "z, z-bar, tau(z), ... pattern")
        for _, cons in viable:
            for k, v in cons.items():
                if mapping.setdefault(k, v) != v:
                    raise ValueError("inconsistent target constraints")
    domain = plain_domain(t) if unitary else barred_domain(t)
    if set(mapping) != set(domain):
        raise ValueError("boundary walks do not determine a full target")
    return Permutation(t, not unitary, tuple(mapping[x] for x in domain))


# -- validation --------------------------------------------------------------


def _is_orientable(d: RibbonDiagram) -> bool:
    """True iff vertex flips can clear every twist (no odd-twist cycle)."""
    n = len(d.rotations)
    color = [None] * n
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for dart in range(len(d.alpha)):
        if dart < d.alpha[dart]:
            u, v = d.vertex_of[dart], d.vertex_of[d.alpha[dart]]
            tw = int(d.is_twisted(dart))
            if u == v:
                if tw:
                    return False
                continue
            adj[u].append((v, tw))
            adj[v].append((u, tw))
    for start in range(n):
        if color[start] is not None:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v, tw in adj[u]:
                want = color[u] ^ tw
                if color[v] is None:
                    color[v] = want
                    stack.append(v)
                elif color[v] != want:
                    return False
    return True


def _segment_marks(d: RibbonDiagram, walk: BoundaryWalk, variant) -> dict | None:
    """Per-edge boundary-side crossings under one walk reading; a segment from
    a plain-position leaf to its bar is solid, the return segment dashed.
    Each crossing is recorded as (mark, source dart in reading direction)."""
    rev, phase = variant
    label_pos = [i for i, (dart, _) in enumerate(walk.states)
                 if d.is_leaf_dart(dart)]
    m = len(label_pos)
    marks: dict[tuple[int, int], list[tuple[str, int]]] = {}
    dashed_direct = False
    for j in range(m):
        lo = label_pos[j]
        hi = label_pos[(j + 1) % m]
        if rev:
            k = (m - 2 - j) % m  # segment index in the reversed reading
        else:
            k = j
        mark = "solid" if (k - phase) % 2 == 0 else "dashed"
        crossings = []
        i = lo
        while True:
            dart, _ = walk.states[i]
            src = d.alpha[dart] if rev else dart
            marks.setdefault(d.edge_of(dart), []).append((mark, src))
            crossings.append(dart)
            i = (i + 1) % len(walk.states)
            if i == hi:
                break
        if mark == "dashed" and len(crossings) == 2:
            # a partner trajectory turning straight from one channel edge to
            # the other channel edge of the same pair at an internal vertex
            z1 = d.leaf_labels[d.vertex_of[walk.states[lo][0]]]
            z2 = d.leaf_labels[d.vertex_of[walk.states[hi][0]]]
            if z1.index == z2.index:
                dashed_direct = True
    return marks, dashed_direct


def validate(d: RibbonDiagram, symmetry: str) -> tuple[bool, str]:
    """Structural validity check; returns (ok, diagnostic)."""
    t = d.size
    want = set(barred_domain(t))
    have = {lab for lab in d.leaf_labels if lab is not None}
    if have != want:
        return False, f"leaf labels are not exactly Z_{t}"
    for vtx in d.internal_vertices:
        deg = len(d.rotations[vtx])
        if deg < 4 or deg % 2:
            return False, f"internal vertex {vtx} has odd or small degree {deg}"
    walks = boundary_walks(d)
    if any(not w.labels for w in walks):
        return False, "a boundary walk visits no leaves"
    unitary = symmetry == UNITARY
    if unitary:
        if d.twisted:
            return False, "unitary diagram carries twist flags"
        if not _is_orientable(d):
            return False, "map is not orientable"
    try:
        tau = read_target(d, symmetry)
    except ValueError as exc:
        return False, str(exc)
    if not unitary and not is_valid_orthogonal_target(tau):
        return False, "target is not a valid orthogonal target"
    # some combination of per-walk readings must mark every edge with one
    # solid and one dashed boundary side; for the unitary case the two sides
    # must additionally be crossed in opposite reading directions, so that
    # the solid and dashed markings of every edge point the same way
    def edge_ok(crossings: list[tuple[str, int]]) -> bool:
        if sorted(m for m, _ in crossings) != ["dashed", "solid"]:
            return False
        if unitary and crossings[0][1] == crossings[1][1]:
            return False
        return True

    per_walk = []
    for w in walks:
        options = []
        for var, _ in _walk_variants(w.labels, unitary):
            marks, dashed_direct = _segment_marks(d, w, var)
            # a dashed segment may not run straight between the two channel
            # edges of a single pair: the partner trajectory of a pair has to
            # differ from the trajectory somewhere outside the channel edges
            if unitary and dashed_direct:
                continue
            options.append(marks)
        if not options:
            return False, "every reading needs a partner running straight between paired channels"
        per_walk.append(options)
    for combo in itertools.product(*per_walk):
        merged: dict[tuple[int, int], list[tuple[str, int]]] = {}
        for marks in combo:
            for e, ms in marks.items():
                merged.setdefault(e, []).extend(ms)
        if all(edge_ok(ms) for ms in merged.values()):
            break
    else:
        return False, "no reading marks each edge solid on one side and dashed on the other"
    return True, "ok"


# -- surgery: tie / untie / contract / split ---------------------------------


def _builder(d: RibbonDiagram):
    rotations = [list(r) for r in d.rotations]
    labels = list(d.leaf_labels)
    pairs = {dart: d.alpha[dart] for dart in range(len(d.alpha))}
    twists = {_edge_key(a, b): (_edge_key(a, b) in d.twisted)
              for a, b in pairs.items() if a < b}
    return rotations, labels, pairs, twists


def _from_builder(rotations, labels, pairs, twists) -> RibbonDiagram:
    live = [v for v, rot in enumerate(rotations) if rot]
    renum: dict[int, int] = {}
    new_rot, new_lab = [], []
    for v in live:
        new_rot.append([renum.setdefault(dart, len(renum)) for dart in rotations[v]])
        new_lab.append(labels[v])
    alpha = [0] * len(renum)
    twisted = set()
    for a, b in pairs.items():
        if a < b:
            na, nb = renum[a], renum[b]
            alpha[na], alpha[nb] = nb, na
            if twists[_edge_key(a, b)]:
                twisted.add(_edge_key(na, nb))
    return RibbonDiagram(new_rot, new_lab, alpha, twisted)


def _expected_tied_target(tau: Permutation, z1: Label, z2: Label,
                          symmetry: str) -> Permutation:
    swap = Permutation.from_mapping({z1: z2, z2: z1}, tau.size, tau.barred)
    if symmetry == UNITARY:
        return swap.compose(tau)
    mirror = Permutation.from_mapping({z1.bar: z2.bar, z2.bar: z1.bar},
                                      tau.size, True)
    return swap.compose(tau).compose(mirror)


def _tie_candidates(d: RibbonDiagram, z1: Label, z2: Label,
                    symmetry: str) -> list[tuple[str | None, RibbonDiagram]]:
    """All structurally distinct ways of reconnecting leaves z1, z2 through a
    new degree-4 vertex that produce the expected target.  Each candidate is
    tagged with its chirality: "succ" when each leaf sits next to its own
    former attachment in the new rotation, "pred" for the crossed layout,
    None when the leaves were attached to each other and the distinction
    collapses."""
    tau = read_target(d, symmetry)
    want = _expected_tied_target(tau, z1, z2, symmetry)
    l1, l2 = d.leaf_dart(z1), d.leaf_dart(z2)
    a1, a2 = d.alpha[l1], d.alpha[l2]
    arrangements = [("succ", (a1, a2))] if a1 != l2 else [(None, None)]
    if a1 != l2 and a1 != a2:
        arrangements.append(("pred", (a2, a1)))
    twist_opts = [(False,) * 4] if symmetry == UNITARY else \
        list(itertools.product((False, True), repeat=4))
    viable = []
    for bit, arr in arrangements:
        for tws in twist_opts:
            rotations, labels, pairs, twists = _builder(d)
            base = len(pairs)
            n1, o1, n2, o2 = base, base + 1, base + 2, base + 3
            rotations.append([n1, o1, n2, o2])
            labels.append(None)
            for key in {d.edge_of(l1), d.edge_of(l2)}:
                del twists[key]
            if arr is None:
                new_edges = [(n1, l1), (n2, l2), (o1, o2)]
            else:
                b1, b2 = arr
                new_edges = [(n1, l1), (n2, l2), (o1, b1), (o2, b2)]
            for (x, y), tw in zip(new_edges, tws):
                pairs[x], pairs[y] = y, x
                twists[_edge_key(x, y)] = tw
            cand = _from_builder(rotations, labels, pairs, twists)
            if symmetry == UNITARY and (cand.twisted or not _is_orientable(cand)):
                continue
            try:
                if read_target(cand, symmetry) != want:
                    continue
            except ValueError:
                continue
            viable.append((bit, cand))
    return viable


def tie_leaves(d: RibbonDiagram, z1, z2, symmetry: str = UNITARY,
               bit: str = "succ") -> RibbonDiagram:
    """Reconnect leaves z1, z2 through a new degree-4 internal vertex.

    `bit` selects the chirality of the new crossing and matches the value
    reported by `untie_vertex`, so that tying with the recorded bit exactly
    reverses the untying that produced it."""
    z1 = z1 if isinstance(z1, Label) else Label.from_int(z1)
    z2 = z2 if isinstance(z2, Label) else Label.from_int(z2)
    for cb, cand in _tie_candidates(d, z1, z2, symmetry):
        if cb is None or cb == bit:
            return cand
    raise ValueError(f"cannot tie leaves {z1}, {z2} consistently")


def _strand_endpoints(d: RibbonDiagram, inner: dict[int, int]):
    """Compose edges through the strands of a removed vertex.  `inner` pairs
    the removed vertex's darts into strands; returns composite edges
    (outside endpoints or leaf-to-leaf) with accumulated twists."""
    removed = set(inner)
    done, out = set(), []
    for start in inner:
        if start in done:
            continue
        tw = d.is_twisted(start)
        left = d.alpha[start]
        cur = inner[start]
        done.update((start, cur))
        while d.alpha[cur] in removed:
            nxt = d.alpha[cur]
            tw ^= d.is_twisted(cur)
            cur = inner[nxt]
            done.update((nxt, cur))
        tw ^= d.is_twisted(cur)
        right = d.alpha[cur]
        out.append((left, right, tw))
    return out


def untie_vertex(d: RibbonDiagram, vertex: int,
                 symmetry: str = UNITARY) -> tuple[RibbonDiagram, str]:
    """Remove a degree-4 internal vertex with two opposite leaf edges.

    Returns the reconnected diagram together with the chirality bit of the
    crossing that was removed: "succ" when each leaf edge continued to its
    rotation successor, "pred" for the crossed layout.  Feeding the bit back
    to `tie_leaves` reproduces the original diagram exactly."""
    rot = d.rotations[vertex]
    if d.leaf_labels[vertex] is not None or len(rot) != 4:
        raise ValueError("untying requires an internal vertex of degree 4")
    shifts = [s for s in range(2)
              if d.is_leaf_dart(d.alpha[rot[s]]) and d.is_leaf_dart(d.alpha[rot[s + 2]])]
    if not shifts:
        raise ValueError("no opposite pair of leaf edges at this vertex")
    tau = read_target(d, symmetry)
    candidates = []
    for s in shifts:
        p = rot[s:] + rot[:s]
        z1 = d.leaf_labels[d.vertex_of[d.alpha[p[0]]]]
        z2 = d.leaf_labels[d.vertex_of[d.alpha[p[2]]]]
        want = _expected_tied_target(tau, z1, z2, symmetry)  # self-inverse move
        low = min(z1, z2)
        candidates.append((low, "succ", {p[0]: p[1], p[1]: p[0], p[2]: p[3], p[3]: p[2]}, want))
        candidates.append((low, "pred", {p[0]: p[3], p[3]: p[0], p[2]: p[1], p[1]: p[2]}, want))
    viable = []
    for low, bit, inner, want in candidates:
        rotations, labels, pairs, twists = _builder(d)
        for key in {d.edge_of(dart) for dart in rot}:
            del twists[key]
        composite = _strand_endpoints(d, inner)
        rotations[vertex] = []
        labels[vertex] = None
        for dart in rot:
            del pairs[dart]
        ok = True
        for left, right, tw in composite:
            if left in rot or right in rot or left == right:
                ok = False
                break
            pairs[left], pairs[right] = right, left
            twists[_edge_key(left, right)] = tw
        if not ok:
            continue
        cand = _from_builder(rotations, labels, pairs, twists)
        try:
            if read_target(cand, symmetry) == want:
                viable.append((low, bit, cand))
        except ValueError:
            continue
    if not viable:
        raise ValueError("untying does not produce the expected target")
    # prefer the pair with the smallest leaf label; within a pair the reading
    # almost always admits exactly one reconnection, whose chirality bit we
    # report so the operation can be reversed faithfully
    best = min(viable, key=lambda lbc: lbc[0])
    return best[2], best[1]


def contract_edge(d: RibbonDiagram, dart: int) -> RibbonDiagram:
    """Contract the edge at `dart`, merging its degree-4 vertex into the
    vertex at the other end."""
    x = d.vertex_of[dart]
    y = d.vertex_of[d.alpha[dart]]
    if len(d.rotations[x]) != 4 or d.leaf_labels[x] is not None:
        raise ValueError("contraction starts at an internal degree-4 vertex")
    if x == y:
        raise ValueError("cannot contract a loop")
    if d.leaf_labels[y] is not None:
        raise ValueError("cannot contract into a leaf")
    rotations, labels, pairs, twists = _builder(d)
    rx = d.rotations[x]
    i = rx.index(dart)
    rest = [rx[(i + 1) % 4], rx[(i + 2) % 4], rx[(i + 3) % 4]]
    if d.is_twisted(dart):
        # flip vertex x before merging
        rest.reverse()
        for q in rest:
            key = d.edge_of(q)
            if d.vertex_of[d.alpha[q]] != x:
                twists[key] = not twists[key]
    partner = d.alpha[dart]
    ry = rotations[y]
    j = ry.index(partner)
    rotations[y] = ry[:j] + rest + ry[j + 1:]
    rotations[x] = []
    labels[x] = None
    del twists[d.edge_of(dart)]
    del pairs[dart], pairs[partner]
    return _from_builder(rotations, labels, pairs, twists)


def split_vertex(d: RibbonDiagram, vertex: int, leaf_dart: int) -> RibbonDiagram:
    """Pull `leaf_dart` and its two rotation neighbors out of a vertex of
    degree at least 6 into a new degree-4 vertex joined by a fresh edge."""
    rot = d.rotations[vertex]
    if d.leaf_labels[vertex] is not None or len(rot) < 6:
        raise ValueError("splitting requires an internal vertex of degree >= 6")
    if leaf_dart not in rot:
        raise ValueError("dart does not belong to the vertex")
    rotations, labels, pairs, twists = _builder(d)
    i = rot.index(leaf_dart)
    b, n, a = rot[(i - 1) % len(rot)], leaf_dart, rot[(i + 1) % len(rot)]
    base = len(pairs)
    o_new, y_new = base, base + 1
    keep = [q for q in rot if q not in (b, n, a)]
    j = rot.index(b)
    # splice y_new where the (b, n, a) block sat
    ordered = rot[j:] + rot[:j]
    rotations[vertex] = [y_new] + [q for q in ordered if q not in (b, n, a)]
    rotations.append([o_new, b, n, a])
    labels.append(None)
    pairs[o_new], pairs[y_new] = y_new, o_new
    twists[_edge_key(o_new, y_new)] = False
    del keep
    return _from_builder(rotations, labels, pairs, twists)


# -- cancellation involution -------------------------------------------------


def _active_leaves(d: RibbonDiagram) -> list[Label]:
    out = []
    for vtx, lab in enumerate(d.leaf_labels):
        if lab is None:
            continue
        if not d.is_leaf_dart(d.alpha[d.rotations[vtx][0]]):
            out.append(lab)
    return sorted(out)


def cancellation_partner(d: RibbonDiagram, symmetry: str = UNITARY):
    """Apply the cancellation map: either return the partner diagram with
    opposite vertex-count parity, or the factorization record when the
    diagram unties completely (a fixed point)."""
    tau = read_target(d, symmetry)
    record: list[tuple[Transposition, str]] = []
    cur = d
    while True:
        active = _active_leaves(cur)
        if not active:
            if cur.num_internal:
                raise ValueError("leafless internal structure remains")
            factors = tuple(t for t, _ in record)
            if symmetry == UNITARY:
                return MonotoneFactorization(factors, tau)
            return PalindromicFactorization(factors, tau)
        z = active[0]
        lz = cur.leaf_dart(z)
        attach = cur.alpha[lz]
        w = cur.vertex_of[attach]
        rot = cur.rotations[w]
        deg = len(rot)
        if deg == 4:
            opposite = rot[(rot.index(attach) + 2) % 4]
            partner_dart = cur.alpha[opposite]
            if cur.is_leaf_dart(partner_dart):
                k = cur.leaf_labels[cur.vertex_of[partner_dart]]
                s, r = (z, k) if z < k else (k, z)
                cur, bit = untie_vertex(cur, w, symmetry)
                record.append((Transposition(s, r), bit))
                continue
            cur = contract_edge(cur, opposite)
        else:
            cur = split_vertex(cur, w, attach)
        break
    for t, bit in reversed(record):
        cur = tie_leaves(cur, t.s, t.r, symmetry, bit)
    return cur


# -- canonical form and enumeration ------------------------------------------


def _variant_parts(d: RibbonDiagram, flips: frozenset[int]):
    """Rotations and effective twists after flipping a set of internal
    vertices; leaf-edge twists are gauged away."""
    rotations = []
    for vtx, rot in enumerate(d.rotations):
        rotations.append(tuple(reversed(rot)) if vtx in flips else rot)
    twisted = set()
    for dart in range(len(d.alpha)):
        mate = d.alpha[dart]
        if dart > mate:
            continue
        u, v = d.vertex_of[dart], d.vertex_of[mate]
        tw = d.is_twisted(dart)
        if d.leaf_labels[u] is not None or d.leaf_labels[v] is not None:
            continue  # leaf flips clear any twist on a leaf edge
        if u != v:
            tw ^= (u in flips) ^ (v in flips)
        if tw:
            twisted.add(_edge_key(dart, mate))
    return rotations, twisted


def certificate(d: RibbonDiagram):
    """Canonical encoding, minimal over internal vertex flips (which also
    cover global mirror images); leaf labels stay fixed."""
    if d._cert is not None:
        return d._cert
    t = d.size
    leaf_darts = [d.leaf_dart(lab) for lab in barred_domain(t)]
    best = None
    internal = d.internal_vertices
    for bits in itertools.product((False, True), repeat=len(internal)):
        flips = frozenset(v for v, b in zip(internal, bits) if b)
        rotations, twisted = _variant_parts(d, flips)
        ids: dict[int, int] = {}
        order: list[int] = []

        def assign(dart: int) -> None:
            ids[dart] = len(ids)
            order.append(dart)

        for dart in leaf_darts:
            assign(dart)
        anchored: set[int] = set()
        i = 0
        while i < len(order):
            dart = order[i]
            i += 1
            mate = d.alpha[dart]
            if mate not in ids:
                assign(mate)
            vtx = d.vertex_of[mate]
            if d.leaf_labels[vtx] is None and vtx not in anchored:
                anchored.add(vtx)
                rot = rotations[vtx]
                k = rot.index(mate)
                for q in rot[k + 1:] + rot[:k]:
                    if q not in ids:
                        assign(q)
        alpha_ids = tuple(ids[d.alpha[dart]] for dart in order)

        def canon_cycle(seq: tuple[int, ...]) -> tuple[int, ...]:
            k = seq.index(min(seq))
            return seq[k:] + seq[:k]

        rot_ids = tuple(sorted(
            canon_cycle(tuple(ids[q] for q in rotations[vtx]))
            for vtx in internal))
        tw_ids = tuple(sorted(_edge_key(ids[a], ids[b]) for a, b in twisted))
        enc = (alpha_ids, rot_ids, tw_ids)
        if best is None or enc < best:
            best = enc
    d._cert = (t, best)
    return d._cert


def _degree_multisets(budget: int):
    """Multisets of even internal degrees >= 4 with sum of (deg/2 - 1) <= budget."""
    def rec(remaining: int, cap: int):
        yield ()
        for deg in range(4, 2 * remaining + 3, 2):
            cost = deg // 2 - 1
            if cost > remaining or deg > cap:
                continue
            for tail in rec(remaining - cost, deg):
                yield (deg,) + tail
    seen = set()
    for ms in rec(budget, 2 * budget + 2):
        key = tuple(sorted(ms, reverse=True))
        if key not in seen:
            seen.add(key)
            yield key


def enumerate_diagrams(tau: Permutation, max_order: int,
                       symmetry: str, force: bool = False) -> list[RibbonDiagram]:
    """All valid diagrams with target tau and e - v <= max_order, up to
    isomorphism fixing leaf labels (mirror images identified)."""
    unitary = symmetry == UNITARY
    t = tau.size
    if unitary and tau.barred:
        raise ValueError("unitary targets live on plain ground sets")
    if not unitary and not is_valid_orthogonal_target(tau):
        raise ValueError("not a valid orthogonal target")
    if not force and (t > 3 or max_order > t + 3):
        raise ValueError(f"search bound t={t}, max_order={max_order} exceeds "
                         "the resource guard (use force=True to override)")
    if unitary:
        fixed = {z for z in barred_domain(t)
                 if tau(Label(z.index, False)) == Label(z.index, False)}
    else:
        fixed = {z for z in barred_domain(t) if tau(z) == z}
    found: dict = {}
    for degrees in _degree_multisets(max_order - t):
        darts = 2 * t + sum(degrees)
        vertex_of = list(range(2 * t))
        first_dart = []
        for vi, deg in enumerate(degrees):
            first_dart.append(len(vertex_of))
            vertex_of.extend([2 * t + vi] * deg)
        alpha = [-1] * darts

        def glue(count: int) -> None:
            if count == darts:
                _check_candidate()
                return
            a = alpha.index(-1)
            for b in range(a + 1, darts):
                if alpha[b] != -1:
                    continue
                if a < 2 * t and b < 2 * t:
                    # leaf-leaf edge is only admissible between z and z-bar
                    # when the target fixes both
                    za, zb = barred_domain(t)[a], barred_domain(t)[b]
                    if zb != za.bar or za not in fixed or zb not in fixed:
                        continue
                if b >= 2 * t:
                    vi = vertex_of[b] - 2 * t
                    fd = first_dart[vi]
                    if all(alpha[q] == -1 for q in range(fd, fd + degrees[vi])):
                        # fresh vertex: use slot 0 only, and only the first
                        # fresh vertex of each degree
                        if b != fd:
                            continue
                        if any(degrees[wj] == degrees[vi]
                               and all(alpha[q] == -1 for q in
                                       range(first_dart[wj], first_dart[wj] + degrees[wj]))
                               for wj in range(vi)):
                            continue
                alpha[a], alpha[b] = b, a
                glue(count + 2)
                alpha[a], alpha[b] = -1, -1

        def _check_candidate() -> None:
            rotations = [[i] for i in range(2 * t)]
            labels: list = list(barred_domain(t))
            pos = 2 * t
            for deg in degrees:
                rotations.append(list(range(pos, pos + deg)))
                labels.append(None)
                pos += deg
            edge_keys = [_edge_key(a, b) for a, b in enumerate(alpha) if a < b]
            twist_sets = [frozenset()] if unitary else \
                [frozenset(c) for r in range(len(edge_keys) + 1)
                 for c in itertools.combinations(edge_keys, r)]
            for tws in twist_sets:
                diag = RibbonDiagram(rotations, labels, list(alpha), tws)
                ok, _ = validate(diag, symmetry)
                if not ok:
                    continue
                if read_target(diag, symmetry) != tau:
                    continue
                found.setdefault(certificate(diag), diag)

        glue(0)
    return sorted(found.values(), key=lambda g: (g.num_internal, certificate(g)))


def signed_sum(tau: Permutation, max_order: int, symmetry: str,
               force: bool = False) -> LaurentSeries:
    """Sum of (-1)^v N^-(e-v) over all enumerated diagrams."""
    totals: dict[int, Fraction] = {}
    for diag in enumerate_diagrams(tau, max_order, symmetry, force):
        c = diag.contribution()
        totals[c.order] = totals.get(c.order, Fraction(0)) + c.sign
    coeffs = tuple((k, v) for k, v in sorted(totals.items()) if v != 0)
    return LaurentSeries(coeffs, max_order)


def to_dot(d: RibbonDiagram) -> str:
    """Deterministic DOT rendering: leaves as boxes, internal vertices as
    circles with their rotation recorded, twisted edges marked."""
    lines = ["graph ribbon {"]
    for vtx, lab in enumerate(d.leaf_labels):
        if lab is not None:
            lines.append(f'  v{vtx} [shape=box, label="{lab}"];')
        else:
            rot = " ".join(str(q) for q in d.rotations[vtx])
            lines.append(f'  v{vtx} [shape=circle, label="({rot})"];')
    for dart in range(len(d.alpha)):
        mate = d.alpha[dart]
        if dart > mate:
            continue
        u, v = d.vertex_of[dart], d.vertex_of[mate]
        attrs = ' [style=bold, label="twist"]' if d.is_twisted(dart) else ""
        lines.append(f"  v{u} -- v{v}{attrs};")
    lines.append("}")
    return "\n".join(lines)
