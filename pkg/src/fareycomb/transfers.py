"""Transfers: moving the d.o.e. along the dual tree without touching edges.

A transfer is emitted directly as a move word with the block structure
R^{e0} FF R^{e1} FF ... R^{eq} FF^{delta}: each block hops the d.o.e. one
edge along the dual geodesic (FF switches to the far side of the d.o.e.
first when needed, and the final FF fixes the orientation).  Rendered as a
generator word this is the unique alternating normal form of an element of
the order-2 * order-3 amalgam generated by the square of one generator and
the other generator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core_state import (
    LabeledState,
    apply_move_word,
    ccw_between,
    normalize,
    state_equal,
)


# ---------------------------------------------------------------------------
# faces and the dual tree of a state's inner triangulation
# ---------------------------------------------------------------------------


def faces_of(state: LabeledState):
    """Faces of the triangulated support polygon as sorted cusp triples."""
    n = state.polygon.n
    edges = state.edge_set()
    nbrs: dict = {i: set() for i in range(n)}
    for (a, b) in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    faces = set()
    for (a, b) in edges:
        for side in (0, 1):
            cands = [c for c in nbrs[a] & nbrs[b]
                     if (ccw_between(a, c, b, n) if side else ccw_between(b, c, a, n))]
            if len(cands) == 1:
                faces.add(tuple(sorted((a, b, cands[0]))))
    faces = sorted(faces)
    assert len(faces) == n - 2
    return faces


def face_sides(face):
    a, b, c = face
    return (tuple(sorted((a, b))), tuple(sorted((b, c))), tuple(sorted((a, c))))


def _face_maps(state):
    faces = faces_of(state)
    by_side: dict = {}
    for f in faces:
        for s in face_sides(f):
            by_side.setdefault(s, []).append(f)
    return faces, by_side


def left_right_faces(state: LabeledState, doe):
    """The faces left and right of an oriented interior chord."""
    n = state.polygon.n
    u, v = doe
    key = tuple(sorted(doe))
    _, by_side = _face_maps(state)
    fs = by_side[key]
    assert len(fs) == 2, "d.o.e. must be an interior chord"
    apex = {f: next(c for c in f if c not in key) for f in fs}
    left = next(f for f in fs if ccw_between(v, apex[f], u, n))
    right = next(f for f in fs if f != left)
    return left, right


def epsilon(state: LabeledState, e, f, face) -> int:
    """The left/right symbol of two edges of a face: 0 equal, 1 left, 2 right."""
    ek, fk = tuple(sorted(e)), tuple(sorted(f))
    sides = face_sides(face)
    if ek not in sides or fk not in sides:
        raise ValueError("edges not incident to the face")
    if ek == fk:
        return 0
    a, b, c = face  # ccw order
    ccw_sides = (tuple(sorted((a, b))), tuple(sorted((b, c))), tuple(sorted((c, a))))
    k = ccw_sides.index(ek)
    return 1 if ccw_sides[(k + 1) % 3] == fk else 2


# ---------------------------------------------------------------------------
# the transfer word
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferWord:
    """Exponent form of a transfer: R^{e0} FF R^{e1} ... R^{eq} FF^{delta}."""

    exponents: tuple
    delta: int

    def to_moves(self) -> str:
        if not self.exponents:
            return "ff" * self.delta
        parts = []
        for i, e in enumerate(self.exponents):
            if i:
                parts.append("ff")
            parts.append("r" * e)
        parts.append("ff" * self.delta)
        return "".join(parts)

    def to_generators(self) -> str:
        """The generator word whose evaluation is the transfer element."""
        out = ["aa" * self.delta]
        for e in reversed(self.exponents):
            out.append("b" * e)
            out.append("aa")
        if self.exponents:
            out.pop()  # no block separator before the first exponent
        return "".join(out)

    def __len__(self):
        return len(self.to_moves())


def _rotate_doe(state, doe, count):
    """R^count on an oriented edge within the fixed triangulation."""
    n = state.polygon.n
    d = doe
    for _ in range(count):
        u, v = d
        left, _ = left_right_faces_cached(state, d)
        w = next(c for c in left if c not in (u, v))
        a, b = v, w
        d = (a, b) if ccw_between(b, u, a, n) else (b, a)
    return d


_FACE_CACHE: dict = {}


def left_right_faces_cached(state, doe):
    key = (state.support, state.chords, doe)
    if key not in _FACE_CACHE:
        _FACE_CACHE[key] = left_right_faces(state, doe)
        if len(_FACE_CACHE) > 100000:
            _FACE_CACHE.clear()
    return _FACE_CACHE[key]


def transfer_word(state: LabeledState, to, from_=None) -> TransferWord:
    """The transfer moving the d.o.e. from ``from_`` (default: current) to ``to``.

    Both edges are oriented cusp pairs of interior chords of the state's
    polygon.  The triangulation is left untouched by the resulting word.
    """
    doe = tuple(from_) if from_ is not None else state.doe
    target = tuple(to)
    faces, by_side = _face_maps(state)
    adj: dict = {f: [] for f in faces}
    for s, fs in by_side.items():
        if len(fs) == 2:
            adj[fs[0]].append((s, fs[1]))
            adj[fs[1]].append((s, fs[0]))

    def face_dist_from(targets):
        from collections import deque

        dist = {f: 0 for f in targets}
        q = deque(targets)
        while q:
            f = q.popleft()
            for _, f2 in adj[f]:
                if f2 not in dist:
                    dist[f2] = dist[f] + 1
                    q.append(f2)
        return dist

    tkey = tuple(sorted(target))
    dist = face_dist_from(by_side[tkey])
    exponents = []
    first = True
    while tuple(sorted(doe)) != tkey:
        left, right = left_right_faces_cached(state, doe)
        # choose the side face that advances the geodesic
        if tkey in face_sides(left):
            face, h = left, tkey
        elif tkey in face_sides(right):
            face, h = right, tkey
        else:
            face = left if dist[left] < dist[right] else right
            h = next(s for s, f2 in adj[face] if dist.get(f2, 1 << 30) < dist[face])
        if face is right:
            if first:
                exponents.append(0)
            doe = (doe[1], doe[0])
        # rotate within the (now left) face onto h
        d1 = _rotate_doe(state, doe, 1)
        if tuple(sorted(d1)) == h:
            c = 1
            doe = d1
        else:
            d2 = _rotate_doe(state, d1, 1)
            assert tuple(sorted(d2)) == h, "rotation does not reach the next edge"
            c = 2
            doe = d2
        exponents.append(c)
        first = False
    delta = 0 if doe == target else 1
    if delta:
        assert (doe[1], doe[0]) == target
    return TransferWord(tuple(exponents), delta)


def transfer_moves(state: LabeledState, to, from_=None) -> str:
    return transfer_word(state, to, from_).to_moves()


# ---------------------------------------------------------------------------
# normal form in the amalgam generated by aa and b
# ---------------------------------------------------------------------------


def psl2z_normal_form(word: str) -> str:
    """Canonical form of a word lying in the subgroup generated by aa and b.

    Accepts text over a A b B whose runs of a-letters have even total
    exponent; returns the unique alternating word over {'aa', 'b', 'B'}
    (B denotes the square of b).  Raises on words outside the subgroup.
    """
    syll: list = []  # (kind, exponent): kind 'a' mod 2, kind 'b' mod 3

    def push(kind, exp):
        mod = 2 if kind == "a" else 3
        exp %= mod
        if syll and syll[-1][0] == kind:
            exp = (syll[-1][1] + exp) % mod
            syll.pop()
        if exp:
            syll.append((kind, exp))
            return
        # a cancellation may merge the new neighbours
        if len(syll) >= 2 and syll[-1][0] == syll[-2][0]:
            k, e = syll.pop()
            push(k, e)

    run_kind, run_exp = None, 0
    for ch in word:
        kind = "a" if ch in "aA" else "b" if ch in "bB" else None
        if kind is None:
            raise ValueError(f"bad letter {ch!r}")
        exp = 1 if ch.islower() else -1
        if kind == run_kind:
            run_exp += exp
            continue
        if run_kind is not None:
            _flush(run_kind, run_exp, push)
        run_kind, run_exp = kind, exp
    if run_kind is not None:
        _flush(run_kind, run_exp, push)
    out = []
    for kind, exp in syll:
        if kind == "a":
            out.append("aa")
        else:
            out.append("b" if exp == 1 else "B")
    return "".join(out)


def _flush(kind, exp, push):
    if kind == "a":
        if exp % 2:
            raise ValueError("word leaves the subgroup: odd power of a")
        push("a", (exp // 2) % 2)
    else:
        push("b", exp % 3)


def verify_transfer(state: LabeledState, word: TransferWord, to) -> bool:
    """Check that the rendered transfer fixes the triangulation and moves the d.o.e."""
    s1 = normalize(state)
    s2 = apply_move_word(s1, word.to_moves())
    want = normalize(LabeledState(s1.support, s1.chords, tuple(to)))
    return state_equal(s2, want)
