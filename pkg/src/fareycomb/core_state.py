"""Labeled triangulation states and the two local moves.

The base tessellation of the plane is modeled purely through its dual
infinite trivalent tree.  Cells (triangles) and edges of the base carry
addresses relative to a fixed root edge; a state stores a finite support
polygon (a connected set of cells), a triangulation of that polygon by
chords, and a distinguished oriented edge (d.o.e.) which is always an
interior chord of the polygon in normalized form.

Conventions (fixed once, validated by the relation suite in the tests):

* at every cell the three incident dual edges are stored in the circular
  order (down-edge, right-child, left-child), where left/right are taken
  from the point of view of a walker heading away from the root;
* cusps of a support polygon are numbered from the gap that follows the
  smallest boundary edge in the global edge order;
* the d.o.e. of the base state is the root chord oriented so that the
  head-side cell lies on its left.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

# ---------------------------------------------------------------------------
# addresses: cells and edges of the base tessellation
# ---------------------------------------------------------------------------

# A cell is ('h'|'t', turns) -- the triangle reached from the root edge by
# walking onto the head/tail side and turning per the string over {'L','R'}.
# An edge is ('r', '') for the root or (side, turns) with turns != ''.

ROOT_EDGE = ("r", "")
HEAD_CELL = ("h", "")
TAIL_CELL = ("t", "")

Cell = tuple
Edge = tuple


def edge_cells(edge: Edge) -> tuple[Cell, Cell]:
    """Both endpoint cells of a dual edge, near cell first (root: head first)."""
    side, turns = edge
    if side == "r":
        return (HEAD_CELL, TAIL_CELL)
    return ((side, turns[:-1]), (side, turns))


def cell_edges(cell: Cell) -> tuple[Edge, Edge, Edge]:
    """Incident dual edges of a cell in fixed circular order (down, R, L)."""
    side, turns = cell
    down = ROOT_EDGE if turns == "" else (side, turns)
    return (down, (side, turns + "R"), (side, turns + "L"))


def other_cell(edge: Edge, cell: Cell) -> Cell:
    a, b = edge_cells(edge)
    return b if cell == a else a


def edge_key(edge: Edge):
    """Global total order on base edges: by depth, then turns, then anchor."""
    side, turns = edge
    return (len(turns), turns, side)


def cell_path(c1: Cell, c2: Cell) -> list[Cell]:
    """The unique dual-tree path from c1 to c2, inclusive."""
    s1, t1 = c1
    s2, t2 = c2
    if s1 == s2:
        k = 0
        while k < len(t1) and k < len(t2) and t1[k] == t2[k]:
            k += 1
        up = [(s1, t1[:i]) for i in range(len(t1), k - 1, -1)]
        down = [(s2, t2[:i]) for i in range(k + 1, len(t2) + 1)]
        return up + down
    up = [(s1, t1[:i]) for i in range(len(t1), -1, -1)]
    down = [(s2, t2[:i]) for i in range(0, len(t2) + 1)]
    return up + down


def steiner_cells(cells) -> frozenset:
    """Smallest connected cell set containing all of ``cells``."""
    cells = list(cells)
    if not cells:
        return frozenset()
    full = set()
    base = cells[0]
    for c in cells:
        full.update(cell_path(base, c))
    return frozenset(full)


# ---------------------------------------------------------------------------
# polygon structure of a connected support
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polygon:
    """Combinatorial boundary data of a support polygon.

    ``boundary[i]`` is the base edge between cusps i-1 and i (mod n).
    ``interior`` maps each interior base edge to its cusp pair, and
    ``corner_cusp`` sends a (cell, slot) corner to its cusp index.
    """

    cells: frozenset
    n: int
    boundary: tuple
    interior: dict
    corner_cusp: dict

    @property
    def base_chords(self):
        return {tuple(sorted(p)): e for e, p in self.interior.items()}

    def boundary_pair_edge(self, a: int, b: int) -> Edge:
        if (a + 1) % self.n == b:
            return self.boundary[(a + 1) % self.n]
        if (b + 1) % self.n == a:
            return self.boundary[(a + 1 + self.n) % self.n if False else (b + 1) % self.n]
        raise ValueError("not a boundary pair")


def walk_stubs(cells: frozenset) -> list:
    """Frontier edges of a connected cell set in circular (ccw) order."""
    return list(_walk(cells)[0])


def _walk(support: frozenset):
    """Ribbon boundary walk; yields (stubs, gaps) in circular order."""
    start = None
    for c in sorted(support):
        for k, e in enumerate(cell_edges(c)):
            if other_cell(e, c) not in support:
                start = (c, k)
                break
        if start:
            break
    if start is None:
        raise ValueError("support has no boundary")
    c0, k0 = start
    stub0 = cell_edges(c0)[k0]
    stubs = [stub0]
    gaps = []
    corners, darts = [], []
    pos = start
    while True:
        c, k = pos
        corners.append((c, k))
        e = cell_edges(c)[(k + 1) % 3]
        c2 = other_cell(e, c)
        if c2 in support:
            darts.append(e)
            pos = (c2, cell_edges(c2).index(e))
        else:
            gaps.append((corners, darts))
            corners, darts = [], []
            if e == stub0:
                break
            stubs.append(e)
            pos = (c, (k + 1) % 3)
    return stubs, gaps


def polygon_of(support: frozenset) -> Polygon:
    return _polygon_cached(support)


@lru_cache(maxsize=200000)
def _polygon_cached(support: frozenset) -> Polygon:
    stubs, gaps = _walk(support)
    n = len(stubs)
    # rotate so that cusp 0 follows the smallest boundary edge
    k = min(range(n), key=lambda i: edge_key(stubs[i]))
    stubs = stubs[k:] + stubs[:k]
    gaps = gaps[k:] + gaps[:k]
    interior: dict = {}
    corner_cusp: dict = {}
    for i, (corners, darts) in enumerate(gaps):
        for cr in corners:
            corner_cusp[cr] = i
        for e in darts:
            interior.setdefault(e, []).append(i)
    interior = {e: tuple(ps) for e, ps in interior.items()}
    for e, ps in interior.items():
        assert len(ps) == 2, (e, ps)
    assert len(interior) == len(support) - 1
    assert n == len(support) + 2
    return Polygon(support, n, tuple(stubs), interior, corner_cusp)


# circular-position predicates ------------------------------------------------


def ccw_between(a: int, x: int, b: int, n: int) -> bool:
    """True iff x lies strictly between a and b going counterclockwise."""
    return 0 < (x - a) % n < (b - a) % n


def chords_cross(p, q, n: int) -> bool:
    a, b = p
    c, d = q
    if len({a, b, c, d}) < 4:
        return False
    return ccw_between(a, c, b, n) != ccw_between(a, d, b, n)


def is_boundary_pair(a: int, b: int, n: int) -> bool:
    return (a - b) % n in (1, n - 1)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledState:
    """A triangulation differing from the base inside ``support`` plus a d.o.e.

    ``chords`` triangulate the support polygon (cusp positions as given by
    :func:`polygon_of`); ``doe`` is an ordered cusp pair and is always one of
    the chords.
    """

    support: frozenset
    chords: frozenset
    doe: tuple

    @property
    def polygon(self) -> Polygon:
        return polygon_of(self.support)

    def edge_set(self):
        n = self.polygon.n
        return set(self.chords) | {tuple(sorted(((i - 1) % n, i))) for i in range(n)}

    def __repr__(self):
        return f"LabeledState(n={self.polygon.n}, doe={self.doe})"


def base_state() -> LabeledState:
    support = frozenset({HEAD_CELL, TAIL_CELL})
    poly = polygon_of(support)
    (u, v) = poly.interior[ROOT_EDGE]
    chord = tuple(sorted((u, v)))
    # orient so that the head cell's private cusp is on the left
    head_cusps = {poly.corner_cusp[(HEAD_CELL, k)] for k in range(3)}
    apex = next(iter(head_cusps - set(chord)))
    n = poly.n
    if ccw_between(chord[1], apex, chord[0], n):
        doe = chord
    else:
        doe = (chord[1], chord[0])
    return LabeledState(support, frozenset({chord}), doe)


def _remap_positions(old: Polygon, new: Polygon):
    """Partial map old cusp -> new cusp for nested supports, via shared corners."""
    mp = {}
    small_old = len(old.cells) <= len(new.cells)
    if small_old:
        for corner, i in old.corner_cusp.items():
            mp[i] = new.corner_cusp[corner]
    else:
        for corner, i in new.corner_cusp.items():
            j = old.corner_cusp[corner]
            mp[j] = i
    return mp


def grow_support(state: LabeledState, cell: Cell) -> LabeledState:
    """Add one adjacent cell to the support; the represented element is kept."""
    if cell in state.support:
        return state
    links = [e for e in cell_edges(cell) if other_cell(e, cell) in state.support]
    if len(links) != 1:
        raise ValueError(f"cell {cell} is not adjacent to the support")
    new_support = state.support | {cell}
    old, new = state.polygon, polygon_of(new_support)
    mp = _remap_positions(old, new)
    chords = {tuple(sorted((mp[a], mp[b]))) for (a, b) in state.chords}
    chords.add(tuple(sorted(new.interior[links[0]])))
    doe = (mp[state.doe[0]], mp[state.doe[1]])
    return LabeledState(new_support, frozenset(chords), doe)


def _chord_cells(chord, poly: Polygon) -> set:
    """Cells of the base tessellation traversed by a chord of the polygon."""
    cells = set()
    for e, pair in poly.interior.items():
        if chords_cross(chord, pair, poly.n):
            cells.update(edge_cells(e))
    return cells


def normalize(state: LabeledState) -> LabeledState:
    """Shrink the support to the minimal polygon allowed by the invariants."""
    poly = state.polygon
    base = poly.base_chords
    needed = set()
    for ch in state.chords:
        if ch not in base:
            needed.update(_chord_cells(ch, poly))
    dk = tuple(sorted(state.doe))
    if dk in base:
        needed.update(edge_cells(base[dk]))
    else:
        needed.update(_chord_cells(dk, poly))
    support = steiner_cells(needed)
    if support == state.support:
        return state
    new = polygon_of(support)
    inv = _remap_positions(poly, new)  # old cusp -> new cusp (partial)
    chords = set()
    for (a, b) in state.chords:
        if a in inv and b in inv and not is_boundary_pair(inv[a], inv[b], new.n):
            chords.add(tuple(sorted((inv[a], inv[b]))))
    assert len(chords) == new.n - 3, "normalization lost chords"
    doe = (inv[state.doe[0]], inv[state.doe[1]])
    return LabeledState(support, frozenset(chords), doe)


def _apexes(state: LabeledState, a: int, b: int):
    """Unique third vertices of the triangles left and right of a->b."""
    edges = state.edge_set()
    n = state.polygon.n
    nb_a = {y for (x, y) in edges if x == a} | {x for (x, y) in edges if y == a}
    nb_b = {y for (x, y) in edges if x == b} | {x for (x, y) in edges if y == b}
    common = nb_a & nb_b
    left = [c for c in common if ccw_between(b, c, a, n)]
    right = [c for c in common if ccw_between(a, c, b, n)]
    assert len(left) == 1 and len(right) == 1, (a, b, left, right)
    return left[0], right[0]


def _flip_chord(state: LabeledState, chord) -> LabeledState:
    a, b = chord
    key = tuple(sorted((a, b)))
    if key not in state.chords:
        raise ValueError(f"{key} is not an edge of the state")
    w, x = _apexes(state, a, b)
    new_chord = tuple(sorted((w, x)))
    chords = (state.chords - {key}) | {new_chord}
    if tuple(sorted(state.doe)) == key:
        u, v = state.doe
        wl, xr = _apexes(state, u, v)
        doe = (xr, wl)
    else:
        doe = state.doe
    return normalize(LabeledState(state.support, frozenset(chords), doe))


def _ensure_interior(state: LabeledState, edge: Edge) -> tuple[LabeledState, tuple]:
    """Grow the support until ``edge`` is an interior base edge; return its chord."""
    s = state
    ca, cb = edge_cells(edge)
    target = steiner_cells(set(s.support) | {ca, cb})
    todo = sorted(target - s.support, key=lambda c: len(cell_path(HEAD_CELL, c)))
    while todo:
        progressed = False
        for c in list(todo):
            if any(other_cell(e, c) in s.support for e in cell_edges(c)):
                s = grow_support(s, c)
                todo.remove(c)
                progressed = True
        assert progressed
    pair = s.polygon.interior[edge]
    return s, tuple(sorted(pair))


def flip(state: LabeledState, edge) -> LabeledState:
    """Flip an edge of the current triangulation (auto-growing the support)."""
    if isinstance(edge, tuple) and len(edge) == 2 and isinstance(edge[0], int):
        return _flip_chord(state, edge)
    s, chord = _ensure_interior(state, edge)
    return _flip_chord(s, chord)


def move_F(state: LabeledState) -> LabeledState:
    """Flip at the d.o.e.; the new d.o.e. is the opposite diagonal, reoriented."""
    return _flip_chord(state, state.doe)


def move_R(state: LabeledState) -> LabeledState:
    """Rotate the d.o.e. to the next edge of the triangle on its left.

    The turning direction within the left triangle (here: the edge sharing
    the d.o.e.'s head) is the one validated by the relation suite; the other
    choice satisfies the torsion relations but not the pentagon relation.
    """
    u, v = state.doe
    w, _ = _apexes(state, u, v)
    a, b = v, w
    n = state.polygon.n
    doe = (a, b) if ccw_between(b, u, a, n) else (b, a)
    s = state
    if is_boundary_pair(doe[0], doe[1], n):
        poly = s.polygon
        lo, hi = tuple(sorted(doe))
        if (lo + 1) % n == hi:
            bedge = poly.boundary[hi]
        else:
            bedge = poly.boundary[lo]
        outside = next(c for c in edge_cells(bedge) if c not in s.support)
        old_doe = doe
        s = grow_support(s, outside)
        mp = _remap_positions(poly, s.polygon)
        doe = (mp[old_doe[0]], mp[old_doe[1]])
    return normalize(LabeledState(s.support, s.chords, doe))


_F_INV = None  # F has order 4, R order 3: inverses are powers


def apply_letter(state: LabeledState, letter: str) -> LabeledState:
    if letter == "f":
        return move_F(state)
    if letter == "r":
        return move_R(state)
    if letter == "F":
        s = move_F(move_F(move_F(state)))
        return s
    if letter == "R":
        return move_R(move_R(state))
    raise ValueError(f"bad move letter {letter!r}")


def apply_move_word(state: LabeledState, word: str) -> LabeledState:
    """Apply a move word left to right; lowercase = F/R, uppercase = inverses."""
    s = state
    for ch in word:
        s = apply_letter(s, ch)
    return s


def state_equal(a: LabeledState, b: LabeledState) -> bool:
    na, nb = normalize(a), normalize(b)
    return na.support == nb.support and na.chords == nb.chords and na.doe == nb.doe


# ---------------------------------------------------------------------------
# move words as text
# ---------------------------------------------------------------------------

MOVE_LETTERS = "fFrR"


def invert_move_word(word: str) -> str:
    return word[::-1].swapcase()


def free_reduce(word: str) -> str:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def parse_move_word(text: str) -> str:
    for ch in text:
        if ch not in MOVE_LETTERS:
            raise ValueError(f"bad move letter {ch!r} (expected one of f F r R)")
    return text


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def cell_str(cell: Cell) -> str:
    return f"{cell[0]}:{cell[1]}"


def edge_str(edge: Edge) -> str:
    return f"{edge[0]}:{edge[1]}"


def parse_edge(text: str) -> Edge:
    side, _, turns = text.partition(":")
    if side not in ("r", "h", "t") or (side == "r" and turns):
        raise ValueError(f"bad edge address {text!r}")
    if any(c not in "LR" for c in turns):
        raise ValueError(f"bad edge address {text!r}")
    return (side, turns)


def state_to_obj(state: LabeledState) -> dict:
    s = normalize(state)
    return {
        "support": sorted(cell_str(c) for c in s.support),
        "diagonals": sorted([list(ch) for ch in s.chords]),
        "doe": {"from": s.doe[0], "to": s.doe[1]},
    }


def state_to_json(state: LabeledState) -> str:
    return json.dumps(state_to_obj(state), sort_keys=True, separators=(",", ":"))


def state_fingerprint(state: LabeledState) -> str:
    import hashlib

    return hashlib.sha1(state_to_json(state).encode()).hexdigest()
