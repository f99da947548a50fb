"""Two-generator words, tree-pair symbols, and the element semantics.

Elements are carried by two interchangeable representations:

* a :class:`~fareycomb.core_state.LabeledState` (canonical for equality and
  for all combing algorithms), obtained by evaluating a generator word on
  the base state;
* a :class:`TreePairSymbol` (two finite trees anchored at the head cell plus
  a cyclic shift), canonical for multiplication and inversion.

Words over ``a A b B`` evaluate by applying the corresponding moves to the
base state in reversed letter order; the letter map and the reversal are the
conventions validated by the relation suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core_state import (
    HEAD_CELL,
    ROOT_EDGE,
    TAIL_CELL,
    LabeledState,
    apply_move_word,
    base_state,
    cell_edges,
    cell_path,
    ccw_between,
    edge_cells,
    grow_support,
    normalize,
    polygon_of,
    state_equal,
    steiner_cells,
    walk_stubs,
)

GEN_LETTERS = "aAbB"
_PHI = {"a": "f", "A": "F", "b": "r", "B": "R"}


def parse_gen_word(text: str) -> str:
    for ch in text:
        if ch not in GEN_LETTERS:
            raise ValueError(f"bad generator letter {ch!r} (expected one of a A b B)")
    return text


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


def commutator(x: str, y: str) -> str:
    return x + y + invert_word(x) + invert_word(y)


def word_to_moves(word: str) -> str:
    """Translate a generator word to the move word realizing its action."""
    return "".join(_PHI[c] for c in reversed(word))


def eval_word(word: str) -> LabeledState:
    """The state of the element represented by a generator word."""
    return apply_move_word(base_state(), word_to_moves(parse_gen_word(word)))


# ---------------------------------------------------------------------------
# the defining relations and the derived identity suite
# ---------------------------------------------------------------------------

RELATORS = {
    "a^4": "aaaa",
    "b^3": "bbb",
    "(ba)^5": "ba" * 5,
    "comm1": commutator("bab", "aa" + "bab" + "aa"),
    "comm2": commutator("bab", "aa" + "bb" + "aa" + "bab" + "aa" + "b" + "aa"),
}

_A, _B, _C = "baa", "bba", "bb"

ABC_IDENTITIES = [
    ("C^3", _C * 3, ""),
    ("[AB^-1,A^-1BA]", commutator(_A + invert_word(_B), invert_word(_A) + _B + _A), ""),
    ("[AB^-1,A^-2BA^2]", commutator(_A + invert_word(_B), invert_word(_A) * 2 + _B + _A * 2), ""),
    ("C=BA^-1CB", _C, _B + invert_word(_A) + _C + _B),
    ("CA=(A^-1CB)^2", _C + _A, (invert_word(_A) + _C + _B) * 2),
    ("(A^-1CB)(A^-1BA)=B(A^-2CB^2)",
     invert_word(_A) + _C + _B + invert_word(_A) + _B + _A,
     _B + invert_word(_A) * 2 + _C + _B * 2),
]


# ---------------------------------------------------------------------------
# finite trees anchored at the head cell
# ---------------------------------------------------------------------------

# A tree is a frozenset of internal (trivalent) cells, connected and
# containing the head cell; its edges are all dual edges incident to an
# internal cell, and the frontier edges are its leaves.


def _far_cell(edge, internal):
    a, b = edge_cells(edge)
    if a in internal and b not in internal:
        return b
    if b in internal and a not in internal:
        return a
    raise ValueError("not a frontier edge")


def tree_leaves(internal: frozenset) -> tuple:
    """Leaf edges in label order: leaf 0 first, then counterclockwise."""
    stubs = walk_stubs(internal)
    e = ROOT_EDGE
    far = TAIL_CELL
    while far in internal:
        e = (far[0], far[1] + "L")
        far = (far[0], far[1] + "L") if False else edge_cells(e)[1]
    k = stubs.index(e)
    return tuple(stubs[k:] + stubs[:k])


def _expand(internal: frozenset, leaf_edge) -> frozenset:
    return internal | {_far_cell(leaf_edge, internal)}


@dataclass(frozen=True)
class TreePairSymbol:
    """(target tree, source tree, cyclic shift): source leaf i maps to target leaf i+shift."""

    target: frozenset
    source: frozenset
    shift: int

    @property
    def level(self) -> int:
        return len(self.source) + 2

    def __repr__(self):
        return f"TreePairSymbol(level={self.level}, shift={self.shift})"


def identity_symbol() -> TreePairSymbol:
    tripod = frozenset({HEAD_CELL})
    return TreePairSymbol(tripod, tripod, 0)


def _expand_pair(sym: TreePairSymbol, source_label: int) -> TreePairSymbol:
    src = tree_leaves(sym.source)
    tgt = tree_leaves(sym.target)
    n = len(src)
    new_source = _expand(sym.source, src[source_label])
    new_target = _expand(sym.target, tgt[(source_label + sym.shift) % n])
    # the left descendants correspond, which pins the new shift
    c_s = _far_cell(src[source_label], sym.source)
    c_t = _far_cell(tgt[(source_label + sym.shift) % n], sym.target)
    ls = (c_s[0], c_s[1] + "L")
    lt = (c_t[0], c_t[1] + "L")
    new_src_leaves = tree_leaves(new_source)
    new_tgt_leaves = tree_leaves(new_target)
    shift = (new_tgt_leaves.index(lt) - new_src_leaves.index(ls)) % (n + 1)
    return TreePairSymbol(new_target, new_source, shift)


def _carets(internal: frozenset):
    """Internal cells (never the head) whose two child edges are both leaves."""
    out = []
    for c in internal:
        if c == HEAD_CELL:
            continue
        _, r_edge, l_edge = cell_edges(c)
        if edge_cells(r_edge)[1] not in internal and edge_cells(l_edge)[1] not in internal:
            out.append(c)
    return out


def symbol_reduce(sym: TreePairSymbol) -> TreePairSymbol:
    """Collapse matching caret pairs until the symbol is minimal."""
    while True:
        src_leaves = tree_leaves(sym.source)
        tgt_leaves = tree_leaves(sym.target)
        n = len(src_leaves)
        idx_s = {e: i for i, e in enumerate(src_leaves)}
        idx_t = {e: i for i, e in enumerate(tgt_leaves)}
        tgt_carets = {}
        for c in _carets(sym.target):
            _, r_edge, l_edge = cell_edges(c)
            tgt_carets[idx_t[r_edge]] = (c, idx_t[l_edge])
        done = True
        for c in sorted(_carets(sym.source)):
            _, r_edge, l_edge = cell_edges(c)
            i_r, i_l = idx_s[r_edge], idx_s[l_edge]
            if (i_r + 1) % n != i_l:
                continue
            j = (i_r + sym.shift) % n
            if j not in tgt_carets:
                continue
            c_t, j_l = tgt_carets[j]
            if j_l != (j + 1) % n:
                continue
            new_source = sym.source - {c}
            new_target = sym.target - {c_t}
            down_s = cell_edges(c)[0]
            down_t = cell_edges(c_t)[0]
            ns_leaves = tree_leaves(new_source)
            nt_leaves = tree_leaves(new_target)
            shift = (nt_leaves.index(down_t) - ns_leaves.index(down_s)) % (n - 1)
            sym = TreePairSymbol(new_target, new_source, shift)
            done = False
            break
        if done:
            return sym


def symbol_invert(sym: TreePairSymbol) -> TreePairSymbol:
    n = len(sym.source) + 2
    return TreePairSymbol(sym.source, sym.target, (-sym.shift) % n)


def multiply(x: TreePairSymbol, y: TreePairSymbol) -> TreePairSymbol:
    """Product x*y by expanding both symbols over a common middle tree."""
    x, y = symbol_reduce(x), symbol_reduce(y)
    middle = steiner_cells(x.source | y.target)
    # expand y until its target equals the middle tree
    while y.target != middle:
        tgt_leaves = tree_leaves(y.target)
        n = len(tgt_leaves)
        for j, e in enumerate(tgt_leaves):
            if _far_cell(e, y.target) in middle:
                y = _expand_pair(y, (j - y.shift) % n)
                break
        else:
            raise AssertionError("middle tree unreachable")
    while x.source != middle:
        for j, e in enumerate(tree_leaves(x.source)):
            if _far_cell(e, x.source) in middle:
                x = _expand_pair(x, j)
                break
        else:
            raise AssertionError("middle tree unreachable")
    n = len(middle) + 2
    return symbol_reduce(TreePairSymbol(x.target, y.source, (x.shift + y.shift) % n))


def is_identity_symbol(sym: TreePairSymbol) -> bool:
    r = symbol_reduce(sym)
    return r == identity_symbol()


# ---------------------------------------------------------------------------
# conversions between states and symbols
# ---------------------------------------------------------------------------


def _grow_to(state: LabeledState, cells) -> LabeledState:
    from .core_state import other_cell

    target = steiner_cells(set(state.support) | set(cells))
    s = state
    todo = set(target - s.support)
    while todo:
        c = next(c for c in sorted(todo)
                 if any(other_cell(e, c) in s.support for e in cell_edges(c)))
        s = grow_support(s, c)
        todo.discard(c)
    return s


def _faces_of(state: LabeledState):
    """Faces of the triangulated polygon, each as a ccw cusp triple."""
    n = state.polygon.n
    edges = sorted(state.edge_set())
    nbrs: dict = {i: set() for i in range(n)}
    for (a, b) in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    faces = set()
    for (a, b) in edges:
        for side in (0, 1):
            # unique apex on each side of (a, b)
            cands = [c for c in nbrs[a] & nbrs[b]
                     if (ccw_between(a, c, b, n) if side else ccw_between(b, c, a, n))]
            if len(cands) == 1:
                faces.add(tuple(sorted((a, b, cands[0]))))
    faces = sorted(faces)
    assert len(faces) == n - 2, (faces, n)
    return faces


def to_tree_pair(element_state: LabeledState) -> TreePairSymbol:
    """The reduced tree-pair symbol of the element carried by a state."""
    s = normalize(element_state)
    if HEAD_CELL not in s.support:
        s = _grow_to(s, {HEAD_CELL})
    poly = s.polygon
    n = poly.n
    target = s.support
    faces = _faces_of(s)
    side_faces: dict = {}
    for f in faces:
        a, b, c = f
        for pair in ((a, b), (b, c), (c, a)):
            side_faces.setdefault(tuple(sorted(pair)), []).append(f)
    u, v = s.doe
    doe_key = tuple(sorted((u, v)))
    wl = next(c for f in side_faces[doe_key] for c in f
              if c not in doe_key and ccw_between(v, c, u, n))
    left_face = next(f for f in side_faces[doe_key] if wl in f)
    # mirror the face tree into the base tree, anchored doe-dart -> root-dart
    g = {left_face: HEAD_CELL}
    slot_of_side: dict = {}

    def face_sides_ccw(f):
        a, b, c = f
        return (tuple(sorted((a, b))), tuple(sorted((b, c))), tuple(sorted((c, a))))

    # seed the rotation alignment at the left face
    sides = face_sides_ccw(left_face)
    k0 = sides.index(doe_key)
    slot_of_side[(left_face, doe_key)] = 0
    for d in (1, 2):
        slot_of_side[(left_face, sides[(k0 + d) % 3])] = d
    stack = [left_face]
    leaf_map: dict = {}
    while stack:
        f = stack.pop()
        cell = g[f]
        for side in face_sides_ccw(f):
            slot = slot_of_side[(f, side)]
            edge = cell_edges(cell)[slot]
            nxt = [f2 for f2 in side_faces[side] if f2 != f]
            if not nxt:
                leaf_map[side] = edge
                continue
            f2 = nxt[0]
            if f2 in g:
                continue
            c2 = edge_cells(edge)[0] if edge_cells(edge)[0] != cell else edge_cells(edge)[1]
            c2 = next(c for c in edge_cells(edge) if c != cell)
            g[f2] = c2
            sides2 = face_sides_ccw(f2)
            j0 = sides2.index(side)
            s0 = cell_edges(c2).index(edge)
            for d in range(3):
                slot_of_side[(f2, sides2[(j0 + d) % 3])] = (s0 + d) % 3
            stack.append(f2)
    source = frozenset(g.values())
    assert len(source) == len(faces)
    # leaf correspondence: polygon boundary pair -> source frontier edge
    src_leaves = tree_leaves(source)
    tgt_leaves = tree_leaves(target)
    idx_s = {e: i for i, e in enumerate(src_leaves)}
    idx_t = {e: i for i, e in enumerate(tgt_leaves)}
    shift = None
    for i in range(n):
        pair = tuple(sorted(((i - 1) % n, i)))
        img = poly.boundary[i]
        d = (idx_t[img] - idx_s[leaf_map[pair]]) % n
        if shift is None:
            shift = d
        else:
            assert shift == d, "leaf correspondence is not a cyclic shift"
    return symbol_reduce(TreePairSymbol(target, source, shift))


def to_state(sym: TreePairSymbol) -> LabeledState:
    """The labeled state of the element represented by a symbol."""
    sym = symbol_reduce(sym)
    support = sym.target
    poly = polygon_of(support)
    n = poly.n
    tgt_leaves = tree_leaves(support)
    src_leaves = tree_leaves(sym.source)
    idx_t = {e: i for i, e in enumerate(tgt_leaves)}
    stub_pair = {}
    for i in range(n):
        stub_pair[poly.boundary[i]] = tuple(sorted(((i - 1) % n, i)))
    # each source frontier edge gets the cusp pair of its image stub
    edge_pair: dict = {}
    for i, e in enumerate(src_leaves):
        img_label = (i + sym.shift) % n
        edge_pair[e] = stub_pair[tgt_leaves[img_label]]
    # peel the source tree, assigning cusp pairs to internal edges
    cells = set(sym.source)
    tri_of_cell: dict = {}
    while cells:
        progressed = False
        for c in sorted(cells):
            es = cell_edges(c)
            known = [e for e in es if e in edge_pair]
            if len(known) >= 2:
                cusps = set()
                for e in known:
                    cusps.update(edge_pair[e])
                assert len(cusps) == 3, (c, known, cusps)
                tri_of_cell[c] = tuple(sorted(cusps))
                for e in es:
                    if e not in edge_pair:
                        edge_pair[e] = tuple(sorted(
                            set(edge_pair[known[0]]) ^ set(edge_pair[known[1]])))
                cells.discard(c)
                progressed = True
                break
        assert progressed, "cannot peel source tree"
    chords = set()
    for e, pair in edge_pair.items():
        a, b = edge_cells(e)
        if a in sym.source and b in sym.source:
            chords.add(tuple(sorted(pair)))
    assert len(chords) == n - 3
    # the d.o.e. is the image of the source root edge, oriented so the face
    # carried by the head cell lies on its left
    doe_pair = edge_pair[ROOT_EDGE]
    apex = next(c for c in tri_of_cell[HEAD_CELL] if c not in doe_pair)
    a, b = doe_pair
    doe = (a, b) if ccw_between(b, apex, a, n) else (b, a)
    from .core_state import is_boundary_pair as _ibp
    if _ibp(doe[0], doe[1], n):
        st = _grow_doe_interior(LabeledState(support, frozenset(chords), doe), doe)
        return normalize(st)
    return normalize(LabeledState(support, frozenset(chords), doe))


def _grow_doe_interior(state: LabeledState, doe) -> LabeledState:
    from .core_state import _remap_positions

    poly = state.polygon
    n = poly.n
    lo, hi = tuple(sorted(doe))
    bedge = poly.boundary[hi] if (lo + 1) % n == hi else poly.boundary[lo]
    outside = next(c for c in edge_cells(bedge) if c not in state.support)
    g = grow_support(state, outside)
    mp = _remap_positions(poly, g.polygon)
    return LabeledState(g.support, g.chords, (mp[doe[0]], mp[doe[1]]))


# ---------------------------------------------------------------------------
# element-level API
# ---------------------------------------------------------------------------

_SYM_CACHE: dict = {}


def letter_symbol(letter: str) -> TreePairSymbol:
    if letter not in _SYM_CACHE:
        _SYM_CACHE["a"] = to_tree_pair(eval_word("a"))
        _SYM_CACHE["b"] = to_tree_pair(eval_word("b"))
        _SYM_CACHE["A"] = symbol_invert(_SYM_CACHE["a"])
        _SYM_CACHE["B"] = symbol_invert(_SYM_CACHE["b"])
    return _SYM_CACHE[letter]


def eval_word_symbol(word: str) -> TreePairSymbol:
    """Evaluate a generator word in the tree-pair representation.

    Letter symbols multiply in reversed word order, mirroring the reversed
    move order used by :func:`eval_word`; the two routes land on the same
    element for every word.
    """
    out = identity_symbol()
    for ch in parse_gen_word(word):
        out = multiply(letter_symbol(ch), out)
    return out


def is_identity(word: str) -> bool:
    """Word problem for generator words, decided in both representations."""
    by_state = state_equal(eval_word(word), base_state())
    by_symbol = is_identity_symbol(eval_word_symbol(word))
    assert by_state == by_symbol, f"representations disagree on {word!r}"
    return by_state


def words_equal(u: str, v: str) -> bool:
    return is_identity(u + invert_word(v))
