"""Exact desk-scale solvers for colorability, chromatic number and degeneracy.

These serve double duty: the contraction pipeline asks "is this digraph
(2k-3)-colorable?" at every step, and the test harness uses the same solvers
as verification oracles.  Everything here is exact; instances beyond the cap
raise :class:`CapExceeded` instead of silently approximating.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import UGraph, iter_bits
from .errors import CapExceeded, PreconditionViolated

DEFAULT_COLOR_CAP = 16


@dataclass(frozen=True)
class Coloring:
    """A vertex coloring; ``colors[v]`` is in ``[0, palette_size)``."""

    colors: tuple[int, ...]
    palette_size: int


@dataclass(frozen=True)
class EliminationOrder:
    """A deletion sequence certifying degeneracy.

    Scanning ``order`` left to right as deletions, every deleted vertex has at
    most ``bound`` neighbors still present at its deletion time.
    """

    order: tuple[int, ...]
    bound: int


def is_proper(g: UGraph, coloring: Coloring) -> bool:
    """Independent coloring checker: no monochromatic edge, all colors in range."""
    cols = coloring.colors
    if len(cols) != g.n:
        return False
    if any(not (0 <= c < coloring.palette_size) for c in cols):
        return False
    return all(cols[a] != cols[b] for a, b in g.edges)


def elimination_back_degree(g: UGraph, order: tuple[int, ...]) -> int:
    """Independent order checker: replay the deletions, return the worst degree.

    Raises :class:`PreconditionViolated` when ``order`` is not a permutation
    of the vertices.
    """
    if sorted(order) != list(range(g.n)):
        raise PreconditionViolated("order is not a permutation of the vertices")
    remaining = (1 << g.n) - 1
    worst = 0
    for v in order:
        remaining &= ~(1 << v)
        worst = max(worst, (g.adj_mask[v] & remaining).bit_count())
    return worst


def _greedy_clique(g: UGraph) -> list[int]:
    # Deterministic greedy clique, used only as a lower bound seed.
    by_degree = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    clique: list[int] = []
    cmask = 0
    for v in by_degree:
        if g.adj_mask[v] & cmask == cmask:
            clique.append(v)
            cmask |= 1 << v
    return clique


def _dsatur_greedy(g: UGraph) -> Coloring:
    # Saturation-first greedy; an upper bound, exact only by luck.
    n = g.n
    colors = [-1] * n
    neighbor_used = [0] * n
    uncolored = set(range(n))
    while uncolored:
        v = max(
            uncolored,
            key=lambda w: (neighbor_used[w].bit_count(), g.degree(w), -w),
        )
        c = 0
        used = neighbor_used[v]
        while (used >> c) & 1:
            c += 1
        colors[v] = c
        uncolored.remove(v)
        for w in iter_bits(g.adj_mask[v]):
            neighbor_used[w] |= 1 << c
    palette = max(colors) + 1 if n else 0
    return Coloring(tuple(colors), palette)


def _two_color(g: UGraph) -> Coloring | None:
    colors = [-1] * g.n
    for root in range(g.n):
        if colors[root] != -1:
            continue
        colors[root] = 0
        queue = [root]
        while queue:
            v = queue.pop()
            for w in iter_bits(g.adj_mask[v]):
                if colors[w] == -1:
                    colors[w] = 1 - colors[v]
                    queue.append(w)
                elif colors[w] == colors[v]:
                    return None
    palette = (max(colors) + 1) if g.n else 0
    return Coloring(tuple(colors), palette)


def k_colorable(g: UGraph, c: int, *, cap: int | None = None) -> Coloring | None:
    """Exact test: a proper coloring with at most ``c`` colors, or ``None``.

    Shortcut paths (no edges, ``c >= n``, bipartite, clique refusal, greedy
    success) work at any size; the backtracking core is capped.
    """
    if c < 0:
        raise PreconditionViolated("palette size must be nonnegative")
    n = g.n
    if n == 0:
        return Coloring((), 0)
    if c == 0:
        return None
    if not g.edges:
        return Coloring((0,) * n, 1)
    if c >= n:
        return Coloring(tuple(range(n)), n)
    if c == 1:
        return None
    greedy = _dsatur_greedy(g)
    if greedy.palette_size <= c:
        return greedy
    if c == 2:
        return _two_color(g)
    clique = _greedy_clique(g)
    if len(clique) > c:
        return None
    cap = DEFAULT_COLOR_CAP if cap is None else cap
    if n > cap:
        raise CapExceeded(f"exact {c}-colorability needs n <= {cap}, got {n}")
    return _color_backtrack(g, c, clique)


def _color_backtrack(g: UGraph, c: int, clique: list[int]) -> Coloring | None:
    n = g.n
    colors = [-1] * n
    neighbor_used = [0] * n

    def assign(v: int, col: int) -> None:
        colors[v] = col
        for w in iter_bits(g.adj_mask[v]):
            neighbor_used[w] |= 1 << col

    def unassign(v: int, col: int) -> None:
        colors[v] = -1
        for w in iter_bits(g.adj_mask[v]):
            if all(colors[x] != col for x in iter_bits(g.adj_mask[w])):
                neighbor_used[w] &= ~(1 << col)

    # Pre-color the seed clique; distinct colors there lose no generality.
    for i, v in enumerate(clique):
        assign(v, i)
    max_used = len(clique) - 1

    def pick() -> int:
        return max(
            (v for v in range(n) if colors[v] == -1),
            key=lambda w: (neighbor_used[w].bit_count(), g.degree(w), -w),
        )

    def bt(colored: int, max_used: int) -> bool:
        if colored == n:
            return True
        v = pick()
        limit = min(max_used + 2, c)
        for col in range(limit):
            if (neighbor_used[v] >> col) & 1:
                continue
            assign(v, col)
            if bt(colored + 1, max(max_used, col)):
                return True
            unassign(v, col)
        return False

    if bt(len(clique), max_used):
        palette = max(colors) + 1
        return Coloring(tuple(colors), palette)
    return None


def chromatic_number(g: UGraph, *, cap: int | None = None) -> tuple[int, Coloring]:
    """Exact chromatic number with a witness coloring."""
    if g.n == 0:
        return 0, Coloring((), 0)
    lower = max(len(_greedy_clique(g)), 1)
    greedy = _dsatur_greedy(g)
    if greedy.palette_size == lower:
        return lower, greedy
    two = _two_color(g)
    if two is not None:
        return two.palette_size, two
    lower = max(lower, 3)
    for c in range(lower, greedy.palette_size):
        witness = k_colorable(g, c, cap=cap)
        if witness is not None:
            return c, witness
    return greedy.palette_size, greedy


def degeneracy(g: UGraph) -> EliminationOrder:
    """Minimum-degree peeling; the achieved bound is the exact degeneracy."""
    remaining = (1 << g.n) - 1
    order: list[int] = []
    bound = 0
    for _ in range(g.n):
        v = min(
            iter_bits(remaining),
            key=lambda w: ((g.adj_mask[w] & remaining).bit_count(), w),
        )
        bound = max(bound, (g.adj_mask[v] & remaining).bit_count())
        order.append(v)
        remaining &= ~(1 << v)
    return EliminationOrder(tuple(order), bound)


def greedy_color_by_order(g: UGraph, order: EliminationOrder) -> Coloring:
    """Greedy coloring along the reversed deletion sequence.

    A valid order with bound ``d`` yields at most ``d + 1`` colors.
    """
    if sorted(order.order) != list(range(g.n)):
        raise PreconditionViolated("order does not cover the vertex set")
    colors = [-1] * g.n
    for v in reversed(order.order):
        used = 0
        for w in iter_bits(g.adj_mask[v]):
            if colors[w] != -1:
                used |= 1 << colors[w]
        c = 0
        while (used >> c) & 1:
            c += 1
        colors[v] = c
    palette = max(colors) + 1 if g.n else 0
    return Coloring(tuple(colors), palette)
