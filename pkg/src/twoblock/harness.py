"""Instance generation, small-tournament enumeration, and empirical audits.

Everything here is deterministic per (seed, configuration): enumeration runs
in bitmask order, random generators take explicit seeds, and reports sort by
instance id so output files are byte-stable regardless of worker count.
"""

from __future__ import annotations

import concurrent.futures
import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Iterator

import random

from .coloring import chromatic_number
from .detection import (
    AbsenceReport,
    TwoBlockCertificate,
    find_two_block_cycle,
    find_two_block_cycle_through_arc,
    hamiltonian_cycle,
    longest_cycle,
)
from .digraph import Digraph, is_strong, underlying_graph
from .errors import CapExceeded, PreconditionViolated

TOURNAMENT_CAP = 7


def encode_arcs_hex(d: Digraph) -> str:
    """Hex bitmask of the n x n adjacency matrix, row-major, diagonal zero."""
    bits = 0
    for t, h in d.arcs:
        bits |= 1 << (t * d.n + h)
    width = max((d.n * d.n + 3) // 4, 1)
    return format(bits, f"0{width}x")


def decode_arcs_hex(n: int, encoded: str) -> Digraph:
    bits = int(encoded, 16)
    arcs = frozenset(
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and (bits >> (i * n + j)) & 1
    )
    return Digraph(n, arcs)


@dataclass
class InstanceRecord:
    """One evaluated digraph; every recorded property is re-verifiable."""

    instance_id: str
    seed: int | None
    vertex_count: int
    arcs_hex: str
    tags: dict[str, bool] = field(default_factory=dict)
    properties: dict[str, object] = field(default_factory=dict)

    def digraph(self) -> Digraph:
        return decode_arcs_hex(self.vertex_count, self.arcs_hex)

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "instance_id": self.instance_id,
                "seed": self.seed,
                "vertex_count": self.vertex_count,
                "arcs_hex": self.arcs_hex,
                "tags": self.tags,
                "properties": self.properties,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json_line(line: str) -> "InstanceRecord":
        data = json.loads(line)
        return InstanceRecord(
            data["instance_id"],
            data["seed"],
            data["vertex_count"],
            data["arcs_hex"],
            data["tags"],
            data["properties"],
        )


def enumerate_tournaments(n: int, *, dedup: bool = False) -> Iterator[Digraph]:
    """All labeled tournaments on ``n`` vertices, in bitmask order.

    With ``dedup`` only the first representative of each isomorphism class is
    yielded (feasible for small ``n``; the canonical form is exact).
    """
    if n > TOURNAMENT_CAP:
        raise CapExceeded(f"tournament enumeration needs n <= {TOURNAMENT_CAP}")
    if n < 1:
        raise PreconditionViolated("need n >= 1")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen: set[int] = set()
    for bits in range(1 << len(pairs)):
        arcs = frozenset(
            (i, j) if (bits >> idx) & 1 else (j, i)
            for idx, (i, j) in enumerate(pairs)
        )
        d = Digraph(n, arcs)
        if dedup:
            canon = canonical_form(d)
            if canon in seen:
                continue
            seen.add(canon)
        yield d


def canonical_form(d: Digraph) -> int:
    """Minimum adjacency bitmask over all vertex permutations (exact, small n)."""
    n = d.n
    best: int | None = None
    for perm in permutations(range(n)):
        bits = 0
        for t, h in d.arcs:
            bits |= 1 << (perm[t] * n + perm[h])
        if best is None or bits < best:
            best = bits
    return best if best is not None else 0


def random_strong_digraph(n: int, seed: int, *, density: float = 0.3) -> Digraph:
    """Rejection-sample a strong digraph with the given arc density."""
    if n < 1:
        raise PreconditionViolated("need n >= 1")
    rng = random.Random(seed)
    while True:
        arcs = frozenset(
            (i, j)
            for i in range(n)
            for j in range(n)
            if i != j and rng.random() < density
        )
        d = Digraph(n, arcs)
        if is_strong(d):
            return d


def random_hamiltonian_min_degree(n: int, min_degree: int, seed: int) -> Digraph:
    """A Hamiltonian digraph whose underlying minimum degree is forced up.

    Starts from the directed cycle 0 -> 1 -> ... -> n-1 -> 0 and keeps adding
    random non-arcs until every underlying degree reaches ``min_degree``.
    """
    if min_degree > n - 1:
        raise PreconditionViolated("min_degree cannot exceed n - 1")
    rng = random.Random(seed)
    arcs = {(i, (i + 1) % n) for i in range(n)}
    candidates = [
        (i, j) for i in range(n) for j in range(n) if i != j and (i, j) not in arcs
    ]
    rng.shuffle(candidates)
    d = Digraph(n, frozenset(arcs))
    for cand in candidates:
        if all(d.underlying_degree(v) >= min_degree for v in range(n)):
            break
        t, h = cand
        if min(d.underlying_degree(t), d.underlying_degree(h)) >= min_degree:
            continue
        arcs.add(cand)
        d = Digraph(n, frozenset(arcs))
    if any(d.underlying_degree(v) < min_degree for v in range(n)):
        raise PreconditionViolated("degree target unreachable")
    return d


def random_strong_ckl_free(
    n: int,
    k: int,
    ell: int,
    seed: int,
    *,
    cap: int | None = None,
    max_chords: int | None = None,
) -> Digraph:
    """A strong digraph verified free of ``c(k, ell)`` by exhaustive detection.

    Construction: the directed Hamiltonian cycle plus random chords, each kept
    only when it creates no two-block cycle.  Chord trials use the
    arc-anchored incremental search (complete because the digraph before the
    trial is already free); the finished digraph gets one full exhaustive
    verification.  Deterministic per seed.
    """
    if k < 2 or ell < 1 or ell > k:
        raise PreconditionViolated("need k >= 2 and k >= ell >= 1")
    if n < 3:
        raise PreconditionViolated("need n >= 3")
    from .detection import DEFAULT_DETECT_CAP

    effective_cap = DEFAULT_DETECT_CAP if cap is None else cap
    if n > effective_cap:
        raise CapExceeded(f"generator needs n <= {effective_cap}, got {n}")
    rng = random.Random(seed)
    arcs = {(i, (i + 1) % n) for i in range(n)}
    candidates = [
        (i, j) for i in range(n) for j in range(n) if i != j and (i, j) not in arcs
    ]
    rng.shuffle(candidates)
    if max_chords is not None:
        candidates = candidates[:max_chords]
    for cand in candidates:
        trial = Digraph(n, frozenset(arcs | {cand}))
        if find_two_block_cycle_through_arc(trial, k, ell, cand) is None:
            arcs.add(cand)
    d = Digraph(n, frozenset(arcs))
    outcome = find_two_block_cycle(d, k, ell, cap=effective_cap)
    if not isinstance(outcome, AbsenceReport) or outcome.mode != "exhaustive":
        raise PreconditionViolated(
            "generator postcondition failed: instance is not verified free"
        )
    return d


def random_cycle_tree_free(
    n: int,
    k: int,
    ell: int,
    seed: int,
    *,
    cap: int | None = None,
    extra_arcs: int | None = None,
) -> Digraph:
    """A (usually non-Hamiltonian) strong ``c(k, ell)``-free digraph.

    Grows a chain of directed cycles glued at single vertices -- such a union
    has only unique paths between vertices, hence no two-block cycle at all --
    and then sprinkles random extra arcs, each kept only when the arc-anchored
    detector finds nothing through it.  Produces instances whose contraction
    pipeline sees multi-cycle trees and external arcs, which the Hamiltonian
    generator never does.
    """
    if k < 2 or ell < 1 or ell > k:
        raise PreconditionViolated("need k >= 2 and k >= ell >= 1")
    base_len = max(2 * k - 2, 2)
    if n < base_len:
        raise PreconditionViolated(f"need n >= {base_len}")
    from .detection import DEFAULT_DETECT_CAP

    effective_cap = DEFAULT_DETECT_CAP if cap is None else cap
    if n > effective_cap:
        raise CapExceeded(f"generator needs n <= {effective_cap}, got {n}")
    rng = random.Random(seed)
    arcs: set[tuple[int, int]] = {(i, (i + 1) % base_len) for i in range(base_len)}
    total = base_len
    while total < n:
        room = n - total
        if room < base_len - 1:
            break
        length = rng.randint(base_len, min(base_len + 3, room + 1))
        attach = rng.randrange(total)
        ring = [attach] + list(range(total, total + length - 1))
        total += length - 1
        for i, v in enumerate(ring):
            arcs.add((v, ring[(i + 1) % len(ring)]))
    d = Digraph(total, frozenset(arcs))
    candidates = [
        (i, j)
        for i in range(total)
        for j in range(total)
        if i != j and (i, j) not in arcs
    ]
    rng.shuffle(candidates)
    if extra_arcs is not None:
        candidates = candidates[: extra_arcs * 4]
    added = 0
    for cand in candidates:
        if extra_arcs is not None and added >= extra_arcs:
            break
        trial = Digraph(total, frozenset(arcs | {cand}))
        if find_two_block_cycle_through_arc(trial, k, ell, cand) is None:
            arcs.add(cand)
            added += 1
    d = Digraph(total, frozenset(arcs))
    outcome = find_two_block_cycle(d, k, ell, cap=effective_cap)
    if not isinstance(outcome, AbsenceReport) or outcome.mode != "exhaustive":
        raise PreconditionViolated(
            "generator postcondition failed: instance is not verified free"
        )
    return d


def _evaluate_tournament(args: tuple[int, int]) -> InstanceRecord | None:
    n, bits = args
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    arcs = frozenset(
        (i, j) if (bits >> idx) & 1 else (j, i)
        for idx, (i, j) in enumerate(pairs)
    )
    d = Digraph(n, arcs)
    if not is_strong(d):
        return None
    verdicts: dict[str, bool] = {}
    missing = False
    for k in range(1, n):
        ell = n - k
        found = find_two_block_cycle(d, k, ell)
        verdicts[f"{k},{ell}"] = isinstance(found, TwoBlockCertificate)
        if not verdicts[f"{k},{ell}"]:
            missing = True
    if not missing:
        return None
    ham = hamiltonian_cycle(d)
    return InstanceRecord(
        instance_id=f"t{n}-{bits:07d}",
        seed=None,
        vertex_count=n,
        arcs_hex=encode_arcs_hex(d),
        tags={"strong": True, "tournament": True, "hamiltonian": ham is not None},
        properties={
            "chi": n,
            "longest_cycle": longest_cycle(d).length,
            "two_block": verdicts,
        },
    )


def search_problem1(n: int, *, workers: int = 1) -> list[InstanceRecord]:
    """Strong labeled tournaments on ``n`` vertices missing some ``c(k, ell)``
    with ``k + ell = n``; per-pair verdicts are recorded for every hit.

    A strong tournament is ``n``-chromatic, so each hit is a digraph whose
    chromatic number meets ``k + ell`` yet avoids that two-block cycle.
    """
    if not 4 <= n <= TOURNAMENT_CAP:
        raise CapExceeded(f"search needs 4 <= n <= {TOURNAMENT_CAP}")
    jobs = [(n, bits) for bits in range(1 << (n * (n - 1) // 2))]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_tournament, jobs, chunksize=64))
    else:
        results = [_evaluate_tournament(job) for job in jobs]
    hits = [r for r in results if r is not None]
    hits.sort(key=lambda r: r.instance_id)
    return hits


@dataclass
class BondyReport:
    """Longest-cycle-vs-chromatic-number audit over strong instances."""

    checked: int
    violations: list[dict[str, object]]

    def summary(self) -> str:
        status = "OK" if not self.violations else "VIOLATED"
        return (
            f"bondy audit: {self.checked} strong digraphs checked, "
            f"{len(self.violations)} violations [{status}]"
        )


def _bondy_eval(d: Digraph) -> tuple[int, int]:
    return longest_cycle(d).length, chromatic_number(underlying_graph(d))[0]


def audit_bondy(instances: Iterable[Digraph], *, workers: int = 1) -> BondyReport:
    """Check longest-cycle length >= chromatic number on strong digraphs.

    Zero violations expected; anything else flags a solver bug.  Results are
    merged in input order, so worker count never changes the report.
    """
    digraphs = list(instances)
    for d in digraphs:
        if not is_strong(d):
            raise PreconditionViolated("bondy audit expects strong digraphs")
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            measured = list(pool.map(_bondy_eval, digraphs, chunksize=8))
    else:
        measured = [_bondy_eval(d) for d in digraphs]
    violations: list[dict[str, object]] = []
    for d, (cycle_len, chi) in zip(digraphs, measured):
        if cycle_len < chi:
            violations.append(
                {
                    "arcs_hex": encode_arcs_hex(d),
                    "vertex_count": d.n,
                    "longest_cycle": cycle_len,
                    "chi": chi,
                }
            )
    return BondyReport(len(digraphs), violations)


@dataclass
class BwRow:
    tournament_bits: int
    k: int
    ell: int
    contains: bool


@dataclass
class BwReport:
    """Per-tournament, per-pair truth table for the all-pairs containment claim.

    The claim under audit: every tournament on ``n >= 4`` vertices contains
    ``c(k, ell)`` whenever ``k + ell = n``.  Violations are surfaced without
    interpretation.
    """

    n: int
    rows: list[BwRow]

    def violations(self) -> list[BwRow]:
        return [r for r in self.rows if not r.contains]

    def to_csv(self) -> str:
        lines = ["tournament_bits,k,ell,contains"]
        for r in self.rows:
            lines.append(
                f"{r.tournament_bits},{r.k},{r.ell},{int(r.contains)}"
            )
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        v = self.violations()
        return (
            f"two-block containment audit at n={self.n}: {len(self.rows)} rows, "
            f"{len(v)} violating (tournament, pair) rows"
        )


def audit_bw_claim(n: int) -> BwReport:
    """Exhaustive truth table over all labeled tournaments and k + ell = n."""
    if n < 4:
        raise PreconditionViolated("the audited claim is scoped to n >= 4")
    if n > 6:
        raise CapExceeded("audit needs n <= 6")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows: list[BwRow] = []
    for bits in range(1 << len(pairs)):
        arcs = frozenset(
            (i, j) if (bits >> idx) & 1 else (j, i)
            for idx, (i, j) in enumerate(pairs)
        )
        d = Digraph(n, arcs)
        cache: dict[tuple[int, int], bool] = {}
        for k in range(1, n):
            ell = n - k
            key = (min(k, ell), max(k, ell))
            if key not in cache:
                found = find_two_block_cycle(d, key[0], key[1])
                cache[key] = isinstance(found, TwoBlockCertificate)
            rows.append(BwRow(bits, k, ell, cache[key]))
    return BwReport(n, rows)


def write_records(records: Iterable[InstanceRecord], path: str) -> int:
    """Persist records as JSON lines, sorted by instance id; returns the count."""
    ordered = sorted(records, key=lambda r: r.instance_id)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in ordered:
            fh.write(rec.to_json_line() + "\n")
    return len(ordered)
