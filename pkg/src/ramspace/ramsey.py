"""Witness computation and certification for finite Ramsey-type theorems.

All searches share one shape.  A *level* m names a finite instance: the
canonical full stem of the space truncated at m, the domain of
length-k approximations sitting at depth exactly m, the witness objects
of length n at the same depth, and for each witness the configuration
of domain items below it.  A level is a *witness level* when every
s-coloring of the domain leaves some witness's configuration
monochromatic; searches walk m upward from the smallest structurally
possible value and certify the first witness level found.

Concrete instances:

  * classical finite Ramsey numbers, through the one-point shift that
    identifies k-subsets of an initial segment with (k+1)-subsets
    pinned at the segment's top element;
  * finite vector Ramsey numbers over GF(q) (Graham-Leeb-Rothschild):
    domains are the rank-k echelon matrices with m columns, witnesses
    the rank-n ones, configurations the subspace order;
  * partition Ramsey numbers (Graham-Rothschild parameter sets):
    domains are the k-block partitions of the level, configurations the
    coarsenings of an m-block witness.

Lower bounds are explicit bad colorings, exhaustively verified; found
values are certified by either a full scan of all s^N colorings or an
exhausted backtracking search over color-canonical assignments.  Every
certificate replays through verify_witness, an independent checker
that re-derives the instance and never reuses the searcher's tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import Approximation, Space, Stem
from .errors import CeilingExceededError
from .forcing import (
    ALT1,
    ALT2,
    FrontFamily,
    GalvinParams,
    galvin_search,
)
from .spaces import (
    ell_space,
    matrix_space,
    parse_params_str,
    partition_space,
)

FOUND = "found"
LOWER_BOUND = "lower_bound"
EXHAUSTED = "exhausted"

EXHAUSTIVE_CEILING = 1 << 25


@dataclass(frozen=True)
class Coloring:
    """A total coloring of a declared family of approximations."""

    space: Space
    k: int
    s: int
    mapping: dict

    def of(self, a: Approximation) -> int:
        key = self.space.serialize(a)
        if key not in self.mapping:
            raise ValueError(f"coloring is not total: missing {key}")
        c = self.mapping[key]
        if not 0 <= c < self.s:
            raise ValueError(f"color {c} out of range for s={self.s}")
        return c

    @classmethod
    def from_function(cls, space: Space, k: int, s: int, domain, fn) -> "Coloring":
        return cls(space, k, s, {space.serialize(a): fn(a) for a in domain})


@dataclass
class LevelInstance:
    kind: str
    level: int
    k: int
    n: int
    q: int | None
    space: Space
    items: list[Approximation]
    witnesses: list[Approximation]
    configs: list[list[int]]

    def instance_str(self) -> str:
        parts = [f"instance={self.kind}", f"k={self.k}", f"n={self.n}"]
        if self.q is not None:
            parts.append(f"q={self.q}")
        return ";".join(parts)


def _level_space(kind: str, m: int, q: int) -> tuple[Space, Stem]:
    if kind == "ellentuck":
        sp = ell_space(max(m, 1))
        return sp, sp.full_stem()
    if kind == "matrix":
        sp = matrix_space(q, max(m, 1))
        return sp, sp.identity_stem(m)
    if kind == "partition":
        sp = partition_space(max(m, 1))
        return sp, sp.discrete_stem(m)
    raise ValueError(f"unknown space kind {kind!r}")


def build_level(kind: str, m: int, k: int, n: int, q: int | None = None) -> LevelInstance:
    """The depth-m instance: domain, witnesses, and configurations."""
    space, stem = _level_space(kind, m, q or 2)
    top = stem.top
    prev = space.restrict(top, m - 1) if m >= 1 else None

    def at_depth(a: Approximation) -> bool:
        if not space.fin_leq(a, top):
            return False
        return m == 0 or not space.fin_leq(a, prev)

    below = space.fin_below(top)
    items = [a for a in below if a.length == k and at_depth(a)]
    witnesses = [b for b in below if b.length == n and at_depth(b)]
    configs = [
        [i for i, a in enumerate(items) if space.fin_leq(a, b)] for b in witnesses
    ]
    return LevelInstance(kind, m, k, n, q, space, items, witnesses, configs)


@dataclass
class WitnessResult:
    outcome: str  # found | lower_bound | exhausted
    value: int | None
    found_certificate: str | None = None
    lower_bound_certificate: str | None = None
    stats: dict = field(default_factory=dict)

    def csv_row(self, instance: str, seconds: str = "") -> str:
        value = "" if self.value is None else str(self.value)
        checked = self.stats.get("colorings_checked", self.stats.get("nodes", 0))
        return f"{instance},{self.outcome},{value},{checked},{seconds}"


def _mono_witness_exists(coloring, configs) -> bool:
    for cfg in configs:
        if not cfg:
            continue
        first = coloring[cfg[0]]
        if all(coloring[i] == first for i in cfg[1:]):
            return True
    return False


def _coloring_from_index(idx: int, s: int, size: int) -> list[int]:
    out = [0] * size
    for j in range(size - 1, -1, -1):
        out[j] = idx % s
        idx //= s
    return out


def _scan_range(configs, s, size, lo, hi):
    """First bad coloring index in [lo, hi), or -1 (worker for --jobs)."""
    coloring = _coloring_from_index(lo, s, size)
    for idx in range(lo, hi):
        if idx > lo:
            j = size - 1
            while True:
                coloring[j] += 1
                if coloring[j] < s:
                    break
                coloring[j] = 0
                j -= 1
        if not _mono_witness_exists(coloring, configs):
            return idx
    return -1


def _level_exhaustive(inst: LevelInstance, s: int, ceiling: int, jobs: int = 1):
    """(is_witness, first bad coloring or None, colorings checked).

    With jobs > 1 the coloring range is split across processes; the
    reported bad coloring is the index-minimal one either way, so the
    result does not depend on scheduling.
    """
    size = len(inst.items)
    total = s**size
    if total > ceiling:
        raise CeilingExceededError(
            f"exhaustive mode needs {s}^{size} colorings; use backtracking",
            total,
            ceiling,
        )
    if jobs > 1 and total >= 4 * jobs:
        import multiprocessing

        bounds = [total * i // (jobs * 4) for i in range(jobs * 4)] + [total]
        spans = [
            (inst.configs, s, size, lo, hi)
            for lo, hi in zip(bounds, bounds[1:])
            if lo < hi
        ]
        with multiprocessing.Pool(jobs) as pool:
            hits = [idx for idx in pool.starmap(_scan_range, spans) if idx >= 0]
        if hits:
            first = min(hits)
            return False, _coloring_from_index(first, s, size), first + 1
        return True, None, total
    checked = 0
    for coloring in itertools.product(range(s), repeat=size):
        checked += 1
        if not _mono_witness_exists(coloring, inst.configs):
            return False, list(coloring), checked
    return True, None, checked


def _level_backtracking(inst: LevelInstance, s: int, node_budget: int | None):
    """Search for a bad coloring, pruning color-permutation copies.

    Colors are assigned in canonical item order under the
    restricted-growth rule (a new color may only follow all smaller
    ones), which enumerates exactly one representative per color
    permutation class; a configuration that becomes fully colored and
    monochromatic prunes the branch.  Exhausting the tree therefore
    proves the level is a witness.  Returns (is_witness | None,
    bad_coloring | None, nodes); None means the budget ran out.
    """
    size = len(inst.items)
    configs = inst.configs
    per_item = [[] for _ in range(size)]
    for gi, cfg in enumerate(configs):
        for i in cfg:
            per_item[i].append(gi)
    if any(not cfg for cfg in configs):
        # An empty configuration is monochromatic under every coloring.
        return True, None, 0

    colors = [-1] * size
    nodes = 0

    def prunes(i: int) -> bool:
        for gi in per_item[i]:
            cfg = configs[gi]
            c0 = colors[cfg[0]]
            if c0 < 0:
                continue
            if all(colors[j] == c0 for j in cfg):
                return True
        return False

    def rec(i: int, used: int):
        nonlocal nodes
        if i == size:
            return list(colors)
        for c in range(min(used + 1, s)):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise _BudgetExhausted()
            colors[i] = c
            if not prunes(i):
                hit = rec(i + 1, max(used, c + 1))
                if hit is not None:
                    return hit
            colors[i] = -1
        return None

    try:
        bad = rec(0, 0)
    except _BudgetExhausted:
        return None, None, nodes
    if bad is None:
        return True, None, nodes
    return False, bad, nodes


class _BudgetExhausted(Exception):
    pass


def _witness_certificate(inst: LevelInstance, s: int, mode: str, stats: dict) -> str:
    lines = [
        "ramsey-certificate v1",
        inst.instance_str(),
        f"s={s}",
        "claim=witness",
        f"level={inst.level}",
        f"domain={len(inst.items)}",
        f"witnesses={len(inst.witnesses)}",
        f"mode={mode}",
    ]
    for key in sorted(stats):
        lines.append(f"{key}={stats[key]}")
    return "\n".join(lines) + "\n"


def _bad_certificate(inst: LevelInstance, s: int, coloring: list[int]) -> str:
    lines = [
        "ramsey-certificate v1",
        inst.instance_str(),
        f"s={s}",
        "claim=bad-coloring",
        f"level={inst.level}",
        f"domain={len(inst.items)}",
        f"witnesses={len(inst.witnesses)}",
    ]
    for a, c in zip(inst.items, coloring):
        lines.append(f"item={inst.space.serialize(a)};color={c}")
    return "\n".join(lines) + "\n"


def finite_ramsey_witness(
    kind: str,
    k: int,
    n: int,
    s: int,
    bound: int,
    mode: str = "exhaustive",
    q: int | None = None,
    exhaustive_ceiling: int = EXHAUSTIVE_CEILING,
    node_budget: int | None = None,
    jobs: int = 1,
) -> WitnessResult:
    """Least level m <= bound at which every s-coloring of the depth-m
    domain admits a witness with a monochromatic configuration.

    Found results carry a witness-level certificate and, when a lower
    level was examined, the bad coloring refuting it; when every level
    up to the bound is refuted the outcome is `exhausted` with the last
    refutation.  A level the chosen mode cannot decide (ceiling or
    budget) stops the search with outcome `lower_bound`: only the
    refuted levels below it are then known.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if s < 1:
        raise ValueError("need s >= 1")
    if mode not in ("exhaustive", "backtracking"):
        raise ValueError(f"unknown mode {mode!r}")
    last_bad: str | None = None
    last_bad_level: int | None = None
    stats: dict = {"levels_examined": 0}
    for m in range(n, bound + 1):
        inst = build_level(kind, m, k, n, q)
        stats["levels_examined"] += 1
        if mode == "exhaustive":
            is_witness, bad, checked = _level_exhaustive(
                inst, s, exhaustive_ceiling, jobs=jobs
            )
            stats["colorings_checked"] = checked
            level_stats = {"colorings_checked": checked}
        else:
            is_witness, bad, nodes = _level_backtracking(inst, s, node_budget)
            stats["nodes"] = nodes
            level_stats = {"nodes": nodes}
            if is_witness is None:
                return WitnessResult(
                    LOWER_BOUND,
                    last_bad_level,
                    lower_bound_certificate=last_bad,
                    stats=dict(stats, undecided_level=m),
                )
        if is_witness:
            return WitnessResult(
                FOUND,
                m,
                found_certificate=_witness_certificate(inst, s, mode, level_stats),
                lower_bound_certificate=last_bad,
                stats=stats,
            )
        last_bad = _bad_certificate(inst, s, bad)
        last_bad_level = m
    return WitnessResult(
        EXHAUSTED, None, lower_bound_certificate=last_bad, stats=stats
    )


def glr_witness(
    q: int, k: int, n: int, s: int, bound: int, mode: str = "exhaustive", **kw
) -> WitnessResult:
    """Least m such that s-colorings of the k-dimensional subspaces of
    F_q^m always leave the k-subspaces of some n-dimensional subspace
    monochromatic."""
    return finite_ramsey_witness(
        "matrix", k, n, s, bound, mode=mode, q=q, **kw
    )


def gr_paramset_witness(
    k: int, m: int, s: int, bound: int, mode: str = "exhaustive", **kw
) -> WitnessResult:
    """Least n such that s-colorings of the k-block partitions of n
    always leave the k-block coarsenings of some m-block partition
    monochromatic."""
    return finite_ramsey_witness("partition", k, m, s, bound, mode=mode, **kw)


# ----- classical numbers through the shift -----


def _classical_cert_from_inner(inner_cert: str, k: int, n: int, s: int) -> str:
    """Translate an inner pinned-subset certificate into classical terms.

    Inner items are (k+1)-subsets of {0..m-1} containing m-1; dropping
    the pinned point turns a level-m statement about them into the
    classical statement about k-subsets of {0..m-2}.
    """
    lines = inner_cert.splitlines()
    out = []
    for ln in lines:
        if ln.startswith("instance="):
            out.append(f"instance=classical;k={k};n={n}")
        elif ln.startswith("level="):
            m = int(ln.split("=")[1])
            out.append(f"level={m - 1}")
        elif ln.startswith("item="):
            body, _, color = ln[5:].partition(";color=")
            elems = [int(x) for x in body.strip("{}").split(",")]
            kept = sorted(elems)[:-1]
            out.append(
                "item={" + ",".join(str(x) for x in kept) + "};color=" + color
            )
        elif ln.startswith("domain=") or ln.startswith("witnesses="):
            out.append(ln)
        else:
            out.append(ln)
    return "\n".join(out) + ("\n" if not out[-1].endswith("\n") else "")


def classical_ramsey_number(
    k: int, n: int, s: int, bound: int, mode: str = "exhaustive", **kw
) -> WitnessResult:
    """Least M such that every s-coloring of the k-subsets of {0..M-1}
    has a monochromatic n-subset.

    Runs the pinned-subset search one dimension up (k+1, n+1) and
    shifts the level down by one; the certificates are expressed in
    classical terms and verified directly against the classical
    statement by verify_witness.
    """
    inner = finite_ramsey_witness("ellentuck", k + 1, n + 1, s, bound + 1, mode=mode, **kw)
    value = None if inner.value is None else inner.value - 1
    found = (
        _classical_cert_from_inner(inner.found_certificate, k, n, s)
        if inner.found_certificate
        else None
    )
    lower = (
        _classical_cert_from_inner(inner.lower_bound_certificate, k, n, s)
        if inner.lower_bound_certificate
        else None
    )
    return WitnessResult(
        inner.outcome,
        value,
        found_certificate=found,
        lower_bound_certificate=lower,
        stats=inner.stats,
    )


# ----- the abstract reduction -----


@dataclass
class ReduceResult:
    outcome: str  # "mono" | "inconclusive"
    stem: Stem | None
    color: int | None
    certificates: list[str]
    diagnostics: str = ""


def abs_ramsey_reduce(
    coloring: Coloring, A: Stem, params: GalvinParams | None = None
) -> ReduceResult:
    """A reduct on which the coloring of length-k approximations is
    constant, obtained by peeling color classes off with the dichotomy
    search (color 0 against the rest, recursing into the rest)."""
    space = coloring.space
    k, s = coloring.k, coloring.s
    if s < 1 or k < 1:
        raise ValueError("need s >= 1 and k >= 1")
    certificates: list[str] = []
    current = A
    for color in range(s - 1):
        members = [
            a
            for a in space.fin_below(current.top)
            if a.length == k and coloring.of(a) == color
        ]
        family = FrontFamily(space, tuple(members), k)
        res = galvin_search(current, family, params)
        certificates.append(res.certificate)
        if res.outcome == ALT2:
            _assert_monochromatic(space, res.stem, k, coloring, color)
            return ReduceResult("mono", res.stem, color, certificates)
        if res.outcome == ALT1:
            current = res.stem
            continue
        return ReduceResult(
            "inconclusive", None, None, certificates, diagnostics=res.diagnostics
        )
    _assert_monochromatic(space, current, k, coloring, s - 1)
    return ReduceResult("mono", current, s - 1, certificates)


def _assert_monochromatic(space, stem, k, coloring, color):
    for a in space.fin_below(stem.top):
        if a.length == k and coloring.of(a) != color:
            raise AssertionError(
                f"reduction returned a non-monochromatic stem: "
                f"{space.serialize(a)} has color {coloring.of(a)} != {color}"
            )


# ----- dual-to-classical encoding -----


def dual_to_classical_encoding(t: Approximation) -> Approximation:
    """The set of block minima of a partition, with 0 removed.

    Pulls colorings of k-subsets back to (k+1)-block partitions: a
    partition with k+1 blocks whose first block contains 0 encodes the
    k-subset of its positive block minima.
    """
    if t.space_tag != "partition":
        raise TypeError("expected a partition approximation")
    minima = tuple(sorted(b[0] for b in t.payload if b[0] != 0))
    return Approximation("ellentuck", minima, len(minima))


# ----- independent certificate verification -----


def _rebuild_level_from_fields(fields: dict) -> LevelInstance:
    inst = parse_params_str(fields["instance_line"])
    kind = inst["instance"]
    k, n = int(inst["k"]), int(inst["n"])
    q = int(inst["q"]) if "q" in inst else None
    m = int(fields["level"])
    if kind == "classical":
        return _classical_level(m, k, n)
    return build_level(kind, m, k, n, q)


def _classical_level(M: int, k: int, n: int) -> LevelInstance:
    space = ell_space(max(M, 1))
    items = [space.make(c) for c in itertools.combinations(range(M), k)]
    witnesses = [space.make(c) for c in itertools.combinations(range(M), n)]
    index = {a.payload: i for i, a in enumerate(items)}
    configs = [
        [index[c] for c in itertools.combinations(b.payload, k)] for b in witnesses
    ]
    return LevelInstance("classical", M, k, n, None, space, items, witnesses, configs)


def verify_witness(certificate: str, exhaustive_ceiling: int = EXHAUSTIVE_CEILING) -> bool:
    """Replay a search certificate without the search engine.

    The instance is rebuilt from the certificate header alone.  A
    witness claim is re-established by scanning every coloring with an
    independent monochromaticity check (dictionary-based, no index
    tables shared with the searcher); a bad-coloring claim is checked
    by confirming totality and that every witness configuration is
    non-monochromatic.  Malformed or tampered certificates are rejected.
    """
    try:
        lines = [ln for ln in certificate.splitlines() if ln.strip()]
        if lines[0] != "ramsey-certificate v1":
            return False
        fields = {"instance_line": lines[1]}
        items_colors: list[tuple[str, int]] = []
        for ln in lines[2:]:
            if ln.startswith("item="):
                body, _, color = ln[5:].partition(";color=")
                items_colors.append((body, int(color)))
            else:
                key, _, value = ln.partition("=")
                fields[key] = value
        s = int(fields["s"])
        inst = _rebuild_level_from_fields(fields)
        if int(fields["domain"]) != len(inst.items):
            return False
        if int(fields["witnesses"]) != len(inst.witnesses):
            return False
        claim = fields["claim"]
    except Exception:
        return False

    space = inst.space
    witness_sets = [
        {space.serialize(inst.items[i]) for i in cfg} for cfg in inst.configs
    ]

    def monochromatic(colors: dict) -> bool:
        for ws in witness_sets:
            if not ws:
                continue
            seen = {colors[key] for key in ws}
            if len(seen) == 1:
                return True
        return False

    if claim == "bad-coloring":
        colors = dict(items_colors)
        if len(colors) != len(inst.items):
            return False
        if {space.serialize(a) for a in inst.items} != set(colors):
            return False
        if any(not 0 <= c < s for c in colors.values()):
            return False
        return not monochromatic(colors)

    if claim == "witness":
        keys = [space.serialize(a) for a in inst.items]
        if s ** len(keys) > exhaustive_ceiling:
            return False
        for assignment in itertools.product(range(s), repeat=len(keys)):
            if not monochromatic(dict(zip(keys, assignment))):
                return False
        return True

    return False
