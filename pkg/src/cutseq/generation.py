"""Generation operators: the combinatorial inverses of derivation.

Deriving a word admissible in sector 0 leaves a word admissible in some sector
k >= 1; generation undoes this by re-inserting, between every pair of adjacent
letters, a fixed interpolating word.  The interpolating word for an edge
L1 -> L2 of the sector-k diagram is synthesized, not transcribed: it is the
unique sandwich-free path from L1 to L2 through the sector-0 diagram whose
first and last letters sandwich L1 and L2 according to the sandwich group of
index floor(k/2).  Chaining generation operators along an expansion prefix
builds the word families whose factors exhaust the cutting sequences of a
direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .farey import itinerary
from .symbolic import (
    InadmissibleWordError,
    PeriodicWord,
    TransitionDiagram,
    Wordlike,
    WordWindow,
    boundary_diagram,
    build_diagram,
    factor_set,
    letter_at,
    letter_index,
    letters_for,
    sector_permutation,
    transitions,
    word_text,
)


class SynthesisFailure(RuntimeError):
    """No (or no unique) interpolating word satisfies the sandwich constraints."""


class InvalidPrefixError(ValueError):
    pass


@lru_cache(maxsize=None)
def sandwich_group(l: int, n: int) -> dict[str, str]:
    """Group index l in 0..n-1: the letter that must sandwich each letter.

    Letters with index j <= n - l are sandwiched by their image under the
    reflection permutation j -> n+1-j, the rest by the vertical-reflection
    permutation (1 fixed, j -> n+2-j).
    """
    if not 0 <= l < n:
        raise IndexError(f"sandwich group index {l} outside 0..{n - 1}")
    out = {}
    for j in range(1, n + 1):
        if j <= n - l:
            out[letter_at(j)] = letter_at(n + 1 - j)
        else:
            out[letter_at(j)] = letter_at(1 if j == 1 else n + 2 - j)
    return out


def _sandwich_free_paths(d0: TransitionDiagram, u: str, v: str, cap: int) -> list[str]:
    """All paths u -> v in the sector-0 diagram with no sandwiched interior letter.

    Paths are returned as full vertex strings including both endpoints.  The
    no-sandwich invariant prunes the search: appending x after ...y,z is only
    allowed when y != x (else z would be sandwiched).  The cap guards against a
    runaway search; it is never reached for the diagrams produced here.
    """
    found: list[str] = []
    stack: list[str] = [u]

    def extend(path: str) -> None:
        if len(path) > cap:
            raise SynthesisFailure("interpolation path search exceeded its length cap")
        if len(path) >= 2 and path[-1] == v:
            found.append(path)
            # a longer continuation may also end at v, so keep searching
        for nxt in d0.successors(path[-1]):
            if len(path) >= 2 and path[-2] == nxt:
                continue  # would sandwich the current last letter
            extend(path + nxt)

    extend(u)
    return found


@dataclass(frozen=True)
class InterpolationTable:
    """Interpolating words for every edge of every sector diagram k = 1..2n-1."""

    n: int
    words: dict[tuple[int, str, str], str]

    def word(self, k: int, a: str, b: str) -> str:
        try:
            return self.words[(k, a, b)]
        except KeyError:
            raise InadmissibleWordError(
                f"{a}->{b} is not an edge of diagram {k} (n={self.n})"
            ) from None


@lru_cache(maxsize=None)
def synthesize_table(n: int) -> InterpolationTable:
    """Build the full interpolation table for alphabet size n >= 3.

    For each sector k and each edge L1 -> L2 of its diagram, exactly one
    sandwich-free sector-0 path must match the sandwich group floor(k/2) at
    both ends: an empty insertion needs L1 to sandwich L2 and vice versa, a
    non-empty one must start with the sandwiching letter of L1 and end with
    the sandwiching letter of L2.
    """
    if n < 3:
        raise ValueError("generation needs an alphabet of at least 3 letters")
    letters_for(n)
    d0 = build_diagram(0, n)
    words: dict[tuple[int, str, str], str] = {}
    for k in range(1, 2 * n):
        group = sandwich_group(k // 2, n)
        for a, b in build_diagram(k, n).edges:
            candidates = []
            for path in _sandwich_free_paths(d0, a, b, cap=2 * n + 4):
                mid = path[1:-1]
                if mid:
                    ok = mid[0] == group[a] and mid[-1] == group[b]
                else:
                    ok = a == group[b] and b == group[a]
                if ok:
                    candidates.append(mid)
            if len(candidates) != 1:
                raise SynthesisFailure(
                    f"edge {a}->{b} of diagram {k}: {len(candidates)} candidate "
                    f"interpolations {candidates!r}"
                )
            words[(k, a, b)] = candidates[0]
    return InterpolationTable(n, words)


# -- generation operators ------------------------------------------------------


def generate(k: int, i: int, w: Wordlike, n: int = 4) -> Wordlike:
    """Interpolate a word admissible in sector k into one admissible in sector i.

    The insertion produces a sector-0 word whose derived word is w; relabelling
    by the inverse renormalizing permutation moves it to sector i.  Periodic
    words are interpolated around the wrap as well and stay periodic.
    """
    if not 1 <= k <= 2 * n - 1:
        raise InvalidPrefixError(f"source diagram {k} outside 1..{2 * n - 1}")
    if not 0 <= i <= 2 * n - 1:
        raise InvalidPrefixError(f"target diagram {i} outside 0..{2 * n - 1}")
    table = synthesize_table(n)
    if not build_diagram(k, n).admits(w):
        raise InadmissibleWordError(f"word {word_text(w)!r} not admissible in diagram {k}")
    s = word_text(w)
    if not s:
        return w
    parts = [s[0]]
    for a, b in transitions(w):
        parts.append(table.word(k, a, b))
        parts.append(b)
    if isinstance(w, PeriodicWord):
        # transitions() already included the wrap pair, whose closing letter
        # duplicates the first letter of the cycle
        body = "".join(parts)[:-1]
        out: Wordlike = PeriodicWord.of(body)
    elif isinstance(w, WordWindow):
        out = WordWindow("".join(parts))
    else:
        out = "".join(parts)
    if i == 0:
        return out
    from .symbolic import permute  # local import keeps module order simple

    return permute(sector_permutation(i, n).inverse(), out)


def periodic_seeds(k: int, n: int = 4) -> frozenset[PeriodicWord]:
    """Periodic words of period 1 or 2 living on a boundary diagram next to sector k.

    These are the cutting sequences of the two cylinder directions bounding
    sector k; for the octagon each set has exactly four elements.
    """
    k = k % (2 * n)
    seen: set[PeriodicWord] = set()
    for diagram in (boundary_diagram(k, n), boundary_diagram((k + 1) % (2 * n), n)):
        for a, b in diagram.edges:
            if a == b:
                seen.add(PeriodicWord.of(a))
            elif (b, a) in diagram.edges:
                seen.add(PeriodicWord.of(a + b))
    return frozenset(seen)


def build_family(
    prefix: tuple[int, ...] | list[int],
    seeds=None,
    n: int = 4,
) -> frozenset:
    """Chained generation along an expansion prefix, applied to every seed.

    With the default periodic seeds this produces periodic cutting sequences
    whose expansions start with the prefix; arbitrary admissible seed words
    give the corresponding cylinder of the closure.
    """
    prefix = tuple(prefix)
    if not prefix:
        raise InvalidPrefixError("empty prefix")
    if not 0 <= prefix[0] <= 2 * n - 1 or any(not 1 <= s <= 2 * n - 1 for s in prefix[1:]):
        raise InvalidPrefixError(f"prefix {prefix} violates the entry constraints")
    if seeds is None:
        seeds = periodic_seeds(prefix[-1], n)
    words = list(seeds)
    for pos in range(len(prefix) - 1, 0, -1):
        words = [generate(prefix[pos], prefix[pos - 1], w, n) for w in words]
    return frozenset(words)


def enumerate_factors(
    direction_or_prefix,
    length: int,
    depth: int = 30,
    n: int = 4,
    max_word_length: int = 200_000,
) -> frozenset[str]:
    """All length-l factors of cutting sequences in a direction (or prefix cylinder).

    The periodic family along the expansion prefix is deepened until its factor
    set is unchanged for three consecutive depths, the (n-1)l+1 complexity
    ceiling is reached, or the depth cap runs out.  The deepest set is returned:
    shallow families also code nearby directions whose spurious factors die out
    as the cylinder shrinks, so sets from different depths are never mixed.
    Generated words grow geometrically through expanding branches, hence the
    word-length safety valve (the set has long stabilized by then).
    """
    if length < 1 or depth < 1:
        raise ValueError("length and depth must be >= 1")
    if isinstance(direction_or_prefix, (tuple, list)):
        entries = tuple(direction_or_prefix)
        depth = len(entries) - 1
    else:
        entries = itinerary(direction_or_prefix, n, depth + 1)
    ceiling = (n - 1) * length + 1
    factors: frozenset[str] = frozenset()
    previous: frozenset[str] | None = None
    stable = 0
    for k in range(depth + 1):
        family = build_family(entries[: k + 1], n=n)
        fs = frozenset().union(*(factor_set(w, length) for w in family))
        factors = fs
        if len(fs) >= ceiling:
            break
        if previous is not None and fs == previous:
            stable += 1
            if stable >= 2:  # three consecutive equal sets
                break
        else:
            stable = 0
        previous = fs
        if max(len(word_text(w)) for w in family) > max_word_length:
            break
    return factors
