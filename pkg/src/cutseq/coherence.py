"""Coherence checks, word-level renormalization, and direction recognition.

A word admissible in sector i is coherent for the pair (i, j) when its
normalized form has all sandwiched letters in a single sandwich group, the
derived word is admissible in sector j >= 1, and the group index is floor(j/2).
Coherence is exactly the condition under which the word is a generated image
g(j -> i) of its own derived word, and the two characterizations are
implemented independently: one through sandwich profiles and groups, one
through explicit regeneration.  Iterating normalize-and-derive yields the
sequence of admissible sectors, which is the expansion of the direction of any
trajectory realizing the word.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .farey import SectorInterval, sector_interval
from .generation import generate, sandwich_group, synthesize_table
from .symbolic import (
    AmbiguousDiagramError,
    InadmissibleWordError,
    PeriodicWord,
    Wordlike,
    WordWindow,
    admissible_diagrams,
    build_diagram,
    derive,
    permute,
    sector_permutation,
    word_text,
)


class NotCoherentError(ValueError):
    """The word is not a generated image for the requested sector."""


class InsufficientWindowError(ValueError):
    """The window ran out of letters before the requested depth."""


def sandwich_profile(w: Wordlike) -> dict[str, frozenset[str]]:
    """For each letter, the set of letters sandwiching it somewhere in the word.

    Only interior occurrences count: the boundary letters of a window have
    unknown neighbours.  Periodic words wrap around.
    """
    s = word_text(w)
    m = len(s)
    prof: dict[str, set[str]] = {}
    if isinstance(w, PeriodicWord):
        positions = range(m)
    else:
        positions = range(1, m - 1)
    for idx in positions:
        left = s[(idx - 1) % m] if isinstance(w, PeriodicWord) else s[idx - 1]
        right = s[(idx + 1) % m] if isinstance(w, PeriodicWord) else s[idx + 1]
        if left == right:
            prof.setdefault(s[idx], set()).add(left)
    return {letter: frozenset(v) for letter, v in prof.items()}


def fitting_groups(profile: dict[str, frozenset[str]], n: int) -> tuple[int, ...]:
    """Sandwich-group indices consistent with every sandwiched occurrence seen.

    A letter that never occurs sandwiched constrains nothing; this is the
    weakest sound reading on finite windows.
    """
    out = []
    for l in range(n):
        group = sandwich_group(l, n)
        if all(seen <= {group[letter]} for letter, seen in profile.items()):
            out.append(l)
    return tuple(out)


@dataclass(frozen=True)
class CoherenceVerdict:
    accepted: bool
    failed: str | None = None  # "C0" | "C1" | "C2" | "C3"
    groups: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.accepted


def check_coherent(w: Wordlike, i: int, j: int, n: int = 4) -> CoherenceVerdict:
    """Conditions C0..C3 for the pair (i, j); rejection names the first failure."""
    if not build_diagram(i, n).admits(w):
        return CoherenceVerdict(False, "C0")
    nw = permute(sector_permutation(i, n), w)
    groups = fitting_groups(sandwich_profile(nw), n)
    if not groups:
        return CoherenceVerdict(False, "C1", ())
    derived = derive(nw)
    if derived is None or not 1 <= j <= 2 * n - 1 or not build_diagram(j, n).admits(derived):
        return CoherenceVerdict(False, "C2", groups)
    if j // 2 not in groups:
        return CoherenceVerdict(False, "C3", groups)
    return CoherenceVerdict(True, None, groups)


def _core_matches(nw: Wordlike, j: int, v: Wordlike, n: int) -> bool:
    """Does regenerating v with sector-j rules reproduce the normalized word?

    Periodic words must match exactly (as rotations).  For a window only the
    stretch between its first and last sandwiched letters is determined by v,
    and the overhanging stubs must be a suffix and a prefix of interpolating
    words of the right sector.
    """
    if isinstance(nw, PeriodicWord):
        return generate(j, 0, v, n) == nw
    s = word_text(nw)
    vtext = word_text(v)
    if not vtext:
        return False
    sandwiched = [idx for idx in range(1, len(s) - 1) if s[idx - 1] == s[idx + 1]]
    lo, hi = sandwiched[0], sandwiched[-1]
    if s[lo : hi + 1] != word_text(generate(j, 0, vtext, n)):
        return False
    table = synthesize_table(n)
    return _is_suffix_of_rule(s[:lo], table, j, vtext[0]) and _is_prefix_of_rule(
        s[hi + 1 :], table, j, vtext[-1]
    )


def _is_suffix_of_rule(stub: str, table, j: int, target: str) -> bool:
    """Can stub be the visible tail of [previous letter + interpolating word]?"""
    if not stub:
        return True
    return any(
        b == target and (a + w).endswith(stub)
        for (k, a, b), w in table.words.items()
        if k == j
    )


def _is_prefix_of_rule(stub: str, table, j: int, source: str) -> bool:
    """Can stub be the visible head of [interpolating word + next letter]?"""
    if not stub:
        return True
    return any(
        a == source and (w + b).startswith(stub)
        for (k, a, b), w in table.words.items()
        if k == j
    )


def decompose_candidates(w: Wordlike, i: int, n: int = 4) -> list[tuple[int, Wordlike]]:
    """All sectors j such that w is the sector-(i) generated image of derive(n(w))."""
    if not build_diagram(i, n).admits(w):
        return []
    nw = permute(sector_permutation(i, n), w)
    v = derive(nw)
    if v is None or not word_text(v):
        return []
    out = []
    for j in range(1, 2 * n):
        if not build_diagram(j, n).admits(v):
            continue
        if _core_matches(nw, j, v, n):
            out.append((j, v))
    return out


def decompose_generation(w: Wordlike, i: int, n: int = 4) -> tuple[int, Wordlike]:
    """Find (j, v) with w = g(j -> i, v), v = derive(n(w)); cross-validated.

    Raises NotCoherentError when no sector works and AmbiguousDiagramError when
    several do (which happens only for short periodic words).
    """
    candidates = decompose_candidates(w, i, n)
    if not candidates:
        raise NotCoherentError(f"word is not coherent at sector {i}")
    if len(candidates) > 1:
        raise AmbiguousDiagramError(
            f"decomposition ambiguous: sectors {[j for j, _ in candidates]}"
        )
    return candidates[0]


# -- renormalization -----------------------------------------------------------


@dataclass(frozen=True)
class RenormalizationStep:
    word: Wordlike
    diagram: int
    normalized: Wordlike


@dataclass
class RenormalizationTrace:
    steps: list[RenormalizationStep] = field(default_factory=list)
    failure: str | None = None  # "inadmissible" | "ambiguous" | "window_exhausted"
    ambiguous_set: tuple[int, ...] = ()
    tail: int | None = None
    split: tuple[int, tuple[int, ...]] | None = None  # (step, candidate pair)

    @property
    def diagrams(self) -> tuple[int, ...]:
        return tuple(step.diagram for step in self.steps)

    @property
    def depth(self) -> int:
        return len(self.steps)


def _resolve_split(cur: Wordlike, pair: list[int], n: int) -> int:
    """Pick the expansion entry that the itinerary uses at a tail split.

    A coherent continuation is ambiguous exactly when the next derived word is
    a period-<=2 fixed word; the two valid entries are adjacent, and the
    itinerary form takes the odd one before an eventually-1 tail and the even
    one before an eventually-(2n-1) tail.
    """
    j_even, j_odd = sorted(pair)[0], sorted(pair)[1]
    if j_odd % 2 == 0:
        j_even, j_odd = j_odd, j_even
    nxt = derive(permute(sector_permutation(j_odd, n), cur))
    if isinstance(nxt, PeriodicWord):
        if permute(sector_permutation(1, n), nxt) == nxt:
            return j_odd
        if permute(sector_permutation(2 * n - 1, n), nxt) == nxt:
            return j_even
    return j_odd


def _is_fixed_tail_word(w: Wordlike, d: int, n: int) -> bool:
    return (
        isinstance(w, PeriodicWord)
        and len(w.period) <= 2
        and d in (1, 2 * n - 1)
        and permute(sector_permutation(d, n), w) == w
    )


def renormalize(
    w: Wordlike,
    max_depth: int,
    n: int = 4,
    start_diagram: int | None = None,
) -> RenormalizationTrace:
    """Iterate normalize-then-derive, recording the admissible sector each time.

    The first entry must be unique or supplied; later ambiguity is filtered by
    coherence with the previous step, which pins the entry except at the tail
    split of periodic words (where the itinerary form is chosen and the split
    recorded).  Halts early on inadmissibility, unresolvable ambiguity, or a
    window running out of letters, reporting which.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    trace = RenormalizationTrace()
    cur: Wordlike | None = w
    for k in range(max_depth):
        if cur is None or (not isinstance(cur, PeriodicWord) and len(word_text(cur)) == 0):
            trace.failure = "window_exhausted"
            return trace
        found = admissible_diagrams(cur, n)
        if not found:
            trace.failure = "inadmissible"
            return trace
        if k == 0 and start_diagram is not None:
            if start_diagram not in found:
                trace.failure = "inadmissible"
                return trace
            d = start_diagram
        elif len(found) == 1:
            d = found[0]
        elif k == 0:
            trace.failure = "ambiguous"
            trace.ambiguous_set = found
            return trace
        else:
            prev = trace.steps[-1]
            allowed = [j for j, _ in decompose_candidates(prev.word, prev.diagram, n) if j in found]
            if len(allowed) == 1:
                d = allowed[0]
            elif len(allowed) == 2 and abs(allowed[0] - allowed[1]) == 1:
                trace.split = (k, tuple(sorted(allowed)))
                d = _resolve_split(cur, allowed, n)
            else:
                trace.failure = "ambiguous"
                trace.ambiguous_set = found
                return trace
        normalized = permute(sector_permutation(d, n), cur)
        trace.steps.append(RenormalizationStep(cur, d, normalized))
        if _is_fixed_tail_word(cur, d, n):
            trace.tail = d
            for _ in range(k + 1, max_depth):
                trace.steps.append(RenormalizationStep(cur, d, normalized))
            return trace
        cur = derive(normalized)
    return trace


def recognize_direction(w: Wordlike, max_depth: int, n: int = 4) -> SectorInterval:
    """Sector interval of the directions of trajectories whose coding extends w.

    The interval is the expansion cylinder of the recorded sector sequence; it
    always contains the true direction and shrinks as the depth grows.
    """
    trace = renormalize(w, max_depth, n)
    if trace.failure == "window_exhausted":
        raise InsufficientWindowError(
            f"window exhausted after {trace.depth} of {max_depth} derivations"
        )
    if trace.failure == "ambiguous":
        raise AmbiguousDiagramError(
            f"admissible diagrams {trace.ambiguous_set} at depth {trace.depth}"
        )
    if trace.failure is not None:
        raise InadmissibleWordError(f"renormalization failed: {trace.failure}")
    return sector_interval(trace.diagrams, n)
