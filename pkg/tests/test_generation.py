import math
import random

import pytest

from cutseq.exact_arith import ApproxDirection
from cutseq.generation import (
    InvalidPrefixError,
    SynthesisFailure,
    build_family,
    enumerate_factors,
    generate,
    periodic_seeds,
    sandwich_group,
    synthesize_table,
)
from cutseq.polygon import build_polygon
from cutseq.symbolic import (
    InadmissibleWordError,
    PeriodicWord,
    build_diagram,
    derive,
    factor_set,
    word_text,
)
from cutseq.tracer import TraceConfig, trace_word


def canon(words):
    return sorted(str(w) for w in words)


def per(s):
    return PeriodicWord.of(s)


def test_sandwich_groups_octagon():
    assert sandwich_group(0, 4) == {"A": "D", "B": "C", "C": "B", "D": "A"}
    assert sandwich_group(1, 4) == {"A": "D", "B": "C", "C": "B", "D": "B"}
    assert sandwich_group(2, 4) == {"A": "D", "B": "C", "C": "C", "D": "B"}
    assert sandwich_group(3, 4) == {"A": "D", "B": "D", "C": "C", "D": "B"}


def test_table_entries_sector_three():
    t = synthesize_table(4)
    assert t.word(3, "D", "B") == "BCC"
    assert t.word(3, "A", "A") == "DBCCBD"
    assert t.word(3, "A", "B") == "DBCC"
    assert t.word(3, "B", "A") == "CCBD"
    assert t.word(3, "C", "D") == "B"
    assert t.word(3, "B", "D") == "CCB"


def test_table_entries_sector_six():
    t = synthesize_table(4)
    assert t.word(6, "B", "A") == "D"
    assert t.word(6, "A", "B") == "D"
    assert t.word(6, "D", "D") == "BCCB"
    assert t.word(6, "A", "C") == "DBC"
    assert t.word(6, "C", "A") == "CBD"
    assert t.word(6, "C", "D") == "CB"
    assert t.word(6, "D", "C") == "BC"


def test_table_total_over_all_edges():
    for n in (4, 5, 6):
        t = synthesize_table(n)
        for k in range(1, 2 * n):
            for a, b in build_diagram(k, n).edges:
                t.word(k, a, b)  # raises if missing


def test_table_defining_constraint():
    # around any vertex letter, the inserted neighbourhood keeps exactly that
    # letter sandwiched and nothing else
    for n in (4, 6):
        t = synthesize_table(n)
        d0 = build_diagram(0, n)
        for k in range(1, 2 * n):
            dk = build_diagram(k, n)
            for l0, l in dk.edges:
                for l2 in dk.successors(l):
                    chunk = l0 + t.word(k, l0, l) + l + t.word(k, l, l2) + l2
                    assert d0.admits(chunk)
                    assert derive(chunk) == l


def test_table_rejects_binary_alphabet():
    with pytest.raises(ValueError):
        synthesize_table(2)


def test_generate_example_sector_three():
    out = generate(3, 0, "CDBAABDBD")
    assert out == "CBDBCCBCCBDADBCCBDADBCCBCCBDBCCBCCBD"
    assert len(out) == 36


def test_generate_rejects_inadmissible_input():
    with pytest.raises(InadmissibleWordError):
        generate(3, 0, "ADAD")  # AD is not a sector-3 transition
    with pytest.raises(InadmissibleWordError):
        generate(3, 0, "CC")


def test_generate_periodic_examples():
    assert generate(6, 0, per("BA")) == per("BDAD")
    assert generate(6, 1, per("BA")) == per("CADA")


def test_periodic_seeds_octagon():
    assert canon(periodic_seeds(6, 4)) == canon([per("BA"), per("AC"), per("CD"), per("D")])
    for k in range(8):
        seeds = periodic_seeds(k, 4)
        assert len(seeds) == 4
        dk = build_diagram(k, 4)
        for w in seeds:
            assert dk.admits(w)


def test_family_examples():
    assert canon(build_family((0, 6))) == canon(
        [per("BDAD"), per("ADBCCCBD"), per("CCBDBC"), per("DBCCB")]
    )
    assert canon(build_family((1, 6))) == canon(
        [per("CADA"), per("DACBBBCA"), per("BBCACB"), per("ACBBC")]
    )
    assert canon(build_family((0, 1, 6))) == canon(
        [
            per("CBDADADB"),
            per("DADBCBCCBCCBCBDA"),
            per("BCCBCBDADBCBCC"),
            per("ADBCBCCBCBD"),
        ]
    )
    # zero-length chain gives the seed set itself
    assert build_family((6,)) == periodic_seeds(6, 4)
    with pytest.raises(InvalidPrefixError):
        build_family((0, 0, 6))


def test_generation_inverts_derivation_periodic():
    rng = random.Random(404)
    for k in range(1, 8):
        dk = build_diagram(k, 4)
        for _ in range(200):
            w = random_cycle(dk, rng)
            image = generate(k, 0, w)
            assert build_diagram(0, 4).admits(image)
            assert derive(image) == w


def random_cycle(diagram, rng, max_len=24):
    letters = sorted({a for a, _ in diagram.edges})
    while True:
        start = rng.choice(letters)
        path = [start]
        for _ in range(max_len):
            nxt = rng.choice(diagram.successors(path[-1]))
            if nxt == start and len(path) >= rng.randint(1, 6):
                return PeriodicWord.of("".join(path))
            path.append(nxt)


def test_sandwiched_letters_are_the_source_word():
    rng = random.Random(88)
    for k in range(1, 8):
        dk = build_diagram(k, 4)
        for _ in range(50):
            w = random_cycle(dk, rng)
            image = generate(k, 0, w)
            p = image.period
            m = len(p)
            sandwiched = "".join(
                p[i] for i in range(m) if p[(i - 1) % m] == p[(i + 1) % m]
            )
            assert PeriodicWord.of(sandwiched) == w


def test_generation_preserves_and_grows_period():
    rng = random.Random(13)
    for k in range(1, 8):
        dk = build_diagram(k, 4)
        for _ in range(30):
            w = random_cycle(dk, rng)
            image = generate(k, 0, w)
            assert isinstance(image, PeriodicWord)
            assert len(image.period) >= len(w.period)


def test_family_nesting_structure():
    # the depth k+1 family is the depth k chain applied to generated seeds
    rng = random.Random(2)
    prefix = (0, 3, 5, 2)
    inner = generate(2, 5, per("AC"), 4)
    chained = build_family(prefix, seeds=[per("AC")])
    direct = build_family(prefix[:-1], seeds=[inner])
    assert chained == direct


def test_enumerate_factors_single_letters():
    factors = enumerate_factors(ApproxDirection(0.9), 1, depth=8)
    assert factors == {"A", "B", "C", "D"}


def test_enumerate_factors_matches_trace():
    poly = build_polygon(4)
    theta = 0.9
    enum = enumerate_factors(ApproxDirection(theta), 6, depth=25)
    traced = trace_word(
        poly, (0.05, -0.11), ApproxDirection(theta), TraceConfig(max_crossings=200_000)
    )
    assert factor_set(traced, 6) == enum
    assert len(enum) == 3 * 6 + 1


def test_enumerate_factors_terminating_direction():
    # at the cylinder direction pi/8 the trace only sees the two period-2 words
    poly = build_polygon(4)
    traced = trace_word(
        poly, (0.1, 1 / 7), ApproxDirection(math.pi / 8), TraceConfig(max_crossings=5000)
    )
    enum = enumerate_factors(ApproxDirection(math.pi / 8), 4, depth=10)
    assert factor_set(traced, 4) <= enum
    assert factor_set(traced, 4) <= factor_set(per("AD"), 4) | factor_set(per("BC"), 4)


def test_family_members_are_periodic_cutting_sequences():
    # every generated family word is realized by a periodic trajectory at the
    # terminating direction its renormalization chain determines (each word
    # occupies one cylinder of that direction, so several starts are scanned)
    from cutseq.coherence import renormalize
    from cutseq.farey import Expansion, direction_from_expansion
    from cutseq.tracer import (
        TraceConfig,
        VertexHit,
        detect_period,
        random_interior_point,
        trace_word,
    )

    rng = random.Random(77)
    poly = build_polygon(4)
    for prefix in [(0, 1, 6), (0, 6)]:
        for w in build_family(prefix):
            tr = renormalize(w, 14, 4, start_diagram=prefix[0])
            assert tr.failure is None and tr.tail in (1, 7)
            cut = tr.depth
            while cut > 1 and tr.diagrams[cut - 1] == tr.tail:
                cut -= 1
            exp = Expansion(4, tr.diagrams[:cut], tr.tail)
            direction = ApproxDirection(direction_from_expansion(exp, 14).lo.theta())
            realized = False
            for _ in range(80):
                start = random_interior_point(poly, rng)
                try:
                    period = detect_period(
                        poly, start, direction, TraceConfig(max_crossings=4000)
                    )
                    if period != len(w.period):
                        continue
                    traced = trace_word(
                        poly, start, direction, TraceConfig(max_crossings=period)
                    )
                except VertexHit:
                    continue
                if PeriodicWord.of(traced) == w:
                    realized = True
                    break
            assert realized, (prefix, str(w))
