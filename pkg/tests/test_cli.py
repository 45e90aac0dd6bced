import json
import xml.etree.ElementTree as ET

import pytest

from cutseq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_derive_example(capsys):
    doc = run_json(capsys, "derive", "--word", "CACCCDBDCDC")
    assert doc["derived"] == "ACBCD"
    assert doc["schema"] == "cutseq/derive/1"
    assert doc["manifest"]["command"] == "derive"


def test_families_example(capsys):
    doc = run_json(capsys, "families", "--prefix", "0,1,6")
    assert doc["words"] == [
        "per:ADADBCBCCBCCBCBD",
        "per:ADADBCBD",
        "per:ADBCBCCBCBD",
        "per:ADBCBCCBCCBCBD",
    ]


def test_trace_vertical(capsys):
    doc = run_json(
        capsys, "trace", "--n", "4", "--theta", "1.5707963", "--crossings", "5",
        "--start", "0,0.01",
    )
    assert doc["word"] == "AAAAA"
    assert len(doc["crossings"]) == 5


def test_trace_exact_angle_syntax(capsys):
    doc = run_json(
        capsys, "trace", "--theta", "pi/2", "--crossings", "3", "--start", "0,0.01"
    )
    assert doc["word"] == "AAA"


def test_recognize(capsys):
    window = "AADBDAAAADBDBCBDBDAAAADBDAAAADBDAAAADBDBCBDBDAAADBDBDAAADB"
    doc = run_json(capsys, "recognize", "--word", window, "--depth", "3")
    assert doc["diagrams"] == [4, 7, 2]
    assert doc["interval_lo"] < doc["interval_hi"]


def test_expand_direction(capsys):
    doc = run_json(capsys, "expand-direction", "--cot", "2+1*sqrt2", "--depth", "6")
    assert doc["itinerary"][:3] == [0, 1, 6]
    assert doc["terminating"] is True
    assert doc["termination_certainty"] == "exact"


def test_generate_and_seeds(capsys):
    doc = run_json(capsys, "generate", "--from", "3", "--to", "0", "--word", "CDBAABDBD")
    assert doc["generated"] == "CBDBCCBCCBDADBCCBDADBCCBCCBDBCCBCCBD"
    doc = run_json(capsys, "seeds", "--k", "6")
    assert doc["seeds"] == ["per:AB", "per:AC", "per:CD", "per:D"]


def test_enumerate(capsys):
    doc = run_json(capsys, "enumerate", "--theta", "0.9", "--len", "2", "--depth", "10")
    assert doc["count"] == 7  # 3*2 + 1


def test_check_coherence_incoherent_word(capsys):
    doc = run_json(
        capsys, "check-coherence", "--word", "per:CCCBDBCCBDBCCBDBCBDADB", "--i", "0",
        "--j", "6", "--depth", "0",
    )
    step = doc["steps"][0]
    assert step["accepted"] is False and step["failed"] == "C1"
    assert doc["coherent"] is False


def test_check_coherence_chain(capsys):
    window = "AADBDAAAADBDBCBDBDAAAADBDAAAADBDAAAADBDBCBDBDAAADBDBDAAADB"
    doc = run_json(capsys, "check-coherence", "--word", window, "--depth", "2")
    assert doc["coherent"] is True
    assert [s["i"] for s in doc["steps"]] == [4, 7]


def test_complexity(capsys):
    doc = run_json(
        capsys, "complexity", "--theta", "0.9", "--len", "8", "--crossings", "20000"
    )
    assert doc["counts"]["8"] == doc["linear_bound"]["8"] == 25


def test_diagrams(capsys):
    doc = run_json(capsys, "diagrams", "--index", "0")
    assert doc["diagrams"]["0"] == ["AD", "BC", "BD", "CB", "CC", "DA", "DB"]


def test_plot_svg(capsys):
    code, out, err = run(
        capsys, "plot", "--theta", "0.7", "--start", "0.03,-0.04", "--crossings", "20"
    )
    assert code == 0
    root = ET.fromstring(out)
    assert root.tag.endswith("svg")


def test_usage_error_exit_code(capsys):
    code, out, err = run(capsys, "derive")  # missing --word
    assert code == 1


def test_unknown_command_exit_code(capsys):
    code, out, err = run(capsys, "frobnicate")
    assert code == 1


def test_domain_error_exit_code(capsys):
    # a periodic word admissible in several diagrams cannot be recognized
    code, out, err = run(capsys, "recognize", "--word", "per:AD", "--depth", "3")
    assert code == 2
    assert "diagrams" in err or "ambig" in err.lower()


def test_vertex_hit_exit_code(capsys):
    # aim at a vertex from the center
    import math

    from cutseq.polygon import build_polygon

    vx, vy = build_polygon(4).vertices[2]
    theta = math.atan2(vy, vx)
    code, out, err = run(
        capsys, "trace", "--theta", repr(theta), "--start", "0,0", "--crossings", "5"
    )
    assert code == 2


def test_manifest_replay_byte_identical(capsys):
    argv = ["trace", "--theta", "0.4", "--crossings", "12", "--seed", "9"]
    code, first, _ = run(capsys, *argv, "--timestamp", "2026-01-01T00:00:00+00:00")
    assert code == 0
    manifest = json.loads(first)["manifest"]
    replay = ["trace"]
    for key, value in manifest["flags"].items():
        if value is True:
            replay.append(f"--{key}")
        elif value is not False:
            replay += [f"--{key}", str(value)]
    code, second, _ = run(capsys, *replay)
    assert code == 0
    assert first == second


def test_trace_exact_mode(capsys):
    doc = run_json(
        capsys, "trace", "--cot", "2+1*sqrt2", "--exact", "--start", "1/10,1/7",
        "--crossings", "6",
    )
    assert doc["direction"]["cot"] == "2+1*sqrt2"
    assert len(doc["word"]) == 6
    # exact tracing demands an exact direction
    code, _, err = run(capsys, "trace", "--theta", "0.5", "--exact", "--crossings", "3")
    assert code == 2


def test_matrix_json_form():
    from cutseq.polygon import veech_elements

    sigma, _ = veech_elements(4)
    assert sigma.to_json() == ["1", "2+2*sqrt2", "0", "1"]


def test_derive_exhaustion_warning(capsys):
    doc_code, out, err = run(capsys, "derive", "--word", "ADADAD", "--times", "6")
    assert doc_code == 0
    doc = json.loads(out)
    assert doc["exhausted_at"] is not None
    assert "exhausted" in err
