import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from fibercomp.cli import run
from fibercomp.nt_classify import canonical_key
from fibercomp.surface_kernel import parse_mapping_class, parse_surface


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def report(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_classify_trefoil():
    code, out = report("classify", "--knot", "torus(2,3)")
    assert code == 0
    assert out["schema"] == 1
    assert out["type"] == "periodic" and out["period"] == 6
    assert out["genus"] == 1 and out["root_fdtc"] == "1/6"
    assert out["alexander"] == [1, -1, 1]


def test_classify_identity_surface():
    code, out = report("classify", "--surface", "S{(1,1)}", "--map", "")
    assert code == 0 and out["type"] == "periodic" and out["period"] == 1


def test_ribbon_check_cable():
    code, out = report("ribbon-check", "--knot", "cable(2,1,fig8)")
    assert code == 0
    assert out["strongly_homotopy_ribbon"] is False and out["completeness"] == "exhaustive"


def test_ribbon_check_double():
    code, out = report("ribbon-check", "--knot", "sum(fig8,fig8)")
    assert code == 0 and out["strongly_homotopy_ribbon"] is True
    assert out["route"] == ["F1_1", "F2_1_1"]


def test_dilatation_is_exact():
    code, out = report("dilatation", "--knot", "fig8")
    lam = out["max_dilatation"]
    assert lam["minpoly"] == [1, -3, 1]
    lo, hi = (Fraction(x) for x in lam["interval"])
    assert 2.61 < lo <= hi < 2.62


def test_compressions_shape():
    code, out = report("compressions", "--knot", "cable(2,1,fig8)")
    assert code == 0
    assert set(out["forms"]) == {"f1_1", "f1_2", "f1_3", "f2_1_1", "f2_1_2", "f2_2"}
    assert len(out["forms"]["f1_1"]) == 1 and out["forms"]["f1_1"][0]["curves"] == [["K.d"]]
    assert len(out["compressed_classes"]) == 3
    assert out["completeness"] == "exhaustive"


def test_predecessors():
    code, out = report("predecessors", "--knot", "sum(fig8,fig8)")
    knots = [p["knot"] for p in out["predecessors"]]
    assert "unknot" in knots
    assert all(p["alexander_divides"] for p in out["predecessors"] if p["knot"])


def test_growth():
    code, out = report("growth", "--knot", "fig8", "--iterations", "40")
    assert code == 0
    lo, hi = (float(Fraction(x)) for x in out["interval"])
    assert abs(lo - 0.9624) < 0.05 and abs(hi - 0.9624) < 0.05


def test_growth_on_periodic_knot_is_zero():
    code, out = report("growth", "--knot", "torus(2,3)")
    assert code == 0 and out["interval"] == ["0", "0"] and out["pieces"] == []


def test_parse_error_names_token():
    code, out = report("classify", "--surface", "S{(1,1)}", "--map", "Ta Tb Tx")
    assert code == 2
    assert out["error"]["token"] == "Tx" and out["error"]["position"] == 6
    code, out = report("classify", "--knot", "sum(fig8,fig9)")
    assert code == 2 and out["error"]["token"] == "fig9"


def test_unsupported_input():
    code, out = report("classify", "--knot", "cable(2,3,fig8)")
    assert code == 1 and out["error"]["kind"] == "unsupported"
    code, out = report("predecessors", "--surface", "S{(1,1)}", "--map", "Ta")
    assert code == 1


def test_budget_exhaustion():
    code, out = report("compressions", "--knot", "sum(fig8,fig8)", "--max-classes", "2")
    assert code == 3 and out["completeness"] == "bounded"
    assert len(out["compressed_classes"]) == 2


def test_exactly_one_input():
    with pytest.raises(SystemExit) as e:
        run(["classify", "--knot", "fig8", "--surface", "S{(1,1)}"], io.StringIO())
    assert e.value.code == 2


@pytest.mark.parametrize("cmd", ["classify", "compressions", "ribbon-check", "growth", "dilatation"])
def test_deterministic(cmd):
    argv = [cmd, "--knot", "sum(fig8,torus(2,3))"]
    assert call(*argv)[1] == call(*argv)[1]


def test_json_file(tmp_path):
    path = tmp_path / "out.json"
    code, text = call("classify", "--knot", "fig8", "--json", str(path))
    assert path.read_text() == text


@pytest.mark.parametrize(
    "surface,word",
    [("S{(1,1)}", "Ta Tb^-1"), ("S{(1,1),(1,1)}", "Ta_1 Tb_2^2"), ("S{(1,0)}", "Ta^2 Tb"), ("S{(2,1)}", "Td")],
)
def test_emitted_maps_round_trip(surface, word):
    code, out = report("compressions", "--surface", surface, "--map", word)
    seen = 0
    for c in out["compressed_classes"]:
        if "map" in c:
            g = parse_mapping_class(parse_surface(c["surface_text"]), c["map"])
            assert canonical_key(g) == c["key"]
            seen += 1
    assert seen >= 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fibercomp", "classify", "--knot", "torus(2,5)"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["period"] == 10
