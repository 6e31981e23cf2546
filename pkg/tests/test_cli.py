from __future__ import annotations

import json
import subprocess
import sys

import pytest

from bltgroups.cli import main
from bltgroups.graph import Graph


@pytest.fixture
def files(tmp_path):
    def write(name, G):
        path = tmp_path / name
        path.write_text(G.to_edge_list())
        return str(path)

    out = {
        "edge": write("edge.txt", Graph.on(2, [(1, 2)])),
        "empty3": write("empty3.txt", Graph.empty(3)),
        "empty4": write("empty4.txt", Graph.empty(4)),
        "tri": write("tri.txt", Graph.complete(3)),
        "p3": write("p3.txt", Graph.path(3)),
        "p3b": write("p3b.txt", Graph.on(3, [(1, 3), (3, 2)])),
        "p4": write("p4.txt", Graph.path(4)),
        "star": write("star.txt", Graph.star(4)),
        "c5": write("c5.txt", Graph.cycle(5)),
    }
    js = tmp_path / "p3.json"
    js.write_text(json.dumps(Graph.path(3).to_json()))
    out["p3json"] = str(js)
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_build(files, capsys):
    code, out, _ = run(capsys, "build", files["edge"], "-p", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["group"]["order"] == 27 and not doc["group"]["abelian"]
    assert doc["matrices"][0]["entries"] == [[0, 1], [2, 0]]
    doc = json.loads(run(capsys, "build", files["empty3"])[1])
    assert doc["group"]["order"] == 27 and doc["group"]["abelian"]
    doc = json.loads(run(capsys, "build", files["tri"])[1])
    assert doc["group"]["order"] == 729
    doc = json.loads(run(capsys, "build", files["p3json"], "-p", "5")[1])
    assert doc["group"]["order"] == 5**5


def test_build_errors(files, capsys):
    code, _, err = run(capsys, "build", files["edge"], "-p", "2")
    assert code == 1 and "1/2" in err
    assert run(capsys, "build", files["edge"], "-p", "9")[0] == 1
    bad = files["dir"] / "bad.txt"
    bad.write_text("3 2\n1 2\n")
    assert run(capsys, "build", str(bad))[0] == 1
    assert run(capsys, "build", str(files["dir"] / "missing.txt"))[0] == 1
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 1


def test_iso(files, capsys):
    code, out, _ = run(capsys, "iso", files["p3"], files["p3"])
    doc = json.loads(out)
    assert code == 0 and doc["isomorphic"] and doc["consistent"]
    assert doc["witnesses"]["graph"] == [[1, 1], [2, 2], [3, 3]]
    assert doc["witnesses"]["space"]["entries"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    code, out, _ = run(capsys, "iso", files["p4"], files["star"], "--level", "space")
    assert code == 0 and json.loads(out)["verdicts"] == {"space": False}
    code, out, _ = run(capsys, "iso", files["p3"], files["p3b"], "--level", "group")
    assert json.loads(out)["verdicts"] == {"group": True}
    code, out, _ = run(capsys, "iso", files["p4"], files["star"])
    assert code == 0 and json.loads(out)["verdicts"] == {"graph": False, "group": False, "space": False}


def test_iso_guard(files, capsys):
    c5b = files["dir"] / "c5b.txt"
    c5b.write_text(Graph.on(5, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).to_edge_list())
    code, _, err = run(capsys, "iso", files["c5"], str(c5b), "--level", "space")
    assert code == 2 and "estimated" in err


def test_invariants(files, capsys):
    doc = json.loads(run(capsys, "invariants", files["edge"])[1])
    assert doc["matching_via_rank"] == doc["matching_classical"] == 1
    doc = json.loads(run(capsys, "invariants", files["p4"])[1])
    assert doc["independence_via_isotropic"] == doc["independence_classical"] == 2
    doc = json.loads(run(capsys, "invariants", files["empty4"])[1])
    assert doc["matching_via_rank"] == 0 and doc["independence_via_isotropic"] == 4 and doc["agree"]


def test_functor_verify(files, capsys):
    m = files["dir"] / "id.json"
    m.write_text(json.dumps({"pairs": [[1, 1], [2, 2], [3, 3]]}))
    code, out, _ = run(capsys, "functor", files["p3"], files["p3"], str(m))
    doc = json.loads(out)
    assert code == 0 and doc["pullback_hom"] and doc["homomorphism_verified"]
    e = files["dir"] / "empty.json"
    e.write_text('{"pairs": []}')
    doc = json.loads(run(capsys, "functor", files["p3"], files["tri"], str(e))[1])
    assert doc["pullback_hom"] and doc["homomorphism_verified"]
    code, out, err = run(capsys, "functor", files["p3"], files["tri"], str(m))
    doc = json.loads(out)
    assert code == 0 and not doc["pullback_hom"]
    assert doc["violation"] == {"pair": [1, 3], "image": [1, 3]}
    assert "{1, 3}" in err
    junk = files["dir"] / "junk.json"
    junk.write_text("{pairs")
    assert run(capsys, "functor", files["p3"], files["p3"], str(junk))[0] == 1
    assert run(capsys, "functor", files["p3"], files["p3"])[0] == 1


def test_functor_optimise(files, capsys):
    doc = json.loads(run(capsys, "functor", files["p4"], files["tri"], "--objective", "order")[1])
    assert doc["value"] == 2
    doc = json.loads(run(capsys, "functor", files["star"], files["p4"], "--objective", "order", "--surjective")[1])
    assert doc["value"] is None and doc["witness"] is None


def test_prooflab(files, capsys):
    code, out, _ = run(capsys, "prooflab", "verify", "--g", files["p4"], "--h", files["star"], "--lemma-checks", "5")
    doc = json.loads(out)
    assert code == 0
    assert doc["conforming_count"] == 438129 and doc["failures"] == [] and doc["max_det_seen"] == 0
    code, out, _ = run(capsys, "prooflab", "verify", "--g", files["p4"], "--h", files["star"], "--samples", "50")
    assert json.loads(out)["mode"] == "sampled"
    code, _, err = run(capsys, "prooflab", "verify", "--g", files["p3"], "--h", files["p3b"])
    assert code == 1 and "isomorphic" in err


def test_cayley(files, capsys):
    code, out, _ = run(capsys, "cayley", files["edge"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "27 3 2 1" and len(lines) == 730


def test_output_file(files, capsys):
    dest = files["dir"] / "out.json"
    assert main(["-o", str(dest), "build", files["p3"]]) == 0
    assert json.loads(dest.read_text())["m"] == 2


def test_console_entry_point_deterministic(files):
    cmd = [sys.executable, "-m", "bltgroups", "iso", files["p4"], files["star"], "--level", "all"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["consistent"]
