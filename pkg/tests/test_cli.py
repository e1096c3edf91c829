import io
import json

import pytest

from mcglattice.cli import run
from mcglattice.serialize import dumps


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv)
    text = out.strip()
    data = json.loads(text)
    # canonical: re-serializing reproduces the exact bytes
    assert dumps(data) == text
    return code, data


G_SVE = '{"basis":"SVE","matrix":[[1,0,0],[2,1,2],[2,0,1]]}'


def test_classify_from_file(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(G_SVE)
    code, data = call_json("classify", "--n", "2", "--matrix-file", str(p))
    assert code == 0
    assert data == {"type": "parabolic", "on_hyperboloid": True,
                    "fixed_class": {"N": 2, "basis": "HE", "coords": [1, -1, 0]}}
    code, data = call_json("classify", "--matrix", G_SVE, "--basis", "sve")
    assert data["fixed_class"]["coords"] == [0, 1, 0]


def test_classify_elliptic_and_hyperbolic():
    code, data = call_json("classify", "--matrix", "[[1,0,0],[0,-1,0],[0,0,1]]")
    assert data == {"type": "elliptic", "order": 2, "on_hyperboloid": True}
    code, data = call_json("classify", "--basis", "SVE", "--matrix", "[[1,2,2],[2,9,6],[2,6,5]]")
    assert data["type"] == "hyperbolic"


def test_reduce():
    code, data = call_json("reduce", "--n", "3", "--vector", '{"basis":"HE","coords":[1,0,-1,0]}')
    assert code == 0
    assert data["checks"] == {"maps_w_to_v": True, "is_isometry": True}
    assert data["w"]["coords"] == [1, 0, -1, 0]


def test_decompose():
    code, data = call_json("decompose", "--matrix", G_SVE)
    assert code == 0
    assert data["lambda_generator_word"] == [1]
    assert data["sigma"] == {"perm": [1], "signs": [1], "word": []}
    assert data["verified"] is True


def test_decompose_with_permutation():
    # Ref_{e1 - e2} in SVE, N = 3
    m = "[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]"
    code, data = call_json("decompose", "--basis", "sve", "--matrix", m)
    assert data["sigma"]["word"] == ["Re1-e2"]


def test_realize():
    code, data = call_json("realize", "--matrix", G_SVE, "--basis", "sve")
    assert code == 0 and data["verified"] is True
    assert data["letters"] == [{"sym": "psi", "k": 1, "power": 1}]
    assert data["support"] == ["V1"]
    assert data["homology_action"]["matrix"] == [[1, 0, 0], [2, 1, 2], [2, 0, 1]]


def test_realize_general():
    from mcglattice.isometries import reflection
    from mcglattice.lattice_core import make_lattice
    from mcglattice.serialize import matrix_to_json
    from mcglattice.stabilizers import lambda_generators

    L = make_lattice(3, "SVE")
    h = lambda_generators(3)[0].conjugate(reflection(L, L.s() - L.v()))
    code, data = call_json("realize", "--vector", '{"basis":"SVE","coords":[1,0,0,0]}',
                           "--matrix", json.dumps(matrix_to_json(h)))
    assert code == 0 and data["verified"] is True
    assert data["letters"] == [{"sym": "psi", "k": 1, "power": 1}]
    assert data["alpha"]["basis"] == "HE" and data["w"]["coords"] == [1, 0, -1, 0]
    code, data = call_json("realize", "--vector", '{"basis":"SVE","coords":[0,1,0,0]}',
                           "--matrix", json.dumps(matrix_to_json(h)))
    assert code == 1 and data["error"] == "not_in_stab"


def test_eichler_and_reflect():
    code, data = call_json("eichler", "--basis", "sve", "--vector", "[0,1,0]", "--e", "[0,0,2]")
    assert data["matrix"] == [[1, 0, 0], [2, 1, 2], [2, 0, 1]]
    code, data = call_json("reflect", "--vector", "[0,1,0]")
    assert data["matrix"] == [[1, 0, 0], [0, -1, 0], [0, 0, 1]]


def test_enumerate():
    code, data = call_json("enumerate", "--n", "2", "--bound", "1")
    assert data["count"] == 4
    assert [v["coords"] for v in data["vectors"]] == [[1, -1, 0], [1, 0, -1], [1, 0, 1], [1, 1, 0]]


@pytest.mark.parametrize("argv,code", [
    (["reduce", "--vector", "[1,1,1]"], "not_isotropic"),
    (["reduce", "--vector", "[2,2,0]"], "not_primitive"),
    (["eichler", "--vector", "[1,-1,0]", "--e", "[0,0,1]"], "odd_norm"),
    (["reflect", "--vector", "[2,1,0]"], "bad_reflection_norm"),
    (["classify", "--matrix", "[[1,1],[0,1]]"], "not_isometry"),
    (["classify", "--n", "3", "--matrix", "[[1,0],[0,1]]"], "bad_shape"),
    (["decompose", "--matrix", "[[1,0,0],[0,1,0],[0,0,1]]", "--n", "1"], "bad_shape"),
    (["reduce", "--vector", "[1,-1]"], "n_out_of_range"),
])
def test_domain_errors(argv, code):
    rc, out, _ = call(*argv)
    assert rc == 1
    data = json.loads(out)
    assert data["error"] == code and data["message"]


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["reduce"],
    ["reduce", "--vector", "[1,"],
    ["classify", "--matrix-file", "/nonexistent/x.json"],
    ["enumerate", "--bound", "2"],
    ["classify", "--basis", "xyz", "--matrix", "[[1]]"],
])
def test_usage_errors(argv):
    rc, _, _ = call(*argv)
    assert rc == 2


def test_verify_small():
    rc, out, _ = call("verify", "--n-max", "3")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[-1].endswith("checks passed")
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert sum(line.startswith("PASS  C") for line in lines) == 8
