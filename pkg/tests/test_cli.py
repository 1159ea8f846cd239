import copy
import json
import subprocess
import sys

import pytest

from tameforge import cli
from tameforge.serialize import SCHEMA_VERSION, SchemaError, dumps, validate


def run(argv):
    return cli.main(argv)


@pytest.fixture(scope="module")
def doc11():
    return cli.generate_document(1, 1)


def leaf_paths(obj, prefix=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from leaf_paths(v, prefix + (k,))
    elif isinstance(obj, list) and obj:
        for i, v in enumerate(obj):
            yield from leaf_paths(v, prefix + (i,))
    else:
        yield prefix


def tampered(value):
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + 1
    if isinstance(value, str):
        return value + "1" if value else "1"
    if value is None:
        return 0
    return "tampered"


class TestGenerate:
    def test_stdout(self, capsys):
        assert run(["generate", "--p", "1", "--q", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        validate(doc)
        assert doc["schema_version"] == SCHEMA_VERSION
        assert doc["degrees"] == [6, 9, 8]
        assert doc["overall"] is True
        assert doc["overall"] == all(c["pass"] for c in doc["checks"])
        assert doc["witness"] == {"alpha": "1", "perm": [1, 2, 3], "phi": "64/9*T1^3 + T2^2", "s": 3}
        assert doc["constants"]["lemma_constant"] == "-64/9"

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["generate", "--p", "2", "--q", "1", "--out", str(a)]) == 0
        assert run(["generate", "--p", "2", "--q", "1", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_no_floats(self, doc11):
        def walk(x):
            assert not isinstance(x, float)
            if isinstance(x, dict):
                for v in x.values():
                    walk(v)
            elif isinstance(x, list):
                for v in x:
                    walk(v)
        walk(json.loads(dumps(doc11)))

    def test_grid_directory(self, tmp_path):
        out = tmp_path / "grid"
        assert run(["generate", "--grid", "1..2,1..1", "--out", str(out)]) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["tameforge_p1_q1.json", "tameforge_p2_q1.json"]
        assert run(["verify", str(out / "tameforge_p2_q1.json")]) == 0

    def test_grid_stdout_list(self, capsys, tmp_path):
        assert run(["generate", "--grid", "1..1,1..2"]) == 0
        text = capsys.readouterr().out
        docs = json.loads(text)
        assert [d["inputs"] for d in docs] == [{"p": 1, "q": 1}, {"p": 1, "q": 2}]
        f = tmp_path / "list.json"
        f.write_text(text)
        assert run(["verify", str(f)]) == 0

    @pytest.mark.parametrize("argv", [
        ["generate", "--p", "0", "--q", "1"],
        ["generate", "--p", "1"],
        ["generate", "--grid", "1-2,1-2"],
        ["generate", "--grid", "2..1,1..1"],
    ])
    def test_bad_input(self, argv):
        assert run(argv) == 2

    def test_unwritable(self, tmp_path):
        assert run(["generate", "--p", "1", "--q", "1", "--out", str(tmp_path / "no" / "such" / "f.json")]) == 3


class TestVerify:
    def test_round_trip(self, tmp_path, doc11, capsys):
        f = tmp_path / "c.json"
        f.write_text(dumps(doc11))
        assert run(["verify", str(f)]) == 0
        assert capsys.readouterr().out.startswith("OK")

    def test_detects_every_single_field_tamper(self, doc11, monkeypatch):
        fresh = json.loads(dumps(doc11))
        real = cli.rebuild

        def cached(doc):
            if doc.get("command") == "generate" and doc.get("inputs") == {"p": 1, "q": 1}:
                return copy.deepcopy(fresh)
            return real(doc)

        monkeypatch.setattr(cli, "rebuild", cached)
        paths = list(leaf_paths(fresh))
        assert len(paths) > 100
        for path in paths:
            doc = copy.deepcopy(fresh)
            node = doc
            for k in path[:-1]:
                node = node[k]
            node[path[-1]] = tampered(node[path[-1]])
            try:
                problems = cli.verify_document(doc)
            except SchemaError:
                continue
            assert problems, f"tampering {path} went unnoticed"

    def test_detects_removed_field(self, doc11):
        for key in ("witness", "automorphism", "polynomials", "degrees"):
            doc = json.loads(dumps(doc11))
            del doc[key]
            assert cli.verify_document(doc)

    def test_tampered_file_exit_code(self, tmp_path, doc11, capsys):
        doc = json.loads(dumps(doc11))
        doc["degrees"][2] = 9
        f = tmp_path / "t.json"
        f.write_text(dumps(doc))
        assert run(["verify", str(f)]) == 1
        assert "does not reproduce" in capsys.readouterr().out

    def test_malformed(self, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text("{not json")
        assert run(["verify", str(f)]) == 2
        f.write_text(json.dumps({"schema_version": "other"}))
        assert run(["verify", str(f)]) == 2
        f.write_text("[1, 2]")
        assert run(["verify", str(f)]) == 2

    def test_missing_file(self, tmp_path):
        assert run(["verify", str(tmp_path / "absent.json")]) == 3

    def test_unknown_command(self, doc11):
        doc = json.loads(dumps(doc11))
        doc["command"] = "frobnicate"
        with pytest.raises(SchemaError):
            cli.verify_document(doc)

    def test_inspect_documents_verify(self, tmp_path):
        for argv in (["inspect", "nagata"], ["inspect", "kawanoue", "--l", "2", "--m", "1"],
                     ["inspect", "bracket", "--f", "x1*x2", "--g", "x3^2"],
                     ["inspect", "degrees", "--f", "x1^-1*x3 + x2", "--weights", "2,1,1/2", "--laurent"]):
            f = tmp_path / "doc.json"
            assert run(argv + ["--json", "--out", str(f)]) == 0
            assert run(["verify", str(f)]) == 0


class TestInspect:
    def test_nagata(self, capsys):
        assert run(["inspect", "nagata"]) == 0
        out = capsys.readouterr().out
        assert "degrees: [5, 3, 1]" in out and "overall: pass" in out

    def test_kawanoue(self, capsys):
        assert run(["inspect", "kawanoue", "--l", "1", "--m", "1", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["degrees"] == {"f": 6, "f^3+g^2": 6, "g": 9}
        assert doc["polynomials"]["f^3+g^2"] == "x1^3*x2^3 + 9/4*x2^2"

    def test_bracket(self, capsys):
        assert run(["inspect", "bracket", "--f", "x1", "--g", "x2", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["bracket_degree"] == 2
        assert run(["inspect", "bracket", "--f", "x1", "--g", "x1", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["bracket_degree"] == "-inf"

    def test_degrees(self, capsys):
        assert run(["inspect", "degrees", "--f", "x1 - x3^2", "--weights", "2,1,3", "--json"]) == 0
        info = json.loads(capsys.readouterr().out)["degrees"]
        assert info["weighted_degree"] == 6 and info["leading_part"] == "-x3^2"
        assert info["total_degree"] == 2

    @pytest.mark.parametrize("argv", [
        ["inspect", "kawanoue", "--l", "0", "--m", "1"],
        ["inspect", "kawanoue"],
        ["inspect", "bracket", "--f", "x1 +", "--g", "x2"],
        ["inspect", "bracket", "--f", "x1^-1", "--g", "x2", "--laurent"],
        ["inspect", "degrees", "--f", "x1", "--weights", "1,2"],
        ["inspect", "degrees", "--f", "x1", "--weights", "a,b,c"],
        ["inspect", "degrees", "--f", "x1^-2"],
    ])
    def test_bad_input(self, argv):
        assert run(argv) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "tameforge", "inspect", "kawanoue", "--l", "1", "--m", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "overall: pass" in out.stdout


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "tameforge", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "generate" in out.stdout
