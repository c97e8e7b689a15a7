import json
import re
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from knotforge import fixtures
from knotforge.cli import RunConfig, UsageError, main
from knotforge.codes import emit_pd, from_json, parse
from knotforge.diagram import canonical_code
from knotforge.moves import connected_sum

README = Path(__file__).resolve().parent.parent / "README.md"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_examples(capsys):
    assert run(capsys, "invariant", "--jones", "fixtures:unknot")[:2] == (0, "1\n")
    assert run(capsys, "invariant", "--det", "fixtures:trefoil-r")[:2] == (0, "3\n")
    assert run(capsys, "census", "-n", "5", "--fold-mirrors")[:2] == (0, "3..5: 1 1 2\n")


def test_exit_codes(capsys):
    code, _, err = run(capsys, "invariant", "--jones", "PD[X(1,2,3)]")
    assert code == 1 and "error" in err
    assert run(capsys, "lk", "fixtures:hopf-plus", "-i", "0", "-j", "0")[0] == 1
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "census")[0] == 2
    assert run(capsys, "census", "-n", "9")[0] == 2
    assert run(capsys, "census", "-n", "5", "--budget", "0")[0] == 2
    assert run(capsys, "invariant", "fixtures:nope")[0] == 1


def test_run_config():
    with pytest.raises(UsageError):
        RunConfig(budget=0)
    with pytest.raises(UsageError):
        RunConfig(cap=12)
    assert RunConfig(cap=12, unsafe_cap=True).cap == 12


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "knotforge", "invariant", "--conway", "fixtures:hopf-plus"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout == "t^(1/2) - t^(-1/2)\n"


def test_invariant_json_and_tree(capsys):
    code, out, _ = run(capsys, "invariant", "--homfly", "--json", "--show-tree", "fixtures:hopf-plus")
    data = json.loads(out)
    assert data["homfly"]["text"] == "a^-1*z - a^-1*z^-1 - a^-3*z^-1"
    assert data["tree"][0].startswith("2 crossings")
    code, out, _ = run(capsys, "invariant", "fixtures:trefoil-r")
    assert "det: 3" in out and "jones: -t^4 + t^3 + t" in out


def test_parse_json_round_trip(capsys):
    for name in fixtures.names():
        _, out, _ = run(capsys, "parse", "--json", f"fixtures:{name}")
        d = from_json(json.loads(out))
        assert canonical_code(d) == canonical_code(fixtures.diagram(name))
        _, out, _ = run(capsys, "parse", f"fixtures:{name}")
        assert canonical_code(parse(out.strip())) == canonical_code(d)


def test_diagram_file_argument(tmp_path, capsys):
    p = tmp_path / "k.txt"
    p.write_text("DT[4 6 2]\nDT[4 6 8 2]\n")
    _, out, _ = run(capsys, "invariant", "--det", str(p))
    assert out == "3\n5\n"


def test_lk_and_gauss(capsys):
    assert run(capsys, "lk", "fixtures:hopf-plus")[1] == "1\n"
    assert run(capsys, "lk", "fixtures:maxwell")[1] == "0\n"
    code, out, _ = run(capsys, "gauss-lk", "fixtures:hopf3d", "--perturb", "3")
    vals = [float(v) for v in out.split()]
    assert code == 0 and len(vals) == 4 and all(abs(v - 1) < 1e-3 for v in vals)
    assert run(capsys, "gauss-lk", "fixtures:maxwell3d")[1] == "0.000000\n"


def test_gauss_lk_curve_file(tmp_path, capsys):
    p = tmp_path / "hopf.txt"
    run(capsys, "gauss-lk", "fixtures:hopf3d", "--write", str(p))
    assert run(capsys, "gauss-lk", str(p))[1] == "1.000000\n"


def test_tait_graph(capsys):
    _, out, _ = run(capsys, "tait-graph", "--chromatic", "fixtures:trefoil-r")
    assert "vertices: 3" in out and "chromatic: k^3 - 3*k^2 + 2*k" in out


def test_moves_and_simplify(capsys):
    _, out, _ = run(capsys, "moves", "list", "PD[X(1,1,2,2)]")
    assert out.startswith("0: R1 reduce")
    assert run(capsys, "moves", "apply", "PD[X(1,1,2,2)]", "--index", "0")[1] == "PD[]\n"
    assert run(capsys, "moves", "apply", "PD[X(1,1,2,2)]", "--index", "7")[0] == 1
    assert run(capsys, "simplify", "PD[X(1,1,2,2)]")[1] == "PD[]\n"
    _, out, _ = run(capsys, "moves", "list", "--kind", "R2", "--increase", "fixtures:trefoil-r")
    assert out.count("R2 increase") > 0


def test_fixtures_command(capsys):
    _, out, _ = run(capsys, "fixtures")
    assert out.split() == fixtures.names() + fixtures.curve_names()
    _, out, _ = run(capsys, "fixtures", "perko-a")
    assert len(parse(out.strip())) == 10


def test_census_json_and_store(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("KNOTFORGE_STORE", str(tmp_path))
    code, out, _ = run(capsys, "census", "-n", "6", "--fold-mirrors", "--check-tait", "--json")
    data = json.loads(out)
    assert code == 0 and data["counts"] == {"3": 1, "4": 1, "5": 2, "6": 3}
    assert data["tait"]["ok"] is True
    assert (tmp_path / "census_n06.json").exists()


def _bench(capsys, *argv):
    code, out, _ = run(capsys, "bench", *argv)
    lines = out.strip().splitlines()
    assert lines[0] == "n,strategy,nodes,seconds,agrees"
    return code, [dict(zip(lines[0].split(","), l.split(","))) for l in lines[1:]]


def test_bench_agreement_and_state_counts(capsys):
    code, rows = _bench(capsys, "--n-min", "4", "--n-max", "10", "--seed", "1")
    assert code == 0
    assert all(r["agrees"] == "true" for r in rows)
    for r in rows:
        if r["strategy"] == "state-sum":
            assert int(r["nodes"]) == 2 ** int(r["n"])


def test_bench_memo_beats_naive_on_granny(capsys):
    t = fixtures.diagram("trefoil-r")
    code, rows = _bench(capsys, "--diagram", emit_pd(connected_sum(t, t)))
    nodes = {r["strategy"]: int(r["nodes"]) for r in rows}
    assert nodes["skein-memo"] < nodes["skein-naive"]


def _doc_examples():
    text = README.read_text(encoding="utf-8")
    for block in re.findall(r"```console\n(.*?)```", text, re.S):
        cmd, expected = None, []
        for line in block.splitlines():
            if line.startswith("$ "):
                if cmd is not None:
                    yield cmd, "\n".join(expected)
                cmd, expected = line[2:], []
            else:
                expected.append(line)
        if cmd is not None:
            yield cmd, "\n".join(expected)


DOC_EXAMPLES = list(_doc_examples()) if README.exists() else []


@pytest.mark.parametrize("cmd,expected", DOC_EXAMPLES, ids=[c for c, _ in DOC_EXAMPLES])
def test_readme_examples(cmd, expected, capsys):
    argv = shlex.split(cmd)
    assert argv[0] == "knotforge"
    code = main(argv[1:])
    out, _ = capsys.readouterr()
    assert code == 0
    assert out.rstrip("\n") == expected.rstrip("\n")


def test_readme_has_examples():
    assert len(DOC_EXAMPLES) >= 8
