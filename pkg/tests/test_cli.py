import pytest

from clex.cli import main
from clex.nsp.instance import NspInstance, format_instance, parse_instance
from clex.regular import Dfa


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_demo_separation(capsys):
    code, out, _ = run(capsys, "demo-separation", "--n", "8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:3] == ["n", "combined_bt", "decomposed_bt"]
    rows = {int(l.split()[0]): l.split() for l in lines[1:]}
    assert sorted(rows) == list(range(2, 9))
    assert rows[8][1] == "0" and int(rows[8][2]) > int(rows[7][2]) > 0


def test_generate_then_solve(tmp_path, capsys):
    path = tmp_path / "inst.txt"
    code, _, _ = run(capsys, "generate", "--seed", "1", "--n", "4", "--m", "5",
                     "--demand", "1,2", "--out", str(path))
    assert code == 0
    inst = parse_instance(path)
    assert (inst.nurses, inst.days) == (4, 5)
    code, out, err = run(capsys, "solve", str(path), "--mode", "clex-seq", "--seq", "1,2,3")
    assert code == 0
    rows = [list(map(int, l.split())) for l in out.splitlines()]
    assert len(rows) == 4 and all(len(r) == 5 for r in rows)
    assert rows == sorted(rows)
    assert "Solution" in err


def test_generate_many(tmp_path, capsys):
    code, _, _ = run(capsys, "generate", "--count", "3", "--out", str(tmp_path / "batch"))
    assert code == 0
    assert len(list((tmp_path / "batch").iterdir())) == 3


def test_solve_unsat_exit_code(tmp_path, capsys):
    path = tmp_path / "inst.txt"
    # every nurse works every day, but (1,2,3) caps three-day windows at two
    path.write_text(format_instance(NspInstance(2, 3, 1, ((2,), (2,), (2,)))))
    code, out, err = run(capsys, "solve", str(path), "--mode", "among-lex", "--seq", "1,2,3")
    assert code == 1
    assert out == "" and "no solution" in err


def test_solve_shift_instance_with_preset(tmp_path, capsys):
    path = tmp_path / "inst.txt"
    path.write_text(format_instance(NspInstance(3, 4, 3, ((1, 1, 0),) * 4)))
    code, out, _ = run(capsys, "solve", str(path), "--mode", "clex-product", "--dfa", "rest")
    assert code == 0
    assert all(set(l.split()) <= set("DENO") for l in out.splitlines())


def test_bench_all_modes(tmp_path, capsys):
    csv_path = tmp_path / "res.csv"
    code, out, _ = run(capsys, "bench", "--count", "2", "--n", "5", "--m", "6",
                       "--demand", "1,3", "--seq", "1,2,3", "--out", str(csv_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[0] == "config"
    assert [l.split()[0] for l in lines[1:]] == [
        "among-lex(1,2,3)", "seq-lex(1,2,3)", "clex-seq(1,2,3)"]
    assert csv_path.read_text().startswith("config,instance,outcome,nodes,backtracks,ms\n")


def test_bench_shift_files(tmp_path, capsys):
    paths = []
    for k in range(2):
        p = tmp_path / f"s{k}.txt"
        p.write_text(format_instance(NspInstance(3, 3, 3, ((1, 0, 0),) * 3)))
        paths.append(str(p))
    code, out, _ = run(capsys, "bench", *paths, "--dfa", "rest-runs")
    assert code == 0
    assert [l.split()[0] for l in out.splitlines()[1:]] == [
        "regular-lex", "clex-product", "clex-regular"]


def test_compile_product(tmp_path, capsys):
    src = tmp_path / "a.dfa"
    src.write_text("states 1 initial 0 finals 0\n0 0 0\n0 1 0\n")
    out_path = tmp_path / "p.dfa"
    code, _, _ = run(capsys, "compile-product", "--dfa", str(src), "--out", str(out_path))
    assert code == 0
    prod = Dfa.load(out_path)
    assert prod.accepts([0, 1]) and not prod.accepts([1, 0])


@pytest.mark.parametrize("argv", [
    ["solve", "missing.txt"],
    ["bench", "--seq", "5,1,3"],
    ["bench", "--mode", "bogus"],
    ["compile-product"],
    ["compile-product", "--dfa", "no-such-file"],
    ["generate", "--demand", "3"],
    ["demo-separation", "--n", "1"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
