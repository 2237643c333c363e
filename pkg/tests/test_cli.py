import shutil
from pathlib import Path

import pytest

from dqcpart.cli import main
from dqcpart.hypergraph import read_hmetis, read_partition

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ghz_file(tmp_path, ghz5_text):
    p = tmp_path / "ghz5.qasm"
    p.write_text(ghz5_text)
    return p


def test_parse(capsys, tmp_path, ghz_file):
    hgr = tmp_path / "ghz5.hgr"
    code, out, _ = run(capsys, "parse", "--qasm", ghz_file, "--out", hgr)
    assert code == 0 and out.strip() == "n=5 edges=4 mq_gates=4"
    assert read_hmetis(hgr.read_text()).num_edges == 4


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.qasm"
    bad.write_text("OPENQASM 2.0;\nqreg q[2];\nh q[9];\n")
    code, _, err = run(capsys, "parse", "--qasm", bad)
    assert code == 2 and "line 3" in err
    assert run(capsys, "parse", "--qasm", tmp_path / "missing.qasm")[0] == 2


def test_generate_and_roundtrip(capsys, tmp_path):
    out = tmp_path / "r.qasm"
    code, _, _ = run(capsys, "generate", "--kind", "random_uniform", "--qubits", 8, "--depth", 3,
                     "--seed", 4, "--param", "two_qubit_fraction=0.23", "--out", out)
    assert code == 0 and out.read_text().startswith("OPENQASM 2.0;")
    code, text, _ = run(capsys, "generate", "--kind", "ghz", "--qubits", 3)
    assert code == 0 and "cx q[1],q[2];" in text


@pytest.mark.parametrize("argv", [
    ["generate", "--kind", "ghz", "--qubits", "0"],
    ["generate", "--kind", "ghz", "--qubits", "3", "--param", "layers=2"],
    ["generate", "--kind", "warp", "--qubits", "3"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 1


def test_partition(capsys, tmp_path, ghz_file):
    hgr = tmp_path / "g.hgr"
    run(capsys, "parse", "--qasm", ghz_file, "--out", hgr)
    part = tmp_path / "g.part"
    code, out, _ = run(capsys, "partition", "--hypergraph", hgr, "--strategy", "fm", "--k", 2,
                       "--assignment-out", part)
    assert code == 0 and out.strip() == "strategy=fm k=2 cut=1 balanced=true"
    assert len(read_partition(part.read_text(), 5, 2)) == 5
    code, out, _ = run(capsys, "partition", "--hypergraph", hgr, "--strategy", "stochg", "--k", 2,
                       "--iterations", 3)
    assert code == 0 and "cut=1" in out


def test_partition_errors(capsys, tmp_path, ghz_file):
    hgr = tmp_path / "g.hgr"
    run(capsys, "parse", "--qasm", ghz_file, "--out", hgr)
    code, _, err = run(capsys, "partition", "--hypergraph", hgr, "--strategy", "magic", "--k", 2)
    assert code == 1 and "known:" in err
    assert run(capsys, "partition", "--hypergraph", hgr, "--strategy", "fm", "--k", 0)[0] == 1
    bad = tmp_path / "bad.hgr"
    bad.write_text("1 3 1\n1 1 7\n")
    assert run(capsys, "partition", "--hypergraph", bad, "--strategy", "fm", "--k", 2)[0] == 2


def test_strategies(capsys, tmp_path):
    code, out, _ = run(capsys, "strategies")
    assert code == 0 and out.split() == ["random", "greedy", "stochg", "fm", "ea"]
    cfg = tmp_path / "c.ini"
    cfg.write_text("[external:kahypar]\ncommand = kahypar {input}\n")
    assert run(capsys, "strategies", "--config", cfg)[1].split()[-1] == "kahypar"
    cfg.write_text("[bench]\nbogus = 1\n")
    assert run(capsys, "strategies", "--config", cfg)[0] == 2


def test_bench_and_analyze(capsys, tmp_path):
    work = tmp_path / "scripts"
    shutil.copytree(SCRIPTS / "circuits", work / "circuits")
    shutil.copy(SCRIPTS / "smoke.ini", work / "smoke.ini")
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "bench", "--config", work / "smoke.ini", "--output-dir", out_dir)
    assert code == 0 and out.strip() == f"results={out_dir / 'results.csv'}"
    code, out, _ = run(capsys, "analyze", "--results", out_dir / "results.csv",
                       "--out-dir", tmp_path / "sum")
    assert code == 0 and "distortion=" in out
    assert (tmp_path / "sum" / "rankings_by_k.csv").exists()
    code, _, err = run(capsys, "analyze", "--results", out_dir / "results.csv",
                       "--reference", "Nowhere")
    assert code == 2 and "Nowhere" in err


def test_bench_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[bench]\nk_min = x\n")
    assert run(capsys, "bench", "--config", cfg)[0] == 2
    assert run(capsys, "bench", "--config", tmp_path / "none.ini")[0] == 2
