import pytest

from hsgcompress.cli import main
from hsgcompress.compress import CompressedDatabase
from hsgcompress.groups import TOY_TABLE, FunctionTable


@pytest.fixture
def toy_db(tmp_path):
    path = tmp_path / "toy.db"
    TOY_TABLE.save(path)
    return path


@pytest.fixture
def s10_db(tmp_path):
    path = tmp_path / "s10.db"
    assert main(["gen-db", "--group", "2,2", "--period", "10", "--seed", "1", "--out", str(path)]) == 0
    return path


def test_train_gft(toy_db, tmp_path, capsys):
    out = tmp_path / "trace.csv"
    rc = main(["train", "--db", str(toy_db), "--ansatz", "gft", "--iterations", "40",
               "--seed", "7", "--out", str(out)])
    assert rc == 0
    last = out.read_text().splitlines()[-1].split(",")
    assert float(last[1]) < 0 and float(last[2]) == 0
    line = capsys.readouterr().out
    assert "cost=0" in line and "group=2,2 period=01" in line


def test_train_simon_reports_s10(s10_db, capsys):
    assert FunctionTable.load(s10_db).entries[0] == FunctionTable.load(s10_db).entries[2]
    assert main(["train", "--ansatz", "simon", "--db", str(s10_db), "--seed", "7"]) == 0
    assert "period=10" in capsys.readouterr().out


def test_train_zero_iterations(toy_db):
    assert main(["train", "--db", str(toy_db), "--iterations", "0"]) == 2


def test_train_unreadable_db(tmp_path):
    assert main(["train", "--db", str(tmp_path / "missing.db")]) == 2


def test_train_config_file(toy_db, tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("iterations=3\nrepeats_per_iteration=2\n")
    out = tmp_path / "t.csv"
    assert main(["train", "--db", str(toy_db), "--config", str(cfg), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4


def test_require_converged(toy_db):
    args = ["train", "--db", str(toy_db), "--iterations", "1", "--require-converged"]
    assert main(args + ["--init", "2.0"]) == 1
    assert main(args + ["--init", "-1.0"]) == 0


def test_compress_from_summary(toy_db, tmp_path, capsys):
    summary, out = tmp_path / "s.txt", tmp_path / "c.txt"
    assert main(["train", "--db", str(toy_db), "--seed", "2", "--summary", str(summary)]) == 0
    capsys.readouterr()
    assert main(["compress", "--db", str(toy_db), "--summary", str(summary),
                 "--out", str(out), "--verify"]) == 0
    assert "entries in: 4 out: 2" in capsys.readouterr().out
    assert len(CompressedDatabase.load(out)) == 2


def test_compress_wrong_period(toy_db, capsys):
    rc = main(["compress", "--db", str(toy_db), "--group", "4", "--period", "01", "--verify"])
    assert rc == 1
    assert "2 mismatched entries" in capsys.readouterr().err


def test_compress_needs_hypothesis(toy_db):
    assert main(["compress", "--db", str(toy_db)]) == 2


def test_decompress_and_lookup(toy_db, tmp_path, capsys):
    c, d = tmp_path / "c.txt", tmp_path / "d.db"
    main(["compress", "--db", str(toy_db), "--group", "2,2", "--period", "01", "--out", str(c)])
    assert main(["decompress", "--db", str(c), "--out", str(d)]) == 0
    assert FunctionTable.load(d) == TOY_TABLE
    capsys.readouterr()
    assert main(["lookup", "--db", str(c), "--x", "11"]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_hsg_sample_csv(toy_db, tmp_path):
    out = tmp_path / "s.csv"
    assert main(["hsg-sample", "--db", str(toy_db), "--group", "4", "--shots", "400",
                 "--seed", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "in_bits,out_bits,count"
    assert sum(int(l.split(",")[2]) for l in lines[1:]) == 400
    assert not any(l.startswith("10,") for l in lines[1:])


def test_verify_photonic(capsys, tmp_path):
    assert main(["verify-photonic", "gft"]) == 0
    assert main(["verify-photonic", "simon", "--out", str(tmp_path / "r.csv")]) == 0
    assert len((tmp_path / "r.csv").read_text().splitlines()) == 1 + 2 * 16 * 16
    assert main(["verify-photonic", "simon", "--encoding", "s10"]) == 1
    capsys.readouterr()
    assert main(["verify-photonic", "gft", "--encoding", "s01"]) == 1
    report = capsys.readouterr().out
    assert float(report.split("max total variation ")[1].split()[0]) > 0.1


def test_verify_photonic_bad_setup():
    assert main(["verify-photonic", "nonsense"]) == 2


def test_gen_db_planted(tmp_path):
    out = tmp_path / "g.db"
    assert main(["gen-db", "--group", "4,2", "--period", "100", "--m", "2", "--seed", "5", "--out", str(out)]) == 0
    f = FunctionTable.load(out)
    assert f.n == 3 and f.m == 2


def test_outputs_byte_identical(toy_db, tmp_path):
    for k in (1, 2):
        main(["train", "--db", str(toy_db), "--ansatz", "simon", "--iterations", "5",
              "--seed", "11", "--out", str(tmp_path / f"t{k}.csv")])
        main(["compress", "--db", str(toy_db), "--group", "2,2", "--period", "01",
              "--out", str(tmp_path / f"c{k}.txt")])
    assert (tmp_path / "t1.csv").read_bytes() == (tmp_path / "t2.csv").read_bytes()
    assert (tmp_path / "c1.txt").read_bytes() == (tmp_path / "c2.txt").read_bytes()
