import json
import subprocess
import sys

import pytest

from circuits import DEUTERON

from mirrorc.cli import BackendUnavailable, main, select_backend


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def split_report(out: str) -> tuple[str, dict]:
    start = out.index("{")
    return out[:start], json.loads(out[start:])


class TestValidateRun:
    def test_report_and_table(self, capsys):
        code, out, _ = run(capsys, "-qpu", "sim", "-shots", 1024, "-validate", DEUTERON)
        assert code == 0
        table, report = split_report(out)
        assert table.splitlines()[0].startswith("| Name")
        assert report["shots"] == 1024 and report["n_mirrors"] == 32
        assert report["mean_p_prime"] == 1.0

    def test_double_dash_aliases(self, capsys):
        a = run(capsys, "-qpu", "sim", "-shots", 64, "-mirrors", 2, "-validate", DEUTERON)
        b = run(capsys, "--qpu", "sim", "--shots", 64, "--mirrors", 2, "--validate", DEUTERON)
        assert a == b

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run(capsys, "-validate", "-mirrors", 2, "-shots", 64, "-o", path, DEUTERON)
        assert code == 0
        assert "{" not in out
        assert json.loads(path.read_text())["n_mirrors"] == 2

    def test_byte_identical(self, capsys, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            run(capsys, "-validate", "-seed", 11, "-noise", self.noise_file(tmp_path), "-o", p, DEUTERON)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("MIRRORC_SEED", "42")
        _, out, _ = run(capsys, "-validate", "-mirrors", 1, "-shots", 8, DEUTERON)
        assert split_report(out)[1]["seed"] == 42
        _, out, _ = run(capsys, "-validate", "-mirrors", 1, "-shots", 8, "-seed", 3, DEUTERON)
        assert split_report(out)[1]["seed"] == 3

    @staticmethod
    def noise_file(tmp_path):
        path = tmp_path / "noise.txt"
        path.write_text("p1 = 0.01\np2 = 0.01\np_ro = 0.0\n")
        return path

    def test_noise_file(self, capsys, tmp_path):
        code, out, _ = run(capsys, "-validate", "-noise", self.noise_file(tmp_path), "-seed", 7, DEUTERON)
        report = split_report(out)[1]
        assert code == 0
        assert report["noise"] == {"p1": 0.01, "p2": 0.01, "p_ro": 0.0}
        assert report["mean_p_prime"] < 1.0

    def test_bad_noise_file(self, capsys, tmp_path):
        path = tmp_path / "noise.txt"
        path.write_text("p1 = 3\n")
        code, _, err = run(capsys, "-noise", path, DEUTERON)
        assert code == 2
        assert "outside" in err


class TestCountsRun:
    def test_counts_only(self, capsys):
        code, out, _ = run(capsys, "-qpu", "sim", DEUTERON)
        assert code == 0
        data = json.loads(out[out.index("{"):])
        assert set(data) == {"backend", "shots", "seed", "counts"}
        assert sum(data["counts"].values()) == 1024
        assert "mirrors" not in out

    def test_reproducible(self, capsys):
        assert run(capsys, "-shots", 100, DEUTERON) == run(capsys, "-shots", 100, DEUTERON)


class TestBackendSelection:
    def test_ibm_not_available(self, capsys):
        code, out, err = run(capsys, "-qpu", "ibm:ibmq_bogota", "-validate", DEUTERON)
        assert code == 2
        assert "backend not available: ibm:ibmq_bogota" in err
        for provider in ("honeywell", "ibm", "ionq"):
            assert provider in err
        assert out == ""

    @pytest.mark.parametrize("selector", ["sim", "sim:statevector"])
    def test_sim(self, selector):
        assert select_backend(selector).name == selector

    @pytest.mark.parametrize("selector", ["ibm", "acme:dev", "ionq:"])
    def test_rejected(self, selector):
        with pytest.raises(BackendUnavailable):
            select_backend(selector)


class TestErrors:
    def test_compile_error(self, capsys, tmp_path):
        path = tmp_path / "bad.qasm"
        path.write_text('OPENQASM 3;\ninclude "stdgates.inc";\nqubit[1] q;\nh q[0]\n')
        code, out, err = run(capsys, path)
        assert code == 1
        assert err.startswith(f"{path}:4:7: error: syntax error: expected ';'")

    def test_undefined_gate(self, capsys, tmp_path):
        path = tmp_path / "bad.qasm"
        path.write_text('OPENQASM 3;\ninclude "stdgates.inc";\nqubit[1] q;\nfoo q[0];\n')
        code, _, err = run(capsys, path)
        assert code == 1
        assert ":4:1: error: undefined gate 'foo'" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, tmp_path / "nope.qasm")
        assert code == 1
        assert "error" in err

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["-frobnicate", str(DEUTERON)])
        assert exc.value.code == 2

    def test_missing_input(self, capsys):
        with pytest.raises(SystemExit):
            main([])

    @pytest.mark.parametrize("flag", ["-shots", "-mirrors"])
    def test_non_positive(self, capsys, flag):
        with pytest.raises(SystemExit):
            main([flag, "0", str(DEUTERON)])

    def test_mirror_error_is_compile_error(self, capsys, tmp_path):
        path = tmp_path / "reset.qasm"
        path.write_text('OPENQASM 3;\ninclude "stdgates.inc";\nqubit[1] q;\nbit[1] c;\nreset q[0];\nh q[0];\nc[0] = measure q[0];\n')
        code, _, err = run(capsys, "-validate", path)
        assert code == 1
        assert "mirror" in err

    def test_execution_error(self, capsys, tmp_path):
        path = tmp_path / "nomeasure.qasm"
        path.write_text('OPENQASM 3;\ninclude "stdgates.inc";\nqubit[1] q;\nh q[0];\n')
        code, _, err = run(capsys, path)
        assert code == 2
        assert "execution error" in err


class TestDumpIR:
    def test_dumps_every_pass(self, capsys):
        code, _, err = run(capsys, "-dump-ir", "-shots", 8, DEUTERON)
        assert code == 0
        for name in ("build_ir", "inline", "cancel", "lower_native"):
            assert f"// IR after {name}" in err
        assert "dialect=native" in err

    def test_validate_does_not_change_ir(self, capsys):
        _, _, plain = run(capsys, "-dump-ir", "-shots", 8, DEUTERON)
        _, _, validated = run(capsys, "-dump-ir", "-validate", "-mirrors", 2, "-shots", 8, DEUTERON)
        assert plain == validated


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mirrorc", "-shots", "16", str(DEUTERON)], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert '"shots": 16' in proc.stdout
