import io
import json
import subprocess
import sys

from superfda.cli import main
from superfda.fda_format import serialize
from superfda.superspace import m11


def run(*argv, stdin=None):
    out = io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
        try:
            code = main(list(argv), out)
        finally:
            sys.stdin = old
    else:
        code = main(list(argv), out)
    return code, out.getvalue()


def _strip_timing(report: dict) -> dict:
    for e in report["entries"]:
        e["millis"] = 0
    return report


def test_usage_errors_exit_2(capsys):
    assert run()[0] == 2
    assert run("verify", "no.such.check")[0] == 2
    assert run("verify", "all", "--threads", "0")[0] == 2
    assert run("verify", "all", "--window", "5:1")[0] == 2
    assert run("dump", "nosuch")[0] == 2
    assert "error" in capsys.readouterr().err


def test_verify_json_schema():
    code, text = run("verify", "clifford", "--report", "json")
    assert code == 0
    report = json.loads(text)
    assert set(report) == {"version", "fingerprint", "entries", "summary"}
    ids = [e["id"] for e in report["entries"]]
    assert ids == sorted(ids)
    for e in report["entries"]:
        assert {"id", "status", "detail", "millis"} <= set(e)
    counts = {s: sum(e["status"] == s for e in report["entries"]) for s in ("pass", "fail", "skip")}
    assert counts == report["summary"]


def test_report_independent_of_threads():
    _, a = run("verify", "cyc", "--report", "json", "--threads", "1")
    _, b = run("verify", "cyc.", "--report", "json", "--threads", "3")
    assert _strip_timing(json.loads(a)) == _strip_timing(json.loads(b))


def test_single_check_selection():
    code, text = run("verify", "cyc.display.ku", "--report", "json")
    ids = {e["id"] for e in json.loads(text)["entries"]}
    assert code == 0
    assert ids == {"cyc.display.ku", "cyc.display.ku.forward", "cyc.display.ku.backward"}


def test_list():
    code, text = run("verify", "tduality.", "--list")
    assert code == 0 and "tduality.d5" in text.split()


def test_dump_and_check_round_trip():
    code, text = run("dump", "m11")
    assert code == 0
    assert text.strip() == serialize(m11(), "m11", pretty=True)
    code, report = run("check", "-", stdin=text)
    assert code == 0 and "fail=0" in report


def test_check_reports_located_diagnostic(tmp_path, capsys):
    bad = tmp_path / "bad.fda"
    bad.write_text("algebra A {\n gen x : (1,even);\n d x = x;\n}\n")
    code, _ = run("check", str(bad))
    assert code == 1
    assert "bad.fda:3:" in capsys.readouterr().err


def test_check_unreadable_file():
    assert run("check", "/nonexistent/file.fda")[0] == 2


def test_dump_gammas():
    code, text = run("dump", "--gammas")
    assert code == 0 and "# Gamma_10" in text and "# C" in text


def test_dump_ftheory_counts():
    _, text = run("dump", "ftheory")
    gens = [ln for ln in text.splitlines() if ln.strip().startswith("gen ")]
    bosonic = [g for g in gens if "(1,even)" in g]
    assert len(bosonic) == 12 and len(gens) == 44


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "superfda", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
