import subprocess
import sys
from pathlib import Path

import pytest

from cicohom import cli
from cicohom.jobs import JobError, emit, parse_job

CORPUS = Path(cli.__file__).parent / "corpus"
SNAPSHOTS = Path(__file__).parent / "snapshots"
JOBS = sorted(CORPUS.glob("*.job"))
EXIT_CODES = dict(line.split("\t") for line in (SNAPSHOTS / "exit_codes.tsv").read_text().splitlines())

BASIC = """[algebra]
kind = exterior
degrees = [1, 1, 1]

[module]
kind = residue-field

[command]
name = betti
"""


def job(algebra, module="kind = residue-field", command="name = betti"):
    return f"[algebra]\n{algebra}\n\n[module]\n{module}\n\n[command]\n{command}\n"


def test_parse_valid():
    spec = parse_job(BASIC)
    assert spec.command == "betti"
    assert spec.get("algebra", "degrees") == [1, 1, 1]


def test_redundant_relation_is_valid():
    text = job('kind = quotient\nvariables = 2\nrelations = ["x1^2", "x2^2", "x1*x2 - x2*x1"]')
    spec = parse_job(text)
    rep, code = cli.run(spec, cutoff=4)
    assert code == 0
    assert ("betti", "1,2,3,4,5") in rep.items


@pytest.mark.parametrize("text, code, line, column, needle", [
    (job("kind = exterior\ndegrees = [2]"), "E111", 3, 12, "exterior generator degree must be odd"),
    (job("kind = exterior\ndegrees = [1, 1]", command="name = betti\ncutof = 3"), "E102", 10, 1, "unknown key"),
    ("[algebra\nkind = exterior\n", "E100", 1, 9, "expected ']'"),
    ("[nonsense]\n", "E101", 1, 2, "unknown section"),
    (job("kind = exterior\ndegrees = [1]", command="name = frobnicate"), "E120", 9, 8, "unknown command"),
    (job('kind = quotient\nvariables = 2\nrelations = ["x1^2", "x2^^2"]'), "E110", 4, None, ""),
    (job('kind = quotient\nvariables = 1\nrelations = ["x1 + x1^2"]'), "E112", 4, None, "linear part"),
    (job("kind = exterior\ndegrees = [1]", command="cutoff = 4"), "E104", 0, 0, "missing key"),
    (job("kind = exterior\ndegrees = [1]", command="name = betti\ncutoff = -1"), "E120", 10, 10, "non-negative"),
    (job("kind = exterior\ndegrees = [1]", module="kind = quotient-by-generators\nkill = [2]"), "E113", None, None, ""),
])
def test_diagnostics(text, code, line, column, needle):
    with pytest.raises(JobError) as info:
        parse_job(text)
    e = info.value
    assert e.code == code
    if line is not None:
        assert e.line == line
    if column is not None:
        assert e.column == column
    assert needle in str(e)


def test_distinct_codes_for_distinct_errors():
    seen = set()
    for text in (job("kind = exterior\ndegrees = [2]"), job('kind = quotient\nvariables = 1\nrelations = ["x1^"]'),
                 job("kind = exterior\ndegrees = [1]", command="name = betti\nfoo = 1")):
        with pytest.raises(JobError) as info:
            parse_job(text)
        seen.add(info.value.code)
    assert len(seen) == 3


@pytest.mark.parametrize("path", JOBS, ids=[p.stem for p in JOBS])
def test_round_trip(path):
    spec = parse_job(path.read_text())
    again = parse_job(emit(spec))
    assert again == spec
    assert emit(again) == emit(spec)


@pytest.mark.parametrize("path", JOBS, ids=[p.stem for p in JOBS])
def test_corpus_snapshot(path):
    text, code = cli.run_file(str(path))
    assert text == (SNAPSHOTS / f"{path.stem}.report").read_text()
    assert code == int(EXIT_CODES[path.stem])


def _result(stem):
    text, _ = cli.run_file(str(CORPUS / f"{stem}.job"), "records")
    out = {}
    for line in text.splitlines():
        k, _, v = line.partition("\t")
        out.setdefault(k, v)
    return out


@pytest.mark.parametrize("i", [0, 1, 2, 3])
def test_reference_values_in_corpus(i):
    assert _result(f"ci3_level_R{i}")["result.level_lower"] == str(4 - i)
    assert _result(f"ci3_level_R{i}")["result.level_upper"] == str(4 - i)
    assert _result(f"ci3_complexity_R{i}")["result.cx"] == str(i)
    assert _result(f"ci3_loewy_R{i}")["result.loewy_length"] == str(4 - i)
    assert _result(f"lambda111_complexity_lambda{i}")["result.cx"] == str(i)
    assert _result(f"lambda111_level_lambda{i}")["result.level_lower"] == str(4 - i)
    assert _result(f"lambda111_homology_lambda{i}")["result.card_support"] == str(4 - i)
    assert _result(f"bgg_quotient_lambda{i}")["result.krull_dim"] == str(i)


def test_reference_values_misc():
    assert _result("gor3_ci_check")["result.verdict"] == "not ci (edim 3, relations 5)"
    assert _result("gor3_loewy_R")["result.loewy_length"] == "3"
    assert _result("ci3_complexity_k")["result.cx"] == "3"
    assert _result("gor3_normal_form_xy")["result.normal_form"] == "0"
    assert _result("gor3_normal_form_y2")["result.normal_form"] == "x3^2"
    assert _result("single_d1_closed_form")["result.betti"] == "1,0,1,0,1,0,1,0,1"
    assert _result("single_d3_resolve")["result.betti"] == "1,0,0,0,1,0,0,0,1"
    assert _result("cx_kk_c3")["result.pair_cx"] == "3"
    assert _result("gor3_level_bounds")["warning"].startswith("ring is not a complete intersection")


def test_determinism():
    for path in JOBS[:10]:
        assert cli.run_file(str(path)) == cli.run_file(str(path))


def test_records_format():
    text, code = cli.run_file(str(CORPUS / "betti_k_lambda11.job"), "records")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "job\tbetti_k_lambda11"
    assert "result.betti\t1,0,2,0,3,0" in lines
    assert "table.betti.columns\tn b_n" in lines
    assert all(line.count("\t") == 1 for line in lines)
    assert any(line.startswith("provenance.pivot_rule\t") for line in lines)


def test_resource_exit_code(tmp_path):
    p = tmp_path / "big.job"
    p.write_text(job("kind = exterior\ndegrees = [1, 1, 1, 1, 1]", command="name = betti\ncutoff = 20"))
    text, code = cli.run_file(str(p), budget=50)
    assert code == cli.EXIT_RESOURCE
    assert "partial_cutoff" in text


def test_advisory_exit_code():
    assert int(EXIT_CODES["gor3_poincare_k"]) == cli.EXIT_ADVISORY


def test_invalid_exit_code(tmp_path):
    p = tmp_path / "bad.job"
    p.write_text(job("kind = exterior\ndegrees = [2]"))
    text, code = cli.run_file(str(p))
    assert code == cli.EXIT_INVALID
    assert "E111" in text


def test_field_override(tmp_path):
    p = tmp_path / "k.job"
    p.write_text(job("kind = exterior\ndegrees = [1, 1]", command="name = betti\ncutoff = 4"))
    text, code = cli.run_file(str(p), "records", field="rational")
    assert code == 0 and "provenance.field\trational" in text


def test_main_single_and_dir(tmp_path, capsys):
    assert cli.main(["--job", str(CORPUS / "gor3_ci_check.job"), "--report", "records"]) == 0
    out = capsys.readouterr().out
    assert "result.verdict\tnot ci (edim 3, relations 5)" in out
    d = tmp_path / "jobs"
    d.mkdir()
    for stem in ("ci3_loewy_R1", "gor3_normal_form_xy", "bgg_k_c1"):
        (d / f"{stem}.job").write_text((CORPUS / f"{stem}.job").read_text())
    out_dir = tmp_path / "out"
    assert cli.main(["--jobs", str(d), "--out", str(out_dir), "--workers", "2"]) == 0
    for stem in ("ci3_loewy_R1", "gor3_normal_form_xy", "bgg_k_c1"):
        assert (out_dir / f"{stem}.report").read_text() == (SNAPSHOTS / f"{stem}.report").read_text()


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "cicohom.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("cicohom ")
