import json
import re

import pytest

from dtwlab.cli import main, run
from dtwlab.fixtures import fixture_path


def test_validate_dtd_by_data_path(capsys):
    assert main(["validate-dtd", "data/D1.json", "data/dtd_SC0_D1.json"]) == 0
    assert "valid SC0, width 3" in capsys.readouterr().out


def test_validate_dtd_by_real_path():
    out = run(["validate-dtd", str(fixture_path("D2")), str(fixture_path("dtd_NCW_D2"))])
    assert out.code == 0
    assert out.payload == {"valid": True, "width": 3}


def test_validate_dtd_other_flavor_fails():
    # an SC0 decomposition of D1 is not checked against NW guards
    out = run(["validate-dtd", "D1", "dtd_SC0_D1", "--flavor", "NW"])
    assert out.code == 1
    assert out.payload["valid"] is False


def test_validate_dtd_wrong_host_is_usage():
    assert run(["validate-dtd", "D2", "dtd_SC0_D1"]).code == 2


def test_cop_number_d2_monotone(capsys):
    assert main(["cop-number", "data/D2.json", "--monotone"]) == 0
    out = capsys.readouterr().out
    assert "robber-monotone" in out and out.strip().endswith("5")


def test_game_exit_codes():
    win = run(["game", "D2", "-k", "4"])
    assert win.code == 0 and win.payload["winner"] == "cops"
    lose = run(["game", "D2", "-k", "3"])
    assert lose.code == 1 and lose.payload["winner"] == "robber"


def test_game_trace_prints_rounds():
    out = run(["game", "bramble_D", "-k", "2", "--trace"])
    assert out.code == 0
    assert len(out.lines) > 2


def test_minor_with_witness(tmp_path):
    w = tmp_path / "w.json"
    out = run(["minor", "data/D2.json", "data/D2p.json", "--witness", str(w)])
    assert out.code == 0
    assert json.loads(w.read_text()) == out.payload
    back = run(["minorize", "dtd3_D2p", str(w), "--graph", "D2p"])
    assert back.code == 0


def test_minor_absent():
    out = run(["minor", "D2p", "D2"])
    assert out.code == 1
    assert "exhausted" in out.lines[0]


def test_width_modes():
    assert run(["width", "bramble_D", "--flavor", "NW", "--exact"]).payload["width"] == 1
    assert run(["width", "D1", "--flavor", "SC0", "--certify", "dtd_SC0_D1"]).payload == {"upper": 3}
    assert run(["width", "bramble_D", "--flavor", "NW", "--at-most", "0"]).code == 1


def test_width_cap_is_usage():
    assert run(["width", "D1", "--flavor", "NW", "--exact"]).code == 2


def test_bramble_actions():
    assert run(["bramble", "number", "bramble_D", "--weak"]).payload["number"] == 2
    assert run(["bramble", "validate", "bramble_weak_D"]).code == 0
    assert run(["bramble", "order", "bramble_weak_D"]).code == 0


def test_linked():
    assert run(["linked", "bramble_D", "-w", "1,4", "-k", "1"]).code == 1


def test_budget_exit_code(capsys):
    assert main(["--budget", "10", "game", "D1", "-k", "4"]) == 3
    assert "budget exceeded" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["fixture", "dump", "nope"],
    ["repro", "9"],
    ["--threads", "0", "fixture", "list"],
    ["game", "no_such_file.json", "-k", "1"],
])
def test_usage_errors(argv):
    assert run(argv).code == 2


def test_fixture_list_and_dump():
    names = [ln.split()[0] for ln in run(["fixture", "list"]).lines]
    assert "D1" in names and "strategy_36_D1" in names
    data = json.loads(run(["fixture", "dump", "D2"]).lines[0])
    assert len(data["vertices"]) == 16


def test_json_payload(tmp_path):
    path = tmp_path / "out.json"
    assert main(["--json", str(path), "cop-number", "D2p", "--monotone"]) == 0
    assert json.loads(path.read_text())["cop_number"] == 4


def test_export_dot():
    for obj in (["bramble_D"], ["dtd_NCW_D2"], ["strategy_monotone_D2p"]):
        text = run(["export-dot"] + obj).lines[0]
        assert text.startswith("digraph")


def test_threads_do_not_change_output():
    a = run(["--threads", "1", "game", "D2", "-k", "4"])
    b = run(["--threads", "4", "game", "D2", "-k", "4"])
    assert a.lines == b.lines


def test_repro_is_idempotent():
    a = run(["repro", "1"])
    b = run(["repro", "certificates"])
    assert a.code == b.code == 0
    strip = lambda lines: [re.sub(r" in [0-9.]+s", "", ln) for ln in lines]
    assert strip(a.lines) == strip(b.lines)
