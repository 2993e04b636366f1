import json
import subprocess
import sys

import numpy as np
import pytest

from sepfaces import cli
from sepfaces import gallery as g
from sepfaces.tensor_core import kernel_of


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    return code, (json.loads(out[-1]) if out else None)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.mark.parametrize("section", ["s3", "s4", "s5", "s6"])
def test_reproduce_sections_pass(capsys, section):
    code, report = run(capsys, "reproduce", section)
    assert code == 0
    assert report["command"] == "reproduce"
    assert report["claims"] and all(c["pass"] for c in report["claims"])
    assert set(report) == {"command", "params", "claims", "result", "elapsed_ms", "seed"}


def test_reproduce_other_parameters(capsys):
    code, _ = run(capsys, "reproduce", "s3", "--b", "3")
    assert code == 0
    code, report = run(capsys, "reproduce", "s4", "--b", "3", "--theta-frac-pi", "-4")
    assert code == 0
    assert report["params"]["theta_frac_pi"] == -4


def test_reproduce_domain_error(capsys):
    code = cli.main(["reproduce", "s3", "--b", "1"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_failed_claim_exit_code(capsys, monkeypatch):
    def bad(args, cfg, claims):
        claims.add("impossible", 1.0, 2.0, 1e-9)
        return {}
    monkeypatch.setattr(cli, "cmd_gallery", bad)
    code, report = run(capsys, "gallery", "rho_b")
    assert code == 1
    assert report["claims"][0]["pass"] is False


def test_claims_bookkeeping():
    c = cli.Claims()
    assert c.add("close", 1.0, 1.0 + 1e-12, 1e-9)
    assert not c.below("small", 1e-3, 1e-6)
    assert not c.all_pass
    assert [i["pass"] for i in c.items] == [True, False]


def test_find_products_kernel_of_rho_b(capsys, tmp_path):
    path = write(tmp_path, "rho.json", g.rho_b(2.0).to_json())
    code, report = run(capsys, "find-products", path)
    assert code == 0
    res = report["result"]
    assert res["dim"] == 5 and res["agreement"] is True
    assert res["locator"]["complete"] and len(res["locator"]["vectors"]) == 6


def test_find_products_subspace_input(capsys, tmp_path):
    path = write(tmp_path, "sub.json", kernel_of(g.rho_b(2.0)).to_json())
    code, report = run(capsys, "find-products", path)
    assert code == 0 and report["result"]["agreement"]


def test_find_products_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["find-products", str(bad)]) == 2
    wrong = write(tmp_path, "wrong.json", {"m": 3, "n": 3})
    assert cli.main(["find-products", wrong]) == 2
    assert cli.main(["find-products", str(tmp_path / "missing.json")]) == 2


def test_certify(capsys, tmp_path):
    fam = [p.to_json() for p in g.six_products_b(2.0)]
    path = write(tmp_path, "fam.json", {"family": fam})
    code, report = run(capsys, "certify", path)
    assert code == 0
    res = report["result"]
    assert res["general_position"] is True


def test_extract_edge(capsys, tmp_path):
    s = write(tmp_path, "s.json", g.drop_one_b(2.0, 3).to_json())
    r = write(tmp_path, "r.json", g.center_b(2.0).to_json())
    code, report = run(capsys, "extract-edge", s, r)
    assert code == 0
    assert abs(report["result"]["epsilon_star"] - 0.2) < 1e-8
    assert report["result"]["rank_type"] == [4, 4]


def test_extract_edge_degenerate(capsys, tmp_path):
    r = write(tmp_path, "r.json", g.center_b(2.0).to_json())
    assert cli.main(["extract-edge", r, r]) == 2


def test_gupb_search_deterministic(capsys):
    _, a = run(capsys, "--seed", "3", "gupb-search", "--count", "5")
    _, b = run(capsys, "--seed", "3", "gupb-search", "--count", "5")
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert a == b
    table = a["result"]["table"]
    assert sum(table.values()) + a["result"]["skipped"] == 5


def test_gallery_command(capsys):
    code, report = run(capsys, "gallery", "rho_b", "b=2")
    assert code == 0
    value = report["result"]["value"]
    assert value["m"] == 3 and value["n"] == 3


def test_json_out_and_pretty(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = cli.main(["--pretty", "--json-out", str(out), "gallery", "center_b", "b=2"])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(out.read_text())["command"] == "gallery"
    assert "gallery" in captured.err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sepfaces", "gallery", "rho_b", "b=2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"]["n"] == 3
