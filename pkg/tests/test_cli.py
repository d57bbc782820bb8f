import json
import xml.etree.ElementTree as ET

import pytest

from wepsim import specfile
from wepsim.cli import main
from wepsim.model import ConfigError, Protocol
from wepsim.report import read_csv

SVG = "{http://www.w3.org/2000/svg}"


def write_spec(tmp_path, text, name="exp.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_spec_defaults():
    spec = specfile.loads("")
    assert spec.protocols == [Protocol.WEP, Protocol.SEP, Protocol.LEACH]
    assert spec.seeds == list(range(1, 31))
    assert spec.base.n == 100 and spec.base.p_opt == 0.1


def test_spec_dotted_keys():
    spec = specfile.loads(
        """
        protocols = "wep, pegasis"
        n = 50
        bs.y = 175
        hetero.alpha = 1
        radio.packet_bits = 2000
        seeds.list = [4, 9]
        sweep.alpha = "1,2"
        output_dir = "o"
        """
    )
    assert spec.protocols == [Protocol.WEP, Protocol.PEGASIS]
    assert spec.base.n == 50 and spec.base.bs == (50.0, 175.0)
    assert spec.base.hetero.alpha == 1.0 and spec.base.radio.packet_bits == 2000
    assert spec.seeds == [4, 9] and spec.sweep_alpha == [1.0, 2.0]
    assert str(spec.output_dir) == "o"


@pytest.mark.parametrize(
    "text, message",
    [
        ('protocols = ["WEP", "HEARP"]', "HEARP"),
        ("p_opt = 0", "p_opt out of range"),
        ("colour = 3", "unknown key"),
        ("radio.gain = 3", "unknown key"),
        ("n = 2.5", "integer"),
        ("n = [", "malformed"),
        ("seeds.count = 0", "seed count"),
    ],
)
def test_spec_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        specfile.loads(text)


def test_run_counts_default_scenario(tmp_path, capsys):
    spec = write_spec(tmp_path, 'protocols = ["WEP", "SEP", "LEACH"]\n')
    out = tmp_path / "out"
    assert main(["run", "--spec", str(spec), "--out", str(out), "--seeds", "30"]) == 0
    doc = json.loads((out / "summary.json").read_text())
    assert sum(len(g["runs"]) for g in doc["groups"].values()) == 90
    assert sorted(p.name for p in out.glob("*.svg")) == ["energy.svg", "lifetime.svg", "regions.svg"]
    assert len(list(out.glob("*.json"))) == 1
    for proto in ("WEP", "SEP", "LEACH"):
        rows = read_csv(out / f"{proto}.csv")
        assert {r["seed"] for r in rows} == set(range(1, 31))
    printed = capsys.readouterr().out.splitlines()
    assert [line.split()[0] for line in printed] == ["WEP", "SEP", "LEACH"]
    assert all("FND=" in line and "HND=" in line and "LND=" in line for line in printed)


def test_unknown_protocol_exit(tmp_path, capsys):
    spec = write_spec(tmp_path, 'protocols = "WEP, BOGUS"\n')
    assert main(["run", "--spec", str(spec), "--out", str(tmp_path / "o")]) == 1
    assert "BOGUS" in capsys.readouterr().err


def test_missing_spec_file_exit(tmp_path, capsys):
    assert main(["run", "--spec", str(tmp_path / "nope.toml"), "--out", str(tmp_path)]) == 1
    assert "nope.toml" in capsys.readouterr().err


def test_output_dir_created(tmp_path):
    spec = write_spec(tmp_path, 'protocols = ["DIRECT"]\nseeds.count = 1\n')
    out = tmp_path / "a" / "b" / "c"
    assert main(["run", "--spec", str(spec), "--out", str(out)]) == 0
    assert (out / "DIRECT.csv").exists()


def test_output_dir_from_spec(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    spec = write_spec(tmp_path, 'protocols = ["DIRECT"]\nseeds.count = 1\noutput_dir = "from_spec"\n')
    assert main(["run", "--spec", str(spec)]) == 0
    assert (tmp_path / "from_spec" / "summary.json").exists()


def test_sweep_alpha_groups(tmp_path):
    spec = write_spec(tmp_path, 'protocols = ["WEP"]\n')
    out = tmp_path / "sw"
    assert main(["sweep", "--spec", str(spec), "--alpha", "1,2,3,4", "--m", "0.2",
                 "--seeds", "10", "--out", str(out)]) == 0
    doc = json.loads((out / "summary.json").read_text())
    assert sum(len(g["runs"]) for g in doc["groups"].values()) == 40
    root = ET.parse(out / "regions.svg").getroot()
    alphas = {b.attrib["data-alpha"] for b in root.iter(f"{SVG}rect") if b.attrib.get("class") == "bar"}
    assert alphas == {"1", "2", "3", "4"}
    rows = (out / "regions.csv").read_text().splitlines()
    assert rows[0].startswith("protocol,alpha,m,seeds,fnd")
    assert len(rows) == 5


def test_sweep_alpha_zero_sep_equals_leach(tmp_path):
    spec = write_spec(tmp_path, 'protocols = ["SEP", "LEACH"]\n')
    out = tmp_path / "zero"
    assert main(["sweep", "--spec", str(spec), "--alpha", "0", "--seeds", "5", "--out", str(out)]) == 0
    doc = json.loads((out / "summary.json").read_text())
    sep = doc["groups"]["SEP a=0 m=0.2"]["runs"]
    leach = doc["groups"]["LEACH a=0 m=0.2"]["runs"]
    strip = lambda runs: [{k: v for k, v in r.items() if k != "protocol"} for r in runs]
    assert strip(sep) == strip(leach)


def test_sweep_empty_alpha_is_usage_error(tmp_path):
    spec = write_spec(tmp_path, "")
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--spec", str(spec), "--alpha", "", "--out", str(tmp_path)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--spec", str(spec), "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_rerun_byte_identical(tmp_path):
    spec = write_spec(tmp_path, 'protocols = ["WEP", "PEGASIS"]\nseeds.count = 2\n')
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--spec", str(spec), "--out", str(a)]) == 0
    assert main(["run", "--spec", str(spec), "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_figures_command_layout(tmp_path, monkeypatch):
    import wepsim.cli as cli

    monkeypatch.setattr(cli, "FIGURE_PROTOCOLS", (Protocol.WEP, Protocol.LEACH))
    out = tmp_path / "figures"
    assert main(["figures", "--out", str(out), "--seeds", "2"]) == 0
    for a in (1, 2, 3, 4):
        assert (out / f"a{a}_m0.2" / "WEP.csv").exists()
    assert (out / "regions.svg").exists() and (out / "regions.csv").exists()
